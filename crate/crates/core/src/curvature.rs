//! Algebraic curvature tensors, their orthogonal decomposition and the
//! H. Weyl invariants.

use serde::Serialize;

use crate::dfcore::{
    contract, contract_times, first_bianchi_defect, hodge_star, metric_power, norm_sq, power,
    product, DoubleForm,
};
use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar, DEFAULT_TOLERANCE};

/// Symmetric (2,2) double form satisfying the first Bianchi identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<S> {
    form: DoubleForm<S>,
}

impl<S: Scalar> CurvatureTensor<S> {
    /// Validates slot symmetry and the first Bianchi identity. Exact
    /// backends require both to hold exactly; floats use `tol`.
    pub fn new(form: DoubleForm<S>, tol: f64) -> Result<Self> {
        if form.bidegree() != (2, 2) {
            let (p, q) = form.bidegree();
            return Err(Error::Degree(format!(
                "a curvature tensor is a (2,2) form, got ({p},{q})"
            )));
        }
        if !form.is_symmetric_within(tol) {
            return Err(Error::NotSymmetric);
        }
        let defect = first_bianchi_defect(&form)?;
        if !defect.near(&S::zero(), tol) {
            return Err(Error::BianchiDefect {
                defect: defect.to_string(),
            });
        }
        Ok(CurvatureTensor { form })
    }

    pub fn from_form(form: DoubleForm<S>) -> Result<Self> {
        Self::new(form, DEFAULT_TOLERANCE)
    }

    /// Skips validation. Callers must only pass forms that are symmetric
    /// Bianchi forms by construction.
    pub(crate) fn from_form_unchecked(form: DoubleForm<S>) -> Self {
        debug_assert_eq!(form.bidegree(), (2, 2));
        CurvatureTensor { form }
    }

    pub fn zero(n: usize) -> Self {
        CurvatureTensor {
            form: DoubleForm::zero(n, 2, 2),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.form.n()
    }

    #[inline]
    pub fn form(&self) -> &DoubleForm<S> {
        &self.form
    }

    pub fn into_form(self) -> DoubleForm<S> {
        self.form
    }

    /// `R(eᵢ,eⱼ;eₖ,eₗ)`.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> S {
        self.form.eval(&[i, j], &[k, l])
    }

    pub fn to_f64(&self) -> CurvatureTensor<f64> {
        CurvatureTensor {
            form: self.form.to_f64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }
}

/// `R = ω₂ + g·ω₁ + g²·ω₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylDecomposition<S> {
    pub omega0: S,
    /// Traceless symmetric (1,1) part.
    pub omega1: DoubleForm<S>,
    /// Effective symmetric (2,2) part, the Weyl tensor.
    pub omega2: DoubleForm<S>,
}

impl<S: Scalar> WeylDecomposition<S> {
    /// `ω₂ + gω₁ + g²ω₀`.
    pub fn reconstruct(&self) -> Result<DoubleForm<S>> {
        let n = self.omega2.n();
        let g = DoubleForm::metric(n);
        let g_omega1 = product(&g, &self.omega1)?;
        let g2_omega0 = metric_power::<S>(n, 2).scale(&self.omega0);
        self.omega2.try_add(&g_omega1)?.try_add(&g2_omega0)
    }
}

/// Norms and the invariants `h_{2q}` of a curvature tensor. The three `h₄`
/// fields come from independent formulas and must agree.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport<S> {
    pub n: usize,
    pub h2q: Vec<(usize, S)>,
    pub norm_r_sq: S,
    pub norm_ricci_sq: S,
    pub scal_sq: S,
    pub scal: S,
    pub norm_omega0_sq: S,
    pub norm_omega1_sq: S,
    pub norm_omega2_sq: S,
    /// `‖R‖² − ‖cR‖² + ¼‖c²R‖²`
    pub h4_direct: S,
    /// Weighted norms of the orthogonal decomposition.
    pub h4_decomposed: S,
    /// Complete contraction `c⁴R²/4!`.
    pub h4_contraction: S,
    pub einstein: bool,
    pub einstein_deviation: f64,
}

impl<S: Scalar> InvariantReport<S> {
    pub fn h4(&self) -> &S {
        &self.h4_contraction
    }

    pub fn routes_agree(&self, tol: f64) -> bool {
        self.h4_direct.near_rel(&self.h4_contraction, tol)
            && self.h4_decomposed.near_rel(&self.h4_contraction, tol)
    }
}

/// Outcome of the Einstein test `cR = (c²R/n)·g`.
#[derive(Clone, Debug, PartialEq)]
pub struct EinsteinCheck<S> {
    pub is_einstein: bool,
    /// `‖cR − (c²R/n)g‖²`, which equals `(n−2)²‖ω₁‖²`.
    pub deviation_sq: S,
    pub deviation: f64,
}

fn require_dim(n: usize, min: usize, reason: &'static str) -> Result<()> {
    if n < min {
        Err(Error::UnsupportedDimension { n, reason })
    } else {
        Ok(())
    }
}

/// Ricci contraction `cR`.
pub fn ricci<S: Scalar>(r: &CurvatureTensor<S>) -> DoubleForm<S> {
    contract(&r.form).expect("(2,2) forms contract")
}

/// Scalar curvature `c²R`.
pub fn scalar_curv<S: Scalar>(r: &CurvatureTensor<S>) -> S {
    contract_times(&r.form, 2)
        .and_then(|f| f.as_scalar())
        .expect("(2,2) forms contract twice to a scalar")
}

/// Orthogonal decomposition with `ω₀ = c²R/(2n(n−1))`,
/// `ω₁ = (cR − g·c²R/n)/(n−2)` and `ω₂ = R − gω₁ − g²ω₀`.
pub fn decompose<S: Scalar>(r: &CurvatureTensor<S>) -> Result<WeylDecomposition<S>> {
    let n = r.n();
    require_dim(n, 4, "the Weyl decomposition needs n >= 4")?;
    let nn = S::from_int(n as i64);
    let ric = ricci(r);
    let scal = scalar_curv(r);
    let g = DoubleForm::<S>::metric(n);

    let omega0 = scal.clone() / (S::from_int(2) * nn.clone() * (nn.clone() - S::one()));
    let traceless = ric.try_sub(&g.scale(&(scal / nn.clone())))?;
    let omega1 = traceless.scale(&(S::one() / (nn - S::from_int(2))));
    let omega2 = r
        .form
        .try_sub(&product(&g, &omega1)?)?
        .try_sub(&metric_power::<S>(n, 2).scale(&omega0))?;
    Ok(WeylDecomposition {
        omega0,
        omega1,
        omega2,
    })
}

/// `c^{2q}(R^q)/(2q)!`
pub fn h2q_by_contraction<S: Scalar>(r: &CurvatureTensor<S>, q: usize) -> Result<S> {
    check_h2q_degree(r.n(), q)?;
    let rq = power(&r.form, q)?;
    let full = contract_times(&rq, 2 * q)?.as_scalar()?;
    Ok(full / factorial::<S>(2 * q))
}

/// `*(g^{n−2q}R^q)/(n−2q)!`
pub fn h2q_by_star<S: Scalar>(r: &CurvatureTensor<S>, q: usize) -> Result<S> {
    check_h2q_degree(r.n(), q)?;
    let n = r.n();
    let rq = power(&r.form, q)?;
    let top = product(&metric_power::<S>(n, n - 2 * q), &rq)?;
    Ok(hodge_star(&top).as_scalar()? / factorial::<S>(n - 2 * q))
}

fn check_h2q_degree(n: usize, q: usize) -> Result<()> {
    if q == 0 || 2 * q > n {
        return Err(Error::Degree(format!(
            "h_2q needs 1 <= 2q <= n, got q = {q}, n = {n}"
        )));
    }
    Ok(())
}

/// The invariant `h_{2q}` by complete contraction, cross-checked against
/// the Hodge-star route.
pub fn h2q<S: Scalar>(r: &CurvatureTensor<S>, q: usize) -> Result<S> {
    let by_contraction = h2q_by_contraction(r, q)?;
    let by_star = h2q_by_star(r, q)?;
    if !by_contraction.near_rel(&by_star, DEFAULT_TOLERANCE) {
        return Err(Error::RouteMismatch {
            what: "h_2q (contraction vs star)",
            lhs: by_contraction.to_string(),
            rhs: by_star.to_string(),
        });
    }
    Ok(by_contraction)
}

/// `‖R‖² − ‖cR‖² + ¼(c²R)²`, defined in every dimension. It vanishes
/// identically for `n < 4`, which is how low-dimensional product factors
/// enter the product formula.
pub fn h4_formal<S: Scalar>(r: &CurvatureTensor<S>) -> S {
    let scal = scalar_curv(r);
    norm_sq(&r.form) - norm_sq(&ricci(r)) + scal.clone() * scal / S::from_int(4)
}

/// `‖ω₂‖², ‖ω₁‖², ‖ω₀‖²` from `‖R‖², ‖cR‖², (c²R)²` alone, cross-checked
/// against the norms of [`decompose`].
pub fn norm_formulas<S: Scalar>(r: &CurvatureTensor<S>) -> Result<(S, S, S)> {
    let n = r.n();
    require_dim(n, 4, "norm formulas need n >= 4")?;
    let (formula, direct) = (norm_formulas_from_norms(r), decomposition_norms(&decompose(r)?));
    let labels = ["|omega2|^2", "|omega1|^2", "|omega0|^2"];
    for ((a, b), what) in [&formula.0, &formula.1, &formula.2]
        .into_iter()
        .zip([&direct.0, &direct.1, &direct.2])
        .zip(labels)
    {
        if !a.near_rel(b, DEFAULT_TOLERANCE) {
            return Err(Error::RouteMismatch {
                what,
                lhs: a.to_string(),
                rhs: b.to_string(),
            });
        }
    }
    Ok(formula)
}

fn norm_formulas_from_norms<S: Scalar>(r: &CurvatureTensor<S>) -> (S, S, S) {
    let nn = S::from_int(r.n() as i64);
    let one = S::one();
    let two = S::from_int(2);
    let rr = norm_sq(&r.form);
    let ric = norm_sq(&ricci(r));
    let scal = scalar_curv(r);
    let ss = scal.clone() * scal;
    let n1 = nn.clone() - one;
    let n2 = nn.clone() - two.clone();

    let w2 = rr - ric.clone() / n2.clone() + ss.clone() / (two * n1.clone() * n2.clone());
    let w1 = (ric - ss.clone() / nn.clone()) / (n2.clone() * n2);
    let w0 = ss / (S::from_int(4) * nn.clone() * nn * n1.clone() * n1);
    (w2, w1, w0)
}

/// `(‖ω₂‖², ‖ω₁‖², ω₀²)` computed directly from the parts.
pub fn decomposition_norms<S: Scalar>(d: &WeylDecomposition<S>) -> (S, S, S) {
    (
        norm_sq(&d.omega2),
        norm_sq(&d.omega1),
        d.omega0.clone() * d.omega0.clone(),
    )
}

/// `[n!‖ω₀‖² − (n−2)!‖ω₁‖² + (n−4)!‖ω₂‖²]/(n−4)!`
pub fn h4_from_decomposition<S: Scalar>(n: usize, norms: &(S, S, S)) -> Result<S> {
    require_dim(n, 4, "h4 needs n >= 4")?;
    let base = factorial::<S>(n - 4);
    let (w2, w1, w0) = norms;
    let sum = factorial::<S>(n) * w0.clone() - factorial::<S>(n - 2) * w1.clone()
        + base.clone() * w2.clone();
    Ok(sum / base)
}

/// `h₄` by three independent routes plus the supporting norms and the
/// invariants `h₂` and `h₄`.
pub fn h4<S: Scalar>(r: &CurvatureTensor<S>) -> Result<InvariantReport<S>> {
    invariant_report(r, 2)
}

/// Like [`h4`] but with `h_{2q}` listed for every `q ≤ min(max_q, n/2)`.
pub fn invariant_report<S: Scalar>(
    r: &CurvatureTensor<S>,
    max_q: usize,
) -> Result<InvariantReport<S>> {
    let n = r.n();
    require_dim(n, 4, "h4 needs n >= 4")?;
    let decomposition = decompose(r)?;
    let norms = decomposition_norms(&decomposition);

    let h4_direct = h4_formal(r);
    let h4_decomposed = h4_from_decomposition(n, &norms)?;
    let h2q_list = (1..=max_q.max(2).min(n / 2))
        .map(|q| h2q(r, q).map(|v| (q, v)))
        .collect::<Result<Vec<_>>>()?;
    let h4_contraction = h2q_list[1].1.clone();

    let scal = scalar_curv(r);
    let einstein = einstein_check(r);
    let report = InvariantReport {
        n,
        h2q: h2q_list
            .into_iter()
            .filter(|(q, _)| *q <= max_q)
            .collect(),
        norm_r_sq: norm_sq(&r.form),
        norm_ricci_sq: norm_sq(&ricci(r)),
        scal_sq: scal.clone() * scal.clone(),
        scal,
        norm_omega0_sq: norms.2,
        norm_omega1_sq: norms.1,
        norm_omega2_sq: norms.0,
        h4_direct,
        h4_decomposed,
        h4_contraction,
        einstein: einstein.is_einstein,
        einstein_deviation: einstein.deviation,
    };
    if !report.routes_agree(DEFAULT_TOLERANCE) {
        return Err(Error::RouteMismatch {
            what: "h4 (direct / decomposed / contraction)",
            lhs: format!("{} / {}", report.h4_direct, report.h4_decomposed),
            rhs: report.h4_contraction.to_string(),
        });
    }
    Ok(report)
}

/// Tests `cR = (c²R/n)·g`; the deviation is the norm of the traceless
/// Ricci part.
pub fn einstein_check<S: Scalar>(r: &CurvatureTensor<S>) -> EinsteinCheck<S> {
    let n = r.n();
    let ric = ricci(r);
    let g = DoubleForm::<S>::metric(n);
    let mean = scalar_curv(r) / S::from_int(n as i64);
    let traceless = ric.try_sub(&g.scale(&mean)).expect("same shape");
    let deviation_sq = norm_sq(&traceless);
    let deviation = deviation_sq.to_f64_lossy().max(0.0).sqrt();
    EinsteinCheck {
        is_einstein: deviation_sq.near(&S::zero(), DEFAULT_TOLERANCE),
        deviation_sq,
        deviation,
    }
}
