//! Model curvature tensors with known invariants, plus random generators.
//!
//! Closed-form invariants live next to their generators so that tests can
//! compare them against complete contraction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::{decompose, CurvatureTensor};
use crate::dfcore::{metric_power, product, DoubleForm, MultiIndex};
use crate::error::{Error, Result};
use crate::scalar::{factorial, powi, Scalar};

/// Constant sectional curvature `λ`: `R = (λ/2)g²`.
pub fn constant_curvature<S: Scalar>(n: usize, lambda: S) -> CurvatureTensor<S> {
    let half = lambda / S::from_int(2);
    CurvatureTensor::from_form_unchecked(metric_power::<S>(n, 2).scale(&half))
}

/// Riemannian product: block embedding on the direct-sum frame, with
/// `R₂`'s axes shifted past `R₁`'s.
pub fn product_tensor<S: Scalar>(
    r1: &CurvatureTensor<S>,
    r2: &CurvatureTensor<S>,
) -> CurvatureTensor<S> {
    let (n1, n2) = (r1.n(), r2.n());
    let mut out = DoubleForm::zero(n1 + n2, 2, 2);
    for (row, col, v) in r1.form().nonzero() {
        out.set(row, col, v.clone());
    }
    for (row, col, v) in r2.form().nonzero() {
        let shift = |m: MultiIndex| MultiIndex::from_mask(m.mask() << n1);
        out.set(shift(row), shift(col), v.clone());
    }
    CurvatureTensor::from_form_unchecked(out)
}

/// Hypersurface with diagonal second fundamental form `B`: `R = ½B²`.
pub fn hypersurface<S: Scalar>(eigenvalues: &[S]) -> CurvatureTensor<S> {
    let b = DoubleForm::diagonal(eigenvalues);
    let bb = product(&b, &b).expect("same frame");
    CurvatureTensor::from_form_unchecked(bb.scale(&S::from_frac(1, 2)))
}

/// Conformally flat tensor `R = g·h` for diagonal `h`.
pub fn conformally_flat<S: Scalar>(h_eigenvalues: &[S]) -> CurvatureTensor<S> {
    conformally_flat_form(&DoubleForm::diagonal(h_eigenvalues))
        .expect("diagonal forms are symmetric")
}

/// Conformally flat tensor `R = g·h` for any symmetric (1,1) form `h`.
pub fn conformally_flat_form<S: Scalar>(h: &DoubleForm<S>) -> Result<CurvatureTensor<S>> {
    if h.bidegree() != (1, 1) || !h.is_symmetric() {
        return Err(Error::InvalidParameter(
            "conformally flat tensors need a symmetric (1,1) form".into(),
        ));
    }
    let gh = product(&DoubleForm::metric(h.n()), h)?;
    Ok(CurvatureTensor::from_form_unchecked(gh))
}

/// Curvature of `g_t = t·g` expressed in a `g_t`-orthonormal frame
/// `eᵢ/√t`: every component is divided by `t`, so `h_{2q}` scales by
/// `t^{−q}`.
pub fn scale_metric<S: Scalar>(r: &CurvatureTensor<S>, t: &S) -> Result<CurvatureTensor<S>> {
    if *t <= S::zero() {
        return Err(Error::InvalidParameter(format!(
            "metric scale must be positive, got {t}"
        )));
    }
    let inv = S::one() / t.clone();
    Ok(CurvatureTensor::from_form_unchecked(r.form().scale(&inv)))
}

/// Symmetric (1,1) form with integer entries in `[-3, 3]`.
pub fn random_symmetric_form<S: Scalar>(n: usize, rng: &mut impl Rng) -> DoubleForm<S> {
    let mut entries = vec![S::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let v = S::from_int(rng.gen_range(-3..=3));
            entries[i * n + j] = v.clone();
            entries[j * n + i] = v;
        }
    }
    DoubleForm::from_matrix(n, &entries).expect("n*n entries")
}

/// `R = Σᵢ cᵢ·hᵢ·hᵢ` with `terms` random symmetric `hᵢ` and `cᵢ = ±½`.
/// Each `h·h` satisfies the first Bianchi identity, so the sum does too.
pub fn random_bianchi<S: Scalar>(n: usize, seed: u64, terms: usize) -> CurvatureTensor<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = DoubleForm::zero(n, 2, 2);
    for _ in 0..terms {
        let h = random_symmetric_form::<S>(n, &mut rng);
        let c = if rng.gen_bool(0.5) {
            S::from_frac(1, 2)
        } else {
            S::from_frac(-1, 2)
        };
        let hh = product(&h, &h).expect("same frame").scale(&c);
        acc = acc.try_add(&hh).expect("same shape");
    }
    CurvatureTensor::from_form_unchecked(acc)
}

/// Traceless symmetric `h` drawn like [`random_symmetric_form`] and then
/// projected off the metric.
pub fn random_traceless_symmetric<S: Scalar>(n: usize, rng: &mut impl Rng) -> DoubleForm<S> {
    let h = random_symmetric_form::<S>(n, rng);
    let trace = (0..n)
        .map(|i| h.eval(&[i], &[i]))
        .fold(S::zero(), |a, b| a + b);
    let g = DoubleForm::<S>::metric(n);
    h.try_sub(&g.scale(&(trace / S::from_int(n as i64))))
        .expect("same shape")
}

/// Removes the traceless-Ricci part, `R − g·ω₁`. Scalar and Weyl parts are
/// untouched.
pub fn einsteinize<S: Scalar>(r: &CurvatureTensor<S>) -> Result<CurvatureTensor<S>> {
    let d = decompose(r)?;
    let g_omega1 = product(&DoubleForm::metric(r.n()), &d.omega1)?;
    Ok(CurvatureTensor::from_form_unchecked(r.form().try_sub(&g_omega1)?))
}

/// `σ_k(values)`, by the usual one-pass recurrence.
pub fn elementary_symmetric<S: Scalar>(values: &[S], k: usize) -> S {
    let mut e = vec![S::zero(); k + 1];
    e[0] = S::one();
    for v in values {
        for j in (1..=k).rev() {
            let term = e[j - 1].mul_ref(v);
            e[j].add_assign_ref(&term);
        }
    }
    e.swap_remove(k)
}

fn ratio_of_factorials<S: Scalar>(num: &[usize], den: &[usize]) -> S {
    let top = num.iter().fold(S::one(), |a, &k| a * factorial::<S>(k));
    let bottom = den.iter().fold(S::one(), |a, &k| a * factorial::<S>(k));
    top / bottom
}

/// `h_{2q} = λ^q n!/(2^q (n−2q)!)` for constant curvature `λ`.
pub fn h2q_constant_curvature<S: Scalar>(n: usize, lambda: &S, q: usize) -> S {
    let two_q = powi(&S::from_int(2), q as i32);
    powi(lambda, q as i32) * ratio_of_factorials::<S>(&[n], &[n - 2 * q]) / two_q
}

/// `h_{2q} = (2q)!/2^q · σ_{2q}(λ)` for a hypersurface.
pub fn h2q_hypersurface<S: Scalar>(eigenvalues: &[S], q: usize) -> S {
    let two_q = powi(&S::from_int(2), q as i32);
    factorial::<S>(2 * q) / two_q * elementary_symmetric(eigenvalues, 2 * q)
}

/// `h_{2q} = (n−q)! q!/(n−2q)! · σ_q(λ)` for `R = g·h`.
pub fn h2q_conformally_flat<S: Scalar>(h_eigenvalues: &[S], q: usize) -> S {
    let n = h_eigenvalues.len();
    ratio_of_factorials::<S>(&[n - q, q], &[n - 2 * q]) * elementary_symmetric(h_eigenvalues, q)
}

/// Binomial product law `h_{2q}(R₁+R₂) = Σ C(q,i) h_{2i}(R₁) h_{2q−2i}(R₂)`.
/// Both slices are indexed by `i`, starting with `h₀ = 1`.
pub fn h2q_product<S: Scalar>(first: &[S], second: &[S], q: usize) -> S {
    (0..=q)
        .filter(|&i| i < first.len() && q - i < second.len())
        .map(|i| {
            let c = ratio_of_factorials::<S>(&[q], &[i, q - i]);
            c * first[i].clone() * second[q - i].clone()
        })
        .fold(S::zero(), |a, b| a + b)
}

/// `h₄ = h₄,₁ + ½ scal₁ scal₂ + h₄,₂` for a product.
pub fn h4_product<S: Scalar>(h4_1: &S, scal_1: &S, h4_2: &S, scal_2: &S) -> S {
    h4_1.clone() + scal_1.clone() * scal_2.clone() / S::from_int(2) + h4_2.clone()
}
