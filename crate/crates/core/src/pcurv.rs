//! p-curvature on tangent planes and sampled checks of the implication
//! "positive p-curvature ⇒ positive h₄" for `p = ⌊(n+1)/2⌋`.
//!
//! Sampling never certifies positivity on the whole Grassmannian; reports
//! keep "sampled" and "certified" hypotheses apart. Only constant-curvature
//! inputs, where `s_p` has a closed form, are certified.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{h4, scalar_curv, CurvatureTensor};
use crate::dfcore::{combinations, metric_power, MultiIndex};
use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar};

/// Tolerance on the Gram matrix of a plane's spanning vectors.
pub const GRAM_TOLERANCE: f64 = 1e-12;

const CHUNK: usize = 64;

/// A tangent p-plane given by `p` orthonormal vectors of ℝⁿ.
#[derive(Clone, Debug)]
pub struct PPlane {
    n: usize,
    vectors: Vec<DVector<f64>>,
}

impl PPlane {
    pub fn new(n: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let vectors: Vec<DVector<f64>> = vectors
            .into_iter()
            .map(|v| {
                if v.len() == n {
                    Ok(DVector::from_vec(v))
                } else {
                    Err(Error::DimensionMismatch(v.len(), n))
                }
            })
            .collect::<Result<_>>()?;
        let deviation = gram_deviation(&vectors);
        if deviation > GRAM_TOLERANCE {
            return Err(Error::NotOrthonormal(deviation));
        }
        Ok(PPlane { n, vectors })
    }

    /// The zero-dimensional plane.
    pub fn empty(n: usize) -> Self {
        PPlane {
            n,
            vectors: Vec::new(),
        }
    }

    /// Plane spanned by frame axes.
    pub fn coordinate(n: usize, axes: &[usize]) -> Result<Self> {
        let vectors = axes
            .iter()
            .map(|&a| {
                let mut v = vec![0.0; n];
                *v.get_mut(a).ok_or_else(|| {
                    Error::InvalidParameter(format!("axis {a} outside n = {n}"))
                })? = 1.0;
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, vectors)
    }

    /// Uniform random plane: Gaussian frame, then QR.
    pub fn random(n: usize, p: usize, rng: &mut impl Rng) -> Self {
        if p == 0 {
            return Self::empty(n);
        }
        let gauss = DMatrix::<f64>::from_fn(n, p, |_, _| rng.sample(StandardNormal));
        let q = gauss.qr().q();
        PPlane {
            n,
            vectors: (0..p).map(|j| q.column(j).into_owned()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    /// Orthonormal basis of `P⊥`, by Gram–Schmidt over the frame axes.
    pub fn orthogonal_complement(&self) -> Vec<DVector<f64>> {
        let mut basis: Vec<DVector<f64>> = self.vectors.clone();
        let start = basis.len();
        for axis in 0..self.n {
            if basis.len() == self.n {
                break;
            }
            let mut v = DVector::<f64>::zeros(self.n);
            v[axis] = 1.0;
            // two passes keep the result orthogonal to machine precision
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&v);
                    v.axpy(-c, b, 1.0);
                }
            }
            let norm = v.norm();
            if norm > 1e-8 {
                basis.push(v / norm);
            }
        }
        basis.split_off(start)
    }
}

fn gram_deviation(vectors: &[DVector<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.dot(b) - target).abs());
        }
    }
    worst
}

/// Curvature tensor as a float quadratic form on Λ²: `R(u,v;w,z) =
/// (u∧v)ᵀ M (w∧z)`.
#[derive(Clone, Debug)]
pub struct CurvatureOperator {
    n: usize,
    pairs: Vec<(usize, usize)>,
    matrix: DMatrix<f64>,
}

impl CurvatureOperator {
    pub fn new<S: Scalar>(r: &CurvatureTensor<S>) -> Self {
        let n = r.n();
        let masks = combinations(n, 2);
        let pairs = masks
            .iter()
            .map(|&m| {
                let mut it = MultiIndex::from_mask(m).indices();
                (it.next().unwrap(), it.next().unwrap())
            })
            .collect();
        let form = r.form();
        let matrix = DMatrix::from_fn(masks.len(), masks.len(), |i, j| {
            form.get(MultiIndex::from_mask(masks[i]), MultiIndex::from_mask(masks[j]))
                .to_f64_lossy()
        });
        CurvatureOperator { n, pairs, matrix }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn wedge(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.pairs.len(),
            self.pairs.iter().map(|&(a, b)| u[a] * v[b] - u[b] * v[a]),
        )
    }

    pub fn eval(
        &self,
        u: &DVector<f64>,
        v: &DVector<f64>,
        w: &DVector<f64>,
        z: &DVector<f64>,
    ) -> f64 {
        self.wedge(u, v).dot(&(&self.matrix * self.wedge(w, z)))
    }

    /// `R(u,v;u,v)`, the unnormalized sectional curvature.
    pub fn biquadratic(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let w = self.wedge(u, v);
        w.dot(&(&self.matrix * &w))
    }

    /// `Σ_{i≠j} R(fᵢ,fⱼ;fᵢ,fⱼ)` over an orthonormal family.
    pub fn trace_on(&self, basis: &[DVector<f64>]) -> f64 {
        let mut sum = 0.0;
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                sum += self.biquadratic(&basis[i], &basis[j]);
            }
        }
        2.0 * sum
    }

    /// `s_p(P)` for a plane of this operator's dimension.
    pub fn p_curvature(&self, plane: &PPlane) -> Result<f64> {
        if plane.n() != self.n {
            return Err(Error::DimensionMismatch(plane.n(), self.n));
        }
        if plane.dim() + 2 > self.n {
            return Err(Error::Degree(format!(
                "p-curvature needs p <= n - 2, got p = {} with n = {}",
                plane.dim(),
                self.n
            )));
        }
        Ok(self.trace_on(&plane.orthogonal_complement()))
    }
}

/// Sectional curvature `R(e,f;e,f)` of an orthonormal pair.
pub fn sectional<S: Scalar>(r: &CurvatureTensor<S>, e: &[f64], f: &[f64]) -> Result<f64> {
    let plane = PPlane::new(r.n(), vec![e.to_vec(), f.to_vec()])?;
    let op = CurvatureOperator::new(r);
    Ok(op.biquadratic(&plane.vectors[0], &plane.vectors[1]))
}

/// p-curvature of `R` at the plane `P`.
pub fn p_curvature<S: Scalar>(r: &CurvatureTensor<S>, plane: &PPlane) -> Result<f64> {
    CurvatureOperator::new(r).p_curvature(plane)
}

/// The degree `⌊(n+1)/2⌋` for which positivity of `s_p` forces `h₄ > 0`.
pub fn theorem_a_degree(n: usize) -> usize {
    n.div_ceil(2)
}

/// Minimum of `s_p` over `samples` random planes. Chunks draw from
/// independent streams, so the value does not depend on the thread count.
pub fn sampled_min_p_curvature(op: &CurvatureOperator, p: usize, samples: usize, seed: u64) -> f64 {
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            (0..count)
                .map(|_| {
                    let plane = PPlane::random(op.n(), p, &mut rng);
                    op.p_curvature(&plane).expect("p <= n - 2")
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// `λ` when `R = (λ/2)g²` exactly (or within tolerance for floats).
pub fn constant_curvature_value<S: Scalar>(r: &CurvatureTensor<S>) -> Option<S> {
    let n = r.n();
    if n < 2 {
        return None;
    }
    let lambda = scalar_curv(r) / S::from_int((n * (n - 1)) as i64);
    let model = metric_power::<S>(n, 2).scale(&(lambda.clone() / S::from_int(2)));
    r.form()
        .approx_eq(&model, crate::scalar::DEFAULT_TOLERANCE)
        .then_some(lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    /// Closed form shows `s_p > 0` on every plane.
    Certified,
    /// Every sampled plane had `s_p > 0`; not a proof.
    SampledPositive,
    /// Some sampled plane had `s_p ≤ 0`; the implication says nothing.
    Fails,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremAReport<S> {
    pub n: usize,
    pub p: usize,
    pub samples: usize,
    pub min_sampled_sp: f64,
    pub hypothesis: Hypothesis,
    pub h4: S,
    /// Hypothesis holds (sampled or certified) yet `h₄ ≤ 0`.
    pub counterexample: bool,
}

/// Samples `s_p` with `p = ⌊(n+1)/2⌋` and, whenever the sampled minimum is
/// positive, checks the conclusion `h₄ > 0` with `h₄` computed in the
/// tensor's own backend.
pub fn verify_theorem_a<S: Scalar>(
    r: &CurvatureTensor<S>,
    samples: usize,
    seed: u64,
) -> Result<TheoremAReport<S>> {
    let n = r.n();
    if n < 4 {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "the p-curvature criterion needs n >= 4",
        });
    }
    let p = theorem_a_degree(n);
    let op = CurvatureOperator::new(r);
    let min_sampled_sp = sampled_min_p_curvature(&op, p, samples, seed);
    let h4 = h4(r)?.h4_contraction;

    let certified = constant_curvature_value(r).is_some_and(|l| l > S::zero());
    let hypothesis = if certified {
        Hypothesis::Certified
    } else if min_sampled_sp > 0.0 {
        Hypothesis::SampledPositive
    } else {
        Hypothesis::Fails
    };
    let counterexample = hypothesis != Hypothesis::Fails && h4 <= S::zero();
    Ok(TheoremAReport {
        n,
        p,
        samples,
        min_sampled_sp,
        hypothesis,
        h4,
        counterexample,
    })
}

/// Largest dyadic `ε ∈ (0, 1]` found by bisection such that
/// `base + ε·direction` has positive sampled `s_p`, `p = ⌊(n+1)/2⌋`.
/// Returns `None` when even the smallest step fails.
pub fn positive_perturbation(
    base: &CurvatureTensor<Exact>,
    direction: &CurvatureTensor<Exact>,
    samples: usize,
    seed: u64,
    steps: usize,
) -> Option<Exact> {
    let p = theorem_a_degree(base.n());
    let positive = |eps: &Exact| {
        let r = perturb(base, direction, eps);
        sampled_min_p_curvature(&CurvatureOperator::new(&r), p, samples, seed) > 0.0
    };
    let one = Exact::from_int(1);
    if positive(&one) {
        return Some(one);
    }
    let (mut lo, mut hi) = (Exact::from_int(0), one);
    for _ in 0..steps {
        let mid = (lo.clone() + hi.clone()) / Exact::from_int(2);
        if positive(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo > Exact::from_int(0)).then_some(lo)
}

/// `base + ε·direction`.
pub fn perturb(
    base: &CurvatureTensor<Exact>,
    direction: &CurvatureTensor<Exact>,
    eps: &Exact,
) -> CurvatureTensor<Exact> {
    let form = base
        .form()
        .try_add(&direction.form().scale(eps))
        .expect("perturbation must share the frame");
    CurvatureTensor::from_form_unchecked(form)
}
