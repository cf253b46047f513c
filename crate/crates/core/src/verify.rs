//! Property suites over exact model tensors and seeded random corpora.
//! Each suite returns a machine-readable report with a counterexample dump.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curvature::{h2q, h2q_by_contraction, h2q_by_star, h4, decompose, scalar_curv};
use crate::dfcore::{
    contract, double_star_is_odd, hodge_star, inner_product, metric_mult, metric_mult_via_star,
    metric_power, norm_sq, product, star_pairing, DoubleForm,
};
use crate::error::{Error, Result};
use crate::io::TensorFile;
use crate::models::{
    conformally_flat, conformally_flat_form, constant_curvature, einsteinize, h2q_conformally_flat,
    h2q_constant_curvature, h2q_hypersurface, h4_product, hypersurface, product_tensor,
    random_bianchi, random_traceless_symmetric,
};
use crate::neck::{norm_expansions, plan_bending, submersion_scaling_check, BendPolicy};
use crate::pcurv::{perturb, verify_theorem_a, Hypothesis};
use crate::scalar::{format_exact, Exact, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    DfcoreIdentities,
    Lemma21,
    H4Routes,
    Examples,
    Theorem31,
    TheoremA,
    NeckCoeffs,
    Scaling,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::DfcoreIdentities,
        Suite::Lemma21,
        Suite::H4Routes,
        Suite::Examples,
        Suite::Theorem31,
        Suite::TheoremA,
        Suite::NeckCoeffs,
        Suite::Scaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DfcoreIdentities => "dfcore-identities",
            Suite::Lemma21 => "lemma21",
            Suite::H4Routes => "h4-routes",
            Suite::Examples => "examples",
            Suite::Theorem31 => "theorem31",
            Suite::TheoremA => "theorem-a",
            Suite::NeckCoeffs => "neck-coeffs",
            Suite::Scaling => "scaling",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown suite '{s}', expected one of {}",
                    known.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Inclusive dimension range; each suite clamps it to its own domain.
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
    /// Corpus size per dimension (random suites) or planes per tensor
    /// (theorem-a). `None` picks the suite default.
    pub samples: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_min: 4,
            n_max: 6,
            seed: 0,
            samples: None,
        }
    }
}

impl VerifyConfig {
    fn dims(&self, lo: usize, hi: usize) -> Vec<usize> {
        (self.n_min.max(lo)..=self.n_max.min(hi)).collect()
    }

    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn case_seed(&self, n: usize, i: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add((n as u64) << 32 | i as u64)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<Value>,
    pub notes: Vec<String>,
    pub details: Value,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            passed: true,
            cases: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            details: Value::Null,
        }
    }

    fn absorb(&mut self, outcomes: Vec<Outcome>) {
        self.cases += outcomes.len();
        self.failures
            .extend(outcomes.into_iter().filter_map(|o| o.err()));
        self.passed = self.failures.is_empty();
    }

    fn check(&mut self, ok: bool, failure: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failures.push(failure());
            self.passed = false;
        }
    }
}

/// `Ok` or a JSON counterexample.
type Outcome = std::result::Result<(), Value>;

fn ensure(ok: bool, failure: impl FnOnce() -> Value) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(failure())
    }
}

fn tensor_dump(r: &crate::curvature::CurvatureTensor<Exact>) -> Value {
    serde_json::to_value(TensorFile::from_tensor(r)).unwrap_or(Value::Null)
}

fn ex(v: &Exact) -> Value {
    Value::String(format_exact(v))
}

fn q(v: i64) -> Exact {
    Exact::from_int(v)
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    if cfg.n_min > cfg.n_max {
        return Err(Error::InvalidParameter(format!(
            "empty dimension range {}..{}",
            cfg.n_min, cfg.n_max
        )));
    }
    match suite {
        Suite::DfcoreIdentities => dfcore_identities(cfg),
        Suite::Lemma21 => lemma21(cfg),
        Suite::H4Routes => h4_routes(cfg),
        Suite::Examples => examples(cfg),
        Suite::Theorem31 => theorem31(cfg),
        Suite::TheoremA => theorem_a(cfg),
        Suite::NeckCoeffs => Ok(neck_coeffs()),
        Suite::Scaling => scaling(cfg),
    }
}

/// Random form with integer coefficients in `[-3, 3]`, about half zero.
pub fn random_form(rng: &mut impl Rng, n: usize, p: usize, q: usize) -> DoubleForm<Exact> {
    let mut w = DoubleForm::zero(n, p, q);
    for c in w.coeffs_mut() {
        if rng.gen_bool(0.5) {
            *c = Exact::from_int(rng.gen_range(-3..=3));
        }
    }
    w
}

fn dfcore_case(n: usize, p: usize, qd: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_form(&mut rng, n, p, qd);
    let b = random_form(&mut rng, n, p, qd);
    let fail = |what: &str| json!({ "identity": what, "n": n, "p": p, "q": qd, "seed": seed });
    let err = |_| fail("evaluation error");

    // gω against the star route
    if p < n && qd < n {
        let g_a = metric_mult(&a).map_err(err)?;
        ensure(g_a == metric_mult_via_star(&a).map_err(err)?, || fail("g*w = *c*w"))?;
        if p == qd {
            let star_route = hodge_star(&contract(&hodge_star(&a)).map_err(err)?);
            ensure(g_a == star_route, || fail("g*w = *c*w (verbatim)"))?;
        }
    }
    // cω against the star route
    if p > 0 && qd > 0 && p == qd {
        let c_a = contract(&a).map_err(err)?;
        let star_route = hodge_star(&metric_mult(&hodge_star(&a)).map_err(err)?);
        ensure(c_a == star_route, || fail("c*w = *g*w"))?;
    }
    // double star
    let ss = hodge_star(&hodge_star(&a));
    let expected = if double_star_is_odd(n, p, qd) { -&a } else { a.clone() };
    ensure(ss == expected, || fail("**w = ±w"))?;
    // inner product
    let direct = inner_product(&a, &b).map_err(err)?;
    ensure(star_pairing(&a, &b).map_err(err)? == direct, || {
        fail("<a,b> = *(a·*b)")
    })?;
    // adjointness of g and c
    if p < n && qd < n {
        let big = random_form(&mut rng, n, p + 1, qd + 1);
        let lhs = inner_product(&metric_mult(&a).map_err(err)?, &big).map_err(err)?;
        let rhs = inner_product(&a, &contract(&big).map_err(err)?).map_err(err)?;
        ensure(lhs == rhs, || fail("<g a, b> = <a, c b>"))?;
    }
    Ok(())
}

fn dfcore_identities(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::DfcoreIdentities);
    let per = cfg.samples_or(2);
    let mut cases = Vec::new();
    for n in cfg.dims(1, 7) {
        for p in 0..=n {
            for qd in 0..=n {
                for i in 0..per {
                    cases.push((n, p, qd, cfg.case_seed(n, (p * 8 + qd) * per + i)));
                }
            }
        }
    }
    let outcomes = cases
        .par_iter()
        .map(|&(n, p, qd, seed)| dfcore_case(n, p, qd, seed))
        .collect();
    report.absorb(outcomes);
    Ok(report)
}

fn falling(from: usize, terms: usize) -> Exact {
    (0..terms).fold(q(1), |acc, i| acc * q(from as i64 - i as i64))
}

fn lemma_case(n: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fail = |what: String| json!({ "lemma": what, "n": n, "seed": seed });
    let err = |e: Error| fail(e.to_string());
    let mut effective: Vec<(usize, DoubleForm<Exact>)> = vec![(0, DoubleForm::scalar(n, q(1)))];
    effective.push((1, random_traceless_symmetric::<Exact>(n, &mut rng)));
    if n >= 4 {
        let r = random_bianchi::<Exact>(n, seed, 3);
        effective.push((2, decompose(&r).map_err(err)?.omega2));
    }
    for (deg, w) in &effective {
        ensure(*deg == 0 || contract(w).map_err(err)?.is_zero(), || {
            fail(format!("degree {deg} part is not effective"))
        })?;
        let base = norm_sq(w);
        for k in 0..=(n - 2 * deg) {
            let gw = product(&metric_power::<Exact>(n, k), w).map_err(err)?;
            let weight = falling(k, k) * falling(n - 2 * deg, k);
            ensure(norm_sq(&gw) == base.clone() * weight, || {
                fail(format!("|g^{k} w_{deg}|^2"))
            })?;
        }
    }
    // g^k ω_r ⟂ g^{k'} ω_{r'} at equal total degree, r ≠ r'
    for (i, (ra, wa)) in effective.iter().enumerate() {
        for (rb, wb) in &effective[i + 1..] {
            for k in 0..=(n - 2 * rb) {
                let ka = k + rb - ra;
                let lhs = product(&metric_power::<Exact>(n, ka), wa).map_err(err)?;
                let rhs = product(&metric_power::<Exact>(n, k), wb).map_err(err)?;
                ensure(inner_product(&lhs, &rhs).map_err(err)? == q(0), || {
                    fail(format!("g^{ka} w_{ra} not orthogonal to g^{k} w_{rb}"))
                })?;
            }
        }
    }
    Ok(())
}

fn lemma21(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Lemma21);
    let per = cfg.samples_or(8);
    let cases: Vec<_> = cfg
        .dims(2, 8)
        .into_iter()
        .flat_map(|n| (0..per).map(move |i| (n, i)))
        .collect();
    let outcomes = cases
        .par_iter()
        .map(|&(n, i)| lemma_case(n, cfg.case_seed(n, i)))
        .collect();
    report.absorb(outcomes);
    Ok(report)
}

fn routes_case(n: usize, seed: u64) -> Outcome {
    let r = random_bianchi::<Exact>(n, seed, 1 + (seed % 4) as usize);
    let fail = |what: String| json!({ "check": what, "n": n, "seed": seed, "tensor": tensor_dump(&r) });
    let rep = h4(&r).map_err(|e| fail(e.to_string()))?;
    ensure(
        rep.h4_direct == rep.h4_contraction && rep.h4_decomposed == rep.h4_contraction,
        || fail("three h4 routes".into()),
    )?;
    for k in 1..=n / 2 {
        let a = h2q_by_contraction(&r, k).map_err(|e| fail(e.to_string()))?;
        let b = h2q_by_star(&r, k).map_err(|e| fail(e.to_string()))?;
        ensure(a == b, || fail(format!("h_{} contraction vs star", 2 * k)))?;
    }
    Ok(())
}

fn h4_routes(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::H4Routes);
    let per = cfg.samples_or(20);
    let cases: Vec<_> = cfg
        .dims(4, 8)
        .into_iter()
        .flat_map(|n| (0..per).map(move |i| (n, i)))
        .collect();
    let outcomes = cases
        .par_iter()
        .map(|&(n, i)| routes_case(n, cfg.case_seed(n, i)))
        .collect();
    report.absorb(outcomes);
    Ok(report)
}

fn examples(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Examples);
    let lambdas = [q(-2), q(-1), q(1), q(2), Exact::from_frac(1, 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for n in cfg.dims(4, 8) {
        for l in &lambdas {
            let r = constant_curvature(n, l.clone());
            for k in 1..=n / 2 {
                let got = h2q(&r, k)?;
                let want = h2q_constant_curvature(n, l, k);
                report.check(got == want, || {
                    json!({ "example": "constant curvature", "n": n, "lambda": ex(l), "q": k,
                            "got": ex(&got), "expected": ex(&want) })
                });
            }
        }
        let eigs: Vec<Exact> = (0..n).map(|_| q(rng.gen_range(-3..=3))).collect();
        let hyp = hypersurface(&eigs);
        let conf = conformally_flat(&eigs);
        for k in 1..=3.min(n / 2) {
            let (got, want) = (h2q(&hyp, k)?, h2q_hypersurface(&eigs, k));
            report.check(got == want, || {
                json!({ "example": "hypersurface", "n": n, "q": k,
                        "eigenvalues": eigs.iter().map(ex).collect::<Vec<_>>(),
                        "got": ex(&got), "expected": ex(&want) })
            });
            let (got, want) = (h2q(&conf, k)?, h2q_conformally_flat(&eigs, k));
            report.check(got == want, || {
                json!({ "example": "conformally flat", "n": n, "q": k,
                        "eigenvalues": eigs.iter().map(ex).collect::<Vec<_>>(),
                        "got": ex(&got), "expected": ex(&want) })
            });
        }
        // h = g is constant curvature 2
        let ones = vec![q(1); n];
        let (got, want) = (
            h4(&conformally_flat(&ones))?.h4_contraction,
            h2q_constant_curvature(n, &q(2), 2),
        );
        report.check(got == want, || {
            json!({ "example": "conformally flat h = g", "n": n, "got": ex(&got), "expected": ex(&want) })
        });
    }
    // products of spheres and random factors
    for (n1, n2) in [(2usize, 2usize), (2, 3), (3, 3), (2, 4), (4, 4)] {
        if n1 + n2 > cfg.n_max.max(8) {
            continue;
        }
        let a = random_bianchi::<Exact>(n1, cfg.seed ^ n1 as u64, 2);
        let b = constant_curvature(n2, q(1));
        let h4_of = |r: &crate::curvature::CurvatureTensor<Exact>| crate::neck::h4_any(r);
        let got = h4_of(&product_tensor(&a, &b))?;
        let want = h4_product(&h4_of(&a)?, &scalar_curv(&a), &h4_of(&b)?, &scalar_curv(&b));
        report.check(got == want, || {
            json!({ "example": "product", "n1": n1, "n2": n2, "got": ex(&got), "expected": ex(&want) })
        });
    }
    Ok(report)
}

fn theorem31_case(n: usize, seed: u64) -> Outcome {
    let base = random_bianchi::<Exact>(n, seed, 1 + (seed % 3) as usize);
    let fail = |what: &str, r: &crate::curvature::CurvatureTensor<Exact>, h: &Exact| {
        json!({ "check": what, "n": n, "seed": seed, "h4": ex(h), "tensor": tensor_dump(r) })
    };
    let err = |e: Error| json!({ "check": "evaluation error", "error": e.to_string() });
    let einstein = einsteinize(&base).map_err(err)?;
    let h = h4(&einstein).map_err(err)?.h4_contraction;
    ensure(h > q(0) || (h == q(0) && einstein.is_zero()), || {
        fail("Einstein h4 >= 0 with equality only at zero", &einstein, &h)
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let traceless = random_traceless_symmetric::<Exact>(n, &mut rng);
    let conf = conformally_flat_form(&traceless).map_err(err)?;
    let h = h4(&conf).map_err(err)?.h4_contraction;
    ensure(h < q(0) || (h == q(0) && conf.is_zero()), || {
        fail("trace-free conformally flat h4 <= 0 with equality only at zero", &conf, &h)
    })?;
    Ok(())
}

fn theorem31(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Theorem31);
    let dims = cfg.dims(4, 8);
    if dims.is_empty() {
        return Err(Error::UnsupportedDimension {
            n: cfg.n_max,
            reason: "theorem31 needs n >= 4",
        });
    }
    let total = cfg.samples_or(200);
    let cases: Vec<_> = (0..total).map(|i| (dims[i % dims.len()], i)).collect();
    let outcomes = cases
        .par_iter()
        .map(|&(n, i)| theorem31_case(n, cfg.case_seed(n, i)))
        .collect();
    report.absorb(outcomes);
    report.cases *= 2;
    report.notes.push(format!(
        "{total} Einstein-ized tensors and {total} trace-free conformally flat tensors"
    ));
    Ok(report)
}

/// Perturbed round sphere `g²/2 + ε·D` with `ε = 1/(4·max|D|)` and `D` a
/// random Bianchi tensor.
pub fn perturbed_sphere(n: usize, seed: u64) -> crate::curvature::CurvatureTensor<Exact> {
    let base = constant_curvature(n, q(1));
    let dir = random_bianchi::<Exact>(n, seed, 2);
    let max = dir.form().max_abs().to_f64_lossy();
    if max == 0.0 {
        return base;
    }
    let denom = (4.0 * max).ceil() as i64;
    perturb(&base, &dir, &Exact::new(1.into(), denom.into()))
}

fn theorem_a(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::TheoremA);
    let dims = cfg.dims(4, 8);
    if dims.is_empty() {
        return Err(Error::UnsupportedDimension {
            n: cfg.n_max,
            reason: "theorem-a needs n >= 4",
        });
    }
    let planes = cfg.samples_or(2_000);
    let per = 4;
    let cases: Vec<_> = dims
        .iter()
        .flat_map(|&n| (0..per).map(move |i| (n, i)))
        .collect();
    let results = cases
        .iter()
        .map(|&(n, i)| {
            let seed = cfg.case_seed(n, i);
            let r = perturbed_sphere(n, seed);
            verify_theorem_a(&r, planes, seed).map(|rep| (seed, r, rep))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut held = 0;
    let mut min_h4: Option<Exact> = None;
    for (seed, r, rep) in &results {
        if rep.hypothesis != Hypothesis::Fails {
            held += 1;
            if min_h4.as_ref().is_none_or(|m| rep.h4 < *m) {
                min_h4 = Some(rep.h4.clone());
            }
        }
        report.check(!rep.counterexample, || {
            json!({ "n": rep.n, "p": rep.p, "seed": seed, "min_sampled_sp": rep.min_sampled_sp,
                    "h4": ex(&rep.h4), "tensor": tensor_dump(r) })
        });
    }
    report.notes.push(format!(
        "{held} of {} tensors had positive sampled p-curvature over {planes} planes",
        results.len()
    ));
    report.details = json!({
        "planes": planes,
        "hypothesis_held": held,
        "min_h4_when_held": min_h4.as_ref().map(ex),
    });
    Ok(report)
}

fn neck_coeffs() -> SuiteReport {
    let mut report = SuiteReport::new(Suite::NeckCoeffs);
    let mut sign_flags = Vec::new();
    for qd in 2..=12 {
        let e = norm_expansions(qd);
        let a = falling(qd - 1, 4) / q(4);
        report.check(e.recombined_h4.x4 == a && e.conservative_h4.x4 == a, || {
            json!({ "q": qd, "term": "sin^4/r^4", "got": ex(&e.recombined_h4.x4), "expected": ex(&a) })
        });
        report.check(e.recombined_h4.k2x2 == q(0), || {
            json!({ "q": qd, "term": "k^2", "got": ex(&e.recombined_h4.k2x2) })
        });
        let b = falling(qd - 1, 3) / q(2);
        report.check(e.recombined_h4.kx3 == b, || {
            json!({ "q": qd, "term": "k sin^3/r^3", "got": ex(&e.recombined_h4.kx3), "expected": ex(&b) })
        });
        sign_flags.push(e.k_term_sign_agrees);
    }
    for (qd, r, th) in [(5usize, 1.0, 0.3), (6, 0.5, 0.2)] {
        match plan_bending(qd, r, th, 0.0, &BendPolicy::default()) {
            Ok(plan) => report.check(
                plan.feasible
                    && (plan.final_theta - std::f64::consts::FRAC_PI_2).abs() < 1e-9
                    && plan.min_lower_bound > 0.0,
                || {
                    json!({ "planner": [qd, r, th], "feasible": plan.feasible,
                            "failure": plan.failure, "final_theta": plan.final_theta,
                            "min_lower_bound": plan.min_lower_bound })
                },
            ),
            Err(e) => report.check(false, || json!({ "planner": [qd, r, th], "error": e.to_string() })),
        }
    }
    if sign_flags.iter().any(|ok| !ok) {
        report.notes.push(norm_expansions(5).note.to_string());
    }
    report
}

fn scaling(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Scaling);
    let ts = [q(2), q(10), q(100)];
    let per = cfg.samples_or(4);
    for i in 0..per {
        let seed = cfg.case_seed(0, i);
        let nf = 2 + (seed % 3) as usize;
        let nb = 2 + ((seed >> 8) % 3) as usize;
        let fiber = random_bianchi::<Exact>(nf, seed, 2);
        let base = random_bianchi::<Exact>(nb, seed ^ 0xABCD, 2);
        let rep = submersion_scaling_check(&fiber, &base, &ts)?;
        for row in &rep.rows {
            report.check(row.holds(&rep.fiber_h4), || {
                json!({ "t": ex(&row.t), "n_fiber": nf, "n_base": nb, "seed": seed,
                        "remainder": ex(&row.remainder), "predicted": ex(&row.predicted_remainder) })
            });
        }
    }
    Ok(report)
}
