//! Leading-order `h₄` of the surgery neck `S^m × S^{q−1}(r) × ℝ`, the
//! bending-curve planner, and the submersion scaling law in the exact
//! product case.
//!
//! All neck formulas drop the remainder terms; they are leading-order only.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{h2q, h4_formal, scalar_curv, CurvatureTensor};
use crate::error::{Error, Result};
use crate::models::{product_tensor, scale_metric};
use crate::scalar::{format_exact, powi, Exact, Scalar};

/// Parameters of one point of the neck.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NeckParams {
    /// Dimension of the sphere being surgered.
    pub m: usize,
    /// Codimension.
    pub q: usize,
    /// Tube radius.
    pub r: f64,
    /// Angle between the normal of the hypersurface and the t-axis.
    pub theta: f64,
    /// Curvature of the profile curve.
    pub k: f64,
    /// `h₄` of the `S^m × D^q` model at `θ = 0`.
    pub h4_base: f64,
}

impl NeckParams {
    pub fn validate(&self) -> Result<()> {
        if self.r.is_nan() || self.r <= 0.0 || !self.r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tube radius must be positive, got {}",
                self.r
            )));
        }
        if !(0.0..=FRAC_PI_2).contains(&self.theta) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, pi/2], got {}",
                self.theta
            )));
        }
        if self.k.is_nan() || self.k < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "curve curvature must be nonnegative, got {}",
                self.k
            )));
        }
        Ok(())
    }
}

fn falling(q: usize, terms: usize) -> f64 {
    (1..=terms).map(|i| q as f64 - i as f64).product()
}

/// `h4_base + (q−1)(q−2)(q−3)(q−4)/(4r⁴)·sin⁴θ − (q−1)(q−2)(q−3)·k/(2r³)·sin³θ`
pub fn h4_neck_leading(p: &NeckParams) -> Result<f64> {
    p.validate()?;
    let s = p.theta.sin();
    let quartic = falling(p.q, 4) / (4.0 * p.r.powi(4)) * s.powi(4);
    let cubic = falling(p.q, 3) * p.k / (2.0 * p.r.powi(3)) * s.powi(3);
    Ok(p.h4_base + quartic - cubic)
}

/// `h4_base + (q−1)(q−2)(q−3)/(2r³)·sin³θ·(sinθ/(2r) − k)`, a lower bound
/// for the leading terms once `q ≥ 5`.
pub fn h4_neck_lower_bound(p: &NeckParams) -> Result<f64> {
    p.validate()?;
    if p.q < 5 {
        return Err(Error::InvalidParameter(format!(
            "the neck lower bound needs codimension q >= 5, got {}",
            p.q
        )));
    }
    let s = p.theta.sin();
    Ok(p.h4_base + falling(p.q, 3) / (2.0 * p.r.powi(3)) * s.powi(3) * (s / (2.0 * p.r) - p.k))
}

/// Leading polynomial in `x = sinθ/r` and `k`: `x4·x⁴ + k2x2·k²x² + kx3·k·x³`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingPoly {
    pub x4: Exact,
    pub k2x2: Exact,
    pub kx3: Exact,
}

impl LeadingPoly {
    pub fn evaluate(&self, x: f64, k: f64) -> f64 {
        self.x4.to_f64_lossy() * x.powi(4)
            + self.k2x2.to_f64_lossy() * k * k * x * x
            + self.kx3.to_f64_lossy() * k * x.powi(3)
    }

    fn combine(a: &Self, b: &Self, c: &Self, wb: &Exact, wc: &Exact) -> Self {
        LeadingPoly {
            x4: a.x4.clone() + wb * &b.x4 + wc * &c.x4,
            k2x2: a.k2x2.clone() + wb * &b.k2x2 + wc * &c.k2x2,
            kx3: a.kx3.clone() + wb * &b.kx3 + wc * &c.kx3,
        }
    }
}

impl Serialize for LeadingPoly {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LeadingPoly", 3)?;
        st.serialize_field("x4", &format_exact(&self.x4))?;
        st.serialize_field("k2x2", &format_exact(&self.k2x2))?;
        st.serialize_field("kx3", &format_exact(&self.kx3))?;
        st.end()
    }
}

/// Leading-order corrections to `‖R‖²`, `‖Ric‖²` and `scal²` on the neck,
/// their recombination into `h₄`, and the conservative `h₄` expansion used
/// by the neck bounds.
#[derive(Clone, Debug, Serialize)]
pub struct NormExpansions {
    pub q: usize,
    pub norm_r: LeadingPoly,
    pub norm_ricci: LeadingPoly,
    pub scal_sq: LeadingPoly,
    /// `norm_r − norm_ricci + ¼·scal_sq`
    pub recombined_h4: LeadingPoly,
    /// The `h₄` expansion used by the bounds, with `−` on the `k` term.
    pub conservative_h4: LeadingPoly,
    /// Whether the recombined and conservative `k·x³` coefficients agree.
    pub k_term_sign_agrees: bool,
    pub note: &'static str,
}

const K_TERM_NOTE: &str = "recombining the norm expansions gives +(q-1)(q-2)(q-3)/2 on k*sin^3(theta)/r^3, \
     the conservative h4 expansion used by the bounds carries -(q-1)(q-2)(q-3)/2; the \
     planner keeps the conservative sign";

pub fn norm_expansions(q: usize) -> NormExpansions {
    let z = |v: i64| Exact::from_int(v);
    let q1 = z(q as i64 - 1);
    let q2 = z(q as i64 - 2);
    let q3 = z(q as i64 - 3);
    let q4 = z(q as i64 - 4);
    let qq = z(q as i64);

    let norm_r = LeadingPoly {
        x4: &q1 * &q2 / z(2),
        k2x2: q1.clone(),
        kx3: z(0),
    };
    let norm_ricci = LeadingPoly {
        x4: &q1 * &q2 * &q2,
        k2x2: &qq * &q1,
        kx3: -(&q1 * &q2 * &q2),
    };
    let scal_sq = LeadingPoly {
        x4: &q1 * &q1 * &q2 * &q2,
        k2x2: z(4) * &q1 * &q1,
        kx3: z(-2) * &q1 * &q1 * &q2,
    };
    let recombined_h4 =
        LeadingPoly::combine(&norm_r, &norm_ricci, &scal_sq, &z(-1), &Exact::from_frac(1, 4));
    let conservative_h4 = LeadingPoly {
        x4: &q1 * &q2 * &q3 * &q4 / z(4),
        k2x2: z(0),
        kx3: -(&q1 * &q2 * &q3) / z(2),
    };
    NormExpansions {
        q,
        k_term_sign_agrees: recombined_h4.kx3 == conservative_h4.kx3,
        norm_r,
        norm_ricci,
        scal_sq,
        recombined_h4,
        conservative_h4,
        note: K_TERM_NOTE,
    }
}

/// A point of the profile curve `γ` in the `(r, t)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NeckState {
    /// Arc length.
    pub s: f64,
    pub r: f64,
    pub t: f64,
    pub theta: f64,
    /// Scheduled curvature at `s`.
    pub k: f64,
    pub h4_leading: f64,
    pub h4_lower_bound: f64,
}

/// Shape of the bending bumps and straight runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BendPolicy {
    /// Plateau height as a fraction of the cap `sinθ/(2r)` at bump start.
    pub plateau_fraction: f64,
    /// Length of each linear ramp as a fraction of the bump length.
    pub ramp_fraction: f64,
    /// Bump arc length as a fraction of the radius at bump start.
    pub bump_length_fraction: f64,
    /// Straight-run length as a fraction of the current radius.
    pub straight_fraction: f64,
    /// Nominal step is `r_start / step_divisor`.
    pub step_divisor: f64,
    /// Minimum number of steps per bump; the step shrinks below nominal
    /// once bumps get short.
    pub min_steps_per_bump: usize,
    pub max_bumps: usize,
    /// Smallest admissible angle gain per bump.
    pub min_delta_theta: f64,
}

impl Default for BendPolicy {
    fn default() -> Self {
        BendPolicy {
            plateau_fraction: 0.9,
            ramp_fraction: 0.25,
            bump_length_fraction: 0.5,
            straight_fraction: 0.1,
            step_divisor: 1000.0,
            min_steps_per_bump: 200,
            max_bumps: 10_000,
            min_delta_theta: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BumpSummary {
    pub index: usize,
    pub s_start: f64,
    pub length: f64,
    pub r_start: f64,
    pub theta_start: f64,
    pub k_plateau: f64,
    pub delta_theta: f64,
    pub delta_r: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BendingPlan {
    pub q: usize,
    pub r_start: f64,
    pub theta0: f64,
    pub h4_base: f64,
    pub feasible: bool,
    pub failure: Option<String>,
    pub final_theta: f64,
    pub final_r: f64,
    pub min_lower_bound: f64,
    pub min_leading: f64,
    pub max_k_ratio: f64,
    pub bumps: Vec<BumpSummary>,
    #[serde(skip)]
    pub states: Vec<NeckState>,
}

/// Curvature profile of one bump: linear ramps around a plateau.
struct Bump {
    length: f64,
    ramp: f64,
    height: f64,
}

impl Bump {
    fn k_at(&self, s: f64) -> f64 {
        if s <= 0.0 || s >= self.length {
            0.0
        } else if s < self.ramp {
            self.height * s / self.ramp
        } else if s > self.length - self.ramp {
            self.height * (self.length - s) / self.ramp
        } else {
            self.height
        }
    }

    /// `∫₀ˢ k`, exact for the piecewise-linear profile.
    fn integral_to(&self, s: f64) -> f64 {
        let (a, l, h) = (self.ramp, self.length, self.height);
        let s = s.clamp(0.0, l);
        if s <= a {
            0.5 * h * s * s / a
        } else if s <= l - a {
            0.5 * h * a + h * (s - a)
        } else {
            let rest = l - s;
            h * (l - a) - 0.5 * h * rest * rest / a
        }
    }

    fn total(&self) -> f64 {
        self.height * (self.length - self.ramp)
    }
}

struct Integrator<'a> {
    q: usize,
    h4_base: f64,
    state: NeckState,
    states: &'a mut Vec<NeckState>,
    min_lower_bound: f64,
    min_leading: f64,
    max_k_ratio: f64,
}

impl Integrator<'_> {
    fn record(&mut self, k: f64) -> Result<()> {
        let params = NeckParams {
            m: 0,
            q: self.q,
            r: self.state.r,
            theta: self.state.theta.min(FRAC_PI_2),
            k,
            h4_base: self.h4_base,
        };
        self.state.k = k;
        self.state.h4_leading = h4_neck_leading(&params)?;
        self.state.h4_lower_bound = h4_neck_lower_bound(&params)?;
        self.min_lower_bound = self.min_lower_bound.min(self.state.h4_lower_bound);
        self.min_leading = self.min_leading.min(self.state.h4_leading);
        let cap = params.theta.sin() / (2.0 * params.r);
        if k > 0.0 {
            self.max_k_ratio = self.max_k_ratio.max(k / cap);
        }
        self.states.push(self.state);
        Ok(())
    }

    /// Advances by `h` with angle gain `dtheta` (the exact integral of `k`
    /// over the step), using the midpoint angle for the position update.
    fn step(&mut self, h: f64, dtheta: f64, k_end: f64) -> Result<()> {
        let mid = self.state.theta + 0.5 * dtheta;
        self.state.r -= mid.cos() * h;
        self.state.t += mid.sin() * h;
        self.state.theta += dtheta;
        self.state.s += h;
        if self.state.r <= 0.0 {
            return Err(Error::InvalidParameter("profile curve crossed the t-axis".into()));
        }
        self.record(k_end)
    }

    fn straight(&mut self, length: f64, h: f64) -> Result<()> {
        let steps = (length / h).ceil().max(1.0) as usize;
        let h = length / steps as f64;
        for _ in 0..steps {
            self.step(h, 0.0, 0.0)?;
        }
        Ok(())
    }

    fn bump(&mut self, bump: &Bump, h: f64) -> Result<()> {
        let steps = (bump.length / h).ceil().max(1.0) as usize;
        let h = bump.length / steps as f64;
        for i in 0..steps {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            let dtheta = bump.integral_to(b) - bump.integral_to(a);
            self.step(h, dtheta, bump.k_at(b))?;
        }
        Ok(())
    }
}

fn validate_plan_inputs(q: usize, r_start: f64, theta0: f64) -> Result<()> {
    if q < 5 {
        return Err(Error::InvalidParameter(format!(
            "bending needs codimension q >= 5 for the quartic neck term to dominate, got q = {q}"
        )));
    }
    if r_start.is_nan() || r_start <= 0.0 || !r_start.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "r_start must be positive, got {r_start}"
        )));
    }
    if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "theta0 must lie in (0, pi/2), got {theta0}"
        )));
    }
    Ok(())
}

/// Bends the profile curve from angle `θ₀` up to `π/2` by alternating
/// straight runs and curvature bumps whose plateau stays below
/// `sinθ/(2r)` evaluated at the bump start. Since `θ` grows and `r` shrinks
/// along the curve, the cap holds pointwise. Each bump has arc length
/// `bump_length_fraction·r` (so `Δr ≤ Δs ≤ r/2`) and angle gain at most
/// `sinθ/4`. The last bump is scaled down to land on `π/2` exactly.
pub fn plan_bending(
    q: usize,
    r_start: f64,
    theta0: f64,
    h4_base: f64,
    policy: &BendPolicy,
) -> Result<BendingPlan> {
    validate_plan_inputs(q, r_start, theta0)?;
    let mut states = Vec::new();
    let mut bumps = Vec::new();
    let nominal_h = r_start / policy.step_divisor;
    let mut run = Integrator {
        q,
        h4_base,
        state: NeckState {
            s: 0.0,
            r: r_start,
            t: 0.0,
            theta: theta0,
            k: 0.0,
            h4_leading: 0.0,
            h4_lower_bound: 0.0,
        },
        states: &mut states,
        min_lower_bound: f64::INFINITY,
        min_leading: f64::INFINITY,
        max_k_ratio: 0.0,
    };
    run.record(0.0)?;

    let mut failure = None;
    let outcome: Result<()> = (|| {
        while run.state.theta < FRAC_PI_2 {
            if bumps.len() >= policy.max_bumps {
                failure = Some(format!(
                    "no total bend of pi/2 within {} bumps",
                    policy.max_bumps
                ));
                return Ok(());
            }
            let straight = policy.straight_fraction * run.state.r;
            run.straight(straight, nominal_h)?;

            let (r_c, theta_c) = (run.state.r, run.state.theta);
            let cap = theta_c.sin() / (2.0 * r_c);
            let length = policy.bump_length_fraction * r_c;
            let mut bump = Bump {
                length,
                ramp: policy.ramp_fraction * length,
                height: policy.plateau_fraction * cap,
            };
            let remaining = FRAC_PI_2 - theta_c;
            let full = bump.total();
            if full < policy.min_delta_theta {
                failure = Some(format!(
                    "angle gain per bump {full:e} is below the step tolerance {:e}",
                    policy.min_delta_theta
                ));
                return Ok(());
            }
            if full > remaining {
                bump.height *= remaining / full;
            }
            let h = nominal_h.min(length / policy.min_steps_per_bump as f64);
            let s_start = run.state.s;
            run.bump(&bump, h)?;
            bumps.push(BumpSummary {
                index: bumps.len(),
                s_start,
                length,
                r_start: r_c,
                theta_start: theta_c,
                k_plateau: bump.height,
                delta_theta: run.state.theta - theta_c,
                delta_r: r_c - run.state.r,
            });
            if (run.state.theta - FRAC_PI_2).abs() < 1e-12 {
                run.state.theta = FRAC_PI_2;
            }
        }
        // the curve then continues vertically at constant r
        let tail = policy.straight_fraction * run.state.r;
        run.straight(tail, nominal_h)
    })();
    outcome?;

    let (min_lower_bound, min_leading, max_k_ratio) =
        (run.min_lower_bound, run.min_leading, run.max_k_ratio);
    let last = *states.last().expect("initial state recorded");
    Ok(BendingPlan {
        q,
        r_start,
        theta0,
        h4_base,
        feasible: failure.is_none(),
        failure,
        final_theta: last.theta,
        final_r: last.r,
        min_lower_bound,
        min_leading,
        max_k_ratio,
        bumps,
        states,
    })
}

/// Writes `s,r,t,theta,k,h4_leading,h4_lower_bound` rows at 17 significant
/// digits.
pub fn write_states_csv<W: Write>(states: &[NeckState], mut out: W) -> std::io::Result<()> {
    writeln!(out, "s,r,t,theta,k,h4_leading,h4_lower_bound")?;
    for st in states {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            st.s, st.r, st.t, st.theta, st.k, st.h4_leading, st.h4_lower_bound
        )?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub eps: f64,
    pub feasible: bool,
    pub bumps: usize,
    pub final_r: f64,
    pub min_lower_bound: f64,
    /// Leading `h₄` once the curve is vertical: `h4_base + (q−1)…(q−4)/(4r⁴)`.
    pub h4_vertical: f64,
}

/// Runs the planner for each starting radius in `eps`, in parallel.
pub fn sweep_radii(
    q: usize,
    eps: &[f64],
    theta0: f64,
    h4_base: f64,
    policy: &BendPolicy,
) -> Result<Vec<SweepRow>> {
    eps.par_iter()
        .map(|&e| {
            let plan = plan_bending(q, e, theta0, h4_base, policy)?;
            let vertical = h4_neck_leading(&NeckParams {
                m: 0,
                q,
                r: plan.final_r,
                theta: FRAC_PI_2,
                k: 0.0,
                h4_base,
            })?;
            Ok(SweepRow {
                eps: e,
                feasible: plan.feasible,
                bumps: plan.bumps.len(),
                final_r: plan.final_r,
                min_lower_bound: plan.min_lower_bound,
                h4_vertical: vertical,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "eps,feasible,bumps,final_r,min_lower_bound,h4_vertical")?;
    for row in rows {
        writeln!(
            out,
            "{:.16e},{},{},{:.16e},{:.16e},{:.16e}",
            row.eps, row.feasible, row.bumps, row.final_r, row.min_lower_bound, row.h4_vertical
        )?;
    }
    Ok(())
}

/// `h₄` in any dimension: complete contraction when `n ≥ 4`, otherwise the
/// formal expression (which vanishes there).
pub fn h4_any<S: Scalar>(r: &CurvatureTensor<S>) -> Result<S> {
    if r.n() >= 4 {
        h2q(r, 2)
    } else {
        Ok(h4_formal(r))
    }
}

#[derive(Clone, Debug)]
pub struct ScalingRow {
    pub t: Exact,
    /// `h₄` of `t²g_F ⊕ g_B` by complete contraction.
    pub h4_t: Exact,
    /// `t⁻⁴·h₄(F)`
    pub leading: Exact,
    pub remainder: Exact,
    /// `t⁻²·½·scal_F·scal_B + h₄(B)`
    pub predicted_remainder: Exact,
    /// `t⁴(h₄(t) − h₄(B) − t⁻²·½·scal_F·scal_B)`, which must equal `h₄(F)`.
    pub rescaled_fiber_term: Exact,
}

impl ScalingRow {
    pub fn holds(&self, fiber_h4: &Exact) -> bool {
        self.remainder == self.predicted_remainder && &self.rescaled_fiber_term == fiber_h4
    }
}

#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub fiber_h4: Exact,
    pub base_h4: Exact,
    pub fiber_scal: Exact,
    pub base_scal: Exact,
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds(&self.fiber_h4))
    }

    /// `remainder − t⁻²·½·scal_F·scal_B` at every `t`; constant `h₄(B)`.
    pub fn residual_constants(&self) -> Vec<Exact> {
        let half = Exact::from_frac(1, 2);
        self.rows
            .iter()
            .map(|row| {
                let t2 = powi(&row.t, -2);
                row.remainder.clone() - t2 * &half * &self.fiber_scal * &self.base_scal
            })
            .collect()
    }
}

/// Product model `t²g_F ⊕ g_B` of a Riemannian submersion with totally
/// geodesic fibers: checks `h₄(t) = t⁻⁴h₄(F) + t⁻²·½·scal_F·scal_B + h₄(B)`
/// exactly for each `t`.
pub fn submersion_scaling_check(
    fiber: &CurvatureTensor<Exact>,
    base: &CurvatureTensor<Exact>,
    ts: &[Exact],
) -> Result<ScalingReport> {
    let fiber_h4 = h4_any(fiber)?;
    let base_h4 = h4_any(base)?;
    let fiber_scal = scalar_curv(fiber);
    let base_scal = scalar_curv(base);
    let half = Exact::from_frac(1, 2);
    let rows = ts
        .iter()
        .map(|t| {
            let t2 = t * t;
            let scaled = scale_metric(fiber, &t2)?;
            let h4_t = h4_any(&product_tensor(&scaled, base))?;
            let leading = powi(t, -4) * &fiber_h4;
            let cross = powi(t, -2) * &half * &fiber_scal * &base_scal;
            let predicted_remainder = cross.clone() + &base_h4;
            let rescaled_fiber_term = powi(t, 4) * (h4_t.clone() - &base_h4 - &cross);
            Ok(ScalingRow {
                t: t.clone(),
                remainder: h4_t.clone() - &leading,
                h4_t,
                leading,
                predicted_remainder,
                rescaled_fiber_term,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingReport {
        fiber_h4,
        base_h4,
        fiber_scal,
        base_scal,
        rows,
    })
}
