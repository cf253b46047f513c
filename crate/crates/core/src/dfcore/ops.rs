//! The ring operations on double forms.

use crate::dfcore::basis::{combinations, insert_parity, merge_parity, rank};
use crate::dfcore::form::DoubleForm;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exterior product in each slot, no factorial normalization:
/// `(e_I⊗e_J)·(e_K⊗e_L) = ±e_{I∪K}⊗e_{J∪L}` for disjoint index sets.
///
/// A bidegree exceeding `n` yields the (empty) zero form.
pub fn product<S: Scalar>(a: &DoubleForm<S>, b: &DoubleForm<S>) -> Result<DoubleForm<S>> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    let n = a.n();
    let (p, q) = a.bidegree();
    let (r, s) = b.bidegree();
    let mut out = DoubleForm::zero(n, p + r, q + s);
    if out.coeffs().is_empty() {
        return Ok(out);
    }

    let a_rows = combinations(n, p);
    let a_cols = combinations(n, q);
    let b_rows = combinations(n, r);
    let b_cols = combinations(n, s);
    let out_cols = out.cols();

    // non-zero column lists per row, so the inner loop only sees live entries
    let live = |f: &DoubleForm<S>, cols: &[u32]| -> Vec<Vec<(u32, usize)>> {
        let width = cols.len();
        (0..f.rows())
            .map(|row| {
                (0..width)
                    .filter(|&c| !f.coeffs()[row * width + c].is_zero())
                    .map(|c| (cols[c], row * width + c))
                    .collect()
            })
            .collect()
    };
    let a_live = live(a, a_cols);
    let b_live = live(b, b_cols);

    let (ac, bc) = (a.coeffs(), b.coeffs());
    let dst = out.coeffs_mut();
    for (ia, &row_i) in a_rows.iter().enumerate() {
        if a_live[ia].is_empty() {
            continue;
        }
        for (ib, &row_k) in b_rows.iter().enumerate() {
            if row_i & row_k != 0 || b_live[ib].is_empty() {
                continue;
            }
            let row_sign = merge_parity(row_i, row_k);
            let row_base = rank(row_i | row_k) * out_cols;
            for &(col_j, sa) in &a_live[ia] {
                for &(col_l, sb) in &b_live[ib] {
                    if col_j & col_l != 0 {
                        continue;
                    }
                    let sign = row_sign ^ merge_parity(col_j, col_l);
                    let slot = row_base + rank(col_j | col_l);
                    dst[slot].fma_signed(sign, &ac[sa], &bc[sb]);
                }
            }
        }
    }
    Ok(out)
}

/// `a^k` in the ring of double forms (`a⁰ = 1`).
pub fn power<S: Scalar>(a: &DoubleForm<S>, k: usize) -> Result<DoubleForm<S>> {
    let mut out = DoubleForm::scalar(a.n(), S::one());
    for _ in 0..k {
        out = product(&out, a)?;
    }
    Ok(out)
}

/// `gᵏ`, built by repeated products with the metric.
pub fn metric_power<S: Scalar>(n: usize, k: usize) -> DoubleForm<S> {
    power(&DoubleForm::metric(n), k).expect("metric powers share the frame dimension")
}

/// Multiplication by the metric, `g·a`.
pub fn metric_mult<S: Scalar>(a: &DoubleForm<S>) -> Result<DoubleForm<S>> {
    product(&DoubleForm::metric(a.n()), a)
}

/// Contraction `(cω)(x; y) = Σⱼ ω(eⱼ, x; eⱼ, y)`.
pub fn contract<S: Scalar>(a: &DoubleForm<S>) -> Result<DoubleForm<S>> {
    let (p, q) = a.bidegree();
    if p == 0 || q == 0 {
        return Err(Error::Degree(format!(
            "cannot contract a ({p},{q}) form"
        )));
    }
    let n = a.n();
    let mut out = DoubleForm::<S>::zero(n, p - 1, q - 1);
    let rows = combinations(n, p - 1);
    let cols = combinations(n, q - 1);
    let width = cols.len();
    let src_width = a.cols();
    let src = a.coeffs();
    let dst = out.coeffs_mut();
    for (ir, &x) in rows.iter().enumerate() {
        for (ic, &y) in cols.iter().enumerate() {
            let acc = &mut dst[ir * width + ic];
            for j in 0..n {
                let bit = 1u32 << j;
                if x & bit != 0 || y & bit != 0 {
                    continue;
                }
                let v = &src[rank(x | bit) * src_width + rank(y | bit)];
                if v.is_zero() {
                    continue;
                }
                if insert_parity(j, x) ^ insert_parity(j, y) {
                    acc.sub_assign_ref(v);
                } else {
                    acc.add_assign_ref(v);
                }
            }
        }
    }
    Ok(out)
}

/// `c^k a`.
pub fn contract_times<S: Scalar>(a: &DoubleForm<S>, k: usize) -> Result<DoubleForm<S>> {
    let mut out = a.clone();
    for _ in 0..k {
        out = contract(&out)?;
    }
    Ok(out)
}

/// Slot-wise Hodge star, `*(e_I⊗e_J) = ε(I,Iᶜ) ε(J,Jᶜ) e_{Iᶜ}⊗e_{Jᶜ}`.
pub fn hodge_star<S: Scalar>(a: &DoubleForm<S>) -> DoubleForm<S> {
    let n = a.n();
    let (p, q) = a.bidegree();
    let mut out = DoubleForm::zero(n, n.saturating_sub(p), n.saturating_sub(q));
    if p > n || q > n {
        return out;
    }
    for (row, col, v) in a.nonzero() {
        let (rc, cc) = (row.complement(n), col.complement(n));
        let odd = merge_parity(row.mask(), rc.mask()) ^ merge_parity(col.mask(), cc.mask());
        out.set(rc, cc, if odd { -v.clone() } else { v.clone() });
    }
    out
}

/// Sign exponent parity of `**` on 𝒟^{p,q}: `(p+q)(n−p−q)`.
pub fn double_star_is_odd(n: usize, p: usize, q: usize) -> bool {
    // p(n-p) + q(n-q) has the same parity and avoids negative intermediates
    (p * n.saturating_sub(p) + q * n.saturating_sub(q)) % 2 == 1
}

/// `g·a` through the star route, `±*c*a`. The sign is
/// `(−1)^{(p+q)(n−p−q+1)}`, trivial on the symmetric bidegrees `p = q`.
pub fn metric_mult_via_star<S: Scalar>(a: &DoubleForm<S>) -> Result<DoubleForm<S>> {
    let n = a.n();
    let (p, q) = a.bidegree();
    if p >= n || q >= n {
        return Ok(DoubleForm::zero(n, p + 1, q + 1));
    }
    let out = hodge_star(&contract(&hodge_star(a))?);
    let odd = (p + q) % 2 == 1 && (n + 1 + p + q) % 2 == 1;
    Ok(if odd { -&out } else { out })
}

/// Coefficient-wise inner product over increasing key pairs.
pub fn inner_product<S: Scalar>(a: &DoubleForm<S>, b: &DoubleForm<S>) -> Result<S> {
    a.check_same_shape(b)?;
    let mut acc = S::zero();
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        if !x.is_zero() && !y.is_zero() {
            acc.add_assign_ref(&x.mul_ref(y));
        }
    }
    Ok(acc)
}

/// `‖a‖²`.
pub fn norm_sq<S: Scalar>(a: &DoubleForm<S>) -> S {
    inner_product(a, a).expect("same shape")
}

/// Largest absolute cyclic sum `a(x,y;z,w) + a(y,z;x,w) + a(z,x;y,w)` over
/// frame 4-tuples. Zero exactly on the first-Bianchi subspace.
pub fn first_bianchi_defect<S: Scalar>(a: &DoubleForm<S>) -> Result<S> {
    if a.bidegree() != (2, 2) {
        let (p, q) = a.bidegree();
        return Err(Error::Degree(format!(
            "first Bianchi defect needs a (2,2) form, got ({p},{q})"
        )));
    }
    let n = a.n();
    let mut worst = S::zero();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let mut sum = a.eval(&[x, y], &[z, w]);
                    sum.add_assign_ref(&a.eval(&[y, z], &[x, w]));
                    sum.add_assign_ref(&a.eval(&[z, x], &[y, w]));
                    let sum = sum.abs();
                    if sum > worst {
                        worst = sum;
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// `*(a·*b)`, the star route to the inner product. The mirrored pairing
/// `*(*a·b)` equals `(−1)^{(p+q)(n−p−q)}` times this.
pub fn star_pairing<S: Scalar>(a: &DoubleForm<S>, b: &DoubleForm<S>) -> Result<S> {
    a.check_same_shape(b)?;
    let top = product(a, &hodge_star(b))?;
    hodge_star(&top).as_scalar()
}

