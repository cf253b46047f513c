#![allow(dead_code)]

use doubleform::dfcore::{combinations, DoubleForm, MultiIndex};
use doubleform::{Exact, Scalar};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(v: i64) -> Exact {
    Exact::from_int(v)
}

pub fn frac(a: i64, b: i64) -> Exact {
    Exact::from_frac(a, b)
}

/// Random rational entry with small numerator and denominator.
pub fn small_rational(rng: &mut impl Rng) -> Exact {
    Exact::from_frac(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn random_form(rng: &mut impl Rng, n: usize, p: usize, q: usize) -> DoubleForm<Exact> {
    let mut f = DoubleForm::zero(n, p, q);
    for &i in combinations(n, p) {
        for &j in combinations(n, q) {
            f.set(MultiIndex::from_mask(i), MultiIndex::from_mask(j), small_rational(rng));
        }
    }
    f
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, p: usize) -> DoubleForm<Exact> {
    let f = random_form(rng, n, p, p);
    (&f + &f.transpose()).scale(&frac(1, 2))
}

/// Parity of a permutation given as a list of distinct values, by counting
/// inversions pairwise.
pub fn perm_odd(seq: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// All size-`k` sublists of an increasing list.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = subsets(&items[1..], k);
    for mut rest in subsets(&items[1..], k - 1) {
        rest.insert(0, items[0]);
        out.push(rest);
    }
    out
}

fn minus(items: &[usize], drop: &[usize]) -> Vec<usize> {
    items.iter().copied().filter(|i| !drop.contains(i)).collect()
}

/// Independent product: the shuffle-sum formula
/// `(a·b)(X;Y) = Σ sgn σ sgn τ a(X_σ; Y_τ) b(X_σ'; Y_τ')`, evaluated on
/// multilinear values.
pub fn oracle_product(a: &DoubleForm<Exact>, b: &DoubleForm<Exact>) -> DoubleForm<Exact> {
    let n = a.n();
    let (p, q) = a.bidegree();
    let (r, s) = b.bidegree();
    let mut out = DoubleForm::zero(n, p + r, q + s);
    for &xm in combinations(n, p + r) {
        let x: Vec<usize> = MultiIndex::from_mask(xm).indices().collect();
        for &ym in combinations(n, q + s) {
            let y: Vec<usize> = MultiIndex::from_mask(ym).indices().collect();
            let mut acc = q0();
            for xa in subsets(&x, p) {
                let xb = minus(&x, &xa);
                let sx = perm_odd(&[xa.clone(), xb.clone()].concat());
                for ya in subsets(&y, q) {
                    let yb = minus(&y, &ya);
                    let sy = perm_odd(&[ya.clone(), yb.clone()].concat());
                    let term = a.eval(&xa, &ya) * b.eval(&xb, &yb);
                    if sx ^ sy {
                        acc -= term;
                    } else {
                        acc += term;
                    }
                }
            }
            out.set(MultiIndex::from_mask(xm), MultiIndex::from_mask(ym), acc);
        }
    }
    out
}

/// Independent contraction via multilinear evaluation.
pub fn oracle_contract(a: &DoubleForm<Exact>) -> DoubleForm<Exact> {
    let n = a.n();
    let (p, q) = a.bidegree();
    let mut out = DoubleForm::zero(n, p - 1, q - 1);
    for &xm in combinations(n, p - 1) {
        let x: Vec<usize> = MultiIndex::from_mask(xm).indices().collect();
        for &ym in combinations(n, q - 1) {
            let y: Vec<usize> = MultiIndex::from_mask(ym).indices().collect();
            let mut acc = q0();
            for j in 0..n {
                let mut row = vec![j];
                row.extend(&x);
                let mut col = vec![j];
                col.extend(&y);
                acc += a.eval(&row, &col);
            }
            out.set(MultiIndex::from_mask(xm), MultiIndex::from_mask(ym), acc);
        }
    }
    out
}

fn q0() -> Exact {
    Exact::from_int(0)
}

/// Elementary symmetric polynomial by subset enumeration.
pub fn esp_bruteforce(values: &[Exact], k: usize) -> Exact {
    let idx: Vec<usize> = (0..values.len()).collect();
    subsets(&idx, k)
        .into_iter()
        .map(|s| s.iter().fold(q(1), |acc, &i| acc * values[i].clone()))
        .fold(q0(), |a, b| a + b)
}

pub fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

pub fn fact(k: usize) -> i64 {
    (1..=k as i64).product()
}
