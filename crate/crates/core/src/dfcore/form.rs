use std::ops::{Add, Neg, Sub};

use crate::dfcore::basis::{binomial, combinations, sort_indices, MultiIndex, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element of 𝒟^{p,q} on an `n`-dimensional orthonormal frame.
///
/// Coefficients are the values `ω(e_I; e_J)` on increasing index tuples,
/// stored densely as a `C(n,p) × C(n,q)` row-major table. A bidegree larger
/// than `n` in either slot has an empty table and is identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleForm<S> {
    n: usize,
    p: usize,
    q: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> DoubleForm<S> {
    pub fn zero(n: usize, p: usize, q: usize) -> Self {
        assert!(n <= MAX_DIM, "frame dimension {n} exceeds MAX_DIM");
        DoubleForm {
            n,
            p,
            q,
            coeffs: vec![S::zero(); binomial(n, p) * binomial(n, q)],
        }
    }

    /// Bidegree (0,0) form holding `value`.
    pub fn scalar(n: usize, value: S) -> Self {
        let mut out = Self::zero(n, 0, 0);
        out.coeffs[0] = value;
        out
    }

    /// The metric `g = Σ eᵢ⊗eᵢ`.
    pub fn metric(n: usize) -> Self {
        let mut out = Self::zero(n, 1, 1);
        for i in 0..n {
            out.coeffs[i * n + i] = S::one();
        }
        out
    }

    /// Builds a (1,1) form from a row-major `n × n` matrix.
    pub fn from_matrix(n: usize, entries: &[S]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(entries.len(), n * n));
        }
        Ok(DoubleForm {
            n,
            p: 1,
            q: 1,
            coeffs: entries.to_vec(),
        })
    }

    /// Diagonal (1,1) form `Σ λᵢ eᵢ⊗eᵢ`.
    pub fn diagonal(values: &[S]) -> Self {
        let n = values.len();
        let mut out = Self::zero(n, 1, 1);
        for (i, v) in values.iter().enumerate() {
            out.coeffs[i * n + i] = v.clone();
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        binomial(self.n, self.p)
    }

    #[inline]
    pub fn cols(&self) -> usize {
        binomial(self.n, self.q)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    #[inline]
    pub(crate) fn coeffs_mut(&mut self) -> &mut [S] {
        &mut self.coeffs
    }

    #[inline]
    pub(crate) fn slot(&self, row: MultiIndex, col: MultiIndex) -> usize {
        row.rank() * self.cols() + col.rank()
    }

    /// Coefficient at an increasing key pair.
    pub fn get(&self, row: MultiIndex, col: MultiIndex) -> &S {
        debug_assert_eq!(row.degree(), self.p);
        debug_assert_eq!(col.degree(), self.q);
        &self.coeffs[self.slot(row, col)]
    }

    pub fn set(&mut self, row: MultiIndex, col: MultiIndex, value: S) {
        assert_eq!(row.degree(), self.p, "row degree");
        assert_eq!(col.degree(), self.q, "column degree");
        let slot = self.slot(row, col);
        self.coeffs[slot] = value;
    }

    /// Value of the multilinear form on frame vectors, in any order.
    pub fn eval(&self, row: &[usize], col: &[usize]) -> S {
        assert_eq!(row.len(), self.p);
        assert_eq!(col.len(), self.q);
        let (Some((sr, mr)), Some((sc, mc))) = (sort_indices(row), sort_indices(col)) else {
            return S::zero();
        };
        let v = self.get(MultiIndex::from_mask(mr), MultiIndex::from_mask(mc)).clone();
        if sr ^ sc {
            -v
        } else {
            v
        }
    }

    /// Iterator over `(row, col, coefficient)` for the non-zero entries.
    pub fn nonzero(&self) -> impl Iterator<Item = (MultiIndex, MultiIndex, &S)> + '_ {
        let rows = combinations(self.n, self.p);
        let cols = combinations(self.n, self.q);
        let width = cols.len();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(slot, c)| {
                (
                    MultiIndex::from_mask(rows[slot / width]),
                    MultiIndex::from_mask(cols[slot % width]),
                    c,
                )
            })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> S {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .fold(S::zero(), |m, c| if c > m { c } else { m })
    }

    /// Value of a bidegree (0,0) form.
    pub fn as_scalar(&self) -> Result<S> {
        if self.p != 0 || self.q != 0 {
            return Err(Error::Degree(format!(
                "expected a (0,0) form, got ({},{})",
                self.p, self.q
            )));
        }
        Ok(self.coeffs[0].clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        DoubleForm {
            n: self.n,
            p: self.p,
            q: self.q,
            coeffs: self.coeffs.iter().map(|c| c.mul_ref(factor)).collect(),
        }
    }

    /// Exchanges the two slots.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.n, self.q, self.p);
        let (rows, cols) = (self.rows(), self.cols());
        for r in 0..rows {
            for c in 0..cols {
                out.coeffs[c * rows + r] = self.coeffs[r * cols + c].clone();
            }
        }
        out
    }

    /// Membership in the ring of curvature structures: `p = q` and
    /// slot-exchange invariance.
    pub fn is_symmetric(&self) -> bool {
        self.p == self.q && self.transpose() == *self
    }

    /// Slot-exchange invariance up to `tol`.
    pub fn is_symmetric_within(&self, tol: f64) -> bool {
        self.p == self.q
            && self
                .transpose()
                .coeffs
                .iter()
                .zip(&self.coeffs)
                .all(|(a, b)| a.near(b, tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n
            && self.bidegree() == other.bidegree()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.near(b, tol))
    }

    /// Converts between backends through `f64`-free exact conversion when
    /// possible.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DoubleForm<T> {
        DoubleForm {
            n: self.n,
            p: self.p,
            q: self.q,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> DoubleForm<f64> {
        self.map(|c| c.to_f64_lossy())
    }

    pub(crate) fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.bidegree() != other.bidegree() {
            return Err(Error::ShapeMismatch(self.p, self.q, other.p, other.q));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_assign_ref(b);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.sub_assign_ref(b);
        }
        Ok(out)
    }
}

impl<S: Scalar> Add for &DoubleForm<S> {
    type Output = DoubleForm<S>;

    /// Panics on shape mismatch; use [`DoubleForm::try_add`] otherwise.
    fn add(self, rhs: Self) -> DoubleForm<S> {
        self.try_add(rhs).expect("adding double forms of different shape")
    }
}

impl<S: Scalar> Sub for &DoubleForm<S> {
    type Output = DoubleForm<S>;

    fn sub(self, rhs: Self) -> DoubleForm<S> {
        self.try_sub(rhs).expect("subtracting double forms of different shape")
    }
}

impl<S: Scalar> Neg for &DoubleForm<S> {
    type Output = DoubleForm<S>;

    fn neg(self) -> DoubleForm<S> {
        self.map(|c| -c.clone())
    }
}
