//! JSON exchange formats.
//!
//! A tensor file lists `R(eᵢ,eⱼ;eₖ,eₗ)` for 0-based frame indices:
//!
//! ```json
//! {"n": 4, "components": [{"i": 0, "j": 1, "k": 0, "l": 1, "value": "1/2"}]}
//! ```
//!
//! Each pair may appear in either order; a swapped pair flips the sign.
//! Entries not listed are completed from `R(X;Y) = R(Y;X)` or are zero.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curvature::{CurvatureTensor, InvariantReport};
use crate::dfcore::{DoubleForm, MultiIndex, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::{format_exact, parse_exact, Exact, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorFile {
    pub n: usize,
    pub components: Vec<Component>,
}

fn pair(n: usize, a: usize, b: usize) -> Result<(bool, MultiIndex)> {
    if a >= n || b >= n {
        return Err(Error::Parse(format!(
            "index out of range for n = {n}: ({a}, {b})"
        )));
    }
    if a == b {
        return Err(Error::Parse(format!(
            "repeated index ({a}, {a}): the tensor is antisymmetric in each pair"
        )));
    }
    let flipped = a > b;
    let (lo, hi) = if flipped { (b, a) } else { (a, b) };
    Ok((flipped, MultiIndex::new(n, &[lo, hi])?))
}

impl TensorFile {
    /// Builds the full tensor and validates it exactly.
    pub fn to_tensor(&self) -> Result<CurvatureTensor<Exact>> {
        let n = self.n;
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::Parse(format!(
                "dimension must lie in 2..={MAX_DIM}, got {n}"
            )));
        }
        let mut seen: HashMap<(u32, u32), Exact> = HashMap::new();
        for c in &self.components {
            let (f1, row) = pair(n, c.i, c.j)?;
            let (f2, col) = pair(n, c.k, c.l)?;
            let mut v = parse_exact(&c.value)?;
            if f1 ^ f2 {
                v = -v;
            }
            for key in [(row.mask(), col.mask()), (col.mask(), row.mask())] {
                match seen.get(&key) {
                    Some(prev) if *prev != v => {
                        return Err(Error::Parse(format!(
                            "conflicting values for R({},{};{},{}): {} and {}",
                            c.i,
                            c.j,
                            c.k,
                            c.l,
                            format_exact(prev),
                            format_exact(&v)
                        )));
                    }
                    _ => {
                        seen.insert(key, v.clone());
                    }
                }
            }
        }
        let mut form = DoubleForm::<Exact>::zero(n, 2, 2);
        for ((r, c), v) in seen {
            form.set(MultiIndex::from_mask(r), MultiIndex::from_mask(c), v);
        }
        CurvatureTensor::from_form(form)
    }

    /// Lists each non-zero entry once, with the row pair not after the
    /// column pair.
    pub fn from_tensor(r: &CurvatureTensor<Exact>) -> Self {
        let components = r
            .form()
            .nonzero()
            .filter(|(row, col, _)| row.rank() <= col.rank())
            .map(|(row, col, v)| {
                let a: Vec<usize> = row.indices().collect();
                let b: Vec<usize> = col.indices().collect();
                Component {
                    i: a[0],
                    j: a[1],
                    k: b[0],
                    l: b[1],
                    value: format_exact(v),
                }
            })
            .collect();
        TensorFile { n: r.n(), components }
    }
}

pub fn read_tensor(text: &str) -> Result<CurvatureTensor<Exact>> {
    let file: TensorFile = serde_json::from_str(text)?;
    file.to_tensor()
}

pub fn write_tensor(r: &CurvatureTensor<Exact>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&TensorFile::from_tensor(r))?)
}

/// Scalars that can be emitted as JSON: rationals become
/// `{"exact": "num/den", "value": float}`, floats stay plain numbers.
pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl ToJson for Exact {
    fn to_json(&self) -> Value {
        json!({ "exact": format_exact(self), "value": self.to_f64_lossy() })
    }
}

impl ToJson for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

pub fn report_json<S: Scalar + ToJson>(report: &InvariantReport<S>) -> Value {
    let h2q: Vec<Value> = report
        .h2q
        .iter()
        .map(|(q, v)| json!({ "q": q, "h2q": v.to_json() }))
        .collect();
    json!({
        "n": report.n,
        "h2q": h2q,
        "h4": report.h4().to_json(),
        "scal": report.scal.to_json(),
        "norms": {
            "r_sq": report.norm_r_sq.to_json(),
            "ricci_sq": report.norm_ricci_sq.to_json(),
            "scal_sq": report.scal_sq.to_json(),
        },
        "decomposition": {
            "omega0_sq": report.norm_omega0_sq.to_json(),
            "omega1_sq": report.norm_omega1_sq.to_json(),
            "omega2_sq": report.norm_omega2_sq.to_json(),
        },
        "h4_routes": {
            "direct": report.h4_direct.to_json(),
            "decomposed": report.h4_decomposed.to_json(),
            "contraction": report.h4_contraction.to_json(),
        },
        "einstein": report.einstein,
        "einstein_deviation": report.einstein_deviation,
    })
}
