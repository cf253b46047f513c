//! Named tensor generators accepted on the command line.
//!
//! Grammar: `sphere:N:L`, `flat:N`, `hypersurface:a,b,...`,
//! `conformal:a,b,...` and `random:N:SEED[:TERMS]`. Values are exact
//! rationals (`2`, `-1/3`, `0.25`).

use anyhow::{anyhow, bail, Context, Result};
use doubleform::models::{conformally_flat, constant_curvature, hypersurface, random_bianchi};
use doubleform::scalar::parse_exact;
use doubleform::{CurvatureTensor, Exact};

pub fn parse_list(text: &str) -> Result<Vec<Exact>> {
    text.split(',')
        .map(|v| parse_exact(v.trim()).with_context(|| format!("bad value '{v}'")))
        .collect()
}

fn parse_dim(text: &str) -> Result<usize> {
    let n: usize = text
        .parse()
        .with_context(|| format!("bad dimension '{text}'"))?;
    if !(1..=doubleform::dfcore::MAX_DIM).contains(&n) {
        bail!("dimension must lie in 1..={}, got {n}", doubleform::dfcore::MAX_DIM);
    }
    Ok(n)
}

fn require_nonempty(values: Vec<Exact>) -> Result<Vec<Exact>> {
    if values.len() > doubleform::dfcore::MAX_DIM {
        bail!("at most {} eigenvalues are supported", doubleform::dfcore::MAX_DIM);
    }
    Ok(values)
}

pub fn sphere(n: &str, lambda: &str) -> Result<CurvatureTensor<Exact>> {
    Ok(constant_curvature(parse_dim(n)?, parse_exact(lambda)?))
}

pub fn parse_generator(spec: &str) -> Result<CurvatureTensor<Exact>> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("generator '{spec}' has no ':'"))?;
    let parts: Vec<&str> = rest.split(':').collect();
    match (kind, parts.as_slice()) {
        ("sphere", [n, l]) => sphere(n, l),
        ("flat", [n]) => Ok(CurvatureTensor::zero(parse_dim(n)?)),
        ("hypersurface", [list]) => Ok(hypersurface(&require_nonempty(parse_list(list)?)?)),
        ("conformal", [list]) => Ok(conformally_flat(&require_nonempty(parse_list(list)?)?)),
        ("random", [n, seed]) | ("random", [n, seed, _]) => {
            let terms = match parts.get(2) {
                Some(t) => t.parse().with_context(|| format!("bad term count '{t}'"))?,
                None => 3,
            };
            let seed: u64 = seed.parse().with_context(|| format!("bad seed '{seed}'"))?;
            Ok(random_bianchi(parse_dim(n)?, seed, terms))
        }
        _ => bail!(
            "unknown generator '{spec}'; expected sphere:N:L, flat:N, hypersurface:a,b,..., \
             conformal:a,b,... or random:N:SEED[:TERMS]"
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        assert_eq!(parse_generator("sphere:4:1").unwrap().n(), 4);
        assert_eq!(parse_generator("flat:3").unwrap().n(), 3);
        assert_eq!(parse_generator("hypersurface:1,2,3").unwrap().n(), 3);
        assert_eq!(parse_generator("conformal:1/2,-1,0.5,2").unwrap().n(), 4);
        assert_eq!(parse_generator("random:5:9").unwrap().n(), 5);
        assert_eq!(parse_generator("random:5:9:1").unwrap().n(), 5);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["sphere", "sphere:4", "sphere:x:1", "cube:3", "flat:0", "random:4:x", "hypersurface:1,,2"] {
            assert!(parse_generator(bad).is_err(), "{bad}");
        }
    }
}
