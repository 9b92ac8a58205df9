//! Named polynomials:
//!
//! ```text
//! det:n | perm:m | padded:perm:m:d | plambda:n | immanant:p1,p2,... | random:N:d:seed
//! ```
//!
//! `random:N:d:seed` is a form of degree `d` in `N` variables with coefficients drawn from
//! `Prng::new(seed)`.

use crate::arith::{Field, Prng};
use crate::error::{Error, Result};
use crate::gct::{det_poly, immanant_matrix_poly, p_lambda, padded_poly, perm_poly};
use crate::poly::MultiPoly;
use crate::rep::Partition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub poly: MultiPoly,
    /// Matrix size for polynomials on `n x n` matrices.
    pub matrix_size: Option<usize>,
    pub warning: Option<String>,
}

const PREFIXES: [&str; 6] = ["det:", "perm:", "padded:", "plambda:", "immanant:", "random:"];

/// Whether `spec` uses one of the catalog prefixes.
pub fn is_catalog_name(spec: &str) -> bool {
    PREFIXES.iter().any(|p| spec.trim().starts_with(p))
}

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad {what} `{s}` in catalog name")))
}

pub fn lookup(spec: &str) -> Result<CatalogEntry> {
    let spec = spec.trim();
    let parts: Vec<&str> = spec.split(':').collect();
    let q = Field::Rational;
    let entry = |poly: MultiPoly, n: Option<usize>| CatalogEntry {
        name: spec.to_string(),
        poly,
        matrix_size: n,
        warning: None,
    };
    match parts.as_slice() {
        ["det", n] => {
            let n = number(n, "size")?;
            Ok(entry(det_poly(n, q)?.poly, Some(n)))
        }
        ["perm", m] => {
            let m = number(m, "size")?;
            Ok(entry(perm_poly(m, q)?.poly, Some(m)))
        }
        ["padded", "perm", m, d] => {
            let m: usize = number(m, "size")?;
            let d: u32 = number(d, "degree")?;
            Ok(entry(padded_poly(&perm_poly(m, q)?.poly, d)?.poly, None))
        }
        ["plambda", n] => {
            let pl = p_lambda(number(n, "size")?)?;
            Ok(CatalogEntry {
                name: spec.to_string(),
                matrix_size: Some(pl.poly.n),
                poly: pl.poly.poly,
                warning: pl.warning,
            })
        }
        ["immanant", parts] => {
            let lambda = Partition::parse(parts)?;
            let p = immanant_matrix_poly(&lambda, q)?;
            Ok(entry(p.poly, Some(p.n)))
        }
        ["random", n, d, seed] => {
            let n: usize = number(n, "variable count")?;
            let d: u32 = number(d, "degree")?;
            let seed: u64 = number(seed, "seed")?;
            if n == 0 {
                return Err(Error::InvalidInput("random forms need at least one variable".into()));
            }
            Ok(entry(MultiPoly::random_form(q, n, d, &mut Prng::new(seed)), None))
        }
        _ => Err(Error::InvalidInput(format!(
            "unknown catalog name `{spec}` (expected det:n, perm:m, padded:perm:m:d, plambda:n, immanant:p1,p2,.. or random:N:d:seed)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(lookup("det:2").unwrap().poly.to_string(), "x0*x3 - x1*x2");
        assert_eq!(lookup("perm:3").unwrap().poly.num_terms(), 6);
        let padded = lookup("padded:perm:2:3").unwrap();
        assert_eq!(padded.poly.nvars(), 5);
        assert_eq!(padded.poly.homogeneous_degree(), Some(3));
        assert_eq!(lookup("plambda:3").unwrap().matrix_size, Some(3));
        assert!(lookup("plambda:2").unwrap().warning.is_some());
        assert_eq!(lookup("immanant:1,1,1").unwrap().poly, lookup("det:3").unwrap().poly);
        assert_eq!(lookup("random:9:3:1").unwrap(), lookup("random:9:3:1").unwrap());
        assert!(lookup("det:x").is_err());
        assert!(lookup("foo:3").is_err());
        assert!(lookup("immanant:1,2").is_err());
        assert!(is_catalog_name("det:3") && !is_catalog_name("x0^2"));
    }
}
