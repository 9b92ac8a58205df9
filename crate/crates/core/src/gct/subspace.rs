use std::collections::HashMap;

use serde::Serialize;

use crate::arith::{ExactMatrix, Field, Prng, Scalar};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};

fn span_rank(field: Field, polys: &[MultiPoly]) -> Result<usize> {
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    if index.is_empty() {
        return Ok(0);
    }
    let rows: Vec<Vec<Scalar>> = polys
        .iter()
        .map(|p| p.coefficient_vector(&index, index.len()).expect("indexed monomials"))
        .collect();
    Ok(ExactMatrix::from_rows(field, rows)?.rank())
}

/// Dimension of the span of the first partials: the least number of variables `P` can be
/// written in after a linear change of coordinates.
pub fn essential_vars(p: &MultiPoly) -> Result<usize> {
    let partials: Vec<MultiPoly> = (0..p.nvars()).map(|i| p.partial_derivative(i)).collect();
    span_rank(p.field(), &partials)
}

/// Whether `P` lies in `S^d U*` for some `U*` of dimension `k + 2`.
pub fn subspace_membership(p: &MultiPoly, k: usize) -> Result<bool> {
    Ok(essential_vars(p)? <= k + 2)
}

/// Closed forms and the measured tangent dimension of the variety of forms in `k + 2`
/// variables inside `P(S^d W*)`, `dim W = N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubVarietyDims {
    pub k: usize,
    pub d: u32,
    pub n: usize,
    /// `binom(k+d+1, d) + (k+2)(N-k-2) - 1`.
    pub binomial_formula: i64,
    /// `k + 1 + (k+2)(N-k-2)`.
    pub linear_formula: i64,
    /// Rank of `S^d U* + {(u ⌟ P) α}` minus one, at a random `P in S^d U*`.
    pub empirical: i64,
    pub binomial_agrees: bool,
    pub linear_agrees: bool,
}

fn binomial(n: u64, k: u64) -> i64 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as i64
}

pub fn sub_variety_dims(k: usize, d: u32, n: usize, rng: &mut Prng) -> Result<SubVarietyDims> {
    let m = k + 2;
    if m > n {
        return Err(Error::InvalidInput(format!("k + 2 = {m} exceeds N = {n}")));
    }
    if d == 0 {
        return Err(Error::Degree("degree must be positive".into()));
    }
    let field = Field::Rational;
    let basis_u = Monomial::all_of_degree(m, d);
    let p = MultiPoly::random_form(field, m, d, rng).with_nvars(n)?;
    let mut span: Vec<MultiPoly> = basis_u
        .iter()
        .map(|mono| {
            let mut q = MultiPoly::zero(field, m);
            q.add_term(mono.clone(), field.one());
            q.with_nvars(n)
        })
        .collect::<Result<_>>()?;
    for i in 0..m {
        let di = p.partial_derivative(i);
        for j in 0..n {
            span.push(di.checked_mul(&MultiPoly::var(field, n, j))?);
        }
    }
    let empirical = span_rank(field, &span)? as i64 - 1;
    let (ki, ni) = (k as i64, n as i64);
    let binomial_formula = binomial((k + d as usize + 1) as u64, d as u64) + (ki + 2) * (ni - ki - 2) - 1;
    let linear_formula = ki + 1 + (ki + 2) * (ni - ki - 2);
    Ok(SubVarietyDims {
        k,
        d,
        n,
        binomial_formula,
        linear_formula,
        empirical,
        binomial_agrees: binomial_formula == empirical,
        linear_agrees: linear_formula == empirical,
    })
}
