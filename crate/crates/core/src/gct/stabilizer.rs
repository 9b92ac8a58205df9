use std::collections::HashMap;

use rayon::prelude::*;

use crate::arith::{ExactMatrix, Scalar};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};

use super::MatrixSpacePoly;

/// Largest matrix size accepted by [`stabilizer_dim`].
pub const MAX_STABILIZER_SIZE: usize = 4;

/// `(u . P)(x) = sum_a (U x)_a dP/dx_a` for `U` an `N x N` matrix.
pub fn infinitesimal_action(p: &MultiPoly, u: &ExactMatrix) -> Result<MultiPoly> {
    let n = p.nvars();
    if u.rows() != n || u.cols() != n {
        return Err(Error::VariableCountMismatch(u.rows(), n));
    }
    let mut out = MultiPoly::zero(p.field(), n);
    for a in 0..n {
        let row = u.row(a);
        if row.iter().all(Scalar::is_zero) {
            continue;
        }
        let image = MultiPoly::linear_form(p.field(), row);
        out = &out + &image.checked_mul(&p.partial_derivative(a))?;
    }
    Ok(out)
}

/// Dimension of `{u in End(W) : u . P in <P>}`, the Lie algebra of the stabilizer of the
/// line through `P`, as the nullity of `(U, c) -> U . P + c P`.
pub fn stabilizer_dim(p: &MatrixSpacePoly) -> Result<usize> {
    if p.n > MAX_STABILIZER_SIZE {
        return Err(Error::SizeCap(format!("stabilizer computation capped at n = {MAX_STABILIZER_SIZE}")));
    }
    if p.poly.is_zero() {
        return Err(Error::InvalidInput("stabilizer of the zero polynomial".into()));
    }
    let n = p.poly.nvars();
    let field = p.poly.field();
    let partials: Vec<MultiPoly> = (0..n).map(|a| p.poly.partial_derivative(a)).collect();
    // column (a, b): x_b dP/dx_a
    let columns: Vec<MultiPoly> = (0..n * n)
        .into_par_iter()
        .map(|ab| {
            let (a, b) = (ab / n, ab % n);
            let mut out = MultiPoly::zero(field, n);
            for (m, c) in partials[a].terms() {
                out.add_term(m.mul(&Monomial::var(n, b)), c.clone());
            }
            out
        })
        .collect();
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    for poly in columns.iter().chain(std::iter::once(&p.poly)) {
        for (m, _) in poly.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let rows = index.len();
    let mut cols: Vec<Vec<Scalar>> = columns
        .iter()
        .map(|c| c.coefficient_vector(&index, rows).expect("indexed monomials"))
        .collect();
    cols.push(p.poly.coefficient_vector(&index, rows).expect("indexed monomials"));
    let m = ExactMatrix::from_columns(field, rows, &cols)?;
    Ok(cols.len() - m.rank())
}
