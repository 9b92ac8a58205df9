//! Pfaffians, the boundary polynomial `P_Lambda` and the curve `t -> det(A + t S)`.
//!
//! For `M = A + S` with `A` skew and `S` symmetric and `n` odd, `det(A) = 0` and the `t`
//! coefficient of `det(A + t S)` is `sum_ij s_ij C_ij(A)` where the cofactors of an odd skew
//! matrix factor as `C_ij = (-1)^(i+j) Pf_i(A) Pf_j(A)`. So the signed sum
//! `P_Lambda = sum_ij (-1)^(i+j) s_ij Pf_i(A) Pf_j(A)` equals that coefficient exactly.

use serde::Serialize;

use crate::arith::{ExactMatrix, Field, Scalar};
use crate::error::{Error, Result};
use crate::polarize::poly_matrix_det;
use crate::poly::{LinearSubstitution, MultiPoly};

use super::{scalar_multiple, MatrixSpacePoly, MAX_MATRIX_SIZE};

/// Pfaffian by expansion along the first row, with `Pf([[0, a], [-a, 0]]) = a` and the
/// empty Pfaffian equal to 1. Odd sizes give 0.
pub fn pfaffian(a: &ExactMatrix) -> Result<Scalar> {
    if a.rows() != a.cols() {
        return Err(Error::InvalidInput("Pfaffian of a non-square matrix".into()));
    }
    let idx: Vec<usize> = (0..a.rows()).collect();
    Ok(pf_numeric(a, &idx))
}

fn pf_numeric(a: &ExactMatrix, idx: &[usize]) -> Scalar {
    let field = a.field();
    if idx.is_empty() {
        return field.one();
    }
    if idx.len() % 2 == 1 {
        return field.zero();
    }
    let mut total = field.zero();
    for j in 1..idx.len() {
        let entry = a.get(idx[0], idx[j]);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[j]).collect();
        let term = entry * &pf_numeric(a, &rest);
        if j % 2 == 1 {
            total += &term;
        } else {
            total -= &term;
        }
    }
    total
}

fn check_skew(a: &ExactMatrix) -> Result<()> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::InvalidInput("skew matrix must be square".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j) != &-a.get(j, i) {
                return Err(Error::InvalidInput("matrix is not skew-symmetric".into()));
            }
        }
    }
    Ok(())
}

/// `Pf_i(A)`: Pfaffian of `A` with row and column `i` removed (`A` skew of odd size).
pub fn pfaffian_minor(a: &ExactMatrix, i: usize) -> Result<Scalar> {
    check_skew(a)?;
    if a.rows().is_multiple_of(2) {
        return Err(Error::InvalidInput("Pfaffian minors need odd size".into()));
    }
    if i >= a.rows() {
        return Err(Error::InvalidInput(format!("index {i} out of range")));
    }
    let idx: Vec<usize> = (0..a.rows()).filter(|&j| j != i).collect();
    Ok(pf_numeric(a, &idx))
}

fn pf_symbolic(a: &[Vec<MultiPoly>], idx: &[usize], field: Field, nvars: usize) -> MultiPoly {
    if idx.is_empty() {
        return MultiPoly::one(field, nvars);
    }
    if idx.len() % 2 == 1 {
        return MultiPoly::zero(field, nvars);
    }
    let mut total = MultiPoly::zero(field, nvars);
    for j in 1..idx.len() {
        let entry = &a[idx[0]][idx[j]];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[j]).collect();
        let term = entry * &pf_symbolic(a, &rest, field, nvars);
        total = if j % 2 == 1 { &total + &term } else { &total - &term };
    }
    total
}

/// `A = (M - M^T)/2` and `S = (M + M^T)/2` as linear substitutions on the `n^2` variables,
/// together with their entries as linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymSkewSplit {
    pub n: usize,
    pub skew: LinearSubstitution,
    pub sym: LinearSubstitution,
}

impl SymSkewSplit {
    fn entries(&self, s: &LinearSubstitution) -> Vec<Vec<MultiPoly>> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| MultiPoly::linear_form(s.field(), s.matrix().row(i * n + j)))
                    .collect()
            })
            .collect()
    }

    pub fn skew_entries(&self) -> Vec<Vec<MultiPoly>> {
        self.entries(&self.skew)
    }

    pub fn sym_entries(&self) -> Vec<Vec<MultiPoly>> {
        self.entries(&self.sym)
    }
}

pub fn sym_skew_split(n: usize) -> Result<SymSkewSplit> {
    let field = Field::Rational;
    let half = field.from_ratio(1, 2)?;
    let nn = n * n;
    let mut a = ExactMatrix::zeros(field, nn, nn);
    let mut s = ExactMatrix::zeros(field, nn, nn);
    for i in 0..n {
        for j in 0..n {
            let (ij, ji) = (i * n + j, j * n + i);
            if i == j {
                s.set(ij, ij, field.one());
                continue;
            }
            a.set(ij, ij, half.clone());
            a.set(ij, ji, -&half);
            s.set(ij, ij, half.clone());
            s.set(ij, ji, half.clone());
        }
    }
    Ok(SymSkewSplit {
        n,
        skew: LinearSubstitution::new(a),
        sym: LinearSubstitution::new(s),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLambda {
    pub poly: MatrixSpacePoly,
    pub warning: Option<String>,
}

/// `P_Lambda(M) = sum_ij (-1)^(i+j) s_ij Pf_i(A) Pf_j(A)`; zero (with a warning) for even `n`.
pub fn p_lambda(n: usize) -> Result<PLambda> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix size must be positive".into()));
    }
    if n > MAX_MATRIX_SIZE {
        return Err(Error::SizeCap(format!("P_Lambda capped at n = {MAX_MATRIX_SIZE}")));
    }
    let field = Field::Rational;
    let nn = n * n;
    if n.is_multiple_of(2) {
        return Ok(PLambda {
            poly: MatrixSpacePoly::new(n, MultiPoly::zero(field, nn))?,
            warning: Some(format!("P_Lambda vanishes for even n = {n}")),
        });
    }
    let split = sym_skew_split(n)?;
    let a = split.skew_entries();
    let s = split.sym_entries();
    let minors: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let idx: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            pf_symbolic(&a, &idx, field, nn)
        })
        .collect();
    let mut total = MultiPoly::zero(field, nn);
    for i in 0..n {
        for j in 0..n {
            let term = &(&s[i][j] * &minors[i]) * &minors[j];
            total = if (i + j) % 2 == 0 { &total + &term } else { &total - &term };
        }
    }
    Ok(PLambda {
        poly: MatrixSpacePoly::new(n, total)?,
        warning: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveLimit {
    pub n: usize,
    pub t0_vanishes: bool,
    pub t1_nonzero: bool,
    /// `c` with `[t^1] det(A + t S) = c P_Lambda`, when it exists.
    pub scalar: Option<String>,
    pub passes: bool,
}

/// Expands `det(A + t S)` symbolically (with `t` an extra variable) and compares its `t^1`
/// coefficient with `P_Lambda`.
pub fn curve_limit_check(n: usize) -> Result<CurveLimit> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("the curve check needs odd n, got {n}")));
    }
    if n > 5 {
        return Err(Error::SizeCap("the curve check is capped at n = 5".into()));
    }
    let field = Field::Rational;
    let nn = n * n;
    let split = sym_skew_split(n)?;
    let lift = |m: &MultiPoly| m.with_nvars(nn + 1).expect("padding variables");
    let t = MultiPoly::var(field, nn + 1, nn);
    let a = split.skew_entries();
    let s = split.sym_entries();
    let rows: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| (0..n).map(|j| &lift(&a[i][j]) + &(&t * &lift(&s[i][j]))).collect())
        .collect();
    let det = poly_matrix_det(&rows)?;
    let by_t = det.coefficients_in(nn);
    let coeff = |k: usize| -> Result<MultiPoly> {
        match by_t.get(k) {
            Some(c) => c.with_nvars(nn),
            None => Ok(MultiPoly::zero(field, nn)),
        }
    };
    let t0 = coeff(0)?;
    let t1 = coeff(1)?;
    let pl = p_lambda(n)?.poly.poly;
    let scalar = scalar_multiple(&t1, &pl).filter(|c| !c.is_zero());
    let t0_vanishes = t0.is_zero();
    let t1_nonzero = !t1.is_zero();
    Ok(CurveLimit {
        n,
        t0_vanishes,
        t1_nonzero,
        passes: t0_vanishes && t1_nonzero && scalar.is_some(),
        scalar: scalar.map(|c| c.to_string()),
    })
}

/// `P(g M g^T)`.
pub fn congruence_action(p: &MatrixSpacePoly, g: &ExactMatrix) -> Result<MatrixSpacePoly> {
    let n = p.n;
    if g.rows() != n || g.cols() != n {
        return Err(Error::InvalidInput(format!("congruence by a {}x{} matrix", g.rows(), g.cols())));
    }
    let field = p.poly.field();
    let g = g.to_field(field)?;
    let mut s = ExactMatrix::zeros(field, n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    s.set(i * n + j, k * n + l, g.get(i, k) * g.get(j, l));
                }
            }
        }
    }
    MatrixSpacePoly::new(n, p.poly.substitute(&LinearSubstitution::new(s))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pfaffian_conventions() {
        let q = Field::Rational;
        let j2 = ExactMatrix::from_i64(q, &[&[0, 5], &[-5, 0]]);
        assert_eq!(pfaffian(&j2).unwrap(), q.from_i64(5));
        let empty = ExactMatrix::zeros(q, 0, 0);
        assert_eq!(pfaffian(&empty).unwrap(), q.one());
        // Pf^2 = det on a 4x4 skew matrix
        let a = ExactMatrix::from_i64(q, &[&[0, 1, 2, 3], &[-1, 0, 4, 5], &[-2, -4, 0, 6], &[-3, -5, -6, 0]]);
        let pf = pfaffian(&a).unwrap();
        assert_eq!(&pf * &pf, a.determinant().unwrap());
        assert_eq!(pf, q.from_i64(6 - 2 * 5 + 3 * 4));
    }

    #[test]
    fn p_lambda_boundary_cases() {
        let p1 = p_lambda(1).unwrap();
        assert_eq!(p1.poly.poly.to_string(), "x0");
        let p2 = p_lambda(2).unwrap();
        assert!(p2.poly.poly.is_zero() && p2.warning.is_some());
    }
}
