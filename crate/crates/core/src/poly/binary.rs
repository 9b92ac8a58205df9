use std::fmt;

use crate::arith::{Field, Scalar};
use crate::error::{Error, Result};

use super::multipoly::{Monomial, MultiPoly};
use super::univariate;

/// Dense binary form `sum_i c_i x^i y^(d-i)` of degree `d`.
///
/// The coefficient vector always has length `d + 1`; vanishing extreme coefficients are
/// meaningful (a zero `c_d` means the point `y = 0` lies on the form).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a binary form needs at least one coefficient".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(bad.field(), field));
        }
        Ok(BinaryForm { field, coeffs })
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
            .expect("nonempty coefficient list")
    }

    pub fn zero(field: Field, degree: usize) -> Self {
        BinaryForm {
            field,
            coeffs: vec![field.zero(); degree + 1],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^i y^(d-i)`.
    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^d`, the value at `(1, 0)`.
    pub fn leading_x(&self) -> &Scalar {
        &self.coeffs[self.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn evaluate(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let d = self.degree();
        let mut total = self.field.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            total += &(&(c * &x.pow(i as u32)) * &y.pow((d - i) as u32));
        }
        total
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![self.field.zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        BinaryForm {
            field: self.field,
            coeffs: out,
        }
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if self.degree() != other.degree() {
            return Err(Error::Degree(format!(
                "cannot add binary forms of degrees {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(BinaryForm {
            field: self.field,
            coeffs,
        })
    }

    pub fn scale(&self, s: &Scalar) -> BinaryForm {
        BinaryForm {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiplication by `y^k`.
    pub fn times_y_power(&self, k: usize) -> BinaryForm {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend((0..k).map(|_| self.field.zero()));
        BinaryForm {
            field: self.field,
            coeffs,
        }
    }

    /// `F(x, lambda * y)`.
    pub fn scale_y(&self, lambda: &Scalar) -> BinaryForm {
        let d = self.degree();
        BinaryForm {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * &lambda.pow((d - i) as u32))
                .collect(),
        }
    }

    /// Reads a homogeneous polynomial in two variables `(x, y) = (x0, x1)` as a form of
    /// degree `degree`. The zero polynomial gives the zero form.
    pub fn from_multipoly(p: &MultiPoly, degree: usize) -> Result<Self> {
        if p.nvars() != 2 {
            return Err(Error::VariableCountMismatch(p.nvars(), 2));
        }
        let mut coeffs = vec![p.field().zero(); degree + 1];
        for (m, c) in p.terms() {
            let e = m.exponents();
            if (e[0] + e[1]) as usize != degree {
                return Err(Error::Degree(format!(
                    "term of degree {} in a binary form of degree {degree}",
                    e[0] + e[1]
                )));
            }
            coeffs[e[0] as usize] = c.clone();
        }
        Self::new(p.field(), coeffs)
    }

    pub fn to_multipoly(&self) -> MultiPoly {
        let d = self.degree() as u32;
        let mut p = MultiPoly::zero(self.field, 2);
        for (i, c) in self.coeffs.iter().enumerate() {
            p.add_term(Monomial::new(vec![i as u32, d - i as u32]), c.clone());
        }
        p
    }

    /// `Res(dF/dx, dF/dy)`, which equals the classical discriminant up to the nonzero
    /// constant `d^(d-2)` (in characteristic not dividing `d`). It vanishes exactly when the
    /// form has a repeated linear factor.
    pub fn discriminant(&self) -> Result<Scalar> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::Degree("discriminant needs degree at least 2".into()));
        }
        let fx: Vec<Scalar> = (1..=d)
            .map(|i| &self.coeffs[i] * &self.field.from_i64(i as i64))
            .collect();
        let fy: Vec<Scalar> = (0..d)
            .map(|i| &self.coeffs[i] * &self.field.from_i64((d - i) as i64))
            .collect();
        univariate::sylvester_resultant(self.field, &fx, &fy)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multipoly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_detects_square_factor() {
        let q = Field::Rational;
        // (x - y)^2 (x + y) = x^3 - x^2 y - x y^2 + y^3
        let sq = BinaryForm::from_i64(q, &[1, -1, -1, 1]);
        assert!(sq.discriminant().unwrap().is_zero());
        // x^3 - x y^2 = x (x - y)(x + y)
        let sep = BinaryForm::from_i64(q, &[0, -1, 0, 1]);
        assert!(!sep.discriminant().unwrap().is_zero());
        // y^2 (x + y): repeated factor at infinity in x
        let inf = BinaryForm::from_i64(q, &[1, 1, 0, 0]);
        assert!(inf.discriminant().unwrap().is_zero());
    }

    #[test]
    fn multipoly_round_trip() {
        let q = Field::Rational;
        let f = BinaryForm::from_i64(q, &[2, 0, -3]);
        assert_eq!(BinaryForm::from_multipoly(&f.to_multipoly(), 2).unwrap(), f);
        assert_eq!(f.evaluate(&q.from_i64(1), &q.from_i64(1)), q.from_i64(-1));
    }
}
