//! Dense univariate helpers over an exact field. Coefficient vectors are little-endian.

use crate::arith::{ExactMatrix, Field, Scalar};
use crate::error::{Error, Result};

pub fn trim(mut c: Vec<Scalar>) -> Vec<Scalar> {
    while c.last().is_some_and(Scalar::is_zero) {
        c.pop();
    }
    c
}

/// Horner evaluation.
pub fn eval(coeffs: &[Scalar], t: &Scalar) -> Scalar {
    let mut acc = t.field().zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * t) + c;
    }
    acc
}

/// Newton interpolation through `(xs[i], ys[i])`; the `xs` must be distinct.
pub fn interpolate(field: Field, xs: &[Scalar], ys: &[Scalar]) -> Result<Vec<Scalar>> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput("interpolation needs as many values as nodes".into()));
    }
    let n = xs.len();
    let mut dd: Vec<Scalar> = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let den = &xs[i] - &xs[i - level];
            let inv = den
                .inv()
                .ok_or_else(|| Error::InvalidInput("repeated interpolation node".into()))?;
            dd[i] = &(&dd[i] - &dd[i - 1]) * &inv;
        }
    }
    // Expand the Newton form into monomial coefficients.
    let mut coeffs = vec![field.zero(); n.max(1)];
    for i in (0..n).rev() {
        // coeffs = coeffs * (t - xs[i]) + dd[i]
        let mut next = vec![field.zero(); n.max(1)];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &coeffs[k];
            }
            next[k] -= &(&coeffs[k] * &xs[i]);
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    Ok(trim(coeffs))
}

pub fn derivative(coeffs: &[Scalar]) -> Vec<Scalar> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &c.field().from_i64(k as i64))
        .collect()
}

/// Remainder of `a` modulo `b` (`b` nonzero after trimming).
pub fn rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = b.last().expect("nonzero divisor").inv().expect("trimmed");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let q = r.last().unwrap() * &lead_inv;
        for (k, bc) in b.iter().enumerate() {
            r[shift + k] -= &(&q * bc);
        }
        r = trim(r);
    }
    r
}

/// Monic greatest common divisor (empty for `gcd(0, 0)`).
pub fn gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last() {
        let inv = l.inv().expect("trimmed");
        x = x.iter().map(|c| c * &inv).collect();
    }
    x
}

/// Sylvester resultant of two coefficient vectors taken at formal degrees
/// `a.len() - 1` and `b.len() - 1` (leading zeros allowed, as for binary forms).
pub fn sylvester_resultant(field: Field, a: &[Scalar], b: &[Scalar]) -> Result<Scalar> {
    let m = a.len().saturating_sub(1);
    let n = b.len().saturating_sub(1);
    let size = m + n;
    if size == 0 {
        return Ok(field.one());
    }
    let mut s = ExactMatrix::zeros(field, size, size);
    for r in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            s.set(r, r + k, c.clone());
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            s.set(n + r, r + k, c.clone());
        }
    }
    s.determinant()
}
