use serde::Serialize;

use crate::arith::Prng;
use crate::error::{Error, Result};
use crate::polarize::{hessian, katz_across_primes, KatzReport};
use crate::poly::MultiPoly;

/// `P = l^(d-m) R` with `R` in `M` variables and `l = x_M` the one extra variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaddedPoly {
    pub base: MultiPoly,
    pub base_degree: u32,
    pub pad: u32,
    pub poly: MultiPoly,
}

impl PaddedPoly {
    pub fn ambient(&self) -> usize {
        self.poly.nvars()
    }

    /// Index of the padding variable.
    pub fn ell(&self) -> usize {
        self.base.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.base_degree + self.pad
    }
}

pub fn padded_poly(r: &MultiPoly, d: u32) -> Result<PaddedPoly> {
    let m = r
        .homogeneous_degree()
        .filter(|_| !r.is_zero())
        .ok_or_else(|| Error::Degree("padding needs a nonzero homogeneous polynomial".into()))?;
    if m >= d {
        return Err(Error::Degree(format!("padding degree {d} must exceed deg R = {m}")));
    }
    let n = r.nvars() + 1;
    let lifted = r.with_nvars(n)?;
    let ell = MultiPoly::var(r.field(), n, r.nvars()).pow(d - m);
    Ok(PaddedPoly {
        base: r.clone(),
        base_degree: m,
        pad: d - m,
        poly: lifted.checked_mul(&ell)?,
    })
}

/// Entry-by-entry comparison of `H_P` with its expected block shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockCheck {
    /// `d^2 P / dx_i dx_j = l^(d-m) d^2 R / dx_i dx_j` for `i, j < M`.
    pub base_block: bool,
    /// `d^2 P / dl^2 = (d-m)(d-m-1) l^(d-m-2) R`.
    pub corner: bool,
    /// `c = (d-m)(d-m-1)`.
    pub corner_constant: i64,
    /// `d^2 P / dl dx_i = (d-m) l^(d-m-1) dR/dx_i`.
    pub cross_terms_match: bool,
    /// Whether every cross term is identically zero (it is not whenever `R` is nonconstant).
    pub cross_terms_vanish: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaddedCheck {
    pub base_dual_dim: i64,
    pub padded_dual_dim: i64,
    pub preserved: bool,
    pub base_katz: KatzReport,
    pub padded_katz: KatzReport,
    /// Present when `d - m >= 2`.
    pub block: Option<BlockCheck>,
}

impl PaddedCheck {
    pub fn passes(&self) -> bool {
        self.preserved
            && self.base_katz.agree
            && self.padded_katz.agree
            && self
                .block
                .as_ref()
                .is_none_or(|b| b.base_block && b.corner && b.cross_terms_match)
    }
}

fn block_check(p: &PaddedPoly) -> Result<BlockCheck> {
    let field = p.poly.field();
    let n = p.ambient();
    let ell_idx = p.ell();
    let h = hessian(&p.poly)?;
    let hr = hessian(&p.base)?;
    let ell = MultiPoly::var(field, n, ell_idx);
    let s = p.pad;
    let r = p.base.with_nvars(n)?;
    let mut base_block = true;
    for i in 0..ell_idx {
        for j in 0..ell_idx {
            let expect = hr.get(i, j).with_nvars(n)?.checked_mul(&ell.pow(s))?;
            base_block &= h.get(i, j) == &expect;
        }
    }
    let c = (s as i64) * (s as i64 - 1);
    let corner_expect = r.checked_mul(&ell.pow(s - 2))?.scale(&field.from_i64(c));
    let corner = h.get(ell_idx, ell_idx) == &corner_expect;
    let mut cross_terms_match = true;
    let mut cross_terms_vanish = true;
    for i in 0..ell_idx {
        let expect = r.partial_derivative(i).checked_mul(&ell.pow(s - 1))?.scale(&field.from_i64(s as i64));
        cross_terms_match &= h.get(i, ell_idx) == &expect && h.get(ell_idx, i) == &expect;
        cross_terms_vanish &= h.get(i, ell_idx).is_zero();
    }
    Ok(BlockCheck {
        base_block,
        corner,
        corner_constant: c,
        cross_terms_match,
        cross_terms_vanish,
    })
}

/// Compares the Katz dimensions of `R` and `l^(d-m) R`, and checks the shape of the Hessian
/// of the padded polynomial when `d - m >= 2`.
pub fn padded_dual_check(r: &MultiPoly, d: u32, trials: usize, primes: &[u64], rng: &Prng) -> Result<PaddedCheck> {
    let p = padded_poly(r, d)?;
    let base_katz = katz_across_primes(&p.base, trials, primes, &rng.split(0))?;
    let padded_katz = katz_across_primes(&p.poly, trials, primes, &rng.split(1))?;
    let block = if p.pad >= 2 { Some(block_check(&p)?) } else { None };
    Ok(PaddedCheck {
        base_dual_dim: base_katz.dimension,
        padded_dual_dim: padded_katz.dimension,
        preserved: base_katz.dimension == padded_katz.dimension,
        base_katz,
        padded_katz,
        block,
    })
}
