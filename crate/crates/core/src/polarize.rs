//! Hessians, flags, point sampling on hypersurfaces and the Katz dual-dimension estimator.
//!
//! Hessians use the raw second-derivative normalization `H[i][j] = d^2 P / dx_i dx_j`. With
//! this convention `X^T H(w) X = d(d-1) P(w, .., w, X, X)` where `P(., .., .)` is the full
//! polarization (so `P(w, .., w) = P(w)`).
//!
//! Generic ranks are maxima over sampled points: the rank of `H(w)` only drops on a closed
//! subset, so an unlucky sample can only under-report. Sampled points live over `F_p`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{next_prime, ExactMatrix, Field, Prng, Scalar};
use crate::error::{Error, Result};
use crate::poly::{univariate, BinaryForm, LinearSubstitution, MultiPoly};

/// Line retries before [`sample_on_hypersurface`] gives up.
pub const MAX_SAMPLE_ATTEMPTS: usize = 64;

/// Square matrix of polynomials, all in the same variables over the same field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HessianMatrix {
    size: usize,
    nvars: usize,
    field: Field,
    entries: Vec<MultiPoly>,
}

impl HessianMatrix {
    pub fn from_entries(rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let size = rows.len();
        let first = rows
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::InvalidInput("empty polynomial matrix".into()))?;
        let (nvars, field) = (first.nvars(), first.field());
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::InvalidInput("polynomial matrix must be square".into()));
            }
            for e in row {
                if e.nvars() != nvars {
                    return Err(Error::VariableCountMismatch(e.nvars(), nvars));
                }
                if e.field() != field {
                    return Err(Error::FieldMismatch(e.field(), field));
                }
                entries.push(e);
            }
        }
        Ok(HessianMatrix {
            size,
            nvars,
            field,
            entries,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<MultiPoly>> {
        self.entries.chunks(self.size).map(<[MultiPoly]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Numeric matrix at a point.
    pub fn at(&self, w: &[Scalar]) -> Result<ExactMatrix> {
        let mut m = ExactMatrix::zeros(self.field, self.size, self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                let v = if j < i && self.get(i, j) == self.get(j, i) {
                    m.get(j, i).clone()
                } else {
                    self.get(i, j).evaluate(w)?
                };
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// `B^T H B` for the given columns of `B`, entries still polynomials in the ambient
    /// variables.
    pub fn restrict(&self, columns: &[Vec<Scalar>]) -> Result<HessianMatrix> {
        check_independent(self.field, self.size, columns)?;
        let m = columns.len();
        // HB first, then B^T (HB).
        let mut hb: Vec<MultiPoly> = Vec::with_capacity(self.size * m);
        for a in 0..self.size {
            for col in columns {
                let mut acc = MultiPoly::zero(self.field, self.nvars);
                for (b, coef) in col.iter().enumerate() {
                    if !coef.is_zero() {
                        acc = &acc + &self.get(a, b).scale(coef);
                    }
                }
                hb.push(acc);
            }
        }
        let mut entries = Vec::with_capacity(m * m);
        for ci in columns {
            for j in 0..m {
                let mut acc = MultiPoly::zero(self.field, self.nvars);
                for (a, coef) in ci.iter().enumerate() {
                    if !coef.is_zero() {
                        acc = &acc + &hb[a * m + j].scale(coef);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(HessianMatrix {
            size: m,
            nvars: self.nvars,
            field: self.field,
            entries,
        })
    }

    /// Symbolic determinant.
    pub fn determinant(&self) -> Result<MultiPoly> {
        poly_matrix_det(&self.rows())
    }

    pub fn to_field(&self, target: Field) -> Result<HessianMatrix> {
        Ok(HessianMatrix {
            size: self.size,
            nvars: self.nvars,
            field: target,
            entries: self.entries.iter().map(|e| e.to_field(target)).collect::<Result<_>>()?,
        })
    }
}

fn check_independent(field: Field, ambient: usize, columns: &[Vec<Scalar>]) -> Result<()> {
    if columns.is_empty() {
        return Err(Error::DegenerateFlag("no columns".into()));
    }
    if let Some(c) = columns.iter().find(|c| c.len() != ambient) {
        return Err(Error::VariableCountMismatch(c.len(), ambient));
    }
    let b = ExactMatrix::from_columns(field, ambient, columns)?;
    let r = b.rank();
    if r != columns.len() {
        return Err(Error::DegenerateFlag(format!(
            "{} columns span only a {r}-dimensional space",
            columns.len()
        )));
    }
    Ok(())
}

/// The matrix of second partials of a homogeneous polynomial of degree at least 2. The zero
/// polynomial gives the zero matrix.
pub fn hessian(p: &MultiPoly) -> Result<HessianMatrix> {
    if !p.is_zero() {
        match p.homogeneous_degree() {
            None => return Err(Error::Degree("Hessian needs a homogeneous polynomial".into())),
            Some(d) if d < 2 => {
                return Err(Error::Degree(format!("Hessian needs degree at least 2, got {d}")))
            }
            _ => {}
        }
    }
    let n = p.nvars();
    if n == 0 {
        return Err(Error::InvalidInput("Hessian of a polynomial in no variables".into()));
    }
    let firsts: Vec<MultiPoly> = (0..n).map(|i| p.partial_derivative(i)).collect();
    let mut entries = vec![MultiPoly::zero(p.field(), n); n * n];
    for i in 0..n {
        for j in i..n {
            let e = firsts[i].partial_derivative(j);
            entries[j * n + i] = e.clone();
            entries[i * n + j] = e;
        }
    }
    Ok(HessianMatrix {
        size: n,
        nvars: n,
        field: p.field(),
        entries,
    })
}

/// Numeric Hessian `H_{P,w}`.
pub fn hessian_at(p: &MultiPoly, w: &[Scalar]) -> Result<ExactMatrix> {
    hessian(p)?.at(w)
}

/// `B^T H B` with `B` given by its columns.
pub fn restrict_hessian(h: &HessianMatrix, columns: &[Vec<Scalar>]) -> Result<HessianMatrix> {
    h.restrict(columns)
}

/// Determinant of a square matrix of polynomials by Laplace expansion along rows, memoizing
/// minors by their column set.
pub fn poly_matrix_det(rows: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    let m = rows.len();
    let first = rows
        .first()
        .and_then(|r| r.first())
        .ok_or_else(|| Error::InvalidInput("empty polynomial matrix".into()))?;
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidInput("polynomial matrix must be square".into()));
    }
    if m > 20 {
        return Err(Error::SizeCap("symbolic determinant capped at 20x20".into()));
    }
    let (field, nvars) = (first.field(), first.nvars());
    // minors[mask] = det of the last |mask| rows restricted to the columns in mask
    let mut minors: HashMap<u32, MultiPoly> = HashMap::new();
    minors.insert(0, MultiPoly::one(field, nvars));
    let mut current: Vec<u32> = vec![0];
    for r in (0..m).rev() {
        let mut next = Vec::new();
        let mut next_vals: HashMap<u32, MultiPoly> = HashMap::new();
        for &mask in &current {
            for j in 0..m {
                let bit = 1u32 << j;
                if mask & bit != 0 || next_vals.contains_key(&(mask | bit)) {
                    continue;
                }
                let full = mask | bit;
                let mut acc = MultiPoly::zero(field, nvars);
                for (pos, jj) in (0..m).filter(|&c| full & (1 << c) != 0).enumerate() {
                    let entry = &rows[r][jj];
                    if entry.is_zero() {
                        continue;
                    }
                    let sub = &minors[&(full & !(1 << jj))];
                    if sub.is_zero() {
                        continue;
                    }
                    let t = entry.checked_mul(sub)?;
                    acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                next.push(full);
                next_vals.insert(full, acc);
            }
        }
        minors = next_vals;
        current = next;
    }
    Ok(minors.remove(&((1u32 << m) - 1)).expect("full minor computed"))
}

/// Nested subspaces `D ⊂ L ⊂ F` of a space of dimension `N`, given by an ordered basis of
/// `F` whose first column spans `D` and first two columns span `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    field: Field,
    ambient: usize,
    columns: Vec<Vec<Scalar>>,
}

impl Flag {
    pub fn new(field: Field, ambient: usize, columns: Vec<Vec<Scalar>>) -> Result<Self> {
        if columns.len() < 2 {
            return Err(Error::DegenerateFlag("a flag needs at least the two columns of L".into()));
        }
        if columns.len() > ambient {
            return Err(Error::DegenerateFlag(format!(
                "{} columns in a space of dimension {ambient}",
                columns.len()
            )));
        }
        check_independent(field, ambient, &columns)?;
        Ok(Flag {
            field,
            ambient,
            columns,
        })
    }

    /// Random flag with `dim F = k + 3`.
    pub fn random(field: Field, ambient: usize, k: usize, rng: &mut Prng) -> Result<Self> {
        let m = k + 3;
        if m > ambient {
            return Err(Error::DegenerateFlag(format!(
                "dim F = {m} exceeds the ambient dimension {ambient}"
            )));
        }
        for _ in 0..MAX_SAMPLE_ATTEMPTS {
            let cols: Vec<Vec<Scalar>> = (0..m).map(|_| rng.vector(field, ambient)).collect();
            if let Ok(f) = Flag::new(field, ambient, cols) {
                return Ok(f);
            }
        }
        Err(Error::DegenerateFlag("could not draw independent columns".into()))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim_f(&self) -> usize {
        self.columns.len()
    }

    /// `dim F - 3`.
    pub fn k(&self) -> usize {
        self.columns.len().saturating_sub(3)
    }

    pub fn d_column(&self) -> &[Scalar] {
        &self.columns[0]
    }

    pub fn l_columns(&self) -> &[Vec<Scalar>] {
        &self.columns[..2]
    }

    pub fn f_columns(&self) -> &[Vec<Scalar>] {
        &self.columns
    }

    /// Same flag with `L` replaced by two other vectors of `F` (given in `F`-coordinates),
    /// completing with the original columns.
    pub fn with_l(&self, a: &[Scalar], b: &[Scalar]) -> Result<Flag> {
        let to_ambient = |coords: &[Scalar]| -> Vec<Scalar> {
            (0..self.ambient)
                .map(|r| {
                    let mut acc = self.field.zero();
                    for (c, col) in coords.iter().zip(&self.columns) {
                        acc += &(c * &col[r]);
                    }
                    acc
                })
                .collect()
        };
        let mut cols = vec![to_ambient(a), to_ambient(b)];
        for c in &self.columns {
            if cols.len() == self.columns.len() {
                break;
            }
            let mut trial = cols.clone();
            trial.push(c.clone());
            if check_independent(self.field, self.ambient, &trial).is_ok() {
                cols = trial;
            }
        }
        Flag::new(self.field, self.ambient, cols)
    }

    /// The flag columns completed to a basis of the ambient space by standard vectors.
    pub fn adapted_basis(&self) -> ExactMatrix {
        let mut cols = self.columns.clone();
        for i in 0..self.ambient {
            if cols.len() == self.ambient {
                break;
            }
            let mut e = vec![self.field.zero(); self.ambient];
            e[i] = self.field.one();
            let mut trial = cols.clone();
            trial.push(e);
            if check_independent(self.field, self.ambient, &trial).is_ok() {
                cols = trial;
            }
        }
        ExactMatrix::from_columns(self.field, self.ambient, &cols).expect("columns have ambient length")
    }

    pub fn to_field(&self, target: Field) -> Result<Flag> {
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|s| s.to_field(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Flag::new(target, self.ambient, columns)
    }

    /// Columns as printable integers or fractions, for reports.
    pub fn display_columns(&self) -> Vec<Vec<String>> {
        self.columns.iter().map(|c| c.iter().map(Scalar::to_string).collect()).collect()
    }
}

/// A point of the affine cone over `Z(P)` over `F_p`, with the line it was found on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledPoint {
    pub point: Vec<Scalar>,
    pub prime: u64,
    pub seed: u64,
    pub line_base: Vec<Scalar>,
    pub line_direction: Vec<Scalar>,
    pub parameter: Scalar,
}

/// Restriction `t -> P(a + t b)` as a coefficient vector (degree at most `deg P`).
pub fn restrict_to_line(p: &MultiPoly, a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
    let field = p.field();
    let d = p.total_degree().unwrap_or(0) as i64;
    let xs: Vec<Scalar> = (0..=d).map(|t| field.from_i64(t)).collect();
    let ys = xs
        .iter()
        .map(|t| {
            let pt: Vec<Scalar> = a.iter().zip(b).map(|(ai, bi)| ai + &(t * bi)).collect();
            p.evaluate(&pt)
        })
        .collect::<Result<Vec<_>>>()?;
    univariate::interpolate(field, &xs, &ys)
}

/// Draws a random point of `Z(P)` over `F_p`: random line `a + t b`, full scan of `t` for
/// roots of the restriction, uniform choice among them.
pub fn sample_on_hypersurface(p: &MultiPoly, prime: u64, rng: &mut Prng) -> Result<SampledPoint> {
    let field = Field::prime(prime)?;
    let pm = p.to_field(field)?;
    if pm.is_zero() {
        return Err(Error::UnluckyPrime(prime));
    }
    if prime > 1 << 20 {
        return Err(Error::Unsupported(format!("root scan over F_{prime} is too large")));
    }
    let n = pm.nvars();
    let seed = rng.seed();
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let a = rng.vector(field, n);
        let b = rng.vector(field, n);
        let f = univariate::trim(restrict_to_line(&pm, &a, &b)?);
        if f.is_empty() {
            continue;
        }
        let roots: Vec<u64> = (0..prime)
            .filter(|&t| univariate::eval(&f, &field.from_i64(t as i64)).is_zero())
            .collect();
        if roots.is_empty() {
            continue;
        }
        let t = field.from_i64(roots[rng.below(roots.len() as u64) as usize] as i64);
        let point: Vec<Scalar> = a.iter().zip(&b).map(|(ai, bi)| ai + &(&t * bi)).collect();
        if point.iter().all(Scalar::is_zero) {
            continue;
        }
        debug_assert!(pm.evaluate(&point)?.is_zero());
        return Ok(SampledPoint {
            point,
            prime,
            seed,
            line_base: a,
            line_direction: b,
            parameter: t,
        });
    }
    Err(Error::SamplingExhausted {
        prime,
        attempts: MAX_SAMPLE_ATTEMPTS,
    })
}

/// Maximum Hessian rank over sampled points at one prime, with the rank histogram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankSample {
    pub prime: u64,
    pub trials: usize,
    pub rank: usize,
    pub histogram: BTreeMap<usize, usize>,
}

/// Generic rank of `H_{P,w}` for `w` on `Z(P)` over `F_p`. Trials run in parallel on
/// substreams `rng.split(i)`; the result does not depend on scheduling.
pub fn generic_hessian_rank(p: &MultiPoly, trials: usize, prime: u64, rng: &Prng) -> Result<RankSample> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is needed".into()));
    }
    let field = Field::prime(prime)?;
    let pm = p.to_field(field)?;
    if pm.is_zero() {
        return Err(Error::UnluckyPrime(prime));
    }
    let h = hessian(&pm)?;
    let ranks = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut sub = rng.split(i as u64);
            let w = sample_on_hypersurface(&pm, prime, &mut sub)?;
            Ok(h.at(&w.point)?.rank())
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut histogram = BTreeMap::new();
    for &r in &ranks {
        *histogram.entry(r).or_insert(0) += 1;
    }
    Ok(RankSample {
        prime,
        trials,
        rank: ranks.into_iter().max().expect("trials >= 1"),
        histogram,
    })
}

/// `dim Z(P)* = generic rank of H_{P,w} - 2`. Irreducibility is the caller's responsibility:
/// for a non-reduced `P = R^s` the Hessian of `P` sees only `R`'s tangent data on `Z(R)`
/// up to a multiple, and the estimate need not be the dual dimension of `Z(R)`.
pub fn katz_dual_dim(p: &MultiPoly, trials: usize, prime: u64, rng: &Prng) -> Result<i64> {
    Ok(generic_hessian_rank(p, trials, prime, rng)?.rank as i64 - 2)
}

/// Katz estimates at several primes; an unlucky prime is replaced by the next prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KatzReport {
    pub samples: Vec<RankSample>,
    pub dimension: i64,
    pub agree: bool,
}

pub fn katz_across_primes(p: &MultiPoly, trials: usize, primes: &[u64], rng: &Prng) -> Result<KatzReport> {
    if primes.is_empty() {
        return Err(Error::InvalidInput("at least one prime is needed".into()));
    }
    let mut samples = Vec::new();
    for (idx, &p0) in primes.iter().enumerate() {
        let mut prime = p0;
        let sub = rng.split(1_000_000 + idx as u64);
        let sample = loop {
            match generic_hessian_rank(p, trials, prime, &sub) {
                Err(Error::UnluckyPrime(_)) => prime = next_prime(prime + 1),
                other => break other?,
            }
        };
        samples.push(sample);
    }
    let dimension = samples.iter().map(|s| s.rank).max().expect("nonempty") as i64 - 2;
    let agree = samples.windows(2).all(|w| w[0].rank == w[1].rank);
    Ok(KatzReport {
        samples,
        dimension,
        agree,
    })
}

/// Restriction of `P` to the plane spanned by `a` (the `x` direction) and `b` (the `y`
/// direction), as a binary form of degree `deg P`.
pub fn restrict_to_plane(p: &MultiPoly, a: &[Scalar], b: &[Scalar], degree: usize) -> Result<BinaryForm> {
    let s = LinearSubstitution::from_columns(p.field(), p.nvars(), &[a.to_vec(), b.to_vec()])?;
    BinaryForm::from_multipoly(&p.substitute(&s)?, degree)
}

/// `true` when the restriction of `P` to `tries` random planes over `F_p` always has a
/// vanishing discriminant, a certificate-by-chance that `P` has a repeated factor.
pub fn repeated_factor_suspected(p: &MultiPoly, prime: u64, tries: usize, rng: &mut Prng) -> Result<bool> {
    let field = Field::prime(prime)?;
    let pm = p.to_field(field)?;
    let Some(d) = pm.homogeneous_degree() else {
        return Err(Error::Degree("repeated-factor test needs a homogeneous polynomial".into()));
    };
    if d < 2 || (d as u64).is_multiple_of(prime) {
        return Ok(false);
    }
    for _ in 0..tries {
        let a = rng.vector(field, pm.nvars());
        let b = rng.vector(field, pm.nvars());
        let f = restrict_to_plane(&pm, &a, &b, d as usize)?;
        if f.is_zero() {
            continue;
        }
        if !f.discriminant()?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Column-polarized determinant: the sum over columns `c` of `det(H_P|_F)` with column `c`
/// replaced by column `c` of `H_pi|_F`. This is the coefficient of `eps` in
/// `det(H_{P + eps pi}|_F)`.
pub fn mixed_hessian_det(p: &MultiPoly, pi: &MultiPoly, columns: &[Vec<Scalar>]) -> Result<MultiPoly> {
    if p.nvars() != pi.nvars() {
        return Err(Error::VariableCountMismatch(pi.nvars(), p.nvars()));
    }
    if !pi.is_zero() && pi.homogeneous_degree() != p.homogeneous_degree() {
        return Err(Error::Degree(format!(
            "degrees differ: {:?} and {:?}",
            p.homogeneous_degree(),
            pi.homogeneous_degree()
        )));
    }
    let hp = hessian(p)?.restrict(columns)?.rows();
    if pi.is_zero() {
        return Ok(MultiPoly::zero(p.field(), p.nvars()));
    }
    let hq = hessian(pi)?.restrict(columns)?.rows();
    let m = hp.len();
    let mut total = MultiPoly::zero(p.field(), p.nvars());
    for c in 0..m {
        let mut rows = hp.clone();
        for (r, row) in rows.iter_mut().enumerate() {
            row[c] = hq[r][c].clone();
        }
        total = &total + &poly_matrix_det(&rows)?;
    }
    Ok(total)
}
