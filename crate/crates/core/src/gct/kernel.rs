//! The Hessian of the determinant at corank-one matrices, and the tangent condition it
//! imposes on first-order deformations of `det_n`.
//!
//! At `w` of rank `n - 1` with left kernel `h` (`h^T w = 0`) and right kernel `k`, the kernel
//! of `H_{det,w}` is cut out by
//!
//! 1. `h^T X = 0` (image of `X` inside the image of `w`),
//! 2. `X k = 0` (kernel of `X` contains the kernel of `w`),
//! 3. `tr(G X) = 0` for any generalized inverse `G` of `w` (`w G w = w`).
//!
//! On matrices satisfying 1 and 2, `tr(G X)` does not depend on the choice of `G`. The
//! adjugate does not work as the third functional: `tr(adj(w) X)` already vanishes on them.

use serde::Serialize;

use crate::arith::{ExactMatrix, Field, Prng, Scalar};
use crate::error::{Error, Result};
use crate::polarize::{hessian, HessianMatrix, MAX_SAMPLE_ATTEMPTS};
use crate::poly::{univariate, MultiPoly};

use super::{det_poly, MatrixSpacePoly};

fn flatten(m: &ExactMatrix) -> Vec<Scalar> {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

fn unflatten(field: Field, n: usize, v: &[Scalar]) -> ExactMatrix {
    ExactMatrix::from_rows(field, v.chunks(n).map(<[Scalar]>::to_vec).collect()).expect("square chunks")
}

fn check_corank_one(w: &ExactMatrix) -> Result<usize> {
    let n = w.rows();
    if w.cols() != n || n < 2 {
        return Err(Error::InvalidInput(format!("need a square matrix of size >= 2, got {}x{}", n, w.cols())));
    }
    let r = w.rank();
    if r != n - 1 {
        return Err(Error::Rank {
            expected: n - 1,
            found: r,
        });
    }
    Ok(n)
}

fn det_hessian(n: usize, field: Field) -> Result<HessianMatrix> {
    hessian(&det_poly(n, field)?.poly)
}

/// Numeric `H_{det_n, w}` on `n^2` coordinates (row-major).
pub fn det_hessian_form(w: &ExactMatrix) -> Result<ExactMatrix> {
    let n = check_corank_one(w)?;
    det_hessian(n, w.field())?.at(&flatten(w))
}

/// Kernel of `H_{det,w}` and its comparison with the three linear conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub n: usize,
    pub hessian_rank: usize,
    /// Kernel basis as `n x n` matrices.
    pub kernel: Vec<ExactMatrix>,
    /// Generalized inverse used for the third condition.
    pub generalized_inverse: ExactMatrix,
    /// Every kernel element satisfies the three conditions.
    pub kernel_satisfies_conditions: bool,
    /// Dimension of the space cut out by the three conditions.
    pub conditions_dim: usize,
    /// Every solution of the three conditions lies in the kernel.
    pub conditions_in_kernel: bool,
}

impl KernelReport {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    /// Kernel and condition space coincide, with the expected dimensions.
    pub fn passes(&self) -> bool {
        let n = self.n;
        self.hessian_rank == 2 * n
            && self.kernel_dim() == (n - 1) * (n - 1) - 1
            && self.kernel_satisfies_conditions
            && self.conditions_in_kernel
            && self.conditions_dim == self.kernel_dim()
    }
}

fn single_kernel_vector(m: &ExactMatrix) -> Vec<Scalar> {
    let k = m.kernel_basis();
    debug_assert_eq!(k.cols(), 1);
    k.column(0)
}

/// `(w + c r)^-1` with `c`, `r` standard vectors pairing nontrivially with the left and
/// right kernels of `w`.
fn generalized_inverse(w: &ExactMatrix, h: &[Scalar], k: &[Scalar]) -> Result<ExactMatrix> {
    let n = w.rows();
    let ci = h.iter().position(|v| !v.is_zero()).expect("nonzero kernel vector");
    let rj = k.iter().position(|v| !v.is_zero()).expect("nonzero kernel vector");
    let mut m = w.clone();
    let bumped = m.get(ci, rj) + &w.field().one();
    m.set(ci, rj, bumped);
    let g = m.inverse()?;
    let wgw = w.mul(&g)?.mul(w)?;
    if &wgw != w || g.rows() != n {
        return Err(Error::InvalidInput("generalized inverse check failed".into()));
    }
    Ok(g)
}

fn condition_matrix(w: &ExactMatrix, h: &[Scalar], k: &[Scalar], g: &ExactMatrix) -> Result<ExactMatrix> {
    let n = w.rows();
    let field = w.field();
    let mut rows = Vec::new();
    for j in 0..n {
        let mut row = vec![field.zero(); n * n];
        for i in 0..n {
            row[i * n + j] = h[i].clone();
        }
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![field.zero(); n * n];
        for j in 0..n {
            row[i * n + j] = k[j].clone();
        }
        rows.push(row);
    }
    let mut row = vec![field.zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            row[i * n + j] = g.get(j, i).clone();
        }
    }
    rows.push(row);
    ExactMatrix::from_rows(field, rows)
}

fn all_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Kernel of `H_{det_n, w}` for `rank(w) = n - 1`, checked against the three conditions in
/// both directions.
pub fn det_hessian_kernel(w: &ExactMatrix) -> Result<KernelReport> {
    let n = check_corank_one(w)?;
    let field = w.field();
    let h_mat = det_hessian(n, field)?.at(&flatten(w))?;
    let kernel_m = h_mat.kernel_basis();
    let kernel: Vec<ExactMatrix> = (0..kernel_m.cols())
        .map(|c| unflatten(field, n, &kernel_m.column(c)))
        .collect();
    let h = single_kernel_vector(&w.transpose());
    let k = single_kernel_vector(w);
    let g = generalized_inverse(w, &h, &k)?;
    let cond = condition_matrix(w, &h, &k, &g)?;
    let mut kernel_satisfies_conditions = true;
    for c in 0..kernel_m.cols() {
        kernel_satisfies_conditions &= all_zero(&cond.mul_vec(&kernel_m.column(c))?);
    }
    let sol = cond.kernel_basis();
    let mut conditions_in_kernel = true;
    for c in 0..sol.cols() {
        conditions_in_kernel &= all_zero(&h_mat.mul_vec(&sol.column(c))?);
    }
    Ok(KernelReport {
        n,
        hessian_rank: h_mat.rank(),
        kernel,
        generalized_inverse: g,
        kernel_satisfies_conditions,
        conditions_dim: sol.cols(),
        conditions_in_kernel,
    })
}

/// Random `n x n` matrix of rank exactly `n - 1`, as a product of random `n x (n-1)` and
/// `(n-1) x n` factors.
pub fn random_corank_one(n: usize, field: Field, rng: &mut Prng) -> Result<ExactMatrix> {
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let a = ExactMatrix::from_rows(field, (0..n).map(|_| rng.vector(field, n - 1)).collect())?;
        let b = ExactMatrix::from_rows(field, (0..n - 1).map(|_| rng.vector(field, n)).collect())?;
        let w = a.mul(&b)?;
        if w.rank() == n - 1 {
            return Ok(w);
        }
    }
    Err(Error::SamplingExhausted {
        prime: field.characteristic(),
        attempts: MAX_SAMPLE_ATTEMPTS,
    })
}

/// A point `w` with `det(w) = pi(w) = 0`, `rank(w) = n - 1`, and `X` in the kernel of
/// `H_{det,w}` with `H_{pi,w}(X) != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentWitness {
    pub prime: u64,
    pub w: Vec<Vec<String>>,
    pub x: Vec<Vec<String>>,
    /// `X^T H_{pi,w} X`.
    pub value: String,
    /// Recomputed from scratch: `pi(w) = 0`, `rank w = n - 1`, `H_{det,w} X = 0`, value nonzero.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentReport {
    pub passes: bool,
    pub points_checked: usize,
    pub kernel_dim: usize,
    pub witness: Option<TangentWitness>,
}

fn matrix_strings(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(Scalar::to_string).collect()).collect()
}

fn bilinear(h: &ExactMatrix, a: &[Scalar], b: &[Scalar]) -> Result<Scalar> {
    let hb = h.mul_vec(b)?;
    let mut acc = h.field().zero();
    for (x, y) in a.iter().zip(&hb) {
        acc += &(x * y);
    }
    Ok(acc)
}

/// Point on `Z(det) ∩ Z(pi)` of rank `n - 1`: last column a combination of the others, so
/// `det` vanishes along the whole line; `pi` is scanned for roots.
fn sample_on_det_and_pi(pi: &MultiPoly, n: usize, prime: u64, rng: &mut Prng) -> Result<ExactMatrix> {
    let field = Field::prime(prime)?;
    let deg = pi.total_degree().unwrap_or(0) as i64;
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let c0: Vec<Vec<Scalar>> = (0..n).map(|_| rng.vector(field, n - 1)).collect();
        let c1: Vec<Vec<Scalar>> = (0..n).map(|_| rng.vector(field, n - 1)).collect();
        let mu = rng.vector(field, n - 1);
        let at = |t: &Scalar| -> ExactMatrix {
            let rows = (0..n)
                .map(|i| {
                    let mut row: Vec<Scalar> = (0..n - 1).map(|j| &c0[i][j] + &(t * &c1[i][j])).collect();
                    let mut last = field.zero();
                    for (v, m) in row.iter().zip(&mu) {
                        last += &(v * m);
                    }
                    row.push(last);
                    row
                })
                .collect();
            ExactMatrix::from_rows(field, rows).expect("rows of equal length")
        };
        let xs: Vec<Scalar> = (0..=deg).map(|t| field.from_i64(t)).collect();
        let ys = xs.iter().map(|t| pi.evaluate(&flatten(&at(t)))).collect::<Result<Vec<_>>>()?;
        let f = univariate::trim(univariate::interpolate(field, &xs, &ys)?);
        let t = if f.is_empty() {
            rng.scalar(field)
        } else {
            let roots: Vec<u64> = (0..prime)
                .filter(|&t| univariate::eval(&f, &field.from_i64(t as i64)).is_zero())
                .collect();
            if roots.is_empty() {
                continue;
            }
            field.from_i64(roots[rng.below(roots.len() as u64) as usize] as i64)
        };
        let w = at(&t);
        if w.rank() == n - 1 {
            return Ok(w);
        }
    }
    Err(Error::SamplingExhausted {
        prime,
        attempts: MAX_SAMPLE_ATTEMPTS,
    })
}

/// Tests the implication `pi(w) = 0 => H_{pi,w}(X) = 0` for `X` in the kernel of
/// `H_{det,w}`, at `trials` sampled points over `F_p`. Stops at the first witness.
pub fn tangent_condition_check(pi: &MatrixSpacePoly, trials: usize, prime: u64, rng: &Prng) -> Result<TangentReport> {
    let n = pi.n;
    if n < 2 {
        return Err(Error::InvalidInput("tangent check needs n >= 2".into()));
    }
    if pi.degree() != Some(n as u32) || pi.poly.is_zero() {
        return Err(Error::Degree(format!("pi must be a nonzero form of degree {n}")));
    }
    let field = Field::prime(prime)?;
    let pim = pi.poly.to_field(field)?;
    if pim.is_zero() {
        return Err(Error::UnluckyPrime(prime));
    }
    let hdet = det_hessian(n, field)?;
    let hpi = hessian(&pim)?;
    let mut report = TangentReport {
        passes: true,
        points_checked: 0,
        kernel_dim: 0,
        witness: None,
    };
    for t in 0..trials {
        let mut sub = rng.split(t as u64);
        let w = sample_on_det_and_pi(&pim, n, prime, &mut sub)?;
        let wf = flatten(&w);
        let kernel = hdet.at(&wf)?.kernel_basis();
        let hp = hpi.at(&wf)?;
        report.points_checked += 1;
        report.kernel_dim = kernel.cols();
        let cols: Vec<Vec<Scalar>> = (0..kernel.cols()).map(|c| kernel.column(c)).collect();
        let mut found: Option<Vec<Scalar>> = None;
        'search: for a in 0..cols.len() {
            for b in a..cols.len() {
                if bilinear(&hp, &cols[a], &cols[b])?.is_zero() {
                    continue;
                }
                let x = if a == b || !bilinear(&hp, &cols[a], &cols[a])?.is_zero() {
                    cols[a].clone()
                } else if !bilinear(&hp, &cols[b], &cols[b])?.is_zero() {
                    cols[b].clone()
                } else {
                    cols[a].iter().zip(&cols[b]).map(|(u, v)| u + v).collect()
                };
                found = Some(x);
                break 'search;
            }
        }
        if let Some(x) = found {
            let value = bilinear(&hp, &x, &x)?;
            let verified = pim.evaluate(&wf)?.is_zero()
                && w.rank() == n - 1
                && all_zero(&det_hessian_form(&w)?.mul_vec(&x)?)
                && !bilinear(&hessian(&pim)?.at(&wf)?, &x, &x)?.is_zero();
            report.passes = false;
            report.witness = Some(TangentWitness {
                prime,
                w: matrix_strings(&w),
                x: matrix_strings(&unflatten(field, n, &x)),
                value: value.to_string(),
                verified,
            });
            break;
        }
    }
    Ok(report)
}

/// Ratios `H_{pi,w}(X) / pi(w)` for two polynomials at random corank-one `w` and random `X` in
/// the kernel of `H_{det,w}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CRatioReport {
    pub samples: usize,
    pub skipped: usize,
    pub agree: bool,
}

pub fn c_ratio_consistency(
    pi1: &MatrixSpacePoly,
    pi2: &MatrixSpacePoly,
    trials: usize,
    prime: u64,
    rng: &Prng,
) -> Result<CRatioReport> {
    let n = pi1.n;
    if pi2.n != n {
        return Err(Error::VariableCountMismatch(pi2.n, n));
    }
    let field = Field::prime(prime)?;
    let (p1, p2) = (pi1.poly.to_field(field)?, pi2.poly.to_field(field)?);
    let (h1, h2) = (hessian(&p1)?, hessian(&p2)?);
    let hdet = det_hessian(n, field)?;
    let mut report = CRatioReport {
        samples: 0,
        skipped: 0,
        agree: true,
    };
    for t in 0..trials {
        let mut sub = rng.split(t as u64);
        let w = random_corank_one(n, field, &mut sub)?;
        let wf = flatten(&w);
        let kernel = hdet.at(&wf)?.kernel_basis();
        let coeffs = sub.vector(field, kernel.cols());
        let x = kernel.mul_vec(&coeffs)?;
        let (v1, v2) = (p1.evaluate(&wf)?, p2.evaluate(&wf)?);
        if v1.is_zero() || v2.is_zero() {
            report.skipped += 1;
            continue;
        }
        let r1 = bilinear(&h1.at(&wf)?, &x, &x)?.try_div(&v1)?;
        let r2 = bilinear(&h2.at(&wf)?, &x, &x)?.try_div(&v2)?;
        report.samples += 1;
        report.agree &= r1 == r2;
    }
    Ok(report)
}
