//! Equations for hypersurfaces with degenerate duals, evaluated flag by flag.
//!
//! For a flag `D ⊂ L ⊂ F` with `dim F = k + 3`, write points of `L` as `x v1 + y v2` where
//! `v1` spans `D`. Then `Q_L(x, y) = det(B^T H_P(x v1 + y v2) B)` (with `B` the basis of `F`)
//! is a binary form of degree `e = (k + 3)(d - 2)` and `P_L` is the restriction of `P`. If
//! `dim Z(P)* <= k` then `P_L` divides `Q_L`. Division is done after setting `y = 1`:
//!
//! ```text
//! Q_L = P_L D_L + y^(e-d+1) R_L
//! ```
//!
//! and the equation attached to the flag is the top remainder coefficient made polynomial,
//! `rhat = p_d^(e-d+2) [y^(e-d+1)] (Q(1,y) / P(1,y)) = p_d^(e-d+1) R_{L,d-1}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{next_prime, ExactMatrix, Field, Prng, Scalar};
use crate::error::{Error, Result};
use crate::polarize::{hessian, katz_across_primes, Flag, HessianMatrix, KatzReport, MAX_SAMPLE_ATTEMPTS};
use crate::poly::{univariate, BinaryForm, LinearSubstitution, MultiPoly};

/// Quotient and remainder of `Q_L` by `P_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionResult {
    /// `D_L`, degree `e - d`.
    pub quotient: BinaryForm,
    /// `R_L`, degree `d - 1`.
    pub remainder: BinaryForm,
}

impl DivisionResult {
    /// `P_L D_L + y^(e-d+1) R_L`.
    pub fn reconstruct(&self, p: &BinaryForm) -> Result<BinaryForm> {
        let shift = self.quotient.degree() + 1;
        p.mul(&self.quotient).add(&self.remainder.times_y_power(shift))
    }
}

fn check_pair(q: &BinaryForm, p: &BinaryForm) -> Result<()> {
    if q.field() != p.field() {
        return Err(Error::FieldMismatch(q.field(), p.field()));
    }
    if p.degree() < 1 || q.degree() < p.degree() {
        return Err(Error::Degree(format!(
            "division needs e >= d >= 1, got e = {}, d = {}",
            q.degree(),
            p.degree()
        )));
    }
    if p.leading_x().is_zero() {
        return Err(Error::LineAtInfinity);
    }
    Ok(())
}

/// Division with remainder of binary forms in the chart `y = 1`.
pub fn binary_euclid(q: &BinaryForm, p: &BinaryForm) -> Result<DivisionResult> {
    check_pair(q, p)?;
    let field = p.field();
    let (d, e) = (p.degree(), q.degree());
    let lead_inv = p.leading_x().inv().expect("nonzero leading coefficient");
    let mut rem: Vec<Scalar> = q.coeffs().to_vec();
    let mut quot = vec![field.zero(); e - d + 1];
    for i in (0..=e - d).rev() {
        let c = &rem[i + d] * &lead_inv;
        if !c.is_zero() {
            for (j, pj) in p.coeffs().iter().enumerate() {
                rem[i + j] -= &(&c * pj);
            }
        }
        quot[i] = c;
    }
    rem.truncate(d);
    Ok(DivisionResult {
        quotient: BinaryForm::new(field, quot)?,
        remainder: BinaryForm::new(field, rem)?,
    })
}

/// `p_d^(m+1) [y^m] (Q(1,y) / P(1,y))` with `m = e - d + 1`, computed without division.
pub fn rhat(q: &BinaryForm, p: &BinaryForm) -> Result<Scalar> {
    check_pair(q, p)?;
    let field = p.field();
    let (d, e) = (p.degree(), q.degree());
    let m = e - d + 1;
    let a = |j: usize| if j <= e { q.coeff(e - j).clone() } else { field.zero() };
    let b = |j: usize| if j <= d { p.coeff(d - j).clone() } else { field.zero() };
    let b0 = b(0);
    let b0_pows: Vec<Scalar> = (0..=m).map(|i| b0.pow(i as u32)).collect();
    // c[j] = b0^(j+1) * (series coefficient of y^j)
    let mut c: Vec<Scalar> = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let mut v = &b0_pows[j] * &a(j);
        for i in 1..=j.min(d) {
            v -= &(&(&b(i) * &b0_pows[i - 1]) * &c[j - i]);
        }
        c.push(v);
    }
    Ok(c.pop().expect("m + 1 entries"))
}

/// `rhat(alpha Q(x, lambda y), beta P(x, lambda y)) == alpha beta^m lambda^m rhat(Q, P)`
/// with `m = e - d + 1`.
pub fn rhat_scaling_check(q: &BinaryForm, p: &BinaryForm, alpha: &Scalar, beta: &Scalar, lambda: &Scalar) -> Result<bool> {
    let m = (q.degree() + 1 - p.degree()) as u32;
    let lhs = rhat(&q.scale_y(lambda).scale(alpha), &p.scale_y(lambda).scale(beta))?;
    let rhs = &(&(alpha * &beta.pow(m)) * &lambda.pow(m)) * &rhat(q, p)?;
    Ok(lhs == rhs)
}

/// `Q_L` and `P_L` at a flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagForms {
    pub q: BinaryForm,
    pub p: BinaryForm,
}

/// Prepared data for repeated evaluation at many flags.
pub struct DualEquation {
    poly: MultiPoly,
    hessian: HessianMatrix,
    degree: usize,
    k: usize,
}

impl DualEquation {
    pub fn new(p: &MultiPoly, k: usize) -> Result<Self> {
        let d = p
            .homogeneous_degree()
            .ok_or_else(|| Error::Degree("a nonzero homogeneous polynomial is required".into()))?
            as usize;
        if p.is_zero() || d < 3 {
            return Err(Error::Degree(format!("the equations need degree at least 3, got {d}")));
        }
        Ok(DualEquation {
            poly: p.clone(),
            hessian: hessian(p)?,
            degree: d,
            k,
        })
    }

    /// Same equation with coefficients mapped into another field.
    pub fn to_field(&self, target: Field) -> Result<Self> {
        Ok(DualEquation {
            poly: self.poly.to_field(target)?,
            hessian: self.hessian.to_field(target)?,
            degree: self.degree,
            k: self.k,
        })
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    /// `e = (k + 3)(d - 2)`.
    pub fn e(&self) -> usize {
        (self.k + 3) * (self.degree - 2)
    }

    /// `(k + 2)(d - 1)`, the degree of the equation in the coefficients of `P`.
    pub fn equation_degree(&self) -> usize {
        (self.k + 2) * (self.degree - 1)
    }

    fn check_flag(&self, flag: &Flag) -> Result<()> {
        if flag.field() != self.field() {
            return Err(Error::FieldMismatch(flag.field(), self.field()));
        }
        if flag.ambient() != self.poly.nvars() {
            return Err(Error::VariableCountMismatch(flag.ambient(), self.poly.nvars()));
        }
        if flag.dim_f() != self.k + 3 {
            return Err(Error::DegenerateFlag(format!(
                "dim F = {} but k + 3 = {}",
                flag.dim_f(),
                self.k + 3
            )));
        }
        Ok(())
    }

    /// Restrictions `Q_L` and `P_L` at a flag.
    pub fn forms(&self, flag: &Flag) -> Result<FlagForms> {
        self.check_flag(flag)?;
        let field = self.field();
        let (d, e) = (self.degree, self.e());
        let b = ExactMatrix::from_columns(field, flag.ambient(), flag.f_columns())?;
        let bt = b.transpose();
        let (v1, v2) = (flag.d_column(), &flag.l_columns()[1]);
        let point = |x: i64| -> Vec<Scalar> {
            let xs = field.from_i64(x);
            v1.iter().zip(v2).map(|(a, c)| &(&xs * a) + c).collect()
        };
        let xs: Vec<Scalar> = (0..=e.max(d) as i64).map(|x| field.from_i64(x)).collect();
        let mut q_vals = Vec::with_capacity(e + 1);
        let mut p_vals = Vec::with_capacity(d + 1);
        for x in 0..=e.max(d) {
            let w = point(x as i64);
            if x <= e {
                let h = self.hessian.at(&w)?;
                q_vals.push(bt.mul(&h)?.mul(&b)?.determinant()?);
            }
            if x <= d {
                p_vals.push(self.poly.evaluate(&w)?);
            }
        }
        let to_form = |vals: &[Scalar], deg: usize| -> Result<BinaryForm> {
            let mut c = univariate::interpolate(field, &xs[..=deg], vals)?;
            c.resize(deg + 1, field.zero());
            BinaryForm::new(field, c)
        };
        Ok(FlagForms {
            q: to_form(&q_vals, e)?,
            p: to_form(&p_vals, d)?,
        })
    }

    /// `rhat(Q_L, P_L)` at a flag.
    pub fn evaluate(&self, flag: &Flag) -> Result<Scalar> {
        let f = self.forms(flag)?;
        rhat(&f.q, &f.p)
    }

    /// The full remainder `R_L` at a flag.
    pub fn remainder(&self, flag: &Flag) -> Result<BinaryForm> {
        let f = self.forms(flag)?;
        Ok(binary_euclid(&f.q, &f.p)?.remainder)
    }
}

/// The equation attached to `(P, k)` at a flag with `dim F = k + 3`.
pub fn eval_dual_equation(p: &MultiPoly, k: usize, flag: &Flag) -> Result<Scalar> {
    DualEquation::new(&p.to_field(flag.field())?, k)?.evaluate(flag)
}

/// Outcome of [`full_remainder_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemainderCheck {
    pub divides: bool,
    pub remainder: BinaryForm,
}

/// Whether `P_L` divides `Q_L` at the flag (the whole remainder vanishes).
pub fn full_remainder_check(p: &MultiPoly, k: usize, flag: &Flag) -> Result<RemainderCheck> {
    let remainder = DualEquation::new(&p.to_field(flag.field())?, k)?.remainder(flag)?;
    Ok(RemainderCheck {
        divides: remainder.is_zero(),
        remainder,
    })
}

/// A flag at which `P_L` does not divide `Q_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipWitness {
    pub prime: u64,
    pub trial: usize,
    pub flag: Vec<Vec<String>>,
    pub remainder: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipVerdict {
    pub verdict: bool,
    pub k: usize,
    pub trials: usize,
    pub primes: Vec<u64>,
    pub flags_checked: usize,
    pub resampled: usize,
    pub seed: u64,
    pub witnesses: Vec<MembershipWitness>,
    /// Set when `k + 3` exceeds the number of variables, so the condition holds vacuously.
    pub vacuous: bool,
}

enum TrialOutcome {
    Divides { resampled: usize },
    Fails { witness: MembershipWitness, resampled: usize },
}

fn membership_trial(eq: &DualEquation, prime: u64, trial: usize, mut rng: Prng) -> Result<TrialOutcome> {
    let field = eq.field();
    let n = eq.poly.nvars();
    for attempt in 0..MAX_SAMPLE_ATTEMPTS {
        let flag = Flag::random(field, n, eq.k, &mut rng)?;
        match eq.remainder(&flag) {
            Err(Error::LineAtInfinity) => continue,
            Err(e) => return Err(e),
            Ok(r) if r.is_zero() => return Ok(TrialOutcome::Divides { resampled: attempt }),
            Ok(r) => {
                return Ok(TrialOutcome::Fails {
                    witness: MembershipWitness {
                        prime,
                        trial,
                        flag: flag.display_columns(),
                        remainder: r.coeffs().iter().map(Scalar::to_string).collect(),
                    },
                    resampled: attempt,
                })
            }
        }
    }
    Err(Error::SamplingExhausted {
        prime,
        attempts: MAX_SAMPLE_ATTEMPTS,
    })
}

/// Checks divisibility of `Q_L` by `P_L` at `trials` random flags for every prime. Flags
/// with `P(v1) = 0` are redrawn. The verdict is the conjunction; failures carry witnesses.
pub fn dual_membership(p: &MultiPoly, k: usize, trials: usize, primes: &[u64], rng: &Prng) -> Result<MembershipVerdict> {
    if trials == 0 || primes.is_empty() {
        return Err(Error::InvalidInput("at least one trial and one prime are needed".into()));
    }
    let base = DualEquation::new(p, k)?;
    let mut verdict = MembershipVerdict {
        verdict: true,
        k,
        trials,
        primes: Vec::new(),
        flags_checked: 0,
        resampled: 0,
        seed: rng.seed(),
        witnesses: Vec::new(),
        vacuous: k + 3 > p.nvars(),
    };
    if verdict.vacuous {
        verdict.primes = primes.to_vec();
        return Ok(verdict);
    }
    for (idx, &p0) in primes.iter().enumerate() {
        let mut prime = p0;
        let eq = loop {
            let field = Field::prime(prime)?;
            match base.to_field(field) {
                Ok(eq) if !eq.poly.is_zero() && eq.poly.homogeneous_degree() == base.poly.homogeneous_degree() => {
                    break eq
                }
                Ok(_) | Err(Error::UnluckyPrime(_)) => prime = next_prime(prime + 1),
                Err(e) => return Err(e),
            }
        };
        let prime_rng = rng.split(idx as u64);
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|t| membership_trial(&eq, prime, t, prime_rng.split(t as u64)))
            .collect::<Result<Vec<_>>>()?;
        verdict.primes.push(prime);
        for o in outcomes {
            verdict.flags_checked += 1;
            match o {
                TrialOutcome::Divides { resampled } => verdict.resampled += resampled,
                TrialOutcome::Fails { witness, resampled } => {
                    verdict.resampled += resampled;
                    verdict.verdict = false;
                    verdict.witnesses.push(witness);
                }
            }
        }
    }
    Ok(verdict)
}

/// The dominant weight `a w_1 + b w_2 + c w_{k+3}` of the equations for `(k, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightVector {
    pub k: i64,
    pub d: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    /// Index of the third fundamental weight, `k + 3`.
    pub c_index: i64,
    /// `(k + 2)(d - 1)`.
    pub degree: i64,
    /// For `k = 2d - 2` (the determinant case `d = n`), the alternative values
    /// `n(n-1)` for the degree and `n(n-1)(n-2)` for `a`, reported next to the ones above.
    pub determinant_case_alternative: Option<AlternativeWeights>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlternativeWeights {
    pub degree: i64,
    pub a: i64,
}

impl WeightVector {
    /// `a + 2b + (k+3)c`.
    pub fn weighted_sum(&self) -> i64 {
        self.a + 2 * self.b + self.c_index * self.c
    }
}

pub fn omega_weight(k: usize, d: usize) -> Result<WeightVector> {
    if d < 3 {
        return Err(Error::Degree(format!("weights need d >= 3, got {d}")));
    }
    let (k, d) = (k as i64, d as i64);
    let alt = (k == 2 * d - 2).then(|| AlternativeWeights {
        degree: d * (d - 1),
        a: d * (d - 1) * (d - 2),
    });
    Ok(WeightVector {
        k,
        d,
        a: (d - 1) * (d - 2) * (k + 2),
        b: d * (k + 2) - 2 * k - 5,
        c: 2,
        c_index: k + 3,
        degree: (k + 2) * (d - 1),
        determinant_case_alternative: alt,
    })
}

/// Exponents of `(t_x, t_y, t_z, t_w)` in the factor picked up by the equation when `P`
/// is acted on by the torus adapted to the flag.
pub fn torus_exponents(k: usize, d: usize) -> [u64; 4] {
    let (k, d) = (k as u64, d as u64);
    let e = (k + 3) * (d - 2);
    [2 + e + (d - 1) * (e - d + 1), e - d + 3, 2 * (k + 1), 0]
}

/// `T.P = P ∘ (C T C^-1)` for `C` the adapted basis and `T = diag(t_x, t_y, t_z.., t_w..)`
/// (`t_z` on the remaining `k + 1` columns of `F`, `t_w` on the complement).
pub fn torus_act(p: &MultiPoly, flag: &Flag, t: &[Scalar; 4]) -> Result<MultiPoly> {
    let field = flag.field();
    let n = flag.ambient();
    let c = flag.adapted_basis();
    let m = flag.dim_f();
    let mut diag = ExactMatrix::zeros(field, n, n);
    for i in 0..n {
        let ti = match i {
            0 => &t[0],
            1 => &t[1],
            _ if i < m => &t[2],
            _ => &t[3],
        };
        diag.set(i, i, ti.clone());
    }
    let g = c.mul(&diag)?.mul(&c.inverse()?)?;
    p.to_field(field)?.substitute(&LinearSubstitution::new(g))
}

/// Compares `eval(T.P)` with `eval(P) t_x^ex t_y^ey t_z^ez t_w^ew` at the flag.
pub fn weight_covariance_check(p: &MultiPoly, k: usize, flag: &Flag, t: &[Scalar; 4]) -> Result<bool> {
    let d = p
        .homogeneous_degree()
        .ok_or_else(|| Error::Degree("homogeneous polynomial required".into()))? as usize;
    let lhs = eval_dual_equation(&torus_act(p, flag, t)?, k, flag)?;
    let base = eval_dual_equation(p, k, flag)?;
    let ex = torus_exponents(k, d);
    let mut rhs = base;
    for (ti, &x) in t.iter().zip(&ex) {
        rhs = &rhs * &ti.pow(x as u32);
    }
    Ok(lhs == rhs)
}

/// `eval(lambda P) == lambda^((k+2)(d-1)) eval(P)` at the flag.
pub fn homogeneity_check(p: &MultiPoly, k: usize, flag: &Flag, lambda: &Scalar) -> Result<bool> {
    let pf = p.to_field(flag.field())?;
    let eq = DualEquation::new(&pf, k)?;
    let lhs = eval_dual_equation(&pf.scale(lambda), k, flag)?;
    let rhs = &lambda.pow(eq.equation_degree() as u32) * &eq.evaluate(flag)?;
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DcBound {
    pub dual_dim: i64,
    pub bound: i64,
    pub katz: KatzReport,
}

/// `ceil((dim Z(P)* + 1) / 2)`.
pub fn dc_bound_from_dual_dim(dual_dim: i64) -> i64 {
    (dual_dim + 2).div_euclid(2)
}

pub fn dc_lower_bound(p: &MultiPoly, trials: usize, primes: &[u64], rng: &Prng) -> Result<DcBound> {
    let katz = katz_across_primes(p, trials, primes, rng)?;
    Ok(DcBound {
        dual_dim: katz.dimension,
        bound: dc_bound_from_dual_dim(katz.dimension),
        katz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn hand_division() {
        // x^2 + y^2 = (x - y)(x + y) + y^2 * 2
        let qf = BinaryForm::from_i64(q(), &[1, 0, 1]);
        let pf = BinaryForm::from_i64(q(), &[-1, 1]);
        let r = binary_euclid(&qf, &pf).unwrap();
        assert_eq!(r.quotient, BinaryForm::from_i64(q(), &[1, 1]));
        assert_eq!(r.remainder, BinaryForm::from_i64(q(), &[2]));
        assert_eq!(r.reconstruct(&pf).unwrap(), qf);
    }

    #[test]
    fn sum_of_cubes() {
        let qf = BinaryForm::from_i64(q(), &[1, 0, 0, 1]);
        let pf = BinaryForm::from_i64(q(), &[1, 1]);
        let r = binary_euclid(&qf, &pf).unwrap();
        assert_eq!(r.quotient, BinaryForm::from_i64(q(), &[1, -1, 1]));
        assert!(r.remainder.is_zero());
    }

    #[test]
    fn line_at_infinity() {
        let qf = BinaryForm::from_i64(q(), &[1, 0, 1]);
        let pf = BinaryForm::from_i64(q(), &[1, 0]);
        assert_eq!(binary_euclid(&qf, &pf), Err(Error::LineAtInfinity));
        assert_eq!(rhat(&qf, &pf), Err(Error::LineAtInfinity));
    }

    #[test]
    fn rhat_examples() {
        // Q = x^3, P = x^2 - y^2
        let qf = BinaryForm::from_i64(q(), &[0, 0, 0, 1]);
        let pf = BinaryForm::from_i64(q(), &[-1, 0, 1]);
        assert_eq!(rhat(&qf, &pf).unwrap(), q().one());
        // Q = x^e, P = x^d
        let qf = BinaryForm::from_i64(q(), &[0, 0, 0, 0, 1]);
        let pf = BinaryForm::from_i64(q(), &[0, 0, 1]);
        assert!(rhat(&qf, &pf).unwrap().is_zero());
        // Q = P
        let pf = BinaryForm::from_i64(q(), &[3, -1, 2]);
        assert!(rhat(&pf, &pf).unwrap().is_zero());
    }

    #[test]
    fn weights_small_case() {
        let w = omega_weight(0, 3).unwrap();
        assert_eq!((w.a, w.b, w.c, w.degree), (4, 1, 2, 4));
        assert!(w.determinant_case_alternative.is_none());
        let w = omega_weight(4, 3).unwrap();
        assert_eq!(w.b, 2 * 9 - 12 - 1);
        assert_eq!(w.determinant_case_alternative, Some(AlternativeWeights { degree: 6, a: 6 }));
    }

    #[test]
    fn dc_bound_rounding() {
        assert_eq!(dc_bound_from_dual_dim(2), 2);
        assert_eq!(dc_bound_from_dual_dim(7), 4);
        assert_eq!(dc_bound_from_dual_dim(4), 3);
    }
}
