use degdual_core::arith::{Field, Prng, Scalar};
use degdual_core::dual::*;
use degdual_core::gct::{det_poly, padded_poly, perm_poly, p_lambda};
use degdual_core::polarize::Flag;
use degdual_core::poly::{BinaryForm, MultiPoly};
use degdual_core::Error;
use proptest::prelude::*;

const PRIMES: [u64; 2] = [10007, 32003];

fn q() -> Field {
    Field::Rational
}

fn random_binary(field: Field, degree: usize, rng: &mut Prng) -> BinaryForm {
    let mut c = rng.vector(field, degree + 1);
    if c[degree].is_zero() {
        c[degree] = field.one();
    }
    BinaryForm::new(field, c).unwrap()
}

/// Truncated power series division with field inverses.
fn rhat_by_series(qf: &BinaryForm, pf: &BinaryForm) -> Scalar {
    let field = pf.field();
    let (d, e) = (pf.degree(), qf.degree());
    let m = e - d + 1;
    let a: Vec<Scalar> = (0..=m).map(|j| if j <= e { qf.coeff(e - j).clone() } else { field.zero() }).collect();
    let b: Vec<Scalar> = (0..=m).map(|j| if j <= d { pf.coeff(d - j).clone() } else { field.zero() }).collect();
    let inv = b[0].inv().unwrap();
    let mut c: Vec<Scalar> = Vec::new();
    for j in 0..=m {
        let mut v = a[j].clone();
        for i in 1..=j {
            v -= &(&b[i] * &c[j - i]);
        }
        c.push(&v * &inv);
    }
    &b[0].pow(m as u32 + 1) * &c[m]
}

#[test]
fn rhat_matches_series_and_remainder() {
    let mut rng = Prng::new(11);
    for t in 0..60 {
        let field = if t % 2 == 0 { q() } else { Field::prime(10007).unwrap() };
        let d = 1 + rng.below(5) as usize;
        let e = d + rng.below(6) as usize;
        let pf = random_binary(field, d, &mut rng);
        let qf = random_binary(field, e, &mut rng);
        let r = rhat(&qf, &pf).unwrap();
        assert_eq!(r, rhat_by_series(&qf, &pf));
        let div = binary_euclid(&qf, &pf).unwrap();
        assert_eq!(div.reconstruct(&pf).unwrap(), qf);
        let m = (e - d + 1) as u32;
        assert_eq!(r, &pf.leading_x().pow(m) * div.remainder.coeff(d - 1));
        assert_eq!(r.is_zero(), div.remainder.coeff(d - 1).is_zero());
    }
}

#[test]
fn rhat_root_form() {
    // P = (x - a1 y)(x - a2 y), Q = (x - b1 y)(x - b2 y)(x - b3 y); the series
    // prod(1 - b y) / prod(1 - a y) has y^2 coefficient h2(a) - e1(b) h1(a) + e2(b).
    let (a, b) = ([2i64, -3], [5i64, 1, -4]);
    let lin = |r: i64| BinaryForm::from_i64(q(), &[-r, 1]);
    let pf = lin(a[0]).mul(&lin(a[1]));
    let qf = lin(b[0]).mul(&lin(b[1])).mul(&lin(b[2]));
    let h1 = a[0] + a[1];
    let h2 = a[0] * a[0] + a[0] * a[1] + a[1] * a[1];
    let e1 = b.iter().sum::<i64>();
    let e2 = b[0] * b[1] + b[0] * b[2] + b[1] * b[2];
    assert_eq!(rhat(&qf, &pf).unwrap(), q().from_i64(h2 - e1 * h1 + e2));
}

#[test]
fn constructed_multiple_has_zero_remainder() {
    let mut rng = Prng::new(3);
    let pf = random_binary(q(), 5, &mut rng);
    let qf = pf.mul(&BinaryForm::from_i64(q(), &[3, 0, 1]));
    let div = binary_euclid(&qf, &pf).unwrap();
    assert!(div.remainder.is_zero());
    assert!(rhat(&qf, &pf).unwrap().is_zero());
}

#[test]
fn degree_errors() {
    let pf = BinaryForm::from_i64(q(), &[1, 0, 1]);
    let qf = BinaryForm::from_i64(q(), &[1, 1]);
    assert!(matches!(binary_euclid(&qf, &pf), Err(Error::Degree(_))));
}

#[test]
fn scaling_over_rationals() {
    let mut rng = Prng::new(17);
    let one = q().one();
    for _ in 0..50 {
        let pf = random_binary(q(), 3, &mut rng);
        let qf = random_binary(q(), 7, &mut rng);
        assert!(rhat_scaling_check(&qf, &pf, &one, &one, &one).unwrap());
        let (a, b, l) = (q().from_i64(2), q().from_i64(3), q().from_i64(5));
        assert!(rhat_scaling_check(&qf, &pf, &a, &b, &l).unwrap());
    }
}

#[test]
fn scaling_mod_p() {
    let f = Field::prime(10007).unwrap();
    let mut rng = Prng::new(19);
    let pf = random_binary(f, 3, &mut rng);
    let qf = random_binary(f, 6, &mut rng);
    for _ in 0..20 {
        let (a, b, l) = (rng.nonzero_scalar(f), rng.nonzero_scalar(f), rng.nonzero_scalar(f));
        assert!(rhat_scaling_check(&qf, &pf, &a, &b, &l).unwrap());
    }
}

proptest! {
    #[test]
    fn division_reconstructs(seed in any::<u64>(), d in 1usize..5, extra in 0usize..5) {
        let mut rng = Prng::new(seed);
        let f = Field::prime(32003).unwrap();
        let pf = random_binary(f, d, &mut rng);
        let qf = random_binary(f, d + extra, &mut rng);
        let div = binary_euclid(&qf, &pf).unwrap();
        prop_assert_eq!(div.reconstruct(&pf).unwrap(), qf);
    }

    #[test]
    fn scaling_holds(seed in any::<u64>(), a in 1i64..50, b in 1i64..50, l in -20i64..20) {
        let mut rng = Prng::new(seed);
        let pf = random_binary(q(), 2, &mut rng);
        let qf = random_binary(q(), 5, &mut rng);
        let (a, b, l) = (q().from_i64(a), q().from_i64(b), q().from_i64(l));
        prop_assert!(rhat_scaling_check(&qf, &pf, &a, &b, &l).unwrap());
    }
}

fn flag_with_nonzero_lead(p: &MultiPoly, k: usize, field: Field, rng: &mut Prng) -> Flag {
    let pf = p.to_field(field).unwrap();
    loop {
        let f = Flag::random(field, p.nvars(), k, rng).unwrap();
        if !pf.evaluate(f.d_column()).unwrap().is_zero() {
            return f;
        }
    }
}

#[test]
fn determinant_satisfies_equations() {
    let mut rng = Prng::new(23);
    for (n, k) in [(3usize, 4usize), (4, 6)] {
        let det = det_poly(n, q()).unwrap().poly;
        for &p in &PRIMES {
            let f = Field::prime(p).unwrap();
            for _ in 0..25 {
                let flag = flag_with_nonzero_lead(&det, k, f, &mut rng);
                assert!(eval_dual_equation(&det, k, &flag).unwrap().is_zero());
                assert!(full_remainder_check(&det, k, &flag).unwrap().divides);
            }
        }
    }
}

#[test]
fn generic_cubic_violates_equations() {
    let mut rng = Prng::new(29);
    let cubic = MultiPoly::random_form(q(), 9, 3, &mut rng);
    let f = Field::prime(10007).unwrap();
    let flag = flag_with_nonzero_lead(&cubic, 4, f, &mut rng);
    assert!(!eval_dual_equation(&cubic, 4, &flag).unwrap().is_zero());
    let r = full_remainder_check(&cubic, 4, &flag).unwrap();
    assert!(!r.divides && !r.remainder.is_zero());
}

#[test]
fn cones_satisfy_equations() {
    let mut rng = Prng::new(31);
    let cone = MultiPoly::random_form(q(), 6, 3, &mut rng).with_nvars(9).unwrap();
    let f = Field::prime(10007).unwrap();
    for _ in 0..10 {
        let flag = flag_with_nonzero_lead(&cone, 4, f, &mut rng);
        let forms = DualEquation::new(&cone.to_field(f).unwrap(), 4).unwrap().forms(&flag).unwrap();
        assert!(forms.q.is_zero());
        assert!(eval_dual_equation(&cone, 4, &flag).unwrap().is_zero());
    }
}

#[test]
fn padded_permanent_passes() {
    let perm2 = perm_poly(2, q()).unwrap().poly;
    let p = padded_poly(&perm2, 3).unwrap().poly;
    let v = dual_membership(&p, 2, 8, &PRIMES, &Prng::new(0)).unwrap();
    assert!(v.verdict, "{v:?}");
}

#[test]
fn membership_verdicts() {
    let det4 = det_poly(4, q()).unwrap().poly;
    let v = dual_membership(&det4, 6, 8, &PRIMES, &Prng::new(0)).unwrap();
    assert!(v.verdict);
    assert_eq!(v.flags_checked, 16);
    assert!(v.witnesses.is_empty());
    let v = dual_membership(&det4, 5, 8, &PRIMES, &Prng::new(0)).unwrap();
    assert!(!v.verdict && !v.witnesses.is_empty());
    let perm3 = perm_poly(3, q()).unwrap().poly;
    let v = dual_membership(&perm3, 6, 8, &PRIMES, &Prng::new(0)).unwrap();
    assert!(!v.verdict && !v.witnesses.is_empty());
    let pl = p_lambda(3).unwrap().poly.poly;
    assert!(dual_membership(&pl, 4, 8, &PRIMES, &Prng::new(0)).unwrap().verdict);
    // k + 3 > N
    let cubic = MultiPoly::random_form(q(), 4, 3, &mut Prng::new(1));
    let v = dual_membership(&cubic, 2, 8, &PRIMES, &Prng::new(0)).unwrap();
    assert!(v.verdict && v.vacuous);
}

#[test]
fn membership_is_reproducible() {
    let perm3 = perm_poly(3, q()).unwrap().poly;
    let a = dual_membership(&perm3, 6, 4, &PRIMES, &Prng::new(5)).unwrap();
    let b = dual_membership(&perm3, 6, 4, &PRIMES, &Prng::new(5)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn torus_covariance() {
    let mut rng = Prng::new(37);
    for (k, d) in [(1usize, 3u32), (2, 3)] {
        let p = MultiPoly::random_form(q(), 6, d, &mut rng);
        let flag = flag_with_nonzero_lead(&p, k, q(), &mut rng);
        let ones = [q().one(), q().one(), q().one(), q().one()];
        assert!(weight_covariance_check(&p, k, &flag, &ones).unwrap());
        let t = [q().from_i64(2), q().from_i64(3), q().from_i64(5), q().from_i64(7)];
        assert!(weight_covariance_check(&p, k, &flag, &t).unwrap());
        assert!(!eval_dual_equation(&p, k, &flag).unwrap().is_zero());
    }
}

#[test]
fn degree_homogeneity() {
    let mut rng = Prng::new(41);
    let p = MultiPoly::random_form(q(), 6, 3, &mut rng);
    let flag = flag_with_nonzero_lead(&p, 2, q(), &mut rng);
    assert!(homogeneity_check(&p, 2, &flag, &q().from_i64(2)).unwrap());
    let base = eval_dual_equation(&p, 2, &flag).unwrap();
    let scaled = eval_dual_equation(&p.scale(&q().from_i64(2)), 2, &flag).unwrap();
    assert_eq!(scaled, &q().from_i64(2).pow(8) * &base);
}

#[test]
fn weight_identity() {
    for d in 3..=8 {
        for k in 0..=10 {
            let w = omega_weight(k, d).unwrap();
            assert_eq!(w.weighted_sum(), (d * (d - 1) * (k + 2)) as i64);
        }
    }
    for n in 3..=6usize {
        let w = omega_weight(2 * n - 2, n).unwrap();
        let n = n as i64;
        assert_eq!((w.b, w.c, w.c_index), (2 * n * n - 4 * n - 1, 2, 2 * n + 1));
        assert_eq!(w.a, 2 * n * (n - 1) * (n - 2));
        let alt = w.determinant_case_alternative.unwrap();
        assert_eq!((alt.degree, alt.a), (n * (n - 1), n * (n - 1) * (n - 2)));
    }
    assert!(omega_weight(0, 2).is_err());
}

#[test]
fn dc_bounds() {
    let perm2 = perm_poly(2, q()).unwrap().poly;
    assert_eq!(dc_lower_bound(&perm2, 8, &PRIMES, &Prng::new(0)).unwrap().bound, 2);
    let perm3 = perm_poly(3, q()).unwrap().poly;
    assert_eq!(dc_lower_bound(&perm3, 8, &PRIMES, &Prng::new(0)).unwrap().bound, 4);
    let cubic = MultiPoly::random_form(q(), 9, 3, &mut Prng::new(2));
    let b = dc_lower_bound(&cubic, 8, &PRIMES, &Prng::new(0)).unwrap();
    assert_eq!((b.dual_dim, b.bound), (7, 4));
}

#[test]
fn square_of_quadric_passes_small_k() {
    // P = R^2 is not reduced; the equations cannot tell it apart from a degenerate dual.
    let r = degdual_core::poly::parse_poly("x0*x1 - x2*x3").unwrap();
    let v = dual_membership(&r.pow(2), 1, 8, &PRIMES, &Prng::new(0)).unwrap();
    assert!(v.verdict && !v.vacuous);
}
