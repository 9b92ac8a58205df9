use degdual_core::arith::{ExactMatrix, Field, Prng};
use degdual_core::gct::*;
use degdual_core::polarize::katz_across_primes;
use degdual_core::poly::{parse_poly, MultiPoly};
use degdual_core::rep::Partition;

const PRIMES: [u64; 2] = [10007, 32003];

fn q() -> Field {
    Field::Rational
}

#[test]
fn det_hessian_adapted_form() {
    // w = diag(1,1,0): X^T H X = 2 sum_{i<3} (x33 xii - x3i xi3)
    let w = ExactMatrix::from_i64(q(), &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
    let h = det_hessian_form(&w).unwrap();
    let mut expect = ExactMatrix::zeros(q(), 9, 9);
    let one = q().one();
    let neg = -&one;
    for i in 0..2 {
        let (nn, ii, ni, in_) = (8, 4 * i, 6 + i, 3 * i + 2);
        expect.set(nn, ii, one.clone());
        expect.set(ii, nn, one.clone());
        expect.set(ni, in_, neg.clone());
        expect.set(in_, ni, neg.clone());
    }
    assert_eq!(h, expect);
    let r = det_hessian_kernel(&w).unwrap();
    assert_eq!(r.hessian_rank, 6);
    assert_eq!(r.kernel_dim(), 3);
    assert!(r.passes());
}

#[test]
fn det_hessian_kernel_n2() {
    let w = ExactMatrix::from_i64(q(), &[&[1, 0], &[0, 0]]);
    let r = det_hessian_kernel(&w).unwrap();
    assert_eq!(r.kernel_dim(), 0);
    assert!(r.passes());
}

#[test]
fn det_hessian_kernel_random_points() {
    let mut rng = Prng::new(7);
    for n in [3usize, 4] {
        for _ in 0..20 {
            let w = random_corank_one(n, q(), &mut rng).unwrap();
            let r = det_hessian_kernel(&w).unwrap();
            assert_eq!(r.hessian_rank, 2 * n);
            assert_eq!(r.kernel_dim(), (n - 1) * (n - 1) - 1);
            assert!(r.passes(), "n = {n}");
        }
    }
}

#[test]
fn rank_checked() {
    let w = ExactMatrix::identity(q(), 3);
    assert!(det_hessian_kernel(&w).is_err());
}

fn orbit_tangent(n: usize, rng: &mut Prng) -> MatrixSpacePoly {
    let det = det_poly(n, q()).unwrap();
    let nn = n * n;
    let u = ExactMatrix::from_rows(q(), (0..nn).map(|_| rng.vector(q(), nn)).collect()).unwrap();
    MatrixSpacePoly::new(n, infinitesimal_action(&det.poly, &u).unwrap()).unwrap()
}

#[test]
fn tangent_conditions() {
    let det = det_poly(3, q()).unwrap();
    let r = tangent_condition_check(&det, 8, 10007, &Prng::new(1)).unwrap();
    assert!(r.passes);
    let mut rng = Prng::new(2);
    for _ in 0..3 {
        let pi = orbit_tangent(3, &mut rng);
        let r = tangent_condition_check(&pi, 8, 10007, &Prng::new(3)).unwrap();
        assert!(r.passes, "{r:?}");
    }
    for n in [3, 4] {
        let perm = perm_poly(n, q()).unwrap();
        let r = tangent_condition_check(&perm, 8, 10007, &Prng::new(4)).unwrap();
        assert!(!r.passes);
        assert!(r.witness.unwrap().verified);
    }
}

#[test]
fn c_ratios() {
    let mut rng = Prng::new(5);
    let a = orbit_tangent(3, &mut rng);
    let b = orbit_tangent(3, &mut rng);
    let r = c_ratio_consistency(&a, &b, 10, 10007, &Prng::new(6)).unwrap();
    println!("{r:?}");
}

#[test]
fn pfaffian_curve_and_plambda() {
    let c = curve_limit_check(3).unwrap();
    assert!(c.passes, "{c:?}");
    assert_eq!(c.scalar.as_deref(), Some("1"));
    let pl = p_lambda(3).unwrap().poly;
    // vanishes at skew matrices
    let skew: Vec<_> = [0, 2, -3, -2, 0, 5, 3, -5, 0].iter().map(|&v| q().from_i64(v)).collect();
    assert!(pl.poly.evaluate(&skew).unwrap().is_zero());
    assert!(!pl.poly.is_zero());
}

#[test]
fn plambda_congruence() {
    let pl = p_lambda(3).unwrap().poly;
    let mut rng = Prng::new(9);
    for _ in 0..20 {
        let g = ExactMatrix::from_rows(q(), (0..3).map(|_| rng.vector(q(), 3)).collect()).unwrap();
        if g.rank() < 3 {
            continue;
        }
        let moved = congruence_action(&pl, &g).unwrap();
        let c = scalar_multiple(&moved.poly, &pl.poly).expect("multiple");
        let det = g.determinant().unwrap();
        assert_eq!(c, &det * &det);
    }
}

#[test]
fn stabilizers() {
    assert_eq!(stabilizer_dim(&det_poly(3, q()).unwrap()).unwrap(), 17);
    assert_eq!(stabilizer_dim(&p_lambda(3).unwrap().poly).unwrap(), 18);
    for n in [2usize, 3] {
        let mut e = vec![0u32; n * n];
        e[0] = n as u32;
        let p = MultiPoly::from_i64_terms(q(), n * n, &[(&e, 1)]);
        let n4 = n.pow(4);
        assert_eq!(stabilizer_dim(&MatrixSpacePoly::new(n, p).unwrap()).unwrap(), n4 - n * n + 1);
    }
}

#[test]
fn plambda_dual_dim() {
    let pl = p_lambda(3).unwrap().poly;
    let r = katz_across_primes(&pl.poly, 8, &PRIMES, &Prng::new(0)).unwrap();
    assert_eq!(r.dimension, 4);
    assert!(r.agree);
}

#[test]
fn padding() {
    let perm2 = perm_poly(2, q()).unwrap().poly;
    for d in 3..=5 {
        let c = padded_dual_check(&perm2, d, 8, &PRIMES, &Prng::new(d as u64)).unwrap();
        assert_eq!(c.base_dual_dim, 2);
        assert!(c.passes(), "{c:?}");
        if let Some(b) = &c.block {
            assert!(!b.cross_terms_vanish);
        }
    }
    let perm3 = perm_poly(3, q()).unwrap().poly;
    let c = padded_dual_check(&perm3, 4, 8, &PRIMES, &Prng::new(1)).unwrap();
    assert_eq!((c.base_dual_dim, c.padded_dual_dim), (7, 7));
    assert!(c.passes());
    let p = padded_poly(&perm2, 4).unwrap();
    assert_eq!(p.ambient(), 5);
    assert!(padded_poly(&perm2, 2).is_err());
}

#[test]
fn essential_variables() {
    let p = parse_poly("x0^3 + x1*x2^2").unwrap().with_nvars(9).unwrap();
    assert_eq!(essential_vars(&p).unwrap(), 3);
    assert_eq!(essential_vars(&det_poly(3, q()).unwrap().poly).unwrap(), 9);
    let cube = parse_poly("x0 + x1").unwrap().with_nvars(9).unwrap().pow(3);
    assert_eq!(essential_vars(&cube).unwrap(), 1);
    assert!(subspace_membership(&cube, 0).unwrap());
}

#[test]
fn subvariety() {
    let mut rng = Prng::new(0);
    let s = sub_variety_dims(0, 2, 3, &mut rng).unwrap();
    assert_eq!((s.empirical, s.binomial_formula), (4, 4));
    let s = sub_variety_dims(1, 3, 5, &mut rng).unwrap();
    assert_eq!((s.empirical, s.binomial_formula, s.linear_formula), (15, 15, 8));
    assert!(!s.linear_agrees);
}

#[test]
fn immanants_specialize() {
    for n in 1..=5u32 {
        let det = det_poly(n as usize, q()).unwrap();
        let perm = perm_poly(n as usize, q()).unwrap();
        assert_eq!(immanant_matrix_poly(&Partition::column(n), q()).unwrap(), det);
        assert_eq!(immanant_matrix_poly(&Partition::row(n), q()).unwrap(), perm);
    }
}
