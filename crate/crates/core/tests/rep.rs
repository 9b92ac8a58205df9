use degdual_core::arith::{ExactMatrix, Field, Prng, Scalar};
use degdual_core::rep::*;

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn classification() {
    for n in 4..=6u32 {
        let got = classify_partitions(n).unwrap();
        assert_eq!(got, vec![Partition::hook(n, 2), Partition::column(n)], "n = {n}");
        assert_eq!(class_function_space_dim(n).unwrap(), 2);
    }
}

#[test]
fn proof_relations_on_solution_basis() {
    for n in 4..=6u32 {
        for f in class_function_space(n).unwrap() {
            for r in proof_relations(&f).unwrap() {
                assert!(r.is_zero(), "n = {n}");
            }
        }
    }
}

#[test]
fn classified_characters_solve_the_system() {
    for n in 4..=6u32 {
        for lambda in [Partition::column(n), Partition::hook(n, 2)] {
            let f = ClassFunction::from_character(&lambda).unwrap();
            for r in proof_relations(&f).unwrap() {
                assert!(r.is_zero());
            }
        }
    }
}

fn random_permutation(n: usize, rng: &mut Prng) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        v.swap(i, j);
    }
    Permutation::new(v).unwrap()
}

#[test]
fn characters_are_class_functions() {
    let mut rng = Prng::new(1);
    for n in 2..=6u32 {
        for lambda in Partition::all(n) {
            for mu in Partition::all(n) {
                let rep = Permutation::class_representative(&mu);
                let value = character(&lambda, &mu).unwrap();
                for _ in 0..100 / Partition::all(n).len().max(1) + 1 {
                    let g = random_permutation(n as usize, &mut rng);
                    let conj = g.compose(&rep).compose(&g.inverse());
                    assert_eq!(conj.cycle_type(), mu);
                    assert_eq!(character(&lambda, &conj.cycle_type()).unwrap(), value);
                }
            }
        }
    }
}

#[test]
fn row_orthogonality() {
    for n in [4u32, 5, 6] {
        let fact: u64 = (1..=n as u64).product();
        for l1 in Partition::all(n) {
            for l2 in Partition::all(n) {
                let s: i128 = Partition::all(n)
                    .iter()
                    .map(|mu| {
                        let class = (fact / mu.centralizer_order()) as i128;
                        class * (character(&l1, mu).unwrap() * character(&l2, mu).unwrap()) as i128
                    })
                    .sum();
                assert_eq!(s, if l1 == l2 { fact as i128 } else { 0 });
            }
        }
    }
}

#[test]
fn conjugate_partition_twists_by_sign() {
    for lambda in Partition::all(6) {
        for mu in Partition::all(6) {
            assert_eq!(
                character(&lambda.conjugate(), &mu).unwrap(),
                mu.sign() * character(&lambda, &mu).unwrap()
            );
        }
    }
}

fn random_matrix(n: usize, rng: &mut Prng) -> ExactMatrix {
    ExactMatrix::from_rows(Field::Rational, (0..n).map(|_| rng.vector(Field::Rational, n)).collect()).unwrap()
}

fn swap_rows(m: &ExactMatrix, a: usize, b: usize) -> ExactMatrix {
    let mut rows: Vec<Vec<Scalar>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    rows.swap(a, b);
    ExactMatrix::from_rows(m.field(), rows).unwrap()
}

#[test]
fn immanant_row_behaviour() {
    let q = Field::Rational;
    let mut rng = Prng::new(3);
    for _ in 0..5 {
        let m = random_matrix(4, &mut rng);
        let s = swap_rows(&m, 0, 2);
        let det = immanant(&Partition::column(4), &m).unwrap();
        assert_eq!(det, m.determinant().unwrap());
        assert_eq!(immanant(&Partition::column(4), &s).unwrap(), -det);
        let perm = immanant(&Partition::row(4), &m).unwrap();
        assert_eq!(immanant(&Partition::row(4), &s).unwrap(), perm);
        // multilinear in row 1
        let lambda = p(&[2, 1, 1]);
        let r1 = rng.vector(q, 4);
        let r2 = rng.vector(q, 4);
        let with = |r: &[Scalar]| {
            let mut rows: Vec<Vec<Scalar>> = (0..4).map(|i| m.row(i).to_vec()).collect();
            rows[1] = r.to_vec();
            immanant(&lambda, &ExactMatrix::from_rows(q, rows).unwrap()).unwrap()
        };
        let c = q.from_i64(3);
        let combo: Vec<Scalar> = r1.iter().zip(&r2).map(|(a, b)| a + &(&c * b)).collect();
        assert_eq!(with(&combo), &with(&r1) + &(&c * &with(&r2)));
    }
    assert!(immanant(&p(&[2, 1]), &ExactMatrix::identity(q, 4)).is_err());
}

#[test]
fn four_term_sums_for_classified_partitions() {
    let n = 5u32;
    let perms = Permutation::all(n as usize);
    for lambda in [Partition::column(n), Partition::hook(n, 2)] {
        for sigma in perms.iter().step_by(7) {
            for (i, pp, qq) in [(1, 2, 3), (2, 4, 1), (3, 1, 4)] {
                assert_eq!(four_term_sum(&lambda, sigma, i, pp, qq).unwrap(), 0);
            }
        }
    }
    let sigma = Permutation::identity(5);
    assert_ne!(four_term_sum(&p(&[3, 2]), &sigma, 1, 2, 3).unwrap(), 0);
}
