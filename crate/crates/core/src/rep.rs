//! Partitions, symmetric group characters, immanants and the four-term character relations.
//!
//! Characters are computed with the Murnaghan-Nakayama rule on beta-sets (rim hooks of
//! length `r` correspond to moving a bead `r` places down), memoized per [`Characters`]
//! instance. Permutations are 0-based internally; [`four_term_sum`] takes the 1-based
//! indices used in the usual `(i p), (q n)` notation and shifts them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::{ExactMatrix, Field, Scalar};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};

/// Integer partition with weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

/// A partition labelling a conjugacy class of the symmetric group by cycle type.
pub type CycleType = Partition;

impl Partition {
    /// Validates that the parts are positive and weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    /// Sorts the positive parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Parses `"2,1,1"` (order is validated, not fixed up).
    pub fn parse(text: &str) -> Result<Self> {
        let parts = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidInput(format!("bad partition part `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(1^n)`.
    pub fn column(n: u32) -> Self {
        Partition(vec![1; n as usize])
    }

    /// `(n)`.
    pub fn row(n: u32) -> Self {
        if n == 0 {
            Partition(vec![])
        } else {
            Partition(vec![n])
        }
    }

    /// `(k, 1^(n-k))`.
    pub fn hook(n: u32, k: u32) -> Self {
        let mut v = vec![k];
        v.extend(std::iter::repeat_n(1, (n - k) as usize));
        Partition(v)
    }

    pub fn conjugate(&self) -> Self {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|k| self.0.iter().filter(|&&p| p >= k).count() as u32).collect())
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Order of the centralizer of a permutation with this cycle type.
    pub fn centralizer_order(&self) -> u64 {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for &p in &self.0 {
            *counts.entry(p).or_default() += 1;
        }
        counts
            .into_iter()
            .map(|(k, m)| (k as u64).pow(m as u32) * (1..=m).product::<u64>())
            .product()
    }

    /// Sign of any permutation of this cycle type.
    pub fn sign(&self) -> i64 {
        let odd = self.0.iter().filter(|&&p| p % 2 == 0).count();
        if odd % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Compact exponent notation, e.g. `21^2` for `(2,1,1)`.
    pub fn exponent_notation(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == p {
                j += 1;
            }
            out.push_str(&p.to_string());
            if j - i > 1 {
                out.push_str(&format!("^{}", j - i));
            }
            i = j;
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Permutation of `{0, .., n-1}` stored as its image vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Permutation(v)
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `(self * other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut k = s;
            while !seen[k] {
                seen[k] = true;
                k = self.0[k];
                len += 1;
            }
            lens.push(len);
        }
        Partition::from_unsorted(lens)
    }

    /// Sign computed from the inversion count (independent of cycle types).
    pub fn sign_by_inversions(&self) -> i64 {
        let mut inv = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// A permutation with the given cycle type, cycles on consecutive blocks.
    pub fn class_representative(mu: &CycleType) -> Permutation {
        let n = mu.size() as usize;
        let mut v: Vec<usize> = (0..n).collect();
        let mut start = 0;
        for &len in mu.parts() {
            let len = len as usize;
            for k in 0..len {
                v[start + k] = start + (k + 1) % len;
            }
            start += len;
        }
        Permutation(v)
    }

    /// All permutations of `n` points in lexicographic order of image vectors.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

fn beta_set(lambda: &[u32]) -> Vec<u32> {
    let l = lambda.len() as u32;
    lambda.iter().enumerate().map(|(i, &p)| p + l - 1 - i as u32).collect()
}

fn from_beta_set(mut beta: Vec<u32>) -> Vec<u32> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let l = beta.len() as u32;
    beta.iter()
        .enumerate()
        .map(|(i, &b)| b - (l - 1 - i as u32))
        .filter(|&p| p > 0)
        .collect()
}

type CharacterMemo = HashMap<(Vec<u32>, Vec<u32>), i64>;

/// Memoized Murnaghan-Nakayama character evaluator. Safe to share across threads.
#[derive(Default)]
pub struct Characters {
    memo: Mutex<CharacterMemo>,
}

impl Characters {
    pub fn new() -> Self {
        Self::default()
    }

    /// `chi_lambda` on the class of cycle type `mu`.
    pub fn character(&self, lambda: &Partition, mu: &CycleType) -> Result<i64> {
        if lambda.size() != mu.size() {
            return Err(Error::InvalidInput(format!(
                "character of a partition of {} on a class of S_{}",
                lambda.size(),
                mu.size()
            )));
        }
        Ok(self.mn(&lambda.0, &mu.0))
    }

    fn mn(&self, lambda: &[u32], mu: &[u32]) -> i64 {
        if mu.is_empty() {
            return 1;
        }
        let key = (lambda.to_vec(), mu.to_vec());
        if let Some(&v) = self.memo.lock().expect("memo lock").get(&key) {
            return v;
        }
        let r = mu[0];
        let rest = &mu[1..];
        let beta = beta_set(lambda);
        let mut total = 0;
        for (idx, &b) in beta.iter().enumerate() {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let crossed = beta.iter().filter(|&&c| c > b - r && c < b).count();
            let sign = if crossed % 2 == 0 { 1 } else { -1 };
            let mut next = beta.clone();
            next[idx] = b - r;
            total += sign * self.mn(&from_beta_set(next), rest);
        }
        self.memo.lock().expect("memo lock").insert(key, total);
        total
    }

    /// Character value at a permutation.
    pub fn at(&self, lambda: &Partition, sigma: &Permutation) -> Result<i64> {
        self.character(lambda, &sigma.cycle_type())
    }
}

fn shared() -> &'static Characters {
    static TABLE: OnceLock<Characters> = OnceLock::new();
    TABLE.get_or_init(Characters::new)
}

/// `chi_lambda(mu)` using a process-wide memo table.
pub fn character(lambda: &Partition, mu: &CycleType) -> Result<i64> {
    shared().character(lambda, mu)
}

/// Largest matrix size for full immanant expansion.
pub const MAX_IMMANANT_SIZE: usize = 8;

/// `sum_sigma chi_lambda(sigma) prod_i M[i][sigma(i)]` for a square scalar matrix.
pub fn immanant(lambda: &Partition, m: &ExactMatrix) -> Result<Scalar> {
    let n = lambda.size() as usize;
    if m.rows() != n || m.cols() != n {
        return Err(Error::InvalidInput(format!(
            "immanant of a partition of {n} needs an {n}x{n} matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if n > MAX_IMMANANT_SIZE {
        return Err(Error::SizeCap(format!("immanant expansion capped at n = {MAX_IMMANANT_SIZE}")));
    }
    let field = m.field();
    let mut chars: HashMap<CycleType, i64> = HashMap::new();
    let mut total = field.zero();
    for sigma in Permutation::all(n) {
        let ct = sigma.cycle_type();
        let chi = match chars.get(&ct) {
            Some(&c) => c,
            None => {
                let c = character(lambda, &ct)?;
                chars.insert(ct, c);
                c
            }
        };
        if chi == 0 {
            continue;
        }
        let mut term = field.from_i64(chi);
        for i in 0..n {
            term *= m.get(i, sigma.image(i));
            if term.is_zero() {
                break;
            }
        }
        total += &term;
    }
    Ok(total)
}

/// The immanant polynomial on `n x n` matrices (row-major variables `x{i*n+j}`).
pub fn immanant_poly(lambda: &Partition, field: Field) -> Result<MultiPoly> {
    let n = lambda.size() as usize;
    if n > MAX_IMMANANT_SIZE {
        return Err(Error::SizeCap(format!("immanant expansion capped at n = {MAX_IMMANANT_SIZE}")));
    }
    let mut p = MultiPoly::zero(field, n * n);
    let mut chars: HashMap<CycleType, i64> = HashMap::new();
    for sigma in Permutation::all(n) {
        let ct = sigma.cycle_type();
        let chi = match chars.get(&ct) {
            Some(&c) => c,
            None => {
                let c = character(lambda, &ct)?;
                chars.insert(ct, c);
                c
            }
        };
        let mut e = vec![0u32; n * n];
        for i in 0..n {
            e[i * n + sigma.image(i)] = 1;
        }
        p.add_term(Monomial::new(e), field.from_i64(chi));
    }
    Ok(p)
}

/// The four elements of the group generated by two disjoint transpositions `(a b), (c d)`.
fn klein_elements(n: usize, a: usize, b: usize, c: usize, d: usize) -> [Permutation; 4] {
    let t1 = Permutation::transposition(n, a, b);
    let t2 = Permutation::transposition(n, c, d);
    let both = t1.compose(&t2);
    [Permutation::identity(n), t1, t2, both]
}

/// `sum over tau in <(i p), (q n)> of chi_lambda(sigma tau)`, with 1-based `i, p, q` and
/// `n = |lambda|`.
pub fn four_term_sum(lambda: &Partition, sigma: &Permutation, i: usize, p: usize, q: usize) -> Result<i64> {
    let n = lambda.size() as usize;
    if sigma.size() != n {
        return Err(Error::InvalidInput(format!(
            "permutation of {} points for a partition of {n}",
            sigma.size()
        )));
    }
    let idx = [i, p, q, n];
    for (k, &a) in idx.iter().enumerate() {
        if a == 0 || a > n {
            return Err(Error::InvalidInput(format!("index {a} outside 1..={n}")));
        }
        if idx[..k].contains(&a) {
            return Err(Error::InvalidInput(format!("indices {idx:?} must be pairwise distinct")));
        }
    }
    let table = shared();
    klein_elements(n, i - 1, p - 1, q - 1, n - 1)
        .iter()
        .map(|tau| table.at(lambda, &sigma.compose(tau)))
        .sum()
}

/// Unordered pairs of disjoint unordered pairs `{{a,b},{c,d}}` in `0..n`.
fn disjoint_pair_pairs(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in a + 1..n {
                for d in c + 1..n {
                    if c != b && d != b {
                        out.push((a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

fn check_classification_size(n: u32) -> Result<()> {
    if n < 4 {
        return Err(Error::Unsupported(format!(
            "four-term relations need four distinct indices; n = {n} < 4"
        )));
    }
    if n as usize > MAX_IMMANANT_SIZE {
        return Err(Error::SizeCap(format!("exhaustive checks capped at n = {MAX_IMMANANT_SIZE}")));
    }
    Ok(())
}

/// Every relation instance up to conjugation: one representative per class, all index pairs.
fn relation_instances(n: u32) -> Vec<Vec<CycleType>> {
    let n_us = n as usize;
    let pairs = disjoint_pair_pairs(n_us);
    let mut out = Vec::new();
    for mu in Partition::all(n) {
        let sigma = Permutation::class_representative(&mu);
        for &(a, b, c, d) in &pairs {
            out.push(
                klein_elements(n_us, a, b, c, d)
                    .iter()
                    .map(|tau| sigma.compose(tau).cycle_type())
                    .collect(),
            );
        }
    }
    out
}

/// Partitions `lambda` of `n` whose character satisfies every four-term relation.
pub fn classify_partitions(n: u32) -> Result<Vec<Partition>> {
    check_classification_size(n)?;
    let instances = relation_instances(n);
    let table = shared();
    let mut out = Vec::new();
    for lambda in Partition::all(n) {
        let mut ok = true;
        for inst in &instances {
            let s: i64 = inst
                .iter()
                .map(|ct| table.character(&lambda, ct))
                .sum::<Result<i64>>()?;
            if s != 0 {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(lambda);
        }
    }
    Ok(out)
}

/// A class function on `S_n`, indexed by cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub n: u32,
    pub values: BTreeMap<CycleType, Scalar>,
}

impl ClassFunction {
    pub fn value(&self, mu: &CycleType) -> &Scalar {
        &self.values[mu]
    }

    pub fn from_character(lambda: &Partition) -> Result<Self> {
        let n = lambda.size();
        let values = Partition::all(n)
            .into_iter()
            .map(|mu| Ok((mu.clone(), Field::Rational.from_i64(character(lambda, &mu)?))))
            .collect::<Result<_>>()?;
        Ok(ClassFunction { n, values })
    }
}

/// Basis of the space of class functions satisfying all four-term relations.
pub fn class_function_space(n: u32) -> Result<Vec<ClassFunction>> {
    check_classification_size(n)?;
    let parts = Partition::all(n);
    let index: HashMap<&Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let field = Field::Rational;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for inst in relation_instances(n) {
        let mut row = vec![0i64; parts.len()];
        for ct in &inst {
            row[index[ct]] += 1;
        }
        if seen.insert(row.clone()) {
            rows.push(row.into_iter().map(|v| field.from_i64(v)).collect());
        }
    }
    let system = ExactMatrix::from_rows(field, rows)?;
    let kernel = system.kernel_basis();
    Ok((0..kernel.cols())
        .map(|k| ClassFunction {
            n,
            values: parts.iter().cloned().zip(kernel.column(k)).collect(),
        })
        .collect())
}

pub fn class_function_space_dim(n: u32) -> Result<usize> {
    Ok(class_function_space(n)?.len())
}

/// The three relations used to pin `F(3 1^(n-3))`:
/// `2F(31^{n-3}) + F(41^{n-4}) + F(21^{n-2})`, `F(41^{n-4}) + F(2^2 1^{n-4})` and
/// `F(2^2 1^{n-4}) + 2F(21^{n-2}) + F(1^n)`. All three vanish for solutions.
pub fn proof_relations(f: &ClassFunction) -> Result<[Scalar; 3]> {
    let n = f.n;
    check_classification_size(n)?;
    let field = Field::Rational;
    let two = field.from_i64(2);
    let c31 = f.value(&Partition::hook(n, 3));
    let c41 = f.value(&Partition::hook(n, 4));
    let c21 = f.value(&Partition::hook(n, 2));
    let c1 = f.value(&Partition::column(n));
    let mut p22 = vec![2, 2];
    p22.extend(std::iter::repeat_n(1, n as usize - 4));
    let c22 = f.value(&Partition(p22));
    Ok([
        &(&(&two * c31) + c41) + c21,
        c41 + c22,
        &(c22 + &(&two * c21)) + c1,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15]);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[2, 1, 1]).exponent_notation(), "21^2");
    }

    #[test]
    fn sign_and_trivial_characters() {
        for n in 1..=6 {
            for mu in Partition::all(n) {
                assert_eq!(character(&Partition::column(n), &mu).unwrap(), mu.sign());
                assert_eq!(character(&Partition::row(n), &mu).unwrap(), 1);
            }
        }
    }

    /// Brute force: the standard representation of S_3 on {v in Q^3 : sum v = 0} has
    /// character fix(sigma) - 1.
    #[test]
    fn chi_21_on_three_cycle() {
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        for sigma in Permutation::all(3) {
            let fixed = (0..3).filter(|&i| sigma.image(i) == i).count() as i64;
            assert_eq!(character(&p(&[2, 1]), &sigma.cycle_type()).unwrap(), fixed - 1);
        }
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(character(&p(&[2, 1]), &p(&[2, 2])).is_err());
    }

    #[test]
    fn column_orthogonality() {
        for n in [4u32, 5] {
            for mu in Partition::all(n) {
                let s: i64 = Partition::all(n)
                    .iter()
                    .map(|l| character(l, &mu).unwrap().pow(2))
                    .sum();
                assert_eq!(s as u64, mu.centralizer_order(), "mu = {mu}");
            }
        }
    }

    #[test]
    fn immanant_of_identity_is_dimension() {
        let m = ExactMatrix::identity(Field::Rational, 3);
        assert_eq!(immanant(&p(&[2, 1]), &m).unwrap(), Field::Rational.from_i64(2));
    }

    #[test]
    fn four_term_examples() {
        for sigma in Permutation::all(4) {
            assert_eq!(four_term_sum(&Partition::column(4), &sigma, 1, 2, 3).unwrap(), 0);
            assert_eq!(four_term_sum(&Partition::row(4), &sigma, 1, 2, 3).unwrap(), 4);
        }
        let id = Permutation::identity(4);
        assert!(four_term_sum(&Partition::row(4), &id, 1, 1, 3).is_err());
        assert!(four_term_sum(&Partition::row(4), &id, 1, 2, 4).is_err());
    }

    /// Exhaustive: every sigma in S_4 and every admissible ordered (i, p, q).
    #[test]
    fn four_term_211_vanishes_everywhere() {
        let lambda = p(&[2, 1, 1]);
        for sigma in Permutation::all(4) {
            for i in 1..=3 {
                for pp in 1..=3 {
                    for q in 1..=3 {
                        if i == pp || pp == q || i == q {
                            continue;
                        }
                        assert_eq!(four_term_sum(&lambda, &sigma, i, pp, q).unwrap(), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn small_n_unsupported() {
        assert!(matches!(classify_partitions(3), Err(Error::Unsupported(_))));
        assert!(matches!(class_function_space_dim(2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn class_representatives_have_their_type() {
        for mu in Partition::all(6) {
            assert_eq!(Permutation::class_representative(&mu).cycle_type(), mu);
        }
    }
}
