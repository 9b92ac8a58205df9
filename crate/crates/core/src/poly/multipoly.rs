use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{Field, Prng, Scalar};
use crate::error::{Error, Result};

use super::subst::LinearSubstitution;

/// Exponent vector of a monomial.
///
/// Ordered graded-lexicographically: first by total degree, then lexicographically with
/// `x0` the most significant variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// All monomials of the given degree, in decreasing lexicographic order of exponents.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        let mut out = Vec::new();
        if nvars > 0 {
            rec(0, degree, &mut vec![0; nvars], &mut out);
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over an exact field.
///
/// Zero coefficients are never stored. Terms iterate in increasing graded-lex order;
/// [`MultiPoly::terms_desc`] gives the printing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        MultiPoly {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    /// The coordinate function `x_i`.
    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), field.one());
        p
    }

    /// The linear form `sum_i coeffs[i] x_i`.
    pub fn linear_form(field: Field, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(field, n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms<I>(field: Field, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VariableCountMismatch(e.len(), nvars));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(c.field(), field));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Integer-coefficient constructor, mostly for tests.
    pub fn from_i64_terms(field: Field, nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(
            field,
            nvars,
            terms.iter().map(|(e, c)| (e.to_vec(), field.from_i64(*c))),
        )
        .expect("well-formed integer terms")
    }

    /// Adds `c * m` in place, pruning a cancelled term.
    /// Homogeneous form with every coefficient drawn from `rng`.
    pub fn random_form(field: Field, nvars: usize, degree: u32, rng: &mut Prng) -> Self {
        let mut p = Self::zero(field, nvars);
        for m in Monomial::all_of_degree(nvars, degree) {
            let c = rng.scalar(field);
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in decreasing graded-lex order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Common degree of all terms, `None` when the polynomial is zero or not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let lo = self.terms.keys().next()?.degree();
        let hi = self.terms.keys().next_back()?.degree();
        (lo == hi).then_some(lo)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Indices of the variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch(self.nvars, other.nvars));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(e) => *e += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        assert_eq!(s.field(), self.field, "scalar field must match polynomial field");
        if s.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(self.field, self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact formal derivative with respect to `x_var`.
    pub fn partial_derivative(&self, var: usize) -> MultiPoly {
        assert!(var < self.nvars, "variable index {var} out of range");
        let mut out = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * &self.field.from_i64(e as i64));
        }
        out
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::VariableCountMismatch(point.len(), self.nvars));
        }
        if let Some(bad) = point.iter().find(|s| s.field() != self.field) {
            return Err(Error::FieldMismatch(bad.field(), self.field));
        }
        let mut powers: Vec<Vec<Scalar>> = point.iter().map(|v| vec![self.field.one(), v.clone()]).collect();
        let mut total = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                t *= &powers[i][e];
            }
            total += &t;
        }
        Ok(total)
    }

    /// Pullback along `S`: every old variable `x_i` becomes `sum_j S[i][j] y_j`.
    pub fn substitute(&self, s: &LinearSubstitution) -> Result<MultiPoly> {
        if s.old_vars() != self.nvars {
            return Err(Error::VariableCountMismatch(s.old_vars(), self.nvars));
        }
        if s.field() != self.field {
            return Err(Error::FieldMismatch(s.field(), self.field));
        }
        let m = s.new_vars();
        let images: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| Self::linear_form(self.field, s.matrix().row(i)))
            .collect();
        let mut power_cache: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut out = Self::zero(self.field, m);
        for (mono, c) in &self.terms {
            let mut term = Self::constant(self.field, m, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = power_cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e));
                term = &term * pw;
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Maps every coefficient into `target` (reduction mod `p` for rational polynomials).
    pub fn to_field(&self, target: Field) -> Result<MultiPoly> {
        let mut out = Self::zero(target, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.to_field(target)?);
        }
        Ok(out)
    }

    /// Re-embeds the polynomial in `nvars` variables, sending `x_i` to `x_{map[i]}`.
    pub fn rename_vars(&self, nvars: usize, map: &[usize]) -> Result<MultiPoly> {
        if map.len() != self.nvars {
            return Err(Error::VariableCountMismatch(map.len(), self.nvars));
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= nvars) {
            return Err(Error::InvalidInput(format!(
                "target variable {bad} out of range for {nvars} variables"
            )));
        }
        let mut out = Self::zero(self.field, nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Same polynomial viewed in `nvars` variables (trailing variables added or dropped;
    /// dropped variables must not occur).
    pub fn with_nvars(&self, nvars: usize) -> Result<MultiPoly> {
        if self.support().iter().any(|&i| i >= nvars) {
            return Err(Error::VariableCountMismatch(nvars, self.nvars));
        }
        let keep = nvars.min(self.nvars);
        let mut out = Self::zero(self.field, nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            e[..keep].copy_from_slice(&m.0[..keep]);
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Splits a polynomial by the exponent of `x_var`: entry `j` collects the terms with
    /// `x_var^j`, with that variable removed from the monomials (kept as exponent zero).
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let mut out: Vec<MultiPoly> = Vec::new();
        for (m, c) in &self.terms {
            let j = m.0[var] as usize;
            while out.len() <= j {
                out.push(Self::zero(self.field, self.nvars));
            }
            let mut e = m.0.clone();
            e[var] = 0;
            out[j].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficient vector against a fixed list of monomials; `None` if some term is missing
    /// from the list.
    pub fn coefficient_vector(&self, index: &HashMap<Monomial, usize>, len: usize) -> Option<Vec<Scalar>> {
        let mut v = vec![self.field.zero(); len];
        for (m, c) in &self.terms {
            v[*index.get(m)?] = c.clone();
        }
        Some(v)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_poly(self))
    }
}
