//! The free graded-commutative algebra ΛV over the rationals.
//!
//! Generators are kept in canonical order `(degree, declaration index)` and
//! referred to by their position in that order. A [`Monomial`] lists
//! `(generator, exponent)` pairs sorted by position; odd generators never
//! carry an exponent above one. Signs from the Koszul rule are applied when
//! monomials are multiplied, so every [`Polynomial`] is stored in canonical
//! form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Q;

pub type GenId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(GenId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(g: GenId) -> Self {
        Monomial(vec![(g, 1)])
    }

    /// Builds a monomial from unsorted factors. Repeated generators are
    /// merged; zero exponents dropped. Parity is not checked here.
    pub fn from_factors(factors: impl IntoIterator<Item = (GenId, u32)>) -> Self {
        let mut map: BTreeMap<GenId, u32> = BTreeMap::new();
        for (g, e) in factors {
            *map.entry(g).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(GenId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, g: GenId) -> u32 {
        self.0
            .iter()
            .find(|&&(h, _)| h == g)
            .map_or(0, |&(_, e)| e)
    }

    pub fn contains(&self, g: GenId) -> bool {
        self.exponent(g) > 0
    }

    /// The single generator of a word-length-one monomial.
    pub fn as_generator(&self) -> Option<GenId> {
        match self.0.as_slice() {
            [(g, 1)] => Some(*g),
            _ => None,
        }
    }
}

/// A finite linear combination of monomials with nonzero rational
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn generator(g: GenId) -> Self {
        Polynomial::term(Q::one(), Monomial::generator(g))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The augmentation: the coefficient of 1.
    pub fn constant_term(&self) -> Q {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Polynomial, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Every generator occurring in some term.
    pub fn support(&self) -> Vec<GenId> {
        let mut v: Vec<GenId> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(g, _)| g))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn max_generator(&self) -> Option<GenId> {
        self.support().last().copied()
    }
}

impl std::ops::Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &Q::one());
        out
    }
}

impl std::ops::Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-Q::one());
        out
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Q::one())
    }
}

impl std::ops::AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        self.add_assign_scaled(rhs, &Q::one());
    }
}

impl std::ops::SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        self.add_assign_scaled(rhs, &-Q::one());
    }
}

/// Word-length decomposition of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordLengthSplit {
    pub constant: Q,
    pub linear: Polynomial,
    pub decomposable: Polynomial,
}

pub fn split_word_length(p: &Polynomial) -> WordLengthSplit {
    WordLengthSplit {
        constant: p.constant_term(),
        linear: p.filter(|m| m.word_length() == 1),
        decomposable: p.filter(|m| m.word_length() >= 2),
    }
}

/// A set of generators in canonical order, optionally complete only through
/// a degree bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    gens: Vec<Generator>,
    by_name: HashMap<String, GenId>,
    bound: Option<u32>,
}

impl GradedAlgebra {
    /// Sorts `declared` into canonical order. Returns the algebra and, for
    /// each declared generator, its canonical id.
    pub fn new(declared: Vec<Generator>, bound: Option<u32>) -> Result<(Self, Vec<GenId>)> {
        let mut seen = HashMap::new();
        for g in &declared {
            if g.degree < 2 {
                return Err(Error::InvalidDegree {
                    name: g.name.clone(),
                    degree: g.degree,
                });
            }
            if !is_identifier(&g.name) || crate::text::is_reserved(&g.name) {
                return Err(Error::Precondition(format!(
                    "`{}` is not a valid generator name",
                    g.name
                )));
            }
            if seen.insert(g.name.clone(), ()).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        let mut order: Vec<usize> = (0..declared.len()).collect();
        order.sort_by_key(|&i| (declared[i].degree, i));
        let mut ids = vec![0; declared.len()];
        for (canon, &decl) in order.iter().enumerate() {
            ids[decl] = canon;
        }
        let gens: Vec<Generator> = order.iter().map(|&i| declared[i].clone()).collect();
        let by_name = gens
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.clone(), i))
            .collect();
        Ok((
            GradedAlgebra {
                gens,
                by_name,
                bound,
            },
            ids,
        ))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.gens[g]
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Result<GenId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn gen(&self, name: &str) -> Result<Polynomial> {
        self.lookup(name).map(Polynomial::generator)
    }

    pub fn bound(&self) -> Option<u32> {
        self.bound
    }

    pub fn is_odd(&self, g: GenId) -> bool {
        self.gens[g].is_odd()
    }

    pub fn generators_of_degree(&self, n: u32) -> Vec<GenId> {
        (0..self.gens.len())
            .filter(|&g| self.gens[g].degree == n)
            .collect()
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    /// Errors when degree `n` lies beyond the exactness bound.
    pub fn require_complete(&self, n: u32) -> Result<()> {
        match self.bound {
            Some(b) if n > b => Err(Error::BeyondBound {
                degree: n,
                bound: b,
            }),
            _ => Ok(()),
        }
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.factors()
            .iter()
            .map(|&(g, e)| self.gens[g].degree * e)
            .sum()
    }

    /// The degree of a homogeneous polynomial; `None` for zero or for a
    /// mixed-degree polynomial.
    pub fn degree(&self, p: &Polynomial) -> Option<u32> {
        let mut it = p.terms().map(|(m, _)| self.monomial_degree(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Like [`degree`](Self::degree) but errors on inhomogeneous input and
    /// accepts zero as having any degree.
    pub fn check_homogeneous(&self, p: &Polynomial, expected: u32, what: &str) -> Result<()> {
        for (m, _) in p.terms() {
            let d = self.monomial_degree(m);
            if d != expected {
                return Err(Error::DegreeMismatch {
                    what: what.to_string(),
                    expected,
                    found: d,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn check_ids(&self, p: &Polynomial) -> Result<()> {
        for g in p.support() {
            if g >= self.gens.len() {
                return Err(Error::UnknownGenerator(format!("#{g}")));
            }
        }
        Ok(())
    }

    /// Sorts a word of generators into canonical form with its Koszul sign.
    /// The sign is 0 when an odd generator repeats.
    pub fn normalize(&self, word: &[GenId]) -> Result<(i8, Monomial)> {
        for &g in word {
            if g >= self.gens.len() {
                return Err(Error::UnknownGenerator(format!("#{g}")));
            }
        }
        let mut inversions = 0usize;
        for i in 0..word.len() {
            if !self.is_odd(word[i]) {
                continue;
            }
            for j in i + 1..word.len() {
                if !self.is_odd(word[j]) {
                    continue;
                }
                if word[i] == word[j] {
                    return Ok((0, Monomial::one()));
                }
                if word[i] > word[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Ok((sign, Monomial::from_factors(word.iter().map(|&g| (g, 1)))))
    }

    pub fn normalize_names(&self, word: &[&str]) -> Result<(i8, Monomial)> {
        let ids = word
            .iter()
            .map(|n| self.lookup(n))
            .collect::<Result<Vec<_>>>()?;
        self.normalize(&ids)
    }

    /// Product of two canonical monomials: `None` if it vanishes, otherwise
    /// whether the sign is negative and the canonical result.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let mut negative = false;
        let mut out = Vec::with_capacity(a.0.len() + b.0.len());
        // odd factors of `a` not yet passed, counted from the right
        let odd_a: Vec<GenId> = a
            .0
            .iter()
            .filter(|&&(g, _)| self.is_odd(g))
            .map(|&(g, _)| g)
            .collect();
        for &(g, _) in &b.0 {
            if !self.is_odd(g) {
                continue;
            }
            let mut passed = 0;
            for &h in &odd_a {
                if h == g {
                    return None;
                }
                if h > g {
                    passed += 1;
                }
            }
            if passed % 2 == 1 {
                negative = !negative;
            }
        }
        let (mut i, mut j) = (0, 0);
        while i < a.0.len() || j < b.0.len() {
            match (a.0.get(i), b.0.get(j)) {
                (Some(&(ga, ea)), Some(&(gb, eb))) if ga == gb => {
                    out.push((ga, ea + eb));
                    i += 1;
                    j += 1;
                }
                (Some(&(ga, ea)), Some(&(gb, _))) if ga < gb => {
                    out.push((ga, ea));
                    i += 1;
                }
                (Some(_), Some(&(gb, eb))) => {
                    out.push((gb, eb));
                    j += 1;
                }
                (Some(&x), None) => {
                    out.push(x);
                    i += 1;
                }
                (None, Some(&x)) => {
                    out.push(x);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Some((negative, Monomial(out)))
    }

    pub fn mul(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in p.terms() {
            for (mb, cb) in q.terms() {
                if let Some((neg, m)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Checked product: both factors must only mention generators of this
    /// algebra.
    pub fn multiply(&self, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
        self.check_ids(p)?;
        self.check_ids(q)?;
        Ok(self.mul(p, q))
    }

    pub fn pow(&self, p: &Polynomial, e: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = self.mul(&out, p);
        }
        out
    }

    /// The canonical polynomial of a monomial written as a product of its
    /// factors (always coefficient one).
    pub fn monomial_poly(&self, m: &Monomial) -> Polynomial {
        Polynomial::term(Q::one(), m.clone())
    }

    /// All monomials of degree `n`, in ascending [`Monomial`] order.
    pub fn basis(&self, n: u32) -> Result<Vec<Monomial>> {
        self.require_complete(n)?;
        Ok(self.basis_unchecked(n))
    }

    pub(crate) fn basis_unchecked(&self, n: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.enumerate(0, n, &mut current, &mut out);
        out.sort();
        out
    }

    fn enumerate(
        &self,
        start: GenId,
        remaining: u32,
        current: &mut Vec<(GenId, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial(current.clone()));
            return;
        }
        for g in start..self.gens.len() {
            let d = self.gens[g].degree;
            if d > remaining {
                // canonical order is by degree, nothing later fits either
                break;
            }
            let max_e = if self.is_odd(g) { 1 } else { remaining / d };
            for e in 1..=max_e {
                current.push((g, e));
                self.enumerate(g + 1, remaining - e * d, current, out);
                current.pop();
            }
        }
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.factors()
            .iter()
            .map(|&(g, e)| {
                let name = self
                    .gens
                    .get(g)
                    .map_or_else(|| format!("#{g}"), |x| x.name.clone());
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Canonical text form, readable back by the polynomial parser.
    /// Terms in increasing degree, then canonical monomial order.
    pub fn format(&self, p: &Polynomial) -> String {
        let mut terms: Vec<(&Monomial, &Q)> = p.terms().collect();
        terms.sort_by_key(|(m, _)| self.monomial_degree(m));
        format_terms(terms.into_iter().map(|(m, c)| (self.format_monomial(m), m.is_one(), c)))
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        crate::text::parse_polynomial(self, text)
    }
}

pub(crate) fn format_terms<'a>(terms: impl Iterator<Item = (String, bool, &'a Q)>) -> String {
    let mut out = String::new();
    for (i, (mono, is_one, c)) in terms.enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if is_one {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use proptest::prelude::*;

    fn alg(spec: &[(&str, u32)]) -> GradedAlgebra {
        GradedAlgebra::new(
            spec.iter().map(|&(n, d)| Generator::new(n, d)).collect(),
            None,
        )
        .unwrap()
        .0
    }

    #[test]
    fn normalize_odd_swap() {
        let a = alg(&[("y3", 3), ("y5", 5)]);
        let (s, m) = a.normalize_names(&["y5", "y3"]).unwrap();
        assert_eq!(s, -1);
        assert_eq!(a.format_monomial(&m), "y3*y5");
    }

    #[test]
    fn normalize_even_commutes() {
        let a = alg(&[("x2", 2), ("y3", 3)]);
        let (s, m) = a.normalize_names(&["y3", "x2"]).unwrap();
        assert_eq!(s, 1);
        assert_eq!(a.format_monomial(&m), "x2*y3");
    }

    #[test]
    fn normalize_odd_square_vanishes() {
        let a = alg(&[("y3", 3)]);
        assert_eq!(a.normalize_names(&["y3", "y3"]).unwrap().0, 0);
        assert!(matches!(
            a.normalize_names(&["z"]),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn multiply_examples() {
        let a = alg(&[("x2", 2), ("y3", 3), ("y5", 5)]);
        let x = a.gen("x2").unwrap();
        let y3 = a.gen("y3").unwrap();
        let y5 = a.gen("y5").unwrap();
        assert_eq!(a.format(&a.mul(&x, &x)), "x2^2");
        let anti = &a.mul(&y3, &y5) + &a.mul(&y5, &y3);
        assert!(anti.is_zero());
        let p = &x + &y3;
        let m = &x - &y3;
        assert_eq!(a.mul(&p, &m), a.mul(&x, &x));
    }

    #[test]
    fn basis_examples() {
        let a = alg(&[("x2", 2), ("y3", 3)]);
        let b5: Vec<String> = a.basis(5).unwrap().iter().map(|m| a.format_monomial(m)).collect();
        assert_eq!(b5, vec!["x2*y3"]);
        let b4: Vec<String> = a.basis(4).unwrap().iter().map(|m| a.format_monomial(m)).collect();
        assert_eq!(b4, vec!["x2^2"]);
        assert!(matches!(
            GradedAlgebra::new(vec![Generator::new("x1", 1)], None),
            Err(Error::InvalidDegree { .. })
        ));
    }

    #[test]
    fn basis_refuses_beyond_bound() {
        let (a, _) = GradedAlgebra::new(vec![Generator::new("x", 2)], Some(6)).unwrap();
        assert_eq!(a.basis(6).unwrap().len(), 1);
        assert_eq!(
            a.basis(7),
            Err(Error::BeyondBound {
                degree: 7,
                bound: 6
            })
        );
    }

    #[test]
    fn split_examples() {
        let a = alg(&[("x2", 2), ("y3", 3), ("y5", 5)]);
        let x = a.gen("x2").unwrap();
        let s = split_word_length(&(&x + &a.mul(&x, &x)));
        assert_eq!(s.linear, x);
        assert_eq!(s.decomposable, a.mul(&x, &x));
        let yy = a.mul(&a.gen("y3").unwrap(), &a.gen("y5").unwrap());
        let s = split_word_length(&yy);
        assert!(s.linear.is_zero());
        assert_eq!(s.decomposable, yy);
        let s = split_word_length(&Polynomial::zero());
        assert!(s.linear.is_zero() && s.decomposable.is_zero());
    }

    #[test]
    fn canonical_order_is_degree_then_declaration() {
        let a = alg(&[("b", 5), ("a", 3), ("c", 3)]);
        let names: Vec<&str> = a.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["a", "c", "b"]);
    }

    #[test]
    fn format_round_trip_with_fractions() {
        let a = alg(&[("x", 2), ("y", 3)]);
        let p = a.parse("-3/2*x^2*y + y*x - 4").unwrap();
        let text = a.format(&p);
        assert_eq!(text, "-4 + x*y - 3/2*x^2*y");
        assert_eq!(a.parse(&text).unwrap(), p);
        assert_eq!(p.coefficient(&Monomial::one()), q(-4, 1));
    }

    /// Coefficient of t^n in prod_even (1 - t^d)^-1 * prod_odd (1 + t^d),
    /// expanded as a power series.
    fn series_count(degrees: &[u32], n: u32) -> usize {
        let n = n as usize;
        let mut series = vec![0usize; n + 1];
        series[0] = 1;
        for &d in degrees {
            let d = d as usize;
            if d % 2 == 1 {
                for i in (d..=n).rev() {
                    series[i] += series[i - d];
                }
            } else {
                for i in d..=n {
                    series[i] += series[i - d];
                }
            }
        }
        series[n]
    }

    #[test]
    fn basis_matches_generating_function_on_catalog() {
        for m in crate::catalog::all_models() {
            let degrees: Vec<u32> = m.algebra().generators().iter().map(|g| g.degree).collect();
            let top = m.bound().unwrap_or(16).min(16);
            for n in 0..=top {
                assert_eq!(
                    m.algebra().basis(n).unwrap().len(),
                    series_count(&degrees, n),
                    "{} degree {n}",
                    m.name()
                );
            }
        }
    }

    fn word_strategy() -> impl Strategy<Value = Vec<GenId>> {
        proptest::collection::vec(0usize..5, 0..6)
    }

    proptest! {
        #[test]
        fn graded_commutativity(w1 in word_strategy(), w2 in word_strategy()) {
            let a = alg(&[("a", 2), ("b", 3), ("c", 3), ("e", 4), ("f", 5)]);
            let (s1, m1) = a.normalize(&w1).unwrap();
            let (s2, m2) = a.normalize(&w2).unwrap();
            let p = Polynomial::term(q(s1 as i64, 1), m1.clone());
            let r = Polynomial::term(q(s2 as i64, 1), m2.clone());
            let d1 = a.monomial_degree(&m1);
            let d2 = a.monomial_degree(&m2);
            let lhs = a.mul(&p, &r);
            let rhs = a.mul(&r, &p);
            let sign = if d1 * d2 % 2 == 1 { q(-1, 1) } else { q(1, 1) };
            prop_assert_eq!(lhs, rhs.scale(&sign));
        }

        #[test]
        fn normalize_idempotent(w in word_strategy()) {
            let a = alg(&[("a", 2), ("b", 3), ("c", 3), ("e", 4), ("f", 5)]);
            let (s, m) = a.normalize(&w).unwrap();
            if s != 0 {
                let word: Vec<GenId> = m
                    .factors()
                    .iter()
                    .flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize))
                    .collect();
                prop_assert_eq!(a.normalize(&word).unwrap(), (1, m));
            }
        }

        #[test]
        fn product_of_words_matches_normalized_concatenation(w1 in word_strategy(), w2 in word_strategy()) {
            let a = alg(&[("a", 2), ("b", 3), ("c", 3), ("e", 4), ("f", 5)]);
            let (s1, m1) = a.normalize(&w1).unwrap();
            let (s2, m2) = a.normalize(&w2).unwrap();
            let mut w = w1.clone();
            w.extend_from_slice(&w2);
            let (s, m) = a.normalize(&w).unwrap();
            let prod = a.mul(
                &Polynomial::term(q(s1 as i64, 1), m1),
                &Polynomial::term(q(s2 as i64, 1), m2),
            );
            prop_assert_eq!(prod, Polynomial::term(q(s as i64, 1), m));
        }
    }
}
