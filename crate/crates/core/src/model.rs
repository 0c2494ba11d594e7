//! Sullivan algebras: a free graded-commutative algebra with a differential.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grading::{split_word_length, GenId, Generator, GradedAlgebra, Monomial, Polynomial};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    name: String,
    algebra: GradedAlgebra,
    differential: Vec<Polynomial>,
    cat0: Option<u32>,
    top: Option<u32>,
}

/// Outcome of the d² = 0 sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum DSquaredReport {
    Pass,
    Fail { generator: String, residue: String },
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        matches!(self, DSquaredReport::Pass)
    }
}

/// Where the generators of each factor went in a tensor product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorEmbedding {
    pub left: Vec<GenId>,
    pub right: Vec<GenId>,
}

pub struct ModelBuilder {
    name: String,
    gens: Vec<Generator>,
    diffs: Vec<(String, String)>,
    bound: Option<u32>,
    cat0: Option<u32>,
    top: Option<u32>,
}

impl ModelBuilder {
    pub fn gen(mut self, name: &str, degree: u32) -> Self {
        self.gens.push(Generator::new(name, degree));
        self
    }

    pub fn d(mut self, name: &str, image: &str) -> Self {
        self.diffs.push((name.to_string(), image.to_string()));
        self
    }

    pub fn bound(mut self, n: u32) -> Self {
        self.bound = Some(n);
        self
    }

    pub fn cat0(mut self, c: u32) -> Self {
        self.cat0 = Some(c);
        self
    }

    pub fn top(mut self, t: u32) -> Self {
        self.top = Some(t);
        self
    }

    pub fn build(self) -> Result<Model> {
        let (algebra, _) = GradedAlgebra::new(self.gens, self.bound)?;
        let mut differential = vec![Polynomial::zero(); algebra.len()];
        let mut assigned = HashSet::new();
        for (name, text) in &self.diffs {
            let g = algebra.lookup(name)?;
            if !assigned.insert(g) {
                return Err(Error::Precondition(format!(
                    "differential of `{name}` given twice"
                )));
            }
            differential[g] = algebra.parse(text)?;
        }
        Model::from_parts(self.name, algebra, differential, self.cat0, self.top)
    }
}

impl Model {
    pub fn builder(name: &str) -> ModelBuilder {
        ModelBuilder {
            name: name.to_string(),
            gens: Vec::new(),
            diffs: Vec::new(),
            bound: None,
            cat0: None,
            top: None,
        }
    }

    /// Assembles a model from an algebra and one differential per generator
    /// (indexed canonically). Checks degrees, not d² = 0.
    pub fn from_parts(
        name: impl Into<String>,
        algebra: GradedAlgebra,
        differential: Vec<Polynomial>,
        cat0: Option<u32>,
        top: Option<u32>,
    ) -> Result<Model> {
        let name = name.into();
        if differential.len() != algebra.len() {
            return Err(Error::Precondition(format!(
                "model `{name}`: {} differentials for {} generators",
                differential.len(),
                algebra.len()
            )));
        }
        for (g, dg) in differential.iter().enumerate() {
            algebra.check_ids(dg)?;
            let gen = algebra.generator(g);
            algebra.check_homogeneous(dg, gen.degree + 1, &format!("d({})", gen.name))?;
        }
        Ok(Model {
            name,
            algebra,
            differential,
            cat0,
            top,
        })
    }

    /// The model of a point: ℚ with no generators.
    pub fn point() -> Model {
        let (algebra, _) = GradedAlgebra::new(Vec::new(), None).expect("empty algebra");
        Model {
            name: "pt".to_string(),
            algebra,
            differential: Vec::new(),
            cat0: Some(0),
            top: Some(0),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Model {
        self.name = name.into();
        self
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[Generator] {
        self.algebra.generators()
    }

    pub fn gen(&self, name: &str) -> Result<Polynomial> {
        self.algebra.gen(name)
    }

    pub fn lookup(&self, name: &str) -> Result<GenId> {
        self.algebra.lookup(name)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        self.algebra.parse(text)
    }

    pub fn format(&self, p: &Polynomial) -> String {
        self.algebra.format(p)
    }

    pub fn differential_of(&self, g: GenId) -> &Polynomial {
        &self.differential[g]
    }

    pub fn bound(&self) -> Option<u32> {
        self.algebra.bound()
    }

    /// True when every generator is listed (no exactness bound).
    pub fn is_complete(&self) -> bool {
        self.bound().is_none()
    }

    pub fn cat0_bound(&self) -> Option<u32> {
        self.cat0
    }

    pub fn with_cat0(mut self, c: Option<u32>) -> Model {
        self.cat0 = c;
        self
    }

    pub fn declared_top(&self) -> Option<u32> {
        self.top
    }

    pub fn with_top(mut self, t: Option<u32>) -> Model {
        self.top = t;
        self
    }

    pub fn require_complete(&self, n: u32) -> Result<()> {
        self.algebra.require_complete(n)
    }

    pub fn degree(&self, p: &Polynomial) -> Option<u32> {
        self.algebra.degree(p)
    }

    pub fn mul(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        self.algebra.mul(p, q)
    }

    /// The differential, extended to all of ΛV by the graded Leibniz rule.
    pub fn apply_d(&self, p: &Polynomial) -> Result<Polynomial> {
        self.algebra.check_ids(p)?;
        Ok(self.d(p))
    }

    pub(crate) fn d(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out.add_assign_scaled(&self.d_monomial(m), c);
        }
        out
    }

    pub(crate) fn d_monomial(&self, m: &Monomial) -> Polynomial {
        let alg = &self.algebra;
        let factors = m.factors();
        let mut out = Polynomial::zero();
        let mut prefix_degree = 0u32;
        for (i, &(g, e)) in factors.iter().enumerate() {
            let dg = &self.differential[g];
            if !dg.is_zero() {
                let prefix = Monomial::from_factors(factors[..i].iter().copied());
                let suffix = Monomial::from_factors(factors[i + 1..].iter().copied());
                let lower = Monomial::from_factors([(g, e - 1)]);
                // d(g^e) = e g^(e-1) dg; for odd g, e = 1
                let mut piece = alg.mul(&alg.monomial_poly(&prefix), &alg.monomial_poly(&lower));
                piece = alg.mul(&piece, dg);
                piece = alg.mul(&piece, &alg.monomial_poly(&suffix));
                let mut coeff = Q::from_integer(e.into());
                if prefix_degree % 2 == 1 {
                    coeff = -coeff;
                }
                out.add_assign_scaled(&piece, &coeff);
            }
            prefix_degree += e * alg.generator(g).degree;
        }
        out
    }

    pub fn check_d_squared(&self) -> DSquaredReport {
        for g in 0..self.algebra.len() {
            let dd = self.d(&self.differential[g]);
            if !dd.is_zero() {
                return DSquaredReport::Fail {
                    generator: self.algebra.generator(g).name.clone(),
                    residue: self.format(&dd),
                };
            }
        }
        DSquaredReport::Pass
    }

    /// Generators whose differential has a nonzero linear part.
    pub fn non_minimal_generators(&self) -> Vec<String> {
        (0..self.algebra.len())
            .filter(|&g| {
                let s = split_word_length(&self.differential[g]);
                !s.linear.is_zero() || !s.constant.is_zero()
            })
            .map(|g| self.algebra.generator(g).name.clone())
            .collect()
    }

    pub fn check_minimal(&self) -> bool {
        self.non_minimal_generators().is_empty()
    }

    pub(crate) fn require_minimal(&self) -> Result<()> {
        if self.check_minimal() {
            Ok(())
        } else {
            Err(Error::NotMinimal(self.name.clone()))
        }
    }

    /// The model-level H-space test: a minimal model with zero differential.
    pub fn is_h_space(&self) -> bool {
        self.differential.iter().all(Polynomial::is_zero)
    }

    /// Pure: even generators are cocycles and odd generators have
    /// differentials in the subalgebra generated by the even ones.
    pub fn is_pure(&self) -> bool {
        (0..self.algebra.len()).all(|g| {
            let dg = &self.differential[g];
            if self.algebra.is_odd(g) {
                dg.support().iter().all(|&h| !self.algebra.is_odd(h))
            } else {
                dg.is_zero()
            }
        })
    }

    /// Tensor product of two models; clashing generator names of `b` get
    /// the suffix `_<b's name>`.
    pub fn tensor(a: &Model, b: &Model) -> (Model, TensorEmbedding) {
        let mut taken: HashSet<String> = a.generators().iter().map(|g| g.name.clone()).collect();
        let mut declared: Vec<Generator> = a.generators().to_vec();
        for g in b.generators() {
            let mut name = g.name.clone();
            if taken.contains(&name) {
                name = format!("{}_{}", g.name, b.name);
                let mut i = 2;
                while taken.contains(&name) {
                    name = format!("{}_{}{}", g.name, b.name, i);
                    i += 1;
                }
            }
            taken.insert(name.clone());
            declared.push(Generator::new(name, g.degree));
        }
        let bound = match (a.bound(), b.bound()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let (algebra, ids) = GradedAlgebra::new(declared, bound).expect("valid factor generators");
        let left = ids[..a.algebra.len()].to_vec();
        let right = ids[a.algebra.len()..].to_vec();
        let mut differential = vec![Polynomial::zero(); algebra.len()];
        for g in 0..a.algebra.len() {
            differential[left[g]] = remap(&a.differential[g], &left);
        }
        for g in 0..b.algebra.len() {
            differential[right[g]] = remap(&b.differential[g], &right);
        }
        let sum = |x: Option<u32>, y: Option<u32>| x.zip(y).map(|(x, y)| x + y);
        let model = Model {
            name: format!("{}x{}", a.name, b.name),
            algebra,
            differential,
            cat0: sum(a.cat0, b.cat0),
            top: sum(a.top, b.top),
        };
        (model, TensorEmbedding { left, right })
    }

    /// Adds generators whose differentials are given in terms of this
    /// model's generators. Returns the extended model and the new ids of
    /// the old generators followed by the new ones.
    pub fn extended(
        &self,
        extra: Vec<(Generator, Polynomial)>,
        bound: Option<u32>,
    ) -> Result<(Model, Vec<GenId>)> {
        let mut declared = self.generators().to_vec();
        declared.extend(extra.iter().map(|(g, _)| g.clone()));
        let (algebra, ids) = GradedAlgebra::new(declared, bound)?;
        let old = &ids[..self.algebra.len()];
        let mut differential = vec![Polynomial::zero(); algebra.len()];
        for g in 0..self.algebra.len() {
            differential[old[g]] = remap(&self.differential[g], old);
        }
        for (i, (_, dg)) in extra.iter().enumerate() {
            self.algebra.check_ids(dg)?;
            differential[ids[self.algebra.len() + i]] = remap(dg, old);
        }
        let model = Model::from_parts(self.name.clone(), algebra, differential, self.cat0, self.top)?;
        Ok((model, ids))
    }
}

/// Relabels generators through an order-preserving id map.
pub(crate) fn remap(p: &Polynomial, ids: &[GenId]) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        debug_assert!(m.factors().windows(2).all(|w| ids[w[0].0] < ids[w[1].0]));
        out.add_term(
            Monomial::from_factors(m.factors().iter().map(|&(g, e)| (ids[g], e))),
            c.clone(),
        );
    }
    out
}

impl fmt::Display for Model {
    /// The model text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::print_model(self))
    }
}

/// The sign `(-1)^n` as a rational.
pub(crate) fn parity_sign(n: u32) -> Q {
    if n.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}
