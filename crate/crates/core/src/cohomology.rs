//! Degree-bounded cohomology of a model and the invariants read off it:
//! Betti numbers, cup products, cup length, the dual Hurewicz map ζ,
//! spherical cohomology and the Euler characteristic.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grading::{split_word_length, GenId, Monomial, Polynomial};
use crate::model::Model;
use crate::ratlin::{self, QMatrix};
use crate::Q;

/// A basis of H^n given by cocycle representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyBasis {
    pub degree: u32,
    pub representatives: Vec<Polynomial>,
    pub dimension: usize,
}

/// ζ in one degree: the linear parts of a basis of H^n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphericalReport {
    pub degree: u32,
    pub dim_sh: usize,
    /// rows: generators of degree n; columns: the H^n basis
    pub zeta_matrix: QMatrix,
    /// basis of the image of ζ inside V^n
    #[serde(serialize_with = "crate::report::ser_vectors")]
    pub sh_subspace: Vec<Vec<Q>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub model: String,
    /// b_0 ..= b_window
    pub betti: Vec<usize>,
    pub window: u32,
    /// certified top degree, if any
    pub top_degree: Option<u32>,
    pub euler: Option<i64>,
    pub cup_length: u32,
    pub finite_cohomology: Tri,
    pub positive_euler: Tri,
    pub odd_vanishes: Tri,
    pub f0: Tri,
    /// Σ|odd| − Σ(|even| − 1), for pure models
    pub formal_dimension: Option<i64>,
}

pub(crate) struct DegreeData {
    pub degree: u32,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    pub boundaries: Vec<Vec<Q>>,
    pub reps: Vec<Vec<Q>>,
}

impl DegreeData {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn to_vector(&self, p: &Polynomial) -> Result<Vec<Q>> {
        let mut v = vec![Q::zero(); self.basis.len()];
        for (m, c) in p.terms() {
            let i = *self
                .index
                .get(m)
                .ok_or_else(|| Error::NotHomogeneous(format!("element of degree {}", self.degree)))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn to_polynomial(&self, v: &[Q]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in self.basis.iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    /// Coordinates of the class of a cocycle vector in the chosen basis.
    fn class_coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let mut cols = self.reps.clone();
        cols.extend(self.boundaries.iter().cloned());
        let x = ratlin::coordinates(&cols, v)?;
        Some(x[..self.reps.len()].to_vec())
    }
}

/// Memoizing cohomology calculator for one model.
pub struct Cohomology<'m> {
    model: &'m Model,
    cache: RefCell<BTreeMap<u32, Rc<DegreeData>>>,
}

impl<'m> Cohomology<'m> {
    pub fn new(model: &'m Model) -> Self {
        Cohomology {
            model,
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub(crate) fn degree(&self, n: u32) -> Result<Rc<DegreeData>> {
        if let Some(d) = self.cache.borrow().get(&n) {
            return Ok(d.clone());
        }
        let data = Rc::new(self.compute(n)?);
        self.cache.borrow_mut().insert(n, data.clone());
        Ok(data)
    }

    fn compute(&self, n: u32) -> Result<DegreeData> {
        let m = self.model;
        let basis = m.algebra().basis(n)?;
        let index: HashMap<Monomial, usize> =
            basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();

        // matrix of d: C^n -> C^{n+1} on the monomials that actually occur
        let images: Vec<Polynomial> = basis.iter().map(|b| m.d_monomial(b)).collect();
        let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
        for p in &images {
            for (mono, _) in p.terms() {
                let next = rows.len();
                rows.entry(mono.clone()).or_insert(next);
            }
        }
        let mut dmat = QMatrix::zeros(rows.len(), basis.len());
        for (j, p) in images.iter().enumerate() {
            for (mono, c) in p.terms() {
                dmat[(rows[mono], j)] = c.clone();
            }
        }
        let cocycles = ratlin::kernel_basis(&dmat);

        let mut boundaries = Vec::new();
        if n > 0 {
            let lower = m.algebra().basis(n - 1)?;
            let mut images = Vec::new();
            for b in &lower {
                let db = m.d_monomial(b);
                let mut v = vec![Q::zero(); basis.len()];
                for (mono, c) in db.terms() {
                    v[index[mono]] = c.clone();
                }
                images.push(v);
            }
            if !images.is_empty() {
                boundaries = ratlin::independent_subset(basis.len(), &images);
            }
        }
        let reps = ratlin::extend_independent(basis.len(), &boundaries, &cocycles);
        Ok(DegreeData {
            degree: n,
            basis,
            index,
            boundaries,
            reps,
        })
    }

    pub fn betti(&self, n: u32) -> Result<CohomologyBasis> {
        let data = self.degree(n)?;
        Ok(CohomologyBasis {
            degree: n,
            representatives: data.reps.iter().map(|v| data.to_polynomial(v)).collect(),
            dimension: data.dim(),
        })
    }

    pub fn dim(&self, n: u32) -> Result<usize> {
        Ok(self.degree(n)?.dim())
    }

    /// Class coordinates of a homogeneous cocycle of degree `n`.
    pub fn class_of(&self, n: u32, p: &Polynomial) -> Result<Vec<Q>> {
        let data = self.degree(n)?;
        if !self.model.d(p).is_zero() {
            return Err(Error::NotACocycle(self.model.format(p)));
        }
        let v = data.to_vector(p)?;
        Ok(data
            .class_coordinates(&v)
            .expect("a cocycle lies in the span of representatives and boundaries"))
    }

    /// Whether a cocycle is a coboundary.
    pub fn is_exact(&self, n: u32, p: &Polynomial) -> Result<bool> {
        Ok(self.class_of(n, p)?.iter().all(Zero::is_zero))
    }

    /// Some η with dη = p, if one exists.
    pub fn primitive(&self, n: u32, p: &Polynomial) -> Result<Option<Polynomial>> {
        if n == 0 {
            return Ok(p.is_zero().then(Polynomial::zero));
        }
        let lower = self.model.algebra().basis(n - 1)?;
        let target = self.degree(n)?;
        let v = target.to_vector(p)?;
        let cols: Vec<Vec<Q>> = lower
            .iter()
            .map(|b| target.to_vector(&self.model.d_monomial(b)))
            .collect::<Result<_>>()?;
        let Some(x) = ratlin::coordinates(&cols, &v) else {
            return Ok(None);
        };
        let mut eta = Polynomial::zero();
        for (b, c) in lower.into_iter().zip(x) {
            eta.add_term(b, c);
        }
        Ok(Some(eta))
    }

    /// The subspace of H^n spanned by products of positive-degree classes,
    /// as coordinate vectors in the H^n basis.
    pub fn h_plus_squared(&self, n: u32) -> Result<Vec<Vec<Q>>> {
        let target = self.degree(n)?;
        let mut classes = Vec::new();
        for i in 1..n {
            let j = n - i;
            if j < i {
                break;
            }
            let left = self.betti(i)?;
            let right = self.betti(j)?;
            for a in &left.representatives {
                for b in &right.representatives {
                    let prod = self.model.mul(a, b);
                    classes.push(self.class_of(n, &prod)?);
                }
            }
        }
        if classes.is_empty() {
            return Ok(Vec::new());
        }
        Ok(ratlin::independent_subset(target.dim(), &classes)
            .into_iter()
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect())
    }

    /// The longest nonzero product of positive-degree classes in degrees
    /// `<= max_degree`.
    pub fn cup_length(&self, max_degree: u32) -> Result<u32> {
        let positive: Vec<(u32, Vec<Polynomial>)> = (1..=max_degree)
            .map(|n| Ok((n, self.betti(n)?.representatives)))
            .collect::<Result<_>>()?;
        // layer[n] = independent cocycles spanning D_k in degree n
        let mut layer: BTreeMap<u32, Vec<Polynomial>> = positive
            .iter()
            .filter(|(_, r)| !r.is_empty())
            .cloned()
            .collect();
        let mut length = 0;
        while !layer.is_empty() {
            length += 1;
            let mut next: BTreeMap<u32, Vec<Polynomial>> = BTreeMap::new();
            for (i, reps) in positive.iter().filter(|(_, r)| !r.is_empty()) {
                for (j, elems) in &layer {
                    let n = i + j;
                    if n > max_degree {
                        continue;
                    }
                    for a in reps {
                        for b in elems {
                            next.entry(n).or_default().push(self.model.mul(a, b));
                        }
                    }
                }
            }
            let mut reduced = BTreeMap::new();
            for (n, elems) in next {
                let data = self.degree(n)?;
                let classes: Vec<Vec<Q>> = elems
                    .iter()
                    .map(|p| self.class_of(n, p))
                    .collect::<Result<_>>()?;
                let keep: Vec<Polynomial> = ratlin::independent_subset(data.dim(), &classes)
                    .into_iter()
                    .filter(|v| v.iter().any(|x| !x.is_zero()))
                    .map(|cls| {
                        let v = combine(&data.reps, &cls);
                        data.to_polynomial(&v)
                    })
                    .collect();
                if !keep.is_empty() {
                    reduced.insert(n, keep);
                }
            }
            layer = reduced;
        }
        Ok(length)
    }

    /// ζ on a cocycle: coordinates of its linear part in the degree-n
    /// generators.
    pub fn zeta(&self, p: &Polynomial) -> Result<Vec<Q>> {
        self.model.require_minimal()?;
        if !self.model.d(p).is_zero() {
            return Err(Error::NotACocycle(self.model.format(p)));
        }
        let Some(n) = self.model.degree(p) else {
            return Ok(Vec::new());
        };
        Ok(linear_coordinates(self.model, n, p))
    }

    pub fn spherical_dims(&self, n: u32) -> Result<SphericalReport> {
        self.model.require_minimal()?;
        let basis = self.betti(n)?;
        let gens = self.model.algebra().generators_of_degree(n);
        let columns: Vec<Vec<Q>> = basis
            .representatives
            .iter()
            .map(|r| linear_coordinates(self.model, n, r))
            .collect();
        let zeta_matrix = QMatrix::from_columns(gens.len(), &columns);
        let sh_subspace = if columns.is_empty() {
            Vec::new()
        } else {
            ratlin::independent_subset(gens.len(), &columns)
                .into_iter()
                .filter(|v| v.iter().any(|x| !x.is_zero()))
                .collect()
        };
        Ok(SphericalReport {
            degree: n,
            dim_sh: sh_subspace.len(),
            zeta_matrix,
            sh_subspace,
        })
    }

    /// A degree through which cohomology is certified to be all there is:
    /// the declared top degree, or the formal dimension of a pure model
    /// whose cohomology is certified finite.
    pub fn certified_top(&self) -> Result<Option<u32>> {
        if let Some(t) = self.model.declared_top() {
            return Ok(Some(t));
        }
        if pure_finite(self.model)? == Tri::Yes {
            return Ok(formal_dimension(self.model).map(|fd| fd as u32));
        }
        Ok(None)
    }

    pub fn euler_and_flags(&self) -> Result<InvariantReport> {
        let model = self.model;
        let top = self.certified_top()?;
        let finite = if model.declared_top().is_some() {
            Tri::Yes
        } else {
            pure_finite(model)?
        };
        let window = match (top, model.bound()) {
            (Some(t), Some(b)) => t.min(b),
            (Some(t), None) => t,
            (None, Some(b)) => b,
            (None, None) => default_window(model),
        };
        let betti: Vec<usize> = (0..=window).map(|n| self.dim(n)).collect::<Result<_>>()?;
        let euler = match top {
            Some(t) if t <= window => Some(
                betti
                    .iter()
                    .enumerate()
                    .map(|(n, &b)| if n % 2 == 0 { b as i64 } else { -(b as i64) })
                    .sum(),
            ),
            _ => None,
        };
        let odd_seen = betti.iter().enumerate().any(|(n, &b)| n % 2 == 1 && b > 0);
        let odd_vanishes = if odd_seen {
            Tri::No
        } else if euler.is_some() {
            Tri::Yes
        } else {
            Tri::Unknown
        };
        let positive_euler = match euler {
            Some(e) => Tri::from_bool(e > 0),
            None => Tri::Unknown,
        };
        let f0 = if model.is_complete()
            && finite == Tri::Yes
            && positive_euler == Tri::Yes
            && odd_vanishes == Tri::Yes
        {
            Tri::Yes
        } else if finite == Tri::No || positive_euler == Tri::No || odd_vanishes == Tri::No {
            Tri::No
        } else {
            Tri::Unknown
        };
        Ok(InvariantReport {
            model: model.name().to_string(),
            cup_length: self.cup_length(window)?,
            betti,
            window,
            top_degree: top,
            euler,
            finite_cohomology: finite,
            positive_euler,
            odd_vanishes,
            f0,
            formal_dimension: if model.is_pure() {
                formal_dimension(model)
            } else {
                None
            },
        })
    }
}

fn combine(vectors: &[Vec<Q>], coeffs: &[Q]) -> Vec<Q> {
    let len = vectors.first().map_or(0, Vec::len);
    let mut out = vec![Q::zero(); len];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += x * c;
        }
    }
    out
}

/// Coordinates of the linear part of `p` in the generators of degree `n`.
pub(crate) fn linear_coordinates(model: &Model, n: u32, p: &Polynomial) -> Vec<Q> {
    let gens = model.algebra().generators_of_degree(n);
    let lin = split_word_length(p).linear;
    gens.iter()
        .map(|&g| lin.coefficient(&Monomial::generator(g)))
        .collect()
}

/// Σ|odd generators| − Σ(|even generators| − 1).
pub fn formal_dimension(model: &Model) -> Option<i64> {
    let fd: i64 = model
        .generators()
        .iter()
        .map(|g| {
            if g.is_odd() {
                g.degree as i64
            } else {
                -(g.degree as i64 - 1)
            }
        })
        .sum();
    (fd >= 0).then_some(fd)
}

/// For a complete pure model, decides finiteness of cohomology: it is
/// finite exactly when every even generator has a power lying in the ideal
/// generated by the differentials of the odd generators, and then the power
/// just above the formal dimension already does.
pub fn pure_finite(model: &Model) -> Result<Tri> {
    if !model.is_complete() || !model.is_pure() {
        return Ok(Tri::Unknown);
    }
    let Some(fd) = formal_dimension(model) else {
        return Ok(Tri::No);
    };
    let alg = model.algebra();
    let evens: Vec<GenId> = (0..alg.len()).filter(|&g| !alg.is_odd(g)).collect();
    let relations: Vec<Polynomial> = (0..alg.len())
        .filter(|&g| alg.is_odd(g))
        .map(|g| model.differential_of(g).clone())
        .filter(|p| !p.is_zero())
        .collect();
    for &x in &evens {
        let d = alg.generator(x).degree;
        let k = fd as u32 / d + 1;
        let power = alg.pow(&Polynomial::generator(x), k);
        if !in_even_ideal(model, &relations, &power, k * d) {
            return Ok(Tri::No);
        }
    }
    Ok(Tri::Yes)
}

fn in_even_ideal(model: &Model, relations: &[Polynomial], target: &Polynomial, degree: u32) -> bool {
    let alg = model.algebra();
    let even_only = |m: &Monomial| m.factors().iter().all(|&(g, _)| !alg.is_odd(g));
    let mut spanning = Vec::new();
    for r in relations {
        let rd = alg.degree(r).expect("homogeneous relation");
        if rd > degree {
            continue;
        }
        for m in alg.basis_unchecked(degree - rd) {
            if even_only(&m) {
                spanning.push(alg.mul(&alg.monomial_poly(&m), r));
            }
        }
    }
    let basis: Vec<Monomial> = alg
        .basis_unchecked(degree)
        .into_iter()
        .filter(|m| even_only(m))
        .collect();
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let vec_of = |p: &Polynomial| {
        let mut v = vec![Q::zero(); basis.len()];
        for (m, c) in p.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    let cols: Vec<Vec<Q>> = spanning.iter().map(vec_of).collect();
    ratlin::member(&cols, &vec_of(target))
}

/// Degree window used for reports when a model is complete but no top
/// degree is certified.
pub fn default_window(model: &Model) -> u32 {
    (2 * model.algebra().max_generator_degree()).max(12)
}

pub fn betti(model: &Model, n: u32) -> Result<CohomologyBasis> {
    Cohomology::new(model).betti(n)
}

pub fn h_plus_squared(model: &Model, n: u32) -> Result<Vec<Vec<Q>>> {
    Cohomology::new(model).h_plus_squared(n)
}

pub fn cup_length(model: &Model, max_degree: u32) -> Result<u32> {
    Cohomology::new(model).cup_length(max_degree)
}

pub fn zeta(model: &Model, representative: &Polynomial) -> Result<Vec<Q>> {
    Cohomology::new(model).zeta(representative)
}

pub fn spherical_dims(model: &Model, n: u32) -> Result<SphericalReport> {
    Cohomology::new(model).spherical_dims(n)
}

pub fn euler_and_flags(model: &Model) -> Result<InvariantReport> {
    Cohomology::new(model).euler_and_flags()
}
