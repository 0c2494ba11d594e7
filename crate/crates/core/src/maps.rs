//! Morphisms of Sullivan algebras given on generators.
//!
//! A space map f: A → X has a model map M_X → M_A; here `source` is always
//! the model the map is defined on and `target` where generators land.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::cohomology::{linear_coordinates, Cohomology};
use crate::error::{Error, Result};
use crate::grading::{Monomial, Polynomial};
use crate::model::Model;
use crate::ratlin::QMatrix;
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelMap {
    name: String,
    source: Arc<Model>,
    target: Arc<Model>,
    images: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum DgReport {
    Pass,
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: Option<u32>,
    },
    NotDg {
        generator: String,
        residual: String,
    },
}

impl DgReport {
    pub fn passed(&self) -> bool {
        matches!(self, DgReport::Pass)
    }
}

impl fmt::Display for DgReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DgReport::Pass => f.write_str("pass"),
            DgReport::DegreeMismatch {
                generator,
                expected,
                found: Some(found),
            } => write!(
                f,
                "image of `{generator}` has degree {found}, expected {expected}"
            ),
            DgReport::DegreeMismatch { generator, expected, .. } => write!(
                f,
                "image of `{generator}` is not homogeneous of degree {expected}"
            ),
            DgReport::NotDg { generator, residual } => write!(
                f,
                "f(d {generator}) - d(f {generator}) = {residual}"
            ),
        }
    }
}

impl ModelMap {
    /// A map given by the images of the source generators, in canonical
    /// order. Images must be homogeneous of the generator's degree.
    pub fn new(
        name: impl Into<String>,
        source: Arc<Model>,
        target: Arc<Model>,
        images: Vec<Polynomial>,
    ) -> Result<ModelMap> {
        let f = ModelMap::unchecked(name, source, target, images)?;
        for (g, img) in f.images.iter().enumerate() {
            let gen = f.source.algebra().generator(g);
            f.target.algebra().check_homogeneous(img, gen.degree, &gen.name)?;
        }
        Ok(f)
    }

    /// Like [`ModelMap::new`] but without the degree check; use
    /// [`ModelMap::check_dg`] to report problems.
    pub fn unchecked(
        name: impl Into<String>,
        source: Arc<Model>,
        target: Arc<Model>,
        images: Vec<Polynomial>,
    ) -> Result<ModelMap> {
        if images.len() != source.algebra().len() {
            return Err(Error::Precondition(format!(
                "{} images for {} generators",
                images.len(),
                source.algebra().len()
            )));
        }
        for img in &images {
            target.algebra().check_ids(img)?;
        }
        Ok(ModelMap {
            name: name.into(),
            source,
            target,
            images,
        })
    }

    /// Images given as `(generator name, polynomial text)`; the rest map to 0.
    pub fn from_text(
        name: &str,
        source: Arc<Model>,
        target: Arc<Model>,
        assignments: &[(&str, &str)],
    ) -> Result<ModelMap> {
        let mut images = vec![Polynomial::zero(); source.algebra().len()];
        for (g, text) in assignments {
            images[source.lookup(g)?] = target.parse(text)?;
        }
        ModelMap::new(name, source, target, images)
    }

    /// Images given as polynomials by generator name; the rest map to 0.
    pub fn from_polys(
        source: &Arc<Model>,
        target: &Arc<Model>,
        assignments: &[(&str, Polynomial)],
    ) -> Result<ModelMap> {
        let mut images = vec![Polynomial::zero(); source.algebra().len()];
        for (g, p) in assignments {
            images[source.lookup(g)?] = p.clone();
        }
        ModelMap::new("map", source.clone(), target.clone(), images)
    }

    pub fn identity(model: Arc<Model>) -> ModelMap {
        let images = (0..model.algebra().len()).map(Polynomial::generator).collect();
        ModelMap {
            name: format!("identity_{}", model.name()),
            source: model.clone(),
            target: model,
            images,
        }
    }

    pub fn zero(source: Arc<Model>, target: Arc<Model>) -> ModelMap {
        let images = vec![Polynomial::zero(); source.algebra().len()];
        ModelMap {
            name: format!("zero_{}_{}", source.name(), target.name()),
            source,
            target,
            images,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> ModelMap {
        self.name = name.into();
        self
    }

    pub fn source(&self) -> &Arc<Model> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Model> {
        &self.target
    }

    pub fn image(&self, g: usize) -> &Polynomial {
        &self.images[g]
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image_of(&self, name: &str) -> Result<&Polynomial> {
        Ok(&self.images[self.source.lookup(name)?])
    }

    /// The map extended multiplicatively to a polynomial of the source.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        self.source.algebra().check_ids(p)?;
        Ok(self.substitute(p))
    }

    pub(crate) fn substitute(&self, p: &Polynomial) -> Polynomial {
        let alg = self.target.algebra();
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out.add_assign_scaled(&self.substitute_monomial(m), c);
        }
        debug_assert!(alg.check_ids(&out).is_ok());
        out
    }

    fn substitute_monomial(&self, m: &Monomial) -> Polynomial {
        let alg = self.target.algebra();
        let mut acc = Polynomial::one();
        for &(g, e) in m.factors() {
            acc = alg.mul(&acc, &alg.pow(&self.images[g], e));
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Polynomial::is_zero)
    }

    /// f(d g) = d(f g) on every source generator.
    pub fn check_dg(&self) -> DgReport {
        let salg = self.source.algebra();
        let talg = self.target.algebra();
        for (g, img) in self.images.iter().enumerate() {
            let gen = salg.generator(g);
            if !img.is_zero() && talg.degree(img) != Some(gen.degree) {
                return DgReport::DegreeMismatch {
                    generator: gen.name.clone(),
                    expected: gen.degree,
                    found: talg.degree(img),
                };
            }
        }
        for (g, img) in self.images.iter().enumerate() {
            let lhs = self.substitute(self.source.differential_of(g));
            let rhs = self.target.d(img);
            let diff = &lhs - &rhs;
            if !diff.is_zero() {
                return DgReport::NotDg {
                    generator: salg.generator(g).name.clone(),
                    residual: self.target.format(&diff),
                };
            }
        }
        DgReport::Pass
    }

    /// `g ∘ f`: first `f`, then `g`.
    pub fn compose(g: &ModelMap, f: &ModelMap) -> Result<ModelMap> {
        if *f.target != *g.source {
            return Err(Error::ModelMismatch(format!(
                "`{}` lands in `{}` but `{}` starts at `{}`",
                f.name,
                f.target.name(),
                g.name,
                g.source.name()
            )));
        }
        Ok(ModelMap {
            name: format!("{}.{}", g.name, f.name),
            source: f.source.clone(),
            target: g.target.clone(),
            images: f.images.iter().map(|p| g.substitute(p)).collect(),
        })
    }

    /// The map on indecomposables in degree n: rows are target generators of
    /// degree n, columns source generators of degree n.
    pub fn induced_q(&self, n: u32) -> Result<QMatrix> {
        self.source.require_minimal()?;
        self.target.require_minimal()?;
        self.source.require_complete(n)?;
        self.target.require_complete(n)?;
        let cols: Vec<Vec<Q>> = self
            .source
            .algebra()
            .generators_of_degree(n)
            .into_iter()
            .map(|g| linear_coordinates(&self.target, n, &self.images[g]))
            .collect();
        Ok(QMatrix::from_columns(
            self.target.algebra().generators_of_degree(n).len(),
            &cols,
        ))
    }

    /// H^n of the map in the representative bases of both sides: column j
    /// holds the class of f(source representative j).
    pub fn induced_h(&self, n: u32) -> Result<QMatrix> {
        self.induced_h_with(n, &Cohomology::new(&self.source), &Cohomology::new(&self.target))
    }

    pub fn induced_h_with(
        &self,
        n: u32,
        source: &Cohomology<'_>,
        target: &Cohomology<'_>,
    ) -> Result<QMatrix> {
        let reps = source.betti(n)?.representatives;
        let rows = target.dim(n)?;
        let cols: Vec<Vec<Q>> = reps
            .iter()
            .map(|r| target.class_of(n, &self.substitute(r)))
            .collect::<Result<_>>()?;
        Ok(QMatrix::from_columns(rows, &cols))
    }

    /// Every generator lands on a cocycle, hence so does all of the image.
    pub fn image_in_cycles(&self) -> bool {
        self.images.iter().all(|p| self.target.d(p).is_zero())
    }
}

impl fmt::Display for ModelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_map(self))
    }
}

pub(crate) fn is_zero_matrix(m: &QMatrix) -> bool {
    (0..m.rows()).all(|i| m.row(i).iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn check_dg_examples() {
        assert!(catalog::hopf_composite().check_dg().passed());
        let p = Arc::new(catalog::s3xs4());
        let s4 = Arc::new(catalog::sphere(4));
        let bad = ModelMap::unchecked(
            "bad",
            s4.clone(),
            p.clone(),
            vec![Polynomial::zero(), p.parse("e*x + x").unwrap()],
        )
        .unwrap();
        assert!(matches!(bad.check_dg(), DgReport::DegreeMismatch { .. }));
        assert!(ModelMap::identity(p).check_dg().passed());
        let not_dg = ModelMap::from_text("f", s4.clone(), s4, &[("x", "x")]).unwrap();
        assert!(matches!(not_dg.check_dg(), DgReport::NotDg { .. }));
    }

    #[test]
    fn compose_examples() {
        let h = catalog::hopf_composite();
        let eta = catalog::hopf_map();
        let q = catalog::s7_quotient();
        let c = ModelMap::compose(&q, &eta).unwrap();
        assert_eq!(c.images(), h.images());
        assert_eq!(*c.target(), *h.target());
        let id = ModelMap::identity(h.source().clone());
        assert_eq!(ModelMap::compose(&h, &id).unwrap().images(), h.images());
        let z = ModelMap::zero(h.target().clone(), h.target().clone());
        assert!(ModelMap::compose(&z, &h).unwrap().is_zero());
        assert!(ModelMap::compose(&h, &h).is_err());
    }

    #[test]
    fn induced_q_examples() {
        let h = catalog::hopf_composite();
        assert!(is_zero_matrix(&h.induced_q(7).unwrap()));
        let b = catalog::bottom_cell();
        assert_eq!(b.induced_q(2).unwrap().rank(), 1);
        let id = ModelMap::identity(Arc::new(catalog::su3_t()));
        assert_eq!(id.induced_q(2).unwrap(), QMatrix::identity(2));
    }

    #[test]
    fn induced_h_examples() {
        let h = catalog::hopf_composite();
        for n in 0..=7 {
            assert!(is_zero_matrix(&h.induced_h(n).unwrap()) || n == 0, "degree {n}");
        }
        assert_eq!(catalog::a5_quotient().induced_h(5).unwrap().rank(), 1);
        assert_eq!(catalog::bottom_cell().induced_h(2).unwrap().rank(), 1);
        let id = ModelMap::identity(Arc::new(catalog::su3_t()));
        for n in 0..=6 {
            let m = id.induced_h(n).unwrap();
            assert_eq!(m, QMatrix::identity(m.rows()));
        }
    }

    #[test]
    fn image_in_cycles_examples() {
        assert!(catalog::hopf_composite().image_in_cycles());
        assert!(catalog::bottom_cell().image_in_cycles());
        assert!(!ModelMap::identity(Arc::new(catalog::sphere(4))).image_in_cycles());
    }

    #[test]
    fn functoriality_on_catalog_composites() {
        let eta = catalog::hopf_map();
        let q = catalog::s7_quotient();
        let c = ModelMap::compose(&q, &eta).unwrap();
        for n in [4, 7] {
            let lhs = c.induced_h(n).unwrap();
            let rhs = q.induced_h(n).unwrap().mul(&eta.induced_h(n).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = c.induced_q(n).unwrap();
            let rhs = q.induced_q(n).unwrap().mul(&eta.induced_q(n).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cycle_images_represent_induced_classes() {
        let f = catalog::a5_quotient();
        let src = Cohomology::new(f.source());
        let tgt = Cohomology::new(f.target());
        let rep = &src.betti(5).unwrap().representatives[0];
        let col = f.induced_h(5).unwrap().column(0);
        assert_eq!(tgt.class_of(5, &f.apply(rep).unwrap()).unwrap(), col);
    }
}
