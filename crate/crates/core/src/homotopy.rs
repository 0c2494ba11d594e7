//! DG homotopies through the cylinder M ⊗ Λ(t, dt).
//!
//! |t| = 0, |dt| = 1, d t = dt. A cylinder element is a finite sum
//! Σ p_i t^i + q_i t^i dt with coefficients from the base model written on
//! the left.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cohomology::Cohomology;
use crate::error::{Error, Result};
use crate::grading::{format_terms, GradedAlgebra, Monomial, Polynomial};
use crate::maps::ModelMap;
use crate::model::{parity_sign, Model};
use crate::ratlin::{self, QMatrix};
use crate::text::{ExprTarget, ParseError, ParseErrorKind, Pos};
use crate::Q;

pub const DEFAULT_T_CAP: u32 = 16;

/// An element of M ⊗ Λ(t, dt), keyed by (power of t, has dt).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CylElem {
    parts: BTreeMap<(u32, bool), Polynomial>,
}

impl CylElem {
    pub fn zero() -> Self {
        CylElem::default()
    }

    pub fn from_base(p: Polynomial) -> Self {
        CylElem::from_part(0, false, p)
    }

    pub fn from_part(t_power: u32, dt: bool, p: Polynomial) -> Self {
        let mut c = CylElem::zero();
        c.add_part(t_power, dt, &p);
        c
    }

    pub fn t() -> Self {
        CylElem::from_part(1, false, Polynomial::one())
    }

    pub fn dt() -> Self {
        CylElem::from_part(0, true, Polynomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, t_power: u32, dt: bool) -> Polynomial {
        self.parts.get(&(t_power, dt)).cloned().unwrap_or_default()
    }

    pub fn parts(&self) -> impl Iterator<Item = (u32, bool, &Polynomial)> {
        self.parts.iter().map(|(&(i, a), p)| (i, a, p))
    }

    pub fn t_degree(&self) -> u32 {
        self.parts.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    fn len(&self) -> usize {
        self.parts.values().map(Polynomial::len).sum()
    }

    pub fn add_part(&mut self, t_power: u32, dt: bool, p: &Polynomial) {
        if p.is_zero() {
            return;
        }
        let slot = self.parts.entry((t_power, dt)).or_default();
        *slot += p;
        if slot.is_zero() {
            self.parts.remove(&(t_power, dt));
        }
    }

    pub fn add(&self, other: &CylElem) -> CylElem {
        let mut out = self.clone();
        for (i, a, p) in other.parts() {
            out.add_part(i, a, p);
        }
        out
    }

    pub fn sub(&self, other: &CylElem) -> CylElem {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> CylElem {
        let mut out = CylElem::zero();
        for (i, a, p) in self.parts() {
            out.add_part(i, a, &p.scale(c));
        }
        out
    }

    /// (p t^i dt^a)(q t^j dt^b) = (-1)^{a|q|} pq t^{i+j} dt^{a+b}
    pub fn mul(&self, alg: &GradedAlgebra, other: &CylElem) -> CylElem {
        let mut out = CylElem::zero();
        for (i, a, p) in self.parts() {
            for (j, b, q) in other.parts() {
                if a && b {
                    continue;
                }
                let q = if a { odd_twist(alg, q) } else { q.clone() };
                out.add_part(i + j, a || b, &alg.mul(p, &q));
            }
        }
        out
    }

    pub fn pow(&self, alg: &GradedAlgebra, e: u32) -> CylElem {
        let mut acc = CylElem::from_base(Polynomial::one());
        for _ in 0..e {
            acc = acc.mul(alg, self);
        }
        acc
    }

    /// d(p t^i dt^a) = dp t^i dt^a + (-1)^{|p|} p d(t^i dt^a)
    pub fn d(&self, model: &Model) -> CylElem {
        let alg = model.algebra();
        let mut out = CylElem::zero();
        for (i, a, p) in self.parts() {
            out.add_part(i, a, &model.d(p));
            if !a && i > 0 {
                let twisted = odd_twist(alg, p).scale(&Q::from_integer(i.into()));
                out.add_part(i - 1, true, &twisted);
            }
        }
        out
    }

    /// t ↦ 0, dt ↦ 0.
    pub fn at_zero(&self) -> Polynomial {
        self.part(0, false)
    }

    /// t ↦ 1, dt ↦ 0.
    pub fn at_one(&self) -> Polynomial {
        let mut out = Polynomial::zero();
        for (_, a, p) in self.parts() {
            if !a {
                out += p;
            }
        }
        out
    }

    /// Total degree is |p| for t-parts and |p| + 1 for dt-parts.
    pub fn check_degree(&self, alg: &GradedAlgebra, expected: u32, what: &str) -> Result<()> {
        for (_, a, p) in self.parts() {
            if a && expected == 0 {
                return Err(Error::DegreeMismatch {
                    what: what.to_string(),
                    expected,
                    found: alg.degree(p).unwrap_or(0) + 1,
                });
            }
            alg.check_homogeneous(p, expected - u32::from(a), what)?;
        }
        Ok(())
    }

    pub fn format(&self, alg: &GradedAlgebra) -> String {
        let mut terms = Vec::new();
        for (i, a, p) in self.parts() {
            for (m, c) in p.terms() {
                let mut factors = Vec::new();
                if !m.is_one() {
                    factors.push(alg.format_monomial(m));
                }
                match i {
                    0 => {}
                    1 => factors.push("t".to_string()),
                    _ => factors.push(format!("t^{i}")),
                }
                if a {
                    factors.push("dt".to_string());
                }
                let is_one = factors.is_empty();
                terms.push((factors.join("*"), is_one, c));
            }
        }
        format_terms(terms.into_iter())
    }
}

/// p with every monomial of odd degree negated, i.e. (-1)^{|p|} p termwise.
fn odd_twist(alg: &GradedAlgebra, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        out.add_term(m.clone(), c * parity_sign(alg.monomial_degree(m)));
    }
    out
}

pub(crate) struct CylTarget<'a>(pub &'a GradedAlgebra);

impl ExprTarget for CylTarget<'_> {
    type Value = CylElem;

    fn constant(&self, c: Q) -> CylElem {
        CylElem::from_base(Polynomial::constant(c))
    }

    fn variable(&self, name: &str, at: Pos) -> std::result::Result<CylElem, ParseError> {
        match name {
            "t" => Ok(CylElem::t()),
            "dt" => Ok(CylElem::dt()),
            _ => self.0.gen(name).map(CylElem::from_base).map_err(|_| ParseError {
                kind: ParseErrorKind::UnknownGenerator,
                line: at.line,
                column: at.column,
                message: format!("unknown generator `{name}`"),
            }),
        }
    }

    fn add(&self, a: &CylElem, b: &CylElem) -> CylElem {
        a.add(b)
    }

    fn mul(&self, a: &CylElem, b: &CylElem) -> CylElem {
        a.mul(self.0, b)
    }

    fn scale(&self, a: &CylElem, c: &Q) -> CylElem {
        a.scale(c)
    }

    fn size(&self, a: &CylElem) -> usize {
        a.len()
    }
}

/// A morphism from `source` into `target ⊗ Λ(t, dt)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    name: String,
    source: Arc<Model>,
    target: Arc<Model>,
    images: Vec<CylElem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum HomotopyCheck {
    Pass,
    NotDg { generator: String, residual: String },
    EndpointMismatch { end: u8, generator: String },
}

impl HomotopyCheck {
    pub fn passed(&self) -> bool {
        matches!(self, HomotopyCheck::Pass)
    }
}

impl Homotopy {
    pub fn new(
        name: impl Into<String>,
        source: Arc<Model>,
        target: Arc<Model>,
        images: Vec<CylElem>,
    ) -> Result<Homotopy> {
        if images.len() != source.algebra().len() {
            return Err(Error::Precondition(format!(
                "{} images for {} generators",
                images.len(),
                source.algebra().len()
            )));
        }
        for (g, img) in images.iter().enumerate() {
            for (_, _, p) in img.parts() {
                target.algebra().check_ids(p)?;
            }
            let gen = source.algebra().generator(g);
            img.check_degree(target.algebra(), gen.degree, &gen.name)?;
        }
        Ok(Homotopy {
            name: name.into(),
            source,
            target,
            images,
        })
    }

    /// The homotopy that does not move `f`.
    pub fn constant(f: &ModelMap) -> Homotopy {
        Homotopy {
            name: format!("const_{}", f.name()),
            source: f.source().clone(),
            target: f.target().clone(),
            images: f.images().iter().cloned().map(CylElem::from_base).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Homotopy {
        self.name = name.into();
        self
    }

    pub fn source(&self) -> &Arc<Model> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Model> {
        &self.target
    }

    pub fn image(&self, g: usize) -> &CylElem {
        &self.images[g]
    }

    pub fn images(&self) -> &[CylElem] {
        &self.images
    }

    /// The homotopy extended multiplicatively to a source polynomial.
    pub fn apply(&self, p: &Polynomial) -> CylElem {
        let alg = self.target.algebra();
        let mut out = CylElem::zero();
        for (m, c) in p.terms() {
            let mut acc = CylElem::from_base(Polynomial::one());
            for &(g, e) in m.factors() {
                acc = acc.mul(alg, &self.images[g].pow(alg, e));
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    /// d(H v) = H(d v) for every generator v.
    pub fn check_dg(&self) -> HomotopyCheck {
        for (g, img) in self.images.iter().enumerate() {
            let lhs = img.d(&self.target);
            let rhs = self.apply(self.source.differential_of(g));
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                return HomotopyCheck::NotDg {
                    generator: self.source.algebra().generator(g).name.clone(),
                    residual: diff.format(self.target.algebra()),
                };
            }
        }
        HomotopyCheck::Pass
    }

    /// The maps at t = 0 and t = 1.
    pub fn endpoints(&self) -> (ModelMap, ModelMap) {
        let end = |k: u8, f: fn(&CylElem) -> Polynomial| {
            ModelMap::new(
                format!("{}@{k}", self.name),
                self.source.clone(),
                self.target.clone(),
                self.images.iter().map(f).collect(),
            )
            .expect("endpoint images have generator degrees")
        };
        (end(0, CylElem::at_zero), end(1, CylElem::at_one))
    }

    /// DG check plus exact endpoint comparison.
    pub fn verify(&self, f: &ModelMap, g: &ModelMap) -> HomotopyCheck {
        if **f.source() != *self.source
            || **g.source() != *self.source
            || **f.target() != *self.target
            || **g.target() != *self.target
        {
            return HomotopyCheck::EndpointMismatch {
                end: 0,
                generator: String::new(),
            };
        }
        let dg = self.check_dg();
        if !dg.passed() {
            return dg;
        }
        for (i, img) in self.images.iter().enumerate() {
            let name = || self.source.algebra().generator(i).name.clone();
            if img.at_zero() != *f.image(i) {
                return HomotopyCheck::EndpointMismatch { end: 0, generator: name() };
            }
            if img.at_one() != *g.image(i) {
                return HomotopyCheck::EndpointMismatch { end: 1, generator: name() };
            }
        }
        HomotopyCheck::Pass
    }

    /// `self ∘ g` for a map g into the source of the homotopy.
    pub fn after(&self, g: &ModelMap) -> Result<Homotopy> {
        if **g.target() != *self.source {
            return Err(Error::ModelMismatch(format!(
                "`{}` lands in `{}`, not `{}`",
                g.name(),
                g.target().name(),
                self.source.name()
            )));
        }
        Ok(Homotopy {
            name: format!("{}.{}", self.name, g.name()),
            source: g.source().clone(),
            target: self.target.clone(),
            images: g.images().iter().map(|p| self.apply(p)).collect(),
        })
    }
}

impl fmt::Display for Homotopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_homotopy(self))
    }
}

pub fn endpoints(h: &Homotopy) -> (ModelMap, ModelMap) {
    h.endpoints()
}

pub fn verify_homotopy(h: &Homotopy, f: &ModelMap, g: &ModelMap) -> bool {
    h.verify(f, g).passed()
}

fn one_minus_t() -> CylElem {
    CylElem::from_base(Polynomial::one()).sub(&CylElem::t())
}

/// The homotopy Ψ on Λ(x, y; dy = x^{k+1}), |x| = 2n, with coefficient `c`
/// in place of 1/(k+1):
///
/// Ψ(x) = a(1-t) + c b_k dt,
/// Ψ(y) = b - c b_k a^k + c b_k a^k (1-t)^{k+1}.
///
/// No identities are checked.
pub fn build_psi_with_coefficient(
    target: Arc<Model>,
    k: u32,
    n: u32,
    a: &Polynomial,
    b: &Polynomial,
    b_k: &Polynomial,
    c: &Q,
) -> Result<Homotopy> {
    let source = Arc::new(crate::catalog::truncated(n, k));
    let alg = target.algebra();
    let bk_ak = alg.mul(b_k, &alg.pow(a, k));
    let psi_x = CylElem::from_base(a.clone())
        .mul(alg, &one_minus_t())
        .add(&CylElem::from_part(0, true, b_k.scale(c)));
    let psi_y = CylElem::from_base(b - &bk_ak.scale(c)).add(
        &CylElem::from_base(bk_ak.scale(c)).mul(alg, &one_minus_t().pow(alg, k + 1)),
    );
    let mut images = vec![CylElem::zero(); 2];
    images[source.lookup("x")?] = psi_x;
    images[source.lookup("y")?] = psi_y;
    Homotopy::new("psi", source, target, images)
}

/// Ψ with c = 1/(k+1), after checking d a = 0, d b = a^{k+1} and
/// d b_k = (k+1) a. The result is verified against its endpoints
/// (x ↦ a, y ↦ b) and (x ↦ 0, y ↦ b - b_k a^k/(k+1)).
pub fn build_psi(
    target: Arc<Model>,
    k: u32,
    n: u32,
    a: &Polynomial,
    b: &Polynomial,
    b_k: &Polynomial,
) -> Result<Homotopy> {
    if k == 0 || n == 0 {
        return Err(Error::Precondition("k and n must be positive".into()));
    }
    let alg = target.algebra();
    alg.check_homogeneous(a, 2 * n, "a")?;
    alg.check_homogeneous(b, 2 * n * (k + 1) - 1, "b")?;
    alg.check_homogeneous(b_k, 2 * n - 1, "b_k")?;
    let fail = |what: &str, residual: &Polynomial| {
        Err(Error::Precondition(format!(
            "{what} fails by {}",
            target.format(residual)
        )))
    };
    let da = target.apply_d(a)?;
    if !da.is_zero() {
        return fail("d(a) = 0", &da);
    }
    let r = &target.apply_d(b)? - &alg.pow(a, k + 1);
    if !r.is_zero() {
        return fail("d(b) = a^(k+1)", &r);
    }
    let kk = Q::from_integer((k + 1).into());
    let r = &target.apply_d(b_k)? - &a.scale(&kk);
    if !r.is_zero() {
        return fail("d(b_k) = (k+1)a", &r);
    }
    let c = kk.recip();
    let psi = build_psi_with_coefficient(target.clone(), k, n, a, b, b_k, &c)?;
    let (start, end) = psi_endpoints(&psi, a, b, b_k, k, &c)?;
    match psi.verify(&start, &end) {
        HomotopyCheck::Pass => Ok(psi),
        other => Err(Error::Precondition(format!("psi does not verify: {other:?}"))),
    }
}

/// The endpoints Ψ is claimed to connect.
pub fn psi_endpoints(
    psi: &Homotopy,
    a: &Polynomial,
    b: &Polynomial,
    b_k: &Polynomial,
    k: u32,
    c: &Q,
) -> Result<(ModelMap, ModelMap)> {
    let alg = psi.target().algebra();
    let src = psi.source();
    let start = ModelMap::from_polys(src, psi.target(), &[("x", a.clone()), ("y", b.clone())])?;
    let end_y = b - &alg.mul(b_k, &alg.pow(a, k)).scale(c);
    let end = ModelMap::from_polys(src, psi.target(), &[("y", end_y)])?;
    Ok((start.renamed("psi_start"), end.renamed("psi_end")))
}

/// Moves f̃, defined on a source with zero differential, to a map vanishing
/// on the odd generators:
///
/// Φ(a_i) = f̃(a_i), Φ(b_j) = f̃(b_j)(1-t) - η_j dt with d η_j = f̃(b_j).
///
/// Witnesses η_j may be supplied by generator name; missing ones are solved
/// for.
pub fn kill_odd(f: &ModelMap, witnesses: &[(&str, Polynomial)]) -> Result<Homotopy> {
    let src = f.source();
    let tgt = f.target();
    if src.generators().iter().enumerate().any(|(g, _)| !src.differential_of(g).is_zero()) {
        return Err(Error::Precondition(format!(
            "`{}` has a nonzero differential",
            src.name()
        )));
    }
    let coh = Cohomology::new(tgt);
    let alg = tgt.algebra();
    let mut images = Vec::with_capacity(src.algebra().len());
    for (g, gen) in src.generators().iter().enumerate() {
        let c = f.image(g);
        if !gen.is_odd() {
            images.push(CylElem::from_base(c.clone()));
            continue;
        }
        let eta = match witnesses.iter().find(|(n, _)| *n == gen.name) {
            Some((_, eta)) => {
                let r = &tgt.apply_d(eta)? - c;
                if !r.is_zero() {
                    return Err(Error::Precondition(format!(
                        "witness for `{}` is off by {}",
                        gen.name,
                        tgt.format(&r)
                    )));
                }
                eta.clone()
            }
            None => coh.primitive(gen.degree, c)?.ok_or_else(|| Error::Obstruction {
                generator: gen.name.clone(),
                degree: gen.degree,
                representative: tgt.format(c),
            })?,
        };
        let img = CylElem::from_base(c.clone())
            .mul(alg, &one_minus_t())
            .sub(&CylElem::from_part(0, true, eta));
        images.push(img);
    }
    let phi = Homotopy::new(format!("phi_{}", f.name()), src.clone(), tgt.clone(), images)?;
    let (start, end) = phi.endpoints();
    debug_assert_eq!(start.images(), f.images());
    for (g, gen) in src.generators().iter().enumerate() {
        if gen.is_odd() {
            assert!(end.image(g).is_zero());
        }
    }
    match phi.verify(f, &end) {
        HomotopyCheck::Pass => Ok(phi),
        other => Err(Error::Precondition(format!("phi does not verify: {other:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionKind {
    /// the maps differ on cohomology
    Cohomology,
    /// the first generator where the maps differ, all lower generators
    /// going to zero under both
    Generator,
}

/// A certified reason two maps are not homotopic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub degree: u32,
    pub generator: Option<String>,
    /// a cocycle whose class is nonzero
    pub representative: String,
    /// its coordinates in the cohomology basis of the target
    #[serde(serialize_with = "crate::report::ser_vector")]
    pub class: Vec<Q>,
}

#[derive(Clone, Debug)]
pub enum Decision {
    Homotopic(Homotopy),
    NotHomotopic(Obstruction),
    Inconclusive(String),
}

impl Decision {
    pub fn label(&self) -> &'static str {
        match self {
            Decision::Homotopic(_) => "homotopic",
            Decision::NotHomotopic(_) => "not-homotopic",
            Decision::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Row {
    D(u32, bool, Monomial),
    Start(Monomial),
    End(Monomial),
}

/// Looks for a homotopy from f to g generator by generator, each step a
/// linear solve over cylinder elements of bounded t-degree. The t-degree
/// starts just above what H(dv) needs and doubles up to `t_cap`.
pub fn decide_homotopic(f: &ModelMap, g: &ModelMap, t_cap: u32) -> Decision {
    match decide(f, g, t_cap) {
        Ok(d) => d,
        Err(e) => Decision::Inconclusive(e.to_string()),
    }
}

fn decide(f: &ModelMap, g: &ModelMap, t_cap: u32) -> Result<Decision> {
    if *f.source() != *g.source() || *f.target() != *g.target() {
        return Err(Error::ModelMismatch(format!(
            "`{}` and `{}` do not share source and target",
            f.name(),
            g.name()
        )));
    }
    f.source().require_minimal()?;
    let src = f.source();
    let tgt = f.target();
    if f.images() == g.images() {
        return Ok(Decision::Homotopic(Homotopy::constant(f).renamed(format!(
            "h_{}_{}",
            f.name(),
            g.name()
        ))));
    }
    let mut partial = Homotopy {
        name: format!("h_{}_{}", f.name(), g.name()),
        source: src.clone(),
        target: tgt.clone(),
        images: vec![CylElem::zero(); src.algebra().len()],
    };
    for v in 0..src.algebra().len() {
        let hdv = partial.apply(src.differential_of(v));
        let fv = f.image(v);
        let gv = g.image(v);
        if fv == gv && hdv == CylElem::from_base(tgt.d(fv)) {
            partial.images[v] = CylElem::from_base(fv.clone());
            continue;
        }
        let mut cap = hdv.t_degree() + 1;
        let limit = t_cap.max(cap);
        let found = loop {
            if let Some(h) = solve_generator(tgt, src.algebra().generator(v).degree, &hdv, fv, gv, cap)? {
                break Some(h);
            }
            if cap >= limit {
                break None;
            }
            cap = (cap * 2).min(limit);
        };
        match found {
            Some(h) => partial.images[v] = h,
            None => {
                return Ok(match certify_obstruction(f, g, v)? {
                    Some(o) => Decision::NotHomotopic(o),
                    None => Decision::Inconclusive(format!(
                        "no homotopy on `{}` with t-degree up to {limit}",
                        src.algebra().generator(v).name
                    )),
                })
            }
        }
    }
    match partial.verify(f, g) {
        HomotopyCheck::Pass => Ok(Decision::Homotopic(partial)),
        other => Err(Error::Precondition(format!(
            "solved homotopy failed verification: {other:?}"
        ))),
    }
}

fn solve_generator(
    tgt: &Model,
    degree: u32,
    hdv: &CylElem,
    fv: &Polynomial,
    gv: &Polynomial,
    cap: u32,
) -> Result<Option<CylElem>> {
    let alg = tgt.algebra();
    let top = alg.basis(degree)?;
    let lower = alg.basis(degree - 1)?;
    let mut unknowns: Vec<(u32, bool, Monomial)> = Vec::new();
    for i in 0..=cap {
        unknowns.extend(top.iter().map(|m| (i, false, m.clone())));
    }
    for i in 0..cap {
        unknowns.extend(lower.iter().map(|m| (i, true, m.clone())));
    }
    let mut rows: BTreeMap<Row, usize> = BTreeMap::new();
    let mut entries: Vec<(Row, usize, Q)> = Vec::new();
    for (col, (i, a, m)) in unknowns.iter().enumerate() {
        let e = CylElem::from_part(*i, *a, alg.monomial_poly(m)).d(tgt);
        for (j, b, p) in e.parts() {
            for (mm, c) in p.terms() {
                entries.push((Row::D(j, b, mm.clone()), col, c.clone()));
            }
        }
        if !a {
            if *i == 0 {
                entries.push((Row::Start(m.clone()), col, Q::one()));
            }
            entries.push((Row::End(m.clone()), col, Q::one()));
        }
    }
    let mut rhs: Vec<(Row, Q)> = Vec::new();
    for (j, b, p) in hdv.parts() {
        for (m, c) in p.terms() {
            rhs.push((Row::D(j, b, m.clone()), c.clone()));
        }
    }
    rhs.extend(fv.terms().map(|(m, c)| (Row::Start(m.clone()), c.clone())));
    rhs.extend(gv.terms().map(|(m, c)| (Row::End(m.clone()), c.clone())));
    for r in entries.iter().map(|e| &e.0).chain(rhs.iter().map(|e| &e.0)) {
        let n = rows.len();
        rows.entry(r.clone()).or_insert(n);
    }
    let mut mat = QMatrix::zeros(rows.len(), unknowns.len());
    for (r, col, c) in entries {
        mat[(rows[&r], col)] += c;
    }
    let mut b = vec![Q::zero(); rows.len()];
    for (r, c) in rhs {
        b[rows[&r]] += c;
    }
    let Some(x) = ratlin::solve(&mat, &b)? else {
        return Ok(None);
    };
    let mut out = CylElem::zero();
    for ((i, a, m), c) in unknowns.into_iter().zip(x) {
        if !c.is_zero() {
            out.add_part(i, a, &Polynomial::term(c, m));
        }
    }
    Ok(Some(out))
}

/// Looks for a homotopy-invariant reason f ≄ g in degrees up to that of
/// the generator `stuck`.
fn certify_obstruction(f: &ModelMap, g: &ModelMap, stuck: usize) -> Result<Option<Obstruction>> {
    let src = f.source();
    let tgt = f.target();
    let top = src.algebra().generator(stuck).degree;
    let scoh = Cohomology::new(src);
    let tcoh = Cohomology::new(tgt);
    for n in 2..=top {
        if src.require_complete(n).is_err() || tgt.require_complete(n).is_err() {
            break;
        }
        let hf = f.induced_h_with(n, &scoh, &tcoh)?;
        let hg = g.induced_h_with(n, &scoh, &tcoh)?;
        if hf == hg {
            continue;
        }
        let reps = scoh.betti(n)?.representatives;
        for (j, r) in reps.iter().enumerate() {
            let cf = hf.column(j);
            let cg = hg.column(j);
            if cf != cg {
                let diff = &g.substitute(r) - &f.substitute(r);
                return Ok(Some(Obstruction {
                    kind: ObstructionKind::Cohomology,
                    degree: n,
                    generator: None,
                    representative: tgt.format(&diff),
                    class: cg.iter().zip(&cf).map(|(a, b)| a - b).collect(),
                }));
            }
        }
    }
    // first generator where f and g differ, everything below sent to zero
    let first = (0..src.algebra().len()).find(|&v| f.image(v) != g.image(v));
    let Some(v) = first else {
        return Ok(None);
    };
    let deg = src.algebra().generator(v).degree;
    let lower_zero = (0..src.algebra().len())
        .filter(|&w| src.algebra().generator(w).degree < deg)
        .all(|w| f.image(w).is_zero() && g.image(w).is_zero());
    if !lower_zero {
        return Ok(None);
    }
    let diff = g.image(v) - f.image(v);
    if !tgt.d(&diff).is_zero() || tgt.require_complete(deg).is_err() {
        return Ok(None);
    }
    let class = tcoh.class_of(deg, &diff)?;
    if class.iter().all(Zero::is_zero) {
        return Ok(None);
    }
    Ok(Some(Obstruction {
        kind: ObstructionKind::Generator,
        degree: deg,
        generator: Some(src.algebra().generator(v).name.clone()),
        representative: tgt.format(&diff),
        class,
    }))
}
