//! Cyclic maps: necessary conditions, Gottlieb ranks, explicit
//! nullhomotopies, affiliated witnesses and classification.
//!
//! A model map `f: M_X → M_A` models a space map `A → X`. Throughout, `X`
//! is the source of the model map and `A` its target.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::cohomology::{self, Cohomology, Tri};
use crate::error::{Error, Result};
use crate::grading::{split_word_length, GenId, Monomial, Polynomial};
use crate::homotopy::{decide_homotopic, kill_odd, Decision, Homotopy, HomotopyCheck, DEFAULT_T_CAP};
use crate::maps::{is_zero_matrix, ModelMap};
use crate::model::{remap, Model, TensorEmbedding};
use crate::ratlin::{self, QMatrix};
use crate::Q;

/// Largest exponent tried when a power witness is searched for implicitly.
pub const DEFAULT_K_MAX: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    Inconclusive,
    SplitRequired,
}

/// Solves Σ c_i columns_i = rhs over the monomials that occur.
fn solve_in_span(columns: &[Polynomial], rhs: &Polynomial) -> Result<Option<Vec<Q>>> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in columns.iter().chain(std::iter::once(rhs)) {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let to_vec = |p: &Polynomial| {
        let mut v = vec![Q::zero(); index.len()];
        for (m, c) in p.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    let cols: Vec<Vec<Q>> = columns.iter().map(to_vec).collect();
    let m = QMatrix::from_columns(index.len(), &cols);
    Ok(ratlin::solve(&m, &to_vec(rhs))?)
}

fn combine(basis: &[Monomial], coeffs: &[Q]) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in basis.iter().zip(coeffs) {
        out.add_term(m.clone(), c.clone());
    }
    out
}

/// d(η) = x^k + R with R in the ideal of generators of degree below |x|.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerWitness {
    pub generator: String,
    pub degree: u32,
    pub exponent: u32,
    #[serde(skip)]
    pub eta: Polynomial,
    #[serde(skip)]
    pub r: Polynomial,
    #[serde(rename = "eta")]
    pub eta_text: String,
    #[serde(rename = "r")]
    pub r_text: String,
}

/// The smallest k in 2..=k_max for which x^k is a boundary modulo the
/// ideal of lower generators. `Ok(None)` means no k in range works;
/// running into the exactness bound first is a `Range` error.
pub fn power_witness(m: &Model, x: &str, k_max: u32) -> Result<Option<PowerWitness>> {
    m.require_minimal()?;
    let g = m.lookup(x)?;
    let alg = m.algebra();
    let deg = alg.generator(g).degree;
    if deg % 2 == 1 {
        return Err(Error::Precondition(format!("`{x}` has odd degree {deg}")));
    }
    let low = |mono: &Monomial| mono.factors().iter().any(|&(h, _)| alg.generator(h).degree < deg);
    let xp = Polynomial::generator(g);
    for k in 2..=k_max {
        let top = deg * k;
        if let Some(b) = m.bound() {
            if top > b {
                return Err(Error::Range(format!(
                    "no witness for `{x}` with exponent below {k}; degree {top} is beyond the bound {b}"
                )));
            }
        }
        let basis = alg.basis(top - 1)?;
        let columns: Vec<Polynomial> = basis
            .iter()
            .map(|mono| m.d_monomial(mono).filter(|t| !low(t)))
            .collect();
        let power = alg.pow(&xp, k);
        if let Some(c) = solve_in_span(&columns, &power.filter(|t| !low(t)))? {
            let eta = combine(&basis, &c);
            let r = &m.apply_d(&eta)? - &power;
            return Ok(Some(PowerWitness {
                generator: x.to_string(),
                degree: deg,
                exponent: k,
                eta_text: m.format(&eta),
                r_text: m.format(&r),
                eta,
                r,
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealEntry {
    pub generator: String,
    pub exponent: u32,
    /// the part of g(x) free of odd generators
    pub even_part: String,
    /// even part of g(x)^k + g(R); zero whenever g is a DG map
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealCertificate {
    pub map: String,
    pub verdict: Verdict,
    pub entries: Vec<IdealEntry>,
    pub reason: Option<String>,
}

/// Checks that g: M_X → M_Y, with d_Y = 0, sends every even generator into
/// the ideal generated by the odd generators of M_Y.
///
/// For an even generator x with d(η) = x^k + R, applying g gives
/// (P + Q)^k + g(R) = 0 with Q and g(R) in the odd ideal, so P^k and hence
/// the even part P vanishes. The certificate records P and the even part
/// of g(x)^k + g(R) for each x.
pub fn check_odd_ideal_image(g: &ModelMap, k_max: u32) -> Result<IdealCertificate> {
    let y = g.target();
    if !y.is_h_space() {
        return Err(Error::Precondition(format!(
            "`{}` has a nonzero differential",
            y.name()
        )));
    }
    let x = g.source();
    let mut witnesses = Vec::new();
    for (id, gen) in x.generators().iter().enumerate() {
        if gen.is_odd() {
            continue;
        }
        let reason = match power_witness(x, &gen.name, k_max) {
            Ok(Some(w)) => {
                witnesses.push((id, w));
                continue;
            }
            Ok(None) => format!("no power of `{}` up to exponent {k_max} bounds", gen.name),
            Err(Error::Range(r)) => r,
            Err(e) => return Err(e),
        };
        return Ok(IdealCertificate {
            map: g.name().to_string(),
            verdict: Verdict::NotApplicable,
            entries: Vec::new(),
            reason: Some(reason),
        });
    }
    let yalg = y.algebra();
    let even_part = |p: &Polynomial| p.filter(|m| m.factors().iter().all(|&(h, _)| !yalg.is_odd(h)));
    let mut verdict = Verdict::Pass;
    let mut reason = None;
    let mut entries = Vec::new();
    for (id, w) in witnesses {
        let img = g.image(id);
        let p = even_part(img);
        let lhs = &yalg.pow(img, w.exponent) + &g.substitute(&w.r);
        let residual = even_part(&lhs);
        if !p.is_zero() && verdict == Verdict::Pass {
            verdict = Verdict::Fail;
            reason = Some(format!("`{}` has even part {}", w.generator, y.format(&p)));
        }
        entries.push(IdealEntry {
            generator: w.generator,
            exponent: w.exponent,
            even_part: y.format(&p),
            residual: y.format(&residual),
        });
    }
    Ok(IdealCertificate {
        map: g.name().to_string(),
        verdict,
        entries,
        reason,
    })
}

/// The degree through which the cohomology of `m` is inspected: the
/// certified top degree, the exactness bound or the default window.
pub fn cohomology_window(m: &Model) -> Result<u32> {
    let top = Cohomology::new(m).certified_top()?;
    Ok(match (top, m.bound()) {
        (Some(t), Some(b)) => t.min(b),
        (Some(t), None) => t,
        (None, Some(b)) => b,
        (None, None) => cohomology::default_window(m),
    })
}

/// A chain of verified homotopies, each ending where the next starts.
#[derive(Clone, Debug)]
pub struct NullhomotopyChain {
    pub steps: Vec<Homotopy>,
}

impl NullhomotopyChain {
    pub fn start(&self) -> ModelMap {
        self.steps[0].endpoints().0
    }

    pub fn end(&self) -> ModelMap {
        self.steps[self.steps.len() - 1].endpoints().1
    }

    /// Every step is DG and consecutive endpoints agree.
    pub fn verify(&self) -> bool {
        self.steps.iter().all(|h| h.check_dg().passed())
            && self
                .steps
                .windows(2)
                .all(|w| w[0].endpoints().1.images() == w[1].endpoints().0.images())
    }
}

/// Given f: M_X → M_A, g: M_X → M_Y with d_Y = 0 and f̃: M_Y → M_A with
/// f ≃ f̃∘g, builds an explicit homotopy from f to the zero map when
/// H^odd(A) = 0.
pub fn nullhomotopy_pipeline(f: &ModelMap, g: &ModelMap, ft: &ModelMap) -> Result<NullhomotopyChain> {
    if f.is_zero() {
        return Ok(NullhomotopyChain {
            steps: vec![Homotopy::constant(f)],
        });
    }
    let a = f.target();
    let coh = Cohomology::new(a);
    for n in (3..=cohomology_window(a)?).step_by(2) {
        let dim = coh.dim(n)?;
        if dim > 0 {
            return Err(Error::OddCohomology { degree: n, dimension: dim });
        }
    }
    if g.source() != f.source() || ft.source() != g.target() || ft.target() != f.target() {
        return Err(Error::ModelMismatch(format!(
            "`{}` is not a factorization of `{}` through `{}`",
            ft.name(),
            f.name(),
            g.name()
        )));
    }
    let comp = ModelMap::compose(ft, g)?;
    let mut steps = Vec::new();
    if comp.images() != f.images() {
        match decide_homotopic(f, &comp, DEFAULT_T_CAP) {
            Decision::Homotopic(h) => steps.push(h),
            Decision::NotHomotopic(o) => {
                return Err(Error::Precondition(format!(
                    "`{}` is not homotopic to `{}` after `{}`: class of {} in H^{}",
                    f.name(),
                    ft.name(),
                    g.name(),
                    o.representative,
                    o.degree
                )))
            }
            Decision::Inconclusive(r) => {
                return Err(Error::Range(format!("factorization not decided: {r}")))
            }
        }
    }
    let cert = check_odd_ideal_image(g, DEFAULT_K_MAX)?;
    if cert.verdict != Verdict::Pass {
        return Err(Error::Precondition(format!(
            "`{}` does not land in the odd ideal: {}",
            g.name(),
            cert.reason.unwrap_or_default()
        )));
    }
    let phi = kill_odd(ft, &[])?;
    let step = phi.after(g)?.renamed(format!("null_{}", f.name()));
    let zero = ModelMap::zero(f.source().clone(), a.clone());
    match step.verify(&comp, &zero) {
        HomotopyCheck::Pass => steps.push(step),
        other => {
            return Err(Error::Precondition(format!(
                "composite homotopy does not verify: {other:?}"
            )))
        }
    }
    Ok(NullhomotopyChain { steps })
}

/// F: M_X → M_A ⊗ M_X modelling an extension A × X → X of (f | 1).
#[derive(Clone, Debug)]
pub struct AffiliatedWitness {
    pub map: ModelMap,
    pub a: Arc<Model>,
    pub x: Arc<Model>,
    pub embedding: TensorEmbedding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "kebab-case")]
pub enum WitnessCheck {
    Verified,
    Failed(String),
    Inconclusive(String),
}

impl WitnessCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, WitnessCheck::Verified)
    }
}

impl AffiliatedWitness {
    /// F(v) = 1⊗v + Σ terms, with the extra terms given in the tensor model
    /// by generator name of X.
    pub fn with_terms(f: &ModelMap, terms: &[(&str, Polynomial)]) -> Result<AffiliatedWitness> {
        let a = f.target().clone();
        let x = f.source().clone();
        let (prod, emb) = Model::tensor(&a, &x);
        let prod = Arc::new(prod);
        let mut images: Vec<Polynomial> = emb.right.iter().map(|&t| Polynomial::generator(t)).collect();
        for (name, p) in terms {
            let g = x.lookup(name)?;
            images[g] += p;
        }
        let map = ModelMap::new(format!("F_{}", f.name()), x.clone(), prod, images)?;
        Ok(AffiliatedWitness { map, a, x, embedding: emb })
    }

    /// F(v) = 1⊗v + f(v)⊗1 for every generator v.
    pub fn standard(f: &ModelMap) -> Result<AffiliatedWitness> {
        let (_, emb) = Model::tensor(f.target(), f.source());
        let terms: Vec<(String, Polynomial)> = f
            .source()
            .generators()
            .iter()
            .enumerate()
            .map(|(g, gen)| (gen.name.clone(), remap(f.image(g), &emb.left)))
            .collect();
        let refs: Vec<(&str, Polynomial)> = terms.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        AffiliatedWitness::with_terms(f, &refs)
    }

    pub fn product(&self) -> &Arc<Model> {
        self.map.target()
    }

    fn projection(&self, keep_a: bool) -> Result<ModelMap> {
        let prod = self.product().clone();
        let mut images = vec![Polynomial::zero(); prod.algebra().len()];
        let (ids, target) = if keep_a {
            (&self.embedding.left, self.a.clone())
        } else {
            (&self.embedding.right, self.x.clone())
        };
        for (i, &t) in ids.iter().enumerate() {
            images[t] = Polynomial::generator(i);
        }
        ModelMap::new("projection", prod, target, images)
    }

    /// F with the X-factor killed: a map M_X → M_A.
    pub fn restrict_to_a(&self) -> Result<ModelMap> {
        Ok(ModelMap::compose(&self.projection(true)?, &self.map)?.renamed("F|A"))
    }

    /// F with the A-factor killed: a map M_X → M_X.
    pub fn restrict_to_x(&self) -> Result<ModelMap> {
        Ok(ModelMap::compose(&self.projection(false)?, &self.map)?.renamed("F|X"))
    }

    pub fn format(&self) -> Vec<(String, String)> {
        self.x
            .generators()
            .iter()
            .enumerate()
            .map(|(g, gen)| (gen.name.clone(), self.product().format(self.map.image(g))))
            .collect()
    }
}

fn agree_up_to_homotopy(f: &ModelMap, g: &ModelMap, what: &str) -> WitnessCheck {
    if f.images() == g.images() {
        return WitnessCheck::Verified;
    }
    match decide_homotopic(f, g, DEFAULT_T_CAP) {
        Decision::Homotopic(_) => WitnessCheck::Verified,
        Decision::NotHomotopic(o) => WitnessCheck::Failed(format!(
            "{what}: differs by the class of {} in H^{}",
            o.representative, o.degree
        )),
        Decision::Inconclusive(r) => WitnessCheck::Inconclusive(format!("{what}: {r}")),
    }
}

/// F is DG, F restricted to X is homotopic to the identity and F
/// restricted to A is homotopic to f.
pub fn affiliated_verify(f: &ModelMap, w: &AffiliatedWitness) -> WitnessCheck {
    if w.x != *f.source() || w.a != *f.target() {
        return WitnessCheck::Failed("witness is for different models".into());
    }
    let dg = w.map.check_dg();
    if !dg.passed() {
        return WitnessCheck::Failed(format!("F is not DG: {dg}"));
    }
    let (rx, ra) = match (w.restrict_to_x(), w.restrict_to_a()) {
        (Ok(rx), Ok(ra)) => (rx, ra),
        (Err(e), _) | (_, Err(e)) => return WitnessCheck::Failed(e.to_string()),
    };
    let id = ModelMap::identity(w.x.clone());
    match agree_up_to_homotopy(&rx, &id, "restriction to X") {
        WitnessCheck::Verified => agree_up_to_homotopy(&ra, f, "restriction to A"),
        other => other,
    }
}

/// Pulls a witness for f back along θ: M_A → M_B, giving a witness for
/// θ∘f. Returns the new map and its witness, verified.
pub fn witness_transport(
    theta: &ModelMap,
    f: &ModelMap,
    w: &AffiliatedWitness,
) -> Result<(ModelMap, AffiliatedWitness)> {
    if *theta.source() != w.a {
        return Err(Error::ModelMismatch(format!(
            "`{}` does not start at `{}`",
            theta.name(),
            w.a.name()
        )));
    }
    let b = theta.target().clone();
    let (prod, emb) = Model::tensor(&b, &w.x);
    let prod = Arc::new(prod);
    let mut images = vec![Polynomial::zero(); w.product().algebra().len()];
    for (i, &t) in w.embedding.left.iter().enumerate() {
        images[t] = remap(theta.image(i), &emb.left);
    }
    for (j, &t) in w.embedding.right.iter().enumerate() {
        images[t] = Polynomial::generator(emb.right[j]);
    }
    let lift = ModelMap::new("theta_x_id", w.product().clone(), prod, images)?;
    let map = ModelMap::compose(&lift, &w.map)?.renamed(format!("F_{}_{}", theta.name(), f.name()));
    let g = ModelMap::compose(theta, f)?;
    let out = AffiliatedWitness {
        map,
        a: b,
        x: w.x.clone(),
        embedding: emb,
    };
    match affiliated_verify(&g, &out) {
        WitnessCheck::Verified => Ok((g, out)),
        WitnessCheck::Failed(r) => Err(Error::Precondition(format!("transported witness fails: {r}"))),
        WitnessCheck::Inconclusive(r) => Err(Error::Range(r)),
    }
}

/// A derivation of odd degree −n, given by its values on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub degree: u32,
    pub images: Vec<Polynomial>,
}

impl Derivation {
    /// θ(uv) = θ(u)v + (−1)^{n|u|} u θ(v).
    pub fn apply(&self, m: &Model, p: &Polynomial) -> Polynomial {
        let alg = m.algebra();
        let mut out = Polynomial::zero();
        for (mono, c) in p.terms() {
            let word: Vec<GenId> = mono
                .factors()
                .iter()
                .flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize))
                .collect();
            let mut prefix = Polynomial::one();
            let mut prefix_degree = 0;
            for (i, &g) in word.iter().enumerate() {
                let img = &self.images[g];
                if !img.is_zero() {
                    let mut term = alg.mul(&prefix, img);
                    for &h in &word[i + 1..] {
                        term = alg.mul(&term, &Polynomial::generator(h));
                    }
                    let mut coeff = c.clone();
                    if self.degree % 2 == 1 && prefix_degree % 2 == 1 {
                        coeff = -coeff;
                    }
                    out.add_assign_scaled(&term, &coeff);
                }
                prefix = alg.mul(&prefix, &Polynomial::generator(g));
                prefix_degree += alg.generator(g).degree;
            }
        }
        out
    }

    /// θd + dθ = 0 on every generator.
    pub fn anticommutes_with_d(&self, m: &Model) -> bool {
        (0..m.algebra().len()).all(|g| {
            let lhs = &m.d(&self.images[g]) + &self.apply(m, m.differential_of(g));
            lhs.is_zero()
        })
    }

    pub fn format(&self, m: &Model) -> Vec<(String, String)> {
        m.generators()
            .iter()
            .zip(&self.images)
            .filter(|(_, p)| !p.is_zero())
            .map(|(g, p)| (g.name.clone(), m.format(p)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GottliebMethod {
    /// linear solve over derivations
    Derivations,
    /// even degree with a cat0 bound: the rank is zero
    EvenVanishing,
    NotComputed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GottliebReport {
    pub model: String,
    pub degree: u32,
    pub method: GottliebMethod,
    /// exact rank, when the model is complete
    pub rank: Option<usize>,
    /// rank of the solve over the generators present; an upper bound when
    /// the model is truncated
    pub upper_bound: Option<usize>,
    /// exactness bound of a truncated model
    pub window: Option<u32>,
    /// basis of the functionals on V^n realised by cycles
    #[serde(serialize_with = "crate::report::ser_vectors")]
    pub functionals: Vec<Vec<Q>>,
    #[serde(skip)]
    pub witnesses: Vec<Derivation>,
    #[serde(rename = "witnesses")]
    pub witness_text: Vec<Vec<(String, String)>>,
}

pub fn gottlieb_rank(m: &Model, n: u32) -> Result<GottliebReport> {
    gottlieb_rank_with(m, n, m.cat0_bound())
}

/// The rank of G_n as the image of derivation cycles under evaluation on
/// V^n. Even degrees are only reported, as 0, when `cat0` is given.
pub fn gottlieb_rank_with(m: &Model, n: u32, cat0: Option<u32>) -> Result<GottliebReport> {
    let mut report = GottliebReport {
        model: m.name().to_string(),
        degree: n,
        method: GottliebMethod::NotComputed,
        rank: None,
        upper_bound: None,
        window: m.bound(),
        functionals: Vec::new(),
        witnesses: Vec::new(),
        witness_text: Vec::new(),
    };
    if n.is_multiple_of(2) {
        if cat0.is_some() {
            report.method = GottliebMethod::EvenVanishing;
            report.rank = Some(0);
            report.upper_bound = Some(0);
        }
        return Ok(report);
    }
    m.require_minimal()?;
    let alg = m.algebra();
    let len = alg.len();
    // unknowns: θ(v) ∈ (ΛV)^{|v|-n}
    let mut unknowns: Vec<(GenId, Monomial)> = Vec::new();
    for (v, gen) in alg.generators().iter().enumerate() {
        if gen.degree >= n {
            for mono in alg.basis(gen.degree - n)? {
                unknowns.push((v, mono));
            }
        }
    }
    let mut index: BTreeMap<(GenId, Monomial), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, Q)>> = Vec::new();
    for (v, mono) in &unknowns {
        let mut images = vec![Polynomial::zero(); len];
        images[*v] = Polynomial::term(Q::from_integer(1.into()), mono.clone());
        let theta = Derivation { degree: n, images };
        let mut col = Vec::new();
        for w in 0..len {
            let r = &m.d(&theta.images[w]) + &theta.apply(m, m.differential_of(w));
            for (t, c) in r.terms() {
                let next = index.len();
                let row = *index.entry((w, t.clone())).or_insert(next);
                col.push((row, c.clone()));
            }
        }
        columns.push(col);
    }
    let mut matrix = QMatrix::zeros(index.len(), unknowns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col {
            matrix[(*i, j)] = c.clone();
        }
    }
    let kernel = ratlin::kernel_basis(&matrix);
    let gens_n = alg.generators_of_degree(n);
    let evaluate = |k: &[Q]| -> Vec<Q> {
        gens_n
            .iter()
            .map(|&g| {
                unknowns
                    .iter()
                    .position(|(v, mono)| *v == g && mono.is_one())
                    .map_or_else(Q::zero, |j| k[j].clone())
            })
            .collect()
    };
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    for k in &kernel {
        let e = evaluate(k);
        let mut trial = chosen.clone();
        trial.push(e.clone());
        if ratlin::span_rank(gens_n.len(), &trial) > chosen.len() {
            chosen.push(e);
            let mut images = vec![Polynomial::zero(); len];
            for ((v, mono), c) in unknowns.iter().zip(k) {
                if !c.is_zero() {
                    images[*v].add_term(mono.clone(), c.clone());
                }
            }
            let theta = Derivation { degree: n, images };
            report.witness_text.push(theta.format(m));
            report.witnesses.push(theta);
        }
    }
    report.method = GottliebMethod::Derivations;
    report.upper_bound = Some(chosen.len());
    if m.is_complete() {
        report.rank = Some(chosen.len());
    }
    report.functionals = chosen;
    Ok(report)
}

/// ζ_A ∘ H^n(f): rows are the degree-n generators of A, columns the H^n(X)
/// basis. Nonzero exactly when SH_n(f) is.
pub fn spherical_map(f: &ModelMap, n: u32) -> Result<QMatrix> {
    let src = Cohomology::new(f.source());
    let tgt = Cohomology::new(f.target());
    let h = f.induced_h_with(n, &src, &tgt)?;
    let zeta = tgt.spherical_dims(n)?.zeta_matrix;
    Ok(zeta.mul(&h)?)
}

/// The generator a split along `u` would replace, if one works.
pub fn split_pivot(m: &Model, u: &Polynomial) -> Result<Option<String>> {
    if !m.apply_d(u)?.is_zero() {
        return Err(Error::NotACocycle(m.format(u)));
    }
    let lin = split_word_length(u).linear;
    for g in lin.support() {
        let free = (0..m.algebra().len())
            .filter(|&w| w != g)
            .all(|w| m.differential_of(w).terms().all(|(t, _)| !t.contains(g)));
        if free {
            return Ok(Some(m.generators()[g].name.clone()));
        }
    }
    Ok(None)
}

/// Whether a triangular change of generators makes the cocycle `u` a
/// generator that no other differential involves, so that the model is a
/// product with Λ(u). Sufficient only.
pub fn split_check(m: &Model, u: &Polynomial) -> Result<bool> {
    Ok(split_pivot(m, u)?.is_some())
}

/// Candidates for splitting in degree n: the cocycles of V^n and the
/// cohomology representatives with a linear part.
pub fn split_candidates(m: &Model, n: u32) -> Result<Vec<Polynomial>> {
    let alg = m.algebra();
    let gens = alg.generators_of_degree(n);
    let diffs: Vec<Polynomial> = gens.iter().map(|&g| m.differential_of(g).clone()).collect();
    let zero = Polynomial::zero();
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in &diffs {
        for (t, _) in p.terms() {
            let next = index.len();
            index.entry(t.clone()).or_insert(next);
        }
    }
    let mut matrix = QMatrix::zeros(index.len(), gens.len());
    for (j, p) in diffs.iter().enumerate() {
        for (t, c) in p.terms() {
            matrix[(index[t], j)] = c.clone();
        }
    }
    let mut out: Vec<Polynomial> = ratlin::kernel_basis(&matrix)
        .into_iter()
        .map(|k| {
            let mut p = zero.clone();
            for (&g, c) in gens.iter().zip(&k) {
                p.add_term(Monomial::generator(g), c.clone());
            }
            p
        })
        .collect();
    for rep in Cohomology::new(m).betti(n)?.representatives {
        if !split_word_length(&rep).linear.is_zero() {
            out.push(rep);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub statement: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Overall {
    NotCyclic { condition: String },
    CyclicPossible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub map: String,
    pub cat0: Option<u32>,
    pub conditions: Vec<Condition>,
    pub overall: Overall,
}

impl ObstructionReport {
    pub fn is_not_cyclic(&self) -> bool {
        matches!(self.overall, Overall::NotCyclic { .. })
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn violated(&self) -> Vec<&'static str> {
        self.conditions
            .iter()
            .filter(|c| c.verdict == Verdict::Fail)
            .map(|c| c.name)
            .collect()
    }
}

pub const EVEN_HOMOTOPY: &str = "even-homotopy-vanishing";
pub const RANK_CAT0: &str = "rank-at-most-cat0";
pub const RANK_SPHERICAL: &str = "rank-at-most-odd-spherical";
pub const HOMOTOPY_SPHERICAL: &str = "homotopy-image-spherical";
pub const EVEN_DECOMPOSABLE: &str = "even-cohomology-decomposable";
pub const SPHERICAL_MAP: &str = "spherical-map-zero-or-split";

fn condition(name: &'static str, statement: &'static str, verdict: Verdict, detail: impl Into<String>) -> Condition {
    Condition {
        name,
        statement,
        verdict,
        detail: detail.into(),
    }
}

fn in_span(basis: &[Vec<Q>], columns: &QMatrix) -> bool {
    (0..columns.cols()).all(|j| ratlin::member(basis, &columns.column(j)))
}

/// Every necessary condition for f to model a rationally cyclic map that
/// the inputs allow to be tested. `cat0` defaults to the bound recorded on
/// the source model.
pub fn obstruction_battery(f: &ModelMap, cat0: Option<u32>) -> Result<ObstructionReport> {
    let dg = f.check_dg();
    if !dg.passed() {
        return Err(Error::Precondition(format!("`{}` is not a DG map: {dg}", f.name())));
    }
    let x = f.source();
    let a = f.target();
    let cat0 = cat0.or_else(|| x.cat0_bound());
    let xc = Cohomology::new(x);
    let ac = Cohomology::new(a);

    let mut degrees: Vec<u32> = x.generators().iter().map(|g| g.degree).collect();
    degrees.dedup();
    let q_maps: Vec<(u32, Result<QMatrix>)> = degrees.iter().map(|&n| (n, f.induced_q(n))).collect();
    let q_missing: Vec<u32> = q_maps.iter().filter(|(_, r)| r.is_err()).map(|(n, _)| *n).collect();
    let q_rank: usize = q_maps
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().map(QMatrix::rank))
        .sum();
    let missing_note = || format!("degrees {q_missing:?} out of range");
    let mut conditions = Vec::new();

    const EVEN_STMT: &str = "a cyclic map into a space of finite rational category is zero on even rational homotopy";
    conditions.push(match cat0 {
        None => condition(EVEN_HOMOTOPY, EVEN_STMT, Verdict::NotApplicable, "no cat0 bound for the source model"),
        Some(_) => {
            let bad = q_maps.iter().find_map(|(n, r)| match r {
                Ok(m) if n % 2 == 0 && !is_zero_matrix(m) => Some((*n, m.rank())),
                _ => None,
            });
            match bad {
                Some((n, r)) => condition(EVEN_HOMOTOPY, EVEN_STMT, Verdict::Fail, format!("rank {r} in degree {n}")),
                None if q_missing.iter().any(|n| n % 2 == 0) => {
                    condition(EVEN_HOMOTOPY, EVEN_STMT, Verdict::Inconclusive, missing_note())
                }
                None => condition(EVEN_HOMOTOPY, EVEN_STMT, Verdict::Pass, "zero in every even degree"),
            }
        }
    });

    const CAT0_STMT: &str = "the rank on rational homotopy is at most cat0";
    conditions.push(match cat0 {
        None => condition(RANK_CAT0, CAT0_STMT, Verdict::NotApplicable, "no cat0 bound for the source model"),
        Some(c) if q_rank > c as usize => {
            condition(RANK_CAT0, CAT0_STMT, Verdict::Fail, format!("rank {q_rank} > cat0 {c}"))
        }
        Some(_) if !q_missing.is_empty() => condition(RANK_CAT0, CAT0_STMT, Verdict::Inconclusive, missing_note()),
        Some(c) => condition(RANK_CAT0, CAT0_STMT, Verdict::Pass, format!("rank {q_rank} <= cat0 {c}")),
    });

    const SH_STMT: &str = "the rank on rational homotopy is at most the odd spherical homology of the domain";
    conditions.push(match cat0 {
        None => condition(RANK_SPHERICAL, SH_STMT, Verdict::NotApplicable, "no cat0 bound for the source model"),
        Some(_) => {
            let max = a.algebra().max_generator_degree();
            let reach = a.bound().map_or(max, |b| b.min(max));
            let mut sh = 0;
            for n in (3..=reach).step_by(2) {
                sh += ac.spherical_dims(n)?.dim_sh;
            }
            let complete = reach == max && a.is_complete();
            if q_rank > sh && complete {
                condition(RANK_SPHERICAL, SH_STMT, Verdict::Fail, format!("rank {q_rank} > {sh}"))
            } else if q_rank <= sh && q_missing.is_empty() {
                condition(RANK_SPHERICAL, SH_STMT, Verdict::Pass, format!("rank {q_rank} <= {sh}"))
            } else {
                condition(
                    RANK_SPHERICAL,
                    SH_STMT,
                    Verdict::Inconclusive,
                    format!("rank {q_rank}, odd spherical dimension {sh} through degree {reach}"),
                )
            }
        }
    });

    const IMG_STMT: &str = "the map on indecomposables lands in the spherical cohomology of the domain";
    let mut bad = None;
    let mut unknown = false;
    for (n, r) in &q_maps {
        match (r, ac.spherical_dims(*n)) {
            (Ok(m), Ok(sh)) => {
                if !in_span(&sh.sh_subspace, m) {
                    bad = Some(*n);
                    break;
                }
            }
            _ => unknown = true,
        }
    }
    conditions.push(match bad {
        Some(n) => condition(HOMOTOPY_SPHERICAL, IMG_STMT, Verdict::Fail, format!("degree {n}")),
        None if unknown => condition(HOMOTOPY_SPHERICAL, IMG_STMT, Verdict::Inconclusive, missing_note()),
        None => condition(HOMOTOPY_SPHERICAL, IMG_STMT, Verdict::Pass, "every degree"),
    });

    let mut window = cohomology_window(x)?;
    if let Some(b) = a.bound() {
        window = window.min(b);
    }
    const DEC_STMT: &str = "even cohomology maps into products of positive-degree classes";
    conditions.push(match cat0 {
        None => condition(EVEN_DECOMPOSABLE, DEC_STMT, Verdict::NotApplicable, "no cat0 bound for the source model"),
        Some(_) => {
            let mut bad = None;
            for n in (2..=window).step_by(2) {
                let h = f.induced_h_with(n, &xc, &ac)?;
                if !in_span(&ac.h_plus_squared(n)?, &h) {
                    bad = Some(n);
                    break;
                }
            }
            match bad {
                Some(n) => condition(
                    EVEN_DECOMPOSABLE,
                    DEC_STMT,
                    Verdict::Fail,
                    format!("an H^{n} class maps outside H+.H+"),
                ),
                None => condition(EVEN_DECOMPOSABLE, DEC_STMT, Verdict::Pass, format!("degrees 2..={window}")),
            }
        }
    });

    const SPH_STMT: &str = "a nonzero map on spherical homology forces a rational K(Q,n) factor; none when the Euler characteristic is nonzero";
    let mut nonzero = Vec::new();
    for n in 2..=window {
        if !is_zero_matrix(&spherical_map(f, n)?) {
            nonzero.push(n);
        }
    }
    conditions.push(if nonzero.is_empty() {
        condition(SPHERICAL_MAP, SPH_STMT, Verdict::Pass, format!("zero in degrees 2..={window}"))
    } else {
        let euler = xc.euler_and_flags()?.euler;
        match euler {
            Some(chi) if chi != 0 => condition(
                SPHERICAL_MAP,
                SPH_STMT,
                Verdict::Fail,
                format!("nonzero in degree {} with Euler characteristic {chi}", nonzero[0]),
            ),
            _ => {
                let mut unsplit = Vec::new();
                let mut pivots = Vec::new();
                for &n in &nonzero {
                    let mut found = None;
                    for u in split_candidates(x, n)? {
                        if let Some(p) = split_pivot(x, &u)? {
                            found = Some(p);
                            break;
                        }
                    }
                    match found {
                        Some(p) => pivots.push(format!("{p} (degree {n})")),
                        None => unsplit.push(n),
                    }
                }
                if unsplit.is_empty() {
                    condition(
                        SPHERICAL_MAP,
                        SPH_STMT,
                        Verdict::Pass,
                        format!("splits along {}", pivots.join(", ")),
                    )
                } else {
                    condition(
                        SPHERICAL_MAP,
                        SPH_STMT,
                        Verdict::SplitRequired,
                        format!("nonzero in degrees {unsplit:?}; no split found"),
                    )
                }
            }
        }
    });

    let overall = match conditions.iter().find(|c| c.verdict == Verdict::Fail) {
        Some(c) => Overall::NotCyclic {
            condition: c.name.to_string(),
        },
        None => Overall::CyclicPossible,
    };
    Ok(ObstructionReport {
        map: f.name().to_string(),
        cat0,
        conditions,
        overall,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TargetClass {
    /// Λ(x, y; dy = x^{k+1}), |x| = 2n
    Truncated { n: u32, k: u32 },
    /// pure, even generators in degree 2, evenly graded finite cohomology
    DegreeTwoPure,
}

#[derive(Clone, Debug, Serialize)]
pub struct Representative {
    pub generator: String,
    pub degree: u32,
    pub class: String,
    #[serde(skip)]
    pub map: ModelMap,
    #[serde(skip)]
    pub witness: AffiliatedWitness,
    pub witness_images: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distinctness {
    pub left: String,
    pub right: String,
    pub verdict: &'static str,
    pub degree: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicClassification {
    pub source: String,
    pub target: String,
    pub class: TargetClass,
    pub dimension: usize,
    pub representatives: Vec<Representative>,
    /// pairwise comparisons, the zero map included
    pub distinctness: Vec<Distinctness>,
    pub certified: bool,
}

/// Recognises the two supported target classes.
pub fn target_class(x: &Model) -> Result<TargetClass> {
    x.require_minimal()?;
    if !x.is_complete() {
        return Err(Error::Unsupported(format!("`{}` is truncated", x.name())));
    }
    let gens = x.generators();
    if gens.len() == 2 && !gens[0].is_odd() && gens[1].is_odd() {
        let dy = x.differential_of(1);
        let terms: Vec<_> = dy.terms().collect();
        if let [(mono, _)] = terms.as_slice() {
            if let [(0, e)] = mono.factors() {
                let two_n = gens[0].degree;
                if *e >= 2 && gens[1].degree == two_n * e - 1 {
                    return Ok(TargetClass::Truncated { n: two_n / 2, k: e - 1 });
                }
            }
        }
    }
    let evens_two = gens.iter().all(|g| g.is_odd() || g.degree == 2);
    if x.is_pure() && evens_two && cohomology::pure_finite(x)? == Tri::Yes {
        let inv = Cohomology::new(x).euler_and_flags()?;
        if inv.odd_vanishes == Tri::Yes {
            return Ok(TargetClass::DegreeTwoPure);
        }
    }
    Err(Error::Unsupported(format!(
        "`{}` is neither a truncated polynomial model nor pure on degree-two generators with evenly graded finite cohomology",
        x.name()
    )))
}

/// The set of cyclic maps A → X, for the two supported classes of X: one
/// representative per basis class of H^{|y|}(A) for each odd generator y,
/// each with a verified witness and certified distinct from the others.
pub fn classify_cyclic(a: &Arc<Model>, x: &Arc<Model>) -> Result<CyclicClassification> {
    let class = target_class(x)?;
    a.require_minimal()?;
    let coh = Cohomology::new(a);
    let mut reps = Vec::new();
    for (y, gen) in x.generators().iter().enumerate() {
        if !gen.is_odd() {
            continue;
        }
        a.require_complete(gen.degree)?;
        let basis = coh.betti(gen.degree)?;
        for (i, b) in basis.representatives.into_iter().enumerate() {
            let mut images = vec![Polynomial::zero(); x.algebra().len()];
            images[y] = b.clone();
            let name = format!("cyclic_{}_{}", gen.name, i + 1);
            let map = ModelMap::new(name, x.clone(), a.clone(), images)?;
            let witness = AffiliatedWitness::standard(&map)?;
            match affiliated_verify(&map, &witness) {
                WitnessCheck::Verified => {}
                WitnessCheck::Failed(r) => {
                    return Err(Error::Precondition(format!("witness for `{}` fails: {r}", map.name())))
                }
                WitnessCheck::Inconclusive(r) => return Err(Error::Range(r)),
            }
            reps.push(Representative {
                generator: gen.name.clone(),
                degree: gen.degree,
                class: a.format(&b),
                witness_images: witness.format(),
                map,
                witness,
            });
        }
    }
    let zero = ModelMap::zero(x.clone(), a.clone());
    let mut maps: Vec<&ModelMap> = vec![&zero];
    maps.extend(reps.iter().map(|r| &r.map));
    let mut distinctness = Vec::new();
    let mut certified = true;
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            let d = decide_homotopic(maps[i], maps[j], DEFAULT_T_CAP);
            let degree = match &d {
                Decision::NotHomotopic(o) => Some(o.degree),
                Decision::Homotopic(_) => {
                    return Err(Error::Precondition(format!(
                        "`{}` and `{}` are homotopic",
                        maps[i].name(),
                        maps[j].name()
                    )))
                }
                Decision::Inconclusive(_) => {
                    certified = false;
                    None
                }
            };
            distinctness.push(Distinctness {
                left: maps[i].name().to_string(),
                right: maps[j].name().to_string(),
                verdict: d.label(),
                degree,
            });
        }
    }
    Ok(CyclicClassification {
        source: a.name().to_string(),
        target: x.name().to_string(),
        class,
        dimension: reps.len(),
        representatives: reps,
        distinctness,
        certified,
    })
}
