//! Fixture models and maps, each with a manifest of expected invariants.
//!
//! Manifest values are written down by hand (closed forms, products, the
//! cell structure of the space) and [`selftest`] recomputes every one of
//! them.

use std::sync::Arc;

use serde::Serialize;

use crate::cohomology::{self, Cohomology};
use crate::error::{Error, Result};
use crate::grading::{Generator, Polynomial};
use crate::maps::ModelMap;
use crate::model::Model;
use crate::text::Workspace;

pub fn try_sphere(n: u32) -> Result<Model> {
    if n < 2 {
        return Err(Error::Precondition(format!("no sphere model for n = {n}")));
    }
    let name = format!("S{n}");
    let m = if n % 2 == 1 {
        Model::builder(&name).gen("e", n)
    } else {
        Model::builder(&name).gen("x", n).gen("y", 2 * n - 1).d("y", "x^2")
    };
    m.cat0(1).top(n).build()
}

/// Λ(e) for odd n, Λ(x, y; dy = x²) for even n.
///
/// # Panics
/// When n < 2.
pub fn sphere(n: u32) -> Model {
    try_sphere(n).expect("sphere dimension at least 2")
}

pub fn try_truncated(n: u32, k: u32) -> Result<Model> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition(format!(
            "truncated algebra needs n, k >= 1 (got n = {n}, k = {k})"
        )));
    }
    let name = match n {
        1 => format!("CP{k}"),
        2 => format!("HP{k}"),
        _ => format!("T{n}_{k}"),
    };
    Model::builder(&name)
        .gen("x", 2 * n)
        .gen("y", 2 * n * (k + 1) - 1)
        .d("y", &format!("x^{}", k + 1))
        .cat0(k)
        .top(2 * n * k)
        .build()
}

/// Λ(x, y; dy = x^{k+1}) with |x| = 2n: cohomology ℚ[x]/(x^{k+1}).
///
/// # Panics
/// When n or k is zero.
pub fn truncated(n: u32, k: u32) -> Model {
    try_truncated(n, k).expect("n, k >= 1")
}

pub fn try_kq(n: u32) -> Result<Model> {
    if n < 2 {
        return Err(Error::Precondition(format!("no K(Q, {n}) model")));
    }
    let b = Model::builder(&format!("K{n}")).gen("u", n);
    if n % 2 == 1 {
        b.cat0(1).top(n).build()
    } else {
        b.build()
    }
}

/// K(ℚ, n): ℚ[u] for even n, Λ(u) for odd n.
///
/// # Panics
/// When n < 2.
pub fn kq(n: u32) -> Model {
    try_kq(n).expect("n >= 2")
}

/// The flag manifold SU(3)/T.
pub fn su3_t() -> Model {
    Model::builder("SU3_T")
        .gen("x1", 2)
        .gen("x2", 2)
        .gen("y3", 3)
        .gen("y5", 5)
        .d("y3", "x1^2 + x1*x2 + x2^2")
        .d("y5", "x1^2*x2 + x1*x2^2")
        .cat0(3)
        .top(6)
        .build()
        .expect("valid model")
}

/// The product model, named `AxB`.
pub fn product(a: &Model, b: &Model) -> Model {
    Model::tensor(a, b).0
}

pub fn s3xs4() -> Model {
    product(&sphere(3), &sphere(4))
}

pub fn s2xs2() -> Model {
    Model::builder("S2xS2")
        .gen("u1", 2)
        .gen("u2", 2)
        .gen("v1", 3)
        .gen("v2", 3)
        .d("v1", "u1^2")
        .d("v2", "u2^2")
        .cat0(2)
        .top(4)
        .build()
        .expect("valid model")
}

pub fn cp2() -> Model {
    truncated(1, 2)
}

/// A model of S² ∨ S² ∪ e⁵ with the five-cell attached so that H⁵ is
/// non-spherical, complete through degree 6.
///
/// Degrees 2 to 5 are written out; the degree-6 generators kill H⁷ of the
/// degree-5 stage and are computed.
pub fn a5_whitehead() -> Model {
    let stage = Model::builder("A5")
        .gen("a", 2)
        .gen("b", 2)
        .gen("p", 3)
        .gen("q", 3)
        .gen("r", 3)
        .gen("w", 4)
        .gen("z", 5)
        .d("p", "a^2")
        .d("q", "a*b")
        .d("r", "b^2")
        .d("w", "b*p - a*q")
        .d("z", "p*q + a*w")
        .top(5)
        .build()
        .expect("valid stage");
    let h7 = Cohomology::new(&stage)
        .betti(7)
        .expect("complete stage")
        .representatives;
    let extra: Vec<(Generator, Polynomial)> = h7
        .into_iter()
        .enumerate()
        .map(|(i, rep)| (Generator::new(format!("s{}", i + 1), 6), rep))
        .collect();
    stage.extended(extra, Some(6)).expect("degree-6 generators").0
}

/// The degree-5 class of [`a5_whitehead`].
pub const A5_CLASS: &str = "b*q - a*r";

fn arc(m: Model) -> Arc<Model> {
    Arc::new(m)
}

fn map(name: &str, source: Model, target: Model, images: &[(&str, &str)]) -> ModelMap {
    ModelMap::from_text(name, arc(source), arc(target), images).expect("valid fixture map")
}

/// S³ × S⁴ → S⁷ → S⁴: x ↦ 0, y ↦ e·x.
pub fn hopf_composite() -> ModelMap {
    map("hopf_composite", sphere(4), s3xs4(), &[("y", "e*x")])
}

/// The Hopf map S⁷ → S⁴: x ↦ 0, y ↦ e.
pub fn hopf_map() -> ModelMap {
    map("hopf", sphere(4), sphere(7), &[("y", "e")])
}

/// The collapse S³ × S⁴ → S⁷: e ↦ e·x.
pub fn s7_quotient() -> ModelMap {
    map("s7_quotient", sphere(7), s3xs4(), &[("e", "e*x")])
}

/// The bottom cell S² → ℂP^∞: u ↦ x.
pub fn bottom_cell() -> ModelMap {
    map("bottom_cell", kq(2), sphere(2), &[("u", "x")])
}

/// The bottom cell S² → ℂP²: x ↦ x, y ↦ x·y.
pub fn cp2_bottom_cell() -> ModelMap {
    map("cp2_bottom_cell", cp2(), sphere(2), &[("x", "x"), ("y", "x*y")])
}

/// The collapse A → S⁵: e ↦ b·q − a·r.
pub fn a5_quotient() -> ModelMap {
    map("a5_quotient", sphere(5), a5_whitehead(), &[("e", A5_CLASS)])
}

/// A map S² × S² → S⁴ factoring through S⁷, with H^odd(S² × S²) = 0:
/// returns (f, g, f̃) with f = f̃ ∘ g.
pub fn factored_through_s7() -> (ModelMap, ModelMap, ModelMap) {
    let ft = map("s7_to_s2xs2", sphere(7), s2xs2(), &[("e", "u1^2*v2 - v1*u2^2")]);
    let g = hopf_map();
    let f = ModelMap::compose(&ft, &g).expect("composable").renamed("f_s2xs2");
    (f, g, ft)
}

pub fn all_models() -> Vec<Model> {
    let mut out = vec![
        sphere(2),
        sphere(3),
        sphere(4),
        sphere(5),
        sphere(7),
        kq(2),
        kq(3),
    ];
    for n in 1..=3 {
        for k in 1..=3 {
            if (n, k) != (2, 1) {
                out.push(truncated(n, k));
            }
        }
    }
    out.extend([
        su3_t(),
        s3xs4(),
        s2xs2(),
        product(&kq(2), &sphere(4)),
        a5_whitehead(),
    ]);
    out
}

pub fn all_maps() -> Vec<ModelMap> {
    let (f, _, ft) = factored_through_s7();
    let s4 = arc(sphere(4));
    vec![
        hopf_composite(),
        hopf_map(),
        s7_quotient(),
        bottom_cell(),
        cp2_bottom_cell(),
        a5_quotient(),
        ModelMap::identity(s4),
        ft,
        f,
    ]
}

/// Every catalog model and map, in one workspace.
pub fn workspace() -> Workspace {
    let mut ws = Workspace::new();
    for m in all_models() {
        ws.add_model(m).expect("distinct model names");
    }
    for f in all_maps() {
        let f = relink(&ws, f);
        if ws.map(f.name()).is_none() {
            ws.add_map(f).expect("distinct map names");
        }
    }
    ws
}

/// Points a map at the workspace copies of its models.
fn relink(ws: &Workspace, f: ModelMap) -> ModelMap {
    let s = ws.model(f.source().name()).expect("source in catalog").clone();
    let t = ws.model(f.target().name()).expect("target in catalog").clone();
    ModelMap::new(f.name(), s, t, f.images().to_vec()).expect("same models")
}

/// Expected invariants of one fixture model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub model: String,
    /// b_0, b_1, ...
    pub betti: Vec<usize>,
    pub euler: Option<i64>,
    pub cup_length: Option<u32>,
    /// (degree, dim SH^n)
    pub spherical: Vec<(u32, usize)>,
    /// (odd degree, Gottlieb rank)
    pub gottlieb: Vec<(u32, usize)>,
}

fn poincare(degrees: &[usize], top: usize) -> Vec<usize> {
    let mut b = vec![0; top + 1];
    for &d in degrees {
        b[d] += 1;
    }
    b
}

fn manifest(
    model: &str,
    betti: Vec<usize>,
    euler: Option<i64>,
    cup_length: Option<u32>,
    spherical: &[(u32, usize)],
    gottlieb: &[(u32, usize)],
) -> Manifest {
    Manifest {
        model: model.to_string(),
        betti,
        euler,
        cup_length,
        spherical: spherical.to_vec(),
        gottlieb: gottlieb.to_vec(),
    }
}

pub fn manifests() -> Vec<Manifest> {
    let mut out = vec![
        manifest("S2", poincare(&[0, 2], 3), Some(2), Some(1), &[(2, 1), (3, 0)], &[(3, 1)]),
        manifest("S3", poincare(&[0, 3], 3), Some(0), Some(1), &[(3, 1)], &[(3, 1)]),
        manifest("S4", poincare(&[0, 4], 8), Some(2), Some(1), &[(4, 1), (7, 0)], &[(7, 1)]),
        manifest("S5", poincare(&[0, 5], 5), Some(0), Some(1), &[(5, 1)], &[(5, 1)]),
        manifest("S7", poincare(&[0, 7], 7), Some(0), Some(1), &[(7, 1)], &[(7, 1)]),
        manifest("K2", poincare(&[0, 2, 4, 6, 8, 10, 12], 12), None, None, &[(2, 1)], &[]),
        manifest("K3", poincare(&[0, 3], 3), Some(0), Some(1), &[(3, 1)], &[(3, 1)]),
        manifest(
            "SU3_T",
            vec![1, 0, 2, 0, 2, 0, 1],
            Some(6),
            Some(3),
            &[(2, 2), (3, 0), (5, 0)],
            &[(3, 1), (5, 1)],
        ),
        manifest(
            "S3xS4",
            poincare(&[0, 3, 4, 7], 7),
            Some(0),
            Some(2),
            &[(3, 1), (4, 1), (7, 0)],
            &[(3, 1), (7, 1)],
        ),
        manifest(
            "S2xS2",
            vec![1, 0, 2, 0, 1],
            Some(4),
            Some(2),
            &[(2, 2), (3, 0)],
            &[(3, 2)],
        ),
        manifest(
            "A5",
            vec![1, 0, 2, 0, 0, 1, 0],
            Some(2),
            Some(1),
            &[(2, 2), (3, 0), (4, 0), (5, 0)],
            &[],
        ),
    ];
    for n in 1..=3u32 {
        for k in 1..=3u32 {
            if (n, k) == (2, 1) {
                continue;
            }
            let m = truncated(n, k);
            let degrees: Vec<usize> = (0..=k).map(|i| (2 * n * i) as usize).collect();
            let top_gen = 2 * n * (k + 1) - 1;
            out.push(manifest(
                m.name(),
                poincare(&degrees, top_gen as usize),
                Some(i64::from(k) + 1),
                Some(k),
                &[(2 * n, 1), (top_gen, 0)],
                &[(top_gen, 1)],
            ));
        }
    }
    out
}

/// Expected sizes of cyclic-map sets: (source, target, dimension).
pub fn classification_manifest() -> Vec<(Model, Model, usize)> {
    vec![
        (s3xs4(), sphere(4), 1),
        (cp2(), sphere(4), 0),
        (sphere(3), su3_t(), 1),
        (s2xs2(), sphere(4), 0),
        (sphere(7), sphere(4), 1),
        (s3xs4(), cp2(), 0),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub fixture: String,
    pub field: String,
    pub expected: String,
    pub found: String,
}

fn check<T: PartialEq + std::fmt::Debug>(out: &mut Vec<Mismatch>, fixture: &str, field: &str, expected: T, found: T) {
    if expected != found {
        out.push(Mismatch {
            fixture: fixture.to_string(),
            field: field.to_string(),
            expected: format!("{expected:?}"),
            found: format!("{found:?}"),
        });
    }
}

/// Recomputes every manifest value; an empty result means all agree.
pub fn selftest() -> Result<Vec<Mismatch>> {
    let mut out = Vec::new();
    let models = all_models();
    for man in manifests() {
        let Some(m) = models.iter().find(|m| m.name() == man.model) else {
            return Err(Error::Precondition(format!("no catalog model `{}`", man.model)));
        };
        let c = Cohomology::new(m);
        check(&mut out, &man.model, "d^2", true, m.check_d_squared().passed());
        check(&mut out, &man.model, "minimal", true, m.check_minimal());
        let betti: Vec<usize> = (0..man.betti.len() as u32)
            .map(|n| c.dim(n))
            .collect::<Result<_>>()?;
        check(&mut out, &man.model, "betti", &man.betti, &betti);
        let inv = c.euler_and_flags()?;
        check(&mut out, &man.model, "euler", man.euler, inv.euler);
        if let Some(cl) = man.cup_length {
            let window = inv.window;
            check(&mut out, &man.model, "cup length", cl, c.cup_length(window)?);
        }
        for &(n, dim) in &man.spherical {
            check(&mut out, &man.model, &format!("SH^{n}"), dim, c.spherical_dims(n)?.dim_sh);
        }
        for &(n, rank) in &man.gottlieb {
            let r = crate::cyclic::gottlieb_rank(m, n)?;
            check(&mut out, &man.model, &format!("G_{n}"), Some(rank), r.rank);
        }
    }
    let a5 = a5_whitehead();
    let c = Cohomology::new(&a5);
    let rep = a5.parse(A5_CLASS)?;
    check(&mut out, "A5", "degree-5 class", vec![crate::q(1, 1)], c.class_of(5, &rep)?);
    for n in 2..=6 {
        check(&mut out, "A5", &format!("H+.H+ in degree {n}"), 0, c.h_plus_squared(n)?.len());
    }
    for f in all_maps() {
        check(&mut out, f.name(), "dg", true, f.check_dg().passed());
    }
    for (a, x, dim) in classification_manifest() {
        let name = format!("{} -> {}", a.name(), x.name());
        let cls = crate::cyclic::classify_cyclic(&Arc::new(a), &Arc::new(x))?;
        check(&mut out, &name, "classification dimension", dim, cls.dimension);
    }
    Ok(out)
}

pub fn invariants(m: &Model) -> Result<cohomology::InvariantReport> {
    cohomology::euler_and_flags(m)
}
