use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;
use sullivan::catalog;
use sullivan::cohomology::{default_window, Cohomology, Tri};
use sullivan::cyclic::{
    classify_cyclic, gottlieb_rank_with, nullhomotopy_pipeline, obstruction_battery, Overall, TargetClass,
};
use sullivan::homotopy::{decide_homotopic, Decision, DEFAULT_T_CAP};
use sullivan::text::{print_homotopy, Workspace};
use sullivan::{Model, ModelMap};

use crate::load::{Loaded, EMBEDDED};
use crate::report::{Failure, Outcome, EXIT_OK, EXIT_RANGE, EXIT_VIOLATED};

type Run = Result<Outcome, Failure>;

fn model<'w>(ws: &'w Workspace, name: &str) -> Result<&'w Arc<Model>, Failure> {
    ws.model(name).ok_or_else(|| Failure::input(format!("unknown model `{name}`")))
}

fn map<'w>(ws: &'w Workspace, name: &str) -> Result<&'w ModelMap, Failure> {
    ws.map(name).ok_or_else(|| Failure::input(format!("unknown map `{name}`")))
}

/// Serialized label of a kebab-case enum.
fn label(v: impl Serialize) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "?".into(),
    }
}

fn tri(t: Tri) -> &'static str {
    match t {
        Tri::Yes => "yes",
        Tri::No => "no",
        Tri::Unknown => "unknown",
    }
}

fn images(f: &ModelMap) -> Vec<(String, String)> {
    f.source()
        .generators()
        .iter()
        .zip(f.images())
        .map(|(g, p)| (g.name.clone(), f.target().format(p)))
        .collect()
}

pub fn check(loaded: &Loaded) -> Run {
    let ws = &loaded.workspace;
    let mut out = String::new();
    let mut ok = true;
    let mut models = Vec::new();
    for m in ws.models() {
        let d2 = m.check_d_squared().passed();
        let minimal = m.check_minimal();
        ok &= d2;
        writeln!(
            out,
            "model {}: {} generators, d^2 {}, {}",
            m.name(),
            m.generators().len(),
            if d2 { "= 0" } else { "!= 0" },
            if minimal { "minimal" } else { "not minimal" }
        )
        .unwrap();
        models.push(json!({"name": m.name(), "generators": m.generators().len(), "d_squared": d2, "minimal": minimal}));
    }
    let mut maps = Vec::new();
    for f in ws.maps() {
        let dg = f.check_dg();
        ok &= dg.passed();
        writeln!(out, "map {}: {} -> {}, DG check: {dg}", f.name(), f.source().name(), f.target().name()).unwrap();
        maps.push(json!({"name": f.name(), "source": f.source().name(), "target": f.target().name(), "dg": dg}));
    }
    let mut homotopies = Vec::new();
    for h in ws.homotopies() {
        let c = h.check_dg();
        ok &= c.passed();
        writeln!(out, "homotopy {}: {}", h.name(), if c.passed() { "DG" } else { "not DG" }).unwrap();
        homotopies.push(json!({"name": h.name(), "check": c}));
    }
    for w in &loaded.warnings {
        writeln!(out, "{w}").unwrap();
    }
    write!(out, "{} models, {} maps, {} homotopies", models.len(), maps.len(), homotopies.len()).unwrap();
    let data = json!({
        "models": models,
        "maps": maps,
        "homotopies": homotopies,
        "warnings": loaded.warnings,
    });
    Ok(Outcome::new(if ok { EXIT_OK } else { EXIT_VIOLATED }, out, data))
}

pub fn cohomology(ws: &Workspace, name: &str, max_degree: Option<u32>) -> Run {
    let m = model(ws, name)?;
    let c = Cohomology::new(m);
    let max = match (max_degree, m.bound()) {
        (Some(n), _) => n,
        (None, Some(b)) => b,
        (None, None) => c.certified_top()?.unwrap_or_else(|| default_window(m)),
    };
    m.require_complete(max)?;
    let mut out = format!("H*({}) in degrees 0..={max}\n", m.name());
    let mut degrees = Vec::new();
    for n in 0..=max {
        let b = c.betti(n)?;
        let reps: Vec<String> = b.representatives.iter().map(|r| m.format(r)).collect();
        if b.dimension > 0 {
            writeln!(out, "  H^{n}: dim {}  [{}]", b.dimension, reps.join(", ")).unwrap();
        } else {
            writeln!(out, "  H^{n}: 0").unwrap();
        }
        degrees.push(json!({"degree": n, "dimension": b.dimension, "representatives": reps}));
    }
    out.pop();
    Ok(Outcome::new(EXIT_OK, out, json!({"model": m.name(), "max_degree": max, "degrees": degrees})))
}

pub fn invariants(ws: &Workspace, name: &str) -> Run {
    let m = model(ws, name)?;
    let r = Cohomology::new(m).euler_and_flags()?;
    let betti: Vec<String> = r.betti.iter().map(|b| b.to_string()).collect();
    let mut out = format!("model {}\n", r.model);
    writeln!(out, "  betti b_0..b_{}: {}", r.window, betti.join(" ")).unwrap();
    let opt = |x: Option<String>| x.unwrap_or_else(|| "unknown".into());
    writeln!(out, "  top degree: {}", opt(r.top_degree.map(|t| t.to_string()))).unwrap();
    writeln!(out, "  euler characteristic: {}", opt(r.euler.map(|e| e.to_string()))).unwrap();
    writeln!(out, "  cup length: {}", r.cup_length).unwrap();
    writeln!(out, "  finite cohomology: {}", tri(r.finite_cohomology)).unwrap();
    writeln!(out, "  positive euler characteristic: {}", tri(r.positive_euler)).unwrap();
    writeln!(out, "  odd cohomology vanishes: {}", tri(r.odd_vanishes)).unwrap();
    writeln!(out, "  F0: {}", tri(r.f0)).unwrap();
    write!(out, "  formal dimension: {}", opt(r.formal_dimension.map(|d| d.to_string()))).unwrap();
    Ok(Outcome::new(EXIT_OK, out, &r))
}

pub fn gottlieb(ws: &Workspace, name: &str, degree: u32, cat0: Option<u32>) -> Run {
    let m = model(ws, name)?;
    let r = gottlieb_rank_with(m, degree, cat0.or(m.cat0_bound()))?;
    let mut out = format!("G_{degree}({}) ", m.name());
    let code = match r.rank {
        Some(rank) => {
            write!(out, "has rank {rank} ({})", label(r.method)).unwrap();
            EXIT_OK
        }
        None => {
            match r.upper_bound {
                Some(u) => write!(out, "not determined; at most {u} within the bound").unwrap(),
                None => write!(out, "not computed; even degrees need a cat0 bound").unwrap(),
            }
            EXIT_RANGE
        }
    };
    for (i, w) in r.witness_text.iter().enumerate() {
        let body: Vec<String> = w.iter().map(|(g, v)| format!("{g} -> {v}")).collect();
        write!(out, "\n  derivation {}: {}", i + 1, body.join(", ")).unwrap();
    }
    Ok(Outcome::new(code, out, &r))
}

pub fn map_check(ws: &Workspace, name: &str) -> Run {
    let f = map(ws, name)?;
    let dg = f.check_dg();
    let cycles = f.image_in_cycles();
    let mut window = default_window(f.source());
    for b in [f.source().bound(), f.target().bound()].into_iter().flatten() {
        window = window.min(b);
    }
    let src = Cohomology::new(f.source());
    let tgt = Cohomology::new(f.target());
    let mut out = format!("map {}: {} -> {}\n  DG check: {dg}\n", f.name(), f.source().name(), f.target().name());
    writeln!(out, "  image in cocycles: {}", if cycles { "yes" } else { "no" }).unwrap();
    let mut induced = Vec::new();
    if dg.passed() {
        for n in 1..=window {
            let h = f.induced_h_with(n, &src, &tgt)?;
            if h.rows() == 0 || h.cols() == 0 {
                continue;
            }
            writeln!(out, "  H^{n}: rank {} ({}x{})", h.rank(), h.rows(), h.cols()).unwrap();
            induced.push(json!({"degree": n, "rank": h.rank(), "matrix": h}));
        }
    }
    out.pop();
    let data = json!({
        "map": f.name(),
        "source": f.source().name(),
        "target": f.target().name(),
        "dg": dg,
        "image_in_cycles": cycles,
        "images": images(f),
        "induced_cohomology": induced,
    });
    Ok(Outcome::new(if dg.passed() { EXIT_OK } else { EXIT_VIOLATED }, out, data))
}

pub fn homotopic(ws: &Workspace, f: &str, g: &str, t_cap: Option<u32>) -> Run {
    let (f, g) = (map(ws, f)?, map(ws, g)?);
    let d = decide_homotopic(f, g, t_cap.unwrap_or(DEFAULT_T_CAP));
    let head = format!("{} and {}: ", f.name(), g.name());
    Ok(match d {
        Decision::Homotopic(h) => {
            let text = print_homotopy(&h);
            let human = format!("{head}homotopic\n{}", text.trim_end());
            Outcome::new(EXIT_OK, human, json!({"verdict": "homotopic", "homotopy": text}))
        }
        Decision::NotHomotopic(ob) => {
            let human = format!(
                "{head}not homotopic\n  {} obstruction in degree {}: {}",
                label(&ob.kind),
                ob.degree,
                ob.representative
            );
            Outcome::new(EXIT_VIOLATED, human, json!({"verdict": "not-homotopic", "obstruction": ob}))
        }
        Decision::Inconclusive(why) => Outcome::new(
            EXIT_RANGE,
            format!("{head}inconclusive: {why}"),
            json!({"verdict": "inconclusive", "reason": why}),
        ),
    })
}

pub fn battery(ws: &Workspace, name: &str, cat0: Option<u32>) -> Run {
    let f = map(ws, name)?;
    let r = obstruction_battery(f, cat0)?;
    let verdict = match &r.overall {
        Overall::NotCyclic { condition } => format!("NOT-CYCLIC ({condition})"),
        Overall::CyclicPossible => "CYCLIC-POSSIBLE".to_string(),
    };
    let cat0 = r.cat0.map_or("none".to_string(), |c| c.to_string());
    let mut out = format!("battery for {} (cat0 {cat0}): {verdict}", r.map);
    for c in &r.conditions {
        write!(out, "\n  [{}] {}: {}", label(c.verdict), c.name, c.detail).unwrap();
    }
    let code = if r.is_not_cyclic() { EXIT_VIOLATED } else { EXIT_OK };
    Ok(Outcome::new(code, out, &r))
}

pub fn classify(ws: &Workspace, source: &str, target: &str) -> Run {
    let (a, x) = (model(ws, source)?, model(ws, target)?);
    let c = classify_cyclic(a, x)?;
    let class = match c.class {
        TargetClass::Truncated { n, k } => format!("truncated, |x| = {}, x^{} = 0", 2 * n, k + 1),
        TargetClass::DegreeTwoPure => "pure, generated in degree 2".to_string(),
    };
    let mut out = format!("cyclic maps {} -> {} (target {class})\ndimension {}", c.source, c.target, c.dimension);
    for (i, r) in c.representatives.iter().enumerate() {
        let body: Vec<String> = images(&r.map).iter().map(|(g, v)| format!("{g} -> {v}")).collect();
        write!(out, "\n  {}: {}  (class {} in degree {})", i + 1, body.join(", "), r.class, r.degree).unwrap();
        let w: Vec<String> = r.witness_images.iter().map(|(g, v)| format!("{g} -> {v}")).collect();
        write!(out, "\n     affiliated map: {}", w.join(", ")).unwrap();
    }
    write!(out, "\ndistinctness {}", if c.certified { "certified" } else { "not certified" }).unwrap();
    let reps: Vec<_> = c.representatives.iter().map(|r| json!({"representative": r, "images": images(&r.map)})).collect();
    let data = json!({
        "source": c.source,
        "target": c.target,
        "class": c.class,
        "dimension": c.dimension,
        "representatives": reps,
        "distinctness": c.distinctness,
        "certified": c.certified,
    });
    Ok(Outcome::new(if c.certified { EXIT_OK } else { EXIT_RANGE }, out, data))
}

pub fn nullhomotopy(ws: &Workspace, name: &str, via: &[String]) -> Run {
    let f = map(ws, name)?;
    let [g, lift] = via else {
        return Err(Failure::input("--via takes two maps: the map into the odd model and the map out of it"));
    };
    let (g, lift) = (map(ws, g)?, map(ws, lift)?);
    let chain = nullhomotopy_pipeline(f, g, lift)?;
    let ok = chain.verify() && chain.end().is_zero();
    let steps: Vec<String> = chain.steps.iter().map(print_homotopy).collect();
    let mut out = format!(
        "{} is null in {} step(s), {}",
        f.name(),
        steps.len(),
        if ok { "verified" } else { "verification failed" }
    );
    for s in &steps {
        write!(out, "\n{}", s.trim_end()).unwrap();
    }
    let data = json!({"map": f.name(), "via": via, "verified": ok, "steps": steps});
    Ok(Outcome::new(if ok { EXIT_OK } else { EXIT_VIOLATED }, out, data))
}

pub fn fixtures(selftest: bool, emit: bool) -> Run {
    if emit {
        let text = catalog::workspace().print();
        return Ok(Outcome::new(EXIT_OK, text.trim_end().to_string(), json!({"text": text})));
    }
    if !selftest {
        return Err(Failure::input("fixtures needs --selftest or --emit"));
    }
    let mut mismatches = catalog::selftest()?;
    let embedded = Workspace::parse(EMBEDDED).map_err(|e| Failure::parse("<fixtures>", &e))?;
    if embedded != catalog::workspace() {
        mismatches.push(catalog::Mismatch {
            fixture: "<fixtures>".into(),
            field: "text".into(),
            expected: "the catalog".into(),
            found: "a different workspace".into(),
        });
    }
    let models = catalog::manifests().len();
    let mut out = format!("{models} manifests recomputed, {} mismatch(es)", mismatches.len());
    for m in &mismatches {
        write!(out, "\n  {} {}: expected {}, found {}", m.fixture, m.field, m.expected, m.found).unwrap();
    }
    let code = if mismatches.is_empty() { EXIT_OK } else { EXIT_VIOLATED };
    Ok(Outcome::new(code, out, json!({"manifests": models, "mismatches": mismatches})))
}
