//! Test-side oracles. Nothing here uses the crate's linear algebra: Betti
//! tables come from closed forms and the Künneth formula, basis sizes from
//! generating functions.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use rand::SeedableRng;
use sullivan::cohomology::Cohomology;
use sullivan::{catalog, q, Model, ModelMap, Polynomial};

pub fn pad(mut v: Vec<usize>, len: usize) -> Vec<usize> {
    v.resize(len, 0);
    v.truncate(len);
    v
}

fn ones_at(degrees: impl IntoIterator<Item = usize>, len: usize) -> Vec<usize> {
    let mut v = vec![0; len];
    for d in degrees {
        if d < len {
            v[d] += 1;
        }
    }
    v
}

/// b_0..b_{len-1} of S^n.
pub fn sphere(n: usize, len: usize) -> Vec<usize> {
    ones_at([0, n], len)
}

/// ℚ[x]/(x^{k+1}), |x| = 2n.
pub fn truncated(n: usize, k: usize, len: usize) -> Vec<usize> {
    ones_at((0..=k).map(|i| 2 * n * i), len)
}

/// K(ℚ, n): polynomial on an even class, exterior on an odd one.
pub fn kq(n: usize, len: usize) -> Vec<usize> {
    if n.is_multiple_of(2) {
        ones_at((0..len).step_by(n), len)
    } else {
        ones_at([0, n], len)
    }
}

pub fn su3_t(len: usize) -> Vec<usize> {
    pad(vec![1, 0, 2, 0, 2, 0, 1], len)
}

/// Künneth: the Betti table of a product is the convolution.
pub fn kunneth(a: &[usize], b: &[usize]) -> Vec<usize> {
    let len = a.len().min(b.len());
    (0..len)
        .map(|n| (0..=n).map(|i| a[i] * b[n - i]).sum())
        .collect()
}

pub fn euler(b: &[usize]) -> i64 {
    b.iter()
        .enumerate()
        .map(|(n, &x)| if n % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// Coefficient of t^n in Π_even (1 - t^d)^{-1} · Π_odd (1 + t^d).
pub fn basis_count(degrees: &[u32], n: usize) -> usize {
    let mut series = vec![0usize; n + 1];
    series[0] = 1;
    for &d in degrees {
        let d = d as usize;
        if d.is_multiple_of(2) {
            for i in d..=n {
                series[i] += series[i - d];
            }
        } else {
            for i in (d..=n).rev() {
                series[i] += series[i - d];
            }
        }
    }
    series[n]
}

/// A random combination of degree-n monomials with small integer
/// coefficients, using at most `terms` of them.
pub fn random_element(m: &Model, n: u32, terms: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let basis = match m.algebra().basis(n) {
        Ok(b) => b,
        Err(_) => return Polynomial::zero(),
    };
    let mut p = Polynomial::zero();
    if basis.is_empty() {
        return p;
    }
    for _ in 0..terms {
        let mono = basis[rng.gen_range(0..basis.len())].clone();
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            p.add_term(mono, q(c, 1));
        }
    }
    p
}

/// A random boundary in degree n.
pub fn random_boundary(m: &Model, n: u32, rng: &mut ChaCha8Rng) -> Polynomial {
    if n == 0 {
        return Polynomial::zero();
    }
    let r = random_element(m, n - 1, 3, rng);
    m.apply_d(&r).expect("within bound")
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> sullivan::Q {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-5i64..=5);
    }
    q(n, rng.gen_range(1i64..=4))
}

/// Hand-picked cocycles whose classes are linearly independent, by target
/// model name and degree, together with the Betti number they span.
pub fn known_classes(model: &str, n: u32) -> Option<Vec<&'static str>> {
    let reps: &[&str] = match (model, n) {
        ("S2", 2) | ("CP2", 2) | ("S4", 4) | ("S3xS4", 4) => &["x"],
        ("CP2", 4) => &["x^2"],
        ("S3xS4", 3) => &["e"],
        ("S3xS4", 7) => &["e*x"],
        ("SU3_T", 2) => &["x1", "x2"],
        ("SU3_T", 4) => &["x1^2", "x1*x2"],
        ("SU3_T", 6) => &["x1^2*x2"],
        ("S2xS2", 2) => &["u1", "u2"],
        ("S2xS2", 4) => &["u1*u2"],
        ("A5", 2) => &["a", "b"],
        ("A5", 5) => &["b*q - a*r"],
        _ => return None,
    };
    Some(reps.to_vec())
}

/// Betti tables of the named fixtures, from the oracles above.
pub fn betti_of(model: &str, len: usize) -> Option<Vec<usize>> {
    Some(match model {
        "S2" => sphere(2, len),
        "S4" => sphere(4, len),
        "CP2" => truncated(1, 2, len),
        "S3xS4" => kunneth(&sphere(3, len), &sphere(4, len)),
        "SU3_T" => su3_t(len),
        "S2xS2" => kunneth(&sphere(2, len), &sphere(2, len)),
        "A5" => pad(vec![1, 0, 2, 0, 0, 1, 0], len.min(7)),
        _ => return None,
    })
}

/// A random DG map S4 → A: x to a degree-4 cocycle, y to a primitive of
/// its square plus a random degree-7 cocycle.
pub fn random_s4_map(seed: u64) -> ModelMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s4 = Arc::new(catalog::sphere(4));
    let targets = [catalog::s2xs2(), catalog::cp2(), catalog::su3_t(), catalog::s3xs4(), catalog::sphere(2)];
    let a = Arc::new(targets[rng.gen_range(0..targets.len())].clone());
    let coh = Cohomology::new(&a);
    let mut c4 = random_boundary(&a, 4, &mut rng);
    for rep in known_classes(a.name(), 4).unwrap_or_default() {
        c4.add_assign_scaled(&a.parse(rep).unwrap(), &q(rng.gen_range(-2i64..=2), 1));
    }
    let eta = coh
        .primitive(8, &a.mul(&c4, &c4))
        .unwrap()
        .expect("H^8 vanishes on every target");
    let mut y = &eta + &random_boundary(&a, 7, &mut rng);
    for rep in known_classes(a.name(), 7).unwrap_or_default() {
        y.add_assign_scaled(&a.parse(rep).unwrap(), &q(rng.gen_range(-2i64..=2), 1));
    }
    let f = ModelMap::from_polys(&s4, &a, &[("x", c4), ("y", y)]).unwrap();
    assert!(f.check_dg().passed());
    f.renamed(format!("random_{seed}"))
}

/// Λ(e), |e| = n, no differential.
pub fn free_sphere(n: u32) -> Arc<Model> {
    Arc::new(Model::builder(&format!("E{n}")).gen("e", n).build().unwrap())
}
