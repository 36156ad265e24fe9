//! Brute-force oracles. Each one re-derives a quantity straight from its
//! definition over the raw tables, sharing no code with the library's
//! checkers beyond table accessors.

#![allow(dead_code)]

use std::collections::BTreeSet;

use grpd_core::group::FiniteGroup;
use grpd_core::groupoid::{FiniteGroupoid, MorId, ObjId};
use grpd_core::twisted::InvolutiveGroupData;
use grpd_core::GroupoidMap;

fn all_morphisms(g: &FiniteGroupoid) -> impl Iterator<Item = MorId> + '_ {
    (0..g.mor_count()).map(MorId)
}

fn all_objects(g: &FiniteGroupoid) -> impl Iterator<Item = ObjId> + '_ {
    (0..g.obj_count()).map(ObjId)
}

/// For all `x` and all `β: f(x) → y'` there is `α: x → x'` with `f(α) = β`.
pub fn fibration_oracle(f: &GroupoidMap) -> bool {
    let (dom, cod) = (f.dom(), f.cod());
    all_objects(dom).all(|x| {
        all_morphisms(cod)
            .filter(|&b| cod.src(b) == f.obj(x))
            .all(|b| all_morphisms(dom).any(|a| dom.src(a) == x && f.mor(a) == b))
    })
}

pub fn full_oracle(f: &GroupoidMap) -> bool {
    let (dom, cod) = (f.dom(), f.cod());
    all_objects(dom).all(|x| {
        all_objects(dom).all(|y| {
            all_morphisms(cod).filter(|&b| cod.src(b) == f.obj(x) && cod.tgt(b) == f.obj(y)).all(|b| {
                all_morphisms(dom).any(|a| dom.src(a) == x && dom.tgt(a) == y && f.mor(a) == b)
            })
        })
    })
}

pub fn faithful_oracle(f: &GroupoidMap) -> bool {
    let dom = f.dom();
    all_morphisms(dom).all(|a| {
        all_morphisms(dom).all(|b| {
            a == b || dom.src(a) != dom.src(b) || dom.tgt(a) != dom.tgt(b) || f.mor(a) != f.mor(b)
        })
    })
}

pub fn essentially_surjective_oracle(f: &GroupoidMap) -> bool {
    let (dom, cod) = (f.dom(), f.cod());
    all_objects(cod).all(|y| {
        all_objects(dom).any(|x| all_morphisms(cod).any(|b| cod.src(b) == f.obj(x) && cod.tgt(b) == y))
    })
}

pub fn weak_equivalence_oracle(f: &GroupoidMap) -> bool {
    full_oracle(f) && faithful_oracle(f) && essentially_surjective_oracle(f)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An exact nonnegative fraction, printed like `num_rational`: `n` or `n/d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction(pub u128, pub u128);

impl Fraction {
    pub fn zero() -> Self {
        Fraction(0, 1)
    }

    pub fn add_unit(self, d: u128) -> Self {
        let (n, m) = (self.0 * d + self.1, self.1 * d);
        let g = gcd(n, m).max(1);
        Fraction(n / g, m / g)
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.1 == 1 {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{}/{}", self.0, self.1)
        }
    }
}

/// Isomorphism classes by repeated search, and `Σ 1/|Aut|`.
pub fn classes_oracle(g: &FiniteGroupoid) -> (usize, Fraction) {
    let mut seen = vec![false; g.obj_count()];
    let (mut classes, mut card) = (0, Fraction::zero());
    for x in all_objects(g) {
        if seen[x.0] {
            continue;
        }
        classes += 1;
        for m in all_morphisms(g).filter(|&m| g.src(m) == x) {
            seen[g.tgt(m).0] = true;
        }
        let aut = all_morphisms(g).filter(|&m| g.src(m) == x && g.tgt(m) == x).count();
        card = card.add_unit(aut as u128);
    }
    (classes, card)
}

/// `Z¹ = {σ : σ·σ̄ = 1}` by enumeration.
pub fn z1_oracle(g: &FiniteGroup, bar: &[usize]) -> usize {
    g.elements().filter(|&s| g.mul(s, bar[s]) == g.identity()).count()
}

/// Classes of `Z¹` under `σ ↦ ḡσg⁻¹`, as sorted member lists.
pub fn h1_oracle(g: &FiniteGroup, bar: &[usize]) -> BTreeSet<Vec<usize>> {
    let z: Vec<usize> = g.elements().filter(|&s| g.mul(s, bar[s]) == g.identity()).collect();
    z.iter()
        .map(|&s| {
            let mut orbit: Vec<usize> = g.elements().map(|x| g.mul(g.mul(bar[x], s), g.inv(x))).collect();
            orbit.sort_unstable();
            orbit.dedup();
            orbit
        })
        .collect()
}

/// Fixed points of `𝔼_{B×B}G` straight from the definitions.
///
/// An object is `(g, (b₁, b₂))` with `b₁ g b₂⁻¹ = θ(g)⁻¹` whose conjugate
/// `((θb₂, θb₁), θ(g)⁻¹)` is its inverse `((b₁⁻¹, b₂⁻¹), b₁ g b₂⁻¹)`. A
/// morphism `(g, φ) → (g', φ')` is `α = (c₁, c₂)` with `c₁ g c₂⁻¹ = g'`
/// and `φ'·α = ᾱ·φ` as elements of `B×B`, where `ᾱ = (θc₂, θc₁)`.
///
/// Returns (objects, classes, cardinality).
pub fn twisted_hfp_oracle(d: &InvolutiveGroupData) -> (usize, usize, Fraction) {
    let g = d.group();
    let th = d.theta();
    let b: Vec<usize> = d.subgroup().elements().to_vec();
    let mut objects = Vec::new();
    for x in g.elements() {
        let target = g.inv(th[x]);
        for &b1 in &b {
            for &b2 in &b {
                let lands = g.mul(g.mul(b1, x), g.inv(b2)) == target;
                let involutive = th[b2] == g.inv(b1) && th[b1] == g.inv(b2);
                if lands && involutive {
                    objects.push((x, b1, b2));
                }
            }
        }
    }
    // Arrows from (x, φ) to (x', φ') exist iff some α = (c₁, c₂) satisfies
    // both equations; φ'·α = ᾱ·φ compares pairs componentwise.
    let arrows = |(x, p1, p2): (usize, usize, usize), (y, q1, q2): (usize, usize, usize)| {
        let mut n = 0usize;
        for &c1 in &b {
            for &c2 in &b {
                let moves = g.mul(g.mul(c1, x), g.inv(c2)) == y;
                let commutes = g.mul(q1, c1) == g.mul(th[c2], p1) && g.mul(q2, c2) == g.mul(th[c1], p2);
                if moves && commutes {
                    n += 1;
                }
            }
        }
        n
    };
    let mut seen = vec![false; objects.len()];
    let (mut classes, mut card) = (0, Fraction::zero());
    for i in 0..objects.len() {
        if seen[i] {
            continue;
        }
        classes += 1;
        for j in 0..objects.len() {
            if arrows(objects[i], objects[j]) > 0 {
                seen[j] = true;
            }
        }
        card = card.add_unit(arrows(objects[i], objects[i]) as u128);
    }
    (objects.len(), classes, card)
}
