//! Named groups, involutions, groupoids and parameter-space triples used
//! by the suites, the CLI and the tests.

use std::sync::Arc;

use crate::cohomology::GroupGammaAction;
use crate::gamma::GammaAction;
use crate::group::{FiniteGroup, GroupAction};
use crate::functor::GroupoidMap;
use crate::groupoid::FiniteGroupoid;
use crate::presheaf::{FiniteSite, GroupoidPresheaf, PresheafMap};
use crate::twisted::InvolutiveGroupData;

/// Quaternion group, elements `±1, ±i, ±j, ±k` in that order.
pub fn quaternion() -> FiniteGroup {
    // Units 1, i, j, k as 0..4; unit product as (sign, unit).
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let names = ["1", "i", "j", "k"];
    let labels = (0..8).map(|e| format!("{}{}", if e % 2 == 1 { "-" } else { "" }, names[e / 2])).collect();
    let table = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (neg, u) = UNIT[a / 2][b / 2];
                    let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                    u * 2 + usize::from(sign)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(labels, table).expect("quaternion table")
}

pub fn alternating4() -> FiniteGroup {
    FiniteGroup::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4 generators")
}

/// Named small groups, ascending order.
pub fn group_catalog() -> Vec<(String, FiniteGroup)> {
    let z2 = FiniteGroup::cyclic(2);
    let v4 = FiniteGroup::direct_product(&z2, &z2);
    vec![
        ("trivial".into(), FiniteGroup::trivial()),
        ("Z2".into(), z2.clone()),
        ("Z3".into(), FiniteGroup::cyclic(3)),
        ("Z4".into(), FiniteGroup::cyclic(4)),
        ("V4".into(), v4.clone()),
        ("Z5".into(), FiniteGroup::cyclic(5)),
        ("Z6".into(), FiniteGroup::cyclic(6)),
        ("S3".into(), FiniteGroup::symmetric(3)),
        ("Z8".into(), FiniteGroup::cyclic(8)),
        ("Z2xZ4".into(), FiniteGroup::direct_product(&z2, &FiniteGroup::cyclic(4))),
        ("Z2^3".into(), FiniteGroup::direct_product(&v4, &z2)),
        ("D4".into(), FiniteGroup::dihedral(4)),
        ("Q8".into(), quaternion()),
        ("A4".into(), alternating4()),
        ("D6".into(), FiniteGroup::dihedral(6)),
    ]
}

/// Looks up catalog names plus the families `Z<n>`, `S<n>`, `D<n>` and
/// `GL2F2`.
pub fn group_by_name(name: &str) -> Option<FiniteGroup> {
    if let Some((_, g)) = group_catalog().into_iter().find(|(n, _)| n == name) {
        return Some(g);
    }
    if name == "GL2F2" {
        return Some(FiniteGroup::gl2_f2());
    }
    let (head, tail) = name.split_at(1.min(name.len()));
    let n: usize = tail.parse().ok()?;
    match head {
        "Z" if (1..=64).contains(&n) => Some(FiniteGroup::cyclic(n)),
        "S" if (1..=5).contains(&n) => Some(FiniteGroup::symmetric(n)),
        "D" if (1..=16).contains(&n) => Some(FiniteGroup::dihedral(n)),
        _ => None,
    }
}

/// `g ↦ (gᵀ)⁻¹` on `GL₂(F₂)`.
pub fn gl2_transpose_inverse(g: &FiniteGroup) -> Vec<usize> {
    g.elements()
        .map(|x| {
            let l: Vec<char> = g.label(x).chars().collect();
            let t: String = [l[0], l[3], ';', l[1], l[4]].iter().collect();
            g.inv(g.find(&t).expect("transpose is invertible"))
        })
        .collect()
}

/// `(a, b) ↦ (b, a)` on `G × G`.
pub fn factor_swap(g: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
    let n = g.order();
    let p = FiniteGroup::direct_product(g, g);
    let swap = p.elements().map(|x| (x % n) * n + x / n).collect();
    (p, swap)
}

fn with_bar(name: &str, g: FiniteGroup, bar: Vec<usize>) -> (String, GroupGammaAction) {
    (name.to_string(), GroupGammaAction::new(g, bar).expect("fixture involution"))
}

/// Groups with an involutive automorphism.
pub fn group_gamma_fixtures() -> Vec<(String, GroupGammaAction)> {
    let mut out = Vec::new();
    let triv = FiniteGroup::trivial();
    out.push(with_bar("trivial", triv.clone(), triv.identity_map()));
    let z2 = FiniteGroup::cyclic(2);
    out.push(with_bar("Z2/id", z2.clone(), z2.identity_map()));
    let z3 = FiniteGroup::cyclic(3);
    out.push(with_bar("Z3/neg", z3.clone(), z3.inversion()));
    let z4 = FiniteGroup::cyclic(4);
    out.push(with_bar("Z4/id", z4.clone(), z4.identity_map()));
    out.push(with_bar("Z4/neg", z4.clone(), z4.inversion()));
    let z6 = FiniteGroup::cyclic(6);
    out.push(with_bar("Z6/neg", z6.clone(), z6.inversion()));
    let (v4, swap) = factor_swap(&z2);
    out.push(with_bar("V4/id", v4.clone(), v4.identity_map()));
    out.push(with_bar("V4/swap", v4, swap));
    let s3 = FiniteGroup::symmetric(3);
    out.push(with_bar("S3/id", s3.clone(), s3.identity_map()));
    let t = s3.find("(1 2)").expect("transposition");
    out.push(with_bar("S3/conj(1 2)", s3.clone(), s3.conjugation(t)));
    let d4 = FiniteGroup::dihedral(4);
    out.push(with_bar("D4/id", d4.clone(), d4.identity_map()));
    out.push(with_bar("D4/conj(s)", d4.clone(), d4.conjugation(d4.find("s").expect("s"))));
    out.push(with_bar("D4/conj(r)", d4.clone(), d4.conjugation(d4.find("r").expect("r"))));
    let q8 = quaternion();
    out.push(with_bar("Q8/id", q8.clone(), q8.identity_map()));
    out.push(with_bar("Q8/conj(i)", q8.clone(), q8.conjugation(q8.find("i").expect("i"))));
    let gl = FiniteGroup::gl2_f2();
    out.push(with_bar("GL2F2/transpose-inverse", gl.clone(), gl2_transpose_inverse(&gl)));
    let (s3s3, swap) = factor_swap(&s3);
    out.push(with_bar("S3xS3/swap", s3s3, swap));
    out
}

fn triple(name: &str, g: FiniteGroup, theta: Vec<usize>, b: &[usize]) -> (String, InvolutiveGroupData) {
    (name.to_string(), InvolutiveGroupData::new(g, theta, b).expect("fixture triple"))
}

/// `(G, θ, B)` triples.
pub fn twisted_fixtures() -> Vec<(String, InvolutiveGroupData)> {
    let mut out = Vec::new();
    let triv = FiniteGroup::trivial();
    out.push(triple("trivial", triv.clone(), triv.identity_map(), &[0]));
    let z2 = FiniteGroup::cyclic(2);
    out.push(triple("Z2/id/Z2", z2.clone(), z2.identity_map(), &[0, 1]));
    out.push(triple("Z2/id/1", z2.clone(), z2.identity_map(), &[0]));
    let z4 = FiniteGroup::cyclic(4);
    out.push(triple("Z4/id/{0,2}", z4.clone(), z4.identity_map(), &[0, 2]));
    out.push(triple("Z4/neg/{0,2}", z4.clone(), z4.inversion(), &[0, 2]));
    out.push(triple("Z4/neg/Z4", z4.clone(), z4.inversion(), &[0, 1, 2, 3]));
    let s3 = FiniteGroup::symmetric(3);
    let t = s3.find("(1 2)").expect("transposition");
    out.push(triple("S3/id/<(1 2)>", s3.clone(), s3.identity_map(), &[0, t]));
    out.push(triple("S3/conj(1 2)/<(1 2)>", s3.clone(), s3.conjugation(t), &[0, t]));
    let all: Vec<usize> = s3.elements().collect();
    out.push(triple("S3/conj(1 2)/S3", s3.clone(), s3.conjugation(t), &all));
    let d4 = FiniteGroup::dihedral(4);
    let s = d4.find("s").expect("s");
    out.push(triple("D4/id/<s>", d4.clone(), d4.identity_map(), &[0, s]));
    let r = d4.find("r").expect("r");
    let rot = d4.closure(&[r]);
    out.push(triple("D4/conj(s)/<r>", d4.clone(), d4.conjugation(s), rot.elements()));
    let gl = FiniteGroup::gl2_f2();
    let upper = gl.find("11;01").expect("upper unipotent");
    out.push(triple("GL2F2/id/upper", gl.clone(), gl.identity_map(), &[0, upper]));
    out
}

/// Groupoids used for the swap comparison.
pub fn groupoid_corpus() -> Vec<(String, Arc<FiniteGroupoid>)> {
    let z2 = FiniteGroup::cyclic(2);
    let s3 = FiniteGroup::symmetric(3);
    let labels = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let bz2 = FiniteGroupoid::bg(&z2);
    let t = s3.find("(1 2)").expect("transposition");
    let cosets = GroupAction::on_cosets(&s3, &s3.closure(&[t]));
    let mut out = vec![
        ("empty".to_string(), FiniteGroupoid::empty()),
        ("point".into(), FiniteGroupoid::terminal()),
        ("discrete{a,b}".into(), FiniteGroupoid::discrete(labels(&["a", "b"]))),
        ("discrete{a,b,c}".into(), FiniteGroupoid::discrete(labels(&["a", "b", "c"]))),
        ("indiscrete{a,b,c}".into(), FiniteGroupoid::indiscrete(labels(&["a", "b", "c"]))),
        ("BZ2".into(), bz2.clone()),
        ("BZ3".into(), FiniteGroupoid::bg(&FiniteGroup::cyclic(3))),
        ("BZ4".into(), FiniteGroupoid::bg(&FiniteGroup::cyclic(4))),
        ("BS3".into(), FiniteGroupoid::bg(&s3)),
        ("BD4".into(), FiniteGroupoid::bg(&FiniteGroup::dihedral(4))),
        ("BQ8".into(), FiniteGroupoid::bg(&quaternion())),
        ("EZ2".into(), FiniteGroupoid::eg(&z2)),
        ("EZ3".into(), FiniteGroupoid::eg(&FiniteGroup::cyclic(3))),
        ("BZ2+point".into(), FiniteGroupoid::disjoint_union(&[&bz2, &FiniteGroupoid::terminal()])),
        ("BZ2xBZ2".into(), FiniteGroupoid::product(&bz2, &bz2)),
        ("S3/<(1 2)>".into(), FiniteGroupoid::action_groupoid(&cosets)),
    ];
    out.push(("BZ2+BS3".into(), FiniteGroupoid::disjoint_union(&[&bz2, &FiniteGroupoid::bg(&s3)])));
    out.into_iter().map(|(n, g)| (n, Arc::new(g))).collect()
}

/// Small groupoids, each with at most 12 morphisms.
pub fn small_groupoids() -> Vec<(String, Arc<FiniteGroupoid>)> {
    let labels = |n: usize| (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect::<Vec<_>>();
    let z2 = FiniteGroup::cyclic(2);
    let bz2 = FiniteGroupoid::bg(&z2);
    let pt = FiniteGroupoid::terminal();
    let v = vec![
        ("empty".to_string(), FiniteGroupoid::empty()),
        ("point".into(), pt.clone()),
        ("discrete2".into(), FiniteGroupoid::discrete(labels(2))),
        ("discrete3".into(), FiniteGroupoid::discrete(labels(3))),
        ("indiscrete2".into(), FiniteGroupoid::indiscrete(labels(2))),
        ("indiscrete3".into(), FiniteGroupoid::indiscrete(labels(3))),
        ("BZ2".into(), bz2.clone()),
        ("BZ3".into(), FiniteGroupoid::bg(&FiniteGroup::cyclic(3))),
        ("BZ4".into(), FiniteGroupoid::bg(&FiniteGroup::cyclic(4))),
        ("BV4".into(), FiniteGroupoid::bg(&FiniteGroup::direct_product(&z2, &z2))),
        ("BS3".into(), FiniteGroupoid::bg(&FiniteGroup::symmetric(3))),
        ("BZ2+point".into(), FiniteGroupoid::disjoint_union(&[&bz2, &pt])),
        ("BZ2+BZ2".into(), FiniteGroupoid::disjoint_union(&[&bz2, &bz2])),
        ("BZ2xindiscrete2".into(), FiniteGroupoid::product(&bz2, &FiniteGroupoid::indiscrete(labels(2)))),
        ("indiscrete2+point".into(), FiniteGroupoid::disjoint_union(&[&FiniteGroupoid::indiscrete(labels(2)), &pt])),
    ];
    v.into_iter().map(|(n, g)| (n, Arc::new(g))).collect()
}

/// A few Γ-groupoids with named actions, for the CLI and examples.
pub fn gamma_fixtures() -> Vec<(String, GammaAction)> {
    let mut out: Vec<(String, GammaAction)> = group_gamma_fixtures()
        .into_iter()
        .filter(|(_, a)| a.group().order() <= 8)
        .map(|(n, a)| (format!("B({n})"), a.bg_action()))
        .collect();
    for (n, g) in groupoid_corpus().into_iter().filter(|(_, g)| g.mor_count() <= 8) {
        out.push((format!("swap({n})"), GammaAction::swap(&g)));
    }
    out
}

/// Discrete two-point space with `X(top) = ∗ ⊔ ∗` and every other section
/// `∗`, mapped to the constant point. Every stalk is `∗`, so the map is a
/// local weak equivalence; on `top` it is not essentially injective.
pub fn local_not_sectionwise() -> PresheafMap {
    let site = Arc::new(FiniteSite::discrete(vec!["a".into(), "b".into()]));
    let pt = Arc::new(FiniteGroupoid::terminal());
    let two = Arc::new(FiniteGroupoid::discrete(vec!["a".into(), "b".into()]));
    let top = site.top();
    let mut sections = vec![pt.clone(); site.open_count()];
    sections[top] = two.clone();
    let (ua, ub) = (site.find_open(0b01).expect("open"), site.find_open(0b10).expect("open"));
    let to_pt = |g: &Arc<FiniteGroupoid>| GroupoidMap::to_terminal(g.clone());
    let gens = vec![((top, ua), to_pt(&two)), ((top, ub), to_pt(&two)), ((ua, 0), to_pt(&pt)), ((ub, 0), to_pt(&pt))];
    let x = Arc::new(GroupoidPresheaf::new(site.clone(), sections, gens).expect("strict"));
    let y = Arc::new(GroupoidPresheaf::constant(site, pt));
    let comps = x.sections().iter().map(to_pt).collect();
    PresheafMap::new(x, y, comps).expect("natural")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_valid() {
        for (name, g) in group_catalog() {
            assert!(FiniteGroup::from_table(g.labels().to_vec(), g.table_rows()).is_ok(), "{name}");
        }
        assert_eq!(quaternion().elements().filter(|&x| quaternion().element_order(x) == 4).count(), 6);
        assert_eq!(alternating4().order(), 12);
        assert_eq!(group_by_name("Z7").map(|g| g.order()), Some(7));
        assert_eq!(group_by_name("GL2F2").map(|g| g.order()), Some(6));
        assert!(group_by_name("X3").is_none());
    }

    #[test]
    fn corpora_build() {
        assert!(group_gamma_fixtures().len() >= 10);
        assert!(twisted_fixtures().len() >= 10);
        assert!(groupoid_corpus().iter().all(|(_, g)| g.is_valid()));
        assert!(small_groupoids().iter().all(|(_, g)| g.is_valid() && g.mor_count() <= 12));
        assert!(!gamma_fixtures().is_empty());
    }
}
