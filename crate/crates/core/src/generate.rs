//! Seeded random instances: Γ-groupoids, equivariant maps that are
//! fibrations or weak equivalences by construction, filtered diagrams and
//! presheaves on small finite spaces.
//!
//! Diagrams and presheaves come from a token model. A group `K` with an
//! involution acts on a set `S` with a compatible involution; each node of
//! the index carries a state (which points are alive, a normal subgroup
//! `N`, a set of merged pairs) and is realized as `𝔼_{K/N}(S_alive/≈)`.
//! States only grow along arrows, so the quotient maps compose strictly.

use std::collections::BTreeMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::GroupGammaAction;
use crate::colimit::{Diagram, FilteredDiagram, GammaDiagram, IndexCategory};
use crate::fixtures::group_catalog;
use crate::functor::GroupoidMap;
use crate::gamma::{EquivariantMap, GammaAction};
use crate::group::{FiniteGroup, GroupAction, Subgroup};
use crate::groupoid::{FiniteGroupoid, MorId, ObjId};
use crate::presheaf::{FiniteSite, GroupoidPresheaf, PresheafGammaAction, PresheafMap};
use crate::twisted::InvolutiveGroupData;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A generated value with a short description of how it was built.
#[derive(Debug, Clone)]
pub struct Sample<T> {
    pub name: String,
    pub value: T,
}

impl<T> Sample<T> {
    fn new(name: impl Into<String>, value: T) -> Self {
        Self { name: name.into(), value }
    }
}

/// Involutive automorphisms that are cheap to list: the identity,
/// inversion on abelian groups, and involutive inner automorphisms.
pub fn involutions(g: &FiniteGroup) -> Vec<(String, Vec<usize>)> {
    let mut out = vec![("id".to_string(), g.identity_map())];
    if g.is_abelian() && g.inversion() != g.identity_map() {
        out.push(("neg".into(), g.inversion()));
    }
    for t in g.elements() {
        let c = g.conjugation(t);
        if g.is_involution(&c) && !out.iter().any(|(_, m)| *m == c) {
            out.push((format!("conj({})", g.label(t)), c));
        }
    }
    out
}

fn random_group(rng: &mut SeededRng, max_order: usize) -> (String, FiniteGroup) {
    let catalog: Vec<_> = group_catalog().into_iter().filter(|(_, g)| g.order() <= max_order.max(1)).collect();
    catalog.choose(rng).expect("the trivial group always fits").clone()
}

/// A group of order at most `max_order` with an involutive automorphism.
pub fn random_group_gamma(rng: &mut SeededRng, max_order: usize) -> Sample<GroupGammaAction> {
    let (name, g) = random_group(rng, max_order);
    if g.order() * g.order() <= max_order && g.order() > 1 && rng.random_bool(0.2) {
        let (p, swap) = crate::fixtures::factor_swap(&g);
        return Sample::new(format!("{name}x{name}/swap"), GroupGammaAction::new(p, swap).expect("swap"));
    }
    let invs = involutions(&g);
    let (iname, bar) = invs.choose(rng).expect("identity is listed").clone();
    Sample::new(format!("{name}/{iname}"), GroupGammaAction::new(g, bar).expect("listed involutions are valid"))
}

/// `𝔼G` with `x̄ = θ(x)` on objects and `(h, x)‾ = (θh, θx)`.
pub fn eg_action(a: &GroupGammaAction) -> GammaAction {
    let g = a.group();
    let n = g.order();
    let carrier = Arc::new(FiniteGroupoid::eg(g));
    let bar_obj = g.elements().map(|x| ObjId(a.bar(x))).collect();
    let bar_mor = (0..n * n).map(|m| MorId(a.bar(m / n) * n + a.bar(m % n))).collect();
    GammaAction::new(carrier, bar_obj, bar_mor).expect("θ induces an action on 𝔼G")
}

fn random_involution(rng: &mut SeededRng, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut inv: Vec<usize> = (0..n).collect();
    let mut rest = order.as_slice();
    while rest.len() >= 2 {
        if rng.random_bool(0.5) {
            inv[rest[0]] = rest[1];
            inv[rest[1]] = rest[0];
            rest = &rest[2..];
        } else {
            rest = &rest[1..];
        }
    }
    inv
}

fn letters(n: usize) -> Vec<String> {
    (0..n).map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("p{i}") }).collect()
}

/// The indiscrete groupoid with `x → y` sent to `σx → σy`.
pub fn indiscrete_action(involution: &[usize]) -> GammaAction {
    let n = involution.len();
    let carrier = Arc::new(FiniteGroupoid::indiscrete(letters(n)));
    let bar_obj = involution.iter().map(|&x| ObjId(x)).collect();
    let bar_mor = (0..n * n).map(|m| MorId(involution[m / n] * n + involution[m % n])).collect();
    GammaAction::new(carrier, bar_obj, bar_mor).expect("an involution of objects acts on the indiscrete groupoid")
}

fn isqrt(n: usize) -> usize {
    (0..=n).take_while(|k| k * k <= n).last().unwrap_or(0)
}

fn gamma_candidate(rng: &mut SeededRng, budget: usize, depth: usize) -> Sample<GammaAction> {
    let kinds = if depth < 2 && budget >= 4 { 10 } else { 6 };
    match rng.random_range(0..kinds) {
        0 => {
            let s = random_group_gamma(rng, budget);
            Sample::new(format!("B({})", s.name), s.value.bg_action())
        }
        1 => {
            let s = random_group_gamma(rng, isqrt(budget));
            Sample::new(format!("E({})", s.name), eg_action(&s.value))
        }
        2 => {
            let n = rng.random_range(1..=budget.clamp(1, 6));
            let inv = random_involution(rng, n);
            Sample::new(format!("set{n}"), GammaAction::on_set(letters(n), &inv).expect("involution"))
        }
        3 => {
            let n = rng.random_range(1..=isqrt(budget).clamp(1, 5));
            let inv = random_involution(rng, n);
            Sample::new(format!("indiscrete{n}"), indiscrete_action(&inv))
        }
        4 => {
            let (name, g) = random_group(rng, budget);
            let subs = g.subgroups();
            let h = subs.choose(rng).expect("subgroups exist").clone();
            let x = Arc::new(FiniteGroupoid::action_groupoid(&GroupAction::on_cosets(&g, &h)));
            if x.mor_count() <= budget {
                Sample::new(format!("trivial({name}/H{})", h.order()), GammaAction::trivial(x))
            } else {
                Sample::new("point", GammaAction::trivial(Arc::new(FiniteGroupoid::terminal())))
            }
        }
        5 => {
            let (name, g) = random_group(rng, budget.saturating_sub(1).max(1));
            let x = FiniteGroupoid::disjoint_union(&[&FiniteGroupoid::bg(&g), &FiniteGroupoid::terminal()]);
            Sample::new(format!("trivial(B{name}+point)"), GammaAction::trivial(Arc::new(x)))
        }
        6 => {
            let inner = gamma_candidate(rng, isqrt(budget), depth + 1);
            Sample::new(format!("swap({})", inner.name), GammaAction::swap(inner.value.carrier()))
        }
        7 => {
            let a = gamma_candidate(rng, budget / 2, depth + 1);
            let b = gamma_candidate(rng, budget / 2, depth + 1);
            Sample::new(format!("({})+({})", a.name, b.name), GammaAction::disjoint_union(&[&a.value, &b.value]))
        }
        8 => {
            let left = rng.random_range(1..=isqrt(budget).max(1));
            let a = gamma_candidate(rng, left, depth + 1);
            let b = gamma_candidate(rng, budget / a.value.carrier().mor_count().max(1), depth + 1);
            Sample::new(format!("({})x({})", a.name, b.name), GammaAction::product(&a.value, &b.value))
        }
        _ => {
            let a = gamma_candidate(rng, budget / 2, depth + 1);
            Sample::new(format!("exchange({})", a.name), GammaAction::exchange_copies(&a.value))
        }
    }
}

fn random_permutation(rng: &mut SeededRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// The same action with objects and morphisms renumbered at random, and
/// the isomorphism from the old numbering.
pub fn shuffled(rng: &mut SeededRng, a: &GammaAction) -> (GammaAction, GroupoidMap) {
    let op = random_permutation(rng, a.carrier().obj_count());
    let mp = random_permutation(rng, a.carrier().mor_count());
    a.relabeled(&op, &mp)
}

/// A Γ-groupoid with at most `max_morphisms` morphisms, randomly numbered.
pub fn random_gamma_groupoid(rng: &mut SeededRng, max_morphisms: usize) -> Sample<GammaAction> {
    loop {
        let s = gamma_candidate(rng, max_morphisms, 0);
        if s.value.carrier().mor_count() <= max_morphisms {
            let (value, _) = shuffled(rng, &s.value);
            return Sample::new(s.name, value);
        }
    }
}

fn equivariant(map: GroupoidMap, dom: &GammaAction, cod: &GammaAction) -> EquivariantMap {
    EquivariantMap::new(map, dom.clone(), cod.clone()).expect("constructed to be equivariant")
}

fn point_action() -> GammaAction {
    GammaAction::trivial(Arc::new(FiniteGroupoid::terminal()))
}

/// `A → ∗`.
pub fn to_point(a: &GammaAction) -> EquivariantMap {
    let pt = point_action();
    equivariant(GroupoidMap::to_terminal(a.carrier().clone()), a, &pt)
}

/// `A × B → A` for the diagonal action.
pub fn projection_left(a: &GammaAction, b: &GammaAction) -> EquivariantMap {
    let p = GammaAction::product(a, b);
    let (bo, bm) = (b.carrier().obj_count(), b.carrier().mor_count());
    let obj = p.carrier().objects().map(|x| ObjId(x.0 / bo)).collect();
    let mor = p.carrier().morphisms().map(|m| MorId(m.0 / bm)).collect();
    equivariant(GroupoidMap::new(p.carrier().clone(), a.carrier().clone(), obj, mor).expect("in range"), &p, a)
}

/// `A → A × E`, `x ↦ (x, e)` for a fixed object `e` of `E`.
pub fn section_at(a: &GammaAction, e: &GammaAction, fixed: ObjId) -> EquivariantMap {
    let p = GammaAction::product(a, e);
    let (eo, em) = (e.carrier().obj_count(), e.carrier().mor_count());
    let id = e.carrier().identity(fixed);
    let obj = a.carrier().objects().map(|x| ObjId(x.0 * eo + fixed.0)).collect();
    let mor = a.carrier().morphisms().map(|m| MorId(m.0 * em + id.0)).collect();
    equivariant(GroupoidMap::new(a.carrier().clone(), p.carrier().clone(), obj, mor).expect("in range"), a, &p)
}

/// `∗ → E` at a fixed object.
pub fn point_at(e: &GammaAction, fixed: ObjId) -> EquivariantMap {
    let pt = point_action();
    let map = GroupoidMap::new(pt.carrier().clone(), e.carrier().clone(), vec![fixed], vec![e.carrier().identity(fixed)])
        .expect("in range");
    equivariant(map, &pt, e)
}

/// `A ⊔ A → A`, for either the componentwise or the exchanging action.
pub fn fold(a: &GammaAction, exchange: bool) -> EquivariantMap {
    let u = if exchange { GammaAction::exchange_copies(a) } else { GammaAction::disjoint_union(&[a, a]) };
    let (no, nm) = (a.carrier().obj_count(), a.carrier().mor_count());
    let obj = (0..2 * no).map(|x| ObjId(x % no)).collect();
    let mor = (0..2 * nm).map(|m| MorId(m % nm)).collect();
    equivariant(GroupoidMap::new(u.carrier().clone(), a.carrier().clone(), obj, mor).expect("in range"), &u, a)
}

/// `f ⊔ g`.
pub fn union_map(f: &EquivariantMap, g: &EquivariantMap) -> EquivariantMap {
    let dom = GammaAction::disjoint_union(&[f.dom(), g.dom()]);
    let cod = GammaAction::disjoint_union(&[f.cod(), g.cod()]);
    let (fo, fm) = (f.cod().carrier().obj_count(), f.cod().carrier().mor_count());
    let fmap = f.map();
    let gmap = g.map();
    let obj = fmap.obj_map().iter().copied().chain(gmap.obj_map().iter().map(|x| ObjId(x.0 + fo))).collect();
    let mor = fmap.mor_map().iter().copied().chain(gmap.mor_map().iter().map(|m| MorId(m.0 + fm))).collect();
    equivariant(GroupoidMap::new(dom.carrier().clone(), cod.carrier().clone(), obj, mor).expect("in range"), &dom, &cod)
}

/// `f × g`.
pub fn product_map(f: &EquivariantMap, g: &EquivariantMap) -> EquivariantMap {
    let dom = GammaAction::product(f.dom(), g.dom());
    let cod = GammaAction::product(f.cod(), g.cod());
    let (gdo, gdm) = (g.dom().carrier().obj_count(), g.dom().carrier().mor_count());
    let (gco, gcm) = (g.cod().carrier().obj_count(), g.cod().carrier().mor_count());
    let obj = dom
        .carrier()
        .objects()
        .map(|x| ObjId(f.map().obj(ObjId(x.0 / gdo)).0 * gco + g.map().obj(ObjId(x.0 % gdo)).0))
        .collect();
    let mor = dom
        .carrier()
        .morphisms()
        .map(|m| MorId(f.map().mor(MorId(m.0 / gdm)).0 * gcm + g.map().mor(MorId(m.0 % gdm)).0))
        .collect();
    equivariant(GroupoidMap::new(dom.carrier().clone(), cod.carrier().clone(), obj, mor).expect("in range"), &dom, &cod)
}

/// θ-stable normal subgroups.
fn stable_normal_subgroups(a: &GroupGammaAction) -> Vec<Subgroup> {
    let g = a.group();
    g.subgroups()
        .into_iter()
        .filter(|n| n.is_normal_in(g).is_none() && n.is_stable_under(a.bar_table()))
        .collect()
}

/// `𝔹G → 𝔹(G/N)` or `𝔼G → 𝔼(G/N)` for a θ-stable normal `N`.
pub fn group_quotient(a: &GroupGammaAction, n: &Subgroup, classifying: bool) -> EquivariantMap {
    let g = a.group();
    let (q, coset_of) = n.quotient(g);
    let rep: Vec<usize> = (0..q.order()).map(|c| coset_of.iter().position(|&d| d == c).expect("cosets")).collect();
    let qbar = (0..q.order()).map(|c| coset_of[a.bar(rep[c])]).collect();
    let qa = GroupGammaAction::new(q.clone(), qbar).expect("θ descends to G/N");
    if classifying {
        let (dom, cod) = (a.bg_action(), qa.bg_action());
        let mor = g.elements().map(|x| MorId(coset_of[x])).collect();
        let map = GroupoidMap::new(dom.carrier().clone(), cod.carrier().clone(), vec![ObjId(0)], mor).expect("in range");
        equivariant(map, &dom, &cod)
    } else {
        let (dom, cod) = (eg_action(a), eg_action(&qa));
        let (ng, nq) = (g.order(), q.order());
        let obj = g.elements().map(|x| ObjId(coset_of[x])).collect();
        let mor = (0..ng * ng).map(|m| MorId(coset_of[m / ng] * nq + coset_of[m % ng])).collect();
        let map = GroupoidMap::new(dom.carrier().clone(), cod.carrier().clone(), obj, mor).expect("in range");
        equivariant(map, &dom, &cod)
    }
}

fn relabel_iso(rng: &mut SeededRng, a: &GammaAction) -> EquivariantMap {
    let (b, iso) = shuffled(rng, a);
    equivariant(iso, a, &b)
}

fn then(f: &EquivariantMap, g: &EquivariantMap) -> EquivariantMap {
    f.then(g).expect("composable by construction")
}

/// A contractible Γ-groupoid with at least one fixed object, and that
/// object.
fn random_contractible(rng: &mut SeededRng, budget: usize) -> (String, GammaAction, ObjId) {
    if rng.random_bool(0.5) {
        let n = rng.random_range(1..=isqrt(budget).clamp(1, 4));
        let mut inv = random_involution(rng, n);
        // Split the pair through 0 so the involution has a fixed point.
        let partner = inv[0];
        inv[0] = 0;
        inv[partner] = partner;
        let fixed = inv.iter().enumerate().position(|(i, &j)| i == j).expect("fixed point");
        (format!("indiscrete{n}"), indiscrete_action(&inv), ObjId(fixed))
    } else {
        let s = random_group_gamma(rng, isqrt(budget).max(1));
        let e = s.value.group().identity();
        (format!("E({})", s.name), eg_action(&s.value), ObjId(e))
    }
}

fn small(rng: &mut SeededRng, budget: usize) -> Sample<GammaAction> {
    random_gamma_groupoid(rng, budget.max(1))
}

/// An equivariant map that is a fibration by construction.
pub fn random_fibration(rng: &mut SeededRng) -> Sample<EquivariantMap> {
    fibration_with_depth(rng, 0)
}

fn fibration_with_depth(rng: &mut SeededRng, depth: usize) -> Sample<EquivariantMap> {
    let kinds = if depth == 0 { 10 } else { 7 };
    let s = match rng.random_range(0..kinds) {
        0 => {
            let a = small(rng, 24);
            Sample::new(format!("{} -> point", a.name), to_point(&a.value))
        }
        1 => {
            let a = small(rng, 8);
            let b = small(rng, 6);
            Sample::new(format!("{} x {} -> left", a.name, b.name), projection_left(&a.value, &b.value))
        }
        2 => {
            let a = small(rng, 12);
            Sample::new(format!("fold({})", a.name), fold(&a.value, false))
        }
        3 => {
            let a = small(rng, 12);
            Sample::new(format!("fold-exchange({})", a.name), fold(&a.value, true))
        }
        4 | 5 => {
            let classifying = rng.random_bool(0.5);
            let s = random_group_gamma(rng, if classifying { 16 } else { 6 });
            let normals = stable_normal_subgroups(&s.value);
            let n = normals.choose(rng).expect("the trivial subgroup is normal").clone();
            let kind = if classifying { "B" } else { "E" };
            Sample::new(format!("{kind}({}) -> {kind}(G/N{})", s.name, n.order()), group_quotient(&s.value, &n, classifying))
        }
        6 => {
            let a = small(rng, 24);
            Sample::new(format!("relabel({})", a.name), relabel_iso(rng, &a.value))
        }
        7 => {
            let f = fibration_with_depth(rng, depth + 1);
            let g = if rng.random_bool(0.5) { to_point(f.value.cod()) } else { relabel_iso(rng, f.value.cod()) };
            Sample::new(format!("({}) ; next", f.name), then(&f.value, &g))
        }
        8 => {
            let f = fibration_with_depth(rng, depth + 1);
            let g = fibration_with_depth(rng, depth + 1);
            Sample::new(format!("({}) + ({})", f.name, g.name), union_map(&f.value, &g.value))
        }
        _ => {
            let f = fibration_with_depth(rng, depth + 1);
            let g = Sample::new("point", to_point(&small(rng, 4).value));
            Sample::new(format!("({}) x ({})", f.name, g.name), product_map(&f.value, &g.value))
        }
    };
    if s.value.dom().carrier().mor_count() > 80 || s.value.cod().carrier().mor_count() > 80 {
        return fibration_with_depth(rng, depth);
    }
    s
}

/// An equivariant map that is a weak equivalence by construction.
pub fn random_weak_equivalence(rng: &mut SeededRng) -> Sample<EquivariantMap> {
    weq_with_depth(rng, 0)
}

fn weq_with_depth(rng: &mut SeededRng, depth: usize) -> Sample<EquivariantMap> {
    let kinds = if depth == 0 { 8 } else { 5 };
    let s = match rng.random_range(0..kinds) {
        0 => {
            let a = small(rng, 8);
            let (en, e, _) = random_contractible(rng, 9);
            Sample::new(format!("{} x {en} -> left", a.name), projection_left(&a.value, &e))
        }
        1 => {
            let (en, e, fixed) = random_contractible(rng, 36);
            Sample::new(format!("point -> {en}"), point_at(&e, fixed))
        }
        2 => {
            let a = small(rng, 8);
            let (en, e, fixed) = random_contractible(rng, 9);
            Sample::new(format!("{} -> {} x {en}", a.name, a.name), section_at(&a.value, &e, fixed))
        }
        3 => {
            let a = small(rng, 24);
            Sample::new(format!("relabel({})", a.name), relabel_iso(rng, &a.value))
        }
        4 => {
            let s = random_group_gamma(rng, 6);
            let normals = stable_normal_subgroups(&s.value);
            let n = normals.choose(rng).expect("normal subgroups exist").clone();
            Sample::new(format!("E({}) -> E(G/N{})", s.name, n.order()), group_quotient(&s.value, &n, false))
        }
        5 => {
            let f = weq_with_depth(rng, depth + 1);
            let g = weq_with_depth(rng, depth + 1);
            Sample::new(format!("({}) + ({})", f.name, g.name), union_map(&f.value, &g.value))
        }
        6 => {
            let f = weq_with_depth(rng, depth + 1);
            let (en, e, fixed) = random_contractible(rng, 4);
            let g = if rng.random_bool(0.5) { section_at(f.value.cod(), &e, fixed) } else { relabel_iso(rng, f.value.cod()) };
            Sample::new(format!("({}) ; {en}", f.name), then(&f.value, &g))
        }
        _ => {
            let f = weq_with_depth(rng, depth + 1);
            let (en, e, _) = random_contractible(rng, 4);
            let g = to_point(&e);
            Sample::new(format!("({}) x ({en} -> point)", f.name), product_map(&f.value, &g))
        }
    };
    if s.value.dom().carrier().mor_count() > 80 || s.value.cod().carrier().mor_count() > 80 {
        return weq_with_depth(rng, depth);
    }
    s
}

/// An inclusion of a fixed object into a contractible Γ-groupoid; not a
/// fibration as soon as the target has a second object.
pub fn random_point_inclusion(rng: &mut SeededRng) -> Sample<EquivariantMap> {
    let (en, e, fixed) = random_contractible(rng, 25);
    Sample::new(format!("point -> {en}"), point_at(&e, fixed))
}

/// A group with involution acting on a set with a compatible involution:
/// `bar(k·s) = θ(k)·bar(s)`.
#[derive(Debug, Clone)]
pub struct TokenWorld {
    pub group: GroupGammaAction,
    pub points: GroupAction,
    pub bar: Vec<usize>,
}

impl TokenWorld {
    /// Panics if the involution is incompatible with the action.
    pub fn new(group: GroupGammaAction, points: GroupAction, bar: Vec<usize>) -> Self {
        let g = group.group();
        assert_eq!(points.group(), g, "points are acted on by the world group");
        for s in 0..points.len() {
            assert_eq!(bar[bar[s]], s, "bar is an involution");
            for k in g.elements() {
                assert_eq!(bar[points.act(k, s)], points.act(group.bar(k), bar[s]), "bar is compatible");
            }
        }
        Self { group, points, bar }
    }

    pub fn size(&self) -> usize {
        self.group.group().order() * self.points.len()
    }

    /// Orbits under `K` and the involution together.
    fn orbit_of(&self, s: usize) -> Vec<usize> {
        let mut seen = vec![false; self.points.len()];
        let mut out = Vec::new();
        for k in self.group.group().elements() {
            for t in [self.points.act(k, s), self.points.act(k, self.bar[s])] {
                if !seen[t] {
                    seen[t] = true;
                    out.push(t);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn orbits(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.points.len()];
        let mut out = Vec::new();
        for s in 0..self.points.len() {
            if !done[s] {
                let o = self.orbit_of(s);
                for &t in &o {
                    done[t] = true;
                }
                out.push(o);
            }
        }
        out
    }
}

/// Pieces `K` (regular), `K/H` and `∗`, each either alone or as a pair of
/// copies exchanged by the involution.
pub fn random_world(rng: &mut SeededRng, max_size: usize) -> Sample<TokenWorld> {
    let s = random_group_gamma(rng, 8.min(max_size / 2).max(1));
    let a = s.value;
    let g = a.group().clone();
    let ng = g.order();
    let stable: Vec<Subgroup> = g.subgroups().into_iter().filter(|h| h.is_stable_under(a.bar_table())).collect();

    // Each piece: labels, local action table act[k][s], local bar.
    let mut labels: Vec<String> = Vec::new();
    let mut act: Vec<Vec<usize>> = vec![Vec::new(); ng];
    let mut bar: Vec<usize> = Vec::new();
    let mut names = Vec::new();
    let pieces = rng.random_range(1..=3);
    for p in 0..pieces {
        let (pname, local): (String, GroupAction) = match rng.random_range(0..3) {
            0 => ("K".into(), GroupAction::left_multiplication(&g)),
            1 => {
                let h = stable.choose(rng).expect("K is stable").clone();
                (format!("K/H{}", h.order()), GroupAction::on_cosets(&g, &h))
            }
            _ => ("pt".into(), GroupAction::on_point(&g)),
        };
        let n = local.len();
        // Local involution: θ on K, θ on cosets via representatives, id on a point.
        let local_bar: Vec<usize> = (0..n)
            .map(|s| {
                let rep = (0..ng).find(|&k| local.act(k, 0) == s).expect("transitive");
                local.act(a.bar(rep), 0)
            })
            .collect();
        let pair = rng.random_bool(0.3);
        let copies = if pair { 2 } else { 1 };
        if (labels.len() + copies * n) * ng > max_size {
            continue;
        }
        names.push(if pair { format!("2{pname}") } else { pname });
        for c in 0..copies {
            let off = labels.len();
            labels.extend((0..n).map(|s| format!("{p}{}.{}", ["", "'"][c], local.carrier()[s])));
            for (k, row) in act.iter_mut().enumerate() {
                row.extend((0..n).map(|s| off + local.act(k, s)));
            }
            let partner = if pair { off + if c == 0 { n } else { 0 } - if c == 0 { 0 } else { n } } else { off };
            bar.extend((0..n).map(|s| partner + local_bar[s]));
        }
    }
    if labels.is_empty() {
        labels.push("pt".into());
        for row in act.iter_mut() {
            row.push(0);
        }
        bar.push(0);
        names.push("pt".into());
    }
    let points = GroupAction::new(g, labels, |k, s| act[k][s]).expect("pieces are actions");
    Sample::new(format!("{} on {}", s.name, names.join("+")), TokenWorld::new(a, points, bar))
}

/// Which points are alive, which subgroup is killed and which pairs are
/// merged at one node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenState {
    pub alive: Vec<bool>,
    pub normal_generators: Vec<usize>,
    pub merges: Vec<(usize, usize)>,
}

/// A realized state: `𝔼_{K/N}(S_alive/≈)` with its action and the
/// bookkeeping needed to map it onward.
#[derive(Debug, Clone)]
pub struct Realized {
    pub action: GammaAction,
    class_of: Vec<Option<usize>>,
    coset_of: Vec<usize>,
    point_rep: Vec<usize>,
    group_rep: Vec<usize>,
}

fn normal_closure(a: &GroupGammaAction, generators: &[usize]) -> Subgroup {
    let g = a.group();
    let mut gens: Vec<usize> = Vec::new();
    for &x in generators {
        for y in [x, a.bar(x)] {
            for k in g.elements() {
                gens.push(g.mul(g.mul(k, y), g.inv(k)));
            }
        }
    }
    g.closure(&gens)
}

pub fn realize(world: &TokenWorld, state: &TokenState) -> Realized {
    let a = &world.group;
    let g = a.group();
    let pts = &world.points;
    let n = g.closure(&[]);
    let n = if state.normal_generators.is_empty() { n } else { normal_closure(a, &state.normal_generators) };
    let mut uf = UnionFind::<usize>::new(pts.len());
    for s in (0..pts.len()).filter(|&s| state.alive[s]) {
        for &k in n.elements() {
            uf.union(s, pts.act(k, s));
        }
    }
    for &(s, t) in &state.merges {
        if state.alive[s] && state.alive[t] {
            for k in g.elements() {
                uf.union(pts.act(k, s), pts.act(k, t));
                uf.union(pts.act(k, world.bar[s]), pts.act(k, world.bar[t]));
            }
        }
    }
    let mut class_of = vec![None; pts.len()];
    let mut root_class = BTreeMap::new();
    let mut point_rep = Vec::new();
    for s in (0..pts.len()).filter(|&s| state.alive[s]) {
        let next = root_class.len();
        let c = *root_class.entry(uf.find(s)).or_insert_with(|| {
            point_rep.push(s);
            next
        });
        class_of[s] = Some(c);
    }
    let (q, coset_of) = n.quotient(g);
    let group_rep: Vec<usize> =
        (0..q.order()).map(|c| coset_of.iter().position(|&d| d == c).expect("cosets are nonempty")).collect();
    let labels = point_rep.iter().map(|&s| pts.carrier()[s].clone()).collect();
    let cls = |s: usize| class_of[s].expect("alive points stay alive");
    let qa = GroupAction::new(q.clone(), labels, |c, x| cls(pts.act(group_rep[c], point_rep[x])))
        .expect("the quotient group acts on the quotient set");
    let carrier = Arc::new(FiniteGroupoid::action_groupoid(&qa));
    let nq = point_rep.len();
    let bar_obj: Vec<ObjId> = (0..nq).map(|x| ObjId(cls(world.bar[point_rep[x]]))).collect();
    let bar_mor = (0..q.order() * nq)
        .map(|m| MorId(coset_of[a.bar(group_rep[m / nq.max(1)])] * nq + bar_obj[m % nq].0))
        .collect();
    let action = GammaAction::new(carrier, bar_obj, bar_mor).expect("the quotient inherits the involution");
    Realized { action, class_of, coset_of, point_rep, group_rep }
}

/// The quotient map between two realizations of growing states.
pub fn realized_map(from: &Realized, to: &Realized) -> GroupoidMap {
    let nq_from = from.point_rep.len();
    let nq_to = to.point_rep.len();
    let obj: Vec<ObjId> =
        from.point_rep.iter().map(|&s| ObjId(to.class_of[s].expect("states only grow"))).collect();
    let mor = (0..from.action.carrier().mor_count())
        .map(|m| {
            let c = to.coset_of[from.group_rep[m / nq_from]];
            MorId(c * nq_to + obj[m % nq_from].0)
        })
        .collect();
    GroupoidMap::new(from.action.carrier().clone(), to.action.carrier().clone(), obj, mor).expect("in range")
}

/// Events: births of orbits, killed subgroup generators and merged pairs.
#[derive(Debug, Clone)]
enum Event {
    Birth(Vec<usize>),
    Kill(usize),
    Merge(usize, usize),
}

fn random_events(rng: &mut SeededRng, world: &TokenWorld, count: usize) -> (Vec<usize>, Vec<Event>) {
    let orbits = world.orbits();
    let base_count = rng.random_range(1..=orbits.len());
    let mut order: Vec<usize> = (0..orbits.len()).collect();
    order.shuffle(rng);
    let base: Vec<usize> = order[..base_count].iter().flat_map(|&o| orbits[o].clone()).collect();
    let mut events: Vec<Event> = order[base_count..].iter().map(|&o| Event::Birth(orbits[o].clone())).collect();
    let np = world.points.len();
    let ng = world.group.group().order();
    for _ in 0..count {
        if ng > 1 && rng.random_bool(0.3) {
            events.push(Event::Kill(rng.random_range(1..ng)));
        } else {
            events.push(Event::Merge(rng.random_range(0..np), rng.random_range(0..np)));
        }
    }
    (base, events)
}

fn state_from(world: &TokenWorld, base: &[usize], events: &[(Event, bool)]) -> TokenState {
    let mut s = TokenState { alive: vec![false; world.points.len()], ..Default::default() };
    for &p in base {
        s.alive[p] = true;
    }
    for (e, active) in events {
        if !active {
            continue;
        }
        match e {
            Event::Birth(o) => o.iter().for_each(|&p| s.alive[p] = true),
            Event::Kill(k) => s.normal_generators.push(*k),
            Event::Merge(a, b) => s.merges.push((*a, *b)),
        }
    }
    s
}

/// Token states over a preorder: event `e` fires at every node above its
/// root, so states grow along `le`.
fn token_states(
    rng: &mut SeededRng,
    world: &TokenWorld,
    nodes: usize,
    le: impl Fn(usize, usize) -> bool,
    extra_events: usize,
) -> Vec<TokenState> {
    let (base, events) = random_events(rng, world, extra_events);
    let roots: Vec<usize> = events.iter().map(|_| rng.random_range(0..nodes)).collect();
    (0..nodes)
        .map(|j| {
            let active: Vec<(Event, bool)> =
                events.iter().zip(&roots).map(|(e, &r)| (e.clone(), le(r, j))).collect();
            state_from(world, &base, &active)
        })
        .collect()
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// A random poset on `n` nodes with a maximum.
pub fn random_poset_with_max(rng: &mut SeededRng, n: usize) -> IndexCategory {
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if j == n - 1 || rng.random_bool(0.35) {
                rel.push((i, j));
            }
        }
    }
    IndexCategory::poset(labels(n), &rel).expect("forward relations form a poset")
}

/// One object with an idempotent `e`.
pub fn idempotent_monoid() -> IndexCategory {
    IndexCategory::new(labels(1), vec![(0, 0), (0, 0)], vec![0], &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
        .expect("idempotent monoid")
}

/// `e: 0 → 0` idempotent and `u: 0 → 1` with `e;u = u`.
pub fn idempotent_then_arrow() -> IndexCategory {
    IndexCategory::new(labels(2), vec![(0, 0), (1, 1), (0, 0), (0, 1)], vec![0, 1], &[
        (0, 0, 0),
        (0, 2, 2),
        (2, 0, 2),
        (2, 2, 2),
        (0, 3, 3),
        (2, 3, 3),
        (3, 1, 3),
        (1, 1, 1),
    ])
    .expect("idempotent then arrow")
}

/// `u, v: 0 → 1` and `w: 1 → 2` with `u;w = v;w`.
pub fn parallel_pair_coequalized() -> IndexCategory {
    IndexCategory::new(labels(3), vec![(0, 0), (1, 1), (2, 2), (0, 1), (0, 1), (1, 2), (0, 2)], vec![0, 1, 2], &[
        (0, 0, 0),
        (1, 1, 1),
        (2, 2, 2),
        (0, 3, 3),
        (3, 1, 3),
        (0, 4, 4),
        (4, 1, 4),
        (1, 5, 5),
        (5, 2, 5),
        (0, 6, 6),
        (6, 2, 6),
        (3, 5, 6),
        (4, 5, 6),
    ])
    .expect("coequalized parallel pair")
}

/// `A → A ⊔ A`, into copy `k`.
fn inclusion(a: &GammaAction, u: &GammaAction, k: usize) -> GroupoidMap {
    let (no, nm) = (a.carrier().obj_count(), a.carrier().mor_count());
    GroupoidMap::new(
        a.carrier().clone(),
        u.carrier().clone(),
        (0..no).map(|x| ObjId(x + k * no)).collect(),
        (0..nm).map(|m| MorId(m + k * nm)).collect(),
    )
    .expect("in range")
}

fn build_gamma_diagram(index: IndexCategory, actions: Vec<GammaAction>, maps: Vec<GroupoidMap>) -> FilteredDiagram {
    let nodes = actions.iter().map(|a| a.carrier().clone()).collect();
    let d = Diagram::new(Arc::new(index), nodes, maps).expect("constructed functorially");
    FilteredDiagram::new(GammaDiagram::new(d, actions).expect("constructed equivariantly")).expect("filtered index")
}

/// A filtered diagram of Γ-groupoids from the token model.
pub fn random_filtered_diagram(rng: &mut SeededRng) -> Sample<FilteredDiagram> {
    let w = random_world(rng, 30);
    let world = &w.value;
    let kind = rng.random_range(0..6);
    if kind < 3 {
        let n = rng.random_range(1..=5);
        let index = random_poset_with_max(rng, n);
        let states = token_states(rng, world, n, |i, j| index.hom(i, j).next().is_some(), 3);
        let real: Vec<Realized> = states.iter().map(|s| realize(world, s)).collect();
        let maps = index.arrows().map(|a| realized_map(&real[index.src(a)], &real[index.tgt(a)])).collect();
        let actions = real.into_iter().map(|r| r.action).collect();
        return Sample::new(format!("poset{n} over {}", w.name), build_gamma_diagram(index, actions, maps));
    }
    // Two growing states A ≤ A' for the non-poset shapes.
    let states = token_states(rng, world, 2, |i, j| i <= j, 3);
    let (ra, rb) = (realize(world, &states[0]), realize(world, &states[1]));
    let q = realized_map(&ra, &rb);
    let a = ra.action.clone();
    let doubled = GammaAction::disjoint_union(&[&a, &a]);
    let folded = fold(&a, false);
    let fold_map = GroupoidMap::new(doubled.carrier().clone(), a.carrier().clone(), folded.map().obj_map().to_vec(), folded.map().mor_map().to_vec())
        .expect("in range");
    let collapse = fold_map.then(&inclusion(&a, &doubled, 0)).expect("composable");
    match kind {
        3 => {
            let id = GroupoidMap::identity(doubled.carrier().clone());
            Sample::new(format!("idempotent over {}", w.name), build_gamma_diagram(idempotent_monoid(), vec![doubled], vec![id, collapse]))
        }
        4 => {
            let u = fold_map.then(&q).expect("composable");
            let maps = vec![
                GroupoidMap::identity(doubled.carrier().clone()),
                GroupoidMap::identity(rb.action.carrier().clone()),
                collapse,
                u,
            ];
            Sample::new(
                format!("idempotent-arrow over {}", w.name),
                build_gamma_diagram(idempotent_then_arrow(), vec![doubled, rb.action], maps),
            )
        }
        _ => {
            let wmap = fold_map.then(&q).expect("composable");
            let uw = q.clone();
            let maps = vec![
                GroupoidMap::identity(a.carrier().clone()),
                GroupoidMap::identity(doubled.carrier().clone()),
                GroupoidMap::identity(rb.action.carrier().clone()),
                inclusion(&a, &doubled, 0),
                inclusion(&a, &doubled, 1),
                wmap,
                uw,
            ];
            Sample::new(
                format!("parallel-pair over {}", w.name),
                build_gamma_diagram(parallel_pair_coequalized(), vec![a, doubled, rb.action], maps),
            )
        }
    }
}

/// `X ⇉ X` by the identity and the involution, for a discrete `X` with a
/// free involution on `2m` points. Not filtered.
pub fn unfiltered_control(m: usize) -> GammaDiagram {
    let inv: Vec<usize> = (0..2 * m).map(|i| i ^ 1).collect();
    let a = GammaAction::on_set(letters(2 * m), &inv).expect("free involution");
    let x = a.carrier().clone();
    let index = IndexCategory::new(labels(2), vec![(0, 0), (1, 1), (0, 1), (0, 1)], vec![0, 1], &[
        (0, 0, 0),
        (1, 1, 1),
        (0, 2, 2),
        (0, 3, 3),
        (2, 1, 2),
        (3, 1, 3),
    ])
    .expect("parallel pair");
    let flip = GroupoidMap::new(x.clone(), x.clone(), inv.iter().map(|&j| ObjId(j)).collect(), inv.iter().map(|&j| MorId(j)).collect())
        .expect("in range");
    let maps = vec![GroupoidMap::identity(x.clone()), GroupoidMap::identity(x.clone()), GroupoidMap::identity(x.clone()), flip];
    let d = Diagram::new(Arc::new(index), vec![x.clone(), x], maps).expect("functorial");
    GammaDiagram::new(d, vec![a.clone(), a]).expect("the involution commutes with itself")
}

/// A random topology on `n` points, generated by up to four subsets.
pub fn random_site(rng: &mut SeededRng, n: usize) -> FiniteSite {
    let top = (1u64 << n) - 1;
    let mut opens = vec![0, top];
    for _ in 0..rng.random_range(1..=4) {
        opens.push(rng.random_range(1..=top));
    }
    loop {
        let mut next = opens.clone();
        for &u in &opens {
            for &v in &opens {
                next.push(u & v);
                next.push(u | v);
            }
        }
        next.sort_unstable();
        next.dedup();
        if next.len() == opens.len() {
            break;
        }
        opens = next;
    }
    FiniteSite::new(letters(n), opens).expect("closed under unions and intersections")
}

/// A presheaf of Γ-groupoids on a random 2–5 point space, together with a
/// quotient map to a coarser one.
#[derive(Debug, Clone)]
pub struct PresheafInstance {
    pub source: PresheafGammaAction,
    pub target: PresheafGammaAction,
    pub map: PresheafMap,
    /// All sections are discrete.
    pub discrete: bool,
}

fn presheaf_from_states(site: &Arc<FiniteSite>, world: &TokenWorld, states: &[TokenState]) -> (PresheafGammaAction, Vec<Realized>) {
    let real: Vec<Realized> = states.iter().map(|s| realize(world, s)).collect();
    let sections = real.iter().map(|r| r.action.carrier().clone()).collect();
    let gens = site.inclusions().map(|(u, v)| ((u, v), realized_map(&real[u], &real[v]))).collect();
    let x = Arc::new(GroupoidPresheaf::new(site.clone(), sections, gens).expect("states grow as opens shrink"));
    let actions = real.iter().map(|r| r.action.clone()).collect();
    (PresheafGammaAction::new(x, actions).expect("quotients are equivariant"), real)
}

pub fn random_presheaf(rng: &mut SeededRng) -> Sample<PresheafInstance> {
    let n = rng.random_range(2..=5);
    let site = Arc::new(random_site(rng, n));
    let w = random_world(rng, 16);
    let world = &w.value;
    let opens = site.open_count();
    let le = |u: usize, v: usize| site.is_subset(v, u);
    let (base, events) = random_events(rng, world, 3);
    let roots: Vec<usize> = events.iter().map(|_| rng.random_range(0..opens)).collect();
    let (_, extra) = random_events(rng, world, 2);
    let extra: Vec<Event> = extra.into_iter().filter(|e| !matches!(e, Event::Birth(_))).collect();
    let extra_roots: Vec<usize> = extra.iter().map(|_| rng.random_range(0..opens)).collect();
    let states = |with_extra: bool| -> Vec<TokenState> {
        (0..opens)
            .map(|v| {
                let mut active: Vec<(Event, bool)> =
                    events.iter().zip(&roots).map(|(e, &r)| (e.clone(), le(r, v))).collect();
                if with_extra {
                    active.extend(extra.iter().zip(&extra_roots).map(|(e, &r)| (e.clone(), le(r, v))));
                }
                state_from(world, &base, &active)
            })
            .collect()
    };
    let (source, rs) = presheaf_from_states(&site, world, &states(false));
    let (target, rt) = presheaf_from_states(&site, world, &states(true));
    let components = rs.iter().zip(&rt).map(|(a, b)| realized_map(a, b)).collect();
    let map = PresheafMap::new(source.presheaf().clone(), target.presheaf().clone(), components).expect("natural");
    let discrete = source.presheaf().sections().iter().all(|g| g.is_discrete());
    Sample::new(
        format!("{n} points, {opens} opens, {}", w.name),
        PresheafInstance { source, target, map, discrete },
    )
}

/// Twisted data `(G, θ, B)` with `|G| ≤ max_order` and `B` a θ-stable
/// subgroup.
pub fn random_twisted(rng: &mut SeededRng, max_order: usize) -> Sample<InvolutiveGroupData> {
    let (name, g) = random_group(rng, max_order);
    let (iname, theta) = involutions(&g).choose(rng).expect("identity is listed").clone();
    let stable: Vec<Subgroup> = g.subgroups().into_iter().filter(|h| h.is_stable_under(&theta)).collect();
    let b = stable.choose(rng).expect("G is stable").clone();
    let label = format!("{name}/{iname}/B{}", b.order());
    Sample::new(label, InvolutiveGroupData::new(g, theta, b.elements()).expect("θ-stable subgroup"))
}

/// Every functor `a → b`, in lexicographic order of the tables.
pub fn functors_between(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> Vec<GroupoidMap> {
    let (no, nm) = (a.obj_count(), a.mor_count());
    // Constraints that become checkable once morphism `m` is assigned.
    let mut checks: Vec<Vec<(MorId, MorId, MorId)>> = vec![Vec::new(); nm];
    for f in a.morphisms() {
        for &s in a.outgoing(a.tgt(f)) {
            let c = a.then(f, s);
            checks[f.0.max(s.0).max(c.0)].push((f, s, c));
        }
    }
    let mut out = Vec::new();
    let mut obj = vec![ObjId(0); no];
    let total = b.obj_count().checked_pow(no as u32).unwrap_or(0);
    for code in 0..total {
        let mut c = code;
        for x in obj.iter_mut() {
            *x = ObjId(c % b.obj_count());
            c /= b.obj_count();
        }
        let candidates: Vec<Vec<MorId>> = a
            .morphisms()
            .map(|m| {
                if a.identity(a.src(m)) == m {
                    vec![b.identity(obj[a.src(m).0])]
                } else {
                    b.hom(obj[a.src(m).0], obj[a.tgt(m).0]).collect()
                }
            })
            .collect();
        let mut mor = vec![MorId(0); nm];
        extend(a, b, &obj, &candidates, &checks, &mut mor, 0, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Arc<FiniteGroupoid>,
    b: &Arc<FiniteGroupoid>,
    obj: &[ObjId],
    candidates: &[Vec<MorId>],
    checks: &[Vec<(MorId, MorId, MorId)>],
    mor: &mut Vec<MorId>,
    m: usize,
    out: &mut Vec<GroupoidMap>,
) {
    if m == mor.len() {
        out.push(GroupoidMap::new(a.clone(), b.clone(), obj.to_vec(), mor.clone()).expect("in range"));
        return;
    }
    for &c in &candidates[m] {
        mor[m] = c;
        let ok = checks[m].iter().all(|&(f, s, k)| b.compose(mor[f.0], mor[s.0]) == Some(mor[k.0]));
        if ok {
            extend(a, b, obj, candidates, checks, mor, m + 1, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_groupoids_are_valid_and_bounded() {
        let mut rng = seeded(7);
        for _ in 0..60 {
            let s = random_gamma_groupoid(&mut rng, 60);
            assert!(s.value.carrier().mor_count() <= 60, "{}", s.name);
            assert!(s.value.carrier().is_valid(), "{}", s.name);
        }
    }

    #[test]
    fn generated_maps_have_their_property() {
        let mut rng = seeded(11);
        for _ in 0..40 {
            let f = random_fibration(&mut rng);
            assert!(f.value.map().is_functor() && f.value.map().is_fibration(), "{}", f.name);
            let w = random_weak_equivalence(&mut rng);
            assert!(w.value.map().is_functor() && w.value.map().is_weak_equivalence(), "{}", w.name);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let names = |seed| {
            let mut rng = seeded(seed);
            (0..10).map(|_| random_gamma_groupoid(&mut rng, 60).name).collect::<Vec<_>>()
        };
        assert_eq!(names(3), names(3));
    }

    #[test]
    fn diagrams_and_presheaves_build() {
        let mut rng = seeded(5);
        for _ in 0..20 {
            let d = random_filtered_diagram(&mut rng);
            assert!(d.value.inner().diagram().nodes().iter().all(|g| g.mor_count() <= 60), "{}", d.name);
        }
        for _ in 0..5 {
            let p = random_presheaf(&mut rng);
            assert!(p.value.source.presheaf().site().points_separate_opens());
        }
    }

    #[test]
    fn functor_counts() {
        let bz2 = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(2)));
        let bz4 = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(4)));
        // Homomorphisms Z4 → Z2 and Z2 → Z4.
        assert_eq!(functors_between(&bz4, &bz2).len(), 2);
        assert_eq!(functors_between(&bz2, &bz4).len(), 2);
        let ind = Arc::new(FiniteGroupoid::indiscrete(letters(3)));
        assert_eq!(functors_between(&ind, &ind).len(), 27);
    }
}
