//! Finite groupoids stored as flat tables.
//!
//! Composition is diagrammatic: `compose(f, g)` is "`f` then `g`" and is
//! defined exactly when `tgt(f) = src(g)`. The conventional right-to-left
//! product `g∘f` (written `gf`) is therefore `compose(f, g)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::group::{FiniteGroup, GroupAction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorId(pub usize);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// Shape errors: tables of the wrong length or ids out of range. Axiom
/// failures are not errors; see [`FiniteGroupoid::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("{table} table has length {len}, expected {expected}")]
    Length { table: &'static str, len: usize, expected: usize },
    #[error("{table} table refers to {what} {id}, but only {count} exist")]
    OutOfRange { table: &'static str, what: &'static str, id: usize, count: usize },
}

/// Raw tables for a groupoid, before shape checking.
#[derive(Debug, Clone, Default)]
pub struct GroupoidParts {
    pub obj_labels: Vec<String>,
    pub mor_labels: Vec<String>,
    pub src: Vec<ObjId>,
    pub tgt: Vec<ObjId>,
    pub identity: Vec<MorId>,
    pub inverse: Vec<MorId>,
    /// `(first, second, composite)`, meaning "first then second".
    pub composition: Vec<(MorId, MorId, MorId)>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    obj_labels: Vec<String>,
    mor_labels: Vec<String>,
    src: Vec<ObjId>,
    tgt: Vec<ObjId>,
    identity: Vec<MorId>,
    inverse: Vec<MorId>,
    /// `comp[a][k]` is `a ; outgoing(tgt a)[k]`.
    comp: Vec<Vec<Option<MorId>>>,
    /// Recorded triples whose pair is not composable; kept for reporting.
    stray: Vec<(MorId, MorId, MorId)>,
    outgoing: Vec<Vec<MorId>>,
    /// Position of each morphism in the outgoing list of its source.
    out_pos: Vec<usize>,
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupoid")
            .field("objects", &self.obj_labels)
            .field("morphisms", &self.mor_count())
            .finish()
    }
}

/// The axiom a [`Violation`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Composition,
    Associativity,
    Identity,
    Inverse,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Composition => "composition",
            Axiom::Associativity => "associativity",
            Axiom::Identity => "identity",
            Axiom::Inverse => "inverse",
        })
    }
}

/// One failed groupoid axiom, with the offending ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A composable pair has no composite.
    Undefined { first: MorId, second: MorId },
    /// A composite is recorded for a pair that is not composable.
    NotComposable { first: MorId, second: MorId },
    /// The composite has the wrong source or target.
    CompositeEndpoints { first: MorId, second: MorId, composite: MorId },
    NotAssociative { a: MorId, b: MorId, c: MorId },
    IdentityEndpoints { object: ObjId, identity: MorId },
    NotLeftIdentity { morphism: MorId },
    NotRightIdentity { morphism: MorId },
    InverseEndpoints { morphism: MorId, inverse: MorId },
    /// `m` then `inv(m)` is not `id(src m)`.
    NotRightInverse { morphism: MorId },
    /// `inv(m)` then `m` is not `id(tgt m)`.
    NotLeftInverse { morphism: MorId },
}

impl Violation {
    pub fn axiom(&self) -> Axiom {
        match self {
            Violation::Undefined { .. }
            | Violation::NotComposable { .. }
            | Violation::CompositeEndpoints { .. } => Axiom::Composition,
            Violation::NotAssociative { .. } => Axiom::Associativity,
            Violation::IdentityEndpoints { .. }
            | Violation::NotLeftIdentity { .. }
            | Violation::NotRightIdentity { .. } => Axiom::Identity,
            Violation::InverseEndpoints { .. }
            | Violation::NotRightInverse { .. }
            | Violation::NotLeftInverse { .. } => Axiom::Inverse,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.axiom())?;
        match self {
            Violation::Undefined { first, second } => {
                write!(f, "{first} then {second} is composable but has no composite")
            }
            Violation::NotComposable { first, second } => {
                write!(f, "composite recorded for non-composable pair ({first}, {second})")
            }
            Violation::CompositeEndpoints { first, second, composite } => {
                write!(f, "{first} then {second} = {composite} has wrong endpoints")
            }
            Violation::NotAssociative { a, b, c } => {
                write!(f, "({a} then {b}) then {c} differs from {a} then ({b} then {c})")
            }
            Violation::IdentityEndpoints { object, identity } => {
                write!(f, "identity {identity} of {object} is not an endomorphism of it")
            }
            Violation::NotLeftIdentity { morphism } => {
                write!(f, "id(src {morphism}) then {morphism} is not {morphism}")
            }
            Violation::NotRightIdentity { morphism } => {
                write!(f, "{morphism} then id(tgt {morphism}) is not {morphism}")
            }
            Violation::InverseEndpoints { morphism, inverse } => {
                write!(f, "inverse {inverse} of {morphism} has wrong endpoints")
            }
            Violation::NotRightInverse { morphism } => {
                write!(f, "{morphism} then inv({morphism}) is not the identity")
            }
            Violation::NotLeftInverse { morphism } => {
                write!(f, "inv({morphism}) then {morphism} is not the identity")
            }
        }
    }
}

impl FiniteGroupoid {
    /// Checks table shapes and id ranges. The result may still violate the
    /// groupoid axioms; run [`validate`](Self::validate) for those.
    pub fn from_parts(parts: GroupoidParts) -> Result<Self, GroupoidError> {
        let n_obj = parts.obj_labels.len();
        let n_mor = parts.mor_labels.len();
        let len = |table, len, expected| {
            if len == expected {
                Ok(())
            } else {
                Err(GroupoidError::Length { table, len, expected })
            }
        };
        len("src", parts.src.len(), n_mor)?;
        len("tgt", parts.tgt.len(), n_mor)?;
        len("identity", parts.identity.len(), n_obj)?;
        len("inverse", parts.inverse.len(), n_mor)?;
        let obj = |table, o: ObjId| {
            if o.0 < n_obj {
                Ok(())
            } else {
                Err(GroupoidError::OutOfRange { table, what: "object", id: o.0, count: n_obj })
            }
        };
        let mor = |table, m: MorId| {
            if m.0 < n_mor {
                Ok(())
            } else {
                Err(GroupoidError::OutOfRange { table, what: "morphism", id: m.0, count: n_mor })
            }
        };
        for &o in &parts.src {
            obj("src", o)?;
        }
        for &o in &parts.tgt {
            obj("tgt", o)?;
        }
        for &m in &parts.identity {
            mor("identity", m)?;
        }
        for &m in &parts.inverse {
            mor("inverse", m)?;
        }
        let mut outgoing = vec![Vec::new(); n_obj];
        let mut out_pos = Vec::with_capacity(n_mor);
        for (m, &s) in parts.src.iter().enumerate() {
            out_pos.push(outgoing[s.0].len());
            outgoing[s.0].push(MorId(m));
        }
        let mut comp: Vec<Vec<Option<MorId>>> =
            parts.tgt.iter().map(|t| vec![None; outgoing[t.0].len()]).collect();
        let mut stray = Vec::new();
        for &(a, b, c) in &parts.composition {
            mor("composition", a)?;
            mor("composition", b)?;
            mor("composition", c)?;
            if parts.tgt[a.0] == parts.src[b.0] {
                comp[a.0][out_pos[b.0]] = Some(c);
            } else {
                stray.retain(|&(x, y, _)| (x, y) != (a, b));
                stray.push((a, b, c));
            }
        }
        stray.sort_unstable();
        Ok(Self {
            obj_labels: parts.obj_labels,
            mor_labels: parts.mor_labels,
            src: parts.src,
            tgt: parts.tgt,
            identity: parts.identity,
            inverse: parts.inverse,
            comp,
            stray,
            outgoing,
            out_pos,
        })
    }

    pub fn into_parts(self) -> GroupoidParts {
        let composition = self.triples();
        GroupoidParts {
            obj_labels: self.obj_labels,
            mor_labels: self.mor_labels,
            src: self.src,
            tgt: self.tgt,
            identity: self.identity,
            inverse: self.inverse,
            composition,
        }
    }

    /// The groupoid with no objects.
    pub fn empty() -> Self {
        Self::from_parts(GroupoidParts::default()).expect("empty tables are well-shaped")
    }

    /// The final groupoid `∗`: one object, one morphism.
    pub fn terminal() -> Self {
        Self::discrete(vec!["*".to_string()])
    }

    /// A set viewed as a groupoid with only identity morphisms.
    pub fn discrete(labels: Vec<String>) -> Self {
        let n = labels.len();
        let parts = GroupoidParts {
            mor_labels: labels.iter().map(|l| format!("id_{l}")).collect(),
            obj_labels: labels,
            src: (0..n).map(ObjId).collect(),
            tgt: (0..n).map(ObjId).collect(),
            identity: (0..n).map(MorId).collect(),
            inverse: (0..n).map(MorId).collect(),
            composition: (0..n).map(|i| (MorId(i), MorId(i), MorId(i))).collect(),
        };
        Self::from_parts(parts).expect("discrete tables are well-shaped")
    }

    /// The groupoid with exactly one morphism between any two objects.
    /// Morphism `x → y` has id `x·n + y`.
    pub fn indiscrete(labels: Vec<String>) -> Self {
        let n = labels.len();
        let m = |x: usize, y: usize| MorId(x * n + y);
        let mut parts = GroupoidParts { obj_labels: labels.clone(), ..Default::default() };
        for x in 0..n {
            for y in 0..n {
                parts.mor_labels.push(format!("{}->{}", labels[x], labels[y]));
                parts.src.push(ObjId(x));
                parts.tgt.push(ObjId(y));
                parts.inverse.push(m(y, x));
                for z in 0..n {
                    parts.composition.push((m(x, y), m(y, z), m(x, z)));
                }
            }
            parts.identity.push(m(x, x));
        }
        Self::from_parts(parts).expect("indiscrete tables are well-shaped")
    }

    /// The action groupoid `𝔼_G X`: objects are the points of `X`, the
    /// morphism `(g, x)` goes from `x` to `g·x` and has id `g·|X| + x`.
    /// `(g, x)` then `(h, g·x)` is `(hg, x)`.
    pub fn action_groupoid(action: &GroupAction) -> Self {
        let group = action.group();
        let n = action.len();
        let m = |g: usize, x: usize| MorId(g * n + x);
        let mut parts = GroupoidParts { obj_labels: action.carrier().to_vec(), ..Default::default() };
        for g in group.elements() {
            for x in 0..n {
                let gx = action.act(g, x);
                parts.mor_labels.push(format!("{}:{}", group.label(g), action.carrier()[x]));
                parts.src.push(ObjId(x));
                parts.tgt.push(ObjId(gx));
                parts.inverse.push(m(group.inv(g), gx));
                for h in group.elements() {
                    parts.composition.push((m(g, x), m(h, gx), m(group.mul(h, g), x)));
                }
            }
        }
        parts.identity = (0..n).map(|x| m(group.identity(), x)).collect();
        Self::from_parts(parts).expect("action groupoid tables are well-shaped")
    }

    /// `𝔼G`, the group acting on itself by left multiplication.
    pub fn eg(group: &FiniteGroup) -> Self {
        Self::action_groupoid(&GroupAction::left_multiplication(group))
    }

    /// `𝔹G`, the group acting on a point. Morphism ids are element ids, and
    /// `compose(a, b)` is the group product `b·a`.
    pub fn bg(group: &FiniteGroup) -> Self {
        Self::action_groupoid(&GroupAction::on_point(group))
    }

    /// Disjoint union, objects and morphisms concatenated in input order.
    pub fn disjoint_union(parts: &[&FiniteGroupoid]) -> Self {
        let mut out = GroupoidParts::default();
        for (k, g) in parts.iter().enumerate() {
            let (oo, mo) = (out.obj_labels.len(), out.mor_labels.len());
            let prefix = |l: &str| if parts.len() > 1 { format!("{k}.{l}") } else { l.to_string() };
            out.obj_labels.extend(g.obj_labels.iter().map(|l| prefix(l)));
            out.mor_labels.extend(g.mor_labels.iter().map(|l| prefix(l)));
            out.src.extend(g.src.iter().map(|o| ObjId(o.0 + oo)));
            out.tgt.extend(g.tgt.iter().map(|o| ObjId(o.0 + oo)));
            out.identity.extend(g.identity.iter().map(|m| MorId(m.0 + mo)));
            out.inverse.extend(g.inverse.iter().map(|m| MorId(m.0 + mo)));
            out.composition.extend(
                g.triples().into_iter().map(|(a, b, c)| (MorId(a.0 + mo), MorId(b.0 + mo), MorId(c.0 + mo))),
            );
        }
        Self::from_parts(out).expect("union of well-shaped tables is well-shaped")
    }

    /// Product `G × H`: object `(x, y)` has id `x·|Ob H| + y` and morphism
    /// `(m, n)` has id `m·|Mor H| + n`.
    pub fn product(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Self {
        let (ho, hm) = (h.obj_count(), h.mor_count());
        let o = |x: ObjId, y: ObjId| ObjId(x.0 * ho + y.0);
        let m = |a: MorId, b: MorId| MorId(a.0 * hm + b.0);
        let mut out = GroupoidParts::default();
        for x in g.objects() {
            for y in h.objects() {
                out.obj_labels.push(format!("({},{})", g.obj_label(x), h.obj_label(y)));
                out.identity.push(m(g.identity(x), h.identity(y)));
            }
        }
        for a in g.morphisms() {
            for b in h.morphisms() {
                out.mor_labels.push(format!("({},{})", g.mor_label(a), h.mor_label(b)));
                out.src.push(o(g.src(a), h.src(b)));
                out.tgt.push(o(g.tgt(a), h.tgt(b)));
                out.inverse.push(m(g.inverse(a), h.inverse(b)));
            }
        }
        let hc = h.triples();
        for (a1, a2, a3) in g.triples() {
            for &(b1, b2, b3) in &hc {
                out.composition.push((m(a1, b1), m(a2, b2), m(a3, b3)));
            }
        }
        Self::from_parts(out).expect("product of well-shaped tables is well-shaped")
    }

    /// A copy with objects renumbered by `obj_perm` (old id → new id) and
    /// morphisms by `mor_perm`.
    pub fn relabeled(&self, obj_perm: &[usize], mor_perm: &[usize]) -> Self {
        let mut parts = GroupoidParts {
            obj_labels: vec![String::new(); self.obj_count()],
            mor_labels: vec![String::new(); self.mor_count()],
            src: vec![ObjId(0); self.mor_count()],
            tgt: vec![ObjId(0); self.mor_count()],
            identity: vec![MorId(0); self.obj_count()],
            inverse: vec![MorId(0); self.mor_count()],
            composition: Vec::with_capacity(self.composition_len()),
        };
        let mo = |m: MorId| MorId(mor_perm[m.0]);
        let ob = |o: ObjId| ObjId(obj_perm[o.0]);
        for x in self.objects() {
            parts.obj_labels[obj_perm[x.0]] = self.obj_labels[x.0].clone();
            parts.identity[obj_perm[x.0]] = mo(self.identity(x));
        }
        for a in self.morphisms() {
            let i = mor_perm[a.0];
            parts.mor_labels[i] = self.mor_labels[a.0].clone();
            parts.src[i] = ob(self.src(a));
            parts.tgt[i] = ob(self.tgt(a));
            parts.inverse[i] = mo(self.inverse(a));
        }
        let mut comp: Vec<_> = self.triples().into_iter().map(|(a, b, c)| (mo(a), mo(b), mo(c))).collect();
        comp.sort_unstable();
        parts.composition = comp;
        Self::from_parts(parts).expect("relabeling preserves shape")
    }

    pub fn obj_count(&self) -> usize {
        self.obj_labels.len()
    }

    pub fn mor_count(&self) -> usize {
        self.mor_labels.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + Clone + '_ {
        (0..self.obj_count()).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + Clone + '_ {
        (0..self.mor_count()).map(MorId)
    }

    pub fn obj_label(&self, x: ObjId) -> &str {
        &self.obj_labels[x.0]
    }

    pub fn mor_label(&self, m: MorId) -> &str {
        &self.mor_labels[m.0]
    }

    pub fn obj_labels(&self) -> &[String] {
        &self.obj_labels
    }

    pub fn mor_labels(&self) -> &[String] {
        &self.mor_labels
    }

    #[inline]
    pub fn src(&self, m: MorId) -> ObjId {
        self.src[m.0]
    }

    #[inline]
    pub fn tgt(&self, m: MorId) -> ObjId {
        self.tgt[m.0]
    }

    #[inline]
    pub fn identity(&self, x: ObjId) -> MorId {
        self.identity[x.0]
    }

    #[inline]
    pub fn inverse(&self, m: MorId) -> MorId {
        self.inverse[m.0]
    }

    /// "`first` then `second`", if recorded.
    #[inline]
    pub fn compose(&self, first: MorId, second: MorId) -> Option<MorId> {
        if self.tgt[first.0] == self.src[second.0] {
            self.comp[first.0][self.out_pos[second.0]]
        } else {
            self.stray.iter().find(|&&(a, b, _)| (a, b) == (first, second)).map(|&(_, _, c)| c)
        }
    }

    /// Like [`compose`](Self::compose), for tables already known to be
    /// total on composable pairs.
    #[inline]
    pub(crate) fn then(&self, first: MorId, second: MorId) -> MorId {
        self.comp[first.0][self.out_pos[second.0]].expect("composable pairs have composites")
    }

    pub fn composition_len(&self) -> usize {
        self.comp.iter().flatten().flatten().count() + self.stray.len()
    }

    /// Every recorded composition triple, sorted.
    pub fn triples(&self) -> Vec<(MorId, MorId, MorId)> {
        let mut out: Vec<_> = self
            .morphisms()
            .flat_map(|a| {
                let row = &self.comp[a.0];
                self.outgoing[self.tgt[a.0].0].iter().zip(row).filter_map(move |(&b, c)| c.map(|c| (a, b, c)))
            })
            .chain(self.stray.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Morphisms with source `x`, in id order.
    pub fn outgoing(&self, x: ObjId) -> &[MorId] {
        &self.outgoing[x.0]
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.outgoing[x.0].iter().copied().filter(move |&m| self.tgt(m) == y)
    }

    pub fn automorphisms(&self, x: ObjId) -> Vec<MorId> {
        self.hom(x, x).collect()
    }

    pub fn find_object(&self, label: &str) -> Option<ObjId> {
        self.obj_labels.iter().position(|l| l == label).map(ObjId)
    }

    pub fn find_morphism(&self, label: &str) -> Option<MorId> {
        self.mor_labels.iter().position(|l| l == label).map(MorId)
    }

    /// Every composable pair has a composite, and identities and inverses
    /// have the right endpoints. Cheaper than [`validate`](Self::validate):
    /// enough for table lookups not to fail.
    pub fn is_well_formed(&self) -> bool {
        self.objects().all(|x| {
            let i = self.identity(x);
            self.src(i) == x && self.tgt(i) == x
        }) && self.morphisms().all(|m| {
            let i = self.inverse(m);
            self.src(i) == self.tgt(m)
                && self.tgt(i) == self.src(m)
                && self.comp[m.0].iter().all(Option::is_some)
        })
    }

    /// Every violated groupoid axiom. Empty iff this is a groupoid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for x in self.objects() {
            let i = self.identity(x);
            if self.src(i) != x || self.tgt(i) != x {
                out.push(Violation::IdentityEndpoints { object: x, identity: i });
            }
        }
        for (a, b, c) in self.triples() {
            if self.tgt(a) != self.src(b) {
                out.push(Violation::NotComposable { first: a, second: b });
            } else if self.src(c) != self.src(a) || self.tgt(c) != self.tgt(b) {
                out.push(Violation::CompositeEndpoints { first: a, second: b, composite: c });
            }
        }
        for a in self.morphisms() {
            for (&b, c) in self.outgoing(self.tgt(a)).iter().zip(&self.comp[a.0]) {
                if c.is_none() {
                    out.push(Violation::Undefined { first: a, second: b });
                }
            }
        }
        // Associativity over composable triples where both bracketings exist.
        for a in self.morphisms() {
            for &b in self.outgoing(self.tgt(a)) {
                let Some(ab) = self.compose(a, b) else { continue };
                for &c in self.outgoing(self.tgt(b)) {
                    let left = self.compose(ab, c);
                    let right = self.compose(b, c).and_then(|bc| self.compose(a, bc));
                    if let (Some(l), Some(r)) = (left, right) {
                        if l != r {
                            out.push(Violation::NotAssociative { a, b, c });
                        }
                    }
                }
            }
        }
        for m in self.morphisms() {
            let (s, t) = (self.src(m), self.tgt(m));
            if self.compose(self.identity(s), m).is_some_and(|r| r != m) {
                out.push(Violation::NotLeftIdentity { morphism: m });
            }
            if self.compose(m, self.identity(t)).is_some_and(|r| r != m) {
                out.push(Violation::NotRightIdentity { morphism: m });
            }
            let i = self.inverse(m);
            if self.src(i) != t || self.tgt(i) != s {
                out.push(Violation::InverseEndpoints { morphism: m, inverse: i });
                continue;
            }
            if self.compose(m, i) != Some(self.identity(s)) {
                out.push(Violation::NotRightInverse { morphism: m });
            }
            if self.compose(i, m) != Some(self.identity(t)) {
                out.push(Violation::NotLeftInverse { morphism: m });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Connected components, i.e. isomorphism classes. `component[x]` is the
    /// index of the class of `x`; classes are numbered by their minimal
    /// object.
    pub fn components(&self) -> Components {
        let mut uf = UnionFind::<usize>::new(self.obj_count());
        for m in self.morphisms() {
            uf.union(self.src(m).0, self.tgt(m).0);
        }
        let mut class_of_root = HashMap::new();
        let mut representatives = Vec::new();
        let mut component = Vec::with_capacity(self.obj_count());
        for x in self.objects() {
            let root = uf.find(x.0);
            let c = *class_of_root.entry(root).or_insert_with(|| {
                representatives.push(x);
                representatives.len() - 1
            });
            component.push(c);
        }
        Components { component, representatives }
    }

    /// Σ over isomorphism classes of `1/|Aut|`.
    pub fn cardinality(&self) -> BigRational {
        self.components()
            .representatives
            .iter()
            .map(|&x| {
                let aut = self.hom(x, x).count();
                BigRational::new(BigInt::from(1), BigInt::from(aut))
            })
            .fold(BigRational::zero(), |acc, q| acc + q)
    }

    /// Equality of all structure tables, ignoring labels.
    pub fn same_tables(&self, other: &FiniteGroupoid) -> bool {
        self.src == other.src
            && self.tgt == other.tgt
            && self.identity == other.identity
            && self.inverse == other.inverse
            && self.comp == other.comp
            && self.stray == other.stray
    }

    /// Whether every morphism is an identity.
    pub fn is_discrete(&self) -> bool {
        self.morphisms().all(|m| self.identity(self.src(m)) == m)
    }
}

/// Isomorphism classes of a groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Class index of each object.
    pub component: Vec<usize>,
    /// Minimal object of each class.
    pub representatives: Vec<ObjId>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// Σ over isomorphism classes of `1/|Aut|`, as an exact rational.
pub fn groupoid_cardinality(g: &FiniteGroupoid) -> BigRational {
    g.cardinality()
}

pub fn validate_groupoid(g: &FiniteGroupoid) -> Vec<Violation> {
    g.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn terminal_is_valid() {
        let t = FiniteGroupoid::terminal();
        assert_eq!((t.obj_count(), t.mor_count()), (1, 1));
        assert!(t.validate().is_empty());
    }

    #[test]
    fn bg_z2_is_valid() {
        let g = FiniteGroupoid::bg(&FiniteGroup::cyclic(2));
        assert_eq!((g.obj_count(), g.mor_count()), (1, 2));
        assert!(g.validate().is_empty());
    }

    #[test]
    fn corrupted_bg_z2_reports_inverse_violation() {
        let mut parts = FiniteGroupoid::bg(&FiniteGroup::cyclic(2)).into_parts();
        for c in &mut parts.composition {
            if c.0 == MorId(1) && c.1 == MorId(1) {
                c.2 = MorId(1);
            }
        }
        let g = FiniteGroupoid::from_parts(parts).unwrap();
        let report = g.validate();
        assert!(report.iter().any(|v| v.axiom() == Axiom::Inverse), "{report:?}");
        assert!(report.contains(&Violation::NotRightInverse { morphism: MorId(1) }));
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut parts = FiniteGroupoid::bg(&FiniteGroup::cyclic(3)).into_parts();
        parts.composition.pop();
        let g = FiniteGroupoid::from_parts(parts).unwrap();
        assert!(!g.is_well_formed());
        assert!(g.validate().iter().any(|v| matches!(v, Violation::Undefined { .. })));
    }

    #[test]
    fn shape_errors() {
        let mut parts = FiniteGroupoid::terminal().into_parts();
        parts.src = vec![ObjId(3)];
        assert!(matches!(
            FiniteGroupoid::from_parts(parts),
            Err(GroupoidError::OutOfRange { table: "src", .. })
        ));
    }

    #[test]
    fn eg_and_bg_shapes() {
        let z2 = FiniteGroup::cyclic(2);
        let eg = FiniteGroupoid::eg(&z2);
        assert_eq!((eg.obj_count(), eg.mor_count()), (2, 4));
        assert_eq!(eg.components().count(), 1);
        assert!(eg.objects().all(|x| eg.automorphisms(x).len() == 1));
        let s3 = FiniteGroup::symmetric(3);
        let es3 = FiniteGroupoid::eg(&s3);
        assert_eq!((es3.obj_count(), es3.mor_count()), (6, 36));
        assert_eq!(es3.components().count(), 1);
        assert!(es3.is_valid());
        assert!(FiniteGroupoid::bg(&FiniteGroup::trivial()).same_tables(&FiniteGroupoid::terminal()));
        let b4 = FiniteGroupoid::bg(&FiniteGroup::cyclic(4));
        assert_eq!((b4.obj_count(), b4.mor_count()), (1, 4));
    }

    #[test]
    fn cardinalities() {
        let bz2 = FiniteGroupoid::bg(&FiniteGroup::cyclic(2));
        assert_eq!(bz2.cardinality(), q(1, 2));
        assert_eq!(FiniteGroupoid::eg(&FiniteGroup::symmetric(3)).cardinality(), q(1, 1));
        let u = FiniteGroupoid::disjoint_union(&[
            &FiniteGroupoid::terminal(),
            &FiniteGroupoid::bg(&FiniteGroup::cyclic(3)),
        ]);
        assert_eq!(u.cardinality(), q(4, 3));
        assert_eq!(FiniteGroupoid::empty().cardinality(), q(0, 1));
    }

    #[test]
    fn unions_and_products() {
        assert_eq!(FiniteGroupoid::disjoint_union(&[]).obj_count(), 0);
        let bz2 = FiniteGroupoid::bg(&FiniteGroup::cyclic(2));
        let p = FiniteGroupoid::product(&bz2, &bz2);
        assert_eq!((p.obj_count(), p.mor_count()), (1, 4));
        assert!(p.is_valid());
        // Every non-identity automorphism has order 2: Klein four-group.
        let x = ObjId(0);
        for m in p.automorphisms(x) {
            assert_eq!(p.compose(m, m), Some(p.identity(x)));
        }
        let s = FiniteGroupoid::product(&FiniteGroupoid::terminal(), &bz2);
        assert_eq!((s.obj_count(), s.mor_count(), s.composition_len()), (1, 2, 4));
    }

    #[test]
    fn indiscrete_is_contractible() {
        let g = FiniteGroupoid::indiscrete(vec!["a".into(), "b".into(), "c".into()]);
        assert!(g.is_valid());
        assert_eq!(g.cardinality(), q(1, 1));
    }
}
