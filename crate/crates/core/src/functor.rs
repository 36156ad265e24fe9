//! Functors between finite groupoids, fibrations and weak equivalences.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{GroupAction, GroupError, Subgroup};
use crate::groupoid::{FiniteGroupoid, MorId, ObjId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("{table} map has length {len}, expected {expected}")]
    Length { table: &'static str, len: usize, expected: usize },
    #[error("{table} map sends {from} to {to}, out of range")]
    OutOfRange { table: &'static str, from: usize, to: usize },
    #[error("cannot compose: codomain of the first map is not the domain of the second")]
    Mismatch,
    #[error("not a functor: {0}")]
    NotFunctor(FunctorViolation),
}

/// A failure of functoriality, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    Source(MorId),
    Target(MorId),
    Identity(ObjId),
    Composition(MorId, MorId),
    Inverse(MorId),
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::Source(m) => write!(f, "source of {m} not preserved"),
            FunctorViolation::Target(m) => write!(f, "target of {m} not preserved"),
            FunctorViolation::Identity(x) => write!(f, "identity of {x} not preserved"),
            FunctorViolation::Composition(a, b) => write!(f, "composite of ({a}, {b}) not preserved"),
            FunctorViolation::Inverse(m) => write!(f, "inverse of {m} not preserved"),
        }
    }
}

/// A map of groupoids given by its object and morphism tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMap {
    dom: Arc<FiniteGroupoid>,
    cod: Arc<FiniteGroupoid>,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl GroupoidMap {
    /// Checks table lengths and ranges only; functoriality is checked by
    /// [`violations`](Self::violations) or [`new_functor`](Self::new_functor).
    pub fn new(
        dom: Arc<FiniteGroupoid>,
        cod: Arc<FiniteGroupoid>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Self, MapError> {
        if obj_map.len() != dom.obj_count() {
            return Err(MapError::Length { table: "object", len: obj_map.len(), expected: dom.obj_count() });
        }
        if mor_map.len() != dom.mor_count() {
            return Err(MapError::Length { table: "morphism", len: mor_map.len(), expected: dom.mor_count() });
        }
        if let Some((i, o)) = obj_map.iter().enumerate().find(|(_, o)| o.0 >= cod.obj_count()) {
            return Err(MapError::OutOfRange { table: "object", from: i, to: o.0 });
        }
        if let Some((i, m)) = mor_map.iter().enumerate().find(|(_, m)| m.0 >= cod.mor_count()) {
            return Err(MapError::OutOfRange { table: "morphism", from: i, to: m.0 });
        }
        Ok(Self { dom, cod, obj_map, mor_map })
    }

    /// Like [`new`](Self::new) but also rejects non-functors.
    pub fn new_functor(
        dom: Arc<FiniteGroupoid>,
        cod: Arc<FiniteGroupoid>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Self, MapError> {
        let f = Self::new(dom, cod, obj_map, mor_map)?;
        match f.violations().into_iter().next() {
            Some(v) => Err(MapError::NotFunctor(v)),
            None => Ok(f),
        }
    }

    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        let obj_map = g.objects().collect();
        let mor_map = g.morphisms().collect();
        Self { dom: g.clone(), cod: g, obj_map, mor_map }
    }

    /// The unique map to the terminal groupoid.
    pub fn to_terminal(g: Arc<FiniteGroupoid>) -> Self {
        let obj_map = vec![ObjId(0); g.obj_count()];
        let mor_map = vec![MorId(0); g.mor_count()];
        Self { dom: g, cod: Arc::new(FiniteGroupoid::terminal()), obj_map, mor_map }
    }

    pub fn dom(&self) -> &Arc<FiniteGroupoid> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteGroupoid> {
        &self.cod
    }

    #[inline]
    pub fn obj(&self, x: ObjId) -> ObjId {
        self.obj_map[x.0]
    }

    #[inline]
    pub fn mor(&self, m: MorId) -> MorId {
        self.mor_map[m.0]
    }

    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[MorId] {
        &self.mor_map
    }

    /// Functoriality failures: preservation of source, target, identities,
    /// composites and inverses.
    pub fn violations(&self) -> Vec<FunctorViolation> {
        let (d, c) = (&*self.dom, &*self.cod);
        let mut out = Vec::new();
        for m in d.morphisms() {
            if c.src(self.mor(m)) != self.obj(d.src(m)) {
                out.push(FunctorViolation::Source(m));
            }
            if c.tgt(self.mor(m)) != self.obj(d.tgt(m)) {
                out.push(FunctorViolation::Target(m));
            }
            if self.mor(d.inverse(m)) != c.inverse(self.mor(m)) {
                out.push(FunctorViolation::Inverse(m));
            }
        }
        for x in d.objects() {
            if self.mor(d.identity(x)) != c.identity(self.obj(x)) {
                out.push(FunctorViolation::Identity(x));
            }
        }
        for a in d.morphisms() {
            for &b in d.outgoing(d.tgt(a)) {
                let Some(ab) = d.compose(a, b) else { continue };
                if c.compose(self.mor(a), self.mor(b)) != Some(self.mor(ab)) {
                    out.push(FunctorViolation::Composition(a, b));
                }
            }
        }
        out
    }

    pub fn is_functor(&self) -> bool {
        self.violations().is_empty()
    }

    /// `self` then `next`.
    pub fn then(&self, next: &GroupoidMap) -> Result<GroupoidMap, MapError> {
        if !same_groupoid(&self.cod, &next.dom) {
            return Err(MapError::Mismatch);
        }
        Ok(GroupoidMap {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            obj_map: self.obj_map.iter().map(|&x| next.obj(x)).collect(),
            mor_map: self.mor_map.iter().map(|&m| next.mor(m)).collect(),
        })
    }

    /// Isomorphism-lifting: for every object `x` and every `α` out of `f(x)`
    /// there is some `β` out of `x` with `f(β) = α`.
    pub fn is_fibration(&self) -> bool {
        self.fibration_witness().is_none()
    }

    /// An object and an unliftable morphism, when not a fibration.
    pub fn fibration_witness(&self) -> Option<(ObjId, MorId)> {
        let (d, c) = (&*self.dom, &*self.cod);
        for x in d.objects() {
            let images: HashSet<MorId> = d.outgoing(x).iter().map(|&b| self.mor(b)).collect();
            if let Some(&a) = c.outgoing(self.obj(x)).iter().find(|a| !images.contains(a)) {
                return Some((x, a));
            }
        }
        None
    }

    /// Two distinct parallel morphisms with equal image.
    pub fn faithfulness_witness(&self) -> Option<(MorId, MorId)> {
        let d = &*self.dom;
        for x in d.objects() {
            let mut seen: HashMap<(ObjId, MorId), MorId> = HashMap::new();
            for &b in d.outgoing(x) {
                if let Some(&prev) = seen.get(&(d.tgt(b), self.mor(b))) {
                    return Some((prev, b));
                }
                seen.insert((d.tgt(b), self.mor(b)), b);
            }
        }
        None
    }

    /// Objects `x, x₁` and a morphism `f(x) → f(x₁)` with no preimage.
    pub fn fullness_witness(&self) -> Option<(ObjId, ObjId, MorId)> {
        let (d, c) = (&*self.dom, &*self.cod);
        let mut fibres: HashMap<ObjId, Vec<ObjId>> = HashMap::new();
        for x in d.objects() {
            fibres.entry(self.obj(x)).or_default().push(x);
        }
        for x in d.objects() {
            let images: HashSet<(ObjId, MorId)> =
                d.outgoing(x).iter().map(|&b| (d.tgt(b), self.mor(b))).collect();
            for &g in c.outgoing(self.obj(x)) {
                for &x1 in fibres.get(&c.tgt(g)).map(Vec::as_slice).unwrap_or(&[]) {
                    if !images.contains(&(x1, g)) {
                        return Some((x, x1, g));
                    }
                }
            }
        }
        None
    }

    /// A codomain object not isomorphic to any image object.
    pub fn essential_surjectivity_witness(&self) -> Option<ObjId> {
        let c = &*self.cod;
        let comps = c.components();
        let mut hit = vec![false; comps.count()];
        for &y in &self.obj_map {
            hit[comps.component[y.0]] = true;
        }
        hit.iter().position(|h| !h).map(|k| comps.representatives[k])
    }

    pub fn is_faithful(&self) -> bool {
        self.faithfulness_witness().is_none()
    }

    pub fn is_full(&self) -> bool {
        self.fullness_witness().is_none()
    }

    pub fn is_essentially_surjective(&self) -> bool {
        self.essential_surjectivity_witness().is_none()
    }

    /// Full, faithful and essentially surjective.
    pub fn is_weak_equivalence(&self) -> bool {
        self.is_faithful() && self.is_full() && self.is_essentially_surjective()
    }

    /// A functor that is bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        fn bijective(values: impl Iterator<Item = usize>, len: usize, cod_len: usize) -> bool {
            if len != cod_len {
                return false;
            }
            let mut seen = vec![false; cod_len];
            values.into_iter().all(|v| !std::mem::replace(&mut seen[v], true))
        }
        bijective(self.obj_map.iter().map(|o| o.0), self.obj_map.len(), self.cod.obj_count())
            && bijective(self.mor_map.iter().map(|m| m.0), self.mor_map.len(), self.cod.mor_count())
            && self.is_functor()
    }
}

/// Pointer equality, falling back to table equality.
pub(crate) fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub fn is_fibration(f: &GroupoidMap) -> bool {
    f.is_fibration()
}

pub fn is_weak_equivalence(f: &GroupoidMap) -> bool {
    f.is_weak_equivalence()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    NotSubgroup(#[from] GroupError),
    #[error("subgroup is not normal: conjugating {element} by {by} leaves it")]
    NotNormal { element: usize, by: usize },
    #[error("normal subgroup does not act freely: {element} fixes point {point}")]
    NotFree { element: usize, point: usize },
}

/// The canonical map `𝔼_G X → 𝔼_{G/N}(X/N)` and its verdicts.
#[derive(Debug, Clone)]
pub struct QuotientComparison {
    pub quotient_action: GroupAction,
    pub map: GroupoidMap,
    pub fibration: bool,
    pub weak_equivalence: bool,
}

impl QuotientComparison {
    pub fn is_acyclic_fibration(&self) -> bool {
        self.fibration && self.weak_equivalence
    }
}

/// Builds `𝔼_G X → 𝔼_{G/N}(X/N)` for a normal subgroup `N` acting freely.
/// Orbits `X/N` and cosets `G/N` are numbered by their minimal element.
pub fn quotient_comparison(action: &GroupAction, normal: &[usize]) -> Result<QuotientComparison, QuotientError> {
    let group = action.group();
    let n = Subgroup::new(group, normal)?;
    if let Some((by, element)) = n.is_normal_in(group) {
        return Err(QuotientError::NotNormal { element, by });
    }
    if let Some((element, point)) = action.free_witness(n.elements()) {
        return Err(QuotientError::NotFree { element, point });
    }
    let (quot_group, coset_of) = n.quotient(group);
    // N-orbits on the carrier, numbered by minimal point.
    let mut orbit_of = vec![usize::MAX; action.len()];
    let mut reps = Vec::new();
    for x in 0..action.len() {
        if orbit_of[x] == usize::MAX {
            for &k in n.elements() {
                orbit_of[action.act(k, x)] = reps.len();
            }
            reps.push(x);
        }
    }
    let mut coset_rep = vec![usize::MAX; quot_group.order()];
    for g in group.elements().rev() {
        coset_rep[coset_of[g]] = g;
    }
    let carrier = reps.iter().map(|&x| format!("[{}]", action.carrier()[x])).collect();
    let quotient_action =
        GroupAction::new(quot_group, carrier, |c, o| orbit_of[action.act(coset_rep[c], reps[o])])
            .expect("normal subgroup induces an action on orbits");
    let dom = Arc::new(FiniteGroupoid::action_groupoid(action));
    let cod = Arc::new(FiniteGroupoid::action_groupoid(&quotient_action));
    let (nx, nq) = (action.len(), quotient_action.len());
    let obj_map = (0..nx).map(|x| ObjId(orbit_of[x])).collect();
    let mut mor_map = Vec::with_capacity(group.order() * nx);
    for g in group.elements() {
        mor_map.extend(orbit_of.iter().map(|&o| MorId(coset_of[g] * nq + o)));
    }
    let map = GroupoidMap::new(dom, cod, obj_map, mor_map).expect("quotient tables are in range");
    Ok(QuotientComparison {
        fibration: map.is_fibration(),
        weak_equivalence: map.is_weak_equivalence(),
        quotient_action,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    #[test]
    fn identity_is_acyclic_fibration() {
        let g = arc(FiniteGroupoid::eg(&FiniteGroup::symmetric(3)));
        let id = GroupoidMap::identity(g);
        assert!(id.is_functor());
        assert!(id.is_fibration() && id.is_weak_equivalence() && id.is_isomorphism());
    }

    #[test]
    fn eg_to_point_is_acyclic() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4)] {
            let f = GroupoidMap::to_terminal(arc(FiniteGroupoid::eg(&g)));
            assert!(f.is_functor());
            assert!(f.is_fibration());
            assert!(f.is_weak_equivalence());
        }
    }

    #[test]
    fn bg_to_point_is_not_faithful() {
        let f = GroupoidMap::to_terminal(arc(FiniteGroupoid::bg(&FiniteGroup::cyclic(2))));
        assert!(f.is_fibration());
        assert!(!f.is_faithful());
        assert!(!f.is_weak_equivalence());
    }

    #[test]
    fn one_object_inclusion_into_eg_is_not_a_fibration() {
        let eg = arc(FiniteGroupoid::eg(&FiniteGroup::cyclic(2)));
        let f = GroupoidMap::new_functor(
            arc(FiniteGroupoid::terminal()),
            eg.clone(),
            vec![ObjId(0)],
            vec![eg.identity(ObjId(0))],
        )
        .unwrap();
        let (x, a) = f.fibration_witness().unwrap();
        assert_eq!(x, ObjId(0));
        assert_ne!(eg.tgt(a), ObjId(0));
        // Full, faithful, essentially surjective: 𝔼(ℤ/2) ≃ ∗.
        assert!(f.is_weak_equivalence());
    }

    #[test]
    fn inclusion_missing_a_component() {
        let point = arc(FiniteGroupoid::terminal());
        let u = arc(FiniteGroupoid::disjoint_union(&[
            &FiniteGroupoid::terminal(),
            &FiniteGroupoid::bg(&FiniteGroup::cyclic(2)),
        ]));
        let f = GroupoidMap::new_functor(point, u, vec![ObjId(0)], vec![MorId(0)]).unwrap();
        assert!(f.is_full() && f.is_faithful());
        assert_eq!(f.essential_surjectivity_witness(), Some(ObjId(1)));
        assert!(!f.is_weak_equivalence());
    }

    #[test]
    fn rejects_non_functor() {
        let b2 = arc(FiniteGroupoid::bg(&FiniteGroup::cyclic(2)));
        // Swapping identity and generator does not preserve identities.
        let err = GroupoidMap::new_functor(b2.clone(), b2, vec![ObjId(0)], vec![MorId(1), MorId(0)]);
        assert!(matches!(err, Err(MapError::NotFunctor(_))));
    }

    #[test]
    fn quotient_z4_by_z2() {
        let z4 = FiniteGroup::cyclic(4);
        let q = quotient_comparison(&GroupAction::left_multiplication(&z4), &[0, 2]).unwrap();
        assert!(q.map.is_functor());
        assert!(q.is_acyclic_fibration());
        assert_eq!(q.quotient_action.len(), 2);
        assert_eq!(q.quotient_action.group().order(), 2);
        let cod = q.map.cod();
        assert_eq!((cod.obj_count(), cod.mor_count()), (2, 4));
    }

    #[test]
    fn quotient_by_trivial_subgroup() {
        let s3 = FiniteGroup::symmetric(3);
        let h = s3.closure(&[s3.find("(1 2)").unwrap()]);
        let a = GroupAction::on_cosets(&s3, &h);
        let q = quotient_comparison(&a, &[0]).unwrap();
        assert!(q.is_acyclic_fibration());
        assert!(q.map.is_isomorphism());
    }

    #[test]
    fn quotient_errors() {
        let z2 = FiniteGroup::cyclic(2);
        let err = quotient_comparison(&GroupAction::on_point(&z2), &[0, 1]).unwrap_err();
        assert_eq!(err, QuotientError::NotFree { element: 1, point: 0 });
        let s3 = FiniteGroup::symmetric(3);
        let t = s3.find("(1 2)").unwrap();
        let err = quotient_comparison(&GroupAction::left_multiplication(&s3), &[0, t]).unwrap_err();
        assert!(matches!(err, QuotientError::NotNormal { .. }));
    }
}
