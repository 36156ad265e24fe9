//! ℤ/2-actions on finite groupoids and homotopy fixed points.
//!
//! An object of `X^{hΓ}` is a pair `(x, φ)` with `φ: x → x̄` and `φ̄ = φ⁻¹`.
//! An arrow `(x, φ) → (x₁, φ₁)` is a morphism `α: x → x₁` with `φ₁α = ᾱφ`;
//! with diagrammatic composition this reads
//! `compose(α, φ₁) == compose(φ, ᾱ)`. Given `(x, φ)` and `α`, the target
//! `φ₁ = ᾱφα⁻¹` is forced, so arrows are enumerated as (source, α) pairs.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::functor::{same_groupoid, GroupoidMap};
use crate::groupoid::{FiniteGroupoid, GroupoidParts, MorId, ObjId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("action tables have lengths ({objects}, {morphisms}), expected ({expected_objects}, {expected_morphisms})")]
    Length { objects: usize, morphisms: usize, expected_objects: usize, expected_morphisms: usize },
    #[error("carrier is not a groupoid: {0}")]
    Carrier(crate::groupoid::Violation),
    #[error("invalid Γ-action: {0}")]
    Invalid(GammaViolation),
    #[error("map is not Γ-equivariant: {0}")]
    NotEquivariant(EquivarianceWitness),
    #[error("action carrier differs from the map's {0}")]
    CarrierMismatch(&'static str),
    #[error("involution on the set has wrong length or is not an involution")]
    BadSetInvolution,
}

/// A failed axiom of a Γ-action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaViolation {
    ObjectRange(ObjId),
    MorphismRange(MorId),
    NotInvolutiveOnObject(ObjId),
    NotInvolutiveOnMorphism(MorId),
    Source(MorId),
    Target(MorId),
    Identity(ObjId),
    Inverse(MorId),
    Composition(MorId, MorId),
}

impl fmt::Display for GammaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaViolation::ObjectRange(x) => write!(f, "image of {x} out of range"),
            GammaViolation::MorphismRange(m) => write!(f, "image of {m} out of range"),
            GammaViolation::NotInvolutiveOnObject(x) => write!(f, "bar(bar({x})) != {x}"),
            GammaViolation::NotInvolutiveOnMorphism(m) => write!(f, "bar(bar({m})) != {m}"),
            GammaViolation::Source(m) => write!(f, "src(bar {m}) != bar(src {m})"),
            GammaViolation::Target(m) => write!(f, "tgt(bar {m}) != bar(tgt {m})"),
            GammaViolation::Identity(x) => write!(f, "bar(id {x}) != id(bar {x})"),
            GammaViolation::Inverse(m) => write!(f, "bar(inv {m}) != inv(bar {m})"),
            GammaViolation::Composition(a, b) => write!(f, "bar does not preserve the composite of ({a}, {b})"),
        }
    }
}

/// Where equivariance of a map fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivarianceWitness {
    Object(ObjId),
    Morphism(MorId),
}

impl fmt::Display for EquivarianceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivarianceWitness::Object(x) => write!(f, "f(bar {x}) != bar(f {x})"),
            EquivarianceWitness::Morphism(m) => write!(f, "f(bar {m}) != bar(f {m})"),
        }
    }
}

/// An action of Γ = ℤ/2 on a groupoid: an involution `x ↦ x̄`, `α ↦ ᾱ`
/// commuting with every structure map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaAction {
    carrier: Arc<FiniteGroupoid>,
    bar_obj: Vec<ObjId>,
    bar_mor: Vec<MorId>,
}

impl GammaAction {
    /// Checks that the carrier is a groupoid and that the tables define an
    /// action on it.
    pub fn new(carrier: Arc<FiniteGroupoid>, bar_obj: Vec<ObjId>, bar_mor: Vec<MorId>) -> Result<Self, GammaError> {
        if let Some(v) = carrier.validate().into_iter().next() {
            return Err(GammaError::Carrier(v));
        }
        Self::on_valid_carrier(carrier, bar_obj, bar_mor)
    }

    /// For carriers already known to be groupoids.
    fn on_valid_carrier(carrier: Arc<FiniteGroupoid>, bar_obj: Vec<ObjId>, bar_mor: Vec<MorId>) -> Result<Self, GammaError> {
        if bar_obj.len() != carrier.obj_count() || bar_mor.len() != carrier.mor_count() {
            return Err(GammaError::Length {
                objects: bar_obj.len(),
                morphisms: bar_mor.len(),
                expected_objects: carrier.obj_count(),
                expected_morphisms: carrier.mor_count(),
            });
        }
        let violations = Self::violations(&carrier, &bar_obj, &bar_mor);
        match violations.into_iter().next() {
            Some(v) => Err(GammaError::Invalid(v)),
            None => Ok(Self { carrier, bar_obj, bar_mor }),
        }
    }

    /// Every failed action axiom for the given tables (lengths assumed).
    pub fn violations(carrier: &FiniteGroupoid, bar_obj: &[ObjId], bar_mor: &[MorId]) -> Vec<GammaViolation> {
        let mut out = Vec::new();
        for x in carrier.objects() {
            if bar_obj[x.0].0 >= carrier.obj_count() {
                out.push(GammaViolation::ObjectRange(x));
            }
        }
        for m in carrier.morphisms() {
            if bar_mor[m.0].0 >= carrier.mor_count() {
                out.push(GammaViolation::MorphismRange(m));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let bo = |x: ObjId| bar_obj[x.0];
        let bm = |m: MorId| bar_mor[m.0];
        for x in carrier.objects() {
            if bo(bo(x)) != x {
                out.push(GammaViolation::NotInvolutiveOnObject(x));
            }
            if bm(carrier.identity(x)) != carrier.identity(bo(x)) {
                out.push(GammaViolation::Identity(x));
            }
        }
        for m in carrier.morphisms() {
            if bm(bm(m)) != m {
                out.push(GammaViolation::NotInvolutiveOnMorphism(m));
            }
            if carrier.src(bm(m)) != bo(carrier.src(m)) {
                out.push(GammaViolation::Source(m));
            }
            if carrier.tgt(bm(m)) != bo(carrier.tgt(m)) {
                out.push(GammaViolation::Target(m));
            }
            if bm(carrier.inverse(m)) != carrier.inverse(bm(m)) {
                out.push(GammaViolation::Inverse(m));
            }
        }
        for a in carrier.morphisms() {
            for &b in carrier.outgoing(carrier.tgt(a)) {
                let lhs = carrier.compose(a, b).map(bm);
                let rhs = carrier.compose(bm(a), bm(b));
                if lhs.is_none() || lhs != rhs {
                    out.push(GammaViolation::Composition(a, b));
                }
            }
        }
        out
    }

    /// The trivial action `x̄ = x`. Panics if the carrier is not a groupoid.
    pub fn trivial(carrier: Arc<FiniteGroupoid>) -> Self {
        let bar_obj = carrier.objects().collect();
        let bar_mor = carrier.morphisms().collect();
        Self::new(carrier, bar_obj, bar_mor).expect("trivial action on a groupoid")
    }

    /// A set with an involution, viewed as a discrete groupoid.
    pub fn on_set(labels: Vec<String>, involution: &[usize]) -> Result<Self, GammaError> {
        let n = labels.len();
        if involution.len() != n || involution.iter().enumerate().any(|(i, &j)| j >= n || involution[j] != i) {
            return Err(GammaError::BadSetInvolution);
        }
        let carrier = Arc::new(FiniteGroupoid::discrete(labels));
        let bar_obj = involution.iter().map(|&j| ObjId(j)).collect();
        let bar_mor = involution.iter().map(|&j| MorId(j)).collect();
        Self::on_valid_carrier(carrier, bar_obj, bar_mor)
    }

    /// `(x₀, x₁) ↦ (x₁, x₀)` on `X × X`, with the product numbering of
    /// [`FiniteGroupoid::product`].
    ///
    /// Panics if `x` is not a groupoid.
    pub fn swap(x: &FiniteGroupoid) -> Self {
        assert!(x.is_valid(), "swap action needs a groupoid");
        let carrier = Arc::new(FiniteGroupoid::product(x, x));
        let (no, nm) = (x.obj_count(), x.mor_count());
        let bar_obj = (0..no * no).map(|i| ObjId((i % no) * no + i / no)).collect();
        let bar_mor = (0..nm * nm).map(|i| MorId((i % nm) * nm + i / nm)).collect();
        Self::on_valid_carrier(carrier, bar_obj, bar_mor).expect("swap is an action")
    }

    /// Componentwise action on a disjoint union.
    pub fn disjoint_union(actions: &[&GammaAction]) -> Self {
        let carriers: Vec<&FiniteGroupoid> = actions.iter().map(|a| &*a.carrier).collect();
        let carrier = Arc::new(FiniteGroupoid::disjoint_union(&carriers));
        let (mut bar_obj, mut bar_mor) = (Vec::new(), Vec::new());
        let (mut oo, mut mo) = (0, 0);
        for a in actions {
            bar_obj.extend(a.bar_obj.iter().map(|x| ObjId(x.0 + oo)));
            bar_mor.extend(a.bar_mor.iter().map(|m| MorId(m.0 + mo)));
            oo += a.carrier.obj_count();
            mo += a.carrier.mor_count();
        }
        Self::on_valid_carrier(carrier, bar_obj, bar_mor).expect("union of actions is an action")
    }

    /// Diagonal action on a product.
    pub fn product(a: &GammaAction, b: &GammaAction) -> Self {
        let carrier = Arc::new(FiniteGroupoid::product(&a.carrier, &b.carrier));
        let (bo, bm) = (b.carrier.obj_count(), b.carrier.mor_count());
        let mut bar_obj = Vec::with_capacity(carrier.obj_count());
        for x in a.carrier.objects() {
            for y in b.carrier.objects() {
                bar_obj.push(ObjId(a.bar_obj(x).0 * bo + b.bar_obj(y).0));
            }
        }
        let mut bar_mor = Vec::with_capacity(carrier.mor_count());
        for m in a.carrier.morphisms() {
            for n in b.carrier.morphisms() {
                bar_mor.push(MorId(a.bar_mor(m).0 * bm + b.bar_mor(n).0));
            }
        }
        Self::on_valid_carrier(carrier, bar_obj, bar_mor).expect("product of actions is an action")
    }

    /// The action `A ⊔ A` where Γ exchanges the two copies (and acts by
    /// `a` inside them).
    pub fn exchange_copies(a: &GammaAction) -> Self {
        let carrier = Arc::new(FiniteGroupoid::disjoint_union(&[&a.carrier, &a.carrier]));
        let (no, nm) = (a.carrier.obj_count(), a.carrier.mor_count());
        let bar_obj = (0..2 * no)
            .map(|i| if i < no { ObjId(a.bar_obj[i].0 + no) } else { a.bar_obj[i - no] })
            .collect();
        let bar_mor = (0..2 * nm)
            .map(|i| if i < nm { MorId(a.bar_mor[i].0 + nm) } else { a.bar_mor[i - nm] })
            .collect();
        Self::on_valid_carrier(carrier, bar_obj, bar_mor).expect("exchange of copies is an action")
    }

    /// The same action transported along a renumbering of the carrier.
    pub fn relabeled(&self, obj_perm: &[usize], mor_perm: &[usize]) -> (Self, GroupoidMap) {
        let carrier = Arc::new(self.carrier.relabeled(obj_perm, mor_perm));
        let mut bar_obj = vec![ObjId(0); carrier.obj_count()];
        let mut bar_mor = vec![MorId(0); carrier.mor_count()];
        for x in self.carrier.objects() {
            bar_obj[obj_perm[x.0]] = ObjId(obj_perm[self.bar_obj(x).0]);
        }
        for m in self.carrier.morphisms() {
            bar_mor[mor_perm[m.0]] = MorId(mor_perm[self.bar_mor(m).0]);
        }
        let iso = GroupoidMap::new(
            self.carrier.clone(),
            carrier.clone(),
            obj_perm.iter().map(|&i| ObjId(i)).collect(),
            mor_perm.iter().map(|&i| MorId(i)).collect(),
        )
        .expect("permutations are in range");
        (Self::on_valid_carrier(carrier, bar_obj, bar_mor).expect("relabeling preserves the action"), iso)
    }

    pub fn carrier(&self) -> &Arc<FiniteGroupoid> {
        &self.carrier
    }

    #[inline]
    pub fn bar_obj(&self, x: ObjId) -> ObjId {
        self.bar_obj[x.0]
    }

    #[inline]
    pub fn bar_mor(&self, m: MorId) -> MorId {
        self.bar_mor[m.0]
    }

    pub fn bar_obj_table(&self) -> &[ObjId] {
        &self.bar_obj
    }

    pub fn bar_mor_table(&self) -> &[MorId] {
        &self.bar_mor
    }

    pub fn is_trivial(&self) -> bool {
        self.carrier.objects().all(|x| self.bar_obj(x) == x) && self.carrier.morphisms().all(|m| self.bar_mor(m) == m)
    }
}

/// An object `(x, φ)` of the homotopy fixed point groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HfpObject {
    pub base: ObjId,
    pub phi: MorId,
}

/// The homotopy fixed point groupoid together with the bookkeeping that
/// identifies its objects with pairs `(x, φ)` and its arrows with the
/// underlying morphisms `α` of the carrier.
#[derive(Debug, Clone)]
pub struct Hfp {
    carrier: Arc<FiniteGroupoid>,
    groupoid: Arc<FiniteGroupoid>,
    objects: Vec<HfpObject>,
    underlying: Vec<MorId>,
    object_index: HashMap<HfpObject, ObjId>,
    arrow_index: HashMap<(ObjId, MorId), MorId>,
}

/// `X^{hΓ}`. Objects are ordered lexicographically by `(x, φ)`; arrows by
/// `(source, α)`.
pub fn hfp(action: &GammaAction) -> Hfp {
    let x = &*action.carrier;
    let mut objects = Vec::new();
    for base in x.objects() {
        let bar = action.bar_obj(base);
        for &phi in x.outgoing(base) {
            if x.tgt(phi) == bar && action.bar_mor(phi) == x.inverse(phi) {
                objects.push(HfpObject { base, phi });
            }
        }
    }
    let object_index: HashMap<HfpObject, ObjId> =
        objects.iter().enumerate().map(|(i, &o)| (o, ObjId(i))).collect();

    let mut parts = GroupoidParts::default();
    let mut underlying = Vec::new();
    let mut arrow_index = HashMap::new();
    let mut outgoing: Vec<Vec<MorId>> = vec![Vec::new(); objects.len()];
    for (i, o) in objects.iter().enumerate() {
        parts.obj_labels.push(format!("({},{})", x.obj_label(o.base), x.mor_label(o.phi)));
        for &alpha in x.outgoing(o.base) {
            // φ₁ = ᾱ φ α⁻¹, i.e. α⁻¹ then φ then ᾱ.
            let phi1 = x.then(x.then(x.inverse(alpha), o.phi), action.bar_mor(alpha));
            let target = object_index[&HfpObject { base: x.tgt(alpha), phi: phi1 }];
            let id = MorId(underlying.len());
            arrow_index.insert((ObjId(i), alpha), id);
            outgoing[i].push(id);
            underlying.push(alpha);
            parts.mor_labels.push(format!("{}@{}", x.mor_label(alpha), parts.obj_labels[i]));
            parts.src.push(ObjId(i));
            parts.tgt.push(target);
        }
    }
    for (i, o) in objects.iter().enumerate() {
        parts.identity.push(arrow_index[&(ObjId(i), x.identity(o.base))]);
    }
    for (m, &alpha) in underlying.iter().enumerate() {
        let t = parts.tgt[m];
        parts.inverse.push(arrow_index[&(t, x.inverse(alpha))]);
        for &next in &outgoing[t.0] {
            let composite = arrow_index[&(parts.src[m], x.then(alpha, underlying[next.0]))];
            parts.composition.push((MorId(m), next, composite));
        }
    }
    let groupoid = Arc::new(FiniteGroupoid::from_parts(parts).expect("hfp tables are well-shaped"));
    Hfp { carrier: action.carrier.clone(), groupoid, objects, underlying, object_index, arrow_index }
}

impl Hfp {
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn carrier(&self) -> &Arc<FiniteGroupoid> {
        &self.carrier
    }

    pub fn objects(&self) -> &[HfpObject] {
        &self.objects
    }

    pub fn object(&self, o: ObjId) -> HfpObject {
        self.objects[o.0]
    }

    /// The carrier morphism `α` an arrow corresponds to.
    pub fn underlying(&self, m: MorId) -> MorId {
        self.underlying[m.0]
    }

    pub fn find_object(&self, o: HfpObject) -> Option<ObjId> {
        self.object_index.get(&o).copied()
    }

    /// The arrow out of `source` lying over `alpha`.
    pub fn find_arrow(&self, source: ObjId, alpha: MorId) -> Option<MorId> {
        self.arrow_index.get(&(source, alpha)).copied()
    }

    /// The projection `ι: (x, φ) ↦ x`.
    pub fn iota(&self) -> GroupoidMap {
        GroupoidMap::new(
            self.groupoid.clone(),
            self.carrier.clone(),
            self.objects.iter().map(|o| o.base).collect(),
            self.underlying.clone(),
        )
        .expect("iota tables are in range")
    }
}

/// The projection `ι: X^{hΓ} → X`, together with `X^{hΓ}`.
pub fn iota(action: &GammaAction) -> (Hfp, GroupoidMap) {
    let h = hfp(action);
    let i = h.iota();
    (h, i)
}

/// A map of groupoids commuting with Γ-actions on both sides.
#[derive(Debug, Clone)]
pub struct EquivariantMap {
    map: GroupoidMap,
    dom: GammaAction,
    cod: GammaAction,
}

impl EquivariantMap {
    pub fn new(map: GroupoidMap, dom: GammaAction, cod: GammaAction) -> Result<Self, GammaError> {
        if !same_groupoid(map.dom(), dom.carrier()) {
            return Err(GammaError::CarrierMismatch("domain"));
        }
        if !same_groupoid(map.cod(), cod.carrier()) {
            return Err(GammaError::CarrierMismatch("codomain"));
        }
        if let Some(w) = equivariance_witness(&map, &dom, &cod) {
            return Err(GammaError::NotEquivariant(w));
        }
        Ok(Self { map, dom, cod })
    }

    pub fn identity(action: &GammaAction) -> Self {
        Self {
            map: GroupoidMap::identity(action.carrier.clone()),
            dom: action.clone(),
            cod: action.clone(),
        }
    }

    pub fn map(&self) -> &GroupoidMap {
        &self.map
    }

    pub fn dom(&self) -> &GammaAction {
        &self.dom
    }

    pub fn cod(&self) -> &GammaAction {
        &self.cod
    }

    /// `self` then `next`.
    pub fn then(&self, next: &EquivariantMap) -> Result<EquivariantMap, GammaError> {
        let map = self.map.then(&next.map).map_err(|_| GammaError::CarrierMismatch("codomain"))?;
        Ok(Self { map, dom: self.dom.clone(), cod: next.cod.clone() })
    }
}

/// First object or morphism where `f∘bar ≠ bar∘f`.
pub fn equivariance_witness(f: &GroupoidMap, dom: &GammaAction, cod: &GammaAction) -> Option<EquivarianceWitness> {
    let d = f.dom();
    if let Some(x) = d.objects().find(|&x| f.obj(dom.bar_obj(x)) != cod.bar_obj(f.obj(x))) {
        return Some(EquivarianceWitness::Object(x));
    }
    d.morphisms()
        .find(|&m| f.mor(dom.bar_mor(m)) != cod.bar_mor(f.mor(m)))
        .map(EquivarianceWitness::Morphism)
}

/// `f^{hΓ}` between already computed fixed point groupoids:
/// `(x, φ) ↦ (f(x), f(φ))` and `α ↦ f(α)`.
pub fn hfp_map_between(f: &EquivariantMap, dom: &Hfp, cod: &Hfp) -> GroupoidMap {
    let g = f.map();
    let obj_map: Vec<ObjId> = dom
        .objects
        .iter()
        .map(|o| {
            cod.find_object(HfpObject { base: g.obj(o.base), phi: g.mor(o.phi) })
                .expect("equivariant maps send fixed points to fixed points")
        })
        .collect();
    let mor_map = (0..dom.underlying.len())
        .map(|m| {
            let source = obj_map[dom.groupoid.src(MorId(m)).0];
            cod.find_arrow(source, g.mor(dom.underlying[m]))
                .expect("equivariant maps send fixed point arrows to arrows")
        })
        .collect();
    GroupoidMap::new(dom.groupoid.clone(), cod.groupoid.clone(), obj_map, mor_map).expect("hfp map tables are in range")
}

/// `f^{hΓ}` together with both fixed point groupoids.
#[derive(Debug, Clone)]
pub struct HfpMap {
    pub dom: Hfp,
    pub cod: Hfp,
    pub map: GroupoidMap,
}

pub fn hfp_map(f: &EquivariantMap) -> HfpMap {
    let dom = hfp(f.dom());
    let cod = hfp(f.cod());
    let map = hfp_map_between(f, &dom, &cod);
    HfpMap { dom, cod, map }
}

/// The comparison `X → (X × X)^{hΓ}`, `x ↦ ((x, x), (id, id))`.
#[derive(Debug, Clone)]
pub struct SwapComparison {
    pub action: GammaAction,
    pub hfp: Hfp,
    pub map: GroupoidMap,
    pub weak_equivalence: bool,
}

pub fn swap_action(x: &FiniteGroupoid) -> GammaAction {
    GammaAction::swap(x)
}

pub fn swap_comparison(x: Arc<FiniteGroupoid>) -> SwapComparison {
    let action = GammaAction::swap(&x);
    let h = hfp(&action);
    let (no, nm) = (x.obj_count(), x.mor_count());
    let obj_map: Vec<ObjId> = x
        .objects()
        .map(|o| {
            let id = x.identity(o).0;
            h.find_object(HfpObject { base: ObjId(o.0 * no + o.0), phi: MorId(id * nm + id) })
                .expect("(x, x, id) is a fixed point")
        })
        .collect();
    let mor_map = x
        .morphisms()
        .map(|m| {
            h.find_arrow(obj_map[x.src(m).0], MorId(m.0 * nm + m.0))
                .expect("(α, α) is a fixed point arrow")
        })
        .collect();
    let map = GroupoidMap::new(x, h.groupoid.clone(), obj_map, mor_map).expect("swap comparison tables are in range");
    let weak_equivalence = map.is_weak_equivalence();
    SwapComparison { action, hfp: h, map, weak_equivalence }
}

pub fn trivial_action(x: Arc<FiniteGroupoid>) -> GammaAction {
    GammaAction::trivial(x)
}

pub fn set_as_groupoid(labels: Vec<String>, involution: &[usize]) -> Result<GammaAction, GammaError> {
    GammaAction::on_set(labels, involution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use num_rational::BigRational;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn swap_on_two_point_set_has_no_fixed_points() {
        let a = GammaAction::on_set(labels(&["a", "b"]), &[1, 0]).unwrap();
        let h = hfp(&a);
        assert_eq!(h.groupoid().obj_count(), 0);
        assert!(h.iota().is_fibration());
    }

    #[test]
    fn fixed_set_of_involution() {
        let a = GammaAction::on_set(labels(&["a", "b", "c"]), &[1, 0, 2]).unwrap();
        let h = hfp(&a);
        assert_eq!(h.groupoid().obj_count(), 1);
        assert_eq!(h.groupoid().mor_count(), 1);
        assert_eq!(h.object(ObjId(0)).base, ObjId(2));
    }

    #[test]
    fn trivial_action_on_discrete_set() {
        let g = Arc::new(FiniteGroupoid::discrete(labels(&["a", "b", "c"])));
        let h = hfp(&GammaAction::trivial(g.clone()));
        assert_eq!(h.groupoid().obj_count(), 3);
        assert!(h.groupoid().is_discrete());
        assert!(h.iota().is_isomorphism());
    }

    #[test]
    fn trivial_action_on_bz2() {
        let g = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(2)));
        let (h, i) = iota(&GammaAction::trivial(g));
        let hg = h.groupoid();
        assert_eq!(hg.obj_count(), 2);
        assert_eq!(hg.components().count(), 2);
        assert!(hg.objects().all(|o| hg.automorphisms(o).len() == 2));
        assert!(hg.is_valid());
        assert!(i.is_functor() && i.is_fibration());
    }

    #[test]
    fn trivial_action_on_bz3() {
        let g = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(3)));
        let h = hfp(&GammaAction::trivial(g));
        let hg = h.groupoid();
        assert_eq!(hg.obj_count(), 1);
        assert_eq!(h.object(ObjId(0)).phi, MorId(0));
        assert_eq!(hg.automorphisms(ObjId(0)).len(), 3);
    }

    #[test]
    fn swap_comparisons() {
        let point = Arc::new(FiniteGroupoid::terminal());
        let s = swap_comparison(point);
        assert!(s.map.is_isomorphism());

        let two = Arc::new(FiniteGroupoid::discrete(labels(&["a", "b"])));
        let s = swap_comparison(two);
        assert_eq!(s.hfp.groupoid().components().count(), 2);
        assert!(s.weak_equivalence);

        let b3 = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(3)));
        let s = swap_comparison(b3);
        let hg = s.hfp.groupoid();
        assert_eq!(hg.components().count(), 1);
        assert_eq!(hg.automorphisms(ObjId(0)).len(), 3);
        assert!(s.weak_equivalence);

        let bs3 = Arc::new(FiniteGroupoid::bg(&FiniteGroup::symmetric(3)));
        let s = swap_comparison(bs3.clone());
        assert!(s.weak_equivalence);
        assert_eq!(s.hfp.groupoid().cardinality(), BigRational::new(1.into(), 6.into()));
        assert_eq!(bs3.cardinality(), s.hfp.groupoid().cardinality());
    }

    #[test]
    fn non_equivariant_map_is_rejected() {
        let two = Arc::new(FiniteGroupoid::discrete(labels(&["a", "b"])));
        let dom = GammaAction::trivial(two.clone());
        let cod = GammaAction::on_set(labels(&["a", "b"]), &[1, 0]).unwrap();
        let cod = GammaAction::new(two.clone(), cod.bar_obj_table().to_vec(), cod.bar_mor_table().to_vec()).unwrap();
        let err = EquivariantMap::new(GroupoidMap::identity(two), dom, cod).unwrap_err();
        assert_eq!(err, GammaError::NotEquivariant(EquivarianceWitness::Object(ObjId(0))));
    }

    #[test]
    fn invalid_action_is_rejected() {
        let b3 = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(3)));
        // x ↦ 2x is an automorphism of ℤ/3 of order 2; x ↦ x+1 is not a map of groupoids.
        assert!(GammaAction::new(b3.clone(), vec![ObjId(0)], vec![MorId(0), MorId(2), MorId(1)]).is_ok());
        let err = GammaAction::new(b3, vec![ObjId(0)], vec![MorId(1), MorId(2), MorId(0)]).unwrap_err();
        assert!(matches!(err, GammaError::Invalid(_)));
    }
}
