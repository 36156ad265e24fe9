//! The twisted-conjugation parameter space of a group with an involution
//! and a stable subgroup, built one section at a time.
//!
//! For `(G, θ, B)` the groupoid `𝔼_{B×B}G` carries the involution
//! `ḡ = θ(g⁻¹)`, `(b₁,b₂)‾ = (θb₂, θb₁)`. Its homotopy fixed points are
//! identified with `𝔼_{B×B}X`, then `𝔼_{B×B}Y`, and finally mapped onto
//! `𝔼_B Z` where `Z = {g | gθ(g) = 1}` carries `b·g = θ(b)gb⁻¹`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::functor::{quotient_comparison, GroupoidMap};
use crate::gamma::{hfp, GammaAction, Hfp, HfpObject};
use crate::group::{FiniteGroup, GroupAction, Subgroup};
use crate::groupoid::{FiniteGroupoid, MorId, ObjId};

/// One reason a triple `(G, θ, B)` is unusable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataIssue {
    ThetaLength { expected: usize, found: usize },
    ThetaNotAutomorphism,
    ThetaNotInvolutive,
    SubgroupOutOfRange(usize),
    NotSubgroup(String),
    NotThetaStable { element: usize },
}

impl fmt::Display for DataIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataIssue::ThetaLength { expected, found } => {
                write!(f, "theta has {found} entries, group has order {expected}")
            }
            DataIssue::ThetaNotAutomorphism => write!(f, "theta is not an automorphism"),
            DataIssue::ThetaNotInvolutive => write!(f, "theta does not square to the identity"),
            DataIssue::SubgroupOutOfRange(g) => write!(f, "subgroup element {g} out of range"),
            DataIssue::NotSubgroup(why) => write!(f, "B is not a subgroup: {why}"),
            DataIssue::NotThetaStable { element } => write!(f, "theta moves {element} out of B"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistedError {
    #[error("invalid data: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<DataIssue>),
}

/// Empty iff `θ` is an involutive automorphism and `B` a `θ`-stable subgroup.
pub fn validate_involutive_data(group: &FiniteGroup, theta: &[usize], subgroup: &[usize]) -> Vec<DataIssue> {
    let mut issues = Vec::new();
    if theta.len() != group.order() {
        issues.push(DataIssue::ThetaLength { expected: group.order(), found: theta.len() });
    } else {
        if !group.is_automorphism(theta) {
            issues.push(DataIssue::ThetaNotAutomorphism);
        }
        if !group.is_involution(theta) {
            issues.push(DataIssue::ThetaNotInvolutive);
        }
    }
    if let Some(&g) = subgroup.iter().find(|&&g| g >= group.order()) {
        issues.push(DataIssue::SubgroupOutOfRange(g));
        return issues;
    }
    match Subgroup::new(group, subgroup) {
        Err(e) => issues.push(DataIssue::NotSubgroup(e.to_string())),
        Ok(b) if theta.len() == group.order() => {
            if let Some(&element) = b.elements().iter().find(|&&g| !b.contains(theta[g])) {
                issues.push(DataIssue::NotThetaStable { element });
            }
        }
        Ok(_) => {}
    }
    issues
}

/// A validated triple `(G, θ, B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutiveGroupData {
    group: FiniteGroup,
    theta: Vec<usize>,
    subgroup: Subgroup,
    b_group: FiniteGroup,
    /// `embedding[i]` is the element of `G` that is element `i` of `B`.
    embedding: Vec<usize>,
}

impl InvolutiveGroupData {
    pub fn new(group: FiniteGroup, theta: Vec<usize>, subgroup: &[usize]) -> Result<Self, TwistedError> {
        let issues = validate_involutive_data(&group, &theta, subgroup);
        if !issues.is_empty() {
            return Err(TwistedError::Invalid(issues));
        }
        let subgroup = Subgroup::new(&group, subgroup).expect("validated");
        let (b_group, embedding) = subgroup.as_group(&group);
        Ok(Self { group, theta, subgroup, b_group, embedding })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn theta(&self) -> &[usize] {
        &self.theta
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// `B` as a group in its own right.
    pub fn b_group(&self) -> &FiniteGroup {
        &self.b_group
    }

    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    fn b_index(&self, g: usize) -> usize {
        self.subgroup.position(g).expect("element of B")
    }

    /// `θ` restricted to `B`, on `B`-indices.
    fn theta_b(&self, i: usize) -> usize {
        self.b_index(self.theta[self.embedding[i]])
    }

    fn bb_group(&self) -> FiniteGroup {
        FiniteGroup::direct_product(&self.b_group, &self.b_group)
    }
}

/// `(b₁,b₂)·g = b₁gb₂⁻¹`, with `(b₁,b₂)` numbered `i·|B| + j`.
pub fn double_coset_action(d: &InvolutiveGroupData) -> GroupAction {
    let g = &d.group;
    let nb = d.b_group.order();
    GroupAction::new(d.bb_group(), g.labels().to_vec(), |p, x| {
        let (b1, b2) = (d.embedding[p / nb], d.embedding[p % nb]);
        g.mul(g.mul(b1, x), g.inv(b2))
    })
    .expect("two-sided multiplication is an action")
}

/// `𝔼_{B×B}G` with `ḡ = θ(g⁻¹)` and `(b₁,b₂)‾ = (θb₂, θb₁)`.
pub fn build_double_coset_groupoid(d: &InvolutiveGroupData) -> GammaAction {
    let action = double_coset_action(d);
    let carrier = Arc::new(FiniteGroupoid::action_groupoid(&action));
    let g = &d.group;
    let (ng, nb) = (g.order(), d.b_group.order());
    let bar_g = |x: usize| d.theta[g.inv(x)];
    let bar_obj = g.elements().map(|x| ObjId(bar_g(x))).collect();
    let bar_mor = (0..nb * nb * ng)
        .map(|m| {
            let (p, x) = (m / ng, m % ng);
            let (i, j) = (p / nb, p % nb);
            let q = d.theta_b(j) * nb + d.theta_b(i);
            MorId(q * ng + bar_g(x))
        })
        .collect();
    GammaAction::new(carrier, bar_obj, bar_mor).expect("the double coset involution is an action")
}

/// `Z = {g | gθ(g) = 1}` with `B` acting by `b·g = θ(b)gb⁻¹`.
#[derive(Debug, Clone)]
pub struct TwistedCocycleSet {
    /// Ascending element ids of `G`.
    pub elements: Vec<usize>,
    /// `B` (as [`InvolutiveGroupData::b_group`]) acting on positions in
    /// `elements`.
    pub action: GroupAction,
}

impl TwistedCocycleSet {
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }
}

pub fn z1_theta(d: &InvolutiveGroupData) -> TwistedCocycleSet {
    let g = &d.group;
    let elements: Vec<usize> = g.elements().filter(|&x| g.mul(x, d.theta[x]) == g.identity()).collect();
    let mut index = HashMap::new();
    for (i, &x) in elements.iter().enumerate() {
        index.insert(x, i);
    }
    let labels = elements.iter().map(|&x| g.label(x).to_string()).collect();
    let action = GroupAction::new(d.b_group.clone(), labels, |i, z| {
        let b = d.embedding[i];
        index[&g.mul(g.mul(d.theta[b], elements[z]), g.inv(b))]
    })
    .expect("twisted conjugation preserves Z");
    TwistedCocycleSet { elements, action }
}

/// An orbit of twisted conjugation, in element ids of `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedOrbit {
    pub representative: usize,
    pub members: Vec<usize>,
    /// The stabilizer of the representative, as a subgroup of `G`.
    pub stabilizer: Subgroup,
}

pub fn twisted_orbits(d: &InvolutiveGroupData) -> Vec<TwistedOrbit> {
    let z = z1_theta(d);
    z.action
        .orbits()
        .into_iter()
        .map(|o| {
            let stab: Vec<usize> = o.stabilizer.elements().iter().map(|&i| d.embedding[i]).collect();
            TwistedOrbit {
                representative: z.elements[o.representative],
                members: o.members.iter().map(|&i| z.elements[i]).collect(),
                stabilizer: Subgroup::new(&d.group, &stab).expect("stabilizers are subgroups"),
            }
        })
        .collect()
}

/// `Σ 1/|Stab|` over orbits.
pub fn orbit_mass(orbits: &[TwistedOrbit]) -> BigRational {
    orbits.iter().fold(BigRational::zero(), |acc, o| {
        acc + BigRational::new(One::one(), o.stabilizer.order().into())
    })
}

/// The `B×B`-sets `X` and `Y` and the bijection between them.
///
/// Points are stored in `B`-indices for `b`'s and `G`-ids for `g`.
#[derive(Debug, Clone)]
pub struct XyIsomorphism {
    pub x_points: Vec<(usize, usize, usize)>,
    pub y_points: Vec<(usize, usize)>,
    pub x_action: GroupAction,
    pub y_action: GroupAction,
    /// `(b₁,b₂,g) ↦ (b₁,g)`.
    pub forward: Vec<usize>,
    /// `(b,g) ↦ (b, θ(b⁻¹), g)`.
    pub inverse: Vec<usize>,
    pub mutually_inverse: bool,
    pub equivariant: bool,
}

pub fn xy_isomorphism(d: &InvolutiveGroupData) -> XyIsomorphism {
    let g = &d.group;
    let nb = d.b_group.order();
    let bb = d.bb_group();
    let e = |i: usize| d.embedding[i];
    let bar_g = |x: usize| d.theta[g.inv(x)];

    let mut x_points = Vec::new();
    for x in g.elements() {
        for i in 0..nb {
            for j in 0..nb {
                let moved = g.mul(g.mul(e(i), x), g.inv(e(j)));
                if moved == bar_g(x) && g.mul(e(i), d.theta[e(j)]) == g.identity() {
                    x_points.push((i, j, x));
                }
            }
        }
    }
    let mut y_points = Vec::new();
    for i in 0..nb {
        for x in g.elements() {
            let bx = g.mul(e(i), x);
            if g.mul(bx, d.theta[bx]) == g.identity() {
                y_points.push((i, x));
            }
        }
    }
    let x_index: HashMap<_, _> = x_points.iter().enumerate().map(|(n, &p)| (p, n)).collect();
    let y_index: HashMap<_, _> = y_points.iter().enumerate().map(|(n, &p)| (p, n)).collect();

    // (c₁,c₂)·(b₁,b₂,g) = (θc₂·b₁·c₁⁻¹, θc₁·b₂·c₂⁻¹, c₁gc₂⁻¹)
    let bmul = |a: usize, b: usize| d.b_group.mul(a, b);
    let binv = |a: usize| d.b_group.inv(a);
    let x_labels = x_points
        .iter()
        .map(|&(i, j, x)| format!("({},{},{})", g.label(e(i)), g.label(e(j)), g.label(x)))
        .collect();
    let x_action = GroupAction::new(bb.clone(), x_labels, |p, n| {
        let (c1, c2) = (p / nb, p % nb);
        let (b1, b2, x) = x_points[n];
        let b1n = bmul(bmul(d.theta_b(c2), b1), binv(c1));
        let b2n = bmul(bmul(d.theta_b(c1), b2), binv(c2));
        let xn = g.mul(g.mul(e(c1), x), g.inv(e(c2)));
        x_index[&(b1n, b2n, xn)]
    })
    .expect("X is closed under the B×B action");
    let y_labels = y_points.iter().map(|&(i, x)| format!("({},{})", g.label(e(i)), g.label(x))).collect();
    let y_action = GroupAction::new(bb, y_labels, |p, n| {
        let (c1, c2) = (p / nb, p % nb);
        let (b, x) = y_points[n];
        let bn = bmul(bmul(d.theta_b(c2), b), binv(c1));
        let xn = g.mul(g.mul(e(c1), x), g.inv(e(c2)));
        y_index[&(bn, xn)]
    })
    .expect("Y is closed under the B×B action");

    let forward: Vec<usize> = x_points.iter().map(|&(i, _, x)| y_index[&(i, x)]).collect();
    let inverse: Vec<usize> = y_points
        .iter()
        .map(|&(i, x)| {
            let j = d.b_index(d.theta[g.inv(e(i))]);
            x_index.get(&(i, j, x)).copied().unwrap_or(usize::MAX)
        })
        .collect();
    let mutually_inverse = x_points.len() == y_points.len()
        && (0..x_points.len()).all(|n| inverse.get(forward[n]) == Some(&n))
        && (0..y_points.len()).all(|n| forward.get(inverse[n]) == Some(&n));
    let equivariant = x_action.group().elements().all(|p| {
        (0..x_points.len()).all(|n| forward[x_action.act(p, n)] == y_action.act(p, forward[n]))
    });
    XyIsomorphism { x_points, y_points, x_action, y_action, forward, inverse, mutually_inverse, equivariant }
}

/// The composite `hfp ≅ 𝔼X ≅ 𝔼Y → 𝔼_B Z` with every intermediate check.
#[derive(Debug, Clone)]
pub struct ParameterFibration {
    pub hfp: Hfp,
    pub xy: XyIsomorphism,
    pub cocycles: TwistedCocycleSet,
    pub hfp_to_x: GroupoidMap,
    pub x_to_y: GroupoidMap,
    pub y_to_z: GroupoidMap,
    /// The composite.
    pub map: GroupoidMap,
    pub fibration: bool,
    pub weak_equivalence: bool,
    /// `B×1` acts freely on `Y`; this is the kernel of `Y → Z` on groups.
    pub kernel_free: bool,
    /// `1×B` acts freely on `Y`.
    pub right_factor_free: bool,
    /// The generic quotient comparison by `B×1` is an acyclic fibration
    /// onto a groupoid of the same shape as `𝔼_B Z`.
    pub quotient_agrees: bool,
    pub intermediate_isomorphisms: bool,
}

impl ParameterFibration {
    pub fn verdict(&self) -> (bool, bool) {
        (self.fibration, self.weak_equivalence)
    }

    pub fn codomain(&self) -> &Arc<FiniteGroupoid> {
        self.map.cod()
    }
}

pub fn parameter_fibration(d: &InvolutiveGroupData) -> ParameterFibration {
    let g = &d.group;
    let (ng, nb) = (g.order(), d.b_group.order());
    let action = build_double_coset_groupoid(d);
    let h = hfp(&action);
    let xy = xy_isomorphism(d);
    let cocycles = z1_theta(d);
    let ex = Arc::new(FiniteGroupoid::action_groupoid(&xy.x_action));
    let ey = Arc::new(FiniteGroupoid::action_groupoid(&xy.y_action));
    let ez = Arc::new(FiniteGroupoid::action_groupoid(&cocycles.action));
    let (nx, ny, nz) = (xy.x_points.len(), xy.y_points.len(), cocycles.elements.len());

    let x_index: HashMap<_, _> = xy.x_points.iter().enumerate().map(|(n, &p)| (p, n)).collect();
    let x_of = |o: HfpObject| {
        let (p, x) = (o.phi.0 / ng, o.phi.0 % ng);
        debug_assert_eq!(x, o.base.0);
        x_index[&(p / nb, p % nb, x)]
    };
    let hx_obj: Vec<ObjId> = h.objects().iter().map(|&o| ObjId(x_of(o))).collect();
    let hx_mor: Vec<MorId> = h
        .groupoid()
        .morphisms()
        .map(|m| {
            let p = h.underlying(m).0 / ng;
            MorId(p * nx + hx_obj[h.groupoid().src(m).0].0)
        })
        .collect();
    let hfp_to_x = GroupoidMap::new(h.groupoid().clone(), ex.clone(), hx_obj, hx_mor).expect("in range");

    let xy_obj: Vec<ObjId> = xy.forward.iter().map(|&n| ObjId(n)).collect();
    let xy_mor: Vec<MorId> = ex
        .morphisms()
        .map(|m| MorId((m.0 / nx) * ny + xy.forward[m.0 % nx]))
        .collect();
    let x_to_y = GroupoidMap::new(ex, ey.clone(), xy_obj, xy_mor).expect("in range");

    let z_of_y: Vec<usize> = xy
        .y_points
        .iter()
        .map(|&(i, x)| cocycles.position(g.mul(d.embedding[i], x)).expect("bg lies in Z"))
        .collect();
    let yz_obj: Vec<ObjId> = z_of_y.iter().map(|&z| ObjId(z)).collect();
    let yz_mor: Vec<MorId> = ey
        .morphisms()
        .map(|m| {
            let c2 = (m.0 / ny) % nb;
            MorId(c2 * nz + z_of_y[m.0 % ny])
        })
        .collect();
    let y_to_z = GroupoidMap::new(ey, ez, yz_obj, yz_mor).expect("in range");

    let intermediate_isomorphisms = xy.mutually_inverse
        && xy.equivariant
        && hfp_to_x.is_functor()
        && hfp_to_x.is_isomorphism()
        && x_to_y.is_functor()
        && x_to_y.is_isomorphism()
        && y_to_z.is_functor();
    let map = hfp_to_x.then(&x_to_y).and_then(|f| f.then(&y_to_z)).expect("composable");
    let fibration = map.is_functor() && map.is_fibration();
    let weak_equivalence = map.is_functor() && map.is_weak_equivalence();

    let left: Vec<usize> = (0..nb).map(|i| i * nb).collect();
    let right: Vec<usize> = (0..nb).collect();
    let kernel_free = xy.y_action.free_witness(&left).is_none();
    let right_factor_free = xy.y_action.free_witness(&right).is_none();
    let quotient_agrees = match quotient_comparison(&xy.y_action, &left) {
        Ok(q) => {
            let cod = q.map.cod();
            q.is_acyclic_fibration()
                && cod.obj_count() == map.cod().obj_count()
                && cod.mor_count() == map.cod().mor_count()
                && cod.cardinality() == map.cod().cardinality()
        }
        Err(_) => false,
    };

    ParameterFibration {
        hfp: h,
        xy,
        cocycles,
        hfp_to_x,
        x_to_y,
        y_to_z,
        map,
        fibration,
        weak_equivalence,
        kernel_free,
        right_factor_free,
        quotient_agrees,
        intermediate_isomorphisms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{h1, GroupGammaAction};

    fn s3_id() -> InvolutiveGroupData {
        let g = FiniteGroup::symmetric(3);
        let t = g.find("(1 2)").unwrap();
        let theta = g.identity_map();
        InvolutiveGroupData::new(g, theta, &[0, t]).unwrap()
    }

    fn z4_neg() -> InvolutiveGroupData {
        let g = FiniteGroup::cyclic(4);
        let theta = g.inversion();
        InvolutiveGroupData::new(g, theta, &[0, 2]).unwrap()
    }

    fn trivial() -> InvolutiveGroupData {
        InvolutiveGroupData::new(FiniteGroup::trivial(), vec![0], &[0]).unwrap()
    }

    #[test]
    fn validation_reports() {
        let g = FiniteGroup::symmetric(3);
        let (a, b) = (g.find("(1 2)").unwrap(), g.find("(1 3)").unwrap());
        let issues = validate_involutive_data(&g, &g.identity_map(), &[0, a, b]);
        assert!(matches!(issues.as_slice(), [DataIssue::NotSubgroup(_)]));
        let z4 = FiniteGroup::cyclic(4);
        assert!(validate_involutive_data(&z4, &z4.inversion(), &[0, 2]).is_empty());
        // Conjugation by (12) does not preserve ⟨(13)⟩.
        let issues = validate_involutive_data(&g, &g.conjugation(a), &[0, b]);
        assert_eq!(issues, vec![DataIssue::NotThetaStable { element: b }]);
        assert!(InvolutiveGroupData::new(z4, vec![0, 1, 2], &[0]).is_err());
    }

    #[test]
    fn double_coset_shapes() {
        let a = build_double_coset_groupoid(&s3_id());
        assert_eq!((a.carrier().obj_count(), a.carrier().mor_count()), (6, 24));
        let a = build_double_coset_groupoid(&z4_neg());
        assert_eq!((a.carrier().obj_count(), a.carrier().mor_count()), (4, 16));
        let a = build_double_coset_groupoid(&trivial());
        assert!(a.carrier().same_tables(&FiniteGroupoid::terminal()) && a.is_trivial());
    }

    #[test]
    fn cocycles_and_orbits() {
        let d = s3_id();
        let g = d.group();
        let labels = |v: &[usize]| {
            let mut l: Vec<String> = v.iter().map(|&x| g.label(x).to_string()).collect();
            l.sort();
            l
        };
        assert_eq!(labels(&z1_theta(&d).elements), ["()", "(1 2)", "(1 3)", "(2 3)"]);
        let o = twisted_orbits(&d);
        let mut table: Vec<_> = o.iter().map(|o| (labels(&o.members), o.stabilizer.order())).collect();
        table.sort();
        let expect = |m: &[&str], k| (m.iter().map(|s| s.to_string()).collect::<Vec<_>>(), k);
        assert_eq!(table, vec![expect(&["()"], 2), expect(&["(1 2)"], 2), expect(&["(1 3)", "(2 3)"], 1)]);

        let o = twisted_orbits(&z4_neg());
        assert_eq!(o.len(), 4);
        assert!(o.iter().all(|o| o.members.len() == 1 && o.stabilizer.order() == 2));
        assert_eq!(twisted_orbits(&trivial()).len(), 1);
    }

    #[test]
    fn xy_sizes() {
        for (d, n) in [(trivial(), 1), (s3_id(), 8), (z4_neg(), 8)] {
            let xy = xy_isomorphism(&d);
            assert_eq!((xy.x_points.len(), xy.y_points.len()), (n, n));
            assert!(xy.mutually_inverse && xy.equivariant);
        }
    }

    #[test]
    fn parameter_examples() {
        let two = BigRational::from_integer(2.into());
        let p = parameter_fibration(&trivial());
        assert!(p.map.is_isomorphism());

        let p = parameter_fibration(&s3_id());
        assert_eq!(p.verdict(), (true, true));
        assert!(p.intermediate_isomorphisms && p.kernel_free && p.right_factor_free && p.quotient_agrees);
        assert_eq!((p.codomain().obj_count(), p.codomain().mor_count()), (4, 8));
        assert_eq!(p.codomain().cardinality(), two);
        assert_eq!(p.hfp.groupoid().obj_count(), 8);
        assert_eq!(p.hfp.groupoid().components().count(), 3);
        assert_eq!(p.hfp.groupoid().cardinality(), two);

        let p = parameter_fibration(&z4_neg());
        assert_eq!(p.verdict(), (true, true));
        assert_eq!(p.codomain().cardinality(), two);
    }

    #[test]
    fn whole_group_matches_h1() {
        let g = FiniteGroup::symmetric(3);
        let t = g.find("(1 2)").unwrap();
        let theta = g.conjugation(t);
        let all: Vec<usize> = g.elements().collect();
        let d = InvolutiveGroupData::new(g.clone(), theta.clone(), &all).unwrap();
        let a = GroupGammaAction::new(g, theta).unwrap();
        let orbits: Vec<_> = twisted_orbits(&d).into_iter().map(|o| (o.members, o.stabilizer)).collect();
        let classes: Vec<_> = h1(&a).into_iter().map(|c| (c.members, c.stabilizer)).collect();
        assert_eq!(orbits, classes);
    }
}
