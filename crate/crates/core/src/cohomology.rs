//! Nonabelian `H¹(ℤ/2; G)` for an involution on a finite group, and the
//! decomposition of `(𝔹G)^{hΓ}` into classifying groupoids of twisted
//! centralizers.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::functor::GroupoidMap;
use crate::gamma::{hfp, GammaAction, Hfp, HfpObject};
use crate::group::{FiniteGroup, GroupAction, Subgroup};
use crate::groupoid::{FiniteGroupoid, MorId, ObjId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("involution has {found} entries, group has order {expected}")]
    Length { expected: usize, found: usize },
    #[error("map is not a group automorphism")]
    NotAutomorphism,
    #[error("map does not square to the identity")]
    NotInvolutive,
}

/// A group with an involutive automorphism `g ↦ ḡ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupGammaAction {
    group: FiniteGroup,
    bar: Vec<usize>,
}

impl GroupGammaAction {
    pub fn new(group: FiniteGroup, bar: Vec<usize>) -> Result<Self, CohomologyError> {
        if bar.len() != group.order() {
            return Err(CohomologyError::Length { expected: group.order(), found: bar.len() });
        }
        if !group.is_automorphism(&bar) {
            return Err(CohomologyError::NotAutomorphism);
        }
        if !group.is_involution(&bar) {
            return Err(CohomologyError::NotInvolutive);
        }
        Ok(Self { group, bar })
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        let bar = group.identity_map();
        Self { group, bar }
    }

    /// The diagonal involution on `G × H`.
    pub fn product(a: &Self, b: &Self) -> Self {
        let group = FiniteGroup::direct_product(&a.group, &b.group);
        let nb = b.group.order();
        let bar = group.elements().map(|g| a.bar[g / nb] * nb + b.bar[g % nb]).collect();
        Self { group, bar }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    #[inline]
    pub fn bar(&self, g: usize) -> usize {
        self.bar[g]
    }

    pub fn bar_table(&self) -> &[usize] {
        &self.bar
    }

    /// The induced action on `𝔹G`.
    pub fn bg_action(&self) -> GammaAction {
        let carrier = Arc::new(FiniteGroupoid::bg(&self.group));
        GammaAction::new(carrier, vec![ObjId(0)], self.bar.iter().map(|&g| MorId(g)).collect())
            .expect("an involutive automorphism acts on 𝔹G")
    }

    /// `g·σ = ḡσg⁻¹`.
    pub fn twist(&self, g: usize, sigma: usize) -> usize {
        let gr = &self.group;
        gr.mul(gr.mul(self.bar[g], sigma), gr.inv(g))
    }

    pub fn is_cocycle(&self, sigma: usize) -> bool {
        self.group.mul(sigma, self.bar[sigma]) == self.group.identity()
    }

    /// `K_σ = {g | ḡσ = σg}`.
    pub fn twisted_centralizer(&self, sigma: usize) -> Subgroup {
        let gr = &self.group;
        let elems: Vec<usize> =
            gr.elements().filter(|&g| gr.mul(self.bar[g], sigma) == gr.mul(sigma, g)).collect();
        Subgroup::new(gr, &elems).expect("twisted centralizers are subgroups")
    }

    /// Twisted conjugation on `Z¹`, points numbered in increasing order.
    pub fn cocycle_action(&self) -> (GroupAction, Vec<usize>) {
        let z = z1(self);
        let mut index = vec![usize::MAX; self.group.order()];
        for (i, &s) in z.iter().enumerate() {
            index[s] = i;
        }
        let labels = z.iter().map(|&s| self.group.label(s).to_string()).collect();
        let action = GroupAction::new(self.group.clone(), labels, |g, i| index[self.twist(g, z[i])])
            .expect("twisted conjugation preserves cocycles");
        (action, z)
    }
}

/// `Z¹ = {σ | σσ̄ = 1}`, ascending.
pub fn z1(a: &GroupGammaAction) -> Vec<usize> {
    a.group.elements().filter(|&s| a.is_cocycle(s)).collect()
}

/// A twisted-conjugation class of cocycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub stabilizer: Subgroup,
}

/// Classes ordered by their minimal member.
pub fn h1(a: &GroupGammaAction) -> Vec<CocycleClass> {
    let (action, z) = a.cocycle_action();
    action
        .orbits()
        .into_iter()
        .map(|o| CocycleClass {
            representative: z[o.representative],
            members: o.members.iter().map(|&i| z[i]).collect(),
            stabilizer: o.stabilizer,
        })
        .collect()
}

/// `Σ 1/|K_σ|` over the classes.
pub fn class_mass(classes: &[CocycleClass]) -> BigRational {
    classes.iter().fold(BigRational::zero(), |acc, c| {
        acc + BigRational::new(One::one(), c.stabilizer.order().into())
    })
}

/// The comparison `⊔ 𝔹K_σ → (𝔹G)^{hΓ}`.
#[derive(Debug, Clone)]
pub struct BgDecomposition {
    pub classes: Vec<CocycleClass>,
    pub hfp: Hfp,
    pub map: GroupoidMap,
    pub weak_equivalence: bool,
}

pub fn bg_hfp_decomposition(a: &GroupGammaAction) -> BgDecomposition {
    let classes = h1(a);
    let h = hfp(&a.bg_action());
    let pieces: Vec<(FiniteGroup, Vec<usize>)> =
        classes.iter().map(|c| c.stabilizer.as_group(&a.group)).collect();
    let bgs: Vec<FiniteGroupoid> = pieces.iter().map(|(k, _)| FiniteGroupoid::bg(k)).collect();
    let dom = Arc::new(FiniteGroupoid::disjoint_union(&bgs.iter().collect::<Vec<_>>()));

    let mut obj_map = Vec::new();
    let mut mor_map = Vec::new();
    for (c, (_, embedding)) in classes.iter().zip(&pieces) {
        let o = h
            .find_object(HfpObject { base: ObjId(0), phi: MorId(c.representative) })
            .expect("every cocycle is a fixed point");
        obj_map.push(o);
        mor_map.extend(embedding.iter().map(|&k| h.find_arrow(o, MorId(k)).expect("arrows exist over every α")));
    }
    let map = GroupoidMap::new(dom, h.groupoid().clone(), obj_map, mor_map).expect("decomposition tables are in range");
    let weak_equivalence = map.is_functor() && map.is_weak_equivalence();
    BgDecomposition { classes, hfp: h, map, weak_equivalence }
}

/// One isomorphism class of a groupoid with its automorphism group.
#[derive(Debug, Clone)]
pub struct SkeletonPiece {
    pub representative: ObjId,
    /// Element `i` of `group` is `automorphisms[i]`.
    pub automorphisms: Vec<MorId>,
    pub group: FiniteGroup,
}

#[derive(Debug, Clone)]
pub struct Skeleton {
    pub pieces: Vec<SkeletonPiece>,
    pub map: GroupoidMap,
    pub weak_equivalence: bool,
}

impl Skeleton {
    pub fn cardinality(&self) -> BigRational {
        self.pieces.iter().fold(BigRational::zero(), |acc, p| {
            acc + BigRational::new(One::one(), p.group.order().into())
        })
    }
}

/// `⊔ᵢ 𝔹Gᵢ → g`, one piece per component at its minimal object.
pub fn skeletonize(g: &Arc<FiniteGroupoid>) -> Skeleton {
    let comps = g.components();
    let mut pieces = Vec::new();
    for &r in &comps.representatives {
        let auts = g.automorphisms(r);
        let pos = |m: MorId| auts.iter().position(|&a| a == m).expect("closed under composition");
        let table = (0..auts.len())
            .map(|a| (0..auts.len()).map(|b| pos(g.then(auts[b], auts[a]))).collect())
            .collect();
        let labels = auts.iter().map(|&m| g.mor_label(m).to_string()).collect();
        let group = FiniteGroup::from_table(labels, table).expect("automorphisms of a valid groupoid form a group");
        pieces.push(SkeletonPiece { representative: r, automorphisms: auts, group });
    }
    let bgs: Vec<FiniteGroupoid> = pieces.iter().map(|p| FiniteGroupoid::bg(&p.group)).collect();
    let dom = Arc::new(FiniteGroupoid::disjoint_union(&bgs.iter().collect::<Vec<_>>()));
    let obj_map = pieces.iter().map(|p| p.representative).collect();
    let mor_map = pieces.iter().flat_map(|p| p.automorphisms.iter().copied()).collect();
    let map = GroupoidMap::new(dom, g.clone(), obj_map, mor_map).expect("skeleton tables are in range");
    let weak_equivalence = map.is_functor() && map.is_weak_equivalence();
    Skeleton { pieces, map, weak_equivalence }
}
