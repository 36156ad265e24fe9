//! Presheaves of groupoids on finite topological spaces.
//!
//! Opens are bitmasks over the points. A restriction `X(U) → X(V)` exists
//! for every `V ⊆ U`, and composites hold on the nose. Stalks are computed
//! as colimits over the neighbourhoods of a point.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::colimit::{
    colimit_of, hfp_colimit_comparison, induced_colimit_map, Colimit, ColimitError, Diagram, FilteredDiagram,
    GammaDiagram, IndexCategory,
};
use crate::functor::{same_groupoid, GroupoidMap};
use crate::gamma::{equivariance_witness, hfp, hfp_map_between, EquivariantMap, GammaAction, Hfp};
use crate::group::{FiniteGroup, GroupAction};
use crate::groupoid::{FiniteGroupoid, MorId, ObjId};
use crate::twisted::{parameter_fibration, InvolutiveGroupData, ParameterFibration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("at most 64 points are supported")]
    TooManyPoints,
    #[error("open {0:#b} mentions a point that does not exist")]
    OutOfRange(u64),
    #[error("the empty set is not open")]
    NoBottom,
    #[error("the whole space is not open")]
    NoTop,
    #[error("{0:#b} ∩ {1:#b} is not open")]
    NotMeetClosed(u64, u64),
}

/// A finite space given by its opens, closed under intersection and
/// containing `∅` and the whole space. Opens are numbered by
/// `(size, mask)`, so `∅` is open `0` and the whole space is last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSite {
    points: Vec<String>,
    opens: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl FiniteSite {
    pub fn new(points: Vec<String>, opens: impl IntoIterator<Item = u64>) -> Result<Self, SiteError> {
        if points.len() > 64 {
            return Err(SiteError::TooManyPoints);
        }
        let top = if points.len() == 64 { u64::MAX } else { (1u64 << points.len()) - 1 };
        let mut opens: Vec<u64> = opens.into_iter().collect();
        if let Some(&u) = opens.iter().find(|&&u| u & !top != 0) {
            return Err(SiteError::OutOfRange(u));
        }
        opens.sort_unstable_by_key(|&u| (u.count_ones(), u));
        opens.dedup();
        if !opens.contains(&0) {
            return Err(SiteError::NoBottom);
        }
        if !opens.contains(&top) {
            return Err(SiteError::NoTop);
        }
        for &u in &opens {
            for &v in &opens {
                if opens.binary_search_by_key(&((u & v).count_ones(), u & v), |&w| (w.count_ones(), w)).is_err() {
                    return Err(SiteError::NotMeetClosed(u, v));
                }
            }
        }
        let index = opens.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        Ok(Self { points, opens, index })
    }

    /// One point, opens `∅` and `{p}`.
    pub fn point() -> Self {
        Self::new(vec!["p".into()], [0, 1]).expect("point")
    }

    /// Opens `∅ ⊂ {a} ⊂ {a,b}`.
    pub fn sierpinski() -> Self {
        Self::new(vec!["a".into(), "b".into()], [0, 0b01, 0b11]).expect("Sierpinski space")
    }

    /// Every subset open.
    pub fn discrete(points: Vec<String>) -> Self {
        let n = points.len();
        Self::new(points, 0..(1u64 << n)).expect("discrete space")
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    pub fn opens(&self) -> std::ops::Range<usize> {
        0..self.opens.len()
    }

    pub fn mask(&self, u: usize) -> u64 {
        self.opens[u]
    }

    pub fn find_open(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn top(&self) -> usize {
        self.opens.len() - 1
    }

    pub fn contains(&self, u: usize, t: usize) -> bool {
        self.opens[u] >> t & 1 == 1
    }

    pub fn is_subset(&self, v: usize, u: usize) -> bool {
        self.opens[v] & !self.opens[u] == 0
    }

    pub fn open_label(&self, u: usize) -> String {
        let names: Vec<&str> =
            (0..self.points.len()).filter(|&t| self.contains(u, t)).map(|t| self.points[t].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// The opens containing `t`, in open order.
    pub fn neighborhoods(&self, t: usize) -> Vec<usize> {
        self.opens().filter(|&u| self.contains(u, t)).collect()
    }

    /// The intersection of all neighbourhoods of `t`.
    pub fn minimal_open(&self, t: usize) -> usize {
        let m = self.neighborhoods(t).into_iter().fold(self.opens[self.top()], |acc, u| acc & self.opens[u]);
        self.index[&m]
    }

    /// Pairs `(U, V)` with `V ⊆ U`, ordered by `U` then `V`.
    pub fn inclusions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.opens().flat_map(move |u| self.opens().filter(move |&v| self.is_subset(v, u)).map(move |v| (u, v)))
    }

    /// Distinct opens are told apart by some point. True for any family of
    /// subsets; kept as an explicit check of the stalkwise detection
    /// assumption.
    pub fn points_separate_opens(&self) -> bool {
        self.opens()
            .all(|u| self.opens().all(|v| u == v || (0..self.point_count()).any(|t| self.contains(u, t) != self.contains(v, t))))
    }

    /// Neighbourhoods of `t` as a poset with an arrow `U → V` when `V ⊆ U`.
    pub fn neighborhood_index(&self, t: usize) -> (IndexCategory, Vec<usize>) {
        let nbhd = self.neighborhoods(t);
        let labels = nbhd.iter().map(|&u| self.open_label(u)).collect();
        let mut relations = Vec::new();
        for (i, &u) in nbhd.iter().enumerate() {
            for (j, &v) in nbhd.iter().enumerate() {
                if i != j && self.is_subset(v, u) {
                    relations.push((i, j));
                }
            }
        }
        (IndexCategory::poset(labels, &relations).expect("inclusion is a partial order"), nbhd)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresheafError {
    #[error("expected {expected} sections, found {found}")]
    Count { expected: usize, found: usize },
    #[error("section over open {0} is not a valid groupoid")]
    InvalidSection(usize),
    #[error("restriction {0} → {1} is not along an inclusion")]
    NotInclusion(usize, usize),
    #[error("restriction {0} → {1} has the wrong domain or codomain")]
    Endpoints(usize, usize),
    #[error("restriction {0} → {1} is not a functor")]
    NotFunctor(usize, usize),
    #[error("restriction {0} → {0} is not the identity")]
    Identity(usize),
    #[error("restrictions {0} → {1} → {2} do not compose strictly")]
    NotStrict(usize, usize, usize),
    #[error("no restriction {0} → {1}")]
    Missing(usize, usize),
    #[error("presheaves live on different sites")]
    SiteMismatch,
    #[error("map at open {0} has the wrong domain or codomain")]
    MapEndpoints(usize),
    #[error("map is not natural at {0} → {1}")]
    NotNatural(usize, usize),
    #[error("action at open {0} is on a different groupoid")]
    ActionCarrier(usize),
    #[error("restriction {0} → {1} is not equivariant")]
    NotEquivariant(usize, usize),
    #[error("group data at open {0}: {1}")]
    Group(usize, String),
}

fn same_map(f: &GroupoidMap, g: &GroupoidMap) -> bool {
    f.obj_map() == g.obj_map() && f.mor_map() == g.mor_map()
}

/// A strict presheaf of groupoids.
#[derive(Debug, Clone)]
pub struct GroupoidPresheaf {
    site: Arc<FiniteSite>,
    sections: Vec<Arc<FiniteGroupoid>>,
    restrictions: BTreeMap<(usize, usize), GroupoidMap>,
}

impl GroupoidPresheaf {
    /// Restrictions may be given for any generating set of inclusions;
    /// identities and composites are filled in and every composite that
    /// can be formed in two ways must agree.
    pub fn new(
        site: Arc<FiniteSite>,
        sections: Vec<Arc<FiniteGroupoid>>,
        generators: Vec<((usize, usize), GroupoidMap)>,
    ) -> Result<Self, PresheafError> {
        let n = site.open_count();
        if sections.len() != n {
            return Err(PresheafError::Count { expected: n, found: sections.len() });
        }
        if let Some(u) = sections.iter().position(|g| !g.is_valid()) {
            return Err(PresheafError::InvalidSection(u));
        }
        let mut res: BTreeMap<(usize, usize), GroupoidMap> = BTreeMap::new();
        for ((u, v), f) in generators {
            if u >= n || v >= n || !site.is_subset(v, u) {
                return Err(PresheafError::NotInclusion(u, v));
            }
            if !same_groupoid(f.dom(), &sections[u]) || !same_groupoid(f.cod(), &sections[v]) {
                return Err(PresheafError::Endpoints(u, v));
            }
            if !f.is_functor() {
                return Err(PresheafError::NotFunctor(u, v));
            }
            if u == v && !same_map(&f, &GroupoidMap::identity(sections[u].clone())) {
                return Err(PresheafError::Identity(u));
            }
            if let Some(g) = res.get(&(u, v)) {
                if !same_map(g, &f) {
                    return Err(PresheafError::NotStrict(u, u, v));
                }
            }
            res.insert((u, v), f);
        }
        for u in site.opens() {
            res.entry((u, u)).or_insert_with(|| GroupoidMap::identity(sections[u].clone()));
        }
        loop {
            let mut added = Vec::new();
            for (&(u, v), f) in &res {
                for (&(v2, w), g) in res.range((v, 0)..=(v, usize::MAX)) {
                    debug_assert_eq!(v, v2);
                    let h = f.then(g).expect("endpoints checked");
                    match res.get(&(u, w)) {
                        Some(k) if !same_map(k, &h) => return Err(PresheafError::NotStrict(u, v, w)),
                        Some(_) => {}
                        None => added.push(((u, w), h)),
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            for (k, h) in added {
                res.entry(k).or_insert(h);
            }
        }
        if let Some((u, v)) = site.inclusions().find(|k| !res.contains_key(k)) {
            return Err(PresheafError::Missing(u, v));
        }
        Ok(Self { site, sections, restrictions: res })
    }

    /// The same groupoid over every open, identity restrictions.
    pub fn constant(site: Arc<FiniteSite>, g: Arc<FiniteGroupoid>) -> Self {
        let sections = vec![g; site.open_count()];
        let gens = site.inclusions().map(|(u, v)| ((u, v), GroupoidMap::identity(sections[u].clone()))).collect();
        Self::new(site, sections, gens).expect("constant presheaf")
    }

    pub fn site(&self) -> &Arc<FiniteSite> {
        &self.site
    }

    pub fn sections(&self) -> &[Arc<FiniteGroupoid>] {
        &self.sections
    }

    pub fn section(&self, u: usize) -> &Arc<FiniteGroupoid> {
        &self.sections[u]
    }

    pub fn restriction(&self, u: usize, v: usize) -> &GroupoidMap {
        &self.restrictions[&(u, v)]
    }

    /// The neighbourhood diagram of `t`.
    pub fn neighborhood_diagram(&self, t: usize) -> (Diagram, Vec<usize>) {
        let (index, nbhd) = self.site.neighborhood_index(t);
        let nodes = nbhd.iter().map(|&u| self.sections[u].clone()).collect();
        let maps = index
            .arrows()
            .map(|a| self.restriction(nbhd[index.src(a)], nbhd[index.tgt(a)]).clone())
            .collect();
        (Diagram::new(Arc::new(index), nodes, maps).expect("restrictions are strict"), nbhd)
    }

    pub fn stalk(&self, t: usize) -> Stalk {
        stalk(self, t)
    }
}

/// A stalk together with the neighbourhoods it was computed over.
#[derive(Debug, Clone)]
pub struct Stalk {
    pub colimit: Colimit,
    pub neighborhoods: Vec<usize>,
    /// The cocone leg from `X(U_t)` is an isomorphism.
    pub matches_minimal_open: bool,
}

impl Stalk {
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.colimit.groupoid
    }
}

pub fn stalk(x: &GroupoidPresheaf, t: usize) -> Stalk {
    let (d, nbhd) = x.neighborhood_diagram(t);
    let colimit = colimit_of(&d).expect("neighbourhood filters are filtered");
    let ut = x.site.minimal_open(t);
    let leg = nbhd.iter().position(|&u| u == ut).expect("U_t is a neighbourhood");
    let matches_minimal_open = colimit.cocone[leg].is_isomorphism();
    Stalk { colimit, neighborhoods: nbhd, matches_minimal_open }
}

/// A natural transformation of presheaves on the same site.
#[derive(Debug, Clone)]
pub struct PresheafMap {
    dom: Arc<GroupoidPresheaf>,
    cod: Arc<GroupoidPresheaf>,
    components: Vec<GroupoidMap>,
}

impl PresheafMap {
    pub fn new(
        dom: Arc<GroupoidPresheaf>,
        cod: Arc<GroupoidPresheaf>,
        components: Vec<GroupoidMap>,
    ) -> Result<Self, PresheafError> {
        if !Arc::ptr_eq(&dom.site, &cod.site) && dom.site != cod.site {
            return Err(PresheafError::SiteMismatch);
        }
        if components.len() != dom.site.open_count() {
            return Err(PresheafError::Count { expected: dom.site.open_count(), found: components.len() });
        }
        for (u, f) in components.iter().enumerate() {
            if !same_groupoid(f.dom(), &dom.sections[u]) || !same_groupoid(f.cod(), &cod.sections[u]) {
                return Err(PresheafError::MapEndpoints(u));
            }
            if !f.is_functor() {
                return Err(PresheafError::MapEndpoints(u));
            }
        }
        for (u, v) in dom.site.inclusions() {
            let left = dom.restriction(u, v).then(&components[v]).expect("endpoints checked");
            let right = components[u].then(cod.restriction(u, v)).expect("endpoints checked");
            if !same_map(&left, &right) {
                return Err(PresheafError::NotNatural(u, v));
            }
        }
        Ok(Self { dom, cod, components })
    }

    pub fn identity(x: Arc<GroupoidPresheaf>) -> Self {
        let components = x.sections.iter().map(|g| GroupoidMap::identity(g.clone())).collect();
        Self::new(x.clone(), x, components).expect("identity is natural")
    }

    pub fn dom(&self) -> &Arc<GroupoidPresheaf> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<GroupoidPresheaf> {
        &self.cod
    }

    pub fn component(&self, u: usize) -> &GroupoidMap {
        &self.components[u]
    }

    pub fn components(&self) -> &[GroupoidMap] {
        &self.components
    }

    /// The induced map of stalks at `t`.
    pub fn stalk_map(&self, t: usize) -> GroupoidMap {
        let (sx, sy) = (stalk(&self.dom, t), stalk(&self.cod, t));
        let levels: Vec<GroupoidMap> = sx.neighborhoods.iter().map(|&u| self.components[u].clone()).collect();
        induced_colimit_map(&sx.colimit, &sy.colimit, &levels).expect("natural maps induce maps of stalks")
    }

    pub fn is_sectionwise_weq(&self) -> bool {
        self.components.iter().all(GroupoidMap::is_weak_equivalence)
    }

    pub fn is_sectionwise_fib(&self) -> bool {
        self.components.iter().all(GroupoidMap::is_fibration)
    }

    pub fn is_local_weq(&self) -> bool {
        (0..self.dom.site.point_count()).all(|t| self.stalk_map(t).is_weak_equivalence())
    }

    pub fn is_local_fib(&self) -> bool {
        (0..self.dom.site.point_count()).all(|t| self.stalk_map(t).is_fibration())
    }

    /// Every stalk map is a bijection on objects and morphisms.
    pub fn is_stalkwise_isomorphism(&self) -> bool {
        (0..self.dom.site.point_count()).all(|t| self.stalk_map(t).is_isomorphism())
    }
}

pub fn is_sectionwise_weq(f: &PresheafMap) -> bool {
    f.is_sectionwise_weq()
}

pub fn is_sectionwise_fib(f: &PresheafMap) -> bool {
    f.is_sectionwise_fib()
}

pub fn is_local_weq(f: &PresheafMap) -> bool {
    f.is_local_weq()
}

pub fn is_local_fib(f: &PresheafMap) -> bool {
    f.is_local_fib()
}

/// Γ-actions on every section, compatible with restriction.
#[derive(Debug, Clone)]
pub struct PresheafGammaAction {
    presheaf: Arc<GroupoidPresheaf>,
    actions: Vec<GammaAction>,
}

impl PresheafGammaAction {
    pub fn new(presheaf: Arc<GroupoidPresheaf>, actions: Vec<GammaAction>) -> Result<Self, PresheafError> {
        if actions.len() != presheaf.sections.len() {
            return Err(PresheafError::Count { expected: presheaf.sections.len(), found: actions.len() });
        }
        for (u, a) in actions.iter().enumerate() {
            if !same_groupoid(a.carrier(), &presheaf.sections[u]) {
                return Err(PresheafError::ActionCarrier(u));
            }
        }
        for (u, v) in presheaf.site.inclusions() {
            if equivariance_witness(presheaf.restriction(u, v), &actions[u], &actions[v]).is_some() {
                return Err(PresheafError::NotEquivariant(u, v));
            }
        }
        Ok(Self { presheaf, actions })
    }

    pub fn constant(site: Arc<FiniteSite>, action: GammaAction) -> Self {
        let x = Arc::new(GroupoidPresheaf::constant(site, action.carrier().clone()));
        let actions = vec![action; x.sections.len()];
        Self::new(x, actions).expect("constant action")
    }

    pub fn presheaf(&self) -> &Arc<GroupoidPresheaf> {
        &self.presheaf
    }

    pub fn action(&self, u: usize) -> &GammaAction {
        &self.actions[u]
    }

    pub fn actions(&self) -> &[GammaAction] {
        &self.actions
    }

    /// The neighbourhood diagram of `t` with its actions.
    pub fn neighborhood_diagram(&self, t: usize) -> FilteredDiagram {
        let (d, nbhd) = self.presheaf.neighborhood_diagram(t);
        let actions = nbhd.iter().map(|&u| self.actions[u].clone()).collect();
        let gd = GammaDiagram::new(d, actions).expect("restrictions are equivariant");
        FilteredDiagram::new(gd).expect("neighbourhood filters are filtered")
    }
}

/// Sectionwise homotopy fixed points and the projection to `X`.
#[derive(Debug, Clone)]
pub struct PresheafHfp {
    pub hfps: Vec<Hfp>,
    pub presheaf: Arc<GroupoidPresheaf>,
    pub iota: PresheafMap,
}

pub fn presheaf_hfp(a: &PresheafGammaAction) -> PresheafHfp {
    let x = &a.presheaf;
    let hfps: Vec<Hfp> = a.actions.iter().map(hfp).collect();
    let gens = x
        .site
        .inclusions()
        .map(|(u, v)| {
            let f = EquivariantMap::new(x.restriction(u, v).clone(), a.actions[u].clone(), a.actions[v].clone())
                .expect("restrictions are equivariant");
            ((u, v), hfp_map_between(&f, &hfps[u], &hfps[v]))
        })
        .collect();
    let sections = hfps.iter().map(|h| h.groupoid().clone()).collect();
    let presheaf = Arc::new(GroupoidPresheaf::new(x.site.clone(), sections, gens).expect("fixed points of a strict presheaf are strict"));
    let components = hfps.iter().map(Hfp::iota).collect();
    let iota = PresheafMap::new(presheaf.clone(), x.clone(), components).expect("ι is natural");
    PresheafHfp { hfps, presheaf, iota }
}

/// Both sides of `(X^{hΓ})_t ≅ (X_t)^{hΓ}` and the canonical map.
#[derive(Debug, Clone)]
pub struct StalkCommutation {
    pub point: usize,
    /// The stalk of the fixed-point presheaf agrees with the colimit the
    /// comparison is built from.
    pub stalk_agrees: bool,
    pub isomorphism: bool,
}

pub fn stalk_commutation_check(a: &PresheafGammaAction, t: usize) -> Result<StalkCommutation, ColimitError> {
    let cmp = hfp_colimit_comparison(&a.neighborhood_diagram(t))?;
    let h = presheaf_hfp(a);
    let direct = stalk(&h.presheaf, t);
    let stalk_agrees = direct.groupoid().same_tables(&cmp.source.groupoid);
    Ok(StalkCommutation { point: t, stalk_agrees, isomorphism: cmp.isomorphism && stalk_agrees })
}

/// A strict presheaf of finite groups.
#[derive(Debug, Clone)]
pub struct GroupPresheaf {
    site: Arc<FiniteSite>,
    groups: Vec<FiniteGroup>,
    restrictions: BTreeMap<(usize, usize), Vec<usize>>,
}

impl GroupPresheaf {
    /// `restrictions` must cover every inclusion `V ⊆ U`, identities
    /// included.
    pub fn new(
        site: Arc<FiniteSite>,
        groups: Vec<FiniteGroup>,
        restrictions: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self, PresheafError> {
        if groups.len() != site.open_count() {
            return Err(PresheafError::Count { expected: site.open_count(), found: groups.len() });
        }
        for (u, v) in site.inclusions() {
            let r = restrictions.get(&(u, v)).ok_or(PresheafError::Missing(u, v))?;
            if !groups[u].is_homomorphism_to(&groups[v], r) {
                return Err(PresheafError::Group(u, format!("restriction to {v} is not a homomorphism")));
            }
            if u == v && r.iter().enumerate().any(|(i, &j)| i != j) {
                return Err(PresheafError::Identity(u));
            }
        }
        for (u, v) in site.inclusions() {
            for w in site.opens().filter(|&w| site.is_subset(w, v)) {
                let (r1, r2, r3) = (&restrictions[&(u, v)], &restrictions[&(v, w)], &restrictions[&(u, w)]);
                if (0..groups[u].order()).any(|g| r2[r1[g]] != r3[g]) {
                    return Err(PresheafError::NotStrict(u, v, w));
                }
            }
        }
        Ok(Self { site, groups, restrictions })
    }

    pub fn constant(site: Arc<FiniteSite>, g: FiniteGroup) -> Self {
        let restrictions = site.inclusions().map(|k| (k, g.identity_map())).collect();
        let groups = vec![g; site.open_count()];
        Self::new(site, groups, restrictions).expect("constant presheaf")
    }

    pub fn site(&self) -> &Arc<FiniteSite> {
        &self.site
    }

    pub fn group(&self, u: usize) -> &FiniteGroup {
        &self.groups[u]
    }

    pub fn restriction(&self, u: usize, v: usize) -> &[usize] {
        &self.restrictions[&(u, v)]
    }
}

/// A presheaf of sets with a compatible action of a presheaf of groups.
#[derive(Debug, Clone)]
pub struct GroupSetPresheaf {
    groups: GroupPresheaf,
    actions: Vec<GroupAction>,
    restrictions: BTreeMap<(usize, usize), Vec<usize>>,
}

impl GroupSetPresheaf {
    pub fn new(
        groups: GroupPresheaf,
        actions: Vec<GroupAction>,
        restrictions: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self, PresheafError> {
        let site = groups.site.clone();
        if actions.len() != site.open_count() {
            return Err(PresheafError::Count { expected: site.open_count(), found: actions.len() });
        }
        for (u, a) in actions.iter().enumerate() {
            if *a.group() != groups.groups[u] {
                return Err(PresheafError::Group(u, "action is by a different group".into()));
            }
        }
        for (u, v) in site.inclusions() {
            let r = restrictions.get(&(u, v)).ok_or(PresheafError::Missing(u, v))?;
            let rg = groups.restriction(u, v);
            if r.len() != actions[u].len() || r.iter().any(|&y| y >= actions[v].len()) {
                return Err(PresheafError::Endpoints(u, v));
            }
            if u == v && r.iter().enumerate().any(|(i, &j)| i != j) {
                return Err(PresheafError::Identity(u));
            }
            for g in actions[u].group().elements() {
                for x in 0..actions[u].len() {
                    if r[actions[u].act(g, x)] != actions[v].act(rg[g], r[x]) {
                        return Err(PresheafError::NotEquivariant(u, v));
                    }
                }
            }
            for w in site.opens().filter(|&w| site.is_subset(w, v)) {
                let (r2, r3) = (&restrictions[&(v, w)], &restrictions[&(u, w)]);
                if (0..r.len()).any(|x| r2[r[x]] != r3[x]) {
                    return Err(PresheafError::NotStrict(u, v, w));
                }
            }
        }
        Ok(Self { groups, actions, restrictions })
    }

    /// `G` acting on a point over every open.
    pub fn point(groups: GroupPresheaf) -> Self {
        let actions = groups.groups.iter().map(GroupAction::on_point).collect();
        let restrictions = groups.site.inclusions().map(|k| (k, vec![0])).collect();
        Self::new(groups, actions, restrictions).expect("the point is a G-set")
    }

    /// `G` acting on itself by left multiplication.
    pub fn regular(groups: GroupPresheaf) -> Self {
        let actions = groups.groups.iter().map(GroupAction::left_multiplication).collect();
        let restrictions = groups.restrictions.clone();
        Self::new(groups, actions, restrictions).expect("G is a G-set")
    }

    pub fn groups(&self) -> &GroupPresheaf {
        &self.groups
    }
}

/// `(𝔼_G X)(U) = 𝔼_{G(U)} X(U)` with the induced restrictions.
pub fn build_presheaf_action_groupoid(x: &GroupSetPresheaf) -> GroupoidPresheaf {
    let site = x.groups.site.clone();
    let sections: Vec<Arc<FiniteGroupoid>> =
        x.actions.iter().map(|a| Arc::new(FiniteGroupoid::action_groupoid(a))).collect();
    let gens = site
        .inclusions()
        .map(|(u, v)| {
            let (r, rg) = (&x.restrictions[&(u, v)], x.groups.restriction(u, v));
            let (nu, nv) = (x.actions[u].len(), x.actions[v].len());
            let mor = (0..sections[u].mor_count()).map(|m| MorId(rg[m / nu] * nv + r[m % nu])).collect();
            let obj = r.iter().map(|&y| ObjId(y)).collect();
            let f = GroupoidMap::new(sections[u].clone(), sections[v].clone(), obj, mor).expect("in range");
            ((u, v), f)
        })
        .collect();
    GroupoidPresheaf::new(site, sections, gens).expect("equivariant restrictions give a strict presheaf")
}

/// `(G, θ, B)` over every open, with restrictions compatible with `θ` and
/// mapping `B` into `B`.
#[derive(Debug, Clone)]
pub struct TwistedPresheaf {
    groups: GroupPresheaf,
    data: Vec<InvolutiveGroupData>,
}

impl TwistedPresheaf {
    pub fn new(groups: GroupPresheaf, data: Vec<InvolutiveGroupData>) -> Result<Self, PresheafError> {
        if data.len() != groups.groups.len() {
            return Err(PresheafError::Count { expected: groups.groups.len(), found: data.len() });
        }
        for (u, d) in data.iter().enumerate() {
            if *d.group() != groups.groups[u] {
                return Err(PresheafError::Group(u, "data is over a different group".into()));
            }
        }
        for (u, v) in groups.site.inclusions() {
            let r = groups.restriction(u, v);
            let (du, dv) = (&data[u], &data[v]);
            let compatible = du.group().elements().all(|g| r[du.theta()[g]] == dv.theta()[r[g]])
                && du.subgroup().elements().iter().all(|&b| dv.subgroup().contains(r[b]));
            if !compatible {
                return Err(PresheafError::NotEquivariant(u, v));
            }
        }
        Ok(Self { groups, data })
    }

    pub fn constant(site: Arc<FiniteSite>, d: InvolutiveGroupData) -> Self {
        let groups = GroupPresheaf::constant(site, d.group().clone());
        let data = vec![d; groups.groups.len()];
        Self::new(groups, data).expect("constant data")
    }

    pub fn groups(&self) -> &GroupPresheaf {
        &self.groups
    }

    pub fn data(&self, u: usize) -> &InvolutiveGroupData {
        &self.data[u]
    }

    /// The parameter fibration over each open.
    pub fn sections(&self) -> Vec<ParameterFibration> {
        self.data.iter().map(parameter_fibration).collect()
    }

    /// `𝔼_{B×B}G` as a presheaf with its Γ-action.
    pub fn double_coset_presheaf(&self) -> PresheafGammaAction {
        let actions: Vec<GammaAction> = self.data.iter().map(crate::twisted::build_double_coset_groupoid).collect();
        let site = self.groups.site.clone();
        let sections: Vec<Arc<FiniteGroupoid>> = actions.iter().map(|a| a.carrier().clone()).collect();
        let gens = site
            .inclusions()
            .map(|(u, v)| {
                let r = self.groups.restriction(u, v);
                let (du, dv) = (&self.data[u], &self.data[v]);
                let (ngu, ngv) = (du.group().order(), dv.group().order());
                let (nbu, nbv) = (du.b_group().order(), dv.b_group().order());
                let rb = |i: usize| dv.subgroup().position(r[du.embedding()[i]]).expect("B maps into B");
                let mor = (0..sections[u].mor_count())
                    .map(|m| {
                        let (p, g) = (m / ngu, m % ngu);
                        let q = rb(p / nbu) * nbv + rb(p % nbu);
                        MorId(q * ngv + r[g])
                    })
                    .collect();
                let obj = r.iter().map(|&g| ObjId(g)).collect();
                ((u, v), GroupoidMap::new(sections[u].clone(), sections[v].clone(), obj, mor).expect("in range"))
            })
            .collect();
        let x = Arc::new(GroupoidPresheaf::new(site, sections, gens).expect("restrictions are strict"));
        PresheafGammaAction::new(x, actions).expect("restrictions commute with the involution")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg4() -> GammaAction {
        let g = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(4)));
        GammaAction::new(g, vec![ObjId(0)], [0, 3, 2, 1].map(MorId).to_vec()).unwrap()
    }

    /// Sierpinski: `X(∅) = ∗`, `X({a}) = 𝔹ℤ/2`, `X({a,b}) = 𝔹ℤ/4`.
    fn sierpinski_bz4() -> PresheafGammaAction {
        let site = Arc::new(FiniteSite::sierpinski());
        let z4 = neg4();
        let z2 = GammaAction::trivial(Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(2))));
        let pt = GammaAction::trivial(Arc::new(FiniteGroupoid::terminal()));
        let sections = vec![pt.carrier().clone(), z2.carrier().clone(), z4.carrier().clone()];
        let reduce = GroupoidMap::new(sections[2].clone(), sections[1].clone(), vec![ObjId(0)], (0..4).map(|k| MorId(k % 2)).collect()).unwrap();
        let to_pt = GroupoidMap::to_terminal(sections[1].clone());
        let x = GroupoidPresheaf::new(site, sections, vec![((2, 1), reduce), ((1, 0), to_pt)]).unwrap();
        PresheafGammaAction::new(Arc::new(x), vec![pt, z2, z4]).unwrap()
    }

    #[test]
    fn site_basics() {
        let s = FiniteSite::sierpinski();
        assert_eq!(s.minimal_open(0), 1);
        assert_eq!(s.minimal_open(1), 2);
        assert!(s.points_separate_opens());
        assert_eq!(FiniteSite::new(vec!["a".into(), "b".into()], [0, 1, 2]), Err(SiteError::NoTop));
        let three: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        assert_eq!(FiniteSite::new(three, [0, 0b011, 0b110, 0b111]), Err(SiteError::NotMeetClosed(0b011, 0b110)));
    }

    #[test]
    fn sierpinski_stalks() {
        let a = sierpinski_bz4();
        let x = a.presheaf();
        let sa = stalk(x, 0);
        let sb = stalk(x, 1);
        assert!(sa.groupoid().same_tables(&FiniteGroupoid::bg(&FiniteGroup::cyclic(2))));
        assert!(sb.groupoid().same_tables(&FiniteGroupoid::bg(&FiniteGroup::cyclic(4))));
        assert!(sa.matches_minimal_open && sb.matches_minimal_open);
        let h = presheaf_hfp(&a);
        assert!(h.iota.is_sectionwise_fib());
        for t in 0..2 {
            let c = stalk_commutation_check(&a, t).unwrap();
            assert!(c.isomorphism && c.stalk_agrees);
        }
    }

    #[test]
    fn rejects_lax_data() {
        let site = Arc::new(FiniteSite::sierpinski());
        let z2 = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(2)));
        let swap = GroupoidMap::new(z2.clone(), z2.clone(), vec![ObjId(0)], vec![MorId(0), MorId(0)]).unwrap();
        let sections = vec![z2.clone(); 3];
        let err = GroupoidPresheaf::new(
            site,
            sections,
            vec![((2, 1), swap.clone()), ((1, 0), GroupoidMap::identity(z2.clone())), ((2, 0), GroupoidMap::identity(z2))],
        )
        .unwrap_err();
        assert_eq!(err, PresheafError::NotStrict(2, 1, 0));
    }

    /// Discrete two-point space: `X(top) = ∗ ⊔ ∗`, all other sections `∗`,
    /// mapping to the constant point.
    #[test]
    fn local_not_sectionwise() {
        let site = Arc::new(FiniteSite::discrete(vec!["a".into(), "b".into()]));
        let pt = Arc::new(FiniteGroupoid::terminal());
        let two = Arc::new(FiniteGroupoid::discrete(vec!["a".into(), "b".into()]));
        let top = site.top();
        let mut sections = vec![pt.clone(); site.open_count()];
        sections[top] = two.clone();
        let (ua, ub) = (site.find_open(0b01).unwrap(), site.find_open(0b10).unwrap());
        let to_pt = |g: &Arc<FiniteGroupoid>| GroupoidMap::to_terminal(g.clone());
        let gens = vec![((top, ua), to_pt(&two)), ((top, ub), to_pt(&two)), ((ua, 0), to_pt(&pt)), ((ub, 0), to_pt(&pt))];
        let x = Arc::new(GroupoidPresheaf::new(site.clone(), sections, gens).unwrap());
        let y = Arc::new(GroupoidPresheaf::constant(site, pt));
        let comps = x.sections().iter().map(|g| GroupoidMap::to_terminal(g.clone())).collect();
        let f = PresheafMap::new(x, y, comps).unwrap();
        assert!(f.is_local_weq());
        assert!(!f.is_sectionwise_weq());
        assert!(f.is_sectionwise_fib() && f.is_local_fib());
    }

    #[test]
    fn eg_to_point_sectionwise() {
        let site = Arc::new(FiniteSite::sierpinski());
        let gp = GroupPresheaf::constant(site.clone(), FiniteGroup::symmetric(3));
        let eg = Arc::new(build_presheaf_action_groupoid(&GroupSetPresheaf::regular(gp.clone())));
        let bg = build_presheaf_action_groupoid(&GroupSetPresheaf::point(gp));
        assert!(bg.section(2).same_tables(&FiniteGroupoid::bg(&FiniteGroup::symmetric(3))));
        let pt = Arc::new(GroupoidPresheaf::constant(site, Arc::new(FiniteGroupoid::terminal())));
        let comps = eg.sections().iter().map(|g| GroupoidMap::to_terminal(g.clone())).collect();
        let f = PresheafMap::new(eg, pt, comps).unwrap();
        assert!(f.is_sectionwise_weq() && f.is_sectionwise_fib());
        assert!(f.is_local_weq() && f.is_local_fib());
    }

    #[test]
    fn constant_twisted_data() {
        let g = FiniteGroup::symmetric(3);
        let t = g.find("(1 2)").unwrap();
        let d = InvolutiveGroupData::new(g.clone(), g.identity_map(), &[0, t]).unwrap();
        let site = Arc::new(FiniteSite::sierpinski());
        let p = TwistedPresheaf::constant(site, d);
        assert!(p.sections().iter().all(|s| s.verdict() == (true, true)));
        let a = p.double_coset_presheaf();
        assert!(presheaf_hfp(&a).iota.is_sectionwise_fib());
        for t in 0..2 {
            assert!(stalk_commutation_check(&a, t).unwrap().isomorphism);
        }
    }
}
