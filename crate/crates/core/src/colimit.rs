//! Colimits of finite diagrams of groupoids, computed as colimits of the
//! object and morphism sets, and their interaction with homotopy fixed
//! points.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::functor::{same_groupoid, FunctorViolation, GroupoidMap};
use crate::gamma::{equivariance_witness, hfp, hfp_map_between, EquivariantMap, GammaAction, Hfp, HfpObject};
use crate::groupoid::{FiniteGroupoid, GroupoidParts, MorId, ObjId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("table lengths disagree")]
    Length,
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("identity of object {0} has the wrong endpoints")]
    IdentityEndpoints(usize),
    #[error("composite of arrows {0} and {1} is missing")]
    Missing(usize, usize),
    #[error("composite recorded for non-composable arrows {0} and {1}")]
    NotComposable(usize, usize),
    #[error("composite of arrows {0} and {1} has the wrong endpoints")]
    CompositeEndpoints(usize, usize),
    #[error("identity law fails at arrow {0}")]
    NotUnital(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("relation contains a cycle through {0}")]
    NotPoset(usize),
}

/// Why an index category is not filtered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotFilteredWitness {
    Empty,
    /// No object receives arrows from both.
    NoCocone { left: usize, right: usize },
    /// No arrow out of the common target equalizes the pair.
    NotEqualized { first: usize, second: usize },
}

impl fmt::Display for NotFilteredWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "empty index category"),
            Self::NoCocone { left, right } => write!(f, "objects {left} and {right} have no common cocone"),
            Self::NotEqualized { first, second } => {
                write!(f, "parallel arrows {first} and {second} are never equalized")
            }
        }
    }
}

/// A finite category, composition written diagrammatically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCategory {
    labels: Vec<String>,
    arrow_labels: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identity: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
}

impl IndexCategory {
    pub fn new(
        labels: Vec<String>,
        arrows: Vec<(usize, usize)>,
        identity: Vec<usize>,
        composition: &[(usize, usize, usize)],
    ) -> Result<Self, IndexError> {
        let n = labels.len();
        let arrow_labels = (0..arrows.len()).map(|a| format!("u{a}")).collect();
        let (src, tgt): (Vec<usize>, Vec<usize>) = arrows.into_iter().unzip();
        let c = Self {
            labels,
            arrow_labels,
            src,
            tgt,
            identity,
            comp: composition.iter().map(|&(a, b, c)| ((a, b), c)).collect(),
        };
        if c.identity.len() != n || c.comp.len() != composition.len() {
            return Err(IndexError::Length);
        }
        let na = c.src.len();
        for &x in c.src.iter().chain(&c.tgt) {
            if x >= n {
                return Err(IndexError::OutOfRange(x));
            }
        }
        for &(a, b, k) in composition {
            if a.max(b).max(k) >= na {
                return Err(IndexError::OutOfRange(a.max(b).max(k)));
            }
        }
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<(), IndexError> {
        for (x, &e) in self.identity.iter().enumerate() {
            if e >= self.src.len() {
                return Err(IndexError::OutOfRange(e));
            }
            if self.src[e] != x || self.tgt[e] != x {
                return Err(IndexError::IdentityEndpoints(x));
            }
        }
        for (&(a, b), &k) in &self.comp {
            if self.tgt[a] != self.src[b] {
                return Err(IndexError::NotComposable(a, b));
            }
            if self.src[k] != self.src[a] || self.tgt[k] != self.tgt[b] {
                return Err(IndexError::CompositeEndpoints(a, b));
            }
        }
        for a in self.arrows() {
            for b in self.arrows().filter(|&b| self.src[b] == self.tgt[a]) {
                if !self.comp.contains_key(&(a, b)) {
                    return Err(IndexError::Missing(a, b));
                }
            }
        }
        for a in self.arrows() {
            if self.then(self.identity[self.src[a]], a) != a || self.then(a, self.identity[self.tgt[a]]) != a {
                return Err(IndexError::NotUnital(a));
            }
        }
        for a in self.arrows() {
            for b in self.arrows().filter(|&b| self.src[b] == self.tgt[a]) {
                for c in self.arrows().filter(|&c| self.src[c] == self.tgt[b]) {
                    if self.then(self.then(a, b), c) != self.then(a, self.then(b, c)) {
                        return Err(IndexError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// The poset generated by `relations` (`(i, j)` meaning `i ≤ j`), one
    /// arrow `i → j` per pair `i ≤ j`, arrows ordered lexicographically.
    pub fn poset(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, IndexError> {
        let n = labels.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in relations {
            if i.max(j) >= n {
                return Err(IndexError::OutOfRange(i.max(j)));
            }
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    let via = le[k].clone();
                    for (a, b) in le[i].iter_mut().zip(via) {
                        *a |= b;
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| (0..n).any(|j| i != j && le[i][j] && le[j][i])) {
            return Err(IndexError::NotPoset(i));
        }
        let arrows: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| le[i][j]).collect();
        let id_of: HashMap<(usize, usize), usize> = arrows.iter().enumerate().map(|(a, &p)| (p, a)).collect();
        let identity = (0..n).map(|i| id_of[&(i, i)]).collect();
        let mut composition = Vec::new();
        for (a, &(i, j)) in arrows.iter().enumerate() {
            for (b, &(_, k)) in arrows.iter().enumerate().filter(|(_, &(j2, _))| j2 == j) {
                composition.push((a, b, id_of[&(i, k)]));
            }
        }
        let mut c = Self::new(labels, arrows, identity, &composition)?;
        c.arrow_labels = (0..c.src.len()).map(|a| format!("{}<={}", c.labels[c.src[a]], c.labels[c.tgt[a]])).collect();
        Ok(c)
    }

    /// Replaces the arrow labels; `None` if the count is wrong.
    pub fn with_arrow_labels(mut self, labels: Vec<String>) -> Option<Self> {
        (labels.len() == self.src.len()).then(|| {
            self.arrow_labels = labels;
            self
        })
    }

    /// The one-object category with only its identity.
    pub fn point() -> Self {
        Self::poset(vec!["0".into()], &[]).expect("a point is a poset")
    }

    pub fn object_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.src.len()
    }

    pub fn objects(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    pub fn arrows(&self) -> std::ops::Range<usize> {
        0..self.src.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arrow_label(&self, a: usize) -> &str {
        &self.arrow_labels[a]
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    pub fn identity(&self, i: usize) -> usize {
        self.identity[i]
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.identity[self.src[a]] == a
    }

    /// `first` then `second`; panics if they are not composable.
    pub fn then(&self, first: usize, second: usize) -> usize {
        self.comp[&(first, second)]
    }

    pub fn composition(&self) -> Vec<(usize, usize, usize)> {
        let mut v: Vec<_> = self.comp.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort_unstable();
        v
    }

    pub fn hom(&self, i: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows().filter(move |&a| self.src[a] == i && self.tgt[a] == j)
    }

    /// Checking pairs of objects and parallel pairs of arrows suffices in a
    /// finite category.
    pub fn filtered_witness(&self) -> Option<NotFilteredWitness> {
        if self.labels.is_empty() {
            return Some(NotFilteredWitness::Empty);
        }
        for i in self.objects() {
            for j in self.objects().skip(i + 1) {
                let cocone = self.objects().any(|k| self.hom(i, k).next().is_some() && self.hom(j, k).next().is_some());
                if !cocone {
                    return Some(NotFilteredWitness::NoCocone { left: i, right: j });
                }
            }
        }
        for u in self.arrows() {
            for v in self.arrows().skip(u + 1) {
                if self.src[u] != self.src[v] || self.tgt[u] != self.tgt[v] {
                    continue;
                }
                let j = self.tgt[u];
                let equalized = self.arrows().any(|w| self.src[w] == j && self.then(u, w) == self.then(v, w));
                if !equalized {
                    return Some(NotFilteredWitness::NotEqualized { first: u, second: v });
                }
            }
        }
        None
    }

    pub fn is_filtered(&self) -> bool {
        self.filtered_witness().is_none()
    }

    /// Objects every object maps to, ascending.
    pub fn terminal_candidates(&self) -> Vec<usize> {
        self.objects()
            .filter(|&k| self.objects().all(|i| self.hom(i, k).next().is_some()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("expected {expected} entries, found {found}")]
    Count { expected: usize, found: usize },
    #[error("groupoid at node {0} is invalid")]
    InvalidNode(usize),
    #[error("functor for arrow {0} has the wrong domain or codomain")]
    Endpoints(usize),
    #[error("functor for arrow {arrow} is not a functor: {violation}")]
    NotFunctor { arrow: usize, violation: FunctorViolation },
    #[error("identity arrow {0} is not sent to an identity functor")]
    Identity(usize),
    #[error("composite of arrows {0} and {1} is not preserved")]
    Composition(usize, usize),
    #[error("action at node {0} is on a different groupoid")]
    ActionCarrier(usize),
    #[error("functor for arrow {0} is not equivariant")]
    NotEquivariant(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimitError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("index category is not filtered: {0}")]
    NotFiltered(NotFilteredWitness),
    #[error("set-level colimit does not carry a groupoid structure: {0}")]
    IllDefined(String),
}

/// A strict functor from an index category to finite groupoids.
#[derive(Debug, Clone)]
pub struct Diagram {
    index: Arc<IndexCategory>,
    nodes: Vec<Arc<FiniteGroupoid>>,
    maps: Vec<GroupoidMap>,
}

impl Diagram {
    pub fn new(
        index: Arc<IndexCategory>,
        nodes: Vec<Arc<FiniteGroupoid>>,
        maps: Vec<GroupoidMap>,
    ) -> Result<Self, DiagramError> {
        if nodes.len() != index.object_count() {
            return Err(DiagramError::Count { expected: index.object_count(), found: nodes.len() });
        }
        if maps.len() != index.arrow_count() {
            return Err(DiagramError::Count { expected: index.arrow_count(), found: maps.len() });
        }
        if let Some(i) = nodes.iter().position(|g| !g.is_valid()) {
            return Err(DiagramError::InvalidNode(i));
        }
        for (a, f) in maps.iter().enumerate() {
            if !same_groupoid(f.dom(), &nodes[index.src(a)]) || !same_groupoid(f.cod(), &nodes[index.tgt(a)]) {
                return Err(DiagramError::Endpoints(a));
            }
            if let Some(violation) = f.violations().into_iter().next() {
                return Err(DiagramError::NotFunctor { arrow: a, violation });
            }
            if index.is_identity(a) && !is_identity_map(f) {
                return Err(DiagramError::Identity(a));
            }
        }
        for (a, b, c) in index.composition() {
            let composite = maps[a].then(&maps[b]).expect("endpoints checked");
            if composite.obj_map() != maps[c].obj_map() || composite.mor_map() != maps[c].mor_map() {
                return Err(DiagramError::Composition(a, b));
            }
        }
        Ok(Self { index, nodes, maps })
    }

    /// The same groupoid at one object.
    pub fn constant(g: Arc<FiniteGroupoid>) -> Self {
        let id = GroupoidMap::identity(g.clone());
        Self::new(Arc::new(IndexCategory::point()), vec![g], vec![id]).expect("constant diagram")
    }

    pub fn index(&self) -> &Arc<IndexCategory> {
        &self.index
    }

    pub fn nodes(&self) -> &[Arc<FiniteGroupoid>] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Arc<FiniteGroupoid> {
        &self.nodes[i]
    }

    pub fn maps(&self) -> &[GroupoidMap] {
        &self.maps
    }

    pub fn map(&self, a: usize) -> &GroupoidMap {
        &self.maps[a]
    }
}

fn is_identity_map(f: &GroupoidMap) -> bool {
    f.obj_map().iter().enumerate().all(|(i, x)| x.0 == i) && f.mor_map().iter().enumerate().all(|(i, m)| m.0 == i)
}

/// A diagram with a Γ-action at each node and equivariant transition maps.
#[derive(Debug, Clone)]
pub struct GammaDiagram {
    diagram: Diagram,
    actions: Vec<GammaAction>,
}

impl GammaDiagram {
    pub fn new(diagram: Diagram, actions: Vec<GammaAction>) -> Result<Self, DiagramError> {
        if actions.len() != diagram.nodes.len() {
            return Err(DiagramError::Count { expected: diagram.nodes.len(), found: actions.len() });
        }
        for (i, a) in actions.iter().enumerate() {
            if !same_groupoid(a.carrier(), &diagram.nodes[i]) {
                return Err(DiagramError::ActionCarrier(i));
            }
        }
        for (a, f) in diagram.maps.iter().enumerate() {
            let (s, t) = (diagram.index.src(a), diagram.index.tgt(a));
            if equivariance_witness(f, &actions[s], &actions[t]).is_some() {
                return Err(DiagramError::NotEquivariant(a));
            }
        }
        Ok(Self { diagram, actions })
    }

    pub fn constant(action: GammaAction) -> Self {
        let d = Diagram::constant(action.carrier().clone());
        Self::new(d, vec![action]).expect("constant diagram is equivariant")
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn actions(&self) -> &[GammaAction] {
        &self.actions
    }

    pub fn action(&self, i: usize) -> &GammaAction {
        &self.actions[i]
    }

    /// The diagram of homotopy fixed points with the induced maps.
    pub fn hfp_diagram(&self) -> (Diagram, Vec<Hfp>) {
        let d = &self.diagram;
        let hfps: Vec<Hfp> = self.actions.iter().map(hfp).collect();
        let maps = d
            .maps
            .iter()
            .enumerate()
            .map(|(a, f)| {
                let (s, t) = (d.index.src(a), d.index.tgt(a));
                let eq = EquivariantMap::new(f.clone(), self.actions[s].clone(), self.actions[t].clone())
                    .expect("checked on construction");
                hfp_map_between(&eq, &hfps[s], &hfps[t])
            })
            .collect();
        let nodes = hfps.iter().map(|h| h.groupoid().clone()).collect();
        let diagram = Diagram::new(d.index.clone(), nodes, maps).expect("fixed points of a diagram form a diagram");
        (diagram, hfps)
    }
}

/// A [`GammaDiagram`] over a filtered index category.
#[derive(Debug, Clone)]
pub struct FilteredDiagram(GammaDiagram);

impl FilteredDiagram {
    pub fn new(d: GammaDiagram) -> Result<Self, ColimitError> {
        match d.diagram.index.filtered_witness() {
            Some(w) => Err(ColimitError::NotFiltered(w)),
            None => Ok(Self(d)),
        }
    }

    pub fn inner(&self) -> &GammaDiagram {
        &self.0
    }
}

/// `obj_class[i][x]` is the colimit object that `x ∈ X(i)` lands on.
#[derive(Debug, Clone)]
pub struct Colimit {
    pub groupoid: Arc<FiniteGroupoid>,
    pub obj_class: Vec<Vec<ObjId>>,
    pub mor_class: Vec<Vec<MorId>>,
    pub cocone: Vec<GroupoidMap>,
}

/// Quotient of `⊔ sizes[i]` by the relation generated by `links`; classes
/// are numbered by first occurrence.
fn glue(sizes: &[usize], links: impl Iterator<Item = ((usize, usize), (usize, usize))>) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let total = sizes.iter().sum();
    let mut uf = UnionFind::<usize>::new(total);
    for ((i, x), (j, y)) in links {
        uf.union(offsets[i] + x, offsets[j] + y);
    }
    let mut class_of_root = HashMap::new();
    let mut reps = Vec::new();
    let classes = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            (0..s)
                .map(|x| {
                    *class_of_root.entry(uf.find(offsets[i] + x)).or_insert_with(|| {
                        reps.push((i, x));
                        reps.len() - 1
                    })
                })
                .collect()
        })
        .collect();
    (classes, reps)
}

/// The colimit of the object and morphism sets, with the groupoid structure
/// induced from each node. Fails if that structure is not well defined,
/// which cannot happen over a filtered index.
pub fn colimit_of(d: &Diagram) -> Result<Colimit, ColimitError> {
    let idx = &d.index;
    let obj_sizes: Vec<usize> = d.nodes.iter().map(|g| g.obj_count()).collect();
    let mor_sizes: Vec<usize> = d.nodes.iter().map(|g| g.mor_count()).collect();
    let obj_links = idx.arrows().flat_map(|a| {
        let (s, t, f) = (idx.src(a), idx.tgt(a), &d.maps[a]);
        (0..obj_sizes[s]).map(move |x| ((s, x), (t, f.obj(ObjId(x)).0)))
    });
    let (obj_class, obj_reps) = glue(&obj_sizes, obj_links);
    let mor_links = idx.arrows().flat_map(|a| {
        let (s, t, f) = (idx.src(a), idx.tgt(a), &d.maps[a]);
        (0..mor_sizes[s]).map(move |m| ((s, m), (t, f.mor(MorId(m)).0)))
    });
    let (mor_class, mor_reps) = glue(&mor_sizes, mor_links);

    let mut parts = GroupoidParts {
        obj_labels: obj_reps.iter().map(|&(i, x)| d.nodes[i].obj_label(ObjId(x)).to_string()).collect(),
        mor_labels: mor_reps.iter().map(|&(i, m)| d.nodes[i].mor_label(MorId(m)).to_string()).collect(),
        ..Default::default()
    };
    for &(i, m) in &mor_reps {
        let (g, m) = (&d.nodes[i], MorId(m));
        parts.src.push(ObjId(obj_class[i][g.src(m).0]));
        parts.tgt.push(ObjId(obj_class[i][g.tgt(m).0]));
        parts.inverse.push(MorId(mor_class[i][g.inverse(m).0]));
    }
    parts.identity = obj_reps.iter().map(|&(i, x)| MorId(mor_class[i][d.nodes[i].identity(ObjId(x)).0])).collect();

    // Structure maps must agree on every representative.
    for (i, g) in d.nodes.iter().enumerate() {
        for m in g.morphisms() {
            let c = mor_class[i][m.0];
            let ok = parts.src[c] == ObjId(obj_class[i][g.src(m).0])
                && parts.tgt[c] == ObjId(obj_class[i][g.tgt(m).0])
                && parts.inverse[c] == MorId(mor_class[i][g.inverse(m).0]);
            if !ok {
                return Err(ColimitError::IllDefined(format!("endpoints or inverse of {} at node {i}", g.mor_label(m))));
            }
        }
        for x in g.objects() {
            if parts.identity[obj_class[i][x.0]] != MorId(mor_class[i][g.identity(x).0]) {
                return Err(ColimitError::IllDefined(format!("identity of {} at node {i}", g.obj_label(x))));
            }
        }
    }
    let mut comp: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, g) in d.nodes.iter().enumerate() {
        for f in g.morphisms() {
            for &s in g.outgoing(g.tgt(f)) {
                let key = (mor_class[i][f.0], mor_class[i][s.0]);
                let c = mor_class[i][g.then(f, s).0];
                if *comp.entry(key).or_insert(c) != c {
                    return Err(ColimitError::IllDefined(format!("composite of classes {key:?}")));
                }
            }
        }
    }
    let n = mor_reps.len();
    for f in 0..n {
        for s in (0..n).filter(|&s| parts.src[s] == parts.tgt[f]) {
            if !comp.contains_key(&(f, s)) {
                return Err(ColimitError::IllDefined(format!("classes {f} and {s} have no composite")));
            }
        }
    }
    let mut triples: Vec<_> = comp.into_iter().map(|((a, b), c)| (MorId(a), MorId(b), MorId(c))).collect();
    triples.sort_unstable();
    parts.composition = triples;
    let groupoid = Arc::new(FiniteGroupoid::from_parts(parts).expect("colimit tables are well-shaped"));
    let cocone = d
        .nodes
        .iter()
        .enumerate()
        .map(|(i, g)| {
            GroupoidMap::new(
                g.clone(),
                groupoid.clone(),
                obj_class[i].iter().map(|&c| ObjId(c)).collect(),
                mor_class[i].iter().map(|&c| MorId(c)).collect(),
            )
            .expect("cocone tables are in range")
        })
        .collect();
    Ok(Colimit {
        groupoid,
        obj_class: obj_class.into_iter().map(|v| v.into_iter().map(ObjId).collect()).collect(),
        mor_class: mor_class.into_iter().map(|v| v.into_iter().map(MorId).collect()).collect(),
        cocone,
    })
}

/// A colimit together with the induced Γ-action.
#[derive(Debug, Clone)]
pub struct GammaColimit {
    pub colimit: Colimit,
    pub action: GammaAction,
}

fn gamma_colimit_of(d: &GammaDiagram) -> Result<GammaColimit, ColimitError> {
    let c = colimit_of(&d.diagram)?;
    let mut bar_obj = vec![None; c.groupoid.obj_count()];
    let mut bar_mor = vec![None; c.groupoid.mor_count()];
    for (i, a) in d.actions.iter().enumerate() {
        let g = &d.diagram.nodes[i];
        for x in g.objects() {
            let slot = &mut bar_obj[c.obj_class[i][x.0].0];
            let image = c.obj_class[i][a.bar_obj(x).0];
            if *slot.get_or_insert(image) != image {
                return Err(ColimitError::IllDefined("induced involution on objects".into()));
            }
        }
        for m in g.morphisms() {
            let slot = &mut bar_mor[c.mor_class[i][m.0].0];
            let image = c.mor_class[i][a.bar_mor(m).0];
            if *slot.get_or_insert(image) != image {
                return Err(ColimitError::IllDefined("induced involution on morphisms".into()));
            }
        }
    }
    let action = GammaAction::new(
        c.groupoid.clone(),
        bar_obj.into_iter().map(|x| x.expect("cocone is jointly surjective")).collect(),
        bar_mor.into_iter().map(|m| m.expect("cocone is jointly surjective")).collect(),
    )
    .map_err(|e| ColimitError::IllDefined(e.to_string()))?;
    Ok(GammaColimit { colimit: c, action })
}

/// The colimit of a filtered diagram with its induced action.
pub fn colimit(d: &FilteredDiagram) -> Result<GammaColimit, ColimitError> {
    gamma_colimit_of(&d.0)
}

/// The canonical map `colim X(i)^{hΓ} → (colim X)^{hΓ}`.
#[derive(Debug, Clone)]
pub struct HfpComparison {
    pub source: Colimit,
    pub target: Hfp,
    pub target_colimit: GammaColimit,
    pub map: GroupoidMap,
    pub isomorphism: bool,
}

pub fn hfp_colimit_comparison(d: &FilteredDiagram) -> Result<HfpComparison, ColimitError> {
    comparison(&d.0)
}

/// The same comparison with no filteredness requirement. Both colimits are
/// taken at the level of sets; either may fail to exist as a groupoid.
pub fn hfp_colimit_comparison_unfiltered(d: &GammaDiagram) -> Result<HfpComparison, ColimitError> {
    comparison(d)
}

fn comparison(d: &GammaDiagram) -> Result<HfpComparison, ColimitError> {
    let (hd, hfps) = d.hfp_diagram();
    let source = colimit_of(&hd)?;
    let target_colimit = gamma_colimit_of(d)?;
    let target = hfp(&target_colimit.action);
    let c = &target_colimit.colimit;

    let mut obj_map = vec![None; source.groupoid.obj_count()];
    let mut mor_map = vec![None; source.groupoid.mor_count()];
    for (i, h) in hfps.iter().enumerate() {
        for (o, &HfpObject { base, phi }) in h.objects().iter().enumerate() {
            let image = target
                .find_object(HfpObject { base: c.obj_class[i][base.0], phi: c.mor_class[i][phi.0] })
                .ok_or_else(|| ColimitError::IllDefined("image of a fixed point is not fixed".into()))?;
            let slot = &mut obj_map[source.obj_class[i][o].0];
            if *slot.get_or_insert(image) != image {
                return Err(ColimitError::IllDefined("comparison on objects".into()));
            }
        }
        let hg = h.groupoid();
        for m in hg.morphisms() {
            let src = obj_map[source.obj_class[i][hg.src(m).0].0].expect("objects mapped first");
            let image = target
                .find_arrow(src, c.mor_class[i][h.underlying(m).0])
                .expect("every carrier arrow lifts in the fixed points");
            let slot = &mut mor_map[source.mor_class[i][m.0].0];
            if *slot.get_or_insert(image) != image {
                return Err(ColimitError::IllDefined("comparison on morphisms".into()));
            }
        }
    }
    let map = GroupoidMap::new(
        source.groupoid.clone(),
        target.groupoid().clone(),
        obj_map.into_iter().map(|x| x.expect("cocone is jointly surjective")).collect(),
        mor_map.into_iter().map(|m| m.expect("cocone is jointly surjective")).collect(),
    )
    .expect("comparison tables are in range");
    let isomorphism = map.is_functor() && map.is_isomorphism();
    Ok(HfpComparison { source, target, target_colimit, map, isomorphism })
}

/// The map `colim X → colim Y` induced by levelwise maps `f_i: X(i) → Y(i)`
/// commuting with the transition maps.
pub fn induced_colimit_map(x: &Colimit, y: &Colimit, levels: &[GroupoidMap]) -> Result<GroupoidMap, ColimitError> {
    let mut obj_map = vec![None; x.groupoid.obj_count()];
    let mut mor_map = vec![None; x.groupoid.mor_count()];
    for (i, f) in levels.iter().enumerate() {
        for o in f.dom().objects() {
            let image = y.obj_class[i][f.obj(o).0];
            if *obj_map[x.obj_class[i][o.0].0].get_or_insert(image) != image {
                return Err(ColimitError::IllDefined("levelwise maps are not natural".into()));
            }
        }
        for m in f.dom().morphisms() {
            let image = y.mor_class[i][f.mor(m).0];
            if *mor_map[x.mor_class[i][m.0].0].get_or_insert(image) != image {
                return Err(ColimitError::IllDefined("levelwise maps are not natural".into()));
            }
        }
    }
    GroupoidMap::new(
        x.groupoid.clone(),
        y.groupoid.clone(),
        obj_map.into_iter().map(|o| o.expect("jointly surjective")).collect(),
        mor_map.into_iter().map(|m| m.expect("jointly surjective")).collect(),
    )
    .map_err(|e| ColimitError::IllDefined(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    /// `𝔹ℤ/4 → 𝔹ℤ/2`, reduction mod 2, with negation on both.
    fn bz4_to_bz2() -> GammaDiagram {
        let z4 = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(4)));
        let z2 = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(2)));
        let index = Arc::new(IndexCategory::poset(labels(2), &[(0, 1)]).unwrap());
        let reduce = GroupoidMap::new(z4.clone(), z2.clone(), vec![ObjId(0)], (0..4).map(|k| MorId(k % 2)).collect()).unwrap();
        let maps = vec![GroupoidMap::identity(z4.clone()), reduce, GroupoidMap::identity(z2.clone())];
        let d = Diagram::new(index, vec![z4.clone(), z2.clone()], maps).unwrap();
        let neg4 = GammaAction::new(z4, vec![ObjId(0)], [0, 3, 2, 1].map(MorId).to_vec()).unwrap();
        let neg2 = GammaAction::trivial(z2);
        GammaDiagram::new(d, vec![neg4, neg2]).unwrap()
    }

    #[test]
    fn poset_and_filtered() {
        let diamond = IndexCategory::poset(labels(4), &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(diamond.arrow_count(), 9);
        assert!(diamond.is_filtered());
        assert_eq!(diamond.terminal_candidates(), vec![3]);
        let two = IndexCategory::poset(labels(2), &[]).unwrap();
        assert_eq!(two.filtered_witness(), Some(NotFilteredWitness::NoCocone { left: 0, right: 1 }));
        assert!(IndexCategory::poset(labels(2), &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn idempotent_index() {
        // e: 0 → 0 idempotent, u: 0 → 1 with e;u = u.
        let c = IndexCategory::new(labels(2), vec![(0, 0), (1, 1), (0, 0), (0, 1)], vec![0, 1], &[
            (0, 0, 0),
            (0, 2, 2),
            (2, 0, 2),
            (2, 2, 2),
            (0, 3, 3),
            (2, 3, 3),
            (3, 1, 3),
            (1, 1, 1),
        ])
        .unwrap();
        assert!(c.is_filtered());
        let bad = IndexCategory::new(labels(1), vec![(0, 0), (0, 0)], vec![0], &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]).unwrap();
        assert_eq!(bad.filtered_witness(), Some(NotFilteredWitness::NotEqualized { first: 0, second: 1 }));
    }

    #[test]
    fn constant_and_chain() {
        let g = Arc::new(FiniteGroupoid::eg(&FiniteGroup::symmetric(3)));
        let c = colimit_of(&Diagram::constant(g.clone())).unwrap();
        assert!(c.cocone[0].is_isomorphism());

        let d = FilteredDiagram::new(bz4_to_bz2()).unwrap();
        let c = colimit(&d).unwrap();
        assert!(c.colimit.groupoid.same_tables(&FiniteGroupoid::bg(&FiniteGroup::cyclic(2))));
        assert!(c.colimit.cocone[1].is_isomorphism());
        let cmp = hfp_colimit_comparison(&d).unwrap();
        assert!(cmp.isomorphism);
        assert!(cmp.source.groupoid.is_valid());
    }

    #[test]
    fn parallel_pair_negative_control() {
        // {a,b} ⇉ {c,d}, both swapped; the coequalizer is a point.
        let ab = Arc::new(FiniteGroupoid::discrete(vec!["a".into(), "b".into()]));
        let cd = Arc::new(FiniteGroupoid::discrete(vec!["c".into(), "d".into()]));
        let index = Arc::new(
            IndexCategory::new(labels(2), vec![(0, 0), (1, 1), (0, 1), (0, 1)], vec![0, 1], &[
                (0, 0, 0),
                (1, 1, 1),
                (0, 2, 2),
                (0, 3, 3),
                (2, 1, 2),
                (3, 1, 3),
            ])
            .unwrap(),
        );
        let f = |img: [usize; 2]| GroupoidMap::new(ab.clone(), cd.clone(), img.map(ObjId).to_vec(), img.map(MorId).to_vec()).unwrap();
        let maps = vec![GroupoidMap::identity(ab.clone()), GroupoidMap::identity(cd.clone()), f([0, 1]), f([1, 0])];
        let d = Diagram::new(index, vec![ab.clone(), cd.clone()], maps).unwrap();
        let swap = |g: &Arc<FiniteGroupoid>| GammaAction::new(g.clone(), vec![ObjId(1), ObjId(0)], vec![MorId(1), MorId(0)]).unwrap();
        let gd = GammaDiagram::new(d, vec![swap(&ab), swap(&cd)]).unwrap();
        assert!(matches!(FilteredDiagram::new(gd.clone()), Err(ColimitError::NotFiltered(_))));
        let cmp = hfp_colimit_comparison_unfiltered(&gd).unwrap();
        assert_eq!(cmp.source.groupoid.obj_count(), 0);
        assert_eq!(cmp.target.groupoid().obj_count(), 1);
        assert!(!cmp.isomorphism);
    }

    #[test]
    fn rejects_non_functorial_diagram() {
        let z2 = Arc::new(FiniteGroupoid::bg(&FiniteGroup::cyclic(2)));
        let index = Arc::new(IndexCategory::poset(labels(2), &[(0, 1)]).unwrap());
        let zero = GroupoidMap::new(z2.clone(), z2.clone(), vec![ObjId(0)], vec![MorId(0), MorId(0)]).unwrap();
        let maps = vec![zero.clone(), zero.clone(), GroupoidMap::identity(z2.clone())];
        assert_eq!(Diagram::new(index, vec![z2.clone(), z2], maps).unwrap_err(), DiagramError::Identity(0));
    }
}
