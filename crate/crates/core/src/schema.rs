//! JSON interchange, schema version 1.
//!
//! Every document is an object with `"kind"` and `"schema": 1`. Elements,
//! objects, morphisms and opens are referred to by their labels, which must
//! be unique within a document. Paths to other documents are resolved
//! relative to the directory of the referring file.
//!
//! ```json
//! {"kind": "groupoid", "schema": 1,
//!  "objects": ["x"],
//!  "morphisms": [{"id": "1", "src": "x", "tgt": "x"}, {"id": "t", "src": "x", "tgt": "x"}],
//!  "identities": {"x": "1"},
//!  "inverses": {"1": "1", "t": "t"},
//!  "composition": [["1", "1", "1"], ["1", "t", "t"], ["t", "1", "t"], ["t", "t", "1"]]}
//! ```
//!
//! A composition triple `[f, g, h]` means `f` then `g` is `h`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::{CohomologyError, GroupGammaAction};
use crate::colimit::{Diagram, DiagramError, GammaDiagram, IndexCategory, IndexError};
use crate::fixtures::group_by_name;
use crate::functor::{GroupoidMap, MapError};
use crate::gamma::{GammaAction, GammaError};
use crate::group::{FiniteGroup, GroupError};
use crate::groupoid::{FiniteGroupoid, GroupoidError, GroupoidParts, MorId, ObjId};
use crate::presheaf::{FiniteSite, GroupoidPresheaf, PresheafError, PresheafGammaAction, SiteError};
use crate::twisted::{InvolutiveGroupData, TwistedError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum SchemaError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: malformed JSON: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("unsupported schema version {0}, expected {SCHEMA_VERSION}")]
    Version(u32),
    #[error("expected a {expected} document, found {found}")]
    Kind { expected: &'static str, found: &'static str },
    #[error("duplicate {what} label {label:?}")]
    Duplicate { what: &'static str, label: String },
    #[error("unknown {what} label {label:?}")]
    Unknown { what: &'static str, label: String },
    #[error("no {what} given for {label:?}")]
    Missing { what: &'static str, label: String },
    #[error("{0}")]
    Reference(String),
    #[error(transparent)]
    Shape(#[from] GroupoidError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("not a groupoid: {}", .0.join("; "))]
    Groupoid(Vec<String>),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Site(#[from] SiteError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

impl SchemaError {
    /// Unreadable or ill-referenced input, as opposed to well-formed input
    /// that violates an algebraic law.
    pub fn is_input_error(&self) -> bool {
        match self {
            SchemaError::Io { .. }
            | SchemaError::Json { .. }
            | SchemaError::Version(_)
            | SchemaError::Kind { .. }
            | SchemaError::Duplicate { .. }
            | SchemaError::Unknown { .. }
            | SchemaError::Missing { .. }
            | SchemaError::Reference(_)
            | SchemaError::Shape(_)
            | SchemaError::Map(MapError::Length { .. } | MapError::OutOfRange { .. }) => true,
            SchemaError::Group(e) => matches!(
                e,
                GroupError::Empty
                    | GroupError::Shape { .. }
                    | GroupError::Row { .. }
                    | GroupError::OutOfRange { .. }
                    | GroupError::BadPermutation(_)
                    | GroupError::UnknownLabel(_)
            ),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismRecord {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    pub schema: u32,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismRecord>,
    pub identities: BTreeMap<String, String>,
    pub inverses: BTreeMap<String, String>,
    pub composition: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    /// A name such as `S3`, `D4`, `Z6` or `GL2F2`.
    Catalog(String),
    /// `table[i][j]` is the label of `elements[i] · elements[j]`.
    Cayley { elements: Vec<String>, table: Vec<Vec<String>> },
    /// Generators as images of `0..degree`; the group acts on the left.
    Permutations { degree: usize, generators: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub schema: u32,
    pub group: GroupSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum InvolutionSpec {
    Identity,
    Inversion,
    Conjugation(String),
    Images(BTreeMap<String, String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvolutionDoc {
    pub schema: u32,
    /// The group file, for standalone validation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub involution: InvolutionSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SubgroupSpec {
    Elements(Vec<String>),
    Generators(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupDoc {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub subgroup: SubgroupSpec,
}

/// A Γ-action: the involution on objects and on morphisms, by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub schema: u32,
    /// The carrier file, for standalone validation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<String>,
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

/// A functor given by its object and morphism tables, by label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorTables {
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum IndexSpec {
    Category {
        objects: Vec<String>,
        arrows: Vec<MorphismRecord>,
        identities: BTreeMap<String, String>,
        composition: Vec<[String; 3]>,
    },
    /// Generating relations `a ≤ b`; arrows are labelled `a<=b`.
    Poset { objects: Vec<String>, relations: Vec<[String; 2]> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRef {
    pub groupoid: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
}

/// Maps may be omitted for identity arrows and for arrows that are
/// composites of given ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub schema: u32,
    pub index: IndexSpec,
    pub nodes: BTreeMap<String, NodeRef>,
    #[serde(default)]
    pub maps: BTreeMap<String, FunctorTables>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenRecord {
    pub name: String,
    pub points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteDoc {
    pub schema: u32,
    pub points: Vec<String>,
    pub opens: Vec<OpenRecord>,
    /// Optional pairs `[U, V]` asserting `V ⊆ U`; checked against membership.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contains: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionRecord {
    pub from: String,
    pub to: String,
    #[serde(flatten)]
    pub tables: FunctorTables,
}

/// Restrictions may be omitted when they are identities of equal
/// sections or composites of given ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    pub schema: u32,
    pub site: String,
    pub sections: BTreeMap<String, NodeRef>,
    #[serde(default)]
    pub restrictions: Vec<RestrictionRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Groupoid(GroupoidDoc),
    Group(GroupDoc),
    Involution(InvolutionDoc),
    Subgroup(SubgroupDoc),
    Action(ActionDoc),
    Diagram(DiagramDoc),
    Site(SiteDoc),
    Presheaf(PresheafDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Groupoid(_) => "groupoid",
            Document::Group(_) => "group",
            Document::Involution(_) => "involution",
            Document::Subgroup(_) => "subgroup",
            Document::Action(_) => "action",
            Document::Diagram(_) => "diagram",
            Document::Site(_) => "site",
            Document::Presheaf(_) => "presheaf",
        }
    }

    fn schema(&self) -> u32 {
        match self {
            Document::Groupoid(d) => d.schema,
            Document::Group(d) => d.schema,
            Document::Involution(d) => d.schema,
            Document::Subgroup(d) => d.schema,
            Document::Action(d) => d.schema,
            Document::Diagram(d) => d.schema,
            Document::Site(d) => d.schema,
            Document::Presheaf(d) => d.schema,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }
}

pub fn parse_document(text: &str, path: &Path) -> Result<Document, SchemaError> {
    let doc: Document =
        serde_json::from_str(text).map_err(|source| SchemaError::Json { path: path.to_path_buf(), source })?;
    match doc.schema() {
        SCHEMA_VERSION => Ok(doc),
        v => Err(SchemaError::Version(v)),
    }
}

pub fn read_document(path: &Path) -> Result<Document, SchemaError> {
    let text = fs::read_to_string(path).map_err(|source| SchemaError::Io { path: path.to_path_buf(), source })?;
    parse_document(&text, path)
}

fn resolve(base: &Path, reference: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(reference)
}

/// Label → position, rejecting duplicates.
fn index_of(what: &'static str, labels: &[String]) -> Result<HashMap<String, usize>, SchemaError> {
    let mut out = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if out.insert(l.clone(), i).is_some() {
            return Err(SchemaError::Duplicate { what, label: l.clone() });
        }
    }
    Ok(out)
}

fn lookup(map: &HashMap<String, usize>, what: &'static str, label: &str) -> Result<usize, SchemaError> {
    map.get(label).copied().ok_or_else(|| SchemaError::Unknown { what, label: label.to_string() })
}

/// A total table over `domain`, given as a label map.
fn total_table(
    what: &'static str,
    domain: &[String],
    codomain: &HashMap<String, usize>,
    table: &BTreeMap<String, String>,
) -> Result<Vec<usize>, SchemaError> {
    let dom = index_of(what, domain)?;
    if let Some(extra) = table.keys().find(|k| !dom.contains_key(*k)) {
        return Err(SchemaError::Unknown { what, label: extra.clone() });
    }
    domain
        .iter()
        .map(|l| {
            let image = table.get(l).ok_or_else(|| SchemaError::Missing { what, label: l.clone() })?;
            lookup(codomain, what, image)
        })
        .collect()
}

fn expect_kind<T>(doc: Document, expected: &'static str, pick: impl FnOnce(Document) -> Option<T>) -> Result<T, SchemaError> {
    let found = doc.kind();
    pick(doc).ok_or(SchemaError::Kind { expected, found })
}

/// Tables as given; the groupoid laws are not checked.
pub fn groupoid_from_doc(doc: &GroupoidDoc) -> Result<FiniteGroupoid, SchemaError> {
    let objs = index_of("object", &doc.objects)?;
    let mor_labels: Vec<String> = doc.morphisms.iter().map(|m| m.id.clone()).collect();
    let mors = index_of("morphism", &mor_labels)?;
    let mut parts = GroupoidParts { obj_labels: doc.objects.clone(), mor_labels: mor_labels.clone(), ..Default::default() };
    for m in &doc.morphisms {
        parts.src.push(ObjId(lookup(&objs, "object", &m.src)?));
        parts.tgt.push(ObjId(lookup(&objs, "object", &m.tgt)?));
    }
    parts.identity = total_table("object", &doc.objects, &mors, &doc.identities)?.into_iter().map(MorId).collect();
    parts.inverse = total_table("morphism", &mor_labels, &mors, &doc.inverses)?.into_iter().map(MorId).collect();
    for [a, b, c] in &doc.composition {
        let m = |l: &str| lookup(&mors, "morphism", l).map(MorId);
        parts.composition.push((m(a)?, m(b)?, m(c)?));
    }
    Ok(FiniteGroupoid::from_parts(parts)?)
}

pub fn groupoid_to_doc(g: &FiniteGroupoid) -> GroupoidDoc {
    let ol = |x: ObjId| g.obj_label(x).to_string();
    let ml = |m: MorId| g.mor_label(m).to_string();
    GroupoidDoc {
        schema: SCHEMA_VERSION,
        objects: g.objects().map(ol).collect(),
        morphisms: g.morphisms().map(|m| MorphismRecord { id: ml(m), src: ol(g.src(m)), tgt: ol(g.tgt(m)) }).collect(),
        identities: g.objects().map(|x| (ol(x), ml(g.identity(x)))).collect(),
        inverses: g.morphisms().map(|m| (ml(m), ml(g.inverse(m)))).collect(),
        composition: g.triples().into_iter().map(|(a, b, c)| [ml(a), ml(b), ml(c)]).collect(),
    }
}

pub fn action_to_doc(a: &GammaAction) -> ActionDoc {
    let g = a.carrier();
    ActionDoc {
        schema: SCHEMA_VERSION,
        groupoid: None,
        objects: g.objects().map(|x| (g.obj_label(x).to_string(), g.obj_label(a.bar_obj(x)).to_string())).collect(),
        morphisms: g.morphisms().map(|m| (g.mor_label(m).to_string(), g.mor_label(a.bar_mor(m)).to_string())).collect(),
    }
}

/// A groupoid whose tables satisfy every law.
pub fn checked_groupoid(g: FiniteGroupoid) -> Result<Arc<FiniteGroupoid>, SchemaError> {
    let v = g.validate();
    if v.is_empty() {
        Ok(Arc::new(g))
    } else {
        Err(SchemaError::Groupoid(v.iter().map(ToString::to_string).collect()))
    }
}

pub fn load_groupoid(path: &Path) -> Result<Arc<FiniteGroupoid>, SchemaError> {
    let doc = expect_kind(read_document(path)?, "groupoid", |d| match d {
        Document::Groupoid(g) => Some(g),
        _ => None,
    })?;
    checked_groupoid(groupoid_from_doc(&doc)?)
}

pub fn group_from_spec(spec: &GroupSpec) -> Result<FiniteGroup, SchemaError> {
    match spec {
        GroupSpec::Catalog(name) => {
            group_by_name(name).ok_or_else(|| SchemaError::Unknown { what: "catalog group", label: name.clone() })
        }
        GroupSpec::Cayley { elements, table } => {
            let idx = index_of("element", elements)?;
            let rows = table
                .iter()
                .map(|row| row.iter().map(|l| lookup(&idx, "element", l)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FiniteGroup::from_table(elements.clone(), rows)?)
        }
        GroupSpec::Permutations { degree, generators } => Ok(FiniteGroup::from_permutations(*degree, generators)?),
    }
}

pub fn load_group(path: &Path) -> Result<FiniteGroup, SchemaError> {
    let doc = expect_kind(read_document(path)?, "group", |d| match d {
        Document::Group(g) => Some(g),
        _ => None,
    })?;
    group_from_spec(&doc.group)
}

fn element(g: &FiniteGroup, label: &str) -> Result<usize, SchemaError> {
    g.find(label).ok_or_else(|| SchemaError::Unknown { what: "element", label: label.to_string() })
}

/// The automorphism as a table; not checked to be an involution.
pub fn involution_table(g: &FiniteGroup, spec: &InvolutionSpec) -> Result<Vec<usize>, SchemaError> {
    match spec {
        InvolutionSpec::Identity => Ok(g.identity_map()),
        InvolutionSpec::Inversion => Ok(g.inversion()),
        InvolutionSpec::Conjugation(t) => Ok(g.conjugation(element(g, t)?)),
        InvolutionSpec::Images(images) => {
            let idx = index_of("element", g.labels())?;
            total_table("element", g.labels(), &idx, images)
        }
    }
}

pub fn load_involution(path: &Path, g: &FiniteGroup) -> Result<Vec<usize>, SchemaError> {
    let doc = expect_kind(read_document(path)?, "involution", |d| match d {
        Document::Involution(i) => Some(i),
        _ => None,
    })?;
    involution_table(g, &doc.involution)
}

pub fn subgroup_elements(g: &FiniteGroup, spec: &SubgroupSpec) -> Result<Vec<usize>, SchemaError> {
    match spec {
        SubgroupSpec::Elements(ls) => ls.iter().map(|l| element(g, l)).collect(),
        SubgroupSpec::Generators(ls) => {
            let gens = ls.iter().map(|l| element(g, l)).collect::<Result<Vec<_>, _>>()?;
            Ok(g.closure(&gens).elements().to_vec())
        }
    }
}

pub fn load_subgroup(path: &Path, g: &FiniteGroup) -> Result<Vec<usize>, SchemaError> {
    let doc = expect_kind(read_document(path)?, "subgroup", |d| match d {
        Document::Subgroup(s) => Some(s),
        _ => None,
    })?;
    subgroup_elements(g, &doc.subgroup)
}

pub fn load_group_gamma(group: &Path, involution: &Path) -> Result<GroupGammaAction, SchemaError> {
    let g = load_group(group)?;
    let bar = load_involution(involution, &g)?;
    Ok(GroupGammaAction::new(g, bar)?)
}

pub fn load_twisted(group: &Path, involution: &Path, subgroup: &Path) -> Result<InvolutiveGroupData, SchemaError> {
    let g = load_group(group)?;
    let theta = load_involution(involution, &g)?;
    let b = load_subgroup(subgroup, &g)?;
    Ok(InvolutiveGroupData::new(g, theta, &b)?)
}

pub fn action_from_doc(carrier: Arc<FiniteGroupoid>, doc: &ActionDoc) -> Result<GammaAction, SchemaError> {
    let objs = index_of("object", carrier.obj_labels())?;
    let mors = index_of("morphism", carrier.mor_labels())?;
    let bar_obj = total_table("object", carrier.obj_labels(), &objs, &doc.objects)?.into_iter().map(ObjId).collect();
    let bar_mor = total_table("morphism", carrier.mor_labels(), &mors, &doc.morphisms)?.into_iter().map(MorId).collect();
    Ok(GammaAction::new(carrier, bar_obj, bar_mor)?)
}

pub fn load_action(path: &Path, carrier: Arc<FiniteGroupoid>) -> Result<GammaAction, SchemaError> {
    let doc = expect_kind(read_document(path)?, "action", |d| match d {
        Document::Action(a) => Some(a),
        _ => None,
    })?;
    action_from_doc(carrier, &doc)
}

/// A functor from label tables; functoriality is checked.
pub fn functor_from_tables(
    dom: &Arc<FiniteGroupoid>,
    cod: &Arc<FiniteGroupoid>,
    tables: &FunctorTables,
) -> Result<GroupoidMap, SchemaError> {
    let objs = index_of("object", cod.obj_labels())?;
    let mors = index_of("morphism", cod.mor_labels())?;
    let obj = total_table("object", dom.obj_labels(), &objs, &tables.objects)?.into_iter().map(ObjId).collect();
    let mor = total_table("morphism", dom.mor_labels(), &mors, &tables.morphisms)?.into_iter().map(MorId).collect();
    Ok(GroupoidMap::new_functor(dom.clone(), cod.clone(), obj, mor)?)
}

fn index_from_spec(spec: &IndexSpec) -> Result<IndexCategory, SchemaError> {
    match spec {
        IndexSpec::Poset { objects, relations } => {
            let idx = index_of("index object", objects)?;
            let rel = relations
                .iter()
                .map(|[a, b]| Ok((lookup(&idx, "index object", a)?, lookup(&idx, "index object", b)?)))
                .collect::<Result<Vec<_>, SchemaError>>()?;
            Ok(IndexCategory::poset(objects.clone(), &rel)?)
        }
        IndexSpec::Category { objects, arrows, identities, composition } => {
            let idx = index_of("index object", objects)?;
            let labels: Vec<String> = arrows.iter().map(|a| a.id.clone()).collect();
            let arr = index_of("arrow", &labels)?;
            let ends = arrows
                .iter()
                .map(|a| Ok((lookup(&idx, "index object", &a.src)?, lookup(&idx, "index object", &a.tgt)?)))
                .collect::<Result<Vec<_>, SchemaError>>()?;
            let ids = total_table("index object", objects, &arr, identities)?;
            let comp = composition
                .iter()
                .map(|[a, b, c]| Ok((lookup(&arr, "arrow", a)?, lookup(&arr, "arrow", b)?, lookup(&arr, "arrow", c)?)))
                .collect::<Result<Vec<_>, SchemaError>>()?;
            let c = IndexCategory::new(objects.clone(), ends, ids, &comp)?;
            Ok(c.with_arrow_labels(labels).expect("one label per arrow"))
        }
    }
}

/// Completes a partial family of maps along identities and composites.
fn complete_maps(
    index: &IndexCategory,
    nodes: &[Arc<FiniteGroupoid>],
    mut maps: Vec<Option<GroupoidMap>>,
) -> Result<Vec<GroupoidMap>, SchemaError> {
    for i in index.objects() {
        let a = index.identity(i);
        if maps[a].is_none() {
            maps[a] = Some(GroupoidMap::identity(nodes[i].clone()));
        }
    }
    loop {
        let mut progress = false;
        for (f, g, c) in index.composition() {
            if maps[c].is_none() {
                if let (Some(mf), Some(mg)) = (&maps[f], &maps[g]) {
                    maps[c] = Some(mf.then(mg)?);
                    progress = true;
                }
            }
        }
        if !progress {
            break;
        }
    }
    maps.into_iter()
        .enumerate()
        .map(|(a, m)| m.ok_or_else(|| SchemaError::Missing { what: "arrow map", label: index.arrow_label(a).to_string() }))
        .collect()
}

type LoadedNodes = (Vec<Arc<FiniteGroupoid>>, Option<Vec<GammaAction>>);

/// Groupoids and optional actions referenced by `nodes`, in `order`.
fn load_nodes(
    base: &Path,
    order: &[String],
    nodes: &BTreeMap<String, NodeRef>,
    what: &'static str,
) -> Result<LoadedNodes, SchemaError> {
    if let Some(extra) = nodes.keys().find(|k| !order.contains(k)) {
        return Err(SchemaError::Unknown { what, label: extra.clone() });
    }
    let refs = order
        .iter()
        .map(|l| nodes.get(l).ok_or_else(|| SchemaError::Missing { what, label: l.clone() }))
        .collect::<Result<Vec<_>, _>>()?;
    let groupoids =
        refs.iter().map(|r| load_groupoid(&resolve(base, &r.groupoid))).collect::<Result<Vec<_>, _>>()?;
    let with_action = refs.iter().filter(|r| r.action.is_some()).count();
    let actions = match with_action {
        0 => None,
        n if n == refs.len() => Some(
            refs.iter()
                .zip(&groupoids)
                .map(|(r, g)| load_action(&resolve(base, r.action.as_deref().expect("counted")), g.clone()))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        _ => return Err(SchemaError::Reference(format!("either every {what} has an action or none does"))),
    };
    Ok((groupoids, actions))
}

/// A diagram file: the diagram and, when every node has one, its actions.
#[derive(Debug, Clone)]
pub struct LoadedDiagram {
    pub diagram: Diagram,
    pub gamma: Option<GammaDiagram>,
}

pub fn load_diagram(path: &Path) -> Result<LoadedDiagram, SchemaError> {
    let doc = expect_kind(read_document(path)?, "diagram", |d| match d {
        Document::Diagram(x) => Some(x),
        _ => None,
    })?;
    let index = index_from_spec(&doc.index)?;
    let (nodes, actions) = load_nodes(path, index.labels(), &doc.nodes, "index object")?;
    let arrows = index_of("arrow", &index.arrows().map(|a| index.arrow_label(a).to_string()).collect::<Vec<_>>())?;
    let mut maps: Vec<Option<GroupoidMap>> = vec![None; index.arrow_count()];
    for (label, tables) in &doc.maps {
        let a = lookup(&arrows, "arrow", label)?;
        maps[a] = Some(functor_from_tables(&nodes[index.src(a)], &nodes[index.tgt(a)], tables)?);
    }
    let maps = complete_maps(&index, &nodes, maps)?;
    let diagram = Diagram::new(Arc::new(index), nodes, maps)?;
    let gamma = actions.map(|a| GammaDiagram::new(diagram.clone(), a)).transpose()?;
    Ok(LoadedDiagram { diagram, gamma })
}

pub fn site_from_doc(doc: &SiteDoc) -> Result<(FiniteSite, Vec<String>), SchemaError> {
    let pts = index_of("point", &doc.points)?;
    let names: Vec<String> = doc.opens.iter().map(|o| o.name.clone()).collect();
    index_of("open", &names)?;
    let masks = doc
        .opens
        .iter()
        .map(|o| o.points.iter().try_fold(0u64, |m, p| Ok(m | 1 << lookup(&pts, "point", p)?)))
        .collect::<Result<Vec<u64>, SchemaError>>()?;
    let site = FiniteSite::new(doc.points.clone(), masks.iter().copied())?;
    let mut open_names = vec![String::new(); site.open_count()];
    for (name, &m) in names.iter().zip(&masks) {
        let u = site.find_open(m).expect("listed opens are opens");
        if !open_names[u].is_empty() {
            return Err(SchemaError::Reference(format!("opens {:?} and {name:?} have the same points", open_names[u])));
        }
        open_names[u] = name.clone();
    }
    let by_name = index_of("open", &names)?;
    for [u, v] in &doc.contains {
        let (mu, mv) = (masks[lookup(&by_name, "open", u)?], masks[lookup(&by_name, "open", v)?]);
        if mv & !mu != 0 {
            return Err(SchemaError::Reference(format!("{v:?} is not contained in {u:?}")));
        }
    }
    Ok((site, open_names))
}

pub fn load_site(path: &Path) -> Result<(FiniteSite, Vec<String>), SchemaError> {
    let doc = expect_kind(read_document(path)?, "site", |d| match d {
        Document::Site(s) => Some(s),
        _ => None,
    })?;
    site_from_doc(&doc)
}

#[derive(Debug, Clone)]
pub struct LoadedPresheaf {
    pub presheaf: Arc<GroupoidPresheaf>,
    pub gamma: Option<PresheafGammaAction>,
    pub open_names: Vec<String>,
}

pub fn load_presheaf(path: &Path) -> Result<LoadedPresheaf, SchemaError> {
    let doc = expect_kind(read_document(path)?, "presheaf", |d| match d {
        Document::Presheaf(p) => Some(p),
        _ => None,
    })?;
    let (site, open_names) = load_site(&resolve(path, &doc.site))?;
    let site = Arc::new(site);
    let (sections, actions) = load_nodes(path, &open_names, &doc.sections, "open")?;
    let by_name = index_of("open", &open_names)?;
    let mut gens = Vec::with_capacity(doc.restrictions.len());
    for r in &doc.restrictions {
        let (u, v) = (lookup(&by_name, "open", &r.from)?, lookup(&by_name, "open", &r.to)?);
        gens.push(((u, v), functor_from_tables(&sections[u], &sections[v], &r.tables)?));
    }
    let presheaf = Arc::new(GroupoidPresheaf::new(site, sections, gens)?);
    let gamma = actions.map(|a| PresheafGammaAction::new(presheaf.clone(), a)).transpose()?;
    Ok(LoadedPresheaf { presheaf, gamma, open_names })
}

/// The outcome of validating one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub kind: &'static str,
    pub summary: String,
    pub violations: Vec<String>,
}

/// Loads a document of any kind and lists the laws it violates. Input
/// errors are returned as `Err`; law violations as a report.
pub fn validate_file(path: &Path) -> Result<ValidationReport, SchemaError> {
    let doc = read_document(path)?;
    let kind = doc.kind();
    let report = |summary: String, violations: Vec<String>| ValidationReport { kind, summary, violations };
    let law = |r: Result<String, SchemaError>| match r {
        Ok(summary) => Ok(report(summary, Vec::new())),
        Err(e) if e.is_input_error() => Err(e),
        Err(e) => Ok(report(String::new(), vec![e.to_string()])),
    };
    let group_ref = |g: &Option<String>| {
        let g = g.as_ref().ok_or_else(|| SchemaError::Reference(format!("a standalone {kind} needs a \"group\" reference")))?;
        load_group(&resolve(path, g))
    };
    match doc {
        Document::Groupoid(d) => {
            let g = groupoid_from_doc(&d)?;
            let summary = format!("{} objects, {} morphisms", g.obj_count(), g.mor_count());
            Ok(report(summary, g.validate().iter().map(ToString::to_string).collect()))
        }
        Document::Group(d) => law(group_from_spec(&d.group).map(|g| format!("order {}", g.order()))),
        Document::Involution(d) => {
            let g = group_ref(&d.group)?;
            let bar = involution_table(&g, &d.involution)?;
            law(GroupGammaAction::new(g, bar).map(|_| "involutive automorphism".to_string()).map_err(Into::into))
        }
        Document::Subgroup(d) => {
            let g = group_ref(&d.group)?;
            let elems = subgroup_elements(&g, &d.subgroup)?;
            law(crate::group::Subgroup::new(&g, &elems)
                .map(|h| format!("subgroup of order {}", h.order()))
                .map_err(Into::into))
        }
        Document::Action(d) => {
            let g = d.groupoid.as_ref().ok_or_else(|| SchemaError::Reference("a standalone action needs a \"groupoid\" reference".into()))?;
            let carrier = load_groupoid(&resolve(path, g))?;
            let objs = index_of("object", carrier.obj_labels())?;
            let mors = index_of("morphism", carrier.mor_labels())?;
            let bo: Vec<ObjId> = total_table("object", carrier.obj_labels(), &objs, &d.objects)?.into_iter().map(ObjId).collect();
            let bm: Vec<MorId> = total_table("morphism", carrier.mor_labels(), &mors, &d.morphisms)?.into_iter().map(MorId).collect();
            let v = GammaAction::violations(&carrier, &bo, &bm);
            Ok(report(format!("involution on {} objects, {} morphisms", bo.len(), bm.len()), v.iter().map(ToString::to_string).collect()))
        }
        Document::Diagram(_) => law(load_diagram(path).map(|d| {
            let i = d.diagram.index();
            let filtered = if i.is_filtered() { "filtered" } else { "not filtered" };
            format!("{} objects, {} arrows, {filtered}", i.object_count(), i.arrow_count())
        })),
        Document::Site(d) => law(site_from_doc(&d).map(|(s, _)| format!("{} points, {} opens", s.point_count(), s.open_count()))),
        Document::Presheaf(_) => law(load_presheaf(path).map(|p| {
            let s = p.presheaf.site();
            format!("{} opens over {} points", s.open_count(), s.point_count())
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bz2() -> FiniteGroupoid {
        FiniteGroupoid::bg(&FiniteGroup::cyclic(2))
    }

    #[test]
    fn groupoid_round_trip() {
        for g in [bz2(), FiniteGroupoid::indiscrete(vec!["a".into(), "b".into()]), FiniteGroupoid::empty()] {
            let doc = groupoid_to_doc(&g);
            let json = Document::Groupoid(doc.clone()).to_json();
            let Document::Groupoid(back) = parse_document(&json, Path::new("x")).unwrap() else { panic!() };
            assert_eq!(back, doc);
            assert!(groupoid_from_doc(&back).unwrap().same_tables(&g));
        }
    }

    #[test]
    fn corrupted_composition_is_a_law_violation() {
        let mut doc = groupoid_to_doc(&bz2());
        let last = doc.composition.len() - 1;
        let other = doc.morphisms.iter().find(|m| m.id != doc.composition[last][2]).unwrap().id.clone();
        doc.composition[last][2] = other;
        let g = groupoid_from_doc(&doc).unwrap();
        assert!(!g.validate().is_empty());
    }

    #[test]
    fn bad_input_is_classified() {
        let err = parse_document("{", Path::new("x")).unwrap_err();
        assert!(err.is_input_error());
        let err = parse_document(r#"{"kind":"group","schema":2,"group":{"catalog":"S3"}}"#, Path::new("x")).unwrap_err();
        assert!(matches!(err, SchemaError::Version(2)));
        let mut doc = groupoid_to_doc(&bz2());
        doc.morphisms[0].src = "nowhere".into();
        assert!(groupoid_from_doc(&doc).unwrap_err().is_input_error());
    }

    #[test]
    fn group_specs() {
        let s3 = group_from_spec(&GroupSpec::Permutations { degree: 3, generators: vec![vec![1, 0, 2], vec![1, 2, 0]] }).unwrap();
        assert_eq!(s3.order(), 6);
        let z2 = GroupSpec::Cayley {
            elements: vec!["e".into(), "t".into()],
            table: vec![vec!["e".into(), "t".into()], vec!["t".into(), "e".into()]],
        };
        assert_eq!(group_from_spec(&z2).unwrap().order(), 2);
        let bad = GroupSpec::Cayley {
            elements: vec!["e".into(), "t".into()],
            table: vec![vec!["e".into(), "t".into()], vec!["t".into(), "t".into()]],
        };
        assert!(!group_from_spec(&bad).unwrap_err().is_input_error());
        let inv = involution_table(&s3, &InvolutionSpec::Inversion).unwrap();
        assert_eq!(inv, s3.inversion());
    }

    #[test]
    fn action_round_trip() {
        let g = Arc::new(FiniteGroupoid::indiscrete(vec!["a".into(), "b".into()]));
        let a = crate::gamma::GammaAction::swap(&FiniteGroupoid::terminal());
        let doc = action_to_doc(&a);
        let back = action_from_doc(a.carrier().clone(), &doc).unwrap();
        assert_eq!(back.bar_obj_table(), a.bar_obj_table());
        let flip = ActionDoc {
            schema: 1,
            groupoid: None,
            objects: [("a", "b"), ("b", "a")].map(|(x, y)| (x.to_string(), y.to_string())).into(),
            morphisms: g
                .morphisms()
                .map(|m| {
                    let (s, t) = (g.src(m).0, g.tgt(m).0);
                    (g.mor_label(m).to_string(), g.mor_label(MorId((1 - s) * 2 + (1 - t))).to_string())
                })
                .collect(),
        };
        assert!(action_from_doc(g, &flip).is_ok());
    }
}
