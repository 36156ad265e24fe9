//! `grpd`: load groupoid data, compute fixed points, cohomology, colimits
//! and stalks, and run the seeded property suites.
//!
//! Exit codes: 0 success, 1 a property or law fails, 2 unusable input.

mod table;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use grpd_core::cohomology::{class_mass, h1, z1};
use grpd_core::colimit::{colimit_of, hfp_colimit_comparison_unfiltered};
use grpd_core::dot::to_dot;
use grpd_core::gamma::hfp;
use grpd_core::groupoid::FiniteGroupoid;
use grpd_core::presheaf::{stalk, stalk_commutation_check};
use grpd_core::schema::{self, Document, SchemaError};
use grpd_core::suites::{run_suite, Suite, DEFAULT_SEED, DEFAULT_SIZE};
use grpd_core::twisted::{orbit_mass, parameter_fibration, twisted_orbits, z1_theta};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "grpd", version, about = "Finite groupoids with involutions: fixed points, cohomology, colimits, stalks")]
struct RunConfig {
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Instances per randomized property.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE)]
    size: usize,
    /// Emit JSON instead of plain-text tables.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output here instead of stdout. For `hfp` this receives
    /// the fixed-point groupoid document; the summary still goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print load details on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a document of any kind against its laws.
    Validate { path: PathBuf },
    /// Homotopy fixed points of a groupoid under an involution.
    Hfp { groupoid: PathBuf, action: PathBuf },
    /// Nonabelian H¹ of ℤ/2 acting on a group.
    H1 { group: PathBuf, involution: PathBuf },
    /// Twisted-conjugation orbits and the parameter map for (G, θ, B).
    Twisted { group: PathBuf, involution: PathBuf, subgroup: PathBuf },
    /// Colimit of a diagram and, with actions, the fixed-point comparison.
    Colimit { diagram: PathBuf },
    /// Stalks of a presheaf and, with actions, the fixed-point comparison.
    Stalk {
        presheaf: PathBuf,
        /// Only this point.
        #[arg(long)]
        point: Option<String>,
    },
    /// Run a property suite.
    Check {
        /// iota-fibration, hfp-fibration, hfp-weq, swap, bg-decomposition,
        /// parameter, colimit, stalk or all.
        suite: String,
    },
    /// Graphviz rendering of a groupoid.
    ExportDot { groupoid: PathBuf },
}

/// What a command produced: text, a JSON value, and whether its checked
/// properties hold.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Law(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(e) if !e.is_input_error() => 1,
            CliError::Law(_) => 1,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match run(&cfg) {
        Ok(out) => match emit(&cfg, &out) {
            Ok(()) => ExitCode::from(if out.ok { 0 } else { 1 }),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(cfg: &RunConfig, out: &Output) -> anyhow::Result<()> {
    let body = if cfg.json { serde_json::to_string_pretty(&out.json)? + "\n" } else { out.text.clone() };
    match (&cfg.out, &cfg.command) {
        (Some(path), command) if !matches!(command, Command::Hfp { .. }) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))
        }
        _ => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    match &cfg.command {
        Command::Validate { path } => validate(path),
        Command::Hfp { groupoid, action } => hfp_cmd(cfg, groupoid, action),
        Command::H1 { group, involution } => h1_cmd(cfg, group, involution),
        Command::Twisted { group, involution, subgroup } => twisted_cmd(group, involution, subgroup),
        Command::Colimit { diagram } => colimit_cmd(diagram),
        Command::Stalk { presheaf, point } => stalk_cmd(presheaf, point.as_deref()),
        Command::Check { suite } => {
            let suite: Suite = suite.parse().map_err(|e: grpd_core::suites::UnknownSuite| CliError::Input(e.to_string()))?;
            let report = run_suite(suite, cfg.seed, cfg.size);
            Ok(Output { text: report.render(), json: serde_json::to_value(&report).expect("serializable"), ok: report.passed() })
        }
        Command::ExportDot { groupoid } => {
            let g = schema::load_groupoid(groupoid)?;
            let name = groupoid.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let dot = to_dot(&g, &name);
            Ok(Output { json: json!({ "dot": dot }), text: dot, ok: true })
        }
    }
}

fn validate(path: &Path) -> Result<Output, CliError> {
    let r = schema::validate_file(path)?;
    let mut text = format!("{}: {}\n", r.kind, r.summary);
    if r.violations.is_empty() {
        text += "valid\n";
    }
    for v in &r.violations {
        text += &format!("violation: {v}\n");
    }
    Ok(Output { ok: r.violations.is_empty(), json: serde_json::to_value(&r).expect("serializable"), text })
}

/// `(representative, |Aut|)` for each component.
fn classes(g: &FiniteGroupoid) -> Vec<(String, usize)> {
    g.components()
        .representatives
        .iter()
        .map(|&r| (g.obj_label(r).to_string(), g.automorphisms(r).len()))
        .collect()
}

fn groupoid_summary(g: &FiniteGroupoid) -> (String, Value) {
    let cls = classes(g);
    let rows: Vec<Vec<String>> =
        cls.iter().enumerate().map(|(i, (r, a))| vec![i.to_string(), r.clone(), a.to_string()]).collect();
    let card = g.cardinality();
    let text = format!(
        "objects: {}\nmorphisms: {}\nclasses: {}\n{}cardinality: {card}\n",
        g.obj_count(),
        g.mor_count(),
        cls.len(),
        if rows.is_empty() { String::new() } else { table::render(&["class", "representative", "|Aut|"], &rows) },
    );
    let json = json!({
        "objects": g.obj_count(),
        "morphisms": g.mor_count(),
        "classes": cls.iter().map(|(r, a)| json!({"representative": r, "automorphisms": a})).collect::<Vec<_>>(),
        "cardinality": card.to_string(),
    });
    (text, json)
}

fn hfp_cmd(cfg: &RunConfig, groupoid: &Path, action: &Path) -> Result<Output, CliError> {
    let carrier = schema::load_groupoid(groupoid)?;
    let a = schema::load_action(action, carrier)?;
    let h = hfp(&a);
    let g = h.groupoid();
    let doc = Document::Groupoid(schema::groupoid_to_doc(g));
    if let Some(path) = &cfg.out {
        fs::write(path, doc.to_json()).map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))?;
    }
    let iota_fib = h.iota().is_fibration();
    let (mut text, mut json) = groupoid_summary(g);
    text += &format!("iota is a fibration: {}\n", yes(iota_fib));
    json["iota_fibration"] = json!(iota_fib);
    json["groupoid"] = serde_json::to_value(&doc).expect("serializable");
    Ok(Output { text, json, ok: iota_fib })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn h1_cmd(cfg: &RunConfig, group: &Path, involution: &Path) -> Result<Output, CliError> {
    let a = schema::load_group_gamma(group, involution)?;
    if cfg.verbose {
        eprintln!("group of order {}", a.group().order());
    }
    let g = a.group();
    let cs = h1(&a);
    let rows: Vec<Vec<String>> = cs
        .iter()
        .map(|c| vec![g.label(c.representative).to_string(), c.members.len().to_string(), c.stabilizer.order().to_string()])
        .collect();
    let mass = class_mass(&cs);
    let z = z1(&a).len();
    let text = format!(
        "|Z1| = {z}\n|H1| = {}\n{}total sum 1/|K| = {mass}\n",
        cs.len(),
        table::render(&["representative", "orbit size", "|K|"], &rows)
    );
    let json = json!({
        "z1": z,
        "h1": cs.len(),
        "classes": cs.iter().map(|c| json!({
            "representative": g.label(c.representative),
            "orbit_size": c.members.len(),
            "stabilizer_order": c.stabilizer.order(),
        })).collect::<Vec<_>>(),
        "mass": mass.to_string(),
    });
    Ok(Output { text, json, ok: true })
}

fn twisted_cmd(group: &Path, involution: &Path, subgroup: &Path) -> Result<Output, CliError> {
    let d = schema::load_twisted(group, involution, subgroup)?;
    let g = d.group();
    let z = z1_theta(&d);
    let orbits = twisted_orbits(&d);
    let p = parameter_fibration(&d);
    let card = p.hfp.groupoid().cardinality();
    let mass = orbit_mass(&orbits);
    let rows: Vec<Vec<String>> = orbits
        .iter()
        .map(|o| vec![g.label(o.representative).to_string(), o.members.len().to_string(), o.stabilizer.order().to_string()])
        .collect();
    let (fib, weq) = p.verdict();
    let text = format!(
        "|G| = {}\n|B| = {}\n|Z| = {}\n{}cardinality = {card}\nparameter map: fibration {}, weak equivalence {}\n",
        g.order(),
        d.subgroup().order(),
        z.elements.len(),
        table::render(&["representative", "size", "|Stab|"], &rows),
        yes(fib),
        yes(weq),
    );
    let json = json!({
        "group_order": g.order(),
        "subgroup_order": d.subgroup().order(),
        "z": z.elements.len(),
        "orbits": orbits.iter().map(|o| json!({
            "representative": g.label(o.representative),
            "size": o.members.len(),
            "stabilizer_order": o.stabilizer.order(),
        })).collect::<Vec<_>>(),
        "cardinality": card.to_string(),
        "orbit_mass": mass.to_string(),
        "fibration": fib,
        "weak_equivalence": weq,
    });
    Ok(Output { text, json, ok: fib && weq && mass == card })
}

fn colimit_cmd(path: &Path) -> Result<Output, CliError> {
    let loaded = schema::load_diagram(path)?;
    let filtered = loaded.diagram.index().is_filtered();
    let c = colimit_of(&loaded.diagram).map_err(|e| CliError::Law(e.to_string()))?;
    let (mut text, mut json) = groupoid_summary(&c.groupoid);
    text = format!("filtered: {}\n{text}", yes(filtered));
    json["filtered"] = json!(filtered);
    let mut ok = true;
    if let Some(gd) = &loaded.gamma {
        let cmp = hfp_colimit_comparison_unfiltered(gd).map_err(|e| CliError::Law(e.to_string()))?;
        text += &format!("fixed points commute with the colimit: {}\n", yes(cmp.isomorphism));
        json["hfp_comparison_isomorphism"] = json!(cmp.isomorphism);
        ok = cmp.isomorphism || !filtered;
    }
    Ok(Output { text, json, ok })
}

fn stalk_cmd(path: &Path, only: Option<&str>) -> Result<Output, CliError> {
    let loaded = schema::load_presheaf(path)?;
    let x = &loaded.presheaf;
    let site = x.site();
    let points: Vec<usize> = match only {
        Some(p) => vec![site
            .points()
            .iter()
            .position(|q| q == p)
            .ok_or_else(|| CliError::Input(format!("unknown point {p:?}")))?],
        None => (0..site.point_count()).collect(),
    };
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut ok = true;
    for t in points {
        let s = stalk(x, t);
        let (summary, mut entry) = groupoid_summary(s.groupoid());
        let name = &site.points()[t];
        let minimal = &loaded.open_names[site.minimal_open(t)];
        text += &format!("point {name} (smallest neighbourhood {minimal})\n{summary}");
        entry["point"] = json!(name);
        entry["matches_smallest_neighbourhood"] = json!(s.matches_minimal_open);
        if let Some(a) = &loaded.gamma {
            let c = stalk_commutation_check(a, t).map_err(|e| CliError::Law(e.to_string()))?;
            text += &format!("fixed points commute with the stalk: {}\n", yes(c.isomorphism));
            entry["hfp_commutes"] = json!(c.isomorphism);
            ok &= c.isomorphism;
        }
        entries.push(entry);
    }
    Ok(Output { text, json: json!({ "stalks": entries }), ok })
}
