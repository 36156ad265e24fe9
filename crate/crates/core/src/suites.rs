//! Seeded property suites. Each suite draws a corpus from [`crate::generate`]
//! or [`crate::fixtures`], checks one family of properties and renders a
//! deterministic report: no timings, no addresses, fixed ordering.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use crate::cohomology::{bg_hfp_decomposition, h1, z1, GroupGammaAction};
use crate::colimit::{hfp_colimit_comparison, hfp_colimit_comparison_unfiltered, FilteredDiagram};
use crate::fixtures::{group_gamma_fixtures, groupoid_corpus, local_not_sectionwise, twisted_fixtures};
use crate::gamma::{hfp, hfp_map, iota, swap_comparison, EquivariantMap, GammaAction};
use crate::generate::{
    point_at, random_filtered_diagram, random_gamma_groupoid, random_group_gamma, random_point_inclusion,
    random_presheaf, random_twisted, random_weak_equivalence, random_fibration, seeded, unfiltered_control,
};
use crate::group::FiniteGroup;
use crate::groupoid::{FiniteGroupoid, ObjId};
use crate::presheaf::{presheaf_hfp, stalk_commutation_check, FiniteSite, PresheafGammaAction, TwistedPresheaf};
use crate::twisted::{orbit_mass, parameter_fibration, twisted_orbits, InvolutiveGroupData};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SIZE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    IotaFibration,
    HfpFibration,
    HfpWeakEquivalence,
    Swap,
    BgDecomposition,
    Parameter,
    Colimit,
    Stalk,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::IotaFibration,
        Suite::HfpFibration,
        Suite::HfpWeakEquivalence,
        Suite::Swap,
        Suite::BgDecomposition,
        Suite::Parameter,
        Suite::Colimit,
        Suite::Stalk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::IotaFibration => "iota-fibration",
            Suite::HfpFibration => "hfp-fibration",
            Suite::HfpWeakEquivalence => "hfp-weq",
            Suite::Swap => "swap",
            Suite::BgDecomposition => "bg-decomposition",
            Suite::Parameter => "parameter",
            Suite::Colimit => "colimit",
            Suite::Stalk => "stalk",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// One checked property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub suite: Suite,
    pub property: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: Suite,
    pub seed: u64,
    pub size: usize,
    pub lines: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn line(&self, property: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.property == property)
    }

    pub fn render(&self) -> String {
        let mut out = format!("suite {} seed {} size {}\n", self.suite, self.seed, self.size);
        for l in &self.lines {
            let verdict = if l.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict} {}/{}: {}", l.suite, l.property, l.detail);
        }
        let failed = self.lines.iter().filter(|l| !l.passed).count();
        let _ = writeln!(out, "{} passed, {failed} failed", self.lines.len() - failed);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Counts instances satisfying a property; keeps the first few failures.
struct Tally {
    property: &'static str,
    total: usize,
    passed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(property: &'static str) -> Self {
        Self { property, total: 0, passed: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, name: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 3 {
            self.failures.push(name());
        }
    }

    fn line(self, suite: Suite) -> CheckLine {
        let mut detail = format!("{}/{} instances", self.passed, self.total);
        if !self.failures.is_empty() {
            let _ = write!(detail, "; first failures: {}", self.failures.join(" | "));
        }
        CheckLine { suite, property: self.property.into(), passed: self.total > 0 && self.passed == self.total, detail }
    }
}

/// Passes when at least one instance exhibits the expected behaviour.
fn witness_line(suite: Suite, property: &str, found: usize, total: usize) -> CheckLine {
    CheckLine {
        suite,
        property: property.into(),
        passed: found > 0,
        detail: format!("{found}/{total} instances exhibit it"),
    }
}

fn exact_line(suite: Suite, property: &str, expected: String, found: String) -> CheckLine {
    CheckLine {
        suite,
        property: property.into(),
        passed: expected == found,
        detail: format!("expected {expected}, found {found}"),
    }
}

pub fn run_suite(suite: Suite, seed: u64, size: usize) -> SuiteReport {
    let lines = match suite {
        Suite::All => Suite::EACH.into_iter().flat_map(|s| run_suite(s, seed, size).lines).collect(),
        Suite::IotaFibration => iota_fibration(seed, size),
        Suite::HfpFibration => hfp_fibration(seed, size),
        Suite::HfpWeakEquivalence => hfp_weak_equivalence(seed, size),
        Suite::Swap => swap(seed, size),
        Suite::BgDecomposition => bg_decomposition(seed, size),
        Suite::Parameter => parameter(seed, size),
        Suite::Colimit => colimit(seed, size),
        Suite::Stalk => stalk(seed, size),
    };
    SuiteReport { schema: 1, suite, seed, size, lines }
}

fn iota_fibration(seed: u64, size: usize) -> Vec<CheckLine> {
    let s = Suite::IotaFibration;
    let mut rng = seeded(seed);
    let mut valid = Tally::new("hfp-valid");
    let mut fib = Tally::new("iota-is-fibration");
    let mut fixtures = Tally::new("iota-is-fibration-on-fixtures");
    for _ in 0..size {
        let a = random_gamma_groupoid(&mut rng, 60);
        let (h, i) = iota(&a.value);
        valid.record(h.groupoid().is_valid(), || a.name.clone());
        fib.record(i.is_functor() && i.is_fibration(), || a.name.clone());
    }
    for (name, a) in crate::fixtures::gamma_fixtures() {
        let (_, i) = iota(&a);
        fixtures.record(i.is_fibration(), || name);
    }
    vec![valid.line(s), fib.line(s), fixtures.line(s)]
}

fn hfp_fibration(seed: u64, size: usize) -> Vec<CheckLine> {
    let s = Suite::HfpFibration;
    let mut rng = seeded(seed);
    let mut input = Tally::new("input-is-fibration");
    let mut output = Tally::new("hfp-map-is-fibration");
    for _ in 0..size {
        let f = random_fibration(&mut rng);
        input.record(f.value.map().is_fibration(), || f.name.clone());
        let h = hfp_map(&f.value);
        output.record(h.map.is_functor() && h.map.is_fibration(), || f.name.clone());
    }
    let controls = (size / 10).max(10);
    let found = (0..controls)
        .filter(|_| {
            let f = random_point_inclusion(&mut rng);
            !f.value.map().is_fibration() && !hfp_map(&f.value).map.is_fibration()
        })
        .count();
    vec![input.line(s), output.line(s), witness_line(s, "non-fibration-control", found, controls)]
}

fn hfp_weak_equivalence(seed: u64, size: usize) -> Vec<CheckLine> {
    let s = Suite::HfpWeakEquivalence;
    let mut rng = seeded(seed);
    let mut input = Tally::new("input-is-weak-equivalence");
    let mut output = Tally::new("hfp-map-is-weak-equivalence");
    let mut card = Tally::new("hfp-cardinality-preserved");
    for _ in 0..size {
        let f = random_weak_equivalence(&mut rng);
        input.record(f.value.map().is_weak_equivalence(), || f.name.clone());
        let h = hfp_map(&f.value);
        output.record(h.map.is_functor() && h.map.is_weak_equivalence(), || f.name.clone());
        card.record(h.dom.groupoid().cardinality() == h.cod.groupoid().cardinality(), || f.name.clone());
    }
    // `∗ → 𝔹G` is never a weak equivalence for nontrivial G.
    let fixtures: Vec<_> = group_gamma_fixtures().into_iter().filter(|(_, a)| a.group().order() > 1).collect();
    let found = fixtures
        .iter()
        .filter(|(_, a)| {
            let f = point_at(&a.bg_action(), ObjId(0));
            !f.map().is_weak_equivalence() && !hfp_map(&f).map.is_weak_equivalence()
        })
        .count();
    vec![input.line(s), output.line(s), card.line(s), witness_line(s, "non-equivalence-control", found, fixtures.len())]
}

fn swap(seed: u64, size: usize) -> Vec<CheckLine> {
    let s = Suite::Swap;
    let mut rng = seeded(seed);
    let mut corpus: Vec<(String, Arc<FiniteGroupoid>)> = groupoid_corpus();
    corpus.extend((0..size).map(|_| {
        let a = random_gamma_groupoid(&mut rng, 12);
        (a.name, a.value.carrier().clone())
    }));
    let mut verdict = Tally::new("swap-comparison-is-weak-equivalence");
    let mut card = Tally::new("swap-cardinality");
    for (name, x) in corpus {
        let c = swap_comparison(x.clone());
        verdict.record(c.weak_equivalence && c.map.is_weak_equivalence(), || name.clone());
        card.record(x.cardinality() == c.hfp.groupoid().cardinality(), || name.clone());
    }
    vec![verdict.line(s), card.line(s)]
}

/// `(|Z¹|, |H¹|, sorted |K_σ|)` from the cohomology side.
fn cohomology_counts(a: &GroupGammaAction) -> (usize, usize, Vec<usize>) {
    let classes = h1(a);
    let mut ks: Vec<usize> = classes.iter().map(|c| c.stabilizer.order()).collect();
    ks.sort_unstable();
    (z1(a).len(), classes.len(), ks)
}

/// The same triple read off `hfp(𝔹G)` directly.
fn hfp_counts(a: &GroupGammaAction) -> (usize, usize, Vec<usize>) {
    let h = hfp(&a.bg_action());
    let g = h.groupoid();
    let comps = g.components();
    let mut auts: Vec<usize> = comps.representatives.iter().map(|&r| g.automorphisms(r).len()).collect();
    auts.sort_unstable();
    (g.obj_count(), comps.count(), auts)
}

fn bg_decomposition(seed: u64, size: usize) -> Vec<CheckLine> {
    let s = Suite::BgDecomposition;
    let mut rng = seeded(seed);
    let mut corpus = group_gamma_fixtures();
    corpus.extend((0..size).map(|_| {
        let a = random_group_gamma(&mut rng, 24);
        (a.name, a.value)
    }));
    let mut verdict = Tally::new("decomposition-is-weak-equivalence");
    let mut counts = Tally::new("counts-match-hfp");
    for (name, a) in &corpus {
        let d = bg_hfp_decomposition(a);
        verdict.record(d.weak_equivalence && d.map.is_weak_equivalence(), || name.clone());
        counts.record(cohomology_counts(a) == hfp_counts(a), || name.clone());
    }
    let show = |(z, h, k): (usize, usize, Vec<usize>)| format!("|Z1|={z} |H1|={h} |K|={k:?}");
    let z2 = GroupGammaAction::trivial(FiniteGroup::cyclic(2));
    let z4 = FiniteGroup::cyclic(4);
    let z4 = GroupGammaAction::new(z4.clone(), z4.inversion()).expect("negation");
    vec![
        verdict.line(s),
        counts.line(s),
        exact_line(s, "z2-trivial", "|Z1|=2 |H1|=2 |K|=[2, 2]".into(), show(cohomology_counts(&z2))),
        exact_line(s, "z4-negation", "|Z1|=4 |H1|=2 |K|=[2, 2]".into(), show(cohomology_counts(&z4))),
    ]
}

fn parameter(seed: u64, size: usize) -> Vec<CheckLine> {
    let s = Suite::Parameter;
    let mut rng = seeded(seed);
    let mut corpus = twisted_fixtures();
    corpus.extend((0..size).map(|_| {
        let d = random_twisted(&mut rng, 8);
        (d.name, d.value)
    }));
    let mut verdict = Tally::new("parameter-map-is-acyclic-fibration");
    let mut steps = Tally::new("intermediate-steps");
    let mut mass = Tally::new("orbit-mass-equals-cardinality");
    for (name, d) in &corpus {
        let p = parameter_fibration(d);
        verdict.record(p.verdict() == (true, true), || name.clone());
        let ok = p.xy.mutually_inverse
            && p.xy.equivariant
            && p.kernel_free
            && p.right_factor_free
            && p.quotient_agrees
            && p.intermediate_isomorphisms;
        steps.record(ok, || name.clone());
        mass.record(orbit_mass(&twisted_orbits(d)) == p.hfp.groupoid().cardinality(), || name.clone());
    }
    let s3 = FiniteGroup::symmetric(3);
    let t = s3.find("(1 2)").expect("transposition");
    let d = InvolutiveGroupData::new(s3.clone(), s3.identity_map(), &[s3.identity(), t]).expect("valid");
    let p = parameter_fibration(&d);
    let g = p.hfp.groupoid();
    let mut sizes: Vec<usize> = twisted_orbits(&d).iter().map(|o| o.members.len()).collect();
    sizes.sort_unstable();
    let found = format!(
        "objects={} classes={} cardinality={} orbit sizes={sizes:?}",
        g.obj_count(),
        g.components().count(),
        g.cardinality()
    );
    vec![
        verdict.line(s),
        steps.line(s),
        mass.line(s),
        exact_line(s, "s3-id-transposition", "objects=8 classes=3 cardinality=2 orbit sizes=[1, 1, 2]".into(), found),
    ]
}

fn colimit(seed: u64, size: usize) -> Vec<CheckLine> {
    let s = Suite::Colimit;
    let mut rng = seeded(seed);
    let mut iso = Tally::new("hfp-commutes-with-filtered-colimit");
    for _ in 0..size {
        let d = random_filtered_diagram(&mut rng);
        let ok = hfp_colimit_comparison(&d.value).map(|c| c.isomorphism).unwrap_or(false);
        iso.record(ok, || d.name.clone());
    }
    let controls = [1, 2, 3];
    let found = controls
        .iter()
        .filter(|&&m| {
            let d = unfiltered_control(m);
            let rejected = FilteredDiagram::new(d.clone()).is_err();
            let differs = hfp_colimit_comparison_unfiltered(&d).map(|c| !c.isomorphism).unwrap_or(false);
            rejected && differs
        })
        .count();
    vec![iso.line(s), witness_line(s, "unfiltered-control", found, controls.len())]
}

fn stalk(seed: u64, size: usize) -> Vec<CheckLine> {
    let s = Suite::Stalk;
    let mut rng = seeded(seed);
    let mut commute = Tally::new("stalk-commutes-with-hfp");
    let mut weq = Tally::new("sectionwise-weq-implies-local");
    let mut fib = Tally::new("sectionwise-fib-implies-local");
    let mut iota_fib = Tally::new("presheaf-iota-sectionwise-fibration");
    let mut points = Tally::new("points-separate-opens");
    let check_all = |a: &PresheafGammaAction| {
        let site = a.presheaf().site().clone();
        (0..site.point_count()).all(|t| {
            stalk_commutation_check(a, t).map(|c| c.isomorphism && c.stalk_agrees).unwrap_or(false)
        })
    };
    for _ in 0..size {
        let p = random_presheaf(&mut rng);
        let inst = &p.value;
        commute.record(check_all(&inst.source) && check_all(&inst.target), || p.name.clone());
        weq.record(!inst.map.is_sectionwise_weq() || inst.map.is_local_weq(), || p.name.clone());
        fib.record(!inst.map.is_sectionwise_fib() || inst.map.is_local_fib(), || p.name.clone());
        iota_fib.record(presheaf_hfp(&inst.source).iota.is_sectionwise_fib(), || p.name.clone());
        points.record(inst.source.presheaf().site().points_separate_opens(), || p.name.clone());
    }
    let mut twisted = Tally::new("twisted-presheaf-stalks");
    let site = Arc::new(FiniteSite::sierpinski());
    for (name, d) in twisted_fixtures() {
        let a = TwistedPresheaf::constant(site.clone(), d).double_coset_presheaf();
        twisted.record(check_all(&a), || name);
    }
    let f = local_not_sectionwise();
    let local_only = usize::from(f.is_local_weq() && !f.is_sectionwise_weq());
    vec![
        commute.line(s),
        weq.line(s),
        fib.line(s),
        iota_fib.line(s),
        points.line(s),
        twisted.line(s),
        witness_line(s, "local-not-sectionwise-fixture", local_only, 1),
    ]
}

/// Exact cardinality of a Γ-groupoid's fixed points; used by the CLI.
pub fn hfp_cardinality(a: &GammaAction) -> BigRational {
    hfp(a).groupoid().cardinality()
}

/// An equivariant map's fixed-point map, checked both ways.
pub fn hfp_verdicts(f: &EquivariantMap) -> (bool, bool) {
    let h = hfp_map(f);
    (h.map.is_fibration(), h.map.is_weak_equivalence())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass_and_repeat() {
        for s in Suite::EACH {
            let a = run_suite(s, 3, 4);
            assert!(a.passed(), "{}", a.render());
            assert_eq!(a.render(), run_suite(s, 3, 4).render());
        }
    }
}
