//! Named check suites over a bundle, assembled into one deterministic report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::core3lie;
use crate::exactq::SubspaceQ;
use crate::repmod;
use crate::report::{CheckReport, Status};
use crate::rinehart::{self, RinehartBundle};
use crate::split::{self, DecomposeReport, SplitError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Rep,
    Rinehart,
    Identities,
    Split,
    Classes,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [Suite::Core, Suite::Rep, Suite::Rinehart, Suite::Identities, Suite::Split, Suite::Classes, Suite::All];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Rep => "rep",
            Suite::Rinehart => "rinehart",
            Suite::Identities => "identities",
            Suite::Split => "split",
            Suite::Classes => "classes",
            Suite::All => "all",
        }
    }

    fn parts(&self) -> &'static [Suite] {
        match self {
            Suite::All => &[Suite::Core, Suite::Rep, Suite::Rinehart, Suite::Identities, Suite::Split, Suite::Classes],
            Suite::Core => &[Suite::Core],
            Suite::Rep => &[Suite::Rep],
            Suite::Rinehart => &[Suite::Rinehart],
            Suite::Identities => &[Suite::Identities],
            Suite::Split => &[Suite::Split],
            Suite::Classes => &[Suite::Classes],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.as_str() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Where the splitting Cartan subalgebra comes from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum CartanChoice {
    /// The one stored in the bundle, else the automatic search.
    #[default]
    Bundle,
    Auto,
    Given(SubspaceQ),
}

impl CartanChoice {
    pub fn resolve(&self, b: &RinehartBundle) -> Result<SubspaceQ, SplitError> {
        match self {
            CartanChoice::Given(h) => Ok(h.clone()),
            CartanChoice::Auto => split::auto_cartan(b),
            CartanChoice::Bundle => match &b.h {
                Some(h) => Ok(h.clone()),
                None => split::auto_cartan(b),
            },
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    pub cartan: CartanChoice,
    /// Explicit root classes for the class ideals.
    pub classes: Option<split::RootClassPartition>,
    pub seed: Option<u64>,
    /// Record wall-clock times; makes reports nondeterministic.
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub status: Status,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

impl Section {
    fn new(name: &str, checks: Vec<CheckReport>) -> Self {
        Section { name: name.into(), status: combine(checks.iter().map(|c| c.status)), checks, note: None, data: None }
    }

    fn blocked(name: &str, why: String) -> Self {
        Section { name: name.into(), status: Status::Blocked, checks: Vec::new(), note: Some(why), data: None }
    }

    fn with_data(mut self, data: Value) -> Self {
        self.data = Some(data);
        self
    }
}

/// Fail dominates Blocked, which dominates Pass; n/a counts as Pass.
pub fn combine(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut out = Status::Pass;
    for s in statuses {
        match s {
            Status::Fail => return Status::Fail,
            Status::Blocked => out = Status::Blocked,
            _ => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub l_dim: usize,
    pub a_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub status: Status,
    pub sections: Vec<Section>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl SuiteReport {
    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// First violation across all sections, with its section name.
    pub fn first_failure(&self) -> Option<(&str, &CheckReport)> {
        self.sections
            .iter()
            .flat_map(|s| s.checks.iter().map(move |c| (s.name.as_str(), c)))
            .find(|(_, c)| c.status == Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} on dim L = {}, dim A = {}: {}\n", self.suite, self.l_dim, self.a_dim, self.status);
        for s in &self.sections {
            out.push_str(&format!("\n[{}] {}\n", s.name, s.status));
            if let Some(n) = &s.note {
                out.push_str(&format!("  note: {n}\n"));
            }
            for c in &s.checks {
                for line in c.to_string().lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            if let Some(d) = &s.data {
                out.push_str(&format!("  data: {}\n", serde_json::to_string(d).expect("json values serialize")));
            }
        }
        if let Some((sec, c)) = self.first_failure() {
            out.push_str(&format!("\nfirst failure: [{sec}] {}", c.name));
            if let Some(w) = &c.witness {
                out.push_str(&format!(": {w}"));
            }
            out.push('\n');
        }
        out
    }
}

fn render(b: &RinehartBundle, s: &SubspaceQ) -> Vec<String> {
    s.basis().iter().map(|v| b.lie.render(v)).collect()
}

fn core_section(b: &RinehartBundle) -> Section {
    let lie = &b.lie;
    let regular = core3lie::is_regular(lie);
    let checks = vec![
        core3lie::check_hom_jacobi(lie),
        core3lie::check_multiplicative(lie),
        CheckReport::verdict("alpha_invertible", lie.alpha.is_invertible(), None),
    ];
    let z = core3lie::center_solved(lie);
    Section::new("core", checks).with_data(json!({
        "regular": regular,
        "center": render(b, &z.space),
        "center_dropped_equations": z.dropped,
    }))
}

fn rep_section(b: &RinehartBundle) -> Section {
    let rep = b.rep();
    let eq = repmod::check_hr4_equivalence(&b.lie, &rep);
    let mut checks = vec![eq.hr2.clone(), eq.hr3.clone(), eq.hr4.clone(), repmod::check_hr1(&b.lie, &rep)];
    checks.push(match eq.status {
        Status::Blocked => CheckReport::blocked("hr3_hr4_agree", "hr2 fails"),
        s => CheckReport::verdict("hr3_hr4_agree", s == Status::Pass, (eq.disagreements > 0).then(|| format!("{} disagreeing tuples", eq.disagreements))),
    });
    checks.extend(repmod::check_classical_rep(&b.lie, &rep));
    let mut s = Section::new("rep", checks);
    // hr4 is informative only; its failure with hr3 failing is consistent.
    s.status = combine(s.checks.iter().filter(|c| c.name != "hr3" && c.name != "hr4").map(|c| c.status));
    s.note = Some("hr3 and hr4 are reported; the section verdict uses hr1, hr2, their agreement and the classical axioms".into());
    s
}

fn rinehart_sections(b: &RinehartBundle) -> Vec<Section> {
    let full = rinehart::check_full_rinehart(b);
    let mut axioms = Section::new("rinehart", full.checks);
    axioms.note = full.note;
    if full.status == Status::Blocked && axioms.status != Status::Fail {
        axioms.status = Status::Blocked;
    }
    axioms.checks.push(rinehart::check_regular(b));
    axioms.status = combine([axioms.status, axioms.checks.last().unwrap().status]);

    let (_, ker) = rinehart::ker_rho_ideal(b);
    let kernel = Section::new("ker_rho", ker.ideal.checks.clone()).with_data(json!({
        "kernel": ker.kernel,
        "dim": ker.dim,
        "dropped_equations": ker.dropped_equations,
    }));

    let c = rinehart::centers(b);
    let mut checks = vec![CheckReport::verdict("z_rho_is_center_cap_kernel", c.consistent(), None)];
    checks.extend(rinehart::rinehart_ideal_check(b, &c.z_rho.space).checks.into_iter().map(|mut r| {
        r.name = format!("z_rho_ideal.{}", r.name);
        r
    }));
    let z_l_a: Vec<String> = c.z_l_a.space.basis().iter().map(|v| b.alg.render(v)).collect();
    let centers = Section::new("centers", checks).with_data(json!({
        "z_l_a": z_l_a,
        "z_l_a_dropped_equations": c.z_l_a.dropped,
        "z_rho": render(b, &c.z_rho.space),
        "z_rho_dropped_equations": c.z_rho.dropped,
    }));
    vec![axioms, kernel, centers]
}

fn identities_section(b: &RinehartBundle) -> Section {
    let r = rinehart::check_identity_suite(b);
    let mut s = Section::new("identities", r.checks);
    s.note = r.note;
    s
}

fn split_sections(b: &RinehartBundle, opts: &SuiteOptions, want: &[Suite]) -> Vec<Section> {
    let names: Vec<&str> = want.iter().map(|s| s.as_str()).collect();
    let blocked = |why: String| names.iter().map(|n| Section::blocked(n, why.clone())).collect();
    let h = match opts.cartan.resolve(b) {
        Ok(h) => h,
        Err(e) => return blocked(format!("no splitting Cartan subalgebra: {e}")),
    };
    let a = match split::analyze_with(b, &h, opts.classes.clone()) {
        Ok(a) => a,
        Err(e) => return blocked(format!("decomposition failed: {e}")),
    };
    let rep = DecomposeReport::new(b, &a);
    let mut out = Vec::new();
    if want.contains(&Suite::Split) {
        let checks = a.grading.iter().chain(&a.eigen).cloned().collect();
        out.push(Section::new("split", checks).with_data(json!({
            "h": rep.h,
            "roots": rep.roots,
            "weights": rep.weights,
            "a0": rep.a0,
        })));
    }
    if want.contains(&Suite::Classes) {
        let mut checks: Vec<CheckReport> = a.class_laws.iter().chain(&a.ideal_laws).cloned().collect();
        checks.extend(a.weight_classes.checks.iter().cloned());
        let ds = &a.direct_sum;
        checks.push(match ds.direct_sum {
            Some(ok) => CheckReport::verdict("direct_sum", ok, None),
            None => CheckReport::not_applicable("direct_sum", direct_sum_reason(ds)),
        });
        out.push(Section::new("classes", checks).with_data(json!({
            "connection_classes": rep.connection_classes,
            "classes": rep.classes,
            "ideals": rep.ideals,
            "direct_sum": rep.direct_sum,
            "weight_classes": {
                "classes": rep.weight_classes.classes,
                "class_algebras": rep.weight_classes.class_algebras,
                "z_l_a_zero": rep.weight_classes.z_l_a_zero,
                "a0_generated": rep.weight_classes.a0_generated,
                "direct_sum": rep.weight_classes.direct_sum,
            },
        })));
    }
    out
}

/// Which direct-sum hypothesis fails, with the defect.
pub fn direct_sum_reason(ds: &split::DirectSumReport) -> String {
    let mut why = Vec::new();
    if !ds.h_generated {
        why.push(format!("H is not generated (gap: {})", ds.gap.join(", ")));
    }
    if !ds.z_rho_zero {
        why.push(format!("Z_rho(L) is nonzero ({})", ds.z_rho.join(", ")));
    }
    why.join("; ")
}

pub fn run_suite(b: &RinehartBundle, suite: Suite, opts: &SuiteOptions) -> SuiteReport {
    let mut sections = Vec::new();
    let mut timings = BTreeMap::new();
    let parts = suite.parts();
    let mut time = |name: &str, f: &mut dyn FnMut() -> Vec<Section>| {
        let t = Instant::now();
        let out = f();
        timings.insert(name.to_string(), t.elapsed().as_millis());
        out
    };
    for part in parts {
        match part {
            Suite::Core => sections.extend(time("core", &mut || vec![core_section(b)])),
            Suite::Rep => sections.extend(time("rep", &mut || vec![rep_section(b)])),
            Suite::Rinehart => sections.extend(time("rinehart", &mut || rinehart_sections(b))),
            Suite::Identities => sections.extend(time("identities", &mut || vec![identities_section(b)])),
            // Split and classes share one decomposition.
            Suite::Split if parts.contains(&Suite::Classes) => {
                sections.extend(time("split", &mut || split_sections(b, opts, &[Suite::Split, Suite::Classes])))
            }
            Suite::Split => sections.extend(time("split", &mut || split_sections(b, opts, &[Suite::Split]))),
            Suite::Classes if parts.contains(&Suite::Split) => {}
            Suite::Classes => sections.extend(time("classes", &mut || split_sections(b, opts, &[Suite::Classes]))),
            Suite::All => unreachable!("expanded by parts()"),
        }
    }
    SuiteReport {
        suite,
        l_dim: b.l_dim(),
        a_dim: b.a_dim(),
        seed: opts.seed,
        status: combine(sections.iter().map(|s| s.status)),
        sections,
        timings_ms: opts.timings.then_some(timings),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn toy_is_green_everywhere() {
        let r = run_suite(&corpus::toy_split(), Suite::All, &SuiteOptions::default());
        assert_eq!(r.status, Status::Pass, "{}", r.to_text());
        let names: Vec<&str> = r.sections.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["core", "rep", "rinehart", "ker_rho", "centers", "identities", "split", "classes"]);
    }

    #[test]
    fn reports_are_deterministic() {
        let b = corpus::tprime_split(1, true);
        let opts = SuiteOptions { seed: Some(3), ..Default::default() };
        let a = serde_json::to_string(&run_suite(&b, Suite::All, &opts)).unwrap();
        let c = serde_json::to_string(&run_suite(&b, Suite::All, &opts)).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn weak_example_fails_with_witness() {
        let r = run_suite(&corpus::jacobian_weak(2), Suite::Rinehart, &SuiteOptions::default());
        assert!(r.failed());
        let (sec, c) = r.first_failure().unwrap();
        assert_eq!((sec, c.name.as_str()), ("rinehart", "anchor_linear_left"));
        assert!(r.to_text().contains("first failure"));
    }

    #[test]
    fn missing_cartan_blocks_split() {
        let lie = core3lie::Hom3Lie::new(corpus::d4_bracket(), crate::exactq::MatrixQ::identity(4));
        let b = RinehartBundle::over_scalars(lie);
        let opts = SuiteOptions { cartan: CartanChoice::Given(SubspaceQ::full(4)), ..Default::default() };
        let r = run_suite(&b, Suite::Split, &opts);
        assert_eq!(r.status, Status::Blocked);
        assert!(r.sections[0].note.as_ref().unwrap().contains("not abelian"));
    }
}
