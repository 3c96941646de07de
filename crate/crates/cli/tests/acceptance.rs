//! Acceptance gate. Prints one line per criterion and compares the set of
//! failures against `KNOWN_RED`, so a criterion that cannot be met stays
//! visible as failing while any regression (or unexpected fix) breaks the build.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hom3lr::construct::{tensor_extension, twist};
use hom3lr::core3lie::{self, Hom3Lie};
use hom3lr::corpus::{self, CorpusName, CorpusSpec, D4Params};
use hom3lr::exactq::{q, MatrixQ, Rational, SubspaceQ, Vector};
use hom3lr::repmod::{self, HomRep};
use hom3lr::report::Status;
use hom3lr::rinehart::{self, RinehartBundle};
use hom3lr::split::{self, pullback_root, RootClassPartition, RootForm, RootSystem};
use hom3lr::suite::{run_suite, Suite, SuiteOptions};
use serde_json::{json, Value};

/// Criteria whose exact failure list is expected, with those failures.
const KNOWN_RED: &[(usize, &[&str])] = &[
    (3, &["kernel ideal check: a_stable"]),
    (5, &["twist of the tb-rinehart base is not the twisted example bundle"]),
    (7, &["tprime-split/full: class0.ideal.anchor_stable"]),
];

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

struct Criterion {
    id: usize,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

// ---------------------------------------------------------------------------
// 1. split example through the CLI

fn run_cli(args: &[&str], path: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hom3lr")).args(args).arg(path).output().expect("binary runs")
}

/// `γ_k(h1, h2) = k (m2 n1 - m1 n2)` for `h_i = m_i x + n_i y + c_i 1`.
fn gamma(k: i64, h1: [i64; 3], h2: [i64; 3]) -> i64 {
    k * (h2[0] * h1[1] - h1[0] * h2[1])
}

fn gamma_matrix(k: i64) -> Value {
    let e = |i: usize| {
        let mut v = [0; 3];
        v[i] = 1;
        v
    };
    json!((0..3).map(|i| (0..3).map(|j| gamma(k, e(i), e(j)).to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn graded_match(list: &Value, what: &str, space: impl Fn(i64) -> Vec<String>, failures: &mut Vec<String>) {
    let want: Vec<i64> = (-3..=3).filter(|&k| k != 0).collect();
    let entries = list.as_array().cloned().unwrap_or_default();
    let mut found = Vec::new();
    for e in &entries {
        let k = want.iter().copied().find(|&k| e["space"] == json!(space(k)));
        match k {
            Some(k) if e["matrix"] == gamma_matrix(k) => found.push(k),
            Some(k) => failures.push(format!("{what} on {:?} is not gamma_{k}", space(k))),
            None => failures.push(format!("unexpected {what} space {}", e["space"])),
        }
    }
    found.sort();
    if found != want {
        failures.push(format!("{what}s found for k = {found:?}"));
    }
}

fn tprime_via_cli() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("tprime.json");
    let mut failures = Vec::new();
    let out = run_cli(&["corpus", "tprime-split", "--window", "3", "-o"], &path);
    if !out.status.success() {
        failures.push(format!("corpus exited with {}", out.status));
        return Outcome { failures, detail: String::new() };
    }
    let out = run_cli(&["decompose", "--report", "json"], &path);
    let rep: Value = match serde_json::from_slice(&out.stdout) {
        Ok(v) => v,
        Err(e) => {
            failures.push(format!("decompose output is not JSON: {e}"));
            return Outcome { failures, detail: String::new() };
        }
    };
    if rep["h"] != json!(["x", "y", "1"]) {
        failures.push(format!("H = {}", rep["h"]));
    }
    graded_match(&rep["roots"], "root", |k| vec![format!("xe^{{{k}z}}"), format!("ye^{{{k}z}}")], &mut failures);
    graded_match(&rep["weights"], "weight", |k| vec![format!("e^{{{k}z}}")], &mut failures);
    if rep["a0"] != json!(["1"]) {
        failures.push(format!("A_0 = {}", rep["a0"]));
    }
    let detail = format!(
        "{} roots, {} weights, A_0 = {}, decompose exit {}",
        rep["roots"].as_array().map_or(0, Vec::len),
        rep["weights"].as_array().map_or(0, Vec::len),
        rep["a0"],
        out.status.code().unwrap_or(-1)
    );
    Outcome { failures, detail }
}

// ---------------------------------------------------------------------------
// 2. weak versus full on the Jacobian bundle

/// `x^a y^b z^c` from a label such as `x^2yz`.
fn exponents(label: &str) -> Option<[u32; 3]> {
    if label == "1" {
        return Some([0; 3]);
    }
    let mut out = [0u32; 3];
    let mut chars = label.chars().peekable();
    while let Some(c) = chars.next() {
        let slot = "xyz".find(c)?;
        let mut e = 1;
        if chars.peek() == Some(&'^') {
            chars.next();
            let digits: String = std::iter::from_fn(|| chars.next_if(|d| d.is_ascii_digit())).collect();
            e = digits.parse().ok()?;
        }
        out[slot] = e;
    }
    Some(out)
}

fn mono_name(e: [u32; 3]) -> String {
    let s: String = ["x", "y", "z"]
        .iter()
        .zip(e)
        .map(|(n, k)| match k {
            0 => String::new(),
            1 => n.to_string(),
            _ => format!("{n}^{k}"),
        })
        .collect();
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn jacobian_separation() -> Outcome {
    let b = corpus::jacobian_weak(3);
    let (n, m) = (b.l_dim(), b.a_dim());
    let mut failures = Vec::new();
    let weak = rinehart::check_weak_rinehart(&b);
    if !weak.passed() {
        failures.push(format!("weak suite: {}", weak.first_failure().map_or("?".into(), |r| r.to_string())));
    }
    let full = rinehart::check_full_rinehart(&b);
    if full.status != Status::Fail {
        failures.push(format!("full suite status {}", full.status));
    }
    let lidx = |s: &str| b.lie.labels.iter().position(|l| l == s).expect("label in L");
    let aidx = |s: &str| b.alg.labels.iter().position(|l| l == s).expect("label in A");
    let a = Vector::unit(m, aidx("x"));
    let (f, g) = (Vector::unit(n, lidx("x")), Vector::unit(n, lidx("y")));
    let af = b.act(&a, &f).expect("x*x defined");
    if af != Vector::unit(n, lidx("x^2")) {
        failures.push(format!("a f = {}", b.lie.render(&af)));
    }
    // ρ(af, g)h = 2x ∂_z h and a ρ(f, g)h = x ∂_z h on every basis h.
    let mut separating = 0;
    for h in 0..m {
        let [p, r, s] = exponents(&b.alg.labels[h]).expect("monomial label");
        let x_dz = if s == 0 {
            Vector::zero(m)
        } else {
            Vector::unit(m, aidx(&mono_name([p + 1, r, s - 1]))).scale(&Rational::from_int(s as i64))
        };
        let hv = Vector::unit(m, h);
        let lhs = b.rho_apply(&af, &g, &hv);
        let rhs = b.rho_apply(&f, &g, &hv).and_then(|v| b.alg.mul(&a, &v));
        if lhs.as_ref() != Some(&x_dz.scale(&q(2, 1))) || rhs.as_ref() != Some(&x_dz) {
            failures.push(format!("h = {}: rho(af,g)h = {lhs:?}, a rho(f,g)h = {rhs:?}", b.alg.labels[h]));
        }
        if !x_dz.is_zero() {
            separating += 1;
        }
    }
    let residual = rinehart::anchor_residual_at(&b, &a, &f, &g).expect("defined");
    if residual.is_zero_where_defined() || separating == 0 {
        failures.push("no separating h".into());
    }
    let first = full.first_failure().map_or("none".into(), |r| r.to_string());
    Outcome { failures, detail: format!("{separating} basis h separate; full suite first failure: {first}") }
}

// ---------------------------------------------------------------------------
// 3. kernel of the twisted anchor

fn kernel_constants() -> Outcome {
    let b = corpus::rho_prime(3);
    let mut failures = Vec::new();
    let (k, rep) = rinehart::ker_rho_ideal(&b);
    let one = b.lie.labels.iter().position(|l| l == "1").expect("constant in L");
    if k.space != SubspaceQ::coordinate(b.l_dim(), &[one]) {
        failures.push(format!("kernel = {:?}", rep.kernel));
    }
    let mut witnesses = Vec::new();
    for c in rep.ideal.checks.iter().filter(|c| c.status == Status::Fail) {
        failures.push(format!("kernel ideal check: {}", c.name));
        if let Some(w) = &c.witness {
            witnesses.push(format!("{}: {w}", c.name));
        }
    }
    Outcome { failures, detail: format!("Ker = <{}>; {}", rep.kernel.join(", "), witnesses.join("; ")) }
}

// ---------------------------------------------------------------------------
// 4. identities on seeded constructions

fn seeded_constructions(seeds: std::ops::Range<u64>) -> Vec<(String, RinehartBundle)> {
    let mut out = Vec::new();
    for seed in seeds {
        let p = D4Params::sample(seed);
        let base = corpus::d4_bundle(&D4Params::classical(p.m, p.j, p.kappa.clone()));
        if let Ok(b) = twist(&base, &p.alpha(), &p.phi()) {
            out.push((format!("twist seed {seed}"), b));
        }
        if let Ok(b) = tensor_extension(&p.lie(), &p.algebra(), &p.rho()) {
            out.push((format!("tensor seed {seed}"), b));
        }
    }
    out
}

fn identities_on_constructions() -> Outcome {
    let mut failures = Vec::new();
    let mut tested = 0;
    let mut max_dim = 0;
    for (name, b) in seeded_constructions(0..80) {
        if b.l_dim() > 12 || !rinehart::check_full_rinehart(&b).passed() {
            continue;
        }
        tested += 1;
        max_dim = max_dim.max(b.l_dim());
        let ids = rinehart::check_identity_suite(&b);
        for c in ids.checks.iter().filter(|c| !c.passed()) {
            failures.push(format!("{name}: {c}"));
        }
    }
    if tested < 100 {
        failures.push(format!("only {tested} bundles"));
    }
    Outcome { failures, detail: format!("{tested} bundles, dim L <= {max_dim}") }
}

// ---------------------------------------------------------------------------
// 5. construction soundness

fn same_structure(x: &RinehartBundle, y: &RinehartBundle) -> bool {
    x.lie.bracket == y.lie.bracket && x.lie.alpha == y.lie.alpha && x.alg == y.alg && x.action == y.action && x.rho == y.rho
}

fn full_suite_green(b: &RinehartBundle) -> Option<String> {
    let r = run_suite(b, Suite::All, &SuiteOptions::default());
    r.first_failure().map(|(s, c)| format!("{s}: {c}")).or_else(|| r.failed().then(|| "suite failed".into()))
}

fn construction_soundness() -> Outcome {
    let d = 3;
    let mut failures = Vec::new();
    let target = corpus::rho_prime_tb(d);
    let minus = MatrixQ::scalar(target.l_dim(), &q(-1, 1));
    let id_a = MatrixQ::identity(target.a_dim());
    match twist(&corpus::tb_rinehart(d), &minus, &id_a) {
        Ok(t) => {
            if !same_structure(&t, &target) {
                failures.push("twist of the tb-rinehart base is not the twisted example bundle".into());
            }
            if let Some(f) = full_suite_green(&t) {
                failures.push(format!("twist of tb-rinehart: {f}"));
            }
        }
        Err(e) => failures.push(format!("twist of tb-rinehart: {e}")),
    }
    let mut sign_reversed = "no";
    match twist(&corpus::tb_rinehart_negated(d), &minus, &id_a) {
        Ok(t) if same_structure(&t, &target) => sign_reversed = "yes",
        Ok(_) => {}
        Err(e) => failures.push(format!("twist of the sign-reversed base: {e}")),
    }
    if let Some(f) = full_suite_green(&target) {
        failures.push(format!("twisted example bundle: {f}"));
    }
    let mut tensors = 0;
    for seed in 0..110 {
        let p = D4Params::sample(seed);
        match tensor_extension(&p.lie(), &p.algebra(), &p.rho()) {
            Ok(b) => {
                let full = rinehart::check_full_rinehart(&b);
                let ids = rinehart::check_identity_suite(&b);
                if full.passed() && ids.passed() {
                    tensors += 1;
                } else {
                    failures.push(format!("tensor seed {seed} fails"));
                }
            }
            Err(e) => failures.push(format!("tensor seed {seed}: {e}")),
        }
    }
    let detail = format!("sign-reversed base reproduces the example: {sign_reversed}; {tensors} tensor outputs green");
    Outcome { failures, detail }
}

// ---------------------------------------------------------------------------
// 6. hr3 and hr4 agree under hr2

/// The simple four-dimensional 3-Lie algebra, `[e_j, e_k, e_l] = (-1)^i e_i`
/// for the missing index `i`, twisted by a sign diagonal with product 1.
fn simple_a4(signs: [i64; 3]) -> Hom3Lie {
    let mut br = core3lie::Bracket::new(4);
    for i in 0..4 {
        let rest: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let v = Vector::unit(4, i).scale(&Rational::from_int(if i % 2 == 0 { -1 } else { 1 }));
        br.set(rest[0], rest[1], rest[2], Some(v)).expect("sorted triple");
    }
    let last = signs.iter().product::<i64>();
    let diag: Vec<Rational> = signs.iter().chain([&last]).map(|&s| Rational::from_int(s)).collect();
    Hom3Lie::new(br, MatrixQ::diagonal(&diag))
}

fn scaled(r: &HomRep, t: &Rational) -> HomRep {
    HomRep::new(r.action.map_values(&MatrixQ::scalar(r.dim(), t)), r.phi.clone())
}

fn hr4_equivalence() -> Outcome {
    let mut failures = Vec::new();
    let mut counts = BTreeMap::new();
    let scales = [q(1, 1), q(2, 1), q(-1, 1), q(1, 2), q(0, 1)];
    for seed in 0..60u64 {
        let p = D4Params::sample(seed);
        let d4 = HomRep::new(p.rho(), p.phi());
        let t = &scales[seed as usize % scales.len()];
        let signs = [0, 1, 2].map(|b| if seed >> b & 1 == 1 { -1 } else { 1 });
        let a4 = simple_a4(signs);
        if !core3lie::check_hom_jacobi(&a4).passed() || !core3lie::check_multiplicative(&a4).passed() {
            failures.push(format!("seed {seed}: twisted A4 is not a multiplicative Hom 3-Lie algebra"));
        }
        let cases = [
            ("d4", p.lie(), d4.clone()),
            ("d4 scaled", p.lie(), scaled(&d4, t)),
            ("a4 adjoint", a4.clone(), repmod::adjoint(&a4)),
            ("a4 adjoint scaled", a4.clone(), scaled(&repmod::adjoint(&a4), t)),
        ];
        for (kind, lie, r) in cases {
            let e = repmod::check_hr4_equivalence(&lie, &r);
            if e.hr2.status != Status::Pass {
                continue;
            }
            *counts.entry(if e.hr3.passed() { "hr3 holds" } else { "hr3 fails" }).or_insert(0) += 1;
            if !e.equivalence_observed() {
                failures.push(format!("seed {seed} {kind}: {} disagreements", e.disagreements));
            }
        }
    }
    let total: usize = counts.values().sum();
    if total < 100 {
        failures.push(format!("only {total} representations"));
    }
    Outcome { failures, detail: format!("{total} representations, {counts:?}") }
}

// ---------------------------------------------------------------------------
// 7. split theory

fn split_cases() -> Vec<(&'static str, RinehartBundle, Option<RootClassPartition>)> {
    let core = corpus::tprime_split(1, false);
    let blocks = corpus::direct_sum(&core, &core);
    let h = blocks.h.clone().expect("H");
    let dec = split::root_decompose(&blocks, &h).expect("decomposes");
    let first = SubspaceQ::coordinate(blocks.l_dim(), &(0..core.l_dim()).collect::<Vec<_>>());
    let (one, two): (Vec<usize>, Vec<usize>) = (0..dec.roots.len()).partition(|&i| dec.roots[i].space.is_subspace_of(&first));
    vec![
        ("toy-split", corpus::toy_split(), None),
        ("tprime-split/full", corpus::tprime_split(3, true), None),
        ("tprime-split/core", corpus::tprime_split(3, false), None),
        ("two-block/tprime", blocks.clone(), None),
        ("two-block/tprime blocks", blocks, Some(RootClassPartition { classes: vec![one, two] })),
        ("two-block/toy", corpus::direct_sum(&corpus::toy_split(), &corpus::toy_split()), None),
    ]
}

fn split_regression() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (name, b, partition) in split_cases() {
        let h = b.h.clone().expect("H attached");
        let a = match split::analyze_with(&b, &h, partition) {
            Ok(a) => a,
            Err(e) => {
                notes.push(format!("{name}: not decomposed ({e})"));
                continue;
            }
        };
        if a.grading.len() != 6 {
            failures.push(format!("{name}: {} grading items", a.grading.len()));
        }
        for c in a.grading.iter().chain(&a.eigen).chain(&a.class_laws).chain(&a.ideal_laws) {
            if c.status == Status::Fail || c.status == Status::Blocked {
                failures.push(format!("{name}: {}", c.name));
            }
        }
        let ds = &a.direct_sum;
        if ds.direct_sum.is_some() != ds.hypotheses_hold || ds.direct_sum == Some(false) {
            failures.push(format!("{name}: direct sum {:?} with hypotheses {}", ds.direct_sum, ds.hypotheses_hold));
        }
        if name == "tprime-split/full" && (ds.hypotheses_hold || ds.gap != ["1"]) {
            failures.push(format!("{name}: negative control not reported (gap {:?})", ds.gap));
        }
        notes.push(format!("{name}: {} roots, hypotheses {}", a.roots.roots.len(), if ds.hypotheses_hold { "hold" } else { "fail" }));
    }
    Outcome { failures, detail: notes.join("; ") }
}

// ---------------------------------------------------------------------------
// 8. oracle equivalence

/// Sign of the permutation sorting three distinct indices.
fn parity(t: [usize; 3]) -> i64 {
    let inversions = (t[0] > t[1]) as u32 + (t[0] > t[2]) as u32 + (t[1] > t[2]) as u32;
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Dense structure constants and twist, filled from the stored entries only.
struct Dense {
    n: usize,
    c: Vec<Vec<Rational>>,
    alpha: Vec<Vec<Rational>>,
}

impl Dense {
    fn new(alg: &Hom3Lie) -> Self {
        let n = alg.dim();
        let mut c = vec![vec![Rational::zero(); n]; n * n * n];
        for (key, v) in alg.bracket.entries() {
            let v = v.expect("fully evaluable").to_dense();
            let [i, j, k] = key;
            for p in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                let s = Rational::from_int(parity(p));
                c[(p[0] * n + p[1]) * n + p[2]] = v.iter().map(|x| x * &s).collect();
            }
        }
        let alpha = (0..n).map(|j| alg.alpha.apply(&Vector::unit(n, j)).to_dense()).collect();
        Dense { n, c, alpha }
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        (0..self.n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
    }

    fn br(&self, u: &[Rational], v: &[Rational], w: &[Rational]) -> Vec<Rational> {
        let n = self.n;
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let coef = &(&u[i] * &v[j]) * &w[k];
                    if coef.is_zero() {
                        continue;
                    }
                    for (o, c) in out.iter_mut().zip(&self.c[(i * n + j) * n + k]) {
                        *o = &*o + &(&coef * c);
                    }
                }
            }
        }
        out
    }

    fn a(&self, i: usize) -> Vec<Rational> {
        self.alpha[i].clone()
    }
}

fn sub(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn corpus_small() -> Vec<(String, RinehartBundle)> {
    let mut out: Vec<(String, RinehartBundle)> = Vec::new();
    let variants = [None, Some("poly"), Some("tb"), Some("full"), Some("core"), Some("toy"), Some("tprime")];
    for name in CorpusName::ALL {
        for d in 1..=2 {
            for k in 1..=2 {
                let seeds = if name == CorpusName::D4 { 0..24 } else { 0..1 };
                for seed in seeds {
                    for v in variants {
                        let mut spec = CorpusSpec::new(name).degree(d).window(k).seed(seed);
                        if let Some(v) = v {
                            spec = spec.variant(v);
                        }
                        let Ok(b) = corpus::generate(&spec) else { continue };
                        if b.l_dim() <= 5 && !out.iter().any(|(_, c)| c.lie == b.lie) {
                            out.push((format!("{name} d={d} k={k} seed={seed} {v:?}"), b));
                        }
                    }
                }
            }
        }
    }
    out
}

fn connection_systems() -> Vec<(String, RootSystem)> {
    let mut out = Vec::new();
    let bundles = [
        ("toy-split", corpus::toy_split()),
        ("tprime-split/full k=1", corpus::tprime_split(1, true)),
        ("tprime-split/core k=2", corpus::tprime_split(2, false)),
        ("two-block/tprime", corpus::direct_sum(&corpus::tprime_split(1, false), &corpus::tprime_split(1, false))),
    ];
    for (name, b) in bundles {
        let h = b.h.clone().expect("H");
        let a = split::analyze(&b, &h).expect("decomposes");
        out.push((name.to_string(), a.system));
    }
    // A cyclic twist on a three-dimensional H moves forms around.
    let cyc = MatrixQ::from_entries(3, 3, [(1, 0, q(1, 1)), (2, 1, q(1, 1)), (0, 2, q(1, 1))]);
    let close = |seed: Vec<RootForm>| {
        let mut all: Vec<RootForm> = Vec::new();
        for f in seed {
            let mut cur = f;
            while !all.contains(&cur) {
                all.push(cur.clone());
                cur = pullback_root(&cur, &cyc, 1).expect("invertible");
            }
        }
        all
    };
    let f = |v: [i64; 3]| RootForm::from_pair_values(3, v.iter().map(|&x| Rational::from_int(x)).collect());
    let roots = close(vec![f([1, 0, 0]), f([1, 2, 0])]);
    let weights = close(vec![f([0, 1, 1])]);
    out.push(("cyclic".into(), RootSystem::new(roots, weights, cyc).expect("invertible")));
    let flip = MatrixQ::diagonal(&[q(1, 1), q(-1, 1)]);
    let g = |c: i64| RootForm::from_pair_values(2, vec![Rational::from_int(c)]);
    out.push(("flip".into(), RootSystem::new(vec![g(1), g(2), g(-3)], vec![g(5)], flip).expect("invertible")));
    out
}

fn oracle_equivalence() -> Outcome {
    let mut failures = Vec::new();
    let algebras = corpus_small();
    let mut tuples = 0u64;
    for (name, b) in &algebras {
        let alg = &b.lie;
        if alg.bracket.unevaluable_count() > 0 {
            failures.push(format!("{name}: unevaluable entries"));
            continue;
        }
        let d = Dense::new(alg);
        let n = alg.dim();
        let (mut fil_ok, mut hom_ok) = (true, true);
        for t in 0..n.pow(5) {
            let ix: Vec<usize> = (0..5).map(|p| t / n.pow(p as u32) % n).collect();
            let x: Vec<Vec<Rational>> = ix.iter().map(|&i| d.unit(i)).collect();
            let a: Vec<Vec<Rational>> = ix.iter().map(|&i| d.a(i)).collect();
            let fil = {
                let lhs = d.br(&d.br(&x[0], &x[1], &x[2]), &x[3], &x[4]);
                let r1 = d.br(&d.br(&x[0], &x[3], &x[4]), &x[1], &x[2]);
                let r2 = d.br(&d.br(&x[1], &x[3], &x[4]), &x[2], &x[0]);
                let r3 = d.br(&d.br(&x[2], &x[3], &x[4]), &x[0], &x[1]);
                sub(&sub(&sub(&lhs, &r1), &r2), &r3)
            };
            let hom = {
                let lhs = d.br(&a[0], &a[1], &d.br(&x[2], &x[3], &x[4]));
                let r1 = d.br(&d.br(&x[0], &x[1], &x[2]), &a[3], &a[4]);
                let r2 = d.br(&a[2], &d.br(&x[0], &x[1], &x[3]), &a[4]);
                let r3 = d.br(&a[2], &a[3], &d.br(&x[0], &x[1], &x[4]));
                sub(&sub(&sub(&lhs, &r1), &r2), &r3)
            };
            fil_ok &= fil.iter().all(Rational::is_zero);
            hom_ok &= hom.iter().all(Rational::is_zero);
            let lib_fil = core3lie::filippov_residual(alg, &ix).map(|v| v.to_dense());
            let lib_hom = core3lie::hom_jacobi_residual(alg, &ix).map(|v| v.to_dense());
            if lib_fil.as_ref() != Some(&fil) || lib_hom.as_ref() != Some(&hom) {
                failures.push(format!("{name}: residual mismatch at {ix:?}"));
                break;
            }
            tuples += 1;
        }
        if alg.alpha.is_identity() && core3lie::check_jacobi(alg).passed() != fil_ok {
            failures.push(format!("{name}: filippov verdict differs"));
        }
        if core3lie::check_hom_jacobi(alg).passed() != hom_ok {
            failures.push(format!("{name}: hom-Jacobi verdict differs"));
        }
    }

    let mut chains = 0u64;
    let systems = connection_systems();
    for (name, sys) in &systems {
        let summands = sys.summands();
        for g in &sys.roots {
            for g2 in &sys.roots {
                let bfs = sys.connected(g, g2).expect("roots");
                let lit = sys.literal_connected(g, g2, 1);
                match (&bfs, &lit) {
                    (Some(c), _) if !sys.is_connection(g, g2, c) => failures.push(format!("{name}: BFS chain rejected")),
                    (Some(c), None) if c.pairs.len() <= 1 => failures.push(format!("{name}: literal search misses a short chain")),
                    (None, Some(_)) => failures.push(format!("{name}: BFS misses a literal chain")),
                    _ => {}
                }
            }
            // Every chain (first, μ, β): the summed form against the recurrence.
            for first in sys.orbit(g) {
                for (i, mu) in summands.iter().enumerate() {
                    for beta in &summands[i..] {
                        let c = split::Connection { first: first.clone(), pairs: vec![(mu.clone(), beta.clone())] };
                        let by_hand = pullback_root(&first, &sys.alpha_h, -1)
                            .zip(pullback_root(&mu.add(beta), &sys.alpha_h, -1))
                            .map(|(x, y)| x.add(&y));
                        if by_hand.as_ref() != Some(&sys.literal_partial(&c, 1)) || sys.literal_partial(&c, 1) != sys.recurrence_partial(&c, 1) {
                            failures.push(format!("{name}: partial sums differ"));
                        }
                        chains += 1;
                    }
                }
            }
        }
    }
    let detail = format!("{} algebras, {tuples} basis 5-tuples; {} root systems, {chains} chains", algebras.len(), systems.len());
    Outcome { failures, detail }
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance() {
    let criteria = [
        Criterion { id: 1, title: "split example through the CLI", limit: secs(5), run: tprime_via_cli },
        Criterion { id: 2, title: "weak/full separation on the Jacobian bundle", limit: secs(5), run: jacobian_separation },
        Criterion { id: 3, title: "kernel of the twisted anchor", limit: secs(5), run: kernel_constants },
        Criterion { id: 4, title: "identities on seeded constructions", limit: secs(60), run: identities_on_constructions },
        Criterion { id: 5, title: "construction soundness", limit: secs(60), run: construction_soundness },
        Criterion { id: 6, title: "hr3/hr4 equivalence", limit: secs(30), run: hr4_equivalence },
        Criterion { id: 7, title: "split-theory regression", limit: secs(30), run: split_regression },
        Criterion { id: 8, title: "oracle equivalence", limit: secs(60), run: oracle_equivalence },
    ];
    let mut out = std::io::stdout().lock();
    let mut unexpected = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let mut o = (c.run)();
        let elapsed = start.elapsed();
        if elapsed > c.limit {
            o.failures.push(format!("took {elapsed:?}, limit {:?}", c.limit));
        }
        let known: Vec<String> =
            KNOWN_RED.iter().find(|(id, _)| *id == c.id).map_or(Vec::new(), |(_, f)| f.iter().map(|s| s.to_string()).collect());
        let verdict = match (o.failures.is_empty(), known.is_empty()) {
            (true, _) => "PASS",
            (false, false) => "FAIL (known)",
            (false, true) => "FAIL",
        };
        writeln!(out, "criterion {} {:<46} {:<12} {:>8.2?}  {}", c.id, c.title, verdict, elapsed, o.detail).unwrap();
        for f in &o.failures {
            writeln!(out, "    - {f}").unwrap();
        }
        if o.failures != known {
            unexpected.push(format!("criterion {}: failures {:?}, expected {:?}", c.id, o.failures, known));
        }
    }
    assert!(unexpected.is_empty(), "{}", unexpected.join("\n"));
}
