//! `hom3lr`: build, check and decompose Hom 3-Lie-Rinehart bundles.
//!
//! Exit codes: 0 when every evaluated property holds, 1 when a checked
//! property fails, 2 on input or validation errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hom3lr::bundle;
use hom3lr::construct;
use hom3lr::corpus::{self, CorpusName, CorpusSpec};
use hom3lr::exactq::{MatrixQ, Rational, SubspaceQ, Vector};
use hom3lr::rinehart::RinehartBundle;
use hom3lr::split::{self, DecomposeReport, RootClassPartition};
use hom3lr::suite::{self, CartanChoice, Suite, SuiteOptions};

#[derive(Parser)]
#[command(name = "hom3lr", version, about = "Exact checks and split decompositions for Hom 3-Lie-Rinehart algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a built-in example bundle.
    Corpus(CorpusArgs),
    /// Run a check suite on a bundle file.
    Check(CheckArgs),
    /// Root and weight decomposition, root classes and class ideals.
    Decompose(DecomposeArgs),
    /// Decide whether two roots are connected and print a connection.
    Connect(ConnectArgs),
    /// Build a new bundle from an existing one.
    #[command(subcommand)]
    Construct(ConstructCmd),
}

#[derive(Clone, Copy, ValueEnum, Default, PartialEq, Eq)]
enum ReportFormat {
    Json,
    #[default]
    Text,
}

#[derive(Args)]
struct CorpusArgs {
    /// Generator name; omit with --list.
    name: Option<String>,
    #[arg(long)]
    list: bool,
    #[arg(long, default_value_t = 3)]
    degree_cap: u32,
    #[arg(long, default_value_t = 3)]
    window: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    variant: Option<String>,
    /// Output file; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CartanArgs {
    /// `auto`, or a JSON file holding a list of sparse vectors.
    #[arg(long = "H", value_name = "FILE|auto")]
    h: Option<String>,
    /// JSON file with explicit root classes, e.g. `[[0, 2], [1]]`.
    #[arg(long)]
    classes: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    bundle: PathBuf,
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, value_enum, default_value_t)]
    report: ReportFormat,
    #[arg(long)]
    seed: Option<u64>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    cartan: CartanArgs,
}

#[derive(Args)]
struct DecomposeArgs {
    bundle: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    report: ReportFormat,
    #[command(flatten)]
    cartan: CartanArgs,
}

#[derive(Args)]
struct ConnectArgs {
    bundle: PathBuf,
    /// Root index as listed by `decompose`; with --to, omit both for all classes.
    #[arg(long, requires = "to")]
    from: Option<usize>,
    #[arg(long, requires = "from")]
    to: Option<usize>,
    /// Also search connections by literal summation up to this many pairs.
    #[arg(long, default_value_t = 1)]
    literal_pairs: usize,
    #[arg(long, value_enum, default_value_t)]
    report: ReportFormat,
    #[command(flatten)]
    cartan: CartanArgs,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// `(α, φ)`-twist of a 3-Lie-Rinehart algebra.
    Twist {
        bundle: PathBuf,
        /// `id`, `-id`, `diag:c1,c2,...` or a JSON sparse matrix file.
        #[arg(long, default_value = "id", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "id", allow_hyphen_values = true)]
        phi: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Scalar extension `A ⊗ L`.
    Tensor {
        bundle: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// An error that maps to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Corpus(a) => run_corpus(a),
        Command::Check(a) => run_check(a),
        Command::Decompose(a) => run_decompose(a),
        Command::Connect(a) => run_connect(a),
        Command::Construct(c) => run_construct(c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), InputError> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| InputError(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_report<T: Serialize>(format: ReportFormat, value: &T, text: impl FnOnce() -> String) -> Result<(), InputError> {
    let s = match format {
        ReportFormat::Json => serde_json::to_string_pretty(value)? + "\n",
        ReportFormat::Text => text(),
    };
    emit(&s, None)
}

fn load(path: &Path) -> Result<RinehartBundle, InputError> {
    bundle::load(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<serde_json::Value, InputError> {
    let s = fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_sparse_vector(v: &serde_json::Value, dim: usize, at: &str) -> Result<Vector, InputError> {
    let pairs: Vec<(usize, String)> = serde_json::from_value(v.clone()).map_err(|e| InputError(format!("{at}: {e}")))?;
    let mut out = Vec::new();
    for (i, c) in pairs {
        if i >= dim {
            return Err(InputError(format!("{at}: index {i} out of range for dimension {dim}")));
        }
        out.push((i, c.parse::<Rational>().map_err(|e| InputError(format!("{at}: {c:?}: {e}")))?));
    }
    Ok(Vector::from_pairs(dim, out))
}

fn cartan(args: &CartanArgs, b: &RinehartBundle) -> Result<(CartanChoice, Option<RootClassPartition>), InputError> {
    let choice = match args.h.as_deref() {
        None => CartanChoice::Bundle,
        Some("auto") => CartanChoice::Auto,
        Some(file) => {
            let path = Path::new(file);
            let v = read_json(path)?;
            let list = v.get("H").unwrap_or(&v).as_array().ok_or_else(|| InputError(format!("{file}: expected a list of vectors")))?;
            let vs = list
                .iter()
                .enumerate()
                .map(|(t, x)| parse_sparse_vector(x, b.l_dim(), &format!("{file}: H[{t}]")))
                .collect::<Result<Vec<_>, _>>()?;
            CartanChoice::Given(SubspaceQ::span(b.l_dim(), vs.iter()))
        }
    };
    let classes = match &args.classes {
        None => None,
        Some(p) => {
            let classes: Vec<Vec<usize>> = serde_json::from_value(read_json(p)?)?;
            Some(RootClassPartition { classes })
        }
    };
    Ok((choice, classes))
}

fn run_corpus(a: CorpusArgs) -> Outcome {
    if a.list {
        let names: Vec<&str> = CorpusName::ALL.iter().map(|n| n.as_str()).collect();
        emit(&(names.join("\n") + "\n"), None)?;
        return Ok(true);
    }
    let name: CorpusName = a.name.as_deref().ok_or_else(|| InputError("missing corpus name (see --list)".into()))?.parse()?;
    let mut spec = CorpusSpec::new(name).degree(a.degree_cap).window(a.window).seed(a.seed);
    spec.variant = a.variant;
    let b = corpus::generate(&spec)?;
    let mut file = bundle::BundleFile::from_bundle(&b);
    file.metadata.insert("corpus".into(), name.to_string());
    file.metadata.insert("degree_cap".into(), a.degree_cap.to_string());
    file.metadata.insert("window".into(), a.window.to_string());
    file.metadata.insert("seed".into(), a.seed.to_string());
    if let Some(v) = &spec.variant {
        file.metadata.insert("variant".into(), v.clone());
    }
    emit(&bundle::file_to_string(&file), a.output.as_deref())?;
    Ok(true)
}

fn run_check(a: CheckArgs) -> Outcome {
    let b = load(&a.bundle)?;
    let suite: Suite = a.suite.parse().map_err(InputError)?;
    let (cartan, classes) = cartan(&a.cartan, &b)?;
    let opts = SuiteOptions { cartan, classes, seed: a.seed, timings: a.timings };
    let r = suite::run_suite(&b, suite, &opts);
    emit_report(a.report, &r, || r.to_text())?;
    Ok(!r.failed())
}

fn decompose_text(r: &DecomposeReport) -> String {
    let mut s = format!("H = <{}>\n", r.h.join(", "));
    s.push_str(&format!("roots ({}):\n", r.roots.len()));
    for (i, g) in r.roots.iter().enumerate() {
        s.push_str(&format!("  [{i}] {:<16} L = <{}>\n", g.form, g.space.join(", ")));
    }
    s.push_str(&format!("weights ({}):\n", r.weights.len()));
    for (i, g) in r.weights.iter().enumerate() {
        s.push_str(&format!("  [{i}] {:<16} A = <{}>\n", g.form, g.space.join(", ")));
    }
    s.push_str(&format!("A_0 = <{}>\n", r.a0.join(", ")));
    s.push_str(&format!("connection classes: {:?}\n", r.connection_classes));
    if r.classes != r.connection_classes {
        s.push_str(&format!("classes used for ideals: {:?}\n", r.classes));
    }
    for (c, i) in r.ideals.iter().enumerate() {
        s.push_str(&format!("ideal {c}: L_0 part <{}>, dim {}\n", i.l0.join(", "), i.ideal.len()));
    }
    let ds = &r.direct_sum;
    s.push_str(&format!(
        "direct sum: H generated = {}, Z_rho(L) = 0: {}, decomposition = {}\n",
        ds.h_generated,
        ds.z_rho_zero,
        match ds.direct_sum {
            Some(b) => b.to_string(),
            None => format!("not asserted ({})", suite::direct_sum_reason(ds)),
        }
    ));
    s.push_str("checks:\n");
    for c in r.checks.iter().chain(&r.weight_classes.checks) {
        for line in c.to_string().lines() {
            s.push_str(&format!("  {line}\n"));
        }
    }
    s.push_str(&format!("status: {}\n", if r.passed() { "pass" } else { "fail" }));
    s
}

fn run_decompose(a: DecomposeArgs) -> Outcome {
    let b = load(&a.bundle)?;
    let (choice, classes) = cartan(&a.cartan, &b)?;
    let h = choice.resolve(&b)?;
    let analysis = split::analyze_with(&b, &h, classes)?;
    let r = DecomposeReport::new(&b, &analysis);
    emit_report(a.report, &r, || decompose_text(&r))?;
    Ok(r.passed())
}

#[derive(Serialize)]
struct ConnectReport {
    from: String,
    to: String,
    connected: bool,
    /// `γ_1`, then the pairs `(γ_{2i}, γ_{2i+1})`.
    chain: Option<Vec<String>>,
    chain_verified: Option<bool>,
    literal_search_pairs: usize,
    literal_search_agrees: Option<bool>,
}

#[derive(Serialize)]
struct ClassesReport {
    roots: Vec<String>,
    classes: Vec<Vec<usize>>,
}

fn run_connect(a: ConnectArgs) -> Outcome {
    let b = load(&a.bundle)?;
    let (choice, _) = cartan(&a.cartan, &b)?;
    let h = choice.resolve(&b)?;
    let dec = split::root_decompose(&b, &h)?;
    let wdec = split::weight_decompose(&b, &h)?;
    let sys = split::RootSystem::from_decompositions(&dec, &wdec)?;
    let labels = dec.h_labels(&b);
    let name = |f: &split::RootForm| f.render(&labels);
    let roots = dec.forms();
    let (Some(i), Some(j)) = (a.from, a.to) else {
        let part = split::root_classes(&sys)?;
        let r = ClassesReport { roots: roots.iter().map(name).collect(), classes: part.classes };
        emit_report(a.report, &r, || {
            let mut s = String::new();
            for (k, g) in r.roots.iter().enumerate() {
                s.push_str(&format!("[{k}] {g}\n"));
            }
            s + &format!("classes: {:?}\n", r.classes)
        })?;
        return Ok(true);
    };
    let get = |k: usize| roots.get(k).ok_or_else(|| InputError(format!("root index {k} out of range ({} roots)", roots.len())));
    let (g, g2) = (get(i)?, get(j)?);
    let found = sys.connected(g, g2)?;
    let verified = found.as_ref().map(|c| sys.is_connection(g, g2, c));
    let literal = (a.literal_pairs > 0).then(|| sys.literal_connected(g, g2, a.literal_pairs));
    // A literal hit within the bound implies a BFS hit; the converse needs no bound.
    let agrees = literal.as_ref().map(|l| l.is_none() || found.is_some());
    let chain = found.as_ref().map(|c| {
        let mut v = vec![name(&c.first)];
        v.extend(c.pairs.iter().map(|(x, y)| format!("({}, {})", name(x), name(y))));
        v
    });
    let r = ConnectReport {
        from: name(g),
        to: name(g2),
        connected: found.is_some(),
        chain,
        chain_verified: verified,
        literal_search_pairs: a.literal_pairs,
        literal_search_agrees: agrees,
    };
    emit_report(a.report, &r, || {
        let mut s = format!("{} -> {}: {}\n", r.from, r.to, if r.connected { "connected" } else { "not connected" });
        if let Some(c) = &r.chain {
            s.push_str(&format!("chain: {}\n", c.join(" ")));
        }
        s
    })?;
    Ok(verified != Some(false) && agrees != Some(false))
}

fn parse_map(spec: &str, n: usize) -> Result<MatrixQ, InputError> {
    match spec {
        "id" => Ok(MatrixQ::identity(n)),
        "-id" => Ok(MatrixQ::scalar(n, &-Rational::one())),
        s if s.starts_with("diag:") => {
            let vals = s[5..].split(',').map(|c| c.trim().parse::<Rational>()).collect::<Result<Vec<_>, _>>()?;
            if vals.len() != n {
                return Err(InputError(format!("{s}: expected {n} diagonal entries")));
            }
            Ok(MatrixQ::diagonal(&vals))
        }
        file => {
            let entries: Vec<(usize, usize, String)> = serde_json::from_value(read_json(Path::new(file))?)?;
            let mut out = Vec::new();
            for (i, j, c) in entries {
                if i >= n || j >= n {
                    return Err(InputError(format!("{file}: entry ({i}, {j}) out of range for {n}x{n}")));
                }
                out.push((i, j, c.parse::<Rational>()?));
            }
            Ok(MatrixQ::from_entries(n, n, out))
        }
    }
}

fn run_construct(c: ConstructCmd) -> Outcome {
    let (out, output) = match c {
        ConstructCmd::Twist { bundle: path, alpha, phi, output } => {
            let b = load(&path)?;
            let alpha = parse_map(&alpha, b.l_dim())?;
            let phi = parse_map(&phi, b.a_dim())?;
            (construct::twist(&b, &alpha, &phi), output)
        }
        ConstructCmd::Tensor { bundle: path, output } => (construct::tensor_of_bundle(&load(&path)?), output),
    };
    let mut b = out?;
    b.flags.weak = hom3lr::rinehart::check_weak_rinehart(&b).passed();
    b.flags.full = hom3lr::rinehart::check_full_rinehart(&b).passed();
    b.flags.regular = hom3lr::rinehart::check_regular(&b).passed();
    emit(&bundle::to_string(&b), output.as_deref())?;
    Ok(true)
}
