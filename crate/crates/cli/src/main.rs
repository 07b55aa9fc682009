use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lkhom_core::chord::{enum_chord, enum_long_chord};
use lkhom_core::diagram::{canonicalize, Diagram};
use lkhom_core::enumerate::{enum_forests, SpaceId};
use lkhom_core::hopf::{connect_sum_well_defined, forest_compatible, long_compatible, FourTSpans};
use lkhom_core::lincomb::{format_q, LinComb, TermDoc, Q};
use lkhom_core::linkio::{fuzz_linking_matrix, linking_matrix, parse_gauss, parse_pd};
use lkhom_core::spaces::{
    check_certificate_bundle, check_certificate_file, chi_lincomb, dim_space, reduce_to_monomials,
    verify_main_theorem, write_certificate_bundle, Budget, Space, SpacesError,
};

/// Hard caps on any configured budget.
const MAX_K: u8 = 8;
const MAX_DEGREE: usize = 6;
const MAX_CHORD_DEGREE: usize = 7;

#[derive(Parser)]
#[command(name = "lkhom", version, about = "Diagram spaces for finite type link-homotopy invariants")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON file with budget limits.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Cell {
    #[arg(long, default_value = "bhl")]
    space: Space,
    #[arg(short)]
    k: u8,
    #[arg(short)]
    d: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Main,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkFormat {
    Gauss,
    Pd,
}

#[derive(Subcommand)]
enum Command {
    /// List the basis keys of a space.
    Enumerate(Cell),
    /// Dimension of a space modulo its relations.
    Dim(Cell),
    /// Certify that every forest with a large component vanishes.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(short)]
        k: u8,
        #[arg(long)]
        max_degree: usize,
        /// Directory for certificate files.
        #[arg(long)]
        certs: Option<PathBuf>,
    },
    /// Re-check certificate files (a directory or a single file).
    CheckCert {
        #[arg(long)]
        certs: PathBuf,
    },
    /// Image of a diagram or combination in the polynomial algebra.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(short)]
        k: u8,
    },
    /// Symmetrization of a diagram or combination into bounded diagrams.
    Chi {
        #[arg(long)]
        input: PathBuf,
    },
    /// Linking matrix of a link, optionally fuzzed by homotopy moves.
    Lk {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "gauss")]
        format: LinkFormat,
        #[arg(long)]
        fuzz: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive bialgebra checks.
    HopfCheck {
        #[arg(short, default_value_t = 3)]
        k: u8,
        /// Chord pairs of each degree up to this, forest pairs of total degree up to this.
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Connect sums of operands up to this degree (0 skips them).
        #[arg(long, default_value_t = 2)]
        connect_sum_degree: usize,
    },
}

enum Failure {
    Budget(String),
    Verification(String),
    Parse(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Budget(_) => 3,
            Failure::Verification(_) => 4,
            Failure::Parse(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Budget(m) | Failure::Verification(m) | Failure::Parse(m) | Failure::Other(m) => m,
        }
    }
}

impl From<SpacesError> for Failure {
    fn from(e: SpacesError) -> Self {
        match e {
            SpacesError::Budget { .. } => Failure::Budget(e.to_string()),
            SpacesError::Counterexample { .. } | SpacesError::Certificate { .. } | SpacesError::BadBundle { .. } => {
                Failure::Verification(e.to_string())
            }
            SpacesError::Diagram(_) | SpacesError::NotHomotopy(_) => Failure::Parse(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

struct Output {
    json: bool,
}

impl Output {
    fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value()).expect("json"));
        } else {
            let t = text();
            print!("{t}");
            if !t.ends_with('\n') {
                println!();
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

fn load_budget(path: Option<&Path>) -> Result<Budget, Failure> {
    let budget = match path {
        None => Budget::default(),
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?,
    };
    let within = |cells: &[(u8, usize)]| cells.iter().all(|&(k, d)| k <= MAX_K && d <= MAX_DEGREE);
    if !within(&budget.forests) || !within(&budget.bounded) || budget.chord_max_degree > MAX_CHORD_DEGREE {
        return Err(Failure::Budget(format!(
            "budget exceeds the compiled limits k <= {MAX_K}, d <= {MAX_DEGREE}, chord degree <= {MAX_CHORD_DEGREE}"
        )));
    }
    Ok(budget)
}

/// A diagram document, or `{"terms": [{"key": .., "coeff": ..}]}`.
fn load_lincomb(path: &Path) -> Result<LinComb, Failure> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let bad = |m: String| Failure::Parse(format!("{}: {m}", path.display()));
    if let Some(terms) = value.get("terms") {
        let terms: Vec<TermDoc> = serde_json::from_value(terms.clone()).map_err(|e| bad(e.to_string()))?;
        return LinComb::from_terms(&terms).map_err(bad);
    }
    let d = Diagram::parse(&text).map_err(|e| bad(e.to_string()))?;
    let mut l = LinComb::new();
    l.add_homotopy(&d, &one()).map_err(|e| bad(e.to_string()))?;
    Ok(l)
}

fn one() -> Q {
    Q::from_integer(1.into())
}

fn check_budget(budget: &Budget, space: Space, k: u8, d: usize) -> Result<(), Failure> {
    if budget.allows(space, k, d) {
        Ok(())
    } else {
        Err(SpacesError::Budget { space, k, d }.into())
    }
}

fn terms_json(l: &LinComb) -> Value {
    json!(l.to_terms())
}

fn terms_text(l: &LinComb) -> String {
    if l.is_zero() {
        return "0\n".into();
    }
    l.iter().map(|(k, c)| format!("{} {}\n", format_q(c), k)).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = Output { json: cli.json };
    let budget = load_budget(cli.config.as_deref())?;
    match cli.command {
        Command::Enumerate(Cell { space, k, d }) => {
            check_budget(&budget, space, k, d)?;
            let id = match space {
                Space::Chord => SpaceId::KnotChord { d },
                Space::Bhsl | Space::Bhl => SpaceId::UniTriHomotopy { k, d },
                Space::Ahsl | Space::Ahl => SpaceId::BoundedHomotopy { k, d },
            };
            let basis: Vec<String> = id.basis().iter().map(|k| k.to_hex()).collect();
            out.emit(
                || basis.iter().map(|b| format!("{b}\n")).collect(),
                || json!({"space": space.name(), "k": k, "d": d, "size": basis.len(), "basis": basis}),
            );
        }
        Command::Dim(Cell { space, k, d }) => {
            let r = dim_space(space, k, d, &budget)?;
            out.emit(|| r.dimension.to_string(), || json!(r));
        }
        Command::Verify { theorem: Theorem::Main, k, max_degree, certs } => {
            let proved = verify_main_theorem(k, max_degree, &budget)?;
            if let Some(dir) = &certs {
                write_certificate_bundle(dir, &proved)?;
            }
            let keys: Vec<String> = proved.iter().map(|c| c.key.to_hex()).collect();
            out.emit(
                || format!("verified {} forests", proved.len()),
                || json!({"theorem": "main", "k": k, "max_degree": max_degree, "verified": keys}),
            );
        }
        Command::CheckCert { certs } => {
            let n = if certs.is_dir() {
                check_certificate_bundle(&certs)?
            } else {
                check_certificate_file(&certs)?;
                1
            };
            out.emit(|| format!("{n} certificates verified"), || json!({"verified": n}));
        }
        Command::Reduce { input, k } => {
            let l = load_lincomb(&input)?;
            let poly = reduce_to_monomials(&l, k)?;
            out.emit(
                || {
                    if poly.is_empty() {
                        return "0".into();
                    }
                    let parts: Vec<String> = poly
                        .iter()
                        .map(|(m, c)| if *c == one() { m.to_string() } else { format!("{}*{m}", format_q(c)) })
                        .collect();
                    parts.join(" + ")
                },
                || {
                    let terms: Vec<Value> =
                        poly.iter().map(|(m, c)| json!({"monomial": m.to_string(), "coeff": format_q(c)})).collect();
                    json!({"terms": terms})
                },
            );
        }
        Command::Chi { input } => {
            let l = load_lincomb(&input)?;
            let image = chi_lincomb(&l)?;
            out.emit(|| terms_text(&image), || json!({"terms": terms_json(&image)}));
        }
        Command::Lk { input, format, fuzz, seed } => {
            let text = read(&input)?;
            let parsed = match format {
                LinkFormat::Gauss => parse_gauss(&text),
                LinkFormat::Pd => parse_pd(&text),
            };
            let link = parsed.map_err(|e| Failure::Parse(format!("{}: {e}", input.display())))?;
            let m = linking_matrix(&link).map_err(|e| Failure::Parse(e.to_string()))?;
            let report = match fuzz {
                Some(n) => Some(fuzz_linking_matrix(&link, n, seed).map_err(|e| Failure::Other(e.to_string()))?),
                None => None,
            };
            out.emit(
                || {
                    let mut s = m.to_string();
                    if let Some(r) = &report {
                        s += &format!(
                            "fuzz: {} of {} moves applied, invariant: {}\n",
                            r.applied, r.moves, r.invariant
                        );
                    }
                    s
                },
                || json!({"components": m.size(), "matrix": m.entries, "fuzz": report}),
            );
            if report.is_some_and(|r| !r.invariant) {
                return Err(Failure::Verification("linking matrix changed under a homotopy move".into()));
            }
        }
        Command::HopfCheck { k, max_degree, connect_sum_degree } => {
            check_budget(&budget, Space::Bhl, k, max_degree)?;
            check_budget(&budget, Space::Chord, 0, 2 * connect_sum_degree.max(max_degree))?;
            let mut failures = Vec::new();
            let long: Vec<_> = (0..=max_degree).flat_map(enum_long_chord).collect();
            for a in &long {
                for b in &long {
                    if !long_compatible(a, b) {
                        failures.push(format!("chords {:?} {:?}", a.word(), b.word()));
                    }
                }
            }
            let forests: Vec<Vec<Diagram>> = (0..=max_degree)
                .map(|d| enum_forests(k, d).iter().map(|x| Diagram::from_key(x).expect("basis key")).collect())
                .collect();
            let mut forest_pairs = 0;
            for d1 in 0..=max_degree {
                for d2 in 0..=max_degree - d1 {
                    for x in &forests[d1] {
                        for y in &forests[d2] {
                            forest_pairs += 1;
                            if !forest_compatible(x, y) {
                                let kx = canonicalize(x).expect("canonical").key;
                                let ky = canonicalize(y).expect("canonical").key;
                                failures.push(format!("forests {kx} {ky}"));
                            }
                        }
                    }
                }
            }
            let mut spans = FourTSpans::new();
            let circle: Vec<_> = if connect_sum_degree == 0 {
                Vec::new()
            } else {
                (0..=connect_sum_degree).flat_map(enum_chord).collect()
            };
            for a in &circle {
                for b in &circle {
                    if !connect_sum_well_defined(a, b, &mut spans) {
                        failures.push(format!("connect sum {:?} {:?}", a.word(), b.word()));
                    }
                }
            }
            let counts = (long.len() * long.len(), forest_pairs, circle.len() * circle.len());
            out.emit(
                || {
                    let mut s = format!(
                        "chord pairs {}, forest pairs {}, connect sums {}\n",
                        counts.0, counts.1, counts.2
                    );
                    for f in &failures {
                        s += &format!("FAIL {f}\n");
                    }
                    s
                },
                || {
                    json!({"chord_pairs": counts.0, "forest_pairs": counts.1, "connect_sums": counts.2, "failures": failures})
                },
            );
            if !failures.is_empty() {
                return Err(Failure::Verification(format!("{} checks failed", failures.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("lkhom: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lkhom: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
