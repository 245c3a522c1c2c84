use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gentle::algebra::{gentle_algebra, info, BasedAlgebra};
use gentle::bunch::{bunch_of_datum, Side};
use gentle::complexes::{decompose, is_homotopy_iso, ProjComplex, TripleContext};
use gentle::datum::Datum;
use gentle::rouquier::{fat_point_probe, generation_certificate};
use gentle::scalar::set_runtime_modulus;
use gentle::suite::{run_suite, CorpusSize, SuiteConfig, DEFAULT_SEED};
use gentle::words::{
    band_complex, band_gluing_diagram, enumerate_bands, enumerate_strings, string_complex,
    string_gluing_diagram, word_equivalent_bands, word_equivalent_strings, Word, WordContext,
};
use gentle::{Error, Field, Fp, Q};

#[derive(Parser)]
#[command(name = "gentle", version, about = "Gentle algebras, their complexes and generation certificates")]
struct Cli {
    /// Ground field: `Q` or `Fp:<p>`. GENTLE_FIELD takes precedence.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Seed for randomized invertibility trials.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Datum checks and its index sets.
    #[command(subcommand)]
    Datum(DatumCmd),
    /// The algebra of a datum.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// String and band words.
    #[command(subcommand)]
    Word(WordCmd),
    /// Complexes of projectives in the JSON complex format.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// The bunch of chains of a datum.
    #[command(subcommand)]
    Bunch(BunchCmd),
    /// Generation certificates.
    #[command(subcommand)]
    Rouquier(RouquierCmd),
    /// The acceptance suite.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand)]
enum DatumCmd {
    Validate { datum: PathBuf },
    Sets { datum: PathBuf },
    Cycles { datum: PathBuf },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    Info {
        datum: PathBuf,
        /// Emit the quiver in DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand)]
enum WordCmd {
    /// The complex of a word, or its gluing diagram with `--dot`.
    Build {
        datum: PathBuf,
        word: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    Check {
        datum: PathBuf,
        word: PathBuf,
    },
    Equiv {
        datum: PathBuf,
        first: PathBuf,
        second: PathBuf,
    },
    Enumerate {
        datum: PathBuf,
        #[arg(long, default_value_t = 3)]
        segments: usize,
        /// Degree window for strings, as `lo:hi`.
        #[arg(long, default_value = "-2:0", allow_hyphen_values = true)]
        window: String,
        /// List band words instead of strings.
        #[arg(long)]
        bands: bool,
    },
}

#[derive(Args)]
struct ComplexFiles {
    datum: PathBuf,
    #[arg(required = true)]
    complexes: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum ComplexCmd {
    Check(ComplexFiles),
    Cohomology(ComplexFiles),
    Decompose(ComplexFiles),
    /// Homotopy isomorphism of two complexes.
    Iso {
        datum: PathBuf,
        first: PathBuf,
        second: PathBuf,
    },
}

#[derive(Subcommand)]
enum BunchCmd {
    Show {
        datum: PathBuf,
        #[arg(long, default_value = "-1:0", allow_hyphen_values = true)]
        window: String,
    },
}

#[derive(Subcommand)]
enum RouquierCmd {
    Certify { datum: PathBuf, complex: PathBuf },
    Fatpoint { n: usize },
}

#[derive(Subcommand)]
enum SuiteCmd {
    Run {
        #[arg(long, default_value = "full")]
        corpus: CorpusSize,
        /// Print the report as JSON instead of one line per criterion.
        #[arg(long)]
        json: bool,
    },
}

enum Output {
    Json(Value),
    Text(String),
    /// Printed, then exit 1.
    Failed(String),
}

#[derive(Debug)]
struct CliError {
    kind: &'static str,
    message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError { kind: e.kind(), message: e.to_string() }
    }
}

type Res<T> = Result<T, CliError>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError { kind: "io", message: format!("{}: {e}", path.display()) })
}

fn load_datum(path: &Path) -> Res<Datum> {
    Ok(Datum::from_json(&read(path)?)?)
}

fn load_word<F: Field>(path: &Path) -> Res<Word<F>> {
    Ok(Word::from_json(&read(path)?)?)
}

fn load_complex<F: Field>(alg: &Arc<BasedAlgebra>, path: &Path) -> Res<ProjComplex<F>> {
    Ok(ProjComplex::from_json(Arc::clone(alg), &read(path)?)?)
}

fn parse_window(s: &str) -> Res<(i64, i64)> {
    let bad = || CliError { kind: "parse", message: format!("bad window {s:?} (expected lo:hi)") };
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn elem_json((i, j): (usize, usize)) -> Value {
    json!([i, j])
}

fn word_complex<F: Field>(ctx: &WordContext, w: &Word<F>) -> Res<ProjComplex<F>> {
    Ok(match w {
        Word::String(s) => string_complex(ctx, s)?,
        Word::Band(b) => band_complex(ctx, b)?,
    })
}

fn run_datum(cmd: DatumCmd) -> Res<Output> {
    Ok(Output::Json(match cmd {
        DatumCmd::Validate { datum } => {
            let d = load_datum(&datum)?;
            json!({ "valid": true, "gentle": d.is_gentle() })
        }
        DatumCmd::Sets { datum } => {
            let s = load_datum(&datum)?.index_sets();
            json!({
                "omega": s.omega.iter().copied().map(elem_json).collect::<Vec<_>>(),
                "omega_bar": s.omega_bar.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "omega_tilde": s.omega_tilde.iter()
                    .map(|v| v.members.iter().map(|b| b.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "omega_hat": s.omega_hat.iter()
                    .map(|c| c.iter().copied().map(elem_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })
        }
        DatumCmd::Cycles { datum } => {
            let cycles = load_datum(&datum)?.special_cycles();
            let cycles: Vec<Vec<Value>> =
                cycles.into_iter().map(|c| c.into_iter().map(elem_json).collect()).collect();
            json!({ "special_cycles": cycles })
        }
    }))
}

fn run_word<F: Field>(cmd: WordCmd, seed: u64) -> Res<Output> {
    match cmd {
        WordCmd::Build { datum, word, dot } => {
            let ctx = WordContext::new(&load_datum(&datum)?)?;
            let w = load_word::<F>(&word)?;
            if dot {
                let g = match &w {
                    Word::String(s) => string_gluing_diagram(&ctx, s)?,
                    Word::Band(b) => band_gluing_diagram(&ctx, b)?,
                };
                return Ok(Output::Text(g.to_dot()));
            }
            Ok(Output::Json(word_complex(&ctx, &w)?.to_json_value()))
        }
        WordCmd::Check { datum, word } => {
            let d = load_datum(&datum)?;
            let w = load_word::<F>(&word)?;
            w.validate(&d)?;
            let (kind, range) = match &w {
                Word::String(s) => ("string", s.degree_range(&d)),
                Word::Band(b) => ("band", b.word.degree_range(&d)),
            };
            Ok(Output::Json(json!({ "valid": true, "kind": kind, "degrees": [range.0, range.1] })))
        }
        WordCmd::Equiv { datum, first, second } => {
            let ctx = WordContext::new(&load_datum(&datum)?)?;
            let (x, y) = (load_word::<F>(&first)?, load_word::<F>(&second)?);
            x.validate(&ctx.datum)?;
            y.validate(&ctx.datum)?;
            let equivalent = match (&x, &y) {
                (Word::String(a), Word::String(b)) => word_equivalent_strings(a, b),
                (Word::Band(a), Word::Band(b)) => word_equivalent_bands(a, b),
                _ => false,
            };
            let iso = is_homotopy_iso(&word_complex(&ctx, &x)?, &word_complex(&ctx, &y)?, seed)?;
            Ok(Output::Json(json!({ "equivalent": equivalent, "homotopy_iso": iso, "seed": seed })))
        }
        WordCmd::Enumerate { datum, segments, window, bands } => {
            let d = load_datum(&datum)?;
            if !d.is_gentle() {
                return Err(Error::Unsupported("words are implemented for gentle datums".into()).into());
            }
            let words: Vec<Value> = if bands {
                enumerate_bands(&d, segments)
                    .into_iter()
                    .map(|w| json!({ "kind": "band", "segments": w.segments }))
                    .collect()
            } else {
                enumerate_strings(&d, segments, parse_window(&window)?)
                    .into_iter()
                    .map(|s| Word::<F>::String(s).to_json_value())
                    .collect()
            };
            Ok(Output::Json(json!({ "count": words.len(), "words": words })))
        }
    }
}

fn run_complex<F: Field>(cmd: ComplexCmd, seed: u64) -> Res<Output> {
    let (datum, files) = match &cmd {
        ComplexCmd::Check(f) | ComplexCmd::Cohomology(f) | ComplexCmd::Decompose(f) => {
            (f.datum.clone(), f.complexes.clone())
        }
        ComplexCmd::Iso { datum, first, second } => (datum.clone(), vec![first.clone(), second.clone()]),
    };
    let alg = Arc::new(gentle_algebra(&load_datum(&datum)?));
    let xs: Vec<ProjComplex<F>> = files.iter().map(|p| load_complex(&alg, p)).collect::<Res<_>>()?;
    let per_file = |f: &dyn Fn(&ProjComplex<F>) -> Res<Value>| -> Res<Output> {
        let out: Vec<Value> = xs.iter().map(f).collect::<Res<_>>()?;
        Ok(Output::Json(if out.len() == 1 { out.into_iter().next().unwrap() } else { Value::Array(out) }))
    };
    match cmd {
        ComplexCmd::Check(_) => per_file(&|x| {
            let v = x.verify();
            Ok(json!({ "complex": v.is_complex, "minimal": v.is_minimal, "rank": x.rank() }))
        }),
        ComplexCmd::Cohomology(_) => per_file(&|x| {
            let dims: serde_json::Map<String, Value> =
                x.cohomology_dims().into_iter().map(|(r, v)| (r.to_string(), json!(v))).collect();
            Ok(json!({ "cohomology": dims }))
        }),
        ComplexCmd::Decompose(_) => per_file(&|x| {
            let parts: Vec<Value> = decompose(x)?.iter().map(ProjComplex::to_json_value).collect();
            Ok(json!({ "summands": parts }))
        }),
        ComplexCmd::Iso { .. } => {
            let iso = is_homotopy_iso(&xs[0], &xs[1], seed)?;
            Ok(Output::Json(json!({ "iso": iso, "seed": seed })))
        }
    }
}

fn run_bunch(cmd: BunchCmd) -> Res<Output> {
    let BunchCmd::Show { datum, window } = cmd;
    let db = bunch_of_datum(&load_datum(&datum)?, parse_window(&window)?);
    let b = &db.bunch;
    let indices: Vec<Value> = (0..b.len())
        .map(|i| json!({ "index": b.index_label(i), "E": b.chain(i, Side::E), "F": b.chain(i, Side::F) }))
        .collect();
    let ties: Vec<Value> = b.ties().into_iter().map(|(x, y)| json!([b.label(x), b.label(y)])).collect();
    Ok(Output::Json(json!({ "window": [db.window.0, db.window.1], "indices": indices, "ties": ties })))
}

fn run_rouquier<F: Field>(cmd: RouquierCmd) -> Res<Output> {
    match cmd {
        RouquierCmd::Certify { datum, complex } => {
            let ctx = TripleContext::new(&load_datum(&datum)?)?;
            let alg = Arc::clone(&ctx.a);
            let x = load_complex::<F>(&alg, &complex)?;
            Ok(Output::Json(generation_certificate(&ctx, &x)?.to_json_value()))
        }
        RouquierCmd::Fatpoint { n } => {
            if n == 0 {
                return Err(Error::Dimension("the fat point needs at least one variable".into()).into());
            }
            let p = fat_point_probe::<F>(n)?;
            Ok(Output::Json(json!({
                "n": p.n,
                "dim_a": p.dim_a,
                "dim_h": p.dim_h,
                "holds": p.holds(),
                "certificates": p.certificates.iter().map(|c| c.to_json_value()).collect::<Vec<_>>(),
            })))
        }
    }
}

fn run_suite_cmd(cmd: SuiteCmd, seed: u64) -> Res<Output> {
    let SuiteCmd::Run { corpus, json } = cmd;
    let report = run_suite(SuiteConfig { corpus, seed })?;
    let body = if json {
        serde_json::to_string_pretty(&report).expect("report serializes")
    } else {
        let mut lines: Vec<String> = report.criteria.iter().map(|c| c.line()).collect();
        lines.push(format!("seed {seed:#x}, corpus {corpus:?}"));
        lines.join("\n")
    };
    Ok(if report.passed() { Output::Text(body) } else { Output::Failed(body) })
}

fn run<F: Field>(cli: Cli) -> Res<Output> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Datum(c) => run_datum(c),
        Cmd::Algebra(AlgebraCmd::Info { datum, dot }) => {
            let d = load_datum(&datum)?;
            if dot {
                return Ok(Output::Text(gentle_algebra(&d).to_dot()));
            }
            Ok(Output::Json(serde_json::to_value(info(&d)).expect("info serializes")))
        }
        Cmd::Word(c) => run_word::<F>(c, seed),
        Cmd::Complex(c) => run_complex::<F>(c, seed),
        Cmd::Bunch(c) => run_bunch(c),
        Cmd::Rouquier(c) => run_rouquier::<F>(c),
        Cmd::Suite(c) => run_suite_cmd(c, seed),
    }
}

/// `Q` or `Fp:<p>`; `None` selects the rationals.
fn field_modulus(spec: &str) -> Res<Option<u32>> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("q") {
        return Ok(None);
    }
    let bad = || CliError { kind: "parse", message: format!("bad field {spec:?} (expected Q or Fp:<p>)") };
    let p = spec.strip_prefix("Fp:").ok_or_else(bad)?;
    let p: u32 = p.parse().map_err(|_| bad())?;
    set_runtime_modulus(p)?;
    Ok(Some(p))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = std::env::var("GENTLE_FIELD").unwrap_or_else(|_| cli.field.clone());
    let out = field_modulus(&spec).and_then(|p| match p {
        None => run::<Q>(cli),
        Some(_) => run::<Fp<0>>(cli),
    });
    match out {
        Ok(Output::Json(v)) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Ok(Output::Text(s)) => {
            println!("{}", s.trim_end());
            ExitCode::SUCCESS
        }
        Ok(Output::Failed(s)) => {
            println!("{}", s.trim_end());
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind, "message": e.message }));
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!(parse_window("-3:1").unwrap(), (-3, 1));
        assert!(parse_window("1:0").is_err());
        assert!(parse_window("x").is_err());
    }

    #[test]
    fn field_specs() {
        assert_eq!(field_modulus("Q").unwrap(), None);
        assert_eq!(field_modulus("Fp:7").unwrap(), Some(7));
        assert!(field_modulus("Fp:8").is_err());
        assert!(field_modulus("R").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
