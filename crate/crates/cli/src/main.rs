use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use nchodge_core::exactfield::FieldError;
use nchodge_core::fermat::{b_set_with, BSetOptions, FermatError};
use nchodge_core::hodge::{cycle_check, psi, FiltrationProfile, HodgeError};
use nchodge_core::mfcat::{chern, mf_tensor_concat, q_rank, ChernClass, MatrixFactorization, MfError, TensorSign};
use nchodge_core::milnor::{MilnorAlgebra, MilnorError, MilnorLimits};
use nchodge_core::par::Execution;
use nchodge_core::polyforms::{infer_nvars, poly_parse, PolyError};
use nchodge_core::verify::{run_verify, RunReport, Scope, VerifyOptions};

#[derive(Parser)]
#[command(name = "nchodge", version, about = "Hodge-theoretic invariants of homogeneous hypersurface singularities")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest polynomial degree the Milnor algebra may row-reduce.
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    All,
    Milnor,
    Hodge,
    Chern,
    Fermat,
    Psi,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Scope {
        match s {
            ScopeArg::All => Scope::All,
            ScopeArg::Milnor => Scope::Milnor,
            ScopeArg::Hodge => Scope::Hodge,
            ScopeArg::Chern => Scope::Chern,
            ScopeArg::Fermat => Scope::Fermat,
            ScopeArg::Psi => Scope::Psi,
        }
    }
}

#[derive(clap::Args)]
struct Hypersurface {
    /// Homogeneous polynomial in x0, x1, ...
    #[arg(long)]
    f: String,
    /// Even dimension; defaults to the number of variables in f minus 2.
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function of the Milnor algebra.
    Milnor(Hypersurface),
    /// HP0, nc Hodge filtration, HN and classical Hodge numbers.
    Hodge(Hypersurface),
    /// The cycle psi_{m,j}(q·vol).
    Psi {
        #[command(flatten)]
        hyp: Hypersurface,
        #[arg(long)]
        q: String,
        #[arg(long)]
        j: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        /// Also apply the curved differential.
        #[arg(long)]
        check: bool,
    },
    /// Chern character of a matrix factorization file.
    Chern {
        #[command(flatten)]
        hyp: Hypersurface,
        #[arg(long)]
        mf: PathBuf,
    },
    /// Tensor product of two factorizations; the second moves to fresh variables.
    Tensor {
        #[arg(long)]
        mf1: PathBuf,
        #[arg(long)]
        mf2: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank over Q of the Chern characters of several factorizations.
    Qrank {
        #[command(flatten)]
        hyp: Hypersurface,
        #[arg(long, num_args = 1.., required = true)]
        mf: Vec<PathBuf>,
    },
    /// Shioda's B-set for the Fermat hypersurface of degree m.
    Fermat {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        count_only: bool,
        /// For prime m, test only half of the unit multipliers.
        #[arg(long)]
        prime_shortcut: bool,
    },
    /// Run the built-in example suite.
    Verify {
        #[arg(long, value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
        #[arg(long, hide = true)]
        flip_tensor_sign: bool,
    },
}

enum Failure {
    Input(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Resource(m) => m,
        }
    }
}

fn field_failure(e: &FieldError) -> Failure {
    match e {
        FieldError::OrderTooLarge { .. } => Failure::Resource(e.to_string()),
        _ => Failure::Input(e.to_string()),
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<MilnorError> for Failure {
    fn from(e: MilnorError) -> Self {
        match e {
            MilnorError::DegreeTooLarge { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<HodgeError> for Failure {
    fn from(e: HodgeError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<FermatError> for Failure {
    fn from(e: FermatError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<MfError> for Failure {
    fn from(e: MfError) -> Self {
        match e {
            MfError::Milnor(m) => m.into(),
            MfError::Field(f) => field_failure(&f),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Context {
    format: Format,
    limits: MilnorLimits,
    exec: Execution,
}

impl Context {
    fn algebra(&self, hyp: &Hypersurface) -> Result<MilnorAlgebra, Failure> {
        let nvars = match hyp.n {
            Some(n) => n as usize + 2,
            None => infer_nvars(&hyp.f).max(2),
        };
        let f = poly_parse(&hyp.f, nvars)?;
        Ok(MilnorAlgebra::with_limits(f, nvars as u32 - 2, self.limits, self.exec)?)
    }

    fn read_mf(&self, path: &PathBuf, nvars: Option<usize>) -> Result<MatrixFactorization, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        Ok(MatrixFactorization::from_json_str(&text, nvars)?)
    }
}

fn run(cli: Cli) -> Result<(Value, bool), Failure> {
    let ctx = Context {
        format: cli.format,
        limits: MilnorLimits { max_degree: cli.max_degree },
        exec: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
    };
    match cli.command {
        Command::Milnor(hyp) => {
            let m = ctx.algebra(&hyp)?;
            Ok((
                json!({
                    "e": m.e(),
                    "socle_degree": m.socle_degree(),
                    "hilbert": m.hilbert_function(),
                    "total": m.total_dimension(),
                    "isolated": true,
                }),
                true,
            ))
        }
        Command::Hodge(hyp) => {
            let m = ctx.algebra(&hyp)?;
            Ok((FiltrationProfile::compute(&m).to_json(), true))
        }
        Command::Psi { hyp, q, j, m: deg, check } => {
            let m = ctx.algebra(&hyp)?;
            let q = poly_parse(&q, m.nvars())?;
            let x = psi(&m, &q, j, deg)?;
            let mut out = Map::new();
            out.insert("element".into(), x.to_string().into());
            out.insert("terms".into(), x.monomial_count().into());
            if check {
                out.insert("cycle".into(), cycle_check(&x, &m).into());
            }
            Ok((Value::Object(out), true))
        }
        Command::Chern { hyp, mf } => {
            let m = ctx.algebra(&hyp)?;
            let mf = ctx.read_mf(&mf, Some(m.nvars()))?;
            Ok((class_json(&chern(&mf, &m)?), true))
        }
        Command::Tensor { mf1, mf2, out } => {
            let x = ctx.read_mf(&mf1, None)?;
            let y = ctx.read_mf(&mf2, None)?;
            let t = mf_tensor_concat(&x, &y)?;
            fs::write(&out, t.to_json_string() + "\n")
                .map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            Ok((json!({ "f": t.f().to_string(), "rank": t.rank(), "nvars": t.nvars() }), true))
        }
        Command::Qrank { hyp, mf } => {
            let m = ctx.algebra(&hyp)?;
            let mut classes = Vec::new();
            for path in &mf {
                classes.push(chern(&ctx.read_mf(path, Some(m.nvars()))?, &m)?);
            }
            Ok((json!({ "rank": q_rank(&classes)?, "classes": classes.len() }), true))
        }
        Command::Fermat { m, n, count_only, prime_shortcut } => {
            let b = b_set_with(m, n, BSetOptions { exec: ctx.exec, prime_shortcut })?;
            let mut out = Map::new();
            out.insert("count".into(), b.len().into());
            if !count_only {
                let classes: Vec<Value> = b.iter().map(|c| json!(c.entries())).collect();
                out.insert("classes".into(), classes.into());
            }
            Ok((Value::Object(out), true))
        }
        Command::Verify { scope, flip_tensor_sign } => {
            let tensor_sign = if flip_tensor_sign { TensorSign::Flipped } else { TensorSign::Standard };
            let report = run_verify(scope.into(), VerifyOptions { exec: ctx.exec, tensor_sign });
            let pass = report.pass;
            if let Format::Table = ctx.format {
                print!("{}", report_table(&report));
                return Ok((Value::Null, pass));
            }
            Ok((serde_json::to_value(&report).expect("serializable report"), pass))
        }
    }
}

fn class_json(c: &ChernClass) -> Value {
    let reduced: Map<String, Value> = c.reduced_map().into_iter().map(|(k, v)| (k, v.into())).collect();
    json!({ "raw": c.raw().to_string(), "reduced": reduced })
}

fn report_table(r: &RunReport) -> String {
    let mut out = String::new();
    for c in &r.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status} {}", c.id));
        if !c.pass {
            out.push_str(&format!("  expected {}  actual {}", c.expected, c.actual));
        }
        out.push('\n');
    }
    let passed = r.checks.iter().filter(|c| c.pass).count();
    out.push_str(&format!("{}: {passed}/{} passed\n", r.suite, r.checks.len()));
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            if items.iter().all(|x| !x.is_array()) {
                parts.join(" ")
            } else {
                parts.iter().map(|p| format!("({})", p.replace(' ', ","))).collect::<Vec<_>>().join(" ")
            }
        }
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn table(v: &Value) -> String {
    match v {
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}: {}\n", scalar(v))).collect(),
        other => format!("{}\n", scalar(other)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok((value, pass)) => {
            if !value.is_null() {
                match format {
                    Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("valid JSON")),
                    Format::Table => print!("{}", table(&value)),
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
