use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matrod::catalog::{self, Expectations};
use matrod::kron::{kron_explicit, kron_recurrence, Recurrence};
use matrod::pearson::{FamilySpec, FormChoice};
use matrod::report;
use matrod::rodrigues::{construct, family_moments, verify_family, FailureKind, VerifyConfig};
use matrod::serial::{family_from_json, moments_doc, poly_matrix_doc};
use matrod::{parse_rational, BiPoly, Error, Mat, PolyMatrix, Rational};

#[derive(Parser)]
#[command(
    name = "matrod",
    version,
    about = "Bivariate classical orthogonal polynomials via the matrix Rodrigues formula"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write Q_0 .. Q_N.
    Generate(RunArgs),
    /// Run every check and write the report.
    Verify(RunArgs),
    /// Second-kind Kronecker power of a 2x2 matrix.
    Kron(KronArgs),
    /// Dump the moment table of a family.
    Moments(MomentArgs),
    /// Catalog commands.
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// List catalog entries with their parameter domains.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    Auto,
    Original,
    Diagonal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Explicit,
    I,
    Ii,
}

#[derive(Args)]
struct FamilyArgs {
    /// Catalog family name.
    #[arg(
        long,
        conflicts_with = "family_file",
        required_unless_present = "family_file"
    )]
    family: Option<String>,
    /// JSON family document.
    #[arg(long)]
    family_file: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Largest degree N.
    #[arg(long)]
    degree: u32,
    /// Moment cap; defaults to 2N + 2.
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long, value_enum, default_value_t = Form::Auto)]
    form: Form,
    /// Defaults to text for `generate` and json for `verify`.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KronArgs {
    #[arg(long)]
    n: u32,
    /// Entries are integers or strings holding rationals or polynomials,
    /// e.g. "[[1,2],[3,4]]" or "[[\"3*y\",1],[1,0]]".
    #[arg(long)]
    matrix: String,
    #[arg(long, value_enum, default_value_t = Method::I)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MomentArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    cap: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit codes: 0 pass, 2 other mathematical failure, 3 configuration error,
/// 4 internal error, 5 construction failure, 6 orthogonality violation,
/// 7 eigen-matrix residual violation.
#[derive(Debug)]
enum Failure {
    Config(String),
    Math(Error),
    Internal(String),
    Verify(FailureKind, String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Math(_) => 2,
            Failure::Config(_) => 3,
            Failure::Internal(_) => 4,
            Failure::Verify(FailureKind::Construction, _) => 5,
            Failure::Verify(FailureKind::Orthogonality, _) => 6,
            Failure::Verify(FailureKind::Residual, _) => 7,
            Failure::Verify(FailureKind::Check, _) => 2,
        }
    }

    fn document(&self) -> serde_json::Value {
        let (kind, message) = match self {
            Failure::Config(m) => ("config", m.clone()),
            Failure::Math(e) => ("math", e.to_string()),
            Failure::Internal(m) => ("internal", m.clone()),
            Failure::Verify(k, m) => (
                match k {
                    FailureKind::Construction => "construction",
                    FailureKind::Orthogonality => "orthogonality",
                    FailureKind::Residual => "residual",
                    FailureKind::Check => "check",
                },
                m.clone(),
            ),
        };
        serde_json::json!({"error": {"kind": kind, "code": self.code(), "message": message}})
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::UnknownFamily(_) | Error::Parameter(_) => {
                Failure::Config(e.to_string())
            }
            other => Failure::Math(other),
        }
    }
}

fn load_family(a: &FamilyArgs) -> Result<(FamilySpec, Option<Expectations>), Failure> {
    let mut params = BTreeMap::new();
    for (name, v) in [
        ("mu", &a.mu),
        ("alpha", &a.alpha),
        ("beta", &a.beta),
        ("gamma", &a.gamma),
    ] {
        if let Some(v) = v {
            let q = parse_rational(v).map_err(|e| Failure::Config(format!("--{name}: {e}")))?;
            params.insert(name.to_string(), q);
        }
    }
    if let Some(path) = &a.family_file {
        if !params.is_empty() {
            return Err(Failure::Config(
                "parameter flags cannot be combined with --family-file".into(),
            ));
        }
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        return Ok((family_from_json(&text)?, None));
    }
    let name = a
        .family
        .as_deref()
        .expect("clap enforces --family or --family-file");
    let fam = catalog::load(name, &params)?;
    let exp = catalog::entry(name)?.expectations;
    Ok((fam, Some(exp)))
}

fn form_choice(f: Form) -> FormChoice {
    match f {
        Form::Auto => FormChoice::Auto,
        Form::Original => FormChoice::Original,
        Form::Diagonal => FormChoice::Diagonal,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Config(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(a: &RunArgs) -> Result<(), Failure> {
    let (fam, _) = load_family(&a.family)?;
    let form = form_choice(a.form);
    let cap = a.cap.unwrap_or(2 * a.degree + 2);
    let (_, data) = fam.select(form)?;
    let u = if data.weight().is_some() {
        None
    } else {
        Some(family_moments(&fam, cap)?)
    };
    let mut qs = Vec::new();
    for n in 0..=a.degree {
        let q = match &u {
            Some(u) => construct(&fam, u, n, form)?,
            None => matrod::rodrigues::build_q(&fam, n, form)?,
        };
        qs.push(q);
    }
    let text = match a.format.unwrap_or(Format::Text) {
        Format::Json => report::generate_json(fam.name(), &qs),
        Format::Latex => report::generate_latex(&qs),
        Format::Text => report::generate_text(&qs),
    };
    emit(&a.out, &text)
}

fn verify(a: &RunArgs) -> Result<(), Failure> {
    let (fam, expectations) = load_family(&a.family)?;
    if let Some(cap) = a.cap {
        if cap < 2 * a.degree {
            return Err(Failure::Config(format!(
                "--cap {cap} is below 2 * --degree"
            )));
        }
    }
    let cfg = VerifyConfig {
        max_degree: a.degree,
        cap: a.cap,
        form: form_choice(a.form),
        expectations,
    };
    let r = verify_family(&fam, &cfg)?;
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Json => report::report_json(&r),
        Format::Latex => report::report_latex(&r),
        Format::Text => report::report_text(&r),
    };
    emit(&a.out, &text)?;
    match r.worst_failure() {
        None => Ok(()),
        Some(kind) => {
            let msg = r
                .failures
                .iter()
                .map(|f| f.message.as_str())
                .collect::<Vec<_>>()
                .join("; ");
            Err(Failure::Verify(kind, msg))
        }
    }
}

fn parse_entry(v: &serde_json::Value) -> Result<BiPoly, Failure> {
    match v {
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BiPoly::constant(Rational::from_integer(i.into()))),
            None => Err(Failure::Config(format!(
                "matrix entry {n} is not an integer; write rationals as strings"
            ))),
        },
        serde_json::Value::String(s) => Ok(s.parse()?),
        other => Err(Failure::Config(format!("bad matrix entry {other}"))),
    }
}

fn parse_matrix(text: &str) -> Result<PolyMatrix, Failure> {
    let v: Vec<Vec<serde_json::Value>> =
        serde_json::from_str(text).map_err(|e| Failure::Config(format!("--matrix: {e}")))?;
    let rows = v
        .iter()
        .map(|r| r.iter().map(parse_entry).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let m = Mat::from_rows(rows).map_err(|e| Failure::Config(format!("--matrix: {e}")))?;
    if m.shape() != (2, 2) {
        return Err(Failure::Config(format!(
            "--matrix must be 2x2, got {:?}",
            m.shape()
        )));
    }
    Ok(m)
}

fn kron(a: &KronArgs) -> Result<(), Failure> {
    let m = parse_matrix(&a.matrix)?;
    let k = match a.method {
        Method::Explicit => kron_explicit(&m, a.n)?,
        Method::I => kron_recurrence(&m, a.n, Recurrence::I)?,
        Method::Ii => kron_recurrence(&m, a.n, Recurrence::II)?,
    };
    let text = match a.format {
        Format::Json => {
            serde_json::to_string_pretty(&poly_matrix_doc(&k.body))
                .map_err(|e| Failure::Internal(e.to_string()))?
                + "\n"
        }
        Format::Text => format!("{}\n", k.body),
        Format::Latex => {
            let rows: Vec<String> = k
                .body
                .to_rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(BiPoly::to_latex)
                        .collect::<Vec<_>>()
                        .join(" & ")
                })
                .collect();
            format!(
                "\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}\n",
                rows.join(" \\\\\n")
            )
        }
    };
    emit(&a.out, &text)
}

fn moments(a: &MomentArgs) -> Result<(), Failure> {
    let (fam, _) = load_family(&a.family)?;
    let u = family_moments(&fam, a.cap)?;
    let text = serde_json::to_string_pretty(&moments_doc(&u))
        .map_err(|e| Failure::Internal(e.to_string()))?
        + "\n";
    emit(&a.out, &text)
}

fn family_list(format: Format) -> Result<(), Failure> {
    let entries = catalog::entries();
    let text = match format {
        Format::Json => {
            serde_json::to_string_pretty(&entries).map_err(|e| Failure::Internal(e.to_string()))?
                + "\n"
        }
        _ => {
            let mut s = String::new();
            for e in &entries {
                s.push_str(e.name);
                for p in &e.params {
                    s.push_str(&format!(
                        " --{} (default {}, {})",
                        p.name, p.default, p.domain
                    ));
                }
                s.push_str(&format!("\n    {}\n", e.description));
            }
            s
        }
    };
    emit(&None, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Kron(a) => kron(a),
        Command::Moments(a) => moments(a),
        Command::Family {
            command: FamilyCommand::List { format },
        } => family_list(*format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.document());
            ExitCode::from(f.code())
        }
    }
}
