mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use egyb_core::catalog::{
    check_outer_diagonal, parse_matrix_file, unitarity_residual, verify_far_commutativity, verify_gybe,
};
use egyb_core::enhance::enhancement_report;
use egyb_core::invariant::{
    cross_operator_check, markov_check_with, multiplicativity_check, normalized, quartic_check_type2,
    skein_check, tilde_multiplicativity_check,
};
use egyb_core::{
    standard_link, BraidWord, Complex64, Enhancement, Error as CoreError, Limits, Matrix, Normalization, Operator,
    OperatorId, ReportConfig, Verdict,
};
use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const SCHEMA_VERSION: u32 = 1;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "egyb", version, about = "Link invariants from enhanced generalized Yang-Baxter operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the invariant of a braid closure.
    Compute(ComputeArgs),
    /// Check the operator identities and the enhancement conditions.
    Verify(VerifyArgs),
    /// Run the relation checks on seeded random braids.
    Suite(SuiteArgs),
}

#[derive(Clone, Debug)]
enum OperatorChoice {
    Catalog(OperatorId),
    Custom(PathBuf),
}

fn parse_operator(s: &str) -> std::result::Result<OperatorChoice, String> {
    let id = match s {
        "type1" => OperatorId::Type1,
        "type2" => OperatorId::Type2,
        "type3" => OperatorId::Type3,
        "r232" => OperatorId::R232,
        other => {
            return match other.strip_prefix("custom:") {
                Some(path) if !path.is_empty() => Ok(OperatorChoice::Custom(path.into())),
                _ => Err("expected type1, type2, type3, r232 or custom:<path>".into()),
            }
        }
    };
    Ok(OperatorChoice::Catalog(id))
}

#[derive(Args)]
struct OperatorArgs {
    /// type1 | type2 | type3 | r232 | custom:<path>
    #[arg(long, value_parser = parse_operator)]
    operator: OperatorChoice,

    /// Angle parameter of the type I-III families (ignored for r232).
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,

    /// Enhancement alpha for custom operators (real).
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,

    /// Enhancement beta for custom operators (real).
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,

    #[arg(long, env = "EGYB_TOLERANCE", default_value_t = 1e-9)]
    tolerance: f64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Raw,
    #[value(name = "p", alias = "P")]
    P,
    Tilde,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Raw => Normalization::Raw,
            NormArg::P => Normalization::P,
            NormArg::Tilde => Normalization::Tilde,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    op: OperatorArgs,

    /// Catalog link name (unknot, hopf+, hopf-, trefoil, figure-eight,
    /// unlink-<n>) or a word of signed generators such as "1 -2 1".
    #[arg(long, allow_hyphen_values = true)]
    braid: String,

    /// Strand count; defaults to the smallest one the word fits in.
    #[arg(long)]
    strands: Option<usize>,

    #[arg(long, value_enum, default_value_t = NormArg::Raw)]
    normalization: NormArg,

    /// Lift the representation-size cap.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    op: OperatorArgs,

    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,

    /// Random braids sampled per strand count for the perpendicularity check.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

#[derive(Args)]
struct SuiteArgs {
    #[command(flatten)]
    op: OperatorArgs,

    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,

    /// Random braids per relation.
    #[arg(long, default_value_t = 100)]
    samples: usize,

    #[arg(long, default_value_t = 4)]
    max_strands: usize,

    #[arg(long, default_value_t = 12)]
    max_len: usize,
}

fn build_enhancement(args: &OperatorArgs) -> Result<Enhancement> {
    match &args.operator {
        OperatorChoice::Catalog(id) => {
            if *id == OperatorId::R232 && args.theta.is_some() {
                warn!("--theta is ignored for r232");
            }
            if args.alpha.is_some() || args.beta.is_some() {
                warn!("--alpha/--beta are ignored for catalog operators");
            }
            let op = Operator::catalog(*id, args.theta.unwrap_or(0.0)).context("unknown catalog operator")?;
            Ok(Enhancement::standard(op)?)
        }
        OperatorChoice::Custom(path) => {
            if args.theta.is_some() {
                warn!("--theta is ignored for custom operators");
            }
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let (gtype, r) = parse_matrix_file::<f64>(&text).with_context(|| format!("parsing {}", path.display()))?;
            let op = Operator::custom(r, gtype)?;
            let alpha = Complex64::new(args.alpha.unwrap_or(1.0), 0.0);
            let beta = Complex64::new(args.beta.unwrap_or(1.0), 0.0);
            Ok(Enhancement::new(op, Matrix::identity(gtype.d), alpha, beta)?)
        }
    }
}

fn operator_label(args: &OperatorArgs) -> String {
    match &args.operator {
        OperatorChoice::Catalog(id) => id.name().to_string(),
        OperatorChoice::Custom(path) => format!("custom:{}", path.display()),
    }
}

fn resolve_braid(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    // catalog names win over words
    if let Some(link) = standard_link(text.trim()) {
        return match strands {
            Some(n) if n != link.braid.strands() => Err(CoreError::StrandMismatch {
                left: n,
                right: link.braid.strands(),
            })
            .with_context(|| format!("{} is a {}-strand braid", link.name, link.braid.strands())),
            _ => Ok(link.braid),
        };
    }
    Ok(BraidWord::parse(text, strands)?)
}

#[derive(Serialize)]
struct JsonComplex {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ComputeReport {
    schema_version: u32,
    operator: String,
    theta: Option<f64>,
    braid: String,
    strands: usize,
    writhe: i64,
    components: usize,
    value: JsonComplex,
    normalization: String,
}

fn cmd_compute(args: &ComputeArgs) -> Result<u8> {
    let s = build_enhancement(&args.op)?;
    let braid = resolve_braid(&args.braid, args.strands)?;
    let limits = if args.allow_large {
        Limits::unlimited()
    } else {
        Limits::default()
    };
    let res = normalized(&s, &braid, args.normalization.into(), limits)?;
    let report = ComputeReport {
        schema_version: SCHEMA_VERSION,
        operator: operator_label(&args.op),
        theta: res.theta,
        braid: braid.to_string(),
        strands: braid.strands(),
        writhe: res.writhe,
        components: braid.closure_components(),
        value: JsonComplex {
            re: res.value.re,
            im: res.value.im,
        },
        normalization: res.normalization.name().to_string(),
    };
    match args.op.output {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        OutputFormat::Text => {
            let theta = report.theta.map(|t| format!(", theta = {}", format::real(t))).unwrap_or_default();
            println!("operator:      {}{theta}", report.operator);
            println!("braid:         [{}] in B_{}", report.braid, report.strands);
            println!("writhe:        {}", report.writhe);
            println!("components:    {}", report.components);
            println!("normalization: {}", report.normalization);
            println!("value:         {}", format::complex(res.value));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    schema_version: u32,
    operator: String,
    gtype: String,
    theta: Option<f64>,
    tolerance: f64,
    unitarity_residual: f64,
    gybe_residual: f64,
    far_commutativity_residual: f64,
    outer_diagonal: Option<bool>,
    condition_i_residual: f64,
    defect_plus_norm: f64,
    defect_minus_norm: f64,
    defects_offdiagonal: bool,
    sampled_perpendicular_max: f64,
    sampled_witness: Option<String>,
    verdict: String,
    ok: bool,
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let s = build_enhancement(&args.op)?;
    let tol = args.op.tolerance;
    let op = s.op();
    let cfg = ReportConfig {
        samples: args.samples,
        seed: args.seed,
        tol,
        ..ReportConfig::default()
    };
    let report = enhancement_report(&s, &cfg)?;
    let gybe = verify_gybe(op);
    let far = verify_far_commutativity(op);
    let ok = gybe < tol && far < tol && report.condition_i_residual < tol && report.verdict != Verdict::Failed;
    let out = VerifyReport {
        schema_version: SCHEMA_VERSION,
        operator: operator_label(&args.op),
        gtype: op.gtype().to_string(),
        theta: op.theta(),
        tolerance: tol,
        unitarity_residual: unitarity_residual(op),
        gybe_residual: gybe,
        far_commutativity_residual: far,
        outer_diagonal: check_outer_diagonal(op, tol).ok(),
        condition_i_residual: report.condition_i_residual,
        defect_plus_norm: report.defect_plus_norm,
        defect_minus_norm: report.defect_minus_norm,
        defects_offdiagonal: report.offdiagonal_ok,
        sampled_perpendicular_max: report.sampled_perp_max,
        sampled_witness: report.sampled_witness.as_ref().map(|w| w.to_string()),
        verdict: report.verdict.name().to_string(),
        ok,
    };
    match args.op.output {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        OutputFormat::Text => {
            let theta = out.theta.map(|t| format!(", theta = {}", format::real(t))).unwrap_or_default();
            let r = format::real;
            println!("operator:                   {} {}{theta}", out.operator, out.gtype);
            println!("unitarity residual:         {}", r(out.unitarity_residual));
            println!("gYBE residual:              {}", r(out.gybe_residual));
            println!("far-commutativity residual: {}", r(out.far_commutativity_residual));
            println!(
                "outer-diagonal:             {}",
                out.outer_diagonal.map_or("n/a", format::yes_no)
            );
            println!("condition (i) residual:     {}", r(out.condition_i_residual));
            println!(
                "defect norms:               +1: {}, -1: {}",
                r(out.defect_plus_norm),
                r(out.defect_minus_norm)
            );
            println!("defects off-diagonal:       {}", format::yes_no(out.defects_offdiagonal));
            println!(
                "sampled perpendicularity:   {} ({} braids per strand count {:?})",
                r(out.sampled_perpendicular_max),
                cfg.samples,
                cfg.strands
            );
            if report.verdict == Verdict::Failed {
                if let Some(w) = &out.sampled_witness {
                    println!("witness braid:              {w}");
                }
            }
            println!("verdict:                    {}", out.verdict);
            println!("status:                     {}", if ok { "ok" } else { "FAILED" });
        }
    }
    Ok(if ok { 0 } else { EXIT_VERIFY })
}

#[derive(Serialize)]
struct SuiteEntry {
    relation: &'static str,
    samples: usize,
    max_residual: f64,
    ok: bool,
}

#[derive(Serialize)]
struct SuiteReport {
    schema_version: u32,
    operator: String,
    theta: Option<f64>,
    seed: u64,
    tolerance: f64,
    relations: Vec<SuiteEntry>,
    ok: bool,
}

fn random_braid(rng: &mut ChaCha8Rng, min_strands: usize, max_strands: usize, max_len: usize) -> BraidWord {
    let n = rng.gen_range(min_strands..=max_strands.max(min_strands));
    let len = rng.gen_range(0..=max_len);
    BraidWord::random_with(rng, n, len)
}

fn cmd_suite(args: &SuiteArgs) -> Result<u8> {
    if args.max_strands < 2 {
        bail!("--max-strands must be at least 2");
    }
    let s = build_enhancement(&args.op)?;
    let tol = args.op.tolerance;
    let id = s.op().id();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (nmax, len) = (args.max_strands, args.max_len);
    let mut relations = Vec::new();
    let mut run = |relation: &'static str, f: &mut dyn FnMut(&mut ChaCha8Rng) -> egyb_core::Result<f64>| -> Result<()> {
        let mut worst: f64 = 0.0;
        for _ in 0..args.samples {
            worst = worst.max(f(&mut rng)?);
        }
        relations.push(SuiteEntry {
            relation,
            samples: args.samples,
            max_residual: worst,
            ok: worst < tol,
        });
        Ok(())
    };

    run("markov", &mut |rng| {
        let b = random_braid(rng, 1, nmax, len);
        markov_check_with(&s, &b, 2, rng.gen(), Limits::default())
    })?;
    let skein = match id {
        OperatorId::Type1 => Some((1.0, 1.0)),
        OperatorId::Type3 | OperatorId::R232 => Some((1.0, std::f64::consts::SQRT_2)),
        _ => None,
    };
    if let Some((x, y)) = skein {
        let (x, y) = (Complex64::new(x, 0.0), Complex64::new(y, 0.0));
        run("skein", &mut |rng| skein_check(&s, &random_braid(rng, 2, nmax, len), x, y))?;
    }
    if id == OperatorId::Type2 {
        run("quartic", &mut |rng| quartic_check_type2(&s, &random_braid(rng, 2, nmax, len)))?;
    }
    let half = (nmax / 2).max(1);
    run("multiplicativity", &mut |rng| {
        let b1 = random_braid(rng, 1, half, len);
        let b2 = random_braid(rng, 1, half, len);
        multiplicativity_check(&s, &b1, &b2)
    })?;
    run("tilde-multiplicativity", &mut |rng| {
        let b1 = random_braid(rng, 1, half, len);
        let b2 = random_braid(rng, 1, half, len);
        tilde_multiplicativity_check(&s, &b1, &b2)
    })?;
    if matches!(id, OperatorId::Type3 | OperatorId::R232) {
        let theta = s.op().theta().or(args.op.theta).unwrap_or(0.0);
        run("cross-operator", &mut |rng| cross_operator_check(&random_braid(rng, 2, nmax, len), theta))?;
    }

    let ok = relations.iter().all(|r| r.ok);
    let report = SuiteReport {
        schema_version: SCHEMA_VERSION,
        operator: operator_label(&args.op),
        theta: s.op().theta(),
        seed: args.seed,
        tolerance: tol,
        relations,
        ok,
    };
    match args.op.output {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        OutputFormat::Text => {
            println!("operator: {} (seed {}, tolerance {})", report.operator, report.seed, format::real(tol));
            for r in &report.relations {
                println!(
                    "{:<24} {:>4} samples  max residual {:<18} {}",
                    r.relation,
                    r.samples,
                    format::real(r.max_residual),
                    if r.ok { "ok" } else { "FAILED" }
                );
            }
            println!("status: {}", if ok { "ok" } else { "FAILED" });
        }
    }
    Ok(if ok { 0 } else { EXIT_VERIFY })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::ResourceCap { .. }) => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Suite(a) => cmd_suite(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = exit_code(&err);
            if code == EXIT_CAP {
                eprintln!("hint: pass --allow-large to lift the cap");
            }
            ExitCode::from(code)
        }
    }
}
