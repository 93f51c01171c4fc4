//! The `weilss` command line: orbit criteria, exponential sums, zeta data,
//! supersingularity tests, family predictions, and survey runs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use crate::characters::{
    check_necessary, check_sufficient, minus_one_power_condition, FrobeniusAction, GroupCharacter,
    GroupSpec,
};
use crate::error::{Error, Result};
use crate::exp_sums::{gauss_sum_lifted, AddChar, MultChar};
use crate::families::predict;
use crate::finite_field::make_field;
use crate::harness::{survey, to_csv, to_jsonl, PointCountCache, SurveyConfig};
use crate::weil::is_supersingular;
use crate::zeta::{l_polynomial_with_counter, CurveFamily, CurveInstance, DEFAULT_POINTS_CAP};

#[derive(Parser)]
#[command(
    name = "weilss",
    version,
    about = "supersingularity criteria and exact verification for curves over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit criterion: either the power condition q^s = -1 mod n, or a full
    /// character-set check from a JSON file.
    Criterion(CriterionArgs),
    /// Exact Gauss sum of a multiplicative and an additive character.
    Gauss(GaussArgs),
    /// Point counts, genus and L-polynomial of a curve instance.
    Zeta(ZetaArgs),
    /// Supersingularity verdict for an explicit L-polynomial.
    Sstest(SstestArgs),
    /// Criterion-side prediction for a curve family instance.
    Predict(FamilyArgs),
    /// Sweep a parameter grid and compare predictions with verdicts.
    Survey(SurveyArgs),
}

#[derive(Args)]
struct CriterionArgs {
    /// Base field size for the power condition mode.
    #[arg(long)]
    q: Option<u64>,
    /// Modulus for the power condition mode.
    #[arg(long)]
    n: Option<u64>,
    /// Cyclic factor orders n1,n2,... for the character-set mode.
    #[arg(long, value_delimiter = ',')]
    group: Vec<u64>,
    /// Per-factor Frobenius multipliers m1,m2,...
    #[arg(long, value_delimiter = ',')]
    frob: Vec<u64>,
    /// JSON file with a list of exponent tuples.
    #[arg(long)]
    chars: Option<PathBuf>,
    /// Check the necessary direction instead of the sufficient one.
    #[arg(long)]
    necessary: bool,
}

#[derive(Args)]
struct GaussArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long)]
    char_order: u64,
    #[arg(long)]
    char_index: u64,
    /// Hasse-Davenport lift degree.
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Element index of the additive character shift.
    #[arg(long, default_value_t = 1)]
    shift: u64,
}

#[derive(Args)]
struct FamilyArgs {
    /// artin-schreier | fermat | three-point
    #[arg(long)]
    family: String,
    #[arg(long)]
    p: u64,
    /// Base field exponent (q = p^r).
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    n: u64,
    /// Artin-Schreier cover degree (a power of p; defaults to p).
    #[arg(long)]
    qas: Option<u64>,
    /// Three-point cover exponent of x.
    #[arg(long)]
    a: Option<u64>,
    /// Three-point cover exponent of (1-x).
    #[arg(long)]
    b: Option<u64>,
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Point-count cache file (JSON lines).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Bypass the cache entirely.
    #[arg(long)]
    no_cache: bool,
    /// Cap on q^genus.
    #[arg(long, default_value_t = DEFAULT_POINTS_CAP)]
    cap_points: u64,
}

#[derive(Args)]
struct SstestArgs {
    /// L-polynomial coefficients a_0,a_1,...,a_2g (a_0 = 1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Vec<i64>,
    #[arg(long)]
    q: u64,
}

#[derive(Args)]
struct SurveyArgs {
    /// Survey configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// CSV report output path.
    #[arg(long)]
    out: PathBuf,
    /// JSON-lines report output path (defaults to the CSV path with a
    /// .jsonl extension).
    #[arg(long)]
    out_jsonl: Option<PathBuf>,
    /// Point-count cache file.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Bypass the cache entirely.
    #[arg(long)]
    no_cache: bool,
    /// Exit with code 3 when any instance was skipped by the caps.
    #[arg(long)]
    strict: bool,
}

fn parse_family(args: &FamilyArgs) -> Result<CurveInstance> {
    let family = match args.family.as_str() {
        "artin-schreier" => CurveFamily::ArtinSchreier {
            qas: args.qas.unwrap_or(args.p),
            n: args.n,
        },
        "fermat" => CurveFamily::FermatCurve { n: args.n },
        "three-point" => CurveFamily::ThreePointCover {
            n: args.n,
            a: args
                .a
                .ok_or_else(|| Error::BadParameters("--a required".into()))?,
            b: args
                .b
                .ok_or_else(|| Error::BadParameters("--b required".into()))?,
        },
        other => return Err(Error::UnsupportedFamily(other.to_string())),
    };
    CurveInstance::new(family, args.p, args.r)
}

fn cmd_criterion(args: &CriterionArgs) -> Result<()> {
    if let (Some(q), Some(n)) = (args.q, args.n) {
        let (holds, witness) = minus_one_power_condition(q, n)?;
        match (holds, witness) {
            (true, Some(s)) => println!("s = {s}"),
            _ => println!("none"),
        }
        return Ok(());
    }
    let chars_path = args.chars.as_ref().ok_or_else(|| {
        Error::BadParameters("need either --q/--n or --group/--frob/--chars".into())
    })?;
    let group = GroupSpec::new(args.group.clone());
    let action = FrobeniusAction::per_factor(args.frob.clone());
    let raw: Vec<Vec<u64>> = serde_json::from_str(&std::fs::read_to_string(chars_path)?)
        .map_err(|e| Error::BadParameters(format!("bad character file: {e}")))?;
    let chars: Vec<GroupCharacter> = raw
        .into_iter()
        .map(|e| GroupCharacter::new(&group, e))
        .collect();
    let report = if args.necessary {
        check_necessary(&group, &action, &chars)?
    } else {
        check_sufficient(&group, &action, &chars)?
    };
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}

fn cmd_gauss(args: &GaussArgs) -> Result<()> {
    let ctx = make_field(args.p, args.k)?;
    let chi = MultChar::new(&ctx, args.char_order, args.char_index)?;
    let psi = AddChar::new(&ctx, ctx.elem_from_index(args.shift % ctx.order()));
    let g = gauss_sum_lifted(&ctx, &chi, &psi, args.r)?;
    let numeric = g.to_complex();
    let out = json!({
        "conductor": g.m(),
        "coeffs": g.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "numeric": { "re": numeric.re, "im": numeric.im, "abs": numeric.norm() },
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn cmd_zeta(args: &ZetaArgs) -> Result<()> {
    let curve = parse_family(&args.family)?;
    let cache = match (&args.cache, args.no_cache) {
        (Some(path), false) => PointCountCache::open(path)?,
        _ => PointCountCache::in_memory(),
    };
    let mut counts = Vec::new();
    let lpoly = l_polynomial_with_counter(&curve, args.cap_points, &mut |c, k| {
        let n = crate::harness::cached_count(&cache, c, k)?;
        if k as usize > counts.len() {
            counts.resize(k as usize, 0);
        }
        counts[k as usize - 1] = n;
        Ok(n)
    })?;
    let verdict = is_supersingular(&lpoly)?;
    let out = json!({
        "family": curve.family,
        "p": curve.p,
        "r": curve.r,
        "q": curve.q(),
        "genus": curve.genus(),
        "counts": counts,
        "l_polynomial": lpoly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "verdict": verdict,
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn cmd_sstest(args: &SstestArgs) -> Result<()> {
    let coeffs: Vec<BigInt> = args.coeffs.iter().map(|&c| BigInt::from(c)).collect();
    if coeffs.first() != Some(&BigInt::from(1)) || coeffs.len() % 2 == 0 {
        return Err(Error::BadParameters(
            "coefficients must start with a_0 = 1 and have even degree".into(),
        ));
    }
    let lpoly = crate::zeta::LPolynomial::new(coeffs, args.q);
    let verdict = is_supersingular(&lpoly)?;
    println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
    Ok(())
}

fn cmd_predict(args: &FamilyArgs) -> Result<()> {
    let curve = parse_family(args)?;
    let prediction = predict(&curve)?;
    let out = json!({
        "family": curve.family,
        "p": curve.p,
        "r": curve.r,
        "genus": curve.genus(),
        "prediction": prediction,
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn cmd_survey(args: &SurveyArgs) -> Result<ExitCode> {
    let config: SurveyConfig = serde_json::from_str(&std::fs::read_to_string(&args.config)?)
        .map_err(|e| Error::BadParameters(format!("bad survey config: {e}")))?;
    let cache = match (&args.cache, args.no_cache) {
        (Some(path), false) => PointCountCache::open(path)?,
        _ => PointCountCache::in_memory(),
    };
    let report = survey(&config, &cache)?;
    std::fs::write(&args.out, to_csv(&report))?;
    let jsonl_path = args
        .out_jsonl
        .clone()
        .unwrap_or_else(|| args.out.with_extension("jsonl"));
    std::fs::write(&jsonl_path, to_jsonl(&report))?;
    eprintln!(
        "{} rows ({} skipped), {} converse rows, {} converse candidates",
        report.summary.rows,
        report.summary.skipped,
        report.summary.converse_rows,
        report.summary.converse_candidates
    );
    if args.strict && report.summary.skipped > 0 {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

/// Entry point for the `weilss` binary. Exit codes: 0 clean, 2 a proved
/// theorem would be contradicted, 3 cap-skips present under --strict.
pub fn run_cli() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Criterion(args) => cmd_criterion(args).map(|_| ExitCode::SUCCESS),
        Command::Gauss(args) => cmd_gauss(args).map(|_| ExitCode::SUCCESS),
        Command::Zeta(args) => cmd_zeta(args).map(|_| ExitCode::SUCCESS),
        Command::Sstest(args) => cmd_sstest(args).map(|_| ExitCode::SUCCESS),
        Command::Predict(args) => cmd_predict(args).map(|_| ExitCode::SUCCESS),
        Command::Survey(args) => cmd_survey(args),
    };
    match outcome {
        Ok(code) => code,
        Err(Error::TheoremContradiction(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
