//! Command-line front end: generate Frobenius trace data, ingest external
//! CSVs, run the equidistribution test battery, query parity verdicts, and
//! emit histogram/moment report files.
//!
//! Exit codes: 0 PASS, 1 FAIL, 2 singular curve, 3 INCONCLUSIVE,
//! 4 bad input (malformed CSV, Hasse violation, missing input, bad flags).

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use satotate::equidist::Verdict;
use satotate::error::Error;
use satotate::frobenius::{self, CurveSpec};
use satotate::group_models::{builtin_model_with_cap, default_cap};
use satotate::parity::parity_group_order;
use satotate::pipeline::{run_test_pipeline, run_tests_on_sequence, ModelSelection, PipelineConfig};
use satotate::report::{
    character_table, moments_json, to_rounded_json, trace_histogram, write_two_column,
};
use satotate::sampling::sample_haar;
use satotate::ClassSequence;

#[derive(Parser)]
#[command(
    name = "satotate",
    about = "Equidistribution tests for Frobenius class data against compact group models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Curve coefficients a,b of y^2 = x^3 + a x + b
    #[arg(long, value_parser = parse_curve)]
    curve: Option<(i64, i64)>,
    /// Upper bound on primes (generation) or synthetic sample count
    #[arg(long, default_value_t = 10_000)]
    bound: u64,
    /// Group model: a catalog name, `auto`, or `sym2:NAME`
    #[arg(long, default_value = "auto")]
    model: String,
    /// Maximum character weight parameter tested
    #[arg(long)]
    char_cap: Option<u32>,
    /// Threshold multiplier for the z/sqrt(n) noise bands
    #[arg(long, default_value_t = 4.0)]
    z: f64,
    /// RNG seed for synthetic sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Input CSV of p,ap rows (instead of generating from a curve)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output path (CSV, JSON report, or report-file prefix)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Negate ingested a_p values (for sources with the opposite sign convention)
    #[arg(long, default_value_t = false)]
    negate_ap: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Count points for all good primes up to the bound and emit a CSV
    Generate(CommonFlags),
    /// Validate and re-emit an external CSV of traces
    Ingest(CommonFlags),
    /// Run the full statistical test battery and emit a JSON report
    Test(CommonFlags),
    /// Print the parity verdict of a model
    Parity(CommonFlags),
    /// Emit histogram, moment, and per-character report files
    Report(CommonFlags),
}

fn parse_curve(s: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected `a,b`".into());
    }
    let a = parts[0].trim().parse().map_err(|e| format!("bad a: {e}"))?;
    let b = parts[1].trim().parse().map_err(|e| format!("bad b: {e}"))?;
    Ok((a, b))
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::SingularCurve { .. } => 2,
        Error::TooFewSamples { .. } => 3,
        _ => 4,
    }
}

fn exit_code_for_verdict(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 3,
    }
}

fn open_output(path: &Option<PathBuf>) -> satotate::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_traces(flags: &CommonFlags) -> satotate::Result<(Vec<(u64, i64)>, Vec<u64>)> {
    if let Some(path) = &flags.input {
        let file = File::open(path)?;
        let traces = frobenius::read_csv(BufReader::new(file), flags.negate_ap)?;
        Ok((traces, vec![]))
    } else if let Some((a, b)) = flags.curve {
        let curve = CurveSpec::new(a, b)?;
        frobenius::generate_traces(&curve, flags.bound)
    } else {
        Err(Error::Contract(
            "no input: pass --curve a,b or --in PATH".into(),
        ))
    }
}

fn cmd_generate(flags: &CommonFlags) -> satotate::Result<u8> {
    let (a, b) = flags
        .curve
        .ok_or_else(|| Error::Contract("generate requires --curve a,b".into()))?;
    let curve = CurveSpec::new(a, b)?;
    let (traces, skipped) = frobenius::generate_traces(&curve, flags.bound)?;
    let mut out = open_output(&flags.out)?;
    frobenius::write_csv(&mut out, &traces)?;
    out.flush()?;
    eprintln!(
        "curve {}: {} rows, skipped bad-reduction primes: {:?}",
        curve.label,
        traces.len(),
        skipped
    );
    Ok(0)
}

fn cmd_ingest(flags: &CommonFlags) -> satotate::Result<u8> {
    let path = flags
        .input
        .as_ref()
        .ok_or_else(|| Error::Contract("ingest requires --in PATH".into()))?;
    let file = File::open(path)?;
    let traces = frobenius::read_csv(BufReader::new(file), flags.negate_ap)?;
    let mut out = open_output(&flags.out)?;
    frobenius::write_csv(&mut out, &traces)?;
    out.flush()?;
    eprintln!("{} rows ingested", traces.len());
    Ok(0)
}

/// Synthetic mode for `test` when no data source is given: Haar samples of
/// the named model, n = bound, deterministic in the seed.
fn build_synthetic_sequence(
    flags: &CommonFlags,
) -> satotate::Result<(ClassSequence, serde_json::Value, u32)> {
    let name = match ModelSelection::parse(&flags.model) {
        ModelSelection::Named(n) => n,
        _ => {
            return Err(Error::Contract(
                "synthetic mode needs a concrete --model name".into(),
            ))
        }
    };
    let cap = flags.char_cap.unwrap_or_else(|| default_cap(&name));
    let model = builtin_model_with_cap(&name, cap)?;
    let seq = sample_haar(&model, flags.bound as usize, flags.seed);
    let config_json = json!({
        "model_selection": name,
        "auto_selected": false,
        "sym2": false,
        "char_cap": cap,
        "z": flags.z,
        "seed": flags.seed,
        "synthetic": true,
    });
    Ok((seq, config_json, cap))
}

fn cmd_test(flags: &CommonFlags) -> satotate::Result<u8> {
    let outcome = if flags.input.is_some() || flags.curve.is_some() {
        if flags.curve.is_some() && flags.bound < 100 {
            return Err(Error::Contract(format!(
                "--bound {} too small for a statistical command (need >= 100)",
                flags.bound
            )));
        }
        let (traces, _) = load_traces(flags)?;
        let cfg = PipelineConfig {
            selection: ModelSelection::parse(&flags.model),
            char_cap: flags.char_cap,
            z: flags.z,
        };
        run_test_pipeline(&traces, &cfg)?
    } else {
        let (seq, config_json, cap) = build_synthetic_sequence(flags)?;
        run_tests_on_sequence(&seq, cap, flags.z, config_json)?
    };
    let mut out = open_output(&flags.out)?;
    serde_json::to_writer_pretty(&mut out, &outcome.report)
        .map_err(|e| Error::Contract(format!("report serialization: {e}")))?;
    writeln!(out)?;
    out.flush()?;
    Ok(exit_code_for_verdict(outcome.verdict))
}

fn cmd_parity(flags: &CommonFlags) -> satotate::Result<u8> {
    let name = match ModelSelection::parse(&flags.model) {
        ModelSelection::Named(n) => n,
        ModelSelection::Sym2(n) => n,
        ModelSelection::Auto => {
            return Err(Error::Contract(
                "parity requires a concrete --model name".into(),
            ))
        }
    };
    let model = builtin_model_with_cap(&name, flags.char_cap.unwrap_or_else(|| default_cap(&name)))?;
    let verdict = parity_group_order(&model)?;
    let mut out = open_output(&flags.out)?;
    serde_json::to_writer_pretty(&mut out, &json!({ "model": name, "parity": verdict }))
        .map_err(|e| Error::Contract(format!("serialization: {e}")))?;
    writeln!(out)?;
    out.flush()?;
    Ok(0)
}

fn cmd_report(flags: &CommonFlags) -> satotate::Result<u8> {
    if flags.input.is_none() && flags.curve.is_none() {
        return Err(Error::Contract(
            "report requires --curve a,b or --in PATH".into(),
        ));
    }
    let (traces, _) = load_traces(flags)?;
    let selection = ModelSelection::parse(&flags.model);
    let (name, sym2) = match &selection {
        ModelSelection::Named(n) => (n.clone(), false),
        ModelSelection::Sym2(n) => (n.clone(), true),
        ModelSelection::Auto => {
            let cm = frobenius::cm_detect(&traces, 0.2)?;
            (if cm { "N_U1" } else { "SU2" }.to_string(), false)
        }
    };
    let cap = flags.char_cap.unwrap_or_else(|| default_cap(&name));
    let model = builtin_model_with_cap(&name, cap)?;
    let samples = frobenius::samples_for_model(&traces, &model, sym2)?;
    let seq = ClassSequence::new(
        model.clone(),
        samples.into_iter().map(|s| s.class_point).collect(),
        satotate::SequenceSource::Frobenius,
    )?;

    let prefix = flags
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("report"));
    let prefix = prefix.to_string_lossy().into_owned();

    let hist = trace_histogram(&seq, 60)?;
    let mut f = BufWriter::new(File::create(format!("{prefix}.hist.dat"))?);
    write_two_column(&mut f, &hist.centers, &hist.empirical_density)?;
    f.flush()?;
    let mut f = BufWriter::new(File::create(format!("{prefix}.haar.dat"))?);
    write_two_column(&mut f, &hist.centers, &hist.haar_density)?;
    f.flush()?;

    let moments = to_rounded_json(&moments_json(&seq, 8)?);
    let mut f = BufWriter::new(File::create(format!("{prefix}.moments.tsv"))?);
    writeln!(f, "k\tempirical\thaar")?;
    for row in moments.as_array().unwrap() {
        writeln!(f, "{}\t{}\t{}", row["k"], row["empirical"], row["haar"])?;
    }
    f.flush()?;

    let mut f = BufWriter::new(File::create(format!("{prefix}.chars.tsv"))?);
    writeln!(f, "character\tempirical\thaar")?;
    for (label, emp, haar) in character_table(&seq, cap)? {
        writeln!(f, "{label}\t{emp:.6}\t{haar:.6}")?;
    }
    f.flush()?;

    eprintln!(
        "wrote {prefix}.hist.dat {prefix}.haar.dat {prefix}.moments.tsv {prefix}.chars.tsv ({} samples on {})",
        seq.len(),
        model.name
    );
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(f) => cmd_generate(f),
        Command::Ingest(f) => cmd_ingest(f),
        Command::Test(f) => cmd_test(f),
        Command::Parity(f) => cmd_parity(f),
        Command::Report(f) => cmd_report(f),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
