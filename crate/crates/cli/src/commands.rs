use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use qdkd_core::attack::{builtin_attack, exact_holevo, post_attack_states, read_attack_file, AttackUnitary, BuiltinAttack};
use qdkd_core::bounds::{
    analyze_experiment, bounds_from_pq, holevo_bounds, max_holevo, max_holevo_grid, security_condition,
    surface_grid, write_surface_csv, Bound, ChannelStats, EveParams,
};
use qdkd_core::fockspace::CompositeSpace;
use qdkd_core::protocol::{parse_bits, run_session, write_trace_csv, FailPolicy, Mode, ProtocolConfig};

use crate::{AnalyzeArgs, AttackEvalArgs, BoundsArgs, SimulateArgs, SurfaceArgs};

pub enum Outcome {
    Ok,
    Insecure,
}

#[derive(Debug)]
pub enum CliError {
    Io { path: Option<PathBuf>, source: io::Error },
    Invalid(qdkd_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Invalid(qdkd_core::Error::Aborted(_)) => 3,
            CliError::Invalid(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path: Some(p), source } => write!(f, "{}: {source}", p.display()),
            CliError::Io { path: None, source } => write!(f, "{source}"),
            CliError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl From<qdkd_core::Error> for CliError {
    fn from(e: qdkd_core::Error) -> Self {
        CliError::Invalid(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: Some(path.to_path_buf()),
        source,
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_at(path))
}

fn emit(value: &Value, out: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    match out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{text}").and_then(|_| w.flush()).map_err(io_at(path))
        }
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|source| CliError::Io { path: None, source })
        }
    }
}

fn parse_bound(s: &str) -> CliResult<Bound> {
    Ok(s.parse::<Bound>()?)
}

fn load_attack(name: Option<&str>, file: Option<&Path>) -> CliResult<(AttackUnitary, CompositeSpace)> {
    match (name, file) {
        (_, Some(path)) => {
            let attack = read_attack_file(path).map_err(io_at(path))??;
            let space = CompositeSpace::for_be_dim(attack.be_dim())?;
            Ok((attack, space))
        }
        (Some(name), None) => {
            let which: BuiltinAttack = name.parse()?;
            let space = CompositeSpace::default();
            Ok((builtin_attack(which, &space)?, space))
        }
        (None, None) => Err(qdkd_core::Error::Config("no attack given".into()).into()),
    }
}

pub fn bounds(args: &BoundsArgs) -> CliResult<Outcome> {
    let stats = ChannelStats::new(args.p01, args.p10)?;
    let value = match (args.c, args.d) {
        (Some(c), Some(d)) => {
            let r = holevo_bounds(stats, EveParams::new(c, d)?)?;
            json!({
                "p01": stats.p01(),
                "p10": stats.p10(),
                "c": c,
                "d": d,
                "p": r.p,
                "q": r.q,
                "lambdas": r.lambdas,
                "lambda_primes": r.lambda_primes,
                "i_be": r.i_be,
                "i_ae": r.i_ae,
            })
        }
        _ => {
            let be = max_holevo(stats, Bound::Be);
            let ae = max_holevo(stats, Bound::Ae);
            let mut v = json!({
                "p01": stats.p01(),
                "p10": stats.p10(),
                "max_i_be": be,
                "max_i_ae": ae,
            });
            if args.verify {
                let gbe = max_holevo_grid(stats, Bound::Be, args.step)?;
                let gae = max_holevo_grid(stats, Bound::Ae, args.step)?;
                v["verify"] = json!({
                    "step": args.step,
                    "grid_i_be": gbe,
                    "grid_i_ae": gae,
                    "max_abs_difference": (gbe.value - be.value).abs().max((gae.value - ae.value).abs()),
                });
            }
            v
        }
    };
    emit(&value, args.out.as_deref())?;
    Ok(Outcome::Ok)
}

pub fn surface(args: &SurfaceArgs) -> CliResult<Outcome> {
    let which = parse_bound(&args.which)?;
    let points = surface_grid(which, args.grid)?;
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            write_surface_csv(&points, &mut w).and_then(|_| w.flush()).map_err(io_at(path))?;
            emit(
                &json!({ "which": which, "grid": args.grid, "rows": points.len(), "out": path }),
                None,
            )?;
        }
        None => {
            let mut stdout = io::stdout().lock();
            write_surface_csv(&points, &mut stdout).map_err(|source| CliError::Io { path: None, source })?;
        }
    }
    Ok(Outcome::Ok)
}

fn or_undefined(x: Option<f64>) -> Value {
    x.map_or_else(|| json!("undefined"), |v| json!(v))
}

pub fn attack_eval(args: &AttackEvalArgs) -> CliResult<Outcome> {
    let (attack, space) = load_attack(args.source.name.as_deref(), args.source.file.as_deref())?;
    let o = post_attack_states(&attack, &space)?;
    let stats = ChannelStats::new(o.p01, o.p10)?;
    // With c or d undefined the overlaps still fix the spectrum.
    let closed = bounds_from_pq(o.p, o.q)?;
    let exact = exact_holevo(&attack, &space)?;
    let p_anticorr = stats.p_anticorr();
    let verdict = security_condition(p_anticorr, 0.0)?;
    let value = json!({
        "attack": attack.name(),
        "p01": o.p01,
        "p10": o.p10,
        "p_anticorr": p_anticorr,
        "c": or_undefined(o.c),
        "d": or_undefined(o.d),
        "p": o.p,
        "q": o.q,
        "closed_form": { "i_be": closed.i_be, "i_ae": closed.i_ae },
        "exact": exact,
        "max_over_eve": {
            "i_be": max_holevo(stats, Bound::Be).value,
            "i_ae": max_holevo(stats, Bound::Ae).value,
        },
        "disturbance_detected": o.p01 + o.p10 < 1.0 - 1e-9,
        "flagged_insecure": !verdict.secure,
        "verdict": verdict,
    });
    emit(&value, args.out.as_deref())?;
    Ok(Outcome::Ok)
}

pub fn simulate(args: &SimulateArgs) -> CliResult<Outcome> {
    let (attack, _) = match &args.attack_file {
        Some(path) => load_attack(None, Some(path))?,
        None => load_attack(Some(&args.attack), None)?,
    };
    let mut config = ProtocolConfig::new(attack, args.rounds, args.seed);
    config.mode = args.mode.parse::<Mode>()?;
    config.message = args.message.as_deref().map(parse_bits).transpose()?;
    config.check_probability = args.check_probability;
    config.sacrifice_fraction = args.sacrifice_fraction;
    if args.exclude_bell_failures {
        config.fail_policy = FailPolicy::Exclude;
    }
    let report = run_session(&config)?;
    if let Some(path) = &args.trace {
        let mut w = create(path)?;
        write_trace_csv(&report.records, &mut w).and_then(|_| w.flush()).map_err(io_at(path))?;
    }
    let value = serde_json::to_value(&report).expect("report serializes");
    emit(&value, args.out.as_deref())?;
    Ok(if report.aborted { Outcome::Insecure } else { Outcome::Ok })
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<Outcome> {
    let verdict = analyze_experiment(args.p_loss, args.p_corr, args.trusted, args.qber)?;
    let value = json!({
        "p_loss": args.p_loss,
        "p_corr": args.p_corr,
        "trusted": args.trusted,
        "qber": args.qber,
        "p_anticorr": verdict.p_anticorr,
        "verdict": verdict,
    });
    emit(&value, args.out.as_deref())?;
    Ok(if verdict.secure { Outcome::Ok } else { Outcome::Insecure })
}
