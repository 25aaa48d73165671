use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Parser, Subcommand, ValueEnum};

use restwatch::config::Config;
use restwatch::error::Error;
use restwatch::ingest::{parse_comm_log, parse_location_log, parse_motion_log, ParseReport};
use restwatch::model::{load_model, save_model};
use restwatch::pipeline::{evaluate, render_json, render_table, render_train_report, train};
use restwatch::synth::{generate, AnomalyKind, AnomalySpec, BehaviorProfile};
use restwatch::types::{CommDay, LocationSample, MotionSample};

#[derive(Parser)]
#[command(name = "restwatch", version, about = "Behavioral anomaly detection from smartphone sensor logs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a patient's normal patterns from sensor logs
    Train {
        /// Directory with location.jsonl, motion.jsonl, comm.jsonl
        #[arg(long)]
        input: PathBuf,
        /// TOML config; defaults apply when omitted
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output model file
        #[arg(long)]
        out: PathBuf,
        /// Patient identifier stored in the model
        #[arg(long, default_value = "patient")]
        patient_id: String,
    },
    /// Evaluate days against a trained model
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        from: NaiveDate,
        #[arg(long)]
        to: NaiveDate,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Generate a synthetic patient trace with planted ground truth
    Simulate {
        /// TOML behavior profile; defaults apply when omitted
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        days: u32,
        /// day:kind:magnitude, kinds: sleep (magnitude start/duration,
        /// e.g. 20:sleep:11.42/1.52), comm_drop, missed_call_spike
        #[arg(long = "anomaly")]
        anomalies: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn parse_anomaly(spec: &str) -> Result<AnomalySpec, Error> {
    let usage = || {
        Error::Usage(format!(
            "bad anomaly spec {spec:?}; expected day:kind:magnitude with kind one of \
             sleep (magnitude = start/duration), comm_drop, missed_call_spike"
        ))
    };
    let mut parts = spec.splitn(3, ':');
    let day: u32 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(usage)?;
    let kind = parts.next().ok_or_else(usage)?;
    let magnitude = parts.next().ok_or_else(usage)?;
    let kind = match kind {
        "sleep" => {
            let (start, dur) = magnitude.split_once('/').ok_or_else(usage)?;
            AnomalyKind::Sleep {
                start_hour: start.parse().map_err(|_| usage())?,
                duration_h: dur.parse().map_err(|_| usage())?,
            }
        }
        "comm_drop" => AnomalyKind::CommDrop { magnitude: magnitude.parse().map_err(|_| usage())? },
        "missed_call_spike" => {
            AnomalyKind::MissedCallSpike { magnitude: magnitude.parse().map_err(|_| usage())? }
        }
        _ => return Err(usage()),
    };
    Ok(AnomalySpec { day, kind })
}

fn report_skips(name: &str, report: &ParseReport) {
    for (line, reason) in &report.skipped {
        eprintln!("{name}: skipped line {line}: {reason}");
    }
    if report.duplicates > 0 {
        eprintln!("{name}: dropped {} duplicate record(s), first kept", report.duplicates);
    }
}

type Inputs = (Vec<LocationSample>, Vec<MotionSample>, Vec<CommDay>);

fn load_inputs(input: &std::path::Path, max_bad_fraction: f64) -> Result<Inputs, Error> {
    let (location, lrep) = parse_location_log(&input.join("location.jsonl"), max_bad_fraction)?;
    report_skips("location.jsonl", &lrep);
    let (motion, mrep) = parse_motion_log(&input.join("motion.jsonl"), max_bad_fraction)?;
    report_skips("motion.jsonl", &mrep);
    let (comm, crep) = parse_comm_log(&input.join("comm.jsonl"), max_bad_fraction)?;
    report_skips("comm.jsonl", &crep);
    Ok((location, motion, comm))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Train { input, config, out, patient_id } => {
            let cfg = match config {
                Some(path) => Config::from_toml_file(&path)?,
                None => Config::default(),
            };
            let (location, motion, comm) = load_inputs(&input, cfg.max_bad_fraction)?;
            let outcome = train(&location, &motion, &comm, &cfg, &patient_id)?;
            save_model(&outcome.model, &out)?;
            print!("{}", render_train_report(&outcome.report, &outcome.model));
            println!("model written to {}", out.display());
            Ok(())
        }
        Command::Eval { model, input, from, to, format } => {
            let model = load_model(&model)?;
            let (location, motion, comm) = load_inputs(&input, model.config.max_bad_fraction)?;
            let verdicts = evaluate(&model, &location, &motion, &comm, from, to)?;
            match format {
                Format::Json => print!("{}", render_json(&verdicts)),
                Format::Table => print!("{}", render_table(&verdicts)),
            }
            Ok(())
        }
        Command::Simulate { profile, days, anomalies, seed, out } => {
            let profile = match profile {
                Some(path) => BehaviorProfile::from_toml_file(&path)?,
                None => BehaviorProfile::default(),
            };
            let anomalies: Vec<AnomalySpec> =
                anomalies.iter().map(|s| parse_anomaly(s)).collect::<Result<_, _>>()?;
            let output = generate(&profile, days, &anomalies, seed)
                .map_err(|e| match e {
                    Error::InvalidInput(msg) => Error::Usage(msg),
                    other => other,
                })?;
            output.write_to_dir(&out)?;
            println!("wrote {} days of logs to {}", days, out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
