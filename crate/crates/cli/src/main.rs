//! `swf`: JSON in, JSON out, for every pipeline of `swf-core`.
//!
//! Exit codes: 0 success, 1 validation or identity failure (the report is
//! still written), 2 malformed input, 3 computation error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use swf_core::chain::HomologyTable;
use swf_core::chain::RepresentativePolicy;
use swf_core::comparison::{
    connecting_delta, delta_via_oracle, exactness_report, parse_cycle, q_homology, spectral_pages,
    Comparison, Filtered,
};
use swf_core::complexes::{equivariant_homology, swf_homology};
use swf_core::crossing::{
    birth_crossing, death_crossing, parse_crossing, same_chamber_crossing, serialize_crossing,
    serialize_crossing_pretty, verify_crossing, wallcross_check,
};
use swf_core::error::ErrorCategory;
use swf_core::floer_data::{self, generate_admissible, validate, FloerData, Profile};
use swf_core::parallel::configure_threads;
use swf_core::report::q_to_json;
use swf_core::spectral_flow::{
    kuranishi_crossing, parse_path, spectral_flow, wall_signature, LocalModelParams,
};
use swf_core::SwfError;

#[derive(Parser, Debug)]
#[command(name = "swf", version, about = "Equivariant Floer-complex calculator")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the admissibility identities of a Floer data file.
    Validate { file: PathBuf },
    /// Homology ranks of the equivariant (default) or plain complex.
    Homology {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_power: u32,
        #[arg(long, conflicts_with = "plain")]
        equivariant: bool,
        #[arg(long)]
        plain: bool,
    },
    /// Projection residual, Q homology, exact sequence and spectral pages.
    Compare {
        file: PathBuf,
        #[arg(long)]
        max_power: u32,
    },
    /// Connecting map on a cycle of the plain complex.
    Delta {
        file: PathBuf,
        /// Inline JSON or a path to a JSON file: {"degree": d, "coefficients": {"a": 1}}.
        #[arg(long)]
        cycle: String,
        #[arg(long)]
        max_power: u32,
    },
    /// Rank and invariant comparison across a crossing.
    Wallcross {
        file: PathBuf,
        #[arg(long)]
        max_power: u32,
    },
    /// Chain-map and homotopy identities of the crossing maps.
    Morphisms {
        file: PathBuf,
        #[arg(long)]
        max_power: u32,
    },
    /// Spectral flow of a sampled Hermitian path.
    Specflow { file: PathBuf },
    /// Sign table of the local crossing model.
    Kuranishi {
        #[arg(long, allow_hyphen_values = true)]
        lambda_prime: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Random admissible data, or a random crossing built on it.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        orbits: usize,
        #[arg(long, allow_hyphen_values = true)]
        index_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        index_max: i64,
        #[arg(long)]
        no_reducible: bool,
        #[arg(long, value_enum)]
        crossing: Option<CrossingKind>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CrossingKind {
    SameChamber,
    Death,
    Birth,
}

/// What a subcommand hands back: a document and whether it reports success.
enum Outcome {
    Report(Value, bool),
    Raw(Vec<u8>),
}

fn report<T: Serialize>(value: &T, ok: bool) -> Outcome {
    Outcome::Report(serde_json::to_value(value).expect("reports serialize"), ok)
}

fn read(path: &Path) -> Result<Vec<u8>, SwfError> {
    fs::read(path).map_err(|e| SwfError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load(path: &Path) -> Result<FloerData, SwfError> {
    floer_data::parse(&read(path)?)
}

fn homology_json(table: &HomologyTable) -> Value {
    serde_json::to_value(table).expect("tables serialize")
}

fn run(command: &Command, pretty: bool) -> Result<Outcome, SwfError> {
    Ok(match command {
        Command::Validate { file } => {
            let r = validate(&load(file)?);
            let ok = r.ok;
            report(&r, ok)
        }
        Command::Homology {
            file,
            max_power,
            plain,
            ..
        } => {
            let data = load(file)?;
            let table = if *plain {
                swf_homology(&data)?
            } else {
                equivariant_homology(&data, *max_power)?
            };
            Outcome::Report(homology_json(&table), true)
        }
        Command::Compare { file, max_power } => {
            let data = load(file)?;
            let cmp = Comparison::new(&data, *max_power)?;
            let residual = cmp.projection().commutator_residual();
            let exact = exactness_report(&data, *max_power)?;
            let mut pages = serde_json::Map::new();
            for (name, which) in [
                ("equivariant", Filtered::Equivariant),
                ("q", Filtered::Q),
                ("plain", Filtered::Plain),
            ] {
                pages.insert(
                    name.into(),
                    serde_json::to_value(spectral_pages(&data, *max_power, which)?).expect("pages"),
                );
            }
            let ok = residual.ok && exact.exact;
            Outcome::Report(
                json!({
                    "i_map_residual": residual,
                    "q_homology": homology_json(&q_homology(&data, *max_power)?),
                    "exact_sequence": exact,
                    "spectral_pages": pages,
                }),
                ok,
            )
        }
        Command::Delta {
            file,
            cycle,
            max_power,
        } => {
            let data = load(file)?;
            let text = if cycle.trim_start().starts_with('{') {
                cycle.as_bytes().to_vec()
            } else {
                read(Path::new(cycle))?
            };
            let z = parse_cycle(&text)?;
            let chase = connecting_delta(&data, &z, *max_power)?;
            let oracle = delta_via_oracle(&data, &z, *max_power, RepresentativePolicy::Canonical)?;
            let ok = oracle == chase.coefficient && chase.closed_form == chase.coefficient;
            Outcome::Report(
                json!({ "delta": chase, "oracle": q_to_json(&oracle), "agree": ok }),
                ok,
            )
        }
        Command::Wallcross { file, max_power } => {
            let r = wallcross_check(&parse_crossing(&read(file)?)?, *max_power)?;
            let ok = r.ok;
            report(&r, ok)
        }
        Command::Morphisms { file, max_power } => {
            let r = verify_crossing(&parse_crossing(&read(file)?)?, *max_power)?;
            let ok = r.ok;
            report(&r, ok)
        }
        Command::Specflow { file } => {
            let path = parse_path(&read(file)?)?;
            let flow = spectral_flow(&path)?;
            let walls: Vec<Value> = path
                .samples()
                .iter()
                .filter_map(|(t, m)| {
                    let n = wall_signature(m, path.tol());
                    (n > 0).then(|| json!({ "t": t, "signature": n }))
                })
                .collect();
            Outcome::Report(
                json!({
                    "spectral_flow": flow,
                    "dim": path.dim(),
                    "tol": path.tol(),
                    "samples": path.samples().len(),
                    "wall_samples": walls,
                }),
                true,
            )
        }
        Command::Kuranishi {
            lambda_prime,
            gamma,
        } => report(
            &kuranishi_crossing(LocalModelParams {
                lambda_prime: *lambda_prime,
                gamma: *gamma,
            })?,
            true,
        ),
        Command::Generate {
            seed,
            orbits,
            index_min,
            index_max,
            no_reducible,
            crossing,
        } => {
            let profile = Profile::new(*orbits, *index_min, *index_max, !no_reducible);
            let bytes = match crossing {
                None => {
                    let data = generate_admissible(*seed, &profile)?;
                    if pretty {
                        floer_data::serialize_pretty(&data)
                    } else {
                        floer_data::serialize(&data)
                    }
                }
                Some(kind) => {
                    let cd = match kind {
                        CrossingKind::SameChamber => same_chamber_crossing(*seed, &profile)?,
                        CrossingKind::Death => death_crossing(*seed, &profile)?,
                        CrossingKind::Birth => birth_crossing(*seed, &profile)?,
                    };
                    if pretty {
                        serialize_crossing_pretty(&cd)
                    } else {
                        serialize_crossing(&cd)
                    }
                }
            };
            Outcome::Raw(bytes)
        }
    })
}

fn exit_code(e: &SwfError) -> u8 {
    match e.category() {
        ErrorCategory::Input => 2,
        ErrorCategory::Validation => 1,
        ErrorCategory::Computation => 3,
    }
}

fn emit(cli: &Cli, mut bytes: Vec<u8>) -> std::io::Result<()> {
    if bytes.last() != Some(&b'\n') {
        bytes.push(b'\n');
    }
    match &cli.output {
        Some(path) => fs::write(path, bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    }
}

fn render(value: &Value, pretty: bool) -> Vec<u8> {
    if pretty {
        serde_json::to_vec_pretty(value)
    } else {
        serde_json::to_vec(value)
    }
    .expect("values serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("SWF_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
    {
        configure_threads(n);
    }
    let (bytes, code) = match run(&cli.command, cli.pretty) {
        Ok(Outcome::Report(value, ok)) => (render(&value, cli.pretty), if ok { 0 } else { 1 }),
        Ok(Outcome::Raw(bytes)) => (bytes, 0),
        Err(e) => {
            eprintln!("swf: {e}");
            let doc = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            (render(&doc, cli.pretty), exit_code(&e))
        }
    };
    if let Err(e) = emit(&cli, bytes) {
        eprintln!("swf: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
