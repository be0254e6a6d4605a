//! Command-line front end: pattern ingestion, command dispatch, JSON/DOT
//! report emission, reproducible seeds.
//!
//! Both input files are plain pattern JSON (`{"rows": n, "cols": c,
//! "entries": [[i, j], ...]}`, 1-based): the system pattern [A̅ | B̅] with
//! n = rows and m = cols − rows, and the perturbation pattern F̅ of equal
//! dimensions.
//!
//! Exit codes: 0 on success, 2 when the pair is not structurally
//! controllable, 1 on I/O or validation errors (with a JSON error object).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use ptsc::gcrit;
use ptsc::mptsc::{self, CertCondition, MultiOutcome};
use ptsc::oracle::{self, Witness};
use ptsc::pattern::{Pattern, PerturbStructure, SystemPattern};
use ptsc::ptsc1::{self, Verdict};
use ptsc::scrp;
use ptsc::PtscError;

#[derive(Parser)]
#[command(
    name = "ptsc",
    about = "Decides whether a structured pair tolerates structured perturbations \
             (PTSC) or is vulnerable to them (PSSC), with numeric certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct IoArgs {
    /// System pattern JSON [A̅ | B̅] (n rows, n+m columns, 1-based entries)
    #[arg(long)]
    system: PathBuf,
    /// Perturbation pattern JSON F̅ (same dimensions)
    #[arg(long)]
    perturb: PathBuf,
    /// RNG seed for realizations and witnesses (env PTSC_SEED overrides)
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide PTSC vs PSSC (exact for single input; certificates for multi)
    Check {
        #[command(flatten)]
        io: IoArgs,
        /// Evaluate every perturbed entry instead of stopping at the first failure
        #[arg(long)]
        full_trace: bool,
        /// Attach a numeric uncontrollability witness to a PSSC verdict
        #[arg(long)]
        witness: bool,
        /// Dump DOT files of the auxiliary graphs into this directory
        #[arg(long)]
        dump_graphs: Option<PathBuf>,
    },
    /// Produce a numeric uncontrollability certificate for a PSSC pair
    Witness {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Cross-check the verdict with the exact-interpolation oracle (m = 1)
    Oracle {
        #[command(flatten)]
        io: IoArgs,
        /// Independent random trials per perturbed entry
        #[arg(long, default_value_t = 2)]
        trials: usize,
    },
    /// Search for minimum-cardinality vulnerable sub-supports of F̅
    Minsupport {
        #[command(flatten)]
        io: IoArgs,
        /// Maximum number of subset evaluations
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Report generic feasibility of the structured controllability radius problem
    Scrp {
        #[command(flatten)]
        io: IoArgs,
        /// Column-subset budget for the multi-input certificates
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Dump DOT renderings of the system and auxiliary graphs
    Graphs {
        #[command(flatten)]
        io: IoArgs,
        /// Output directory for the .dot files
        #[arg(long)]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let obj = json!({"error": {"kind": error_kind(&err), "message": err.to_string()}});
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
            ExitCode::from(1)
        }
    }
}

fn error_kind(err: &anyhow::Error) -> &'static str {
    if let Some(e) = err.downcast_ref::<PtscError>() {
        match e {
            PtscError::DimensionMismatch(_) => "dimension-mismatch",
            PtscError::InvalidPattern(_) => "invalid-pattern",
            PtscError::InvalidGraph(_) => "invalid-graph",
            PtscError::NotStructurallyControllable => "not-structurally-controllable",
            PtscError::NotSingleInput(_) => "not-single-input",
            PtscError::NotApplicable(_) => "not-applicable",
            PtscError::DegenerateSample(_) => "degenerate-sample",
        }
    } else if err.downcast_ref::<serde_json::Error>().is_some() {
        "malformed-json"
    } else if err.downcast_ref::<std::io::Error>().is_some() {
        "io-error"
    } else {
        "error"
    }
}

fn load_inputs(io: &IoArgs) -> anyhow::Result<(SystemPattern, PerturbStructure, u64)> {
    let sys_pat: Pattern = serde_json::from_str(&std::fs::read_to_string(&io.system)?)?;
    let sys = SystemPattern::from_pattern(sys_pat)?;
    let f_pat: Pattern = serde_json::from_str(&std::fs::read_to_string(&io.perturb)?)?;
    let f = PerturbStructure::new(&sys, f_pat)?;
    let seed = match std::env::var("PTSC_SEED") {
        Ok(v) => v.parse::<u64>().map_err(|_| {
            PtscError::InvalidPattern(format!("PTSC_SEED must be an unsigned integer, got {v:?}"))
        })?,
        Err(_) => io.seed,
    };
    Ok((sys, f, seed))
}

fn emit<T: Serialize>(out: &Option<PathBuf>, report: &T) -> anyhow::Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(report)?);
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckOutput {
    #[serde(flatten)]
    verdict: Verdict,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<ptsc1::EdgeCheckTrace>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multi: Option<MultiOutcome>,
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Check { io, full_trace, witness, dump_graphs } => {
            let (sys, f, seed) = load_inputs(&io)?;
            if let Some(dir) = &dump_graphs {
                dump_graph_files(&sys, &f, dir)?;
            }
            if sys.m() == 1 {
                let report = ptsc1::check(&sys, &f, full_trace)?;
                let exit = matches!(report.verdict, Verdict::NotStructurallyControllable)
                    .then_some(2)
                    .unwrap_or(0);
                let w = match (&report.verdict, witness) {
                    (Verdict::Pssc { .. }, true) => {
                        let trace = report.traces.last().expect("failing trace present");
                        Some(oracle::synth_witness(&sys, &f, trace, seed)?)
                    }
                    _ => None,
                };
                let out = CheckOutput {
                    verdict: report.verdict,
                    seed,
                    edges: full_trace.then_some(report.traces),
                    witness: w,
                    multi: None,
                };
                emit(&io.out, &out)?;
                Ok(ExitCode::from(exit))
            } else {
                let multi = match mptsc::is_pssc_sufficient(&sys, &f, 100_000) {
                    Err(PtscError::NotStructurallyControllable) => {
                        let out = CheckOutput {
                            verdict: Verdict::NotStructurallyControllable,
                            seed,
                            edges: None,
                            witness: None,
                            multi: None,
                        };
                        emit(&io.out, &out)?;
                        return Ok(ExitCode::from(2));
                    }
                    other => other?,
                };
                let w = match (&multi, witness) {
                    (MultiOutcome::PsscCertified { k, condition }, true) => {
                        Some(multi_witness(&sys, &f, k, *condition, seed)?)
                    }
                    _ => None,
                };
                // the certificates are sufficient only, so the negative
                // direction stays an explicit "unknown"
                let label = match &multi {
                    MultiOutcome::PsscCertified { .. } => "PSSC",
                    MultiOutcome::Unknown { .. } => "unknown",
                };
                let out = json!({
                    "verdict": label,
                    "seed": seed,
                    "multi": multi,
                    "witness": w,
                });
                emit(&io.out, &out)?;
                Ok(ExitCode::from(0))
            }
        }
        Command::Witness { io } => {
            let (sys, f, seed) = load_inputs(&io)?;
            if sys.m() == 1 {
                let report = ptsc1::check(&sys, &f, false)?;
                match &report.verdict {
                    Verdict::NotStructurallyControllable => {
                        emit(&io.out, &json!({"verdict": "not structurally controllable", "seed": seed}))?;
                        Ok(ExitCode::from(2))
                    }
                    Verdict::Ptsc => {
                        emit(&io.out, &json!({"verdict": "PTSC", "seed": seed}))?;
                        Ok(ExitCode::from(0))
                    }
                    Verdict::Pssc { .. } => {
                        let trace = report.traces.last().expect("failing trace present");
                        let w = oracle::synth_witness(&sys, &f, trace, seed)?;
                        emit(&io.out, &WitnessOutput::new(w, seed))?;
                        Ok(ExitCode::from(0))
                    }
                }
            } else {
                match mptsc::is_pssc_sufficient(&sys, &f, 100_000) {
                    Err(PtscError::NotStructurallyControllable) => {
                        emit(&io.out, &json!({"verdict": "not structurally controllable", "seed": seed}))?;
                        Ok(ExitCode::from(2))
                    }
                    Ok(MultiOutcome::PsscCertified { k, condition }) => {
                        let w = multi_witness(&sys, &f, &k, condition, seed)?;
                        emit(&io.out, &WitnessOutput::new(w, seed))?;
                        Ok(ExitCode::from(0))
                    }
                    Ok(MultiOutcome::Unknown { .. }) => {
                        emit(&io.out, &json!({"verdict": "unknown", "seed": seed}))?;
                        Ok(ExitCode::from(0))
                    }
                    Err(e) => Err(e.into()),
                }
            }
        }
        Command::Oracle { io, trials } => {
            let (sys, f, seed) = load_inputs(&io)?;
            let verdict = oracle::pssc_oracle_single(&sys, &f, trials, seed)?;
            let exit = matches!(verdict, Verdict::NotStructurallyControllable)
                .then_some(2)
                .unwrap_or(0);
            emit(&io.out, &json!({"oracle": verdict, "trials": trials, "seed": seed}))?;
            Ok(ExitCode::from(exit))
        }
        Command::Minsupport { io, budget } => {
            let (sys, f, seed) = load_inputs(&io)?;
            match scrp::min_pssc_support(&sys, &f, budget) {
                Err(PtscError::NotStructurallyControllable) => {
                    emit(&io.out, &json!({"verdict": "not structurally controllable", "seed": seed}))?;
                    Ok(ExitCode::from(2))
                }
                Ok(rep) => {
                    emit(&io.out, &json!({"minsupport": rep, "seed": seed}))?;
                    Ok(ExitCode::from(0))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Scrp { io, budget } => {
            let (sys, f, seed) = load_inputs(&io)?;
            let rep = scrp::scrp_feasibility(&sys, &f, budget)?;
            emit(&io.out, &json!({"scrp": rep, "seed": seed}))?;
            Ok(ExitCode::from(0))
        }
        Command::Graphs { io, dir } => {
            let (sys, f, _) = load_inputs(&io)?;
            dump_graph_files(&sys, &f, &dir)?;
            Ok(ExitCode::from(0))
        }
    }
}

fn multi_witness(
    sys: &SystemPattern,
    f: &PerturbStructure,
    k: &[usize],
    condition: CertCondition,
    seed: u64,
) -> anyhow::Result<Witness> {
    Ok(match condition {
        CertCondition::C1 => oracle::synth_witness_multi_zero(sys, f, k, seed)?,
        CertCondition::C2 => oracle::synth_witness_multi_nonzero(sys, f, k, seed)?,
    })
}

#[derive(Serialize)]
struct WitnessOutput {
    #[serde(flatten)]
    witness: Witness,
    seed: u64,
}

impl WitnessOutput {
    fn new(witness: Witness, seed: u64) -> Self {
        WitnessOutput { witness, seed }
    }
}

fn dump_graph_files(sys: &SystemPattern, f: &PerturbStructure, dir: &Path) -> anyhow::Result<()> {
    if sys.m() != 1 {
        return Err(PtscError::NotSingleInput(sys.m()).into());
    }
    std::fs::create_dir_all(dir)?;
    let g = gcrit::SystemGraph::from_system(sys);
    std::fs::write(dir.join("system.dot"), gcrit::dot_system_graph(&g))?;
    for (i, j) in f.edges_colwise() {
        let merged = sys.merged_with(&f.pattern().without_entry(i, j))?;
        let analysis = gcrit::build_aux_and_sccs(&merged, i, j);
        std::fs::write(dir.join(format!("aux_{i}_{j}.dot")), gcrit::dot_aux_graph(&analysis.aux))?;
        std::fs::write(
            dir.join(format!("aux_m_{i}_{j}.dot")),
            gcrit::dot_aux_reoriented(&analysis),
        )?;
        std::fs::write(dir.join(format!("sccs_{i}_{j}.dot")), gcrit::dot_sccs(&analysis))?;
    }
    Ok(())
}
