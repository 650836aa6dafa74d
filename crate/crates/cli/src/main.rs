//! `tpqhe`: run the GT/VGT schemes, derive key-update plans and audit them.
//!
//! Exit status: 0 pass, 1 audit or fidelity failure, 2 bad input,
//! 3 resource limit, 4 post-selection on an impossible outcome.

mod failure;
mod input;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tpqhe::audit::{
    compactness_report, deferred_equivalence, deferred_equivalence_exhaustive, eg_security_audit,
    homomorphism_sweep, qotp_reference_system_audit, qotp_security_audit, random_family, SecurityReport,
};
use tpqhe::circuits::RandomCircuitSpec;
use tpqhe::keyalg::{KeyUpdatePlan, Scheme};
use tpqhe::protocol::{run_end_to_end, run_with_key, Message, Outcomes, PauliKey};
use tpqhe::qsim::{bell_state, DensityMatrix, MeasurementOutcome};
use tpqhe::{parse_circuit, Circuit, Error};

use failure::Failure;
use input::{bit_string, parse_forced, parse_input};

const RNG_NAME: &str = "ChaCha8Rng";

#[derive(Parser)]
#[command(name = "tpqhe", version, about = "Teleportation-based quantum homomorphic encryption lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt, evaluate and decrypt one input, and compare with the plain circuit.
    Run(RunArgs),
    /// Derive and print the key-update plan of a circuit.
    Plan(PlanArgs),
    /// Run one of the audits.
    #[command(subcommand)]
    Audit(AuditCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Gt,
    Vgt,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Gt => Scheme::Gt,
            SchemeArg::Vgt => Scheme::Vgt,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "gt")]
    scheme: SchemeArg,
    #[arg(long)]
    circuit: PathBuf,
    /// Basis string such as `01`, `plus`, or `random:<seed>`; all zeros when absent.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Post-select on these outcome bits, `rx(1) rz(1) rx(2) …`.
    #[arg(long)]
    forced: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, value_enum, default_value = "gt")]
    scheme: SchemeArg,
    #[arg(long = "circuit", value_name = "PATH")]
    circuit_flag: Option<PathBuf>,
    #[arg(value_name = "CIRCUIT", conflicts_with = "circuit_flag")]
    circuit: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AuditCommand {
    /// Key-averaged one-time pad against the maximally mixed state.
    Qotp {
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Random plaintexts added to the basis and entangled states.
        #[arg(long, default_value_t = 8)]
        random: usize,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Server's view of an encrypted phase gate is independent of the gate.
    Eg {
        #[arg(long, default_value = "plus")]
        input: String,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Immediate against deferred measurement; the key comes from `--seed`.
    Deferred {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        forced: Option<String>,
        /// Every outcome tuple instead of one forced branch.
        #[arg(long, conflicts_with = "forced")]
        exhaustive: bool,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Arity bounds and classical work of a plan.
    Compactness {
        #[arg(long, value_enum, default_value = "gt")]
        scheme: SchemeArg,
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// End-to-end runs against the plain circuit.
    Homomorphism {
        #[arg(long, value_enum, default_value = "gt")]
        scheme: SchemeArg,
        /// Circuit files to include; repeatable.
        #[arg(long)]
        circuit: Vec<PathBuf>,
        /// Random circuits (n ≤ 3, N ≤ 20, M ≤ 5) to add.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
}

type Outcome = Result<bool, Failure>;

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_circuit(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit<R: Serialize>(report: &R, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tolerance(t: f64) -> Result<f64, Failure> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Failure::Input(format!("tolerance must be positive, got {t}")))
    }
}

#[derive(Serialize)]
struct KeyReport {
    x: String,
    z: String,
}

impl From<&PauliKey> for KeyReport {
    fn from(k: &PauliKey) -> Self {
        Self { x: bit_string(&k.x), z: bit_string(&k.z) }
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    scheme: Scheme,
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    rng: &'static str,
    seed: u64,
    input: &'a str,
    fidelity: f64,
    min_fidelity: f64,
    tolerance: f64,
    outcomes: &'a [MeasurementOutcome],
    basis_bits: String,
    final_key: KeyReport,
    transcript: &'a [Message],
    pass: bool,
}

fn cmd_run(args: RunArgs) -> Outcome {
    let tol = tolerance(args.tolerance)?;
    let circuit = read_circuit(&args.circuit)?;
    let n = circuit.num_wires();
    let m = circuit.profile().t_count();
    let input = args.input.clone().unwrap_or_else(|| "0".repeat(n));
    let plaintext = parse_input(&input, n)?;
    let scheme = Scheme::from(args.scheme);
    let result = match &args.forced {
        Some(bits) => {
            let forced = parse_forced(bits, m).map_err(Failure::Input)?;
            let sk = PauliKey::keygen(n, &mut ChaCha8Rng::seed_from_u64(args.common.seed));
            run_with_key(scheme, &circuit, &plaintext, &sk, Outcomes::Forced(&forced))?
        }
        None => run_end_to_end(scheme, &circuit, &plaintext, args.common.seed)?,
    };
    let fidelity = result.output_state.fidelity_up_to_phase(&circuit.apply(&plaintext)?)?;
    let pass = 1.0 - fidelity <= tol && result.transcript.is_non_interactive();
    emit(
        &RunReport {
            scheme,
            n,
            m,
            rng: RNG_NAME,
            seed: args.common.seed,
            input: &input,
            fidelity,
            min_fidelity: fidelity,
            tolerance: tol,
            outcomes: &result.outcomes,
            basis_bits: bit_string(&result.basis_bits),
            final_key: KeyReport::from(&result.final_key),
            transcript: result.transcript.messages(),
            pass,
        },
        args.common.out.as_deref(),
    )?;
    Ok(pass)
}

fn cmd_plan(args: PlanArgs) -> Outcome {
    let path = args
        .circuit
        .or(args.circuit_flag)
        .ok_or_else(|| Failure::Input("plan needs a circuit file".into()))?;
    let plan = KeyUpdatePlan::derive(args.scheme.into(), &read_circuit(&path)?);
    let text = plan.to_json() + "\n";
    match args.out {
        Some(out) => fs::write(&out, text).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?,
        None => print!("{text}"),
    }
    Ok(true)
}

#[derive(Serialize)]
struct QotpReport {
    n: usize,
    max_trace_distance: f64,
    plaintexts: SecurityReport,
    reference_system: Option<SecurityReport>,
    pass: bool,
}

fn cmd_qotp(n: usize, random: usize, tol: f64, common: Common) -> Outcome {
    let tol = tolerance(tol)?;
    if n == 0 || n > tpqhe::audit::security::QOTP_AUDIT_MAX_QUBITS {
        return Err(Error::AuditTooLarge(format!("n = {n} is outside 1..=3")).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut states: Vec<_> = (0..1usize << n).map(|i| tpqhe::StateVectorF64::basis(n, i)).collect::<Result<_, _>>()?;
    if n >= 2 {
        let mut pair = bell_state::<f64>(false, false);
        for _ in 2..n {
            pair = pair.tensor(&tpqhe::StateVectorF64::new(1)?)?;
        }
        states.push(pair);
    }
    for _ in 0..random {
        states.push(tpqhe::StateVectorF64::random(n, &mut rng)?);
    }
    let plaintexts: Vec<_> = states.iter().map(DensityMatrix::from_pure).collect();
    let report = qotp_security_audit(n, &plaintexts, tol)?;
    let reference_system = if n == 1 {
        let joint = DensityMatrix::from_pure(&bell_state::<f64>(false, false));
        Some(qotp_reference_system_audit(1, &joint, tol)?)
    } else {
        None
    };
    let max = reference_system.as_ref().map_or(0.0, |r| r.max_trace_distance).max(report.max_trace_distance);
    let pass = report.pass && reference_system.as_ref().is_none_or(|r| r.pass);
    emit(&QotpReport { n, max_trace_distance: max, plaintexts: report, reference_system, pass }, common.out.as_deref())?;
    Ok(pass)
}

fn cmd_audit(cmd: AuditCommand) -> Outcome {
    match cmd {
        AuditCommand::Qotp { n, random, tolerance: tol, common } => cmd_qotp(n, random, tol, common),
        AuditCommand::Eg { input, tolerance: tol, common } => {
            let alpha = parse_input(&input, 1)?;
            let report = eg_security_audit(&alpha, tolerance(tol)?)?;
            emit(&report, common.out.as_deref())?;
            Ok(report.pass)
        }
        AuditCommand::Deferred { circuit, input, forced, exhaustive, tolerance: tol, common } => {
            let tol = tolerance(tol)?;
            let circuit = read_circuit(&circuit)?;
            let n = circuit.num_wires();
            let zeros = "0".repeat(n);
            let plaintext = parse_input(input.as_deref().unwrap_or(&zeros), n)?;
            let sk = PauliKey::keygen(n, &mut ChaCha8Rng::seed_from_u64(common.seed));
            if exhaustive {
                let report = deferred_equivalence_exhaustive(&circuit, &plaintext, &sk, tol)?;
                emit(&report, common.out.as_deref())?;
                Ok(report.pass)
            } else {
                let bits = forced.ok_or_else(|| Failure::Input("deferred needs --forced or --exhaustive".into()))?;
                let forced = parse_forced(&bits, circuit.profile().t_count()).map_err(Failure::Input)?;
                let c = deferred_equivalence(&circuit, &plaintext, &sk, &forced)?;
                let pass = c.gap <= tol && c.probability_gap <= tol && c.keys_agree;
                emit(&c, common.out.as_deref())?;
                Ok(pass)
            }
        }
        AuditCommand::Compactness { scheme, circuit, out } => {
            let report = compactness_report(&KeyUpdatePlan::derive(scheme.into(), &read_circuit(&circuit)?));
            emit(&report, out.as_deref())?;
            Ok(report.pass)
        }
        AuditCommand::Homomorphism { scheme, circuit, trials, seeds, tolerance: tol, common } => {
            let mut family = circuit.iter().map(|p| read_circuit(p)).collect::<Result<Vec<_>, _>>()?;
            family.extend(random_family(common.seed, trials, RandomCircuitSpec::default()));
            let summary = homomorphism_sweep::<f64>(scheme.into(), &family, seeds, common.seed, tolerance(tol)?)?;
            emit(&summary, common.out.as_deref())?;
            Ok(summary.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Plan(args) => cmd_plan(args),
        Command::Audit(cmd) => cmd_audit(cmd),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("tpqhe: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
