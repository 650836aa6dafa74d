use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::keyalg::{KeyTracker, KeyUpdatePlan, Scheme};
use crate::protocol::key::PauliKey;
use crate::protocol::register::{JointRegister, Label};
use crate::protocol::transcript::{Direction, PayloadKind, Transcript};
use crate::qsim::{phase_power, MeasurementOutcome, OutcomeSource, StateVector};
use crate::scalar::Real;

/// Where decrypt's measurement outcomes come from.
pub enum Outcomes<'a> {
    Sample(&'a mut dyn RngCore),
    /// Post-select on these outcomes, one per round.
    Forced(&'a [MeasurementOutcome]),
}

impl Outcomes<'_> {
    fn source(&mut self, round: usize) -> Result<OutcomeSource<'_>> {
        match self {
            Outcomes::Sample(rng) => Ok(OutcomeSource::Sample(&mut **rng)),
            Outcomes::Forced(list) => list
                .get(round)
                .map(|&o| OutcomeSource::Forced(o))
                .ok_or(Error::OutcomesExhausted(list.len())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult<T: Real = f64> {
    /// Decrypted plaintext output.
    pub output_state: StateVector<T>,
    pub outcomes: Vec<MeasurementOutcome>,
    /// Basis bit `b` used in round `i` (`Φ(P^b)`).
    pub basis_bits: Vec<bool>,
    /// Born probability of each observed outcome.
    pub outcome_probabilities: Vec<T>,
    pub branch_probabilities: Vec<[T; 4]>,
    pub secret_key: PauliKey,
    pub final_key: PauliKey,
    pub plan: KeyUpdatePlan,
    pub transcript: Transcript,
    /// Quantum measurements Client performed while decrypting.
    pub measurements: usize,
    /// Variable reads Client performed evaluating the plan.
    pub xor_terms: usize,
}

fn data_and_server_labels(n: usize, m: usize) -> Vec<String> {
    (1..=n).map(Label::Data).chain((1..=m).map(Label::Server)).map(|l| l.to_string()).collect()
}

/// Client loads the ciphertext and ships it, together with every `s_i`, to
/// Server.
pub fn submit_ciphertext<T: Real>(
    register: &mut JointRegister<T>,
    ciphertext: &StateVector<T>,
    transcript: &mut Transcript,
) -> Result<()> {
    register.load_ciphertext(ciphertext)?;
    transcript.push(
        Direction::ClientToServer,
        PayloadKind::Ciphertext,
        data_and_server_labels(register.num_data(), register.num_pairs()),
        String::new(),
    );
    Ok(())
}

/// Server side: runs the circuit on the ciphertext, parking the output of the
/// `i`-th T/T† in `s_i` and putting the pair's partner in its place, then
/// sends results and plan back. No measurement happens here.
pub fn eval<T: Real>(
    scheme: Scheme,
    circuit: &Circuit,
    register: &mut JointRegister<T>,
    transcript: &mut Transcript,
) -> Result<KeyUpdatePlan> {
    let m = circuit.profile().t_count();
    if circuit.num_wires() != register.num_data() || m != register.num_pairs() {
        return Err(Error::PlanMismatch(format!(
            "circuit needs {} data wires and {} pairs, register has {} and {}",
            circuit.num_wires(),
            m,
            register.num_data(),
            register.num_pairs()
        )));
    }
    let mut round = 0;
    for gate in circuit.gates() {
        register.apply_on_data(gate)?;
        if gate.kind().is_t_like() {
            round += 1;
            register.swap(Label::Data(gate.wires()[0]), Label::Server(round))?;
        }
    }
    let plan = KeyUpdatePlan::derive(scheme, circuit);
    transcript.push(
        Direction::ServerToClient,
        PayloadKind::EvaluatedResult,
        data_and_server_labels(circuit.num_wires(), m),
        plan.to_json(),
    );
    Ok(plan)
}

/// Client side: alternates basis choice and measurement of `(s_i, c_i)`,
/// evaluates the plan to the final key and strips the one-time pad.
pub fn decrypt<T: Real>(
    sk: &PauliKey,
    plan: &KeyUpdatePlan,
    mut register: JointRegister<T>,
    mut outcomes: Outcomes<'_>,
    transcript: Transcript,
) -> Result<RunResult<T>> {
    let n = plan.num_wires();
    let m = plan.num_rounds();
    if sk.num_wires() != n || register.num_data() != n || register.num_pairs() != m {
        return Err(Error::PlanMismatch(format!(
            "plan is for n = {n}, M = {m}; key has n = {}, register n = {}, M = {}",
            sk.num_wires(),
            register.num_data(),
            register.num_pairs()
        )));
    }
    let mut tracker = KeyTracker::new(plan, &sk.x, &sk.z)?;
    let mut result_outcomes = Vec::with_capacity(m);
    let mut basis_bits = Vec::with_capacity(m);
    let mut probabilities = Vec::with_capacity(m);
    let mut branches = Vec::with_capacity(m);
    for i in 1..=m {
        let b = tracker.next_basis_bit()?;
        let pm = register.measure(Label::Server(i), Label::Client(i), &phase_power(b), outcomes.source(i - 1)?)?;
        tracker.record(pm.outcome)?;
        result_outcomes.push(pm.outcome);
        basis_bits.push(b);
        probabilities.push(pm.probability);
        branches.push(pm.branch_probabilities);
    }
    let xor_terms = tracker.xor_terms();
    let (x, z) = tracker.finish()?;
    let final_key = PauliKey::new(x, z)?;
    let xor_terms = xor_terms + plan.final_map().rows().map(|e| e.arity()).sum::<usize>();
    let output_state = final_key.decrypt(&register.into_state())?;
    Ok(RunResult {
        output_state,
        outcomes: result_outcomes,
        basis_bits,
        outcome_probabilities: probabilities,
        branch_probabilities: branches,
        secret_key: sk.clone(),
        final_key,
        plan: plan.clone(),
        transcript,
        measurements: m,
        xor_terms,
    })
}

/// Setup, encrypt, eval and decrypt under a given key. The plan Client uses
/// is the one decoded from Server's message.
pub fn run_with_key<T: Real>(
    scheme: Scheme,
    circuit: &Circuit,
    plaintext: &StateVector<T>,
    sk: &PauliKey,
    outcomes: Outcomes<'_>,
) -> Result<RunResult<T>> {
    let m = circuit.profile().t_count();
    let mut register = JointRegister::setup(circuit.num_wires(), m)?;
    let mut transcript = Transcript::new();
    let ciphertext = sk.encrypt(plaintext)?;
    submit_ciphertext(&mut register, &ciphertext, &mut transcript)?;
    eval(scheme, circuit, &mut register, &mut transcript)?;
    let plan = KeyUpdatePlan::from_json(&transcript.messages()[1].classical)?;
    decrypt(sk, &plan, register, outcomes, transcript)
}

/// Full run from one seeded stream: key bits first, then measurement outcomes.
pub fn run_end_to_end<T: Real>(
    scheme: Scheme,
    circuit: &Circuit,
    plaintext: &StateVector<T>,
    seed: u64,
) -> Result<RunResult<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sk = PauliKey::keygen(circuit.num_wires(), &mut rng);
    run_with_key(scheme, circuit, plaintext, &sk, Outcomes::Sample(&mut rng))
}
