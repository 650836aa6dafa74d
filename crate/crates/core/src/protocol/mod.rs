//! The two-party schemes: Client encrypts and decrypts, Server evaluates,
//! and every crossing of the channel is logged.

pub mod key;
pub mod register;
pub mod scheme;
pub mod transcript;

pub use key::PauliKey;
pub use register::{eg_u, JointRegister, Label, PairMeasurement};
pub use scheme::{decrypt, eval, run_end_to_end, run_with_key, submit_ciphertext, Outcomes, RunResult};
pub use transcript::{Direction, Message, PayloadKind, Transcript};
