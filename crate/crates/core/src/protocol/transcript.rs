use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    ClientToServer,
    ServerToClient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PayloadKind {
    Ciphertext,
    EvaluatedResult,
}

/// One transmission. Quantum payload is named by the labels that moved; the
/// classical part is kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Message {
    pub index: usize,
    pub direction: Direction,
    #[serde(rename = "payload-kind")]
    pub payload_kind: PayloadKind,
    #[serde(rename = "qubit-labels")]
    pub qubit_labels: Vec<String>,
    #[serde(rename = "classical-bytes")]
    pub classical_bytes: usize,
    #[serde(skip)]
    pub classical: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    messages: Vec<Message>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, direction: Direction, payload_kind: PayloadKind, qubit_labels: Vec<String>, classical: String) {
        self.messages.push(Message {
            index: self.messages.len() + 1,
            direction,
            payload_kind,
            qubit_labels,
            classical_bytes: classical.len(),
            classical,
        });
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// A finished run: one ciphertext up, one result back, nothing else.
    pub fn is_non_interactive(&self) -> bool {
        matches!(
            self.messages.as_slice(),
            [a, b] if a.direction == Direction::ClientToServer
                && a.payload_kind == PayloadKind::Ciphertext
                && b.direction == Direction::ServerToClient
                && b.payload_kind == PayloadKind::EvaluatedResult
        )
    }

    /// JSON Lines, one record per message.
    pub fn export(&self) -> String {
        self.messages
            .iter()
            .map(|m| serde_json::to_string(m).expect("message serializes") + "\n")
            .collect()
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.messages {
            writeln!(
                f,
                "{} {:?} {:?} [{}] {}B",
                m.index,
                m.direction,
                m.payload_kind,
                m.qubit_labels.join(","),
                m.classical_bytes
            )?;
        }
        Ok(())
    }
}
