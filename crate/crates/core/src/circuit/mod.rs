//! Circuit IR, text format, lowering to affine signatures, and exact
//! amplitude / probability / sampling queries.
//!
//! Conventions: qubit 0 is the most significant bit of every basis index,
//! and gates apply left to right in time, so the circuit operator is
//! `G_last ⋯ G_first`. For the arity-`2n` circuit signature, variable `i`
//! (for `i < n`) is output qubit `i` and variable `2n-1-i` is input qubit `i`.

mod lower;
mod parse;
mod simulate;

pub use lower::{circuit_signature, circuit_signature_by_compose, gate_signature, local_signature};
pub use simulate::{
    amplitude, marginal_probability, output_state, sample_outcome, Probability, SimulationError,
};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// `line` is 0 for gates added programmatically.
    #[error("line {line}: qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { line: usize, qubit: usize, n: usize },
    #[error("line {line}: duplicate operands ({qubit} used twice)")]
    DuplicateOperands { line: usize, qubit: usize },
}

/// A gate of the H/P/CNOT generating set, or one of the X/Y/Z/CZ macros.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    P(usize),
    /// `Cnot(control, target)`.
    Cnot(usize, usize),
    X(usize),
    /// Lowered as `Z·X = iY`; only correct up to global phase.
    Y(usize),
    Z(usize),
    Cz(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::P(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![q],
            Gate::Cnot(a, b) | Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::P(_) => "p",
            Gate::Cnot(..) => "cnot",
            Gate::X(_) => "x",
            Gate::Y(_) => "y",
            Gate::Z(_) => "z",
            Gate::Cz(..) => "cz",
        }
    }

    pub fn is_generator(&self) -> bool {
        matches!(self, Gate::H(_) | Gate::P(_) | Gate::Cnot(..))
    }

    /// Rewrites macros into H/P/CNOT, in time order.
    pub fn expand(&self) -> Vec<Gate> {
        match *self {
            Gate::H(_) | Gate::P(_) | Gate::Cnot(..) => vec![*self],
            Gate::Z(q) => vec![Gate::P(q), Gate::P(q)],
            Gate::X(q) => vec![Gate::H(q), Gate::P(q), Gate::P(q), Gate::H(q)],
            Gate::Y(q) => {
                let mut g = Gate::X(q).expand();
                g.extend(Gate::Z(q).expand());
                g
            }
            Gate::Cz(c, t) => vec![Gate::H(t), Gate::Cnot(c, t), Gate::H(t)],
        }
    }

    fn validate(&self, n: usize, line: usize) -> Result<(), CircuitError> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n {
                return Err(CircuitError::QubitOutOfRange { line, qubit: q, n });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(CircuitError::DuplicateOperands { line, qubit: qs[0] });
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.n_qubits, 0)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
