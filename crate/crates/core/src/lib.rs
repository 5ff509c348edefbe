//! Exact simulation of Clifford circuits on affine signatures
//! `λ · χ_{Ax=b} · i^{Q(x)}`.
//!
//! * [`f2`]: bit-packed vectors and matrices over GF(2).
//! * [`signature`]: the canonical signature type and its closure operations.
//! * [`canonical`]: nonsingular normal form and exact unitarity verdicts.
//! * [`pauli`]: Pauli operators and Clifford tableaux by exact conjugation.
//! * [`circuit`]: circuit IR, text format, lowering, and exact queries.
//! * [`oracle`]: brute-force dense references and seeded generators.
//! * [`cli`]: the `affsig` command-line front end.

pub mod canonical;
pub mod circuit;
pub mod cli;
pub mod f2;
pub mod oracle;
pub mod pauli;
pub mod selftest;
pub mod signature;
