use super::{Circuit, Gate};
use crate::signature::AffineSignature;

/// The unembedded signature of a gate: arity 2 for single-qubit gates,
/// arity 4 for two-qubit gates. Macros are composed from their expansion.
pub fn local_signature(g: &Gate) -> AffineSignature {
    match g {
        Gate::H(_) => AffineSignature::hadamard(),
        Gate::P(_) => AffineSignature::phase_gate(),
        Gate::Cnot(..) => AffineSignature::cnot(),
        _ => {
            // Re-target the expansion onto local qubits 0 (and 1).
            let qs = g.qubits();
            let local = |q: usize| qs.iter().position(|&x| x == q).expect("operand of g");
            let m = qs.len();
            let mut acc = AffineSignature::identity(m);
            for h in g.expand() {
                let lq: Vec<usize> = h.qubits().into_iter().map(local).collect();
                let step = embed(&local_signature(&h), &lq, m);
                acc = step.compose(&acc).expect("equal arities");
            }
            acc
        }
    }
}

/// Embeds an arity-`2m` local signature acting on `qubits` into `n` qubits.
fn embed(local: &AffineSignature, qubits: &[usize], n: usize) -> AffineSignature {
    let m = qubits.len();
    assert_eq!(local.arity(), 2 * m);
    let others: Vec<usize> = (0..n).filter(|q| !qubits.contains(q)).collect();
    let k = n - m;
    let mut sigma = vec![0; 2 * n];
    for a in 0..m {
        sigma[a] = qubits[a];
        sigma[m + a] = 2 * n - 1 - qubits[m - 1 - a];
    }
    for b in 0..k {
        sigma[2 * m + b] = others[b];
        sigma[2 * m + k + b] = 2 * n - 1 - others[k - 1 - b];
    }
    local.tensor(&AffineSignature::identity(k)).permute(&sigma)
}

/// The arity-`2n` signature of a single gate placed in an `n`-qubit register.
pub fn gate_signature(g: &Gate, n: usize) -> AffineSignature {
    embed(&local_signature(g), &g.qubits(), n)
}

/// The reference lowering: one full-width composition per gate.
pub fn circuit_signature_by_compose(c: &Circuit) -> AffineSignature {
    let n = c.num_qubits();
    c.gates()
        .iter()
        .fold(AffineSignature::identity(n), |acc, g| {
            gate_signature(g, n).compose(&acc).expect("equal arities")
        })
}

/// Tracks which variable currently carries each qubit's wire while gates are
/// contracted onto the running signature, so no per-gate relabeling is needed.
struct Builder {
    sig: AffineSignature,
    wire: Vec<usize>,
    input: Vec<usize>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            sig: AffineSignature::identity(n),
            wire: (0..n).collect(),
            input: (0..n).map(|q| 2 * n - 1 - q).collect(),
        }
    }

    fn shift_after_removal(&mut self, removed: usize, outs: &mut [usize]) {
        for v in self
            .wire
            .iter_mut()
            .chain(self.input.iter_mut())
            .chain(outs.iter_mut())
        {
            if *v > removed {
                *v -= 1;
            }
        }
    }

    fn apply(&mut self, local: &AffineSignature, qubits: &[usize]) {
        let m = qubits.len();
        let base = self.sig.arity();
        self.sig.tensor_in_place(local);
        // Local input variables sit above everything else, highest for a = 0.
        for (a, &q) in qubits.iter().enumerate() {
            self.sig
                .identify_in_place(base + 2 * m - 1 - a, self.wire[q]);
        }
        let mut outs: Vec<usize> = (base..base + m).collect();
        let mut old: Vec<usize> = qubits.iter().map(|&q| self.wire[q]).collect();
        old.sort_unstable_by(|a, b| b.cmp(a));
        for v in old {
            self.sig.marginalize_in_place(v);
            self.shift_after_removal(v, &mut outs);
        }
        for (a, &q) in qubits.iter().enumerate() {
            self.wire[q] = outs[a];
        }
    }

    fn finish(self) -> AffineSignature {
        let n = self.wire.len();
        let mut sigma = vec![0; 2 * n];
        for q in 0..n {
            sigma[self.wire[q]] = q;
            sigma[self.input[q]] = 2 * n - 1 - q;
        }
        self.sig.permute(&sigma)
    }
}

/// The arity-`2n` signature of the whole circuit, with macros expanded into
/// H/P/CNOT and contracted one generator at a time.
pub fn circuit_signature(c: &Circuit) -> AffineSignature {
    let mut b = Builder::new(c.num_qubits());
    let (h, p, cx) = (
        AffineSignature::hadamard(),
        AffineSignature::phase_gate(),
        AffineSignature::cnot(),
    );
    for g in c.gates() {
        for step in g.expand() {
            let local = match step {
                Gate::H(_) => &h,
                Gate::P(_) => &p,
                _ => &cx,
            };
            b.apply(local, &step.qubits());
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dense_circuit, dense_gate, random_clifford_circuit, LITERAL_TOL};

    #[test]
    fn embedded_generators_match_literal_matrices() {
        for n in 1..=3 {
            for q in 0..n {
                for g in [Gate::H(q), Gate::P(q)] {
                    let m = gate_signature(&g, n).signature_matrix().unwrap();
                    assert!(
                        m.max_abs_diff(&dense_gate(&g, n).unwrap()) < LITERAL_TOL,
                        "{g} on {n}"
                    );
                }
                for t in (0..n).filter(|&t| t != q) {
                    let g = Gate::Cnot(q, t);
                    let m = gate_signature(&g, n).signature_matrix().unwrap();
                    assert!(
                        m.max_abs_diff(&dense_gate(&g, n).unwrap()) < LITERAL_TOL,
                        "{g} on {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn macros_match_up_to_global_phase() {
        for g in [Gate::X(0), Gate::Z(0), Gate::Cz(0, 1), Gate::Cz(1, 0)] {
            let m = gate_signature(&g, 2).signature_matrix().unwrap();
            assert!(
                m.max_abs_diff(&dense_gate(&g, 2).unwrap()) < LITERAL_TOL,
                "{g}"
            );
        }
        // Y is realized as iY.
        let m = gate_signature(&Gate::Y(1), 2).signature_matrix().unwrap();
        let y = dense_gate(&Gate::Y(1), 2)
            .unwrap()
            .scale(num_complex::Complex64::i());
        assert!(m.max_abs_diff(&y) < LITERAL_TOL);
    }

    #[test]
    fn fast_and_reference_lowering_agree() {
        for seed in 0..40 {
            let n = 1 + (seed as usize % 4);
            let c = random_clifford_circuit(n, 15, seed);
            let fast = circuit_signature(&c);
            fast.check_invariants().unwrap();
            assert_eq!(fast, circuit_signature_by_compose(&c), "seed {seed}");
            let d = dense_circuit(&c).unwrap();
            assert!(fast.signature_matrix().unwrap().max_abs_diff(&d) < 1e-9);
        }
    }

    #[test]
    fn empty_circuit_is_identity() {
        assert_eq!(
            circuit_signature(&Circuit::new(3)),
            AffineSignature::identity(3)
        );
    }
}
