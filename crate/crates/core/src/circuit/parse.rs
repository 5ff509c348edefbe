use std::str::FromStr;

use super::{Circuit, CircuitError, Gate};

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, t)| (line[..byte].chars().count() + 1, t))
        .collect()
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn index(line: usize, (col, tok): (usize, &str)) -> Result<usize, CircuitError> {
    tok.parse()
        .map_err(|_| syntax(line, col, format!("expected a qubit index, found {tok:?}")))
}

impl FromStr for Circuit {
    type Err = CircuitError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut circuit: Option<Circuit> = None;
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks = tokens(content);
            let Some(&(col, head)) = toks.first() else {
                continue;
            };
            let Some(c) = circuit.as_mut() else {
                if head != "qubits" {
                    return Err(syntax(ln, col, "expected `qubits <n>` before any gate"));
                }
                if toks.len() != 2 {
                    return Err(syntax(ln, col, "expected `qubits <n>`"));
                }
                let (ncol, ntok) = toks[1];
                let n = ntok
                    .parse()
                    .map_err(|_| syntax(ln, ncol, format!("invalid qubit count {ntok:?}")))?;
                circuit = Some(Circuit::new(n));
                continue;
            };
            let arity = match head {
                "h" | "p" | "x" | "y" | "z" => 1,
                "cnot" | "cz" => 2,
                "qubits" => return Err(syntax(ln, col, "duplicate `qubits` declaration")),
                other => return Err(syntax(ln, col, format!("unknown gate {other:?}"))),
            };
            if toks.len() != arity + 1 {
                let at = toks.get(arity + 1).map_or(col, |t| t.0);
                return Err(syntax(
                    ln,
                    at,
                    format!(
                        "`{head}` takes {arity} operand(s), found {}",
                        toks.len() - 1
                    ),
                ));
            }
            let a = index(ln, toks[1])?;
            let gate = match head {
                "h" => Gate::H(a),
                "p" => Gate::P(a),
                "x" => Gate::X(a),
                "y" => Gate::Y(a),
                "z" => Gate::Z(a),
                "cnot" => Gate::Cnot(a, index(ln, toks[2])?),
                _ => Gate::Cz(a, index(ln, toks[2])?),
            };
            gate.validate(c.n_qubits, ln)?;
            c.gates.push(gate);
        }
        circuit.ok_or_else(|| syntax(1, 1, "missing `qubits <n>` declaration"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_circuit() {
        let c: Circuit = "qubits 2\nh 0\ncnot 0 1\n".parse().unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(c.gates(), &[Gate::H(0), Gate::Cnot(0, 1)]);
    }

    #[test]
    fn repeated_gates() {
        let c: Circuit = "qubits 1\np 0\np 0\n".parse().unwrap();
        assert_eq!(c.gates(), &[Gate::P(0), Gate::P(0)]);
    }

    #[test]
    fn duplicate_operands_rejected() {
        let e = "qubits 1\ncnot 0 0\n".parse::<Circuit>().unwrap_err();
        assert_eq!(e, CircuitError::DuplicateOperands { line: 2, qubit: 0 });
    }

    #[test]
    fn comments_blank_lines_and_macros() {
        let text = "# a comment\n\nqubits 3  # three\n  x 2\ny 1 # trailing\nz 0\ncz 2 0\n";
        let c: Circuit = text.parse().unwrap();
        assert_eq!(
            c.gates(),
            &[Gate::X(2), Gate::Y(1), Gate::Z(0), Gate::Cz(2, 0)]
        );
    }

    #[test]
    fn out_of_range_qubit() {
        let e = "qubits 2\nh 2\n".parse::<Circuit>().unwrap_err();
        assert_eq!(
            e,
            CircuitError::QubitOutOfRange {
                line: 2,
                qubit: 2,
                n: 2
            }
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = "qubits 2\nh 0\n  foo 1\n".parse::<Circuit>().unwrap_err();
        assert!(
            matches!(
                e,
                CircuitError::Syntax {
                    line: 3,
                    column: 3,
                    ..
                }
            ),
            "{e:?}"
        );
        let e = "h 0\n".parse::<Circuit>().unwrap_err();
        assert!(matches!(
            e,
            CircuitError::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));
        let e = "qubits 2\ncnot 0 x\n".parse::<Circuit>().unwrap_err();
        assert!(
            matches!(
                e,
                CircuitError::Syntax {
                    line: 2,
                    column: 8,
                    ..
                }
            ),
            "{e:?}"
        );
        let e = "qubits 2\nh 0 1\n".parse::<Circuit>().unwrap_err();
        assert!(matches!(e, CircuitError::Syntax { line: 2, .. }));
        assert!("".parse::<Circuit>().is_err());
    }

    #[test]
    fn display_round_trip() {
        let c: Circuit = "qubits 3\nh 0\ncnot 0 2\ny 1\ncz 1 2\n".parse().unwrap();
        assert_eq!(c.to_string().parse::<Circuit>().unwrap(), c);
    }
}
