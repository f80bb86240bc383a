//! Circuit files and their execution on a qutrit register.
//!
//! A circuit file is JSON: either a bare list of steps
//! `[{"gate": "H", "targets": [0]}, ...]`, which starts from |0⟩ on every
//! referenced qutrit, or an object
//! `{"qutrits": 2, "input": ["+", "0"], "gates": [...]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::anyon::ProbeRecord;
use crate::error::{Error, Result};
use crate::gates::{self, GateResult};
use crate::measure::{measure_computational, measure_x, Readout};
use crate::register::{named_state, Caps, Ctx, Mode, Register, SlotId};

/// One gate application.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub gate: String,
    #[serde(default)]
    pub targets: Vec<SlotId>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
}

impl Step {
    pub fn new(gate: &str, targets: &[SlotId]) -> Self {
        Step {
            gate: gate.into(),
            targets: targets.to_vec(),
            params: Value::Null,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    #[serde(default)]
    pub qutrits: Option<usize>,
    /// Named single-qutrit input states; missing entries default to |0⟩.
    #[serde(default)]
    pub input: Vec<String>,
    pub gates: Vec<Step>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CircuitFile {
    Steps(Vec<Step>),
    Full(Circuit),
}

impl Circuit {
    pub fn from_steps(gates: Vec<Step>) -> Self {
        Circuit {
            qutrits: None,
            input: Vec::new(),
            gates,
        }
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let file: CircuitFile =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), format!("circuit file: {e}")))?;
        Ok(match file {
            CircuitFile::Steps(gates) => Circuit::from_steps(gates),
            CircuitFile::Full(c) => c,
        })
    }

    /// Number of qutrits: the declared count, else enough for every input
    /// and target.
    pub fn width(&self) -> usize {
        let from_targets = self
            .gates
            .iter()
            .flat_map(|s| s.targets.iter())
            .map(|&t| t + 1)
            .max()
            .unwrap_or(0);
        self.qutrits.unwrap_or(from_targets.max(self.input.len()))
    }

    pub fn initial_register(&self) -> Result<Register> {
        let n = self.width();
        if self.input.len() > n {
            return Err(Error::InvalidArgument(format!(
                "{} input states for {n} qutrits",
                self.input.len()
            )));
        }
        let states = (0..n)
            .map(|k| named_state(self.input.get(k).map_or("0", String::as_str)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Register::product(&states))
    }
}

/// Outcome of one step of a run.
#[derive(Clone, Debug, Serialize)]
pub struct StepResult {
    pub step: usize,
    pub gate: String,
    pub targets: Vec<SlotId>,
    pub result: GateResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CircuitRun {
    pub mode: Mode,
    pub seed: u64,
    pub steps: Vec<StepResult>,
    pub records: Vec<ProbeRecord>,
    /// Remaining qutrit ids; digit k of an amplitude index belongs to
    /// `slots[k]`, least significant first.
    pub slots: Vec<SlotId>,
    /// Final amplitudes as [re, im] pairs, exact mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    /// Probability of the followed trajectory.
    pub probability: f64,
}

fn arity(step: &Step, n: usize) -> Result<()> {
    if step.targets.len() != n {
        return Err(Error::InvalidArgument(format!(
            "gate {} takes {n} targets, got {}",
            step.gate,
            step.targets.len()
        )));
    }
    Ok(())
}

fn param_usize(step: &Step, key: &str) -> Result<usize> {
    let v = match &step.params {
        Value::Object(m) => m.get(key).cloned().unwrap_or(Value::Null),
        Value::Number(_) => step.params.clone(),
        _ => Value::Null,
    };
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::InvalidArgument(format!("gate {} needs integer parameter {key}", step.gate)))
}

/// Applies one step and returns its result and measurement outcome.
pub fn apply_step(reg: &mut Register, ctx: &mut Ctx, step: &Step) -> Result<(GateResult, Option<String>)> {
    let t = &step.targets;
    let name = step.gate.as_str();
    let plain = |r: Result<GateResult>| r.map(|g| (g, None));
    match name {
        "U" => {
            arity(step, 2)?;
            plain(gates::u(reg, t[0], t[1]))
        }
        "U+" => {
            arity(step, 2)?;
            plain(gates::u_plus(reg, ctx, t[0], t[1]))
        }
        "U-" => {
            arity(step, 2)?;
            plain(gates::u_minus(reg, ctx, t[0], t[1]))
        }
        "Z" => {
            arity(step, 1)?;
            plain(gates::qutrit_z(reg, ctx, t[0]))
        }
        "X" => {
            arity(step, 1)?;
            plain(gates::qubit_x(reg, ctx, t[0]))
        }
        "SF" => {
            arity(step, 1)?;
            let which = param_usize(step, "which")?;
            plain(gates::sign_flip(reg, ctx, t[0], which))
        }
        "CZ" => {
            arity(step, 2)?;
            plain(gates::cz(reg, ctx, t[0], t[1]))
        }
        "CCZ" => {
            arity(step, 3)?;
            plain(gates::ccz(reg, ctx, t[0], t[1], t[2]))
        }
        "H" => {
            arity(step, 1)?;
            plain(gates::h(reg, ctx, t[0]))
        }
        "S" => {
            arity(step, 1)?;
            plain(gates::s(reg, ctx, t[0]))
        }
        "measure" => {
            arity(step, 1)?;
            let (r, p) = measure_computational(reg, ctx, t[0], None)?;
            let mut g = GateResult::deterministic("measure");
            g.probability = p;
            let outcome = match r {
                Readout::Value(a) => a.to_string(),
                Readout::Inconclusive => {
                    g.residual_error = 1.0;
                    "inconclusive".into()
                }
            };
            Ok((g, Some(outcome)))
        }
        "measure_x" => {
            arity(step, 1)?;
            let m = measure_x(reg, ctx, t[0], true)?;
            let mut g = GateResult::deterministic("measure_x");
            g.probability = m.p;
            g.repetitions = m.rounds;
            g.residual_error = m.misassignment;
            Ok((g, Some(if m.plus { "+" } else { "-" }.into())))
        }
        other => Err(Error::InvalidArgument(format!("unknown gate {other}"))),
    }
}

/// Runs a circuit. Exact mode follows the designated branch of every
/// measurement and returns the final amplitudes; sampled mode draws one
/// trajectory from `seed`.
pub fn run_circuit(circuit: &Circuit, mode: Mode, seed: u64, caps: Caps) -> Result<CircuitRun> {
    caps.validate()?;
    let mut reg = circuit.initial_register()?;
    let mut ctx = Ctx::new(mode, seed, caps);
    let mut steps = Vec::with_capacity(circuit.gates.len());
    let mut probability = 1.0;
    for (k, step) in circuit.gates.iter().enumerate() {
        let (result, outcome) = apply_step(&mut reg, &mut ctx, step).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::InvalidArgument(format!("step {k}: {msg}")),
            other => other,
        })?;
        probability *= result.probability;
        steps.push(StepResult {
            step: k,
            gate: step.gate.clone(),
            targets: step.targets.clone(),
            result,
            outcome,
        });
    }
    let slots = reg.ids().to_vec();
    let amplitudes = match mode {
        Mode::Exact => Some(reg.amplitudes(&slots)?.iter().map(|c| [c.re, c.im]).collect()),
        Mode::Sampled => None,
    };
    Ok(CircuitRun {
        mode,
        seed,
        steps,
        records: ctx.records,
        slots,
        amplitudes,
        probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let a = Circuit::parse(r#"[{"gate": "H", "targets": [0]}]"#).unwrap();
        assert_eq!(a.width(), 1);
        let b = Circuit::parse(r#"{"qutrits": 2, "input": ["+"], "gates": [{"gate": "SF", "targets": [1], "params": {"which": 2}}]}"#)
            .unwrap();
        assert_eq!(b.width(), 2);
        assert_eq!(param_usize(&b.gates[0], "which").unwrap(), 2);
    }

    #[test]
    fn parse_error_has_line() {
        let e = Circuit::parse("[\n{\"gate\": }\n]").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
    }

    #[test]
    fn unknown_gate_is_rejected() {
        let c = Circuit::from_steps(vec![Step::new("T", &[0])]);
        assert!(matches!(
            run_circuit(&c, Mode::Exact, 0, Caps::default()),
            Err(Error::InvalidArgument(_))
        ));
    }
}
