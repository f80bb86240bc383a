//! Circuit-level behaviour against 2×2 and 8×8 matrix oracles.

use s3_double::circuit::{run_circuit, Circuit, Step};
use s3_double::gates::distance_up_to_phase;
use s3_double::linalg::{C64, ONE, ZERO};
use s3_double::register::{Caps, Mode};

fn exact(c: &Circuit) -> Vec<C64> {
    let run = run_circuit(c, Mode::Exact, 0, Caps::default()).unwrap();
    run.amplitudes.unwrap().iter().map(|[re, im]| C64::new(*re, *im)).collect()
}

/// Restriction of a qutrit-register vector to the qubit subspace.
fn qubits(v: &[C64], n: usize) -> Vec<C64> {
    (0..1usize << n)
        .map(|b| {
            let j: usize = (0..n).map(|k| ((b >> k) & 1) * 3usize.pow(k as u32)).sum();
            v[j]
        })
        .collect()
}

fn matmul(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut m = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

#[test]
fn empty_circuit_leaves_input_unchanged() {
    let c = Circuit::parse(r#"{"qutrits": 2, "input": ["+", "xi"], "gates": []}"#).unwrap();
    let reg = c.initial_register().unwrap();
    let before = reg.amplitudes(reg.ids()).unwrap();
    assert_eq!(exact(&c), before);
}

#[test]
fn hssh_matches_matrix_oracle() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let h = [[C64::new(r, 0.0), C64::new(r, 0.0)], [C64::new(r, 0.0), C64::new(-r, 0.0)]];
    let s = [[ONE, ZERO], [ZERO, C64::new(0.0, 1.0)]];
    let m = matmul(&h, &matmul(&s, &matmul(&s, &h)));
    // HSSH = HZH = X: |0> goes to |1>, not to |0>
    let oracle = [m[0][0], m[1][0]];
    assert!(oracle[0].norm() < 1e-12 && (oracle[1].norm() - 1.0).abs() < 1e-12);
    let steps = ["H", "S", "S", "H"].map(|g| Step::new(g, &[0])).to_vec();
    let out = qubits(&exact(&Circuit::from_steps(steps)), 1);
    assert!(distance_up_to_phase(&out, &oracle) < 1e-9, "{out:?}");
}

#[test]
fn ccz_on_11x_acts_as_z_on_x() {
    for (input, expect) in [("0", [ONE, ZERO]), ("1", [ZERO, -ONE]), ("+", [ONE, -ONE]), ("-", [ONE, ONE])] {
        let text = format!(r#"{{"input": ["1", "1", "{input}"], "gates": [{{"gate": "CCZ", "targets": [0, 1, 2]}}]}}"#);
        let out = qubits(&exact(&Circuit::parse(&text).unwrap()), 3);
        let norm = (expect[0].norm_sqr() + expect[1].norm_sqr()).sqrt();
        let mut oracle = vec![ZERO; 8];
        oracle[0b011] = expect[0] / norm;
        oracle[0b111] = expect[1] / norm;
        // exact entrywise: CCZ has no global-phase freedom
        let dev = out.iter().zip(&oracle).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(dev < 1e-9, "input {input}: {out:?}");
    }
}

#[test]
fn ccz_leaves_other_controls_alone() {
    let text = r#"{"input": ["1", "0", "+"], "gates": [{"gate": "CCZ", "targets": [0, 1, 2]}]}"#;
    let out = qubits(&exact(&Circuit::parse(text).unwrap()), 3);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((out[0b001] - C64::new(r, 0.0)).norm() < 1e-9);
    assert!((out[0b101] - C64::new(r, 0.0)).norm() < 1e-9);
}

#[test]
fn sampled_runs_are_reproducible() {
    let steps = vec![Step::new("H", &[0]), Step::new("CZ", &[0, 1]), Step::new("measure", &[1])];
    let c = Circuit::from_steps(steps);
    let a = run_circuit(&c, Mode::Sampled, 99, Caps::default()).unwrap();
    let b = run_circuit(&c, Mode::Sampled, 99, Caps::default()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn exact_branch_probabilities_multiply() {
    let c = Circuit::from_steps(vec![Step::new("H", &[0]), Step::new("S", &[0])]);
    let run = run_circuit(&c, Mode::Exact, 0, Caps::default()).unwrap();
    let product: f64 = run.steps.iter().map(|s| s.result.probability).product();
    assert!((product - run.probability).abs() < 1e-12);
}
