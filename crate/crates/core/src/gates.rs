//! Qubit gate set over flux-pair qutrits.
//!
//! The pull-through gate U is the only coherent two-qutrit primitive; every
//! other gate is built from U, fresh ancilla pairs and measurements. Qubits
//! live in span{|0⟩, |1⟩} of a qutrit; |2⟩ appears only inside gates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};
use crate::measure::{compare_computational, compare_dual, measure_computational, measure_x, Readout};
use crate::register::{decode, dual, encode, ket, Ctx, Mode, Register, SlotId};
use crate::ypool::YPool;

/// One evaluated outcome branch of a measured gate.
#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub outcome: String,
    pub probability: f64,
    /// Distance from the followed branch after correction, up to global phase.
    pub deviation: f64,
}

/// Bookkeeping for one gate application.
#[derive(Clone, Debug, Serialize)]
pub struct GateResult {
    pub applied: String,
    pub repetitions: usize,
    pub corrected: bool,
    /// Probability that the protocol fails within its cap or misassigns a
    /// measurement outcome.
    pub residual_error: f64,
    /// Probability of the branch that was followed.
    pub probability: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<Branch>,
}

impl GateResult {
    pub fn deterministic(name: impl Into<String>) -> Self {
        GateResult {
            applied: name.into(),
            repetitions: 1,
            corrected: false,
            residual_error: 0.0,
            probability: 1.0,
            branches: Vec::new(),
        }
    }

    /// Folds a sub-protocol into this result.
    fn absorb(&mut self, other: &GateResult) {
        self.repetitions += other.repetitions.saturating_sub(1);
        self.corrected |= other.corrected;
        self.residual_error = 1.0 - (1.0 - self.residual_error) * (1.0 - other.residual_error);
        self.probability *= other.probability;
    }
}

fn distinct(ids: &[SlotId]) -> Result<()> {
    for (k, a) in ids.iter().enumerate() {
        if ids[k + 1..].contains(a) {
            return Err(Error::InvalidArgument(format!("qutrit {a} used twice in one gate")));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Deterministic gates
// ---------------------------------------------------------------------------

/// Pull-through gate |a, b⟩ ↦ |a, −a−b⟩: one flux of pair i winds around
/// pair j, which conjugates pair j's flux by w_a.
pub fn u(reg: &mut Register, i: SlotId, j: SlotId) -> Result<GateResult> {
    distinct(&[i, j])?;
    reg.apply_monomial(&[i, j], |d| {
        let wa = encode(d[0]);
        let wb = encode(d[1]);
        let b = decode(wa * wb * wa.inv()).expect("conjugation preserves the C2 class");
        (vec![d[0], b], ONE)
    })?;
    Ok(GateResult::deterministic("U"))
}

/// |a, b⟩ ↦ |a, b+a⟩ using a |0⟩ ancilla: U_{ij} then U_{anc,j}.
pub fn u_plus(reg: &mut Register, _ctx: &mut Ctx, i: SlotId, j: SlotId) -> Result<GateResult> {
    distinct(&[i, j])?;
    let anc = reg.add_slot(ket(0));
    u(reg, i, j)?;
    u(reg, anc, j)?;
    reg.remove_slot(anc, ket(0))?;
    Ok(GateResult::deterministic("U+"))
}

/// |a, b⟩ ↦ |a, b−a⟩ using a |0⟩ ancilla: U_{i,anc}, U+_{anc,j}, U_{i,anc}.
pub fn u_minus(reg: &mut Register, ctx: &mut Ctx, i: SlotId, j: SlotId) -> Result<GateResult> {
    distinct(&[i, j])?;
    let anc = reg.add_slot(ket(0));
    u(reg, i, anc)?;
    u_plus(reg, ctx, anc, j)?;
    u(reg, i, anc)?;
    reg.remove_slot(anc, ket(0))?;
    Ok(GateResult::deterministic("U-"))
}

/// Qutrit clock gate |a⟩ ↦ ω^a |a⟩: U− onto a |1~⟩ ancilla, which is an
/// eigenstate of the shift with eigenvalue ω^a.
pub fn qutrit_z(reg: &mut Register, ctx: &mut Ctx, i: SlotId) -> Result<GateResult> {
    let anc = reg.add_slot(dual(1));
    u_minus(reg, ctx, i, anc)?;
    reg.remove_slot(anc, dual(1))?;
    Ok(GateResult::deterministic("Z"))
}

/// Qubit X via two ancillas |0⟩, |1⟩ that end in |2⟩, |1⟩.
pub fn qubit_x(reg: &mut Register, ctx: &mut Ctx, i: SlotId) -> Result<GateResult> {
    reg.check_qubit(i)?;
    let a0 = reg.add_slot(ket(0));
    let a1 = reg.add_slot(ket(1));
    u_plus(reg, ctx, i, a0)?;
    u_plus(reg, ctx, a1, a0)?;
    u_plus(reg, ctx, a0, i)?;
    u_plus(reg, ctx, i, a0)?;
    reg.remove_slot(a0, ket(2))?;
    reg.remove_slot(a1, ket(1))?;
    Ok(GateResult::deterministic("X"))
}

// ---------------------------------------------------------------------------
// Preparations
// ---------------------------------------------------------------------------

/// |+⟩ from |0~⟩: compare with |2⟩ until the answer is no.
pub fn prepare_plus(reg: &mut Register, ctx: &mut Ctx) -> Result<(SlotId, GateResult)> {
    let cap = ctx.caps.prepare;
    for attempt in 1..=cap {
        let s = reg.add_slot(dual(0));
        let c = compare_computational(reg, ctx, s, 2, false)?;
        if !c.yes {
            return Ok((
                s,
                GateResult {
                    applied: "prepare_plus".into(),
                    repetitions: attempt,
                    corrected: false,
                    residual_error: (1.0f64 / 3.0).powi(cap as i32),
                    probability: c.p,
                    branches: Vec::new(),
                },
            ));
        }
        reg.remove_slot(s, ket(2))?;
    }
    Err(Error::CapExhausted {
        protocol: "prepare_plus".into(),
        cap,
        residual: (1.0f64 / 3.0).powi(cap as i32),
    })
}

/// Magic state ξ = (|0⟩−|1⟩+|2⟩)/√3: Z ⊗ Z² on |+⟩|+⟩, U+ from the first
/// onto the second, then a |0~⟩ comparison on the first (success 1/4).
pub fn prepare_xi(reg: &mut Register, ctx: &mut Ctx) -> Result<(SlotId, GateResult)> {
    let cap = ctx.caps.prepare;
    let mut total = GateResult {
        applied: "prepare_xi".into(),
        repetitions: 0,
        corrected: false,
        residual_error: 0.75f64.powi(cap as i32),
        probability: 1.0,
        branches: Vec::new(),
    };
    for attempt in 1..=cap {
        let (a, _) = prepare_plus(reg, ctx)?;
        let (b, _) = prepare_plus(reg, ctx)?;
        qutrit_z(reg, ctx, a)?;
        qutrit_z(reg, ctx, b)?;
        qutrit_z(reg, ctx, b)?;
        u_plus(reg, ctx, a, b)?;
        let c = compare_dual(reg, ctx, a, 0, true)?;
        if c.yes {
            reg.remove_slot(a, dual(0))?;
            total.repetitions = attempt;
            total.probability = c.p;
            return Ok((b, total));
        }
        reg.discard_slots(&[a, b])?;
    }
    Err(Error::CapExhausted {
        protocol: "prepare_xi".into(),
        cap,
        residual: total.residual_error,
    })
}

// ---------------------------------------------------------------------------
// Sign flips
// ---------------------------------------------------------------------------

/// Success of the parity rule: the target outcome seen an odd number of
/// times, the other two an even number of times.
pub fn sign_flip_succeeded(counts: [usize; 3], target: usize) -> bool {
    (0..3).all(|m| counts[m] % 2 == usize::from(m == target))
}

/// Probability that the sign-flip loop succeeds within `n` rounds, from the
/// Markov chain on outcome parities (each outcome has probability 1/3).
pub fn sign_flip_success_probability(n: usize) -> f64 {
    // parity vectors as 3-bit masks; target bit 0 by symmetry
    let mut dist = [0.0f64; 8];
    dist[0] = 1.0;
    let mut success = 0.0;
    for _ in 0..n {
        let mut next = [0.0f64; 8];
        for (mask, p) in dist.iter().enumerate() {
            for m in 0..3 {
                next[mask ^ (1 << m)] += p / 3.0;
            }
        }
        success += next[1];
        next[1] = 0.0;
        dist = next;
    }
    success
}

/// Closed form 1 − (2/3)(7/9)^((N−1)/2) for odd N.
pub fn sign_flip_closed_form(n: usize) -> f64 {
    1.0 - (2.0 / 3.0) * (7.0f64 / 9.0).powi(((n - 1) / 2) as i32)
}

/// σ^z_(which): flips the sign of the |which⟩ amplitude. Each round pulls
/// the qutrit through a fresh ξ with U+ and reads ξ's pair; outcome m flips
/// the sign of |m+2⟩. Repeats until the parity rule holds.
pub fn sign_flip(reg: &mut Register, ctx: &mut Ctx, i: SlotId, which: usize) -> Result<GateResult> {
    if which > 2 {
        return Err(Error::InvalidArgument(format!("no basis state {which}")));
    }
    let cap = ctx.caps.sign_flip;
    let target = (which + 1) % 3;
    let residual = 1.0 - sign_flip_success_probability(cap);
    let mut counts = [0usize; 3];
    let mut probability = 1.0;
    for rep in 1..=cap {
        let (x, _) = prepare_xi(reg, ctx)?;
        u_plus(reg, ctx, i, x)?;
        let (r, p) = measure_computational(reg, ctx, x, Some(target))?;
        probability *= p;
        let m = match r {
            Readout::Value(m) => m,
            Readout::Inconclusive => {
                return Err(Error::CapExhausted {
                    protocol: "measure_computational".into(),
                    cap: ctx.caps.measure,
                    residual: crate::measure::inconclusive_probability(0, ctx.caps.measure),
                })
            }
        };
        reg.remove_slot(x, ket(m))?;
        counts[m] += 1;
        if sign_flip_succeeded(counts, target) {
            return Ok(GateResult {
                applied: format!("SF{which}"),
                repetitions: rep,
                corrected: rep > 1,
                residual_error: residual,
                probability,
                branches: Vec::new(),
            });
        }
    }
    Err(Error::CapExhausted {
        protocol: "sign_flip".into(),
        cap,
        residual,
    })
}

// ---------------------------------------------------------------------------
// Controlled phases
// ---------------------------------------------------------------------------

/// CZ: accumulate x+y in a |0⟩ ancilla, flip the sign of its |2⟩, uncompute.
pub fn cz(reg: &mut Register, ctx: &mut Ctx, i: SlotId, j: SlotId) -> Result<GateResult> {
    distinct(&[i, j])?;
    reg.check_qubit(i)?;
    reg.check_qubit(j)?;
    let anc = reg.add_slot(ket(0));
    u_plus(reg, ctx, i, anc)?;
    u_plus(reg, ctx, j, anc)?;
    let sf = sign_flip(reg, ctx, anc, 2)?;
    u_minus(reg, ctx, j, anc)?;
    u_minus(reg, ctx, i, anc)?;
    reg.remove_slot(anc, ket(0))?;
    let mut r = GateResult::deterministic("CZ");
    r.absorb(&sf);
    Ok(r)
}

/// CCZ: σ^z_(1) on each input and on the ancilla holding x+y+z.
pub fn ccz(reg: &mut Register, ctx: &mut Ctx, i: SlotId, j: SlotId, k: SlotId) -> Result<GateResult> {
    distinct(&[i, j, k])?;
    for q in [i, j, k] {
        reg.check_qubit(q)?;
    }
    let mut r = GateResult::deterministic("CCZ");
    for q in [i, j, k] {
        let sf = sign_flip(reg, ctx, q, 1)?;
        r.absorb(&sf);
    }
    let anc = reg.add_slot(ket(0));
    for q in [i, j, k] {
        u_plus(reg, ctx, q, anc)?;
    }
    let sf = sign_flip(reg, ctx, anc, 1)?;
    r.absorb(&sf);
    for q in [i, j, k] {
        u_minus(reg, ctx, q, anc)?;
    }
    reg.remove_slot(anc, ket(0))?;
    Ok(r)
}

// ---------------------------------------------------------------------------
// Measured gates
// ---------------------------------------------------------------------------

/// Largest entry of |a·phase − b| after aligning global phase.
pub fn distance_up_to_phase(a: &[C64], b: &[C64]) -> f64 {
    let na: f64 = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let ov: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x / na * phase - y / nb).norm())
        .fold(0.0, f64::max)
}

/// Runs a measured gate. In exact mode both outcome branches are evaluated;
/// the register keeps the + branch and the − branch is reported with its
/// distance from it.
fn measured_gate(
    reg: &mut Register,
    ctx: &mut Ctx,
    name: &str,
    run: impl Fn(&mut Register, &mut Ctx, bool) -> Result<(GateResult, bool, f64)>,
) -> Result<GateResult> {
    match ctx.mode {
        Mode::Sampled => Ok(run(reg, ctx, true)?.0),
        Mode::Exact => {
            let mut reg_m = reg.clone();
            let mut ctx_m = ctx.clone();
            let (mut res, plus, p_plus) = run(reg, ctx, true)?;
            let (_, minus_seen, p_minus) = run(&mut reg_m, &mut ctx_m, false)?;
            let order: Vec<SlotId> = reg.ids().to_vec();
            let dev = if reg_m.ids().len() == order.len() && order.iter().all(|&s| reg_m.contains(s)) {
                distance_up_to_phase(&reg.amplitudes(&order)?, &reg_m.amplitudes(&order)?)
            } else {
                f64::INFINITY
            };
            let label = |p: bool| if p { "+" } else { "-" }.to_string();
            res.applied = name.into();
            res.branches = vec![
                Branch {
                    outcome: label(plus),
                    probability: p_plus,
                    deviation: 0.0,
                },
                Branch {
                    outcome: label(minus_seen),
                    probability: p_minus,
                    deviation: dev,
                },
            ];
            Ok(res)
        }
    }
}

/// Hadamard: CZ with a fresh |+⟩, X-measure the input, correct the |+⟩
/// carrier with X on outcome −. The carrier takes over the input's id.
pub fn h(reg: &mut Register, ctx: &mut Ctx, i: SlotId) -> Result<GateResult> {
    reg.check_qubit(i)?;
    measured_gate(reg, ctx, "H", |reg, ctx, prefer_plus| {
        let (p, prep) = prepare_plus(reg, ctx)?;
        let czr = cz(reg, ctx, i, p)?;
        let xm = measure_x(reg, ctx, i, prefer_plus)?;
        let mut r = GateResult::deterministic("H");
        r.absorb(&prep);
        r.absorb(&czr);
        r.residual_error = 1.0 - (1.0 - r.residual_error) * (1.0 - 9f64.powi(-(ctx.caps.x_rounds as i32)));
        if !xm.plus {
            qubit_x(reg, ctx, p)?;
            r.corrected = true;
        }
        reg.relabel(p, i)?;
        r.probability = xm.p;
        Ok((r, xm.plus, xm.p))
    })
}

/// Phase gate up to global phase: CZ with a |−Y⟩ from the Y pool, X-measure
/// the ancilla, correct with Z on outcome −.
pub fn s(reg: &mut Register, ctx: &mut Ctx, i: SlotId) -> Result<GateResult> {
    reg.check_qubit(i)?;
    measured_gate(reg, ctx, "S", |reg, ctx, prefer_plus| {
        if ctx.y_pool.is_none() {
            let pool = YPool::for_ctx(ctx);
            ctx.y_pool = Some(pool);
        }
        let mut pool = ctx.y_pool.take().expect("just created");
        let minted = pool.minus_y(ctx);
        ctx.y_pool = Some(pool);
        let (q, attempts) = minted?;
        let y = reg.add_slot([q[0], q[1], ZERO]);
        let czr = cz(reg, ctx, i, y)?;
        let xm = measure_x(reg, ctx, y, prefer_plus)?;
        let mut r = GateResult::deterministic("S");
        r.repetitions = attempts;
        r.absorb(&czr);
        r.residual_error = 1.0 - (1.0 - r.residual_error) * (1.0 - 9f64.powi(-(ctx.caps.x_rounds as i32)));
        if !xm.plus {
            let z = sign_flip(reg, ctx, i, 1)?;
            r.absorb(&z);
            r.corrected = true;
        }
        r.probability = xm.p;
        Ok((r, xm.plus, xm.p))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_truth_table() {
        for a in 0..3 {
            for b in 0..3 {
                let mut reg = Register::product(&[ket(a), ket(b)]);
                u(&mut reg, 0, 1).unwrap();
                let v = reg.amplitudes(&[0, 1]).unwrap();
                let expect = a + 3 * ((6 - a - b) % 3);
                assert_eq!(v[expect], ONE, "U|{a},{b}⟩");
            }
        }
    }

    #[test]
    fn sign_flip_dp_matches_closed_form_on_odd_n() {
        for n in (1..60).step_by(2) {
            assert!((sign_flip_success_probability(n) - sign_flip_closed_form(n)).abs() < 1e-12, "N={n}");
        }
        assert!(sign_flip_closed_form(35) >= 0.99);
    }

    #[test]
    fn parity_rule() {
        assert!(sign_flip_succeeded([1, 0, 0], 0));
        assert!(sign_flip_succeeded([3, 2, 0], 0));
        assert!(!sign_flip_succeeded([1, 1, 1], 0));
        assert!(!sign_flip_succeeded([0, 1, 1], 0));
    }
}
