//! Measurements of flux-pair qutrits: flux comparison with reference pairs,
//! charge comparison with a dual-basis probe, and the qubit dual-basis
//! measurement built from both.

use serde::Serialize;

use crate::anyon::{probe_amplitude, ProbeOutcome};
use crate::error::{Error, Result};
use crate::gates::{qutrit_z, u};
use crate::linalg::{CMat, C64, ZERO};
use crate::register::{complement, dual, encode, ket, minus, plus, projector, Ctx, Register, SlotId};

/// Outcome of a two-outcome comparison and the probability of the branch
/// that was followed.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub yes: bool,
    pub p: f64,
}

fn diag(d: [C64; 3]) -> CMat {
    CMat::from_fn(3, 3, |r, c| if r == c { d[r] } else { ZERO })
}

/// Two-outcome projective measurement {P, 1−P} on one slot. `prefer_yes`
/// selects the branch in exact mode.
fn binary(
    reg: &mut Register,
    ctx: &mut Ctx,
    q: SlotId,
    yes_op: &CMat,
    no_op: &CMat,
    prefer_yes: bool,
    probe: &str,
) -> Result<Comparison> {
    let total = reg.norm().powi(2);
    let py = reg.weight_after(q, yes_op)? / total;
    let probs = [py, (1.0 - py).max(0.0)];
    let k = ctx.choose(&probs, if prefer_yes { 0 } else { 1 });
    reg.apply_op(q, if k == 0 { yes_op } else { no_op })?;
    reg.normalize();
    let yes = k == 0;
    ctx.record(probe, if yes { "yes" } else { "no" }, probs[k]);
    Ok(Comparison { yes, p: probs[k] })
}

/// Compares slot `q` with a reference pair in |k⟩: yes projects onto |k⟩,
/// no onto its complement. Modelled as an ideal projective comparison.
pub fn compare_computational(
    reg: &mut Register,
    ctx: &mut Ctx,
    q: SlotId,
    k: usize,
    prefer_yes: bool,
) -> Result<Comparison> {
    let v = ket(k);
    binary(reg, ctx, q, &projector(&v), &complement(&v), prefer_yes, &format!("compare[{q}]=={k}"))
}

/// Charge comparison of slot `q` with the dual state |which~⟩. A probe pair
/// in |0~⟩ is pulled through q, fused to test for trivial charge, and pulled
/// through again, which projects q onto |0~⟩ or its complement and returns
/// the probe intact. Other dual states are handled by conjugating with Z.
pub fn compare_dual(
    reg: &mut Register,
    ctx: &mut Ctx,
    q: SlotId,
    which: usize,
    prefer_yes: bool,
) -> Result<Comparison> {
    if which > 2 {
        return Err(Error::InvalidArgument(format!("dual state {which}~ does not exist")));
    }
    // Z|k~⟩ = |k+1~⟩, so Z^{3-which} maps |which~⟩ to |0~⟩.
    for _ in 0..(3 - which) % 3 {
        qutrit_z(reg, ctx, q)?;
    }
    let probe = reg.add_slot(dual(0));
    u(reg, probe, q)?;
    let v = dual(0);
    let c = binary(
        reg,
        ctx,
        probe,
        &projector(&v),
        &complement(&v),
        prefer_yes,
        &format!("dual[{q}]=={which}~"),
    )?;
    u(reg, probe, q)?;
    reg.remove_slot(probe, dual(0))?;
    for _ in 0..which {
        qutrit_z(reg, ctx, q)?;
    }
    Ok(c)
}

/// Result of a computational-basis measurement.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Readout {
    Value(usize),
    /// The comparison cap ran out before two references reported [−].
    Inconclusive,
}

/// Probability that a pair in |a⟩ is left unresolved after `cap` probe
/// comparisons run round-robin over the references 0, 1, 2, skipping
/// references that already reported [−]. Every comparison with a reference
/// k ≠ a reports [−] with probability 3/4.
pub fn inconclusive_probability(a: usize, cap: usize) -> f64 {
    // state: (flagged mask, next reference) -> probability
    let mut states: Vec<((u8, usize), f64)> = vec![((0, 0), 1.0)];
    let done = |mask: u8| mask.count_ones() >= 2;
    for _ in 0..cap {
        let mut next: Vec<((u8, usize), f64)> = Vec::new();
        let mut push = |key: (u8, usize), p: f64| {
            if let Some(e) = next.iter_mut().find(|e| e.0 == key) {
                e.1 += p;
            } else {
                next.push((key, p));
            }
        };
        for ((mask, ptr), p) in states {
            if done(mask) {
                push((mask, ptr), p);
                continue;
            }
            let mut k = ptr;
            while mask & (1 << k) != 0 {
                k = (k + 1) % 3;
            }
            let after = (k + 1) % 3;
            let pm = if k == a { 0.0 } else { 0.75 };
            push((mask | (1 << k), after), p * pm);
            push((mask, after), p * (1.0 - pm));
        }
        states = next;
    }
    states.iter().filter(|((m, _), _)| !done(*m)).map(|(_, p)| p).sum()
}

/// Measures slot `q` in the computational basis with reference pairs |0⟩,
/// |1⟩, |2⟩. Each comparison groups one flux of q with one flux of a
/// reference and runs a [2]-charge probe around their total flux; the
/// probe's Kraus operator acts diagonally on q. The loop stops once two
/// references report [−].
///
/// Exact mode returns the `prefer`red value (or the likeliest) with its
/// probability including the chance of running out of comparisons.
pub fn measure_computational(
    reg: &mut Register,
    ctx: &mut Ctx,
    q: SlotId,
    prefer: Option<usize>,
) -> Result<(Readout, f64)> {
    let cap = ctx.caps.measure;
    let total = reg.norm().powi(2);
    let rho = reg.reduced(q)?;
    let weights: Vec<f64> = (0..3).map(|a| rho[(a, a)].re / total).collect();
    match ctx.mode {
        crate::register::Mode::Exact => {
            let probs: Vec<f64> = (0..3)
                .map(|a| weights[a] * (1.0 - inconclusive_probability(a, cap)))
                .collect();
            let best = (0..3).max_by(|&a, &b| probs[a].total_cmp(&probs[b])).expect("three");
            let a = ctx.choose(&probs, prefer.unwrap_or(best));
            reg.apply_op(q, &projector(&ket(a)))?;
            reg.normalize();
            ctx.record(format!("measure[{q}]"), a.to_string(), probs[a]);
            Ok((Readout::Value(a), probs[a]))
        }
        crate::register::Mode::Sampled => {
            let mut flagged = [false; 3];
            let mut k = 0;
            let mut p_path = 1.0;
            for _ in 0..cap {
                while flagged[k] {
                    k = (k + 1) % 3;
                }
                let kraus = |o: ProbeOutcome| diag([0, 1, 2].map(|a| probe_amplitude(o, encode(a) * encode(k))));
                let (kv, km) = (kraus(ProbeOutcome::Vacuum), kraus(ProbeOutcome::Minus));
                let n2 = reg.norm().powi(2);
                let pv = reg.weight_after(q, &kv)? / n2;
                let probs = [pv, (1.0 - pv).max(0.0)];
                let o = ctx.choose(&probs, 0);
                reg.apply_op(q, if o == 0 { &kv } else { &km })?;
                reg.normalize();
                p_path *= probs[o];
                ctx.record(
                    format!("flux[{q}]x[ref{k}]"),
                    if o == 0 { "vacuum" } else { "minus" },
                    probs[o],
                );
                if o == 1 {
                    flagged[k] = true;
                    if flagged.iter().filter(|&&f| f).count() == 2 {
                        let a = (0..3).find(|&a| !flagged[a]).expect("one reference left");
                        return Ok((Readout::Value(a), p_path));
                    }
                }
                k = (k + 1) % 3;
            }
            Ok((Readout::Inconclusive, p_path))
        }
    }
}

/// Result of a qubit dual-basis measurement.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct XMeasurement {
    /// Declared outcome: true for |+⟩.
    pub plus: bool,
    /// Probability of the declared outcome.
    pub p: f64,
    /// Rounds used.
    pub rounds: usize,
    /// Whether the first comparison already answered yes.
    pub first_step_yes: bool,
    /// Probability that a declared |−⟩ actually held |+⟩.
    pub misassignment: f64,
}

/// Destructive X-basis measurement of the qubit in slot `q`, which is
/// removed. Each round compares with |0~⟩ and then with |2⟩; any yes means
/// |+⟩. After `caps.x_rounds` rounds of no the outcome is declared |−⟩ and
/// the slot, now in span{|0⟩,|1⟩}, is discarded, which is modelled as an
/// unrecorded ± projection. Exact mode follows the branch named by
/// `prefer_plus`.
pub fn measure_x(reg: &mut Register, ctx: &mut Ctx, q: SlotId, prefer_plus: bool) -> Result<XMeasurement> {
    reg.check_qubit(q)?;
    let n = ctx.caps.x_rounds;
    // each round catches |+⟩ with probability 8/9 and never fires on |−⟩
    let w_plus = reg.weight_after(q, &projector(&plus()))? / reg.norm().powi(2);
    let p_plus = w_plus * (1.0 - 9f64.powi(-(n as i32)));
    for round in 1..=n {
        let c = compare_dual(reg, ctx, q, 0, prefer_plus)?;
        if c.yes {
            reg.remove_slot(q, dual(0))?;
            return Ok(XMeasurement {
                plus: true,
                p: p_plus,
                rounds: round,
                first_step_yes: round == 1,
                misassignment: 0.0,
            });
        }
        let c = compare_computational(reg, ctx, q, 2, prefer_plus)?;
        if c.yes {
            reg.remove_slot(q, ket(2))?;
            return Ok(XMeasurement {
                plus: true,
                p: p_plus,
                rounds: round,
                first_step_yes: false,
                misassignment: 0.0,
            });
        }
    }
    let total = reg.norm().powi(2);
    let wp = reg.weight_after(q, &projector(&plus()))? / total;
    let probs = [wp, (1.0 - wp).max(0.0)];
    let k = ctx.choose(&probs, 1);
    let v = if k == 0 { plus() } else { minus() };
    reg.apply_op(q, &projector(&v))?;
    reg.normalize();
    reg.remove_slot(q, v)?;
    Ok(XMeasurement {
        plus: false,
        p: 1.0 - p_plus,
        rounds: n,
        first_step_yes: false,
        misassignment: wp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::{Caps, Mode};

    #[test]
    fn inconclusive_probability_decays() {
        for a in 0..3 {
            assert!((inconclusive_probability(a, 0) - 1.0).abs() < 1e-15);
            assert!(inconclusive_probability(a, 64) < 1e-12);
        }
        // Two comparisons can resolve a=0 only via refs 1 and 2, which come
        // after ref 0 in the round-robin order.
        assert!((inconclusive_probability(0, 2) - 1.0).abs() < 1e-15);
        assert!((inconclusive_probability(2, 2) - (1.0 - 0.75 * 0.75)).abs() < 1e-15);
    }

    #[test]
    fn dual_comparison_on_eigenstates() {
        for which in 0..3 {
            for input in 0..3 {
                let mut reg = Register::product(&[dual(input)]);
                let mut ctx = Ctx::exact();
                let c = compare_dual(&mut reg, &mut ctx, 0, which, true).unwrap();
                assert_eq!(c.yes, input == which, "which {which} input {input}");
                assert!((c.p - 1.0).abs() < 1e-12);
            }
        }
        let mut reg = Register::product(&[ket(0)]);
        let c = compare_dual(&mut reg, &mut Ctx::exact(), 0, 0, true).unwrap();
        assert!(c.yes && (c.p - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn computational_measurement_exact() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = [C64::new(h, 0.0), C64::new(h, 0.0), ZERO];
        let mut reg = Register::product(&[s]);
        let (r, p) = measure_computational(&mut reg, &mut Ctx::exact(), 0, Some(2)).unwrap();
        // |2⟩ has no weight, so the likeliest outcome is taken instead
        assert!(matches!(r, Readout::Value(0) | Readout::Value(1)));
        assert!((p - 0.5).abs() < 1e-12);
        let mut reg = Register::product(&[ket(1)]);
        let (r, p) = measure_computational(&mut reg, &mut Ctx::exact(), 0, None).unwrap();
        assert_eq!(r, Readout::Value(1));
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_computational_measurement_projects() {
        let mut ctx = Ctx::new(Mode::Sampled, 3, Caps::default());
        for _ in 0..50 {
            let mut reg = Register::product(&[dual(1)]);
            let (r, _) = measure_computational(&mut reg, &mut ctx, 0, None).unwrap();
            let Readout::Value(a) = r else { panic!("inconclusive") };
            let st = reg.slot_state(0).unwrap();
            assert!((st[a].norm() - 1.0).abs() < 1e-9);
        }
    }
}
