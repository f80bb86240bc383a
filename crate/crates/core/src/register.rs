//! Dense register of qutrits, each encoded in a pair of C2 fluxes, plus the
//! execution context shared by measurements and gates.
//!
//! Slots carry stable ids. The digit of the slot at position k in basis index
//! `idx` is `(idx / 3^k) % 3`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::anyon::ProbeRecord;
use crate::error::{Error, Result};
use crate::group::Elem;
use crate::linalg::{omega_pow, CMat, C64, ONE, ZERO};

pub type SlotId = usize;

/// Single-qutrit state vector.
pub type Qutrit = [C64; 3];

/// Tolerance for ancilla hygiene and leakage checks.
pub const HYGIENE_TOL: f64 = 1e-9;

/// Flux label μ^a σ of both fluxes of the pair encoding |a⟩.
pub fn encode(a: usize) -> Elem {
    let mut w = Elem::SIGMA;
    for _ in 0..a % 3 {
        w = Elem::MU * w;
    }
    w
}

/// Inverse of [`encode`]; `None` outside the C2 class.
pub fn decode(w: Elem) -> Option<usize> {
    (0..3).find(|&a| encode(a) == w)
}

pub fn ket(a: usize) -> Qutrit {
    let mut v = [ZERO; 3];
    v[a] = ONE;
    v
}

/// Dual basis state |k̃⟩ = (1/√3) Σ_b ω^{kb} |b⟩.
pub fn dual(k: usize) -> Qutrit {
    let s = 1.0 / 3f64.sqrt();
    [0, 1, 2].map(|b| omega_pow((k * b) as i64) * s)
}

/// Qubit |+⟩ = (|0⟩+|1⟩)/√2.
pub fn plus() -> Qutrit {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(h, 0.0), C64::new(h, 0.0), ZERO]
}

/// Qubit |−⟩ = (|0⟩−|1⟩)/√2.
pub fn minus() -> Qutrit {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(h, 0.0), C64::new(-h, 0.0), ZERO]
}

/// Magic state ξ = (|0⟩−|1⟩+|2⟩)/√3.
pub fn xi() -> Qutrit {
    let s = 1.0 / 3f64.sqrt();
    [C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0)]
}

/// Parses a named single-qutrit state: `0 1 2 0~ 1~ 2~ + - xi +y -y`.
pub fn named_state(name: &str) -> Result<Qutrit> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match name {
        "0" | "1" | "2" => ket(name.parse::<usize>().expect("digit")),
        "0~" | "1~" | "2~" => dual(name[..1].parse::<usize>().expect("digit")),
        "+" => plus(),
        "-" => minus(),
        "xi" => xi(),
        "+y" => [C64::new(h, 0.0), C64::new(0.0, h), ZERO],
        "-y" => [C64::new(h, 0.0), C64::new(0.0, -h), ZERO],
        _ => return Err(Error::InvalidArgument(format!("unknown state '{name}'"))),
    })
}

#[derive(Clone, Debug)]
pub struct Register {
    slots: Vec<SlotId>,
    next_id: SlotId,
    amps: Vec<C64>,
}

fn pow3(k: usize) -> usize {
    3usize.pow(k as u32)
}

fn digit(idx: usize, pos: usize) -> usize {
    (idx / pow3(pos)) % 3
}

impl Register {
    /// Product state; slot ids are 0..n in order.
    pub fn product(states: &[Qutrit]) -> Self {
        let mut r = Register {
            slots: Vec::new(),
            next_id: 0,
            amps: vec![ONE],
        };
        for s in states {
            r.add_slot(*s);
        }
        r
    }

    /// Register with ids 0..n from a full amplitude vector.
    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != pow3(n) {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes do not fit {n} qutrits",
                amps.len()
            )));
        }
        Ok(Register {
            slots: (0..n).collect(),
            next_id: n,
            amps,
        })
    }

    pub fn ids(&self) -> &[SlotId] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn contains(&self, id: SlotId) -> bool {
        self.slots.contains(&id)
    }

    fn pos(&self, id: SlotId) -> Result<usize> {
        self.slots
            .iter()
            .position(|&s| s == id)
            .ok_or_else(|| Error::InvalidArgument(format!("no qutrit slot {id}")))
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for c in &mut self.amps {
                *c /= n;
            }
        }
    }

    /// Appends a slot in the given state and returns its id.
    pub fn add_slot(&mut self, state: Qutrit) -> SlotId {
        let n = self.amps.len();
        let mut amps = vec![ZERO; 3 * n];
        for (d, s) in state.iter().enumerate() {
            for (i, a) in self.amps.iter().enumerate() {
                amps[d * n + i] = a * s;
            }
        }
        self.amps = amps;
        let id = self.next_id;
        self.next_id += 1;
        self.slots.push(id);
        id
    }

    /// Gives slot `from` the id `to`, which must be unused.
    pub fn relabel(&mut self, from: SlotId, to: SlotId) -> Result<()> {
        if self.contains(to) {
            return Err(Error::InvalidArgument(format!("slot id {to} is in use")));
        }
        let p = self.pos(from)?;
        self.slots[p] = to;
        self.next_id = self.next_id.max(to + 1);
        Ok(())
    }

    /// Permutation with phases on the digits of `ids`.
    pub fn apply_monomial(&mut self, ids: &[SlotId], f: impl Fn(&[usize]) -> (Vec<usize>, C64)) -> Result<()> {
        let pos: Vec<usize> = ids.iter().map(|&i| self.pos(i)).collect::<Result<_>>()?;
        let mut out = vec![ZERO; self.amps.len()];
        let mut digits = vec![0; pos.len()];
        for (idx, a) in self.amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (k, &p) in pos.iter().enumerate() {
                digits[k] = digit(idx, p);
            }
            let (new, phase) = f(&digits);
            let mut j = idx;
            for (k, &p) in pos.iter().enumerate() {
                j = j + new[k] * pow3(p) - digits[k] * pow3(p);
            }
            out[j] += a * phase;
        }
        self.amps = out;
        Ok(())
    }

    /// Applies a 3×3 operator to one slot.
    pub fn apply_op(&mut self, id: SlotId, m: &CMat) -> Result<()> {
        let p = self.pos(id)?;
        let stride = pow3(p);
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, a) in self.amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let d = digit(idx, p);
            let base = idx - d * stride;
            for r in 0..3 {
                out[base + r * stride] += m[(r, d)] * a;
            }
        }
        self.amps = out;
        Ok(())
    }

    /// Squared norm after applying `m` to slot `id` (without changing it).
    pub fn weight_after(&self, id: SlotId, m: &CMat) -> Result<f64> {
        let mut c = self.clone();
        c.apply_op(id, m)?;
        Ok(c.norm().powi(2))
    }

    /// Reduced density matrix of one slot.
    pub fn reduced(&self, id: SlotId) -> Result<CMat> {
        let p = self.pos(id)?;
        let stride = pow3(p);
        let mut rho = CMat::zeros(3, 3);
        for idx in (0..self.amps.len()).filter(|&i| digit(i, p) == 0) {
            for r in 0..3 {
                for c in 0..3 {
                    rho[(r, c)] += self.amps[idx + r * stride] * self.amps[idx + c * stride].conj();
                }
            }
        }
        Ok(rho)
    }

    /// Weight of digit 2 in slot `id`.
    pub fn leakage(&self, id: SlotId) -> Result<f64> {
        Ok(self.reduced(id)?[(2, 2)].re / self.norm().powi(2))
    }

    /// Errors if slot `id` has support on |2⟩.
    pub fn check_qubit(&self, id: SlotId) -> Result<()> {
        let l = self.leakage(id)?;
        if l > HYGIENE_TOL {
            return Err(Error::Leakage(l));
        }
        Ok(())
    }

    /// Removes slot `id` after checking it is exactly in `expected` (up to
    /// phase) and unentangled from the rest.
    pub fn remove_slot(&mut self, id: SlotId, expected: Qutrit) -> Result<()> {
        let p = self.pos(id)?;
        let stride = pow3(p);
        let norm = self.norm();
        let rest_len = self.amps.len() / 3;
        let mut rest = vec![ZERO; rest_len];
        for (r, slot) in rest.iter_mut().enumerate() {
            let hi = r / stride;
            let lo = r % stride;
            let base = hi * stride * 3 + lo;
            *slot = (0..3).map(|d| expected[d].conj() * self.amps[base + d * stride]).sum();
        }
        let kept: f64 = rest.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let deficit = if norm > 0.0 { 1.0 - (kept / norm).powi(2) } else { 0.0 };
        if deficit > HYGIENE_TOL {
            return Err(Error::AncillaHygiene { slot: id, deficit });
        }
        self.amps = rest;
        self.slots.remove(p);
        Ok(())
    }

    /// Removes `ids` jointly, whatever their joint state, provided the
    /// remaining slots are left in a pure state.
    pub fn discard_slots(&mut self, ids: &[SlotId]) -> Result<()> {
        let pos: Vec<usize> = ids.iter().map(|&i| self.pos(i)).collect::<Result<_>>()?;
        let keep: Vec<usize> = (0..self.slots.len()).filter(|p| !pos.contains(p)).collect();
        let split = |idx: usize| -> (usize, usize) {
            let mut r = 0;
            for (k, &p) in keep.iter().enumerate() {
                r += digit(idx, p) * pow3(k);
            }
            let mut d = 0;
            for (k, &p) in pos.iter().enumerate() {
                d += digit(idx, p) * pow3(k);
            }
            (r, d)
        };
        let (nr, nd) = (pow3(keep.len()), pow3(pos.len()));
        let mut m = vec![vec![ZERO; nd]; nr];
        for (idx, a) in self.amps.iter().enumerate() {
            let (r, d) = split(idx);
            m[r][d] = *a;
        }
        // Rank-one test against the heaviest column.
        let col_norm = |d: usize| m.iter().map(|row| row[d].norm_sqr()).sum::<f64>();
        let best = (0..nd)
            .max_by(|&a, &b| col_norm(a).total_cmp(&col_norm(b)))
            .expect("at least one column");
        let bn = col_norm(best).sqrt();
        let total = self.norm();
        if bn == 0.0 || total == 0.0 {
            return Err(Error::InvalidArgument("cannot discard from a zero state".into()));
        }
        let v: Vec<C64> = m.iter().map(|row| row[best] / bn).collect();
        let mut resid = 0.0;
        for d in 0..nd {
            let ov: C64 = v.iter().zip(&m).map(|(x, row)| x.conj() * row[d]).sum();
            for (x, row) in v.iter().zip(&m) {
                resid += (row[d] - x * ov).norm_sqr();
            }
        }
        let deficit = resid / total.powi(2);
        if deficit > HYGIENE_TOL {
            return Err(Error::AncillaHygiene { slot: ids[0], deficit });
        }
        self.amps = v.into_iter().map(|x| x * total).collect();
        self.slots = keep.iter().map(|&p| self.slots[p]).collect();
        Ok(())
    }

    /// Amplitude vector with digit k belonging to `order[k]`; `order` must
    /// list every slot exactly once.
    pub fn amplitudes(&self, order: &[SlotId]) -> Result<Vec<C64>> {
        if order.len() != self.slots.len() {
            return Err(Error::InvalidArgument(format!(
                "order lists {} of {} slots",
                order.len(),
                self.slots.len()
            )));
        }
        let pos: Vec<usize> = order.iter().map(|&i| self.pos(i)).collect::<Result<_>>()?;
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, a) in self.amps.iter().enumerate() {
            let mut j = 0;
            for (k, &p) in pos.iter().enumerate() {
                j += digit(idx, p) * pow3(k);
            }
            out[j] = *a;
        }
        Ok(out)
    }

    /// State of a single slot when the register is a product across it.
    pub fn slot_state(&self, id: SlotId) -> Result<Qutrit> {
        let rho = self.reduced(id)?;
        let tr = rho.trace().re;
        let k = (0..3)
            .max_by(|&a, &b| rho[(a, a)].re.total_cmp(&rho[(b, b)].re))
            .expect("three diagonal entries");
        let s = rho[(k, k)].re.sqrt();
        let v = [0, 1, 2].map(|r| rho[(r, k)] / s / tr.sqrt());
        // purity check
        let purity: f64 = (0..3)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .map(|(r, c)| rho[(r, c)].norm_sqr())
            .sum::<f64>()
            / (tr * tr);
        if (1.0 - purity).abs() > HYGIENE_TOL {
            return Err(Error::InvalidArgument(format!("slot {id} is entangled")));
        }
        Ok(v)
    }
}

/// Exact mode follows one designated branch of every measurement and reports
/// its probability; sampled mode draws outcomes from a seeded generator.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

/// Repetition caps of the probabilistic protocols.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct Caps {
    /// Rounds of the sign-flip repeat-until-success loop.
    pub sign_flip: usize,
    /// Attempts of |+⟩ and ξ preparation.
    pub prepare: usize,
    /// Probe comparisons of a computational-basis measurement.
    pub measure: usize,
    /// Rounds of the qubit dual-basis measurement.
    pub x_rounds: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            sign_flip: 101,
            prepare: 64,
            measure: 64,
            x_rounds: 3,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> Result<()> {
        if self.sign_flip == 0 || self.prepare == 0 || self.measure == 0 || self.x_rounds == 0 {
            return Err(Error::InvalidArgument("caps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Execution context: mode, randomness, caps and the measurement log.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub mode: Mode,
    pub rng: ChaCha8Rng,
    pub caps: Caps,
    pub records: Vec<ProbeRecord>,
    pub y_pool: Option<crate::ypool::YPool>,
}

impl Ctx {
    pub fn new(mode: Mode, seed: u64, caps: Caps) -> Self {
        Ctx {
            mode,
            rng: ChaCha8Rng::seed_from_u64(seed),
            caps,
            records: Vec::new(),
            y_pool: None,
        }
    }

    /// Context for trial `stream` of a seeded batch.
    pub fn for_trial(mode: Mode, seed: u64, stream: u64, caps: Caps) -> Self {
        let mut c = Self::new(mode, seed, caps);
        c.rng.set_stream(stream);
        c
    }

    pub fn exact() -> Self {
        Self::new(Mode::Exact, 0, Caps::default())
    }

    /// Picks an outcome index. Sampled mode draws from `probs`; exact mode
    /// takes `preferred` unless it has zero weight, then the likeliest one.
    pub fn choose(&mut self, probs: &[f64], preferred: usize) -> usize {
        match self.mode {
            Mode::Exact => {
                if probs[preferred] > 1e-12 {
                    preferred
                } else {
                    (0..probs.len())
                        .max_by(|&a, &b| probs[a].total_cmp(&probs[b]))
                        .expect("nonempty")
                }
            }
            Mode::Sampled => {
                let total: f64 = probs.iter().sum();
                let x = self.rng.gen::<f64>() * total;
                let mut acc = 0.0;
                for (i, p) in probs.iter().enumerate() {
                    acc += p;
                    if x < acc && *p > 0.0 {
                        return i;
                    }
                }
                (0..probs.len()).rev().find(|&i| probs[i] > 0.0).expect("some weight")
            }
        }
    }

    pub fn record(&mut self, probe: impl Into<String>, outcome: impl Into<String>, p: f64) {
        let round = self.records.len();
        self.records.push(ProbeRecord {
            round,
            probe: probe.into(),
            outcome: outcome.into(),
            p,
        });
    }
}

/// Projector |v⟩⟨v| on one qutrit.
pub fn projector(v: &Qutrit) -> CMat {
    CMat::from_fn(3, 3, |r, c| v[r] * v[c].conj())
}

/// I − |v⟩⟨v|.
pub fn complement(v: &Qutrit) -> CMat {
    CMat::from_fn(3, 3, |r, c| {
        let id = if r == c { ONE } else { ZERO };
        id - v[r] * v[c].conj()
    })
}
