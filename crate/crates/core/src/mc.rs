//! Seeded Monte Carlo statistics of the probabilistic protocols against
//! their analytic success rates.
//!
//! Trial t draws from stream t of a ChaCha generator seeded with the batch
//! seed, so results do not depend on how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::anyon::{measure_flux_channel, AnyonState, Particle, ProbeOutcome};
use crate::error::{Error, Result};
use crate::gates::{prepare_plus, prepare_xi, sign_flip, sign_flip_closed_form};
use crate::group::ClassLabel;
use crate::linalg::ONE;
use crate::measure::measure_x;
use crate::register::{ket, minus, plus, Caps, Ctx, Mode, Register};

/// Protocol names accepted by [`run`].
pub const PROTOCOLS: [&str; 8] = [
    "flux_c3",
    "flux_c2",
    "xmeas",
    "plus_prep",
    "xi_prep",
    "signflip_N1",
    "signflip_N11",
    "signflip_N35",
];

/// Number of standard errors an empirical rate may deviate from its
/// analytic value.
pub const SIGMAS: f64 = 3.0;

/// Empirical frequency of one event against its analytic probability.
#[derive(Clone, Debug, Serialize)]
pub struct Statistic {
    pub name: String,
    pub trials: usize,
    pub hits: usize,
    pub empirical: f64,
    pub analytic: f64,
    /// (empirical − analytic) / binomial standard error; 0 when the analytic
    /// value is 0 or 1 and the empirical one matches it.
    pub z: f64,
    pub pass: bool,
}

impl Statistic {
    pub fn new(name: impl Into<String>, hits: usize, trials: usize, analytic: f64) -> Self {
        let empirical = hits as f64 / trials as f64;
        let se = (analytic * (1.0 - analytic) / trials as f64).sqrt();
        let z = if se > 0.0 {
            (empirical - analytic) / se
        } else if empirical == analytic {
            0.0
        } else {
            f64::INFINITY
        };
        Statistic {
            name: name.into(),
            trials,
            hits,
            empirical,
            analytic,
            z,
            pass: z.abs() <= SIGMAS,
        }
    }
}

/// A closed-form bound stated alongside the statistics.
#[derive(Clone, Debug, Serialize)]
pub struct Bound {
    pub name: String,
    pub value: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub protocol: String,
    pub seed: u64,
    pub trials: usize,
    pub statistics: Vec<Statistic>,
    pub bounds: Vec<Bound>,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.statistics.iter().all(|s| s.pass) && self.bounds.iter().all(|b| b.holds)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{} (seed {}, {} trials)\n", self.protocol, self.seed, self.trials);
        for s in &self.statistics {
            out.push_str(&format!(
                "  {:<4} {:<44} empirical {:.5}  analytic {:.5}  z {:+.2}\n",
                if s.pass { "PASS" } else { "FAIL" },
                s.name,
                s.empirical,
                s.analytic,
                s.z
            ));
        }
        for b in &self.bounds {
            out.push_str(&format!(
                "  {:<4} {:<44} value {:.6}\n",
                if b.holds { "PASS" } else { "FAIL" },
                b.name,
                b.value
            ));
        }
        out
    }
}

fn bound(name: &str, value: f64, holds: bool) -> Bound {
    Bound {
        name: name.into(),
        value,
        holds,
    }
}

/// Runs `trial` for every index in parallel and returns the results in
/// index order.
fn trials<T: Send>(n: usize, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n as u64).into_par_iter().map(f).collect()
}

fn count<T>(xs: &[T], f: impl Fn(&T) -> bool) -> usize {
    xs.iter().filter(|x| f(x)).count()
}

/// Probe rounds on a lone flux of `class`; returns each round's outcome.
fn flux_rounds(class: ClassLabel, rounds: usize, seed: u64, stream: u64) -> Result<Vec<ProbeOutcome>> {
    let flux = class.representative();
    let state = AnyonState::new(vec![Particle::flux(class, 0)], [(vec![flux.id()], ONE)])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let (log, _) = measure_flux_channel(&state, &[0], rounds, &mut rng);
    let outcomes = log
        .iter()
        .map(|r| {
            ProbeOutcome::ALL
                .into_iter()
                .find(|o| o.to_string() == r.outcome)
                .expect("logged outcome is a probe outcome")
        })
        .collect();
    Ok(outcomes)
}

fn flux_c3(n: usize, seed: u64) -> Result<McReport> {
    let runs = trials(n, |t| flux_rounds(ClassLabel::C3, 4, seed, t))?;
    let miss = |o: &ProbeOutcome| *o == ProbeOutcome::Vacuum;
    let all_miss = 0.25f64.powi(4);
    Ok(McReport {
        protocol: "flux_c3".into(),
        seed,
        trials: n,
        statistics: vec![
            Statistic::new("false negative in one round", count(&runs, |r| miss(&r[0])), n, 0.25),
            Statistic::new("false negative in all 4 rounds", count(&runs, |r| r.iter().all(miss)), n, all_miss),
        ],
        bounds: vec![bound("(1/4)^4 < 0.005", all_miss, all_miss < 0.005)],
    })
}

fn flux_c2(n: usize, seed: u64) -> Result<McReport> {
    let runs = trials(n, |t| flux_rounds(ClassLabel::C2, 1, seed, t))?;
    Ok(McReport {
        protocol: "flux_c2".into(),
        seed,
        trials: n,
        statistics: vec![
            Statistic::new("remnant in first component", count(&runs, |r| r[0] == ProbeOutcome::Doublet(0)), n, 0.5),
            Statistic::new("vacuum outcome", count(&runs, |r| r[0] == ProbeOutcome::Vacuum), n, 0.0),
        ],
        bounds: Vec::new(),
    })
}

fn sampled(seed: u64, stream: u64, caps: Caps) -> Ctx {
    Ctx::for_trial(Mode::Sampled, seed, stream, caps)
}

fn xmeas(n: usize, seed: u64, caps: Caps) -> Result<McReport> {
    // trial t measures |+⟩ on stream 2t and |−⟩ on stream 2t+1
    let measure = |input, stream| {
        let mut reg = Register::product(&[input]);
        let mut ctx = sampled(seed, stream, caps);
        measure_x(&mut reg, &mut ctx, 0, true)
    };
    let runs = trials(n, |t| Ok((measure(plus(), 2 * t)?, measure(minus(), 2 * t + 1)?)))?;
    let plus_runs: Vec<_> = runs.iter().map(|r| r.0).collect();
    let minus_runs: Vec<_> = runs.iter().map(|r| r.1).collect();
    let rounds = caps.x_rounds as i32;
    let residual = (1.0f64 / 9.0).powi(rounds);
    Ok(McReport {
        protocol: "xmeas".into(),
        seed,
        trials: n,
        statistics: vec![
            Statistic::new(
                "|+> answered yes in the first round",
                count(&plus_runs, |m| m.plus && m.rounds == 1),
                plus_runs.len(),
                8.0 / 9.0,
            ),
            Statistic::new(
                format!("|+> never answered in {rounds} rounds"),
                count(&plus_runs, |m| !m.plus),
                plus_runs.len(),
                residual,
            ),
            Statistic::new("|-> answered yes", count(&minus_runs, |m| m.plus), minus_runs.len(), 0.0),
        ],
        bounds: vec![bound(&format!("(1/9)^{rounds} < 0.01"), residual, residual < 0.01)],
    })
}

fn plus_prep(n: usize, seed: u64, caps: Caps) -> Result<McReport> {
    let reps = trials(n, |t| {
        let mut reg = Register::product(&[]);
        let mut ctx = sampled(seed, t, caps);
        Ok(prepare_plus(&mut reg, &mut ctx)?.1.repetitions)
    })?;
    let within5 = 1.0 - (1.0f64 / 3.0).powi(5);
    Ok(McReport {
        protocol: "plus_prep".into(),
        seed,
        trials: n,
        statistics: vec![
            Statistic::new("success on the first round", count(&reps, |&r| r == 1), n, 2.0 / 3.0),
            Statistic::new("success within 5 rounds", count(&reps, |&r| r <= 5), n, within5),
        ],
        bounds: vec![bound("1 - (1/3)^5 >= 0.99", within5, within5 >= 0.99)],
    })
}

fn xi_prep(n: usize, seed: u64, caps: Caps) -> Result<McReport> {
    let reps = trials(n, |t| {
        let mut reg = Register::product(&[]);
        let mut ctx = sampled(seed, t, caps);
        Ok(prepare_xi(&mut reg, &mut ctx)?.1.repetitions)
    })?;
    Ok(McReport {
        protocol: "xi_prep".into(),
        seed,
        trials: n,
        statistics: vec![Statistic::new("success on the first attempt", count(&reps, |&r| r == 1), n, 0.25)],
        bounds: Vec::new(),
    })
}

fn signflip(n: usize, seed: u64, caps: Caps, rounds: usize) -> Result<McReport> {
    let caps = Caps {
        sign_flip: rounds,
        ..caps
    };
    let ok = trials(n, |t| {
        let mut reg = Register::product(&[ket(0)]);
        let mut ctx = sampled(seed, t, caps);
        match sign_flip(&mut reg, &mut ctx, 0, 2) {
            Ok(_) => Ok(true),
            Err(Error::CapExhausted { protocol, .. }) if protocol == "sign_flip" => Ok(false),
            Err(e) => Err(e),
        }
    })?;
    let p = sign_flip_closed_form(rounds);
    let mut bounds = Vec::new();
    if rounds >= 35 {
        bounds.push(bound(&format!("p({rounds}) >= 0.99"), p, p >= 0.99));
    }
    Ok(McReport {
        protocol: format!("signflip_N{rounds}"),
        seed,
        trials: n,
        statistics: vec![Statistic::new(format!("success within {rounds} rounds"), count(&ok, |&b| b), n, p)],
        bounds,
    })
}

/// Runs `trials` seeded trials of a named protocol.
pub fn run(protocol: &str, trials: usize, seed: u64, caps: Caps) -> Result<McReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    caps.validate()?;
    match protocol {
        "flux_c3" => flux_c3(trials, seed),
        "flux_c2" => flux_c2(trials, seed),
        "xmeas" => xmeas(trials, seed, caps),
        "plus_prep" => plus_prep(trials, seed, caps),
        "xi_prep" => xi_prep(trials, seed, caps),
        other => match other.strip_prefix("signflip_N").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if n % 2 == 1 => signflip(trials, seed, caps, n),
            _ => Err(Error::InvalidArgument(format!(
                "unknown protocol {other}; expected one of {}",
                PROTOCOLS.join(", ")
            ))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Elem;

    #[test]
    fn z_score_edge_cases() {
        assert_eq!(Statistic::new("x", 0, 10, 0.0).z, 0.0);
        assert!(!Statistic::new("x", 1, 10, 0.0).pass);
        assert!((Statistic::new("x", 50, 100, 0.5).z).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(matches!(run("flux_c4", 10, 0, Caps::default()), Err(Error::InvalidArgument(_))));
        assert!(matches!(run("flux_c3", 0, 0, Caps::default()), Err(Error::InvalidArgument(_))));
        assert!(matches!(run("signflip_N2", 10, 0, Caps::default()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn reproducible_given_seed() {
        let a = run("plus_prep", 200, 7, Caps::default()).unwrap();
        let b = run("plus_prep", 200, 7, Caps::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn c3_representative_is_a_rotation() {
        assert_eq!(ClassLabel::C3.representative().class(), ClassLabel::C3);
        assert_ne!(ClassLabel::C3.representative(), Elem::E);
    }
}
