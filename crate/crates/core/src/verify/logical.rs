//! Logical qutrit states prepared by flux-basis ribbons on the 3×1 strip.

use super::{Check, Report};
use crate::group::Elem;
use crate::linalg::{omega_pow, C64, ZERO};
use crate::logical::{global_gauge, prepare_all, Geometry, Preparation};
use crate::register::Qutrit;
use crate::state::ViolationKind;

const TOL: f64 = 1e-9;

/// Readout fidelity and sector purity of the six prepared states.
pub fn readout_checks(prep: &Preparation) -> Vec<Check> {
    let states = match prepare_all(prep, TOL) {
        Ok(s) => s,
        Err(_) => return vec![Check::new("logical states prepared", f64::INFINITY, TOL, 6)],
    };
    let mut out = Vec::new();
    for s in &states {
        let dev = s.fidelity_deficit.max(s.readout.outside_weight);
        out.push(Check::new(format!("lattice |{}> reads out at fidelity 1", s.name), dev, TOL, 1));
    }
    // fluxes only at the two end plaquettes
    let ends = prep.geometry.ends;
    let ok = states.iter().all(|s| {
        let fluxes: Vec<usize> = s
            .violations
            .iter()
            .filter(|v| v.kind == ViolationKind::Flux)
            .map(|v| v.location)
            .collect();
        fluxes == ends.to_vec()
    });
    out.push(Check::exact("flux violations only at the pair's plaquettes", ok, states.len()));
    out
}

/// The three ribbon pairs have equal norm, so the ω-weighted sums are the
/// dual states without extra weights.
pub fn equal_norms(prep: &Preparation) -> Check {
    let n: Vec<f64> = prep.pairs.iter().map(|p| p.norm()).collect();
    let dev = n.iter().map(|x| (x - n[0]).abs()).fold(0.0, f64::max) / n[0].max(f64::MIN_POSITIVE);
    Check::new("ribbon pairs have equal norm", dev, TOL, 3)
}

/// Permutation of computational states induced by a global gauge
/// transformation, read from the holonomy sectors; each image must be a
/// single computational state with unit amplitude.
fn gauge_permutation(prep: &Preparation, g: Elem) -> Option<[usize; 3]> {
    let mut perm = [0; 3];
    for (a, p) in perm.iter_mut().enumerate() {
        let r = prep.readout(&global_gauge(&prep.computational(a), g)).ok()?;
        let b = (0..3).find(|&b| (r.amplitudes[b] - C64::new(1.0, 0.0)).norm() < TOL)?;
        *p = b;
    }
    Some(perm)
}

/// Charges of the dual states under global gauge transformations: |0~⟩ is
/// invariant under every g, and A^g acts on |k~⟩ as the permutation it
/// induces on the flux pairs predicts.
pub fn dual_charges(prep: &Preparation) -> Vec<Check> {
    let mut out = Vec::new();
    let zero = prep.dual(0);
    let invariant = Elem::ALL
        .iter()
        .map(|&g| global_gauge(&zero, g).max_abs_diff(&zero))
        .fold(0.0, f64::max);
    out.push(Check::new("|0~> has trivial total charge", invariant, TOL, 6));

    let mut worst: f64 = 0.0;
    let mut nontrivial = true;
    for g in [Elem::MU, Elem::SIGMA] {
        let Some(perm) = gauge_permutation(prep, g) else {
            worst = f64::INFINITY;
            continue;
        };
        for k in 0..3 {
            let mut expect: Qutrit = [ZERO; 3];
            for a in 0..3 {
                expect[perm[a]] += omega_pow((k * a) as i64) / 3f64.sqrt();
            }
            match prep.readout(&global_gauge(&prep.dual(k), g)) {
                Ok(r) => {
                    let d = r.amplitudes.iter().zip(&expect).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                    worst = worst.max(d);
                    if k > 0 && g == Elem::MU {
                        // a [2] charge is not invariant under the rotation
                        let ov: C64 = expect
                            .iter()
                            .zip(&crate::register::dual(k))
                            .map(|(x, y)| y.conj() * x)
                            .sum();
                        nontrivial &= (ov - C64::new(1.0, 0.0)).norm() > 0.5;
                    }
                }
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    out.push(Check::new("gauge action on |k~> follows the flux permutation", worst, TOL, 6));
    out.push(Check::exact("|1~>, |2~> carry nontrivial charge", nontrivial, 2));
    out
}

pub fn suite() -> Report {
    let mut rep = Report::new("logical init");
    let prep = match Geometry::strip().and_then(Preparation::new) {
        Ok(p) => p,
        Err(_) => {
            rep.push(Check::new("strip preparation", f64::INFINITY, TOL, 1));
            return rep;
        }
    };
    rep.push(equal_norms(&prep));
    for c in readout_checks(&prep) {
        rep.push(c);
    }
    for c in dual_charges(&prep) {
        rep.push(c);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logical_suite_passes() {
        let r = suite();
        assert!(r.passed(), "{}", r.to_table());
    }
}
