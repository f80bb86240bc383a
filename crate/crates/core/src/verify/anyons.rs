//! Anyon-level checks: the micro-to-anyon basis change, the charge-transfer
//! law and the fusion table.

use super::{Check, Report};
use crate::anyon::{anyon_to_micro, charge_transfer_prob, sector_matrix, simulated_vacuum_prob, FusionTable};
use crate::group::{AnyonType, ClassLabel, Elem, Irrep, IrrepGroup};
use crate::linalg::{omega, C64, CMat, ONE};
use crate::ribbon::{AnyonLabel, MicroLabel};

const BASIS_TOL: f64 = 1e-12;

/// Unitarity of the basis change in each flux sector.
pub fn basis_unitarity() -> Vec<Check> {
    ClassLabel::ALL
        .iter()
        .map(|&c| {
            let m = sector_matrix(c);
            let n = m.rows();
            let dev = if m.cols() == n {
                (&m * &m.adjoint()).max_abs_diff(&CMat::identity(n))
            } else {
                f64::INFINITY
            };
            Check::new(format!("basis change unitary in sector {c}"), dev, BASIS_TOL, n)
        })
        .collect()
}

/// Expected micro expansion of a C3 sector state: (1/√3) Σ phase(z) |z, v⟩.
fn c3_expectation(v: Elem, zs: [(Elem, C64); 3]) -> Vec<(MicroLabel, C64)> {
    let s = 1.0 / 3f64.sqrt();
    zs.iter().map(|&(z, ph)| (MicroLabel::new(z, v), ph * s)).collect()
}

fn expansion_deviation(label: &AnyonLabel, expect: &[(MicroLabel, C64)]) -> f64 {
    let got = match anyon_to_micro(&[(*label, ONE)]) {
        Ok(g) => g,
        Err(_) => return f64::INFINITY,
    };
    let lookup = |list: &[(MicroLabel, C64)], m: MicroLabel| {
        list.iter().filter(|(k, _)| *k == m).map(|(_, c)| *c).sum::<C64>()
    };
    let mut worst: f64 = 0.0;
    for z in Elem::ALL {
        for v in ClassLabel::C3.members() {
            let m = MicroLabel::new(z, v);
            worst = worst.max((lookup(&got, m) - lookup(expect, m)).norm());
        }
    }
    worst
}

/// The four C3-sector states written out in the micro basis, with the
/// anyon label written as |colour; flavor⟩.
pub fn printed_c3_states() -> Vec<Check> {
    use Elem as G;
    let w = omega();
    let trivial = [(G::E, ONE), (G::MU, ONE), (G::MU_BAR, ONE)];
    let reflections = [(G::SIGMA, ONE), (G::MU_SIGMA, ONE), (G::MU_BAR_SIGMA, ONE)];
    let cases: Vec<(&str, AnyonLabel, Vec<(MicroLabel, C64)>)> = vec![
        (
            "|mu;mu> = sum over z in Z3 of |z, mu>",
            AnyonLabel::new(ClassLabel::C3, Irrep::Z3One, G::MU, 0, Some(G::MU), 0).unwrap(),
            c3_expectation(G::MU, trivial),
        ),
        (
            "|mubar;mu> = sum over reflections z of |z, mu>",
            AnyonLabel::new(ClassLabel::C3, Irrep::Z3One, G::MU, 0, Some(G::MU_BAR), 0).unwrap(),
            c3_expectation(G::MU, reflections),
        ),
        (
            "|mu;mubar> = sum over reflections z of |z, mubar>",
            AnyonLabel::new(ClassLabel::C3, Irrep::Z3One, G::MU_BAR, 0, Some(G::MU), 0).unwrap(),
            c3_expectation(G::MU_BAR, reflections),
        ),
        (
            "omega-weighted |mu;mu>",
            AnyonLabel::new(ClassLabel::C3, Irrep::Z3Omega, G::MU, 0, Some(G::MU), 0).unwrap(),
            c3_expectation(G::MU, [(G::E, ONE), (G::MU, w), (G::MU_BAR, w.conj())]),
        ),
    ];
    cases
        .into_iter()
        .map(|(name, label, expect)| Check::new(name, expansion_deviation(&label, &expect), BASIS_TOL, 1))
        .collect()
}

/// Prob(no charge transfer) from characters against the simulated winding
/// of a singlet, for every irrep of S3 and every flux.
pub fn charge_transfer() -> Check {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for r in IrrepGroup::S3.irreps() {
        for c in ClassLabel::ALL {
            for a in c.members() {
                let dev = match (charge_transfer_prob(r, c), simulated_vacuum_prob(r, a)) {
                    (Ok(x), Ok(y)) => (x - y).abs(),
                    _ => f64::INFINITY,
                };
                worst = worst.max(dev);
                cases += 1;
            }
        }
    }
    Check::new("Prob(0) = |chi_R(a)/dim R|^2 matches winding", worst, BASIS_TOL, cases)
}

/// Symmetry and dimension counting of the fusion table.
pub fn fusion_consistency() -> Vec<Check> {
    let t = FusionTable::s3();
    let mut symmetric = true;
    let mut dims = true;
    for a in AnyonType::ALL {
        for b in AnyonType::ALL {
            symmetric &= t.fuse(a, b) == t.fuse(b, a);
            let sum: usize = t.fuse(a, b).iter().map(|c| c.qdim()).sum();
            dims &= a.qdim() * b.qdim() == sum;
        }
    }
    let total: usize = AnyonType::ALL.iter().map(|a| a.qdim() * a.qdim()).sum();
    vec![
        Check::exact("fusion table symmetric", symmetric, 64),
        Check::exact("d_a d_b = sum of d_c over fusion outcomes", dims, 64),
        Check::exact(format!("sum of d^2 = 36 (got {total})"), total == 36, 8),
    ]
}

pub fn suite() -> Report {
    let mut rep = Report::new("anyons");
    for c in basis_unitarity() {
        rep.push(c);
    }
    for c in printed_c3_states() {
        rep.push(c);
    }
    rep.push(charge_transfer());
    for c in fusion_consistency() {
        rep.push(c);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    #[test]
    fn anyon_suite_passes() {
        let r = suite();
        assert!(r.passed(), "{}", r.to_table());
    }

    #[test]
    fn zero_is_not_one() {
        // guards against a vacuous expansion comparison
        let l = AnyonLabel::new(ClassLabel::C3, Irrep::Z3One, Elem::MU, 0, Some(Elem::MU), 0).unwrap();
        assert!(expansion_deviation(&l, &[(MicroLabel::new(Elem::E, Elem::MU), ZERO)]) > 0.5);
    }
}
