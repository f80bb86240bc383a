//! Group tables, the Drinfeld relations of the site operators and the torus
//! census.

use rand::Rng;

use super::{Check, Report};
use crate::group::{Elem, IrrepGroup};
use crate::lattice::{Lattice, Site};
use crate::linalg::{CMat, ZERO};
use crate::state::{census_1x1_torus, WaveFunction};

/// Pure-permutation model of S3 on {0,1,2}: μ = (0 1 2), σ = (1 2).
fn perm(g: Elem) -> [usize; 3] {
    let mu = [1, 2, 0];
    let sigma = [0, 2, 1];
    let mut p = [0, 1, 2];
    // μ^a σ^b acts as σ first, then μ a times
    for _ in 0..g.reflection() {
        p = [sigma[p[0]], sigma[p[1]], sigma[p[2]]];
    }
    for _ in 0..g.rotation() {
        p = [mu[p[0]], mu[p[1]], mu[p[2]]];
    }
    p
}

fn group_checks() -> Vec<Check> {
    let mut ok = true;
    for a in Elem::ALL {
        for b in Elem::ALL {
            let (pa, pb, pab) = (perm(a), perm(b), perm(a * b));
            ok &= (0..3).all(|i| pab[i] == pa[pb[i]]);
        }
    }
    let mut hom: f64 = 0.0;
    let mut unit: f64 = 0.0;
    let mut ortho: f64 = 0.0;
    let mut count = 0;
    for group in [IrrepGroup::S3, IrrepGroup::Z2, IrrepGroup::Z3] {
        let elems = group.elements();
        let irreps = group.irreps();
        for r in &irreps {
            for &a in &elems {
                let ma = r.matrix(a).unwrap();
                unit = unit.max((&ma.adjoint() * &ma).max_abs_diff(&CMat::identity(r.dim())));
                for &b in &elems {
                    let lhs = r.matrix(a * b).unwrap();
                    let rhs = &ma * &r.matrix(b).unwrap();
                    hom = hom.max(lhs.max_abs_diff(&rhs));
                    count += 1;
                }
            }
            for s in &irreps {
                let overlap: crate::linalg::C64 = elems
                    .iter()
                    .map(|&g| r.character(g).unwrap().conj() * s.character(g).unwrap())
                    .fold(ZERO, |x, y| x + y)
                    / elems.len() as f64;
                let expected = if r == s { 1.0 } else { 0.0 };
                ortho = ortho.max((overlap.re - expected).abs() + overlap.im.abs());
            }
        }
    }
    vec![
        Check::exact("cayley table equals permutation composition", ok, 36),
        Check::new("irreps are homomorphisms", hom, 1e-12, count),
        Check::new("irreps are unitary", unit, 1e-12, count),
        Check::new("character orthogonality", ortho, 1e-12, count),
    ]
}

/// Drinfeld relations at every site of a 2×2 open patch on `states` random
/// states.
pub fn drinfeld_checks<R: Rng>(states: usize, rng: &mut R) -> Vec<Check> {
    let l = Lattice::open(2, 2).unwrap();
    let psis: Vec<_> = (0..states).map(|_| WaveFunction::random(&l, 30, rng)).collect();
    let sites: Vec<Site> = (0..l.n_vertices())
        .flat_map(|v| l.vertex_plaquettes(v).into_iter().map(move |p| Site::new(v, p)))
        .collect();
    let (mut aa, mut bb, mut ab) = (0.0f64, 0.0f64, 0.0f64);
    let mut cases = 0;
    for psi in &psis {
        for site in &sites {
            let (s, p) = (site.vertex, site.plaquette);
            let b = |h: Elem, w: &WaveFunction| w.apply_plaquette(h, p, s).unwrap();
            for g1 in Elem::ALL {
                for g2 in Elem::ALL {
                    let lhs = psi.apply_vertex(g2, s).apply_vertex(g1, s);
                    aa = aa.max(lhs.max_abs_diff(&psi.apply_vertex(g1 * g2, s)));
                    let lhs = b(g1, &b(g2, psi));
                    let rhs = if g1 == g2 { b(g1, psi) } else { WaveFunction::zero(&l) };
                    bb = bb.max(lhs.max_abs_diff(&rhs));
                    let (g, h) = (g1, g2);
                    let lhs = b(h, psi).apply_vertex(g, s);
                    let rhs = b(g * h * g.inv(), &psi.apply_vertex(g, s));
                    ab = ab.max(lhs.max_abs_diff(&rhs));
                    cases += 1;
                }
            }
        }
    }
    vec![
        Check::new("A^g1 A^g2 = A^(g1 g2)", aa, 1e-9, cases),
        Check::new("B^h1 B^h2 = delta(h1,h2) B^h1", bb, 1e-9, cases),
        Check::new("A^g B^h = B^(g h g^-1) A^g", ab, 1e-9, cases),
    ]
}

/// A_s and B^e_p are commuting idempotents on a 2×2 open patch, and every
/// A^g_s is norm preserving.
pub fn projector_checks<R: Rng>(states: usize, rng: &mut R) -> Vec<Check> {
    let l = Lattice::open(2, 2).unwrap();
    let mut idem: f64 = 0.0;
    let mut comm: f64 = 0.0;
    let mut norm: f64 = 0.0;
    let mut cases = 0;
    for _ in 0..states {
        let psi = WaveFunction::random(&l, 30, rng);
        let avs: Vec<_> = (0..l.n_vertices()).map(|s| psi.apply_vertex_projector(s)).collect();
        let bps: Vec<_> = (0..l.n_plaquettes()).map(|p| psi.apply_flux_free(p)).collect();
        for s in 0..l.n_vertices() {
            idem = idem.max(avs[s].apply_vertex_projector(s).max_abs_diff(&avs[s]));
            for g in Elem::ALL {
                norm = norm.max((psi.apply_vertex(g, s).norm() - 1.0).abs());
            }
            for t in 0..l.n_vertices() {
                comm = comm.max(avs[s].apply_vertex_projector(t).max_abs_diff(&avs[t].apply_vertex_projector(s)));
            }
            for p in 0..l.n_plaquettes() {
                comm = comm.max(avs[s].apply_flux_free(p).max_abs_diff(&bps[p].apply_vertex_projector(s)));
            }
            cases += 1;
        }
        for p in 0..l.n_plaquettes() {
            idem = idem.max(bps[p].apply_flux_free(p).max_abs_diff(&bps[p]));
        }
    }
    let census = census_1x1_torus();
    vec![
        Check::new("vertex and plaquette projectors are idempotent", idem, 1e-9, cases),
        Check::new("vertex and plaquette projectors commute", comm, 1e-9, cases),
        Check::new("A^g_s preserves the norm", norm, 1e-12, cases),
        Check::new("1x1 torus dense projectors", census.projector_defect, 1e-9, 1),
    ]
}

/// Exact census of the 1×1 torus.
pub fn census_checks() -> Vec<Check> {
    let c = census_1x1_torus();
    vec![
        Check::exact("1x1 torus has 8 ground states", c.ground_count == 8, 1),
        Check::exact("1x1 torus has 28 single-particle states", c.single_particle_count == 28, 1),
        Check::exact(
            "no single-particle state carries C2 flux",
            c.flux_counts[1].1 == 0 && c.entries.iter().all(|e| e.commutator.class() != crate::group::ClassLabel::C2),
            c.entries.len(),
        ),
    ]
}

pub fn suite<R: Rng>(rng: &mut R) -> Report {
    let mut r = Report::new("algebra");
    for c in group_checks()
        .into_iter()
        .chain(census_checks())
        .chain(drinfeld_checks(20, rng))
        .chain(projector_checks(5, rng))
    {
        r.push(c);
    }
    r
}
