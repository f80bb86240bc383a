//! Logical qutrit states prepared on the lattice by C2 flux-basis ribbons
//! and read back at the anyon level.
//!
//! Two ribbons t1, t2 leave a common origin site. F^{[C2];w}, the C2 anyon
//! ribbon with flavor w, trivial centralizer charge and every colour summed,
//! is applied along both; the fluxes meeting at the origin cancel and the
//! ends carry a flux pair. |a⟩ uses w = μ^a σ, and |k~⟩ is the ω-weighted
//! superposition of the three ribbon pairs. The readout sorts configurations
//! by the holonomies of the two end plaquettes measured from the origin.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ClassLabel, Elem, IrrepGroup};
use crate::lattice::{Lattice, PlaquetteId, RibbonBuilder, RibbonPath, Site, SignedEdge, VertexId};
use crate::linalg::{omega_pow, C64, ZERO};
use crate::register::{decode, dual, encode, ket, Qutrit};
use crate::ribbon::{apply_anyon_ribbon, AnyonLabel};
use crate::state::{edge_value, path_product, vacuum, violations, Violation, WaveFunction};

/// Where the pair is created and how its fluxes are read.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub lattice: Lattice,
    pub origin: Site,
    pub t1: RibbonPath,
    pub t2: RibbonPath,
    /// End plaquettes of t1 and t2.
    pub ends: [PlaquetteId; 2],
    /// Walks from the origin vertex to the corner each end holonomy is read
    /// from.
    pub walks: [(Vec<SignedEdge>, VertexId); 2],
}

impl Geometry {
    /// 3×1 open strip with the origin on the middle plaquette. t1 crosses
    /// into the left plaquette; t2 steps along the bottom edge and crosses
    /// into the right one.
    pub fn strip() -> Result<Geometry> {
        let l = Lattice::open(3, 1)?;
        let bad = || Error::InvalidLattice("3×1 strip is missing an element".into());
        let origin_v = l.vertex(1, 0).ok_or_else(bad)?;
        let right_v = l.vertex(2, 0).ok_or_else(bad)?;
        let [p0, p1, p2] = [0, 1, 2].map(|i| l.plaquette(i, 0));
        let (p0, p1, p2) = (p0.ok_or_else(bad)?, p1.ok_or_else(bad)?, p2.ok_or_else(bad)?);
        let bottom = l.h_edge(1, 0).ok_or_else(bad)?;
        let origin = Site::new(origin_v, p1);
        let t1 = RibbonBuilder::new(&l, origin)
            .dual(l.v_edge(1, 0).ok_or_else(bad)?)?
            .build()?;
        let t2 = RibbonBuilder::new(&l, origin)
            .direct(bottom)?
            .dual(l.v_edge(2, 0).ok_or_else(bad)?)?
            .build()?;
        Ok(Geometry {
            origin,
            t1,
            t2,
            ends: [p0, p2],
            walks: [(Vec::new(), origin_v), (vec![(bottom, 1)], right_v)],
            lattice: l,
        })
    }

    /// Holonomies of the two end plaquettes transported to the origin:
    /// T h T̄ with T the walk product and h the loop read at its end.
    pub fn flux_pair(&self, config: &[u8]) -> Result<(Elem, Elem)> {
        let read = |k: usize| -> Result<Elem> {
            let (walk, corner) = &self.walks[k];
            let t = path_product(config, walk);
            let h = WaveFunction::plaquette_holonomy(&self.lattice, config, self.ends[k], *corner)?;
            Ok(t * h * t.inv())
        };
        Ok((read(0)?, read(1)?))
    }
}

/// F^{[C2];w}: flavor w, trivial Z2 charge, summed over colours.
pub fn flux_basis_label(w: Elem) -> Result<AnyonLabel> {
    let trivial = IrrepGroup::for_class(ClassLabel::C2).irreps()[0];
    AnyonLabel::new(ClassLabel::C2, trivial, w, 0, None, 0)
}

/// The three ribbon-pair states F^{[C2];w_a}(t1) F^{[C2];w_a}(t2) |GS⟩,
/// unnormalized, on a fixed geometry and ground state.
#[derive(Clone, Debug)]
pub struct Preparation {
    pub geometry: Geometry,
    pub pairs: [WaveFunction; 3],
    /// Normalized |0⟩, |1⟩, |2⟩.
    basis: [WaveFunction; 3],
}

impl Preparation {
    pub fn new(geometry: Geometry) -> Result<Preparation> {
        let gs = vacuum(&geometry.lattice);
        Self::from_ground_state(geometry, &gs)
    }

    pub fn from_ground_state(geometry: Geometry, gs: &WaveFunction) -> Result<Preparation> {
        let mut pairs = Vec::with_capacity(3);
        for a in 0..3 {
            let label = flux_basis_label(encode(a))?;
            let second = apply_anyon_ribbon(&label, &geometry.t2, gs);
            pairs.push(apply_anyon_ribbon(&label, &geometry.t1, &second));
        }
        let pairs: [WaveFunction; 3] = pairs.try_into().expect("three states");
        let basis = std::array::from_fn(|a| pairs[a].clone().normalized());
        Ok(Preparation { geometry, pairs, basis })
    }

    /// Lattice state prescribed for Σ_a coeffs[a] |a⟩, normalized.
    pub fn prescribe(&self, coeffs: &Qutrit) -> WaveFunction {
        let l = &self.geometry.lattice;
        WaveFunction::sum(l, coeffs.iter().zip(&self.pairs).map(|(c, w)| (*c, w))).normalized()
    }

    pub fn computational(&self, a: usize) -> WaveFunction {
        self.basis[a].clone()
    }

    /// (1/√3) Σ_a ω^{ka} F_a(t1) F_a(t2) |GS⟩.
    pub fn dual(&self, k: usize) -> WaveFunction {
        let c = [0, 1, 2].map(|a| omega_pow((k * a) as i64));
        self.prescribe(&c)
    }

    /// Anyon-level readout of a lattice state in the computational basis.
    pub fn readout(&self, psi: &WaveFunction) -> Result<Readout> {
        let n2 = psi.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::InvalidArgument("cannot read out the zero state".into()));
        }
        let mut overlaps = [ZERO; 3];
        let mut sector_weights = [0.0; 3];
        let mut outside = 0.0;
        for (k, c) in psi.iter() {
            let (w1, w2) = self.geometry.flux_pair(k)?;
            match (decode(w1), decode(w2)) {
                (Some(a), Some(b)) if a == b => {
                    sector_weights[a] += c.norm_sqr() / n2;
                    overlaps[a] += self.basis[a].amplitude(k).conj() * c;
                }
                _ => outside += c.norm_sqr(),
            }
        }
        let amplitudes = overlaps.map(|o| o / n2.sqrt());
        Ok(Readout {
            amplitudes,
            sector_weights,
            outside_weight: outside / n2,
        })
    }
}

/// Qutrit amplitudes recovered from a lattice state.
#[derive(Clone, Debug, Serialize)]
pub struct Readout {
    #[serde(serialize_with = "serialize_amps")]
    pub amplitudes: [C64; 3],
    /// Weight in each holonomy sector (w_a, w_a).
    pub sector_weights: [f64; 3],
    /// Weight whose end fluxes are not an equal C2 pair.
    pub outside_weight: f64,
}

fn serialize_amps<S: serde::Serializer>(a: &[C64; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for c in a {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

impl Readout {
    /// 1 − |⟨target|readout⟩|².
    pub fn fidelity_deficit(&self, target: &Qutrit) -> f64 {
        let ov: C64 = target.iter().zip(&self.amplitudes).map(|(t, c)| t.conj() * c).sum();
        1.0 - ov.norm_sqr()
    }
}

/// Global gauge transformation Π_s A^g_s. Every edge meets one vertex at
/// each end, so the product conjugates each edge value by g.
pub fn global_gauge(psi: &WaveFunction, g: Elem) -> WaveFunction {
    let gi = g.inv();
    psi.map_terms(|k| {
        let c = (0..k.len()).map(|e| (g * edge_value(k, e) * gi).id()).collect();
        Some((c, crate::linalg::ONE))
    })
}

/// Summary of one prepared logical state.
#[derive(Clone, Debug, Serialize)]
pub struct PreparedState {
    pub name: String,
    pub readout: Readout,
    pub fidelity_deficit: f64,
    pub violations: Vec<Violation>,
}

/// Prepares |0⟩, |1⟩, |2⟩, |0~⟩, |1~⟩, |2~⟩ and reads each one back.
pub fn prepare_all(prep: &Preparation, tol: f64) -> Result<Vec<PreparedState>> {
    let mut out = Vec::new();
    let targets = (0..3)
        .map(|a| (format!("{a}"), prep.computational(a), ket(a)))
        .chain((0..3).map(|k| (format!("{k}~"), prep.dual(k), dual(k))));
    for (name, psi, target) in targets {
        let readout = prep.readout(&psi)?;
        out.push(PreparedState {
            name,
            fidelity_deficit: readout.fidelity_deficit(&target),
            violations: violations(&psi, tol)?,
            readout,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_geometry() {
        let g = Geometry::strip().unwrap();
        assert_eq!(g.t1.start(), g.origin);
        assert_eq!(g.t2.start(), g.origin);
        assert_eq!(g.t1.end().plaquette, g.ends[0]);
        assert_eq!(g.t2.end().plaquette, g.ends[1]);
    }

    #[test]
    fn global_gauge_matches_vertex_product() {
        let g = Geometry::strip().unwrap();
        let prep = Preparation::new(g).unwrap();
        let psi = prep.computational(1);
        let slow = (0..psi.lattice().n_vertices()).fold(psi.clone(), |acc, s| acc.apply_vertex(Elem::SIGMA, s));
        assert!(global_gauge(&psi, Elem::SIGMA).max_abs_diff(&slow) < 1e-12);
    }

    #[test]
    fn ground_state_reads_as_no_pair() {
        let g = Geometry::strip().unwrap();
        let gs = vacuum(&g.lattice);
        let (k, _) = gs.iter().next().unwrap();
        assert_eq!(g.flux_pair(k).unwrap(), (Elem::E, Elem::E));
    }
}
