//! Anyon-level model: fusion rules, the change of basis between elementary
//! ribbon labels and anyon labels, particles carrying flux and charge, and
//! the [2]-charge probe that reads total flux.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{q_rep, AnyonType, ClassLabel, Elem, Irrep, IrrepGroup};
use crate::linalg::{CMat, C64, ONE, ZERO};
use crate::ribbon::{AnyonLabel, MicroLabel};

// ---------------------------------------------------------------------------
// Fusion
// ---------------------------------------------------------------------------

/// Fusion rules a ⊗ b = ⊕ c of the eight anyon types. Every multiplicity is
/// zero or one for this theory.
#[derive(Clone, Debug)]
pub struct FusionTable {
    entries: Vec<Vec<Vec<AnyonType>>>,
}

impl FusionTable {
    pub fn s3() -> Self {
        use AnyonType::*;
        let upper: [(AnyonType, AnyonType, &[AnyonType]); 36] = [
            (A, A, &[A]),
            (A, B, &[B]),
            (A, C, &[C]),
            (A, D, &[D]),
            (A, E, &[E]),
            (A, F, &[F]),
            (A, G, &[G]),
            (A, H, &[H]),
            (B, B, &[A]),
            (B, C, &[C]),
            (B, D, &[E]),
            (B, E, &[D]),
            (B, F, &[F]),
            (B, G, &[G]),
            (B, H, &[H]),
            (C, C, &[A, B, C]),
            (C, D, &[D, E]),
            (C, E, &[D, E]),
            (C, F, &[G, H]),
            (C, G, &[F, H]),
            (C, H, &[F, G]),
            (D, D, &[A, C, F, G, H]),
            (D, E, &[B, C, F, G, H]),
            (D, F, &[D, E]),
            (D, G, &[D, E]),
            (D, H, &[D, E]),
            (E, E, &[A, C, F, G, H]),
            (E, F, &[D, E]),
            (E, G, &[D, E]),
            (E, H, &[D, E]),
            (F, F, &[A, B, F]),
            (F, G, &[C, H]),
            (F, H, &[C, G]),
            (G, G, &[A, B, G]),
            (G, H, &[C, F]),
            (H, H, &[A, B, H]),
        ];
        let mut entries = vec![vec![Vec::new(); 8]; 8];
        for (a, b, out) in upper {
            entries[a.index()][b.index()] = out.to_vec();
            entries[b.index()][a.index()] = out.to_vec();
        }
        FusionTable { entries }
    }

    pub fn fuse(&self, a: AnyonType, b: AnyonType) -> &[AnyonType] {
        &self.entries[a.index()][b.index()]
    }

    /// Multiplicity N_ab^c.
    pub fn multiplicity(&self, a: AnyonType, b: AnyonType, c: AnyonType) -> usize {
        self.fuse(a, b).iter().filter(|&&x| x == c).count()
    }
}

impl Default for FusionTable {
    fn default() -> Self {
        Self::s3()
    }
}

/// Fusion outcomes of a ⊗ b.
pub fn fuse(a: AnyonType, b: AnyonType) -> Vec<AnyonType> {
    FusionTable::s3().fuse(a, b).to_vec()
}

// ---------------------------------------------------------------------------
// Microscopic <-> anyon basis
// ---------------------------------------------------------------------------

/// Anyon basis of the class-`class` sector: one label per flavor v, irrep R of
/// the centralizer, indices j, j' and colour c'.
pub fn sector_basis(class: ClassLabel) -> Vec<AnyonLabel> {
    let mut out = Vec::new();
    for v in class.members() {
        for r in IrrepGroup::for_class(class).irreps() {
            for j in 0..r.dim() {
                for jp in 0..r.dim() {
                    for c in class.members() {
                        out.push(
                            AnyonLabel::new(class, r, v, j, Some(c), jp).expect("label built from its own class"),
                        );
                    }
                }
            }
        }
    }
    out
}

/// Microscopic basis |z, v⟩ of the sector: v ∈ class, z ∈ G.
pub fn sector_micro_basis(class: ClassLabel) -> Vec<MicroLabel> {
    class
        .members()
        .into_iter()
        .flat_map(|v| Elem::ALL.into_iter().map(move |z| MicroLabel::new(z, v)))
        .collect()
}

/// ⟨z, v | label⟩ = √(dim R / |Z|) Γ^R_{jj'}(n) for z = q_c n q̄_{c'} and v the
/// flavor; zero otherwise. `label` must carry a colour.
pub fn basis_coefficient(label: &AnyonLabel, micro: MicroLabel) -> C64 {
    let Some(color) = label.color else {
        return ZERO;
    };
    if micro.v != label.flavor {
        return ZERO;
    }
    let r = label.class.representative();
    let q_c = q_rep(label.flavor, r).expect("flavor lies in its class");
    let q_cp = q_rep(color, r).expect("colour lies in its class");
    let n = q_c.inv() * micro.z * q_cp;
    if !label.class.centralizer().contains(&n) {
        return ZERO;
    }
    let norm = (label.irrep.dim() as f64 / label.class.centralizer().len() as f64).sqrt();
    label.irrep.matrix(n).expect("n lies in the centralizer")[(label.j, label.j_prime)] * norm
}

/// Change-of-basis matrix of a sector: rows follow `sector_basis`, columns
/// follow `sector_micro_basis`.
pub fn sector_matrix(class: ClassLabel) -> CMat {
    let rows = sector_basis(class);
    let cols = sector_micro_basis(class);
    CMat::from_fn(rows.len(), cols.len(), |i, k| basis_coefficient(&rows[i], cols[k]).conj())
}

fn common_class<T>(terms: &[(T, C64)], class_of: impl Fn(&T) -> ClassLabel) -> Result<ClassLabel> {
    let mut class = None;
    for (t, _) in terms {
        let c = class_of(t);
        if class.is_some_and(|k| k != c) {
            return Err(Error::MixedClass);
        }
        class = Some(c);
    }
    class.ok_or_else(|| Error::InvalidArgument("empty sector input".into()))
}

/// Rewrites a superposition of microscopic labels |z, v⟩ in the anyon basis.
/// All terms must share the flux class of v.
pub fn micro_to_anyon(terms: &[(MicroLabel, C64)]) -> Result<Vec<(AnyonLabel, C64)>> {
    let class = common_class(terms, |m| m.v.class())?;
    Ok(sector_basis(class)
        .into_iter()
        .map(|l| {
            let amp = terms
                .iter()
                .map(|(m, c)| basis_coefficient(&l, *m).conj() * c)
                .sum();
            (l, amp)
        })
        .collect())
}

/// Inverse of [`micro_to_anyon`].
pub fn anyon_to_micro(terms: &[(AnyonLabel, C64)]) -> Result<Vec<(MicroLabel, C64)>> {
    let class = common_class(terms, |l| l.class)?;
    if terms.iter().any(|(l, _)| l.color.is_none()) {
        return Err(Error::InvalidArgument("anyon basis states need a colour".into()));
    }
    Ok(sector_micro_basis(class)
        .into_iter()
        .map(|m| {
            let amp = terms.iter().map(|(l, c)| basis_coefficient(l, m) * c).sum();
            (m, amp)
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Particles
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ParticleKind {
    /// Pure flux of a nontrivial class; internal label is the flux element.
    Flux(ClassLabel),
    /// Pure charge of an S3 irrep; internal label is the component index.
    Charge(Irrep),
    /// Flux with a one-dimensional centralizer charge; internal label is the
    /// flux element. Only winding phases are modelled.
    Dyon(ClassLabel, Irrep),
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Particle {
    pub kind: ParticleKind,
    pub slot: usize,
}

impl Particle {
    pub fn flux(class: ClassLabel, slot: usize) -> Self {
        Particle {
            kind: ParticleKind::Flux(class),
            slot,
        }
    }

    pub fn charge(irrep: Irrep, slot: usize) -> Self {
        Particle {
            kind: ParticleKind::Charge(irrep),
            slot,
        }
    }

    fn carries_flux(&self) -> bool {
        !matches!(self.kind, ParticleKind::Charge(_))
    }

    fn label_ok(&self, label: u8) -> bool {
        match self.kind {
            ParticleKind::Flux(c) | ParticleKind::Dyon(c, _) => {
                Elem::from_id(label).is_ok_and(|g| g.class() == c)
            }
            ParticleKind::Charge(r) => (label as usize) < r.dim(),
        }
    }
}

/// Superposition over the joint internal labels of an ordered particle list.
#[derive(Clone, Debug)]
pub struct AnyonState {
    particles: Vec<Particle>,
    terms: BTreeMap<Vec<u8>, C64>,
}

const PRUNE: f64 = 1e-12;

impl AnyonState {
    /// Builds and normalizes a state. Labels must match the particle kinds.
    pub fn new(particles: Vec<Particle>, terms: impl IntoIterator<Item = (Vec<u8>, C64)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u8>, C64> = BTreeMap::new();
        for (labels, amp) in terms {
            if labels.len() != particles.len() || !particles.iter().zip(&labels).all(|(p, &l)| p.label_ok(l)) {
                return Err(Error::InvalidArgument(format!("labels {labels:?} do not fit the particles")));
            }
            *map.entry(labels).or_insert(ZERO) += amp;
        }
        let mut s = AnyonState { particles, terms: map };
        s.prune();
        if s.norm() < PRUNE {
            return Err(Error::InvalidArgument("zero anyon state".into()));
        }
        s.normalize();
        Ok(s)
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, &C64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, labels: &[u8]) -> C64 {
        self.terms.get(labels).copied().unwrap_or(ZERO)
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn normalize(&mut self) {
        let n = self.norm();
        for c in self.terms.values_mut() {
            *c /= n;
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE);
    }

    pub fn inner(&self, other: &AnyonState) -> C64 {
        self.terms
            .iter()
            .map(|(k, c)| c.conj() * other.amplitude(k))
            .sum()
    }

    /// Ordered product of the flux labels of `group`; charges contribute e.
    pub fn total_flux(&self, labels: &[u8], group: &[usize]) -> Elem {
        Elem::product(group.iter().filter(|&&i| self.particles[i].carries_flux()).map(|&i| {
            Elem::from_id(labels[i]).expect("validated flux label")
        }))
    }

    /// Total flux of `group` if it is the same in every term.
    pub fn definite_total_flux(&self, group: &[usize]) -> Option<Elem> {
        let mut it = self.terms.keys().map(|k| self.total_flux(k, group));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    fn map_terms(&self, mut f: impl FnMut(&[u8]) -> Vec<(Vec<u8>, C64)>) -> AnyonState {
        let mut terms: BTreeMap<Vec<u8>, C64> = BTreeMap::new();
        for (k, c) in &self.terms {
            for (k2, a) in f(k) {
                *terms.entry(k2).or_insert(ZERO) += a * c;
            }
        }
        let mut s = AnyonState {
            particles: self.particles.clone(),
            terms,
        };
        s.prune();
        s
    }

    /// Winds a flux of value `w` once around particle `target`. A charge
    /// transforms by Γ^R(w); a dyon whose flux commutes with w picks up its
    /// centralizer phase.
    pub fn wind_flux_around_charge(&self, w: Elem, target: usize) -> Result<AnyonState> {
        let p = *self
            .particles
            .get(target)
            .ok_or_else(|| Error::InvalidArgument(format!("no particle {target}")))?;
        match p.kind {
            ParticleKind::Charge(r) => {
                if r.group() != IrrepGroup::S3 {
                    return Err(Error::InvalidArgument("pure charges carry S3 irreps".into()));
                }
                let m = r.matrix(w)?;
                Ok(self.map_terms(|k| {
                    (0..r.dim())
                        .map(|i| {
                            let mut k2 = k.to_vec();
                            k2[target] = i as u8;
                            (k2, m[(i, k[target] as usize)])
                        })
                        .collect()
                }))
            }
            ParticleKind::Dyon(_, r) => {
                let mut err = None;
                let out = self.map_terms(|k| {
                    let f = Elem::from_id(k[target]).expect("validated flux label");
                    if !f.commutes_with(w) {
                        err = Some(Error::InvalidArgument(format!(
                            "winding {w} around dyon flux {f} is outside the modelled dyon operations"
                        )));
                        return vec![];
                    }
                    // Phase of w in the irrep of the centralizer of the representative.
                    let q = q_rep(f, f.class().representative()).expect("same class");
                    let n = q.inv() * w * q;
                    vec![(k.to_vec(), r.matrix(n).expect("n in centralizer")[(0, 0)])]
                });
                match err {
                    Some(e) => Err(e),
                    None => Ok(out),
                }
            }
            ParticleKind::Flux(_) => Err(Error::InvalidArgument(format!("particle {target} carries no charge"))),
        }
    }

    /// Winds flux particle `mover` once around the flux particles `group`.
    /// Every participating flux is conjugated by the total flux T of the mover
    /// followed by the group: f ↦ T f T̄.
    pub fn braid_around(&self, mover: usize, group: &[usize]) -> Result<AnyonState> {
        let mut all = vec![mover];
        all.extend_from_slice(group);
        for &i in &all {
            let p = self
                .particles
                .get(i)
                .ok_or_else(|| Error::InvalidArgument(format!("no particle {i}")))?;
            if !matches!(p.kind, ParticleKind::Flux(_)) {
                return Err(Error::InvalidArgument(format!("particle {i} is not a pure flux")));
            }
        }
        if group.contains(&mover) {
            return Err(Error::InvalidArgument("mover cannot wind around itself".into()));
        }
        Ok(self.map_terms(|k| {
            let t = self.total_flux(k, &all);
            let mut k2 = k.to_vec();
            for &i in &all {
                let f = Elem::from_id(k[i]).expect("validated flux label");
                k2[i] = (t * f * t.inv()).id();
            }
            vec![(k2, ONE)]
        }))
    }
}

// ---------------------------------------------------------------------------
// [2]-charge probe
// ---------------------------------------------------------------------------

/// Outcome of fusing the two charges of a [2] singlet after one of them has
/// wound around a flux. Components use the basis in which Γ(μ) is diagonal;
/// the singlet is (|00⟩+|11⟩)/√2 with the second charge in the conjugate basis.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum ProbeOutcome {
    /// Fused back to the vacuum: no charge was transferred.
    Vacuum,
    /// The pair carries the sign charge [−].
    Minus,
    /// The pair carries [2]; the index is the remnant component.
    Doublet(u8),
}

impl ProbeOutcome {
    pub const ALL: [ProbeOutcome; 4] = [
        ProbeOutcome::Vacuum,
        ProbeOutcome::Minus,
        ProbeOutcome::Doublet(0),
        ProbeOutcome::Doublet(1),
    ];

    /// Probe-pair state for this outcome.
    fn vector(self) -> [C64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = |x: f64| C64::new(x, 0.0);
        match self {
            ProbeOutcome::Vacuum => [r(h), ZERO, ZERO, r(h)],
            ProbeOutcome::Minus => [r(h), ZERO, ZERO, r(-h)],
            ProbeOutcome::Doublet(0) => [ZERO, ONE, ZERO, ZERO],
            ProbeOutcome::Doublet(_) => [ZERO, ZERO, ONE, ZERO],
        }
    }
}

impl fmt::Display for ProbeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeOutcome::Vacuum => write!(f, "vacuum"),
            ProbeOutcome::Minus => write!(f, "minus"),
            ProbeOutcome::Doublet(0) => write!(f, "doublet+"),
            ProbeOutcome::Doublet(_) => write!(f, "doublet-"),
        }
    }
}

/// Amplitude ⟨o| (I ⊗ Γ(w)) |Φ⟩ of probe outcome `o` after one charge of the
/// [2] singlet |Φ⟩ winds around total flux `w`.
pub fn probe_amplitude(o: ProbeOutcome, w: Elem) -> C64 {
    let g = Irrep::S3Two.matrix(w).expect("S3 element");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // (I ⊗ Γ)|Φ⟩ = (1/√2) Σ_{j,k} Γ_{kj} |j, k⟩, index 2j + k.
    let mut wound = [ZERO; 4];
    for j in 0..2 {
        for k in 0..2 {
            wound[2 * j + k] = g[(k, j)] * h;
        }
    }
    o.vector().iter().zip(wound).map(|(a, b)| a.conj() * b).sum()
}

/// Prob(no charge transferred) = |χ^R(a) / dim R|² for a flux a of `class`.
pub fn charge_transfer_prob(r: Irrep, class: ClassLabel) -> Result<f64> {
    let a = class.representative();
    let chi = r.character(a)?;
    Ok((chi / r.dim() as f64).norm_sqr())
}

/// Vacuum probability obtained by simulating the winding: an R singlet
/// Σ_j |j⟩|j⟩/√d, one member transformed by Γ^R(a), overlapped with the
/// singlet again.
pub fn simulated_vacuum_prob(r: Irrep, a: Elem) -> Result<f64> {
    let d = r.dim();
    let m = r.matrix(a)?;
    let s = 1.0 / (d as f64).sqrt();
    let mut singlet = vec![ZERO; d * d];
    for j in 0..d {
        singlet[j * d + j] = C64::new(s, 0.0);
    }
    let mut wound = vec![ZERO; d * d];
    for j in 0..d {
        for k in 0..d {
            wound[j * d + k] = m[(k, j)] * s;
        }
    }
    let amp: C64 = singlet.iter().zip(&wound).map(|(a, b)| a.conj() * b).sum();
    Ok(amp.norm_sqr())
}

/// One entry of a measurement log.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRecord {
    pub round: usize,
    pub probe: String,
    pub outcome: String,
    pub p: f64,
}

/// Exact branches of one probe round on `group`: each outcome with its
/// probability and normalized post-state (None when the probability is 0).
pub fn flux_channel_branches(state: &AnyonState, group: &[usize]) -> Vec<(ProbeOutcome, f64, Option<AnyonState>)> {
    ProbeOutcome::ALL
        .into_iter()
        .map(|o| {
            let mut post = state.map_terms(|k| vec![(k.to_vec(), probe_amplitude(o, state.total_flux(k, group)))]);
            let p = post.norm().powi(2);
            if p < PRUNE {
                (o, 0.0, None)
            } else {
                post.normalize();
                (o, p, Some(post))
            }
        })
        .collect()
}

/// Runs `rounds` probe rounds on `group`, drawing each outcome from its exact
/// probability and updating the state by the matching Kraus operator.
pub fn measure_flux_channel<R: Rng>(
    state: &AnyonState,
    group: &[usize],
    rounds: usize,
    rng: &mut R,
) -> (Vec<ProbeRecord>, AnyonState) {
    let mut cur = state.clone();
    let mut log = Vec::with_capacity(rounds);
    let probe = format!("flux{group:?}");
    for round in 0..rounds {
        let branches = flux_channel_branches(&cur, group);
        let x: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = None;
        for (o, p, post) in &branches {
            acc += p;
            if post.is_some() && x < acc {
                chosen = Some((*o, *p, post.clone().expect("checked")));
                break;
            }
        }
        // Rounding can leave x just above the accumulated total.
        let (o, p, post) = chosen.unwrap_or_else(|| {
            let (o, p, post) = branches
                .iter()
                .rev()
                .find(|b| b.2.is_some())
                .expect("some outcome has weight");
            (*o, *p, post.clone().expect("checked"))
        });
        log.push(ProbeRecord {
            round,
            probe: probe.clone(),
            outcome: o.to_string(),
            p,
        });
        cur = post;
    }
    (log, cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{omega, I};

    #[test]
    fn fusion_examples() {
        use AnyonType::*;
        assert_eq!(fuse(C, C), vec![A, B, C]);
        assert_eq!(fuse(D, D), vec![A, C, F, G, H]);
        for x in AnyonType::ALL {
            assert_eq!(fuse(A, x), vec![x]);
        }
    }

    #[test]
    fn mumu_state() {
        let l = AnyonLabel::new(ClassLabel::C3, Irrep::Z3One, Elem::MU, 0, Some(Elem::MU), 0).unwrap();
        let micro = anyon_to_micro(&[(l, ONE)]).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for (m, c) in micro {
            let expect = if m.v == Elem::MU && [Elem::E, Elem::MU, Elem::MU_BAR].contains(&m.z) {
                s
            } else {
                0.0
            };
            assert!((c - C64::new(expect, 0.0)).norm() < 1e-12, "{m:?} {c}");
        }
    }

    #[test]
    fn omega_weighted_state() {
        let l = AnyonLabel::new(ClassLabel::C3, Irrep::Z3Omega, Elem::MU, 0, Some(Elem::MU), 0).unwrap();
        let micro: BTreeMap<_, _> = anyon_to_micro(&[(l, ONE)])
            .unwrap()
            .into_iter()
            .map(|(m, c)| ((m.z.id(), m.v.id()), c))
            .collect();
        let s = 1.0 / 3f64.sqrt();
        let mu = Elem::MU.id();
        assert!((micro[&(Elem::E.id(), mu)] - s).norm() < 1e-12);
        assert!((micro[&(Elem::MU.id(), mu)] - omega() * s).norm() < 1e-12);
        assert!((micro[&(Elem::MU_BAR.id(), mu)] - omega().conj() * s).norm() < 1e-12);
    }

    #[test]
    fn mixed_class_rejected() {
        let t = [
            (MicroLabel::new(Elem::E, Elem::MU), ONE),
            (MicroLabel::new(Elem::E, Elem::SIGMA), ONE),
        ];
        assert_eq!(micro_to_anyon(&t).unwrap_err(), Error::MixedClass);
    }

    #[test]
    fn winding_phases() {
        let s = AnyonState::new(vec![Particle::charge(Irrep::S3Two, 0)], [(vec![0], ONE)]).unwrap();
        let w = s.wind_flux_around_charge(Elem::MU, 0).unwrap();
        assert!((w.amplitude(&[0]) - omega()).norm() < 1e-12);
        let w = s.wind_flux_around_charge(Elem::SIGMA, 0).unwrap();
        assert!((w.amplitude(&[1]) - ONE).norm() < 1e-12);
        let w = s.wind_flux_around_charge(Elem::E, 0).unwrap();
        assert!((w.inner(&s) - ONE).norm() < 1e-12);
        // μσ|2+⟩ = ω*|2−⟩
        let w = s.wind_flux_around_charge(Elem::MU_SIGMA, 0).unwrap();
        assert!((w.amplitude(&[1]) - omega().conj()).norm() < 1e-12);
    }

    #[test]
    fn probe_probabilities() {
        let p = |o, w| probe_amplitude(o, w).norm_sqr();
        assert!((p(ProbeOutcome::Vacuum, Elem::MU) - 0.25).abs() < 1e-12);
        assert!((p(ProbeOutcome::Minus, Elem::MU) - 0.75).abs() < 1e-12);
        assert!((p(ProbeOutcome::Vacuum, Elem::E) - 1.0).abs() < 1e-12);
        assert!(p(ProbeOutcome::Vacuum, Elem::SIGMA) < 1e-12);
        assert!((p(ProbeOutcome::Doublet(0), Elem::SIGMA) - 0.5).abs() < 1e-12);
        // Opposite C3 fluxes give opposite [−] phases.
        let a = probe_amplitude(ProbeOutcome::Minus, Elem::MU);
        let b = probe_amplitude(ProbeOutcome::Minus, Elem::MU_BAR);
        assert!((a + b).norm() < 1e-12);
        assert!((a - I * (0.75f64).sqrt()).norm() < 1e-12);
    }

    #[test]
    fn transfer_examples() {
        assert!((charge_transfer_prob(Irrep::S3Two, ClassLabel::C3).unwrap() - 0.25).abs() < 1e-12);
        assert!(charge_transfer_prob(Irrep::S3Two, ClassLabel::C2).unwrap() < 1e-12);
        for r in IrrepGroup::S3.irreps() {
            assert!((charge_transfer_prob(r, ClassLabel::C1).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
