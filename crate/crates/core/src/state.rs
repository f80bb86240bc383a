//! Sparse wavefunctions over group-valued edge configurations, the vertex and
//! plaquette operators, ground states, the 1×1 torus census and syndrome
//! extraction.

use crate::error::{Error, Result};
use crate::group::{ClassLabel, Elem};
use crate::lattice::{EdgeId, Lattice, PlaquetteId, SignedEdge, Site, VertexId};
use crate::linalg::{CMat, C64, ONE, ZERO};
use rand::Rng;
use rustc_hash::FxHashMap;

/// Amplitudes below this modulus are dropped after every operator.
pub const PRUNE: f64 = 1e-12;

/// Edge configuration: element id per edge, indexed by edge id.
pub type Config = Vec<u8>;

type Map = FxHashMap<Config, C64>;

/// Value of an edge in a configuration.
pub fn edge_value(config: &[u8], e: usize) -> Elem {
    Elem::from_id(config[e]).expect("configuration holds a valid element id")
}

/// Ordered product of signed edges, inverting steps walked against the edge
/// orientation.
pub fn path_product(config: &[u8], walk: &[SignedEdge]) -> Elem {
    walk.iter().fold(Elem::E, |acc, &(e, s)| {
        let x = edge_value(config, e);
        acc * if s >= 0 { x } else { x.inv() }
    })
}

#[derive(Clone, Debug)]
pub struct WaveFunction {
    lattice: Lattice,
    amps: Map,
}

impl PartialEq for WaveFunction {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.max_abs_diff(other) == 0.0
    }
}

impl WaveFunction {
    pub fn zero(lattice: &Lattice) -> Self {
        WaveFunction {
            lattice: *lattice,
            amps: Map::default(),
        }
    }

    /// The basis state |config⟩.
    pub fn basis(lattice: &Lattice, config: &[Elem]) -> Result<Self> {
        if config.len() != lattice.n_edges() {
            return Err(Error::InvalidArgument(format!(
                "configuration has {} edges, lattice has {}",
                config.len(),
                lattice.n_edges()
            )));
        }
        let mut wf = Self::zero(lattice);
        wf.amps.insert(config.iter().map(|g| g.id()).collect(), ONE);
        Ok(wf)
    }

    /// All edges set to e.
    pub fn trivial(lattice: &Lattice) -> Self {
        Self::basis(lattice, &vec![Elem::E; lattice.n_edges()]).unwrap()
    }

    pub fn from_terms(lattice: &Lattice, terms: impl IntoIterator<Item = (Config, C64)>) -> Self {
        let mut wf = Self::zero(lattice);
        for (k, a) in terms {
            assert_eq!(k.len(), lattice.n_edges());
            *wf.amps.entry(k).or_insert(ZERO) += a;
        }
        wf.prune();
        wf
    }

    /// Random normalized superposition of `terms` random configurations.
    pub fn random<R: Rng>(lattice: &Lattice, terms: usize, rng: &mut R) -> Self {
        let mut wf = Self::zero(lattice);
        for _ in 0..terms {
            let cfg: Config = (0..lattice.n_edges()).map(|_| rng.gen_range(0..6u8)).collect();
            let a = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            *wf.amps.entry(cfg).or_insert(ZERO) += a;
        }
        wf.normalize();
        wf
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, config: &[u8]) -> C64 {
        self.amps.get(config).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Config, &C64)> {
        self.amps.iter()
    }

    /// Terms sorted by configuration key.
    pub fn sorted_terms(&self) -> Vec<(&Config, C64)> {
        let mut v: Vec<_> = self.amps.iter().map(|(k, a)| (k, *a)).collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn norm_sqr(&self) -> f64 {
        // fold from +0.0: an empty f64 sum is −0.0
        self.amps.values().fold(0.0, |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in self.amps.values_mut() {
                *a /= n;
            }
        }
        self.prune();
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= PRUNE);
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for a in out.amps.values_mut() {
            *a *= s;
        }
        out.prune();
        out
    }

    /// `self + s · other`.
    pub fn add_scaled(&mut self, other: &WaveFunction, s: C64) {
        for (k, a) in &other.amps {
            *self.amps.entry(k.clone()).or_insert(ZERO) += s * a;
        }
        self.prune();
    }

    pub fn sum<'a>(lattice: &Lattice, terms: impl IntoIterator<Item = (C64, &'a WaveFunction)>) -> Self {
        let mut out = Self::zero(lattice);
        for (s, wf) in terms {
            for (k, a) in &wf.amps {
                *out.amps.entry(k.clone()).or_insert(ZERO) += s * a;
            }
        }
        out.prune();
        out
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &WaveFunction) -> C64 {
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut s = ZERO;
        for (k, a) in &small.amps {
            if let Some(b) = large.amps.get(k) {
                s += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        s
    }

    /// Largest entrywise difference over the union of supports.
    /// ‖self − other‖.
    pub fn distance(&self, other: &WaveFunction) -> f64 {
        let mut d = self.clone();
        d.add_scaled(other, -ONE);
        d.norm()
    }

    pub fn max_abs_diff(&self, other: &WaveFunction) -> f64 {
        let mut m: f64 = 0.0;
        for (k, a) in &self.amps {
            m = m.max((a - other.amplitude(k)).norm());
        }
        for (k, b) in &other.amps {
            if !self.amps.contains_key(k) {
                m = m.max(b.norm());
            }
        }
        m
    }

    /// Apply a map on basis configurations: each term becomes `f(config)`
    /// weighted by the returned factor (a permutation-with-weights operator).
    pub fn map_terms(&self, mut f: impl FnMut(&[u8]) -> Option<(Config, C64)>) -> Self {
        let mut out = Self::zero(&self.lattice);
        for (k, a) in &self.amps {
            if let Some((k2, w)) = f(k) {
                *out.amps.entry(k2).or_insert(ZERO) += w * a;
            }
        }
        out.prune();
        out
    }

    /// Keep only terms satisfying a predicate.
    pub fn filter(&self, mut keep: impl FnMut(&[u8]) -> bool) -> Self {
        let mut out = Self::zero(&self.lattice);
        for (k, a) in &self.amps {
            if keep(k) {
                out.amps.insert(k.clone(), *a);
            }
        }
        out
    }

    /// Vertex operator A^g_s: out-edges become g·x, in-edges x·ḡ.
    pub fn apply_vertex(&self, g: Elem, s: VertexId) -> Self {
        let star = self.lattice.vertex_star(s);
        let gi = g.inv();
        self.map_terms(|k| {
            let mut c = k.to_vec();
            for &(e, out) in &star {
                let x = edge_value(&c, e);
                c[e] = if out { (g * x).id() } else { (x * gi).id() };
            }
            Some((c, ONE))
        })
    }

    /// Plaquette operator B^h_p based at `s`: keeps configurations whose
    /// counterclockwise boundary product from `s` equals h̄.
    pub fn apply_plaquette(&self, h: Elem, p: PlaquetteId, s: VertexId) -> Result<Self> {
        let walk = self.lattice.plaquette_loop(p, s)?;
        let target = h.inv();
        Ok(self.filter(|k| path_product(k, &walk) == target))
    }

    /// A_s = (1/|G|) Σ_g A^g_s.
    pub fn apply_vertex_projector(&self, s: VertexId) -> Self {
        let mut out = Self::zero(&self.lattice);
        for g in Elem::ALL {
            let t = self.apply_vertex(g, s);
            for (k, a) in t.amps {
                *out.amps.entry(k).or_insert(ZERO) += a / 6.0;
            }
        }
        out.prune();
        out
    }

    /// B^e_p: zero-flux projector (independent of the base vertex).
    pub fn apply_flux_free(&self, p: PlaquetteId) -> Self {
        let s = self.lattice.plaquette_corners(p)[0];
        self.apply_plaquette(Elem::E, p, s).unwrap()
    }

    /// Holonomy around plaquette `p` from corner `s` in configuration `k`.
    pub fn plaquette_holonomy(lattice: &Lattice, k: &[u8], p: PlaquetteId, s: VertexId) -> Result<Elem> {
        Ok(path_product(k, &lattice.plaquette_loop(p, s)?))
    }

    /// ⟨A_s⟩ / ⟨ψ|ψ⟩.
    pub fn vertex_expectation(&self, s: VertexId) -> f64 {
        let n = self.norm_sqr();
        if n == 0.0 {
            return 0.0;
        }
        // (1/|G|) Σ_g ⟨ψ|A^g ψ⟩. A^g only moves the star edges, so terms are
        // grouped by their other edges and matched within each group.
        let mut edges: Vec<(EdgeId, bool, bool)> = Vec::new();
        for (e, out) in self.lattice.vertex_star(s) {
            match edges.iter_mut().find(|x| x.0 == e) {
                // a self-loop edge is both outgoing and incoming
                Some(x) => {
                    x.1 |= out;
                    x.2 |= !out;
                }
                None => edges.push((e, out, !out)),
            }
        }
        let states = 6usize.pow(edges.len() as u32);
        let digits = |mut code: usize| {
            edges
                .iter()
                .map(|_| {
                    let d = code % 6;
                    code /= 6;
                    Elem::ALL[d]
                })
                .collect::<Vec<_>>()
        };
        let act: Vec<Vec<usize>> = Elem::ALL
            .iter()
            .map(|&g| {
                (0..states)
                    .map(|code| {
                        digits(code).iter().zip(&edges).rev().fold(0, |acc, (&x, &(_, out, inc))| {
                            let left = if out { g } else { Elem::E };
                            let right = if inc { g.inv() } else { Elem::E };
                            acc * 6 + (left * x * right).id() as usize
                        })
                    })
                    .collect()
            })
            .collect();
        let mut groups: FxHashMap<Config, Vec<(usize, C64)>> = FxHashMap::default();
        for (k, a) in &self.amps {
            let mut rest = k.clone();
            let mut code = 0;
            for &(e, _, _) in edges.iter().rev() {
                code = code * 6 + k[e] as usize;
                rest[e] = 0;
            }
            groups.entry(rest).or_default().push((code, *a));
        }
        let mut total = ZERO;
        for entries in groups.values_mut() {
            entries.sort_unstable_by_key(|t| t.0);
            for table in &act {
                for &(code, a) in entries.iter() {
                    if let Ok(i) = entries.binary_search_by_key(&table[code], |t| t.0) {
                        total += entries[i].1.conj() * a;
                    }
                }
            }
        }
        total.re / (Elem::ALL.len() as f64 * n)
    }

    /// ⟨B^e_p⟩ / ⟨ψ|ψ⟩.
    pub fn flux_free_weight(&self, p: PlaquetteId) -> f64 {
        let n = self.norm_sqr();
        if n == 0.0 {
            return 0.0;
        }
        let s = self.lattice.plaquette_corners(p)[0];
        let walk = self.lattice.plaquette_loop(p, s).expect("corner of its own plaquette");
        let free = self
            .amps
            .iter()
            .filter(|(k, _)| path_product(k, &walk) == Elem::E)
            .fold(0.0, |acc, (_, a)| acc + a.norm_sqr());
        free / n
    }

    /// One line per term: `<re> <im> <edge tokens>`, sorted by configuration.
    pub fn to_dump(&self) -> String {
        let mut s = String::new();
        for (k, a) in self.sorted_terms() {
            s.push_str(&format!("{:e} {:e}", a.re, a.im));
            for &id in k {
                s.push(' ');
                s.push_str(Elem::from_id(id).unwrap().token());
            }
            s.push('\n');
        }
        s
    }

    pub fn from_dump(lattice: &Lattice, text: &str) -> Result<Self> {
        let mut wf = Self::zero(lattice);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.len() != 2 + lattice.n_edges() {
                return Err(Error::parse(
                    line,
                    format!("expected 2 + {} fields, found {}", lattice.n_edges(), toks.len()),
                ));
            }
            let re: f64 = toks[0].parse().map_err(|_| Error::parse(line, "bad real part"))?;
            let im: f64 = toks[1].parse().map_err(|_| Error::parse(line, "bad imaginary part"))?;
            let cfg = toks[2..]
                .iter()
                .map(|t| t.parse::<Elem>().map(|g| g.id()).map_err(|e| Error::parse(line, e.to_string())))
                .collect::<Result<Config>>()?;
            if wf.amps.insert(cfg, C64::new(re, im)).is_some() {
                return Err(Error::parse(line, "duplicate configuration"));
            }
        }
        Ok(wf)
    }
}

/// Normalized ground state obtained by projecting a flux-free reference
/// configuration with every vertex projector.
pub fn ground_state(lattice: &Lattice, rep: &[Elem]) -> Result<WaveFunction> {
    let wf = WaveFunction::basis(lattice, rep)?;
    let key: Config = rep.iter().map(|g| g.id()).collect();
    for p in 0..lattice.n_plaquettes() {
        let s = lattice.plaquette_corners(p)[0];
        if WaveFunction::plaquette_holonomy(lattice, &key, p, s)? != Elem::E {
            return Err(Error::FluxInReference(p));
        }
    }
    let mut out = wf;
    for s in 0..lattice.n_vertices() {
        out = out.apply_vertex_projector(s);
    }
    Ok(out.normalized())
}

/// Ground state built from the all-identity configuration.
pub fn vacuum(lattice: &Lattice) -> WaveFunction {
    ground_state(lattice, &vec![Elem::E; lattice.n_edges()]).unwrap()
}

/// Π_{s∈vertices} A_s |e…e⟩, normalized: the vacuum restricted to a set of
/// vertices. Vertices outside the set are left unsymmetrized, which keeps
/// the state small on lattices whose full ground state is out of reach.
pub fn local_vacuum(lattice: &Lattice, vertices: &[VertexId]) -> WaveFunction {
    let mut psi = WaveFunction::trivial(lattice);
    for &s in vertices {
        psi = psi.apply_vertex_projector(s);
    }
    psi.normalized()
}

/// One basis state of the 1×1 torus: the horizontal and vertical edge values.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub horizontal: Elem,
    pub vertical: Elem,
    /// Plaquette holonomy g1 g2 ḡ1 ḡ2.
    pub commutator: Elem,
}

/// Sector decomposition of the 36-dimensional 1×1 torus.
#[derive(Clone, Debug)]
pub struct Census {
    pub dimension: usize,
    pub ground_count: usize,
    pub single_particle_count: usize,
    /// Excited states without flux (pure charges).
    pub charge_only_count: usize,
    /// Excited states with flux, by flux class.
    pub flux_counts: [(ClassLabel, usize); 3],
    pub entries: Vec<CensusEntry>,
    /// Largest deviation of the projectors from P² = P and [P, Q] = 0.
    pub projector_defect: f64,
}

fn dense_1x1_ops() -> (CMat, CMat) {
    let idx = |h: Elem, v: Elem| 6 * h.id() as usize + v.id() as usize;
    let mut a = CMat::zeros(36, 36);
    let mut b = CMat::zeros(36, 36);
    for h in Elem::ALL {
        for v in Elem::ALL {
            for g in Elem::ALL {
                // the single vertex is tail and head of both edges
                let (h2, v2) = (g.conjugate(h), g.conjugate(v));
                a[(idx(h2, v2), idx(h, v))] += C64::new(1.0 / 6.0, 0.0);
            }
            if Elem::commutator(h, v) == Elem::E {
                b[(idx(h, v), idx(h, v))] = ONE;
            }
        }
    }
    (a, b)
}

/// Census of the 1×1 torus from dense projectors.
pub fn census_1x1_torus() -> Census {
    let (a, b) = dense_1x1_ops();
    let ab = &a * &b;
    let ba = &b * &a;
    let defect = [
        (&a * &a).max_abs_diff(&a),
        (&b * &b).max_abs_diff(&b),
        ab.max_abs_diff(&ba),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let rank = |m: &CMat| m.trace().re.round() as usize;
    let ground = rank(&ab);
    let flux_free = rank(&b);
    let mut entries = Vec::new();
    let mut flux_counts = [(ClassLabel::C1, 0), (ClassLabel::C2, 0), (ClassLabel::C3, 0)];
    for h in Elem::ALL {
        for v in Elem::ALL {
            let c = Elem::commutator(h, v);
            entries.push(CensusEntry {
                horizontal: h,
                vertical: v,
                commutator: c,
            });
            if c != Elem::E {
                flux_counts[c.class().index()].1 += 1;
            }
        }
    }
    Census {
        dimension: 36,
        ground_count: ground,
        single_particle_count: 36 - ground,
        charge_only_count: flux_free - ground,
        flux_counts,
        entries,
        projector_defect: defect,
    }
}

/// One representative flux-free configuration (horizontal, vertical) per
/// ground state of the 1×1 torus: commuting pairs up to simultaneous
/// conjugation, smallest pair of each orbit.
pub fn torus_1x1_representatives() -> Vec<(Elem, Elem)> {
    let mut reps: Vec<(Elem, Elem)> = Vec::new();
    for h in Elem::ALL {
        for v in Elem::ALL {
            if !h.commutes_with(v) {
                continue;
            }
            let in_orbit = reps
                .iter()
                .any(|&(h0, v0)| Elem::ALL.iter().any(|q| q.conjugate(h0) == h && q.conjugate(v0) == v));
            if !in_orbit {
                reps.push((h, v));
            }
        }
    }
    reps
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    /// Plaquette with nonzero flux.
    Flux,
    /// Vertex where A_s is not satisfied.
    Charge,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Vertex id for charges, plaquette id for fluxes.
    pub location: usize,
}

/// Every plaquette carrying flux and every vertex where the vertex projector
/// is not satisfied.
///
/// A plaquette must be either flux-free or fluxed in every term. A vertex
/// must be an A_s eigenstate unless one of its plaquettes carries flux, in
/// which case the local flux label can leave it partially satisfied and it is
/// reported as a violation.
pub fn violations(psi: &WaveFunction, tol: f64) -> Result<Vec<Violation>> {
    let l = psi.lattice();
    let mut out = Vec::new();
    let mut fluxed = vec![false; l.n_plaquettes()];
    for p in 0..l.n_plaquettes() {
        let w = psi.flux_free_weight(p);
        if w < tol {
            fluxed[p] = true;
            out.push(Violation {
                kind: ViolationKind::Flux,
                location: p,
            });
        } else if w < 1.0 - tol {
            return Err(Error::MixedSyndrome(format!(
                "plaquette {p} is flux-free with weight {w:.6}"
            )));
        }
    }
    for s in 0..l.n_vertices() {
        let a = psi.vertex_expectation(s);
        if a < 1.0 - tol {
            let near_flux = l.vertex_plaquettes(s).iter().any(|&p| fluxed[p]);
            if a > tol && !near_flux {
                return Err(Error::MixedSyndrome(format!(
                    "vertex {s} has vertex-projector weight {a:.6}"
                )));
            }
            out.push(Violation {
                kind: ViolationKind::Charge,
                location: s,
            });
        }
    }
    Ok(out)
}

/// Projector onto configurations whose holonomy around the site's plaquette,
/// read from the site's vertex, equals `flux`.
pub fn project_local_flux(psi: &WaveFunction, site: Site, flux: Elem) -> Result<WaveFunction> {
    psi.apply_plaquette(flux.inv(), site.plaquette, site.vertex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn vertex_operator_matches_hand_computation() {
        let l = Lattice::open(2, 2).unwrap();
        let s = l.vertex(1, 1).unwrap();
        let mut cfg = vec![Elem::E; l.n_edges()];
        let xs = [Elem::MU, Elem::SIGMA, Elem::MU_SIGMA, Elem::MU_BAR];
        let edges = [
            l.h_edge(1, 1).unwrap(), // out
            l.v_edge(1, 1).unwrap(), // out
            l.h_edge(0, 1).unwrap(), // in
            l.v_edge(1, 0).unwrap(), // in
        ];
        for (e, x) in edges.iter().zip(xs) {
            cfg[*e] = x;
        }
        let g = Elem::MU_BAR_SIGMA;
        let out = WaveFunction::basis(&l, &cfg).unwrap().apply_vertex(g, s);
        let mut expected = cfg.clone();
        expected[edges[0]] = g * xs[0];
        expected[edges[1]] = g * xs[1];
        expected[edges[2]] = xs[2] * g.inv();
        expected[edges[3]] = xs[3] * g.inv();
        assert_eq!(out, WaveFunction::basis(&l, &expected).unwrap());
    }

    #[test]
    fn vertex_identity_and_unitarity() {
        let l = Lattice::open(2, 2).unwrap();
        let psi = WaveFunction::random(&l, 30, &mut rng());
        for s in 0..l.n_vertices() {
            assert!(psi.apply_vertex(Elem::E, s).max_abs_diff(&psi) < 1e-15);
            for g in Elem::ALL {
                assert!((psi.apply_vertex(g, s).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn plaquette_resolution_of_identity() {
        let l = Lattice::open(2, 2).unwrap();
        let psi = WaveFunction::random(&l, 50, &mut rng());
        for p in 0..l.n_plaquettes() {
            for s in l.plaquette_corners(p) {
                let parts: Vec<_> = Elem::ALL
                    .iter()
                    .map(|&h| psi.apply_plaquette(h, p, s).unwrap())
                    .collect();
                let total = WaveFunction::sum(&l, parts.iter().map(|w| (ONE, w)));
                assert!(total.max_abs_diff(&psi) < 1e-12);
            }
        }
        assert!(psi.apply_plaquette(Elem::E, 0, l.vertex(2, 2).unwrap()).is_err());
    }

    #[test]
    fn ground_state_1x1_torus_is_stabilized() {
        let l = Lattice::torus(1, 1).unwrap();
        let gs = vacuum(&l);
        assert!((gs.norm() - 1.0).abs() < 1e-12);
        assert!((gs.vertex_expectation(0) - 1.0).abs() < 1e-12);
        assert!((gs.flux_free_weight(0) - 1.0).abs() < 1e-12);
        // orbit of (e, e) under conjugation is just itself
        assert_eq!(gs.len(), 1);
    }

    #[test]
    fn representative_ground_states_are_orthonormal() {
        let l = Lattice::torus(1, 1).unwrap();
        let reps = torus_1x1_representatives();
        assert_eq!(reps.len(), 8);
        let states: Vec<_> = reps
            .iter()
            .map(|&(h, v)| ground_state(&l, &[h, v]).unwrap())
            .collect();
        for (i, a) in states.iter().enumerate() {
            assert!((a.vertex_expectation(0) - 1.0).abs() < 1e-12);
            for (j, b) in states.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).norm() - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ground_state_rejects_flux() {
        let l = Lattice::torus(1, 1).unwrap();
        assert_eq!(
            ground_state(&l, &[Elem::SIGMA, Elem::MU]).unwrap_err(),
            Error::FluxInReference(0)
        );
    }

    #[test]
    fn census_counts() {
        let c = census_1x1_torus();
        assert_eq!(c.ground_count, 8);
        assert_eq!(c.single_particle_count, 28);
        assert_eq!(c.charge_only_count, 10);
        assert_eq!(c.flux_counts[1], (ClassLabel::C2, 0));
        assert_eq!(c.flux_counts[2], (ClassLabel::C3, 18));
        assert!(c.projector_defect < 1e-12);
        assert!(c.entries.iter().all(|e| e.commutator.class() != ClassLabel::C2));
    }

    #[test]
    fn open_patch_ground_state_is_unique() {
        // Every flux-free configuration of a 1×1 open patch projects to the
        // same state, up to phase.
        let l = Lattice::open(1, 1).unwrap();
        let gs = vacuum(&l);
        assert_eq!(gs.len(), 216);
        let mut r = rng();
        for _ in 0..10 {
            let cfg: Vec<Elem> = loop {
                let c: Vec<Elem> = (0..4).map(|_| Elem::ALL[r.gen_range(0..6)]).collect();
                let key: Config = c.iter().map(|g| g.id()).collect();
                if WaveFunction::plaquette_holonomy(&l, &key, 0, 0).unwrap() == Elem::E {
                    break c;
                }
            };
            let other = ground_state(&l, &cfg).unwrap();
            assert!((other.inner(&gs).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dump_round_trip() {
        let l = Lattice::open(1, 1).unwrap();
        let psi = WaveFunction::random(&l, 12, &mut rng());
        let text = psi.to_dump();
        let back = WaveFunction::from_dump(&l, &text).unwrap();
        assert_eq!(back.max_abs_diff(&psi), 0.0);
        assert_eq!(back.to_dump(), text);
        assert!(matches!(
            WaveFunction::from_dump(&l, "1 0 e e e\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn vacuum_has_no_violations() {
        let l = Lattice::open(2, 1).unwrap();
        assert!(violations(&vacuum(&l), 1e-9).unwrap().is_empty());
    }

    #[test]
    fn basis_state_with_partial_gauge_weight_is_mixed() {
        let l = Lattice::open(1, 1).unwrap();
        let psi = WaveFunction::trivial(&l);
        assert!(matches!(violations(&psi, 1e-9), Err(Error::MixedSyndrome(_))));
    }
}
