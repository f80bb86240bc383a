//! Numerical verification suites shared by the command line tool and the
//! acceptance tests. Every check reports its largest deviation against a
//! fixed tolerance.

pub mod algebra;
pub mod anyons;
pub mod extended;
pub mod gates;
pub mod logical;
pub mod ribbons;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::group::Elem;
use crate::lattice::{
    make_ribbon, step_endpoints, triangles_from, EdgeId, Lattice, Orientation, RibbonOptions, RibbonPath,
    SignedEdge, TriangleSpec,
};

/// Outcome of one numerical check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub cases: usize,
}

impl Check {
    pub fn new(name: impl Into<String>, max_deviation: f64, tolerance: f64, cases: usize) -> Self {
        Check {
            name: name.into(),
            passed: max_deviation.is_finite() && max_deviation <= tolerance && cases > 0,
            max_deviation,
            tolerance,
            cases,
        }
    }

    /// A check on exact (integer or boolean) data.
    pub fn exact(name: impl Into<String>, ok: bool, cases: usize) -> Self {
        Check {
            name: name.into(),
            passed: ok && cases > 0,
            max_deviation: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            cases,
        }
    }
}

/// A named list of checks.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("suite {}\n", self.suite);
        for c in &self.checks {
            s.push_str(&format!(
                "{} {:<58} dev={:.3e} tol={:.1e} cases={}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_deviation,
                c.tolerance,
                c.cases
            ));
        }
        s.push_str(&format!(
            "{} passed, {} failed\n",
            self.checks.len() - self.failures(),
            self.failures()
        ));
        s
    }
}

/// Suite names accepted by [`run_suite`]; `all` runs every one of them.
pub const SUITES: [&str; 6] = ["algebra", "ribbon", "anyons", "extended", "logical", "gates"];

/// Runs one named suite, or every suite for `all`, with randomness drawn
/// from `seed`.
pub fn run_suite(name: &str, seed: u64) -> crate::error::Result<Vec<Report>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        other => {
            return Err(crate::error::Error::InvalidArgument(format!(
                "unknown suite {other}; expected all or one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(names
        .into_iter()
        .map(|n| match n {
            "algebra" => algebra::suite(&mut rng),
            "ribbon" => ribbons::suite(&mut rng),
            "anyons" => anyons::suite(),
            "extended" => extended::suite(),
            "logical" => logical::suite(),
            _ => gates::suite(&mut rng),
        })
        .collect())
}

pub fn random_elem<R: Rng>(rng: &mut R) -> Elem {
    Elem::ALL[rng.gen_range(0..6)]
}

/// Random ribbon of `len` triangles built by a self-avoiding walk over sites.
/// With `simple`, the start and end vertex and plaquette are distinct and
/// each is visited only at the corresponding end of the ribbon.
pub fn random_ribbon<R: Rng>(
    lattice: &Lattice,
    orientation: Orientation,
    len: usize,
    simple: bool,
    rng: &mut R,
) -> RibbonPath {
    let sites: Vec<_> = (0..lattice.n_vertices())
        .flat_map(|v| {
            lattice
                .vertex_plaquettes(v)
                .into_iter()
                .map(move |p| crate::lattice::Site::new(v, p))
        })
        .collect();
    loop {
        let mut site = *sites.choose(rng).unwrap();
        let mut specs: Vec<TriangleSpec> = Vec::new();
        let mut used: Vec<EdgeId> = Vec::new();
        let mut visited = vec![site];
        for _ in 0..len {
            let options: Vec<_> = triangles_from(lattice, site, orientation)
                .into_iter()
                .filter(|t| !used.contains(&t.edge))
                .collect();
            let Some(t) = options.choose(rng) else { break };
            specs.push(TriangleSpec {
                kind: t.kind,
                edge: t.edge,
                start: t.start,
            });
            used.push(t.edge);
            site = t.end;
            visited.push(site);
        }
        if specs.len() != len {
            continue;
        }
        if simple && !is_simple(&visited) {
            continue;
        }
        if let Ok(r) = make_ribbon(lattice, &specs, &RibbonOptions::default()) {
            return r;
        }
    }
}

fn is_simple(visited: &[crate::lattice::Site]) -> bool {
    let (a, b) = (visited[0], *visited.last().unwrap());
    if a.vertex == b.vertex || a.plaquette == b.plaquette {
        return false;
    }
    let run_ok = |key: &dyn Fn(&crate::lattice::Site) -> usize, target: usize, from_start: bool| {
        let idx: Vec<usize> = visited
            .iter()
            .enumerate()
            .filter(|(_, s)| key(s) == target)
            .map(|(i, _)| i)
            .collect();
        let n = idx.len();
        if from_start {
            idx.iter().enumerate().all(|(k, &i)| i == k)
        } else {
            idx.iter().enumerate().all(|(k, &i)| i == visited.len() - n + k)
        }
    };
    run_ok(&|s| s.vertex, a.vertex, true)
        && run_ok(&|s| s.plaquette, a.plaquette, true)
        && run_ok(&|s| s.vertex, b.vertex, false)
        && run_ok(&|s| s.plaquette, b.plaquette, false)
}

/// Random direct-edge walk of `len` steps ending at (`into` = true) or
/// starting from vertex `v`, avoiding `forbidden` edges.
pub fn random_walk<R: Rng>(
    lattice: &Lattice,
    v: usize,
    len: usize,
    into: bool,
    forbidden: &[EdgeId],
    rng: &mut R,
) -> Vec<SignedEdge> {
    let mut walk = Vec::new();
    let mut cur = v;
    let mut used = forbidden.to_vec();
    for _ in 0..len {
        let options: Vec<_> = lattice
            .vertex_star(cur)
            .into_iter()
            .filter(|(e, _)| !used.contains(e))
            .collect();
        let Some(&(e, out)) = options.choose(rng) else { break };
        // step leaving `cur` when walking forward, entering it when walking back
        let sign: i8 = if out == into { -1 } else { 1 };
        let step = (e, sign);
        let (a, b) = step_endpoints(lattice, step);
        cur = if into { a } else { b };
        used.push(e);
        walk.push(step);
    }
    if into {
        walk.reverse();
    }
    walk
}
