//! Ribbon identities: constructive versus recursive evaluation, closed
//! loops, endpoint and interior commutation, same-ribbon composition and the
//! exchange rule.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{random_elem, random_ribbon, random_walk, Check, Report};
use crate::group::Elem;
use crate::lattice::{
    make_ribbon, triangles_from, Alignment, Lattice, Orientation, RibbonBuilder, RibbonOptions, RibbonPath, Site,
    Triangle, TriangleKind, TriangleSpec,
};
use crate::ribbon::{apply_ribbon, exchange_compose, oracle, MicroLabel};
use crate::state::WaveFunction;

const TOL: f64 = 1e-9;

fn orientations() -> [Orientation; 2] {
    [Orientation::Ccw, Orientation::Cw]
}

fn pick_orientation<R: Rng>(rng: &mut R) -> Orientation {
    orientations()[rng.gen_range(0..2)]
}

/// Triangles of the extended z string as bare direct triangles, so the
/// recursive oracle sees the prefix and suffix edges.
fn extended_triangles(path: &RibbonPath) -> Vec<Triangle> {
    let bare = |&(e, s): &(usize, i8)| Triangle {
        kind: TriangleKind::Direct,
        edge: e,
        start: path.start(),
        end: path.start(),
        alignment: if s > 0 { Alignment::Aligned } else { Alignment::Opposite },
        orientation: path.orientation(),
    };
    path.z_prefix()
        .iter()
        .map(bare)
        .chain(path.triangles().iter().copied())
        .chain(path.z_suffix().iter().map(bare))
        .collect()
}

/// Constructive evaluation against the recursive oracle on random
/// (ribbon, extension, label, state, split) tuples on a 3×3 open patch.
pub fn recursive_vs_constructive<R: Rng>(tuples: usize, rng: &mut R) -> Check {
    let l = Lattice::open(3, 3).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..tuples {
        let o = pick_orientation(rng);
        let len = rng.gen_range(1..=8);
        let mut path = random_ribbon(&l, o, len, false, rng);
        if rng.gen_bool(0.5) {
            let used: Vec<_> = path.triangles().iter().map(|t| t.edge).collect();
            let pre = random_walk(&l, path.start().vertex, rng.gen_range(0..3), true, &used, rng);
            let mut used2 = used.clone();
            used2.extend(pre.iter().map(|s| s.0));
            let suf = random_walk(&l, path.end().vertex, rng.gen_range(0..3), false, &used2, rng);
            path = path.with_extension(&l, pre, suf).unwrap();
        }
        let label = MicroLabel::new(random_elem(rng), random_elem(rng));
        let psi = WaveFunction::random(&l, 40, rng);
        let a = apply_ribbon(label, &path, &psi);
        let tris = extended_triangles(&path);
        let mut split = |n: usize| rng.gen_range(1..n);
        let b = oracle::apply_recursive(&tris, path.orientation(), label, &psi, &mut split);
        worst = worst.max(a.max_abs_diff(&b));
    }
    Check::new("recursive and constructive ribbons agree", worst, TOL, tuples)
}

/// Four direct triangles around plaquette (1,1), traversed clockwise or
/// counterclockwise from its south-west corner.
pub fn direct_loop(l: &Lattice, o: Orientation) -> RibbonPath {
    let p = l.plaquette(1, 1).unwrap();
    let sw = l.vertex(1, 1).unwrap();
    let (bottom, right, top, left) = (
        l.h_edge(1, 1).unwrap(),
        l.v_edge(2, 1).unwrap(),
        l.h_edge(1, 2).unwrap(),
        l.v_edge(1, 1).unwrap(),
    );
    let order = match o {
        Orientation::Ccw => [bottom, right, top, left],
        Orientation::Cw => [left, top, right, bottom],
    };
    let mut b = RibbonBuilder::new(l, Site::new(sw, p));
    for e in order {
        b = b.direct(e).unwrap();
    }
    b.build().unwrap()
}

/// Four dual triangles around vertex (1,1) with the given local orientation.
pub fn dual_loop(l: &Lattice, o: Orientation) -> RibbonPath {
    let s = l.vertex(1, 1).unwrap();
    let mut site = Site::new(s, l.plaquette(1, 1).unwrap());
    let mut specs = Vec::new();
    for _ in 0..4 {
        let t = triangles_from(l, site, o)
            .into_iter()
            .find(|t| t.kind == TriangleKind::Dual)
            .unwrap();
        specs.push(TriangleSpec {
            kind: t.kind,
            edge: t.edge,
            start: t.start,
        });
        site = t.end;
    }
    make_ribbon(l, &specs, &RibbonOptions::default()).unwrap()
}

/// Closed direct loops give plaquette projectors and closed dual loops give
/// vertex operators, for every label.
pub fn closed_loops<R: Rng>(states: usize, rng: &mut R) -> Vec<Check> {
    let l = Lattice::open(3, 3).unwrap();
    let p = l.plaquette(1, 1).unwrap();
    let s = l.vertex(1, 1).unwrap();
    let psis: Vec<_> = (0..states).map(|_| WaveFunction::random(&l, 40, rng)).collect();
    let mut out = Vec::new();
    for o in orientations() {
        let dl = direct_loop(&l, o);
        let vl = dual_loop(&l, o);
        let (mut d, mut v) = (0.0f64, 0.0f64);
        let mut cases = 0;
        for psi in &psis {
            for z in Elem::ALL {
                for g in Elem::ALL {
                    let lhs = apply_ribbon(MicroLabel::new(z, g), &dl, psi);
                    // the clockwise loop reads z as the holonomy inverse
                    let h = match o {
                        Orientation::Cw => z,
                        Orientation::Ccw => z.inv(),
                    };
                    d = d.max(lhs.max_abs_diff(&psi.apply_plaquette(h, p, s).unwrap()));
                    let lhs = apply_ribbon(MicroLabel::new(z, g), &vl, psi);
                    let a = match o {
                        Orientation::Ccw => g,
                        Orientation::Cw => g.inv(),
                    };
                    let rhs = if z == Elem::E {
                        psi.apply_vertex(a, s)
                    } else {
                        WaveFunction::zero(&l)
                    };
                    v = v.max(lhs.max_abs_diff(&rhs));
                    cases += 1;
                }
            }
        }
        let tag = if o == Orientation::Ccw { "ccw" } else { "cw" };
        let hname = if o == Orientation::Cw { "B^z_p" } else { "B^(z^-1)_p" };
        let aname = if o == Orientation::Ccw { "A^v_s" } else { "A^(v^-1)_s" };
        out.push(Check::new(format!("closed direct loop ({tag}) = {hname}"), d, TOL, cases));
        out.push(Check::new(format!("closed dual loop ({tag}) = delta(z,e) {aname}"), v, TOL, cases));
    }
    out
}

struct Case {
    path: RibbonPath,
    psi: WaveFunction,
}

fn cases<R: Rng>(l: &Lattice, o: Orientation, n: usize, rng: &mut R) -> Vec<Case> {
    (0..n)
        .map(|_| {
            let len = rng.gen_range(2..=7);
            Case {
                path: random_ribbon(l, o, len, true, rng),
                psi: WaveFunction::random(l, 40, rng),
            }
        })
        .collect()
}

/// The plaquette and vertex relations at the ribbon's start and end sites.
pub fn endpoint_relations<R: Rng>(ribbons: usize, rng: &mut R) -> Vec<Check> {
    let l = Lattice::open(3, 3).unwrap();
    let mut out = Vec::new();
    for o in orientations() {
        let tag = if o == Orientation::Ccw { "ccw" } else { "cw" };
        let (mut bs, mut be, mut av_s, mut av_e) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut n = 0;
        for c in cases(&l, o, ribbons, rng) {
            let (st, en) = (c.path.start(), c.path.end());
            let bp = |h: Elem, site: Site, w: &WaveFunction| w.apply_plaquette(h, site.plaquette, site.vertex).unwrap();
            for z in Elem::ALL {
                for v in Elem::ALL {
                    let f = |z: Elem, v: Elem, w: &WaveFunction| apply_ribbon(MicroLabel::new(z, v), &c.path, w);
                    let w_top = z.inv() * v.inv() * z;
                    for h in Elem::ALL {
                        let lhs = bp(h, st, &f(z, v, &c.psi));
                        let hs = match o {
                            Orientation::Ccw => h * v,
                            Orientation::Cw => v * h,
                        };
                        bs = bs.max(lhs.max_abs_diff(&f(z, v, &bp(hs, st, &c.psi))));
                        let lhs = bp(h, en, &f(z, v, &c.psi));
                        let he = match o {
                            Orientation::Ccw => w_top * h,
                            Orientation::Cw => h * w_top,
                        };
                        be = be.max(lhs.max_abs_diff(&f(z, v, &bp(he, en, &c.psi))));
                        let g = h;
                        let lhs = f(z, v, &c.psi).apply_vertex(g, st.vertex);
                        let rhs = f(g * z, g * v * g.inv(), &c.psi.apply_vertex(g, st.vertex));
                        av_s = av_s.max(lhs.max_abs_diff(&rhs));
                        let lhs = f(z, v, &c.psi).apply_vertex(g, en.vertex);
                        let rhs = f(z * g.inv(), v, &c.psi.apply_vertex(g, en.vertex));
                        av_e = av_e.max(lhs.max_abs_diff(&rhs));
                        n += 1;
                    }
                }
            }
        }
        let (hs_name, he_name) = match o {
            Orientation::Ccw => ("B^(h v)", "B^(z^-1 v^-1 z h)"),
            Orientation::Cw => ("B^(v h)", "B^(h z^-1 v^-1 z)"),
        };
        out.push(Check::new(format!("start plaquette ({tag}): B^h F = F {hs_name}"), bs, TOL, n));
        out.push(Check::new(format!("end plaquette ({tag}): B^h F = F {he_name}"), be, TOL, n));
        out.push(Check::new(
            format!("start vertex ({tag}): A^g F^(z,v) = F^(gz, gvg^-1) A^g"),
            av_s,
            TOL,
            n,
        ));
        out.push(Check::new(format!("end vertex ({tag}): A^g F^(z,v) = F^(zg^-1, v) A^g"), av_e, TOL, n));
    }
    out
}

/// Ribbons commute with A^g_s and B^e_p at every site they only pass
/// through.
pub fn interior_commutation<R: Rng>(ribbons: usize, rng: &mut R) -> Vec<Check> {
    let l = Lattice::open(3, 3).unwrap();
    let mut out = Vec::new();
    for o in orientations() {
        let tag = if o == Orientation::Ccw { "ccw" } else { "cw" };
        let (mut dv, mut dp) = (0.0f64, 0.0f64);
        let mut n = 0;
        for c in cases(&l, o, ribbons, rng) {
            let (st, en) = (c.path.start(), c.path.end());
            let mut verts = Vec::new();
            let mut plaqs = Vec::new();
            for t in c.path.triangles() {
                for site in [t.start, t.end] {
                    if site.vertex != st.vertex && site.vertex != en.vertex && !verts.contains(&site.vertex) {
                        verts.push(site.vertex);
                    }
                    if site.plaquette != st.plaquette && site.plaquette != en.plaquette && !plaqs.contains(&site.plaquette)
                    {
                        plaqs.push(site.plaquette);
                    }
                }
            }
            let label = MicroLabel::new(random_elem(rng), random_elem(rng));
            let f = |w: &WaveFunction| apply_ribbon(label, &c.path, w);
            for &s in &verts {
                for g in Elem::ALL {
                    dv = dv.max(f(&c.psi).apply_vertex(g, s).max_abs_diff(&f(&c.psi.apply_vertex(g, s))));
                    n += 1;
                }
            }
            for &p in &plaqs {
                dp = dp.max(f(&c.psi).apply_flux_free(p).max_abs_diff(&f(&c.psi.apply_flux_free(p))));
                n += 1;
            }
        }
        out.push(Check::new(format!("interior vertices commute with F ({tag})"), dv, TOL, n));
        out.push(Check::new(format!("interior plaquettes commute with F ({tag})"), dp, TOL, n));
    }
    out
}

/// F^(z1,v1) F^(z2,v2) = δ(z1,z2) F^(z1, v2 v1) (cw) or F^(z1, v1 v2) (ccw).
pub fn composition<R: Rng>(ribbons: usize, rng: &mut R) -> Vec<Check> {
    let l = Lattice::open(3, 3).unwrap();
    let mut out = Vec::new();
    for o in orientations() {
        let tag = if o == Orientation::Ccw { "ccw" } else { "cw" };
        let mut d: f64 = 0.0;
        let mut n = 0;
        for c in cases(&l, o, ribbons, rng) {
            for z1 in Elem::ALL {
                for z2 in Elem::ALL {
                    let (v1, v2) = (random_elem(rng), random_elem(rng));
                    let lhs = apply_ribbon(
                        MicroLabel::new(z1, v1),
                        &c.path,
                        &apply_ribbon(MicroLabel::new(z2, v2), &c.path, &c.psi),
                    );
                    let rhs = if z1 != z2 {
                        WaveFunction::zero(&l)
                    } else {
                        let v = match o {
                            Orientation::Cw => v2 * v1,
                            Orientation::Ccw => v1 * v2,
                        };
                        apply_ribbon(MicroLabel::new(z1, v), &c.path, &c.psi)
                    };
                    d = d.max(lhs.max_abs_diff(&rhs));
                    n += 1;
                }
            }
        }
        let rule = if o == Orientation::Cw { "v2 v1" } else { "v1 v2" };
        out.push(Check::new(format!("same-ribbon composition ({tag}): F^(z1, {rule})"), d, TOL, n));
    }
    out
}

/// Every pair of short ribbons on a 3×3 open patch meeting the exchange
/// geometry, up to `max_pairs` per orientation.
pub fn exchange_pairs(l: &Lattice, o: Orientation, max_len: usize) -> Vec<(RibbonPath, RibbonPath)> {
    fn grow(l: &Lattice, o: Orientation, cur: &mut Vec<TriangleSpec>, site: Site, left: usize, out: &mut Vec<RibbonPath>) {
        if !cur.is_empty() {
            match make_ribbon(l, cur, &RibbonOptions::default()) {
                Ok(r) => out.push(r),
                Err(_) => return,
            }
        }
        if left == 0 {
            return;
        }
        for t in triangles_from(l, site, o) {
            cur.push(TriangleSpec {
                kind: t.kind,
                edge: t.edge,
                start: t.start,
            });
            grow(l, o, cur, t.end, left - 1, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    for v in 0..l.n_vertices() {
        for p in l.vertex_plaquettes(v) {
            grow(l, o, &mut Vec::new(), Site::new(v, p), max_len, &mut all);
        }
    }
    let mut pairs = Vec::new();
    for t2 in &all {
        for t1 in &all {
            let label = MicroLabel::new(Elem::E, Elem::E);
            if exchange_compose((label, t2), (label, t1)).is_ok() {
                pairs.push((t2.clone(), t1.clone()));
            }
        }
    }
    pairs
}

/// F2(t2) F1(t1) = F1'(t1) F2(t2) with the rewritten label, for all labels,
/// on sampled pairs meeting the exchange geometry.
pub fn exchange<R: Rng>(pairs_per_orientation: usize, rng: &mut R) -> Vec<Check> {
    let l = Lattice::open(3, 3).unwrap();
    let mut out = Vec::new();
    for o in orientations() {
        let tag = if o == Orientation::Ccw { "ccw" } else { "cw" };
        let mut pairs = exchange_pairs(&l, o, 3);
        pairs.shuffle(rng);
        pairs.truncate(pairs_per_orientation);
        let mut d: f64 = 0.0;
        let mut n = 0;
        for (t2, t1) in &pairs {
            let psi = WaveFunction::random(&l, 30, rng);
            for z1 in Elem::ALL {
                for v1 in Elem::ALL {
                    let (z2, v2) = (random_elem(rng), random_elem(rng));
                    let (l1, l2) = (MicroLabel::new(z1, v1), MicroLabel::new(z2, v2));
                    let (l1p, l2p) = exchange_compose((l2, t2), (l1, t1)).unwrap();
                    let lhs = apply_ribbon(l2, t2, &apply_ribbon(l1, t1, &psi));
                    let rhs = apply_ribbon(l1p, t1, &apply_ribbon(l2p, t2, &psi));
                    d = d.max(lhs.max_abs_diff(&rhs));
                    n += 1;
                }
            }
        }
        let rule = if o == Orientation::Cw { "z1 z2^-1 v2 z2" } else { "z1 z2^-1 v2^-1 z2" };
        out.push(Check::new(format!("exchange ({tag}): F1 label becomes ({rule}, v1)"), d, TOL, n));
    }
    out
}

pub fn suite<R: Rng>(rng: &mut R) -> Report {
    let mut r = Report::new("ribbon");
    r.push(recursive_vs_constructive(100, rng));
    for c in closed_loops(20, rng)
        .into_iter()
        .chain(endpoint_relations(12, rng))
        .chain(interior_commutation(12, rng))
        .chain(composition(12, rng))
        .chain(exchange(24, rng))
    {
        r.push(c);
    }
    r
}
