//! Generalized ribbons whose z string is prolonged by bare direct edges:
//! violation sets before and after the extension on a 3×2 torus.

use std::collections::BTreeSet;

use super::{Check, Report};
use crate::group::{ClassLabel, Elem, IrrepGroup};
use crate::lattice::{route, step_endpoints, Lattice, Orientation, RibbonPath, SignedEdge, Site, VertexId};
use crate::ribbon::{apply_anyon_ribbon, apply_ribbon, AnyonLabel, MicroLabel};
use crate::state::{path_product, vacuum, violations, ViolationKind, WaveFunction};

const TOL: f64 = 1e-9;

/// Labels covering a pure charge, a C2 pair with fixed and summed colour,
/// and a C3 pair.
pub fn test_labels() -> Vec<AnyonLabel> {
    let s3 = IrrepGroup::S3.irreps();
    let z2 = IrrepGroup::for_class(ClassLabel::C2).irreps();
    let z3 = IrrepGroup::for_class(ClassLabel::C3).irreps();
    vec![
        AnyonLabel::new(ClassLabel::C1, s3[1], Elem::E, 0, Some(Elem::E), 0).unwrap(),
        AnyonLabel::new(ClassLabel::C1, s3[2], Elem::E, 0, Some(Elem::E), 1).unwrap(),
        AnyonLabel::new(ClassLabel::C2, z2[0], Elem::SIGMA, 0, Some(Elem::SIGMA), 0).unwrap(),
        AnyonLabel::new(ClassLabel::C2, z2[0], Elem::MU_SIGMA, 0, None, 0).unwrap(),
        AnyonLabel::new(ClassLabel::C3, z3[1], Elem::MU, 0, Some(Elem::MU_BAR), 0).unwrap(),
    ]
}

/// One unused edge at `v`, walked towards `v` (prefix) or away from it
/// (suffix), whose far end is not `avoid`.
fn spur(l: &Lattice, v: VertexId, used: &[usize], into: bool, avoid: Option<VertexId>) -> Option<SignedEdge> {
    l.vertex_star(v)
        .into_iter()
        .filter(|(e, _)| !used.contains(e))
        .map(|(e, out)| {
            let along = if into { !out } else { out };
            (e, if along { 1 } else { -1 })
        })
        .find(|&s| {
            let (a, b) = step_endpoints(l, s);
            Some(if into { a } else { b }) != avoid
        })
}

/// Extensions of `r`: none, one prefix edge, one suffix edge, both. The
/// extended string never closes on itself.
pub fn extensions(l: &Lattice, r: &RibbonPath) -> Vec<RibbonPath> {
    let used: Vec<usize> = r.triangles().iter().map(|t| t.edge).collect();
    let pre = spur(l, r.start().vertex, &used, true, Some(r.end().vertex));
    let mut used2 = used.clone();
    used2.extend(pre.map(|s| s.0));
    let z_start = pre.map_or(r.start().vertex, |s| step_endpoints(l, s).0);
    let suf = spur(l, r.end().vertex, &used2, false, Some(z_start));
    let mut out = vec![r.clone()];
    for (p, s) in [(pre, None), (None, suf), (pre, suf)] {
        if p.is_none() && s.is_none() {
            continue;
        }
        if let Ok(x) = r.with_extension(l, p.into_iter().collect(), s.into_iter().collect()) {
            out.push(x);
        }
    }
    out
}

/// Ribbons between two far-apart sites in both orientations.
pub fn test_ribbons(l: &Lattice) -> Vec<RibbonPath> {
    let site = |i, j| Site::new(l.vertex(i, j).unwrap(), l.plaquette(i, j).unwrap());
    let pairs = [(site(0, 0), site(2, 1)), (site(1, 0), site(0, 1))];
    let mut out = Vec::new();
    for (a, b) in pairs {
        for o in [Orientation::Ccw, Orientation::Cw] {
            if let Ok(r) = route(l, a, b, o) {
                out.push(r);
            }
        }
    }
    out
}

/// Violations stay within the end plaquettes and the extended-string end
/// vertices, and every ribbon end with a charge keeps it at the new end of
/// the z string.
pub fn confinement_and_relocation() -> Vec<Check> {
    let l = Lattice::torus(3, 2).unwrap();
    let gs = vacuum(&l);
    let mut confined = (true, 0usize);
    let mut relocated = (true, 0usize);
    let mut mixed = 0usize;
    for r in test_ribbons(&l) {
        for label in test_labels() {
            let plain = match violations(&apply_anyon_ribbon(&label, &r, &gs).normalized(), TOL) {
                Ok(v) => v,
                Err(_) => {
                    mixed += 1;
                    continue;
                }
            };
            let plain_charges: BTreeSet<VertexId> = plain
                .iter()
                .filter(|v| v.kind == ViolationKind::Charge)
                .map(|v| v.location)
                .collect();
            for x in extensions(&l, &r) {
                let vs = match violations(&apply_anyon_ribbon(&label, &x, &gs).normalized(), TOL) {
                    Ok(v) => v,
                    Err(_) => {
                        mixed += 1;
                        continue;
                    }
                };
                let ends = [x.start().plaquette, x.end().plaquette];
                let (zs, ze) = (x.z_start_vertex(&l), x.z_end_vertex(&l));
                let ok = vs.iter().all(|v| match v.kind {
                    ViolationKind::Flux => ends.contains(&v.location) && label.class != ClassLabel::C1,
                    ViolationKind::Charge => v.location == zs || v.location == ze,
                });
                confined.0 &= ok;
                confined.1 += 1;
                // a charge at the ribbon start (end) moves to the z start (end)
                let charges: BTreeSet<VertexId> = vs
                    .iter()
                    .filter(|v| v.kind == ViolationKind::Charge)
                    .map(|v| v.location)
                    .collect();
                let moved = |orig: VertexId, now: VertexId| plain_charges.contains(&orig) == charges.contains(&now);
                relocated.0 &= moved(r.start().vertex, zs) && moved(r.end().vertex, ze);
                relocated.1 += 1;
            }
        }
    }
    vec![
        Check::exact("extended ribbons add no violations beyond ends", confined.0, confined.1),
        Check::exact("direct-edge extensions relocate end charges", relocated.0, relocated.1),
        Check::exact("no mixed syndromes from anyon-basis ribbons", mixed == 0, confined.1),
    ]
}

/// The z delta of an extended ribbon projects the product of the whole
/// extended string: F^{(z,v)} = Σ over configurations with x_ext = z.
pub fn delta_covers_extension() -> Check {
    let l = Lattice::torus(3, 2).unwrap();
    let gs = vacuum(&l);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for r in test_ribbons(&l) {
        for x in extensions(&l, &r).into_iter().skip(1) {
            let walk = x.z_string();
            let flux = crate::ribbon::apply_flux_ribbon(Elem::SIGMA, &x, &gs);
            for z in Elem::ALL {
                let f = apply_ribbon(MicroLabel::new(z, Elem::SIGMA), &x, &gs);
                let filtered = flux.filter(|k| path_product(k, &walk) == z);
                worst = worst.max(f.max_abs_diff(&filtered));
                cases += 1;
            }
        }
    }
    Check::new("extended z delta projects the full z string", worst, TOL, cases)
}

/// Empty extensions reproduce the plain ribbon.
pub fn empty_extension() -> Check {
    let l = Lattice::torus(3, 2).unwrap();
    let gs = vacuum(&l);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for r in test_ribbons(&l) {
        let x = r.with_extension(&l, Vec::new(), Vec::new()).unwrap();
        for label in test_labels() {
            let a: WaveFunction = apply_anyon_ribbon(&label, &r, &gs);
            let b = apply_anyon_ribbon(&label, &x, &gs);
            worst = worst.max(a.max_abs_diff(&b));
            cases += 1;
        }
    }
    Check::new("empty extension equals plain ribbon", worst, TOL, cases)
}

pub fn suite() -> Report {
    let mut rep = Report::new("extended ribbons");
    for c in confinement_and_relocation() {
        rep.push(c);
    }
    rep.push(delta_covers_extension());
    rep.push(empty_extension());
    rep
}
