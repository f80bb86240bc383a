//! Property tests over randomly drawn elements, states and ribbons.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use s3_double::gates::{sign_flip_closed_form, sign_flip_success_probability, u, u_minus, u_plus};
use s3_double::group::Elem;
use s3_double::lattice::{parse_ribbon, Lattice, Orientation};
use s3_double::linalg::C64;
use s3_double::register::{Ctx, Register};
use s3_double::state::WaveFunction;
use s3_double::verify::random_ribbon;

fn elem() -> impl Strategy<Value = Elem> {
    (0usize..6).prop_map(|k| Elem::ALL[k])
}

fn random_register(n: usize, seed: u64) -> Register {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..3usize.pow(n as u32))
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut r = Register::from_amplitudes(n, amps).unwrap();
    r.normalize();
    r
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(a in elem(), b in elem(), c in elem()) {
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * a.inv(), Elem::E);
        prop_assert_eq!(Elem::E * a, a);
        prop_assert_eq!((a * b).inv(), b.inv() * a.inv());
        prop_assert_eq!(a.conjugate(b).class(), b.class());
    }

    #[test]
    fn vertex_operators_compose(g in elem(), h in elem(), seed in any::<u64>()) {
        let l = Lattice::open(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = WaveFunction::random(&l, 12, &mut rng);
        for s in 0..l.n_vertices() {
            let lhs = psi.apply_vertex(h, s).apply_vertex(g, s);
            let rhs = psi.apply_vertex(g * h, s);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            prop_assert!((psi.apply_vertex(g, s).norm() - psi.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn dump_round_trips(seed in any::<u64>()) {
        let l = Lattice::open(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = WaveFunction::random(&l, 9, &mut rng);
        let text = psi.to_dump();
        let back = WaveFunction::from_dump(&l, &text).unwrap();
        prop_assert_eq!(back.to_dump(), text);
    }

    #[test]
    fn ribbon_text_round_trips(seed in any::<u64>(), len in 1usize..7, ccw in any::<bool>()) {
        let l = Lattice::torus(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = if ccw { Orientation::Ccw } else { Orientation::Cw };
        let r = random_ribbon(&l, o, len, false, &mut rng);
        let text = r.to_text();
        let back = parse_ribbon(&text, &l, true).unwrap();
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn pull_through_is_an_involution(seed in any::<u64>()) {
        let mut reg = random_register(2, seed);
        let before = reg.amplitudes(&[0, 1]).unwrap();
        u(&mut reg, 0, 1).unwrap();
        u(&mut reg, 0, 1).unwrap();
        prop_assert!(max_diff(&reg.amplitudes(&[0, 1]).unwrap(), &before) < 1e-12);
    }

    #[test]
    fn u_plus_and_u_minus_are_inverse(seed in any::<u64>()) {
        let mut reg = random_register(2, seed);
        let mut ctx = Ctx::exact();
        let before = reg.amplitudes(&[0, 1]).unwrap();
        u_plus(&mut reg, &mut ctx, 0, 1).unwrap();
        u_minus(&mut reg, &mut ctx, 0, 1).unwrap();
        prop_assert!(max_diff(&reg.amplitudes(&[0, 1]).unwrap(), &before) < 1e-12);
        prop_assert_eq!(reg.len(), 2);
    }

    #[test]
    fn sign_flip_probability_closed_form(k in 0usize..40) {
        let n = 2 * k + 1;
        let p = sign_flip_success_probability(n);
        prop_assert!((p - sign_flip_closed_form(n)).abs() < 1e-12);
        prop_assert!(sign_flip_success_probability(n + 2) >= p);
    }
}
