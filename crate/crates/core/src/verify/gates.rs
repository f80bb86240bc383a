//! Exact-mode truth tables of the gate set against textbook matrices.
//!
//! Each gate runs on every basis input and on seeded random superpositions,
//! so relative phases between columns are pinned as well.

use rand::Rng;

use super::{Check, Report};
use crate::error::Result;
use crate::gates::{ccz, cz, distance_up_to_phase, h, qubit_x, qutrit_z, s, sign_flip, u, u_minus, u_plus};
use crate::linalg::{omega_pow, C64, CMat, I, ONE, ZERO};
use crate::register::{Ctx, Register};

const TOL: f64 = 1e-9;

/// A gate body acting on slots 0..n of a register.
pub type GateBody<'a> = dyn Fn(&mut Register, &mut Ctx) -> Result<()> + 'a;

fn digits(mut idx: usize, base: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = idx % base;
            idx /= base;
            d
        })
        .collect()
}

/// Embeds a vector on n slots of dimension `base` into the qutrit register
/// index space (slot k is digit k, least significant first).
fn embed(v: &[C64], base: usize, n: usize) -> Vec<C64> {
    let mut out = vec![ZERO; 3usize.pow(n as u32)];
    for (idx, a) in v.iter().enumerate() {
        let j: usize = digits(idx, base, n)
            .iter()
            .enumerate()
            .map(|(k, d)| d * 3usize.pow(k as u32))
            .sum();
        out[j] = *a;
    }
    out
}

/// Restriction back to the base-`base` subspace plus the leaked weight.
fn restrict(v: &[C64], base: usize, n: usize) -> (Vec<C64>, f64) {
    let dim = base.pow(n as u32);
    let mut out = vec![ZERO; dim];
    let mut kept = 0.0;
    for (idx, o) in out.iter_mut().enumerate() {
        let j: usize = digits(idx, base, n)
            .iter()
            .enumerate()
            .map(|(k, d)| d * 3usize.pow(k as u32))
            .sum();
        *o = v[j];
        kept += v[j].norm_sqr();
    }
    let total: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    (out, total - kept)
}

/// Runs `body` on the input vector in exact mode and returns the output
/// restricted to the same subspace, with the leaked weight.
pub fn run_exact(body: &GateBody, input: &[C64], base: usize, n: usize) -> Result<(Vec<C64>, f64)> {
    let mut reg = Register::from_amplitudes(n, embed(input, base, n))?;
    let mut ctx = Ctx::exact();
    body(&mut reg, &mut ctx)?;
    let order: Vec<usize> = (0..n).collect();
    Ok(restrict(&reg.amplitudes(&order)?, base, n))
}

fn random_vector<R: Rng>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / n).collect()
}

/// Largest deviation between the gate and `oracle` on all basis inputs and
/// `random` superpositions. `projective` compares each output up to a
/// global phase; otherwise entrywise.
pub fn operator_deviation<R: Rng>(
    body: &GateBody,
    oracle: &CMat,
    base: usize,
    n: usize,
    random: usize,
    projective: bool,
    rng: &mut R,
) -> f64 {
    let dim = base.pow(n as u32);
    let mut inputs: Vec<Vec<C64>> = (0..dim)
        .map(|k| (0..dim).map(|j| if j == k { ONE } else { ZERO }).collect())
        .collect();
    inputs.extend((0..random).map(|_| random_vector(dim, rng)));
    let mut worst: f64 = 0.0;
    for v in inputs {
        let expect = oracle.apply(&v);
        let dev = match run_exact(body, &v, base, n) {
            Ok((out, leak)) => {
                let d = if projective {
                    distance_up_to_phase(&out, &expect)
                } else {
                    out.iter().zip(&expect).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
                };
                d.max(leak)
            }
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    worst
}

/// Matrix on n slots of dimension `base` from a map of basis digits to
/// (output digits, phase).
pub fn monomial_matrix(base: usize, n: usize, f: impl Fn(&[usize]) -> (Vec<usize>, C64)) -> CMat {
    let dim = base.pow(n as u32);
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        let (out, ph) = f(&digits(col, base, n));
        let row: usize = out.iter().rev().fold(0, |acc, d| acc * base + d);
        m[(row, col)] = ph;
    }
    m
}

pub fn u_matrix() -> CMat {
    monomial_matrix(3, 2, |d| (vec![d[0], (6 - d[0] - d[1]) % 3], ONE))
}

pub fn u_plus_matrix() -> CMat {
    monomial_matrix(3, 2, |d| (vec![d[0], (d[1] + d[0]) % 3], ONE))
}

pub fn u_minus_matrix() -> CMat {
    monomial_matrix(3, 2, |d| (vec![d[0], (d[1] + 3 - d[0]) % 3], ONE))
}

pub fn qutrit_z_matrix() -> CMat {
    monomial_matrix(3, 1, |d| (vec![d[0]], omega_pow(d[0] as i64)))
}

pub fn sign_flip_matrix(which: usize) -> CMat {
    monomial_matrix(3, 1, |d| (vec![d[0]], if d[0] == which { -ONE } else { ONE }))
}

pub fn x_matrix() -> CMat {
    monomial_matrix(2, 1, |d| (vec![1 - d[0]], ONE))
}

/// Phase −1 on the all-ones input of n qubits.
pub fn cphase_matrix(n: usize) -> CMat {
    monomial_matrix(2, n, |d| (d.to_vec(), if d.iter().all(|&b| b == 1) { -ONE } else { ONE }))
}

pub fn h_matrix() -> CMat {
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMat::from_rows(&[&[r, r], &[r, -r]])
}

pub fn s_matrix() -> CMat {
    CMat::from_rows(&[&[ONE, ZERO], &[ZERO, I]])
}

/// Deviation of the non-followed branch of a measured gate on random
/// inputs; zero when both outcomes give the same state up to phase.
fn branch_deviation<R: Rng>(
    gate: fn(&mut Register, &mut Ctx, usize) -> Result<crate::gates::GateResult>,
    inputs: usize,
    rng: &mut R,
) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..inputs {
        let v = random_vector(2, rng);
        let mut reg = Register::from_amplitudes(1, embed(&v, 2, 1)).expect("one qutrit");
        let mut ctx = Ctx::exact();
        let d = match gate(&mut reg, &mut ctx, 0) {
            Ok(r) => r
                .branches
                .iter()
                .map(|b| b.deviation)
                .chain(
                    // both branch probabilities must add up to one
                    std::iter::once((r.branches.iter().map(|b| b.probability).sum::<f64>() - 1.0).abs()),
                )
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(d);
    }
    worst
}

pub fn suite<R: Rng>(rng: &mut R) -> Report {
    let mut rep = Report::new("gates");
    let random = 4;
    let mut push = |rep: &mut Report, name: &str, body: &GateBody, m: &CMat, base: usize, n: usize, proj: bool| {
        let dev = operator_deviation(body, m, base, n, random, proj, rng);
        rep.push(Check::new(name, dev, TOL, m.cols()));
    };

    push(&mut rep, "U |a,b> -> |a,-a-b>", &|r, _| u(r, 0, 1).map(drop), &u_matrix(), 3, 2, false);
    push(&mut rep, "U+ |a,b> -> |a,b+a>", &|r, c| u_plus(r, c, 0, 1).map(drop), &u_plus_matrix(), 3, 2, false);
    push(&mut rep, "U- |a,b> -> |a,b-a>", &|r, c| u_minus(r, c, 0, 1).map(drop), &u_minus_matrix(), 3, 2, false);
    push(&mut rep, "qutrit Z", &|r, c| qutrit_z(r, c, 0).map(drop), &qutrit_z_matrix(), 3, 1, false);
    for k in 0..3 {
        push(
            &mut rep,
            &format!("sign flip sigma_z({k})"),
            &move |r, c| sign_flip(r, c, 0, k).map(drop),
            &sign_flip_matrix(k),
            3,
            1,
            false,
        );
    }
    push(&mut rep, "qubit X", &|r, c| qubit_x(r, c, 0).map(drop), &x_matrix(), 2, 1, false);
    push(&mut rep, "CZ", &|r, c| cz(r, c, 0, 1).map(drop), &cphase_matrix(2), 2, 2, false);
    push(&mut rep, "CCZ", &|r, c| ccz(r, c, 0, 1, 2).map(drop), &cphase_matrix(3), 2, 3, false);
    push(&mut rep, "H", &|r, c| h(r, c, 0).map(drop), &h_matrix(), 2, 1, true);
    push(&mut rep, "S (up to global phase)", &|r, c| s(r, c, 0).map(drop), &s_matrix(), 2, 1, true);

    // CCZ · X_1 · CCZ equals X_1 ⊗ CZ on the other two qubits
    let x1 = monomial_matrix(2, 3, |d| (vec![1 - d[0], d[1], d[2]], ONE));
    let cz23 = monomial_matrix(2, 3, |d| (d.to_vec(), if d[1] == 1 && d[2] == 1 { -ONE } else { ONE }));
    push(
        &mut rep,
        "CCZ X1 CCZ = X1 (x) CZ23",
        &|r, c| {
            ccz(r, c, 0, 1, 2)?;
            qubit_x(r, c, 0)?;
            ccz(r, c, 0, 1, 2).map(drop)
        },
        &(&x1 * &cz23),
        2,
        3,
        false,
    );

    rep.push(Check::new("H outcome branches agree", branch_deviation(h, 4, rng), TOL, 4));
    rep.push(Check::new(
        "S outcome branches agree up to phase",
        branch_deviation(s, 4, rng),
        TOL,
        4,
    ));
    rep
}
