//! Exact arithmetic in S3, its conjugacy classes and centralizers, the
//! irreducible representations of S3, Z3 and Z2, and the eight anyon types of
//! the quantum double.
//!
//! Elements are written μ^a σ^b with μ = (123) and σ = (23); permutations act
//! right to left, so μσ = (12) and μ̄σ = (13). Ids follow `a + 3b`, giving the
//! order e, μ, μ̄, σ, μσ, μ̄σ.

use crate::error::{Error, Result};
use crate::linalg::{omega_pow, CMat, C64, ONE, ZERO};
use std::fmt;
use std::str::FromStr;

/// One of the six elements of S3.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Elem(u8);

impl Elem {
    pub const E: Elem = Elem(0);
    pub const MU: Elem = Elem(1);
    pub const MU_BAR: Elem = Elem(2);
    pub const SIGMA: Elem = Elem(3);
    pub const MU_SIGMA: Elem = Elem(4);
    pub const MU_BAR_SIGMA: Elem = Elem(5);

    pub const ALL: [Elem; 6] = [
        Elem::E,
        Elem::MU,
        Elem::MU_BAR,
        Elem::SIGMA,
        Elem::MU_SIGMA,
        Elem::MU_BAR_SIGMA,
    ];

    pub fn from_id(id: u8) -> Result<Elem> {
        if id < 6 {
            Ok(Elem(id))
        } else {
            Err(Error::InvalidArgument(format!("group element id {id}")))
        }
    }

    pub fn id(self) -> u8 {
        self.0
    }

    /// Exponent `a` of μ in μ^a σ^b.
    pub fn rotation(self) -> u8 {
        self.0 % 3
    }

    /// Exponent `b` of σ in μ^a σ^b.
    pub fn reflection(self) -> u8 {
        self.0 / 3
    }

    fn from_parts(a: u8, b: u8) -> Elem {
        Elem(a % 3 + 3 * (b % 2))
    }

    pub fn mul(self, other: Elem) -> Elem {
        // μ^a σ^b μ^c σ^d = μ^(a + (-1)^b c) σ^(b+d)
        let (a, b) = (self.rotation(), self.reflection());
        let (c, d) = (other.rotation(), other.reflection());
        let c = if b == 1 { (3 - c) % 3 } else { c };
        Elem::from_parts(a + c, b + d)
    }

    pub fn inv(self) -> Elem {
        if self.reflection() == 1 {
            self
        } else {
            Elem::from_parts(3 - self.rotation(), 0)
        }
    }

    /// `self · g · self⁻¹`.
    pub fn conjugate(self, g: Elem) -> Elem {
        self.mul(g).mul(self.inv())
    }

    /// Group commutator `a b ā b̄`.
    pub fn commutator(a: Elem, b: Elem) -> Elem {
        a.mul(b).mul(a.inv()).mul(b.inv())
    }

    pub fn commutes_with(self, other: Elem) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn class(self) -> ClassLabel {
        match (self.rotation(), self.reflection()) {
            (0, 0) => ClassLabel::C1,
            (_, 1) => ClassLabel::C2,
            _ => ClassLabel::C3,
        }
    }

    /// Serialization token: e, u, U, s, us, Us.
    pub fn token(self) -> &'static str {
        ["e", "u", "U", "s", "us", "Us"][self.0 as usize]
    }

    /// Product of a sequence, left to right.
    pub fn product<I: IntoIterator<Item = Elem>>(it: I) -> Elem {
        it.into_iter().fold(Elem::E, Elem::mul)
    }
}

impl std::ops::Mul for Elem {
    type Output = Elem;
    fn mul(self, rhs: Elem) -> Elem {
        Elem::mul(self, rhs)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Elem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Elem> {
        Elem::ALL
            .into_iter()
            .find(|g| g.token() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown group element '{s}'")))
    }
}

/// Conjugacy class labels: C1 = {e}, C2 = transpositions, C3 = 3-cycles.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ClassLabel {
    C1,
    C2,
    C3,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 3] = [ClassLabel::C1, ClassLabel::C2, ClassLabel::C3];

    pub fn members(self) -> Vec<Elem> {
        Elem::ALL.into_iter().filter(|g| g.class() == self).collect()
    }

    /// Fixed representative r used for centralizers and basis changes.
    pub fn representative(self) -> Elem {
        match self {
            ClassLabel::C1 => Elem::E,
            ClassLabel::C2 => Elem::SIGMA,
            ClassLabel::C3 => Elem::MU,
        }
    }

    pub fn size(self) -> usize {
        match self {
            ClassLabel::C1 => 1,
            ClassLabel::C2 => 3,
            ClassLabel::C3 => 2,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Centralizer of the representative.
    pub fn centralizer(self) -> Vec<Elem> {
        centralizer(self.representative())
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index() + 1)
    }
}

impl FromStr for ClassLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C1" | "1" => Ok(ClassLabel::C1),
            "C2" | "2" => Ok(ClassLabel::C2),
            "C3" | "3" => Ok(ClassLabel::C3),
            _ => Err(Error::InvalidArgument(format!("unknown class '{s}'"))),
        }
    }
}

/// `{h : gh = hg}`, sorted by id.
pub fn centralizer(g: Elem) -> Vec<Elem> {
    Elem::ALL.into_iter().filter(|h| g.commutes_with(*h)).collect()
}

/// Canonical q with `c = q r q̄`: the smallest id that works.
pub fn q_rep(c: Elem, r: Elem) -> Result<Elem> {
    Elem::ALL
        .into_iter()
        .find(|q| q.conjugate(r) == c)
        .ok_or_else(|| Error::NotConjugate(c.to_string(), r.to_string()))
}

/// The commutator subgroup {g h ḡ h̄}.
pub fn derived_subgroup() -> Vec<Elem> {
    let mut out: Vec<Elem> = Elem::ALL
        .iter()
        .flat_map(|a| Elem::ALL.iter().map(move |b| Elem::commutator(*a, *b)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Groups on which irreps are defined: S3 and the centralizers Z(σ) ≅ Z2 and
/// Z(μ) ≅ Z3, realised as subgroups of S3.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum IrrepGroup {
    S3,
    Z2,
    Z3,
}

impl IrrepGroup {
    pub fn elements(self) -> Vec<Elem> {
        match self {
            IrrepGroup::S3 => Elem::ALL.to_vec(),
            IrrepGroup::Z2 => vec![Elem::E, Elem::SIGMA],
            IrrepGroup::Z3 => vec![Elem::E, Elem::MU, Elem::MU_BAR],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IrrepGroup::S3 => "S3",
            IrrepGroup::Z2 => "Z2",
            IrrepGroup::Z3 => "Z3",
        }
    }

    pub fn contains(self, g: Elem) -> bool {
        self.elements().contains(&g)
    }

    pub fn irreps(self) -> Vec<Irrep> {
        match self {
            IrrepGroup::S3 => vec![Irrep::S3Plus, Irrep::S3Minus, Irrep::S3Two],
            IrrepGroup::Z2 => vec![Irrep::Z2Plus, Irrep::Z2Minus],
            IrrepGroup::Z3 => vec![Irrep::Z3One, Irrep::Z3Omega, Irrep::Z3OmegaStar],
        }
    }

    /// Group of the centralizer of a class representative.
    pub fn for_class(class: ClassLabel) -> IrrepGroup {
        match class {
            ClassLabel::C1 => IrrepGroup::S3,
            ClassLabel::C2 => IrrepGroup::Z2,
            ClassLabel::C3 => IrrepGroup::Z3,
        }
    }
}

/// Irreducible representations of S3, Z2 = {e, σ} and Z3 = {e, μ, μ̄}.
///
/// The two-dimensional S3 irrep uses the basis {|2+⟩, |2−⟩} in which
/// Γ(μ) = diag(ω, ω*) and Γ(σ) swaps the basis vectors.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Irrep {
    S3Plus,
    S3Minus,
    S3Two,
    Z2Plus,
    Z2Minus,
    Z3One,
    Z3Omega,
    Z3OmegaStar,
}

impl Irrep {
    pub fn group(self) -> IrrepGroup {
        match self {
            Irrep::S3Plus | Irrep::S3Minus | Irrep::S3Two => IrrepGroup::S3,
            Irrep::Z2Plus | Irrep::Z2Minus => IrrepGroup::Z2,
            Irrep::Z3One | Irrep::Z3Omega | Irrep::Z3OmegaStar => IrrepGroup::Z3,
        }
    }

    pub fn dim(self) -> usize {
        if self == Irrep::S3Two {
            2
        } else {
            1
        }
    }

    /// Short label used in serialized anyon labels.
    pub fn label(self) -> &'static str {
        match self {
            Irrep::S3Plus | Irrep::Z2Plus => "+",
            Irrep::S3Minus | Irrep::Z2Minus => "-",
            Irrep::S3Two => "2",
            Irrep::Z3One => "1",
            Irrep::Z3Omega => "w",
            Irrep::Z3OmegaStar => "w*",
        }
    }

    pub fn parse(group: IrrepGroup, label: &str) -> Result<Irrep> {
        group
            .irreps()
            .into_iter()
            .find(|r| r.label() == label)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("no irrep '{label}' of {}", group.name()))
            })
    }

    /// Γ(g) as a `dim × dim` unitary matrix.
    pub fn matrix(self, g: Elem) -> Result<CMat> {
        if !self.group().contains(g) {
            return Err(Error::NotInGroup {
                elem: g.to_string(),
                group: self.group().name(),
            });
        }
        let a = g.rotation() as i64;
        let b = g.reflection();
        let sign = if b == 1 { -ONE } else { ONE };
        let m = match self {
            Irrep::S3Plus | Irrep::Z2Plus | Irrep::Z3One => CMat::identity(1),
            Irrep::S3Minus | Irrep::Z2Minus => CMat::from_rows(&[&[sign]]),
            Irrep::Z3Omega => CMat::from_rows(&[&[omega_pow(a)]]),
            Irrep::Z3OmegaStar => CMat::from_rows(&[&[omega_pow(-a)]]),
            Irrep::S3Two => {
                let d = CMat::from_rows(&[&[omega_pow(a), ZERO], &[ZERO, omega_pow(-a)]]);
                if b == 1 {
                    let x = CMat::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
                    &d * &x
                } else {
                    d
                }
            }
        };
        Ok(m)
    }

    pub fn character(self, g: Elem) -> Result<C64> {
        Ok(self.matrix(g)?.trace())
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.label())
    }
}

/// The eight anyon types A..H of the S3 quantum double.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum AnyonType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl AnyonType {
    pub const ALL: [AnyonType; 8] = [
        AnyonType::A,
        AnyonType::B,
        AnyonType::C,
        AnyonType::D,
        AnyonType::E,
        AnyonType::F,
        AnyonType::G,
        AnyonType::H,
    ];

    pub fn flux_class(self) -> ClassLabel {
        match self {
            AnyonType::A | AnyonType::B | AnyonType::C => ClassLabel::C1,
            AnyonType::D | AnyonType::E => ClassLabel::C2,
            _ => ClassLabel::C3,
        }
    }

    pub fn charge(self) -> Irrep {
        match self {
            AnyonType::A => Irrep::S3Plus,
            AnyonType::B => Irrep::S3Minus,
            AnyonType::C => Irrep::S3Two,
            AnyonType::D => Irrep::Z2Plus,
            AnyonType::E => Irrep::Z2Minus,
            AnyonType::F => Irrep::Z3One,
            AnyonType::G => Irrep::Z3Omega,
            AnyonType::H => Irrep::Z3OmegaStar,
        }
    }

    /// Quantum dimension |C| · dim R.
    pub fn qdim(self) -> usize {
        self.flux_class().size() * self.charge().dim()
    }

    pub fn from_parts(class: ClassLabel, charge: Irrep) -> Result<AnyonType> {
        AnyonType::ALL
            .into_iter()
            .find(|t| t.flux_class() == class && t.charge() == charge)
            .ok_or_else(|| Error::InvalidArgument(format!("{charge} is not an irrep of Z({class})")))
    }

    pub fn letter(self) -> char {
        (b'A' + self as u8) as char
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for AnyonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: S3 as permutations of {0,1,2}, composed right to left.
    fn perm(g: Elem) -> [usize; 3] {
        let mu = [1, 2, 0];
        let sigma = [0, 2, 1];
        let compose = |p: [usize; 3], q: [usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
        let id = [0, 1, 2];
        let mut out = id;
        for _ in 0..g.rotation() {
            out = compose(out, mu);
        }
        if g.reflection() == 1 {
            out = compose(out, sigma);
        }
        out
    }

    #[test]
    fn cayley_table_matches_permutation_composition() {
        for g in Elem::ALL {
            for h in Elem::ALL {
                let p = perm(g);
                let q = perm(h);
                let composed = [p[q[0]], p[q[1]], p[q[2]]];
                assert_eq!(perm(g * h), composed, "{g}·{h}");
            }
        }
    }

    #[test]
    fn named_elements_are_the_expected_permutations() {
        assert_eq!(perm(Elem::MU), [1, 2, 0]);
        assert_eq!(perm(Elem::SIGMA), [0, 2, 1]);
        assert_eq!(perm(Elem::MU_SIGMA), [1, 0, 2]);
        assert_eq!(perm(Elem::MU_BAR_SIGMA), [2, 1, 0]);
    }

    #[test]
    fn mu_sigma_relation() {
        assert_eq!(Elem::MU * Elem::SIGMA, Elem::MU_SIGMA);
        assert_eq!(Elem::SIGMA * Elem::MU_BAR, Elem::MU_SIGMA);
        assert_eq!(Elem::MU * Elem::MU, Elem::MU_BAR);
    }

    #[test]
    fn inverses() {
        assert_eq!(Elem::SIGMA.inv(), Elem::SIGMA);
        assert_eq!(Elem::MU.inv(), Elem::MU_BAR);
        for g in Elem::ALL {
            assert_eq!(g * g.inv(), Elem::E);
            assert_eq!(g.inv().inv(), g);
            assert_eq!(Elem::E * g, g);
        }
    }

    #[test]
    fn associativity_all_triples() {
        for a in Elem::ALL {
            for b in Elem::ALL {
                for c in Elem::ALL {
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
    }

    #[test]
    fn classes_partition_and_are_closed() {
        let sizes: Vec<usize> = ClassLabel::ALL.iter().map(|c| c.members().len()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        for c in ClassLabel::ALL {
            assert_eq!(c.size(), c.members().len());
            for g in c.members() {
                for q in Elem::ALL {
                    assert_eq!(q.conjugate(g).class(), c);
                }
            }
        }
    }

    #[test]
    fn centralizers() {
        assert_eq!(centralizer(Elem::E).len(), 6);
        assert_eq!(centralizer(Elem::MU_SIGMA), vec![Elem::E, Elem::MU_SIGMA]);
        // brute force: μ commutes exactly with the rotations
        assert_eq!(centralizer(Elem::MU), vec![Elem::E, Elem::MU, Elem::MU_BAR]);
        assert_eq!(ClassLabel::C3.centralizer(), IrrepGroup::Z3.elements());
        assert_eq!(ClassLabel::C2.centralizer(), IrrepGroup::Z2.elements());
    }

    #[test]
    fn q_rep_conjugates_and_is_minimal() {
        assert_eq!(q_rep(Elem::SIGMA, Elem::SIGMA).unwrap(), Elem::E);
        for c in ClassLabel::ALL {
            let r = c.representative();
            for m in c.members() {
                let q = q_rep(m, r).unwrap();
                assert_eq!(q.conjugate(r), m);
                for smaller in Elem::ALL.into_iter().filter(|x| x.id() < q.id()) {
                    assert_ne!(smaller.conjugate(r), m);
                }
            }
        }
        let q = q_rep(Elem::MU_SIGMA, Elem::SIGMA).unwrap();
        assert_eq!(q, Elem::MU_BAR);
        assert!(q_rep(Elem::MU, Elem::SIGMA).is_err());
    }

    #[test]
    fn derived_subgroup_is_rotations() {
        assert_eq!(derived_subgroup(), vec![Elem::E, Elem::MU, Elem::MU_BAR]);
    }

    fn all_irreps() -> Vec<Irrep> {
        [IrrepGroup::S3, IrrepGroup::Z2, IrrepGroup::Z3]
            .iter()
            .flat_map(|g| g.irreps())
            .collect()
    }

    #[test]
    fn irreps_are_unitary_homomorphisms() {
        for r in all_irreps() {
            let els = r.group().elements();
            assert!(r.matrix(Elem::E).unwrap().max_abs_diff(&CMat::identity(r.dim())) < 1e-12);
            for &g in &els {
                let mg = r.matrix(g).unwrap();
                assert!(mg.is_unitary(1e-12));
                for &h in &els {
                    let lhs = r.matrix(g * h).unwrap();
                    let rhs = &mg * &r.matrix(h).unwrap();
                    assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{r} {g} {h}");
                }
            }
        }
    }

    #[test]
    fn dimension_sum_rule() {
        for g in [IrrepGroup::S3, IrrepGroup::Z2, IrrepGroup::Z3] {
            let s: usize = g.irreps().iter().map(|r| r.dim() * r.dim()).sum();
            assert_eq!(s, g.elements().len());
        }
    }

    #[test]
    fn character_orthogonality() {
        for grp in [IrrepGroup::S3, IrrepGroup::Z2, IrrepGroup::Z3] {
            let els = grp.elements();
            for r in grp.irreps() {
                for r2 in grp.irreps() {
                    let s: C64 = els
                        .iter()
                        .map(|&g| r.character(g).unwrap() * r2.character(g).unwrap().conj())
                        .sum();
                    let expected = if r == r2 { els.len() as f64 } else { 0.0 };
                    assert!((s - C64::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn characters() {
        assert!((Irrep::S3Two.character(Elem::MU).unwrap() + ONE).norm() < 1e-12);
        assert!(Irrep::S3Two.character(Elem::SIGMA).unwrap().norm() < 1e-12);
        for r in all_irreps() {
            let chi = r.character(Elem::E).unwrap();
            assert!((chi - C64::new(r.dim() as f64, 0.0)).norm() < 1e-12);
        }
        assert!(Irrep::Z3Omega.character(Elem::SIGMA).is_err());
    }

    #[test]
    fn two_dim_matrices_in_fixed_basis() {
        let w = omega_pow(1);
        let m = Irrep::S3Two.matrix(Elem::MU).unwrap();
        assert!(m.max_abs_diff(&CMat::from_rows(&[&[w, ZERO], &[ZERO, w.conj()]])) < 1e-15);
        let s = Irrep::S3Two.matrix(Elem::SIGMA).unwrap();
        assert!(s.max_abs_diff(&CMat::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])) < 1e-15);
        let ms = Irrep::S3Two.matrix(Elem::MU_SIGMA).unwrap();
        assert!(ms.max_abs_diff(&CMat::from_rows(&[&[ZERO, w], &[w.conj(), ZERO]])) < 1e-15);
    }

    #[test]
    fn anyon_types() {
        let d: Vec<usize> = AnyonType::ALL.iter().map(|a| a.qdim()).collect();
        assert_eq!(d, vec![1, 1, 2, 3, 3, 2, 2, 2]);
        assert_eq!(d.iter().map(|x| x * x).sum::<usize>(), 36);
        for a in AnyonType::ALL {
            assert_eq!(AnyonType::from_parts(a.flux_class(), a.charge()).unwrap(), a);
            assert_eq!(IrrepGroup::for_class(a.flux_class()), a.charge().group());
        }
    }

    #[test]
    fn tokens_round_trip() {
        for g in Elem::ALL {
            assert_eq!(g.token().parse::<Elem>().unwrap(), g);
        }
        assert!("x".parse::<Elem>().is_err());
    }
}
