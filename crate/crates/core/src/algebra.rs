//! Exact 2×2 linear algebra on SL(2) and its Lie algebra 𝔰𝔩(2).
//!
//! The algebra is spanned by
//!
//! ```text
//! p1 = ½(e11 − e22),   p2 = ½(e12 + e21),   k = ½(e21 − e12)
//! ```
//!
//! with `p1, p2` spanning the horizontal distribution and `k` generating the
//! rotation subgroup SO(2). Every matrix exponential here is evaluated in
//! closed form through the Cayley–Hamilton identity `x² = −det(x)·e`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{Result, Sl2Error};

/// Relative tolerance on `det(g) = 1` accepted by [`GroupElement::new`].
pub const DET_TOL: f64 = 1e-10;

/// Relative tolerance of the symmetry test `g12 = g21`.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Largest |trace| accepted by [`AlgebraVector::project`].
pub const TRACE_TOL: f64 = 1e-12;

// Below this |s| (i.e. α < 1e-6) the even/odd exponential kernels switch to
// their 4-term Taylor expansions.
const SERIES_CUTOFF: f64 = 1e-12;

/// `cosh(√s)` for `s ≥ 0` and `cos(√−s)` for `s < 0`.
pub(crate) fn cosh_sqrt(s: f64) -> f64 {
    if s.abs() < SERIES_CUTOFF {
        1.0 + s / 2.0 + s * s / 24.0 + s * s * s / 720.0
    } else if s > 0.0 {
        s.sqrt().cosh()
    } else {
        (-s).sqrt().cos()
    }
}

/// `sinh(√s)/√s` for `s ≥ 0` and `sin(√−s)/√−s` for `s < 0`.
pub(crate) fn sinhc_sqrt(s: f64) -> f64 {
    if s.abs() < SERIES_CUTOFF {
        1.0 + s / 6.0 + s * s / 120.0 + s * s * s / 5040.0
    } else if s > 0.0 {
        let a = s.sqrt();
        a.sinh() / a
    } else {
        let a = (-s).sqrt();
        a.sin() / a
    }
}

/// Reduces an angle to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.sin().atan2(x.cos());
    if y <= -PI {
        PI
    } else {
        y
    }
}

/// Element `c1·p1 + c2·p2 + c3·k` of 𝔰𝔩(2).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct AlgebraVector {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl AlgebraVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const P1: Self = Self::new(1.0, 0.0, 0.0);
    pub const P2: Self = Self::new(0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    /// The traceless matrix `c1·p1 + c2·p2 + c3·k`.
    pub fn assemble(&self) -> Matrix2<f64> {
        Matrix2::new(
            0.5 * self.c1,
            0.5 * (self.c2 - self.c3),
            0.5 * (self.c2 + self.c3),
            -0.5 * self.c1,
        )
    }

    /// Coordinates of a traceless matrix in the `(p1, p2, k)` basis.
    pub fn project(x: &Matrix2<f64>) -> Result<Self> {
        let trace = x[(0, 0)] + x[(1, 1)];
        if !trace.is_finite() || trace.abs() > TRACE_TOL {
            return Err(Sl2Error::NotTraceless { trace });
        }
        Ok(Self::new(
            x[(0, 0)] - x[(1, 1)],
            x[(0, 1)] + x[(1, 0)],
            x[(1, 0)] - x[(0, 1)],
        ))
    }

    /// Determinant of the assembled matrix, `(−c1² − c2² + c3²)/4`.
    pub fn det(&self) -> f64 {
        0.25 * (self.c3 * self.c3 - self.c1 * self.c1 - self.c2 * self.c2)
    }

    pub fn bracket(&self, other: &Self) -> Self {
        lie_bracket(self, other)
    }

    /// `Ad exp(φk)`: rotates the horizontal part by φ and fixes `k`.
    pub fn rotate(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(c * self.c1 - s * self.c2, s * self.c1 + c * self.c2, self.c3)
    }

    pub fn sup_norm(&self) -> f64 {
        self.c1.abs().max(self.c2.abs()).max(self.c3.abs())
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }
}

impl Add for AlgebraVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.c1 + rhs.c1, self.c2 + rhs.c2, self.c3 + rhs.c3)
    }
}

impl Sub for AlgebraVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.c1 - rhs.c1, self.c2 - rhs.c2, self.c3 - rhs.c3)
    }
}

impl Neg for AlgebraVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c1, -self.c2, -self.c3)
    }
}

impl Mul<f64> for AlgebraVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.c1 * rhs, self.c2 * rhs, self.c3 * rhs)
    }
}

impl Mul<AlgebraVector> for f64 {
    type Output = AlgebraVector;
    fn mul(self, rhs: AlgebraVector) -> AlgebraVector {
        rhs * self
    }
}

/// Lie bracket from the structure constants
/// `[p1,p2] = −k`, `[p1,k] = −p2`, `[p2,k] = p1`.
pub fn lie_bracket(a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
    AlgebraVector::new(
        a.c2 * b.c3 - a.c3 * b.c2,
        a.c3 * b.c1 - a.c1 * b.c3,
        a.c2 * b.c1 - a.c1 * b.c2,
    )
}

/// Closed-form exponential of a traceless 2×2 matrix:
/// `exp(x) = C(−det x)·e + S(−det x)·x` with `C = cosh √·` / `cos √−·`
/// and `S` the matching `sinh α/α` or `sin α/α`.
pub fn mat_exp(x: &AlgebraVector) -> GroupElement {
    let s = -x.det();
    let c = cosh_sqrt(s);
    let f = sinhc_sqrt(s);
    let m = x.assemble() * f + Matrix2::identity() * c;
    GroupElement(m)
}

/// A point of SL(2): a real 2×2 matrix with unit determinant.
#[derive(Clone, Copy, PartialEq)]
pub struct GroupElement(Matrix2<f64>);

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries();
        write!(f, "GroupElement[[{a}, {b}], [{c}, {d}]]")
    }
}

impl GroupElement {
    /// Row-major constructor; fails unless `|det − 1| ≤ DET_TOL·max(1, ‖g‖∞²)`.
    pub fn new(g11: f64, g12: f64, g21: f64, g22: f64) -> Result<Self> {
        Self::from_matrix(Matrix2::new(g11, g12, g21, g22))
    }

    pub fn from_matrix(m: Matrix2<f64>) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Sl2Error::NonFinite("matrix entry"));
        }
        let g = Self(m);
        let tol = g.det_tolerance(DET_TOL);
        let det = g.det();
        if (det - 1.0).abs() > tol {
            return Err(Sl2Error::NotUnimodular { det, tol });
        }
        Ok(g)
    }

    /// Wraps a matrix that is unimodular by construction.
    pub(crate) fn from_matrix_unchecked(m: Matrix2<f64>) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    /// `exp(φk)`, the rotation by the half-angle φ/2.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = (0.5 * phi).sin_cos();
        Self(Matrix2::new(c, -s, s, c))
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.0
    }

    /// Entries in row-major order `g11, g12, g21, g22`.
    pub fn entries(&self) -> [f64; 4] {
        [self.0[(0, 0)], self.0[(0, 1)], self.0[(1, 0)], self.0[(1, 1)]]
    }

    pub fn trace(&self) -> f64 {
        self.0[(0, 0)] + self.0[(1, 1)]
    }

    pub fn det(&self) -> f64 {
        self.0[(0, 0)] * self.0[(1, 1)] - self.0[(0, 1)] * self.0[(1, 0)]
    }

    /// Absolute determinant tolerance for entries of this magnitude.
    pub fn det_tolerance(&self, rel: f64) -> f64 {
        let s = self.sup_norm().max(1.0);
        rel * s * s
    }

    /// Inverse, using `det = 1`.
    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.entries();
        Self(Matrix2::new(d, -b, -c, a))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn neg(&self) -> Self {
        Self(-self.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// `‖self − other‖∞`.
    pub fn sup_dist(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// `|g12 − g21| ≤ tol·max(1, ‖g‖∞)`.
    pub fn is_symmetric_within(&self, tol: f64) -> bool {
        (self.0[(0, 1)] - self.0[(1, 0)]).abs() <= tol * self.sup_norm().max(1.0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_symmetric_within(SYMMETRY_TOL)
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement(self.0 * rhs.0)
    }
}

impl Mul<&GroupElement> for &GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        GroupElement(self.0 * rhs.0)
    }
}

/// `m(g) = √((g11 − g22)² + (g12 + g21)²)/2`, the size of the symmetric
/// trace-free part; invariant under SO(2) conjugation.
pub fn m_invariant(g: &GroupElement) -> f64 {
    let [a, b, c, d] = g.entries();
    0.5 * (a - d).hypot(b + c)
}

/// Position of a group element relative to the symmetric set `Sim = Sim⁺ ∪ Sim⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SymClass {
    /// Symmetric with trace ≥ 2, written as
    /// `g = R(b)·diag(eᵃ, e⁻ᵃ)·R(b)ᵀ` with `a ≥ 0` and `b ∈ [0, π)`.
    SimPlus { a: f64, b: f64 },
    /// Symmetric with trace ≤ −2.
    SimMinus,
    NotSymmetric,
}

pub fn classify_symmetric(g: &GroupElement) -> SymClass {
    if !g.is_symmetric() {
        return SymClass::NotSymmetric;
    }
    if g.trace() < 0.0 {
        return SymClass::SimMinus;
    }
    let m = m_invariant(g);
    if m == 0.0 {
        return SymClass::SimPlus { a: 0.0, b: 0.0 };
    }
    let [g11, g12, g21, g22] = g.entries();
    let a = m.asinh();
    // cos 2b = (g11 − g22)/2m, sin 2b = g12/m, with g12 averaged against g21.
    let two_b = (0.5 * (g12 + g21)).atan2(0.5 * (g11 - g22));
    let mut b = 0.5 * two_b;
    if b < 0.0 {
        b += PI;
    }
    if b >= PI {
        b -= PI;
    }
    SymClass::SimPlus { a, b }
}

/// The Sim⁺ element with data `(a, b)`:
/// `[[ch a + cos 2b sh a, sin 2b sh a], [sin 2b sh a, ch a − cos 2b sh a]]`.
pub fn sim_plus(a: f64, b: f64) -> GroupElement {
    let (ch, sh) = (a.cosh(), a.sinh());
    let (s2, c2) = (2.0 * b).sin_cos();
    GroupElement(Matrix2::new(ch + c2 * sh, s2 * sh, s2 * sh, ch - c2 * sh))
}

/// `B·g·B⁻¹` with `B = exp(φk)`.
pub fn conjugate_by_rotation(g: &GroupElement, phi: f64) -> GroupElement {
    let b = GroupElement::rotation(phi);
    &(&b * g) * &b.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn assemble_basis() {
        let p1 = AlgebraVector::P1.assemble();
        assert_eq!(p1, Matrix2::new(0.5, 0.0, 0.0, -0.5));
        let k = AlgebraVector::K.assemble();
        assert_eq!(k, Matrix2::new(0.0, -0.5, 0.5, 0.0));
        assert_eq!(AlgebraVector::ZERO.assemble(), Matrix2::zeros());
        let p2 = AlgebraVector::P2.assemble();
        assert_eq!(p2, Matrix2::new(0.0, 0.5, 0.5, 0.0));
    }

    #[test]
    fn project_inverts_assemble() {
        let v = AlgebraVector::new(0.3, -1.7, 2.5);
        let back = AlgebraVector::project(&v.assemble()).unwrap();
        assert!((back - v).sup_norm() < 1e-15);
    }

    #[test]
    fn project_rejects_trace() {
        let err = AlgebraVector::project(&Matrix2::new(1.0, 0.0, 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Sl2Error::NotTraceless { .. }));
    }

    #[test]
    fn det_formula_matches_matrix() {
        let v = AlgebraVector::new(0.4, 1.1, -2.0);
        assert!(close(v.det(), v.assemble().determinant(), 1e-15));
    }

    #[test]
    fn structure_constants() {
        use AlgebraVector as V;
        assert_eq!(lie_bracket(&V::P1, &V::P2), -V::K);
        assert_eq!(lie_bracket(&V::P1, &V::K), -V::P2);
        assert_eq!(lie_bracket(&V::P2, &V::K), V::P1);
        assert_eq!(lie_bracket(&V::P1, &V::P1), V::ZERO);
    }

    #[test]
    fn bracket_matches_commutator() {
        let a = AlgebraVector::new(0.7, -0.2, 1.3);
        let b = AlgebraVector::new(-1.1, 0.5, 0.4);
        let (ma, mb) = (a.assemble(), b.assemble());
        let comm = AlgebraVector::project(&(ma * mb - mb * ma)).unwrap();
        assert!((comm - lie_bracket(&a, &b)).sup_norm() < 1e-15);
    }

    #[test]
    fn exp_of_rotation_generator() {
        let phi = 1.234;
        let g = mat_exp(&(AlgebraVector::K * phi));
        let [a, b, c, d] = g.entries();
        let (s, co) = (phi / 2.0).sin_cos();
        assert!(close(a, co, 1e-15) && close(b, -s, 1e-15));
        assert!(close(c, s, 1e-15) && close(d, co, 1e-15));
    }

    #[test]
    fn exp_of_zero_and_p1() {
        assert_eq!(mat_exp(&AlgebraVector::ZERO), GroupElement::identity());
        let t = 0.8;
        let g = mat_exp(&(AlgebraVector::P1 * t));
        let [a, b, c, d] = g.entries();
        assert!(close(a, (t / 2.0).exp(), 1e-14) && close(d, (-t / 2.0).exp(), 1e-14));
        assert_eq!((b, c), (0.0, 0.0));
    }

    #[test]
    fn exp_nilpotent_branch() {
        // det = 0 exactly for c3² = c1² + c2².
        let x = AlgebraVector::new(0.0, 1.0, 1.0);
        assert_eq!(x.det(), 0.0);
        let g = mat_exp(&x);
        let expected = Matrix2::identity() + x.assemble();
        assert!((g.matrix() - expected).abs().max() < 1e-15);
    }

    #[test]
    fn exp_series_switch_is_seamless() {
        // α just above and below 1e-6.
        for &alpha in &[0.9e-6, 1.1e-6] {
            let x = AlgebraVector::new(2.0 * alpha, 0.0, 0.0);
            let g = mat_exp(&x);
            assert!(close(g.entries()[0], alpha.exp(), 1e-15));
            let y = AlgebraVector::new(0.0, 0.0, 2.0 * alpha);
            let h = mat_exp(&y);
            assert!(close(h.entries()[2], alpha.sin(), 1e-20));
        }
    }

    #[test]
    fn group_element_rejects_bad_det() {
        assert!(matches!(
            GroupElement::new(1.0, 0.0, 0.0, 2.0),
            Err(Sl2Error::NotUnimodular { .. })
        ));
        assert!(GroupElement::new(f64::NAN, 0.0, 0.0, 1.0).is_err());
        assert!(GroupElement::new(2.0, 0.0, 0.0, 0.5).is_ok());
    }

    #[test]
    fn m_invariant_examples() {
        assert_eq!(m_invariant(&GroupElement::identity()), 0.0);
        assert!(m_invariant(&GroupElement::rotation(2.1)) < 1e-16);
        let g = GroupElement::new(E, 0.0, 0.0, 1.0 / E).unwrap();
        assert!(close(m_invariant(&g), 1.1752011936438014, 1e-15));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_symmetric(&GroupElement::identity().neg()), SymClass::SimMinus);
        assert_eq!(
            classify_symmetric(&GroupElement::identity()),
            SymClass::SimPlus { a: 0.0, b: 0.0 }
        );
        let g = GroupElement::new(E, 0.0, 0.0, 1.0 / E).unwrap();
        match classify_symmetric(&g) {
            SymClass::SimPlus { a, b } => {
                assert!(close(a, 1.0, 1e-15));
                assert_eq!(b, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            classify_symmetric(&GroupElement::rotation(0.5)),
            SymClass::NotSymmetric
        );
    }

    #[test]
    fn sim_plus_round_trip() {
        for &(a, b) in &[(0.3, 0.1), (2.0, 1.5), (1.0, 3.0), (0.7, 0.0)] {
            let g = sim_plus(a, b);
            match classify_symmetric(&g) {
                SymClass::SimPlus { a: a2, b: b2 } => {
                    assert!(close(a, a2, 1e-12) && close(b, b2, 1e-12), "{a} {b} -> {a2} {b2}");
                    assert!(sim_plus(a2, b2).sup_dist(&g) < 1e-10);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let e = GroupElement::identity();
        assert!(conjugate_by_rotation(&e, 0.77).sup_dist(&e) < 1e-15);
        let g = GroupElement::new(E, 0.0, 0.0, 1.0 / E).unwrap();
        // exp(πk) is the quarter-turn rotation, which swaps the axes.
        let swapped = conjugate_by_rotation(&g, PI);
        assert!(swapped.sup_dist(&GroupElement::new(1.0 / E, 0.0, 0.0, E).unwrap()) < 1e-14);
        // exp(πk/2) turns by π/4: cosh 1 on the diagonal, sinh 1 off it.
        let h = conjugate_by_rotation(&g, PI / 2.0);
        let [a, b, c, d] = h.entries();
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        assert!(close(a, ch, 1e-14) && close(d, ch, 1e-14));
        assert!(close(b, sh, 1e-14) && close(c, sh, 1e-14));
    }

    #[test]
    fn ad_rotation_of_p1_plus_beta_k() {
        let beta = 0.9;
        let phi = 0.4;
        let v = AlgebraVector::new(1.0, 0.0, beta);
        let b = GroupElement::rotation(phi);
        let conj = b.matrix() * v.assemble() * b.inverse().matrix();
        let w = AlgebraVector::project(&conj).unwrap();
        let expected = AlgebraVector::new(phi.cos(), phi.sin(), beta);
        assert!((w - expected).sup_norm() < 1e-15);
        assert!((v.rotate(phi) - expected).sup_norm() < 1e-15);
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!(close(wrap_angle(-PI), PI, 1e-15));
        assert!(close(wrap_angle(3.0 * PI / 2.0), -PI / 2.0, 1e-15));
    }
}
