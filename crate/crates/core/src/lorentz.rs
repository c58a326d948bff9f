//! Real four-vectors and 4×4 Lorentz-type matrices with the mostly-minus metric.
//!
//! Components are ordered `(t, x, y, z)`. The Minkowski pairing is
//! `η(u, v) = u⁰v⁰ − u¹v¹ − u²v² − u³v³`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector3, Vector4};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The metric `diag(1, −1, −1, −1)`.
pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// A real four-vector `(x⁰, x¹, x², x³)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct FourVector(Vector4<f64>);

impl FourVector {
    pub const ZERO: FourVector = FourVector(Vector4::new(0.0, 0.0, 0.0, 0.0));

    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector(Vector4::new(t, x, y, z))
    }

    /// The lightlike vector `ω(1, n̂)`.
    pub fn lightlike(omega: f64, direction: Direction) -> Self {
        let n = direction.unit();
        FourVector::new(omega, omega * n.x, omega * n.y, omega * n.z)
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.0[1], self.0[2], self.0[3])
    }

    pub fn as_vector(&self) -> &Vector4<f64> {
        &self.0
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    /// Minkowski pairing `η(self, other)`.
    pub fn minkowski(&self, other: &FourVector) -> f64 {
        self.0[0] * other.0[0] - self.0[1] * other.0[1] - self.0[2] * other.0[2] - self.0[3] * other.0[3]
    }

    /// `η(p, p)`.
    pub fn interval(&self) -> f64 {
        self.minkowski(self)
    }

    /// Squared Euclidean norm of the components, used for relative tolerances.
    pub fn euclidean_norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn max_abs_diff(&self, other: &FourVector) -> f64 {
        (self.0 - other.0).amax()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }
}

impl From<[f64; 4]> for FourVector {
    fn from(c: [f64; 4]) -> Self {
        FourVector::new(c[0], c[1], c[2], c[3])
    }
}

impl From<FourVector> for [f64; 4] {
    fn from(v: FourVector) -> Self {
        v.to_array()
    }
}

impl Index<usize> for FourVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;

    fn add(self, rhs: FourVector) -> FourVector {
        FourVector(self.0 + rhs.0)
    }
}

impl Sub for FourVector {
    type Output = FourVector;

    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector(self.0 - rhs.0)
    }
}

impl Neg for FourVector {
    type Output = FourVector;

    fn neg(self) -> FourVector {
        FourVector(-self.0)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;

    fn mul(self, rhs: f64) -> FourVector {
        FourVector(self.0 * rhs)
    }
}

impl fmt::Display for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// A spatial direction `n̂(θ, φ) = (sin θ cos φ, sin θ sin φ, cos θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    /// The optical axis `ẑ`.
    pub const Z: Direction = Direction { theta: 0.0, phi: 0.0 };

    pub fn new(theta: f64, phi: f64) -> Self {
        Direction { theta, phi }
    }

    pub fn unit(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// Whether two directions describe the same unit vector.
    pub fn same_axis(&self, other: &Direction) -> bool {
        (self.unit() - other.unit()).amax() <= 1e-12
    }

    /// An orthonormal pair spanning the plane orthogonal to `n̂`.
    pub fn transverse_basis(&self) -> (Vector3<f64>, Vector3<f64>) {
        let n = self.unit();
        let seed = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = (seed - n * n.dot(&seed)).normalize();
        let e2 = n.cross(&e1);
        (e1, e2)
    }
}

/// Which matrix represents `Λ∞`.
///
/// `Coordinate` is the swap `S` of `t` with `n̂·x` (transverse plane fixed),
/// which leaves `p₀ = ω(1, n̂)` invariant. `Momentum` is `−S`, which sends
/// `p₀` to the backward representative `−p₀`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    Coordinate,
    #[default]
    Momentum,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::Coordinate => f.write_str("coordinate"),
            Convention::Momentum => f.write_str("momentum"),
        }
    }
}

/// Provenance label carried by a [`LorentzMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementTag {
    ProperOrthochronous,
    Identity,
    MinusIdentity,
    LambdaInf,
    MinusLambdaInf,
    Product,
}

impl ElementTag {
    /// Whether the tag names an element of the discrete set `Z = {I, −I, Λ∞, −Λ∞}`.
    pub fn in_z(self) -> bool {
        matches!(
            self,
            ElementTag::Identity | ElementTag::MinusIdentity | ElementTag::LambdaInf | ElementTag::MinusLambdaInf
        )
    }
}

/// A spatial axis for the generator constructors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn unit(self) -> Vector3<f64> {
        match self {
            Axis::X => Vector3::x(),
            Axis::Y => Vector3::y(),
            Axis::Z => Vector3::z(),
        }
    }
}

/// A real 4×4 matrix acting on four-vectors, labelled by how it was built.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMatrix {
    entries: Matrix4<f64>,
    tag: ElementTag,
}

impl LorentzMatrix {
    pub fn from_entries(entries: Matrix4<f64>, tag: ElementTag) -> Self {
        LorentzMatrix { entries, tag }
    }

    pub fn identity() -> Self {
        LorentzMatrix { entries: Matrix4::identity(), tag: ElementTag::Identity }
    }

    pub fn minus_identity() -> Self {
        LorentzMatrix { entries: -Matrix4::identity(), tag: ElementTag::MinusIdentity }
    }

    /// Pure boost with rapidity `chi` along a coordinate axis.
    pub fn boost(axis: Axis, chi: f64) -> Self {
        Self::boost_along(axis.unit(), chi)
    }

    /// Pure rotation by `angle` about a coordinate axis (right-handed).
    pub fn rotation(axis: Axis, angle: f64) -> Self {
        Self::rotation_about(axis.unit(), angle)
    }

    /// Boost with rapidity `chi` along the unit vector `n`.
    pub fn boost_along(n: Vector3<f64>, chi: f64) -> Self {
        let (sh, ch) = (chi.sinh(), chi.cosh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        for i in 0..3 {
            m[(0, i + 1)] = sh * n[i];
            m[(i + 1, 0)] = sh * n[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] += (ch - 1.0) * n[i] * n[j];
            }
        }
        LorentzMatrix { entries: m, tag: ElementTag::ProperOrthochronous }
    }

    /// Rodrigues rotation by `angle` about the unit vector `n`.
    pub fn rotation_about(n: Vector3<f64>, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let k = nalgebra::Matrix3::new(0.0, -n.z, n.y, n.z, 0.0, -n.x, -n.y, n.x, 0.0);
        let r = nalgebra::Matrix3::identity() * c + k * s + n * n.transpose() * (1.0 - c);
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(&r);
        LorentzMatrix { entries: m, tag: ElementTag::ProperOrthochronous }
    }

    /// The involution `Λ∞(θ, φ)` in the requested convention.
    pub fn lambda_inf(direction: Direction, convention: Convention) -> Self {
        let swap = swap_time_with_axis(direction);
        let entries = match convention {
            Convention::Coordinate => swap,
            Convention::Momentum => -swap,
        };
        LorentzMatrix { entries, tag: ElementTag::LambdaInf }
    }

    /// `Λ₋∞ = −Λ∞` in the requested convention.
    pub fn minus_lambda_inf(direction: Direction, convention: Convention) -> Self {
        let m = Self::lambda_inf(direction, convention);
        LorentzMatrix { entries: -m.entries, tag: ElementTag::MinusLambdaInf }
    }

    pub fn entries(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn tag(&self) -> ElementTag {
        self.tag
    }

    pub fn apply(&self, v: &FourVector) -> FourVector {
        FourVector(self.entries * v.0)
    }

    pub fn compose(&self, rhs: &LorentzMatrix) -> LorentzMatrix {
        let tag = match (self.tag, rhs.tag) {
            (ElementTag::Identity, t) | (t, ElementTag::Identity) => t,
            (ElementTag::ProperOrthochronous, ElementTag::ProperOrthochronous) => ElementTag::ProperOrthochronous,
            _ => ElementTag::Product,
        };
        LorentzMatrix { entries: self.entries * rhs.entries, tag }
    }

    pub fn transpose(&self) -> LorentzMatrix {
        LorentzMatrix { entries: self.entries.transpose(), tag: ElementTag::Product }
    }

    /// Inverse matrix. Elements of `Z` are their own inverses up to sign, proper
    /// Lorentz matrices use `η Mᵀ η`; anything else falls back to LU.
    pub fn inverse(&self) -> LorentzMatrix {
        let entries = match self.tag {
            ElementTag::Identity | ElementTag::MinusIdentity | ElementTag::LambdaInf | ElementTag::MinusLambdaInf => {
                self.entries
            }
            ElementTag::ProperOrthochronous => {
                let eta = metric();
                eta * self.entries.transpose() * eta
            }
            ElementTag::Product => self.entries.try_inverse().expect("product of invertible generators is invertible"),
        };
        LorentzMatrix { entries, tag: self.tag }
    }

    /// `z · self · z⁻¹`.
    pub fn conjugate_by(&self, z: &LorentzMatrix) -> LorentzMatrix {
        let entries = z.entries * self.entries * z.inverse().entries;
        LorentzMatrix { entries, tag: ElementTag::Product }
    }

    /// `max |Mᵀ η M − η|`, zero for a Lorentz matrix.
    pub fn metric_defect(&self) -> f64 {
        let eta = metric();
        (self.entries.transpose() * eta * self.entries - eta).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }

    pub fn max_abs_diff(&self, other: &LorentzMatrix) -> f64 {
        (self.entries - other.entries).amax()
    }
}

impl Mul for LorentzMatrix {
    type Output = LorentzMatrix;

    fn mul(self, rhs: LorentzMatrix) -> LorentzMatrix {
        self.compose(&rhs)
    }
}

impl Mul<FourVector> for LorentzMatrix {
    type Output = FourVector;

    fn mul(self, rhs: FourVector) -> FourVector {
        self.apply(&rhs)
    }
}

/// `S(θ, φ)`: `t ↦ n̂·x`, `n̂·x ↦ t`, transverse components fixed.
fn swap_time_with_axis(direction: Direction) -> Matrix4<f64> {
    let n = direction.unit();
    let mut m = Matrix4::identity();
    m[(0, 0)] = 0.0;
    for i in 0..3 {
        m[(0, i + 1)] = n[i];
        m[(i + 1, 0)] = n[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] -= n[i] * n[j];
        }
    }
    m
}

/// Random proper orthochronous element `R₁ · B(χ) · R₂` with `|χ| ≤ max_rapidity`
/// along a random coordinate axis and rotations by random angles about random axes.
pub fn sample_proper_orthochronous<R: Rng + ?Sized>(rng: &mut R, max_rapidity: f64) -> LorentzMatrix {
    let pick = |rng: &mut R| Axis::ALL[rng.random_range(0..3)];
    let r1 = LorentzMatrix::rotation(pick(rng), rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
    let b = LorentzMatrix::boost(pick(rng), rng.random_range(-max_rapidity..=max_rapidity));
    let r2 = LorentzMatrix::rotation(pick(rng), rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
    r1 * b * r2
}

/// Builds the four-vector whose `(t, n̂·x)` components are `(t, along)` and whose
/// transverse components are `(e1, e2)` in [`Direction::transverse_basis`].
pub fn in_axis_frame(direction: Direction, t: f64, along: f64, e1: f64, e2: f64) -> FourVector {
    let n = direction.unit();
    let (b1, b2) = direction.transverse_basis();
    let s = n * along + b1 * e1 + b2 * e2;
    FourVector::new(t, s.x, s.y, s.z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn lambda_inf_coordinate_at_z_is_t_z_swap() {
        let m = LorentzMatrix::lambda_inf(Direction::Z, Convention::Coordinate);
        #[rustfmt::skip]
        let expected = Matrix4::new(
            0.0, 0.0, 0.0, 1.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
            1.0, 0.0, 0.0, 0.0,
        );
        assert!((m.entries() - expected).amax() < 1e-15);
    }

    #[test]
    fn lambda_inf_momentum_sends_p0_backward() {
        let m = LorentzMatrix::lambda_inf(Direction::Z, Convention::Momentum);
        let p = m.apply(&FourVector::new(1.0, 0.0, 0.0, 1.0));
        assert!(p.max_abs_diff(&FourVector::new(-1.0, 0.0, 0.0, -1.0)) < 1e-15);
    }

    #[test]
    fn lambda_inf_is_involution_for_random_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let d = Direction::new(rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI));
            for conv in [Convention::Coordinate, Convention::Momentum] {
                let m = LorentzMatrix::lambda_inf(d, conv);
                assert!((m * m).max_abs_diff(&LorentzMatrix::identity()) < 1e-12);
            }
        }
    }

    #[test]
    fn generators_are_proper_orthochronous() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let l = sample_proper_orthochronous(&mut rng, 3.0);
            assert!(l.metric_defect() < 1e-9 * l.entries().amax().powi(2));
            assert!((l.determinant() - 1.0).abs() < 1e-6);
            assert!(l.entries()[(0, 0)] >= 1.0 - 1e-12);
            let round = l * l.inverse();
            assert!(round.max_abs_diff(&LorentzMatrix::identity()) < 1e-9);
        }
    }

    #[test]
    fn rotation_about_z_quarter_turn() {
        let r = LorentzMatrix::rotation(Axis::Z, FRAC_PI_2);
        let v = r.apply(&FourVector::new(0.0, 1.0, 0.0, 0.0));
        assert!(v.max_abs_diff(&FourVector::new(0.0, 0.0, 1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn swap_flips_interval_on_axis_plane_only() {
        let d = Direction::new(0.7, 1.9);
        let s = LorentzMatrix::lambda_inf(d, Convention::Momentum);
        let u = in_axis_frame(d, 1.3, -0.4, 0.0, 0.0);
        let v = in_axis_frame(d, 0.2, 2.1, 0.0, 0.0);
        assert!((s.apply(&u).minkowski(&s.apply(&v)) + u.minkowski(&v)).abs() < 1e-12);
        // transverse vectors keep their interval
        let w = in_axis_frame(d, 0.0, 0.0, 1.0, 0.5);
        assert!((s.apply(&w).interval() - w.interval()).abs() < 1e-12);
    }

    #[test]
    fn serde_as_array() {
        let v = FourVector::new(1.0, 2.0, 3.0, 4.0);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[1.0,2.0,3.0,4.0]");
        let back: FourVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
