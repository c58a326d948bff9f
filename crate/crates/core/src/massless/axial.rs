//! The axial subgroup of a grid direction `n̂`: translations, boosts along
//! `n̂` and rotations about `n̂`. On this subgroup every little-group element is
//! explicit, so the induced action and its covariance under `Λ∞` and `−I` can
//! be evaluated exactly.

use super::{BoostMode, BoostOutcome, DoubletState, RepError, SectorInvolution};
use crate::lorentz::{Convention, Direction, ElementTag, FourVector, LorentzMatrix};
use crate::poincare::{alpha_z, ExtPoincareElement};

/// `(a, B_n(χ) R_n(α))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxialElement {
    pub translation: FourVector,
    pub rapidity: f64,
    pub angle: f64,
}

impl AxialElement {
    pub fn identity() -> Self {
        AxialElement { translation: FourVector::ZERO, rapidity: 0.0, angle: 0.0 }
    }

    pub fn translation(a: FourVector) -> Self {
        AxialElement { translation: a, ..Self::identity() }
    }

    pub fn boost(chi: f64) -> Self {
        AxialElement { rapidity: chi, ..Self::identity() }
    }

    pub fn rotation(alpha: f64) -> Self {
        AxialElement { angle: alpha, ..Self::identity() }
    }

    pub fn matrix(&self, direction: Direction) -> LorentzMatrix {
        let n = direction.unit();
        LorentzMatrix::boost_along(n, self.rapidity) * LorentzMatrix::rotation_about(n, self.angle)
    }

    pub fn to_element(&self, direction: Direction) -> ExtPoincareElement {
        ExtPoincareElement::new(self.matrix(direction), self.translation)
    }

    /// Recovers `(a, χ, α)` from a group element, rejecting anything outside the
    /// axial subgroup of `direction`.
    pub fn from_element(g: &ExtPoincareElement, direction: Direction) -> Result<Self, RepError> {
        let m = g.linear.entries();
        let n = direction.unit();
        let (e1, e2) = direction.transverse_basis();
        let on_axis = m * nalgebra::Vector4::new(1.0, n.x, n.y, n.z);
        if on_axis[0].is_nan() || on_axis[0] <= 0.0 {
            return Err(RepError::NotAxial("does not preserve the forward cone along n̂".into()));
        }
        let rapidity = on_axis[0].ln();
        let v = m * nalgebra::Vector4::new(0.0, e1.x, e1.y, e1.z);
        let v3 = nalgebra::Vector3::new(v[1], v[2], v[3]);
        let angle = v3.dot(&e2).atan2(v3.dot(&e1));
        let candidate = AxialElement { translation: g.translation, rapidity, angle };
        let scale = m.amax().max(1.0);
        let defect = candidate.matrix(direction).max_abs_diff(&g.linear);
        if defect > 1e-9 * scale {
            return Err(RepError::NotAxial(format!(
                "linear part differs from the closest axial matrix by {defect:.3e}"
            )));
        }
        Ok(candidate)
    }

    /// Group law `(a₁, h₁)(a₂, h₂) = (a₁ + h₁a₂, h₁h₂)`; axial boosts and rotations commute.
    pub fn compose(&self, rhs: &AxialElement, direction: Direction) -> AxialElement {
        AxialElement {
            translation: self.translation + self.matrix(direction).apply(&rhs.translation),
            rapidity: self.rapidity + rhs.rapidity,
            angle: self.angle + rhs.angle,
        }
    }

    /// `Ū(a, h)Ψ (p) = e^{iη(p,a)} e^{iλα} Ψ(h⁻¹p)`.
    pub fn apply(&self, s: &DoubletState, mode: BoostMode) -> Result<BoostOutcome, RepError> {
        let mut out = s.apply_axial_boost(self.rapidity, mode)?;
        out.state = out.state.apply_axial_rotation(self.angle).apply_translation(&self.translation);
        Ok(out)
    }
}

/// Discrete elements whose conjugation action is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscreteOp {
    LambdaInf,
    MinusIdentity,
}

impl DiscreteOp {
    fn apply(self, s: &DoubletState, c: &SectorInvolution) -> Result<DoubletState, RepError> {
        match self {
            DiscreteOp::LambdaInf => s.apply_u_lambda_inf(c, s.grid().direction()),
            DiscreteOp::MinusIdentity => Ok(s.apply_u_minus_i()),
        }
    }
}

/// The partner `(z a, z h z⁻¹)` of an axial element under `z ∈ {Λ∞, −I}`.
///
/// The linear part is conjugated as a matrix and re-identified. Translations are
/// spacetime displacements and so transform under the coordinate action of `Λ∞`
/// (the swap `S`), while momenta on the grid transform under `−S`; with that
/// pairing `η(Λ∞⁻¹p, a) = η(p, S a)` and the intertwining relation closes.
pub fn conjugate_axial(el: &AxialElement, op: DiscreteOp, direction: Direction) -> Result<AxialElement, RepError> {
    let (z, translation) = match op {
        DiscreteOp::LambdaInf => (
            LorentzMatrix::lambda_inf(direction, Convention::Momentum),
            LorentzMatrix::lambda_inf(direction, Convention::Coordinate).apply(&el.translation),
        ),
        DiscreteOp::MinusIdentity => (LorentzMatrix::minus_identity(), -el.translation),
    };
    let conj = alpha_z(&z, &ExtPoincareElement::linear(el.matrix(direction))).expect("Λ∞ and −I are elements of Z");
    let linear = LorentzMatrix::from_entries(*conj.linear.entries(), ElementTag::ProperOrthochronous);
    let mut out = AxialElement::from_element(&ExtPoincareElement::new(linear, translation), direction)?;
    out.translation = translation;
    Ok(out)
}

/// `‖Ū(z) Ū(a,h) Ū(z)⁻¹ Ψ − Ū(z a, z h z⁻¹) Ψ‖` for `z ∈ {Λ∞, −I}` and an
/// element of the axial subgroup of the state's grid direction.
pub fn check_covariance(
    s: &DoubletState,
    element: &ExtPoincareElement,
    op: DiscreteOp,
    c: &SectorInvolution,
) -> Result<f64, RepError> {
    let direction = s.grid().direction();
    let el = AxialElement::from_element(element, direction)?;
    let partner = conjugate_axial(&el, op, direction)?;
    // Ū(Λ∞) and Ū(−I) are involutions
    let inner = op.apply(s, c)?;
    let moved = el.apply(&inner, BoostMode::Lattice)?.state;
    let lhs = op.apply(&moved, c)?;
    let rhs = partner.apply(s, BoostMode::Lattice)?.state;
    Ok(lhs.distance(&rhs))
}
