//! Semidirect product `T ⋊ L_ext` and the automorphisms `α_z` induced by
//! the discrete extension `Z = {I, −I, Λ∞, −Λ∞}`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lorentz::{sample_proper_orthochronous, Convention, Direction, ElementTag, FourVector, LorentzMatrix};

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("element tagged {0:?} is not in Z = {{I, -I, Λ∞, -Λ∞}}")]
    NotInZ(ElementTag),
}

/// The four elements of `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZElement {
    Identity,
    MinusIdentity,
    LambdaInf,
    MinusLambdaInf,
}

impl ZElement {
    pub const ALL: [ZElement; 4] =
        [ZElement::Identity, ZElement::MinusIdentity, ZElement::LambdaInf, ZElement::MinusLambdaInf];

    pub fn matrix(self, direction: Direction, convention: Convention) -> LorentzMatrix {
        match self {
            ZElement::Identity => LorentzMatrix::identity(),
            ZElement::MinusIdentity => LorentzMatrix::minus_identity(),
            ZElement::LambdaInf => LorentzMatrix::lambda_inf(direction, convention),
            ZElement::MinusLambdaInf => LorentzMatrix::minus_lambda_inf(direction, convention),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ZElement::Identity => "I",
            ZElement::MinusIdentity => "-I",
            ZElement::LambdaInf => "Λ∞",
            ZElement::MinusLambdaInf => "-Λ∞",
        }
    }
}

impl fmt::Display for ZElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An element `(h, a)` of the extended Poincaré group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtPoincareElement {
    pub linear: LorentzMatrix,
    pub translation: FourVector,
}

impl ExtPoincareElement {
    pub fn new(linear: LorentzMatrix, translation: FourVector) -> Self {
        ExtPoincareElement { linear, translation }
    }

    pub fn identity() -> Self {
        ExtPoincareElement { linear: LorentzMatrix::identity(), translation: FourVector::ZERO }
    }

    pub fn translation(a: FourVector) -> Self {
        ExtPoincareElement { linear: LorentzMatrix::identity(), translation: a }
    }

    pub fn linear(h: LorentzMatrix) -> Self {
        ExtPoincareElement { linear: h, translation: FourVector::ZERO }
    }

    /// `(h, a)(h', a') = (hh', a + h a')`.
    pub fn mul(&self, rhs: &ExtPoincareElement) -> ExtPoincareElement {
        ExtPoincareElement {
            linear: self.linear * rhs.linear,
            translation: self.translation + self.linear.apply(&rhs.translation),
        }
    }

    /// `(h, a)⁻¹ = (h⁻¹, −h⁻¹a)`.
    pub fn inverse(&self) -> ExtPoincareElement {
        let hinv = self.linear.inverse();
        ExtPoincareElement { linear: hinv, translation: -hinv.apply(&self.translation) }
    }

    /// Action on a spacetime point: `x ↦ h x + a`.
    pub fn act(&self, x: &FourVector) -> FourVector {
        self.linear.apply(x) + self.translation
    }

    pub fn max_abs_diff(&self, other: &ExtPoincareElement) -> f64 {
        self.linear.max_abs_diff(&other.linear).max(self.translation.max_abs_diff(&other.translation))
    }

    /// Random proper orthochronous element with translation components in `[-scale, scale]`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, max_rapidity: f64, scale: f64) -> Self {
        let h = sample_proper_orthochronous(rng, max_rapidity);
        let mut c = [0.0; 4];
        for x in &mut c {
            *x = rng.random_range(-scale..=scale);
        }
        ExtPoincareElement::new(h, c.into())
    }
}

/// Free-function form of the product law.
pub fn poincare_mul(g: &ExtPoincareElement, g2: &ExtPoincareElement) -> ExtPoincareElement {
    g.mul(g2)
}

/// `α_z(h, a) = (z h z⁻¹, z·a)`. Closure of the conjugate in the proper
/// orthochronous component is not checked.
pub fn alpha_z(z: &LorentzMatrix, n: &ExtPoincareElement) -> Result<ExtPoincareElement, GroupError> {
    if !z.tag().in_z() {
        return Err(GroupError::NotInZ(z.tag()));
    }
    Ok(ExtPoincareElement { linear: n.linear.conjugate_by(z), translation: z.apply(&n.translation) })
}
