//! Momentum orbit classes and their merging under `Z`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::lorentz::{in_axis_frame, Axis, Convention, Direction, FourVector, LorentzMatrix};
use crate::poincare::ZElement;

/// Relative width of the band treated as lightlike: `|η(p,p)| < LIGHTLIKE_BAND · ‖p‖²`.
pub const LIGHTLIKE_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitClass {
    MassiveForward,
    MassiveBackward,
    Tachyonic,
    LightlikeForward,
    LightlikeBackward,
    Zero,
}

impl OrbitClass {
    pub fn name(self) -> &'static str {
        match self {
            OrbitClass::MassiveForward => "massive-forward",
            OrbitClass::MassiveBackward => "massive-backward",
            OrbitClass::Tachyonic => "tachyonic",
            OrbitClass::LightlikeForward => "lightlike-forward",
            OrbitClass::LightlikeBackward => "lightlike-backward",
            OrbitClass::Zero => "zero",
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classifies `p` by the sign of `η(p,p)` and of `p⁰`.
pub fn classify_orbit(p: &FourVector) -> OrbitClass {
    if p.is_zero() {
        return OrbitClass::Zero;
    }
    let norm = p.euclidean_norm_sqr();
    let s = p.interval();
    if s.abs() < LIGHTLIKE_BAND * norm {
        if p.t() > 0.0 {
            OrbitClass::LightlikeForward
        } else {
            OrbitClass::LightlikeBackward
        }
    } else if s > 0.0 {
        if p.t() > 0.0 {
            OrbitClass::MassiveForward
        } else {
            OrbitClass::MassiveBackward
        }
    } else {
        OrbitClass::Tachyonic
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitImage {
    pub z: ZElement,
    pub image: FourVector,
    pub class: OrbitClass,
}

/// Images of `p` under every `z ∈ Z` (momentum convention), each classified.
pub fn z_orbit(p: &FourVector, direction: Direction) -> Vec<OrbitImage> {
    z_orbit_in(p, direction, Convention::Momentum)
}

pub fn z_orbit_in(p: &FourVector, direction: Direction, convention: Convention) -> Vec<OrbitImage> {
    ZElement::ALL
        .iter()
        .map(|&z| {
            let image = z.matrix(direction, convention).apply(p);
            OrbitImage { z, image, class: classify_orbit(&image) }
        })
        .collect()
}

/// One row of the `Ad_Λ∞` closure table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugationRow {
    pub generator: String,
    pub parameter: f64,
    /// `max |MᵀηM − η|` for `M = Λ∞ h Λ∞⁻¹`.
    pub metric_defect: f64,
    pub stays_lorentz: bool,
}

/// Tabulates whether `Λ∞ h Λ∞⁻¹` is still a Lorentz matrix for boosts and
/// rotations about each coordinate axis and about `n̂`, with `samples` random
/// parameters each. Purely informational.
pub fn conjugation_report<R: Rng + ?Sized>(
    direction: Direction,
    convention: Convention,
    samples: usize,
    rng: &mut R,
) -> Vec<ConjugationRow> {
    let z = LorentzMatrix::lambda_inf(direction, convention);
    let n = direction.unit();
    let mut rows = Vec::new();
    let axes = [("x", Axis::X), ("y", Axis::Y), ("z", Axis::Z)];
    for _ in 0..samples {
        let chi = rng.random_range(0.1..2.0);
        let angle = rng.random_range(0.1..3.0);
        let mut candidates: Vec<(String, f64, LorentzMatrix)> = Vec::new();
        for (name, axis) in axes {
            candidates.push((format!("boost-{name}"), chi, LorentzMatrix::boost(axis, chi)));
            candidates.push((format!("rotation-{name}"), angle, LorentzMatrix::rotation(axis, angle)));
        }
        candidates.push(("boost-n".into(), chi, LorentzMatrix::boost_along(n, chi)));
        candidates.push(("rotation-n".into(), angle, LorentzMatrix::rotation_about(n, angle)));
        for (generator, parameter, h) in candidates {
            let defect = h.conjugate_by(&z).metric_defect();
            rows.push(ConjugationRow { generator, parameter, metric_defect: defect, stays_lorentz: defect < 1e-9 });
        }
    }
    rows
}

/// `(plane, transverse)` deviations of `η(Λ∞u, Λ∞v)` from `−η(u,v)`: the first
/// for `u, v` in the `t–n̂` plane, the second for purely transverse vectors.
pub fn interval_sign_flip<R: Rng + ?Sized>(
    direction: Direction,
    convention: Convention,
    samples: usize,
    rng: &mut R,
) -> (f64, f64) {
    let z = LorentzMatrix::lambda_inf(direction, convention);
    let mut plane = 0.0f64;
    let mut transverse = 0.0f64;
    for _ in 0..samples {
        let mut r = || rng.random_range(-1.0..1.0);
        let u = in_axis_frame(direction, r(), r(), 0.0, 0.0);
        let v = in_axis_frame(direction, r(), r(), 0.0, 0.0);
        plane = plane.max((z.apply(&u).minkowski(&z.apply(&v)) + u.minkowski(&v)).abs());
        let u = in_axis_frame(direction, 0.0, 0.0, r(), r());
        let v = in_axis_frame(direction, 0.0, 0.0, r(), r());
        transverse = transverse.max((z.apply(&u).minkowski(&z.apply(&v)) + u.minkowski(&v)).abs());
    }
    (plane, transverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::sample_proper_orthochronous;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basic_classes() {
        assert_eq!(classify_orbit(&FourVector::new(1.0, 0.0, 0.0, 0.0)), OrbitClass::MassiveForward);
        assert_eq!(classify_orbit(&FourVector::new(-2.0, 0.5, 0.0, 0.0)), OrbitClass::MassiveBackward);
        assert_eq!(classify_orbit(&FourVector::new(0.0, 0.0, 0.0, 1.0)), OrbitClass::Tachyonic);
        assert_eq!(classify_orbit(&FourVector::new(-1.0, 0.0, 0.0, 1.0)), OrbitClass::LightlikeBackward);
        assert_eq!(classify_orbit(&FourVector::new(1.0, 0.0, 0.0, 1.0)), OrbitClass::LightlikeForward);
        assert_eq!(classify_orbit(&FourVector::ZERO), OrbitClass::Zero);
    }

    #[test]
    fn timelike_orbit_merges_with_tachyonic() {
        let orbit = z_orbit(&FourVector::new(1.0, 0.0, 0.0, 0.0), Direction::Z);
        let expected = [
            (FourVector::new(1.0, 0.0, 0.0, 0.0), OrbitClass::MassiveForward),
            (FourVector::new(-1.0, 0.0, 0.0, 0.0), OrbitClass::MassiveBackward),
            (FourVector::new(0.0, 0.0, 0.0, -1.0), OrbitClass::Tachyonic),
            (FourVector::new(0.0, 0.0, 0.0, 1.0), OrbitClass::Tachyonic),
        ];
        for (img, (v, c)) in orbit.iter().zip(expected) {
            assert!(img.image.max_abs_diff(&v) < 1e-15, "{:?}", img);
            assert_eq!(img.class, c);
        }
    }

    #[test]
    fn lightlike_orbit_stays_on_cones() {
        let p0 = FourVector::new(1.0, 0.0, 0.0, 1.0);
        let orbit = z_orbit(&p0, Direction::Z);
        // I, −I, Λ∞, −Λ∞
        for (img, want) in orbit.iter().zip([p0, -p0, -p0, p0]) {
            assert!(img.image.max_abs_diff(&want) < 1e-15);
        }
        assert!(orbit.iter().all(|o| matches!(o.class, OrbitClass::LightlikeForward | OrbitClass::LightlikeBackward)));
    }

    #[test]
    fn zero_orbit() {
        assert!(z_orbit(&FourVector::ZERO, Direction::Z).iter().all(|o| o.class == OrbitClass::Zero));
    }

    #[test]
    fn classification_is_lorentz_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 100 {
            let p = FourVector::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            if p.interval().abs() < 1e-3 * p.euclidean_norm_sqr() {
                continue;
            }
            let l = sample_proper_orthochronous(&mut rng, 3.0);
            assert_eq!(classify_orbit(&l.apply(&p)), classify_orbit(&p));
            checked += 1;
        }
    }

    #[test]
    fn axial_generators_survive_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows = conjugation_report(Direction::Z, Convention::Momentum, 3, &mut rng);
        for row in &rows {
            match row.generator.as_str() {
                "boost-n" | "rotation-n" | "boost-z" | "rotation-z" => assert!(row.stays_lorentz, "{row:?}"),
                "boost-x" | "boost-y" | "rotation-x" | "rotation-y" => assert!(!row.stays_lorentz, "{row:?}"),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn sign_flip_holds_only_on_axis_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (plane, transverse) = interval_sign_flip(Direction::new(1.1, 0.3), Convention::Momentum, 50, &mut rng);
        assert!(plane < 1e-12);
        assert!(transverse > 1e-3);
    }
}
