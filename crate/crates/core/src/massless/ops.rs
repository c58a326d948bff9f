use num_complex::Complex64;

use super::{DoubletState, Epsilon, FrequencyGrid, RepError, SectorInvolution};
use crate::lorentz::{Direction, FourVector};
use crate::par::map_indexed;

/// Leaked norm above which a boost result carries a warning.
pub const LEAK_WARNING_THRESHOLD: f64 = 1e-6;

/// Relative slack when deciding whether a rapidity is a whole number of grid steps.
const LATTICE_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoostMode {
    /// Only multiples of `ln r` are accepted; the action is an exact index shift.
    #[default]
    Lattice,
    /// Other rapidities are served by linear interpolation in log-frequency.
    /// Not unitary; the norm change is reported as leakage.
    Interpolate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoostOutcome {
    pub state: DoubletState,
    /// Norm² pushed off the grid (or lost to interpolation).
    pub leaked_norm: f64,
    pub warning: Option<String>,
}

impl BoostOutcome {
    fn new(state: DoubletState, before: f64) -> Self {
        let leaked_norm = (before - state.norm_sqr()).max(0.0);
        let warning = (leaked_norm > LEAK_WARNING_THRESHOLD)
            .then(|| format!("boost moved norm² {leaked_norm:.3e} off the frequency grid"));
        BoostOutcome { state, leaked_norm, warning }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenOutcome {
    pub state: DoubletState,
    /// Set when the input was rescaled; holds the original norm.
    pub renormalized_from: Option<f64>,
}

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

impl DoubletState {
    /// `Ū(a)`: multiplies each amplitude by `e^{iη(p, a)}`.
    pub fn apply_translation(&self, a: &FourVector) -> DoubletState {
        let grid = self.grid;
        // η(ω(1,n̂), a) = ω (a⁰ − n̂·a)
        let k = a.t() - grid.direction().unit().dot(&a.spatial());
        let fwd = map_indexed(&self.fwd, |i, c| c * phase(grid.omega(i) * k));
        let bwd = map_indexed(&self.bwd, |i, c| c * phase(-grid.omega(i) * k));
        DoubletState { grid, fwd, bwd }
    }

    /// Rotation by `alpha` about `n̂`: the helicity phase `e^{iλα}` on both sectors.
    pub fn apply_axial_rotation(&self, alpha: f64) -> DoubletState {
        let u = phase(self.grid.helicity() as f64 * alpha);
        DoubletState {
            grid: self.grid,
            fwd: map_indexed(&self.fwd, |_, c| c * u),
            bwd: map_indexed(&self.bwd, |_, c| c * u),
        }
    }

    /// Boost by `k` grid steps along `n̂`; amplitude at index `i` moves to `i + k`.
    pub fn boost_by_steps(&self, k: i64) -> BoostOutcome {
        let before = self.norm_sqr();
        let n = self.len() as i64;
        let shift = |src: &[Complex64]| -> Vec<Complex64> {
            (0..n)
                .map(|i| {
                    let j = i - k;
                    if (0..n).contains(&j) {
                        src[j as usize]
                    } else {
                        Complex64::ZERO
                    }
                })
                .collect()
        };
        let state = DoubletState { grid: self.grid, fwd: shift(&self.fwd), bwd: shift(&self.bwd) };
        BoostOutcome::new(state, before)
    }

    /// Boost with rapidity `chi` along `n̂`: `ψ'(ω) = ψ(e^{−χ}ω)` on both cones.
    pub fn apply_axial_boost(&self, chi: f64, mode: BoostMode) -> Result<BoostOutcome, RepError> {
        let step = self.grid.log_ratio();
        let x = chi / step;
        let k = x.round();
        if (x - k).abs() <= LATTICE_SLACK * x.abs().max(1.0) {
            return Ok(self.boost_by_steps(k as i64));
        }
        match mode {
            BoostMode::Lattice => Err(RepError::NonLatticeRapidity { chi, step }),
            BoostMode::Interpolate => Ok(self.boost_interpolated(x)),
        }
    }

    fn boost_interpolated(&self, x: f64) -> BoostOutcome {
        let before = self.norm_sqr();
        let n = self.len();
        let sample = |src: &[Complex64], pos: f64| -> Complex64 {
            let lo = pos.floor();
            let t = pos - lo;
            let at = |j: f64| {
                if j >= 0.0 && (j as usize) < n {
                    src[j as usize]
                } else {
                    Complex64::ZERO
                }
            };
            at(lo) * (1.0 - t) + at(lo + 1.0) * t
        };
        let fwd = (0..n).map(|i| sample(&self.fwd, i as f64 - x)).collect();
        let bwd = (0..n).map(|i| sample(&self.bwd, i as f64 - x)).collect();
        BoostOutcome::new(DoubletState { grid: self.grid, fwd, bwd }, before)
    }

    /// `Ū(Λ∞)Ψ = (C ψ_bwd, C⁻¹ ψ_fwd)`. With `Λ∞ = −S`, `Λ∞⁻¹` sends forward
    /// point `i` to backward point `i`, so the swap is index-aligned.
    pub fn apply_u_lambda_inf(&self, c: &SectorInvolution, direction: Direction) -> Result<DoubletState, RepError> {
        if !direction.same_axis(&self.grid.direction()) {
            return Err(RepError::DirectionMismatch { theta: direction.theta, phi: direction.phi });
        }
        c.check_len(self.len())?;
        // C is real with C² = 1, so C⁻¹ = C
        Ok(DoubletState {
            grid: self.grid,
            fwd: map_indexed(&self.bwd, |i, v| v * c.sign(i)),
            bwd: map_indexed(&self.fwd, |i, v| v * c.sign(i)),
        })
    }

    /// `Ū(−I)Ψ = (ψ_bwd(−p), ψ_fwd(−p))`.
    pub fn apply_u_minus_i(&self) -> DoubletState {
        DoubletState { grid: self.grid, fwd: self.bwd.clone(), bwd: self.fwd.clone() }
    }
}

/// `Ψ_ε = (ψ, εψ)/√2`. An unnormalized `psi` is rescaled and flagged.
pub fn make_epsilon_eigenstate(
    grid: FrequencyGrid,
    psi: &[Complex64],
    epsilon: Epsilon,
) -> Result<EigenOutcome, RepError> {
    if psi.len() != grid.len() {
        return Err(RepError::LengthMismatch { expected: grid.len(), got: psi.len() });
    }
    let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(RepError::ZeroWavefunction);
    }
    let renormalized_from = ((norm - 1.0).abs() > 1e-12).then_some(norm);
    let scale = std::f64::consts::FRAC_1_SQRT_2 / norm;
    let fwd: Vec<_> = psi.iter().map(|c| c * scale).collect();
    let bwd: Vec<_> = fwd.iter().map(|c| c * epsilon.value()).collect();
    Ok(EigenOutcome { state: DoubletState { grid, fwd, bwd }, renormalized_from })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::massless::random_wavefunction;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn grid(n: usize) -> FrequencyGrid {
        FrequencyGrid::new(1.0, 1.25, n, Direction::Z, 1).unwrap()
    }

    fn random_four<R: Rng>(rng: &mut R) -> FourVector {
        FourVector::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
        )
    }

    #[test]
    fn zero_translation_is_identity() {
        let s = DoubletState::random(grid(8), 0..8, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(s.apply_translation(&FourVector::ZERO), s);
    }

    #[test]
    fn time_translation_by_pi_single_point() {
        let s = DoubletState::new(grid(1), vec![Complex64::ONE], vec![Complex64::ONE]).unwrap();
        let t = s.apply_translation(&FourVector::new(PI, 0.0, 0.0, 0.0));
        assert!((t.forward()[0] + 1.0).norm() < 1e-15);
        assert!((t.backward()[0] + 1.0).norm() < 1e-15);
    }

    #[test]
    fn translations_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = grid(12);
        for _ in 0..100 {
            let s = DoubletState::random(g, 0..12, &mut rng);
            let (a, b) = (random_four(&mut rng), random_four(&mut rng));
            let two = s.apply_translation(&a).apply_translation(&b);
            let one = s.apply_translation(&(a + b));
            assert!(two.distance(&one) < 1e-12);
        }
    }

    #[test]
    fn rotation_phases() {
        let s = DoubletState::random(grid(6), 0..6, &mut ChaCha8Rng::seed_from_u64(8));
        assert!(s.apply_axial_rotation(2.0 * PI).distance(&s) < 1e-14);
        let q = s.apply_axial_rotation(FRAC_PI_2);
        assert!(q.distance(&s.scaled(Complex64::I)) < 1e-15);
        let g0 = FrequencyGrid::new(1.0, 1.25, 6, Direction::Z, 0).unwrap();
        let s0 = DoubletState::random(g0, 0..6, &mut ChaCha8Rng::seed_from_u64(8));
        assert_eq!(s0.apply_axial_rotation(1.234), s0);
    }

    #[test]
    fn one_step_boost_shifts_index() {
        let g = grid(5);
        let mut fwd = vec![Complex64::ZERO; 5];
        let mut bwd = vec![Complex64::ZERO; 5];
        fwd[2] = Complex64::new(0.6, 0.0);
        bwd[2] = Complex64::new(0.0, 0.8);
        let s = DoubletState::new(g, fwd, bwd).unwrap();
        let out = s.apply_axial_boost(g.log_ratio(), BoostMode::Lattice).unwrap();
        assert_eq!(out.state.forward()[3], Complex64::new(0.6, 0.0));
        assert_eq!(out.state.backward()[3], Complex64::new(0.0, 0.8));
        assert_eq!(out.leaked_norm, 0.0);
        assert!(out.warning.is_none());
        // e^χ ω_i = ω_{i+1}
        assert!((g.log_ratio().exp() * g.omega(2) - g.omega(3)).abs() < 1e-12);
    }

    #[test]
    fn boost_round_trip_and_zero() {
        let g = grid(20);
        let s = DoubletState::random(g, 4..16, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(s.apply_axial_boost(0.0, BoostMode::Lattice).unwrap().state, s);
        let chi = 3.0 * g.log_ratio();
        let there = s.apply_axial_boost(chi, BoostMode::Lattice).unwrap().state;
        let back = there.apply_axial_boost(-chi, BoostMode::Lattice).unwrap().state;
        assert!(back.distance(&s) < 1e-12);
    }

    #[test]
    fn non_lattice_boost_rejected_unless_interpolating() {
        let g = grid(10);
        let s = DoubletState::random(g, 2..8, &mut ChaCha8Rng::seed_from_u64(3));
        let chi = 0.5 * g.log_ratio();
        assert!(matches!(s.apply_axial_boost(chi, BoostMode::Lattice), Err(RepError::NonLatticeRapidity { .. })));
        let out = s.apply_axial_boost(chi, BoostMode::Interpolate).unwrap();
        assert!(out.leaked_norm > 0.0);
        assert!((out.state.norm_sqr() + out.leaked_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boost_off_grid_reports_leak() {
        let g = grid(4);
        let s = DoubletState::random(g, 0..4, &mut ChaCha8Rng::seed_from_u64(5));
        let out = s.boost_by_steps(2);
        assert!(out.leaked_norm > LEAK_WARNING_THRESHOLD);
        assert!(out.warning.is_some());
        assert!((out.state.norm_sqr() + out.leaked_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_inf_with_trivial_c_swaps() {
        let s = DoubletState::random(grid(7), 0..7, &mut ChaCha8Rng::seed_from_u64(6));
        let t = s.apply_u_lambda_inf(&SectorInvolution::identity(), Direction::Z).unwrap();
        assert_eq!(t.forward(), s.backward());
        assert_eq!(t.backward(), s.forward());
    }

    #[test]
    fn lambda_inf_is_involution_for_any_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = grid(9);
        for _ in 0..20 {
            let signs = (0..9).map(|_| if rng.random_bool(0.5) { Epsilon::Plus } else { Epsilon::Minus }).collect();
            let c = SectorInvolution::PerPoint(signs);
            let s = DoubletState::random(g, 0..9, &mut rng);
            let twice = s.apply_u_lambda_inf(&c, Direction::Z).unwrap().apply_u_lambda_inf(&c, Direction::Z).unwrap();
            assert_eq!(twice, s);
        }
    }

    #[test]
    fn lambda_inf_rejects_other_direction() {
        let s = DoubletState::zero(grid(3));
        let err = s.apply_u_lambda_inf(&SectorInvolution::identity(), Direction::new(0.3, 0.0)).unwrap_err();
        assert!(matches!(err, RepError::DirectionMismatch { .. }));
    }

    #[test]
    fn minus_identity_swaps() {
        let g = grid(4);
        let psi = random_wavefunction(4, &mut ChaCha8Rng::seed_from_u64(1));
        let s = DoubletState::forward_only(g, psi.clone()).unwrap();
        let t = s.apply_u_minus_i();
        assert!(t.forward().iter().all(|c| *c == Complex64::ZERO));
        assert_eq!(t.backward(), &psi[..]);
        assert_eq!(t.apply_u_minus_i(), s);
    }

    #[test]
    fn eigenstates() {
        let g = grid(3);
        let delta = vec![Complex64::ONE, Complex64::ZERO, Complex64::ZERO];
        let plus = make_epsilon_eigenstate(g, &delta, Epsilon::Plus).unwrap();
        assert!(plus.renormalized_from.is_none());
        assert!((plus.state.forward()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((plus.state.backward()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);

        let psi = random_wavefunction(3, &mut ChaCha8Rng::seed_from_u64(2));
        let minus = make_epsilon_eigenstate(g, &psi, Epsilon::Minus).unwrap().state;
        let image = minus.apply_u_lambda_inf(&SectorInvolution::identity(), Direction::Z).unwrap();
        assert!(image.distance(&minus.scaled(Complex64::new(-1.0, 0.0))) < 1e-12);
        let plus = make_epsilon_eigenstate(g, &psi, Epsilon::Plus).unwrap().state;
        assert!(plus.inner(&minus).unwrap().norm() < 1e-15);
    }

    #[test]
    fn eigenstate_renormalizes_with_flag() {
        let g = grid(2);
        let out =
            make_epsilon_eigenstate(g, &[Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)], Epsilon::Plus).unwrap();
        assert_eq!(out.renormalized_from, Some(5.0));
        assert!((out.state.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(make_epsilon_eigenstate(g, &[Complex64::ZERO; 2], Epsilon::Plus), Err(RepError::ZeroWavefunction));
    }
}
