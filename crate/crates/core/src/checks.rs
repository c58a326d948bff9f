//! Runnable invariant suites for the group, the doublet representation and the
//! qubit bridge. Each suite returns a [`Report`] of asserted checks plus
//! informational findings that never count as failures.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, TAU};
use std::fmt::Write as _;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::lorentz::{sample_proper_orthochronous, Convention, Direction, FourVector, LorentzMatrix};
use crate::massless::{
    check_covariance, make_epsilon_eigenstate, random_wavefunction, AxialElement, BoostMode, DiscreteOp, DoubletState,
    Epsilon, FrequencyGrid, RepError, SectorInvolution,
};
use crate::orbit::{classify_orbit, conjugation_report, interval_sign_flip, z_orbit_in, OrbitClass};
use crate::poincare::{alpha_z, ExtPoincareElement, ZElement};
use crate::qubit::{
    entanglement_entropy, expectation_equality, iota, lambda_inf_block, pauli, sector_isometry, tensor_operator,
    u_lambda_conjugation_check, TwoQubitState,
};

#[derive(Debug, Error, PartialEq)]
pub enum CheckError {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str, max_deviation: f64, tolerance: f64) -> Self {
        CheckResult { name: name.to_string(), passed: max_deviation <= tolerance, max_deviation, tolerance, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub notices: Vec<String>,
    pub info: serde_json::Value,
}

impl Report {
    fn new(suite: &str) -> Self {
        Report { suite: suite.into(), checks: Vec::new(), notices: Vec::new(), info: json!({}) }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.suite);
        for c in &self.checks {
            let _ = write!(
                out,
                "  {:<4} {:<40} max_dev={:.3e} tol={:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_deviation,
                c.tolerance
            );
            if let Some(note) = &c.note {
                let _ = write!(out, "  ({note})");
            }
            out.push('\n');
        }
        for n in &self.notices {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

fn positive(name: &'static str, value: usize) -> Result<(), CheckError> {
    if value == 0 {
        return Err(CheckError::InvalidArgument { name, reason: "must be positive".into() });
    }
    Ok(())
}

fn angle_grid() -> impl Iterator<Item = Direction> {
    (0..10).flat_map(|i| (0..10).map(move |j| Direction::new(PI * i as f64 / 9.0, TAU * j as f64 / 10.0)))
}

/// Group-level invariants. Momentum-only statements are skipped with a notice
/// under the coordinate convention.
pub fn group_suite(convention: Convention, samples: usize, seed: u64) -> Result<Report, CheckError> {
    positive("samples", samples)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new("group-check");

    let invol = angle_grid()
        .map(|d| {
            let l = LorentzMatrix::lambda_inf(d, convention);
            (l * l).max_abs_diff(&LorentzMatrix::identity())
        })
        .fold(0.0, f64::max);
    r.checks.push(CheckResult::new("lambda_inf_involution", invol, 1e-12));

    let flip = |d: Direction, conv: Convention| {
        let p0 = FourVector::lightlike(1.0, d);
        let l = LorentzMatrix::lambda_inf(d, conv);
        let ml = LorentzMatrix::minus_lambda_inf(d, conv);
        (l.apply(&p0).max_abs_diff(&-p0), ml.apply(&p0).max_abs_diff(&p0))
    };
    match convention {
        Convention::Momentum => {
            let dev = angle_grid().map(|d| {
                let (a, b) = flip(d, convention);
                a.max(b)
            });
            r.checks.push(CheckResult::new("lambda_inf_maps_p0_to_minus_p0", dev.fold(0.0, f64::max), 1e-12));
        }
        Convention::Coordinate => {
            let fixed = angle_grid()
                .map(|d| {
                    let p0 = FourVector::lightlike(1.0, d);
                    LorentzMatrix::lambda_inf(d, convention).apply(&p0).max_abs_diff(&p0)
                })
                .fold(0.0, f64::max);
            r.notices.push(format!(
                "coordinate convention: Λ∞p₀ = +p₀ (max deviation {fixed:.1e}); momentum-convention checks skipped"
            ));
        }
    }

    let (mut assoc, mut inv) = (0.0f64, 0.0f64);
    let e = ExtPoincareElement::identity();
    for _ in 0..samples {
        let [a, b, c] = [(); 3].map(|_| ExtPoincareElement::sample(&mut rng, 1.0, 1.0));
        assoc = assoc.max(a.mul(&b).mul(&c).max_abs_diff(&a.mul(&b.mul(&c))));
        inv = inv.max(a.mul(&a.inverse()).max_abs_diff(&e)).max(a.inverse().mul(&a).max_abs_diff(&e));
    }
    r.checks.push(CheckResult::new("product_associative", assoc, 1e-12));
    r.checks.push(CheckResult::new("two_sided_inverse", inv, 1e-12));

    let dir = Direction::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU));
    let mut alpha = 0.0f64;
    for _ in 0..samples {
        let n = ExtPoincareElement::sample(&mut rng, 1.0, 1.0);
        for z in ZElement::ALL {
            let zm = z.matrix(dir, convention);
            let twice = alpha_z(&zm, &alpha_z(&zm, &n).expect("z in Z")).expect("z in Z");
            alpha = alpha.max(twice.max_abs_diff(&n));
        }
    }
    r.checks.push(CheckResult::new("alpha_z_involutive", alpha, 1e-12));

    let mut mismatches = 0usize;
    let mut tried = 0usize;
    while tried < samples {
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
        if classify_orbit(&l.apply(&p)) != classify_orbit(&p) {
            mismatches += 1;
        }
        tried += 1;
    }
    r.checks.push(CheckResult::new("orbit_class_invariance", mismatches as f64, 0.0).with_note("count of mismatches"));

    let timelike = z_orbit_in(&FourVector::new(1.0, 0.0, 0.0, 0.0), dir, convention);
    let classes: Vec<OrbitClass> = timelike.iter().map(|o| o.class).collect();
    let missing = [OrbitClass::MassiveForward, OrbitClass::MassiveBackward, OrbitClass::Tachyonic]
        .iter()
        .filter(|c| !classes.contains(c))
        .count();
    r.checks.push(
        CheckResult::new("timelike_orbit_merges_classes", missing as f64, 0.0)
            .with_note("count of missing classes among massive-forward, massive-backward, tachyonic"),
    );

    let (plane, transverse) = interval_sign_flip(dir, convention, samples, &mut rng);
    r.checks.push(CheckResult::new("interval_sign_flip_on_axis_plane", plane, 1e-12));

    let rows = conjugation_report(dir, convention, 1, &mut rng);
    r.info = json!({
        "direction": { "theta": dir.theta, "phi": dir.phi },
        "interval_sign_flip_transverse_deviation": transverse,
        "conjugation": rows,
    });
    r.notices.push(format!(
        "Λ∞ conjugation: {} of {} sampled generators stay Lorentz (informational)",
        rows.iter().filter(|x| x.stays_lorentz).count(),
        rows.len()
    ));
    Ok(r)
}

fn random_axial<R: Rng>(rng: &mut R, grid: &FrequencyGrid, max_steps: i64) -> AxialElement {
    let mut t = || rng.random_range(-2.0..2.0);
    let translation = FourVector::new(t(), t(), t(), t());
    AxialElement {
        translation,
        rapidity: rng.random_range(-max_steps..=max_steps) as f64 * grid.log_ratio(),
        angle: rng.random_range(-PI..PI),
    }
}

/// Doublet-representation invariants on a log-spaced grid of `grid_size`
/// points along a fixed oblique direction.
pub fn rep_suite(grid_size: usize, helicity: i32, trials: usize, seed: u64) -> Result<Report, CheckError> {
    positive("grid-size", grid_size)?;
    positive("trials", trials)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dir = Direction::new(0.9, 2.2);
    let grid = FrequencyGrid::new(1.0, 2f64.powf(0.25), grid_size, dir, helicity)?;
    let mut r = Report::new("rep-check");
    // composite boosts of up to 2·steps stay inside the grid
    let steps = ((grid_size as i64 - 1) / 4).min(3);
    let support = (2 * steps) as usize..grid_size - 2 * steps as usize;
    let uniform = [SectorInvolution::Uniform(Epsilon::Plus), SectorInvolution::Uniform(Epsilon::Minus)];

    let (mut unitary, mut sq_l, mut sq_m, mut hom, mut cov_l, mut cov_m, mut spectral) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let s = DoubletState::random(grid, support.clone(), &mut rng);
        let n0 = s.norm_sqr();
        let g1 = random_axial(&mut rng, &grid, steps);
        let g2 = random_axial(&mut rng, &grid, steps);
        let c = &uniform[rng.random_range(0..2)];

        let ul = s.apply_u_lambda_inf(c, dir)?;
        let um = s.apply_u_minus_i();
        let images = [
            s.apply_translation(&g1.translation),
            s.apply_axial_rotation(g1.angle),
            s.apply_axial_boost(g1.rapidity, BoostMode::Lattice)?.state,
            ul.clone(),
            um.clone(),
        ];
        for img in &images {
            unitary = unitary.max((img.norm_sqr() - n0).abs());
        }
        sq_l = sq_l.max(ul.apply_u_lambda_inf(c, dir)?.distance(&s));
        sq_m = sq_m.max(um.apply_u_minus_i().distance(&s));

        let two = g1.apply(&g2.apply(&s, BoostMode::Lattice)?.state, BoostMode::Lattice)?.state;
        let one = g1.compose(&g2, dir).apply(&s, BoostMode::Lattice)?.state;
        hom = hom.max(two.distance(&one));

        let el = g1.to_element(dir);
        cov_l = cov_l.max(check_covariance(&s, &el, DiscreteOp::LambdaInf, c)?);
        cov_m = cov_m.max(check_covariance(&s, &el, DiscreteOp::MinusIdentity, c)?);

        let (plus, minus) = s.epsilon_components();
        spectral = spectral.max(DoubletState::from_epsilon_components(grid, &plus, &minus)?.distance(&s));
    }
    r.checks.push(CheckResult::new("unitarity", unitary, 1e-12));
    r.checks.push(CheckResult::new("u_lambda_inf_squared_identity", sq_l, 0.0));
    r.checks.push(CheckResult::new("u_minus_i_squared_identity", sq_m, 0.0));
    r.checks.push(CheckResult::new("axial_homomorphism", hom, 1e-10));
    r.checks.push(CheckResult::new("covariance_lambda_inf", cov_l, 1e-10));
    r.checks.push(CheckResult::new("covariance_minus_identity", cov_m, 1e-10));
    r.checks.push(CheckResult::new("spectral_reconstruction", spectral, 1e-12));

    let mut eigen = 0.0f64;
    for _ in 0..trials.min(20) {
        let psi = random_wavefunction(grid_size, &mut rng);
        for eps in [Epsilon::Plus, Epsilon::Minus] {
            let st = make_epsilon_eigenstate(grid, &psi, eps)?.state;
            let img = st.apply_u_lambda_inf(&SectorInvolution::identity(), dir)?;
            eigen = eigen.max(img.distance(&st.scaled(Complex64::new(eps.value(), 0.0))));
        }
    }
    r.checks.push(CheckResult::new("epsilon_eigenstates", eigen, 1e-12));

    if steps == 0 {
        r.notices.push("grid too small for lattice boosts; boost checks used zero rapidity".into());
    }
    if helicity == 0 {
        r.notices.push("helicity 0: rotations act trivially".into());
    }

    // informational: the partners that do not close
    let s = DoubletState::random(grid, support.clone(), &mut rng);
    let a = FourVector::new(1.0, 0.2, -0.5, 0.3);
    let id = SectorInvolution::identity();
    let lhs = s.apply_u_lambda_inf(&id, dir)?.apply_translation(&a).apply_u_lambda_inf(&id, dir)?;
    let naive = s.apply_translation(&LorentzMatrix::lambda_inf(dir, Convention::Momentum).apply(&a));
    let mut info = json!({
        "grid": { "count": grid_size, "ratio": grid.ratio(), "helicity": helicity, "theta": dir.theta, "phi": dir.phi },
        "lattice_steps": steps,
        "translation_partner_momentum_matrix_defect": lhs.distance(&naive),
    });
    if grid_size > 2 * (steps as usize).max(1) && steps > 0 {
        let signs = (0..grid_size).map(|i| if i % 2 == 0 { Epsilon::Plus } else { Epsilon::Minus }).collect();
        let el = AxialElement::boost(grid.log_ratio()).to_element(dir);
        let dev = check_covariance(&s, &el, DiscreteOp::LambdaInf, &SectorInvolution::PerPoint(signs))?;
        info["non_uniform_c_boost_defect"] = json!(dev);
    }
    r.info = info;
    Ok(r)
}

fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

fn random_matrix2<R: Rng>(rng: &mut R) -> Matrix2<Complex64> {
    Matrix2::from_fn(|_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

fn matrix_dev(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Qubit-bridge invariants with 100 random cases each.
pub fn bell_suite(grid_size: usize, seed: u64) -> Result<Report, CheckError> {
    positive("grid-size", grid_size)?;
    let n = grid_size;
    let cases = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = FrequencyGrid::along_z(n, 1)?;
    let mut r = Report::new("bell-check");

    let (mut iso, mut unit, mut prod, mut adj, mut expect, mut vec_eq) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let ident = DMatrix::<Complex64>::identity(2 * n, 2 * n);
    unit = unit.max(matrix_dev(iota(&DMatrix::identity(n, n), &pauli::identity()).expect("square").matrix(), &ident));
    let x_ext = tensor_operator(&DMatrix::identity(n, n), &pauli::x());
    for _ in 0..cases {
        let phi = DoubletState::random(grid, 0..n, &mut rng);
        let psi = DoubletState::random(grid, 0..n, &mut rng);
        let lhs = sector_isometry(&phi).inner(&sector_isometry(&psi));
        iso = iso.max((lhs - phi.inner(&psi)?).norm());

        let (a1, a2, b1, b2) = (
            random_matrix(n, &mut rng),
            random_matrix(n, &mut rng),
            random_matrix2(&mut rng),
            random_matrix2(&mut rng),
        );
        let i1 = iota(&a1, &b1).expect("square");
        let i2 = iota(&a2, &b2).expect("square");
        prod = prod.max(i1.compose(&i2).max_abs_diff(&iota(&(&a1 * &a2), &(b1 * b2)).expect("square")));
        adj = adj.max(i1.adjoint().max_abs_diff(&iota(&a1.adjoint(), &b1.adjoint()).expect("square")));

        expect = expect.max(expectation_equality(&psi, &a1, &b1).expect("matching dimensions").deviation);

        let swapped = psi.apply_u_lambda_inf(&SectorInvolution::identity(), grid.direction())?;
        let dev = (&x_ext * sector_isometry(&psi).0 - sector_isometry(&swapped).0)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        vec_eq = vec_eq.max(dev);
    }
    r.checks.push(CheckResult::new("v_isometry", iso, 1e-12));
    r.checks.push(CheckResult::new("iota_unit", unit, 1e-10));
    r.checks.push(CheckResult::new("iota_product", prod, 1e-10));
    r.checks.push(CheckResult::new("iota_adjoint", adj, 1e-10));
    r.checks.push(CheckResult::new("expectation_equality", expect, 1e-10));

    let psi = random_wavefunction(n, &mut rng);
    let minus = make_epsilon_eigenstate(grid, &psi, Epsilon::Minus)?.state;
    let report = expectation_equality(&minus, &DMatrix::identity(n, n), &pauli::x()).expect("matching dimensions");
    let dev = (report.lhs - Complex64::new(-1.0, 0.0)).norm().max((report.rhs + 1.0).norm());
    r.checks.push(CheckResult::new("expectation_sigma_x_on_minus_sector", dev, 1e-10));

    let conj = [1, 8, n].map(u_lambda_conjugation_check).into_iter().fold(0.0, f64::max);
    r.checks.push(
        CheckResult::new("v_u_lambda_v_inverse_is_i_sigma_x", conj, 1e-14).with_note(format!("N ∈ {{1, 8, {n}}}")),
    );
    r.checks.push(CheckResult::new("sigma_x_intertwines_states", vec_eq, 1e-12));
    let block = lambda_inf_block(n);
    let sq = matrix_dev(&(block.matrix() * block.matrix()), &ident);
    r.checks.push(CheckResult::new("u_lambda_block_squared_identity", sq, 0.0));

    let plus = sector_isometry(&make_epsilon_eigenstate(grid, &psi, Epsilon::Plus)?.state);
    let minus_v = sector_isometry(&minus);
    let mut eig =
        (plus.inner(&plus) - 1.0).norm().max((minus_v.inner(&minus_v) - 1.0).norm()).max(plus.inner(&minus_v).norm());
    eig = eig.max((&x_ext * &plus.0 - &plus.0).camax()).max((&x_ext * &minus_v.0 + &minus_v.0).camax());
    r.checks.push(CheckResult::new("epsilon_states_orthonormal_eigenvectors", eig, 1e-12));

    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let product = entanglement_entropy(&TwoQubitState::basis(0)).expect("normalized");
    let bell = entanglement_entropy(&TwoQubitState::from_amplitudes([s, Complex64::ZERO, Complex64::ZERO, s]))
        .expect("normalized");
    let phased = (0..8)
        .map(|k| {
            let ph = Complex64::from_polar(FRAC_1_SQRT_2, TAU * k as f64 / 8.0);
            entanglement_entropy(&TwoQubitState::from_amplitudes([s, Complex64::ZERO, Complex64::ZERO, ph]))
                .expect("normalized")
        })
        .map(|e| (e - LN_2).abs())
        .fold(0.0, f64::max);
    let ent = product.abs().max((bell - LN_2).abs()).max(phased);
    r.checks.push(CheckResult::new("entanglement_entropy_values", ent, 1e-12).with_note("product 0, Bell-like ln 2"));
    r.info = json!({ "grid_size": n, "cases": cases, "entropy_bell_nats": bell });
    Ok(r)
}
