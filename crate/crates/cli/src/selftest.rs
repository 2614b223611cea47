//! Deterministic invariant suite behind `bpv selftest`.
//!
//! Every check exercises a documented invariant of the library: special
//! functions, sharp constants, spectra, symmetrization, the discrete
//! inequality, volume rigidity, and the ground-state solver.  All
//! randomness is drawn from ChaCha8 streams derived from the run seed, so
//! a fixed seed yields a byte-identical report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use bpv::norm::{lp_ball_volume, NormSpec};
use bpv::pde::{coercivity_constant, solve, PdeProblem};
use bpv::rearrange::{rearrange_report, GridFunction};
use bpv::rigidity::{
    analyze_h_alpha, layer_cake_integral, monotone_check, rigidity_verdict, MonotoneKind,
    RigidityVerdict, SampledDecreasing, VolumeProfile,
};
use bpv::spectrum::{
    extremal_profile, euler_lagrange_residual, radial_eigen_min, sharp_constant, verify_bpv_grid,
    MeshSpec,
};
use bpv::specfun::{
    bessel_j, bessel_j_prime, bessel_zero, first_zero, mittag_leffler_ratio, rayleigh_extrapolated,
    ZeroTable,
};

/// Outcome of a single invariant check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    /// Headline quantity the check measured, rendered deterministically.
    pub observed: String,
}

/// Full suite outcome.
#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckRecord>,
}

pub fn run(seed: u64) -> SelftestReport {
    let mut checks: Vec<CheckRecord> = Vec::new();
    let mut record = |name: &str, outcome: bpv::Result<(bool, String)>| {
        let (passed, observed) = match outcome {
            Ok(pair) => pair,
            Err(e) => (false, format!("error: {e}")),
        };
        checks.push(CheckRecord {
            name: name.to_string(),
            passed,
            observed,
        });
    };

    record("bessel-zero-table", bessel_zero_table());
    record("bessel-recurrence", bessel_recurrence());
    record("bessel-derivative", bessel_derivative());
    record("rayleigh-sum", rayleigh_sum());
    record("mittag-leffler", mittag_leffler());
    record("sharp-constant", sharp_constant_checks());
    record("extremal-el-residual", extremal_el_residual());
    record("eigen-min", eigen_min());
    record("norm-ball-volume", norm_ball_volume());
    record("norm-polar-duality", norm_polar_duality(seed));
    record("norm-uniformity", norm_uniformity());
    record("rearrange-audit", rearrange_audit(seed));
    record("grid-bpv-margin", grid_bpv_margin(seed));
    record("rigidity-kernel", rigidity_kernel());
    record("rigidity-verdicts", rigidity_verdicts());
    record("layer-cake", layer_cake());
    record("monotone-families", monotone_families());
    record("pde-coercivity", pde_coercivity());
    record("pde-ground-state", pde_ground_state());
    record("pde-below-threshold", pde_below_threshold());

    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;
    SelftestReport {
        seed,
        passed,
        failed,
        checks,
    }
}

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

fn bessel_zero_table() -> bpv::Result<(bool, String)> {
    let j01 = bessel_zero(0.0, 1)?;
    let drift = (j01 - 2.404_825_557_695_773).abs();
    let mut residual = 0.0_f64;
    for &alpha in &[0.0, 1.0, 2.5] {
        let table = ZeroTable::compute(alpha, 8)?;
        for k in 1..=8 {
            residual = residual.max(bessel_j(alpha, table.zero(k))?.abs());
        }
    }
    Ok((
        drift <= 1e-12 && residual <= 1e-11,
        format!("j01 drift {drift:.3e}, max zero residual {residual:.3e}"),
    ))
}

fn bessel_recurrence() -> bpv::Result<(bool, String)> {
    let mut worst = 0.0_f64;
    for &alpha in &[1.0, 2.0, 2.5] {
        for &t in &[0.7, 3.3, 11.2] {
            let lhs = bessel_j(alpha - 1.0, t)? + bessel_j(alpha + 1.0, t)?;
            let rhs = 2.0 * alpha / t * bessel_j(alpha, t)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok((worst <= 1e-10, format!("worst recurrence defect {worst:.3e}")))
}

fn bessel_derivative() -> bpv::Result<(bool, String)> {
    let mut worst = 0.0_f64;
    for &t in &[0.4, 1.9, 6.0, 14.3] {
        let alpha = 1.5;
        let direct = bessel_j_prime(alpha, t)?;
        let via_recurrence = 0.5 * (bessel_j(alpha - 1.0, t)? - bessel_j(alpha + 1.0, t)?);
        worst = worst.max((direct - via_recurrence).abs());
    }
    Ok((worst <= 1e-10, format!("worst derivative defect {worst:.3e}")))
}

fn rayleigh_sum() -> bpv::Result<(bool, String)> {
    let mut worst = 0.0_f64;
    for &alpha in &[0.0, 1.0] {
        let sum = rayleigh_extrapolated(alpha, 40)?;
        worst = worst.max((sum - 0.25 / (alpha + 1.0)).abs());
    }
    Ok((worst <= 1e-6, format!("worst sum defect {worst:.3e}")))
}

fn mittag_leffler() -> bpv::Result<(bool, String)> {
    let (alpha, t) = (1.5, 1.0);
    let ml = mittag_leffler_ratio(alpha, t, 60)?;
    let reference = bessel_j(alpha + 1.0, t)? / bessel_j(alpha, t)?;
    let defect = (ml.value() - reference).abs();
    Ok((
        defect <= ml.tail_bound + 1e-12,
        format!("defect {defect:.3e} against tail bound {:.3e}", ml.tail_bound),
    ))
}

// ---------------------------------------------------------------------------
// Sharp constant and spectra
// ---------------------------------------------------------------------------

fn sharp_constant_checks() -> bpv::Result<(bool, String)> {
    let j0 = first_zero(0.0)?;
    let unit = sharp_constant(0.0, 2, std::f64::consts::PI)?;
    let unit_defect = (unit - j0 * j0).abs() / (j0 * j0);
    let scaled = sharp_constant(1.0, 4, 2.7)?;
    let reference = sharp_constant(1.0, 4, 1.0)? * 2.7_f64.powf(-0.5);
    let scale_defect = (scaled - reference).abs() / reference;
    let worst = unit_defect.max(scale_defect);
    Ok((worst <= 1e-12, format!("worst relative defect {worst:.3e}")))
}

fn extremal_el_residual() -> bpv::Result<(bool, String)> {
    let mut worst_ratio = 0.0_f64;
    for &(alpha, n) in &[(0.0, 2usize), (1.0, 4usize)] {
        let profile = extremal_profile(alpha, n, 1.0, MeshSpec::default())?;
        let j = first_zero(alpha)?;
        let residual = euler_lagrange_residual(&profile, alpha, n, j * j)?;
        worst_ratio = worst_ratio.max(residual / profile.max_abs());
    }
    Ok((
        worst_ratio <= 1e-6,
        format!("worst residual / sup {worst_ratio:.3e}"),
    ))
}

fn eigen_min() -> bpv::Result<(bool, String)> {
    let j0 = first_zero(0.0)?;
    let (mu, _) = radial_eigen_min(0.0, 2, 1.0, 2000)?;
    let gap = (mu - j0 * j0).abs() / (j0 * j0);
    let (mu_dilated, _) = radial_eigen_min(0.0, 2, 2.0, 2000)?;
    let scaling_defect = (4.0 * mu_dilated - mu).abs() / mu;
    Ok((
        gap <= 1e-3 && scaling_defect <= 1e-6,
        format!("eigenvalue gap {gap:.3e}, dilation defect {scaling_defect:.3e}"),
    ))
}

// ---------------------------------------------------------------------------
// Norm geometry
// ---------------------------------------------------------------------------

fn norm_ball_volume() -> bpv::Result<(bool, String)> {
    let quartic = NormSpec::lp(2, 4.0, 1.0)?;
    let estimate = quartic.unit_ball_volume_estimate()?;
    let exact = lp_ball_volume(2, 4.0);
    let quartic_defect = (estimate.value - exact).abs() / exact;

    let quadratic = NormSpec::quadratic(vec![vec![4.0, 0.0], vec![0.0, 1.0]], 1.0)?;
    let analytic = quadratic.unit_ball_volume()?;
    let quadratic_defect =
        (analytic - std::f64::consts::PI / 2.0).abs() / (std::f64::consts::PI / 2.0);

    Ok((
        quartic_defect <= 1e-3 && quadratic_defect <= 1e-9,
        format!("lattice defect {quartic_defect:.3e}, quadratic defect {quadratic_defect:.3e}"),
    ))
}

fn norm_polar_duality(seed: u64) -> bpv::Result<(bool, String)> {
    let specs = [
        NormSpec::lp(2, 4.0, 1.0)?,
        NormSpec::quadratic(vec![vec![4.0, 0.0], vec![0.0, 1.0]], 1.0)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x706f_6c61);
    let mut worst = 0.0_f64;
    for spec in &specs {
        for _ in 0..200 {
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let xi = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let fx = spec.norm_eval(&x)?;
            let fxi = spec.polar_eval(&xi)?;
            if fx < 1e-6 || fxi < 1e-6 {
                continue;
            }
            let pairing = x[0] * xi[0] + x[1] * xi[1];
            worst = worst.max(pairing / (fx * fxi) - 1.0);
        }
    }
    Ok((
        worst <= 1e-9,
        format!("worst duality excess {worst:.3e}"),
    ))
}

fn norm_uniformity() -> bpv::Result<(bool, String)> {
    let quadratic = NormSpec::quadratic(vec![vec![4.0, 0.0], vec![0.0, 1.0]], 1.0)?;
    let riemannian = quadratic.uniformity_constant(2000)?;
    // The quartic norm's Hessian degenerates along the axes, so its
    // uniformity constant is genuinely tiny; only strict positivity and
    // strict contrast with the Riemannian case are invariant.
    let quartic = NormSpec::lp(2, 4.0, 1.0)?.uniformity_constant(2000)?;
    Ok((
        (riemannian - 1.0).abs() <= 1e-6 && quartic > 0.0 && quartic < 0.999,
        format!("quadratic {riemannian:.6}, quartic {quartic:.3e}"),
    ))
}

// ---------------------------------------------------------------------------
// Symmetrization and the discrete inequality
// ---------------------------------------------------------------------------

/// Random non-negative grid function vanishing on the outermost cell layer
/// of a centered odd lattice.
fn random_vanishing_grid(m: usize, h: f64, rng: &mut ChaCha8Rng) -> bpv::Result<GridFunction> {
    let origin = vec![-h * (m - 1) as f64 / 2.0; 2];
    let mut values = vec![0.0; m * m];
    for i in 0..m {
        for k in 0..m {
            let draw = rng.gen::<f64>();
            if i > 0 && i + 1 < m && k > 0 && k + 1 < m {
                values[i * m + k] = draw;
            }
        }
    }
    GridFunction::new(vec![m, m], origin, h, values)
}

fn rearrange_audit(seed: u64) -> bpv::Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7265_6172);
    let u = random_vanishing_grid(33, 1.0 / 16.0, &mut rng)?;
    let mut ok = true;
    let mut worst_defect = f64::NEG_INFINITY;
    for spec in [NormSpec::euclidean(2)?, NormSpec::lp(2, 4.0, 1.0)?] {
        let (_, report) = rearrange_report(&u, &spec)?;
        ok &= report.cavalieri_holds()
            && report.hardy_littlewood_holds()
            && report.polya_szego_holds();
        let defect = (report.dirichlet_out - report.dirichlet_in) / report.dirichlet_in;
        worst_defect = worst_defect.max(defect);
    }
    Ok((
        ok,
        format!("worst relative Dirichlet defect {worst_defect:.3e}"),
    ))
}

fn grid_bpv_margin(seed: u64) -> bpv::Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6270_7633);
    let m = 49;
    let h = 1.0 / 24.0;
    let u = random_vanishing_grid(m, h, &mut rng)?;
    let spec = NormSpec::lp(2, 4.0, 1.0)?.normalize()?;
    let box_volume = (m as f64 * h) * (m as f64 * h);
    let report = verify_bpv_grid(&u, &spec, 0.0, box_volume)?;
    Ok((
        report.pass,
        format!("margin {:.6e} with slack {:.3e}", report.margin, report.slack),
    ))
}

// ---------------------------------------------------------------------------
// Rigidity
// ---------------------------------------------------------------------------

fn rigidity_kernel() -> bpv::Result<(bool, String)> {
    let mut worst = 0.0_f64;
    let mut ok = true;
    for &(alpha, n) in &[(0.0, 2usize), (1.0, 4usize)] {
        let analysis = analyze_h_alpha(alpha, n)?;
        worst = worst.max(analysis.integral_identity_residual.abs());
        ok &= analysis.t0 > 0.0 && analysis.t0 < 1.0;
    }
    Ok((
        ok && worst <= 1e-8,
        format!("worst zero-mean residual {worst:.3e}"),
    ))
}

fn rigidity_verdicts() -> bpv::Result<(bool, String)> {
    let flat = rigidity_verdict(&VolumeProfile::euclidean(2)?, 0.0, 2, 1.0)?;
    let bent = rigidity_verdict(&VolumeProfile::scaled_flat(2, 0.9)?, 0.0, 2, 1.0)?;
    let ok = flat.verdict == RigidityVerdict::Flat
        && bent.verdict == RigidityVerdict::BpvViolated
        && bent.functional < 0.0;
    Ok((
        ok,
        format!(
            "flat functional {:.3e}, scaled functional {:.6e}",
            flat.functional, bent.functional
        ),
    ))
}

fn layer_cake() -> bpv::Result<(bool, String)> {
    // First sample hugs the origin: the integrand is continued as a
    // constant on the initial gap, so a wide gap would bias the check.
    let samples = 400;
    let mut rho: Vec<f64> = vec![1e-9];
    rho.extend((1..=samples).map(|i| i as f64 / samples as f64));
    let value: Vec<f64> = rho.iter().map(|&r| 1.0 - r).collect();
    let hat = SampledDecreasing::new(rho, value)?;
    let disc = VolumeProfile::euclidean(2)?;
    let integral = layer_cake_integral(&disc, &hat, 1.0)?;
    let exact = std::f64::consts::PI / 3.0;
    let defect = (integral - exact).abs();
    Ok((defect <= 1e-9, format!("defect {defect:.3e}")))
}

fn monotone_families() -> bpv::Result<(bool, String)> {
    let kinds = [
        MonotoneKind::PowerBessel { beta: 0.0 },
        MonotoneKind::PowerBessel { beta: 1.0 },
        MonotoneKind::PowerBessel { beta: 2.0 },
        MonotoneKind::Product,
        MonotoneKind::Defect,
    ];
    let mut worst = 0.0_f64;
    for kind in kinds {
        worst = worst.max(monotone_check(kind, 1.0, 4)?);
    }
    Ok((worst <= 1e-12, format!("worst violation {worst:.3e}")))
}

// ---------------------------------------------------------------------------
// Ground-state solver
// ---------------------------------------------------------------------------

fn pde_coercivity() -> bpv::Result<(bool, String)> {
    let plane = PdeProblem::new(0.0, 2, 4.0, 0.0)?;
    let c_plane = coercivity_constant(&plane, 1.0)?;
    let j1 = first_zero(1.0)?;
    let four_d = PdeProblem::new(1.0, 4, 3.0, -0.5 * j1 * j1)?;
    let c_four = coercivity_constant(&four_d, 1.0)?;
    let worst = (c_plane - 1.0).abs().max((c_four - 0.5).abs());
    Ok((worst <= 1e-12, format!("worst coefficient defect {worst:.3e}")))
}

fn pde_ground_state() -> bpv::Result<(bool, String)> {
    let problem = PdeProblem::new(0.0, 2, 4.0, 0.0)?;
    let solution = solve(&problem, MeshSpec::default(), 2)?;
    let sup = solution.profile.max_abs();
    let ok = solution.nonzero
        && sup > 0.1
        && solution.energy > 0.0
        && solution.residual <= 1e-5 * sup;
    Ok((
        ok,
        format!(
            "residual / sup {:.3e}, energy {:.6}",
            solution.residual / sup.max(f64::MIN_POSITIVE),
            solution.energy
        ),
    ))
}

fn pde_below_threshold() -> bpv::Result<(bool, String)> {
    let j0 = first_zero(0.0)?;
    let problem = PdeProblem::new(0.0, 2, 4.0, -j0 * j0 - 0.5)?;
    let solution = solve(&problem, MeshSpec::new(400, 2.0)?, 3)?;
    Ok((
        !solution.nonzero,
        format!("nonzero candidate found: {}", solution.nonzero),
    ))
}
