//! End-to-end acceptance suite.
//!
//! Each test covers one numbered criterion of the project checklist and
//! prints a single `criterion NN (...): pass|FAIL` line with its runtime;
//! run with `cargo test --test acceptance -- --nocapture` to see every
//! line.  Tolerances are pinned in the assertions, not configurable.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bpv::norm::{omega_n, NormSpec};
use bpv::pde::{solve, PdeProblem};
use bpv::rearrange::{hardy_inequality_check, rearrange_report, GridFunction};
use bpv::rigidity::{
    analyze_h_alpha, h_alpha, monotone_check, rigidity_functional, Deficiency, MonotoneKind,
    VolumeProfile,
};
use bpv::spectrum::{
    euler_lagrange_residual, extremal_profile, radial_eigen_min, verify_bpv_grid, MeshSpec,
};
use bpv::specfun::{
    bessel_j, bessel_zero, first_zero, mittag_leffler_ratio, rayleigh_extrapolated, ZeroTable,
};

/// Runs one criterion body, prints its verdict line, and enforces the
/// runtime budget when one is pinned.
fn criterion<F>(num: u32, name: &str, budget_secs: Option<f64>, body: F)
where
    F: FnOnce() + std::panic::UnwindSafe,
{
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(body);
    let elapsed = start.elapsed().as_secs_f64();
    let in_budget = budget_secs.map_or(true, |b| elapsed < b);
    let verdict = if outcome.is_ok() && in_budget {
        "pass"
    } else {
        "FAIL"
    };
    println!("criterion {num:>2} ({name}): {verdict} [{elapsed:.2}s]");
    if let Err(payload) = outcome {
        std::panic::resume_unwind(payload);
    }
    if let Some(budget) = budget_secs {
        assert!(
            elapsed < budget,
            "criterion {num} runtime {elapsed:.2}s exceeds the {budget}s budget"
        );
    }
}

/// Centered square lattice of odd or even extent `m`, spacing `h`, with
/// values produced per cell from the multi-index and center coordinates.
fn build_grid<F>(m: usize, h: f64, mut fill: F) -> GridFunction
where
    F: FnMut(usize, usize, [f64; 2]) -> f64,
{
    let origin = -h * (m - 1) as f64 / 2.0;
    let mut values = vec![0.0; m * m];
    for i in 0..m {
        for k in 0..m {
            let x = [origin + h * i as f64, origin + h * k as f64];
            values[i * m + k] = fill(i, k, x);
        }
    }
    GridFunction::new(vec![m, m], vec![origin, origin], h, values).expect("valid lattice")
}

/// Random non-negative values on the interior cells, zero on the
/// outermost layer.
fn random_vanishing(m: usize, h: f64, rng: &mut ChaCha8Rng) -> GridFunction {
    build_grid(m, h, |i, k, _| {
        let draw = rng.gen::<f64>();
        if i > 0 && i + 1 < m && k > 0 && k + 1 < m {
            draw
        } else {
            0.0
        }
    })
}

/// Trapezoid weights for radial nodes on (0, r], with the origin as the
/// implicit left endpoint.
fn trapezoid_weights(nodes: &[f64]) -> Vec<f64> {
    let m = nodes.len();
    (0..m)
        .map(|i| {
            let left = if i == 0 { 0.0 } else { nodes[i - 1] };
            let right = if i + 1 < m { nodes[i + 1] } else { nodes[i] };
            0.5 * (right - left)
        })
        .collect()
}

#[test]
fn criterion_01_bessel_core() {
    criterion(1, "bessel core", Some(5.0), || {
        // First zero to four decimals.
        let j01 = bessel_zero(0.0, 1).unwrap();
        assert!(
            (j01 - 2.4048).abs() < 5e-5,
            "j_0 = {j01} does not match 2.4048 to 4 decimals"
        );
        // Residuals of tabulated zeros.
        for &alpha in &[0.0, 0.5, 1.0, 2.5, 5.0] {
            let table = ZeroTable::compute(alpha, 10).unwrap();
            for k in 1..=10 {
                let residual = bessel_j(alpha, table.zero(k)).unwrap().abs();
                assert!(
                    residual <= 1e-11,
                    "zero residual {residual:e} at alpha = {alpha}, k = {k}"
                );
            }
        }
        // Three-term recurrence.
        for &alpha in &[1.0, 1.5, 2.0, 3.0] {
            for &t in &[0.5, 1.7, 4.1, 9.3, 15.8] {
                let lhs = bessel_j(alpha - 1.0, t).unwrap() + bessel_j(alpha + 1.0, t).unwrap();
                let rhs = 2.0 * alpha / t * bessel_j(alpha, t).unwrap();
                assert!(
                    (lhs - rhs).abs() <= 1e-10,
                    "recurrence defect {:e} at alpha = {alpha}, t = {t}",
                    (lhs - rhs).abs()
                );
            }
        }
        // Zero-sum expansion of J_{a+1}/J_a against the certified tail.
        for &(alpha, t) in &[(0.5, 0.8), (1.5, 1.0), (3.0, 2.5)] {
            let ml = mittag_leffler_ratio(alpha, t, 60).unwrap();
            let reference = bessel_j(alpha + 1.0, t).unwrap() / bessel_j(alpha, t).unwrap();
            let defect = (ml.value() - reference).abs();
            assert!(
                defect <= ml.tail_bound + 1e-10,
                "expansion defect {defect:e} beyond tail bound {:e} at alpha = {alpha}, t = {t}",
                ml.tail_bound
            );
        }
    });
}

#[test]
fn criterion_02_rayleigh_sum() {
    criterion(2, "Rayleigh zero sum", Some(30.0), || {
        for &alpha in &[0.0, 0.5, 1.0, 2.0] {
            let sum = rayleigh_extrapolated(alpha, 200).unwrap();
            let closed_form = 0.25 / (alpha + 1.0);
            assert!(
                (sum - closed_form).abs() <= 1e-6,
                "alpha = {alpha}: extrapolated sum {sum} vs closed form {closed_form}"
            );
        }
    });
}

#[test]
fn criterion_03_sharp_constant_recovery() {
    criterion(3, "sharp-constant recovery", Some(60.0), || {
        for &(alpha, n) in &[(0.0, 2usize), (0.5, 3), (1.0, 4), (1.5, 5)] {
            let j = first_zero(alpha).unwrap();
            let (mu, _) = radial_eigen_min(alpha, n, 1.0, 4000).unwrap();
            let gap = (mu - j * j).abs() / (j * j);
            assert!(
                gap <= 1e-3,
                "(alpha, n) = ({alpha}, {n}): relative gap {gap:e}"
            );
        }
        // Dilation covariance mu(R) = mu(1)/R^2.
        let (mu_unit, _) = radial_eigen_min(0.5, 3, 1.0, 4000).unwrap();
        let (mu_double, _) = radial_eigen_min(0.5, 3, 2.0, 4000).unwrap();
        let defect = (4.0 * mu_double - mu_unit).abs() / mu_unit;
        assert!(defect <= 1e-6, "dilation defect {defect:e}");
    });
}

#[test]
fn criterion_04_extremal_certification() {
    criterion(4, "extremal certification", None, || {
        for &(alpha, n) in &[(0.0, 2usize), (0.5, 3), (1.0, 4), (1.5, 5)] {
            let profile = extremal_profile(alpha, n, 1.0, MeshSpec::default()).unwrap();
            let j = first_zero(alpha).unwrap();
            let residual = euler_lagrange_residual(&profile, alpha, n, j * j).unwrap();
            let bound = 1e-6 * profile.max_abs();
            assert!(
                residual <= bound,
                "(alpha, n) = ({alpha}, {n}): residual {residual:e} > {bound:e}"
            );
        }
    });
}

#[test]
fn criterion_05_discrete_inequality() {
    criterion(5, "discrete interpolation inequality", Some(120.0), || {
        let families = [
            NormSpec::euclidean(2).unwrap(),
            NormSpec::lp(2, 4.0, 1.0).unwrap().normalize().unwrap(),
            NormSpec::quadratic(vec![vec![4.0, 0.0], vec![0.0, 1.0]], 1.0)
                .unwrap()
                .normalize()
                .unwrap(),
        ];
        // Random boundary-vanishing functions on a 64^2 lattice.
        let mut rng = ChaCha8Rng::seed_from_u64(0x6163_6335);
        let (m, h) = (64usize, 1.0 / 32.0);
        let box_volume = (m as f64 * h) * (m as f64 * h);
        for spec in &families {
            for case in 0..50 {
                let u = random_vanishing(m, h, &mut rng);
                let report = verify_bpv_grid(&u, spec, 0.0, box_volume).unwrap();
                assert!(
                    report.pass && report.margin >= -report.slack,
                    "case {case}: margin {} below -{}",
                    report.margin,
                    report.slack
                );
            }
        }
        // The discretized extremal over the unit-volume-normalized ball:
        // its margin shrinks towards zero under refinement.  The lattice
        // box is sized from the outer radius of the Wulff ball so the
        // sampled extremal vanishes on the outermost cell layer.
        let j0 = first_zero(0.0).unwrap();
        for spec in &families {
            let outer_radius = (0..360)
                .map(|d| {
                    let theta = d as f64 * PI / 180.0;
                    1.0 / spec.norm_eval(&[theta.cos(), theta.sin()]).unwrap()
                })
                .fold(0.0_f64, f64::max);
            let mut margins = Vec::new();
            for &m in &[32usize, 64, 128] {
                let h = 2.2 * outer_radius / m as f64;
                let u = build_grid(m, h, |_, _, x| {
                    let f = spec.norm_eval(&x).unwrap();
                    if f < 1.0 {
                        bessel_j(0.0, j0 * f).unwrap()
                    } else {
                        0.0
                    }
                });
                let report = verify_bpv_grid(&u, spec, 0.0, PI).unwrap();
                assert!(
                    report.margin >= -report.slack,
                    "extremal margin {} below -{} at m = {m}",
                    report.margin,
                    report.slack
                );
                margins.push(report.margin.abs());
            }
            assert!(
                margins[1] < margins[0] && margins[2] < margins[1],
                "margin sizes {margins:?} do not decrease under refinement"
            );
            assert!(
                margins[2] <= 0.6 * margins[0],
                "margin sizes {margins:?} do not head towards zero"
            );
        }
    });
}

#[test]
fn criterion_06_rearrangement_suite() {
    criterion(6, "rearrangement suite", None, || {
        let families = [
            NormSpec::euclidean(2).unwrap(),
            NormSpec::lp(2, 4.0, 1.0).unwrap(),
            NormSpec::quadratic(vec![vec![4.0, 0.0], vec![0.0, 1.0]], 1.0).unwrap(),
        ];
        // Equimeasurability, the rearrangement pairing inequality, and the
        // gradient-energy comparison on 100 random cases.
        let mut rng = ChaCha8Rng::seed_from_u64(0x6163_6336);
        for case in 0..100 {
            let spec = &families[case % families.len()];
            let u = random_vanishing(25, 1.0 / 12.0, &mut rng);
            let (_, report) = rearrange_report(&u, spec).unwrap();
            assert!(report.cavalieri_holds(), "case {case}: mass not conserved");
            assert!(
                report.hardy_littlewood_holds(),
                "case {case}: pairing inequality failed"
            );
            assert!(
                report.polya_szego_holds(),
                "case {case}: energy comparison failed"
            );
        }
        // The admissible energy slack is C*h with one constant C across
        // refinements of the same smooth profile.
        let mut observed_c = Vec::new();
        for &m in &[17usize, 33, 65] {
            let h = 2.2 / m as f64;
            let u = build_grid(m, h, |_, _, x| {
                let bump = (1.0 - x[0] * x[0] - x[1] * x[1]).max(0.0);
                bump * (1.0 + 0.4 * x[0] + 0.3 * x[1] * x[1])
            });
            let (_, report) = rearrange_report(&u, &families[1]).unwrap();
            assert!(report.polya_szego_holds(), "m = {m}: comparison failed");
            let defect =
                ((report.dirichlet_out - report.dirichlet_in) / report.dirichlet_in).max(0.0);
            observed_c.push(defect / h);
        }
        for (level, &c) in observed_c.iter().enumerate() {
            assert!(
                c <= 10.0,
                "slack constant {c} at refinement level {level} exceeds the pinned bound"
            );
        }
        // Anisotropic Hardy quotient in dimension three: never below
        // (n-2)^2/4 - eps_h, and decreasing towards the sharp value 1/4
        // along the truncated near-extremal family
        // u = max(F, delta)^(-1/2) (1 - F)_+, whose quotient approaches
        // the constant at the logarithmic rate of the continuum family.
        let spec3 = NormSpec::euclidean(3).unwrap();
        let m3 = 99usize;
        let h3 = 1.0 / 44.0;
        let eps_h = 10.0 * h3;
        let origin = -h3 * (m3 - 1) as f64 / 2.0;
        let mut quotients = Vec::new();
        for &delta in &[0.5, 0.25, 0.1, 0.05] {
            let mut values = vec![0.0; m3 * m3 * m3];
            for i in 0..m3 {
                for k in 0..m3 {
                    for l in 0..m3 {
                        let x = [
                            origin + h3 * i as f64,
                            origin + h3 * k as f64,
                            origin + h3 * l as f64,
                        ];
                        let f = spec3.norm_eval(&x).unwrap();
                        if f > 0.0 {
                            values[(i * m3 + k) * m3 + l] =
                                f.max(delta).powf(-0.5) * (1.0 - f).max(0.0);
                        }
                    }
                }
            }
            let u = GridFunction::new(vec![m3; 3], vec![origin; 3], h3, values).unwrap();
            let ratio = hardy_inequality_check(&u, &spec3).unwrap();
            assert!(
                ratio >= 0.25 - eps_h,
                "delta = {delta}: quotient {ratio} below 1/4 - eps_h"
            );
            quotients.push(ratio);
        }
        for pair in quotients.windows(2) {
            assert!(
                pair[1] < pair[0],
                "quotients {quotients:?} not decreasing towards the sharp value"
            );
        }
        let initial_gap = quotients[0] - 0.25;
        let final_gap = quotients.last().unwrap() - 0.25;
        assert!(
            final_gap <= 0.65 * initial_gap,
            "gap to the sharp value shrinks too slowly: {quotients:?}"
        );
    });
}

#[test]
fn criterion_07_rigidity() {
    criterion(7, "volume rigidity", Some(30.0), || {
        let pairs: [(f64, usize); 6] = [
            (0.0, 2),
            (0.3, 3),
            (0.5, 3),
            (1.0, 4),
            (1.2, 5),
            (1.5, 5),
        ];
        for &(alpha, n) in &pairs {
            let analysis = analyze_h_alpha(alpha, n).unwrap();
            assert!(
                analysis.integral_identity_residual.abs() <= 1e-8,
                "(alpha, n) = ({alpha}, {n}): zero-mean residual {:e}",
                analysis.integral_identity_residual
            );
            assert!(0.0 < analysis.t0 && analysis.t0 < 1.0);
            // Certify the unique sign change on a 1000-point scan.
            let mut crossings = 0usize;
            let mut prev = h_alpha(alpha, n, 1e-3).unwrap();
            assert!(prev < 0.0, "kernel not negative near the origin");
            for k in 2..=1000 {
                let value = h_alpha(alpha, n, k as f64 / 1000.0).unwrap();
                if prev < 0.0 && value >= 0.0 {
                    crossings += 1;
                }
                assert!(
                    !(prev >= 0.0 && value < 0.0),
                    "(alpha, n) = ({alpha}, {n}): kernel returns negative after t0"
                );
                prev = value;
            }
            assert_eq!(
                crossings, 1,
                "(alpha, n) = ({alpha}, {n}): expected exactly one sign change"
            );
        }
        // Flat growth annihilates the functional...
        for &(alpha, n) in &[(0.0, 2usize), (1.0, 4)] {
            let flat = VolumeProfile::euclidean(n).unwrap();
            let i = rigidity_functional(&flat, alpha, n, 1.0).unwrap();
            let scale = omega_n(n);
            assert!(
                i.abs() <= 1e-8 * scale,
                "flat profile functional {i:e} not zero within 1e-8*scale"
            );
        }
        // ...while strictly deficient growth is strictly negative.
        let scale2 = omega_n(2);
        for &c in &[0.5, 0.8, 0.95] {
            let profile = VolumeProfile::scaled_flat(2, c).unwrap();
            let i = rigidity_functional(&profile, 0.0, 2, 1.0).unwrap();
            assert!(
                i < -1e-6 * scale2,
                "scaled profile c = {c}: functional {i:e} not strictly negative"
            );
        }
        let scale3 = omega_n(3);
        for family in [
            Deficiency::Linear { slope: 1.0 },
            Deficiency::Step {
                height: 0.3,
                at: 0.5,
            },
        ] {
            let profile = VolumeProfile::parametric(3, family, 1.0).unwrap();
            let i = rigidity_functional(&profile, 0.5, 3, 1.0).unwrap();
            assert!(
                i < -1e-6 * scale3,
                "deficiency {family:?}: functional {i:e} not strictly negative"
            );
        }
    });
}

#[test]
fn criterion_08_monotonicity() {
    criterion(8, "monotone Bessel families", None, || {
        let pairs: [(f64, usize); 6] = [
            (0.0, 2),
            (0.25, 3),
            (0.5, 3),
            (1.0, 4),
            (0.7, 5),
            (1.5, 5),
        ];
        for &(alpha, n) in &pairs {
            for &beta in &[0.0, 1.0, 2.0] {
                let worst = monotone_check(MonotoneKind::PowerBessel { beta }, alpha, n).unwrap();
                assert!(
                    worst <= 1e-12,
                    "power family beta = {beta}: violation {worst:e} at ({alpha}, {n})"
                );
            }
            for kind in [MonotoneKind::Product, MonotoneKind::Defect] {
                let worst = monotone_check(kind, alpha, n).unwrap();
                assert!(
                    worst <= 1e-12,
                    "{kind:?}: violation {worst:e} at ({alpha}, {n})"
                );
            }
        }
    });
}

#[test]
fn criterion_09_pde_threshold() {
    criterion(9, "ground-state existence threshold", Some(300.0), || {
        for &(alpha, n, p) in &[(0.0, 2usize, 4.0), (1.0, 4, 3.0)] {
            let j = first_zero(alpha).unwrap();
            let j2 = j * j;
            let extremal = extremal_profile(alpha, n, 1.0, MeshSpec::default()).unwrap();
            for &offset in &[-1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 5.0] {
                let lambda = -j2 + offset;
                let problem = PdeProblem::new(alpha, n, p, lambda).unwrap();
                let solution = solve(&problem, MeshSpec::default(), 3).unwrap();
                assert_eq!(
                    solution.nonzero,
                    offset > 0.0,
                    "(alpha, n, p) = ({alpha}, {n}, {p}), offset {offset}: nonzero = {}",
                    solution.nonzero
                );
                if !solution.nonzero {
                    continue;
                }
                let sup = solution.profile.max_abs();
                assert!(
                    solution.residual <= 1e-5 * sup,
                    "offset {offset}: residual {:e} above 1e-5 * sup",
                    solution.residual
                );
                // Pairing the equation with the linear extremal:
                // (lambda + j^2) \int u* u = \int u* u^(p-1).
                assert_eq!(solution.profile.nodes(), extremal.nodes());
                let nodes = solution.profile.nodes();
                let weights = trapezoid_weights(nodes);
                let mut mass_pairing = 0.0_f64;
                let mut power_pairing = 0.0_f64;
                for i in 0..nodes.len() {
                    let w = weights[i] * nodes[i].powi(n as i32 - 1);
                    let u_star = extremal.values()[i];
                    let u = solution.profile.values()[i];
                    mass_pairing += w * u_star * u;
                    power_pairing += w * u_star * u.max(0.0).powf(p - 1.0);
                }
                let lhs = (lambda + j2) * mass_pairing;
                let scale = lhs.abs().max(power_pairing.abs());
                assert!(
                    lhs > 0.0 && power_pairing > 0.0,
                    "offset {offset}: pairings not positive"
                );
                assert!(
                    (lhs - power_pairing).abs() <= 1e-4 * scale,
                    "offset {offset}: identity defect {:e} above 1e-4 relative",
                    (lhs - power_pairing).abs() / scale
                );
            }
        }
    });
}
