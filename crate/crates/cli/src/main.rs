//! `bpv` — command-line front end for the bpv numerical toolkit.
//!
//! One binary, one subcommand per capability.  Every run emits a single
//! artifact that opens with the fully resolved configuration, followed by
//! the result payload.  JSON is the canonical format; `--format csv`
//! projects the same data onto plot-ready columns (scalar results become
//! `key,value` rows, profiles become coordinate columns).  Identical
//! configuration and seed produce byte-identical payloads; nothing
//! wall-clock-dependent enters the artifact.

mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bpv::rearrange::GridFunction;
use bpv::rigidity::{analyze_h_alpha, rigidity_verdict, VolumeProfile};
use bpv::spectrum::{
    extremal_profile, euler_lagrange_residual, radial_eigen_min, sharp_constant, verify_bpv_grid,
    MeshSpec, RadialProfile,
};
use bpv::norm::NormSpec;
use bpv::pde::{solve, PdeProblem};
use bpv::specfun::{bessel_j_pair, bessel_j_prime, first_zero, ZeroTable};

/// Numerical toolkit for the sharp anisotropic Hardy–Poincaré
/// interpolation inequality: Bessel machinery, radial spectra,
/// symmetrization, volume-rigidity audits, and a ground-state solver.
#[derive(Parser)]
#[command(name = "bpv", version, disable_help_subcommand = true)]
struct Cli {
    /// Output format: canonical JSON or a columnar CSV projection.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the artifact to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for the randomized checks; the BPV_SEED environment variable,
    /// when set, overrides this flag.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate J_α, J_{α+1}, and J_α′ on a uniform grid of (0, max-t].
    Bessel {
        /// Bessel order α ≥ 0.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Right endpoint of the evaluation window.
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        max_t: f64,
        /// Number of evaluation points.
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },

    /// Compute the first positive zeros j_{α,1..count} of J_α.
    Zeros {
        /// Bessel order α ≥ 0.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// How many zeros to compute.
        #[arg(long, default_value_t = 10)]
        count: usize,
    },

    /// Sharp Poincaré-type constant S_α(Ω) = j_α²·(ω_n/Vol(Ω))^(2/n).
    SharpConstant {
        /// Weight exponent α.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Ambient dimension n ≥ 2.
        #[arg(long)]
        n: usize,
        /// Volume of the domain Ω.
        #[arg(long, allow_negative_numbers = true)]
        volume: f64,
    },

    /// Radial extremal profile F^((2−n)/2)·J_α(j_α·F/r) on a graded mesh.
    Extremal {
        /// Weight exponent α.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Ambient dimension n ≥ 2.
        #[arg(long)]
        n: usize,
        /// Ball radius.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        r: f64,
        /// Number of mesh cells.
        #[arg(long, default_value_t = 2000)]
        mesh: usize,
        /// Mesh grading exponent (nodes cluster at the origin for > 1).
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        grading: f64,
    },

    /// Minimize the singular radial Rayleigh quotient on the ball of radius r.
    Eigen {
        /// Weight exponent α.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Ambient dimension n ≥ 2.
        #[arg(long)]
        n: usize,
        /// Ball radius.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        r: f64,
        /// Number of mesh cells.
        #[arg(long, default_value_t = 4000)]
        mesh: usize,
    },

    /// Symmetrize a grid function and report the rearrangement audit.
    Rearrange {
        /// Grid-function file (text format produced by `GridFunction::to_text`).
        #[arg(long)]
        input: PathBuf,
        /// Norm specification file (JSON); Euclidean when omitted.
        #[arg(long)]
        norm: Option<PathBuf>,
        /// Write the symmetrized grid function to this file.
        #[arg(long)]
        grid_out: Option<PathBuf>,
    },

    /// Evaluate the discrete interpolation inequality on a grid function.
    VerifyBpv {
        /// Grid-function file (text format produced by `GridFunction::to_text`).
        #[arg(long)]
        input: PathBuf,
        /// Norm specification file (JSON); Euclidean when omitted.  The
        /// norm is normalized to unit-ball volume ω_n before verification.
        #[arg(long)]
        norm: Option<PathBuf>,
        /// Weight exponent α.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Domain volume; defaults to the volume of the grid bounding box.
        #[arg(long, allow_negative_numbers = true)]
        volume: Option<f64>,
    },

    /// Classify a volume growth profile: flat or inequality-violating.
    Rigidity {
        /// Profile selector: `euclid`, `scaled:<c>`, or `table:<file>`
        /// where the file holds two-column CSV rows `rho,vol`.
        #[arg(long)]
        profile: String,
        /// Weight exponent α.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Ambient dimension n ≥ 2.
        #[arg(long)]
        n: usize,
        /// Ball radius over which the profile is audited.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        r: f64,
    },

    /// Ground state of the critical radial problem via Nehari iteration.
    Pde {
        /// Weight exponent α.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Ambient dimension n ≥ 2.
        #[arg(long)]
        n: usize,
        /// Nonlinearity exponent p ∈ (2, 2n/(n−2)).
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        /// Linear zeroth-order coefficient λ.
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        /// Number of mesh cells.
        #[arg(long, default_value_t = 2000)]
        mesh: usize,
        /// Mesh grading exponent.
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        grading: f64,
        /// Number of multistart attempts.
        #[arg(long, default_value_t = 6)]
        attempts: usize,
    },

    /// Run the deterministic invariant suite; nonzero exit on any failure.
    Selftest,
}

// ---------------------------------------------------------------------------
// Artifact plumbing
// ---------------------------------------------------------------------------

/// Columnar projection of a result, plus scalar side-channel comments.
struct Table {
    /// Scalar annotations emitted as `# key value` comment lines.
    comments: Vec<(String, String)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn scalars(pairs: Vec<(&'static str, String)>) -> Table {
        Table {
            comments: Vec::new(),
            columns: vec!["key", "value"],
            rows: pairs
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v])
                .collect(),
        }
    }

    fn profile(profile: &RadialProfile, comments: Vec<(String, String)>) -> Table {
        let rows = profile
            .nodes()
            .iter()
            .zip(profile.values())
            .map(|(&rho, &h)| vec![num(rho), num(h)])
            .collect();
        Table {
            comments,
            columns: vec!["rho", "h"],
            rows,
        }
    }
}

/// A complete run artifact: resolved configuration plus result payload.
struct Artifact {
    config: Value,
    result: Value,
    table: Table,
}

/// Shortest round-trip decimal rendering of a float.
fn num(x: f64) -> String {
    format!("{x}")
}

fn profile_json(profile: &RadialProfile) -> Value {
    json!({
        "outer_radius": profile.outer_radius(),
        "grading": profile.grading(),
        "nodes": profile.nodes(),
        "values": profile.values(),
    })
}

fn render(artifact: &Artifact, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = json!({
                "config": artifact.config,
                "result": artifact.result,
            });
            let mut text =
                serde_json::to_string_pretty(&doc).expect("JSON serialization cannot fail");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut text = String::new();
            let config =
                serde_json::to_string(&artifact.config).expect("JSON serialization cannot fail");
            text.push_str(&format!("# config {config}\n"));
            for (key, value) in &artifact.table.comments {
                text.push_str(&format!("# {key} {value}\n"));
            }
            text.push_str(&artifact.table.columns.join(","));
            text.push('\n');
            for row in &artifact.table.rows {
                text.push_str(&row.join(","));
                text.push('\n');
            }
            text
        }
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

fn read_file(path: &Path) -> bpv::Result<String> {
    fs::read_to_string(path)
        .map_err(|e| bpv::Error::domain(format!("cannot read {}: {e}", path.display())))
}

fn load_norm(path: Option<&PathBuf>, fallback_dim: usize) -> bpv::Result<NormSpec> {
    match path {
        Some(p) => serde_json::from_str(&read_file(p)?)
            .map_err(|e| bpv::Error::domain(format!("malformed norm file {}: {e}", p.display()))),
        None => NormSpec::euclidean(fallback_dim),
    }
}

fn load_grid(path: &Path) -> bpv::Result<GridFunction> {
    GridFunction::from_text(&read_file(path)?)
}

/// Parses a two-column `rho,vol` table; `#`-comments, blank lines, and an
/// optional header row are skipped.  Columns may be separated by a comma
/// or by whitespace.
fn load_profile_table(path: &Path) -> bpv::Result<Vec<(f64, f64)>> {
    let text = read_file(path)?;
    let mut samples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() != 2 {
            return Err(bpv::Error::domain(format!(
                "line {} of {}: expected two columns rho,vol",
                idx + 1,
                path.display()
            )));
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(rho), Ok(vol)) => samples.push((rho, vol)),
            _ if samples.is_empty() => continue, // header row
            _ => {
                return Err(bpv::Error::domain(format!(
                    "line {} of {}: cannot parse numbers",
                    idx + 1,
                    path.display()
                )))
            }
        }
    }
    if samples.is_empty() {
        return Err(bpv::Error::domain(format!(
            "no data rows found in {}",
            path.display()
        )));
    }
    Ok(samples)
}

fn parse_volume_profile(selector: &str, n: usize) -> bpv::Result<VolumeProfile> {
    if selector == "euclid" {
        VolumeProfile::euclidean(n)
    } else if let Some(c) = selector.strip_prefix("scaled:") {
        let c: f64 = c.parse().map_err(|_| {
            bpv::Error::domain(format!("scaled profile needs a numeric factor, got {c:?}"))
        })?;
        VolumeProfile::scaled_flat(n, c)
    } else if let Some(file) = selector.strip_prefix("table:") {
        let samples = load_profile_table(Path::new(file))?;
        VolumeProfile::tabulated(n, &samples)
    } else {
        Err(bpv::Error::domain(format!(
            "unknown profile selector {selector:?}; use euclid, scaled:<c>, or table:<file>"
        )))
    }
}

// ---------------------------------------------------------------------------
// Subcommand handlers
// ---------------------------------------------------------------------------

struct Common {
    format: Format,
    output: Option<PathBuf>,
    seed: u64,
}

fn path_json(path: &Option<PathBuf>) -> Value {
    match path {
        Some(p) => json!(p.display().to_string()),
        None => Value::Null,
    }
}

fn base_config(command: &str, common: &Common) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("command".into(), json!(command));
    map.insert("format".into(), json!(common.format.name()));
    map.insert("output".into(), path_json(&common.output));
    map.insert("seed".into(), json!(common.seed));
    map
}

fn run_bessel(common: &Common, alpha: f64, max_t: f64, samples: usize) -> bpv::Result<Artifact> {
    if !max_t.is_finite() || max_t <= 0.0 {
        return Err(bpv::Error::domain(format!(
            "max-t must be positive, got {max_t}"
        )));
    }
    if samples == 0 {
        return Err(bpv::Error::domain("samples must be at least 1"));
    }
    let mut config = base_config("bessel", common);
    config.insert("alpha".into(), json!(alpha));
    config.insert("max_t".into(), json!(max_t));
    config.insert("samples".into(), json!(samples));

    let mut rows = Vec::with_capacity(samples);
    let mut records = Vec::with_capacity(samples);
    for i in 1..=samples {
        let t = max_t * i as f64 / samples as f64;
        let (j, j_next) = bessel_j_pair(alpha, t)?;
        let j_prime = bessel_j_prime(alpha, t)?;
        records.push(json!({"t": t, "j": j, "j_next": j_next, "j_prime": j_prime}));
        rows.push(vec![num(t), num(j), num(j_next), num(j_prime)]);
    }
    Ok(Artifact {
        config: Value::Object(config),
        result: json!({ "samples": records }),
        table: Table {
            comments: Vec::new(),
            columns: vec!["t", "j", "j_next", "j_prime"],
            rows,
        },
    })
}

fn run_zeros(common: &Common, alpha: f64, count: usize) -> bpv::Result<Artifact> {
    let mut config = base_config("zeros", common);
    config.insert("alpha".into(), json!(alpha));
    config.insert("count".into(), json!(count));

    let table = ZeroTable::compute(alpha, count)?;
    let rows = (1..=count)
        .map(|k| vec![k.to_string(), num(table.zero(k))])
        .collect();
    Ok(Artifact {
        config: Value::Object(config),
        result: json!({
            "zeros": table.zeros(),
            "tolerance": table.tolerance(),
        }),
        table: Table {
            comments: Vec::new(),
            columns: vec!["k", "zero"],
            rows,
        },
    })
}

fn run_sharp_constant(common: &Common, alpha: f64, n: usize, volume: f64) -> bpv::Result<Artifact> {
    let mut config = base_config("sharp-constant", common);
    config.insert("alpha".into(), json!(alpha));
    config.insert("n".into(), json!(n));
    config.insert("volume".into(), json!(volume));

    let s = sharp_constant(alpha, n, volume)?;
    let j = first_zero(alpha)?;
    Ok(Artifact {
        config: Value::Object(config),
        result: json!({ "sharp_constant": s, "first_zero": j }),
        table: Table::scalars(vec![("sharp_constant", num(s)), ("first_zero", num(j))]),
    })
}

fn run_extremal(
    common: &Common,
    alpha: f64,
    n: usize,
    r: f64,
    mesh: usize,
    grading: f64,
) -> bpv::Result<Artifact> {
    let mut config = base_config("extremal", common);
    config.insert("alpha".into(), json!(alpha));
    config.insert("n".into(), json!(n));
    config.insert("r".into(), json!(r));
    config.insert("mesh".into(), json!(mesh));
    config.insert("grading".into(), json!(grading));

    let spec = MeshSpec::new(mesh, grading)?;
    let profile = extremal_profile(alpha, n, r, spec)?;
    let j = first_zero(alpha)?;
    let residual = euler_lagrange_residual(&profile, alpha, n, j * j / (r * r))?;
    let sup = profile.max_abs();
    Ok(Artifact {
        config: Value::Object(config),
        result: json!({
            "el_residual": residual,
            "sup_norm": sup,
            "profile": profile_json(&profile),
        }),
        table: Table::profile(
            &profile,
            vec![
                ("el_residual".into(), num(residual)),
                ("sup_norm".into(), num(sup)),
            ],
        ),
    })
}

fn run_eigen(common: &Common, alpha: f64, n: usize, r: f64, mesh: usize) -> bpv::Result<Artifact> {
    let mut config = base_config("eigen", common);
    config.insert("alpha".into(), json!(alpha));
    config.insert("n".into(), json!(n));
    config.insert("r".into(), json!(r));
    config.insert("mesh".into(), json!(mesh));

    let (mu, profile) = radial_eigen_min(alpha, n, r, mesh)?;
    let j = first_zero(alpha)?;
    let reference = j * j / (r * r);
    Ok(Artifact {
        config: Value::Object(config),
        result: json!({
            "eigenvalue": mu,
            "sharp_reference": reference,
            "relative_gap": (mu - reference) / reference,
            "profile": profile_json(&profile),
        }),
        table: Table::profile(
            &profile,
            vec![
                ("eigenvalue".into(), num(mu)),
                ("sharp_reference".into(), num(reference)),
            ],
        ),
    })
}

fn run_rearrange(
    common: &Common,
    input: &PathBuf,
    norm: &Option<PathBuf>,
    grid_out: &Option<PathBuf>,
) -> bpv::Result<Artifact> {
    let mut config = base_config("rearrange", common);
    config.insert("input".into(), json!(input.display().to_string()));
    config.insert("norm".into(), path_json(norm));
    config.insert("grid_out".into(), path_json(grid_out));

    let u = load_grid(input)?;
    let spec = load_norm(norm.as_ref(), u.dimension())?;
    let (star, report) = bpv::rearrange::rearrange_report(&u, &spec)?;
    if let Some(path) = grid_out {
        fs::write(path, star.to_text())
            .map_err(|e| bpv::Error::domain(format!("cannot write {}: {e}", path.display())))?;
    }
    let result = json!({
        "report": report,
        "cavalieri": report.cavalieri_holds(),
        "hardy_littlewood": report.hardy_littlewood_holds(),
        "polya_szego": report.polya_szego_holds(),
    });
    Ok(Artifact {
        config: Value::Object(config),
        result,
        table: Table::scalars(vec![
            ("mass_in", num(report.mass_in)),
            ("mass_out", num(report.mass_out)),
            ("hardy_in", num(report.hardy_in)),
            ("hardy_out", num(report.hardy_out)),
            ("dirichlet_in", num(report.dirichlet_in)),
            ("dirichlet_out", num(report.dirichlet_out)),
            ("slack", num(report.slack)),
            ("cavalieri", report.cavalieri_holds().to_string()),
            ("hardy_littlewood", report.hardy_littlewood_holds().to_string()),
            ("polya_szego", report.polya_szego_holds().to_string()),
        ]),
    })
}

fn run_verify_bpv(
    common: &Common,
    input: &PathBuf,
    norm: &Option<PathBuf>,
    alpha: f64,
    volume: Option<f64>,
) -> bpv::Result<Artifact> {
    let u = load_grid(input)?;
    let spec = load_norm(norm.as_ref(), u.dimension())?.normalize()?;
    let volume = volume.unwrap_or_else(|| {
        u.shape()
            .iter()
            .map(|&s| s as f64 * u.cell_width())
            .product()
    });

    let mut config = base_config("verify-bpv", common);
    config.insert("input".into(), json!(input.display().to_string()));
    config.insert("norm".into(), path_json(norm));
    config.insert("alpha".into(), json!(alpha));
    config.insert("volume".into(), json!(volume));

    let report = verify_bpv_grid(&u, &spec, alpha, volume)?;
    Ok(Artifact {
        config: Value::Object(config),
        result: json!({ "report": report, "pass": report.pass }),
        table: Table::scalars(vec![
            ("lhs", num(report.lhs)),
            ("hardy_term", num(report.hardy_term)),
            ("poincare_term", num(report.poincare_term)),
            ("margin", num(report.margin)),
            ("sharp_constant", num(report.sharp_constant)),
            ("slack", num(report.slack)),
            ("pass", report.pass.to_string()),
            ("alpha_warning", report.alpha_warning.to_string()),
            ("uniformity_estimate", num(report.uniformity_estimate)),
            ("alpha_lower_bound", num(report.alpha_lower_bound)),
        ]),
    })
}

fn run_rigidity(
    common: &Common,
    selector: &str,
    alpha: f64,
    n: usize,
    r: f64,
) -> bpv::Result<Artifact> {
    let mut config = base_config("rigidity", common);
    config.insert("profile".into(), json!(selector));
    config.insert("alpha".into(), json!(alpha));
    config.insert("n".into(), json!(n));
    config.insert("r".into(), json!(r));

    let profile = parse_volume_profile(selector, n)?;
    let report = rigidity_verdict(&profile, alpha, n, r)?;
    let analysis = analyze_h_alpha(alpha, n)?;
    let verdict = serde_json::to_value(report.verdict).expect("enum serializes");
    let verdict_text = verdict.as_str().expect("externally tagged").to_string();
    Ok(Artifact {
        config: Value::Object(config),
        result: json!({
            "report": report,
            "checks": {
                "kernel_zero_mean_residual": analysis.integral_identity_residual,
                "kernel_sign_change": analysis.t0,
            },
        }),
        table: Table::scalars(vec![
            ("functional", num(report.functional)),
            ("tolerance", num(report.tolerance)),
            ("ratio_deviation", num(report.ratio_deviation)),
            ("t0", num(report.t0)),
            ("verdict", verdict_text),
            (
                "kernel_zero_mean_residual",
                num(analysis.integral_identity_residual),
            ),
        ]),
    })
}

fn run_pde(
    common: &Common,
    alpha: f64,
    n: usize,
    p: f64,
    lambda: f64,
    mesh: usize,
    grading: f64,
    attempts: usize,
) -> bpv::Result<Artifact> {
    let mut config = base_config("pde", common);
    config.insert("alpha".into(), json!(alpha));
    config.insert("n".into(), json!(n));
    config.insert("p".into(), json!(p));
    config.insert("lambda".into(), json!(lambda));
    config.insert("mesh".into(), json!(mesh));
    config.insert("grading".into(), json!(grading));
    config.insert("attempts".into(), json!(attempts));

    let problem = PdeProblem::new(alpha, n, p, lambda)?;
    let spec = MeshSpec::new(mesh, grading)?;
    let solution = solve(&problem, spec, attempts)?;
    let sup = solution.profile.max_abs();
    Ok(Artifact {
        config: Value::Object(config),
        result: json!({
            "nonzero": solution.nonzero,
            "energy": solution.energy,
            "residual": solution.residual,
            "sup_norm": sup,
            "threshold": problem.threshold(),
            "profile": profile_json(&solution.profile),
        }),
        table: Table::profile(
            &solution.profile,
            vec![
                ("nonzero".into(), solution.nonzero.to_string()),
                ("energy".into(), num(solution.energy)),
                ("residual".into(), num(solution.residual)),
                ("threshold".into(), num(problem.threshold())),
            ],
        ),
    })
}

fn run_selftest(common: &Common) -> bpv::Result<(Artifact, u8)> {
    let config = base_config("selftest", common);
    let report = selftest::run(common.seed);
    let status = if report.failed == 0 { 0 } else { 1 };
    let rows = report
        .checks
        .iter()
        .map(|c| vec![c.name.clone(), c.passed.to_string(), c.observed.clone()])
        .collect();
    let artifact = Artifact {
        config: Value::Object(config),
        result: serde_json::to_value(&report).expect("report serializes"),
        table: Table {
            comments: vec![
                ("passed".into(), report.passed.to_string()),
                ("failed".into(), report.failed.to_string()),
            ],
            columns: vec!["check", "passed", "observed"],
            rows,
        },
    };
    Ok((artifact, status))
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn resolve_seed(flag: u64) -> bpv::Result<u64> {
    match std::env::var("BPV_SEED") {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            bpv::Error::domain(format!(
                "BPV_SEED must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(flag),
    }
}

fn dispatch(cli: &Cli, common: &Common) -> bpv::Result<(Artifact, u8)> {
    let artifact = match &cli.command {
        Command::Bessel {
            alpha,
            max_t,
            samples,
        } => run_bessel(common, *alpha, *max_t, *samples)?,
        Command::Zeros { alpha, count } => run_zeros(common, *alpha, *count)?,
        Command::SharpConstant { alpha, n, volume } => {
            run_sharp_constant(common, *alpha, *n, *volume)?
        }
        Command::Extremal {
            alpha,
            n,
            r,
            mesh,
            grading,
        } => run_extremal(common, *alpha, *n, *r, *mesh, *grading)?,
        Command::Eigen { alpha, n, r, mesh } => run_eigen(common, *alpha, *n, *r, *mesh)?,
        Command::Rearrange {
            input,
            norm,
            grid_out,
        } => run_rearrange(common, input, norm, grid_out)?,
        Command::VerifyBpv {
            input,
            norm,
            alpha,
            volume,
        } => run_verify_bpv(common, input, norm, *alpha, *volume)?,
        Command::Rigidity {
            profile,
            alpha,
            n,
            r,
        } => run_rigidity(common, profile, *alpha, *n, *r)?,
        Command::Pde {
            alpha,
            n,
            p,
            lambda,
            mesh,
            grading,
            attempts,
        } => run_pde(common, *alpha, *n, *p, *lambda, *mesh, *grading, *attempts)?,
        Command::Selftest => return run_selftest(common),
    };
    Ok((artifact, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = match resolve_seed(cli.seed) {
        Ok(seed) => seed,
        Err(e) => {
            eprintln!("bpv: error: {e}");
            return ExitCode::from(2);
        }
    };
    let common = Common {
        format: cli.format,
        output: cli.output.clone(),
        seed,
    };
    match dispatch(&cli, &common) {
        Ok((artifact, status)) => {
            let payload = render(&artifact, common.format);
            if let Some(path) = &common.output {
                if let Err(e) = fs::write(path, payload) {
                    eprintln!("bpv: error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                match out.write_all(payload.as_bytes()).and_then(|_| out.flush()) {
                    Ok(()) => {}
                    // A closed pipe (e.g. `bpv ... | head`) is not an error.
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                    Err(e) => {
                        eprintln!("bpv: error: cannot write output: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::from(status)
        }
        Err(e) => {
            eprintln!("bpv: error: {e}");
            ExitCode::from(2)
        }
    }
}
