//! Command-line front end. Every subcommand writes CSV, to `--out` or to
//! standard output; with `--out` a JSON sidecar records the tool version,
//! the resolved configuration and the column definitions.

mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::grid::build_overset;
use crate::matstab::{cell_spectrum, run_sweep, scheme_tag, verify_compression, SweepOptions};
use crate::operators::Order;
use crate::stepping::run_convergence;
use crate::symbols::{amplitude_surface, brillouin_grid, gks_check, log_grid, stability_region, SymbolConfig, Variant};

pub use config::{NumList, RunConfig, SEED_VAR};

/// Largest compression deviation `verify` accepts.
pub const VERIFY_LIMIT: f64 = 1e-11;

#[derive(Debug, Parser)]
#[command(name = "wavestab", version, about = "Modified-equation wave solvers and their stability analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count unstable grids over a (delta, gamma) sweep
    Sweep(RunConfig),
    /// Convergence study on the standing-mode solution
    Converge(RunConfig),
    /// Amplification-factor moduli over (kh, z)
    Symbol(RunConfig),
    /// Stability-region predicate over (alpha2, alpha4)
    Region(RunConfig),
    /// GKS interface probe
    Gks(RunConfig),
    /// Compare time stepping with the compressed recurrence
    Verify(RunConfig),
    /// Eigenvalues of one (delta, gamma) grid
    Modes(RunConfig),
}

impl Command {
    fn parts(self) -> (&'static str, RunConfig) {
        match self {
            Command::Sweep(r) => ("sweep", r),
            Command::Converge(r) => ("converge", r),
            Command::Symbol(r) => ("symbol", r),
            Command::Region(r) => ("region", r),
            Command::Gks(r) => ("gks", r),
            Command::Verify(r) => ("verify", r),
            Command::Modes(r) => ("modes", r),
        }
    }
}

type Columns = &'static [(&'static str, &'static str)];

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn write_sidecar(out: &Path, sub: &str, rc: &RunConfig, resolved: serde_json::Value, files: serde_json::Value) -> Result<()> {
    let doc = json!({
        "tool": "wavestab",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": sub,
        "run_config": rc,
        "resolved": resolved,
        "files": files,
    });
    std::fs::write(sidecar_path(out), serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(())
}

fn columns_json(cols: Columns) -> serde_json::Value {
    cols.iter().map(|(n, d)| json!({"name": n, "definition": d})).collect()
}

/// Writes `rows` to `--out` plus sidecar, or to standard output.
fn emit<T: Serialize>(sub: &str, rc: &RunConfig, rows: &[T], cols: Columns, resolved: serde_json::Value) -> Result<()> {
    let bytes = csv_bytes(rows)?;
    match rc.out() {
        Some(out) => {
            std::fs::write(out, &bytes)?;
            let name = out.file_name().map(|n| n.to_string_lossy().into_owned());
            write_sidecar(out, sub, rc, resolved, json!([{"file": name, "columns": columns_json(cols)}]))
        }
        None => {
            std::io::stdout().write_all(&bytes)?;
            Ok(())
        }
    }
}

const SWEEP_COLUMNS: Columns = &[
    ("scheme", "scheme tag, EMEp, IMEp or SPIEp"),
    ("p", "order of accuracy"),
    ("delta", "grid ratio h_L / h_R"),
    ("gamma", "dissipation scale, nu = gamma * nu_p"),
    ("n_u", "dissipation corrections per step"),
    ("s_f", "safety factor in nu_p"),
    ("stable", "true when no eigenvalue has |a| > 1 + tol_a"),
    ("max_modulus", "largest |a| over the spectrum"),
    ("unstable_count", "eigenvalues with |a| > 1 + tol_a"),
    ("error", "analysis failure message, empty on success"),
];

const COUNT_COLUMNS: Columns = &[
    ("gamma", "dissipation scale"),
    ("n_unstable_grids", "grids of the sweep with an eigenvalue |a| > 1 + tol_a"),
];

fn sweep(rc: &RunConfig) -> Result<()> {
    // gamma is the sweep list here, not a scheme setting
    let config = RunConfig { gamma: None, ..rc.clone() }.scheme_config()?;
    let plan = rc.sweep_plan()?;
    let opts = SweepOptions {
        n_right: rc.nr.unwrap_or(10),
        tol_a: rc.tol_a(),
        jobs: rc.jobs,
        spot_checks: 5,
        seed: rc.seed()?,
    };
    let summary = run_sweep(&plan, &config, &opts)?;
    for d in &summary.monotonicity_violations {
        eprintln!("note: delta = {d}: growth at gamma = 1 exceeds growth at gamma = 0");
    }
    let dev = summary.max_spot_deviation();
    eprintln!("compression spot checks: max deviation {dev:e} over {} cells", summary.spot_checks.len());
    let resolved = json!({"scheme": config, "plan": plan, "options": opts, "spot_checks": summary.spot_checks});
    let counts = csv_bytes(&summary.counts)?;
    match rc.out() {
        Some(out) => {
            let counts_path = out.with_file_name(format!(
                "{}_counts.csv",
                out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            ));
            std::fs::write(out, csv_bytes(&summary.results)?)?;
            std::fs::write(&counts_path, counts)?;
            let name = |p: &Path| p.file_name().map(|n| n.to_string_lossy().into_owned());
            let files = json!([
                {"file": name(out), "columns": columns_json(SWEEP_COLUMNS)},
                {"file": name(&counts_path), "columns": columns_json(COUNT_COLUMNS)},
            ]);
            write_sidecar(out, "sweep", rc, resolved, files)?;
        }
        None => std::io::stdout().write_all(&counts)?,
    }
    if !(dev <= VERIFY_LIMIT) {
        return Err(Error::ResidualTooLarge { residual: dev, limit: VERIFY_LIMIT });
    }
    Ok(())
}

fn converge(rc: &RunConfig) -> Result<()> {
    let config = rc.scheme_config()?;
    let mode = rc.mode.unwrap_or(1);
    let delta = rc.delta.unwrap_or(0.75);
    let nr = rc.nr.unwrap_or(10);
    let levels = rc.levels.unwrap_or(3);
    let t_final = rc.t_final.unwrap_or(1.0);
    if levels == 0 || !(t_final > 0.0) {
        return Err(Error::InvalidArgument("need at least one level and a positive final time".into()));
    }
    let records = run_convergence(mode, delta, nr, levels, &config, t_final)?;
    const COLS: Columns = &[
        ("level", "refinement level, N_R = nr * 2^level"),
        ("n_right", "intervals on the right grid"),
        ("n_left", "active points on the left grid"),
        ("h_left", "left grid spacing"),
        ("h_right", "right grid spacing"),
        ("dt", "time step"),
        ("steps", "number of steps"),
        ("t_final", "final time"),
        ("max_error", "max-norm error against the standing mode at t_final"),
        ("order", "log2 of the error ratio to the previous level"),
    ];
    let resolved = json!({"scheme": config, "mode": mode, "delta": delta, "nr": nr, "levels": levels, "t_final": t_final});
    emit("converge", rc, &records, COLS, resolved)
}

fn symbol_config(rc: &RunConfig, order: Order) -> Result<SymbolConfig> {
    let a2 = RunConfig::single(&rc.alpha2, "alpha2")?.unwrap_or(0.25);
    let a4 = RunConfig::single(&rc.alpha4, "alpha4")?.unwrap_or(1.0 / 12.0);
    let nu_p = rc.nu_p.unwrap_or(0.0);
    let variant = match rc.variant.as_deref().unwrap_or("plain").to_ascii_lowercase().as_str() {
        "plain" => Variant::Plain,
        "monolithic" => Variant::Monolithic { nu_p },
        "pc" => Variant::PredictorCorrector { nu_p, n_u: rc.n_u.unwrap_or(1) },
        other => return Err(Error::InvalidArgument(format!("unknown variant {other:?}; use plain, monolithic or pc"))),
    };
    if a2 < 0.0 || a4 < 0.0 || nu_p < 0.0 {
        return Err(Error::InvalidArgument("alpha2, alpha4 and nu_p must be nonnegative".into()));
    }
    Ok(SymbolConfig::ime(order, a2, a4).with_variant(variant))
}

fn symbol(rc: &RunConfig) -> Result<()> {
    let cfg = symbol_config(rc, rc.order()?)?;
    let n_theta = rc.n_theta.unwrap_or(128);
    let n_z = rc.n_z.unwrap_or(64);
    let (z_min, z_max) = (rc.z_min.unwrap_or(1e-4), rc.z_max.unwrap_or(1e4));
    if n_theta == 0 || n_z == 0 || !(z_min > 0.0 && z_min <= z_max) {
        return Err(Error::InvalidArgument("need n_theta, n_z >= 1 and 0 < z_min <= z_max".into()));
    }
    let rows = amplitude_surface(&cfg, &brillouin_grid(n_theta), &log_grid(z_min, z_max, n_z));
    const COLS: Columns = &[
        ("kh", "wavenumber times grid spacing"),
        ("z", "(c dt / h)^2"),
        ("abs_a_plus", "modulus of the first amplification root"),
        ("abs_a_minus", "modulus of the second amplification root"),
    ];
    emit("symbol", rc, &rows, COLS, json!({"symbol": cfg, "n_theta": n_theta, "n_z": n_z, "z_min": z_min, "z_max": z_max}))
}

#[derive(Serialize)]
struct RegionRow {
    p: usize,
    alpha2: f64,
    alpha4: f64,
    stable: bool,
}

fn region(rc: &RunConfig) -> Result<()> {
    let order = rc.order()?;
    let a2s = rc.alpha2.clone().map(|l| l.0).unwrap_or(vec![0.25]);
    let a4s = match order {
        Order::Two => vec![0.0],
        Order::Four => rc.alpha4.clone().map(|l| l.0).unwrap_or(vec![1.0 / 12.0]),
    };
    let rows: Vec<RegionRow> = a2s
        .iter()
        .flat_map(|&alpha2| {
            a4s.iter().map(move |&alpha4| RegionRow {
                p: order.p(),
                alpha2,
                alpha4,
                stable: stability_region(order, alpha2, alpha4),
            })
        })
        .collect();
    if rows.len() == 1 && rc.out().is_none() {
        println!("stable: {}", rows[0].stable);
        return Ok(());
    }
    const COLS: Columns = &[
        ("p", "order of accuracy"),
        ("alpha2", "implicit weight on L"),
        ("alpha4", "implicit weight on L^2 (p = 4)"),
        ("stable", "unconditional stability predicate"),
    ];
    emit("region", rc, &rows, COLS, json!({"p": order.p()}))
}

#[derive(Serialize)]
struct GksRow {
    theta: f64,
    abs_a_plus: f64,
    abs_a_minus: f64,
}

fn gks(rc: &RunConfig) -> Result<()> {
    let lambda = rc.lambda.unwrap_or(0.9);
    let alpha2 = RunConfig::single(&rc.alpha2, "alpha2")?.unwrap_or(0.0);
    let n_theta = rc.n_theta.unwrap_or(10_000);
    if !(lambda > 0.0) || alpha2 < 0.0 || n_theta == 0 {
        return Err(Error::InvalidArgument("need lambda > 0, alpha2 >= 0 and n_theta >= 1".into()));
    }
    let probe = gks_check(lambda, alpha2, n_theta);
    eprintln!(
        "precondition: {}, max ||a| - 1| = {:e}, largest decaying product = {}, interface mode: {}",
        probe.precondition_ok,
        probe.max_deviation,
        probe.max_decaying_product,
        !probe.no_interface_mode()
    );
    let rows: Vec<GksRow> = probe
        .theta
        .iter()
        .zip(&probe.root_moduli)
        .map(|(&theta, m)| GksRow {
            theta,
            abs_a_plus: m[0],
            abs_a_minus: m[1],
        })
        .collect();
    const COLS: Columns = &[
        ("theta", "spatial frequency kappa = e^{i theta}"),
        ("abs_a_plus", "modulus of the first temporal root"),
        ("abs_a_minus", "modulus of the second temporal root"),
    ];
    let resolved = json!({
        "lambda": lambda,
        "alpha2": alpha2,
        "n_theta": n_theta,
        "precondition_ok": probe.precondition_ok,
        "max_deviation": probe.max_deviation,
        "max_kappa_product_error": probe.max_kappa_product_error,
        "max_decaying_product": probe.max_decaying_product,
    });
    emit("gks", rc, &rows, COLS, resolved)
}

#[derive(Serialize)]
struct VerifyRow {
    scheme: String,
    delta: f64,
    gamma: f64,
    steps: usize,
    seed: u64,
    deviation: f64,
}

fn verify(rc: &RunConfig) -> Result<()> {
    let config = rc.scheme_config()?;
    let delta = rc.delta.unwrap_or(1.0);
    let steps = rc.steps.unwrap_or(20);
    let seed = rc.seed()?;
    let grid = build_overset(delta, rc.nr.unwrap_or(10), config.order)?;
    let deviation = verify_compression(&grid, &config, steps, seed)?;
    let row = VerifyRow {
        scheme: scheme_tag(&config),
        delta,
        gamma: config.gamma,
        steps,
        seed,
        deviation,
    };
    const COLS: Columns = &[
        ("scheme", "scheme tag"),
        ("delta", "grid ratio h_L / h_R"),
        ("gamma", "dissipation scale"),
        ("steps", "steps compared"),
        ("seed", "seed of the random initial data"),
        ("deviation", "max relative difference between stepping and recurrence"),
    ];
    emit("verify", rc, &[row], COLS, json!({"scheme": config}))?;
    if !(deviation <= VERIFY_LIMIT) {
        return Err(Error::ResidualTooLarge { residual: deviation, limit: VERIFY_LIMIT });
    }
    Ok(())
}

#[derive(Serialize)]
struct ModeRow {
    re: f64,
    im: f64,
    modulus: f64,
    unstable: bool,
}

fn modes(rc: &RunConfig) -> Result<()> {
    let config = rc.scheme_config()?;
    let delta = rc.delta.unwrap_or(1.0);
    let tol_a = rc.tol_a();
    let report = cell_spectrum(delta, config.gamma, &config, rc.nr.unwrap_or(10), tol_a)?;
    eprintln!(
        "{} eigenvalues, max |a| = {}, {} with |a| > 1 + {tol_a:e}",
        report.eigenvalues.len(),
        report.max_modulus,
        report.unstable_count
    );
    let rows: Vec<ModeRow> = report
        .eigenvalues
        .iter()
        .map(|a| ModeRow {
            re: a.re,
            im: a.im,
            modulus: a.norm(),
            unstable: a.norm() > 1.0 + tol_a,
        })
        .collect();
    const COLS: Columns = &[
        ("re", "real part of the eigenvalue a"),
        ("im", "imaginary part of a"),
        ("modulus", "|a|"),
        ("unstable", "|a| > 1 + tol_a"),
    ];
    let resolved = json!({"scheme": config, "delta": delta, "tol_a": tol_a, "max_residual": report.max_residual});
    emit("modes", rc, &rows, COLS, resolved)
}

fn run(cmd: Command) -> Result<()> {
    let (sub, rc) = cmd.parts();
    let rc = rc.resolve()?;
    match sub {
        "sweep" => sweep(&rc),
        "converge" => converge(&rc),
        "symbol" => symbol(&rc),
        "region" => region(&rc),
        "gks" => gks(&rc),
        "verify" => verify(&rc),
        _ => modes(&rc),
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code: 0 on success, 2 for invalid input, 1 for numerical failure.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(dispatch(["wavestab", "region", "--p", "4", "--alpha2", "0.25", "--alpha4", "0.0833"]), 0);
        assert_eq!(dispatch(["wavestab", "bogus"]), 2);
        assert_eq!(dispatch(["wavestab", "verify", "--scheme", "EME3"]), 2);
        assert_eq!(dispatch(["wavestab", "verify", "--scheme", "EME2", "--gamma", "1.5"]), 2);
        assert_eq!(dispatch(["wavestab", "verify", "--scheme", "EME2", "--sf", "1.5"]), 2);
    }

    #[test]
    fn sidecar_next_to_output() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("region.csv");
        let code = dispatch([
            "wavestab",
            "region",
            "--p",
            "4",
            "--alpha2",
            "0.25",
            "--alpha4",
            "0,0.02,...,0.1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let csv = std::fs::read_to_string(&out).unwrap();
        assert!(csv.starts_with("p,alpha2,alpha4,stable\n"));
        assert_eq!(csv.lines().count(), 7);
        let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("region.json")).unwrap()).unwrap();
        assert_eq!(side["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(side["files"][0]["columns"][3]["name"], "stable");
    }
}
