//! CSV writers. Reruns with identical config and seed must produce
//! byte-identical files, so everything here is formatted deterministically
//! and no timestamps are written.

use std::io::Write;
use std::path::Path;

use srechain::criticality::{ScalingFit, SweepResult};

use crate::config::ResolvedConfig;

fn write_header(
    out: &mut impl Write,
    s: &SweepResult,
    cfg: &ResolvedConfig,
) -> std::io::Result<()> {
    writeln!(out, "# model,n_sites,observable,control")?;
    writeln!(
        out,
        "# {},{},{},{}",
        s.model, s.n_sites, s.observable, s.control
    )?;
    for line in cfg.comment_lines() {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

/// Write one sweep as `x,y` rows under the comment header.
pub fn write_sweep_csv(
    path: &Path,
    s: &SweepResult,
    cfg: &ResolvedConfig,
) -> std::io::Result<()> {
    let mut buf = Vec::new();
    write_header(&mut buf, s, cfg)?;
    for (x, y) in s.points() {
        writeln!(buf, "{},{}", fmt(x), fmt(y))?;
    }
    std::fs::write(path, buf)
}

/// Scaling fit: `N,C_N` rows plus a `c_star,slope,r2` footer.
pub fn write_fss_csv(
    path: &Path,
    fit: &ScalingFit,
    cfg: &ResolvedConfig,
) -> std::io::Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "# model,n_sites,observable,control")?;
    writeln!(buf, "# {},fss,{},{}", cfg.model, cfg.measure, cfg.sites)?;
    for line in cfg.comment_lines() {
        writeln!(buf, "# {line}")?;
    }
    writeln!(buf, "# N,C_N")?;
    for (n, c) in fit.sizes.iter().zip(&fit.finite_size_points) {
        writeln!(buf, "{},{}", n, fmt(*c))?;
    }
    writeln!(
        buf,
        "c_star,slope,r2 = {},{},{}",
        fmt(fit.c_star),
        fmt(fit.slope),
        fmt(fit.r_squared)
    )?;
    std::fs::write(path, buf)
}

/// Derivative-file path: `foo.csv` -> `foo.deriv.csv`.
pub fn deriv_path(path: &Path) -> std::path::PathBuf {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => path.with_extension("deriv.csv"),
        _ => {
            let mut p = path.as_os_str().to_owned();
            p.push(".deriv.csv");
            std::path::PathBuf::from(p)
        }
    }
}

/// Plot-file path: `foo.csv` -> `foo.svg`.
pub fn svg_path(path: &Path) -> std::path::PathBuf {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => path.with_extension("svg"),
        _ => {
            let mut p = path.as_os_str().to_owned();
            p.push(".svg");
            std::path::PathBuf::from(p)
        }
    }
}

/// 17 significant digits round-trips f64 exactly and deterministically.
pub fn fmt(x: f64) -> String {
    format!("{x:.17e}")
}
