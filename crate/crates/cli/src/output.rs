//! Delimited text tables, frame files and the checksummed manifest.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use ewave_core::analytic::MomentumGrid;
use ewave_core::scenarios::{FelRow, ScanRow};
use ewave_core::solver::EvolutionReport;
use ewave_core::units::PhysicalConstants;

use crate::config::{RunConfig, SCHEMA_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FileEntry {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    code_version: &'a str,
    momentum_units: &'a str,
    summary: &'a toml::Table,
    config: &'a RunConfig,
    files: &'a [FileEntry],
}

/// Momentum axis convention of emitted files.
#[derive(Clone, Copy, Debug)]
pub struct Axis {
    pub p_rec0: f64,
    pub si: bool,
}

impl Axis {
    pub fn label(&self) -> &'static str {
        if self.si {
            "kg m/s"
        } else {
            "hbar omega / v0"
        }
    }

    /// Offset from `p0` in output units.
    pub fn momentum(&self, p: f64) -> f64 {
        if self.si {
            PhysicalConstants::<f64>::codata2018().momentum_to_si(p)
        } else {
            p / self.p_rec0
        }
    }

    /// Density per output momentum unit.
    pub fn density(&self, rho: f64) -> f64 {
        if self.si {
            rho / PhysicalConstants::<f64>::codata2018().momentum_unit()
        } else {
            rho * self.p_rec0
        }
    }
}

/// Writes files below one directory and records their checksums in order.
pub struct Writer {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl Writer {
    pub fn new(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    pub fn write(&mut self, role: &str, rel: &str, contents: &str) -> io::Result<()> {
        let path = self.dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, contents)?;
        let sha256 = format!("{:x}", Sha256::digest(contents.as_bytes()));
        self.files.push(FileEntry {
            role: role.to_string(),
            path: rel.to_string(),
            sha256,
        });
        Ok(())
    }

    /// Writes `manifest.toml` listing every file written so far.
    pub fn finish(
        self,
        config: &RunConfig,
        axis: Axis,
        summary: &toml::Table,
    ) -> io::Result<PathBuf> {
        let m = Manifest {
            schema_version: SCHEMA_VERSION,
            code_version: env!("CARGO_PKG_VERSION"),
            momentum_units: axis.label(),
            summary,
            config,
            files: &self.files,
        };
        let text = toml::to_string(&m).map_err(io::Error::other)?;
        let path = self.dir.join("manifest.toml");
        fs::write(&path, text)?;
        Ok(path)
    }
}

/// Two-column spectrum restricted to `|p - p0| <= half_width`.
pub fn spectrum_table(
    grid: &MomentumGrid<f64>,
    density: &[f64],
    axis: Axis,
    half_width: f64,
) -> String {
    let mut s = format!("p [{}],density\n", axis.label());
    for (&x, &r) in grid.offsets().iter().zip(density) {
        if x.abs() <= half_width {
            let _ = writeln!(s, "{:e},{:e}", axis.momentum(x), axis.density(r));
        }
    }
    s
}

pub const SCAN_HEADER: &str = "Gamma,dp_numeric,dp_analytic,dp_point,ratio,model_ratio,infeasible";

pub fn scan_table(rows: &[ScanRow<f64>], axis: Axis) -> String {
    let mut s = format!("{SCAN_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{:e},{:e},{:e},{:e},{:e},{:e},{}",
            r.sweep_value,
            axis.momentum(r.dp_numeric),
            axis.momentum(r.dp_analytic),
            axis.momentum(r.dp_point),
            r.ratio,
            r.model_ratio,
            r.infeasible
        );
    }
    s
}

pub const FEL_HEADER: &str = "epsilon,theta_bar,dp2,gain";

pub fn fel_table(rows: &[FelRow<f64>], axis: Axis) -> String {
    let mut s = format!("{FEL_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{:e},{:e},{:e},{:e}",
            r.epsilon,
            r.theta_bar,
            axis.momentum(r.dp2),
            axis.momentum(r.gain)
        );
    }
    s
}

/// Spatial frames are cut to where the density exceeds this fraction of its peak.
pub const SUPPORT_FLOOR: f64 = 1e-12;

/// Writes one spatial and one momentum file per snapshot plus an index.
pub fn write_snapshots(
    w: &mut Writer,
    report: &EvolutionReport<f64>,
    axis: Axis,
    half_width: f64,
) -> io::Result<usize> {
    let k = PhysicalConstants::<f64>::codata2018();
    let (xi0, dxi) = report.spatial_axis;
    let mut index = String::from("frame,t [s],frame_origin [m]\n");
    for (i, snap) in report.snapshots.iter().enumerate() {
        let _ = writeln!(
            index,
            "{i},{:e},{:e}",
            k.time_to_si(snap.t),
            k.length_to_si(snap.frame_origin)
        );
        let mut space = String::from("z [m],density [1/m]\n");
        let floor = snap.spatial.iter().cloned().fold(0.0, f64::max) * SUPPORT_FLOOR;
        let lo = snap.spatial.iter().position(|&r| r > floor).unwrap_or(0);
        let hi = snap
            .spatial
            .iter()
            .rposition(|&r| r > floor)
            .map_or(0, |i| i + 1);
        for (j, &r) in snap.spatial.iter().enumerate().take(hi).skip(lo) {
            let z = snap.frame_origin + xi0 + dxi * j as f64;
            let _ = writeln!(space, "{:e},{:e}", k.length_to_si(z), r / k.length_unit());
        }
        w.write(
            "snapshot_space",
            &format!("snapshots/frame_{i:05}_space.csv"),
            &space,
        )?;
        let mom = spectrum_table(&report.momentum_grid, &snap.momentum, axis, half_width);
        w.write(
            "snapshot_momentum",
            &format!("snapshots/frame_{i:05}_momentum.csv"),
            &mom,
        )?;
    }
    w.write("snapshot_index", "snapshots/index.csv", &index)?;
    Ok(report.snapshots.len())
}
