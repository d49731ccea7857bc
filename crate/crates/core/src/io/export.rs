//! Deterministic mesh and phase-table writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::TriangleMesh;
use crate::sweep::{PhaseRecord, SweepAxis};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Obj,
    Ply,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Obj => "obj",
            Format::Ply => "ply",
            Format::Csv => "csv",
        }
    }

    pub fn is_mesh(self) -> bool {
        matches!(self, Format::Obj | Format::Ply)
    }
}

/// Formats a float with 9 significant digits the way C's `%.9g` does.
/// Negative zero prints as `0`.
pub fn format_g9(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_obj<W: Write>(mesh: &TriangleMesh<f64>, mut w: W) -> std::io::Result<()> {
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", format_g9(v.x), format_g9(v.y), format_g9(v.z))?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    w.flush()
}

pub fn write_ply<W: Write>(mesh: &TriangleMesh<f64>, mut w: W) -> std::io::Result<()> {
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "element vertex {}", mesh.vertices.len())?;
    for axis in ["x", "y", "z"] {
        writeln!(w, "property double {axis}")?;
    }
    writeln!(w, "element face {}", mesh.triangles.len())?;
    writeln!(w, "property list uchar int vertex_indices")?;
    writeln!(w, "end_header")?;
    for v in &mesh.vertices {
        writeln!(w, "{} {} {}", format_g9(v.x), format_g9(v.y), format_g9(v.z))?;
    }
    for t in &mesh.triangles {
        writeln!(w, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    w.flush()
}

/// Writes a mesh to `path` in OBJ or PLY.
pub fn export_mesh(mesh: &TriangleMesh<f64>, format: Format, path: &Path) -> Result<(), ExportError> {
    let io = |source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = BufWriter::new(File::create(path).map_err(io)?);
    match format {
        Format::Obj => write_obj(mesh, file),
        Format::Ply => write_ply(mesh, file),
        Format::Csv => Err(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            "CSV is a table format, not a mesh format",
        )),
    }
    .map_err(io)
}

/// Streaming CSV writer for sweep records: grid indices, swept parameters, outputs.
pub struct PhaseCsvWriter<W: Write> {
    inner: csv::Writer<W>,
}

const OUTPUT_COLUMNS: [&str; 15] = [
    "kappa1",
    "kappa2",
    "phi",
    "alpha",
    "beta",
    "tau",
    "gauss_curvature",
    "class",
    "chirality",
    "radius",
    "pitch",
    "helix_angle",
    "tubule",
    "min_gap",
    "degenerate",
];

impl<W: Write> PhaseCsvWriter<W> {
    pub fn new(writer: W, axes: &[SweepAxis]) -> csv::Result<Self> {
        let mut inner = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = axes.iter().map(|a| format!("i_{}", a.name.as_str())).collect();
        header.extend(axes.iter().map(|a| a.name.as_str().to_string()));
        header.extend(OUTPUT_COLUMNS.iter().map(|s| s.to_string()));
        inner.write_record(&header)?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, r: &PhaseRecord) -> csv::Result<()> {
        let d = &r.descriptors;
        let mut row: Vec<String> = r.index.iter().map(|i| i.to_string()).collect();
        row.extend(r.values.iter().map(|&v| format_g9(v)));
        row.extend(
            [r.state.kappa1, r.state.kappa2, r.state.phi, d.alpha, d.beta, d.tau, r.gauss_curvature]
                .map(format_g9),
        );
        row.push(r.class.as_str().to_string());
        row.push(d.chirality.to_string());
        row.extend([d.radius, d.pitch, d.helix_angle].map(format_g9));
        row.push(r.tubule.map(|t| t.to_string()).unwrap_or_default());
        row.push(r.min_gap.map(format_g9).unwrap_or_default());
        row.push(r.degenerate.to_string());
        self.inner.write_record(&row)
    }

    pub fn finish(mut self) -> csv::Result<W> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| e.into_error().into())
    }
}
