//! Output plumbing: metadata headers, 17-significant-digit CSV writing, and
//! the field CSV reader used for FPK restarts.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use arnold_core::fpk::{DensityField, Grid};
use arnold_core::InvariantMeasure;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Format with 17 significant digits for round-trip fidelity.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn num_list(xs: impl IntoIterator<Item = f64>) -> String {
    xs.into_iter().map(num).collect::<Vec<_>>().join(",")
}

/// A report/CSV document with a `#`-prefixed metadata header. The data
/// section is byte-identical across reruns with the same inputs: headers
/// carry no timestamps.
pub struct Document {
    header: String,
    body: String,
}

impl Document {
    pub fn new(command: &str, model: &str) -> Self {
        let mut header = String::new();
        let _ = writeln!(header, "# arnold {VERSION}");
        let _ = writeln!(header, "# command = {command}");
        let _ = writeln!(header, "# model = {model}");
        Self {
            header,
            body: String::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.header, "# {key} = {value}");
        self
    }

    pub fn line(&mut self, text: impl AsRef<str>) -> &mut Self {
        self.body.push_str(text.as_ref());
        self.body.push('\n');
        self
    }

    pub fn row(&mut self, values: impl IntoIterator<Item = f64>) -> &mut Self {
        let text = num_list(values);
        self.line(text)
    }

    pub fn render(&self) -> String {
        format!("{}{}", self.header, self.body)
    }

    /// Write to the path, or to stdout when no path is given.
    pub fn emit(&self, out: Option<&PathBuf>) -> Result<()> {
        match out {
            Some(path) => {
                let mut f = File::create(path)
                    .with_context(|| format!("cannot create {}", path.display()))?;
                f.write_all(self.render().as_bytes())?;
                Ok(())
            }
            None => {
                std::io::stdout().write_all(self.render().as_bytes())?;
                Ok(())
            }
        }
    }
}

/// Key=value summary block, printed to stdout (or stderr when the CSV itself
/// goes to stdout).
#[derive(Default)]
pub struct Summary {
    lines: Vec<String>,
}

impl Summary {
    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.lines.push(format!("{key} = {value}"));
        self
    }

    pub fn emit(&self, csv_went_to_stdout: bool) {
        for line in &self.lines {
            if csv_went_to_stdout {
                eprintln!("{line}");
            } else {
                println!("{line}");
            }
        }
    }
}

/// Read a cell-centered field CSV (`v0,...,v{n-1},P,muP`) back onto a grid.
/// The coordinates must match the grid's cell centers.
pub fn read_field_csv(path: &Path, grid: Grid, measure: &InvariantMeasure) -> Result<DensityField> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let ndim = grid.ndim();
    let mut p = vec![f64::NAN; grid.len()];
    let mut seen = 0usize;
    for line in BufReader::new(file).lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('v') {
            continue;
        }
        let cols: Vec<f64> = t
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("bad row: {t}"))?;
        if cols.len() < ndim + 1 {
            bail!("field row has {} columns, need at least {}", cols.len(), ndim + 1);
        }
        let mut idx = Vec::with_capacity(ndim);
        for (a, coord) in cols.iter().take(ndim).enumerate() {
            let h = grid.spacing(a);
            let rel = (coord - grid.mins()[a]) / h - 0.5;
            let i = rel.round();
            if (rel - i).abs() > 1e-6 || i < 0.0 || i as usize >= grid.counts()[a] {
                bail!("coordinate {coord} is not a cell center of the requested grid");
            }
            idx.push(i as usize);
        }
        p[grid.index_of(&idx)] = cols[ndim];
        seen += 1;
    }
    if seen != grid.len() {
        bail!("field file covers {seen} cells, grid has {}", grid.len());
    }
    Ok(DensityField::new(grid, measure, p)?)
}

/// Parse a comma-separated float list.
pub fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number `{t}`"))
        })
        .collect()
}

/// Parse a grid spec `min:max:cells[,min:max:cells...]`.
pub fn parse_grid_spec(text: &str) -> Result<Vec<(f64, f64, usize)>> {
    text.split(',')
        .map(|axis| {
            let parts: Vec<&str> = axis.trim().split(':').collect();
            if parts.len() != 3 {
                bail!("grid axis `{axis}` is not min:max:cells");
            }
            Ok((
                parts[0].parse::<f64>().context("grid min")?,
                parts[1].parse::<f64>().context("grid max")?,
                parts[2].parse::<usize>().context("grid cells")?,
            ))
        })
        .collect()
}

/// Parse `r=1,h=0.5,m=2`.
pub fn parse_cylinder(text: &str) -> Result<(f64, f64, f64)> {
    let (mut r, mut h, mut m) = (None, None, None);
    for part in text.split(',') {
        let Some((key, value)) = part.split_once('=') else {
            bail!("cylinder part `{part}` is not key=value");
        };
        let value: f64 = value.trim().parse().context("cylinder value")?;
        match key.trim() {
            "r" => r = Some(value),
            "h" => h = Some(value),
            "m" => m = Some(value),
            other => bail!("unknown cylinder key `{other}`"),
        }
    }
    match (r, h, m) {
        (Some(r), Some(h), Some(m)) => Ok((r, h, m)),
        _ => bail!("cylinder needs r=, h= and m="),
    }
}

/// Parse a guess list `w0,w1;w0,w1;...`.
pub fn parse_guesses(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(parse_floats)
        .collect()
}
