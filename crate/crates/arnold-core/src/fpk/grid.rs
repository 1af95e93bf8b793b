use crate::algebra::InvariantMeasure;
use crate::error::{Error, Result};
use crate::util::kahan_sum;

/// Uniform cell-centered rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    mins: Vec<f64>,
    maxs: Vec<f64>,
    counts: Vec<usize>,
    spacing: Vec<f64>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    /// Axes given as (min, max, cells); each axis needs at least 8 cells.
    pub fn new(axes: &[(f64, f64, usize)]) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidArgument("grid needs at least one axis".into()));
        }
        let mut mins = Vec::new();
        let mut maxs = Vec::new();
        let mut counts = Vec::new();
        for &(lo, hi, n) in axes {
            if !(lo < hi) {
                return Err(Error::InvalidArgument(format!(
                    "grid axis [{lo}, {hi}] is empty"
                )));
            }
            if n < 8 {
                return Err(Error::InvalidArgument(
                    "grid needs at least 8 cells per axis".into(),
                ));
            }
            mins.push(lo);
            maxs.push(hi);
            counts.push(n);
        }
        let spacing: Vec<f64> = mins
            .iter()
            .zip(&maxs)
            .zip(&counts)
            .map(|((lo, hi), n)| (hi - lo) / *n as f64)
            .collect();
        // Row-major: the last axis is contiguous.
        let ndim = counts.len();
        let mut strides = vec![0usize; ndim];
        let mut acc = 1usize;
        for a in (0..ndim).rev() {
            strides[a] = acc;
            acc *= counts[a];
        }
        Ok(Self {
            mins,
            maxs,
            counts,
            spacing,
            strides,
            len: acc,
        })
    }

    pub fn ndim(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn counts(&self) -> &[usize] {
        self.counts.as_slice()
    }

    pub fn mins(&self) -> &[f64] {
        &self.mins
    }

    pub fn maxs(&self) -> &[f64] {
        &self.maxs
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.spacing[axis]
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Center coordinate of cell i along one axis.
    pub fn center(&self, axis: usize, i: usize) -> f64 {
        self.mins[axis] + (i as f64 + 0.5) * self.spacing[axis]
    }

    /// Face coordinate k (k = 0..=counts) along one axis.
    pub fn face(&self, axis: usize, k: usize) -> f64 {
        self.mins[axis] + k as f64 * self.spacing[axis]
    }

    pub fn index_of(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.strides)
            .map(|(i, s)| i * s)
            .sum()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.ndim()];
        for a in 0..self.ndim() {
            out[a] = flat / self.strides[a];
            flat %= self.strides[a];
        }
        out
    }

    /// Cell-center coordinates of a flat index.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| self.center(a, i))
            .collect()
    }
}

/// Probability density P relative to the measure mu dv, sampled at cell
/// centers, with mu precomputed.
#[derive(Debug, Clone)]
pub struct DensityField {
    pub grid: Grid,
    pub p: Vec<f64>,
    mu: Vec<f64>,
}

impl DensityField {
    pub fn new(grid: Grid, measure: &InvariantMeasure, p: Vec<f64>) -> Result<Self> {
        if p.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: p.len(),
            });
        }
        // The measure must be regular on the closed grid box.
        for corner in [grid.mins().to_vec(), grid.maxs().to_vec()] {
            if !measure.is_regular_at(&corner) {
                return Err(Error::MeasureSingular(corner));
            }
        }
        let mu: Vec<f64> = (0..grid.len())
            .map(|i| measure.eval(&grid.point(i)))
            .collect();
        if let Some(i) = mu.iter().position(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(Error::MeasureSingular(grid.point(i)));
        }
        Ok(Self { grid, p, mu })
    }

    /// Constant P (uniform relative to mu dv).
    pub fn uniform(grid: Grid, measure: &InvariantMeasure) -> Result<Self> {
        let p = vec![1.0; grid.len()];
        let mut field = Self::new(grid, measure, p)?;
        field.normalize();
        Ok(field)
    }

    /// Isotropic Gaussian bump in the dv-density, converted to a mu-relative P.
    pub fn gaussian(
        grid: Grid,
        measure: &InvariantMeasure,
        center: &[f64],
        sigma: f64,
    ) -> Result<Self> {
        if center.len() != grid.ndim() {
            return Err(Error::DimensionMismatch {
                expected: grid.ndim(),
                got: center.len(),
            });
        }
        let p: Vec<f64> = (0..grid.len())
            .map(|i| {
                let x = grid.point(i);
                let r2: f64 = x
                    .iter()
                    .zip(center)
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum();
                (-0.5 * r2 / (sigma * sigma)).exp() / measure.eval(&x)
            })
            .collect();
        let mut field = Self::new(grid, measure, p)?;
        field.normalize();
        Ok(field)
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Total mass int mu P dv (compensated, fixed-order).
    pub fn mass(&self) -> f64 {
        let vol = self.grid.cell_volume();
        kahan_sum(self.p.iter().zip(&self.mu).map(|(p, m)| p * m)) * vol
    }

    pub fn normalize(&mut self) {
        let m = self.mass();
        if m > 0.0 {
            for p in &mut self.p {
                *p /= m;
            }
        }
    }

    /// The dv-density mu * P.
    pub fn dv_density(&self) -> Vec<f64> {
        self.p.iter().zip(&self.mu).map(|(p, m)| p * m).collect()
    }

    /// L1 distance between the dv-densities of two fields on the same grid.
    pub fn l1_distance(&self, other: &DensityField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument(
                "fields live on different grids".into(),
            ));
        }
        let vol = self.grid.cell_volume();
        Ok(kahan_sum(
            self.p
                .iter()
                .zip(&self.mu)
                .zip(other.p.iter().zip(&other.mu))
                .map(|((p, m), (q, mq))| (p * m - q * mq).abs()),
        ) * vol)
    }

    /// Marginal of the dv-density along one axis (integrating the others out).
    pub fn marginal(&self, axis: usize) -> Vec<f64> {
        let n = self.grid.counts()[axis];
        let mut out = vec![0.0; n];
        let weight = self.grid.cell_volume() / self.grid.spacing(axis);
        for (i, (p, m)) in self.p.iter().zip(&self.mu).enumerate() {
            let k = (i / self.grid.stride(axis)) % n;
            out[k] += p * m * weight;
        }
        out
    }
}
