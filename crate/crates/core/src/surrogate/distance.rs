use serde::{Deserialize, Serialize};

use super::characterization::{Characterization, GenoVector, PhenoVector};
use crate::error::{param, Error, Result};
use crate::par;

/// Euclidean distance between phenotypic characterizations.
pub fn pd(a: &PhenoVector, b: &PhenoVector) -> Result<f64> {
    if a.0.len() != b.0.len() {
        return Err(Error::Contract(format!(
            "phenotypic vectors differ in length ({} vs {})",
            a.0.len(),
            b.0.len()
        )));
    }
    Ok(pd_unchecked(a, b))
}

#[inline]
fn pd_unchecked(a: &PhenoVector, b: &PhenoVector) -> f64 {
    a.0.iter()
        .zip(&b.0)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Euclidean distance between genotypic characterizations. At most √2 since
/// both lie on the unit simplex.
#[inline]
pub fn gd(a: &GenoVector, b: &GenoVector) -> f64 {
    a.0.iter()
        .zip(&b.0)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PguConfig {
    pub wp: f64,
    pub wg: f64,
    /// Clustering and eviction threshold.
    pub delta: f64,
}

impl Default for PguConfig {
    fn default() -> Self {
        Self {
            wp: 0.5,
            wg: 0.5,
            delta: 0.1,
        }
    }
}

impl PguConfig {
    pub fn new(wp: f64, delta: f64) -> Result<Self> {
        let cfg = Self { wp, wg: 1.0 - wp, delta };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.wp) || !(0.0..=1.0).contains(&self.wg) {
            return Err(param("wp", "weights must lie in [0, 1]"));
        }
        if (self.wp + self.wg - 1.0).abs() > 1e-9 {
            return Err(param("wg", format!("wp + wg = {} != 1", self.wp + self.wg)));
        }
        if !(self.delta >= 0.0) {
            return Err(param("delta", "must be non-negative"));
        }
        Ok(())
    }
}

/// Maximum pairwise PD and GD over a reference set; divisors of the
/// unified distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizers {
    pub max_pd: f64,
    pub max_gd: f64,
}

impl Normalizers {
    /// Leaves both distances unscaled.
    pub const IDENTITY: Normalizers = Normalizers { max_pd: 1.0, max_gd: 1.0 };

    /// Maxima over all pairs drawn from `points`.
    pub fn over(points: &[&Characterization]) -> Result<Self> {
        if let Some(first) = points.first() {
            let len = first.pc.0.len();
            if let Some(bad) = points.iter().find(|p| p.pc.0.len() != len) {
                return Err(Error::Contract(format!(
                    "phenotypic vectors differ in length ({len} vs {})",
                    bad.pc.0.len()
                )));
            }
        }
        let rows = par::map_indices(points.len(), |i| {
            let mut m = (0.0f64, 0.0f64);
            for j in i + 1..points.len() {
                m.0 = m.0.max(pd_unchecked(&points[i].pc, &points[j].pc));
                m.1 = m.1.max(gd(&points[i].gc, &points[j].gc));
            }
            m
        });
        let (max_pd, max_gd) = rows
            .into_iter()
            .fold((0.0f64, 0.0f64), |a, b| (a.0.max(b.0), a.1.max(b.1)));
        Ok(Self { max_pd, max_gd })
    }
}

#[inline]
fn scaled(d: f64, max: f64) -> f64 {
    if max > 0.0 {
        d / max
    } else {
        0.0
    }
}

/// Unified distance `wp·PD/max(PD) + wg·GD/max(GD)`; a zero maximum zeroes
/// its term.
pub fn pgu(a: &Characterization, b: &Characterization, cfg: &PguConfig, norm: &Normalizers) -> Result<f64> {
    let p = pd(&a.pc, &b.pc)?;
    Ok(pgu_from_parts(p, gd(&a.gc, &b.gc), cfg, norm))
}

#[inline]
pub(crate) fn pgu_unchecked(a: &Characterization, b: &Characterization, cfg: &PguConfig, norm: &Normalizers) -> f64 {
    pgu_from_parts(pd_unchecked(&a.pc, &b.pc), gd(&a.gc, &b.gc), cfg, norm)
}

#[inline]
fn pgu_from_parts(pd: f64, gd: f64, cfg: &PguConfig, norm: &Normalizers) -> f64 {
    cfg.wp * scaled(pd, norm.max_pd) + cfg.wg * scaled(gd, norm.max_gd)
}

/// Dense symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = f(i, j);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Self { n, data }
    }

    /// Builds from a full row-major matrix, which must be square, symmetric
    /// and zero on the diagonal.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Contract("distance matrix is not square".into()));
            }
            data.extend_from_slice(r);
        }
        let m = Self { n, data };
        for i in 0..n {
            if m.get(i, i) != 0.0 {
                return Err(Error::Contract(format!("non-zero diagonal at {i}")));
            }
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::Contract(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// PGU matrix with normalizers taken from the same list.
pub fn pgu_matrix(points: &[&Characterization], cfg: &PguConfig) -> Result<DistanceMatrix> {
    let norm = Normalizers::over(points)?;
    Ok(pgu_matrix_with(points, cfg, &norm))
}

/// PGU matrix under externally supplied normalizers. Rows are computed in
/// parallel.
pub fn pgu_matrix_with(points: &[&Characterization], cfg: &PguConfig, norm: &Normalizers) -> DistanceMatrix {
    let n = points.len();
    let rows = par::map_indices(n, |i| {
        (0..n)
            .map(|j| if i == j { 0.0 } else { pgu_unchecked(points[i], points[j], cfg, norm) })
            .collect::<Vec<f64>>()
    });
    let mut data = Vec::with_capacity(n * n);
    for (i, r) in rows.iter().enumerate() {
        for (j, &d) in r.iter().enumerate() {
            // pin exact symmetry regardless of evaluation order
            data.push(if j < i { rows[j][i] } else { d });
        }
    }
    DistanceMatrix { n, data }
}
