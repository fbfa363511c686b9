//! Graph comparison machinery: two-sample KS statistic, portrait divergence,
//! Laplacian spectrum distance, and the NetLSD heat-trace distance.
//!
//! Spectral quantities use the unweighted combinatorial Laplacian `L = D - A`
//! so that weight and topology effects stay separate (backbones keep their
//! parent weights). Portraits are hop-based and computed per connected
//! component, so every distance here is defined on the disconnected graphs
//! that backbones routinely are.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Supremum gap between the empirical CDFs of two samples, in [0, 1].
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidGraph(
            "ks_statistic requires two non-empty samples".to_owned(),
        ));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).expect("finite samples"));
    ys.sort_by(|p, q| p.partial_cmp(q).expect("finite samples"));
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < xs.len() || j < ys.len() {
        let v = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(sup)
}

/// Network portrait: `rows[l][k]` counts the nodes that see exactly `k`
/// other nodes at hop distance `l`. Row 0 is concentrated at `k = 1` (every
/// node sees itself) and each row sums to the node count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portrait {
    rows: Vec<Vec<u64>>,
}

impl Portrait {
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

/// Build the portrait via all-pairs BFS (per connected component; unreachable
/// pairs contribute to the `k = 0` column).
pub fn portrait(g: &Graph) -> Portrait {
    let n = g.node_count();
    assert!(n > 0, "portrait of an empty graph is undefined");
    // Per-source histogram: how many nodes sit at each distance.
    let histograms: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|source| {
            let dist = g.bfs_distances(source);
            let mut hist: Vec<u64> = Vec::new();
            for (target, &d) in dist.iter().enumerate() {
                if target == source || d == u32::MAX {
                    continue;
                }
                let d = d as usize;
                if hist.len() <= d {
                    hist.resize(d + 1, 0);
                }
                hist[d] += 1;
            }
            hist
        })
        .collect();

    let max_ell = histograms.iter().map(Vec::len).max().unwrap_or(1).max(1);
    let columns = n.max(2); // k ranges over 0..=V-1, plus k = 1 when V = 1
    let mut rows = vec![vec![0u64; columns]; max_ell];
    rows[0][1] = n as u64;
    for hist in &histograms {
        for (ell, row) in rows.iter_mut().enumerate().skip(1) {
            let k = hist.get(ell).copied().unwrap_or(0) as usize;
            row[k] += 1;
        }
    }
    Portrait { rows }
}

/// Jensen-Shannon divergence (base-2 logarithm) between the two portraits'
/// joint (l, k) distributions weighted by k; symmetric and in [0, 1].
pub fn portrait_divergence(g1: &Graph, g2: &Graph) -> f64 {
    let b1 = portrait(g1);
    let b2 = portrait(g2);
    let rows = b1.row_count().max(b2.row_count());
    let cols = b1.column_count().max(b2.column_count());

    let joint = |b: &Portrait| -> Vec<f64> {
        let mut p = vec![0.0f64; rows * cols];
        for (ell, row) in b.rows().iter().enumerate() {
            for (k, &count) in row.iter().enumerate() {
                p[ell * cols + k] = k as f64 * count as f64;
            }
        }
        let total: f64 = p.iter().sum();
        for value in &mut p {
            *value /= total;
        }
        p
    };
    let p = joint(&b1);
    let q = joint(&b2);

    let kl_to_mixture = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b.iter())
            .filter(|(&ai, _)| ai > 0.0)
            .map(|(&ai, &bi)| ai * (2.0 * ai / (ai + bi)).log2())
            .sum()
    };
    let jsd = 0.5 * kl_to_mixture(&p, &q) + 0.5 * kl_to_mixture(&q, &p);
    jsd.clamp(0.0, 1.0)
}

/// Eigenvalues of the unweighted Laplacian `L = D - A`, non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Count of near-zero eigenvalues; equals the number of connected
    /// components for a valid spectrum.
    pub fn zero_multiplicity(&self) -> usize {
        let tol = self.zero_tolerance();
        self.eigenvalues.iter().filter(|l| l.abs() <= tol).count()
    }

    /// Smallest eigenvalue above the zero tolerance (the spectral gap for a
    /// connected graph), if any.
    pub fn smallest_positive(&self) -> Option<f64> {
        let tol = self.zero_tolerance();
        self.eigenvalues.iter().copied().find(|l| *l > tol)
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    fn zero_tolerance(&self) -> f64 {
        let max = self.eigenvalues.last().copied().unwrap_or(0.0);
        1e-8 * max.max(1.0)
    }
}

/// Dense symmetric eigensolve of the unweighted Laplacian, with the spectrum
/// invariants (zero multiplicity = component count, trace = 2E) verified on
/// every result.
pub fn laplacian_spectrum(g: &Graph) -> Result<Spectrum> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph(g.name().to_owned()));
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = g.degree(i) as f64;
    }
    for e in g.edges() {
        m[(e.u, e.v)] = -1.0;
        m[(e.v, e.u)] = -1.0;
    }
    let eigen = m
        .try_symmetric_eigen(1e-12, 100_000)
        .ok_or_else(|| Error::Numerical {
            graph: g.name().to_owned(),
            message: "symmetric eigensolve did not converge".to_owned(),
        })?;
    let mut eigenvalues: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("real symmetric spectrum"));
    let spectrum = Spectrum { eigenvalues };

    let trace_expected = 2.0 * g.edge_count() as f64;
    let trace = spectrum.trace();
    if (trace - trace_expected).abs() > 1e-6 * trace_expected.max(1.0) {
        return Err(Error::Numerical {
            graph: g.name().to_owned(),
            message: format!("laplacian trace {trace} deviates from 2E = {trace_expected}"),
        });
    }
    let components = g.component_count();
    if spectrum.zero_multiplicity() != components {
        return Err(Error::Numerical {
            graph: g.name().to_owned(),
            message: format!(
                "zero-eigenvalue multiplicity {} does not match component count {components}",
                spectrum.zero_multiplicity()
            ),
        });
    }
    Ok(spectrum)
}

/// Euclidean distance between the sorted Laplacian spectra; the shorter
/// spectrum is zero-padded at the front so both stay non-decreasing.
pub fn laplacian_spectrum_distance(g1: &Graph, g2: &Graph) -> Result<f64> {
    let s1 = laplacian_spectrum(g1)?;
    let s2 = laplacian_spectrum(g2)?;
    Ok(spectrum_distance(&s1, &s2))
}

pub fn spectrum_distance(s1: &Spectrum, s2: &Spectrum) -> f64 {
    let len = s1.eigenvalues.len().max(s2.eigenvalues.len());
    let padded = |s: &Spectrum| -> Vec<f64> {
        let mut v = vec![0.0; len - s.eigenvalues.len()];
        v.extend_from_slice(&s.eigenvalues);
        v
    };
    let a = padded(s1);
    let b = padded(s2);
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// The 250 logarithmically spaced heat-kernel times in [1e-2, 1e2].
pub fn netlsd_times() -> Vec<f64> {
    const POINTS: usize = 250;
    (0..POINTS)
        .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / (POINTS - 1) as f64))
        .collect()
}

/// Heat-trace signature `h(t) = sum_j exp(-t lambda_j)` at the given times.
pub fn netlsd_signature(spectrum: &Spectrum, times: &[f64]) -> Vec<f64> {
    times
        .iter()
        .map(|&t| spectrum.eigenvalues.iter().map(|&l| (-t * l).exp()).sum())
        .collect()
}

/// Euclidean distance between heat-trace signatures on the standard grid.
pub fn netlsd_distance(g1: &Graph, g2: &Graph) -> Result<f64> {
    let times = netlsd_times();
    let h1 = netlsd_signature(&laplacian_spectrum(g1)?, &times);
    let h2 = netlsd_signature(&laplacian_spectrum(g2)?, &times);
    Ok(h1
        .iter()
        .zip(h2.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}
