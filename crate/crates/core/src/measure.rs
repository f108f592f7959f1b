//! Lebesgue volume of forward metric balls and the Bishop–Gromov ratio test.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;

use crate::domain::ConvexBody;
use crate::error::{GeomError, Result};
use crate::finsler::{distance, MetricKind};
use crate::sampling;

/// Monte-Carlo points per RNG substream. Fixed so that estimates do not
/// depend on the thread count.
pub const BATCH: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeMethod {
    MonteCarlo,
    Grid,
}

impl VolumeMethod {
    pub fn name(self) -> &'static str {
        match self {
            VolumeMethod::MonteCarlo => "monte_carlo",
            VolumeMethod::Grid => "grid",
        }
    }
}

impl fmt::Display for VolumeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VolumeMethod {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monte_carlo" | "mc" => Ok(VolumeMethod::MonteCarlo),
            "grid" => Ok(VolumeMethod::Grid),
            other => Err(GeomError::BadSpec(format!(
                "unknown volume method {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeEstimate {
    pub radius: f64,
    pub value: f64,
    /// Binomial standard error for Monte Carlo; `|V_m - V_{m/2}|` for a grid
    /// with `m` cells per axis.
    pub std_error: f64,
    pub method: VolumeMethod,
    pub samples: usize,
    pub seed: u64,
}

/// Sample count used when the caller does not choose one.
pub fn default_samples(n: usize) -> usize {
    if n <= 2 {
        200_000
    } else {
        1_000_000
    }
}

/// `m_L { y in D : d(x, y) <= r }`.
pub fn forward_ball_volume(
    kind: MetricKind,
    body: &ConvexBody,
    x: &DVector<f64>,
    r: f64,
    method: VolumeMethod,
    samples: usize,
    seed: u64,
) -> Result<VolumeEstimate> {
    let mut v = forward_ball_volumes(kind, body, x, &[r], method, samples, seed)?;
    Ok(v.remove(0))
}

/// Volumes for several radii from one shared set of sample points.
pub fn forward_ball_volumes(
    kind: MetricKind,
    body: &ConvexBody,
    x: &DVector<f64>,
    radii: &[f64],
    method: VolumeMethod,
    samples: usize,
    seed: u64,
) -> Result<Vec<VolumeEstimate>> {
    if x.len() != body.dim() {
        return Err(GeomError::BadSpec(format!(
            "expected a {}-vector",
            body.dim()
        )));
    }
    if !body.contains(x) {
        return Err(GeomError::Outside);
    }
    if let Some(r) = radii.iter().find(|r| !(**r >= 0.0)) {
        return Err(GeomError::BadSpec(format!(
            "radius {r} must be nonnegative"
        )));
    }
    if samples == 0 {
        return Err(GeomError::BadSpec("sample count must be positive".into()));
    }
    let (lo, hi) = body.bounding_box();
    let box_volume: f64 = (hi - lo).iter().product();
    let r_max = radii.iter().cloned().fold(0.0, f64::max);

    // Distance to y when it lies in the largest ball.
    let classify = |y: &DVector<f64>| -> Option<f64> {
        if !body.contains(y) {
            return None;
        }
        let d = distance(kind, body, x, y).ok()?;
        (d <= r_max).then_some(d)
    };
    let tally = |hits: &mut [u64], d: f64| {
        for (slot, r) in hits.iter_mut().zip(radii) {
            if d <= *r {
                *slot += 1;
            }
        }
    };

    let estimates = match method {
        VolumeMethod::MonteCarlo => {
            let batches = samples.div_ceil(BATCH);
            let hits = (0..batches)
                .into_par_iter()
                .map(|b| {
                    let mut rng = sampling::stream(seed, b as u64);
                    let count = BATCH.min(samples - b * BATCH);
                    let mut hits = vec![0u64; radii.len()];
                    for _ in 0..count {
                        let y = DVector::from_fn(lo.len(), |i, _| rng.random_range(lo[i]..hi[i]));
                        if let Some(d) = classify(&y) {
                            tally(&mut hits, d);
                        }
                    }
                    hits
                })
                .reduce(|| vec![0u64; radii.len()], add_counts);
            let total = samples as f64;
            radii
                .iter()
                .zip(hits)
                .map(|(&radius, h)| {
                    let p = h as f64 / total;
                    VolumeEstimate {
                        radius,
                        value: box_volume * p,
                        std_error: box_volume * (p * (1.0 - p) / total).sqrt(),
                        method,
                        samples,
                        seed,
                    }
                })
                .collect()
        }
        VolumeMethod::Grid => {
            let n = body.dim();
            let m = ((samples as f64).powf(1.0 / n as f64).round() as usize).max(2) & !1;
            let fine = grid_counts(body.dim(), m, lo, hi, radii.len(), &classify, &tally);
            let coarse = grid_counts(body.dim(), m / 2, lo, hi, radii.len(), &classify, &tally);
            let cells = (m as f64).powi(n as i32);
            let coarse_cells = ((m / 2) as f64).powi(n as i32);
            radii
                .iter()
                .enumerate()
                .map(|(i, &radius)| {
                    let value = box_volume * fine[i] as f64 / cells;
                    let rough = box_volume * coarse[i] as f64 / coarse_cells;
                    VolumeEstimate {
                        radius,
                        value,
                        std_error: (value - rough).abs(),
                        method,
                        samples: m.pow(n as u32),
                        seed,
                    }
                })
                .collect()
        }
    };
    Ok(estimates)
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

// Cell-midpoint counts on an m^n grid over the box; rows of the first axis in
// parallel.
fn grid_counts<C, T>(
    n: usize,
    m: usize,
    lo: &DVector<f64>,
    hi: &DVector<f64>,
    len: usize,
    classify: &C,
    tally: &T,
) -> Vec<u64>
where
    C: Fn(&DVector<f64>) -> Option<f64> + Sync,
    T: Fn(&mut [u64], f64) + Sync,
{
    let width = (hi - lo) / m as f64;
    let rest = m.pow(n as u32 - 1);
    (0..m)
        .into_par_iter()
        .map(|first| {
            let mut hits = vec![0u64; len];
            for mut code in 0..rest {
                let mut y = DVector::zeros(n);
                y[0] = lo[0] + (first as f64 + 0.5) * width[0];
                for k in 1..n {
                    y[k] = lo[k] + ((code % m) as f64 + 0.5) * width[k];
                    code /= m;
                }
                if let Some(d) = classify(&y) {
                    tally(&mut hits, d);
                }
            }
            hits
        })
        .reduce(|| vec![0u64; len], add_counts)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to relative tolerance
/// `rel_tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // the tolerance is anchored to a coarse estimate of the whole integral
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    simpson_step(&f, a, b, fa, fm, fb, whole, rel_tol * scale, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Lower Ricci bound `K` for which the curvature-dimension condition
/// `CD(K, N)` holds: `-(n-1)/4 - (n+1)^2/(4(N-n))` for Funk and
/// `-(n-1) - (n+1)^2/(N-n)` for Hilbert.
pub fn corollary_k(kind: MetricKind, n: usize, big_n: f64) -> Result<f64> {
    let nf = n as f64;
    if !(big_n > nf) || !big_n.is_finite() {
        return Err(GeomError::BadN(format!(
            "N = {big_n} must be finite and exceed {n}"
        )));
    }
    match kind {
        MetricKind::Funk => Ok(-(nf - 1.0) / 4.0 - (nf + 1.0).powi(2) / (4.0 * (big_n - nf))),
        MetricKind::Hilbert => Ok(-(nf - 1.0) - (nf + 1.0).powi(2) / (big_n - nf)),
        MetricKind::ReverseFunk => Err(GeomError::BadSpec("no curvature bound for rfunk".into())),
    }
}

/// `int_0^r sinh(t sqrt(-K/(N-1)))^(N-1) dt`.
pub fn model_volume(k: f64, big_n: f64, r: f64) -> f64 {
    let a = (-k / (big_n - 1.0)).sqrt();
    adaptive_simpson(|t| (a * t).sinh().powf(big_n - 1.0), 0.0, r, 1e-10)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BishopGromovRow {
    pub radius: f64,
    pub volume: f64,
    pub std_error: f64,
    pub model: f64,
    pub ratio: f64,
    pub ratio_error: f64,
}

/// An increase of the ratio between consecutive radii beyond three combined
/// standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct BishopGromovViolation {
    pub from_radius: f64,
    pub to_radius: f64,
    pub increase: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BishopGromovReport {
    pub kind: MetricKind,
    pub big_n: f64,
    pub k: f64,
    pub rows: Vec<BishopGromovRow>,
    pub violations: Vec<BishopGromovViolation>,
}

/// Monte-Carlo check that `vol B+(x, r) / int_0^r sinh(...)^(N-1)` does not
/// increase along `r_grid`.
#[allow(clippy::too_many_arguments)]
pub fn bishop_gromov_check(
    kind: MetricKind,
    body: &ConvexBody,
    x: &DVector<f64>,
    big_n: f64,
    k: f64,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<BishopGromovReport> {
    let n = body.dim();
    if !(big_n > n as f64) || !big_n.is_finite() {
        return Err(GeomError::BadN(format!(
            "N = {big_n} must be finite and exceed {n}"
        )));
    }
    if !(k < 0.0) {
        return Err(GeomError::BadK(format!("K = {k} must be negative")));
    }
    if r_grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(GeomError::BadSpec("radii must be positive".into()));
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GeomError::BadSpec(
            "radii must be strictly increasing".into(),
        ));
    }
    let volumes = forward_ball_volumes(
        kind,
        body,
        x,
        r_grid,
        VolumeMethod::MonteCarlo,
        samples,
        seed,
    )?;
    let rows: Vec<BishopGromovRow> = volumes
        .iter()
        .map(|v| {
            let model = model_volume(k, big_n, v.radius);
            BishopGromovRow {
                radius: v.radius,
                volume: v.value,
                std_error: v.std_error,
                model,
                ratio: v.value / model,
                ratio_error: v.std_error / model,
            }
        })
        .collect();
    let violations = rows
        .windows(2)
        .filter_map(|w| {
            let increase = w[1].ratio - w[0].ratio;
            let threshold = 3.0 * w[0].ratio_error.hypot(w[1].ratio_error);
            (increase > threshold).then(|| BishopGromovViolation {
                from_radius: w[0].radius,
                to_radius: w[1].radius,
                increase,
                threshold,
            })
        })
        .collect();
    Ok(BishopGromovReport {
        kind,
        big_n,
        k,
        rows,
        violations,
    })
}
