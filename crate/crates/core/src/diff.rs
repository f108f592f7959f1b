//! Central finite differences with Richardson extrapolation.
//!
//! Every estimate starts from the second-order central stencils
//! (`[f(x+h) - f(x-h)] / 2h`, `[f(x+h) - 2f(x) + f(x-h)] / h^2` and the
//! four-point mixed stencil) at steps `h, h/2, h/4, ...`. Their error
//! expansions contain only even powers of `h`, so each Richardson level
//! removes one power of `h^2`. One level reproduces the five-point
//! central formulas; two levels give sixth-order accuracy.

use nalgebra::DVector;

use crate::error::Result;

/// Finite-difference configuration shared by the tensor, curvature and
/// weight computations.
///
/// `rel_step` is a fraction of the natural length scale of the quantity
/// being differentiated (the safe interior radius for positional
/// derivatives, `|v|` for directional derivatives, one unit of arclength
/// for the weight function). `None` selects the operation's default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffScheme {
    pub rel_step: Option<f64>,
    pub levels: usize,
    pub tolerance: Option<f64>,
}

impl Default for DiffScheme {
    fn default() -> Self {
        DiffScheme {
            rel_step: None,
            levels: 2,
            tolerance: None,
        }
    }
}

impl DiffScheme {
    pub fn with_step(rel_step: f64) -> Self {
        DiffScheme {
            rel_step: Some(rel_step),
            ..Default::default()
        }
    }

    pub fn step_or(&self, default: f64) -> f64 {
        self.rel_step.unwrap_or(default)
    }

    pub fn tolerance_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// Richardson tableau over estimates taken at `h, h/2, h/4, ...` whose error
/// series is `c1 h^2 + c2 h^4 + ...`. Returns the fully extrapolated value
/// and the value from one level fewer (the error indicator).
pub fn richardson(estimates: &[f64]) -> (f64, f64) {
    let mut row: Vec<f64> = estimates.to_vec();
    if row.len() == 1 {
        return (row[0], row[0]);
    }
    let mut prev_best = row[row.len() - 1];
    let mut factor = 4.0;
    while row.len() > 1 {
        prev_best = row[row.len() - 1];
        row = row
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 4.0;
    }
    (row[0], prev_best)
}

fn richardson_vec(estimates: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let m = estimates[0].len();
    let mut best = vec![0.0; m];
    let mut prev = vec![0.0; m];
    let mut column = vec![0.0; estimates.len()];
    for c in 0..m {
        for (slot, e) in column.iter_mut().zip(estimates) {
            *slot = e[c];
        }
        let (b, p) = richardson(&column);
        best[c] = b;
        prev[c] = p;
    }
    (best, prev)
}

/// First and second derivative of a scalar function of one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1 {
    pub d1: f64,
    pub d2: f64,
    pub err1: f64,
    pub err2: f64,
}

pub fn jet_1d<F>(f: F, x: f64, h: f64, levels: usize) -> Result<Jet1>
where
    F: Fn(f64) -> Result<f64>,
{
    let f0 = f(x)?;
    let mut d1 = Vec::with_capacity(levels + 1);
    let mut d2 = Vec::with_capacity(levels + 1);
    let mut step = h;
    for _ in 0..=levels {
        let fp = f(x + step)?;
        let fm = f(x - step)?;
        d1.push((fp - fm) / (2.0 * step));
        d2.push((fp - 2.0 * f0 + fm) / (step * step));
        step *= 0.5;
    }
    let (b1, p1) = richardson(&d1);
    let (b2, p2) = richardson(&d2);
    Ok(Jet1 {
        d1: b1,
        d2: b2,
        err1: (b1 - p1).abs(),
        err2: (b2 - p2).abs(),
    })
}

/// Gradient of a scalar function by Richardson-extrapolated central
/// differences along each axis.
pub fn gradient<F>(f: F, x: &DVector<f64>, h: f64, levels: usize) -> Result<DVector<f64>>
where
    F: Fn(&DVector<f64>) -> Result<f64>,
{
    let mut out = DVector::zeros(x.len());
    for k in 0..x.len() {
        let mut estimates = Vec::with_capacity(levels + 1);
        let mut step = h;
        for _ in 0..=levels {
            let mut y = x.clone();
            y[k] += step;
            let fp = f(&y)?;
            y[k] = x[k] - step;
            let fm = f(&y)?;
            estimates.push((fp - fm) / (2.0 * step));
            step *= 0.5;
        }
        out[k] = richardson(&estimates).0;
    }
    Ok(out)
}

/// Value, gradient and Hessian of a vector-valued function `f: R^n -> R^m`
/// at a point. `grad[k][c]` is `d f_c / d x_k`; `hess[k][l][c]` is
/// `d^2 f_c / d x_k d x_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetN {
    pub value: Vec<f64>,
    pub grad: Vec<Vec<f64>>,
    pub hess: Vec<Vec<Vec<f64>>>,
}

/// Output of [`jet_nd`]: the extrapolated jet and the jet obtained with one
/// Richardson level fewer.
#[derive(Debug, Clone, PartialEq)]
pub struct JetEstimate {
    pub best: JetN,
    pub coarse: JetN,
    pub step: f64,
}

impl JetEstimate {
    /// Largest componentwise discrepancy between the two Richardson levels.
    pub fn max_discrepancy(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in self.best.grad.iter().zip(&self.coarse.grad) {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs());
            }
        }
        for (ra, rb) in self.best.hess.iter().zip(&self.coarse.hess) {
            for (a, b) in ra.iter().zip(rb) {
                for (x, y) in a.iter().zip(b) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        worst
    }
}

/// Gradient and Hessian of `f` at `x` from central stencils at steps
/// `h, h/2, ..., h/2^levels`. Every evaluation point lies in the
/// cross-polytope `{x + d : |d|_1 <= 2h}`.
pub fn jet_nd<F>(f: F, x: &DVector<f64>, h: f64, levels: usize) -> Result<JetEstimate>
where
    F: Fn(&DVector<f64>) -> Result<Vec<f64>>,
{
    let n = x.len();
    let f0 = f(x)?;
    let m = f0.len();
    let mut grads: Vec<Vec<Vec<f64>>> = vec![Vec::new(); n]; // [k][level][c]
    let mut hesses: Vec<Vec<Vec<Vec<f64>>>> = vec![vec![Vec::new(); n]; n]; // [k][l][level][c]

    let mut step = h;
    for _ in 0..=levels {
        for k in 0..n {
            let mut y = x.clone();
            y[k] += step;
            let fp = f(&y)?;
            y[k] = x[k] - step;
            let fm = f(&y)?;
            let g: Vec<f64> = (0..m).map(|c| (fp[c] - fm[c]) / (2.0 * step)).collect();
            let d2: Vec<f64> = (0..m)
                .map(|c| (fp[c] - 2.0 * f0[c] + fm[c]) / (step * step))
                .collect();
            grads[k].push(g);
            hesses[k][k].push(d2);
        }
        for k in 0..n {
            for l in (k + 1)..n {
                let mut y = x.clone();
                y[k] += step;
                y[l] += step;
                let fpp = f(&y)?;
                y[l] = x[l] - step;
                let fpm = f(&y)?;
                y[k] = x[k] - step;
                let fmm = f(&y)?;
                y[l] = x[l] + step;
                let fmp = f(&y)?;
                let d: Vec<f64> = (0..m)
                    .map(|c| (fpp[c] - fpm[c] - fmp[c] + fmm[c]) / (4.0 * step * step))
                    .collect();
                hesses[k][l].push(d.clone());
                hesses[l][k].push(d);
            }
        }
        step *= 0.5;
    }

    let mut best = JetN {
        value: f0.clone(),
        grad: vec![Vec::new(); n],
        hess: vec![vec![Vec::new(); n]; n],
    };
    let mut coarse = best.clone();
    for k in 0..n {
        let (b, p) = richardson_vec(&grads[k]);
        best.grad[k] = b;
        coarse.grad[k] = p;
        for l in 0..n {
            let (b, p) = richardson_vec(&hesses[k][l]);
            best.hess[k][l] = b;
            coarse.hess[k][l] = p;
        }
    }
    Ok(JetEstimate {
        best,
        coarse,
        step: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_removes_even_powers() {
        // e(h) = 1 + h^2 + h^4 sampled at h = 1, 1/2, 1/4
        let e: Vec<f64> = [1.0f64, 0.5, 0.25]
            .iter()
            .map(|h| 1.0 + h * h + h.powi(4))
            .collect();
        let (best, _) = richardson(&e);
        assert!((best - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jet_1d_of_exp() {
        let j = jet_1d(|t| Ok(t.exp()), 0.3, 0.1, 2).unwrap();
        let e = 0.3f64.exp();
        assert!((j.d1 - e).abs() < 1e-11);
        assert!((j.d2 - e).abs() < 1e-9);
    }

    #[test]
    fn jet_nd_of_quadratic_and_trig() {
        let f = |y: &DVector<f64>| Ok(vec![y[0] * y[0] * y[1], (y[0] + 2.0 * y[1]).sin()]);
        let x = DVector::from_vec(vec![0.4, -0.2]);
        let j = jet_nd(f, &x, 0.05, 2).unwrap();
        // f0 = x^2 y
        assert!((j.best.grad[0][0] - 2.0 * 0.4 * -0.2).abs() < 1e-12);
        assert!((j.best.hess[0][1][0] - 0.8).abs() < 1e-10);
        assert!((j.best.hess[1][1][0]).abs() < 1e-10);
        // f1 = sin(x + 2y)
        let s = (0.4f64 - 0.4).sin();
        assert!((j.best.hess[0][1][1] + 2.0 * s).abs() < 1e-9);
        assert!((j.best.grad[1][1] - 2.0 * 0.0f64.cos()).abs() < 1e-10);
        assert!(j.max_discrepancy() < 1e-6);
    }
}
