//! Weighted Ricci curvature of the Lebesgue measure.
//!
//! Along a unit-speed geodesic `eta`, Lebesgue measure decomposes as
//! `e^{-Psi} vol_{g}` with `Psi(s) = (1/2) log det g_{eta'(s)}(eta(s))`.
//! With `psi1 = Psi'(0)`, `psi2 = Psi''(0)` (arclength):
//!
//! * `Ric_inf = Ric + psi2`
//! * `Ric_N = Ric + psi2 - psi1^2 / (N - n)` for `n < N < inf`
//! * `Ric_n = Ric + psi2` if `psi1 = 0`, otherwise `-inf`

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use rayon::prelude::*;

use crate::curvature::{ricci_by, CurvatureReport};
use crate::diff::{self, DiffScheme};
use crate::domain::ConvexBody;
use crate::error::{GeomError, Result};
use crate::finsler::{MetricKind, TangentVector, UnitGeodesic};
use crate::sampling;
use crate::tensor::{metric_tensor_by, TensorRoute};

/// `|psi1|` at or below this counts as `Psi'(0) = 0`.
pub const PSI_ZERO: f64 = 1e-6;
/// Default arclength step for the derivatives of `Psi`.
pub const PSI_STEP: f64 = 0.05;
/// Default bound on the Richardson discrepancy of `psi1` and `psi2`.
pub const PSI_TOL: f64 = 1e-4;
const UNIT_SPEED_TOL: f64 = 1e-9;

/// Effective dimension `N in [n, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NValue {
    Finite(f64),
    Infinity,
}

impl NValue {
    /// Rejects `N < n`.
    pub fn check(self, n: usize) -> Result<Self> {
        match self {
            NValue::Finite(v) if !(v >= n as f64) => Err(GeomError::BadN(format!(
                "N = {v} is below the dimension {n}"
            ))),
            other => Ok(other),
        }
    }

    pub fn is_dimension(self, n: usize) -> bool {
        self == NValue::Finite(n as f64)
    }

    /// Comma-separated list of `N` values, each checked against `n`.
    pub fn parse_list(text: &str, n: usize) -> Result<Vec<NValue>> {
        text.split(',')
            .map(|tok| tok.trim().parse::<NValue>()?.check(n))
            .collect()
    }

    /// `[n+1, n+2, 2n, inf]` without repeats.
    pub fn standard_list(n: usize) -> Vec<NValue> {
        let n = n as f64;
        let mut out = vec![NValue::Finite(n + 1.0), NValue::Finite(n + 2.0)];
        if 2.0 * n > n + 2.0 {
            out.push(NValue::Finite(2.0 * n));
        }
        out.push(NValue::Infinity);
        out
    }
}

impl FromStr for NValue {
    type Err = GeomError;

    /// Accepts `inf`, decimals and fractions such as `7/2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "+inf") {
            return Ok(NValue::Infinity);
        }
        let bad = || GeomError::BadN(format!("cannot parse N from {s:?}"));
        let value = match s.split_once('/') {
            Some((p, q)) => {
                let p: f64 = p.trim().parse().map_err(|_| bad())?;
                let q: f64 = q.trim().parse().map_err(|_| bad())?;
                p / q
            }
            None => s.parse().map_err(|_| bad())?,
        };
        if !value.is_finite() {
            return Err(bad());
        }
        Ok(NValue::Finite(value))
    }
}

impl fmt::Display for NValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NValue::Finite(v) => write!(f, "{v}"),
            NValue::Infinity => f.write_str("inf"),
        }
    }
}

/// Assembles `Ric_N` from its three ingredients.
pub fn assemble(ric: f64, psi1: f64, psi2: f64, big_n: NValue, n: usize) -> f64 {
    match big_n {
        NValue::Infinity => ric + psi2,
        NValue::Finite(_) if big_n.is_dimension(n) => {
            if psi1.abs() <= PSI_ZERO {
                ric + psi2
            } else {
                f64::NEG_INFINITY
            }
        }
        NValue::Finite(v) => ric + psi2 - psi1 * psi1 / (v - n as f64),
    }
}

fn unit_geodesic(kind: MetricKind, body: &ConvexBody, tv: &TangentVector) -> Result<UnitGeodesic> {
    let (geo, speed) = UnitGeodesic::new(kind, body, tv)?;
    if (speed - 1.0).abs() > 1e-10 {
        return Err(GeomError::UnitSpeed(speed - 1.0));
    }
    Ok(geo)
}

fn psi_on(geo: &UnitGeodesic, body: &ConvexBody, s: f64, route: TensorRoute) -> Result<f64> {
    let (lo, hi) = geo.arclength_range();
    if !(s > lo && s < hi) {
        return Err(GeomError::NearBoundary { distance: 0.0 });
    }
    let tv = TangentVector::new(geo.point(s), geo.velocity(s));
    let chord = body.chord(&tv.x, &tv.v)?;
    body.check_clearance(&chord, &tv.v)?;
    let g = metric_tensor_by(route, geo.kind, body, &tv, &DiffScheme::default())?;
    Ok(0.5 * g.log_det())
}

/// `Psi(s)` along the unit-speed geodesic with initial velocity `tv`, which
/// must satisfy `F(tv) = 1`.
pub fn psi_at(kind: MetricKind, body: &ConvexBody, tv: &TangentVector, s: f64) -> Result<f64> {
    psi_at_by(TensorRoute::GraphJet, kind, body, tv, s)
}

pub fn psi_at_by(
    route: TensorRoute,
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    s: f64,
) -> Result<f64> {
    let geo = unit_geodesic(kind, body, tv)?;
    psi_on(&geo, body, s, route)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiDerivatives {
    pub psi1: f64,
    pub psi2: f64,
    pub err1: f64,
    pub err2: f64,
}

/// `Psi'(0)` and `Psi''(0)` by Richardson-extrapolated central differences
/// in arclength. The step shrinks if the stencil would leave the domain.
pub fn psi_derivatives(
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    scheme: &DiffScheme,
) -> Result<PsiDerivatives> {
    psi_derivatives_by(TensorRoute::GraphJet, kind, body, tv, scheme)
}

pub fn psi_derivatives_by(
    route: TensorRoute,
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    scheme: &DiffScheme,
) -> Result<PsiDerivatives> {
    let geo = unit_geodesic(kind, body, tv)?;
    let (lo, hi) = geo.arclength_range();
    let h = scheme.step_or(PSI_STEP).min(0.25 * hi).min(-0.25 * lo);
    let jet = diff::jet_1d(|s| psi_on(&geo, body, s, route), 0.0, h, scheme.levels)?;
    let tolerance = scheme.tolerance_or(PSI_TOL);
    let estimate = jet.err1.max(jet.err2);
    if !(estimate <= tolerance) {
        return Err(GeomError::Tolerance {
            estimate,
            tolerance,
        });
    }
    Ok(PsiDerivatives {
        psi1: jet.d1,
        psi2: jet.d2,
        err1: jet.err1,
        err2: jet.err2,
    })
}

/// Closed-form values for one unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRecord {
    pub ric: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub ric_inf: f64,
    pub ric_n: f64,
    pub ric_big_n: Vec<(NValue, f64)>,
}

fn oracle_record(
    n: usize,
    ric: f64,
    psi1: f64,
    psi2: f64,
    n_list: &[NValue],
) -> Result<OracleRecord> {
    let ric_big_n = n_list
        .iter()
        .map(|&big_n| Ok((big_n.check(n)?, assemble(ric, psi1, psi2, big_n, n))))
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleRecord {
        ric,
        psi1,
        psi2,
        ric_inf: ric + psi2,
        ric_n: assemble(ric, psi1, psi2, NValue::Finite(n as f64), n),
        ric_big_n,
    })
}

/// Funk metric: `Ric = -(n-1)/4`, `psi1 = (n+1)/2`, `psi2 = 0`, so
/// `Ric_N = -(n-1)/4 - (n+1)^2 / (4(N-n))`.
pub fn funk_oracle(n: usize, n_list: &[NValue]) -> Result<OracleRecord> {
    if n < 1 {
        return Err(GeomError::BadN("dimension must be positive".into()));
    }
    let nf = n as f64;
    oracle_record(n, -(nf - 1.0) / 4.0, (nf + 1.0) / 2.0, 0.0, n_list)
}

/// Hilbert metric at a unit vector with chord parameters `t_plus`,
/// `t_minus`: `Ric = -(n-1)`, `psi1 = (n+1)/2 (1/t_plus - 1/t_minus)`,
/// `psi2 = (n+1) / (t_plus t_minus)`.
pub fn hilbert_oracle(
    t_plus: f64,
    t_minus: f64,
    n: usize,
    n_list: &[NValue],
) -> Result<OracleRecord> {
    let residual = 0.5 * (1.0 / t_plus + 1.0 / t_minus) - 1.0;
    if !(residual.abs() <= UNIT_SPEED_TOL) {
        return Err(GeomError::UnitSpeed(residual));
    }
    let nf = n as f64;
    let psi1 = 0.5 * (nf + 1.0) * (1.0 / t_plus - 1.0 / t_minus);
    let psi2 = (nf + 1.0) / (t_plus * t_minus);
    oracle_record(n, -(nf - 1.0), psi1, psi2, n_list)
}

/// `|numeric - oracle|` per field. Matching infinities count as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviations {
    pub ric: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub ric_inf: f64,
    pub ric_n: f64,
    pub ric_big_n: Vec<(NValue, f64)>,
}

fn deviation(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedRicciReport {
    pub kind: MetricKind,
    pub x: DVector<f64>,
    /// Unit initial velocity.
    pub v: DVector<f64>,
    /// Chord parameters in units of `v`.
    pub t_plus: f64,
    pub t_minus: f64,
    pub ric: f64,
    pub ric_error: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub ric_n: f64,
    pub ric_big_n: Vec<(NValue, f64)>,
    pub ric_inf: f64,
    pub oracle: Option<OracleRecord>,
    pub deviations: Option<Deviations>,
}

impl WeightedRicciReport {
    /// Largest finite deviation from the oracle, if there is one.
    pub fn max_deviation(&self) -> Option<f64> {
        let d = self.deviations.as_ref()?;
        let mut worst = d.ric.max(d.psi1).max(d.psi2).max(d.ric_inf).max(d.ric_n);
        for (_, v) in &d.ric_big_n {
            worst = worst.max(*v);
        }
        Some(worst)
    }
}

/// Full weighted Ricci report at `tv`; the vector is normalized first. The
/// scheme's step and tolerance apply to both the Ricci and `Psi` stencils.
pub fn weighted_ricci(
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    n_list: &[NValue],
    scheme: &DiffScheme,
) -> Result<WeightedRicciReport> {
    let n = body.dim();
    let n_list = n_list
        .iter()
        .map(|big_n| big_n.check(n))
        .collect::<Result<Vec<_>>>()?;
    let (geo, _) = UnitGeodesic::new(kind, body, tv)?;
    let unit = TangentVector::new(geo.x.clone(), geo.v_hat.clone());
    let CurvatureReport {
        ricci_value: ric,
        estimated_error: ric_error,
        ..
    } = ricci_by(TensorRoute::GraphJet, kind, body, &unit, scheme)?;
    let PsiDerivatives { psi1, psi2, .. } = psi_derivatives(kind, body, &unit, scheme)?;

    let ric_big_n: Vec<(NValue, f64)> = n_list
        .iter()
        .map(|&big_n| (big_n, assemble(ric, psi1, psi2, big_n, n)))
        .collect();
    let ric_n = assemble(ric, psi1, psi2, NValue::Finite(n as f64), n);
    let ric_inf = ric + psi2;

    let oracle = match kind {
        MetricKind::Funk => Some(funk_oracle(n, &n_list)?),
        MetricKind::Hilbert => Some(hilbert_oracle(geo.t_plus, geo.t_minus, n, &n_list)?),
        MetricKind::ReverseFunk => None,
    };
    let deviations = oracle.as_ref().map(|o| Deviations {
        ric: deviation(ric, o.ric),
        psi1: deviation(psi1, o.psi1),
        psi2: deviation(psi2, o.psi2),
        ric_inf: deviation(ric_inf, o.ric_inf),
        ric_n: deviation(ric_n, o.ric_n),
        ric_big_n: ric_big_n
            .iter()
            .zip(&o.ric_big_n)
            .map(|(&(big_n, a), &(_, b))| (big_n, deviation(a, b)))
            .collect(),
    });

    Ok(WeightedRicciReport {
        kind,
        x: geo.x.clone(),
        v: geo.v_hat.clone(),
        t_plus: geo.t_plus,
        t_minus: geo.t_minus,
        ric,
        ric_error,
        psi1,
        psi2,
        ric_n,
        ric_big_n,
        ric_inf,
        oracle,
        deviations,
    })
}

/// Acceptance thresholds for [`verify_theorems`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// For `Ric`, `Ric_inf`, `Ric_N` and the bound memberships.
    pub curvature: f64,
    pub psi1: f64,
}

impl Tolerances {
    pub fn for_kind(kind: MetricKind) -> Self {
        Tolerances {
            curvature: 2e-3,
            psi1: if kind == MetricKind::Funk { 1e-5 } else { 1e-4 },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleFailure {
    pub index: usize,
    pub check: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub kind: MetricKind,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub n_list: Vec<NValue>,
    pub convexity_margin: f64,
    pub warnings: Vec<String>,
    /// Worst value per check, in a fixed order.
    pub worst: Vec<(String, f64)>,
    /// `(min, max)` of the computed `Ric_inf`.
    pub ric_inf_range: (f64, f64),
    pub failures: Vec<SampleFailure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the closed-form weighted Ricci values (and for Hilbert the
/// bounds `Ric_inf in (-(n-1), 2]`, `Ric_N in (-(n-1) - (n+1)^2/(N-n), 2]`)
/// at `sample_count` seeded interior unit vectors.
pub fn verify_theorems(
    kind: MetricKind,
    body: &ConvexBody,
    sample_count: usize,
    seed: u64,
    tolerances: Tolerances,
) -> Result<VerificationReport> {
    if kind == MetricKind::ReverseFunk {
        return Err(GeomError::BadSpec(
            "verification covers the funk and hilbert metrics".into(),
        ));
    }
    let n = body.dim();
    let nf = n as f64;
    let n_list = NValue::standard_list(n);
    let scheme = DiffScheme::default();

    let outcomes: Vec<Result<WeightedRicciReport>> = (0..sample_count)
        .into_par_iter()
        .map(|i| {
            let tv = sampling::interior_tangent(body, seed, i as u64)?;
            weighted_ricci(kind, body, &tv, &n_list, &scheme)
        })
        .collect();

    let mut names = vec!["ric".to_string(), "psi1".to_string(), "ric_inf".to_string()];
    if kind == MetricKind::Hilbert {
        names.push("psi2".to_string());
    }
    for big_n in n_list.iter().filter(|b| **b != NValue::Infinity) {
        names.push(format!("ric_N[{big_n}]"));
    }
    names.push("ric_n".to_string());
    if kind == MetricKind::Hilbert {
        names.push("bound_ric_inf".to_string());
        names.push("bound_ric_N".to_string());
    }
    let mut worst: Vec<(String, f64)> = names.into_iter().map(|s| (s, 0.0)).collect();
    let mut failures = Vec::new();
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);

    let mut record =
        |worst: &mut Vec<(String, f64)>, index: usize, check: &str, value: f64, tol: f64| {
            if let Some(slot) = worst.iter_mut().find(|(name, _)| name == check) {
                slot.1 = slot.1.max(value);
            }
            if !(value <= tol) {
                failures.push(SampleFailure {
                    index,
                    check: check.to_string(),
                    value,
                });
            }
        };

    for (index, outcome) in outcomes.into_iter().enumerate() {
        let report = match outcome {
            Ok(r) => r,
            Err(e) => {
                record(&mut worst, index, e.code(), f64::INFINITY, 0.0);
                continue;
            }
        };
        let d = report
            .deviations
            .as_ref()
            .expect("oracle exists for funk and hilbert");
        let tol = tolerances.curvature;
        range = (range.0.min(report.ric_inf), range.1.max(report.ric_inf));
        record(&mut worst, index, "ric", d.ric, tol);
        record(&mut worst, index, "psi1", d.psi1, tolerances.psi1);
        record(&mut worst, index, "ric_inf", d.ric_inf, tol);
        if kind == MetricKind::Hilbert {
            record(&mut worst, index, "psi2", d.psi2, tol);
        }
        for &(big_n, dev) in d.ric_big_n.iter().filter(|(b, _)| *b != NValue::Infinity) {
            record(&mut worst, index, &format!("ric_N[{big_n}]"), dev, tol);
        }
        record(&mut worst, index, "ric_n", d.ric_n, tol);
        if kind == MetricKind::Hilbert {
            // excess beyond the open lower / closed upper bound
            let excess = |value: f64, lower: f64| (lower - value).max(value - 2.0).max(0.0);
            record(
                &mut worst,
                index,
                "bound_ric_inf",
                excess(report.ric_inf, -(nf - 1.0)),
                tol,
            );
            let mut e: f64 = 0.0;
            for &(big_n, value) in &report.ric_big_n {
                if let NValue::Finite(b) = big_n {
                    e = e.max(excess(value, -(nf - 1.0) - (nf + 1.0).powi(2) / (b - nf)));
                }
            }
            record(&mut worst, index, "bound_ric_N", e, tol);
        }
    }

    let convexity_margin = body.strong_convexity_margin(64, seed);
    let mut warnings = Vec::new();
    if convexity_margin < 1e-3 {
        warnings.push(format!(
            "strong convexity margin {convexity_margin:.3e} is near zero; the boundary is not uniformly curved"
        ));
    }

    Ok(VerificationReport {
        kind,
        dim: n,
        samples: sample_count,
        seed,
        tolerances,
        n_list,
        convexity_margin,
        warnings,
        worst,
        ric_inf_range: range,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{load_domain, DomainSpec};
    use crate::finsler::finsler_norm;

    fn unit(kind: MetricKind, body: &ConvexBody, x: &[f64], v: &[f64]) -> TangentVector {
        let tv = TangentVector::from_slices(x, v);
        let f = finsler_norm(kind, body, &tv).unwrap();
        tv.scaled(1.0 / f)
    }

    #[test]
    fn parses_n_values() {
        assert_eq!("inf".parse::<NValue>().unwrap(), NValue::Infinity);
        assert_eq!("7/2".parse::<NValue>().unwrap(), NValue::Finite(3.5));
        assert_eq!(NValue::parse_list("3, 4,inf", 2).unwrap().len(), 3);
        assert_eq!(NValue::parse_list("1", 2).unwrap_err().code(), "E_BAD_N");
        assert_eq!("x".parse::<NValue>().unwrap_err().code(), "E_BAD_N");
        assert!(NValue::Finite(2.0).check(2).unwrap().is_dimension(2));
    }

    #[test]
    fn funk_psi_is_linear() {
        let d = load_domain(&DomainSpec::unit_ball(2)).unwrap();
        let tv = unit(MetricKind::Funk, &d, &[0.0, 0.0], &[1.0, 0.0]);
        let p0 = psi_at(MetricKind::Funk, &d, &tv, 0.0).unwrap();
        for s in [0.1, 0.3, 0.5] {
            let p = psi_at(MetricKind::Funk, &d, &tv, s).unwrap();
            assert!((p - p0 - 1.5 * s).abs() < 1e-6);
        }
    }

    #[test]
    fn hilbert_center_values() {
        let d = load_domain(&DomainSpec::unit_ball(2)).unwrap();
        let tv = unit(MetricKind::Hilbert, &d, &[0.0, 0.0], &[0.6, 0.8]);
        let p = psi_derivatives(MetricKind::Hilbert, &d, &tv, &DiffScheme::default()).unwrap();
        assert!(p.psi1.abs() < 1e-6);
        assert!((p.psi2 - 3.0).abs() < 1e-4);
        let r = weighted_ricci(
            MetricKind::Hilbert,
            &d,
            &tv,
            &[NValue::Infinity, NValue::Finite(4.0)],
            &DiffScheme::default(),
        )
        .unwrap();
        assert!((r.ric_inf - 2.0).abs() < 2e-3);
        assert!((r.ric_big_n[1].1 - 2.0).abs() < 2e-3);
        // psi1 = 0 selects the finite branch for N = n
        assert!(r.ric_n.is_finite());
    }

    #[test]
    fn funk_weighted_value() {
        let d = load_domain(&DomainSpec::ellipsoid(&[2.0, 1.0])).unwrap();
        let tv = unit(MetricKind::Funk, &d, &[0.4, -0.3], &[1.0, 2.0]);
        let r = weighted_ricci(
            MetricKind::Funk,
            &d,
            &tv,
            &[NValue::Finite(4.0)],
            &DiffScheme::default(),
        )
        .unwrap();
        assert!((r.ric_big_n[0].1 + 1.375).abs() < 2e-3);
        assert_eq!(r.ric_n, f64::NEG_INFINITY);
        assert!(r.max_deviation().unwrap() < 2e-3);
    }

    #[test]
    fn oracles() {
        let f = funk_oracle(2, &[]).unwrap();
        assert_eq!(f.ric_inf, -0.25);
        let f3 = funk_oracle(3, &[NValue::Finite(4.0)]).unwrap();
        assert_eq!(f3.ric_big_n[0].1, -4.5);
        let far = funk_oracle(2, &[NValue::Finite(1e12)]).unwrap();
        assert!((far.ric_big_n[0].1 + 0.25).abs() < 1e-10);

        let h = hilbert_oracle(1.0, 1.0, 2, &[NValue::Finite(4.0)]).unwrap();
        assert_eq!((h.ric_inf, h.psi1, h.ric_big_n[0].1), (2.0, 0.0, 2.0));
        // t_plus -> 1/2 forces t_minus -> inf and Ric_inf -> -(n-1)
        let tp: f64 = 0.5 + 1e-7;
        let tm = 1.0 / (2.0 - 1.0 / tp);
        let edge = hilbert_oracle(tp, tm, 2, &[]).unwrap();
        assert!(edge.ric_inf > -1.0 && edge.ric_inf < -1.0 + 1e-5);
        assert_eq!(
            hilbert_oracle(1.0, 2.0, 2, &[]).unwrap_err().code(),
            "E_UNIT_SPEED"
        );
        assert_eq!(
            funk_oracle(3, &[NValue::Finite(2.5)]).unwrap_err().code(),
            "E_BAD_N"
        );
    }

    #[test]
    fn verification_sweep_on_ellipse() {
        let d = load_domain(&DomainSpec::ellipsoid(&[2.0, 1.0])).unwrap();
        for kind in [MetricKind::Funk, MetricKind::Hilbert] {
            let r = verify_theorems(kind, &d, 8, 7, Tolerances::for_kind(kind)).unwrap();
            assert!(r.passed(), "{kind}: {:?}", r.failures);
            assert!(r.warnings.is_empty());
        }
    }
}
