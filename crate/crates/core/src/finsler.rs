//! Funk, reverse Funk and Hilbert norms, distances and straight-line
//! unit-speed geodesics.
//!
//! All quantities are expressed through the chord parameters `t_plus`,
//! `t_minus` of the line through the base point. For `v` with
//! `b = x + t_plus v` and `a = x - t_minus v` on the boundary:
//!
//! * Funk: `F(x, v) = 1 / t_plus`
//! * reverse Funk: `F(x, v) = 1 / t_minus`
//! * Hilbert: `F(x, v) = (1 / t_plus + 1 / t_minus) / 2`

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::domain::{ChordData, ConvexBody};
use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "funk")]
    Funk,
    #[serde(rename = "rfunk")]
    ReverseFunk,
    #[serde(rename = "hilbert")]
    Hilbert,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Funk => "funk",
            MetricKind::ReverseFunk => "rfunk",
            MetricKind::Hilbert => "hilbert",
        }
    }

    /// Norm in terms of the chord parameters of `v`.
    pub fn norm_from_chord(self, t_plus: f64, t_minus: f64) -> f64 {
        match self {
            MetricKind::Funk => 1.0 / t_plus,
            MetricKind::ReverseFunk => 1.0 / t_minus,
            MetricKind::Hilbert => 0.5 * (1.0 / t_plus + 1.0 / t_minus),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "funk" => Ok(MetricKind::Funk),
            "rfunk" | "reverse_funk" | "reversefunk" => Ok(MetricKind::ReverseFunk),
            "hilbert" => Ok(MetricKind::Hilbert),
            other => Err(format!(
                "unknown metric '{other}' (expected funk, rfunk or hilbert)"
            )),
        }
    }
}

/// A base point and a direction in `T_x D = R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub x: DVector<f64>,
    pub v: DVector<f64>,
}

impl TangentVector {
    pub fn new(x: DVector<f64>, v: DVector<f64>) -> Self {
        TangentVector { x, v }
    }

    pub fn from_slices(x: &[f64], v: &[f64]) -> Self {
        TangentVector {
            x: DVector::from_column_slice(x),
            v: DVector::from_column_slice(v),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        TangentVector {
            x: self.x.clone(),
            v: &self.v * c,
        }
    }
}

pub fn finsler_norm(kind: MetricKind, body: &ConvexBody, tv: &TangentVector) -> Result<f64> {
    let chord = body.chord(&tv.x, &tv.v)?;
    body.check_clearance(&chord, &tv.v)?;
    Ok(kind.norm_from_chord(chord.t_plus, chord.t_minus))
}

/// Norm without the near-boundary guard; used inside finite-difference
/// stencils and for sampling where the guard is applied once up front.
pub(crate) fn raw_norm(
    kind: MetricKind,
    body: &ConvexBody,
    x: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<f64> {
    match kind {
        MetricKind::Funk => Ok(1.0 / body.forward_hit(x, v)?),
        MetricKind::ReverseFunk => Ok(1.0 / body.forward_hit(x, &-v)?),
        MetricKind::Hilbert => {
            let c = body.chord(x, v)?;
            Ok(kind.norm_from_chord(c.t_plus, c.t_minus))
        }
    }
}

fn check_pair(
    body: &ConvexBody,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<Option<DVector<f64>>> {
    if x.len() != body.dim() || y.len() != body.dim() {
        return Err(GeomError::BadSpec(format!(
            "expected points of dimension {}",
            body.dim()
        )));
    }
    if !body.contains(x) || !body.contains(y) {
        return Err(GeomError::Outside);
    }
    let v = y - x;
    if v.norm() < 1e-14 * (1.0 + x.norm()) {
        return Ok(None);
    }
    Ok(Some(v))
}

/// `d_F(x, y) = log(|x - y'| / |y - y'|)` with `y'` the forward boundary hit
/// of the ray from `x` through `y`. In chord units of `v = y - x` this is
/// `log(t_plus / (t_plus - 1))`.
pub fn funk_distance(body: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    let Some(v) = check_pair(body, x, y)? else {
        return Ok(0.0);
    };
    let t_plus = body.forward_hit(x, &v)?;
    Ok(-(-1.0 / t_plus).ln_1p())
}

/// Cross-ratio distance; with chord units of `v = y - x`,
/// `d_H = (log(1 + 1/t_minus) - log(1 - 1/t_plus)) / 2`.
pub fn hilbert_distance(body: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    let Some(v) = check_pair(body, x, y)? else {
        return Ok(0.0);
    };
    let c = body.chord(x, &v)?;
    Ok(0.5 * ((1.0 / c.t_minus).ln_1p() - (-1.0 / c.t_plus).ln_1p()))
}

pub fn distance(
    kind: MetricKind,
    body: &ConvexBody,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<f64> {
    match kind {
        MetricKind::Funk => funk_distance(body, x, y),
        MetricKind::ReverseFunk => funk_distance(body, y, x),
        MetricKind::Hilbert => hilbert_distance(body, x, y),
    }
}

/// Straight unit-speed geodesic `s -> x + u(s) v_hat` with `F(x, v_hat) = 1`.
///
/// Chord parameters are stored in units of `v_hat`. The closed forms invert
/// the distance along the chord:
///
/// * Funk: `u(s) = t_plus (1 - e^{-s})`
/// * reverse Funk: `u(s) = t_minus (e^{s} - 1)`
/// * Hilbert: `u(s) = t_plus t_minus (e^{2s} - 1) / (t_plus + t_minus e^{2s})`
#[derive(Debug, Clone, PartialEq)]
pub struct UnitGeodesic {
    pub kind: MetricKind,
    pub x: DVector<f64>,
    pub v_hat: DVector<f64>,
    pub t_plus: f64,
    pub t_minus: f64,
}

impl UnitGeodesic {
    /// Normalizes `tv` to unit speed. Returns the geodesic and `F(tv)`.
    pub fn new(kind: MetricKind, body: &ConvexBody, tv: &TangentVector) -> Result<(Self, f64)> {
        let chord = body.chord(&tv.x, &tv.v)?;
        Ok(Self::from_chord(kind, tv, &chord))
    }

    pub fn from_chord(kind: MetricKind, tv: &TangentVector, chord: &ChordData) -> (Self, f64) {
        let norm = kind.norm_from_chord(chord.t_plus, chord.t_minus);
        let geo = UnitGeodesic {
            kind,
            x: tv.x.clone(),
            v_hat: &tv.v / norm,
            t_plus: chord.t_plus * norm,
            t_minus: chord.t_minus * norm,
        };
        (geo, norm)
    }

    /// Open interval of arclength parameters that stay inside the domain.
    pub fn arclength_range(&self) -> (f64, f64) {
        match self.kind {
            MetricKind::Funk => (-(self.t_minus / self.t_plus).ln_1p(), f64::INFINITY),
            MetricKind::ReverseFunk => (f64::NEG_INFINITY, (self.t_plus / self.t_minus).ln_1p()),
            MetricKind::Hilbert => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Chord parameter `u(s)` in units of `v_hat`; valid for any `s` in
    /// [`Self::arclength_range`].
    pub fn param(&self, s: f64) -> f64 {
        let (tp, tm) = (self.t_plus, self.t_minus);
        match self.kind {
            MetricKind::Funk => -tp * (-s).exp_m1(),
            MetricKind::ReverseFunk => tm * s.exp_m1(),
            MetricKind::Hilbert => {
                let e = (2.0 * s).exp();
                if e.is_infinite() {
                    return tp;
                }
                tp * tm * (2.0 * s).exp_m1() / (tp + tm * e)
            }
        }
    }

    /// `du/ds`.
    pub fn speed_param(&self, s: f64) -> f64 {
        let (tp, tm) = (self.t_plus, self.t_minus);
        match self.kind {
            MetricKind::Funk => tp * (-s).exp(),
            MetricKind::ReverseFunk => tm * s.exp(),
            MetricKind::Hilbert => {
                let e = (2.0 * s).exp();
                2.0 * tp * tm * e * (tp + tm) / (tp + tm * e).powi(2)
            }
        }
    }

    pub fn point(&self, s: f64) -> DVector<f64> {
        &self.x + &self.v_hat * self.param(s)
    }

    pub fn velocity(&self, s: f64) -> DVector<f64> {
        &self.v_hat * self.speed_param(s)
    }

    /// Chord parameters, in units of `v_hat`, seen from the point at `s`.
    pub fn chord_at(&self, s: f64) -> (f64, f64) {
        let u = self.param(s);
        (self.t_plus - u, self.t_minus + u)
    }
}

/// Point at Finsler arclength `s >= 0` along the geodesic leaving `x` in the
/// direction of `v`.
pub fn geodesic_point(
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    s: f64,
) -> Result<DVector<f64>> {
    if !(s >= 0.0) {
        return Err(GeomError::BadSpec(format!(
            "arclength {s} must be nonnegative"
        )));
    }
    let (geo, _) = UnitGeodesic::new(kind, body, tv)?;
    let (_, s_max) = geo.arclength_range();
    if s >= s_max {
        return Err(GeomError::Outside);
    }
    Ok(geo.point(s))
}

/// `exp_x(v)`: the geodesic with initial velocity `v` evaluated at time 1.
pub fn exp_map(kind: MetricKind, body: &ConvexBody, tv: &TangentVector) -> Result<DVector<f64>> {
    if tv.v.norm() < 1e-14 * (1.0 + tv.x.norm()) {
        if !body.contains(&tv.x) {
            return Err(GeomError::Outside);
        }
        return Ok(tv.x.clone());
    }
    let (geo, norm) = UnitGeodesic::new(kind, body, tv)?;
    let (_, s_max) = geo.arclength_range();
    if norm >= s_max {
        return Err(GeomError::Outside);
    }
    Ok(geo.point(norm))
}
