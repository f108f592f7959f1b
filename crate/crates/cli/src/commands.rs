use std::f64::consts::PI;

use fhgeom::curvature::ricci_by;
use fhgeom::measure::{corollary_k, default_samples, forward_ball_volumes};
use fhgeom::tensor::{metric_tensor_by, metric_tensor_graph_oracle, okada_sweep, route_agreement};
use fhgeom::wricci::{verify_theorems, Tolerances, VerificationReport};
use fhgeom::{
    bishop_gromov_check, distance, finsler_norm, weighted_ricci, ConvexBody, DiffScheme,
    DomainSpec, MetricKind, NValue, TangentVector, TensorRoute, VolumeMethod,
};
use nalgebra::{DMatrix, DVector};

use crate::report::{Report, Value};
use crate::{
    load_body, parse_list, BallvolArgs, BgcheckArgs, Command, Common, DistArgs, DomainInfoArgs,
    Failure, Outcome, RicciArgs, TensorArgs, VerifyArgs, WricciArgs,
};

type Run = Result<Outcome, Failure>;

const OKADA_TOL: f64 = 1e-6;
const ROUTE_TOL: f64 = 1e-5;
const NORM_TOL: f64 = 1e-7;

pub(crate) fn dispatch(command: &Command) -> (&Common, Run) {
    match command {
        Command::Dist(a) => (&a.common, dist(a)),
        Command::Wricci(a) => (&a.common, wricci(a)),
        Command::Verify(a) => (&a.common, verify(a)),
        Command::Ballvol(a) => (&a.common, ballvol(a)),
        Command::Bgcheck(a) => (&a.common, bgcheck(a)),
        Command::Tensor(a) => (&a.common, tensor(a)),
        Command::Ricci(a) => (&a.common, ricci_cmd(a)),
        Command::DomainInfo(a) => (&a.common, domain_info(a)),
    }
}

fn ok(report: Report) -> Run {
    Ok(Outcome {
        report,
        passed: true,
    })
}

fn vector(v: &DVector<f64>) -> Value {
    v.as_slice().into()
}

fn matrix(m: &DMatrix<f64>) -> Value {
    Value::List(
        (0..m.nrows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .copied()
                    .collect::<Vec<_>>()
                    .as_slice()
                    .into()
            })
            .collect(),
    )
}

fn json_value(v: &serde_json::Value) -> Value {
    match v {
        serde_json::Value::Null => Value::Null,
        serde_json::Value::Bool(b) => Value::Bool(*b),
        serde_json::Value::Number(n) => Value::Num(n.as_f64().unwrap_or(f64::NAN)),
        serde_json::Value::String(s) => Value::Str(s.clone()),
        serde_json::Value::Array(xs) => Value::List(xs.iter().map(json_value).collect()),
        serde_json::Value::Object(m) => {
            let mut r = Report::new();
            for (k, v) in m {
                r.push(k, json_value(v));
            }
            Value::Obj(r)
        }
    }
}

fn domain_value(spec: &DomainSpec) -> Value {
    let parsed: serde_json::Value =
        serde_json::from_str(&spec.to_json()).expect("spec is valid JSON");
    json_value(&parsed)
}

fn header(command: &str, metric: Option<MetricKind>, body: &ConvexBody) -> Report {
    let mut r = Report::new().with("command", command);
    if let Some(kind) = metric {
        r.push("metric", kind.name());
    }
    r.with("domain", domain_value(body.spec()))
}

fn point(text: &str) -> Result<DVector<f64>, Failure> {
    Ok(DVector::from_vec(parse_list(text)?))
}

fn tangent(p: &str, v: &str) -> Result<TangentVector, Failure> {
    let (x, v) = (point(p)?, point(v)?);
    if x.len() != v.len() {
        return Err(Failure::Usage("point and vector dimensions differ".into()));
    }
    Ok(TangentVector::new(x, v))
}

fn scheme(fd_step: Option<f64>, tol: Option<f64>) -> Result<DiffScheme, Failure> {
    if let Some(h) = fd_step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Failure::Usage(format!(
                "--fd-step must be positive, got {h}"
            )));
        }
    }
    Ok(DiffScheme {
        rel_step: fd_step,
        tolerance: tol,
        ..DiffScheme::default()
    })
}

fn dist(a: &DistArgs) -> Run {
    let (x, y) = (point(&a.from)?, point(&a.to)?);
    if x.len() != y.len() {
        return Err(Failure::Usage("--from and --to dimensions differ".into()));
    }
    let body = load_body(&a.common, Some(x.len()))?;
    let d_xy = distance(a.metric, &body, &x, &y)?;
    let d_yx = distance(a.metric, &body, &y, &x)?;
    let f_xy = distance(MetricKind::Funk, &body, &x, &y)?;
    let f_yx = distance(MetricKind::Funk, &body, &y, &x)?;
    let h = distance(MetricKind::Hilbert, &body, &x, &y)?;
    let r = header("dist", Some(a.metric), &body)
        .with("from", vector(&x))
        .with("to", vector(&y))
        .with("d_xy", d_xy)
        .with("d_yx", d_yx)
        .with(
            "symmetrization",
            Report::new()
                .with("hilbert", h)
                .with("funk_xy", f_xy)
                .with("funk_yx", f_yx)
                .with("residual", (2.0 * h - f_xy - f_yx).abs()),
        );
    ok(r)
}

fn n_list_value(list: &[(NValue, f64)]) -> Value {
    list.iter()
        .map(|(big_n, v)| Report::new().with("N", big_n.to_string()).with("value", *v))
        .collect::<Vec<_>>()
        .into()
}

fn wricci(a: &WricciArgs) -> Run {
    let tv = tangent(&a.point, &a.vector)?;
    let body = load_body(&a.common, Some(tv.x.len()))?;
    let n = body.dim();
    let n_list = match &a.big_n {
        Some(text) => NValue::parse_list(text, n)?,
        None => NValue::standard_list(n),
    };
    let w = weighted_ricci(a.metric, &body, &tv, &n_list, &scheme(a.fd_step, None)?)?;
    let oracle = w.oracle.as_ref().map(|o| {
        Report::new()
            .with("ric", o.ric)
            .with("psi1", o.psi1)
            .with("psi2", o.psi2)
            .with("ric_n", o.ric_n)
            .with("ric_N", n_list_value(&o.ric_big_n))
            .with("ric_inf", o.ric_inf)
    });
    let deviations = w.deviations.as_ref().map(|d| {
        Report::new()
            .with("ric", d.ric)
            .with("psi1", d.psi1)
            .with("psi2", d.psi2)
            .with("ric_n", d.ric_n)
            .with("ric_N", n_list_value(&d.ric_big_n))
            .with("ric_inf", d.ric_inf)
    });
    let max_dev = w.max_deviation();
    let passed = !a.strict || max_dev.is_none_or(|m| m <= a.tol);
    let report = header("wricci", Some(a.metric), &body)
        .with("x", vector(&w.x))
        .with("v", vector(&w.v))
        .with("t_plus", w.t_plus)
        .with("t_minus", w.t_minus)
        .with("ric", w.ric)
        .with("ric_error", w.ric_error)
        .with("psi1", w.psi1)
        .with("psi2", w.psi2)
        .with("ric_n", w.ric_n)
        .with("ric_N", n_list_value(&w.ric_big_n))
        .with("ric_inf", w.ric_inf)
        .with("oracle", oracle)
        .with("deviations", deviations)
        .with("max_deviation", max_dev)
        .with("tol", a.tol)
        .with("within_tol", max_dev.map(|m| m <= a.tol));
    Ok(Outcome { report, passed })
}

fn check(name: &str, value: f64, tol: f64) -> (Report, bool) {
    let pass = value <= tol;
    let r = Report::new()
        .with("check", name)
        .with("max", value)
        .with("tol", tol)
        .with("status", if pass { "PASS" } else { "FAIL" });
    (r, pass)
}

fn theorem_section(v: &VerificationReport) -> Report {
    let mut worst = Report::new();
    for (name, value) in &v.worst {
        worst.push(name, *value);
    }
    let failures: Vec<Report> = v
        .failures
        .iter()
        .take(20)
        .map(|f| {
            Report::new()
                .with("sample", f.index)
                .with("check", f.check.as_str())
                .with("value", f.value)
        })
        .collect();
    Report::new()
        .with("curvature_tol", v.tolerances.curvature)
        .with("psi1_tol", v.tolerances.psi1)
        .with(
            "N",
            Value::List(v.n_list.iter().map(|b| Value::Str(b.to_string())).collect()),
        )
        .with("worst", worst)
        .with("ric_inf_min", v.ric_inf_range.0)
        .with("ric_inf_max", v.ric_inf_range.1)
        .with("failure_count", v.failures.len())
        .with("failures", failures)
        .with("status", if v.passed() { "PASS" } else { "FAIL" })
}

fn verify(a: &VerifyArgs) -> Run {
    let body = load_body(&a.common, None)?;
    let kinds = match a.metric {
        Some(MetricKind::ReverseFunk) => {
            return Err(Failure::Usage(
                "verify supports --metric funk or hilbert".into(),
            ))
        }
        Some(k) => vec![k],
        None => vec![MetricKind::Funk, MetricKind::Hilbert],
    };
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let s = scheme(a.fd_step, None)?;
    let mut all_pass = true;
    let mut sections = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    let mut margin = f64::NAN;
    for kind in kinds {
        let mut tol = Tolerances::for_kind(kind);
        if let Some(t) = a.tol {
            tol.curvature = t;
        }
        let theorems = verify_theorems(kind, &body, a.samples, a.seed, tol)?;
        margin = theorems.convexity_margin;
        for w in &theorems.warnings {
            if !warnings.contains(w) {
                warnings.push(w.clone());
            }
        }
        let mut checks = Vec::new();
        let mut pass = theorems.passed();
        let agreement = route_agreement(kind, &body, a.samples, a.seed, &s)?;
        let routes = if kind == MetricKind::Funk {
            "tensor_three_way"
        } else {
            "tensor_two_way"
        };
        for (name, value, t) in [
            (routes, agreement.max_discrepancy, ROUTE_TOL),
            (
                "tensor_norm_identity",
                agreement.max_norm_residual,
                NORM_TOL,
            ),
        ] {
            let (r, p) = check(name, value, t);
            checks.push(r);
            pass &= p;
        }
        if kind == MetricKind::Funk {
            for (name, k) in [
                ("okada_funk", MetricKind::Funk),
                ("okada_rfunk", MetricKind::ReverseFunk),
            ] {
                let (r, p) = check(
                    name,
                    okada_sweep(k, &body, a.samples, a.seed, &s)?,
                    OKADA_TOL,
                );
                checks.push(r);
                pass &= p;
            }
        }
        all_pass &= pass;
        sections.push(
            Report::new()
                .with("metric", kind.name())
                .with("theorems", theorem_section(&theorems))
                .with("checks", checks)
                .with("status", if pass { "PASS" } else { "FAIL" }),
        );
    }
    let status = match (all_pass, warnings.is_empty()) {
        (false, _) => "FAIL",
        (true, true) => "PASS",
        (true, false) => "PASS-with-warning",
    };
    let report = header("verify", None, &body)
        .with("samples", a.samples)
        .with("seed", a.seed)
        .with("strong_convexity_margin", margin)
        .with(
            "warnings",
            Value::List(warnings.into_iter().map(Value::Str).collect()),
        )
        .with("results", sections)
        .with("status", status);
    Ok(Outcome {
        report,
        passed: all_pass,
    })
}

fn is_unit_disk(spec: &DomainSpec) -> bool {
    match spec {
        DomainSpec::Ellipsoid {
            center, semi_axes, ..
        } => {
            center.len() == 2
                && center.iter().all(|c| *c == 0.0)
                && semi_axes.iter().all(|s| *s == 1.0)
        }
        _ => false,
    }
}

fn ballvol(a: &BallvolArgs) -> Run {
    let x = a.point.as_deref().map(point).transpose()?;
    let body = load_body(&a.common, x.as_ref().map(|p| p.len()))?;
    let x = x.unwrap_or_else(|| body.interior_point().clone());
    let radii = parse_list(&a.radii)?;
    let method: VolumeMethod = a.method.parse()?;
    let samples = a.samples.unwrap_or_else(|| default_samples(body.dim()));
    let vols = forward_ball_volumes(a.metric, &body, &x, &radii, method, samples, a.seed)?;
    let closed_form =
        (is_unit_disk(body.spec()) && x.iter().all(|c| *c == 0.0)).then_some(a.metric);
    let rows: Vec<Report> = vols
        .iter()
        .map(|v| {
            let mut r = Report::new()
                .with("r", v.radius)
                .with("volume", v.value)
                .with("std_error", v.std_error);
            let exact = match closed_form {
                Some(MetricKind::Funk) => Some(PI * (-(-v.radius).exp_m1()).powi(2)),
                Some(MetricKind::Hilbert) => Some(PI * v.radius.tanh().powi(2)),
                _ => None,
            };
            if let Some(e) = exact {
                r.push("closed_form", e);
                r.push("abs_error", (v.value - e).abs());
            }
            r
        })
        .collect();
    let report = header("ballvol", Some(a.metric), &body)
        .with("center", vector(&x))
        .with("method", method.name())
        .with("samples", vols.first().map_or(samples, |v| v.samples))
        .with("seed", a.seed)
        .with("rows", rows);
    ok(report)
}

fn bgcheck(a: &BgcheckArgs) -> Run {
    let x = a.point.as_deref().map(point).transpose()?;
    let body = load_body(&a.common, x.as_ref().map(|p| p.len()))?;
    let x = x.unwrap_or_else(|| body.interior_point().clone());
    let n = body.dim();
    let big_n = match &a.big_n {
        Some(text) => match text.parse::<NValue>()?.check(n)? {
            NValue::Finite(v) => v,
            NValue::Infinity => {
                return Err(Failure::Usage("E_BAD_N: bgcheck needs a finite N".into()))
            }
        },
        None => n as f64 + 2.0,
    };
    let k = match a.k {
        Some(k) => k,
        None => corollary_k(a.metric, n, big_n)?,
    };
    let radii = parse_list(&a.radii)?;
    let samples = a.samples.unwrap_or_else(|| default_samples(n));
    let bg = bishop_gromov_check(a.metric, &body, &x, big_n, k, &radii, samples, a.seed)?;
    let rows: Vec<Report> = bg
        .rows
        .iter()
        .map(|r| {
            Report::new()
                .with("r", r.radius)
                .with("volume", r.volume)
                .with("std_error", r.std_error)
                .with("model", r.model)
                .with("ratio", r.ratio)
                .with("ratio_error", r.ratio_error)
        })
        .collect();
    let violations: Vec<Report> = bg
        .violations
        .iter()
        .map(|v| {
            Report::new()
                .with("from_r", v.from_radius)
                .with("to_r", v.to_radius)
                .with("increase", v.increase)
                .with("threshold", v.threshold)
        })
        .collect();
    let count = violations.len();
    let report = header("bgcheck", Some(a.metric), &body)
        .with("center", vector(&x))
        .with("N", big_n)
        .with("K", k)
        .with("samples", samples)
        .with("seed", a.seed)
        .with("rows", rows)
        .with("violation_count", count)
        .with("violations", violations)
        .with("summary", format!("{count} violations"));
    Ok(Outcome {
        report,
        passed: !a.strict || count == 0,
    })
}

fn tensor(a: &TensorArgs) -> Run {
    let tv = tangent(&a.point, &a.vector)?;
    let body = load_body(&a.common, Some(tv.x.len()))?;
    let s = scheme(a.fd_step, None)?;
    let f = finsler_norm(a.metric, &body, &tv)?;
    let exact = metric_tensor_graph_oracle(a.metric, &body, &tv)?;
    let mut routes = vec![(TensorRoute::GraphJet, "graph", exact.clone())];
    routes.push((
        TensorRoute::Vertical,
        "vertical",
        metric_tensor_by(TensorRoute::Vertical, a.metric, &body, &tv, &s)?,
    ));
    if a.metric == MetricKind::Funk {
        routes.push((
            TensorRoute::Horizontal,
            "horizontal",
            metric_tensor_by(TensorRoute::Horizontal, a.metric, &body, &tv, &s)?,
        ));
    }
    let mut per_route = Vec::new();
    let mut worst: f64 = 0.0;
    for (_, name, g) in &routes {
        let disc = fhgeom::linalg::rel_frobenius(g, &exact);
        worst = worst.max(disc);
        per_route.push(
            Report::new()
                .with("route", *name)
                .with("g", matrix(g))
                .with("g_vv", g.inner(&tv.v, &tv.v))
                .with("rel_frobenius_vs_graph", disc),
        );
    }
    let report = header("tensor", Some(a.metric), &body)
        .with("x", vector(&tv.x))
        .with("v", vector(&tv.v))
        .with("F", f)
        .with("F_squared", f * f)
        .with("g", matrix(&exact))
        .with("log_det", exact.log_det())
        .with("routes", per_route)
        .with("max_route_discrepancy", worst);
    ok(report)
}

fn ricci_cmd(a: &RicciArgs) -> Run {
    let tv = tangent(&a.point, &a.vector)?;
    let body = load_body(&a.common, Some(tv.x.len()))?;
    let r = ricci_by(
        TensorRoute::GraphJet,
        a.metric,
        &body,
        &tv,
        &scheme(a.fd_step, a.tol)?,
    )?;
    let f = finsler_norm(a.metric, &body, &tv)?;
    let n1 = body.dim() as f64 - 1.0;
    let expected = match a.metric {
        MetricKind::Hilbert => -n1,
        _ => -n1 / 4.0,
    } * f
        * f;
    let report = header("ricci", Some(a.metric), &body)
        .with("x", vector(&tv.x))
        .with("v", vector(&tv.v))
        .with("F", f)
        .with("ricci", r.ricci_value)
        .with("expected", expected)
        .with("deviation", (r.ricci_value - expected).abs())
        .with("christoffel_norm", r.christoffel_norm)
        .with("stencil_step", r.stencil_step)
        .with("estimated_error", r.estimated_error);
    ok(report)
}

fn domain_info(a: &DomainInfoArgs) -> Run {
    let body = load_body(&a.common, None)?;
    let (lo, hi) = body.bounding_box();
    let margin = body.strong_convexity_margin(a.samples, a.seed);
    let report = header("domain-info", None, &body)
        .with("dim", body.dim())
        .with("bbox_lo", vector(lo))
        .with("bbox_hi", vector(hi))
        .with("interior_point", vector(body.interior_point()))
        .with("diameter", body.diameter())
        .with("strong_convexity_margin", margin)
        .with("samples", a.samples)
        .with("seed", a.seed)
        .with("strongly_convex", margin > 1e-3);
    ok(report)
}
