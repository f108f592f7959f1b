//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use fhgeom::curvature::{klein_metric, ricci_of_field, MetricField};
use fhgeom::measure::{bishop_gromov_check, corollary_k, forward_ball_volumes, VolumeMethod};
use fhgeom::sampling::{interior_tangent, stream};
use fhgeom::tensor::{okada_sweep, route_agreement, uniform_convexity_estimate};
use fhgeom::wricci::{verify_theorems, weighted_ricci, NValue, Tolerances};
use fhgeom::{
    finsler_norm, funk_distance, hilbert_distance, load_domain, ricci, ConvexBody, DiffScheme,
    DomainSpec, MetricKind, TangentVector,
};
use nalgebra::DVector;

struct Body {
    name: &'static str,
    body: ConvexBody,
}

fn acceptance_bodies() -> Vec<Body> {
    [
        ("unit disk", DomainSpec::unit_ball(2)),
        ("unit ball n=3", DomainSpec::unit_ball(3)),
        ("ellipse(2,1)", DomainSpec::ellipsoid(&[2.0, 1.0])),
        (
            "ellipsoid(2,1,1.5)",
            DomainSpec::ellipsoid(&[2.0, 1.0, 1.5]),
        ),
        ("logsumexp hexagon", DomainSpec::smoothed_polygon(6, 3.0)),
        ("p=4 ball", DomainSpec::pnorm_ball(2, 4.0)),
    ]
    .into_iter()
    .map(|(name, spec)| Body {
        name,
        body: load_domain(&spec).expect("acceptance body loads"),
    })
    .collect()
}

type Outcome = Result<String, String>;

fn report(index: usize, title: &str, started: Instant, outcome: Outcome) -> bool {
    let secs = started.elapsed().as_secs_f64();
    let (tag, detail, pass) = match outcome {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    println!("criterion {index:>2} [{tag}] {title}: {detail} ({secs:.1} s)");
    pass
}

fn judge(pass: bool, detail: String) -> Outcome {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn unit(kind: MetricKind, body: &ConvexBody, tv: &TangentVector) -> TangentVector {
    let f = finsler_norm(kind, body, tv).expect("sample is interior");
    tv.scaled(1.0 / f)
}

fn klein_distance(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let num = 1.0 - x.dot(y);
    let den = ((1.0 - x.norm_squared()) * (1.0 - y.norm_squared())).sqrt();
    (num / den).acosh()
}

fn distances(bodies: &[Body]) -> Outcome {
    let mut klein: f64 = 0.0;
    for b in bodies.iter().filter(|b| b.name.starts_with("unit")) {
        let mut rng = stream(1, 0);
        for _ in 0..1000 {
            let x = b
                .body
                .sample_interior(&mut rng, 0.95)
                .map_err(|e| e.to_string())?;
            let y = b
                .body
                .sample_interior(&mut rng, 0.95)
                .map_err(|e| e.to_string())?;
            let h = hilbert_distance(&b.body, &x, &y).map_err(|e| e.to_string())?;
            klein = klein.max((h - klein_distance(&x, &y)).abs());
        }
    }
    let mut sym: f64 = 0.0;
    for b in bodies {
        let mut rng = stream(2, 0);
        for _ in 0..1000 {
            let x = b
                .body
                .sample_interior(&mut rng, 0.95)
                .map_err(|e| e.to_string())?;
            let y = b
                .body
                .sample_interior(&mut rng, 0.95)
                .map_err(|e| e.to_string())?;
            let h = hilbert_distance(&b.body, &x, &y).map_err(|e| e.to_string())?;
            let f = funk_distance(&b.body, &x, &y).map_err(|e| e.to_string())?
                + funk_distance(&b.body, &y, &x).map_err(|e| e.to_string())?;
            sym = sym.max((2.0 * h - f).abs());
        }
    }
    judge(
        klein <= 1e-10 && sym <= 1e-12,
        format!("max |d_H - klein| = {klein:.2e} (tol 1e-10), max |2 d_H - d_F - d_F'| = {sym:.2e} (tol 1e-12)"),
    )
}

fn okada(bodies: &[Body]) -> Outcome {
    let s = DiffScheme::default();
    let mut worst: f64 = 0.0;
    for b in bodies {
        for kind in [MetricKind::Funk, MetricKind::ReverseFunk] {
            worst = worst.max(
                okada_sweep(kind, &b.body, 100, 3, &s).map_err(|e| format!("{}: {e}", b.name))?,
            );
        }
    }
    judge(
        worst <= 1e-6,
        format!("max residual = {worst:.2e} (tol 1e-6)"),
    )
}

fn tensors(bodies: &[Body]) -> Outcome {
    let s = DiffScheme::default();
    let (mut disc, mut norm) = (0.0f64, 0.0f64);
    for b in bodies {
        for kind in [MetricKind::Funk, MetricKind::Hilbert] {
            let a = route_agreement(kind, &b.body, 50, 4, &s)
                .map_err(|e| format!("{}: {e}", b.name))?;
            disc = disc.max(a.max_discrepancy);
            norm = norm.max(a.max_norm_residual);
        }
    }
    judge(
        disc <= 1e-5 && norm <= 1e-7,
        format!("max route discrepancy = {disc:.2e} (tol 1e-5), max |g_v(v,v) - F^2| / F^2 = {norm:.2e} (tol 1e-7)"),
    )
}

fn ricci_constants(bodies: &[Body]) -> Outcome {
    let s = DiffScheme::default();
    let mut worst_ratio: f64 = 0.0;
    let mut worst_spread: f64 = 0.0;
    let mut notes = Vec::new();
    for b in bodies {
        let n = b.body.dim();
        for kind in [MetricKind::Funk, MetricKind::Hilbert] {
            let (expect, tol) = match kind {
                MetricKind::Funk => (-(n as f64 - 1.0) / 4.0, 1e-3),
                _ => (-(n as f64 - 1.0), if n == 2 { 1e-3 } else { 5e-3 }),
            };
            let (mut lo, mut hi, mut dev) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
            for i in 0..30 {
                let tv = interior_tangent(&b.body, 5, i).map_err(|e| e.to_string())?;
                let r = ricci(kind, &b.body, &unit(kind, &b.body, &tv), &s)
                    .map_err(|e| format!("{} {kind}: {e}", b.name))?
                    .ricci_value;
                lo = lo.min(r);
                hi = hi.max(r);
                dev = dev.max((r - expect).abs());
            }
            worst_ratio = worst_ratio.max(dev / tol);
            if n == 2 {
                worst_spread = worst_spread.max(hi - lo);
            }
            if dev > tol {
                notes.push(format!("{} {kind} deviation {dev:.2e}", b.name));
            }
        }
    }
    let mut klein: f64 = 0.0;
    for n in [2usize, 3] {
        let field = MetricField::synthetic(n, "klein", 0.05, klein_metric);
        let ball = load_domain(&DomainSpec::unit_ball(n)).map_err(|e| e.to_string())?;
        for i in 0..10 {
            let tv = interior_tangent(&ball, 6, i).map_err(|e| e.to_string())?;
            let g = field.eval(&tv.x).map_err(|e| e.to_string())?;
            let v = &tv.v / g.inner(&tv.v, &tv.v).sqrt();
            let r = ricci_of_field(&field, &tv.x, &v, &s).map_err(|e| e.to_string())?;
            klein = klein.max((r.ricci_value + (n as f64 - 1.0)).abs());
        }
    }
    judge(
        worst_ratio <= 1.0 && worst_spread <= 2e-3 && klein <= 1e-4 && notes.is_empty(),
        format!(
            "worst deviation / tol = {worst_ratio:.2e}, spread (n=2) = {worst_spread:.2e} (tol 2e-3), klein gate = {klein:.2e} (tol 1e-4){}",
            if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }
        ),
    )
}

fn theorem(bodies: &[Body], kind: MetricKind) -> Outcome {
    let mut worst: Vec<(String, f64)> = Vec::new();
    let mut failures = Vec::new();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for b in bodies {
        let r = verify_theorems(kind, &b.body, 30, 8, Tolerances::for_kind(kind))
            .map_err(|e| e.to_string())?;
        lo = lo.min(r.ric_inf_range.0);
        hi = hi.max(r.ric_inf_range.1);
        for (name, v) in r.worst {
            match worst.iter_mut().find(|(k, _)| *k == name) {
                Some(slot) => slot.1 = slot.1.max(v),
                None => worst.push((name, v)),
            }
        }
        for f in r.failures {
            failures.push(format!(
                "{} sample {} {} = {:.2e}",
                b.name, f.index, f.check, f.value
            ));
        }
    }
    let mut detail: Vec<String> = worst
        .iter()
        .filter(|(k, _)| {
            ["psi1", "ric_inf", "ric_n"].contains(&k.as_str())
                || k.starts_with("ric_N")
                || k.starts_with("bound")
        })
        .map(|(k, v)| format!("{k} {v:.1e}"))
        .collect();
    if kind == MetricKind::Hilbert {
        detail.push(format!("Ric_inf in [{lo:.4}, {hi:.4}]"));
        let mut center: f64 = 0.0;
        for n in [2usize, 3] {
            let ball = load_domain(&DomainSpec::unit_ball(n)).map_err(|e| e.to_string())?;
            let mut v = vec![0.0; n];
            v[0] = 0.6;
            v[1] = 0.8;
            let tv = TangentVector::new(DVector::zeros(n), DVector::from_vec(v));
            let w = weighted_ricci(
                kind,
                &ball,
                &tv,
                &[NValue::Infinity],
                &DiffScheme::default(),
            )
            .map_err(|e| e.to_string())?;
            center = center.max((w.ric_inf - 2.0).abs());
        }
        detail.push(format!("center |Ric_inf - 2| {center:.1e}"));
        if center > 2e-3 {
            failures.push(format!("center deviation {center:.2e}"));
        }
    }
    let pass = failures.is_empty();
    if !pass {
        detail.push(format!(
            "{} failures, first: {}",
            failures.len(),
            failures[0]
        ));
    }
    judge(pass, format!("max deviations: {}", detail.join(", ")))
}

fn volumes() -> Outcome {
    let disk = load_domain(&DomainSpec::unit_ball(2)).map_err(|e| e.to_string())?;
    let radii = [0.5, 1.0, 2.0];
    let mut worst_z: f64 = 0.0;
    for kind in [MetricKind::Funk, MetricKind::Hilbert] {
        let v = forward_ball_volumes(
            kind,
            &disk,
            &DVector::zeros(2),
            &radii,
            VolumeMethod::MonteCarlo,
            200_000,
            9,
        )
        .map_err(|e| e.to_string())?;
        for est in v {
            let exact = match kind {
                MetricKind::Funk => PI * (-(-est.radius).exp_m1()).powi(2),
                _ => PI * est.radius.tanh().powi(2),
            };
            worst_z = worst_z.max((est.value - exact).abs() / est.std_error);
        }
    }
    judge(
        worst_z <= 3.0,
        format!("max |V - closed form| / std_error = {worst_z:.2} (tol 3)"),
    )
}

fn bishop_gromov() -> Outcome {
    let grid: Vec<f64> = (1..=8).map(|i| 0.25 * i as f64).collect();
    let cases = [
        ("unit disk", DomainSpec::unit_ball(2), vec![0.0, 0.0]),
        (
            "ellipse(2,1)",
            DomainSpec::ellipsoid(&[2.0, 1.0]),
            vec![0.3, 0.2],
        ),
    ];
    let mut total = 0;
    let mut parts = Vec::new();
    for (name, spec, x) in cases {
        let body = load_domain(&spec).map_err(|e| e.to_string())?;
        for kind in [MetricKind::Funk, MetricKind::Hilbert] {
            let big_n = 4.0;
            let k = corollary_k(kind, 2, big_n).map_err(|e| e.to_string())?;
            let r = bishop_gromov_check(
                kind,
                &body,
                &DVector::from_vec(x.clone()),
                big_n,
                k,
                &grid,
                200_000,
                10,
            )
            .map_err(|e| e.to_string())?;
            total += r.violations.len();
            parts.push(format!("{name} {kind} K={k}: {}", r.violations.len()));
        }
    }
    judge(total == 0, format!("violations: {}", parts.join(", ")))
}

fn uniform_convexity() -> Outcome {
    let disk = load_domain(&DomainSpec::unit_ball(2)).map_err(|e| e.to_string())?;
    let center =
        uniform_convexity_estimate(MetricKind::Hilbert, &disk, &DVector::zeros(2), 2000, 11)
            .map_err(|e| e.to_string())?;
    let mut funk = Vec::new();
    for k in 2..=5 {
        let x = DVector::from_vec(vec![1.0 - 10f64.powi(-k), 0.0]);
        funk.push(
            uniform_convexity_estimate(MetricKind::Funk, &disk, &x, 2000, 11)
                .map_err(|e| e.to_string())?,
        );
    }
    let increasing = funk.windows(2).all(|w| w[1] > w[0]);
    let last = funk[funk.len() - 1];
    let list: Vec<String> = funk.iter().map(|v| format!("{v:.3}")).collect();
    judge(
        (center - 1.0).abs() <= 1e-6 && increasing && last > 10.0,
        format!(
            "hilbert center = {center:.9}, funk k=2..5 = [{}]",
            list.join(", ")
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("ellipse.json");
    std::fs::write(&path, DomainSpec::ellipsoid(&[2.0, 1.0]).to_json())
        .map_err(|e| e.to_string())?;
    let run = |threads: &str| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_fhgeom"))
            .args(["verify", "--samples", "12", "--seed", "7", "--domain"])
            .arg(&path)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("verify exited with {}", out.status));
        }
        Ok(out.stdout)
    };
    let a = run("1")?;
    let b = run("4")?;
    let c = run("4")?;
    judge(
        a == b && b == c && !a.is_empty(),
        format!(
            "3 runs of verify (1 and 4 threads), {} bytes each, identical = {}",
            a.len(),
            a == b && b == c
        ),
    )
}

fn main() {
    let started = Instant::now();
    let bodies = acceptance_bodies();
    let mut pass = true;
    let mut step = |i: usize, title: &str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        pass &= report(i, title, t, f());
    };
    step(1, "distance oracles", &|| distances(&bodies));
    step(2, "okada identity", &|| okada(&bodies));
    step(3, "tensor cross-agreement", &|| tensors(&bodies));
    step(4, "ricci constants", &|| ricci_constants(&bodies));
    step(5, "funk weighted ricci", &|| {
        theorem(&bodies, MetricKind::Funk)
    });
    step(6, "hilbert weighted ricci", &|| {
        theorem(&bodies, MetricKind::Hilbert)
    });
    step(7, "ball volumes", &volumes);
    step(8, "bishop-gromov monotonicity", &bishop_gromov);
    step(9, "uniform convexity", &uniform_convexity);
    step(10, "determinism", &determinism);
    println!(
        "acceptance: {} ({:.1} s)",
        if pass {
            "all criteria passed"
        } else {
            "some criteria FAILED"
        },
        started.elapsed().as_secs_f64()
    );
    if !pass {
        std::process::exit(1);
    }
}
