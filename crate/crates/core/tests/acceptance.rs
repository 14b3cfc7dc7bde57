//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits non-zero if any criterion fails.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rbf_euler::analysis::{
    convergence_study, local_defect, stability_scan, verify_error_bound, ConvergenceReport,
    DEFAULT_RECT,
};
use rbf_euler::problems::{ex1, ex2, ex3, ex4, IvpProblem};
use rbf_euler::rbf::{evaluate_interpolant, interpolate_general, two_point_weights};
use rbf_euler::shape::{eps2_exact, eps2_fourth_order, select_consistent_root};
use rbf_euler::{
    integrate, step, Execution, Guard, KernelFamily, LRule, SchemeKind, ShapePolicy, ShapeSquared,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const DOUBLING: [usize; 6] = [10, 20, 40, 80, 160, 320];
const EX3_N: [usize; 6] = [200, 400, 800, 1600, 3200, 6400];
const EX4_N: [usize; 10] = [10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000];

const EX1_EULER: [f64; 6] = [
    0.018287121529848,
    0.008895076334408,
    0.004388827380214,
    0.002180125588386,
    0.001086537438631,
    0.000542393094490,
];
const EX3_EULER: [f64; 6] = [
    0.992928300529281,
    0.986794866203422,
    0.974934408048963,
    0.952262436431508,
    0.910174769390209,
    0.836481000589044,
];
const EX1_IMQ: [f64; 6] = [
    0.004359450155230,
    0.001093900148224,
    0.000273574228572,
    0.000068383354031,
    0.000017093255390,
    0.000004272912760,
];
const EX1_IQ: [f64; 6] = [
    0.003796432501710,
    0.000944949927189,
    0.000235395279817,
    0.000058726355740,
    0.000014665313947,
    0.000003664237210,
];
const EX2_IMQ: [f64; 6] = [
    0.008113825603093,
    0.002192315187090,
    0.000570268629560,
    0.000145465457719,
    0.000036737092202,
    0.000009231163763,
];
const EX2_IQ: [f64; 6] = [
    0.008429894186101,
    0.002251112343783,
    0.000582515300086,
    0.000148226787150,
    0.000037390349041,
    0.000009389875731,
];

fn study(p: &IvpProblem, s: SchemeKind, pol: &ShapePolicy, n: &[usize]) -> ConvergenceReport {
    convergence_study(p, s, pol, n, Execution::default()).expect("study runs")
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn euler_goldens() -> Outcome {
    let pol = ShapePolicy::default();
    let r1 = study(&ex1(), SchemeKind::Euler, &pol, &DOUBLING);
    let r3 = study(&ex3(), SchemeKind::Euler, &pol, &EX3_N);
    let d1 = r1
        .errors
        .iter()
        .zip(EX1_EULER)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let d3 = r3
        .errors
        .iter()
        .zip(EX3_EULER)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    check(
        d1 <= 1e-12 && d3 <= 1e-10,
        format!("max |Δ| ex1 {d1:.1e} (tol 1e-12), ex3 {d3:.1e} (tol 1e-10)"),
    )
}

fn rbf_orders() -> Outcome {
    let pol = ShapePolicy::finite_difference();
    let cases = [
        ("ex1", ex1(), SchemeKind::Imq, EX1_IMQ),
        ("ex1", ex1(), SchemeKind::Iq, EX1_IQ),
        ("ex2", ex2(), SchemeKind::Imq, EX2_IMQ),
        ("ex2", ex2(), SchemeKind::Iq, EX2_IQ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (id, p, s, table) in cases {
        let r = study(&p, s, &pol, &DOUBLING);
        let order = r.finest_order().unwrap();
        let worst = r
            .errors
            .iter()
            .zip(table)
            .map(|(e, t)| (e / t - 1.0).abs())
            .fold(0.0, f64::max);
        ok &= (order - 2.0).abs() <= 0.02 && worst <= 0.25;
        parts.push(format!(
            "{id} {s} order {order:.4} max dev {:.1}%",
            100.0 * worst
        ));
    }
    check(ok, parts.join("; "))
}

fn stiff_trend() -> Outcome {
    let pol = ShapePolicy::finite_difference();
    let p = ex3();
    let imq = study(&p, SchemeKind::Imq, &pol, &EX3_N)
        .finest_order()
        .unwrap();
    let iq = study(&p, SchemeKind::Iq, &pol, &EX3_N)
        .finest_order()
        .unwrap();
    let eu = study(&p, SchemeKind::Euler, &pol, &EX3_N)
        .finest_order()
        .unwrap();
    check(
        (imq - 1.95).abs() <= 0.05 && (iq - 1.95).abs() <= 0.05 && eu < 0.2,
        format!("orders 3200->6400: imq {imq:.4}, iq {iq:.4}, euler {eu:.4}"),
    )
}

fn ex4_guarded() -> Outcome {
    let pol = ShapePolicy::finite_difference().with_guard(Guard::threshold(1.0, LRule::InvSqrtH));
    let p = ex4();
    let imq = study(&p, SchemeKind::Imq, &pol, &EX4_N).slope(100).unwrap();
    let iq = study(&p, SchemeKind::Iq, &pol, &EX4_N).slope(100).unwrap();
    let inside = |s: f64| (-2.2..=-1.3).contains(&s);
    check(
        inside(imq) && inside(iq),
        format!("ln-ln slope over N>=100: imq {imq:.3}, iq {iq:.3}"),
    )
}

fn ulp_distance(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    if a.signum() != b.signum() {
        return u64::MAX;
    }
    a.to_bits().abs_diff(b.to_bits())
}

fn reduction() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0u64;
    for _ in 0..1000 {
        let u: f64 = rng.gen_range(-10.0..10.0);
        let f: f64 = rng.gen_range(-10.0..10.0);
        let h: f64 = 10f64.powf(rng.gen_range(-6.0..0.0));
        let s = SchemeKind::ALL[rng.gen_range(0..SchemeKind::ALL.len())];
        let euler = u + h * f;
        let got = step(s, u, f, h, ShapeSquared::ZERO).unwrap();
        worst = worst.max(ulp_distance(got, euler));
    }
    check(
        worst <= 2,
        format!("1000 samples, worst distance {worst} ulp"),
    )
}

fn consistency_limits() -> Outcome {
    let p = ex1();
    let d = |k| p.derivative(0.0, k).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (family, limit, minus_limit) in [
        (KernelFamily::Imq, -2.0, 4.0 / 3.0),
        (KernelFamily::Iq, -1.0, 1.0),
    ] {
        let mut errs = Vec::new();
        for h in [1e-2, 1e-3, 1e-4] {
            let roots = eps2_fourth_order(family, d(0), d(1), d(2), d(3), d(4), h).unwrap();
            let root = select_consistent_root(roots, d(0)).unwrap();
            let err = (root.0 - limit).abs();
            ok &= err <= 10.0 * h;
            errs.push(err);
            if h == 1e-3 {
                let scaled = h * h * roots.1 .0;
                ok &= (scaled - minus_limit).abs() <= 1e-2;
                parts.push(format!("{family} h²ε²⁻ {scaled:.5}"));
            }
        }
        ok &= errs.windows(2).all(|w| w[1] < w[0]);
        parts.push(format!(
            "{family} root err {:.1e}/{:.1e}/{:.1e}",
            errs[0], errs[1], errs[2]
        ));
    }
    check(ok, parts.join("; "))
}

fn truncation_ratio() -> Outcome {
    let p1 = ex1();
    let (u, u2) = (p1.exact(0.0).unwrap(), p1.derivative(0.0, 2).unwrap());
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, fam) in [
        (SchemeKind::Imq, KernelFamily::Imq),
        (SchemeKind::Iq, KernelFamily::Iq),
    ] {
        let e = eps2_exact(fam, u, u2);
        let h = 1e-2;
        let ratio = local_defect(&p1, s, 0.0, h, e).unwrap()
            / local_defect(&p1, s, 0.0, h / 2.0, e).unwrap();
        ok &= (3.6..=4.4).contains(&ratio);
        parts.push(format!("ex1 {s} τ(h)/τ(h/2) {ratio:.3}"));
    }
    let p4 = ex4();
    let h = 1e-4;
    let tau = local_defect(&p4, SchemeKind::Imq, 0.0, h, ShapeSquared::ZERO).unwrap();
    let rel = (tau / h) / (p4.derivative(0.0, 2).unwrap() / 2.0) - 1.0;
    ok &= rel.abs() <= 0.05;
    parts.push(format!("ex4 ε²=0 τ/h vs u''/2 rel dev {rel:.1e}"));
    check(ok, parts.join("; "))
}

/// Largest `|∂f/∂u|` sampled on `[a, b] × [lo, hi]` by central differences,
/// where `[lo, hi]` is the exact solution's range widened by `pad`.
fn lipschitz_estimate(p: &IvpProblem, pad: f64) -> f64 {
    let ts: Vec<f64> = (0..=400)
        .map(|i| p.t_start + p.length() * i as f64 / 400.0)
        .collect();
    let us: Vec<f64> = ts.iter().map(|&t| p.exact(t).unwrap()).collect();
    let lo = us.iter().copied().fold(f64::INFINITY, f64::min) - pad;
    let hi = us.iter().copied().fold(f64::NEG_INFINITY, f64::max) + pad;
    let mut l = 0.0f64;
    for &t in &ts {
        for j in 0..=100 {
            let u = lo + (hi - lo) * j as f64 / 100.0;
            let d = 1e-6 * (1.0 + u.abs());
            l = l.max(((p.rhs(t, u + d) - p.rhs(t, u - d)) / (2.0 * d)).abs());
        }
    }
    l
}

fn error_bound() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut worst = 0.0f64;
    for p in [ex1(), ex2(), ex3(), ex4()] {
        let lf = lipschitz_estimate(&p, 0.1);
        for s in [SchemeKind::Euler, SchemeKind::Imq, SchemeKind::Iq] {
            for pol in [ShapePolicy::exact(), ShapePolicy::finite_difference()] {
                for n in [50, 100, 200] {
                    let tr = integrate(&p, s, &pol, n).unwrap();
                    let c = verify_error_bound(&tr, &p, lf).unwrap();
                    count += 1;
                    worst = worst.max(c.ratio);
                    if !c.holds {
                        failures.push(format!("{} {s} {} N={n}", p.id, pol.label()));
                    }
                }
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{count} runs, worst error/bound {worst:.2e}, failing: [{}]",
            failures.join(", ")
        ),
    )
}

fn stability() -> Outcome {
    let exec = Execution::default();
    let (nx, ny) = (200, 200);
    let g = stability_scan(SchemeKind::Euler, DEFAULT_RECT, nx, ny, 1, exec).unwrap();
    let r = DEFAULT_RECT;
    let cell =
        ((r.re_max - r.re_min) / (nx - 1) as f64).hypot((r.im_max - r.im_min) / (ny - 1) as f64);
    let mut interior_mismatch = 0;
    for j in 0..ny {
        for i in 0..nx {
            let dist = (g.point(i, j) + 1.0).norm();
            if g.is_stable(i, j) != (dist <= 1.0) && (dist - 1.0).abs() > cell {
                interior_mismatch += 1;
            }
        }
    }
    let mut ok = interior_mismatch == 0;
    let mut parts = vec![format!("euler off-boundary mismatches {interior_mismatch}")];
    for s in [SchemeKind::Imq, SchemeKind::Iq] {
        let g = stability_scan(s, DEFAULT_RECT, nx, ny, 1, exec).unwrap();
        let (i, j) = g.nearest_cell(Complex64::new(-0.1, 0.0)).unwrap();
        let z_near = g.point(i, j);
        let at_point = rbf_euler::analysis::amplification(s, Complex64::new(-0.1, 0.0))
            .unwrap()
            .is_some_and(|r| r.norm() <= 1.0);
        let csv = g.to_csv();
        let valid_csv = csv.lines().next() == Some("re,im,stable")
            && csv.lines().count() == nx * ny + 1
            && csv.lines().skip(1).all(|l| {
                let f: Vec<&str> = l.split(',').collect();
                f.len() == 3
                    && f[0].parse::<f64>().is_ok()
                    && f[1].parse::<f64>().is_ok()
                    && (f[2] == "0" || f[2] == "1")
            });
        let stable = g.stable_count();
        ok &= stable > 0 && at_point && g.is_stable(i, j) && valid_csv;
        parts.push(format!(
            "{s} stable cells {stable}, z=-0.1 stable (cell {:.3}{:+.3}i), csv ok {valid_csv}",
            z_near.re, z_near.im
        ));
    }
    check(ok, parts.join("; "))
}

fn interpolation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x1b7e);
    let mut worst_repro = 0.0f64;
    let mut rejected = 0;
    for trial in 0..500 {
        let n = rng.gen_range(1..=6);
        let family = [
            KernelFamily::Imq,
            KernelFamily::Iq,
            KernelFamily::Mq,
            KernelFamily::Gaussian,
        ][trial % 4];
        let nodes: Vec<f64> = (0..n)
            .map(|k| k as f64 + rng.gen_range(-0.3..0.3))
            .collect();
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let eps2: Vec<ShapeSquared> = (0..n)
            .map(|_| ShapeSquared(rng.gen_range(0.2..3.0)))
            .collect();
        let Ok(lam) = interpolate_general(&nodes, &values, &eps2, family) else {
            rejected += 1;
            continue;
        };
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, v) in nodes.iter().zip(&values) {
            let r = evaluate_interpolant(*x, &nodes, &lam, &eps2, family).unwrap();
            worst_repro = worst_repro.max((r - v).abs() / scale);
        }
    }

    // The dense 2x2 matrix has condition number ~2/(ε²h²); below 1e-4 its
    // rounded entries alone limit the reference to worse than 1e-10.
    let mut worst_pair = 0.0f64;
    for trial in 0..500 {
        let family = if trial % 2 == 0 {
            KernelFamily::Imq
        } else {
            KernelFamily::Iq
        };
        let h = 10f64.powf(rng.gen_range(-3.0..0.0));
        let z = 10f64.powf(rng.gen_range(-4.0..1.0));
        let e = ShapeSquared(z / (h * h));
        let (u0, u1) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let closed = two_point_weights(family, u0, u1, h, e).unwrap();
        let dense = interpolate_general(&[0.0, h], &[u0, u1], &[e, e], family).unwrap();
        let scale = closed.0.abs().max(closed.1.abs());
        worst_pair = worst_pair
            .max((closed.0 - dense[0]).abs() / scale)
            .max((closed.1 - dense[1]).abs() / scale);
    }
    check(
        worst_repro <= 1e-9 && worst_pair <= 1e-10 && rejected < 25,
        format!(
            "reproduction rel err {worst_repro:.1e} ({rejected} ill-conditioned skipped), \
             two-point vs dense rel diff {worst_pair:.1e}"
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("euler golden rows", euler_goldens),
        ("rbf order reproduction", rbf_orders),
        ("stiff-problem trend", stiff_trend),
        ("ex4 guarded convergence", ex4_guarded),
        ("reduction to euler", reduction),
        ("consistency limits", consistency_limits),
        ("truncation ratio", truncation_ratio),
        ("error bound", error_bound),
        ("stability scan", stability),
        ("interpolation", interpolation),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
