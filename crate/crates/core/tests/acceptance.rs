//! Acceptance criteria, one line per criterion. Exits non-zero on any failure.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use tripath_core::atlas::{render, sample_atlas, AtlasGrid, Cell, Format};
use tripath_core::classify::{Class, SubclassTable, DEFAULT_TOL};
use tripath_core::hilbert::{hemisphere_project, normalize, RayState, SpherePoint};
use tripath_core::interferometer::{probabilities, verify_closure, Path, PathSystem};
use tripath_core::kd::{
    decompose_outer, extremal_kd_on_circle, inequality_sum, kd_negative_bound, kd_profile, max_violation,
};
use tripath_core::states::{decompose_in_basis, hardy_value, joint_basis, n_state, t_2f_example, theta_state};

use Path::{One, Three, Two, D1, D2, F, P1, P2, S1, S2};

const EXACT: f64 = 1e-12;

/// Collects the individual failures of one criterion.
#[derive(Default)]
struct Report {
    checks: usize,
    failures: Vec<String>,
}

impl Report {
    fn ok(&mut self, cond: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !cond {
            self.failures.push(what());
        }
    }

    fn close(&mut self, name: &str, actual: f64, expected: f64, tol: f64) {
        self.ok((actual - expected).abs() <= tol, || {
            format!("{name}: got {actual:.15}, expected {expected:.15} (tol {tol:e})")
        });
    }
}

fn sys() -> PathSystem {
    PathSystem::standard()
}

fn ray(c: [f64; 3]) -> RayState {
    normalize(c).unwrap()
}

fn random_rays(seed: u64, n: usize) -> Vec<RayState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
            normalize(v).unwrap()
        })
        .collect()
}

fn criterion_1(r: &mut Report) {
    let s = sys();
    let (h, t, x) = (0.5f64.sqrt(), 1.0 / 3f64.sqrt(), 1.0 / 6f64.sqrt());
    let expected: [(Path, [f64; 3]); 10] = [
        (One, [1.0, 0.0, 0.0]),
        (Two, [0.0, 1.0, 0.0]),
        (Three, [0.0, 0.0, 1.0]),
        (S1, [0.0, h, h]),
        (D1, [0.0, h, -h]),
        (F, [t, t, -t]),
        (P1, [2.0 * x, -x, x]),
        (P2, [-x, 2.0 * x, x]),
        (S2, [h, 0.0, h]),
        (D2, [h, 0.0, -h]),
    ];
    for (p, v) in expected {
        let got = s.vector(p);
        let diff = (0..3).map(|d| (got[d] - v[d]).abs()).fold(0.0, f64::max);
        r.ok(diff <= EXACT, || format!("path {p}: {got:?}"));
        r.ok(s.ray(p).approx_eq(&ray(v), EXACT), || format!("ray {p}: {}", s.ray(p)));
    }
    r.ok(verify_closure(&s, EXACT), || "outputs differ from inputs".into());
    for (k, out) in s.outputs().iter().enumerate() {
        for (d, &c) in out.iter().enumerate() {
            let want = if d == k { 1.0 } else { 0.0 };
            r.ok((c.abs() - want).abs() <= EXACT, || format!("output {k} component {d} = {c}"));
        }
    }
}

fn criterion_2(r: &mut Report) {
    let s = sys();
    for (i, v) in [(F, 1.0 / 9.0), (One, 1.0 / 11.0), (Two, 1.0 / 11.0), (S1, 0.1), (S2, 0.1)] {
        r.close(&format!("P({i}|N_{i})"), hardy_value(&s, i).unwrap(), v, EXACT);
    }
}

/// Smallest `<psi|M|psi>` over a 10^6-point orthographic grid of the
/// `c1 >= 0` hemisphere, followed by a 10^6-point grid over the cell around
/// the best coarse point.
fn grid_minimum(s: &PathSystem) -> (f64, f64) {
    let eval = |u: f64, v: f64| -> Option<f64> {
        SpherePoint::new(u, v).lift().map(|psi| inequality_sum(&psi, s))
    };
    let scan = |u0: f64, v0: f64, half: f64, n: usize| -> (f64, f64, f64, usize) {
        let mut best = (f64::INFINITY, u0, v0);
        let mut count = 0;
        for a in 0..n {
            let u = u0 - half + 2.0 * half * a as f64 / (n - 1) as f64;
            for b in 0..n {
                let v = v0 - half + 2.0 * half * b as f64 / (n - 1) as f64;
                if let Some(q) = eval(u, v) {
                    count += 1;
                    if q < best.0 {
                        best = (q, u, v);
                    }
                }
            }
        }
        (best.0, best.1, best.2, count)
    };
    let n = 1130;
    let (coarse, u, v, count) = scan(0.0, 0.0, 1.0, n);
    assert!(count >= 1_000_000, "{count}");
    let step = 2.0 / (n - 1) as f64;
    let (fine, ..) = scan(u, v, step, 1000);
    (coarse, fine)
}

fn criterion_3(r: &mut Report) {
    let s = sys();
    for (i, v) in [(F, 7.0 / 9.0), (One, 9.0 / 11.0), (Two, 9.0 / 11.0), (S1, 0.8), (S2, 0.8)] {
        r.close(&format!("inner sum N_{i}"), inequality_sum(&n_state(&s, i).unwrap().ray, &s), v, EXACT);
    }
    let mv = max_violation(&s);
    r.close("maximal violation", mv.violation, (11.0f64 / 12.0).sqrt() - 0.5, 1e-9);
    let p = probabilities(&mv.state, &s);
    r.close("P(1) at maximum", p.get(One), 0.4676, 5e-4);
    r.close("P(2) at maximum", p.get(Two), 0.4676, 5e-4);
    r.close("P(3) at maximum", p.get(Three), 0.0648, 5e-4);
    let (coarse, fine) = grid_minimum(&s);
    r.ok(coarse >= mv.min_eigenvalue - EXACT, || format!("grid minimum {coarse} below eigenvalue"));
    r.close("grid minimum vs eigenvalue", fine, mv.min_eigenvalue, 1e-6);
}

fn criterion_4(r: &mut Report) {
    let s = sys();
    // each outer probability as printed: two outer terms, then the inner term
    let relations: [(Path, [(Path, Path); 3]); 5] = [
        (One, [(One, F), (One, S2), (One, P2)]),
        (S1, [(S1, S2), (Two, S1), (S1, D2)]),
        (F, [(One, F), (Two, F), (F, Three)]),
        (S2, [(S1, S2), (One, S2), (S2, D1)]),
        (Two, [(Two, F), (Two, S1), (Two, P1)]),
    ];
    let mut worst = 0.0f64;
    for psi in random_rays(0x5eed_0004, 10_000) {
        let p = probabilities(&psi, &s);
        let kd = kd_profile(&psi, &s);
        for (i, terms) in relations {
            let sum: f64 = terms.iter().map(|&(a, b)| kd.get(a, b)).sum();
            worst = worst.max((sum - p.get(i)).abs());
            let lib: f64 = decompose_outer(&psi, &s, i).unwrap().iter().map(|t| t.1).sum();
            worst = worst.max((lib - sum).abs());
        }
        for (pair, v) in kd.iter() {
            let x = s.ray(pair.a).inner(&s.ray(pair.b));
            let rhs = (p.get(pair.a) * p.get(pair.b) * x * x).sqrt();
            worst = worst.max((v.abs() - rhs).abs());
        }
    }
    r.close("worst identity residual over 10^4 states", worst, 0.0, 1e-10);
    for path in Path::ALL {
        let kd = kd_profile(&s.ray(path), &s);
        for (pair, v) in kd.iter() {
            r.ok(v >= -EXACT, || format!("rho{}(|{path}>) = {v}", pair.label()));
        }
    }
}

fn criterion_5(r: &mut Report) {
    let s = sys();
    let kd = |i: Path| kd_profile(&n_state(&s, i).unwrap().ray, &s);
    let n2 = kd(Two);
    for (a, b, v) in [(One, S2, 6.0 / 11.0), (S1, S2, 2.0 / 11.0), (One, F, 3.0 / 11.0)] {
        r.close(&format!("rho({a},{b}|N_2)"), n2.get(a, b), v, EXACT);
    }
    let p2 = probabilities(&n_state(&s, Two).unwrap().ray, &s).get(Two);
    r.close("rho(2,S1|N_2) = P(2)", n2.get(Two, S1), p2, EXACT);
    r.close("rho(2,P1|N_2) = -P(2)", n2.get(Two, P1), -p2, EXACT);
    r.close("rho(S1,D2|N_2) = -P(2)", n2.get(S1, D2), -p2, EXACT);
    r.close("rho(f,3|N_2) = -P(2)", n2.get(F, Three), -p2, EXACT);
    r.close("P(2|N_2)", p2, 1.0 / 11.0, EXACT);
    let ns1 = kd(S1);
    for (a, b, v) in [(One, F, 0.4), (Two, F, 0.2), (One, S2, 0.4)] {
        r.close(&format!("rho({a},{b}|N_S1)"), ns1.get(a, b), v, EXACT);
    }
    let nf = kd(F);
    for (a, b) in [(S1, S2), (Two, S1), (One, S2)] {
        r.close(&format!("rho({a},{b}|N_f)"), nf.get(a, b), 1.0 / 3.0, EXACT);
    }
}

fn criterion_6(r: &mut Report) {
    let s = sys();
    let th = |k: Path| theta_state(&s, k).unwrap().ray;
    r.ok(th(D2).approx_eq(&ray([1.0, -1.0, 1.0]), EXACT), || format!("theta_D2 = {}", th(D2)));

    type Row = (Path, Path, f64);
    let tables: [(Path, Vec<Row>); 3] = [
        (D1, vec![(Two, S1, 1.0 / 3.0), (One, F, 1.0 / 9.0), (S1, D2, 1.0 / 3.0), (One, P2, 2.0 / 9.0)]),
        (Three, vec![(One, S2, 0.25), (Two, S1, 0.25), (One, P2, 0.25), (Two, P1, 0.25)]),
        (P1, vec![(One, F, 0.2), (S1, S2, 0.1), (F, Three, 0.4), (S1, D2, 0.3)]),
    ];
    for (k, rows) in tables {
        let kd = kd_profile(&th(k), &s);
        let mut sum = 0.0;
        for (a, b, v) in rows {
            r.close(&format!("rho({a},{b}|theta_{k})"), kd.get(a, b), v, EXACT);
            sum += kd.get(a, b);
        }
        r.close(&format!("quasiclassical sum theta_{k}"), sum, 1.0, EXACT);
    }
    for (k, a, b, m) in [
        (Three, S1, S2, 1.0 / 8.0),
        (D1, Two, F, 1.0 / 9.0),
        (P1, One, S2, 0.1),
        (P2, Two, S1, 0.1),
        (D2, One, F, 1.0 / 9.0),
    ] {
        r.close(&format!("rho({a},{b}|theta_{k})"), kd_profile(&th(k), &s).get(a, b), -m, EXACT);
    }
}

fn criterion_7(r: &mut Report) {
    let s = sys();
    r.close("bound (S1,S2)", kd_negative_bound(&s.ray(S1), &s.ray(S2)).unwrap(), 0.125, EXACT);
    for (a, b) in [(One, F), (One, S2), (S1, S2), (Two, S1), (Two, F)] {
        let (ra, rb) = (s.ray(a), s.ray(b));
        let x = ra.inner(&rb).abs();
        let e = extremal_kd_on_circle(&ra, &rb, 100_000).unwrap();
        r.close(&format!("min rho({a},{b})"), e.max_negative.value, -x * (1.0 - x) / 2.0, 1e-6);
        r.close(&format!("max rho({a},{b})"), e.max_positive.value, x * (1.0 + x) / 2.0, 1e-6);
        r.close(
            &format!("bound ({a},{b})"),
            kd_negative_bound(&ra, &rb).unwrap(),
            x * (1.0 - x) / 2.0,
            EXACT,
        );
    }
}

fn criterion_8(r: &mut Report) {
    let s = sys();
    let [q, t1, t2] = joint_basis(&s).unwrap();
    let (q, t1, t2) = (q.ray, t1.ray, t2.ray);
    r.ok(q.approx_eq(&ray([2.0, -1.0, 3.0]), EXACT), || format!("Q(S2,D1) = {q}"));
    r.ok(t1.approx_eq(&ray([0.0, 3.0, 1.0]), EXACT), || format!("T(2,S1) = {t1}"));
    r.ok(t2.approx_eq(&ray([5.0, 1.0, -3.0]), EXACT), || format!("T(1,f) = {t2}"));
    for (name, a, b) in [("Q.T(2,S1)", q, t1), ("Q.T(1,f)", q, t2), ("T(2,S1).T(1,f)", t1, t2)] {
        r.close(name, a.inner(&b), 0.0, EXACT);
    }
    for (name, a) in [("Q", q), ("T(2,S1)", t1), ("T(1,f)", t2)] {
        r.close(&format!("|{name}|"), a.inner(&a), 1.0, EXACT);
    }
    r.close("P(T(2,S1)|S1)", t1.overlap(&s.ray(S1)), 0.8, EXACT);
    r.close("P(T(1,f)|f)", t2.overlap(&s.ray(F)), 27.0 / 35.0, EXACT);
    r.close("P(Q(S2,D1)|P1)", q.overlap(&s.ray(P1)), 16.0 / 21.0, EXACT);
    r.close("rho(2,S1|Q)", kd_profile(&q, &s).get(Two, S1), -1.0 / 14.0, EXACT);
    r.close("rho(1,f|Q)", kd_profile(&q, &s).get(One, F), -2.0 / 21.0, EXACT);
    r.close("rho(S2,D1|T(2,S1))", kd_profile(&t1, &s).get(S2, D1), -1.0 / 20.0, EXACT);
    r.close("rho(2,S1|T(1,f))", kd_profile(&t2, &s).get(Two, S1), -1.0 / 35.0, EXACT);
    r.close("rho(S2,D1|T(1,f))", kd_profile(&t2, &s).get(S2, D1), -2.0 / 35.0, EXACT);

    let ex = t_2f_example().ray;
    let p = probabilities(&ex, &s);
    let c = decompose_in_basis(&s, &ex).unwrap();
    r.close("Q coefficient of T(2,f)", c[0] * c[1].signum(), -8.0 / (7.0 * 6f64.sqrt()), EXACT);
    let values = [
        ("P(2|T(2,f))", p.get(Two), 16.0 / 21.0, 0.76),
        ("P(f|T(2,f))", p.get(F), 7.0 / 9.0, 0.78),
        ("P(D1|T(2,f))", p.get(D1), 6.0 / 7.0, 0.86),
        ("P(Q|D1)", q.overlap(&s.ray(D1)), 4.0 / 7.0, 0.57),
        ("P(Q|T(2,f))", q.overlap(&ex), 64.0 / 294.0, 0.22),
        ("P(T(2,S1)|2)", t1.overlap(&s.ray(Two)), 0.9, 0.90),
        ("P(T(2,S1)|T(2,f))", t1.overlap(&ex), 100.0 / 210.0, 0.48),
        ("P(T(1,f)|f)", t2.overlap(&s.ray(F)), 27.0 / 35.0, 0.77),
        ("P(T(1,f)|T(2,f))", t2.overlap(&ex), 225.0 / 735.0, 0.31),
    ];
    for (name, actual, exact, rounded) in values {
        r.close(name, actual, exact, EXACT);
        r.close(&format!("{name} rounded"), actual, rounded, 5e-3);
    }
}

fn criterion_9(r: &mut Report) {
    let s = sys();
    let table = SubclassTable::standard();
    r.ok(table.len() == 31, || format!("{} table entries", table.len()));
    let mut patterns: Vec<String> = table.entries().iter().map(|(_, p)| p.to_string()).collect();
    patterns.sort();
    patterns.dedup();
    r.ok(patterns.len() == 31, || format!("{} distinct patterns", patterns.len()));

    let mut interior = 0;
    let mut rng_states = random_rays(0x5eed_0009, 400_000).into_iter();
    while interior < 100_000 {
        let Some(psi) = rng_states.next() else {
            r.ok(false, || format!("only {interior} interior states drawn"));
            break;
        };
        if kd_profile(&psi, &s).values.iter().any(|v| v.abs() <= 10.0 * DEFAULT_TOL) {
            continue;
        }
        interior += 1;
        match table.classify(&psi, DEFAULT_TOL) {
            Err(e) => r.ok(false, || format!("{psi}: {e}")),
            Ok(res) => {
                r.ok(res.is_singleton(), || format!("{psi}: {:?}", res.labels));
                let label = res.labels[0];
                let sig = (res.pattern.inner_negatives(), res.pattern.outer_negatives());
                r.ok(sig == label.class().signature(), || format!("{psi}: {label} has {sig:?}"));
                if label.class() == Class::N {
                    r.ok(inequality_sum(&psi, &s) < 1.0, || format!("{psi}: N state without violation"));
                }
            }
        }
    }
    let names = |psi: &RayState| -> Vec<String> {
        table.classify(psi, DEFAULT_TOL).unwrap().labels.iter().map(|l| l.to_string()).collect()
    };
    let mut got = names(&n_state(&s, Two).unwrap().ray);
    got.sort();
    r.ok(got == ["B(1,S2)", "N", "V(1)", "V(S2)"], || format!("N_2: {got:?}"));
    let mut got = names(&theta_state(&s, D1).unwrap().ray);
    got.sort();
    r.ok(got == ["Q(1,P2)", "Q(S1,D2)", "X(1,D2)", "X(S1,P2)"], || format!("theta_D1: {got:?}"));
}

fn uniform_region(g: &AtlasGrid, i: usize, j: usize) -> Option<tripath_core::ClassLabel> {
    let n = g.resolution();
    if i == 0 || j == 0 || i + 1 >= n || j + 1 >= n {
        return None;
    }
    let Cell::Region(l) = g.cell(i, j) else { return None };
    for di in 0..3 {
        for dj in 0..3 {
            if g.cell(i + di - 1, j + dj - 1) != Cell::Region(l) {
                return None;
            }
        }
    }
    Some(l)
}

/// Image of a hemisphere point under `|1> <-> |2>`.
fn mirror_point(p: SpherePoint) -> SpherePoint {
    let psi = p.lift().unwrap().coeffs();
    hemisphere_project(&normalize([psi[1], psi[0], psi[2]]).unwrap())
}

fn criterion_10(r: &mut Report) {
    let g = sample_atlas(512, DEFAULT_TOL).unwrap();
    let counts = g.label_counts();
    r.ok(counts.len() == 31, || format!("{} labels at 512", counts.len()));

    let a = render(&g, Format::Raster);
    let b = render(&sample_atlas(512, DEFAULT_TOL).unwrap(), Format::Raster);
    r.ok(a == b, || "raster differs between runs".into());
    r.ok(a.len() == b"P6\n512 512\n255\n".len() + 3 * 512 * 512, || format!("raster size {}", a.len()));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let mut pairs = 0;
    let mut attempts = 0;
    while pairs < 1000 && attempts < 1_000_000 {
        attempts += 1;
        let (i, j) = (rng.random_range(0..512), rng.random_range(0..512));
        let Some(src) = uniform_region(&g, i, j) else { continue };
        let Some((mi, mj)) = g.pixel_of(mirror_point(g.point(i, j))) else { continue };
        let Some(dst) = uniform_region(&g, mi, mj) else { continue };
        pairs += 1;
        r.ok(dst == src.mirror(), || format!("({i},{j}) {src} -> ({mi},{mj}) {dst}"));
    }
    r.ok(pairs == 1000, || format!("only {pairs} mirror pairs sampled"));
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn(&mut Report));
    let criteria: [Criterion; 10] = [
        ("cascade closure", criterion_1),
        ("Hardy values", criterion_2),
        ("inequality sums and maximal violation", criterion_3),
        ("KD identities", criterion_4),
        ("N-state KD tables", criterion_5),
        ("theta-state KD tables", criterion_6),
        ("extremal KD bounds", criterion_7),
        ("joint measurement basis", criterion_8),
        ("classification", criterion_9),
        ("atlas", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut report = Report::default();
        run(&mut report);
        let status = if report.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2}: {status} {name} ({} checks, {:.2?})",
            k + 1,
            report.checks,
            start.elapsed()
        );
        for f in report.failures.iter().take(10) {
            println!("    {f}");
        }
        if !report.failures.is_empty() {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
