//! Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use anticoherence::catalog::{self, AppendixState};
use anticoherence::majorana::{points_to_state, state_to_points};
use anticoherence::measures::{a_measure, measure_profile, MeasureKind};
use anticoherence::reductions::{
    brute_force_reduced_density, purity_from_coefficients, purity_via_spin_expectations, reduced_density, spectrum,
};
use anticoherence::search::{gmax_table, maximize_measure, GmaxConfig};
use anticoherence::spin::rotate;
use anticoherence::{Complex64, Direction, SpinQuantumNumber, SpinState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use MeasureKind::{Bures, HilbertSchmidt, Purity, Trace, Variance};

fn spin(two_j: u32) -> SpinQuantumNumber {
    SpinQuantumNumber::new(two_j).unwrap()
}

/// Collects failures of one criterion and prints its verdict line.
struct Criterion {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    checks: usize,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Self { id, title, failures: Vec::new(), checks: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn close(&mut self, actual: f64, expected: f64, tol: f64, what: impl FnOnce() -> String) {
        let ok = (actual - expected).abs() <= tol;
        self.check(ok, || format!("{}: got {actual:.15e}, expected {expected:.15e} (tol {tol:e})", what()));
    }

    fn finish(self, detail: &str) {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("[{verdict}] AC-{} {} ({} checks", self.id, self.title, self.checks);
        if !detail.is_empty() {
            line.push_str(&format!("; {detail}"));
        }
        line.push(')');
        if let Some(first) = self.failures.first() {
            line.push_str(&format!(" first failure: {first}; {} failing", self.failures.len()));
        }
        // Written straight to stdout so the line survives test output capture.
        let mut out = std::io::stdout().lock();
        writeln!(out, "{line}").unwrap();
        out.flush().unwrap();
        assert!(self.failures.is_empty(), "{line}");
    }
}

fn valid_orders(s: SpinQuantumNumber) -> std::ops::Range<usize> {
    1..s.n()
}

#[test]
fn ac01_reference_value_regression() {
    let started = std::time::Instant::now();
    let mut c = Criterion::new(1, "reference-value regression");
    for two_j in 2..=20 {
        let s = spin(two_j);
        let cat = catalog::cat(s).unwrap();
        for kind in MeasureKind::ALL {
            c.close(a_measure(&cat, 1, kind).unwrap(), 1.0, 1e-12, || format!("cat 2j={two_j} {kind}"));
        }
        let j = s.j();
        let near = SpinState::basis(s, -(two_j as i64) + 2).unwrap();
        for kind in [Variance, Purity] {
            let expected = (2.0 * j - 1.0) / (j * j);
            c.close(a_measure(&near, 1, kind).unwrap(), expected, 1e-12, || format!("|j,-j+1> 2j={two_j} {kind}"));
        }
    }
    let cat32 = catalog::cat(spin(3)).unwrap();
    let bures = (1.0 + 2f64.sqrt() - 3f64.sqrt()) / 2.0;
    for (kind, expected) in [(Purity, 0.75), (HilbertSchmidt, 0.5), (Trace, 0.5), (Bures, bures)] {
        c.close(a_measure(&cat32, 2, kind).unwrap(), expected, 1e-12, || format!("cat 3/2 t=2 {kind}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let third = [
        (HilbertSchmidt, 1.0 - 1.0 / 3f64.sqrt()),
        (Trace, 1.0 / 3.0),
        (Bures, 1.0 - (2.0 - 2f64.sqrt()).sqrt()),
    ];
    for _ in 0..50 {
        let mu = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let psi = catalog::mu_state(mu).unwrap();
        for (kind, expected) in third {
            c.close(a_measure(&psi, 3, kind).unwrap(), expected, 1e-10, || format!("mu={mu} t=3 {kind}"));
        }
    }
    let qq = catalog::qq52().unwrap();
    c.close(a_measure(&qq, 2, Purity).unwrap(), 99.0 / 100.0, 1e-12, || "QQ purity".into());
    // Printed value for the Hilbert-Schmidt measure, kept verbatim.
    c.close(a_measure(&qq, 2, HilbertSchmidt).unwrap(), 9.0 / 100.0, 1e-12, || "QQ hs".into());
    c.close(a_measure(&qq, 2, Bures).unwrap(), 0.9247, 1e-4, || "QQ bures".into());
    let elapsed = started.elapsed().as_secs_f64();
    c.check(elapsed < 10.0, || format!("runtime {elapsed:.1}s >= 10s"));
    c.finish(&format!("{elapsed:.2}s"));
}

#[test]
fn ac02_closed_form_sweeps() {
    let mut c = Criterion::new(2, "closed-form sweep checks");
    for i in 0..100 {
        let theta = PI * i as f64 / 99.0;
        let psi = catalog::spin1(theta).unwrap();
        let (r, hs, tr, b) = catalog::spin1_closed_forms(theta);
        for (kind, expected) in [(Purity, r), (HilbertSchmidt, hs), (Trace, tr), (Bures, b)] {
            c.close(a_measure(&psi, 1, kind).unwrap(), expected, 1e-10, || format!("spin1 theta={theta} {kind}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..100 {
        let mu = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let mut closed = catalog::mu_spectrum(mu).to_vec();
        closed.sort_by(|a, b| b.total_cmp(a));
        let numeric = spectrum(&reduced_density(&catalog::mu_state(mu).unwrap(), 2).unwrap()).unwrap();
        for (a, b) in closed.iter().zip(&numeric) {
            c.close(*b, *a, 1e-12, || format!("mu spectrum mu={mu}"));
        }
    }
    c.finish("");
}

#[test]
fn ac03_oracle_equivalence() {
    let started = std::time::Instant::now();
    let mut c = Criterion::new(3, "closed-form reduced density vs brute-force partial trace");
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst = 0.0f64;
    for two_j in 2..=8 {
        for _ in 0..200 {
            let psi = SpinState::random(spin(two_j), &mut rng);
            for t in valid_orders(psi.spin()) {
                let a = reduced_density(&psi, t).unwrap();
                let b = brute_force_reduced_density(&psi, t).unwrap();
                let diff = a.max_abs_diff(&b);
                worst = worst.max(diff);
                c.check(diff < 1e-12, || format!("2j={two_j} t={t} diff {diff:e}"));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    c.check(elapsed < 60.0, || format!("runtime {elapsed:.1}s >= 60s"));
    c.finish(&format!("max diff {worst:.1e}, {elapsed:.2}s"));
}

#[test]
fn ac04_route_equivalence() {
    let mut c = Criterion::new(4, "purity route equivalence and HS identity");
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for i in 0..500 {
        let two_j = 3 + (i % 8) as u32;
        let psi = SpinState::random(spin(two_j), &mut rng);
        for t in valid_orders(psi.spin()) {
            let coeff = purity_from_coefficients(&psi, t).unwrap();
            let spec: f64 = spectrum(&reduced_density(&psi, t).unwrap()).unwrap().iter().map(|l| l * l).sum();
            c.close(spec, coeff, 1e-10, || format!("spectrum route 2j={two_j} t={t}"));
            if t <= 2 {
                let via_j = purity_via_spin_expectations(&psi, t).unwrap();
                c.close(via_j, coeff, 1e-10, || format!("spin route 2j={two_j} t={t}"));
            }
            let ar = a_measure(&psi, t, Purity).unwrap();
            let hs = a_measure(&psi, t, HilbertSchmidt).unwrap();
            c.close(hs, 1.0 - (1.0 - ar).sqrt(), 1e-12, || format!("HS identity 2j={two_j} t={t}"));
        }
    }
    c.finish("");
}

fn catalog_states() -> Vec<(String, SpinState)> {
    let mut out = vec![
        ("tetrahedron".to_string(), catalog::tetrahedron().unwrap()),
        ("octahedron".to_string(), catalog::octahedron().unwrap()),
        ("psi52".to_string(), catalog::psi52_counterexample().unwrap()),
        ("qq52".to_string(), catalog::qq52().unwrap()),
        ("icosa(pi/2)".to_string(), catalog::icosa(FRAC_PI_2).unwrap()),
        ("mu(0.4+0.7i)".to_string(), catalog::mu_state(Complex64::new(0.4, 0.7)).unwrap()),
        ("spin1(2.0)".to_string(), catalog::spin1(2.0).unwrap()),
    ];
    for two_j in 2..=12 {
        out.push((format!("cat 2j={two_j}"), catalog::cat(spin(two_j)).unwrap()));
        out.push((format!("t1-max 2j={two_j}"), catalog::t1_max_degenerate(spin(two_j)).unwrap()));
        out.push((format!("ghz 2j={two_j}"), catalog::ghz(spin(two_j), 0.6).unwrap()));
    }
    for g in 1..=4 {
        out.push((format!("t2-family g={g}"), catalog::t2_family(g).unwrap()));
    }
    for id in AppendixState::ALL {
        out.push((format!("{id:?}"), catalog::appendix_state(id).unwrap()));
    }
    out
}

#[test]
fn ac05_axiom_battery() {
    let mut c = Criterion::new(5, "invariance, range and t > j bound");
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut states: Vec<(String, SpinState)> = Vec::new();
    for two_j in 2..=10 {
        for k in 0..5 {
            states.push((format!("random 2j={two_j} #{k}"), SpinState::random(spin(two_j), &mut rng)));
        }
    }
    let catalog = catalog_states();
    for (name, psi) in states.iter().chain(&catalog) {
        let s = psi.spin();
        let reference: Vec<(usize, MeasureKind, f64)> = valid_orders(s)
            .flat_map(|t| MeasureKind::ALL.into_iter().filter(move |k| k.is_valid_at(t)).map(move |k| (t, k)))
            .map(|(t, k)| (t, k, a_measure(psi, t, k).unwrap()))
            .collect();
        for &(t, kind, value) in &reference {
            c.check((0.0..=1.0).contains(&value), || format!("{name} t={t} {kind} = {value} outside [0,1]"));
            if 2 * t > s.n() {
                c.check(value < 1.0 - 1e-8 || kind == Variance, || format!("{name} t={t} > j but {kind} = {value}"));
            }
        }
        for _ in 0..20 {
            let axis = Direction::random(&mut rng);
            let angle = rng.random_range(0.0..2.0 * PI);
            let phase = rng.random_range(0.0..2.0 * PI);
            let moved = rotate(psi, axis, angle).unwrap().with_phase(phase);
            for &(t, kind, value) in &reference {
                let v = a_measure(&moved, t, kind).unwrap();
                c.close(v, value, 1e-10, || format!("{name} rotated t={t} {kind}"));
            }
        }
    }
    c.finish(&format!("{} states", states.len() + catalog.len()));
}

#[test]
fn ac06_counterexample() {
    let mut c = Criterion::new(6, "HS and trace measures increase from t=1 to t=2");
    let psi = catalog::psi52_counterexample().unwrap();
    let mut detail = Vec::new();
    for kind in [HilbertSchmidt, Trace] {
        let a1 = a_measure(&psi, 1, kind).unwrap();
        let a2 = a_measure(&psi, 2, kind).unwrap();
        c.check(a2 - a1 > 1e-6, || format!("{kind}: A1 = {a1}, A2 = {a2}"));
        detail.push(format!("{kind} {a1:.6} < {a2:.6}"));
    }
    c.finish(&detail.join(", "));
}

#[test]
fn ac07_catalog_anticoherence() {
    let mut c = Criterion::new(7, "catalog anticoherence");
    let exact = |c: &mut Criterion, name: String, psi: &SpinState, t: usize| {
        for kind in MeasureKind::SPECTRAL {
            let v = a_measure(psi, t, kind).unwrap();
            c.close(v, 1.0, 1e-10, || format!("{name} t={t} {kind}"));
        }
    };
    exact(&mut c, "tetrahedron".into(), &catalog::tetrahedron().unwrap(), 2);
    exact(&mut c, "octahedron".into(), &catalog::octahedron().unwrap(), 3);
    for theta in [0.0, 0.3, 0.7, 1.1, 1.5] {
        exact(&mut c, format!("icosa({theta})"), &catalog::icosa(theta).unwrap(), 4);
    }
    exact(&mut c, "icosa(pi/2)".into(), &catalog::icosa(FRAC_PI_2).unwrap(), 5);
    for g in 1..=6 {
        exact(&mut c, format!("t2-family g={g}"), &catalog::t2_family(g).unwrap(), 2);
    }
    for two_j in 2..=20 {
        exact(&mut c, format!("t1-max 2j={two_j}"), &catalog::t1_max_degenerate(spin(two_j)).unwrap(), 1);
    }
    for id in AppendixState::ALL {
        let psi = catalog::appendix_state(id).unwrap();
        let v = a_measure(&psi, id.order(), Purity).unwrap();
        c.close(v, 1.0, 1e-9, || format!("appendix {id:?} purity t={}", id.order()));
    }
    c.finish("");
}

#[test]
fn ac08_search_reproduction() {
    let started = std::time::Instant::now();
    let mut c = Criterion::new(8, "g_max table for j <= 3, t <= 3 and the most 2-anticoherent j=5/2 state");
    // (t, 2j, g_max)
    let expected = [
        (1, 2, 1),
        (1, 3, 1),
        (1, 4, 2),
        (1, 5, 2),
        (1, 6, 3),
        (2, 3, 0),
        (2, 4, 1),
        (2, 5, 0),
        (2, 6, 1),
        (3, 4, 0),
        (3, 5, 0),
        (3, 6, 1),
    ];
    let table = gmax_table(6, 3, &GmaxConfig { seed: 2024, ..GmaxConfig::default() }).unwrap();
    c.check(table.len() == expected.len(), || format!("table has {} rows", table.len()));
    for (t, two_j, g) in expected {
        match table.iter().find(|e| e.t == t && e.two_j == two_j) {
            Some(entry) => c.check(entry.g_max == g, || format!("t={t} 2j={two_j}: g_max {} != {g}", entry.g_max)),
            None => c.check(false, || format!("missing t={t} 2j={two_j}")),
        }
    }
    let best = maximize_measure(spin(5), 2, Purity, 32, 7).unwrap();
    c.close(best.best_value, 0.99, 1e-6, || "max purity measure j=5/2 t=2".into());
    let found = spectrum(&reduced_density(&best.best_state, 2).unwrap()).unwrap();
    let reference = spectrum(&reduced_density(&catalog::qq52().unwrap(), 2).unwrap()).unwrap();
    for (a, b) in found.iter().zip(&reference) {
        c.close(*a, *b, 1e-6, || "rho_2 spectrum vs qq52".into());
    }
    let hole = table.iter().find(|e| e.t == 2 && e.two_j == 5).map(|e| e.best_value).unwrap_or(f64::NAN);
    c.finish(&format!("j=5/2 t=2 best {hole:.8}, {:.1}s", started.elapsed().as_secs_f64()));
}

#[test]
fn ac09_ghz_scaling() {
    let mut c = Criterion::new(9, "generalized GHZ asymptotics and j=1000 sweep");
    for two_j in [4u32, 20, 200] {
        let s = spin(two_j);
        let j = s.j();
        for eps in [0.02, 0.04, 0.06, 0.08, 0.1] {
            let a = a_measure(&catalog::ghz(s, eps).unwrap(), 1, Purity).unwrap();
            let ratio = a / ((2.0 * j - 1.0) * eps.powi(4) / 4.0);
            c.check((0.9..=1.1).contains(&ratio), || format!("2j={two_j} eps={eps} small-eps ratio {ratio}"));
            let delta = eps;
            let a = a_measure(&catalog::ghz(s, FRAC_PI_2 - delta).unwrap(), 1, Purity).unwrap();
            let ratio = (1.0 - a) / (delta * delta);
            c.check((0.9..=1.1).contains(&ratio), || format!("2j={two_j} eps=pi/2-{delta} ratio {ratio}"));
        }
    }
    let s = spin(2000);
    let mut previous = -1.0;
    let mut monotone = true;
    let mut endpoints = (f64::NAN, f64::NAN);
    for i in 0..=100 {
        let eps = FRAC_PI_2 * i as f64 / 100.0;
        let a = a_measure(&catalog::ghz(s, eps).unwrap(), 1, Purity).unwrap();
        c.check(a.is_finite(), || format!("j=1000 eps={eps} non-finite"));
        monotone &= a >= previous - 1e-12;
        previous = a;
        if i == 0 {
            endpoints.0 = a;
        }
        endpoints.1 = a;
    }
    c.check(monotone, || "j=1000 sweep not monotone".into());
    c.close(endpoints.0, 0.0, 1e-12, || "j=1000 at eps=0".into());
    c.close(endpoints.1, 1.0, 1e-12, || "j=1000 at eps=pi/2".into());
    c.finish("");
}

#[test]
fn ac10_majorana_roundtrip() {
    let mut c = Criterion::new(10, "Majorana roundtrip and rotation equivariance");
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst = 0.0f64;
    for two_j in (2..=12).step_by(2) {
        for i in 0..1000 {
            let psi = SpinState::random(spin(two_j), &mut rng);
            let points = state_to_points(&psi).unwrap();
            let back = points_to_state(&points).unwrap();
            let infidelity = 1.0 - psi.fidelity(&back);
            worst = worst.max(infidelity);
            c.check(infidelity < 1e-8, || format!("2j={two_j} infidelity {infidelity:e}"));
            if i < 10 {
                for _ in 0..10 {
                    let axis = Direction::random(&mut rng);
                    let angle = rng.random_range(0.0..2.0 * PI);
                    let moved = state_to_points(&rotate(&psi, axis, angle).unwrap()).unwrap();
                    c.check(moved.matches(&points.rotated(axis, angle), 1e-6), || {
                        format!("2j={two_j} rotation equivariance")
                    });
                }
            }
        }
    }
    c.finish(&format!("worst infidelity {worst:.1e}"));
}

#[test]
fn ac11_coulomb_states() {
    let started = std::time::Instant::now();
    let mut c = Criterion::new(11, "Coulomb states");
    let four = catalog::coulomb_state(spin(4), 0).unwrap();
    for kind in MeasureKind::SPECTRAL {
        c.close(a_measure(&four, 2, kind).unwrap(), 1.0, 1e-8, || format!("2j=4 {kind}"));
    }
    let big = catalog::coulomb_state(spin(100), 0).unwrap();
    let profile = measure_profile(&big).unwrap();
    let mut lowest = 1.0f64;
    for t in 1..=25 {
        let row = profile.at(t).unwrap();
        for kind in MeasureKind::SPECTRAL {
            let v = row.get(kind).unwrap();
            lowest = lowest.min(v);
            c.check(v >= 0.95, || format!("j=50 t={t} {kind} = {v}"));
        }
    }
    c.finish(&format!("j=50 lowest value for t <= 25: {lowest:.6}, {:.1}s", started.elapsed().as_secs_f64()));
}

#[test]
fn ac12_bures_monotonicity_report() {
    let c = Criterion::new(12, "Bures monotonicity report");
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    let mut rows = vec!["two_j,states,pairs_checked,violations,largest_violation".to_string()];
    let mut summary = Vec::new();
    for two_j in [2u32, 4, 6, 8, 10] {
        let s = spin(two_j);
        let mut violations = 0usize;
        let mut pairs = 0usize;
        let mut largest = 0.0f64;
        for _ in 0..10_000 {
            let psi = SpinState::random(s, &mut rng);
            let values: Vec<f64> = valid_orders(s).map(|t| a_measure(&psi, t, Bures).unwrap()).collect();
            for w in values.windows(2) {
                pairs += 1;
                let excess = w[1] - w[0];
                if excess > 1e-12 {
                    violations += 1;
                    largest = largest.max(excess);
                }
            }
        }
        rows.push(format!("{two_j},10000,{pairs},{violations},{largest:.6e}"));
        summary.push(format!("2j={two_j}: {violations}"));
    }
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("bures_monotonicity.csv");
    std::fs::write(&path, rows.join("\n") + "\n").unwrap();
    c.finish(&format!("violations {}; report {}", summary.join(", "), path.display()));
}
