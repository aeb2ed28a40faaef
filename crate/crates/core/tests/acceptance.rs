//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::process::Command;
use std::time::Instant;

use bds::circuit::prepared_state;
use bds::cli::{run_sweep, sweep_csv, SweepConfig, SweepRow};
use bds::measures::{full_report, nonlocality, steering, ResourceReport};
use bds::noise::{apply_channel, composite_damping, decohered_werner_sweep};
use bds::states::{bds_from_spec, bell_state, fidelity, werner, BdsSpec};
use bds::tomography::{sample_counts, tomograph};

const HIERARCHY_FLOOR: f64 = 1e-9;

struct Gate {
    results: Vec<(usize, bool)>,
}

impl Gate {
    fn record(&mut self, id: usize, name: &str, pass: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} [{id}] {name}: {detail}");
        self.results.push((id, pass));
    }
}

fn sqrt3_curve(w: f64) -> f64 {
    ((3f64.sqrt() * w - 1.0) / (3f64.sqrt() - 1.0)).max(0.0)
}

fn sqrt2_curve(w: f64) -> f64 {
    ((2f64.sqrt() * w - 1.0) / (2f64.sqrt() - 1.0)).max(0.0)
}

fn negativity_curve(w: f64) -> f64 {
    ((3.0 * w - 1.0) / 2.0).max(0.0)
}

fn exact_config() -> SweepConfig {
    SweepConfig {
        shots: 0,
        ..SweepConfig::default()
    }
}

fn criterion_1(gate: &mut Gate) {
    let start = Instant::now();
    let mut rng = common::rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let spec = common::random_spec(&mut rng);
        let got = prepared_state(&spec).unwrap();
        let want = bds_from_spec(&spec).unwrap();
        worst = worst.max(got.matrix().max_abs_diff(want.matrix()));
    }
    let secs = start.elapsed().as_secs_f64();
    gate.record(
        1,
        "end-to-end preparation identity",
        worst < 1e-10 && secs < 5.0,
        format!(
            "max entry deviation {worst:.2e} over 200 specs (tol 1e-10), {secs:.2} s (limit 5 s)"
        ),
    );
}

/// Last grid point with `f ≤ floor` and first with `f > floor` must bracket `threshold`.
fn threshold_brackets(f: impl Fn(f64) -> f64, threshold: f64) -> (bool, f64, f64) {
    let step = 1e-3;
    let k0 = (threshold / step).floor() as i64;
    let below = k0 as f64 * step;
    let above = (k0 + 1) as f64 * step;
    let ok = f(below) <= HIERARCHY_FLOOR && f(above) > HIERARCHY_FLOOR;
    // no sign change elsewhere nearby
    let ok = ok
        && (k0 - 5..k0).all(|k| f(k as f64 * step) <= HIERARCHY_FLOOR)
        && (k0 + 1..k0 + 6).all(|k| f(k as f64 * step) > HIERARCHY_FLOOR);
    (ok, below, above)
}

fn criterion_2(gate: &mut Gate, rows: &[SweepRow]) {
    let mut worst_closed: f64 = 0.0;
    let mut worst_discord: f64 = 0.0;
    for r in rows {
        let m = &r.measured;
        for (got, want) in [
            (m.nonlocal_coherence, r.w),
            (m.negativity, negativity_curve(r.w)),
            (m.steering, sqrt3_curve(r.w)),
            (m.nonlocality, sqrt2_curve(r.w)),
        ] {
            worst_closed = worst_closed.max((got - want).abs());
        }
        let oracle = common::grid_discord_oracle(&werner(r.w).unwrap(), 721, 1441);
        worst_discord = worst_discord.max((m.discord - oracle).abs());
    }

    let on_circuit = |w: f64| prepared_state(&BdsSpec::werner(w).unwrap()).unwrap();
    let thresholds = [
        (
            "E",
            1.0 / 3.0,
            threshold_brackets(
                |w| full_report(&on_circuit(w)).unwrap().negativity,
                1.0 / 3.0,
            ),
        ),
        (
            "S",
            1.0 / 3f64.sqrt(),
            threshold_brackets(|w| steering(&on_circuit(w)).unwrap(), 1.0 / 3f64.sqrt()),
        ),
        (
            "N",
            1.0 / 2f64.sqrt(),
            threshold_brackets(|w| nonlocality(&on_circuit(w)).unwrap(), 1.0 / 2f64.sqrt()),
        ),
    ];
    let thresholds_ok = thresholds.iter().all(|(_, _, (ok, _, _))| *ok);
    let threshold_text: Vec<String> = thresholds
        .iter()
        .map(|(n, t, (ok, lo, hi))| {
            format!(
                "{n} onset {t:.4} in ({lo:.3},{hi:.3}] {}",
                if *ok { "ok" } else { "MISSING" }
            )
        })
        .collect();

    gate.record(
        2,
        "Werner theory curves",
        rows.len() == 11 && worst_closed < 1e-6 && worst_discord < 1e-4 && thresholds_ok,
        format!(
            "C/E/S/N max dev {worst_closed:.2e} (tol 1e-6); discord vs 721x1441 oracle max dev {worst_discord:.2e} (tol 1e-4); {}",
            threshold_text.join("; ")
        ),
    );
}

fn criterion_3(gate: &mut Gate) {
    let prepared = prepared_state(&BdsSpec::werner(1.0).unwrap()).unwrap();
    let r = full_report(&prepared).unwrap();
    let dev = [
        r.nonlocal_coherence,
        r.negativity,
        r.steering,
        r.nonlocality,
    ]
    .iter()
    .map(|v| (v - 1.0).abs())
    .fold(0.0, f64::max);
    let d_dev = (r.discord - 1.0).abs();
    let f_dev = (fidelity(&prepared, &bell_state(1, 1)).unwrap() - 1.0).abs();
    gate.record(
        3,
        "Bell-state anchors at w=1",
        dev < 1e-6 && d_dev < 1e-4 && f_dev < 1e-9,
        format!("C/E/S/N max dev {dev:.2e} (tol 1e-6); D dev {d_dev:.2e} (tol 1e-4); fidelity dev {f_dev:.2e} (tol 1e-9)"),
    );
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn criterion_4(gate: &mut Gate) {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for w in [0.0, 0.5, 1.0] {
        let spec = BdsSpec::werner(w).unwrap();
        let state = prepared_state(&spec).unwrap();
        let target = bds_from_spec(&spec).unwrap();
        let fids: Vec<f64> = (0..100)
            .map(|seed| fidelity(&tomograph(&state, 8192, seed).unwrap().state, &target).unwrap())
            .collect();
        let min = fids.iter().copied().fold(f64::INFINITY, f64::min);
        let med = median(fids);
        ok &= med >= 0.99 && min >= 0.97;
        parts.push(format!("w={w}: median {med:.4}, min {min:.4}"));
    }
    let secs = start.elapsed().as_secs_f64();
    gate.record(
        4,
        "shot-noise tomography, 100 seeds x 8192 shots",
        ok && secs < 60.0,
        format!(
            "{} (need median >= 0.99, min >= 0.97); {secs:.2} s (limit 60 s)",
            parts.join("; ")
        ),
    );
}

fn criterion_5(gate: &mut Gate) -> Vec<ResourceReport> {
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let strong = decohered_werner_sweep(0.3, 0.3, &grid).unwrap();
    let max_n = strong
        .iter()
        .map(|(_, r)| r.nonlocality)
        .fold(0.0, f64::max);
    let s1 = strong.last().unwrap().1.steering;
    let s1_want = (0.7 * 3f64.sqrt() - 1.0) / (3f64.sqrt() - 1.0);
    let weak = decohered_werner_sweep(0.25, 0.25, &[1.0]).unwrap();
    let n1 = weak[0].1.nonlocality;
    let n1_want = (0.75 * 2f64.sqrt() - 1.0) / (2f64.sqrt() - 1.0);
    gate.record(
        5,
        "decohered Werner states",
        max_n == 0.0 && (s1 - s1_want).abs() < 1e-9 && (n1 - n1_want).abs() < 1e-9,
        format!(
            "a=p=0.3: max N over 11 points {max_n:.1e}, S(1) = {s1:.10} vs {s1_want:.10}; a=p=0.25: N(1) = {n1:.10} vs {n1_want:.10} (tol 1e-9)"
        ),
    );
    strong.into_iter().chain(weak).map(|(_, r)| r).collect()
}

fn criterion_6(gate: &mut Gate, sweep_reports: &[ResourceReport]) {
    let start = Instant::now();
    let mut rng = common::rng(6);
    let mut violations = Vec::new();
    let mut positive = [0usize; 5];
    let n_random = 10_000;
    for i in 0..n_random {
        let rho = common::random_state(&mut rng, i);
        let r = full_report(&rho).unwrap();
        for (slot, v) in positive.iter_mut().zip([
            r.nonlocality,
            r.steering,
            r.negativity,
            r.discord,
            r.nonlocal_coherence,
        ]) {
            *slot += usize::from(v > HIERARCHY_FLOOR);
        }
        if let Some(link) = r.hierarchy_violation(HIERARCHY_FLOOR) {
            violations.push(format!("random #{i}: {link}"));
        }
    }
    for (i, r) in sweep_reports.iter().enumerate() {
        if let Some(link) = r.hierarchy_violation(HIERARCHY_FLOOR) {
            violations.push(format!("sweep #{i}: {link}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    gate.record(
        6,
        "resource hierarchy N>0 => S>0 => E>0 => D>0 => C>0",
        violations.is_empty(),
        format!(
            "{} violations over {n_random} random states + {} sweep states; positives N/S/E/D/C = {:?}; {secs:.1} s{}",
            violations.len(),
            sweep_reports.len(),
            positive,
            violations.first().map(|v| format!("; first: {v}")).unwrap_or_default()
        ),
    );
}

fn criterion_7(gate: &mut Gate) {
    let mut worst_complete: f64 = 0.0;
    for i in 0..=20 {
        for j in 0..=20 {
            let ch = composite_damping(i as f64 / 20.0, j as f64 / 20.0).unwrap();
            worst_complete = worst_complete.max(ch.completeness_error());
        }
    }

    let mut rng = common::rng(7);
    let mut worst_super: f64 = 0.0;
    let ch = composite_damping(0.3, 0.3).unwrap();
    let sup = superoperator(ch.operators());
    for i in 0..100 {
        let rho = common::random_state(&mut rng, i);
        let kraus = apply_channel(&ch, &rho, 0).unwrap();
        worst_super = worst_super.max(kraus.matrix().max_abs_diff(&apply_on_a(&sup, rho.matrix())));
    }

    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let clean = decohered_werner_sweep(0.0, 0.0, &grid).unwrap();
    let mut monotone_breaks = Vec::new();
    for (a, p) in [(0.1, 0.1), (0.25, 0.25), (0.3, 0.3), (0.6, 0.2), (0.2, 0.6)] {
        for ((w, n), (_, c)) in decohered_werner_sweep(a, p, &grid)
            .unwrap()
            .iter()
            .zip(&clean)
        {
            let pairs = [
                ("C", n.nonlocal_coherence, c.nonlocal_coherence, 1e-9),
                ("D", n.discord, c.discord, 1e-7),
                ("E", n.negativity, c.negativity, 1e-9),
                ("S", n.steering, c.steering, 1e-9),
                ("N", n.nonlocality, c.nonlocality, 1e-9),
            ];
            for (name, noisy, ideal, slack) in pairs {
                if noisy > ideal + slack {
                    monotone_breaks.push(format!("{name} at a={a},p={p},w={w}"));
                }
            }
        }
    }
    gate.record(
        7,
        "channel correctness",
        worst_complete < 1e-10 && worst_super < 1e-10 && monotone_breaks.is_empty(),
        format!(
            "completeness max dev {worst_complete:.1e}; Kraus vs superoperator max dev {worst_super:.1e} over 100 states (tol 1e-10); {} monotonicity breaks{}",
            monotone_breaks.len(),
            monotone_breaks.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    );
}

type Super = [[num_complex::Complex64; 4]; 4];

fn superoperator(ops: &[bds::qmath::ComplexMatrix]) -> Super {
    let mut s = [[num_complex::Complex64::new(0.0, 0.0); 4]; 4];
    for k in ops {
        for (i, row) in s.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry += k[(i / 2, j / 2)] * k[(i % 2, j % 2)].conj();
            }
        }
    }
    s
}

fn apply_on_a(s: &Super, rho: &bds::qmath::ComplexMatrix) -> bds::qmath::ComplexMatrix {
    let mut out = bds::qmath::ComplexMatrix::zeros(4);
    for k in 0..2 {
        for kp in 0..2 {
            let v = [
                rho[(k, kp)],
                rho[(k, 2 + kp)],
                rho[(2 + k, kp)],
                rho[(2 + k, 2 + kp)],
            ];
            for (i, row) in s.iter().enumerate() {
                out[(2 * (i / 2) + k, 2 * (i % 2) + kp)] =
                    row.iter().zip(&v).map(|(a, b)| a * b).sum();
            }
        }
    }
    out
}

fn criterion_8(gate: &mut Gate) {
    let config = SweepConfig {
        seed: 2024,
        noise_a: 0.1,
        noise_p: 0.2,
        ..SweepConfig::default()
    };
    let csv_a = sweep_csv(&run_sweep(&config).unwrap());
    let csv_b = sweep_csv(&run_sweep(&config).unwrap());
    let rho = werner(0.5).unwrap();
    let counts_a = sample_counts(&rho, 8192, 99).unwrap().to_json_string();
    let counts_b = sample_counts(&rho, 8192, 99).unwrap().to_json_string();

    let bin = env!("CARGO_BIN_EXE_bds");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs")
            .stdout
    };
    let cli_sweep = [
        run(&["sweep", "--seed", "5"]),
        run(&["sweep", "--seed", "5"]),
    ];
    let cli_counts = [
        run(&["sample", "--werner", "0.3", "--seed", "5"]),
        run(&["sample", "--werner", "0.3", "--seed", "5"]),
    ];
    let ok = csv_a == csv_b
        && counts_a == counts_b
        && !cli_sweep[0].is_empty()
        && cli_sweep[0] == cli_sweep[1]
        && !cli_counts[0].is_empty()
        && cli_counts[0] == cli_counts[1];
    gate.record(
        8,
        "determinism",
        ok,
        format!(
            "library sweep CSV {} bytes, counts JSON {} bytes, CLI sweep {} bytes, CLI counts {} bytes; all byte-identical across two runs: {ok}",
            csv_a.len(),
            counts_a.len(),
            cli_sweep[0].len(),
            cli_counts[0].len()
        ),
    );
}

fn main() {
    let start = Instant::now();
    let mut gate = Gate {
        results: Vec::new(),
    };

    criterion_1(&mut gate);
    let exact_rows = run_sweep(&exact_config()).unwrap();
    criterion_2(&mut gate, &exact_rows);
    criterion_3(&mut gate);
    criterion_4(&mut gate);
    let mut sweep_reports = criterion_5(&mut gate);

    let shot_rows = run_sweep(&SweepConfig::default()).unwrap();
    let noisy_rows = run_sweep(&SweepConfig {
        noise_a: 0.3,
        noise_p: 0.3,
        ..SweepConfig::default()
    })
    .unwrap();
    for row in exact_rows.iter().chain(&shot_rows).chain(&noisy_rows) {
        sweep_reports.push(row.measured);
        sweep_reports.push(row.theory);
    }
    criterion_6(&mut gate, &sweep_reports);
    criterion_7(&mut gate);
    criterion_8(&mut gate);

    let failed: Vec<usize> = gate
        .results
        .iter()
        .filter(|(_, p)| !p)
        .map(|(id, _)| *id)
        .collect();
    println!(
        "acceptance: {}/{} passed in {:.1} s",
        gate.results.len() - failed.len(),
        gate.results.len(),
        start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
