//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use relcoef::coefficients::{cond_p, convert, f_odds, f_prob, q_odds, q_prob, ExtReal, RangeType};
use relcoef::constraints::expand_exchangeable;
use relcoef::oracle::{oracle_bounds, OracleConfig};
use relcoef::partition::{AtomMask, Distribution, EventTable};
use relcoef::solver::Interval;
use relcoef::{answer_query, parse, Program, SolverConfig, Status};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {:.2} s, limit {:.0} s", t.as_secs_f64(), limit.as_secs_f64()))
}

fn solve(src: &str) -> Result<Vec<Interval>, String> {
    let program = parse(src).map_err(|e| e.to_string())?;
    solve_program(&program)
}

fn solve_program(program: &Program) -> Result<Vec<Interval>, String> {
    answer_query(program, &SolverConfig::default())
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|a| a.result.map_err(|e| e.to_string()))
        .collect()
}

fn expect_interval(iv: &Interval, lo: f64, hi: f64, tol: f64, status: Status) -> Result<(), String> {
    ensure(iv.status == status && (iv.lo - lo).abs() <= tol && (iv.hi - hi).abs() <= tol, || {
        format!("got {iv}, want [{lo}, {hi}] {status}")
    })
}

fn oracle(program: &Program, samples: usize) -> Result<Vec<Option<Interval>>, String> {
    let cfg = OracleConfig { samples, ..OracleConfig::default() };
    let report = oracle_bounds(program, &cfg).map_err(|e| e.to_string())?;
    Ok(report.answers.into_iter().map(|a| a.interval).collect())
}

fn screening() -> Outcome {
    let start = Instant::now();
    let iv = solve("events T, A; assert P(T|A)=0.003; assert P(T|-A)=0.001; query Q(T:A);")?.remove(0);
    expect_interval(&iv, 3.0, 3.0, 1e-9, Status::Exact)?;
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("Q(T:A) = {iv}"))
}

/// Strictly positive 2x2 tables, uniform on the simplex interior.
fn positive_tables(count: usize) -> Vec<Distribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    (0..count)
        .map(|_| {
            let mut p: Vec<f64> = (0..4).map(|_| rng.sample::<f64, _>(Exp1) + 1e-12).collect();
            let s: f64 = p.iter().sum();
            p.iter_mut().for_each(|v| *v /= s);
            Distribution::new(p).unwrap()
        })
        .collect()
}

fn masks() -> [AtomMask; 4] {
    let t = EventTable::new(["A", "B"]).unwrap();
    let (a, b) = (t.event_mask(0), t.event_mask(1));
    let (na, nb) = (a.complement(), b.complement());
    [a, b, na, nb]
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn identities() -> Outcome {
    let start = Instant::now();
    let [a, b, na, nb] = masks();
    let val = |v: relcoef::Result<ExtReal>| v.unwrap().finite().unwrap();
    let mut worst: f64 = 0.0;
    let tables = positive_tables(10_000);
    for d in &tables {
        let pa = relcoef::partition::prob(d, &a).unwrap();
        let pna = relcoef::partition::prob(d, &na).unwrap();
        let o = |p: f64| convert(ExtReal::Finite(p), RangeType::P, RangeType::O).unwrap().finite().unwrap();
        let q = val(q_odds(d, &a, &b));
        let checks = [
            rel(pa, 1.0 - pna),
            rel(o(pa) * o(pna), 1.0),
            rel(val(cond_p(d, &a, &b)), 1.0 - val(cond_p(d, &na, &b))),
            rel(q, val(q_odds(d, &b, &a))),
            rel(q, val(q_odds(d, &na, &nb))),
            rel(q, 1.0 / val(q_odds(d, &a, &nb))),
            rel(val(q_prob(d, &a, &b)) * val(q_prob(d, &a, &nb)), 1.0),
            rel(val(f_prob(d, &a, &b)) * val(f_prob(d, &b, &a)), 1.0),
            rel(val(f_odds(d, &a, &b)) * val(f_odds(d, &b, &a)), 1.0),
            rel(val(f_odds(d, &a, &b)), val(f_odds(d, &nb, &na))),
        ];
        worst = checks.iter().copied().fold(worst, f64::max);
    }
    ensure(worst <= 1e-12, || format!("worst relative error {worst:e}"))?;
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("10 identities on {} tables, worst relative error {worst:.1e}", tables.len()))
}

fn conversions() -> Outcome {
    use RangeType::*;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = |v: f64, from, to| convert(ExtReal::Finite(v), from, to).unwrap();
    let mut worst: f64 = 0.0;
    for from in [P, O, S] {
        for to in [P, O, S] {
            if from == to {
                continue;
            }
            for _ in 0..1000 {
                let v = match from {
                    P => rng.random_range(0.0..1.0),
                    S => rng.random_range(-1.0..1.0),
                    O => rng.random_range(-5.0f64..5.0).exp(),
                };
                let back = convert(convert(ExtReal::Finite(v), from, to).unwrap(), to, from).unwrap().finite().unwrap();
                // absolute near zero, relative elsewhere
                worst = worst.max((back - v).abs() / v.abs().max(1.0));
            }
        }
    }
    ensure(worst <= 1e-12, || format!("worst round-trip error {worst:e}"))?;
    let fixed = [
        c(0.5, P, O) == ExtReal::Finite(1.0),
        c(0.5, P, S) == ExtReal::Finite(0.0),
        c(1.0, O, P) == ExtReal::Finite(0.5),
        c(1.0, O, S) == ExtReal::Finite(0.0),
        c(0.0, S, P) == ExtReal::Finite(0.5),
        c(0.0, S, O) == ExtReal::Finite(1.0),
    ];
    ensure(fixed.iter().all(|f| *f), || "fixed points P=0.5, O=1, S=0 not exact".into())?;
    let boundary = [
        c(1.0, P, O) == ExtReal::PosInf,
        c(1.0, P, S) == ExtReal::Finite(1.0),
        convert(ExtReal::PosInf, O, P).unwrap() == ExtReal::Finite(1.0),
        convert(ExtReal::PosInf, O, S).unwrap() == ExtReal::Finite(1.0),
        c(1.0, S, O) == ExtReal::PosInf,
        c(1.0, S, P) == ExtReal::Finite(1.0),
    ];
    ensure(boundary.iter().all(|f| *f), || "boundary P=1, O=inf, S=1 not exact".into())?;
    within_time(start, Duration::from_secs(5))?;
    Ok(format!("6 pairs x 1000 values, worst error {worst:.1e}"))
}

fn sign_agreement() -> Outcome {
    let [a, b, _, _] = masks();
    let sign = |v: relcoef::Result<ExtReal>| (v.unwrap().finite().unwrap() - 1.0).partial_cmp(&0.0).unwrap();
    let tables = positive_tables(10_000);
    let bad = tables
        .iter()
        .filter(|d| {
            sign(q_odds(d, &a, &b)) != sign(q_prob(d, &a, &b)) || sign(f_odds(d, &a, &b)) != sign(f_prob(d, &a, &b))
        })
        .count();
    ensure(bad == 0, || format!("{bad} tables disagree"))?;
    // the oracle's feasible samples agree too
    let program = parse("events A, B; assert Q(A|B) in [1, 10]; query QS(A:B); query F(A:B);").unwrap();
    let iv = oracle(&program, 20_000)?;
    let qs = iv[0].as_ref().ok_or("no oracle samples")?;
    ensure(qs.lo >= -1e-6, || format!("Q(A|B) >= 1 but oracle QS(A:B) reaches {}", qs.lo))?;
    Ok(format!("{} tables, oracle QS(A:B) under Q(A|B) >= 1 is {qs}", tables.len()))
}

fn frechet() -> Outcome {
    let start = Instant::now();
    let program = parse("events A, B; assert P(A)=0.6; assert P(B)=0.7; query P(A&B);").unwrap();
    let iv = solve_program(&program)?.remove(0);
    expect_interval(&iv, 0.3, 0.6, 1e-9, Status::Exact)?;
    let o = oracle(&program, 1_000_000)?.remove(0).ok_or("no oracle samples")?;
    ensure((o.lo - 0.3).abs() <= 0.02 && (o.hi - 0.6).abs() <= 0.02, || format!("oracle {o}"))?;
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("solver {iv}, oracle {o}"))
}

fn chaining() -> Outcome {
    let iv = solve("events A, B; assert P(A)=0.8; assert P(B|A)=0.9; query P(B);")?.remove(0);
    expect_interval(&iv, 0.72, 0.92, 1e-9, Status::Exact)?;
    Ok(format!("P(B) = {iv}"))
}

fn independence() -> Outcome {
    let program = parse("events A, B; assert P(A)=0.3; assert P(B)=0.5; assert Q(A|B)=1; query P(A&B);").unwrap();
    let iv = solve_program(&program)?.remove(0);
    expect_interval(&iv, 0.15, 0.15, 1e-6, Status::InnerApprox)?;
    let o = oracle(&program, 100_000)?.remove(0).ok_or("no oracle samples")?;
    ensure((o.lo - 0.15).abs() <= 1e-3 && (o.hi - 0.15).abs() <= 1e-3, || format!("oracle {o}"))?;
    Ok(format!("solver {iv}, oracle {o}"))
}

fn exchangeable() -> Outcome {
    let table = EventTable::new(["A", "B", "C"]).unwrap();
    let names: Vec<String> = ["A", "B", "C"].map(String::from).to_vec();
    let eqs = expand_exchangeable(&names, &table).map_err(|e| e.to_string())?;
    ensure(eqs.len() == 4, || format!("{} equalities, want 4", eqs.len()))?;
    let iv = solve("events A, B; exchangeable A, B; assert P(A)=0.4; query P(B);")?.remove(0);
    expect_interval(&iv, 0.4, 0.4, 1e-12, Status::Exact)?;
    Ok(format!("{} equalities for n=3, P(B) = {iv}", eqs.len()))
}

const LINEAR_CORPUS: [&str; 12] = [
    "events A, B; assert P(A)=0.6; assert P(B)=0.7; query P(A&B);",
    "events A, B; assert P(A)=0.8; assert P(B|A)=0.9; query P(B);",
    "events A, B; assert P(A or B) = 0.9; assert P(A) in [0.2, 0.5]; query P(B);",
    "events A, B; assert P(A ^ B) in [0, 0.3]; query P(A & -B);",
    "events A, B, C; assert P(A)=0.5; assert P(B)=0.5; assert P(C)=0.5; query P(A&B&C);",
    "events A, B, C; assert P(A&B) in [0.2, 1]; assert P(C|A) in [0.3, 0.7]; query P(A&C);",
    "events A, B, C; assert P(A or B or C) = 0.6; query P(A);",
    "events A, B, C; assert P(B|A) = 0.9; assert P(C|B) = 0.8; assert P(A) = 0.7; query P(C);",
    "events A, B, C; assert P(A ^ B ^ C) in [0.1, 0.4]; query P(-A & -B);",
    "events A, B, C; assert P(A) in [0.3, 0.6]; assert P(-B | A) in [0, 0.2]; query P(A & B or C);",
    "events A, B, C; assert P(A & B) = 0.1; assert P(B & C) = 0.2; assert P(A & C) = 0.15; query P(A or B or C);",
    "events A, B, C; define C = A & B; assert P(A) = 0.6; assert P(B) = 0.5; query P(C);",
];

fn oracle_containment() -> Outcome {
    let start = Instant::now();
    let mut worst_gap: f64 = 0.0;
    for src in LINEAR_CORPUS {
        let program = parse(src).map_err(|e| format!("{src}: {e}"))?;
        let iv = solve_program(&program)?.remove(0);
        ensure(iv.status == Status::Exact, || format!("{src}: solver {iv}"))?;
        let o = oracle(&program, 250_000)?.remove(0).ok_or_else(|| format!("{src}: no oracle samples"))?;
        ensure(o.lo >= iv.lo - 1e-7 && o.hi <= iv.hi + 1e-7, || format!("{src}: oracle {o} outside {iv}"))?;
        let gap = (o.lo - iv.lo).max(iv.hi - o.hi);
        ensure(gap <= 0.02, || format!("{src}: oracle {o} vs solver {iv}"))?;
        worst_gap = worst_gap.max(gap);
    }
    within_time(start, Duration::from_secs(120))?;
    Ok(format!("{} programs, widest endpoint gap {worst_gap:.4}", LINEAR_CORPUS.len()))
}

fn corpus(kind: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(kind);
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map(|d| d.filter_map(|e| e.ok().map(|e| e.path())).collect())
        .unwrap_or_default();
    files.retain(|p| p.extension().is_some_and(|x| x == "rel"));
    files.sort();
    files
}

fn parser_corpus() -> Outcome {
    let ok = corpus("ok");
    for path in &ok {
        let src = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let program = parse(&src).map_err(|e| format!("{}: {e}", path.display()))?;
        let again = parse(&program.to_string()).map_err(|e| format!("{}: reprint: {e}", path.display()))?;
        ensure(again == program, || format!("{} does not round-trip", path.display()))?;
    }
    let err = corpus("err");
    for path in &err {
        let src = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let header = src.lines().next().and_then(|l| l.strip_prefix("# expect ")).ok_or("missing header")?;
        let pos = header.split(' ').next().unwrap_or_default();
        let e = match parse(&src) {
            Ok(_) => return Err(format!("{} parsed", path.display())),
            Err(e) => e,
        };
        ensure(format!("{}:{}", e.line, e.column) == pos, || format!("{}: got {e}, want {pos}", path.display()))?;
    }
    ensure(ok.len() >= 15 && err.len() >= 8, || format!("{} programs, {} error files", ok.len(), err.len()))?;
    Ok(format!("{} programs round-trip, {} error positions match", ok.len(), err.len()))
}

/// Twelve events, twenty interval constraints around a hidden distribution.
fn scale_program() -> String {
    let names: Vec<String> = (0..12).map(|i| format!("E{i}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut p0: Vec<f64> = (0..4096).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = p0.iter().sum();
    p0.iter_mut().for_each(|v| *v /= s);
    let table = EventTable::new(names.clone()).unwrap();
    let mut src = format!("events {};\n", names.join(", "));
    for _ in 0..20 {
        let i = rng.random_range(0..12);
        let j = (i + 1 + rng.random_range(0..11)) % 12;
        let op = if rng.random_bool(0.5) { "&" } else { "or" };
        let neg = if rng.random_bool(0.5) { "-" } else { "" };
        let mask = {
            let (a, b) = (table.event_mask(i), table.event_mask(j));
            let b = if neg.is_empty() { b } else { b.complement() };
            if op == "&" { a.intersect(&b) } else { a.union(&b) }
        };
        let v: f64 = mask.atoms().map(|k| p0[k]).sum();
        let w = rng.random_range(0.01..0.05);
        src.push_str(&format!(
            "assert P({} {op} {neg}{}) in [{:.6}, {:.6}];\n",
            names[i],
            names[j],
            (v - w).max(0.0),
            (v + w).min(1.0)
        ));
    }
    src.push_str("query P(E0 & E5 or -E3);\n");
    src
}

fn scale() -> Outcome {
    let src = scale_program();
    let start = Instant::now();
    let first = solve(&src)?.remove(0);
    let elapsed = start.elapsed();
    ensure(first.status == Status::Exact, || format!("got {first}"))?;
    ensure(elapsed < Duration::from_secs(5), || format!("took {:.2} s", elapsed.as_secs_f64()))?;
    let second = solve(&src)?.remove(0);
    ensure(first == second, || "two runs differ".into())?;
    Ok(format!("4096 atoms, 20 constraints: {first} in {:.2} s", elapsed.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("screening example", screening),
        ("identity suite", identities),
        ("conversion suite", conversions),
        ("sign agreement", sign_agreement),
        ("Frechet bounds", frechet),
        ("conditional chaining", chaining),
        ("independence", independence),
        ("exchangeability", exchangeable),
        ("oracle containment", oracle_containment),
        ("parser corpus", parser_corpus),
        ("scale smoke test", scale),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} [PASS] {name}: {detail} ({t:.2} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} [FAIL] {name}: {why} ({t:.2} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
