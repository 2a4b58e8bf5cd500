//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed.

use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use trkr::braid::{transverse_move, BraidWord, Move, ResolvedWord};
use trkr::homology::{
    cone_pi0_check, stab_check, total_homology, unknot_homology, HomologyOptions, HomologyReport,
};
use trkr::mfcore::{braid_complex, chi_pair, resolved_complex, ComplexOptions};
use trkr::moyoracle::{
    compare_resolved, direct_series_dims, empty_braid_series, sweep, KWindow, M0Reading, Oracle,
    Variant,
};

fn braid(s: &str) -> BraidWord {
    s.parse().unwrap()
}

fn report(b: &BraidWord, n: u32, kmax: i32) -> HomologyReport {
    let opts = HomologyOptions {
        kmax: Some(kmax),
        check_complex: true,
        ..HomologyOptions::default()
    };
    total_homology(b, n, opts).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Reports gathered along the way for the structure audit.
#[derive(Default)]
struct Seen {
    reports: Vec<HomologyReport>,
}

fn unknot_golden(seen: &mut Seen) -> Outcome {
    let mut cases = vec![];
    for n in 1..=2u32 {
        let ms: &[u32] = if n == 1 { &[0, 1, 2, 3] } else { &[0, 1, 2] };
        for &m in ms {
            let kmax = 2 * n as i32 + 2 * m as i32 + 5;
            let r = report(&BraidWord::unknot(m as usize), n, kmax);
            let ok = r.module == unknot_homology(m, n, kmax);
            cases.push(format!("U{m}/N={n}:{}", if ok { "ok" } else { "MISMATCH" }));
            seen.reports.push(r);
        }
    }
    let pass = cases.iter().all(|c| c.ends_with("ok"));
    outcome(pass, cases.join(" "))
}

fn circles() -> Outcome {
    let mut cases = vec![];
    let mut printed_fails = 0;
    for n in 1..=2u32 {
        for b in 1..=3usize {
            let g = ResolvedWord::closed(b, vec![]);
            let o = Oracle::new(n, Variant::Triple);
            let c = compare_resolved(&o, &g, 2 * n as i32 + 6, true, true).unwrap();
            cases.push(c.pass());
            let printed = empty_braid_series(b, n, Variant::Triple, M0Reading::AsPrinted);
            let kmax = 2 * n as i32 + 6;
            let direct = direct_series_dims(&g, n, Variant::Triple, 1, kmax, true).unwrap();
            if printed.graded_dims(1, kmax) != direct {
                printed_fails += 1;
            }
        }
    }
    outcome(
        cases.iter().all(|&p| p),
        format!(
            "{}/{} circle configurations match (𝓜₀ ⊗ ℚ[x]); literal 𝓜₀ reading mismatches in {printed_fails}",
            cases.iter().filter(|&&p| p).count(),
            cases.len()
        ),
    )
}

fn oracle_sweep() -> Outcome {
    let t = Instant::now();
    let mut total = 0;
    let mut failed = vec![];
    for n in 1..=2u32 {
        for variant in [Variant::Triple, Variant::Sln] {
            let r = sweep(4, 6, n, variant, KWindow::standard(n), true).unwrap();
            total += r.len();
            failed.extend(
                r.iter()
                    .filter(|c| !c.pass())
                    .map(|c| format!("{} N={n} {variant:?}", c.word)),
            );
        }
    }
    let secs = t.elapsed().as_secs();
    outcome(
        failed.is_empty() && secs <= 30 * 60,
        format!(
            "{} of {total} comparisons agree in {secs}s {failed:?}",
            total - failed.len()
        ),
    )
}

/// Pairs of braids related by transverse Markov moves (excluding negative
/// stabilization).
fn invariance_pairs() -> Vec<(BraidWord, BraidWord, &'static str)> {
    let mv = |s: &str, m: Move| transverse_move(&braid(s), &m).unwrap();
    // Conjugation followed by cancelling the new `σσ⁻¹` pair.
    let conj = |s: &str, eta: i32, site: usize| {
        transverse_move(
            &mv(s, Move::Conjugate { eta }),
            &Move::BraidRelation { site },
        )
        .unwrap()
    };
    vec![
        (
            braid("b=1;"),
            mv("b=1;", Move::StabPos),
            "positive stabilization of U0",
        ),
        (
            braid("b=2; 1"),
            mv("b=2; 1", Move::StabPos),
            "positive stabilization",
        ),
        (
            braid("b=2; -1"),
            mv("b=2; -1", Move::StabPos),
            "positive stabilization of U1",
        ),
        (braid("b=3; 1 2"), conj("b=3; 1 2", 1, 0), "conjugation"),
        (braid("b=3; 1 -2"), conj("b=3; 1 -2", 2, 2), "conjugation"),
        (
            braid("b=3; 1 2 1"),
            mv("b=3; 1 2 1", Move::BraidRelation { site: 0 }),
            "braid relation",
        ),
        (
            braid("b=2; 1"),
            mv("b=2; 1", Move::InsertPair { site: 0, letter: 1 }),
            "inserted cancelling pair",
        ),
    ]
    .into_iter()
    .filter(|(a, b, _)| a != b)
    .collect()
}

fn invariance(seen: &mut Seen) -> Outcome {
    let mut cases = vec![];
    for (a, b, what) in invariance_pairs() {
        for n in 1..=2u32 {
            let kmax = 2 * n as i32 + 2 * a.crossings().max(b.crossings()) as i32 + 5;
            let (ra, rb) = (report(&a, n, kmax), report(&b, n, kmax));
            cases.push((
                format!("[{a}] ~ [{b}] N={n} ({what})"),
                ra.module == rb.module,
            ));
            seen.reports.push(ra);
            seen.reports.push(rb);
        }
    }
    let bad: Vec<&String> = cases.iter().filter(|c| !c.1).map(|c| &c.0).collect();
    outcome(
        bad.is_empty() && cases.len() >= 12,
        format!("{} pairs×N equal {bad:?}", cases.len() - bad.len()),
    )
}

fn non_invariance(seen: &mut Seen) -> Outcome {
    let mut differ = vec![];
    for n in 1..=2u32 {
        let kmax = 2 * n as i32 + 7;
        let (r0, r1) = (
            report(&BraidWord::unknot(0), n, kmax),
            report(&BraidWord::unknot(1), n, kmax),
        );
        differ.push(r0.module != r1.module);
        seen.reports.push(r0);
        seen.reports.push(r1);
    }
    outcome(
        differ.iter().all(|&d| d),
        format!("U1 ≠ U0 at N=1,2: {differ:?}"),
    )
}

fn structure_audit(seen: &Seen) -> Outcome {
    let bad: Vec<String> = seen
        .reports
        .iter()
        .filter(|r| !(r.audits.structure_theorem.pass && r.audits.window_stable))
        .map(|r| {
            format!(
                "[{}] N={}: {:?}",
                r.braid, r.n, r.audits.structure_theorem.failures
            )
        })
        .collect();
    outcome(
        bad.is_empty(),
        format!("{} reports audited {bad:?}", seen.reports.len()),
    )
}

fn stabilization(seen: &mut Seen) -> Outcome {
    let mut cases = vec![];
    for n in 1..=2u32 {
        for b in ["b=1;", "b=2; -1", "b=2; 1"] {
            let v = stab_check(&braid(b), n, None, true).unwrap();
            cases.push((format!("[{b}] N={n}"), v.pass()));
            seen.reports.push(v.report);
            seen.reports.push(v.stabilized);
        }
    }
    let bad: Vec<&String> = cases.iter().filter(|c| !c.1).map(|c| &c.0).collect();
    outcome(
        bad.is_empty(),
        format!("{} braids, short and long sequences {bad:?}", cases.len()),
    )
}

fn cone() -> Outcome {
    let mut cases = vec![];
    for (b, n) in [("b=1;", 1), ("b=2; 1", 1), ("b=1;", 2)] {
        let v = cone_pi0_check(&braid(b), n, None, true).unwrap();
        cases.push((
            format!("[{b}] N={n}: {} degrees", v.compared_degrees),
            v.pass,
        ));
    }
    let pass = cases.iter().all(|c| c.1);
    outcome(
        pass,
        format!("{:?}", cases.iter().map(|c| &c.0).collect::<Vec<_>>()),
    )
}

fn chi_contract() -> Outcome {
    let mut cases = vec![];
    for n in 1..=3 {
        let p = chi_pair(n).unwrap();
        cases.push(p.verify() && p.hmf_dims == (1, 1));
    }
    outcome(
        cases.iter().all(|&c| c),
        format!("N=1,2,3 homotopies verified, Hom spaces 1-dim: {cases:?}"),
    )
}

fn random_braid() -> impl Strategy<Value = BraidWord> {
    (1usize..=3)
        .prop_flat_map(|b| {
            let letter = if b == 1 {
                Just(0).boxed()
            } else {
                (1..b as i32)
                    .prop_flat_map(|i| prop_oneof![Just(i), Just(-i)])
                    .boxed()
            };
            let len = if b == 1 { 0..=0 } else { 0..=3 };
            (Just(b), proptest::collection::vec(letter, len))
        })
        .prop_map(|(b, letters)| BraidWord::new(b, letters).unwrap())
}

fn algebraic_invariants(seen: &Seen) -> Outcome {
    // Every complex behind the reports so far, plus resolved webs.
    let mut failures = vec![];
    for r in &seen.reports {
        if r.audits.complex_checks == Some(false) || !r.audits.parity_vanishing {
            failures.push(format!("[{}] N={}", r.braid, r.n));
        }
    }
    for n in 1..=2 {
        for w in ["b=2; t1", "b=3; t1 t2", "b=3; t1 t2 t1", "b=2; t1 t1"] {
            let g: ResolvedWord = w.parse().unwrap();
            let c = resolved_complex(&g, n, ComplexOptions { eliminate: true }).unwrap();
            if c.check_all().is_err() {
                failures.push(format!("{w} N={n}"));
            }
        }
    }
    let mut runner = TestRunner::new(Config {
        cases: 24,
        failure_persistence: None,
        ..Config::default()
    });
    let prop = runner.run(&(random_braid(), 1u32..=2), |(b, n)| {
        for eliminate in [true, false] {
            let c = braid_complex(&b, n, ComplexOptions { eliminate }).unwrap();
            prop_assert!(c.check_all().is_ok(), "chain checks on [{}] N={}", b, n);
            prop_assert!(c.specialize(1).check_all().is_ok());
        }
        let r = report(&b, n, 2 * n as i32 + 2 * b.crossings() as i32 + 3);
        prop_assert!(
            r.audits.all_pass(),
            "audits on [{}] N={}: {:?}",
            b,
            n,
            r.audits
        );
        Ok(())
    });
    if let Err(e) = &prop {
        failures.push(e.to_string());
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} reports + 8 webs + 24 random braids {failures:?}",
            seen.reports.len()
        ),
    )
}

fn main() {
    let mut seen = Seen::default();
    let mut results = vec![];
    let mut run = |id: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let line = format!(
            "criterion {id:>2} {} {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        results.push((id, o.pass, line));
    };
    run(1, "unknot golden data", &mut || unknot_golden(&mut seen));
    run(2, "concentric circles", &mut circles);
    run(3, "oracle equivalence", &mut oracle_sweep);
    run(4, "invariance", &mut || invariance(&mut seen));
    run(5, "U1 ≠ U0", &mut || non_invariance(&mut seen));
    run(7, "stabilization sequences", &mut || {
        stabilization(&mut seen)
    });
    run(6, "structure theorem audit", &mut || structure_audit(&seen));
    run(8, "cone identity", &mut cone);
    run(9, "χ contract", &mut chi_contract);
    run(10, "algebraic invariants", &mut || {
        algebraic_invariants(&seen)
    });
    results.sort_by_key(|r| r.0);
    for (_, _, line) in &results {
        println!("{line}");
    }
    let failed = results.iter().filter(|r| !r.1).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
