//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use fockpath::cache::OracleCache;
use fockpath::sweeps::{self, word, BijectionReport, SweepReport};
use fockpath_core::latticepath::enumerate_latticed_slow;
use fockpath_core::{
    class_compare, dominates, enumerate_latticed, jantzen_successors, match_pairs, onto,
    partitions_of, preceq, PosSet, SignSequence, Step,
};

const ORACLE_RANGE: [(usize, usize); 3] = [(2, 12), (3, 10), (4, 9)];
const SEED: u64 = 0x5eed;

struct Gate {
    failed: bool,
}

impl Gate {
    fn line(&mut self, n: usize, pass: bool, what: &str, detail: String, start: Instant) {
        self.failed |= !pass;
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {n} {verdict}: {what} ({detail}; {:.1}s)", start.elapsed().as_secs_f64());
    }
}

fn sum_sweeps(reps: &[SweepReport]) -> (bool, usize, usize, usize) {
    let ok = reps.iter().all(SweepReport::ok);
    let checked = reps.iter().map(|r| r.checked).sum();
    let headline = reps.iter().map(|r| r.headline).sum();
    let failures = reps.iter().map(|r| r.failures.len()).sum();
    for r in reps {
        for f in &r.failures {
            println!("  mismatch {f}");
        }
    }
    (ok, checked, headline, failures)
}

fn formula(gate: &mut Gate, cache: &OracleCache) {
    let start = Instant::now();
    let reps: Vec<SweepReport> = ORACLE_RANGE
        .iter()
        .map(|&(e, n)| sweeps::formula_sweep(e, n, Some(cache)).expect("formula sweep"))
        .collect();
    let (ok, checked, bij, bad) = sum_sweeps(&reps);
    let detail = format!("{bij} bijective moves, {checked} moves in all, {bad} mismatches");
    gate.line(1, ok && bij > 0, "closed formula equals canonical-basis oracle", detail, start);
}

fn branching(gate: &mut Gate, cache: &OracleCache) {
    let start = Instant::now();
    let reps: Vec<SweepReport> = ORACLE_RANGE
        .iter()
        .map(|&(e, n)| sweeps::branching_sweep(e, n, Some(cache)).expect("branching sweep"))
        .collect();
    let (ok, checked, regular, bad) = sum_sweeps(&reps);
    let detail = format!("{checked} moves, {regular} with regular targets cross-checked, {bad} mismatches");
    gate.line(2, ok && regular > 0, "branching coefficients", detail, start);
}

fn bijection(gate: &mut Gate) {
    let start = Instant::now();
    let rep: BijectionReport = sweeps::bijection_sweep(8, 10_000, 12, SEED).expect("bijection sweep");
    let bad: Vec<_> = rep.multiset_failures().collect();
    for r in &bad {
        println!("  mismatch {}", r.to_json());
    }
    let detail = format!(
        "{} exhaustive + {} sampled instances, {} norm multiset mismatches",
        rep.exhaustive(),
        rep.sampled(),
        bad.len()
    );
    let pass = bad.is_empty() && rep.exhaustive() > 0 && rep.sampled() == 10_000;
    gate.line(3, pass, "norm multisets of L and R agree", detail, start);

    let start = Instant::now();
    let exhaustive: Vec<_> = rep.records.iter().filter(|r| !r.sampled).collect();
    let failed: Vec<_> = exhaustive.iter().filter(|r| r.construction.is_some()).collect();
    for r in &failed {
        println!("  construction failure {}", r.to_json());
    }
    let explained = failed.iter().all(|r| r.construction_explained());
    let detail = format!(
        "{} of {} instances failed construction ({:.3}%), all explained: {explained}",
        failed.len(),
        exhaustive.len(),
        100.0 * failed.len() as f64 / exhaustive.len().max(1) as f64
    );
    gate.line(4, explained && !exhaustive.is_empty(), "constructive bijection", detail, start);
}

fn consistency(gate: &mut Gate) {
    let start = Instant::now();
    let reps: Vec<SweepReport> =
        [2, 3].iter().map(|&e| sweeps::consistency_sweep(e, 10).expect("consistency sweep")).collect();
    let (ok, checked, singular, bad) = sum_sweeps(&reps);
    let detail = format!("{checked} instances, {singular} at e-singular partitions, {bad} mismatches");
    gate.line(5, ok && singular > 0, "consistency identity", detail, start);
}

fn shape(gate: &mut Gate) {
    let start = Instant::now();
    let reps: Vec<SweepReport> =
        ORACLE_RANGE.iter().map(|&(e, n)| sweeps::shape_sweep(e, n).expect("shape sweep")).collect();
    let (ok, checked, reductions, bad) = sum_sweeps(&reps);
    let detail = format!("{checked} moves, {reductions} first-row reductions, {bad} violations");
    gate.line(6, ok && reductions > 0, "shape of decomposition numbers", detail, start);
}

fn set(xs: &[i64]) -> PosSet {
    xs.iter().copied().collect()
}

fn figures(gate: &mut Gate) {
    let start = Instant::now();
    let m = match_pairs(&set(&[2, 3, 10]), &set(&[5, 6, 8]));
    let pairing = m.partner_of_opener(2) == Some(6)
        && m.partner_of_opener(3) == Some(5)
        && m.unpaired_openers == set(&[10])
        && m.unpaired_closers == set(&[8])
        && !onto(&set(&[2, 3, 10]), &set(&[5, 6, 8]));
    let t = SignSequence::from_slices(&[2, 3, 5, 9], &[1, 4, 6, 7, 8]).unwrap();
    let paths = enumerate_latticed(&t);
    let mut norms: Vec<i64> = paths.iter().map(|p| p.norm()).collect();
    norms.sort_unstable_by(|a, b| b.cmp(a));
    let generic_first = paths.first().is_some_and(|p| p.is_generic() && p.norm() == 10);
    let pass = pairing && norms == [10, 8, 8, 6, 4] && generic_first;
    let detail = format!("pairing example {}, path norms {norms:?}", if pairing { "matches" } else { "differs" });
    gate.line(7, pass, "worked examples reproduced", detail, start);
}

fn subsets(v: &[i64]) -> Vec<PosSet> {
    (0..1u32 << v.len())
        .map(|m| v.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &x)| x).collect())
        .collect()
}

fn enumeration_checks() -> (usize, usize) {
    let (mut windows, mut bad) = (0, 0);
    for n in 0..=10 {
        for mask in 0..1u64 << n {
            let t = word(n, mask);
            let fast = enumerate_latticed(&t);
            let fast_steps: BTreeSet<Vec<Step>> =
                fast.iter().map(|p| p.steps().into_iter().map(|s| s.1).collect()).collect();
            let identity = fast.iter().all(|p| p.norm() == 1 + 2 * p.num_down() as i64 + t.size());
            windows += 1;
            if fast_steps.len() != fast.len() || fast_steps != enumerate_latticed_slow(&t) || !identity {
                println!("  enumeration mismatch on {t}");
                bad += 1;
            }
        }
    }
    (windows, bad)
}

fn order_checks() -> (usize, usize) {
    let (mut domains, mut bad) = (0, 0);
    for nx in 1..=4usize {
        for ny in 1..=4usize {
            let n = nx + ny;
            for mask in (0..1u32 << n).filter(|m| m.count_ones() as usize == nx) {
                let x: Vec<i64> = (1..=n as i64).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                let y: Vec<i64> = (1..=n as i64).filter(|i| mask >> (i - 1) & 1 == 0).collect();
                let dom: Vec<(PosSet, PosSet)> = subsets(&x)
                    .into_iter()
                    .flat_map(|a| subsets(&y).into_iter().map(move |b| (a.clone(), b)))
                    .filter(|(a, b)| onto(a, b))
                    .collect();
                let le = |p: &(PosSet, PosSet), q: &(PosSet, PosSet)| preceq(&p.0, &p.1, &q.0, &q.1);
                let mut ok = dom.iter().all(|p| le(p, p));
                for p in &dom {
                    for q in dom.iter().filter(|q| le(p, q)) {
                        ok &= !le(q, p) || p == q;
                        ok &= dom.iter().filter(|r| le(q, r)).all(|r| le(p, r));
                    }
                }
                domains += 1;
                if !ok {
                    println!("  order axioms fail for X = {x:?}, Y = {y:?}");
                    bad += 1;
                }
            }
        }
    }
    (domains, bad)
}

fn jantzen_checks() -> (usize, usize) {
    let (mut steps, mut bad) = (0, 0);
    for e in [2usize, 3] {
        for n in 0..=8 {
            for lambda in partitions_of(n) {
                for tau in jantzen_successors(&lambda, e).unwrap() {
                    steps += 1;
                    let raises = (0..e).any(|r| class_compare(&lambda, &tau, e, r).unwrap() == Ordering::Less);
                    if raises || !dominates(&lambda, &tau) || lambda == tau {
                        println!("  Jantzen step {lambda} -> {tau} (e={e}) violates the class order");
                        bad += 1;
                    }
                }
            }
        }
    }
    (steps, bad)
}

fn crosschecks(gate: &mut Gate) {
    let start = Instant::now();
    let (windows, enum_bad) = enumeration_checks();
    let (domains, order_bad) = order_checks();
    let (steps, jantzen_bad) = jantzen_checks();
    let pass = enum_bad + order_bad + jantzen_bad == 0 && steps > 0;
    let detail = format!(
        "{windows} windows ({enum_bad} bad), {domains} order domains ({order_bad} bad), {steps} Jantzen steps ({jantzen_bad} bad)"
    );
    gate.line(8, pass, "combinatorial cross-checks", detail, start);
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary cache directory");
    let cache = OracleCache::new(dir.path().join("oracle"));
    let mut gate = Gate { failed: false };
    formula(&mut gate, &cache);
    branching(&mut gate, &cache);
    bijection(&mut gate);
    consistency(&mut gate);
    shape(&mut gate);
    figures(&mut gate);
    crosschecks(&mut gate);
    if gate.failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
