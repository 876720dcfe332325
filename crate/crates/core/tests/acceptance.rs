// Acceptance suite. Runs without the libtest harness so every criterion
// prints its PASS/FAIL line whether or not output capture is on.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use signpat::census::{check_verdict, enumerate, orbit, CensusConfig, Mode, OracleStatus};
use signpat::classify::classify;
use signpat::determinantal::{adjugate_sign, is_sns};
use signpat::digraph::{monotone_n_cycles, two_cycle_signs, Orientation};
use signpat::oracle::eigen::eigenvalues;
use signpat::oracle::{is_algebraically_positive, Tolerances};
use signpat::{ExtendedSign, RealMatrix, Sign, SignPattern};

use common::*;

const SAMPLES: usize = 50;
const SEED: u64 = 0;

struct Line {
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Tally {
    patterns: usize,
    agree: usize,
    disagree: usize,
    inconclusive: usize,
    skipped: usize,
    ambiguous: usize,
    ambiguous_agree: usize,
    ambiguous_disagree: usize,
    certificates: usize,
    witness_failures: usize,
    elapsed: Duration,
    first_disagree: Option<String>,
}

impl Tally {
    fn clean(&self) -> bool {
        self.disagree == 0 && self.inconclusive == 0 && self.witness_failures == 0
    }

    fn summary(&self) -> String {
        format!(
            "{} patterns, {} agree, {} disagree, {} inconclusive, {} skipped; \
             condition3_ambiguous {} (oracle agree {}, disagree {}); {:.1}s",
            self.patterns,
            self.agree,
            self.disagree,
            self.inconclusive,
            self.skipped,
            self.ambiguous,
            self.ambiguous_agree,
            self.ambiguous_disagree,
            self.elapsed.as_secs_f64(),
        )
    }
}

fn run_protocol(patterns: &[SignPattern]) -> Tally {
    let tols = Tolerances::default();
    let start = Instant::now();
    let mut t = Tally {
        patterns: patterns.len(),
        ..Tally::default()
    };
    for a in patterns {
        let v = classify(a);
        let check = match check_verdict(a, &v, SAMPLES, SEED, &tols, true) {
            Ok(c) => c,
            Err(e) => {
                t.inconclusive += 1;
                t.first_disagree.get_or_insert(format!("{} error {e}", a.to_compact()));
                continue;
            }
        };
        t.certificates += check.certificates;
        t.witness_failures += check.witness_failures;
        if v.flags.condition3_ambiguous {
            t.ambiguous += 1;
            match check.status {
                OracleStatus::Agree => t.ambiguous_agree += 1,
                OracleStatus::Disagree => t.ambiguous_disagree += 1,
                OracleStatus::Inconclusive => t.inconclusive += 1,
                OracleStatus::Skipped => t.skipped += 1,
            }
            continue;
        }
        match check.status {
            OracleStatus::Agree => t.agree += 1,
            OracleStatus::Disagree => {
                t.disagree += 1;
                t.first_disagree
                    .get_or_insert(format!("{} {} {}", a.to_compact(), v.verdict_str(), v.rule_str()));
            }
            OracleStatus::Inconclusive => t.inconclusive += 1,
            OracleStatus::Skipped => t.skipped += 1,
        }
    }
    t.elapsed = start.elapsed();
    t
}

fn line_for(t: &Tally, limit: Duration) -> Line {
    let mut detail = t.summary();
    if let Some(d) = &t.first_disagree {
        detail.push_str(&format!("; first: {d}"));
    }
    Line {
        pass: t.clean() && t.elapsed < limit,
        detail,
    }
}

fn criterion_1() -> (Line, Tally) {
    let cfg = CensusConfig::new(3);
    let pats = enumerate(&cfg).expect("n=3 census");
    let t = run_protocol(&pats);
    let mut line = line_for(&t, Duration::from_secs(600));
    line.pass &= t.patterns == 13_824;
    (line, t)
}

fn criterion_2() -> (Line, Vec<Tally>) {
    let mut tallies = Vec::new();
    let start = Instant::now();
    for n in [4, 5] {
        let mut cfg = CensusConfig::new(n);
        cfg.mode = Mode::Random(2000);
        cfg.seed = SEED;
        let pats = enumerate(&cfg).expect("random census");
        tallies.push(run_protocol(&pats));
    }
    let elapsed = start.elapsed();
    let pass = tallies.iter().all(|t| t.clean() && t.patterns == 2000) && elapsed < Duration::from_secs(900);
    let detail = tallies
        .iter()
        .zip([4, 5])
        .map(|(t, n)| {
            let mut s = format!("n={n}: {}", t.summary());
            if let Some(d) = &t.first_disagree {
                s.push_str(&format!(" first: {d}"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" | ");
    (Line { pass, detail }, tallies)
}

fn sample_member<R: Rng>(a: &SignPattern, rng: &mut R) -> RealMatrix {
    a.sample_q_with(0.5, 2.0, rng)
}

fn criterion_3() -> Line {
    let mut rng = rng(3);
    let (mut sns, mut non_sns, mut singular, mut bad) = (0, 0, 0, 0);
    let mut first_bad = None;
    for _ in 0..500 {
        let n = rng.gen_range(1..=5);
        let density = rng.gen_range(0.2..0.7);
        let a = random_pattern(&mut rng, n, density);
        let perms = permutations(n);
        let report = is_sns(&a).expect("order within bound");
        let ok = if report.is_sns {
            sns += 1;
            let want = report.determinant_sign().expect("SNS has a sign");
            let term = &report.witness_terms[0];
            let mut ok = term_sign(&a, &term.sigma) == want;
            for _ in 0..1000 {
                let d = leibniz_det(&sample_member(&a, &mut rng), &perms);
                ok &= Sign::of(d) == want && d.abs() > 1e-12;
            }
            ok
        } else if report.witness_terms.len() == 2 {
            non_sns += 1;
            let (s, t) = (&report.witness_terms[0], &report.witness_terms[1]);
            let valid = |sigma: &[usize]| {
                let mut seen = vec![false; n];
                sigma.len() == n && sigma.iter().all(|&j| j < n && !std::mem::replace(&mut seen[j], true))
            };
            valid(&s.sigma)
                && valid(&t.sigma)
                && term_sign(&a, &s.sigma) == s.sign
                && term_sign(&a, &t.sigma) == t.sign
                && s.sign.is_nonzero()
                && s.sign == -t.sign
        } else {
            singular += 1;
            let (pos, neg) = pattern_term_signs(&a);
            let mut ok = report.witness_terms.is_empty() && !pos && !neg;
            for _ in 0..1000 {
                let d = leibniz_det(&sample_member(&a, &mut rng), &perms);
                ok &= d.abs() <= 1e-12;
            }
            ok
        };
        if !ok {
            bad += 1;
            first_bad.get_or_insert(a.to_compact());
        }
    }
    Line {
        pass: bad == 0,
        detail: format!(
            "500 patterns: {sns} SNS, {non_sns} with opposite terms, {singular} without terms; \
             {bad} violations{}",
            first_bad.map(|p| format!(" (first {p})")).unwrap_or_default()
        ),
    }
}

fn criterion_4() -> Line {
    let mut rng = rng(4);
    let (mut found, mut checked, mut bad) = (0, 0usize, 0);
    let mut first_bad = None;
    while found < 200 {
        let n = rng.gen_range(1..=5);
        let density = rng.gen_range(0.2..0.6);
        let a = random_pattern(&mut rng, n, density);
        if !is_sns(&a).expect("order within bound").is_sns {
            continue;
        }
        found += 1;
        let adj = adjugate_sign(&a).expect("SNS pattern").entries;
        let perms = permutations(n.saturating_sub(1));
        for _ in 0..100 {
            let b = sample_member(&a, &mut rng);
            let scale = b.max_abs().max(1.0).powi(n as i32);
            for s in 0..n {
                for r in 0..n {
                    let want = adj.get(s, r);
                    if want == ExtendedSign::Any {
                        continue;
                    }
                    checked += 1;
                    // adj(B)[s][r] = (-1)^(r+s) det(B without row r, column s)
                    let got = if n == 1 {
                        1.0
                    } else {
                        let m = b.minor(r, s);
                        let d = leibniz_det(&m, &perms);
                        if (r + s) % 2 == 0 {
                            d
                        } else {
                            -d
                        }
                    };
                    let ok = match want {
                        ExtendedSign::Zero => got.abs() <= 1e-12 * scale,
                        ExtendedSign::Plus => got > 1e-12 * scale,
                        ExtendedSign::Minus => got < -1e-12 * scale,
                        _ => false,
                    };
                    if !ok {
                        bad += 1;
                        first_bad.get_or_insert(format!("{} ({},{})", a.to_compact(), s + 1, r + 1));
                    }
                }
            }
        }
    }
    Line {
        pass: bad == 0,
        detail: format!(
            "200 SNS patterns, {checked} determined entries sampled, {bad} violations{}",
            first_bad.map(|p| format!(" (first {p})")).unwrap_or_default()
        ),
    }
}

struct SquareCheck {
    checked: usize,
    with_two_cycle: usize,
    literal_fail: usize,
    literal_fail_without_two_cycle: usize,
    corrected_fail: usize,
    first_literal_fail: Option<String>,
}

/// Relabel and negate so the monotone cycle runs forward with sign `+`.
fn forward_positive_frame(a: &SignPattern) -> SignPattern {
    let n = a.n();
    let cyc = *monotone_n_cycles(a).expect("cycle form").iter().next().expect("monotone cycle");
    let mut f = a.clone();
    if cyc.orientation == Orientation::Backward {
        let reflect: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        f = f.permute_similar(&reflect).expect("permutation");
    }
    if cyc.sign == Sign::Minus {
        f = f.negate();
    }
    f
}

fn square_check(n: usize) -> SquareCheck {
    let mut cfg = CensusConfig::new(n);
    cfg.zero_diag = true;
    let mut out = SquareCheck {
        checked: 0,
        with_two_cycle: 0,
        literal_fail: 0,
        literal_fail_without_two_cycle: 0,
        corrected_fail: 0,
        first_literal_fail: None,
    };
    for idx in 0..cfg.space_size() {
        let a = cfg.pattern_at(idx);
        if monotone_n_cycles(&a).expect("cycle form").is_empty() {
            continue;
        }
        let two = two_cycle_signs(&a);
        let clash = (0..n).any(|v| {
            let at_v = two.iter().filter(|c| c.i == v || c.j == v);
            let (p, m) = at_v.fold((false, false), |(p, m), c| (p || c.sign == Sign::Plus, m || c.sign == Sign::Minus));
            p && m
        });
        if clash {
            continue;
        }
        out.checked += 1;
        if !two.is_empty() {
            out.with_two_cycle += 1;
        }
        let f = forward_positive_frame(&a);
        let sq = f.qual_product(&f).expect("same order");
        let literal = (0..n).all(|i| {
            (0..n).all(|j| {
                let want = if j == (i + 2) % n { ExtendedSign::Plus } else { ExtendedSign::Zero };
                sq.get(i, j) == want
            })
        });
        if !literal {
            out.literal_fail += 1;
            if two.is_empty() {
                out.literal_fail_without_two_cycle += 1;
            }
            out.first_literal_fail.get_or_insert(a.to_compact());
        }
        // Corrected reading: + at i+2; the diagonal carries the sign of the
        // incident 2-cycles; any other nonzero entry is + and sits at i-2.
        let ftwo = two_cycle_signs(&f);
        let corrected = (0..n).all(|i| {
            let incident = ftwo
                .iter()
                .filter(|c| c.i == i || c.j == i)
                .map(|c| c.sign)
                .next()
                .unwrap_or(Sign::Zero);
            (0..n).all(|j| {
                let e = sq.get(i, j);
                if j == (i + 2) % n {
                    e == ExtendedSign::Plus
                } else if j == i {
                    e == ExtendedSign::from(incident)
                } else {
                    e == ExtendedSign::Zero || (e == ExtendedSign::Plus && j == (i + n - 2) % n)
                }
            })
        });
        if !corrected {
            out.corrected_fail += 1;
        }
    }
    out
}

/// Returns the line and whether the outcome matches the recorded analysis:
/// the literal claim fails exactly on the patterns with a 2-cycle and the
/// corrected reading holds everywhere.
fn criterion_5() -> (Line, bool) {
    let mut pass = true;
    let mut expected = true;
    let mut parts = Vec::new();
    for n in [3, 4, 5] {
        let c = square_check(n);
        pass &= c.literal_fail == 0;
        expected &= c.literal_fail == c.with_two_cycle
            && c.literal_fail_without_two_cycle == 0
            && c.corrected_fail == 0
            && c.checked > 0;
        parts.push(format!(
            "n={n}: {} patterns, literal claim fails on {} (all {} with a 2-cycle{}), corrected reading fails on {}",
            c.checked,
            c.literal_fail,
            c.with_two_cycle,
            c.first_literal_fail.map(|p| format!(", first {p}")).unwrap_or_default(),
            c.corrected_fail,
        ));
    }
    (
        Line {
            pass,
            detail: parts.join(" | "),
        },
        expected,
    )
}

fn criterion_6() -> Line {
    let mut rng = rng(6);
    let tols = Tolerances::default();
    let mut bad = 0;
    let mut first_bad = None;
    for _ in 0..100 {
        let n = 2 * rng.gen_range(1..=4);
        let density = rng.gen_range(0.3..1.0);
        let mut a = SignPattern::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let s = random_sign(&mut rng, density);
                a.set(i, j, s);
                a.set(j, i, -s);
            }
        }
        let mut b = RealMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let m = a.get(i, j).unit() * rng.gen_range(0.5..=2.0);
                b[(i, j)] = m;
                b[(j, i)] = -m;
            }
        }
        match is_algebraically_positive(&b, &tols) {
            Ok(None) => {}
            _ => {
                bad += 1;
                first_bad.get_or_insert(a.to_compact());
            }
        }
    }
    Line {
        pass: bad == 0,
        detail: format!(
            "100 skew patterns of orders 2..8, {bad} certified{}",
            first_bad.map(|p| format!(" (first {p})")).unwrap_or_default()
        ),
    }
}

fn criterion_7(tallies: &[&Tally]) -> Line {
    let certs: usize = tallies.iter().map(|t| t.certificates).sum();
    let bad: usize = tallies.iter().map(|t| t.witness_failures).sum();
    Line {
        pass: bad == 0 && certs > 0,
        detail: format!("{certs} certificates from criteria 1-2, {bad} witness polynomials not entrywise > 1e-9"),
    }
}

fn criterion_8() -> Line {
    let cfg = CensusConfig::new(3);
    let (mut members, mut bad) = (0, 0);
    let mut first_bad = None;
    for a in enumerate(&cfg).expect("n=3 census") {
        let v = classify(&a);
        let key = (v.verdict_str(), v.rule_str());
        let images = orbit(&a);
        assert_eq!(images.len(), 12);
        for b in images {
            members += 1;
            let w = classify(&b);
            if (w.verdict_str(), w.rule_str()) != key {
                bad += 1;
                first_bad.get_or_insert(format!("{} vs {}", a.to_compact(), b.to_compact()));
            }
        }
    }
    Line {
        pass: bad == 0,
        detail: format!(
            "{members} orbit images, {bad} verdict or rule changes{}",
            first_bad.map(|p| format!(" (first {p})")).unwrap_or_default()
        ),
    }
}

fn criterion_9() -> Line {
    let mut rng = rng(9);
    let (mut worst_eig, mut worst_tr, mut bad) = (0.0f64, 0.0f64, 0);
    let mut first_bad = None;
    for k in 0..1000 {
        let n = rng.gen_range(1..=8);
        let b = RealMatrix::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
        let ev = match eigenvalues(&b) {
            Ok(ev) => ev,
            Err(_) => {
                bad += 1;
                first_bad.get_or_insert(format!("matrix {k}: no convergence"));
                continue;
            }
        };
        let roots = durand_kerner(&char_poly_newton(&b));
        let d = if ev.len() == n { matching_distance(&ev, &roots) } else { f64::INFINITY };
        let sum: f64 = ev.iter().map(|z| z.re).sum();
        let tr = (sum - b.trace()).abs();
        worst_eig = worst_eig.max(d);
        worst_tr = worst_tr.max(tr);
        if !(d <= 1e-6 && tr <= 1e-8) {
            bad += 1;
            first_bad.get_or_insert(format!("matrix {k} (n={n}): eig {d:.2e}, trace {tr:.2e}"));
        }
    }
    Line {
        pass: bad == 0,
        detail: format!(
            "1000 matrices, worst eigenvalue distance {worst_eig:.2e}, worst trace error {worst_tr:.2e}, {bad} failures{}",
            first_bad.map(|p| format!(" ({p})")).unwrap_or_default()
        ),
    }
}

fn report(k: usize, line: &Line) {
    println!("criterion {k}: {} - {}", if line.pass { "PASS" } else { "FAIL" }, line.detail);
}

fn main() -> ExitCode {
    let (l1, t1) = criterion_1();
    report(1, &l1);
    let (l2, t2) = criterion_2();
    report(2, &l2);
    let l3 = criterion_3();
    report(3, &l3);
    let l4 = criterion_4();
    report(4, &l4);
    let (l5, as_analyzed) = criterion_5();
    report(5, &l5);
    if !l5.pass {
        println!(
            "criterion 5: the failure {} the known defect of the claim (nonzero diagonal from 2-cycles, + at i-2)",
            if as_analyzed { "matches" } else { "does NOT match" }
        );
    }
    let l6 = criterion_6();
    report(6, &l6);
    let mut all: Vec<&Tally> = vec![&t1];
    all.extend(t2.iter());
    let l7 = criterion_7(&all);
    report(7, &l7);
    let l8 = criterion_8();
    report(8, &l8);
    let l9 = criterion_9();
    report(9, &l9);

    let others = [&l1, &l2, &l3, &l4, &l6, &l7, &l8, &l9].iter().all(|l| l.pass);
    if others && (l5.pass || as_analyzed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
