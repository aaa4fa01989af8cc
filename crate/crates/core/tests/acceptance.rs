//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every criterion is reported even
//! when an earlier one fails; the process exits non-zero if any fails.

use std::time::{Duration, Instant};

use ckq::ck::check_orthogonality;
use ckq::multiplier::{j_zero, oracle_multiplier, theorem_multiplier};
use ckq::perm::SigmaPermutation;
use ckq::presentation::{Presentation, SeriesPresentation};
use ckq::reference::{verify, Scoreboard, Status, VerifyOptions};
use ckq::scalar::JAssignment;

// Pinned budgets and orders.
const ORDER_REGRESSION: usize = 8;
const ORDER_OVERLAP: usize = 6;
const ORDER_STAR: usize = 8;
const BUDGET_MULTIPLIER: Duration = Duration::from_secs(1);
const BUDGET_ORACLE: Duration = Duration::from_secs(120);
const BUDGET_UNDEFINED_EACH: Duration = Duration::from_secs(1);
const BUDGET_VECTOR3_EACH: Duration = Duration::from_secs(1);
const BUDGET_VECTOR4: Duration = Duration::from_secs(5);
const BUDGET_SPHERE: Duration = Duration::from_secs(10);
const BUDGET_ISOMORPHISM: Duration = Duration::from_secs(60);
const BUDGET_PROPERTIES: Duration = Duration::from_secs(300);
const BUDGET_DETERMINISM: Duration = Duration::from_secs(600);

struct Outcome {
    ok: bool,
    detail: String,
}

fn within(ok: bool, detail: impl Into<String>, t: Duration, budget: Duration) -> Outcome {
    let detail = detail.into();
    if t > budget {
        Outcome { ok: false, detail: format!("{detail}; took {t:.2?} > {budget:?}") }
    } else {
        Outcome { ok, detail: format!("{detail} ({t:.2?})") }
    }
}

fn s(v: &[usize]) -> SigmaPermutation {
    SigmaPermutation::new(v.to_vec()).unwrap()
}

fn multipliers(table: &[(&[usize], &str)]) -> Outcome {
    let t = Instant::now();
    let bad: Vec<String> = table
        .iter()
        .filter_map(|(sig, want)| {
            let got = theorem_multiplier(&s(sig)).to_string();
            (got != *want).then(|| format!("{} -> {got}, want {want}", s(sig)))
        })
        .collect();
    within(bad.is_empty(), if bad.is_empty() { format!("{} values", table.len()) } else { bad.join("; ") }, t.elapsed(), BUDGET_MULTIPLIER)
}

fn c1() -> Outcome {
    multipliers(&[(&[1, 2, 3], "j1*j2"), (&[1, 3, 2], "j1"), (&[2, 1, 3], "j1^2*j2")])
}

fn c2() -> Outcome {
    multipliers(&[
        (&[1, 2, 3, 4], "j1*j2*j3"),
        (&[1, 2, 4, 3], "j1*j2"),
        (&[1, 3, 4, 2], "j1"),
        (&[3, 1, 2, 4], "j1^2*j2^2*j3"),
        (&[2, 1, 3, 4], "j1^2*j2*j3"),
        (&[2, 1, 4, 3], "j1^2*j2"),
    ])
}

fn c3() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for n in [3, 4] {
        for sig in SigmaPermutation::all(n) {
            if oracle_multiplier(&sig) != theorem_multiplier(&sig) {
                bad.push(format!("{sig}"));
            }
        }
    }
    let mut insufficient = Vec::new();
    for sig in SigmaPermutation::all(5) {
        if !theorem_multiplier(&sig).dominates(&oracle_multiplier(&sig)) {
            insufficient.push(format!("{sig}"));
        }
    }
    let ok = bad.is_empty() && insufficient.is_empty();
    let detail = if ok {
        "oracle = theorem on S(3), S(4); theorem >= oracle on S(5)".to_string()
    } else {
        format!("mismatch: {}; insufficient: {}", bad.join(" "), insufficient.join(" "))
    };
    within(ok, detail, t.elapsed(), BUDGET_ORACLE)
}

fn c4() -> Outcome {
    let a = JAssignment::parse("iota,1,1").unwrap();
    let mut details = Vec::new();
    let mut ok = true;
    for sig in [[3, 1, 2, 4], [2, 1, 3, 4], [2, 1, 4, 3]] {
        let t = Instant::now();
        let sig = s(&sig);
        let raised = Presentation::generate(&sig, &j_zero(&sig)).specialize(&a).is_err();
        let o = within(raised, format!("{sig}: {}", if raised { "undefined" } else { "defined" }), t.elapsed(), BUDGET_UNDEFINED_EACH);
        ok &= o.ok;
        details.push(o.detail);
    }
    Outcome { ok, detail: details.join("; ") }
}

/// Looks up reference checks; errata count as passing but are named.
fn from_board(board: &Scoreboard, ids: &[&str], t: Duration, budget: Duration) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for id in ids {
        match board.get(id) {
            Some(c) if c.status == Status::Pass => {}
            Some(c) if c.status == Status::Erratum => notes.push(format!("{id}: erratum, {}", c.note.clone().unwrap_or_default())),
            Some(c) => {
                ok = false;
                notes.push(format!("{id}: {}", c.detail));
            }
            None => {
                ok = false;
                notes.push(format!("{id}: missing"));
            }
        }
    }
    let head = format!("{} references", ids.len());
    let detail = if notes.is_empty() { head } else { format!("{head}; {}", notes.join("; ")) };
    within(ok, detail, t, budget)
}

fn board(ids: &[&str]) -> (Scoreboard, Duration) {
    let t = Instant::now();
    let only = Some(ids.iter().map(|s| s.to_string()).collect());
    let b = verify(&VerifyOptions { order: ORDER_REGRESSION, corrupt: None, only });
    (b, t.elapsed())
}

fn checked(ids: &[&str], budget: Duration) -> Outcome {
    let (b, t) = board(ids);
    from_board(&b, ids, t, budget)
}

fn c5() -> Outcome {
    // budget applies to each reference on its own
    let ids = ["31", "32", "2'", "3q-3"];
    let mut ok = true;
    let mut details = Vec::new();
    for id in ids {
        let o = checked(&[id], BUDGET_VECTOR3_EACH);
        ok &= o.ok;
        details.push(format!("{id}: {}", o.detail));
    }
    Outcome { ok, detail: details.join("; ") }
}

fn c6() -> Outcome {
    checked(&["bn-0/sigma0", "bn-0/sigmaIII", "bn-1/sigma0", "bn-1/sigmaIII", "bn-1/sigmaII", "bn-2/sigma0", "bn-2/sigmaII"], BUDGET_VECTOR4)
}

fn c7() -> Outcome {
    let ids = [
        "3q-7", "3q-8", "1-3q-7", "2-3q-7", "5'", "4v-2", "4q-8", "4q-9", "4q-10", "4q-11", "4q-12", "4q-13", "4q-14", "4q-15",
    ];
    checked(&ids, BUDGET_SPHERE)
}

fn c8() -> Outcome {
    let ids = [
        "O3(iota1;sigma') ~ O3(iota1;sigma0)",
        "S2(iota1;sigma') ~ S2(iota1;sigma0)",
        "4q-12: S3(iota2;sigmaV) ~ S3(iota2;sigmaIV)",
        "4q-14: S3(iota3;sigmaIII) ~ S3(iota3;sigmaIV)",
        "3q-3 vs 31",
        "3q-7 vs 1-3q-7",
        "4v-2 vs 4q-11",
        "classes O4, iota1",
        "classes O4, iota2",
        "classes O4, iota3",
        "classes S3, iota1",
        "classes S3, iota2",
        "classes S3, iota3",
    ];
    checked(&ids, BUDGET_ISOMORPHISM)
}

fn generic(sig: &SigmaPermutation, order: usize) -> SeriesPresentation {
    Presentation::generate(sig, &theorem_multiplier(sig)).to_series(order).unwrap()
}

fn c9() -> Outcome {
    let t = Instant::now();
    let mut cases: Vec<SigmaPermutation> = SigmaPermutation::all(3);
    cases.extend(SigmaPermutation::named(4).into_iter().map(|(_, s)| s));
    let mut bad = Vec::new();
    for sig in &cases {
        let p = generic(sig, ORDER_OVERLAP);
        if !p.overlaps().unwrap().is_empty() {
            bad.push(format!("{sig}: overlaps"));
        }
        if !p.check_central().unwrap() {
            bad.push(format!("{sig}: invariant not central"));
        }
        let q = generic(sig, ORDER_STAR);
        if !q.star_involutive().unwrap() || !q.star_compatible().unwrap() {
            bad.push(format!("{sig}: star"));
        }
    }
    for n in [3, 4] {
        for sig in SigmaPermutation::all(n) {
            for a in JAssignment::all_physical(n - 1) {
                let p = Presentation::generate(&sig, &theorem_multiplier(&sig)).specialize(&a).unwrap();
                if !p.to_series(0).unwrap().is_commutative() {
                    bad.push(format!("{sig} at {a}: not commutative at v=0"));
                }
            }
        }
    }
    for n in [3, 4, 5] {
        for sig in SigmaPermutation::all(n) {
            if !check_orthogonality(&sig) {
                bad.push(format!("{sig}: D not orthogonal"));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{} presentations; v=0 on S(3),S(4) x all assignments; D on S(3..5)", cases.len())
    } else {
        bad.join("; ")
    };
    within(bad.is_empty(), detail, t.elapsed(), BUDGET_PROPERTIES)
}

fn c10() -> Outcome {
    let t = Instant::now();
    let run = || serde_json::to_string_pretty(&verify(&VerifyOptions { order: ORDER_REGRESSION, corrupt: None, only: None }).to_json()).unwrap();
    let (a, b) = (run(), run());
    within(a == b, format!("{} bytes", a.len()), t.elapsed(), BUDGET_DETERMINISM)
}

fn main() {
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "multipliers N=3", c1()),
        (2, "multipliers N=4", c2()),
        (3, "oracle agrees with theorem", c3()),
        (4, "J_0 contractions undefined", c4()),
        (5, "vector regressions N=3", c5()),
        (6, "vector regressions N=4", c6()),
        (7, "sphere regressions", c7()),
        (8, "isomorphism claims and class counts", c8()),
        (9, "property suite", c9()),
        (10, "deterministic verify report", c10()),
    ];
    let mut failed = 0;
    for (k, name, o) in &results {
        println!("criterion {k:2} {} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.ok as u32;
    }
    println!("{} of {} criteria pass", results.len() as u32 - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
