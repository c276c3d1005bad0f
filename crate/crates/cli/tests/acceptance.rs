//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every line is printed; exits nonzero when any criterion fails.
//!
//! Criterion 10 (q = 7) takes minutes and several GB; it runs only with
//! `RPG_EXTENDED=1`.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::OnceLock;

use rpg_core::audit::{self, CheckOutcome};
use rpg_core::graph::{all_diameters, Analysis, Bfs, DiameterMode, PowerGraph};
use rpg_core::mat::JordanType;
use rpg_core::pgl::{group_order, GraphKind, GroupSpec};
use rpg_core::theorem::{verify, ComponentFamily, Verdict};
use rpg_core::witness::build_lower_witness;

fn pgl(q: u32) -> &'static Analysis {
    static CACHE: OnceLock<[OnceLock<Analysis>; 6]> = OnceLock::new();
    let slots = CACHE.get_or_init(Default::default);
    slots[q as usize].get_or_init(|| Analysis::build(q, GraphKind::Pgl).expect("supported q"))
}

fn gl(q: u32) -> PowerGraph {
    PowerGraph::build(&GroupSpec::new(q, GraphKind::Gl).expect("supported q"))
}

/// `(count, size, diameter)` for every census record.
fn records(an: &Analysis) -> Vec<(u64, u64, u32)> {
    let mut v: Vec<_> = an.census.records.iter().map(|r| (r.count, r.size, r.diameter)).collect();
    v.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.cmp(b)));
    v
}

fn main_diameter(an: &Analysis) -> Option<u32> {
    an.census.pivot_component.as_ref().map(|p| p.diameter)
}

type Outcome = (bool, String);

fn criterion_1() -> Outcome {
    let an = pgl(2);
    let c = &an.census;
    let all_one = c.records.iter().all(|r| r.diameter == 1);
    let ok = c.components == 51 && all_one && c.vertex_total() == 167;
    (
        ok,
        format!(
            "expected 51 components all of diameter 1 on 167 vertices; observed {} components, all diameter 1: {all_one}, {} vertices, records {:?}",
            c.components,
            c.vertex_total(),
            records(an)
        ),
    )
}

fn criterion_2() -> Outcome {
    let an = pgl(4);
    let expected = vec![(1, 39039, 13), (960, 20, 2), (20160, 2, 1)];
    let got = records(an);
    let main_ok = main_diameter(an) == Some(13);
    let small_ok = got.iter().any(|&r| r == (20160, 2, 1)) && got.iter().any(|&r| r == (960, 20, 2));
    let ok = an.census.components == 21121 && main_ok && small_ok && got.len() == 3;
    (
        ok,
        format!(
            "expected 21121 components = 1 (d 13) + 20160 (size 2, d 1) + 960 (size 20, d 2), i.e. {expected:?}; observed {} components {got:?}",
            an.census.components
        ),
    )
}

fn criterion_3() -> Outcome {
    let an = pgl(5);
    let got = records(an);
    let ok = main_diameter(an) == Some(12)
        && got.len() == 3
        && got.contains(&(3720, 4, 1))
        && got.contains(&(4000, 30, 1))
        && an.census.components == 7721;
    (ok, format!("observed {} components {got:?}", an.census.components))
}

fn criterion_4() -> Outcome {
    let an = pgl(3);
    let c = &an.census;
    let npj = c.records.iter().find(|r| r.types == [JordanType::NPJ]);
    let irr = c.records.iter().find(|r| r.types == [JordanType::Irreducible]);
    let oracle = group_order(3) / (3 * (27 - 1));
    let report = verify(3, c).expect("q = 3 verifies");
    let irr_entry = report.entry(ComponentFamily::Irreducible).expect("irreducible record");
    let ok = main_diameter(an) == Some(11)
        && npj.is_some_and(|r| (r.count, r.size, r.diameter) == (312, 2, 1))
        && irr.is_some_and(|r| r.count == oracle && r.size == 12)
        && oracle == 144
        && report.verdict == Verdict::Discrepancy
        && !irr_entry.matches;
    (
        ok,
        format!(
            "main diameter {:?}; NPJ {:?}; irreducible {:?} vs oracle |GL3(3)|/78 = {oracle}; verdict {:?}",
            main_diameter(an),
            npj.map(|r| (r.count, r.size, r.diameter)),
            irr.map(|r| (r.count, r.size, r.diameter)),
            report.verdict
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (q, want) in [(3, 11), (4, 13), (5, 12)] {
        let an = pgl(q);
        let g = &an.graph;
        let w = build_lower_witness(q).expect("witness exists");
        let d = Bfs::new(g.vertex_count()).distance(g, g.id_of(&w.a).unwrap(), g.id_of(&w.b).unwrap());
        ok &= d == Some(want) && main_diameter(an) == Some(want);
        parts.push(format!("q={q}: {d:?} (want {want})"));
    }
    (ok, parts.join(", "))
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [2, 3] {
        let an = pgl(q);
        let full = all_diameters(&an.graph, &an.labeling, DiameterMode::Full);
        let same = full == an.diameters;
        ok &= same;
        parts.push(format!("q={q}: {} components agree: {same}", full.len()));
    }
    (ok, parts.join(", "))
}

fn summarise(outcomes: &[(String, CheckOutcome)]) -> Outcome {
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|(_, o)| !o.passed() || o.checked == 0)
        .map(|(ctx, o)| format!("[{ctx}] {o}"))
        .collect();
    let checked: u64 = outcomes.iter().map(|(_, o)| o.checked).sum();
    if failed.is_empty() {
        (true, format!("{} checks, {checked} items, zero violations", outcomes.len()))
    } else {
        (false, failed.join("; "))
    }
}

fn criterion_7() -> Outcome {
    let mut out: Vec<(String, CheckOutcome)> = Vec::new();
    for q in [4, 5, 7, 8, 9] {
        out.push((format!("q={q}"), audit::factorization_suite(q, 1000, 0).expect("q >= 3")));
    }
    for q in [3, 5] {
        out.push((format!("q={q}"), audit::order_two_coverage(pgl(q)).expect("odd q")));
    }
    let four = pgl(4);
    out.push(("q=4".into(), audit::prime_order_coverage(four, 3).expect("p0 = 3 divides 3")));
    let vertices = (0..four.graph.vertex_count() as u32).map(|v| four.graph.matrix(v));
    out.push(("q=4".into(), audit::mersenne_order_shapes(four.graph.field(), vertices).expect("q = 4")));
    for q in [3, 4, 5] {
        for o in audit::obstruction_checks(pgl(q)).expect("pgl") {
            out.push((format!("q={q}"), o));
        }
    }
    for q in [3, 4] {
        let g = gl(q);
        out.push((format!("GL q={q}"), audit::pivot_pairwise_distance(&g, 8)));
        out.push((format!("GL q={q}"), audit::unipotent_jordan_pivot_distance(&g, 8)));
    }
    summarise(&out)
}

fn criterion_8() -> Outcome {
    let mut out = Vec::new();
    let mut counts = BTreeMap::new();
    for q in [3, 4, 5] {
        let o = audit::edge_restriction_sample(&pgl(q).graph, 10_000, 0).expect("sampling");
        counts.insert(q, o.checked);
        out.push((format!("q={q}"), o));
    }
    let (ok, detail) = summarise(&out);
    (ok && counts.values().all(|&n| n >= 10_000), format!("{detail}; sampled {counts:?}"))
}

fn criterion_9() -> Outcome {
    let dir = std::env::temp_dir().join(format!("rpg-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let run = |threads: &str| {
        let out = dir.join(format!("verify-q4-t{threads}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_rpg"))
            .args(["verify", "--q", "4", "--threads", threads, "--out", out.to_str().unwrap()])
            .status()
            .expect("binary runs");
        (status.code(), std::fs::read(&out).unwrap_or_default())
    };
    let (c1, a) = run("1");
    let (c8, b) = run("8");
    let _ = std::fs::remove_dir_all(&dir);
    let ok = !a.is_empty() && a == b && c1 == c8;
    (ok, format!("{} bytes each, identical: {}, exit codes {c1:?}/{c8:?}", a.len(), a == b))
}

fn criterion_10() -> Option<Outcome> {
    if std::env::var("RPG_EXTENDED").ok().as_deref() != Some("1") {
        return None;
    }
    let an = Analysis::build(7, GraphKind::Pgl).expect("q = 7");
    let d = main_diameter(&an);
    Some((d == Some(8), format!("q=7 main diameter {d:?}, {} components", an.census.components)))
}

fn main() {
    let criteria: Vec<(u32, fn() -> Outcome)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(v) => v,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        println!("criterion {n}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(n);
        }
    }
    match criterion_10() {
        None => println!("criterion 10: SKIPPED (stretch tier; set RPG_EXTENDED=1)"),
        Some((ok, detail)) => {
            println!("criterion 10: {} ({detail})", if ok { "PASS" } else { "FAIL" });
            if !ok {
                failed.push(10);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
