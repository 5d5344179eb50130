//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::ops::ControlFlow;
use std::process::ExitCode;
use std::time::Instant;

use degseq::anchored::{anchor_indices, detect, realize_extreme, safe_index_sets};
use degseq::digraph_core::{classify_vertices, cycle_from, find_anchored_c3, is_induced_c3};
use degseq::fixtures::{appendix_fixture_check, RowVerdict, Table};
use degseq::hh_ops::{parallel_step, realize_havel_hakimi, realize_kleitman_wang};
use degseq::oracle::{
    anchored_indices_oracle, enumerate_realizations, exists_realization,
    exists_undirected_realization, for_each_realization, ill_defined_indices_oracle, isomorphic,
    EnumerationBudget,
};
use degseq::realizer::{realize_eulerian, realize_parallel, realize_parallel_alt};
use degseq::seq_core::{corrected_conjugate, is_digraphic, is_graphic};
use degseq::{AnchorCase, Digraph, IndexSet, IntPairSeq, IntSeq, KwDirection};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn set(items: &[usize]) -> IndexSet {
    items.iter().copied().collect()
}

/// Collects up to three failure descriptions and a count.
fn tally<T: Sync>(items: &[T], check: impl Fn(&T) -> Result<(), String> + Sync) -> Outcome {
    let failures: Vec<String> = items.par_iter().filter_map(|x| check(x).err()).collect();
    if failures.is_empty() {
        Ok(format!("{} cases, 0 mismatches", items.len()))
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        Err(format!("{} of {} cases fail; first: {}", failures.len(), items.len(), shown.join("; ")))
    }
}

fn conjugate_fixture() -> Outcome {
    let got = corrected_conjugate(&IntSeq::new(vec![4, 3, 4, 2, 1]));
    if got.values() == [4, 3, 2, 3, 2] {
        Ok("(4,3,4,2,1) -> (4,3,2,3,2)".into())
    } else {
        Err(format!("got {:?}", got.values()))
    }
}

fn oracle_equivalence(family: &[IntPairSeq], budget: &EnumerationBudget) -> Outcome {
    tally(family, |d| {
        let exists = exists_realization(d, budget).map_err(|e| format!("{d}: {e}"))?;
        if exists == is_digraphic(d) {
            Ok(())
        } else {
            Err(format!("{d}: is_digraphic {} but oracle {exists}", is_digraphic(d)))
        }
    })
}

fn characterization(digraphic: &[IntPairSeq], budget: &EnumerationBudget) -> Outcome {
    tally(digraphic, |d| {
        let detected = anchor_indices(d).map_err(|e| format!("{d}: {e}"))?;
        let ill = ill_defined_indices_oracle(d, budget).map_err(|e| format!("{d}: {e}"))?;
        let anchored = anchored_indices_oracle(d, budget).map_err(|e| format!("{d}: {e}"))?;
        if detected == ill && ill == anchored {
            Ok(())
        } else {
            Err(format!("{d}: detect {detected:?}, ill-defined {ill:?}, anchored {anchored:?}"))
        }
    })
}

fn worked_examples() -> Outcome {
    let c3 = IntPairSeq::from_pairs(&[(1, 1); 3]);
    let c3_anchors = anchor_indices(&c3).map_err(|e| e.to_string())?;
    if c3_anchors != set(&[1, 2, 3]) {
        return Err(format!("C3 anchors {c3_anchors:?}"));
    }
    let six = IntPairSeq::from_pairs(&[(1, 2), (2, 3), (0, 1), (2, 3), (5, 0), (2, 3)]);
    let reports = detect(&six).map_err(|e| e.to_string())?;
    let [r] = reports.as_slice() else {
        return Err(format!("6-vertex example has {} windows", reports.len()));
    };
    let expected = (AnchorCase::SingleLow, 1, 0, 4, set(&[1, 2, 4, 6]), set(&[1]));
    let got = (r.case_tag, r.k, r.l, r.n, r.scaffold.clone(), r.anchors.clone());
    if got == expected {
        Ok("C3 anchors {1,2,3}; 6-vertex case ii, k=1, l=0, n=4, scaffold {1,2,4,6}, anchors {1}".into())
    } else {
        Err(format!("6-vertex report {got:?}"))
    }
}

fn safe_sets(digraphic: &[IntPairSeq]) -> Outcome {
    tally(digraphic, |d| {
        for i in d.indices() {
            let pair = safe_index_sets(d, i).map_err(|e| format!("{d} at {i}: {e}"))?;
            let residual = parallel_step(d, &pair).map_err(|e| format!("{d} at {i}: {e}"))?;
            if !is_digraphic(&residual) {
                return Err(format!("{d} at {i}: residual {residual} is not digraphic"));
            }
        }
        Ok(())
    })
}

fn check_output(d: &IntPairSeq, name: &str, result: Result<Digraph, impl std::fmt::Display>) -> Result<(), String> {
    match (is_digraphic(d), result) {
        (true, Ok(g)) if g.degree_sequence() == *d => Ok(()),
        (true, Ok(g)) => Err(format!("{name} on {d} realized {}", g.degree_sequence())),
        (true, Err(e)) => Err(format!("{name} failed on digraphic {d}: {e}")),
        (false, Ok(_)) => Err(format!("{name} realized non-digraphic {d}")),
        (false, Err(_)) => Ok(()),
    }
}

fn realizers(family: &[IntPairSeq], undirected: &[IntSeq], budget: &EnumerationBudget) -> Outcome {
    let directed = tally(family, |d| {
        check_output(d, "parallel", realize_parallel(d))?;
        check_output(d, "parallel-alt", realize_parallel_alt(d))?;
        check_output(d, "kw+", realize_kleitman_wang(d, KwDirection::Plus))?;
        check_output(d, "kw-", realize_kleitman_wang(d, KwDirection::Minus))
    })?;
    let plain = tally(undirected, |d| {
        let exists = exists_undirected_realization(d, budget).map_err(|e| format!("{d:?}: {e}"))?;
        if exists != is_graphic(d) {
            return Err(format!("{:?}: is_graphic {} but oracle {exists}", d.values(), !exists));
        }
        match (exists, realize_havel_hakimi(d)) {
            (true, Ok(g)) if g.degree_sequence() == IntPairSeq::symmetric(d) && g.unpaired_arcs().is_empty() => Ok(()),
            (true, Ok(_)) => Err(format!("hh on {:?} realized the wrong degrees", d.values())),
            (true, Err(e)) => Err(format!("hh failed on graphic {:?}: {e}", d.values())),
            (false, Ok(_)) => Err(format!("hh realized non-graphic {:?}", d.values())),
            (false, Err(_)) => Ok(()),
        }
    })?;
    Ok(format!("directed: {directed}; undirected: {plain}"))
}

fn structural(anchored: &[(IntPairSeq, IndexSet)], budget: &EnumerationBudget) -> Outcome {
    let realizations = std::sync::atomic::AtomicUsize::new(0);
    let summary = tally(anchored, |(d, anchors)| {
        let mut failure = None;
        for_each_realization(d, budget, |g| {
            realizations.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            for &j in anchors {
                let triples = find_anchored_c3(g, j).expect("anchor is a vertex");
                let passes = triples.iter().any(|&t| {
                    cycle_from(g, t, j).is_some_and(|cycle| classify_vertices(g, cycle).is_ok())
                });
                if !passes {
                    failure = Some(format!("{d}: anchor {j} in {:?}", g.arcs()));
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        })
        .map_err(|e| format!("{d}: {e}"))?;
        failure.map_or(Ok(()), Err)
    })?;
    Ok(format!("{summary}, {} realizations", realizations.into_inner()))
}

fn eulerian_theorem(sequences: &[IntPairSeq]) -> Outcome {
    tally(sequences, |d| {
        let g = realize_eulerian(d).map_err(|e| format!("{d}: {e}"))?;
        if g.degree_sequence() != *d {
            return Err(format!("{d}: realized {}", g.degree_sequence()));
        }
        let unpaired = g.unpaired_arcs();
        if d.out_sum() % 2 == 0 {
            return if unpaired.is_empty() { Ok(()) } else { Err(format!("{d}: even sum, unpaired {unpaired:?}")) };
        }
        let mut vertices: Vec<usize> = unpaired.iter().flat_map(|&(u, v)| [u, v]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let ok = unpaired.len() == 3
            && vertices.len() == 3
            && is_induced_c3(&g, vertices[0], vertices[1], vertices[2]);
        if ok {
            Ok(())
        } else {
            Err(format!("{d}: odd sum, unpaired {unpaired:?}"))
        }
    })
}

fn extreme_unidigraphic(budget: &EnumerationBudget) -> Outcome {
    let mut notes = Vec::new();
    for m in [1, 2] {
        let d = common::extreme(m);
        let built = realize_extreme(&d).map_err(|e| e.to_string())?;
        let all = enumerate_realizations(&d, budget).map_err(|e| e.to_string())?;
        for g in &all {
            if !isomorphic(g, &built).map_err(|e| e.to_string())? {
                return Err(format!("m={m}: realization {:?} is not isomorphic to the construction", g.arcs()));
            }
        }
        notes.push(format!("m={m}: {} labeled realizations, one class", all.len()));
    }
    Ok(notes.join("; "))
}

fn fixtures() -> Outcome {
    let mut notes = Vec::new();
    let mut failed = Vec::new();
    for (table, rows) in [(Table::R1, 16), (Table::R2, 84)] {
        let report = appendix_fixture_check(table).map_err(|e| e.to_string())?;
        if report.rows.len() != rows {
            return Err(format!("{table} has {} rows, expected {rows}", report.rows.len()));
        }
        failed.extend(
            report.rows.iter().filter(|r| r.verdict == RowVerdict::Fail).map(|r| format!("{table} {}", r.label)),
        );
        notes.push(format!("{table}: {}/{} checkmark rows pass", report.checkmark_passes(), report.checkmark_rows()));
    }
    if failed.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("failing rows: {}", failed.join(", ")))
    }
}

fn main() -> ExitCode {
    let budget = EnumerationBudget::default();
    let family = common::criterion_family();
    let digraphic: Vec<IntPairSeq> = family.iter().filter(|d| is_digraphic(d)).cloned().collect();
    let anchored: Vec<(IntPairSeq, IndexSet)> = digraphic
        .iter()
        .filter_map(|d| {
            let anchors = anchor_indices(d).ok()?;
            (!anchors.is_empty()).then(|| (d.clone(), anchors))
        })
        .collect();
    let undirected = common::undirected_family(&family);
    let eulerian: Vec<IntPairSeq> = (1..=6)
        .flat_map(|n| common::eulerian(n, 14))
        .filter(is_digraphic)
        .collect();

    let criteria: Vec<Criterion> = vec![
        ("corrected conjugate fixture", Box::new(conjugate_fixture)),
        ("digraphicality oracle equivalence", Box::new(|| oracle_equivalence(&family, &budget))),
        ("anchored characterization", Box::new(|| characterization(&digraphic, &budget))),
        ("worked examples", Box::new(worked_examples)),
        ("safe index sets", Box::new(|| safe_sets(&digraphic))),
        ("realizer correctness", Box::new(|| realizers(&family, &undirected, &budget))),
        ("class structure of anchored realizations", Box::new(|| structural(&anchored, &budget))),
        ("eulerian realizations", Box::new(|| eulerian_theorem(&eulerian))),
        ("extreme sequences are unidigraphic", Box::new(|| extreme_unidigraphic(&budget))),
        ("case tables", Box::new(fixtures)),
    ];

    let mut all_pass = true;
    for (number, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", number + 1),
            Err(detail) => {
                all_pass = false;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", number + 1);
            }
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
