//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so that every criterion reports even when an earlier one fails.

use std::panic;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use flagtrop::flagcomb::{positive_distinguished_subexpression, Word};
use flagtrop::flagmat::{extremal_indices, xi};
use flagtrop::mrcells::build_cell;
use flagtrop::{CellAtlas, Mat, Permutation, Poly, Subset, Support};
use flagtrop_cli::suites::{self, SuiteResult};
use serde_json::Value;

const SEED: u64 = 42;

type Check = fn() -> Result<String, String>;

fn suite_summary(results: &[SuiteResult]) -> Result<String, String> {
    let text = results
        .iter()
        .map(|r| format!("{} n={}: {}/{}", r.name, r.stats.get("n").copied().unwrap_or(0), r.checked - r.failed, r.checked))
        .collect::<Vec<_>>()
        .join(", ");
    match results.iter().find(|r| !r.passed()) {
        None => Ok(text),
        Some(r) => Err(format!(
            "{text}; first counterexample: {}",
            r.counterexamples.first().map(Value::to_string).unwrap_or_default()
        )),
    }
}

fn tagged(mut r: SuiteResult, n: usize) -> SuiteResult {
    r.stats.insert("n".into(), n as u64);
    r
}

fn atlas(n: usize) -> std::sync::Arc<CellAtlas> {
    CellAtlas::for_n(n).expect("atlas builds")
}

fn worked_examples() -> Result<String, String> {
    // n = 4 cell for v = s2 inside w = s1 s3 s2 s1
    let w = Word::new(4, vec![1, 3, 2, 1]).unwrap().product();
    let cell = build_cell(4, &Permutation::simple(4, 2).unwrap(), &w).map_err(|e| e.to_string())?;
    let m = cell.matrix();
    let shown: Vec<Vec<String>> = (0..4)
        .map(|i| (0..4).map(|j| m.get(i, j).to_string()).collect())
        .collect();
    let expected = [
        ["1", "a3", "a1", "0"],
        ["0", "0", "1", "0"],
        ["0", "-1", "0", "a2"],
        ["0", "0", "0", "1"],
    ];
    if shown != expected {
        return Err(format!("cell matrix {shown:?}"));
    }

    let word = Word::new(4, vec![1, 2, 3, 1, 2, 1]).unwrap();
    let v = Word::new(4, vec![1, 2, 1]).unwrap().product();
    let sub = positive_distinguished_subexpression(&word, &v).map_err(|e| e.to_string())?;
    if sub.positions() != [1, 2, 4] {
        return Err(format!("subexpression positions {:?}", sub.positions()));
    }

    let var = |i: usize| Poly::var(7, i);
    let (a, b, c, d, e, f, g) = (var(0), var(1), var(2), var(3), var(4), var(5), var(6));
    let prod = |fs: &[&Poly]| fs.iter().fold(Poly::one(7), |acc, x| &acc * *x);
    let (one, zero) = (Poly::one(7), Poly::zero(7));
    let rows = vec![
        vec![
            one.clone(),
            &(&a + &e) + &g,
            &(&prod(&[&a, &b]) + &prod(&[&a, &f])) + &prod(&[&e, &f]),
            prod(&[&a, &b, &c]),
            prod(&[&a, &b, &c, &d]),
        ],
        vec![zero.clone(), one.clone(), &b + &f, prod(&[&b, &c]), prod(&[&b, &c, &d])],
        vec![zero.clone(), zero.clone(), one.clone(), c.clone(), prod(&[&c, &d])],
        vec![zero.clone(), zero.clone(), zero.clone(), one.clone(), d.clone()],
        vec![zero.clone(), zero.clone(), zero.clone(), zero, one],
    ];
    let p = Mat::from_rows(rows).unwrap().all_pluecker().map_err(|e| e.to_string())?;
    let s = |t: &str| Subset::parse(5, t).unwrap();
    let zeros: Vec<String> = p.level(2).filter(|(_, x)| x.is_zero()).map(|(i, _)| i.to_string()).collect();
    if zeros != ["4,5"] {
        return Err(format!("vanishing size-2 coordinates {zeros:?}"));
    }
    let support = Support::from_coords(&p, |x| !x.is_zero());
    if xi(&support, &s("1,2")) != s("1,5") || xi(&support, &s("1,5")) != s("3,5") {
        return Err("Ξ steps differ".into());
    }
    let extremal: Vec<String> = extremal_indices(&support)
        .level(2)
        .iter()
        .map(|i| format!("P{i}={}", p.get(i)))
        .collect();
    if extremal != ["P1,2=1", "P1,5=a2*a3*a4", "P3,5=a2*a3*a4*a5*a6"] {
        return Err(format!("extremal size-2 coordinates {extremal:?}"));
    }
    Ok("cell matrix, subexpression (1,2,4), extremal {12, 15, 35}".into())
}

fn relation_soundness() -> Result<String, String> {
    let results = (3..=5)
        .map(|n| suites::relation_soundness(n, SEED, 1000).map(|r| tagged(r, n)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    suite_summary(&results)
}

fn per_cell_criterion(run: fn(&CellAtlas) -> SuiteResult) -> Result<String, String> {
    let results: Vec<SuiteResult> = (2..=4).map(|n| tagged(run(&atlas(n)), n)).collect();
    suite_summary(&results)
}

fn nonnegativity() -> Result<String, String> {
    per_cell_criterion(|a| suites::nonneg_pluecker(a, SEED, 100, 1000))
}

fn psi_monomiality() -> Result<String, String> {
    per_cell_criterion(|a| suites::psi_monomial(a, SEED, 100))
}

fn three_term_reconstruction() -> Result<String, String> {
    per_cell_criterion(|a| suites::three_term_reconstruct(a, SEED, 100))
}

fn tropical_image() -> Result<String, String> {
    per_cell_criterion(|a| suites::tropical_image(a, SEED, 100))
}

fn main_theorem() -> Result<String, String> {
    let box_points = suites::exhaustive_box(3, 2);
    let patterns: std::collections::BTreeSet<Support> = box_points.iter().map(|p| p.support()).collect();
    // every support with no empty level: 7 * 7 choices of nonempty levels
    if patterns.len() != 49 {
        return Err(format!("box covers {} support patterns", patterns.len()));
    }
    let three = tagged(suites::main_theorem(&atlas(3), SEED, 1, 2), 3);
    let four = tagged(suites::main_theorem(&atlas(4), SEED, 10_000, 2), 4);
    if three.checked != box_points.len() as u64 || four.checked != 10_000 {
        return Err("unexpected number of points".into());
    }
    suite_summary(&[three, four])
}

fn without_timing(report: &str) -> Result<Value, String> {
    let mut value: Value = serde_json::from_str(report).map_err(|e| e.to_string())?;
    value
        .as_object_mut()
        .ok_or("report is not an object")?
        .remove("timing")
        .ok_or("report has no timing field")?;
    Ok(value)
}

fn determinism() -> Result<String, String> {
    let run = || -> Result<(String, Option<i32>), String> {
        let out = Command::new(env!("CARGO_BIN_EXE_flagtrop"))
            .args(["verify", "main", "--n", "4", "--seed", "42", "--json"])
            .env_remove("FLAGTROP_CACHE_DIR")
            .output()
            .map_err(|e| e.to_string())?;
        Ok((String::from_utf8_lossy(&out.stdout).into_owned(), out.status.code()))
    };
    let (first, code1) = run()?;
    let (second, code2) = run()?;
    if code1 != Some(0) || code2 != Some(0) {
        return Err(format!("exit codes {code1:?}, {code2:?}"));
    }
    let (a, b) = (without_timing(&first)?, without_timing(&second)?);
    if a != b {
        return Err("reports differ".into());
    }
    Ok(format!("identical reports ({} bytes without timing)", a.to_string().len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 8] = [
        ("worked examples", worked_examples, Duration::from_secs(1)),
        ("relation soundness, n = 3..5", relation_soundness, Duration::from_secs(120)),
        ("nonnegativity of cells and certification, n <= 4", nonnegativity, Duration::from_secs(300)),
        ("extremal monomiality and parameter recovery, n <= 4", psi_monomiality, Duration::from_secs(300)),
        ("three-term reconstruction, n <= 4", three_term_reconstruction, Duration::from_secs(300)),
        ("tropical image and Puiseux coherence, n <= 4", tropical_image, Duration::from_secs(300)),
        ("equality of the nonnegative tropical sets", main_theorem, Duration::from_secs(600)),
        ("determinism of verify main --n 4 --seed 42", determinism, Duration::from_secs(600)),
    ];
    let mut failures = 0;
    for (i, (title, check, limit)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = started.elapsed();
        let result = match result {
            Ok(detail) if elapsed > *limit => Err(format!("{detail}; exceeded {limit:?}")),
            other => other,
        };
        let (status, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if result.is_err() {
            failures += 1;
        }
        println!(
            "criterion {} {status} {title} [{:.2} s] {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
