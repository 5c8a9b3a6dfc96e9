use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::time::Instant;

use flagtrop::flagmat::is_flag_matroid;
use flagtrop::plucker::{generate_all, three_term_relations};
use flagtrop::tropic::{first_fldr_violation, first_three_term_violation, TropVerdict};
use flagtrop::TropicalPoint;
use serde_json::{json, Value};

use crate::suites::{self, SuiteResult};
use crate::{cache, sampling, Cli, CliError, Command, Common, Mode, Status, Theorem, SCHEMA_VERSION};

/// A finished command: its report and exit status.
pub struct Outcome {
    pub report: Value,
    pub status: Status,
    pub summary: String,
}

fn config_json(common: &Common) -> Value {
    json!({
        "n": common.n(),
        "seed": common.seed,
        "samples": common.samples,
        "boxRadius": common.box_radius,
    })
}

fn report(command: &str, common: &Common, body: Value, pass: bool, started: Instant) -> Value {
    let mut out = json!({
        "schemaVersion": SCHEMA_VERSION,
        "command": command,
        "config": config_json(common),
        "pass": pass,
    });
    if let (Value::Object(map), Value::Object(extra)) = (&mut out, body) {
        map.extend(extra);
        map.insert(
            "timing".into(),
            json!({ "elapsedMs": started.elapsed().as_millis() as u64 }),
        );
    }
    out
}

fn write_lines(out: Option<&Path>, lines: &[String]) -> Result<(), CliError> {
    let mut text = lines.join("\n");
    if !lines.is_empty() {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn relations(common: &Common, three_term: bool, started: Instant) -> Result<Outcome, CliError> {
    let n = common.n();
    let set = if three_term {
        three_term_relations(n)?
    } else {
        generate_all(n)?
    };
    let lines: Vec<String> = set.iter().map(|r| r.to_json().to_string()).collect();
    write_lines(common.out.as_deref(), &lines)?;
    let body = json!({ "threeTerm": three_term, "count": set.len() });
    Ok(Outcome {
        report: report("relations", common, body, true, started),
        status: Status::Pass,
        summary: format!("{} relations for n = {n}", set.len()),
    })
}

fn cells(common: &Common, started: Instant) -> Result<Outcome, CliError> {
    let n = common.n();
    let atlas = cache::load_atlas(n)?;
    let lines: Vec<String> = atlas.cells().iter().map(|c| c.summary_json().to_string()).collect();
    write_lines(common.out.as_deref(), &lines)?;
    let body = json!({ "count": atlas.len() });
    Ok(Outcome {
        report: report("cells", common, body, true, started),
        status: Status::Pass,
        summary: format!("{} cells for n = {n}", atlas.len()),
    })
}

fn read_point(path: &Path) -> Result<TropicalPoint, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::io(path, e))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::io(path, e))?
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        flagtrop::Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        }
    })?;
    Ok(TropicalPoint::from_json(&value)?)
}

fn violation_json(v: &TropVerdict) -> Value {
    json!({
        "relation": v.relation,
        "provenance": v.provenance.to_string(),
        "minimum": v.minimum.to_string(),
        "achieving": v.achieving.iter().map(|t| json!({
            "A": t.a.to_string(),
            "B": t.b.to_string(),
            "sign": t.sign,
        })).collect::<Vec<_>>(),
    })
}

/// Membership verdict for one mode, as `(member, details)`.
pub fn check_point(p: &TropicalPoint, mode: Mode) -> Result<(bool, Value), CliError> {
    let relation_verdict = |v: Option<TropVerdict>| match v {
        None => (true, json!({})),
        Some(v) => (false, json!({ "violated": violation_json(&v) })),
    };
    let matroid = is_flag_matroid(&p.support());
    let not_matroid = || (false, json!({ "reason": "support is not a flag matroid" }));
    Ok(match mode {
        Mode::Dressian => relation_verdict(first_fldr_violation(p, false)?),
        Mode::TnnDressian => relation_verdict(first_fldr_violation(p, true)?),
        Mode::ThreeTerm if !matroid => not_matroid(),
        Mode::TnnThreeTerm if !matroid => not_matroid(),
        Mode::ThreeTerm => relation_verdict(first_three_term_violation(p, false)?),
        Mode::TnnThreeTerm => relation_verdict(first_three_term_violation(p, true)?),
        Mode::Tnn => {
            let atlas = cache::load_atlas(p.n())?;
            match suites::tropical_certificate_json(&atlas, p)? {
                Some(cert) => (true, json!({ "certificate": cert })),
                None if atlas.locate_cell(&p.support()).is_none() => {
                    (false, json!({ "reason": "no cell has this support" }))
                }
                None => (false, json!({ "reason": "not in the image of the cell map" })),
            }
        }
    })
}

fn check(common: &Common, mode: Mode, path: &Path, started: Instant) -> Result<Outcome, CliError> {
    let p = read_point(path)?;
    if let Some(n) = common.n.filter(|&n| usize::from(n) != p.n()) {
        return Err(CliError::Usage(format!(
            "point has n = {} but --n {n} was given",
            p.n()
        )));
    }
    let (member, details) = check_point(&p, mode)?;
    let mut body = json!({
        "mode": mode.name(),
        "point": p.to_json(),
        "member": member,
    });
    if let (Value::Object(map), Value::Object(extra)) = (&mut body, details) {
        map.extend(extra);
    }
    let mut report = report("check", common, body, member, started);
    report["config"]["n"] = Value::from(p.n());
    Ok(Outcome {
        report,
        status: if member { Status::Pass } else { Status::Counterexample },
        summary: format!(
            "{p} is {}a member ({})",
            if member { "" } else { "not " },
            mode.name()
        ),
    })
}

/// Runs the suites behind one theorem key.
pub fn run_suites(common: &Common, theorem: Theorem) -> Result<Vec<SuiteResult>, CliError> {
    let n = common.n();
    let atlas = cache::load_atlas(n)?;
    let (seed, samples, radius) = (common.seed, common.samples as usize, common.box_radius);
    Ok(match theorem {
        Theorem::NonnegPluecker => vec![
            suites::relation_soundness(n, seed, samples)?,
            suites::nonneg_pluecker(&atlas, seed, samples, 10 * samples),
        ],
        Theorem::ThreeTermReconstruct => vec![suites::three_term_reconstruct(&atlas, seed, samples)],
        Theorem::Dressian3m => vec![suites::dressian_3m(&atlas, seed, samples, radius)],
        Theorem::Main => vec![suites::main_theorem(&atlas, seed, samples, radius)],
        Theorem::PsiMonomial => vec![suites::psi_monomial(&atlas, seed, samples)],
        Theorem::Puiseux => vec![suites::tropical_image(&atlas, seed, samples)],
    })
}

fn verify(common: &Common, theorem: Theorem, started: Instant) -> Result<Outcome, CliError> {
    let results = run_suites(common, theorem)?;
    let pass = results.iter().all(SuiteResult::passed);
    let summary = results
        .iter()
        .map(|r| {
            format!(
                "{}: {} checked, {} failed{}",
                r.name,
                r.checked,
                r.failed,
                if r.passed() { "" } else { " (counterexamples in the JSON report)" }
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    let body = json!({
        "theorem": theorem.name(),
        "suites": results.iter().map(SuiteResult::to_json).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        report: report("verify", common, body, pass, started),
        status: if pass { Status::Pass } else { Status::Counterexample },
        summary,
    })
}

fn sample(common: &Common, started: Instant) -> Result<Outcome, CliError> {
    let n = common.n();
    let atlas = cache::load_atlas(n)?;
    let lines: Vec<String> = (0..common.samples)
        .map(|s| {
            let mut rng = sampling::stream(common.seed, "sample", 0, s);
            let (idx, c, p) = sampling::image_point(&mut rng, &atlas, 10);
            let cell = &atlas.cells()[idx];
            json!({
                "point": p.to_json(),
                "certificate": { "v": cell.v().images(), "w": cell.w().images(), "c": c },
            })
            .to_string()
        })
        .collect();
    write_lines(common.out.as_deref(), &lines)?;
    let body = json!({ "count": lines.len() });
    Ok(Outcome {
        report: report("sample", common, body, true, started),
        status: Status::Pass,
        summary: format!("{} sample points for n = {n}", lines.len()),
    })
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let started = Instant::now();
    match &cli.command {
        Command::Relations { common, three_term } => relations(common, *three_term, started),
        Command::Cells { common } => cells(common, started),
        Command::Check { common, mode, point } => check(common, *mode, point, started),
        Command::Verify { common, theorem } => verify(common, *theorem, started),
        Command::Sample { common } => sample(common, started),
    }
}

fn common(cli: &Cli) -> &Common {
    match &cli.command {
        Command::Relations { common, .. }
        | Command::Cells { common }
        | Command::Check { common, .. }
        | Command::Verify { common, .. }
        | Command::Sample { common } => common,
    }
}

/// Runs a command and prints its report. Data-producing commands write their
/// lines to `--out` or stdout; in the latter case the report goes to stderr.
pub fn run(cli: &Cli) -> Status {
    let outcome = match execute(cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::Error;
        }
    };
    let common = common(cli);
    let text = if common.json {
        serde_json::to_string_pretty(&outcome.report).expect("serializable")
    } else {
        outcome.summary.clone()
    };
    let data_command = matches!(
        cli.command,
        Command::Relations { .. } | Command::Cells { .. } | Command::Sample { .. }
    );
    if data_command && common.out.is_none() {
        eprintln!("{text}");
        return outcome.status;
    }
    let report_file = !data_command && common.out.is_some();
    if report_file {
        let path = common.out.as_deref().unwrap();
        let body = serde_json::to_string_pretty(&outcome.report).expect("serializable") + "\n";
        if let Err(e) = fs::write(path, body) {
            eprintln!("error: {}", CliError::io(path, e));
            return Status::Error;
        }
    }
    println!("{text}");
    outcome.status
}
