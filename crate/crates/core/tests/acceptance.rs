//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod support;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRunner};
use respmod::analysis::{diff_models, InconsistencyKind};
use respmod::cli::ExitStatus;
use respmod::dsl::{parse_answers, parse_model, parse_requirements, print_model};
use respmod::elicitation::{ingest_all, information_recorded_table};
use respmod::hazards::{derive_mitigations, generate_worksheet, GuideWord, DEFAULT_MITIGATION_THRESHOLD};
use respmod::reporting::unresolved_traces;
use respmod::{build_model, Mode, Model, Severity};

use support::dot_check::parse_dot;
use support::gen::{fixed_names, model_plan, names, ModelPlan};
use support::{cli, corpus_model, corpus_text, golden};

const EVACUATE: &str = "Evacuate area";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Information required, as transcribed: item, sources, channel.
const REQUIRED_ROWS: [(&str, &str, &str); 8] = [
    ("Area map", "County council", "Radio data link to printers in local command centre"),
    ("Priority premises list", "District Council", "Radio data link to printers in local command centre"),
    ("Assembly points list", "District Council", "Radio data link to printers in local command centre"),
    ("Evacuated premises", "Police, Fire Service", "Radio from Silver Command"),
    ("Unsafe routes", "Police", "Radio from Silver Command"),
    ("Threat information", "Environment agency", "Radio from Silver Command"),
    ("Transport capacity and availability", "District Council", "Radio from Silver Command"),
    ("Police and other emergency service availability", "Police, other services", "Radio from Silver Command"),
];

const RECORDED_ITEMS: [&str; 3] = [
    "Information about evacuated premises, evacuation time and units responsible for evacuation",
    "Information about unchecked premises",
    "Information about unsafe routes",
];

const RECORDED_CHANNELS: [&str; 2] = [
    "Radio or verbal report from ground units to local Bronze Command",
    "Email or fax to Silver Command if available, otherwise radio",
];

fn unassigned_detection() -> Outcome {
    let start = Instant::now();
    let out = cli(&["analyze", "evacuation.resp"]);
    let elapsed = start.elapsed();
    ensure!(out.status == ExitStatus::Findings, "exit status {:?}", out.status);
    let unassigned: Vec<&str> = out.stdout.lines().filter(|l| l.starts_with("UNASSIGNED_RESP ")).collect();
    ensure!(unassigned.len() == 1, "{} UNASSIGNED_RESP lines", unassigned.len());
    ensure!(
        unassigned[0].starts_with("UNASSIGNED_RESP high collect-evacuee-information:"),
        "wrong subject: {}",
        unassigned[0]
    );
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("1 UNASSIGNED_RESP (collect-evacuee-information) in {} ms", elapsed.as_millis()))
}

fn required_table() -> Outcome {
    let md = cli(&["tables", "evacuation.resp", "--responsibility", EVACUATE, "--which", "required"]);
    ensure!(md.status == ExitStatus::Success, "{}", md.stderr);
    ensure!(md.stdout == golden("required.md"), "markdown differs from golden required.md");

    let csv_out = cli(&["tables", "evacuation.resp", "--responsibility", EVACUATE, "--format", "csv"]);
    ensure!(csv_out.stdout == golden("required.csv"), "csv differs from golden required.csv");
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_bytes());
    let rows: BTreeSet<(String, String, String)> = reader
        .records()
        .map(|r| {
            let r = r.map_err(|e| e.to_string())?;
            Ok((r[0].to_string(), r[1].to_string(), r[2].to_string()))
        })
        .collect::<Result<_, String>>()?;
    let expected: BTreeSet<(String, String, String)> = REQUIRED_ROWS
        .iter()
        .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
        .collect();
    ensure!(rows.len() == 8, "{} rows", rows.len());
    ensure!(rows == expected, "rows differ from transcription: {rows:?}");
    Ok("8 rows, byte-exact markdown and csv".into())
}

fn recorded_table() -> Outcome {
    let out = cli(&["tables", "evacuation.resp", "--responsibility", EVACUATE, "--which", "recorded"]);
    ensure!(out.status == ExitStatus::Success, "{}", out.stderr);
    ensure!(out.stdout == golden("recorded.md"), "differs from golden recorded.md");
    let table = information_recorded_table(&corpus_model("evacuation.resp"), EVACUATE).map_err(|e| e.to_string())?;
    ensure!(table.rows.len() == 3, "{} rows", table.rows.len());
    for (row, item) in table.rows.iter().zip(RECORDED_ITEMS) {
        ensure!(row[0] == item, "item {:?}", row[0]);
        for channel in RECORDED_CHANNELS {
            ensure!(row[1].contains(channel), "{item} lacks {channel}");
        }
    }
    Ok("3 rows, each with both channels, byte-exact".into())
}

fn hazard_worksheet() -> Outcome {
    let model = corpus_model("evacuation.resp");
    let sheet = generate_worksheet(&model, EVACUATE).map_err(|e| e.to_string())?;
    ensure!(sheet.rows.len() == 40, "{} rows", sheet.rows.len());
    for chunk in sheet.rows.chunks(5) {
        let words: Vec<GuideWord> = chunk.iter().map(|r| r.guide_word).collect();
        ensure!(words == GuideWord::ALL, "guide word order {words:?}");
    }
    let order: Vec<&str> = GuideWord::ALL.iter().map(|g| g.as_str()).collect();
    ensure!(order == ["unavailable", "inaccurate", "incomplete", "late", "early"], "{order:?}");

    let answers = parse_answers(&corpus_text("evacuation.answers")).map_err(|e| format!("{e:?}"))?;
    let ingested = ingest_all(&model, &answers, Mode::Lenient).map_err(|e| e.to_string())?;
    let sheet = generate_worksheet(&ingested, EVACUATE).map_err(|e| e.to_string())?;
    ensure!(sheet.rows.len() == 40, "{} rows after ingest", sheet.rows.len());
    let early = sheet
        .rows
        .iter()
        .find(|r| ingested.resource_name(&r.item) == "Priority premises list" && r.guide_word == GuideWord::Early)
        .ok_or("no early row")?;
    ensure!(early.consequence == "No consequence.", "early reads {:?}", early.consequence);
    ensure!(early.severity == Severity::None, "early severity {}", early.severity);

    let stubs = derive_mitigations(&ingested, EVACUATE, DEFAULT_MITIGATION_THRESHOLD).map_err(|e| e.to_string())?;
    let words: Vec<String> = stubs
        .iter()
        .filter_map(|s| match &s.derived_from {
            Some(respmod::reporting::TraceRef::Hazard { guide_word, .. }) => Some(guide_word.to_string()),
            _ => None,
        })
        .collect();
    ensure!(words == ["unavailable", "inaccurate", "incomplete", "late"], "stubs for {words:?}");
    Ok("40 rows in guide-word order; early = \"No consequence.\"/none; 4 stubs".into())
}

fn requirements_report() -> Outcome {
    let model = corpus_model("evacuation.resp");
    let reqs = parse_requirements(&corpus_text("evacuation.reqs")).map_err(|e| format!("{e:?}"))?;
    ensure!(reqs.len() == 10, "{} requirements", reqs.len());
    ensure!(reqs.iter().all(|r| !r.traces.is_empty()), "a requirement has no trace");
    let unresolved = unresolved_traces(&model, &reqs);
    ensure!(unresolved.is_empty(), "{} unresolved traces", unresolved.len());

    let out = cli(&["requirements", "evacuation.resp", "evacuation.reqs", "--report"]);
    ensure!(out.status == ExitStatus::Success, "{}", out.stderr);
    for (n, r) in (1..).zip(&reqs) {
        let line = format!("{n}. {} *({})*", r.text, r.rationale);
        ensure!(out.stdout.lines().any(|l| l == line), "missing item {n}");
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let broken = dir.path().join("broken.reqs");
    let text = corpus_text("evacuation.reqs").replacen("|Area map|", "|Flood map|", 1);
    std::fs::write(&broken, text).map_err(|e| e.to_string())?;
    let out = cli(&["requirements", "evacuation.resp", broken.to_str().unwrap(), "--report"]);
    ensure!(out.status == ExitStatus::Error, "broken trace gave {:?}", out.status);
    ensure!(out.stdout.is_empty(), "report printed despite broken trace");
    Ok("10 numbered items with rationale, all traces resolve; broken trace exits 2".into())
}

fn sample<S: Strategy>(strategy: S, cases: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::new(Config::default());
    (0..cases)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy").current())
        .collect()
}

fn reparse(text: &str) -> Result<Model, String> {
    let decls = parse_model(text).map_err(|e| format!("{e:?}"))?;
    build_model(&decls).map_err(|e| format!("{e:?}"))
}

fn round_trip() -> Outcome {
    for file in ["evacuation.resp", "evacuation-outline.resp", "shipping.resp", "golden/evacuation-ingested.resp"] {
        let m = reparse(&corpus_text(file))?;
        ensure!(reparse(&print_model(&m))? == m, "{file} does not round-trip");
    }
    let plans: Vec<ModelPlan> = sample(names().prop_flat_map(model_plan), 150);
    for plan in &plans {
        let text = plan.render();
        let m = reparse(&text)?;
        let printed = print_model(&m);
        ensure!(reparse(&printed)? == m, "random model does not round-trip:\n{text}");
    }

    let model = corpus_model("evacuation.resp");
    let answers = parse_answers(&corpus_text("evacuation.answers")).map_err(|e| format!("{e:?}"))?;
    let once = ingest_all(&model, &answers, Mode::Lenient).map_err(|e| e.to_string())?;
    let twice = ingest_all(&once, &answers, Mode::Lenient).map_err(|e| e.to_string())?;
    ensure!(once == twice, "ingesting the corpus answers twice changes the model");
    ensure!(print_model(&once) == golden("evacuation-ingested.resp"), "ingested model differs from golden");
    Ok(format!("corpus + {} random models; corpus answers ingest idempotently", plans.len()))
}

fn diff_sensitivity() -> Outcome {
    let original = corpus_text("evacuation.resp");
    let mutated = original.replacen("assigned to <Fire Service>", "assigned to <Police>", 1);
    ensure!(mutated != original, "mutation did not apply");
    let (a, b) = (reparse(&original)?, reparse(&mutated)?);
    let d = diff_models(&a, &b);
    ensure!(d.len() == 1, "{} inconsistencies", d.len());
    ensure!(d[0].kind == InconsistencyKind::AssignmentMismatch, "kind {:?}", d[0].kind);
    ensure!(d[0].responsibility == "Search and rescue", "responsibility {}", d[0].responsibility);
    ensure!(diff_models(&a, &a).is_empty(), "diff(m, m) is not empty");

    let pairs = sample((model_plan(fixed_names()), model_plan(fixed_names())), 50);
    let mut nonempty = 0;
    for (l, r) in &pairs {
        let (l, r) = (reparse(&l.render())?, reparse(&r.render())?);
        let lr = diff_models(&l, &r);
        let rl = diff_models(&r, &l);
        let swapped: Vec<_> = lr.iter().map(|p| p.swapped()).collect();
        ensure!(swapped == rl, "asymmetric diff");
        nonempty += usize::from(!lr.is_empty());
    }
    Ok(format!("1 AssignmentMismatch; diff(m, m) empty; symmetric on 50 pairs ({nonempty} differing)"))
}

fn dot_conventions() -> Outcome {
    let first = cli(&["dot", "evacuation.resp"]);
    let second = cli(&["dot", "evacuation.resp"]);
    ensure!(first.status == ExitStatus::Success, "{}", first.stderr);
    ensure!(first.stdout == second.stdout, "output differs between runs");
    let g = parse_dot(&first.stdout)?;
    let model = corpus_model("evacuation.resp");
    for r in model.responsibilities() {
        let node = g.nodes.get(r.id.as_str()).ok_or(format!("no node for {}", r.name))?;
        ensure!(node.get("style").map(String::as_str) == Some("rounded"), "{} not rounded", r.name);
    }
    let labels: Vec<&String> = g.nodes.values().filter_map(|a| a.get("label")).collect();
    ensure!(labels.iter().any(|l| *l == "<Police>"), "no angle-bracketed agent label");
    ensure!(labels.iter().any(|l| *l == "|Area map|"), "no vertical-bar information label");
    let dashed = g.edges.iter().filter(|e| e.2.get("style").map(String::as_str) == Some("dashed")).count();
    ensure!(dashed == 1, "{dashed} dashed edges");

    let shipping = parse_dot(&cli(&["dot", "shipping.resp"]).stdout)?;
    ensure!(
        shipping.nodes.values().any(|a| a.get("label").map(String::as_str) == Some("[VHF radio]")),
        "no square-bracketed physical label"
    );
    Ok("rounded, <agent>, |info|, [physical] labels; 1 dashed edge; stable; parses".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let answers = dir.path().join("skeleton.answers");
    let skeleton = cli(&["elicit", "evacuation.resp", "--responsibility", EVACUATE]);
    std::fs::write(&answers, &skeleton.stdout).map_err(|e| e.to_string())?;
    let answers = answers.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["check", "evacuation.resp", "--strict"],
        vec!["analyze", "evacuation.resp"],
        vec!["analyze", "evacuation.resp", "--format", "json"],
        vec!["elicit", "evacuation.resp", "--responsibility", EVACUATE],
        vec!["ingest", "evacuation.resp", "evacuation.answers"],
        vec!["ingest", "evacuation.resp", answers],
        vec!["tables", "evacuation.resp", "--responsibility", EVACUATE, "--which", "both"],
        vec!["tables", "evacuation.resp", "--responsibility", EVACUATE, "--which", "both", "--format", "csv"],
        vec!["hazards", "golden/evacuation-ingested.resp", "--responsibility", EVACUATE],
        vec!["hazards", "golden/evacuation-ingested.resp", "--responsibility", EVACUATE, "--format", "csv"],
        vec!["mitigations", "golden/evacuation-ingested.resp", "--responsibility", EVACUATE],
        vec!["requirements", "evacuation.resp", "evacuation.reqs"],
        vec!["requirements", "evacuation.resp", "evacuation.reqs", "--report"],
        vec!["dot", "evacuation.resp"],
        vec!["diff", "evacuation.resp", "evacuation-outline.resp"],
        vec!["diff", "evacuation.resp", "evacuation-outline.resp", "--format", "json"],
    ];
    let mut seen = BTreeSet::new();
    for args in &commands {
        let a = cli(args);
        let b = cli(args);
        ensure!(a.status != ExitStatus::Error, "{args:?} failed: {}", a.stderr);
        ensure!(!a.stdout.is_empty(), "{args:?} printed nothing");
        ensure!(a.stdout == b.stdout && a.status == b.status, "{args:?} differs between runs");
        seen.insert(args[0]);
    }
    ensure!(seen.len() == 10, "only {} subcommands covered", seen.len());
    Ok(format!("{} invocations over all 10 subcommands byte-identical", commands.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("unassigned responsibility detection", unassigned_detection),
        ("information required table", required_table),
        ("information recorded table", recorded_table),
        ("hazard worksheet shape", hazard_worksheet),
        ("requirements report", requirements_report),
        ("round-trip", round_trip),
        ("diff sensitivity", diff_sensitivity),
        ("dot conventions", dot_conventions),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, check)) in (1..).zip(criteria) {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL {name}: {why}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
