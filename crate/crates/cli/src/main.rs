//! Command-line driver: batch computation of the bracket invariants, corpus
//! validation and seeded invariance fuzzing.
//!
//! Exit codes: 0 success, 1 domain error (invalid or ineligible diagram,
//! failing fuzz trajectory), 2 I/O or usage error.

use std::fmt::Write as _;
use std::process::ExitCode;

use nonorbracket_core as core;

const USAGE: &str = "\
usage: nonorbracket <command> [flags] <files>

commands:
  validate <files...>        check diagram files, report violations
  j <file>                   J(D; u, v) of each pseudo-classical knot diagram
  bracket <file>             normalized classical Kauffman bracket (orientable)
  writhe <file>              writhe numbers w, w1, w2, |w2|
  cover <file>               orientation double cover of a Klein-bottle knot
  fuzz <file>                random Reidemeister trajectories, checking that
                             canonical J and |w2| are preserved

flags:
  --format text|json         output encoding (default text)
  --labeling A|B             cable labeling for j/writhe (default A)
  --canonical                print the u <-> u^-1 canonical representative
  --generalized              homology-refined J (j command)
  --moves N                  moves per fuzz trajectory (default 20)
  --trials N                 fuzz trajectories (default 100)
  --seed N                   base seed (default 0)
  --max-crossings N          fuzz crossing cap (default 16)
  -o PATH                    write output to PATH instead of stdout
";

struct Config {
    command: String,
    files: Vec<String>,
    format_json: bool,
    labeling: core::Labeling,
    canonical: bool,
    generalized: bool,
    moves: usize,
    trials: usize,
    seed: u64,
    max_crossings: u32,
    out_path: Option<String>,
}

fn parse_args(args: &[String]) -> Result<Config, String> {
    let mut cfg = Config {
        command: String::new(),
        files: Vec::new(),
        format_json: false,
        labeling: core::Labeling::A,
        canonical: false,
        generalized: false,
        moves: 20,
        trials: 100,
        seed: 0,
        max_crossings: 16,
        out_path: None,
    };
    let mut it = args.iter();
    cfg.command = it.next().cloned().ok_or("missing command")?;
    while let Some(arg) = it.next() {
        let mut take = |name: &str| -> Result<String, String> {
            it.next().cloned().ok_or(format!("{name} needs a value"))
        };
        match arg.as_str() {
            "--format" => {
                cfg.format_json = match take("--format")?.as_str() {
                    "json" => true,
                    "text" => false,
                    other => return Err(format!("unknown format '{other}'")),
                }
            }
            "--labeling" => {
                cfg.labeling = match take("--labeling")?.as_str() {
                    "A" => core::Labeling::A,
                    "B" => core::Labeling::B,
                    other => return Err(format!("unknown labeling '{other}'")),
                }
            }
            "--canonical" => cfg.canonical = true,
            "--generalized" => cfg.generalized = true,
            "--moves" => cfg.moves = take("--moves")?.parse().map_err(|_| "bad --moves")?,
            "--trials" => cfg.trials = take("--trials")?.parse().map_err(|_| "bad --trials")?,
            "--seed" => cfg.seed = take("--seed")?.parse().map_err(|_| "bad --seed")?,
            "--max-crossings" => {
                cfg.max_crossings = take("--max-crossings")?
                    .parse()
                    .map_err(|_| "bad --max-crossings")?
            }
            "-o" => cfg.out_path = Some(take("-o")?),
            other if other.starts_with('-') => return Err(format!("unknown flag '{other}'")),
            _ => cfg.files.push(arg.clone()),
        }
    }
    if cfg.files.is_empty() {
        return Err("no input files".into());
    }
    Ok(cfg)
}

fn read_file(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn emit(cfg: &Config, text: &str) -> Result<(), String> {
    match &cfg.out_path {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{path}: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

enum Failure {
    Domain(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Io(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn run(cfg: &Config) -> Result<(), Failure> {
    match cfg.command.as_str() {
        "validate" => cmd_validate(cfg),
        "j" => cmd_j(cfg),
        "bracket" => cmd_bracket(cfg),
        "writhe" => cmd_writhe(cfg),
        "cover" => cmd_cover(cfg),
        "fuzz" => cmd_fuzz(cfg),
        other => Err(Failure::Io(format!("unknown command '{other}'\n{USAGE}"))),
    }
}

fn cmd_validate(cfg: &Config) -> Result<(), Failure> {
    let mut all_valid = true;
    let mut out = String::new();
    for path in &cfg.files {
        let text = read_file(path).map_err(Failure::Io)?;
        match core::parse_diagram_file_raw(&text) {
            Err(e) => {
                all_valid = false;
                let _ = writeln!(out, "{path}: {e}");
            }
            Ok(diagrams) => {
                for d in diagrams {
                    let report = d.validate();
                    if report.is_valid() {
                        let _ = writeln!(out, "{path}: {} OK", d.name);
                    } else {
                        all_valid = false;
                        for v in &report.violations {
                            let _ = writeln!(out, "{path}: {}: {v}", d.name);
                        }
                    }
                }
            }
        }
    }
    emit(cfg, &out).map_err(Failure::Io)?;
    if all_valid {
        Ok(())
    } else {
        Err(Failure::Domain("validation failed".into()))
    }
}

fn load_diagrams(cfg: &Config) -> Result<Vec<core::Diagram>, Failure> {
    let mut out = Vec::new();
    for path in &cfg.files {
        let text = read_file(path).map_err(Failure::Io)?;
        out.extend(core::parse_diagram_file(&text).map_err(domain)?);
    }
    Ok(out)
}

fn cmd_j(cfg: &Config) -> Result<(), Failure> {
    let mut out = String::new();
    for d in load_diagrams(cfg)? {
        let la = core::propagate_labels(&d, cfg.labeling).map_err(domain)?;
        if cfg.generalized {
            let g = core::generalized_j(&d, &la).map_err(domain)?;
            if cfg.format_json {
                let _ = writeln!(out, "{}", g.to_json());
            } else {
                let _ = writeln!(out, "{}", g.to_text());
            }
        } else {
            let mut j = core::j_polynomial(&d, &la).map_err(domain)?;
            if cfg.canonical {
                j = j.canonical_pair();
            }
            if cfg.format_json {
                let _ = writeln!(out, "{}", j.to_json());
            } else {
                let _ = writeln!(out, "{}", j.to_text());
            }
        }
    }
    emit(cfg, &out).map_err(Failure::Io)
}

fn cmd_bracket(cfg: &Config) -> Result<(), Failure> {
    let mut out = String::new();
    for d in load_diagrams(cfg)? {
        let b = core::classical_bracket(&d)
            .map_err(domain)?
            .canonical_u_inverse();
        if cfg.format_json {
            let _ = writeln!(out, "{}", b.to_json());
        } else {
            let _ = writeln!(out, "{b}");
        }
    }
    emit(cfg, &out).map_err(Failure::Io)
}

fn cmd_writhe(cfg: &Config) -> Result<(), Failure> {
    let mut out = String::new();
    for d in load_diagrams(cfg)? {
        let la = core::propagate_labels(&d, cfg.labeling).map_err(domain)?;
        let w = core::writhe_numbers(&d, &la).map_err(domain)?;
        if cfg.format_json {
            let _ = writeln!(
                out,
                "{}",
                serde_json::json!({
                    "w": { "re": w.w.re, "im": w.w.im },
                    "w1": w.w1,
                    "w2": w.w2,
                    "w2_abs": w.w2_abs(),
                })
            );
        } else {
            let _ = writeln!(
                out,
                "w={}, w1={}, w2={}, |w2|={}",
                w.w,
                w.w1,
                w.w2,
                w.w2_abs()
            );
        }
    }
    emit(cfg, &out).map_err(Failure::Io)
}

fn cmd_cover(cfg: &Config) -> Result<(), Failure> {
    let mut out = String::new();
    for d in load_diagrams(cfg)? {
        let c = core::double_cover(&d).map_err(domain)?;
        if cfg.format_json {
            let _ = writeln!(out, "{}", core::diagram_to_json(&c));
        } else {
            out.push_str(&core::serialize_diagram(&c));
        }
    }
    emit(cfg, &out).map_err(Failure::Io)
}

fn cmd_fuzz(cfg: &Config) -> Result<(), Failure> {
    let mut report = String::new();
    let mut export = Vec::new();
    let mut failed = false;
    for d in load_diagrams(cfg)? {
        let outcome = core::fuzz_invariance(&d, cfg.trials, cfg.moves, cfg.seed, cfg.max_crossings)
            .map_err(domain)?;
        let _ = writeln!(
            report,
            "{}: {} trials, {} steps, {} failure(s)",
            d.name,
            outcome.trials,
            outcome.steps,
            outcome.failures.len()
        );
        for f in &outcome.failures {
            failed = true;
            let _ = writeln!(report, "  trial {} step {}: {}", f.trial, f.step, f.detail);
        }
        if cfg.out_path.is_some() {
            // JSON export of the trajectories themselves
            let mut trajs = Vec::new();
            for trial in 0..cfg.trials {
                let seq = core::random_move_sequence(
                    &d,
                    cfg.moves,
                    cfg.seed.wrapping_add(trial as u64),
                    cfg.max_crossings,
                );
                let steps: Vec<serde_json::Value> = seq
                    .iter()
                    .map(|(m, diag)| {
                        serde_json::json!({
                            "move": serde_json::to_value(m).unwrap(),
                            "diagram": core::serialize_diagram(diag),
                        })
                    })
                    .collect();
                trajs.push(serde_json::json!({ "seed": cfg.seed.wrapping_add(trial as u64), "steps": steps }));
            }
            export.push(serde_json::json!({ "link": d.name, "trajectories": trajs }));
        }
    }
    if let Some(path) = &cfg.out_path {
        let payload = serde_json::Value::Array(export).to_string();
        std::fs::write(path, payload).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
    }
    print!("{report}");
    if failed {
        Err(Failure::Domain("fuzz found invariance violations".into()))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cfg = match parse_args(&args) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
