// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for profile files.
//!
//! Mutating verbs read a prototype file, apply one atomic edit and write the
//! file back. Exit status is 0 on success, 1 when the edit or file is
//! rejected, 2 on a usage error.

mod args;

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use args::*;
use pipeprof::datatable::build_table;
use pipeprof::editops::{
    merge_patch, CopyAnchor, DistanceEdit, EditResult, GroundEdit, LengthEdit, MoveTarget, NewObject, ObjectValue,
    Operation, SlopeEdit,
};
use pipeprof::model::{validate, Color, ObjectRef, Profile, Vector};
use pipeprof::render::render_svg;
use pipeprof::sample::sample_profile;
use pipeprof::store;

/// A failed command: exit code and message.
struct Failure(u8, String);

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Self(1, e.to_string())
    }

    fn usage(e: impl std::fmt::Display) -> Self {
        Self(2, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn load(path: &Path) -> Result<Profile, Failure> {
    store::load_profile(path).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

fn save(p: &Profile, path: &Path) -> Result<usize, Failure> {
    store::save_profile(p, path).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

/// A closed stdout (as in `| head`) is not an error worth a panic.
fn print_json(v: &impl serde::Serialize) {
    let _ = writeln!(io::stdout(), "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn print_result(r: &EditResult, json: bool) {
    if json {
        print_json(r);
        return;
    }
    let list = |s: &std::collections::BTreeSet<ObjectRef>| {
        s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    };
    for (label, set) in [("created", &r.created), ("changed", &r.changed), ("deleted", &r.deleted)] {
        if !set.is_empty() {
            println!("{label}: {}", list(set));
        }
    }
}

/// Reads the file, applies one operation and writes the file back.
fn mutate(file: &Path, op: Operation, json: bool) -> Outcome {
    let mut p = load(file)?;
    let r = op.apply(&mut p).map_err(Failure::domain)?;
    save(&p, file)?;
    print_result(&r, json);
    Ok(())
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::usage(format!("bad {what}: {e}")))
}

/// Argument text, or a file's contents when it starts with `@`, or stdin
/// for `-`.
fn text_arg(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(Failure::domain)?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| Failure::domain(format!("{path}: {e}")))
    } else {
        Ok(arg.to_owned())
    }
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Outcome {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::domain(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(bytes).map_err(Failure::domain),
    }
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.cmd {
        Cmd::New { file, sample } => {
            let p = if sample { sample_profile() } else { Profile::new() };
            let n = save(&p, &file)?;
            if json {
                print_json(&json!({ "bytes": n }));
            } else {
                println!("wrote {} ({n} bytes)", file.display());
            }
            Ok(())
        }
        Cmd::Load { file, table } => {
            let p = load(&file)?;
            if table {
                print_json(&build_table(&p));
            } else if json {
                print_json(&p);
            } else {
                println!("{}", summary(&p));
            }
            Ok(())
        }
        Cmd::Save { file, from } => {
            let p: Profile = parse_json(&text_arg(&from)?, "profile")?;
            let n = save(&p, &file)?;
            if json {
                print_json(&json!({ "bytes": n }));
            } else {
                println!("wrote {} ({n} bytes)", file.display());
            }
            Ok(())
        }
        Cmd::Add { file, object } => {
            let object: NewObject = parse_json(&text_arg(&object)?, "object")?;
            mutate(&file, Operation::Add { object }, json)
        }
        Cmd::Del { file, target } => mutate(&file, Operation::Delete { target }, json),
        Cmd::Move { file, target, vertex, dx, dy } => {
            let target = match (target, vertex) {
                (t, None) => MoveTarget::Object(t),
                (ObjectRef::Pipe(pipe), Some(index)) => MoveTarget::PipeVertex { pipe, index },
                (ObjectRef::Surface(role), Some(index)) => MoveTarget::SurfaceVertex { role, index },
                (t, Some(_)) => return Err(Failure::usage(format!("{t} has no vertices"))),
            };
            mutate(&file, Operation::Move { target, delta: Vector::new(dx, dy) }, json)
        }
        Cmd::Copy { file, source, at, section } => {
            let anchor = match (at, section) {
                (Some(p), None) => CopyAnchor::Point(p.0),
                (None, Some(s)) => CopyAnchor::Section(s),
                _ => return Err(Failure::usage("give exactly one of --at or --section")),
            };
            mutate(&file, Operation::Copy { source, anchor }, json)
        }
        Cmd::Props { file, target, set } => match set {
            None => {
                let p = load(&file)?;
                let v = ObjectValue::of(&p, target).ok_or_else(|| Failure::domain(format!("unresolved reference {target}")))?;
                print_json(&v);
                Ok(())
            }
            Some(patch) => {
                let patch: Value = parse_json(&text_arg(&patch)?, "patch")?;
                mutate(&file, Operation::PatchProperties { target, patch }, json)
            }
        },
        Cmd::Pipe(cmd) => run_pipe(cmd, json),
        Cmd::Surface(cmd) => run_surface(cmd, json),
        Cmd::Text { file, text, lines } => mutate(&file, Operation::EditText { text, lines }, json),
        Cmd::TableSet(cmd) => run_table(cmd, json),
        Cmd::MoveProfile { file, dx, dy } => mutate(&file, Operation::MoveProfile { delta: Vector::new(dx, dy) }, json),
        Cmd::Settings { file, set, defaults } => {
            let p = load(&file)?;
            let Some(patch) = set else {
                if defaults {
                    print_json(&p.defaults);
                } else {
                    print_json(&p.settings);
                }
                return Ok(());
            };
            let patch: Value = parse_json(&text_arg(&patch)?, "patch")?;
            let op = if defaults {
                let mut v = serde_json::to_value(&p.defaults).expect("serializable");
                merge_patch(&mut v, &patch);
                Operation::UpdateDefaults { defaults: Box::new(parse_json(&v.to_string(), "defaults")?) }
            } else {
                let mut v = serde_json::to_value(&p.settings).expect("serializable");
                merge_patch(&mut v, &patch);
                Operation::UpdateSettings { settings: Box::new(parse_json(&v.to_string(), "settings")?) }
            };
            mutate(&file, op, json)
        }
        Cmd::Catalog { catalog, into, name } => {
            let cat = store::load_catalog(&catalog).map_err(|e| Failure::domain(format!("{}: {e}", catalog.display())))?;
            match (into, name) {
                (None, None) => {
                    if json {
                        print_json(&cat);
                    } else {
                        for g in &cat.groups {
                            println!("# {}", g.title);
                            for t in &g.entries {
                                println!("  {}\t{}", t.outer_diameter, t.name);
                            }
                        }
                    }
                    Ok(())
                }
                (Some(file), Some(name)) => {
                    let t = cat.find(&name).ok_or_else(|| Failure::domain(format!("{name:?} is not in the catalog")))?;
                    mutate(&file, Operation::Add { object: NewObject::PipeType(t.clone()) }, json)
                }
                _ => Err(Failure::usage("--into and --name go together")),
            }
        }
        Cmd::Spec { file, output } => {
            let p = load(&file)?;
            match output {
                Some(out) => {
                    let n = store::export_spec(&p, &out).map_err(Failure::domain)?;
                    if json {
                        print_json(&json!({ "rows": n }));
                    } else {
                        println!("wrote {} ({n} rows)", out.display());
                    }
                    Ok(())
                }
                None => write_out(None, store::spec_tsv(&p).as_bytes()),
            }
        }
        Cmd::Render { file, output } => {
            let p = load(&file)?;
            let svg = render_svg(&p).map_err(Failure::domain)?;
            write_out(output.as_deref(), &svg)
        }
        Cmd::List { dir } => {
            let list = store::list_prototypes(&dir).map_err(|e| Failure::domain(format!("{}: {e}", dir.display())))?;
            if json {
                print_json(&list);
            } else {
                for e in &list {
                    match &e.error {
                        None => println!("{}\t{}", e.name, e.size),
                        Some(err) => println!("{}\t{}\tunreadable: {err}", e.name, e.size),
                    }
                }
            }
            Ok(())
        }
        Cmd::Validate { file } => {
            let bytes = fs::read(&file).map_err(|e| Failure::domain(format!("{}: {e}", file.display())))?;
            let violations = match store::from_bytes(&bytes) {
                Ok(_) => Vec::new(),
                Err(store::StoreError::Invalid(v)) => v,
                Err(e) => return Err(Failure::domain(e)),
            };
            if json {
                let v: Vec<String> = violations.iter().map(ToString::to_string).collect();
                print_json(&v);
            } else {
                for v in &violations {
                    println!("{v}");
                }
            }
            if violations.is_empty() {
                Ok(())
            } else {
                Err(Failure::domain(format!("{} violation(s)", violations.len())))
            }
        }
    }
}

fn run_pipe(cmd: PipeCmd, json: bool) -> Outcome {
    let (file, op) = match cmd {
        PipeCmd::Continue { file, pipe, end, points } => {
            (file, Operation::ContinuePipe { pipe, end: end.into(), points: points.into_iter().map(|p| p.0).collect() })
        }
        PipeCmd::Split { file, pipe, x } => (file, Operation::SplitPipe { pipe, x }),
        PipeCmd::Divide { file, pipe, index } => (file, Operation::DividePipe { pipe, index }),
        PipeCmd::Merge { file, pipe, end, r#type, color } => {
            (file, Operation::MergePipes { pipe, end: end.into(), resolved_type: r#type, resolved_color: color.map(Color) })
        }
        PipeCmd::DelJoint { file, pipe, index } => (file, Operation::DeletePipeJoint { pipe, index }),
    };
    mutate(&file, op, json)
}

fn run_surface(cmd: SurfaceCmd, json: bool) -> Outcome {
    let (file, op) = match cmd {
        SurfaceCmd::Extend { file, role, end, points } => (
            file,
            Operation::ExtendSurface { role, end: end.into(), points: points.into_iter().map(|p| p.0).collect() },
        ),
        SurfaceCmd::Split { file, role, x } => (file, Operation::SplitSurface { role, x }),
        SurfaceCmd::DelVertex { file, role, index } => (file, Operation::DeleteSurfaceVertex { role, index }),
    };
    mutate(&file, op, json)
}

fn run_table(cmd: TableCmd, json: bool) -> Outcome {
    let (file, op) = match cmd {
        TableCmd::Ground { file, role, x, elev, mode } => {
            let choice = match mode {
                GroundMode::AddVertex => GroundEdit::AddVertex,
                GroundMode::MoveLeft => GroundEdit::MoveLeftEnd,
                GroundMode::MoveRight => GroundEdit::MoveRightEnd,
                GroundMode::Shift => GroundEdit::ShiftSegment,
            };
            (file, Operation::EditGround { role, station_x: x, new_elev: elev, choice })
        }
        TableCmd::Length { file, pipe, seg, len, side, keep_slope } => (
            file,
            Operation::EditLength { pipe, segment: seg, new_len: len, choice: LengthEdit { side: side.into(), keep_slope } },
        ),
        TableCmd::Slope { file, pipe, seg, slope, side } => (
            file,
            Operation::EditSlope { pipe, segment: seg, new_slope: slope, choice: SlopeEdit { side: side.into() } },
        ),
        TableCmd::Distance { file, left, right, dist, side } => (
            file,
            Operation::EditDistance { left, right, new_dist: dist, choice: DistanceEdit { side: side.into() } },
        ),
    };
    mutate(&file, op, json)
}

fn summary(p: &Profile) -> String {
    let mut parts = vec![format!(
        "scales 1:{} / 1:{}",
        p.settings.build.scales.scale_h, p.settings.build.scales.scale_v
    )];
    let counts = [
        ("surfaces", p.surfaces.iter().count()),
        ("above-ground", p.above_ground.len()),
        ("sections", p.sections.len()),
        ("turn points", p.turn_points.len()),
        ("wells", p.wells.len()),
        ("casings", p.casings.len()),
        ("pipe types", p.pipe_types.len()),
        ("pipes", p.pipes.len()),
        ("texts", p.texts.len()),
        ("leaders", p.leaders.len()),
        ("dimensions", p.dimensions.len()),
        ("elevation marks", p.elevation_marks.len()),
    ];
    parts.extend(counts.iter().filter(|(_, n)| *n > 0).map(|(k, n)| format!("{k}: {n}")));
    let v = validate(p);
    if !v.is_empty() {
        parts.push(format!("{} violation(s)", v.len()));
    }
    parts.join("\n")
}

