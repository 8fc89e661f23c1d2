//! `crtypes`: finite type invariants of polynomial model hypersurfaces.

mod model;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crtypes_core::fixtures;
use crtypes_core::invariants::{self, TypeValue};
use crtypes_core::normalize;
use crtypes_core::psh::{self, PshVerdict};
use crtypes_core::tangency::{self, TangencyProblem};
use crtypes_core::{parse_poly, Poly};

use model::{Model, ModelFile};

pub enum CliError {
    /// Malformed input: exit code 1.
    Input(String),
    /// Structured mathematical failure: exit code 2.
    Math(String),
}

fn math<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Math(e.to_string())
}

#[derive(Parser)]
#[command(name = "crtypes", version, about = "Finite type invariants of polynomial model hypersurfaces")]
struct Cli {
    /// JSON output (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Plain `key: value` output.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    /// Model file (JSON).
    #[arg(long, conflicts_with = "fixture")]
    model: Option<PathBuf>,
    /// Use a shipped fixture by name instead of a file.
    #[arg(long)]
    fixture: Option<String>,
    /// Override caps.bracket_cap.
    #[arg(long)]
    cap: Option<u32>,
    /// Override caps.degree_cap.
    #[arg(long)]
    degree_cap: Option<u32>,
    /// Override caps.coeff_set, comma separated.
    #[arg(long)]
    coeff_set: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Bounded search for the contact type a^(s).
    Contact {
        #[command(flatten)]
        model: ModelArgs,
        /// Dimension of the immersed submanifolds (default n-2).
        #[arg(long)]
        s: Option<usize>,
    },
    /// Commutator type t of the model's frame.
    Vftype {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Levi-trace type c of the model's frame.
    Levitype {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Maximize t and c over enumerated frames.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        s: Option<usize>,
        /// Degree of the enumerated frame coefficients.
        #[arg(long, default_value_t = 1)]
        frame_degree_cap: u32,
    },
    /// Normalize the frame and emit a certificate.
    Normalize {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        a_contact: Option<u32>,
    },
    /// Weighted truncation after normalization, with vanishing and span checks.
    Truncate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        a_contact: Option<u32>,
    },
    /// Levi matrix and a grid test of plurisubharmonicity.
    Psh {
        /// Real polynomial in z1.. and w.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Dimension; inferred from the variables when omitted.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "1")]
        grid_scale: String,
        /// Densification rounds after the base grid.
        #[arg(long, default_value_t = 0)]
        densify: u32,
    },
    /// The tangency equation on C^2.
    Tangency {
        #[command(subcommand)]
        action: TangencyCommand,
    },
    /// List shipped fixtures, or print one as a model file.
    Fixtures {
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum TangencyCommand {
    /// Basis of weighted homogeneous solutions.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
    },
    /// Enumerate A and f and refute psh of every admissible Re f.
    Verify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        coeff_set: Option<String>,
        #[arg(long, default_value = "1")]
        grid_scale: String,
    },
}

fn load_model(args: &ModelArgs) -> Result<Model, CliError> {
    let mut file = match (&args.model, &args.fixture) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))?;
            ModelFile::parse(&text)?
        }
        (None, Some(name)) => {
            let fx = fixtures::models()
                .into_iter()
                .find(|f| &f.name == name)
                .ok_or_else(|| CliError::Input(format!("unknown fixture '{}'", name)))?;
            ModelFile::from(&fx)
        }
        (None, None) => return Err(CliError::Input("one of --model or --fixture is required".into())),
    };
    if let Some(c) = args.cap {
        file.caps.bracket_cap = c;
    }
    if let Some(d) = args.degree_cap {
        file.caps.degree_cap = d;
    }
    if let Some(cs) = &args.coeff_set {
        file.caps.coeff_set = cs.split(',').map(|s| s.trim().to_string()).collect();
    }
    file.load()
}

fn notes(m: &Model) -> Value {
    json!(m.hypersurface.notes())
}

fn poly_rows(rows: &[Vec<Poly>]) -> Value {
    json!(rows.iter().map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn a_contact_for(m: &Model, flag: Option<u32>) -> Result<(u32, Option<String>), CliError> {
    if let Some(a) = flag.or(m.file.a_contact) {
        return Ok((a, None));
    }
    let s = m.nz() - 1;
    if s == 0 {
        return Err(CliError::Input("a_contact is required for n = 2".into()));
    }
    let r = invariants::contact_search(&m.hypersurface, s, m.file.caps.degree_cap, &m.coeff_set).map_err(math)?;
    match r.value {
        TypeValue::Exact(a) => Ok((a, Some(format!("a_contact = {} from contact_search", a)))),
        TypeValue::Exceeds(_) => Err(CliError::Math("contact search found an infinite order; pass --a-contact".into())),
    }
}

fn run(cmd: Command) -> Result<Value, CliError> {
    match cmd {
        Command::Contact { model, s } => {
            let m = load_model(&model)?;
            let s = s.unwrap_or(m.nz().saturating_sub(1).max(1));
            let r = invariants::contact_search(&m.hypersurface, s, m.file.caps.degree_cap, &m.coeff_set).map_err(math)?;
            let mut v = serde_json::to_value(&r).unwrap();
            v["s"] = json!(s);
            v["notes"] = notes(&m);
            Ok(v)
        }
        Command::Vftype { model } => {
            let m = load_model(&model)?;
            let frame = m.frame_or_default();
            let r = invariants::commutator_type(&m.hypersurface, &frame, m.file.caps.bracket_cap).map_err(math)?;
            let mut v = serde_json::to_value(&r).unwrap();
            v["frame"] = poly_rows(frame.rows());
            v["notes"] = notes(&m);
            Ok(v)
        }
        Command::Levitype { model } => {
            let m = load_model(&model)?;
            let frame = m.frame_or_default();
            let r = invariants::levi_type(&m.hypersurface, &frame, m.file.caps.bracket_cap).map_err(math)?;
            let mut v = serde_json::to_value(&r).unwrap();
            v["frame"] = poly_rows(frame.rows());
            v["trace"] = json!(invariants::levi_trace(&m.hypersurface, &frame).to_string());
            v["notes"] = notes(&m);
            Ok(v)
        }
        Command::Sweep { model, s, frame_degree_cap } => {
            let m = load_model(&model)?;
            let s = s.unwrap_or(m.nz().saturating_sub(1).max(1));
            let r = invariants::type_sweep(&m.hypersurface, s, frame_degree_cap, &m.coeff_set, m.file.caps.bracket_cap).map_err(math)?;
            Ok(json!({
                "commutator": r.commutator,
                "levi": r.levi,
                "frames_examined": r.frames_examined,
                "commutator_frame": poly_rows(&r.commutator_frame),
                "levi_frame": poly_rows(&r.levi_frame),
                "notes": notes(&m),
            }))
        }
        Command::Normalize { model, a_contact } => {
            let m = load_model(&model)?;
            let frame = m.frame.clone().ok_or_else(|| CliError::Input("normalize needs a frame".into()))?;
            let (a, note) = a_contact_for(&m, a_contact)?;
            let cert = normalize::normalize_full(&m.hypersurface, &frame, a).map_err(math)?;
            let mut v = serde_json::to_value(&cert).unwrap();
            let mut ns: Vec<String> = m.hypersurface.notes().to_vec();
            ns.extend(note);
            v["notes"] = json!(ns);
            Ok(v)
        }
        Command::Truncate { model, a_contact } => {
            let m = load_model(&model)?;
            let frame = m.frame.clone().ok_or_else(|| CliError::Input("truncate needs a frame".into()))?;
            let (a, note) = a_contact_for(&m, a_contact)?;
            let cert = normalize::normalize_full(&m.hypersurface, &frame, a).map_err(math)?;
            let (mm, ff) = (cert.hypersurface(), cert.frame());
            let w = match m.weights() {
                Some(w) => w,
                None => invariants::assign_weights(&mm, &ff, a).map_err(math)?,
            };
            let m0 = invariants::truncated_model(&mm, &w);
            let b0 = invariants::truncate_frame(&ff, &w);
            let cap = w.w;
            let mut ns: Vec<String> = m.hypersurface.notes().to_vec();
            ns.extend(note);
            Ok(json!({
                "case": cert.case,
                "weights": w,
                "rho0": m0.rho().to_string(),
                "frame0": poly_rows(b0.rows()),
                "cap": cap,
                "bracket_vanishing": invariants::bracket_pairing_vanishing(&m0, &b0, cap),
                "trace_vanishing": invariants::levi_trace_vanishing(&m0, &b0, cap),
                "span": invariants::bracket_span_dim(&m0, &b0, cap),
                "notes": ns,
            }))
        }
        Command::Psh { poly, n, grid_scale, densify } => {
            let nz = match n {
                Some(n) if n >= 2 => n - 1,
                Some(_) => return Err(CliError::Input("n must be at least 2".into())),
                None => crtypes_core::grammar::infer_nz(&poly).max(1),
            };
            let p = parse_poly(&poly, nz).map_err(|e| CliError::Input(e.to_string()))?;
            let lm = psh::levi_matrix(&p).map_err(|e| CliError::Input(e.to_string()))?;
            let mut grid = model::grid_for(&grid_scale)?;
            let mut verdict = psh::sampled_psh(&p, &grid).map_err(math)?;
            for _ in 0..densify {
                if verdict.is_refuted() {
                    break;
                }
                grid = grid.densify();
                verdict = psh::sampled_psh(&p, &grid).map_err(math)?;
            }
            let mut v = json!({
                "poly": p.to_string(),
                "levi_vars": lm.vars.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "levi_matrix": poly_rows(&lm.entries),
            });
            match verdict {
                PshVerdict::Refuted { point, minor, level } => {
                    v["psh_on_grid"] = json!(false);
                    v["refuting_point"] = json!(point.iter().map(|c| c.to_string()).collect::<Vec<_>>());
                    v["negative_minor"] = json!(minor);
                    v["grid_level"] = json!(level);
                }
                PshVerdict::NotRefuted { points, level } => {
                    v["psh_on_grid"] = json!(true);
                    v["points_checked"] = json!(points);
                    v["grid_level"] = json!(level);
                }
            }
            Ok(v)
        }
        Command::Tangency { action: TangencyCommand::Solve { a, k, m } } => {
            let a = parse_poly(&a, 2).map_err(|e| CliError::Input(format!("A: {}", e)))?;
            let t = TangencyProblem::new(a, k, m).map_err(|e| CliError::Input(e.to_string()))?;
            let fam = tangency::solution_space(&t);
            let basis: Vec<Value> = fam
                .basis
                .iter()
                .map(|e| {
                    json!({
                        "layer": e.layer,
                        "seed": e.seed.to_string(),
                        "f": e.f.to_string(),
                        "residual": tangency::residual(&t, &e.f).to_string(),
                    })
                })
                .collect();
            Ok(json!({ "a": t.a().to_string(), "k": k, "m": m, "m0": t.m0(), "basis": basis }))
        }
        Command::Tangency { action: TangencyCommand::Verify { k, m, coeff_set, grid_scale } } => {
            let set = match coeff_set {
                Some(cs) => model::parse_coeff_list(&cs.split(',').map(|s| s.to_string()).collect::<Vec<_>>())?,
                None => crtypes_core::coeff::default_coeff_set(),
            };
            let grid = model::grid_for(&grid_scale)?;
            let r = tangency::tangency_harness(k, m, &set, &grid).map_err(|e| CliError::Input(e.to_string()))?;
            let mut v = serde_json::to_value(&r).unwrap();
            v["survivor_count"] = json!(r.survivors.len());
            Ok(v)
        }
        Command::Fixtures { name: None } => {
            let mut list: Vec<Value> =
                fixtures::models().iter().map(|f| json!({ "name": f.name, "kind": "model", "description": f.description })).collect();
            list.extend(fixtures::tangency().iter().map(|t| json!({ "name": t.name, "kind": "tangency", "description": format!("A = {}, k = {}, m = {}", t.a, t.k, t.m) })));
            Ok(json!({ "fixtures": list }))
        }
        Command::Fixtures { name: Some(name) } => {
            if let Some(f) = fixtures::models().iter().find(|f| f.name == name) {
                return Ok(serde_json::to_value(ModelFile::from(f)).unwrap());
            }
            if let Some(t) = fixtures::tangency().iter().find(|t| t.name == name) {
                let p = t.problem();
                let f = t.f_poly();
                return Ok(json!({
                    "name": t.name,
                    "a": t.a,
                    "k": t.k,
                    "m": t.m,
                    "f": t.f,
                    "residual": tangency::residual(&p, &f).to_string(),
                    "re_f": f.real_part().to_string(),
                }));
            }
            Err(CliError::Input(format!("unknown fixture '{}'", name)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = cli.text;
    match run(cli.command) {
        Ok(v) => {
            if text {
                print!("{}", render::text(&v));
            } else {
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
        Err(CliError::Math(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
