use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use holefree::bounds::{bound_table, exponent_check, render_table_csv, render_table_text};
use holefree::embed::ScheduleKind;
use holefree::holes::{count_holes, is_hole_free, max_hole, Algo, Caps, HoleFreeVerdict};
use holefree::io::{read_json, to_json, NetFile, PointFile};
use holefree::netgen::{
    minimal_t, sequence_to_net, sobol_points, vdc_points, verify_net, NetVerdict,
};
use holefree::pipeline::{run, verify_bundle, BaseChoice, PipelineConfig};
use holefree::Error;

/// Hole-free point sets from digital nets, with exact certificates.
///
/// Exit codes: 0 pass, 1 violation, 2 usage or parse error, 3 cap exceeded.
#[derive(Parser)]
#[command(name = "holefree", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or check digital nets.
    #[command(subcommand)]
    Net(NetCmd),
    /// Run every stage and write a self-verifying bundle.
    Pipeline(PipelineArgs),
    /// Re-check a bundle directory without regenerating it.
    VerifyBundle {
        #[arg(long)]
        dir: PathBuf,
    },
    /// Hole queries on a point file.
    #[command(subcommand)]
    Holes(HolesCmd),
    /// Closed-form upper bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum NetKind {
    /// van der Corput lifted to the plane (s = 2 only).
    Vdc,
    Sobol,
}

#[derive(Subcommand)]
enum NetCmd {
    Gen {
        #[arg(long, value_enum)]
        kind: NetKind,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: PathBuf,
    },
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t: u32,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    MinimalT {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct PipelineArgs {
    /// Key-value config file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "T")]
    t_count: Option<u64>,
    /// Rational in `p/q` form.
    #[arg(long)]
    eps: Option<String>,
    /// `auto` or an integer at least 2.
    #[arg(long)]
    base: Option<String>,
    #[arg(long, value_enum)]
    schedule: Option<Schedule>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_subsets: Option<u64>,
    #[arg(long)]
    max_predicate_calls: Option<u64>,
    #[arg(long)]
    max_escalations: Option<usize>,
    /// Bundle directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Schedule {
    Geometric,
    Triangular,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Brute,
    Dp2d,
    Auto,
}

#[derive(Args)]
struct HolesInput {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_predicate_calls: Option<u64>,
    #[arg(long)]
    max_subsets: Option<u64>,
}

#[derive(Subcommand)]
enum HolesCmd {
    /// Largest hole.
    Max {
        #[command(flatten)]
        io: HolesInput,
        #[arg(long, value_enum, default_value = "auto")]
        algo: AlgoArg,
        /// Largest hole size the brute-force search looks for.
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Number of holes with exactly `ell` vertices.
    Count {
        #[command(flatten)]
        io: HolesInput,
        #[arg(long)]
        ell: usize,
    },
    /// Whether every `ell`-subset has a point of the set inside its hull.
    Free {
        #[command(flatten)]
        io: HolesInput,
        #[arg(long)]
        ell: usize,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Upper bounds on h(d) for a range such as `3..10`.
    Table {
        #[arg(long, default_value = "3..10")]
        d: String,
        #[arg(long)]
        csv: bool,
    },
    /// Checks h(d) < 2^(7d) and the sharper exponent for `3 <= d <= d_max`.
    Check {
        #[arg(long, default_value_t = 64)]
        d_max: u32,
    },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::PerturbationExhausted { .. } => code(3),
        _ => code(2),
    }
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> Result<(), Error> {
    let text = to_json(value)?;
    print!("{text}");
    if let Some(p) = out {
        std::fs::write(p, text)?;
    }
    Ok(())
}

fn caps_from(io: &HolesInput) -> Result<Caps, Error> {
    let mut caps = PipelineConfig::from_env(2, 0)?.caps;
    if let Some(v) = io.max_predicate_calls {
        caps.max_predicate_calls = v;
    }
    if let Some(v) = io.max_subsets {
        caps.max_subsets = v;
    }
    Ok(caps)
}

fn net_cmd(cmd: NetCmd) -> Result<ExitCode, Error> {
    match cmd {
        NetCmd::Gen { kind, s, m, out } => {
            let points = match kind {
                NetKind::Sobol => sobol_points(s, m)?,
                NetKind::Vdc => {
                    if s != 2 {
                        return Err(Error::Parse {
                            what: "s".into(),
                            msg: "the vdc net is planar, use --s 2".into(),
                        });
                    }
                    sequence_to_net(&vdc_points(m), 0, m)?
                }
            };
            std::fs::write(&out, to_json(&NetFile::new(s, m, &points))?)?;
            Ok(code(0))
        }
        NetCmd::Verify { input, t, out } => {
            let f: NetFile = read_json(&input, "net file")?;
            let points = f.to_points()?;
            let verdict = verify_net(&points, t, f.m, f.s)?;
            let report = match &verdict {
                NetVerdict::Pass { boxes_checked } => json!({
                    "status": "pass", "s": f.s, "m": f.m, "t": t,
                    "boxes_checked": boxes_checked,
                }),
                NetVerdict::Violation { dyadic_box, count } => json!({
                    "status": "violation", "s": f.s, "m": f.m, "t": t,
                    "box": dyadic_box.axes.iter()
                        .map(|&(k, b)| json!({"k": k, "b": b}))
                        .collect::<Vec<_>>(),
                    "count": count,
                    "expected": 1u64 << t,
                }),
            };
            emit(&report, out.as_deref())?;
            Ok(code(if verdict.is_pass() { 0 } else { 1 }))
        }
        NetCmd::MinimalT { input } => {
            let f: NetFile = read_json(&input, "net file")?;
            match minimal_t(&f.to_points()?, f.m, f.s)? {
                Some(t) => {
                    println!("{t}");
                    Ok(code(0))
                }
                None => {
                    println!("none");
                    Ok(code(1))
                }
            }
        }
    }
}

fn pipeline_cmd(a: PipelineArgs) -> Result<ExitCode, Error> {
    let mut cfg = match &a.config {
        Some(path) => PipelineConfig::load(path)?,
        None => {
            let (Some(d), Some(n)) = (a.d, a.n) else {
                return Err(Error::Parse {
                    what: "arguments".into(),
                    msg: "give --config or both --d and --n".into(),
                });
            };
            PipelineConfig::from_env(d, n)?
        }
    };
    if let Some(v) = a.d {
        cfg.d = v;
    }
    if let Some(v) = a.n {
        cfg.n = v;
    }
    if let Some(v) = a.t_count {
        cfg.t_count = v;
    }
    if let Some(v) = &a.eps {
        cfg.eps = holefree::geom::parse_rational(v).map_err(|e| Error::Parse {
            what: "eps".into(),
            msg: e.to_string(),
        })?;
    }
    if let Some(v) = &a.base {
        cfg.base = v.parse::<BaseChoice>()?;
    }
    if let Some(v) = a.schedule {
        cfg.schedule = match v {
            Schedule::Geometric => ScheduleKind::Geometric,
            Schedule::Triangular => ScheduleKind::Triangular,
        };
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.max_subsets {
        cfg.caps.max_subsets = v;
    }
    if let Some(v) = a.max_predicate_calls {
        cfg.caps.max_predicate_calls = v;
    }
    if let Some(v) = a.max_escalations {
        cfg.max_escalations = v;
    }
    if let Some(v) = a.out {
        cfg.out = Some(v);
    }
    let out = cfg.out.clone();
    match run(&cfg) {
        Ok(bundle) => {
            if let Some(dir) = &out {
                bundle.write(dir)?;
            }
            print!("{}", to_json(&bundle.report)?);
            Ok(code(0))
        }
        Err(e) => {
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("report.json"), to_json(&e.report)?)?;
            }
            print!("{}", to_json(&e.report)?);
            eprintln!("error: {e}");
            Ok(code(e.exit_code()))
        }
    }
}

fn holes_cmd(cmd: HolesCmd) -> Result<ExitCode, Error> {
    let load = |io: &HolesInput| -> Result<_, Error> {
        let f: PointFile = read_json(&io.input, "point file")?;
        f.point_set()
    };
    match cmd {
        HolesCmd::Max { io, algo, cap } => {
            let a = load(&io)?;
            let algo = match algo {
                AlgoArg::Brute => Algo::Brute,
                AlgoArg::Dp2d => Algo::Dp2d,
                AlgoArg::Auto => Algo::Auto,
            };
            let r = max_hole(&a, cap, algo, &caps_from(&io)?)?;
            emit(
                &json!({
                    "mode": "max",
                    "algo": r.algo,
                    "result": r.hole_size,
                    "witness": r.witness_subset,
                    "verified_empty": r.verified_empty,
                    "caps_hit": r.search_caps_hit,
                    "predicate_calls": r.predicate_calls,
                }),
                io.out.as_deref(),
            )?;
            Ok(code(if r.search_caps_hit { 3 } else { 0 }))
        }
        HolesCmd::Count { io, ell } => {
            let a = load(&io)?;
            let n = count_holes(&a, ell);
            emit(
                &json!({"mode": "count", "ell": ell, "result": n, "caps_hit": false}),
                io.out.as_deref(),
            )?;
            Ok(code(0))
        }
        HolesCmd::Free { io, ell } => {
            let a = load(&io)?;
            let v = is_hole_free(&a, ell, &caps_from(&io)?);
            let (result, witness, caps_hit, exit) = match &v {
                HoleFreeVerdict::Pass { .. } => (json!(true), json!(null), false, 0),
                HoleFreeVerdict::Violation { subset, .. } => {
                    (json!(false), json!(subset), false, 1)
                }
                HoleFreeVerdict::CapExceeded { .. } => (json!(null), json!(null), true, 3),
            };
            let mut report = json!({
                "mode": "free", "ell": ell, "result": result, "witness": witness,
                "caps_hit": caps_hit, "predicate_calls": v.predicate_calls(),
            });
            if let HoleFreeVerdict::CapExceeded { subsets_required } = v {
                report["subsets_required"] = json!(subsets_required.to_string());
            }
            emit(&report, io.out.as_deref())?;
            Ok(code(exit))
        }
    }
}

fn parse_range(s: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::Parse {
        what: "d".into(),
        msg: format!("expected `lo..hi` or a single value, got {s:?}"),
    };
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo < 2 || hi < lo {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn bounds_cmd(cmd: BoundsCmd) -> Result<ExitCode, Error> {
    match cmd {
        BoundsCmd::Table { d, csv } => {
            let rows = bound_table(parse_range(&d)?);
            if csv {
                print!("{}", render_table_csv(&rows));
            } else {
                print!("{}", render_table_text(&rows));
            }
            Ok(code(if rows.iter().all(|r| r.pass) { 0 } else { 1 }))
        }
        BoundsCmd::Check { d_max } => {
            let checks = exponent_check(d_max.max(3));
            print!("{}", to_json(&checks)?);
            Ok(code(if checks.iter().all(|c| c.pass()) {
                0
            } else {
                1
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Net(c) => net_cmd(c),
        Command::Pipeline(a) => pipeline_cmd(a),
        Command::VerifyBundle { dir } => {
            let cfg = PipelineConfig::from_env(2, 0);
            cfg.and_then(|cfg| {
                let v = verify_bundle(&dir, &cfg.caps, &cfg.good_caps);
                print!("{}", to_json(&v)?);
                Ok(code(v.exit_code()))
            })
        }
        Command::Holes(c) => holes_cmd(c),
        Command::Bounds(c) => bounds_cmd(c),
    };
    result.unwrap_or_else(|e| fail(&e))
}
