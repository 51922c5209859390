use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dynvis::decomposition::{decompose, CorridorComplex};
use dynvis::domain::{parse_script, ScriptCommand};
use dynvis::engine::{Session, SessionError};
use dynvis::oracle::{describe_vp_diff, dump_vg, oracle_vg_with, oracle_vp, QueryError, VisibilityPolygon};
use dynvis::par::Exec;
use dynvis::svg::{render, Layers};
use dynvis::visgraph::VisGraph;
use dynvis::vistree::{TreeError, VisTree};
use dynvis::{Point, Scene};

macro_rules! emit {
    (@raw $($t:tt)*) => {{
        let _ = write!(std::io::stdout(), $($t)*);
    }};
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

const EXIT_DIVERGED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_OUTSIDE_BOX: u8 = 3;
const EXIT_INSIDE_OBSTACLE: u8 = 4;
const EXIT_REJECTED: u8 = 5;

#[derive(Parser)]
#[command(name = "dynvis", version, about = "Visibility polygons and visibility graphs among polygonal obstacles")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the junction/corridor decomposition of a scene
    Decompose {
        scene: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Visibility polygon of a query point
    Query {
        scene: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Visibility graph of the obstacle vertices
    Vg {
        scene: PathBuf,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Apply an event script, maintaining tracked polygons and the graph
    Run {
        scene: PathBuf,
        script: PathBuf,
        #[arg(long, value_name = "K", default_value_t = 0)]
        check_every: usize,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
        track: Vec<String>,
        #[arg(long)]
        vg: bool,
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        svg_dir: Option<PathBuf>,
    },
    /// Brute-force visibility polygon
    OracleVp {
        scene: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Brute-force visibility graph
    OracleVg {
        scene: PathBuf,
        #[arg(long)]
        sequential: bool,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        let code = match e {
            QueryError::OutsideBox => EXIT_OUTSIDE_BOX,
            QueryError::InsideObstacle => EXIT_INSIDE_OBSTACLE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::Query(q) => q.into(),
            other => Failure::new(EXIT_INPUT, other.to_string()),
        }
    }
}

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::Tree(t) => t.into(),
            SessionError::Edit(x) => Failure::new(EXIT_REJECTED, x.to_string()),
            SessionError::Decomp(x) => Failure::new(EXIT_INPUT, x.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn load_scene(path: &Path) -> Result<Scene, Failure> {
    let s = Scene::parse(&read(path)?).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    s.validate().map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    Ok(s)
}

fn complex(s: &Scene) -> Result<CorridorComplex, Failure> {
    decompose(s).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))
}

fn point(x: &str, y: &str) -> Result<Point, Failure> {
    Point::parse(x, y).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))
}

fn check_vp(q: &Point, got: &VisibilityPolygon, want: &VisibilityPolygon) -> Outcome {
    match describe_vp_diff(got, want) {
        None => Ok(()),
        Some(d) => Err(Failure::new(EXIT_DIVERGED, format!("visibility polygon of {q} diverged\n{d}"))),
    }
}

fn cmd_decompose(scene: &Path, svg: Option<&Path>) -> Outcome {
    let s = load_scene(scene)?;
    let cc = complex(&s)?;
    emit!("junctions: {}, corridors: {}", cc.junction_count(), cc.corridor_count());
    emit!(@raw "{}", cc.dump_triangles(&s));
    if let Some(path) = svg {
        write(path, &render(&s, Layers { complex: Some(&cc), ..Layers::default() }))?;
    }
    Ok(())
}

fn cmd_query(scene: &Path, x: &str, y: &str, check: bool, svg: Option<&Path>) -> Outcome {
    let s = load_scene(scene)?;
    let q = point(x, y)?;
    let cc = complex(&s)?;
    let vp = VisTree::build(&s, &cc, &q, None)?.extract_vp();
    emit!(@raw "{}", vp.dump());
    if let Some(path) = svg {
        write(path, &render(&s, Layers { complex: Some(&cc), vp: Some((&q, &vp)), vg: None }))?;
    }
    if check {
        check_vp(&q, &vp, &oracle_vp(&s, &q)?)?;
        emit!("check: pass");
    }
    Ok(())
}

fn cmd_vg(scene: &Path, check: bool, svg: Option<&Path>) -> Outcome {
    let s = load_scene(scene)?;
    let g = VisGraph::build(&s);
    g.check_invariants().map_err(|e| Failure::new(EXIT_DIVERGED, e))?;
    let edges = g.edges();
    emit!(@raw "{}", dump_vg(&s, &edges));
    if let Some(path) = svg {
        write(path, &render(&s, Layers { vg: Some(&edges), ..Layers::default() }))?;
    }
    if check {
        let want = oracle_vg_with(&s, Exec::default());
        if edges != want {
            return Err(Failure::new(EXIT_DIVERGED, "visibility graph diverged from the oracle"));
        }
        emit!("check: pass");
    }
    Ok(())
}

struct RunOptions {
    check_every: usize,
    track: Vec<Point>,
    vg: bool,
    stats: bool,
    svg_dir: Option<PathBuf>,
}

fn snapshot(session: &Session, dir: &Path, n: usize) -> Outcome {
    let vp = session.tracked.first().map(|t| (t.q.clone(), t.vp()));
    let edges = session.vg.as_ref().map(|g| g.edges());
    let layers = Layers { complex: Some(&session.cc), vp: vp.as_ref().map(|(q, vp)| (q, vp)), vg: edges.as_ref() };
    write(&dir.join(format!("event_{n:04}.svg")), &render(&session.scene, layers))
}

fn cmd_run(scene: &Path, script: &Path, opts: RunOptions) -> Outcome {
    let s = load_scene(scene)?;
    let cmds =
        parse_script(&read(script)?).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", script.display())))?;
    let mut session = Session::new(s)?;
    for q in &opts.track {
        session.track(q)?;
    }
    if opts.vg {
        session.enable_vg();
    }
    if let Some(dir) = &opts.svg_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", dir.display())))?;
        snapshot(&session, dir, 0)?;
    }
    let mut checks = 0usize;
    let mut events = 0usize;
    let verify = |session: &Session, checks: &mut usize| -> Outcome {
        *checks += 1;
        session.check_oracles().map_err(|d| Failure::new(EXIT_DIVERGED, d))
    };
    for cmd in &cmds {
        match cmd {
            ScriptCommand::Edit(e) => {
                events += 1;
                let report = session.apply(e).map_err(|err| {
                    let f = Failure::from(err);
                    Failure { msg: format!("event {events}: {}", f.msg), ..f }
                })?;
                for st in &report.vp {
                    emit!("{}", st.line(events));
                }
                if let Some(v) = report.vg {
                    emit!("vg {events} added {} removed {} pops {}", v.added, v.removed, v.pops);
                }
                if let Some(dir) = &opts.svg_dir {
                    snapshot(&session, dir, events)?;
                }
                if opts.check_every > 0 && events.is_multiple_of(opts.check_every) {
                    verify(&session, &mut checks)?;
                }
            }
            ScriptCommand::Query(q) => {
                let vp = match session.tracked.iter().find(|t| &t.q == q) {
                    Some(t) => t.vp(),
                    None => VisTree::build(&session.scene, &session.cc, q, None)?.extract_vp(),
                };
                emit!("query {} {}", q.x, q.y);
                emit!(@raw "{}", vp.dump());
                if opts.check_every > 0 {
                    checks += 1;
                    check_vp(q, &vp, &oracle_vp(&session.scene, q)?)?;
                }
            }
            ScriptCommand::Vg => {
                let edges = match &session.vg {
                    Some(g) => g.edges(),
                    None => oracle_vg_with(&session.scene, Exec::default()),
                };
                emit!("vg");
                emit!(@raw "{}", dump_vg(&session.scene, &edges));
            }
            ScriptCommand::Check => verify(&session, &mut checks)?,
        }
    }
    if opts.stats {
        for t in &session.tracked {
            let st = t.stats;
            emit!(
                "stats {} {} nodes_visited {} rbt_insertions {} rbt_deletions {} cones_split {} tangent_queries {}",
                t.q.x,
                t.q.y,
                st.nodes_visited,
                st.rbt_insertions,
                st.rbt_deletions,
                st.cones_split,
                st.tangent_queries
            );
        }
    }
    emit!("events: {events}, checks: {checks}");
    emit!("result: pass");
    Ok(())
}

fn cmd_oracle_vp(scene: &Path, x: &str, y: &str) -> Outcome {
    let s = load_scene(scene)?;
    emit!(@raw "{}", oracle_vp(&s, &point(x, y)?)?.dump());
    Ok(())
}

fn cmd_oracle_vg(scene: &Path, sequential: bool) -> Outcome {
    let s = load_scene(scene)?;
    let exec = if sequential { Exec::Sequential } else { Exec::default() };
    emit!(@raw "{}", dump_vg(&s, &oracle_vg_with(&s, exec)));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Cmd::Decompose { scene, svg } => cmd_decompose(&scene, svg.as_deref()),
        Cmd::Query { scene, x, y, check, svg } => cmd_query(&scene, &x, &y, check, svg.as_deref()),
        Cmd::Vg { scene, check, svg } => cmd_vg(&scene, check, svg.as_deref()),
        Cmd::Run { scene, script, check_every, track, vg, stats, svg_dir } => track
            .chunks(2)
            .map(|c| point(&c[0], &c[1]))
            .collect::<Result<Vec<_>, _>>()
            .and_then(|track| cmd_run(&scene, &script, RunOptions { check_every, track, vg, stats, svg_dir })),
        Cmd::OracleVp { scene, x, y } => cmd_oracle_vp(&scene, &x, &y),
        Cmd::OracleVg { scene, sequential } => cmd_oracle_vg(&scene, sequential),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            if f.code == EXIT_DIVERGED {
                emit!("result: fail");
            }
            ExitCode::from(f.code)
        }
    }
}
