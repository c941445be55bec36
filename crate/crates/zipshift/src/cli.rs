//! The `zipshift` command line. Records go to stdout one per line with
//! tab-separated fields; diagnostics and classifications go to stderr.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zipshift_core::codes::{check_commutation, invert_code, BlockCode, Inversion};
use zipshift_core::graph::{backward, export_dot};
use zipshift_core::horseshoe::{build_model, stable_string, verify_conjugacy};
use zipshift_core::orbits::{homoclinic_orbits, periodic_points, pre_periodic_points, HomoclinicDatum, PeriodicPoint};
use zipshift_core::point::{metrics, shift_k};
use zipshift_core::preimage::{preimages, preimages_k, DEFAULT_DEPTH};
use zipshift_core::space::Irreducibility;
use zipshift_core::{EpPoint, LabeledGraph, Side, ZipShiftSpace};

use crate::spec::{load_code, load_space, space_to_toml, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "zipshift", version, about = "Zip shift spaces, codes, orbits and the N-to-1 horseshoe")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a space file.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Labeled graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Operations on eventually periodic points.
    #[command(subcommand)]
    Point(PointCmd),
    /// Points with σ^m(x) = x.
    Periodic {
        spec: PathBuf,
        #[arg(short = 'm')]
        m: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Pre-images of the orbit of a periodic point.
    Preperiodic {
        spec: PathBuf,
        point: String,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        dmax: usize,
    },
    /// Sliding block codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Backward branches of a homoclinic orbit.
    Homoclinic {
        spec: PathBuf,
        #[arg(long)]
        periodic: String,
        #[arg(long)]
        point: String,
    },
    /// The affine N-to-1 horseshoe.
    #[command(subcommand)]
    Horseshoe(HorseshoeCmd),
}

#[derive(Subcommand, Debug)]
enum SpaceCmd {
    Validate { spec: PathBuf },
    Words {
        spec: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Aprime)]
        side: SideArg,
    },
    Matrices { spec: PathBuf },
    Irreducible { spec: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    A,
    Aprime,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Route {
    Labeled,
    VertexLike,
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    Build {
        spec: PathBuf,
        #[arg(long)]
        backward: bool,
        /// Output file, `-` for stdout.
        #[arg(long)]
        dot: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::VertexLike)]
        route: Route,
    },
}

#[derive(Subcommand, Debug)]
enum PointCmd {
    Shift {
        spec: PathBuf,
        point: String,
        #[arg(short = 'k', default_value_t = 1)]
        k: usize,
    },
    Preimages {
        spec: PathBuf,
        point: String,
        /// Number of backward steps.
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        dmax: usize,
    },
    Metrics { spec: PathBuf, p1: String, p2: String },
}

#[derive(Subcommand, Debug)]
enum CodeCmd {
    Check {
        codespec: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    Apply { codespec: PathBuf, point: String },
    Invert {
        codespec: PathBuf,
        #[arg(long)]
        max_window: usize,
    },
}

#[derive(Args, Debug)]
struct Sampling {
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum HorseshoeCmd {
    Build {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value = "1")]
        eps: BigRational,
    },
    Verify {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value = "1")]
        eps: BigRational,
        #[command(flatten)]
        sampling: Sampling,
    },
    StableString { word: String },
    Coding {
        #[arg(short = 'n')]
        n: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Domain(#[from] zipshift_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    /// A check ran and failed; its output has already been written.
    #[error("{0}")]
    Check(String),
}

type Outcome = Result<(), Failure>;

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn parse_point(space: &ZipShiftSpace, text: &str) -> Result<EpPoint, Failure> {
    Ok(EpPoint::parse(text, space.alphabet_a(), space.alphabet_a_prime())?)
}

fn fmt_point(space: &ZipShiftSpace, x: &EpPoint) -> String {
    x.format(space.alphabet_a(), space.alphabet_a_prime())
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Space(c) => space_cmd(c, out),
        Command::Graph(GraphCmd::Build { spec, backward: back, dot, route }) => {
            let space = load_space(&spec)?;
            let g = match (route, space.kind()) {
                (Route::Labeled, zipshift_core::Kind::Sofic { presentation }) if space.n() == 1 => {
                    LabeledGraph::from_presentation(presentation, space.tm())?
                }
                (Route::Labeled, _) => {
                    return Err(Failure::Check("--route labeled needs a sofic space with n = 1".into()));
                }
                (Route::VertexLike, _) => space.labeled_graph().clone(),
            };
            let g = if back { backward(&g) } else { g };
            let text = export_dot(&g, space.alphabet_a(), space.alphabet_a_prime());
            write_target(&dot, &text, out)?;
            writeln!(out, "vertices\t{}\tedges\t{}", g.vertex_count(), g.edges.len())?;
            Ok(())
        }
        Command::Point(c) => point_cmd(c, out, err),
        Command::Periodic { spec, m, count_only } => {
            let space = load_space(&spec)?;
            let pts = periodic_points(&space, m)?;
            if count_only {
                writeln!(out, "{}", pts.len())?;
            } else {
                for p in &pts {
                    writeln!(out, "{}", fmt_point(&space, &p.point))?;
                }
            }
            Ok(())
        }
        Command::Preperiodic { spec, point, level, dmax } => {
            let space = load_space(&spec)?;
            let p = periodic_from_text(&space, &point)?;
            for y in pre_periodic_points(&space, &p, level, dmax)? {
                writeln!(out, "{}", fmt_point(&space, &y))?;
            }
            Ok(())
        }
        Command::Code(c) => code_cmd(c, out),
        Command::Homoclinic { spec, periodic, point } => {
            let space = load_space(&spec)?;
            let p = periodic_from_text(&space, &periodic)?;
            let x = parse_point(&space, &point)?;
            let datum = HomoclinicDatum::new(&space, p, x)?;
            let report = homoclinic_orbits(&space, &datum)?;
            writeln!(
                out,
                "orbits\t{}\tN_x\t{}\tN'_x\t{}\tsum_bound\t{}\texceeds\t{}",
                report.orbits.len(),
                datum.n_x,
                datum.n_prime_x,
                report.sum_bound,
                report.exceeds_sum_bound
            )?;
            let depth = datum.n_x as i64;
            for orbit in &report.orbits {
                let mut line = space.alphabet_a_prime().format_word(&orbit.branch);
                for i in 1..=depth {
                    let _ = write!(line, "\t{}", fmt_point(&space, &orbit.point(&space, &datum, -i)?));
                }
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
        Command::Horseshoe(c) => horseshoe_cmd(c, out),
    }
}

fn periodic_from_text(space: &ZipShiftSpace, text: &str) -> Result<PeriodicPoint, Failure> {
    let p = parse_point(space, text)?;
    if !p.right_transient().is_empty() {
        return Err(Failure::Check(format!("`{text}` is not a periodic point")));
    }
    let pp = PeriodicPoint::from_word(space, p.right_period().to_vec())?;
    if pp.point != p {
        return Err(Failure::Check(format!(
            "`{text}` is not periodic; the periodic point with this right tail is {}",
            fmt_point(space, &pp.point)
        )));
    }
    Ok(pp)
}

fn write_target(path: &Path, text: &str, out: &mut dyn Write) -> std::io::Result<()> {
    if path.as_os_str() == "-" {
        out.write_all(text.as_bytes())
    } else {
        std::fs::write(path, text)
    }
}

fn row(cells: impl IntoIterator<Item = u8>) -> String {
    cells.into_iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\t")
}

fn space_cmd(cmd: SpaceCmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        SpaceCmd::Validate { spec } => {
            let space = load_space(&spec)?;
            writeln!(
                out,
                "ok\t{}\tn\t{}\t|A|\t{}\t|A'|\t{}",
                space.kind().name(),
                space.n(),
                space.alphabet_a().len(),
                space.alphabet_a_prime().len()
            )?;
        }
        SpaceCmd::Words { spec, k, side } => {
            let space = load_space(&spec)?;
            let side = match side {
                SideArg::A => Side::A,
                SideArg::Aprime => Side::APrime,
            };
            for w in space.language(k, side)? {
                writeln!(out, "{}", w.format(space.alphabet_a(), space.alphabet_a_prime()))?;
            }
        }
        SpaceCmd::Matrices { spec } => {
            let space = load_space(&spec)?;
            let m = space.build_matrices()?;
            let a = space.alphabet_a();
            let ap = space.alphabet_a_prime();
            let cols_ap: Vec<String> = m.rows_a_prime.iter().map(|w| ap.format_word(w)).collect();
            let cols_a: Vec<String> = m.rows_a.iter().map(|w| a.format_word(w)).collect();
            writeln!(out, "A'\t\t{}", cols_ap.join("\t"))?;
            for (w, r) in cols_ap.iter().zip(&m.a_prime_adj) {
                writeln!(out, "A'\t{w}\t{}", row(r.iter().copied()))?;
            }
            writeln!(out, "A\t\t{}", cols_a.join("\t"))?;
            for (w, r) in cols_a.iter().zip(&m.a_adj) {
                writeln!(out, "A\t{w}\t{}", row(r.iter().copied()))?;
            }
            writeln!(out, "T\t\t{}", cols_ap.join("\t"))?;
            for (w, r) in cols_a.iter().zip(&m.t) {
                writeln!(out, "T\t{w}\t{}", row(r.iter().copied()))?;
            }
        }
        SpaceCmd::Irreducible { spec } => {
            let space = load_space(&spec)?;
            let ap = space.alphabet_a_prime();
            match space.is_irreducible() {
                Irreducibility::Irreducible { .. } => writeln!(out, "irreducible")?,
                Irreducibility::Reducible { from, to } => {
                    writeln!(out, "reducible\t{}\t{}", ap.name(from), ap.name(to))?
                }
            }
        }
    }
    Ok(())
}

fn point_cmd(cmd: PointCmd, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        PointCmd::Shift { spec, point, k } => {
            let space = load_space(&spec)?;
            let x = parse_point(&space, &point)?;
            writeln!(out, "{}", fmt_point(&space, &shift_k(&space, &x, k)?))?;
        }
        PointCmd::Preimages { spec, point, depth, dmax } => {
            let space = load_space(&spec)?;
            let x = parse_point(&space, &point)?;
            if depth == 1 {
                let r = preimages(&space, &x, dmax)?;
                writeln!(err, "classification\t{:?}", r.classification)?;
                for y in &r.points {
                    writeln!(out, "{}", fmt_point(&space, y))?;
                }
            } else {
                for y in preimages_k(&space, &x, depth, dmax)? {
                    writeln!(out, "{}", fmt_point(&space, &y))?;
                }
            }
        }
        PointCmd::Metrics { spec, p1, p2 } => {
            let space = load_space(&spec)?;
            let (s, t) = (parse_point(&space, &p1)?, parse_point(&space, &p2)?);
            let m = metrics(&s, &t);
            let idx = |v: Option<usize>| v.map_or_else(|| "inf".to_string(), |i| i.to_string());
            writeln!(out, "N\t{}", idx(m.n))?;
            writeln!(out, "N+\t{}", idx(m.n_plus))?;
            writeln!(out, "N-\t{}", idx(m.n_minus))?;
            writeln!(out, "d\t{}", m.d)?;
            writeln!(out, "d+\t{}", m.d_plus)?;
            writeln!(out, "d-\t{}", m.d_minus)?;
            writeln!(out, "d±\t{}", m.d_pm)?;
        }
    }
    Ok(())
}

fn print_tables(code: &BlockCode, out: &mut dyn Write) -> std::io::Result<()> {
    let src = code.source();
    let (a, ap) = (src.alphabet_a(), src.alphabet_a_prime());
    let (c, cp) = (code.target().alphabet_a(), code.target().alphabet_a_prime());
    writeln!(out, "window\t{}", code.window())?;
    for (w, &y) in code.psi_plus() {
        writeln!(out, "psi_plus\t{}\t{}", ap.format_word(w), cp.name(y))?;
    }
    for ((x, w), &y) in code.psi_minus() {
        writeln!(out, "psi_minus\t{} ; {}\t{}", a.name(*x), ap.format_word(w), c.name(y))?;
    }
    Ok(())
}

fn code_cmd(cmd: CodeCmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        CodeCmd::Check { codespec, sampling } => {
            let code = load_code(&codespec)?;
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            let r = check_commutation(&code, sampling.samples, &mut rng)?;
            match r.witness {
                None => writeln!(out, "ok\tchecked\t{}", r.checked)?,
                Some(x) => {
                    writeln!(out, "fail\twitness\t{}", fmt_point(code.source(), &x))?;
                    return Err(Failure::Check("ψ∘σ ≠ σ∘ψ".into()));
                }
            }
        }
        CodeCmd::Apply { codespec, point } => {
            let code = load_code(&codespec)?;
            let x = parse_point(code.source(), &point)?;
            writeln!(out, "{}", fmt_point(code.target(), &code.apply(&x)?))?;
        }
        CodeCmd::Invert { codespec, max_window } => {
            let code = load_code(&codespec)?;
            match invert_code(&code, max_window)? {
                Inversion::Found(inv) => print_tables(&inv, out)?,
                Inversion::NotFound(w) => {
                    return Err(Failure::Check(format!("no inverse code with window ≤ {w}")));
                }
            }
        }
    }
    Ok(())
}

fn horseshoe_cmd(cmd: HorseshoeCmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        HorseshoeCmd::Build { n, eps } => {
            let model = build_model(n, eps)?;
            writeln!(out, "delta\t{}", model.delta)?;
            writeln!(out, "delta'\t{}", model.delta_prime)?;
            writeln!(out, "gap\t{}", model.gap)?;
            writeln!(out, "v_gap\t{}", model.v_gap)?;
            let ap = model.alphabet_a_prime();
            for b in &model.branches {
                let v = model.v_rect(b.letter);
                let (target, sign) = if b.zero { ("a", "+") } else { ("b", "-") };
                writeln!(out, "V\t{}\t{}\t{}\t{sign}\tH_{target}", ap.name(b.letter), v.x.0, v.x.1)?;
            }
            for (side, name) in [(0, "a"), (1, "b")] {
                let h = model.h_rect(side);
                writeln!(out, "H\t{name}\t{}\t{}", h.y.0, h.y.1)?;
            }
        }
        HorseshoeCmd::Verify { n, depth, eps, sampling } => {
            let model = build_model(n, eps)?;
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            let r = verify_conjugacy(&model, &model.coding_space(), depth, sampling.samples, &mut rng)?;
            for v in &r.violations {
                writeln!(out, "violation\t{v}")?;
            }
            writeln!(
                out,
                "{}\tsamples\t{}\tviolations\t{}\tn_to_1\t{}",
                if r.ok() { "ok" } else { "fail" },
                r.samples,
                r.violations.len(),
                r.preimages_n_to_1
            )?;
            if !r.ok() {
                return Err(Failure::Check("conjugacy check failed".into()));
            }
        }
        HorseshoeCmd::StableString { word } => {
            writeln!(out, "{}", stable_string(&word)?.join("\t"))?;
        }
        HorseshoeCmd::Coding { n } => {
            let model = build_model(n, BigRational::from_integer(1.into()))?;
            out.write_all(space_to_toml(&model.coding_space()).as_bytes())?;
        }
    }
    Ok(())
}
