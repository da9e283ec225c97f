mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twintour_core::cfigen::{self, BaseGraph, CfiGraph};
use twintour_core::graphcore::{ArcColoredDigraph, Digraph, RelStructure, Tournament};
use twintour_core::io;
use twintour_core::isokit::{brute_force_iso, tournament_iso, IsoResult};
use twintour_core::permgroup::IsoSet;
use twintour_core::widths::{self, ContractionBuilder, ContractionSequence, LinearOrder};
use twintour_core::wl::{self, PartitionOutcome};

use report::{sha256, yes_no, Report};

const EXIT_NO: u8 = 1;
const EXIT_TWW: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "twintour", version, about = "Tournament isomorphism for bounded twin width")]
struct Cli {
    /// Print the report as one flat JSON object.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test two tournaments for isomorphism.
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Twin width bound.
        #[arg(long)]
        k: usize,
        /// Use the individualization-refinement search instead.
        #[arg(long)]
        oracle: bool,
    },
    /// Run k-WL on one graph, or jointly on two.
    Wl {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        pair: Option<PathBuf>,
    },
    /// Partition sequence of a tournament.
    PartitionSeq {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a contraction sequence and report its width.
    TwwVerify {
        structure: PathBuf,
        sequence: PathBuf,
        /// Exit 1 if the width exceeds this.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Exact twin width of a small structure.
    TwwExact {
        structure: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Width decompositions.
    Width {
        #[command(subcommand)]
        op: WidthOp,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
}

#[derive(Subcommand)]
enum WidthOp {
    /// Convert between orders, decompositions and contraction sequences.
    Convert {
        /// The tournament or digraph the input refers to.
        graph: PathBuf,
        input: PathBuf,
        #[arg(long, value_enum)]
        from: Source,
        #[arg(long, value_enum)]
        to: To,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Order,
    Dpd,
    Dtd,
}

#[derive(Clone, Copy, ValueEnum)]
enum To {
    Dpd,
    Dtd,
    Contraction,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    K4,
    Wall,
}

#[derive(Args)]
struct GenCommon {
    /// Output path prefix; extensions are appended.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relabel vertices by a seeded random permutation.
    #[arg(long)]
    shuffle: bool,
}

#[derive(Subcommand)]
enum GenFamily {
    /// CFI tournament with a sidecar contraction sequence.
    Cfi {
        #[arg(long, value_enum)]
        base: Base,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Total twist, placed on the least base vertex.
        #[arg(long, default_value_t = 0)]
        twist: u8,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Toroidal grid with red edges.
    Grid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Circular tournament on 2m+1 vertices.
    Circular {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Uniformly random tournament.
    Random {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<twintour_core::Error> for Failure {
    fn from(e: twintour_core::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(Report, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse<T>(path: &Path, text: &str, f: impl Fn(&str) -> twintour_core::Result<T>) -> Result<T, Failure> {
    f(text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn header(text: &str) -> &str {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next())
        .unwrap_or("")
}

fn load_structure(path: &Path) -> Result<(RelStructure, String), Failure> {
    let text = read(path)?;
    let a = match header(&text) {
        "struct" => parse(path, &text, io::parse_struct)?,
        "tournament" => RelStructure::from_tournament(&parse(path, &text, io::parse_tournament)?),
        _ => RelStructure::from_digraph(&parse(path, &text, io::parse_digraph)?),
    };
    Ok((a, sha256(text.as_bytes())))
}

fn load_tournament(path: &Path) -> Result<(Tournament, String), Failure> {
    let text = read(path)?;
    Ok((parse(path, &text, io::parse_tournament)?, sha256(text.as_bytes())))
}

fn iso(a: &Path, b: &Path, k: usize, oracle: bool) -> Outcome {
    let (t1, d1) = load_tournament(a)?;
    let (t2, d2) = load_tournament(b)?;
    let mut r = Report::new("iso");
    r.put("a_sha256", d1);
    r.put("b_sha256", d2);
    r.put("n", t1.n());
    r.put("k", k);
    r.put("method", if oracle { "brute_force" } else { "tournament_iso" });
    let result = if oracle {
        IsoResult::Set(brute_force_iso(&t1, &t2))
    } else {
        tournament_iso(&t1, &t2, k).map_err(|e| match e {
            twintour_core::Error::Argument(m) => Failure::Usage(m),
            e => Failure::Invalid(e.to_string()),
        })?
    };
    let code = match result {
        IsoResult::TwinWidthExceeded { level } => {
            r.put("isomorphic", "unknown");
            r.put("twin_width_exceeded_level", level);
            EXIT_TWW
        }
        IsoResult::Set(IsoSet::Empty) => {
            r.put("isomorphic", "no");
            EXIT_NO
        }
        IsoResult::Set(IsoSet::Coset(c)) => {
            r.put("isomorphic", "yes");
            r.put("aut_order", c.order().to_string());
            r.put("aut_generators", c.group.generators().len());
            r.put("isomorphism", c.rep.to_string());
            0
        }
    };
    Ok((r, code))
}

fn load_colored(path: &Path) -> Result<(ArcColoredDigraph, String), Failure> {
    let text = read(path)?;
    let g: Digraph = parse(path, &text, io::parse_any_digraph)?;
    Ok(((&g).into(), sha256(text.as_bytes())))
}

fn wl_cmd(file: &Path, k: usize, pair: Option<&Path>) -> Outcome {
    if k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    let (g, d1) = load_colored(file)?;
    let mut r = Report::new("wl");
    r.put("k", k);
    r.put("a_sha256", d1);
    match pair {
        None => {
            let chi = wl::wl_refine(k, &g)?;
            r.put("rounds", chi.rounds());
            r.put("colors", chi.num_colors());
            r.put("vertex_colors", chi.diagonal_colors().len());
            for (c, m) in chi.histogram() {
                r.put(format!("color_{c}"), m);
            }
            Ok((r, 0))
        }
        Some(b) => {
            let (h, d2) = load_colored(b)?;
            r.put("b_sha256", d2);
            let chis = wl::wl_refine_joint(k, &[&g, &h])?;
            let (ha, hb) = (chis[0].histogram(), chis[1].histogram());
            let mut keys: Vec<u32> = ha.keys().chain(hb.keys()).copied().collect();
            keys.sort_unstable();
            keys.dedup();
            r.put("rounds", chis[0].rounds().max(chis[1].rounds()));
            r.put("colors", keys.len());
            for c in keys {
                let (x, y) = (ha.get(&c).copied().unwrap_or(0), hb.get(&c).copied().unwrap_or(0));
                r.put(format!("color_{c}"), format!("{x} {y}"));
            }
            let distinguished = g.n() != h.n() || ha != hb;
            r.put("distinguished", yes_no(distinguished));
            Ok((r, 0))
        }
    }
}

fn partition_seq(file: &Path, k: usize, out: Option<&Path>) -> Outcome {
    let (t, d) = load_tournament(file)?;
    let mut r = Report::new("partition-seq");
    r.put("input_sha256", d);
    r.put("k", k);
    match wl::partition_sequence(&t, k)? {
        PartitionOutcome::TwinWidthExceeded { level } => {
            r.put("twin_width_exceeded_level", level);
            Ok((r, EXIT_TWW))
        }
        PartitionOutcome::Sequence(s) => {
            r.put("length", s.len());
            for (i, (c, q)) in s.colors.iter().zip(&s.partitions[1..]).enumerate() {
                let parts: Vec<String> =
                    q.parts().iter().map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")).collect();
                r.put(format!("c_{}", i + 1), *c);
                r.put(format!("q_{}", i + 1), parts.join(" | "));
            }
            if let Some(out) = out {
                let text = io::write_partition_sequence(&s);
                write(out, &text)?;
                r.put("output_sha256", sha256(text.as_bytes()));
            }
            Ok((r, 0))
        }
    }
}

fn tww_verify(structure: &Path, sequence: &Path, bound: Option<usize>) -> Outcome {
    let (a, d1) = load_structure(structure)?;
    let text = read(sequence)?;
    let seq = parse(sequence, &text, io::parse_contractions)?;
    let mut r = Report::new("tww-verify");
    r.put("structure_sha256", d1);
    r.put("sequence_sha256", sha256(text.as_bytes()));
    r.put("n", a.n());
    match widths::verify_contraction(&a, &seq) {
        Err(e) => {
            r.put("valid", "no");
            r.put("error", e.to_string());
            Ok((r, EXIT_NO))
        }
        Ok(w) => {
            r.put("valid", "yes");
            r.put("width", w);
            let ok = bound.is_none_or(|b| w <= b);
            if let Some(b) = bound {
                r.put("within_bound", yes_no(ok));
                r.put("bound", b);
            }
            Ok((r, if ok { 0 } else { EXIT_NO }))
        }
    }
}

fn tww_exact(structure: &Path, out: Option<&Path>) -> Outcome {
    let (a, d) = load_structure(structure)?;
    let (w, seq) = widths::exact_twin_width(&a)?;
    let mut r = Report::new("tww-exact");
    r.put("structure_sha256", d);
    r.put("n", a.n());
    r.put("twin_width", w);
    if let Some(out) = out {
        let text = io::write_contractions(&seq);
        write(out, &text)?;
        r.put("output_sha256", sha256(text.as_bytes()));
    }
    Ok((r, 0))
}

fn width_convert(graph: &Path, input: &Path, from: Source, to: To, out: Option<&Path>) -> Outcome {
    let gtext = read(graph)?;
    let g = parse(graph, &gtext, io::parse_any_digraph)?;
    let n = g.n();
    let itext = read(input)?;
    let mut r = Report::new("width-convert");
    r.put("graph_sha256", sha256(gtext.as_bytes()));
    r.put("input_sha256", sha256(itext.as_bytes()));
    let tournament = || {
        Tournament::from_digraph(g.clone())
            .map_err(|_| Failure::Usage("conversion to a contraction sequence needs a tournament".into()))
    };
    let invalid = |r: &mut Report, e: String| {
        r.put("valid", "no");
        r.put("error", e);
    };
    let dpd = match from {
        Source::Order => {
            let ord: LinearOrder = parse(input, &itext, io::parse_order)?;
            if ord.n() != n {
                return Err(Failure::Invalid(format!("order has {} vertices, graph has {n}", ord.n())));
            }
            r.put("cut_width", widths::cutwidth_of_order(&g, &ord));
            Some(widths::dpd_from_order(&g, &ord))
        }
        Source::Dpd => {
            let d = parse(input, &itext, |s| io::parse_dpd(s, n))?;
            if let Err(v) = widths::validate_dpd(&g, &d) {
                invalid(&mut r, v.to_string());
                return Ok((r, EXIT_NO));
            }
            Some(d)
        }
        Source::Dtd => None,
    };
    let text = match (dpd, to) {
        (Some(d), To::Dpd) => {
            r.put("dpd_width", d.width());
            io::write_dpd(&d)
        }
        (Some(d), To::Dtd) => {
            r.put("dpd_width", d.width());
            let t = widths::dtd_from_dpd(&g, &d)?;
            r.put("dtd_width", t.width());
            io::write_dtd(&t)
        }
        (Some(d), To::Contraction) => {
            r.put("dpd_width", d.width());
            let t = tournament()?;
            let seq = widths::contraction_from_dpd(&t, &d)?;
            r.put("contraction_width", widths::verify_contraction(&RelStructure::from_tournament(&t), &seq)?);
            io::write_contractions(&seq)
        }
        (None, To::Contraction) => {
            let d = parse(input, &itext, |s| io::parse_dtd(s, n))?;
            if let Err(v) = widths::validate_dtd(&g, &d) {
                invalid(&mut r, v.to_string());
                return Ok((r, EXIT_NO));
            }
            r.put("dtd_width", d.width());
            let t = tournament()?;
            let seq = widths::contraction_from_dtd(&t, &d)?;
            r.put("contraction_width", widths::verify_contraction(&RelStructure::from_tournament(&t), &seq)?);
            io::write_contractions(&seq)
        }
        (None, _) => return Err(Failure::Usage("a dtd converts only to a contraction sequence".into())),
    };
    r.put("valid", "yes");
    if let Some(out) = out {
        write(out, &text)?;
        r.put("output_sha256", sha256(text.as_bytes()));
    }
    Ok((r, 0))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Writes `text`, checks that it re-parses to a value printing the same
/// bytes, and records the digest.
fn emit<T>(
    r: &mut Report,
    key: &str,
    path: &Path,
    text: &str,
    parse: impl Fn(&str) -> twintour_core::Result<T>,
    print: impl Fn(&T) -> String,
) -> Result<(), Failure> {
    let back = parse(text).map_err(|e| Failure::Invalid(format!("generated {key} does not re-parse: {e}")))?;
    if sha256(print(&back).as_bytes()) != sha256(text.as_bytes()) {
        return Err(Failure::Invalid(format!("generated {key} does not round-trip")));
    }
    write(path, text)?;
    r.put(format!("{key}_file"), path.display().to_string());
    r.put(format!("{key}_sha256"), sha256(text.as_bytes()));
    Ok(())
}

fn shuffle_perm(n: usize, common: &GenCommon) -> Option<Vec<usize>> {
    common.shuffle.then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        p
    })
}

fn relabel_sequence(seq: &ContractionSequence, p: &[usize]) -> ContractionSequence {
    let mut b = ContractionBuilder::new(seq.n());
    for &(x, y) in seq.merges() {
        b.merge_vertices(p[x], p[y]);
    }
    b.finish()
}

fn emit_tournament_and_seq(
    r: &mut Report,
    t: &Tournament,
    seq: &ContractionSequence,
    common: &GenCommon,
) -> Result<(), Failure> {
    let (t, seq) = match shuffle_perm(t.n(), common) {
        Some(p) => (t.relabel(&p), relabel_sequence(seq, &p)),
        None => (t.clone(), seq.clone()),
    };
    r.put("n", t.n());
    let w = widths::verify_contraction(&RelStructure::from_tournament(&t), &seq)?;
    r.put("contraction_width", w);
    emit(
        r,
        "tournament",
        &with_ext(&common.out, "trn"),
        &io::write_tournament(&t),
        io::parse_tournament,
        io::write_tournament,
    )?;
    emit(
        r,
        "sequence",
        &with_ext(&common.out, "seq"),
        &io::write_contractions(&seq),
        io::parse_contractions,
        io::write_contractions,
    )
}

fn gen(family: &GenFamily) -> Outcome {
    let mut r = Report::new("gen");
    match family {
        GenFamily::Cfi { base, k, twist, common } => {
            if *twist > 2 {
                return Err(Failure::Usage("--twist must be 0, 1 or 2".into()));
            }
            let (g, order, base_seq) = match base {
                Base::K4 => {
                    let mut b = ContractionBuilder::new(4);
                    b.merge_vertices(0, 1);
                    (BaseGraph::complete(4), LinearOrder::identity(4), b.finish())
                }
                Base::Wall => {
                    if *k == 0 {
                        return Err(Failure::Usage("--k must be at least 1 for the wall".into()));
                    }
                    let s = 2 * k + 2;
                    let seq = cfigen::grid_red_contraction(s, s);
                    (BaseGraph::wall(*k)?, widths::order_for_tww(&seq), seq)
                }
            };
            let mut alpha = vec![0u8; g.n()];
            alpha[0] = *twist;
            let cfi = CfiGraph::new(g, order, alpha)?;
            let seq = cfigen::cfi_contraction(&cfi, &base_seq)?;
            r.put("family", "cfi");
            r.put(
                "base",
                match base {
                    Base::K4 => "k4",
                    Base::Wall => "wall",
                },
            );
            r.put("twist", *twist);
            emit_tournament_and_seq(&mut r, &cfi.tournament(), &seq, common)?;
        }
        GenFamily::Grid { n, m, common } => {
            if *n == 0 || *m == 0 {
                return Err(Failure::Usage("grid sides must be positive".into()));
            }
            let mut a = cfigen::toroidal_grid(*n, *m);
            let mut seq = cfigen::grid_red_contraction(*n, *m);
            if let Some(p) = shuffle_perm(a.n(), common) {
                a = a.relabel(&p);
                seq = relabel_sequence(&seq, &p);
            }
            r.put("family", "grid");
            r.put("n", a.n());
            r.put("contraction_width", widths::verify_contraction(&a, &seq)?);
            emit(
                &mut r,
                "structure",
                &with_ext(&common.out, "red"),
                &io::write_struct(&a),
                io::parse_struct,
                io::write_struct,
            )?;
            emit(
                &mut r,
                "sequence",
                &with_ext(&common.out, "seq"),
                &io::write_contractions(&seq),
                io::parse_contractions,
                io::write_contractions,
            )?;
        }
        GenFamily::Circular { m, common } => {
            r.put("family", "circular");
            emit_tournament_and_seq(&mut r, &Tournament::circular(*m), &cfigen::circular_contraction(*m), common)?;
        }
        GenFamily::Random { n, common } => {
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let t = Tournament::random(*n, &mut rng);
            r.put("family", "random");
            r.put("seed", common.seed);
            r.put("n", t.n());
            emit(
                &mut r,
                "tournament",
                &with_ext(&common.out, "trn"),
                &io::write_tournament(&t),
                io::parse_tournament,
                io::write_tournament,
            )?;
        }
    }
    Ok((r, 0))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Iso { a, b, k, oracle } => iso(a, b, *k, *oracle),
        Command::Wl { file, k, pair } => wl_cmd(file, *k, pair.as_deref()),
        Command::PartitionSeq { file, k, out } => partition_seq(file, *k, out.as_deref()),
        Command::TwwVerify { structure, sequence, bound } => tww_verify(structure, sequence, *bound),
        Command::TwwExact { structure, out } => tww_exact(structure, out.as_deref()),
        Command::Width { op: WidthOp::Convert { graph, input, from, to, out } } => {
            width_convert(graph, input, *from, *to, out.as_deref())
        }
        Command::Gen { family } => gen(family),
    }
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("TWINTOUR_THREADS") {
        let n: usize =
            v.parse().map_err(|_| Failure::Usage(format!("TWINTOUR_THREADS must be a number, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let outcome = init_threads().and_then(|_| run(&cli));
    match outcome {
        Ok((mut r, code)) => {
            r.put("elapsed_ms", start.elapsed().as_millis() as u64);
            print!("{}", r.render(cli.json));
            ExitCode::from(code)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("twintour: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("twintour: {m}");
            ExitCode::from(EXIT_NO)
        }
    }
}
