//! Command-line front end. Every command writes its table to stdout and
//! diagnostics (elapsed time, warnings, verdict notes) to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frslab_core::asymptotics::{classify_with, Grid, Thresholds};
use frslab_core::constructions::{cia_hat, lci_patch, scale_model};
use frslab_core::count::{
    count_lifted_with, count_naive, h_value, CountConfig, CountRecord, HEntry, HOutcome, HSequence, Method,
};
use frslab_core::padic::{self, BallFamily, BallUnion, RatioEntry};
use frslab_core::poly::PolyMap;
use frslab_core::ring::RingSpec;
use frslab_core::scheme::{scheme_hash, SchemePresentation};
use frslab_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::ballfile::parse_balls;
use crate::cache::Cache;
use crate::mapfile::{parse_map, write_map, MapFile};
use crate::parallel::Rayon;
use crate::report;
use crate::schemefile::{parse_scheme, write_scheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "frslab", version, about = "Exact point counts over finite local rings and the asymptotics of h-sequences")]
pub struct Cli {
    #[command(flatten)]
    pub limits: Limits,
    /// Worker threads for root-parallel lifting (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Limits {
    /// Largest number of tuples naive enumeration may visit.
    #[arg(long, global = true, default_value_t = CountConfig::default().naive_cap)]
    pub naive_cap: u64,
    /// Largest stack of pending lifting nodes.
    #[arg(long, global = true, default_value_t = CountConfig::default().live_node_cap)]
    pub live_node_cap: usize,
    /// Total lifting nodes one count may visit.
    #[arg(long, global = true, default_value_t = CountConfig::default().node_budget)]
    pub node_budget: u64,
}

impl Limits {
    fn config(&self) -> CountConfig {
        CountConfig { naive_cap: self.naive_cap, live_node_cap: self.live_node_cap, node_budget: self.node_budget }
    }
}

#[derive(Debug, Args)]
pub struct CacheArgs {
    /// Cache directory (default: $FRSLAB_CACHE, else ./.frslab-cache).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, conflicts_with = "cache")]
    pub no_cache: bool,
}

impl CacheArgs {
    fn cache(&self) -> Option<Cache> {
        (!self.no_cache).then(|| Cache::resolve(self.cache.as_deref()))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count the points of a scheme over Z_q / p^n.
    Count {
        scheme: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        n: u32,
        /// Enumerate every tuple.
        #[arg(long, conflicts_with = "lifted")]
        naive: bool,
        /// Hensel lifting only, no naive fallback.
        #[arg(long)]
        lifted: bool,
        /// Fill the seconds column.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// The sequence h(Z_q / p^n) for n = 1..=nmax.
    Hseq {
        scheme: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        nmax: u32,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Run the finite-grid asymptotic tests and report verdicts.
    Classify {
        scheme: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5])]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        rmax: u32,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        /// Growth ratio threshold, as num/den.
        #[arg(long, default_value = "3/2")]
        tau: String,
        /// Growth tail length (default max(3, nmax/2 + 1)).
        #[arg(long)]
        tail: Option<usize>,
        /// Relative slack for a stable running maximum, as num/den.
        #[arg(long, default_value = "1/10")]
        eps: String,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        /// Also write the CSV table here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build derived schemes: scaled model, integral hat, or cover patches.
    Construct {
        scheme: PathBuf,
        /// Write files here instead of stdout.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Pushforward masses, boundedness ratios and eccentricities of ball families.
    Measure {
        #[arg(value_enum)]
        kind: MeasureKind,
        /// Map file (pushforward and ratio).
        #[arg(long)]
        map: Option<PathBuf>,
        /// `balls`, `counterexample`, or a ball-union file.
        #[arg(long, default_value = "balls")]
        family: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        nmax: u32,
        /// Radius exponent multiplier of the `balls` family.
        #[arg(long, default_value_t = 1)]
        scale: u32,
        /// Ambient dimension of the `balls` family when no map is given.
        #[arg(long)]
        dim: Option<usize>,
        /// Eccentricity centre, space separated (default: origin).
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Markdown,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    /// Integral presentation from the CIA witness, with its morphism.
    Hat,
    /// Rescale every variable by K.
    Scale { k: BigInt },
    /// Cover patches from the cover certificate.
    Patch {
        #[arg(long = "P", default_value = "1")]
        big_p: BigInt,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    Pushforward,
    Ratio,
    Eccentricity,
}

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(Error::Certificate(_)) => EXIT_CERTIFICATE,
            Failure::Core(Error::ResourceLimit(_)) => EXIT_LIMIT,
            Failure::Core(_) | Failure::Io(_) => EXIT_INVALID,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(m) => m.clone(),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_scheme(path: &Path) -> Result<SchemePresentation, Failure> {
    Ok(parse_scheme(&read(path)?)?)
}

fn parse_rat(s: &str, what: &str) -> Result<BigRational, Failure> {
    let bad = || Failure::Core(Error::InvalidInput(format!("{what}: {s:?} is not a rational number")));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Auto,
    Naive,
    Lifted,
}

/// Count one cell, reading and writing the cache. `Auto` lifts and falls
/// back to enumeration on a resource limit.
fn count_cell(x: &SchemePresentation, p: u64, r: u32, n: u32, mode: Mode, cfg: &CountConfig, cache: Option<&Cache>) -> Result<CountRecord, Failure> {
    let ring = RingSpec::new(p, n, r)?;
    let hash = scheme_hash(x);
    if let Some(c) = cache {
        match c.get(&hash, p, r, n) {
            Ok(Some(rec)) if mode == Mode::Auto || (mode == Mode::Naive) == (rec.method == Method::Naive) => return Ok(rec),
            Ok(_) => {}
            Err(e) => eprintln!("warning: ignoring cache entry: {e}"),
        }
    }
    let start = Instant::now();
    let (count, method) = match mode {
        Mode::Naive => (count_naive(x, &ring, cfg)?, Method::Naive),
        Mode::Lifted => (count_lifted_with(x, p, n, r, cfg, &Rayon)?, Method::Lifted),
        Mode::Auto => match count_lifted_with(x, p, n, r, cfg, &Rayon) {
            Ok(c) => (c, Method::Lifted),
            Err(Error::ResourceLimit(_)) => (count_naive(x, &ring, cfg)?, Method::Naive),
            Err(e) => return Err(e.into()),
        },
    };
    let rec = CountRecord { scheme: hash, p, r, n, count, method, elapsed: Some(start.elapsed().as_secs_f64()) };
    if let Some(c) = cache {
        if let Err(e) = c.put(&rec) {
            eprintln!("warning: could not write cache in {}: {e}", c.dir().display());
        }
    }
    Ok(rec)
}

fn cmd_count(x: &SchemePresentation, p: u64, r: u32, n: u32, mode: Mode, timings: bool, cfg: &CountConfig, cache: Option<&Cache>) -> Outcome {
    let start = Instant::now();
    let rec = count_cell(x, p, r, n, mode, cfg, cache)?;
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    Ok(report::count_csv(&x.name, x.dim_q, &[rec], timings))
}

fn cmd_hseq(x: &SchemePresentation, p: u64, r: u32, nmax: u32, cfg: &CountConfig, cache: Option<&Cache>) -> Outcome {
    if nmax < 1 {
        return Err(Error::InvalidInput("nmax must be at least 1".into()).into());
    }
    RingSpec::new(p, 1, r)?;
    let mut entries = Vec::new();
    let mut stopped: Option<String> = None;
    for n in 1..=nmax {
        let outcome = match &stopped {
            Some(msg) => HOutcome::Limit(msg.clone()),
            None => match count_cell(x, p, r, n, Mode::Auto, cfg, cache) {
                Ok(rec) => HOutcome::Value { h: h_value(&rec.count, p, n, r, x.dim_q), count: rec.count, method: rec.method },
                Err(Failure::Core(Error::ResourceLimit(msg))) => {
                    eprintln!("warning: n = {n} hit a resource limit ({msg}); remaining rows are marked {}", report::LIMIT);
                    stopped = Some(msg.clone());
                    HOutcome::Limit(msg)
                }
                Err(e) => return Err(e),
            },
        };
        entries.push(HEntry { n, outcome });
    }
    let seq = HSequence { scheme: scheme_hash(x), p, r, dim_q: x.dim_q, entries };
    Ok(report::hseq_csv(&x.name, &seq))
}

#[allow(clippy::too_many_arguments)]
fn cmd_classify(
    x: &SchemePresentation,
    primes: Vec<u64>,
    rmax: u32,
    nmax: u32,
    th: Thresholds,
    format: Format,
    csv_out: Option<&Path>,
    cfg: &CountConfig,
) -> Outcome {
    if rmax < 1 {
        return Err(Error::InvalidInput("rmax must be at least 1".into()).into());
    }
    let grid = Grid { primes, rs: (1..=rmax).collect(), n_max: nmax };
    let rep = classify_with(x, &grid, &th, cfg, &Rayon)?;
    let csv = report::classify_csv(&rep);
    if let Some(path) = csv_out {
        fs::write(path, &csv).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(match format {
        Format::Markdown => report::classify_markdown(&rep),
        Format::Csv => csv,
    })
}

/// Named documents; printed with a `# file:` comment header or written out.
fn emit(docs: Vec<(String, String)>, notes: Vec<String>, out: Option<&Path>) -> Outcome {
    let mut text = String::new();
    for n in &notes {
        text.push_str(&format!("# {n}\n"));
    }
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            for (name, body) in &docs {
                let path = dir.join(name);
                fs::write(&path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                text.push_str(&format!("wrote {}\n", path.display()));
            }
        }
        None => {
            for (name, body) in &docs {
                text.push_str(&format!("# file: {name}\n{body}"));
            }
        }
    }
    Ok(text)
}

fn cmd_construct(x: &SchemePresentation, kind: &ConstructKind, out: Option<&Path>) -> Outcome {
    match kind {
        ConstructKind::Scale { k } => {
            let s = scale_model(x, k)?;
            emit(vec![(format!("{}.toml", s.result.name), write_scheme(&s.result))], vec![format!("K = {k}, r(K) = {}", s.r_k)], out)
        }
        ConstructKind::Hat => {
            let h = cia_hat(x)?;
            let morphism = MapFile {
                name: Some(format!("{}-morphism", h.hat.name)),
                vars: x.vars.clone(),
                map: PolyMap::new(x.nvars(), h.morphism.iter().map(|g| g.to_rat()).collect())?,
            };
            let notes = vec![format!("P' = {}, t = {}, P = {}, m = {}", h.p_prime, h.t, h.p, h.m)];
            let docs = vec![
                (format!("{}.toml", h.hat.name), write_scheme(&h.hat)),
                (format!("{}-morphism.toml", h.hat.name), write_map(&morphism)),
            ];
            emit(docs, notes, out)
        }
        ConstructKind::Patch { big_p } => {
            let pc = lci_patch(x, Some(big_p))?;
            let notes = vec![format!("P = {}, N_bound = {}", pc.p, pc.n_bound)];
            let docs = pc.patches.iter().map(|u| (format!("{}.toml", u.name), write_scheme(u))).collect();
            emit(docs, notes, out)
        }
    }
}

struct MeasureArgs<'a> {
    kind: MeasureKind,
    map: Option<&'a Path>,
    family: &'a str,
    p: u64,
    nmax: u32,
    scale: u32,
    dim: Option<usize>,
    point: Option<&'a str>,
}

fn family_members(a: &MeasureArgs, dim: usize) -> Result<Vec<BallUnion>, Failure> {
    let fam = match a.family {
        "balls" => BallFamily::Balls { p: a.p, dim, scale: a.scale },
        "counterexample" => BallFamily::Counterexample { p: a.p },
        path => {
            let members = parse_balls(&read(Path::new(path))?, a.p)?;
            if let Some(u) = members.iter().find(|u| u.dim() != dim && !u.balls().is_empty()) {
                return Err(Error::InvalidInput(format!("ball file has dimension {}, expected {dim}", u.dim())).into());
            }
            return Ok(members);
        }
    };
    if a.nmax < 1 {
        return Err(Error::InvalidInput("nmax must be at least 1".into()).into());
    }
    Ok((1..=a.nmax).map(|n| fam.member(n)).collect::<Result<Vec<_>, _>>()?)
}

fn cmd_measure(a: MeasureArgs, cfg: &CountConfig) -> Outcome {
    let map = a.map.map(|m| read(m).and_then(|t| Ok(parse_map(&t)?))).transpose()?;
    let need_map = || map.as_ref().ok_or_else(|| Failure::Core(Error::InvalidInput("--map is required".into())));
    match a.kind {
        MeasureKind::Pushforward => {
            let f = &need_map()?.map;
            let mut rows = Vec::new();
            for (i, u) in family_members(&a, f.target_dim())?.iter().enumerate() {
                let mass = padic::pushforward_mass_rat_with(f, u, cfg, &Rayon)?;
                rows.push((i as u32 + 1, mass, u.haar()));
            }
            Ok(report::pushforward_csv(&rows))
        }
        MeasureKind::Ratio => {
            let f = &need_map()?.map;
            let mut rows = Vec::new();
            for (i, u) in family_members(&a, f.target_dim())?.iter().enumerate() {
                let n = i as u32 + 1;
                let mass = padic::pushforward_mass_rat_with(f, u, cfg, &Rayon)?;
                let haar = u.haar();
                if haar.is_zero() {
                    return Err(Error::InvalidInput(format!("family member {n} is empty")).into());
                }
                let degenerate = u.raw_measure() != haar;
                if degenerate {
                    eprintln!("note: member {n} has overlapping balls; its measure counts the overlap once");
                }
                rows.push((RatioEntry { n, ratio: &mass / &haar, mass, haar }, degenerate));
            }
            Ok(report::ratio_csv(&rows))
        }
        MeasureKind::Eccentricity => {
            let dim = match (a.dim, &map, a.family) {
                (Some(d), _, _) => d,
                (None, Some(m), _) => m.map.target_dim(),
                _ => 1,
            };
            let members = family_members(&a, dim)?;
            let dim = members.first().map_or(dim, BallUnion::dim);
            let point: Vec<BigInt> = match a.point {
                Some(s) => s
                    .split_whitespace()
                    .map(|c| c.parse().map_err(|_| Failure::Core(Error::InvalidInput(format!("bad coordinate {c:?}")))))
                    .collect::<Result<_, _>>()?,
                None => vec![BigInt::zero(); dim],
            };
            let recs = members
                .iter()
                .enumerate()
                .map(|(i, u)| padic::eccentricity_at(u, &point, i as u32 + 1))
                .collect::<Result<Vec<_>, _>>()?;
            let verdict = padic::eccentricity_verdict(&recs);
            let max = recs.iter().map(|r| r.ratio.clone()).max().unwrap_or_default();
            let shape = if recs.windows(2).all(|w| w[0].ratio == w[1].ratio) {
                "constant"
            } else if recs.windows(2).all(|w| w[0].ratio <= w[1].ratio) {
                "nondecreasing"
            } else {
                "not monotone"
            };
            eprintln!("verdict over n = 1..{} (finite range): {verdict:?}; ratios {shape}, max {max}", recs.len());
            Ok(report::eccentricity_csv(&recs))
        }
    }
}

fn dispatch(cli: Cli) -> Outcome {
    let cfg = cli.limits.config();
    match cli.command {
        Command::Count { scheme, p, r, n, naive, lifted, timings, cache } => {
            let x = load_scheme(&scheme)?;
            let mode = if naive {
                Mode::Naive
            } else if lifted {
                Mode::Lifted
            } else {
                Mode::Auto
            };
            cmd_count(&x, p, r, n, mode, timings, &cfg, cache.cache().as_ref())
        }
        Command::Hseq { scheme, p, r, nmax, cache } => cmd_hseq(&load_scheme(&scheme)?, p, r, nmax, &cfg, cache.cache().as_ref()),
        Command::Classify { scheme, primes, rmax, nmax, tau, tail, eps, format, csv } => {
            let th = Thresholds { tau: parse_rat(&tau, "--tau")?, tail_len: tail, stable_eps: parse_rat(&eps, "--eps")? };
            cmd_classify(&load_scheme(&scheme)?, primes, rmax, nmax, th, format, csv.as_deref(), &cfg)
        }
        Command::Construct { scheme, out, kind } => cmd_construct(&load_scheme(&scheme)?, &kind, out.as_deref()),
        Command::Measure { kind, map, family, p, nmax, scale, dim, point } => cmd_measure(
            MeasureArgs { kind, map: map.as_deref(), family: &family, p, nmax, scale, dim, point: point.as_deref() },
            &cfg,
        ),
    }
}

/// Parse arguments, run, print, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match dispatch(cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return EXIT_INVALID;
            }
            EXIT_OK
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit_code()
        }
    }
}
