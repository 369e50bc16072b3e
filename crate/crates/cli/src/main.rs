//! `adlv`: class catalogs, single queries, surveys and rank-2 figures.

mod cache;
mod figure;
mod survey;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use adlv::adlv_engine::{ClassContext, Orientation};
use adlv::{DatumSpec, ExtAffWeylElt, RootDatum, SigmaConjClass};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::cache::Cache;
use crate::survey::{SurveyRecord, Summary};

#[derive(Parser)]
#[command(name = "adlv", version, about = "Emptiness and dimension of affine Deligne-Lusztig varieties")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List σ-conjugacy classes up to a bound on ⟨2ρ, ν⟩.
    Classes {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value_t = 4)]
        bound: i64,
        /// Range of central characters of κ for groups with a non-trivial center.
        #[arg(long, default_value_t = 2)]
        central_bound: i64,
    },
    /// Decide one variety X_x(b).
    Query {
        #[command(flatten)]
        datum: DatumArgs,
        /// Element of W̃, e.g. `s0121` or `t[1,0,-1]·s1`.
        #[arg(long)]
        x: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Decide X_x(b) for every x in the Ω-component of b up to a length.
    Survey {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = SurveyFormat::Json)]
        format: SurveyFormat,
        /// Exit with status 2 when a prediction disagrees with the computation.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Draw a survey of a rank-2 group.
    Figure {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = FigureFormat::Svg)]
        format: FigureFormat,
        /// Output file; standard output when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Orbit-intersection dimension table of x.
    Table {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        x: String,
        /// Twisting element w.
        #[arg(long, default_value = "e")]
        twist: String,
        /// Simple roots (1-based, comma separated) of the standard Levi; all when absent.
        #[arg(long)]
        levi: Option<String>,
        #[arg(long, value_enum, default_value_t = OrientationArg::Periodic)]
        orientation: OrientationArg,
        #[arg(long, env = "ADLV_CACHE_DIR")]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct DatumArgs {
    /// Cartan type: A, B, C, D, G or GL.
    #[arg(long = "type")]
    family: String,
    #[arg(long)]
    rank: usize,
    /// sc or adjoint (ignored for GL).
    #[arg(long, default_value = "sc")]
    variant: String,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Class key `nu=[..];kappa=k`; the basic class of x (or trivial class) when absent.
    #[arg(long)]
    class: Option<String>,
    /// Length bound on the sweep over w; a bound from x and b when absent.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, env = "ADLV_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SurveyFormat {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureFormat {
    Svg,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Periodic,
    Infinity,
}

impl DatumArgs {
    fn build(&self) -> Result<RootDatum> {
        let variant = if self.family.eq_ignore_ascii_case("gl") { "gl" } else { &self.variant };
        Ok(RootDatum::build(DatumSpec::parse(&self.family, self.rank, variant)?)?)
    }
}

fn open_cache(dir: &Option<PathBuf>) -> Result<Cache> {
    match dir {
        Some(d) => Cache::open(d),
        None => Ok(Cache::disabled()),
    }
}

fn resolve_class(d: &RootDatum, key: &Option<String>, x: Option<&ExtAffWeylElt>) -> Result<SigmaConjClass> {
    Ok(match key {
        Some(k) => d.parse_class_key(k)?,
        None => d.basic_class(&d.eta_g(x.unwrap_or(&ExtAffWeylElt::IDENTITY))),
    })
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j.max(1));
    }
    Ok(b.build()?)
}

/// Records for the given elements, served from the cache when possible. New
/// results are computed in parallel and appended by the calling thread.
fn records(
    ctx: &ClassContext,
    xs: &[ExtAffWeylElt],
    cutoff: Option<usize>,
    cache: &mut Cache,
    pool: &rayon::ThreadPool,
    mut sink: impl FnMut(&ExtAffWeylElt, &SurveyRecord) -> Result<()>,
) -> Result<()> {
    let d = ctx.d;
    let datum = d.canonical_json();
    let class_key = d.class_key(&ctx.class);
    let key_of = |x: &ExtAffWeylElt| cache::key(&datum, "survey_record", &json!({"x": d.fmt_elt(x), "class": class_key, "cutoff": cutoff}));
    const CHUNK: usize = 64;
    for chunk in xs.chunks(CHUNK) {
        let keys: Vec<String> = chunk.iter().map(key_of).collect();
        let cached: Vec<Option<SurveyRecord>> = keys
            .iter()
            .map(|k| cache.get(k).and_then(|v| serde_json::from_value(v.clone()).ok()))
            .collect();
        let fresh: Vec<Option<Result<SurveyRecord>>> = pool.install(|| {
            chunk
                .par_iter()
                .zip(&cached)
                .map(|(x, c)| c.is_none().then(|| survey::compute(ctx, x, cutoff)))
                .collect()
        });
        for ((x, (k, c)), f) in chunk.iter().zip(keys.into_iter().zip(cached)).zip(fresh) {
            let rec = match (c, f) {
                (Some(r), _) => r,
                (None, Some(r)) => {
                    let r = r?;
                    cache.put(k, serde_json::to_value(&r)?)?;
                    r
                }
                (None, None) => unreachable!("uncached records are computed"),
            };
            sink(x, &rec)?;
        }
    }
    Ok(())
}

fn cmd_classes(datum: &DatumArgs, bound: i64, central_bound: i64) -> Result<()> {
    let d = datum.build()?;
    let recs: Vec<_> = d.enumerate_classes(bound, central_bound).iter().map(|c| d.class_record(c)).collect::<Result<_, _>>()?;
    println!("{}", serde_json::to_string_pretty(&recs)?);
    Ok(())
}

fn cmd_query(datum: &DatumArgs, x: &str, run: &RunArgs) -> Result<()> {
    let d = datum.build()?;
    let x = d.parse_elt(x)?;
    let class = resolve_class(&d, &run.class, Some(&x))?;
    let ctx = ClassContext::new(&d, &class);
    let mut cache = open_cache(&run.cache_dir)?;
    let pool = pool(run.jobs)?;
    let mut out = None;
    records(&ctx, &[x], run.cutoff, &mut cache, &pool, |_, r| {
        out = Some(r.clone());
        Ok(())
    })?;
    let rec = out.context("no record produced")?;
    let mut v = serde_json::to_value(&rec)?;
    let proper: Vec<String> = d
        .p_alcove_parabolics(&x)
        .into_iter()
        .filter(|p| !p.is_group(&d))
        .map(|p| p.describe(&d))
        .collect();
    v["standard_rep"] = json!(d.fmt_elt(&ctx.b));
    v["x_geq_b"] = json!(d.bruhat_leq(&ctx.b, &x));
    v["proper_p_alcoves"] = json!(proper);
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

/// The survey domain: the Ω-component of κ up to `max_len`, ordered by length then word.
fn survey_domain(d: &RootDatum, class: &SigmaConjClass, max_len: usize) -> Vec<ExtAffWeylElt> {
    let tau = d.omega_of_class(&class.kappa);
    d.ball_in_component(max_len, &tau)
}

fn cmd_survey(datum: &DatumArgs, max_len: usize, format: SurveyFormat, check: bool, run: &RunArgs) -> Result<bool> {
    let d = datum.build()?;
    let class = resolve_class(&d, &run.class, None)?;
    let ctx = ClassContext::new(&d, &class);
    let mut cache = open_cache(&run.cache_dir)?;
    let pool = pool(run.jobs)?;
    let xs = survey_domain(&d, &class, max_len);
    let stdout = std::io::stdout();
    let mut w = std::io::BufWriter::new(stdout.lock());
    if let SurveyFormat::Tsv = format {
        writeln!(w, "{}", survey::TSV_HEADER)?;
    }
    let mut summary = Summary::default();
    records(&ctx, &xs, run.cutoff, &mut cache, &pool, |_, r| {
        summary.add(r);
        match format {
            SurveyFormat::Json => writeln!(w, "{}", serde_json::to_string(r)?)?,
            SurveyFormat::Tsv => writeln!(w, "{}", survey::tsv_row(r))?,
        }
        Ok(())
    })?;
    match format {
        SurveyFormat::Json => writeln!(w, "{}", serde_json::to_string(&summary)?)?,
        SurveyFormat::Tsv => eprintln!("{}", serde_json::to_string(&summary)?),
    }
    w.flush()?;
    Ok(check && summary.disagreements() > 0)
}

fn cmd_figure(datum: &DatumArgs, max_len: usize, format: FigureFormat, output: &Option<PathBuf>, run: &RunArgs) -> Result<()> {
    let d = datum.build()?;
    if d.ss_rank() != 2 || !d.is_semisimple() {
        bail!("figures are only drawn for semisimple groups of rank 2");
    }
    let class = resolve_class(&d, &run.class, None)?;
    let ctx = ClassContext::new(&d, &class);
    let mut cache = open_cache(&run.cache_dir)?;
    let pool = pool(run.jobs)?;
    let xs = survey_domain(&d, &class, max_len);
    let mut items = Vec::with_capacity(xs.len());
    records(&ctx, &xs, run.cutoff, &mut cache, &pool, |x, r| {
        items.push((*x, r.clone()));
        Ok(())
    })?;
    let text = match format {
        FigureFormat::Svg => figure::render_svg(&d, &items)?,
        FigureFormat::Tsv => {
            let mut s = format!("{}\n", survey::TSV_HEADER);
            for (_, r) in &items {
                s.push_str(&survey::tsv_row(r));
                s.push('\n');
            }
            s
        }
    };
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_table(datum: &DatumArgs, x: &str, twist: &str, levi: &Option<String>, orientation: OrientationArg, cache_dir: &Option<PathBuf>) -> Result<()> {
    let d = datum.build()?;
    let x = d.parse_elt(x)?;
    let w = d.parse_elt(twist)?;
    let j = match levi {
        Some(s) => adlv::root_data::parse_subset(s)?,
        None => (0..d.ss_rank()).collect(),
    };
    let p = d.standard_parabolic(&j);
    let orient = match orientation {
        OrientationArg::Periodic => Orientation::Periodic,
        OrientationArg::Infinity => Orientation::AtInfinity,
    };
    let mut cache = open_cache(cache_dir)?;
    let key = cache::key(
        &d.canonical_json(),
        "orbit_dim_table",
        &json!({"x": d.fmt_elt(&x), "twist": d.fmt_elt(&w), "levi": j, "orientation": format!("{orient:?}")}),
    );
    let v = match cache.get(&key) {
        Some(v) => v.clone(),
        None => {
            let t = d.orbit_dim_table(&x, &p, &w, orient)?;
            let entries: Vec<_> = t.entries.iter().map(|(y, e)| json!({"y": d.fmt_elt(y), "dim": e})).collect();
            let v = json!({
                "x": d.fmt_elt(&x),
                "twist": d.fmt_elt(&w),
                "parabolic": p.describe(&d),
                "orientation": format!("{orient:?}"),
                "entries": entries,
            });
            cache.put(key, v.clone())?;
            v
        }
    };
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Classes { datum, bound, central_bound } => cmd_classes(datum, *bound, *central_bound).map(|_| false),
        Cmd::Query { datum, x, run } => cmd_query(datum, x, run).map(|_| false),
        Cmd::Survey { datum, max_len, format, check, run } => cmd_survey(datum, *max_len, *format, *check, run),
        Cmd::Figure { datum, max_len, format, output, run } => cmd_figure(datum, *max_len, *format, output, run).map(|_| false),
        Cmd::Table { datum, x, twist, levi, orientation, cache_dir } => {
            cmd_table(datum, x, twist, levi, *orientation, cache_dir).map(|_| false)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("disagreement found");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
