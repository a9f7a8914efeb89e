use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use quatgraph::algebra::{format_poly, parse_poly, FieldSpec, Fq, Poly};
use quatgraph::homspace::{act_elem, hom, Stability};
use quatgraph::quaternion::{AlgebraData, QuatElem, RamificationSet};
use quatgraph::quotient::{compute_quotient, ComputeOptions, QuotientGraph, FORMAT_VERSION};
use quatgraph::tree::Vertex;
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "quatgraph", version, about = "Quotient graphs of the Bruhat-Tits tree by unit groups of maximal F_q[T]-orders")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the quotient graph and write it out
    Compute {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        out: Output,
    },
    /// Move a vertex of the tree into the fundamental domain
    Reduce {
        #[command(flatten)]
        job: Job,
        /// vertex in the form "(n; c_v,...,c_{n-1}@v)" or "(n; 0)"
        vertex: String,
    },
    /// Print generators and relations of the unit group
    Present {
        #[command(flatten)]
        job: Job,
    },
    /// Write a unit as a word in the generators
    Word {
        #[command(flatten)]
        job: Job,
        /// element as "a + (b)*i + (c)*j + (d)*k", k = (eps i + ij)/alpha
        element: String,
    },
    /// Print a basis of Hom(v, w)
    Hom {
        #[command(flatten)]
        job: Job,
        source: String,
        target: String,
    },
    /// Check the graph against the structure theorem and the bounds
    Verify {
        #[command(flatten)]
        job: Job,
    },
    /// Write a cached or loaded graph in another format
    Export {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Job {
    /// size of the constant field (an odd prime power)
    #[arg(long)]
    q: Option<u32>,
    /// coefficients of the modulus defining F_q over F_p, constant term first
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// ramified primes, comma separated, e.g. T,T+1,T^2+2
    #[arg(long)]
    primes: Option<String>,
    /// use this alpha instead of searching for the smallest one
    #[arg(long)]
    alpha: Option<String>,
    /// read the graph from a JSON artifact instead of computing it
    #[arg(long, conflicts_with_all = ["q", "primes", "alpha", "modulus"])]
    input: Option<PathBuf>,
    /// maximum p-adic precision for Hom systems and vertex actions
    #[arg(long)]
    precision_cap: Option<i64>,
    /// worker threads (1 disables parallelism)
    #[arg(long)]
    threads: Option<usize>,
    /// skip the structure checks after computing
    #[arg(long)]
    no_verify: bool,
    /// allow alpha beyond the degree bound table
    #[arg(long)]
    no_degree_bound: bool,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// write here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

/// A failed check, as opposed to bad input or a bug.
#[derive(Debug)]
struct VerificationFailed(String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

/// Splits at commas outside brackets, so `[1,2]*T+1,T` is two polynomials.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

struct Algebra {
    fq: Fq,
    ram: RamificationSet,
    alpha: Option<Poly>,
}

impl Job {
    fn algebra(&self) -> Result<Algebra> {
        let q = self.q.ok_or_else(|| user("--q is required (or --input)"))?;
        let fq = Fq::new(FieldSpec::from_q(q, self.modulus.clone())?)?;
        let primes_arg = self.primes.as_deref().ok_or_else(|| user("--primes is required (or --input)"))?;
        let primes = split_top_level(primes_arg)
            .into_iter()
            .map(|p| parse_poly(p, &fq).with_context(|| format!("in --primes: {p:?}")))
            .collect::<Result<Vec<_>>>()?;
        let ram = RamificationSet::new(&fq, &primes)?;
        let alpha = self.alpha.as_deref().map(|a| parse_poly(a, &fq).with_context(|| format!("in --alpha: {a:?}"))).transpose()?;
        Ok(Algebra { fq, ram, alpha })
    }

    fn cache_path(&self, a: &Algebra) -> Option<PathBuf> {
        if self.no_cache {
            return None;
        }
        let dir = self.cache_dir.clone().or_else(default_cache_dir)?;
        let primes: Vec<String> = a.ram.primes().iter().map(|p| format_poly(p, &a.fq)).collect();
        let key = format!(
            "v{FORMAT_VERSION}|q={}|modulus={:?}|primes={}|alpha={}",
            a.fq.q(),
            a.fq.spec().modulus,
            primes.join(","),
            a.alpha.as_ref().map_or("auto".to_string(), |x| format_poly(x, &a.fq))
        );
        Some(dir.join(format!("{}.json", hex::encode(Sha256::digest(key.as_bytes())))))
    }

    fn options(&self) -> ComputeOptions {
        ComputeOptions { parallel: self.threads != Some(1) }
    }

    fn compute(&self, a: &Algebra) -> Result<QuotientGraph> {
        let alg = match &a.alpha {
            Some(alpha) => AlgebraData::with_alpha(&a.fq, a.ram.clone(), alpha.clone())?,
            None => AlgebraData::build(&a.fq, a.ram.primes(), !self.no_degree_bound)?,
        };
        if let Some(cap) = self.precision_cap {
            alg.set_precision_cap(cap);
        }
        Ok(compute_quotient(Arc::new(alg), self.options())?)
    }

    /// The graph from `--input`, the cache, or a fresh computation (which
    /// is then cached).
    fn graph(&self, fresh: bool) -> Result<QuotientGraph> {
        let g = if let Some(path) = &self.input {
            let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            QuotientGraph::from_json(&s).with_context(|| format!("loading {}", path.display()))?
        } else {
            let a = self.algebra()?;
            let cache = self.cache_path(&a);
            let cached = if fresh { None } else { cache.as_deref().and_then(load_cached) };
            match cached {
                Some(g) => g,
                None => {
                    let g = self.compute(&a)?;
                    if let Some(path) = cache {
                        // a cache that cannot be written is not an error
                        let _ = store_cached(&path, &g.to_json());
                    }
                    g
                }
            }
        };
        if let Some(cap) = self.precision_cap {
            g.alg().set_precision_cap(cap);
        }
        Ok(g)
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("quatgraph"))
}

fn load_cached(path: &Path) -> Option<QuotientGraph> {
    QuotientGraph::from_json(&fs::read_to_string(path).ok()?).ok()
}

fn store_cached(path: &Path, json: &str) -> std::io::Result<()> {
    fs::create_dir_all(path.parent().unwrap())?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, json)?;
    fs::rename(&tmp, path)
}

fn user(msg: &str) -> anyhow::Error {
    anyhow!(quatgraph::Error::InvalidInput(msg.to_string()))
}

fn render(g: &QuotientGraph, out: &Output) -> Result<()> {
    let s = match out.format {
        Format::Json => g.to_json(),
        Format::Dot => g.to_dot(),
        Format::Text => g.to_text(),
    };
    match &out.output {
        Some(path) => fs::write(path, s).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(s.as_bytes())?,
    }
    Ok(())
}

/// Prints the structure report to stderr and fails if any check fails.
fn verify(g: &QuotientGraph, to_stdout: bool) -> Result<()> {
    let r = g.verify_structure()?;
    let mut lines = vec![format!(
        "{} vertices ({} terminal, {} stable), {} paired edges, h1 = {}, g(R) = {}, diameter {}, {} levels, {} two-cycles",
        r.vertices,
        g.count(Stability::Unstable),
        g.count(Stability::Stable),
        r.paired_edges,
        r.h1,
        r.g_r,
        r.diameter,
        g.levels,
        r.two_cycle_count
    )];
    for c in &r.checks {
        let tag = if c.passed { "ok  " } else { "FAIL" };
        lines.push(if c.detail.is_empty() { format!("{tag} {}", c.name) } else { format!("{tag} {} ({})", c.name, c.detail) });
    }
    lines.push(format!("info diam <= 2deg(r) - 4: {}", r.improved_bound_holds));
    let presentation = g.presentation().map(|p| p.len());
    match &presentation {
        Ok(n) => lines.push(format!("ok   presentation ({n} generators, relations verified)")),
        Err(e) => lines.push(format!("FAIL presentation ({e})")),
    }
    let text = lines.join("\n") + "\n";
    if to_stdout {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    if !r.passed() || presentation.is_err() {
        let failed: Vec<&str> = r.failures().map(|c| c.name).chain(presentation.is_err().then_some("presentation")).collect();
        return Err(VerificationFailed(failed.join(", ")).into());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let threads = match &cli.cmd {
        Cmd::Compute { job, .. }
        | Cmd::Reduce { job, .. }
        | Cmd::Present { job }
        | Cmd::Word { job, .. }
        | Cmd::Hom { job, .. }
        | Cmd::Verify { job }
        | Cmd::Export { job, .. } => job.threads,
    };
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    match cli.cmd {
        Cmd::Compute { job, out } => {
            let g = job.graph(true)?;
            render(&g, &out)?;
            if !job.no_verify {
                verify(&g, false)?;
            }
        }
        Cmd::Export { job, out } => render(&job.graph(false)?, &out)?,
        Cmd::Verify { job } => verify(&job.graph(false)?, true)?,
        Cmd::Reduce { job, vertex } => {
            let g = job.graph(false)?;
            let alg = g.alg();
            let v = Vertex::parse(&vertex, alg.fq()).with_context(|| format!("vertex {vertex:?}"))?;
            let (w, gamma) = g.reduce(&v)?;
            if act_elem(alg, &gamma, &w)? != v {
                return Err(quatgraph::Error::Internal("reduction self-check failed".into()).into());
            }
            println!("w = {}", w.display(alg.fq()));
            println!("gamma = {}", gamma.display(alg.fq()));
        }
        Cmd::Present { job } => {
            let g = job.graph(false)?;
            let p = g.presentation()?;
            let fq = g.alg().fq();
            println!("{} generators", p.len());
            for gen in p.generators() {
                println!("{} = {}", p.name(gen), p.element(gen)?.display(fq));
            }
            println!("relations");
            for r in p.relations() {
                println!("{r}");
            }
        }
        Cmd::Word { job, element } => {
            let g = job.graph(false)?;
            let gamma = QuatElem::parse(&element, g.alg().fq()).with_context(|| format!("element {element:?}"))?;
            let word = g.express_in_generators(&gamma)?;
            println!("{}", g.presentation()?.format_word(&word));
        }
        Cmd::Hom { job, source, target } => {
            let g = job.graph(false)?;
            let alg = g.alg();
            let fq = alg.fq();
            let v = Vertex::parse(&source, fq).with_context(|| format!("vertex {source:?}"))?;
            let w = Vertex::parse(&target, fq).with_context(|| format!("vertex {target:?}"))?;
            let h = hom(alg, &v, &w)?;
            println!("#Hom = {}", h.cardinality(fq.q()));
            for b in &h.basis {
                println!("{}", b.display(fq));
            }
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<VerificationFailed>().is_some() {
        return 1;
    }
    match e.downcast_ref::<quatgraph::Error>() {
        Some(quatgraph::Error::Internal(_)) => 70,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
