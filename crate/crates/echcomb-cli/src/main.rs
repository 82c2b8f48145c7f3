mod render;

use std::fmt;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand};
use echcomb::chain_map::{canonical_companion, verify_chain_map};
use echcomb::checks::{self, Config, CRITERIA};
use echcomb::complex::{Context, HomologyClass, OrbitSet};
use echcomb::homology::{betti_report, graded_ranks, BitMatrix};
use echcomb::lattice::{fmt_rat, parse_rat, Rat};
use echcomb::profile::{Geometry, Profile};

#[derive(Parser, Debug)]
#[command(name = "echcomb", version, about = "Combinatorial ECH chain complexes of toric contact forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Profile document (JSON).
    #[arg(long, global = true)]
    profile: Option<PathBuf>,
    /// Homology class: `a,b` for interval and circle profiles, `r` otherwise.
    #[arg(long, global = true)]
    class: Option<String>,
    /// Action bound `p/q`; defaults to the profile's L.
    #[arg(long, global = true)]
    bound: Option<String>,
    /// Write artifacts into this directory instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the profile's structural invariants.
    Validate,
    /// List generators with action, grading offset and label.
    Generators,
    /// Boundary matrix of one class in `rows cols` / `r c` text form.
    Matrix,
    /// Graded homology ranks, computed directly or from a saved matrix.
    Homology {
        /// Matrix file written by the `matrix` subcommand.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Check that the boundary squares to zero.
    Dsq,
    /// Verify the lens-to-T³ chain map on the canonical companion profile.
    PhiCheck,
    /// SVG diagram of the region between two orbit sets.
    Render {
        /// Orbit set on the positive side, e.g. `h0 e3`.
        #[arg(long, default_value = "")]
        alpha: String,
        /// Orbit set on the negative side.
        #[arg(long, default_value = "")]
        beta: String,
        /// Value of d₀ for S¹×S² profiles.
        #[arg(long, default_value_t = 0)]
        d: i64,
    },
    /// Run the acceptance suites.
    Selftest {
        /// Comma-separated criterion numbers; all by default.
        #[arg(long)]
        only: Option<String>,
    },
}

/// Failure of an internal invariant; exits with status 2.
#[derive(Debug)]
struct Invariant(String);

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invariant {}

fn invariant<E: fmt::Display>(e: E) -> anyhow::Error {
    Invariant(e.to_string()).into()
}

struct Run {
    ctx: Context,
    bound: Rat,
    out: Option<PathBuf>,
}

impl Run {
    fn load(cli: &Cli) -> Result<Run> {
        let path = cli.profile.as_ref().ok_or_else(|| anyhow!("--profile is required"))?;
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let profile = Profile::from_json(&text)?;
        let diags = profile.validate();
        if !diags.is_empty() {
            bail!("invalid profile:\n  {}", diags.join("\n  "));
        }
        let bound = match &cli.bound {
            Some(b) => parse_rat(b).ok_or_else(|| anyhow!("--bound: cannot parse {b:?}"))?,
            None => profile.bound,
        };
        if bound > profile.bound {
            bail!("--bound {} exceeds the profile's L = {}", fmt_rat(&bound), fmt_rat(&profile.bound));
        }
        let ctx = Context::new(profile)?;
        Ok(Run { ctx, bound, out: cli.out.clone() })
    }

    fn class(&self, s: &Option<String>) -> Result<Option<HomologyClass>> {
        s.as_deref()
            .map(|c| self.ctx.parse_class(c).ok_or_else(|| anyhow!("--class: cannot parse {c:?} for this geometry")))
            .transpose()
    }

    /// Requested class, or every class with generators below the bound.
    fn classes(&self, s: &Option<String>) -> Result<Vec<(HomologyClass, Vec<OrbitSet>)>> {
        Ok(match self.class(s)? {
            Some(c) => vec![(c, self.ctx.generators(c, self.bound))],
            None => self.ctx.generators_by_class(self.bound).into_iter().collect(),
        })
    }

    fn emit(&self, name: &str, body: &str) -> Result<()> {
        match &self.out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let p = dir.join(name);
                fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?;
                println!("wrote {}", p.display());
            }
            None => print!("{body}"),
        }
        Ok(())
    }
}

fn file_tag(c: &HomologyClass) -> String {
    c.to_string().replace(',', "_").replace('-', "m")
}

fn generator_table(run: &Run, cls: HomologyClass, gens: &[OrbitSet]) -> Result<String> {
    let g = run.ctx.grading(gens, cls).map_err(invariant)?;
    let mut s = format!("# class {cls}, base {}, modulus {}\n", gens.get(g.base).map_or("-".into(), |b| b.label()), g.modulus);
    s += "index\tlabel\taction\tgrading\n";
    for (i, (gen, off)) in gens.iter().zip(&g.offsets).enumerate() {
        let a = run.ctx.action(gen).map_err(invariant)?;
        s += &format!("{i}\t{gen}\t{}\t{off}\n", fmt_rat(&a));
    }
    Ok(s)
}

fn homology_text(run: &Run, cls: HomologyClass, gens: &[OrbitSet], m: &BitMatrix) -> Result<String> {
    if let Some((r, c)) = m.d_squared() {
        return Err(invariant(format!("class {cls}: d² ≠ 0 at ({}, {})", gens[c], gens[r])));
    }
    let g = run.ctx.grading(gens, cls).map_err(invariant)?;
    let mut s = String::new();
    if let Some(b) = gens.get(g.base) {
        s += &format!("# class {cls}: base generator {b}, grading modulus {}\n", g.modulus);
    }
    s += &betti_report(cls, &graded_ranks(m, &g.offsets));
    Ok(s)
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Validate => {
            let run = Run::load(cli)?;
            let n = run.ctx.families.len();
            println!("valid: {} profile, {n} families, L = {}, N = {}", geometry_name(run.ctx.geometry()), fmt_rat(&run.ctx.profile.bound), run.ctx.profile.cutoff());
        }
        Command::Generators => {
            let run = Run::load(cli)?;
            let mut s = String::new();
            for (cls, gens) in run.classes(&cli.class)? {
                s += &generator_table(&run, cls, &gens)?;
            }
            run.emit("generators.tsv", &s)?;
        }
        Command::Matrix => {
            let run = Run::load(cli)?;
            let cls = run.class(&cli.class)?.unwrap_or_else(|| run.ctx.zero_class());
            let gens = run.ctx.generators(cls, run.bound);
            let m = run.ctx.boundary_matrix(&gens).map_err(invariant)?;
            run.emit(&format!("matrix-{}.txt", file_tag(&cls)), &m.to_text())?;
            if run.out.is_some() {
                run.emit(&format!("generators-{}.tsv", file_tag(&cls)), &generator_table(&run, cls, &gens)?)?;
            }
        }
        Command::Homology { matrix } => {
            let run = Run::load(cli)?;
            let mut s = String::new();
            match matrix {
                Some(path) => {
                    let cls = run.class(&cli.class)?.unwrap_or_else(|| run.ctx.zero_class());
                    let gens = run.ctx.generators(cls, run.bound);
                    let m = read_matrix(path)?;
                    if m.rows != gens.len() || m.cols != gens.len() {
                        bail!("{}: {}×{} matrix but class {cls} has {} generators", path.display(), m.rows, m.cols, gens.len());
                    }
                    s += &homology_text(&run, cls, &gens, &m)?;
                }
                None => {
                    for (cls, gens) in run.classes(&cli.class)? {
                        let m = run.ctx.boundary_matrix(&gens).map_err(invariant)?;
                        s += &homology_text(&run, cls, &gens, &m)?;
                    }
                }
            }
            run.emit("homology.tsv", &s)?;
        }
        Command::Dsq => {
            let run = Run::load(cli)?;
            for (cls, gens) in run.classes(&cli.class)? {
                let m = run.ctx.boundary_matrix(&gens).map_err(invariant)?;
                if let Some((r, c)) = m.d_squared() {
                    return Err(invariant(format!("class {cls}: d²≠0, witness {} → {}", gens[c], gens[r])));
                }
                println!("class {cls}: {} generators, {} entries, d²=0: OK", gens.len(), m.entries.len());
            }
        }
        Command::PhiCheck => {
            let run = Run::load(cli)?;
            if !matches!(run.ctx.geometry(), Geometry::Lens | Geometry::S1s2) {
                bail!("phi-check needs a lens profile");
            }
            let cp = canonical_companion(&run.ctx.profile)?;
            let rep = verify_chain_map(&cp, run.bound).map_err(invariant)?;
            run.emit("phi-check.tsv", &rep.to_text())?;
            if let Some(f) = rep.first_failure() {
                return Err(invariant(format!("chain map fails at {f:?}")));
            }
            println!("chain map: OK ({} generators)", rep.rows.len());
        }
        Command::Render { alpha, beta, d } => {
            let run = Run::load(cli)?;
            let parse = |s: &str, what: &str| s.parse::<OrbitSet>().map_err(|e| anyhow!("--{what}: {e}"));
            let (a, b) = (parse(alpha, "alpha")?, parse(beta, "beta")?);
            let d = (run.ctx.geometry() == Geometry::S1s2).then_some(*d);
            let region = run.ctx.associate_region(&a, &b, d)?.region;
            run.emit("region.svg", &render::render(&region))?;
        }
        Command::Selftest { only } => {
            let cfg = Config { seed: cli.seed.unwrap_or(Config::default().seed), ..Config::default() };
            let ids: Vec<usize> = match only {
                Some(list) => list
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().ok().filter(|i| (1..=CRITERIA.len()).contains(i)))
                    .collect::<Option<_>>()
                    .ok_or_else(|| anyhow!("--only: expected numbers between 1 and {}", CRITERIA.len()))?,
                None => (1..=CRITERIA.len()).collect(),
            };
            println!("selftest seed {}", cfg.seed);
            let outcomes: Vec<_> = ids.iter().map(|&i| checks::run(i, &cfg)).collect();
            for o in &outcomes {
                println!("{}", o.line());
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            println!("{passed}/{} suites passed", outcomes.len());
            if passed < outcomes.len() {
                return Err(invariant("selftest failures"));
            }
        }
    }
    Ok(())
}

fn read_matrix(path: &FsPath) -> Result<BitMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    BitMatrix::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn geometry_name(g: Geometry) -> &'static str {
    match g {
        Geometry::Interval => "interval",
        Geometry::Circle => "circle",
        Geometry::Lens => "lens",
        Geometry::S1s2 => "s1s2",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Invariant>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
