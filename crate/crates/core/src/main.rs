use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use origami_kz::cover::classify_cover;
use origami_kz::cylinder::{
    check_rank_one_configuration, direction_cylinders, homology_basis_cyclic, horizontal_cylinders,
};
use origami_kz::homology::{absolute_homology, check_unipotent, monodromy_generator, monodromy_horocycle};
use origami_kz::origami::{orbit_with_cap, DEFAULT_ORBIT_CAP};
use origami_kz::search::{search_degenerate, SearchSpec, Source};
use origami_kz::spectrum::{
    exact_sum_with_cap, forni_dimension, lyapunov_estimate_with, SpectrumConfig, DEFAULT_ZERO_TOL,
};
use origami_kz::{parse_origami, Error, Generator, Origami, Result, Stratum};

const SCHEMA: &str = "origami-kz/v1";
const CAP_ENV: &str = "ORIGAMI_ORBIT_CAP";

#[derive(Parser)]
#[command(
    name = "origami-kz",
    version,
    about = "Square-tiled surfaces: strata, orbits, cylinders, homology, Lyapunov spectra, torus covers"
)]
struct Cli {
    /// Emit one JSON document (JSON lines for `search`).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// File holding the surface (JSON or cycle notation); `-` for stdin.
    #[arg(short, long, conflicts_with = "origami")]
    input: Option<PathBuf>,
    /// The surface inline, e.g. "h=(1 2); v=(1 3)".
    #[arg(short, long)]
    origami: Option<String>,
}

impl Input {
    fn load(&self) -> Result<Origami> {
        let text = match (&self.input, &self.origami) {
            (_, Some(s)) => s.clone(),
            (Some(p), None) if p.as_os_str() == "-" => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            }
            (Some(p), None) => std::fs::read_to_string(p)?,
            (None, None) => return Err(Error::InvalidArgument("give --input or --origami".into())),
        };
        parse_origami(&text)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the surface in canonical form.
    Fmt {
        #[command(flatten)]
        input: Input,
        /// Keep the given labels instead of relabeling canonically.
        #[arg(long)]
        keep_labels: bool,
    },
    /// Zero orders and genus.
    Stratum {
        #[command(flatten)]
        input: Input,
    },
    /// SL2(Z)-orbit on canonical forms.
    Orbit {
        #[command(flatten)]
        input: Input,
        /// Largest orbit to explore (default from ORIGAMI_ORBIT_CAP or 10^6).
        #[arg(long)]
        cap: Option<usize>,
        /// List every member.
        #[arg(long)]
        members: bool,
    },
    /// Cylinder decomposition in a rational direction.
    Cyl {
        #[command(flatten)]
        input: Input,
        /// Direction `p,q` of slope p/q; horizontal is 0,1.
        #[arg(long, default_value = "0,1")]
        direction: String,
    },
    /// Action of a generator, or of the horizontal multi-twist, on homology.
    Monodromy {
        #[command(flatten)]
        input: Input,
        /// One of T, S, T-1, S-1.
        #[arg(long, default_value = "T", conflicts_with = "horocycle")]
        gen: String,
        /// The multi-twist in the basis adapted to the cylinder cycle.
        #[arg(long)]
        horocycle: bool,
    },
    /// Numerical Lyapunov exponents and the exact sum.
    Lyapunov {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
        zero_tol: f64,
        /// Matrix products between re-orthonormalizations.
        #[arg(long, default_value_t = 20)]
        cadence: usize,
        /// Write convergence samples as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Largest orbit to explore (default from ORIGAMI_ORBIT_CAP or 10^6).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Exact sum of the non-negative exponents.
    Sum {
        #[command(flatten)]
        input: Input,
        /// Largest orbit to explore (default from ORIGAMI_ORBIT_CAP or 10^6).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Period lattice, optimal torus cover and branch data.
    Cover {
        #[command(flatten)]
        input: Input,
    },
    /// Search a stratum for completely degenerate spectra.
    Search {
        /// Zero orders, e.g. 1,1,1,1.
        #[arg(long)]
        stratum: String,
        /// Degree range `a..b` (inclusive) or a single degree.
        #[arg(long)]
        degrees: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// JSON-lines database to append to and resume from.
        #[arg(long)]
        db: Option<PathBuf>,
        /// `rank-one` or `full`.
        #[arg(long, default_value = "rank-one")]
        source: String,
        /// Screening directions `p,q;p,q;..`.
        #[arg(long)]
        directions: Option<String>,
        /// Stop after the first degenerate orbit.
        #[arg(long)]
        first: bool,
        /// Largest orbit to explore (default from ORIGAMI_ORBIT_CAP or 10^6).
        #[arg(long)]
        cap: Option<usize>,
    },
}

fn orbit_cap(flag: Option<usize>) -> Result<usize> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v.parse().map_err(|_| Error::InvalidArgument(format!("{CAP_ENV} is not an integer: {v:?}"))),
        Err(_) => Ok(DEFAULT_ORBIT_CAP),
    }
}

fn parse_pair(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidArgument(format!("expected `p,q`, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_degrees(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("expected `a..b`, got {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((a.parse().map_err(|_| bad())?, b.trim_start_matches('=').parse().map_err(|_| bad())?)),
        None => {
            let n = s.parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn with_schema(mut v: Value) -> Value {
    v["schema"] = Value::String(SCHEMA.into());
    v
}

/// What a command produced: a JSON document plus its human rendering.
struct Output {
    json: Value,
    text: String,
}

fn run(command: Command, json_mode: bool) -> Result<Option<Output>> {
    let out = match command {
        Command::Fmt { input, keep_labels } => {
            let o = input.load()?;
            let o = if keep_labels { o } else { o.canonical_form() };
            Output {
                json: json!({"n": o.n(), "h": o.to_json_value()["h"], "v": o.to_json_value()["v"], "cycles": o.to_cycle_string()}),
                text: o.to_cycle_string(),
            }
        }
        Command::Stratum { input } => {
            let s = input.load()?.stratum();
            Output { json: json!({"kappa": s.kappa, "genus": s.genus}), text: format!("{s} genus {}", s.genus) }
        }
        Command::Orbit { input, cap, members } => {
            let o = input.load()?;
            let g = orbit_with_cap(&o, orbit_cap(cap)?)?;
            let mut v = json!({"size": g.len(), "key": g.min_member().to_cycle_string()});
            if members {
                v["members"] = g.nodes().iter().map(|m| Value::String(m.to_cycle_string())).collect();
            }
            Output { text: format!("orbit of size {} (least member {})", g.len(), g.min_member()), json: v }
        }
        Command::Cyl { input, direction } => {
            let o = input.load()?;
            let (p, q) = parse_pair(&direction)?;
            let d = if (p, q) == (0, 1) { horizontal_cylinders(&o) } else { direction_cylinders(&o, p, q)? };
            let verdict = check_rank_one_configuration(&d);
            let text = format!("widths {:?} heights {:?} cyclic {}", d.widths(), d.heights(), verdict.holds());
            Output {
                json: json!({
                    "direction": [p, q],
                    "widths": d.widths(),
                    "heights": d.heights(),
                    "adjacency": d.adjacency,
                    "rank_one": verdict.holds(),
                    "cycle": verdict.cycle,
                    "witness": verdict.witness,
                }),
                text,
            }
        }
        Command::Monodromy { input, gen, horocycle } => {
            let o = input.load()?;
            if horocycle {
                let model = absolute_homology(&o);
                let basis = homology_basis_cyclic(&model, &horizontal_cylinders(&o))?;
                let h = monodromy_horocycle(&model, &basis)?;
                let m = &h.matrix.entries;
                let omega = basis.gram(model.intersection_form());
                let symplectic = m.preserves_form(&omega);
                let unipotent = check_unipotent(m);
                let id = origami_kz::intmat::IntMatrix::identity(m.rows());
                let square_zero = m.sub(&id).mul(&m.sub(&id)).is_zero();
                Output {
                    text: format!(
                        "return time {} (canonical {}), rho {}, block form {}, unipotent {}\n{:?}",
                        h.return_time,
                        h.canonical_return_time,
                        h.rho,
                        h.has_block_form(),
                        unipotent,
                        m
                    ),
                    json: json!({
                        "basis": "cyclic",
                        "matrix": m.to_json(),
                        "return_time": h.return_time,
                        "canonical_return_time": h.canonical_return_time,
                        "twists": h.twists,
                        "rho": h.rho,
                        "m11": h.m11().to_string(),
                        "block_form": h.has_block_form(),
                        "unipotent": unipotent,
                        "square_zero": square_zero,
                        "symplectic": symplectic,
                    }),
                }
            } else {
                let g = Generator::parse(&gen)?;
                let (m, image) = monodromy_generator(&o, g);
                let src = absolute_homology(&o);
                let dst = absolute_homology(&image);
                // A maps the source form to the target form.
                let symplectic =
                    m.entries.mul(dst.intersection_form()).mul(&m.entries.transpose()) == *src.intersection_form();
                Output {
                    text: format!("{g} -> {image}\n{:?}", m.entries),
                    json: json!({
                        "generator": g.to_string(),
                        "basis": "chain",
                        "image": image.to_cycle_string(),
                        "matrix": m.entries.to_json(),
                        "symplectic": symplectic,
                        "determinant": m.entries.determinant().to_string(),
                    }),
                }
            }
        }
        Command::Lyapunov { input, steps, trials, seed, zero_tol, cadence, trace, cap } => {
            let o = input.load()?;
            let cap = orbit_cap(cap)?;
            let cfg = SpectrumConfig {
                steps,
                trials,
                seed,
                cadence,
                trace_points: if trace.is_some() { 100 } else { 0 },
                orbit_cap: cap,
            };
            let est = lyapunov_estimate_with(&o, &cfg)?;
            if let Some(path) = trace {
                std::fs::write(&path, est.trace_csv())?;
            }
            let exact = exact_sum_with_cap(&o, cap)?;
            let forni = forni_dimension(&est, zero_tol);
            Output {
                text: format!(
                    "lambdas {:?}\nstderr  {:?}\nexact sum {} (degenerate {}), forni dimension {}",
                    est.lambdas,
                    est.stderr,
                    exact.value,
                    exact.is_one(),
                    forni
                ),
                json: json!({
                    "lambdas": est.lambdas,
                    "stderr": est.stderr,
                    "full_spectrum": est.full_spectrum,
                    "clamped": est.clamped,
                    "steps": est.steps,
                    "trials": est.trials,
                    "seed": est.seed,
                    "zero_tol": zero_tol,
                    "estimated_sum": est.sum(),
                    "exact_sum": exact.value.to_string(),
                    "degenerate": exact.is_one(),
                    "forni_dimension": forni,
                }),
            }
        }
        Command::Sum { input, cap } => {
            let o = input.load()?;
            let s = exact_sum_with_cap(&o, orbit_cap(cap)?)?;
            Output {
                text: format!("{} (orbit size {}, degenerate {})", s.value, s.orbit_size, s.is_one()),
                json: json!({
                    "sum": s.value.to_string(),
                    "stratum_term": s.stratum_term.to_string(),
                    "cylinder_term": s.cylinder_term.to_string(),
                    "orbit_size": s.orbit_size,
                    "degenerate": s.is_one(),
                }),
            }
        }
        Command::Cover { input } => {
            let o = input.load()?;
            let r = classify_cover(&o)?;
            Output {
                text: format!(
                    "lattice {:?}, d_opt {}, branch points {:?}, case {}",
                    r.lattice.generators(),
                    r.d_opt,
                    r.branch_points,
                    r.case
                ),
                json: r.to_json(),
            }
        }
        Command::Search { stratum, degrees, jobs, db, source, directions, first, cap } => {
            let (a, b) = parse_degrees(&degrees)?;
            let mut spec = SearchSpec::new(Stratum::parse(&stratum)?, a, b);
            spec.jobs = jobs;
            spec.db = db;
            spec.source = Source::parse(&source)?;
            spec.orbit_cap = orbit_cap(cap)?;
            spec.stop_at_first = first;
            if let Some(d) = directions {
                spec.directions = d.split(';').map(parse_pair).collect::<Result<_>>()?;
            }
            let report = search_degenerate(&spec)?;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for d in &report.degrees {
                let line = json!({
                    "schema": SCHEMA,
                    "kind": "degree",
                    "stratum": report.stratum,
                    "degree": d.degree,
                    "complete": d.complete,
                    "counts": d.counts,
                    "orbits": d.orbits.len(),
                    "degenerate": d.degenerate().map(|o| json!({"key": o.key, "orbit_size": o.orbit_size, "sum": o.sum})).collect::<Vec<_>>(),
                    "errors": d.errors.len(),
                });
                if json_mode {
                    writeln!(lock, "{line}")?;
                } else {
                    writeln!(
                        lock,
                        "{} degree {}: {} orbits, {} degenerate{}",
                        report.stratum,
                        d.degree,
                        d.orbits.len(),
                        d.degenerate().count(),
                        if d.complete { "" } else { " (incomplete)" }
                    )?;
                }
            }
            return Ok(None);
        }
    };
    Ok(Some(out))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    let json_mode = cli.json;
    match run(cli.command, json_mode) {
        Ok(Some(out)) => {
            if json_mode {
                println!("{}", with_schema(out.json));
            } else {
                println!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            if json_mode {
                println!("{}", json!({"schema": SCHEMA, "error": {"code": e.code(), "message": e.to_string()}}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}
