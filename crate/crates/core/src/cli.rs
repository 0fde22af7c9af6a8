//! Command-line front end. [`run`] parses arguments, performs one
//! subcommand and returns the rendered output with an exit status:
//! 0 success, 1 domain failure (validation or a failed check), 2 usage,
//! parse or I/O failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::algebra::{BasisEntry, DualPoint, GradedLieAlgebra, Vector};
use crate::analysis::{
    convolve, equivariance_sides, homogenize, Frame, GridFunction, HomogenizeConfig, RealAlgebra,
};
use crate::error::Error;
use crate::free::{free_cover, minimal_generators, HallBasis};
use crate::group::bch;
use crate::rational::{format_rational, parse_rational, parse_rational_list};
use crate::report::*;
use crate::spec_format::{algebra_to_spec, load_spec, Spec};
use crate::strata::family::stratify_family;
use crate::strata::{
    classify, enumerate_strata, jump_indices, orbit_dimension, orbit_sample, probe_points, radical,
    random_points, SamplingConfig,
};

#[derive(Debug, Parser)]
#[command(name = "strata-kit", version, about = "Graded nilpotent Lie algebras: strata, covers, BCH and symbol numerics")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Structured,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    /// Bound on numerators and denominators of random rationals.
    #[arg(long, global = true, default_value_t = 10)]
    pub height: u32,
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check antisymmetry, Jacobi and grading of a spec file.
    Validate { spec: PathBuf },
    /// Enumerate jump-index strata from seeded samples.
    Stratify {
        spec: PathBuf,
        /// Treat the spec file as a one-parameter family.
        #[arg(long)]
        family: bool,
        /// Parameter values, e.g. "0,1/2,1" (default: the domain endpoints).
        #[arg(long, value_delimiter = ',')]
        t_values: Vec<String>,
    },
    /// Stratum, signature and orbit dimension of a point (user coordinates).
    Classify { spec: PathBuf, xi: String },
    /// Radical dimensions along the flag and the orbit dimension.
    OrbitDim { spec: PathBuf, xi: String },
    /// Seeded points on the coadjoint orbit of `xi`.
    OrbitSample { spec: PathBuf, xi: String },
    /// Hall basis of a free graded nilpotent Lie algebra.
    Free {
        /// Generator weights.
        #[arg(long, value_delimiter = ',', default_value = "1,1")]
        weights: Vec<u32>,
        #[arg(long)]
        depth: u32,
        /// Generator labels (default X, Y, Z, W, V, then G6, G7, ...).
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
        /// Also write the algebra as a spec file.
        #[arg(long)]
        write_spec: Option<PathBuf>,
    },
    /// Check the transfer formula for the free cover of an algebra.
    CoverCheck {
        spec: PathBuf,
        /// Truncation depth of the free algebra (default: the target depth).
        #[arg(long)]
        free_depth: Option<u32>,
        /// Generator labels (default: a minimal generating set).
        #[arg(long, value_delimiter = ',')]
        generators: Vec<String>,
    },
    /// BCH product of two algebra elements (user coordinates).
    Bch { spec: PathBuf, a: String, b: String },
    /// Fourier equivariance under dilations on a centered Gaussian.
    FourierCheck {
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.5,2,3")]
        lambdas: Vec<f64>,
        /// Samples per axis of the primal grid.
        #[arg(long, default_value_t = 32)]
        points: usize,
        /// Half-width of the primal grid.
        #[arg(long, default_value_t = 7.0)]
        range: f64,
    },
    /// Group convolution of two primal grid dumps.
    Convolve {
        spec: PathBuf,
        f: PathBuf,
        g: PathBuf,
        /// Where to write the result (`.txt` for the text form).
        #[arg(long)]
        grid_out: Option<PathBuf>,
    },
    /// Degree-m homogenization of a dual grid dump, evaluated on its grid.
    Homogenize {
        spec: PathBuf,
        grid: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        m: f64,
        /// Largest |F| tolerated near the origin.
        #[arg(long, default_value_t = 1e-4)]
        origin_bound: f64,
        #[arg(long)]
        grid_out: Option<PathBuf>,
    },
}

/// Rendered result of one invocation.
#[derive(Debug)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Io(_) | Error::InvalidArgument(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Caps the global worker pool from `STRATA_KIT_THREADS`.
pub fn configure_threads() {
    if let Some(n) = std::env::var("STRATA_KIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // Fails only if the pool already exists, which leaves it as is.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Invocation { code, stdout: text, stderr: String::new() }
            } else {
                Invocation { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((report, table, code)) => {
            let body = match cli.common.format {
                Format::Table => table,
                Format::Structured => report.to_json(),
            };
            match &cli.common.output {
                Some(path) => match fs::write(path, &body) {
                    Ok(()) => Invocation { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Invocation {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("error: {}: {e}\n", path.display()),
                    },
                },
                None => Invocation { code, stdout: body, stderr: String::new() },
            }
        }
        Err(f) => Invocation { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Spec, Failure> {
    Ok(load_spec(&read_text(path)?)?)
}

fn load_algebra(path: &Path) -> Result<GradedLieAlgebra, Failure> {
    match load(path)? {
        Spec::Algebra(a) => Ok(a),
        Spec::Family(_) => Err(usage(format!(
            "{} describes a family; use `stratify --family`",
            path.display()
        ))),
    }
}

fn parse_point(alg: &GradedLieAlgebra, text: &str) -> Result<Vec<crate::Q>, Failure> {
    let user = parse_rational_list(text)?;
    alg.coords_from_user(&user).map_err(|e| usage(e.to_string()))
}

fn read_grid(path: &Path) -> Result<GridFunction, Failure> {
    let bytes = fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let parsed = if bytes.starts_with(b"SKGRID01") {
        GridFunction::read_binary(&mut BufReader::new(&bytes[..]))
    } else {
        let mut text = String::new();
        (&bytes[..]).read_to_string(&mut text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        GridFunction::read_text(&mut BufReader::new(text.as_bytes()))
    };
    parsed.map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_grid(grid: &GridFunction, path: &Path) -> Result<(), Failure> {
    let mut buf = Vec::new();
    let text = path.extension().is_some_and(|e| e == "txt");
    let res = if text { grid.write_text(&mut buf) } else { grid.write_binary(&mut buf) };
    res.map_err(|e| usage(e.to_string()))?;
    fs::write(path, buf).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn check_grid_weights(alg: &GradedLieAlgebra, grid: &GridFunction) -> Result<(), Failure> {
    if grid.weights() != alg.weights() {
        return Err(Error::GridMismatch(format!(
            "grid weights {:?} differ from the algebra's flag weights {:?}",
            grid.weights(),
            alg.weights()
        ))
        .into());
    }
    Ok(())
}

fn summary(grid: &GridFunction, output: Option<&PathBuf>) -> GridSummary {
    let z: Complex64 = grid.integral();
    GridSummary {
        output: output.map(|p| p.display().to_string()),
        half_ranges: grid.half_ranges().to_vec(),
        counts: grid.counts().to_vec(),
        max_abs: grid.max_abs(),
        integral: [z.re, z.im],
    }
}

fn join(xs: &[String]) -> String {
    xs.join(",")
}

type Executed = (Report, String, i32);

fn execute(cli: &Cli) -> Result<Executed, Failure> {
    let c = &cli.common;
    let sampling = SamplingConfig { samples: c.samples, seed: c.seed, height: c.height };
    let mut options = BTreeMap::new();
    let mut inputs: Vec<String> = Vec::new();
    let path_str = |p: &PathBuf| p.display().to_string();
    let mut table = String::new();
    let mut code = 0;

    let (name, outcome) = match &cli.command {
        Command::Validate { spec } => {
            inputs.push(path_str(spec));
            let text = read_text(spec)?;
            let report = match load_spec(&text) {
                Ok(Spec::Algebra(alg)) => ValidateReport {
                    valid: true,
                    algebra: Some(AlgebraSummary::new(&alg)),
                    family: None,
                    failure: None,
                },
                Ok(Spec::Family(fam)) => {
                    let alg = fam.evaluate(&fam.domain().1)?;
                    ValidateReport {
                        valid: true,
                        algebra: Some(AlgebraSummary::new(&alg)),
                        family: Some(FamilySummary {
                            parameter: fam.parameter().to_string(),
                            domain: [format_rational(&fam.domain().0), format_rational(&fam.domain().1)],
                        }),
                        failure: None,
                    }
                }
                Err(Error::Validation(v)) => ValidateReport {
                    valid: false,
                    algebra: None,
                    family: None,
                    failure: Some(ValidationFailure::from(&*v)),
                },
                Err(e) => return Err(e.into()),
            };
            match (&report.algebra, &report.failure) {
                (Some(a), _) => {
                    let _ = writeln!(table, "{}: valid", spec.display());
                    let _ = writeln!(
                        table,
                        "  {} (dim {}, depth {}, homogeneous dimension {})",
                        a.name, a.dim, a.depth, a.homogeneous_dimension
                    );
                    if let Some(f) = &report.family {
                        let _ = writeln!(table, "  family in {} on [{}, {}]", f.parameter, f.domain[0], f.domain[1]);
                    }
                }
                (None, Some(f)) => {
                    code = 1;
                    let [a, b, cc] = &f.witness;
                    let _ = writeln!(table, "{}: invalid", spec.display());
                    let _ = write!(table, "  {} violated, witness ({a}, {b}, {cc}), residual {}", f.identity, f.residual);
                    if let Some(comp) = &f.component {
                        let _ = write!(table, " along {comp}");
                    }
                    table.push('\n');
                }
                (None, None) => unreachable!("a report is either valid or carries a failure"),
            }
            ("validate", Outcome::Validate(report))
        }

        Command::Stratify { spec, family, t_values } => {
            inputs.push(path_str(spec));
            if !t_values.is_empty() {
                options.insert("t-values".into(), t_values.join(","));
            }
            match load(spec)? {
                Spec::Algebra(alg) => {
                    if *family {
                        return Err(usage(format!("{} has no [family] section", spec.display())));
                    }
                    let table_ = enumerate_strata(&alg, &sampling);
                    let total = probe_points(alg.dim()).len() + sampling.samples;
                    let r = TableReport::new(&alg, &table_, total);
                    render_table(&mut table, &r);
                    ("stratify", Outcome::Stratify(r))
                }
                Spec::Family(fam) => {
                    let ts: Vec<crate::Q> = if t_values.is_empty() {
                        vec![fam.domain().0.clone(), fam.domain().1.clone()]
                    } else {
                        t_values.iter().map(|t| parse_rational(t)).collect::<Result<_, _>>()?
                    };
                    let strat = stratify_family(&fam, &ts, &sampling)?;
                    let algs = ts.iter().map(|t| fam.evaluate(t)).collect::<Result<Vec<_>, _>>()?;
                    let r = FamilyReport::new(fam.name(), fam.parameter(), &algs, &strat);
                    render_family(&mut table, &r);
                    ("stratify", Outcome::StratifyFamily(r))
                }
            }
        }

        Command::Classify { spec, xi } => {
            inputs.extend([path_str(spec), xi.clone()]);
            let alg = load_algebra(spec)?;
            let point = DualPoint(parse_point(&alg, xi)?);
            let strata = enumerate_strata(&alg, &sampling);
            let cl = classify(&alg, &point, &strata)?;
            let r = ClassifyReport {
                xi: user_point(&alg, &point),
                flag: alg.labels().to_vec(),
                signature: cl.signature.clone(),
                stratum: cl.stratum,
                origin: cl.origin,
                orbit_dimension: cl.orbit_dimension,
                strata_in_table: strata.len(),
            };
            let where_ = match r.stratum {
                Some(s) => format!("stratum {s}"),
                None => "origin".to_string(),
            };
            let _ = writeln!(
                table,
                "xi = {}: {where_}, signature {}, orbit dim {}",
                join(&r.xi),
                r.signature,
                r.orbit_dimension
            );
            ("classify", Outcome::Classify(r))
        }

        Command::OrbitDim { spec, xi } => {
            inputs.extend([path_str(spec), xi.clone()]);
            let alg = load_algebra(spec)?;
            let point = DualPoint(parse_point(&alg, xi)?);
            let radical_dims = (1..=alg.dim())
                .map(|k| radical(&alg, &point, k).map(|r| r.len()))
                .collect::<Result<Vec<_>, _>>()?;
            let r = OrbitDimReport {
                xi: user_point(&alg, &point),
                flag: alg.labels().to_vec(),
                signature: jump_indices(&alg, &point)?,
                orbit_dimension: orbit_dimension(&alg, &point)?,
                radical_dims,
            };
            let _ = writeln!(table, "xi = {}", join(&r.xi));
            let _ = writeln!(table, "flag: {}", r.flag.join(", "));
            for (k, d) in r.radical_dims.iter().enumerate() {
                let _ = writeln!(table, "  dim g_{}(xi) = {d}", k + 1);
            }
            let _ = writeln!(table, "signature {}, orbit dim {}", r.signature, r.orbit_dimension);
            ("orbit-dim", Outcome::OrbitDim(r))
        }

        Command::OrbitSample { spec, xi } => {
            inputs.extend([path_str(spec), xi.clone()]);
            let alg = load_algebra(spec)?;
            let point = DualPoint(parse_point(&alg, xi)?);
            let signature = jump_indices(&alg, &point)?;
            let pts = orbit_sample(&alg, &point, c.samples, c.seed, c.height)?;
            let mut mismatches = 0;
            for p in &pts {
                if jump_indices(&alg, p)? != signature {
                    mismatches += 1;
                }
            }
            let r = OrbitSampleReport {
                xi: user_point(&alg, &point),
                signature,
                points: pts.iter().map(|p| user_point(&alg, p)).collect(),
                mismatches,
            };
            if mismatches > 0 {
                code = 1;
            }
            let _ = writeln!(table, "xi = {}, signature {}", join(&r.xi), r.signature);
            for p in &r.points {
                let _ = writeln!(table, "  {}", join(p));
            }
            let _ = writeln!(table, "{mismatches} signature mismatches / {}", r.points.len());
            ("orbit-sample", Outcome::OrbitSample(r))
        }

        Command::Free { weights, depth, labels, write_spec } => {
            options.insert("weights".into(), weights.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
            options.insert("depth".into(), depth.to_string());
            if !labels.is_empty() && labels.len() != weights.len() {
                return Err(usage("need one label per generator weight"));
            }
            const NAMES: [&str; 5] = ["X", "Y", "Z", "W", "V"];
            let gens: Vec<BasisEntry> = weights
                .iter()
                .enumerate()
                .map(|(i, &w)| {
                    let label = match labels.get(i) {
                        Some(l) => l.clone(),
                        None if i < NAMES.len() => NAMES[i].to_string(),
                        None => format!("G{}", i + 1),
                    };
                    BasisEntry::new(label, w)
                })
                .collect();
            let hall = HallBasis::new(&gens, *depth).map_err(|e| usage(e.to_string()))?;
            if let Some(path) = write_spec {
                options.insert("write-spec".into(), path_str(path));
                let alg = hall.to_algebra()?;
                fs::write(path, algebra_to_spec(&alg)).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            let r = FreeReport {
                generators: gens,
                depth: *depth,
                dim: hall.dim(),
                weight_counts: hall.weight_counts().into_iter().collect(),
                labels: hall.labels().to_vec(),
            };
            let _ = writeln!(table, "free Lie algebra truncated at depth {}: dim {}", r.depth, r.dim);
            for (w, n) in &r.weight_counts {
                let _ = writeln!(table, "  weight {w}: {n}");
            }
            let _ = writeln!(table, "basis: {}", r.labels.join(", "));
            ("free", Outcome::Free(r))
        }

        Command::CoverCheck { spec, free_depth, generators } => {
            inputs.push(path_str(spec));
            let alg = load_algebra(spec)?;
            let gens: Vec<usize> = if generators.is_empty() {
                minimal_generators(&alg)
            } else {
                options.insert("generators".into(), generators.join(","));
                generators
                    .iter()
                    .map(|g| alg.index_of(g).ok_or_else(|| usage(format!("unknown generator label `{g}`"))))
                    .collect::<Result<_, _>>()?
            };
            let depth = free_depth.unwrap_or(alg.depth());
            options.insert("free-depth".into(), depth.to_string());
            let (hall, surj) = free_cover(&alg, &gens, Some(depth))?;
            let points = random_points(alg.dim(), &sampling);
            let cover = crate::free::transfer_check_batch(&surj, &points)?;
            let r = CoverCheckReport {
                target: AlgebraSummary::new(&alg),
                generators: gens.iter().map(|&i| alg.labels()[i].clone()).collect(),
                free_depth: depth,
                source_dim: hall.dim(),
                u: surj.u().to_vec(),
                kernel_dim: surj.kernel().len(),
                cover,
            };
            if r.cover.violations > 0 {
                code = 1;
            }
            let _ = writeln!(
                table,
                "free cover on {} (depth {}, dim {}) -> {} (dim {})",
                r.generators.join(", "),
                r.free_depth,
                r.source_dim,
                r.target.name,
                r.target.dim
            );
            let _ = writeln!(
                table,
                "u = {:?}, kernel dim {}",
                r.u, r.kernel_dim
            );
            let _ = writeln!(table, "{} violations / {}", r.cover.violations, r.cover.points);
            let _ = writeln!(table, "{} vacuous levels", r.cover.vacuous_levels);
            if !r.cover.non_injective.is_empty() {
                let _ = writeln!(table, "{} source signatures met by several target strata", r.cover.non_injective.len());
            }
            for f in r.cover.failures.iter().take(5) {
                let _ = writeln!(
                    table,
                    "  fails at xi = {}: source {}, target {}",
                    join(&f.xi),
                    f.source_signature,
                    f.target_signature
                );
            }
            ("cover-check", Outcome::CoverCheck(r))
        }

        Command::Bch { spec, a, b } => {
            inputs.extend([path_str(spec), a.clone(), b.clone()]);
            let alg = load_algebra(spec)?;
            let (x, y) = (parse_point(&alg, a)?, parse_point(&alg, b)?);
            let p = bch(&alg, &Vector(x.clone()), &Vector(y.clone()))?;
            let r = BchReport::new(&alg, &x, &y, &p.0);
            let _ = writeln!(table, "{}", join(&r.product));
            ("bch", Outcome::Bch(r))
        }

        Command::FourierCheck { spec, lambdas, points, range } => {
            inputs.push(path_str(spec));
            options.insert("lambdas".into(), lambdas.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
            options.insert("points".into(), points.to_string());
            options.insert("range".into(), range.to_string());
            let alg = load_algebra(spec)?;
            let d = alg.dim();
            let w = alg.weights();
            let f = |x: &[f64]| Complex64::new((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0);
            if *points < 2 || !(*range > 0.0) || lambdas.iter().any(|l| !(*l > 0.0)) {
                return Err(usage("need points >= 2, range > 0 and positive lambdas"));
            }
            let big = lambdas.iter().cloned().fold(1.0, f64::max);
            let dual: Vec<f64> = w.iter().map(|&q| 6.0 / big.powi(q as i32)).collect();
            let (primal, counts) = (vec![*range; d], vec![*points; d]);
            let mut cases = Vec::new();
            for &lambda in lambdas {
                // The dilated Gaussian has widths lambda^q; sample it on its own grid.
                let dilated: Vec<f64> = w.iter().map(|&q| (range + 1.0) * lambda.powi(q as i32)).collect();
                let (lhs, rhs) = equivariance_sides(
                    f,
                    w,
                    lambda,
                    (&primal, &counts),
                    (&dilated, &counts),
                    (&dual, &vec![9; d]),
                )?;
                cases.push(NumericCase { lambda, relative_error: lhs.relative_error(&rhs)? });
            }
            let passed = cases.iter().all(|k| k.relative_error <= c.tol);
            if !passed {
                code = 1;
            }
            let _ = writeln!(table, "Fourier equivariance on a Gaussian, {points} points/axis, tol {:e}", c.tol);
            for k in &cases {
                let _ = writeln!(table, "  lambda = {}: relative error {:.3e}", k.lambda, k.relative_error);
            }
            let _ = writeln!(table, "{}", if passed { "pass" } else { "FAIL" });
            let r = NumericCheck {
                description: "F(delta_lambda* f) = (t delta_lambda)* F(f)".into(),
                cases,
                tol: c.tol,
                passed,
            };
            ("fourier-check", Outcome::FourierCheck(r))
        }

        Command::Convolve { spec, f, g, grid_out } => {
            inputs.extend([path_str(spec), path_str(f), path_str(g)]);
            let alg = load_algebra(spec)?;
            let (fg, gg) = (read_grid(f)?, read_grid(g)?);
            check_grid_weights(&alg, &fg)?;
            let out = convolve(&RealAlgebra::new(&alg), &fg, &gg)?;
            if let Some(p) = grid_out {
                write_grid(&out, p)?;
            }
            let r = summary(&out, grid_out.as_ref());
            render_grid(&mut table, "convolution", &r);
            ("convolve", Outcome::Convolve(r))
        }

        Command::Homogenize { spec, grid, m, origin_bound, grid_out } => {
            inputs.extend([path_str(spec), path_str(grid)]);
            options.insert("m".into(), m.to_string());
            options.insert("origin-bound".into(), origin_bound.to_string());
            let alg = load_algebra(spec)?;
            let fhat = read_grid(grid)?;
            check_grid_weights(&alg, &fhat)?;
            fhat.require_frame(Frame::Dual)?;
            let cfg = HomogenizeConfig { origin_bound: *origin_bound, ..HomogenizeConfig::default() };
            let v = homogenize(&fhat, alg.weights(), *m, cfg)?;
            let out = v.on_grid(&fhat)?;
            if let Some(p) = grid_out {
                write_grid(&out, p)?;
            }
            let r = summary(&out, grid_out.as_ref());
            render_grid(&mut table, &format!("homogenization of degree {m}"), &r);
            ("homogenize", Outcome::Homogenize(r))
        }
    };

    let config = RunConfig {
        command: name.to_string(),
        inputs,
        seed: c.seed,
        samples: c.samples,
        height: c.height,
        tol: c.tol,
        options,
    };
    Ok((Report::new(config, outcome), table, code))
}

fn render_records(out: &mut String, strata: &[StratumRecord]) {
    let sigs: Vec<String> = strata.iter().map(|s| s.signature.to_string()).collect();
    let w = sigs.iter().map(|s| s.chars().count()).max().unwrap_or(9).max(9);
    let _ = writeln!(out, "  {:>3}  {:<w$}  {:>9}  {:>7}  representative", "#", "signature", "orbit dim", "samples");
    for (s, sig) in strata.iter().zip(&sigs) {
        let pad = w - sig.chars().count();
        let _ = writeln!(
            out,
            "  {:>3}  {sig}{:pad$}  {:>9}  {:>7}  {}",
            s.index,
            "",
            s.orbit_dimension,
            s.samples,
            join(&s.representative)
        );
    }
}

fn render_table(out: &mut String, r: &TableReport) {
    let a = &r.algebra;
    let _ = writeln!(
        out,
        "{} (dim {}, depth {}), flag order {}",
        a.name,
        a.dim,
        a.depth,
        a.flag.join(", ")
    );
    let _ = writeln!(
        out,
        "{} strata from {} points ({} at the origin)",
        r.strata.len(),
        r.total_points,
        r.origin_points
    );
    render_records(out, &r.strata);
}

fn render_family(out: &mut String, r: &FamilyReport) {
    let _ = writeln!(out, "family {} in {}, flag order {}", r.name, r.parameter, r.flag.join(", "));
    for f in &r.fibers {
        let _ = writeln!(out, "{} = {}: {} strata", r.parameter, f.t, f.strata.len());
        render_records(out, &f.strata);
    }
    let _ = writeln!(out, "strata across fibers (by cover signature):");
    for (i, m) in r.merged.iter().enumerate() {
        let cells: Vec<String> = m
            .fibers
            .iter()
            .map(|x| x.map_or("-".to_string(), |s| s.to_string()))
            .collect();
        let _ = write!(out, "  {:>3}  {}  [{}]", i + 1, m.cover_signature, cells.join(" "));
        if !m.empty_at.is_empty() {
            let _ = write!(out, "  empty at {} = {}", r.parameter, m.empty_at.join(", "));
        }
        out.push('\n');
    }
}

fn render_grid(out: &mut String, what: &str, r: &GridSummary) {
    let _ = writeln!(out, "{what} on counts {:?}, half-ranges {:?}", r.counts, r.half_ranges);
    let _ = writeln!(out, "  max |.| = {:.6e}, integral = {:.6e} + {:.6e}i", r.max_abs, r.integral[0], r.integral[1]);
    if let Some(p) = &r.output {
        let _ = writeln!(out, "  written to {p}");
    }
}
