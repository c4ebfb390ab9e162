//! `tropic`: exact tropical geometry from the command line.
//!
//! Subcommands compose the library layers: polyhedral checks, hypersurface
//! extraction with SVG output, Novikov realization with residual audits, the
//! lift cohomology pipeline, the gapped algebra toolbox, well-spacedness, and
//! Floer-support queries.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tropic_cli::docs::{
    read_json, write_json, ComplexDocument, CurveDocument, FanDocument, PolynomialDocument,
    ReportDocument,
};
use tropic_core::ainfinity::{
    parse_algebra, AinfinityError, DeformingCochain, Element, IdealSpec, SolveMode, SolveOutcome,
};
use tropic_core::floer::{
    a_support_query, pants_default_lambda0, pants_support_witness_via_solver, FiberPoint,
    LocalSystem, SupportKind, SupportVerdict,
};
use tropic_core::lattice::IntVec;
use tropic_core::lifts::{build_lift_model, Coefficients};
use tropic_core::novikov::{default_e_max, NovikovSeries, UnitaryElement};
use tropic_core::realization::{kapranov_check, lift_coefficients, realize_point};
use tropic_core::tropical::{negate_complex, Hyperplane, WellSpacedVerdict};
use num_traits::Signed;
use tropic_core::{parse_rational, BigInt, BigRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    Min,
    Max,
}

impl Convention {
    fn name(self) -> &'static str {
        match self {
            Convention::Min => "min",
            Convention::Max => "max",
        }
    }
}

#[derive(Parser)]
#[command(name = "tropic", version, about = "Exact tropical geometry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Sign convention of the input data (max negates coordinates on the way
    /// in and out).
    #[arg(long, global = true, value_enum, default_value = "min")]
    convention: Convention,
    /// Working precision for series computations (rational, default 10).
    #[arg(long, global = true)]
    emax: Option<String>,
    /// Write the machine-readable report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a curve file: complex condition, balancing, smoothness,
    /// genus, and optional fan-adaptedness.
    Check {
        curve: PathBuf,
        #[arg(long)]
        fan: Option<PathBuf>,
    },
    /// Compute the corner locus of a tropical polynomial.
    Hypersurface {
        polynomial: PathBuf,
        /// Write the complex document here (stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Render a 2D picture.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Clip radius for unbounded cells, in affine units.
        #[arg(long, default_value = "5")]
        radius: String,
    },
    /// Lift the polynomial over the Novikov field and audit sample points.
    Realize {
        polynomial: PathBuf,
        /// Facet samples per facet.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Run the geometric-to-unobstructedness criteria chain on a curve.
    Pipeline {
        curve: PathBuf,
        /// Restrict the end checks to one ray index.
        #[arg(long)]
        end: Option<usize>,
        /// Expected realization dimension for the superabundance flag.
        #[arg(long)]
        expected_dim: Option<usize>,
    },
    /// Check, deform, or solve a gapped algebra file.
    Ainf {
        algebra: PathBuf,
        #[arg(value_enum)]
        action: AinfAction,
        /// Deforming cochain file: lines `level coeff basis-name`.
        #[arg(long)]
        cochain: Option<PathBuf>,
        /// Ideal for the solver: `positive` or comma-separated basis names.
        #[arg(long, default_value = "positive")]
        ideal: String,
        #[arg(long, value_enum, default_value = "guarded")]
        mode: AinfMode,
        /// Arity bound for relation checks.
        #[arg(long, default_value_t = 4)]
        arity: usize,
    },
    /// Speyer well-spacedness of a genus-one curve against a hyperplane.
    Wellspaced {
        curve: PathBuf,
        /// Integral normal, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        normal: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        offset: String,
    },
    /// Floer-support membership for the template branes.
    Support {
        /// `pants` or `conormal`.
        #[arg(long)]
        kind: String,
        /// Fiber base point, comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Holonomies as semicolon-separated series (`1*T^0;1*T^0 + 1*T^1`).
        #[arg(long, allow_hyphen_values = true)]
        holonomies: String,
        /// Conormal parameters.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// For the pants kind: also construct the left holonomy witness via
        /// the module solver, treating the given first holonomy as the seed.
        #[arg(long, default_value_t = false)]
        solve: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AinfAction {
    Check,
    Deform,
    Solve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AinfMode {
    Guarded,
    Generic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emax_of(cli: &Cli) -> Result<BigRational> {
    match &cli.emax {
        Some(s) => parse_rational(s).map_err(|e| anyhow!(e)),
        None => Ok(default_e_max()),
    }
}

fn finish(cli: &Cli, mut report: ReportDocument, started: Instant) -> Result<bool> {
    report.elapsed_ms = started.elapsed().as_millis() as u64;
    report.print_human();
    if let Some(path) = &cli.json {
        write_json(path, &report)?;
    }
    Ok(report.all_passed())
}

fn run(cli: &Cli) -> Result<bool> {
    let started = Instant::now();
    match &cli.command {
        Command::Check { curve, fan } => {
            let mut doc: CurveDocument = read_json(curve)?;
            if cli.convention == Convention::Max {
                doc = doc.negated();
            }
            let curve = doc.to_curve()?;
            let mut report = ReportDocument::new("check", cli.convention.name());
            let complex = curve.to_complex();
            let verdict = complex.validate();
            report.push(
                "complex-condition",
                verdict.valid,
                if verdict.valid {
                    "all pairwise intersections are common faces".to_string()
                } else {
                    format!("{} violations", verdict.violations.len())
                },
            );
            let balanced = curve.is_balanced();
            report.push(
                "balanced",
                balanced.ok,
                if balanced.ok {
                    "weighted directions sum to zero at every vertex".to_string()
                } else {
                    format!("defective vertices: {:?}", balanced.offenders)
                },
            );
            let smooth = curve.is_smooth();
            report.push(
                "smooth",
                smooth.ok,
                if smooth.ok {
                    "every vertex is a standard trivalent frame".to_string()
                } else {
                    format!("offending vertices: {:?}", smooth.offenders)
                },
            );
            report.witness("genus", curve.genus().to_string());
            if let Some(fan_path) = fan {
                let fan_doc: FanDocument = read_json(fan_path)?;
                let fan = fan_doc.to_fan()?;
                let ok = curve.adapted_to_fan(&fan);
                report.push(
                    "adapted-to-fan",
                    ok,
                    if ok {
                        "every ray direction is a fan ray"
                    } else {
                        "some ray direction is missing from the fan"
                    },
                );
            }
            finish(cli, report, started)
        }
        Command::Hypersurface {
            polynomial,
            out,
            svg: svg_path,
            radius,
        } => {
            let mut doc: PolynomialDocument = read_json(polynomial)?;
            if cli.convention == Convention::Max {
                doc = doc.negated_coefficients()?;
            }
            let f = doc.to_polynomial()?;
            if f.ambient_dim() > 3 {
                println!("[fail] hypersurface: ambient dimension above 3 is unsupported");
                return Ok(false);
            }
            let mut report = ReportDocument::new("hypersurface", cli.convention.name());
            let complex = match f.hypersurface() {
                Ok(c) => c,
                Err(e) => {
                    report.push("corner-locus", false, e.to_string());
                    finish(cli, report, started)?;
                    return Ok(false);
                }
            };
            let complex = if cli.convention == Convention::Max {
                negate_complex(&complex)
            } else {
                complex
            };
            report.push(
                "corner-locus",
                true,
                format!("{} cells", complex.cells.len()),
            );
            let cdoc = ComplexDocument::from_complex(&complex)?;
            match out {
                Some(path) => write_json(path, &cdoc)?,
                None => println!("{}", serde_json::to_string_pretty(&cdoc)?),
            }
            if let Some(path) = svg_path {
                let r = parse_rational(radius).map_err(|e| anyhow!(e))?;
                let image = tropic_cli::svg::render(&complex, &r)?;
                std::fs::write(path, image)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            finish(cli, report, started)
        }
        Command::Realize {
            polynomial,
            samples,
        } => {
            let mut doc: PolynomialDocument = read_json(polynomial)?;
            if cli.convention == Convention::Max {
                doc = doc.negated_coefficients()?;
            }
            let f = doc.to_polynomial()?;
            let e_max = emax_of(cli)?;
            let mut report = ReportDocument::new("realize", cli.convention.name());
            if e_max <= BigRational::from_integer(0.into()) {
                report.warn(
                    "working-precision",
                    "emax is not positive: every residual check passes trivially",
                );
                return finish(cli, report, started);
            }
            let lifted = lift_coefficients(&f, &[], e_max.clone())
                .map_err(|e| anyhow!("cannot lift: {e}"))?;
            let complex = f
                .hypersurface()
                .map_err(|e| anyhow!("cannot realize: {e}"))?;
            let seed = std::env::var("TROPIC_SEED")
                .ok()
                .and_then(|s| s.parse::<u64>().ok())
                .unwrap_or(0);
            let mut rng = Lcg::new(seed);
            let mut all_ok = true;
            let mut facet_count = 0usize;
            for cell in &complex.cells {
                if cell.dim + 1 != complex.ambient {
                    continue;
                }
                facet_count += 1;
                let base = cell
                    .polyhedron
                    .relative_interior_point()
                    .ok_or_else(|| anyhow!("facet without interior"))?;
                let tangent = cell.polyhedron.tangent_lattice().unwrap();
                for s in 0..*samples {
                    let q = jittered_point(&base, &tangent, &mut rng, &f, s == 0);
                    match realize_point(&lifted, &q) {
                        Ok(z) => {
                            let residual = lifted.eval(&z).map_err(|e| anyhow!("{e}"))?;
                            let kap = kapranov_check(&lifted, &z).map_err(|e| anyhow!("{e}"))?;
                            let ok = kap && z.tropicalize() == q;
                            if !ok {
                                all_ok = false;
                            }
                            report.push(
                                &format!("facet{}-sample{}", facet_count - 1, s),
                                ok,
                                format!(
                                    "residual valuation >= {}",
                                    residual.valuation_lower_bound()
                                ),
                            );
                        }
                        Err(e) => {
                            all_ok = false;
                            report.push(
                                &format!("facet{}-sample{}", facet_count - 1, s),
                                false,
                                e.to_string(),
                            );
                        }
                    }
                }
            }
            if facet_count == 0 {
                report.warn("sampling", "no facets to sample");
            }
            report.push(
                "all-samples",
                all_ok,
                format!("{} facets, {} samples each", facet_count, samples),
            );
            finish(cli, report, started)
        }
        Command::Pipeline {
            curve,
            end,
            expected_dim,
        } => {
            let mut doc: CurveDocument = read_json(curve)?;
            if cli.convention == Convention::Max {
                doc = doc.negated();
            }
            let curve = doc.to_curve()?;
            let mut report = ReportDocument::new("pipeline", cli.convention.name());
            let smooth = curve.is_smooth();
            report.push(
                "geometric",
                smooth.ok,
                if smooth.ok {
                    "curve is balanced, trivalent, and locally standard".to_string()
                } else {
                    format!("not smooth at vertices {:?}", smooth.offenders)
                },
            );
            if !smooth.ok {
                return finish(cli, report, started);
            }
            let genus = curve.genus();
            report.witness("genus", genus.to_string());
            if genus == 0 {
                let model = build_lift_model(&curve).map_err(|e| anyhow!("{e}"))?;
                let betti = model.cohomology(Coefficients::Rational);
                report.witness(
                    "betti",
                    betti
                        .iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                );
                let ends: Vec<usize> = match end {
                    Some(f) => vec![*f],
                    None => (0..model.num_ends()).collect(),
                };
                for f in ends {
                    let surj = model.check_h1_surjection(f).map_err(|e| anyhow!("{e}"))?;
                    let inj = model.check_h2_injection(f).map_err(|e| anyhow!("{e}"))?;
                    let crit = model
                        .unobstructedness_criterion(f)
                        .map_err(|e| anyhow!("{e}"))?;
                    report.push(
                        &format!("end{}-h1-surjection", f),
                        surj,
                        "degree-one restriction onto the end torus",
                    );
                    report.push(
                        &format!("end{}-h2-injection", f),
                        inj,
                        "degree-two restriction away from the end",
                    );
                    report.push(
                        &format!("end{}-unobstructedness-criterion", f),
                        crit.criterion_holds,
                        "boundary criterion via the long exact sequence",
                    );
                }
            } else {
                report.warn(
                    "lift-criteria",
                    "genus above zero: end-restriction criteria are stated for trees; \
                     consider the wellspaced command for genus one",
                );
            }
            let (h0, h1) = curve.deformation_ranks();
            report.witness("h0-deformations", h0.to_string());
            report.witness("h1-cycles", h1.to_string());
            if let Some(d) = expected_dim {
                let superabundant = h0 > *d;
                report.push(
                    "superabundance",
                    !superabundant,
                    format!("deformation rank {h0} vs expected dimension {d}"),
                );
            }
            report.warn(
                "assumptions",
                "verdict chain: geometric -> unobstructedness-criterion -> support-template; \
                 analytic regularity and the mirror-symmetry identification are modeling \
                 assumptions, not computed here",
            );
            finish(cli, report, started)
        }
        Command::Ainf {
            algebra,
            action,
            cochain,
            ideal,
            mode,
            arity,
        } => {
            let text = std::fs::read_to_string(algebra)
                .with_context(|| format!("cannot read {}", algebra.display()))?;
            let a = parse_algebra(&text).map_err(|e| anyhow!("{e}"))?;
            let mut report = ReportDocument::new("ainf", cli.convention.name());
            match action {
                AinfAction::Check => {
                    let violations = a.check_relations(*arity);
                    report.push(
                        "relations",
                        violations.is_empty(),
                        format!("{} violations up to arity {arity}", violations.len()),
                    );
                    for v in violations.iter().take(10) {
                        report.witness(
                            &format!("violation-k{}-level{}", v.arity, v.level),
                            format!("{:?}", v.defect),
                        );
                    }
                }
                AinfAction::Deform => {
                    let path = cochain
                        .as_ref()
                        .ok_or_else(|| anyhow!("deform requires --cochain"))?;
                    let d = read_cochain(path, &a)?;
                    let deformed = a.deform(&d);
                    let violations = deformed.check_relations(*arity);
                    report.push(
                        "deformed-relations",
                        violations.is_empty(),
                        format!("{} violations", violations.len()),
                    );
                    println!("{}", tropic_core::ainfinity::emit_algebra(&deformed));
                }
                AinfAction::Solve => {
                    let spec = parse_ideal(ideal, &a)?;
                    let solve_mode = match mode {
                        AinfMode::Guarded => SolveMode::Guarded,
                        AinfMode::Generic => SolveMode::Generic,
                    };
                    match a.solve_bounding_cochain(&spec, solve_mode) {
                        Ok(SolveOutcome::Solved { cochain, trace }) => {
                            report.push(
                                "bounding-cochain",
                                true,
                                format!("solved across {} levels", trace.len()),
                            );
                            report.witness("cochain", render_element(cochain.element(), &a));
                        }
                        Ok(SolveOutcome::Obstructed(ob)) => {
                            report.push(
                                "bounding-cochain",
                                false,
                                format!("obstruction at level {}", ob.level),
                            );
                            report.witness("obstruction-class", format!("{:?}", ob.class));
                        }
                        Err(AinfinityError::HypothesisFailed(msg)) => {
                            report.push("hypotheses", false, msg);
                        }
                        Err(e) => return Err(anyhow!("{e}")),
                    }
                }
            }
            finish(cli, report, started)
        }
        Command::Wellspaced {
            curve,
            normal,
            offset,
        } => {
            let mut doc: CurveDocument = read_json(curve)?;
            if cli.convention == Convention::Max {
                doc = doc.negated();
            }
            let curve = doc.to_curve()?;
            let normal: IntVec = normal
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<i64>()
                        .map(BigInt::from)
                        .map_err(|e| anyhow!("bad normal entry {s:?}: {e}"))
                })
                .collect::<Result<_>>()?;
            let h = Hyperplane {
                normal,
                offset: parse_rational(offset).map_err(|e| anyhow!(e))?,
            };
            let mut report = ReportDocument::new("wellspaced", cli.convention.name());
            let out = curve.well_spaced(&h).map_err(|e| anyhow!("{e}"))?;
            let (ok, label) = match out.verdict {
                WellSpacedVerdict::WellSpaced => (true, "well-spaced"),
                WellSpacedVerdict::NotWellSpaced => (false, "not well-spaced"),
                WellSpacedVerdict::NotApplicable => {
                    (false, "not applicable: cycle not in the hyperplane")
                }
            };
            report.push("well-spaced", ok, label);
            for (v, d) in &out.exit_distances {
                report.witness(&format!("exit-vertex-{v}"), d.to_string());
            }
            finish(cli, report, started)
        }
        Command::Support {
            kind,
            q,
            holonomies,
            n,
            k,
            solve,
        } => {
            let q: Vec<BigRational> = q
                .split(',')
                .map(|s| parse_rational(s).map_err(|e| anyhow!(e)))
                .collect::<Result<_>>()?;
            let hols: Vec<UnitaryElement> = holonomies
                .split(';')
                .map(|s| {
                    s.trim()
                        .parse::<UnitaryElement>()
                        .map_err(|e| anyhow!("bad holonomy {s:?}: {e}"))
                })
                .collect::<Result<_>>()?;
            let support_kind = match kind.as_str() {
                "pants" => SupportKind::Pants,
                "conormal" => SupportKind::Conormal {
                    n: n.ok_or_else(|| anyhow!("conormal requires --n"))?,
                    k: k.ok_or_else(|| anyhow!("conormal requires --k"))?,
                },
                other => bail!("unknown support kind {other:?}"),
            };
            let mut report = ReportDocument::new("support", cli.convention.name());
            let p = FiberPoint {
                q: q.clone(),
                local_system: LocalSystem::new(hols.clone()),
            };
            match a_support_query(&support_kind, &p) {
                SupportVerdict::InSupport { rank, witness } => {
                    report.push("in-support", true, format!("rank {rank}"));
                    report.witness("relation", witness);
                }
                SupportVerdict::NotInSupport => {
                    report.push("in-support", false, "pairing vanishes");
                }
            }
            if *solve && support_kind == SupportKind::Pants {
                let a = -q[0].clone();
                if !a.is_negative() && q[0] == q[1] {
                    let e_max = emax_of(cli)?;
                    let l0 = pants_default_lambda0(&a);
                    match pants_support_witness_via_solver(&a, &l0, &hols[0], &hols[1], &e_max) {
                        Ok(u_eff) => report.witness("solved-left-holonomy", u_eff.to_string()),
                        Err(e) => report.warn("solver", e.to_string()),
                    }
                } else {
                    report.warn("solver", "witness solving is restricted to the diagonal leg");
                }
            }
            finish(cli, report, started)
        }
    }
}

/// Deterministic linear congruential generator for reproducible jitter.
struct Lcg(u64);

impl Lcg {
    fn new(seed: u64) -> Self {
        Lcg(seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407))
    }

    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn small_rational(&mut self) -> BigRational {
        let n = (self.next() % 9) as i64 - 4;
        BigRational::new(n.into(), 8.into())
    }
}

/// Base point jittered along the facet's tangent directions, falling back to
/// the base when the jitter leaves the two-achievers region.
fn jittered_point(
    base: &[BigRational],
    tangent: &[IntVec],
    rng: &mut Lcg,
    f: &tropic_core::tropical::TropicalPolynomial,
    first: bool,
) -> Vec<BigRational> {
    if first {
        return base.to_vec();
    }
    let mut q = base.to_vec();
    for dir in tangent {
        let j = rng.small_rational();
        for (qi, d) in q.iter_mut().zip(dir) {
            *qi += &j * BigRational::from(d.clone());
        }
    }
    let (_, argmin) = f.eval(&q);
    if argmin.len() == 2 {
        q
    } else {
        base.to_vec()
    }
}

fn read_cochain(
    path: &PathBuf,
    a: &tropic_core::ainfinity::GappedAlgebra,
) -> Result<DeformingCochain> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut element = Element::zero();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            bail!("cochain lines are `level coeff basis-name`, got {line:?}");
        }
        let level = parse_rational(parts[0]).map_err(|e| anyhow!(e))?;
        let coeff = parse_rational(parts[1]).map_err(|e| anyhow!(e))?;
        let idx = a
            .basis_index(parts[2])
            .ok_or_else(|| anyhow!("unknown basis element {:?}", parts[2]))?;
        element.add_term(level, idx, coeff);
    }
    DeformingCochain::new(element, a).map_err(|e| anyhow!("{e}"))
}

fn parse_ideal(spec: &str, a: &tropic_core::ainfinity::GappedAlgebra) -> Result<IdealSpec> {
    if spec == "positive" {
        return Ok(IdealSpec::PositivePart);
    }
    let mut span = std::collections::BTreeSet::new();
    for name in spec.split(',') {
        let idx = a
            .basis_index(name.trim())
            .ok_or_else(|| anyhow!("unknown basis element {name:?}"))?;
        span.insert(idx);
    }
    Ok(IdealSpec::Span(span))
}

fn render_element(e: &Element, a: &tropic_core::ainfinity::GappedAlgebra) -> String {
    let mut series_by_name: Vec<(String, NovikovSeries)> = Vec::new();
    for (level, vec) in e.components() {
        for (i, c) in vec {
            let name = a.basis()[*i].name.clone();
            let term = NovikovSeries::monomial(c.clone(), level.clone());
            match series_by_name.iter_mut().find(|(n, _)| *n == name) {
                Some((_, s)) => *s = s.add(&term),
                None => series_by_name.push((name, term)),
            }
        }
    }
    if series_by_name.is_empty() {
        return "0".to_string();
    }
    series_by_name
        .iter()
        .map(|(n, s)| format!("({s}) {n}"))
        .collect::<Vec<_>>()
        .join(" + ")
}
