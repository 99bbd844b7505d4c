//! Command-line front end. `run` parses arguments, performs one computation
//! and returns the exit code together with the rendered report.
//!
//! Exit codes: 0 success, 1 a verification ran and failed, 2 usage or
//! computation error.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::asymptotics::{
    apery_ratio, apery_target, fit_rational_span, gamma_i_verdict, kernel_c1, ExtrapolationConfig,
};
use crate::error::Error;
use crate::exceptional::{chi_matrix, is_unitriangular, phase_assignment, MarkedBasis};
use crate::grassmann::{bcfk_j_series, ehx_constant_terms, ehx_mirror, grassmann_spectrum, schubert_ring};
use crate::jfunction::{j_product, j_projective, quantum_lefschetz, quantum_period, JSeries, QuantumPeriod};
use crate::mirror::{
    conifold_point, constant_term_series, fekete_limit, projective_spectrum, property_o_report, przyjalkowski_model,
    rays_from_json, toric_mirror_from_rays, FeketeVerdict, LaurentPolynomial,
};
use crate::oscillatory::{
    central_charge_structure_sheaf, laplace_lefschetz_check, oscillatory_integral, QuadratureConfig,
    MAX_OSCILLATORY_DIM,
};
use crate::ring::{build_hypersurface_ambient_ring, build_projective_ring, gamma_class, tensor_ring, Ring};
use crate::scalars::{make_constants, rat_to_string, BigComplex, BigReal, ConstantTable, ExactRational, Prec};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A space named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceSpec {
    /// P^n.
    Projective(usize),
    /// P^{n_1} × P^{n_2} × ⋯.
    Product(Vec<usize>),
    /// Degree-d hypersurface in P^n.
    Hypersurface {
        n: usize,
        d: usize,
    },
    /// Toric Fano variety from the rays of its fan.
    Toric(Vec<Vec<i64>>),
    Grassmannian {
        r: usize,
        n: usize,
    },
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Projective(n) => write!(f, "P{n}"),
            SpaceSpec::Product(ns) => {
                write!(
                    f,
                    "{}",
                    ns.iter().map(|n| format!("P{n}")).collect::<Vec<_>>().join("x")
                )
            }
            SpaceSpec::Hypersurface { n, d } => write!(f, "Hyp({n},{d})"),
            SpaceSpec::Toric(rays) => write!(f, "toric({} rays)", rays.len()),
            SpaceSpec::Grassmannian { r, n } => write!(f, "Gr({r},{n})"),
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn parse_pair(s: &str, prefix: &str) -> Option<(usize, usize)> {
    let inner = s.strip_prefix(prefix)?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn parse_projective(s: &str) -> Option<usize> {
    s.strip_prefix('P')?.parse().ok()
}

impl SpaceSpec {
    /// Parses `P<k>`, `P<a>xP<b>…`, `Hyp(n,d)` and `Gr(r,n)`.
    pub fn parse(s: &str) -> crate::Result<Self> {
        let s = s.trim();
        let bad = || {
            usage(format!(
                "unknown space '{s}' (expected P<k>, P<a>xP<b>, Hyp(n,d) or Gr(r,n))"
            ))
        };
        let spec = if let Some((n, d)) = parse_pair(s, "Hyp(") {
            SpaceSpec::Hypersurface { n, d }
        } else if let Some((r, n)) = parse_pair(s, "Gr(") {
            SpaceSpec::Grassmannian { r, n }
        } else if s.contains('x') {
            SpaceSpec::Product(
                s.split('x')
                    .map(parse_projective)
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(bad)?,
            )
        } else {
            SpaceSpec::Projective(parse_projective(s).ok_or_else(bad)?)
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> crate::Result<()> {
        match self {
            SpaceSpec::Projective(n) if *n == 0 => Err(usage("P0 is a point; use P<k> with k ≥ 1")),
            SpaceSpec::Product(ns) if ns.len() < 2 || ns.contains(&0) => {
                Err(usage("products need at least two factors P<k> with k ≥ 1"))
            }
            SpaceSpec::Hypersurface { n, d } if *n < 2 || *d == 0 || *d > *n => Err(usage(format!(
                "Hyp({n},{d}) is not a Fano hypersurface of dimension ≥ 1"
            ))),
            SpaceSpec::Grassmannian { r, n } if *r == 0 || r >= n => Err(usage(format!("Gr({r},{n}) needs 0 < r < n"))),
            _ => Ok(()),
        }
    }

    pub fn ring(&self) -> crate::Result<Ring> {
        match self {
            SpaceSpec::Projective(n) => Ok(build_projective_ring(n + 1)),
            SpaceSpec::Product(ns) => {
                let mut it = ns.iter().map(|n| build_projective_ring(n + 1));
                let first = it.next().expect("validated");
                Ok(it.fold(first, |acc, r| tensor_ring(&acc, &r)))
            }
            SpaceSpec::Hypersurface { n, d } => build_hypersurface_ambient_ring(*n, *d),
            SpaceSpec::Grassmannian { r, n } => schubert_ring(*r, *n),
            SpaceSpec::Toric(_) => Err(usage("toric inputs only support mirror-side commands")),
        }
    }

    /// Exact J-series where available (P^n, products, hypersurfaces).
    pub fn exact_j(&self, order: usize, p: Prec) -> crate::Result<Option<JSeries<ExactRational>>> {
        Ok(match self {
            SpaceSpec::Projective(n) => Some(j_projective(n + 1, order)?),
            SpaceSpec::Product(ns) => {
                let mut js = ns.iter().map(|n| j_projective(n + 1, order));
                let mut acc = js.next().expect("validated")?;
                for j in js {
                    acc = j_product(&acc, &j?)?;
                }
                Some(acc)
            }
            SpaceSpec::Hypersurface { n, d } => {
                let r = n + 1;
                let ry = r - d;
                let jx = j_projective(r, r * order.div_ceil(ry))?;
                Some(quantum_lefschetz(&jx, *d, p)?.jy)
            }
            _ => None,
        })
    }

    pub fn complex_j(&self, order: usize, p: Prec) -> crate::Result<JSeries<BigComplex>> {
        match self {
            SpaceSpec::Grassmannian { r, n } => bcfk_j_series(*r, *n, order, p),
            SpaceSpec::Toric(_) => Err(usage("no J-function for toric inputs; use qperiod")),
            SpaceSpec::Hypersurface { n, d } => {
                // exact Cauchy products with e^{−c0 t} get slow at large D; guard digits cover the cancellation
                let r = n + 1;
                let jx = j_projective(r, r * order.div_ceil(r - d))?.to_complex(p.plus(20));
                let jy = quantum_lefschetz(&jx, *d, p.plus(20))?.jy;
                let round = |z: &BigComplex| BigComplex::new(z.re.with_prec(p), z.im.with_prec(p));
                let coeffs = jy.coeffs().iter().map(|v| v.map(round)).collect();
                JSeries::new(jy.space.clone(), jy.ring(), jy.index(), coeffs)
            }
            _ => Ok(self.exact_j(order, p)?.expect("exact J exists").to_complex(p)),
        }
    }

    /// Laurent polynomial mirror; hypersurfaces use the Przyjalkowski model.
    pub fn mirror(&self) -> crate::Result<LaurentPolynomial> {
        match self {
            SpaceSpec::Projective(n) => toric_mirror_from_rays(&projective_rays(*n, 0, *n)),
            SpaceSpec::Product(ns) => {
                let total: usize = ns.iter().sum();
                let mut rays = Vec::new();
                let mut offset = 0;
                for &n in ns {
                    rays.extend(projective_rays(n, offset, total));
                    offset += n;
                }
                toric_mirror_from_rays(&rays)
            }
            SpaceSpec::Hypersurface { n, d } => Ok(przyjalkowski_model(*n, *d)?.f),
            SpaceSpec::Grassmannian { r, n } => ehx_mirror(*r, *n),
            SpaceSpec::Toric(rays) => toric_mirror_from_rays(rays),
        }
    }

    pub fn quantum_period(&self, order: usize, p: Prec) -> crate::Result<QuantumPeriod<ExactRational>> {
        match self {
            SpaceSpec::Grassmannian { r, n } => ehx_constant_terms(*r, *n, order),
            SpaceSpec::Toric(_) => constant_term_series(&self.mirror()?, order),
            _ => Ok(quantum_period(&self.exact_j(order, p)?.expect("exact J exists"))),
        }
    }

    /// Fano index used to space the period coefficients.
    pub fn index(&self) -> crate::Result<usize> {
        match self {
            SpaceSpec::Toric(_) => {
                let g = constant_term_series(&self.mirror()?, 12)?;
                Ok(g.index.max(1) as usize)
            }
            _ => Ok(self.ring()?.index as usize),
        }
    }
}

fn projective_rays(n: usize, offset: usize, total: usize) -> Vec<Vec<i64>> {
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..total).map(|j| (j == offset + i) as i64).collect())
        .collect();
    rays.push(
        (0..total)
            .map(|j| if (offset..offset + n).contains(&j) { -1 } else { 0 })
            .collect(),
    );
    rays
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "qcohom",
    version,
    about = "Quantum cohomology, Gamma classes and mirror checks for Fano manifolds"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct GlobalOpts {
    /// Working precision in decimal digits (default 50, at least 15).
    #[arg(long, global = true)]
    digits: Option<usize>,
    /// Series truncation order D.
    #[arg(long, short = 'D', global = true)]
    order: Option<usize>,
    /// Largest t of the extrapolation grid.
    #[arg(long, global = true)]
    tmax: Option<f64>,
    /// Polynomial order of the extrapolation in 1/t.
    #[arg(short = 'k', long = "k", global = true)]
    k: Option<usize>,
    /// Tolerance of the verification.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// `key = value` file with defaults for the options above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SpaceArg {
    /// P<k>, P<a>xP<b>, Hyp(n,d) or Gr(r,n).
    #[arg(long)]
    space: Option<String>,
    /// JSON file with the rays of a toric fan.
    #[arg(long)]
    rays: Option<PathBuf>,
}

impl SpaceArg {
    fn resolve(&self) -> crate::Result<SpaceSpec> {
        match (&self.space, &self.rays) {
            (Some(s), None) => SpaceSpec::parse(s),
            (None, Some(path)) => Ok(SpaceSpec::Toric(load_rays(path)?)),
            (Some(_), Some(_)) => Err(usage("give either --space or --rays, not both")),
            (None, None) => Err(usage("missing --space")),
        }
    }
}

/// Reads and validates a JSON array of primitive integer rays.
pub fn load_rays(path: &std::path::Path) -> crate::Result<Vec<Vec<i64>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    rays_from_json(&text)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology ring: basis, cup products, c1, ch(T).
    Ring(SpaceArg),
    /// Components of the Gamma class.
    Gamma(SpaceArg),
    /// Coefficients of the J-function.
    Jseries(SpaceArg),
    /// Quantum period coefficients G_d for d ≤ N.
    Qperiod {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(short = 'N', long = "terms", default_value_t = 20)]
        n: usize,
    },
    /// Critical point of the mirror on the positive real locus.
    Conifold(SpaceArg),
    /// Eigenvalues of c1⋆ and Property O.
    Spectrum(SpaceArg),
    /// Gamma conjecture I: large-t limit of the normalised J-function.
    #[command(name = "check-gamma1")]
    CheckGamma1(SpaceArg),
    /// Apéry limits along the kernel of c1.
    Apery {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(short = 'N', long = "terms", default_value_t = 20)]
        n: usize,
    },
    /// Orthant integral of the mirror against the central charge of O.
    Oscillatory {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Laplace-transform form of quantum Lefschetz for Hyp(n,d).
    Lefschetz {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, default_value_t = 0.05)]
        u: f64,
    },
    /// Gram matrix of Gamma-integral line bundles on P^k.
    Gram {
        #[command(flatten)]
        space: SpaceArg,
        /// Comma-separated twists (default 0,1,…,k).
        #[arg(long, allow_hyphen_values = true)]
        bundles: Option<String>,
    },
    /// Apply mutations such as R1,L3 to the Beilinson basis of P^k.
    Mutate {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        sequence: String,
        /// Also report the phase window for this φ.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<f64>,
    },
    /// Supermultiplicativity of Const(f^{rn}) for a + b ≤ N.
    Fekete {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(short = 'N', long = "terms", default_value_t = 4)]
        n: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ring(_) => "ring",
            Command::Gamma(_) => "gamma",
            Command::Jseries(_) => "jseries",
            Command::Qperiod { .. } => "qperiod",
            Command::Conifold(_) => "conifold",
            Command::Spectrum(_) => "spectrum",
            Command::CheckGamma1(_) => "check-gamma1",
            Command::Apery { .. } => "apery",
            Command::Oscillatory { .. } => "oscillatory",
            Command::Lefschetz { .. } => "lefschetz",
            Command::Gram { .. } => "gram",
            Command::Mutate { .. } => "mutate",
            Command::Fekete { .. } => "fekete",
        }
    }
}

/// Resolved options after merging the config file and the flags.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub digits: usize,
    pub order: Option<usize>,
    pub tmax: f64,
    pub k: usize,
    pub tol: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            digits: 50,
            order: None,
            tmax: 40.0,
            k: 6,
            tol: None,
            output: None,
            format: None,
        }
    }
}

impl RunConfig {
    fn apply_file(&mut self, text: &str) -> crate::Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || usage(format!("config line {}: bad value '{value}' for {key}", lineno + 1));
            match key {
                "digits" => self.digits = value.parse().map_err(|_| bad())?,
                "order" => self.order = Some(value.parse().map_err(|_| bad())?),
                "tmax" => self.tmax = value.parse().map_err(|_| bad())?,
                "k" => self.k = value.parse().map_err(|_| bad())?,
                "tol" => self.tol = Some(value.parse().map_err(|_| bad())?),
                "output" => self.output = Some(PathBuf::from(value)),
                "format" => self.format = Some(Format::from_str(value, true).map_err(|_| bad())?),
                _ => return Err(usage(format!("config line {}: unknown key '{key}'", lineno + 1))),
            }
        }
        Ok(())
    }

    fn apply_flags(&mut self, g: &GlobalOpts) {
        if let Some(d) = g.digits {
            self.digits = d;
        }
        if g.order.is_some() {
            self.order = g.order;
        }
        if let Some(t) = g.tmax {
            self.tmax = t;
        }
        if let Some(k) = g.k {
            self.k = k;
        }
        if g.tol.is_some() {
            self.tol = g.tol;
        }
        if g.output.is_some() {
            self.output = g.output.clone();
        }
        if g.format.is_some() {
            self.format = g.format;
        }
    }

    fn validate(&self) -> crate::Result<()> {
        if self.digits < 15 {
            return Err(Error::PrecisionTooLow(self.digits));
        }
        if !(self.tmax > 0.0) || self.k == 0 || self.order == Some(0) || self.tol.is_some_and(|t| !(t > 0.0)) {
            return Err(usage("tmax, k, order and tol must be positive"));
        }
        Ok(())
    }

    fn prec(&self) -> Prec {
        Prec::new(self.digits)
    }

    fn echo(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("digits".into(), json!(self.digits));
        m.insert("order".into(), json!(self.order));
        m.insert("tmax".into(), json!(self.tmax));
        m.insert("k".into(), json!(self.k));
        m.insert("tol".into(), json!(self.tol));
        m
    }
}

/// Result of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    /// Report text (already written to `--output` when given).
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    verdict: Option<bool>,
    body: Map<String, Value>,
    error_estimates: Value,
    csv: Option<String>,
}

impl Report {
    fn value(v: Value) -> Self {
        let mut body = Map::new();
        body.insert("value".into(), v);
        Report {
            verdict: None,
            body,
            error_estimates: json!({}),
            csv: None,
        }
    }

    fn verdict(pass: bool, detail: Value, errors: Value) -> Self {
        let mut body = Map::new();
        body.insert("verdict".into(), json!(if pass { "pass" } else { "fail" }));
        body.insert("value".into(), detail);
        Report {
            verdict: Some(pass),
            body,
            error_estimates: errors,
            csv: None,
        }
    }
}

fn dec(x: &BigReal) -> String {
    x.to_decimal(x.prec().digits.min(40))
}

fn complex_json(z: &BigComplex) -> Value {
    json!([dec(&z.re), dec(&z.im)])
}

fn constants(cfg: &RunConfig, ring_dim: usize) -> crate::Result<ConstantTable> {
    make_constants(cfg.digits, (ring_dim + 2).max(4))
}

fn execute(cmd: &Command, cfg: &RunConfig, echo: &mut Map<String, Value>) -> crate::Result<Report> {
    let p = cfg.prec();
    match cmd {
        Command::Ring(s) => {
            let space = s.resolve()?;
            echo.insert("space".into(), json!(space.to_string()));
            let ring = space.ring()?;
            ring.validate()?;
            Ok(Report::value(ring.to_json()))
        }
        Command::Gamma(s) => {
            let space = s.resolve()?;
            echo.insert("space".into(), json!(space.to_string()));
            let ring = space.ring()?;
            let c = constants(cfg, ring.dim)?;
            let g = gamma_class(&ring, &c)?;
            let comps: Vec<Value> = ring
                .basis
                .iter()
                .zip(g.coeffs())
                .map(|(b, z)| json!({"basis": b.label, "value": complex_json(z)}))
                .collect();
            Ok(Report::value(json!(comps)))
        }
        Command::Jseries(s) => {
            let space = s.resolve()?;
            let order = cfg.order.unwrap_or(20);
            echo.insert("space".into(), json!(space.to_string()));
            echo.insert("order".into(), json!(order));
            let v = match space.exact_j(order, p)? {
                Some(j) => j.to_json(),
                None => space.complex_j(order, p)?.to_json(),
            };
            Ok(Report::value(v))
        }
        Command::Qperiod { space: s, n } => {
            let space = s.resolve()?;
            echo.insert("space".into(), json!(space.to_string()));
            echo.insert("N".into(), json!(n));
            let g = space.quantum_period(*n, p)?;
            let rows: Vec<Value> = g
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(d, c)| json!({"d": d, "G_d": rat_to_string(c)}))
                .collect();
            let mut r = Report::value(json!({"index": g.index, "coefficients": rows}));
            r.csv = Some(g.to_csv());
            Ok(r)
        }
        Command::Conifold(s) => {
            let space = s.resolve()?;
            echo.insert("space".into(), json!(space.to_string()));
            let tol = cfg.tol.unwrap_or(1e-30);
            let (res, shift) = match &space {
                SpaceSpec::Hypersurface { n, d } => {
                    let m = przyjalkowski_model(*n, *d)?;
                    (m.conifold(tol, p)?, Some(m.c0_shift.clone()))
                }
                _ => (conifold_point(&space.mirror()?, tol, p)?, None),
            };
            let mut v = json!({
                "x_con": res.x_con.iter().map(dec).collect::<Vec<_>>(),
                "T_con": dec(&res.t_con),
                "newton_iterations": res.newton_iterations,
                "condition_a": "not verified",
            });
            if let Some(c0) = shift {
                v["c0_shift"] = json!(rat_to_string(&c0));
            }
            let mut r = Report::value(v);
            r.error_estimates = json!({"gradient_norm": res.gradient_norm.to_f64()});
            Ok(r)
        }
        Command::Spectrum(s) => {
            let space = s.resolve()?;
            echo.insert("space".into(), json!(space.to_string()));
            let (multiset, t, closed, report) = match &space {
                SpaceSpec::Grassmannian { r, n } => {
                    let g = grassmann_spectrum(*r, *n, p)?;
                    (g.multiset, g.t, Some(g.t_closed_form), g.property_o)
                }
                SpaceSpec::Projective(n) => {
                    let spec = projective_spectrum(n + 1, p);
                    let rep = property_o_report(&spec, (n + 1) as u32, p)?;
                    (spec, rep.t.clone(), None, rep)
                }
                _ => return Err(usage("spectrum supports P<k> and Gr(r,n)")),
            };
            let v = json!({
                "T": dec(&t),
                "T_closed_form": closed.as_ref().map(dec),
                "eigenvalues": multiset.iter().map(|(z, m)| json!({"value": complex_json(z), "multiplicity": m})).collect::<Vec<_>>(),
                "property_O": report.satisfied,
                "condition_1": report.condition_1,
                "condition_2": report.condition_2,
            });
            Ok(Report::verdict(report.satisfied, v, json!({})))
        }
        Command::CheckGamma1(s) => {
            let space = s.resolve()?;
            let order = cfg.order.unwrap_or(600);
            let tol = cfg.tol.unwrap_or(1e-4);
            echo.insert("space".into(), json!(space.to_string()));
            echo.insert("order".into(), json!(order));
            echo.insert("tol".into(), json!(tol));
            let j = space.complex_j(order, p)?;
            let c = constants(cfg, j.ring().dim)?;
            let ecfg = ExtrapolationConfig::standard(cfg.tmax, cfg.k, p)?;
            let v = gamma_i_verdict(&j, &ecfg, tol, &c)?;
            let errs = json!({"extrapolation_errors": v.extrapolation_errors, "worst_component": v.worst_component});
            Ok(Report::verdict(v.pass, v.to_json(), errs))
        }
        Command::Apery { space: s, n } => {
            let space = s.resolve()?;
            echo.insert("space".into(), json!(space.to_string()));
            echo.insert("N".into(), json!(n));
            let ring = space.ring()?;
            let r = ring.index.max(1) as usize;
            let order = cfg.order.unwrap_or(r * n);
            let j = space.complex_j(order, p)?;
            let c = constants(cfg, ring.dim)?;
            let tol = cfg.tol.unwrap_or(1e-6);
            let mut results = Vec::new();
            let mut errors = Vec::new();
            let mut pass = true;
            for alpha in kernel_c1(&ring) {
                let sequence = apery_ratio(&j, &alpha, *n, p)?;
                let target = apery_target(&alpha, &c)?;
                let last = sequence.ratios.last().cloned().unwrap_or_else(|| BigReal::zero(p));
                let err = (last.clone() - target.re.clone()).abs().to_f64();
                pass &= err < tol;
                let fit = c.zeta(2).map(|z2| fit_rational_span(&target.re, z2, 12, 24)).ok();
                errors.push(err);
                results.push(json!({
                    "alpha": alpha.coeffs().iter().map(rat_to_string).collect::<Vec<_>>(),
                    "ratios": sequence.ratios.iter().map(|x| x.to_decimal(25)).collect::<Vec<_>>(),
                    "aitken_last": sequence.aitken.last().map(|x| x.to_decimal(25)),
                    "target": dec(&target.re),
                    "zeta2_fit": fit.filter(|f| f.residual < 1e-8).map(|f| json!({"a": rat_to_string(&f.a), "b": rat_to_string(&f.b)})),
                }));
            }
            Ok(Report::verdict(
                pass,
                json!(results),
                json!({"final_ratio_errors": errors}),
            ))
        }
        Command::Oscillatory { space: s, t } => {
            let space = s.resolve()?;
            echo.insert("space".into(), json!(space.to_string()));
            echo.insert("t".into(), json!(t));
            let f = space.mirror()?;
            if f.nvars() > MAX_OSCILLATORY_DIM {
                return Err(Error::ResourceLimit(format!(
                    "mirror has {} variables; the limit is {MAX_OSCILLATORY_DIM}",
                    f.nvars()
                )));
            }
            let tol = cfg.tol.unwrap_or(1e-10);
            let z = BigReal::one(p) / BigReal::from_f64(*t, p);
            let qp = if tol < 1e-13 { p } else { Prec::new(15) };
            let integral = oscillatory_integral(&f, &z, &QuadratureConfig::new(tol, qp))?;
            let mut v = json!({"integral": dec(&integral.value), "grid_params": integral.grid_params()});
            match space {
                SpaceSpec::Projective(_) | SpaceSpec::Product(_) => {
                    let order = cfg.order.unwrap_or(200);
                    let j = space.exact_j(order, p)?.expect("exact J exists");
                    let c = constants(cfg, j.ring().dim)?;
                    let zc = central_charge_structure_sheaf(&j, &BigReal::from_f64(*t, p), &c)?;
                    let diff = (zc.re.clone() - integral.value.clone()).abs().to_f64();
                    v["central_charge"] = complex_json(&zc);
                    v["abs_diff"] = json!(diff);
                    let pass = diff < (100.0 * tol).max(1e-6) * zc.re.abs().to_f64().max(1e-300);
                    Ok(Report::verdict(
                        pass,
                        v,
                        json!({"quadrature_last_change": integral.last_change}),
                    ))
                }
                _ => {
                    let mut r = Report::value(v);
                    r.error_estimates = json!({"quadrature_last_change": integral.last_change});
                    Ok(r)
                }
            }
        }
        Command::Lefschetz { space: s, u } => {
            let space = s.resolve()?;
            echo.insert("space".into(), json!(space.to_string()));
            echo.insert("u".into(), json!(u));
            let SpaceSpec::Hypersurface { n, d } = space else {
                return Err(usage("lefschetz needs --space Hyp(n,d)"));
            };
            let order = cfg.order.unwrap_or(20 * (n + 1));
            let tol = cfg.tol.unwrap_or(1e-8);
            let jx = j_projective(n + 1, order)?;
            let c = constants(cfg, n)?;
            let rep = laplace_lefschetz_check(&jx, d, &BigReal::from_f64(*u, p), tol, &c)?;
            Ok(Report::verdict(
                rep.pass,
                rep.to_json(),
                json!({"max_rel_diff": rep.max_rel_diff}),
            ))
        }
        Command::Gram { space: s, bundles } => {
            let space = s.resolve()?;
            let SpaceSpec::Projective(k) = space else {
                return Err(usage("gram supports --space P<k>"));
            };
            let twists: Vec<i64> = match bundles {
                Some(list) => list
                    .split(',')
                    .map(|x| x.trim().parse().map_err(|_| usage(format!("bad twist '{x}'"))))
                    .collect::<crate::Result<_>>()?,
                None => (0..=k as i64).collect(),
            };
            echo.insert("space".into(), json!(space.to_string()));
            echo.insert("bundles".into(), json!(twists));
            let c = constants(cfg, k)?;
            let basis = MarkedBasis::from_line_bundles(k + 1, &twists, &c)?;
            let g = basis.gram(&c)?;
            let ring = build_projective_ring(k + 1);
            let h = crate::ring::GradedVector::basis(&ring, 1, ());
            let bundles: Vec<_> = twists
                .iter()
                .map(|&t| crate::ring::KClass::line_bundle(&h, t))
                .collect();
            let chi = chi_matrix(&bundles)?;
            let pass = g.is_integral(10) && g.rounded == chi;
            let mut r = Report::verdict(pass, g.to_json(), json!({"residual": g.residual.to_f64()}));
            r.csv = Some(g.to_csv());
            Ok(r)
        }
        Command::Mutate {
            space: s,
            sequence,
            phi,
        } => {
            let space = s.resolve()?;
            let SpaceSpec::Projective(k) = space else {
                return Err(usage("mutate supports --space P<k>"));
            };
            echo.insert("space".into(), json!(space.to_string()));
            echo.insert("sequence".into(), json!(sequence));
            let c = constants(cfg, k)?;
            let mut basis = MarkedBasis::from_line_bundles(k + 1, &(0..=k as i64).collect::<Vec<_>>(), &c)?;
            let mut pass = true;
            let mut worst = 0.0f64;
            for step in sequence.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                let (dir, pos) = step.split_at(1);
                let i: usize = pos.parse().map_err(|_| usage(format!("bad mutation '{step}'")))?;
                basis = match dir {
                    "R" | "r" => basis.right_mutation(i, &c)?,
                    "L" | "l" => basis.left_mutation(i, &c)?,
                    _ => return Err(usage(format!("bad mutation '{step}' (expected R<i> or L<i>)"))),
                };
                let g = basis.gram(&c)?;
                worst = worst.max(g.residual.to_f64());
                pass &= g.is_integral(10) && g.rounded == basis.exact_gram();
            }
            let g = basis.gram(&c)?;
            pass &= is_unitriangular(&g.rounded);
            let mut v = json!({"basis": basis.to_json(), "gram": g.to_json()});
            if let Some(phi) = phi {
                v["phase"] = phase_assignment(k + 1, *phi)?.to_json();
            }
            Ok(Report::verdict(pass, v, json!({"max_residual": worst})))
        }
        Command::Fekete { space: s, n } => {
            let space = s.resolve()?;
            echo.insert("space".into(), json!(space.to_string()));
            echo.insert("N".into(), json!(n));
            let f = space.mirror()?;
            let r = space.index()?;
            let rep = fekete_limit(&f, r, *n)?;
            let v = json!({
                "r": rep.r,
                "alpha": rep.alpha,
                "violations": rep.violations,
                "verdict_detail": format!("{:?}", rep.verdict),
                "limit_estimate": rep.limit_estimate,
            });
            Ok(Report::verdict(
                rep.verdict == FeketeVerdict::Supermultiplicative,
                v,
                json!({}),
            ))
        }
    }
}

fn render(cmd: &Command, cfg: &RunConfig, echo: Map<String, Value>, rep: Report) -> String {
    let default_csv = matches!(cmd, Command::Qperiod { .. });
    let format = cfg
        .format
        .unwrap_or(if default_csv { Format::Csv } else { Format::Json });
    if format == Format::Csv {
        if let Some(csv) = rep.csv {
            return csv;
        }
    }
    let mut out = Map::new();
    out.insert("tool_version".into(), json!(TOOL_VERSION));
    out.insert("command".into(), json!(cmd.name()));
    out.insert("config_echo".into(), Value::Object(echo));
    for (k, v) in rep.body {
        out.insert(k, v);
    }
    out.insert("error_estimates".into(), rep.error_estimates);
    let mut s = serde_json::to_string_pretty(&Value::Object(out)).expect("serializable");
    s.push('\n');
    s
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let fail = |msg: String| Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    };
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.global.config {
        match std::fs::read_to_string(path) {
            Ok(text) => {
                if let Err(e) = cfg.apply_file(&text) {
                    return fail(e.to_string());
                }
            }
            Err(e) => return fail(format!("{}: {e}", path.display())),
        }
    }
    cfg.apply_flags(&cli.global);
    if let Err(e) = cfg.validate() {
        return fail(e.to_string());
    }
    let mut echo = cfg.echo();
    let rep = match execute(&cli.cmd, &cfg, &mut echo) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let code = match rep.verdict {
        Some(false) => 1,
        _ => 0,
    };
    let text = render(&cli.cmd, &cfg, echo, rep);
    if let Some(path) = &cfg.output {
        if let Err(e) = std::fs::write(path, &text) {
            return fail(format!("{}: {e}", path.display()));
        }
    }
    Outcome {
        code,
        stdout: text,
        stderr: String::new(),
    }
}
