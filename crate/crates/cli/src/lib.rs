//! Command-line front-end: one verb per invocation, a JSON (or CSV) report
//! on stdout or `--out`, and an exit code of 0 (success), 1 (verdict false
//! or nothing found), 2 (input error) or 3 (search budget exhausted).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use metric_pairs::counting::{self, CountKind, CountingProfile};
use metric_pairs::gluing::{check_eps_admissible, glue_from_approximation, glue_from_rough_isometry};
use metric_pairs::io::{self, GluingDoc, ResultDoc};
use metric_pairs::metric::closed_ball;
use metric_pairs::solver::{self, SearchBudget};
use metric_pairs::{chain, Error, MetricPair, MetricTuple};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Validate,
    Hausdorff,
    Gh,
    GhTruncated,
    Approx,
    RoughIsom,
    Counts,
    CertifyFamily,
    CheckLemma,
    Glue,
    Chain,
    Isometry,
}

impl Verb {
    fn name(self) -> &'static str {
        match self {
            Verb::Validate => "validate",
            Verb::Hausdorff => "hausdorff",
            Verb::Gh => "gh",
            Verb::GhTruncated => "gh-truncated",
            Verb::Approx => "approx",
            Verb::RoughIsom => "rough-isom",
            Verb::Counts => "counts",
            Verb::CertifyFamily => "certify-family",
            Verb::CheckLemma => "check-lemma",
            Verb::Glue => "glue",
            Verb::Chain => "chain",
            Verb::Isometry => "isometry",
        }
    }

    /// The definition or statement the verb evaluates.
    fn anchor(self) -> &'static str {
        match self {
            Verb::Validate => "finite metric: zero diagonal, symmetric, positive off-diagonal, triangle inequality",
            Verb::Hausdorff => "d_H(S,T) = max(max_s d(s,T), max_t d(t,S)), summed over the pair levels in a gluing",
            Verb::Gh => "d_GH((X,A),(Y,B)) = inf over admissible metrics on X ⊔ Y of d_H(X,Y) + d_H(A,B)",
            Verb::GhTruncated => {
                "truncated distance: inf ε ≤ 1/2 with an (ε; A, B)-admissible gluing of the closed 1/ε-balls"
            }
            Verb::Approx => "ε-approximation pair: maps f, g with distortion, return and subset defects at most ε",
            Verb::RoughIsom => "ε-rough isometry from the closed R-ball of A onto the (R−ε)-ball of B",
            Verb::Counts => "M, N: minimal open-ball covers (outer, inner centres); P: disjoint open balls; S: separated sets",
            Verb::CertifyFamily => "π(ε), ν(ε): family maxima of packing and covering counts on closed 1/ε-balls of A",
            Verb::CheckLemma => "count transfer under an (ε; A, B)-admissible gluing, covering and packing clauses",
            Verb::Glue => "explicit gluing δ(x,y) = ε/2 + min_x' d(x,x') + d(f(x'),y) from an approximation",
            Verb::Chain => "chained gluing: members embed isometrically, limit points reached by budget-respecting chains",
            Verb::Isometry => "isometry of pairs: distance-preserving bijection carrying A onto B",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "metric-pairs", version, about = "Distances and counts for finite metric pairs")]
pub struct Cli {
    pub verb: Verb,
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub resolution: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long = "r")]
    pub r: Option<f64>,
    #[arg(long = "R")]
    pub big_r: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub pseudo: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("missing parameter --{0}")]
    MissingParam(&'static str),
    #[error("parameter --{0} must be positive, got {1}")]
    NonPositive(&'static str, f64),
    #[error("{verb} expects {expected} input file(s), got {got}")]
    Inputs { verb: &'static str, expected: &'static str, got: usize },
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::SizeLimitExceeded { .. }) => EXIT_LIMIT,
            _ => EXIT_INPUT,
        }
    }
}

/// A finished command: the result payload and whether its verdict holds.
struct Outcome {
    result: Value,
    ok: bool,
    profiles: Vec<CountingProfile>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self { result, ok: true, profiles: Vec::new() }
    }

    fn verdict(result: Value, ok: bool) -> Self {
        Self { result, ok, profiles: Vec::new() }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    params: BTreeMap<&'static str, Value>,
}

impl Ctx<'_> {
    fn positive(&mut self, name: &'static str, v: Option<f64>) -> Result<f64, CliError> {
        let v = v.ok_or(CliError::MissingParam(name))?;
        if !(v > 0.0) {
            return Err(CliError::NonPositive(name, v));
        }
        self.params.insert(name, json!(v));
        Ok(v)
    }

    fn eps(&mut self) -> Result<f64, CliError> {
        self.positive("eps", self.cli.eps)
    }

    fn r(&mut self) -> Result<f64, CliError> {
        self.positive("r", self.cli.r)
    }

    fn big_r(&mut self) -> Result<f64, CliError> {
        self.positive("R", self.cli.big_r)
    }

    fn resolution(&mut self) -> Result<f64, CliError> {
        let r = self.cli.resolution.unwrap_or(1e-6);
        self.positive("resolution", Some(r))
    }

    fn grid(&mut self) -> Result<Vec<f64>, CliError> {
        let g = self.cli.grid.clone().ok_or(CliError::MissingParam("grid"))?;
        if let Some(&e) = g.iter().find(|&&e| !(e > 0.0)) {
            return Err(CliError::NonPositive("grid", e));
        }
        self.params.insert("grid", json!(g));
        Ok(g)
    }

    fn budget(&mut self) -> SearchBudget {
        let b = self.cli.budget.map_or_else(SearchBudget::from_env, SearchBudget::new);
        self.params.insert("budget", json!(b.max_nodes));
        b
    }

    fn inputs(&self, n: usize, expected: &'static str) -> Result<&[PathBuf], CliError> {
        let got = self.cli.inputs.len();
        if got != n {
            return Err(CliError::Inputs { verb: self.cli.verb.name(), expected, got });
        }
        Ok(&self.cli.inputs)
    }
}

fn pair(path: &Path) -> Result<MetricPair, CliError> {
    Ok(io::load_pair(path)?)
}

fn is_tuple_doc(path: &Path) -> Result<bool, CliError> {
    let v: Value = io::read_json(path)?;
    Ok(v.get("chain").is_some())
}

fn tuple(path: &Path) -> Result<MetricTuple, CliError> {
    Ok(io::load_tuple(path)?)
}

fn bracket_result(b: &solver::DistanceBracket, witness: Option<Value>) -> Value {
    let mut v = serde_json::to_value(ResultDoc::from_bracket(b, witness)).expect("serializable");
    v["certificate_lo"] = json!(b.certificate_lo);
    v
}

fn execute(ctx: &mut Ctx<'_>) -> Result<Outcome, CliError> {
    let verb = ctx.cli.verb;
    match verb {
        Verb::Validate => {
            let [p] = ctx.inputs(1, "1")? else { unreachable!() };
            let space = io::load_space(p)?;
            Ok(Outcome::ok(json!({
                "valid": true,
                "points": space.len(),
                "tolerance": space.tolerance(),
                "diameter": space.diameter(),
            })))
        }
        Verb::Hausdorff => {
            let inputs = ctx.cli.inputs.clone();
            match inputs.as_slice() {
                [p, q] => {
                    let (p, q) = (pair(p)?, pair(q)?);
                    if p.space != q.space {
                        return Err(Error::DifferentAmbient { left: p.space.len(), right: q.space.len() }.into());
                    }
                    let d = metric_pairs::hausdorff(&p.space, &p.a, &q.a)?;
                    Ok(Outcome::ok(json!({ "hausdorff": d })))
                }
                [p, q, g] => {
                    let glue = io::load_gluing(g)?;
                    if is_tuple_doc(p)? {
                        let (t, u) = (tuple(p)?, tuple(q)?);
                        let d = metric_pairs::tuple_hausdorff(&glue, &t, &u)?;
                        Ok(Outcome::ok(json!({ "tuple_hausdorff": d })))
                    } else {
                        let (p, q) = (pair(p)?, pair(q)?);
                        let d = metric_pairs::pair_hausdorff(&glue, &p, &q)?;
                        Ok(Outcome::ok(json!({ "pair_hausdorff": d })))
                    }
                }
                _ => Err(CliError::Inputs { verb: verb.name(), expected: "2 or 3", got: inputs.len() }),
            }
        }
        Verb::Gh => {
            let [p, q] = ctx.inputs(2, "2")? else { unreachable!() };
            let (p, q) = (p.clone(), q.clone());
            let res = ctx.resolution()?;
            let budget = ctx.budget();
            let b = if is_tuple_doc(&p)? {
                solver::gh_compact_tuple(&tuple(&p)?, &tuple(&q)?, res, budget)?
            } else {
                solver::gh_compact_pair(&pair(&p)?, &pair(&q)?, res, budget)?
            };
            Ok(Outcome::ok(bracket_result(&b, None)))
        }
        Verb::GhTruncated => {
            let [p, q] = ctx.inputs(2, "2")? else { unreachable!() };
            let (p, q) = (pair(p)?, pair(q)?);
            let res = ctx.resolution()?;
            let budget = ctx.budget();
            let b = solver::gh_truncated_pair(&p, &q, res, budget)?;
            Ok(Outcome::ok(bracket_result(&b, None)))
        }
        Verb::Approx => {
            let [p, q] = ctx.inputs(2, "2")? else { unreachable!() };
            let (p, q) = (pair(p)?, pair(q)?);
            let budget = ctx.budget();
            if ctx.cli.eps.is_some() {
                let eps = ctx.eps()?;
                let found = solver::approx_search(&p, &q, eps, budget)?;
                let ok = found.is_some();
                Ok(Outcome::verdict(json!({ "found": ok, "witness": found }), ok))
            } else {
                let res = ctx.resolution()?;
                let (b, w) = solver::min_approx_eps(&p, &q, res, budget)?;
                let witness = w.map(|w| serde_json::to_value(w).expect("serializable"));
                Ok(Outcome::ok(bracket_result(&b, witness)))
            }
        }
        Verb::RoughIsom => {
            let [p, q] = ctx.inputs(2, "2")? else { unreachable!() };
            let (p, q) = (pair(p)?, pair(q)?);
            let eps = ctx.eps()?;
            let big_r = ctx.big_r()?;
            let budget = ctx.budget();
            let found = solver::rough_isometry_search(&p, &q, big_r, eps, budget)?;
            let clauses = found.as_ref().map(|w| solver::RoughIsometryCheck::evaluate(&p, &q, w)).transpose()?;
            let ok = found.is_some();
            Ok(Outcome::verdict(json!({ "found": ok, "witness": found, "clauses": clauses }), ok))
        }
        Verb::Counts => {
            let [p] = ctx.inputs(1, "1")? else { unreachable!() };
            let p = pair(p)?;
            let target = match ctx.cli.big_r {
                Some(_) => closed_ball(&p.space, &p.a, ctx.big_r()?)?,
                None => p.a.clone(),
            };
            let radii = if ctx.cli.grid.is_some() { ctx.grid()? } else { vec![ctx.r()?] };
            let mut profiles: Vec<CountingProfile> = [CountKind::M, CountKind::N, CountKind::P, CountKind::S]
                .into_iter()
                .map(|kind| CountingProfile { kind, samples: Vec::new() })
                .collect();
            let mut rows = Vec::new();
            for &r in &radii {
                let m = counting::covering_outer(&p.space, &target, r);
                let n = counting::covering_inner(&p.space, &target, r);
                let pk = counting::packing(&p.space, &target, r);
                let s = counting::separation(&p.space, &target, r);
                profiles[0].samples.push((r, m));
                profiles[1].samples.push((r, n));
                profiles[2].samples.push((r, pk));
                if let Some(s) = s {
                    profiles[3].samples.push((r, s));
                }
                rows.push(json!({ "r": r, "M": m, "N": n, "P": pk, "S": s }));
            }
            Ok(Outcome { result: json!({ "set_size": target.len(), "counts": rows }), ok: true, profiles })
        }
        Verb::CertifyFamily => {
            if ctx.cli.inputs.is_empty() {
                return Err(CliError::Inputs { verb: verb.name(), expected: "at least 1", got: 0 });
            }
            let family = ctx.cli.inputs.iter().map(|p| pair(p)).collect::<Result<Vec<_>, _>>()?;
            let grid = ctx.grid()?;
            let (pi, nu) = counting::family_certificate(&family, &grid)?;
            Ok(Outcome {
                result: json!({ "pi": pi, "nu": nu }),
                ok: true,
                profiles: vec![pi, nu],
            })
        }
        Verb::CheckLemma => {
            let [p, q, g] = ctx.inputs(3, "3")? else { unreachable!() };
            let (p, q, glue) = (pair(p)?, pair(q)?, io::load_gluing(g)?);
            let eps = ctx.eps()?;
            let r = ctx.r()?;
            let big_r = ctx.big_r()?;
            let rep = counting::check_count_transfer(&p, &q, &glue, eps, r, big_r)?;
            let ok = rep.verdict();
            Ok(Outcome::verdict(json!({ "verdict": ok, "report": rep }), ok))
        }
        Verb::Glue => {
            let [p, q] = ctx.inputs(2, "2")? else { unreachable!() };
            let (p, q) = (pair(p)?, pair(q)?);
            let eps = ctx.eps()?;
            let budget = ctx.budget();
            let glue = if ctx.cli.big_r.is_some() {
                let big_r = ctx.big_r()?;
                match solver::rough_isometry_search(&p, &q, big_r, eps, budget)? {
                    Some(w) => Some(glue_from_rough_isometry(&p.space, &q.space, &w.f, &p.a, eps, big_r)?),
                    None => None,
                }
            } else {
                match solver::approx_search(&p, &q, eps, budget)? {
                    Some(w) => Some(glue_from_approximation(&p.space, &q.space, &w.f, eps)?),
                    None => None,
                }
            };
            let Some(glue) = glue else {
                return Ok(Outcome::verdict(json!({ "found": false, "gluing": null }), false));
            };
            let adm = check_eps_admissible(&glue, &p.a, &q.a, eps);
            let pair_hd = metric_pairs::pair_hausdorff(&glue, &p, &q)?;
            Ok(Outcome::ok(json!({
                "found": true,
                "gluing": GluingDoc::from_gluing(&glue),
                "pair_hausdorff": pair_hd,
                "admissibility": adm,
            })))
        }
        Verb::Chain => {
            let [c] = ctx.inputs(1, "1")? else { unreachable!() };
            let c = io::load_chain(c)?;
            let res = ctx.resolution()?;
            let budget = ctx.budget();
            let proxy = match chain::limit_proxy(&c) {
                Ok(p) => p,
                Err(Error::EmptyLimit) => {
                    return Ok(Outcome::verdict(json!({ "limit": null, "reason": "no budget-respecting chain" }), false))
                }
                Err(e) => return Err(e.into()),
            };
            let rep = chain::chain_convergence_report(&c, &proxy, res, budget)?;
            let w: Vec<String> = proxy.z_pair.a.labels(&proxy.z_pair.space).into_iter().map(str::to_owned).collect();
            let ok = rep.all_dominated();
            Ok(Outcome::verdict(json!({ "limit": w, "chains": proxy.chains, "report": rep }), ok))
        }
        Verb::Isometry => {
            let [p, q] = ctx.inputs(2, "2")? else { unreachable!() };
            let (p, q) = (pair(p)?, pair(q)?);
            let f = solver::pair_isometry_search(&p, &q);
            let ok = f.is_some();
            Ok(Outcome::verdict(json!({ "isometric": ok, "map": f }), ok))
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn render(cli: &Cli, report: &Value, profiles: &[CountingProfile]) -> String {
    match cli.format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv if !profiles.is_empty() => profiles.iter().map(io::profile_to_csv).collect::<Vec<_>>().join("\n"),
        Format::Csv => {
            let mut out = String::from("key,value\n");
            if let Value::Object(m) = &report["result"] {
                for (k, v) in m {
                    let cell = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("{k},{}\n", csv_escape(&cell)));
                }
            }
            out
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Output { path: path.display().to_string(), message: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn error_payload(e: &CliError) -> Value {
    match e {
        CliError::Core(Error::InvalidMetric(v)) => json!({
            "valid": false,
            "error": e.to_string(),
            "violations": v,
        }),
        _ => json!({ "error": e.to_string() }),
    }
}

/// Runs one command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut ctx = Ctx { cli: &cli, params: BTreeMap::new() };
    if cli.pseudo {
        ctx.params.insert("pseudo", json!(true));
    }
    let outcome = execute(&mut ctx);
    let inputs: Vec<String> = cli.inputs.iter().map(|p| p.display().to_string()).collect();
    let (result, code, profiles) = match outcome {
        Ok(o) => (o.result, if o.ok { EXIT_OK } else { EXIT_FALSE }, o.profiles),
        Err(e) => {
            eprintln!("error: {e}");
            (error_payload(&e), e.exit_code(), Vec::new())
        }
    };
    let report = json!({
        "verb": cli.verb.name(),
        "inputs": inputs,
        "params": ctx.params,
        "anchor": cli.verb.anchor(),
        "result": result,
    });
    if let Err(e) = emit(&cli, &render(&cli, &report, &profiles)) {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    code
}
