//! Executes a problem and builds the JSON report.

use std::sync::Arc;

use compacta::compact::{ball_split, compact_dist, compact_union, is_member, precision_for, sup_inf};
use compacta::maps::{image_compact, LipschitzModulus};
use compacta::sampling::check_soundness;
use compacta::{
    Compact, CReal, EffectiveMap, Error, Extractor, FiniteList, ImageOracle, ModulusImageOracle, Point, Rat,
    SplitResult, TraceEvent, UniformModulus, Verdict,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::problem::{Command, Problem};
use crate::resolve::{self, Compacts, ResolvedFunction};

pub const DEFAULT_BUDGET: u32 = 64;
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Clone, Debug)]
pub struct Options {
    /// Decimal places in rendered reals.
    pub precision: u32,
    pub budget: Option<u32>,
    pub check_soundness: Option<usize>,
    pub seed: Option<u64>,
    pub trace: bool,
}

struct Ctx<'a> {
    problem: &'a Problem,
    opts: &'a Options,
    compacts: Compacts<'a>,
    space: compacta::MetricSpace,
}

pub fn run(problem: &Problem, opts: &Options) -> CliResult<Value> {
    let space = resolve::space(&problem.space)?;
    let ctx = Ctx {
        problem,
        opts,
        compacts: Compacts::new(space, &problem.compacts),
        space,
    };
    if let Some(0) = problem.params.budget {
        return Err(CliError::invalid("/params/budget", "budget must be at least 1"));
    }
    if let Some(0) = problem.params.samples {
        return Err(CliError::invalid("/params/samples", "samples must be at least 1"));
    }
    let result = match problem.command {
        Command::Dist => ctx.dist()?,
        Command::Sup | Command::Inf => ctx.extremum()?,
        Command::Union => ctx.union()?,
        Command::Split => ctx.split()?,
        Command::Image => ctx.image()?,
        Command::Member => ctx.member()?,
        Command::Modulus => ctx.modulus()?,
        Command::Check => ctx.check()?,
    };
    Ok(json!({
        "command": problem.command.name(),
        "space": space.name(),
        "result": result,
    }))
}

/// Decimal rendering with a rigorous error bound, plus the exact value when known.
pub fn real(x: &CReal, digits: u32) -> Value {
    let (decimal, bound) = x.render(digits);
    let mut v = json!({ "decimal": decimal, "error_bound": bound.to_string() });
    if let Some(q) = x.exact() {
        v["exact"] = json!(q.to_string());
    }
    v
}

fn point_json(p: &Point, digits: u32) -> Value {
    match p.exact_coords() {
        Some(cs) => json!(cs.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        None => json!(p.coords().iter().map(|c| c.render(digits).0).collect::<Vec<_>>()),
    }
}

fn list_json(l: &FiniteList, digits: u32) -> Value {
    json!({
        "count": l.len(),
        "points": l.points().iter().map(|p| point_json(p, digits)).collect::<Vec<_>>(),
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::LessThanB => "affirm",
        Verdict::GreaterThanA => "refute",
    }
}

fn trace_json(t: &TraceEvent) -> Value {
    match t {
        TraceEvent::Peak { depth, eps, delta, refinements } => json!({
            "event": "peak", "depth": depth, "eps": eps.to_string(),
            "delta": delta.to_string(), "refinements": refinements,
        }),
        TraceEvent::Induction { depth, level, centers, recursed, delta } => json!({
            "event": "induction", "depth": depth, "level": level, "centers": centers,
            "recursed": recursed, "delta": delta.to_string(),
        }),
        TraceEvent::Anchor { index, delta } => json!({
            "event": "anchor", "index": index, "delta": delta.to_string(),
        }),
    }
}

/// `Π_f` manufactured from the synthesized Lipschitz bound; the only view of
/// the reference modulus that reaches the extractor.
pub fn image_oracle(f: &EffectiveMap, mu: Arc<dyn UniformModulus>) -> Arc<dyn ImageOracle> {
    Arc::new(ModulusImageOracle::new(f.clone(), mu))
}

/// Runs extraction given only the map and its image oracle.
pub fn extract(
    f: &EffectiveMap,
    pi: Arc<dyn ImageOracle>,
    k: &Compact,
    eps: &Rat,
    budget: u32,
) -> (compacta::Result<Rat>, Extractor) {
    let ex = Extractor::new(budget);
    let delta = ex.uniform_modulus(f, pi, k, eps);
    (delta, ex)
}

impl Ctx<'_> {
    fn params(&self) -> &crate::problem::Params {
        &self.problem.params
    }

    fn digits(&self) -> u32 {
        self.opts.precision
    }

    fn budget(&self) -> u32 {
        self.opts.budget.or(self.params().budget).unwrap_or(DEFAULT_BUDGET)
    }

    fn seed(&self) -> u64 {
        self.opts.seed.or(self.params().seed).unwrap_or(0)
    }

    fn a(&self) -> CliResult<Compact> {
        self.compacts.named("a", self.params().a.as_ref())
    }

    fn b(&self) -> CliResult<Compact> {
        let name = self
            .params()
            .b
            .as_ref()
            .ok_or_else(|| CliError::invalid("/params/b", "this command needs a second compact `b`"))?;
        self.compacts.named("b", Some(name))
    }

    fn required_positive(&self, key: &str, value: Option<&String>) -> CliResult<Rat> {
        let s = value.ok_or_else(|| CliError::invalid(format!("/params/{key}"), format!("this command needs `{key}`")))?;
        resolve::positive(&format!("/params/{key}"), s)
    }

    fn optional_positive(&self, key: &str, value: Option<&String>, default: Rat) -> CliResult<Rat> {
        match value {
            Some(s) => resolve::positive(&format!("/params/{key}"), s),
            None => Ok(default),
        }
    }

    fn x(&self) -> CliResult<Point> {
        let spec = self
            .params()
            .x
            .as_ref()
            .ok_or_else(|| CliError::invalid("/params/x", "this command needs a point `x`"))?;
        resolve::point(self.space, "/params/x", spec)
    }

    fn function(&self) -> CliResult<ResolvedFunction> {
        resolve::function(self.space, self.problem.function.as_ref())
    }

    /// Net used to display a compact, at resolution `tol` (default 2^-10).
    fn net_json(&self, k: &Compact) -> CliResult<Value> {
        let tol = self.optional_positive("tol", self.params().tol.as_ref(), Rat::pow2(-10))?;
        let mut v = list_json(&k.net(precision_for(&tol)), self.digits());
        v["resolution"] = json!(tol.to_string());
        Ok(v)
    }

    fn dist(&self) -> CliResult<Value> {
        let d = compact_dist(&self.a()?, &self.b()?)?;
        Ok(json!({ "distance": real(&d, self.digits()) }))
    }

    fn extremum(&self) -> CliResult<Value> {
        if self.space != compacta::MetricSpace::RealLine {
            return Err(CliError::invalid("/space", "sup and inf need the space \"R\""));
        }
        let (sup, inf) = sup_inf(&self.a()?)?;
        Ok(match self.problem.command {
            Command::Sup => json!({ "sup": real(&sup, self.digits()) }),
            _ => json!({ "inf": real(&inf, self.digits()) }),
        })
    }

    fn union(&self) -> CliResult<Value> {
        let u = compact_union(&self.a()?, &self.b()?)?;
        Ok(json!({ "net": self.net_json(&u)? }))
    }

    fn split(&self) -> CliResult<Value> {
        let eps = self.required_positive("eps", self.params().eps.as_ref())?;
        match ball_split(&self.a()?, &self.x()?, &eps) {
            Ok(SplitResult::Miss) => Ok(json!({ "outcome": "miss" })),
            Ok(SplitResult::Piece(p)) => Ok(json!({ "outcome": "piece", "net": self.net_json(&p)? })),
            Err(Error::EmptyPiece) => Ok(json!({ "outcome": "empty_piece" })),
            Err(e) => Err(e.into()),
        }
    }

    fn image(&self) -> CliResult<Value> {
        let f = self.function()?;
        let img = image_compact(&f.map, Arc::new(LipschitzModulus(f.lipschitz.clone())), &self.a()?)?;
        let mut v = json!({
            "function": f.text,
            "lipschitz_bound": f.lipschitz.to_string(),
            "net": self.net_json(&img)?,
        });
        if f.map.codomain() == compacta::MetricSpace::RealLine {
            let (sup, inf) = sup_inf(&img)?;
            v["sup"] = real(&sup, self.digits());
            v["inf"] = real(&inf, self.digits());
        }
        Ok(v)
    }

    fn member(&self) -> CliResult<Value> {
        let tol = self.required_positive("tol", self.params().tol.as_ref())?;
        let v = is_member(&self.x()?, &self.a()?, &tol)?;
        Ok(json!({ "verdict": verdict_name(v), "tol": tol.to_string() }))
    }

    fn modulus(&self) -> CliResult<Value> {
        let f = self.function()?;
        let k = self.a()?;
        let eps = self.required_positive("eps", self.params().eps.as_ref())?;
        let budget = self.budget();
        let pi = image_oracle(&f.map, Arc::new(LipschitzModulus(f.lipschitz.clone())));
        let (delta, ex) = extract(&f.map, pi, &k, &eps, budget);
        let delta = delta?;
        let mut v = json!({
            "function": f.text,
            "eps": eps.to_string(),
            "delta": delta.to_string(),
            "delta_decimal": real(&CReal::from_rat(delta.clone()), self.digits()),
            "budget": budget,
            "refinements": ex.refinements(),
        });
        if self.opts.trace {
            v["trace"] = json!(ex.trace().iter().map(trace_json).collect::<Vec<_>>());
        }
        if let Some(n) = self.opts.check_soundness {
            if n == 0 {
                return Err(CliError::invalid("/params/samples", "--check-soundness needs at least 1 sample"));
            }
            v["soundness"] = self.soundness(&f, &k, &delta, &eps, n)?;
        }
        Ok(v)
    }

    fn soundness(&self, f: &ResolvedFunction, k: &Compact, delta: &Rat, eps: &Rat, n: usize) -> CliResult<Value> {
        let seed = self.seed();
        let r = check_soundness(&f.map, k, delta, eps, &Rat::pow2(-20), n, seed, self.budget())?;
        Ok(json!({
            "samples": r.pairs,
            "distinct_pairs": r.distinct_pairs,
            "violations": r.violations,
            "seed": seed,
            "slack": Rat::pow2(-20).to_string(),
        }))
    }

    fn check(&self) -> CliResult<Value> {
        let f = self.function()?;
        let k = self.a()?;
        let eps = self.required_positive("eps", self.params().eps.as_ref())?;
        let (delta, source) = match &self.params().delta {
            Some(s) => (resolve::positive("/params/delta", s)?, "given"),
            None => {
                let pi = image_oracle(&f.map, Arc::new(LipschitzModulus(f.lipschitz.clone())));
                (extract(&f.map, pi, &k, &eps, self.budget()).0?, "extracted")
            }
        };
        let n = self.opts.check_soundness.or(self.params().samples).unwrap_or(DEFAULT_SAMPLES);
        let mut v = self.soundness(&f, &k, &delta, &eps, n)?;
        v["delta"] = json!(delta.to_string());
        v["delta_source"] = json!(source);
        v["eps"] = json!(eps.to_string());
        Ok(v)
    }
}
