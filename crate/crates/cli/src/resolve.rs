//! Turns a parsed problem into library objects, reporting failures by JSON pointer.

use std::collections::BTreeMap;

use compacta::compact::compact_union;
use compacta::metric::grid_net;
use compacta::{Compact, EffectiveMap, FiniteList, MetricSpace, Point, Rat};

use crate::error::{CliError, CliResult};
use crate::expr::{self, Term};
use crate::problem::{CompactSpec, FnExpr, FnNode, FunctionSpec, PointSpec, SpaceSpec};

/// Largest grid accepted from `net_of_box`.
const MAX_GRID_POINTS: u64 = 1_000_000;

pub fn rat(pointer: &str, s: &str) -> CliResult<Rat> {
    s.parse()
        .map_err(|_| CliError::invalid(pointer, format!("{s:?} is not a rational such as \"3\" or \"-7/2\"")))
}

pub fn positive(pointer: &str, s: &str) -> CliResult<Rat> {
    let q = rat(pointer, s)?;
    if !q.is_positive() {
        return Err(CliError::invalid(pointer, format!("must be positive, got {q}")));
    }
    Ok(q)
}

pub fn space(spec: &SpaceSpec) -> CliResult<MetricSpace> {
    match spec {
        SpaceSpec::Named(name) if name == "R" => Ok(MetricSpace::RealLine),
        SpaceSpec::Named(name) => Err(CliError::invalid("/space", format!("unknown space {name:?}; use \"R\" or {{\"Rn\": d}}"))),
        SpaceSpec::Box { dim } if *dim >= 1 => Ok(MetricSpace::SupBox(*dim)),
        SpaceSpec::Box { .. } => Err(CliError::invalid("/space/Rn", "dimension must be at least 1")),
    }
}

pub fn point(space: MetricSpace, pointer: &str, spec: &PointSpec) -> CliResult<Point> {
    let coords: Vec<Rat> = match spec {
        PointSpec::Scalar(s) => vec![rat(pointer, s)?],
        PointSpec::Coords(cs) => cs
            .iter()
            .enumerate()
            .map(|(i, s)| rat(&format!("{pointer}/{i}"), s))
            .collect::<CliResult<_>>()?,
    };
    if coords.len() != space.dim() {
        return Err(CliError::invalid(
            pointer,
            format!("point has {} coordinates, space {} needs {}", coords.len(), space.name(), space.dim()),
        ));
    }
    Ok(Point::from_rats(&coords))
}

pub struct Compacts<'a> {
    space: MetricSpace,
    specs: &'a BTreeMap<String, CompactSpec>,
}

impl<'a> Compacts<'a> {
    pub fn new(space: MetricSpace, specs: &'a BTreeMap<String, CompactSpec>) -> Self {
        Compacts { space, specs }
    }

    /// The compact named by a parameter, or the only compact when the parameter is absent.
    pub fn named(&self, param: &str, name: Option<&String>) -> CliResult<Compact> {
        let pointer = format!("/params/{param}");
        let name = match name {
            Some(n) => n.clone(),
            None if self.specs.len() == 1 => self.specs.keys().next().expect("one entry").clone(),
            None => {
                return Err(CliError::invalid(
                    pointer,
                    format!("name the compact for `{param}` (defined: {:?})", self.specs.keys().collect::<Vec<_>>()),
                ))
            }
        };
        if !self.specs.contains_key(&name) {
            return Err(CliError::invalid(pointer, format!("no compact named {name:?}")));
        }
        self.resolve_name(&name, 0)
    }

    fn resolve_name(&self, name: &str, depth: usize) -> CliResult<Compact> {
        let spec = &self.specs[name];
        self.build(&format!("/compacts/{}", escape(name)), spec, depth)
    }

    fn build(&self, pointer: &str, spec: &CompactSpec, depth: usize) -> CliResult<Compact> {
        match spec {
            CompactSpec::Points(ps) => {
                if ps.is_empty() {
                    return Err(CliError::invalid(format!("{pointer}/points"), "a compact needs at least one point"));
                }
                let points = ps
                    .iter()
                    .enumerate()
                    .map(|(i, p)| point(self.space, &format!("{pointer}/points/{i}"), p))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(Compact::of_list(FiniteList::new(self.space, points)?))
            }
            CompactSpec::NetOfBox { bounds, spacing } => {
                let base = format!("{pointer}/net_of_box");
                let spacing = positive(&format!("{base}/spacing"), spacing)?;
                if bounds.len() != self.space.dim() {
                    return Err(CliError::invalid(
                        format!("{base}/box"),
                        format!("box has {} intervals, space {} needs {}", bounds.len(), self.space.name(), self.space.dim()),
                    ));
                }
                let mut parsed = Vec::new();
                let mut total: u64 = 1;
                for (i, (lo, hi)) in bounds.iter().enumerate() {
                    let lo = rat(&format!("{base}/box/{i}/0"), lo)?;
                    let hi = rat(&format!("{base}/box/{i}/1"), hi)?;
                    if lo > hi {
                        return Err(CliError::invalid(format!("{base}/box/{i}"), "interval endpoints out of order"));
                    }
                    let steps = (&(&hi - &lo) / &spacing).floor();
                    let per_axis: u64 = u64::try_from(steps).unwrap_or(u64::MAX).saturating_add(2);
                    total = total.saturating_mul(per_axis);
                    parsed.push((lo, hi));
                }
                if total > MAX_GRID_POINTS {
                    return Err(CliError::invalid(
                        format!("{base}/spacing"),
                        format!("grid would exceed {MAX_GRID_POINTS} points"),
                    ));
                }
                Ok(Compact::of_list(grid_net(self.space, &parsed, &spacing)?))
            }
            CompactSpec::Union(parts) => {
                if parts.is_empty() {
                    return Err(CliError::invalid(format!("{pointer}/union"), "union of no compacts"));
                }
                let mut acc: Option<Compact> = None;
                for (i, part) in parts.iter().enumerate() {
                    let c = self.build(&format!("{pointer}/union/{i}"), part, depth)?;
                    acc = Some(match acc {
                        None => c,
                        Some(a) => compact_union(&a, &c)?,
                    });
                }
                Ok(acc.expect("nonempty union"))
            }
            CompactSpec::Ref(name) => {
                if !self.specs.contains_key(name) {
                    return Err(CliError::invalid(format!("{pointer}/ref"), format!("no compact named {name:?}")));
                }
                if depth > self.specs.len() {
                    return Err(CliError::invalid(format!("{pointer}/ref"), "compact references form a cycle"));
                }
                self.resolve_name(name, depth + 1)
            }
        }
    }
}

/// JSON-pointer escaping of a key.
fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

/// A map from `space` with its synthesized Lipschitz bound.
pub struct ResolvedFunction {
    pub map: EffectiveMap,
    pub lipschitz: Rat,
    pub text: String,
}

pub fn function(space: MetricSpace, spec: Option<&FunctionSpec>) -> CliResult<ResolvedFunction> {
    let spec = spec.ok_or_else(|| CliError::invalid("/function", "this command needs a function"))?;
    let terms: Vec<Term> = match spec {
        FunctionSpec::Single(e) => vec![term("/function", e)?],
        FunctionSpec::Components(es) => {
            if es.is_empty() {
                return Err(CliError::invalid("/function", "a map needs at least one component"));
            }
            es.iter()
                .enumerate()
                .map(|(i, e)| term(&format!("/function/{i}"), e))
                .collect::<CliResult<_>>()?
        }
    };
    for (i, t) in terms.iter().enumerate() {
        if let Some(v) = t.max_var() {
            if v >= space.dim() {
                let pointer = match spec {
                    FunctionSpec::Single(_) => "/function".to_string(),
                    FunctionSpec::Components(_) => format!("/function/{i}"),
                };
                return Err(CliError::invalid(
                    pointer,
                    format!("uses coordinate {v}, but {} has dimension {}", space.name(), space.dim()),
                ));
            }
        }
    }
    let codomain = if terms.len() == 1 {
        MetricSpace::RealLine
    } else {
        MetricSpace::SupBox(terms.len())
    };
    let lipschitz = terms.iter().map(Term::lipschitz).max().expect("nonempty");
    let text = terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
    let map = EffectiveMap::new(space, codomain, move |p| Point::new(terms.iter().map(|t| t.eval(p)).collect()));
    Ok(ResolvedFunction { map, lipschitz, text })
}

fn term(pointer: &str, e: &FnExpr) -> CliResult<Term> {
    match e {
        FnExpr::Text(s) => expr::parse(s).map_err(|m| CliError::invalid(pointer, m)),
        FnExpr::Node(node) => {
            let b = |tag: &str, i: usize, x: &FnExpr| term(&format!("{pointer}/{tag}/{i}"), x).map(Box::new);
            Ok(match node.as_ref() {
                FnNode::Var(i) => Term::Var(*i),
                FnNode::Const(s) => Term::Const(rat(&format!("{pointer}/const"), s)?),
                FnNode::Add(x, y) => Term::Add(b("add", 0, x)?, b("add", 1, y)?),
                FnNode::Sub(x, y) => Term::Sub(b("sub", 0, x)?, b("sub", 1, y)?),
                FnNode::Min(x, y) => Term::Min(b("min", 0, x)?, b("min", 1, y)?),
                FnNode::Max(x, y) => Term::Max(b("max", 0, x)?, b("max", 1, y)?),
                FnNode::Neg(x) => Term::Neg(Box::new(term(&format!("{pointer}/neg"), x)?)),
                FnNode::Abs(x) => Term::Abs(Box::new(term(&format!("{pointer}/abs"), x)?)),
                FnNode::Scale(q, x) => Term::Scale(rat(&format!("{pointer}/scale/0"), q)?, b("scale", 1, x)?),
                FnNode::DistTo(cs) => Term::DistTo(
                    cs.iter()
                        .enumerate()
                        .map(|(i, s)| rat(&format!("{pointer}/dist_to/{i}"), s))
                        .collect::<CliResult<_>>()?,
                ),
            })
        }
    }
}
