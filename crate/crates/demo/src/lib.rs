//! Browser bindings for a few `compacta` operations.
//!
//! Every exported function takes plain text and returns a JSON string. The
//! `*_report` functions hold the logic and run natively as well.

use std::sync::Arc;

use compacta::catalog::CatalogMap;
use compacta::compact::{ball_split, compact_dist};
use compacta::metric::exact_dist;
use compacta::{Compact, CReal, Extractor, FiniteList, MetricSpace, Point, Rat, SplitResult};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Digits shown for reals that are not exact.
const DIGITS: u32 = 12;
const BUDGET: u32 = 64;
/// Largest point list accepted from the page.
const MAX_POINTS: usize = 4000;

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error("line {line}: {message}")]
    Input { line: usize, message: String },
    #[error("{0}")]
    Field(String),
    #[error(transparent)]
    Core(#[from] compacta::Error),
}

pub type DemoResult<T> = Result<T, DemoError>;

/// Parses `p`, `p/q` or a decimal such as `-0.125`.
pub fn parse_number(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let int = match int {
            "" | "+" | "-" => format!("{int}0"),
            _ => int.to_string(),
        };
        let whole: Rat = int.parse().ok()?;
        let part: Rat = format!("{frac}/1{}", "0".repeat(frac.len())).parse().ok()?;
        return Some(if int.starts_with('-') { whole - part } else { whole + part });
    }
    s.parse().ok()
}

fn field(name: &str, s: &str) -> DemoResult<Rat> {
    parse_number(s).ok_or_else(|| DemoError::Field(format!("{name}: {s:?} is not a number")))
}

fn positive(name: &str, s: &str) -> DemoResult<Rat> {
    let q = field(name, s)?;
    if !q.is_positive() {
        return Err(DemoError::Field(format!("{name} must be positive")));
    }
    Ok(q)
}

/// One point per line, coordinates split by spaces or commas. All points
/// share the dimension of the first; blank lines and `#` comments are skipped.
pub fn parse_points(text: &str) -> DemoResult<FiniteList> {
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| DemoError::Input { line: i + 1, message };
        let coords = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| parse_number(t).ok_or_else(|| bad(format!("{t:?} is not a number"))))
            .collect::<DemoResult<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != coords.len() {
                return Err(bad(format!("expected {} coordinates, found {}", first.len(), coords.len())));
            }
        }
        rows.push(coords);
        if rows.len() > MAX_POINTS {
            return Err(bad(format!("at most {MAX_POINTS} points")));
        }
    }
    let dim = rows.first().map(Vec::len).ok_or_else(|| DemoError::Field("no points given".into()))?;
    let space = if dim == 1 { MetricSpace::RealLine } else { MetricSpace::SupBox(dim) };
    Ok(FiniteList::from_rats(space, &rows)?)
}

fn real(x: &CReal) -> Value {
    let (decimal, bound) = x.render(DIGITS);
    match x.exact() {
        Some(q) => json!({ "decimal": decimal, "exact": q.to_string() }),
        None => json!({ "decimal": decimal, "error_bound": bound.to_string() }),
    }
}

fn coords(p: &Point) -> Value {
    json!(p.coords().iter().map(|c| c.approx(40).to_f64()).collect::<Vec<_>>())
}

/// Hausdorff distance between two point lists.
pub fn hausdorff_report(a: &str, b: &str) -> DemoResult<Value> {
    let a = parse_points(a)?;
    let b = parse_points(b)?;
    let d = compact_dist(&Compact::of_list(a), &Compact::of_list(b))?;
    Ok(json!({ "distance": real(&d) }))
}

/// Splits a point list around `center` at radius `eps`.
pub fn split_report(points: &str, center: &str, eps: &str) -> DemoResult<Value> {
    let list = parse_points(points)?;
    let space = list.space();
    let center = parse_points(center)?;
    if center.len() != 1 || center.space() != space {
        return Err(DemoError::Field(format!("the center must be one point of {}", space.name())));
    }
    let eps = positive("eps", eps)?;
    let all: Vec<Value> = list.points().iter().map(coords).collect();
    let k = Compact::of_list(list);
    Ok(match ball_split(&k, center.get(0), &eps) {
        Ok(SplitResult::Miss) => json!({ "outcome": "miss", "points": all }),
        Ok(SplitResult::Piece(piece)) => {
            let kept: Vec<Value> = piece.fixed().map(|l| l.points().iter().map(coords).collect()).unwrap_or_default();
            json!({ "outcome": "piece", "points": all, "piece": kept })
        }
        Err(compacta::Error::EmptyPiece) => json!({ "outcome": "empty_piece", "points": all }),
        Err(e) => return Err(e.into()),
    })
}

fn catalog_map(name: &str) -> DemoResult<CatalogMap> {
    CatalogMap::ALL
        .into_iter()
        .find(|m| m.name() == name)
        .ok_or_else(|| DemoError::Field(format!("unknown map {name:?}")))
}

/// Smallest distance between two points whose images are more than `eps`
/// apart; any sound `δ` is at most this.
fn largest_sound_radius(list: &FiniteList, values: &[Rat], eps: &Rat) -> Option<Rat> {
    let index = list.exact().expect("parsed points are exact");
    let mut best: Option<Rat> = None;
    for i in 0..list.len() {
        for j in 0..i {
            if (&values[i] - &values[j]).abs() > *eps {
                let d = exact_dist(index.coords(i), index.coords(j));
                best = Some(best.map_or(d.clone(), |b| b.min(d)));
            }
        }
    }
    best
}

/// Extracts a modulus of a catalog map at `eps` on a point list, then checks
/// it against every pair of points.
pub fn modulus_report(map: &str, points: &str, eps: &str) -> DemoResult<Value> {
    let map = catalog_map(map)?;
    let list = parse_points(points)?;
    let eps = positive("eps", eps)?;
    let space = list.space();
    let r = list
        .points()
        .iter()
        .map(|p| p.coord(0).exact().expect("parsed points are exact").abs())
        .max()
        .unwrap_or_else(Rat::one)
        .max(Rat::one());
    let values: Vec<Rat> = list
        .points()
        .iter()
        .map(|p| map.eval(p.coord(0)).exact().expect("catalog maps keep rationals exact").clone())
        .collect();
    let f = map.map(space);
    let pi = Arc::new(map.image_oracle(space, &r));
    let ex = Extractor::new(BUDGET);
    let delta = ex.uniform_modulus(&f, pi, &Compact::of_list(list.clone()), &eps)?;
    let bound = largest_sound_radius(&list, &values, &eps);
    let sound = bound.as_ref().is_none_or(|b| delta <= *b);
    Ok(json!({
        "map": map.name(),
        "delta": delta.to_string(),
        "delta_decimal": delta.to_decimal(8),
        "refinements": ex.refinements(),
        "largest_sound_radius": bound.map(|b| b.to_string()),
        "sound": sound,
    }))
}

fn to_js(r: DemoResult<Value>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn hausdorff(a: &str, b: &str) -> Result<String, JsError> {
    to_js(hausdorff_report(a, b))
}

#[wasm_bindgen]
pub fn split(points: &str, center: &str, eps: &str) -> Result<String, JsError> {
    to_js(split_report(points, center, eps))
}

#[wasm_bindgen]
pub fn modulus(map: &str, points: &str, eps: &str) -> Result<String, JsError> {
    to_js(modulus_report(map, points, eps))
}

/// Names accepted by [`modulus`], as a JSON array.
#[wasm_bindgen]
pub fn catalog() -> String {
    json!(CatalogMap::ALL.iter().map(|m| m.name()).collect::<Vec<_>>()).to_string()
}
