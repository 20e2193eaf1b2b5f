//! Computable metric spaces: the real line and sup-metric boxes `R^d`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::arith::{CReal, Rat};
use crate::error::{Error, Result};
use crate::list::FiniteList;

/// A complete computable metric space.
///
/// `SupBox(d)` is `R^d` under the sup metric; `SupBox(1)` is isometric to
/// `RealLine` but is a distinct space for compatibility checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetricSpace {
    RealLine,
    SupBox(usize),
}

/// A point given by its coordinates; opaque to generic code.
#[derive(Clone)]
pub struct Point(Arc<[CReal]>);

impl Point {
    pub fn new(coords: Vec<CReal>) -> Self {
        Point(coords.into())
    }

    pub fn from_rats(coords: &[Rat]) -> Self {
        Point(coords.iter().cloned().map(CReal::from_rat).collect())
    }

    pub fn real(x: Rat) -> Self {
        Point::from_rats(&[x])
    }

    pub fn coords(&self) -> &[CReal] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> &CReal {
        &self.0[i]
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exact_coords(&self) -> Option<Vec<Rat>> {
        self.0.iter().map(|c| c.exact().cloned()).collect()
    }

    pub fn ptr_eq(&self, other: &Point) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl MetricSpace {
    pub fn real_line() -> Self {
        MetricSpace::RealLine
    }

    pub fn real_box_space(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Precondition("box dimension must be at least 1".into()));
        }
        Ok(MetricSpace::SupBox(d))
    }

    pub fn dim(&self) -> usize {
        match self {
            MetricSpace::RealLine => 1,
            MetricSpace::SupBox(d) => *d,
        }
    }

    pub fn name(&self) -> String {
        match self {
            MetricSpace::RealLine => "R".into(),
            MetricSpace::SupBox(d) => format!("R^{d}"),
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "point of dimension {} used in {}",
                p.dim(),
                self.name()
            )))
        }
    }

    pub fn check_same(&self, other: &MetricSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: self.name(),
                right: other.name(),
            })
        }
    }

    /// Sup-metric distance. Both points must belong to this space.
    pub fn dist(&self, p: &Point, q: &Point) -> CReal {
        debug_assert_eq!(p.dim(), self.dim());
        debug_assert_eq!(q.dim(), self.dim());
        if let (Some(a), Some(b)) = (p.exact_coords(), q.exact_coords()) {
            return CReal::from_rat(exact_dist(&a, &b));
        }
        let (p, q) = (p.clone(), q.clone());
        CReal::from_oracle(move |n| {
            p.coords()
                .iter()
                .zip(q.coords())
                .map(|(x, y)| (x.approx(n + 2) - y.approx(n + 2)).abs())
                .max()
                .expect("points have at least one coordinate")
                .round_dyadic(n + 2)
        })
    }

    /// Limit of a regular sequence: `dist(seq(k), seq(k + 1)) <= 2^-k-1` for `k >= 0`.
    pub fn limit<F>(&self, seq: F) -> Point
    where
        F: Fn(i64) -> Point + Send + Sync + 'static,
    {
        let dim = self.dim();
        let shared = Arc::new(MemoSeq {
            seq: Box::new(seq),
            memo: Mutex::new(HashMap::new()),
        });
        let coords = (0..dim)
            .map(|i| {
                let s = Arc::clone(&shared);
                CReal::from_oracle(move |n| {
                    let k = (n + 1).max(0);
                    s.get(k).coord(i).approx(n + 1)
                })
            })
            .collect();
        Point::new(coords)
    }
}

struct MemoSeq {
    seq: Box<dyn Fn(i64) -> Point + Send + Sync>,
    memo: Mutex<HashMap<i64, Point>>,
}

impl MemoSeq {
    fn get(&self, k: i64) -> Point {
        if let Some(p) = self.memo.lock().expect("memo poisoned").get(&k) {
            return p.clone();
        }
        let p = (self.seq)(k);
        self.memo
            .lock()
            .expect("memo poisoned")
            .entry(k)
            .or_insert(p)
            .clone()
    }
}

/// Exact sup distance between coordinate vectors.
pub fn exact_dist(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// All grid points of a box at the given spacing, per axis `lo, lo + s, ...`
/// with `hi` appended when the progression misses it.
pub fn grid_net(space: MetricSpace, bounds: &[(Rat, Rat)], spacing: &Rat) -> Result<FiniteList> {
    if bounds.is_empty() {
        return Err(Error::Precondition("empty box description".into()));
    }
    if bounds.len() != space.dim() {
        return Err(Error::Precondition(format!(
            "box has {} intervals but {} has dimension {}",
            bounds.len(),
            space.name(),
            space.dim()
        )));
    }
    if !spacing.is_positive() {
        return Err(Error::Precondition(format!("spacing must be positive, got {spacing}")));
    }
    let axes = bounds
        .iter()
        .map(|(lo, hi)| {
            if lo > hi {
                return Err(Error::Precondition(format!("empty interval [{lo}, {hi}]")));
            }
            let mut ticks = Vec::new();
            let mut t = lo.clone();
            while &t <= hi {
                ticks.push(t.clone());
                t = t + spacing;
            }
            if ticks.last() != Some(hi) {
                ticks.push(hi.clone());
            }
            Ok(ticks)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut points = vec![Vec::new()];
    for ticks in &axes {
        points = points
            .into_iter()
            .flat_map(|prefix: Vec<Rat>| {
                ticks.iter().map(move |t| {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    p
                })
            })
            .collect();
    }
    FiniteList::new(space, points.iter().map(|c| Point::from_rats(c)).collect())
}
