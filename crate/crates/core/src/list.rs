//! Nonempty finite point lists and the Hausdorff distance between them.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;

use crate::arith::{approx_compare, CReal, Rat, Verdict};
use crate::error::{Error, Result};
use crate::metric::{exact_dist, MetricSpace, Point};

/// A nonempty ordered list of points of one space. Duplicates are kept.
#[derive(Clone)]
pub struct FiniteList(Arc<ListInner>);

struct ListInner {
    space: MetricSpace,
    points: Vec<Point>,
    index: OnceLock<Option<ExactIndex>>,
}

/// Lookup structure over a list whose points all have rational coordinates.
pub struct ExactIndex {
    coords: Vec<Vec<Rat>>,
    /// Point indices sorted by first coordinate, ties by index.
    order: Vec<usize>,
}

impl FiniteList {
    pub fn new(space: MetricSpace, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Precondition("point lists must be nonempty".into()));
        }
        for p in &points {
            space.check_point(p)?;
        }
        Ok(Self::new_unchecked(space, points))
    }

    pub(crate) fn new_unchecked(space: MetricSpace, points: Vec<Point>) -> Self {
        debug_assert!(!points.is_empty());
        FiniteList(Arc::new(ListInner {
            space,
            points,
            index: OnceLock::new(),
        }))
    }

    pub fn singleton(space: MetricSpace, p: Point) -> Result<Self> {
        Self::new(space, vec![p])
    }

    pub fn from_rats(space: MetricSpace, coords: &[Vec<Rat>]) -> Result<Self> {
        Self::new(space, coords.iter().map(|c| Point::from_rats(c)).collect())
    }

    pub fn space(&self) -> MetricSpace {
        self.0.space
    }

    pub fn points(&self) -> &[Point] {
        &self.0.points
    }

    pub fn get(&self, k: usize) -> &Point {
        &self.0.points[k]
    }

    pub fn len(&self) -> usize {
        self.0.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ptr_eq(&self, other: &FiniteList) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Index over the rational coordinates, when every point is exact.
    pub fn exact(&self) -> Option<&ExactIndex> {
        self.0
            .index
            .get_or_init(|| ExactIndex::build(&self.0.points))
            .as_ref()
    }

    pub fn sublist(&self, indices: &[usize]) -> Result<Self> {
        Self::new(
            self.space(),
            indices.iter().map(|&i| self.get(i).clone()).collect(),
        )
    }

    /// Concatenation `ζ ⋅ η`, order and duplicates preserved.
    pub fn concat(&self, other: &FiniteList) -> Result<Self> {
        self.space().check_same(&other.space())?;
        let mut points = self.points().to_vec();
        points.extend_from_slice(other.points());
        Ok(Self::new_unchecked(self.space(), points))
    }

    pub fn concat_all(lists: &[FiniteList]) -> Result<Self> {
        let first = lists
            .first()
            .ok_or_else(|| Error::Precondition("nothing to concatenate".into()))?;
        let mut points = Vec::new();
        for l in lists {
            first.space().check_same(&l.space())?;
            points.extend_from_slice(l.points());
        }
        Ok(Self::new_unchecked(first.space(), points))
    }

    /// Drops later copies of exactly equal rational points. Lists with
    /// non-rational points are returned unchanged.
    pub fn dedup_exact(&self) -> Self {
        let Some(ix) = self.exact() else {
            return self.clone();
        };
        let mut seen = HashSet::new();
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| seen.insert(&ix.coords[i]))
            .collect();
        if keep.len() == self.len() {
            return self.clone();
        }
        self.sublist(&keep).expect("nonempty sublist")
    }

    /// A sublist such that every point lies strictly within `r` of a kept one.
    pub fn thin(&self, r: &Rat) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Precondition(format!("thinning radius must be positive, got {r}")));
        }
        let keep: Vec<usize> = match self.exact() {
            Some(ix) => {
                let mut cells: HashSet<Vec<BigInt>> = HashSet::new();
                (0..self.len())
                    .filter(|&i| cells.insert(ix.coords[i].iter().map(|c| (c / r).floor()).collect()))
                    .collect()
            }
            None => {
                let half = r / Rat::from(2);
                let space = self.space();
                let mut kept: Vec<usize> = Vec::new();
                for i in 0..self.len() {
                    let mut covered = false;
                    for &k in &kept {
                        let d = space.dist(self.get(i), self.get(k));
                        if approx_compare(&d, &half, r)? == Verdict::LessThanB {
                            covered = true;
                            break;
                        }
                    }
                    if !covered {
                        kept.push(i);
                    }
                }
                kept
            }
        };
        if keep.len() == self.len() {
            return Ok(self.clone());
        }
        self.sublist(&keep)
    }

    pub fn map_points<F>(&self, space: MetricSpace, f: F) -> Result<Self>
    where
        F: FnMut(&Point) -> Point,
    {
        Self::new(space, self.points().iter().map(f).collect())
    }
}

impl fmt::Debug for FiniteList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.points()).finish()
    }
}

impl ExactIndex {
    fn build(points: &[Point]) -> Option<Self> {
        let coords: Vec<Vec<Rat>> = points
            .iter()
            .map(Point::exact_coords)
            .collect::<Option<_>>()?;
        Some(Self::from_coords(coords))
    }

    fn from_coords(coords: Vec<Vec<Rat>>) -> Self {
        let mut order: Vec<usize> = (0..coords.len()).collect();
        order.sort_by(|&i, &j| coords[i][0].cmp(&coords[j][0]).then(i.cmp(&j)));
        ExactIndex { coords, order }
    }

    pub fn coords(&self, k: usize) -> &[Rat] {
        &self.coords[k]
    }

    fn key(&self, slot: usize) -> &Rat {
        &self.coords[self.order[slot]][0]
    }

    fn lower_slot(&self, v: &Rat) -> usize {
        self.order.partition_point(|&i| &self.coords[i][0] < v)
    }

    /// Index and distance of the nearest point; ties go to the lowest index.
    pub fn nearest(&self, q: &[Rat]) -> (usize, Rat) {
        let start = self.lower_slot(&q[0]);
        let mut best: Option<(usize, Rat)> = None;
        let consider = |slot: usize, best: &mut Option<(usize, Rat)>| -> bool {
            let gap = (self.key(slot) - &q[0]).abs();
            if let Some((_, bd)) = best {
                if gap > *bd {
                    return false;
                }
            }
            let i = self.order[slot];
            let d = exact_dist(&self.coords[i], q);
            let better = match best {
                None => true,
                Some((bi, bd)) => d < *bd || (d == *bd && i < *bi),
            };
            if better {
                *best = Some((i, d));
            }
            true
        };
        for slot in start..self.order.len() {
            if !consider(slot, &mut best) {
                break;
            }
        }
        for slot in (0..start).rev() {
            if !consider(slot, &mut best) {
                break;
            }
        }
        best.expect("index is nonempty")
    }

    /// Indices, ascending, of points at distance at most `r` from `q`.
    pub fn within(&self, q: &[Rat], r: &Rat) -> Vec<usize> {
        let lo = self.lower_slot(&(&q[0] - r));
        let hi_key = &q[0] + r;
        let mut out: Vec<usize> = self.order[lo..]
            .iter()
            .take_while(|&&i| self.coords[i][0] <= hi_key)
            .copied()
            .filter(|&i| exact_dist(&self.coords[i], q) <= *r)
            .collect();
        out.sort_unstable();
        out
    }

    /// Lowest index among points at distance at most `r` from `q`.
    pub fn first_within(&self, q: &[Rat], r: &Rat) -> Option<usize> {
        self.within(q, r).first().copied()
    }
}

/// `sup_{p in a} inf_{q in b} ρ(p, q)` on exact lists.
pub fn directed_exact(a: &ExactIndex, b: &ExactIndex) -> Rat {
    let mut memo: HashMap<&[Rat], Rat> = HashMap::new();
    a.coords
        .iter()
        .map(|p| {
            memo.entry(p.as_slice())
                .or_insert_with(|| b.nearest(p).1)
                .clone()
        })
        .max()
        .expect("nonempty list")
}

/// The Hausdorff distance between two lists of one space.
pub fn list_hausdorff(a: &FiniteList, b: &FiniteList) -> Result<CReal> {
    a.space().check_same(&b.space())?;
    if let (Some(ia), Some(ib)) = (a.exact(), b.exact()) {
        let d = directed_exact(ia, ib).max(directed_exact(ib, ia));
        return Ok(CReal::from_rat(d));
    }
    let (a, b) = (a.clone(), b.clone());
    Ok(CReal::from_oracle(move |n| {
        // each pairwise distance is good to 2^-n, and max/min keep that bound
        let p = n;
        let approx = |l: &FiniteList| -> ExactIndex {
            ExactIndex::from_coords(
                l.points()
                    .iter()
                    .map(|pt| {
                        pt.coords()
                            .iter()
                            .map(|c| c.approx(p + 2).round_dyadic(p + 2))
                            .collect()
                    })
                    .collect(),
            )
        };
        let (xa, xb) = (approx(&a), approx(&b));
        directed_exact(&xa, &xb).max(directed_exact(&xb, &xa))
    }))
}
