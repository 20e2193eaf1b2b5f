//! Nonempty compacts: regular Cauchy sequences of finite lists under the
//! Hausdorff metric, with union, majorization, membership, point selection,
//! ball splitting and sup/inf over the real line.
//!
//! A compact built from a single list keeps that list as its net at every
//! precision. Operations detect such compacts and answer from the list
//! directly; the answers satisfy the same contracts as the general path.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::arith::{approx_compare, positive_margin, CReal, Rat, Verdict};
use crate::error::{Error, Result};
use crate::list::{directed_exact, list_hausdorff, FiniteList};
use crate::metric::{MetricSpace, Point};

type NetFn = dyn Fn(i64) -> FiniteList + Send + Sync;

#[derive(Clone)]
pub struct Compact(Arc<CompactInner>);

struct CompactInner {
    space: MetricSpace,
    net: NetRepr,
}

enum NetRepr {
    Fixed(FiniteList),
    Oracle {
        net: Box<NetFn>,
        memo: Mutex<HashMap<i64, FiniteList>>,
    },
}

#[derive(Clone, Debug)]
pub enum SplitResult {
    /// No member of the compact lies within `ε` of the center.
    Miss,
    /// A sub-compact holding every member within `ε` of the center and
    /// contained in the `2ε`-ball around it.
    Piece(Compact),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    First,
    Second,
}

/// Smallest `j` with `2^-j <= r`, for `r > 0`.
pub fn precision_for(r: &Rat) -> i64 {
    -r.floor_log2()
}

fn half(r: &Rat) -> Rat {
    r / Rat::from(2)
}

fn require_positive(what: &str, r: &Rat) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} must be positive, got {r}")))
    }
}

impl Compact {
    pub fn of_list(list: FiniteList) -> Self {
        Compact(Arc::new(CompactInner {
            space: list.space(),
            net: NetRepr::Fixed(list),
        }))
    }

    pub fn of_point(space: MetricSpace, p: Point) -> Result<Self> {
        Ok(Self::of_list(FiniteList::singleton(space, p)?))
    }

    /// Wraps a net oracle. The caller promises
    /// `h(net(n), net(m)) <= 2^-n + 2^-m` and that every list lies in `space`.
    pub fn from_net<F>(space: MetricSpace, net: F) -> Self
    where
        F: Fn(i64) -> FiniteList + Send + Sync + 'static,
    {
        Compact(Arc::new(CompactInner {
            space,
            net: NetRepr::Oracle {
                net: Box::new(net),
                memo: Mutex::new(HashMap::new()),
            },
        }))
    }

    pub fn space(&self) -> MetricSpace {
        self.0.space
    }

    /// A list within Hausdorff distance `2^-n` of this compact.
    pub fn net(&self, n: i64) -> FiniteList {
        match &self.0.net {
            NetRepr::Fixed(l) => l.clone(),
            NetRepr::Oracle { net, memo } => {
                if let Some(l) = memo.lock().expect("memo poisoned").get(&n) {
                    return l.clone();
                }
                let l = net(n);
                memo.lock()
                    .expect("memo poisoned")
                    .entry(n)
                    .or_insert(l)
                    .clone()
            }
        }
    }

    /// The generating list when this compact was built from one list.
    pub fn fixed(&self) -> Option<&FiniteList> {
        match &self.0.net {
            NetRepr::Fixed(l) => Some(l),
            NetRepr::Oracle { .. } => None,
        }
    }

    pub fn ptr_eq(&self, other: &Compact) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl fmt::Debug for Compact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fixed() {
            Some(l) => write!(f, "Compact::of_list({l:?})"),
            None => write!(f, "Compact::from_net({})", self.space().name()),
        }
    }
}

/// Distance in the completed space of compacts.
pub fn compact_dist(a: &Compact, b: &Compact) -> Result<CReal> {
    a.space().check_same(&b.space())?;
    if let (Some(la), Some(lb)) = (a.fixed(), b.fixed()) {
        return list_hausdorff(la, lb);
    }
    let (a, b) = (a.clone(), b.clone());
    Ok(CReal::from_oracle(move |n| {
        list_hausdorff(&a.net(n + 2), &b.net(n + 2))
            .expect("spaces checked")
            .approx(n + 2)
            .round_dyadic(n + 2)
    }))
}

/// Union of two compacts; nets are concatenated.
pub fn compact_union(a: &Compact, b: &Compact) -> Result<Compact> {
    a.space().check_same(&b.space())?;
    if let (Some(la), Some(lb)) = (a.fixed(), b.fixed()) {
        return Ok(Compact::of_list(la.concat(lb)?));
    }
    let (a2, b2) = (a.clone(), b.clone());
    Ok(Compact::from_net(a.space(), move |n| {
        a2.net(n).concat(&b2.net(n)).expect("spaces checked")
    }))
}

/// Union of several compacts with exact duplicates removed from the nets.
pub fn compact_union_all(parts: &[Compact]) -> Result<Compact> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Precondition("union of no compacts".into()))?;
    for p in parts {
        first.space().check_same(&p.space())?;
    }
    let lists: Option<Vec<FiniteList>> = parts.iter().map(|p| p.fixed().cloned()).collect();
    if let Some(lists) = lists {
        return Ok(Compact::of_list(FiniteList::concat_all(&lists)?.dedup_exact()));
    }
    let parts = parts.to_vec();
    Ok(Compact::from_net(first.space(), move |n| {
        let nets: Vec<FiniteList> = parts.iter().map(|p| p.net(n)).collect();
        FiniteList::concat_all(&nets)
            .expect("spaces checked")
            .dedup_exact()
    }))
}

/// Decides `K′ ≤ K` at resolution `tol`: `GreaterThanA` refutes at `tol/2`,
/// `LessThanB` affirms at `tol`.
pub fn majorizes(sub: &Compact, k: &Compact, tol: &Rat) -> Result<Verdict> {
    require_positive("tolerance", tol)?;
    sub.space().check_same(&k.space())?;
    let defect = match (sub.fixed(), k.fixed()) {
        (Some(ls), Some(lk)) => match (ls.exact(), lk.exact()) {
            // h(K′ ∪ K, K) is the directed distance from K′ to K
            (Some(is), Some(ik)) => CReal::from_rat(directed_exact(is, ik)),
            _ => compact_dist(&compact_union(sub, k)?, k)?,
        },
        _ => compact_dist(&compact_union(sub, k)?, k)?,
    };
    approx_compare(&defect, &half(tol), tol)
}

pub fn is_member(x: &Point, k: &Compact, tol: &Rat) -> Result<Verdict> {
    k.space().check_point(x)?;
    majorizes(&Compact::of_point(k.space(), x.clone())?, k, tol)
}

/// An index `k` with `ρ(x, ζ_k) < ε`, for `x` a member of a compact within `ε` of `ζ`.
pub fn nearest_index(x: &Point, k: &Compact, zeta: &FiniteList, eps: &Rat, budget: u32) -> Result<usize> {
    require_positive("ε", eps)?;
    k.space().check_same(&zeta.space())?;
    k.space().check_point(x)?;
    let space = zeta.space();
    let not_found = || {
        Error::BudgetExceeded(format!(
            "no list index verified within {eps} after {budget} refinements"
        ))
    };
    if let (Some(ix), Some(xc)) = (zeta.exact(), x.exact_coords()) {
        if ix.nearest(&xc).1 >= *eps {
            return Err(not_found());
        }
    }
    for t in 1..=budget as i64 {
        let g = eps * &Rat::pow2(-t);
        let a = eps - &g;
        match (zeta.exact(), x.exact_coords()) {
            (Some(ix), Some(xc)) => {
                let mid = eps - &half(&g);
                if let Some(i) = ix.first_within(&xc, &mid) {
                    return Ok(i);
                }
            }
            _ => {
                for (i, p) in zeta.points().iter().enumerate() {
                    if approx_compare(&space.dist(x, p), &a, eps)? == Verdict::LessThanB {
                        return Ok(i);
                    }
                }
            }
        }
    }
    Err(not_found())
}

/// Lowest index of `list` whose distance to `target` gets the `LessThanB`
/// verdict against the band `(a, b)`.
fn first_in_band(list: &FiniteList, target: &Point, a: &Rat, b: &Rat) -> Result<Option<usize>> {
    if let (Some(ix), Some(tc)) = (list.exact(), target.exact_coords()) {
        if a >= b {
            return Err(Error::Precondition(format!("empty band ({a}, {b})")));
        }
        return Ok(ix.first_within(&tc, &half(&(a + b))));
    }
    let space = list.space();
    for (i, p) in list.points().iter().enumerate() {
        if approx_compare(&space.dist(target, p), a, b)? == Verdict::LessThanB {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// A member of `K` within `ε` of `ζ_idx`, given `ρ(K, ζ) < ε`.
pub fn select_point(k: &Compact, zeta: &FiniteList, idx: usize, eps: &Rat, budget: u32) -> Result<Point> {
    require_positive("ε", eps)?;
    k.space().check_same(&zeta.space())?;
    if idx >= zeta.len() {
        return Err(Error::Precondition(format!(
            "index {idx} out of range for a list of length {}",
            zeta.len()
        )));
    }
    let target = zeta.get(idx).clone();
    if let Some(l) = k.fixed() {
        if l.ptr_eq(zeta) {
            return Ok(target);
        }
        if let (Some(il), Some(tc)) = (l.exact(), target.exact_coords()) {
            if il.nearest(&tc).1.is_zero() {
                return Ok(target);
            }
        }
    }
    let rho = compact_dist(k, &Compact::of_list(zeta.clone()))?;
    let slack = CReal::from_rat(eps.clone()).sub(&rho);
    let gap = positive_margin(&slack, &Rat::zero(), budget)
        .map_err(|_| Error::BudgetExceeded(format!("could not certify ρ(K, ζ) < {eps}")))?;
    // 2^{-m+1} < gap
    let m = 2 - gap.floor_log2();
    let a1 = eps - &gap + Rat::pow2(-m - 2);
    let b1 = eps - &Rat::pow2(-m);
    let first_net = k.net(m + 2);
    let x1 = match first_in_band(&first_net, &target, &a1, &b1)? {
        Some(i) => first_net.get(i).clone(),
        None => {
            return Err(Error::BudgetExceeded(format!(
                "no net point near the selected list point at precision {}",
                m + 2
            )))
        }
    };
    if k.fixed().is_some() {
        return Ok(x1);
    }
    let space = k.space();
    let chain = Arc::new(Chain {
        k: k.clone(),
        m,
        points: Mutex::new(vec![x1]),
    });
    // p_j = x_{max(1, j - m + 1)} is regular: ρ(p_j, p_{j+1}) <= 2^{-j-1}
    Ok(space.limit(move |j| chain.get((j - m + 1).max(1))))
}

/// The chain `x_1, x_2, ...` with `x_l` in `net(m + l + 1)` and
/// `ρ(x_l, x_{l+1}) < 2^{-m-l}`.
struct Chain {
    k: Compact,
    m: i64,
    points: Mutex<Vec<Point>>,
}

impl Chain {
    fn get(&self, l: i64) -> Point {
        let l = l as usize;
        let mut points = self.points.lock().expect("chain poisoned");
        while points.len() < l {
            let cur = points.len() as i64;
            let prev = points.last().expect("chain starts nonempty").clone();
            let net = self.k.net(self.m + cur + 2);
            let a = Rat::from(6) * Rat::pow2(-self.m - cur - 3);
            let b = Rat::pow2(-self.m - cur);
            let next = match first_in_band(&net, &prev, &a, &b).expect("band is nonempty") {
                Some(i) => net.get(i).clone(),
                // unreachable for a regular net; stay put rather than fail inside an oracle
                None => prev,
            };
            points.push(next);
        }
        points[l - 1].clone()
    }
}

/// Given a member `x` of `K₁ ∪ K₂`, a point within `ε` of `x` that is a
/// member of one of the two compacts, tagged with which.
pub fn component_select(
    x: &Point,
    k1: &Compact,
    k2: &Compact,
    eps: &Rat,
    budget: u32,
) -> Result<(Component, Point)> {
    require_positive("ε", eps)?;
    let union = compact_union(k1, k2)?;
    let quarter = eps / Rat::from(4);
    let j = precision_for(&quarter);
    let (n1, n2) = (k1.net(j), k2.net(j));
    let theta = n1.concat(&n2)?;
    let half_eps = half(eps);
    let i = nearest_index(x, &union, &theta, &half_eps, budget)?;
    if i < n1.len() {
        Ok((Component::First, select_point(k1, &n1, i, &half_eps, budget)?))
    } else {
        Ok((
            Component::Second,
            select_point(k2, &n2, i - n1.len(), &half_eps, budget)?,
        ))
    }
}

/// Splits `K` against the ball of radius `ε` around `x`.
pub fn ball_split(k: &Compact, x: &Point, eps: &Rat) -> Result<SplitResult> {
    require_positive("ε", eps)?;
    k.space().check_point(x)?;
    let space = k.space();
    let lo = eps * &Rat::new(5, 4)?;
    let hi = eps * &Rat::new(3, 2)?;
    let stage1_net = k.net(precision_for(&(eps / Rat::from(32))));
    let kept: Vec<usize> = match (stage1_net.exact(), x.exact_coords()) {
        (Some(ix), Some(xc)) => ix.within(&xc, &half(&(&lo + &hi))),
        _ => {
            let mut kept = Vec::new();
            for (i, p) in stage1_net.points().iter().enumerate() {
                if approx_compare(&space.dist(p, x), &lo, &hi)? == Verdict::LessThanB {
                    kept.push(i);
                }
            }
            kept
        }
    };
    if kept.is_empty() {
        return Ok(SplitResult::Miss);
    }
    let stage1 = stage1_net.sublist(&kept)?;
    if k.fixed().is_some() {
        return Ok(SplitResult::Piece(Compact::of_list(stage1)));
    }
    let stages = Arc::new(Stages {
        k: k.clone(),
        eps: eps.clone(),
        lists: Mutex::new(vec![stage1]),
    });
    if stages.compute(2).is_none() {
        return Err(Error::EmptyPiece);
    }
    let shift = eps.ceil_log2() - 1;
    Ok(SplitResult::Piece(Compact::from_net(space, move |n| {
        stages.get((n + shift).max(1))
    })))
}

/// Filter stages of a ball piece; stage `s` lies within `2^{-s-1}ε` of the piece.
struct Stages {
    k: Compact,
    eps: Rat,
    lists: Mutex<Vec<FiniteList>>,
}

impl Stages {
    /// Stage `s`, or `None` when filtering emptied it.
    fn compute(&self, s: i64) -> Option<FiniteList> {
        let s = s as usize;
        let mut lists = self.lists.lock().expect("stages poisoned");
        while lists.len() < s {
            let t = lists.len() as i64 + 1;
            let prev = lists.last().expect("stage 1 present").clone();
            let net = self.k.net(precision_for(&(&self.eps * &Rat::pow2(-t - 4))));
            let a = &self.eps * &Rat::pow2(-t - 2);
            let b = &self.eps * &Rat::pow2(-t - 1);
            let kept: Vec<usize> = match (net.exact(), prev.exact()) {
                (Some(ix), Some(ip)) => {
                    let mid = half(&(&a + &b));
                    (0..net.len())
                        .filter(|&i| ip.nearest(ix.coords(i)).1 <= mid)
                        .collect()
                }
                _ => {
                    let space = net.space();
                    (0..net.len())
                        .filter(|&i| {
                            prev.points().iter().any(|q| {
                                approx_compare(&space.dist(net.get(i), q), &a, &b)
                                    .expect("band is nonempty")
                                    == Verdict::LessThanB
                            })
                        })
                        .collect()
                }
            };
            if kept.is_empty() {
                return None;
            }
            lists.push(net.sublist(&kept).expect("nonempty"));
        }
        Some(lists[s - 1].clone())
    }

    fn get(&self, s: i64) -> FiniteList {
        // an empty later stage only arises from an irregular net; keep the last good one
        let mut s = s;
        loop {
            if let Some(l) = self.compute(s) {
                return l;
            }
            s -= 1;
        }
    }
}

fn real_value(p: &Point) -> &CReal {
    p.coord(0)
}

/// `(sup, inf)` of the members of a compact on the real line.
pub fn sup_inf(k: &Compact) -> Result<(CReal, CReal)> {
    if k.space() != MetricSpace::RealLine {
        return Err(Error::WrongSpace(k.space().name()));
    }
    if let Some(l) = k.fixed() {
        if let Some(ix) = l.exact() {
            let vals = (0..l.len()).map(|i| ix.coords(i)[0].clone());
            let sup = vals.clone().max().expect("nonempty");
            let inf = vals.min().expect("nonempty");
            return Ok((CReal::from_rat(sup), CReal::from_rat(inf)));
        }
        let values: Vec<CReal> = l.points().iter().map(|p| real_value(p).clone()).collect();
        let sup = values[1..].iter().fold(values[0].clone(), |acc, v| acc.max(v));
        let inf = values[1..].iter().fold(values[0].clone(), |acc, v| acc.min(v));
        return Ok((sup, inf));
    }
    let (ks, ki) = (k.clone(), k.clone());
    let sup = CReal::from_oracle(move |n| {
        ks.net(n + 1)
            .points()
            .iter()
            .map(|p| real_value(p).approx(n + 2))
            .max()
            .expect("nonempty")
    });
    let inf = CReal::from_oracle(move |n| {
        ki.net(n + 1)
            .points()
            .iter()
            .map(|p| real_value(p).approx(n + 2))
            .min()
            .expect("nonempty")
    });
    Ok((sup, inf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::grid_net;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn reals(xs: &[&str]) -> Compact {
        Compact::of_list(
            FiniteList::new(
                MetricSpace::RealLine,
                xs.iter().map(|x| Point::real(q(x))).collect(),
            )
            .unwrap(),
        )
    }

    fn pt(x: &str) -> Point {
        Point::real(q(x))
    }

    fn value(p: &Point) -> Rat {
        p.coord(0).approx(40)
    }

    /// The unit interval as a genuine limit of grid nets.
    fn unit_interval() -> Compact {
        Compact::from_net(MetricSpace::RealLine, |n| {
            grid_net(
                MetricSpace::RealLine,
                &[(Rat::zero(), Rat::one())],
                &Rat::pow2(-(n.max(0) + 1)),
            )
            .unwrap()
        })
    }

    fn close(x: &CReal, v: &str, n: i64) -> bool {
        (x.approx(n) - q(v)).abs() <= Rat::pow2(-n)
    }

    #[test]
    fn list_compact_examples() {
        let k = reals(&["0"]);
        assert_eq!(k.net(7).len(), 1);
        let (s, i) = sup_inf(&reals(&["0", "1"])).unwrap();
        assert_eq!((s.exact().unwrap(), i.exact().unwrap()), (&q("1"), &q("0")));
        for tol in ["1", "1/1024", "1/1000000"] {
            assert_eq!(
                is_member(&pt("5/7"), &reals(&["5/7"]), &q(tol)).unwrap(),
                Verdict::LessThanB
            );
        }
    }

    #[test]
    fn distance_examples() {
        let k = reals(&["0"]);
        assert!(close(&compact_dist(&k, &k).unwrap(), "0", 20));
        let d = compact_dist(&reals(&["0", "1"]), &reals(&["1/2"])).unwrap();
        assert!(close(&d, "1/2", 20));
        let u = unit_interval();
        assert!(close(&compact_dist(&u, &u).unwrap(), "0", 12));
        let d = compact_dist(&u, &reals(&["1/2"])).unwrap();
        assert!(close(&d, "1/2", 12));
    }

    #[test]
    fn union_examples() {
        let u = compact_union(&reals(&["0"]), &reals(&["1"])).unwrap();
        assert!(close(&compact_dist(&u, &reals(&["0", "1"])).unwrap(), "0", 20));
        let i = unit_interval();
        let uu = compact_union(&i, &i).unwrap();
        assert!(close(&compact_dist(&uu, &i).unwrap(), "0", 10));
        assert!(compact_union(
            &reals(&["0"]),
            &Compact::of_list(FiniteList::from_rats(MetricSpace::SupBox(2), &[vec![q("0"), q("0")]]).unwrap())
        )
        .is_err());
    }

    #[test]
    fn majorization_examples() {
        let t = q("1/4");
        assert_eq!(majorizes(&reals(&["0"]), &reals(&["0", "1"]), &t).unwrap(), Verdict::LessThanB);
        assert_eq!(majorizes(&reals(&["0", "1"]), &reals(&["0"]), &t).unwrap(), Verdict::GreaterThanA);
        let i = unit_interval();
        assert_eq!(majorizes(&i, &i, &q("1/64")).unwrap(), Verdict::LessThanB);
        assert!(majorizes(&i, &i, &q("0")).is_err());
        let k = reals(&["0", "1"]);
        assert_eq!(is_member(&pt("0"), &k, &q("1/8")).unwrap(), Verdict::LessThanB);
        assert_eq!(is_member(&pt("5"), &k, &q("1/8")).unwrap(), Verdict::GreaterThanA);
    }

    #[test]
    fn nearest_index_examples() {
        let zeta = FiniteList::new(MetricSpace::RealLine, vec![pt("0"), pt("9/10")]).unwrap();
        assert_eq!(nearest_index(&pt("1"), &reals(&["0", "1"]), &zeta, &q("1/5"), 64).unwrap(), 1);
        let single = FiniteList::new(MetricSpace::RealLine, vec![pt("0")]).unwrap();
        assert_eq!(nearest_index(&pt("0"), &reals(&["0"]), &single, &q("1/1000"), 64).unwrap(), 0);
        let two = FiniteList::new(MetricSpace::RealLine, vec![pt("0"), pt("1")]).unwrap();
        assert_eq!(nearest_index(&pt("0"), &reals(&["0", "1"]), &two, &q("1/2"), 64).unwrap(), 0);
        assert!(matches!(
            nearest_index(&pt("3"), &reals(&["0", "1"]), &two, &q("1/2"), 64),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn select_point_examples() {
        let k = reals(&["2/3"]);
        let zeta = k.fixed().unwrap().clone();
        assert_eq!(value(&select_point(&k, &zeta, 0, &q("1/8"), 64).unwrap()), q("2/3"));

        let k = reals(&["0", "1"]);
        let zeta = FiniteList::new(MetricSpace::RealLine, vec![pt("1/10")]).unwrap();
        let x = select_point(&k, &zeta, 0, &q("1"), 64).unwrap();
        assert_eq!(value(&x), q("0"));
        assert_eq!(is_member(&x, &k, &Rat::pow2(-20)).unwrap(), Verdict::LessThanB);
    }

    #[test]
    fn select_point_through_a_limit() {
        let k = unit_interval();
        let zeta = FiniteList::new(MetricSpace::RealLine, vec![pt("0"), pt("1/3"), pt("2/3"), pt("1")]).unwrap();
        let eps = q("1/4");
        for idx in 0..4 {
            let x = select_point(&k, &zeta, idx, &eps, 64).unwrap();
            assert!(x.coord(0).exact().is_none());
            let d = MetricSpace::RealLine.dist(&x, zeta.get(idx));
            assert_eq!(approx_compare(&d, &(&eps - &Rat::pow2(-8)), &eps).unwrap(), Verdict::LessThanB);
            assert_eq!(is_member(&x, &k, &Rat::pow2(-8)).unwrap(), Verdict::LessThanB);
        }
        let far = FiniteList::new(MetricSpace::RealLine, vec![pt("5")]).unwrap();
        assert!(select_point(&k, &far, 0, &q("1"), 16).is_err());
    }

    #[test]
    fn component_examples() {
        let (k1, k2) = (reals(&["0"]), reals(&["5"]));
        let eps = q("1/10");
        let (tag, x) = component_select(&pt("0"), &k1, &k2, &eps, 64).unwrap();
        assert_eq!((tag, value(&x)), (Component::First, q("0")));
        let (tag, x) = component_select(&pt("5"), &k1, &k2, &eps, 64).unwrap();
        assert_eq!((tag, value(&x)), (Component::Second, q("5")));
        let (_, x) = component_select(&pt("0"), &k1, &k1, &eps, 64).unwrap();
        assert_eq!(value(&x), q("0"));
        let i = unit_interval();
        let (tag, x) = component_select(&pt("3/10"), &i, &k2, &eps, 64).unwrap();
        assert_eq!(tag, Component::First);
        assert!((x.coord(0).approx(12) - q("3/10")).abs() < eps);
    }

    fn unit_grid() -> Compact {
        Compact::of_list(grid_net(MetricSpace::RealLine, &[(q("0"), q("1"))], &q("1/64")).unwrap())
    }

    #[test]
    fn split_examples() {
        let k = unit_grid();
        assert!(matches!(ball_split(&k, &pt("3"), &q("1/4")).unwrap(), SplitResult::Miss));
        let SplitResult::Piece(p) = ball_split(&k, &pt("1/2"), &q("2")).unwrap() else {
            panic!("expected a piece")
        };
        assert!(close(&compact_dist(&p, &k).unwrap(), "0", 20));
        let SplitResult::Piece(p) = ball_split(&k, &pt("1/2"), &q("1/4")).unwrap() else {
            panic!("expected a piece")
        };
        let (s, i) = sup_inf(&p).unwrap();
        assert!(s.approx(20) >= q("3/4") && s.approx(20) <= q("1"));
        assert!(i.approx(20) <= q("1/4") && i.approx(20) >= q("0"));
        assert!(ball_split(&k, &pt("0"), &q("0")).is_err());
    }

    #[test]
    fn split_of_a_limit_compact() {
        let k = unit_interval();
        assert!(matches!(ball_split(&k, &pt("3"), &q("1/4")).unwrap(), SplitResult::Miss));
        let SplitResult::Piece(p) = ball_split(&k, &pt("1/2"), &q("1/4")).unwrap() else {
            panic!("expected a piece")
        };
        for n in 0..8 {
            for m in 0..8 {
                let h = list_hausdorff(&p.net(n), &p.net(m)).unwrap().approx(30);
                assert!(h <= Rat::pow2(-n) + Rat::pow2(-m));
            }
        }
        assert_eq!(majorizes(&p, &k, &q("1/64")).unwrap(), Verdict::LessThanB);
        for y in ["1/4", "3/10", "1/2", "7/10", "3/4"] {
            assert_eq!(is_member(&pt(y), &p, &q("1/64")).unwrap(), Verdict::LessThanB);
        }
        let (s, i) = sup_inf(&p).unwrap();
        assert!(s.approx(10) <= q("1") + Rat::pow2(-9));
        assert!(i.approx(10) >= q("0") - Rat::pow2(-9));
    }

    #[test]
    fn sup_inf_examples() {
        let (s, i) = sup_inf(&reals(&["-1", "1/2", "2"])).unwrap();
        assert_eq!((s.exact().unwrap(), i.exact().unwrap()), (&q("2"), &q("-1")));
        let (s, i) = sup_inf(&unit_interval()).unwrap();
        assert!(close(&s, "1", 16) && close(&i, "0", 16));
        let (s, i) = sup_inf(&reals(&["3/7"])).unwrap();
        assert_eq!((s.exact().unwrap(), i.exact().unwrap()), (&q("3/7"), &q("3/7")));
        let plane = Compact::of_list(FiniteList::from_rats(MetricSpace::SupBox(2), &[vec![q("0"), q("0")]]).unwrap());
        assert!(matches!(sup_inf(&plane), Err(Error::WrongSpace(_))));
    }
}
