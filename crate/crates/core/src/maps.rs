//! Everywhere-defined maps, uniform moduli and image-compact oracles.

use std::fmt;
use std::sync::Arc;

use crate::arith::{approx_compare, Rat, Verdict};
use crate::compact::{precision_for, select_point, Compact};
use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Point};

type ApplyFn = dyn Fn(&Point) -> Point + Send + Sync;

/// A total map between two spaces, given by a point oracle.
#[derive(Clone)]
pub struct EffectiveMap {
    domain: MetricSpace,
    codomain: MetricSpace,
    apply: Arc<ApplyFn>,
}

impl EffectiveMap {
    pub fn new<F>(domain: MetricSpace, codomain: MetricSpace, apply: F) -> Self
    where
        F: Fn(&Point) -> Point + Send + Sync + 'static,
    {
        EffectiveMap {
            domain,
            codomain,
            apply: Arc::new(apply),
        }
    }

    pub fn domain(&self) -> MetricSpace {
        self.domain
    }

    pub fn codomain(&self) -> MetricSpace {
        self.codomain
    }

    pub fn apply(&self, x: &Point) -> Point {
        (self.apply)(x)
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &EffectiveMap) -> Result<EffectiveMap> {
        self.codomain.check_same(&outer.domain)?;
        let (inner, outer_f) = (self.clone(), outer.clone());
        Ok(EffectiveMap::new(self.domain, outer.codomain, move |x| {
            outer_f.apply(&inner.apply(x))
        }))
    }
}

impl fmt::Debug for EffectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EffectiveMap({} -> {})", self.domain.name(), self.codomain.name())
    }
}

/// `δ(K, ε)`: members of `K` closer than `δ` have images closer than `ε`.
pub trait UniformModulus: Send + Sync {
    fn delta(&self, k: &Compact, eps: &Rat) -> Rat;
}

impl<F> UniformModulus for F
where
    F: Fn(&Compact, &Rat) -> Rat + Send + Sync,
{
    fn delta(&self, k: &Compact, eps: &Rat) -> Rat {
        self(k, eps)
    }
}

/// `δ = ε / L` for an `L`-Lipschitz map; `L = 0` gives `δ = 1`.
#[derive(Clone, Debug)]
pub struct LipschitzModulus(pub Rat);

impl UniformModulus for LipschitzModulus {
    fn delta(&self, _k: &Compact, eps: &Rat) -> Rat {
        if self.0.is_zero() {
            Rat::one()
        } else {
            eps / &self.0
        }
    }
}

/// The image operator `Π_f` on compacts, for a map `f` that preserves precompactness.
pub trait ImageOracle: Send + Sync {
    fn image(&self, k: &Compact) -> Result<Compact>;
}

/// The compact whose members are the closure of `f(𝔐(K))`, built from a
/// sound modulus for `f`.
///
/// Net `n` is the pointwise image of `net_K(m)` with `2·2^-m <= μ(K, 2^-n-1)`.
pub fn image_compact(f: &EffectiveMap, mu: Arc<dyn UniformModulus>, k: &Compact) -> Result<Compact> {
    k.space().check_same(&f.domain())?;
    let codomain = f.codomain();
    if let Some(l) = k.fixed() {
        return Ok(Compact::of_list(l.map_points(codomain, |p| f.apply(p))?));
    }
    let probe = mu.delta(k, &Rat::new(1, 2)?);
    if !probe.is_positive() {
        return Err(Error::Precondition(format!("modulus returned non-positive δ = {probe}")));
    }
    let (f, k2) = (f.clone(), k.clone());
    Ok(Compact::from_net(codomain, move |n| {
        let delta = mu.delta(&k2, &Rat::pow2(-n - 1));
        assert!(delta.is_positive(), "modulus returned non-positive δ = {delta}");
        let m = precision_for(&(delta / Rat::from(2)));
        k2.net(m)
            .map_points(codomain, |p| f.apply(p))
            .expect("image points lie in the codomain")
    }))
}

/// `Π_f` manufactured from `f` and a sound modulus via [`image_compact`].
#[derive(Clone)]
pub struct ModulusImageOracle {
    f: EffectiveMap,
    mu: Arc<dyn UniformModulus>,
}

impl ModulusImageOracle {
    pub fn new(f: EffectiveMap, mu: Arc<dyn UniformModulus>) -> Self {
        ModulusImageOracle { f, mu }
    }
}

impl ImageOracle for ModulusImageOracle {
    fn image(&self, k: &Compact) -> Result<Compact> {
        image_compact(&self.f, Arc::clone(&self.mu), k)
    }
}

/// A member `x` of `K` with `ρ(f(x), y) < ε`, for `y` in the closure of `f(𝔐(K))`.
///
/// Tries the members selected near each net point at precisions `1..=budget`
/// and accepts the first whose image verifies against the band `(3ε/4, ε)`.
pub fn find_point_near_value(
    f: &EffectiveMap,
    k: &Compact,
    y: &Point,
    eps: &Rat,
    budget: u32,
) -> Result<Point> {
    if !eps.is_positive() {
        return Err(Error::Precondition(format!("ε must be positive, got {eps}")));
    }
    k.space().check_same(&f.domain())?;
    f.codomain().check_point(y)?;
    let a = eps * &Rat::new(3, 4)?;
    // every net of a list compact is the list itself, so one pass decides
    let passes = if k.fixed().is_some() { 1 } else { budget as i64 };
    for j in 1..=passes {
        let net = k.net(j);
        let radius = Rat::pow2(-j + 1);
        for idx in 0..net.len() {
            let x = select_point(k, &net, idx, &radius, budget)?;
            let d = f.codomain().dist(&f.apply(&x), y);
            if approx_compare(&d, &a, eps)? == Verdict::LessThanB {
                return Ok(x);
            }
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no member with image within {eps} of the target after {passes} passes"
    )))
}

/// `y ↦ ρ(y, anchor)`, a 1-Lipschitz map into the real line.
pub fn distance_functional(space: MetricSpace, anchor: Point) -> Result<EffectiveMap> {
    space.check_point(&anchor)?;
    Ok(EffectiveMap::new(space, MetricSpace::RealLine, move |y| {
        Point::new(vec![space.dist(y, &anchor)])
    }))
}

/// The modulus `δ(K, ε) = ε` of a 1-Lipschitz map.
pub fn identity_modulus() -> Arc<dyn UniformModulus> {
    Arc::new(LipschitzModulus(Rat::one()))
}

/// `Π_{φ∘f}` from `Π_f` and a 1-Lipschitz `φ`.
#[derive(Clone)]
pub struct DerivedImageOracle {
    phi: EffectiveMap,
    inner: Arc<dyn ImageOracle>,
}

pub fn derive_image_oracle(phi: EffectiveMap, inner: Arc<dyn ImageOracle>) -> DerivedImageOracle {
    DerivedImageOracle { phi, inner }
}

impl ImageOracle for DerivedImageOracle {
    fn image(&self, k: &Compact) -> Result<Compact> {
        image_compact(&self.phi, identity_modulus(), &self.inner.image(k)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CReal;
    use crate::compact::{compact_dist, is_member, sup_inf};
    use crate::list::FiniteList;
    use crate::metric::grid_net;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn r() -> MetricSpace {
        MetricSpace::RealLine
    }

    fn grid01() -> Compact {
        Compact::of_list(grid_net(r(), &[(q("0"), q("1"))], &q("1/64")).unwrap())
    }

    fn unit_interval() -> Compact {
        Compact::from_net(r(), |n| {
            grid_net(r(), &[(Rat::zero(), Rat::one())], &Rat::pow2(-(n.max(0) + 1))).unwrap()
        })
    }

    fn identity() -> EffectiveMap {
        EffectiveMap::new(r(), r(), |x| x.clone())
    }

    fn constant(c: &str) -> EffectiveMap {
        let c = q(c);
        EffectiveMap::new(r(), r(), move |_| Point::real(c.clone()))
    }

    fn double() -> EffectiveMap {
        EffectiveMap::new(r(), r(), |x| Point::new(vec![x.coord(0).scale(&Rat::from(2))]))
    }

    fn near(x: &CReal, v: &str, n: i64) -> bool {
        (x.approx(n) - q(v)).abs() <= Rat::pow2(-n)
    }

    #[test]
    fn image_examples() {
        for k in [grid01(), unit_interval()] {
            let img = image_compact(&identity(), identity_modulus(), &k).unwrap();
            assert!(near(&compact_dist(&img, &k).unwrap(), "0", 8));
            let img = image_compact(&constant("3/2"), Arc::new(LipschitzModulus(Rat::zero())), &k).unwrap();
            let single = Compact::of_point(r(), Point::real(q("3/2"))).unwrap();
            assert!(near(&compact_dist(&img, &single).unwrap(), "0", 8));
            let img = image_compact(&double(), Arc::new(LipschitzModulus(q("2"))), &k).unwrap();
            let (s, i) = sup_inf(&img).unwrap();
            assert!(near(&s, "2", 8) && near(&i, "0", 8));
        }
    }

    #[test]
    fn image_members() {
        let img = image_compact(&double(), Arc::new(LipschitzModulus(q("2"))), &unit_interval()).unwrap();
        for x in ["0", "1/3", "7/8", "1"] {
            let fx = Point::real(q(x) * q("2"));
            assert_eq!(is_member(&fx, &img, &q("1/64")).unwrap(), Verdict::LessThanB);
        }
        let bad = image_compact(&identity(), Arc::new(|_: &Compact, _: &Rat| Rat::zero()), &unit_interval());
        assert!(bad.is_err());
    }

    #[test]
    fn point_near_value_examples() {
        let eps = q("1/10");
        for k in [grid01(), unit_interval()] {
            let x = find_point_near_value(&identity(), &k, &Point::real(q("1/2")), &eps, 16).unwrap();
            assert!((x.coord(0).approx(10) - q("1/2")).abs() < eps);
            let x = find_point_near_value(&constant("7"), &k, &Point::real(q("7")), &eps, 16).unwrap();
            assert_eq!(is_member(&x, &k, &q("1/64")).unwrap(), Verdict::LessThanB);
        }
        assert!(matches!(
            find_point_near_value(&identity(), &grid01(), &Point::real(q("10")), &eps, 16),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(
            find_point_near_value(&identity(), &unit_interval(), &Point::real(q("10")), &eps, 6),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn distance_functional_examples() {
        let phi = distance_functional(r(), Point::real(q("0"))).unwrap();
        assert_eq!(phi.apply(&Point::real(q("3"))).coord(0).exact(), Some(&q("3")));
        assert_eq!(phi.apply(&Point::real(q("0"))).coord(0).exact(), Some(&q("0")));
        let plane = MetricSpace::SupBox(2);
        let phi = distance_functional(plane, Point::from_rats(&[q("0"), q("0")])).unwrap();
        let v = phi.apply(&Point::from_rats(&[q("1"), q("1/2")]));
        assert_eq!(v.coord(0).exact(), Some(&q("1")));
    }

    #[test]
    fn derived_oracle_examples() {
        let c = Point::real(q("5/3"));
        let phi = distance_functional(r(), c.clone()).unwrap();
        let pi: Arc<dyn ImageOracle> = Arc::new(ModulusImageOracle::new(identity(), identity_modulus()));
        let derived = derive_image_oracle(phi, Arc::clone(&pi));
        let single = Compact::of_point(r(), c).unwrap();
        let (s, i) = sup_inf(&derived.image(&single).unwrap()).unwrap();
        assert!(near(&s, "0", 20) && near(&i, "0", 20));

        let phi0 = distance_functional(r(), Point::real(q("0"))).unwrap();
        let derived = derive_image_oracle(phi0.clone(), Arc::clone(&pi));
        for k in [grid01(), unit_interval()] {
            let (s, i) = sup_inf(&derived.image(&k).unwrap()).unwrap();
            assert!(near(&s, "1", 8) && near(&i, "0", 8));
        }

        let pc: Arc<dyn ImageOracle> =
            Arc::new(ModulusImageOracle::new(constant("-2"), Arc::new(LipschitzModulus(Rat::zero()))));
        let derived = derive_image_oracle(phi0, pc);
        let img = derived.image(&grid01()).unwrap();
        let expect = Compact::of_list(FiniteList::singleton(r(), Point::real(q("2"))).unwrap());
        assert!(near(&compact_dist(&img, &expect).unwrap(), "0", 20));
    }
}
