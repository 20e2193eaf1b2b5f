//! A small catalog of real-valued maps with known Lipschitz bounds.
//!
//! On `R^d` every catalog map reads the first coordinate.

use std::fmt;
use std::sync::Arc;

use crate::arith::{CReal, Rat};
use crate::maps::{EffectiveMap, LipschitzModulus, ModulusImageOracle, UniformModulus};
use crate::metric::{MetricSpace, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogMap {
    Identity,
    Double,
    Square,
    DistToHalf,
    MinOneDouble,
    Constant,
}

impl CatalogMap {
    pub const ALL: [CatalogMap; 6] = [
        CatalogMap::Identity,
        CatalogMap::Double,
        CatalogMap::Square,
        CatalogMap::DistToHalf,
        CatalogMap::MinOneDouble,
        CatalogMap::Constant,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CatalogMap::Identity => "x",
            CatalogMap::Double => "2x",
            CatalogMap::Square => "x^2",
            CatalogMap::DistToHalf => "|x-1/2|",
            CatalogMap::MinOneDouble => "min(1,2x)",
            CatalogMap::Constant => "1/3",
        }
    }

    fn constant_value() -> Rat {
        Rat::new(1, 3).expect("nonzero denominator")
    }

    pub fn eval(&self, x: &CReal) -> CReal {
        let two = Rat::from(2);
        match self {
            CatalogMap::Identity => x.clone(),
            CatalogMap::Double => x.scale(&two),
            CatalogMap::Square => x.mul(x),
            CatalogMap::DistToHalf => x.sub(&CReal::from_rat(Rat::new(1, 2).expect("nonzero"))).abs(),
            CatalogMap::MinOneDouble => x.scale(&two).min(&CReal::from_rat(Rat::one())),
            CatalogMap::Constant => CReal::from_rat(Self::constant_value()),
        }
    }

    pub fn map(&self, domain: MetricSpace) -> EffectiveMap {
        let this = *self;
        EffectiveMap::new(domain, MetricSpace::RealLine, move |p| {
            Point::new(vec![this.eval(p.coord(0))])
        })
    }

    /// Lipschitz bound on points whose first coordinate lies in `[-r, r]`.
    pub fn lipschitz(&self, r: &Rat) -> Rat {
        match self {
            CatalogMap::Identity | CatalogMap::DistToHalf => Rat::one(),
            CatalogMap::Double | CatalogMap::MinOneDouble => Rat::from(2),
            CatalogMap::Square => r * &Rat::from(2),
            CatalogMap::Constant => Rat::zero(),
        }
    }

    /// The reference modulus for points with first coordinate in `[-r, r]`.
    pub fn reference_modulus(&self, r: &Rat) -> Arc<dyn UniformModulus> {
        Arc::new(LipschitzModulus(self.lipschitz(r)))
    }

    /// `Π_f` built from the reference modulus.
    pub fn image_oracle(&self, domain: MetricSpace, r: &Rat) -> ModulusImageOracle {
        ModulusImageOracle::new(self.map(domain), self.reference_modulus(r))
    }

    /// Exact `(min, max)` of the map over `lo <= x <= hi`.
    pub fn range(&self, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
        let half = Rat::new(1, 2).expect("nonzero");
        let two = Rat::from(2);
        match self {
            CatalogMap::Identity => (lo.clone(), hi.clone()),
            CatalogMap::Double => (lo * &two, hi * &two),
            CatalogMap::Square => {
                let (a, b) = (lo * lo, hi * hi);
                let top = a.clone().max(b.clone());
                let bottom = if lo.is_positive() || hi.is_negative() { a.min(b) } else { Rat::zero() };
                (bottom, top)
            }
            CatalogMap::DistToHalf => {
                let (a, b) = ((lo - &half).abs(), (hi - &half).abs());
                let top = a.clone().max(b.clone());
                let bottom = if lo <= &half && &half <= hi { Rat::zero() } else { a.min(b) };
                (bottom, top)
            }
            CatalogMap::MinOneDouble => ((lo * &two).min(Rat::one()), (hi * &two).min(Rat::one())),
            CatalogMap::Constant => (Self::constant_value(), Self::constant_value()),
        }
    }
}

impl fmt::Display for CatalogMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
