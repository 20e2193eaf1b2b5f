//! Seeded sampling checks of a modulus against a map.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{approx_compare, Rat, Verdict};
use crate::compact::{precision_for, select_point, Compact};
use crate::error::Result;
use crate::maps::EffectiveMap;
use crate::metric::Point;

/// Finest net precision used to draw members from a non-list compact.
const MAX_POOL_PRECISION: i64 = 10;

/// Outcome of a soundness sampling run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub pairs: usize,
    /// Pairs of distinct points among `pairs`.
    pub distinct_pairs: usize,
    pub violations: usize,
}

/// A pool of members of `K` dense at scale about `r`.
///
/// List compacts contribute their list; other compacts contribute members
/// selected next to the points of a net.
pub fn member_pool(k: &Compact, r: &Rat, budget: u32) -> Result<Vec<Point>> {
    if let Some(l) = k.fixed() {
        return Ok(l.points().to_vec());
    }
    let j = precision_for(r).clamp(0, MAX_POOL_PRECISION);
    let net = k.net(j);
    let radius = Rat::pow2(-j + 1);
    (0..net.len())
        .map(|i| select_point(k, &net, i, &radius, budget))
        .collect()
}

/// Draws member pairs `(x, x′)` whose distance verifies below `δ` against
/// `(δ/2, δ)` and counts those whose images verify above `ε` against
/// `(ε, ε + slack)`.
#[allow(clippy::too_many_arguments)]
pub fn check_soundness(
    f: &EffectiveMap,
    k: &Compact,
    delta: &Rat,
    eps: &Rat,
    slack: &Rat,
    pairs: usize,
    seed: u64,
    budget: u32,
) -> Result<SoundnessReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = member_pool(k, &(delta / Rat::from(2)), budget)?;
    let space = k.space();
    let half_delta = delta / Rat::from(2);
    let upper = eps + slack;
    let images: Vec<Point> = pool.iter().map(|p| f.apply(p)).collect();
    let mut report = SoundnessReport {
        pairs: 0,
        distinct_pairs: 0,
        violations: 0,
    };
    for _ in 0..pairs {
        let i = rng.gen_range(0..pool.len());
        let close: Vec<usize> = close_to(&pool, i, &half_delta, delta, k)?;
        let &j = close.choose(&mut rng).expect("a point is close to itself");
        report.pairs += 1;
        if i != j && !space.dist(&pool[i], &pool[j]).exact().is_some_and(Rat::is_zero) {
            report.distinct_pairs += 1;
        }
        let gap = f.codomain().dist(&images[i], &images[j]);
        if approx_compare(&gap, eps, &upper)? == Verdict::GreaterThanA {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// Indices of pool points whose distance to `pool[i]` gets `LessThanB` on `(a, b)`.
fn close_to(pool: &[Point], i: usize, a: &Rat, b: &Rat, k: &Compact) -> Result<Vec<usize>> {
    if let (Some(l), Some(xc)) = (k.fixed(), pool[i].exact_coords()) {
        if let Some(ix) = l.exact() {
            return Ok(ix.within(&xc, &((a + b) / Rat::from(2))));
        }
    }
    let space = k.space();
    let mut out = Vec::new();
    for (j, p) in pool.iter().enumerate() {
        if approx_compare(&space.dist(&pool[i], p), a, b)? == Verdict::LessThanB {
            out.push(j);
        }
    }
    Ok(out)
}

/// Uniform random dyadic rational in `[lo, hi]` with denominator `2^bits`.
pub fn random_dyadic<R: Rng>(rng: &mut R, lo: i64, hi: i64, bits: u32) -> Rat {
    let scale = 1i64 << bits;
    let n = rng.gen_range(lo * scale..=hi * scale);
    Rat::new(n, scale).expect("nonzero denominator")
}
