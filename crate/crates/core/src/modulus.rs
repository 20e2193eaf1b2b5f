//! Extraction of a uniform-continuity modulus from an image-compact oracle.
//!
//! The extractor sees a map `f` and its image operator `Π_f`, never a modulus
//! for `f`. For real-valued maps it builds class certificates, refines them
//! until the peak of `f` is isolated ([`Extractor::peak_modulus`]), and
//! recurses on pieces of the compact by induction on the oscillation bound
//! ([`Extractor::uniform_modulus_real`]). Maps into other spaces are reduced
//! to real-valued ones through distance functionals ([`Extractor::uniform_modulus`]).

use std::cell::{Cell, RefCell};
use std::sync::Arc;

use crate::arith::{approx_compare, positive_margin, CReal, Rat, Verdict};
use crate::compact::{
    ball_split, compact_dist, compact_union_all, precision_for, select_point, sup_inf, Compact,
    SplitResult,
};
use crate::error::{Error, Result};
use crate::list::FiniteList;
use crate::maps::{derive_image_oracle, distance_functional, find_point_near_value, EffectiveMap, ImageOracle};
use crate::metric::{MetricSpace, Point};

/// How a certificate came about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// The whole compact, at a level covering its diameter.
    Initial,
    /// One refinement step from the previous level.
    Refined {
        from_level: i64,
        high_pieces: usize,
        low_pieces: usize,
    },
}

/// A compact `K′` in the class at `(level, ε)` for `f` and `K`.
///
/// By construction `K′ ≤ K`; every pair of members of `K` closer than
/// `2^-level` whose values differ by more than `2ε` lies in `K′`; and every
/// member of `K′` lies within `8·2^-level` of one of the witnesses, which
/// are members of `K` with `f < sup Π_f(K) − ε`.
#[derive(Clone, Debug)]
pub struct ClassCertificate {
    level: i64,
    eps: Rat,
    compact: Compact,
    witnesses: FiniteList,
    sup: CReal,
    provenance: Provenance,
}

impl ClassCertificate {
    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn eps(&self) -> &Rat {
        &self.eps
    }

    pub fn compact(&self) -> &Compact {
        &self.compact
    }

    pub fn witnesses(&self) -> &FiniteList {
        &self.witnesses
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// One line of the extraction trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    /// Peak modulus at parameter `eps`; `refinements` is 0 on the low-oscillation branch.
    Peak {
        depth: usize,
        eps: Rat,
        delta: Rat,
        refinements: u32,
    },
    /// One node of the induction on the oscillation bound.
    Induction {
        depth: usize,
        level: u64,
        centers: usize,
        recursed: usize,
        delta: Rat,
    },
    /// One distance functional of the reduction to real-valued maps.
    Anchor { index: usize, delta: Rat },
}

/// Runs extraction with a search budget and records a trace.
pub struct Extractor {
    budget: u32,
    trace: RefCell<Vec<TraceEvent>>,
    refinements: Cell<u64>,
    depth: Cell<usize>,
}

fn real_map(f: &EffectiveMap) -> Result<()> {
    if f.codomain() == MetricSpace::RealLine {
        Ok(())
    } else {
        Err(Error::WrongSpace(f.codomain().name()))
    }
}

fn require_positive(eps: &Rat) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("ε must be positive, got {eps}")))
    }
}

fn value(f: &EffectiveMap, x: &Point) -> CReal {
    f.apply(x).coord(0).clone()
}

/// Some member of `K`.
fn any_member(k: &Compact, budget: u32) -> Result<Point> {
    let net = k.net(0);
    if k.fixed().is_some() {
        return Ok(net.get(0).clone());
    }
    select_point(k, &net, 0, &Rat::from(2), budget)
}

/// `(sup, sup − inf)` of `Π_f(K)`.
fn sup_and_osc(pi: &dyn ImageOracle, k: &Compact) -> Result<(CReal, CReal)> {
    let (s, i) = sup_inf(&pi.image(k)?)?;
    let osc = s.sub(&i);
    Ok((s, osc))
}

impl Extractor {
    pub fn new(budget: u32) -> Self {
        Extractor {
            budget,
            trace: RefCell::new(Vec::new()),
            refinements: Cell::new(0),
            depth: Cell::new(0),
        }
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn trace(&self) -> Vec<TraceEvent> {
        self.trace.borrow().clone()
    }

    /// Refinement steps performed so far, over all peak computations.
    pub fn refinements(&self) -> u64 {
        self.refinements.get()
    }

    fn log(&self, e: TraceEvent) {
        self.trace.borrow_mut().push(e);
    }

    /// The certificate `K` itself, at a level covering the diameter of `K`.
    ///
    /// Requires the oscillation of `Π_f(K)` to exceed `ε`.
    pub fn initial_certificate(
        &self,
        f: &EffectiveMap,
        pi: &dyn ImageOracle,
        k: &Compact,
        eps: &Rat,
    ) -> Result<ClassCertificate> {
        real_map(f)?;
        require_positive(eps)?;
        let img = pi.image(k)?;
        let (sup, inf) = sup_inf(&img)?;
        let osc = sup.sub(&inf);
        // g < osc − ε, so f(x) < inf + g puts x below sup − ε
        let g = positive_margin(&osc, eps, self.budget.max(64)).map_err(|_| {
            Error::Precondition(format!("oscillation could not be shown to exceed {eps}"))
        })?;
        let anchor = find_point_near_value(f, k, &Point::new(vec![inf]), &g, self.budget)?;
        let radius = compact_dist(k, &Compact::of_point(k.space(), anchor.clone())?)?;
        let bound = match radius.exact() {
            Some(r) => r.clone(),
            None => {
                let mut p = 0;
                loop {
                    let upper = radius.approx(p) + Rat::pow2(-p);
                    if Rat::pow2(-p) * Rat::from(4) <= upper || p >= 64 {
                        break upper;
                    }
                    p += 1;
                }
            }
        };
        // ρ(K, {anchor}) <= bound < 2^{-m+2}
        let m = if bound.is_zero() { 64 } else { 1 - bound.floor_log2() };
        Ok(ClassCertificate {
            level: m,
            eps: eps.clone(),
            compact: k.clone(),
            witnesses: FiniteList::singleton(k.space(), anchor)?,
            sup,
            provenance: Provenance::Initial,
        })
    }

    /// From a certificate at level `n`, one at level `n + 1` within `2^{-n+5}`.
    pub fn refine_step(
        &self,
        f: &EffectiveMap,
        pi: &dyn ImageOracle,
        k: &Compact,
        cert: &ClassCertificate,
    ) -> Result<ClassCertificate> {
        real_map(f)?;
        let n = cert.level;
        let eps = &cert.eps;
        let two_eps = eps * &Rat::from(2);
        let r = Rat::pow2(-n);
        // ρ(K, ζ) <= 2^{-n-4} + 2^{-n-3} < 2^{-n-2}
        let zeta = k.net(n + 4).thin(&Rat::pow2(-n - 3))?;
        let mut parts: Vec<Compact> = Vec::new();
        let mut witnesses: Vec<Point> = Vec::new();
        let (mut high, mut low) = (0, 0);
        let near_witness_lo = &r * &Rat::from(9);
        let near_witness_hi = &r * &Rat::from(16);
        for z in zeta.points() {
            let piece = match ball_split(&cert.compact, z, &r)? {
                SplitResult::Miss => continue,
                SplitResult::Piece(p) => p,
            };
            let (sup_p, inf_p) = sup_inf(&pi.image(&piece)?)?;
            let osc = sup_p.sub(&inf_p);
            match approx_compare(&osc, eps, &two_eps)? {
                Verdict::GreaterThanA => {
                    let g = positive_margin(&osc, eps, self.budget.max(64))?;
                    let w = find_point_near_value(f, &piece, &Point::new(vec![inf_p]), &g, self.budget)?;
                    parts.push(piece);
                    witnesses.push(w);
                    high += 1;
                }
                Verdict::LessThanB => {
                    let y = any_member(&piece, self.budget)?;
                    let w = first_near(&cert.witnesses, &y, &near_witness_lo, &near_witness_hi)?
                        .ok_or_else(|| {
                            Error::ClassViolation(format!(
                                "no witness within {} of a low-oscillation piece at level {n}",
                                near_witness_hi
                            ))
                        })?;
                    parts.push(Compact::of_point(k.space(), w.clone())?);
                    witnesses.push(w);
                    low += 1;
                }
            }
        }
        if parts.is_empty() {
            return Err(Error::ClassViolation(format!(
                "every ball missed the certified compact at level {n}"
            )));
        }
        let next = compact_union_all(&parts)?;
        let moved = compact_dist(&cert.compact, &next)?;
        if approx_compare(&moved, &(&r * &Rat::from(24)), &(&r * &Rat::from(32)))? == Verdict::GreaterThanA {
            return Err(Error::ClassViolation(format!(
                "refinement at level {n} moved the compact by more than 24·2^-{n}"
            )));
        }
        self.refinements.set(self.refinements.get() + 1);
        Ok(ClassCertificate {
            level: n + 1,
            eps: eps.clone(),
            compact: next,
            witnesses: FiniteList::new(k.space(), witnesses)?.dedup_exact(),
            sup: cert.sup.clone(),
            provenance: Provenance::Refined {
                from_level: n,
                high_pieces: high,
                low_pieces: low,
            },
        })
    }

    /// `δ` such that members `x, x′` with `f(x) > sup Π_f(K) − ε/2` and
    /// `ρ(x, x′) < δ` satisfy `|f(x) − f(x′)| <= 2ε`.
    pub fn peak_modulus(&self, f: &EffectiveMap, pi: &dyn ImageOracle, k: &Compact, eps: &Rat) -> Result<Rat> {
        real_map(f)?;
        require_positive(eps)?;
        let (_, osc) = sup_and_osc(pi, k)?;
        if approx_compare(&osc, eps, &(eps * &Rat::from(2)))? == Verdict::LessThanB {
            let delta = Rat::one();
            self.log(TraceEvent::Peak {
                depth: self.depth.get(),
                eps: eps.clone(),
                delta: delta.clone(),
                refinements: 0,
            });
            return Ok(delta);
        }
        let mut cert = self.initial_certificate(f, pi, k, eps)?;
        let (quarter, half) = (eps / Rat::from(4), eps / Rat::from(2));
        for step in 1..=self.budget {
            let peak_free = pi.image(&Compact::of_list(cert.witnesses.clone()))?;
            let d = compact_dist(&pi.image(&cert.compact)?, &peak_free)?;
            if approx_compare(&d, &quarter, &half)? == Verdict::LessThanB {
                let delta = Rat::pow2(-cert.level);
                self.log(TraceEvent::Peak {
                    depth: self.depth.get(),
                    eps: eps.clone(),
                    delta: delta.clone(),
                    refinements: step,
                });
                return Ok(delta);
            }
            cert = self.refine_step(f, pi, k, &cert)?;
        }
        Err(Error::BudgetExceeded(format!(
            "peak of f not isolated after {} refinements at ε = {eps}",
            self.budget
        )))
    }

    /// `δ` with `|f(x) − f(x′)| <= ε` for members of `K` closer than `δ`; `f` real-valued.
    pub fn uniform_modulus_real(
        &self,
        f: &EffectiveMap,
        pi: &dyn ImageOracle,
        k: &Compact,
        eps: &Rat,
    ) -> Result<Rat> {
        real_map(f)?;
        require_positive(eps)?;
        let level = self.oscillation_level(pi, k, eps)?;
        self.modulus_at_level(f, pi, k, eps, level)
    }

    /// Least `n` with `osc Π_f(K) < (n + 1)ε/60` verified.
    fn oscillation_level(&self, pi: &dyn ImageOracle, k: &Compact, eps: &Rat) -> Result<u64> {
        let (_, osc) = sup_and_osc(pi, k)?;
        let unit = eps / Rat::from(60);
        let upper = osc.approx(0) + Rat::one();
        let cap = (&upper / &unit).ceil();
        let mut n: u64 = 0;
        loop {
            let b = &unit * &Rat::from_int(n as i64 + 1);
            let a = &b - &(&unit / Rat::from(2));
            if approx_compare(&osc, &a, &b)? == Verdict::LessThanB {
                return Ok(n);
            }
            n += 1;
            if num_bigint::BigInt::from(n) > cap {
                return Err(Error::Precondition("oscillation exceeds its own bound".into()));
            }
        }
    }

    fn modulus_at_level(
        &self,
        f: &EffectiveMap,
        pi: &dyn ImageOracle,
        k: &Compact,
        eps: &Rat,
        level: u64,
    ) -> Result<Rat> {
        let depth = self.depth.get();
        if level == 0 {
            self.log(TraceEvent::Induction {
                depth,
                level,
                centers: 0,
                recursed: 0,
                delta: Rat::one(),
            });
            return Ok(Rat::one());
        }
        let kappa = self
            .peak_modulus(f, pi, k, &(eps / Rat::from(4)))?
            .min(self.peak_modulus(f, pi, k, &(eps / Rat::from(30)))?);
        let centers = self.member_net(k, &(&kappa / Rat::from(4)))?;
        let (sup, _) = sup_and_osc(pi, k)?;
        let lo = -(eps / Rat::from(8));
        let hi = -(eps / Rat::from(12));
        let half_kappa = &kappa / Rat::from(2);
        let mut delta = &kappa / Rat::from(4);
        let mut recursed = 0;
        self.depth.set(depth + 1);
        let result = (|| -> Result<()> {
            for z in centers.points() {
                let gap = value(f, z).sub(&sup);
                if approx_compare(&gap, &lo, &hi)? == Verdict::GreaterThanA {
                    continue;
                }
                let piece = match ball_split(k, z, &half_kappa)? {
                    SplitResult::Piece(p) => p,
                    SplitResult::Miss => {
                        return Err(Error::ClassViolation(
                            "ball around a member of the compact missed it".into(),
                        ))
                    }
                };
                // the piece's oscillation is below level·ε/60, so level − 1 is a valid bound
                let child = self.oscillation_level(pi, &piece, eps)?.min(level - 1);
                let d = self.modulus_at_level(f, pi, &piece, eps, child)?;
                delta = delta.clone().min(d);
                recursed += 1;
            }
            Ok(())
        })();
        self.depth.set(depth);
        result?;
        self.log(TraceEvent::Induction {
            depth,
            level,
            centers: centers.len(),
            recursed,
            delta: delta.clone(),
        });
        Ok(delta)
    }

    /// Members of `K` forming a list within `r` of `K`.
    fn member_net(&self, k: &Compact, r: &Rat) -> Result<FiniteList> {
        // net within r/8 thinned at r/4 is within 3r/8; members picked within r/2 of it
        let zeta = k
            .net(precision_for(&(r / Rat::from(8))))
            .thin(&(r / Rat::from(4)))?;
        if k.fixed().is_some() {
            return Ok(zeta);
        }
        let half = r / Rat::from(2);
        let members = (0..zeta.len())
            .map(|i| select_point(k, &zeta, i, &half, self.budget))
            .collect::<Result<Vec<_>>>()?;
        FiniteList::new(k.space(), members)
    }

    /// `δ` with `ρ_Y(f(x), f(x′)) < ε` for members of `K` closer than `δ`.
    ///
    /// Real-valued maps go straight to [`Self::uniform_modulus_real`]; other
    /// codomains are reduced through distance functionals to an `ε/3`-net of
    /// `Π_f(K)`.
    pub fn uniform_modulus(
        &self,
        f: &EffectiveMap,
        pi: Arc<dyn ImageOracle>,
        k: &Compact,
        eps: &Rat,
    ) -> Result<Rat> {
        require_positive(eps)?;
        if f.codomain() == MetricSpace::RealLine {
            return self.uniform_modulus_real(f, pi.as_ref(), k, eps);
        }
        self.uniform_modulus_reduced(f, pi, k, eps)
    }

    /// The distance-functional reduction, for any codomain.
    pub fn uniform_modulus_reduced(
        &self,
        f: &EffectiveMap,
        pi: Arc<dyn ImageOracle>,
        k: &Compact,
        eps: &Rat,
    ) -> Result<Rat> {
        require_positive(eps)?;
        let third = eps / Rat::from(3);
        let img = pi.image(k)?;
        // ρ(Π_f(K), ζ) < ε/24 + 7ε/24 = ε/3
        let net = img.net(precision_for(&(eps / Rat::from(24))));
        let anchors = net.thin(&(eps * &Rat::new(7, 24)?))?;
        let mut delta: Option<Rat> = None;
        for (index, anchor) in anchors.points().iter().enumerate() {
            let phi = distance_functional(f.codomain(), anchor.clone())?;
            let composed = f.then(&phi)?;
            let oracle = derive_image_oracle(phi, Arc::clone(&pi));
            let d = self.uniform_modulus_real(&composed, &oracle, k, &third)?;
            self.log(TraceEvent::Anchor {
                index,
                delta: d.clone(),
            });
            delta = Some(match delta {
                None => d,
                Some(cur) => cur.min(d),
            });
        }
        Ok(delta.expect("anchor list is nonempty"))
    }
}

/// First point of `list` whose distance to `target` verifies below `b` against `(a, b)`.
fn first_near(list: &FiniteList, target: &Point, a: &Rat, b: &Rat) -> Result<Option<Point>> {
    if let (Some(ix), Some(tc)) = (list.exact(), target.exact_coords()) {
        let mid = (a + b) / Rat::from(2);
        return Ok(ix.first_within(&tc, &mid).map(|i| list.get(i).clone()));
    }
    let space = list.space();
    for p in list.points() {
        if approx_compare(&space.dist(p, target), a, b)? == Verdict::LessThanB {
            return Ok(Some(p.clone()));
        }
    }
    Ok(None)
}

/// Peak modulus with a fresh extractor.
pub fn peak_modulus(f: &EffectiveMap, pi: &dyn ImageOracle, k: &Compact, eps: &Rat, budget: u32) -> Result<Rat> {
    Extractor::new(budget).peak_modulus(f, pi, k, eps)
}

/// Real-valued uniform modulus with a fresh extractor.
pub fn uniform_modulus_real(
    f: &EffectiveMap,
    pi: &dyn ImageOracle,
    k: &Compact,
    eps: &Rat,
    budget: u32,
) -> Result<Rat> {
    Extractor::new(budget).uniform_modulus_real(f, pi, k, eps)
}

/// Uniform modulus for any codomain with a fresh extractor.
pub fn uniform_modulus(
    f: &EffectiveMap,
    pi: Arc<dyn ImageOracle>,
    k: &Compact,
    eps: &Rat,
    budget: u32,
) -> Result<Rat> {
    Extractor::new(budget).uniform_modulus(f, pi, k, eps)
}
