//! Constructive reals: precision-queryable rational oracles.
//!
//! A [`CReal`] answers `approx(n)` with a rational within `2^-n` of the value
//! it denotes, for every integer `n` (negative `n` asks for coarse bounds).
//! Values are immutable and cheap to clone. Rationals are carried exactly, so
//! arithmetic on exact inputs stays exact; everything else is an oracle node
//! whose answers are memoized per precision.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::arith::Rat;
use crate::error::{Error, Result};

type ApproxFn = dyn Fn(i64) -> Rat + Send + Sync;

#[derive(Clone)]
pub struct CReal(Arc<Node>);

enum Node {
    Exact(Rat),
    Oracle {
        approx: Box<ApproxFn>,
        memo: Mutex<HashMap<i64, Rat>>,
    },
}

/// Outcome of the approximate comparison of `x` against a gap `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// `x > a` holds.
    GreaterThanA,
    /// `x < b` holds.
    LessThanB,
}

/// Arithmetic operations available on constructive reals.
#[derive(Clone, Debug, PartialEq)]
pub enum ArithOp {
    Add,
    Sub,
    Neg,
    Abs,
    Min,
    Max,
    ScaleByRat(Rat),
}

impl ArithOp {
    fn name(&self) -> &'static str {
        match self {
            ArithOp::Add => "add",
            ArithOp::Sub => "sub",
            ArithOp::Neg => "neg",
            ArithOp::Abs => "abs",
            ArithOp::Min => "min",
            ArithOp::Max => "max",
            ArithOp::ScaleByRat(_) => "scale_by_rat",
        }
    }
}

/// Extra bits requested from operands of a sum before rounding the result.
const GUARD: i64 = 2;

impl CReal {
    pub fn from_rat(q: Rat) -> Self {
        CReal(Arc::new(Node::Exact(q)))
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    /// Wraps an oracle. The caller promises `|approx(n) - x| <= 2^-n` for all `n`.
    pub fn from_oracle<F>(approx: F) -> Self
    where
        F: Fn(i64) -> Rat + Send + Sync + 'static,
    {
        CReal(Arc::new(Node::Oracle {
            approx: Box::new(approx),
            memo: Mutex::new(HashMap::new()),
        }))
    }

    /// A rational within `2^-n` of this real.
    pub fn approx(&self, n: i64) -> Rat {
        match &*self.0 {
            Node::Exact(q) => q.clone(),
            Node::Oracle { approx, memo } => {
                if let Some(q) = memo.lock().expect("memo poisoned").get(&n) {
                    return q.clone();
                }
                // Computed outside the lock; the oracle may recurse into other nodes.
                let q = approx(n);
                memo.lock()
                    .expect("memo poisoned")
                    .entry(n)
                    .or_insert(q)
                    .clone()
            }
        }
    }

    /// The exact value, when this real was built from rationals only.
    pub fn exact(&self) -> Option<&Rat> {
        match &*self.0 {
            Node::Exact(q) => Some(q),
            Node::Oracle { .. } => None,
        }
    }

    pub fn arith(op: ArithOp, args: &[CReal]) -> Result<CReal> {
        let arity = |expected: &'static str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(Error::Arity {
                    op: op.name(),
                    expected,
                    got: args.len(),
                })
            }
        };
        match &op {
            ArithOp::Add | ArithOp::Sub => arity("2", args.len() == 2)?,
            ArithOp::Neg | ArithOp::Abs | ArithOp::ScaleByRat(_) => arity("1", args.len() == 1)?,
            ArithOp::Min | ArithOp::Max => arity("at least 1", !args.is_empty())?,
        }
        Ok(match op {
            ArithOp::Add => args[0].add(&args[1]),
            ArithOp::Sub => args[0].sub(&args[1]),
            ArithOp::Neg => args[0].neg(),
            ArithOp::Abs => args[0].abs(),
            ArithOp::Min => args[1..].iter().fold(args[0].clone(), |acc, x| acc.min(x)),
            ArithOp::Max => args[1..].iter().fold(args[0].clone(), |acc, x| acc.max(x)),
            ArithOp::ScaleByRat(q) => args[0].scale(&q),
        })
    }

    pub fn add(&self, other: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return CReal::from_rat(a + b);
        }
        let (x, y) = (self.clone(), other.clone());
        CReal::from_oracle(move |n| {
            (x.approx(n + GUARD) + y.approx(n + GUARD)).round_dyadic(n + GUARD)
        })
    }

    pub fn sub(&self, other: &CReal) -> CReal {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CReal {
        if let Some(a) = self.exact() {
            return CReal::from_rat(-a);
        }
        let x = self.clone();
        CReal::from_oracle(move |n| -x.approx(n))
    }

    pub fn abs(&self) -> CReal {
        if let Some(a) = self.exact() {
            return CReal::from_rat(a.abs());
        }
        let x = self.clone();
        CReal::from_oracle(move |n| x.approx(n).abs())
    }

    pub fn min(&self, other: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return CReal::from_rat(a.clone().min(b.clone()));
        }
        let (x, y) = (self.clone(), other.clone());
        CReal::from_oracle(move |n| x.approx(n).min(y.approx(n)))
    }

    pub fn max(&self, other: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return CReal::from_rat(a.clone().max(b.clone()));
        }
        let (x, y) = (self.clone(), other.clone());
        CReal::from_oracle(move |n| x.approx(n).max(y.approx(n)))
    }

    pub fn scale(&self, q: &Rat) -> CReal {
        if let Some(a) = self.exact() {
            return CReal::from_rat(a * q);
        }
        if q.is_zero() {
            return CReal::zero();
        }
        let x = self.clone();
        let q = q.clone();
        let extra = q.abs().ceil_log2().max(0);
        CReal::from_oracle(move |n| {
            let p = n + extra + GUARD;
            (x.approx(p) * &q).round_dyadic(n + GUARD)
        })
    }

    /// Product of two reals. Only used by test maps such as `x^2`.
    pub fn mul(&self, other: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return CReal::from_rat(a * b);
        }
        let (x, y) = (self.clone(), other.clone());
        // |x| <= |x(0)| + 1 and likewise for y
        let bx = x.approx(0).abs() + Rat::one();
        let by = y.approx(0).abs() + Rat::from(2);
        let extra = bx.max(by).ceil_log2().max(0) + 1;
        CReal::from_oracle(move |n| {
            let p = n + extra + GUARD;
            (x.approx(p) * y.approx(p)).round_dyadic(n + GUARD)
        })
    }

    /// Decimal rendering at `digits` places with a rigorous error bound.
    pub fn render(&self, digits: u32) -> (String, Rat) {
        let ten_pow = {
            let mut r = Rat::one();
            for _ in 0..digits {
                r = r * Rat::from(10);
            }
            r
        };
        let rounding = Rat::one() / (Rat::from(2) * &ten_pow);
        match self.exact() {
            Some(q) => {
                let s = q.to_decimal(digits);
                let shown: Rat = decimal_value(&s);
                (s, (q - &shown).abs())
            }
            None => {
                let n = (Rat::one() / &rounding).ceil_log2() + 1;
                let q = self.approx(n);
                let s = q.to_decimal(digits);
                let shown: Rat = decimal_value(&s);
                (s, (q - &shown).abs() + Rat::pow2(-n))
            }
        }
    }
}

fn decimal_value(s: &str) -> Rat {
    let neg = s.starts_with('-');
    let body = s.trim_start_matches('-');
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{int}{frac}");
    let denom = format!("1{}", "0".repeat(frac.len()));
    let q: Rat = format!("{digits}/{denom}").parse().expect("well-formed decimal");
    if neg {
        -q
    } else {
        q
    }
}

impl fmt::Debug for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(q) => write!(f, "CReal({q})"),
            None => write!(f, "CReal(~{})", self.approx(20).to_decimal(6)),
        }
    }
}

impl From<Rat> for CReal {
    fn from(q: Rat) -> Self {
        CReal::from_rat(q)
    }
}

/// Precision `n` with `2^-n < width / 4`.
fn compare_precision(width: &Rat) -> i64 {
    (Rat::from(4) / width).floor_log2() + 1
}

/// Decides `x > a` or `x < b` for `a < b` from a single approximation.
///
/// Queries `x` at a precision finer than a quarter of the gap and returns
/// [`Verdict::GreaterThanA`] iff the approximation exceeds the midpoint.
pub fn approx_compare(x: &CReal, a: &Rat, b: &Rat) -> Result<Verdict> {
    if a >= b {
        return Err(Error::Precondition(format!(
            "approx_compare needs a < b, got a = {a}, b = {b}"
        )));
    }
    let mid = (a + b) / Rat::from(2);
    let q = match x.exact() {
        Some(q) => q.clone(),
        None => x.approx(compare_precision(&(b - a))),
    };
    Ok(if q > mid {
        Verdict::GreaterThanA
    } else {
        Verdict::LessThanB
    })
}

/// A positive rational `g` with `x - g > t`, given that `x > t` is known.
///
/// Refines precision until the approximation clears `t` by more than its own
/// error; `max_steps` bounds the search.
pub fn positive_margin(x: &CReal, t: &Rat, max_steps: u32) -> Result<Rat> {
    if let Some(q) = x.exact() {
        return if q > t {
            Ok((q - t) / Rat::from(2))
        } else {
            Err(Error::Precondition(format!("{q} does not exceed {t}")))
        };
    }
    for n in 0..max_steps as i64 {
        let lower = x.approx(n) - Rat::pow2(-n);
        if lower > *t {
            return Ok((lower - t) / Rat::from(2));
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no positive margin over {t} within {max_steps} precision steps"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    /// A non-exact real equal to `v`, forcing the oracle paths.
    fn fuzzy(v: &str) -> CReal {
        let v = q(v);
        CReal::from_oracle(move |n| &v + &Rat::pow2(-n - 1))
    }

    #[test]
    fn embedding_is_constant() {
        let zero = CReal::from_rat(Rat::zero());
        assert_eq!(zero.approx(0), Rat::zero());
        assert_eq!(zero.approx(50), Rat::zero());
        assert_eq!(CReal::from_rat(q("1/3")).approx(10), q("1/3"));
        assert_eq!(CReal::from_rat(q("-7/2")).approx(0), q("-7/2"));
    }

    #[test]
    fn arithmetic_examples() {
        let sum = CReal::arith(ArithOp::Add, &[fuzzy("1/3"), fuzzy("1/6")]).unwrap();
        assert!((sum.approx(5) - q("1/2")).abs() <= Rat::pow2(-5));
        let abs = CReal::arith(ArithOp::Abs, &[fuzzy("-2")]).unwrap();
        for n in [-3, 0, 4, 30] {
            assert!((abs.approx(n) - q("2")).abs() <= Rat::pow2(-n));
        }
        let max = CReal::arith(ArithOp::Max, &[fuzzy("0"), fuzzy("1")]).unwrap();
        assert!((max.approx(7) - q("1")).abs() <= Rat::pow2(-7));
        let scaled = fuzzy("3/7").scale(&q("-13/2"));
        assert!((scaled.approx(9) - q("-39/14")).abs() <= Rat::pow2(-9));
        let prod = fuzzy("3/4").mul(&fuzzy("-5/3"));
        assert!((prod.approx(12) - q("-5/4")).abs() <= Rat::pow2(-12));
    }

    #[test]
    fn exact_inputs_stay_exact() {
        let a = CReal::from_rat(q("1/3"));
        let b = CReal::from_rat(q("1/6"));
        assert_eq!(a.add(&b).exact(), Some(&q("1/2")));
        assert_eq!(a.sub(&b).abs().exact(), Some(&q("1/6")));
        assert_eq!(a.mul(&a).exact(), Some(&q("1/9")));
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(
            CReal::arith(ArithOp::Add, &[CReal::zero()]),
            Err(Error::Arity { op: "add", .. })
        ));
        assert!(CReal::arith(ArithOp::Max, &[]).is_err());
        assert!(CReal::arith(ArithOp::Neg, &[CReal::zero(), CReal::zero()]).is_err());
    }

    #[test]
    fn compare_examples() {
        let (a, b) = (q("0"), q("1"));
        assert_eq!(
            approx_compare(&fuzzy("2"), &a, &b).unwrap(),
            Verdict::GreaterThanA
        );
        assert_eq!(
            approx_compare(&fuzzy("-1"), &a, &b).unwrap(),
            Verdict::LessThanB
        );
        // both verdicts are true for 1/2; either answer is acceptable
        approx_compare(&fuzzy("1/2"), &a, &b).unwrap();
        assert!(approx_compare(&fuzzy("0"), &b, &a).is_err());
        assert!(approx_compare(&fuzzy("0"), &a, &a).is_err());
    }

    #[test]
    fn margin_search() {
        let g = positive_margin(&fuzzy("3/4"), &q("1/2"), 64).unwrap();
        assert!(g.is_positive() && g < q("1/4"));
        assert!(positive_margin(&CReal::from_rat(q("1/2")), &q("1/2"), 64).is_err());
    }

    #[test]
    fn render_bounds_the_error() {
        let (s, err) = CReal::from_rat(q("1/3")).render(4);
        assert_eq!(s, "0.3333");
        assert_eq!(err, q("1/30000"));
        let (s, err) = fuzzy("1/2").render(6);
        assert_eq!(s, "0.500000");
        assert!(err <= q("1/1000000"));
    }
}
