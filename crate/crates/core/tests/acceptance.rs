//! Acceptance suite: one pass/fail line per criterion.

use std::cell::Cell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use compacta::catalog::CatalogMap;
use compacta::compact::{ball_split, compact_union, is_member, majorizes, sup_inf};
use compacta::maps::image_compact;
use compacta::metric::{exact_dist, grid_net};
use compacta::modulus::Extractor;
use compacta::sampling::{check_soundness, random_dyadic, SoundnessReport};
use compacta::list::list_hausdorff;
use compacta::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;
const CELL_LIMIT: Duration = Duration::from_secs(120);

fn q(s: &str) -> Rat {
    s.parse().expect("rational literal")
}

fn tiny(k: i64) -> Rat {
    Rat::pow2(-k)
}

// ---------- brute-force oracles ----------

fn brute_directed(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Rat {
    a.iter()
        .map(|p| b.iter().map(|q| exact_dist(p, q)).min().expect("nonempty"))
        .max()
        .expect("nonempty")
}

fn brute_hausdorff(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Rat {
    brute_directed(a, b).max(brute_directed(b, a))
}

fn dist_to_box(p: &[Rat], bounds: &[(Rat, Rat)]) -> Rat {
    p.iter()
        .zip(bounds)
        .map(|(c, (lo, hi))| {
            if c < lo {
                lo - c
            } else if c > hi {
                c - hi
            } else {
                Rat::zero()
            }
        })
        .max()
        .expect("nonempty")
}

// ---------- generators ----------

fn random_coords(rng: &mut ChaCha8Rng, dim: usize, max_len: usize) -> Vec<Vec<Rat>> {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| (0..dim).map(|_| random_dyadic(rng, -8, 8, 4)).collect())
        .collect()
}

/// A coordinate presented only through its approximations.
fn opaque(c: &Rat) -> CReal {
    let c = c.clone();
    CReal::from_oracle(move |n| c.round_dyadic(n + 1))
}

fn to_list(space: MetricSpace, coords: &[Vec<Rat>], hide: bool) -> FiniteList {
    let points = coords
        .iter()
        .map(|c| {
            if hide {
                Point::new(c.iter().map(opaque).collect())
            } else {
                Point::from_rats(c)
            }
        })
        .collect();
    FiniteList::new(space, points).expect("points match the space")
}

fn space_of(dim: usize) -> MetricSpace {
    if dim == 1 {
        MetricSpace::RealLine
    } else {
        MetricSpace::SupBox(dim)
    }
}

/// The full box as a compact, nets at spacing `2^-n`.
fn completed_box(space: MetricSpace, bounds: Vec<(Rat, Rat)>) -> Compact {
    Compact::from_net(space, move |n| {
        grid_net(space, &bounds, &Rat::pow2(-n.max(0))).expect("valid box")
    })
}

// ---------- harness ----------

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: u32, title: &str, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Outcome {
            pass: false,
            detail: format!("panicked: {msg}"),
        }
    });
    println!(
        "criterion {id} [{title}]: {} ({}; {:.1}s)",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        start.elapsed().as_secs_f64()
    );
    outcome.pass
}

// ---------- criterion 1 ----------

fn hausdorff_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let slack = &Rat::from(3) * &tiny(20);
    let start = Instant::now();
    let mut failures = Vec::new();
    for case in 0..1000 {
        let dim = if case % 2 == 0 { 1 } else { 2 };
        let space = space_of(dim);
        let hide = case % 3 == 0;
        let raw: Vec<Vec<Vec<Rat>>> = (0..4).map(|_| random_coords(&mut rng, dim, 6)).collect();
        let l: Vec<FiniteList> = raw.iter().map(|c| to_list(space, c, hide)).collect();
        let h = |a: &FiniteList, b: &FiniteList| list_hausdorff(a, b).expect("same space");
        let (ab, ba, bc, ac) = (h(&l[0], &l[1]), h(&l[1], &l[0]), h(&l[1], &l[2]), h(&l[0], &l[2]));
        for n in [-2, 0, 3, 10, 20, 30] {
            if ab.approx(n) != ba.approx(n) {
                failures.push(format!("case {case}: asymmetric at precision {n}"));
            }
        }
        let truth = brute_hausdorff(&raw[0], &raw[1]);
        if (ab.approx(20) - truth).abs() > tiny(20) {
            failures.push(format!("case {case}: disagrees with brute force"));
        }
        if ac.approx(20) > ab.approx(20) + bc.approx(20) + slack.clone() {
            failures.push(format!("case {case}: triangle inequality"));
        }
        let joined = h(
            &l[0].concat(&l[2]).expect("same space"),
            &l[1].concat(&l[3]).expect("same space"),
        );
        let bound = ab.approx(20).max(h(&l[2], &l[3]).approx(20)) + slack.clone();
        if joined.approx(20) > bound {
            failures.push(format!("case {case}: contraction"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: failures.is_empty() && secs < 30.0,
        detail: format!("1000 cases, {} failures{}, {secs:.1}s of 30s", failures.len(), first_of(&failures)),
    }
}

// ---------- criterion 2 ----------

fn majorization_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let tols = [q("1/4"), q("1/16"), q("1/64")];
    let (mut violations, mut affirm, mut refute) = (0, 0, 0);
    for case in 0..300 {
        let dim = 1 + case % 2;
        let space = space_of(dim);
        let base = random_coords(&mut rng, dim, 6);
        // sub is a jittered subset of base, or an unrelated list
        let sub: Vec<Vec<Rat>> = if case % 3 == 2 {
            random_coords(&mut rng, dim, 6)
        } else {
            let scale = [q("0"), q("1/256"), q("1/32"), q("1/8"), q("1/2")][rng.gen_range(0..5)].clone();
            let mut out = Vec::new();
            for p in &base {
                if rng.gen_bool(0.7) {
                    out.push(
                        p.iter()
                            .map(|c| c + &(&scale * &Rat::from(rng.gen_range(-2i64..=2))))
                            .collect(),
                    );
                }
            }
            out
        };
        let sub = if sub.is_empty() { vec![base[0].clone()] } else { sub };
        let truth = brute_directed(&sub, &base);
        let hide = case % 4 == 0;
        let ks = Compact::of_list(to_list(space, &sub, hide));
        let k = Compact::of_list(to_list(space, &base, hide));
        for tol in &tols {
            match majorizes(&ks, &k, tol).expect("valid input") {
                Verdict::LessThanB => {
                    affirm += 1;
                    if truth > *tol {
                        violations += 1;
                    }
                }
                Verdict::GreaterThanA => {
                    refute += 1;
                    if truth < tol / &Rat::from(2) {
                        violations += 1;
                    }
                }
            }
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!("300 pairs x 3 tolerances, {affirm} affirmed, {refute} refuted, {violations} contract violations"),
    }
}

// ---------- criterion 3 ----------

fn sup_inf_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut failures = 0;
    for case in 0..200 {
        let raw = random_coords(&mut rng, 1, 12);
        let max = raw.iter().map(|c| c[0].clone()).max().expect("nonempty");
        let min = raw.iter().map(|c| c[0].clone()).min().expect("nonempty");
        let k = Compact::of_list(to_list(MetricSpace::RealLine, &raw, case % 2 == 0));
        let (sup, inf) = sup_inf(&k).expect("real line");
        if (sup.approx(20) - max).abs() > tiny(20) || (inf.approx(20) - min).abs() > tiny(20) {
            failures += 1;
        }
    }
    let mut grid_cases = 0;
    for _ in 0..20 {
        let a = random_dyadic(&mut rng, -4, 0, 3);
        let b = &a + &random_dyadic(&mut rng, 0, 4, 3) + tiny(3);
        let spacing = Rat::pow2(-rng.gen_range(2..=6));
        let bound = &Rat::from(2) * &spacing;
        let listed = Compact::of_list(grid_net(MetricSpace::RealLine, &[(a.clone(), b.clone())], &spacing).expect("box"));
        let completed = completed_box(MetricSpace::RealLine, vec![(a.clone(), b.clone())]);
        for k in [listed, completed] {
            grid_cases += 1;
            let (sup, inf) = sup_inf(&k).expect("real line");
            let p = 1 - spacing.floor_log2();
            if (sup.approx(p) - b.clone()).abs() > bound || (inf.approx(p) - a.clone()).abs() > bound {
                failures += 1;
            }
        }
    }
    Outcome {
        pass: failures == 0,
        detail: format!("200 list compacts, {grid_cases} grid compacts, {failures} failures"),
    }
}

// ---------- criterion 4 ----------

enum Instance {
    List(Vec<Vec<Rat>>),
    Box(Vec<(Rat, Rat)>),
}

fn check_piece(k: &Compact, inst: &Instance, x: &[Rat], eps: &Rat, piece: &Compact, rng: &mut ChaCha8Rng) -> Option<String> {
    let xp = Point::from_rats(x);
    for tol in [q("1/4"), q("1/16")] {
        if majorizes(piece, k, &tol).ok()? != Verdict::LessThanB {
            return Some(format!("(a) piece not majorized at {tol}"));
        }
    }
    let reach = &Rat::from(2) * eps + tiny(18);
    for n in 0..=6 {
        for p in piece.net(n).points() {
            if k.space().dist(p, &xp).approx(20) > reach {
                return Some(format!("(b) net point beyond 2ε at precision {n}"));
            }
        }
    }
    let members: Vec<Vec<Rat>> = match inst {
        Instance::List(c) => c.clone(),
        Instance::Box(bounds) => (0..16)
            .map(|_| {
                bounds
                    .iter()
                    .map(|(lo, hi)| lo + &(&(hi - lo) * &Rat::new(rng.gen_range(0..=64), 64).expect("nonzero")))
                    .collect()
            })
            .collect(),
    };
    for y in members.iter().filter(|y| exact_dist(y, x) < *eps) {
        if is_member(&Point::from_rats(y), piece, &q("1/16")).ok()? != Verdict::LessThanB {
            return Some("(c) nearby member not in piece".into());
        }
    }
    None
}

fn ball_split_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let (mut pieces, mut misses, mut empties) = (0, 0, 0);
    let mut failures = Vec::new();
    for case in 0..200 {
        let dim = if case % 10 == 9 { 1 } else { 1 + case % 2 };
        let space = space_of(dim);
        let inst = if case % 10 == 9 {
            let bounds = (0..1)
                .map(|_| {
                    let lo = random_dyadic(&mut rng, -2, 0, 2);
                    let hi = &lo + &random_dyadic(&mut rng, 0, 2, 2) + tiny(2);
                    (lo, hi)
                })
                .collect();
            Instance::Box(bounds)
        } else {
            Instance::List(random_coords(&mut rng, dim, 12))
        };
        let k = match &inst {
            Instance::List(c) => Compact::of_list(to_list(space, c, false)),
            Instance::Box(b) => completed_box(space, b.clone()),
        };
        let x: Vec<Rat> = (0..dim).map(|_| random_dyadic(&mut rng, -8, 8, 3)).collect();
        let mut eps = Rat::pow2(rng.gen_range(-3..=2));
        let mut retried = false;
        loop {
            match ball_split(&k, &Point::from_rats(&x), &eps) {
                Ok(SplitResult::Miss) => {
                    misses += 1;
                    let gap = match &inst {
                        Instance::List(c) => c.iter().map(|p| exact_dist(p, &x)).min().expect("nonempty"),
                        Instance::Box(b) => dist_to_box(&x, b),
                    };
                    if gap < eps {
                        failures.push(format!("case {case}: Miss with a member at distance {gap} < {eps}"));
                    }
                }
                Ok(SplitResult::Piece(p)) => {
                    pieces += 1;
                    if let Some(why) = check_piece(&k, &inst, &x, &eps, &p, &mut rng) {
                        failures.push(format!("case {case}: {why}"));
                    }
                }
                Err(Error::EmptyPiece) if !retried => {
                    empties += 1;
                    println!("  criterion 4 case {case}: EmptyPiece at ε = {eps}, retrying at 2ε");
                    retried = true;
                    eps = &eps * &Rat::from(2);
                    continue;
                }
                Err(e) => failures.push(format!("case {case}: {e}")),
            }
            break;
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "200 instances: {pieces} pieces, {misses} misses, {empties} EmptyPiece retried, {} failures{}",
            failures.len(),
            first_of(&failures)
        ),
    }
}

// ---------- criterion 5 and its replays ----------

thread_local! {
    static INSIDE_ORACLE: Cell<u32> = const { Cell::new(0) };
}

struct OracleScope;

impl OracleScope {
    fn enter() -> Self {
        INSIDE_ORACLE.with(|c| c.set(c.get() + 1));
        OracleScope
    }
}

impl Drop for OracleScope {
    fn drop(&mut self) {
        INSIDE_ORACLE.with(|c| c.set(c.get() - 1));
    }
}

/// The hidden reference modulus; any use outside the image oracle panics.
struct SealedModulus {
    inner: Arc<dyn UniformModulus>,
    calls: Arc<AtomicUsize>,
}

impl UniformModulus for SealedModulus {
    fn delta(&self, k: &Compact, eps: &Rat) -> Rat {
        assert!(
            INSIDE_ORACLE.with(|c| c.get()) > 0,
            "reference modulus consulted outside the image oracle"
        );
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.delta(k, eps)
    }
}

/// `Π_f` whose lazily evaluated nets also run inside the oracle scope.
struct SealedOracle {
    f: EffectiveMap,
    mu: Arc<dyn UniformModulus>,
}

impl ImageOracle for SealedOracle {
    fn image(&self, k: &Compact) -> Result<Compact> {
        let _scope = OracleScope::enter();
        let img = image_compact(&self.f, Arc::clone(&self.mu), k)?;
        if img.fixed().is_some() {
            return Ok(img);
        }
        Ok(Compact::from_net(img.space(), move |n| {
            let _scope = OracleScope::enter();
            img.net(n)
        }))
    }
}

struct Cell5 {
    label: String,
    delta: std::result::Result<Rat, String>,
    report: Option<SoundnessReport>,
    elapsed: Duration,
}

fn test_compacts() -> Vec<(&'static str, Compact)> {
    let line = MetricSpace::RealLine;
    let unit = Compact::of_list(grid_net(line, &[(q("0"), q("1"))], &tiny(6)).expect("box"));
    let square = Compact::of_list(
        grid_net(MetricSpace::SupBox(2), &[(q("-1"), q("1")), (q("-1"), q("1"))], &tiny(5)).expect("box"),
    );
    let left = Compact::of_list(grid_net(line, &[(q("0"), q("1/4"))], &tiny(6)).expect("box"));
    let right = Compact::of_list(grid_net(line, &[(q("3/4"), q("1"))], &tiny(6)).expect("box"));
    let split = compact_union(&left, &right).expect("same space");
    vec![("[0,1]@2^-6", unit), ("[-1,1]^2@2^-5", square), ("[0,1/4]u[3/4,1]", split)]
}

fn modulus_cells(budget: u32, sample: bool) -> Vec<Cell5> {
    let mut cells = Vec::new();
    for (kname, k) in test_compacts() {
        for map in CatalogMap::ALL {
            for eps in [q("1/2"), q("1/10")] {
                let label = format!("f={map} K={kname} eps={eps}");
                let f = map.map(k.space());
                let calls = Arc::new(AtomicUsize::new(0));
                let sealed: Arc<dyn UniformModulus> = Arc::new(SealedModulus {
                    inner: map.reference_modulus(&Rat::one()),
                    calls: Arc::clone(&calls),
                });
                let pi: Arc<dyn ImageOracle> = Arc::new(SealedOracle { f: f.clone(), mu: sealed });
                let start = Instant::now();
                let delta = catch_unwind(AssertUnwindSafe(|| {
                    Extractor::new(budget).uniform_modulus(&f, pi, &k, &eps)
                }))
                .map_err(|_| "panicked".to_string())
                .and_then(|r| r.map_err(|e| e.to_string()));
                let elapsed = start.elapsed();
                let report = match (&delta, sample) {
                    (Ok(d), true) => check_soundness(&f, &k, d, &eps, &tiny(20), 1000, SEED, budget).ok(),
                    _ => None,
                };
                cells.push(Cell5 {
                    label,
                    delta,
                    report,
                    elapsed,
                });
            }
        }
    }
    cells
}

fn soundness(cells: &[Cell5]) -> Outcome {
    let mut bad = Vec::new();
    let (mut pairs, mut distinct) = (0, 0);
    for c in cells {
        let verdict = match (&c.delta, &c.report) {
            (Ok(d), Some(r)) => {
                pairs += r.pairs;
                distinct += r.distinct_pairs;
                println!(
                    "  {}: δ = {d}, {} pairs ({} distinct), {} violations, {:.2}s",
                    c.label, r.pairs, r.distinct_pairs, r.violations, c.elapsed.as_secs_f64()
                );
                d.is_positive() && r.violations == 0 && r.pairs >= 1000 && c.elapsed <= CELL_LIMIT
            }
            (Ok(d), None) => {
                println!("  {}: δ = {d}, sampling failed", c.label);
                false
            }
            (Err(e), _) => {
                println!("  {}: error {e}", c.label);
                false
            }
        };
        if !verdict {
            bad.push(c.label.clone());
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{} cells, {} failing{}, {pairs} pairs sampled ({distinct} distinct), firewall held",
            cells.len(),
            bad.len(),
            first_of(&bad)
        ),
    }
}

fn determinism(first: &[Cell5]) -> Outcome {
    let again = modulus_cells(64, true);
    let same = first.len() == again.len()
        && first.iter().zip(&again).all(|(a, b)| {
            format!("{:?}", a.delta) == format!("{:?}", b.delta) && a.report == b.report
        });
    Outcome {
        pass: same,
        detail: format!("{} cells replayed with seed {SEED:#x}, δ values identical: {same}", again.len()),
    }
}

fn budget_monotonicity(first: &[Cell5]) -> Outcome {
    let doubled = modulus_cells(128, false);
    let mut changed = Vec::new();
    let mut compared = 0;
    for (a, b) in first.iter().zip(&doubled) {
        if let Ok(d) = &a.delta {
            compared += 1;
            if b.delta.as_ref().ok() != Some(d) {
                changed.push(a.label.clone());
            }
        }
    }
    Outcome {
        pass: changed.is_empty(),
        detail: format!("{compared} successful cells rerun at budget 128, {} changed{}", changed.len(), first_of(&changed)),
    }
}

/// ` (first: ...)` when anything failed.
fn first_of<T: std::fmt::Debug>(bad: &[T]) -> String {
    bad.first().map(|b| format!(" (first: {b:?})")).unwrap_or_default()
}

/// A named compact with the box its members lie in.
type Domain = (&'static str, Compact, Vec<(Rat, Rat)>);

// ---------- criterion 6 ----------

fn forward_images() -> Outcome {
    let line = MetricSpace::RealLine;
    let spacing = tiny(6);
    let tol = &Rat::from(2) * &spacing + tiny(16);
    let mut checked = 0;
    let mut bad = Vec::new();
    let domains: Vec<Domain> = {
        let ks = test_compacts();
        vec![
            (ks[0].0, ks[0].1.clone(), vec![(q("0"), q("1"))]),
            (ks[1].0, ks[1].1.clone(), vec![(q("-1"), q("1"))]),
            (ks[2].0, ks[2].1.clone(), vec![(q("0"), q("1/4")), (q("3/4"), q("1"))]),
            ("[0,1] completed", completed_box(line, vec![(q("0"), q("1"))]), vec![(q("0"), q("1"))]),
        ]
    };
    for map in CatalogMap::ALL {
        for (kname, k, pieces) in &domains {
            let (lo, hi) = pieces
                .iter()
                .map(|(a, b)| map.range(a, b))
                .reduce(|(l1, h1), (l2, h2)| (l1.min(l2), h1.max(h2)))
                .expect("nonempty");
            let img = image_compact(&map.map(k.space()), map.reference_modulus(&Rat::one()), k).expect("image");
            let (sup, inf) = sup_inf(&img).expect("real codomain");
            checked += 1;
            let (s, i) = (sup.approx(16), inf.approx(16));
            if (s.clone() - hi.clone()).abs() > tol || (i.clone() - lo.clone()).abs() > tol {
                bad.push(format!("{map} on {kname}: [{i}, {s}] vs [{lo}, {hi}]"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("{checked} images checked against analytic ranges, {} mismatches{}", bad.len(), first_of(&bad)),
    }
}

fn main() {
    let mut all = true;
    all &= run(1, "Hausdorff metric suite", hausdorff_suite);
    all &= run(2, "majorization equivalence", majorization_suite);
    all &= run(3, "sup/inf exactness", sup_inf_suite);
    all &= run(4, "ball_split postconditions", ball_split_suite);
    let mut cells = Vec::new();
    all &= run(5, "modulus extraction soundness", || {
        cells = modulus_cells(64, true);
        soundness(&cells)
    });
    all &= run(6, "image compacts", forward_images);
    all &= run(7, "determinism", || determinism(&cells));
    all &= run(8, "budget monotonicity", || budget_monotonicity(&cells));
    if !all {
        println!("acceptance: FAILED");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
