//! Smoothings, circle tracing and the bracket state sums.
//!
//! A state assigns `+1` (positive smoothing) or `-1` (negative) to every
//! crossing. Which reconnection is positive at a crossing is fixed by its
//! sign: along the orientation for `1` and `i`, across for `-1` and `-i`.
//! For the classical bracket on an orientable surface the positive smoothing
//! is the A-smoothing, which in handedness terms is along for `+1` crossings
//! and across for `-1` ones, so both invariants share one evaluation engine.
//!
//! The optimized evaluator tallies `(circle count, exponent sum)` pairs over
//! the whole state space with integer counters and converts the histogram to
//! a polynomial once at the end; the state space may be partitioned across
//! worker threads. `bracket_sum_bruteforce` is the independent oracle: it
//! retraces every state with a union-find over arcs and accumulates plain
//! polynomial arithmetic per state.

use num_bigint::BigInt;
use std::collections::BTreeMap;

use crate::cabling::{crossing_sign, writhe_numbers, LabelAssignment, Sign};
use crate::error::DomainError;
use crate::laurent::{ClassKey, ClassPoly, JPoly, LaurentU};
use crate::surface::{compile, Compiled, Diagram};

/// The loop value `-u^2 - u^{-2}` contributed by each extra circle.
pub fn circle_factor() -> LaurentU {
    LaurentU::from_terms([(2i64, -1i64), (-2, -1)])
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SmoothingKind {
    Along,
    Across,
}

impl SmoothingKind {
    pub fn other(&self) -> SmoothingKind {
        match self {
            SmoothingKind::Along => SmoothingKind::Across,
            SmoothingKind::Across => SmoothingKind::Along,
        }
    }
}

/// The four strand ends at a crossing, named relative to the traversal
/// orientation of each branch.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HalfEdge {
    OverIn,
    OverOut,
    UnderIn,
    UnderOut,
}

/// The local rewiring of the four half-edges, independent of handedness and
/// of which branch is over: along joins in-flow to out-flow across branches;
/// across joins the two in ends and the two out ends (reversing one).
pub fn smoothing_pairing(kind: SmoothingKind) -> [(HalfEdge, HalfEdge); 2] {
    match kind {
        SmoothingKind::Along => [
            (HalfEdge::OverIn, HalfEdge::UnderOut),
            (HalfEdge::UnderIn, HalfEdge::OverOut),
        ],
        SmoothingKind::Across => [
            (HalfEdge::OverIn, HalfEdge::UnderIn),
            (HalfEdge::OverOut, HalfEdge::UnderOut),
        ],
    }
}

/// Positive smoothing kind at a crossing: along iff the sign is `1` or `i`.
pub fn positive_smoothing_kind(
    d: &Diagram,
    la: &LabelAssignment,
    x: u32,
) -> Result<SmoothingKind, DomainError> {
    let s = crossing_sign(d, la, x)?;
    Ok(match s {
        Sign::One | Sign::I => SmoothingKind::Along,
        Sign::MinusOne | Sign::MinusI => SmoothingKind::Across,
    })
}

/// A smoothing choice per crossing: `+1` positive, `-1` negative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct State {
    signs: Vec<i8>,
}

impl State {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(signs.iter().all(|&s| s == 1 || s == -1));
        State { signs }
    }

    pub fn from_mask(mask: u64, m: usize) -> Self {
        State {
            signs: (0..m)
                .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
                .collect(),
        }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Bitmask with bit `i` set iff `S(i+1) = +1`.
    pub fn mask(&self) -> u64 {
        self.signs
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &s)| if s == 1 { acc | 1 << i } else { acc })
    }

    pub fn exponent_sum(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }
}

/// Z/2 wall-crossing parities of one smoothed circle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CircleClass {
    pub wall_parity_v: bool,
    pub wall_parity_h: bool,
}

impl CircleClass {
    pub fn key(&self) -> ClassKey {
        ClassKey::new(self.wall_parity_v, self.wall_parity_h)
    }

    pub fn is_trivial(&self) -> bool {
        !self.wall_parity_v && !self.wall_parity_h
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceResult {
    pub n: usize,
    pub circles: Vec<CircleClass>,
}

// ---------------------------------------------------------------------------
// evaluation engine

/// Hard cap for the dart bitset; diagrams evaluated by the state sum must
/// stay within it.
const MAX_CROSSINGS: u32 = 32;

/// Guard for the naive per-state oracle.
const BRUTE_LIMIT: u32 = 20;

struct Engine {
    c: Compiled,
    m: usize,
    /// Bit `i` set iff the positive smoothing of crossing `i+1` is along.
    pos_along: u64,
    /// Per dart: crossing met at its head, successor if smoothed along,
    /// successor if smoothed across. Darts are `2*arc + dir`; forward darts
    /// end at the in-slot of the next passage, backward darts at the
    /// out-slot of their own passage.
    dart_crossing: Vec<u32>,
    succ_along: Vec<u32>,
    succ_across: Vec<u32>,
}

impl Engine {
    fn for_j(d: &Diagram, la: &LabelAssignment) -> Result<Engine, DomainError> {
        let c = compile(d).map_err(DomainError::Invalid)?;
        guard_size(d.n_crossings, MAX_CROSSINGS)?;
        let mut pos_along = 0u64;
        for x in 1..=d.n_crossings {
            if positive_smoothing_kind(d, la, x)? == SmoothingKind::Along {
                pos_along |= 1 << (x - 1);
            }
        }
        Ok(Engine::new(c, d.n_crossings as usize, pos_along))
    }

    fn for_bracket(d: &Diagram) -> Result<Engine, DomainError> {
        if !d.surface.is_orientable() {
            return Err(DomainError::NonOrientableSurface);
        }
        let c = compile(d).map_err(DomainError::Invalid)?;
        guard_size(d.n_crossings, MAX_CROSSINGS)?;
        let mut pos_along = 0u64;
        for x in 1..=d.n_crossings {
            match d.handedness_of(x) {
                Some(1) => pos_along |= 1 << (x - 1),
                Some(-1) => {}
                _ => return Err(DomainError::Invalid(format!("bad handedness at {x}"))),
            }
        }
        Ok(Engine::new(c, d.n_crossings as usize, pos_along))
    }

    fn new(c: Compiled, m: usize, pos_along: u64) -> Engine {
        let darts = 2 * c.arcs.len();
        let mut dart_crossing = vec![0u32; darts];
        let mut succ_along = vec![0u32; darts];
        let mut succ_across = vec![0u32; darts];
        for dart in 0..darts {
            let arc = dart >> 1;
            let backward = dart & 1 == 1;
            let p = if backward { arc } else { c.next_in_comp(arc) };
            let crossing = c.passages[p].crossing;
            let slots = c.slots[crossing];
            let q = if slots[0] == p { slots[1] } else { slots[0] };
            let via_out = (q << 1) as u32;
            let via_in = (c.prev_in_comp(q) << 1 | 1) as u32;
            dart_crossing[dart] = crossing as u32;
            if backward {
                succ_along[dart] = via_in;
                succ_across[dart] = via_out;
            } else {
                succ_along[dart] = via_out;
                succ_across[dart] = via_in;
            }
        }
        Engine {
            c,
            m,
            pos_along,
            dart_crossing,
            succ_along,
            succ_across,
        }
    }

    fn along_mask(&self, state_mask: u64) -> u64 {
        let all = if self.m == 64 {
            !0
        } else {
            (1u64 << self.m) - 1
        };
        self.pos_along ^ (!state_mask & all)
    }

    #[inline]
    fn succ(&self, dart: usize, along: u64) -> usize {
        if along >> self.dart_crossing[dart] & 1 == 1 {
            self.succ_along[dart] as usize
        } else {
            self.succ_across[dart] as usize
        }
    }

    fn darts(&self) -> usize {
        2 * self.c.arcs.len()
    }

    /// Number of circles after smoothing (orphan circle components included).
    fn count_circles(&self, along: u64) -> usize {
        let darts = self.darts();
        let mut visited: u128 = 0;
        let mut circles = self.c.orphans.len();
        for d0 in 0..darts {
            if visited >> d0 & 1 == 1 {
                continue;
            }
            circles += 1;
            let mut d = d0;
            loop {
                // also mark the reverse dart: each circle is one orbit
                visited |= (1u128 << d) | (1u128 << (d ^ 1));
                d = self.succ(d, along);
                if d == d0 {
                    break;
                }
            }
        }
        circles
    }

    fn trace_full(&self, along: u64) -> TraceResult {
        let darts = self.darts();
        let mut visited: u128 = 0;
        let mut circles = Vec::new();
        for d0 in 0..darts {
            if visited >> d0 & 1 == 1 {
                continue;
            }
            let mut v = 0u32;
            let mut h = 0u32;
            let mut d = d0;
            loop {
                visited |= (1u128 << d) | (1u128 << (d ^ 1));
                let w = self.c.arcs[d >> 1];
                v += w.v_passes;
                h += w.h_passes;
                d = self.succ(d, along);
                if d == d0 {
                    break;
                }
            }
            circles.push(CircleClass {
                wall_parity_v: v % 2 == 1,
                wall_parity_h: h % 2 == 1,
            });
        }
        for w in &self.c.orphans {
            circles.push(CircleClass {
                wall_parity_v: w.v_passes % 2 == 1,
                wall_parity_h: w.h_passes % 2 == 1,
            });
        }
        TraceResult {
            n: circles.len(),
            circles,
        }
    }

    /// Histogram of `(n(S), exponent sum)` over every state, split across
    /// `threads` workers.
    fn histogram(&self, threads: usize) -> Vec<u64> {
        let m = self.m;
        let n_max = self.c.arcs.len() + self.c.orphans.len() + 1;
        let width = 2 * m + 1;
        let total: u64 = 1u64 << m;
        let workers = threads.max(1).min(total.max(1) as usize);

        let run = |lo: u64, hi: u64| -> Vec<u64> {
            let mut hist = vec![0u64; (n_max + 1) * width];
            for state in lo..hi {
                let n = self.count_circles(self.along_mask(state));
                let sigma = 2 * state.count_ones() as i64 - m as i64;
                hist[n * width + (sigma + m as i64) as usize] += 1;
            }
            hist
        };

        if workers <= 1 || total < 1 << 10 {
            return run(0, total);
        }
        let chunk = total.div_ceil(workers as u64);
        let mut parts: Vec<Vec<u64>> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..workers as u64 {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(total);
                if lo >= hi {
                    break;
                }
                handles.push(scope.spawn(move || run(lo, hi)));
            }
            for h in handles {
                parts.push(h.join().expect("state-sum worker panicked"));
            }
        });
        let mut hist = vec![0u64; (n_max + 1) * width];
        for part in parts {
            for (acc, x) in hist.iter_mut().zip(part) {
                *acc += x;
            }
        }
        hist
    }

    /// `sum_S (-u^2-u^{-2})^{n(S)-1} u^{sum S(x)}` via the histogram.
    fn state_sum(&self, threads: usize) -> LaurentU {
        let m = self.m;
        let width = 2 * m + 1;
        let hist = self.histogram(threads);
        let d = circle_factor();
        let mut d_pow = LaurentU::one();
        let mut out = LaurentU::zero();
        let n_max = hist.len() / width;
        for n in 1..n_max {
            for s in 0..width {
                let count = hist[n * width + s];
                if count > 0 {
                    let sigma = s as i64 - m as i64;
                    out = out.add(&d_pow.shift(sigma).scale(&BigInt::from(count)));
                }
            }
            d_pow = d_pow.mul(&d);
        }
        out
    }
}

/// Canonical `J` and `|w2|` with a single-threaded state sum; the fuzz
/// driver parallelizes across trajectories instead of inside each sum.
pub(crate) fn j_canonical_and_w2_single(d: &Diagram) -> Result<(JPoly, u32), DomainError> {
    use crate::cabling::{propagate_labels, Labeling};
    let la = propagate_labels(d, Labeling::A)?;
    let w = writhe_numbers(d, &la)?;
    let engine = Engine::for_j(d, &la)?;
    let sum = engine.state_sum(1);
    let j = JPoly::new(w.w2_abs(), j_prefactor(w.w1).mul(&sum));
    Ok((j.canonical_pair(), w.w2_abs()))
}

fn guard_size(m: u32, limit: u32) -> Result<(), DomainError> {
    if m > limit {
        Err(DomainError::TooManyCrossings {
            crossings: m,
            limit,
        })
    } else {
        Ok(())
    }
}

/// Number of state-sum workers: `NONOR_THREADS` if set, else the machine
/// parallelism.
pub fn worker_count() -> usize {
    let fallback = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("NONOR_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(n) if n >= 1 => n.min(256),
        _ => fallback,
    }
}

fn check_state(d: &Diagram, s: &State) -> Result<(), DomainError> {
    if s.len() != d.n_crossings as usize {
        return Err(DomainError::StateSizeMismatch {
            got: s.len(),
            expected: d.n_crossings as usize,
        });
    }
    Ok(())
}

/// Circles produced by smoothing every crossing according to the state,
/// with per-circle wall parities.
pub fn trace_circles(
    d: &Diagram,
    la: &LabelAssignment,
    s: &State,
) -> Result<TraceResult, DomainError> {
    check_state(d, s)?;
    let engine = Engine::for_j(d, la)?;
    Ok(engine.trace_full(engine.along_mask(s.mask())))
}

/// The monomial `(-u^2-u^{-2})^{n(S)-1} * prod_x u^{S(x)}` of one state.
pub fn state_weight(d: &Diagram, la: &LabelAssignment, s: &State) -> Result<LaurentU, DomainError> {
    check_state(d, s)?;
    let engine = Engine::for_j(d, la)?;
    let n = engine.count_circles(engine.along_mask(s.mask()));
    Ok(circle_factor().pow(n as u32 - 1).shift(s.exponent_sum()))
}

fn j_prefactor(w1: i64) -> LaurentU {
    // (-u)^{-3 w1} = (-1)^{w1} u^{-3 w1}
    let sign = if w1.rem_euclid(2) == 0 { 1 } else { -1 };
    LaurentU::monomial(-3 * w1, sign)
}

/// The raw state sum of `J` (no writhe prefactor), evaluated in parallel.
pub fn j_state_sum(d: &Diagram, la: &LabelAssignment) -> Result<LaurentU, DomainError> {
    Ok(Engine::for_j(d, la)?.state_sum(worker_count()))
}

/// `J(D; u, v) = (-u)^{-3 w1} v^{|w2|} sum_S P(S; u)`.
pub fn j_polynomial(d: &Diagram, la: &LabelAssignment) -> Result<JPoly, DomainError> {
    let w = writhe_numbers(d, la)?;
    let sum = j_state_sum(d, la)?;
    Ok(JPoly::new(w.w2_abs(), j_prefactor(w.w1).mul(&sum)))
}

/// The raw classical bracket state sum on an orientable surface.
pub fn classical_state_sum(d: &Diagram) -> Result<LaurentU, DomainError> {
    Ok(Engine::for_bracket(d)?.state_sum(worker_count()))
}

/// Normalized classical Kauffman bracket `(-u)^{-3w} <D>` for a diagram on
/// an orientable surface; `w` sums the handedness of all crossings,
/// intersections of distinct components included.
pub fn classical_bracket(d: &Diagram) -> Result<LaurentU, DomainError> {
    let w: i64 = d.handedness.iter().map(|&h| h as i64).sum();
    let sum = classical_state_sum(d)?;
    Ok(j_prefactor(w).mul(&sum))
}

// ---------------------------------------------------------------------------
// brute-force oracle: independent union-find tracer, plain polynomial
// arithmetic per state

fn union_find_circles(c: &Compiled, along: u64) -> usize {
    let arcs = c.arcs.len();
    let mut parent: Vec<usize> = (0..arcs).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for (x, slots) in c.slots.iter().enumerate() {
        let (p1, p2) = (slots[0], slots[1]);
        let (in1, out1) = (c.prev_in_comp(p1), p1);
        let (in2, out2) = (c.prev_in_comp(p2), p2);
        if along >> x & 1 == 1 {
            union(&mut parent, in1, out2);
            union(&mut parent, in2, out1);
        } else {
            union(&mut parent, in1, in2);
            union(&mut parent, out1, out2);
        }
    }
    let mut roots: Vec<usize> = (0..arcs).map(|a| find(&mut parent, a)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len() + c.orphans.len()
}

fn bruteforce_sum(c: &Compiled, m: u32, pos_along: u64) -> LaurentU {
    let all = if m == 0 { 0 } else { (1u64 << m) - 1 };
    let d_poly = circle_factor();
    let mut out = LaurentU::zero();
    for state in 0..(1u64 << m) {
        let along = pos_along ^ (!state & all);
        let n = union_find_circles(c, along);
        let sigma = 2 * state.count_ones() as i64 - m as i64;
        out = out.add(&d_poly.pow(n as u32 - 1).shift(sigma));
    }
    out
}

/// Direct enumeration of all `2^m` states with naive circle tracing; the
/// oracle the optimized evaluator is checked against. Guarded at 20
/// crossings.
pub fn bracket_sum_bruteforce(d: &Diagram, la: &LabelAssignment) -> Result<LaurentU, DomainError> {
    guard_size(d.n_crossings, BRUTE_LIMIT)?;
    let engine = Engine::for_j(d, la)?;
    Ok(bruteforce_sum(&engine.c, d.n_crossings, engine.pos_along))
}

/// Brute-force companion of `classical_state_sum`.
pub fn classical_bracket_bruteforce(d: &Diagram) -> Result<LaurentU, DomainError> {
    guard_size(d.n_crossings, BRUTE_LIMIT)?;
    let engine = Engine::for_bracket(d)?;
    Ok(bruteforce_sum(&engine.c, d.n_crossings, engine.pos_along))
}

// ---------------------------------------------------------------------------
// homological refinement

/// Module-valued refinement: per state, trivial circles contribute the
/// scalar factor `-u^2-u^{-2}` and every nontrivial circle contributes the
/// generator of its class. One circle's factor is normalized away per state:
/// a trivial one when the state has any, otherwise one copy of the smallest
/// class, which keeps the specialization `generator -> -u^2-u^{-2}` exactly
/// equal to `J`.
pub fn generalized_j(d: &Diagram, la: &LabelAssignment) -> Result<ClassPoly, DomainError> {
    let engine = Engine::for_j(d, la)?;
    let w = writhe_numbers(d, la)?;
    let m = d.n_crossings;
    let mut tally: BTreeMap<(Vec<ClassKey>, usize, i64), u64> = BTreeMap::new();
    for state in 0..(1u64 << m) {
        let trace = engine.trace_full(engine.along_mask(state));
        let mut key: Vec<ClassKey> = trace
            .circles
            .iter()
            .filter(|c| !c.is_trivial())
            .map(|c| c.key())
            .collect();
        key.sort();
        let trivial = trace.n - key.len();
        let d_exp = if trivial > 0 {
            trivial - 1
        } else {
            key.remove(0);
            0
        };
        let sigma = 2 * state.count_ones() as i64 - m as i64;
        *tally.entry((key, d_exp, sigma)).or_insert(0) += 1;
    }

    let prefactor = j_prefactor(w.w1);
    let d_poly = circle_factor();
    let mut out = ClassPoly::new(w.w2_abs());
    for ((key, d_exp, sigma), count) in tally {
        let val = d_poly
            .pow(d_exp as u32)
            .shift(sigma)
            .scale(&BigInt::from(count))
            .mul(&prefactor);
        out.add_term(key, val);
    }
    Ok(out)
}
