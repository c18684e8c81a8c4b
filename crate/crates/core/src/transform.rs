//! Diagram rewriting: crossing change, Reidemeister moves, seeded random
//! move trajectories, orientation reversal and the Klein-bottle-to-torus
//! orientation double cover.
//!
//! Moves are surgeries on the event sequences. Insertion points are the gaps
//! between consecutive events that do not fall inside a wall-gluing pair, so
//! every move stays inside the rectangle chart and wall events are never
//! created or destroyed.

use serde::{Deserialize, Serialize};

use crate::error::{DomainError, MoveError};
use crate::surface::{wall_pairs, Diagram, Event, Side, Surface};

/// Insertion point: the gap before event `gap` of a component (gap 0 both
/// precedes the first event and follows the last).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ArcPos {
    pub component: usize,
    pub gap: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MoveDescriptor {
    R1Add {
        pos: ArcPos,
        over_first: bool,
        local_sign: i8,
    },
    R1Remove {
        crossing: u32,
    },
    R2Add {
        pos1: ArcPos,
        pos2: ArcPos,
        which_over: u8,
        lead_sign: i8,
        /// Whether the second strand meets the new crossings in the same
        /// order as the first.
        parallel: bool,
    },
    R2Remove {
        crossings: (u32, u32),
    },
    R3 {
        crossings: (u32, u32, u32),
    },
}

/// Swap the over/under flags at one crossing. The planar handedness is
/// defined on the ordered (over, under) frame, so it is negated.
pub fn crossing_change(d: &Diagram, x: u32) -> Result<Diagram, DomainError> {
    if x == 0 || x > d.n_crossings {
        return Err(DomainError::NoSuchCrossing(x));
    }
    let mut out = d.clone();
    for comp in &mut out.components {
        for ev in comp.iter_mut() {
            if let Event::Crossing { id, over } = ev {
                if *id == x {
                    *over = !*over;
                }
            }
        }
    }
    out.handedness[(x - 1) as usize] = -out.handedness[(x - 1) as usize];
    Ok(out)
}

/// Reverse the traversal orientation of every component. Over/under data and
/// handedness are unchanged (both tangents flip).
pub fn reverse_orientation(d: &Diagram) -> Diagram {
    let mut out = d.clone();
    for comp in &mut out.components {
        comp.reverse();
    }
    out
}

// ---------------------------------------------------------------------------
// move machinery

fn glue_entry_flags(d: &Diagram, comp: &[Event]) -> Vec<bool> {
    let mut entry = vec![false; comp.len()];
    if let Ok(pairs) = wall_pairs(d, comp) {
        for (_, e) in pairs {
            entry[e] = true;
        }
    }
    entry
}

/// Gaps of one component that are legal insertion points (not between the
/// exit and entry halves of a wall pass).
fn component_gaps(d: &Diagram, ci: usize) -> Vec<usize> {
    let comp = &d.components[ci];
    let n = comp.len();
    if n == 0 {
        return vec![0];
    }
    let entry = glue_entry_flags(d, comp);
    (0..n).filter(|&g| !entry[g]).collect()
}

/// All legal insertion points of the diagram.
pub fn valid_positions(d: &Diagram) -> Vec<ArcPos> {
    (0..d.components.len())
        .flat_map(|ci| {
            component_gaps(d, ci)
                .into_iter()
                .map(move |gap| ArcPos { component: ci, gap })
        })
        .collect()
}

fn check_pos(d: &Diagram, p: &ArcPos) -> Result<(), MoveError> {
    let comp = d
        .components
        .get(p.component)
        .ok_or(MoveError::NoSuchComponent(p.component))?;
    let n = comp.len();
    if p.gap > n.saturating_sub(1) && !(n == 0 && p.gap == 0) {
        return Err(MoveError::GapOutOfRange {
            component: p.component,
            gap: p.gap,
        });
    }
    if n > 0 && glue_entry_flags(d, comp)[p.gap] {
        return Err(MoveError::PositionInsideGluing);
    }
    Ok(())
}

/// Remove the given crossing ids entirely: drop `positions` (per component)
/// and renumber the remaining crossings densely.
fn remove_crossings(d: &Diagram, ids: &[u32], positions: &[(usize, usize)]) -> Diagram {
    let mut out = d.clone();
    let mut per_comp: Vec<Vec<usize>> = vec![Vec::new(); d.components.len()];
    for &(ci, i) in positions {
        per_comp[ci].push(i);
    }
    for (ci, mut idcs) in per_comp.into_iter().enumerate() {
        idcs.sort_unstable_by(|a, b| b.cmp(a));
        for i in idcs {
            out.components[ci].remove(i);
        }
    }
    let mut remap = vec![0u32; d.n_crossings as usize + 1];
    let mut next = 0u32;
    let mut handedness = Vec::new();
    for id in 1..=d.n_crossings {
        if ids.contains(&id) {
            continue;
        }
        next += 1;
        remap[id as usize] = next;
        handedness.push(d.handedness[(id - 1) as usize]);
    }
    for comp in &mut out.components {
        for ev in comp.iter_mut() {
            if let Event::Crossing { id, .. } = ev {
                *id = remap[*id as usize];
            }
        }
    }
    out.n_crossings = next;
    out.handedness = handedness;
    out
}

/// Adjacent passage pair: positions `(i, i+1 mod n)` of one component whose
/// events are both crossing passages.
#[derive(Clone, Copy, Debug)]
struct AdjacentPair {
    component: usize,
    i: usize,
    j: usize,
    ids: (u32, u32),
    overs: (bool, bool),
}

fn adjacent_pairs(d: &Diagram) -> Vec<AdjacentPair> {
    let mut out = Vec::new();
    for (ci, comp) in d.components.iter().enumerate() {
        let n = comp.len();
        if n < 2 {
            continue;
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if i == j {
                continue;
            }
            if let (Event::Crossing { id: a, over: oa }, Event::Crossing { id: b, over: ob }) =
                (&comp[i], &comp[j])
            {
                out.push(AdjacentPair {
                    component: ci,
                    i,
                    j,
                    ids: (*a, *b),
                    overs: (*oa, *ob),
                });
            }
        }
    }
    out
}

/// Crossings removable by R1: both passages adjacent with no intervening
/// events.
pub fn removable_kinks(d: &Diagram) -> Vec<u32> {
    let mut out: Vec<u32> = adjacent_pairs(d)
        .into_iter()
        .filter(|p| p.ids.0 == p.ids.1)
        .map(|p| p.ids.0)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Crossing pairs removable by R2: adjacent on both strands, one strand over
/// at both crossings, the other under at both, and opposite handedness (the
/// two intersection points of an embedded bigon always have opposite planar
/// signs; an equal-sign clasp is not a bigon).
pub fn removable_bigons(d: &Diagram) -> Vec<(u32, u32)> {
    let pairs = adjacent_pairs(d);
    let mut out = Vec::new();
    for pa in pairs
        .iter()
        .filter(|p| p.ids.0 != p.ids.1 && p.overs.0 && p.overs.1)
    {
        let opposite = match (d.handedness_of(pa.ids.0), d.handedness_of(pa.ids.1)) {
            (Some(h1), Some(h2)) => h1 == -h2,
            _ => false,
        };
        if !opposite {
            continue;
        }
        for pb in pairs.iter().filter(|p| !p.overs.0 && !p.overs.1) {
            let same_set = (pb.ids.0 == pa.ids.0 && pb.ids.1 == pa.ids.1)
                || (pb.ids.0 == pa.ids.1 && pb.ids.1 == pa.ids.0);
            if !same_set {
                continue;
            }
            let key = if pa.ids.0 < pa.ids.1 {
                (pa.ids.0, pa.ids.1)
            } else {
                (pa.ids.1, pa.ids.0)
            };
            if !out.contains(&key) {
                out.push(key);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Height-consistent triangles available for R3.
pub fn r3_triangles(d: &Diagram) -> Vec<(u32, u32, u32)> {
    let pairs = adjacent_pairs(d);
    let sides: Vec<&AdjacentPair> = pairs.iter().filter(|p| p.ids.0 != p.ids.1).collect();
    let mut out = Vec::new();
    for (ia, a) in sides.iter().enumerate() {
        for (ib, b) in sides.iter().enumerate().skip(ia + 1) {
            for c in sides.iter().skip(ib + 1) {
                if let Some(tri) = triangle_of(d, [a, b, c]) {
                    if !out.contains(&tri) {
                        out.push(tri);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Check that three adjacent pairs form an R3 triangle; returns the sorted
/// crossing triple.
fn triangle_of(d: &Diagram, sides: [&AdjacentPair; 3]) -> Option<(u32, u32, u32)> {
    // six distinct event slots
    let mut slots: Vec<(usize, usize)> = sides
        .iter()
        .flat_map(|s| [(s.component, s.i), (s.component, s.j)])
        .collect();
    slots.sort_unstable();
    slots.dedup();
    if slots.len() != 6 {
        return None;
    }
    // each of three crossings appears on exactly two sides
    let mut ids: Vec<u32> = sides.iter().flat_map(|s| [s.ids.0, s.ids.1]).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() != 3 {
        return None;
    }
    for &id in &ids {
        let count = sides
            .iter()
            .map(|s| (s.ids.0 == id) as usize + (s.ids.1 == id) as usize)
            .sum::<usize>();
        if count != 2 {
            return None;
        }
    }
    // height-consistent: one strand over both its crossings, one under both
    let over_side = sides.iter().any(|s| s.overs.0 && s.overs.1);
    let under_side = sides.iter().any(|s| !s.overs.0 && !s.overs.1);
    if !(over_side && under_side) {
        return None;
    }
    if !r3_handedness_consistent(d, &sides, &ids) {
        return None;
    }
    Some((ids[0], ids[1], ids[2]))
}

/// A combinatorial triangle only realizes as an embedded disk when the three
/// crossing handednesses fit the sides' traversal directions. Placing the
/// corners at fixed plane coordinates determines each expected handedness as
/// sign(det) of the two strand tangents; the embedded configuration matches
/// it exactly or fully mirrored.
fn r3_handedness_consistent(d: &Diagram, sides: &[&AdjacentPair; 3], ids: &[u32]) -> bool {
    let coord = |id: u32| -> (i64, i64) {
        match ids.iter().position(|&x| x == id) {
            Some(0) => (0, 0),
            Some(1) => (1, 0),
            _ => (0, 1),
        }
    };
    let mut expected = [0i8; 3];
    let mut actual = [0i8; 3];
    for (k, &x) in ids.iter().enumerate() {
        let tangent = |want_over: bool| -> Option<(i64, i64)> {
            let side = sides.iter().find(|s| {
                (s.ids.0 == x && s.overs.0 == want_over) || (s.ids.1 == x && s.overs.1 == want_over)
            })?;
            let departing = side.ids.0 == x && side.overs.0 == want_over;
            let other = if departing { side.ids.1 } else { side.ids.0 };
            let (xa, ya) = coord(x);
            let (xb, yb) = coord(other);
            let sgn = if departing { 1 } else { -1 };
            Some((sgn * (xb - xa), sgn * (yb - ya)))
        };
        let (to, tu) = match (tangent(true), tangent(false)) {
            (Some(a), Some(b)) => (a, b),
            _ => return false,
        };
        let det = to.0 * tu.1 - to.1 * tu.0;
        expected[k] = det.signum() as i8;
        actual[k] = match d.handedness_of(x) {
            Some(h) => h,
            None => return false,
        };
    }
    actual == expected || actual == expected.map(|e| -e)
}

/// Apply a Reidemeister move. The input diagram is unchanged; removals
/// compact crossing ids.
pub fn apply_move(d: &Diagram, m: &MoveDescriptor) -> Result<Diagram, MoveError> {
    match m {
        MoveDescriptor::R1Add {
            pos,
            over_first,
            local_sign,
        } => {
            if *local_sign != 1 && *local_sign != -1 {
                return Err(MoveError::BadSign);
            }
            check_pos(d, pos)?;
            let id = d.n_crossings + 1;
            let mut out = d.clone();
            out.components[pos.component].splice(
                pos.gap..pos.gap,
                [
                    Event::Crossing {
                        id,
                        over: *over_first,
                    },
                    Event::Crossing {
                        id,
                        over: !*over_first,
                    },
                ],
            );
            out.n_crossings = id;
            out.handedness.push(*local_sign);
            Ok(out)
        }
        MoveDescriptor::R1Remove { crossing } => {
            let kink = adjacent_pairs(d)
                .into_iter()
                .find(|p| p.ids.0 == *crossing && p.ids.1 == *crossing)
                .ok_or(MoveError::NotAKink(*crossing))?;
            Ok(remove_crossings(
                d,
                &[*crossing],
                &[(kink.component, kink.i), (kink.component, kink.j)],
            ))
        }
        MoveDescriptor::R2Add {
            pos1,
            pos2,
            which_over,
            lead_sign,
            parallel,
        } => {
            if *lead_sign != 1 && *lead_sign != -1 {
                return Err(MoveError::BadSign);
            }
            if *which_over != 1 && *which_over != 2 {
                return Err(MoveError::BadStrandChoice);
            }
            check_pos(d, pos1)?;
            check_pos(d, pos2)?;
            let a = d.n_crossings + 1;
            let b = d.n_crossings + 2;
            let o1 = *which_over == 1;
            let pair1 = [
                Event::Crossing { id: a, over: o1 },
                Event::Crossing { id: b, over: o1 },
            ];
            let pair2 = if *parallel {
                [
                    Event::Crossing { id: a, over: !o1 },
                    Event::Crossing { id: b, over: !o1 },
                ]
            } else {
                [
                    Event::Crossing { id: b, over: !o1 },
                    Event::Crossing { id: a, over: !o1 },
                ]
            };
            let mut out = d.clone();
            if pos1.component == pos2.component && pos2.gap <= pos1.gap {
                // keep the earlier index valid: apply the later splice first
                out.components[pos1.component].splice(pos1.gap..pos1.gap, pair1);
                out.components[pos2.component].splice(pos2.gap..pos2.gap, pair2);
            } else {
                out.components[pos2.component].splice(pos2.gap..pos2.gap, pair2);
                out.components[pos1.component].splice(pos1.gap..pos1.gap, pair1);
            }
            out.n_crossings += 2;
            out.handedness.push(*lead_sign);
            out.handedness.push(-*lead_sign);
            Ok(out)
        }
        MoveDescriptor::R2Remove { crossings } => {
            let (x, y) = *crossings;
            let pairs = adjacent_pairs(d);
            let matches_set =
                |p: &AdjacentPair| (p.ids.0 == x && p.ids.1 == y) || (p.ids.0 == y && p.ids.1 == x);
            let over = pairs
                .iter()
                .find(|p| matches_set(p) && p.overs.0 && p.overs.1)
                .ok_or(MoveError::NotABigon(x, y))?;
            let under = pairs
                .iter()
                .find(|p| matches_set(p) && !p.overs.0 && !p.overs.1)
                .ok_or(MoveError::NotABigon(x, y))?;
            Ok(remove_crossings(
                d,
                &[x, y],
                &[
                    (over.component, over.i),
                    (over.component, over.j),
                    (under.component, under.i),
                    (under.component, under.j),
                ],
            ))
        }
        MoveDescriptor::R3 { crossings } => {
            let (x, y, z) = *crossings;
            let pairs = adjacent_pairs(d);
            let tri: Vec<&AdjacentPair> = pairs
                .iter()
                .filter(|p| {
                    let set = [x, y, z];
                    p.ids.0 != p.ids.1 && set.contains(&p.ids.0) && set.contains(&p.ids.1)
                })
                .collect();
            // pick three sides covering each crossing twice
            let chosen =
                choose_triangle_sides(d, &tri).ok_or(MoveError::NotATriangle([x, y, z]))?;
            let mut out = d.clone();
            for side in chosen {
                out.components[side.component].swap(side.i, side.j);
            }
            Ok(out)
        }
    }
}

fn choose_triangle_sides<'a>(
    d: &Diagram,
    pairs: &[&'a AdjacentPair],
) -> Option<[&'a AdjacentPair; 3]> {
    for (ia, a) in pairs.iter().enumerate() {
        for (ib, b) in pairs.iter().enumerate().skip(ia + 1) {
            for c in pairs.iter().skip(ib + 1) {
                let sides = [*a, *b, *c];
                if triangle_of(d, sides).is_some() {
                    return Some(sides);
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// seeded fuzzing

/// splitmix64: tiny, stable, seed-reproducible across versions.
pub(crate) struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }
}

/// Deterministic random move trajectory: each step picks uniformly among the
/// currently applicable descriptors, rejecting additions that would push the
/// crossing count over `max_crossings`. Steps with nothing applicable are
/// skipped.
pub fn random_move_sequence(
    d: &Diagram,
    length: usize,
    seed: u64,
    max_crossings: u32,
) -> Vec<(MoveDescriptor, Diagram)> {
    let mut rng = Rng::new(seed);
    let mut cur = d.clone();
    let mut out = Vec::new();
    for _ in 0..length {
        let gaps = valid_positions(&cur);
        let kinks = removable_kinks(&cur);
        let bigons = removable_bigons(&cur);
        let triangles = r3_triangles(&cur);
        let g = gaps.len() as u64;
        let r1a = if cur.n_crossings < max_crossings {
            g * 4
        } else {
            0
        };
        let r2a = if cur.n_crossings + 2 <= max_crossings {
            g * g * 8
        } else {
            0
        };
        let total = r1a + kinks.len() as u64 + r2a + bigons.len() as u64 + triangles.len() as u64;
        if total == 0 {
            continue;
        }
        let mut k = rng.below(total);
        let descriptor = 'pick: {
            if k < r1a {
                break 'pick MoveDescriptor::R1Add {
                    pos: gaps[(k / 4) as usize],
                    over_first: k % 4 / 2 == 0,
                    local_sign: if k.is_multiple_of(2) { 1 } else { -1 },
                };
            }
            k -= r1a;
            if k < kinks.len() as u64 {
                break 'pick MoveDescriptor::R1Remove {
                    crossing: kinks[k as usize],
                };
            }
            k -= kinks.len() as u64;
            if k < r2a {
                let variant = k % 8;
                let pair = k / 8;
                break 'pick MoveDescriptor::R2Add {
                    pos1: gaps[(pair / g) as usize],
                    pos2: gaps[(pair % g) as usize],
                    which_over: if variant & 1 == 0 { 1 } else { 2 },
                    lead_sign: if variant & 2 == 0 { 1 } else { -1 },
                    parallel: variant & 4 == 0,
                };
            }
            k -= r2a;
            if k < bigons.len() as u64 {
                break 'pick MoveDescriptor::R2Remove {
                    crossings: bigons[k as usize],
                };
            }
            k -= bigons.len() as u64;
            MoveDescriptor::R3 {
                crossings: triangles[k as usize],
            }
        };
        let next = apply_move(&cur, &descriptor).expect("enumerated move must apply");
        out.push((descriptor, next.clone()));
        cur = next;
    }
    out
}

#[derive(Clone, Debug)]
pub struct FuzzFailure {
    pub trial: usize,
    pub step: usize,
    pub descriptor: MoveDescriptor,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct FuzzOutcome {
    pub trials: usize,
    pub steps: usize,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run seeded move trajectories from `d` and check that every intermediate
/// diagram is valid and preserves the canonical `J` and `|w2|` of the start.
/// Trial `t` uses seed `base_seed + t`; trials are split across workers, so
/// results are independent of the thread count.
pub fn fuzz_invariance(
    d: &Diagram,
    trials: usize,
    moves: usize,
    seed: u64,
    max_crossings: u32,
) -> Result<FuzzOutcome, DomainError> {
    use crate::statesum::{j_canonical_and_w2_single, worker_count};

    let (base_j, base_w2) = j_canonical_and_w2_single(d)?;

    let run_trial = |trial: usize| -> Result<(usize, Vec<FuzzFailure>), DomainError> {
        let mut failures = Vec::new();
        let mut steps = 0;
        let traj = random_move_sequence(d, moves, seed.wrapping_add(trial as u64), max_crossings);
        for (step, (descriptor, diag)) in traj.iter().enumerate() {
            steps += 1;
            let report = diag.validate();
            if !report.is_valid() {
                failures.push(FuzzFailure {
                    trial,
                    step,
                    descriptor: descriptor.clone(),
                    detail: format!("invalid diagram: {report}"),
                });
                continue;
            }
            let (j, w2) = j_canonical_and_w2_single(diag)?;
            if j != base_j {
                failures.push(FuzzFailure {
                    trial,
                    step,
                    descriptor: descriptor.clone(),
                    detail: format!(
                        "canonical J changed: {} -> {}",
                        base_j.to_text(),
                        j.to_text()
                    ),
                });
            }
            if w2 != base_w2 {
                failures.push(FuzzFailure {
                    trial,
                    step,
                    descriptor: descriptor.clone(),
                    detail: format!("|w2| changed: {base_w2} -> {w2}"),
                });
            }
        }
        Ok((steps, failures))
    };

    let workers = worker_count().min(trials.max(1));
    let mut results: Vec<Result<(usize, Vec<FuzzFailure>), DomainError>> = Vec::new();
    if workers <= 1 {
        for t in 0..trials {
            results.push(run_trial(t));
        }
    } else {
        let mut parts: Vec<Vec<_>> = Vec::new();
        std::thread::scope(|scope| {
            let run_trial = &run_trial;
            let mut handles = Vec::new();
            for w in 0..workers {
                handles.push(scope.spawn(move || {
                    (w..trials)
                        .step_by(workers)
                        .map(run_trial)
                        .collect::<Vec<_>>()
                }));
            }
            for h in handles {
                parts.push(h.join().expect("fuzz worker panicked"));
            }
        });
        results = parts.into_iter().flatten().collect();
    }

    let mut out = FuzzOutcome {
        trials,
        ..FuzzOutcome::default()
    };
    for r in results {
        let (steps, failures) = r?;
        out.steps += steps;
        out.failures.extend(failures);
    }
    out.failures.sort_by_key(|f| (f.trial, f.step));
    Ok(out)
}

// ---------------------------------------------------------------------------
// orientation double cover

/// Lift a Klein-bottle knot diagram to its orientation double cover on the
/// torus: two mirror copies of the rectangle stacked with the seam interior.
/// Copy-A crossings keep their ids and handedness, copy-B crossings get
/// `id + m` and opposite handedness. A pseudo-classical input lifts to two
/// components, an orientation-reversing one to a single doubled walk.
pub fn double_cover(d: &Diagram) -> Result<Diagram, DomainError> {
    if d.surface != Surface::klein() {
        return Err(DomainError::NotKleinBottle);
    }
    if d.components.len() != 1 {
        return Err(DomainError::NotAKnot(d.components.len()));
    }
    let comp = &d.components[0];
    let pairs = wall_pairs(d, comp)
        .map_err(|p| DomainError::Invalid(format!("unpaired wall token {}", comp[p].token())))?;
    let counts = d.port_counts();
    let k_v = counts[Side::Left as usize];
    let k_h = counts[Side::Top as usize];
    let m = d.n_crossings;

    let mut exit_of = vec![usize::MAX; comp.len()];
    for &(exit, entry) in &pairs {
        exit_of[exit] = entry;
    }

    // vertical port lifts: sheet A keeps sides, sheet B mirrors them
    let v_lift = |side: Side, port: u32, sheet_a: bool| -> Event {
        let (s, p) = match (side, sheet_a) {
            (Side::Left, true) => (Side::Left, port),
            (Side::Right, true) => (Side::Right, k_v + port),
            (Side::Left, false) => (Side::Right, k_v + 1 - port),
            (Side::Right, false) => (Side::Left, 2 * k_v + 1 - port),
            _ => unreachable!("vertical lift of a horizontal port"),
        };
        Event::Wall { side: s, port: p }
    };

    let flips_odd = pairs
        .iter()
        .filter(|&&(exit, _)| matches!(comp[exit], Event::Wall { side, .. } if d.surface.wall_flip(side)))
        .count()
        % 2
        == 1;

    let walk = |start_sheet_a: bool| -> Vec<Event> {
        let laps = if flips_odd { 2 } else { 1 };
        let mut sheet_a = start_sheet_a;
        let mut out = Vec::new();
        for _ in 0..laps {
            for (i, ev) in comp.iter().enumerate() {
                match ev {
                    Event::Crossing { id, over } => out.push(Event::Crossing {
                        id: if sheet_a { *id } else { *id + m },
                        over: *over,
                    }),
                    Event::Wall { side, port } => {
                        if exit_of[i] == usize::MAX {
                            continue; // entry half, handled at its exit
                        }
                        let entry_ev = comp[exit_of[i]];
                        match side.pair() {
                            crate::surface::Pair::Vertical => {
                                out.push(v_lift(*side, *port, sheet_a));
                                if let Event::Wall { side: es, port: ep } = entry_ev {
                                    out.push(v_lift(es, ep, sheet_a));
                                }
                            }
                            crate::surface::Pair::Horizontal => {
                                // the pass's bottom port fixes both outer ports
                                let bottom_port = match (*ev, entry_ev) {
                                    (
                                        Event::Wall {
                                            side: Side::Bottom,
                                            port,
                                        },
                                        _,
                                    ) => port,
                                    (
                                        _,
                                        Event::Wall {
                                            side: Side::Bottom,
                                            port,
                                        },
                                    ) => port,
                                    _ => unreachable!("horizontal pass without a bottom token"),
                                };
                                let top = Event::Wall {
                                    side: Side::Top,
                                    port: k_h + 1 - bottom_port,
                                };
                                let bottom = Event::Wall {
                                    side: Side::Bottom,
                                    port: bottom_port,
                                };
                                let exits_top = *side == Side::Top;
                                let seam = sheet_a == exits_top;
                                if !seam {
                                    if exits_top {
                                        out.push(top);
                                        out.push(bottom);
                                    } else {
                                        out.push(bottom);
                                        out.push(top);
                                    }
                                }
                                sheet_a = !sheet_a;
                            }
                        }
                    }
                }
            }
        }
        out
    };

    let components = if flips_odd {
        vec![walk(true)]
    } else {
        vec![walk(true), walk(false)]
    };

    let mut handedness = d.handedness.clone();
    handedness.extend(d.handedness.iter().map(|h| -h));

    let cover = Diagram {
        surface: Surface::torus(),
        name: format!("{}*", d.name),
        n_crossings: 2 * m,
        handedness,
        components,
    };
    let report = cover.validate();
    if let Some(v) = report.violations.first() {
        return Err(DomainError::Invalid(format!(
            "cover construction failed: {v}"
        )));
    }
    Ok(cover)
}
