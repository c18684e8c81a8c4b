//! The 2-cabling bookkeeping: labelings, crossing types, Gaussian-integer
//! crossing signs and the three writhe numbers.
//!
//! The cable diagram itself is never constructed. A labeling is propagated as
//! a single bit along the walk ("the strand labeled R lies on the local right
//! of the traversal direction"), flipping exactly at orientation-reversing
//! wall passes. The sign of a crossing is then read off the bits at its two
//! passages together with the planar handedness:
//!
//! - the over-branch cable strand entering the input crossing is R iff
//!   `b_over * handedness = +1`,
//! - the under-branch strand entering it is R iff `b_under * handedness = -1`,
//!
//! and R-over-L, L-over-R, R-over-R, L-over-L give `1, -1, i, -i`.

use std::fmt;

use crate::error::DomainError;
use crate::surface::{wall_pairs, Diagram, Event};

/// Unit of the Gaussian integers: the value of a crossing sign.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Sign {
    One,
    MinusOne,
    I,
    MinusI,
}

impl Sign {
    pub fn is_real(&self) -> bool {
        matches!(self, Sign::One | Sign::MinusOne)
    }

    pub fn negated(&self) -> Sign {
        match self {
            Sign::One => Sign::MinusOne,
            Sign::MinusOne => Sign::One,
            Sign::I => Sign::MinusI,
            Sign::MinusI => Sign::I,
        }
    }

    pub fn re(&self) -> i64 {
        match self {
            Sign::One => 1,
            Sign::MinusOne => -1,
            _ => 0,
        }
    }

    pub fn im(&self) -> i64 {
        match self {
            Sign::I => 1,
            Sign::MinusI => -1,
            _ => 0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sign::One => "1",
            Sign::MinusOne => "-1",
            Sign::I => "i",
            Sign::MinusI => "-i",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, i) => write!(f, "{i}i"),
            (r, 1) => write!(f, "{r}+i"),
            (r, -1) => write!(f, "{r}-i"),
            (r, i) if i > 0 => write!(f, "{r}+{i}i"),
            (r, i) => write!(f, "{r}{i}i"),
        }
    }
}

/// Whether `Input(x)` joins the two cable components (type 1, sign `±1`) or
/// is a self-crossing of one of them (type 2, sign `±i`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CrossingType {
    Type1,
    Type2,
}

/// The two labelings of the 2-cable. `B` is the pointwise relabeling of `A`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Labeling {
    A,
    B,
}

impl Labeling {
    pub fn other(&self) -> Labeling {
        match self {
            Labeling::A => Labeling::B,
            Labeling::B => Labeling::A,
        }
    }

    pub fn initial_bit(&self) -> i8 {
        match self {
            Labeling::A => 1,
            Labeling::B => -1,
        }
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            if matches!(self, Labeling::A) {
                "A"
            } else {
                "B"
            }
        )
    }
}

/// Propagated labeling bits of a knot diagram: the bit at each crossing
/// passage, anchored at the first event of the component.
#[derive(Clone, Debug)]
pub struct LabelAssignment {
    pub labeling: Labeling,
    bit_over: Vec<i8>,
    bit_under: Vec<i8>,
}

impl LabelAssignment {
    pub fn bit_at_over(&self, id: u32) -> Option<i8> {
        self.bit_over.get(id.checked_sub(1)? as usize).copied()
    }

    pub fn bit_at_under(&self, id: u32) -> Option<i8> {
        self.bit_under.get(id.checked_sub(1)? as usize).copied()
    }
}

/// Positions (per event) at which the label bit flips: the exit token of
/// every pass through a twisted gluing.
fn flip_positions(d: &Diagram, comp: &[Event]) -> Result<Vec<bool>, DomainError> {
    let pairs = wall_pairs(d, comp)
        .map_err(|p| DomainError::Invalid(format!("unpaired wall token {}", comp[p].token())))?;
    let mut flips = vec![false; comp.len()];
    for (exit, _) in pairs {
        if let Event::Wall { side, .. } = comp[exit] {
            if d.surface.wall_flip(side) {
                flips[exit] = true;
            }
        }
    }
    Ok(flips)
}

/// True iff the component, as a loop in the thickened surface, preserves
/// orientation: it passes through twisted gluings an even number of times.
pub fn is_pseudo_classical(d: &Diagram, component: usize) -> bool {
    let Some(comp) = d.components.get(component) else {
        return false;
    };
    match flip_positions(d, comp) {
        Ok(flips) => flips.iter().filter(|&&f| f).count() % 2 == 0,
        Err(_) => false,
    }
}

fn knot_component(d: &Diagram) -> Result<&[Event], DomainError> {
    if d.components.len() != 1 {
        return Err(DomainError::NotAKnot(d.components.len()));
    }
    Ok(&d.components[0])
}

/// Walk the knot from its first event, flipping the bit at every twisted
/// wall pass, and record the bit at each crossing passage.
pub fn propagate_labels(d: &Diagram, labeling: Labeling) -> Result<LabelAssignment, DomainError> {
    let comp = knot_component(d)?;
    if !is_pseudo_classical(d, 0) {
        return Err(DomainError::NotPseudoClassical);
    }
    let flips = flip_positions(d, comp)?;
    let m = d.n_crossings as usize;
    let mut bit_over = vec![0i8; m];
    let mut bit_under = vec![0i8; m];
    let mut cur = labeling.initial_bit();
    for (i, ev) in comp.iter().enumerate() {
        if let Event::Crossing { id, over } = ev {
            let slot = if *over { &mut bit_over } else { &mut bit_under };
            slot[(*id - 1) as usize] = cur;
        }
        if flips[i] {
            cur = -cur;
        }
    }
    debug_assert_eq!(cur, labeling.initial_bit(), "label bit must close up");
    Ok(LabelAssignment {
        labeling,
        bit_over,
        bit_under,
    })
}

/// Type of a crossing, via the parity of orientation-reversing wall passes
/// on the closed subpath between its two passages.
pub fn crossing_type(d: &Diagram, x: u32) -> Result<CrossingType, DomainError> {
    let comp = knot_component(d)?;
    if x == 0 || x > d.n_crossings {
        return Err(DomainError::NoSuchCrossing(x));
    }
    let flips = flip_positions(d, comp)?;
    let positions: Vec<usize> = comp
        .iter()
        .enumerate()
        .filter_map(|(i, ev)| match ev {
            Event::Crossing { id, .. } if *id == x => Some(i),
            _ => None,
        })
        .collect();
    if positions.len() != 2 {
        return Err(DomainError::NoSuchCrossing(x));
    }
    let (p1, p2) = (positions[0], positions[1]);
    let odd = (p1 + 1..p2).filter(|&i| flips[i]).count() % 2 == 1;
    Ok(if odd {
        CrossingType::Type2
    } else {
        CrossingType::Type1
    })
}

/// The Gaussian-unit sign of a crossing under the given labeling.
pub fn crossing_sign(d: &Diagram, la: &LabelAssignment, x: u32) -> Result<Sign, DomainError> {
    let b_o = la.bit_at_over(x).filter(|&b| b != 0);
    let b_u = la.bit_at_under(x).filter(|&b| b != 0);
    let h = d.handedness_of(x);
    let (Some(b_o), Some(b_u), Some(h)) = (b_o, b_u, h) else {
        return Err(DomainError::NoSuchCrossing(x));
    };
    let over_in_is_r = b_o * h == 1;
    let under_in_is_r = b_u * h == -1;
    Ok(match (over_in_is_r, under_in_is_r) {
        (true, false) => Sign::One,
        (false, true) => Sign::MinusOne,
        (true, true) => Sign::I,
        (false, false) => Sign::MinusI,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Writhe {
    pub w: GaussianInt,
    pub w1: i64,
    pub w2: i64,
}

impl Writhe {
    pub fn w2_abs(&self) -> u32 {
        self.w2.unsigned_abs() as u32
    }
}

/// `w = sum of signs`, `w1 = Re w` (type-1 crossings), `w2 = Im w`
/// (type-2 crossings). Only `|w2|` is labeling-independent.
pub fn writhe_numbers(d: &Diagram, la: &LabelAssignment) -> Result<Writhe, DomainError> {
    let mut w = GaussianInt::default();
    for x in 1..=d.n_crossings {
        let s = crossing_sign(d, la, x)?;
        w.re += s.re();
        w.im += s.im();
    }
    Ok(Writhe {
        w,
        w1: w.re,
        w2: w.im,
    })
}
