//! The rectangle-with-identifications surface model, diagram data model, the
//! extended Gauss-code file format, and structural validation.
//!
//! A surface is a rectangle whose vertical side pair (left/right) and
//! horizontal side pair (top/bottom) are each either free or glued, with or
//! without a twist. A diagram is a set of closed walks recorded as cyclic
//! event sequences: signed crossing passages (positive = over) and wall-port
//! tokens `l<i> t<i> r<i> b<i>`. Port numbers increase clockwise around the
//! rectangle, so `l1` is the lowermost intersection with the left side, `r1`
//! the topmost on the right, `t1` the leftmost on top and `b1` the rightmost
//! on the bottom.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::ParseError;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Gluing {
    Free,
    Glued { twist: bool },
}

impl Gluing {
    pub fn is_glued(&self) -> bool {
        matches!(self, Gluing::Glued { .. })
    }

    pub fn twist(&self) -> bool {
        matches!(self, Gluing::Glued { twist: true })
    }
}

/// Which opposite-side pair of the rectangle a side belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Pair {
    Vertical,
    Horizontal,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Top,
    Right,
    Bottom,
}

impl Side {
    pub fn letter(&self) -> char {
        match self {
            Side::Left => 'l',
            Side::Top => 't',
            Side::Right => 'r',
            Side::Bottom => 'b',
        }
    }

    pub fn from_letter(c: char) -> Option<Side> {
        match c {
            'l' => Some(Side::Left),
            't' => Some(Side::Top),
            'r' => Some(Side::Right),
            'b' => Some(Side::Bottom),
            _ => None,
        }
    }

    pub fn pair(&self) -> Pair {
        match self {
            Side::Left | Side::Right => Pair::Vertical,
            Side::Top | Side::Bottom => Pair::Horizontal,
        }
    }

    pub fn opposite(&self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Top => Side::Bottom,
            Side::Bottom => Side::Top,
        }
    }

    pub fn all() -> [Side; 4] {
        [Side::Left, Side::Top, Side::Right, Side::Bottom]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Surface {
    pub vertical: Gluing,
    pub horizontal: Gluing,
}

impl Surface {
    pub fn torus() -> Surface {
        Surface {
            vertical: Gluing::Glued { twist: false },
            horizontal: Gluing::Glued { twist: false },
        }
    }

    /// Vertical sides glued by translation, horizontal sides glued with a
    /// twist.
    pub fn klein() -> Surface {
        Surface {
            vertical: Gluing::Glued { twist: false },
            horizontal: Gluing::Glued { twist: true },
        }
    }

    pub fn annulus_v() -> Surface {
        Surface {
            vertical: Gluing::Glued { twist: false },
            horizontal: Gluing::Free,
        }
    }

    pub fn annulus_h() -> Surface {
        Surface {
            vertical: Gluing::Free,
            horizontal: Gluing::Glued { twist: false },
        }
    }

    pub fn moebius_v() -> Surface {
        Surface {
            vertical: Gluing::Glued { twist: true },
            horizontal: Gluing::Free,
        }
    }

    pub fn moebius_h() -> Surface {
        Surface {
            vertical: Gluing::Free,
            horizontal: Gluing::Glued { twist: true },
        }
    }

    pub fn keyword(&self) -> &'static str {
        match (self.vertical, self.horizontal) {
            (Gluing::Glued { twist: false }, Gluing::Glued { twist: false }) => "torus",
            (Gluing::Glued { twist: false }, Gluing::Glued { twist: true }) => "klein",
            (Gluing::Glued { twist: false }, Gluing::Free) => "annulus-v",
            (Gluing::Free, Gluing::Glued { twist: false }) => "annulus-h",
            (Gluing::Glued { twist: true }, Gluing::Free) => "moebius-v",
            (Gluing::Free, Gluing::Glued { twist: true }) => "moebius-h",
            _ => "unsupported",
        }
    }

    pub fn from_keyword(kw: &str) -> Option<Surface> {
        match kw {
            "torus" => Some(Surface::torus()),
            "klein" => Some(Surface::klein()),
            "annulus-v" => Some(Surface::annulus_v()),
            "annulus-h" => Some(Surface::annulus_h()),
            "moebius-v" => Some(Surface::moebius_v()),
            "moebius-h" => Some(Surface::moebius_h()),
            _ => None,
        }
    }

    pub fn gluing(&self, pair: Pair) -> Gluing {
        match pair {
            Pair::Vertical => self.vertical,
            Pair::Horizontal => self.horizontal,
        }
    }

    pub fn is_orientable(&self) -> bool {
        !self.vertical.twist() && !self.horizontal.twist()
    }

    /// True iff passing through this side's gluing reverses local
    /// orientation.
    pub fn wall_flip(&self, side: Side) -> bool {
        self.gluing(side.pair()).twist()
    }

    /// The involution pairing wall ports across a gluing with `k` ports per
    /// side. Untwisted gluings reverse the clockwise numbering
    /// (`l_i <-> r_{k+1-i}`, `t_i <-> b_{k+1-i}`); twisted gluings preserve it
    /// (`t_i <-> b_i`, `l_i <-> r_i`).
    pub fn port_partner(&self, side: Side, port: u32, k: u32) -> Option<(Side, u32)> {
        if port == 0 || port > k || !self.gluing(side.pair()).is_glued() {
            return None;
        }
        let twist = self.gluing(side.pair()).twist();
        let partner_port = if twist { port } else { k + 1 - port };
        Some((side.opposite(), partner_port))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Event {
    Crossing { id: u32, over: bool },
    Wall { side: Side, port: u32 },
}

impl Event {
    pub fn token(&self) -> String {
        match self {
            Event::Crossing { id, over: true } => format!("{id}"),
            Event::Crossing { id, over: false } => format!("-{id}"),
            Event::Wall { side, port } => format!("{}{}", side.letter(), port),
        }
    }

    pub fn is_wall(&self) -> bool {
        matches!(self, Event::Wall { .. })
    }
}

/// A diagram on a glued rectangle: per-crossing planar handedness (sign of
/// the oriented frame (over tangent, under tangent) in the rectangle chart)
/// and one cyclic event walk per component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    pub surface: Surface,
    pub name: String,
    pub n_crossings: u32,
    pub handedness: Vec<i8>,
    pub components: Vec<Vec<Event>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoGluedPair,
    CrossingVisits { id: u32, over: usize, under: usize },
    CrossingIdOutOfRange { id: u32 },
    HandednessLength { expected: usize, got: usize },
    HandednessValue { index: usize, value: i8 },
    PortOnFreeSide { side: Side, port: u32 },
    DuplicatePort { side: Side, port: u32 },
    PortNumbering { side: Side, expected: u32 },
    PortCountMismatch { pair: Pair, a: u32, b: u32 },
    UnpairedWall { component: usize, token: String },
    NoComponents,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoGluedPair => write!(f, "no side pair is glued (the surface is a disk)"),
            Violation::CrossingVisits { id, over, under } => write!(
                f,
                "crossing {id} visited {over} time(s) as over and {under} as under (want 1 and 1)"
            ),
            Violation::CrossingIdOutOfRange { id } => {
                write!(f, "crossing id {id} outside 1..=n_crossings")
            }
            Violation::HandednessLength { expected, got } => {
                write!(f, "handedness has {got} entries, expected {expected}")
            }
            Violation::HandednessValue { index, value } => {
                write!(f, "handedness entry {index} is {value}, want +1 or -1")
            }
            Violation::PortOnFreeSide { side, port } => {
                write!(f, "port {}{} lies on a free side", side.letter(), port)
            }
            Violation::DuplicatePort { side, port } => {
                write!(f, "port {}{} occurs more than once", side.letter(), port)
            }
            Violation::PortNumbering { side, expected } => write!(
                f,
                "ports on side '{}' are not exactly 1..={expected}",
                side.letter()
            ),
            Violation::PortCountMismatch { pair, a, b } => write!(
                f,
                "{} gluing has {a} ports on one side and {b} on the other",
                match pair {
                    Pair::Vertical => "vertical",
                    Pair::Horizontal => "horizontal",
                }
            ),
            Violation::UnpairedWall { component, token } => write!(
                f,
                "wall token {token} in component {component} is not adjacent to its gluing partner"
            ),
            Violation::NoComponents => write!(f, "diagram has no components"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

impl Diagram {
    /// Number of ports on each side, in `Side::all()` order.
    pub fn port_counts(&self) -> [u32; 4] {
        let mut counts = [0u32; 4];
        for ev in self.events() {
            if let Event::Wall { side, .. } = ev {
                counts[*side as usize] += 1;
            }
        }
        counts
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.components.iter().flatten()
    }

    /// Partner of a wall event under the surface gluing, using this
    /// diagram's port count on that side.
    pub fn port_partner(&self, ev: &Event) -> Option<Event> {
        if let Event::Wall { side, port } = ev {
            let k = self.port_counts()[*side as usize];
            let (s, p) = self.surface.port_partner(*side, *port, k)?;
            Some(Event::Wall { side: s, port: p })
        } else {
            None
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();

        if !self.surface.vertical.is_glued() && !self.surface.horizontal.is_glued() {
            out.push(Violation::NoGluedPair);
        }
        if self.components.is_empty() {
            out.push(Violation::NoComponents);
        }
        if self.handedness.len() != self.n_crossings as usize {
            out.push(Violation::HandednessLength {
                expected: self.n_crossings as usize,
                got: self.handedness.len(),
            });
        }
        for (i, &h) in self.handedness.iter().enumerate() {
            if h != 1 && h != -1 {
                out.push(Violation::HandednessValue {
                    index: i + 1,
                    value: h,
                });
            }
        }

        let mut over = vec![0usize; self.n_crossings as usize];
        let mut under = vec![0usize; self.n_crossings as usize];
        let mut ports: Vec<Vec<u32>> = vec![Vec::new(); 4];
        for ev in self.events() {
            match ev {
                Event::Crossing { id, over: o } => {
                    if *id == 0 || *id > self.n_crossings {
                        out.push(Violation::CrossingIdOutOfRange { id: *id });
                    } else if *o {
                        over[(*id - 1) as usize] += 1;
                    } else {
                        under[(*id - 1) as usize] += 1;
                    }
                }
                Event::Wall { side, port } => {
                    if !self.surface.gluing(side.pair()).is_glued() {
                        out.push(Violation::PortOnFreeSide {
                            side: *side,
                            port: *port,
                        });
                    }
                    if ports[*side as usize].contains(port) {
                        out.push(Violation::DuplicatePort {
                            side: *side,
                            port: *port,
                        });
                    }
                    ports[*side as usize].push(*port);
                }
            }
        }
        for id in 1..=self.n_crossings {
            let (o, u) = (over[(id - 1) as usize], under[(id - 1) as usize]);
            if o != 1 || u != 1 {
                out.push(Violation::CrossingVisits {
                    id,
                    over: o,
                    under: u,
                });
            }
        }
        for side in Side::all() {
            let mut ps = ports[side as usize].clone();
            ps.sort_unstable();
            if !ps.iter().copied().eq(1..=ports[side as usize].len() as u32) {
                out.push(Violation::PortNumbering {
                    side,
                    expected: ports[side as usize].len() as u32,
                });
            }
        }
        for pair in [Pair::Vertical, Pair::Horizontal] {
            let (a, b) = match pair {
                Pair::Vertical => (
                    ports[Side::Left as usize].len() as u32,
                    ports[Side::Right as usize].len() as u32,
                ),
                Pair::Horizontal => (
                    ports[Side::Top as usize].len() as u32,
                    ports[Side::Bottom as usize].len() as u32,
                ),
            };
            if a != b {
                out.push(Violation::PortCountMismatch { pair, a, b });
            }
        }

        // The walk must leave a wall through a port and re-enter at its
        // gluing partner immediately: wall tokens pair up adjacently.
        if out.is_empty() {
            for (ci, comp) in self.components.iter().enumerate() {
                if let Err(pos) = wall_pairs(self, comp) {
                    out.push(Violation::UnpairedWall {
                        component: ci,
                        token: comp[pos].token(),
                    });
                }
            }
        }

        ValidationReport { violations: out }
    }

    pub fn is_knot(&self) -> bool {
        self.components.len() == 1
    }

    pub fn handedness_of(&self, id: u32) -> Option<i8> {
        self.handedness.get(id.checked_sub(1)? as usize).copied()
    }
}

/// Adjacent exit/entry pairing of the wall tokens of one component.
///
/// Returns pairs `(exit_pos, entry_pos)` with `entry = exit + 1` cyclically,
/// or the position of the first token that cannot be paired.
pub(crate) fn wall_pairs(d: &Diagram, comp: &[Event]) -> Result<Vec<(usize, usize)>, usize> {
    let n = comp.len();
    let mut paired = vec![false; n];
    let mut pairs = Vec::new();
    for i in 0..n {
        if !comp[i].is_wall() || paired[i] {
            continue;
        }
        let j = (i + 1) % n;
        if j != i && comp[j].is_wall() && !paired[j] && d.port_partner(&comp[i]) == Some(comp[j]) {
            paired[i] = true;
            paired[j] = true;
            pairs.push((i, j));
        }
    }
    if let Some(i) = (0..n).find(|&i| comp[i].is_wall() && !paired[i]) {
        return Err(i);
    }
    Ok(pairs)
}

// ---------------------------------------------------------------------------
// compiled walk structure shared by the cabling and state-sum machinery

/// Wall content of one arc (the piece of the walk between two consecutive
/// crossing passages): orientation flips and gluing-pass parities.
#[derive(Clone, Copy, Default, Debug)]
pub(crate) struct Walls {
    pub flips: u32,
    pub v_passes: u32,
    pub h_passes: u32,
}

impl Walls {
    fn absorb(&mut self, surface: &Surface, side: Side) {
        if surface.wall_flip(side) {
            self.flips += 1;
        }
        match side.pair() {
            Pair::Vertical => self.v_passes += 1,
            Pair::Horizontal => self.h_passes += 1,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Passage {
    /// 0-based crossing index.
    pub crossing: usize,
}

/// Flattened walk structure: passages grouped by component, with `arcs[i]`
/// holding the walls of the arc that follows `passages[i]` (cyclic within
/// the component's range). Components with no passages appear in `orphans`.
pub(crate) struct Compiled {
    pub passages: Vec<Passage>,
    pub arcs: Vec<Walls>,
    pub comp_ranges: Vec<(usize, usize)>,
    pub orphans: Vec<Walls>,
    /// Per crossing: global passage indices `[over, under]`.
    pub slots: Vec<[usize; 2]>,
}

impl Compiled {
    pub fn next_in_comp(&self, p: usize) -> usize {
        let (s, e) = self.range_of(p);
        if p + 1 == e {
            s
        } else {
            p + 1
        }
    }

    pub fn prev_in_comp(&self, p: usize) -> usize {
        let (s, e) = self.range_of(p);
        if p == s {
            e - 1
        } else {
            p - 1
        }
    }

    fn range_of(&self, p: usize) -> (usize, usize) {
        *self
            .comp_ranges
            .iter()
            .find(|(s, e)| (*s..*e).contains(&p))
            .expect("passage index in range")
    }
}

pub(crate) fn compile(d: &Diagram) -> Result<Compiled, String> {
    let m = d.n_crossings as usize;
    let mut passages = Vec::new();
    let mut arcs = Vec::new();
    let mut comp_ranges = Vec::new();
    let mut orphans = Vec::new();
    let mut slots = vec![[usize::MAX; 2]; m];

    for comp in &d.components {
        let pairs =
            wall_pairs(d, comp).map_err(|p| format!("unpaired wall token {}", comp[p].token()))?;
        let entry_positions: Vec<usize> = pairs.iter().map(|&(_, e)| e).collect();
        let passage_positions: Vec<usize> =
            (0..comp.len()).filter(|&i| !comp[i].is_wall()).collect();

        if passage_positions.is_empty() {
            let mut w = Walls::default();
            for &(exit, _) in &pairs {
                if let Event::Wall { side, .. } = comp[exit] {
                    w.absorb(&d.surface, side);
                }
            }
            orphans.push(w);
            continue;
        }

        let start = passages.len();
        for (k, &pos) in passage_positions.iter().enumerate() {
            let Event::Crossing { id, over } = comp[pos] else {
                unreachable!()
            };
            if id == 0 || id as usize > m {
                return Err(format!("crossing id {id} out of range"));
            }
            let slot = &mut slots[(id - 1) as usize][if over { 0 } else { 1 }];
            if *slot != usize::MAX {
                return Err(format!(
                    "crossing {id} visited twice as {}",
                    if over { "over" } else { "under" }
                ));
            }
            *slot = start + k;
            passages.push(Passage {
                crossing: (id - 1) as usize,
            });
        }
        // walls between consecutive passages; a gluing pass is counted once,
        // at its exit token (the entry token is the same surface point)
        for (k, &pos) in passage_positions.iter().enumerate() {
            let next_pos = passage_positions[(k + 1) % passage_positions.len()];
            let mut w = Walls::default();
            let mut i = (pos + 1) % comp.len();
            while i != next_pos {
                if let Event::Wall { side, .. } = comp[i] {
                    if !entry_positions.contains(&i) {
                        w.absorb(&d.surface, side);
                    }
                }
                i = (i + 1) % comp.len();
            }
            arcs.push(w);
        }
        comp_ranges.push((start, passages.len()));
    }

    for (c, s) in slots.iter().enumerate() {
        if s[0] == usize::MAX || s[1] == usize::MAX {
            return Err(format!(
                "crossing {} missing an over or under passage",
                c + 1
            ));
        }
    }

    Ok(Compiled {
        passages,
        arcs,
        comp_ranges,
        orphans,
        slots,
    })
}

// ---------------------------------------------------------------------------
// file format

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_token(tok: &str, line_no: u32, col: u32) -> Result<Event, ParseError> {
    let mut chars = tok.chars();
    let first = chars.next().unwrap();
    if let Some(side) = Side::from_letter(first) {
        let port: u32 = tok[1..]
            .parse()
            .map_err(|_| ParseError::at(line_no, col, format!("bad port token '{tok}'")))?;
        if port == 0 {
            return Err(ParseError::at(line_no, col, "port numbers start at 1"));
        }
        Ok(Event::Wall { side, port })
    } else {
        let id: i64 = tok
            .parse()
            .map_err(|_| ParseError::at(line_no, col, format!("bad code token '{tok}'")))?;
        if id == 0 {
            return Err(ParseError::at(line_no, col, "crossing ids start at 1"));
        }
        Ok(Event::Crossing {
            id: id.unsigned_abs() as u32,
            over: id > 0,
        })
    }
}

/// Parse every `link ... end` block without validating; used when a caller
/// wants the full validation report rather than the first violation.
pub fn parse_diagram_file_raw(text: &str) -> Result<Vec<Diagram>, ParseError> {
    let mut diagrams = Vec::new();
    let mut lines = text.lines().enumerate().peekable();

    while let Some(&(idx, raw)) = lines.peek() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            lines.next();
            continue;
        }
        diagrams.push(parse_block(&mut lines, idx as u32 + 1)?);
    }
    if diagrams.is_empty() {
        return Err(ParseError::at(1, 1, "no diagrams in file"));
    }
    Ok(diagrams)
}

/// Parse every `link ... end` block in the file. Each diagram is validated;
/// the first violation is reported as an error.
pub fn parse_diagram_file(text: &str) -> Result<Vec<Diagram>, ParseError> {
    let diagrams = parse_diagram_file_raw(text)?;
    for d in &diagrams {
        let report = d.validate();
        if let Some(v) = report.violations.first() {
            return Err(ParseError::at(
                1,
                1,
                format!("invalid diagram '{}': {v}", d.name),
            ));
        }
    }
    Ok(diagrams)
}

/// Parse a file expected to contain exactly one diagram.
pub fn parse_single_diagram(text: &str) -> Result<Diagram, ParseError> {
    let mut all = parse_diagram_file(text)?;
    if all.len() != 1 {
        return Err(ParseError::at(
            1,
            1,
            format!("expected one diagram, found {}", all.len()),
        ));
    }
    Ok(all.pop().unwrap())
}

fn parse_block<'a, I>(
    lines: &mut std::iter::Peekable<I>,
    start_line: u32,
) -> Result<Diagram, ParseError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut surface: Option<Surface> = None;
    let mut name: Option<String> = None;
    let mut n_crossings: Option<u32> = None;
    let mut handedness: Option<Vec<i8>> = None;
    let mut components: Vec<Vec<Event>> = Vec::new();
    let mut saw_end = false;

    for (idx, raw) in lines.by_ref() {
        let line_no = idx as u32 + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        let col = (raw.len() - raw.trim_start().len() + 1) as u32;
        match key {
            "surface" => {
                if name.is_some() {
                    return Err(ParseError::at(
                        line_no,
                        col,
                        "'surface' must precede 'link'",
                    ));
                }
                surface = Some(Surface::from_keyword(rest).ok_or_else(|| {
                    ParseError::at(line_no, col, format!("unknown surface '{rest}'"))
                })?);
            }
            "link" => {
                if name.is_some() {
                    return Err(ParseError::at(line_no, col, "duplicate 'link' line"));
                }
                name = Some(rest.to_string());
            }
            "crossings" => {
                let m: u32 = rest
                    .parse()
                    .map_err(|_| ParseError::at(line_no, col, "bad crossing count"))?;
                n_crossings = Some(m);
            }
            "handedness" | "signs" => {
                let mut hs = Vec::new();
                for tok in rest.split_whitespace() {
                    let v: i8 = tok.parse().map_err(|_| {
                        ParseError::at(line_no, col, format!("bad handedness '{tok}'"))
                    })?;
                    if v != 1 && v != -1 {
                        return Err(ParseError::at(
                            line_no,
                            col,
                            "handedness entries must be +1 or -1",
                        ));
                    }
                    hs.push(v);
                }
                handedness = Some(hs);
            }
            "code" => {
                let mut evs = Vec::new();
                let content = strip_comment(raw);
                let key_start = content.len() - content.trim_start().len();
                let bytes = content.as_bytes();
                let mut pos = key_start + 4;
                while pos < bytes.len() {
                    if bytes[pos].is_ascii_whitespace() {
                        pos += 1;
                        continue;
                    }
                    let start = pos;
                    while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                        pos += 1;
                    }
                    evs.push(parse_token(
                        &content[start..pos],
                        line_no,
                        start as u32 + 1,
                    )?);
                }
                components.push(evs);
            }
            "end" => {
                saw_end = true;
                break;
            }
            _ => {
                return Err(ParseError::at(
                    line_no,
                    col,
                    format!("unknown keyword '{key}'"),
                ));
            }
        }
    }

    if !saw_end {
        return Err(ParseError::at(start_line, 1, "missing 'end'"));
    }
    let name = name.ok_or_else(|| ParseError::at(start_line, 1, "missing 'link' line"))?;
    let n_crossings =
        n_crossings.ok_or_else(|| ParseError::at(start_line, 1, "missing 'crossings' line"))?;
    let handedness = match handedness {
        Some(h) => h,
        None if n_crossings == 0 => Vec::new(),
        None => return Err(ParseError::at(start_line, 1, "missing 'handedness' line")),
    };
    if components.is_empty() {
        return Err(ParseError::at(start_line, 1, "missing 'code' line"));
    }

    Ok(Diagram {
        surface: surface.unwrap_or_else(Surface::torus),
        name,
        n_crossings,
        handedness,
        components,
    })
}

/// Emit the canonical file form of a diagram. `parse` of the result gives
/// back exactly the same value; token order is preserved.
pub fn serialize_diagram(d: &Diagram) -> String {
    let mut out = String::new();
    out.push_str(&format!("surface {}\n", d.surface.keyword()));
    out.push_str(&format!("link {}\n", d.name));
    out.push_str(&format!("crossings {}\n", d.n_crossings));
    if d.n_crossings > 0 {
        let hs: Vec<String> = d.handedness.iter().map(|h| h.to_string()).collect();
        out.push_str(&format!("handedness {}\n", hs.join(" ")));
    }
    for comp in &d.components {
        let toks: Vec<String> = comp.iter().map(|e| e.token()).collect();
        if toks.is_empty() {
            out.push_str("code\n");
        } else {
            out.push_str(&format!("code {}\n", toks.join(" ")));
        }
    }
    out.push_str("end\n");
    out
}

/// JSON mirror of the file structure, field for field.
pub fn diagram_to_json(d: &Diagram) -> serde_json::Value {
    serde_json::json!({
        "surface": d.surface.keyword(),
        "link": d.name,
        "crossings": d.n_crossings,
        "handedness": d.handedness,
        "code": d
            .components
            .iter()
            .map(|c| c.iter().map(|e| e.token()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn diagram_from_json(v: &serde_json::Value) -> Result<Diagram, ParseError> {
    let bad = |m: &str| ParseError::at(0, 0, m);
    let surface = Surface::from_keyword(
        v.get("surface")
            .and_then(|s| s.as_str())
            .ok_or_else(|| bad("missing surface"))?,
    )
    .ok_or_else(|| bad("unknown surface"))?;
    let name = v
        .get("link")
        .and_then(|s| s.as_str())
        .ok_or_else(|| bad("missing link name"))?
        .to_string();
    let n_crossings = v
        .get("crossings")
        .and_then(|s| s.as_u64())
        .ok_or_else(|| bad("missing crossings"))? as u32;
    let handedness = v
        .get("handedness")
        .and_then(|s| s.as_array())
        .ok_or_else(|| bad("missing handedness"))?
        .iter()
        .map(|x| {
            x.as_i64()
                .map(|n| n as i8)
                .ok_or_else(|| bad("bad handedness entry"))
        })
        .collect::<Result<Vec<i8>, _>>()?;
    let mut components = Vec::new();
    for comp in v
        .get("code")
        .and_then(|s| s.as_array())
        .ok_or_else(|| bad("missing code"))?
    {
        let mut evs = Vec::new();
        for tok in comp
            .as_array()
            .ok_or_else(|| bad("code entry must be an array"))?
        {
            let t = tok
                .as_str()
                .ok_or_else(|| bad("code token must be a string"))?;
            evs.push(parse_token(t, 0, 0)?);
        }
        components.push(evs);
    }
    let d = Diagram {
        surface,
        name,
        n_crossings,
        handedness,
        components,
    };
    let report = d.validate();
    if let Some(viol) = report.violations.first() {
        return Err(bad(&format!("invalid diagram: {viol}")));
    }
    Ok(d)
}
