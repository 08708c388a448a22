//! Front diagrams as event words.
//!
//! A front is swept left to right. Between events the front meets a vertical
//! line in a stack of strands numbered `1..=m` from the top. Each event acts on
//! the strands at `position` and `position + 1`:
//!
//! * `L p` opens a left cusp, inserting two new strands at `p` and `p + 1`;
//! * `R p` closes strands `p` and `p + 1` with a right cusp;
//! * `X p` crosses strands `p` and `p + 1`.
//!
//! At a crossing the strand descending from `p` to `p + 1` has the lower slope
//! and is therefore the over-strand, so no crossing data beyond the position is
//! ever stored.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventKind {
    LeftCusp,
    RightCusp,
    Crossing,
}

impl EventKind {
    pub fn letter(self) -> char {
        match self {
            EventKind::LeftCusp => 'L',
            EventKind::RightCusp => 'R',
            EventKind::Crossing => 'X',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    /// 1-based, counted from the top.
    pub position: usize,
}

impl Event {
    pub fn left(position: usize) -> Self {
        Event {
            kind: EventKind::LeftCusp,
            position,
        }
    }

    pub fn right(position: usize) -> Self {
        Event {
            kind: EventKind::RightCusp,
            position,
        }
    }

    pub fn cross(position: usize) -> Self {
        Event {
            kind: EventKind::Crossing,
            position,
        }
    }

    /// Change in the number of strands caused by this event.
    pub fn strand_delta(&self) -> isize {
        match self.kind {
            EventKind::LeftCusp => 2,
            EventKind::RightCusp => -2,
            EventKind::Crossing => 0,
        }
    }

    /// Whether the event can be applied to a stack of `strands` strands.
    pub fn fits(&self, strands: usize) -> bool {
        if self.position == 0 {
            return false;
        }
        match self.kind {
            EventKind::LeftCusp => strands + 1 >= self.position,
            EventKind::RightCusp | EventKind::Crossing => strands > self.position,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.letter(), self.position)
    }
}

/// Segment ids around one crossing. Segments are numbered in creation order
/// during the sweep; the over-strand runs `in_top -> out_bot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingSegments {
    pub event: usize,
    pub in_top: usize,
    pub in_bot: usize,
    pub out_top: usize,
    pub out_bot: usize,
}

/// Connectivity of the strand segments of a front.
///
/// A segment is a maximal piece of strand between two events. Left cusps join
/// the left ends of their two new segments, right cusps join the right ends of
/// the two segments they close.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub segment_count: usize,
    pub left_cusps: Vec<(usize, usize)>,
    pub right_cusps: Vec<(usize, usize)>,
    pub crossings: Vec<CrossingSegments>,
}

impl Skeleton {
    fn build(events: &[Event]) -> Result<Self> {
        let mut stack: Vec<usize> = Vec::new();
        let mut next = 0usize;
        let mut left_cusps = Vec::new();
        let mut right_cusps = Vec::new();
        let mut crossings = Vec::new();

        for (idx, ev) in events.iter().enumerate() {
            if ev.position == 0 {
                return Err(Error::Validation {
                    event: idx,
                    message: "positions are 1-based".into(),
                });
            }
            if !ev.fits(stack.len()) {
                let needed = match ev.kind {
                    EventKind::LeftCusp => ev.position - 1,
                    _ => ev.position + 1,
                };
                return Err(Error::Validation {
                    event: idx,
                    message: format!(
                        "{} needs at least {} strands but only {} exist",
                        ev,
                        needed,
                        stack.len()
                    ),
                });
            }
            let p = ev.position - 1;
            match ev.kind {
                EventKind::LeftCusp => {
                    let (top, bot) = (next, next + 1);
                    next += 2;
                    stack.insert(p, bot);
                    stack.insert(p, top);
                    left_cusps.push((top, bot));
                }
                EventKind::RightCusp => {
                    let top = stack.remove(p);
                    let bot = stack.remove(p);
                    right_cusps.push((top, bot));
                }
                EventKind::Crossing => {
                    let (in_top, in_bot) = (stack[p], stack[p + 1]);
                    let (out_top, out_bot) = (next, next + 1);
                    next += 2;
                    stack[p] = out_top;
                    stack[p + 1] = out_bot;
                    crossings.push(CrossingSegments {
                        event: idx,
                        in_top,
                        in_bot,
                        out_top,
                        out_bot,
                    });
                }
            }
        }
        if !stack.is_empty() {
            return Err(Error::Validation {
                event: events.len(),
                message: format!("{} strands left open at the end of the sweep", stack.len()),
            });
        }
        Ok(Skeleton {
            segment_count: next,
            left_cusps,
            right_cusps,
            crossings,
        })
    }

    /// For every segment end (`2 * seg` = left end, `2 * seg + 1` = right end),
    /// the end it is glued to when crossings are passed straight through.
    fn pass_through_partners(&self) -> Vec<usize> {
        let mut partner = vec![usize::MAX; 2 * self.segment_count];
        let mut glue = |a: usize, b: usize| {
            partner[a] = b;
            partner[b] = a;
        };
        for &(t, b) in &self.left_cusps {
            glue(2 * t, 2 * b);
        }
        for &(t, b) in &self.right_cusps {
            glue(2 * t + 1, 2 * b + 1);
        }
        for c in &self.crossings {
            glue(2 * c.in_top + 1, 2 * c.out_bot);
            glue(2 * c.in_bot + 1, 2 * c.out_top);
        }
        partner
    }
}

/// A validated front: a nonempty event word whose sweep starts and ends with
/// no strands.
#[derive(Clone, Debug)]
pub struct FrontDiagram {
    events: Vec<Event>,
    skeleton: Skeleton,
}

impl PartialEq for FrontDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events
    }
}

impl Eq for FrontDiagram {}

impl std::hash::Hash for FrontDiagram {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.events.hash(state);
    }
}

impl FrontDiagram {
    pub fn new(events: Vec<Event>) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        let skeleton = Skeleton::build(&events)?;
        Ok(FrontDiagram { events, skeleton })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn cusp_count(&self) -> usize {
        self.skeleton.left_cusps.len() + self.skeleton.right_cusps.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.skeleton.crossings.len()
    }

    /// Event index of each crossing, in crossing-id order.
    pub fn crossing_events(&self) -> Vec<usize> {
        self.skeleton.crossings.iter().map(|c| c.event).collect()
    }

    /// Number of strands after each prefix of the word; entry `i` is the
    /// count before event `i`, the last entry is the final count (always 0).
    pub fn strand_counts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.events.len() + 1);
        let mut m = 0isize;
        out.push(0);
        for ev in &self.events {
            m += ev.strand_delta();
            out.push(m as usize);
        }
        out
    }

    pub fn max_width(&self) -> usize {
        self.strand_counts().into_iter().max().unwrap_or(0)
    }
}

impl fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_front(self))
    }
}

/// Parse a front word: whitespace-separated `L p`, `R p`, `X p` tokens with
/// `#` comments running to the end of the line.
pub fn parse_front(text: &str) -> Result<FrontDiagram> {
    let mut events = Vec::new();
    let mut pending: Option<(EventKind, usize)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            match pending.take() {
                None => {
                    let kind = match tok {
                        "L" | "l" => EventKind::LeftCusp,
                        "R" | "r" => EventKind::RightCusp,
                        "X" | "x" => EventKind::Crossing,
                        other => {
                            return Err(Error::Syntax {
                                line: lineno + 1,
                                message: format!("expected L, R or X, found `{other}`"),
                            })
                        }
                    };
                    pending = Some((kind, lineno + 1));
                }
                Some((kind, _)) => {
                    let position: usize = tok.parse().map_err(|_| Error::Syntax {
                        line: lineno + 1,
                        message: format!("expected a positive integer position, found `{tok}`"),
                    })?;
                    if position == 0 {
                        return Err(Error::Syntax {
                            line: lineno + 1,
                            message: "positions start at 1".into(),
                        });
                    }
                    events.push(Event { kind, position });
                }
            }
        }
    }
    if let Some((kind, line)) = pending {
        return Err(Error::Syntax {
            line,
            message: format!("`{}` is missing its position", kind.letter()),
        });
    }
    FrontDiagram::new(events)
}

pub fn serialize_front(d: &FrontDiagram) -> String {
    d.events
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Closed components of a front, ignoring over/under information.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component id of each segment. Ids are ordered by the smallest segment
    /// they contain.
    pub component_of: Vec<usize>,
}

pub fn trace_components(d: &FrontDiagram) -> Components {
    let traversal = traverse(d);
    Components {
        count: traversal.count,
        component_of: traversal.component_of,
    }
}

struct Traversal {
    count: usize,
    component_of: Vec<usize>,
    /// +1 when the segment is traversed left to right.
    direction: Vec<i8>,
}

/// Walks every component starting from its first-created segment, heading
/// right.
fn traverse(d: &FrontDiagram) -> Traversal {
    let sk = &d.skeleton;
    let partner = sk.pass_through_partners();
    let n = sk.segment_count;
    let mut component_of = vec![usize::MAX; n];
    let mut direction = vec![0i8; n];
    let mut count = 0;
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let (mut seg, mut dir) = (start, 1i8);
        loop {
            component_of[seg] = count;
            direction[seg] = dir;
            let exit = if dir > 0 { 2 * seg + 1 } else { 2 * seg };
            let entry = partner[exit];
            seg = entry / 2;
            dir = if entry.is_multiple_of(2) { 1 } else { -1 };
            if seg == start {
                break;
            }
        }
        count += 1;
    }
    Traversal {
        count,
        component_of,
        direction,
    }
}

/// A front together with a direction on every component.
#[derive(Clone, Debug)]
pub struct OrientedFront {
    diagram: FrontDiagram,
    component_of: Vec<usize>,
    component_count: usize,
    reversed: BTreeSet<usize>,
    direction: Vec<i8>,
    signs: Vec<i8>,
}

/// Orient a front. Each component runs left to right along its first-created
/// segment unless its id is listed in `reversed`.
pub fn orient(d: &FrontDiagram, reversed: &BTreeSet<usize>) -> Result<OrientedFront> {
    let t = traverse(d);
    if let Some(&bad) = reversed.iter().find(|&&c| c >= t.count) {
        return Err(Error::UnknownComponent(bad));
    }
    let direction: Vec<i8> = t
        .direction
        .iter()
        .zip(&t.component_of)
        .map(|(&dir, c)| if reversed.contains(c) { -dir } else { dir })
        .collect();
    let signs = d
        .skeleton
        .crossings
        .iter()
        .map(|c| {
            // over: in_top -> out_bot, under: in_bot -> out_top; a crossing is
            // right-handed exactly when both strands run the same way in x.
            if direction[c.in_top] == direction[c.in_bot] {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok(OrientedFront {
        diagram: d.clone(),
        component_of: t.component_of,
        component_count: t.count,
        reversed: reversed.clone(),
        direction,
        signs,
    })
}

impl OrientedFront {
    /// Default orientation; fine for knots, arbitrary for links.
    pub fn default_for(d: &FrontDiagram) -> Self {
        orient(d, &BTreeSet::new()).expect("empty reversal set is always valid")
    }

    pub fn diagram(&self) -> &FrontDiagram {
        &self.diagram
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn component_of(&self) -> &[usize] {
        &self.component_of
    }

    pub fn reversed(&self) -> &BTreeSet<usize> {
        &self.reversed
    }

    /// +1 for segments traversed left to right, -1 otherwise.
    pub fn segment_directions(&self) -> &[i8] {
        &self.direction
    }

    pub fn crossing_signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// Number of left-handed (negative) crossings.
    pub fn left_handed(&self) -> i64 {
        self.signs.iter().filter(|&&s| s < 0).count() as i64
    }

    pub fn cusp_count(&self) -> i64 {
        self.diagram.cusp_count() as i64
    }

    pub fn crossing_count(&self) -> usize {
        self.diagram.crossing_count()
    }

    pub fn thurston_bennequin(&self) -> i64 {
        self.writhe() - self.cusp_count() / 2
    }
}

pub fn crossing_signs(of: &OrientedFront) -> Vec<i8> {
    of.crossing_signs().to_vec()
}

pub fn thurston_bennequin(of: &OrientedFront) -> i64 {
    of.thurston_bennequin()
}

/// Twice the linking number of every pair of components (signed crossing
/// count between them), indexed `[a][b]`.
pub fn linking_matrix(of: &OrientedFront) -> Vec<Vec<i64>> {
    let n = of.component_count();
    let mut m = vec![vec![0i64; n]; n];
    for (c, &sign) in of
        .diagram()
        .skeleton()
        .crossings
        .iter()
        .zip(of.crossing_signs())
    {
        let (a, b) = (of.component_of()[c.in_top], of.component_of()[c.in_bot]);
        if a != b {
            m[a][b] += sign as i64;
            m[b][a] += sign as i64;
        }
    }
    m
}

/// An orientation of `target` whose linking numbers agree with those of
/// `source` up to renumbering the components. Knots keep the default
/// orientation. Used to carry an orientation across front moves, which
/// may renumber components.
pub fn match_orientation(source: &OrientedFront, target: &FrontDiagram) -> Option<OrientedFront> {
    let want = linking_matrix(source);
    let n = want.len();
    let count = trace_components(target).count;
    if count != n {
        return None;
    }
    let perms = permutations(n);
    // reversing every component changes nothing, so keep component 0 fixed
    for mask in 0..1u64 << n.saturating_sub(1) {
        let reversed: BTreeSet<usize> = (1..n).filter(|c| mask >> (c - 1) & 1 == 1).collect();
        let candidate = orient(target, &reversed).ok()?;
        let got = linking_matrix(&candidate);
        if perms
            .iter()
            .any(|p| (0..n).all(|a| (0..n).all(|b| got[p[a]][p[b]] == want[a][b])))
        {
            return Some(candidate);
        }
    }
    None
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}
