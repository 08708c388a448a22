//! Legendrian Reidemeister moves as rewrites of event words.
//!
//! A front word is rigid: two events acting on disjoint strands can be drawn
//! in either order. Site detection therefore works modulo commutation of such
//! events; the events of a pattern may be interleaved with unrelated events,
//! which are slid out of the way before rewriting.
//!
//! Patterns (strand `s` is a bystander, `q` the position of the cusp event):
//!
//! * LR1a: nothing ↔ `L p+1, X p, R p+1` (kink hanging below strand `p`)
//! * LR1b: nothing ↔ `L p, X p+1, R p` (kink sitting above strand `p`)
//! * LR2, left cusp under a strand: `L q` ↔ `L q-1, X q, X q-1`
//! * LR2, left cusp over a strand: `L q` ↔ `L q+1, X q, X q+1`
//! * LR2, right cusp under a strand: `R q` ↔ `X q-1, X q, R q-1`
//! * LR2, right cusp over a strand: `R q` ↔ `X q+1, X q, R q+1`
//! * LR3: `X p, X p+1, X p` ↔ `X p+1, X p, X p+1`
//!
//! Fronts have a single crossing type, so LR3 is the only triple-point move.
//! Removing a bigon `X p, X p` is not Legendrian and is never offered.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{Event, EventKind, FrontDiagram};
use crate::error::{Error, Result};
use crate::states::DEFAULT_CROSSING_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveKind {
    LR1a,
    LR1b,
    LR2,
    LR3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// One applicable move. `window` lists the matched event indices of the
/// original word (empty for a forward LR1, which inserts at `cut`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MoveSite {
    pub kind: MoveKind,
    pub direction: Direction,
    pub window: Vec<usize>,
    pub cut: usize,
    /// The events that replace the gathered window.
    pub replacement: Vec<Event>,
}

impl fmt::Display for MoveSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        };
        let rep: Vec<String> = self.replacement.iter().map(|e| e.to_string()).collect();
        write!(
            f,
            "{:?} {} window={:?} cut={} -> [{}]",
            self.kind,
            dir,
            self.window,
            self.cut,
            rep.join(", ")
        )
    }
}

/// Vertical extent of an event on the doubled axis (strand `k` at `2k`, the
/// gap above it at `2k - 1`), measured in the state between two events.
fn output_span(e: Event) -> (usize, usize) {
    let p = e.position;
    match e.kind {
        EventKind::RightCusp => (2 * p - 1, 2 * p - 1),
        _ => (2 * p, 2 * p + 2),
    }
}

fn input_span(e: Event) -> (usize, usize) {
    let p = e.position;
    match e.kind {
        EventKind::LeftCusp => (2 * p - 1, 2 * p - 1),
        _ => (2 * p, 2 * p + 2),
    }
}

/// Rewrites `first; second` as `second'; first'` when the two events touch
/// disjoint strands, adjusting positions for strands they create or remove.
pub fn commute(first: Event, second: Event) -> Option<(Event, Event)> {
    let (a_lo, a_hi) = output_span(first);
    let (b_lo, b_hi) = input_span(second);
    let second_above = b_hi < a_lo;
    let second_below = a_hi < b_lo;
    if !second_above && !second_below {
        return None;
    }
    let shift = |e: Event, by: isize| Event {
        kind: e.kind,
        position: (e.position as isize + by) as usize,
    };
    if second_above {
        Some((second, shift(first, second.strand_delta())))
    } else {
        Some((shift(second, -first.strand_delta()), first))
    }
}

/// Slides the events at `indices` (ascending) together so they occupy
/// `indices[0]..indices[0] + indices.len()`, by moving each later one left
/// through the events in between.
fn gather(events: &[Event], indices: &[usize]) -> Option<Vec<Event>> {
    let mut word = events.to_vec();
    let start = *indices.first()?;
    for (offset, &idx) in indices.iter().enumerate().skip(1) {
        if idx <= indices[offset - 1] {
            return None;
        }
        let target = start + offset;
        let mut at = idx;
        while at > target {
            let (moved, displaced) = commute(word[at - 1], word[at])?;
            word[at - 1] = moved;
            word[at] = displaced;
            at -= 1;
        }
    }
    Some(word)
}

fn lr1_pattern(kind: MoveKind, p: usize) -> [Event; 3] {
    match kind {
        MoveKind::LR1a => [Event::left(p + 1), Event::cross(p), Event::right(p + 1)],
        _ => [Event::left(p), Event::cross(p + 1), Event::right(p)],
    }
}

fn lr1_matches(kind: MoveKind, w: &[Event]) -> bool {
    if w.len() != 3 {
        return false;
    }
    let p = match kind {
        MoveKind::LR1a => w[1].position,
        _ => w[0].position,
    };
    w == lr1_pattern(kind, p)
}

/// The four cusp-through-strand expansions of a single cusp event, when the
/// bystander strand exists in a stack of `strands` strands (counted before
/// the cusp event).
fn lr2_expansions(cusp: Event, strands: usize) -> Vec<[Event; 3]> {
    let q = cusp.position;
    let mut out = Vec::new();
    match cusp.kind {
        EventKind::LeftCusp => {
            if q >= 2 {
                out.push([Event::left(q - 1), Event::cross(q), Event::cross(q - 1)]);
            }
            if strands >= q {
                out.push([Event::left(q + 1), Event::cross(q), Event::cross(q + 1)]);
            }
        }
        EventKind::RightCusp => {
            if q >= 2 {
                out.push([Event::cross(q - 1), Event::cross(q), Event::right(q - 1)]);
            }
            if strands >= q + 2 {
                out.push([Event::cross(q + 1), Event::cross(q), Event::right(q + 1)]);
            }
        }
        EventKind::Crossing => {}
    }
    out
}

/// Inverse of [`lr2_expansions`]: the single cusp a three-event window
/// collapses to, if it is one of the four patterns.
fn lr2_collapse(w: &[Event]) -> Option<Event> {
    use EventKind::*;
    let (a, b, c) = (w[0], w[1], w[2]);
    match (a.kind, b.kind, c.kind) {
        (LeftCusp, Crossing, Crossing) => {
            let q = b.position;
            let beside = a.position + 1 == q || a.position == q + 1;
            (beside && c.position == a.position).then(|| Event::left(q))
        }
        (Crossing, Crossing, RightCusp) => {
            let q = b.position;
            let beside = a.position + 1 == q || a.position == q + 1;
            (beside && c.position == a.position).then(|| Event::right(q))
        }
        _ => None,
    }
}

fn lr3_partner(w: &[Event]) -> Option<[Event; 3]> {
    if w.iter().any(|e| e.kind != EventKind::Crossing) {
        return None;
    }
    let (a, b, c) = (w[0].position, w[1].position, w[2].position);
    if a == c && b == a + 1 {
        Some([Event::cross(a + 1), Event::cross(a), Event::cross(a + 1)])
    } else if a == c && a == b + 1 {
        Some([Event::cross(b), Event::cross(a), Event::cross(b)])
    } else {
        None
    }
}

/// Every applicable move, in a fixed order: forward LR1, forward LR2,
/// backward LR1, backward LR2, LR3.
pub fn find_moves(d: &FrontDiagram) -> Vec<MoveSite> {
    let events = d.events();
    let counts = d.strand_counts();
    let mut sites = Vec::new();

    for (cut, &m) in counts.iter().enumerate() {
        for p in 1..=m {
            for kind in [MoveKind::LR1a, MoveKind::LR1b] {
                sites.push(MoveSite {
                    kind,
                    direction: Direction::Forward,
                    window: Vec::new(),
                    cut,
                    replacement: lr1_pattern(kind, p).to_vec(),
                });
            }
        }
    }

    for (idx, &e) in events.iter().enumerate() {
        for rep in lr2_expansions(e, counts[idx]) {
            sites.push(MoveSite {
                kind: MoveKind::LR2,
                direction: Direction::Forward,
                window: vec![idx],
                cut: idx,
                replacement: rep.to_vec(),
            });
        }
    }

    let mut backward = Vec::new();
    let mut lr3 = Vec::new();
    let n = events.len();
    for i in 0..n {
        for j in i + 1..n {
            let Some(pair) = gather(events, &[i, j]) else {
                continue;
            };
            // a pattern needs its first two events to interact
            if commute(pair[i], pair[i + 1]).is_some() {
                continue;
            }
            for k in j + 1..n {
                let Some(word) = gather(events, &[i, j, k]) else {
                    continue;
                };
                let w = &word[i..i + 3];
                for kind in [MoveKind::LR1a, MoveKind::LR1b] {
                    if lr1_matches(kind, w) {
                        backward.push(MoveSite {
                            kind,
                            direction: Direction::Backward,
                            window: vec![i, j, k],
                            cut: i,
                            replacement: Vec::new(),
                        });
                    }
                }
                if let Some(cusp) = lr2_collapse(w) {
                    backward.push(MoveSite {
                        kind: MoveKind::LR2,
                        direction: Direction::Backward,
                        window: vec![i, j, k],
                        cut: i,
                        replacement: vec![cusp],
                    });
                }
                if let Some(rep) = lr3_partner(w) {
                    lr3.push(MoveSite {
                        kind: MoveKind::LR3,
                        direction: Direction::Forward,
                        window: vec![i, j, k],
                        cut: i,
                        replacement: rep.to_vec(),
                    });
                }
            }
        }
    }
    backward.sort_by_key(|s| s.kind);
    sites.extend(backward);
    sites.extend(lr3);
    sites
        .into_iter()
        .filter(|s| apply_move(d, s).is_ok())
        .collect()
}

/// Applies a site returned by [`find_moves`].
pub fn apply_move(d: &FrontDiagram, site: &MoveSite) -> Result<FrontDiagram> {
    let events = d.events();
    let mut word = if site.window.is_empty() {
        if site.cut > events.len() {
            return Err(Error::InvalidSite);
        }
        events.to_vec()
    } else {
        if site.window.iter().any(|&i| i >= events.len()) {
            return Err(Error::InvalidSite);
        }
        gather(events, &site.window).ok_or(Error::InvalidSite)?
    };
    let start = site.window.first().copied().unwrap_or(site.cut);
    let matched: Vec<Event> = word[start..start + site.window.len()].to_vec();
    let expected_ok = match (site.kind, site.direction) {
        (MoveKind::LR1a | MoveKind::LR1b, Direction::Forward) => {
            let p = match site.kind {
                MoveKind::LR1a => site.replacement.get(1).map(|e| e.position),
                _ => site.replacement.first().map(|e| e.position),
            };
            p.is_some_and(|p| site.replacement == lr1_pattern(site.kind, p))
                && site.window.is_empty()
        }
        (MoveKind::LR1a | MoveKind::LR1b, Direction::Backward) => {
            site.replacement.is_empty() && lr1_matches(site.kind, &matched)
        }
        (MoveKind::LR2, Direction::Forward) => {
            matched.len() == 1
                && site.replacement.len() == 3
                && lr2_collapse(&site.replacement) == Some(matched[0])
        }
        (MoveKind::LR2, Direction::Backward) => {
            matched.len() == 3
                && site.replacement.len() == 1
                && lr2_collapse(&matched) == Some(site.replacement[0])
        }
        (MoveKind::LR3, _) => {
            matched.len() == 3
                && lr3_partner(&matched).map(|r| r.to_vec()) == Some(site.replacement.clone())
        }
    };
    if !expected_ok {
        return Err(Error::InvalidSite);
    }
    word.splice(
        start..start + site.window.len(),
        site.replacement.iter().copied(),
    );
    FrontDiagram::new(word).map_err(|_| Error::InvalidSite)
}

/// Options for [`random_move_walk_with`].
#[derive(Clone, Debug)]
pub struct WalkConfig {
    /// Moves producing more crossings than this are skipped.
    pub max_crossings: usize,
    /// Below this many crossings, forward moves are drawn twice as often.
    pub small: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            max_crossings: DEFAULT_CROSSING_CAP,
            small: 6,
        }
    }
}

pub fn random_move_walk(d: &FrontDiagram, steps: usize, seed: u64) -> FrontDiagram {
    random_move_walk_with(d, steps, seed, &WalkConfig::default())
}

/// Applies `steps` random moves. Each step first draws a move family
/// (forward LR1, forward LR2, backward LR1, backward LR2, LR3) among those
/// with sites, then a site uniformly within it.
pub fn random_move_walk_with(
    d: &FrontDiagram,
    steps: usize,
    seed: u64,
    config: &WalkConfig,
) -> FrontDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = d.clone();
    for _ in 0..steps {
        let n = current.crossing_count();
        let mut families: [Vec<MoveSite>; 5] = Default::default();
        for site in find_moves(&current) {
            let added = match (site.kind, site.direction) {
                (MoveKind::LR1a | MoveKind::LR1b, Direction::Forward) => 1,
                (MoveKind::LR2, Direction::Forward) => 2,
                _ => 0,
            };
            if n + added > config.max_crossings {
                continue;
            }
            let family = match (site.kind, site.direction) {
                (MoveKind::LR3, _) => 4,
                (MoveKind::LR2, Direction::Backward) => 3,
                (_, Direction::Backward) => 2,
                (MoveKind::LR2, Direction::Forward) => 1,
                _ => 0,
            };
            families[family].push(site);
        }
        let weights: Vec<(usize, u32)> = families
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_empty())
            .map(|(i, _)| (i, if i < 2 && n < config.small { 2 } else { 1 }))
            .collect();
        let total: u32 = weights.iter().map(|w| w.1).sum();
        if total == 0 {
            break;
        }
        let mut pick = rng.gen_range(0..total);
        let family = weights
            .iter()
            .find(|(_, w)| {
                if pick < *w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .map(|w| w.0)
            .expect("pick is below the total weight");
        let site = families[family]
            .choose(&mut rng)
            .expect("family is nonempty");
        current = apply_move(&current, site).expect("listed sites apply");
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_front, OrientedFront};

    fn front(s: &str) -> FrontDiagram {
        parse_front(s).unwrap()
    }

    #[test]
    fn commute_shifts_positions() {
        assert_eq!(
            commute(Event::left(1), Event::cross(3)),
            Some((Event::cross(1), Event::left(1)))
        );
        assert_eq!(
            commute(Event::cross(3), Event::left(1)),
            Some((Event::left(1), Event::cross(5)))
        );
        assert_eq!(commute(Event::cross(1), Event::cross(2)), None);
        assert_eq!(commute(Event::right(2), Event::left(2)), None);
        assert_eq!(
            commute(Event::cross(1), Event::cross(3)),
            Some((Event::cross(3), Event::cross(1)))
        );
    }

    #[test]
    fn unknot_sites() {
        let d = front("L 1 R 1");
        let sites = find_moves(&d);
        assert!(sites
            .iter()
            .all(|s| !(matches!(s.kind, MoveKind::LR1a | MoveKind::LR1b)
                && s.direction == Direction::Backward)));
        assert!(sites
            .iter()
            .any(|s| s.kind == MoveKind::LR1a && s.direction == Direction::Forward));
    }

    #[test]
    fn lr1_forward_counts() {
        let d = front("L 1 R 1");
        let site = find_moves(&d)
            .into_iter()
            .find(|s| s.kind == MoveKind::LR1a)
            .unwrap();
        let e = apply_move(&d, &site).unwrap();
        assert_eq!(e.crossing_count(), 1);
        assert_eq!(e.cusp_count(), 4);
        let o = OrientedFront::default_for(&e);
        assert_eq!(
            (o.writhe(), o.left_handed(), o.thurston_bennequin()),
            (1, 0, -1)
        );
    }

    #[test]
    fn lr2_forward_then_backward() {
        let d = front("L 1 L 3 X 2 X 2 X 2 R 1 R 1");
        for site in find_moves(&d)
            .into_iter()
            .filter(|s| s.kind == MoveKind::LR2 && s.direction == Direction::Forward)
        {
            let e = apply_move(&d, &site).unwrap();
            assert_eq!(e.crossing_count(), 5);
            let back: Vec<_> = find_moves(&e)
                .into_iter()
                .filter(|s| s.kind == MoveKind::LR2 && s.direction == Direction::Backward)
                .collect();
            assert!(!back.is_empty());
            let restored: Vec<_> = back.iter().map(|s| apply_move(&e, s).unwrap()).collect();
            assert!(restored.contains(&d), "no backward site restores {site}");
        }
    }

    #[test]
    fn lr3_sites_exist_on_braid_words() {
        let d = front("L 1 L 2 L 3 X 1 X 2 X 1 R 3 R 2 R 1");
        let sites: Vec<_> = find_moves(&d)
            .into_iter()
            .filter(|s| s.kind == MoveKind::LR3)
            .collect();
        assert_eq!(sites.len(), 1);
        let e = apply_move(&d, &sites[0]).unwrap();
        assert_eq!(
            crate::diagram::serialize_front(&e).replace('\n', " "),
            "L 1 L 2 L 3 X 2 X 1 X 2 R 3 R 2 R 1"
        );
    }

    #[test]
    fn invalid_site_rejected() {
        let d = front("L 1 R 1");
        let bogus = MoveSite {
            kind: MoveKind::LR3,
            direction: Direction::Forward,
            window: vec![0, 1, 5],
            cut: 0,
            replacement: vec![],
        };
        assert_eq!(apply_move(&d, &bogus), Err(Error::InvalidSite));
    }

    #[test]
    fn walk_is_deterministic() {
        let d = front("L 1 L 3 X 2 X 2 X 2 R 1 R 1");
        assert_eq!(random_move_walk(&d, 0, 7), d);
        let a = random_move_walk(&d, 5, 42);
        let b = random_move_walk(&d, 5, 42);
        assert_eq!(a, b);
    }
}
