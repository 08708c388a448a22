//! Legendrian states (complete resolutions) and enhanced states.
//!
//! The A-resolution of a crossing keeps two horizontal strands; the
//! B-resolution replaces it by a right cusp followed by a left cusp, adding two
//! cusps. Loops are found by union-find over strand segments and identified by
//! their smallest segment id, so a loop untouched by a change at one crossing
//! keeps its id.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::diagram::{OrientedFront, Skeleton};
use crate::error::{Error, Result};

pub const DEFAULT_CROSSING_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Resolution {
    A,
    B,
}

/// Choice of resolution at every crossing; bit `x` set means crossing `x` is
/// B-resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResolutionAssignment {
    bits: u64,
    len: usize,
}

impl ResolutionAssignment {
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= 63, "at most 63 crossings can be encoded");
        let mask = if len == 0 { 0 } else { (1u64 << len) - 1 };
        ResolutionAssignment {
            bits: bits & mask,
            len,
        }
    }

    pub fn all_a(len: usize) -> Self {
        Self::new(0, len)
    }

    pub fn all_b(len: usize) -> Self {
        Self::new(u64::MAX, len)
    }

    pub fn from_choices(choices: &[Resolution]) -> Self {
        let bits = choices
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Resolution::B)
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        Self::new(bits, choices.len())
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, crossing: usize) -> Resolution {
        if self.bits >> crossing & 1 == 1 {
            Resolution::B
        } else {
            Resolution::A
        }
    }

    pub fn b_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn a_count(&self) -> usize {
        self.len - self.b_count()
    }

    pub fn with(&self, crossing: usize, r: Resolution) -> Self {
        let bits = match r {
            Resolution::A => self.bits & !(1 << crossing),
            Resolution::B => self.bits | (1 << crossing),
        };
        Self::new(bits, self.len)
    }
}

/// Union-find over segment ids, reset per state.
#[derive(Clone, Debug)]
pub(crate) struct SegmentUnionFind {
    parent: Vec<u32>,
}

impl SegmentUnionFind {
    pub(crate) fn new(n: usize) -> Self {
        SegmentUnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub(crate) fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[self.parent[x] as usize];
            self.parent[x] = up;
            x = up as usize;
        }
        x
    }

    /// Links the larger root under the smaller, so roots are always the
    /// minimal member.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo as u32;
        true
    }
}

/// Loop finder for one front, reusable across states.
#[derive(Clone, Debug)]
pub(crate) struct Resolver<'a> {
    skeleton: &'a Skeleton,
    uf: SegmentUnionFind,
}

impl<'a> Resolver<'a> {
    pub(crate) fn new(skeleton: &'a Skeleton) -> Self {
        Resolver {
            skeleton,
            uf: SegmentUnionFind::new(skeleton.segment_count),
        }
    }

    fn glue(&mut self, bits: u64) -> usize {
        self.uf.reset();
        let sk = self.skeleton;
        let mut merges = 0;
        for &(t, b) in sk.left_cusps.iter().chain(&sk.right_cusps) {
            merges += self.uf.union(t, b) as usize;
        }
        for (x, c) in sk.crossings.iter().enumerate() {
            if bits >> x & 1 == 1 {
                merges += self.uf.union(c.in_top, c.in_bot) as usize;
                merges += self.uf.union(c.out_top, c.out_bot) as usize;
            } else {
                merges += self.uf.union(c.in_top, c.out_top) as usize;
                merges += self.uf.union(c.in_bot, c.out_bot) as usize;
            }
        }
        merges
    }

    pub(crate) fn loop_count(&mut self, bits: u64) -> usize {
        self.skeleton.segment_count - self.glue(bits)
    }

    /// Canonical loop ids (ascending) and the loop index of every segment.
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn loops(&mut self, bits: u64) -> (Vec<usize>, Vec<u32>) {
        self.glue(bits);
        let n = self.skeleton.segment_count;
        let mut ids = Vec::new();
        let mut index_of_root = vec![u32::MAX; n];
        let mut loop_of = vec![0u32; n];
        for seg in 0..n {
            let root = self.uf.find(seg);
            if index_of_root[root] == u32::MAX {
                // roots are minimal members, and segments are scanned in
                // ascending order, so the first visit is the root itself
                index_of_root[root] = ids.len() as u32;
                ids.push(root);
            }
            loop_of[seg] = index_of_root[root];
        }
        (ids, loop_of)
    }
}

/// One complete resolution of a front and its loop decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateGeometry {
    pub assignment: ResolutionAssignment,
    /// Canonical loop ids (smallest member segment), ascending.
    pub loops: Vec<usize>,
    /// Index into `loops` for every segment.
    pub loop_of_segment: Vec<u32>,
    pub cusp_count: usize,
}

impl StateGeometry {
    pub fn loop_count(&self) -> usize {
        self.loops.len()
    }

    pub fn a_count(&self) -> usize {
        self.assignment.a_count()
    }

    pub fn b_count(&self) -> usize {
        self.assignment.b_count()
    }

    /// A(s) - B(s).
    pub fn sigma(&self) -> i64 {
        self.a_count() as i64 - self.b_count() as i64
    }
}

pub(crate) fn check_cap(of: &OrientedFront, cap: usize) -> Result<()> {
    let n = of.crossing_count();
    if n > cap.min(63) {
        return Err(Error::TooManyCrossings { crossings: n, cap });
    }
    Ok(())
}

pub fn resolve(of: &OrientedFront, a: &ResolutionAssignment) -> Result<StateGeometry> {
    let n = of.crossing_count();
    if a.len() != n {
        return Err(Error::AssignmentMismatch {
            expected: n,
            got: a.len(),
        });
    }
    let mut r = Resolver::new(of.diagram().skeleton());
    Ok(geometry(of, &mut r, *a))
}

pub(crate) fn geometry(
    of: &OrientedFront,
    r: &mut Resolver<'_>,
    a: ResolutionAssignment,
) -> StateGeometry {
    let (loops, loop_of_segment) = r.loops(a.bits());
    StateGeometry {
        assignment: a,
        loops,
        loop_of_segment,
        cusp_count: of.diagram().cusp_count() + 2 * a.b_count(),
    }
}

/// All `2^n` states in binary-counting order (crossing 0 is the low bit,
/// A = 0, B = 1).
pub fn enumerate_states(
    of: &OrientedFront,
    cap: usize,
) -> Result<impl Iterator<Item = StateGeometry> + '_> {
    check_cap(of, cap)?;
    let n = of.crossing_count();
    let mut r = Resolver::new(of.diagram().skeleton());
    Ok((0..1u64 << n).map(move |bits| geometry(of, &mut r, ResolutionAssignment::new(bits, n))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Plus,
    Minus,
}

/// A state with a sign on each loop, plus its three gradings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnhancedState {
    pub geometry: StateGeometry,
    /// Label of each loop, indexed like `geometry.loops`.
    pub labels: Vec<Label>,
    pub tau: i64,
    pub i: i64,
    pub j: i64,
    pub k: i64,
    front_key: u64,
}

impl EnhancedState {
    pub fn front_key(&self) -> u64 {
        self.front_key
    }

    pub fn label_of_loop_id(&self, id: usize) -> Option<Label> {
        self.geometry
            .loops
            .binary_search(&id)
            .ok()
            .map(|idx| self.labels[idx])
    }
}

/// Identifies an oriented front, so states from different fronts can be told
/// apart.
pub fn front_key(of: &OrientedFront) -> u64 {
    let mut h = DefaultHasher::new();
    of.diagram().events().hash(&mut h);
    of.reversed().hash(&mut h);
    h.finish()
}

/// Gradings `(i, j, k)` of an enhanced state.
pub fn gradings(of: &OrientedFront, sigma: i64, cusps: i64, tau: i64) -> (i64, i64, i64) {
    let w = of.writhe();
    let l = of.left_handed();
    debug_assert_eq!((w - sigma).rem_euclid(2), 0);
    let i = (w - sigma) / 2;
    let j = (3 * w - sigma + 2 * tau) / 2;
    let k = (cusps - 2 * l + 2 * tau) / 2;
    (i, j, k)
}

/// All `2^||s||` labelings of a state, label mask counting upward with bit
/// `m` set meaning loop `m` is `+`.
pub fn enumerate_enhanced<'a>(
    of: &'a OrientedFront,
    g: &'a StateGeometry,
) -> impl Iterator<Item = EnhancedState> + 'a {
    let key = front_key(of);
    (0..1u64 << g.loop_count()).map(move |mask| enhance_with_key(of, g, mask, key))
}

/// The labeling of `g` given by `mask` (bit `m` set means loop `m` is `+`).
pub fn enhance(of: &OrientedFront, g: &StateGeometry, mask: u64) -> EnhancedState {
    enhance_with_key(of, g, mask, front_key(of))
}

fn enhance_with_key(of: &OrientedFront, g: &StateGeometry, mask: u64, key: u64) -> EnhancedState {
    let m = g.loop_count();
    let labels: Vec<Label> = (0..m)
        .map(|b| {
            if mask >> b & 1 == 1 {
                Label::Plus
            } else {
                Label::Minus
            }
        })
        .collect();
    let plus = (mask & ((1u64 << m) - 1)).count_ones() as i64;
    let tau = 2 * plus - m as i64;
    let (i, j, k) = gradings(of, g.sigma(), g.cusp_count as i64, tau);
    EnhancedState {
        geometry: g.clone(),
        labels,
        tau,
        i,
        j,
        k,
        front_key: key,
    }
}

impl EnhancedState {
    /// Bit mask of `+` loops.
    pub fn plus_mask(&self) -> u64 {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == Label::Plus)
            .fold(0, |acc, (b, _)| acc | 1 << b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_front;

    fn oriented(s: &str) -> OrientedFront {
        OrientedFront::default_for(&parse_front(s).unwrap())
    }

    const RH_TREFOIL: &str = "L 1 L 3 X 2 X 2 X 2 R 1 R 1";
    const HOPF: &str = "L 1 L 3 X 2 X 2 R 1 R 1";

    #[test]
    fn unknot_single_state() {
        let o = oriented("L 1 R 1");
        let states: Vec<_> = enumerate_states(&o, DEFAULT_CROSSING_CAP)
            .unwrap()
            .collect();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].loop_count(), 1);
        assert_eq!(states[0].cusp_count, 2);
    }

    #[test]
    fn trefoil_extreme_states() {
        let o = oriented(RH_TREFOIL);
        assert_eq!(
            resolve(&o, &ResolutionAssignment::all_a(3))
                .unwrap()
                .loop_count(),
            2
        );
        assert_eq!(
            resolve(&o, &ResolutionAssignment::all_b(3))
                .unwrap()
                .loop_count(),
            3
        );
        assert_eq!(
            resolve(&o, &ResolutionAssignment::all_a(2)),
            Err(Error::AssignmentMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn hopf_loop_counts() {
        let o = oriented(HOPF);
        let counts: Vec<_> = enumerate_states(&o, DEFAULT_CROSSING_CAP)
            .unwrap()
            .map(|s| s.loop_count())
            .collect();
        assert_eq!(counts, vec![2, 1, 1, 2]);
    }

    #[test]
    fn trefoil_loop_counts_and_generators() {
        let o = oriented(RH_TREFOIL);
        let states: Vec<_> = enumerate_states(&o, DEFAULT_CROSSING_CAP)
            .unwrap()
            .collect();
        let counts: Vec<_> = states.iter().map(|s| s.loop_count()).collect();
        assert_eq!(counts, vec![2, 1, 1, 2, 1, 2, 2, 3]);
        let total: usize = states.iter().map(|s| 1 << s.loop_count()).sum();
        assert_eq!(total, 30);
        for s in &states {
            assert_eq!(s.a_count() + s.b_count(), 3);
            assert_eq!(s.cusp_count, 4 + 2 * s.b_count());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let o = oriented(RH_TREFOIL);
        assert!(matches!(
            enumerate_states(&o, 2),
            Err(Error::TooManyCrossings {
                crossings: 3,
                cap: 2
            })
        ));
    }

    #[test]
    fn unknot_enhanced_gradings() {
        let o = oriented("L 1 R 1");
        let g = resolve(&o, &ResolutionAssignment::all_a(0)).unwrap();
        let mut got: Vec<_> = enumerate_enhanced(&o, &g)
            .map(|s| (s.tau, s.i, s.j, s.k))
            .collect();
        got.sort();
        assert_eq!(got, vec![(-1, 0, -1, 0), (1, 0, 1, 2)]);
    }

    #[test]
    fn resolution_is_stable() {
        let o = oriented(RH_TREFOIL);
        for bits in 0..8 {
            let a = ResolutionAssignment::new(bits, 3);
            assert_eq!(resolve(&o, &a).unwrap(), resolve(&o, &a).unwrap());
        }
    }

    #[test]
    fn assignment_helpers() {
        let a = ResolutionAssignment::from_choices(&[Resolution::A, Resolution::B, Resolution::B]);
        assert_eq!(a.bits(), 0b110);
        assert_eq!(a.get(0), Resolution::A);
        assert_eq!(a.with(0, Resolution::B).bits(), 0b111);
        assert_eq!(a.with(2, Resolution::A).b_count(), 1);
    }
}
