//! The tri-graded Legendrian Khovanov chain complex.
//!
//! Generators are enhanced states. The differential flips one A-resolved
//! crossing to B and relabels loops: a merge sends `(+,+)` to `+` and one `+`
//! with one `-` to `-`, two `-` loops give nothing; a split sends `+` to both
//! `(+,-)` and `(-,+)` and `-` to `(-,-)`. Loops away from the crossing keep
//! their labels. Every such target is incident with its source, and these are
//! the only incident states.
//!
//! Over Z an edge at crossing `x` carries the sign `(-1)^m`, with `m` the
//! number of B-resolved crossings of the source whose id exceeds `x`: the
//! parity of sorting the source's B-list with `x` appended.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::diagram::OrientedFront;
use crate::error::{Error, Result};
use crate::linalg::{BitMatrix, SparseIntMatrix};
use crate::states::{
    check_cap, enhance, geometry, resolve, EnhancedState, Label, ResolutionAssignment, Resolver,
    StateGeometry, DEFAULT_CROSSING_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Coefficients {
    Z2,
    Z,
}

impl Coefficients {
    pub fn name(self) -> &'static str {
        match self {
            Coefficients::Z2 => "Z2",
            Coefficients::Z => "Z",
        }
    }
}

/// Homological, cusp and quantum degree, in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Grading {
    pub i: i64,
    pub k: i64,
    pub j: i64,
}

impl Grading {
    pub fn new(i: i64, k: i64, j: i64) -> Self {
        Grading { i, k, j }
    }

    /// The same `(k, j)` one homological degree up.
    pub fn next(self) -> Self {
        Grading {
            i: self.i + 1,
            ..self
        }
    }

    pub fn prev(self) -> Self {
        Grading {
            i: self.i - 1,
            ..self
        }
    }
}

impl std::fmt::Display for Grading {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.i, self.k, self.j)
    }
}

/// A basis element: resolution bits of the state and the mask of `+` loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub state: u64,
    pub plus: u64,
    pub tau: i64,
    pub grading: Grading,
}

/// True iff `t` appears in `∂s`: the states differ at exactly one crossing,
/// A in `s` and B in `t`, the `j` and `k` degrees agree, and loops common to
/// both carry the same labels.
pub fn incidence(of: &OrientedFront, s: &EnhancedState, t: &EnhancedState) -> Result<bool> {
    if s.front_key() != t.front_key() {
        return Err(Error::DifferentFront);
    }
    let (sa, ta) = (s.geometry.assignment, t.geometry.assignment);
    if sa.len() != ta.len() {
        return Err(Error::DifferentFront);
    }
    let diff = sa.bits() ^ ta.bits();
    if diff.count_ones() != 1 || sa.bits() & diff != 0 {
        return Ok(false);
    }
    if s.j != t.j || s.k != t.k {
        return Ok(false);
    }
    let x = diff.trailing_zeros() as usize;
    let touched = touched_loops(of, &s.geometry, x);
    for (m, &id) in s.geometry.loops.iter().enumerate() {
        if touched.contains(&(m as u32)) {
            continue;
        }
        if t.label_of_loop_id(id) != Some(s.labels[m]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Loop indices of `g` meeting crossing `x`.
fn touched_loops(of: &OrientedFront, g: &StateGeometry, x: usize) -> Vec<u32> {
    let c = &of.diagram().skeleton().crossings[x];
    let mut v: Vec<u32> = [c.in_top, c.in_bot, c.out_top, c.out_bot]
        .iter()
        .map(|&seg| g.loop_of_segment[seg])
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Relabeling rules for the differential. Only [`LabelRules::standard`]
/// gives a complex; other rule sets exist to exercise the checks.
#[derive(Clone, Copy, Debug)]
pub struct LabelRules {
    /// Label of the merged loop, or `None` for no target.
    pub merge: fn(Label, Label) -> Option<Label>,
    /// Labelings of the two loops of a split: the loop through the upper
    /// incoming strand first.
    pub split: fn(Label) -> &'static [(Label, Label)],
}

impl LabelRules {
    pub fn standard() -> Self {
        LabelRules {
            merge: |a, b| match (a, b) {
                (Label::Plus, Label::Plus) => Some(Label::Plus),
                (Label::Minus, Label::Minus) => None,
                _ => Some(Label::Minus),
            },
            split: |l| match l {
                Label::Plus => &[(Label::Plus, Label::Minus), (Label::Minus, Label::Plus)],
                Label::Minus => &[(Label::Minus, Label::Minus)],
            },
        }
    }
}

impl Default for LabelRules {
    fn default() -> Self {
        Self::standard()
    }
}

fn label(plus: bool) -> Label {
    if plus {
        Label::Plus
    } else {
        Label::Minus
    }
}

/// One edge out of a generator: crossing flipped, target state and target
/// `+` mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Edge {
    crossing: usize,
    state: u64,
    plus: u64,
}

/// Applies the merge and split rules to the generator `(s, plus)` at every
/// A-resolved crossing. `geom` looks up the geometry of a state by its bits.
fn edges<'g>(
    of: &OrientedFront,
    rules: &LabelRules,
    geom: &dyn Fn(u64) -> &'g StateGeometry,
    state: u64,
    plus: u64,
    out: &mut Vec<Edge>,
) {
    let sk = of.diagram().skeleton();
    let src = geom(state);
    for (x, c) in sk.crossings.iter().enumerate() {
        if state >> x & 1 == 1 {
            continue;
        }
        let tstate = state | 1 << x;
        let dst = geom(tstate);
        // carry over every label by a representative segment; the loops at
        // the crossing are then overwritten
        let mut tplus = 0u64;
        for (m, &id) in src.loops.iter().enumerate() {
            if plus >> m & 1 == 1 {
                tplus |= 1 << dst.loop_of_segment[id];
            }
        }
        let at = |seg: usize| label(plus >> src.loop_of_segment[seg] & 1 == 1);
        let mut push = |tplus: u64| {
            out.push(Edge {
                crossing: x,
                state: tstate,
                plus: tplus,
            })
        };
        let (a, b) = (src.loop_of_segment[c.in_top], src.loop_of_segment[c.in_bot]);
        if a != b {
            // merge: in B the crossing's four segments lie on one loop
            let merged = dst.loop_of_segment[c.in_top];
            let base = tplus & !(1 << merged);
            match (rules.merge)(at(c.in_top), at(c.in_bot)) {
                Some(Label::Plus) => push(base | 1 << merged),
                Some(Label::Minus) => push(base),
                None => {}
            }
        } else {
            let (p, q) = (
                dst.loop_of_segment[c.in_top],
                dst.loop_of_segment[c.out_top],
            );
            debug_assert_ne!(p, q);
            let base = tplus & !(1 << p) & !(1 << q);
            for &(lp, lq) in (rules.split)(at(c.in_top)) {
                let mut t = base;
                if lp == Label::Plus {
                    t |= 1 << p;
                }
                if lq == Label::Plus {
                    t |= 1 << q;
                }
                push(t);
            }
        }
    }
}

/// `∂S` as a list of enhanced states, without signs.
pub fn boundary_targets(of: &OrientedFront, s: &EnhancedState) -> Result<Vec<EnhancedState>> {
    if s.front_key() != crate::states::front_key(of) {
        return Err(Error::DifferentFront);
    }
    let n = of.crossing_count();
    let bits = s.geometry.assignment.bits();
    let mut r = Resolver::new(of.diagram().skeleton());
    let neighbours: BTreeMap<u64, StateGeometry> = (0..n)
        .filter(|x| bits >> x & 1 == 0)
        .map(|x| bits | 1 << x)
        .map(|b| (b, geometry(of, &mut r, ResolutionAssignment::new(b, n))))
        .collect();
    let lookup = |b: u64| {
        if b == bits {
            &s.geometry
        } else {
            &neighbours[&b]
        }
    };
    let mut out = Vec::new();
    edges(
        of,
        &LabelRules::standard(),
        &lookup,
        bits,
        s.plus_mask(),
        &mut out,
    );
    Ok(out
        .into_iter()
        .map(|e| enhance(of, lookup(e.state), e.plus))
        .collect())
}

/// Chain groups and differential of one oriented front.
///
/// `differentials[g]` maps `C_g` to `C_{g.next()}`, rows indexed by the
/// target basis and columns by the source basis. Groups without generators
/// have rank 0 and are simply absent from the maps.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub coefficients: Coefficients,
    pub tb: i64,
    pub crossings: usize,
    pub generators: Vec<Generator>,
    groups: BTreeMap<Grading, Vec<u32>>,
    differentials: BTreeMap<Grading, SparseIntMatrix>,
}

impl ChainComplex {
    /// Generator ids of `C_g`, in basis order; empty if there are none.
    pub fn group(&self, g: Grading) -> &[u32] {
        self.groups.get(&g).map_or(&[], |v| v.as_slice())
    }

    pub fn rank(&self, g: Grading) -> usize {
        self.group(g).len()
    }

    pub fn gradings(&self) -> impl Iterator<Item = Grading> + '_ {
        self.groups.keys().copied()
    }

    /// `∂: C_g → C_{g.next()}`.
    pub fn differential(&self, g: Grading) -> SparseIntMatrix {
        match self.differentials.get(&g) {
            Some(m) => m.clone(),
            None => SparseIntMatrix::new(self.rank(g.next()), self.rank(g)),
        }
    }

    pub(crate) fn differential_ref(&self, g: Grading) -> Option<&SparseIntMatrix> {
        self.differentials.get(&g)
    }

    /// Distinct `(k, j)` pairs, each carrying one complex in `i`.
    pub fn blocks(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = self.groups.keys().map(|g| (g.k, g.j)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Overwrites one matrix entry; used to build negative controls.
    pub fn set_entry(&mut self, g: Grading, row: usize, col: usize, value: i64) {
        let (rows, cols) = (self.rank(g.next()), self.rank(g));
        let m = self
            .differentials
            .entry(g)
            .or_insert_with(|| SparseIntMatrix::new(rows, cols));
        m.entries
            .retain(|&(r, c, _)| (r as usize, c as usize) != (row, col));
        m.push(row, col, value);
    }

    /// One line per generator, `(i,k,j) | resolution bits | labels`, then one
    /// line per nonzero matrix entry.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (g, ids) in &self.groups {
            for &id in ids {
                let gen = &self.generators[id as usize];
                let bits: String = (0..self.crossings)
                    .map(|x| if gen.state >> x & 1 == 1 { 'B' } else { 'A' })
                    .collect();
                let loops = self.loop_count(gen.state);
                let labels: String = (0..loops)
                    .map(|m| if gen.plus >> m & 1 == 1 { '+' } else { '-' })
                    .collect();
                let _ = writeln!(out, "{g} | {bits} | {labels}");
            }
        }
        for (g, m) in &self.differentials {
            let mut entries = m.entries.clone();
            entries.sort_unstable();
            for (r, c, v) in entries {
                let _ = writeln!(out, "{g} -> {} [{r},{c}] = {v}", g.next());
            }
        }
        out
    }

    fn loop_count(&self, state: u64) -> usize {
        // tau = 2·plus - loops
        let gen = self
            .generators
            .iter()
            .find(|g| g.state == state)
            .expect("state has generators");
        (2 * gen.plus.count_ones() as i64 - gen.tau) as usize
    }
}

pub fn build_complex_z2(of: &OrientedFront) -> Result<ChainComplex> {
    build_complex(of, Coefficients::Z2, DEFAULT_CROSSING_CAP)
}

pub fn build_complex_z(of: &OrientedFront) -> Result<ChainComplex> {
    build_complex(of, Coefficients::Z, DEFAULT_CROSSING_CAP)
}

pub fn build_complex(
    of: &OrientedFront,
    coefficients: Coefficients,
    cap: usize,
) -> Result<ChainComplex> {
    build_complex_with_rules(of, coefficients, cap, &LabelRules::standard())
}

pub fn build_complex_with_rules(
    of: &OrientedFront,
    coefficients: Coefficients,
    cap: usize,
    rules: &LabelRules,
) -> Result<ChainComplex> {
    check_cap(of, cap)?;
    let n = of.crossing_count();
    let tb = of.thurston_bennequin();
    let mut r = Resolver::new(of.diagram().skeleton());
    let geoms: Vec<StateGeometry> = (0..1u64 << n)
        .map(|bits| geometry(of, &mut r, ResolutionAssignment::new(bits, n)))
        .collect();
    let mut offsets = Vec::with_capacity(geoms.len() + 1);
    let mut generators = Vec::new();
    for (bits, g) in geoms.iter().enumerate() {
        offsets.push(generators.len());
        for mask in 0..1u64 << g.loop_count() {
            let e = enhance(of, g, mask);
            debug_assert_eq!(e.k, e.j - tb);
            generators.push(Generator {
                state: bits as u64,
                plus: mask,
                tau: e.tau,
                grading: Grading::new(e.i, e.k, e.j),
            });
        }
    }
    let mut groups: BTreeMap<Grading, Vec<u32>> = BTreeMap::new();
    let mut local = vec![0u32; generators.len()];
    for (id, gen) in generators.iter().enumerate() {
        let list = groups.entry(gen.grading).or_default();
        local[id] = list.len() as u32;
        list.push(id as u32);
    }
    let mut differentials: BTreeMap<Grading, SparseIntMatrix> = BTreeMap::new();
    let mut buf = Vec::new();
    for (id, gen) in generators.iter().enumerate() {
        buf.clear();
        edges(
            of,
            rules,
            &|b| &geoms[b as usize],
            gen.state,
            gen.plus,
            &mut buf,
        );
        if buf.is_empty() {
            continue;
        }
        let g = gen.grading;
        let m = differentials.entry(g).or_insert_with(|| {
            let rows = groups.get(&g.next()).map_or(0, |v| v.len());
            SparseIntMatrix::new(rows, groups[&g].len())
        });
        for e in &buf {
            let tid = offsets[e.state as usize] + e.plus as usize;
            if generators[tid].grading != g.next() {
                // only a nonstandard rule set can leave the (k, j) block
                continue;
            }
            let value = match coefficients {
                Coefficients::Z2 => 1,
                Coefficients::Z => {
                    let above = (gen.state >> (e.crossing + 1)).count_ones();
                    if above % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                }
            };
            m.push(local[tid] as usize, local[id] as usize, value);
        }
    }
    Ok(ChainComplex {
        coefficients,
        tb,
        crossings: n,
        generators,
        groups,
        differentials,
    })
}

/// True iff every composite `C_g → C_{g+1} → C_{g+2}` vanishes (mod 2 for a
/// Z2 complex, exactly for a Z complex).
pub fn check_d_squared(c: &ChainComplex) -> bool {
    c.differentials.iter().all(|(g, first)| {
        let Some(second) = c.differentials.get(&g.next()) else {
            return true;
        };
        match c.coefficients {
            Coefficients::Z2 => second.mul_is_zero_mod2(first),
            Coefficients::Z => second.mul_is_zero(first),
        }
    })
}

/// The mod 2 reduction of every block as packed bit matrices.
pub fn reduce_mod2(c: &ChainComplex) -> BTreeMap<Grading, BitMatrix> {
    c.differentials
        .iter()
        .map(|(g, m)| (*g, m.to_bits()))
        .collect()
}

/// Generator as a full enhanced state.
pub fn generator_state(of: &OrientedFront, gen: &Generator) -> Result<EnhancedState> {
    let g = resolve(
        of,
        &ResolutionAssignment::new(gen.state, of.crossing_count()),
    )?;
    Ok(enhance(of, &g, gen.plus))
}

/// Label of the loop through `segment` in `s`.
pub fn label_at_segment(s: &EnhancedState, segment: usize) -> Label {
    s.labels[s.geometry.loop_of_segment[segment] as usize]
}
