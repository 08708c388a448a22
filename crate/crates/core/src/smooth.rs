//! Smooth knot invariants of the diagram underlying a front, computed on a
//! planar diagram code that is built here from scratch. None of the front
//! machinery in `states` or `complex` is used, so these values serve as
//! independent cross-checks.
//!
//! Each crossing is written `X[a, b, c, d]`: `a` is the incoming under edge and
//! the others follow counter-clockwise. The A-smoothing joins `a` with `b` and
//! `c` with `d`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::diagram::{EventKind, FrontDiagram};
use crate::error::{Error, Result};
use crate::homology::HomologyGroup;
use crate::linalg::{smith_summary, SparseIntMatrix};
use crate::poly::LaurentPoly;

/// Port slots around a crossing, listed counter-clockwise starting at the
/// lower left.
const LL: usize = 0;
const LR: usize = 1;
const UR: usize = 2;
const UL: usize = 3;

/// Port at the other end of the same strand: over `UL`–`LR`, under `LL`–`UR`.
fn through(slot: usize) -> usize {
    (slot + 2) % 4
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdCode {
    /// `[a, b, c, d]` per crossing, in event order.
    pub crossings: Vec<[usize; 4]>,
    /// +1 or -1 per crossing.
    pub signs: Vec<i8>,
    /// Components that meet no crossing.
    pub free_loops: usize,
    pub edge_count: usize,
}

impl PdCode {
    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn negative(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }
}

/// Builds the oriented planar diagram code of a front. Components are
/// numbered by their leftmost cusp in event order; each runs to the right
/// along the upper branch of that cusp unless listed in `reversed`.
pub fn pd_code(d: &FrontDiagram, reversed: &BTreeSet<usize>) -> Result<PdCode> {
    // Graph nodes: 4 ports per crossing, then two per left cusp.
    let events = d.events();
    let n = events
        .iter()
        .filter(|e| e.kind == EventKind::Crossing)
        .count();
    let mut links: Vec<Vec<usize>> = vec![Vec::new(); 4 * n];
    let mut cusp_nodes = Vec::new();
    let mut strands: Vec<usize> = Vec::new();
    let mut x = 0;
    let link = |links: &mut Vec<Vec<usize>>, a: usize, b: usize| {
        links[a].push(b);
        links[b].push(a);
    };
    for e in events {
        let p = e.position - 1;
        match e.kind {
            EventKind::LeftCusp => {
                let (top, bot) = (links.len(), links.len() + 1);
                links.push(Vec::new());
                links.push(Vec::new());
                link(&mut links, top, bot);
                cusp_nodes.push((top, bot));
                strands.splice(p..p, [top, bot]);
            }
            EventKind::RightCusp => {
                let (a, b) = (strands[p], strands[p + 1]);
                link(&mut links, a, b);
                strands.drain(p..p + 2);
            }
            EventKind::Crossing => {
                link(&mut links, strands[p], 4 * x + UL);
                link(&mut links, strands[p + 1], 4 * x + LL);
                strands[p] = 4 * x + UR;
                strands[p + 1] = 4 * x + LR;
                x += 1;
            }
        }
    }
    let is_port = |v: usize| v < 4 * n;
    // Walk every component; label edges in traversal order and note which
    // port of each strand is entered.
    let mut port_edge = vec![usize::MAX; 4 * n];
    let mut entered = vec![false; 4 * n];
    let mut seen = vec![false; links.len()];
    let mut edge_count = 0;
    let mut free_loops = 0;
    let mut component = 0;
    for &(top, bot) in &cusp_nodes {
        if seen[top] {
            continue;
        }
        let (start, before) = if reversed.contains(&component) {
            (bot, top)
        } else {
            (top, bot)
        };
        component += 1;
        let (mut prev, mut cur) = (before, start);
        let mut first_port = None;
        // walk to the first entry port, or around a crossingless loop
        loop {
            seen[cur] = true;
            if is_port(cur) {
                first_port = Some(cur);
                break;
            }
            let next = links[cur]
                .iter()
                .copied()
                .find(|&v| v != prev)
                .unwrap_or(prev);
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
        }
        let Some(first) = first_port else {
            free_loops += 1;
            continue;
        };
        let mut port = first;
        loop {
            entered[port] = true;
            let exit = port - port % 4 + through(port % 4);
            let label = edge_count;
            edge_count += 1;
            port_edge[exit] = label;
            let (mut p, mut c) = (exit, links[exit][0]);
            while !is_port(c) {
                seen[c] = true;
                let next = links[c].iter().copied().find(|&v| v != p).unwrap();
                p = c;
                c = next;
            }
            port_edge[c] = label;
            port = c;
            if port == first {
                break;
            }
        }
    }
    if reversed.iter().any(|&c| c >= component) {
        return Err(Error::UnknownComponent(
            *reversed.iter().next_back().unwrap(),
        ));
    }
    let mut crossings = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for x in 0..n {
        let a_slot = if entered[4 * x + LL] { LL } else { UR };
        let slots = [a_slot, (a_slot + 1) % 4, (a_slot + 2) % 4, (a_slot + 3) % 4];
        crossings.push(slots.map(|s| port_edge[4 * x + s]));
        // right-handed exactly when the over strand runs from d to b
        let d_slot = slots[3];
        signs.push(if entered[4 * x + d_slot] { 1 } else { -1 });
    }
    Ok(PdCode {
        crossings,
        signs,
        free_loops,
        edge_count,
    })
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Loops of the smoothing with bit `x` set meaning the B-smoothing at
/// crossing `x`. Returns the loop index of every edge and the loop count.
fn smoothing(pd: &PdCode, bits: u64) -> (Vec<usize>, usize) {
    let mut parent: Vec<usize> = (0..pd.edge_count).collect();
    for (x, &[a, b, c, d]) in pd.crossings.iter().enumerate() {
        let pairs = if bits >> x & 1 == 0 {
            [(a, b), (c, d)]
        } else {
            [(a, d), (b, c)]
        };
        for (u, v) in pairs {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            parent[ru] = rv;
        }
    }
    let mut index = BTreeMap::new();
    let loop_of: Vec<usize> = (0..pd.edge_count)
        .map(|e| {
            let r = find(&mut parent, e);
            let next = index.len();
            *index.entry(r).or_insert(next)
        })
        .collect();
    let count = index.len() + pd.free_loops;
    (loop_of, count)
}

/// Kauffman bracket with every loop, including a lone unknot, worth
/// `-A^2 - A^-2`.
pub fn kauffman_bracket(pd: &PdCode) -> LaurentPoly {
    let d = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
    let n = pd.crossings.len();
    let mut total = LaurentPoly::zero();
    for bits in 0..1u64 << n {
        let (_, loops) = smoothing(pd, bits);
        let b = bits.count_ones() as i32;
        total = &total + &d.pow(loops as u32).shift(n as i32 - 2 * b);
    }
    total
}

/// `(-A^3)^-ω <D>`, normalized so the unknot gives `-A^2 - A^-2`.
pub fn jones(pd: &PdCode) -> LaurentPoly {
    let w = pd.writhe();
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    let factor = LaurentPoly::from_terms([(-3 * w as i32, sign)]);
    &factor * &kauffman_bracket(pd)
}

pub fn smooth_jones(d: &FrontDiagram, reversed: &BTreeSet<usize>) -> Result<LaurentPoly> {
    Ok(jones(&pd_code(d, reversed)?))
}

/// Khovanov homology indexed by `(i, j)`, over Z2 (`integral = false`) or Z.
///
/// Built in the usual cube of resolutions with homological degree
/// `#1-smoothings - n_-` and quantum degree `#v+ - #v- + #1-smoothings + n_+
/// - 2 n_-`, and edge sign `(-1)^(number of 1-smoothings before x)`.
pub fn khovanov(pd: &PdCode, integral: bool) -> BTreeMap<(i64, i64), HomologyGroup> {
    let n = pd.crossings.len();
    let (n_minus, n_plus) = (pd.negative() as i64, (n - pd.negative()) as i64);
    let smoothings: Vec<(Vec<usize>, usize)> = (0..1u64 << n).map(|b| smoothing(pd, b)).collect();
    // basis of each (i, j) group: (state, mask of v+ loops)
    let mut basis: BTreeMap<(i64, i64), Vec<(u64, u64)>> = BTreeMap::new();
    for (bits, (_, loops)) in smoothings.iter().enumerate() {
        let r = bits.count_ones() as i64;
        for mask in 0..1u64 << loops {
            let plus = mask.count_ones() as i64;
            let q = 2 * plus - *loops as i64 + r + n_plus - 2 * n_minus;
            basis
                .entry((r - n_minus, q))
                .or_default()
                .push((bits as u64, mask));
        }
    }
    let position: BTreeMap<(u64, u64), usize> = basis
        .values()
        .flat_map(|v| v.iter().enumerate().map(|(idx, &g)| (g, idx)))
        .collect();
    let mut maps: BTreeMap<(i64, i64), SparseIntMatrix> = BTreeMap::new();
    for (&(i, q), gens) in &basis {
        let rows = basis.get(&(i + 1, q)).map_or(0, |v| v.len());
        let mut m = SparseIntMatrix::new(rows, gens.len());
        for (col, &(bits, mask)) in gens.iter().enumerate() {
            for (x, &[a, b, c, _]) in pd.crossings.iter().enumerate() {
                if bits >> x & 1 == 1 {
                    continue;
                }
                let tbits = bits | 1 << x;
                let (src, src_loops) = &smoothings[bits as usize];
                let (dst, dst_loops) = &smoothings[tbits as usize];
                let sign = if (bits & ((1 << x) - 1)).count_ones() % 2 == 0 {
                    1
                } else {
                    -1
                };
                let on = |l: usize| mask >> l & 1 == 1;
                // relabel untouched loops through a representative edge
                let mut carried = 0u64;
                for e in 0..pd.edge_count {
                    if on(src[e]) {
                        carried |= 1 << dst[e];
                    }
                }
                // crossingless components sit after the others
                for f in 1..=pd.free_loops {
                    if on(src_loops - f) {
                        carried |= 1 << (dst_loops - f);
                    }
                }
                let mut targets = Vec::new();
                if src[a] != src[c] {
                    let merged = dst[a];
                    let base = carried & !(1 << merged);
                    match (on(src[a]), on(src[c])) {
                        (true, true) => targets.push(base | 1 << merged),
                        (false, false) => {}
                        _ => targets.push(base),
                    }
                } else {
                    // after the 1-smoothing, a and b lie on different loops
                    let (p, s) = (dst[a], dst[b]);
                    let base = carried & !(1 << p) & !(1 << s);
                    if on(src[a]) {
                        targets.push(base | 1 << p);
                        targets.push(base | 1 << s);
                    } else {
                        targets.push(base);
                    }
                }
                for t in targets {
                    let row = position[&(tbits, t)];
                    m.push(row, col, if integral { sign } else { 1 });
                }
            }
        }
        maps.insert((i, q), m);
    }
    let mut out = BTreeMap::new();
    let stats = |m: &SparseIntMatrix| -> (usize, Vec<BigInt>) {
        if integral {
            let s = smith_summary(m);
            (s.rank, s.torsion)
        } else {
            (m.to_bits().rank(), Vec::new())
        }
    };
    let stats: BTreeMap<(i64, i64), (usize, Vec<BigInt>)> =
        maps.iter().map(|(k, m)| (*k, stats(m))).collect();
    for (&(i, q), gens) in &basis {
        let out_rank = stats.get(&(i, q)).map_or(0, |s| s.0);
        let (in_rank, torsion) = stats.get(&(i - 1, q)).cloned().unwrap_or_default();
        let grp = HomologyGroup {
            rank: gens.len() - out_rank - in_rank,
            torsion,
        };
        if !grp.is_zero() {
            out.insert((i, q), grp);
        }
    }
    out
}

pub fn smooth_khovanov(
    d: &FrontDiagram,
    reversed: &BTreeSet<usize>,
    integral: bool,
) -> Result<BTreeMap<(i64, i64), HomologyGroup>> {
    Ok(khovanov(&pd_code(d, reversed)?, integral))
}
