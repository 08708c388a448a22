//! The Legendrian bracket and the invariant `P_K(A, r)`.
//!
//! Two independent evaluations of the bracket are provided: a state sum over
//! all `2^n` resolutions, and a skein recursion that resolves crossings one at
//! a time while sweeping the front.
//!
//! Every crossingless loop is worth `δ = -A^2 r^-1 - A^-2 r` whatever its
//! number of cusps, so the bracket alone cannot see stabilizations; the cusp
//! count only enters `P_K` through the `r^(c/2 - l)` prefactor.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diagram::{EventKind, OrientedFront};
use crate::error::{Error, Result};
use crate::poly::{LaurentPoly, LaurentPoly2};
use crate::states::{Resolver, DEFAULT_CROSSING_CAP};

/// The loop value `-A^2 r^-1 - A^-2 r`, as a polynomial in `(A, r)`.
pub fn delta() -> LaurentPoly2 {
    LaurentPoly2::from_terms([(2, -1, -1), (-2, 1, -1)])
}

fn delta_powers(max: usize) -> Vec<LaurentPoly2> {
    let d = delta();
    let mut out = vec![LaurentPoly2::one()];
    for m in 1..=max {
        out.push(&out[m - 1] * &d);
    }
    out
}

fn check_cap(of: &OrientedFront, cap: usize) -> Result<()> {
    let n = of.crossing_count();
    if n > cap.min(63) {
        return Err(Error::TooManyCrossings { crossings: n, cap });
    }
    Ok(())
}

/// `Σ_s A^σ(s) r^B(s) δ^||s||` over all resolutions.
pub fn bracket_statesum(of: &OrientedFront) -> Result<LaurentPoly2> {
    bracket_statesum_with_cap(of, DEFAULT_CROSSING_CAP)
}

pub fn bracket_statesum_with_cap(of: &OrientedFront, cap: usize) -> Result<LaurentPoly2> {
    check_cap(of, cap)?;
    let n = of.crossing_count();
    let sk = of.diagram().skeleton();
    let mut resolver = Resolver::new(sk);
    // histogram[b][m] = number of states with b B-resolutions and m loops
    let mut histogram = vec![vec![0u64; sk.segment_count + 1]; n + 1];
    for bits in 0..1u64 << n {
        let m = resolver.loop_count(bits);
        histogram[bits.count_ones() as usize][m] += 1;
    }
    let max_loops = histogram
        .iter()
        .flat_map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(m, _)| m)
        })
        .max()
        .unwrap_or(0);
    let powers = delta_powers(max_loops);
    let mut total = LaurentPoly2::zero();
    for (b, row) in histogram.iter().enumerate() {
        let sigma = n as i32 - 2 * b as i32;
        for (m, &count) in row.iter().enumerate() {
            if count > 0 {
                total += &powers[m].shift(sigma, b as i32).scale(&BigInt::from(count));
            }
        }
    }
    Ok(total)
}

/// Skein evaluation: `<X> = A <A-res> + A^-1 r <B-res>`, applied to crossings
/// left to right, with crossingless loops worth `δ` each.
///
/// The recursion is memoized on the remaining event word together with the
/// way the already-resolved part pairs up the strands at the cut. Two
/// branches that agree on both have the same remaining bracket.
pub fn bracket_skein(of: &OrientedFront) -> Result<LaurentPoly2> {
    bracket_skein_with_cap(of, DEFAULT_CROSSING_CAP)
}

pub fn bracket_skein_with_cap(of: &OrientedFront, cap: usize) -> Result<LaurentPoly2> {
    check_cap(of, cap)?;
    let mut eval = SkeinEvaluator {
        events: of.diagram().events(),
        delta: delta(),
        memo: HashMap::new(),
    };
    Ok(eval.rest(0, Vec::new()))
}

struct SkeinEvaluator<'a> {
    events: &'a [crate::diagram::Event],
    delta: LaurentPoly2,
    memo: HashMap<(usize, Vec<u8>), LaurentPoly2>,
}

impl SkeinEvaluator<'_> {
    /// Bracket contribution of `events[at..]` given that the resolved prefix
    /// connects strand `s` at the cut to strand `partner[s]`.
    fn rest(&mut self, at: usize, partner: Vec<u8>) -> LaurentPoly2 {
        if at == self.events.len() {
            debug_assert!(partner.is_empty());
            return LaurentPoly2::one();
        }
        let key = (at, partner);
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }
        let (at, partner) = key;
        let ev = self.events[at];
        let p = ev.position - 1;
        let value = match ev.kind {
            EventKind::LeftCusp => self.rest(at + 1, open_cup(&partner, p)),
            EventKind::RightCusp => {
                let (next, closed) = close_cap(&partner, p);
                let v = self.rest(at + 1, next);
                if closed {
                    &v * &self.delta
                } else {
                    v
                }
            }
            EventKind::Crossing => {
                let horizontal = self.rest(at + 1, partner.clone()).shift(1, 0);
                let (capped, closed) = close_cap(&partner, p);
                let mut vertical = self.rest(at + 1, open_cup(&capped, p)).shift(-1, 1);
                if closed {
                    vertical = &vertical * &self.delta;
                }
                &horizontal + &vertical
            }
        };
        self.memo.insert((at, partner), value.clone());
        value
    }
}

fn open_cup(partner: &[u8], p: usize) -> Vec<u8> {
    let mut out: Vec<u8> = partner
        .iter()
        .map(|&q| if q as usize >= p { q + 2 } else { q })
        .collect();
    out.insert(p, p as u8 + 1);
    out.insert(p + 1, p as u8);
    out
}

/// Joins strands `p` and `p + 1`; reports whether that closed a loop.
fn close_cap(partner: &[u8], p: usize) -> (Vec<u8>, bool) {
    let (a, b) = (partner[p] as usize, partner[p + 1] as usize);
    let closed = a == p + 1;
    let mut joined = partner.to_vec();
    if !closed {
        joined[a] = b as u8;
        joined[b] = a as u8;
    }
    let reindex = |q: usize| if q > p + 1 { q - 2 } else { q };
    let out = joined
        .iter()
        .enumerate()
        .filter(|(s, _)| *s != p && *s != p + 1)
        .map(|(_, &q)| reindex(q as usize) as u8)
        .collect();
    (out, closed)
}

/// `(-A)^(-3ω) r^(c/2 - l) <K_F>`.
pub fn legendrian_jones(of: &OrientedFront) -> Result<LaurentPoly2> {
    legendrian_jones_with_cap(of, DEFAULT_CROSSING_CAP)
}

pub fn legendrian_jones_with_cap(of: &OrientedFront, cap: usize) -> Result<LaurentPoly2> {
    let bracket = bracket_statesum_with_cap(of, cap)?;
    Ok(normalize(of, &bracket))
}

/// Applies the writhe and cusp prefactor to a bracket.
pub fn normalize(of: &OrientedFront, bracket: &LaurentPoly2) -> LaurentPoly2 {
    let w = of.writhe();
    let r_exp = of.cusp_count() / 2 - of.left_handed();
    let sign: i64 = if (3 * w).rem_euclid(2) == 1 { -1 } else { 1 };
    bracket
        .shift((-3 * w) as i32, r_exp as i32)
        .scale(&BigInt::from(sign))
}

pub fn specialize_r1(p: &LaurentPoly2) -> LaurentPoly {
    p.at_y_one()
}

/// Rewrites a polynomial in `(A, r)` in terms of `q = -A^-2`, i.e.
/// `A^(-2m) = (-1)^m q^m`.
pub fn to_qr(p: &LaurentPoly2) -> Result<LaurentPoly2> {
    let mut out = LaurentPoly2::zero();
    for (a, r, c) in p.terms() {
        if a % 2 != 0 {
            return Err(Error::OddExponent(a));
        }
        let m = -a / 2;
        let c = if m % 2 == 0 { c.clone() } else { -c };
        out.add_term(m, r, c);
    }
    Ok(out)
}

/// Inverse of [`to_qr`].
pub fn from_qr(p: &LaurentPoly2) -> LaurentPoly2 {
    let mut out = LaurentPoly2::zero();
    for (m, r, c) in p.terms() {
        let c = if m % 2 == 0 { c.clone() } else { -c };
        out.add_term(-2 * m, r, c);
    }
    out
}

/// Evaluate `Σ c_i δ^i A^a r^b`-style expressions: each entry is
/// `(coeff, A-exponent, r-exponent, δ-power)`.
pub fn delta_expansion(terms: &[(i64, i32, i32, u32)]) -> LaurentPoly2 {
    let max = terms.iter().map(|t| t.3).max().unwrap_or(0) as usize;
    let powers = delta_powers(max);
    let mut out = LaurentPoly2::zero();
    for &(c, a, r, d) in terms {
        if c.is_zero() {
            continue;
        }
        out += &powers[d as usize].shift(a, r).scale(&BigInt::from(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{orient, parse_front};

    fn oriented(s: &str) -> OrientedFront {
        OrientedFront::default_for(&parse_front(s).unwrap())
    }

    #[test]
    fn unknot_bracket_is_delta() {
        let o = oriented("L 1 R 1");
        assert_eq!(bracket_statesum(&o).unwrap(), delta());
        assert_eq!(bracket_skein(&o).unwrap(), delta());
        let stab = oriented("L 1 L 2 R 1 R 1");
        assert_eq!(bracket_statesum(&stab).unwrap(), delta());
    }

    #[test]
    fn unknot_jones_and_r1() {
        let p = legendrian_jones(&oriented("L 1 R 1")).unwrap();
        assert_eq!(p, delta().shift(0, 1));
        assert_eq!(
            specialize_r1(&p),
            LaurentPoly::from_terms([(2, -1), (-2, -1)])
        );
        assert_eq!(
            to_qr(&p).unwrap(),
            LaurentPoly2::from_terms([(1, 2, 1), (-1, 0, 1)])
        );
    }

    #[test]
    fn delta_in_qr() {
        assert_eq!(
            to_qr(&delta()).unwrap(),
            LaurentPoly2::from_terms([(-1, -1, 1), (1, 1, 1)])
        );
        assert_eq!(from_qr(&to_qr(&delta()).unwrap()), delta());
        assert_eq!(
            to_qr(&LaurentPoly2::monomial(1, 1, 0)),
            Err(Error::OddExponent(1))
        );
    }

    #[test]
    fn hopf_bracket() {
        let o = oriented("L 1 L 3 X 2 X 2 R 1 R 1");
        let expected = &delta() * &LaurentPoly2::from_terms([(4, -1, -1), (-4, 3, -1)]);
        assert_eq!(bracket_statesum(&o).unwrap(), expected);
        assert_eq!(bracket_skein(&o).unwrap(), expected);
    }

    #[test]
    fn hopf_orientations_differ() {
        let d = parse_front("L 1 L 3 X 2 X 2 R 1 R 1").unwrap();
        let default = legendrian_jones(&OrientedFront::default_for(&d)).unwrap();
        let other = legendrian_jones(&orient(&d, &[1].into_iter().collect()).unwrap()).unwrap();
        assert_eq!(
            default,
            &delta() * &LaurentPoly2::from_terms([(10, -1, -1), (2, 3, -1)])
        );
        assert_ne!(default, other);
    }

    #[test]
    fn disjoint_unknot_multiplies_by_delta() {
        let k = oriented("L 1 L 3 X 2 X 2 X 2 R 1 R 1");
        let with_unknot = oriented("L 1 L 3 X 2 X 2 X 2 R 1 R 1 L 1 R 1");
        assert_eq!(
            bracket_skein(&with_unknot).unwrap(),
            &bracket_skein(&k).unwrap() * &delta()
        );
    }

    #[test]
    fn delta_expansion_matches_products() {
        let p = delta_expansion(&[(1, 3, 0, 2), (3, 1, 1, 1)]);
        let d = delta();
        let expected = &(&d * &d).shift(3, 0) + &d.shift(1, 1).scale(&BigInt::from(3));
        assert_eq!(p, expected);
    }
}
