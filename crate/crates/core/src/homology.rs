//! Homology of the Legendrian Khovanov complex, Euler characteristics and
//! reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::complex::{check_d_squared, ChainComplex, Coefficients, Grading};
use crate::error::{Error, Result};
use crate::linalg::{rank_mod2, smith_summary};
use crate::poly::LaurentPoly2;

/// Over Z2 `rank` is the dimension and `torsion` is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyGroup {
    pub rank: usize,
    /// Orders of the cyclic torsion summands, ascending, each at least 2.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn even_torsion(&self) -> usize {
        self.torsion.iter().filter(|d| d.is_even()).count()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.rank)
            });
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Nonzero homology groups indexed by `(i, k, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHomology {
    pub coefficients: Coefficients,
    pub tb: i64,
    pub groups: BTreeMap<Grading, HomologyGroup>,
}

/// Rank and torsion of every differential, computed once.
fn differential_data(c: &ChainComplex) -> BTreeMap<Grading, (usize, Vec<BigInt>)> {
    c.gradings()
        .filter_map(|g| c.differential_ref(g).map(|m| (g, m)))
        .map(|(g, m)| {
            let data = match c.coefficients {
                Coefficients::Z2 => (rank_mod2(m), Vec::new()),
                Coefficients::Z => {
                    let s = smith_summary(m);
                    (s.rank, s.torsion)
                }
            };
            (g, data)
        })
        .collect()
}

/// `ker ∂_g / im ∂_{g-1}` for every grading, over the complex's own ring.
pub fn homology(c: &ChainComplex) -> Result<GradedHomology> {
    if !check_d_squared(c) {
        return Err(Error::NotAComplex);
    }
    let data = differential_data(c);
    let mut groups = BTreeMap::new();
    for g in c.gradings() {
        let out_rank = data.get(&g).map_or(0, |d| d.0);
        let (in_rank, torsion) = data
            .get(&g.prev())
            .map_or((0, Vec::new()), |d| (d.0, d.1.clone()));
        let group = HomologyGroup {
            rank: c.rank(g) - out_rank - in_rank,
            torsion,
        };
        if !group.is_zero() {
            groups.insert(g, group);
        }
    }
    Ok(GradedHomology {
        coefficients: c.coefficients,
        tb: c.tb,
        groups,
    })
}

pub fn homology_z2(c: &ChainComplex) -> Result<GradedHomology> {
    if c.coefficients != Coefficients::Z2 {
        return Err(Error::NotAComplex);
    }
    homology(c)
}

pub fn homology_z(c: &ChainComplex) -> Result<GradedHomology> {
    if c.coefficients != Coefficients::Z {
        return Err(Error::NotAComplex);
    }
    homology(c)
}

/// `Σ t^i q^j r^k · rank`, keyed by `(i, j, k)` for a deterministic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincarePolynomial {
    pub terms: BTreeMap<(i64, i64, i64), usize>,
}

impl PoincarePolynomial {
    /// The `t = -1` specialization, in `(q, r)`.
    pub fn at_t_minus_one(&self) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (&(i, j, k), &n) in &self.terms {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            out.add_term(j as i32, k as i32, BigInt::from(sign * n as i64));
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let term = |(&(i, j, k), &n): (&(i64, i64, i64), &usize)| {
            let mut factors = Vec::new();
            if n != 1 {
                factors.push(n.to_string());
            }
            for (v, e) in [("t", i), ("q", j), ("r", k)] {
                match e {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    e => factors.push(format!("{v}^{e}")),
                }
            }
            if factors.is_empty() {
                "1".to_string()
            } else {
                factors.join("*")
            }
        };
        self.terms.iter().map(term).collect::<Vec<_>>().join(" + ")
    }
}

/// Free ranks (dimensions over Z2) as a polynomial in `t, q, r`.
pub fn poincare_polynomial(h: &GradedHomology) -> PoincarePolynomial {
    let terms = h
        .groups
        .iter()
        .filter(|(_, grp)| grp.rank > 0)
        .map(|(g, grp)| ((g.i, g.j, g.k), grp.rank))
        .collect();
    PoincarePolynomial { terms }
}

/// `Σ (-1)^i q^j r^k dim C_{i,k,j}`, as a polynomial in `(q, r)`.
pub fn graded_euler_char(c: &ChainComplex) -> LaurentPoly2 {
    let mut out = LaurentPoly2::zero();
    for g in c.gradings() {
        let sign = if g.i.rem_euclid(2) == 0 { 1 } else { -1 };
        out.add_term(
            g.j as i32,
            g.k as i32,
            BigInt::from(sign * c.rank(g) as i64),
        );
    }
    out
}

/// The same sum over homology ranks.
pub fn homology_euler_char(h: &GradedHomology) -> LaurentPoly2 {
    poincare_polynomial(h).at_t_minus_one()
}

/// Drops the `k` grading.
pub fn forget_k(h: &GradedHomology) -> BTreeMap<(i64, i64), HomologyGroup> {
    let mut out: BTreeMap<(i64, i64), HomologyGroup> = BTreeMap::new();
    for (g, grp) in &h.groups {
        let e = out.entry((g.i, g.j)).or_default();
        e.rank += grp.rank;
        e.torsion.extend(grp.torsion.iter().cloned());
        e.torsion.sort();
    }
    out
}

/// Gradings where `dim_Z2 H^i` differs from `rank H^i + #even(H^i) +
/// #even(H^{i+1})` computed from the integral answer.
pub fn universal_coefficient_mismatches(z2: &GradedHomology, z: &GradedHomology) -> Vec<Grading> {
    let mut all: Vec<Grading> = z2
        .groups
        .keys()
        .chain(z.groups.keys())
        .flat_map(|g| [*g, g.prev()])
        .collect();
    all.sort_unstable();
    all.dedup();
    let empty = HomologyGroup::default();
    all.into_iter()
        .filter(|g| {
            let here = z.groups.get(g).unwrap_or(&empty);
            let above = z.groups.get(&g.next()).unwrap_or(&empty);
            let expected = here.rank + here.even_torsion() + above.even_torsion();
            z2.groups.get(g).map_or(0, |grp| grp.rank) != expected
        })
        .collect()
}

/// Gradings with nonzero homology that violate `k = j - tb`.
pub fn support_violations(h: &GradedHomology) -> Vec<Grading> {
    h.groups
        .keys()
        .filter(|g| g.k != g.j - h.tb)
        .copied()
        .collect()
}

fn torsion_json(d: &BigInt) -> Value {
    match d.to_u64() {
        Some(v) => json!(v),
        None => json!(d.to_string()),
    }
}

/// `{tb, coefficients, groups: [{i, k, j, dim | rank, torsion}]}`.
pub fn report_json(h: &GradedHomology) -> Value {
    let size_key = match h.coefficients {
        Coefficients::Z2 => "dim",
        Coefficients::Z => "rank",
    };
    let groups: Vec<Value> = h
        .groups
        .iter()
        .map(|(g, grp)| {
            let mut obj = serde_json::Map::new();
            obj.insert("i".into(), json!(g.i));
            obj.insert("k".into(), json!(g.k));
            obj.insert("j".into(), json!(g.j));
            obj.insert(size_key.into(), json!(grp.rank));
            obj.insert(
                "torsion".into(),
                Value::Array(grp.torsion.iter().map(torsion_json).collect()),
            );
            Value::Object(obj)
        })
        .collect();
    json!({
        "tb": h.tb,
        "coefficients": h.coefficients.name(),
        "groups": groups,
    })
}

/// Plain-text table, rows sorted by `(j, i)`.
pub fn render_table(h: &GradedHomology) -> String {
    let mut rows: Vec<(&Grading, &HomologyGroup)> = h.groups.iter().collect();
    rows.sort_by_key(|(g, _)| (g.j, g.i, g.k));
    let mut out = String::new();
    let _ = writeln!(out, "coefficients: {}  tb: {}", h.coefficients.name(), h.tb);
    let _ = writeln!(out, "{:>4} {:>4} {:>4}  group", "j", "i", "k");
    for (g, grp) in rows {
        let shown = match h.coefficients {
            Coefficients::Z2 if grp.rank == 1 => "Z2".to_string(),
            Coefficients::Z2 => format!("Z2^{}", grp.rank),
            Coefficients::Z => grp.to_string(),
        };
        let _ = writeln!(out, "{:>4} {:>4} {:>4}  {}", g.j, g.i, g.k, shown);
    }
    out
}
