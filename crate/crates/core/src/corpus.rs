//! Reference fronts shipped with the crate.

use std::collections::BTreeSet;

use crate::diagram::{orient, parse_front, OrientedFront};

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub writhe: i64,
    pub left_handed: i64,
    pub cusps: i64,
    /// Components to reverse relative to the default orientation.
    pub reversed: &'static [usize],
}

impl CorpusEntry {
    pub fn oriented(&self) -> OrientedFront {
        let d = parse_front(self.text).expect("corpus fronts parse");
        let reversed: BTreeSet<usize> = self.reversed.iter().copied().collect();
        orient(&d, &reversed).expect("corpus orientations are valid")
    }

    pub fn tb(&self) -> i64 {
        self.writhe - self.cusps / 2
    }
}

macro_rules! entry {
    ($name:literal, $w:expr, $l:expr, $c:expr) => {
        CorpusEntry {
            name: $name,
            text: include_str!(concat!("../corpus/", $name, ".front")),
            writhe: $w,
            left_handed: $l,
            cusps: $c,
            reversed: &[],
        }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    entry!("unknot", 0, 0, 2),
    entry!("unknot_stab1", 0, 0, 4),
    entry!("unknot_stab2", 0, 0, 6),
    entry!("unknot_stab3", 0, 0, 8),
    entry!("rh_trefoil", 3, 0, 4),
    entry!("lh_trefoil", -3, 3, 6),
    entry!("hopf", -2, 2, 4),
    entry!("chekanov1", 6, 0, 10),
    entry!("chekanov2", 6, 0, 10),
];

pub fn get(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::trace_components;

    #[test]
    fn annotations_match_fronts() {
        for e in CORPUS {
            let of = e.oriented();
            assert_eq!(of.writhe(), e.writhe, "{}", e.name);
            assert_eq!(of.left_handed(), e.left_handed, "{}", e.name);
            assert_eq!(of.cusp_count(), e.cusps, "{}", e.name);
            assert_eq!(of.thurston_bennequin(), e.tb(), "{}", e.name);
            let comps = trace_components(of.diagram()).count;
            assert_eq!(comps, if e.name == "hopf" { 2 } else { 1 }, "{}", e.name);
        }
    }

    #[test]
    fn chekanov_pair_is_two_fronts_with_equal_tb() {
        let a = get("chekanov1").unwrap();
        let b = get("chekanov2").unwrap();
        assert_ne!(a.oriented().diagram(), b.oriented().diagram());
        assert_eq!(a.tb(), 1);
        assert_eq!(b.tb(), 1);
    }
}
