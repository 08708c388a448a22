#![allow(dead_code)]

use legkh::diagram::{Event, FrontDiagram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random valid front with at most `max_crossings` crossings and one to
/// four left cusps. Crossings are drawn more often than cusps so that most
/// fronts use their crossing budget.
pub fn random_front(seed: u64, max_crossings: usize) -> FrontDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cusps = rng.gen_range(1..=4usize);
    let budget = rng.gen_range(0..=max_crossings);
    let (mut left, mut crossings, mut strands) = (0, 0, 0usize);
    let mut events = Vec::new();
    while left < cusps || strands > 0 {
        let mut options = Vec::new();
        if left < cusps {
            options.push('L');
        }
        if strands >= 2 {
            options.push('R');
            if crossings < budget {
                options.extend(['X'; 3]);
            }
        }
        match options[rng.gen_range(0..options.len())] {
            'L' => {
                events.push(Event::left(rng.gen_range(1..=strands + 1)));
                strands += 2;
                left += 1;
            }
            'X' => {
                events.push(Event::cross(rng.gen_range(1..strands)));
                crossings += 1;
            }
            _ => {
                events.push(Event::right(rng.gen_range(1..strands)));
                strands -= 2;
            }
        }
    }
    FrontDiagram::new(events).expect("generated fronts are valid")
}
