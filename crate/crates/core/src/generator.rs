//! Seeded random DOTAs for the n_m_κ benchmark families.
//!
//! The PRNG is xoshiro256** seeded through SplitMix64 (`seed_from_u64`), so a
//! spec always yields the same automaton on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::alphabet::{Action, Alphabet};
use crate::automaton::{LocationId, Ota, Transition};
use crate::guard::Guard;
use crate::time::TimeValue;
use crate::word::{DelayWord, TimedAction};

/// Mean transitions per (location, action) pair when nothing else is asked for.
pub const DEFAULT_DENSITY: f64 = 1.2;

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub locations: usize,
    pub alphabet: usize,
    pub kappa: u64,
    pub seed: u64,
    /// Expected transitions per (location, action). Values below 1 leave
    /// some pairs without transitions.
    pub density: f64,
}

impl GenSpec {
    pub fn new(locations: usize, alphabet: usize, kappa: u64, seed: u64) -> Self {
        GenSpec { locations, alphabet, kappa, seed, density: DEFAULT_DENSITY }
    }

    /// `n_m_κ` group name.
    pub fn group(&self) -> String {
        format!("{}_{}_{}", self.locations, self.alphabet, self.kappa)
    }
}

/// Action names a, b, ..., z, then a1, b1, ...
pub fn action_names(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| {
            let c = (b'a' + (i % 26) as u8) as char;
            if i < 26 {
                c.to_string()
            } else {
                format!("{c}{}", i / 26)
            }
        })
        .collect()
}

/// A random partition of [0,∞) whose finite endpoints are at most κ.
fn random_partition(rng: &mut Xoshiro256StarStar, kappa: u64) -> Vec<Guard> {
    let slots = kappa as usize + 1;
    let want = rng.gen_range(1..=3usize).min(slots);
    let mut cuts: Vec<u64> = (0..=kappa).collect::<Vec<_>>().choose_multiple(rng, want).copied().collect();
    cuts.sort_unstable();
    let mut cells = Vec::new();
    // Left end of the next cell: (value, closed).
    let mut lo = (0u64, true);
    for c in cuts {
        // 0: c starts the right cell, 1: c ends the left cell, 2: c is a point cell.
        let style = rng.gen_range(0..3u8);
        match style {
            0 => {
                if let Ok(g) = Guard::new(lo.0, lo.1, Some(c), false) {
                    cells.push(g);
                }
                lo = (c, true);
            }
            1 => {
                cells.push(Guard::new(lo.0, lo.1, Some(c), true).expect("non-empty"));
                lo = (c, false);
            }
            _ => {
                if let Ok(g) = Guard::new(lo.0, lo.1, Some(c), false) {
                    cells.push(g);
                }
                cells.push(Guard::point(c));
                lo = (c, false);
            }
        }
    }
    cells.push(Guard::new(lo.0, lo.1, None, false).expect("unbounded"));
    cells
}

pub fn generate(spec: &GenSpec) -> Ota {
    assert!(spec.locations >= 1 && spec.alphabet >= 1, "a spec needs a location and an action");
    let mut rng = Xoshiro256StarStar::seed_from_u64(spec.seed);
    let alphabet = Alphabet::new(action_names(spec.alphabet)).expect("generated names are valid");
    let locations: Vec<String> = (0..spec.locations).map(|i| format!("q{i}")).collect();
    // Below 1 the density is the chance that a pair has any transition at all.
    let present = spec.density.clamp(0.0, 1.0);
    let extra = (spec.density - 1.0).clamp(0.0, 2.0) / 2.0;
    let mut transitions = Vec::new();
    for q in 0..spec.locations {
        for a in 0..spec.alphabet {
            let cells = random_partition(&mut rng, spec.kappa);
            let keep_any = rng.gen_bool(present) || (q == 0 && a + 1 == spec.alphabet && transitions.is_empty());
            if !keep_any {
                continue;
            }
            let mut k = 1 + usize::from(rng.gen_bool(extra)) + usize::from(rng.gen_bool(extra));
            k = k.min(cells.len());
            let mut keep: Vec<usize> = (0..cells.len()).collect::<Vec<_>>().choose_multiple(&mut rng, k).copied().collect();
            keep.sort_unstable();
            for i in keep {
                transitions.push(Transition {
                    source: LocationId(q),
                    action: Action(a),
                    guard: cells[i],
                    reset: rng.gen_bool(0.5),
                    target: LocationId(rng.gen_range(0..spec.locations)),
                });
            }
        }
    }
    let mut accepting: Vec<LocationId> = (0..spec.locations).filter(|_| rng.gen_bool(0.5)).map(LocationId).collect();
    if accepting.is_empty() {
        accepting.push(LocationId(rng.gen_range(0..spec.locations)));
    }
    Ota::new(alphabet, locations, LocationId(0), &accepting, transitions).expect("generated automaton is well formed")
}

/// `count` automata with seeds `seed, seed+1, ...`.
pub fn generate_batch(spec: &GenSpec, count: usize) -> Vec<(GenSpec, Ota)> {
    (0..count as u64)
        .map(|i| {
            let s = GenSpec { seed: spec.seed.wrapping_add(i), ..spec.clone() };
            let a = generate(&s);
            (s, a)
        })
        .collect()
}

/// A random delay word of length at most `max_len`. Delays are multiples of
/// 1/4 up to κ+2 with a bias towards integers, so guard boundaries get hit.
pub fn random_delay_word<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_len: usize, kappa: u64) -> DelayWord {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let action = Action(rng.gen_range(0..alphabet.len()));
            let whole = rng.gen_range(0..=kappa + 2);
            let quarter = if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..4) };
            TimedAction::new(action, TimeValue::from_int(whole) + TimeValue::new(quarter, 4).unwrap())
        })
        .collect()
}
