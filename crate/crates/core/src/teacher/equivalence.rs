//! Equivalence of two complete deterministic one-clock automata through the
//! region graph of their synchronous product.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::collections::VecDeque;

use crate::alphabet::Action;
use crate::automaton::{LocationId, Ota};
use crate::time::TimeValue;
use crate::word::{DelayWord, TimedAction};

use super::{Sign, TeacherError};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct ClockClass {
    /// Integer part, or `κ+1` for anything above κ.
    int: u64,
    frac_zero: bool,
}

/// Region of a clock pair (x for the hypothesis, y for the target).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RegionKey {
    x: ClockClass,
    y: ClockClass,
    order: Ordering,
}

#[derive(Clone, Copy, Debug)]
struct Bounds {
    kx: u64,
    ky: u64,
}

fn class(v: TimeValue, k: u64) -> (ClockClass, bool) {
    if v > TimeValue::from_int(k) {
        (ClockClass { int: k + 1, frac_zero: true }, false)
    } else {
        (ClockClass { int: v.floor(), frac_zero: v.is_integer() }, true)
    }
}

impl Bounds {
    fn key(&self, x: TimeValue, y: TimeValue) -> RegionKey {
        let (cx, in_x) = class(x, self.kx);
        let (cy, in_y) = class(y, self.ky);
        let order = if in_x && in_y && !cx.frac_zero && !cy.frac_zero { x.fract().cmp(&y.fract()) } else { Ordering::Equal };
        RegionKey { x: cx, y: cy, order }
    }

    /// A concrete valuation inside the region.
    fn representative(&self, key: &RegionKey) -> (TimeValue, TimeValue) {
        let half = TimeValue::new(1, 2).unwrap();
        let third = TimeValue::new(1, 3).unwrap();
        let two_thirds = TimeValue::new(2, 3).unwrap();
        let x_frac = key.x.int <= self.kx && !key.x.frac_zero;
        let y_frac = key.y.int <= self.ky && !key.y.frac_zero;
        let (fx, fy) = match (x_frac, y_frac) {
            (true, true) => match key.order {
                Ordering::Less => (third, two_thirds),
                Ordering::Equal => (half, half),
                Ordering::Greater => (two_thirds, third),
            },
            (true, false) => (half, TimeValue::ZERO),
            (false, true) => (TimeValue::ZERO, half),
            (false, false) => (TimeValue::ZERO, TimeValue::ZERO),
        };
        (TimeValue::from_int(key.x.int) + fx, TimeValue::from_int(key.y.int) + fy)
    }

    /// Regions passed by letting time elapse from (x, y), in order, each with a delay reaching it.
    fn delay_successors(&self, x: TimeValue, y: TimeValue) -> Vec<(TimeValue, RegionKey)> {
        let mut cuts: Vec<TimeValue> = Vec::new();
        for (v, k) in [(x, self.kx), (y, self.ky)] {
            let mut n = v.floor() + 1;
            while n <= k {
                cuts.push(TimeValue::from_int(n) - v);
                n += 1;
            }
        }
        cuts.sort();
        cuts.dedup();
        let mut samples = vec![TimeValue::ZERO];
        let mut prev = TimeValue::ZERO;
        for &c in &cuts {
            samples.push(TimeValue::simplest_between(prev, c));
            samples.push(c);
            prev = c;
        }
        samples.push(prev + TimeValue::from_int(1));
        let mut out: Vec<(TimeValue, RegionKey)> = Vec::new();
        for d in samples {
            let key = self.key(x + d, y + d);
            if out.last().map(|(_, k)| *k) != Some(key) {
                out.push((d, key));
            }
        }
        out
    }

    fn region_count(&self) -> usize {
        ((2 * self.kx + 2) * (2 * self.ky + 2) * 3) as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct State {
    h: LocationId,
    a: LocationId,
    region: RegionKey,
}

struct Node {
    state: State,
    parent: Option<usize>,
    action: Option<Action>,
    before: Option<RegionKey>,
}

/// A shortest delay word on which `h` and `target` disagree, with the sign
/// `Negative` when `h` accepts it. Both automata must be complete and deterministic
/// over the same alphabet.
pub fn find_counterexample(h: &Ota, target: &Ota) -> Result<Option<(DelayWord, Sign)>, TeacherError> {
    if h.alphabet() != target.alphabet() {
        return Err(TeacherError::AlphabetMismatch);
    }
    for ota in [h, target] {
        let r = ota.validate();
        if !(r.deterministic && r.complete) {
            return Err(TeacherError::NotComplete);
        }
    }
    let bounds = Bounds { kx: h.max_constant(), ky: target.max_constant() };
    let cap = h.locations().len() * target.locations().len() * bounds.region_count();
    let start = State { h: h.initial(), a: target.initial(), region: bounds.key(TimeValue::ZERO, TimeValue::ZERO) };
    let mut nodes = vec![Node { state: start, parent: None, action: None, before: None }];
    let mut seen: HashMap<State, usize> = HashMap::new();
    seen.insert(start, 0);
    let mut succ_cache: HashMap<RegionKey, Vec<(RegionKey, TimeValue, TimeValue)>> = HashMap::new();
    let bad = |s: &State| h.is_accepting(s.h) != target.is_accepting(s.a);
    let mut level: VecDeque<usize> = VecDeque::from([0]);
    loop {
        let bads: Vec<usize> = level.iter().copied().filter(|&i| bad(&nodes[i].state)).collect();
        if !bads.is_empty() {
            let pick = bads.iter().copied().find(|&i| h.is_accepting(nodes[i].state.h)).unwrap_or(bads[0]);
            let word = concretize(h, target, &bounds, &nodes, pick)?;
            let sign = if h.is_accepting(nodes[pick].state.h) { Sign::Negative } else { Sign::Positive };
            return Ok(Some((word, sign)));
        }
        if level.is_empty() {
            return Ok(None);
        }
        let mut next = VecDeque::new();
        for i in level {
            let state = nodes[i].state;
            let succs = succ_cache
                .entry(state.region)
                .or_insert_with(|| {
                    let (x, y) = bounds.representative(&state.region);
                    bounds.delay_successors(x, y).into_iter().map(|(d, k)| (k, x + d, y + d)).collect()
                })
                .clone();
            for a in h.alphabet().actions() {
                for &(key, x, y) in &succs {
                    let th = h.step(state.h, a, x).ok_or(TeacherError::NotComplete)?;
                    let ta = target.step(state.a, a, y).ok_or(TeacherError::NotComplete)?;
                    let nx = if th.reset { TimeValue::ZERO } else { x };
                    let ny = if ta.reset { TimeValue::ZERO } else { y };
                    let ns = State { h: th.target, a: ta.target, region: bounds.key(nx, ny) };
                    if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(ns) {
                        if nodes.len() >= cap {
                            return Err(TeacherError::Internal(format!("region graph exceeded its bound of {cap} states")));
                        }
                        slot.insert(nodes.len());
                        next.push_back(nodes.len());
                        nodes.push(Node { state: ns, parent: Some(i), action: Some(a), before: Some(key) });
                    }
                }
            }
        }
        level = next;
    }
}

fn concretize(h: &Ota, target: &Ota, bounds: &Bounds, nodes: &[Node], end: usize) -> Result<DelayWord, TeacherError> {
    let mut path = Vec::new();
    let mut cur = end;
    while let Some(p) = nodes[cur].parent {
        path.push(cur);
        cur = p;
    }
    path.reverse();
    let (mut qh, mut qa) = (h.initial(), target.initial());
    let (mut x, mut y) = (TimeValue::ZERO, TimeValue::ZERO);
    let mut word = DelayWord::empty();
    for &i in &path {
        let node = &nodes[i];
        let (action, before) = (node.action.unwrap(), node.before.unwrap());
        let (d, _) = bounds
            .delay_successors(x, y)
            .into_iter()
            .find(|(_, k)| *k == before)
            .ok_or_else(|| TeacherError::Internal("region path is not realizable".into()))?;
        let (vx, vy) = (x + d, y + d);
        let th = h.step(qh, action, vx).ok_or(TeacherError::NotComplete)?;
        let ta = target.step(qa, action, vy).ok_or(TeacherError::NotComplete)?;
        qh = th.target;
        qa = ta.target;
        x = if th.reset { TimeValue::ZERO } else { vx };
        y = if ta.reset { TimeValue::ZERO } else { vy };
        if qh != node.state.h || qa != node.state.a || bounds.key(x, y) != node.state.region {
            return Err(TeacherError::Internal("replay left the region path".into()));
        }
        word.push(TimedAction::new(action, d));
    }
    Ok(word)
}
