//! Explicit posets from walks, and walks back from posets.
//!
//! The particle chain `Pi` sits between observer chains `P` and `Q` that
//! exchange influence with a fixed delay `s`: `P_i -> Q_{i+s}` and
//! `Q_i -> P_{i+s}`. The particle keeps integer coordinates `(p, q)`, the
//! labels of the observer events its next emissions would reach. It starts
//! at `(s + 1, s + 1)` with an origin event seen by `P_1` and `Q_1`. Then
//! per step:
//!
//! - P-step: a particle event influences `P_p`, then `p += 1`;
//! - Q-step: a particle event influences `Q_q`, then `q += 1`;
//! - receipt from the right: `Q_{p-s}` influences a particle event, then
//!   `p += 1`;
//! - receipt from the left: `P_{q-s}` influences a particle event, then
//!   `q += 1`.
//!
//! With `s` larger than any coordinate advance, no influence path runs
//! through the particle faster than the exchange delay, so the observers stay
//! coordinated and every emission event projects onto both of them.

use super::walk::{Step, ZitterPath};
use crate::error::{Error, Result};
use crate::poset::{ChainId, EventId, Poset, PosetBuilder};

#[derive(Debug, Clone)]
pub struct BuiltPoset {
    pub poset: Poset,
    pub p: ChainId,
    pub q: ChainId,
    pub particle: ChainId,
    /// First particle event, before any step.
    pub origin: EventId,
    /// One particle event per step of the path, in order.
    pub step_events: Vec<EventId>,
    /// Exchange delay between the observers.
    pub shift: i64,
}

impl BuiltPoset {
    /// Particle events that influence an observer.
    pub fn emission_events<'a>(&'a self, path: &'a ZitterPath) -> impl Iterator<Item = (Step, EventId)> + 'a {
        path.steps()
            .iter()
            .zip(&self.step_events)
            .filter(|(s, _)| s.is_emission())
            .map(|(&s, &e)| (s, e))
    }
}

pub fn build_poset(path: &ZitterPath) -> Result<BuiltPoset> {
    let advances = path.steps().len() as i64;
    let shift = advances + 2;
    let start = shift + 1;
    let labels = start + advances + shift + 1;

    let mut b = PosetBuilder::new();
    let p = b.add_chain("P")?;
    let q = b.add_chain("Q")?;
    let particle = b.add_chain("Pi")?;
    let pe: Vec<EventId> = (0..labels).map(|_| b.push_event(p)).collect::<Result<_>>()?;
    let qe: Vec<EventId> = (0..labels).map(|_| b.push_event(q)).collect::<Result<_>>()?;
    let at = |chain: &[EventId], label: i64| chain[(label - 1) as usize];

    let mut edges = Vec::with_capacity(2 * labels as usize + path.steps().len() + 2);
    for i in 1..=labels - shift {
        edges.push((at(&pe, i), at(&qe, i + shift)));
        edges.push((at(&qe, i), at(&pe, i + shift)));
    }
    let origin = b.push_event(particle)?;
    edges.push((at(&pe, start - shift), origin));
    edges.push((at(&qe, start - shift), origin));

    let (mut cp, mut cq) = (start, start);
    let mut step_events = Vec::with_capacity(path.steps().len());
    for &step in path.steps() {
        let e = b.push_event(particle)?;
        step_events.push(e);
        match step {
            Step::P => {
                edges.push((e, at(&pe, cp)));
                cp += 1;
            }
            Step::Q => {
                edges.push((e, at(&qe, cq)));
                cq += 1;
            }
            Step::ReceiptRight => {
                edges.push((at(&qe, cp - shift), e));
                cp += 1;
            }
            Step::ReceiptLeft => {
                edges.push((at(&pe, cq - shift), e));
                cq += 1;
            }
        }
    }
    b.add_influences(edges)?;
    Ok(BuiltPoset {
        poset: b.freeze()?,
        p,
        q,
        particle,
        origin,
        step_events,
        shift,
    })
}

/// Reads the step sequence of `particle` back from a poset: an event that
/// influences `p` or `q` is an emission, one influenced by `q` or `p` is a
/// receipt from the right or left. Events with no such edge are skipped.
pub fn path_from_poset(poset: &Poset, p: ChainId, q: ChainId, particle: ChainId) -> Result<ZitterPath> {
    let mut steps = Vec::new();
    for &e in poset.chain(particle)?.events() {
        let mut found = Vec::new();
        for s in poset.successors(e)? {
            match poset.chain_of(s)? {
                Some(c) if c == p => found.push(Step::P),
                Some(c) if c == q => found.push(Step::Q),
                _ => {}
            }
        }
        for s in poset.predecessors(e)? {
            match poset.chain_of(s)? {
                Some(c) if c == q => found.push(Step::ReceiptRight),
                Some(c) if c == p => found.push(Step::ReceiptLeft),
                _ => {}
            }
        }
        match found.as_slice() {
            [] => {}
            [one] => steps.push(*one),
            [Step::ReceiptRight, Step::ReceiptLeft] | [Step::ReceiptLeft, Step::ReceiptRight]
                if steps.is_empty() =>
            {
                // an origin event seen by both observers
            }
            _ => {
                return Err(Error::domain(format!(
                    "particle event {e} touches the observers more than once"
                )))
            }
        }
    }
    Ok(ZitterPath::from_steps(steps))
}
