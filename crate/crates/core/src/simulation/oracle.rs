//! Brute-force order and projection queries by graph search, independent of
//! the poset's reachability index, plus a random poset generator to feed
//! them.

use std::collections::HashSet;

use rand::Rng;

use crate::error::Result;
use crate::poset::{ChainId, EventId, Poset, PosetBuilder};

fn search(poset: &Poset, x: EventId, forward: bool) -> Result<Vec<EventId>> {
    poset.chain_of(x)?;
    let mut seen = HashSet::from([x]);
    let mut stack = vec![x];
    let mut out = Vec::new();
    while let Some(e) = stack.pop() {
        out.push(e);
        let next: Vec<EventId> = if forward {
            poset.successors(e)?.collect()
        } else {
            poset.predecessors(e)?.collect()
        };
        for n in next {
            if seen.insert(n) {
                stack.push(n);
            }
        }
    }
    Ok(out)
}

/// Every event `y` with `x <= y`, in no particular order.
pub fn oracle_descendants(poset: &Poset, x: EventId) -> Result<Vec<EventId>> {
    search(poset, x, true)
}

/// Every event `y` with `y <= x`, in no particular order.
pub fn oracle_ancestors(poset: &Poset, x: EventId) -> Result<Vec<EventId>> {
    search(poset, x, false)
}

pub fn oracle_leq(poset: &Poset, x: EventId, y: EventId) -> Result<bool> {
    poset.chain_of(y)?;
    Ok(oracle_descendants(poset, x)?.contains(&y))
}

fn extreme_on(poset: &Poset, events: &[EventId], chain: ChainId, least: bool) -> Result<Option<EventId>> {
    poset.chain(chain)?;
    let mut best: Option<(i64, EventId)> = None;
    for &e in events {
        if poset.chain_of(e)? != Some(chain) {
            continue;
        }
        let v = poset.valuation(e)?.expect("chain events are valued");
        let better = match best {
            None => true,
            Some((b, _)) => (least && v < b) || (!least && v > b),
        };
        if better {
            best = Some((v, e));
        }
    }
    Ok(best.map(|(_, e)| e))
}

/// Forward projection by exhaustive search: the least-valued event of
/// `chain` reachable from `x`.
pub fn oracle_project(poset: &Poset, x: EventId, chain: ChainId) -> Result<Option<EventId>> {
    extreme_on(poset, &oracle_descendants(poset, x)?, chain, true)
}

/// Backward projection by exhaustive search.
pub fn oracle_backward_project(poset: &Poset, x: EventId, chain: ChainId) -> Result<Option<EventId>> {
    extreme_on(poset, &oracle_ancestors(poset, x)?, chain, false)
}

/// Forward and backward projections of `x` onto every chain, from one
/// search each way.
pub fn oracle_projections(poset: &Poset, x: EventId) -> Result<Vec<(Option<EventId>, Option<EventId>)>> {
    let down = oracle_descendants(poset, x)?;
    let up = oracle_ancestors(poset, x)?;
    poset
        .chains()
        .iter()
        .map(|c| {
            Ok((
                extreme_on(poset, &down, c.id(), true)?,
                extreme_on(poset, &up, c.id(), false)?,
            ))
        })
        .collect()
}

/// A random poset of `n_events` events spread over `n_chains` chains, about
/// one in six left chainless, with influence edges between events of
/// distinct chains drawn with probability `edge_prob` from earlier to later
/// events. Creation order is a linear extension, so the result is acyclic.
pub fn random_poset<R: Rng>(rng: &mut R, n_events: usize, n_chains: usize, edge_prob: f64) -> Poset {
    let mut b = PosetBuilder::new();
    let chains: Vec<ChainId> = (0..n_chains)
        .map(|i| b.add_chain(&format!("C{i}")).expect("fresh names"))
        .collect();
    let mut owner: Vec<Option<usize>> = Vec::with_capacity(n_events);
    let mut events = Vec::with_capacity(n_events);
    for _ in 0..n_events {
        let pick = rng.random_range(0..=n_chains + n_chains.div_ceil(5));
        if pick < n_chains {
            events.push(b.push_event(chains[pick]).expect("known chain"));
            owner.push(Some(pick));
        } else {
            events.push(b.add_event());
            owner.push(None);
        }
    }
    let mut edges = Vec::new();
    for j in 0..n_events {
        for i in 0..j {
            let same = owner[i].is_some() && owner[i] == owner[j];
            if !same && rng.random::<f64>() < edge_prob {
                edges.push((events[i], events[j]));
            }
        }
    }
    b.add_influences(edges).expect("forward edges are acyclic");
    b.freeze().expect("generated poset is valid")
}
