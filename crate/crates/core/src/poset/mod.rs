//! Posets of influence events.
//!
//! Events live on chains (particles or observers). Chain-successor edges order
//! the events of one chain; influence edges join an influencing event to the
//! influenced one on another chain. The causal order is the reflexive
//! transitive closure of both edge kinds.
//!
//! Construction goes through [`PosetBuilder`], which rejects any edge that
//! would close a cycle. [`PosetBuilder::freeze`] builds the reachability index
//! and yields an immutable [`Poset`] that can be shared between threads.

mod index;
mod text;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result, Violation};
use index::{topological_order, ReachIndex};

static NEXT_TAG: AtomicU64 = AtomicU64::new(1);

/// Identifier of an event, unique within one poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Handle to a chain. Carries the tag of the poset that created it so chains
/// of different posets cannot be mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainId {
    tag: u64,
    index: u32,
}

impl ChainId {
    pub fn index(self) -> usize {
        self.index as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Chain,
    Influence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub kind: EdgeKind,
    pub src: EventId,
    pub dst: EventId,
}

/// A totally ordered sequence of events with strictly increasing integer
/// valuations (the observer's clock readings).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    id: ChainId,
    name: String,
    events: Vec<EventId>,
    valuations: Vec<i64>,
}

impl Chain {
    pub fn id(&self) -> ChainId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn events(&self) -> &[EventId] {
        &self.events
    }

    pub fn valuations(&self) -> &[i64] {
        &self.valuations
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Closed interval `[lo, hi]` along one chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainInterval {
    pub chain: ChainId,
    pub lo: EventId,
    pub hi: EventId,
    /// `v(hi) - v(lo)`.
    pub length: i64,
    lo_pos: usize,
    hi_pos: usize,
}

impl ChainInterval {
    /// Events of the interval, endpoints included.
    pub fn members<'a>(&self, poset: &'a Poset) -> &'a [EventId] {
        &poset.chains[self.chain.index()].events[self.lo_pos..=self.hi_pos]
    }

    /// Joins `self` with an interval starting where `self` ends.
    pub fn concat(&self, next: &ChainInterval) -> Result<ChainInterval> {
        if self.chain != next.chain || self.hi != next.lo {
            return Err(Error::domain("intervals do not share an endpoint"));
        }
        Ok(ChainInterval {
            chain: self.chain,
            lo: self.lo,
            hi: next.hi,
            length: self.length + next.length,
            lo_pos: self.lo_pos,
            hi_pos: next.hi_pos,
        })
    }
}

#[derive(Debug, Clone)]
struct Node {
    id: EventId,
    chain: Option<u32>,
    valuation: Option<i64>,
}

#[derive(Debug, Clone)]
struct ChainDraft {
    name: String,
    members: Vec<usize>,
}

/// Mutable construction phase of a [`Poset`].
#[derive(Debug, Clone)]
pub struct PosetBuilder {
    tag: u64,
    nodes: Vec<Node>,
    lookup: HashMap<EventId, usize>,
    chains: Vec<ChainDraft>,
    succ: Vec<Vec<usize>>,
    influences: Vec<(usize, usize)>,
    next_id: u32,
}

impl Default for PosetBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl PosetBuilder {
    pub fn new() -> Self {
        Self {
            tag: NEXT_TAG.fetch_add(1, Ordering::Relaxed),
            nodes: Vec::new(),
            lookup: HashMap::new(),
            chains: Vec::new(),
            succ: Vec::new(),
            influences: Vec::new(),
            next_id: 1,
        }
    }

    pub fn add_chain(&mut self, name: &str) -> Result<ChainId> {
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '=') {
            return Err(Error::domain(format!("invalid chain name `{name}`")));
        }
        if self.chains.iter().any(|c| c.name == name) {
            return Err(Error::Invariant(Violation::DuplicateChain(name.to_string())));
        }
        self.chains.push(ChainDraft {
            name: name.to_string(),
            members: Vec::new(),
        });
        Ok(ChainId {
            tag: self.tag,
            index: self.chains.len() as u32 - 1,
        })
    }

    pub fn chain_by_name(&self, name: &str) -> Option<ChainId> {
        self.chains
            .iter()
            .position(|c| c.name == name)
            .map(|index| ChainId {
                tag: self.tag,
                index: index as u32,
            })
    }

    /// Appends an event to `chain` valued one above the current last event
    /// (or 1 for the first event).
    pub fn push_event(&mut self, chain: ChainId) -> Result<EventId> {
        let next = self.last_valuation(chain)?.map_or(1, |v| v + 1);
        self.push_event_valued(chain, next)
    }

    pub fn push_event_valued(&mut self, chain: ChainId, valuation: i64) -> Result<EventId> {
        let id = self.fresh_id();
        self.insert_event(id, Some((chain, valuation)))?;
        Ok(id)
    }

    /// Adds an event that belongs to no chain.
    pub fn add_event(&mut self) -> EventId {
        let id = self.fresh_id();
        self.insert_event(id, None)
            .expect("fresh ids are unique");
        id
    }

    /// Adds an event with an explicit id. Chain events are appended to the end
    /// of their chain and must carry a valuation above the chain's last one.
    pub fn insert_event(&mut self, id: EventId, chain: Option<(ChainId, i64)>) -> Result<()> {
        if self.lookup.contains_key(&id) {
            return Err(Error::Invariant(Violation::DuplicateEvent(id)));
        }
        let node = self.nodes.len();
        let mut chain_index = None;
        let mut valuation = None;
        let mut previous = None;
        if let Some((chain, v)) = chain {
            self.check_chain(chain)?;
            if let Some(last) = self.last_valuation(chain)? {
                if v <= last {
                    return Err(Error::Invariant(Violation::NonMonotoneValuation {
                        chain: self.chains[chain.index()].name.clone(),
                        event: id,
                    }));
                }
            }
            previous = self.chains[chain.index()].members.last().copied();
            self.chains[chain.index()].members.push(node);
            chain_index = Some(chain.index);
            valuation = Some(v);
        }
        self.nodes.push(Node {
            id,
            chain: chain_index,
            valuation,
        });
        self.succ.push(Vec::new());
        self.lookup.insert(id, node);
        if let Some(prev) = previous {
            self.succ[prev].push(node);
        }
        self.next_id = self.next_id.max(id.0.saturating_add(1));
        Ok(())
    }

    /// Adds one influence edge, rejecting it if it would create a cycle or if
    /// both ends sit on the same chain.
    pub fn add_influence(&mut self, src: EventId, dst: EventId) -> Result<()> {
        let (s, d) = self.check_influence(src, dst)?;
        if self.reaches(d, s) {
            return Err(Error::Invariant(Violation::Cycle { src, dst }));
        }
        self.succ[s].push(d);
        self.influences.push((s, d));
        Ok(())
    }

    /// Adds a batch of influence edges with one acyclicity check over the
    /// whole graph. On failure nothing is added.
    pub fn add_influences<I>(&mut self, edges: I) -> Result<()>
    where
        I: IntoIterator<Item = (EventId, EventId)>,
    {
        let mut batch = Vec::new();
        for (src, dst) in edges {
            batch.push(self.check_influence(src, dst)?);
        }
        for &(s, d) in &batch {
            self.succ[s].push(d);
        }
        if let Err(cyclic) = topological_order(&self.succ) {
            let cyclic: HashSet<usize> = cyclic.into_iter().collect();
            for &(s, _) in batch.iter().rev() {
                self.succ[s].pop();
            }
            let (s, d) = batch
                .iter()
                .copied()
                .find(|(s, d)| cyclic.contains(s) && cyclic.contains(d))
                .unwrap_or(batch[0]);
            return Err(Error::Invariant(Violation::Cycle {
                src: self.nodes[s].id,
                dst: self.nodes[d].id,
            }));
        }
        self.influences.extend(batch);
        Ok(())
    }

    pub fn freeze(self) -> Result<Poset> {
        let order = topological_order(&self.succ).map_err(|cyclic| {
            let id = self.nodes[cyclic[0]].id;
            Error::Invariant(Violation::Cycle { src: id, dst: id })
        })?;
        let n = self.nodes.len();
        let mut pred = vec![Vec::new(); n];
        for (s, targets) in self.succ.iter().enumerate() {
            for &t in targets {
                pred[t].push(s);
            }
        }
        let members: Vec<Vec<usize>> = self.chains.iter().map(|c| c.members.clone()).collect();
        let chain_of: Vec<Option<u32>> = self.nodes.iter().map(|n| n.chain).collect();
        let reach = ReachIndex::build(&members, &chain_of, &self.succ, &pred, &order);

        let mut position = vec![0usize; n];
        for m in &members {
            for (pos, &node) in m.iter().enumerate() {
                position[node] = pos;
            }
        }
        let chains = self
            .chains
            .iter()
            .enumerate()
            .map(|(i, draft)| Chain {
                id: ChainId {
                    tag: self.tag,
                    index: i as u32,
                },
                name: draft.name.clone(),
                events: draft.members.iter().map(|&m| self.nodes[m].id).collect(),
                valuations: draft
                    .members
                    .iter()
                    .map(|&m| self.nodes[m].valuation.expect("chain events carry valuations"))
                    .collect(),
            })
            .collect();

        Ok(Poset {
            tag: self.tag,
            nodes: self.nodes,
            lookup: self.lookup,
            chains,
            position,
            succ: self.succ,
            pred,
            influences: self.influences,
            reach,
        })
    }

    fn fresh_id(&mut self) -> EventId {
        while self.lookup.contains_key(&EventId(self.next_id)) {
            self.next_id += 1;
        }
        EventId(self.next_id)
    }

    fn check_chain(&self, chain: ChainId) -> Result<()> {
        if chain.tag != self.tag {
            return Err(Error::ForeignChain);
        }
        if chain.index() >= self.chains.len() {
            return Err(Error::UnknownChain(format!("#{}", chain.index)));
        }
        Ok(())
    }

    fn last_valuation(&self, chain: ChainId) -> Result<Option<i64>> {
        self.check_chain(chain)?;
        Ok(self.chains[chain.index()]
            .members
            .last()
            .and_then(|&m| self.nodes[m].valuation))
    }

    fn node(&self, id: EventId) -> Result<usize> {
        self.lookup.get(&id).copied().ok_or(Error::UnknownEvent(id))
    }

    fn check_influence(&self, src: EventId, dst: EventId) -> Result<(usize, usize)> {
        let s = self.node(src)?;
        let d = self.node(dst)?;
        if s == d {
            return Err(Error::Invariant(Violation::Cycle { src, dst }));
        }
        match (self.nodes[s].chain, self.nodes[d].chain) {
            (Some(a), Some(b)) if a == b => {
                Err(Error::Invariant(Violation::SameChainInfluence { src, dst }))
            }
            _ => Ok((s, d)),
        }
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(self.succ[v].iter().copied().filter(|&s| !seen[s]));
        }
        false
    }
}

/// Frozen poset of influence events. Immutable; all queries are pure.
#[derive(Debug, Clone)]
pub struct Poset {
    tag: u64,
    nodes: Vec<Node>,
    lookup: HashMap<EventId, usize>,
    chains: Vec<Chain>,
    /// Position of each chain event within its chain.
    position: Vec<usize>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    influences: Vec<(usize, usize)>,
    reach: ReachIndex,
}

impl Poset {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: EventId) -> bool {
        self.lookup.contains_key(&id)
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        self.nodes.iter().map(|n| n.id)
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain(&self, id: ChainId) -> Result<&Chain> {
        if id.tag != self.tag {
            return Err(Error::ForeignChain);
        }
        self.chains
            .get(id.index())
            .ok_or_else(|| Error::UnknownChain(format!("#{}", id.index)))
    }

    pub fn chain_by_name(&self, name: &str) -> Option<ChainId> {
        self.chains.iter().find(|c| c.name == name).map(|c| c.id)
    }

    pub fn chain_of(&self, event: EventId) -> Result<Option<ChainId>> {
        let node = self.node(event)?;
        Ok(self.nodes[node].chain.map(|index| ChainId {
            tag: self.tag,
            index,
        }))
    }

    pub fn valuation(&self, event: EventId) -> Result<Option<i64>> {
        Ok(self.nodes[self.node(event)?].valuation)
    }

    pub fn successors(&self, event: EventId) -> Result<impl Iterator<Item = EventId> + '_> {
        let node = self.node(event)?;
        Ok(self.succ[node].iter().map(|&s| self.nodes[s].id))
    }

    pub fn predecessors(&self, event: EventId) -> Result<impl Iterator<Item = EventId> + '_> {
        let node = self.node(event)?;
        Ok(self.pred[node].iter().map(|&p| self.nodes[p].id))
    }

    /// All edges, sorted by kind then endpoints.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self
            .chains
            .iter()
            .flat_map(|c| {
                c.events.windows(2).map(|w| Edge {
                    kind: EdgeKind::Chain,
                    src: w[0],
                    dst: w[1],
                })
            })
            .chain(self.influences.iter().map(|&(s, d)| Edge {
                kind: EdgeKind::Influence,
                src: self.nodes[s].id,
                dst: self.nodes[d].id,
            }))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn influence_edges(&self) -> impl Iterator<Item = (EventId, EventId)> + '_ {
        self.influences
            .iter()
            .map(|&(s, d)| (self.nodes[s].id, self.nodes[d].id))
    }

    /// `x <= y` in the causal order.
    pub fn leq(&self, x: EventId, y: EventId) -> Result<bool> {
        Ok(self.reach.leq(self.node(x)?, self.node(y)?))
    }

    /// Least event of `target` that includes `x`, if any.
    pub fn forward_project(&self, x: EventId, target: ChainId) -> Result<Option<EventId>> {
        let chain = self.chain(target)?;
        let pos = self.reach.first_above(self.node(x)?, target.index());
        Ok(pos.map(|p| chain.events[p]))
    }

    /// Greatest event of `target` included by `x`, if any.
    pub fn backward_project(&self, x: EventId, target: ChainId) -> Result<Option<EventId>> {
        let chain = self.chain(target)?;
        let pos = self.reach.last_below(self.node(x)?, target.index());
        Ok(pos.map(|p| chain.events[p]))
    }

    /// Valuation of the forward projection of `x` onto `target`.
    pub fn forward_valuation(&self, x: EventId, target: ChainId) -> Result<Option<i64>> {
        let chain = self.chain(target)?;
        let pos = self.reach.first_above(self.node(x)?, target.index());
        Ok(pos.map(|p| chain.valuations[p]))
    }

    /// Valuation of the backward projection of `x` onto `target`.
    pub fn backward_valuation(&self, x: EventId, target: ChainId) -> Result<Option<i64>> {
        let chain = self.chain(target)?;
        let pos = self.reach.last_below(self.node(x)?, target.index());
        Ok(pos.map(|p| chain.valuations[p]))
    }

    /// The pair `(Px, P̄x)` of forward and backward projection valuations when
    /// `x` projects both ways onto `target`.
    pub fn coordinates(&self, x: EventId, target: ChainId) -> Result<Option<(i64, i64)>> {
        Ok(self
            .forward_valuation(x, target)?
            .zip(self.backward_valuation(x, target)?))
    }

    pub fn chain_interval(&self, chain: ChainId, x: EventId, z: EventId) -> Result<ChainInterval> {
        let lo_pos = self.position_on(chain, x)?;
        let hi_pos = self.position_on(chain, z)?;
        if lo_pos > hi_pos {
            return Err(Error::domain(format!("interval [{x}, {z}] is reversed")));
        }
        let c = &self.chains[chain.index()];
        Ok(ChainInterval {
            chain,
            lo: x,
            hi: z,
            length: c.valuations[hi_pos] - c.valuations[lo_pos],
            lo_pos,
            hi_pos,
        })
    }

    /// 0-based index of `event` within `chain`.
    pub fn position_on(&self, chain: ChainId, event: EventId) -> Result<usize> {
        let c = self.chain(chain)?;
        let node = self.node(event)?;
        if self.nodes[node].chain != Some(chain.index) {
            return Err(Error::NotOnChain {
                event,
                chain: c.name.clone(),
            });
        }
        Ok(self.position[node])
    }

    fn node(&self, id: EventId) -> Result<usize> {
        self.lookup.get(&id).copied().ok_or(Error::UnknownEvent(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> (Poset, ChainId, Vec<EventId>) {
        let mut b = PosetBuilder::new();
        let p = b.add_chain("P").unwrap();
        let events = (0..n).map(|_| b.push_event(p).unwrap()).collect();
        (b.freeze().unwrap(), p, events)
    }

    #[test]
    fn leq_is_reflexive() {
        let (poset, _, events) = line(3);
        for &e in &events {
            assert!(poset.leq(e, e).unwrap());
        }
    }

    #[test]
    fn unknown_event_is_reported() {
        let (poset, p, _) = line(2);
        assert_eq!(poset.leq(EventId(99), EventId(1)), Err(Error::UnknownEvent(EventId(99))));
        assert!(matches!(
            poset.forward_project(EventId(99), p),
            Err(Error::UnknownEvent(_))
        ));
    }

    #[test]
    fn interval_four_to_seven() {
        let (poset, p, e) = line(8);
        let iv = poset.chain_interval(p, e[3], e[6]).unwrap();
        assert_eq!(iv.length, 3);
        assert_eq!(iv.members(&poset), &e[3..=6]);
        let vals: Vec<i64> = iv
            .members(&poset)
            .iter()
            .map(|&x| poset.valuation(x).unwrap().unwrap())
            .collect();
        assert_eq!(vals, vec![4, 5, 6, 7]);
    }

    #[test]
    fn degenerate_and_additive_intervals() {
        let (poset, p, e) = line(8);
        assert_eq!(poset.chain_interval(p, e[2], e[2]).unwrap().length, 0);
        let a = poset.chain_interval(p, e[3], e[5]).unwrap();
        let b = poset.chain_interval(p, e[5], e[6]).unwrap();
        let whole = a.concat(&b).unwrap();
        assert_eq!(a.length + b.length, 3);
        assert_eq!(whole, poset.chain_interval(p, e[3], e[6]).unwrap());
        assert!(b.concat(&a).is_err());
    }

    #[test]
    fn reversed_or_foreign_interval_is_a_domain_error() {
        let (poset, p, e) = line(4);
        assert!(matches!(
            poset.chain_interval(p, e[3], e[1]),
            Err(Error::Domain(_))
        ));
        let mut b = PosetBuilder::new();
        let q = b.add_chain("Q").unwrap();
        let other = b.push_event(q).unwrap();
        let _ = b.freeze().unwrap();
        assert!(poset.chain_interval(q, other, other).is_err());
    }

    #[test]
    fn influence_on_same_chain_is_rejected() {
        let mut b = PosetBuilder::new();
        let p = b.add_chain("P").unwrap();
        let x = b.push_event(p).unwrap();
        let y = b.push_event(p).unwrap();
        assert!(matches!(
            b.add_influence(x, y),
            Err(Error::Invariant(Violation::SameChainInfluence { .. }))
        ));
    }

    #[test]
    fn cycle_is_rejected_and_builder_unchanged() {
        let mut b = PosetBuilder::new();
        let p = b.add_chain("P").unwrap();
        let q = b.add_chain("Q").unwrap();
        let p1 = b.push_event(p).unwrap();
        let p2 = b.push_event(p).unwrap();
        let q1 = b.push_event(q).unwrap();
        b.add_influence(p1, q1).unwrap();
        assert!(matches!(
            b.add_influence(q1, p1),
            Err(Error::Invariant(Violation::Cycle { .. }))
        ));
        assert!(matches!(
            b.add_influences([(q1, p2), (q1, p1)]),
            Err(Error::Invariant(Violation::Cycle { .. }))
        ));
        let poset = b.freeze().unwrap();
        assert!(poset.leq(p1, q1).unwrap());
        assert!(!poset.leq(q1, p2).unwrap());
        assert_eq!(poset.influence_edges().count(), 1);
    }

    #[test]
    fn valuations_must_increase() {
        let mut b = PosetBuilder::new();
        let p = b.add_chain("P").unwrap();
        b.push_event_valued(p, 5).unwrap();
        assert!(matches!(
            b.push_event_valued(p, 5),
            Err(Error::Invariant(Violation::NonMonotoneValuation { .. }))
        ));
        assert_eq!(b.push_event(p).map(|_| ()), Ok(()));
    }

    #[test]
    fn chainless_events_are_ordered_through_edges() {
        let mut b = PosetBuilder::new();
        let p = b.add_chain("P").unwrap();
        let p1 = b.push_event(p).unwrap();
        let p2 = b.push_event(p).unwrap();
        let x = b.add_event();
        let y = b.add_event();
        b.add_influence(p1, x).unwrap();
        b.add_influence(x, y).unwrap();
        b.add_influence(y, p2).unwrap();
        let poset = b.freeze().unwrap();
        assert!(poset.leq(p1, y).unwrap());
        assert!(poset.leq(x, p2).unwrap());
        assert!(!poset.leq(y, x).unwrap());
        assert_eq!(poset.forward_project(x, p).unwrap(), Some(p2));
        assert_eq!(poset.backward_project(y, p).unwrap(), Some(p1));
        assert_eq!(poset.coordinates(x, p).unwrap(), Some((2, 1)));
    }
}
