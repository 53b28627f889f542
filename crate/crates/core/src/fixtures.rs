//! Small hand-built posets used by tests, benches and `verify`.

use crate::poset::{ChainId, EventId, Poset, PosetBuilder};

/// A particle `Pi` between observers `P` and `Q`. The particle events
/// `a, b, c, d, e` influence `P1, Q1, P2, Q2, P3` in turn, so the particle
/// influences `P` three times and `Q` twice.
#[derive(Debug, Clone)]
pub struct TwoObserverWalk {
    pub poset: Poset,
    pub p: ChainId,
    pub q: ChainId,
    pub pi: ChainId,
    pub a: EventId,
    pub b: EventId,
    pub c: EventId,
    pub d: EventId,
    pub e: EventId,
    pub p_events: [EventId; 3],
    pub q_events: [EventId; 2],
}

pub fn two_observer_walk() -> TwoObserverWalk {
    let mut b = PosetBuilder::new();
    let p = b.add_chain("P").unwrap();
    let q = b.add_chain("Q").unwrap();
    let pi = b.add_chain("Pi").unwrap();
    let p_events = [(); 3].map(|_| b.push_event(p).unwrap());
    let q_events = [(); 2].map(|_| b.push_event(q).unwrap());
    let [ea, eb, ec, ed, ee] = [(); 5].map(|_| b.push_event(pi).unwrap());
    b.add_influences([
        (ea, p_events[0]),
        (eb, q_events[0]),
        (ec, p_events[1]),
        (ed, q_events[1]),
        (ee, p_events[2]),
    ])
    .unwrap();
    TwoObserverWalk {
        poset: b.freeze().unwrap(),
        p,
        q,
        pi,
        a: ea,
        b: eb,
        c: ec,
        d: ed,
        e: ee,
        p_events,
        q_events,
    }
}

/// Chain `P` valued 1..=4 and an off-chain event `x` with `P2 -> x -> P3`,
/// so `x` is quantified by the pair `(3, 2)`.
pub fn fig1b() -> (Poset, ChainId, EventId) {
    let mut b = PosetBuilder::new();
    let p = b.add_chain("P").unwrap();
    let events: Vec<EventId> = (0..4).map(|_| b.push_event(p).unwrap()).collect();
    let x = b.add_event();
    b.add_influence(events[1], x).unwrap();
    b.add_influence(x, events[2]).unwrap();
    (b.freeze().unwrap(), p, x)
}

#[derive(Debug, Clone)]
pub struct Ladder {
    pub poset: Poset,
    pub p: ChainId,
    pub q: ChainId,
}

/// Two observer chains of `len` events exchanging influence: `p_i -> q_{i+shift}`
/// and `q_i -> p_{i+shift}`. Coordinated for any `shift >= 1`.
pub fn coordinated_ladder(len: usize, shift: usize) -> Ladder {
    ladder(len, shift, None)
}

/// Like [`coordinated_ladder`] but without the rung leaving `p[missing]`
/// (0-based), which breaks coordination at `[p[missing - 1], p[missing]]`.
pub fn ladder_missing_rung(len: usize, shift: usize, missing: usize) -> Ladder {
    ladder(len, shift, Some(missing))
}

fn ladder(len: usize, shift: usize, missing: Option<usize>) -> Ladder {
    assert!(shift >= 1);
    let mut b = PosetBuilder::new();
    let p = b.add_chain("P").unwrap();
    let q = b.add_chain("Q").unwrap();
    let pe: Vec<EventId> = (0..len).map(|_| b.push_event(p).unwrap()).collect();
    let qe: Vec<EventId> = (0..len).map(|_| b.push_event(q).unwrap()).collect();
    let mut edges = Vec::new();
    for i in 0..len.saturating_sub(shift) {
        if Some(i) != missing {
            edges.push((pe[i], qe[i + shift]));
        }
        edges.push((qe[i], pe[i + shift]));
    }
    b.add_influences(edges).unwrap();
    Ladder {
        poset: b.freeze().unwrap(),
        p,
        q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_observer_walk_order_and_projections() {
        let f = two_observer_walk();
        let poset = &f.poset;
        let [p1, p2, p3] = f.p_events;
        let [q1, _q2] = f.q_events;
        assert!(poset.leq(f.a, p1).unwrap());
        assert!(!poset.leq(f.b, p1).unwrap());
        assert_eq!(poset.forward_project(f.a, f.q).unwrap(), Some(q1));
        assert_eq!(poset.forward_project(f.b, f.q).unwrap(), Some(q1));
        assert_eq!(poset.forward_project(f.a, f.p).unwrap(), Some(p1));
        assert_eq!(poset.forward_project(f.b, f.p).unwrap(), Some(p2));
        assert_eq!(poset.forward_project(f.e, f.p).unwrap(), Some(p3));
        assert_eq!(poset.forward_project(f.e, f.q).unwrap(), None);
        for &x in &f.p_events {
            assert_eq!(poset.forward_project(x, f.p).unwrap(), Some(x));
            assert_eq!(poset.backward_project(x, f.p).unwrap(), Some(x));
        }
    }

    #[test]
    fn fig1b_pair() {
        let (poset, p, x) = fig1b();
        assert_eq!(poset.coordinates(x, p).unwrap(), Some((3, 2)));
    }
}
