//! Line-oriented text format for posets.
//!
//! ```text
//! event 1 chain=P v=1
//! event 2 chain=P v=2
//! event 3
//! edge chain 1 2
//! edge influence 1 3
//! ```
//!
//! Events are written sorted by id, then edges sorted by kind (chain edges
//! first) and endpoints, so identical posets give byte-identical files.
//! Blank lines and lines starting with `#` are ignored when reading.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use super::{ChainId, EdgeKind, EventId, Poset, PosetBuilder};
use crate::error::{Error, Result, Violation};

impl Poset {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut nodes: Vec<_> = self.nodes.iter().collect();
        nodes.sort_by_key(|n| n.id);
        for node in nodes {
            match (node.chain, node.valuation) {
                (Some(c), Some(v)) => {
                    let _ = writeln!(
                        out,
                        "event {} chain={} v={}",
                        node.id, self.chains[c as usize].name, v
                    );
                }
                _ => {
                    let _ = writeln!(out, "event {}", node.id);
                }
            }
        }
        for edge in self.edges() {
            let kind = match edge.kind {
                EdgeKind::Chain => "chain",
                EdgeKind::Influence => "influence",
            };
            let _ = writeln!(out, "edge {kind} {} {}", edge.src, edge.dst);
        }
        out
    }

    /// Parses the text format. Malformed records give [`Error::Format`];
    /// well-formed input that breaks a poset invariant gives
    /// [`Error::Invariant`].
    pub fn from_text(input: &str) -> Result<Poset> {
        let mut events: Vec<(EventId, Option<(String, i64)>)> = Vec::new();
        let mut chain_edges: Vec<(EventId, EventId, usize)> = Vec::new();
        let mut influence_edges: Vec<(EventId, EventId, usize)> = Vec::new();

        for (i, raw) in input.lines().enumerate() {
            let line = i + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            match fields[0] {
                "event" => events.push((parse_id(fields.get(1), line)?, parse_membership(&fields[2..], line)?)),
                "edge" => {
                    if fields.len() != 4 {
                        return Err(format_err(line, "expected `edge <kind> <src> <dst>`"));
                    }
                    let src = parse_id(fields.get(2), line)?;
                    let dst = parse_id(fields.get(3), line)?;
                    match fields[1] {
                        "chain" => chain_edges.push((src, dst, line)),
                        "influence" => influence_edges.push((src, dst, line)),
                        other => return Err(format_err(line, &format!("unknown edge kind `{other}`"))),
                    }
                }
                other => return Err(format_err(line, &format!("unknown record `{other}`"))),
            }
        }

        let known: HashMap<EventId, Option<&(String, i64)>> =
            events.iter().map(|(id, m)| (*id, m.as_ref())).collect();
        for &(src, dst, line) in chain_edges.iter().chain(&influence_edges) {
            for id in [src, dst] {
                if !known.contains_key(&id) {
                    return Err(format_err(line, &format!("edge refers to undeclared event {id}")));
                }
            }
        }

        let mut builder = PosetBuilder::new();
        let names: BTreeSet<&str> = events
            .iter()
            .filter_map(|(_, m)| m.as_ref().map(|(c, _)| c.as_str()))
            .collect();
        let mut chain_ids: BTreeMap<&str, ChainId> = BTreeMap::new();
        for name in names {
            chain_ids.insert(name, builder.add_chain(name)?);
        }

        let mut ordered: Vec<&(EventId, Option<(String, i64)>)> = events.iter().collect();
        ordered.sort_by(|a, b| {
            let key = |e: &(EventId, Option<(String, i64)>)| {
                e.1.as_ref().map(|(c, v)| (c.clone(), *v)).map_or((1, String::new(), 0, e.0), |(c, v)| (0, c, v, e.0))
            };
            key(a).cmp(&key(b))
        });
        for (id, membership) in ordered {
            let chain = membership.as_ref().map(|(c, v)| (chain_ids[c.as_str()], *v));
            builder.insert_event(*id, chain)?;
        }

        // Chain edges in the file must be exactly the adjacent pairs of each chain.
        let mut expected: BTreeSet<(EventId, EventId)> = BTreeSet::new();
        for chain in builder.chains.iter() {
            for w in chain.members.windows(2) {
                expected.insert((builder.nodes[w[0]].id, builder.nodes[w[1]].id));
            }
        }
        let mut declared: BTreeSet<(EventId, EventId)> = BTreeSet::new();
        for &(src, dst, _) in &chain_edges {
            if !expected.contains(&(src, dst)) {
                return Err(Error::Invariant(Violation::StrayChainEdge { src, dst }));
            }
            declared.insert((src, dst));
        }
        if let Some(&(lo, hi)) = expected.difference(&declared).next() {
            let chain = known[&lo].map(|(c, _)| c.clone()).unwrap_or_default();
            return Err(Error::Invariant(Violation::MissingChainEdge { chain, lo, hi }));
        }

        builder.add_influences(influence_edges.iter().map(|&(s, d, _)| (s, d)))?;
        builder.freeze()
    }
}

fn format_err(line: usize, message: &str) -> Error {
    Error::Format {
        line,
        message: message.to_string(),
    }
}

fn parse_id(field: Option<&&str>, line: usize) -> Result<EventId> {
    let field = field.ok_or_else(|| format_err(line, "missing event id"))?;
    field
        .parse::<u32>()
        .map(EventId)
        .map_err(|_| format_err(line, &format!("invalid event id `{field}`")))
}

fn parse_membership(fields: &[&str], line: usize) -> Result<Option<(String, i64)>> {
    match fields {
        [] => Ok(None),
        [chain, v] => {
            let chain = chain
                .strip_prefix("chain=")
                .filter(|c| !c.is_empty())
                .ok_or_else(|| format_err(line, "expected `chain=<id>`"))?;
            let v = v
                .strip_prefix("v=")
                .and_then(|v| v.parse::<i64>().ok())
                .ok_or_else(|| format_err(line, "expected `v=<int>`"))?;
            Ok(Some((chain.to_string(), v)))
        }
        _ => Err(format_err(line, "expected `event <id> [chain=<id> v=<int>]`")),
    }
}
