use std::fmt;

use crate::poset::EventId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown event {0}")]
    UnknownEvent(EventId),

    #[error("unknown chain `{0}`")]
    UnknownChain(String),

    #[error("chain belongs to a different poset")]
    ForeignChain,

    #[error("event {event} is not on chain `{chain}`")]
    NotOnChain { event: EventId, chain: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("projection incomplete: {0}")]
    ProjectionIncomplete(String),

    #[error("invariant violated: {0}")]
    Invariant(Violation),

    #[error("chains are not coordinated: {0}")]
    NotCoordinated(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("config error in field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("singular proper time: {0}")]
    SingularTime(String),

    #[error("degenerate walk: {0}")]
    DegenerateWalk(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

/// A structural invariant of a poset that failed to hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Adding the edge would close a directed cycle.
    Cycle { src: EventId, dst: EventId },
    /// Influence edges must join events on distinct chains.
    SameChainInfluence { src: EventId, dst: EventId },
    /// Adjacent chain events without a chain-successor edge between them.
    MissingChainEdge { chain: String, lo: EventId, hi: EventId },
    /// A chain edge that does not join adjacent events of one chain.
    StrayChainEdge { src: EventId, dst: EventId },
    /// Valuations along a chain must strictly increase.
    NonMonotoneValuation { chain: String, event: EventId },
    DuplicateEvent(EventId),
    DuplicateChain(String),
}

impl Violation {
    /// Short stable name used in verification reports.
    pub fn name(&self) -> &'static str {
        match self {
            Violation::Cycle { .. } => "acyclicity",
            Violation::SameChainInfluence { .. } => "influence-between-chains",
            Violation::MissingChainEdge { .. } => "chain-successor-edges",
            Violation::StrayChainEdge { .. } => "chain-successor-edges",
            Violation::NonMonotoneValuation { .. } => "monotone-valuations",
            Violation::DuplicateEvent(_) => "unique-event-ids",
            Violation::DuplicateChain(_) => "unique-chain-ids",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name())?;
        match self {
            Violation::Cycle { src, dst } => {
                write!(f, "edge {src} -> {dst} would create a cycle")
            }
            Violation::SameChainInfluence { src, dst } => {
                write!(f, "influence edge {src} -> {dst} stays on one chain")
            }
            Violation::MissingChainEdge { chain, lo, hi } => {
                write!(f, "chain `{chain}` has no edge {lo} -> {hi}")
            }
            Violation::StrayChainEdge { src, dst } => {
                write!(f, "chain edge {src} -> {dst} does not join adjacent chain events")
            }
            Violation::NonMonotoneValuation { chain, event } => {
                write!(f, "valuation of {event} does not increase along `{chain}`")
            }
            Violation::DuplicateEvent(id) => write!(f, "event {id} declared twice"),
            Violation::DuplicateChain(name) => write!(f, "chain `{name}` declared twice"),
        }
    }
}
