//! Quantifying intervals with a coordinated pair of observer chains.
//!
//! Projecting the endpoints of an interval onto observers `P` and `Q` gives a
//! pair of chain lengths `(dp, dq)`. Their half-sum is time, their
//! half-difference is space, their product is the squared interval and
//! `dx / dt` is the velocity.

use std::fmt;

use crate::error::{Error, Result};
use crate::poset::{ChainId, EventId, Poset};

/// Quantified generalized interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalQuant {
    pub dp: f64,
    pub dq: f64,
    pub dt: f64,
    pub dx: f64,
    pub ds2: f64,
    /// `dx / dt`; `None` when `dt == 0`.
    pub beta: Option<f64>,
}

impl IntervalQuant {
    /// The same interval seen with the roles of `P` and `Q` exchanged.
    pub fn swapped(&self) -> IntervalQuant {
        quantify_interval(self.dq, self.dp)
    }
}

pub fn quantify_interval(dp: f64, dq: f64) -> IntervalQuant {
    let dt = (dp + dq) / 2.0;
    let dx = (dp - dq) / 2.0;
    let beta = if dp + dq != 0.0 {
        Some((dp - dq) / (dp + dq))
    } else {
        None
    };
    IntervalQuant {
        dp,
        dq,
        dt,
        dx,
        ds2: dp * dq,
        beta,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    Forward,
    Backward,
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Projection::Forward => "forward",
            Projection::Backward => "backward",
        })
    }
}

/// One failure found by [`CoordinatedPair::check_coordination`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordinationIssue {
    /// No event of `from` projects onto `to` in this direction.
    NoOverlap {
        direction: Projection,
        from: String,
        to: String,
    },
    /// Adjacent covered events whose images are not adjacent or whose lengths
    /// disagree.
    Interval {
        direction: Projection,
        from: String,
        to: String,
        lo: EventId,
        hi: EventId,
        length: i64,
        image_length: i64,
    },
}

impl fmt::Display for CoordinationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordinationIssue::NoOverlap {
                direction,
                from,
                to,
            } => write!(f, "{direction} {from}->{to}: no event of {from} projects onto {to}"),
            CoordinationIssue::Interval {
                direction,
                from,
                to,
                lo,
                hi,
                length,
                image_length,
            } => write!(
                f,
                "{direction} {from}->{to}: interval [{lo}, {hi}] of length {length} \
                 projects to length {image_length}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinationReport {
    pub coordinated: bool,
    pub issues: Vec<CoordinationIssue>,
}

/// Two observer chains of one poset used as a frame.
#[derive(Debug, Clone, Copy)]
pub struct CoordinatedPair<'a> {
    poset: &'a Poset,
    p: ChainId,
    q: ChainId,
}

impl<'a> CoordinatedPair<'a> {
    /// Builds the pair and requires it to pass [`Self::check_coordination`].
    pub fn new(poset: &'a Poset, p: ChainId, q: ChainId) -> Result<Self> {
        let pair = Self::unchecked(poset, p, q)?;
        let report = pair.check_coordination();
        match report.issues.first() {
            None => Ok(pair),
            Some(issue) => Err(Error::NotCoordinated(issue.to_string())),
        }
    }

    /// Builds the pair without checking coordination.
    pub fn unchecked(poset: &'a Poset, p: ChainId, q: ChainId) -> Result<Self> {
        poset.chain(p)?;
        poset.chain(q)?;
        Ok(Self { poset, p, q })
    }

    pub fn poset(&self) -> &'a Poset {
        self.poset
    }

    pub fn p(&self) -> ChainId {
        self.p
    }

    pub fn q(&self) -> ChainId {
        self.q
    }

    /// Checks that forward and backward projections between the chains map
    /// adjacent events to adjacent events of equal length, in both directions,
    /// over the segments where the projections exist.
    pub fn check_coordination(&self) -> CoordinationReport {
        let mut issues = Vec::new();
        for (from, to) in [(self.p, self.q), (self.q, self.p)] {
            for direction in [Projection::Forward, Projection::Backward] {
                if let Some(issue) = self.check_map(from, to, direction) {
                    issues.push(issue);
                }
            }
        }
        CoordinationReport {
            coordinated: issues.is_empty(),
            issues,
        }
    }

    fn check_map(&self, from: ChainId, to: ChainId, direction: Projection) -> Option<CoordinationIssue> {
        let poset = self.poset;
        let source = poset.chain(from).ok()?;
        let target = poset.chain(to).ok()?;
        let covered: Vec<(usize, usize)> = source
            .events()
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| {
                let image = match direction {
                    Projection::Forward => poset.forward_project(e, to),
                    Projection::Backward => poset.backward_project(e, to),
                }
                .ok()
                .flatten()?;
                Some((i, poset.position_on(to, image).ok()?))
            })
            .collect();
        if covered.is_empty() {
            return Some(CoordinationIssue::NoOverlap {
                direction,
                from: source.name().to_string(),
                to: target.name().to_string(),
            });
        }
        let sv = source.valuations();
        let tv = target.valuations();
        covered.windows(2).find_map(|w| {
            let (a, ia) = w[0];
            let (b, ib) = w[1];
            let length = sv[b] - sv[a];
            let image_length = tv[ib] - tv[ia];
            let adjacent = b == a + 1 && ib == ia + 1;
            (!adjacent || length != image_length).then(|| CoordinationIssue::Interval {
                direction,
                from: source.name().to_string(),
                to: target.name().to_string(),
                lo: source.events()[a],
                hi: source.events()[b],
                length,
                image_length,
            })
        })
    }

    /// Length of `[lo, hi]` on `P` as the average of its own length and the
    /// length of its forward image on `Q`.
    pub fn quantify_length(&self, lo: EventId, hi: EventId) -> Result<f64> {
        let interval = self.poset.chain_interval(self.p, lo, hi)?;
        let q_lo = self.forward(lo, self.q)?;
        let q_hi = self.forward(hi, self.q)?;
        Ok((interval.length as f64 + (q_hi - q_lo) as f64) / 2.0)
    }

    /// Distance between the chains measured through `[p_x, q_y]`.
    pub fn distance(&self, p_x: EventId, q_y: EventId) -> Result<f64> {
        let v_px = self.poset.valuation(p_x)?;
        let v_qy = self.poset.valuation(q_y)?;
        self.poset.position_on(self.p, p_x)?;
        self.poset.position_on(self.q, q_y)?;
        let (v_px, v_qy) = (v_px.unwrap_or_default(), v_qy.unwrap_or_default());
        let dp = self.forward(q_y, self.p)? - v_px;
        let dq = v_qy - self.forward(p_x, self.q)?;
        Ok((dp - dq) as f64 / 2.0)
    }

    /// Quantifies the generalized interval `[x, y]` by projecting both ends
    /// onto both chains in the given direction.
    pub fn quantify(&self, x: EventId, y: EventId, direction: Projection) -> Result<IntervalQuant> {
        let project = |e: EventId, c: ChainId| match direction {
            Projection::Forward => self.forward(e, c),
            Projection::Backward => self.backward(e, c),
        };
        let dp = project(y, self.p)? - project(x, self.p)?;
        let dq = project(y, self.q)? - project(x, self.q)?;
        Ok(quantify_interval(dp as f64, dq as f64))
    }

    fn forward(&self, e: EventId, chain: ChainId) -> Result<i64> {
        self.poset.forward_valuation(e, chain)?.ok_or_else(|| {
            Error::ProjectionIncomplete(format!(
                "event {e} does not forward-project to `{}`",
                self.chain_name(chain)
            ))
        })
    }

    fn backward(&self, e: EventId, chain: ChainId) -> Result<i64> {
        self.poset.backward_valuation(e, chain)?.ok_or_else(|| {
            Error::ProjectionIncomplete(format!(
                "event {e} does not backward-project to `{}`",
                self.chain_name(chain)
            ))
        })
    }

    fn chain_name(&self, chain: ChainId) -> &str {
        self.poset.chain(chain).map(|c| c.name()).unwrap_or("?")
    }
}
