//! Action triples and the covering-projection test over a site.
//!
//! On an abstract nerve the probes for a pair are its edges. Over a finite
//! space the probes are the nonempty opens inside `U_i ∩ U_j`, and a probe
//! completes when every intersection component it meets carries the same
//! transition.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::nerve::component_nerve;
use crate::perm::{self, Perm};
use crate::space::{Cover, FiniteSpace, PointSet};

use super::DescentDatum;

/// Largest intersection whose opens are enumerated exhaustively.
const MAX_PROBE_POINTS: usize = 16;

#[derive(Debug, Clone, Copy)]
pub enum Site<'a> {
    Nerve,
    Space {
        space: &'a FiniteSpace,
        cover: &'a Cover,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Probe {
    Edge(usize),
    Open(PointSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTriple {
    pub pair: (usize, usize),
    pub probe: Probe,
    /// The completing bijection `S_i → S_j`.
    pub bijection: Perm,
}

impl Site<'_> {
    fn check(&self, x: &DescentDatum) -> Result<()> {
        if let Site::Space { space, cover } = self {
            if x.nerve() != &component_nerve(space, cover) {
                return Err(Error::InvalidDatum(format!(
                    "`{}` is not a datum over the component nerve of `{}`",
                    x.name(),
                    cover.name()
                )));
            }
        }
        Ok(())
    }
}

fn intersection(cover: &Cover, i: usize, j: usize) -> PointSet {
    cover.open(i).intersect(cover.open(j)).members().clone()
}

/// The edge over `{i, j}` whose component contains `p`.
fn edge_at(x: &DescentDatum, i: usize, j: usize, p: usize) -> Option<usize> {
    x.nerve()
        .edges_between(i.min(j), i.max(j))
        .into_iter()
        .find(|&e| x.nerve().edges()[e].component.as_ref().is_some_and(|c| c.contains(&p)))
}

/// The unique bijection completing `probe`, if the transitions it meets agree.
fn complete(x: &DescentDatum, i: usize, j: usize, probe: &PointSet) -> Option<Perm> {
    if i == j {
        return Some(perm::identity(x.fiber_len(i)));
    }
    let edges: BTreeSet<usize> = probe.iter().map(|&p| edge_at(x, i, j, p)).collect::<Option<_>>()?;
    let mut values = edges.into_iter().map(|e| x.oriented(e, i));
    let first = values.next()?;
    values.all(|v| v == first).then_some(first)
}

/// Nonempty down-closed subsets of the open set `set`, in lexicographic order.
fn opens_within(space: &FiniteSpace, set: &PointSet) -> Result<Vec<PointSet>> {
    let pts: Vec<usize> = set.iter().copied().collect();
    if pts.len() > MAX_PROBE_POINTS {
        return Err(Error::LimitExceeded(format!(
            "{} points in an intersection; at most {MAX_PROBE_POINTS} are enumerated",
            pts.len()
        )));
    }
    let mut out: Vec<PointSet> = (1u32..(1 << pts.len()))
        .map(|mask| {
            pts.iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &p)| p)
                .collect::<PointSet>()
        })
        .filter(|c| space.is_down_closed(c))
        .collect();
    out.sort();
    Ok(out)
}

/// Every probe over the pair `(i, j)` with its completing bijection; probes
/// without a completion are omitted.
pub fn action_triples(x: &DescentDatum, i: usize, j: usize, site: Site<'_>) -> Result<Vec<ActionTriple>> {
    site.check(x)?;
    let n = x.nerve().objects().len();
    if i >= n || j >= n {
        return Err(Error::UnknownIdentifier(format!("object pair ({i},{j})")));
    }
    match site {
        Site::Nerve => Ok(x
            .nerve()
            .edges_between(i.min(j), i.max(j))
            .into_iter()
            .map(|e| ActionTriple {
                pair: (i, j),
                probe: Probe::Edge(e),
                bijection: x.oriented(e, i),
            })
            .collect()),
        Site::Space { space, cover } => {
            let meet = intersection(cover, i, j);
            Ok(opens_within(space, &meet)?
                .into_iter()
                .filter_map(|c| {
                    complete(x, i, j, &c).map(|s| ActionTriple {
                        pair: (i, j),
                        probe: Probe::Open(c),
                        bijection: s,
                    })
                })
                .collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub pair: (usize, usize),
    /// Probes of completed triples that make up the covering family.
    pub witnesses: Vec<Probe>,
    /// Points of the intersection not reached by any witness.
    pub residue: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringReport {
    pub covering: bool,
    pub pairs: Vec<PairReport>,
}

/// Whether completed action triples cover every pairwise intersection. Over
/// a finite space the minimal opens of the intersection's points are the
/// probes tried; any covering family of completed probes refines to them.
pub fn is_covering_projection(x: &DescentDatum, site: Site<'_>) -> Result<CoveringReport> {
    site.check(x)?;
    let n = x.nerve().objects().len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            match site {
                Site::Nerve => {
                    let witnesses: Vec<Probe> =
                        x.nerve().edges_between(i, j).into_iter().map(Probe::Edge).collect();
                    if !witnesses.is_empty() {
                        pairs.push(PairReport {
                            pair: (i, j),
                            witnesses,
                            residue: PointSet::new(),
                        });
                    }
                }
                Site::Space { space, cover } => {
                    let meet = intersection(cover, i, j);
                    if meet.is_empty() {
                        continue;
                    }
                    let mut witnesses = Vec::new();
                    let mut reached = PointSet::new();
                    for &p in &meet {
                        let probe = space.down_set(p);
                        if complete(x, i, j, &probe).is_some() {
                            reached.extend(probe.iter().copied());
                            witnesses.push(Probe::Open(probe));
                        }
                    }
                    let residue = meet.difference(&reached).copied().collect();
                    pairs.push(PairReport {
                        pair: (i, j),
                        witnesses,
                        residue,
                    });
                }
            }
        }
    }
    let covering = pairs.iter().all(|p| p.residue.is_empty());
    Ok(CoveringReport { covering, pairs })
}
