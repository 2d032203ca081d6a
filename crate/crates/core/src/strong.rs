//! Dominated vertices, strong collapses and cores.

use std::collections::{BTreeMap, HashSet};

use crate::canon::is_isomorphic_with;
use crate::complex::{SimplicialComplex, SimplicialMap, VertexId};
use crate::error::{Error, Result};
use crate::search::{Budget, DEFAULT_BUDGET};
use crate::trace::{DominationWitness, Move, MoveTrace};

/// Vertices other than `v` lying in every facet that contains `v`.
pub fn dominators(k: &SimplicialComplex, v: VertexId) -> Vec<VertexId> {
    let mut facets = k.facets_containing(v);
    let Some(first) = facets.next() else {
        return Vec::new();
    };
    let mut common: Vec<VertexId> = first.vertices().iter().copied().filter(|&u| u != v).collect();
    for f in facets {
        common.retain(|&u| f.contains(u));
        if common.is_empty() {
            break;
        }
    }
    common
}

/// Every domination pair, sorted by (dominated, dominator).
pub fn dominated_vertices(k: &SimplicialComplex) -> Vec<DominationWitness> {
    k.vertices()
        .iter()
        .flat_map(|&v| dominators(k, v).into_iter().map(move |w| DominationWitness { dominated: v, dominator: w }))
        .collect()
}

pub fn is_dominated(k: &SimplicialComplex, v: VertexId) -> bool {
    !dominators(k, v).is_empty()
}

pub fn is_minimal(k: &SimplicialComplex) -> bool {
    k.vertices().iter().all(|&v| !is_dominated(k, v))
}

/// Checks `w` against `k`.
pub fn check_witness(k: &SimplicialComplex, w: DominationWitness) -> Result<()> {
    let valid = w.dominated != w.dominator
        && k.contains_vertex(w.dominated)
        && k.contains_vertex(w.dominator)
        && k.facets_containing(w.dominated).all(|f| f.contains(w.dominator));
    if valid {
        Ok(())
    } else {
        Err(Error::InvalidWitness { dominated: w.dominated, dominator: w.dominator })
    }
}

/// Deletes dominated vertices until none is left, letting `choose` pick which
/// witness to apply from the current (sorted, non-empty) list.
pub fn core_by(
    k: &SimplicialComplex,
    mut choose: impl FnMut(&[DominationWitness]) -> usize,
) -> (SimplicialComplex, MoveTrace) {
    let mut cur = k.clone();
    let mut trace = MoveTrace::new();
    loop {
        let ws = dominated_vertices(&cur);
        if ws.is_empty() {
            return (cur, trace);
        }
        let w = ws[choose(&ws)];
        cur = cur.delete_vertex(w.dominated).expect("a dominated vertex is never the last one");
        trace.push(Move::StrongDelete(w));
    }
}

/// The core reached by always deleting the smallest dominated vertex (with
/// its smallest dominator).
pub fn core(k: &SimplicialComplex) -> (SimplicialComplex, MoveTrace) {
    core_by(k, |_| 0)
}

pub fn is_strong_collapsible(k: &SimplicialComplex) -> bool {
    core(k).0.is_point()
}

/// Searches for strong collapses from `k` ending exactly at the full
/// subcomplex `l`.
pub fn strong_collapses_to(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Option<MoveTrace>> {
    strong_collapses_to_with(k, l, DEFAULT_BUDGET)
}

pub fn strong_collapses_to_with(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    budget: u64,
) -> Result<Option<MoveTrace>> {
    if !l.is_full_subcomplex_of(k) {
        return Err(Error::NotFullSubcomplex(format!("{l:?} in {k:?}")));
    }
    let mut search = ToSubcomplex { target: l.vertices(), budget: Budget::new(budget), dead: HashSet::new() };
    let mut moves = Vec::new();
    Ok(search.dfs(k, &mut moves)?.then(|| moves.into_iter().collect()))
}

struct ToSubcomplex<'a> {
    target: &'a [VertexId],
    budget: Budget,
    dead: HashSet<Vec<VertexId>>,
}

impl ToSubcomplex<'_> {
    fn dfs(&mut self, cur: &SimplicialComplex, moves: &mut Vec<Move>) -> Result<bool> {
        if cur.vertices() == self.target {
            return Ok(true);
        }
        if self.dead.contains(cur.vertices()) {
            return Ok(false);
        }
        self.budget.tick()?;
        for &v in cur.vertices() {
            if self.target.binary_search(&v).is_ok() {
                continue;
            }
            let ds = dominators(cur, v);
            // Prefer a dominator that stays: it keeps dominating after later deletions.
            let Some(&w) = ds.iter().find(|u| self.target.binary_search(u).is_ok()).or(ds.first()) else {
                continue;
            };
            moves.push(Move::strong_delete(v, w));
            if self.dfs(&cur.delete_vertex(v)?, moves)? {
                return Ok(true);
            }
            moves.pop();
        }
        self.dead.insert(cur.vertices().to_vec());
        Ok(false)
    }
}

/// Strong homotopy equivalence, decided by comparing cores.
pub fn same_strong_homotopy_type(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<bool> {
    Ok(is_isomorphic_with(&core(k).0, &core(l).0, DEFAULT_BUDGET)?.is_some())
}

/// The retraction `k → k ∖ dominated` sending the dominated vertex to its dominator.
pub fn domination_retraction(k: &SimplicialComplex, w: DominationWitness) -> Result<SimplicialMap> {
    check_witness(k, w)?;
    let target = k.delete_vertex(w.dominated)?;
    let map: BTreeMap<VertexId, VertexId> =
        k.vertices().iter().map(|&v| (v, if v == w.dominated { w.dominator } else { v })).collect();
    SimplicialMap::new(k.clone(), target, map)
}
