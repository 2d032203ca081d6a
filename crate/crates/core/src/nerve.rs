//! Nerves, the nerve tower and the strong collapse onto `N²(K)`.

use std::collections::BTreeMap;

use crate::canon::is_isomorphic_with;
use crate::complex::{Simplex, SimplicialComplex, SimplicialMap, VertexId};
use crate::error::{Error, Result};
use crate::search::DEFAULT_BUDGET;
use crate::strong::{dominators, is_dominated};
use crate::trace::{Move, MoveTrace};

/// Indices (into `k.facets()`) of the facets containing `v`.
fn star_family(k: &SimplicialComplex, v: VertexId) -> Vec<VertexId> {
    k.facets().iter().enumerate().filter(|(_, f)| f.contains(v)).map(|(i, _)| i as VertexId).collect()
}

/// The maximal families of facets with non-empty intersection, as sorted
/// index sets. Every such family is the set of facets through some vertex.
pub fn maximal_intersecting_families(k: &SimplicialComplex) -> Vec<Simplex> {
    let families = k.vertices().iter().map(|&v| Simplex::new(star_family(k, v)).unwrap()).collect();
    SimplicialComplex::from_simplices(families).unwrap().facets().to_vec()
}

/// The nerve: vertex `i` is the `i`-th facet of `k` in sorted order.
pub fn nerve(k: &SimplicialComplex) -> SimplicialComplex {
    SimplicialComplex::from_simplices(maximal_intersecting_families(k)).unwrap()
}

/// `[K, N(K), N²(K), ...]` with at most `max_steps` applications, stopping
/// at a point or once an even entry is isomorphic to the previous even one.
pub fn nerve_tower(k: &SimplicialComplex, max_steps: usize) -> Result<Vec<SimplicialComplex>> {
    nerve_tower_with(k, max_steps, DEFAULT_BUDGET)
}

pub fn nerve_tower_with(k: &SimplicialComplex, max_steps: usize, budget: u64) -> Result<Vec<SimplicialComplex>> {
    if max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
    }
    let mut tower = vec![k.clone()];
    for i in 1..=max_steps {
        let last = tower.last().unwrap();
        if last.is_point() {
            break;
        }
        let next = nerve(last);
        tower.push(next);
        if i % 2 == 0 {
            let (a, b) = (&tower[i - 2], &tower[i]);
            if a.n_vertices() == b.n_vertices() && is_isomorphic_with(a, b, budget)?.is_some() {
                break;
            }
        }
    }
    Ok(tower)
}

/// `N²(K)` realized inside `K`.
#[derive(Clone, Debug)]
pub struct NerveEmbedding {
    /// The injective map `N²(K) → K`.
    pub map: SimplicialMap,
    /// The full subcomplex of `K` spanned by the image.
    pub image: SimplicialComplex,
    /// Strong collapses from `K` onto `image`.
    pub trace: MoveTrace,
}

/// Embeds `N²(K)` in `K`, sending each maximal family to the smallest
/// non-dominated vertex of its intersection (the smallest vertex when all
/// are dominated), and strong-collapses `K` onto the image.
pub fn embed_square_nerve(k: &SimplicialComplex) -> Result<NerveEmbedding> {
    let n1 = nerve(k);
    let n2 = nerve(&n1);
    let mut phi = BTreeMap::new();
    for (i, family) in n1.facets().iter().enumerate() {
        let common: Vec<VertexId> = k
            .vertices()
            .iter()
            .copied()
            .filter(|&v| family.vertices().iter().all(|&f| k.facets()[f as usize].contains(v)))
            .collect();
        let chosen = common.iter().copied().find(|&v| !is_dominated(k, v)).unwrap_or(common[0]);
        phi.insert(i as VertexId, chosen);
    }
    let kept: Vec<VertexId> = phi.values().copied().collect();
    let image = k.induced(&kept)?;
    let map = SimplicialMap::new(n2, k.clone(), phi)?;
    let mut kept = kept;
    kept.sort_unstable();
    let mut cur = k.clone();
    let mut trace = MoveTrace::new();
    for &v in k.vertices() {
        if kept.binary_search(&v).is_ok() {
            continue;
        }
        let w = dominators(&cur, v)
            .into_iter()
            .find(|u| kept.binary_search(u).is_ok())
            .ok_or(Error::InvalidWitness { dominated: v, dominator: v })?;
        cur = cur.delete_vertex(v)?;
        trace.push(Move::strong_delete(v, w));
    }
    debug_assert_eq!(cur, image);
    Ok(NerveEmbedding { map, image, trace })
}

/// Iterates `N²` until the vertex count stops dropping; the result is
/// isomorphic to the core.
pub fn core_via_nerve(k: &SimplicialComplex) -> SimplicialComplex {
    let mut cur = k.clone();
    loop {
        let next = nerve(&nerve(&cur));
        if next.n_vertices() == cur.n_vertices() {
            return cur;
        }
        cur = next;
    }
}

/// True iff some iterated nerve of `k` is a point.
pub fn strong_collapsible_via_nerve(k: &SimplicialComplex) -> Result<bool> {
    let steps = 2 * k.n_vertices() + 2;
    Ok(nerve_tower(k, steps)?.last().unwrap().is_point())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::complex::VertexId;

    fn iso(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
        crate::canon::is_isomorphic(a, b).unwrap().is_some()
    }

    #[test]
    fn nerve_examples() {
        assert!(nerve(&SimplicialComplex::simplex(3)).is_point());
        let b = SimplicialComplex::boundary(2);
        assert!(iso(&nerve(&b), &b));
        let k = catalog::octahedron_minus_facet();
        let n = nerve(&k);
        assert_eq!(n.n_vertices(), 7);
        assert!(iso(&nerve(&n), &k));
    }

    #[test]
    fn towers() {
        let t = nerve_tower(&SimplicialComplex::simplex(2), 10).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t[1].is_point());
        let t = nerve_tower(&SimplicialComplex::boundary(2), 10).unwrap();
        assert_eq!(t.len(), 3);
        let t = nerve_tower(&catalog::octahedron_minus_facet(), 10).unwrap();
        assert!(t.iter().all(|c| !c.is_point()));
        assert!(nerve_tower(&SimplicialComplex::point(), 0).is_err());
    }

    #[test]
    fn embedding_of_simplex_is_a_vertex() {
        let e = embed_square_nerve(&SimplicialComplex::simplex(2)).unwrap();
        assert!(e.image.is_point());
        assert_eq!(e.trace.len(), 2);
    }

    #[test]
    fn embedding_of_minimal_complex_is_everything() {
        let k = catalog::octahedron_minus_facet();
        let e = embed_square_nerve(&k).unwrap();
        assert_eq!(e.image, k);
        assert!(e.trace.is_empty());
        assert!(e.map.is_bijective());
    }

    #[test]
    fn embedding_of_grown_complex() {
        // A triangle boundary with two pendant cones attached.
        let facets: Vec<Vec<VertexId>> = vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 1, 3], vec![2, 4]];
        let k = SimplicialComplex::new(facets).unwrap();
        let e = embed_square_nerve(&k).unwrap();
        assert!(e.image.is_full_subcomplex_of(&k));
        assert!(iso(&e.image, &SimplicialComplex::boundary(2)));
        assert_eq!(e.trace.len(), 2);
    }

    #[test]
    fn core_and_collapsibility_via_nerve() {
        let c = catalog::cone(&catalog::cycle(5));
        assert!(core_via_nerve(&c).is_point());
        let k = catalog::octahedron_minus_facet();
        assert_eq!(core_via_nerve(&k), k);
        assert!(strong_collapsible_via_nerve(&SimplicialComplex::simplex(3)).unwrap());
        assert!(!strong_collapsible_via_nerve(&SimplicialComplex::boundary(2)).unwrap());
    }
}
