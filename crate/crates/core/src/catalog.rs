//! Small named complexes used throughout tests, docs and the CLI.

use std::sync::Arc;

use crate::complex::{maximal_faces, Simplex, SimplicialComplex, VertexId};

fn letter(i: usize) -> char {
    (b'a' + i as u8) as char
}

/// Labels `a, ap, b, bp, ...` for the vertices `0, 1, 2, 3, ...` of a cross-polytope.
fn cross_labels(n: usize) -> Arc<Vec<String>> {
    Arc::new((0..n).flat_map(|i| [letter(i).to_string(), format!("{}p", letter(i))]).collect())
}

/// The `n`-fold join of `S⁰` with itself, the boundary of the `n`-dimensional
/// cross-polytope. Vertex `2i` is the `i`-th letter and `2i + 1` its primed copy.
pub fn cross_polytope(n: usize) -> SimplicialComplex {
    assert!((1..=12).contains(&n));
    let facets = (0u32..(1 << n))
        .map(|mask| {
            Simplex::from_sorted((0..n).map(|i| 2 * i as VertexId + ((mask >> i) & 1)).collect())
        })
        .collect();
    SimplicialComplex::from_maximal(maximal_faces(facets)).with_labels(cross_labels(n))
}

/// `(S⁰)*ⁿ` without its facet on the unprimed vertices.
pub fn cross_polytope_minus_facet(n: usize) -> SimplicialComplex {
    assert!((2..=12).contains(&n));
    let full = cross_polytope(n);
    let removed: Vec<VertexId> = (0..n as VertexId).map(|i| 2 * i).collect();
    let facets = full.facets().iter().filter(|f| f.vertices() != removed.as_slice()).cloned().collect();
    SimplicialComplex::from_maximal(facets).with_labels(cross_labels(n))
}

/// The octahedron boundary `S⁰ * S⁰ * S⁰`.
pub fn octahedron() -> SimplicialComplex {
    cross_polytope(3)
}

/// The octahedron boundary minus the facet `{a, b, c}`: a collapsible,
/// non-evasive, minimal complex.
pub fn octahedron_minus_facet() -> SimplicialComplex {
    cross_polytope_minus_facet(3)
}

/// The cycle graph on `n >= 3` vertices.
pub fn cycle(n: usize) -> SimplicialComplex {
    assert!(n >= 3);
    let edges = (0..n as VertexId)
        .map(|i| Simplex::new(vec![i, (i + 1) % n as VertexId]).unwrap())
        .collect();
    SimplicialComplex::from_maximal(maximal_faces(edges))
}

/// The path graph with `n >= 1` edges.
pub fn path(n: usize) -> SimplicialComplex {
    assert!(n >= 1);
    let edges = (0..n as VertexId).map(|i| Simplex::from_sorted(vec![i, i + 1])).collect();
    SimplicialComplex::from_maximal(maximal_faces(edges))
}

/// Two isolated vertices.
pub fn sphere0() -> SimplicialComplex {
    SimplicialComplex::from_maximal(vec![Simplex::vertex(0), Simplex::vertex(1)])
}

/// A collapsible but evasive 2-complex on six vertices, found by growing
/// random elementary expansions. Every vertex link is a non-cone.
pub fn collapsible_evasive() -> SimplicialComplex {
    let facets: [[VertexId; 3]; 10] = [
        [0, 1, 2],
        [0, 1, 4],
        [0, 2, 3],
        [0, 2, 5],
        [0, 3, 4],
        [1, 2, 5],
        [1, 3, 4],
        [1, 3, 5],
        [2, 4, 5],
        [3, 4, 5],
    ];
    SimplicialComplex::from_maximal(facets.iter().map(|f| Simplex::from_sorted(f.to_vec())).collect())
}

/// A dunce hat: a triangle whose three sides are glued along one edge
/// path `0 1 2`, with a ring of nine vertices `3..=11` inside the boundary
/// and a centre `12`. Contractible, with no free faces.
pub fn dunce_hat() -> SimplicialComplex {
    let rim: [VertexId; 9] = [0, 1, 2, 0, 1, 2, 0, 2, 1];
    let mut facets = Vec::new();
    for i in 0..9 {
        let j = (i + 1) % 9;
        let (p, q) = (3 + i as VertexId, 3 + j as VertexId);
        facets.push(vec![rim[i], rim[j], p]);
        facets.push(vec![rim[j], p, q]);
        facets.push(vec![p, q, 12]);
    }
    SimplicialComplex::new(facets).unwrap()
}

/// The dunce hat with vertex `0` doubled by a twin `13`. It is collapsible
/// and its core is the dunce hat.
pub fn doubled_dunce_hat() -> SimplicialComplex {
    let facets = dunce_hat().facets().iter().map(|f| if f.contains(0) { f.with(13) } else { f.clone() }).collect();
    SimplicialComplex::from_maximal(facets)
}

/// A cone with apex `0` over `base`.
pub fn cone(base: &SimplicialComplex) -> SimplicialComplex {
    SimplicialComplex::point().join(base)
}
