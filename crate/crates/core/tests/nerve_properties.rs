mod common;

use proptest::prelude::*;
use shtop_core::nerve::{
    core_via_nerve, embed_square_nerve, maximal_intersecting_families, nerve, nerve_tower,
    strong_collapsible_via_nerve,
};
use shtop_core::strong::{core, is_minimal, is_strong_collapsible};
use shtop_core::workbench::{verify_trace_exact, Object};
use shtop_core::{catalog, is_isomorphic, SimplicialComplex};

use common::*;

fn iso(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    is_isomorphic(a, b).unwrap().is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn families_are_maximal_with_common_vertices(k in arb_grown(6, 6, 2)) {
        let fs: Vec<Set> = k.facets().iter().map(|f| f.vertices().iter().copied().collect()).collect();
        let families = maximal_intersecting_families(&k);
        for fam in &families {
            let members: Vec<&Set> = fam.vertices().iter().map(|&i| &fs[i as usize]).collect();
            let common = members.iter().skip(1).fold(members[0].clone(), |acc, s| &acc & *s);
            prop_assert!(!common.is_empty());
            for (j, f) in fs.iter().enumerate() {
                if !fam.contains(j as u32) {
                    prop_assert!((&common & f).is_empty());
                }
            }
        }
        let n = nerve(&k);
        prop_assert_eq!(n.n_vertices(), k.n_facets());
        prop_assert_eq!(n.n_facets(), families.len());
    }

    #[test]
    fn even_tower_shrinks_until_it_is_stable(k in arb_grown(6, 6, 3)) {
        let tower = nerve_tower(&k, 12).unwrap();
        prop_assert_eq!(&tower[0], &k);
        let even: Vec<&SimplicialComplex> = tower.iter().step_by(2).collect();
        for w in even.windows(2) {
            prop_assert!(w[1].n_vertices() <= w[0].n_vertices());
            prop_assert_eq!(w[1].n_vertices() == w[0].n_vertices(), iso(w[0], w[1]));
        }
        let mut cur = k.clone();
        for _ in 0..8 {
            let next = nerve(&nerve(&cur));
            prop_assert!(next.n_vertices() <= cur.n_vertices());
            prop_assert_eq!(next.n_vertices() == cur.n_vertices(), iso(&next, &cur));
            cur = next;
        }
    }

    #[test]
    fn square_nerve_sits_inside(k in arb_grown(7, 6, 3)) {
        let e = embed_square_nerve(&k).unwrap();
        prop_assert!(e.image.is_full_subcomplex_of(&k));
        prop_assert!(iso(&e.image, &nerve(&nerve(&k))));
        prop_assert_eq!(e.map.target(), &k);
        let f = facets(&k);
        for &v in k.vertices() {
            if !e.image.contains_vertex(v) {
                prop_assert!(e.image.vertices().iter().any(|&w| dominated_by(&f, v, w)));
            }
        }
        prop_assert!(verify_trace_exact(&Object::Complex(k.clone()), &e.trace, &Object::Complex(e.image)).valid);
        prop_assert_eq!(is_minimal(&k), e.trace.is_empty());
    }

    #[test]
    fn nerves_find_the_core(k in arb_grown(7, 6, 3)) {
        prop_assert!(iso(&core_via_nerve(&k), &core(&k).0));
        prop_assert_eq!(strong_collapsible_via_nerve(&k).unwrap(), is_strong_collapsible(&k));
        prop_assert_eq!(is_minimal(&k), iso(&nerve(&nerve(&k)), &k));
    }
}

#[test]
fn examples() {
    assert!(nerve(&SimplicialComplex::simplex(3)).is_point());
    let b = SimplicialComplex::boundary(2);
    assert!(iso(&nerve(&b), &b));
    let tower = nerve_tower(&b, 10).unwrap();
    assert!(tower.len() <= 3 && tower.iter().all(|t| iso(t, &b)));
    let d2 = nerve_tower(&SimplicialComplex::simplex(2), 10).unwrap();
    assert_eq!(d2.len(), 2);
    assert!(d2[1].is_point());

    let omf = catalog::octahedron_minus_facet();
    let n = nerve(&omf);
    assert_eq!(n.n_vertices(), 7);
    assert!(n.n_vertices() > omf.n_vertices());
    assert!(iso(&nerve(&n), &omf));
    assert!(nerve_tower(&omf, 20).unwrap().iter().all(|t| !t.is_point()));
    assert!(iso(&core_via_nerve(&omf), &omf));
    assert!(!strong_collapsible_via_nerve(&b).unwrap());

    let e = embed_square_nerve(&SimplicialComplex::simplex(2)).unwrap();
    assert!(e.image.is_point());
    assert_eq!(e.trace.len(), 2);
    let e = embed_square_nerve(&omf).unwrap();
    assert_eq!(e.image, omf);
    assert!(e.trace.is_empty());
    assert!(core_via_nerve(&catalog::cone(&b)).is_point());
}
