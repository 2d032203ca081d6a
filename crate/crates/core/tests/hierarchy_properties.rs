mod common;

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use rand::Rng;
use shtop_core::collapse::{
    self, collapse_level, elementary_collapse, expand_strong_trace, free_faces, is_collapsible, ne_collapses_to,
    welker_pipeline, CollapseEngine, CollapseLevel,
};
use shtop_core::poset::{face_poset, order_complex, poset_non_evasive, FinitePoset};
use shtop_core::strong::{core, is_strong_collapsible};
use shtop_core::workbench::{replay_trace, verify_trace_exact, Object};
use shtop_core::{catalog, Answer, Move, SimplicialComplex};

use common::*;

fn yes(a: Answer) -> bool {
    assert_ne!(a, Answer::Unknown);
    a.is_yes()
}

/// Non-evasiveness of a poset straight from the recursive definition.
fn poset_ne(o: &Order, memo: &mut HashMap<Order, bool>) -> bool {
    if o.elems.len() == 1 {
        return true;
    }
    if let Some(&b) = memo.get(o) {
        return b;
    }
    let b = o.elems.iter().any(|&x| {
        let link: Set = o.elems.iter().copied().filter(|&y| o.lt.contains(&(x, y)) || o.lt.contains(&(y, x))).collect();
        !link.is_empty() && poset_ne(&o.restrict(&link), memo) && poset_ne(&o.without(x), memo)
    });
    memo.insert(o.clone(), b);
    b
}

/// Whether `target` is reachable by removing points with non-evasive links.
fn poset_ne_reachable(o: &Order, target: &Set, seen: &mut BTreeSet<Set>, memo: &mut HashMap<Order, bool>) -> bool {
    if &o.elems == target {
        return true;
    }
    if !seen.insert(o.elems.clone()) {
        return false;
    }
    let candidates: Vec<u32> = o.elems.difference(target).copied().collect();
    candidates.into_iter().any(|x| {
        let link: Set = o.elems.iter().copied().filter(|&y| o.lt.contains(&(x, y)) || o.lt.contains(&(y, x))).collect();
        !link.is_empty() && poset_ne(&o.restrict(&link), memo) && poset_ne_reachable(&o.without(x), target, seen, memo)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn levels_are_monotone_and_match_definition(k in arb_grown(6, 5, 2)) {
        let f = facets(&k);
        let mut memo = HashMap::new();
        let mut prev = false;
        for n in 0..=3 {
            let (a, t) = collapse::n_collapsible(&k, n).unwrap();
            let b = yes(a);
            prop_assert!(!prev || b);
            prop_assert_eq!(b, n_collapsible(&f, n, &mut memo));
            if let Some(t) = t {
                prop_assert_eq!(failing_index(&Object::Complex(k.clone()), t.moves()), None);
            }
            prev = b;
        }
        prop_assert_eq!(yes(collapse::n_collapsible(&k, 0).unwrap().0), is_strong_collapsible(&k));
        let ne = yes(collapse::non_evasive(&k).unwrap());
        prop_assert_eq!(ne, non_evasive(&f, &mut memo));
        let top = (k.dim() as u32).saturating_sub(1);
        for n in top..top + 2 {
            prop_assert_eq!(yes(collapse::n_collapsible(&k, n).unwrap().0), ne);
        }
        match collapse_level(&k).unwrap() {
            CollapseLevel::Level(n) => {
                prop_assert!(ne);
                prop_assert!(n == 0 || !n_collapsible(&f, n - 1, &mut memo));
            }
            CollapseLevel::Evasive => prop_assert!(!ne),
            CollapseLevel::Unknown => prop_assert!(false),
        }
    }

    #[test]
    fn collapsibility_matches_exhaustive_search(k in arb_grown(5, 5, 1)) {
        let all = closure(&facets(&k));
        let (a, t) = is_collapsible(&k).unwrap();
        prop_assert_eq!(yes(a), collapsible_exhaustive(&all, &mut HashMap::new()));
        if let Some(t) = t {
            prop_assert_eq!(failing_index(&Object::Complex(k.clone()), t.moves()), None);
            let end = replay_trace(&Object::Complex(k.clone()), &t).unwrap();
            prop_assert!(matches!(end, Object::Complex(c) if c.is_point()));
        }
        if yes(collapse::non_evasive(&k).unwrap()) {
            prop_assert!(yes(a));
        }
    }

    #[test]
    fn free_faces_match_definition(k in arb_complex(6, 6)) {
        let all = closure(&facets(&k));
        let mut expected = Vec::new();
        for tau in &all {
            for &v in tau {
                let mut sigma = tau.clone();
                sigma.remove(&v);
                if !sigma.is_empty() && is_free(&all, &sigma, tau) {
                    expected.push((sigma, tau.clone()));
                }
            }
        }
        expected.sort();
        let mut got: Vec<(Set, Set)> = free_faces(&k)
            .into_iter()
            .map(|(s, t)| (s.vertices().iter().copied().collect(), t.vertices().iter().copied().collect()))
            .collect();
        got.sort();
        prop_assert_eq!(&got, &expected);
        for (s, t) in free_faces(&k) {
            let after = elementary_collapse(&k, &s, &t).unwrap();
            let mut rest = all.clone();
            rest.remove(&s.vertices().iter().copied().collect::<Set>());
            rest.remove(&t.vertices().iter().copied().collect::<Set>());
            prop_assert_eq!(closure(&facets(&after)), rest);
        }
    }

    #[test]
    fn collapses_give_one_collapses_of_subdivisions(k in arb_grown(4, 4, 1)) {
        let (a, t) = is_collapsible(&k).unwrap();
        if let Some(t) = t {
            prop_assert!(a.is_yes());
            let w = welker_pipeline(&k, &t).unwrap();
            prop_assert!(w.target.is_point());
            let level_one = w.trace.iter().all(|m| matches!(m, Move::NeDelete { level: 1, .. }));
            prop_assert!(level_one);
            let v = verify_trace_exact(&Object::Complex(w.subdivision.clone()), &w.trace, &Object::Complex(w.target));
            prop_assert!(v.valid);
            prop_assert_eq!(failing_index(&Object::Complex(w.subdivision), w.trace.moves()), None);
        }
    }

    // NE removals in a finite space are NE deletions of its order complex.
    #[test]
    fn ne_collapses_of_spaces_transfer(x in arb_poset(7), seed in any::<u64>(), steps in 1usize..4) {
        let mut r = rng(seed);
        let mut cur = x.clone();
        for _ in 0..steps {
            let ok: Vec<u32> = cur
                .elements()
                .iter()
                .copied()
                .filter(|&e| cur.link_space(e).unwrap().is_some_and(|l| poset_non_evasive(&l).unwrap()))
                .collect();
            if ok.is_empty() || cur.n_elements() == 1 {
                break;
            }
            cur = cur.delete(ok[r.random_range(0..ok.len())]).unwrap();
        }
        let (kx, ky) = (order_complex(&x), order_complex(&cur));
        let t = ne_collapses_to(&kx, &ky).unwrap();
        prop_assert!(t.is_some());
        prop_assert_eq!(failing_index(&Object::Complex(kx.clone()), t.as_ref().unwrap().moves()), None);
        prop_assert!(verify_trace_exact(&Object::Complex(kx), &t.unwrap(), &Object::Complex(ky)).valid);
    }

    // NE deletions of a complex are NE removals between face posets.
    #[test]
    fn ne_collapses_of_complexes_transfer(k in arb_complex(4, 3), seed in any::<u64>(), steps in 1usize..3) {
        let mut r = rng(seed);
        let mut memo = HashMap::new();
        let mut cur = facets(&k);
        for _ in 0..steps {
            let n = verts(&cur).len() as u32;
            let ok: Vec<u32> = verts(&cur).into_iter().filter(|&v| n > 1 && ne_ok(&cur, v, n, &mut memo)).collect();
            if ok.is_empty() {
                break;
            }
            cur = delete(&cur, ok[r.random_range(0..ok.len())]);
        }
        let l = SimplicialComplex::new(cur.iter().map(|s| s.iter().copied().collect::<Vec<_>>())).unwrap();
        prop_assert!(ne_collapses_to(&k, &l).unwrap().is_some());
        let fp = face_poset(&k);
        let target: Set = l.all_simplices().iter().map(|s| fp.element_of(s).unwrap()).collect();
        let mut pm = HashMap::new();
        prop_assert!(poset_ne_reachable(&Order::of(&fp.poset), &target, &mut BTreeSet::new(), &mut pm));
    }

    #[test]
    fn poset_non_evasiveness_matches_definition(x in arb_poset(6)) {
        prop_assert_eq!(poset_non_evasive(&x).unwrap(), poset_ne(&Order::of(&x), &mut HashMap::new()));
        prop_assert_eq!(poset_non_evasive(&x).unwrap(), yes(collapse::non_evasive(&order_complex(&x)).unwrap()));
    }
}

/// Collapsible yet evasive, certified both ways.
#[test]
fn collapsible_evasive_complex() {
    let k = catalog::collapsible_evasive();
    assert_eq!((k.n_vertices(), k.n_facets(), k.dim()), (6, 10, 2));
    let (a, t) = is_collapsible(&k).unwrap();
    assert!(a.is_yes());
    assert_eq!(failing_index(&Object::Complex(k.clone()), t.unwrap().moves()), None);
    let f = facets(&k);
    let mut memo = HashMap::new();
    assert!(!non_evasive(&f, &mut memo));
    assert!(collapse::non_evasive(&k).unwrap().is_no());
    assert_eq!(collapse_level(&k).unwrap(), CollapseLevel::Evasive);
    for &v in k.vertices() {
        assert!(!k.link(v).unwrap().unwrap().is_cone());
        let (a, _) = collapse::n_collapsible(&k.link(v).unwrap().unwrap(), 0).unwrap();
        let deleted = collapse::non_evasive(&k.delete_vertex(v).unwrap()).unwrap();
        assert!(a.is_no() || deleted.is_no());
    }
    assert!(free_faces(&k).iter().any(|(s, _)| s.len() == 2));
    assert!(!is_strong_collapsible(&k));
    assert_eq!(core(&k).0, k);
}

/// The dunce hat is contractible but has nothing to collapse; doubling a
/// vertex makes it collapsible without changing its core.
#[test]
fn dunce_hats() {
    let d = catalog::dunce_hat();
    assert_eq!((d.n_vertices(), d.n_facets(), d.euler_characteristic()), (13, 27, 1));
    assert!(shtop_core::collapse::is_z2_acyclic(&d));
    assert!(free_faces(&d).is_empty());
    assert!(is_collapsible(&d).unwrap().0.is_no());
    assert!(collapse::non_evasive(&d).unwrap().is_no());
    let k = catalog::doubled_dunce_hat();
    assert_eq!(k.n_vertices(), 14);
    assert!(shtop_core::is_isomorphic(&core(&k).0, &d).unwrap().is_some());
    let (a, t) = is_collapsible(&k).unwrap();
    assert!(a.is_yes());
    assert_eq!(failing_index(&Object::Complex(k.clone()), t.unwrap().moves()), None);
    assert_eq!(collapse_level(&k).unwrap(), CollapseLevel::Evasive);
}

#[test]
fn engine_reports_unknown_in_band() {
    let mut e = CollapseEngine::new(50);
    assert_eq!(e.is_collapsible(&catalog::doubled_dunce_hat()).unwrap().0, Answer::Unknown);
    assert!(e.nodes_used() > 50);
    let k = catalog::cross_polytope_minus_facet(4);
    let mut e = CollapseEngine::new(1_000_000);
    assert_eq!(e.collapse_level(&k).unwrap(), CollapseLevel::Level(2));
    assert!(e.nodes_used() > 0);
}

#[test]
fn examples() {
    let d2 = SimplicialComplex::simplex(2);
    assert_eq!(free_faces(&d2).len(), 3);
    assert!(free_faces(&SimplicialComplex::boundary(2)).is_empty());
    assert!(is_collapsible(&SimplicialComplex::boundary(2)).unwrap().0.is_no());
    let (_, t) = core(&d2);
    let e = expand_strong_trace(&t, &d2).unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!(e.len(), 3);
    assert!(verify_trace_exact(&Object::Complex(d2.clone()), &e, &Object::Complex(core(&d2).0)).valid);

    let d1 = SimplicialComplex::simplex(1);
    let (_, t) = is_collapsible(&d1).unwrap();
    let w = welker_pipeline(&d1, &t.unwrap()).unwrap();
    assert_eq!(w.trace.len(), 2);
    assert_eq!(w.subdivision.n_vertices(), 3);

    let omf = catalog::octahedron_minus_facet();
    assert_eq!(collapse_level(&omf).unwrap(), CollapseLevel::Level(1));
    assert_eq!(collapse_level(&SimplicialComplex::point()).unwrap(), CollapseLevel::Level(0));
    assert_eq!(collapse_level(&SimplicialComplex::simplex(3)).unwrap(), CollapseLevel::Level(0));
    assert_eq!(collapse_level(&SimplicialComplex::boundary(2)).unwrap(), CollapseLevel::Evasive);
    assert_eq!(collapse_level(&catalog::cycle(5)).unwrap().level(), None);
    assert_eq!(collapse::n_collapsible(&catalog::path(3), 0).unwrap().0, Answer::Yes);

    // A point glued to the octahedron minus a facet: the link of the new
    // vertex is a point, so it goes first at level 0.
    let mut fs: Vec<Vec<u32>> = omf.facets().iter().map(|f| f.vertices().to_vec()).collect();
    fs.push(vec![0, 99]);
    let k = SimplicialComplex::new(fs).unwrap();
    let t = ne_collapses_to(&k, &omf).unwrap().unwrap();
    assert_eq!(t.moves(), &[Move::NeDelete { vertex: 99, level: 0 }]);
    assert!(ne_collapses_to(&omf, &SimplicialComplex::new([vec![0u32]]).unwrap()).unwrap().is_some());
    assert!(ne_collapses_to(&SimplicialComplex::boundary(2), &SimplicialComplex::new([vec![0u32, 1]]).unwrap()).unwrap().is_none());

    let s0 = face_poset(&catalog::sphere0()).poset;
    assert!(!poset_non_evasive(&s0).unwrap());
    let v = FinitePoset::new(0..3, [(0, 2), (1, 2)]).unwrap();
    assert!(poset_non_evasive(&v).unwrap());
}
