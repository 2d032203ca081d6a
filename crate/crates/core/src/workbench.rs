//! Seeded generators, exhaustive enumeration, a brute-force oracle and the
//! trace verifier.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::is_isomorphic_with;
use crate::collapse::{ne_side_condition, CollapseEngine};
use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::poset::{poset_canonical_form, ElementId, FinitePoset};
use crate::search::DEFAULT_BUDGET;
use crate::strong::check_witness;
use crate::symmetry::multiple;
use crate::trace::{Direction, Move, MoveTrace};

/// Edge probability used for uniform random posets.
const RELATION_DENSITY: f64 = 0.4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenMode {
    UniformFacets,
    GrownByDomination,
    GrownByBeatPoints,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_vertices: usize,
    pub max_facets: usize,
    /// Inclusive bounds on facet size, clamped to the vertex count.
    pub facet_size_range: (usize, usize),
    pub mode: GenMode,
}

impl GeneratorConfig {
    pub fn new(seed: u64, max_vertices: usize, mode: GenMode) -> Self {
        GeneratorConfig { seed, max_vertices, max_facets: max_vertices + 2, facet_size_range: (1, 4), mode }
    }
}

/// A deterministic stream of random objects.
pub struct Generator {
    cfg: GeneratorConfig,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(cfg: GeneratorConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Generator { cfg, rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn uniform_complex(&mut self, max_vertices: usize) -> SimplicialComplex {
        let n = self.rng.random_range(1..=max_vertices.max(1));
        let m = self.rng.random_range(1..=self.cfg.max_facets.max(1));
        let (lo, hi) = self.cfg.facet_size_range;
        let (lo, hi) = (lo.clamp(1, n), hi.clamp(1, n).max(lo.clamp(1, n)));
        let facets: Vec<Vec<VertexId>> = (0..m)
            .map(|_| {
                let s = self.rng.random_range(lo..=hi);
                sample(&mut self.rng, n, s).into_iter().map(|v| v as VertexId).collect()
            })
            .collect();
        SimplicialComplex::new(facets).unwrap().compact().0
    }

    pub fn complex(&mut self) -> SimplicialComplex {
        let max = self.cfg.max_vertices.max(1);
        match self.cfg.mode {
            GenMode::UniformFacets | GenMode::GrownByBeatPoints => self.uniform_complex(max),
            GenMode::GrownByDomination => {
                let seed = self.uniform_complex(max.div_ceil(2));
                let room = max - seed.n_vertices();
                let additions = if room == 0 { 0 } else { self.rng.random_range(1..=room) };
                grow_by_domination(&seed, additions, &mut self.rng)
            }
        }
    }

    fn uniform_poset(&mut self, max_elements: usize) -> FinitePoset {
        let n = self.rng.random_range(1..=max_elements.max(1)) as ElementId;
        let mut less = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.rng.random_bool(RELATION_DENSITY) {
                    less.push((i, j));
                }
            }
        }
        FinitePoset::new(0..n, less).unwrap()
    }

    pub fn poset(&mut self) -> FinitePoset {
        let max = self.cfg.max_vertices.max(1);
        match self.cfg.mode {
            GenMode::UniformFacets | GenMode::GrownByDomination => self.uniform_poset(max),
            GenMode::GrownByBeatPoints => {
                let seed = self.uniform_poset(max.div_ceil(2));
                let room = max - seed.n_elements();
                let additions = if room == 0 { 0 } else { self.rng.random_range(1..=room) };
                grow_by_beat_points(&seed, additions, &mut self.rng)
            }
        }
    }

    /// A complex on at most `max_vertices` vertices whose automorphism group
    /// contains a transitive group: orbits of random facets under a cyclic,
    /// dihedral, symmetric or product group, or a multiple of such a complex.
    pub fn vertex_homogeneous(&mut self) -> SimplicialComplex {
        let max = self.cfg.max_vertices.max(1);
        let n = self.rng.random_range(1..=max);
        let divisors: Vec<usize> = (2..n).filter(|d| n % d == 0).collect();
        let kind = self.rng.random_range(0..5);
        if kind == 4 && !divisors.is_empty() {
            let d = divisors[self.rng.random_range(0..divisors.len())];
            let base = self.orbit_complex(n / d, 0);
            return multiple(&base, d as u32).unwrap().compact().0;
        }
        self.orbit_complex(n, kind)
    }

    fn orbit_complex(&mut self, n: usize, kind: usize) -> SimplicialComplex {
        let (lo, hi) = self.cfg.facet_size_range;
        let (lo, hi) = (lo.clamp(1, n), hi.clamp(1, n).max(lo.clamp(1, n)));
        if kind == 2 {
            let k = self.rng.random_range(lo..=hi);
            return k_subsets(n, k);
        }
        let group = match kind {
            1 => dihedral(n),
            3 => {
                let splits: Vec<usize> = (2..n).filter(|a| n % a == 0).collect();
                if splits.is_empty() {
                    cyclic(n)
                } else {
                    let a = splits[self.rng.random_range(0..splits.len())];
                    cyclic_product(a, n / a)
                }
            }
            _ => cyclic(n),
        };
        let bases = self.rng.random_range(1..=2);
        let mut facets = Vec::new();
        for _ in 0..bases {
            let s = self.rng.random_range(lo..=hi);
            let base: Vec<usize> = sample(&mut self.rng, n, s).into_vec();
            for g in &group {
                facets.push(base.iter().map(|&v| g[v] as VertexId).collect::<Vec<_>>());
            }
        }
        SimplicialComplex::new(facets).unwrap()
    }
}

fn cyclic(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|s| (0..n).map(|v| (v + s) % n).collect()).collect()
}

fn dihedral(n: usize) -> Vec<Vec<usize>> {
    let mut g = cyclic(n);
    g.extend((0..n).map(|s| (0..n).map(|v| (s + n - v) % n).collect()));
    g
}

fn cyclic_product(a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut g = Vec::with_capacity(a * b);
    for s in 0..a {
        for t in 0..b {
            g.push((0..a * b).map(|v| ((v / b + s) % a) * b + (v % b + t) % b).collect());
        }
    }
    g
}

fn k_subsets(n: usize, k: usize) -> SimplicialComplex {
    let facets = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n as VertexId).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>());
    SimplicialComplex::new(facets).unwrap()
}

/// The first complex of the stream for `cfg`.
pub fn gen_complex(cfg: &GeneratorConfig) -> SimplicialComplex {
    Generator::new(cfg.clone()).complex()
}

/// The first poset of the stream for `cfg`.
pub fn gen_poset(cfg: &GeneratorConfig) -> FinitePoset {
    Generator::new(cfg.clone()).poset()
}

/// Adds `additions` new vertices, each dominated at the time it is added:
/// every facet through the new vertex `v` is `T ∪ {v}` with `T` a face of a
/// facet through a fixed old vertex `w`, and `w ∈ T`.
pub fn grow_by_domination<R: Rng>(k: &SimplicialComplex, additions: usize, rng: &mut R) -> SimplicialComplex {
    let mut cur = k.clone();
    for _ in 0..additions {
        let v = cur.max_vertex() + 1;
        let w = cur.vertices()[rng.random_range(0..cur.n_vertices())];
        let star: Vec<&Simplex> = cur.facets_containing(w).collect();
        let first = rng.random_range(0..star.len());
        let mut family: Vec<Simplex> = cur.facets().to_vec();
        for (i, f) in star.iter().enumerate() {
            if i != first && !rng.random_bool(0.5) {
                continue;
            }
            let mut t: Vec<VertexId> = f.vertices().iter().copied().filter(|&u| u == w || rng.random_bool(0.5)).collect();
            t.push(v);
            family.push(Simplex::new(t).unwrap());
        }
        cur = SimplicialComplex::from_simplices(family).unwrap();
    }
    cur
}

/// Adds `additions` new elements, each a beat point when added: it covers
/// exactly one old element `y` (or dually is covered by exactly one).
pub fn grow_by_beat_points<R: Rng>(x: &FinitePoset, additions: usize, rng: &mut R) -> FinitePoset {
    let mut cur = x.clone();
    for _ in 0..additions {
        let es = cur.elements().to_vec();
        let z = es.iter().max().unwrap() + 1;
        let y = es[rng.random_range(0..es.len())];
        let down = rng.random_bool(0.5);
        let mut less: Vec<(ElementId, ElementId)> =
            es.iter().flat_map(|&a| es.iter().map(move |&b| (a, b))).filter(|&(a, b)| cur.less(a, b)).collect();
        // `z` sits just above `y` and below an up-closed part of the strict
        // up-set of `y` (dually when not `down`).
        let side: Vec<ElementId> = es.iter().copied().filter(|&u| if down { cur.less(y, u) } else { cur.less(u, y) }).collect();
        let seeds: Vec<ElementId> = side.into_iter().filter(|_| rng.random_bool(0.3)).collect();
        for &u in &es {
            let near = if down { cur.leq(u, y) } else { cur.leq(y, u) };
            let far = seeds.iter().any(|&s| if down { cur.leq(s, u) } else { cur.leq(u, s) });
            if near {
                less.push(if down { (u, z) } else { (z, u) });
            } else if far {
                less.push(if down { (z, u) } else { (u, z) });
            }
        }
        cur = FinitePoset::new(es.iter().copied().chain([z]), less).unwrap();
    }
    cur
}

/// Every poset on `n` elements up to isomorphism, with ids `0..n`. Each is
/// built from a poset on `n - 1` elements by adding a maximal element over
/// a down-closed set.
pub fn all_posets(n: usize) -> Vec<FinitePoset> {
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![FinitePoset::point()];
    for m in 1..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for p in &level {
            let less: Vec<(ElementId, ElementId)> = (0..m as ElementId)
                .flat_map(|a| (0..m as ElementId).map(move |b| (a, b)))
                .filter(|&(a, b)| p.less(a, b))
                .collect();
            for mask in 0u32..1 << m {
                let inside = |a: ElementId| mask >> a & 1 == 1;
                if less.iter().any(|&(a, b)| inside(b) && !inside(a)) {
                    continue;
                }
                let top = m as ElementId;
                let mut rel = less.clone();
                rel.extend((0..top).filter(|&a| inside(a)).map(|a| (a, top)));
                let q = FinitePoset::new(0..=top, rel).unwrap();
                if seen.insert(poset_canonical_form(&q, DEFAULT_BUDGET).unwrap().0) {
                    next.push(q);
                }
            }
        }
        level = next;
    }
    level
}

/// Exhaustive search over all sequences of dominated-vertex deletions,
/// written against facet bitmasks and sharing no code with the library.
pub fn brute_force_strong_collapsible(k: &SimplicialComplex) -> Result<bool> {
    if k.n_vertices() > 10 {
        return Err(Error::TooLarge(format!("{} vertices (limit 10)", k.n_vertices())));
    }
    let vs = k.vertices();
    let masks: Vec<u16> = k
        .facets()
        .iter()
        .map(|f| f.vertices().iter().map(|v| 1u16 << vs.binary_search(v).unwrap()).fold(0, |a, b| a | b))
        .collect();
    Ok(brute(&masks))
}

fn brute(facets: &[u16]) -> bool {
    let all = facets.iter().fold(0u16, |a, &f| a | f);
    if all.count_ones() == 1 {
        return true;
    }
    for v in 0..16 {
        let bit = 1u16 << v;
        if all & bit == 0 {
            continue;
        }
        let common = facets.iter().filter(|&&f| f & bit != 0).fold(!0u16, |a, &f| a & f) & !bit;
        if common == 0 {
            continue;
        }
        let shrunk: Vec<u16> = facets.iter().map(|&f| f & !bit).filter(|&f| f != 0).collect();
        let maximal: Vec<u16> = shrunk
            .iter()
            .enumerate()
            .filter(|&(i, &f)| !shrunk.iter().enumerate().any(|(j, &g)| g != f && g & f == f || (g == f && j < i)))
            .map(|(_, &f)| f)
            .collect();
        if brute(&maximal) {
            return true;
        }
    }
    false
}

/// A complex or a finite space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Complex(SimplicialComplex),
    Poset(FinitePoset),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Complex(_) => "complex",
            Object::Poset(_) => "poset",
        }
    }
}

/// Outcome of replaying a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceVerdict {
    pub valid: bool,
    /// Index of the first bad move; the trace length when only the end object differs.
    pub failed_at: Option<usize>,
    pub reason: Option<String>,
}

impl TraceVerdict {
    fn ok() -> Self {
        TraceVerdict { valid: true, failed_at: None, reason: None }
    }

    fn fail(index: usize, reason: impl Into<String>) -> Self {
        TraceVerdict { valid: false, failed_at: Some(index), reason: Some(reason.into()) }
    }
}

/// Replays `trace` from `start`, checking each side condition when the move
/// is applied, and compares the result with `end` (up to isomorphism when
/// the ids differ).
pub fn verify_trace(start: &Object, trace: &MoveTrace, end: &Object) -> TraceVerdict {
    verify(start, trace, end, false)
}

/// As [`verify_trace`], but the end object must match id for id.
pub fn verify_trace_exact(start: &Object, trace: &MoveTrace, end: &Object) -> TraceVerdict {
    verify(start, trace, end, true)
}

/// Applies `trace` to `start`, checking side conditions; the error names
/// the first bad move.
pub fn replay_trace(start: &Object, trace: &MoveTrace) -> std::result::Result<Object, TraceVerdict> {
    match start {
        Object::Complex(k) => replay_complex(k, trace),
        Object::Poset(x) => replay_poset(x, trace),
    }
}

fn verify(start: &Object, trace: &MoveTrace, end: &Object, exact: bool) -> TraceVerdict {
    let last = match replay_trace(start, trace) {
        Ok(o) => o,
        Err(v) => return v,
    };
    let same = match (&last, end) {
        (Object::Complex(a), Object::Complex(b)) => {
            a == b || !exact && is_isomorphic_with(a, b, DEFAULT_BUDGET).map(|m| m.is_some()).unwrap_or(false)
        }
        (Object::Poset(a), Object::Poset(b)) => {
            a == b
                || !exact
                    && a.n_elements() == b.n_elements()
                    && poset_canonical_form(a, DEFAULT_BUDGET).ok().map(|k| k.0)
                        == poset_canonical_form(b, DEFAULT_BUDGET).ok().map(|k| k.0)
        }
        _ => false,
    };
    if same {
        TraceVerdict::ok()
    } else {
        TraceVerdict::fail(trace.len(), "end object does not match")
    }
}

/// Renames the ids of `object` to those of `reference` carrying the same
/// labels; `None` if some label is missing from `reference` or the kinds differ.
pub fn align_labels(object: &Object, reference: &Object) -> Option<Object> {
    match (object, reference) {
        (Object::Complex(k), Object::Complex(r)) => {
            let map = k
                .vertices()
                .iter()
                .map(|&v| r.vertex_by_label(&k.label(v)).map(|w| (v, w)))
                .collect::<Option<std::collections::HashMap<_, _>>>()?;
            let c = k.relabel(&map).ok()?;
            Some(Object::Complex(match r.labels() {
                Some(l) => c.with_labels(l.clone()),
                None => c,
            }))
        }
        (Object::Poset(x), Object::Poset(r)) => {
            let map = x
                .elements()
                .iter()
                .map(|&e| r.element_by_label(&x.label(e)).map(|w| (e, w)))
                .collect::<Option<std::collections::HashMap<_, _>>>()?;
            let es = x.elements();
            let less = es.iter().flat_map(|&a| es.iter().map(move |&b| (a, b))).filter(|&(a, b)| x.less(a, b));
            let less: Vec<_> = less.map(|(a, b)| (map[&a], map[&b])).collect();
            let p = FinitePoset::new(map.values().copied(), less).ok()?;
            Some(Object::Poset(match r.labels() {
                Some(l) => p.with_labels(l.clone()),
                None => p,
            }))
        }
        _ => None,
    }
}

fn replay_complex(k: &SimplicialComplex, trace: &MoveTrace) -> std::result::Result<Object, TraceVerdict> {
    let mut cur = k.clone();
    let mut engine = CollapseEngine::default();
    for (i, m) in trace.iter().enumerate() {
        let next = match m {
            Move::StrongDelete(w) => match check_witness(&cur, *w) {
                Ok(()) => cur.delete_vertex(w.dominated),
                Err(e) => Err(e),
            },
            Move::FreeFaceCollapse { face, coface } => crate::collapse::elementary_collapse(&cur, face, coface),
            Move::NeDelete { vertex, level } => match ne_side_condition(&mut engine, &cur, *vertex, *level) {
                Ok(true) => cur.delete_vertex(*vertex),
                Ok(false) => Err(Error::InvalidArgument(format!("link of {vertex} fails level {level}"))),
                Err(e) => Err(e),
            },
            Move::BeatRemove { .. } | Move::WeakRemove { .. } => {
                Err(Error::KindMismatch("complex".into()))
            }
        };
        match next {
            Ok(n) => cur = n,
            Err(e) => return Err(TraceVerdict::fail(i, e.to_string())),
        }
    }
    Ok(Object::Complex(cur))
}

fn replay_poset(x: &FinitePoset, trace: &MoveTrace) -> std::result::Result<Object, TraceVerdict> {
    let mut cur = x.clone();
    for (i, m) in trace.iter().enumerate() {
        let (element, ok) = match m {
            Move::BeatRemove { element, direction } => {
                let covers = match direction {
                    Direction::Down => cur.lower_covers(*element),
                    Direction::Up => cur.upper_covers(*element),
                };
                (*element, covers.map(|c| c.len() == 1))
            }
            Move::WeakRemove { element } => (*element, cur.is_weak_point(*element)),
            _ => return Err(TraceVerdict::fail(i, "complex move applied to a poset")),
        };
        match ok {
            Ok(true) => {}
            Ok(false) => return Err(TraceVerdict::fail(i, format!("{element} is not removable"))),
            Err(e) => return Err(TraceVerdict::fail(i, e.to_string())),
        }
        match cur.delete(element) {
            Ok(n) => cur = n,
            Err(e) => return Err(TraceVerdict::fail(i, e.to_string())),
        }
    }
    Ok(Object::Poset(cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{is_contractible, poset_core};
    use crate::strong::{core, is_strong_collapsible};
    use crate::symmetry::is_vertex_homogeneous;

    #[test]
    fn generators_are_reproducible() {
        for mode in [GenMode::UniformFacets, GenMode::GrownByDomination, GenMode::GrownByBeatPoints] {
            let cfg = GeneratorConfig::new(7, 8, mode);
            let mut a = Generator::new(cfg.clone());
            let mut b = Generator::new(cfg);
            for _ in 0..20 {
                assert_eq!(a.complex(), b.complex());
                assert_eq!(a.poset(), b.poset());
                assert_eq!(a.vertex_homogeneous(), b.vertex_homogeneous());
            }
        }
    }

    #[test]
    fn sizes_respect_config() {
        let mut g = Generator::new(GeneratorConfig::new(1, 6, GenMode::GrownByDomination));
        for _ in 0..50 {
            assert!(g.complex().n_vertices() <= 6);
            assert!(g.vertex_homogeneous().n_vertices() <= 6);
        }
    }

    #[test]
    fn domination_growth_keeps_the_core() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = SimplicialComplex::boundary(2);
        for _ in 0..20 {
            let k = grow_by_domination(&b, 3, &mut rng);
            assert_eq!(k.n_vertices(), 6);
            assert!(is_isomorphic_with(&core(&k).0, &b, DEFAULT_BUDGET).unwrap().is_some());
        }
    }

    #[test]
    fn beat_growth_from_a_point_is_contractible() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let x = grow_by_beat_points(&FinitePoset::point(), 5, &mut rng);
            assert_eq!(x.n_elements(), 6);
            assert!(x.check_order());
            assert!(is_contractible(&x));
        }
    }

    #[test]
    fn vertex_homogeneous_stream() {
        let mut g = Generator::new(GeneratorConfig::new(5, 8, GenMode::UniformFacets));
        for _ in 0..40 {
            assert!(is_vertex_homogeneous(&g.vertex_homogeneous()).unwrap());
        }
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63]);
    }

    #[test]
    fn brute_force_oracle() {
        assert!(brute_force_strong_collapsible(&SimplicialComplex::simplex(3)).unwrap());
        assert!(!brute_force_strong_collapsible(&SimplicialComplex::boundary(2)).unwrap());
        assert!(matches!(brute_force_strong_collapsible(&SimplicialComplex::simplex(10)), Err(Error::TooLarge(_))));
        let mut g = Generator::new(GeneratorConfig::new(9, 7, GenMode::GrownByDomination));
        for _ in 0..100 {
            let k = g.complex();
            assert_eq!(brute_force_strong_collapsible(&k).unwrap(), is_strong_collapsible(&k));
        }
    }

    #[test]
    fn verifier_basics() {
        let k = Object::Complex(SimplicialComplex::boundary(2));
        assert!(verify_trace(&k, &MoveTrace::new(), &k).valid);
        let c = crate::catalog::cone(&SimplicialComplex::boundary(2));
        let (end, t) = core(&c);
        assert!(verify_trace(&Object::Complex(c.clone()), &t, &Object::Complex(end)).valid);
        let bad: MoveTrace = [Move::strong_delete(0, 1)].into_iter().collect();
        let v = verify_trace(&Object::Complex(c.clone()), &bad, &Object::Complex(c.delete_vertex(0).unwrap()));
        assert_eq!(v.failed_at, Some(0));
        let mismatch = verify_trace(&Object::Complex(c.clone()), &MoveTrace::new(), &k);
        assert_eq!(mismatch.failed_at, Some(0));
    }

    #[test]
    fn verifier_on_posets() {
        let x = FinitePoset::chain(3);
        let (end, t) = poset_core(&x);
        assert!(verify_trace(&Object::Poset(x.clone()), &t, &Object::Poset(end.clone())).valid);
        let wrong: MoveTrace = [Move::BeatRemove { element: 1, direction: Direction::Up }].into_iter().collect();
        assert!(verify_trace(&Object::Poset(x.clone()), &wrong, &Object::Poset(x.delete(1).unwrap())).valid);
        let wrong: MoveTrace =
            [Move::BeatRemove { element: 0, direction: Direction::Down }].into_iter().collect();
        assert_eq!(verify_trace(&Object::Poset(x.clone()), &wrong, &Object::Poset(end)).failed_at, Some(0));
        let as_complex = verify_trace(&Object::Complex(SimplicialComplex::point()), &wrong, &Object::Poset(x));
        assert!(!as_complex.valid);
    }

    #[test]
    fn alignment_by_labels() {
        let start = crate::complex::parse_scx("facet a b c\nfacet c d\n").unwrap();
        let (end, t) = core(&start);
        let written = crate::complex::parse_scx(&crate::complex::write_scx(&end)).unwrap();
        let aligned = align_labels(&Object::Complex(written), &Object::Complex(start.clone())).unwrap();
        assert!(verify_trace_exact(&Object::Complex(start.clone()), &t, &aligned).valid);
        let kept = start.label(end.vertices()[0]);
        let wrong = ["a", "b", "c", "d"].into_iter().find(|l| *l != kept).unwrap();
        let other = crate::complex::parse_scx(&format!("facet {wrong}\n")).unwrap();
        let other = align_labels(&Object::Complex(other), &Object::Complex(start.clone())).unwrap();
        assert!(!verify_trace_exact(&Object::Complex(start.clone()), &t, &other).valid);
        assert!(verify_trace(&Object::Complex(start.clone()), &t, &other).valid);
        let x = crate::poset::parse_fsp("rel a b\nrel b c\n").unwrap();
        let y = crate::poset::parse_fsp("rel b c\nrel a b\n").unwrap();
        assert_eq!(align_labels(&Object::Poset(y), &Object::Poset(x.clone())), Some(Object::Poset(x)));
    }
}
