//! Test corpus and slow, independent reference implementations. Nothing
//! here calls into the library's search code; complexes are plain sets of
//! simplices and posets plain sets of pairs.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shtop_core::poset::{self, FinitePoset};
use shtop_core::workbench::{self, GenMode, Generator, GeneratorConfig, Object};
use shtop_core::{catalog, Direction, Move, Simplex, SimplicialComplex};

pub type Set = BTreeSet<u32>;
pub type Family = BTreeSet<Set>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small complexes that are far from strong collapsible.
pub fn seeds() -> Vec<SimplicialComplex> {
    vec![
        catalog::octahedron_minus_facet(),
        catalog::octahedron(),
        SimplicialComplex::boundary(2),
        SimplicialComplex::boundary(3),
        catalog::cycle(4),
        catalog::cycle(5),
        catalog::sphere0(),
        poset::barycentric_complex(&SimplicialComplex::boundary(2)),
    ]
}

/// `n` complexes on at most `max_vertices` vertices: uniform facets of
/// several sizes and densities, some grown by dominated vertices, and
/// seeds grown by dominated vertices.
pub fn corpus(n: usize, max_vertices: usize) -> Vec<SimplicialComplex> {
    let seeds: Vec<SimplicialComplex> = seeds().into_iter().filter(|k| k.n_vertices() < max_vertices).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n as u64 {
        let seed = 1000 + i;
        let m = max_vertices;
        let mut cfg = GeneratorConfig::new(seed, m, GenMode::UniformFacets);
        let k = match i % 8 {
            0 => Generator::new(cfg).complex(),
            1 => {
                cfg.max_facets = 2 * m;
                cfg.facet_size_range = (2, 3);
                Generator::new(cfg).complex()
            }
            2 => {
                cfg.max_facets = 3 * m;
                cfg.facet_size_range = (3, 4);
                Generator::new(cfg).complex()
            }
            3 => {
                cfg.max_facets = 2 * m;
                cfg.facet_size_range = (2, 3);
                cfg.mode = GenMode::GrownByDomination;
                Generator::new(cfg).complex()
            }
            4 => {
                cfg.mode = GenMode::GrownByDomination;
                Generator::new(cfg).complex()
            }
            5 => {
                cfg.max_facets = m + 1;
                cfg.facet_size_range = (2, 2);
                Generator::new(cfg).complex()
            }
            _ => {
                let mut r = rng(seed);
                let base = &seeds[r.random_range(0..seeds.len())];
                let room = m - base.n_vertices();
                let additions = r.random_range(0..=room);
                workbench::grow_by_domination(base, additions, &mut r).compact().0
            }
        };
        out.push(k);
    }
    out
}

pub fn poset_corpus(n: usize, max_elements: usize) -> Vec<FinitePoset> {
    (0..n as u64)
        .map(|i| {
            let mode = if i % 2 == 0 { GenMode::UniformFacets } else { GenMode::GrownByBeatPoints };
            Generator::new(GeneratorConfig::new(5000 + i, max_elements, mode)).poset()
        })
        .collect()
}

pub fn facets(k: &SimplicialComplex) -> Family {
    k.facets().iter().map(|f| f.vertices().iter().copied().collect()).collect()
}

pub fn maximal(family: impl IntoIterator<Item = Set>) -> Family {
    let all: Vec<Set> = family.into_iter().filter(|s| !s.is_empty()).collect();
    all.iter().filter(|s| !all.iter().any(|t| t.len() > s.len() && s.is_subset(t))).cloned().collect()
}

pub fn closure(f: &Family) -> Family {
    let mut out = Family::new();
    for s in f {
        let v: Vec<u32> = s.iter().copied().collect();
        for mask in 1u32..(1 << v.len()) {
            out.insert((0..v.len()).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect());
        }
    }
    out
}

pub fn verts(f: &Family) -> Set {
    f.iter().flatten().copied().collect()
}

pub fn delete(f: &Family, v: u32) -> Family {
    maximal(f.iter().map(|s| s.iter().copied().filter(|&u| u != v).collect()))
}

pub fn link(f: &Family, v: u32) -> Family {
    maximal(f.iter().filter(|s| s.contains(&v)).map(|s| s.iter().copied().filter(|&u| u != v).collect()))
}

pub fn is_cone(f: &Family) -> bool {
    let mut it = f.iter();
    let Some(first) = it.next() else { return false };
    it.fold(first.clone(), |acc, s| &acc & s).len() > 0
}

/// `v` lies in a facet and every facet through `v` contains `w`.
pub fn dominated_by(f: &Family, v: u32, w: u32) -> bool {
    v != w && f.iter().any(|s| s.contains(&v)) && f.iter().filter(|s| s.contains(&v)).all(|s| s.contains(&w))
}

pub fn dominated(f: &Family) -> Vec<(u32, u32)> {
    let vs = verts(f);
    let mut out = Vec::new();
    for &v in &vs {
        for &w in &vs {
            if dominated_by(f, v, w) {
                out.push((v, w));
            }
        }
    }
    out
}

/// Deletes a uniformly random dominated vertex until none is left.
pub fn random_core(f: &Family, rng: &mut impl Rng) -> Family {
    let mut cur = f.clone();
    loop {
        let ds = dominated(&cur);
        if ds.is_empty() {
            return cur;
        }
        let (v, _) = ds[rng.random_range(0..ds.len())];
        cur = delete(&cur, v);
    }
}

/// Strong collapsibility by exhausting every deletion order.
pub fn strong_collapsible_exhaustive(f: &Family, memo: &mut HashMap<Family, bool>) -> bool {
    if verts(f).len() == 1 {
        return true;
    }
    if let Some(&b) = memo.get(f) {
        return b;
    }
    let vs: BTreeSet<u32> = dominated(f).into_iter().map(|p| p.0).collect();
    let b = vs.into_iter().any(|v| strong_collapsible_exhaustive(&delete(f, v), memo));
    memo.insert(f.clone(), b);
    b
}

/// `n`-collapsibility straight from the recursive definition.
pub fn n_collapsible(f: &Family, n: u32, memo: &mut HashMap<(Family, u32), bool>) -> bool {
    let vs = verts(f);
    if vs.len() == 1 {
        return true;
    }
    if let Some(&b) = memo.get(&(f.clone(), n)) {
        return b;
    }
    let b = vs.iter().any(|&v| ne_ok(f, v, n, memo) && n_collapsible(&delete(f, v), n, memo));
    memo.insert((f.clone(), n), b);
    b
}

/// Side condition of a level-`level` deletion of `v`.
pub fn ne_ok(f: &Family, v: u32, level: u32, memo: &mut HashMap<(Family, u32), bool>) -> bool {
    let l = link(f, v);
    if l.is_empty() {
        return false;
    }
    if level == 0 {
        is_cone(&l)
    } else {
        n_collapsible(&l, level - 1, memo)
    }
}

pub fn non_evasive(f: &Family, memo: &mut HashMap<(Family, u32), bool>) -> bool {
    let n = verts(f).len() as u32;
    n_collapsible(f, n, memo)
}

/// `sigma` is a codimension-one face of `tau` and lies in no other simplex.
pub fn is_free(all: &Family, sigma: &Set, tau: &Set) -> bool {
    all.contains(tau)
        && sigma.len() + 1 == tau.len()
        && sigma.is_subset(tau)
        && all.iter().filter(|s| s.len() > sigma.len() && sigma.is_subset(s)).count() == 1
}

/// Classical collapsibility by exhausting every sequence of elementary collapses.
pub fn collapsible_exhaustive(all: &Family, memo: &mut HashMap<Family, bool>) -> bool {
    if all.len() == 1 {
        return true;
    }
    if let Some(&b) = memo.get(all) {
        return b;
    }
    let mut b = false;
    'outer: for tau in all.iter() {
        for &v in tau {
            let mut sigma = tau.clone();
            sigma.remove(&v);
            if !sigma.is_empty() && is_free(all, &sigma, tau) {
                let mut next = all.clone();
                next.remove(&sigma);
                next.remove(tau);
                if collapsible_exhaustive(&next, memo) {
                    b = true;
                    break 'outer;
                }
            }
        }
    }
    memo.insert(all.clone(), b);
    b
}

/// Isomorphism by trying every bijection; for tiny complexes only.
pub fn isomorphic_exhaustive(a: &Family, b: &Family) -> bool {
    let va: Vec<u32> = verts(a).into_iter().collect();
    let vb: Vec<u32> = verts(b).into_iter().collect();
    if va.len() != vb.len() || a.len() != b.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..vb.len()).collect();
    loop {
        let m: HashMap<u32, u32> = va.iter().enumerate().map(|(i, &v)| (v, vb[perm[i]])).collect();
        let img: Family = a.iter().map(|s| s.iter().map(|v| m[v]).collect()).collect();
        if &img == b {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A poset as its element set and strict order pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order {
    pub elems: Set,
    pub lt: BTreeSet<(u32, u32)>,
}

impl Order {
    pub fn of(x: &FinitePoset) -> Self {
        let elems: Set = x.elements().iter().copied().collect();
        let mut lt = BTreeSet::new();
        for &a in &elems {
            for &b in &elems {
                if x.less(a, b) {
                    lt.insert((a, b));
                }
            }
        }
        Order { elems, lt }
    }

    pub fn without(&self, x: u32) -> Self {
        let mut elems = self.elems.clone();
        elems.remove(&x);
        let lt = self.lt.iter().copied().filter(|&(a, b)| a != x && b != x).collect();
        Order { elems, lt }
    }

    pub fn restrict(&self, keep: &Set) -> Self {
        let lt = self.lt.iter().copied().filter(|(a, b)| keep.contains(a) && keep.contains(b)).collect();
        Order { elems: keep.clone(), lt }
    }

    fn above(&self, x: u32) -> Vec<u32> {
        self.lt.iter().filter(|p| p.0 == x).map(|p| p.1).collect()
    }

    fn below(&self, x: u32) -> Vec<u32> {
        self.lt.iter().filter(|p| p.1 == x).map(|p| p.0).collect()
    }

    /// The strict up-set of `x` has a least element.
    pub fn up_beat(&self, x: u32) -> bool {
        let up = self.above(x);
        up.iter().any(|&m| up.iter().all(|&y| y == m || self.lt.contains(&(m, y))))
    }

    /// The strict down-set of `x` has a greatest element.
    pub fn down_beat(&self, x: u32) -> bool {
        let down = self.below(x);
        down.iter().any(|&m| down.iter().all(|&y| y == m || self.lt.contains(&(y, m))))
    }

    pub fn contractible(&self) -> bool {
        let mut cur = self.clone();
        loop {
            if cur.elems.len() == 1 {
                return true;
            }
            match cur.elems.iter().copied().find(|&x| cur.up_beat(x) || cur.down_beat(x)) {
                Some(x) => cur = cur.without(x),
                None => return false,
            }
        }
    }

    pub fn weak_point(&self, x: u32) -> bool {
        let link: Set = self.elems.iter().copied().filter(|&y| self.lt.contains(&(x, y)) || self.lt.contains(&(y, x))).collect();
        !link.is_empty() && self.restrict(&link).contractible()
    }
}

/// State of an independent replay.
#[derive(Clone, Debug)]
pub enum State {
    /// Every simplex, so that free-face collapses can be followed.
    Complex(Family),
    Poset(Order),
}

impl State {
    pub fn of(o: &Object) -> Self {
        match o {
            Object::Complex(k) => State::Complex(closure(&facets(k))),
            Object::Poset(x) => State::Poset(Order::of(x)),
        }
    }

    pub fn ids(&self) -> Vec<u32> {
        match self {
            State::Complex(all) => verts(all).into_iter().collect(),
            State::Poset(o) => o.elems.iter().copied().collect(),
        }
    }
}

fn set(s: &Simplex) -> Set {
    s.vertices().iter().copied().collect()
}

/// Applies one move if its side condition holds.
pub fn step(state: &State, m: &Move, memo: &mut HashMap<(Family, u32), bool>) -> Option<State> {
    match (state, m) {
        (State::Complex(all), Move::StrongDelete(w)) => {
            let f = maximal(all.iter().cloned());
            (verts(&f).len() > 1 && dominated_by(&f, w.dominated, w.dominator))
                .then(|| State::Complex(all.iter().filter(|s| !s.contains(&w.dominated)).cloned().collect()))
        }
        (State::Complex(all), Move::NeDelete { vertex, level }) => {
            let f = maximal(all.iter().cloned());
            (verts(&f).len() > 1 && verts(&f).contains(vertex) && ne_ok(&f, *vertex, *level, memo))
                .then(|| State::Complex(all.iter().filter(|s| !s.contains(vertex)).cloned().collect()))
        }
        (State::Complex(all), Move::FreeFaceCollapse { face, coface }) => {
            let (s, t) = (set(face), set(coface));
            is_free(all, &s, &t).then(|| {
                let mut next = all.clone();
                next.remove(&s);
                next.remove(&t);
                State::Complex(next)
            })
        }
        (State::Poset(o), Move::BeatRemove { element, direction }) => {
            let ok = o.elems.len() > 1
                && o.elems.contains(element)
                && match direction {
                    Direction::Up => o.up_beat(*element),
                    Direction::Down => o.down_beat(*element),
                };
            ok.then(|| State::Poset(o.without(*element)))
        }
        (State::Poset(o), Move::WeakRemove { element }) => {
            (o.elems.len() > 1 && o.elems.contains(element) && o.weak_point(*element))
                .then(|| State::Poset(o.without(*element)))
        }
        _ => None,
    }
}

/// Index of the first move whose side condition fails, if any.
pub fn failing_index(start: &Object, moves: &[Move]) -> Option<usize> {
    let mut memo = HashMap::new();
    let mut state = State::of(start);
    for (i, m) in moves.iter().enumerate() {
        match step(&state, m, &mut memo) {
            Some(s) => state = s,
            None => return Some(i),
        }
    }
    None
}

/// A random single-move edit of `moves`: change an id, a dominator, a
/// level or a direction, or drop, duplicate or swap moves.
pub fn mutate(moves: &[Move], ids: &[u32], rng: &mut impl Rng) -> Vec<Move> {
    let mut out = moves.to_vec();
    if out.is_empty() {
        return out;
    }
    let i = rng.random_range(0..out.len());
    let pick = |rng: &mut dyn rand::RngCore| {
        let mut choices = ids.to_vec();
        choices.push(ids.iter().max().copied().unwrap_or(0) + 1);
        *choices.choose(rng).unwrap()
    };
    match rng.random_range(0..6) {
        0 => {
            out.remove(i);
        }
        1 => {
            let m = out[i].clone();
            out.insert(i, m);
        }
        2 if out.len() > 1 => {
            let j = if i + 1 < out.len() { i + 1 } else { i - 1 };
            out.swap(i, j);
        }
        3 => {
            out[i] = match out[i].clone() {
                Move::StrongDelete(mut w) => {
                    w.dominator = pick(rng);
                    Move::StrongDelete(w)
                }
                Move::NeDelete { vertex, level } => Move::NeDelete { vertex, level: level.saturating_sub(1) },
                Move::BeatRemove { element, direction } => Move::BeatRemove {
                    element,
                    direction: if direction == Direction::Up { Direction::Down } else { Direction::Up },
                },
                Move::FreeFaceCollapse { face, coface } => {
                    let v = pick(rng);
                    Move::FreeFaceCollapse { face: face.with(v), coface }
                }
                Move::WeakRemove { .. } => Move::WeakRemove { element: pick(rng) },
            }
        }
        _ => {
            out[i] = match out[i].clone() {
                Move::StrongDelete(mut w) => {
                    w.dominated = pick(rng);
                    Move::StrongDelete(w)
                }
                Move::NeDelete { level, .. } => Move::NeDelete { vertex: pick(rng), level },
                Move::BeatRemove { direction, .. } => Move::BeatRemove { element: pick(rng), direction },
                Move::WeakRemove { .. } => Move::WeakRemove { element: pick(rng) },
                Move::FreeFaceCollapse { face, coface } => {
                    let v = pick(rng);
                    match face.without(*face.vertices().first().unwrap()) {
                        Some(f) if !f.contains(v) => Move::FreeFaceCollapse { face: f.with(v), coface },
                        _ => Move::FreeFaceCollapse { face: coface.clone(), coface: face },
                    }
                }
            }
        }
    }
    out
}

/// Complexes with at most `max_v` vertices and `max_facets` facets of size ≤ 4.
pub fn arb_complex(max_v: u32, max_facets: usize) -> impl Strategy<Value = SimplicialComplex> {
    let size = 4.min(max_v as usize);
    prop::collection::vec(prop::collection::btree_set(0..max_v, 1..=size), 1..=max_facets).prop_map(|fs| {
        SimplicialComplex::new(fs.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap().compact().0
    })
}

/// `arb_complex` followed by up to `grow` dominated additions.
pub fn arb_grown(max_v: u32, max_facets: usize, grow: usize) -> impl Strategy<Value = SimplicialComplex> {
    (arb_complex(max_v, max_facets), any::<u64>(), 0..=grow)
        .prop_map(|(k, seed, n)| workbench::grow_by_domination(&k, n, &mut rng(seed)).compact().0)
}

/// Posets on `1..=max_n` elements `0..n`, with `i < j` only for `i < j` as integers.
pub fn arb_poset(max_n: u32) -> impl Strategy<Value = FinitePoset> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = (n * n.saturating_sub(1) / 2) as usize;
        prop::collection::vec(prop::bool::weighted(0.35), pairs).prop_map(move |bits| {
            let mut less = Vec::new();
            let mut it = bits.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    if it.next().unwrap() {
                        less.push((i, j));
                    }
                }
            }
            FinitePoset::new(0..n, less).unwrap()
        })
    })
}
