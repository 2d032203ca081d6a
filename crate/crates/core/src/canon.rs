//! Canonical labeling by colour refinement plus individualization search.
//!
//! The engine works on any dense structure that can describe an element by
//! the colours of its neighbourhood. Before searching, elements with identical
//! neighbourhoods (twins) are merged into one weighted element; permuting twins
//! is always an automorphism, so this collapses the factorial blow-up on
//! simplices, multiples and antichains. The remaining search prunes children
//! by orbits of the automorphisms discovered at the leaves.

use std::collections::{BTreeMap, HashMap};

use crate::complex::{SimplicialComplex, SimplicialMap, VertexId};
use crate::error::Result;
use crate::search::{Budget, DEFAULT_BUDGET};

/// A dense structure the refinement engine can colour.
pub(crate) trait Refinable {
    fn size(&self) -> usize;
    /// Appends an isomorphism-invariant description of the neighbourhood of `v`.
    fn signature(&self, v: usize, colors: &[u32], out: &mut Vec<u32>);
    /// Words describing the structure relabeled so that `v` gets `label[v]`.
    fn encode(&self, label: &[u32]) -> Vec<u32>;
}

fn rank_in_place(keys: &[Vec<u32>], colors: &mut [u32]) -> usize {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut rank = 0u32;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && keys[v] != keys[order[i - 1]] {
            rank += 1;
        }
        colors[v] = rank;
    }
    if keys.is_empty() {
        0
    } else {
        rank as usize + 1
    }
}

/// Refines `colors` to the coarsest equitable partition below it. Colours
/// are returned as ranks `0..k`.
pub(crate) fn refine<R: Refinable>(s: &R, colors: &mut [u32]) -> usize {
    let n = s.size();
    let seed: Vec<Vec<u32>> = colors.iter().map(|&c| vec![c]).collect();
    let mut count = rank_in_place(&seed, colors);
    let mut buf = Vec::new();
    loop {
        let keys: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                buf.clear();
                buf.push(colors[v]);
                s.signature(v, colors, &mut buf);
                buf.clone()
            })
            .collect();
        let next = rank_in_place(&keys, colors);
        if next == count {
            return count;
        }
        count = next;
    }
}

fn individualize(colors: &[u32], u: usize) -> Vec<u32> {
    colors.iter().enumerate().map(|(w, &c)| 2 * c + u32::from(w != u)).collect()
}

struct Leaf {
    code: Vec<u32>,
    label: Vec<u32>,
}

struct Search<'a, R: Refinable> {
    s: &'a R,
    budget: Budget,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl<R: Refinable> Search<'_, R> {
    fn record_auto(&mut self, reference: &[u32], label: &[u32]) {
        let mut inv = vec![0usize; label.len()];
        for (v, &l) in reference.iter().enumerate() {
            inv[l as usize] = v;
        }
        let gamma: Vec<usize> = label.iter().map(|&l| inv[l as usize]).collect();
        if gamma.iter().enumerate().any(|(i, &g)| i != g) {
            self.autos.push(gamma);
        }
    }

    fn leaf(&mut self, label: Vec<u32>) {
        let code = self.s.encode(&label);
        let Some(first) = &self.first else {
            self.first = Some(Leaf { code: code.clone(), label: label.clone() });
            self.best = Some(Leaf { code, label });
            return;
        };
        if code == first.code {
            let reference = first.label.clone();
            self.record_auto(&reference, &label);
            return;
        }
        let best = self.best.as_ref().unwrap();
        if code == best.code {
            let reference = best.label.clone();
            self.record_auto(&reference, &label);
        } else if code < best.code {
            self.best = Some(Leaf { code, label });
        }
    }

    fn visit(&mut self, mut colors: Vec<u32>, prefix: &mut Vec<usize>) -> Result<()> {
        self.budget.tick()?;
        let n = self.s.size();
        let cells = refine(self.s, &mut colors);
        if cells == n {
            self.leaf(colors);
            return Ok(());
        }
        let mut sizes = vec![0usize; cells];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&k| k > 1).unwrap() as u32;
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &u in &cell {
            let mut parent: Vec<usize> = (0..n).collect();
            for g in &self.autos {
                if prefix.iter().all(|&p| g[p] == p) {
                    for (x, &y) in g.iter().enumerate() {
                        let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                }
            }
            let root = find(&mut parent, u);
            if explored.iter().any(|&e| find(&mut parent, e) == root) {
                continue;
            }
            explored.push(u);
            prefix.push(u);
            self.visit(individualize(&colors, u), prefix)?;
            prefix.pop();
        }
        Ok(())
    }
}

/// Runs the search; returns the canonical code and the label of each element.
pub(crate) fn canonical_labeling<R: Refinable>(
    s: &R,
    initial: &[u32],
    budget: u64,
) -> Result<(Vec<u32>, Vec<u32>)> {
    let mut search =
        Search { s, budget: Budget::new(budget), first: None, best: None, autos: Vec::new() };
    if s.size() == 0 {
        return Ok((s.encode(&[]), Vec::new()));
    }
    search.visit(initial.to_vec(), &mut Vec::new())?;
    let best = search.best.unwrap();
    Ok((best.code, best.label))
}

fn to_bytes(words: &[u32]) -> Vec<u8> {
    words.iter().flat_map(|w| w.to_le_bytes()).collect()
}

/// Twin-merged view of a complex: one element per class of vertices lying in
/// exactly the same facets.
struct ComplexQuotient {
    classes: Vec<Vec<VertexId>>,
    /// Invariant colour of each class (mark and multiplicity).
    tags: Vec<u32>,
    facets: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

impl ComplexQuotient {
    fn new(k: &SimplicialComplex, marks: &HashMap<VertexId, u32>) -> Self {
        let mut membership: BTreeMap<(u32, Vec<usize>), Vec<VertexId>> = BTreeMap::new();
        let mut in_facets: HashMap<VertexId, Vec<usize>> = HashMap::new();
        for (i, f) in k.facets().iter().enumerate() {
            for &v in f.vertices() {
                in_facets.entry(v).or_default().push(i);
            }
        }
        for &v in k.vertices() {
            let mark = marks.get(&v).copied().unwrap_or(0);
            membership.entry((mark, in_facets.remove(&v).unwrap())).or_default().push(v);
        }
        let mut classes: Vec<(u32, Vec<VertexId>)> =
            membership.into_iter().map(|((mark, _), vs)| (mark, vs)).collect();
        classes.sort_by_key(|(_, vs)| vs[0]);
        let class_of: HashMap<VertexId, usize> = classes
            .iter()
            .enumerate()
            .flat_map(|(c, (_, vs))| vs.iter().map(move |&v| (v, c)))
            .collect();
        let facets: Vec<Vec<usize>> = k
            .facets()
            .iter()
            .map(|f| {
                let mut cs: Vec<usize> = f.vertices().iter().map(|v| class_of[v]).collect();
                cs.sort_unstable();
                cs.dedup();
                cs
            })
            .collect();
        let mut incidence = vec![Vec::new(); classes.len()];
        for (i, f) in facets.iter().enumerate() {
            for &c in f {
                incidence[c].push(i);
            }
        }
        let tags = classes.iter().map(|(mark, vs)| (mark << 16) | vs.len() as u32).collect();
        ComplexQuotient { classes: classes.into_iter().map(|(_, vs)| vs).collect(), tags, facets, incidence }
    }
}

impl Refinable for ComplexQuotient {
    fn size(&self) -> usize {
        self.classes.len()
    }

    fn signature(&self, v: usize, colors: &[u32], out: &mut Vec<u32>) {
        let mut per_facet: Vec<Vec<u32>> = self.incidence[v]
            .iter()
            .map(|&f| {
                let mut cs: Vec<u32> = self.facets[f].iter().map(|&c| colors[c]).collect();
                cs.sort_unstable();
                cs
            })
            .collect();
        per_facet.sort_unstable();
        for cs in per_facet {
            out.push(cs.len() as u32);
            out.extend(cs);
        }
    }

    fn encode(&self, label: &[u32]) -> Vec<u32> {
        let n = self.classes.len();
        let mut tags = vec![0; n];
        for (c, &l) in label.iter().enumerate() {
            tags[l as usize] = self.tags[c];
        }
        let mut facets: Vec<Vec<u32>> = self
            .facets
            .iter()
            .map(|f| {
                let mut ls: Vec<u32> = f.iter().map(|&c| label[c]).collect();
                ls.sort_unstable();
                ls
            })
            .collect();
        facets.sort_unstable();
        let mut out = vec![n as u32];
        out.extend(tags);
        out.push(facets.len() as u32);
        for f in facets {
            out.push(f.len() as u32);
            out.extend(f);
        }
        out
    }
}

/// A canonical key together with the vertex order realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    key: Vec<u8>,
    order: Vec<VertexId>,
}

impl CanonicalForm {
    /// Equal keys iff the (marked) complexes are isomorphic.
    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn into_key(self) -> Vec<u8> {
        self.key
    }

    /// The vertex receiving canonical label `i` is `order()[i]`.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }
}

/// Canonical form with the default node budget.
pub fn canonical_form(k: &SimplicialComplex) -> Result<CanonicalForm> {
    canonical_form_marked(k, &HashMap::new(), DEFAULT_BUDGET)
}

/// Canonical form of a complex whose vertices carry extra colour marks
/// (unmarked vertices have mark `0`).
pub fn canonical_form_marked(
    k: &SimplicialComplex,
    marks: &HashMap<VertexId, u32>,
    budget: u64,
) -> Result<CanonicalForm> {
    let q = ComplexQuotient::new(k, marks);
    let (code, label) = canonical_labeling(&q, &q.tags, budget)?;
    let mut by_label: Vec<usize> = (0..q.size()).collect();
    by_label.sort_by_key(|&c| label[c]);
    let order = by_label.iter().flat_map(|&c| q.classes[c].iter().copied()).collect();
    Ok(CanonicalForm { key: to_bytes(&code), order })
}

/// An isomorphism `k → l`, if one exists.
pub fn is_isomorphic(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Option<SimplicialMap>> {
    is_isomorphic_with(k, l, DEFAULT_BUDGET)
}

pub fn is_isomorphic_with(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    budget: u64,
) -> Result<Option<SimplicialMap>> {
    if k.n_vertices() != l.n_vertices() || k.n_facets() != l.n_facets() {
        return Ok(None);
    }
    let mut ks: Vec<usize> = k.facets().iter().map(|f| f.len()).collect();
    let mut ls: Vec<usize> = l.facets().iter().map(|f| f.len()).collect();
    ks.sort_unstable();
    ls.sort_unstable();
    if ks != ls {
        return Ok(None);
    }
    let ck = canonical_form_marked(k, &HashMap::new(), budget)?;
    let cl = canonical_form_marked(l, &HashMap::new(), budget)?;
    if ck.key != cl.key {
        return Ok(None);
    }
    let map = ck.order.iter().zip(&cl.order).map(|(&a, &b)| (a, b)).collect();
    Ok(Some(SimplicialMap::new(k.clone(), l.clone(), map)?))
}

/// Colours of the coarsest equitable partition of the vertices (in
/// increasing vertex order), refined from the marks.
pub(crate) fn equitable_vertex_colors(k: &SimplicialComplex) -> Vec<u32> {
    let q = ComplexQuotient::new(k, &HashMap::new());
    let mut colors = q.tags.clone();
    refine(&q, &mut colors);
    let mut out = vec![0; k.n_vertices()];
    for (c, members) in q.classes.iter().enumerate() {
        for v in members {
            let i = k.vertices().binary_search(v).unwrap();
            out[i] = colors[c];
        }
    }
    out
}
