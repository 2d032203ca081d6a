//! Finite simplicial complexes stored by their facets, simplicial maps, and
//! the local operations (link, star, deletion, join, cone detection).
//!
//! Vertex ids are stable: a subcomplex keeps the ids of its parent, so a
//! sequence of deletions can be reported against the original vertex names.
//! Complexes built from scratch (file loading, joins, nerves, generators) use
//! the dense range `0..n`; [`SimplicialComplex::compact`] restores density for
//! a subcomplex when needed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type VertexId = u32;

/// A non-empty, strictly increasing list of vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSimplex("empty vertex list".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(format!("duplicate vertex in {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees the list is non-empty and strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    /// The simplex with `v` removed, or `None` if nothing would remain.
    pub fn without(&self, v: VertexId) -> Option<Simplex> {
        let rest: Vec<_> = self.0.iter().copied().filter(|&u| u != v).collect();
        (!rest.is_empty()).then_some(Simplex(rest))
    }

    pub fn with(&self, v: VertexId) -> Simplex {
        let mut vs = self.0.clone();
        if let Err(pos) = vs.binary_search(&v) {
            vs.insert(pos, v);
        }
        Simplex(vs)
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut vs: Vec<_> = self.0.iter().chain(other.0.iter()).copied().collect();
        vs.sort_unstable();
        vs.dedup();
        Simplex(vs)
    }

    pub fn intersection(&self, other: &Simplex) -> Vec<VertexId> {
        self.0.iter().copied().filter(|v| other.contains(*v)).collect()
    }

    /// All non-empty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        assert!(n < 32, "simplex too large to enumerate faces");
        (1u32..(1u32 << n)).map(move |mask| {
            Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())
        })
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub(crate) fn is_sorted_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Sort, deduplicate and prune a family of simplices to its maximal members.
pub(crate) fn maximal_faces(mut family: Vec<Simplex>) -> Vec<Simplex> {
    family.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    family.dedup();
    let mut kept: Vec<Simplex> = Vec::with_capacity(family.len());
    for s in family {
        if !kept.iter().any(|k| k.len() > s.len() && s.is_face_of(k)) {
            kept.push(s);
        }
    }
    kept.sort_unstable();
    kept
}

/// Vertex names shared between a complex and its subcomplexes.
pub type Labels = Arc<Vec<String>>;

/// A finite simplicial complex represented by its facets.
#[derive(Clone)]
pub struct SimplicialComplex {
    facets: Vec<Simplex>,
    vertices: Vec<VertexId>,
    labels: Option<Labels>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex{:?}", self.facets)
    }
}

impl SimplicialComplex {
    /// Builds a complex from any family of simplices; the family is pruned
    /// to its maximal members.
    pub fn new<I, S>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<Vec<VertexId>>,
    {
        let family =
            simplices.into_iter().map(|s| Simplex::new(s.into())).collect::<Result<Vec<_>>>()?;
        Self::from_simplices(family)
    }

    pub fn from_simplices(family: Vec<Simplex>) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::EmptyComplex);
        }
        Ok(Self::from_maximal(maximal_faces(family)))
    }

    /// `facets` must already be a sorted antichain.
    pub(crate) fn from_maximal(facets: Vec<Simplex>) -> Self {
        debug_assert!(!facets.is_empty());
        let set: BTreeSet<VertexId> = facets.iter().flat_map(|f| f.0.iter().copied()).collect();
        SimplicialComplex { facets, vertices: set.into_iter().collect(), labels: None }
    }

    /// The full simplex on vertices `0..=dim`.
    pub fn simplex(dim: usize) -> Self {
        Self::from_maximal(vec![Simplex((0..=dim as VertexId).collect())])
    }

    pub fn point() -> Self {
        Self::simplex(0)
    }

    /// The boundary of the simplex on `0..=dim` (`dim >= 1`).
    pub fn boundary(dim: usize) -> Self {
        assert!(dim >= 1);
        let full: Vec<VertexId> = (0..=dim as VertexId).collect();
        let facets =
            (0..=dim as VertexId).map(|v| Simplex(full.iter().copied().filter(|&u| u != v).collect()));
        Self::from_maximal(maximal_faces(facets.collect()))
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    /// A token naming `v`: its label if present, otherwise the decimal id.
    pub fn label(&self, v: VertexId) -> String {
        self.labels
            .as_ref()
            .and_then(|l| l.get(v as usize).cloned())
            .unwrap_or_else(|| v.to_string())
    }

    pub fn vertex_by_label(&self, token: &str) -> Option<VertexId> {
        match &self.labels {
            Some(l) => l.iter().position(|s| s == token).map(|i| i as VertexId),
            None => token.parse().ok(),
        }
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn dim(&self) -> usize {
        self.facets.iter().map(Simplex::dim).max().unwrap_or(0)
    }

    pub fn max_vertex(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_simplex(&self, s: &[VertexId]) -> bool {
        self.facets.iter().any(|f| is_sorted_subset(s, &f.0))
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_simplex(&self) -> bool {
        self.facets.len() == 1
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn facets_containing(&self, v: VertexId) -> impl Iterator<Item = &Simplex> + '_ {
        self.facets.iter().filter(move |f| f.contains(v))
    }

    /// The link of `v`; `None` is the empty complex, returned when `v` only
    /// lies in a 0-dimensional facet.
    pub fn link(&self, v: VertexId) -> Result<Option<SimplicialComplex>> {
        self.check_vertex(v)?;
        let family: Vec<Simplex> = self.facets_containing(v).filter_map(|f| f.without(v)).collect();
        if family.is_empty() {
            return Ok(None);
        }
        Ok(Some(self.derived(maximal_faces(family))))
    }

    /// The closed star of `v`: all simplices whose union with `v` is a simplex.
    pub fn star(&self, v: VertexId) -> Result<SimplicialComplex> {
        self.check_vertex(v)?;
        let facets: Vec<Simplex> = self.facets_containing(v).cloned().collect();
        Ok(self.derived(facets))
    }

    /// The full subcomplex spanned by all vertices except `v`.
    pub fn delete_vertex(&self, v: VertexId) -> Result<SimplicialComplex> {
        self.check_vertex(v)?;
        if self.vertices.len() == 1 {
            return Err(Error::LastVertex);
        }
        let family: Vec<Simplex> = self.facets.iter().filter_map(|f| f.without(v)).collect();
        Ok(self.derived(maximal_faces(family)))
    }

    /// The full subcomplex spanned by `keep`.
    pub fn induced(&self, keep: &[VertexId]) -> Result<SimplicialComplex> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &v in &keep {
            self.check_vertex(v)?;
        }
        let family: Vec<Simplex> = self
            .facets
            .iter()
            .filter_map(|f| {
                let vs: Vec<_> = f.0.iter().copied().filter(|v| keep.binary_search(v).is_ok()).collect();
                (!vs.is_empty()).then_some(Simplex(vs))
            })
            .collect();
        if family.is_empty() {
            return Err(Error::EmptyComplex);
        }
        Ok(self.derived(maximal_faces(family)))
    }

    /// True when `self` is the full subcomplex of `parent` on its vertices.
    pub fn is_full_subcomplex_of(&self, parent: &SimplicialComplex) -> bool {
        match parent.induced(&self.vertices) {
            Ok(sub) => sub == *self,
            Err(_) => false,
        }
    }

    /// A complex sharing this one's labels.
    pub(crate) fn derived(&self, facets: Vec<Simplex>) -> SimplicialComplex {
        let mut k = SimplicialComplex::from_maximal(facets);
        k.labels = self.labels.clone();
        k
    }

    /// Some vertex lying in every facet, the smallest if several do.
    pub fn cone_apex(&self) -> Option<VertexId> {
        let (first, rest) = self.facets.split_first()?;
        first.0.iter().copied().find(|&v| rest.iter().all(|f| f.contains(v)))
    }

    pub fn is_cone(&self) -> bool {
        self.cone_apex().is_some()
    }

    /// The join with `other`, whose vertices are shifted past this complex's ids.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let shift = self.max_vertex() + 1;
        let facets: Vec<Simplex> = self
            .facets
            .iter()
            .flat_map(|f| {
                other.facets.iter().map(move |g| {
                    let mut vs = f.0.clone();
                    vs.extend(g.0.iter().map(|v| v + shift));
                    Simplex(vs)
                })
            })
            .collect();
        let mut joined = SimplicialComplex::from_maximal(maximal_faces(facets));
        if self.labels.is_some() || other.labels.is_some() {
            let mut names: Vec<String> = (0..shift).map(|v| self.label(v)).collect();
            let used: BTreeSet<String> = names.iter().cloned().collect();
            for v in 0..=other.max_vertex() {
                let mut name = other.label(v);
                while used.contains(&name) {
                    name.push('_');
                }
                names.push(name);
            }
            joined.labels = Some(Arc::new(names));
        }
        joined
    }

    /// Relabels vertices to `0..n` in increasing order; returns the old id
    /// of each new vertex.
    pub fn compact(&self) -> (SimplicialComplex, Vec<VertexId>) {
        let old = self.vertices.clone();
        let index: HashMap<VertexId, VertexId> =
            old.iter().enumerate().map(|(i, &v)| (v, i as VertexId)).collect();
        let facets = self.facets.iter().map(|f| Simplex(f.0.iter().map(|v| index[v]).collect())).collect();
        let mut k = SimplicialComplex::from_maximal(maximal_faces(facets));
        if self.labels.is_some() {
            k.labels = Some(Arc::new(old.iter().map(|&v| self.label(v)).collect()));
        }
        (k, old)
    }

    /// Applies an injective vertex renaming.
    pub fn relabel(&self, map: &HashMap<VertexId, VertexId>) -> Result<SimplicialComplex> {
        let facets = self
            .facets
            .iter()
            .map(|f| Simplex::new(f.0.iter().map(|v| map[v]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplicialComplex::from_maximal(maximal_faces(facets)))
    }

    /// Every simplex of the complex, sorted by (size, vertices).
    pub fn all_simplices(&self) -> Vec<Simplex> {
        let mut all: BTreeSet<(usize, Simplex)> = BTreeSet::new();
        for f in &self.facets {
            for s in f.faces() {
                all.insert((s.len(), s));
            }
        }
        all.into_iter().map(|(_, s)| s).collect()
    }

    /// Number of simplices of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim() + 1];
        for s in self.all_simplices() {
            counts[s.dim()] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    pub fn is_connected(&self) -> bool {
        let mut reached: BTreeSet<VertexId> = BTreeSet::new();
        let mut frontier = vec![self.vertices[0]];
        reached.insert(self.vertices[0]);
        while let Some(v) = frontier.pop() {
            for f in self.facets_containing(v) {
                for &u in &f.0 {
                    if reached.insert(u) {
                        frontier.push(u);
                    }
                }
            }
        }
        reached.len() == self.vertices.len()
    }
}

/// A vertex map between two complexes that sends simplices to simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    map: BTreeMap<VertexId, VertexId>,
}

impl SimplicialMap {
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        map: BTreeMap<VertexId, VertexId>,
    ) -> Result<Self> {
        for &v in source.vertices() {
            match map.get(&v) {
                None => return Err(Error::InvalidMap(format!("vertex {v} has no image"))),
                Some(w) if !target.contains_vertex(*w) => {
                    return Err(Error::InvalidMap(format!("image {w} of {v} is not a target vertex")))
                }
                _ => {}
            }
        }
        let m = SimplicialMap { source, target, map };
        for f in m.source.facets() {
            let img = m.image(f);
            if !m.target.contains_simplex(img.vertices()) {
                return Err(Error::InvalidMap(format!("image of facet {f:?} is not a simplex")));
            }
        }
        Ok(m)
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        let map = k.vertices().iter().map(|&v| (v, v)).collect();
        SimplicialMap { source: k.clone(), target: k.clone(), map }
    }

    /// The inclusion of a subcomplex sharing vertex ids with `parent`.
    pub fn inclusion(sub: &SimplicialComplex, parent: &SimplicialComplex) -> Result<Self> {
        let map = sub.vertices().iter().map(|&v| (v, v)).collect();
        SimplicialMap::new(sub.clone(), parent.clone(), map)
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.map
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.map[&v]
    }

    pub fn image(&self, s: &Simplex) -> Simplex {
        let mut vs: Vec<_> = s.vertices().iter().map(|v| self.map[v]).collect();
        vs.sort_unstable();
        vs.dedup();
        Simplex(vs)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SimplicialMap) -> Result<SimplicialMap> {
        if self.target != next.source {
            return Err(Error::MapMismatch);
        }
        let map = self.map.iter().map(|(&v, w)| (v, next.map[w])).collect();
        Ok(SimplicialMap { source: self.source.clone(), target: next.target.clone(), map })
    }

    pub fn is_bijective(&self) -> bool {
        let images: BTreeSet<_> = self.map.values().collect();
        images.len() == self.map.len() && images.len() == self.target.n_vertices()
    }
}

/// True iff `φ(σ) ∪ ψ(σ)` is a simplex of the target for every facet σ.
pub fn are_contiguous(phi: &SimplicialMap, psi: &SimplicialMap) -> Result<bool> {
    if phi.source != psi.source || phi.target != psi.target {
        return Err(Error::MapMismatch);
    }
    Ok(phi.source.facets().iter().all(|f| {
        let u = phi.image(f).union(&psi.image(f));
        phi.target.contains_simplex(u.vertices())
    }))
}

fn valid_token(t: &str) -> bool {
    !t.is_empty() && t.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Parses the line-oriented `.scx` format.
pub fn parse_scx(text: &str) -> Result<SimplicialComplex> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, VertexId> = HashMap::new();
    let mut family = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap();
        if keyword != "facet" {
            return Err(Error::Parse { line: line_no, message: format!("unknown keyword `{keyword}`") });
        }
        let mut vs = Vec::new();
        for t in tokens {
            if !valid_token(t) {
                return Err(Error::Parse { line: line_no, message: format!("invalid token `{t}`") });
            }
            let id = *index.entry(t.to_string()).or_insert_with(|| {
                names.push(t.to_string());
                (names.len() - 1) as VertexId
            });
            if vs.contains(&id) {
                return Err(Error::Parse { line: line_no, message: format!("duplicate token `{t}`") });
            }
            vs.push(id);
        }
        if vs.is_empty() {
            return Err(Error::Parse { line: line_no, message: "facet without vertices".into() });
        }
        family.push(Simplex::new(vs)?);
    }
    Ok(SimplicialComplex::from_simplices(family)?.with_labels(Arc::new(names)))
}

/// Writes `.scx` text with facets sorted by size, then by their labels.
pub fn write_scx(k: &SimplicialComplex) -> String {
    let mut lines: Vec<(usize, Vec<String>)> = k
        .facets()
        .iter()
        .map(|f| {
            let mut names: Vec<String> = f.vertices().iter().map(|&v| k.label(v)).collect();
            names.sort();
            (names.len(), names)
        })
        .collect();
    lines.sort();
    let mut out = String::new();
    for (_, names) in lines {
        out.push_str("facet ");
        out.push_str(&names.join(" "));
        out.push('\n');
    }
    out
}
