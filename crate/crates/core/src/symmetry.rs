//! Automorphisms, vertex-homogeneity, the domination preorder and
//! multiples of complexes.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::canon::{canonical_form_marked, equitable_vertex_colors, is_isomorphic_with};
use crate::collapse::{CollapseEngine, CollapseLevel};
use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::search::{Answer, Budget, DEFAULT_BUDGET};
use crate::strong::{dominators, is_minimal};

/// A group of vertex permutations of a complex, stored element by element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismGroup {
    vertices: Vec<VertexId>,
    /// `perms[g][i]` is the index of the image of `vertices[i]` under `g`.
    perms: Vec<Vec<usize>>,
}

impl AutomorphismGroup {
    /// The group given by explicit vertex maps on `vertices`.
    pub fn from_maps(vertices: &[VertexId], maps: &[BTreeMap<VertexId, VertexId>]) -> Result<Self> {
        let index: HashMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let perms = maps
            .iter()
            .map(|m| {
                vertices
                    .iter()
                    .map(|v| {
                        m.get(v)
                            .and_then(|w| index.get(w))
                            .copied()
                            .ok_or_else(|| Error::InvalidMap(format!("{v} has no image")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AutomorphismGroup { vertices: vertices.to_vec(), perms })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Each element as a vertex map.
    pub fn maps(&self) -> Vec<BTreeMap<VertexId, VertexId>> {
        self.perms
            .iter()
            .map(|p| self.vertices.iter().enumerate().map(|(i, &v)| (v, self.vertices[p[i]])).collect())
            .collect()
    }

    pub fn apply(&self, g: usize, v: VertexId) -> VertexId {
        let i = self.vertices.binary_search(&v).expect("vertex of the complex");
        self.vertices[self.perms[g][i]]
    }

    pub fn apply_simplex(&self, g: usize, s: &Simplex) -> Simplex {
        Simplex::new(s.vertices().iter().map(|&v| self.apply(g, v)).collect()).unwrap()
    }

    pub fn orbit(&self, v: VertexId) -> Vec<VertexId> {
        let mut o: Vec<VertexId> = (0..self.order()).map(|g| self.apply(g, v)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(self.vertices[0]).len() == self.vertices.len()
    }

    /// Closed under composition and inverses, and containing the identity.
    pub fn is_group(&self) -> bool {
        let set: HashSet<&Vec<usize>> = self.perms.iter().collect();
        let n = self.vertices.len();
        let identity: Vec<usize> = (0..n).collect();
        if !set.contains(&identity) {
            return false;
        }
        self.perms.iter().all(|a| {
            let mut inv = vec![0; n];
            for (i, &j) in a.iter().enumerate() {
                inv[j] = i;
            }
            set.contains(&inv) && self.perms.iter().all(|b| set.contains(&b.iter().map(|&j| a[j]).collect::<Vec<_>>()))
        })
    }
}

/// Every automorphism of `k`, by backtracking over colour-compatible
/// vertex images and checking each facet once all its vertices are placed.
pub fn automorphisms(k: &SimplicialComplex) -> Result<AutomorphismGroup> {
    automorphisms_with(k, DEFAULT_BUDGET)
}

pub fn automorphisms_with(k: &SimplicialComplex, budget: u64) -> Result<AutomorphismGroup> {
    let vs = k.vertices();
    let n = vs.len();
    let dense = |v: VertexId| vs.binary_search(&v).unwrap();
    let facets: Vec<Vec<usize>> = k.facets().iter().map(|f| f.vertices().iter().map(|&v| dense(v)).collect()).collect();
    let facet_set: HashSet<Vec<usize>> = facets.iter().cloned().collect();
    let colors = equitable_vertex_colors(k);
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for f in &facets {
        for &v in f {
            if !placed[v] {
                placed[v] = true;
                order.push(v);
            }
        }
    }
    let mut position = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, f) in facets.iter().enumerate() {
        let last = f.iter().map(|&v| position[v]).max().unwrap();
        closing[last].push(i);
    }
    let mut search = AutSearch {
        order,
        colors,
        facets,
        facet_set,
        closing,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
        budget: Budget::new(budget),
    };
    search.run(0)?;
    Ok(AutomorphismGroup { vertices: vs.to_vec(), perms: search.found })
}

struct AutSearch {
    order: Vec<usize>,
    colors: Vec<u32>,
    facets: Vec<Vec<usize>>,
    facet_set: HashSet<Vec<usize>>,
    closing: Vec<Vec<usize>>,
    image: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    budget: Budget,
}

impl AutSearch {
    fn run(&mut self, p: usize) -> Result<()> {
        if p == self.order.len() {
            self.found.push(self.image.clone());
            return Ok(());
        }
        self.budget.tick()?;
        let v = self.order[p];
        for w in 0..self.order.len() {
            if self.used[w] || self.colors[w] != self.colors[v] {
                continue;
            }
            self.image[v] = w;
            let ok = self.closing[p].iter().all(|&f| {
                let mut img: Vec<usize> = self.facets[f].iter().map(|&u| self.image[u]).collect();
                img.sort_unstable();
                self.facet_set.contains(&img)
            });
            if ok {
                self.used[w] = true;
                self.run(p + 1)?;
                self.used[w] = false;
            }
        }
        self.image[v] = usize::MAX;
        Ok(())
    }
}

fn marked_key(k: &SimplicialComplex, marks: &HashMap<VertexId, u32>, budget: u64) -> Result<Vec<u8>> {
    Ok(canonical_form_marked(k, marks, budget)?.into_key())
}

/// `|Aut(K)|` as the product of orbit sizes along a stabilizer chain; each
/// orbit is found by comparing canonical forms with individualized vertices.
pub fn automorphism_group_order(k: &SimplicialComplex) -> Result<u128> {
    let mut marks: HashMap<VertexId, u32> = HashMap::new();
    let mut order: u128 = 1;
    for (step, &v) in k.vertices().iter().enumerate() {
        let mark = step as u32 + 1;
        let mut with = marks.clone();
        with.insert(v, mark);
        let reference = marked_key(k, &with, DEFAULT_BUDGET)?;
        let mut orbit = 1u128;
        for &w in k.vertices() {
            if w == v || marks.contains_key(&w) {
                continue;
            }
            let mut other = marks.clone();
            other.insert(w, mark);
            if marked_key(k, &other, DEFAULT_BUDGET)? == reference {
                orbit += 1;
            }
        }
        order *= orbit;
        marks = with;
    }
    Ok(order)
}

/// Whether `Aut(K)` is transitive on vertices.
pub fn is_vertex_homogeneous(k: &SimplicialComplex) -> Result<bool> {
    let v0 = k.vertices()[0];
    let reference = marked_key(k, &HashMap::from([(v0, 1)]), DEFAULT_BUDGET)?;
    for &w in &k.vertices()[1..] {
        if marked_key(k, &HashMap::from([(w, 1)]), DEFAULT_BUDGET)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The preorder `v ≺ w` (every facet through `v` contains `w`) and its
/// mutual classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominationClasses {
    /// Pairs `(v, w)` with `v ≠ w` and `v ≺ w`.
    pub relation: Vec<(VertexId, VertexId)>,
    /// Classes of mutually related vertices, each sorted, ordered by first element.
    pub classes: Vec<Vec<VertexId>>,
    /// Whether `≺` is symmetric.
    pub symmetric: bool,
}

pub fn domination_classes(k: &SimplicialComplex) -> DominationClasses {
    let up: BTreeMap<VertexId, Vec<VertexId>> = k.vertices().iter().map(|&v| (v, dominators(k, v))).collect();
    let relation: Vec<(VertexId, VertexId)> =
        up.iter().flat_map(|(&v, ws)| ws.iter().map(move |&w| (v, w))).collect();
    let related: HashSet<(VertexId, VertexId)> = relation.iter().copied().collect();
    let symmetric = relation.iter().all(|&(v, w)| related.contains(&(w, v)));
    let mut seen = HashSet::new();
    let mut classes = Vec::new();
    for &v in k.vertices() {
        if !seen.insert(v) {
            continue;
        }
        let mut class = vec![v];
        for &w in &up[&v] {
            if related.contains(&(w, v)) && seen.insert(w) {
                class.push(w);
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    DominationClasses { relation, classes, symmetric }
}

/// The full subcomplex on the smallest vertex of each domination class of
/// a vertex-homogeneous complex; it is the core.
pub fn vh_core(k: &SimplicialComplex) -> Result<SimplicialComplex> {
    if !is_vertex_homogeneous(k)? {
        return Err(Error::NotVertexHomogeneous);
    }
    let reps: Vec<VertexId> = domination_classes(k).classes.iter().map(|c| c[0]).collect();
    let core = k.induced(&reps)?;
    debug_assert!(is_minimal(&core));
    Ok(core)
}

/// Replaces each vertex `v` by `weights[v]` copies; copy `i` (from 0) of
/// `v` gets id `v + i·(max + 1)`, so copy 0 keeps the original id. Missing
/// weights count as 1.
pub fn weighted_multiple(k: &SimplicialComplex, weights: &HashMap<VertexId, u32>) -> Result<SimplicialComplex> {
    let stride = k.max_vertex() + 1;
    let copies = |v: VertexId| weights.get(&v).copied().unwrap_or(1);
    if let Some((&v, _)) = weights.iter().find(|(_, &c)| c == 0) {
        return Err(Error::InvalidArgument(format!("weight of {v} must be positive")));
    }
    let facets: Vec<Vec<VertexId>> = k
        .facets()
        .iter()
        .map(|f| f.vertices().iter().flat_map(|&v| (0..copies(v)).map(move |i| v + i * stride)).collect())
        .collect();
    let out = SimplicialComplex::new(facets)?;
    let top = out.max_vertex();
    let names: Vec<String> = (0..=top)
        .map(|id| {
            let (v, i) = (id % stride, id / stride);
            if i == 0 {
                k.label(v)
            } else {
                format!("{}_{}", k.label(v), i + 1)
            }
        })
        .collect();
    Ok(out.with_labels(Arc::new(names)))
}

/// The `n`-th multiple `nK`.
pub fn multiple(k: &SimplicialComplex, n: u32) -> Result<SimplicialComplex> {
    if n == 0 {
        return Err(Error::InvalidArgument("multiplicity must be positive".into()));
    }
    weighted_multiple(k, &k.vertices().iter().map(|&v| (v, n)).collect())
}

/// `(core, n)` with `K ≅ n·core`, verified by an isomorphism check; `None`
/// if the check fails.
pub fn factor_as_multiple(k: &SimplicialComplex) -> Result<Option<(SimplicialComplex, u32)>> {
    let core = vh_core(k)?;
    let n = (k.n_vertices() / core.n_vertices()) as u32;
    let rebuilt = multiple(&core, n)?;
    Ok(is_isomorphic_with(k, &rebuilt, DEFAULT_BUDGET)?.is_some().then_some((core, n)))
}

/// The smallest simplex (by size, then vertices) fixed setwise by every element of `g`.
pub fn invariant_simplex(k: &SimplicialComplex, g: &AutomorphismGroup) -> Result<Simplex> {
    k.all_simplices()
        .into_iter()
        .find(|s| (0..g.order()).all(|e| g.apply_simplex(e, s) == *s))
        .ok_or(Error::NoInvariantSimplex)
}

/// Levels of `K` and `ℱK`, and whether `ℱK` being `n`-collapsible implied
/// `K` being `n`-collapsible at every level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionVerdict {
    pub level: CollapseLevel,
    pub weighted_level: CollapseLevel,
    /// `None` when a level is unknown.
    pub implication_holds: Option<bool>,
    /// For vertex-homogeneous non-evasive `K`: whether its core is non-evasive.
    pub core_non_evasive: Option<Answer>,
}

pub fn evasiveness_reduction_check(
    k: &SimplicialComplex,
    weights: &HashMap<VertexId, u32>,
    engine: &mut CollapseEngine,
) -> Result<ReductionVerdict> {
    let fk = weighted_multiple(k, weights)?;
    let level = engine.collapse_level(k)?;
    let weighted_level = engine.collapse_level(&fk)?;
    let implication_holds = match (weighted_level, level) {
        (CollapseLevel::Unknown, _) | (_, CollapseLevel::Unknown) => None,
        (CollapseLevel::Evasive, _) => Some(true),
        (CollapseLevel::Level(a), CollapseLevel::Level(b)) => Some(b <= a),
        (CollapseLevel::Level(_), CollapseLevel::Evasive) => Some(false),
    };
    let core_non_evasive = if level.level().is_some() && is_vertex_homogeneous(k)? {
        Some(engine.non_evasive(&vh_core(k)?)?)
    } else {
        None
    };
    Ok(ReductionVerdict { level, weighted_level, implication_holds, core_non_evasive })
}

/// One instance of the evasiveness-conjecture audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureAudit {
    pub vertex_homogeneous: bool,
    pub non_evasive: Answer,
    pub core_vertices: usize,
    pub core_facets: usize,
    pub core_is_point: bool,
    pub core_non_evasive: Answer,
}

/// For a vertex-homogeneous complex, reports its core and whether the core
/// is a point. Non-evasive inputs with a non-point core would be counterexamples.
pub fn conjecture_audit(k: &SimplicialComplex, engine: &mut CollapseEngine) -> Result<ConjectureAudit> {
    let vertex_homogeneous = is_vertex_homogeneous(k)?;
    let non_evasive = engine.non_evasive(k)?;
    let core = if vertex_homogeneous { vh_core(k)? } else { crate::strong::core(k).0 };
    let core_non_evasive = engine.non_evasive(&core)?;
    Ok(ConjectureAudit {
        vertex_homogeneous,
        non_evasive,
        core_vertices: core.n_vertices(),
        core_facets: core.n_facets(),
        core_is_point: core.is_point(),
        core_non_evasive,
    })
}
