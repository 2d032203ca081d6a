//! Classical collapses, the n-collapse hierarchy and non-evasiveness.

use std::collections::{HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::canon::canonical_form_marked;
use crate::complex::{maximal_faces, Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::poset::{face_poset, order_complex};
use crate::search::{Answer, Budget, MemoCache, DEFAULT_BUDGET, DEFAULT_CACHE_BYTES};
use crate::strong::{check_witness, core};
use crate::trace::{Move, MoveTrace};

/// Complexes up to this many vertices are memoized by canonical form,
/// larger ones by their exact facet list.
const CANONICAL_KEY_MAX_VERTICES: usize = 24;
const CANONICAL_KEY_BUDGET: u64 = 20_000;

/// Every pair `(σ, τ)` with `σ` a free face of `τ`, sorted by decreasing
/// dimension of `τ`, then lexicographically.
pub fn free_faces(k: &SimplicialComplex) -> Vec<(Simplex, Simplex)> {
    let mut out = Vec::new();
    for tau in k.facets() {
        if tau.len() < 2 {
            continue;
        }
        for &u in tau.vertices() {
            let sigma = tau.without(u).unwrap();
            let elsewhere = k.facets().iter().any(|f| f != tau && sigma.is_face_of(f));
            if !elsewhere {
                out.push((sigma, tau.clone()));
            }
        }
    }
    out.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.cmp(b)));
    out
}

/// Checks that `sigma` is a free face of `tau` in `k`.
pub fn is_free_pair(k: &SimplicialComplex, sigma: &Simplex, tau: &Simplex) -> bool {
    sigma.len() + 1 == tau.len()
        && sigma.is_face_of(tau)
        && k.facets().binary_search(tau).is_ok()
        && !k.facets().iter().any(|f| f != tau && sigma.is_face_of(f))
}

/// Removes the free pair `(sigma, tau)`.
pub fn elementary_collapse(k: &SimplicialComplex, sigma: &Simplex, tau: &Simplex) -> Result<SimplicialComplex> {
    if !is_free_pair(k, sigma, tau) {
        return Err(Error::InvalidArgument(format!("{sigma:?} is not a free face of {tau:?}")));
    }
    Ok(collapse_unchecked(k, sigma, tau))
}

fn collapse_unchecked(k: &SimplicialComplex, sigma: &Simplex, tau: &Simplex) -> SimplicialComplex {
    let mut family: Vec<Simplex> = k.facets().iter().filter(|f| *f != tau).cloned().collect();
    family.extend(sigma.vertices().iter().filter_map(|&w| tau.without(w)));
    k.derived(maximal_faces(family))
}

/// Ranks of the mod-2 reduced homology groups vanish.
pub fn is_z2_acyclic(k: &SimplicialComplex) -> bool {
    let simplices = k.all_simplices();
    let index: HashMap<&Simplex, usize> = simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); k.dim() + 1];
    for (i, s) in simplices.iter().enumerate() {
        by_dim[s.dim()].push(i);
    }
    // rank of ∂_d : C_d → C_{d-1} for d ≥ 1, plus the augmentation for d = 0.
    let mut ranks = vec![0usize; k.dim() + 2];
    ranks[0] = 1;
    for d in 1..=k.dim() {
        let rows: Vec<FixedBitSet> = by_dim[d]
            .iter()
            .map(|&i| {
                let mut row = FixedBitSet::with_capacity(simplices.len());
                for &v in simplices[i].vertices() {
                    row.insert(index[&simplices[i].without(v).unwrap()]);
                }
                row
            })
            .collect();
        ranks[d] = gf2_rank(rows);
    }
    (0..=k.dim()).all(|d| by_dim[d].len() == ranks[d] + ranks[d + 1])
}

fn gf2_rank(mut rows: Vec<FixedBitSet>) -> usize {
    let mut rank = 0;
    let mut pivots: Vec<(usize, FixedBitSet)> = Vec::new();
    for row in rows.iter_mut() {
        for (p, prow) in &pivots {
            if row.contains(*p) {
                row.symmetric_difference_with(prow);
            }
        }
        if let Some(p) = row.ones().next() {
            for (_, prow) in pivots.iter_mut() {
                if prow.contains(p) {
                    prow.symmetric_difference_with(row);
                }
            }
            pivots.push((p, row.clone()));
            rank += 1;
        }
    }
    rank
}

/// The least `n` for which a complex is `n`-collapsible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CollapseLevel {
    Level(u32),
    Evasive,
    Unknown,
}

impl CollapseLevel {
    pub fn level(self) -> Option<u32> {
        match self {
            CollapseLevel::Level(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for CollapseLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollapseLevel::Level(n) => write!(f, "{n}"),
            CollapseLevel::Evasive => f.write_str("evasive"),
            CollapseLevel::Unknown => f.write_str("unknown"),
        }
    }
}

/// Serializes as an integer, `"evasive"` or `"unknown"`.
impl Serialize for CollapseLevel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CollapseLevel::Level(n) => s.serialize_u32(*n),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Expands each strong deletion `v by w` into the collapses of the star of
/// `v` onto its link: `v ∪ ρ` into `v ∪ ρ ∪ w` for every link simplex `ρ`
/// avoiding `w` (and `ρ = ∅`), larger `ρ` first.
pub fn expand_strong_trace(trace: &MoveTrace, k: &SimplicialComplex) -> Result<MoveTrace> {
    let mut cur = k.clone();
    let mut out = MoveTrace::new();
    for (index, m) in trace.iter().enumerate() {
        let invalid = |reason: String| Error::InvalidTrace { index, reason };
        let Move::StrongDelete(w) = m else {
            return Err(invalid("only strong deletions can be expanded".into()));
        };
        check_witness(&cur, *w).map_err(|e| invalid(e.to_string()))?;
        let (v, apex) = (w.dominated, w.dominator);
        let mut rhos: Vec<Vec<VertexId>> = match cur.link(v)? {
            Some(link) => link.all_simplices().into_iter().filter(|s| !s.contains(apex)).map(Simplex::into_vec).collect(),
            None => Vec::new(),
        };
        rhos.push(Vec::new());
        rhos.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        for rho in rhos {
            let mut face = rho.clone();
            face.push(v);
            let face = Simplex::new(face).unwrap();
            let coface = face.with(apex);
            debug_assert!(is_free_pair(&cur, &face, &coface));
            cur = collapse_unchecked(&cur, &face, &coface);
            out.push(Move::FreeFaceCollapse { face, coface });
        }
    }
    Ok(out)
}

/// A 1-collapse of `K′` onto `L′` built from a classical collapse `K ⇘ L`.
#[derive(Clone, Debug)]
pub struct WelkerCertificate {
    /// `K′`, with vertex `i` the `i`-th simplex of `K` in (size, vertices) order.
    pub subdivision: SimplicialComplex,
    /// The full subcomplex of `K′` on the simplices of `L`, i.e. `L′`.
    pub target: SimplicialComplex,
    /// Level-1 NE deletions from `subdivision` to `target`.
    pub trace: MoveTrace,
}

/// Turns a free-face collapse trace from `k` into a 1-collapse of the
/// barycentric subdivisions: each collapse of `σ` into `τ` becomes the
/// deletion of the vertex `σ̂` and then of `τ̂`, both with strong
/// collapsible links.
pub fn welker_pipeline(k: &SimplicialComplex, collapse: &MoveTrace) -> Result<WelkerCertificate> {
    let fp = face_poset(k);
    let subdivision = order_complex(&fp.poset);
    let mut cur = k.clone();
    let mut trace = MoveTrace::new();
    for (index, m) in collapse.iter().enumerate() {
        let invalid = |reason: String| Error::InvalidTrace { index, reason };
        let Move::FreeFaceCollapse { face, coface } = m else {
            return Err(invalid("expected a free-face collapse".into()));
        };
        cur = elementary_collapse(&cur, face, coface).map_err(|e| invalid(e.to_string()))?;
        for s in [face, coface] {
            let vertex = fp.element_of(s).ok_or_else(|| invalid(format!("{s:?} is not a simplex of K")))?;
            trace.push(Move::NeDelete { vertex, level: 1 });
        }
    }
    let kept: Vec<VertexId> = cur.all_simplices().iter().map(|s| fp.element_of(s).unwrap()).collect();
    let target = subdivision.induced(&kept)?;
    Ok(WelkerCertificate { subdivision, target, trace })
}

/// Memoized decision procedures for collapsibility, `n`-collapsibility and
/// non-evasiveness. The node budget applies to each top-level query.
pub struct CollapseEngine {
    budget: Budget,
    dead: MemoCache<Vec<u8>, ()>,
    levels: MemoCache<(Vec<u8>, u32), bool>,
    ne: MemoCache<Vec<u8>, bool>,
}

impl Default for CollapseEngine {
    fn default() -> Self {
        CollapseEngine::new(DEFAULT_BUDGET)
    }
}

fn answer<T>(r: Result<T>, f: impl FnOnce(T) -> Answer) -> Result<Answer> {
    match r {
        Ok(t) => Ok(f(t)),
        Err(Error::SearchBudgetExceeded { .. }) => Ok(Answer::Unknown),
        Err(e) => Err(e),
    }
}

impl CollapseEngine {
    pub fn new(budget: u64) -> Self {
        Self::with_cache_bytes(budget, DEFAULT_CACHE_BYTES)
    }

    pub fn with_cache_bytes(budget: u64, cache_bytes: usize) -> Self {
        CollapseEngine {
            budget: Budget::new(budget),
            dead: MemoCache::new(cache_bytes / 3),
            levels: MemoCache::new(cache_bytes / 3),
            ne: MemoCache::new(cache_bytes / 3),
        }
    }

    /// Nodes expanded by the latest query.
    pub fn nodes_used(&self) -> u64 {
        self.budget.used()
    }

    fn key(&self, k: &SimplicialComplex) -> Vec<u8> {
        if k.n_vertices() <= CANONICAL_KEY_MAX_VERTICES {
            if let Ok(c) = canonical_form_marked(k, &HashMap::new(), CANONICAL_KEY_BUDGET) {
                let mut key = vec![0];
                key.extend(c.into_key());
                return key;
            }
        }
        let mut key = vec![1];
        for f in k.facets() {
            key.extend((f.len() as u32).to_le_bytes());
            key.extend(f.vertices().iter().flat_map(|v| v.to_le_bytes()));
        }
        key
    }

    /// Searches for free-face collapses down to a single vertex.
    pub fn is_collapsible(&mut self, k: &SimplicialComplex) -> Result<(Answer, Option<MoveTrace>)> {
        self.budget.reset();
        if !k.is_connected() || !is_z2_acyclic(k) {
            return Ok((Answer::No, None));
        }
        let mut moves = Vec::new();
        match self.collapse_dfs(k, &mut moves) {
            Ok(true) => Ok((Answer::Yes, Some(moves.into_iter().collect()))),
            Ok(false) => Ok((Answer::No, None)),
            Err(Error::SearchBudgetExceeded { .. }) => Ok((Answer::Unknown, None)),
            Err(e) => Err(e),
        }
    }

    fn collapse_dfs(&mut self, k: &SimplicialComplex, moves: &mut Vec<Move>) -> Result<bool> {
        if k.is_point() {
            return Ok(true);
        }
        let (c, strong) = core(k);
        if c.is_point() {
            moves.extend(expand_strong_trace(&strong, k)?.moves().iter().cloned());
            return Ok(true);
        }
        let key = self.key(k);
        if self.dead.get(&key).is_some() {
            return Ok(false);
        }
        self.budget.tick()?;
        let mut tried: HashSet<Vec<Simplex>> = HashSet::new();
        for (sigma, tau) in free_faces(k) {
            let next = collapse_unchecked(k, &sigma, &tau);
            if !tried.insert(next.facets().to_vec()) {
                continue;
            }
            moves.push(Move::FreeFaceCollapse { face: sigma, coface: tau });
            if self.collapse_dfs(&next, moves)? {
                return Ok(true);
            }
            moves.pop();
        }
        let size = key.len();
        self.dead.insert(key, (), size);
        Ok(false)
    }

    /// Whether `k` is `n`-collapsible, with a trace of deletions when it is.
    /// Level 0 traces are strong deletions; level `n ≥ 1` traces are
    /// `NeDelete(v, n)` moves.
    pub fn n_collapsible(&mut self, k: &SimplicialComplex, n: u32) -> Result<(Answer, Option<MoveTrace>)> {
        self.budget.reset();
        if n == 0 {
            let (c, t) = core(k);
            return Ok(if c.is_point() { (Answer::Yes, Some(t)) } else { (Answer::No, None) });
        }
        let mut moves = Vec::new();
        let r = self.level_dfs(k, n, Some(&mut moves));
        let a = answer(r, Answer::from_bool)?;
        Ok((a, a.is_yes().then(|| moves.into_iter().collect())))
    }

    fn level_dfs(&mut self, k: &SimplicialComplex, n: u32, mut moves: Option<&mut Vec<Move>>) -> Result<bool> {
        if k.is_point() {
            return Ok(true);
        }
        let (c, strong) = core(k);
        if c.is_point() {
            if let Some(moves) = moves {
                moves.extend(strong.iter().map(|m| match m {
                    Move::StrongDelete(w) => Move::NeDelete { vertex: w.dominated, level: n },
                    _ => unreachable!(),
                }));
            }
            return Ok(true);
        }
        if n == 0 {
            return Ok(false);
        }
        let key = (self.key(k), n);
        let memo = self.levels.get(&key);
        if memo == Some(false) || (memo == Some(true) && moves.is_none()) {
            return Ok(memo.unwrap());
        }
        if memo.is_none() && (k.euler_characteristic() != 1 || !k.is_connected()) {
            self.levels.insert(key, false, 0);
            return Ok(false);
        }
        self.budget.tick()?;
        let mut found = false;
        for &v in k.vertices() {
            let Some(link) = k.link(v)? else {
                continue;
            };
            if !self.level_dfs(&link, n - 1, None)? {
                continue;
            }
            let rest = k.delete_vertex(v)?;
            let mark = moves.as_ref().map(|m| m.len());
            if let Some(m) = moves.as_deref_mut() {
                m.push(Move::NeDelete { vertex: v, level: n });
            }
            if self.level_dfs(&rest, n, moves.as_deref_mut())? {
                found = true;
                break;
            }
            if let (Some(m), Some(len)) = (moves.as_deref_mut(), mark) {
                m.truncate(len);
            }
        }
        let size = key.0.len();
        self.levels.insert(key, found, size);
        Ok(found)
    }

    /// The least level, probing `0..=max(dim - 1, 0)`; at the top level
    /// `n`-collapsibility coincides with non-evasiveness.
    pub fn collapse_level(&mut self, k: &SimplicialComplex) -> Result<CollapseLevel> {
        let top = (k.dim() as u32).saturating_sub(1);
        let mut unknown = false;
        for n in 0..=top {
            match self.n_collapsible(k, n)?.0 {
                Answer::Yes => return Ok(if unknown { CollapseLevel::Unknown } else { CollapseLevel::Level(n) }),
                Answer::Unknown => unknown = true,
                Answer::No => {}
            }
        }
        Ok(if unknown { CollapseLevel::Unknown } else { CollapseLevel::Evasive })
    }

    /// The classical recursion: a single vertex, or some vertex whose link
    /// and deletion are both non-evasive.
    pub fn non_evasive(&mut self, k: &SimplicialComplex) -> Result<Answer> {
        self.budget.reset();
        let r = self.ne_rec(k);
        answer(r, Answer::from_bool)
    }

    fn ne_rec(&mut self, k: &SimplicialComplex) -> Result<bool> {
        if k.is_point() || core(k).0.is_point() {
            return Ok(true);
        }
        let key = self.key(k);
        if let Some(v) = self.ne.get(&key) {
            return Ok(v);
        }
        let found = if k.euler_characteristic() != 1 || !k.is_connected() {
            false
        } else {
            self.budget.tick()?;
            let mut found = false;
            for &v in k.vertices() {
                let Some(link) = k.link(v)? else {
                    continue;
                };
                if self.ne_rec(&link)? && self.ne_rec(&k.delete_vertex(v)?)? {
                    found = true;
                    break;
                }
            }
            found
        };
        let size = key.len();
        self.ne.insert(key, found, size);
        Ok(found)
    }

    /// NE deletions from `k` down to the full subcomplex `l`. Each move
    /// records the least level its link supports (`0` for a cone).
    pub fn ne_collapses_to(&mut self, k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Option<MoveTrace>> {
        if !l.is_full_subcomplex_of(k) {
            return Err(Error::NotFullSubcomplex(format!("{l:?} in {k:?}")));
        }
        self.budget.reset();
        let mut dead = HashSet::new();
        let mut moves = Vec::new();
        Ok(self.ne_to_dfs(k, l.vertices(), &mut dead, &mut moves)?.then(|| moves.into_iter().collect()))
    }

    fn ne_to_dfs(
        &mut self,
        k: &SimplicialComplex,
        target: &[VertexId],
        dead: &mut HashSet<Vec<VertexId>>,
        moves: &mut Vec<Move>,
    ) -> Result<bool> {
        if k.vertices() == target {
            return Ok(true);
        }
        if dead.contains(k.vertices()) {
            return Ok(false);
        }
        self.budget.tick()?;
        for &v in k.vertices() {
            if target.binary_search(&v).is_ok() {
                continue;
            }
            let Some(link) = k.link(v)? else {
                continue;
            };
            if !self.ne_rec(&link)? {
                continue;
            }
            let level = self.link_level(&link)?;
            moves.push(Move::NeDelete { vertex: v, level });
            if self.ne_to_dfs(&k.delete_vertex(v)?, target, dead, moves)? {
                return Ok(true);
            }
            moves.pop();
        }
        dead.insert(k.vertices().to_vec());
        Ok(false)
    }

    /// The NE-deletion level certified by a non-evasive link.
    fn link_level(&mut self, link: &SimplicialComplex) -> Result<u32> {
        if link.is_cone() {
            return Ok(0);
        }
        for n in 0..=link.dim() as u32 {
            if self.level_dfs(link, n, None)? {
                return Ok(n + 1);
            }
        }
        Err(Error::InvalidArgument("link is evasive".into()))
    }
}

pub fn is_collapsible(k: &SimplicialComplex) -> Result<(Answer, Option<MoveTrace>)> {
    CollapseEngine::default().is_collapsible(k)
}

pub fn n_collapsible(k: &SimplicialComplex, n: u32) -> Result<(Answer, Option<MoveTrace>)> {
    CollapseEngine::default().n_collapsible(k, n)
}

pub fn collapse_level(k: &SimplicialComplex) -> Result<CollapseLevel> {
    CollapseEngine::default().collapse_level(k)
}

pub fn non_evasive(k: &SimplicialComplex) -> Result<Answer> {
    CollapseEngine::default().non_evasive(k)
}

pub fn ne_collapses_to(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Option<MoveTrace>> {
    CollapseEngine::default().ne_collapses_to(k, l)
}

/// Checks that `v` may be removed by `NeDelete(v, level)` from `k`.
pub(crate) fn ne_side_condition(engine: &mut CollapseEngine, k: &SimplicialComplex, v: VertexId, level: u32) -> Result<bool> {
    let Some(link) = k.link(v)? else {
        return Ok(false);
    };
    if level == 0 {
        return Ok(link.is_cone());
    }
    engine.budget.reset();
    engine.level_dfs(&link, level - 1, None)
}
