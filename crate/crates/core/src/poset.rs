//! Finite T₀-spaces as posets: beat and weak points, cores, collapses,
//! non-evasiveness, homotopies of maps and the face-poset / order-complex
//! functors.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::canon::{canonical_labeling, Refinable};
use crate::complex::{Labels, Simplex, SimplicialComplex, SimplicialMap, VertexId};
use crate::error::{Error, Result};
use crate::search::{Budget, MemoCache, DEFAULT_BUDGET, DEFAULT_CACHE_BYTES};
use crate::trace::{Direction, Move, MoveTrace};

pub type ElementId = u32;

/// A finite poset on stable element ids, stored as strict down-set and
/// up-set bit rows over the dense index of each element.
#[derive(Clone)]
pub struct FinitePoset {
    ids: Vec<ElementId>,
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
    labels: Option<Labels>,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.below == other.below
    }
}

impl Eq for FinitePoset {}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<(ElementId, ElementId)> = (0..self.ids.len())
            .flat_map(|i| self.lower_cover_idx(i).into_iter().map(move |j| (j, i)))
            .map(|(a, b)| (self.ids[a], self.ids[b]))
            .collect();
        write!(f, "Poset{{elements: {:?}, covers: {:?}}}", self.ids, covers)
    }
}

fn bits(n: usize, members: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    for i in members {
        b.insert(i);
    }
    b
}

impl FinitePoset {
    /// Builds the poset generated by `less` (pairs `a < b`) on `ids`,
    /// taking the transitive closure.
    pub fn new(
        ids: impl IntoIterator<Item = ElementId>,
        less: impl IntoIterator<Item = (ElementId, ElementId)>,
    ) -> Result<Self> {
        let mut ids: Vec<ElementId> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.is_empty() {
            return Err(Error::EmptyPoset);
        }
        let n = ids.len();
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for (a, b) in less {
            let i = ids.binary_search(&a).map_err(|_| Error::UnknownElement(a))?;
            let j = ids.binary_search(&b).map_err(|_| Error::UnknownElement(b))?;
            above[i].insert(j);
        }
        for k in 0..n {
            let row = above[k].clone();
            for r in above.iter_mut() {
                if r.contains(k) {
                    r.union_with(&row);
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| above[i].contains(i)) {
            return Err(Error::AntisymmetryViolation(ids[i].to_string()));
        }
        Ok(Self::from_above(ids, above))
    }

    /// `above` must already be a transitively closed strict order.
    fn from_above(ids: Vec<ElementId>, above: Vec<FixedBitSet>) -> Self {
        let n = ids.len();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in above.iter().enumerate() {
            for j in row.ones() {
                below[j].insert(i);
            }
        }
        FinitePoset { ids, below, above, labels: None }
    }

    /// Ids `0..n` with the order given by `less(i, j)`, which must be a
    /// strict partial order.
    pub(crate) fn from_fn(n: usize, less: impl Fn(usize, usize) -> bool) -> Self {
        let above = (0..n).map(|i| bits(n, (0..n).filter(|&j| less(i, j)))).collect();
        Self::from_above((0..n as ElementId).collect(), above)
    }

    /// `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_fn(n, |i, j| i < j)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_fn(n, |_, _| false)
    }

    pub fn point() -> Self {
        Self::chain(1)
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn label(&self, x: ElementId) -> String {
        self.labels
            .as_ref()
            .and_then(|l| l.get(x as usize).cloned())
            .unwrap_or_else(|| x.to_string())
    }

    pub fn element_by_label(&self, token: &str) -> Option<ElementId> {
        match &self.labels {
            Some(l) => l.iter().position(|s| s == token).map(|i| i as ElementId),
            None => token.parse().ok(),
        }
    }

    pub fn n_elements(&self) -> usize {
        self.ids.len()
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.ids
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.ids.binary_search(&x).is_ok()
    }

    pub fn is_point(&self) -> bool {
        self.ids.len() == 1
    }

    fn idx(&self, x: ElementId) -> Result<usize> {
        self.ids.binary_search(&x).map_err(|_| Error::UnknownElement(x))
    }

    fn to_ids(&self, set: impl IntoIterator<Item = usize>) -> Vec<ElementId> {
        set.into_iter().map(|i| self.ids[i]).collect()
    }

    /// `x < y`; false if either is missing.
    pub fn less(&self, x: ElementId, y: ElementId) -> bool {
        match (self.idx(x), self.idx(y)) {
            (Ok(i), Ok(j)) => self.above[i].contains(j),
            _ => false,
        }
    }

    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        (x == y && self.contains(x)) || self.less(x, y)
    }

    pub fn comparable(&self, x: ElementId, y: ElementId) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `Û_x`, the elements strictly below `x`.
    pub fn down_set(&self, x: ElementId) -> Result<Vec<ElementId>> {
        Ok(self.to_ids(self.below[self.idx(x)?].ones()))
    }

    /// `F̂_x`, the elements strictly above `x`.
    pub fn up_set(&self, x: ElementId) -> Result<Vec<ElementId>> {
        Ok(self.to_ids(self.above[self.idx(x)?].ones()))
    }

    /// `Ĉ_x = Û_x ∪ F̂_x`.
    pub fn link_hat(&self, x: ElementId) -> Result<Vec<ElementId>> {
        let i = self.idx(x)?;
        Ok(self.to_ids(self.link_idx(i).ones()))
    }

    /// `C_x = Ĉ_x ∪ {x}`.
    pub fn closed_link(&self, x: ElementId) -> Result<Vec<ElementId>> {
        let i = self.idx(x)?;
        let mut l = self.link_idx(i);
        l.insert(i);
        Ok(self.to_ids(l.ones()))
    }

    fn link_idx(&self, i: usize) -> FixedBitSet {
        let mut l = self.below[i].clone();
        l.union_with(&self.above[i]);
        l
    }

    fn lower_cover_idx(&self, i: usize) -> Vec<usize> {
        self.below[i].ones().filter(|&j| self.above[j].is_disjoint(&self.below[i])).collect()
    }

    fn upper_cover_idx(&self, i: usize) -> Vec<usize> {
        self.above[i].ones().filter(|&j| self.below[j].is_disjoint(&self.above[i])).collect()
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: ElementId) -> Result<Vec<ElementId>> {
        Ok(self.to_ids(self.lower_cover_idx(self.idx(x)?)))
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: ElementId) -> Result<Vec<ElementId>> {
        Ok(self.to_ids(self.upper_cover_idx(self.idx(x)?)))
    }

    /// All pairs `x < y` of the cover relation.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        (0..self.ids.len())
            .flat_map(|i| self.upper_cover_idx(i).into_iter().map(move |j| (i, j)))
            .map(|(i, j)| (self.ids[i], self.ids[j]))
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<ElementId> {
        self.to_ids((0..self.ids.len()).filter(|&i| self.below[i].is_clear()))
    }

    pub fn maximal_elements(&self) -> Vec<ElementId> {
        self.to_ids((0..self.ids.len()).filter(|&i| self.above[i].is_clear()))
    }

    fn beat_idx(&self, i: usize) -> Option<Direction> {
        if self.lower_cover_idx(i).len() == 1 {
            Some(Direction::Down)
        } else if self.upper_cover_idx(i).len() == 1 {
            Some(Direction::Up)
        } else {
            None
        }
    }

    /// The direction in which `x` is a beat point (`Down` when both apply).
    pub fn beat_direction(&self, x: ElementId) -> Result<Option<Direction>> {
        Ok(self.beat_idx(self.idx(x)?))
    }

    /// Every (element, direction) beat pair; an element beating both ways
    /// is listed twice, `Down` first.
    pub fn beat_points(&self) -> Vec<(ElementId, Direction)> {
        let mut out = Vec::new();
        for i in 0..self.ids.len() {
            if self.lower_cover_idx(i).len() == 1 {
                out.push((self.ids[i], Direction::Down));
            }
            if self.upper_cover_idx(i).len() == 1 {
                out.push((self.ids[i], Direction::Up));
            }
        }
        out
    }

    pub fn is_minimal(&self) -> bool {
        (0..self.ids.len()).all(|i| self.beat_idx(i).is_none())
    }

    fn weak_idx(&self, i: usize) -> bool {
        let link = self.link_idx(i);
        !link.is_clear() && self.sub_idx(&link).core_size() == 1
    }

    /// `Ĉ_x` is non-empty and contractible.
    pub fn is_weak_point(&self, x: ElementId) -> Result<bool> {
        Ok(self.weak_idx(self.idx(x)?))
    }

    pub fn weak_points(&self) -> Vec<ElementId> {
        self.to_ids((0..self.ids.len()).filter(|&i| self.weak_idx(i)))
    }

    fn sub_idx(&self, keep: &FixedBitSet) -> FinitePoset {
        let idx: Vec<usize> = keep.ones().collect();
        let n = idx.len();
        let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let row = |r: &FixedBitSet| bits(n, r.ones().filter_map(|j| pos.get(&j).copied()));
        FinitePoset {
            ids: idx.iter().map(|&i| self.ids[i]).collect(),
            below: idx.iter().map(|&i| row(&self.below[i])).collect(),
            above: idx.iter().map(|&i| row(&self.above[i])).collect(),
            labels: self.labels.clone(),
        }
    }

    /// The subspace on `keep`.
    pub fn induced(&self, keep: &[ElementId]) -> Result<FinitePoset> {
        let mut set = FixedBitSet::with_capacity(self.ids.len());
        for &x in keep {
            set.insert(self.idx(x)?);
        }
        if set.is_clear() {
            return Err(Error::EmptyPoset);
        }
        Ok(self.sub_idx(&set))
    }

    /// `X ∖ {x}`.
    pub fn delete(&self, x: ElementId) -> Result<FinitePoset> {
        let i = self.idx(x)?;
        if self.ids.len() == 1 {
            return Err(Error::LastElement);
        }
        let mut keep = FixedBitSet::with_capacity(self.ids.len());
        keep.insert_range(..);
        keep.set(i, false);
        Ok(self.sub_idx(&keep))
    }

    /// The subspace `Ĉ_x`, or `None` when `x` is isolated.
    pub fn link_space(&self, x: ElementId) -> Result<Option<FinitePoset>> {
        let link = self.link_idx(self.idx(x)?);
        Ok((!link.is_clear()).then(|| self.sub_idx(&link)))
    }

    fn core_size(&self) -> usize {
        let mut cur = self.clone();
        while cur.ids.len() > 1 {
            match (0..cur.ids.len()).find(|&i| cur.beat_idx(i).is_some()) {
                Some(i) => cur = cur.delete(cur.ids[i]).unwrap(),
                None => break,
            }
        }
        cur.ids.len()
    }

    /// True when the order relation is irreflexive, antisymmetric and transitive.
    pub fn check_order(&self) -> bool {
        let n = self.ids.len();
        (0..n).all(|i| {
            !self.above[i].contains(i)
                && self.above[i].ones().all(|j| !self.above[j].contains(i) && self.above[j].is_subset(&self.above[i]))
                && self.above[i].ones().all(|j| self.below[j].contains(i))
        })
    }
}

/// Greedily removes the smallest beat point until none is left.
pub fn poset_core(x: &FinitePoset) -> (FinitePoset, MoveTrace) {
    let mut cur = x.clone();
    let mut trace = MoveTrace::new();
    while cur.n_elements() > 1 {
        let Some((i, d)) = (0..cur.ids.len()).find_map(|i| cur.beat_idx(i).map(|d| (i, d))) else {
            break;
        };
        let element = cur.ids[i];
        trace.push(Move::BeatRemove { element, direction: d });
        cur = cur.delete(element).unwrap();
    }
    (cur, trace)
}

pub fn is_contractible(x: &FinitePoset) -> bool {
    x.core_size() == 1
}

/// Removes beat points outside `target` (smallest first) for as long as
/// possible; returns the trace if exactly `target` is reached.
pub fn beat_collapse_to(x: &FinitePoset, target: &[ElementId]) -> Result<Option<MoveTrace>> {
    for &t in target {
        x.idx(t)?;
    }
    let mut cur = x.clone();
    let mut trace = MoveTrace::new();
    loop {
        if cur.n_elements() == target.len() {
            return Ok(Some(trace));
        }
        let step = (0..cur.ids.len())
            .filter(|&i| !target.contains(&cur.ids[i]))
            .find_map(|i| cur.beat_idx(i).map(|d| (cur.ids[i], d)));
        let Some((element, direction)) = step else {
            return Ok(None);
        };
        trace.push(Move::BeatRemove { element, direction });
        cur = cur.delete(element)?;
    }
}

/// Twin-merged view of a poset: elements with the same strict down-set and
/// up-set form one weighted class.
struct PosetQuotient {
    tags: Vec<u32>,
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
    classes: Vec<Vec<usize>>,
}

impl PosetQuotient {
    fn new(x: &FinitePoset, marks: &[u32]) -> Self {
        let n = x.ids.len();
        let mut groups: BTreeMap<(u32, Vec<usize>, Vec<usize>), Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let key = (marks.get(i).copied().unwrap_or(0), x.below[i].ones().collect(), x.above[i].ones().collect());
            groups.entry(key).or_default().push(i);
        }
        let mut classes: Vec<(u32, Vec<usize>)> = groups.into_iter().map(|((m, _, _), v)| (m, v)).collect();
        classes.sort_by_key(|(_, v)| v[0]);
        let mut class_of = vec![0; n];
        for (c, (_, members)) in classes.iter().enumerate() {
            for &i in members {
                class_of[i] = c;
            }
        }
        let lift = |row: &FixedBitSet| {
            let mut cs: Vec<usize> = row.ones().map(|j| class_of[j]).collect();
            cs.sort_unstable();
            cs.dedup();
            cs
        };
        let below = classes.iter().map(|(_, m)| lift(&x.below[m[0]])).collect();
        let above = classes.iter().map(|(_, m)| lift(&x.above[m[0]])).collect();
        let tags = classes.iter().map(|(m, v)| (m << 16) | v.len() as u32).collect();
        PosetQuotient { tags, below, above, classes: classes.into_iter().map(|(_, v)| v).collect() }
    }
}

impl Refinable for PosetQuotient {
    fn size(&self) -> usize {
        self.classes.len()
    }

    fn signature(&self, v: usize, colors: &[u32], out: &mut Vec<u32>) {
        let mut down: Vec<u32> = self.below[v].iter().map(|&c| colors[c]).collect();
        let mut up: Vec<u32> = self.above[v].iter().map(|&c| colors[c]).collect();
        down.sort_unstable();
        up.sort_unstable();
        out.push(down.len() as u32);
        out.extend(down);
        out.extend(up);
    }

    fn encode(&self, label: &[u32]) -> Vec<u32> {
        let m = self.classes.len();
        let mut rows = vec![Vec::new(); m];
        let mut tags = vec![0; m];
        for c in 0..m {
            let l = label[c] as usize;
            tags[l] = self.tags[c];
            let mut r: Vec<u32> = self.below[c].iter().map(|&d| label[d]).collect();
            r.sort_unstable();
            rows[l] = r;
        }
        let mut out = vec![m as u32];
        out.extend(tags);
        for r in rows {
            out.push(r.len() as u32);
            out.extend(r);
        }
        out
    }
}

/// Canonical key and element order for a poset; equal keys iff isomorphic.
pub fn poset_canonical_form(x: &FinitePoset, budget: u64) -> Result<(Vec<u8>, Vec<ElementId>)> {
    let q = PosetQuotient::new(x, &[]);
    let (code, label) = canonical_labeling(&q, &q.tags, budget)?;
    let mut by_label: Vec<usize> = (0..q.size()).collect();
    by_label.sort_by_key(|&c| label[c]);
    let order = by_label.iter().flat_map(|&c| q.classes[c].iter().map(|&i| x.ids[i])).collect();
    Ok((code.iter().flat_map(|w| w.to_le_bytes()).collect(), order))
}

/// An order-preserving vertex map between posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    source: FinitePoset,
    target: FinitePoset,
    map: BTreeMap<ElementId, ElementId>,
}

impl PosetMap {
    pub fn new(source: FinitePoset, target: FinitePoset, map: BTreeMap<ElementId, ElementId>) -> Result<Self> {
        for &x in source.elements() {
            let y = *map.get(&x).ok_or_else(|| Error::InvalidMap(format!("{x} has no image")))?;
            if !target.contains(y) {
                return Err(Error::InvalidMap(format!("{y} is not in the target")));
            }
        }
        if map.len() != source.n_elements() {
            return Err(Error::InvalidMap("map has entries outside the source".into()));
        }
        for (a, b) in source.covers() {
            if !target.leq(map[&a], map[&b]) {
                return Err(Error::InvalidMap(format!("{a} < {b} is not preserved")));
            }
        }
        Ok(PosetMap { source, target, map })
    }

    pub fn identity(x: &FinitePoset) -> Self {
        let map = x.elements().iter().map(|&e| (e, e)).collect();
        PosetMap { source: x.clone(), target: x.clone(), map }
    }

    pub fn source(&self) -> &FinitePoset {
        &self.source
    }

    pub fn target(&self) -> &FinitePoset {
        &self.target
    }

    pub fn element_map(&self) -> &BTreeMap<ElementId, ElementId> {
        &self.map
    }

    pub fn apply(&self, x: ElementId) -> ElementId {
        self.map[&x]
    }

    /// Pointwise `self ≤ other`.
    pub fn leq(&self, other: &PosetMap) -> bool {
        self.map.iter().all(|(x, &y)| self.target.leq(y, other.map[x]))
    }

    pub fn is_bijective(&self) -> bool {
        let image: HashSet<_> = self.map.values().collect();
        image.len() == self.map.len() && image.len() == self.target.n_elements()
    }
}

/// An order isomorphism `x → y`, if one exists.
pub fn are_homeomorphic(x: &FinitePoset, y: &FinitePoset) -> Result<Option<PosetMap>> {
    if x.n_elements() != y.n_elements() || x.covers().len() != y.covers().len() {
        return Ok(None);
    }
    let (kx, ox) = poset_canonical_form(x, DEFAULT_BUDGET)?;
    let (ky, oy) = poset_canonical_form(y, DEFAULT_BUDGET)?;
    if kx != ky {
        return Ok(None);
    }
    let map = ox.into_iter().zip(oy).collect();
    Ok(Some(PosetMap::new(x.clone(), y.clone(), map)?))
}

/// Decides whether `f` and `g` are joined by a fence, exploring maps that
/// differ from a visited one at a single point moved along a cover.
pub fn are_homotopic(f: &PosetMap, g: &PosetMap) -> Result<bool> {
    are_homotopic_with(f, g, DEFAULT_BUDGET)
}

pub fn are_homotopic_with(f: &PosetMap, g: &PosetMap, budget: u64) -> Result<bool> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::MapMismatch);
    }
    let src = &f.source;
    let tgt = &f.target;
    let n = src.n_elements();
    let t_idx = |y: ElementId| tgt.idx(y).unwrap();
    let start: Vec<usize> = src.ids.iter().map(|x| t_idx(f.map[x])).collect();
    let goal: Vec<usize> = src.ids.iter().map(|x| t_idx(g.map[x])).collect();
    let neighbours: Vec<Vec<usize>> =
        (0..tgt.ids.len()).map(|j| [tgt.lower_cover_idx(j), tgt.upper_cover_idx(j)].concat()).collect();
    let budget = Budget::new(budget);
    let mut seen: HashSet<Vec<usize>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(h) = queue.pop_front() {
        if h == goal {
            return Ok(true);
        }
        budget.tick()?;
        for i in 0..n {
            for &y in &neighbours[h[i]] {
                let ok = src.below[i].ones().all(|j| h[j] == y || tgt.below[y].contains(h[j]))
                    && src.above[i].ones().all(|j| h[j] == y || tgt.above[y].contains(h[j]));
                if ok {
                    let mut next = h.clone();
                    next[i] = y;
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Memoized searches over finite spaces.
pub struct PosetEngine {
    budget: Budget,
    dead: MemoCache<Vec<u8>, ()>,
    ne: MemoCache<Vec<u8>, bool>,
}

impl Default for PosetEngine {
    fn default() -> Self {
        PosetEngine::new(DEFAULT_BUDGET)
    }
}

impl PosetEngine {
    pub fn new(budget: u64) -> Self {
        PosetEngine {
            budget: Budget::new(budget),
            dead: MemoCache::new(DEFAULT_CACHE_BYTES / 2),
            ne: MemoCache::new(DEFAULT_CACHE_BYTES / 2),
        }
    }

    pub fn nodes_used(&self) -> u64 {
        self.budget.used()
    }

    fn key(&self, x: &FinitePoset) -> Result<Vec<u8>> {
        Ok(poset_canonical_form(x, self.budget.limit())?.0)
    }

    /// A sequence of weak-point removals down to a single point.
    pub fn collapses_to_point(&mut self, x: &FinitePoset) -> Result<Option<MoveTrace>> {
        let mut moves = Vec::new();
        Ok(self.collapse_dfs(x, &mut moves)?.then(|| moves.into_iter().collect()))
    }

    fn collapse_dfs(&mut self, x: &FinitePoset, moves: &mut Vec<Move>) -> Result<bool> {
        if x.is_point() {
            return Ok(true);
        }
        let (core, beats) = poset_core(x);
        if core.is_point() {
            moves.extend(beats.iter().map(|m| match m {
                Move::BeatRemove { element, .. } => Move::WeakRemove { element: *element },
                _ => unreachable!(),
            }));
            return Ok(true);
        }
        let key = self.key(x)?;
        if self.dead.get(&key).is_some() {
            return Ok(false);
        }
        self.budget.tick()?;
        for w in x.weak_points() {
            moves.push(Move::WeakRemove { element: w });
            if self.collapse_dfs(&x.delete(w)?, moves)? {
                return Ok(true);
            }
            moves.pop();
        }
        let size = key.len();
        self.dead.insert(key, (), size);
        Ok(false)
    }

    /// The recursive definition: a point, or some `x` with both `Ĉ_x` and
    /// `X ∖ {x}` non-evasive.
    pub fn non_evasive(&mut self, x: &FinitePoset) -> Result<bool> {
        if x.is_point() || is_contractible(x) {
            return Ok(true);
        }
        let key = self.key(x)?;
        if let Some(v) = self.ne.get(&key) {
            return Ok(v);
        }
        self.budget.tick()?;
        let mut found = false;
        for &e in x.elements() {
            let Some(link) = x.link_space(e)? else {
                continue;
            };
            if self.non_evasive(&link)? && self.non_evasive(&x.delete(e)?)? {
                found = true;
                break;
            }
        }
        let size = key.len();
        self.ne.insert(key, found, size);
        Ok(found)
    }
}

pub fn poset_collapses_to_point(x: &FinitePoset) -> Result<Option<MoveTrace>> {
    PosetEngine::default().collapses_to_point(x)
}

pub fn poset_non_evasive(x: &FinitePoset) -> Result<bool> {
    PosetEngine::default().non_evasive(x)
}

/// `𝒳(K)` together with the simplex behind each element id.
#[derive(Clone, Debug)]
pub struct FacePoset {
    pub poset: FinitePoset,
    /// Element `i` is `simplices[i]`, sorted by (size, vertices).
    pub simplices: Vec<Simplex>,
}

impl FacePoset {
    pub fn element_of(&self, s: &Simplex) -> Option<ElementId> {
        let pos = self.simplices.binary_search_by(|t| (t.len(), t).cmp(&(s.len(), s))).ok()?;
        Some(pos as ElementId)
    }
}

/// The poset of simplices of `k` ordered by inclusion. Elements are labeled
/// by their vertex labels joined with `_`.
pub fn face_poset(k: &SimplicialComplex) -> FacePoset {
    let simplices = k.all_simplices();
    let n = simplices.len();
    let index: HashMap<&Simplex, usize> = simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut below = vec![FixedBitSet::with_capacity(n); n];
    for (i, s) in simplices.iter().enumerate() {
        for &v in s.vertices() {
            if let Some(face) = s.without(v) {
                let j = index[&face];
                let (left, right) = below.split_at_mut(i);
                right[0].union_with(&left[j]);
                right[0].insert(j);
            }
        }
    }
    let mut above = vec![FixedBitSet::with_capacity(n); n];
    for (i, row) in below.iter().enumerate() {
        for j in row.ones() {
            above[j].insert(i);
        }
    }
    let labels: Vec<String> = simplices
        .iter()
        .map(|s| s.vertices().iter().map(|&v| k.label(v)).collect::<Vec<_>>().join("_"))
        .collect();
    let poset =
        FinitePoset { ids: (0..n as ElementId).collect(), below, above, labels: Some(Arc::new(labels)) };
    FacePoset { poset, simplices }
}

/// The complex of non-empty chains; vertex ids are element ids.
pub fn order_complex(x: &FinitePoset) -> SimplicialComplex {
    let ups: Vec<Vec<usize>> = (0..x.ids.len()).map(|i| x.upper_cover_idx(i)).collect();
    let mut chains = Vec::new();
    let mut stack: Vec<Vec<usize>> =
        (0..x.ids.len()).filter(|&i| x.below[i].is_clear()).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        if ups[top].is_empty() {
            chains.push(Simplex::new(chain.iter().map(|&i| x.ids[i]).collect()).unwrap());
            continue;
        }
        for &u in &ups[top] {
            let mut next = chain.clone();
            next.push(u);
            stack.push(next);
        }
    }
    let k = SimplicialComplex::from_simplices(chains).unwrap();
    match &x.labels {
        Some(l) => k.with_labels(l.clone()),
        None => k,
    }
}

/// `K′ = 𝒦(𝒳(K))`.
pub fn barycentric_complex(k: &SimplicialComplex) -> SimplicialComplex {
    order_complex(&face_poset(k).poset)
}

/// `X′ = 𝒳(𝒦(X))`.
pub fn barycentric_poset(x: &FinitePoset) -> FinitePoset {
    face_poset(&order_complex(x)).poset
}

/// `𝒳(φ)`, acting between the face posets of source and target.
pub fn induced_order_map(phi: &SimplicialMap) -> Result<PosetMap> {
    let src = face_poset(phi.source());
    let tgt = face_poset(phi.target());
    let map = src
        .simplices
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let image = phi.image(s);
            let j = tgt.element_of(&image).ok_or_else(|| Error::InvalidMap(format!("{image:?} not in target")))?;
            Ok((i as ElementId, j))
        })
        .collect::<Result<_>>()?;
    PosetMap::new(src.poset, tgt.poset, map)
}

/// `𝒦(f)`, acting between the order complexes of source and target.
pub fn induced_simplicial_map(f: &PosetMap) -> Result<SimplicialMap> {
    let map: BTreeMap<VertexId, VertexId> = f.map.clone();
    SimplicialMap::new(order_complex(&f.source), order_complex(&f.target), map)
}

fn valid_token(t: &str) -> bool {
    !t.is_empty() && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `.fsp` text: `point <tok>` declares an element and `rel <a> <b>`
/// declares `a < b` (also declaring unseen tokens). Ids follow first appearance.
pub fn parse_fsp(text: &str) -> Result<FinitePoset> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, ElementId> = HashMap::new();
    let mut rels = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: i + 1, message };
        let mut intern = |t: &str| -> Result<ElementId> {
            if !valid_token(t) {
                return Err(err(format!("invalid token `{t}`")));
            }
            Ok(*index.entry(t.to_string()).or_insert_with(|| {
                names.push(t.to_string());
                names.len() as ElementId - 1
            }))
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["point", t] => {
                intern(t)?;
            }
            ["rel", a, b] => {
                let (a, b) = (intern(a)?, intern(b)?);
                rels.push((a, b));
            }
            _ => return Err(err(format!("expected `point <tok>` or `rel <tok> <tok>`, got `{line}`"))),
        }
    }
    let n = names.len();
    let p = FinitePoset::new(0..n as ElementId, rels).map_err(|e| match e {
        Error::AntisymmetryViolation(id) => Error::AntisymmetryViolation(names[id.parse::<usize>().unwrap()].clone()),
        other => other,
    })?;
    Ok(p.with_labels(Arc::new(names)))
}

/// Writes every element as a `point` line and every cover as a `rel` line.
pub fn write_fsp(x: &FinitePoset) -> String {
    let mut out = String::new();
    for &e in x.elements() {
        out.push_str(&format!("point {}\n", x.label(e)));
    }
    for (a, b) in x.covers() {
        out.push_str(&format!("rel {} {}\n", x.label(a), x.label(b)));
    }
    out
}
