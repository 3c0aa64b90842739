//! Finite relational structures, lifts, partial maps and the graph view.
//!
//! Vertices are the dense range `0..n`. Every relation is stored as a sorted,
//! duplicate-free list of tuples so that equality, hashing and serialization
//! are canonical.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

pub type Tuple = Vec<usize>;

/// The type of a structure: one arity per relation slot, optionally named.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    arities: Vec<usize>,
    names: Option<Vec<String>>,
}

impl Signature {
    pub fn new(arities: Vec<usize>) -> Result<Self> {
        if let Some(i) = arities.iter().position(|&a| a == 0) {
            return Err(Error::InvalidSignature(format!("slot {i} has arity 0")));
        }
        Ok(Signature {
            arities,
            names: None,
        })
    }

    pub fn with_names(arities: Vec<usize>, names: Vec<String>) -> Result<Self> {
        let mut sig = Signature::new(arities)?;
        if names.len() != sig.arities.len() {
            return Err(Error::InvalidSignature(format!(
                "{} names for {} slots",
                names.len(),
                sig.arities.len()
            )));
        }
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != names.len() {
            return Err(Error::InvalidSignature("duplicate slot name".into()));
        }
        sig.names = Some(names);
        Ok(sig)
    }

    /// A single binary slot.
    pub fn graph() -> Self {
        Signature {
            arities: vec![2],
            names: None,
        }
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn arity(&self, slot: usize) -> usize {
        self.arities[slot]
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, slot: usize) -> Option<&str> {
        self.names.as_ref().map(|n| n[slot].as_str())
    }

    /// Same arities slot by slot; names are ignored.
    pub fn compatible(&self, other: &Signature) -> bool {
        self.arities == other.arities
    }

    pub fn max_arity(&self) -> usize {
        self.arities.iter().copied().max().unwrap_or(0)
    }

    /// Slots of `self` followed by slots of `other`.
    pub fn concat(&self, other: &Signature) -> Result<Signature> {
        let mut arities = self.arities.clone();
        arities.extend_from_slice(&other.arities);
        if self.names.is_none() && other.names.is_none() {
            return Signature::new(arities);
        }
        let mut names = self.names_or_default("r");
        names.extend(other.names_or_default("x"));
        Signature::with_names(arities, names)
    }

    fn names_or_default(&self, prefix: &str) -> Vec<String> {
        match &self.names {
            Some(n) => n.clone(),
            None => (0..self.len()).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub(crate) fn ensure_compatible(&self, other: &Signature) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "{:?} vs {:?}",
                self.arities, other.arities
            )))
        }
    }
}

/// A finite relational structure on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    n: usize,
    sig: Signature,
    rels: Vec<Vec<Tuple>>,
}

impl Structure {
    /// Validates bounds and arities, then sorts and deduplicates every relation.
    pub fn new(n: usize, sig: Signature, rels: Vec<Vec<Tuple>>) -> Result<Self> {
        if rels.len() != sig.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} relations for {} slots",
                rels.len(),
                sig.len()
            )));
        }
        let mut out = Vec::with_capacity(rels.len());
        for (slot, mut tuples) in rels.into_iter().enumerate() {
            let arity = sig.arity(slot);
            for t in &tuples {
                if t.len() != arity {
                    return Err(Error::ArityMismatch {
                        slot,
                        arity,
                        len: t.len(),
                    });
                }
                if let Some(&v) = t.iter().find(|&&v| v >= n) {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            tuples.sort_unstable();
            tuples.dedup();
            out.push(tuples);
        }
        Ok(Structure { n, sig, rels: out })
    }

    pub fn empty(n: usize, sig: Signature) -> Self {
        let rels = vec![Vec::new(); sig.len()];
        Structure { n, sig, rels }
    }

    /// Undirected simple graph; each edge is stored in both orientations.
    pub fn graph(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut tuples = Vec::with_capacity(2 * edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::NotAGraph(format!("loop at vertex {u}")));
            }
            tuples.push(vec![u, v]);
            tuples.push(vec![v, u]);
        }
        Structure::new(n, Signature::graph(), vec![tuples])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn relation(&self, slot: usize) -> &[Tuple] {
        &self.rels[slot]
    }

    pub fn relations(&self) -> &[Vec<Tuple>] {
        &self.rels
    }

    pub fn tuple_count(&self) -> usize {
        self.rels.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, slot: usize, tuple: &[usize]) -> bool {
        self.rels[slot]
            .binary_search_by(|t| t.as_slice().cmp(tuple))
            .is_ok()
    }

    /// Replace the signature names while keeping arities.
    pub fn with_signature(mut self, sig: Signature) -> Result<Self> {
        self.sig.ensure_compatible(&sig)?;
        self.sig = sig;
        Ok(self)
    }

    /// Substructure induced on `vertices`, re-indexed by sorted order.
    ///
    /// Returns the structure and the map from new index to original vertex.
    pub fn induced(&self, vertices: &[usize]) -> Result<(Structure, Vec<usize>)> {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&v) = keep.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        let mut new_index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            new_index[v] = i;
        }
        let rels = self
            .rels
            .iter()
            .map(|tuples| {
                tuples
                    .iter()
                    .filter(|t| t.iter().all(|&v| new_index[v] != usize::MAX))
                    .map(|t| t.iter().map(|&v| new_index[v]).collect())
                    .collect()
            })
            .collect();
        let s = Structure::new(keep.len(), self.sig.clone(), rels)?;
        Ok((s, keep))
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Structure> {
        self.sig.ensure_compatible(&other.sig)?;
        let shift = self.n;
        let rels = self
            .rels
            .iter()
            .zip(&other.rels)
            .map(|(a, b)| {
                let mut out = a.clone();
                out.extend(b.iter().map(|t| t.iter().map(|&v| v + shift).collect()));
                out
            })
            .collect();
        Structure::new(self.n + other.n, self.sig.clone(), rels)
    }

    /// Apply a vertex bijection given as `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Structure> {
        check_bijection(perm, self.n)?;
        let rels = self
            .rels
            .iter()
            .map(|tuples| {
                tuples
                    .iter()
                    .map(|t| t.iter().map(|&v| perm[v]).collect())
                    .collect()
            })
            .collect();
        Structure::new(self.n, self.sig.clone(), rels)
    }

    /// Append slots, producing a structure over the concatenated signature.
    pub fn extend(&self, ext_sig: &Signature, ext_rels: &[Vec<Tuple>]) -> Result<Structure> {
        let sig = self.sig.concat(ext_sig)?;
        let mut rels = self.rels.clone();
        rels.extend(ext_rels.iter().cloned());
        Structure::new(self.n, sig, rels)
    }

    /// Gaifman graph: `x ~ y` iff `x != y` and both occur in a common tuple.
    pub fn gaifman_graph(&self) -> GraphView {
        let mut adj = vec![vec![false; self.n]; self.n];
        for tuples in &self.rels {
            for t in tuples {
                for (i, &x) in t.iter().enumerate() {
                    for &y in &t[i + 1..] {
                        if x != y {
                            adj[x][y] = true;
                            adj[y][x] = true;
                        }
                    }
                }
            }
        }
        GraphView::from_matrix(adj)
    }

    /// Gaifman adjacency lists, sorted.
    pub fn gaifman_neighbors(&self) -> Vec<Vec<usize>> {
        self.gaifman_graph().adjacency_lists()
    }

    /// Vertex sets of the connected components of the Gaifman graph, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.gaifman_graph().components()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// True iff this structure is a simple undirected graph.
    pub fn is_graph(&self) -> bool {
        GraphView::check(self).is_ok()
    }

    /// Per vertex, the `(slot, tuple index)` pairs of tuples containing it.
    pub(crate) fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (slot, tuples) in self.rels.iter().enumerate() {
            for (ti, t) in tuples.iter().enumerate() {
                let mut seen: Vec<usize> = Vec::with_capacity(t.len());
                for &v in t {
                    if !seen.contains(&v) {
                        seen.push(v);
                        inc[v].push((slot, ti));
                    }
                }
            }
        }
        inc
    }
}

pub(crate) fn check_bijection(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidMap(format!(
            "permutation of length {} on {} vertices",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidMap(format!("{perm:?} is not a bijection")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// True iff the vertex map `f` (total, `f[v]`) carries every tuple of `a` into
/// the corresponding relation of `b`.
pub fn is_homomorphism(a: &Structure, b: &Structure, f: &[usize]) -> bool {
    if f.len() != a.n() || f.iter().any(|&x| x >= b.n()) || !a.sig.compatible(&b.sig) {
        return false;
    }
    let mut image = Vec::new();
    a.rels.iter().enumerate().all(|(slot, tuples)| {
        tuples.iter().all(|t| {
            image.clear();
            image.extend(t.iter().map(|&v| f[v]));
            b.contains(slot, &image)
        })
    })
}

/// True iff `f` is injective and preserves and reflects every relation.
pub fn is_embedding(a: &Structure, b: &Structure, f: &[usize]) -> bool {
    if !is_homomorphism(a, b, f) {
        return false;
    }
    let mut inverse = vec![usize::MAX; b.n()];
    for (v, &w) in f.iter().enumerate() {
        if inverse[w] != usize::MAX {
            return false;
        }
        inverse[w] = v;
    }
    b.rels.iter().enumerate().all(|(slot, tuples)| {
        tuples.iter().all(|t| {
            if t.iter().any(|&w| inverse[w] == usize::MAX) {
                return true;
            }
            let pre: Tuple = t.iter().map(|&w| inverse[w]).collect();
            a.contains(slot, &pre)
        })
    })
}

/// True iff `f` is a bijection that preserves and reflects every relation.
pub fn is_isomorphism(a: &Structure, b: &Structure, f: &[usize]) -> bool {
    a.n() == b.n() && is_embedding(a, b, f)
}

/// A structure carrying extra relation slots on top of a base structure.
///
/// The shadow (drop the extended slots) is always exactly `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lift {
    base: Structure,
    ext_sig: Signature,
    ext_rels: Vec<Vec<Tuple>>,
}

impl Lift {
    pub fn new(base: Structure, ext_sig: Signature, ext_rels: Vec<Vec<Tuple>>) -> Result<Self> {
        // Validation happens through the combined structure.
        let combined = base.extend(&ext_sig, &ext_rels)?;
        let ext_rels = combined.rels[base.sig.len()..].to_vec();
        Ok(Lift {
            base,
            ext_sig,
            ext_rels,
        })
    }

    /// The lift with no extended slots.
    pub fn trivial(base: Structure) -> Self {
        Lift {
            base,
            ext_sig: Signature::empty(),
            ext_rels: Vec::new(),
        }
    }

    pub fn shadow(&self) -> &Structure {
        &self.base
    }

    pub fn base(&self) -> &Structure {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn ext_signature(&self) -> &Signature {
        &self.ext_sig
    }

    pub fn ext_relation(&self, slot: usize) -> &[Tuple] {
        &self.ext_rels[slot]
    }

    pub fn ext_relations(&self) -> &[Vec<Tuple>] {
        &self.ext_rels
    }

    pub fn ext_len(&self) -> usize {
        self.ext_sig.len()
    }

    /// Largest arity among the extended slots, 0 when there are none.
    pub fn max_ext_arity(&self) -> usize {
        self.ext_sig.max_arity()
    }

    pub fn is_monadic(&self) -> bool {
        self.ext_sig.arities().iter().all(|&a| a == 1)
    }

    /// Base slots followed by extended slots as one structure.
    pub fn to_structure(&self) -> Structure {
        self.base
            .extend(&self.ext_sig, &self.ext_rels)
            .expect("lift invariants guarantee a valid combined structure")
    }

    /// Append a named slot.
    pub fn push_slot(&mut self, name: &str, arity: usize, tuples: Vec<Tuple>) -> Result<()> {
        let mut arities = self.ext_sig.arities().to_vec();
        arities.push(arity);
        let mut names: Vec<String> = match self.ext_sig.names() {
            Some(n) => n.to_vec(),
            None => (0..self.ext_sig.len()).map(|i| format!("x{i}")).collect(),
        };
        names.push(name.to_string());
        let sig = Signature::with_names(arities, names)?;
        let mut rels = self.ext_rels.clone();
        rels.push(tuples);
        *self = Lift::new(self.base.clone(), sig, rels)?;
        Ok(())
    }

    /// Vertex colors of a monadic lift: the set of extended slots containing
    /// each vertex. Non-unary slots are ignored.
    pub fn colors(&self) -> Vec<Vec<usize>> {
        let mut colors = vec![Vec::new(); self.n()];
        for (slot, tuples) in self.ext_rels.iter().enumerate() {
            if self.ext_sig.arity(slot) == 1 {
                for t in tuples {
                    colors[t[0]].push(slot);
                }
            }
        }
        colors
    }

    /// Parts of a monadic lift: classes of vertices with equal color.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let colors = self.colors();
        let mut classes: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (v, c) in colors.into_iter().enumerate() {
            match classes.iter_mut().find(|(k, _)| *k == c) {
                Some((_, members)) => members.push(v),
                None => classes.push((c, vec![v])),
            }
        }
        classes.into_iter().map(|(_, m)| m).collect()
    }
}

impl From<Structure> for Lift {
    fn from(s: Structure) -> Self {
        Lift::trivial(s)
    }
}

/// An injective partial vertex map, stored sorted by source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PartialMap {
    pairs: Vec<(usize, usize)>,
}

impl PartialMap {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidMap(format!("vertex {} mapped twice", w[0].0)));
            }
        }
        let targets: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
        if targets.len() != pairs.len() {
            return Err(Error::InvalidMap("map is not injective".into()));
        }
        Ok(PartialMap { pairs })
    }

    pub fn identity(vertices: &[usize]) -> Self {
        let mut pairs: Vec<(usize, usize)> = vertices.iter().map(|&v| (v, v)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        PartialMap { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn domain(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&x, |p| p.0)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn contains_target(&self, y: usize) -> bool {
        self.pairs.iter().any(|p| p.1 == y)
    }

    /// The map with one more pair; fails if it breaks functionality or injectivity.
    pub fn extended(&self, x: usize, y: usize) -> Result<PartialMap> {
        let mut pairs = self.pairs.clone();
        pairs.push((x, y));
        PartialMap::new(pairs)
    }

    /// True iff this map is an isomorphism between the substructure of `a`
    /// induced on its domain and the substructure of `b` induced on its image.
    pub fn is_partial_isomorphism(&self, a: &Structure, b: &Structure) -> bool {
        if !a.sig.compatible(&b.sig) {
            return false;
        }
        if self.pairs.iter().any(|&(x, y)| x >= a.n() || y >= b.n()) {
            return false;
        }
        let mut forward = vec![usize::MAX; a.n()];
        let mut backward = vec![usize::MAX; b.n()];
        for &(x, y) in &self.pairs {
            forward[x] = y;
            backward[y] = x;
        }
        let maps_into = |from: &Structure, to: &Structure, f: &[usize]| {
            let mut image = Vec::new();
            from.rels.iter().enumerate().all(|(slot, tuples)| {
                tuples.iter().all(|t| {
                    if t.iter().any(|&v| f[v] == usize::MAX) {
                        return true;
                    }
                    image.clear();
                    image.extend(t.iter().map(|&v| f[v]));
                    to.contains(slot, &image)
                })
            })
        };
        maps_into(a, b, &forward) && maps_into(b, a, &backward)
    }
}

/// A simple undirected graph: one binary slot, irreflexive and symmetric.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphView {
    structure: Structure,
}

impl GraphView {
    pub fn new(structure: Structure) -> Result<Self> {
        GraphView::check(&structure)?;
        Ok(GraphView { structure })
    }

    fn check(s: &Structure) -> Result<()> {
        if s.sig.arities() != [2] {
            return Err(Error::NotAGraph(format!(
                "signature {:?} is not a single binary slot",
                s.sig.arities()
            )));
        }
        for t in &s.rels[0] {
            if t[0] == t[1] {
                return Err(Error::NotAGraph(format!("loop at vertex {}", t[0])));
            }
            if !s.contains(0, &[t[1], t[0]]) {
                return Err(Error::NotAGraph(format!(
                    "edge ({}, {}) lacks its reverse",
                    t[0], t[1]
                )));
            }
        }
        Ok(())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        GraphView::new(Structure::graph(n, edges)?)
    }

    fn from_matrix(adj: Vec<Vec<bool>>) -> Self {
        let n = adj.len();
        let mut tuples = Vec::new();
        for (u, row) in adj.iter().enumerate() {
            for (v, &e) in row.iter().enumerate() {
                if e {
                    tuples.push(vec![u, v]);
                }
            }
        }
        GraphView {
            structure: Structure {
                n,
                sig: Signature::graph(),
                rels: vec![tuples],
            },
        }
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn into_structure(self) -> Structure {
        self.structure
    }

    pub fn n(&self) -> usize {
        self.structure.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.structure.contains(0, &[u, v])
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.structure.rels[0]
            .iter()
            .filter(|t| t[0] < t[1])
            .map(|t| (t[0], t[1]))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.structure.rels[0].len() / 2
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for t in &self.structure.rels[0] {
            adj[t[0]].push(t[1]);
        }
        adj
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n()]; self.n()];
        for t in &self.structure.rels[0] {
            adj[t[0]][t[1]] = true;
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        let lo = self.structure.rels[0].partition_point(|t| t[0] < v);
        let hi = self.structure.rels[0].partition_point(|t| t[0] <= v);
        hi - lo
    }

    pub fn complement(&self) -> GraphView {
        let adj = self.adjacency_matrix();
        let n = self.n();
        let flipped = (0..n)
            .map(|u| (0..n).map(|v| u != v && !adj[u][v]).collect())
            .collect();
        GraphView::from_matrix(flipped)
    }

    pub fn disjoint_union(&self, other: &GraphView) -> GraphView {
        let s = self
            .structure
            .disjoint_union(&other.structure)
            .expect("graphs share the graph signature");
        GraphView { structure: s }
    }

    pub fn induced(&self, vertices: &[usize]) -> Result<(GraphView, Vec<usize>)> {
        let (s, map) = self.structure.induced(vertices)?;
        Ok((GraphView { structure: s }, map))
    }

    /// Connected components ordered by smallest vertex, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_of(&self.adjacency_lists(), &vec![false; self.n()])
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency_lists();
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

impl AsRef<Structure> for GraphView {
    fn as_ref(&self) -> &Structure {
        &self.structure
    }
}

impl TryFrom<Structure> for GraphView {
    type Error = Error;

    fn try_from(s: Structure) -> Result<Self> {
        GraphView::new(s)
    }
}

/// Components of the graph restricted to vertices not marked `removed`.
pub(crate) fn components_of(adj: &[Vec<usize>], removed: &[bool]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
