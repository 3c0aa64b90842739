//! Homomorphism and embedding search, cores, class membership and ages.

use std::collections::BTreeMap;

use crate::canon::{canonical_form, CanonicalKey};
use crate::error::{Error, Result};
use crate::limits::{Budget, Limits};
use crate::structure::{Signature, Structure, Tuple};

/// Vertex order used by every backtracking search: descending Gaifman degree;
/// among equal degrees, the vertex with most already-ordered neighbours, then
/// the smaller index.
fn search_order(s: &Structure) -> Vec<usize> {
    let adj = s.gaifman_neighbors();
    let n = s.n();
    let mut placed = vec![false; n];
    let mut placed_nbrs = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&x, &y| {
                adj[x]
                    .len()
                    .cmp(&adj[y].len())
                    .then(placed_nbrs[x].cmp(&placed_nbrs[y]))
                    .then(y.cmp(&x))
            })
            .unwrap();
        placed[v] = true;
        order.push(v);
        for &w in &adj[v] {
            placed_nbrs[w] += 1;
        }
    }
    order
}

struct MapSearch<'a> {
    from: &'a Structure,
    to: &'a Structure,
    order: Vec<usize>,
    /// Tuples of `from` whose last vertex (in search order) is `order[i]`.
    checks: Vec<Vec<(usize, usize)>>,
    to_inc: Vec<Vec<(usize, usize)>>,
    injective: bool,
    f: Vec<usize>,
    used: Vec<usize>,
    budget: &'a Budget,
}

impl<'a> MapSearch<'a> {
    fn new(from: &'a Structure, to: &'a Structure, injective: bool, budget: &'a Budget) -> Self {
        let order = search_order(from);
        let mut pos = vec![0; from.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut checks = vec![Vec::new(); from.n()];
        for (slot, tuples) in from.relations().iter().enumerate() {
            for (ti, t) in tuples.iter().enumerate() {
                if let Some(last) = t.iter().map(|&v| pos[v]).max() {
                    checks[last].push((slot, ti));
                }
            }
        }
        MapSearch {
            from,
            to,
            order,
            checks,
            to_inc: if injective {
                to.incidence()
            } else {
                Vec::new()
            },
            injective,
            f: vec![usize::MAX; from.n()],
            used: vec![usize::MAX; to.n()],
            budget,
        }
    }

    fn run(mut self) -> Result<Option<Vec<usize>>> {
        if self.injective && self.from.n() > self.to.n() {
            return Ok(None);
        }
        if self.dfs(0)? {
            Ok(Some(self.f))
        } else {
            Ok(None)
        }
    }

    fn dfs(&mut self, depth: usize) -> Result<bool> {
        self.budget.tick()?;
        if depth == self.order.len() {
            return Ok(true);
        }
        let v = self.order[depth];
        for w in 0..self.to.n() {
            if self.injective && self.used[w] != usize::MAX {
                continue;
            }
            self.f[v] = w;
            if self.injective {
                self.used[w] = v;
            }
            if self.consistent(depth, w) && self.dfs(depth + 1)? {
                return Ok(true);
            }
            if self.injective {
                self.used[w] = usize::MAX;
            }
            self.f[v] = usize::MAX;
        }
        Ok(false)
    }

    fn consistent(&self, depth: usize, w: usize) -> bool {
        let mut img: Tuple = Vec::new();
        let forward = self.checks[depth].iter().all(|&(slot, ti)| {
            img.clear();
            img.extend(self.from.relation(slot)[ti].iter().map(|&x| self.f[x]));
            self.to.contains(slot, &img)
        });
        if !forward || !self.injective {
            return forward;
        }
        self.to_inc[w].iter().all(|&(slot, ti)| {
            let t = &self.to.relation(slot)[ti];
            if t.iter().any(|&y| self.used[y] == usize::MAX) {
                return true;
            }
            img.clear();
            img.extend(t.iter().map(|&y| self.used[y]));
            self.from.contains(slot, &img)
        })
    }
}

/// A homomorphism `f → a` (as `map[v]`), or `None`.
pub fn find_homomorphism(
    f: &Structure,
    a: &Structure,
    limits: &Limits,
) -> Result<Option<Vec<usize>>> {
    f.signature().ensure_compatible(a.signature())?;
    let budget = limits.budget();
    MapSearch::new(f, a, false, &budget).run()
}

/// An embedding (injective, preserving and reflecting) `a → b`, or `None`.
pub fn find_embedding(a: &Structure, b: &Structure, limits: &Limits) -> Result<Option<Vec<usize>>> {
    a.signature().ensure_compatible(b.signature())?;
    let budget = limits.budget();
    MapSearch::new(a, b, true, &budget).run()
}

/// True iff every endomorphism of `a` is an automorphism.
///
/// A non-injective endomorphism lands inside `a` minus some vertex, so it is
/// enough to rule out homomorphisms into each one-vertex-deleted substructure.
pub fn is_core(a: &Structure, limits: &Limits) -> Result<bool> {
    for v in 0..a.n() {
        let rest: Vec<usize> = (0..a.n()).filter(|&x| x != v).collect();
        let (sub, _) = a.induced(&rest)?;
        if find_homomorphism(a, &sub, limits)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How the listed structures are forbidden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassKind {
    /// No listed structure embeds as an induced substructure.
    ForbiddenInduced(Vec<Structure>),
    /// No listed structure maps homomorphically (`Forb_h`).
    ForbiddenHom(Vec<Structure>),
}

/// A hereditary class of finite structures given by forbidden structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSpec {
    signature: Signature,
    kind: ClassKind,
    max_size: Option<usize>,
}

impl ClassSpec {
    pub fn new(signature: Signature, kind: ClassKind) -> Result<Self> {
        let members = match &kind {
            ClassKind::ForbiddenInduced(f) | ClassKind::ForbiddenHom(f) => f,
        };
        for f in members {
            signature.ensure_compatible(f.signature())?;
        }
        Ok(ClassSpec {
            signature,
            kind,
            max_size: None,
        })
    }

    /// All structures of the signature.
    pub fn unrestricted(signature: Signature) -> Self {
        ClassSpec {
            signature,
            kind: ClassKind::ForbiddenInduced(Vec::new()),
            max_size: None,
        }
    }

    pub fn forbidden_induced(forbidden: Vec<Structure>) -> Result<Self> {
        let sig = common_signature(&forbidden)?;
        ClassSpec::new(sig, ClassKind::ForbiddenInduced(forbidden))
    }

    pub fn forbidden_hom(forbidden: Vec<Structure>) -> Result<Self> {
        let sig = common_signature(&forbidden)?;
        ClassSpec::new(sig, ClassKind::ForbiddenHom(forbidden))
    }

    /// Members have at most `cap` vertices.
    pub fn with_max_size(mut self, cap: usize) -> Self {
        self.max_size = Some(cap);
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn kind(&self) -> &ClassKind {
        &self.kind
    }

    pub fn max_size(&self) -> Option<usize> {
        self.max_size
    }

    pub fn forbidden(&self) -> &[Structure] {
        match &self.kind {
            ClassKind::ForbiddenInduced(f) | ClassKind::ForbiddenHom(f) => f,
        }
    }
}

fn common_signature(structures: &[Structure]) -> Result<Signature> {
    let Some(first) = structures.first() else {
        return Ok(Signature::graph());
    };
    for s in structures {
        first.signature().ensure_compatible(s.signature())?;
    }
    Signature::new(first.signature().arities().to_vec())
}

pub fn is_member(spec: &ClassSpec, a: &Structure, limits: &Limits) -> Result<bool> {
    spec.signature.ensure_compatible(a.signature())?;
    if spec.max_size.is_some_and(|cap| a.n() > cap) {
        return Ok(false);
    }
    for f in spec.forbidden() {
        let hit = match &spec.kind {
            ClassKind::ForbiddenInduced(_) => find_embedding(f, a, limits)?.is_some(),
            ClassKind::ForbiddenHom(_) => find_homomorphism(f, a, limits)?.is_some(),
        };
        if hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every member is a core and no homomorphism exists between distinct members.
pub fn is_minimal_family(family: &[Structure], limits: &Limits) -> Result<bool> {
    common_signature(family)?;
    for f in family {
        if !is_core(f, limits)? {
            return Ok(false);
        }
    }
    for (i, f) in family.iter().enumerate() {
        for (j, g) in family.iter().enumerate() {
            if i != j && find_homomorphism(f, g, limits)?.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Isomorphism types of induced substructures up to a size bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgeSet {
    pub bound: usize,
    /// Canonical representatives ordered by size, then canonical key.
    pub representatives: Vec<Structure>,
    keys: Vec<CanonicalKey>,
}

impl AgeSet {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn keys(&self) -> &[CanonicalKey] {
        &self.keys
    }

    pub fn contains_type(&self, s: &Structure) -> Result<bool> {
        let key = canonical_form(s)?.key;
        Ok(self.keys.contains(&key))
    }

    pub fn count_of_size(&self, k: usize) -> usize {
        self.representatives.iter().filter(|s| s.n() == k).count()
    }
}

/// Isomorphism types of non-empty induced substructures with at most `bound`
/// vertices.
pub fn age(a: &Structure, bound: usize) -> Result<AgeSet> {
    let mut types: BTreeMap<(usize, CanonicalKey), Structure> = BTreeMap::new();
    let n = a.n();
    for k in 1..=bound.min(n) {
        for subset in k_subsets(n, k) {
            let (sub, _) = a.induced(&subset)?;
            let cf = canonical_form(&sub)?;
            types.entry((k, cf.key)).or_insert(cf.structure);
        }
    }
    let (keys, representatives) = types.into_iter().map(|((_, k), s)| (k, s)).unzip();
    Ok(AgeSet {
        bound,
        representatives,
        keys,
    })
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

pub(crate) fn ensure_graph_signature(s: &Signature) -> Result<()> {
    if s.arities() == [2] {
        Ok(())
    } else {
        Err(Error::NotAGraph(format!("signature {:?}", s.arities())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{is_embedding, is_homomorphism};

    fn cycle(n: usize) -> Structure {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Structure::graph(n, &edges).unwrap()
    }

    fn path(n: usize) -> Structure {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Structure::graph(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Structure {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Structure::graph(n, &e).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn path_maps_onto_an_edge() {
        let f = find_homomorphism(&path(4), &complete(2), &lim())
            .unwrap()
            .unwrap();
        assert!(is_homomorphism(&path(4), &complete(2), &f));
    }

    #[test]
    fn odd_cycle_maps_to_triangle() {
        let f = find_homomorphism(&cycle(5), &cycle(3), &lim())
            .unwrap()
            .unwrap();
        assert!(is_homomorphism(&cycle(5), &cycle(3), &f));
        assert_eq!(
            find_homomorphism(&cycle(3), &cycle(5), &lim()).unwrap(),
            None
        );
    }

    #[test]
    fn embeddings() {
        let f = find_embedding(&complete(2), &complete(3), &lim())
            .unwrap()
            .unwrap();
        assert!(is_embedding(&complete(2), &complete(3), &f));
        assert_eq!(
            find_embedding(&path(3), &complete(3), &lim()).unwrap(),
            None
        );
        let id = find_embedding(&cycle(5), &cycle(5), &lim())
            .unwrap()
            .unwrap();
        assert!(is_embedding(&cycle(5), &cycle(5), &id));
        assert_eq!(find_embedding(&path(4), &cycle(4), &lim()).unwrap(), None);
    }

    #[test]
    fn cores() {
        for n in 1..=5 {
            assert!(is_core(&complete(n), &lim()).unwrap());
        }
        assert!(!is_core(&cycle(6), &lim()).unwrap());
        assert!(is_core(&cycle(5), &lim()).unwrap());
        assert!(!is_core(&path(3), &lim()).unwrap());
    }

    #[test]
    fn membership() {
        let cographs = ClassSpec::forbidden_induced(vec![path(4)]).unwrap();
        assert!(is_member(&cographs, &cycle(4), &lim()).unwrap());
        assert!(!is_member(&cographs, &cycle(5), &lim()).unwrap());
        let tri_free = ClassSpec::forbidden_hom(vec![cycle(3)]).unwrap();
        assert!(!is_member(&tri_free, &complete(3), &lim()).unwrap());
        let bipartite = ClassSpec::forbidden_hom(vec![cycle(3), cycle(5)]).unwrap();
        assert!(is_member(&bipartite, &cycle(4), &lim()).unwrap());
        let capped = ClassSpec::unrestricted(Signature::graph()).with_max_size(3);
        assert!(!is_member(&capped, &cycle(4), &lim()).unwrap());
        let unary = Structure::empty(2, Signature::new(vec![1]).unwrap());
        assert!(is_member(&cographs, &unary, &lim()).is_err());
    }

    #[test]
    fn minimal_families() {
        assert!(is_minimal_family(&[complete(2)], &lim()).unwrap());
        assert!(!is_minimal_family(&[cycle(3), cycle(5)], &lim()).unwrap());
        assert!(is_minimal_family(&[cycle(5)], &lim()).unwrap());
    }

    #[test]
    fn ages() {
        let a = age(&cycle(5), 3).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a.count_of_size(1), 1);
        assert_eq!(a.count_of_size(2), 2);
        assert_eq!(a.count_of_size(3), 2);
        assert!(a.contains_type(&path(3)).unwrap());
        assert!(!a.contains_type(&complete(3)).unwrap());
        let k = age(&complete(3), 2).unwrap();
        assert_eq!(k.len(), 2);
        assert!(age(&cycle(5), 0).unwrap().is_empty());
    }

    #[test]
    fn subsets_in_lexicographic_order() {
        assert_eq!(
            k_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(k_subsets(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(k_subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
