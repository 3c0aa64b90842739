//! Permutations, permutation groups given by generators, automorphism groups
//! and orbits on tuples.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::limits::{Budget, Limits};
use crate::refine::{self, Indexed};
use crate::structure::{check_bijection, Structure, Tuple};

/// A bijection of `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        check_bijection(&images, images.len())?;
        Ok(Permutation(images))
    }

    /// Parse cycle notation such as `"(0 1 2)(3 4)"`; fixed points may be omitted.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        let mut rest = text.trim();
        let column = |rest: &str| text.len() - rest.len() + 1;
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::parse(1, column(rest), "expected '('"));
            };
            let Some(close) = body.find(')') else {
                return Err(Error::parse(1, column(rest), "unclosed cycle"));
            };
            let mut cycle = Vec::new();
            for tok in body[..close].split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(1, column(rest), format!("bad point '{tok}'")))?;
                if v >= degree {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        n: degree,
                    });
                }
                if seen[v] {
                    return Err(Error::parse(1, column(rest), format!("point {v} repeated")));
                }
                seen[v] = true;
                cycle.push(v);
            }
            for (i, &v) in cycle.iter().enumerate() {
                images[v] = cycle[(i + 1) % cycle.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Non-trivial cycles, each starting at its smallest point, ordered by it.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut i = self.0[start];
            while i != start {
                seen[i] = true;
                cycle.push(i);
                i = self.0[i];
            }
            out.push(cycle);
        }
        out
    }

    /// True iff the permutation maps every tuple of every relation into the
    /// same relation (for finite structures this also gives reflection).
    pub fn is_automorphism_of(&self, s: &Structure) -> bool {
        self.degree() == s.n() && crate::structure::is_isomorphism(s, s, &self.0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// A permutation group on `0..degree` given by generators. The identity group
/// has no generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidMap(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(PermGroup {
            degree,
            generators: gens,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
        }
    }

    /// Parse generators in cycle notation.
    pub fn from_cycle_strings(degree: usize, gens: &[&str]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| Permutation::from_cycles(degree, g))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All group elements in closure-discovery order (BFS from the identity,
    /// multiplying by generators in order). Fails once more than `cap`
    /// elements are found.
    pub fn elements(&self, cap: u64) -> Result<Vec<Permutation>> {
        if cap == 0 {
            return Err(Error::Precondition("cap must be at least 1".into()));
        }
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    if order.len() as u64 >= cap {
                        return Err(Error::LimitExceeded {
                            what: "group order",
                            limit: cap,
                        });
                    }
                    order.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        Ok(order)
    }

    /// Exact group order by closure, or `LimitExceeded` above `cap`.
    pub fn order(&self, cap: u64) -> Result<u64> {
        Ok(self.elements(cap)?.len() as u64)
    }

    /// Orbits on points, each sorted, ordered by smallest point.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.generators {
            for i in 0..self.degree {
                uf.union(i, g.apply(i));
            }
        }
        uf.classes()
    }

    /// Orbit partition of the k-tuples of `0..degree` (only injective ones when
    /// `injective` is set), computed by union-find over generator images.
    pub fn orbits_on_tuples(
        &self,
        k: usize,
        injective: bool,
        limits: &Limits,
    ) -> Result<OrbitPartition> {
        OrbitPartition::compute(self, k, injective, limits)
    }

    pub fn is_k_transitive(&self, k: usize, limits: &Limits) -> Result<bool> {
        if k == 0 || k > self.degree {
            return Err(Error::Precondition(format!(
                "transitivity degree {k} outside 1..={}",
                self.degree
            )));
        }
        Ok(self.orbits_on_tuples(k, true, limits)?.count() == 1)
    }

    /// The action on `points` (which must be invariant), relabeled to
    /// `0..points.len()` in the order given.
    pub fn restrict(&self, points: &[usize]) -> Result<PermGroup> {
        let mut pos = vec![usize::MAX; self.degree];
        for (i, &p) in points.iter().enumerate() {
            pos[p] = i;
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            let mut img = Vec::with_capacity(points.len());
            for &p in points {
                let q = pos[g.apply(p)];
                if q == usize::MAX {
                    return Err(Error::Precondition(format!(
                        "point set is not invariant under {g}"
                    )));
                }
                img.push(q);
            }
            gens.push(Permutation::new(img)?);
        }
        PermGroup::new(points.len(), gens)
    }
}

/// Partition of k-tuples into orbits.
///
/// Orbit ids run `0..count` in increasing order of their canonical
/// representative, the lexicographically least tuple in the orbit.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    degree: usize,
    arity: usize,
    injective: bool,
    /// Orbit id per tuple code (`u32::MAX` for excluded tuples).
    ids: Vec<u32>,
    reps: Vec<Tuple>,
    sizes: Vec<usize>,
}

impl OrbitPartition {
    fn compute(g: &PermGroup, k: usize, injective: bool, limits: &Limits) -> Result<Self> {
        let n = g.degree();
        if k == 0 {
            return Err(Error::Precondition("orbit arity must be at least 1".into()));
        }
        if injective && n < k {
            return Err(Error::Precondition(format!(
                "no injective {k}-tuples on {n} points"
            )));
        }
        let total = (n as u64)
            .checked_pow(k as u32)
            .filter(|&t| t <= limits.tuples)
            .ok_or(Error::LimitExceeded {
                what: "tuple",
                limit: limits.tuples,
            })? as usize;
        let decode = |mut code: usize| {
            let mut t = vec![0; k];
            for slot in t.iter_mut().rev() {
                *slot = code % n;
                code /= n;
            }
            t
        };
        let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &v| acc * n + v);
        let valid = |t: &[usize]| !injective || (0..t.len()).all(|i| !t[..i].contains(&t[i]));
        let mut uf = UnionFind::new(total);
        let mut img = vec![0; k];
        for code in 0..total {
            let t = decode(code);
            if !valid(&t) {
                continue;
            }
            for gen in g.generators() {
                for (slot, &v) in img.iter_mut().zip(&t) {
                    *slot = gen.apply(v);
                }
                uf.union(code, encode(&img));
            }
        }
        let mut ids = vec![u32::MAX; total];
        let mut root_id = vec![u32::MAX; total];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for code in 0..total {
            let t = decode(code);
            if !valid(&t) {
                continue;
            }
            let r = uf.find(code);
            if root_id[r] == u32::MAX {
                root_id[r] = reps.len() as u32;
                reps.push(t);
                sizes.push(0);
            }
            ids[code] = root_id[r];
            sizes[root_id[r] as usize] += 1;
        }
        Ok(OrbitPartition {
            degree: n,
            arity: k,
            injective,
            ids,
            reps,
            sizes,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn injective(&self) -> bool {
        self.injective
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn representative(&self, id: usize) -> &[usize] {
        &self.reps[id]
    }

    pub fn representatives(&self) -> &[Tuple] {
        &self.reps
    }

    pub fn size(&self, id: usize) -> usize {
        self.sizes[id]
    }

    fn code(&self, t: &[usize]) -> Option<usize> {
        if t.len() != self.arity || t.iter().any(|&v| v >= self.degree) {
            return None;
        }
        Some(t.iter().fold(0usize, |acc, &v| acc * self.degree + v))
    }

    /// Orbit id of a tuple, `None` if the tuple is not part of the partition.
    pub fn orbit_of(&self, t: &[usize]) -> Option<usize> {
        let id = self.ids[self.code(t)?];
        (id != u32::MAX).then_some(id as usize)
    }

    /// Tuples of every orbit, each list sorted lexicographically.
    pub fn orbits(&self) -> Vec<Vec<Tuple>> {
        let mut out = vec![Vec::new(); self.count()];
        let n = self.degree;
        let k = self.arity;
        for (code, &id) in self.ids.iter().enumerate() {
            if id == u32::MAX {
                continue;
            }
            let mut t = vec![0; k];
            let mut c = code;
            for slot in t.iter_mut().rev() {
                *slot = c % n;
                c /= n;
            }
            out[id as usize].push(t);
        }
        out
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Union keeping the smaller root.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

/// Automorphism group with the stabilizer chain that produced it.
#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    pub group: PermGroup,
    /// Base points `b_1, .., b_m`; their pointwise stabilizer is trivial.
    pub base: Vec<usize>,
    /// `|G_i : G_{i+1}|`, the orbit length of `b_i` under the stabilizer of
    /// the preceding base points.
    pub orbit_lengths: Vec<usize>,
}

impl AutomorphismGroup {
    /// Exact order from the stabilizer chain; `None` on `u128` overflow.
    pub fn order(&self) -> Option<u128> {
        self.orbit_lengths
            .iter()
            .try_fold(1u128, |acc, &l| acc.checked_mul(l as u128))
    }
}

/// Generators of `Aut(A)`.
pub fn automorphism_group(a: &Structure, limits: &Limits) -> Result<AutomorphismGroup> {
    automorphism_group_colored(a, &vec![0; a.n()], limits)
}

/// Generators of the group of automorphisms of `a` that preserve the vertex
/// coloring `colors`.
pub fn automorphism_group_colored(
    a: &Structure,
    colors: &[u32],
    limits: &Limits,
) -> Result<AutomorphismGroup> {
    let budget = limits.budget();
    let ix = Indexed::new(a);
    automorphisms_with(&ix, colors, &budget)
}

/// Backtracking search along a base chosen by individualizing the first vertex
/// of the first non-singleton cell. Levels are processed deepest first; at each
/// level one automorphism is searched for every cell vertex not yet in the
/// orbit generated so far, so the collected generators form a strong
/// generating set.
pub(crate) fn automorphisms_with(
    ix: &Indexed,
    colors: &[u32],
    budget: &Budget,
) -> Result<AutomorphismGroup> {
    let n = ix.n();
    let mut c0 = colors.to_vec();
    refine::refine_one(ix, &mut c0);
    let mut node_colors = vec![c0];
    let mut base = Vec::new();
    while let Some(cell) = refine::target_cell(node_colors.last().unwrap()) {
        budget.tick()?;
        let c = node_colors.last().unwrap();
        let v = c.iter().position(|&x| x == cell).unwrap();
        base.push(v);
        let mut next = refine::individualize(c, v);
        refine::refine_one(ix, &mut next);
        node_colors.push(next);
    }
    let mut gens: Vec<Permutation> = Vec::new();
    let mut orbit_lengths = vec![1; base.len()];
    for i in (0..base.len()).rev() {
        let c = &node_colors[i];
        let b = base[i];
        let mut orbit = point_orbit(n, &gens, b);
        let ca = refine::individualize(c, b);
        for w in 0..n {
            if c[w] != c[b] || orbit[w] {
                continue;
            }
            let cb = refine::individualize(c, w);
            if let Some(f) = refine::colored_isomorphism(ix, ix, ca.clone(), cb, budget)? {
                gens.push(Permutation(f));
                orbit = point_orbit(n, &gens, b);
            }
        }
        orbit_lengths[i] = orbit.iter().filter(|&&x| x).count();
    }
    gens.reverse();
    Ok(AutomorphismGroup {
        group: PermGroup::new(n, gens)?,
        base,
        orbit_lengths,
    })
}

fn point_orbit(n: usize, gens: &[Permutation], start: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    fn cycle(n: usize) -> Structure {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
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

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::from_cycles(5, "(0 1 2)(3 4)").unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(Permutation::from_cycles(3, "(0 3)").is_err());
        assert!(Permutation::from_cycles(3, "(0 1").is_err());
        assert!(Permutation::from_cycles(3, "(0 1)(1 2)").is_err());
    }

    #[test]
    fn composition_applies_right_operand_first() {
        let a = Permutation::from_cycles(3, "(0 1)").unwrap();
        let b = Permutation::from_cycles(3, "(1 2)").unwrap();
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(a.compose(&b).apply(0), 1);
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn group_orders_by_closure() {
        let c3 = PermGroup::from_cycle_strings(3, &["(0 1 2)"]).unwrap();
        assert_eq!(c3.order(100).unwrap(), 3);
        assert_eq!(PermGroup::trivial(5).order(1).unwrap(), 1);
        let s4 = PermGroup::from_cycle_strings(4, &["(0 1)", "(0 1 2 3)"]).unwrap();
        assert_eq!(s4.order(100).unwrap(), 24);
        assert!(matches!(s4.order(10), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn automorphism_orders_of_cliques_and_cycles() {
        for n in 1..=6 {
            let aut = automorphism_group(&complete(n), &limits()).unwrap();
            assert_eq!(aut.order().unwrap(), (1..=n as u128).product::<u128>());
            assert_eq!(
                aut.group.order(10_000).unwrap() as u128,
                aut.order().unwrap()
            );
        }
        for n in 3..=9 {
            let aut = automorphism_group(&cycle(n), &limits()).unwrap();
            assert_eq!(aut.order().unwrap(), 2 * n as u128);
            for g in aut.group.generators() {
                assert!(g.is_automorphism_of(&cycle(n)));
            }
        }
    }

    #[test]
    fn transitivity_examples() {
        let s4 = PermGroup::from_cycle_strings(4, &["(0 1)", "(0 1 2 3)"]).unwrap();
        assert!(s4.is_k_transitive(4, &limits()).unwrap());
        let c3 = PermGroup::from_cycle_strings(3, &["(0 1 2)"]).unwrap();
        assert!(!c3.is_k_transitive(2, &limits()).unwrap());
        let a4 = PermGroup::from_cycle_strings(4, &["(0 1 2)", "(1 2 3)"]).unwrap();
        assert!(a4.is_k_transitive(2, &limits()).unwrap());
        assert!(!a4.is_k_transitive(3, &limits()).unwrap());
        assert!(a4.is_k_transitive(5, &limits()).is_err());
    }

    #[test]
    fn orbit_ids_follow_representatives() {
        let c3 = PermGroup::from_cycle_strings(3, &["(0 1 2)"]).unwrap();
        let orb = c3.orbits_on_tuples(2, true, &limits()).unwrap();
        assert_eq!(orb.count(), 2);
        assert_eq!(orb.representative(0), &[0, 1]);
        assert_eq!(orb.representative(1), &[0, 2]);
        assert_eq!(orb.orbit_of(&[2, 0]), Some(0));
        assert_eq!(orb.orbit_of(&[1, 1]), None);
        let all = c3.orbits_on_tuples(2, false, &limits()).unwrap();
        assert_eq!(all.count(), 3);
        assert_eq!(all.orbit_of(&[1, 1]), Some(0));
    }

    #[test]
    fn restriction_to_invariant_points() {
        let g = PermGroup::from_cycle_strings(5, &["(0 1)(3 4)"]).unwrap();
        let r = g.restrict(&[3, 4]).unwrap();
        assert_eq!(r.generators()[0].images(), &[1, 0]);
        assert!(g.restrict(&[0, 3]).is_err());
    }
}
