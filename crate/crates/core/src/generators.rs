//! Named graph families, cograph terms, the permutation-group gadget and
//! exhaustive small-graph enumeration.

use std::collections::HashMap;
use std::fmt;

use crate::canon::{are_isomorphic, canonical_key};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::perm::PermGroup;
use crate::refine::{self, Indexed};
use crate::structure::{GraphView, Structure};

/// A named graph family with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    Empty(usize),
    CompleteMultipartite(Vec<usize>),
    DisjointCopies(usize, Box<Family>),
    Petersen,
    Kneser(usize, usize),
    Johnson(usize, usize),
    LineGraphK33,
    Matching(usize),
}

impl Family {
    /// Parse a family tag followed by its parameters, e.g. `["kneser", "5", "2"]`
    /// or `["disjoint_copies", "3", "complete", "2"]`.
    pub fn parse(tokens: &[&str]) -> Result<Family> {
        let (fam, rest) = Family::parse_prefix(tokens)?;
        if !rest.is_empty() {
            return Err(Error::Precondition(format!(
                "unexpected trailing parameters {rest:?}"
            )));
        }
        Ok(fam)
    }

    fn parse_prefix<'a, 'b>(tokens: &'a [&'b str]) -> Result<(Family, &'a [&'b str])> {
        let Some((&name, rest)) = tokens.split_first() else {
            return Err(Error::Precondition("missing family name".into()));
        };
        let num = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::Precondition(format!("expected an integer, got {s:?}")))
        };
        let take = |count: usize| -> Result<Vec<usize>> {
            if rest.len() < count {
                return Err(Error::Precondition(format!(
                    "family {name} needs {count} parameter(s)"
                )));
            }
            rest[..count].iter().map(|s| num(s)).collect()
        };
        Ok(match name {
            "complete" => (Family::Complete(take(1)?[0]), &rest[1..]),
            "cycle" => (Family::Cycle(take(1)?[0]), &rest[1..]),
            "path" => (Family::Path(take(1)?[0]), &rest[1..]),
            "empty" => (Family::Empty(take(1)?[0]), &rest[1..]),
            "matching" => (Family::Matching(take(1)?[0]), &rest[1..]),
            "petersen" => (Family::Petersen, rest),
            "line_graph_K33" | "line_graph_k33" => (Family::LineGraphK33, rest),
            "kneser" => {
                let p = take(2)?;
                (Family::Kneser(p[0], p[1]), &rest[2..])
            }
            "johnson" => {
                let p = take(2)?;
                (Family::Johnson(p[0], p[1]), &rest[2..])
            }
            "complete_multipartite" => {
                let parts = rest.iter().map(|s| num(s)).collect::<Result<Vec<_>>>()?;
                (Family::CompleteMultipartite(parts), &[][..])
            }
            "disjoint_copies" => {
                let m = take(1)?[0];
                let (base, tail) = Family::parse_prefix(&rest[1..])?;
                (Family::DisjointCopies(m, Box::new(base)), tail)
            }
            other => {
                return Err(Error::Precondition(format!("unknown family {other:?}")));
            }
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Complete(n) => write!(f, "complete {n}"),
            Family::Cycle(n) => write!(f, "cycle {n}"),
            Family::Path(n) => write!(f, "path {n}"),
            Family::Empty(n) => write!(f, "empty {n}"),
            Family::Matching(m) => write!(f, "matching {m}"),
            Family::Petersen => write!(f, "petersen"),
            Family::LineGraphK33 => write!(f, "line_graph_K33"),
            Family::Kneser(n, k) => write!(f, "kneser {n} {k}"),
            Family::Johnson(n, k) => write!(f, "johnson {n} {k}"),
            Family::CompleteMultipartite(parts) => {
                write!(f, "complete_multipartite")?;
                for p in parts {
                    write!(f, " {p}")?;
                }
                Ok(())
            }
            Family::DisjointCopies(m, base) => write!(f, "disjoint_copies {m} {base}"),
        }
    }
}

pub fn gen(family: &Family) -> Result<Structure> {
    match family {
        Family::Complete(n) => Ok(complete(*n)),
        Family::Cycle(n) => cycle(*n),
        Family::Path(n) => Ok(path(*n)),
        Family::Empty(n) => Ok(empty(*n)),
        Family::Matching(m) => Ok(matching(*m)),
        Family::Petersen => Ok(petersen()),
        Family::LineGraphK33 => Ok(line_graph_k33()),
        Family::Kneser(n, k) => kneser(*n, *k),
        Family::Johnson(n, k) => johnson(*n, *k),
        Family::CompleteMultipartite(parts) => Ok(complete_multipartite(parts)),
        Family::DisjointCopies(m, base) => Ok(disjoint_copies(*m, &gen(base)?)),
    }
}

pub fn complete(n: usize) -> Structure {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    Structure::graph(n, &e).expect("valid edges")
}

pub fn empty(n: usize) -> Structure {
    Structure::graph(n, &[]).expect("no edges")
}

/// `C_n` on `0..n` in cyclic order; needs `n ≥ 3`.
pub fn cycle(n: usize) -> Result<Structure> {
    if n < 3 {
        return Err(Error::Precondition(format!("cycle needs n >= 3, got {n}")));
    }
    let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Structure::graph(n, &e)
}

pub fn path(n: usize) -> Structure {
    let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Structure::graph(n, &e).expect("valid edges")
}

/// `m` disjoint edges `{2i, 2i+1}`.
pub fn matching(m: usize) -> Structure {
    let e: Vec<_> = (0..m).map(|i| (2 * i, 2 * i + 1)).collect();
    Structure::graph(2 * m, &e).expect("valid edges")
}

/// Parts occupy consecutive vertex ranges in the order given.
pub fn complete_multipartite(parts: &[usize]) -> Structure {
    let mut part_of = Vec::new();
    for (p, &size) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(p, size));
    }
    let n = part_of.len();
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if part_of[i] != part_of[j] {
                e.push((i, j));
            }
        }
    }
    Structure::graph(n, &e).expect("valid edges")
}

/// Copy `i` occupies vertices `i·|base| ..`.
pub fn disjoint_copies(m: usize, base: &Structure) -> Structure {
    let mut out = Structure::empty(0, base.signature().clone());
    for _ in 0..m {
        out = out.disjoint_union(base).expect("same signature");
    }
    out
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i — i+5`.
pub fn petersen() -> Structure {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((5 + i, 5 + (i + 2) % 5));
        e.push((i, i + 5));
    }
    Structure::graph(10, &e).expect("valid edges")
}

/// The 3×3 rook's graph: vertex `3i + j` is the edge `(a_i, b_j)` of `K_{3,3}`.
pub fn line_graph_k33() -> Structure {
    let mut e = Vec::new();
    for u in 0..9 {
        for v in u + 1..9 {
            if u / 3 == v / 3 || u % 3 == v % 3 {
                e.push((u, v));
            }
        }
    }
    Structure::graph(9, &e).expect("valid edges")
}

/// The k-subsets of `0..n` as bitmasks in colexicographic order.
pub fn colex_subsets(n: usize, k: usize) -> Vec<u64> {
    assert!(n < 64, "subset universe too large");
    (0u64..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

fn subset_graph(n: usize, k: usize, adjacent: impl Fn(u64, u64) -> bool) -> Result<Structure> {
    if k == 0 || k > n {
        return Err(Error::Precondition(format!(
            "subset family needs 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    if n > 20 {
        return Err(Error::Precondition(format!("n = {n} too large")));
    }
    let subs = colex_subsets(n, k);
    let mut e = Vec::new();
    for i in 0..subs.len() {
        for j in i + 1..subs.len() {
            if adjacent(subs[i], subs[j]) {
                e.push((i, j));
            }
        }
    }
    Structure::graph(subs.len(), &e)
}

/// `KG_{n,k}`: k-subsets, adjacent when disjoint.
pub fn kneser(n: usize, k: usize) -> Result<Structure> {
    subset_graph(n, k, |a, b| a & b == 0)
}

/// `J(n,k)`: k-subsets, adjacent when they share exactly `k − 1` elements.
pub fn johnson(n: usize, k: usize) -> Result<Structure> {
    subset_graph(n, k, |a, b| (a & b).count_ones() as usize + 1 == k)
}

/// A cograph term over the single-vertex graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cotree {
    K1,
    Union(Vec<Cotree>),
    Complement(Box<Cotree>),
}

impl Cotree {
    /// Parse terms such as `complement(union(K1,K1))`.
    pub fn parse(text: &str) -> Result<Cotree> {
        let mut p = TermParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Cotree::K1 => 1,
            Cotree::Union(parts) => parts.iter().map(Cotree::vertex_count).sum(),
            Cotree::Complement(e) => e.vertex_count(),
        }
    }

    pub fn evaluate(&self) -> GraphView {
        match self {
            Cotree::K1 => GraphView::from_edges(1, &[]).expect("single vertex"),
            Cotree::Union(parts) => parts.iter().fold(
                GraphView::from_edges(0, &[]).expect("empty graph"),
                |acc, p| acc.disjoint_union(&p.evaluate()),
            ),
            Cotree::Complement(e) => e.evaluate().complement(),
        }
    }
}

impl fmt::Display for Cotree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cotree::K1 => write!(f, "K1"),
            Cotree::Complement(e) => write!(f, "complement({e})"),
            Cotree::Union(parts) => {
                write!(f, "union(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct TermParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TermParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn term(&mut self) -> Result<Cotree> {
        let start = self.pos;
        match self.ident() {
            "K1" => Ok(Cotree::K1),
            "complement" => {
                if !self.eat(b'(') {
                    return Err(self.error("expected '('"));
                }
                let inner = self.term()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(Cotree::Complement(Box::new(inner)))
            }
            "union" => {
                if !self.eat(b'(') {
                    return Err(self.error("expected '('"));
                }
                let mut parts = vec![self.term()?];
                while self.eat(b',') {
                    parts.push(self.term()?);
                }
                if !self.eat(b')') {
                    return Err(self.error("expected ')' or ','"));
                }
                Ok(Cotree::Union(parts))
            }
            _ => {
                self.pos = start;
                self.skip_ws();
                Err(self.error("expected K1, union or complement"))
            }
        }
    }
}

pub fn gen_cograph(expr: &str) -> Result<Structure> {
    Ok(Cotree::parse(expr)?.evaluate().into_structure())
}

/// The graph `G_Γ`: control vertices `0..n`, then for each group element `p`
/// (closure-discovery order) a path `v^p_1 .. v^p_{n+1}` whose vertex `v^p_i`
/// is joined to control `p(i)` for `i ≤ n`.
pub fn gen_permutation_graph(group: &PermGroup, cap: u64) -> Result<Structure> {
    let n = group.degree();
    let elements = group.elements(cap)?;
    let total = n + elements.len() * (n + 1);
    let mut e = Vec::new();
    for (idx, p) in elements.iter().enumerate() {
        let base = n + idx * (n + 1);
        for a in 0..n {
            e.push((base + a, base + a + 1));
            e.push((base + a, p.apply(a)));
        }
    }
    Structure::graph(total, &e)
}

/// Vertex indices of the control vertices of `G_Γ`.
pub fn control_vertices(group: &PermGroup) -> Vec<usize> {
    (0..group.degree()).collect()
}

/// Isomorphism classes of structures, bucketed by a cheap invariant.
#[derive(Debug, Default)]
pub struct IsoClasses {
    buckets: HashMap<Vec<usize>, Vec<usize>>,
    reps: Vec<Structure>,
    limits: Limits,
}

impl IsoClasses {
    pub fn new() -> Self {
        IsoClasses::default()
    }

    fn invariant(s: &Structure) -> Vec<usize> {
        let ix = Indexed::new(s);
        let mut c = vec![0; s.n()];
        refine::refine_one(&ix, &mut c);
        let mut key = vec![s.n(), s.tuple_count()];
        key.extend(refine::histogram(&c));
        key
    }

    /// Index of the class of `s`, adding it as a new representative if needed.
    /// Returns `(index, is_new)`.
    pub fn insert(&mut self, s: Structure) -> Result<(usize, bool)> {
        let key = IsoClasses::invariant(&s);
        let bucket = self.buckets.entry(key).or_default();
        for &i in bucket.iter() {
            if are_isomorphic(&self.reps[i], &s, &self.limits)? {
                return Ok((i, false));
            }
        }
        let id = self.reps.len();
        bucket.push(id);
        self.reps.push(s);
        Ok((id, true))
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representatives(&self) -> &[Structure] {
        &self.reps
    }

    pub fn into_representatives(self) -> Vec<Structure> {
        self.reps
    }
}

/// Hard cap on [`enumerate_graphs`].
pub const MAX_ENUMERATED_GRAPH_VERTICES: usize = 8;
/// Hard cap on [`enumerate_trees`].
pub const MAX_ENUMERATED_TREE_VERTICES: usize = 10;

/// One graph per isomorphism type on exactly `n` vertices, built by adding a
/// vertex with every neighbourhood to the graphs on `n − 1` vertices.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Structure>> {
    enumerate_graphs_capped(n, MAX_ENUMERATED_GRAPH_VERTICES)
}

pub fn enumerate_graphs_capped(n: usize, cap: usize) -> Result<Vec<Structure>> {
    if n > cap {
        return Err(Error::LimitExceeded {
            what: "enumerated graph vertices",
            limit: cap as u64,
        });
    }
    let mut level = vec![empty(0)];
    for m in 1..=n {
        let mut classes = IsoClasses::new();
        for g in &level {
            let edges = GraphView::new(g.clone())?.edges();
            for mask in 0u32..(1 << (m - 1)) {
                let mut e = edges.clone();
                e.extend(
                    (0..m - 1)
                        .filter(|&v| mask >> v & 1 == 1)
                        .map(|v| (v, m - 1)),
                );
                classes.insert(Structure::graph(m, &e)?)?;
            }
        }
        level = classes.into_representatives();
    }
    Ok(level)
}

/// Oracle: all labelled graphs on `n ≤ 6` vertices deduplicated by canonical form.
pub fn enumerate_graphs_exhaustive(n: usize) -> Result<Vec<Structure>> {
    if n > 6 {
        return Err(Error::LimitExceeded {
            what: "exhaustive enumeration vertices",
            limit: 6,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut seen = std::collections::BTreeMap::new();
    for mask in 0u64..(1 << pairs.len()) {
        let e: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = Structure::graph(n, &e)?;
        seen.entry(canonical_key(&g)?).or_insert(g);
    }
    Ok(seen.into_values().collect())
}

/// Number of unlabelled graphs on `n` vertices by Burnside's lemma over `S_n`
/// acting on vertex pairs.
pub fn count_graphs_burnside(n: usize) -> u128 {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let index = |a: usize, b: usize| {
        let (a, b) = (a.min(b), a.max(b));
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let all = perms(n);
    let mut total: u128 = 0;
    for p in &all {
        let mut seen = vec![false; pairs.len()];
        let mut cycles = 0;
        for s in 0..pairs.len() {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                let (a, b) = pairs[cur];
                cur = index(p[a], p[b]);
            }
        }
        total += 1u128 << cycles;
    }
    total / all.len() as u128
}

/// One tree per isomorphism type on `n` vertices, grown by leaf addition.
pub fn enumerate_trees(n: usize) -> Result<Vec<Structure>> {
    if n > MAX_ENUMERATED_TREE_VERTICES {
        return Err(Error::LimitExceeded {
            what: "enumerated tree vertices",
            limit: MAX_ENUMERATED_TREE_VERTICES as u64,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level = vec![empty(1)];
    for m in 2..=n {
        let mut classes = IsoClasses::new();
        for t in &level {
            let edges = GraphView::new(t.clone())?.edges();
            for v in 0..m - 1 {
                let mut e = edges.clone();
                e.push((v, m - 1));
                classes.insert(Structure::graph(m, &e)?)?;
            }
        }
        level = classes.into_representatives();
    }
    Ok(level)
}

/// One cotree per isomorphism type of cographs on exactly `n` vertices.
///
/// Every cograph on two or more vertices is a disjoint union of smaller
/// cographs or the complement of one, so the level `n` is the closure of
/// pairwise unions and their complements.
pub fn enumerate_cographs(n: usize) -> Result<Vec<(Cotree, Structure)>> {
    if n > MAX_ENUMERATED_GRAPH_VERTICES {
        return Err(Error::LimitExceeded {
            what: "enumerated cograph vertices",
            limit: MAX_ENUMERATED_GRAPH_VERTICES as u64,
        });
    }
    let mut levels: Vec<Vec<(Cotree, Structure)>> = vec![Vec::new()];
    for m in 1..=n {
        let mut classes = IsoClasses::new();
        let mut terms = Vec::new();
        let mut add = |t: Cotree, classes: &mut IsoClasses| -> Result<()> {
            let s = t.evaluate().into_structure();
            if classes.insert(s.clone())?.1 {
                terms.push((t, s));
            }
            Ok(())
        };
        if m == 1 {
            add(Cotree::K1, &mut classes)?;
        }
        for a in 1..=m / 2 {
            for (i, (ta, _)) in levels[a].iter().enumerate() {
                for (j, (tb, _)) in levels[m - a].iter().enumerate() {
                    if a == m - a && j < i {
                        continue;
                    }
                    let u = Cotree::Union(vec![ta.clone(), tb.clone()]);
                    add(u.clone(), &mut classes)?;
                    add(Cotree::Complement(Box::new(u)), &mut classes)?;
                }
            }
        }
        levels.push(terms);
    }
    Ok(levels.pop().unwrap_or_default())
}
