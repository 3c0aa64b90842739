//! Bounded amalgamation search for classes of graphs.
//!
//! An instance `(A, B, C, α, β)` is encoded as a *problem structure*: the
//! vertices of `C`, then `A ∖ α(C)`, then `B ∖ β(C)`, with the edges of `A`
//! and `B` and two unary markers for the `A` side and the `B` side. Two
//! instances are isomorphic iff their problem structures are, up to swapping
//! the markers.

use std::collections::BTreeMap;

use crate::canon::{canonical_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::generators::enumerate_graphs;
use crate::limits::Limits;
use crate::morphisms::{ensure_graph_signature, find_embedding, is_member, ClassSpec};
use crate::structure::{is_embedding, GraphView, Signature, Structure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamInstance {
    pub a: Structure,
    pub b: Structure,
    pub c: Structure,
    /// Embedding `C → A`.
    pub alpha: Vec<usize>,
    /// Embedding `C → B`.
    pub beta: Vec<usize>,
}

impl AmalgamInstance {
    pub fn new(
        a: Structure,
        b: Structure,
        c: Structure,
        alpha: Vec<usize>,
        beta: Vec<usize>,
    ) -> Result<Self> {
        for s in [&a, &b, &c] {
            GraphView::new(s.clone())?;
        }
        if !is_embedding(&c, &a, &alpha) {
            return Err(Error::InvalidMap(
                "alpha is not an embedding of C into A".into(),
            ));
        }
        if !is_embedding(&c, &b, &beta) {
            return Err(Error::InvalidMap(
                "beta is not an embedding of C into B".into(),
            ));
        }
        Ok(AmalgamInstance {
            a,
            b,
            c,
            alpha,
            beta,
        })
    }

    /// The instance with `A` and `B` exchanged.
    pub fn swapped(&self) -> AmalgamInstance {
        AmalgamInstance {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.clone(),
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    /// Graph on `C`, `A ∖ α(C)`, `B ∖ β(C)` (in that order) with slots
    /// `[edge, A side, B side]`.
    pub fn problem_structure(&self) -> Structure {
        let nc = self.c.n();
        let mut a_pos = vec![usize::MAX; self.a.n()];
        let mut b_pos = vec![usize::MAX; self.b.n()];
        for (i, (&x, &y)) in self.alpha.iter().zip(&self.beta).enumerate() {
            a_pos[x] = i;
            b_pos[y] = i;
        }
        let mut next = nc;
        for p in a_pos.iter_mut().filter(|p| **p == usize::MAX) {
            *p = next;
            next += 1;
        }
        let a_end = next;
        for p in b_pos.iter_mut().filter(|p| **p == usize::MAX) {
            *p = next;
            next += 1;
        }
        let mut edges: Vec<Vec<usize>> = Vec::new();
        for t in self.a.relation(0) {
            edges.push(vec![a_pos[t[0]], a_pos[t[1]]]);
        }
        for t in self.b.relation(0) {
            edges.push(vec![b_pos[t[0]], b_pos[t[1]]]);
        }
        let side_a = (0..a_end).map(|v| vec![v]).collect();
        let side_b = (0..nc).chain(a_end..next).map(|v| vec![v]).collect();
        Structure::new(
            next,
            Signature::new(vec![2, 1, 1]).expect("positive arities"),
            vec![edges, side_a, side_b],
        )
        .expect("indices in range")
    }

    /// Isomorphism-type key with `A` and `B` unordered.
    pub fn key(&self) -> Result<CanonicalKey> {
        let k1 = canonical_key(&self.problem_structure())?;
        let k2 = canonical_key(&self.swapped().problem_structure())?;
        Ok(k1.min(k2))
    }
}

/// A verified amalgam: `γ: A → D`, `δ: B → D` embeddings with `γ∘α = δ∘β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amalgam {
    pub d: Structure,
    pub gamma: Vec<usize>,
    pub delta: Vec<usize>,
}

impl Amalgam {
    pub fn verify(
        &self,
        inst: &AmalgamInstance,
        spec: &ClassSpec,
        limits: &Limits,
    ) -> Result<bool> {
        let commutes = inst
            .alpha
            .iter()
            .zip(&inst.beta)
            .all(|(&x, &y)| self.gamma[x] == self.delta[y]);
        Ok(commutes
            && is_embedding(&inst.a, &self.d, &self.gamma)
            && is_embedding(&inst.b, &self.d, &self.delta)
            && is_member(spec, &self.d, limits)?)
    }
}

/// Partial injective matchings of `left` into `right`, the empty one first,
/// then by size and lexicographically.
fn matchings(left: &[usize], right: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        left: &[usize],
        right: &[usize],
        i: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == left.len() {
            out.push(cur.clone());
            return;
        }
        rec(left, right, i + 1, used, cur, out);
        for (j, &r) in right.iter().enumerate() {
            if !used[j] {
                used[j] = true;
                cur.push((left[i], r));
                rec(left, right, i + 1, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(
        left,
        right,
        0,
        &mut vec![false; right.len()],
        &mut Vec::new(),
        &mut out,
    );
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    out
}

/// First amalgam of the instance inside the class: identifications of
/// `B ∖ β(C)` with `A ∖ α(C)` (none first), then cross-edge sets between
/// the unidentified parts (none first).
pub fn amalgamate(
    inst: &AmalgamInstance,
    spec: &ClassSpec,
    limits: &Limits,
) -> Result<Option<Amalgam>> {
    ensure_graph_signature(spec.signature())?;
    let budget = limits.budget();
    let an = inst.a.n();
    let mut in_c_a = vec![false; an];
    for &x in &inst.alpha {
        in_c_a[x] = true;
    }
    let mut c_of_b = vec![usize::MAX; inst.b.n()];
    for (i, &y) in inst.beta.iter().enumerate() {
        c_of_b[y] = i;
    }
    let a_rest: Vec<usize> = (0..an).filter(|&x| !in_c_a[x]).collect();
    let b_rest: Vec<usize> = (0..inst.b.n())
        .filter(|&y| c_of_b[y] == usize::MAX)
        .collect();
    for matching in matchings(&b_rest, &a_rest) {
        let mut delta = vec![usize::MAX; inst.b.n()];
        for (y, &i) in c_of_b.iter().enumerate() {
            if i != usize::MAX {
                delta[y] = inst.alpha[i];
            }
        }
        for &(y, x) in &matching {
            delta[y] = x;
        }
        let mut next = an;
        let mut fresh = Vec::new();
        for &y in &b_rest {
            if delta[y] == usize::MAX {
                delta[y] = next;
                fresh.push(next);
                next += 1;
            }
        }
        let a_free: Vec<usize> = a_rest
            .iter()
            .copied()
            .filter(|x| !matching.iter().any(|&(_, m)| m == *x))
            .collect();
        let cross: Vec<(usize, usize)> = a_free
            .iter()
            .flat_map(|&x| fresh.iter().map(move |&y| (x, y)))
            .collect();
        if cross.len() > 24 {
            return Err(Error::LimitExceeded {
                what: "amalgam cross pairs",
                limit: 24,
            });
        }
        let mut base_edges: Vec<(usize, usize)> = GraphView::new(inst.a.clone())?.edges();
        for (u, v) in GraphView::new(inst.b.clone())?.edges() {
            base_edges.push((delta[u], delta[v]));
        }
        let gamma: Vec<usize> = (0..an).collect();
        for mask in 0u32..(1 << cross.len()) {
            budget.tick()?;
            let mut edges = base_edges.clone();
            edges.extend(
                (0..cross.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| cross[i]),
            );
            let d = Structure::graph(next, &edges)?;
            if !is_embedding(&inst.a, &d, &gamma) || !is_embedding(&inst.b, &d, &delta) {
                break;
            }
            if is_member(spec, &d, limits)? {
                return Ok(Some(Amalgam {
                    d,
                    gamma,
                    delta: delta.clone(),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub instance: AmalgamInstance,
    pub minimal: bool,
}

/// All embeddings `c → a` in lexicographic order.
fn all_embeddings(c: &Structure, a: &Structure) -> Vec<Vec<usize>> {
    fn rec(
        c: &Structure,
        a: &Structure,
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if f.len() == c.n() {
            if is_embedding(c, a, f) {
                out.push(f.clone());
            }
            return;
        }
        for w in 0..a.n() {
            if !used[w] {
                used[w] = true;
                f.push(w);
                rec(c, a, f, used, out);
                f.pop();
                used[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(c, a, &mut Vec::new(), &mut vec![false; a.n()], &mut out);
    out
}

/// Whether the problem structure of `small` embeds into that of `big`
/// respecting sides, with `A` and `B` possibly exchanged.
fn failure_embeds(small: &AmalgamInstance, big: &AmalgamInstance, limits: &Limits) -> Result<bool> {
    let target = big.problem_structure();
    for s in [
        small.problem_structure(),
        small.swapped().problem_structure(),
    ] {
        if find_embedding(&s, &target, limits)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All amalgamation failures with `|A|, |B| ≤ m` up to isomorphism of
/// triples, ordered by problem-structure size, `|C|` and canonical key.
/// A failure is minimal when no other failure embeds into it.
pub fn minimal_failures(spec: &ClassSpec, m: usize, limits: &Limits) -> Result<Vec<Failure>> {
    ensure_graph_signature(spec.signature())?;
    if m == 0 {
        return Err(Error::Precondition("size bound must be at least 1".into()));
    }
    let mut members: Vec<Structure> = Vec::new();
    for n in 0..=m {
        for g in enumerate_graphs(n)? {
            if is_member(spec, &g, limits)? {
                members.push(g);
            }
        }
    }
    let mut found: BTreeMap<(usize, usize, CanonicalKey), AmalgamInstance> = BTreeMap::new();
    let mut seen = std::collections::HashSet::new();
    for c in &members {
        let hosts: Vec<(&Structure, Vec<Vec<usize>>)> = members
            .iter()
            .filter(|a| a.n() >= c.n())
            .map(|a| (a, all_embeddings(c, a)))
            .filter(|(_, e)| !e.is_empty())
            .collect();
        for (i, (a, alphas)) in hosts.iter().enumerate() {
            for (b, betas) in &hosts[i..] {
                for alpha in alphas {
                    for beta in betas {
                        let inst = AmalgamInstance {
                            a: (*a).clone(),
                            b: (*b).clone(),
                            c: c.clone(),
                            alpha: alpha.clone(),
                            beta: beta.clone(),
                        };
                        let key = inst.key()?;
                        if !seen.insert(key.clone()) {
                            continue;
                        }
                        if amalgamate(&inst, spec, limits)?.is_none() {
                            let size = a.n() + b.n() - c.n();
                            found.insert((size, c.n(), key), inst);
                        }
                    }
                }
            }
        }
    }
    let failures: Vec<AmalgamInstance> = found.into_values().collect();
    let mut out = Vec::with_capacity(failures.len());
    for (i, f) in failures.iter().enumerate() {
        let mut minimal = true;
        for (j, g) in failures.iter().enumerate() {
            if i != j && failure_embeds(g, f, limits)? {
                minimal = false;
                break;
            }
        }
        out.push(Failure {
            instance: f.clone(),
            minimal,
        });
    }
    Ok(out)
}

/// `true` when no failure exists at the bound; otherwise the first failure.
pub fn has_amalgamation_property(
    spec: &ClassSpec,
    m: usize,
    limits: &Limits,
) -> Result<(bool, Option<Failure>)> {
    let failures = minimal_failures(spec, m, limits)?;
    let first = failures.into_iter().next();
    Ok((first.is_none(), first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, empty, path};

    fn lim() -> Limits {
        Limits::default()
    }

    fn all_graphs() -> ClassSpec {
        ClassSpec::unrestricted(Signature::graph())
    }

    #[test]
    fn free_amalgam_for_all_graphs() {
        let c = complete(1);
        let inst = AmalgamInstance::new(path(3), complete(3), c, vec![0], vec![0]).unwrap();
        let am = amalgamate(&inst, &all_graphs(), &lim()).unwrap().unwrap();
        assert_eq!(am.d.n(), 5);
        assert_eq!(am.d.relation(0).len(), 2 * 5);
        assert!(am.verify(&inst, &all_graphs(), &lim()).unwrap());
    }

    #[test]
    fn instance_validation() {
        assert!(
            AmalgamInstance::new(complete(2), complete(2), empty(2), vec![0, 1], vec![0, 1])
                .is_err()
        );
        let unary = Structure::empty(1, Signature::new(vec![1]).unwrap());
        assert!(
            AmalgamInstance::new(unary.clone(), unary.clone(), unary, vec![0], vec![0]).is_err()
        );
    }

    #[test]
    fn classes_with_the_property() {
        assert!(
            has_amalgamation_property(&all_graphs(), 3, &lim())
                .unwrap()
                .0
        );
        let tri_free = ClassSpec::forbidden_hom(vec![cycle(3).unwrap()]).unwrap();
        assert!(minimal_failures(&tri_free, 3, &lim()).unwrap().is_empty());
        let cliques = ClassSpec::forbidden_induced(vec![empty(2)]).unwrap();
        assert!(has_amalgamation_property(&cliques, 3, &lim()).unwrap().0);
    }

    #[test]
    fn cograph_instances_without_amalgam() {
        let cographs = ClassSpec::forbidden_induced(vec![path(4)]).unwrap();
        let a = Structure::graph(4, &[(0, 3), (1, 3)]).unwrap();
        let inst =
            AmalgamInstance::new(a.clone(), a, empty(3), vec![0, 1, 2], vec![0, 2, 1]).unwrap();
        assert!(amalgamate(&inst, &cographs, &lim()).unwrap().is_none());
        let a2 = GraphView::new(inst.a.clone())
            .unwrap()
            .complement()
            .into_structure();
        let inst2 = AmalgamInstance::new(a2.clone(), a2, complete(3), vec![0, 1, 2], vec![0, 2, 1])
            .unwrap();
        assert!(amalgamate(&inst2, &cographs, &lim()).unwrap().is_none());
        let same = AmalgamInstance::new(
            inst.a.clone(),
            inst.a.clone(),
            empty(3),
            vec![0, 1, 2],
            vec![0, 1, 2],
        )
        .unwrap();
        let am = amalgamate(&same, &cographs, &lim()).unwrap().unwrap();
        assert!(am.verify(&same, &cographs, &lim()).unwrap());
        assert_eq!(am.d.n(), 5);
    }

    #[test]
    fn non_graph_classes_are_rejected() {
        let spec = ClassSpec::unrestricted(Signature::new(vec![3]).unwrap());
        assert!(minimal_failures(&spec, 2, &lim()).is_err());
    }

    #[test]
    fn keys_ignore_side_order() {
        let inst =
            AmalgamInstance::new(path(3), complete(2), complete(1), vec![0], vec![1]).unwrap();
        assert_eq!(inst.key().unwrap(), inst.swapped().key().unwrap());
    }
}
