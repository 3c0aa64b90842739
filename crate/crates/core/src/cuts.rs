//! Minimal g-separating g-cuts of the Gaifman graph.
//!
//! A vertex set `C` qualifies when two distinct components `A_1`, `A_2` of the
//! Gaifman graph minus `C` satisfy `C = N(A_1) ∩ N(A_2)`. Since the
//! neighbourhood of a component of `G − C` lies inside `C`, this says both are
//! full components, which makes the non-empty cuts exactly the minimal
//! separators of the connected components. The empty set qualifies iff the
//! graph is disconnected.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::generators::IsoClasses;
use crate::limits::Limits;
use crate::structure::{components_of, Signature, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GCut {
    /// The cut, sorted.
    pub cut: Vec<usize>,
    /// The two full components with the smallest least vertices.
    pub components: (Vec<usize>, Vec<usize>),
    /// No other returned cut is a proper subset of this one.
    pub inclusion_minimal: bool,
}

impl GCut {
    pub fn len(&self) -> usize {
        self.cut.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cut.is_empty()
    }

    /// Re-check the defining conditions against `a`'s Gaifman graph.
    pub fn validate(&self, a: &Structure) -> bool {
        let adj = a.gaifman_neighbors();
        let n = a.n();
        let mut removed = vec![false; n];
        for &c in &self.cut {
            if c >= n {
                return false;
            }
            removed[c] = true;
        }
        let comps = components_of(&adj, &removed);
        let (a1, a2) = &self.components;
        if a1 == a2 || !comps.contains(a1) || !comps.contains(a2) {
            return false;
        }
        let n1 = neighbourhood(&adj, a1);
        let n2 = neighbourhood(&adj, a2);
        let inter: Vec<usize> = n1.intersection(&n2).copied().collect();
        comps.len() >= 2 && inter == self.cut
    }
}

fn neighbourhood(adj: &[Vec<usize>], set: &[usize]) -> BTreeSet<usize> {
    let inside: BTreeSet<usize> = set.iter().copied().collect();
    set.iter()
        .flat_map(|&v| adj[v].iter().copied())
        .filter(|w| !inside.contains(w))
        .collect()
}

/// The two lowest full components of `G − cut`, if at least two exist.
fn full_components(adj: &[Vec<usize>], cut: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut removed = vec![false; adj.len()];
    for &c in cut {
        removed[c] = true;
    }
    let comps = components_of(adj, &removed);
    if comps.len() < 2 {
        return None;
    }
    let target: BTreeSet<usize> = cut.iter().copied().collect();
    let mut full = comps
        .into_iter()
        .filter(|d| neighbourhood(adj, d) == target);
    let first = full.next()?;
    let second = full.next()?;
    Some((first, second))
}

/// Minimal separators of the component `comp` by close-neighbourhood
/// expansion: start from `N(D)` for components `D` of `G − N[v]`, then from
/// each separator `S` and `x ∈ S` take `N(D)` for components of `G − (S ∪ N(x))`.
fn minimal_separators(
    adj: &[Vec<usize>],
    comp: &[usize],
    budget: &crate::limits::Budget,
) -> Result<BTreeSet<Vec<usize>>> {
    let n = adj.len();
    let in_comp: Vec<bool> = {
        let mut m = vec![false; n];
        for &v in comp {
            m[v] = true;
        }
        m
    };
    let seps_from = |removed: &[bool]| -> Vec<Vec<usize>> {
        let mut mask: Vec<bool> = removed.to_vec();
        for v in 0..n {
            if !in_comp[v] {
                mask[v] = true;
            }
        }
        components_of(adj, &mask)
            .into_iter()
            .map(|d| neighbourhood(adj, &d).into_iter().collect::<Vec<_>>())
            .filter(|s| !s.is_empty())
            .collect()
    };
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &v in comp {
        let mut removed = vec![false; n];
        removed[v] = true;
        for &w in &adj[v] {
            removed[w] = true;
        }
        for s in seps_from(&removed) {
            if found.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    while let Some(s) = queue.pop_front() {
        budget.tick()?;
        for &x in &s {
            let mut removed = vec![false; n];
            for &y in &s {
                removed[y] = true;
            }
            for &w in &adj[x] {
                removed[w] = true;
            }
            for t in seps_from(&removed) {
                if found.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    Ok(found)
}

fn finish(adj: &[Vec<usize>], candidates: BTreeSet<Vec<usize>>) -> Vec<GCut> {
    let mut cuts: Vec<GCut> = candidates
        .into_iter()
        .filter_map(|c| {
            full_components(adj, &c).map(|components| GCut {
                cut: c,
                components,
                inclusion_minimal: true,
            })
        })
        .collect();
    cuts.sort_by(|x, y| {
        x.cut
            .len()
            .cmp(&y.cut.len())
            .then_with(|| x.cut.cmp(&y.cut))
    });
    let sets: Vec<BTreeSet<usize>> = cuts
        .iter()
        .map(|c| c.cut.iter().copied().collect())
        .collect();
    for i in 0..cuts.len() {
        cuts[i].inclusion_minimal = !sets
            .iter()
            .enumerate()
            .any(|(j, s)| j != i && s.len() < sets[i].len() && s.is_subset(&sets[i]));
    }
    cuts
}

/// All minimal g-separating g-cuts, ordered by size and then lexicographically.
pub fn minimal_g_separating_cuts(a: &Structure, limits: &Limits) -> Result<Vec<GCut>> {
    let adj = a.gaifman_neighbors();
    let budget = limits.budget();
    let comps = components_of(&adj, &vec![false; a.n()]);
    let mut candidates = BTreeSet::new();
    if comps.len() >= 2 {
        candidates.insert(Vec::new());
    }
    for comp in &comps {
        candidates.extend(minimal_separators(&adj, comp, &budget)?);
    }
    Ok(finish(&adj, candidates))
}

/// Oracle: test every vertex subset against the definition (`n ≤ 15`).
pub fn minimal_g_separating_cuts_exhaustive(a: &Structure) -> Result<Vec<GCut>> {
    let n = a.n();
    if n > 15 {
        return Err(Error::LimitExceeded {
            what: "exhaustive cut vertices",
            limit: 15,
        });
    }
    let adj = a.gaifman_neighbors();
    let candidates = (0u32..(1 << n))
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>())
        .collect();
    Ok(finish(&adj, candidates))
}

/// Largest cut size over all members, 0 when there is none.
pub fn max_gcut_size(family: &[Structure], limits: &Limits) -> Result<usize> {
    if family.is_empty() {
        return Err(Error::Precondition("empty structure list".into()));
    }
    let mut best = 0;
    for s in family {
        let cuts = minimal_g_separating_cuts(s, limits)?;
        best = best.max(cuts.iter().map(GCut::len).max().unwrap_or(0));
    }
    Ok(best)
}

/// Isomorphism class index of each cut, where `(A, C)` and `(A, C')` are
/// equivalent when some automorphism of `A` carries `C` onto `C'`. Classes
/// are numbered in order of first appearance.
pub fn cut_type_classes(a: &Structure, cuts: &[GCut]) -> Result<Vec<usize>> {
    let mut arities = a.signature().arities().to_vec();
    arities.push(1);
    let sig = Signature::new(arities)?;
    let mut classes = IsoClasses::new();
    let mut out = Vec::with_capacity(cuts.len());
    for c in cuts {
        let mut rels = a.relations().to_vec();
        rels.push(c.cut.iter().map(|&v| vec![v]).collect());
        let marked = Structure::new(a.n(), sig.clone(), rels)?;
        out.push(classes.insert(marked)?.0);
    }
    Ok(out)
}
