//! Ultrahomogeneity decision with verifiable failure witnesses.
//!
//! A finite structure is ultrahomogeneous iff it has the one-point extension
//! property. The check used here is an equivalent reformulation: for every
//! vertex set `S`, the orbits of the pointwise stabilizer of `S` on the
//! remaining vertices coincide with the classes of vertices having the same
//! quantifier-free type over `S`. Two such vertices `x`, `y` make
//! `id_S ∪ {x ↦ y}` a partial isomorphism, and it extends to an automorphism
//! iff they share a stabilizer orbit.
//!
//! Sets are explored up to automorphism: the children of `S` are `S ∪ {r}` for
//! one representative `r` per stabilizer orbit. Once the stabilizer is trivial
//! and the check passes, every superset passes too, so the branch is cut.
//!
//! On failure a one-point extension witness is derived from the offending
//! partial isomorphism by extending it greedily until some vertex has no
//! valid image.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::perm::automorphisms_with;
use crate::refine::Indexed;
use crate::structure::{Lift, PartialMap, Structure};

/// A partial isomorphism together with a vertex it cannot be extended to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// The partial isomorphism `id_S ∪ {x ↦ y}` that has no automorphic extension.
    pub seed: PartialMap,
    /// An extension of `seed` (still a partial isomorphism).
    pub map: PartialMap,
    /// A vertex outside `map`'s domain with no valid image.
    pub vertex: usize,
}

impl Witness {
    /// Re-check the witness against `a`: `map` is a partial isomorphism, `vertex`
    /// is outside its domain, and no target extends it.
    pub fn verify(&self, a: &Structure) -> bool {
        let n = a.n();
        if self.vertex >= n || self.map.get(self.vertex).is_some() {
            return false;
        }
        if self.map.pairs().iter().any(|&(x, y)| x >= n || y >= n) {
            return false;
        }
        if !self.map.is_partial_isomorphism(a, a) {
            return false;
        }
        (0..n).filter(|&w| !self.map.contains_target(w)).all(|w| {
            match self.map.extended(self.vertex, w) {
                Ok(p) => !p.is_partial_isomorphism(a, a),
                Err(_) => true,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub ultrahomogeneous: bool,
    pub witness: Option<Witness>,
    /// Number of vertex sets examined.
    pub sets_examined: usize,
}

pub fn is_ultrahomogeneous(a: &Structure, limits: &Limits) -> Result<HomogeneityReport> {
    let ix = Indexed::new(a);
    let budget = limits.budget();
    let n = a.n();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::from([Vec::new()]);
    seen.insert(Vec::new());
    let mut examined = 0;
    while let Some(set) = queue.pop_front() {
        examined += 1;
        let mut colors = vec![0u32; n];
        for (i, &s) in set.iter().enumerate() {
            colors[s] = i as u32 + 1;
        }
        let stab = automorphisms_with(&ix, &colors, &budget)?;
        let orbits: Vec<Vec<usize>> = stab
            .group
            .point_orbits()
            .into_iter()
            .filter(|o| colors[o[0]] == 0)
            .collect();
        let mut orbit_of = vec![usize::MAX; n];
        for (i, o) in orbits.iter().enumerate() {
            for &v in o {
                orbit_of[v] = i;
            }
        }
        if let Some((x, y)) = type_clash(a, &set, &orbit_of) {
            let mut pairs: Vec<(usize, usize)> = set.iter().map(|&s| (s, s)).collect();
            pairs.push((x, y));
            let seed = PartialMap::new(pairs)?;
            let (map, vertex) = greedy_failure(a, &seed, &budget)?;
            return Ok(HomogeneityReport {
                ultrahomogeneous: false,
                witness: Some(Witness { seed, map, vertex }),
                sets_examined: examined,
            });
        }
        if stab.group.generators().is_empty() {
            continue;
        }
        for o in &orbits {
            let mut child = set.clone();
            child.push(o[0]);
            child.sort_unstable();
            if seen.insert(child.clone()) {
                queue.push_back(child);
            }
        }
    }
    Ok(HomogeneityReport {
        ultrahomogeneous: true,
        witness: None,
        sets_examined: examined,
    })
}

pub fn is_ultrahomogeneous_lift(x: &Lift, limits: &Limits) -> Result<HomogeneityReport> {
    is_ultrahomogeneous(&x.to_structure(), limits)
}

/// Quantifier-free type of `x` over `set`: every tuple inside `set ∪ {x}` that
/// contains `x`, with `x` written as `usize::MAX`.
fn one_type(a: &Structure, in_set: &[bool], x: usize) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for (slot, tuples) in a.relations().iter().enumerate() {
        for t in tuples {
            if t.contains(&x) && t.iter().all(|&v| v == x || in_set[v]) {
                out.push((
                    slot,
                    t.iter()
                        .map(|&v| if v == x { usize::MAX } else { v })
                        .collect(),
                ));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Tuples (by slot) inside `S ∪ {x}` that contain `x`, with `x` masked.
type OneType = Vec<(usize, Vec<usize>)>;

/// First pair of vertices with the same type over `set` lying in different
/// stabilizer orbits: type classes are scanned by least member, `x` is the
/// least member and `y` the least member outside `x`'s orbit.
fn type_clash(a: &Structure, set: &[usize], orbit_of: &[usize]) -> Option<(usize, usize)> {
    let n = a.n();
    let mut in_set = vec![false; n];
    for &s in set {
        in_set[s] = true;
    }
    let mut classes: Vec<(OneType, Vec<usize>)> = Vec::new();
    for v in (0..n).filter(|&v| !in_set[v]) {
        let t = one_type(a, &in_set, v);
        match classes.iter_mut().find(|(k, _)| *k == t) {
            Some((_, members)) => members.push(v),
            None => classes.push((t, vec![v])),
        }
    }
    classes.into_iter().find_map(|(_, members)| {
        let x = members[0];
        members
            .iter()
            .copied()
            .find(|&y| orbit_of[y] != orbit_of[x])
            .map(|y| (x, y))
    })
}

/// Extend `seed` one vertex at a time (least unmapped vertex, least valid
/// image) until a vertex has no valid image. `seed` must not extend to an
/// automorphism, so this always ends in a failure.
fn greedy_failure(
    a: &Structure,
    seed: &PartialMap,
    budget: &crate::limits::Budget,
) -> Result<(PartialMap, usize)> {
    let n = a.n();
    let mut p = seed.clone();
    loop {
        budget.tick()?;
        let Some(v) = (0..n).find(|&v| p.get(v).is_none()) else {
            return Err(Error::Precondition(
                "seed map extends to an automorphism".into(),
            ));
        };
        let next = (0..n)
            .filter(|&w| !p.contains_target(w))
            .map(|w| p.extended(v, w))
            .find_map(|q| q.ok().filter(|q| q.is_partial_isomorphism(a, a)));
        match next {
            Some(q) => p = q,
            None => return Ok((p, v)),
        }
    }
}

/// Default vertex bound for [`brute_force_uh`].
pub const BRUTE_FORCE_BOUND: usize = 6;

/// Definition-level check: every partial isomorphism extends to an
/// automorphism. All automorphisms are listed first; partial isomorphisms
/// are then enumerated with the automorphisms that still agree with them.
pub fn brute_force_uh(a: &Structure) -> Result<bool> {
    brute_force_uh_bounded(a, BRUTE_FORCE_BOUND)
}

pub fn brute_force_uh_bounded(a: &Structure, bound: usize) -> Result<bool> {
    if a.n() > bound {
        return Err(Error::LimitExceeded {
            what: "brute-force vertex bound",
            limit: bound as u64,
        });
    }
    let autos = all_automorphisms(a);
    let mut partial = vec![usize::MAX; a.n()];
    let mut used = vec![false; a.n()];
    let all: Vec<usize> = (0..autos.len()).collect();
    Ok(every_partial_iso_extends(
        a,
        &autos,
        &all,
        0,
        &mut partial,
        &mut used,
    ))
}

fn all_automorphisms(a: &Structure) -> Vec<Vec<usize>> {
    fn rec(
        a: &Structure,
        v: usize,
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = a.n();
        if v == n {
            out.push(f.clone());
            return;
        }
        for w in 0..n {
            if used[w] {
                continue;
            }
            f[v] = w;
            used[w] = true;
            if prefix_is_partial_iso(a, f, v) {
                rec(a, v + 1, f, used, out);
            }
            used[w] = false;
            f[v] = usize::MAX;
        }
    }
    let mut out = Vec::new();
    rec(
        a,
        0,
        &mut vec![usize::MAX; a.n()],
        &mut vec![false; a.n()],
        &mut out,
    );
    out
}

/// Whether the assigned part of `f` is a partial isomorphism, given that it
/// was one before `v` was assigned.
fn prefix_is_partial_iso(a: &Structure, f: &[usize], v: usize) -> bool {
    let dom: BTreeSet<usize> = (0..f.len()).filter(|&x| f[x] != usize::MAX).collect();
    let inv_of = |y: usize| f.iter().position(|&z| z == y);
    for (slot, tuples) in a.relations().iter().enumerate() {
        for t in tuples {
            if t.contains(&v) && t.iter().all(|x| dom.contains(x)) {
                let img: Vec<usize> = t.iter().map(|&x| f[x]).collect();
                if !a.contains(slot, &img) {
                    return false;
                }
            }
            let w = f[v];
            if t.contains(&w) {
                let pre: Option<Vec<usize>> = t.iter().map(|&y| inv_of(y)).collect();
                if let Some(pre) = pre {
                    if !a.contains(slot, &pre) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn every_partial_iso_extends(
    a: &Structure,
    autos: &[Vec<usize>],
    agreeing: &[usize],
    next: usize,
    f: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if agreeing.is_empty() {
        return false;
    }
    let n = a.n();
    for v in next..n {
        for w in 0..n {
            if used[w] {
                continue;
            }
            f[v] = w;
            used[w] = true;
            let ok = if prefix_is_partial_iso(a, f, v) {
                let keep: Vec<usize> = agreeing
                    .iter()
                    .copied()
                    .filter(|&i| autos[i][v] == w)
                    .collect();
                every_partial_iso_extends(a, autos, &keep, v + 1, f, used)
            } else {
                true
            };
            used[w] = false;
            f[v] = usize::MAX;
            if !ok {
                return false;
            }
        }
    }
    true
}
