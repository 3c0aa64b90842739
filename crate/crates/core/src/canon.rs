//! Canonical forms and isomorphism search.

use crate::error::Result;
use crate::limits::{Budget, Limits};
use crate::refine::{self, Indexed};
use crate::structure::{Structure, Tuple};

/// Canonical form: the relabeling whose relation encoding is lexicographically
/// least over all vertex permutations.
///
/// The encoding lists, for each new label `j` in turn and each slot, one bit
/// per tuple over labels `0..=j` that contains `j` (in lexicographic order).
/// Two structures with the same signature are isomorphic iff their keys agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `labeling[old] = new`.
    pub labeling: Vec<usize>,
    pub key: CanonicalKey,
    pub structure: Structure,
}

/// Hashable isomorphism-type key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    n: usize,
    arities: Vec<usize>,
    bits: Vec<u64>,
}

pub fn canonical_form(s: &Structure) -> Result<CanonicalForm> {
    canonical_form_with(s, &Limits::default())
}

pub fn canonical_form_with(s: &Structure, limits: &Limits) -> Result<CanonicalForm> {
    let n = s.n();
    let budget = limits.budget();
    let twins = twin_classes(s);
    let mut search = CanonSearch {
        s,
        twins,
        order: Vec::with_capacity(n),
        placed: vec![false; n],
        code: Vec::new(),
        best: None,
        budget: &budget,
    };
    search.dfs()?;
    let (bits, order) = search.best.expect("at least one complete labeling");
    let mut labeling = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        labeling[old] = new;
    }
    let structure = s.relabel(&labeling)?;
    let packed = bits
        .chunks(64)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
        })
        .collect();
    Ok(CanonicalForm {
        labeling,
        key: CanonicalKey {
            n,
            arities: s.signature().arities().to_vec(),
            bits: packed,
        },
        structure,
    })
}

/// Isomorphism-type key of `s`.
pub fn canonical_key(s: &Structure) -> Result<CanonicalKey> {
    Ok(canonical_form(s)?.key)
}

/// `class[v]` is the least vertex `u` such that the transposition `(u v)` is
/// an automorphism (twin vertices).
fn twin_classes(s: &Structure) -> Vec<usize> {
    let n = s.n();
    let mut class: Vec<usize> = (0..n).collect();
    for v in 0..n {
        for u in 0..v {
            if class[u] != u {
                continue;
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(u, v);
            if crate::structure::is_homomorphism(s, s, &perm) {
                class[v] = u;
                break;
            }
        }
    }
    class
}

struct CanonSearch<'a> {
    s: &'a Structure,
    twins: Vec<usize>,
    order: Vec<usize>,
    placed: Vec<bool>,
    code: Vec<bool>,
    best: Option<(Vec<bool>, Vec<usize>)>,
    budget: &'a Budget,
}

impl CanonSearch<'_> {
    fn dfs(&mut self) -> Result<()> {
        self.budget.tick()?;
        let n = self.s.n();
        let j = self.order.len();
        if j == n {
            let better = match &self.best {
                None => true,
                Some((b, _)) => self.code < *b,
            };
            if better {
                self.best = Some((self.code.clone(), self.order.clone()));
            }
            return Ok(());
        }
        let mut tried_classes: Vec<usize> = Vec::new();
        for v in 0..n {
            if self.placed[v] || tried_classes.contains(&self.twins[v]) {
                continue;
            }
            tried_classes.push(self.twins[v]);
            let start = self.code.len();
            self.push_block(v);
            let pruned = match &self.best {
                Some((b, _)) => self.code.as_slice() > &b[..self.code.len()],
                None => false,
            };
            if !pruned {
                self.placed[v] = true;
                self.order.push(v);
                self.dfs()?;
                self.order.pop();
                self.placed[v] = false;
            }
            self.code.truncate(start);
        }
        Ok(())
    }

    /// Bits for every tuple over labels `0..=j` containing `j`, where label
    /// `j` is the candidate vertex `v`.
    fn push_block(&mut self, v: usize) {
        let j = self.order.len();
        let vertex_of = |label: usize| if label == j { v } else { self.order[label] };
        let mut bits = Vec::new();
        let base = j + 1;
        for (slot, &arity) in self.s.signature().arities().iter().enumerate() {
            let mut tuple: Tuple = vec![0; arity];
            for code in 0..base.pow(arity as u32) {
                let mut c = code;
                let mut has_j = false;
                for t in tuple.iter_mut().rev() {
                    let label = c % base;
                    c /= base;
                    has_j |= label == j;
                    *t = vertex_of(label);
                }
                if has_j {
                    bits.push(self.s.contains(slot, &tuple));
                }
            }
        }
        self.code.extend(bits);
    }
}

/// The lexicographically first isomorphism `a → b` (as `f[v]`), searching
/// vertices of `a` in index order and candidate images in ascending order.
pub fn find_isomorphism(a: &Structure, b: &Structure) -> Result<Option<Vec<usize>>> {
    find_isomorphism_with(a, b, &Limits::default())
}

pub fn find_isomorphism_with(
    a: &Structure,
    b: &Structure,
    limits: &Limits,
) -> Result<Option<Vec<usize>>> {
    a.signature().ensure_compatible(b.signature())?;
    if a.n() != b.n() {
        return Ok(None);
    }
    if (0..a.signature().len()).any(|i| a.relation(i).len() != b.relation(i).len()) {
        return Ok(None);
    }
    let (ia, ib) = (Indexed::new(a), Indexed::new(b));
    let (mut ca, mut cb) = (vec![0; a.n()], vec![0; b.n()]);
    refine::refine(&mut [(&ia, &mut ca), (&ib, &mut cb)]);
    if refine::histogram(&ca) != refine::histogram(&cb) {
        return Ok(None);
    }
    let budget = limits.budget();
    let mut st = LexIso {
        a,
        b,
        inc_a: a.incidence(),
        inc_b: b.incidence(),
        ca,
        cb,
        fwd: vec![usize::MAX; a.n()],
        bwd: vec![usize::MAX; b.n()],
        budget: &budget,
    };
    if st.dfs(0)? {
        Ok(Some(st.fwd))
    } else {
        Ok(None)
    }
}

struct LexIso<'a> {
    a: &'a Structure,
    b: &'a Structure,
    inc_a: Vec<Vec<(usize, usize)>>,
    inc_b: Vec<Vec<(usize, usize)>>,
    ca: Vec<u32>,
    cb: Vec<u32>,
    fwd: Vec<usize>,
    bwd: Vec<usize>,
    budget: &'a Budget,
}

impl LexIso<'_> {
    fn dfs(&mut self, v: usize) -> Result<bool> {
        self.budget.tick()?;
        if v == self.a.n() {
            return Ok(true);
        }
        for w in 0..self.b.n() {
            if self.bwd[w] != usize::MAX || self.ca[v] != self.cb[w] {
                continue;
            }
            self.fwd[v] = w;
            self.bwd[w] = v;
            if self.consistent(v, w) && self.dfs(v + 1)? {
                return Ok(true);
            }
            self.fwd[v] = usize::MAX;
            self.bwd[w] = usize::MAX;
        }
        Ok(false)
    }

    fn consistent(&self, v: usize, w: usize) -> bool {
        let check = |from: &Structure, to: &Structure, inc: &[(usize, usize)], f: &[usize]| {
            inc.iter().all(|&(slot, ti)| {
                let t = &from.relation(slot)[ti];
                if t.iter().any(|&x| f[x] == usize::MAX) {
                    return true;
                }
                let img: Tuple = t.iter().map(|&x| f[x]).collect();
                to.contains(slot, &img)
            })
        };
        check(self.a, self.b, &self.inc_a[v], &self.fwd)
            && check(self.b, self.a, &self.inc_b[w], &self.bwd)
    }
}

/// Isomorphism test by individualization-refinement; faster than
/// [`find_isomorphism`] on symmetric inputs but with no ordering guarantee.
pub fn are_isomorphic(a: &Structure, b: &Structure, limits: &Limits) -> Result<bool> {
    a.signature().ensure_compatible(b.signature())?;
    let budget = limits.budget();
    let (ia, ib) = (Indexed::new(a), Indexed::new(b));
    Ok(refine::colored_isomorphism(&ia, &ib, vec![0; a.n()], vec![0; b.n()], &budget)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{is_isomorphism, Signature};

    fn cycle(n: usize) -> Structure {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Structure::graph(n, &edges).unwrap()
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let c6 = cycle(6);
        let shuffled = c6.relabel(&[3, 5, 0, 2, 4, 1]).unwrap();
        let (x, y) = (
            canonical_form(&c6).unwrap(),
            canonical_form(&shuffled).unwrap(),
        );
        assert_eq!(x.key, y.key);
        assert_eq!(x.structure, y.structure);
        let two_k3 =
            Structure::graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_ne!(canonical_key(&two_k3).unwrap(), x.key);
    }

    #[test]
    fn canonical_form_of_edgeless_graph() {
        let e = Structure::empty(9, Signature::graph());
        let cf = canonical_form(&e).unwrap();
        assert_eq!(cf.structure, e);
    }

    #[test]
    fn canonical_form_handles_ternary_slots() {
        let sig = Signature::new(vec![3]).unwrap();
        let s = Structure::new(4, sig.clone(), vec![vec![vec![0, 1, 2], vec![1, 2, 3]]]).unwrap();
        let t = s.relabel(&[2, 0, 3, 1]).unwrap();
        assert_eq!(canonical_key(&s).unwrap(), canonical_key(&t).unwrap());
        let u = Structure::new(4, sig, vec![vec![vec![0, 1, 2], vec![2, 1, 3]]]).unwrap();
        assert_ne!(canonical_key(&s).unwrap(), canonical_key(&u).unwrap());
    }

    #[test]
    fn lexicographically_first_automorphism_is_identity() {
        let c5 = cycle(5);
        let f = find_isomorphism(&c5, &c5).unwrap().unwrap();
        assert_eq!(f, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn c6_and_k33_are_not_isomorphic() {
        let mut e = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                e.push((i, j));
            }
        }
        let k33 = Structure::graph(6, &e).unwrap();
        assert_eq!(find_isomorphism(&cycle(6), &k33).unwrap(), None);
        assert!(!are_isomorphic(&cycle(6), &k33, &Limits::default()).unwrap());
    }

    #[test]
    fn complement_of_c5_is_c5() {
        let c5 = crate::structure::GraphView::new(cycle(5)).unwrap();
        let comp = c5.complement().into_structure();
        let f = find_isomorphism(&comp, &cycle(5)).unwrap().unwrap();
        assert!(is_isomorphism(&comp, &cycle(5), &f));
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let unary = Structure::empty(5, Signature::new(vec![1]).unwrap());
        assert!(find_isomorphism(&cycle(5), &unary).is_err());
    }
}
