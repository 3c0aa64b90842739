//! Color refinement and individualization-refinement isomorphism search.
//!
//! Refinement is run jointly over several colored structures so that the
//! resulting color numbers are comparable between them: two vertices in
//! different structures get the same color iff their refinement signatures
//! agree at every round.

use crate::error::Result;
use crate::limits::Budget;
use crate::structure::{is_isomorphism, Structure};

/// A structure with its vertex-to-tuple incidence lists.
pub(crate) struct Indexed<'a> {
    pub(crate) s: &'a Structure,
    inc: Vec<Vec<(usize, usize)>>,
}

impl<'a> Indexed<'a> {
    pub(crate) fn new(s: &'a Structure) -> Self {
        Indexed {
            s,
            inc: s.incidence(),
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.s.n()
    }

    fn signature(&self, colors: &[u32], v: usize, out: &mut Vec<u32>) {
        let mut records: Vec<Vec<u32>> = self.inc[v]
            .iter()
            .map(|&(slot, ti)| {
                let t = &self.s.relation(slot)[ti];
                let mut r = Vec::with_capacity(t.len() + 1);
                r.push(slot as u32);
                r.extend(t.iter().map(|&e| if e == v { 0 } else { colors[e] + 1 }));
                r
            })
            .collect();
        records.sort_unstable();
        out.clear();
        out.push(colors[v]);
        for r in records {
            out.extend(r);
        }
    }
}

fn distinct(parts: &[(&Indexed, &mut Vec<u32>)]) -> usize {
    let mut all: Vec<u32> = parts.iter().flat_map(|(_, c)| c.iter().copied()).collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Refine all colorings jointly to the coarsest stable partition.
///
/// Afterwards colors are numbered `0..k` in a way that depends only on the
/// isomorphism types of the colored inputs.
pub(crate) fn refine(parts: &mut [(&Indexed, &mut Vec<u32>)]) {
    normalize(parts);
    let mut count = distinct(parts);
    loop {
        let mut sigs: Vec<(Vec<u32>, usize, usize)> = Vec::new();
        let mut buf = Vec::new();
        for (p, (ix, colors)) in parts.iter().enumerate() {
            for v in 0..ix.n() {
                ix.signature(colors, v, &mut buf);
                sigs.push((buf.clone(), p, v));
            }
        }
        sigs.sort_unstable();
        let mut next = 0u32;
        let mut prev: Option<&Vec<u32>> = None;
        let mut assigned = Vec::with_capacity(sigs.len());
        for (sig, p, v) in &sigs {
            if let Some(q) = prev {
                if q != sig {
                    next += 1;
                }
            }
            prev = Some(sig);
            assigned.push((*p, *v, next));
        }
        for (p, v, c) in assigned {
            parts[p].1[v] = c;
        }
        let new_count = if sigs.is_empty() {
            0
        } else {
            next as usize + 1
        };
        if new_count == count {
            break;
        }
        count = new_count;
    }
}

/// Renumber colors jointly to `0..k` preserving their order.
fn normalize(parts: &mut [(&Indexed, &mut Vec<u32>)]) {
    let mut all: Vec<u32> = parts.iter().flat_map(|(_, c)| c.iter().copied()).collect();
    all.sort_unstable();
    all.dedup();
    for (_, colors) in parts.iter_mut() {
        for c in colors.iter_mut() {
            *c = all.binary_search(c).unwrap() as u32;
        }
    }
}

pub(crate) fn histogram(colors: &[u32]) -> Vec<usize> {
    let k = colors.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut h = vec![0; k];
    for &c in colors {
        h[c as usize] += 1;
    }
    h
}

/// Smallest color whose class has more than one vertex.
pub(crate) fn target_cell(colors: &[u32]) -> Option<u32> {
    histogram(colors)
        .iter()
        .enumerate()
        .find(|(_, &count)| count > 1)
        .map(|(c, _)| c as u32)
}

pub(crate) fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let mut out = colors.to_vec();
    let fresh = colors.iter().copied().max().map_or(0, |m| m + 1);
    out[v] = fresh;
    out
}

/// Single-structure refinement.
pub(crate) fn refine_one(ix: &Indexed, colors: &mut Vec<u32>) {
    refine(&mut [(ix, colors)]);
}

/// Search for an isomorphism from `(a, ca)` to `(b, cb)` mapping each vertex to
/// a vertex of equal initial color. Complete: returns `None` only if no such
/// isomorphism exists.
pub(crate) fn colored_isomorphism(
    a: &Indexed,
    b: &Indexed,
    ca: Vec<u32>,
    cb: Vec<u32>,
    budget: &Budget,
) -> Result<Option<Vec<usize>>> {
    if a.n() != b.n() || !a.s.signature().compatible(b.s.signature()) {
        return Ok(None);
    }
    if (0..a.s.signature().len()).any(|i| a.s.relation(i).len() != b.s.relation(i).len()) {
        return Ok(None);
    }
    search(a, b, ca, cb, budget)
}

fn search(
    a: &Indexed,
    b: &Indexed,
    mut ca: Vec<u32>,
    mut cb: Vec<u32>,
    budget: &Budget,
) -> Result<Option<Vec<usize>>> {
    budget.tick()?;
    refine(&mut [(a, &mut ca), (b, &mut cb)]);
    if histogram(&ca) != histogram(&cb) {
        return Ok(None);
    }
    let Some(cell) = target_cell(&ca) else {
        let mut by_color = vec![usize::MAX; b.n()];
        for (w, &c) in cb.iter().enumerate() {
            by_color[c as usize] = w;
        }
        let f: Vec<usize> = ca.iter().map(|&c| by_color[c as usize]).collect();
        return Ok(is_isomorphism(a.s, b.s, &f).then_some(f));
    };
    let av = ca.iter().position(|&c| c == cell).unwrap();
    let ca2 = individualize(&ca, av);
    for w in (0..b.n()).filter(|&w| cb[w] == cell) {
        let cb2 = individualize(&cb, w);
        if let Some(f) = search(a, b, ca2.clone(), cb2, budget)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Structure;

    #[test]
    fn refinement_separates_path_ends_from_middle() {
        let p3 = Structure::graph(3, &[(0, 1), (1, 2)]).unwrap();
        let ix = Indexed::new(&p3);
        let mut c = vec![0; 3];
        refine_one(&ix, &mut c);
        assert_eq!(c[0], c[2]);
        assert_ne!(c[0], c[1]);
    }

    #[test]
    fn colored_search_finds_cycle_rotation() {
        let c5 = Structure::graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let ix = Indexed::new(&c5);
        let base = vec![0; 5];
        let budget = Budget::new(10_000);
        let f = colored_isomorphism(
            &ix,
            &ix,
            individualize(&base, 0),
            individualize(&base, 2),
            &budget,
        )
        .unwrap()
        .unwrap();
        assert_eq!(f[0], 2);
        assert!(is_isomorphism(&c5, &c5, &f));
    }

    #[test]
    fn colored_search_rejects_regular_non_isomorphic_pair() {
        let c6 = Structure::graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let two_k3 =
            Structure::graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let (a, b) = (Indexed::new(&c6), Indexed::new(&two_k3));
        let budget = Budget::new(10_000);
        assert_eq!(
            colored_isomorphism(&a, &b, vec![0; 6], vec![0; 6], &budget).unwrap(),
            None
        );
    }
}
