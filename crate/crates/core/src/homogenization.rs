//! Explicit low-arity homogenizations: the metric lift of a connected graph
//! and the recursive lift of a vertex-colored tree.

use std::collections::{BTreeMap, BTreeSet};

use crate::complexity::extensions_invariant;
use crate::error::{Error, Result};
use crate::homogeneity::is_ultrahomogeneous;
use crate::limits::Limits;
use crate::perm::automorphism_group;
use crate::structure::{GraphView, Lift, Signature, Tuple};

/// One symmetric binary slot `dist_d` per distance `d ≥ 2` that occurs.
pub fn metric_lift(g: &GraphView) -> Result<Lift> {
    if !g.is_connected() {
        return Err(Error::Precondition(
            "metric lift needs a connected graph".into(),
        ));
    }
    let n = g.n();
    let mut by_dist: BTreeMap<usize, Vec<Tuple>> = BTreeMap::new();
    for u in 0..n {
        for (v, d) in g.distances_from(u).into_iter().enumerate() {
            let d = d.expect("connected");
            if d >= 2 {
                by_dist.entry(d).or_default().push(vec![u, v]);
            }
        }
    }
    let names = by_dist.keys().map(|d| format!("dist_{d}")).collect();
    let sig = Signature::with_names(vec![2; by_dist.len()], names)?;
    Lift::new(g.structure().clone(), sig, by_dist.into_values().collect())
}

/// Slots accumulated for one level of the tree construction.
#[derive(Default)]
struct Slots {
    names: Vec<String>,
    arities: Vec<usize>,
    rels: Vec<Vec<Tuple>>,
}

impl Slots {
    fn push(&mut self, name: String, arity: usize, mut tuples: Vec<Tuple>) {
        if tuples.is_empty() {
            return;
        }
        tuples.sort_unstable();
        tuples.dedup();
        self.names.push(name);
        self.arities.push(arity);
        self.rels.push(tuples);
    }
}

/// Homogenize a vertex-colored tree with extended relations of arity ≤ 2.
///
/// Trees of diameter at most 1 only receive their color classes. Otherwise
/// the leaves are stripped; every remaining vertex is recolored by its own
/// color together with the sorted colors of its leaf children; the smaller
/// tree is homogenized recursively; and the result is pulled back:
///
/// * the recursive lift's extended slots, and its edges as `edge'`, on the inner vertices;
/// * `u[i]`: leaves whose father has the new color `i`, and `u(R)` for each
///   unary relation `R` of the recursive lift: leaves whose father is in `R`;
/// * `b[i]`: ordered pairs of distinct leaves sharing a father of new color `i`;
/// * for each binary relation `R` of the recursive lift: `b(R)` on leaf pairs
///   whose fathers are in `R`, `c(R)` from a leaf `v` to an inner `w` with
///   `(father(v), w) ∈ R`, and `cr(R)` for `(w, father(v)) ∈ R`;
/// * `col[c]`: the input color classes when more than one color occurs.
pub fn tree_homogenize(t: &GraphView, colors: Option<&[u32]>) -> Result<Lift> {
    let n = t.n();
    if n == 0 || !t.is_connected() || t.edge_count() != n - 1 {
        return Err(Error::Precondition("input is not a tree".into()));
    }
    let codes: Vec<String> = match colors {
        Some(c) if c.len() != n => {
            return Err(Error::Precondition(format!(
                "{} colors for {n} vertices",
                c.len()
            )));
        }
        Some(c) => c.iter().map(|x| x.to_string()).collect(),
        None => vec!["0".to_string(); n],
    };
    let slots = homogenize_level(t, &codes)?;
    let sig = Signature::with_names(slots.arities, slots.names)?;
    Lift::new(t.structure().clone(), sig, slots.rels)
}

fn color_slots(codes: &[String], out: &mut Slots) {
    let mut classes: BTreeMap<&str, Vec<Tuple>> = BTreeMap::new();
    for (v, c) in codes.iter().enumerate() {
        classes.entry(c).or_default().push(vec![v]);
    }
    if classes.len() > 1 {
        for (c, members) in classes {
            out.push(format!("col[{c}]"), 1, members);
        }
    }
}

fn homogenize_level(t: &GraphView, codes: &[String]) -> Result<Slots> {
    let n = t.n();
    let adj = t.adjacency_lists();
    let mut out = Slots::default();
    let is_leaf: Vec<bool> = (0..n).map(|v| adj[v].len() == 1).collect();
    let diameter_le_1 = n <= 2;
    if diameter_le_1 {
        color_slots(codes, &mut out);
        return Ok(out);
    }
    let inner: Vec<usize> = (0..n).filter(|&v| !is_leaf[v]).collect();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in inner.iter().enumerate() {
        pos[v] = i;
    }
    let father: Vec<usize> = (0..n)
        .map(|v| if is_leaf[v] { adj[v][0] } else { usize::MAX })
        .collect();
    let new_codes: Vec<String> = inner
        .iter()
        .map(|&w| {
            let mut kids: Vec<&str> = adj[w]
                .iter()
                .filter(|&&x| is_leaf[x])
                .map(|&x| codes[x].as_str())
                .collect();
            kids.sort_unstable();
            format!("({};{})", codes[w], kids.join(","))
        })
        .collect();
    let (sub, _) = t.induced(&inner)?;
    let rec = homogenize_level(&sub, &new_codes)?;

    color_slots(codes, &mut out);
    let lift_pair = |x: &[usize]| -> Tuple { x.iter().map(|&i| inner[i]).collect() };
    let mut unary: Vec<(String, BTreeSet<usize>)> = Vec::new();
    let mut binary: Vec<(String, BTreeSet<(usize, usize)>)> = vec![(
        "edge'".to_string(),
        sub.edges()
            .into_iter()
            .flat_map(|(a, b)| [(inner[a], inner[b]), (inner[b], inner[a])])
            .collect(),
    )];
    for ((name, &arity), tuples) in rec.names.iter().zip(&rec.arities).zip(&rec.rels) {
        out.push(
            format!("^{name}"),
            arity,
            tuples.iter().map(|x| lift_pair(x)).collect(),
        );
        if arity == 1 {
            unary.push((
                format!("^{name}"),
                tuples.iter().map(|x| inner[x[0]]).collect(),
            ));
        } else {
            binary.push((
                format!("^{name}"),
                tuples.iter().map(|x| (inner[x[0]], inner[x[1]])).collect(),
            ));
        }
    }
    out.push(
        "edge'".to_string(),
        2,
        binary[0].1.iter().map(|&(a, b)| vec![a, b]).collect(),
    );

    let leaves: Vec<usize> = (0..n).filter(|&v| is_leaf[v]).collect();
    let fcode = |v: usize| new_codes[pos[father[v]]].as_str();
    let mut u: BTreeMap<&str, Vec<Tuple>> = BTreeMap::new();
    let mut b: BTreeMap<&str, Vec<Tuple>> = BTreeMap::new();
    for &v in &leaves {
        u.entry(fcode(v)).or_default().push(vec![v]);
        for &w in &leaves {
            if v != w && father[v] == father[w] {
                b.entry(fcode(v)).or_default().push(vec![v, w]);
            }
        }
    }
    for (i, members) in u {
        out.push(format!("u[{i}]"), 1, members);
    }
    for (i, pairs) in b {
        out.push(format!("b[{i}]"), 2, pairs);
    }
    for (name, rel) in &unary {
        let members = leaves
            .iter()
            .filter(|&&v| rel.contains(&father[v]))
            .map(|&v| vec![v])
            .collect();
        out.push(format!("u({name})"), 1, members);
    }
    for (name, rel) in &binary {
        let mut bj = Vec::new();
        let mut cj = Vec::new();
        let mut crj = Vec::new();
        for &v in &leaves {
            let fv = father[v];
            for &w in &leaves {
                if v != w && rel.contains(&(fv, father[w])) {
                    bj.push(vec![v, w]);
                }
            }
            for &w in &inner {
                if rel.contains(&(fv, w)) {
                    cj.push(vec![v, w]);
                }
                if rel.contains(&(w, fv)) {
                    crj.push(vec![w, v]);
                }
            }
        }
        out.push(format!("b({name})"), 2, bj);
        out.push(format!("c({name})"), 2, cj);
        out.push(format!("cr({name})"), 2, crj);
    }
    Ok(out)
}

/// Ultrahomogeneous, and every extended relation is invariant under
/// `Aut` of the shadow.
pub fn verify_rc_witness(x: &Lift, limits: &Limits) -> Result<bool> {
    let aut = automorphism_group(x.shadow(), limits)?;
    if !extensions_invariant(x, &aut.group) {
        return Ok(false);
    }
    Ok(is_ultrahomogeneous(&x.to_structure(), limits)?.ultrahomogeneous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::distinct_coloring;
    use crate::generators::{complete, cycle, enumerate_trees, path};

    fn lim() -> Limits {
        Limits::default()
    }

    fn gv(s: crate::Structure) -> GraphView {
        GraphView::new(s).unwrap()
    }

    fn uh(x: &Lift) -> bool {
        is_ultrahomogeneous(&x.to_structure(), &lim())
            .unwrap()
            .ultrahomogeneous
    }

    #[test]
    fn metric_lifts_of_cycles() {
        let l = metric_lift(&gv(cycle(6).unwrap())).unwrap();
        assert_eq!(l.ext_signature().names().unwrap(), ["dist_2", "dist_3"]);
        assert!(uh(&l));
        assert!(verify_rc_witness(&l, &lim()).unwrap());
        for n in 3..=12 {
            assert!(uh(&metric_lift(&gv(cycle(n).unwrap())).unwrap()), "C_{n}");
        }
        let k = metric_lift(&gv(complete(4))).unwrap();
        assert_eq!(k.ext_len(), 0);
        assert!(uh(&k));
        let two = gv(complete(2)).disjoint_union(&gv(complete(2)));
        assert!(metric_lift(&two).is_err());
    }

    #[test]
    fn distinct_coloring_is_not_an_rc_witness() {
        let c6 = cycle(6).unwrap();
        assert!(!verify_rc_witness(&distinct_coloring(&c6).unwrap(), &lim()).unwrap());
        assert!(verify_rc_witness(&Lift::trivial(cycle(5).unwrap()), &lim()).unwrap());
    }

    #[test]
    fn small_trees() {
        let k1 = tree_homogenize(&gv(complete(1)), None).unwrap();
        assert_eq!(k1.ext_len(), 0);
        let p3 = tree_homogenize(&gv(path(3)), None).unwrap();
        assert!(uh(&p3));
        let p5 = tree_homogenize(&gv(path(5)), None).unwrap();
        assert!(uh(&p5));
        assert!(tree_homogenize(&gv(cycle(4).unwrap()), None).is_err());
    }

    #[test]
    fn all_trees_up_to_eight_vertices() {
        for n in 1..=8 {
            for t in enumerate_trees(n).unwrap() {
                let l = tree_homogenize(&gv(t.clone()), None).unwrap();
                assert!(l.max_ext_arity() <= 2);
                assert!(uh(&l), "tree {:?}", t);
                assert!(verify_rc_witness(&l, &lim()).unwrap());
            }
        }
    }

    #[test]
    fn colored_caterpillar() {
        let t = gv(crate::Structure::graph(6, &[(0, 1), (1, 2), (2, 3), (1, 4), (2, 5)]).unwrap());
        let l = tree_homogenize(&t, Some(&[0, 1, 1, 0, 2, 2])).unwrap();
        assert!(uh(&l));
        assert!(tree_homogenize(&t, Some(&[0, 1])).is_err());
    }
}
