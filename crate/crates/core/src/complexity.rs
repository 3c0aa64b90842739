//! Relational complexity and lift complexity with verifiable witnesses.

use crate::canon::are_isomorphic;
use crate::error::{Error, Result};
use crate::homogeneity::is_ultrahomogeneous;
use crate::limits::Limits;
use crate::perm::{automorphism_group, OrbitPartition, PermGroup};
use crate::structure::{Lift, Signature, Structure, Tuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Relational,
    Lift,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Relational => "relational",
            Mode::Lift => "lift",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityWitness {
    pub value: usize,
    pub witness: Lift,
    pub mode: Mode,
}

impl ComplexityWitness {
    /// Re-check the witness against its shadow: ultrahomogeneous, extended
    /// arities at most `value`, and in relational mode every extended
    /// relation closed under `Aut` of the shadow.
    pub fn verify(&self, limits: &Limits) -> Result<bool> {
        if self.witness.max_ext_arity() > self.value {
            return Ok(false);
        }
        if self.mode == Mode::Relational {
            let aut = automorphism_group(self.witness.shadow(), limits)?;
            if !extensions_invariant(&self.witness, &aut.group) {
                return Ok(false);
            }
        }
        Ok(is_ultrahomogeneous(&self.witness.to_structure(), limits)?.ultrahomogeneous)
    }
}

/// Whether every extended relation of `x` is mapped onto itself by each
/// generator of `group`.
pub fn extensions_invariant(x: &Lift, group: &PermGroup) -> bool {
    group.generators().iter().all(|g| {
        x.ext_relations().iter().enumerate().all(|(slot, tuples)| {
            tuples.iter().all(|t| {
                let img: Tuple = t.iter().map(|&v| g.apply(v)).collect();
                tuples.binary_search(&img).is_ok() && img.len() == x.ext_signature().arity(slot)
            })
        })
    })
}

/// Orbit partitions of `Aut(A)` on injective tuples, computed on demand.
struct OrbitCache<'a> {
    group: PermGroup,
    limits: &'a Limits,
    by_arity: Vec<OrbitPartition>,
}

impl<'a> OrbitCache<'a> {
    fn new(a: &Structure, limits: &'a Limits) -> Result<Self> {
        Ok(OrbitCache {
            group: automorphism_group(a, limits)?.group,
            limits,
            by_arity: Vec::new(),
        })
    }

    fn upto(&mut self, k: usize) -> Result<&[OrbitPartition]> {
        while self.by_arity.len() < k {
            let arity = self.by_arity.len() + 1;
            self.by_arity
                .push(self.group.orbits_on_tuples(arity, true, self.limits)?);
        }
        Ok(&self.by_arity[..k])
    }
}

fn orbit_lift(a: &Structure, partitions: &[OrbitPartition]) -> Result<Lift> {
    let mut arities = Vec::new();
    let mut names = Vec::new();
    let mut rels = Vec::new();
    for part in partitions {
        for (idx, orbit) in part.orbits().into_iter().enumerate() {
            arities.push(part.arity());
            names.push(format!("orb_{}_{}", part.arity(), idx));
            rels.push(orbit);
        }
    }
    Lift::new(a.clone(), Signature::with_names(arities, names)?, rels)
}

/// `A` together with one extended slot per `Aut(A)`-orbit of injective
/// k'-tuples, `1 ≤ k' ≤ k`, ordered by arity and then by the orbit's least
/// tuple, named `orb_{arity}_{index}`.
///
/// Every invariant relation of arity `≤ k` is a union of such orbits (tuples
/// with repeated entries add nothing a partial isomorphism does not already
/// respect), and a map preserves and reflects every union of orbits iff it
/// does so for each orbit. So this lift is ultrahomogeneous exactly when the
/// lift by all invariant relations of arity `≤ k` is.
pub fn invariant_lift(a: &Structure, k: usize, limits: &Limits) -> Result<Lift> {
    if k == 0 {
        return Ok(Lift::trivial(a.clone()));
    }
    let mut cache = OrbitCache::new(a, limits)?;
    let parts = cache.upto(k.min(a.n()))?;
    orbit_lift(a, parts)
}

/// Least `k` such that [`invariant_lift`]`(a, k)` is ultrahomogeneous.
pub fn relational_complexity(a: &Structure, limits: &Limits) -> Result<ComplexityWitness> {
    if a.n() == 0 {
        return Err(Error::Precondition(
            "relational complexity needs at least one vertex".into(),
        ));
    }
    let mut cache = OrbitCache::new(a, limits)?;
    for k in 0..a.n() {
        let lift = orbit_lift(a, cache.upto(k)?)?;
        if is_ultrahomogeneous(&lift.to_structure(), limits)?.ultrahomogeneous {
            return Ok(ComplexityWitness {
                value: k,
                witness: lift,
                mode: Mode::Relational,
            });
        }
    }
    Err(Error::Precondition(
        "no invariant lift of arity below |A| is ultrahomogeneous".into(),
    ))
}

/// `A` with a distinct unary color on every vertex, slots named `color_{v}`.
pub fn distinct_coloring(a: &Structure) -> Result<Lift> {
    let n = a.n();
    let names = (0..n).map(|v| format!("color_{v}")).collect();
    let sig = Signature::with_names(vec![1; n], names)?;
    Lift::new(a.clone(), sig, (0..n).map(|v| vec![vec![v]]).collect())
}

/// 0 when `a` is ultrahomogeneous, otherwise 1 with the all-distinct coloring.
pub fn lift_complexity(a: &Structure, limits: &Limits) -> Result<ComplexityWitness> {
    if a.n() == 0 {
        return Err(Error::Precondition(
            "lift complexity needs at least one vertex".into(),
        ));
    }
    if is_ultrahomogeneous(a, limits)?.ultrahomogeneous {
        return Ok(ComplexityWitness {
            value: 0,
            witness: Lift::trivial(a.clone()),
            mode: Mode::Lift,
        });
    }
    let lift = distinct_coloring(a)?;
    if !is_ultrahomogeneous(&lift.to_structure(), limits)?.ultrahomogeneous {
        return Err(Error::Precondition(
            "distinct coloring is not ultrahomogeneous".into(),
        ));
    }
    Ok(ComplexityWitness {
        value: 1,
        witness: lift,
        mode: Mode::Lift,
    })
}

/// Complexity of a disjoint union of connected structures from its parts.
///
/// Lift mode: `max(1, lc(A_i))`. Relational mode: `max(2, rc(A_i))` when two
/// isomorphic parts have a union with `rc > 1`, else `max(1, rc(A_i))`.
pub fn predict_disjoint_union(parts: &[Structure], mode: Mode, limits: &Limits) -> Result<usize> {
    if parts.len() < 2 {
        return Err(Error::Precondition(
            "a disjoint union needs at least two parts".into(),
        ));
    }
    if let Some(i) = parts.iter().position(|p| !p.is_connected()) {
        return Err(Error::Precondition(format!("part {i} is not connected")));
    }
    let mut union = parts[0].clone();
    for p in &parts[1..] {
        union = union.disjoint_union(p)?;
    }
    if is_ultrahomogeneous(&union, limits)?.ultrahomogeneous {
        return Err(Error::Precondition(
            "the union is already ultrahomogeneous".into(),
        ));
    }
    let mut best = 0;
    match mode {
        Mode::Lift => {
            for p in parts {
                best = best.max(lift_complexity(p, limits)?.value);
            }
            Ok(best.max(1))
        }
        Mode::Relational => {
            for p in parts {
                best = best.max(relational_complexity(p, limits)?.value);
            }
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    if are_isomorphic(&parts[i], &parts[j], limits)? {
                        let pair = parts[i].disjoint_union(&parts[j])?;
                        if relational_complexity(&pair, limits)?.value > 1 {
                            return Ok(best.max(2));
                        }
                    }
                }
            }
            Ok(best.max(1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, petersen};
    use crate::structure::GraphView;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn zero_lift_is_the_structure() {
        let c6 = cycle(6).unwrap();
        let l = invariant_lift(&c6, 0, &lim()).unwrap();
        assert_eq!(l.ext_len(), 0);
        assert_eq!(l.to_structure(), c6);
    }

    #[test]
    fn six_cycle_binary_lift() {
        let c6 = cycle(6).unwrap();
        let l = invariant_lift(&c6, 2, &lim()).unwrap();
        let names = l.ext_signature().names().unwrap().to_vec();
        assert_eq!(names, ["orb_1_0", "orb_2_0", "orb_2_1", "orb_2_2"]);
        assert!(l.ext_relation(2).contains(&vec![0, 2]));
        assert!(
            is_ultrahomogeneous(&l.to_structure(), &lim())
                .unwrap()
                .ultrahomogeneous
        );
        let rc = relational_complexity(&c6, &lim()).unwrap();
        assert_eq!(rc.value, 2);
        assert!(rc.verify(&lim()).unwrap());
    }

    #[test]
    fn cycles_and_petersen() {
        for n in 3..=5 {
            assert_eq!(
                relational_complexity(&cycle(n).unwrap(), &lim())
                    .unwrap()
                    .value,
                0
            );
        }
        let p = relational_complexity(&petersen(), &lim()).unwrap();
        assert_eq!(p.value, 3);
        assert!(p.verify(&lim()).unwrap());
        let l = lift_complexity(&petersen(), &lim()).unwrap();
        assert_eq!(l.value, 1);
        assert!(l.verify(&lim()).unwrap());
        assert_eq!(
            lift_complexity(&cycle(5).unwrap(), &lim()).unwrap().value,
            0
        );
    }

    #[test]
    fn complement_of_two_five_cycles() {
        let c5 = cycle(5).unwrap();
        let u = c5.disjoint_union(&c5).unwrap();
        let comp = GraphView::new(u.clone())
            .unwrap()
            .complement()
            .into_structure();
        assert_eq!(relational_complexity(&comp, &lim()).unwrap().value, 2);
        assert_eq!(relational_complexity(&u, &lim()).unwrap().value, 2);
    }

    #[test]
    fn disjoint_union_predictions() {
        let c5 = cycle(5).unwrap();
        let k3 = complete(3);
        let parts = [c5.clone(), c5.clone()];
        assert_eq!(
            predict_disjoint_union(&parts, Mode::Lift, &lim()).unwrap(),
            1
        );
        assert_eq!(
            predict_disjoint_union(&parts, Mode::Relational, &lim()).unwrap(),
            2
        );
        let mixed = [k3.clone(), c5.clone()];
        assert_eq!(
            predict_disjoint_union(&mixed, Mode::Relational, &lim()).unwrap(),
            1
        );
        let u = k3.disjoint_union(&c5).unwrap();
        assert_eq!(relational_complexity(&u, &lim()).unwrap().value, 1);
        assert!(predict_disjoint_union(std::slice::from_ref(&c5), Mode::Lift, &lim()).is_err());
        assert!(predict_disjoint_union(&[k3.clone(), k3.clone()], Mode::Lift, &lim()).is_err());
        let two = complete(2).disjoint_union(&complete(1)).unwrap();
        assert!(predict_disjoint_union(&[two, c5], Mode::Lift, &lim()).is_err());
    }

    #[test]
    fn non_invariant_coloring_fails_relational_verification() {
        let c6 = cycle(6).unwrap();
        let w = ComplexityWitness {
            value: 1,
            witness: distinct_coloring(&c6).unwrap(),
            mode: Mode::Relational,
        };
        assert!(!w.verify(&lim()).unwrap());
        let as_lift = ComplexityWitness {
            mode: Mode::Lift,
            ..w
        };
        assert!(as_lift.verify(&lim()).unwrap());
    }
}
