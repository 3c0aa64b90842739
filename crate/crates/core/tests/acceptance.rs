use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use relcx::amalgamation::minimal_failures;
use relcx::complexity::{lift_complexity, predict_disjoint_union, relational_complexity, Mode};
use relcx::cuts::{cut_type_classes, minimal_g_separating_cuts};
use relcx::generators::{
    complete, complete_multipartite, control_vertices, count_graphs_burnside, cycle,
    enumerate_cographs, enumerate_graphs, enumerate_graphs_exhaustive, enumerate_trees,
    gen_permutation_graph, line_graph_k33, path, petersen,
};
use relcx::homogeneity::{brute_force_uh_bounded, is_ultrahomogeneous};
use relcx::homogenization::{metric_lift, tree_homogenize, verify_rc_witness};
use relcx::morphisms::ClassSpec;
use relcx::perm::{automorphism_group, automorphism_group_colored, PermGroup};
use relcx::{GraphView, Limits, Result, Structure};

type Outcome = Result<(bool, String)>;

fn lim() -> Limits {
    Limits::default()
}

fn uh(s: &Structure) -> Result<bool> {
    Ok(is_ultrahomogeneous(s, &lim())?.ultrahomogeneous)
}

fn complement(s: &Structure) -> Result<Structure> {
    Ok(GraphView::new(s.clone())?.complement().into_structure())
}

/// Disjoint union of equal cliques, `m ≥ 0` copies.
fn is_clique_union(g: &GraphView) -> bool {
    let comps = g.components();
    let size = comps.first().map_or(0, Vec::len);
    comps.iter().all(|c| {
        c.len() == size
            && c.iter()
                .all(|&u| c.iter().all(|&v| u == v || g.has_edge(u, v)))
    })
}

fn is_five_cycle(g: &GraphView) -> bool {
    g.n() == 5 && g.is_connected() && (0..5).all(|v| g.degree(v) == 2)
}

fn in_catalog(s: &Structure) -> Result<bool> {
    let g = GraphView::new(s.clone())?;
    let c = g.complement();
    Ok(is_clique_union(&g) || is_clique_union(&c) || is_five_cycle(&g))
}

fn c1_gardiner() -> Outcome {
    let expected = [1usize, 1, 2, 4, 11, 34, 156, 1044];
    let mut counts = Vec::new();
    let mut uh_count = 0;
    let mut mismatch = Vec::new();
    for n in 0..=7 {
        let graphs = enumerate_graphs(n)?;
        if n <= 6 && enumerate_graphs_exhaustive(n)?.len() != graphs.len() {
            return Ok((false, format!("exhaustive dedup disagrees at n = {n}")));
        }
        if count_graphs_burnside(n) != graphs.len() as u128 {
            return Ok((false, format!("Burnside count disagrees at n = {n}")));
        }
        counts.push(graphs.len());
        for g in &graphs {
            let verdict = uh(g)?;
            uh_count += verdict as usize;
            if verdict != in_catalog(g)? {
                mismatch.push(g.clone());
            }
        }
    }
    let l = line_graph_k33();
    let l_ok = uh(&l)?;
    let pass = counts == expected && mismatch.is_empty() && l_ok;
    Ok((
        pass,
        format!(
            "types per n {counts:?}, {uh_count} UH, {} catalog mismatches, L(K33) uh = {l_ok}",
            mismatch.len()
        ),
    ))
}

fn c2_petersen(lifts: &mut Vec<Structure>) -> Outcome {
    let w = relational_complexity(&petersen(), &lim())?;
    let ok = verify_rc_witness(&w.witness, &lim())?;
    lifts.push(w.witness.to_structure());
    Ok((
        w.value == 3 && ok,
        format!("rc = {}, witness verifies = {ok}", w.value),
    ))
}

fn c3_cycles(lifts: &mut Vec<Structure>) -> Outcome {
    let mut values = Vec::new();
    let mut pass = true;
    for n in 3..=9 {
        let w = relational_complexity(&cycle(n)?, &lim())?;
        let want = if n <= 5 { 0 } else { 2 };
        pass &= w.value == want && w.verify(&lim())?;
        values.push(w.value);
        lifts.push(w.witness.to_structure());
    }
    Ok((pass, format!("rc(C_3..C_9) = {values:?}")))
}

fn c4_petersen_cuts() -> Outcome {
    let p = petersen();
    let cuts = minimal_g_separating_cuts(&p, &lim())?;
    let classes = cut_type_classes(&p, &cuts)?;
    let max = cuts.iter().map(|c| c.len()).max().unwrap_or(0);
    let all_types = classes.iter().max().map_or(0, |m| m + 1);
    let mut max_types: Vec<usize> = cuts
        .iter()
        .zip(&classes)
        .filter(|(c, _)| c.len() == max)
        .map(|(_, &k)| k)
        .collect();
    max_types.sort_unstable();
    max_types.dedup();
    let valid = cuts.iter().all(|c| c.validate(&p));
    Ok((
        max == 4 && all_types == 2 && valid,
        format!(
            "{} cuts, max size {max}, {all_types} isomorphism types overall, {} among maximum cuts",
            cuts.len(),
            max_types.len()
        ),
    ))
}

fn c5_trees(lifts: &mut Vec<Structure>) -> Outcome {
    let mut count = 0;
    let mut worst = 0;
    for n in 1..=9 {
        for t in enumerate_trees(n)? {
            count += 1;
            let rc = relational_complexity(&t, &lim())?;
            lifts.push(rc.witness.to_structure());
            worst = worst.max(rc.value);
            let l = tree_homogenize(&GraphView::new(t.clone())?, None)?;
            let lift_uh = uh(&l.to_structure())?;
            if rc.value > 2 || !lift_uh || l.max_ext_arity() > 2 {
                return Ok((false, format!("tree fails: {:?}", t.relation(0))));
            }
            lifts.push(l.to_structure());
        }
    }
    Ok((
        true,
        format!("{count} trees, max rc {worst}, all tree lifts UH with arity ≤ 2"),
    ))
}

fn c6_cographs(lifts: &mut Vec<Structure>) -> Outcome {
    let mut count = 0;
    let mut worst = 0;
    for n in 1..=8 {
        for (expr, g) in enumerate_cographs(n)? {
            count += 1;
            let rc = relational_complexity(&g, &lim())?;
            worst = worst.max(rc.value);
            if rc.value > 2 {
                return Ok((false, format!("cograph {expr} has rc {}", rc.value)));
            }
            lifts.push(rc.witness.to_structure());
        }
    }
    Ok((true, format!("{count} cographs, max rc {worst}")))
}

fn c7_complement(lifts: &mut Vec<Structure>) -> Outcome {
    let mut count = 0;
    for n in 1..=6 {
        for g in enumerate_graphs(n)? {
            let h = complement(&g)?;
            let (rg, rh) = (
                relational_complexity(&g, &lim())?,
                relational_complexity(&h, &lim())?,
            );
            let (lg, lh) = (lift_complexity(&g, &lim())?, lift_complexity(&h, &lim())?);
            if rg.value != rh.value || lg.value != lh.value {
                return Ok((false, format!("complement mismatch on {:?}", g.relation(0))));
            }
            for w in [rg, rh, lg, lh] {
                lifts.push(w.witness.to_structure());
            }
            count += 1;
        }
    }
    Ok((
        true,
        format!("{count} graphs with matching rc and lc under complement"),
    ))
}

fn c8_bounds(lifts: &mut Vec<Structure>) -> Outcome {
    let mut count = 0;
    for n in 1..=6 {
        for g in enumerate_graphs(n)? {
            let rc = relational_complexity(&g, &lim())?;
            let lc = lift_complexity(&g, &lim())?;
            if !(lc.value <= rc.value && rc.value < n && lc.value <= 1) {
                return Ok((false, format!("bounds fail on {:?}", g.relation(0))));
            }
            if !(rc.verify(&lim())? && lc.verify(&lim())?) {
                return Ok((false, format!("witness fails on {:?}", g.relation(0))));
            }
            lifts.push(lc.witness.to_structure());
            count += 1;
        }
    }
    Ok((
        true,
        format!("lc ≤ rc ≤ |G|−1 and lc ≤ 1 on {count} graphs"),
    ))
}

fn connected_uh_graphs(max: usize) -> Vec<Structure> {
    let mut out = Vec::new();
    for r in 1..=max {
        out.push(complete(r));
    }
    for parts in 2..=max {
        for size in 2..=max / parts {
            out.push(complete_multipartite(&vec![size; parts]));
        }
    }
    out.push(cycle(5).expect("n ≥ 3"));
    out
}

fn c9_unions(lifts: &mut Vec<Structure>) -> Outcome {
    let parts = connected_uh_graphs(5);
    let mut checked = 0;
    for i in 0..parts.len() {
        for j in i..parts.len() {
            let pair = [parts[i].clone(), parts[j].clone()];
            let u = pair[0].disjoint_union(&pair[1])?;
            if uh(&u)? {
                continue;
            }
            let rc = relational_complexity(&u, &lim())?;
            let lc = lift_complexity(&u, &lim())?;
            let prc = predict_disjoint_union(&pair, Mode::Relational, &lim())?;
            let plc = predict_disjoint_union(&pair, Mode::Lift, &lim())?;
            if prc != rc.value || plc != lc.value {
                return Ok((false, format!("prediction mismatch on parts {i}, {j}")));
            }
            lifts.push(rc.witness.to_structure());
            lifts.push(lc.witness.to_structure());
            checked += 1;
        }
    }
    let c5 = cycle(5)?;
    let c55 = relational_complexity(&c5.disjoint_union(&c5)?, &lim())?.value;
    Ok((
        c55 == 2,
        format!("{checked} non-UH unions agree, rc(C_5 + C_5) = {c55}"),
    ))
}

fn c10_cograph_failures() -> Outcome {
    let spec = ClassSpec::forbidden_induced(vec![path(4)])?;
    let failures = minimal_failures(&spec, 4, &lim())?;
    let minimal: Vec<_> = failures.iter().filter(|f| f.minimal).collect();
    let sizes: Vec<usize> = minimal.iter().map(|f| f.instance.c.n()).collect();
    Ok((
        minimal.len() == 2 && sizes.iter().all(|&s| s == 3),
        format!(
            "{} failures, {} minimal, |C| = {sizes:?}",
            failures.len(),
            minimal.len()
        ),
    ))
}

fn sorted_elements(g: &PermGroup) -> Result<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<usize>> = g
        .elements(1000)?
        .iter()
        .map(|p| p.images().to_vec())
        .collect();
    out.sort();
    Ok(out)
}

fn c11_gadget() -> Outcome {
    let gamma = PermGroup::from_cycle_strings(3, &["(0 1 2)"])?;
    let g = gen_permutation_graph(&gamma, 1000)?;
    let controls = control_vertices(&gamma);
    let aut = automorphism_group(&g, &lim())?;
    let want = sorted_elements(&gamma)?;
    let literal = match aut.group.restrict(&controls) {
        Ok(r) => (sorted_elements(&r)? == want).to_string(),
        Err(_) => "undefined (Aut moves control vertices)".to_string(),
    };
    let mut colors = vec![1u32; g.n()];
    for &c in &controls {
        colors[c] = 0;
    }
    let stab = automorphism_group_colored(&g, &colors, &lim())?;
    let stab_ok = sorted_elements(&stab.group.restrict(&controls)?)? == want;
    let rc = relational_complexity(&g, &lim())?.value;
    Ok((
        literal == "true" && rc >= 2,
        format!(
            "|G_Γ| = {}, |Aut| = {:?}, Aut restricted to controls = Γ: {literal}; \
             control-set stabilizer induces Γ: {stab_ok}; rc = {rc}",
            g.n(),
            aut.order(),
        ),
    ))
}

fn c12_oracle(lifts: &[Structure]) -> Outcome {
    let mut graphs = 0;
    for n in 0..=5 {
        for g in enumerate_graphs(n)? {
            if uh(&g)? != brute_force_uh_bounded(&g, 10)? {
                return Ok((false, format!("disagreement on graph {:?}", g.relation(0))));
            }
            graphs += 1;
        }
    }
    let mut seen = HashSet::new();
    let mut distinct = 0;
    for l in lifts {
        if !seen.insert(l) {
            continue;
        }
        distinct += 1;
        if uh(l)? != brute_force_uh_bounded(l, 10)? {
            return Ok((false, format!("disagreement on a {}-vertex lift", l.n())));
        }
    }
    Ok((
        true,
        format!(
            "{graphs} graphs and {distinct} distinct witness lifts ({} collected) agree",
            lifts.len()
        ),
    ))
}

fn c13_metric() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=12 {
        let l = metric_lift(&GraphView::new(cycle(n)?)?)?;
        if !uh(&l.to_structure())? {
            bad.push(n);
        }
    }
    Ok((
        bad.is_empty(),
        format!("metric lifts of C_3..C_12, failures {bad:?}"),
    ))
}

fn report(id: usize, title: &str, start: Instant, outcome: Outcome) -> bool {
    let secs = start.elapsed().as_secs_f64();
    let (pass, detail) = match outcome {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "[{}] {id:>2} {title}: {detail} ({secs:.1}s)",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn main() -> ExitCode {
    let mut lifts = Vec::new();
    let mut all = true;
    macro_rules! run {
        ($id:expr, $title:expr, $e:expr) => {{
            let t = Instant::now();
            let out = $e;
            all &= report($id, $title, t, out);
        }};
    }
    run!(1, "Gardiner catalog", c1_gardiner());
    run!(2, "rc(Petersen) = 3", c2_petersen(&mut lifts));
    run!(3, "rc of cycles", c3_cycles(&mut lifts));
    run!(4, "Petersen g-cuts", c4_petersen_cuts());
    run!(5, "trees", c5_trees(&mut lifts));
    run!(6, "cographs", c6_cographs(&mut lifts));
    run!(7, "complement closure", c7_complement(&mut lifts));
    run!(8, "ordering and bounds", c8_bounds(&mut lifts));
    run!(9, "disjoint unions", c9_unions(&mut lifts));
    run!(10, "cograph amalgamation failures", c10_cograph_failures());
    run!(11, "G_Γ gadget", c11_gadget());
    run!(12, "oracle equivalence", c12_oracle(&lifts));
    run!(13, "metric lifts", c13_metric());
    if all {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("some acceptance criteria failed");
        ExitCode::FAILURE
    }
}
