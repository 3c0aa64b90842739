use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use relcx::amalgamation::{minimal_failures, Failure};
use relcx::complexity::{
    lift_complexity, predict_disjoint_union, relational_complexity, ComplexityWitness, Mode,
};
use relcx::cuts::{cut_type_classes, minimal_g_separating_cuts};
use relcx::generators::{
    enumerate_cographs, enumerate_graphs, enumerate_trees, gen, gen_cograph, gen_permutation_graph,
    Family, IsoClasses,
};
use relcx::homogeneity::is_ultrahomogeneous;
use relcx::homogenization::{metric_lift, tree_homogenize, verify_rc_witness};
use relcx::io::{serialize_lift, serialize_structure, to_graph6};
use relcx::morphisms::{find_embedding, find_homomorphism, is_core};
use relcx::perm::{automorphism_group, PermGroup};
use relcx::{GraphView, Lift, Limits, Structure};

use crate::input::{load_graph6, load_lift, load_structure, parse_class, sibling, write};
use crate::CliError;

pub struct Report {
    pub text: String,
    pub json: Value,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report { text, json }
    }
}

fn edges(s: &Structure) -> Vec<(usize, usize)> {
    s.relation(0)
        .iter()
        .filter(|t| t[0] < t[1])
        .map(|t| (t[0], t[1]))
        .collect()
}

fn graph_view(s: Structure) -> Result<GraphView, CliError> {
    Ok(GraphView::new(s)?)
}

pub fn uh(lift: &Lift, limits: &Limits) -> Result<Report, CliError> {
    let s = lift.to_structure();
    let r = is_ultrahomogeneous(&s, limits)?;
    let mut text = format!("ultrahomogeneous: {}\n", r.ultrahomogeneous);
    let witness = match &r.witness {
        Some(w) => {
            let _ = writeln!(text, "seed: {:?}", w.seed.pairs());
            let _ = writeln!(text, "extended map: {:?}", w.map.pairs());
            let _ = writeln!(text, "vertex without image: {}", w.vertex);
            json!({"seed": w.seed.pairs(), "map": w.map.pairs(), "vertex": w.vertex})
        }
        None => Value::Null,
    };
    Ok(Report::new(
        text,
        json!({"ultrahomogeneous": r.ultrahomogeneous, "sets_examined": r.sets_examined, "witness": witness}),
    ))
}

fn complexity_report(
    name: &str,
    w: &ComplexityWitness,
    input: &Path,
    out: Option<&Path>,
) -> Result<Report, CliError> {
    let path: PathBuf = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sibling(input, &format!("{name}-witness.json")));
    write(&path, &serialize_lift(&w.witness))?;
    let text = format!(
        "{name} = {}\nwitness: {} ({} extended slots, mode {})\n",
        w.value,
        path.display(),
        w.witness.ext_len(),
        w.mode.name()
    );
    Ok(Report::new(
        text,
        json!({
            name: w.value,
            "mode": w.mode.name(),
            "witness_path": path.display().to_string(),
            "extended_slots": w.witness.ext_len(),
        }),
    ))
}

pub fn rc(input: &Path, out: Option<&Path>, limits: &Limits) -> Result<Report, CliError> {
    let s = load_structure(input)?;
    complexity_report("rc", &relational_complexity(&s, limits)?, input, out)
}

pub fn lc(input: &Path, out: Option<&Path>, limits: &Limits) -> Result<Report, CliError> {
    let s = load_structure(input)?;
    complexity_report("lc", &lift_complexity(&s, limits)?, input, out)
}

pub fn verify(input: &Path, kind: &str, limits: &Limits) -> Result<Report, CliError> {
    let lift = load_lift(input)?;
    let ok = match kind {
        "rc" => verify_rc_witness(&lift, limits)?,
        "lc" => is_ultrahomogeneous(&lift.to_structure(), limits)?.ultrahomogeneous,
        other => return Err(CliError::Usage(format!("unknown witness kind {other:?}"))),
    };
    Ok(Report::new(
        format!(
            "verified: {ok}\nmax extended arity: {}\n",
            lift.max_ext_arity()
        ),
        json!({"verified": ok, "kind": kind, "max_extended_arity": lift.max_ext_arity()}),
    ))
}

pub fn aut(s: &Structure, limits: &Limits) -> Result<Report, CliError> {
    let a = automorphism_group(s, limits)?;
    let order = a
        .order()
        .map(|o| o.to_string())
        .unwrap_or_else(|| "overflow".into());
    let mut text = format!(
        "order = {order}\ngenerators: {}\n",
        a.group.generators().len()
    );
    for g in a.group.generators() {
        let _ = writeln!(text, "  {g}");
    }
    let _ = writeln!(text, "base: {:?}", a.base);
    let _ = writeln!(text, "vertex orbits: {:?}", a.group.point_orbits());
    let gens: Vec<Value> = a
        .group
        .generators()
        .iter()
        .map(|g| json!({"cycles": g.to_string(), "images": g.images()}))
        .collect();
    Ok(Report::new(
        text,
        json!({
            "order": order,
            "generators": gens,
            "base": a.base,
            "orbit_lengths": a.orbit_lengths,
            "vertex_orbits": a.group.point_orbits(),
        }),
    ))
}

pub fn orbits(s: &Structure, arity: usize, all: bool, limits: &Limits) -> Result<Report, CliError> {
    if arity == 0 {
        return Err(CliError::Usage("--arity must be at least 1".into()));
    }
    let a = automorphism_group(s, limits)?;
    let part = a.group.orbits_on_tuples(arity, !all, limits)?;
    let kind = if all { "" } else { "injective " };
    let mut text = format!("orbits on {kind}{arity}-tuples = {}\n", part.count());
    let mut list = Vec::new();
    for id in 0..part.count() {
        let rep = part.representative(id);
        let _ = writeln!(
            text,
            "  {id}: size {}, representative {rep:?}",
            part.size(id)
        );
        list.push(json!({"size": part.size(id), "representative": rep}));
    }
    Ok(Report::new(
        text,
        json!({"arity": arity, "injective": !all, "count": part.count(), "orbits": list}),
    ))
}

pub fn gcuts(s: &Structure, limits: &Limits) -> Result<Report, CliError> {
    let cuts = minimal_g_separating_cuts(s, limits)?;
    let classes = cut_type_classes(s, &cuts)?;
    let max = cuts.iter().map(|c| c.len()).max().unwrap_or(0);
    let types = classes.iter().max().map_or(0, |m| m + 1);
    let mut max_types: Vec<usize> = cuts
        .iter()
        .zip(&classes)
        .filter(|(c, _)| c.len() == max)
        .map(|(_, &k)| k)
        .collect();
    max_types.sort_unstable();
    max_types.dedup();
    let mut text = format!(
        "cuts = {}\nmax size = {max}\nisomorphism types = {types}\ntypes among maximum cuts = {}\n",
        cuts.len(),
        max_types.len()
    );
    let mut list = Vec::new();
    for (c, &k) in cuts.iter().zip(&classes) {
        let _ = writeln!(
            text,
            "  {:?} size {} type {k}{} between {:?} and {:?}",
            c.cut,
            c.len(),
            if c.inclusion_minimal {
                ""
            } else {
                " (not inclusion-minimal)"
            },
            c.components.0,
            c.components.1
        );
        list.push(json!({
            "cut": c.cut,
            "type": k,
            "inclusion_minimal": c.inclusion_minimal,
            "components": [c.components.0, c.components.1],
        }));
    }
    Ok(Report::new(
        text,
        json!({
            "max_size": max,
            "types": types,
            "types_among_maximum": max_types.len(),
            "cuts": list,
        }),
    ))
}

pub fn generate(tokens: &[String], limits: &Limits) -> Result<Structure, CliError> {
    let words: Vec<&str> = tokens.iter().map(String::as_str).collect();
    match words.as_slice() {
        ["cograph", expr @ ..] if !expr.is_empty() => Ok(gen_cograph(&expr.join(" "))?),
        ["permutation", degree, gens @ ..] => {
            let degree: usize = degree
                .parse()
                .map_err(|_| CliError::Usage(format!("bad degree {degree:?}")))?;
            let group = PermGroup::from_cycle_strings(degree, gens)?;
            Ok(gen_permutation_graph(&group, limits.group_elements)?)
        }
        _ => Ok(gen(&Family::parse(&words)?)?),
    }
}

fn emit_structure_text(text: String, out: Option<&Path>) -> Result<Report, CliError> {
    match out {
        Some(p) => {
            write(p, &text)?;
            Ok(Report::new(
                format!("wrote {}\n", p.display()),
                json!({"path": p.display().to_string()}),
            ))
        }
        None => {
            let value: Value = serde_json::from_str(&text).expect("serializer emits JSON");
            Ok(Report::new(text, value))
        }
    }
}

pub fn gen_cmd(tokens: &[String], out: Option<&Path>, limits: &Limits) -> Result<Report, CliError> {
    let s = generate(tokens, limits)?;
    emit_structure_text(serialize_structure(&s), out)
}

pub fn homogenize(
    input: &Path,
    method: &str,
    colors: Option<&str>,
    out: Option<&Path>,
    limits: &Limits,
) -> Result<Report, CliError> {
    let g = graph_view(load_structure(input)?)?;
    let lift = match method {
        "metric" => metric_lift(&g)?,
        "tree" => {
            let colors = colors
                .map(|c| {
                    c.split(',')
                        .map(|x| x.trim().parse::<u32>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| CliError::Usage(format!("bad color list {c:?}")))
                })
                .transpose()?;
            tree_homogenize(&g, colors.as_deref())?
        }
        other => return Err(CliError::Usage(format!("unknown method {other:?}"))),
    };
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sibling(input, &format!("{method}-lift.json")));
    write(&path, &serialize_lift(&lift))?;
    let ok = is_ultrahomogeneous(&lift.to_structure(), limits)?.ultrahomogeneous;
    Ok(Report::new(
        format!(
            "extended slots = {}\nmax extended arity = {}\nultrahomogeneous: {ok}\nlift: {}\n",
            lift.ext_len(),
            lift.max_ext_arity(),
            path.display()
        ),
        json!({
            "method": method,
            "extended_slots": lift.ext_len(),
            "max_extended_arity": lift.max_ext_arity(),
            "ultrahomogeneous": ok,
            "lift_path": path.display().to_string(),
        }),
    ))
}

fn failure_json(f: &Failure) -> Value {
    let i = &f.instance;
    json!({
        "minimal": f.minimal,
        "a": {"vertices": i.a.n(), "edges": edges(&i.a)},
        "b": {"vertices": i.b.n(), "edges": edges(&i.b)},
        "c": {"vertices": i.c.n(), "edges": edges(&i.c)},
        "alpha": i.alpha,
        "beta": i.beta,
    })
}

pub fn amalg_failures(class: &str, max: usize, limits: &Limits) -> Result<Report, CliError> {
    let spec = parse_class(class)?;
    let failures = minimal_failures(&spec, max, limits)?;
    let minimal = failures.iter().filter(|f| f.minimal).count();
    let mut text = format!("failures = {}\nminimal = {minimal}\n", failures.len());
    for (k, f) in failures.iter().enumerate() {
        let i = &f.instance;
        let _ = writeln!(
            text,
            "  {k}{}: |A| = {}, |B| = {}, |C| = {}",
            if f.minimal { " (minimal)" } else { "" },
            i.a.n(),
            i.b.n(),
            i.c.n()
        );
        let _ = writeln!(text, "    A edges {:?}", edges(&i.a));
        let _ = writeln!(text, "    B edges {:?}", edges(&i.b));
        let _ = writeln!(
            text,
            "    C edges {:?}, alpha {:?}, beta {:?}",
            edges(&i.c),
            i.alpha,
            i.beta
        );
    }
    Ok(Report::new(
        text,
        json!({
            "class": class,
            "max": max,
            "amalgamation_property": failures.is_empty(),
            "minimal": minimal,
            "failures": failures.iter().map(failure_json).collect::<Vec<_>>(),
        }),
    ))
}

pub fn hom(
    f: &Structure,
    a: &Structure,
    embedding: bool,
    limits: &Limits,
) -> Result<Report, CliError> {
    let (what, map) = if embedding {
        ("embedding", find_embedding(f, a, limits)?)
    } else {
        ("homomorphism", find_homomorphism(f, a, limits)?)
    };
    let text = match &map {
        Some(m) => format!("{what}: {m:?}\n"),
        None => format!("no {what}\n"),
    };
    Ok(Report::new(
        text,
        json!({"kind": what, "exists": map.is_some(), "map": map}),
    ))
}

pub fn core(a: &Structure, limits: &Limits) -> Result<Report, CliError> {
    let c = is_core(a, limits)?;
    Ok(Report::new(format!("core: {c}\n"), json!({"core": c})))
}

pub fn enumerate(n: usize, family: &str, check: Option<&Path>) -> Result<Report, CliError> {
    let list: Vec<Structure> = match family {
        "trees" => enumerate_trees(n)?,
        "cographs" => enumerate_cographs(n)?.into_iter().map(|(_, g)| g).collect(),
        _ => enumerate_graphs(n)?,
    };
    let codes: Vec<String> = list
        .iter()
        .map(|g| graph_view(g.clone()).map(|v| to_graph6(&v)))
        .collect::<Result<_, _>>()?;
    let mut text = format!("{family} on {n} vertices = {}\n", list.len());
    let mut json = json!({"family": family, "vertices": n, "count": list.len(), "graph6": codes});
    match check {
        None => {
            for c in &codes {
                let _ = writeln!(text, "{c}");
            }
        }
        Some(path) => {
            let corpus = load_graph6(path)?;
            let mut classes = IsoClasses::new();
            for g in &list {
                classes.insert(g.clone())?;
            }
            let mut wrong_size = 0;
            let mut unknown = Vec::new();
            let mut hit = vec![false; list.len()];
            for (i, g) in corpus.iter().enumerate() {
                if g.n() != n {
                    wrong_size += 1;
                    continue;
                }
                let (idx, is_new) = classes.insert(g.clone())?;
                if is_new {
                    unknown.push(i + 1);
                } else {
                    hit[idx] = true;
                }
            }
            let covered = hit.iter().filter(|&&h| h).count();
            let _ = writeln!(
                text,
                "corpus graphs = {}\nother sizes = {wrong_size}\ntypes covered = {covered}\nunmatched lines = {unknown:?}\ncomplete: {}",
                corpus.len(),
                covered == list.len() && unknown.is_empty()
            );
            json["check"] = json!({
                "corpus": corpus.len(),
                "other_sizes": wrong_size,
                "covered": covered,
                "unmatched_lines": unknown,
                "complete": covered == list.len() && unknown.is_empty(),
            });
        }
    }
    Ok(Report::new(text, json))
}

pub fn batch(op: &str, path: &Path, limits: &Limits) -> Result<Report, CliError> {
    let graphs = load_graph6(path)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let code = to_graph6(&graph_view(g.clone())?);
        let value: Value = match op {
            "uh" => json!(is_ultrahomogeneous(g, limits)?.ultrahomogeneous),
            "rc" => json!(relational_complexity(g, limits)?.value),
            "lc" => json!(lift_complexity(g, limits)?.value),
            "aut" => json!(automorphism_group(g, limits)?
                .order()
                .map(|o| o.to_string())),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown batch operation {other:?}"
                )))
            }
        };
        let _ = writeln!(text, "{} {code} {op} = {value}", i + 1);
        rows.push(json!({"line": i + 1, "graph6": code, op: value}));
    }
    Ok(Report::new(text, json!({"operation": op, "results": rows})))
}

struct PropTally {
    name: &'static str,
    checked: usize,
    violations: Vec<String>,
}

impl PropTally {
    fn new(name: &'static str) -> Self {
        PropTally {
            name,
            checked: 0,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, g: &Structure) -> Result<(), CliError> {
        self.checked += 1;
        if !ok {
            self.violations.push(to_graph6(&graph_view(g.clone())?));
        }
        Ok(())
    }
}

/// Complementation, `lc ≤ rc`, the finite bounds and the disjoint-union
/// formula over a corpus of graphs.
pub fn props(
    corpus: Option<&Path>,
    vertices: usize,
    limits: &Limits,
) -> Result<(Report, bool), CliError> {
    let graphs: Vec<Structure> = match corpus {
        Some(p) => load_graph6(p)?,
        None => {
            let mut all = Vec::new();
            for n in 1..=vertices {
                all.extend(enumerate_graphs(n)?);
            }
            all
        }
    };
    let mut p1 = PropTally::new("complementation preserves rc and lc");
    let mut p2 = PropTally::new("lc <= rc");
    let mut p3 = PropTally::new("rc <= |G|-1 and lc <= 1");
    let mut p4 = PropTally::new("disjoint-union formula");
    let mut connected_uh = Vec::new();
    for g in graphs.iter().filter(|g| g.n() > 0) {
        let c = graph_view(g.clone())?.complement().into_structure();
        let (rg, lg) = (
            relational_complexity(g, limits)?.value,
            lift_complexity(g, limits)?.value,
        );
        let (rh, lh) = (
            relational_complexity(&c, limits)?.value,
            lift_complexity(&c, limits)?.value,
        );
        p1.record(rg == rh && lg == lh, g)?;
        p2.record(lg <= rg, g)?;
        p3.record(rg < g.n() && lg <= 1, g)?;
        if g.is_connected() && rg == 0 {
            connected_uh.push(g.clone());
        }
    }
    for i in 0..connected_uh.len() {
        for j in i..connected_uh.len() {
            let parts = [connected_uh[i].clone(), connected_uh[j].clone()];
            let u = parts[0].disjoint_union(&parts[1])?;
            if is_ultrahomogeneous(&u, limits)?.ultrahomogeneous {
                continue;
            }
            let ok = predict_disjoint_union(&parts, Mode::Relational, limits)?
                == relational_complexity(&u, limits)?.value
                && predict_disjoint_union(&parts, Mode::Lift, limits)?
                    == lift_complexity(&u, limits)?.value;
            p4.record(ok, &u)?;
        }
    }
    let tallies = [p1, p2, p3, p4];
    let mut text = format!("corpus graphs = {}\n", graphs.len());
    let mut rows = Vec::new();
    let mut all_ok = true;
    for (k, t) in tallies.iter().enumerate() {
        all_ok &= t.violations.is_empty();
        let _ = writeln!(
            text,
            "Prop {} ({}): {} checked, {} violations",
            k + 1,
            t.name,
            t.checked,
            t.violations.len()
        );
        for v in &t.violations {
            let _ = writeln!(text, "  violation: {v}");
        }
        rows.push(json!({"prop": k + 1, "name": t.name, "checked": t.checked, "violations": t.violations}));
    }
    Ok((
        Report::new(
            text,
            json!({"corpus": graphs.len(), "props": rows, "ok": all_ok}),
        ),
        all_ok,
    ))
}
