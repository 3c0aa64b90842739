use std::fs;
use std::path::{Path, PathBuf};

use relcx::generators::{complete, cycle, disjoint_copies, empty, path, petersen};
use relcx::io::{parse_graph6, parse_lift_json, parse_structure};
use relcx::morphisms::ClassSpec;
use relcx::{Lift, Signature, Structure};

use crate::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A JSON document or an edge list; extended slots are kept.
pub fn load_structure(path: &Path) -> Result<Structure, CliError> {
    Ok(parse_structure(&read(path)?)?)
}

/// JSON lift, or any structure as a lift without extended slots.
pub fn load_lift(path: &Path) -> Result<Lift, CliError> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        Ok(parse_lift_json(&text)?)
    } else {
        Ok(Lift::trivial(parse_structure(&text)?))
    }
}

pub fn load_graph6(path: &Path) -> Result<Vec<Structure>, CliError> {
    Ok(parse_graph6(&read(path)?)?)
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// `dir/stem.<suffix>` next to the input.
pub fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "stdin".into());
    input.with_file_name(format!("{stem}.{suffix}"))
}

/// Named small graphs: `P4`, `C5`, `K3`, `E2` (edgeless), `2K2`, `petersen`.
pub fn named_graph(name: &str) -> Result<Structure, CliError> {
    let bad = || CliError::Usage(format!("unknown graph name {name:?}"));
    if name.eq_ignore_ascii_case("petersen") {
        return Ok(petersen());
    }
    let split = name
        .find(|c: char| c.is_ascii_alphabetic())
        .ok_or_else(bad)?;
    let copies: usize = if split == 0 {
        1
    } else {
        name[..split].parse().map_err(|_| bad())?
    };
    let rest = &name[split..];
    let kind = rest.chars().next().ok_or_else(bad)?;
    let n: usize = rest[1..].parse().map_err(|_| bad())?;
    let base = match kind {
        'P' => path(n),
        'C' => cycle(n)?,
        'K' => complete(n),
        'E' => empty(n),
        _ => return Err(bad()),
    };
    Ok(if copies == 1 {
        base
    } else {
        disjoint_copies(copies, &base)
    })
}

/// `all`, `induced:P4,C5`, `hom:C3`, with `@file.json` for custom members.
pub fn parse_class(text: &str) -> Result<ClassSpec, CliError> {
    if text == "all" {
        return Ok(ClassSpec::unrestricted(Signature::graph()));
    }
    let (kind, list) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("class spec {text:?} needs the form kind:list")))?;
    let mut members = Vec::new();
    for item in list.split(',').filter(|s| !s.is_empty()) {
        members.push(match item.strip_prefix('@') {
            Some(file) => load_structure(Path::new(file))?,
            None => named_graph(item)?,
        });
    }
    Ok(match kind {
        "induced" => ClassSpec::forbidden_induced(members)?,
        "hom" => ClassSpec::forbidden_hom(members)?,
        other => return Err(CliError::Usage(format!("unknown class kind {other:?}"))),
    })
}
