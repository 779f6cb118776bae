//! Loading structures and formulas and parsing engine specifications.

use std::fs;
use std::io::Read;
use std::path::Path;

use posfo::model::{complement_digraph, fixture, parse_structure, Element};
use posfo::qe::Engine;
use posfo::{Shop, Structure};

use crate::CliError;

/// Prefix marking a structure argument as a built-in fixture.
pub const FIXTURE_PREFIX: &str = "fixture:";

/// Reads `-` from standard input and anything else from the filesystem.
pub fn read_text(source: &str) -> Result<String, CliError> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io {
                path: "<stdin>".into(),
                message: e.to_string(),
            })?;
        return Ok(text);
    }
    fs::read_to_string(Path::new(source)).map_err(|e| CliError::Io {
        path: source.into(),
        message: e.to_string(),
    })
}

/// A structure file path, `-`, or `fixture:NAME[:P1,P2,…]`.
pub fn load_structure(source: &str) -> Result<Structure, CliError> {
    match source.strip_prefix(FIXTURE_PREFIX) {
        Some(spec) => parse_fixture_spec(spec),
        None => {
            let text = read_text(source)?;
            parse_structure(&text).map_err(|e| CliError::Structure {
                source_name: source.to_string(),
                error: e,
            })
        }
    }
}

/// `NAME`, `NAME:P1,P2,…` or either followed by `:complement` for the
/// complement digraph.
pub fn parse_fixture_spec(spec: &str) -> Result<Structure, CliError> {
    let mut pieces: Vec<&str> = spec.split(':').collect();
    let complement = pieces.last() == Some(&"complement");
    if complement {
        pieces.pop();
    }
    let (name, params) = match pieces.as_slice() {
        [name] => (*name, Vec::new()),
        [name, list] => (*name, parse_list(list)?),
        _ => return Err(CliError::Usage(format!("malformed fixture `{spec}`"))),
    };
    let b = fixture(name, &params)?;
    Ok(if complement { complement_digraph(&b)? } else { b })
}

fn parse_list(list: &str) -> Result<Vec<usize>, CliError> {
    list.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("`{p}` is not a non-negative integer")))
        })
        .collect()
}

pub fn parse_shop(text: &str) -> Result<Shop, CliError> {
    Ok(text.parse::<Shop>()?)
}

fn parse_element(text: &str) -> Result<Element, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("`{text}` is not a domain element")))
}

/// `auto` (returns `None`), `brute`, `forall:B`, `exists:B`,
/// `forall-exists:B,B2`, `a-reduce:SHOP` or `e-reduce:SHOP`.
pub fn parse_engine(spec: &str, n: usize) -> Result<Option<Engine>, CliError> {
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let need = |what: &str| {
        arg.ok_or_else(|| CliError::Usage(format!("engine `{kind}` needs {what}, e.g. `{kind}:{}`", example(kind))))
    };
    let element = |text: &str| -> Result<Element, CliError> {
        let b = parse_element(text)?;
        if b >= n {
            return Err(CliError::Usage(format!(
                "element {b} is outside the domain of size {n}"
            )));
        }
        Ok(b)
    };
    let engine = match kind {
        "auto" if arg.is_none() => return Ok(None),
        "brute" if arg.is_none() => Engine::brute(),
        "forall" => Engine::forall_subst(n, element(need("an element")?)?),
        "exists" => Engine::exists_subst(n, element(need("an element")?)?),
        "forall-exists" => {
            let text = need("two elements")?;
            let (b, b2) = text
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("expected `B,B2`, got `{text}`")))?;
            Engine::forall_exists_subst(n, element(b)?, element(b2)?)
        }
        "a-reduce" => Engine::a_reduce(parse_shop(need("a shop")?)?)?,
        "e-reduce" => Engine::e_reduce(parse_shop(need("a shop")?)?)?,
        _ => {
            return Err(CliError::Usage(format!(
                "unknown engine `{spec}`; expected auto, brute, forall:B, exists:B, \
                 forall-exists:B,B2, a-reduce:SHOP or e-reduce:SHOP"
            )))
        }
    };
    Ok(Some(engine))
}

fn example(kind: &str) -> &'static str {
    match kind {
        "forall-exists" => "0,1",
        "a-reduce" => "(012|1|2)",
        "e-reduce" => "(0|01|02)",
        _ => "0",
    }
}
