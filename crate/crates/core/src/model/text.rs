use super::{ModelError, Relation, Structure};

/// Parses the line-oriented structure format.
///
/// ```text
/// # K2 plus an isolated vertex
/// domain 3
/// rel E 2
/// 0 1
/// 1 0
/// end
/// ```
///
/// `#` starts a comment. The `domain` header comes first; each `rel <name>
/// <arity>` block lists one tuple per line and is closed by `end`.
pub fn parse_structure(text: &str) -> Result<Structure, ModelError> {
    let mut structure: Option<Structure> = None;
    let mut open: Option<(String, Relation, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(line);
        let Some(&(first_col, first)) = tokens.first() else {
            continue;
        };
        let syntax = |column: usize, message: String| ModelError::Syntax {
            line: line_no,
            column,
            message,
        };
        let at = |e: ModelError| ModelError::At {
            line: line_no,
            source: Box::new(e),
        };

        let Some(st) = structure.as_mut() else {
            if first != "domain" {
                return Err(syntax(first_col, "expected `domain <n>` header".into()));
            }
            if tokens.len() != 2 {
                return Err(syntax(first_col, "expected `domain <n>`".into()));
            }
            let (col, tok) = tokens[1];
            let n = parse_number(tok).ok_or_else(|| syntax(col, format!("bad domain size `{tok}`")))?;
            structure = Some(Structure::new(n).map_err(at)?);
            continue;
        };

        match open.as_mut() {
            None => match first {
                "rel" => {
                    if tokens.len() != 3 {
                        return Err(syntax(first_col, "expected `rel <name> <arity>`".into()));
                    }
                    let (_, name) = tokens[1];
                    let (col, tok) = tokens[2];
                    let arity = parse_number(tok)
                        .ok_or_else(|| syntax(col, format!("bad arity `{tok}`")))?;
                    if arity == 0 {
                        return Err(at(ModelError::ZeroArity(name.to_string())));
                    }
                    if !super::is_identifier(name) {
                        return Err(at(ModelError::InvalidName(name.to_string())));
                    }
                    if st.relation(name).is_some() {
                        return Err(at(ModelError::DuplicateRelation(name.to_string())));
                    }
                    open = Some((name.to_string(), Relation::new(arity), line_no));
                }
                "domain" => return Err(syntax(first_col, "duplicate `domain` header".into())),
                other => {
                    return Err(syntax(first_col, format!("expected `rel`, found `{other}`")))
                }
            },
            Some((name, rel, _)) => {
                if first == "end" {
                    if tokens.len() != 1 {
                        return Err(syntax(tokens[1].0, "unexpected text after `end`".into()));
                    }
                    let (name, rel, _) = open.take().unwrap();
                    st.add_relation(name, rel).map_err(at)?;
                    continue;
                }
                let mut tuple = Vec::with_capacity(tokens.len());
                for &(col, tok) in &tokens {
                    let x = parse_number(tok)
                        .ok_or_else(|| syntax(col, format!("expected element, found `{tok}`")))?;
                    if x >= st.domain_size() {
                        return Err(at(ModelError::ElementOutOfDomain {
                            element: x,
                            domain_size: st.domain_size(),
                        }));
                    }
                    tuple.push(x);
                }
                if tuple.len() != rel.arity() {
                    return Err(at(ModelError::ArityMismatch {
                        relation: name.clone(),
                        expected: rel.arity(),
                        found: tuple.len(),
                    }));
                }
                rel.insert(tuple);
            }
        }
    }

    if let Some((name, _, line)) = open {
        return Err(ModelError::Syntax {
            line,
            column: 1,
            message: format!("relation `{name}` is missing its `end`"),
        });
    }
    structure.ok_or(ModelError::Syntax {
        line: 1,
        column: 1,
        message: "missing `domain <n>` header".into(),
    })
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_number(tok: &str) -> Option<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok()
}
