//! Browser demo: classify a structure, evaluate a sentence, and draw the
//! DSM lattice on up to three elements.
//!
//! The report functions are plain Rust and return `Result<String, String>`;
//! the `#[wasm_bindgen]` wrappers in [`bindings`] only convert errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use posfo::classify::{classify_dsm, explain};
use posfo::dsm::{enumerate_dsms, export_dot, DsmLattice};
use posfo::logic::{evaluate_bruteforce, FormulaParser};
use posfo::model::{complement_digraph, fixture, parse_structure};
use posfo::qe::evaluate_traced;
use posfo::shop::she_monoid;
use posfo::{classify_with_equality, Structure, Verdict, DEFAULT_ENUMERATION_CAP};

pub mod bindings;

/// Largest domain the demo enumerates lattices for.
pub const MAX_LATTICE_N: usize = 3;

fn structure(text: &str) -> Result<Structure, String> {
    parse_structure(text).map_err(|e| format!("structure: {e}"))
}

/// The classification report for a structure in the text format.
pub fn classify_report(text: &str, equality: bool) -> Result<String, String> {
    let b = structure(text)?;
    let c = if equality {
        classify_with_equality(&b)
    } else {
        let d = she_monoid(&b, DEFAULT_ENUMERATION_CAP).map_err(|e| e.to_string())?;
        classify_dsm(&d)
    };
    Ok(explain(&c))
}

/// Truth value, engine and reduced sentence, cross-checked by brute force.
pub fn evaluate_report(text: &str, formula: &str) -> Result<String, String> {
    let b = structure(text)?;
    let phi = FormulaParser::new()
        .signature(b.signature())
        .parse(formula.trim())
        .map_err(|e| format!("formula: {e}"))?;
    let result = evaluate_traced(&b, &phi, None).map_err(|e| e.to_string())?;
    let brute = evaluate_bruteforce(&b, &phi, &BTreeMap::new()).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(out, "value: {}", result.value);
    let _ = writeln!(out, "engine: {}", result.engine);
    let _ = writeln!(out, "prenex: {}", result.prenex);
    let _ = writeln!(out, "reduced: {}", result.reduced);
    let _ = writeln!(
        out,
        "brute force: {brute} ({})",
        if brute == result.value { "agrees" } else { "MISMATCH" }
    );
    Ok(out)
}

/// A fixture in the structure text format, from `name` or `name:p1,p2`,
/// optionally suffixed with `:complement`.
pub fn fixture_text(spec: &str) -> Result<String, String> {
    let mut pieces: Vec<&str> = spec.trim().split(':').collect();
    let complement = pieces.last() == Some(&"complement");
    if complement {
        pieces.pop();
    }
    let (name, params) = match pieces.as_slice() {
        [name] => (*name, Vec::new()),
        [name, list] => {
            let params = list
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad parameter `{p}`")))
                .collect::<Result<Vec<_>, _>>()?;
            (*name, params)
        }
        _ => return Err(format!("malformed fixture `{spec}`")),
    };
    let mut b = fixture(name, &params).map_err(|e| e.to_string())?;
    if complement {
        b = complement_digraph(&b).map_err(|e| e.to_string())?;
    }
    Ok(b.to_canonical_string())
}

fn checked_lattice(n: usize) -> Result<DsmLattice, String> {
    if n == 0 || n > MAX_LATTICE_N {
        return Err(format!("the demo draws lattices for 1 to {MAX_LATTICE_N} elements"));
    }
    enumerate_dsms(n, false).map_err(|e| e.to_string())
}

fn verdicts(l: &DsmLattice) -> Vec<Verdict> {
    l.nodes.iter().map(|d| classify_dsm(d).verdict).collect()
}

/// The Hasse diagram as Graphviz DOT, nodes labelled with their verdicts.
pub fn lattice_dot(n: usize) -> Result<String, String> {
    let l = checked_lattice(n)?;
    let labels = verdicts(&l)
        .into_iter()
        .enumerate()
        .map(|(i, v)| (i, v.to_string()))
        .collect();
    Ok(export_dot(&l, &labels))
}

fn colour(v: Verdict) -> &'static str {
    match v {
        Verdict::Logspace => "#4caf50",
        Verdict::NpComplete => "#2196f3",
        Verdict::ConpComplete => "#ff9800",
        Verdict::PspaceComplete => "#e53935",
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// The Hasse diagram as a standalone SVG. Nodes sit on the level of their
/// longest chain from the bottom and are coloured by verdict; hovering a
/// node shows its generators and size.
pub fn lattice_svg(n: usize) -> Result<String, String> {
    let l = checked_lattice(n)?;
    let verdicts = verdicts(&l);
    let mut level = vec![0usize; l.nodes.len()];
    // Edges go from smaller to larger index, so one pass in order suffices.
    for &(lo, up) in &l.edges {
        level[up] = level[up].max(level[lo] + 1);
    }
    let height_levels = level.iter().max().copied().unwrap_or(0) + 1;
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); height_levels];
    for (i, &lv) in level.iter().enumerate() {
        rows[lv].push(i);
    }
    let widest = rows.iter().map(Vec::len).max().unwrap_or(1);
    let (dx, dy, margin) = (34.0, 90.0, 30.0);
    let width = margin * 2.0 + dx * widest as f64;
    let height = margin * 2.0 + dy * (height_levels - 1) as f64;
    let mut pos = vec![(0.0, 0.0); l.nodes.len()];
    for (lv, row) in rows.iter().enumerate() {
        let step = (width - 2.0 * margin) / row.len() as f64;
        for (k, &i) in row.iter().enumerate() {
            let x = margin + step * (k as f64 + 0.5);
            let y = height - margin - dy * lv as f64;
            pos[i] = (x, y);
        }
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.0} {height:.0}" width="{width:.0}" height="{height:.0}">"#
    );
    for &(lo, up) in &l.edges {
        let ((x1, y1), (x2, y2)) = (pos[lo], pos[up]);
        let _ = writeln!(
            svg,
            r##"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="#999" stroke-width="1"/>"##
        );
    }
    for (i, d) in l.nodes.iter().enumerate() {
        let (x, y) = pos[i];
        let title = format!("d{i} {} |D| = {} {}", d.display_name(), d.len(), verdicts[i]);
        let _ = writeln!(
            svg,
            r#"<circle cx="{x:.1}" cy="{y:.1}" r="9" fill="{}"><title>{}</title></circle>"#,
            colour(verdicts[i]),
            escape(&title)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
