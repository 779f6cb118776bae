use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use posfo::classify::{classify_dsm, explain, explain_kv, Classification};
use posfo::dsm::{enumerate_dsms, export_dot, DsmError};
use posfo::logic::{evaluate_bruteforce, FormulaParser};
use posfo::model::{complement_digraph, fixture, quotient, FIXTURE_NAMES};
use posfo::qe::evaluate_traced;
use posfo::shop::she_monoid;
use posfo::{classify_with_equality, Certainty, Dsm, Shop, Structure};

use crate::galois::{self, GaloisConfig};
use crate::input::{load_structure, parse_engine, parse_shop, read_text};
use crate::{CliError, Command, Format, Outcome, EXIT_VIOLATION, MAX_CAP};

pub(crate) fn dispatch(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::She {
            structure,
            members,
            cap,
        } => she(&structure, members, cap),
        Command::Classify {
            structure,
            equality,
            format,
            cap,
        } => classify(&structure, equality, format, cap),
        Command::Eval {
            structure,
            formula,
            file,
            engine,
            verify,
        } => eval(&structure, formula, file, &engine, verify),
        Command::Lattice {
            n,
            dot,
            output,
            large,
            members,
        } => lattice(n, dot, output.as_deref(), large, members),
        Command::Galois {
            structure,
            max_arity,
            samples,
            seed,
            depth,
        } => galois(
            &structure,
            GaloisConfig {
                max_arity,
                samples,
                seed,
                depth,
            },
        ),
        Command::Quotient {
            structure,
            shop,
            output,
        } => quotient_cmd(&structure, &shop, output.as_deref()),
        Command::Fixtures {
            name,
            params,
            complement,
        } => fixtures(name.as_deref(), &params, complement),
    }
}

fn check_cap(cap: usize) -> Result<(), CliError> {
    if cap == 0 || cap > MAX_CAP {
        return Err(CliError::Usage(format!(
            "--cap must be between 1 and {MAX_CAP}, got {cap}"
        )));
    }
    Ok(())
}

fn monoid(structure: &Structure, cap: usize) -> Result<Dsm, CliError> {
    check_cap(cap)?;
    Ok(she_monoid(structure, cap)?)
}

fn shop_list(shops: &[Shop]) -> String {
    shops.iter().map(Shop::to_string).collect::<Vec<_>>().join(" ")
}

fn she(source: &str, members: bool, cap: usize) -> Result<Outcome, CliError> {
    check_cap(cap)?;
    let b = load_structure(source)?;
    let d = monoid(&b, cap)?;
    let mut out = String::new();
    let _ = writeln!(out, "domain size: {}", b.domain_size());
    let _ = writeln!(out, "shE size: {}", d.len());
    let gens = d.generators();
    let _ = writeln!(
        out,
        "generators: {}",
        if gens.is_empty() {
            "(identity only)".to_string()
        } else {
            shop_list(&gens)
        }
    );
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(out, "permutation subgroup: {}", yes_no(d.is_permutation_subgroup()));
    let _ = writeln!(out, "A-shops: {}", d.a_shops().count());
    let _ = writeln!(out, "E-shops: {}", d.e_shops().count());
    if members {
        let _ = writeln!(out, "members:");
        out.push_str(&d.to_string());
    }
    Ok(Outcome::ok(out))
}

fn classify(source: &str, equality: bool, format: Format, cap: usize) -> Result<Outcome, CliError> {
    check_cap(cap)?;
    let b = load_structure(source)?;
    let c = if equality {
        classify_with_equality(&b)
    } else {
        classify_dsm(&monoid(&b, cap)?)
    };
    let out = match format {
        Format::Text => format!("{}\n{}", summary(&c), explain(&c)),
        Format::Kv => explain_kv(&c),
    };
    Ok(Outcome::ok(out))
}

fn summary(c: &Classification) -> String {
    format!("{} ({})", c.verdict, c.certainty)
}

fn eval(
    source: &str,
    formula: Option<String>,
    file: Option<String>,
    engine: &str,
    verify: bool,
) -> Result<Outcome, CliError> {
    let b = load_structure(source)?;
    let engine = parse_engine(engine, b.domain_size())?;
    let text = match (formula, file) {
        (Some(text), _) => text,
        (None, Some(path)) => read_text(&path)?,
        (None, None) => return Err(CliError::Usage("no formula given".into())),
    };
    let phi = FormulaParser::new().signature(b.signature()).parse(text.trim())?;
    let result = evaluate_traced(&b, &phi, engine.as_ref())?;
    let mut out = String::new();
    let _ = writeln!(out, "value: {}", result.value);
    let _ = writeln!(out, "engine: {}", result.engine);
    let _ = writeln!(out, "prenex: {}", result.prenex);
    let _ = writeln!(out, "reduced: {}", result.reduced);
    let mut code = 0;
    if verify {
        let brute = evaluate_bruteforce(&b, &phi, &BTreeMap::new())?;
        let agree = brute == result.value;
        let _ = writeln!(
            out,
            "brute force: {brute} ({})",
            if agree { "agrees" } else { "MISMATCH" }
        );
        if !agree {
            code = EXIT_VIOLATION;
        }
    }
    Ok(Outcome { stdout: out, code })
}

fn label(c: &Classification) -> String {
    match c.certainty {
        Certainty::Theorem => c.verdict.to_string(),
        Certainty::ConjecturedHardness => format!("{} (conjectured)", c.verdict),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Write {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn lattice(
    n: usize,
    dot: bool,
    output: Option<&Path>,
    large: bool,
    members: bool,
) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    if dot && members {
        return Err(CliError::Usage("--members only applies to the listing".into()));
    }
    let l = enumerate_dsms(n, large).map_err(|e| match e {
        DsmError::OverCap { n, cap } if !large => {
            CliError::Usage(format!("lattices above {cap} elements need --large (n = {n})"))
        }
        other => other.into(),
    })?;
    let labels: BTreeMap<usize, String> = l
        .nodes
        .iter()
        .enumerate()
        .map(|(i, d)| (i, label(&classify_dsm(d))))
        .collect();
    let text = if dot {
        export_dot(&l, &labels)
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "DSMs on {n} elements: {}", l.nodes.len());
        for (i, d) in l.nodes.iter().enumerate() {
            let _ = writeln!(out, "d{i} {} size {} {}", d.display_name(), d.len(), labels[&i]);
            if members {
                for f in d.members() {
                    let _ = writeln!(out, "  {f}");
                }
            }
        }
        let _ = writeln!(out, "Hasse covers: {}", l.edges.len());
        for (lo, up) in &l.edges {
            let _ = writeln!(out, "d{lo} -> d{up}");
        }
        out
    };
    match output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Outcome::ok(format!("wrote {}\n", path.display())))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn galois(source: &str, config: GaloisConfig) -> Result<Outcome, CliError> {
    let b = load_structure(source)?;
    galois::validate(&b, &config)?;
    let shes: Vec<Shop> = monoid(&b, posfo::DEFAULT_ENUMERATION_CAP)?
        .members()
        .iter()
        .cloned()
        .collect();
    let report = galois::run(&b, &shes, &config)?;
    Ok(Outcome {
        code: if report.violations == 0 { 0 } else { EXIT_VIOLATION },
        stdout: report.text,
    })
}

fn quotient_cmd(source: &str, shop: &str, output: Option<&Path>) -> Result<Outcome, CliError> {
    let f = parse_shop(shop)?;
    let b = load_structure(source)?;
    let q = quotient(&b, &f)?;
    let text = q.to_canonical_string();
    match output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Outcome::ok(format!("wrote {}\n", path.display())))
        }
        None => Ok(Outcome::ok(text)),
    }
}

const FIXTURE_HELP: &[(&str, &str, &str)] = &[
    ("clique", "N", "complete loopless graph K_N"),
    ("nae", "N", "not-all-equal ternary relation R_NAE on N elements"),
    ("k2_plus_k1", "", "the edge 0-1 plus the isolated vertex 2"),
    ("multipartite", "N1 N2 ...", "complete multipartite graph with the given block sizes"),
];

fn fixtures(name: Option<&str>, params: &[usize], complement: bool) -> Result<Outcome, CliError> {
    let Some(name) = name else {
        debug_assert_eq!(
            FIXTURE_HELP.iter().map(|h| h.0).collect::<BTreeSet<_>>(),
            FIXTURE_NAMES.iter().copied().collect()
        );
        let mut out = String::new();
        for (name, params, about) in FIXTURE_HELP {
            let usage = format!("{name} {params}");
            let _ = writeln!(out, "{:<28}{about}", usage.trim_end());
        }
        return Ok(Outcome::ok(out));
    };
    let mut b = fixture(name, params)?;
    if complement {
        b = complement_digraph(&b)?;
    }
    Ok(Outcome::ok(b.to_canonical_string()))
}
