use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, LogicError, Term};
use crate::model::{all_tuples, Element, Relation, Structure};

/// Dense membership tables are used while `n^k` stays below this.
const DENSE_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone)]
enum Table {
    Dense(Vec<bool>),
    Sparse(BTreeSet<Vec<Element>>),
}

#[derive(Debug, Clone, Copy)]
enum Arg {
    Slot(usize),
    Const(Element),
}

#[derive(Debug, Clone)]
enum Node {
    True,
    Atom { table: usize, args: Vec<Arg> },
    Eq(Arg, Arg),
    And(Vec<Node>),
    Or(Vec<Node>),
    Exists { slot: usize, domain: Vec<Element>, body: Box<Node> },
    Forall { slot: usize, domain: Vec<Element>, body: Box<Node> },
}

/// A formula bound to a structure, with every variable resolved to a slot
/// and every relation to a lookup table.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    n: usize,
    free: Vec<String>,
    slots: usize,
    tables: Vec<Table>,
    root: Node,
}

struct Compiler<'a> {
    structure: &'a Structure,
    tables: Vec<Table>,
    table_ids: BTreeMap<String, usize>,
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl Compiler<'_> {
    fn arg(&self, t: &Term) -> Result<Arg, LogicError> {
        match t {
            Term::Const(c) if *c < self.structure.domain_size() => Ok(Arg::Const(*c)),
            Term::Const(c) => Err(LogicError::ConstantOutOfRange {
                constant: *c,
                domain_size: self.structure.domain_size(),
            }),
            Term::Var(v) => self
                .scope
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, slot)| Arg::Slot(slot))
                .ok_or_else(|| LogicError::UnboundVariable(v.clone())),
        }
    }

    fn table(&mut self, name: &str, arity: usize) -> Result<usize, LogicError> {
        let rel = self
            .structure
            .relation(name)
            .ok_or_else(|| LogicError::UnknownRelation(name.to_string()))?;
        if rel.arity() != arity {
            return Err(LogicError::ArityMismatch {
                relation: name.to_string(),
                expected: rel.arity(),
                found: arity,
            });
        }
        if let Some(&id) = self.table_ids.get(name) {
            return Ok(id);
        }
        let n = self.structure.domain_size();
        let size = n.checked_pow(arity as u32).filter(|&s| s <= DENSE_LIMIT);
        let table = match size {
            Some(size) => {
                let mut dense = vec![false; size];
                for t in rel.tuples() {
                    dense[t.iter().fold(0, |acc, &x| acc * n + x)] = true;
                }
                Table::Dense(dense)
            }
            None => Table::Sparse(rel.tuples().clone()),
        };
        self.tables.push(table);
        self.table_ids.insert(name.to_string(), self.tables.len() - 1);
        Ok(self.tables.len() - 1)
    }

    fn domain(&self, var: &str, restriction: &Option<Vec<Element>>) -> Result<Vec<Element>, LogicError> {
        let n = self.structure.domain_size();
        match restriction {
            None => Ok((0..n).collect()),
            Some(set) if !set.is_empty() && set.iter().all(|&x| x < n) => Ok(set.clone()),
            Some(_) => Err(LogicError::BadRestriction(var.to_string())),
        }
    }

    fn node(&mut self, phi: &Formula) -> Result<Node, LogicError> {
        Ok(match phi {
            Formula::True => Node::True,
            Formula::Atom { relation, args } => Node::Atom {
                table: self.table(relation, args.len())?,
                args: args.iter().map(|t| self.arg(t)).collect::<Result<_, _>>()?,
            },
            Formula::Eq(a, b) => Node::Eq(self.arg(a)?, self.arg(b)?),
            Formula::And(ps) => Node::And(ps.iter().map(|p| self.node(p)).collect::<Result<_, _>>()?),
            Formula::Or(ps) => Node::Or(ps.iter().map(|p| self.node(p)).collect::<Result<_, _>>()?),
            Formula::Exists {
                var,
                restriction,
                body,
            }
            | Formula::Forall {
                var,
                restriction,
                body,
            } => {
                let domain = self.domain(var, restriction)?;
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((var.clone(), slot));
                let body = Box::new(self.node(body)?);
                self.scope.pop();
                if matches!(phi, Formula::Exists { .. }) {
                    Node::Exists { slot, domain, body }
                } else {
                    Node::Forall { slot, domain, body }
                }
            }
        })
    }
}

impl CompiledFormula {
    /// Binds `phi` to `structure` with `free_vars` as its parameters, in
    /// order.
    pub fn new<S: AsRef<str>>(
        structure: &Structure,
        phi: &Formula,
        free_vars: &[S],
    ) -> Result<Self, LogicError> {
        let free: Vec<String> = free_vars.iter().map(|v| v.as_ref().to_string()).collect();
        let mut compiler = Compiler {
            structure,
            tables: Vec::new(),
            table_ids: BTreeMap::new(),
            scope: free.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect(),
            slots: free.len(),
        };
        let root = compiler.node(phi)?;
        Ok(CompiledFormula {
            n: structure.domain_size(),
            free,
            slots: compiler.slots,
            tables: compiler.tables,
            root,
        })
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    /// Truth under `values` for the free variables. Values must lie in the
    /// domain; this is not rechecked.
    pub fn holds(&self, values: &[Element]) -> bool {
        assert_eq!(values.len(), self.free.len(), "one value per free variable");
        let mut env = vec![0; self.slots];
        env[..values.len()].copy_from_slice(values);
        self.eval(&self.root, &mut env)
    }

    fn value(arg: Arg, env: &[Element]) -> Element {
        match arg {
            Arg::Slot(s) => env[s],
            Arg::Const(c) => c,
        }
    }

    fn eval(&self, node: &Node, env: &mut [Element]) -> bool {
        match node {
            Node::True => true,
            Node::Atom { table, args } => match &self.tables[*table] {
                Table::Dense(bits) => {
                    let idx = args
                        .iter()
                        .fold(0, |acc, &a| acc * self.n + Self::value(a, env));
                    bits[idx]
                }
                Table::Sparse(set) => {
                    let t: Vec<Element> = args.iter().map(|&a| Self::value(a, env)).collect();
                    set.contains(&t)
                }
            },
            Node::Eq(a, b) => Self::value(*a, env) == Self::value(*b, env),
            Node::And(ps) => ps.iter().all(|p| self.eval(p, env)),
            Node::Or(ps) => ps.iter().any(|p| self.eval(p, env)),
            Node::Exists { slot, domain, body } => domain.iter().any(|&x| {
                env[*slot] = x;
                self.eval(body, env)
            }),
            Node::Forall { slot, domain, body } => domain.iter().all(|&x| {
                env[*slot] = x;
                self.eval(body, env)
            }),
        }
    }
}

/// Tarskian truth of `phi` in `structure` under `env`, by exhaustive
/// search with elements tried in ascending order.
pub fn evaluate_bruteforce(
    structure: &Structure,
    phi: &Formula,
    env: &BTreeMap<String, Element>,
) -> Result<bool, LogicError> {
    let n = structure.domain_size();
    let free: Vec<&String> = env.keys().collect();
    if let Some((_, &x)) = env.iter().find(|(_, &x)| x >= n) {
        return Err(LogicError::TupleOutOfDomain {
            element: x,
            domain_size: n,
        });
    }
    let compiled = CompiledFormula::new(structure, phi, &free)?;
    let values: Vec<Element> = env.values().copied().collect();
    Ok(compiled.holds(&values))
}

/// `{x ∈ B^k : B ⊨ phi(x)}` with `free_vars` naming the coordinates.
pub fn extension<S: AsRef<str>>(
    structure: &Structure,
    phi: &Formula,
    free_vars: &[S],
) -> Result<Relation, LogicError> {
    let compiled = CompiledFormula::new(structure, phi, free_vars)?;
    let mut out = Relation::new(free_vars.len());
    for t in all_tuples(structure.domain_size(), free_vars.len()) {
        if compiled.holds(&t) {
            out.insert(t);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::model::fixture;

    fn unary() -> Structure {
        Structure::new(2)
            .unwrap()
            .with_relation("U", Relation::from_tuples(1, [[1]]).unwrap())
            .unwrap()
    }

    fn truth(b: &Structure, text: &str) -> bool {
        evaluate_bruteforce(b, &parse_formula(text).unwrap(), &BTreeMap::new()).unwrap()
    }

    #[test]
    fn documented_sentences() {
        assert!(!truth(&unary(), "forall u U(u)"));
        let k3 = fixture("clique", &[3]).unwrap();
        assert!(truth(&k3, "forall u exists v E(u,v)"));
        assert!(!truth(&k3, "exists u E(u,u)"));
        let nae = fixture("nae", &[2]).unwrap();
        assert!(truth(&nae, "forall u forall v exists w R_NAE(u,v,w)"));
        assert!(!truth(&nae, "forall u forall v forall w R_NAE(u,v,w)"));
        assert!(truth(&k3, "forall u forall v exists w (E(u,w) & E(v,w))"));
    }

    #[test]
    fn environments_and_errors() {
        let k3 = fixture("clique", &[3]).unwrap();
        let phi = parse_formula("E(u,v)").unwrap();
        let env = BTreeMap::from([("u".to_string(), 0), ("v".to_string(), 2)]);
        assert!(evaluate_bruteforce(&k3, &phi, &env).unwrap());
        assert_eq!(
            evaluate_bruteforce(&k3, &phi, &BTreeMap::new()),
            Err(LogicError::UnboundVariable("u".into()))
        );
        assert_eq!(
            evaluate_bruteforce(&k3, &parse_formula("E(@0,@3)").unwrap(), &BTreeMap::new()),
            Err(LogicError::ConstantOutOfRange {
                constant: 3,
                domain_size: 3
            })
        );
        assert_eq!(
            evaluate_bruteforce(&k3, &parse_formula("exists u R(u)").unwrap(), &BTreeMap::new()),
            Err(LogicError::UnknownRelation("R".into()))
        );
        let bad = BTreeMap::from([("u".to_string(), 7), ("v".to_string(), 0)]);
        assert!(matches!(
            evaluate_bruteforce(&k3, &phi, &bad),
            Err(LogicError::TupleOutOfDomain { .. })
        ));
    }

    #[test]
    fn restrictions_limit_the_range() {
        let b = unary();
        let phi = Formula::Forall {
            var: "u".into(),
            restriction: Some(vec![1]),
            body: Box::new(Formula::atom("U", ["u"])),
        };
        assert!(evaluate_bruteforce(&b, &phi, &BTreeMap::new()).unwrap());
        let empty = Formula::Exists {
            var: "u".into(),
            restriction: Some(vec![]),
            body: Box::new(Formula::True),
        };
        assert_eq!(
            evaluate_bruteforce(&b, &empty, &BTreeMap::new()),
            Err(LogicError::BadRestriction("u".into()))
        );
    }

    #[test]
    fn extensions() {
        let k3 = fixture("clique", &[3]).unwrap();
        let e = extension(&k3, &parse_formula("E(u,v)").unwrap(), &["u", "v"]).unwrap();
        assert_eq!(&e, k3.relation("E").unwrap());
        let all = extension(&k3, &Formula::True, &["u"]).unwrap();
        assert_eq!(all.len(), 3);
        let closed = extension(&unary(), &parse_formula("exists v U(v)").unwrap(), &["u"]).unwrap();
        assert_eq!(closed.len(), 2);
    }

    #[test]
    fn shadowed_variables_use_the_inner_binding() {
        let b = unary();
        let phi = parse_formula("exists u (U(u) & forall u exists w U(w))").unwrap();
        assert!(evaluate_bruteforce(&b, &phi, &BTreeMap::new()).unwrap());
        let phi = parse_formula("forall u exists u U(u)").unwrap();
        assert!(evaluate_bruteforce(&b, &phi, &BTreeMap::new()).unwrap());
    }

    /// Oracle: a direct recursive evaluator over name-keyed maps.
    fn reference(b: &Structure, phi: &Formula, env: &BTreeMap<String, Element>) -> bool {
        let val = |t: &Term| match t {
            Term::Var(v) => env[v],
            Term::Const(c) => *c,
        };
        match phi {
            Formula::True => true,
            Formula::Atom { relation, args } => b
                .relation(relation)
                .unwrap()
                .contains(&args.iter().map(val).collect::<Vec<_>>()),
            Formula::Eq(x, y) => val(x) == val(y),
            Formula::And(ps) => ps.iter().all(|p| reference(b, p, env)),
            Formula::Or(ps) => ps.iter().any(|p| reference(b, p, env)),
            Formula::Exists { var, body, .. } => (0..b.domain_size()).any(|x| {
                let mut e = env.clone();
                e.insert(var.clone(), x);
                reference(b, body, &e)
            }),
            Formula::Forall { var, body, .. } => (0..b.domain_size()).all(|x| {
                let mut e = env.clone();
                e.insert(var.clone(), x);
                reference(b, body, &e)
            }),
        }
    }

    #[test]
    fn compiled_matches_reference_evaluator() {
        use crate::logic::random::{random_formula, random_structure, FormulaParams};
        use crate::model::Signature;
        use rand::SeedableRng;
        let sig = Signature::new([("E", 2), ("T", 3)]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let params = FormulaParams {
            allow_equality: true,
            ..FormulaParams::default()
        };
        let free = ["x".to_string(), "y".to_string()];
        for round in 0..200 {
            let n = 1 + round % 3;
            let b = random_structure(&mut rng, n, &sig, 0.4);
            let phi = random_formula(&mut rng, &sig, &free, &params);
            for t in all_tuples(n, 2) {
                let env = BTreeMap::from([("x".to_string(), t[0]), ("y".to_string(), t[1])]);
                assert_eq!(
                    evaluate_bruteforce(&b, &phi, &env).unwrap(),
                    reference(&b, &phi, &env),
                    "{phi}"
                );
            }
        }
    }
}
