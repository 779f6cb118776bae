//! Named structure families.
//!
//! Labelling is fixed: cliques and multipartite graphs are loopless and
//! symmetric, multipartite blocks occupy consecutive element ranges, and
//! `k2_plus_k1` puts the edge on `{0, 1}` with `2` isolated.

use super::{all_tuples, ModelError, Relation, Structure};

pub const FIXTURE_NAMES: &[&str] = &["clique", "nae", "k2_plus_k1", "multipartite"];

pub fn fixture(name: &str, params: &[usize]) -> Result<Structure, ModelError> {
    let invalid = |reason: &str| ModelError::InvalidFixtureParams {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    match name {
        "clique" => match params {
            [n] if *n >= 1 => multipartite(&vec![1; *n]),
            _ => Err(invalid("expected one size >= 1")),
        },
        "nae" => match params {
            [n] if *n >= 1 => {
                let tuples = all_tuples(*n, 3).filter(|t| !(t[0] == t[1] && t[1] == t[2]));
                Structure::new(*n)?.with_relation("R_NAE", Relation::from_tuples(3, tuples)?)
            }
            _ => Err(invalid("expected one size >= 1")),
        },
        "k2_plus_k1" => match params {
            [] => Structure::new(3)?
                .with_relation("E", Relation::from_tuples(2, [[0, 1], [1, 0]])?),
            _ => Err(invalid("takes no parameters")),
        },
        "multipartite" => {
            if params.is_empty() || params.contains(&0) {
                return Err(invalid("expected one or more block sizes >= 1"));
            }
            multipartite(params)
        }
        other => Err(ModelError::UnknownFixture(other.to_string())),
    }
}

fn multipartite(blocks: &[usize]) -> Result<Structure, ModelError> {
    let block_of: Vec<usize> = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, &size)| std::iter::repeat_n(i, size))
        .collect();
    let n = block_of.len();
    let edges = all_tuples(n, 2).filter(|t| block_of[t[0]] != block_of[t[1]]);
    Structure::new(n)?.with_relation("E", Relation::from_tuples(2, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nae_on_two_elements() {
        let b = fixture("nae", &[2]).unwrap();
        let r = b.relation("R_NAE").unwrap();
        assert_eq!(r.len(), 6);
        assert!(!r.contains(&[0, 0, 0]) && !r.contains(&[1, 1, 1]));
        assert!(r.contains(&[0, 0, 1]));
    }

    #[test]
    fn k3_edges() {
        let e = fixture("clique", &[3]).unwrap();
        let e = e.relation("E").unwrap();
        let expect = [[0, 1], [1, 0], [1, 2], [2, 1], [2, 0], [0, 2]];
        assert_eq!(e.len(), 6);
        assert!(expect.iter().all(|t| e.contains(t)));
    }

    #[test]
    fn complete_bipartite_2_1() {
        let b = fixture("multipartite", &[2, 1]).unwrap();
        let e = b.relation("E").unwrap();
        let expect = [[0, 2], [2, 0], [1, 2], [2, 1]];
        assert_eq!(e.len(), 4);
        assert!(expect.iter().all(|t| e.contains(t)));
    }

    #[test]
    fn bad_fixture_requests() {
        assert!(matches!(
            fixture("clique", &[0]),
            Err(ModelError::InvalidFixtureParams { .. })
        ));
        assert!(matches!(
            fixture("multipartite", &[]),
            Err(ModelError::InvalidFixtureParams { .. })
        ));
        assert!(matches!(
            fixture("k2_plus_k1", &[1]),
            Err(ModelError::InvalidFixtureParams { .. })
        ));
        assert_eq!(
            fixture("petersen", &[]),
            Err(ModelError::UnknownFixture("petersen".into()))
        );
    }
}
