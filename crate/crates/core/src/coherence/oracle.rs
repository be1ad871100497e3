//! Likelihood ratios by exhaustive enumeration.

use thiserror::Error;

use super::world::{DiscreteWorld, WorldError};
use crate::model::Side;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("variable {0} has no observed outcome")]
    NotObserved(String),
    #[error("UNDEFINED_LR: observations {0:?} have probability 0 under both hypotheses")]
    UndefinedLr(Vec<String>),
}

/// `P(obs_S | H_for) / P(obs_S | H_against)` for the observed outcomes of
/// the variables in `subset`, summing out every other variable exactly.
///
/// A zero denominator with a positive numerator gives `+inf`.
pub fn oracle_lr<S: AsRef<str>>(world: &DiscreteWorld, subset: &[S]) -> Result<f64, OracleError> {
    let assignment = world.observed_assignment(subset)?.ok_or_else(|| {
        let missing = subset
            .iter()
            .map(AsRef::as_ref)
            .find(|v| !world.observed().contains_key(*v))
            .unwrap_or_default();
        OracleError::NotObserved(missing.to_string())
    })?;
    let numerator = world.marginal(Side::Claimant, &assignment);
    let denominator = world.marginal(Side::Opposing, &assignment);
    match (numerator > 0.0, denominator > 0.0) {
        (false, false) => Err(OracleError::UndefinedLr(
            subset.iter().map(|s| s.as_ref().to_string()).collect(),
        )),
        (true, false) => Ok(f64::INFINITY),
        _ => Ok(numerator / denominator),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::coherence::world::Variable;

    fn observed(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn identical_tables_give_unit_ratio() {
        let vars = vec![
            Variable::new("a", &["x", "y"]),
            Variable::new("b", &["x", "y"]),
        ];
        let table = vec![0.1, 0.2, 0.3, 0.4];
        let world = DiscreteWorld::new(
            vars,
            table.clone(),
            table,
            observed(&[("a", "y"), ("b", "x")]),
        )
        .unwrap();
        for subset in [vec![], vec!["a"], vec!["b"], vec!["a", "b"], vec!["b", "a"]] {
            assert_eq!(oracle_lr(&world, &subset).unwrap(), 1.0);
        }
    }

    #[test]
    fn independent_binary_variables() {
        // independent oracle by hand: P(a=1)=2/3 vs 1/3 (LR 2), P(b=1)=3/4 vs 1/4 (LR 3)
        let vars = vec![
            Variable::new("a", &["0", "1"]),
            Variable::new("b", &["0", "1"]),
        ];
        let marginals = vec![
            (vec![1.0 / 3.0, 2.0 / 3.0], vec![2.0 / 3.0, 1.0 / 3.0]),
            (vec![0.25, 0.75], vec![0.75, 0.25]),
        ];
        let world =
            DiscreteWorld::product(vars, &marginals, observed(&[("a", "1"), ("b", "1")])).unwrap();
        assert!((oracle_lr(&world, &["a", "b"]).unwrap() - 6.0).abs() < 1e-12);
        assert!((oracle_lr(&world, &["a"]).unwrap() - 2.0).abs() < 1e-12);
        assert!((oracle_lr(&world, &["b"]).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(oracle_lr::<&str>(&world, &[]).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_ratios() {
        let vars = vec![Variable::new("a", &["0", "1"])];
        let world = DiscreteWorld::new(
            vars.clone(),
            vec![0.5, 0.5],
            vec![1.0, 0.0],
            observed(&[("a", "1")]),
        )
        .unwrap();
        assert_eq!(oracle_lr(&world, &["a"]).unwrap(), f64::INFINITY);
        let world = DiscreteWorld::new(
            vars.clone(),
            vec![1.0, 0.0],
            vec![0.5, 0.5],
            observed(&[("a", "1")]),
        )
        .unwrap();
        assert_eq!(oracle_lr(&world, &["a"]).unwrap(), 0.0);
        let world = DiscreteWorld::new(
            vars,
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            observed(&[("a", "1")]),
        )
        .unwrap();
        assert!(matches!(
            oracle_lr(&world, &["a"]),
            Err(OracleError::UndefinedLr(_))
        ));
    }

    #[test]
    fn errors_for_unknown_or_unobserved() {
        let vars = vec![
            Variable::new("a", &["0", "1"]),
            Variable::new("b", &["0", "1"]),
        ];
        let t = vec![0.25; 4];
        let world = DiscreteWorld::new(vars, t.clone(), t, observed(&[("a", "1")])).unwrap();
        assert_eq!(
            oracle_lr(&world, &["b"]),
            Err(OracleError::NotObserved("b".into()))
        );
        assert!(matches!(
            oracle_lr(&world, &["zz"]),
            Err(OracleError::World(WorldError::UnknownVariable(_)))
        ));
    }
}
