//! Small enumerable joint distributions over evidence variables, one per
//! hypothesis, and their `.world` text format.
//!
//! ```text
//! # two witnesses
//! variable e1 yes no
//! variable e2 yes no
//! observe e1 yes
//! observe e2 yes
//! table for
//!   yes yes 0.01
//!   yes no  0.09
//!   no  yes 0.09
//!   no  no  0.81
//! table against
//!   ...
//! ```
//!
//! Rows that are not listed have mass 0. Each table must sum to 1 within
//! 1e-12.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use thiserror::Error;

use crate::model::Side;
use crate::numeric::CompensatedSum;
use crate::parser::format_number;

/// Largest number of joint outcomes a world may have.
pub const MAX_OUTCOMES: usize = 1 << 20;

/// Tolerance on the total mass of each table.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorldError {
    #[error("world has more joint outcomes than the enumerable limit of 2^20")]
    TooLarge,
    #[error("variable {0} declared twice")]
    DuplicateVariable(String),
    #[error("variable {0} has no outcomes")]
    NoOutcomes(String),
    #[error("variable {variable} lists outcome {outcome} twice")]
    DuplicateOutcome { variable: String, outcome: String },
    #[error("table `{side}` has {found} rows, expected {expected}")]
    TableLength {
        side: &'static str,
        found: usize,
        expected: usize,
    },
    #[error("table `{side}` has invalid mass {mass} at row {row}")]
    BadMass {
        side: &'static str,
        row: usize,
        mass: f64,
    },
    #[error("table `{side}` sums to {sum}, not 1")]
    NotNormalized { side: &'static str, sum: f64 },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("variable {variable} has no outcome {outcome}")]
    UnknownOutcome { variable: String, outcome: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub id: String,
    pub outcomes: Vec<String>,
}

impl Variable {
    pub fn new(id: impl Into<String>, outcomes: &[&str]) -> Self {
        Self {
            id: id.into(),
            outcomes: outcomes.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Joint probability tables `P(E | H_for)` and `P(E | H_against)` over a
/// fixed list of variables, stored row-major with the last variable varying
/// fastest, plus the observed outcome of some variables.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteWorld {
    variables: Vec<Variable>,
    claimant: Vec<f64>,
    opposing: Vec<f64>,
    claimant_total: f64,
    opposing_total: f64,
    observed: BTreeMap<String, String>,
}

/// `(variable index, outcome index)`
pub type Assignment = Vec<(usize, usize)>;

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Claimant => "for",
        Side::Opposing => "against",
    }
}

impl DiscreteWorld {
    pub fn new(
        variables: Vec<Variable>,
        claimant: Vec<f64>,
        opposing: Vec<f64>,
        observed: BTreeMap<String, String>,
    ) -> Result<Self, WorldError> {
        let size = joint_size(&variables)?;
        let mut seen = BTreeMap::new();
        for v in &variables {
            if seen.insert(v.id.as_str(), ()).is_some() {
                return Err(WorldError::DuplicateVariable(v.id.clone()));
            }
            let mut outcomes = BTreeMap::new();
            for o in &v.outcomes {
                if outcomes.insert(o.as_str(), ()).is_some() {
                    return Err(WorldError::DuplicateOutcome {
                        variable: v.id.clone(),
                        outcome: o.clone(),
                    });
                }
            }
        }
        let mut totals = [0.0; 2];
        for (k, (side, table)) in [(Side::Claimant, &claimant), (Side::Opposing, &opposing)]
            .into_iter()
            .enumerate()
        {
            let name = side_name(side);
            if table.len() != size {
                return Err(WorldError::TableLength {
                    side: name,
                    found: table.len(),
                    expected: size,
                });
            }
            if let Some((row, &mass)) = table
                .iter()
                .enumerate()
                .find(|(_, m)| !(m.is_finite() && **m >= 0.0))
            {
                return Err(WorldError::BadMass {
                    side: name,
                    row,
                    mass,
                });
            }
            let sum = table.iter().copied().collect::<CompensatedSum>().value();
            if (sum - 1.0).abs() > MASS_TOLERANCE {
                return Err(WorldError::NotNormalized { side: name, sum });
            }
            totals[k] = sum;
        }
        let mut world = Self {
            variables,
            claimant,
            opposing,
            claimant_total: totals[0],
            opposing_total: totals[1],
            observed: BTreeMap::new(),
        };
        for (variable, outcome) in observed {
            world.observe(&variable, &outcome)?;
        }
        Ok(world)
    }

    /// Tables that factor as a product of per-variable distributions.
    /// `marginals[i]` holds `(claimant, opposing)` mass vectors for
    /// variable `i`.
    pub fn product(
        variables: Vec<Variable>,
        marginals: &[(Vec<f64>, Vec<f64>)],
        observed: BTreeMap<String, String>,
    ) -> Result<Self, WorldError> {
        let size = joint_size(&variables)?;
        let tables = [vec![1.0; size], vec![1.0; size]];
        for (i, v) in variables.iter().enumerate() {
            let (p, d) = marginals
                .get(i)
                .ok_or_else(|| WorldError::NoOutcomes(v.id.clone()))?;
            for (k, m) in [p, d].into_iter().enumerate() {
                if m.len() != v.outcomes.len() {
                    return Err(WorldError::TableLength {
                        side: side_name([Side::Claimant, Side::Opposing][k]),
                        found: m.len(),
                        expected: v.outcomes.len(),
                    });
                }
            }
        }
        let strides = strides(&variables);
        let [mut claimant, mut opposing] = tables;
        for (row, (p, d)) in claimant.iter_mut().zip(opposing.iter_mut()).enumerate() {
            for (i, v) in variables.iter().enumerate() {
                let outcome = (row / strides[i]) % v.outcomes.len();
                *p *= marginals[i].0[outcome];
                *d *= marginals[i].1[outcome];
            }
        }
        Self::new(variables, claimant, opposing, observed)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn table(&self, side: Side) -> &[f64] {
        match side {
            Side::Claimant => &self.claimant,
            Side::Opposing => &self.opposing,
        }
    }

    pub fn observed(&self) -> &BTreeMap<String, String> {
        &self.observed
    }

    pub fn size(&self) -> usize {
        self.claimant.len()
    }

    pub fn observe(&mut self, variable: &str, outcome: &str) -> Result<(), WorldError> {
        let index = self.variable_index(variable)?;
        if !self.variables[index].outcomes.iter().any(|o| o == outcome) {
            return Err(WorldError::UnknownOutcome {
                variable: variable.to_string(),
                outcome: outcome.to_string(),
            });
        }
        self.observed
            .insert(variable.to_string(), outcome.to_string());
        Ok(())
    }

    pub fn variable_index(&self, id: &str) -> Result<usize, WorldError> {
        self.variables
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| WorldError::UnknownVariable(id.to_string()))
    }

    /// Indices of `(variable, observed outcome)` for each listed variable,
    /// or `None` for a variable without an observation.
    pub fn observed_assignment<S: AsRef<str>>(
        &self,
        variables: &[S],
    ) -> Result<Option<Assignment>, WorldError> {
        let mut out = Vec::with_capacity(variables.len());
        for id in variables {
            let id = id.as_ref();
            let index = self.variable_index(id)?;
            let Some(outcome) = self.observed.get(id) else {
                return Ok(None);
            };
            let o = self.variables[index]
                .outcomes
                .iter()
                .position(|x| x == outcome)
                .expect("observations are validated");
            out.push((index, o));
        }
        Ok(Some(out))
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        strides(&self.variables)
    }

    /// Probability that every `(variable, outcome)` pair in `assignment`
    /// holds, under the table for `side`: an exact compensated sum over the
    /// matching rows in row-major order, divided by the table's total mass.
    pub fn marginal(&self, side: Side, assignment: &[(usize, usize)]) -> f64 {
        let (table, total) = match side {
            Side::Claimant => (&self.claimant, self.claimant_total),
            Side::Opposing => (&self.opposing, self.opposing_total),
        };
        if assignment.is_empty() {
            return 1.0;
        }
        let strides = self.strides();
        let mut acc = CompensatedSum::new();
        for (row, &mass) in table.iter().enumerate() {
            let matches = assignment
                .iter()
                .all(|&(v, o)| (row / strides[v]) % self.variables[v].outcomes.len() == o);
            if matches {
                acc.add(mass);
            }
        }
        acc.value() / total
    }

    pub fn parse(text: &str) -> Result<Self, WorldError> {
        let syntax = |line: usize, message: String| WorldError::Syntax { line, message };
        let mut variables: Vec<Variable> = Vec::new();
        let mut observed = Vec::new();
        let mut rows: [HashMap<Vec<String>, (usize, f64)>; 2] = [HashMap::new(), HashMap::new()];
        let mut current: Option<usize> = None;

        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = content.split_whitespace().collect();
            let Some((&head, rest)) = words.split_first() else {
                continue;
            };
            match head {
                "variable" => {
                    if current.is_some() {
                        return Err(syntax(
                            line,
                            "variables must be declared before tables".into(),
                        ));
                    }
                    let Some((id, outcomes)) = rest.split_first() else {
                        return Err(syntax(line, "expected `variable <id> <outcome>...`".into()));
                    };
                    if outcomes.is_empty() {
                        return Err(WorldError::NoOutcomes(id.to_string()));
                    }
                    variables.push(Variable::new(*id, outcomes));
                }
                "observe" => match rest {
                    [variable, outcome] => {
                        observed.push((line, variable.to_string(), outcome.to_string()))
                    }
                    _ => {
                        return Err(syntax(
                            line,
                            "expected `observe <variable> <outcome>`".into(),
                        ))
                    }
                },
                "table" => {
                    current = Some(match rest {
                        ["for"] => 0,
                        ["against"] => 1,
                        _ => {
                            return Err(syntax(
                                line,
                                "expected `table for` or `table against`".into(),
                            ))
                        }
                    });
                }
                _ => {
                    let Some(k) = current else {
                        return Err(syntax(line, format!("unknown directive `{head}`")));
                    };
                    let (mass, outcomes) = words.split_last().expect("nonempty");
                    if outcomes.len() != variables.len() {
                        return Err(syntax(
                            line,
                            format!(
                                "row has {} outcomes, expected {}",
                                outcomes.len(),
                                variables.len()
                            ),
                        ));
                    }
                    let mass: f64 = mass
                        .parse()
                        .map_err(|_| syntax(line, format!("`{mass}` is not a number")))?;
                    let key: Vec<String> = outcomes.iter().map(|s| s.to_string()).collect();
                    if rows[k].insert(key, (line, mass)).is_some() {
                        return Err(syntax(line, "row listed twice".into()));
                    }
                }
            }
        }

        let size = joint_size(&variables)?;
        let strides = strides(&variables);
        let mut tables = [vec![0.0; size], vec![0.0; size]];
        for (k, table_rows) in rows.iter().enumerate() {
            let mut entries: Vec<_> = table_rows.iter().collect();
            entries.sort_by_key(|(_, (line, _))| *line);
            for (key, &(line, mass)) in entries {
                let mut index = 0;
                for (i, outcome) in key.iter().enumerate() {
                    let o = variables[i]
                        .outcomes
                        .iter()
                        .position(|x| x == outcome)
                        .ok_or_else(|| {
                            syntax(
                                line,
                                format!("variable {} has no outcome {outcome}", variables[i].id),
                            )
                        })?;
                    index += o * strides[i];
                }
                tables[k][index] = mass;
            }
        }
        let [claimant, opposing] = tables;
        let mut world = Self::new(variables, claimant, opposing, BTreeMap::new())?;
        for (line, variable, outcome) in observed {
            world
                .observe(&variable, &outcome)
                .map_err(|e| syntax(line, e.to_string()))?;
        }
        Ok(world)
    }

    /// Canonical `.world` text; every row is listed, zeros included.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.variables {
            let _ = writeln!(out, "variable {} {}", v.id, v.outcomes.join(" "));
        }
        for (variable, outcome) in &self.observed {
            let _ = writeln!(out, "observe {variable} {outcome}");
        }
        let strides = self.strides();
        for side in [Side::Claimant, Side::Opposing] {
            let _ = writeln!(out, "table {}", side_name(side));
            for (row, mass) in self.table(side).iter().enumerate() {
                let outcomes: Vec<&str> = self
                    .variables
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v.outcomes[(row / strides[i]) % v.outcomes.len()].as_str())
                    .collect();
                let _ = writeln!(out, "  {} {}", outcomes.join(" "), format_number(*mass));
            }
        }
        out
    }
}

fn joint_size(variables: &[Variable]) -> Result<usize, WorldError> {
    let mut size: usize = 1;
    for v in variables {
        if v.outcomes.is_empty() {
            return Err(WorldError::NoOutcomes(v.id.clone()));
        }
        size = size
            .checked_mul(v.outcomes.len())
            .filter(|s| *s <= MAX_OUTCOMES)
            .ok_or(WorldError::TooLarge)?;
    }
    Ok(size)
}

fn strides(variables: &[Variable]) -> Vec<usize> {
    let mut strides = vec![1; variables.len()];
    for i in (0..variables.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * variables[i + 1].outcomes.len();
    }
    strides
}
