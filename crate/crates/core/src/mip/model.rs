use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// `-inf` for a free variable.
    pub lower: f64,
    /// `+inf` when unbounded.
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Formulation {
    Optimistic,
    Pessimistic,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelMetadata {
    pub formulation: Formulation,
    pub n_points: usize,
    pub n_features: usize,
    pub k: usize,
    pub max_features: usize,
    /// Free-form `key=value` notes (big-M, bound rule, ...), emitted as
    /// comments.
    pub notes: Vec<String>,
}

/// A minimization MILP over named variables.
#[derive(Debug, Clone, PartialEq)]
pub struct MipModel {
    pub metadata: ModelMetadata,
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Vec<(usize, f64)>,
    start_hint: Vec<(usize, f64)>,
    by_name: BTreeMap<String, usize>,
    row_names: BTreeMap<String, usize>,
}

impl MipModel {
    pub fn new(metadata: ModelMetadata) -> Self {
        Self {
            metadata,
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
            start_hint: Vec::new(),
            by_name: BTreeMap::new(),
            row_names: BTreeMap::new(),
        }
    }

    pub fn add_variable(&mut self, name: String, kind: VarKind, lower: f64, upper: f64) -> Result<usize> {
        if lower > upper || lower.is_nan() || upper.is_nan() {
            return Err(Error::InvalidModel(format!("variable '{name}' has empty bounds [{lower}, {upper}]")));
        }
        let id = self.variables.len();
        if self.by_name.insert(name.clone(), id).is_some() {
            return Err(Error::InvalidModel(format!("duplicate variable name '{name}'")));
        }
        self.variables.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        Ok(id)
    }

    pub fn binary(&mut self, name: String) -> Result<usize> {
        self.add_variable(name, VarKind::Binary, 0.0, 1.0)
    }

    pub fn continuous(&mut self, name: String, lower: f64, upper: f64) -> Result<usize> {
        self.add_variable(name, VarKind::Continuous, lower, upper)
    }

    /// Zero coefficients are dropped; duplicated variables are not merged.
    pub fn add_constraint(&mut self, name: String, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Result<()> {
        if let Some(&(v, _)) = terms.iter().find(|(v, _)| *v >= self.variables.len()) {
            return Err(Error::InvalidModel(format!("constraint '{name}' references undeclared variable {v}")));
        }
        if terms.iter().any(|(_, c)| !c.is_finite()) || !rhs.is_finite() {
            return Err(Error::InvalidModel(format!("constraint '{name}' has non-finite data")));
        }
        if self.row_names.insert(name.clone(), self.constraints.len()).is_some() {
            return Err(Error::InvalidModel(format!("duplicate constraint name '{name}'")));
        }
        self.constraints.push(Constraint {
            name,
            terms: terms.into_iter().filter(|&(_, c)| c != 0.0).collect(),
            sense,
            rhs,
        });
        Ok(())
    }

    pub fn add_objective_term(&mut self, var: usize, coefficient: f64) -> Result<()> {
        if var >= self.variables.len() {
            return Err(Error::InvalidModel(format!("objective references undeclared variable {var}")));
        }
        if coefficient != 0.0 {
            self.objective.push((var, coefficient));
        }
        Ok(())
    }

    /// Values written as a commented start hint in the exchange file.
    pub fn set_start_hint(&mut self, hint: Vec<(usize, f64)>) {
        self.start_hint = hint;
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(usize, f64)] {
        &self.objective
    }

    pub fn start_hint(&self) -> &[(usize, f64)] {
        &self.start_hint
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn n_binaries(&self) -> usize {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary).count()
    }

    pub fn n_continuous(&self) -> usize {
        self.variables.len() - self.n_binaries()
    }

    /// Objective value of a full assignment (indexed like `variables()`).
    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Checks bounds, integrality and every row within absolute tolerance
    /// `tol`; the error names the first violated item.
    pub fn check_assignment(&self, values: &[f64], tol: f64) -> core::result::Result<f64, String> {
        if values.len() != self.variables.len() {
            return Err(format!("expected {} values, got {}", self.variables.len(), values.len()));
        }
        for (v, &x) in self.variables.iter().zip(values) {
            if x < v.lower - tol || x > v.upper + tol {
                return Err(format!("{} = {x} outside [{}, {}]", v.name, v.lower, v.upper));
            }
            if v.kind == VarKind::Binary && (x - libm::round(x)).abs() > tol {
                return Err(format!("{} = {x} is not integral", v.name));
            }
        }
        for c in &self.constraints {
            let lhs: f64 = c.terms.iter().map(|&(v, a)| a * values[v]).sum();
            let ok = match c.sense {
                Sense::Le => lhs <= c.rhs + tol,
                Sense::Ge => lhs >= c.rhs - tol,
                Sense::Eq => (lhs - c.rhs).abs() <= tol,
            };
            if !ok {
                return Err(format!("row {} violated: lhs {lhs} vs rhs {}", c.name, c.rhs));
            }
        }
        Ok(self.objective_value(values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn meta() -> ModelMetadata {
        ModelMetadata {
            formulation: Formulation::Optimistic,
            n_points: 2,
            n_features: 1,
            k: 1,
            max_features: 1,
            notes: vec![],
        }
    }

    #[test]
    fn rejects_duplicates_and_dangling_refs() {
        let mut m = MipModel::new(meta());
        let x = m.binary("x".to_string()).unwrap();
        assert!(m.binary("x".to_string()).is_err());
        assert!(m.add_constraint("c".into(), vec![(x, 1.0)], Sense::Le, 1.0).is_ok());
        assert!(m.add_constraint("c".into(), vec![(x, 1.0)], Sense::Le, 1.0).is_err());
        assert!(m.add_constraint("d".into(), vec![(5, 1.0)], Sense::Le, 1.0).is_err());
        assert!(m.add_objective_term(3, 1.0).is_err());
        assert!(m.continuous("y".into(), 2.0, 1.0).is_err());
    }

    #[test]
    fn assignment_check() {
        let mut m = MipModel::new(meta());
        let x = m.binary("x".into()).unwrap();
        let y = m.continuous("y".into(), 0.0, f64::INFINITY).unwrap();
        m.add_constraint("c".into(), vec![(x, 1.0), (y, 1.0)], Sense::Ge, 1.5).unwrap();
        m.add_objective_term(y, 2.0).unwrap();
        assert_eq!(m.check_assignment(&[1.0, 0.5], 1e-9), Ok(1.0));
        assert!(m.check_assignment(&[0.5, 1.0], 1e-9).is_err());
        assert!(m.check_assignment(&[0.0, 1.0], 1e-9).is_err());
    }
}
