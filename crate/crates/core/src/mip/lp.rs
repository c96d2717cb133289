//! CPLEX LP text format writer and a reader for `name value` solution
//! listings.
//!
//! Layout: `\` comment header with the model metadata, `Minimize`,
//! `Subject To` (omitted when there are no rows), `Bounds` (only bounds that
//! differ from the LP default `[0, +inf)`), `Binaries`, `End`. Variables and
//! rows appear in declaration order and numbers use the shortest round-trip
//! decimal form, so identical models give byte-identical files.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use super::model::{Formulation, MipModel, Sense, VarKind};
use crate::error::{Error, Result};
use crate::selection::FeatureSelection;

const TERMS_PER_LINE: usize = 6;

fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x == f64::INFINITY {
        "+inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

fn write_terms(out: &mut String, model: &MipModel, terms: &[(usize, f64)]) {
    let vars = model.variables();
    if terms.is_empty() {
        if let Some(v) = vars.first() {
            let _ = write!(out, " 0 {}", v.name);
        }
        return;
    }
    for (n, &(v, c)) in terms.iter().enumerate() {
        if n > 0 && n % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        let sign = if c < 0.0 { '-' } else { '+' };
        let _ = write!(out, " {sign} {} {}", num(c.abs()), vars[v].name);
    }
}

/// Renders `model` in CPLEX LP format.
pub fn to_lp_string(model: &MipModel) -> String {
    let md = &model.metadata;
    let mut out = String::new();
    let formulation = match md.formulation {
        Formulation::Optimistic => "optimistic",
        Formulation::Pessimistic => "pessimistic",
    };
    let _ = writeln!(
        out,
        "\\ fspeo {formulation} model: N={} p={} k={} L={}",
        md.n_points, md.n_features, md.k, md.max_features
    );
    for note in &md.notes {
        let _ = writeln!(out, "\\ {note}");
    }
    if !model.start_hint().is_empty() {
        out.push_str("\\ start hint:");
        for &(v, x) in model.start_hint() {
            let _ = write!(out, " {}={}", model.variables()[v].name, num(x));
        }
        out.push('\n');
    }
    out.push_str("Minimize\n obj:");
    write_terms(&mut out, model, model.objective());
    out.push('\n');
    if !model.constraints().is_empty() {
        out.push_str("Subject To\n");
        for c in model.constraints() {
            let _ = write!(out, " {}:", c.name);
            write_terms(&mut out, model, &c.terms);
            let sense = match c.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            let _ = writeln!(out, " {sense} {}", num(c.rhs));
        }
    }
    let bounds: Vec<String> = model
        .variables()
        .iter()
        .filter(|v| v.kind == VarKind::Continuous && !(v.lower == 0.0 && v.upper == f64::INFINITY))
        .map(|v| {
            if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
                format!(" {} free", v.name)
            } else {
                format!(" {} <= {} <= {}", num(v.lower), v.name, num(v.upper))
            }
        })
        .collect();
    if !bounds.is_empty() {
        out.push_str("Bounds\n");
        for b in bounds {
            out.push_str(&b);
            out.push('\n');
        }
    }
    let binaries: Vec<&str> = model
        .variables()
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(10) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

/// Values read back from a solver.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionValues {
    pub values: BTreeMap<String, f64>,
    /// From an `objective`/`obj` line, when present.
    pub objective: Option<f64>,
}

/// Parses one `name value` (or `name=value`) pair per line. Blank lines and
/// lines starting with `#` or `\` are skipped.
pub fn parse_solution(text: &str) -> Result<SolutionValues> {
    let mut out = SolutionValues::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('\\') {
            continue;
        }
        let mut parts = line.split(|c: char| c == '=' || c.is_whitespace()).filter(|s| !s.is_empty());
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::InvalidParameter(format!(
                "solution line {}: expected 'name value', got '{line}'",
                lineno + 1
            )));
        };
        let value: f64 = value.parse().map_err(|_| {
            Error::InvalidParameter(format!("solution line {}: '{value}' is not a number", lineno + 1))
        })?;
        match name.to_ascii_lowercase().as_str() {
            "objective" | "obj" => out.objective = Some(value),
            _ => {
                out.values.insert(name.to_string(), value);
            }
        }
    }
    Ok(out)
}

/// Features whose `b_f` exceeds 0.5.
pub fn selection_from_solution(solution: &SolutionValues, n_features: usize) -> Result<FeatureSelection> {
    let picked: Vec<usize> = (0..n_features)
        .filter(|f| solution.values.get(&format!("b_{f}")).is_some_and(|&x| x > 0.5))
        .collect();
    FeatureSelection::new(picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mip::model::ModelMetadata;
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
    fn minimal_model_has_objective_and_end_only() {
        let mut m = MipModel::new(meta());
        let x = m.continuous("x".into(), 0.0, f64::INFINITY).unwrap();
        m.add_objective_term(x, 1.5).unwrap();
        let lp = to_lp_string(&m);
        assert_eq!(lp, "\\ fspeo optimistic model: N=2 p=1 k=1 L=1\nMinimize\n obj: + 1.5 x\nEnd\n");
    }

    #[test]
    fn sections_and_signs() {
        let mut m = MipModel::new(meta());
        let b = m.binary("b_0".into()).unwrap();
        let g = m.continuous("gamma_0".into(), f64::NEG_INFINITY, f64::INFINITY).unwrap();
        let a = m.continuous("alpha_0".into(), 0.0, 2.5).unwrap();
        m.add_constraint("r".into(), vec![(b, -0.25), (g, 1.0), (a, 0.0)], Sense::Ge, -0.0).unwrap();
        m.add_objective_term(g, 1.0).unwrap();
        let lp = to_lp_string(&m);
        assert!(lp.contains(" r: - 0.25 b_0 + 1 gamma_0 >= 0\n"), "{lp}");
        assert!(lp.contains("Bounds\n gamma_0 free\n 0 <= alpha_0 <= 2.5\n"));
        assert!(lp.contains("Binaries\n b_0\nEnd\n"));
    }

    #[test]
    fn parses_solution_listing() {
        let text = "# comment\nobjective 2\nb_0 1\nb_1=0\ny_0_1 = 1\n\n";
        let sol = parse_solution(text).unwrap();
        assert_eq!(sol.objective, Some(2.0));
        assert_eq!(sol.values.len(), 3);
        assert_eq!(selection_from_solution(&sol, 2).unwrap().as_slice(), &[0]);
        assert!(parse_solution("b_0").is_err());
        assert!(parse_solution("b_0 x").is_err());
        assert!(selection_from_solution(&parse_solution("b_0 0").unwrap(), 1).is_err());
    }
}
