use super::expr::{Expr, Func};
use crate::error::{Error, Result};

/// Coordinate names, a box used for randomized sampling, and loci to avoid.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    names: Vec<String>,
    domain: Vec<(f64, f64)>,
    excluded: Vec<Expr>,
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    /// Builds a chart; every coordinate gets its own closed sampling interval.
    pub fn new<S: Into<String>>(names: Vec<S>, domain: Vec<(f64, f64)>) -> Result<Chart> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Chart("chart has no coordinates".into()));
        }
        if domain.len() != names.len() {
            return Err(Error::Chart(format!(
                "{} sampling intervals for {} coordinates",
                domain.len(),
                names.len()
            )));
        }
        for (k, name) in names.iter().enumerate() {
            if !valid_ident(name) || Func::from_name(name).is_some() || name == "pi" {
                return Err(Error::Chart(format!("invalid coordinate name `{name}`")));
            }
            if names[..k].contains(name) {
                return Err(Error::Chart(format!("duplicate coordinate `{name}`")));
            }
            let (lo, hi) = domain[k];
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Chart(format!("degenerate interval for `{name}`")));
            }
        }
        Ok(Chart {
            names,
            domain,
            excluded: Vec::new(),
        })
    }

    /// Same interval for every coordinate.
    pub fn uniform<S: Into<String>>(names: Vec<S>, lo: f64, hi: f64) -> Result<Chart> {
        let n = names.len();
        Chart::new(names, vec![(lo, hi); n])
    }

    /// Registers expressions that must not vanish at sample points.
    pub fn with_excluded(mut self, loci: Vec<Expr>) -> Result<Chart> {
        for e in &loci {
            if e.max_coord().is_some_and(|m| m >= self.dim()) {
                return Err(Error::Chart(
                    "excluded locus uses unknown coordinate".into(),
                ));
            }
        }
        self.excluded.extend(loci);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn excluded(&self) -> &[Expr] {
        &self.excluded
    }

    pub fn coord(&self, name: &str) -> Expr {
        Expr::coord(
            self.index_of(name)
                .unwrap_or_else(|| panic!("no coordinate `{name}`")),
        )
    }

    pub fn coords(&self) -> Vec<Expr> {
        (0..self.dim()).map(Expr::coord).collect()
    }

    /// Whether `p` is usable: inside no excluded locus.
    pub fn admissible(&self, p: &[f64]) -> bool {
        self.excluded
            .iter()
            .all(|e| matches!(e.eval(p), Ok(v) if v.abs() > 1e-6))
    }

    /// The chart extended by one trailing coordinate.
    pub fn extended(&self, name: &str, interval: (f64, f64)) -> Result<Chart> {
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut domain = self.domain.clone();
        domain.push(interval);
        Chart::new(names, domain)?.with_excluded(self.excluded.clone())
    }
}
