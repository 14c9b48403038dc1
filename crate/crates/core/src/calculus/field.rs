use crate::error::{Error, Result};
use crate::symexpr::{Chart, Expr};

/// A vector field in the coordinate basis `∂/∂u_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    coeffs: Vec<Expr>,
}

impl VectorField {
    pub fn new(coeffs: Vec<Expr>) -> VectorField {
        VectorField { coeffs }
    }

    /// Parses one expression per coordinate.
    pub fn parse(texts: &[&str], chart: &Chart) -> Result<VectorField> {
        if texts.len() != chart.dim() {
            return Err(Error::Dimension(format!(
                "vector field has {} components on a {}-dimensional chart",
                texts.len(),
                chart.dim()
            )));
        }
        let coeffs = texts
            .iter()
            .map(|t| crate::symexpr::parse(t, chart))
            .collect::<Result<_>>()?;
        Ok(VectorField { coeffs })
    }

    pub fn zero(dim: usize) -> VectorField {
        VectorField::new(vec![Expr::zero(); dim])
    }

    /// `∂/∂u_k`.
    pub fn coordinate(dim: usize, k: usize) -> VectorField {
        let mut v = VectorField::zero(dim);
        v.coeffs[k] = Expr::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Expr {
        &self.coeffs[k]
    }

    /// Directional derivative `V(f)`.
    pub fn apply(&self, f: &Expr) -> Expr {
        Expr::add(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_const_zero())
                .map(|(k, c)| c * &f.diff(k)),
        )
        .simplify()
    }

    /// `[V, W]_k = Σ_i (V_i ∂_i W_k − W_i ∂_i V_k)`.
    pub fn lie_bracket(&self, other: &VectorField) -> VectorField {
        let coeffs = (0..self.dim())
            .map(|k| (&self.apply(&other.coeffs[k]) - &other.apply(&self.coeffs[k])).simplify())
            .collect();
        VectorField { coeffs }
    }

    pub fn scale(&self, f: &Expr) -> VectorField {
        VectorField::new(self.coeffs.iter().map(|c| (f * c).simplify()).collect())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a + b).simplify())
                .collect(),
        )
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a - b).simplify())
                .collect(),
        )
    }

    pub fn neg(&self) -> VectorField {
        VectorField::new(self.coeffs.iter().map(|c| (-c).simplify()).collect())
    }

    /// `Σ_k a_k V_k`.
    pub fn combination(coeffs: &[Expr], fields: &[VectorField]) -> VectorField {
        let dim = fields.first().map_or(0, VectorField::dim);
        let comps = (0..dim)
            .map(|i| Expr::add(coeffs.iter().zip(fields).map(|(a, f)| a * &f.coeffs[i])).simplify())
            .collect();
        VectorField::new(comps)
    }

    pub fn substitute(&self, values: &[Expr]) -> VectorField {
        VectorField::new(
            self.coeffs
                .iter()
                .map(|c| c.substitute(values).simplify())
                .collect(),
        )
    }

    pub fn simplify(&self) -> VectorField {
        VectorField::new(self.coeffs.iter().map(Expr::simplify).collect())
    }

    pub fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| c.eval(p).map_err(Error::from))
            .collect()
    }

    pub fn to_text(&self, chart: &Chart) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_text(chart)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets() {
        let chart = Chart::uniform(vec!["x", "y", "z"], -1.0, 1.0).unwrap();
        let dx = VectorField::coordinate(3, 0);
        let dy = VectorField::coordinate(3, 1);
        assert_eq!(dx.lie_bracket(&dy), VectorField::zero(3));
        let x1 = VectorField::parse(&["1", "0", "-y/2"], &chart).unwrap();
        let x2 = VectorField::parse(&["0", "1", "x/2"], &chart).unwrap();
        assert_eq!(x1.lie_bracket(&x2), VectorField::coordinate(3, 2));
        let xdy = VectorField::parse(&["0", "x", "0"], &chart).unwrap();
        assert_eq!(xdy.lie_bracket(&dx), dy.neg());
    }
}
