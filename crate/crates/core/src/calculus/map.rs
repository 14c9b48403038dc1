use super::field::VectorField;
use super::form::{subsets, KForm};
use super::linalg::{self, Matrix};
use crate::error::{Error, Result};
use crate::symexpr::{Chart, Context, Expr};

/// A self-map of the chart, given by its component expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    comps: Vec<Expr>,
}

impl PointMap {
    pub fn new(comps: Vec<Expr>) -> PointMap {
        PointMap { comps }
    }

    pub fn parse(texts: &[&str], chart: &Chart) -> Result<PointMap> {
        if texts.len() != chart.dim() {
            return Err(Error::Dimension(format!(
                "map has {} components on a {}-dimensional chart",
                texts.len(),
                chart.dim()
            )));
        }
        let comps = texts
            .iter()
            .map(|t| crate::symexpr::parse(t, chart))
            .collect::<Result<_>>()?;
        Ok(PointMap { comps })
    }

    pub fn identity(dim: usize) -> PointMap {
        PointMap::new((0..dim).map(Expr::coord).collect())
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Expr] {
        &self.comps
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PointMap) -> PointMap {
        PointMap::new(
            self.comps
                .iter()
                .map(|c| c.substitute(&inner.comps).simplify())
                .collect(),
        )
    }

    /// `J[a][b] = ∂ f_a / ∂ u_b`.
    pub fn jacobian(&self) -> Matrix {
        self.comps
            .iter()
            .map(|f| (0..self.dim()).map(|b| f.diff(b).simplify()).collect())
            .collect()
    }

    /// Zero verdicts of `self ∘ other − id`, componentwise.
    pub fn is_left_inverse_of(&self, other: &PointMap, ctx: &Context) -> Result<bool> {
        for (k, c) in self.compose(other).comps.iter().enumerate() {
            if !ctx.equal(c, &Expr::coord(k))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Inverse of an affine map `p ↦ J p + b` with constant Jacobian.
    pub fn affine_inverse(&self, ctx: &Context) -> Result<PointMap> {
        let jac = self.jacobian();
        if jac.iter().flatten().any(|e| e.max_coord().is_some()) {
            return Err(Error::Precondition(
                "inverse not supplied for a non-affine map".into(),
            ));
        }
        let zero = vec![Expr::zero(); self.dim()];
        let offset: Vec<Expr> = self
            .comps
            .iter()
            .map(|c| c.substitute(&zero).simplify())
            .collect();
        let rhs: Vec<Expr> = (0..self.dim())
            .map(|k| (&Expr::coord(k) - &offset[k]).simplify())
            .collect();
        let inv = linalg::solve(&jac, &rhs, ctx).map_err(|e| match e {
            Error::Singular(_) => Error::Singular("Jacobian of the map".into()),
            e => e,
        })?;
        let inv = PointMap::new(inv);
        if !inv.is_left_inverse_of(self, ctx)? {
            return Err(Error::Precondition("map is not affine".into()));
        }
        Ok(inv)
    }

    /// `(f_* V)(p) = Df(f⁻¹ p) · V(f⁻¹ p)`.
    pub fn pushforward(&self, v: &VectorField, inverse: &PointMap) -> VectorField {
        let jv = linalg::matvec(&self.jacobian(), v.coeffs());
        VectorField::new(
            jv.iter()
                .map(|c| c.substitute(&inverse.comps).simplify())
                .collect(),
        )
    }

    /// `(f^*ω)_J = Σ_I (ω_I ∘ f) · det(∂f_I/∂u_J)`.
    pub fn pullback_form(&self, form: &KForm, ctx: &Context) -> Result<KForm> {
        let jac = self.jacobian();
        let k = form.degree();
        let mut out = KForm::zero(form.dim(), k);
        if k == 0 {
            out.set(&[], form.component(&[]).substitute(&self.comps));
            return Ok(out);
        }
        let pulled: Vec<(Vec<usize>, Expr)> = form
            .components()
            .map(|(i, w)| (i.clone(), w.substitute(&self.comps)))
            .collect();
        for target in subsets(self.dim(), k) {
            let mut terms = Vec::new();
            for (idx, w) in &pulled {
                let minor: Matrix = idx
                    .iter()
                    .map(|&a| target.iter().map(|&b| jac[a][b].clone()).collect())
                    .collect();
                let d = linalg::det(&minor, ctx)?;
                if !d.is_const_zero() {
                    terms.push(w * &d);
                }
            }
            out.set(&target, Expr::add(terms));
        }
        Ok(out)
    }

    /// `Jᵀ (G ∘ f) J` for a coordinate-basis metric matrix.
    pub fn pullback_metric(&self, g: &Matrix) -> Matrix {
        let jac = self.jacobian();
        let gf: Matrix = g
            .iter()
            .map(|row| row.iter().map(|e| e.substitute(&self.comps)).collect())
            .collect();
        linalg::matmul(&linalg::transpose(&jac), &linalg::matmul(&gf, &jac))
    }

    pub fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.comps
            .iter()
            .map(|c| c.eval(p).map_err(Error::from))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::SamplingPlan;

    fn ctx() -> Context {
        Context::new(
            Chart::uniform(vec!["x", "y", "z"], -1.0, 1.0).unwrap(),
            SamplingPlan::default(),
        )
    }

    #[test]
    fn affine_inverse_and_pushforward() {
        let c = ctx();
        let f = PointMap::parse(&["x + 1", "y", "z + y/2"], c.chart()).unwrap();
        let finv = f.affine_inverse(&c).unwrap();
        assert!(f.is_left_inverse_of(&finv, &c).unwrap());
        let x1 = VectorField::parse(&["1", "0", "-y/2"], c.chart()).unwrap();
        assert_eq!(f.pushforward(&x1, &finv), x1.simplify());
    }

    #[test]
    fn pullback_commutes_with_d() {
        let c = ctx();
        let f = PointMap::parse(&["x*y + z", "y^2 - x", "z*x"], c.chart()).unwrap();
        let a = KForm::parse_one_form(&["y*z", "x^2", "x - z"], c.chart()).unwrap();
        let lhs = f.pullback_form(&a.exterior_derivative(), &c).unwrap();
        let rhs = f.pullback_form(&a, &c).unwrap().exterior_derivative();
        assert!(lhs.sub(&rhs).is_structurally_zero());
        let id = PointMap::identity(3);
        let dz = KForm::coordinate(3, 2);
        assert_eq!(id.pullback_form(&dz, &c).unwrap(), dz);
    }
}
