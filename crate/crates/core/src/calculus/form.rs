use std::collections::BTreeMap;

use super::field::VectorField;
use super::linalg::{self, Matrix};
use crate::error::{Error, Result};
use crate::symexpr::{Chart, Context, Expr};

/// A differential k-form stored sparsely by strictly increasing multi-index.
///
/// Evaluation uses the determinant convention
/// `dx_I(V_1,…,V_k) = det[V_a^{I_b}]`, so `dα(X,Y) = X α(Y) − Y α(X) − α([X,Y])`
/// holds with no factor ½.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KForm {
    dim: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Expr>,
}

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Strictly increasing `k`-subsets of `0..n`.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> KForm {
        KForm {
            dim,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn function(dim: usize, f: Expr) -> KForm {
        let mut out = KForm::zero(dim, 0);
        out.set(&[], f);
        out
    }

    /// `du_k`.
    pub fn coordinate(dim: usize, k: usize) -> KForm {
        let mut out = KForm::zero(dim, 1);
        out.set(&[k], Expr::one());
        out
    }

    /// `Σ a_k du_k`.
    pub fn one_form(coeffs: Vec<Expr>) -> KForm {
        let mut out = KForm::zero(coeffs.len(), 1);
        for (k, c) in coeffs.into_iter().enumerate() {
            out.set(&[k], c);
        }
        out
    }

    pub fn parse_one_form(texts: &[&str], chart: &Chart) -> Result<KForm> {
        if texts.len() != chart.dim() {
            return Err(Error::Dimension("one-form component count".into()));
        }
        let coeffs = texts
            .iter()
            .map(|t| crate::symexpr::parse(t, chart))
            .collect::<Result<_>>()?;
        Ok(KForm::one_form(coeffs))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Stored components, increasing indices only.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Expr)> {
        self.comps.iter()
    }

    /// Component at any index order (antisymmetric).
    pub fn component(&self, idx: &[usize]) -> Expr {
        match sort_sign(idx) {
            None => Expr::zero(),
            Some((sorted, sign)) => match self.comps.get(&sorted) {
                Some(e) if sign < 0 => (-e).simplify(),
                Some(e) => e.clone(),
                None => Expr::zero(),
            },
        }
    }

    /// Sets the component at `idx` (any order), adjusting the sign.
    pub fn set(&mut self, idx: &[usize], value: Expr) {
        assert_eq!(idx.len(), self.degree, "multi-index length");
        let Some((sorted, sign)) = sort_sign(idx) else {
            return;
        };
        let value = if sign < 0 { -value } else { value }.simplify();
        if value.is_const_zero() {
            self.comps.remove(&sorted);
        } else {
            self.comps.insert(sorted, value);
        }
    }

    fn accumulate(&mut self, sorted: Vec<usize>, value: Expr) {
        let next = match self.comps.get(&sorted) {
            Some(old) => old + &value,
            None => value,
        };
        let next = next.simplify();
        if next.is_const_zero() {
            self.comps.remove(&sorted);
        } else {
            self.comps.insert(sorted, next);
        }
    }

    pub fn add(&self, other: &KForm) -> KForm {
        let mut out = self.clone();
        for (k, v) in &other.comps {
            out.accumulate(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.scale(&Expr::int(-1)))
    }

    pub fn scale(&self, f: &Expr) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree);
        for (k, v) in &self.comps {
            out.accumulate(k.clone(), f * v);
        }
        out
    }

    /// `(dω)_{i0…ik} = Σ_j (−1)^j ∂_{i_j} ω_{i0…î_j…ik}`.
    pub fn exterior_derivative(&self) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree + 1);
        for (idx, f) in &self.comps {
            for a in 0..self.dim {
                if idx.contains(&a) {
                    continue;
                }
                let d = f.diff(a);
                if d.is_const_zero() {
                    continue;
                }
                let pos = idx.iter().filter(|&&i| i < a).count();
                let mut full = idx.clone();
                full.insert(pos, a);
                let term = if pos % 2 == 0 { d } else { -d };
                out.accumulate(full, term);
            }
        }
        out
    }

    /// Graded-commutative exterior product.
    pub fn wedge(&self, other: &KForm) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree + other.degree);
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                let joined: Vec<usize> = i.iter().chain(j).copied().collect();
                if let Some((sorted, sign)) = sort_sign(&joined) {
                    let term = a * b;
                    out.accumulate(sorted, if sign < 0 { -term } else { term });
                }
            }
        }
        out
    }

    /// `ω(V_1, …, V_k)`.
    pub fn evaluate(&self, fields: &[VectorField], ctx: &Context) -> Result<Expr> {
        if fields.len() != self.degree {
            return Err(Error::Dimension(format!(
                "{}-form evaluated on {} fields",
                self.degree,
                fields.len()
            )));
        }
        if self.degree == 0 {
            return Ok(self.component(&[]));
        }
        let mut terms = Vec::with_capacity(self.comps.len());
        for (idx, f) in &self.comps {
            let minor: Matrix = idx
                .iter()
                .map(|&row| fields.iter().map(|v| v.coeff(row).clone()).collect())
                .collect();
            let d = if self.degree <= 2 {
                expand_small_det(&minor)
            } else {
                linalg::det(&minor, ctx)?
            };
            terms.push(f * &d);
        }
        Ok(Expr::add(terms).simplify())
    }

    /// Substitutes a point map into every coefficient (no Jacobian).
    pub fn substitute(&self, values: &[Expr]) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree);
        for (k, v) in &self.comps {
            out.accumulate(k.clone(), v.substitute(values));
        }
        out
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Components of a 1-form as a dense list.
    pub fn dense_one_form(&self) -> Vec<Expr> {
        assert_eq!(self.degree, 1);
        (0..self.dim).map(|k| self.component(&[k])).collect()
    }
}

fn expand_small_det(m: &Matrix) -> Expr {
    match m.len() {
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => unreachable!(),
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
    fn heisenberg_alpha_derivative() {
        let c = ctx();
        let alpha = KForm::parse_one_form(&["y/2", "-x/2", "1"], c.chart()).unwrap();
        let d = alpha.exterior_derivative();
        let mut expected = KForm::zero(3, 2);
        expected.set(&[0, 1], Expr::int(-1));
        assert_eq!(d, expected);
        let xdy = KForm::parse_one_form(&["0", "x", "0"], c.chart()).unwrap();
        assert_eq!(xdy.exterior_derivative().component(&[0, 1]), Expr::one());
    }

    #[test]
    fn wedge_signs_and_evaluation() {
        let c = ctx();
        let (dx, dy, dz) = (
            KForm::coordinate(3, 0),
            KForm::coordinate(3, 1),
            KForm::coordinate(3, 2),
        );
        assert_eq!(dx.wedge(&dy), dy.wedge(&dx).scale(&Expr::int(-1)));
        assert!(dx.wedge(&dx).is_structurally_zero());
        let vol = dx.wedge(&dy.wedge(&dz));
        let basis: Vec<_> = (0..3).map(|k| VectorField::coordinate(3, k)).collect();
        assert_eq!(vol.evaluate(&basis, &c).unwrap(), Expr::one());
        let x1 = VectorField::parse(&["1", "0", "-y/2"], c.chart()).unwrap();
        let x2 = VectorField::parse(&["0", "1", "x/2"], c.chart()).unwrap();
        assert_eq!(
            dx.wedge(&dy).evaluate(&[x1.clone(), x2], &c).unwrap(),
            Expr::one()
        );
        assert_eq!(
            dx.wedge(&dz).evaluate(&[x1.clone(), x1], &c).unwrap(),
            Expr::zero()
        );
        assert_eq!(
            dz.evaluate(&[VectorField::coordinate(3, 2)], &c).unwrap(),
            Expr::one()
        );
    }
}
