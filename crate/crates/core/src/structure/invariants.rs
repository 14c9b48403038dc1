use serde::Serialize;

use crate::calculus::{expand_in_frame, form::subsets, linalg, Matrix};
use crate::error::{Error, Result};
use crate::symexpr::Expr;

use super::SubPRStructure;

/// The invariant `h = ½ L_{X_0} g` on the distribution, with `h♯ = g⁻¹ h`.
#[derive(Debug, Clone, Serialize)]
pub struct HData {
    #[serde(skip)]
    pub h: Matrix,
    #[serde(skip)]
    pub h_sharp: Matrix,
    #[serde(skip)]
    pub det_h_sharp: Expr,
}

/// Metric induced on `Λ^k` of the distribution frame: the increasing
/// multi-indices (1-based) and the diagonal Gram matrix `Π_{i∈I} s_i`.
pub fn exterior_power_metric(signature: &[i32], k: usize) -> (Vec<Vec<usize>>, Matrix) {
    let idx: Vec<Vec<usize>> = subsets(signature.len(), k)
        .into_iter()
        .map(|v| v.into_iter().map(|i| i + 1).collect())
        .collect();
    let m = idx.len();
    let mut g = linalg::zeros(m, m);
    for (a, multi) in idx.iter().enumerate() {
        let p: i64 = multi.iter().map(|&i| signature[i - 1] as i64).product();
        g[a][a] = Expr::int(p);
    }
    (idx, g)
}

impl SubPRStructure {
    /// `h(X_i,X_j) = −½ (c_0i^j s_j + c_0j^i s_i)`.
    pub fn h_frame_formula(&self) -> Matrix {
        let n2 = self.signature.len();
        (1..=n2)
            .map(|i| {
                (1..=n2)
                    .map(|j| {
                        let t = &(self.c(0, i, j) * &Expr::int(self.s(j) as i64))
                            + &(self.c(0, j, i) * &Expr::int(self.s(i) as i64));
                        (&Expr::rational(-1, 2) * &t).simplify()
                    })
                    .collect()
            })
            .collect()
    }

    /// `½ (L_{X_0} g)(X_i,X_j) = −½ (g([X_0,X_i],X_j) + g(X_i,[X_0,X_j]))`,
    /// with brackets recomputed and expanded by elimination.
    pub fn h_lie_derivative(&self) -> Result<Matrix> {
        let n2 = self.signature.len();
        let fields = self.frame.fields();
        let mut comps = Vec::with_capacity(n2);
        for i in 1..=n2 {
            let br = fields[0].lie_bracket(&fields[i]);
            comps.push(expand_in_frame(&br, fields, &self.ctx)?);
        }
        let g_of = |v: &[Expr], j: usize| &v[j] * &Expr::int(self.s(j) as i64);
        Ok((1..=n2)
            .map(|i| {
                (1..=n2)
                    .map(|j| {
                        let t = &g_of(&comps[i - 1], j) + &g_of(&comps[j - 1], i);
                        (&Expr::rational(-1, 2) * &t).simplify()
                    })
                    .collect()
            })
            .collect())
    }

    /// `h`, `h♯`, `det h♯`, cross-checking the two constructions of `h`.
    pub fn h_invariant(&self) -> Result<HData> {
        let h = self.h_frame_formula();
        let lie = self.h_lie_derivative()?;
        for (i, (a, b)) in h.iter().zip(&lie).enumerate() {
            for (j, (x, y)) in a.iter().zip(b).enumerate() {
                if !self.ctx.equal(x, y)?.is_zero() {
                    return Err(Error::EngineDefect(format!(
                        "h({},{}) differs between frame formula and Lie derivative",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let h_sharp: Matrix = h
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|e| (e * &Expr::int(self.signature[i] as i64)).simplify())
                    .collect()
            })
            .collect();
        let det_h_sharp = linalg::det(&h_sharp, &self.ctx)?;
        Ok(HData {
            h,
            h_sharp,
            det_h_sharp,
        })
    }

    /// The invariant `κ` of a three-dimensional structure.  Lorentzian
    /// signature must list the time-like field first.
    pub fn kappa_dim3(&self) -> Result<Expr> {
        if self.dim() != 3 {
            return Err(Error::Dimension(
                "kappa_dim3 needs a three-dimensional structure".into(),
            ));
        }
        let c = |i, j, k| self.c(i, j, k).clone();
        let half = Expr::rational(1, 2);
        let e = match self.signature.as_slice() {
            [1, 1] => Expr::add([
                self.apply(1, &c(1, 2, 2)),
                -self.apply(2, &c(1, 2, 1)),
                -Expr::pow(&c(1, 2, 1), 2),
                -Expr::pow(&c(1, 2, 2), 2),
                &half * &(&c(0, 1, 2) - &c(0, 2, 1)),
            ]),
            [-1, 1] => Expr::add([
                self.apply(1, &c(1, 2, 2)),
                self.apply(2, &c(1, 2, 1)),
                Expr::pow(&c(1, 2, 1), 2),
                -Expr::pow(&c(1, 2, 2), 2),
                &half * &(&c(0, 1, 2) + &c(0, 2, 1)),
            ]),
            _ => {
                return Err(Error::Precondition(
                    "three-dimensional κ needs signature (1,1) or time-like-first (-1,1)".into(),
                ))
            }
        };
        Ok(e.simplify())
    }

    /// `κ_D(X_i, X_j)` from structural functions, frame indices `1..=2n`.
    pub fn kappa_general(&self, i: usize, j: usize) -> Result<Expr> {
        let n2 = self.signature.len();
        if i == j || i == 0 || j == 0 || i > n2 || j > n2 {
            return Err(Error::Index(format!("κ_D pair ({i},{j})")));
        }
        let s = |k: usize| Expr::int(self.s(k) as i64);
        let c = |a, b, k| self.c(a, b, k).clone();
        let mut terms = vec![
            &self.apply(i, &c(i, j, j)) * &s(j),
            -(&self.apply(j, &c(i, j, i)) * &s(i)),
        ];
        for k in 1..=n2 {
            terms.push(-(&Expr::pow(&c(i, j, k), 2) * &s(k)));
            let inner = Expr::add([
                &c(i, j, k) * &s(k),
                &c(j, k, i) * &s(i),
                -(&c(i, k, j) * &s(j)),
            ]);
            terms.push(&Expr::pow(&inner, 2) * &Expr::rational(self.s(k) as i64, 4));
        }
        let tail = &(&c(0, i, j) * &s(j)) - &(&c(0, j, i) * &s(i));
        terms.push(Expr::mul([Expr::rational(1, 2), c(i, j, 0), tail]));
        Ok(Expr::add(terms).simplify())
    }

    /// `g(X_i ∧ X_j, h♯X_i ∧ h♯X_j)` via the induced metric on `Λ²`.
    pub fn h_wedge_term(&self, hd: &HData, i: usize, j: usize) -> Expr {
        let (idx, g2) = exterior_power_metric(&self.signature, 2);
        let hs = &hd.h_sharp;
        // column i of h♯ is h♯X_i
        let comp = |a: usize, b: usize| -> Expr {
            &(&hs[a - 1][i - 1] * &hs[b - 1][j - 1]) - &(&hs[b - 1][i - 1] * &hs[a - 1][j - 1])
        };
        let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let mut terms = Vec::new();
        for (a, multi) in idx.iter().enumerate() {
            if multi[0] == lo && multi[1] == hi {
                terms.push(Expr::mul([
                    Expr::int(sign),
                    g2[a][a].clone(),
                    comp(multi[0], multi[1]),
                ]));
            }
        }
        Expr::add(terms).simplify()
    }

    /// `X_0(ω_ij) − ω([X_0,X_i],X_j) − ω(X_i,[X_0,X_j])` on the distribution.
    pub fn lie_reeb_omega(&self) -> Matrix {
        let n2 = self.signature.len();
        (1..=n2)
            .map(|i| {
                (1..=n2)
                    .map(|j| {
                        let mut terms = vec![self.apply(0, self.omega_ij(i, j))];
                        for k in 1..=n2 {
                            terms.push(-(self.c(0, i, k) * self.omega_ij(k, j)));
                            terms.push(-(self.c(0, j, k) * self.omega_ij(i, k)));
                        }
                        Expr::add(terms).simplify()
                    })
                    .collect()
            })
            .collect()
    }
}
