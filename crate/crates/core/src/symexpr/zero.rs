use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::chart::Chart;
use super::expr::Expr;
use crate::error::{Error, Result};

/// Sample count, tolerance and seed for numeric zero testing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingPlan {
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            samples: 20,
            tolerance: 1e-9,
            seed: 0x5EED_2024,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    SymbolicZero,
    NumericZero,
    Nonzero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroVerdict {
    pub kind: ZeroKind,
    pub max_abs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub samples_used: usize,
}

impl ZeroVerdict {
    pub fn symbolic() -> ZeroVerdict {
        ZeroVerdict {
            kind: ZeroKind::SymbolicZero,
            max_abs: 0.0,
            witness: None,
            samples_used: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind != ZeroKind::Nonzero
    }

    pub fn is_symbolic(&self) -> bool {
        self.kind == ZeroKind::SymbolicZero
    }

    /// Worst of several verdicts; nonzero dominates, then numeric.
    pub fn combine<'a>(verdicts: impl IntoIterator<Item = &'a ZeroVerdict>) -> ZeroVerdict {
        let mut out = ZeroVerdict::symbolic();
        for v in verdicts {
            let rank = |k: ZeroKind| match k {
                ZeroKind::SymbolicZero => 0,
                ZeroKind::NumericZero => 1,
                ZeroKind::Nonzero => 2,
            };
            let worse = rank(v.kind) > rank(out.kind)
                || (rank(v.kind) == rank(out.kind) && v.max_abs > out.max_abs);
            if worse {
                out = v.clone();
            }
        }
        out
    }
}

/// A chart together with a sampling plan; the unit every check runs under.
#[derive(Debug, Clone)]
pub struct Context {
    chart: Arc<Chart>,
    plan: SamplingPlan,
    pool: Arc<OnceLock<Vec<Vec<f64>>>>,
}

/// Candidate points kept per requested sample, so that expression-specific
/// evaluation failures can be skipped without running dry.
const POOL_FACTOR: usize = 4;
const MAX_DRAWS_FACTOR: usize = 200;

impl Context {
    pub fn new(chart: Chart, plan: SamplingPlan) -> Context {
        Context::shared(Arc::new(chart), plan)
    }

    pub fn shared(chart: Arc<Chart>, plan: SamplingPlan) -> Context {
        Context {
            chart,
            plan,
            pool: Arc::new(OnceLock::new()),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn chart_arc(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn plan(&self) -> SamplingPlan {
        self.plan
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Same plan on another chart.
    pub fn with_chart(&self, chart: Chart) -> Context {
        Context::new(chart, self.plan)
    }

    /// Deterministic admissible sample points (possibly fewer than requested
    /// if the excluded loci swallow most of the domain).
    pub fn points(&self) -> &[Vec<f64>] {
        self.pool.get_or_init(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(self.plan.seed);
            let want = self.plan.samples.max(1) * POOL_FACTOR;
            let mut out = Vec::with_capacity(want);
            for _ in 0..want * MAX_DRAWS_FACTOR {
                if out.len() == want {
                    break;
                }
                let p: Vec<f64> = self
                    .chart
                    .domain()
                    .iter()
                    .map(|&(lo, hi)| rng.gen_range(lo..=hi))
                    .collect();
                if self.chart.admissible(&p) {
                    out.push(p);
                }
            }
            out
        })
    }

    /// Values of `e` at up to `samples` admissible points where it evaluates.
    pub fn sample(&self, e: &Expr) -> Result<Vec<(Vec<f64>, f64)>> {
        let mut out = Vec::with_capacity(self.plan.samples);
        for p in self.points() {
            if out.len() == self.plan.samples {
                break;
            }
            if let Ok(v) = e.eval(p) {
                out.push((p.clone(), v));
            }
        }
        if out.is_empty() {
            return Err(Error::NoAdmissibleSample {
                attempts: self.points().len().max(1),
            });
        }
        Ok(out)
    }

    /// Symbolic check first, then seeded sampling with the plan's tolerance.
    pub fn is_zero(&self, e: &Expr) -> Result<ZeroVerdict> {
        if e.is_const_zero() || e.is_symbolic_zero() {
            return Ok(ZeroVerdict::symbolic());
        }
        self.numeric_verdict(e)
    }

    /// Sampling only; for expressions known to be too large to canonicalize.
    pub fn numeric_verdict(&self, e: &Expr) -> Result<ZeroVerdict> {
        let values = self.sample(e)?;
        let n = values.len();
        let (worst_p, worst_v) = values
            .into_iter()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("nonempty");
        let max_abs = worst_v.abs();
        Ok(if max_abs <= self.plan.tolerance {
            ZeroVerdict {
                kind: ZeroKind::NumericZero,
                max_abs,
                witness: None,
                samples_used: n,
            }
        } else {
            ZeroVerdict {
                kind: ZeroKind::Nonzero,
                max_abs,
                witness: Some(Witness {
                    point: worst_p,
                    value: worst_v,
                }),
                samples_used: n,
            }
        })
    }

    /// `is_zero(a - b)`.
    pub fn equal(&self, a: &Expr, b: &Expr) -> Result<ZeroVerdict> {
        self.is_zero(&(a - b))
    }

    /// True when `e` is nonzero at some sample point.
    pub fn is_nonzero(&self, e: &Expr) -> Result<bool> {
        Ok(!self.is_zero(e)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn ctx() -> Context {
        Context::new(
            Chart::uniform(vec!["x", "y", "z"], -2.0, 2.0).unwrap(),
            SamplingPlan::default(),
        )
    }

    #[test]
    fn verdict_kinds() {
        let c = ctx();
        let v = c
            .is_zero(&parse("(x+y)^2 - x^2 - 2*x*y - y^2", c.chart()).unwrap())
            .unwrap();
        assert_eq!(v.kind, ZeroKind::SymbolicZero);
        let v = c
            .is_zero(&parse("sin(z)^2 + cos(z)^2 - 1", c.chart()).unwrap())
            .unwrap();
        assert!(v.is_zero());
        assert!(v.max_abs <= 1e-9);
        let v = c.is_zero(&parse("x - y", c.chart()).unwrap()).unwrap();
        assert_eq!(v.kind, ZeroKind::Nonzero);
        let w = v.witness.unwrap();
        assert!((w.point[0] - w.point[1] - w.value).abs() < 1e-12);
    }

    #[test]
    fn points_are_reproducible_and_avoid_loci() {
        let chart = Chart::uniform(vec!["x", "y", "z"], -1.0, 1.0)
            .unwrap()
            .with_excluded(vec![Expr::coord(1)])
            .unwrap();
        let a = Context::new(chart.clone(), SamplingPlan::default());
        let b = Context::new(chart, SamplingPlan::default());
        assert_eq!(a.points(), b.points());
        assert!(a.points().iter().all(|p| p[1].abs() > 1e-6));
    }

    #[test]
    fn empty_admissible_set_is_an_error() {
        // |x| ≤ 1e-7 everywhere, so x is always within the exclusion band
        let chart = Chart::new(
            vec!["x", "y", "z"],
            vec![(-1e-7, 1e-7), (0.0, 1.0), (0.0, 1.0)],
        )
        .unwrap()
        .with_excluded(vec![Expr::coord(0)])
        .unwrap();
        let c = Context::new(chart, SamplingPlan::default());
        assert!(matches!(
            c.is_zero(&Expr::coord(1)),
            Err(Error::NoAdmissibleSample { .. })
        ));
    }
}
