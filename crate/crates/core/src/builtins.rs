//! Named example structures.

use crate::calculus::VectorField;
use crate::error::{Error, Result};
use crate::structure::SubPRStructure;
use crate::symexpr::{Chart, Context, SamplingPlan};

pub const NAMES: &[&str] = &[
    "heisenberg3-riem",
    "heisenberg3-lor",
    "heisenberg5-case1",
    "heisenberg5-case2",
    "heisenberg5-case3",
    "heisenberg5-scaled",
    "hyperbolic-lift",
    "hyperbolic-lift-lor",
    "sphere-lift",
    "twisted-heisenberg",
    "twisted-heisenberg-lor",
    "berger-lorentz",
];

/// Chart, frame texts and signature of a named example.
pub struct Definition {
    pub chart: Chart,
    pub frame: Vec<Vec<&'static str>>,
    pub signature: Vec<i32>,
}

const HEIS3: [[&str; 3]; 2] = [["1", "0", "-y/2"], ["0", "1", "x/2"]];
const HEIS5: [[&str; 5]; 4] = [
    ["1", "0", "0", "0", "-y1/2"],
    ["0", "1", "0", "0", "x1/2"],
    ["0", "0", "1", "0", "-y2/2"],
    ["0", "0", "0", "1", "x2/2"],
];

fn rows<const N: usize>(r: &[[&'static str; N]]) -> Vec<Vec<&'static str>> {
    r.iter().map(|x| x.to_vec()).collect()
}

fn cube3() -> Result<Chart> {
    Chart::uniform(vec!["x", "y", "z"], -1.0, 1.0)
}

fn cube5() -> Result<Chart> {
    Chart::uniform(vec!["x1", "y1", "x2", "y2", "z"], -1.0, 1.0)
}

fn upper_half() -> Result<Chart> {
    let c = Chart::new(
        vec!["x", "y", "z"],
        vec![(-1.0, 1.0), (0.5, 2.0), (-1.0, 1.0)],
    )?;
    let y = c.coord("y");
    c.with_excluded(vec![y])
}

pub fn definition(name: &str) -> Result<Definition> {
    let (chart, frame, signature) = match name {
        "heisenberg3-riem" => (cube3()?, rows(&HEIS3), vec![1, 1]),
        "heisenberg3-lor" => (cube3()?, rows(&HEIS3), vec![-1, 1]),
        "heisenberg5-case1" => (cube5()?, rows(&HEIS5), vec![1, 1, 1, 1]),
        "heisenberg5-case2" => (cube5()?, rows(&HEIS5), vec![-1, 1, 1, 1]),
        "heisenberg5-case3" => (cube5()?, rows(&HEIS5), vec![-1, 1, -1, 1]),
        "heisenberg5-scaled" => {
            let frame = rows(&[
                HEIS5[0],
                HEIS5[1],
                ["0", "0", "sqrt(2)", "0", "-sqrt(2)*y2/2"],
                ["0", "0", "0", "sqrt(2)", "sqrt(2)*x2/2"],
            ]);
            (cube5()?, frame, vec![1, 1, 1, 1])
        }
        "hyperbolic-lift" | "hyperbolic-lift-lor" => {
            let sig = if name.ends_with("lor") {
                vec![-1, 1]
            } else {
                vec![1, 1]
            };
            (
                upper_half()?,
                rows(&[["y", "0", "1"], ["0", "y", "0"]]),
                sig,
            )
        }
        "sphere-lift" => (
            cube3()?,
            rows(&[
                ["(1 + x^2 + y^2)/2", "0", "-y"],
                ["0", "(1 + x^2 + y^2)/2", "x"],
            ]),
            vec![1, 1],
        ),
        "twisted-heisenberg" | "twisted-heisenberg-lor" => {
            let sig = if name.ends_with("lor") {
                vec![-1, 1]
            } else {
                vec![1, 1]
            };
            (
                cube3()?,
                rows(&[["exp(z)", "0", "-exp(z)*y/2"], ["0", "1", "x/2"]]),
                sig,
            )
        }
        "berger-lorentz" => (
            cube3()?,
            rows(&[["1", "0", "0"], ["x", "1", "x"]]),
            vec![-1, 1],
        ),
        _ => {
            return Err(Error::Precondition(format!(
                "unknown builtin structure '{name}'"
            )))
        }
    };
    Ok(Definition {
        chart,
        frame,
        signature,
    })
}

/// Builds a named example with the given sampling plan.
pub fn builtin(name: &str, plan: SamplingPlan) -> Result<SubPRStructure> {
    let def = definition(name)?;
    let ctx = Context::new(def.chart, plan);
    let frame = def
        .frame
        .iter()
        .map(|f| VectorField::parse(f, ctx.chart()))
        .collect::<Result<Vec<_>>>()?;
    SubPRStructure::build(ctx, frame, def.signature)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_builds() {
        for name in NAMES {
            let s =
                builtin(name, SamplingPlan::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.dim() % 2, 1);
        }
        assert!(builtin("nope", SamplingPlan::default()).is_err());
    }
}
