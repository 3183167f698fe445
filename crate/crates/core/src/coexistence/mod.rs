//! Coexistence of effect pairs.
//!
//! Effects `e` and `f` coexist when they are two marginals of one
//! four-outcome observable: there are effects `g1, g2, g3` with
//! `g1 + g2 = e`, `g1 + g3 = f` and `g4 = u - g1 - g2 - g3` also an effect.
//! [`coexist_oracle`] decides this directly as a feasibility problem for any
//! theory. For unbiased effects of an even polygon theory the closed form
//! in [`coexist_criterion_even_polygon`] gives the same answer; as n grows it
//! approaches the qubit criterion in [`busch_planar_region_membership`].

mod criterion;
mod volume;

use serde::Serialize;

pub use criterion::{
    busch_coexistent, busch_planar_region_membership, coexist_criterion_even_polygon,
    coexistence_region, criterion_slack, criterion_verdict, ellipse_area, quantum_limit_gap,
    qubit_effect_to_normal, unbiased_polygon, BuschEffectPair, CriterionSlack, RegionReport,
};
pub use volume::{
    coexistence_volume_fraction, extremal_coexistence_set, in_extremal_coexistence_set,
    lower_set_slice, parallelogram_coordinates, sample_effect, MIN_SAMPLES,
};

use crate::error::{Error, Result};
use crate::geometry::{lp_feasible, Feasibility, FeasibilityProblem, PREDICATE_TOL};
use crate::theory::{Effect, Theory};

/// Largest defect tolerated in a returned witness.
const WITNESS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoexistenceVerdict {
    pub coexistent: bool,
    /// `(g1, g2, g3)`; the fourth outcome is `u - g1 - g2 - g3`.
    pub witness: Option<[Effect; 3]>,
    /// Criterion constraints `(k1, k2)` that are violated, or active when
    /// the pair coexists.
    pub binding: Option<Vec<(usize, usize)>>,
    /// Criterion margin `1 - max LHS`; negative when violated.
    pub slack: Option<f64>,
}

impl CoexistenceVerdict {
    /// The fourth outcome `u - g1 - g2 - g3` of the witness.
    pub fn fourth_outcome(&self, t: &Theory) -> Option<Effect> {
        let [g1, g2, g3] = self.witness.as_ref()?;
        Some(&(&(t.unit() - g1) - g2) - g3)
    }

    /// Checks the witness: marginals reproduce `e` and `f`, and all four
    /// outcomes are effects of `t`.
    pub fn witness_is_valid(&self, t: &Theory, e: &Effect, f: &Effect, tol: f64) -> bool {
        let Some([g1, g2, g3]) = self.witness.as_ref() else {
            return false;
        };
        let g4 = self.fourth_outcome(t).expect("witness present");
        (g1 + g2).approx_eq(e, tol)
            && (g1 + g3).approx_eq(f, tol)
            && [g1, g2, g3, &g4].iter().all(|g| t.is_effect(g, tol))
    }
}

fn check_effect(t: &Theory, e: &Effect) -> Result<()> {
    if e.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: e.dim(),
        });
    }
    if !t.is_effect(e, PREDICATE_TOL) {
        return Err(Error::NotAnEffect(t.name().to_string()));
    }
    Ok(())
}

/// Decides coexistence of `e` and `f` in `t` by linear feasibility.
///
/// Unknowns are `(g1, g2, g3)`. With extremal states available the
/// constraints are `⟨g_i, ω⟩ >= 0` and `⟨g1 + g2 + g3, ω⟩ <= 1` for every
/// extremal state; for theories given by their effect space, each of
/// `g1, g2, g3, u - g1 - g2 - g3` is constrained to the effect polytope.
pub fn coexist_oracle(t: &Theory, e: &Effect, f: &Effect) -> Result<CoexistenceVerdict> {
    check_effect(t, e)?;
    check_effect(t, f)?;
    let d = t.dim();
    let mut prob = FeasibilityProblem::new(3 * d);
    let block = |coefs: [f64; 3], a: &[f64]| -> Vec<f64> {
        let mut row = vec![0.0; 3 * d];
        for (b, &c) in coefs.iter().enumerate() {
            for (j, &aj) in a.iter().enumerate() {
                row[b * d + j] = c * aj;
            }
        }
        row
    };
    for j in 0..d {
        let mut axis = vec![0.0; d];
        axis[j] = 1.0;
        prob.add_eq(block([1.0, 1.0, 0.0], &axis), e.coords()[j])?;
        prob.add_eq(block([1.0, 0.0, 1.0], &axis), f.coords()[j])?;
    }
    if t.has_states() {
        for w in t.states() {
            let neg: Vec<f64> = w.coords().iter().map(|c| -c).collect();
            for i in 0..3 {
                let mut coefs = [0.0; 3];
                coefs[i] = 1.0;
                prob.add_le(block(coefs, &neg), 0.0)?;
            }
            prob.add_le(block([1.0; 3], w.coords()), 1.0)?;
        }
    } else {
        for h in t.effect_halfspaces() {
            for i in 0..3 {
                let mut coefs = [0.0; 3];
                coefs[i] = 1.0;
                prob.add_le(block(coefs, h.normal()), h.offset())?;
            }
            let au: f64 = h
                .normal()
                .iter()
                .zip(t.unit().coords())
                .map(|(a, u)| a * u)
                .sum();
            prob.add_le(block([-1.0; 3], h.normal()), h.offset() - au)?;
        }
    }
    let verdict = match lp_feasible(&prob)? {
        Feasibility::Infeasible => CoexistenceVerdict {
            coexistent: false,
            witness: None,
            binding: None,
            slack: None,
        },
        Feasibility::Feasible(x) => {
            let g = |b: usize| Effect::new(x[b * d..(b + 1) * d].to_vec());
            CoexistenceVerdict {
                coexistent: true,
                witness: Some([g(0)?, g(1)?, g(2)?]),
                binding: None,
                slack: None,
            }
        }
    };
    if verdict.coexistent && !verdict.witness_is_valid(t, e, f, WITNESS_TOL) {
        return Err(Error::SolverDegenerate(
            "coexistence witness failed validation".into(),
        ));
    }
    Ok(verdict)
}
