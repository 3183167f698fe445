//! Dense phase-one simplex for small feasibility problems.
//!
//! Variables are free. Each is split as `x = p - q` with `p, q >= 0`, every
//! row `a · x <= b` gets a slack, and rows with negative right-hand side get
//! an artificial variable. Minimising the sum of artificials decides
//! feasibility. Pivoting follows Bland's smallest-index rule, so the method
//! cannot cycle on the heavily degenerate systems produced by equality pairs.

use super::HalfSpace;
use crate::error::{Error, Result};

/// Reduced costs above `-PIVOT_TOL` count as nonnegative, and column entries
/// at or below it are never pivoted on.
const PIVOT_TOL: f64 = 1e-11;
/// Largest phase-one optimum still read as feasible.
const FEASIBILITY_TOL: f64 = 1e-9;
/// Largest constraint violation accepted for a reported witness.
const WITNESS_TOL: f64 = 1e-7;

/// `{x in R^num_vars : a_i · x <= b_i for all i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityProblem {
    num_vars: usize,
    constraints: Vec<HalfSpace>,
}

impl FeasibilityProblem {
    pub fn new(num_vars: usize) -> Self {
        FeasibilityProblem {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[HalfSpace] {
        &self.constraints
    }

    pub fn push(&mut self, h: HalfSpace) -> Result<()> {
        if h.dim() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: h.dim(),
            });
        }
        self.constraints.push(h);
        Ok(())
    }

    /// Adds `a · x <= b`; rows with an all-zero `a` are checked immediately
    /// and recorded as a trivially true or trivially false constraint.
    pub fn add_le(&mut self, a: Vec<f64>, b: f64) -> Result<()> {
        if a.iter().all(|&c| c == 0.0) {
            if b >= 0.0 {
                return Ok(());
            }
            // 0 <= b < 0: keep an impossible row so the problem reports infeasible.
            let mut unit = vec![0.0; self.num_vars];
            if let Some(first) = unit.first_mut() {
                *first = 1.0;
            }
            self.push(HalfSpace::new(unit.clone(), b / 2.0)?)?;
            unit.iter_mut().for_each(|c| *c = -*c);
            return self.push(HalfSpace::new(unit, b / 2.0)?);
        }
        self.push(HalfSpace::new(a, b)?)
    }

    /// Adds `a · x = b` as the pair `a · x <= b`, `-a · x <= -b`.
    pub fn add_eq(&mut self, a: Vec<f64>, b: f64) -> Result<()> {
        let neg: Vec<f64> = a.iter().map(|c| -c).collect();
        self.add_le(a, b)?;
        self.add_le(neg, -b)
    }

    /// Largest violation `a · x - b` over all rows (0 when all hold).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|h| h.violation(x))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<f64>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[f64]> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible => None,
        }
    }
}

/// Decides whether `prob` has a solution and returns one if so.
///
/// `Err(SolverDegenerate)` means the pivoting budget ran out or the
/// extracted witness failed its own constraints; it is never a verdict.
pub fn lp_feasible(prob: &FeasibilityProblem) -> Result<Feasibility> {
    let n = prob.num_vars;
    let m = prob.constraints.len();
    if m == 0 {
        return Ok(Feasibility::Feasible(vec![0.0; n]));
    }

    let flipped: Vec<bool> = prob.constraints.iter().map(|h| h.offset() < 0.0).collect();
    let num_art = flipped.iter().filter(|&&f| f).count();
    // Columns: p (n) | q (n) | slack (m) | artificial (num_art) | rhs.
    let slack0 = 2 * n;
    let art0 = slack0 + m;
    let width = art0 + num_art + 1;
    let rhs = width - 1;

    let mut rows = vec![vec![0.0; width]; m];
    let mut basis = vec![0usize; m];
    let mut next_art = art0;
    for (i, h) in prob.constraints.iter().enumerate() {
        let sign = if flipped[i] { -1.0 } else { 1.0 };
        let row = &mut rows[i];
        for (j, &a) in h.normal().iter().enumerate() {
            row[j] = sign * a;
            row[n + j] = -sign * a;
        }
        row[slack0 + i] = sign;
        row[rhs] = sign * h.offset();
        if flipped[i] {
            row[next_art] = 1.0;
            basis[i] = next_art;
            next_art += 1;
        } else {
            basis[i] = slack0 + i;
        }
    }

    // Phase-one objective: minimise the sum of artificials. `cost` holds the
    // reduced costs and, in the rhs slot, minus the current objective value.
    let mut cost = vec![0.0; width];
    for c in cost.iter_mut().take(art0 + num_art).skip(art0) {
        *c = 1.0;
    }
    for (i, row) in rows.iter().enumerate() {
        if flipped[i] {
            for (c, r) in cost.iter_mut().zip(row) {
                *c -= r;
            }
        }
    }

    let max_iter = 50 * (m + width);
    let mut iter = 0;
    loop {
        let entering = (0..rhs).find(|&j| cost[j] < -PIVOT_TOL);
        let Some(col) = entering else { break };

        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in rows.iter().enumerate() {
            let a = row[col];
            if a > PIVOT_TOL {
                let ratio = row[rhs] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                        if ratio < lr && !tie || tie && basis[i] < basis[li] {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        // Phase one is bounded below by zero, so an entering column always
        // has a positive entry unless the tableau has lost precision.
        let Some((pr, _)) = leave else {
            return Err(Error::SolverDegenerate(
                "phase-one ratio test found no leaving row".into(),
            ));
        };
        pivot(&mut rows, &mut cost, pr, col);
        basis[pr] = col;

        iter += 1;
        if iter > max_iter {
            return Err(Error::SolverDegenerate(format!(
                "no convergence after {max_iter} pivots"
            )));
        }
    }

    let objective = -cost[rhs];
    if objective > FEASIBILITY_TOL {
        return Ok(Feasibility::Infeasible);
    }

    let mut x = vec![0.0; n];
    for (i, &b) in basis.iter().enumerate() {
        let v = rows[i][rhs];
        if b < n {
            x[b] += v;
        } else if b < 2 * n {
            x[b - n] -= v;
        }
    }
    let violation = prob.max_violation(&x);
    if violation > WITNESS_TOL {
        return Err(Error::SolverDegenerate(format!(
            "witness violates a constraint by {violation:e}"
        )));
    }
    Ok(Feasibility::Feasible(x))
}

fn pivot(rows: &mut [Vec<f64>], cost: &mut [f64], pr: usize, col: usize) {
    let p = rows[pr][col];
    for v in rows[pr].iter_mut() {
        *v /= p;
    }
    let prow = rows[pr].clone();
    for (i, row) in rows.iter_mut().enumerate() {
        if i == pr {
            continue;
        }
        let f = row[col];
        if f != 0.0 {
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            row[col] = 0.0;
        }
    }
    let f = cost[col];
    if f != 0.0 {
        for (v, pv) in cost.iter_mut().zip(&prow) {
            *v -= f * pv;
        }
        cost[col] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_interval_is_feasible() {
        let mut p = FeasibilityProblem::new(1);
        p.add_le(vec![-1.0], 0.0).unwrap();
        p.add_le(vec![1.0], 1.0).unwrap();
        let x = lp_feasible(&p).unwrap();
        let w = x.witness().unwrap();
        assert!((0.0..=1.0).contains(&w[0]));
    }

    #[test]
    fn crossed_bounds_are_infeasible() {
        let mut p = FeasibilityProblem::new(1);
        p.add_le(vec![-1.0], -1.0).unwrap();
        p.add_le(vec![1.0], 0.0).unwrap();
        assert_eq!(lp_feasible(&p).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn equalities_pin_the_witness() {
        let mut p = FeasibilityProblem::new(3);
        p.add_eq(vec![1.0, 1.0, 0.0], 1.5).unwrap();
        p.add_eq(vec![1.0, -1.0, 0.0], -0.5).unwrap();
        p.add_eq(vec![0.0, 0.0, 1.0], -2.0).unwrap();
        let x = lp_feasible(&p).unwrap();
        let w = x.witness().unwrap();
        assert!((w[0] - 0.5).abs() < 1e-12);
        assert!((w[1] - 1.0).abs() < 1e-12);
        assert!((w[2] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_rows() {
        let mut p = FeasibilityProblem::new(2);
        p.add_le(vec![0.0, 0.0], 1.0).unwrap();
        assert!(lp_feasible(&p).unwrap().is_feasible());
        p.add_le(vec![0.0, 0.0], -1.0).unwrap();
        assert!(!lp_feasible(&p).unwrap().is_feasible());
    }

    #[test]
    fn dimension_checked() {
        let mut p = FeasibilityProblem::new(2);
        assert!(p.add_le(vec![1.0], 1.0).is_err());
    }

    #[test]
    fn empty_problem_is_feasible() {
        assert!(lp_feasible(&FeasibilityProblem::new(4))
            .unwrap()
            .is_feasible());
    }

    #[test]
    fn degenerate_vertex_does_not_cycle() {
        // Many redundant constraints through the same vertex (0, 0).
        let mut p = FeasibilityProblem::new(2);
        for k in 0..40 {
            let t = k as f64 * 0.05;
            p.add_le(vec![-(1.0 + t), -1.0], 0.0).unwrap();
            p.add_le(vec![-1.0, -(1.0 + t)], 0.0).unwrap();
        }
        p.add_le(vec![1.0, 1.0], 0.0).unwrap();
        p.add_le(vec![-1.0, 0.0], -0.0).unwrap();
        let w = lp_feasible(&p).unwrap();
        let x = w.witness().unwrap();
        assert!(x[0].abs() < 1e-9 && x[1].abs() < 1e-9);
    }
}
