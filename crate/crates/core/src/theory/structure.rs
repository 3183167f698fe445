use nalgebra::DMatrix;

use super::{Effect, Hyperplane, Theory};
use crate::error::{Error, Result};
use crate::geometry::polytope::{dot, norm};
use crate::geometry::{
    enumerate_polytope_vertices, intersect_halfplanes, lp_feasible, ConvexPolygon2D,
    FeasibilityProblem, HalfPlane2D, Vec2, DEDUP_TOL, PREDICATE_TOL,
};

/// Singular values below this count as zero in rank decisions.
const RANK_TOL: f64 = 1e-9;
/// Smallest total weight on other extremals that makes a segment a non-edge.
const EDGE_WEIGHT_TOL: f64 = 1e-6;

/// Vertices of `{e : 0 <= ⟨e, ω⟩ <= 1 for all extremal ω}`.
pub fn extremal_effects(t: &Theory) -> Result<Vec<Effect>> {
    if !t.has_states() {
        return Err(Error::StatesUnavailable(t.name().to_string()));
    }
    let vertices = enumerate_polytope_vertices(&t.effect_halfspaces(), t.dim())?;
    Ok(vertices
        .into_iter()
        .map(|v| {
            let e = Effect(v.into_iter().map(snap_zero).collect());
            if e.approx_eq(t.zero(), DEDUP_TOL) {
                t.zero().clone()
            } else if e.approx_eq(t.unit(), DEDUP_TOL) {
                t.unit().clone()
            } else {
                e
            }
        })
        .collect())
}

/// Rounding noise around zero (including `-0.0`) becomes `0.0`.
fn snap_zero(c: f64) -> f64 {
    if c.abs() < 1e-14 {
        0.0
    } else {
        c
    }
}

/// Singular values (ascending) and matching right singular vectors of the
/// rows, padded with zero rows so there are at least as many rows as columns.
fn right_singular(rows: &[Vec<f64>], d: usize) -> Vec<(f64, Vec<f64>)> {
    let m = rows.len().max(d);
    let a = DMatrix::from_fn(m, d, |r, c| rows.get(r).map_or(0.0, |row| row[c]));
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut pairs: Vec<(f64, Vec<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, vt.row(i).iter().copied().collect()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// The central hyperplane containing every nontrivial extremal effect, if
/// one exists.
///
/// Fits a hyperplane through `u/2` to the nontrivial extremals by least
/// squares and accepts it when the largest residual is below `1e-9`. Returns
/// `DegenerateHyperplane` when the extremals span too little for the answer
/// to be unique.
pub fn find_reflecting_hyperplane(t: &Theory) -> Result<Option<Hyperplane>> {
    let d = t.dim();
    let center = t.center();
    let rows: Vec<Vec<f64>> = t
        .nontrivial_extremal_effects()
        .map(|e| (e - &center).0)
        .collect();
    let pairs = right_singular(&rows, d);
    let rank = pairs.iter().filter(|(s, _)| *s > RANK_TOL).count();
    if rank < d - 1 {
        return Err(Error::DegenerateHyperplane {
            rank,
            needed: d - 1,
        });
    }
    let mut normal = pairs[0].1.clone();
    let residual = rows
        .iter()
        .map(|r| dot(r, &normal).abs())
        .fold(0.0, f64::max);
    if residual > PREDICATE_TOL {
        return Ok(None);
    }
    for c in normal.iter_mut() {
        if c.abs() < 1e-12 {
            *c = 0.0;
        }
    }
    let s = norm(&normal);
    let sign = if dot(&normal, t.unit().coords()) < 0.0 {
        -1.0
    } else {
        1.0
    };
    normal.iter_mut().for_each(|c| *c *= sign / s);
    let offset = dot(&normal, center.coords());
    Ok(Some(Hyperplane { normal, offset }))
}

/// Whether the state space is symmetric about the centroid of its extremal
/// states: `2c - ω` must lie in the state polytope for every extremal `ω`.
pub fn is_state_space_point_symmetric(t: &Theory, tol: f64) -> Result<bool> {
    if !t.has_states() {
        return Err(Error::StatesUnavailable(t.name().to_string()));
    }
    let states = t.states();
    let d = t.dim();
    let m = states.len();
    let mut c = vec![0.0; d];
    for w in states {
        for (ci, wi) in c.iter_mut().zip(w.coords()) {
            *ci += wi / m as f64;
        }
    }
    for w in states {
        let target: Vec<f64> = c
            .iter()
            .zip(w.coords())
            .map(|(ci, wi)| 2.0 * ci - wi)
            .collect();
        let mut prob = FeasibilityProblem::new(m);
        for i in 0..m {
            let mut a = vec![0.0; m];
            a[i] = -1.0;
            prob.add_le(a, 0.0)?;
        }
        prob.add_eq(vec![1.0; m], 1.0)?;
        for (j, &tj) in target.iter().enumerate() {
            let a: Vec<f64> = states.iter().map(|s| s.coords()[j]).collect();
            let neg: Vec<f64> = a.iter().map(|x| -x).collect();
            prob.add_le(a, tj + tol)?;
            prob.add_le(neg, -tj + tol)?;
        }
        if !lp_feasible(&prob)?.is_feasible() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `[e1, e2]` is an edge of the effect polytope: the midpoint admits
/// no convex decomposition that puts positive weight on any other extremal
/// effect.
pub fn is_edge(t: &Theory, e1: &Effect, e2: &Effect) -> Result<bool> {
    let ext = t.extremal_effects();
    let d = t.dim();
    let m = ext.len();
    let mid: Vec<f64> = e1
        .coords()
        .iter()
        .zip(e2.coords())
        .map(|(a, b)| (a + b) / 2.0)
        .collect();
    let mut prob = FeasibilityProblem::new(m);
    for i in 0..m {
        let mut a = vec![0.0; m];
        a[i] = -1.0;
        prob.add_le(a, 0.0)?;
    }
    prob.add_eq(vec![1.0; m], 1.0)?;
    for (j, &mj) in mid.iter().enumerate().take(d) {
        prob.add_eq(ext.iter().map(|e| e.coords()[j]).collect(), mj)?;
    }
    let others: Vec<f64> = ext
        .iter()
        .map(|e| {
            if e.approx_eq(e1, DEDUP_TOL) || e.approx_eq(e2, DEDUP_TOL) {
                0.0
            } else {
                -1.0
            }
        })
        .collect();
    if others.iter().all(|&c| c == 0.0) {
        return Ok(true);
    }
    prob.add_le(others, -EDGE_WEIGHT_TOL)?;
    Ok(!lp_feasible(&prob)?.is_feasible())
}

/// Affine coordinates on a hyperplane of a three-dimensional effect space:
/// origin `u/2` and an orthonormal basis obtained by projecting the first two
/// coordinate axes. On `z = 1/2` the coordinates are just `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneChart {
    origin: Vec<f64>,
    basis: [Vec<f64>; 2],
}

impl HyperplaneChart {
    pub fn new(t: &Theory) -> Result<Self> {
        if t.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: t.dim(),
            });
        }
        let h = t
            .reflecting_hyperplane()
            .ok_or_else(|| Error::NoReflectingHyperplane(t.name().to_string()))?;
        let n: Vec<f64> = h.normal.iter().map(|c| c / norm(&h.normal)).collect();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for axis in 0..3 {
            let mut v = vec![0.0; 3];
            v[axis] = 1.0;
            let p = dot(&v, &n);
            v.iter_mut().zip(&n).for_each(|(vi, ni)| *vi -= p * ni);
            for b in &basis {
                let p = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= p * bi);
            }
            let s = norm(&v);
            if s > 1e-6 {
                basis.push(v.iter().map(|c| c / s).collect());
            }
            if basis.len() == 2 {
                break;
            }
        }
        let [b1, b2]: [Vec<f64>; 2] = basis
            .try_into()
            .expect("a plane in R^3 has two basis vectors");
        Ok(HyperplaneChart {
            origin: t.center().0,
            basis: [b1, b2],
        })
    }

    pub fn to_plane(&self, e: &Effect) -> Vec2 {
        let r: Vec<f64> = e
            .coords()
            .iter()
            .zip(&self.origin)
            .map(|(a, b)| a - b)
            .collect();
        Vec2::new(dot(&r, &self.basis[0]), dot(&r, &self.basis[1]))
    }

    pub fn from_plane(&self, p: Vec2) -> Effect {
        Effect(
            (0..3)
                .map(|i| self.origin[i] + p.x * self.basis[0][i] + p.y * self.basis[1][i])
                .collect(),
        )
    }
}

/// The slice of the effect polytope by the reflecting hyperplane, in
/// [`HyperplaneChart`] coordinates.
pub fn unbiased_cross_section(t: &Theory) -> Result<ConvexPolygon2D> {
    let chart = HyperplaneChart::new(t)?;
    let (lo, hi) = t.effect_bounding_box();
    let r = lo.iter().chain(&hi).map(|c| c.abs()).fold(1.0, f64::max) * 4.0;
    let bound = ConvexPolygon2D::new(vec![
        Vec2::new(-r, -r),
        Vec2::new(r, -r),
        Vec2::new(r, r),
        Vec2::new(-r, r),
    ])?;
    let mut hps = Vec::new();
    for h in t.effect_halfspaces() {
        let a = h.normal();
        let nrm = Vec2::new(dot(a, &chart.basis[0]), dot(a, &chart.basis[1]));
        let off = h.offset() - dot(a, &chart.origin);
        if nrm.norm() <= 1e-12 {
            if off < -PREDICATE_TOL {
                return Ok(ConvexPolygon2D::empty());
            }
            continue;
        }
        hps.push(HalfPlane2D::new(nrm, off)?);
    }
    Ok(intersect_halfplanes(&hps, &bound))
}

/// Largest coordinate residual of the least-squares affine map sending each
/// `src[i]` to `dst[i]`, together with the rank of its linear part.
pub fn affine_fit_residual(src: &[Vec<f64>], dst: &[Vec<f64>]) -> Result<(f64, usize)> {
    if src.len() != dst.len() || src.is_empty() {
        return Err(Error::InvalidParameter(
            "affine fit needs two nonempty point lists of equal length".into(),
        ));
    }
    let k = src[0].len();
    let m = dst[0].len();
    if let Some(p) = src.iter().find(|p| p.len() != k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: p.len(),
        });
    }
    if let Some(p) = dst.iter().find(|p| p.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: p.len(),
        });
    }
    let x = DMatrix::from_fn(src.len(), k + 1, |r, c| if c < k { src[r][c] } else { 1.0 });
    let y = DMatrix::from_fn(dst.len(), m, |r, c| dst[r][c]);
    let svd = x.clone().svd(true, true);
    let w = svd
        .solve(&y, 1e-12)
        .map_err(|e| Error::SolverDegenerate(e.to_string()))?;
    let residual = (&x * &w - &y).abs().max();
    let linear = w.rows(0, k).into_owned();
    let rank = linear.svd(false, false).rank(RANK_TOL);
    Ok((residual, rank))
}
