//! Half-space polytopes in low dimension: vertex enumeration by solving
//! every d-subset of constraints, and facet recovery from a point set.

use nalgebra::{DMatrix, DVector};

use super::lp::{lp_feasible, FeasibilityProblem};
use super::{DEDUP_TOL, PREDICATE_TOL};
use crate::error::{Error, Result};

/// The closed half-space `{x : normal · x <= offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    normal: Vec<f64>,
    offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        if normal.is_empty() {
            return Err(Error::InvalidParameter("half-space needs d >= 1".into()));
        }
        if !offset.is_finite() || normal.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("HalfSpace"));
        }
        if normal.iter().all(|&c| c == 0.0) {
            return Err(Error::ZeroNormal);
        }
        Ok(HalfSpace { normal, offset })
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    /// `max(0, normal · x - offset)`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.value(x).max(0.0)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.value(x) <= tol * norm(&self.normal)
    }

    /// Same set with a unit-length normal.
    pub fn normalized(&self) -> HalfSpace {
        let s = norm(&self.normal);
        HalfSpace {
            normal: self.normal.iter().map(|c| c / s).collect(),
            offset: self.offset / s,
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Whether some nonzero direction `r` satisfies `normal · r <= 0` for every
/// half-space. Any such direction has a coordinate of magnitude >= 1 after
/// rescaling, so 2d feasibility problems settle the question exactly.
fn has_recession_direction(halfspaces: &[HalfSpace], d: usize) -> Result<bool> {
    for axis in 0..d {
        for sign in [1.0, -1.0] {
            let mut prob = FeasibilityProblem::new(d);
            for h in halfspaces {
                prob.add_le(h.normal.clone(), 0.0)?;
            }
            let mut a = vec![0.0; d];
            a[axis] = -sign;
            prob.add_le(a, -1.0)?;
            if lp_feasible(&prob)?.is_feasible() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// All vertices of the bounded polytope `{x : normal_i · x <= offset_i}`.
///
/// Every d-subset of constraints is solved as a linear system; solutions
/// that satisfy all constraints within tolerance are kept and merged when
/// closer than the deduplication tolerance. The output is sorted
/// lexicographically.
pub fn enumerate_polytope_vertices(halfspaces: &[HalfSpace], d: usize) -> Result<Vec<Vec<f64>>> {
    if !(2..=4).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    for h in halfspaces {
        if h.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: h.dim(),
            });
        }
    }
    if has_recession_direction(halfspaces, d)? {
        return Err(Error::Unbounded);
    }
    let hs: Vec<HalfSpace> = halfspaces.iter().map(HalfSpace::normalized).collect();

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    combinations(hs.len(), d, |subset| {
        let a = DMatrix::from_fn(d, d, |r, c| hs[subset[r]].normal[c]);
        let b = DVector::from_fn(d, |r, _| hs[subset[r]].offset);
        let lu = a.full_piv_lu();
        // Near-parallel constraint subsets give ill-conditioned systems.
        let pivots = lu.u().diagonal();
        let min_pivot = pivots.iter().map(|p| p.abs()).fold(f64::INFINITY, f64::min);
        if min_pivot < 1e-10 {
            return;
        }
        let Some(x) = lu.solve(&b) else { return };
        let x: Vec<f64> = x.iter().copied().collect();
        if hs.iter().all(|h| h.value(&x) <= PREDICATE_TOL)
            && !vertices.iter().any(|v| max_abs_diff(v, &x) <= DEDUP_TOL)
        {
            vertices.push(x);
        }
    });
    if vertices.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    vertices.sort_by(|a, b| lex_cmp(a, b));
    Ok(vertices)
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.total_cmp(y);
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Facet half-spaces (unit normals) of the convex hull of `points` in R^d.
///
/// Brute force over d-subsets: a hyperplane through affinely independent
/// points that leaves every point on one side supports a facet. Requires a
/// full-dimensional hull; lower-dimensional point sets yield an error.
pub fn hull_facets(points: &[Vec<f64>], d: usize) -> Result<Vec<HalfSpace>> {
    if !(2..=4).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.len(),
        });
    }
    let mut facets: Vec<HalfSpace> = Vec::new();
    combinations(points.len(), d, |subset| {
        let base = &points[subset[0]];
        // Normal = null vector of the (d-1) x d matrix of edge vectors.
        let m = DMatrix::from_fn(d, d, |r, c| {
            if r + 1 < d {
                points[subset[r + 1]][c] - base[c]
            } else {
                0.0
            }
        });
        let svd = m.svd(false, true);
        let Some(vt) = svd.v_t else { return };
        let sv = &svd.singular_values;
        let (imin, _) =
            sv.iter().enumerate().fold(
                (0, f64::INFINITY),
                |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc },
            );
        let rank = sv.iter().filter(|&&s| s > 1e-10).count();
        if rank < d - 1 {
            return;
        }
        let mut normal: Vec<f64> = vt.row(imin).iter().copied().collect();
        let nn = norm(&normal);
        normal.iter_mut().for_each(|c| *c /= nn);
        let offset = dot(&normal, base);
        let vals: Vec<f64> = points.iter().map(|p| dot(&normal, p) - offset).collect();
        let above = vals.iter().any(|&v| v > PREDICATE_TOL);
        let below = vals.iter().any(|&v| v < -PREDICATE_TOL);
        let h = match (above, below) {
            (false, true) => HalfSpace { normal, offset },
            (true, false) => HalfSpace {
                normal: normal.iter().map(|c| -c).collect(),
                offset: -offset,
            },
            _ => return,
        };
        let dup = facets.iter().any(|f| {
            max_abs_diff(&f.normal, &h.normal) <= DEDUP_TOL
                && (f.offset - h.offset).abs() <= DEDUP_TOL
        });
        if !dup {
            facets.push(h);
        }
    });
    if facets.len() < d + 1 {
        return Err(Error::InvalidParameter(
            "point set does not span a full-dimensional hull".into(),
        ));
    }
    Ok(facets)
}
