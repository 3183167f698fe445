use std::f64::consts::PI;

use super::CoexistenceVerdict;
use crate::error::{Error, Result};
use crate::geometry::polygon::side_normal;
use crate::geometry::{
    intersect_halfplanes, regular_constraint_polygon, ConvexPolygon2D, HalfPlane2D, Vec2,
    PREDICATE_TOL,
};
use crate::theory::Effect;

/// Unbiased effects of the even n-gon theory, as planar points: the
/// polygon of apothem 1/2 with edge normals at angles `2kπ/n`.
pub fn unbiased_polygon(n: usize) -> Result<ConvexPolygon2D> {
    regular_constraint_polygon(n, 0.5, Vec2::ZERO)
}

fn check_even(n: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::OddPolygon(n));
    }
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "polygon criterion needs n >= 4, got {n}"
        )));
    }
    Ok(())
}

fn check_unbiased(n: usize, p: Vec2) -> Result<()> {
    let inside = (0..n).all(|k| side_normal(n, k).dot(p) <= 0.5 + PREDICATE_TOL);
    if inside {
        Ok(())
    } else {
        Err(Error::OutsideUnbiasedPolygon { x: p.x, y: p.y })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionSlack {
    /// `1 - max over (k1, k2) of the left-hand side`.
    pub slack: f64,
    /// Violated constraints when `slack < -1e-9`, otherwise those within
    /// `1e-9` of equality.
    pub binding: Vec<(usize, usize)>,
}

/// Evaluates all n² inequalities
/// `(f - e)·s_k1 + (f + e)·s_k2 <= 1`, with `s_k = (cos 2kπ/n, sin 2kπ/n)`.
pub fn criterion_slack(n: usize, e: Vec2, f: Vec2) -> Result<CriterionSlack> {
    check_even(n)?;
    check_unbiased(n, e)?;
    check_unbiased(n, f)?;
    let s: Vec<Vec2> = (0..n).map(|k| side_normal(n, k)).collect();
    let a: Vec<f64> = s.iter().map(|sk| (f - e).dot(*sk)).collect();
    let b: Vec<f64> = s.iter().map(|sk| (f + e).dot(*sk)).collect();
    let mut max = f64::NEG_INFINITY;
    for &ak in &a {
        for &bk in &b {
            max = max.max(ak + bk);
        }
    }
    let slack = 1.0 - max;
    let mut binding = Vec::new();
    for (k1, &ak) in a.iter().enumerate() {
        for (k2, &bk) in b.iter().enumerate() {
            let lhs = ak + bk;
            let hit = if slack < -PREDICATE_TOL {
                lhs > 1.0 + PREDICATE_TOL
            } else {
                (lhs - 1.0).abs() <= PREDICATE_TOL
            };
            if hit {
                binding.push((k1, k2));
            }
        }
    }
    Ok(CriterionSlack { slack, binding })
}

/// Closed-form coexistence test for unbiased effects of the even n-gon
/// theory. Boundary cases count as coexistent (slack `1e-9`).
pub fn coexist_criterion_even_polygon(n: usize, e: Vec2, f: Vec2) -> Result<bool> {
    Ok(criterion_slack(n, e, f)?.slack >= -PREDICATE_TOL)
}

/// [`coexist_criterion_even_polygon`] with slack and binding constraints.
pub fn criterion_verdict(n: usize, e: Vec2, f: Vec2) -> Result<CoexistenceVerdict> {
    let c = criterion_slack(n, e, f)?;
    Ok(CoexistenceVerdict {
        coexistent: c.slack >= -PREDICATE_TOL,
        witness: None,
        binding: Some(c.binding),
        slack: Some(c.slack),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport {
    pub n: usize,
    pub fixed_effect: Vec2,
    pub region: ConvexPolygon2D,
    pub area: f64,
    pub clipped_to: ConvexPolygon2D,
}

/// All unbiased `f` coexistent with the unbiased `e` in the even n-gon
/// theory: the unbiased polygon cut by the n² criterion half-planes
/// `f·(s_k1 + s_k2) <= 1 + e·s_k1 - e·s_k2`.
pub fn coexistence_region(n: usize, e: Vec2) -> Result<RegionReport> {
    check_even(n)?;
    check_unbiased(n, e)?;
    let clipped_to = unbiased_polygon(n)?;
    let s: Vec<Vec2> = (0..n).map(|k| side_normal(n, k)).collect();
    let mut hps = Vec::with_capacity(n * n);
    for &s1 in &s {
        for &s2 in &s {
            let normal = s1 + s2;
            let offset = 1.0 + e.dot(s1) - e.dot(s2);
            if normal.norm() < 1e-12 {
                // Antipodal pair: the constraint reduces to 0 <= offset.
                if offset < -PREDICATE_TOL {
                    return Ok(report(n, e, ConvexPolygon2D::empty(), clipped_to));
                }
                continue;
            }
            hps.push(HalfPlane2D::new(normal, offset)?);
        }
    }
    let region = intersect_halfplanes(&hps, &clipped_to);
    Ok(report(n, e, region, clipped_to))
}

fn report(n: usize, e: Vec2, region: ConvexPolygon2D, clipped_to: ConvexPolygon2D) -> RegionReport {
    RegionReport {
        n,
        fixed_effect: e,
        area: region.area(),
        region,
        clipped_to,
    }
}

/// Two qubit effects `(I + λ·σ)/2` given by their Bloch vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct BuschEffectPair {
    lambda1: Vec<f64>,
    lambda2: Vec<f64>,
}

impl BuschEffectPair {
    pub fn new(lambda1: Vec<f64>, lambda2: Vec<f64>) -> Result<Self> {
        if lambda1.len() != lambda2.len() || !(2..=3).contains(&lambda1.len()) {
            return Err(Error::InvalidParameter(
                "Bloch vectors must both have 2 or 3 components".into(),
            ));
        }
        for l in [&lambda1, &lambda2] {
            if l.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite("Bloch vector"));
            }
            if norm(l) > 1.0 + 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "Bloch vector norm {} exceeds 1",
                    norm(l)
                )));
            }
        }
        Ok(BuschEffectPair { lambda1, lambda2 })
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// `‖λ1 + λ2‖/2 + ‖λ1 - λ2‖/2 <= 1`.
pub fn busch_coexistent(p: &BuschEffectPair) -> bool {
    let sum: Vec<f64> = p
        .lambda1
        .iter()
        .zip(&p.lambda2)
        .map(|(a, b)| a + b)
        .collect();
    let diff: Vec<f64> = p
        .lambda1
        .iter()
        .zip(&p.lambda2)
        .map(|(a, b)| a - b)
        .collect();
    0.5 * norm(&sum) + 0.5 * norm(&diff) <= 1.0 + PREDICATE_TOL
}

/// The qubit effect `(α I + r·σ)/2` with `r` in the x-y plane, in the
/// coordinates of the polygon theories: `(r/2, α/2)`.
pub fn qubit_effect_to_normal(alpha: f64, r: Vec2) -> Result<Effect> {
    Effect::new(vec![r.x / 2.0, r.y / 2.0, alpha / 2.0])
}

/// Unbiased planar qubit criterion `‖e + f‖ + ‖e - f‖ <= 1`, for points of
/// the disk of radius 1/2. For fixed `e` the region is an ellipse with foci
/// `±e` and semi-major axis 1/2.
pub fn busch_planar_region_membership(e: Vec2, f: Vec2) -> Result<bool> {
    for p in [e, f] {
        if p.norm() > 0.5 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "({}, {}) lies outside the disk of radius 1/2",
                p.x, p.y
            )));
        }
    }
    Ok((e + f).norm() + (e - f).norm() <= 1.0 + PREDICATE_TOL)
}

/// Area of the qubit coexistence ellipse for `e`: `π/2 · sqrt(1/4 - ‖e‖²)`.
pub fn ellipse_area(e: Vec2) -> f64 {
    PI * 0.5 * (0.25 - e.dot(e)).max(0.0).sqrt()
}

/// Relative area gap between the n-gon coexistence region of `e` and the
/// qubit ellipse.
pub fn quantum_limit_gap(n: usize, e: Vec2) -> Result<f64> {
    if e.norm() >= 0.5 {
        return Err(Error::InvalidParameter(format!(
            "quantum limit needs |e| < 1/2, got {}",
            e.norm()
        )));
    }
    let area = coexistence_region(n, e)?.area;
    let ellipse = ellipse_area(e);
    Ok((area - ellipse).abs() / ellipse)
}
