use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::coexist_oracle;
use crate::error::{Error, Result};
use crate::geometry::polytope::dot;
use crate::geometry::{intersect_halfplanes, ConvexPolygon2D, HalfPlane2D, Vec2, PREDICATE_TOL};
use crate::theory::{Effect, Theory};

/// Smallest sample count accepted by [`coexistence_volume_fraction`].
pub const MIN_SAMPLES: usize = 1000;

/// Corners `(o, e, ē, u)` of the parallelogram `{g1 + g3 : g1 ∈ [o, e],
/// g3 ∈ [o, ē]}` of effects coexistent with a nontrivial extremal `e`.
pub fn extremal_coexistence_set(t: &Theory, e: &Effect) -> Result<[Effect; 4]> {
    if t.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: t.dim(),
        });
    }
    if t.reflecting_hyperplane().is_none() {
        return Err(Error::NoReflectingHyperplane(t.name().to_string()));
    }
    if !t
        .nontrivial_extremal_effects()
        .any(|x| x.approx_eq(e, PREDICATE_TOL))
    {
        return Err(Error::NotNontrivialExtremal);
    }
    Ok([
        t.zero().clone(),
        e.clone(),
        t.complement(e)?,
        t.unit().clone(),
    ])
}

/// Least-squares `(s, t)` with `f ≈ s·a + t·b`, and the largest coordinate
/// residual of that fit.
pub fn parallelogram_coordinates(a: &Effect, b: &Effect, f: &Effect) -> (f64, f64, f64) {
    let (a, b, f) = (a.coords(), b.coords(), f.coords());
    let (aa, ab, bb) = (dot(a, a), dot(a, b), dot(b, b));
    let (af, bf) = (dot(a, f), dot(b, f));
    let det = aa * bb - ab * ab;
    let s = (af * bb - bf * ab) / det;
    let t = (aa * bf - ab * af) / det;
    let residual = a
        .iter()
        .zip(b)
        .zip(f)
        .map(|((ai, bi), fi)| (s * ai + t * bi - fi).abs())
        .fold(0.0, f64::max);
    (s, t, residual)
}

/// Whether `f` lies in [`extremal_coexistence_set`] of `e`.
pub fn in_extremal_coexistence_set(t: &Theory, e: &Effect, f: &Effect) -> Result<bool> {
    let [_, e, ebar, _] = extremal_coexistence_set(t, e)?;
    let (s, r, residual) = parallelogram_coordinates(&e, &ebar, f);
    let unit = -PREDICATE_TOL..=1.0 + PREDICATE_TOL;
    Ok(residual <= PREDICATE_TOL && unit.contains(&s) && unit.contains(&r))
}

/// A uniform point of the effect polytope, drawn by rejection from its
/// bounding box using ChaCha8 stream `index` under `seed`.
pub fn sample_effect(t: &Theory, seed: u64, index: u64) -> Result<Effect> {
    let (lo, hi) = t.effect_bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let c: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| a + (b - a) * rng.random::<f64>())
            .collect();
        let f = Effect::new(c)?;
        if t.is_effect(&f, 0.0) {
            return Ok(f);
        }
    }
}

/// Fraction of effects `f`, drawn uniformly from the effect polytope, that
/// coexist with `e` according to [`coexist_oracle`].
///
/// Sample `i` comes from [`sample_effect`] with stream `i`, so the result
/// does not depend on how the work is scheduled.
pub fn coexistence_volume_fraction(
    t: &Theory,
    e: &Effect,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let hits = (0..samples)
        .into_par_iter()
        .map(|i| Ok(coexist_oracle(t, e, &sample_effect(t, seed, i as u64)?)?.coexistent))
        .collect::<Result<Vec<bool>>>()?;
    Ok(hits.iter().filter(|&&h| h).count() as f64 / samples as f64)
}

/// The slice `z = l` of the lower set `{g : g and e - g are effects}`, as
/// planar `(x, y)` points.
pub fn lower_set_slice(t: &Theory, e: &Effect, l: f64) -> Result<ConvexPolygon2D> {
    if t.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: t.dim(),
        });
    }
    if !t.has_states() {
        return Err(Error::StatesUnavailable(t.name().to_string()));
    }
    if !(0.0..=0.5).contains(&l) {
        return Err(Error::InvalidParameter(format!(
            "slice height must lie in [0, 1/2], got {l}"
        )));
    }
    if !t.is_effect(e, PREDICATE_TOL) {
        return Err(Error::NotAnEffect(t.name().to_string()));
    }
    let bound = ConvexPolygon2D::new(vec![
        Vec2::new(-4.0, -4.0),
        Vec2::new(4.0, -4.0),
        Vec2::new(4.0, 4.0),
        Vec2::new(-4.0, 4.0),
    ])?;
    let mut hps = Vec::new();
    for w in t.states() {
        let c = w.coords();
        let s = Vec2::new(c[0], c[1]);
        let ew = dot(e.coords(), c);
        // 0 <= ⟨g, ω⟩ <= 1 and 0 <= ⟨e - g, ω⟩ <= 1 with g = (v, l).
        for (normal, offset) in [
            (s, 1.0 - l * c[2]),
            (-s, l * c[2]),
            (-s, 1.0 - ew + l * c[2]),
            (s, ew - l * c[2]),
        ] {
            if normal.norm() < 1e-12 {
                if offset < -PREDICATE_TOL {
                    return Ok(ConvexPolygon2D::empty());
                }
                continue;
            }
            hps.push(HalfPlane2D::new(normal, offset)?);
        }
    }
    Ok(intersect_halfplanes(&hps, &bound))
}
