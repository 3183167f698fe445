//! Finite-dimensional generalized probability theories.
//!
//! A [`Theory`] pairs a polytope of states with its effect space. States
//! are column vectors, effects are covectors, and the probability of effect
//! `e` in state `ω` is the plain dot product `⟨e, ω⟩`. For the polygon
//! theories the coordinates are the normal parametrization: pure states
//! `(cos θ_k, sin θ_k, 1)` at unit radius on `z = 1`, unit effect
//! `(0, 0, 1)`, and unbiased effects on the plane `z = 1/2`.
//!
//! Most theories are built from their extremal states and carry the
//! corresponding (maximal) effect space. The displaced hexagon is the
//! exception: it is specified by its extremal effects only.

mod builders;
mod io;
mod structure;

use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

pub use builders::{
    build_classical_theory, build_displaced_hexagon, build_regular_polygon_theory,
    build_square_bit, closed_form_extremals, displaced_hexagon_e0, probability_table,
    square_bit_labeled_effects, ExtremalRow, NativeChart, MAX_CLASSICAL_LEVELS, SQUARE_BIT_TABLE,
};
pub use io::{format_f64, from_json, to_json, to_json_string};
pub use structure::{
    affine_fit_residual, extremal_effects, find_reflecting_hyperplane, is_edge,
    is_state_space_point_symmetric, unbiased_cross_section, HyperplaneChart,
};

use crate::error::{Error, Result};
use crate::geometry::polytope::{dot, hull_facets, max_abs_diff};
use crate::geometry::{HalfSpace, Vec2, DEDUP_TOL, PREDICATE_TOL};

fn check_finite(v: &[f64], what: &'static str) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State(Vec<f64>);

impl State {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_finite(&coords, "state")?;
        Ok(State(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Effect(Vec<f64>);

impl Effect {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_finite(&coords, "effect")?;
        Ok(Effect(coords))
    }

    pub fn zeros(d: usize) -> Self {
        Effect(vec![0.0; d])
    }

    /// The unbiased effect `(v.x, v.y, 1/2)` of a three-dimensional theory.
    pub fn unbiased(v: Vec2) -> Self {
        Effect(vec![v.x, v.y, 0.5])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// First two coordinates; meaningful for three-dimensional theories.
    pub fn planar(&self) -> Vec2 {
        Vec2 {
            x: self.0[0],
            y: self.0[1],
        }
    }

    pub fn scale(&self, s: f64) -> Effect {
        Effect(self.0.iter().map(|c| c * s).collect())
    }

    pub fn approx_eq(&self, other: &Effect, tol: f64) -> bool {
        self.dim() == other.dim() && max_abs_diff(&self.0, &other.0) <= tol
    }
}

impl Add for &Effect {
    type Output = Effect;
    fn add(self, rhs: &Effect) -> Effect {
        Effect(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Effect {
    type Output = Effect;
    fn sub(self, rhs: &Effect) -> Effect {
        Effect(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// `⟨e, ω⟩`.
pub fn probability(e: &Effect, w: &State) -> Result<f64> {
    if e.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: e.dim(),
        });
    }
    Ok(dot(&e.0, &w.0))
}

/// The hyperplane `{e : normal · e = offset}` in effect coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    pub fn distance(&self, e: &Effect) -> f64 {
        (dot(&self.normal, e.coords()) - self.offset).abs() / dot(&self.normal, &self.normal).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theory {
    name: String,
    dim: usize,
    states: Vec<State>,
    unit: Effect,
    zero: Effect,
    extremal_effects: Vec<Effect>,
    reflecting_hyperplane: Option<Hyperplane>,
    /// Facets of the effect polytope, stored only for effect-space-first theories.
    effect_facets: Vec<HalfSpace>,
    chart: Option<NativeChart>,
}

impl Theory {
    /// A theory whose effect space is the one corresponding to `states`:
    /// all `e` with `0 <= ⟨e, ω⟩ <= 1`. Extremal effects are enumerated
    /// unless supplied (needed above four dimensions).
    pub fn from_states(
        name: impl Into<String>,
        states: Vec<State>,
        unit: Effect,
        effects: Option<Vec<Effect>>,
    ) -> Result<Self> {
        let name = name.into();
        let dim = unit.dim();
        if states.is_empty() {
            return Err(Error::InconsistentTheory("no extremal states".into()));
        }
        for w in &states {
            if w.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: w.dim(),
                });
            }
            let p = probability(&unit, w)?;
            if (p - 1.0).abs() > PREDICATE_TOL {
                return Err(Error::InconsistentTheory(format!(
                    "unit effect pairs to {p} with a state"
                )));
            }
        }
        let mut theory = Theory {
            name,
            dim,
            states,
            zero: Effect::zeros(dim),
            unit,
            extremal_effects: vec![],
            reflecting_hyperplane: None,
            effect_facets: vec![],
            chart: None,
        };
        let effects = match effects {
            Some(list) => {
                for e in &list {
                    if e.dim() != dim {
                        return Err(Error::DimensionMismatch {
                            expected: dim,
                            found: e.dim(),
                        });
                    }
                    if !theory.is_effect(e, PREDICATE_TOL) {
                        return Err(Error::NotAnEffect(theory.name.clone()));
                    }
                }
                list
            }
            None => extremal_effects(&theory)?,
        };
        theory.extremal_effects = canonical_order(effects, &theory.zero, &theory.unit);
        theory.reflecting_hyperplane = find_reflecting_hyperplane(&theory).ok().flatten();
        Ok(theory)
    }

    /// A theory given directly by the extremal points of its effect space.
    /// The effect polytope must be full-dimensional, contain zero and unit,
    /// and be closed under complement.
    pub fn from_effects(
        name: impl Into<String>,
        extremal_effects: Vec<Effect>,
        unit: Effect,
    ) -> Result<Self> {
        let name = name.into();
        let dim = unit.dim();
        let zero = Effect::zeros(dim);
        let points: Vec<Vec<f64>> = extremal_effects.iter().map(|e| e.0.clone()).collect();
        let effect_facets = hull_facets(&points, dim)?;
        let mut theory = Theory {
            name,
            dim,
            states: vec![],
            zero: zero.clone(),
            unit: unit.clone(),
            extremal_effects: vec![],
            reflecting_hyperplane: None,
            effect_facets,
            chart: None,
        };
        for e in [&zero, &unit] {
            if !extremal_effects.iter().any(|x| x.approx_eq(e, DEDUP_TOL)) {
                return Err(Error::InconsistentTheory(
                    "zero and unit must be extremal effects".into(),
                ));
            }
        }
        for e in &extremal_effects {
            let c = &unit - e;
            if !extremal_effects.iter().any(|x| x.approx_eq(&c, DEDUP_TOL)) {
                return Err(Error::InconsistentTheory(
                    "effect space is not closed under complement".into(),
                ));
            }
        }
        theory.extremal_effects = canonical_order(extremal_effects, &zero, &unit);
        theory.reflecting_hyperplane = find_reflecting_hyperplane(&theory).ok().flatten();
        Ok(theory)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    /// False for theories specified by their effect space only.
    pub fn has_states(&self) -> bool {
        !self.states.is_empty()
    }

    pub fn unit(&self) -> &Effect {
        &self.unit
    }

    pub fn zero(&self) -> &Effect {
        &self.zero
    }

    /// `u / 2`.
    pub fn center(&self) -> Effect {
        self.unit.scale(0.5)
    }

    /// Zero first, unit last, the rest in lexicographic order.
    pub fn extremal_effects(&self) -> &[Effect] {
        &self.extremal_effects
    }

    /// Extremal effects other than zero and unit.
    pub fn nontrivial_extremal_effects(&self) -> impl Iterator<Item = &Effect> {
        self.extremal_effects
            .iter()
            .filter(|e| !e.approx_eq(&self.zero, DEDUP_TOL) && !e.approx_eq(&self.unit, DEDUP_TOL))
    }

    pub fn reflecting_hyperplane(&self) -> Option<&Hyperplane> {
        self.reflecting_hyperplane.as_ref()
    }

    /// Native coordinates this theory was presented in, if different from
    /// the stored ones.
    pub fn chart(&self) -> Option<&NativeChart> {
        self.chart.as_ref()
    }

    pub(crate) fn set_chart(&mut self, chart: NativeChart) {
        self.chart = Some(chart);
    }

    fn check_dim(&self, e: &Effect) -> Result<()> {
        if e.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: e.dim(),
            });
        }
        Ok(())
    }

    /// `ē = u - e`.
    pub fn complement(&self, e: &Effect) -> Result<Effect> {
        self.check_dim(e)?;
        Ok(&self.unit - e)
    }

    /// Linear inequalities cutting out the effect space.
    ///
    /// For state-based theories these are `-⟨e, ω⟩ <= 0` and `⟨e, ω⟩ <= 1`
    /// per extremal state; otherwise the stored facets.
    pub fn effect_halfspaces(&self) -> Vec<HalfSpace> {
        if !self.has_states() {
            return self.effect_facets.clone();
        }
        let mut out = Vec::with_capacity(2 * self.states.len());
        for w in &self.states {
            let neg: Vec<f64> = w.0.iter().map(|c| -c).collect();
            // States are nonzero because ⟨u, ω⟩ = 1.
            out.push(HalfSpace::new(neg, 0.0).expect("nonzero state"));
            out.push(HalfSpace::new(w.0.clone(), 1.0).expect("nonzero state"));
        }
        out
    }

    /// Membership in the effect space with slack `tol`.
    pub fn is_effect(&self, e: &Effect, tol: f64) -> bool {
        if e.dim() != self.dim || e.0.iter().any(|c| !c.is_finite()) {
            return false;
        }
        if self.has_states() {
            self.states.iter().all(|w| {
                let p = dot(&e.0, &w.0);
                p >= -tol && p <= 1.0 + tol
            })
        } else {
            self.effect_facets.iter().all(|h| h.value(&e.0) <= tol)
        }
    }

    /// Whether `e` is one of the extremal effects.
    pub fn is_extremal(&self, e: &Effect) -> bool {
        self.extremal_effects
            .iter()
            .any(|x| x.approx_eq(e, DEDUP_TOL))
    }

    /// Lexicographic bounding box of the effect polytope.
    pub fn effect_bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for e in &self.extremal_effects {
            for (i, &c) in e.0.iter().enumerate() {
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        (lo, hi)
    }
}

fn canonical_order(mut effects: Vec<Effect>, zero: &Effect, unit: &Effect) -> Vec<Effect> {
    let key = |e: &Effect| {
        if e.approx_eq(zero, DEDUP_TOL) {
            0
        } else if e.approx_eq(unit, DEDUP_TOL) {
            2
        } else {
            1
        }
    };
    effects.sort_by(|a, b| {
        key(a)
            .cmp(&key(b))
            .then_with(|| crate::geometry::polytope::lex_cmp(&a.0, &b.0))
    });
    effects
}
