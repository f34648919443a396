//! M-graded homs: `RHom` of a translate `F + m` into `G` over a box of lattice translations.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;

use super::arrangement::Hyperplane;
use super::indicator::IndicatorComplex;
use super::rhom::rhom;
use super::strat::Stratification;
use super::SheafError;
use crate::linalg::Rat;

/// Nonzero `RHom(F + m, G)` dimensions for each translation in the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusHom {
    pub box_radius: i64,
    pub dims: BTreeMap<Vec<i64>, BTreeMap<i32, usize>>,
    /// Every translation on the boundary of the box contributes zero.
    pub boundary_clear: bool,
    /// Recomputing the boundary translations on a doubled window gave the same answer.
    pub window_stable: bool,
}

impl TorusHom {
    pub fn at(&self, m: &[i64]) -> BTreeMap<i32, usize> {
        self.dims.get(m).cloned().unwrap_or_default()
    }

    /// Translations with a contribution in degree `k`.
    pub fn support_in_degree(&self, k: i32) -> Vec<Vec<i64>> {
        self.dims.iter().filter(|(_, d)| d.contains_key(&k)).map(|(m, _)| m.clone()).collect()
    }
}

fn translations(n: usize, r: i64) -> Vec<Vec<i64>> {
    (0..n).map(|_| -r..=r).multi_cartesian_product().collect()
}

fn max_abs(v: &[Rat]) -> Rat {
    v.iter().map(|x| if *x < Rat::from_integer(0.into()) { -x } else { x.clone() }).max().unwrap_or_default()
}

/// First window of the form `start * 2^k` on which the joint stratification is faithful.
fn faithful_window(n: usize, walls: &[Hyperplane], start: Rat) -> Result<Arc<Stratification>, SheafError> {
    let mut r = start;
    for _ in 0..12 {
        let s = Stratification::new(n, r.clone(), walls.iter().cloned())?;
        if s.is_faithful() {
            return Ok(Arc::new(s));
        }
        r *= Rat::from_integer(2.into());
    }
    Err(SheafError::WindowTooSmall(format!("no faithful window up to {r}")))
}

/// Knobs used by stability checks: a window multiplier and extra walls refining every
/// stratification.
#[derive(Clone, Debug)]
pub struct TorusOptions {
    pub window_scale: i64,
    pub extra_walls: Vec<Hyperplane>,
}

impl Default for TorusOptions {
    fn default() -> Self {
        Self { window_scale: 1, extra_walls: Vec::new() }
    }
}

fn hom_at(
    f: &IndicatorComplex,
    g: &IndicatorComplex,
    m: &[i64],
    scale: i64,
    extra: &[Hyperplane],
) -> Result<BTreeMap<i32, usize>, SheafError> {
    let n = f.ambient();
    let shift: Vec<Rat> = m.iter().map(|&v| Rat::from_integer(v.into())).collect();
    let moved = f.translate(&shift);
    let walls: Vec<_> = moved.walls().into_iter().chain(g.walls()).chain(extra.iter().cloned()).collect();
    let start = (max_abs(&shift) + Rat::from_integer(2.into())) * Rat::from_integer(scale.into());
    let strat = faithful_window(n, &walls, start)?;
    rhom(&moved.instantiate(&strat)?, &g.instantiate(&strat)?)
}

/// `RHom(F + m, G)` for `m ∈ [-r, r]^n`, each on a faithful window.
/// Only meaningful when both complexes are built from walls that a bounded window captures
/// faithfully; the boundary and window flags report whether the box looks exhaustive.
pub fn torus_hom(f: &IndicatorComplex, g: &IndicatorComplex, box_radius: i64) -> Result<TorusHom, SheafError> {
    torus_hom_with(f, g, box_radius, &TorusOptions::default())
}

pub fn torus_hom_with(
    f: &IndicatorComplex,
    g: &IndicatorComplex,
    box_radius: i64,
    options: &TorusOptions,
) -> Result<TorusHom, SheafError> {
    if f.ambient() != g.ambient() {
        return Err(SheafError::DimensionMismatch);
    }
    let n = f.ambient();
    let ms = translations(n, box_radius);
    let results: Vec<(Vec<i64>, BTreeMap<i32, usize>)> = ms
        .par_iter()
        .map(|m| hom_at(f, g, m, options.window_scale, &options.extra_walls).map(|d| (m.clone(), d)))
        .collect::<Result<_, _>>()?;
    let on_boundary = |m: &[i64]| m.iter().any(|v| v.abs() == box_radius);
    let boundary_clear = results.iter().all(|(m, d)| !on_boundary(m) || d.is_empty());
    let mut window_stable = true;
    for (m, d) in results.iter().filter(|(m, _)| on_boundary(m)) {
        if hom_at(f, g, m, 2 * options.window_scale, &options.extra_walls)? != *d {
            window_stable = false;
            break;
        }
    }
    let dims = results.into_iter().filter(|(_, d)| !d.is_empty()).collect();
    Ok(TorusHom { box_radius, dims, boundary_clear, window_stable })
}

/// Like [`torus_hom`] but fails with [`SheafError::Unstable`] when a boundary translation
/// contributes.
pub fn torus_hom_bounded(f: &IndicatorComplex, g: &IndicatorComplex, box_radius: i64) -> Result<TorusHom, SheafError> {
    let t = torus_hom(f, g, box_radius)?;
    if let Some((m, _)) = t.dims.iter().find(|(m, _)| m.iter().any(|v| v.abs() == box_radius)) {
        return Err(SheafError::Unstable(m.clone()));
    }
    Ok(t)
}
