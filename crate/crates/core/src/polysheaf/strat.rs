//! Stratifications of an open window `(-R, R)^n` by hyperplane arrangements.

use std::collections::BTreeSet;

use itertools::Itertools;
use num::{Signed, Zero};

use super::arrangement::{CellComplex, Hyperplane, Side};
use super::SheafError;
use crate::linalg::{Int, QMatrix, Rat};
use crate::polyhedron::LCPolyhedron;

/// Largest ambient dimension handled by the sheaf engine.
pub const MAX_DIM: usize = 2;

/// Strata are the cells of `walls` inside the open window `(-radius, radius)^n`.
#[derive(Clone, Debug)]
pub struct Stratification {
    n: usize,
    radius: Rat,
    walls: Vec<Hyperplane>,
    complex: CellComplex,
}

pub(crate) fn box_planes(n: usize, center: &[Rat], radius: &Rat) -> Vec<Hyperplane> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1i64, -1] {
            let mut e = vec![Int::zero(); n];
            e[i] = Int::from(s);
            out.push(Hyperplane::new(e, radius - &center[i] * Rat::from_integer(s.into())));
        }
    }
    out
}

impl Stratification {
    pub fn new(n: usize, radius: Rat, walls: impl IntoIterator<Item = Hyperplane>) -> Result<Self, SheafError> {
        if n == 0 || n > MAX_DIM {
            return Err(SheafError::UnsupportedDimension(n));
        }
        if !radius.is_positive() {
            return Err(SheafError::BadWindow);
        }
        let walls: Vec<Hyperplane> = walls
            .into_iter()
            .inspect(|h| assert_eq!(h.dim(), n, "wall dimension"))
            .filter(|h| !h.is_degenerate())
            .map(|h| h.canonical())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut planes = walls.clone();
        planes.extend(box_planes(n, &vec![Rat::zero(); n], &radius));
        let mut sides = vec![Side::Free; walls.len()];
        sides.extend(vec![Side::Positive; 2 * n]);
        let complex = CellComplex::new(n, planes, sides);
        Ok(Self { n, radius, walls, complex })
    }

    /// Walls of all constraints of the given polyhedra.
    pub fn adapted_to(n: usize, radius: Rat, polys: &[LCPolyhedron]) -> Result<Self, SheafError> {
        Self::new(n, radius, polys.iter().flat_map(walls_of))
    }

    pub fn refine(&self, extra: impl IntoIterator<Item = Hyperplane>) -> Result<Self, SheafError> {
        Self::new(self.n, self.radius.clone(), self.walls.iter().cloned().chain(extra))
    }

    pub fn with_radius(&self, radius: Rat) -> Result<Self, SheafError> {
        Self::new(self.n, radius, self.walls.iter().cloned())
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> &Rat {
        &self.radius
    }

    pub fn walls(&self) -> &[Hyperplane] {
        &self.walls
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.complex.cell(i).dim
    }

    pub fn sample(&self, i: usize) -> &[Rat] {
        &self.complex.cell(i).sample
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.complex.le(a, b)
    }

    pub fn locate(&self, x: &[Rat]) -> Option<usize> {
        self.complex.locate(x)
    }

    /// Stratum from signs on the walls only.
    pub fn find_by_wall_signs(&self, signs: &[i8]) -> Option<usize> {
        let mut s = signs.to_vec();
        s.extend(std::iter::repeat_n(1, 2 * self.n));
        self.complex.find(&s)
    }

    pub fn wall_signs(&self, i: usize) -> &[i8] {
        &self.complex.cell(i).signs[..self.walls.len()]
    }

    /// Pairs `(a, b)` with `a` a facet of `b`.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|a| self.complex.cofacets(a).iter().map(move |&(b, _)| (a, b))).collect()
    }

    pub fn is_adapted(&self, poly: &LCPolyhedron) -> bool {
        let walls: BTreeSet<&Hyperplane> = self.walls.iter().collect();
        walls_of(poly).all(|h| walls.contains(&h))
    }

    /// Every vertex of the wall arrangement lies strictly inside the window and every wall
    /// meets it, so sections over the window agree with global sections.
    pub fn is_faithful(&self) -> bool {
        let inside = |x: &[Rat]| x.iter().all(|c| c.abs() < self.radius);
        let n = self.n;
        let mut vertices_ok = true;
        for combo in self.walls.iter().combinations(n) {
            let a = QMatrix::from_fn(n, n, |i, j| Rat::from(combo[i].normal[j].clone()));
            if a.rank() < n {
                continue;
            }
            let b: Vec<Rat> = combo.iter().map(|h| -h.offset.clone()).collect();
            if let Some(x) = a.solve(&b) {
                vertices_ok &= inside(&x);
            }
        }
        vertices_ok && self.walls.iter().all(|h| meets_open_box(h, &vec![Rat::zero(); n], &self.radius))
    }
}

/// Nondegenerate constraint hyperplanes of a polyhedron, canonicalized.
pub fn walls_of(poly: &LCPolyhedron) -> impl Iterator<Item = Hyperplane> + '_ {
    poly.constraints()
        .iter()
        .map(|c| Hyperplane::new(c.normal.clone(), c.offset.clone()))
        .filter(|h| !h.is_degenerate())
        .map(|h| h.canonical())
}

/// The hyperplane takes both signs on the open box.
pub(crate) fn meets_open_box(h: &Hyperplane, center: &[Rat], radius: &Rat) -> bool {
    let n = center.len();
    let (mut pos, mut neg) = (false, false);
    for corner in 0..(1usize << n) {
        let x: Vec<Rat> = (0..n).map(|i| if corner >> i & 1 == 1 { &center[i] + radius } else { &center[i] - radius }).collect();
        let v = h.value(&x);
        pos |= v.is_positive();
        neg |= v.is_negative();
    }
    pos && neg
}

/// `refine_arrangement`: the wall stratification of `(-radius, radius)^n` in which
/// every input polyhedron is a union of strata.
pub fn refine_arrangement(n: usize, polys: &[LCPolyhedron], radius: Rat) -> Result<Stratification, SheafError> {
    Stratification::adapted_to(n, radius, polys)
}
