//! Cones, fans, stacky fans and the combinatorial data derived from them.

mod cone;
mod stacky;

pub use cone::Cone;
pub use stacky::{build_skeleton, Condition1Violation, SkeletonCell, StackyFan, StackyFanSpec};

use std::collections::BTreeSet;

use itertools::Itertools;
use num::{One, Signed, Zero};

use crate::linalg::{primitive, rats, smith_normal_form, Int, IntMatrix};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("cone {0:?} is not strictly convex")]
    NotPointed(Vec<usize>),
    #[error("ray {ray} is not an extreme ray of cone {cone:?}")]
    NotExtreme { ray: usize, cone: Vec<usize> },
    #[error("cones {0:?} and {1:?} do not meet in a common face")]
    BadIntersection(Vec<usize>, Vec<usize>),
    #[error("unknown ray index {0}")]
    UnknownRay(usize),
    #[error("unknown cone index {0}")]
    UnknownCone(usize),
    #[error("star subdivision needs a cone of dimension at least 2, got {0}")]
    SubdivisionTooSmall(usize),
}

/// Rays and maximal cones of a subdivided fan.
pub(crate) type SubdivisionData = (Vec<Vec<Int>>, Vec<Vec<usize>>);

/// A cone of a fan, recorded by its ray indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanCone {
    pub rays: Vec<usize>,
    pub cone: Cone,
}

/// Rational polyhedral fan given by rays and cones as ray-index sets, closed under faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    ambient: usize,
    rays: Vec<Vec<Int>>,
    cones: Vec<FanCone>,
}

impl Fan {
    /// Builds a fan from rays and (not necessarily maximal) cones; faces are added.
    pub fn from_ray_cones(ambient: usize, rays: &[Vec<Int>], cones: &[Vec<usize>]) -> Result<Self, FanError> {
        if let Some(r) = rays.iter().find(|r| r.len() != ambient || r.iter().all(|x| x.is_zero())) {
            return Err(FanError::Dimension(format!("bad ray {r:?}")));
        }
        let rays: Vec<Vec<Int>> = rays.iter().map(|r| primitive(r)).collect();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        sets.insert(Vec::new());
        for c in cones {
            let mut idx = c.clone();
            idx.sort_unstable();
            idx.dedup();
            if let Some(&bad) = idx.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::UnknownRay(bad));
            }
            let gens: Vec<Vec<Int>> = idx.iter().map(|&i| rays[i].clone()).collect();
            let cone = Cone::new(ambient, &gens)?;
            if !cone.is_pointed() {
                return Err(FanError::NotPointed(idx));
            }
            for &i in &idx {
                if !cone.generators().contains(&rays[i]) {
                    return Err(FanError::NotExtreme { ray: i, cone: idx.clone() });
                }
            }
            for face in cone.faces() {
                let f: Vec<usize> = idx.iter().copied().filter(|&i| face.generators().contains(&rays[i])).collect();
                sets.insert(f);
            }
        }
        let mut list: Vec<FanCone> = sets
            .into_iter()
            .map(|r| {
                let gens: Vec<Vec<Int>> = r.iter().map(|&i| rays[i].clone()).collect();
                FanCone { cone: Cone::new(ambient, &gens).expect("face cone"), rays: r }
            })
            .collect();
        list.sort_by(|a, b| a.cone.dim().cmp(&b.cone.dim()).then_with(|| a.rays.cmp(&b.rays)));
        let fan = Self { ambient, rays, cones: list };
        fan.check_intersections()?;
        Ok(fan)
    }

    fn check_intersections(&self) -> Result<(), FanError> {
        let max = self.maximal_cones();
        for (a, b) in max.iter().tuple_combinations() {
            let (ca, cb) = (&self.cones[*a], &self.cones[*b]);
            let common: Vec<usize> = ca.rays.iter().copied().filter(|r| cb.rays.contains(r)).collect();
            let gens: Vec<Vec<Int>> = common.iter().map(|&i| self.rays[i].clone()).collect();
            let expected = Cone::new(self.ambient, &gens)?;
            let actual = ca.cone.intersection(&cb.cone);
            if actual != expected || self.find(&common).is_none() {
                return Err(FanError::BadIntersection(ca.rays.clone(), cb.rays.clone()));
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    /// All cones, sorted by dimension then by ray indices; index 0 is the zero cone.
    pub fn cones(&self) -> &[FanCone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &FanCone {
        &self.cones[i]
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn find(&self, rays: &[usize]) -> Option<usize> {
        let mut r = rays.to_vec();
        r.sort_unstable();
        self.cones.iter().position(|c| c.rays == r)
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| self.cones[i].cone.dim() == d).collect()
    }

    /// `true` when cone `a` is a face of cone `b`.
    pub fn is_face(&self, a: usize, b: usize) -> bool {
        self.cones[a].rays.iter().all(|r| self.cones[b].rays.contains(r))
    }

    pub fn maximal_cones(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| !(0..self.cones.len()).any(|j| j != i && self.is_face(i, j)))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.cones.iter().map(|c| c.cone.dim()).max().unwrap_or(0)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.rays.len() == c.cone.dim())
    }

    /// Every cone is generated by part of a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(|c| {
            if c.rays.is_empty() {
                return true;
            }
            if c.rays.len() != c.cone.dim() {
                return false;
            }
            let gens: Vec<Vec<Int>> = c.rays.iter().map(|&i| self.rays[i].clone()).collect();
            let s = smith_normal_form(&IntMatrix::from_int_rows(&gens, self.ambient));
            s.invariant_factors().iter().all(|x| x.is_one())
        })
    }

    /// Support check by ray shooting plus the facet-sharing condition.
    pub fn is_complete(&self) -> bool {
        let n = self.ambient;
        let max = self.maximal_cones();
        if max.iter().any(|&i| self.cones[i].cone.dim() != n) {
            return false;
        }
        if n == 0 {
            return true;
        }
        let bound: Int = 3 * self.rays.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(Int::one);
        let b: i64 = bound.to_string().parse().unwrap_or(3);
        for v in (0..n).map(|_| -b..=b).multi_cartesian_product() {
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let vi: Vec<Int> = v.iter().map(|&x| Int::from(x)).collect();
            if primitive(&vi) != vi {
                continue;
            }
            if !max.iter().any(|&i| self.cones[i].cone.contains(&rats(&vi))) {
                return false;
            }
        }
        for i in self.cones_of_dim(n - 1) {
            let count = max.iter().filter(|&&m| self.is_face(i, m)).count();
            if count != 2 {
                return false;
            }
        }
        true
    }

    /// Star subdivision of cone `idx` along the primitive sum of its rays.
    pub fn star_subdivision(&self, idx: usize) -> Result<Fan, FanError> {
        let (rays, cones) = self.subdivision_data(idx, None)?;
        Fan::from_ray_cones(self.ambient, &rays, &cones)
    }

    /// New ray list and maximal cone list for a star subdivision. `new_ray` overrides the
    /// default primitive sum.
    pub(crate) fn subdivision_data(
        &self,
        idx: usize,
        new_ray: Option<Vec<Int>>,
    ) -> Result<SubdivisionData, FanError> {
        let sigma = self.cones.get(idx).ok_or(FanError::UnknownCone(idx))?;
        if sigma.cone.dim() < 2 {
            return Err(FanError::SubdivisionTooSmall(sigma.cone.dim()));
        }
        let centre = new_ray.unwrap_or_else(|| primitive(&sigma.cone.interior_vector()));
        let mut rays = self.rays.clone();
        rays.push(centre);
        let c = rays.len() - 1;
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for m in self.maximal_cones() {
            let tau = &self.cones[m];
            if !self.is_face(idx, m) {
                out.insert(tau.rays.clone());
                continue;
            }
            for f in 0..self.cones.len() {
                let face = &self.cones[f];
                if face.cone.dim() + 1 != tau.cone.dim() || !self.is_face(f, m) || self.is_face(idx, f) {
                    continue;
                }
                let mut r = face.rays.clone();
                r.push(c);
                out.insert(r);
            }
        }
        Ok((rays, out.into_iter().collect()))
    }
}
