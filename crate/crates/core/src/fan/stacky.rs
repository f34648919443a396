use num::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{
    cokernel, dot_ir, frac, preimage_lattice, primitive, primitive_rat, smith_normal_form, FiniteAbelianGroup, Int,
    IntMatrix, Rat, RationalLattice,
};

use super::{Cone, Fan, FanError};

/// On-disk description of a stacky fan. `beta` is `n_rank x l_rank`, column `j` being the
/// image of the `j`-th basis vector of `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackyFanSpec {
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub n_rank: usize,
    pub l_rank: usize,
    pub beta: Vec<Vec<i64>>,
    pub rays_hat: Vec<Vec<i64>>,
    pub cones_hat: Vec<Vec<usize>>,
}

fn default_version() -> u32 {
    1
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Condition1Violation {
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("beta has infinite cokernel (rank {rank} < {n})")]
    InfiniteCokernel { rank: usize, n: usize },
    #[error("the cones in L do not form a fan: {0}")]
    HatFan(FanError),
    #[error("cone {cone:?} drops dimension under beta ({hat_dim} -> {image_dim})")]
    DimensionDrop { cone: Vec<usize>, hat_dim: usize, image_dim: usize },
    #[error("rays {0} and {1} have the same image ray")]
    RayCollision(usize, usize),
    #[error("the image cones do not form a fan: {0}")]
    ImageNotFan(FanError),
    #[error("cone {0:?} has no counterpart in the image fan")]
    PosetMismatch(Vec<usize>),
}

/// Lattice data attached to one cone of the image fan.
#[derive(Debug, Clone)]
struct ConeLattice {
    /// `span(sigma) ∩ N`.
    span: Vec<Vec<Int>>,
    /// A complement of `span` in `N`.
    complement: Vec<Vec<Int>>,
    fractional: RationalLattice,
    cosets: Vec<Vec<Rat>>,
    stabilizer: FiniteAbelianGroup,
}

/// A validated stacky fan: a fan in `L_R`, a lattice map `beta : L -> N` with finite
/// cokernel, and the image fan in `N_R` with the same cone indexing.
#[derive(Debug, Clone)]
pub struct StackyFan {
    name: String,
    beta: IntMatrix,
    fan_hat: Fan,
    fan: Fan,
    lattices: Vec<ConeLattice>,
}

impl StackyFan {
    /// Parses and validates, returning the first violated clause.
    pub fn from_spec(spec: &StackyFanSpec) -> Result<Self, Condition1Violation> {
        let (n, l) = (spec.n_rank, spec.l_rank);
        if spec.beta.len() != n || spec.beta.iter().any(|r| r.len() != l) {
            return Err(Condition1Violation::Shape(format!("beta must be {n} x {l}")));
        }
        if let Some(r) = spec.rays_hat.iter().find(|r| r.len() != l) {
            return Err(Condition1Violation::Shape(format!("ray {r:?} does not lie in a rank-{l} lattice")));
        }
        let beta = IntMatrix::from_rows(&spec.beta);
        let rank = beta.rank();
        if rank != n {
            return Err(Condition1Violation::InfiniteCokernel { rank, n });
        }
        let rays_hat: Vec<Vec<Int>> = spec.rays_hat.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        let fan_hat = Fan::from_ray_cones(l, &rays_hat, &spec.cones_hat).map_err(Condition1Violation::HatFan)?;
        for c in fan_hat.cones() {
            let images: Vec<Vec<Int>> = c.rays.iter().map(|&i| beta.apply(&fan_hat.rays()[i])).collect();
            let image_dim = if images.is_empty() { 0 } else { IntMatrix::from_int_rows(&images, n).rank() };
            if image_dim != c.cone.dim() {
                return Err(Condition1Violation::DimensionDrop {
                    cone: c.rays.clone(),
                    hat_dim: c.cone.dim(),
                    image_dim,
                });
            }
        }
        let rays: Vec<Vec<Int>> = fan_hat.rays().iter().map(|r| primitive(&beta.apply(r))).collect();
        for i in 0..rays.len() {
            if let Some(j) = (i + 1..rays.len()).find(|&j| rays[j] == rays[i]) {
                return Err(Condition1Violation::RayCollision(i, j));
            }
        }
        let all: Vec<Vec<usize>> = fan_hat.cones().iter().map(|c| c.rays.clone()).collect();
        let fan = Fan::from_ray_cones(n, &rays, &all).map_err(Condition1Violation::ImageNotFan)?;
        if fan.len() != fan_hat.len() {
            let extra = fan.cones().iter().find(|c| fan_hat.find(&c.rays).is_none());
            return Err(Condition1Violation::PosetMismatch(extra.map(|c| c.rays.clone()).unwrap_or_default()));
        }
        if let Some(bad) = fan.cones().iter().zip(fan_hat.cones()).find(|(a, b)| a.rays != b.rays) {
            return Err(Condition1Violation::PosetMismatch(bad.1.rays.clone()));
        }
        let mut sf = Self { name: spec.name.clone(), beta, fan_hat, fan, lattices: Vec::new() };
        sf.lattices = (0..sf.fan.len()).map(|i| sf.cone_lattice(i)).collect();
        Ok(sf)
    }

    fn cone_lattice(&self, idx: usize) -> ConeLattice {
        let n = self.n_rank();
        let span = self.fan.cone(idx).cone.span_basis();
        let k = span.len();
        let complement = complement_basis(&span, n);
        let hat_span = self.fan_hat.cone(idx).cone.span_basis();
        let images: Vec<Vec<Int>> = hat_span.iter().map(|v| self.beta.apply(v)).collect();
        let stabilizer = if k == 0 {
            FiniteAbelianGroup::trivial()
        } else {
            // images expressed in the basis of span(sigma) ∩ N
            let basis = IntMatrix::from_columns(&span, n).to_q();
            let coords: Vec<Vec<Int>> = images
                .iter()
                .map(|b| {
                    let x = basis.solve(&crate::linalg::rats(b)).expect("image lies in the span");
                    x.iter().map(|c| c.to_integer()).collect()
                })
                .collect();
            cokernel(&IntMatrix::from_columns(&coords, k)).torsion
        };
        let mut cols = images;
        cols.extend(complement.iter().cloned());
        let b = IntMatrix::from_columns(&cols, n);
        let fractional =
            preimage_lattice(&b.transpose(), &IntMatrix::identity(n).to_rows()).expect("full-rank pairing matrix");
        let cosets = fractional.coset_representatives();
        ConeLattice { span, complement, fractional, cosets, stabilizer }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_rank(&self) -> usize {
        self.beta.nrows()
    }

    pub fn l_rank(&self) -> usize {
        self.beta.ncols()
    }

    pub fn beta(&self) -> &IntMatrix {
        &self.beta
    }

    pub fn fan_hat(&self) -> &Fan {
        &self.fan_hat
    }

    /// The image fan in `N_R`; cone `i` is the image of cone `i` of [`Self::fan_hat`].
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn cone(&self, idx: usize) -> &Cone {
        &self.fan.cone(idx).cone
    }

    /// The lattice of fractional characters of cone `idx`, lifted to `M_Q` by requiring
    /// integrality on a fixed complement of `span(sigma) ∩ N`.
    pub fn fractional_lattice(&self, idx: usize) -> &RationalLattice {
        &self.lattices[idx].fractional
    }

    /// Coset representatives of the fractional lattice modulo `M`, in `[0,1)^n`.
    pub fn cosets(&self, idx: usize) -> &[Vec<Rat>] {
        &self.lattices[idx].cosets
    }

    /// `N_sigma / beta(L ∩ span(sigma_hat))`.
    pub fn stabilizer(&self, idx: usize) -> &FiniteAbelianGroup {
        &self.lattices[idx].stabilizer
    }

    /// Canonical representative of the class of `chi` for cone `idx`.
    pub fn canonical_coset(&self, idx: usize, chi: &[Rat]) -> Vec<Rat> {
        let data = &self.lattices[idx];
        self.lift(data, chi)
    }

    /// Image of the class of `chi` (a character of cone `from`) in the coset group of the face `to`.
    pub fn restrict_coset(&self, from: usize, chi: &[Rat], to: usize) -> Result<Vec<Rat>, FanError> {
        if from >= self.fan.len() {
            return Err(FanError::UnknownCone(from));
        }
        if to >= self.fan.len() {
            return Err(FanError::UnknownCone(to));
        }
        if !self.fan.is_face(to, from) {
            return Err(FanError::Dimension(format!("cone {to} is not a face of cone {from}")));
        }
        Ok(self.lift(&self.lattices[to], chi))
    }

    /// The vector agreeing with `chi` on the span and vanishing on the complement, reduced mod `M`.
    fn lift(&self, data: &ConeLattice, chi: &[Rat]) -> Vec<Rat> {
        let n = self.n_rank();
        let mut cols = data.span.clone();
        cols.extend(data.complement.iter().cloned());
        let mut rhs: Vec<Rat> = data.span.iter().map(|v| dot_ir(v, chi)).collect();
        rhs.resize(n, Rat::zero());
        let ct = IntMatrix::from_columns(&cols, n).transpose().to_q();
        let lam = ct.solve(&rhs).expect("unimodular basis");
        lam.iter().map(frac).collect()
    }

    /// Star subdivision of cone `idx`; the new ray of `L` maps onto the new ray of `N`.
    pub fn star_subdivision(&self, idx: usize) -> Result<StackyFan, FanError> {
        let sigma = self.fan.cones().get(idx).ok_or(FanError::UnknownCone(idx))?;
        let mut sum = vec![Rat::zero(); self.l_rank()];
        for &i in &sigma.rays {
            let hat = &self.fan_hat.rays()[i];
            let image = self.beta.apply(hat);
            let prim = primitive(&image);
            let pos = prim.iter().position(|x| !x.is_zero()).expect("nonzero ray");
            let k = Rat::new(image[pos].clone(), prim[pos].clone());
            for (s, h) in sum.iter_mut().zip(hat) {
                *s += Rat::from_integer(h.clone()) / &k;
            }
        }
        let new_ray = primitive_rat(&sum);
        let (rays, cones) = self.fan_hat.subdivision_data(idx, Some(new_ray))?;
        let spec = StackyFanSpec {
            name: format!("{}-star{idx}", self.name),
            format_version: default_version(),
            n_rank: self.n_rank(),
            l_rank: self.l_rank(),
            beta: self.beta.to_rows().iter().map(|r| r.iter().map(to_i64).collect()).collect(),
            rays_hat: rays.iter().map(|r| r.iter().map(to_i64).collect()).collect(),
            cones_hat: cones,
        };
        StackyFan::from_spec(&spec).map_err(|e| FanError::Dimension(e.to_string()))
    }

    /// The input description this fan was built from, with maximal cones only.
    pub fn to_spec(&self) -> StackyFanSpec {
        StackyFanSpec {
            name: self.name.clone(),
            format_version: default_version(),
            n_rank: self.n_rank(),
            l_rank: self.l_rank(),
            beta: self.beta.to_rows().iter().map(|r| r.iter().map(to_i64).collect()).collect(),
            rays_hat: self.fan_hat.rays().iter().map(|r| r.iter().map(to_i64).collect()).collect(),
            cones_hat: self.fan_hat.maximal_cones().iter().map(|&i| self.fan_hat.cone(i).rays.clone()).collect(),
        }
    }
}

fn to_i64(x: &Int) -> i64 {
    x.to_string().parse().expect("fixture integers fit in i64")
}

/// Basis of a complement of the saturated sublattice spanned by `span` in `Z^n`.
fn complement_basis(span: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let k = span.len();
    if k == 0 {
        return IntMatrix::identity(n).to_rows();
    }
    let s = smith_normal_form(&IntMatrix::from_columns(span, n));
    let inv = s.u.to_q().inverse().expect("unimodular");
    (k..n)
        .map(|j| (0..n).map(|i| inv.get(i, j).to_integer()).collect())
        .collect()
}

/// One component of the skeleton modulo `M`: the translate `chi + sigma^perp` in the base
/// with conormal directions `-sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonCell {
    pub cone: usize,
    pub chi: Vec<Rat>,
    pub perp_basis: Vec<Vec<Int>>,
    pub conormal: Cone,
}

impl SkeletonCell {
    /// `true` if `x` lies on `chi + sigma^perp + M`.
    pub fn base_contains(&self, x: &[Rat]) -> bool {
        let d: Vec<Rat> = x.iter().zip(&self.chi).map(|(a, b)| a - b).collect();
        self.conormal.span_basis().iter().all(|v| dot_ir(v, &d).is_integer())
    }

    /// `true` if the covector `xi` at `x` lies in this cell (modulo `M`).
    pub fn contains(&self, x: &[Rat], xi: &[Rat]) -> bool {
        self.conormal.contains(xi) && self.base_contains(x)
    }
}

/// One cell per cone and coset class.
pub fn build_skeleton(sf: &StackyFan) -> Vec<SkeletonCell> {
    let mut out = Vec::new();
    for (idx, c) in sf.fan().cones().iter().enumerate() {
        let conormal = c.cone.neg();
        for chi in sf.cosets(idx) {
            out.push(SkeletonCell {
                cone: idx,
                chi: chi.clone(),
                perp_basis: c.cone.perp_basis(),
                conormal: conormal.clone(),
            });
        }
    }
    out
}
