//! Affine semigroups of lattice points in rational cones, lattice-point enumeration in
//! polyhedra, and finitely generated semigroup modules.

use itertools::Itertools;
use num::{Signed, Zero};

use crate::fan::Cone;
use crate::linalg::{dot_ir, primitive_rat, rats, Int, Rat, RationalLattice};
use crate::polyhedron::LCPolyhedron;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("cone {0:?} is not strictly convex; only pointed semigroups have a finite Hilbert basis here")]
    NotPointed(Cone),
    #[error("region piece {0} has recession cone {1:?}, which differs from the semigroup cone")]
    NotFinitelyGenerated(usize, Cone),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// The translate `offset + lattice` of a full-rank lattice in `Q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLattice {
    lattice: RationalLattice,
    offset: Vec<Rat>,
}

impl AffineLattice {
    pub fn integer(n: usize) -> Self {
        Self { lattice: RationalLattice::standard(n), offset: vec![Rat::zero(); n] }
    }

    pub fn new(lattice: RationalLattice, offset: Vec<Rat>) -> Self {
        Self { lattice, offset }
    }

    /// `Z^n + offset`.
    pub fn shifted_integer(offset: Vec<Rat>) -> Self {
        Self { lattice: RationalLattice::standard(offset.len()), offset }
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn lattice(&self) -> &RationalLattice {
        &self.lattice
    }

    pub fn offset(&self) -> &[Rat] {
        &self.offset
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        let d: Vec<Rat> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.lattice.contains(&d)
    }

    /// All points in the closed box `[lo, hi]`, sorted.
    pub fn points_in_box(&self, lo: &[Rat], hi: &[Rat]) -> Vec<Vec<Rat>> {
        let n = self.dim();
        if n == 0 {
            return vec![Vec::new()];
        }
        if lo.iter().zip(hi).any(|(a, b)| a > b) {
            return Vec::new();
        }
        let basis = self.lattice.basis();
        let inv = self.lattice.basis_matrix().inverse().expect("full-rank lattice");
        let reach: Vec<Rat> = (0..n)
            .map(|j| {
                let a = (&lo[j] - &self.offset[j]).abs();
                let b = (&hi[j] - &self.offset[j]).abs();
                a.max(b)
            })
            .collect();
        let ranges: Vec<(i64, i64)> = (0..n)
            .map(|i| {
                let r: Rat = (0..n).map(|j| inv.get(i, j).abs() * &reach[j]).sum();
                let b = r.ceil().to_integer();
                let b: i64 = b.to_string().parse().expect("box fits in i64");
                (-b, b)
            })
            .collect();
        let mut out = Vec::new();
        for k in ranges.iter().map(|&(a, b)| a..=b).multi_cartesian_product() {
            let mut x = self.offset.clone();
            for (c, b) in k.iter().zip(&basis) {
                if *c == 0 {
                    continue;
                }
                let c = Rat::from_integer(Int::from(*c));
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi += &c * bi;
                }
            }
            if x.iter().zip(lo).all(|(a, b)| a >= b) && x.iter().zip(hi).all(|(a, b)| a <= b) {
                out.push(x);
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Lattice points of `poly` inside the closed box `[lo, hi]`, sorted.
pub fn lattice_points(poly: &LCPolyhedron, lattice: &AffineLattice, lo: &[Rat], hi: &[Rat]) -> Vec<Vec<Rat>> {
    lattice.points_in_box(lo, hi).into_iter().filter(|x| poly.contains(x)).collect()
}

/// Symmetric integer box `[-r, r]^n`.
pub fn cube(n: usize, r: i64) -> (Vec<Rat>, Vec<Rat>) {
    (vec![Rat::from_integer(Int::from(-r)); n], vec![Rat::from_integer(Int::from(r)); n])
}

/// `cone ∩ lattice` with its Hilbert basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSemigroup {
    cone: Cone,
    lattice: RationalLattice,
    basis: Vec<Vec<Rat>>,
}

impl AffineSemigroup {
    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn lattice(&self) -> &RationalLattice {
        &self.lattice
    }

    /// Hilbert basis, sorted lexicographically.
    pub fn hilbert_basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.cone.contains(x) && self.lattice.contains(x)
    }

    /// Shortest lattice vectors on the extreme rays.
    pub fn ray_generators(&self) -> Vec<Vec<Rat>> {
        ray_generators(&self.cone, &self.lattice)
    }
}

fn ray_generators(cone: &Cone, lattice: &RationalLattice) -> Vec<Vec<Rat>> {
    cone.generators()
        .iter()
        .map(|g| {
            let g = rats(g);
            let c = lattice.coordinates(&g);
            let p = primitive_rat(&c);
            let i = c.iter().position(|x| !x.is_zero()).expect("nonzero generator");
            let t = Rat::from_integer(p[i].clone()) / &c[i];
            g.iter().map(|x| x / &t).collect()
        })
        .collect()
}

/// Zonotope bounding box `sum [0, 1] g` over the given vectors.
fn zonotope_box(gens: &[Vec<Rat>], n: usize) -> (Vec<Rat>, Vec<Rat>) {
    let mut lo = vec![Rat::zero(); n];
    let mut hi = vec![Rat::zero(); n];
    for g in gens {
        for j in 0..n {
            if g[j].is_negative() {
                lo[j] += &g[j];
            } else {
                hi[j] += &g[j];
            }
        }
    }
    (lo, hi)
}

/// A functional positive on `cone \ {0}` (for a pointed cone).
fn grading(cone: &Cone) -> Vec<Int> {
    let mut w = vec![Int::zero(); cone.ambient()];
    for a in cone.facets() {
        for (x, y) in w.iter_mut().zip(a) {
            *x += y;
        }
    }
    w
}

/// Hilbert basis by enumeration of the zonotope of the ray generators, processed in order
/// of a positive grading.
pub fn hilbert_basis(cone: &Cone, lattice: &RationalLattice) -> Result<AffineSemigroup, SemigroupError> {
    let n = cone.ambient();
    if lattice.dim() != n {
        return Err(SemigroupError::Dimension(format!("cone in rank {n}, lattice of rank {}", lattice.dim())));
    }
    if !cone.is_pointed() {
        return Err(SemigroupError::NotPointed(cone.clone()));
    }
    let rays = ray_generators(cone, lattice);
    let (lo, hi) = zonotope_box(&rays, n);
    let poly = LCPolyhedron::from_cone(cone, &vec![Rat::zero(); n], false);
    let aff = AffineLattice::new(lattice.clone(), vec![Rat::zero(); n]);
    let w = grading(cone);
    let mut cands: Vec<(Rat, Vec<Rat>)> = lattice_points(&poly, &aff, &lo, &hi)
        .into_iter()
        .filter(|x| x.iter().any(|c| !c.is_zero()))
        .map(|x| (dot_ir(&w, &x), x))
        .collect();
    cands.sort();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for (_, x) in cands {
        let reducible = basis.iter().any(|h| {
            let d: Vec<Rat> = x.iter().zip(h).map(|(a, b)| a - b).collect();
            cone.contains(&d) && lattice.contains(&d)
        });
        if !reducible {
            basis.push(x);
        }
    }
    basis.sort();
    Ok(AffineSemigroup { cone: cone.clone(), lattice: lattice.clone(), basis })
}

/// A module over an affine semigroup: the lattice points of a union of polyhedra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupModule {
    pub region: Vec<LCPolyhedron>,
    pub lattice: AffineLattice,
    pub generators: Vec<Vec<Rat>>,
}

impl SemigroupModule {
    pub fn region_contains(&self, x: &[Rat]) -> bool {
        self.region.iter().any(|p| p.contains(x))
    }
}

/// Minimal generators of the module of lattice points of the union `region`.
pub fn module_generators(
    region: &[LCPolyhedron],
    lattice: &AffineLattice,
    semigroup: &AffineSemigroup,
) -> Result<SemigroupModule, SemigroupError> {
    let n = lattice.dim();
    let pieces: Vec<LCPolyhedron> = region.iter().filter(|p| !p.is_empty()).cloned().collect();
    for (i, p) in pieces.iter().enumerate() {
        if p.dim() != n {
            return Err(SemigroupError::Dimension(format!("region piece {i} lives in rank {}", p.dim())));
        }
        let rec = p.recession_cone();
        if &rec != semigroup.cone() {
            return Err(SemigroupError::NotFinitelyGenerated(i, rec));
        }
    }
    let (zlo, zhi) = zonotope_box(&semigroup.ray_generators(), n);
    let mut generators = Vec::new();
    let verts: Vec<Vec<Rat>> = pieces.iter().flat_map(|p| p.vertices()).collect();
    if !verts.is_empty() {
        let lo: Vec<Rat> = (0..n).map(|j| verts.iter().map(|v| &v[j]).min().unwrap() + &zlo[j]).collect();
        let hi: Vec<Rat> = (0..n).map(|j| verts.iter().map(|v| &v[j]).max().unwrap() + &zhi[j]).collect();
        let inside = |x: &[Rat]| pieces.iter().any(|p| p.contains(x));
        for x in lattice.points_in_box(&lo, &hi) {
            if !inside(&x) {
                continue;
            }
            let reachable = semigroup.hilbert_basis().iter().any(|h| {
                let d: Vec<Rat> = x.iter().zip(h).map(|(a, b)| a - b).collect();
                inside(&d)
            });
            if !reachable {
                generators.push(x);
            }
        }
    }
    Ok(SemigroupModule { region: pieces, lattice: lattice.clone(), generators })
}

/// Module of lattice points of `(S + m_i) ∩ (S + m_j)` for a generator pair `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syzygy {
    pub pair: (usize, usize),
    pub module: SemigroupModule,
}

/// Pairwise intersections of the principal submodules generated by the generators.
pub fn module_resolution_step(
    module: &SemigroupModule,
    semigroup: &AffineSemigroup,
) -> Result<Vec<Syzygy>, SemigroupError> {
    let n = module.lattice.dim();
    let mut out = Vec::new();
    for (i, j) in (0..module.generators.len()).tuple_combinations() {
        let a = LCPolyhedron::from_cone(semigroup.cone(), &module.generators[i], false);
        let b = LCPolyhedron::from_cone(semigroup.cone(), &module.generators[j], false);
        let piece = a.intersect(&b);
        let m = module_generators(&[piece], &module.lattice, semigroup)?;
        debug_assert_eq!(m.lattice.dim(), n);
        out.push(Syzygy { pair: (i, j), module: m });
    }
    Ok(out)
}

pub const DEFAULT_RESOLUTION_DEPTH: usize = 4;

/// Iterated pairwise-intersection steps, up to `depth` levels.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub levels: Vec<Vec<SemigroupModule>>,
    /// `true` when the last computed level still has generator pairs.
    pub truncated: bool,
}

pub fn resolve(module: &SemigroupModule, semigroup: &AffineSemigroup, depth: usize) -> Result<Resolution, SemigroupError> {
    let mut levels = vec![vec![module.clone()]];
    for _ in 0..depth {
        let last = levels.last().unwrap();
        let mut next = Vec::new();
        for m in last {
            next.extend(module_resolution_step(m, semigroup)?.into_iter().map(|s| s.module));
        }
        if next.is_empty() {
            return Ok(Resolution { levels, truncated: false });
        }
        levels.push(next);
    }
    let truncated = levels.last().unwrap().iter().any(|m| m.generators.len() > 1);
    Ok(Resolution { levels, truncated })
}
