//! The coherent side: twisted affine generators, their graded homs, Čech complexes and
//! torus-equivariant line-bundle cohomology.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::{Signed, Zero};

use crate::fan::StackyFan;
use crate::linalg::{dot_ir, int, rats, Int, QMatrix, Rat};
use crate::polyhedron::LCPolyhedron;
use crate::semigroup::{cube, lattice_points, AffineLattice};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CoherentError {
    #[error("unknown cone index {0}")]
    UnknownCone(usize),
    #[error("character is not in the fractional lattice of cone {0}")]
    BadCharacter(usize),
    #[error("cannot compose: target {0:?} differs from source {1:?}")]
    Incomposable(GenObject, GenObject),
    #[error("cone {0} is not a face of cone {1}")]
    NotAFace(usize, usize),
    #[error("the cone complex needs a simplicial fan")]
    NotSimplicial,
    #[error("divisor has {found} coefficients, the fan has {expected} rays")]
    DivisorShape { expected: usize, found: usize },
    #[error("divisor is not Cartier on cone {0}")]
    NotCartier(usize),
}

/// The twisted structure sheaf of the affine chart of a cone, graded by a fractional character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenObject {
    pub cone: usize,
    /// Canonical representative in `[0,1)^n`.
    pub chi: Vec<Rat>,
}

impl GenObject {
    pub fn new(sf: &StackyFan, cone: usize, chi: &[Rat]) -> Result<Self, CoherentError> {
        if cone >= sf.fan().len() {
            return Err(CoherentError::UnknownCone(cone));
        }
        if !sf.fractional_lattice(cone).contains(chi) {
            return Err(CoherentError::BadCharacter(cone));
        }
        Ok(Self { cone, chi: sf.canonical_coset(cone, chi) })
    }

    /// Restriction to a face, with the character re-canonicalised.
    pub fn restrict(&self, sf: &StackyFan, face: usize) -> Result<Self, CoherentError> {
        if face >= sf.fan().len() {
            return Err(CoherentError::UnknownCone(face));
        }
        if !sf.fan().is_face(face, self.cone) {
            return Err(CoherentError::NotAFace(face, self.cone));
        }
        let chi = sf.restrict_coset(self.cone, &self.chi, face).map_err(|_| CoherentError::NotAFace(face, self.cone))?;
        Ok(Self { cone: face, chi })
    }
}

/// Every generator: one per cone and coset class, in cone order.
pub fn generators(sf: &StackyFan) -> Vec<GenObject> {
    (0..sf.fan().len())
        .flat_map(|c| sf.cosets(c).iter().map(move |chi| GenObject { cone: c, chi: chi.clone() }))
        .collect()
}

/// A basis element of a graded hom space, concentrated in homological degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomElement {
    /// The `M`-degree.
    pub degree: Vec<Int>,
    /// The point `degree + chi_source - chi_target` of the target's dual cone.
    pub label: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedHom {
    pub source: GenObject,
    pub target: GenObject,
    pub window: i64,
    pub basis: Vec<HomElement>,
}

impl GradedHom {
    pub fn contains_degree(&self, m: &[Int]) -> bool {
        self.basis.iter().any(|e| e.degree == m)
    }
}

/// Basis of `Hom(a, b)` in `M`-degrees `[-window, window]^n`: lattice points of the dual
/// cone of `b` in `M + chi_a - chi_b`. Empty unless the cone of `b` is a face of that of `a`.
pub fn hom_basis(sf: &StackyFan, a: &GenObject, b: &GenObject, window: i64) -> GradedHom {
    let n = sf.n_rank();
    let mut basis = Vec::new();
    if sf.fan().is_face(b.cone, a.cone) {
        let shift: Vec<Rat> = a.chi.iter().zip(&b.chi).map(|(x, y)| x - y).collect();
        let dual = LCPolyhedron::from_cone(&sf.cone(b.cone).dual(), &vec![Rat::zero(); n], false);
        let (lo, hi) = cube(n, window);
        for m in lattice_points(&LCPolyhedron::whole(n), &AffineLattice::integer(n), &lo, &hi) {
            let label: Vec<Rat> = m.iter().zip(&shift).map(|(x, s)| x + s).collect();
            if dual.contains(&label) {
                basis.push(HomElement { degree: m.iter().map(|x| x.to_integer()).collect(), label });
            }
        }
    }
    GradedHom { source: a.clone(), target: b.clone(), window, basis }
}

/// A morphism between generators given by a single basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenMorphism {
    pub source: GenObject,
    pub target: GenObject,
    pub element: HomElement,
}

/// Composite `g ∘ f`; labels and degrees add.
pub fn compose(f: &GenMorphism, g: &GenMorphism) -> Result<GenMorphism, CoherentError> {
    if f.target != g.source {
        return Err(CoherentError::Incomposable(f.target.clone(), g.source.clone()));
    }
    let degree = f.element.degree.iter().zip(&g.element.degree).map(|(a, b)| a + b).collect();
    let label = f.element.label.iter().zip(&g.element.label).map(|(a, b)| a + b).collect();
    Ok(GenMorphism { source: f.source.clone(), target: g.target.clone(), element: HomElement { degree, label } })
}

/// Sign of the face `tau` of the simplicial cone `sigma` (ray lists sorted): `(-1)^k` where
/// `k` is the position of the omitted ray.
pub fn incidence_sign(sigma: &[usize], tau: &[usize]) -> i64 {
    let k = sigma.iter().position(|r| !tau.contains(r)).expect("tau is a facet of sigma");
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Cone-indexed complex `⊕_{Σ(n)} Θ'(σ, 0) → ⊕_{Σ(n-1)} → … → Θ'({0}, 0)`, position
/// `n - dim σ`, with lexicographic simplicial signs.
#[derive(Debug, Clone)]
pub struct CechComplex {
    pub n: usize,
    /// `terms[p]` lists the cones at position `p`.
    pub terms: Vec<Vec<usize>>,
    /// `differentials[p]` has one row per cone of `terms[p + 1]` and one column per cone of `terms[p]`.
    pub differentials: Vec<Vec<Vec<i64>>>,
}

impl CechComplex {
    /// `d_{p+1} ∘ d_p = 0` as integer matrices.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| {
            let (d0, d1) = (&w[0], &w[1]);
            (0..d1.len()).all(|i| {
                (0..d0.first().map_or(0, |r| r.len())).all(|j| (0..d0.len()).map(|k| d1[i][k] * d0[k][j]).sum::<i64>() == 0)
            })
        })
    }

    /// Cohomology dimensions of the strand in `M`-degree `m`, where cone `σ` contributes
    /// iff `m ∈ σ^∨`.
    pub fn strand_cohomology(&self, sf: &StackyFan, m: &[Int]) -> Vec<usize> {
        let mr = rats(m);
        let present: Vec<Vec<usize>> = self
            .terms
            .iter()
            .map(|t| (0..t.len()).filter(|&i| sf.cone(t[i]).dual().contains(&mr)).collect())
            .collect();
        let mats: Vec<QMatrix> = (0..self.differentials.len())
            .map(|p| {
                QMatrix::from_fn(present[p + 1].len(), present[p].len(), |i, j| {
                    Rat::from_integer(Int::from(self.differentials[p][present[p + 1][i]][present[p][j]]))
                })
            })
            .collect();
        cohomology_dims(&present.iter().map(|v| v.len()).collect::<Vec<_>>(), &mats)
    }
}

/// `dim H^p` of a complex with term dimensions `dims` and differentials `mats[p] : C^p -> C^{p+1}`.
pub fn cohomology_dims(dims: &[usize], mats: &[QMatrix]) -> Vec<usize> {
    let ranks: Vec<usize> = mats.iter().map(|m| if m.nrows() == 0 || m.ncols() == 0 { 0 } else { m.rank() }).collect();
    (0..dims.len())
        .map(|p| {
            let out = if p < ranks.len() { ranks[p] } else { 0 };
            let inc = if p > 0 { ranks[p - 1] } else { 0 };
            dims[p] - out - inc
        })
        .collect()
}

pub fn cech_structure_complex(sf: &StackyFan) -> Result<CechComplex, CoherentError> {
    let fan = sf.fan();
    if !fan.is_simplicial() {
        return Err(CoherentError::NotSimplicial);
    }
    let n = sf.n_rank();
    let terms: Vec<Vec<usize>> = (0..=n).map(|p| fan.cones_of_dim(n - p)).collect();
    let differentials = (0..n)
        .map(|p| {
            terms[p + 1]
                .iter()
                .map(|&tau| {
                    terms[p]
                        .iter()
                        .map(|&sigma| {
                            if fan.is_face(tau, sigma) {
                                incidence_sign(&fan.cone(sigma).rays, &fan.cone(tau).rays)
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(CechComplex { n, terms, differentials })
}

/// Nonempty subsets of the maximal cones with their intersection cone.
#[derive(Debug, Clone)]
pub struct CechPoset {
    pub maximal: Vec<usize>,
    /// `(subset of positions in maximal, intersection cone index)`, ordered by size then lexicographically.
    pub elements: Vec<(Vec<usize>, usize)>,
}

impl CechPoset {
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.elements[a].0.iter().all(|x| self.elements[b].0.contains(x))
    }
}

pub fn build_cech_poset(sf: &StackyFan) -> CechPoset {
    let fan = sf.fan();
    let maximal = fan.maximal_cones();
    let mut elements = Vec::new();
    for k in 1..=maximal.len() {
        for subset in (0..maximal.len()).combinations(k) {
            let rays: Vec<usize> = fan
                .cone(maximal[subset[0]])
                .rays
                .iter()
                .copied()
                .filter(|r| subset.iter().all(|&i| fan.cone(maximal[i]).rays.contains(r)))
                .collect();
            let cone = fan.find(&rays).expect("intersection of cones of a fan is a cone");
            elements.push((subset, cone));
        }
    }
    CechPoset { maximal, elements }
}

/// A torus-invariant divisor: one coefficient per ray of the fan in `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorData {
    pub coefficients: Vec<Int>,
}

impl DivisorData {
    pub fn new(coefficients: Vec<Int>) -> Self {
        Self { coefficients }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self { coefficients: c.iter().map(|&x| int(x)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect() }
    }

    fn check(&self, sf: &StackyFan) -> Result<(), CoherentError> {
        let expected = sf.fan_hat().rays().len();
        if self.coefficients.len() != expected {
            return Err(CoherentError::DivisorShape { expected, found: self.coefficients.len() });
        }
        Ok(())
    }

    /// A character `m` with `<m, beta(r)> = -a_r` on the rays `r` of the cone.
    pub fn chart_shift(&self, sf: &StackyFan, cone: usize) -> Result<Vec<Rat>, CoherentError> {
        self.check(sf)?;
        let n = sf.n_rank();
        let rays = &sf.fan().cone(cone).rays;
        if rays.is_empty() {
            return Ok(vec![Rat::zero(); n]);
        }
        let images: Vec<Vec<Int>> = rays.iter().map(|&r| sf.beta().apply(&sf.fan_hat().rays()[r])).collect();
        let a = QMatrix::from_fn(rays.len(), n, |i, j| Rat::from_integer(images[i][j].clone()));
        let b: Vec<Rat> = rays.iter().map(|&r| Rat::from_integer(-self.coefficients[r].clone())).collect();
        a.solve(&b).ok_or(CoherentError::NotCartier(cone))
    }

    /// Sections over the chart of a cone in degree `m`: `<m, beta(r)> >= -a_r` for its rays.
    pub fn chart_polyhedron(&self, sf: &StackyFan, cone: usize) -> Result<LCPolyhedron, CoherentError> {
        let shift = self.chart_shift(sf, cone)?;
        Ok(LCPolyhedron::from_cone(&sf.cone(cone).dual(), &shift, false))
    }
}

/// `h^p` per `M`-degree; only degrees with some nonzero `h^p` are listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundleCohomology {
    pub window: i64,
    /// Number of Čech positions (the number of maximal cones).
    pub levels: usize,
    pub per_degree: BTreeMap<Vec<Int>, Vec<usize>>,
    /// Alternating sums of chart indicators, one per listed degree.
    pub chart_euler: BTreeMap<Vec<Int>, i64>,
}

impl LineBundleCohomology {
    pub fn totals(&self) -> Vec<usize> {
        (0..self.levels).map(|p| self.per_degree.values().map(|v| v.get(p).copied().unwrap_or(0)).sum()).collect()
    }

    pub fn at(&self, m: &[Int]) -> Vec<usize> {
        self.per_degree.get(m).cloned().unwrap_or_default()
    }
}

/// Čech cohomology of `O(D)` over the cover by maximal charts, degree by degree.
pub fn line_bundle_cohomology(sf: &StackyFan, d: &DivisorData, window: i64) -> Result<LineBundleCohomology, CoherentError> {
    let n = sf.n_rank();
    let poset = build_cech_poset(sf);
    let charts: Vec<LCPolyhedron> =
        poset.elements.iter().map(|(_, c)| d.chart_polyhedron(sf, *c)).collect::<Result<_, _>>()?;
    let by_level: Vec<Vec<usize>> = (1..=poset.maximal.len())
        .map(|k| (0..poset.elements.len()).filter(|&i| poset.elements[i].0.len() == k).collect())
        .collect();
    let (lo, hi) = cube(n, window);
    let mut per_degree = BTreeMap::new();
    let mut chart_euler = BTreeMap::new();
    for m in AffineLattice::integer(n).points_in_box(&lo, &hi) {
        let present: Vec<Vec<usize>> =
            by_level.iter().map(|lvl| lvl.iter().copied().filter(|&e| charts[e].contains(&m)).collect()).collect();
        let mats: Vec<QMatrix> = (0..present.len().saturating_sub(1))
            .map(|p| {
                QMatrix::from_fn(present[p + 1].len(), present[p].len(), |i, j| {
                    let big = &poset.elements[present[p + 1][i]].0;
                    let small = &poset.elements[present[p][j]].0;
                    Rat::from_integer(Int::from(cech_sign(big, small)))
                })
            })
            .collect();
        let dims: Vec<usize> = present.iter().map(|v| v.len()).collect();
        let h = cohomology_dims(&dims, &mats);
        if h.iter().any(|&x| x > 0) {
            let key: Vec<Int> = m.iter().map(|x| x.to_integer()).collect();
            let euler: i64 = dims.iter().enumerate().map(|(p, &k)| if p % 2 == 0 { k as i64 } else { -(k as i64) }).sum();
            chart_euler.insert(key.clone(), euler);
            per_degree.insert(key, h);
        }
    }
    Ok(LineBundleCohomology { window, levels: by_level.len(), per_degree, chart_euler })
}

/// Čech coboundary coefficient from the subset `small` to `big = small ∪ {x}`.
pub(crate) fn cech_sign(big: &[usize], small: &[usize]) -> i64 {
    if big.len() != small.len() + 1 || !small.iter().all(|x| big.contains(x)) {
        return 0;
    }
    let k = big.iter().position(|x| !small.contains(x)).unwrap();
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Lattice points of the polytope `{m : <m, beta(r)> >= -a_r}` inside the window; equals
/// `h^0` degree-wise for complete fans.
pub fn global_section_count(sf: &StackyFan, d: &DivisorData, window: i64) -> Result<usize, CoherentError> {
    d.check(sf)?;
    let n = sf.n_rank();
    let (lo, hi) = cube(n, window);
    let images: Vec<Vec<Int>> = sf.fan_hat().rays().iter().map(|r| sf.beta().apply(r)).collect();
    Ok(AffineLattice::integer(n)
        .points_in_box(&lo, &hi)
        .into_iter()
        .filter(|m| images.iter().zip(&d.coefficients).all(|(v, a)| !(dot_ir(v, m) + Rat::from_integer(a.clone())).is_negative()))
        .count())
}
