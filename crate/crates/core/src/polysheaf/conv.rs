//! Convolution `F * G = m_!(F ⊠ G)` and its right adjoint `Hom^*`.
//!
//! The stalk of `F * G` at `x` is computed from the cellular compactly supported complex of
//! the fiber `{y : y in supp F, x - y in supp G}`. The generization map along a covering pair
//! `s < t` comes from the slab `[0, 1] x fiber` over the segment from a point of `s` to a
//! point of `t`: restricting to either end is a quasi-isomorphism at `τ = 0` and a plain
//! restriction at `τ = 1`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use itertools::Itertools;
use num::{One, Signed, Zero};
use rayon::prelude::*;

use super::arrangement::{CellComplex, Hyperplane, Side};
use super::cochain::{normalize, ChainMap, Cochain, Cohomology, SVec};
use super::sheaf::{dense_to_map, PosetSheaf};
use super::strat::{box_planes, Stratification};
use super::SheafError;
use crate::linalg::{dot_ir, Int, QMatrix, Rat};

/// How properness of the addition map over the supports was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Properness {
    /// The first factor has compact support inside its window.
    LeftCompact,
    RightCompact,
    /// Neither factor is compactly supported; the result is still `m_!`.
    Unchecked,
}

#[derive(Clone, Debug)]
pub struct Convolution {
    /// Stalk cohomology with the induced generization maps.
    pub sheaf: PosetSheaf,
    /// All stalk cohomology sits in a single degree, so `sheaf` is quasi-isomorphic to the
    /// convolution and not only its cohomology functor.
    pub exact: bool,
    pub properness: Properness,
}

/// Vertices of an arrangement of walls (all points cut out by `n` independent walls).
fn vertices(walls: &[Hyperplane], n: usize) -> Vec<Vec<Rat>> {
    let mut out = BTreeSet::new();
    for combo in walls.iter().combinations(n) {
        let a = QMatrix::from_fn(n, n, |i, j| Rat::from(combo[i].normal[j].clone()));
        if a.rank() < n {
            continue;
        }
        let b: Vec<Rat> = combo.iter().map(|h| -h.offset.clone()).collect();
        out.insert(a.solve(&b).expect("independent walls"));
    }
    out.into_iter().collect()
}

/// Walls across which the fiber combinatorics can change.
fn sum_walls(f: &[Hyperplane], g: &[Hyperplane], n: usize) -> Vec<Hyperplane> {
    let mut out = Vec::new();
    for p in vertices(f, n) {
        out.extend(g.iter().map(|h| h.translate(&p)));
    }
    for q in vertices(g, n) {
        out.extend(f.iter().map(|h| h.translate(&q)));
    }
    for a in f {
        for b in g {
            let (ca, cb) = (a.canonical(), b.canonical());
            if ca.normal == cb.normal {
                out.push(Hyperplane::new(ca.normal.clone(), &ca.offset + &cb.offset));
            }
        }
    }
    out
}

fn compactly_supported(s: &PosetSheaf) -> bool {
    s.support().iter().all(|&c| !s.strat().complex().touches_boundary(c))
}

/// Fiber geometry shared by stalk and slab computations.
struct Setup<'a> {
    f: &'a PosetSheaf,
    g: &'a PosetSheaf,
    n: usize,
    kf: usize,
    kg: usize,
    tensors: std::sync::Mutex<HashMap<(usize, usize), Arc<Cochain>>>,
    f_compact: bool,
    g_compact: bool,
}

/// A cellular compactly supported complex together with cell offsets.
struct Total {
    complex: Cochain,
    offsets: Vec<usize>,
    cells: CellComplex,
}

impl Setup<'_> {
    fn tensor(&self, a: usize, b: usize) -> Arc<Cochain> {
        if let Some(t) = self.tensors.lock().unwrap().get(&(a, b)) {
            return t.clone();
        }
        let t = Arc::new(self.f.stalk(a).tensor(self.g.stalk(b)));
        self.tensors.lock().unwrap().insert((a, b), t.clone());
        t
    }

    /// Fiber planes over `x`: F walls, G walls, F box, G box.
    fn fiber_planes(&self, x: &[Rat]) -> Vec<Hyperplane> {
        let n = self.n;
        let mut planes: Vec<Hyperplane> = self.f.strat().walls().to_vec();
        for h in self.g.strat().walls() {
            planes.push(Hyperplane::new(h.normal.iter().map(|c| -c).collect(), dot_ir(&h.normal, x) + &h.offset));
        }
        planes.extend(box_planes(n, &vec![Rat::zero(); n], self.f.strat().radius()));
        for i in 0..n {
            for s in [1i64, -1] {
                let mut e = vec![Int::zero(); n];
                e[i] = Int::from(-s);
                let sr = Rat::from_integer(s.into());
                planes.push(Hyperplane::new(e, self.g.strat().radius() + &x[i] * sr));
            }
        }
        planes
    }

    fn sides(&self, extra: usize) -> Vec<Side> {
        let mut sides = vec![Side::Free; self.kf + self.kg];
        sides.extend(vec![Side::Positive; 4 * self.n]);
        sides.extend(vec![Side::NonNegative; extra]);
        sides
    }

    /// The fiber arrangement over `x` is captured by the fiber box.
    fn check_window(&self, x: &[Rat]) -> Result<(), SheafError> {
        let n = self.n;
        let planes = self.fiber_planes(x);
        let walls = &planes[..self.kf + self.kg];
        let rf = self.f.strat().radius();
        let rg = self.g.strat().radius();
        // a compactly supported factor whose window fits inside the other translated window
        if self.f_compact && x.iter().all(|c| c.abs() + rf <= *rg) {
            return Ok(());
        }
        if self.g_compact && x.iter().all(|c| c.abs() + rg <= *rf) {
            return Ok(());
        }
        let inside = |y: &[Rat]| (0..n).all(|i| y[i].abs() < *rf && (&x[i] - &y[i]).abs() < *rg);
        let vs = vertices(walls, n);
        if let Some(v) = vs.iter().find(|v| !inside(v)) {
            return Err(SheafError::WindowTooSmall(format!("fiber vertex {v:?} over {x:?} leaves the window")));
        }
        if vs.is_empty() {
            // nonessential arrangement: the fiber box must be nonempty and meet every wall
            let lo: Vec<Rat> = (0..n).map(|i| (-rf.clone()).max(&x[i] - rg)).collect();
            let hi: Vec<Rat> = (0..n).map(|i| rf.clone().min(&x[i] + rg)).collect();
            if (0..n).any(|i| lo[i] >= hi[i]) {
                return Err(SheafError::WindowTooSmall(format!("empty fiber box over {x:?}")));
            }
            if walls.iter().any(|h| !meets_rect(h, &lo, &hi)) {
                return Err(SheafError::WindowTooSmall(format!("fiber wall over {x:?} misses the window")));
            }
        }
        Ok(())
    }

    /// Compactly supported complex of the product sheaf over the cells of `cells`.
    fn total(&self, cells: CellComplex) -> Result<Total, SheafError> {
        let (kf, kg) = (self.kf, self.kg);
        let mut pairs = Vec::with_capacity(cells.len());
        for c in cells.cells() {
            let a = self.f.strat().find_by_wall_signs(&c.signs[..kf]).ok_or(SheafError::NotARefinement)?;
            let b = self.g.strat().find_by_wall_signs(&c.signs[kf..kf + kg]).ok_or(SheafError::NotARefinement)?;
            pairs.push((a, b));
        }
        let stalks: Vec<Arc<Cochain>> = pairs.iter().map(|&(a, b)| self.tensor(a, b)).collect();
        let mut offsets = Vec::with_capacity(cells.len());
        let mut total = 0;
        for s in &stalks {
            offsets.push(total);
            total += s.dim();
        }
        let mut degrees = Vec::with_capacity(total);
        let mut d: Vec<SVec> = Vec::with_capacity(total);
        let mut maps: HashMap<usize, ChainMap> = HashMap::new();
        for (t, cell) in cells.cells().iter().enumerate() {
            let dim = cell.dim as i32;
            let sign = if dim % 2 == 0 { Rat::one() } else { -Rat::one() };
            maps.clear();
            for &(u, _) in cells.cofacets(t) {
                let (a, b) = pairs[t];
                let (a2, b2) = pairs[u];
                maps.insert(u, self.f.map(a, a2).tensor(&self.g.map(b, b2), self.g.stalk(b2).dim()));
            }
            for i in 0..stalks[t].dim() {
                degrees.push(dim + stalks[t].degrees[i]);
                let mut col: Vec<(usize, Rat)> = stalks[t].d[i].iter().map(|(j, x)| (offsets[t] + j, x * &sign)).collect();
                for &(u, inc) in cells.cofacets(t) {
                    let inc = Rat::from_integer(i64::from(inc).into());
                    for (j, x) in &maps[&u].cols[i] {
                        col.push((offsets[u] + j, x * &inc));
                    }
                }
                d.push(normalize(col));
            }
        }
        let complex = Cochain { degrees, d };
        debug_assert!(complex.is_complex());
        Ok(Total { complex, offsets, cells })
    }

    fn fiber(&self, x: &[Rat]) -> Result<Total, SheafError> {
        let cells = CellComplex::new(self.n, self.fiber_planes(x), self.sides(0));
        self.total(cells)
    }

    /// Slab over the segment `x0 + τ (x1 - x0)`, coordinates `(τ, y)`.
    fn slab(&self, x0: &[Rat], x1: &[Rat]) -> Result<Total, SheafError> {
        let n = self.n;
        let w: Vec<Rat> = x1.iter().zip(x0).map(|(a, b)| a - b).collect();
        let lift = |h: &Hyperplane, tau: Rat| {
            let mut normal = vec![tau];
            normal.extend(h.normal.iter().cloned().map(Rat::from));
            Hyperplane::from_rational(&normal, &h.offset)
        };
        let base = self.fiber_planes(x0);
        let mut planes = Vec::with_capacity(base.len() + 2);
        for (k, h) in base.iter().enumerate() {
            // F walls and the F box do not move; G walls and the G box move with x(τ)
            let moving = (k >= self.kf && k < self.kf + self.kg) || k >= self.kf + self.kg + 2 * n;
            let tau = if moving { -dot_ir(&h.normal, &w) } else { Rat::zero() };
            planes.push(lift(h, tau));
        }
        let mut e0 = vec![Rat::one()];
        e0.extend(vec![Rat::zero(); n]);
        planes.push(Hyperplane::from_rational(&e0, &Rat::zero()));
        let mut e1 = vec![-Rat::one()];
        e1.extend(vec![Rat::zero(); n]);
        planes.push(Hyperplane::from_rational(&e1, &Rat::one()));
        let cells = CellComplex::new(n + 1, planes, self.sides(2));
        self.total(cells)
    }
}

fn meets_rect(h: &Hyperplane, lo: &[Rat], hi: &[Rat]) -> bool {
    let n = lo.len();
    let (mut pos, mut neg) = (false, false);
    for corner in 0..(1usize << n) {
        let x: Vec<Rat> = (0..n).map(|i| if corner >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() }).collect();
        let v = h.value(&x);
        pos |= v.is_positive();
        neg |= v.is_negative();
    }
    pos && neg
}

/// Restriction of slab cochains to the cells of a fiber with matching sign prefix.
fn restriction(slab: &Total, fiber: &Total, tau_index: usize) -> ChainMap {
    let width = fiber.cells.planes().len();
    let mut cols = vec![Vec::new(); slab.complex.dim()];
    for (t, cell) in slab.cells.cells().iter().enumerate() {
        if cell.signs[tau_index] != 0 {
            continue;
        }
        let target = fiber.cells.find(&cell.signs[..width]).expect("end face is a fiber cell");
        let dim = slab.offsets.get(t + 1).copied().unwrap_or(slab.complex.dim()) - slab.offsets[t];
        for i in 0..dim {
            cols[slab.offsets[t] + i] = vec![(fiber.offsets[target] + i, Rat::one())];
        }
    }
    ChainMap { cols }
}

fn induced(map: &ChainMap, source: &Cohomology, target: &Cohomology) -> QMatrix {
    map.on_cohomology(source, target)
}

/// `convolve`: `F * G` on the window `(-radius, radius)^n`.
pub fn convolve(f: &PosetSheaf, g: &PosetSheaf, radius: Rat) -> Result<Convolution, SheafError> {
    let n = f.strat().ambient();
    if g.strat().ambient() != n {
        return Err(SheafError::DimensionMismatch);
    }
    let (f, g) = (&*f.simplified(), &*g.simplified());
    let walls = sum_walls(f.strat().walls(), g.strat().walls(), n);
    let out = Arc::new(Stratification::new(n, radius, walls)?);
    let setup = Setup {
        f,
        g,
        n,
        kf: f.strat().walls().len(),
        kg: g.strat().walls().len(),
        tensors: Default::default(),
        f_compact: compactly_supported(f),
        g_compact: compactly_supported(g),
    };

    let fibers: Vec<(Total, Cohomology)> = (0..out.len())
        .into_par_iter()
        .map(|s| {
            let x = out.sample(s);
            setup.check_window(x)?;
            let t = setup.fiber(x)?;
            let h = t.complex.cohomology();
            Ok((t, h))
        })
        .collect::<Result<_, SheafError>>()?;

    let pairs = out.covering_pairs();
    let maps: Vec<((usize, usize), ChainMap)> = pairs
        .par_iter()
        .map(|&(s, t)| {
            let (hs, ht) = (&fibers[s].1, &fibers[t].1);
            if hs.dim() == 0 || ht.dim() == 0 {
                return Ok(((s, t), ChainMap::zero(hs.dim())));
            }
            let slab = setup.slab(out.sample(s), out.sample(t))?;
            let hslab = slab.complex.cohomology();
            let tau0 = fibers[s].0.cells.planes().len();
            let r0 = induced(&restriction(&slab, &fibers[s].0, tau0), &hslab, hs);
            let r1 = induced(&restriction(&slab, &fibers[t].0, tau0 + 1), &hslab, ht);
            let inv = r0
                .inverse()
                .map_err(|_| SheafError::WindowTooSmall(format!("slab over strata {s} -> {t} is not a product")))?;
            Ok(((s, t), dense_to_map(&r1.mul(&inv))))
        })
        .collect::<Result<_, SheafError>>()?;

    let stalks: Vec<Cochain> = fibers.iter().map(|(_, h)| Cochain::graded(h.degrees.clone())).collect();
    let degrees: BTreeSet<i32> = stalks.iter().flat_map(|s| s.degrees.iter().copied()).collect();
    let sheaf = PosetSheaf::from_covering(out, stalks, maps.into_iter().collect())?;
    let properness = if setup.f_compact {
        Properness::LeftCompact
    } else if setup.g_compact {
        Properness::RightCompact
    } else {
        Properness::Unchecked
    };
    Ok(Convolution { sheaf, exact: degrees.len() <= 1, properness })
}

/// `hom_star`: `Hom^*(F, G) = (-1)^* D(F) * G`, valid for compactly supported `F`.
pub fn hom_star(f: &PosetSheaf, g: &PosetSheaf, radius: Rat) -> Result<Convolution, SheafError> {
    if !compactly_supported(f) {
        return Err(SheafError::WindowTooSmall("the first argument must be compactly supported in its window".into()));
    }
    convolve(&f.verdier_dual().neg(), g, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ints, rat};

    #[test]
    fn sum_walls_in_one_dimension() {
        let f = vec![Hyperplane::new(ints(&[1]), rat(-1, 1))];
        let g = vec![Hyperplane::new(ints(&[1]), rat(2, 1)), Hyperplane::new(ints(&[-1]), rat(0, 1))];
        let w: BTreeSet<Hyperplane> = sum_walls(&f, &g, 1).iter().map(Hyperplane::canonical).collect();
        // points 1 + (-2) and 1 + 0
        let expected: BTreeSet<Hyperplane> =
            [Hyperplane::new(ints(&[1]), rat(1, 1)), Hyperplane::new(ints(&[1]), rat(-1, 1))].into_iter().collect();
        assert_eq!(w, expected);
    }
}
