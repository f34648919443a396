//! Cell decompositions of bounded regions cut by affine hyperplane arrangements.
//!
//! Cells are the relatively open pieces on which every hyperplane has constant sign; they
//! are identified by their sign vectors. Each cell carries an exact sample point and a
//! canonical orientation (the reduced row echelon basis of its direction space).

use std::collections::{BTreeSet, HashMap};

use num::{One, Signed, Zero};

use crate::linalg::{dot_ir, primitive_rat, sign_normalize, Int, QMatrix, Rat};

/// `normal . x + offset = 0`, with the positive side where the functional is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<Int>,
    pub offset: Rat,
}

impl Hyperplane {
    pub fn new(normal: Vec<Int>, offset: Rat) -> Self {
        Self { normal, offset }
    }

    /// Positive rescaling of a rational functional to a primitive integer normal.
    pub fn from_rational(normal: &[Rat], offset: &Rat) -> Self {
        let ints = primitive_rat(normal);
        let k = normal.iter().zip(&ints).find(|(a, _)| !a.is_zero()).map(|(a, b)| Rat::from(b.clone()) / a).unwrap_or_else(Rat::one);
        Self { normal: ints, offset: offset * k }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        dot_ir(&self.normal, x) + &self.offset
    }

    pub fn sign(&self, x: &[Rat]) -> i8 {
        sign_of(&self.value(x))
    }

    pub fn is_degenerate(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    /// Representative of the zero set independent of scaling and side.
    pub fn canonical(&self) -> Self {
        let rn: Vec<Rat> = self.normal.iter().cloned().map(Rat::from).collect();
        let h = Self::from_rational(&rn, &self.offset);
        let s = sign_normalize(&h.normal);
        if s == h.normal {
            h
        } else {
            Self { normal: s, offset: -h.offset }
        }
    }

    /// The zero set moved by `v`.
    pub fn translate(&self, v: &[Rat]) -> Self {
        Self { normal: self.normal.clone(), offset: &self.offset - dot_ir(&self.normal, v) }
    }

    /// The zero set reflected through the origin.
    pub fn neg(&self) -> Self {
        Self { normal: self.normal.iter().map(|x| -x).collect(), offset: self.offset.clone() }
    }

    fn row(&self) -> Vec<Rat> {
        self.normal.iter().cloned().map(Rat::from).chain(std::iter::once(self.offset.clone())).collect()
    }
}

pub(crate) fn sign_of(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Constraint imposed by a hyperplane on the region to decompose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Free,
    Positive,
    NonNegative,
}

impl Side {
    fn closed_ok(self, s: i8) -> bool {
        self == Side::Free || s >= 0
    }

    fn ok(self, s: i8) -> bool {
        match self {
            Side::Free => true,
            Side::Positive => s > 0,
            Side::NonNegative => s >= 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub signs: Vec<i8>,
    pub dim: usize,
    pub sample: Vec<Rat>,
    /// Reduced row echelon basis of the direction space.
    pub basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Cell {
    fn coords(&self, v: &[Rat]) -> Vec<Rat> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }
}

/// Cell decomposition of `{x : side_i(planes_i(x))}`; the region must be bounded.
#[derive(Clone, Debug)]
pub struct CellComplex {
    n: usize,
    planes: Vec<Hyperplane>,
    cells: Vec<Cell>,
    index: HashMap<Vec<i8>, usize>,
    facets: Vec<Vec<(usize, i8)>>,
    cofacets: Vec<Vec<(usize, i8)>>,
    touches_boundary: Vec<bool>,
}

struct Found {
    dim: usize,
    sample: Vec<Rat>,
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

struct Enumerator<'a> {
    n: usize,
    planes: &'a [Hyperplane],
    rows: Vec<Vec<Rat>>,
    sides: &'a [Side],
    memo: HashMap<Vec<Vec<Rat>>, Vec<Vec<Rat>>>,
    found: HashMap<Vec<i8>, Found>,
    pairs: BTreeSet<(Vec<i8>, Vec<i8>)>,
}

impl Enumerator<'_> {
    fn signs(&self, x: &[Rat]) -> Vec<i8> {
        self.planes.iter().map(|h| h.sign(x)).collect()
    }

    fn closed_ok(&self, s: &[i8]) -> bool {
        s.iter().zip(self.sides).all(|(x, side)| side.closed_ok(*x))
    }

    /// Samples of the top cells of the flat `{A x + b = 0}` (rows in reduced echelon form)
    /// that meet the closed region.
    fn visit(&mut self, eqs: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
        if let Some(s) = self.memo.get(&eqs) {
            return s.clone();
        }
        let n = self.n;
        let a = QMatrix::from_rows(&eqs.iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>(), n);
        let b: Vec<Rat> = eqs.iter().map(|r| -r[n].clone()).collect();
        let out = match a.solve(&b) {
            None => Vec::new(),
            Some(p0) => self.visit_flat(&eqs, &a, p0),
        };
        self.memo.insert(eqs, out.clone());
        out
    }

    fn visit_flat(&mut self, eqs: &[Vec<Rat>], a: &QMatrix, p0: Vec<Rat>) -> Vec<Vec<Rat>> {
        let n = self.n;
        let kernel = if eqs.is_empty() { QMatrix::identity(n).to_rows() } else { a.kernel() };
        let (basis, pivots) = if kernel.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let (r, piv) = QMatrix::from_rows(&kernel, n).rref();
            (r.to_rows()[..piv.len()].to_vec(), piv)
        };
        let k = basis.len();
        if k == 0 {
            let s = self.signs(&p0);
            if !self.closed_ok(&s) {
                return Vec::new();
            }
            self.found.entry(s).or_insert(Found { dim: 0, sample: p0.clone(), basis: Vec::new(), pivots: Vec::new() });
            return vec![p0];
        }
        let crossing: Vec<usize> = (0..self.planes.len())
            .filter(|&i| basis.iter().any(|v| !dot_ir(&self.planes[i].normal, v).is_zero()))
            .collect();
        let u = generic_direction(&basis, crossing.iter().map(|&i| &self.planes[i].normal));
        let mut out: Vec<Vec<Rat>> = Vec::new();
        let mut seen: BTreeSet<Vec<i8>> = BTreeSet::new();
        for &i in &crossing {
            let mut rows = eqs.to_vec();
            rows.push(self.rows[i].clone());
            let child = canonical_rows(&rows, n + 1);
            for p in self.visit(child) {
                let mut delta: Option<Rat> = None;
                for &j in &crossing {
                    let v = self.planes[j].value(&p);
                    if v.is_zero() {
                        continue;
                    }
                    let t = (v / dot_ir(&self.planes[j].normal, &u)).abs();
                    delta = Some(match delta {
                        Some(d) if d <= t => d,
                        _ => t,
                    });
                }
                let delta = delta.map(|d| d / Rat::from_integer(2.into())).unwrap_or_else(Rat::one);
                let face = self.signs(&p);
                for dir in [1i64, -1] {
                    let q: Vec<Rat> = p.iter().zip(&u).map(|(x, y)| x + y * &delta * Rat::from_integer(dir.into())).collect();
                    let s = self.signs(&q);
                    if !self.closed_ok(&s) {
                        continue;
                    }
                    self.pairs.insert((face.clone(), s.clone()));
                    if seen.insert(s.clone()) {
                        self.found.entry(s).or_insert(Found { dim: k, sample: q.clone(), basis: basis.clone(), pivots: pivots.clone() });
                        out.push(q);
                    }
                }
            }
        }
        out
    }
}

fn canonical_rows(rows: &[Vec<Rat>], width: usize) -> Vec<Vec<Rat>> {
    let (r, piv) = QMatrix::from_rows(rows, width).rref();
    r.to_rows()[..piv.len()].to_vec()
}

/// A direction in the span of `basis` on which none of the given functionals vanishes.
fn generic_direction<'a>(basis: &[Vec<Rat>], normals: impl Iterator<Item = &'a Vec<Int>> + Clone) -> Vec<Rat> {
    let n = basis[0].len();
    for t in 1i64.. {
        let mut u = vec![Rat::zero(); n];
        let mut c = Rat::one();
        for b in basis {
            for (x, y) in u.iter_mut().zip(b) {
                *x += y * &c;
            }
            c *= Rat::from_integer(t.into());
        }
        if normals.clone().all(|a| !dot_ir(a, &u).is_zero()) {
            return u;
        }
    }
    unreachable!()
}

impl CellComplex {
    pub fn new(n: usize, planes: Vec<Hyperplane>, sides: Vec<Side>) -> Self {
        assert_eq!(planes.len(), sides.len());
        let rows = planes.iter().map(Hyperplane::row).collect();
        let mut en = Enumerator { n, planes: &planes, rows, sides: &sides, memo: HashMap::new(), found: HashMap::new(), pairs: BTreeSet::new() };
        let _ = en.visit(Vec::new());
        let Enumerator { found, pairs, .. } = en;

        let mut all: Vec<(Vec<i8>, Found)> = found.into_iter().collect();
        all.sort_by(|a, b| (a.1.dim, &a.0).cmp(&(b.1.dim, &b.0)));
        let kept = |s: &[i8]| s.iter().zip(&sides).all(|(x, side)| side.ok(*x));

        // boundary cells and everything above them
        let mut above_boundary: BTreeSet<Vec<i8>> = all.iter().filter(|(s, _)| !kept(s)).map(|(s, _)| s.clone()).collect();
        for (f, t) in &pairs {
            if above_boundary.contains(f) {
                above_boundary.insert(t.clone());
            }
        }
        // face chains have length at most n
        for _ in 0..n {
            for (f, t) in &pairs {
                if above_boundary.contains(f) {
                    above_boundary.insert(t.clone());
                }
            }
        }

        let mut cells = Vec::new();
        let mut index = HashMap::new();
        let mut touches_boundary = Vec::new();
        for (s, f) in all {
            if kept(&s) {
                index.insert(s.clone(), cells.len());
                touches_boundary.push(above_boundary.contains(&s));
                cells.push(Cell { signs: s, dim: f.dim, sample: f.sample, basis: f.basis, pivots: f.pivots });
            }
        }
        let mut facets = vec![Vec::new(); cells.len()];
        let mut cofacets = vec![Vec::new(); cells.len()];
        for (f, t) in &pairs {
            let (Some(&fi), Some(&ti)) = (index.get(f), index.get(t)) else { continue };
            let top = &cells[ti];
            let face = &cells[fi];
            let outward: Vec<Rat> = face.sample.iter().zip(&top.sample).map(|(a, b)| a - b).collect();
            let mut rows = vec![top.coords(&outward)];
            rows.extend(face.basis.iter().map(|b| top.coords(b)));
            let det = QMatrix::from_rows(&rows, top.dim).det();
            let sign = sign_of(&det);
            debug_assert!(sign != 0);
            facets[ti].push((fi, sign));
            cofacets[fi].push((ti, sign));
        }
        for v in facets.iter_mut().chain(cofacets.iter_mut()) {
            v.sort();
        }
        Self { n, planes, cells, index, facets, cofacets, touches_boundary }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn planes(&self) -> &[Hyperplane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn find(&self, signs: &[i8]) -> Option<usize> {
        self.index.get(signs).copied()
    }

    pub fn locate(&self, x: &[Rat]) -> Option<usize> {
        let s: Vec<i8> = self.planes.iter().map(|h| h.sign(x)).collect();
        self.find(&s)
    }

    /// Codimension-one faces with incidence numbers.
    pub fn facets(&self, i: usize) -> &[(usize, i8)] {
        &self.facets[i]
    }

    pub fn cofacets(&self, i: usize) -> &[(usize, i8)] {
        &self.cofacets[i]
    }

    /// `a` lies in the closure of `b`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.cells[a].signs.iter().zip(&self.cells[b].signs).all(|(x, y)| *x == 0 || x == y)
    }

    /// All cells `>= a`, in index order.
    pub fn star(&self, a: usize) -> Vec<usize> {
        let mut seen = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(c) = stack.pop() {
            for &(t, _) in &self.cofacets[c] {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Whether the closure of the cell meets the boundary of the region.
    pub fn touches_boundary(&self, i: usize) -> bool {
        self.touches_boundary[i]
    }

    /// Incidence matrix check: `d^2 = 0` for the cellular cochain complex.
    pub fn is_regular(&self) -> bool {
        (0..self.len()).all(|c| {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(t, s) in &self.cofacets[c] {
                for &(u, s2) in &self.cofacets[t] {
                    *acc.entry(u).or_insert(0) += i64::from(s) * i64::from(s2);
                }
            }
            acc.values().all(|v| *v == 0)
        })
    }
}

trait ToRows {
    fn to_rows(&self) -> Vec<Vec<Rat>>;
}

impl ToRows for QMatrix {
    fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.nrows()).map(|i| self.row(i).to_vec()).collect()
    }
}
