//! Finite cochain complexes of rational vector spaces with sparse differentials, their
//! cohomology with explicit representatives, and chain maps.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};

use crate::linalg::{QMatrix, Rat};

/// Sparse vector: sorted `(index, nonzero value)` pairs.
pub type SVec = Vec<(usize, Rat)>;

/// `a + c * b`.
pub fn axpy(a: &[(usize, Rat)], b: &[(usize, Rat)], c: &Rat) -> SVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, &b[j].1 * c));
            j += 1;
        } else {
            let v = &a[i].1 + &b[j].1 * c;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sorts and merges duplicate indices, dropping zeros.
pub fn normalize(mut v: Vec<(usize, Rat)>) -> SVec {
    v.sort_by_key(|e| e.0);
    let mut out: SVec = Vec::with_capacity(v.len());
    for (j, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += x,
            _ => out.push((j, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

fn scale(v: &[(usize, Rat)], c: &Rat) -> SVec {
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// Applies a linear map given by sparse columns.
pub fn apply(cols: &[SVec], v: &[(usize, Rat)]) -> SVec {
    let mut acc: SVec = Vec::new();
    for (j, x) in v {
        acc = axpy(&acc, &cols[*j], x);
    }
    acc
}

/// Gaussian elimination on leading indices with a tag carried along each stored vector.
#[derive(Debug, Default, Clone)]
struct Echelon {
    rows: BTreeMap<usize, (SVec, SVec)>,
}

impl Echelon {
    /// Returns `(residual, acc)` with `v = residual + Σ c_i stored_i` and `acc = Σ c_i tag_i`.
    /// Stops as soon as the leading index of the residual is not a pivot.
    fn reduce(&self, mut v: SVec) -> (SVec, SVec) {
        let mut acc: SVec = Vec::new();
        while let Some((lead, c)) = v.first().cloned() {
            match self.rows.get(&lead) {
                Some((row, tag)) => {
                    v = axpy(&v, row, &(-c.clone()));
                    acc = axpy(&acc, tag, &c);
                }
                None => break,
            }
        }
        (v, acc)
    }

    /// Stores a nonzero residual, normalized to a leading one.
    fn insert(&mut self, v: SVec, tag: SVec) {
        let inv = v[0].1.recip();
        let lead = v[0].0;
        self.rows.insert(lead, (scale(&v, &inv), scale(&tag, &inv)));
    }
}

/// Kernel basis of the map with the given sparse columns, restricted to `domain` indices.
fn kernel(cols: &[SVec], domain: &[usize]) -> Vec<SVec> {
    let mut ech = Echelon::default();
    let mut out = Vec::new();
    for &j in domain {
        let (res, acc) = ech.reduce(cols[j].clone());
        let tag = axpy(&[(j, Rat::one())], &acc, &-Rat::one());
        if res.is_empty() {
            out.push(normalize(tag));
        } else {
            ech.insert(res, tag);
        }
    }
    out
}

fn rank_of(vectors: impl IntoIterator<Item = SVec>) -> usize {
    let mut ech = Echelon::default();
    let mut r = 0;
    for v in vectors {
        let (res, _) = ech.reduce(v);
        if !res.is_empty() {
            ech.insert(res, Vec::new());
            r += 1;
        }
    }
    r
}

/// A finite cochain complex; basis vector `j` sits in degree `degrees[j]` and `d[j]` is its image.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cochain {
    pub degrees: Vec<i32>,
    pub d: Vec<SVec>,
}

impl Cochain {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `Q^dim` in a single degree.
    pub fn concentrated(degree: i32, dim: usize) -> Self {
        Self { degrees: vec![degree; dim], d: vec![Vec::new(); dim] }
    }

    /// Graded space with zero differential.
    pub fn graded(degrees: Vec<i32>) -> Self {
        let d = vec![Vec::new(); degrees.len()];
        Self { degrees, d }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn is_complex(&self) -> bool {
        self.d.iter().enumerate().all(|(j, col)| {
            col.iter().all(|(i, _)| self.degrees[*i] == self.degrees[j] + 1) && apply(&self.d, col).is_empty()
        })
    }

    fn indices_in(&self, degree: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.degrees[j] == degree).collect()
    }

    fn degree_set(&self) -> Vec<i32> {
        let mut ds: Vec<i32> = self.degrees.clone();
        ds.sort();
        ds.dedup();
        ds
    }

    /// Nonzero cohomology dimensions by degree.
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let mut ranks: HashMap<i32, usize> = HashMap::new();
        for q in self.degree_set() {
            let idx = self.indices_in(q);
            ranks.insert(q, rank_of(idx.iter().map(|&j| self.d[j].clone())));
        }
        let mut out = BTreeMap::new();
        for q in self.degree_set() {
            let n = self.indices_in(q).len();
            let h = n - ranks[&q] - ranks.get(&(q - 1)).copied().unwrap_or(0);
            if h > 0 {
                out.insert(q, h);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_dims().is_empty()
    }

    /// Cohomology with representatives and a reducer for cocycles.
    pub fn cohomology(&self) -> Cohomology {
        let mut degrees = Vec::new();
        let mut reps = Vec::new();
        let mut reducers = BTreeMap::new();
        for q in self.degree_set() {
            let idx = self.indices_in(q);
            let mut ech = Echelon::default();
            for &j in &self.indices_in(q - 1) {
                let (res, acc) = ech.reduce(self.d[j].clone());
                if !res.is_empty() {
                    let tag = axpy(&[], &acc, &-Rat::one());
                    ech.insert(res, tag);
                }
            }
            for z in kernel(&self.d, &idx) {
                let (res, acc) = ech.reduce(z.clone());
                if !res.is_empty() {
                    let h = reps.len();
                    let tag = axpy(&[(h, Rat::one())], &acc, &-Rat::one());
                    ech.insert(res, tag);
                    reps.push(z);
                    degrees.push(q);
                }
            }
            reducers.insert(q, ech);
        }
        Cohomology { degrees, reps, reducers }
    }

    /// Direct sum; the second summand's indices are shifted by `self.dim()`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let off = self.dim();
        let mut out = self.clone();
        out.degrees.extend(other.degrees.iter().copied());
        out.d.extend(other.d.iter().map(|c| c.iter().map(|(i, x)| (i + off, x.clone())).collect()));
        out
    }

    /// `C[k]`: degrees decrease by `k`, differential sign `(-1)^k`.
    pub fn shift(&self, k: i32) -> Self {
        let sign = if k.rem_euclid(2) == 0 { Rat::one() } else { -Rat::one() };
        Self { degrees: self.degrees.iter().map(|q| q - k).collect(), d: self.d.iter().map(|c| scale(c, &sign)).collect() }
    }

    /// Linear dual: degrees negated, differential transposed.
    pub fn dual(&self) -> Self {
        let mut cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); self.dim()];
        for (j, col) in self.d.iter().enumerate() {
            for (i, x) in col {
                cols[*i].push((j, x.clone()));
            }
        }
        Self { degrees: self.degrees.iter().map(|q| -q).collect(), d: cols.into_iter().map(normalize).collect() }
    }

    /// Tensor product with the Koszul sign; basis `(i, j)` has index `i * other.dim() + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let m = other.dim();
        let mut degrees = Vec::with_capacity(self.dim() * m);
        let mut d = Vec::with_capacity(self.dim() * m);
        for i in 0..self.dim() {
            for j in 0..m {
                degrees.push(self.degrees[i] + other.degrees[j]);
                let mut col: Vec<(usize, Rat)> = self.d[i].iter().map(|(a, x)| (a * m + j, x.clone())).collect();
                let sign = if self.degrees[i].rem_euclid(2) == 0 { Rat::one() } else { -Rat::one() };
                col.extend(other.d[j].iter().map(|(b, x)| (i * m + b, x * &sign)));
                d.push(normalize(col));
            }
        }
        Self { degrees, d }
    }
}

/// Cohomology of a [`Cochain`]: representative cocycles and coordinates of arbitrary cocycles.
#[derive(Debug, Clone, Default)]
pub struct Cohomology {
    pub degrees: Vec<i32>,
    pub reps: Vec<SVec>,
    reducers: BTreeMap<i32, Echelon>,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for q in &self.degrees {
            *out.entry(*q).or_insert(0) += 1;
        }
        out
    }

    /// Coordinates of the class of a cocycle of the given degree.
    pub fn coordinates(&self, degree: i32, z: &[(usize, Rat)]) -> SVec {
        let Some(ech) = self.reducers.get(&degree) else {
            debug_assert!(z.is_empty());
            return Vec::new();
        };
        let (res, acc) = ech.reduce(z.to_vec());
        assert!(res.is_empty(), "not a cocycle");
        acc
    }
}

/// Degree-preserving linear map given by sparse columns, one per source basis vector.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainMap {
    pub cols: Vec<SVec>,
}

impl ChainMap {
    pub fn zero(source_dim: usize) -> Self {
        Self { cols: vec![Vec::new(); source_dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self { cols: (0..dim).map(|i| vec![(i, Rat::one())]).collect() }
    }

    pub fn apply(&self, v: &[(usize, Rat)]) -> SVec {
        apply(&self.cols, v)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Self {
        Self { cols: self.cols.iter().map(|c| other.apply(c)).collect() }
    }

    pub fn is_chain_map(&self, source: &Cochain, target: &Cochain) -> bool {
        (0..source.dim()).all(|j| {
            self.cols[j].iter().all(|(i, _)| target.degrees[*i] == source.degrees[j])
                && normalize(apply(&target.d, &self.cols[j]).into_iter().chain(self.apply(&source.d[j]).into_iter().map(|(i, x)| (i, -x))).collect())
                    .is_empty()
        })
    }

    pub fn tensor(&self, other: &Self, other_target_dim: usize) -> Self {
        let mut cols = Vec::with_capacity(self.cols.len() * other.cols.len());
        for a in &self.cols {
            for b in &other.cols {
                let mut col = Vec::with_capacity(a.len() * b.len());
                for (i, x) in a {
                    for (j, y) in b {
                        col.push((i * other_target_dim + j, x * y));
                    }
                }
                cols.push(normalize(col));
            }
        }
        Self { cols }
    }

    /// Direct sum of maps between direct sums.
    pub fn direct_sum(&self, other: &Self, self_target_dim: usize) -> Self {
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().map(|c| c.iter().map(|(i, x)| (i + self_target_dim, x.clone())).collect()));
        Self { cols }
    }

    pub fn dual(&self, target_dim: usize) -> Self {
        let mut cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); target_dim];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, x) in col {
                cols[*i].push((j, x.clone()));
            }
        }
        Self { cols: cols.into_iter().map(normalize).collect() }
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        Self { cols: self.cols.iter().map(|col| scale(col, c)).collect() }
    }

    /// Matrix of the induced map on cohomology.
    pub fn on_cohomology(&self, source: &Cohomology, target: &Cohomology) -> QMatrix {
        let mut m = QMatrix::zeros(target.dim(), source.dim());
        for (k, rep) in source.reps.iter().enumerate() {
            for (i, x) in target.coordinates(source.degrees[k], &self.apply(rep)) {
                m.set(i, k, x);
            }
        }
        m
    }
}

/// Rank of the induced map on cohomology, split by degree.
pub fn ranks_by_degree(map: &QMatrix, source: &Cohomology, target: &Cohomology) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for (q, _) in source.dims() {
        let rows: Vec<usize> = (0..target.dim()).filter(|&i| target.degrees[i] == q).collect();
        let cols: Vec<usize> = (0..source.dim()).filter(|&j| source.degrees[j] == q).collect();
        if rows.is_empty() {
            continue;
        }
        let r = map.submatrix(&rows, &cols).rank();
        if r > 0 {
            out.insert(q, r);
        }
    }
    out
}

/// Rank of a set of sparse vectors.
pub fn rank(vectors: &[SVec]) -> usize {
    rank_of(vectors.iter().cloned())
}
