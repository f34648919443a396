use std::collections::HashMap;

use num::{One, Zero};

use super::Rat;

/// Row-sparse rational matrix, used for the large bar and cellular complexes.
#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, Rat)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, v: Rat) {
        debug_assert!(i < self.nrows && j < self.ncols);
        if v.is_zero() {
            return;
        }
        self.rows[i].push((j, v));
    }

    fn normalized_row(&self, i: usize) -> Vec<(usize, Rat)> {
        let mut r = self.rows[i].clone();
        r.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Rat)> = Vec::with_capacity(r.len());
        for (j, v) in r {
            match out.last_mut() {
                Some(last) if last.0 == j => last.1 += v,
                _ => out.push((j, v)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        out
    }

    pub fn to_dense(&self) -> super::QMatrix {
        let mut m = super::QMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for (j, v) in self.normalized_row(i) {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Exact rank by incremental sparse elimination.
    pub fn rank(&self) -> usize {
        let mut pivots: HashMap<usize, Vec<(usize, Rat)>> = HashMap::new();
        let mut order: Vec<usize> = (0..self.nrows).collect();
        order.sort_by_key(|&i| self.rows[i].len());
        for i in order {
            let mut row = self.normalized_row(i);
            while let Some((lead, lv)) = row.first().cloned() {
                match pivots.get(&lead) {
                    Some(p) => row = axpy(&row, p, &(-lv)),
                    None => {
                        let inv = lv.recip();
                        let r: Vec<(usize, Rat)> = row.into_iter().map(|(j, v)| (j, v * &inv)).collect();
                        debug_assert!(r[0].1.is_one());
                        pivots.insert(lead, r);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

/// `a + c * b` for sorted sparse rows.
fn axpy(a: &[(usize, Rat)], b: &[(usize, Rat)], c: &Rat) -> Vec<(usize, Rat)> {
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
