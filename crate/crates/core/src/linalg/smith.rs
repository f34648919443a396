use std::fmt;

use num::{Integer, One, Signed, Zero};

use super::{hermite_rows, Int, IntMatrix};

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal with a divisibility chain.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `d`, in order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.d.nrows().min(self.d.ncols()))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / d.get(t, t));
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / d.get(t, t));
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let p = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    d.add_row(t, i, &Int::one());
                    u.add_row(t, i, &Int::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(u: IntMatrix, d: IntMatrix, v: IntMatrix) -> SmithDecomposition {
    SmithDecomposition { u, d, v }
}

/// Basis of the saturated integer kernel, in Hermite form.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<Int>> {
    let s = smith_normal_form(a);
    let r = s.rank();
    let cols: Vec<Vec<Int>> = (r..a.ncols()).map(|j| s.v.col(j)).collect();
    hermite_rows(&cols, a.ncols())
}

/// Finite abelian group given by invariant factors, each at least 2.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteAbelianGroup {
    factors: Vec<Int>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Drops unit factors; the remaining list must already form a divisibility chain.
    pub fn from_invariant_factors(factors: impl IntoIterator<Item = Int>) -> Self {
        let factors: Vec<Int> = factors.into_iter().map(|x| x.abs()).filter(|x| !x.is_one()).collect();
        debug_assert!(factors.iter().all(|x| !x.is_zero()));
        debug_assert!(factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        Self { factors }
    }

    pub fn factors(&self) -> &[Int] {
        &self.factors
    }

    pub fn order(&self) -> Int {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| format!("Z/{x}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cokernel {
    pub torsion: FiniteAbelianGroup,
    pub free_rank: usize,
}

/// Cokernel of `a : Z^cols -> Z^rows`.
pub fn cokernel(a: &IntMatrix) -> Cokernel {
    let s = smith_normal_form(a);
    let f = s.invariant_factors();
    Cokernel { free_rank: a.nrows() - f.len(), torsion: FiniteAbelianGroup::from_invariant_factors(f) }
}
