use num::{Integer, One, Signed, Zero};

use super::{frac, kernel_basis, Int, IntMatrix, LinalgError, QMatrix, Rat};

/// `rows[i] -= q * rows[r]`.
fn sub_row(rows: &mut [Vec<Int>], i: usize, r: usize, q: &Int) {
    let pivot = rows[r].clone();
    for (x, p) in rows[i].iter_mut().zip(&pivot) {
        *x -= q * p;
    }
}

/// Row Hermite normal form of the lattice spanned by `vectors`; zero rows dropped.
pub fn hermite_rows(vectors: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let mut rows: Vec<Vec<Int>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        while let Some(p) =
            (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
        {
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = &rows[i][c] / &rows[r][c];
                sub_row(&mut rows, i, r, &q);
                done &= rows[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let p = rows[r][c].clone();
            for i in 0..r {
                let q = rows[i][c].div_floor(&p);
                if !q.is_zero() {
                    sub_row(&mut rows, i, r, &q);
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows.retain(|v| v.iter().any(|x| !x.is_zero()));
    rows
}

/// Full-rank lattice in Q^n: the rows of `basis` divided by `denom`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalLattice {
    denom: Int,
    basis: Vec<Vec<Int>>,
}

impl RationalLattice {
    pub fn standard(n: usize) -> Self {
        Self { denom: Int::one(), basis: IntMatrix::identity(n).to_rows() }
    }

    /// Lattice spanned by rational generators; errors unless the span has full rank.
    pub fn from_generators(gens: &[Vec<Rat>], n: usize) -> Result<Self, LinalgError> {
        let denom = gens.iter().flatten().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: Vec<Vec<Int>> = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * Rat::from_integer(denom.clone())).to_integer()).collect())
            .collect();
        let basis = hermite_rows(&scaled, n);
        if basis.len() != n {
            return Err(LinalgError::NotFullRank);
        }
        let g = basis.iter().flatten().fold(denom.clone(), |acc, x| acc.gcd(x));
        Ok(Self { denom: &denom / &g, basis: basis.iter().map(|r| r.iter().map(|x| x / &g).collect()).collect() })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn denom(&self) -> &Int {
        &self.denom
    }

    pub fn basis(&self) -> Vec<Vec<Rat>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| Rat::new(x.clone(), self.denom.clone())).collect())
            .collect()
    }

    /// Basis as the columns of a rational matrix.
    pub fn basis_matrix(&self) -> QMatrix {
        let b = self.basis();
        QMatrix::from_fn(self.dim(), self.dim(), |i, j| b[j][i].clone())
    }

    /// Coordinates of `x` in the lattice basis (rational in general).
    pub fn coordinates(&self, x: &[Rat]) -> Vec<Rat> {
        self.basis_matrix().solve(x).expect("full-rank basis")
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.coordinates(x).iter().all(|c| c.is_integer())
    }

    pub fn contains_lattice(&self, other: &RationalLattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    /// Index of `Z^n` in this lattice; requires the lattice to contain `Z^n`.
    pub fn index_over_integers(&self) -> Int {
        let det = self.basis_matrix().det();
        (Rat::one() / det).abs().to_integer()
    }

    /// Representatives of `self / Z^n` in `[0,1)^n`, sorted.
    pub fn coset_representatives(&self) -> Vec<Vec<Rat>> {
        let n = self.dim();
        let zero = vec![Rat::zero(); n];
        let mut reps = vec![zero];
        let gens: Vec<Vec<Rat>> = self.basis().iter().map(|b| b.iter().map(frac).collect()).collect();
        let mut frontier = reps.clone();
        while let Some(p) = frontier.pop() {
            for g in &gens {
                let q: Vec<Rat> = p.iter().zip(g).map(|(a, b)| frac(&(a + b))).collect();
                if !reps.contains(&q) {
                    reps.push(q.clone());
                    frontier.push(q);
                }
            }
        }
        reps.sort();
        reps
    }
}

/// `{ x in Q^n : a x in sub }` where `a` is `k x n` and `sub` lists a basis of a sublattice of `Z^k`.
pub fn preimage_lattice(a: &IntMatrix, sub: &[Vec<Int>]) -> Result<RationalLattice, LinalgError> {
    let (k, n) = (a.nrows(), a.ncols());
    if sub.iter().any(|s| s.len() != k) {
        return Err(LinalgError::Shape("sublattice vectors have wrong length".into()));
    }
    if a.rank() < n {
        return Err(LinalgError::NotFullRank);
    }
    let s = IntMatrix::from_columns(sub, k);
    // y with s*y in the rational image of a
    let left = kernel_basis(&a.transpose());
    let ys: Vec<Vec<Int>> = if left.is_empty() {
        IntMatrix::identity(sub.len()).to_rows()
    } else {
        let p = IntMatrix::from_int_rows(&left, k);
        kernel_basis(&p.mul(&s)?)
    };
    let aq = a.to_q();
    let gens: Vec<Vec<Rat>> = ys
        .iter()
        .map(|y| {
            let b: Vec<Rat> = s.apply(y).into_iter().map(Rat::from_integer).collect();
            aq.solve(&b).expect("vector lies in the image")
        })
        .collect();
    RationalLattice::from_generators(&gens, n)
}
