use ccc_core::linalg::*;
use itertools::Itertools;
use num::{Integer, Signed, Zero};
use proptest::prelude::*;

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

#[test]
fn snf_small_examples() {
    let s = smith_normal_form(&m(&[&[1, 0], &[1, 2]]));
    assert_eq!(s.d, m(&[&[1, 0], &[0, 2]]));
    let s = smith_normal_form(&m(&[&[2, 3]]));
    assert_eq!(s.d, m(&[&[1, 0]]));
}

#[test]
fn kernel_of_row_vector() {
    assert_eq!(kernel_basis(&m(&[&[2, 3]])), vec![ints(&[3, -2])]);
}

#[test]
fn cokernel_of_two() {
    let c = cokernel(&m(&[&[2]]));
    assert_eq!(c.free_rank, 0);
    assert_eq!(c.torsion.factors(), &[int(2)]);
    assert_eq!(c.torsion.to_string(), "Z/2");
}

#[test]
fn preimage_of_doubling_is_half_lattice() {
    let l = preimage_lattice(&m(&[&[2]]), &[ints(&[1])]).unwrap();
    assert_eq!(l.basis(), vec![vec![rat(1, 2)]]);
}

#[test]
fn preimage_superlattice_has_index_two() {
    let l = preimage_lattice(&m(&[&[1, 1], &[0, 2]]), &[ints(&[1, 0]), ints(&[0, 1])]).unwrap();
    assert_eq!(l.index_over_integers(), int(2));
    assert!(l.contains(&[rat(-1, 2), rat(1, 2)]));
    assert!(!l.contains(&[rat(1, 2), rat(0, 1)]));
    assert_eq!(l.coset_representatives().len(), 2);
}

#[test]
fn preimage_rejects_rank_deficient_map() {
    assert_eq!(preimage_lattice(&m(&[&[1, 1]]), &[ints(&[1])]), Err(LinalgError::NotFullRank));
}

#[test]
fn hermite_is_canonical() {
    let a = hermite_rows(&[ints(&[2, 4]), ints(&[1, 3])], 2);
    let b = hermite_rows(&[ints(&[1, 3]), ints(&[3, 7])], 2);
    assert_eq!(a, b);
}

#[test]
fn rational_kernel_and_solve() {
    let q = m(&[&[1, 2, 3], &[2, 4, 6]]).to_q();
    assert_eq!(q.rank(), 1);
    assert_eq!(q.kernel().len(), 2);
    let x = q.solve(&[rat(6, 1), rat(12, 1)]).unwrap();
    assert_eq!(q.apply(&x), vec![rat(6, 1), rat(12, 1)]);
    assert!(q.solve(&[rat(1, 1), rat(1, 1)]).is_none());
}

#[test]
fn sparse_rank_matches_dense() {
    let mut s = SparseMatrix::new(3, 3);
    for (i, j, v) in [(0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 2, 1), (2, 0, 1), (2, 2, -1)] {
        s.add(i, j, rat(v, 1));
    }
    assert_eq!(s.rank(), s.to_dense().rank());
    assert_eq!(s.rank(), 2);
}

fn mat_strategy(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
            IntMatrix::from_rows(&v.chunks(c).map(|x| x.to_vec()).collect::<Vec<_>>())
        })
    })
}

proptest! {
    #[test]
    fn snf_is_a_valid_decomposition(a in mat_strategy(4)) {
        let s = smith_normal_form(&a);
        prop_assert!(s.u.is_unimodular());
        prop_assert!(s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|x| x.is_positive()));
        prop_assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        prop_assert_eq!(f.len(), a.rank());
    }

    #[test]
    fn kernel_is_complete_in_box(a in mat_strategy(3)) {
        let basis = kernel_basis(&a);
        let n = a.ncols();
        for b in &basis {
            prop_assert!(a.apply(b).iter().all(|x| x.is_zero()));
        }
        // every kernel vector in the box is an integer combination of the basis
        for v in (0..n).map(|_| -5i64..=5).multi_cartesian_product() {
            let v = ints(&v);
            if v.iter().all(|x| x.is_zero()) || !a.apply(&v).iter().all(|x| x.is_zero()) {
                continue;
            }
            let q = basis_matrix_cols(&basis, n).solve(&rats(&v));
            prop_assert!(q.is_some_and(|c| c.iter().all(|x| x.is_integer())), "vector {:?} outside span", v);
        }
    }

    #[test]
    fn cokernel_order_is_abs_det(a in mat_strategy(3).prop_filter("square", |a| a.nrows() == a.ncols())) {
        let d = a.det().unwrap();
        let c = cokernel(&a);
        if d.is_zero() {
            prop_assert!(c.free_rank > 0);
        } else {
            prop_assert_eq!(c.free_rank, 0);
            prop_assert_eq!(c.torsion.order(), d.abs());
        }
    }

    #[test]
    fn bareiss_matches_rational_det(a in mat_strategy(4).prop_filter("square", |a| a.nrows() == a.ncols())) {
        prop_assert_eq!(rat_int(&a.det().unwrap()), a.to_q().det());
    }
}

fn basis_matrix_cols(basis: &[Vec<num::BigInt>], n: usize) -> QMatrix {
    QMatrix::from_fn(n, basis.len(), |i, j| rat_int(&basis[j][i]))
}
