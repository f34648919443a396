use std::sync::Arc;

use ccc_core::linalg::*;
use ccc_core::polyhedron::*;
use ccc_core::polysheaf::arrangement::*;
use ccc_core::polysheaf::*;

fn c(normal: &[i64], offset: i64, rel: Relation) -> Constraint {
    Constraint::new(ints(normal), rat(offset, 1), rel)
}

fn poly(cs: Vec<Constraint>) -> LCPolyhedron {
    LCPolyhedron::new(cs[0].normal.len(), cs)
}

fn strat_of(n: usize, r: i64, polys: &[LCPolyhedron]) -> Arc<Stratification> {
    Arc::new(refine_arrangement(n, polys, rat(r, 1)).unwrap())
}

fn dims(v: &[(i32, usize)]) -> std::collections::BTreeMap<i32, usize> {
    v.iter().copied().collect()
}

#[test]
fn single_point_gives_three_strata() {
    let p = poly(vec![c(&[1], 0, Relation::Eq)]);
    assert_eq!(strat_of(1, 1, &[p]).len(), 3);
}

#[test]
fn two_half_lines_give_five_strata() {
    let a = poly(vec![c(&[1], 0, Relation::Gt)]);
    let b = poly(vec![c(&[-1], 1, Relation::Ge)]);
    let s = strat_of(1, 2, &[a, b]);
    assert_eq!(s.len(), 5);
    // oracle: interval scan of (-2, 2) cut at 0 and 1
    let dims: Vec<usize> = (0..s.len()).map(|i| s.dim(i)).collect();
    assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 2);
}

#[test]
fn two_generic_lines_in_the_plane() {
    let a = poly(vec![c(&[1, 1], 0, Relation::Ge)]);
    let b = poly(vec![c(&[1, -2], 1, Relation::Ge)]);
    let s = strat_of(2, 5, &[a, b]);
    let count = |d: usize| (0..s.len()).filter(|&i| s.dim(i) == d).count();
    assert_eq!((count(2), count(1), count(0)), (4, 4, 1));
    assert!(s.complex().is_regular());
    assert!(s.is_faithful());
}

#[test]
fn three_dimensional_cell_complex_is_regular() {
    // a box cut by three generic planes
    let mut planes = vec![
        Hyperplane::new(ints(&[1, 1, 0]), rat(0, 1)),
        Hyperplane::new(ints(&[0, 1, -1]), rat(1, 2)),
        Hyperplane::new(ints(&[1, -2, 1]), rat(-1, 3)),
    ];
    let mut sides = vec![Side::Free; 3];
    for i in 0..3 {
        for s in [1i64, -1] {
            let mut e = ints(&[0, 0, 0]);
            e[i] = int(s);
            planes.push(Hyperplane::new(e, rat(2, 1)));
            sides.push(Side::NonNegative);
        }
    }
    let cx = CellComplex::new(3, planes, sides);
    assert!(cx.is_regular());
    // Euler characteristic of a closed ball
    let chi: i64 = cx.cells().iter().map(|c| if c.dim % 2 == 0 { 1 } else { -1 }).sum();
    assert_eq!(chi, 1);
}

#[test]
fn indicator_stalks() {
    let open = poly(vec![c(&[1], 0, Relation::Gt)]);
    let closed = poly(vec![c(&[1], 0, Relation::Ge)]);
    let s = strat_of(1, 1, std::slice::from_ref(&open));
    let origin = s.locate(&[rat(0, 1)]).unwrap();
    let right = s.locate(&[rat(1, 2)]).unwrap();
    let f = indicator_sheaf(&open, 0, &s).unwrap();
    assert!(f.stalk_dims(origin).is_empty());
    let g = indicator_sheaf(&closed, 0, &s).unwrap();
    assert_eq!(g.stalk_dims(origin), dims(&[(0, 1)]));
    assert_eq!(g.map(origin, right).cols, vec![vec![(0, rat(1, 1))]]);
    let whole = indicator_sheaf(&LCPolyhedron::whole(1), 2, &s).unwrap();
    assert!((0..s.len()).all(|i| whole.stalk_dims(i) == dims(&[(-2, 1)])));
}

#[test]
fn indicator_needs_adapted_stratification() {
    let s = strat_of(1, 1, &[]);
    let p = poly(vec![c(&[1], 0, Relation::Gt)]);
    assert_eq!(indicator_sheaf(&p, 0, &s).unwrap_err(), SheafError::NotAdapted(0));
}

#[test]
fn rhom_examples() {
    let open = poly(vec![c(&[1], 0, Relation::Gt)]);
    let point = poly(vec![c(&[1], 0, Relation::Eq)]);
    let s = strat_of(1, 2, &[open.clone(), point.clone()]);
    let f = indicator_sheaf(&open, 0, &s).unwrap();
    assert_eq!(rhom(&f, &f).unwrap(), dims(&[(0, 1)]));
    let z = indicator_sheaf(&point, 0, &s).unwrap();
    // i^! of an extension by zero: the punctured neighbourhood sees one side, so Q[-1]
    assert_eq!(rhom(&z, &f).unwrap(), dims(&[(1, 1)]));
    // no maps in degree 0, as sections over the star of the point vanish
    assert!(!rhom(&z, &f).unwrap().contains_key(&0));
    // sections of Q_{[0,inf)} supported at its endpoint propagate, so nothing survives
    let closed = poly(vec![c(&[1], 0, Relation::Ge)]);
    let g = indicator_sheaf(&closed, 0, &s).unwrap();
    assert!(rhom(&z, &g).unwrap().is_empty());
    assert_eq!(rhom(&z, &z).unwrap(), dims(&[(0, 1)]));
    let whole = indicator_sheaf(&LCPolyhedron::whole(1), 0, &s).unwrap();
    assert_eq!(rhom(&whole, &z).unwrap(), dims(&[(0, 1)]));
}

#[test]
fn rhom_of_plane_indicators() {
    // Hom(Q_{x>0,y>0}, Q_{x>0}) = Q; the quadrant is contained in the half plane
    let quad = poly(vec![c(&[1, 0], 0, Relation::Gt), c(&[0, 1], 0, Relation::Gt)]);
    let half = poly(vec![c(&[1, 0], 0, Relation::Gt)]);
    let s = strat_of(2, 3, &[quad.clone(), half.clone()]);
    let a = indicator_sheaf(&quad, 0, &s).unwrap();
    let b = indicator_sheaf(&half, 0, &s).unwrap();
    assert_eq!(rhom(&a, &b).unwrap(), dims(&[(0, 1)]));
    assert!(rhom(&b, &a).unwrap().is_empty());
    // costalk of the constant sheaf at a point of the plane: Q[-2]
    let origin = poly(vec![c(&[1, 0], 0, Relation::Eq), c(&[0, 1], 0, Relation::Eq)]);
    let s2 = strat_of(2, 3, std::slice::from_ref(&origin));
    let p = indicator_sheaf(&origin, 0, &s2).unwrap();
    let k = indicator_sheaf(&LCPolyhedron::whole(2), 0, &s2).unwrap();
    assert_eq!(rhom(&p, &k).unwrap(), dims(&[(2, 1)]));
}

#[test]
fn verdier_dual_of_open_half_line() {
    let open = poly(vec![c(&[1], 0, Relation::Gt)]);
    let s = strat_of(1, 2, std::slice::from_ref(&open));
    let f = indicator_sheaf(&open, 0, &s).unwrap();
    let closed = poly(vec![c(&[1], 0, Relation::Ge)]);
    let expected = indicator_sheaf(&closed, 1, &s).unwrap();
    assert_eq!(f.verdier_dual().profile(), expected.profile());
    // duality is an involution at the level of profiles
    assert_eq!(f.verdier_dual().verdier_dual().profile(), f.profile());
}

fn interval(lo: i64, hi: i64, lo_open: bool, hi_open: bool) -> LCPolyhedron {
    LCPolyhedron::boxed(&[rat(lo, 1)], &[rat(hi, 1)], &[lo_open], &[hi_open])
}

fn sheaf(p: &LCPolyhedron, shift: i32, r: i64) -> PosetSheaf {
    IndicatorComplex::indicator(p.clone(), shift).sheaf(rat(r, 1)).unwrap()
}

#[test]
fn unit_law_for_convolution() {
    let origin = poly(vec![c(&[1], 0, Relation::Eq)]);
    let unit = sheaf(&origin, 0, 4);
    for p in [interval(0, 1, true, false), interval(-1, 2, false, false), poly(vec![c(&[1], 0, Relation::Gt)])] {
        let f = sheaf(&p, 0, 6);
        let conv = convolve(&unit, &f, rat(3, 1)).unwrap();
        assert!(conv.exact);
        assert_eq!(conv.properness, Properness::LeftCompact);
        assert!(same_profile(&conv.sheaf, &f).unwrap(), "{p:?}");
    }
}

#[test]
fn constant_sheaf_kills_half_lines() {
    let line = sheaf(&LCPolyhedron::whole(1), 0, 4);
    let ray = sheaf(&poly(vec![c(&[1], 0, Relation::Ge)]), 0, 4);
    let conv = convolve(&line, &ray, rat(2, 1)).unwrap();
    assert!(conv.sheaf.is_acyclic());
}

#[test]
fn closed_intervals_convolve_to_closed_interval() {
    // fibers over (0, 2) are closed intervals and over the endpoints points: H_c = Q in degree 0
    let i = sheaf(&interval(0, 1, false, false), 0, 3);
    let conv = convolve(&i, &i, rat(3, 1)).unwrap();
    let expected = sheaf(&interval(0, 2, false, false), 0, 3);
    assert!(same_profile(&conv.sheaf, &expected).unwrap());
}

#[test]
fn open_intervals_convolve_with_a_shift() {
    // fibers are open intervals with H_c = Q[-1], and empty over the endpoints
    let i = sheaf(&interval(0, 1, true, true), 0, 3);
    let conv = convolve(&i, &i, rat(3, 1)).unwrap();
    let expected = sheaf(&interval(0, 2, true, true), -1, 3);
    assert!(same_profile(&conv.sheaf, &expected).unwrap());
}

#[test]
fn hom_star_of_half_open_interval() {
    let d = sheaf(&interval(0, 1, true, false), 0, 3);
    let g = sheaf(&poly(vec![c(&[1], 0, Relation::Gt)]), 0, 6);
    let h = hom_star(&d, &g, rat(3, 1)).unwrap();
    let expected = sheaf(&interval(-1, 0, true, false), 0, 3);
    assert!(h.exact);
    assert!(same_profile(&h.sheaf, &expected).unwrap());
}

#[test]
fn hom_star_of_half_open_square() {
    let d = LCPolyhedron::boxed(&[rat(0, 1), rat(0, 1)], &[rat(1, 1), rat(1, 1)], &[true, true], &[false, false]);
    let quad = poly(vec![c(&[1, 0], 0, Relation::Gt), c(&[0, 1], 0, Relation::Gt)]);
    let h = hom_star(&sheaf(&d, 0, 2), &sheaf(&quad, 0, 5), rat(2, 1)).unwrap();
    let expected = LCPolyhedron::boxed(&[rat(-1, 1), rat(-1, 1)], &[rat(0, 1), rat(0, 1)], &[true, true], &[false, false]);
    assert!(same_profile(&h.sheaf, &sheaf(&expected, 0, 2)).unwrap());
}

#[test]
fn convolution_needs_a_large_enough_window() {
    let i = sheaf(&interval(0, 1, false, false), 0, 2);
    let far = sheaf(&interval(-1, 1, false, false), 0, 2);
    assert!(matches!(convolve(&i, &far, rat(5, 1)), Err(SheafError::WindowTooSmall(_))));
}

fn sectors_at(f: &PosetSheaf, x: &[Rat]) -> Vec<(Vec<Int>, std::collections::BTreeMap<i32, usize>)> {
    let s = f.strat().locate(x).unwrap();
    let ss = microsupport(f).unwrap();
    ss.cells.into_iter().filter(|c| c.stratum == s).map(|c| (c.sector.sample, c.dims)).collect()
}

#[test]
fn microsupport_of_half_lines() {
    let open = sheaf(&poly(vec![c(&[1], 0, Relation::Gt)]), 0, 2);
    assert_eq!(sectors_at(&open, &[rat(0, 1)]), vec![(ints(&[-1]), dims(&[(1, 1)]))]);
    let closed = sheaf(&poly(vec![c(&[1], 0, Relation::Ge)]), 0, 2);
    assert_eq!(sectors_at(&closed, &[rat(0, 1)]), vec![(ints(&[1]), dims(&[(0, 1)]))]);
    // away from the endpoint only the zero section remains
    assert!(sectors_at(&open, &[rat(1, 1)]).is_empty());
}

#[test]
fn microsupport_of_constant_sheaf_is_the_zero_section() {
    let origin = poly(vec![c(&[1, 0], 0, Relation::Eq), c(&[0, 1], 0, Relation::Eq)]);
    let s = strat_of(2, 2, &[origin]);
    let k = indicator_sheaf(&LCPolyhedron::whole(2), 0, &s).unwrap();
    let ss = microsupport(&k).unwrap();
    assert!(ss.cells.is_empty());
    assert_eq!(ss.zero_section.len(), s.len());
}

#[test]
fn microsupport_of_open_quadrant_is_the_negative_quadrant() {
    let quad = poly(vec![c(&[1, 0], 0, Relation::Gt), c(&[0, 1], 0, Relation::Gt)]);
    let f = sheaf(&quad, 0, 2);
    let at_origin = sectors_at(&f, &[rat(0, 1), rat(0, 1)]);
    assert!(!at_origin.is_empty());
    for (xi, _) in &at_origin {
        assert!(xi.iter().all(|v| *v <= int(0)), "{xi:?}");
    }
    // the open negative quadrant itself carries the microstalk
    assert!(at_origin.iter().any(|(xi, _)| xi.iter().all(|v| *v < int(0))));
}

#[test]
fn torus_hom_of_the_affine_line_generator() {
    let open = IndicatorComplex::indicator(poly(vec![c(&[1], 0, Relation::Gt)]), 1);
    let t = torus_hom(&open, &open, 3).unwrap();
    for m in -3..=3i64 {
        let expected = if m >= 0 { dims(&[(0, 1)]) } else { dims(&[]) };
        assert_eq!(t.at(&[m]), expected, "m = {m}");
    }
    assert!(!t.boundary_clear);
    assert!(t.window_stable);
    assert!(matches!(torus_hom_bounded(&open, &open, 3), Err(SheafError::Unstable(_))));
}

#[test]
fn torus_hom_of_disjoint_compacts_vanishes_far_away() {
    let a = IndicatorComplex::indicator(interval(0, 1, false, false), 0);
    let t = torus_hom_bounded(&a, &a, 3).unwrap();
    assert_eq!(t.at(&[0]), dims(&[(0, 1)]));
    // touching translates: a section of Q_[0,1] supported in [1, 2] dies near the contact point
    assert_eq!(t.dims.len(), 1);
    assert!(t.boundary_clear);
}
