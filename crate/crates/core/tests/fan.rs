use ccc_core::fan::*;
use ccc_core::fixtures;
use ccc_core::linalg::*;
use itertools::Itertools;
use proptest::prelude::*;

fn cone(gens: &[&[i64]]) -> Cone {
    Cone::from_i64(gens.first().map_or(2, |g| g.len()), gens).unwrap()
}

fn fan(rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    let r: Vec<Vec<Int>> = rays.iter().map(|r| ints(r)).collect();
    let c: Vec<Vec<usize>> = cones.iter().map(|c| c.to_vec()).collect();
    Fan::from_ray_cones(rays[0].len(), &r, &c).unwrap()
}

fn spec(n: usize, l: usize, beta: &[&[i64]], rays: &[&[i64]], cones: &[&[usize]]) -> StackyFanSpec {
    StackyFanSpec {
        name: "test".into(),
        format_version: 1,
        n_rank: n,
        l_rank: l,
        beta: beta.iter().map(|r| r.to_vec()).collect(),
        rays_hat: rays.iter().map(|r| r.to_vec()).collect(),
        cones_hat: cones.iter().map(|c| c.to_vec()).collect(),
    }
}

#[test]
fn dual_of_single_ray_is_half_plane() {
    let d = cone(&[&[1, 0]]).dual();
    assert_eq!(d.facets(), &[ints(&[1, 0])]);
    assert!(d.contains(&[rat(0, 1), rat(-5, 1)]));
    assert!(!d.contains(&[rat(-1, 1), rat(0, 1)]));
    assert!(!d.is_pointed());
}

#[test]
fn quadrant_is_self_dual() {
    let q = cone(&[&[1, 0], &[0, 1]]);
    assert_eq!(q.dual(), q);
}

#[test]
fn dual_of_a1_cone() {
    let d = cone(&[&[1, 0], &[1, 2]]).dual();
    assert_eq!(d, cone(&[&[0, 1], &[2, -1]]));
    let mut g = d.generators().to_vec();
    g.sort();
    assert_eq!(g, vec![ints(&[0, 1]), ints(&[2, -1])]);
}

#[test]
fn redundant_generators_are_dropped() {
    let c = cone(&[&[1, 0], &[1, 1], &[0, 1]]);
    assert_eq!(c.generators().len(), 2);
    let faces = c.faces();
    assert_eq!(faces.len(), 4);
}

#[test]
fn lower_dimensional_cone_has_equations() {
    let c = cone(&[&[1, 1, 0]]);
    assert_eq!(c.dim(), 1);
    assert_eq!(c.equations().len(), 2);
    assert_eq!(c.span_basis(), vec![ints(&[1, 1, 0])]);
}

#[test]
fn p2_is_smooth_and_complete() {
    let f = fan(&[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]);
    assert!(f.is_smooth());
    assert!(f.is_complete());
    assert_eq!(f.len(), 7);
    assert_eq!(f.maximal_cones().len(), 3);
}

#[test]
fn a1_cone_is_simplicial_not_smooth() {
    let f = fan(&[&[1, 0], &[1, 2]], &[&[0, 1]]);
    assert!(f.is_simplicial());
    assert!(!f.is_smooth());
    assert!(!f.is_complete());
}

#[test]
fn affine_line_is_smooth_not_complete() {
    let f = fan(&[&[1]], &[&[0]]);
    assert!(f.is_smooth());
    assert!(!f.is_complete());
}

#[test]
fn overlapping_cones_are_rejected() {
    let r: Vec<Vec<Int>> = [[1, 0], [0, 1], [1, 1], [-1, 0]].iter().map(|r| ints(r)).collect();
    let e = Fan::from_ray_cones(2, &r, &[vec![0, 1], vec![2, 3]]);
    assert!(matches!(e, Err(FanError::BadIntersection(_, _))));
}

#[test]
fn star_subdivision_of_quadrant() {
    let f = fan(&[&[1, 0], &[0, 1]], &[&[0, 1]]);
    let g = f.star_subdivision(f.find(&[0, 1]).unwrap()).unwrap();
    assert_eq!(g.rays()[2], ints(&[1, 1]));
    assert_eq!(g.maximal_cones().len(), 2);
    assert!(g.is_smooth());
}

#[test]
fn star_subdivision_of_a1_cone_gives_smooth_pieces() {
    let f = fan(&[&[1, 0], &[1, 2]], &[&[0, 1]]);
    let g = f.star_subdivision(f.find(&[0, 1]).unwrap()).unwrap();
    assert_eq!(g.rays()[2], ints(&[1, 1]));
    assert!(g.is_smooth());
    // same support on a grid of rational points
    let big = f.cone(f.find(&[0, 1]).unwrap()).cone.clone();
    for (x, y) in (-6..=6).cartesian_product(-6..=6) {
        let p = [rat(x, 2), rat(y, 3)];
        let inside = g.maximal_cones().iter().any(|&i| g.cone(i).cone.contains(&p));
        assert_eq!(inside, big.contains(&p));
    }
}

#[test]
fn star_subdivision_rejects_rays() {
    let f = fan(&[&[1]], &[&[0]]);
    assert_eq!(f.star_subdivision(1), Err(FanError::SubdivisionTooSmall(1)));
}

#[test]
fn condition1_identity_p2_is_valid() {
    let s = spec(2, 2, &[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]);
    let sf = StackyFan::from_spec(&s).unwrap();
    for i in 0..sf.fan().len() {
        assert!(sf.stabilizer(i).is_trivial());
        assert_eq!(sf.cosets(i).len(), 1);
    }
}

#[test]
fn condition1_rejects_dimension_drop() {
    let s = spec(1, 2, &[&[1, 0]], &[&[1, 0], &[0, 1]], &[&[0, 1]]);
    assert!(matches!(StackyFan::from_spec(&s), Err(Condition1Violation::DimensionDrop { .. })));
}

#[test]
fn condition1_rejects_infinite_cokernel() {
    let s = spec(2, 1, &[&[1], &[0]], &[&[1]], &[&[0]]);
    assert!(matches!(StackyFan::from_spec(&s), Err(Condition1Violation::InfiniteCokernel { .. })));
}

#[test]
fn doubled_p1_has_half_integer_characters() {
    let sf = fixtures::load("p1_double").unwrap();
    let sigma = sf.fan().find(&[0]).unwrap();
    assert_eq!(sf.fractional_lattice(sigma).basis(), vec![vec![rat(1, 2)]]);
    assert_eq!(sf.cosets(sigma), &[vec![rat(0, 1)], vec![rat(1, 2)]]);
    assert_eq!(sf.stabilizer(sigma).to_string(), "Z/2");
    assert!(sf.stabilizer(0).is_trivial());
}

#[test]
fn quotient_singularity_has_z2() {
    let sf = fixtures::load("c2z2").unwrap();
    let top = sf.fan().find(&[0, 1]).unwrap();
    assert_eq!(sf.stabilizer(top).to_string(), "Z/2");
    assert_eq!(sf.cosets(top).len(), 2);
    assert_eq!(sf.cosets(top)[1], vec![rat(0, 1), rat(1, 2)]);
    // restriction to the rays lands in the trivial coset group
    for ray in [sf.fan().find(&[0]).unwrap(), sf.fan().find(&[1]).unwrap()] {
        assert!(sf.stabilizer(ray).is_trivial());
        let r = sf.restrict_coset(top, &sf.cosets(top)[1], ray).unwrap();
        assert_eq!(r, vec![rat(0, 1), rat(0, 1)]);
    }
}

#[test]
fn weighted_projective_plane_orbifold_cone() {
    let sf = fixtures::load("p112").unwrap();
    let orbifold = sf.fan().find(&[0, 2]).unwrap();
    assert_eq!(sf.stabilizer(orbifold).to_string(), "Z/2");
    assert!(sf.stabilizer(sf.fan().find(&[0, 1]).unwrap()).is_trivial());
    assert!(sf.fan().is_complete());
}

#[test]
fn restriction_composes() {
    let sf = fixtures::load("c2z2").unwrap();
    let top = sf.fan().find(&[0, 1]).unwrap();
    let ray = sf.fan().find(&[1]).unwrap();
    for chi in sf.cosets(top) {
        let direct = sf.restrict_coset(top, chi, 0).unwrap();
        let via = sf.restrict_coset(ray, &sf.restrict_coset(top, chi, ray).unwrap(), 0).unwrap();
        assert_eq!(direct, via);
        assert_eq!(direct, vec![rat(0, 1), rat(0, 1)]);
    }
}

#[test]
fn coset_count_matches_stabilizer_on_suite() {
    for sf in fixtures::suite().unwrap() {
        for i in 0..sf.fan().len() {
            assert_eq!(int(sf.cosets(i).len() as i64), sf.stabilizer(i).order(), "{} cone {i}", sf.name());
        }
    }
}

#[test]
fn skeleton_of_p1() {
    let sf = fixtures::load("p1").unwrap();
    let cells = build_skeleton(&sf);
    assert_eq!(cells.len(), 3);
    let zero: Vec<_> = cells.iter().filter(|c| c.cone == 0).collect();
    assert_eq!(zero.len(), 1);
    assert_eq!(zero[0].perp_basis.len(), 1);
    assert!(zero[0].contains(&[rat(1, 3)], &[rat(0, 1)]));
    let plus = cells.iter().find(|c| c.cone == sf.fan().find(&[0]).unwrap()).unwrap();
    assert!(plus.contains(&[rat(2, 1)], &[rat(-1, 1)]));
    assert!(!plus.contains(&[rat(0, 1)], &[rat(1, 1)]));
    assert!(!plus.contains(&[rat(1, 2)], &[rat(-1, 1)]));
}

#[test]
fn skeleton_of_doubled_p1_has_half_cells() {
    let cells = build_skeleton(&fixtures::load("p1_double").unwrap());
    assert_eq!(cells.len(), 5);
    assert!(cells.iter().any(|c| c.cone != 0 && c.chi == vec![rat(1, 2)]));
}

#[test]
fn skeleton_of_affine_line() {
    let cells = build_skeleton(&fixtures::load("a1").unwrap());
    assert_eq!(cells.len(), 2);
    assert!(cells[1].contains(&[rat(0, 1)], &[rat(-3, 1)]));
    assert!(!cells[1].contains(&[rat(0, 1)], &[rat(3, 1)]));
}

#[test]
fn stacky_star_subdivision_of_quotient() {
    let sf = fixtures::load("c2z2").unwrap();
    let sub = sf.star_subdivision(sf.fan().find(&[0, 1]).unwrap()).unwrap();
    assert_eq!(sub.fan().rays()[2], ints(&[1, 1]));
    assert_eq!(sub.fan_hat().rays()[2], ints(&[1, 1]));
    assert_eq!(sub.fan().maximal_cones().len(), 2);
}

fn small_cone() -> impl Strategy<Value = Cone> {
    (2usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, n), 1..=4).prop_map(move |gs| {
            let g: Vec<Vec<Int>> = gs.iter().map(|v| ints(v)).collect();
            Cone::new(n, &g).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn dual_is_an_involution(c in small_cone()) {
        prop_assert_eq!(c.dual().dual(), c);
    }

    #[test]
    fn h_and_v_representations_agree(c in small_cone(), pts in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 20)) {
        let n = c.ambient();
        for p in pts {
            let x = rats(&ints(&p[..n]));
            // membership via H-rep agrees with membership in the cone spanned by the generators
            let sum_gens = Cone::new(n, &[c.generators().to_vec(), vec![ints(&p[..n])]].concat()).unwrap();
            prop_assert_eq!(c.contains(&x), sum_gens == c);
        }
    }
}
