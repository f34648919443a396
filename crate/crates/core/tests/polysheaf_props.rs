//! Randomized invariants of the sheaf calculus on intervals and boxes.

use std::sync::Arc;

use ccc_core::linalg::*;
use ccc_core::polyhedron::*;
use ccc_core::polysheaf::arrangement::Hyperplane;
use ccc_core::polysheaf::*;
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Block {
    lo: Vec<Rat>,
    hi: Vec<Rat>,
    lo_open: Vec<bool>,
    hi_open: Vec<bool>,
}

impl Block {
    fn poly(&self) -> LCPolyhedron {
        LCPolyhedron::boxed(&self.lo, &self.hi, &self.lo_open, &self.hi_open)
    }
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (1i64..=3).prop_flat_map(|q| (-q..=q).prop_map(move |p| rat(p, q)))
}

fn block(n: usize) -> impl Strategy<Value = Block> {
    prop::collection::vec((small_rat(), 1i64..=4, any::<bool>(), any::<bool>()), n).prop_map(|sides| {
        let mut b = Block { lo: vec![], hi: vec![], lo_open: vec![], hi_open: vec![] };
        for (lo, w, lo_open, hi_open) in sides {
            b.hi.push(&lo + rat(w, 3));
            b.lo.push(lo);
            b.lo_open.push(lo_open);
            b.hi_open.push(hi_open);
        }
        b
    })
}

fn sheaf_on(p: &LCPolyhedron, r: i64) -> PosetSheaf {
    IndicatorComplex::indicator(p.clone(), 0).sheaf(rat(r, 1)).unwrap()
}

fn positive_ray() -> LCPolyhedron {
    LCPolyhedron::new(1, vec![Constraint::new(ints(&[1]), rat(0, 1), Relation::Gt)])
}

/// `RHom` after pulling both sheaves back to their common refinement.
fn rhom_common(f: &PosetSheaf, g: &PosetSheaf) -> std::collections::BTreeMap<i32, usize> {
    let walls: Vec<Hyperplane> = f.strat().walls().iter().chain(g.strat().walls()).cloned().collect();
    let s = Arc::new(Stratification::new(f.strat().ambient(), f.strat().radius().clone(), walls).unwrap());
    rhom(&f.pullback(&s).unwrap(), &g.pullback(&s).unwrap()).unwrap()
}

fn covector_signs(f: &PosetSheaf) -> Vec<i64> {
    let ss = microsupport(f).unwrap();
    let mut s: Vec<i64> = ss.cells.iter().flat_map(|c| c.sector.generators.iter().map(|g| i64::try_from(&g[0]).unwrap())).collect();
    s.sort();
    s.dedup();
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rhom_is_invariant_under_refinement(a in block(2), b in block(2), off in small_rat()) {
        let (pa, pb) = (a.poly(), b.poly());
        let coarse = Arc::new(Stratification::adapted_to(2, rat(3, 1), &[pa.clone(), pb.clone()]).unwrap());
        let fine = Arc::new(coarse.refine([Hyperplane::new(ints(&[1, 2]), off), Hyperplane::new(ints(&[3, -1]), rat(1, 5))]).unwrap());
        let on = |s: &Arc<Stratification>, p: &LCPolyhedron| indicator_sheaf(p, 0, s).unwrap();
        prop_assert_eq!(rhom(&on(&coarse, &pa), &on(&coarse, &pb)).unwrap(), rhom(&on(&fine, &pa), &on(&fine, &pb)).unwrap());
    }

    #[test]
    fn the_origin_is_a_convolution_unit(a in block(2)) {
        let unit = sheaf_on(&LCPolyhedron::point(&[rat(0, 1), rat(0, 1)]), 3);
        let f = sheaf_on(&a.poly(), 6);
        let conv = convolve(&unit, &f, rat(3, 1)).unwrap();
        prop_assert!(same_profile(&conv.sheaf, &f).unwrap());
    }

    #[test]
    fn convolution_is_commutative(a in block(1), b in block(1)) {
        let (f, g) = (sheaf_on(&a.poly(), 12), sheaf_on(&b.poly(), 12));
        let fg = convolve(&f, &g, rat(6, 1)).unwrap();
        let gf = convolve(&g, &f, rat(6, 1)).unwrap();
        prop_assert!(same_profile(&fg.sheaf, &gf.sheaf).unwrap());
    }

    #[test]
    fn hom_star_is_right_adjoint_to_convolution(a in block(1), b in block(1)) {
        // Hom(F ⋆ G, H) = Hom(F, Hom^*(G, H)) with H the open positive ray. Supports lie in
        // [-1, 7/3], so F ⋆ G fits in the radius-6 output window.
        let (f, g) = (sheaf_on(&a.poly(), 12), sheaf_on(&b.poly(), 12));
        let left = convolve(&f, &g, rat(6, 1)).unwrap();
        prop_assume!(left.exact);
        let lhs = rhom_common(&left.sheaf, &sheaf_on(&positive_ray(), 6));
        let inner = hom_star(&sheaf_on(&b.poly(), 6), &sheaf_on(&positive_ray(), 16), rat(6, 1)).unwrap();
        prop_assume!(inner.exact);
        let rhs = rhom_common(&sheaf_on(&a.poly(), 6), &inner.sheaf);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn convolution_respects_the_microsupport_estimate(a in block(1), b in block(1)) {
        let (f, g) = (sheaf_on(&a.poly(), 12), sheaf_on(&b.poly(), 12));
        let conv = convolve(&f, &g, rat(6, 1)).unwrap();
        prop_assume!(conv.exact);
        let (sf, sg) = (covector_signs(&f), covector_signs(&g));
        for s in covector_signs(&conv.sheaf) {
            prop_assert!(sf.contains(&s) && sg.contains(&s));
        }
    }

    #[test]
    fn verdier_duality_is_an_involution(a in block(2)) {
        let f = sheaf_on(&a.poly(), 3);
        prop_assert_eq!(f.verdier_dual().verdier_dual().profile(), f.profile());
    }
}
