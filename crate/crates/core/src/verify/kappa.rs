//! The functor from coherent generators and Čech complexes to indicator complexes.

use num::Zero;

use crate::coherent::{build_cech_poset, cech_sign, cech_structure_complex, DivisorData, GenObject};
use crate::fan::StackyFan;
use crate::linalg::Rat;
use crate::polyhedron::LCPolyhedron;
use crate::polysheaf::IndicatorComplex;

use super::VerifyError;

/// `Q_{Int(σ^∨ + χ)}[n]`.
pub fn kappa_generator(sf: &StackyFan, g: &GenObject) -> IndicatorComplex {
    let n = sf.n_rank();
    IndicatorComplex::indicator(LCPolyhedron::from_cone(&sf.cone(g.cone).dual(), &g.chi, true), n as i32)
}

fn chart(sf: &StackyFan, d: &DivisorData, cone: usize) -> Result<LCPolyhedron, VerifyError> {
    let shift = d.chart_shift(sf, cone)?;
    Ok(LCPolyhedron::from_cone(&sf.cone(cone).dual(), &shift, true))
}

/// Image of the cone-indexed complex of `O(D)`: the cone `σ` contributes
/// `Q_{Int(σ^∨ + m_σ)}` in degree `-dim σ`, with the simplicial incidence signs.
pub fn kappa_line_bundle(sf: &StackyFan, d: &DivisorData) -> Result<IndicatorComplex, VerifyError> {
    let cech = cech_structure_complex(sf)?;
    let n = sf.n_rank() as i32;
    let mut out = IndicatorComplex::new(sf.n_rank());
    let mut index = Vec::with_capacity(cech.terms.len());
    for (p, cones) in cech.terms.iter().enumerate() {
        let mut row = Vec::with_capacity(cones.len());
        for &c in cones {
            row.push(out.add_term(chart(sf, d, c)?, p as i32 - n));
        }
        index.push(row);
    }
    for (p, rows) in cech.differentials.iter().enumerate() {
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    out.add_arrow(index[p][j], index[p + 1][i], Rat::from_integer(x.into()));
                }
            }
        }
    }
    Ok(out)
}

/// `κ(O)` through the cone-indexed complex.
pub fn kappa_structure_sheaf(sf: &StackyFan) -> Result<IndicatorComplex, VerifyError> {
    kappa_line_bundle(sf, &zero_divisor(sf))
}

pub fn zero_divisor(sf: &StackyFan) -> DivisorData {
    DivisorData::new(vec![Zero::zero(); sf.fan_hat().rays().len()])
}

/// Image of the Čech complex of `O(D)` over the maximal charts; correct for non-complete fans.
pub fn kappa_cech(sf: &StackyFan, d: &DivisorData) -> Result<IndicatorComplex, VerifyError> {
    let poset = build_cech_poset(sf);
    let n = sf.n_rank() as i32;
    let mut out = IndicatorComplex::new(sf.n_rank());
    let mut index = Vec::with_capacity(poset.elements.len());
    for (subset, cone) in &poset.elements {
        index.push(out.add_term(chart(sf, d, *cone)?, subset.len() as i32 - 1 - n));
    }
    for (a, (small, _)) in poset.elements.iter().enumerate() {
        for (b, (big, _)) in poset.elements.iter().enumerate() {
            let s = cech_sign(big, small);
            if s != 0 {
                out.add_arrow(index[a], index[b], Rat::from_integer(s.into()));
            }
        }
    }
    Ok(out)
}
