//! Microsupport of poset sheaves.
//!
//! Convention: a covector `ξ` at `x` lies in `SS(F)` when sections of `F` supported on the
//! closed half-space `{y : <y - x, ξ> >= 0}` do not vanish near `x`. With it the indicator of
//! the open half-line `(0, ∞)` has `SS = {0} x R<0`, so `SS(Q_{Int σ^∨})` at the origin is `-σ`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::Zero;

use super::arrangement::{CellComplex, Hyperplane, Side};
use super::cochain::ChainMap;
use super::indicator::IndicatorComplex;
use super::rhom::rhom;
use super::sheaf::PosetSheaf;
use super::strat::{box_planes, Stratification};
use super::SheafError;
use crate::linalg::{dot_ir, primitive_rat, Int, Rat};
use crate::polyhedron::{Constraint, LCPolyhedron, Relation};

pub const SS_CONVENTION: &str = "xi in SS(F) at x iff sections supported on {<y - x, xi> >= 0} are nonzero near x";

/// Relatively open rational cone of covectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConormalSector {
    pub dim: usize,
    /// Primitive generators of the closure.
    pub generators: Vec<Vec<Int>>,
    /// A primitive integer covector inside the sector.
    pub sample: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSCell {
    pub stratum: usize,
    pub sector: ConormalSector,
    pub dims: BTreeMap<i32, usize>,
}

#[derive(Clone, Debug)]
pub struct SSCells {
    pub zero_section: Vec<usize>,
    pub cells: Vec<SSCell>,
}

fn primitive_of(v: &[Rat]) -> Vec<Int> {
    primitive_rat(v)
}

/// Sectors of the local conormal fan at a stratum.
fn sectors(strat: &Stratification, s: usize) -> Vec<ConormalSector> {
    let n = strat.ambient();
    let k = n - strat.dim(s);
    let cx = strat.complex();
    let x = strat.sample(s);
    match k {
        0 => Vec::new(),
        1 => {
            let i = strat.wall_signs(s).iter().position(|&v| v == 0).expect("wall through stratum");
            let nu = strat.walls()[i].normal.clone();
            let neg: Vec<Int> = nu.iter().map(|c| -c).collect();
            vec![
                ConormalSector { dim: 1, generators: vec![nu.clone()], sample: nu },
                ConormalSector { dim: 1, generators: vec![neg.clone()], sample: neg },
            ]
        }
        _ => {
            // central arrangement of the annihilators of the incident edge directions
            let mut planes: Vec<Hyperplane> = cx
                .cofacets(s)
                .iter()
                .map(|&(e, _)| {
                    let r: Vec<Rat> = strat.sample(e).iter().zip(x).map(|(a, b)| a - b).collect();
                    Hyperplane::new(primitive_of(&r), Rat::zero()).canonical()
                })
                .collect();
            planes.sort();
            planes.dedup();
            let m = planes.len();
            planes.extend(box_planes(n, &vec![Rat::zero(); n], &Rat::from_integer(1.into())));
            let mut sides = vec![Side::Free; m];
            sides.extend(vec![Side::Positive; 2 * n]);
            let xi = CellComplex::new(n, planes, sides);
            let mut out = Vec::new();
            for (c, cell) in xi.cells().iter().enumerate() {
                if cell.dim == 0 {
                    continue;
                }
                let generators = if cell.dim == 1 {
                    vec![primitive_of(&cell.sample)]
                } else {
                    let mut g: Vec<Vec<Int>> = xi.facets(c).iter().map(|&(f, _)| primitive_of(&xi.cell(f).sample)).collect();
                    g.sort();
                    g
                };
                out.push(ConormalSector { dim: cell.dim, generators, sample: primitive_of(&cell.sample) });
            }
            out.sort();
            out
        }
    }
}

/// Germ of `F` at the stratum `s`, on a unit window with walls through the origin plus
/// the hyperplane `ξ^⊥`.
fn local_germ(f: &PosetSheaf, s: usize, xi: &[Int]) -> Result<(Arc<Stratification>, PosetSheaf), SheafError> {
    let strat = f.strat();
    let n = strat.ambient();
    let through: Vec<usize> = (0..strat.walls().len()).filter(|&i| strat.wall_signs(s)[i] == 0).collect();
    let mut walls: Vec<Hyperplane> = through.iter().map(|&i| Hyperplane::new(strat.walls()[i].normal.clone(), Rat::zero())).collect();
    walls.push(Hyperplane::new(xi.to_vec(), Rat::zero()));
    let local = Arc::new(Stratification::new(n, Rat::from_integer(1.into()), walls)?);
    let base = strat.wall_signs(s).to_vec();
    let mut image = Vec::with_capacity(local.len());
    for c in 0..local.len() {
        let y = local.sample(c);
        let mut signs = base.clone();
        for &i in &through {
            signs[i] = super::arrangement::sign_of(&dot_ir(&strat.walls()[i].normal, y));
        }
        image.push(strat.find_by_wall_signs(&signs).ok_or(SheafError::NotARefinement)?);
    }
    let stalks = image.iter().map(|&c| f.stalk(c).clone()).collect();
    let covering: HashMap<(usize, usize), ChainMap> =
        local.covering_pairs().into_iter().map(|(a, b)| ((a, b), f.map(image[a], image[b]).into_owned())).collect();
    let germ = PosetSheaf::from_covering(local.clone(), stalks, covering)?;
    Ok((local, germ))
}

/// Cohomology of sections supported on `{<y - x, ξ> >= 0}` near the stratum.
pub fn microstalk(f: &PosetSheaf, s: usize, xi: &[Int]) -> Result<BTreeMap<i32, usize>, SheafError> {
    let (local, germ) = local_germ(f, s, xi)?;
    let half = LCPolyhedron::new(f.strat().ambient(), vec![Constraint::new(xi.to_vec(), Rat::zero(), Relation::Ge)]);
    let test = IndicatorComplex::indicator(half, 0).instantiate(&local)?;
    rhom(&test, &germ)
}

/// `microsupport`: zero-section support plus every (stratum, sector) with nonzero microstalk.
pub fn microsupport(f: &PosetSheaf) -> Result<SSCells, SheafError> {
    let strat = f.strat();
    let mut cells = Vec::new();
    for s in 0..strat.len() {
        for sector in sectors(strat, s) {
            let dims = microstalk(f, s, &sector.sample)?;
            if !dims.is_empty() {
                cells.push(SSCell { stratum: s, sector, dims });
            }
        }
    }
    Ok(SSCells { zero_section: f.support(), cells })
}
