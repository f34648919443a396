//! `RHom` between poset sheaves through the bar resolution over chains of strata.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::One;

use super::cochain::{normalize, Cochain};
use super::sheaf::PosetSheaf;
use super::SheafError;
use crate::linalg::Rat;

/// Chains `s_0 < ... < s_k` with nonzero `F(s_0)` and `G(s_k)`, with basis offsets.
struct Chains {
    list: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    offsets: Vec<usize>,
}

fn transpose(cols: &[Vec<(usize, Rat)>], rows: usize) -> Vec<Vec<(usize, Rat)>> {
    let mut out = vec![Vec::new(); rows];
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c {
            out[*i].push((j, x.clone()));
        }
    }
    out
}

/// Total complex computing `RHom(F, G)`.
///
/// A basis vector is an elementary map `e_i -> e_j` from `F(s_0)` to `G(s_k)` attached to a
/// chain of length `k`, in degree `k + deg(j) - deg(i)`.
pub fn rhom_complex(f: &PosetSheaf, g: &PosetSheaf) -> Result<Cochain, SheafError> {
    let strat = f.strat();
    if !Arc::ptr_eq(strat, g.strat()) && (strat.walls() != g.strat().walls() || strat.radius() != g.strat().radius()) {
        return Err(SheafError::StratificationMismatch);
    }
    let cx = strat.complex();
    let n = strat.len();
    let ups: Vec<Vec<usize>> = (0..n).map(|a| cx.star(a).into_iter().filter(|&b| b != a).collect()).collect();
    let mut downs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, up) in ups.iter().enumerate() {
        for &b in up {
            downs[b].push(a);
        }
    }

    let mut chains = Chains { list: Vec::new(), index: HashMap::new(), offsets: Vec::new() };
    let mut total = 0;
    let mut stack: Vec<Vec<usize>> = (0..n).filter(|&a| f.stalk(a).dim() > 0).map(|a| vec![a]).collect();
    stack.reverse();
    while let Some(c) = stack.pop() {
        let last = *c.last().unwrap();
        if g.stalk(last).dim() > 0 {
            chains.index.insert(c.clone(), chains.list.len());
            chains.offsets.push(total);
            total += f.stalk(c[0]).dim() * g.stalk(last).dim();
            chains.list.push(c.clone());
        }
        for &b in ups[last].iter().rev() {
            let mut next = c.clone();
            next.push(b);
            stack.push(next);
        }
    }

    let df_rows: Vec<Vec<Vec<(usize, Rat)>>> = (0..n).map(|a| transpose(&f.stalk(a).d, f.stalk(a).dim())).collect();
    let mut degrees = vec![0i32; total];
    let mut d: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); total];
    for (ci, c) in chains.list.iter().enumerate() {
        let k = c.len() - 1;
        let (s0, sk) = (c[0], c[k]);
        let (fs, gs) = (f.stalk(s0), g.stalk(sk));
        let nf = fs.dim();
        let base = chains.offsets[ci];
        let bar_sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        for j in 0..gs.dim() {
            #[allow(clippy::needless_range_loop)]
            for i in 0..nf {
                let idx = base + j * nf + i;
                let q = gs.degrees[j] - fs.degrees[i];
                degrees[idx] = k as i32 + q;
                let mut col: Vec<(usize, Rat)> = Vec::new();
                // internal differential, (-1)^k (d_G φ - (-1)^q φ d_F)
                for (j2, x) in &gs.d[j] {
                    col.push((base + j2 * nf + i, x * &bar_sign));
                }
                let s = if q.rem_euclid(2) == 0 { -bar_sign.clone() } else { bar_sign.clone() };
                for (i2, x) in &df_rows[s0][i] {
                    col.push((base + j * nf + i2, x * &s));
                }
                // append t > s_k
                for &t in &ups[sk] {
                    if let Some(&ct) = chains.index.get(&[c.as_slice(), &[t]].concat()) {
                        let nft = nf;
                        for (j2, x) in g.map(sk, t).cols[j].iter() {
                            col.push((chains.offsets[ct] + j2 * nft + i, x.clone()));
                        }
                    }
                }
                // insert strictly between s_{p-1} and s_p
                for p in 1..=k {
                    let sign = if p % 2 == 0 { Rat::one() } else { -Rat::one() };
                    for &t in &ups[c[p - 1]] {
                        if !strat.le(t, c[p]) || t == c[p] {
                            continue;
                        }
                        let mut next = c.clone();
                        next.insert(p, t);
                        let ct = chains.index[&next];
                        col.push((chains.offsets[ct] + j * nf + i, sign.clone()));
                    }
                }
                // prepend t < s_0
                let sign = if (k + 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
                for &t in &downs[s0] {
                    let mut next = vec![t];
                    next.extend_from_slice(c);
                    let Some(&ct) = chains.index.get(&next) else { continue };
                    let ft = f.stalk(t).dim();
                    let fmap = f.map(t, s0);
                    for (i2, col_i2) in fmap.cols.iter().enumerate() {
                        for (r, x) in col_i2 {
                            if *r == i {
                                col.push((chains.offsets[ct] + j * ft + i2, x * &sign));
                            }
                        }
                    }
                }
                d[idx] = normalize(col);
            }
        }
    }
    let out = Cochain { degrees, d };
    debug_assert!(out.is_complex());
    Ok(out)
}

/// Cohomology dimensions of `RHom(F, G)`. Arguments whose stalk cohomology sits in one
/// degree are first replaced by their cohomology functors.
pub fn rhom(f: &PosetSheaf, g: &PosetSheaf) -> Result<BTreeMap<i32, usize>, SheafError> {
    let (fs, g_s) = (f.simplified(), g.simplified());
    Ok(rhom_complex(fs.as_ref(), g_s.as_ref())?.cohomology_dims())
}
