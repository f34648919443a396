//! Symbolic complexes of shifted indicator sheaves of locally closed polyhedra.

use std::collections::HashMap;
use std::sync::Arc;

use num::{One, Zero};

use super::arrangement::Hyperplane;
use super::cochain::{normalize, ChainMap, Cochain};
use super::sheaf::PosetSheaf;
use super::strat::{walls_of, Stratification};
use super::SheafError;
use crate::linalg::Rat;
use crate::polyhedron::LCPolyhedron;

/// `⊕ Q_{P_j}` with `Q_{P_j}` placed in degree `degrees[j]` and a differential given by
/// scalar multiples of the canonical maps `Q_{P_j} -> Q_{P_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorComplex {
    n: usize,
    terms: Vec<(LCPolyhedron, i32)>,
    arrows: Vec<(usize, usize, Rat)>,
}

impl IndicatorComplex {
    pub fn new(n: usize) -> Self {
        Self { n, terms: Vec::new(), arrows: Vec::new() }
    }

    /// `Q_P[shift]`, sitting in degree `-shift`.
    pub fn indicator(poly: LCPolyhedron, shift: i32) -> Self {
        let mut c = Self::new(poly.dim());
        c.add_term(poly, -shift);
        c
    }

    pub fn add_term(&mut self, poly: LCPolyhedron, degree: i32) -> usize {
        assert_eq!(poly.dim(), self.n);
        self.terms.push((poly, degree));
        self.terms.len() - 1
    }

    pub fn add_arrow(&mut self, from: usize, to: usize, coefficient: Rat) {
        assert_eq!(self.terms[from].1 + 1, self.terms[to].1, "arrows raise degree by one");
        if !coefficient.is_zero() {
            self.arrows.push((from, to, coefficient));
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(LCPolyhedron, i32)] {
        &self.terms
    }

    pub fn translate(&self, v: &[Rat]) -> Self {
        self.map_terms(|p| p.translate(v))
    }

    pub fn neg(&self) -> Self {
        self.map_terms(LCPolyhedron::neg)
    }

    pub fn shift(&self, k: i32) -> Self {
        let sign = if k.rem_euclid(2) == 0 { Rat::one() } else { -Rat::one() };
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(p, d)| (p.clone(), d - k)).collect(),
            arrows: self.arrows.iter().map(|(a, b, c)| (*a, *b, c * &sign)).collect(),
        }
    }

    fn map_terms(&self, f: impl Fn(&LCPolyhedron) -> LCPolyhedron) -> Self {
        Self { n: self.n, terms: self.terms.iter().map(|(p, d)| (f(p), *d)).collect(), arrows: self.arrows.clone() }
    }

    /// Walls needed for a stratification adapted to every term.
    pub fn walls(&self) -> Vec<Hyperplane> {
        self.terms.iter().flat_map(|(p, _)| walls_of(p).collect::<Vec<_>>()).collect()
    }

    /// Chain-level sheaf on `strat`.
    pub fn instantiate(&self, strat: &Arc<Stratification>) -> Result<PosetSheaf, SheafError> {
        if strat.ambient() != self.n {
            return Err(SheafError::DimensionMismatch);
        }
        if let Some(j) = self.terms.iter().position(|(p, _)| !strat.is_adapted(p)) {
            return Err(SheafError::NotAdapted(j));
        }
        // positions of present terms per stratum
        let present: Vec<Vec<usize>> =
            (0..strat.len()).map(|c| (0..self.terms.len()).filter(|&j| self.terms[j].0.contains(strat.sample(c))).collect()).collect();
        let local: Vec<HashMap<usize, usize>> = present.iter().map(|p| p.iter().enumerate().map(|(k, &j)| (j, k)).collect()).collect();
        let stalks: Vec<Cochain> = (0..strat.len())
            .map(|c| {
                let degrees = present[c].iter().map(|&j| self.terms[j].1).collect();
                let mut d: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); present[c].len()];
                for (a, b, x) in &self.arrows {
                    if let (Some(&ka), Some(&kb)) = (local[c].get(a), local[c].get(b)) {
                        d[ka].push((kb, x.clone()));
                    }
                }
                Cochain { degrees, d: d.into_iter().map(normalize).collect() }
            })
            .collect();
        if let Some(c) = stalks.iter().position(|s| !s.is_complex()) {
            return Err(SheafError::NotAComplex(c));
        }
        let mut covering = HashMap::new();
        for (a, b) in strat.covering_pairs() {
            let cols = present[a].iter().map(|j| local[b].get(j).map(|&k| vec![(k, Rat::one())]).unwrap_or_default()).collect();
            covering.insert((a, b), ChainMap { cols });
        }
        PosetSheaf::from_covering(strat.clone(), stalks, covering)
    }

    /// Instantiates on the stratification by the terms' own walls.
    pub fn sheaf(&self, radius: Rat) -> Result<PosetSheaf, SheafError> {
        let strat = Arc::new(Stratification::new(self.n, radius, self.walls())?);
        self.instantiate(&strat)
    }
}

/// `indicator_sheaf`: `Q_P[shift]` on a stratification adapted to `P`.
pub fn indicator_sheaf(poly: &LCPolyhedron, shift: i32, strat: &Arc<Stratification>) -> Result<PosetSheaf, SheafError> {
    IndicatorComplex::indicator(poly.clone(), shift).instantiate(strat)
}
