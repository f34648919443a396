//! Constructible complexes modeled as functors from the stratum poset to cochain complexes.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{One, Zero};

use super::cochain::{ranks_by_degree, ChainMap, Cochain, Cohomology};
use super::strat::Stratification;
use super::SheafError;
use crate::linalg::Rat;

/// Chain-level constructible complex: a stalk complex per stratum and generization maps
/// for every comparable pair, composed strictly.
#[derive(Clone, Debug)]
pub struct PosetSheaf {
    strat: Arc<Stratification>,
    stalks: Vec<Cochain>,
    maps: HashMap<(usize, usize), ChainMap>,
}

/// Stalk cohomology dimensions and generization ranks on covering pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafProfile {
    pub stalks: Vec<BTreeMap<i32, usize>>,
    pub ranks: BTreeMap<(usize, usize), BTreeMap<i32, usize>>,
}

impl SheafProfile {
    pub fn is_zero(&self) -> bool {
        self.stalks.iter().all(BTreeMap::is_empty)
    }
}

impl PosetSheaf {
    /// Builds the sheaf from maps on covering pairs; missing maps are zero. Fails unless the
    /// two-step composites agree and every map is a chain map.
    pub fn from_covering(
        strat: Arc<Stratification>,
        stalks: Vec<Cochain>,
        covering: HashMap<(usize, usize), ChainMap>,
    ) -> Result<Self, SheafError> {
        assert_eq!(stalks.len(), strat.len());
        let cx = strat.complex();
        let mut maps: HashMap<(usize, usize), ChainMap> = HashMap::new();
        for (a, b) in strat.covering_pairs() {
            let m = covering.get(&(a, b)).cloned().unwrap_or_else(|| ChainMap::zero(stalks[a].dim()));
            if !m.is_chain_map(&stalks[a], &stalks[b]) {
                return Err(SheafError::NotAChainMap(a, b));
            }
            maps.insert((a, b), m);
        }
        let mut pairs: Vec<(usize, usize)> = (0..strat.len())
            .flat_map(|a| cx.star(a).into_iter().filter(move |&b| b != a).map(move |b| (a, b)))
            .filter(|&(a, b)| strat.dim(b) > strat.dim(a) + 1)
            .collect();
        pairs.sort_by_key(|&(a, b)| (strat.dim(b) - strat.dim(a), a, b));
        for (a, b) in pairs {
            let mut found: Option<ChainMap> = None;
            for &(c, _) in cx.cofacets(a) {
                if !cx.le(c, b) {
                    continue;
                }
                let m = maps[&(a, c)].then(&maps[&(c, b)]);
                match &found {
                    None => found = Some(m),
                    Some(f) if *f != m => return Err(SheafError::NotFunctorial(a, b)),
                    _ => {}
                }
            }
            maps.insert((a, b), found.expect("intermediate stratum"));
        }
        Ok(Self { strat, stalks, maps })
    }

    pub fn zero(strat: Arc<Stratification>) -> Self {
        let stalks = vec![Cochain::zero(); strat.len()];
        Self::from_covering(strat, stalks, HashMap::new()).expect("zero sheaf")
    }

    pub fn strat(&self) -> &Arc<Stratification> {
        &self.strat
    }

    pub fn stalk(&self, i: usize) -> &Cochain {
        &self.stalks[i]
    }

    /// Generization map for `a <= b`.
    pub fn map(&self, a: usize, b: usize) -> Cow<'_, ChainMap> {
        if a == b {
            Cow::Owned(ChainMap::identity(self.stalks[a].dim()))
        } else {
            Cow::Borrowed(&self.maps[&(a, b)])
        }
    }

    pub fn stalk_dims(&self, i: usize) -> BTreeMap<i32, usize> {
        self.stalks[i].cohomology_dims()
    }

    pub fn is_acyclic(&self) -> bool {
        self.stalks.iter().all(Cochain::is_acyclic)
    }

    /// Strata with nonzero stalk cohomology.
    pub fn support(&self) -> Vec<usize> {
        (0..self.stalks.len()).filter(|&i| !self.stalks[i].is_acyclic()).collect()
    }

    pub fn shift(&self, k: i32) -> Self {
        Self { strat: self.strat.clone(), stalks: self.stalks.iter().map(|s| s.shift(k)).collect(), maps: self.maps.clone() }
    }

    pub fn profile(&self) -> SheafProfile {
        let coh: Vec<Cohomology> = self.stalks.iter().map(Cochain::cohomology).collect();
        let stalks = coh.iter().map(Cohomology::dims).collect();
        let mut ranks = BTreeMap::new();
        for (a, b) in self.strat.covering_pairs() {
            let m = self.maps[&(a, b)].on_cohomology(&coh[a], &coh[b]);
            let r = ranks_by_degree(&m, &coh[a], &coh[b]);
            if !r.is_empty() {
                ranks.insert((a, b), r);
            }
        }
        SheafProfile { stalks, ranks }
    }

    /// Replaces every stalk by its cohomology; exact when all stalk cohomology sits in one
    /// common degree, reported by the flag.
    pub fn cohomology_sheaf(&self) -> (Self, bool) {
        let coh: Vec<Cohomology> = self.stalks.iter().map(Cochain::cohomology).collect();
        let stalks: Vec<Cochain> = coh.iter().map(|h| Cochain::graded(h.degrees.clone())).collect();
        let mut covering = HashMap::new();
        for (a, b) in self.strat.covering_pairs() {
            let m = self.maps[&(a, b)].on_cohomology(&coh[a], &coh[b]);
            covering.insert((a, b), dense_to_map(&m));
        }
        let degrees: std::collections::BTreeSet<i32> = coh.iter().flat_map(|h| h.degrees.iter().copied()).collect();
        let sheaf = Self::from_covering(self.strat.clone(), stalks, covering).expect("cohomology functor");
        (sheaf, degrees.len() <= 1)
    }

    /// The cohomology functor when it is quasi-isomorphic to `self`, otherwise `self`.
    pub fn simplified(&self) -> Cow<'_, Self> {
        if self.stalks.iter().all(|s| s.d.iter().all(Vec::is_empty)) {
            return Cow::Borrowed(self);
        }
        match self.cohomology_sheaf() {
            (h, true) => Cow::Owned(h),
            _ => Cow::Borrowed(self),
        }
    }

    /// Pullback to a stratification refining this one on a window no larger than ours.
    pub fn pullback(&self, fine: &Arc<Stratification>) -> Result<Self, SheafError> {
        let mut coarse = Vec::with_capacity(fine.len());
        for i in 0..fine.len() {
            coarse.push(self.strat.locate(fine.sample(i)).ok_or(SheafError::NotARefinement)?);
        }
        let stalks = coarse.iter().map(|&c| self.stalks[c].clone()).collect();
        let mut covering = HashMap::new();
        for (a, b) in fine.covering_pairs() {
            let (ca, cb) = (coarse[a], coarse[b]);
            if !self.strat.le(ca, cb) {
                return Err(SheafError::NotARefinement);
            }
            covering.insert((a, b), self.map(ca, cb).into_owned());
        }
        Self::from_covering(fine.clone(), stalks, covering)
    }

    /// Pullback along `x -> -x`.
    pub fn neg(&self) -> Self {
        let strat = Arc::new(
            Stratification::new(self.strat.ambient(), self.strat.radius().clone(), self.strat.walls().iter().map(|h| h.neg()))
                .expect("reflected stratification"),
        );
        self.pullback_along(&strat, |x| x.iter().map(|c| -c).collect()).expect("reflection")
    }

    fn pullback_along(&self, target: &Arc<Stratification>, f: impl Fn(&[Rat]) -> Vec<Rat>) -> Result<Self, SheafError> {
        let mut image = Vec::with_capacity(target.len());
        for i in 0..target.len() {
            image.push(self.strat.locate(&f(target.sample(i))).ok_or(SheafError::NotARefinement)?);
        }
        let stalks = image.iter().map(|&c| self.stalks[c].clone()).collect();
        let mut covering = HashMap::new();
        for (a, b) in target.covering_pairs() {
            covering.insert((a, b), self.map(image[a], image[b]).into_owned());
        }
        Self::from_covering(target.clone(), stalks, covering)
    }

    /// Verdier dual: the stalk at `c` is the linear dual of compactly supported cochains on
    /// the open star of `c`.
    pub fn verdier_dual(&self) -> Self {
        let strat = &self.strat;
        let cx = strat.complex();
        let mut stars = Vec::with_capacity(strat.len());
        let mut stalks = Vec::with_capacity(strat.len());
        for c in 0..strat.len() {
            let star = cx.star(c);
            let (complex, offsets) = self.compact_cochains(&star);
            stalks.push(complex.dual());
            stars.push((star, offsets));
        }
        let mut covering = HashMap::new();
        for (a, b) in strat.covering_pairs() {
            // restriction of functionals along the inclusion of the smaller star
            let (star_a, off_a) = &stars[a];
            let (star_b, off_b) = &stars[b];
            let mut cols = vec![Vec::new(); stalks[a].dim()];
            for (k, t) in star_b.iter().enumerate() {
                let ka = star_a.binary_search(t).expect("star inclusion");
                for i in 0..self.stalks[*t].dim() {
                    cols[off_a[ka] + i] = vec![(off_b[k] + i, Rat::one())];
                }
            }
            covering.insert((a, b), ChainMap { cols });
        }
        Self::from_covering(strat.clone(), stalks, covering).expect("dual sheaf")
    }

    /// Cellular compactly supported cochains over an up-closed set of strata.
    fn compact_cochains(&self, cells: &[usize]) -> (Cochain, Vec<usize>) {
        let cx = self.strat.complex();
        let mut offsets = Vec::with_capacity(cells.len());
        let mut total = 0;
        for &t in cells {
            offsets.push(total);
            total += self.stalks[t].dim();
        }
        let mut degrees = Vec::with_capacity(total);
        let mut d = Vec::with_capacity(total);
        for (k, &t) in cells.iter().enumerate() {
            let dim = self.strat.dim(t) as i32;
            let sign = if dim % 2 == 0 { Rat::one() } else { -Rat::one() };
            for i in 0..self.stalks[t].dim() {
                degrees.push(dim + self.stalks[t].degrees[i]);
                let mut col: Vec<(usize, Rat)> = self.stalks[t].d[i].iter().map(|(j, x)| (offsets[k] + j, x * &sign)).collect();
                for &(u, inc) in cx.cofacets(t) {
                    let ku = cells.binary_search(&u).expect("up-closed");
                    let inc = Rat::from_integer(i64::from(inc).into());
                    for (j, x) in self.map(t, u).cols[i].iter() {
                        col.push((offsets[ku] + j, x * &inc));
                    }
                }
                d.push(super::cochain::normalize(col));
            }
        }
        (Cochain { degrees, d }, offsets)
    }

    /// Compactly supported cochains of the whole window.
    pub fn compact_support_complex(&self) -> Cochain {
        let all: Vec<usize> = (0..self.strat.len()).collect();
        self.compact_cochains(&all).0
    }
}

pub(crate) fn dense_to_map(m: &crate::linalg::QMatrix) -> ChainMap {
    let cols = (0..m.ncols())
        .map(|j| (0..m.nrows()).filter(|&i| !m.get(i, j).is_zero()).map(|i| (i, m.get(i, j).clone())).collect())
        .collect();
    ChainMap { cols }
}

/// Compares two sheaves on the common refinement of their stratifications over the
/// smaller window.
pub fn same_profile(a: &PosetSheaf, b: &PosetSheaf) -> Result<bool, SheafError> {
    let (sa, sb) = (a.strat(), b.strat());
    if sa.ambient() != sb.ambient() {
        return Err(SheafError::DimensionMismatch);
    }
    let radius = sa.radius().min(sb.radius()).clone();
    let common = Arc::new(Stratification::new(sa.ambient(), radius, sa.walls().iter().chain(sb.walls()).cloned())?);
    Ok(a.pullback(&common)?.profile() == b.pullback(&common)?.profile())
}
