//! The individual cross-side checks.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coherent::{generators, global_section_count, hom_basis, line_bundle_cohomology, DivisorData, GenObject};
use crate::fan::{build_skeleton, Cone, SkeletonCell, StackyFan};
use crate::linalg::{dot_ir, fmt_rat, int, rat, Int, Rat};
use crate::polyhedron::{Constraint, LCPolyhedron, Relation};
use crate::polysheaf::arrangement::Hyperplane;
use crate::polysheaf::{
    convolve, hom_star, microsupport, same_profile, torus_hom_with, Convolution, IndicatorComplex, PosetSheaf, SSCells,
    SheafError, Stratification, TorusOptions,
};

use super::kappa::{kappa_cech, kappa_generator, kappa_line_bundle, kappa_structure_sheaf, zero_divisor};
use super::report::{CheckReport, Key};
use super::VerifyError;

fn rat_i(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

fn lattice_box(n: usize, r: i64) -> Vec<Vec<i64>> {
    use itertools::Itertools;
    (0..n).map(|_| -r..=r).multi_cartesian_product().collect()
}

fn to_int(m: &[i64]) -> Vec<Int> {
    m.iter().map(|&x| int(x)).collect()
}

pub fn generator_label(g: &GenObject) -> String {
    format!("c{}({})", g.cone, g.chi.iter().map(fmt_rat).collect::<Vec<_>>().join(","))
}

/// Generator index pairs `(a, b)` whose target cone is a face of the source cone.
pub fn face_pairs(sf: &StackyFan) -> Vec<(usize, usize)> {
    let gens = generators(sf);
    let mut out = Vec::new();
    for (a, ga) in gens.iter().enumerate() {
        for (b, gb) in gens.iter().enumerate() {
            if sf.fan().is_face(gb.cone, ga.cone) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Generic walls used to refine stratifications in stability checks.
pub fn generic_walls(n: usize) -> Vec<Hyperplane> {
    match n {
        1 => vec![Hyperplane::new(vec![int(1)], rat(-1, 3)), Hyperplane::new(vec![int(1)], rat(2, 7))],
        _ => {
            let mut a = vec![Int::zero(); n];
            let mut b = vec![Int::zero(); n];
            for i in 0..n {
                a[i] = int(1 + i as i64);
                b[i] = int(if i % 2 == 0 { 3 } else { -1 });
            }
            vec![Hyperplane::new(a, rat(-1, 3)), Hyperplane::new(b, rat(1, 5))]
        }
    }
}

/// `verify_hom_match`: coherent graded hom bases against constructible `RHom(κa + m, κb)`.
pub fn verify_hom_match(
    sf: &StackyFan,
    pairs: &[(usize, usize)],
    window: i64,
    options: &TorusOptions,
) -> Result<CheckReport, VerifyError> {
    let gens = generators(sf);
    if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= gens.len() || b >= gens.len()) {
        return Err(VerifyError::Precondition(format!("unknown generator pair {a},{b}")));
    }
    let mut report = CheckReport::default();
    report.param("window_radius", window);
    report.param("window_scale", options.window_scale);
    report.param("extra_walls", options.extra_walls.len());
    report.param("generators", gens.iter().enumerate().map(|(i, g)| format!("g{i}={}", generator_label(g))).collect::<Vec<_>>().join(" "));
    let results: Vec<_> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let coherent = hom_basis(sf, &gens[a], &gens[b], window);
            let torus = torus_hom_with(&kappa_generator(sf, &gens[a]), &kappa_generator(sf, &gens[b]), window, options)?;
            Ok::<_, VerifyError>((a, b, coherent, torus))
        })
        .collect::<Result<_, _>>()?;
    let unit: BTreeMap<i32, usize> = [(0, 1)].into_iter().collect();
    for (a, b, coherent, torus) in results {
        let name = format!("g{a}->g{b}");
        for m in lattice_box(sf.n_rank(), window) {
            let expected = if coherent.contains_degree(&to_int(&m)) { unit.clone() } else { BTreeMap::new() };
            let got = torus.at(&m);
            if got != expected {
                report.fail(format!("{name} at m={m:?}: coherent {expected:?}, constructible {got:?}"));
            }
        }
        report.table(
            format!("{name} coherent"),
            coherent.basis.iter().map(|e| (Key::Lattice(e.degree.iter().map(to_i64).collect()), unit.clone())),
        );
        report.table(format!("{name} constructible"), torus.dims.iter().map(|(m, d)| (Key::Lattice(m.clone()), d.clone())));
        report.stability.insert(format!("{name} window"), torus.window_stable);
        if !torus.window_stable {
            report.fail(format!("{name}: boundary translations change on a doubled window"));
        }
    }
    Ok(report)
}

fn to_i64(x: &Int) -> i64 {
    i64::try_from(x).expect("small lattice degree")
}

/// Stalk cohomology of `κ(O)` on a window, optionally refined.
type Stalks = Vec<(Vec<Rat>, BTreeMap<i32, usize>)>;

fn unit_stalks(sf: &StackyFan, radius: i64, extra: &[Hyperplane]) -> Result<Stalks, VerifyError> {
    let k = kappa_structure_sheaf(sf)?;
    let walls: Vec<Hyperplane> = k.walls().into_iter().chain(extra.iter().cloned()).collect();
    let strat = std::sync::Arc::new(Stratification::new(sf.n_rank(), rat_i(radius), walls)?);
    let sheaf = k.instantiate(&strat)?;
    Ok((0..strat.len()).map(|s| (strat.sample(s).to_vec(), sheaf.stalk_dims(s))).collect())
}

/// `verify_unit`: `κ` of the Čech structure complex is `Q` at the origin, zero elsewhere.
pub fn verify_unit(sf: &StackyFan, radius: i64) -> Result<CheckReport, VerifyError> {
    if !sf.fan().is_complete() {
        return Err(VerifyError::Precondition("the fan is not complete".into()));
    }
    let mut report = CheckReport::default();
    report.param("window_radius", radius);
    let stalks = unit_stalks(sf, radius, &[])?;
    for (x, dims) in &stalks {
        let origin = x.iter().all(Zero::is_zero);
        let expected: BTreeMap<i32, usize> = if origin { [(0, 1)].into_iter().collect() } else { BTreeMap::new() };
        if *dims != expected {
            report.fail(format!("stalk at {:?} is {dims:?}, expected {expected:?}", Key::point(x)));
        }
    }
    report.table("stalks", stalks.into_iter().map(|(x, d)| (Key::point(&x), d)));
    Ok(report)
}

/// Convolution with window sizes grown until the fiber computations are certified.
pub fn convolve_auto(f: &IndicatorComplex, g: &IndicatorComplex, radius: i64) -> Result<Convolution, VerifyError> {
    let mut last = None;
    for k in [2i64, 4, 8, 16] {
        let base = radius * k;
        for (rf, rg) in [(base, base + radius), (base + radius, base)] {
            let (fs, gs) = (f.sheaf(rat_i(rf))?, g.sheaf(rat_i(rg))?);
            match convolve(&fs, &gs, rat_i(radius)) {
                Err(e @ SheafError::WindowTooSmall(_)) => last = Some(e),
                other => return Ok(other?),
            }
        }
    }
    Err(last.expect("at least one attempt").into())
}

fn full_dimensional(sf: &StackyFan, g: &GenObject) -> bool {
    sf.cone(g.cone).dim() == sf.n_rank()
}

fn cone_polyhedron(cone: &Cone, open: bool) -> LCPolyhedron {
    LCPolyhedron::from_cone(cone, &vec![Rat::zero(); cone.ambient()], open)
}

fn nonzero_stalks(sheaf: &PosetSheaf) -> Vec<(Key, BTreeMap<i32, usize>)> {
    let s = sheaf.strat();
    sheaf.support().into_iter().map(|c| (Key::point(s.sample(c)), sheaf.stalk_dims(c))).collect()
}

/// `verify_vanishing`: `E ⋆ C_γ` vanishes when `SS(E)` avoids `Int(γ^∨)`, on lifts of suite
/// generators; unit and closed-cone controls must survive.
pub fn verify_vanishing(sf: &StackyFan, radius: i64) -> Result<CheckReport, VerifyError> {
    let n = sf.n_rank();
    if n > crate::polysheaf::MAX_DIM {
        return Err(VerifyError::Precondition(format!("rank {n} exceeds the sheaf engine")));
    }
    let fan = sf.fan();
    let Some(&top) = fan.maximal_cones().iter().find(|&&c| fan.cone(c).cone.dim() == n) else {
        return Err(VerifyError::Precondition("no full-dimensional cone".into()));
    };
    let mut report = CheckReport::default();
    report.param("window_radius", radius);
    // (label, E, test sheaf, expect acyclic)
    let mut cases: Vec<(String, IndicatorComplex, IndicatorComplex, bool)> = Vec::new();
    let gens = generators(sf);
    let mut control_done = false;
    for g in &gens {
        let e = kappa_generator(sf, g);
        let label = generator_label(g);
        let sigma = if full_dimensional(sf, g) {
            sf.cone(g.cone).clone()
        } else if g.cone == fan.find(&[]).unwrap_or(usize::MAX) {
            sf.cone(top).clone()
        } else {
            continue;
        };
        // γ0 = σ^∨ is strictly convex and SS(E) ⊂ -σ avoids Int σ
        let gamma0 = IndicatorComplex::indicator(cone_polyhedron(&sigma.dual(), false), 0);
        cases.push((format!("{label} * C_(sigma^v)"), e.clone(), gamma0, true));
        if n == 2 {
            // γ' a half-space whose dual ray is interior to σ
            let v = sigma.interior_vector();
            let half = LCPolyhedron::new(n, vec![Constraint::new(v, Rat::zero(), Relation::Ge)]);
            cases.push((format!("{label} * C_halfspace"), e.clone(), IndicatorComplex::indicator(half, 0), true));
        }
        if !control_done && full_dimensional(sf, g) {
            control_done = true;
            let origin = LCPolyhedron::point(&vec![Rat::zero(); n]);
            cases.push((format!("{label} * C_0 (control)"), e.clone(), IndicatorComplex::indicator(origin, 0), false));
            let closed = IndicatorComplex::indicator(LCPolyhedron::from_cone(&sigma.dual(), &g.chi, false), 0);
            let gamma0 = IndicatorComplex::indicator(cone_polyhedron(&sigma.dual(), false), 0);
            cases.push((format!("C_(closed dual + chi) * C_(sigma^v) (control) for {label}"), closed, gamma0, false));
        }
    }
    let results: Vec<_> = cases
        .par_iter()
        .map(|(label, e, t, expect)| convolve_auto(e, t, radius).map(|c| (label.clone(), c, *expect)))
        .collect::<Result<_, _>>()?;
    for (label, conv, expect_zero) in results {
        let zero = conv.sheaf.is_acyclic();
        if zero != expect_zero {
            report.fail(format!("{label}: acyclic = {zero}, expected {expect_zero}"));
        }
        report.table(label, nonzero_stalks(&conv.sheaf));
    }
    Ok(report)
}

/// `verify_monoidal`: `κ(O(D1)) ⋆ κ(O(D2))` against `κ(O(D1 + D2))`.
pub fn verify_monoidal(sf: &StackyFan, pairs: &[(DivisorData, DivisorData)], radius: i64) -> Result<CheckReport, VerifyError> {
    if !sf.fan_hat().is_smooth() || !sf.fan().is_complete() {
        return Err(VerifyError::Precondition("needs a smooth complete fan".into()));
    }
    if sf.n_rank() > crate::polysheaf::MAX_DIM {
        return Err(VerifyError::Precondition("rank exceeds the sheaf engine".into()));
    }
    let mut report = CheckReport::default();
    report.param("window_radius", radius);
    let results: Vec<_> = pairs
        .par_iter()
        .map(|(d1, d2)| {
            let conv = convolve_auto(&kappa_line_bundle(sf, d1)?, &kappa_line_bundle(sf, d2)?, radius)?;
            let direct = kappa_line_bundle(sf, &d1.add(d2))?.sheaf(rat_i(radius))?;
            let same = same_profile(&conv.sheaf, &direct)?;
            Ok::<_, VerifyError>((d1, d2, conv, direct, same))
        })
        .collect::<Result<_, _>>()?;
    for (d1, d2, conv, direct, same) in results {
        let name = format!("{:?}+{:?}", divisor_vec(d1), divisor_vec(d2));
        if !same {
            report.fail(format!("{name}: convolution and tensor product differ"));
        }
        report.table(format!("{name} convolution"), nonzero_stalks(&conv.sheaf));
        report.table(format!("{name} tensor"), nonzero_stalks(&direct));
    }
    Ok(report)
}

fn divisor_vec(d: &DivisorData) -> Vec<i64> {
    d.coefficients.iter().map(to_i64).collect()
}

/// Default divisor pairs: the unit case, `D0 + D0` and `D0 - D1`.
pub fn default_divisor_pairs(sf: &StackyFan) -> Vec<(DivisorData, DivisorData)> {
    let k = sf.fan_hat().rays().len();
    let unit = |i: usize, s: i64| {
        let mut c = vec![0i64; k];
        c[i] = s;
        DivisorData::from_i64(&c)
    };
    let zero = zero_divisor(sf);
    let mut out = vec![(zero, unit(0, 1)), (unit(0, 1), unit(0, 1))];
    if k > 1 {
        out.push((unit(0, 1), unit(1, -1)));
    }
    out
}

/// `verify_refinement`: `E ⋆ κ(O)` is unchanged by a star subdivision of the given cone.
pub fn verify_refinement(sf: &StackyFan, cone: Option<usize>, radius: i64) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::default();
    report.param("window_radius", radius);
    let Some(idx) = cone else {
        report.note("identity refinement: nothing to compare");
        return Ok(report);
    };
    if idx >= sf.fan().len() || sf.cone(idx).dim() < 2 {
        return Err(VerifyError::Precondition(format!("cone {idx} has no nontrivial star subdivision")));
    }
    if sf.n_rank() > crate::polysheaf::MAX_DIM {
        return Err(VerifyError::Precondition("rank exceeds the sheaf engine".into()));
    }
    let fine = sf.star_subdivision(idx)?;
    report.param("subdivided_cone", idx);
    let coarse_unit = kappa_cech(sf, &zero_divisor(sf))?;
    let fine_unit = kappa_cech(&fine, &zero_divisor(&fine))?;
    let samples: Vec<GenObject> = generators(sf).into_iter().filter(|g| full_dimensional(sf, g)).take(3).collect();
    let results: Vec<_> = samples
        .par_iter()
        .map(|g| {
            let e = kappa_generator(sf, g);
            let a = convolve_auto(&e, &coarse_unit, radius)?;
            let b = convolve_auto(&e, &fine_unit, radius)?;
            let same = same_profile(&a.sheaf, &b.sheaf)?;
            Ok::<_, VerifyError>((generator_label(g), a, same))
        })
        .collect::<Result<_, _>>()?;
    for (label, a, same) in results {
        if !same {
            report.fail(format!("{label}: convolutions with the two structure complexes differ"));
        }
        report.table(label, nonzero_stalks(&a.sheaf));
    }
    Ok(report)
}

/// Default refinement target: the first full-dimensional cone of rank at least two.
pub fn default_refinement_cone(sf: &StackyFan) -> Option<usize> {
    let n = sf.n_rank();
    if n < 2 {
        return None;
    }
    sf.fan().maximal_cones().into_iter().find(|&c| sf.cone(c).dim() == n)
}

/// Microsupport cells that no skeleton component contains.
fn escaping(ss: &SSCells, sheaf: &PosetSheaf, skeleton: &[SkeletonCell]) -> Vec<String> {
    let strat = sheaf.strat();
    let mut out = Vec::new();
    for cell in &ss.cells {
        let x = strat.sample(cell.stratum);
        let dirs = &strat.complex().cell(cell.stratum).basis;
        let covered = skeleton.iter().any(|k| {
            let span = k.conormal.span_basis();
            k.base_contains(x)
                && dirs.iter().all(|d| span.iter().all(|v| dot_ir(v, d).is_zero()))
                && cell.sector.generators.iter().all(|g| k.conormal.contains_int(g))
        });
        if !covered {
            out.push(format!("{:?} with covectors {:?}", Key::point(x), cell.sector.generators));
        }
    }
    out
}

fn ss_table(ss: &SSCells, sheaf: &PosetSheaf) -> Vec<(Key, BTreeMap<i32, usize>)> {
    let strat = sheaf.strat();
    ss.cells
        .iter()
        .map(|c| {
            let mut key: Vec<String> = strat.sample(c.stratum).iter().map(fmt_rat).collect();
            key.push(format!("xi={:?}", c.sector.sample.iter().map(to_i64).collect::<Vec<_>>()));
            (Key::Point(key), c.dims.clone())
        })
        .collect()
}

/// `verify_skeleton_ss`: microsupports of generator images lie in the skeleton. The closed
/// unit cube serves as a control: its conormal `(1, ..., 1)` at the origin must be detected.
pub fn verify_skeleton_ss(sf: &StackyFan, radius: i64) -> Result<CheckReport, VerifyError> {
    let n = sf.n_rank();
    if n > crate::polysheaf::MAX_DIM {
        return Err(VerifyError::Precondition(format!("rank {n} exceeds the sheaf engine")));
    }
    let mut report = CheckReport::default();
    report.param("window_radius", radius);
    report.param("convention", crate::polysheaf::SS_CONVENTION);
    let skeleton = build_skeleton(sf);
    let gens = generators(sf);
    let results: Vec<_> = gens
        .par_iter()
        .map(|g| {
            let sheaf = kappa_generator(sf, g).sheaf(rat_i(radius))?;
            let ss = microsupport(&sheaf)?;
            Ok::<_, VerifyError>((generator_label(g), escaping(&ss, &sheaf, &skeleton), ss_table(&ss, &sheaf)))
        })
        .collect::<Result<_, _>>()?;
    for (label, escapes, table) in results {
        for e in escapes {
            report.fail(format!("{label}: {e} escapes the skeleton"));
        }
        report.table(label, table);
    }
    // control
    let zero = vec![Rat::zero(); n];
    let ones = vec![Rat::one(); n];
    let cube = LCPolyhedron::boxed(&zero, &ones, &vec![false; n], &vec![false; n]);
    let sheaf = IndicatorComplex::indicator(cube, 0).sheaf(rat_i(radius))?;
    let ss = microsupport(&sheaf)?;
    let origin = sheaf.strat().locate(&zero).expect("origin in window");
    let detected = ss.cells.iter().any(|c| c.stratum == origin && c.sector.sample.iter().all(|x| *x > Int::zero()));
    if !detected {
        report.fail("control: SS(C_[0,1]^n) misses the positive conormal at the origin");
    }
    let expected_escape = !skeleton.iter().any(|k| k.contains(&zero, &ones));
    let escapes = !escaping(&ss, &sheaf, &skeleton).is_empty();
    report.stability.insert("control escapes skeleton".into(), escapes);
    if expected_escape && !escapes {
        report.fail("control: C_[0,1]^n should escape the skeleton");
    }
    report.table("control C_[0,1]^n", ss_table(&ss, &sheaf));
    Ok(report)
}

fn covector_hull(ss: &SSCells, n: usize) -> Result<Cone, VerifyError> {
    let gens: Vec<Vec<Int>> = ss.cells.iter().flat_map(|c| c.sector.generators.clone()).collect();
    Ok(Cone::new(n, &gens)?)
}

/// Microsupport estimate for convolutions: the covectors of `SS(E1 ⋆ E2)` lie in both conic
/// hulls of the covectors of `SS(E1)` and `SS(E2)`. Checked on every pair of
/// full-dimensional generators.
pub fn verify_ss_estimate(sf: &StackyFan, radius: i64) -> Result<CheckReport, VerifyError> {
    let n = sf.n_rank();
    if n > crate::polysheaf::MAX_DIM {
        return Err(VerifyError::Precondition(format!("rank {n} exceeds the sheaf engine")));
    }
    let mut report = CheckReport::default();
    report.param("window_radius", radius);
    let samples: Vec<GenObject> = generators(sf).into_iter().filter(|g| full_dimensional(sf, g)).collect();
    let hulls: Vec<Cone> = samples
        .par_iter()
        .map(|g| covector_hull(&microsupport(&kappa_generator(sf, g).sheaf(rat_i(radius))?)?, n))
        .collect::<Result<_, _>>()?;
    let pairs: Vec<(usize, usize)> = (0..samples.len()).flat_map(|i| (i..samples.len()).map(move |j| (i, j))).collect();
    let results: Vec<_> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let conv = convolve_auto(&kappa_generator(sf, &samples[i]), &kappa_generator(sf, &samples[j]), radius)?;
            let ss = if conv.exact { Some(microsupport(&conv.sheaf)?) } else { None };
            Ok::<_, VerifyError>((i, j, conv, ss))
        })
        .collect::<Result<_, _>>()?;
    for (i, j, conv, ss) in results {
        let name = format!("{} * {}", generator_label(&samples[i]), generator_label(&samples[j]));
        let Some(ss) = ss else {
            report.note(format!("{name}: convolution is not concentrated in one degree; skipped"));
            continue;
        };
        for c in &ss.cells {
            if let Some(g) = c.sector.generators.iter().find(|g| !hulls[i].contains_int(g) || !hulls[j].contains_int(g)) {
                report.fail(format!("{name}: covector {g:?} outside the estimate"));
            }
        }
        report.table(name, ss_table(&ss, &conv.sheaf));
    }
    Ok(report)
}

/// A rational box `D = Π (lo_i, hi_i]` for the polytope duality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityBox {
    pub lo: Vec<Rat>,
    pub hi: Vec<Rat>,
}

/// Seeded boxes: the first half in dimension one, the rest in dimension two. Sides are
/// shorter than one so every box sits in a fundamental domain.
pub fn random_boxes(seed: u64, count: usize) -> Vec<DualityBox> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = if i < count / 2 { 1 } else { 2 };
            let mut lo = Vec::with_capacity(n);
            let mut hi = Vec::with_capacity(n);
            for _ in 0..n {
                let q: i64 = rng.gen_range(1..=4);
                let a = rat(rng.gen_range(-2 * q..=q), q);
                let q2: i64 = rng.gen_range(2..=5);
                let w = rat(rng.gen_range(1..q2), q2);
                hi.push(&a + w);
                lo.push(a);
            }
            DualityBox { lo, hi }
        })
        .collect()
}

/// `Hom^*(C_D, C_{Int σ^∨})` against `C_{-DD}` for boxes `D` and the positive orthant `σ`.
pub fn verify_polytope_duality(boxes: &[DualityBox]) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::default();
    report.param("boxes", boxes.len());
    let results: Vec<_> = boxes
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            let n = b.lo.len();
            let d = LCPolyhedron::boxed(&b.lo, &b.hi, &vec![true; n], &vec![false; n]);
            let neg_lo: Vec<Rat> = b.hi.iter().map(|x| -x).collect();
            let neg_hi: Vec<Rat> = b.lo.iter().map(|x| -x).collect();
            let expected = LCPolyhedron::boxed(&neg_lo, &neg_hi, &vec![true; n], &vec![false; n]);
            let orthant = LCPolyhedron::new(
                n,
                (0..n)
                    .map(|k| {
                        let mut e = vec![Int::zero(); n];
                        e[k] = Int::one();
                        Constraint::new(e, Rat::zero(), Relation::Gt)
                    })
                    .collect(),
            );
            let (rd, rg, r) = (rat_i(3), rat_i(6), rat_i(3));
            let f = IndicatorComplex::indicator(d, 0).sheaf(rd)?;
            let g = IndicatorComplex::indicator(orthant, 0).sheaf(rg)?;
            let h = hom_star(&f, &g, r.clone())?;
            let e = IndicatorComplex::indicator(expected, 0).sheaf(r)?;
            let same = same_profile(&h.sheaf, &e)?;
            Ok::<_, VerifyError>((i, b, h, same))
        })
        .collect::<Result<_, _>>()?;
    for (i, b, h, same) in results {
        let name = format!(
            "box{i} ({})",
            b.lo.iter().zip(&b.hi).map(|(l, u)| format!("({},{}]", fmt_rat(l), fmt_rat(u))).collect::<Vec<_>>().join("x")
        );
        if !same {
            report.fail(format!("{name}: Hom^* differs from the indicator of -DD"));
        }
        report.table(name, nonzero_stalks(&h.sheaf));
    }
    Ok(report)
}

/// Coherent line-bundle cohomology against `RHom(κ(O) + m, κ(O(D)))`, degree by degree.
pub fn verify_line_bundles(sf: &StackyFan, divisors: &[DivisorData], window: i64) -> Result<CheckReport, VerifyError> {
    if !sf.fan().is_complete() {
        return Err(VerifyError::Precondition("the fan is not complete".into()));
    }
    let mut report = CheckReport::default();
    report.param("window_radius", window);
    let unit = kappa_structure_sheaf(sf)?;
    let results: Vec<_> = divisors
        .par_iter()
        .map(|d| {
            let coherent = line_bundle_cohomology(sf, d, window)?;
            let torus = torus_hom_with(&unit, &kappa_line_bundle(sf, d)?, window, &TorusOptions::default())?;
            let sections = global_section_count(sf, d, window)?;
            Ok::<_, VerifyError>((d, coherent, torus, sections))
        })
        .collect::<Result<_, _>>()?;
    for (d, coherent, torus, sections) in results {
        let name = format!("O{:?}", divisor_vec(d));
        for m in lattice_box(sf.n_rank(), window) {
            let expected: BTreeMap<i32, usize> =
                coherent.at(&to_int(&m)).iter().enumerate().filter(|(_, &h)| h > 0).map(|(p, &h)| (p as i32, h)).collect();
            let got = torus.at(&m);
            if got != expected {
                report.fail(format!("{name} at m={m:?}: coherent {expected:?}, constructible {got:?}"));
            }
        }
        let h0 = coherent.totals().first().copied().unwrap_or(0);
        if h0 != sections {
            report.fail(format!("{name}: h0 = {h0} but the section polytope has {sections} points"));
        }
        report.table(
            format!("{name} coherent"),
            coherent.per_degree.iter().map(|(m, h)| {
                (Key::Lattice(m.iter().map(to_i64).collect()), h.iter().enumerate().filter(|(_, &x)| x > 0).map(|(p, &x)| (p as i32, x)).collect())
            }),
        );
        report.table(format!("{name} constructible"), torus.dims.iter().map(|(m, d)| (Key::Lattice(m.clone()), d.clone())));
    }
    Ok(report)
}

/// Default divisors: multiples `d D_last` for `d` in `-2..=2`.
pub fn default_divisors(sf: &StackyFan) -> Vec<DivisorData> {
    let k = sf.fan_hat().rays().len();
    (-2..=2)
        .map(|d| {
            let mut c = vec![0i64; k];
            c[k - 1] = d;
            DivisorData::from_i64(&c)
        })
        .collect()
}

/// `|M_{σ,β}/M| = |H_β|` for every cone: coset enumeration against the Smith form order.
pub fn verify_stacky(sf: &StackyFan) -> CheckReport {
    let mut report = CheckReport::default();
    let mut rows = Vec::new();
    for c in 0..sf.fan().len() {
        let cosets = sf.cosets(c).len();
        let group = sf.stabilizer(c);
        let order = group.order();
        if Int::from(cosets) != order {
            report.fail(format!("cone {c}: {cosets} cosets but |H| = {order}"));
        }
        report.note(format!("cone {c}: H = {group}"));
        rows.push((Key::Lattice(vec![c as i64]), [(0, cosets)].into_iter().collect()));
    }
    report.table("cosets per cone", rows);
    report
}

/// Window doubling and generic refinement leave hom tables and unit stalks unchanged.
pub fn verify_stability(sf: &StackyFan, window: i64) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::default();
    report.param("window_radius", window);
    let pairs = face_pairs(sf);
    let extra = generic_walls(sf.n_rank());
    let variants = [
        ("base", TorusOptions::default()),
        ("doubled", TorusOptions { window_scale: 2, extra_walls: Vec::new() }),
        ("refined", TorusOptions { window_scale: 1, extra_walls: extra.clone() }),
    ];
    let tables: Vec<_> = variants
        .par_iter()
        .map(|(name, opts)| verify_hom_match(sf, &pairs, window, opts).map(|r| (*name, r.tables, r.status)))
        .collect::<Result<_, _>>()?;
    for (name, t, status) in &tables[1..] {
        report.stable(format!("hom tables {name}"), *t == tables[0].1);
        report.stable(format!("hom status {name}"), *status == tables[0].2);
    }
    if sf.fan().is_complete() {
        let base = unit_stalks(sf, window, &[])?;
        let doubled = unit_stalks(sf, 2 * window, &[])?;
        let refined = unit_stalks(sf, window, &extra)?;
        let support = |v: &Stalks, r: i64| -> Stalks {
            let r = rat_i(r);
            v.iter().filter(|(x, d)| !d.is_empty() && x.iter().all(|c| c.clone().abs() < r)).cloned().collect()
        };
        report.stable("unit doubled", support(&base, window) == support(&doubled, window));
        // refinement splits strata, so compare the stalk at every refined sample through the coarse one
        let coarse_at = |x: &[Rat]| base.iter().find(|(y, _)| y == x).map(|(_, d)| d.clone());
        let refined_ok = refined.iter().all(|(x, d)| coarse_at(x).is_none_or(|c| c == *d))
            && support(&refined, window).iter().map(|(_, d)| d.clone()).collect::<Vec<_>>()
                == support(&base, window).iter().map(|(_, d)| d.clone()).collect::<Vec<_>>();
        report.stable("unit refined", refined_ok);
    }
    Ok(report)
}
