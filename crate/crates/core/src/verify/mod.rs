//! Cross-checks between the coherent side and the constructible side, and the suite runner.

mod checks;
mod kappa;
mod report;

use std::collections::BTreeMap;

pub use crate::coherent::{build_cech_poset, CechPoset};
pub use checks::{
    convolve_auto, default_divisor_pairs, default_divisors, default_refinement_cone, face_pairs, generator_label,
    generic_walls, random_boxes, verify_hom_match, verify_line_bundles, verify_monoidal, verify_polytope_duality,
    verify_refinement, verify_skeleton_ss, verify_ss_estimate, verify_stability, verify_stacky, verify_unit,
    verify_vanishing, DualityBox,
};
pub use kappa::{kappa_cech, kappa_generator, kappa_line_bundle, kappa_structure_sheaf, zero_divisor};
pub use report::{CheckReport, DimRow, DimTable, Key, Status, SuiteParameters, VerificationReport};

use crate::coherent::CoherentError;
use crate::fan::{FanError, StackyFan};
use crate::linalg::LinalgError;
use crate::polysheaf::{SheafError, TorusOptions};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    /// The check does not apply to this input.
    #[error("precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Coherent(#[from] CoherentError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Checks run by [`run_suite`] on a single fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    HomMatch,
    Unit,
    Vanishing,
    Monoidal,
    Refinement,
    SkeletonSs,
    SsEstimate,
    Stacky,
    Stability,
    LineBundles,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::HomMatch,
        CheckId::Unit,
        CheckId::Vanishing,
        CheckId::Monoidal,
        CheckId::Refinement,
        CheckId::SkeletonSs,
        CheckId::SsEstimate,
        CheckId::Stacky,
        CheckId::Stability,
        CheckId::LineBundles,
    ];

    /// Fast checks, run by default.
    pub const DEFAULT: [CheckId; 6] =
        [CheckId::HomMatch, CheckId::Unit, CheckId::SkeletonSs, CheckId::Stacky, CheckId::Vanishing, CheckId::Monoidal];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::HomMatch => "hom_match",
            CheckId::Unit => "unit",
            CheckId::Vanishing => "vanishing",
            CheckId::Monoidal => "monoidal",
            CheckId::Refinement => "refinement",
            CheckId::SkeletonSs => "skeleton_ss",
            CheckId::SsEstimate => "ss_estimate",
            CheckId::Stacky => "stacky",
            CheckId::Stability => "stability",
            CheckId::LineBundles => "line_bundles",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Runs one check; precondition failures become skipped reports.
pub fn run_check(sf: &StackyFan, id: CheckId, params: &SuiteParameters) -> Result<CheckReport, VerifyError> {
    let w = params.window_radius;
    let result = match id {
        CheckId::HomMatch => verify_hom_match(sf, &face_pairs(sf), params.box_radius, &TorusOptions::default()),
        CheckId::Unit => verify_unit(sf, w),
        CheckId::Vanishing => verify_vanishing(sf, w),
        CheckId::Monoidal => verify_monoidal(sf, &default_divisor_pairs(sf), w),
        CheckId::Refinement => verify_refinement(sf, default_refinement_cone(sf), w),
        CheckId::SkeletonSs => verify_skeleton_ss(sf, w),
        CheckId::SsEstimate => verify_ss_estimate(sf, w),
        CheckId::Stacky => Ok(verify_stacky(sf)),
        CheckId::Stability => verify_stability(sf, params.box_radius),
        CheckId::LineBundles => verify_line_bundles(sf, &default_divisors(sf), params.box_radius),
    };
    match result {
        Err(VerifyError::Precondition(reason)) => Ok(CheckReport::skipped(reason)),
        other => other,
    }
}

/// Runs the selected checks in parallel on `jobs` threads (0 means the rayon default).
pub fn run_suite(
    name: &str,
    sf: &StackyFan,
    selection: &[CheckId],
    params: &SuiteParameters,
    jobs: usize,
) -> Result<VerificationReport, VerifyError> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let results: Vec<(CheckId, CheckReport)> = pool.install(|| {
        selection.par_iter().map(|&id| run_check(sf, id, params).map(|r| (id, r))).collect::<Result<_, _>>()
    })?;
    let checks: BTreeMap<String, CheckReport> = results.into_iter().map(|(id, r)| (id.name().to_string(), r)).collect();
    Ok(VerificationReport { suite: name.to_string(), parameters: params.clone(), checks })
}
