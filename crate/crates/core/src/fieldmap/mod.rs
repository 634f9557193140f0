//! Physical outputs built on the sphere integrals: responses at arbitrary
//! positions, shift gradients, the vacuum-induced force and scans.

mod force;
mod response;
mod scan;

pub use force::{
    excited_population, force_at, force_from_response, weak_drive_population, Drive, ForceResult,
    WEAK_EXCITATION_LIMIT,
};
pub use response::{response_at, shift_gradient, DEFAULT_TOLERANCE, MAX_REFINEMENTS};
pub use scan::{linspace, run_scan, trap_summary, Method, RowStatus, ScanAxis, ScanOutputs, ScanRow, ScanSpec, TrapSummary};
