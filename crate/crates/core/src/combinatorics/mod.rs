//! Two-graphs, strongly regular graphs, regular simplices, incoherent sets and
//! designs extracted from equiangular systems.

mod design;
mod incoherence;
mod simplex;
mod twograph;

pub use design::{design_verify, Design, FisherReport};
pub use incoherence::{
    design_extract, gamma_analyze, incoherence_number, incoherent_set, is_incoherent, switch_normalize_incoherent, DesignExtraction,
    GammaReport, IncoherenceReport, IncoherentSet, NormalizedSystem,
};
pub use simplex::{is_regular_simplex, simplex_criteria, simplex_enumerate, SimplexRecord};
pub use twograph::{
    etf_twograph_correspond, seidel_two_eigenvalues, srg_check, two_graph_of, two_graph_regularity,
    CorrespondenceReport, SrgParams, SrgReport, TwoGraph, TwoGraphParams,
};

use crate::error::{Error, Result};
use crate::frames::{EquiangularParams, FrameSystem};
use crate::gf::Elem;

pub(crate) fn triple_product(fs: &FrameSystem, i: usize, j: usize, k: usize) -> Elem {
    let f = fs.field();
    f.mul(f.mul(fs.product(i, j), fs.product(j, k)), fs.product(k, i))
}

/// Equiangular parameters with β² = b (and b ≠ 0 when `nonzero`).
pub(crate) fn check_beta(fs: &FrameSystem, beta: Elem, nonzero: bool) -> Result<EquiangularParams> {
    let params = fs.equiangular().ok_or(Error::NotEquiangular)?;
    let f = fs.field();
    if f.mul(beta, beta) != params.b || (nonzero && beta.is_zero()) {
        return Err(Error::BetaNotRoot);
    }
    Ok(params)
}
