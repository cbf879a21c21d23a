//! Slice rank of multiplication tensors: lower bounds from matchings and
//! from the semisimple quotient, quotient tensors, an exact oracle for tiny
//! tensors, and the monomial-count upper bound for `F_p^n`.

mod algebra;
mod clp;
mod exact;
mod tensor;

use serde::Serialize;

pub use algebra::{build_algebra_tensor, build_group_tensor, quotient_tensor, StructureConstants};
pub use clp::{c_p, clp_count};
pub use exact::{
    exact_slice_rank, slices_to_tensor, sr_monotonicity_check, vanishing_triple_to_slices, Slice,
    VanishingTriple,
};
pub use tensor::Tensor3;

use crate::error::{internal_err, param_err, Error, Result};
use crate::group::Group;
use crate::matching::{verify_matching, Matching};
use crate::modrep::SimpleSummary;

/// Indices of the `m × m × m` unit-diagonal subtensor certifying a
/// matching lower bound: rows `a_i`, columns `b_j`, tubes `c_k^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalCertificate {
    pub m: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub tubes: Vec<usize>,
}

/// `SR(T_{k[G]}) ≥ m` for a valid matching, with the embedded diagonal
/// checked against the tensor's own coefficients.
pub fn sr_lower_from_matching(g: &Group, t: &Tensor3, cand: &Matching) -> Result<(usize, DiagonalCertificate)> {
    if t.dims() != [g.order(); 3] {
        return Err(param_err!("tensor dims {:?} do not match order {}", t.dims(), g.order()));
    }
    if let Some(v) = verify_matching(g, cand)? {
        return Err(Error::Input(format!("not a matching: violation at {v:?}")));
    }
    let idx = |xs: &[crate::ElementId]| xs.iter().map(|&x| g.index_of(x)).collect::<Result<Vec<_>>>();
    let rows = idx(&cand.a)?;
    let cols = idx(&cand.b)?;
    let tubes: Vec<usize> = idx(&cand.c)?.into_iter().map(|c| g.inv_idx(c)).collect();
    let m = cand.m();
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            for (k, &z) in tubes.iter().enumerate() {
                let expect = u32::from(i == j && j == k);
                if t.get(r, c, z) != expect {
                    return Err(internal_err!("diagonal certificate fails at ({i}, {j}, {k})"));
                }
            }
        }
    }
    Ok((m, DiagonalCertificate { m, rows, cols, tubes }))
}

/// `SR(T_{F_ℓ[G]}) ≥ dim F_ℓ[G]/J`.
pub fn sr_lower_semisimple(summary: &SimpleSummary) -> usize {
    summary.dim_semisimple
}
