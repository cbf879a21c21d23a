//! Exact slice rank of tiny tensors by subspace enumeration, and the
//! explicit slice decomposition attached to a vanishing triple.

use serde::Serialize;

use super::tensor::Tensor3;
use crate::config::Config;
use crate::error::{param_err, Error, Result};
use crate::ffla::{enumerate_subspaces, FFMatrix, FFVector, Subspace};

/// Subspaces `V_1, V_2, V_3` with `T(V_1, V_2, V_3) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingTriple {
    pub v: [Subspace; 3],
    pub codim_sum: usize,
}

impl VanishingTriple {
    pub fn new(v: [Subspace; 3]) -> Self {
        let codim_sum = v.iter().map(Subspace::codim).sum();
        VanishingTriple { v, codim_sum }
    }
}

/// One slice: `covector ⊗ matrix` with the covector on `mode` and the
/// matrix on the other two modes in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slice {
    pub mode: usize,
    pub covector: Vec<u32>,
    pub matrix: Vec<Vec<u32>>,
}

struct Dense {
    dims: [usize; 3],
    p: u32,
    c: Vec<u32>,
}

impl Dense {
    fn new(t: &Tensor3) -> Self {
        Dense {
            dims: t.dims(),
            p: t.p(),
            c: t.to_dense(),
        }
    }

    fn at(&self, i: usize, j: usize, k: usize) -> u64 {
        self.c[(i * self.dims[1] + j) * self.dims[2] + k] as u64
    }

    /// The covector `z ↦ T(x, y, z)`.
    fn contract12(&self, x: &FFVector, y: &FFVector) -> FFVector {
        let p = self.p as u64;
        let [n1, n2, n3] = self.dims;
        let mut out = vec![0u64; n3];
        for i in 0..n1 {
            let xi = x.get(i) as u64;
            if xi == 0 {
                continue;
            }
            for j in 0..n2 {
                let w = xi * y.get(j) as u64 % p;
                if w == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o = (*o + w * self.at(i, j, k)) % p;
                }
            }
        }
        FFVector::from_residues(self.p, &out.into_iter().map(|v| v as u32).collect::<Vec<_>>())
    }
}

/// `codim V_3` of the best `V_3` for given `V_1, V_2`: the rank of the
/// covectors `T(v, w, ·)`.
fn mode3_rank(d: &Dense, v1: &Subspace, v2: &Subspace) -> (usize, Vec<FFVector>) {
    let covs: Vec<FFVector> = v1
        .basis()
        .rows()
        .iter()
        .flat_map(|x| v2.basis().rows().iter().map(move |y| (x, y)))
        .map(|(x, y)| d.contract12(x, y))
        .collect();
    let rank = FFMatrix::from_vectors(d.p, d.dims[2], covs.clone()).rank();
    (rank, covs)
}

/// Minimum of `codim V_1 + codim V_2 + codim V_3` over vanishing triples.
///
/// For fixed `V_1, V_2` the largest admissible `V_3` is the annihilator of
/// the covectors `T(v, w, ·)`, so only pairs are enumerated, and pairs
/// whose first two codimensions already reach the incumbent are skipped.
pub fn exact_slice_rank(t: &Tensor3, cfg: &Config) -> Result<(usize, VanishingTriple)> {
    let [n1, n2, n3] = t.dims();
    let p = t.p();
    let s1: Vec<Subspace> = enumerate_subspaces(n1, p, cfg.subspace_guard)?.collect();
    let s2: Vec<Subspace> = enumerate_subspaces(n2, p, cfg.subspace_guard)?.collect();
    if (p as u64).checked_pow(n3 as u32).is_none_or(|s| s > cfg.subspace_guard) {
        return Err(crate::error::resource_err!(
            "mode 3 of size {n3} over F_{p} exceeds the subspace guard {}",
            cfg.subspace_guard
        ));
    }
    let d = Dense::new(t);

    // V_1 = V_2 = 0 with V_3 full always vanishes
    let mut best = n1 + n2;
    let mut witness = (Subspace::zero(p, n1), Subspace::zero(p, n2), Subspace::full(p, n3));
    for v1 in &s1 {
        if v1.codim() >= best {
            continue;
        }
        for v2 in &s2 {
            if v1.codim() + v2.codim() >= best {
                continue;
            }
            let (rank, covs) = mode3_rank(&d, v1, v2);
            if v1.codim() + v2.codim() + rank < best {
                best = v1.codim() + v2.codim() + rank;
                let span = Subspace::from_vectors(p, n3, covs);
                witness = (v1.clone(), v2.clone(), span.annihilator());
            }
        }
    }
    let triple = VanishingTriple::new([witness.0, witness.1, witness.2]);
    debug_assert_eq!(triple.codim_sum, best);
    Ok((best, triple))
}

fn vanishes(d: &Dense, w: &VanishingTriple) -> bool {
    w.v[0].basis().rows().iter().all(|x| {
        w.v[1].basis().rows().iter().all(|y| {
            let cov = d.contract12(x, y);
            w.v[2].basis().rows().iter().all(|z| cov.dot(z) == 0)
        })
    })
}

/// Basis of `F_p^n` extending `V` by the non-pivot unit vectors, with its
/// dual basis and the projection onto `V` along the added vectors.
struct Adapted {
    /// Dual covectors of the added (complement) basis vectors.
    complement_duals: Vec<FFVector>,
    /// `P` with `P x ∈ V` and `x - P x` in the complement.
    projection: FFMatrix,
}

fn adapted(v: &Subspace) -> Adapted {
    let p = v.p();
    let n = v.ambient_dim();
    let mut basis: Vec<FFVector> = v.basis().rows().to_vec();
    basis.extend(v.non_pivots().into_iter().map(|c| FFVector::unit(p, n, c)));
    // columns are basis vectors; rows of the inverse are the dual covectors
    let cols = FFMatrix::from_vectors(p, n, basis.clone()).transpose();
    let duals = cols.inverse().expect("adapted basis is a basis").into_rows();
    let r = v.dim();
    let mut projection = FFMatrix::zero(p, n, n);
    for (b, dual) in basis.iter().zip(&duals).take(r) {
        for i in 0..n {
            for j in 0..n {
                let x = b.get(i) * dual.get(j) % p;
                if x != 0 {
                    projection.set(i, j, (projection.get(i, j) + x) % p);
                }
            }
        }
    }
    Adapted {
        complement_duals: duals[r..].to_vec(),
        projection,
    }
}

/// Write `T` as `codim V_1 + codim V_2 + codim V_3` slices.
///
/// With `x = P_1 x + Σ δ_β(x) β` over the complement of `V_1`, and likewise
/// for the other modes, the vanishing of `T(V_1, V_2, V_3)` leaves
/// `T(x, y, z) = Σ_β δ_β(x) T(β, y, z) + Σ_γ δ_γ(y) T(P_1 x, γ, z)
/// + Σ_η δ_η(z) T(P_1 x, P_2 y, η)`.
pub fn vanishing_triple_to_slices(t: &Tensor3, w: &VanishingTriple) -> Result<Vec<Slice>> {
    let dims = t.dims();
    let p = t.p();
    for (m, v) in w.v.iter().enumerate() {
        if v.ambient_dim() != dims[m] || v.p() != p {
            return Err(param_err!("subspace for mode {} has the wrong shape", m + 1));
        }
    }
    let d = Dense::new(t);
    if !vanishes(&d, w) {
        return Err(Error::Input("T does not vanish on the given triple".into()));
    }
    let [n1, n2, n3] = dims;
    let pp = p as u64;
    let a: Vec<Adapted> = w.v.iter().map(adapted).collect();
    let (p1, p2) = (&a[0].projection, &a[1].projection);
    let mut slices = Vec::new();

    // the complement basis vectors themselves: β with δ_β(β') = [β = β']
    let complement = |v: &Subspace| -> Vec<FFVector> {
        v.non_pivots()
            .into_iter()
            .map(|c| FFVector::unit(p, v.ambient_dim(), c))
            .collect()
    };

    for (beta, dual) in complement(&w.v[0]).iter().zip(&a[0].complement_duals) {
        let mut m = vec![vec![0u32; n3]; n2];
        for i in 0..n1 {
            let bi = beta.get(i) as u64;
            if bi == 0 {
                continue;
            }
            for (j, row) in m.iter_mut().enumerate() {
                for (k, x) in row.iter_mut().enumerate() {
                    *x = ((*x as u64 + bi * d.at(i, j, k)) % pp) as u32;
                }
            }
        }
        slices.push(Slice {
            mode: 1,
            covector: dual.to_vec(),
            matrix: m,
        });
    }
    for (gamma, dual) in complement(&w.v[1]).iter().zip(&a[1].complement_duals) {
        // M[i][k] = Σ_{i'} P_1[i'][i] T(e_{i'}, γ, e_k)
        let mut m = vec![vec![0u32; n3]; n1];
        for (i, row) in m.iter_mut().enumerate() {
            for i2 in 0..n1 {
                let pi = p1.get(i2, i) as u64;
                if pi == 0 {
                    continue;
                }
                for j in 0..n2 {
                    let gj = gamma.get(j) as u64;
                    if gj == 0 {
                        continue;
                    }
                    for (k, x) in row.iter_mut().enumerate() {
                        *x = ((*x as u64 + pi * gj % pp * d.at(i2, j, k)) % pp) as u32;
                    }
                }
            }
        }
        slices.push(Slice {
            mode: 2,
            covector: dual.to_vec(),
            matrix: m,
        });
    }
    for (eta, dual) in complement(&w.v[2]).iter().zip(&a[2].complement_duals) {
        // M[i][j] = Σ P_1[i'][i] P_2[j'][j] T(e_{i'}, e_{j'}, η)
        let mut m = vec![vec![0u32; n2]; n1];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let mut acc = 0u64;
                for i2 in 0..n1 {
                    let pi = p1.get(i2, i) as u64;
                    if pi == 0 {
                        continue;
                    }
                    for j2 in 0..n2 {
                        let pj = p2.get(j2, j) as u64;
                        if pj == 0 {
                            continue;
                        }
                        for k in 0..n3 {
                            acc = (acc + pi * pj % pp * eta.get(k) as u64 % pp * d.at(i2, j2, k)) % pp;
                        }
                    }
                }
                *x = acc as u32;
            }
        }
        slices.push(Slice {
            mode: 3,
            covector: dual.to_vec(),
            matrix: m,
        });
    }

    let rebuilt = slices_to_tensor(dims, p, &slices)?;
    if &rebuilt != t {
        return Err(crate::error::internal_err!("slice decomposition does not reconstruct T"));
    }
    Ok(slices)
}

/// Sum of slices as a tensor.
pub fn slices_to_tensor(dims: [usize; 3], p: u32, slices: &[Slice]) -> Result<Tensor3> {
    let [n1, n2, n3] = dims;
    let pp = p as u64;
    let mut dense = vec![0u64; n1 * n2 * n3];
    for s in slices {
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    let (c, m) = match s.mode {
                        1 => (s.covector[i], s.matrix[j][k]),
                        2 => (s.covector[j], s.matrix[i][k]),
                        3 => (s.covector[k], s.matrix[i][j]),
                        _ => return Err(param_err!("slice mode must be 1, 2 or 3")),
                    };
                    let x = &mut dense[(i * n2 + j) * n3 + k];
                    *x = (*x + c as u64 * m as u64) % pp;
                }
            }
        }
    }
    Tensor3::from_dense(dims, p, &dense.into_iter().map(|v| v as u32).collect::<Vec<_>>())
}

/// Exact slice rank before and after applying linear maps to the three
/// modes; `true` when it did not increase.
pub fn sr_monotonicity_check(t: &Tensor3, maps: [&FFMatrix; 3], cfg: &Config) -> Result<bool> {
    let image = t.apply_mode_maps(maps[0], maps[1], maps[2])?;
    let (before, _) = exact_slice_rank(t, cfg)?;
    let (after, _) = exact_slice_rank(&image, cfg)?;
    Ok(after <= before)
}
