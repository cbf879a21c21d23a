//! The Jacobson radical of `F_ℓ[G]`: from the simple modules, and
//! independently by the trace chain on the regular representation.

use std::sync::Arc;

use super::summary::SimpleSummary;
use crate::arith::is_prime;
use crate::config::Config;
use crate::error::{internal_err, param_err, resource_err, Result};
use crate::ffla::{FFMatrix, FFVector, Subspace};
use crate::group::Group;

/// Elements of `F_ℓ[G]` acting as zero on every distinct simple, in the
/// group-element basis (coordinate `i` is element index `i`).
pub fn radical_basis(group: &Arc<Group>, ell: u32, summary: &SimpleSummary) -> Result<Subspace> {
    if summary.ell != ell || summary.group != group.descriptor() {
        return Err(param_err!(
            "summary is for ({}, {}), not ({}, {ell})",
            summary.group,
            summary.ell,
            group.descriptor()
        ));
    }
    let n = group.order();
    // one row per matrix entry of every simple, one column per element
    let mut rows: Vec<FFVector> = Vec::new();
    for s in &summary.simples {
        let actions = s.witness.element_actions();
        let d = s.d;
        for r in 0..d {
            for c in 0..d {
                let mut row = FFVector::zero(ell, n);
                for (x, a) in actions.iter().enumerate() {
                    let v = a.get(r, c);
                    if v != 0 {
                        row.set(x, v);
                    }
                }
                rows.push(row);
            }
        }
    }
    let j = FFMatrix::from_vectors(ell, n, rows).kernel();
    if j.dim() != summary.dim_radical {
        return Err(internal_err!(
            "radical has dimension {} but the summary says {}",
            j.dim(),
            summary.dim_radical
        ));
    }
    Ok(j)
}

/// Product in `(Z/m)[G]`.
fn group_ring_mul(g: &Group, a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let n = g.order();
    let mut out = vec![0u64; n];
    for (x, &ax) in a.iter().enumerate() {
        if ax == 0 {
            continue;
        }
        for (y, &by) in b.iter().enumerate() {
            if by != 0 {
                let z = g.mul_idx(x, y);
                out[z] = (out[z] + ax * by) % m;
            }
        }
    }
    out
}

fn group_ring_pow(g: &Group, a: &[u64], mut e: u64, m: u64) -> Vec<u64> {
    let mut acc = vec![0u64; a.len()];
    acc[0] = 1 % m;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = group_ring_mul(g, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = group_ring_mul(g, &base, &base, m);
        }
    }
    acc
}

/// Dimension of `J(F_ℓ[G])` by the descending trace chain
/// `I_i = {x ∈ I_{i-1} : Tr((x̂ŷ)^{ℓ^i}) / ℓ^i ≡ 0 (mod ℓ) for all y}`,
/// `i = 0, …, ⌊log_ℓ |G|⌋`, with traces of integer lifts in the regular
/// representation taken mod `ℓ^{i+1}`.
pub fn radical_trace_chain(group: &Group, ell: u32, cfg: &Config) -> Result<usize> {
    if !is_prime(ell as u64) {
        return Err(param_err!("{ell} is not prime"));
    }
    let n = group.order();
    if n > cfg.trace_chain_cap {
        return Err(resource_err!(
            "trace chain on order {n} above cap {}",
            cfg.trace_chain_cap
        ));
    }
    let l = ell as u64;
    let mut top = 0u32;
    while l.pow(top + 1) <= n as u64 {
        top += 1;
    }
    // basis of I_{i-1}, entries in [0, ℓ)
    let mut basis: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut v = vec![0u64; n];
            v[i] = 1;
            v
        })
        .collect();
    for i in 0..=top {
        if basis.is_empty() {
            break;
        }
        let scale = l.pow(i);
        let modulus = scale * l;
        // columns: basis elements; rows: y ∈ G
        let mut values = vec![vec![0u32; basis.len()]; n];
        for (a, x) in basis.iter().enumerate() {
            for (y, row) in values.iter_mut().enumerate() {
                // x·y permutes coefficients: (x y)_{g y} = x_g
                let mut z = vec![0u64; n];
                for (g, &c) in x.iter().enumerate() {
                    if c != 0 {
                        z[group.mul_idx(g, y)] = c;
                    }
                }
                let pw = group_ring_pow(group, &z, scale, modulus);
                let trace = (n as u64 % modulus) * pw[0] % modulus;
                if !trace.is_multiple_of(scale) {
                    return Err(internal_err!(
                        "trace {trace} not divisible by {scale} at step {i}"
                    ));
                }
                row[a] = ((trace / scale) % l) as u32;
            }
        }
        let m = FFMatrix::from_rows(ell, &values)?;
        let kernel = m.kernel();
        let next: Vec<FFVector> = kernel
            .basis()
            .rows()
            .iter()
            .map(|lambda| {
                let mut v = vec![0u64; n];
                for (a, x) in basis.iter().enumerate() {
                    let c = lambda.get(a) as u64;
                    if c != 0 {
                        for (g, &xg) in x.iter().enumerate() {
                            v[g] = (v[g] + c * xg) % l;
                        }
                    }
                }
                FFVector::from_residues(ell, &v.iter().map(|&x| x as u32).collect::<Vec<_>>())
            })
            .collect();
        let sub = Subspace::from_vectors(ell, n, next);
        basis = sub
            .basis()
            .rows()
            .iter()
            .map(|r| r.to_vec().into_iter().map(u64::from).collect())
            .collect();
    }
    Ok(basis.len())
}
