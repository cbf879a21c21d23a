//! Homomorphism spaces out of cyclic modules via a standard basis.
//!
//! If `v` generates `M`, a module map `φ: M → N` is fixed by `w = φ(v)`.
//! Spinning `v` gives basis vectors `b_k = g_{s_k} b_{parent(k)}`, hence
//! `φ(b_k) = T_k w` with `T_k = ρ_N(g_{s_k}) T_{parent(k)}`; the remaining
//! generator images of the `b_k` give linear conditions on `w`.

use std::collections::HashSet;

use super::module::GModule;
use crate::error::{param_err, Error, Result};
use crate::ffla::{Echelon, FFMatrix, FFVector};

struct StandardBasis {
    vectors: Vec<FFVector>,
    /// `(parent, generator)` for every vector after the first.
    links: Vec<Option<(usize, usize)>>,
}

fn standard_basis(m: &GModule, v: FFVector) -> Option<StandardBasis> {
    let mut ech = Echelon::new(m.p(), m.dim());
    ech.insert(v.clone())?;
    let mut vectors = vec![v];
    let mut links = vec![None];
    let mut next = 0;
    while next < vectors.len() && vectors.len() < m.dim() {
        for s in 0..m.num_gens() {
            let w = m.apply_gen(s, &vectors[next]);
            if ech.insert(w.clone()).is_some() {
                vectors.push(w);
                links.push(Some((next, s)));
                if vectors.len() == m.dim() {
                    break;
                }
            }
        }
        next += 1;
    }
    (vectors.len() == m.dim()).then_some(StandardBasis { vectors, links })
}

/// `dim Hom(M, N)` for `M` generated by its first basis vector.
pub(crate) fn hom_dim(m: &GModule, n: &GModule) -> Result<usize> {
    if m.p() != n.p() || m.group().descriptor() != n.group().descriptor() {
        return Err(param_err!("modules over different groups or fields"));
    }
    let p = m.p();
    let sb = standard_basis(m, FFVector::unit(p, m.dim(), 0))
        .ok_or_else(|| Error::Contract("module is not cyclic on its first basis vector, so not simple".into()))?;
    let d = m.dim();
    let dn = n.dim();

    // coordinates in the standard basis: X c = y with the b_k as columns
    let x_inv = FFMatrix::from_vectors(p, d, sb.vectors.clone())
        .transpose()
        .inverse()
        .expect("standard basis is independent");

    let mut t: Vec<FFMatrix> = Vec::with_capacity(d);
    for link in &sb.links {
        t.push(match link {
            None => FFMatrix::identity(p, dn),
            Some((parent, s)) => n.gen_actions()[*s].mul(&t[*parent]).expect("square"),
        });
    }
    let used: HashSet<(usize, usize)> = sb.links.iter().flatten().copied().collect();

    let mut conditions = Echelon::new(p, dn);
    for (k, b) in sb.vectors.iter().enumerate() {
        for s in 0..m.num_gens() {
            if used.contains(&(k, s)) {
                continue;
            }
            let coords = x_inv.apply(&m.apply_gen(s, b));
            let mut residual = n.gen_actions()[s].mul(&t[k]).expect("square");
            residual.scale(p - 1);
            for (j, tj) in t.iter().enumerate() {
                let c = coords.get(j);
                if c != 0 {
                    residual = residual.add_scaled(c, tj).expect("same shape");
                }
            }
            for row in residual.into_rows() {
                conditions.insert(row);
                if conditions.dim() == dn {
                    return Ok(0);
                }
            }
        }
    }
    Ok(dn - conditions.dim())
}

/// Dimension over `F_p` of `End(M)` for a simple module `M`.
pub fn endo_degree(m: &GModule) -> Result<usize> {
    let e = hom_dim(m, m)?;
    if e == 0 || !m.dim().is_multiple_of(e) {
        return Err(Error::Contract(format!(
            "endomorphism dimension {e} is impossible for a {}-dimensional simple module",
            m.dim()
        )));
    }
    Ok(e)
}

/// Isomorphism test for simple modules over the same group and field.
pub fn are_isomorphic(a: &GModule, b: &GModule) -> Result<bool> {
    if a.dim() != b.dim() {
        if a.p() != b.p() || a.group().descriptor() != b.group().descriptor() {
            return Err(param_err!("modules over different groups or fields"));
        }
        return Ok(false);
    }
    Ok(hom_dim(a, b)? > 0)
}
