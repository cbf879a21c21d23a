//! Finite-dimensional algebras by structure constants, their
//! multiplication tensors, and quotients by two-sided ideals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tensor::Tensor3;
use crate::config::Config;
use crate::error::{internal_err, param_err, resource_err, Error, Result};
use crate::ffla::{check_field, FFMatrix, FFVector, Subspace};
use crate::group::Group;

/// `e_i e_j = Σ_k c_ijk e_k` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    p: u32,
    dim: usize,
    /// `products[i * dim + j]` holds the sparse expansion of `e_i e_j`.
    products: Vec<Vec<(usize, u32)>>,
}

impl StructureConstants {
    /// From `(i, j, k, c)` quadruples; repeated positions accumulate.
    pub fn new(p: u32, dim: usize, entries: impl IntoIterator<Item = (usize, usize, usize, u32)>) -> Result<Self> {
        check_field(p)?;
        let mut dense = vec![vec![0u32; dim]; dim * dim];
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(param_err!("structure constant index ({i}, {j}, {k}) out of range"));
            }
            let slot = &mut dense[i * dim + j][k];
            *slot = (*slot + c % p) % p;
        }
        let products = dense
            .into_iter()
            .map(|v| v.into_iter().enumerate().filter(|&(_, c)| c != 0).collect())
            .collect();
        Ok(StructureConstants { p, dim, products })
    }

    /// `F_p[G]` on the group-element basis.
    pub fn group_algebra(g: &Group, p: u32) -> Result<Self> {
        let n = g.order();
        Self::new(p, n, (0..n * n).map(|x| (x / n, x % n, g.mul_idx(x / n, x % n), 1)))
    }

    /// `M_d(F_p)` on matrix units `E_ab` (index `a * d + b`).
    pub fn matrix_algebra(d: usize, p: u32) -> Result<Self> {
        let mut entries = Vec::new();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    entries.push((a * d + b, b * d + c, a * d + c, 1));
                }
            }
        }
        Self::new(p, d * d, entries)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.products[i * self.dim + j]
    }

    /// Bilinear product of coordinate vectors.
    pub fn mul(&self, x: &FFVector, y: &FFVector) -> FFVector {
        let p = self.p as u64;
        let mut acc = vec![0u64; self.dim];
        for i in 0..self.dim {
            let xi = x.get(i) as u64;
            if xi == 0 {
                continue;
            }
            for j in 0..self.dim {
                let yj = y.get(j) as u64;
                if yj == 0 {
                    continue;
                }
                let w = xi * yj % p;
                for &(k, c) in self.basis_product(i, j) {
                    acc[k] = (acc[k] + w * c as u64) % p;
                }
            }
        }
        FFVector::from_residues(self.p, &acc.into_iter().map(|v| v as u32).collect::<Vec<_>>())
    }

    fn basis_vector(&self, i: usize) -> FFVector {
        FFVector::unit(self.p, self.dim, i)
    }

    /// `(e_i e_j) e_k = e_i (e_j e_k)` on `samples` random basis triples, or
    /// on all triples when there are at most that many.
    pub fn check_associative(&self, samples: usize, seed: u64) -> Result<()> {
        let n = self.dim;
        let triples: Vec<(usize, usize, usize)> = if n * n * n <= samples {
            (0..n * n * n).map(|x| (x / (n * n), (x / n) % n, x % n)).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)))
                .collect()
        };
        for (i, j, k) in triples {
            let (ei, ej, ek) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(k));
            if self.mul(&self.mul(&ei, &ej), &ek) != self.mul(&ei, &self.mul(&ej, &ek)) {
                return Err(Error::Input(format!(
                    "structure constants are not associative at basis triple ({i}, {j}, {k})"
                )));
            }
        }
        Ok(())
    }

    fn to_tensor(&self) -> Tensor3 {
        let mut t = Tensor3::zero([self.dim; 3], self.p).expect("valid field");
        for i in 0..self.dim {
            for j in 0..self.dim {
                for &(k, c) in self.basis_product(i, j) {
                    t.add(i, j, k, c);
                }
            }
        }
        t
    }
}

/// `T_{k[G]} = Σ_{g,h} x_g y_h z_{gh}`.
pub fn build_group_tensor(g: &Group, ell: u32, cfg: &Config) -> Result<Tensor3> {
    check_field(ell)?;
    if g.order() > cfg.tensor_cap {
        return Err(resource_err!(
            "group tensor of order {} above cap {}",
            g.order(),
            cfg.tensor_cap
        ));
    }
    let n = g.order();
    let mut t = Tensor3::zero([n; 3], ell)?;
    for a in 0..n {
        for b in 0..n {
            t.add(a, b, g.mul_idx(a, b), 1);
        }
    }
    Ok(t)
}

/// Multiplication tensor of an algebra, after an associativity spot-check
/// on 100 random basis triples.
pub fn build_algebra_tensor(sc: &StructureConstants) -> Result<Tensor3> {
    sc.check_associative(100, 0)?;
    Ok(sc.to_tensor())
}

/// Multiplication tensor of `A/J`.
///
/// `S` is the set of non-pivot columns of `J`'s echelon basis, so the
/// images of `e_s` (`s ∈ S`) form a basis of `A/J`. Modes 1 and 2 are
/// restricted to `S`; mode 3 is mapped by the quotient map written in that
/// basis. The result is checked against the structure constants of `A/J`
/// computed directly.
pub fn quotient_tensor(sc: &StructureConstants, j: &Subspace) -> Result<Tensor3> {
    let n = sc.dim;
    let p = sc.p;
    if j.ambient_dim() != n || j.p() != p {
        return Err(param_err!("ideal lives in F_{}^{}, algebra is F_{p}^{n}", j.p(), j.ambient_dim()));
    }
    for v in j.basis().rows() {
        for i in 0..n {
            let e = sc.basis_vector(i);
            if !j.contains(&sc.mul(&e, v)) || !j.contains(&sc.mul(v, &e)) {
                return Err(Error::Input("subspace is not a two-sided ideal".into()));
            }
        }
    }
    let s = j.non_pivots();
    let q = s.len();
    let mut restrict = FFMatrix::zero(p, q, n);
    for (r, &c) in s.iter().enumerate() {
        restrict.set(r, c, 1);
    }
    let mut phi = FFMatrix::zero(p, q, n);
    for k in 0..n {
        let red = j.reduce(&sc.basis_vector(k));
        for (r, &c) in s.iter().enumerate() {
            phi.set(r, k, red.get(c));
        }
    }
    let via_maps = sc.to_tensor().apply_mode_maps(&restrict, &restrict, &phi)?;

    let mut direct = Tensor3::zero([q; 3], p)?;
    for (a, &sa) in s.iter().enumerate() {
        for (b, &sb) in s.iter().enumerate() {
            let prod = j.reduce(&sc.mul(&sc.basis_vector(sa), &sc.basis_vector(sb)));
            for (c, &sc_) in s.iter().enumerate() {
                direct.add(a, b, c, prod.get(sc_));
            }
        }
    }
    if via_maps != direct {
        return Err(internal_err!("quotient tensor differs from the quotient algebra's tensor"));
    }
    Ok(via_maps)
}
