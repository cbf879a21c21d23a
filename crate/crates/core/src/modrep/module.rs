use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{param_err, resource_err, Error, Result};
use crate::ffla::{check_field, FFMatrix, FFVector, Subspace};
use crate::group::{Family, Group};

/// A finite-dimensional `F_p[G]`-module given by the (column-convention)
/// action matrices of the group generators.
#[derive(Clone)]
pub struct GModule {
    group: Arc<Group>,
    p: u32,
    dim: usize,
    gens: Vec<FFMatrix>,
    /// Set when every generator acts by a permutation of the basis:
    /// `g_s e_i = e_{perms[s][i]}`.
    perms: Option<Arc<Vec<Vec<u32>>>>,
    transposed: OnceLock<Arc<Vec<FFMatrix>>>,
}

impl std::fmt::Debug for GModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GModule")
            .field("group", &self.group.descriptor())
            .field("p", &self.p)
            .field("dim", &self.dim)
            .finish()
    }
}

impl GModule {
    /// One square action matrix per group generator, all over `F_p`.
    pub fn new(group: Arc<Group>, p: u32, gens: Vec<FFMatrix>) -> Result<Self> {
        check_field(p)?;
        let n_gens = group.generator_indices().len();
        if gens.len() != n_gens {
            return Err(param_err!(
                "{} generator matrices for a group with {n_gens} generators",
                gens.len()
            ));
        }
        let dim = gens.first().map_or(0, |m| m.nrows());
        if dim == 0 {
            return Err(param_err!("modules must have positive dimension"));
        }
        if gens.iter().any(|m| !m.is_square() || m.nrows() != dim || m.p() != p) {
            return Err(param_err!("generator matrices must be square {dim}x{dim} over F_{p}"));
        }
        Ok(GModule {
            group,
            p,
            dim,
            gens,
            perms: None,
            transposed: OnceLock::new(),
        })
    }

    fn from_permutations(group: Arc<Group>, p: u32, perms: Vec<Vec<u32>>) -> Self {
        let dim = perms[0].len();
        let gens = perms.iter().map(|q| FFMatrix::permutation(p, q)).collect();
        GModule {
            group,
            p,
            dim,
            gens,
            perms: Some(Arc::new(perms)),
            transposed: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gen_actions(&self) -> &[FFMatrix] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn is_permutation_module(&self) -> bool {
        self.perms.is_some()
    }

    fn transposes(&self) -> &[FFMatrix] {
        self.transposed
            .get_or_init(|| Arc::new(self.gens.iter().map(FFMatrix::transpose).collect()))
    }

    /// `g_s v`.
    pub fn apply_gen(&self, s: usize, v: &FFVector) -> FFVector {
        match &self.perms {
            Some(perms) => {
                let mut out = FFVector::zero(self.p, self.dim);
                for (i, &j) in perms[s].iter().enumerate() {
                    let x = v.get(i);
                    if x != 0 {
                        out.set(j as usize, x);
                    }
                }
                out
            }
            None => self.gens[s].apply(v),
        }
    }

    /// `g_s^T v`, the action on the dual under the dot-product pairing.
    pub fn apply_gen_transposed(&self, s: usize, v: &FFVector) -> FFVector {
        match &self.perms {
            Some(perms) => {
                let mut out = FFVector::zero(self.p, self.dim);
                for (i, &j) in perms[s].iter().enumerate() {
                    let x = v.get(j as usize);
                    if x != 0 {
                        out.set(i, x);
                    }
                }
                out
            }
            None => self.transposes()[s].apply(v),
        }
    }

    /// `g_s e_c`.
    fn gen_column(&self, s: usize, c: usize) -> FFVector {
        match &self.perms {
            Some(perms) => FFVector::unit(self.p, self.dim, perms[s][c] as usize),
            None => self.transposes()[s].row(c).clone(),
        }
    }

    /// `g_{s_1} ... g_{s_k} v`.
    pub fn apply_word(&self, word: &[usize], v: &FFVector) -> FFVector {
        word.iter()
            .rev()
            .fold(v.clone(), |acc, &s| self.apply_gen(s, &acc))
    }

    /// Action matrix of a generator word.
    pub fn word_matrix(&self, word: &[usize]) -> FFMatrix {
        let mut out = FFMatrix::identity(self.p, self.dim);
        for &s in word.iter().rev() {
            out = self.gens[s].mul(&out).expect("square actions");
        }
        out
    }

    /// Action matrix of the element with the given index.
    pub fn element_action(&self, idx: usize) -> FFMatrix {
        self.word_matrix(&self.group.word(idx))
    }

    /// Action matrices of every element, indexed by element index, built
    /// along the BFS factorization.
    pub fn element_actions(&self) -> Vec<FFMatrix> {
        let n = self.group.order();
        let mut out: Vec<Option<FFMatrix>> = vec![None; n];
        for (i, link) in self.group.bfs_order() {
            out[i] = Some(match link {
                None => FFMatrix::identity(self.p, self.dim),
                Some((parent, s)) => self.gens[s]
                    .mul(out[parent].as_ref().expect("parent precedes child"))
                    .expect("square actions"),
            });
        }
        out.into_iter().map(|m| m.expect("every element reached")).collect()
    }

    /// Sampled check of `ρ(u)ρ(v) = ρ(w)` for random generator words `u`,
    /// `v` with `uv = w` in the group, `w` taken as the stored factorization.
    pub fn check_representation(&self, trials: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.num_gens();
        let g = &self.group;
        let gi = g.generator_indices();
        let eval = |w: &[usize]| w.iter().fold(0usize, |acc, &s| g.mul_idx(acc, gi[s]));
        let probes: Vec<FFVector> = if self.dim <= 96 {
            (0..self.dim).map(|i| FFVector::unit(self.p, self.dim, i)).collect()
        } else {
            (0..4).map(|_| random_vector(self.p, self.dim, &mut rng)).collect()
        };
        for t in 0..trials {
            let u: Vec<usize> = (0..rng.random_range(1..=6)).map(|_| rng.random_range(0..k)).collect();
            let v: Vec<usize> = (0..rng.random_range(1..=6)).map(|_| rng.random_range(0..k)).collect();
            let w = g.word(g.mul_idx(eval(&u), eval(&v)));
            for x in &probes {
                let lhs = self.apply_word(&u, &self.apply_word(&v, x));
                let rhs = self.apply_word(&w, x);
                if lhs != rhs {
                    return Err(Error::Contract(format!(
                        "representation property fails on trial {t}: words {u:?} * {v:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The submodule carried by an invariant subspace, in the coordinates
    /// of its echelon basis.
    pub fn submodule(&self, sub: &Subspace) -> Result<GModule> {
        self.check_subspace(sub)?;
        let d = sub.dim();
        let gens = (0..self.num_gens())
            .map(|s| {
                let mut m = FFMatrix::zero(self.p, d, d);
                for (k, b) in sub.basis().rows().iter().enumerate() {
                    let img = self.apply_gen(s, b);
                    let coords = sub
                        .coordinates(&img)
                        .ok_or_else(|| Error::Contract("subspace is not invariant".into()))?;
                    for (j, c) in coords.into_iter().enumerate() {
                        if c != 0 {
                            m.set(j, k, c);
                        }
                    }
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        GModule::new(self.group.clone(), self.p, gens)
    }

    /// The quotient by an invariant subspace, on the images of the
    /// non-pivot unit vectors.
    pub fn quotient(&self, sub: &Subspace) -> Result<GModule> {
        self.check_subspace(sub)?;
        let free = sub.non_pivots();
        let q = free.len();
        let mut pos = vec![usize::MAX; self.dim];
        for (k, &c) in free.iter().enumerate() {
            pos[c] = k;
        }
        let gens = (0..self.num_gens())
            .map(|s| {
                let mut m = FFMatrix::zero(self.p, q, q);
                for (k, &c) in free.iter().enumerate() {
                    let col = self.gen_column(s, c);
                    let red = sub.reduce(&col);
                    for (j, &cj) in free.iter().enumerate() {
                        let x = red.get(cj);
                        if x != 0 {
                            m.set(j, k, x);
                        }
                    }
                }
                m
            })
            .collect();
        GModule::new(self.group.clone(), self.p, gens)
    }

    fn check_subspace(&self, sub: &Subspace) -> Result<()> {
        if sub.ambient_dim() != self.dim || sub.p() != self.p {
            return Err(param_err!("subspace does not live in this module"));
        }
        if sub.dim() == 0 || sub.dim() == self.dim {
            return Err(param_err!("subspace must be proper and nonzero"));
        }
        Ok(())
    }
}

pub(crate) fn random_vector(p: u32, n: usize, rng: &mut impl Rng) -> FFVector {
    loop {
        let v = FFVector::from_residues(p, &(0..n).map(|_| rng.random_range(0..p)).collect::<Vec<_>>());
        if !v.is_zero() {
            return v;
        }
    }
}

/// `F_ell[G]` acting on itself by left multiplication.
pub fn regular_module(group: &Arc<Group>, ell: u32, cfg: &Config) -> Result<GModule> {
    check_field(ell)?;
    if group.order() > cfg.modrep_cap {
        return Err(resource_err!(
            "regular module of {} (order {}) above cap {}",
            group.descriptor(),
            group.order(),
            cfg.modrep_cap
        ));
    }
    let perms = (0..group.generator_indices().len())
        .map(|s| group.generator_left_perm(s).to_vec())
        .collect();
    Ok(GModule::from_permutations(group.clone(), ell, perms))
}

/// Homogeneous polynomials of degree `d` in `x, y` over `F_p`, with
/// `[[a, b], [c, d]]` substituting `x ↦ ax + cy`, `y ↦ bx + dy`. Basis
/// `x^d, x^(d-1) y, ..., y^d`. The group must be `sl2:p`, or `psl2:p` with
/// `d` even.
pub fn sym_power_rep(group: &Arc<Group>, d: usize) -> Result<GModule> {
    let p = match *group.family() {
        Family::Sl2(p) => p,
        Family::Psl2(p) if d.is_multiple_of(2) => p,
        Family::Psl2(_) => return Err(param_err!("odd degree {d} is not a psl2 representation")),
        _ => return Err(param_err!("{} is not sl2:p or psl2:p", group.descriptor())),
    };
    if d as u64 > p - 1 {
        return Err(param_err!("degree {d} outside 0..={}", p - 1));
    }
    let gens = group
        .generators()
        .into_iter()
        .map(|e| {
            let [a, b, c, dd] = group.matrix_entries(e).expect("matrix group");
            let mut m = FFMatrix::zero(p as u32, d + 1, d + 1);
            for i in 0..=d {
                // (a x + c y)^(d-i) (b x + dd y)^i, coefficient j on x^(d-j) y^j
                let mut poly = vec![1u64];
                for k in 0..d {
                    let (s, t) = if k < d - i { (a, c) } else { (b, dd) };
                    let mut next = vec![0u64; poly.len() + 1];
                    for (j, &x) in poly.iter().enumerate() {
                        next[j] = (next[j] + s * x) % p;
                        next[j + 1] = (next[j + 1] + t * x) % p;
                    }
                    poly = next;
                }
                for (j, &x) in poly.iter().enumerate() {
                    m.set(j, i, x as u32);
                }
            }
            m
        })
        .collect();
    GModule::new(group.clone(), p as u32, gens)
}
