//! Composition factors by random splitting with Norton's irreducibility
//! test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::module::{random_vector, GModule};
use crate::error::{Error, Result};
use crate::ffla::{irreducible_factor, spin_with, FFMatrix, FFVector, Poly, Subspace};

/// Largest irreducible factor degree extracted from a local minimal
/// polynomial of a large block during the first half of the budget.
const MAX_FACTOR_DEGREE: usize = 32;

/// Blocks up to this dimension factor local minimal polynomials fully.
const FULL_FACTOR_DIM: usize = 256;

/// `Σ c_t · w_t` for short generator words `w_t`.
#[derive(Debug, Clone)]
struct AlgebraElement {
    terms: Vec<(u32, Vec<usize>)>,
}

impl AlgebraElement {
    fn random(n_gens: usize, p: u32, rng: &mut impl Rng) -> Self {
        let n_terms = rng.random_range(1..=3);
        let terms = (0..n_terms)
            .map(|_| {
                let len = rng.random_range(1..=3);
                let word = (0..len).map(|_| rng.random_range(0..n_gens)).collect();
                (rng.random_range(1..p), word)
            })
            .collect();
        AlgebraElement { terms }
    }

    fn apply(&self, m: &GModule, v: &FFVector) -> FFVector {
        let images: Vec<(u32, FFVector)> =
            self.terms.iter().map(|(c, w)| (*c, m.apply_word(w, v))).collect();
        FFVector::linear_combination(m.p(), m.dim(), images.iter().map(|(c, x)| (*c, x)))
    }

    /// `A^T v`: transposing reverses each word.
    fn apply_transposed(&self, m: &GModule, v: &FFVector) -> FFVector {
        let images: Vec<(u32, FFVector)> = self
            .terms
            .iter()
            .map(|(c, w)| {
                let x = w
                    .iter()
                    .fold(v.clone(), |acc, &s| m.apply_gen_transposed(s, &acc));
                (*c, x)
            })
            .collect();
        FFVector::linear_combination(m.p(), m.dim(), images.iter().map(|(c, x)| (*c, x)))
    }

    fn matrix(&self, m: &GModule) -> FFMatrix {
        let mut out = FFMatrix::zero(m.p(), m.dim(), m.dim());
        for (c, w) in &self.terms {
            out = out.add_scaled(*c, &m.word_matrix(w)).expect("same shape");
        }
        out
    }
}

/// Minimal polynomial of `A` relative to `u`: the monic `g` of least degree
/// with `g(A) u = 0`.
fn local_minpoly(p: u32, u: &FFVector, apply: impl Fn(&FFVector) -> FFVector) -> Poly {
    let n = u.len();
    // echelon rows paired with the polynomial producing them from u
    let mut rows: Vec<(FFVector, Vec<u32>, usize)> = Vec::new();
    let mut krylov = u.clone();
    for k in 0..=n {
        let mut w = krylov.clone();
        let mut poly = vec![0u32; k + 1];
        poly[k] = 1;
        for (r, pr, pc) in &rows {
            let c = w.get(*pc);
            if c != 0 {
                w.axpy(p - c, r);
                for (i, &x) in pr.iter().enumerate() {
                    poly[i] = (poly[i] + (p - c) * x) % p;
                }
            }
        }
        match w.first_nonzero() {
            None => return Poly::new(p, poly),
            Some(pc) => {
                let inv = crate::ffla::field_inv(w.get(pc), p);
                w.scale(inv);
                for x in poly.iter_mut() {
                    *x = *x * inv % p;
                }
                rows.push((w, poly, pc));
            }
        }
        krylov = apply(&krylov);
    }
    unreachable!("Krylov sequence longer than the dimension")
}

enum Outcome {
    Split(Subspace),
    Simple,
}

/// Invariant subspace generated by `seeds` under the generators (or their
/// transposes). Returns `None` when it is the whole module.
fn spin_proper(m: &GModule, seed: FFVector, transposed: bool) -> Option<Subspace> {
    let ech = spin_with(
        m.p(),
        m.dim(),
        [seed],
        m.num_gens(),
        |s, v| {
            if transposed {
                m.apply_gen_transposed(s, v)
            } else {
                m.apply_gen(s, v)
            }
        },
        m.dim(),
    );
    (ech.dim() < m.dim()).then(|| ech.into_subspace())
}

/// Whether the explicit `f(A)` is cheap enough for Norton's test.
fn norton_affordable(dim: usize, deg: usize) -> bool {
    dim <= FULL_FACTOR_DIM || deg <= 4
}

fn split_or_certify(m: &GModule, rng: &mut ChaCha8Rng, budget: usize) -> Result<Outcome> {
    if m.dim() == 1 {
        return Ok(Outcome::Simple);
    }
    let p = m.p();
    let n = m.dim();
    for attempt in 0..budget {
        // simple modules with a large endomorphism field need large factors
        let max_degree = if n <= FULL_FACTOR_DIM || 2 * attempt >= budget {
            n
        } else {
            MAX_FACTOR_DEGREE
        };
        let a = AlgebraElement::random(m.num_gens(), p, rng);

        let u = random_vector(p, n, rng);
        let g = local_minpoly(p, &u, |x| a.apply(m, x));
        if let Some(f) = irreducible_factor(&g, max_degree, rng) {
            let cofactor = g.divrem(&f).0;
            let v = cofactor.apply_to(&u, |x| a.apply(m, x));
            if let Some(sub) = spin_proper(m, v, false) {
                return Ok(Outcome::Split(sub));
            }
            // v generates m; Norton's criterion decides with the same f.
            if norton_affordable(n, f.degree()) {
                let fa = evaluate_at_matrix(&f, &a.matrix(m));
                let kernel_t = fa.transpose().kernel();
                if kernel_t.dim() == f.degree() {
                    let w = kernel_t.basis().row(0).clone();
                    return Ok(match spin_proper(m, w, true) {
                        Some(dual) => Outcome::Split(dual.annihilator()),
                        None => Outcome::Simple,
                    });
                }
            }
        }

        // Dual attempt: a proper subspace invariant under the transposes has
        // a proper invariant annihilator.
        let u = random_vector(p, n, rng);
        let g = local_minpoly(p, &u, |x| a.apply_transposed(m, x));
        if let Some(f) = irreducible_factor(&g, max_degree, rng) {
            let v = g.divrem(&f).0.apply_to(&u, |x| a.apply_transposed(m, x));
            if let Some(dual) = spin_proper(m, v, true) {
                return Ok(Outcome::Split(dual.annihilator()));
            }
        }
    }
    Err(Error::Diagnostic(format!(
        "could not split or certify a {n}-dimensional block over F_{p} of {} within {budget} attempts",
        m.group().descriptor()
    )))
}

/// `f(M)` by Horner's rule.
fn evaluate_at_matrix(f: &Poly, m: &FFMatrix) -> FFMatrix {
    let n = m.nrows();
    let id = FFMatrix::identity(m.p(), n);
    let mut acc = FFMatrix::zero(m.p(), n, n);
    for &c in f.coeffs().iter().rev() {
        acc = acc.mul(m).expect("square").add_scaled(c, &id).expect("square");
    }
    acc
}

/// Composition factors of `m`, with multiplicity. The order of the result
/// is deterministic given `seed`. `budget` bounds the random algebra
/// elements tried per block.
pub fn chop(m: &GModule, seed: u64, budget: usize) -> Result<Vec<GModule>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending = vec![m.clone()];
    let mut factors = Vec::new();
    while let Some(block) = pending.pop() {
        match split_or_certify(&block, &mut rng, budget)? {
            Outcome::Simple => factors.push(block),
            Outcome::Split(sub) => {
                pending.push(block.quotient(&sub)?);
                pending.push(block.submodule(&sub)?);
            }
        }
    }
    Ok(factors)
}

/// Norton-certified irreducibility (within the retry budget).
pub fn is_simple(m: &GModule, seed: u64, budget: usize) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(matches!(split_or_certify(m, &mut rng, budget)?, Outcome::Simple))
}
