//! Univariate polynomials over `F_p`: enough arithmetic to extract an
//! irreducible factor (distinct-degree then equal-degree splitting) and to
//! evaluate polynomials at linear maps.

use rand::Rng;

use super::vector::{field_inv, FFVector};

/// Coefficients low degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    p: u32,
    c: Vec<u32>,
}

impl Poly {
    pub fn new(p: u32, mut c: Vec<u32>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { p, c }
    }

    pub fn zero(p: u32) -> Self {
        Poly { p, c: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Poly::new(p, vec![1])
    }

    pub fn x(p: u32) -> Self {
        Poly::new(p, vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lead(&self) -> u32 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.lead() == 1 {
            return self.clone();
        }
        let inv = field_inv(self.lead(), self.p) as u64;
        let p = self.p as u64;
        Poly::new(
            self.p,
            self.c.iter().map(|&x| (x as u64 * inv % p) as u32).collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let get = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
        Poly::new(
            self.p,
            (0..n).map(|i| (get(&self.c, i) + get(&other.c, i)) % self.p).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let get = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
        Poly::new(
            self.p,
            (0..n)
                .map(|i| (get(&self.c, i) + self.p - get(&other.c, i)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p as u64;
        let mut out = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p;
            }
        }
        Poly::new(self.p, out.into_iter().map(|x| x as u32).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let p = self.p as u64;
        let inv = field_inv(d.lead(), self.p) as u64;
        let mut r: Vec<u64> = self.c.iter().map(|&x| x as u64).collect();
        let dd = d.degree();
        if r.len() < d.c.len() {
            return (Poly::zero(self.p), self.clone());
        }
        let mut q = vec![0u32; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = r[k + dd] * inv % p;
            q[k] = coef as u32;
            if coef == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[k + j] = (r[k + j] + p * p - coef * b as u64 % p) % p;
            }
        }
        r.truncate(dd);
        (
            Poly::new(self.p, q),
            Poly::new(self.p, r.into_iter().map(|x| x as u32).collect()),
        )
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            base = base.mulmod(&base, m);
            e >>= 1;
        }
        acc
    }

    /// Evaluate at a linear map applied to a vector: `f(A) v`, by Horner.
    pub fn apply_to(&self, v: &FFVector, mut apply: impl FnMut(&FFVector) -> FFVector) -> FFVector {
        let mut acc = FFVector::zero(v.p(), v.len());
        for &c in self.c.iter().rev() {
            acc = apply(&acc);
            acc.axpy(c, v);
        }
        acc
    }

    fn random_below(p: u32, deg: usize, rng: &mut impl Rng) -> Poly {
        Poly::new(p, (0..deg).map(|_| rng.random_range(0..p)).collect())
    }
}

/// Some monic irreducible factor of `g` of degree at most `max_degree`,
/// preferring the smallest degree. `None` when `g` is constant or every
/// irreducible factor is larger than `max_degree`.
pub fn irreducible_factor(g: &Poly, max_degree: usize, rng: &mut impl Rng) -> Option<Poly> {
    let g = g.monic();
    let n = g.degree();
    if g.is_zero() || n == 0 {
        return None;
    }
    let p = g.p;
    let x = Poly::x(p).rem(&g);
    let mut frob = x.clone();
    for k in 1..=n / 2 {
        if k > max_degree {
            return None;
        }
        frob = frob.powmod(p as u64, &g);
        let d = g.gcd(&frob.sub(&x));
        if d.degree() >= 1 {
            return Some(equal_degree_factor(&d, k, rng));
        }
    }
    (n <= max_degree).then_some(g)
}

/// Split a squarefree product of degree-`k` irreducibles down to one factor.
fn equal_degree_factor(d: &Poly, k: usize, rng: &mut impl Rng) -> Poly {
    let mut d = d.clone();
    let p = d.p;
    while d.degree() > k {
        let a = Poly::random_below(p, d.degree(), rng);
        if a.degree() == 0 {
            continue;
        }
        let probe = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(k-1))
            let mut t = a.clone();
            let mut sum = a.clone();
            for _ in 1..k {
                t = t.mulmod(&t, &d);
                sum = sum.add(&t);
            }
            sum
        } else {
            // a^((p^k - 1)/2) = (a^(1 + p + ... + p^(k-1)))^((p-1)/2)
            let mut t = a.clone();
            let mut norm = a.clone();
            for _ in 1..k {
                t = t.powmod(p as u64, &d);
                norm = norm.mulmod(&t, &d);
            }
            norm.powmod(((p - 1) / 2) as u64, &d).sub(&Poly::one(p))
        };
        let h = d.gcd(&probe);
        if h.degree() >= 1 && h.degree() < d.degree() {
            let other = d.divrem(&h).0.monic();
            d = if h.degree() <= other.degree() { h } else { other };
        }
    }
    d.monic()
}
