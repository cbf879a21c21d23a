//! Finite groups: cyclic, elementary abelian, direct products, SL(2,p) and
//! PSL(2,p).
//!
//! Every group is materialized into an indexed element table at
//! construction. Index 0 is always the identity. Elements are exchanged with
//! callers as [`ElementId`] codes; everything downstream works on dense
//! indices.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::config::Config;
use crate::error::{internal_err, param_err, resource_err, Error, Result};

/// Canonical 64-bit code of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u64);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Family descriptor. Parsed from and printed as `cyclic:n`, `ea:p:n`,
/// `sl2:p`, `psl2:p`, `prod:<desc>,<desc>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    Cyclic(u64),
    ElemAbelian { p: u64, n: u32 },
    Product(Box<Family>, Box<Family>),
    Sl2(u64),
    Psl2(u64),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic(n) => write!(f, "cyclic:{n}"),
            Family::ElemAbelian { p, n } => write!(f, "ea:{p}:{n}"),
            Family::Product(a, b) => write!(f, "prod:{a},{b}"),
            Family::Sl2(p) => write!(f, "sl2:{p}"),
            Family::Psl2(p) => write!(f, "psl2:{p}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = parse_family(s.trim())?;
        if !rest.is_empty() {
            return Err(param_err!("trailing input {rest:?} in group descriptor {s:?}"));
        }
        Ok(family)
    }
}

fn parse_number(s: &str) -> Result<(u64, &str)> {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if end == 0 {
        return Err(param_err!("expected a number at {s:?}"));
    }
    let n = s[..end]
        .parse()
        .map_err(|_| param_err!("number out of range at {s:?}"))?;
    Ok((n, &s[end..]))
}

fn expect<'a>(s: &'a str, tok: &str) -> Result<&'a str> {
    s.strip_prefix(tok)
        .ok_or_else(|| param_err!("expected {tok:?} at {s:?}"))
}

fn parse_family(s: &str) -> Result<(Family, &str)> {
    if let Some(rest) = s.strip_prefix("cyclic:") {
        let (n, rest) = parse_number(rest)?;
        Ok((Family::Cyclic(n), rest))
    } else if let Some(rest) = s.strip_prefix("ea:") {
        let (p, rest) = parse_number(rest)?;
        let rest = expect(rest, ":")?;
        let (n, rest) = parse_number(rest)?;
        let n = u32::try_from(n).map_err(|_| param_err!("rank {n} too large"))?;
        Ok((Family::ElemAbelian { p, n }, rest))
    } else if let Some(rest) = s.strip_prefix("sl2:") {
        let (p, rest) = parse_number(rest)?;
        Ok((Family::Sl2(p), rest))
    } else if let Some(rest) = s.strip_prefix("psl2:") {
        let (p, rest) = parse_number(rest)?;
        Ok((Family::Psl2(p), rest))
    } else if let Some(rest) = s.strip_prefix("prod:") {
        let (a, rest) = parse_family(rest)?;
        let rest = expect(rest, ",")?;
        let (b, rest) = parse_family(rest)?;
        Ok((Family::Product(Box::new(a), Box::new(b)), rest))
    } else {
        Err(param_err!("unknown group family at {s:?}"))
    }
}

impl Family {
    /// Order predicted by the family formula, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        match *self {
            Family::Cyclic(n) => Some(n),
            Family::ElemAbelian { p, n } => p.checked_pow(n),
            Family::Product(ref a, ref b) => a.order()?.checked_mul(b.order()?),
            Family::Sl2(p) => p.checked_mul(p - 1)?.checked_mul(p + 1),
            Family::Psl2(p) => Some(p.checked_mul(p - 1)?.checked_mul(p + 1)? / 2),
        }
    }

    fn validate(&self, cfg: &Config) -> Result<()> {
        match *self {
            Family::Cyclic(n) => {
                if n == 0 {
                    return Err(param_err!("cyclic group needs n >= 1"));
                }
            }
            Family::ElemAbelian { p, n } => {
                if !is_prime(p) {
                    return Err(param_err!("ea:{p}:{n}: {p} is not prime"));
                }
                if n == 0 {
                    return Err(param_err!("ea:{p}:{n}: rank must be >= 1"));
                }
            }
            Family::Product(ref a, ref b) => {
                a.validate(cfg)?;
                b.validate(cfg)?;
            }
            Family::Sl2(p) | Family::Psl2(p) => {
                if !is_prime(p) || p == 2 {
                    return Err(param_err!("{self}: p must be an odd prime"));
                }
                if p > cfg.max_sl2_prime {
                    return Err(resource_err!(
                        "{self}: p exceeds the configured cap {}",
                        cfg.max_sl2_prime
                    ));
                }
            }
        }
        match self.order() {
            Some(o) if o <= cfg.max_group_order as u64 => Ok(()),
            Some(o) => Err(resource_err!(
                "{self} has order {o}, above the cap {}",
                cfg.max_group_order
            )),
            None => Err(resource_err!("{self}: order overflows")),
        }
    }

    /// Exclusive upper bound on element codes.
    fn code_bound(&self) -> u64 {
        match *self {
            Family::Cyclic(n) => n,
            Family::ElemAbelian { p, n } => p.pow(n),
            Family::Product(ref a, ref b) => a.code_bound() * b.code_bound(),
            Family::Sl2(p) | Family::Psl2(p) => p.pow(4),
        }
    }

    fn identity_code(&self) -> u64 {
        match *self {
            Family::Cyclic(_) | Family::ElemAbelian { .. } => 0,
            Family::Product(ref a, ref b) => a.identity_code() * b.code_bound() + b.identity_code(),
            Family::Sl2(p) | Family::Psl2(p) => encode_mat(p, [1, 0, 0, 1]),
        }
    }

    fn mul_code(&self, x: u64, y: u64) -> u64 {
        match *self {
            Family::Cyclic(n) => (x + y) % n,
            Family::ElemAbelian { p, n } => {
                let (mut x, mut y, mut out, mut place) = (x, y, 0, 1);
                for _ in 0..n {
                    out += ((x % p + y % p) % p) * place;
                    x /= p;
                    y /= p;
                    place *= p;
                }
                out
            }
            Family::Product(ref a, ref b) => {
                let rb = b.code_bound();
                a.mul_code(x / rb, y / rb) * rb + b.mul_code(x % rb, y % rb)
            }
            Family::Sl2(p) => encode_mat(p, mat_mul(p, decode_mat(p, x), decode_mat(p, y))),
            Family::Psl2(p) => encode_mat(
                p,
                psl2_canonical(p, mat_mul(p, decode_mat(p, x), decode_mat(p, y))),
            ),
        }
    }

    fn inv_code(&self, x: u64) -> u64 {
        match *self {
            Family::Cyclic(n) => (n - x) % n,
            Family::ElemAbelian { p, n } => {
                let (mut x, mut out, mut place) = (x, 0, 1);
                for _ in 0..n {
                    out += ((p - x % p) % p) * place;
                    x /= p;
                    place *= p;
                }
                out
            }
            Family::Product(ref a, ref b) => {
                let rb = b.code_bound();
                a.inv_code(x / rb) * rb + b.inv_code(x % rb)
            }
            Family::Sl2(p) | Family::Psl2(p) => {
                let [a, b, c, d] = decode_mat(p, x);
                let m = [d, (p - b) % p, (p - c) % p, a];
                let m = if matches!(self, Family::Psl2(_)) {
                    psl2_canonical(p, m)
                } else {
                    m
                };
                encode_mat(p, m)
            }
        }
    }

    fn enumerate(&self) -> Vec<u64> {
        match *self {
            Family::Cyclic(_) | Family::ElemAbelian { .. } => (0..self.code_bound()).collect(),
            Family::Product(ref a, ref b) => {
                let rb = b.code_bound();
                let right = b.enumerate();
                a.enumerate()
                    .into_iter()
                    .flat_map(|x| right.iter().map(move |&y| x * rb + y))
                    .collect()
            }
            Family::Sl2(p) | Family::Psl2(p) => {
                let mut out = Vec::new();
                for code in 0..p.pow(4) {
                    let m = decode_mat(p, code);
                    if (m[0] * m[3] + p * p - m[1] * m[2] % p) % p != 1 {
                        continue;
                    }
                    if matches!(self, Family::Psl2(_)) && psl2_canonical(p, m) != m {
                        continue;
                    }
                    out.push(code);
                }
                out
            }
        }
    }

    fn generator_codes(&self) -> Vec<u64> {
        match *self {
            Family::Cyclic(n) => vec![1 % n],
            Family::ElemAbelian { p, n } => (0..n).map(|i| p.pow(i)).collect(),
            Family::Product(ref a, ref b) => {
                let rb = b.code_bound();
                let mut gens: Vec<u64> = a
                    .generator_codes()
                    .into_iter()
                    .map(|x| x * rb + b.identity_code())
                    .collect();
                gens.extend(
                    b.generator_codes()
                        .into_iter()
                        .map(|y| a.identity_code() * rb + y),
                );
                gens
            }
            Family::Sl2(p) => vec![encode_mat(p, [1, 1, 0, 1]), encode_mat(p, [1, 0, 1, 1])],
            Family::Psl2(p) => vec![
                encode_mat(p, psl2_canonical(p, [1, 1, 0, 1])),
                encode_mat(p, psl2_canonical(p, [1, 0, 1, 1])),
            ],
        }
    }
}

fn encode_mat(p: u64, m: [u64; 4]) -> u64 {
    ((m[0] * p + m[1]) * p + m[2]) * p + m[3]
}

fn decode_mat(p: u64, code: u64) -> [u64; 4] {
    [code / (p * p * p), code / (p * p) % p, code / p % p, code % p]
}

fn mat_mul(p: u64, x: [u64; 4], y: [u64; 4]) -> [u64; 4] {
    [
        (x[0] * y[0] + x[1] * y[2]) % p,
        (x[0] * y[1] + x[1] * y[3]) % p,
        (x[2] * y[0] + x[3] * y[2]) % p,
        (x[2] * y[1] + x[3] * y[3]) % p,
    ]
}

/// Of `{M, -M}`, the one whose first nonzero entry (row-major) is at most
/// `(p-1)/2`.
fn psl2_canonical(p: u64, m: [u64; 4]) -> [u64; 4] {
    let lead = m.iter().copied().find(|&x| x != 0).unwrap_or(0);
    if lead <= (p - 1) / 2 {
        m
    } else {
        m.map(|x| (p - x) % p)
    }
}

/// A finite group with a materialized element table.
pub struct Group {
    family: Family,
    codes: Vec<u64>,
    index: HashMap<u64, u32>,
    generators: Vec<usize>,
    inverses: Vec<u32>,
    /// `gen_left[s][i]` is the index of `g_s * x_i`.
    gen_left: Vec<Vec<u32>>,
    /// BFS tree from the identity: `x_i = g_s * x_parent`.
    bfs_parent: Vec<(u32, u8)>,
    bfs_seq: Vec<u32>,
    cayley: OnceLock<Option<Vec<u32>>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("family", &self.family.to_string())
            .field("order", &self.order())
            .finish()
    }
}

/// Cayley tables are cached only up to this order (16 MiB of `u32`).
const CAYLEY_CACHE_MAX: usize = 2048;

/// Build a group from its family descriptor.
pub fn make_group(family: &Family, cfg: &Config) -> Result<Group> {
    family.validate(cfg)?;
    let mut codes = family.enumerate();
    let id = family.identity_code();
    let pos = codes
        .iter()
        .position(|&c| c == id)
        .ok_or_else(|| internal_err!("identity missing from {family}"))?;
    codes.remove(pos);
    codes.insert(0, id);

    if Some(codes.len() as u64) != family.order() {
        return Err(internal_err!(
            "{family}: enumerated {} elements, formula says {:?}",
            codes.len(),
            family.order()
        ));
    }

    let index: HashMap<u64, u32> = codes
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i as u32))
        .collect();
    let lookup = |c: u64| index[&c];

    let mut generators: Vec<usize> = family
        .generator_codes()
        .into_iter()
        .map(|c| lookup(c) as usize)
        .collect();
    generators.dedup();

    let inverses = codes.iter().map(|&c| lookup(family.inv_code(c))).collect();
    let gen_left: Vec<Vec<u32>> = generators
        .iter()
        .map(|&s| {
            let gs = codes[s];
            codes.iter().map(|&c| lookup(family.mul_code(gs, c))).collect()
        })
        .collect();

    let n = codes.len();
    let mut bfs_parent = vec![(u32::MAX, u8::MAX); n];
    bfs_parent[0] = (0, u8::MAX);
    let mut queue = VecDeque::from([0usize]);
    let mut bfs_seq = Vec::with_capacity(n);
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        bfs_seq.push(i as u32);
        for (s, perm) in gen_left.iter().enumerate() {
            let j = perm[i] as usize;
            if bfs_parent[j].0 == u32::MAX {
                bfs_parent[j] = (i as u32, s as u8);
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    if reached != n {
        return Err(internal_err!(
            "{family}: generators reach {reached} of {n} elements"
        ));
    }

    Ok(Group {
        family: family.clone(),
        codes,
        index,
        generators,
        inverses,
        gen_left,
        bfs_parent,
        bfs_seq,
        cayley: OnceLock::new(),
    })
}

impl Group {
    /// Parse a descriptor and build the group with the given caps.
    pub fn from_descriptor(desc: &str, cfg: &Config) -> Result<Group> {
        make_group(&desc.parse()?, cfg)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn descriptor(&self) -> String {
        self.family.to_string()
    }

    pub fn order(&self) -> usize {
        self.codes.len()
    }

    /// `Some(p)` when this is `psl2:p`.
    pub fn psl2_prime(&self) -> Option<u64> {
        match self.family {
            Family::Psl2(p) => Some(p),
            _ => None,
        }
    }

    pub fn identity(&self) -> ElementId {
        ElementId(self.codes[0])
    }

    pub fn element(&self, i: usize) -> ElementId {
        ElementId(self.codes[i])
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.codes.iter().map(|&c| ElementId(c))
    }

    pub fn index_of(&self, e: ElementId) -> Result<usize> {
        self.index
            .get(&e.0)
            .map(|&i| i as usize)
            .ok_or_else(|| param_err!("element {e} does not belong to {}", self.family))
    }

    pub fn generators(&self) -> Vec<ElementId> {
        self.generators.iter().map(|&i| self.element(i)).collect()
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        Ok(self.element(self.mul_idx(i, j)))
    }

    pub fn inv(&self, a: ElementId) -> Result<ElementId> {
        Ok(self.element(self.inv_idx(self.index_of(a)?)))
    }

    pub fn element_order(&self, a: ElementId) -> Result<usize> {
        Ok(self.order_idx(self.index_of(a)?))
    }

    /// Product by index. Uses the cached Cayley table for small groups.
    pub fn mul_idx(&self, i: usize, j: usize) -> usize {
        match self.cayley_table() {
            Some(t) => t[i * self.order() + j] as usize,
            None => self.index[&self.family.mul_code(self.codes[i], self.codes[j])] as usize,
        }
    }

    pub fn inv_idx(&self, i: usize) -> usize {
        self.inverses[i] as usize
    }

    pub fn order_idx(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != 0 {
            x = self.mul_idx(x, i);
            k += 1;
        }
        k
    }

    /// `x ↦ g_s x` as an index permutation.
    pub fn generator_left_perm(&self, s: usize) -> &[u32] {
        &self.gen_left[s]
    }

    /// Generator word `[s_1, ..., s_k]` with `x_i = g_{s_1} g_{s_2} ... g_{s_k}`.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while i != 0 {
            let (parent, s) = self.bfs_parent[i];
            w.push(s as usize);
            i = parent as usize;
        }
        w
    }

    /// Elements in BFS order with `(parent, generator)` links: every element
    /// after the first is `g_s * parent`, and parents precede children.
    pub fn bfs_order(&self) -> impl Iterator<Item = (usize, Option<(usize, usize)>)> + '_ {
        self.bfs_seq.iter().map(|&i| {
            let i = i as usize;
            let link = (i != 0).then(|| {
                let (p, s) = self.bfs_parent[i];
                (p as usize, s as usize)
            });
            (i, link)
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| {
            self.generators
                .iter()
                .all(|&b| self.mul_idx(a, b) == self.mul_idx(b, a))
        })
    }

    /// Matrix entries `[a, b, c, d]` of an `sl2`/`psl2` element.
    pub fn matrix_entries(&self, e: ElementId) -> Option<[u64; 4]> {
        match self.family {
            Family::Sl2(p) | Family::Psl2(p) => Some(decode_mat(p, e.0)),
            _ => None,
        }
    }

    /// Encode `[[a, b], [c, d]]` (canonicalizing for `psl2`).
    pub fn matrix_element(&self, m: [u64; 4]) -> Result<ElementId> {
        let code = match self.family {
            Family::Sl2(p) => encode_mat(p, m.map(|x| x % p)),
            Family::Psl2(p) => encode_mat(p, psl2_canonical(p, m.map(|x| x % p))),
            _ => return Err(param_err!("{} is not a matrix group", self.family)),
        };
        let e = ElementId(code);
        self.index_of(e)?;
        Ok(e)
    }

    fn cayley_table(&self) -> Option<&Vec<u32>> {
        self.cayley
            .get_or_init(|| {
                let n = self.order();
                (n <= CAYLEY_CACHE_MAX).then(|| {
                    let mut t = Vec::with_capacity(n * n);
                    for &a in &self.codes {
                        for &b in &self.codes {
                            t.push(self.index[&self.family.mul_code(a, b)]);
                        }
                    }
                    t
                })
            })
            .as_ref()
    }

    /// Check associativity, identity and inverses: exhaustively up to order
    /// 512, on 10^4 random triples above.
    pub fn check_axioms(&self, seed: u64) -> Result<()> {
        let n = self.order();
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            let lhs = self.mul_idx(self.mul_idx(a, b), c);
            let rhs = self.mul_idx(a, self.mul_idx(b, c));
            if lhs != rhs {
                return Err(internal_err!("associativity fails at ({a}, {b}, {c})"));
            }
            Ok(())
        };
        for a in 0..n {
            if self.mul_idx(a, 0) != a || self.mul_idx(0, a) != a {
                return Err(internal_err!("identity law fails at {a}"));
            }
            if self.mul_idx(a, self.inv_idx(a)) != 0 {
                return Err(internal_err!("inverse law fails at {a}"));
            }
        }
        if n <= 512 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..10_000 {
                check(
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                )?;
            }
        }
        Ok(())
    }
}
