//! Multiplicative 3-matchings: verification, exact and heuristic search,
//! the thirds reduction to product-free triples, and the Gowers bound.

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{param_err, resource_err, Error, Result};
use crate::group::{ElementId, Group};

/// Three equal-length lists with `a_i b_j c_k = 1` exactly when `i = j = k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub a: Vec<ElementId>,
    pub b: Vec<ElementId>,
    pub c: Vec<ElementId>,
}

impl Matching {
    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// The size-1 matching `(e, e, e)`.
    pub fn identity(g: &Group) -> Self {
        let e = g.identity();
        Matching {
            a: vec![e],
            b: vec![e],
            c: vec![e],
        }
    }

    fn from_triples(g: &Group, triples: &[(usize, usize, usize)]) -> Self {
        Matching {
            a: triples.iter().map(|t| g.element(t.0)).collect(),
            b: triples.iter().map(|t| g.element(t.1)).collect(),
            c: triples.iter().map(|t| g.element(t.2)).collect(),
        }
    }
}

/// On-disk form: `{group, a, b, c}` with canonical element codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingFile {
    pub group: String,
    #[serde(flatten)]
    pub matching: Matching,
}

impl MatchingFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductFreeTriple {
    pub a: Vec<ElementId>,
    pub b: Vec<ElementId>,
    pub c: Vec<ElementId>,
}

/// Outcome of [`verify_matching`]: `None` if valid, otherwise the
/// lexicographically first violating `(i, j, k)`.
pub type Violation = Option<(usize, usize, usize)>;

fn indices(g: &Group, xs: &[ElementId], name: &str) -> Result<Vec<usize>> {
    let idx = xs.iter().map(|&x| g.index_of(x)).collect::<Result<Vec<_>>>()?;
    let mut seen = vec![false; g.order()];
    for &i in &idx {
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Input(format!(
                "list {name} repeats element {}",
                g.element(i)
            )));
        }
    }
    Ok(idx)
}

/// Check `a_i b_j c_k = 1 ⇔ i = j = k` over all `m³` index triples. For
/// each `(i, j)` the only candidate `k` is the position of `(a_i b_j)^-1`
/// in `c`, so the scan costs `O(m²)`.
pub fn verify_matching(g: &Group, cand: &Matching) -> Result<Violation> {
    let m = cand.m();
    if cand.b.len() != m || cand.c.len() != m {
        return Err(Error::Input(format!(
            "list lengths differ: {}, {}, {}",
            m,
            cand.b.len(),
            cand.c.len()
        )));
    }
    let a = indices(g, &cand.a, "a")?;
    let b = indices(g, &cand.b, "b")?;
    let c = indices(g, &cand.c, "c")?;
    let pos: HashMap<usize, usize> = c.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let target = g.inv_idx(g.mul_idx(ai, bj));
            let hit = pos.get(&target).copied();
            if i == j {
                let first_bad = match hit {
                    Some(k) if k == i => None,
                    Some(k) => Some(k.min(i)),
                    None => Some(i),
                };
                if let Some(k) = first_bad {
                    return Ok(Some((i, i, k)));
                }
            } else if let Some(k) = hit {
                return Ok(Some((i, j, k)));
            }
        }
    }
    Ok(None)
}

/// `#{(a, b, c) ∈ A×B×C : abc = 1}`.
pub fn count_products_to_identity(
    g: &Group,
    a: &[ElementId],
    b: &[ElementId],
    c: &[ElementId],
) -> Result<usize> {
    let mut in_c = vec![false; g.order()];
    for &x in c {
        in_c[g.index_of(x)?] = true;
    }
    let b = b.iter().map(|&x| g.index_of(x)).collect::<Result<Vec<_>>>()?;
    let mut count = 0;
    for &x in a {
        let x = g.index_of(x)?;
        count += b
            .iter()
            .filter(|&&y| in_c[g.inv_idx(g.mul_idx(x, y))])
            .count();
    }
    Ok(count)
}

/// Disjoint index blocks `A = a[..m']`, `B = b[m'..2m']`, `C = c[2m'..3m']`,
/// `m' = ⌊m/3⌋`, checked to be product-free.
pub fn thirds_reduction(g: &Group, cand: &Matching) -> Result<ProductFreeTriple> {
    let m = cand.m();
    if m < 3 {
        return Err(param_err!("thirds reduction needs m >= 3, got {m}"));
    }
    if let Some(v) = verify_matching(g, cand)? {
        return Err(Error::Input(format!("not a matching: violation at {v:?}")));
    }
    let t = m / 3;
    let triple = ProductFreeTriple {
        a: cand.a[..t].to_vec(),
        b: cand.b[t..2 * t].to_vec(),
        c: cand.c[2 * t..3 * t].to_vec(),
    };
    if count_products_to_identity(g, &triple.a, &triple.b, &triple.c)? != 0 {
        return Err(Error::Contract("thirds of a matching are not product-free".into()));
    }
    Ok(triple)
}

/// `min(order, 3q + 2)` with `q` the largest integer satisfying
/// `q³ D ≤ order³`: a product-free triple has `|A||B||C| ≤ |G|³/D`.
pub fn gowers_matching_upper(order: u128, d: u128) -> Result<u128> {
    if d < 1 {
        return Err(param_err!("quasirandomness degree must be at least 1"));
    }
    let n = BigUint::from(order);
    let q = (&n * &n * &n / BigUint::from(d)).cbrt();
    let bound = q * 3u32 + 2u32;
    Ok(if bound >= n {
        order
    } else {
        u128::try_from(bound).expect("below order")
    })
}

/// Lower bound on the smallest nontrivial complex degree: `(p-1)/2` for
/// `psl2:p`, otherwise 1.
pub fn quasirandom_degree(g: &Group) -> u128 {
    match g.psl2_prime() {
        Some(p) => ((p - 1) / 2).max(1) as u128,
        None => 1,
    }
}

/// Multiplication structure addressed by dense indices.
#[derive(Debug, Clone)]
pub struct Table {
    n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
}

impl Table {
    pub fn from_group(g: &Group) -> Self {
        let n = g.order();
        let mul = (0..n * n).map(|x| g.mul_idx(x / n, x % n)).collect();
        Self::from_mul(n, mul).expect("group table")
    }

    /// From a full `n × n` product table; must describe a group.
    pub fn from_mul(n: usize, mul: Vec<usize>) -> Result<Self> {
        if mul.len() != n * n || mul.iter().any(|&x| x >= n) {
            return Err(Error::Input("malformed multiplication table".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] == x && mul[x * n + e] == x))
            .ok_or_else(|| Error::Input("table has no identity".into()))?;
        let inv = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| mul[x * n + y] == identity)
                    .ok_or_else(|| Error::Input("table has no inverses".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Table { n, mul, inv, identity })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    /// Relabel elements by `perm` (old index `x` becomes `perm[x]`).
    pub fn relabel(&self, perm: &[usize]) -> Table {
        let n = self.n;
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        Table::from_mul(n, mul).expect("relabeled group")
    }
}

/// Incrementally maintained matching with the bitmaps needed for O(m)
/// feasibility tests.
#[derive(Clone)]
struct State<'t> {
    t: &'t Table,
    triples: Vec<(usize, usize, usize)>,
    used_a: Vec<bool>,
    used_b: Vec<bool>,
    used_c: Vec<bool>,
    /// Multiplicity of `(a_i b_j)^-1` over `i ≠ j`.
    forbidden_c: Vec<u32>,
}

impl<'t> State<'t> {
    fn new(t: &'t Table) -> Self {
        State {
            t,
            triples: Vec::new(),
            used_a: vec![false; t.n],
            used_b: vec![false; t.n],
            used_c: vec![false; t.n],
            forbidden_c: vec![0; t.n],
        }
    }

    fn third(&self, a: usize, b: usize) -> usize {
        self.t.inv[self.t.mul(a, b)]
    }

    fn can_add(&self, a: usize, b: usize) -> bool {
        let c = self.third(a, b);
        if self.used_a[a] || self.used_b[b] || self.used_c[c] || self.forbidden_c[c] > 0 {
            return false;
        }
        self.triples.iter().all(|&(ai, bi, _)| {
            let x = self.third(a, bi);
            let y = self.third(ai, b);
            !self.used_c[x] && x != c && !self.used_c[y] && y != c
        })
    }

    fn push(&mut self, a: usize, b: usize) {
        let c = self.third(a, b);
        for &(ai, bi, _) in &self.triples {
            self.forbidden_c[self.t.inv[self.t.mul(a, bi)]] += 1;
            self.forbidden_c[self.t.inv[self.t.mul(ai, b)]] += 1;
        }
        self.triples.push((a, b, c));
        self.used_a[a] = true;
        self.used_b[b] = true;
        self.used_c[c] = true;
    }

    fn remove(&mut self, pos: usize) {
        let (a, b, c) = self.triples.swap_remove(pos);
        self.used_a[a] = false;
        self.used_b[b] = false;
        self.used_c[c] = false;
        for &(ai, bi, _) in &self.triples {
            self.forbidden_c[self.t.inv[self.t.mul(a, bi)]] -= 1;
            self.forbidden_c[self.t.inv[self.t.mul(ai, b)]] -= 1;
        }
    }

    fn pop(&mut self) {
        self.remove(self.triples.len() - 1);
    }
}

/// Maximum matching size of a multiplication table, with witness triples.
///
/// Depth-first branch-and-bound. Every matching can be translated to one
/// containing `(e, e, e)`, so that triple is fixed; the rest are added in
/// increasing order of their `a` entry. A node is cut when its size plus
/// the number of distinct `a`, `b` or `c` values among the still-feasible
/// extensions cannot beat the incumbent.
pub fn max_matching_table(t: &Table) -> Vec<(usize, usize, usize)> {
    let mut st = State::new(t);
    st.push(t.identity, t.identity);
    let order: Vec<usize> = (0..t.n).filter(|&x| x != t.identity).collect();
    let cands: Vec<(usize, usize)> = order
        .iter()
        .flat_map(|&a| order.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| st.can_add(a, b))
        .collect();
    let mut best = st.triples.clone();
    search(&mut st, &cands, &mut best);
    best
}

fn search(st: &mut State, cands: &[(usize, usize)], best: &mut Vec<(usize, usize, usize)>) {
    if st.triples.len() > best.len() {
        *best = st.triples.clone();
    }
    if cands.is_empty() {
        return;
    }
    let n = st.t.n;
    let distinct = |f: &dyn Fn(&(usize, usize)) -> usize| {
        let mut seen = vec![false; n];
        cands.iter().filter(|x| !std::mem::replace(&mut seen[f(x)], true)).count()
    };
    let room = distinct(&|x| x.0)
        .min(distinct(&|x| x.1))
        .min(distinct(&|x| st.third(x.0, x.1)));
    if st.triples.len() + room <= best.len() {
        return;
    }
    for (pos, &(a, b)) in cands.iter().enumerate() {
        st.push(a, b);
        let next: Vec<(usize, usize)> = cands[pos + 1..]
            .iter()
            .copied()
            .filter(|&(x, y)| x != a && st.can_add(x, y))
            .collect();
        search(st, &next, best);
        st.pop();
        // the remaining candidates can at best reach this many
        let rest = &cands[pos + 1..];
        let mut seen = vec![false; n];
        let rest_a = rest.iter().filter(|x| !std::mem::replace(&mut seen[x.0], true)).count();
        if st.triples.len() + rest_a <= best.len() {
            return;
        }
    }
}

/// `M(G)` with a witness, by exhaustive search up to translation symmetry.
pub fn exact_max_matching(g: &Group, cfg: &Config) -> Result<(usize, Matching)> {
    if g.order() > cfg.exact_matching_cap {
        return Err(resource_err!(
            "exact matching search limited to order {} ({} has order {}); use the heuristic",
            cfg.exact_matching_cap,
            g.descriptor(),
            g.order()
        ));
    }
    let triples = max_matching_table(&Table::from_group(g));
    let m = Matching::from_triples(g, &triples);
    if let Some(v) = verify_matching(g, &m)? {
        return Err(crate::error::internal_err!("exact search produced a violation at {v:?}"));
    }
    Ok((m.m(), m))
}

/// Randomized greedy insertion followed by remove-and-reinsert local
/// search (removing one or two triples per step). Always returns a
/// verified matching.
pub fn heuristic_matching(g: &Group, seed: u64, iters: usize) -> Result<Matching> {
    let t = Table::from_group(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = State::new(&t);
    st.push(t.identity, t.identity);
    greedy_fill(&mut st, &mut rng);
    let mut best = st.triples.clone();
    for _ in 0..iters {
        let before = st.clone();
        let r = rng.random_range(1..=2).min(st.triples.len());
        for _ in 0..r {
            let pos = rng.random_range(0..st.triples.len());
            st.remove(pos);
        }
        greedy_fill(&mut st, &mut rng);
        if st.triples.len() < before.triples.len() {
            st = before;
        } else if st.triples.len() > best.len() {
            best = st.triples.clone();
        }
    }
    let m = Matching::from_triples(g, &best);
    if let Some(v) = verify_matching(g, &m)? {
        return Err(crate::error::internal_err!("heuristic produced a violation at {v:?}"));
    }
    Ok(m)
}

/// Insert feasible pairs, visiting all `(a, b)` in a random stride order.
fn greedy_fill(st: &mut State, rng: &mut ChaCha8Rng) {
    let n = st.t.n;
    let total = n * n;
    if total <= 1 {
        return;
    }
    let start = rng.random_range(0..total);
    let stride = loop {
        let s = rng.random_range(1..total);
        if crate::arith::gcd(s as u64, total as u64) == 1 {
            break s;
        }
    };
    let mut x = start;
    for _ in 0..total {
        let (a, b) = (x / n, x % n);
        if st.can_add(a, b) {
            st.push(a, b);
        }
        x = (x + stride) % total;
    }
    // a small random reorder keeps later removals unbiased
    st.triples.shuffle(rng);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(desc: &str) -> Group {
        Group::from_descriptor(desc, &Config::default()).unwrap()
    }

    fn ids(g: &Group, xs: &[usize]) -> Vec<ElementId> {
        xs.iter().map(|&i| g.element(i)).collect()
    }

    #[test]
    fn verify_examples() {
        let g = grp("cyclic:3");
        let two = Matching {
            a: ids(&g, &[0, 1]),
            b: ids(&g, &[0, 1]),
            c: ids(&g, &[0, 1]),
        };
        assert_eq!(verify_matching(&g, &two).unwrap(), None);
        let three = Matching {
            a: ids(&g, &[0, 1, 2]),
            b: ids(&g, &[0, 1, 2]),
            c: ids(&g, &[0, 1, 2]),
        };
        assert!(verify_matching(&g, &three).unwrap().is_some());
        assert_eq!(verify_matching(&g, &Matching::identity(&g)).unwrap(), None);
        let dup = Matching {
            a: ids(&g, &[1, 1]),
            b: ids(&g, &[0, 1]),
            c: ids(&g, &[0, 1]),
        };
        assert!(matches!(verify_matching(&g, &dup), Err(Error::Input(_))));
    }

    /// Brute-force m³ scan, for cross-checking the fast verifier.
    fn first_violation_naive(g: &Group, m: &Matching) -> Violation {
        let k = m.m();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let x = g.mul(g.mul(m.a[i], m.b[j]).unwrap(), m.c[l]).unwrap();
                    if (x == g.identity()) != (i == j && j == l) {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }

    #[test]
    fn fast_verifier_matches_scan() {
        let g = grp("cyclic:7");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let m = rng.random_range(1..=4);
            let pick = |rng: &mut ChaCha8Rng| {
                let mut v: Vec<usize> = (0..7).collect();
                v.shuffle(rng);
                ids(&g, &v[..m])
            };
            let cand = Matching {
                a: pick(&mut rng),
                b: pick(&mut rng),
                c: pick(&mut rng),
            };
            assert_eq!(verify_matching(&g, &cand).unwrap(), first_violation_naive(&g, &cand));
        }
    }

    #[test]
    fn exact_small() {
        let cfg = Config::default();
        for (desc, m) in [("cyclic:1", 1), ("cyclic:2", 1), ("cyclic:3", 2)] {
            assert_eq!(exact_max_matching(&grp(desc), &cfg).unwrap().0, m, "{desc}");
        }
        assert!(matches!(
            exact_max_matching(&grp("psl2:5"), &cfg),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn thirds() {
        let g = grp("cyclic:3");
        let two = Matching {
            a: ids(&g, &[0, 1]),
            b: ids(&g, &[0, 1]),
            c: ids(&g, &[0, 1]),
        };
        assert!(matches!(thirds_reduction(&g, &two), Err(Error::Parameter(_))));
        let g = grp("cyclic:9");
        let (_, m) = exact_max_matching(&g, &Config::default()).unwrap();
        if m.m() >= 3 {
            let t = thirds_reduction(&g, &m).unwrap();
            assert_eq!(t.a.len(), m.m() / 3);
            assert_eq!(count_products_to_identity(&g, &t.a, &t.b, &t.c).unwrap(), 0);
        }
    }

    #[test]
    fn gowers_values() {
        assert_eq!(gowers_matching_upper(60, 1).unwrap(), 60);
        assert_eq!(gowers_matching_upper(60, 2).unwrap(), 60);
        assert_eq!(gowers_matching_upper(1092, 6).unwrap(), 1092);
        assert!(gowers_matching_upper(10, 0).is_err());
        // q = 10^6 / (10^15)^(1/3) = 10 exactly
        assert_eq!(gowers_matching_upper(1_000_000, 1_000_000_000_000_000).unwrap(), 32);
    }

    #[test]
    fn products_to_identity() {
        let g = grp("cyclic:5");
        let all: Vec<ElementId> = g.elements().collect();
        assert_eq!(count_products_to_identity(&g, &all, &all, &all).unwrap(), 25);
        let e = [g.identity()];
        assert_eq!(count_products_to_identity(&g, &e, &e, &e).unwrap(), 1);
    }

    #[test]
    fn heuristic_basics() {
        let g = grp("cyclic:3");
        for seed in 0..5 {
            assert_eq!(heuristic_matching(&g, seed, 100).unwrap().m(), 2);
        }
        let g = grp("psl2:5");
        let a = heuristic_matching(&g, 3, 50).unwrap();
        let b = heuristic_matching(&g, 3, 50).unwrap();
        assert_eq!(a, b);
        assert!(a.m() >= 1 && a.m() <= 60);
    }

    #[test]
    fn matching_file_round_trip() {
        let g = grp("cyclic:3");
        let f = MatchingFile {
            group: "cyclic:3".into(),
            matching: Matching {
                a: ids(&g, &[0, 1]),
                b: ids(&g, &[0, 1]),
                c: ids(&g, &[0, 1]),
            },
        };
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"a\":[0,1]"));
        assert_eq!(serde_json::from_str::<MatchingFile>(&text).unwrap(), f);
    }
}
