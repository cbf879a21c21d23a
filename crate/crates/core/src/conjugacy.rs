//! Conjugacy classes, ℓ-regular class counts and torus class counts for
//! PSL(2,p).

use serde::Serialize;

use crate::arith::{gcd, is_prime, primitive_root};
use crate::config::Config;
use crate::error::{internal_err, param_err, resource_err, Result};
use crate::group::{ElementId, Group};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    /// Minimal element index in the class.
    pub rep: usize,
    pub size: usize,
    pub element_order: usize,
}

#[derive(Debug, Clone)]
pub struct ConjugacyData {
    pub classes: Vec<ConjugacyClass>,
    /// Class index of every element index.
    pub class_of: Vec<usize>,
}

impl ConjugacyData {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Number of classes whose element order is coprime to `ell`.
    pub fn ell_regular_count(&self, ell: u64) -> usize {
        self.classes
            .iter()
            .filter(|c| gcd(c.element_order as u64, ell) == 1)
            .count()
    }
}

/// Partition the group into conjugacy classes.
///
/// Orbits are grown by conjugating with the generators only; since the
/// generators generate `G`, the closure is the full class.
pub fn conjugacy_classes(g: &Group, cfg: &Config) -> Result<ConjugacyData> {
    let n = g.order();
    if n > cfg.conjugacy_cap {
        return Err(resource_err!(
            "{}: order {n} above conjugacy cap {}",
            g.descriptor(),
            cfg.conjugacy_cap
        ));
    }
    let gens: Vec<(usize, usize)> = g
        .generator_indices()
        .iter()
        .map(|&s| (s, g.inv_idx(s)))
        .collect();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[start] = id;
        stack.push(start);
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &(s, s_inv) in &gens {
                let y = g.mul_idx(g.mul_idx(s, x), s_inv);
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    stack.push(y);
                }
            }
        }
        classes.push(ConjugacyClass {
            rep: start,
            size,
            element_order: g.order_idx(start),
        });
    }
    Ok(ConjugacyData { classes, class_of })
}

pub fn ell_regular_count(g: &Group, ell: u64, cfg: &Config) -> Result<usize> {
    if !is_prime(ell) {
        return Err(param_err!("{ell} is not prime"));
    }
    Ok(conjugacy_classes(g, cfg)?.ell_regular_count(ell))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusCounts {
    pub split_order: usize,
    pub nonsplit_order: usize,
    pub split_count: usize,
    pub nonsplit_count: usize,
    pub split_generator: ElementId,
    pub nonsplit_generator: ElementId,
}

/// Number of distinct conjugacy classes meeting the split torus (image of
/// `diag(a, a^-1)`, order `(p-1)/2`) and the non-split torus (a cyclic
/// subgroup of order `(p+1)/2`).
pub fn torus_class_counts(g: &Group, data: &ConjugacyData) -> Result<TorusCounts> {
    let p = g
        .psl2_prime()
        .ok_or_else(|| param_err!("{} is not psl2:p", g.descriptor()))?;
    let a = primitive_root(p);
    let a_inv = crate::arith::inv_mod(a, p);
    let split_gen = g.index_of(g.matrix_element([a, 0, 0, a_inv])?)?;
    let split_order = ((p - 1) / 2) as usize;
    if g.order_idx(split_gen) != split_order.max(1) {
        return Err(internal_err!(
            "diag({a}, {a_inv}) has order {} in psl2:{p}",
            g.order_idx(split_gen)
        ));
    }
    let nonsplit_order = p.div_ceil(2) as usize;
    let nonsplit_gen = (0..g.order())
        .find(|&i| g.order_idx(i) == nonsplit_order)
        .ok_or_else(|| internal_err!("psl2:{p} has no element of order {nonsplit_order}"))?;

    let count = |gen: usize| {
        let mut seen = std::collections::BTreeSet::new();
        let mut x = 0;
        loop {
            seen.insert(data.class_of[x]);
            x = g.mul_idx(x, gen);
            if x == 0 {
                break;
            }
        }
        seen.len()
    };
    Ok(TorusCounts {
        split_order,
        nonsplit_order,
        split_count: count(split_gen),
        nonsplit_count: count(nonsplit_gen),
        split_generator: g.element(split_gen),
        nonsplit_generator: g.element(nonsplit_gen),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(desc: &str) -> (Group, ConjugacyData) {
        let cfg = Config::default();
        let g = Group::from_descriptor(desc, &cfg).unwrap();
        let d = conjugacy_classes(&g, &cfg).unwrap();
        (g, d)
    }

    /// Orbits by conjugating with every group element.
    fn brute_force_classes(g: &Group) -> Vec<Vec<usize>> {
        let n = g.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..n)
                .map(|h| g.mul_idx(g.mul_idx(h, x), g.inv_idx(h)))
                .collect();
            orbit.sort();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    #[test]
    fn matches_brute_force() {
        for desc in ["psl2:5", "psl2:7", "sl2:3", "cyclic:6", "prod:sl2:3,cyclic:2"] {
            let (g, d) = setup(desc);
            let brute = brute_force_classes(&g);
            assert_eq!(brute.len(), d.len(), "{desc}");
            for orbit in brute {
                let c = d.class_of[orbit[0]];
                assert!(orbit.iter().all(|&y| d.class_of[y] == c));
                assert_eq!(d.classes[c].size, orbit.len());
                assert_eq!(d.classes[c].rep, orbit[0]);
            }
        }
    }

    #[test]
    fn psl2_5_classes() {
        let (_, d) = setup("psl2:5");
        let mut sizes: Vec<usize> = d.classes.iter().map(|c| c.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        let (_, d7) = setup("psl2:7");
        assert_eq!(d7.len(), 6);
        let (_, c6) = setup("cyclic:6");
        assert_eq!(c6.len(), 6);
        assert!(c6.classes.iter().all(|c| c.size == 1));
    }

    #[test]
    fn ell_regular_examples() {
        let cfg = Config::default();
        let g = Group::from_descriptor("psl2:5", &cfg).unwrap();
        assert_eq!(ell_regular_count(&g, 2, &cfg).unwrap(), 4);
        assert_eq!(ell_regular_count(&g, 7, &cfg).unwrap(), 5);
        assert!(ell_regular_count(&g, 6, &cfg).is_err());
        let c6 = Group::from_descriptor("cyclic:6", &cfg).unwrap();
        assert_eq!(ell_regular_count(&c6, 3, &cfg).unwrap(), 2);
    }

    #[test]
    fn class_equation_and_centralizers() {
        for desc in ["psl2:7", "psl2:11", "sl2:5"] {
            let (g, d) = setup(desc);
            let n = g.order();
            assert_eq!(d.classes.iter().map(|c| c.size).sum::<usize>(), n);
            for c in &d.classes {
                let centralizer = (0..n)
                    .filter(|&h| g.mul_idx(h, c.rep) == g.mul_idx(c.rep, h))
                    .count();
                assert_eq!(c.size * centralizer, n);
            }
            for (x, &c) in d.class_of.iter().enumerate() {
                assert_eq!(g.order_idx(x), d.classes[c].element_order);
            }
        }
    }

    #[test]
    fn torus_counts_small() {
        let (g, d) = setup("psl2:5");
        let t = torus_class_counts(&g, &d).unwrap();
        assert_eq!((t.split_order, t.nonsplit_order), (2, 3));
        assert!(t.split_count >= 1 && t.nonsplit_count >= 1);
        let (g13, d13) = setup("psl2:13");
        let t13 = torus_class_counts(&g13, &d13).unwrap();
        assert!(t13.split_count >= 3);
        let (c, dc) = setup("cyclic:4");
        assert!(torus_class_counts(&c, &dc).is_err());
    }
}
