//! Shared independent oracles for the integration tests.

use grouptensor::Group;

/// Every group of order at most 12 expressible by descriptor.
pub const SMALL: &[&str] = &[
    "cyclic:1", "cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "cyclic:7",
    "cyclic:8", "cyclic:9", "cyclic:10", "cyclic:11", "cyclic:12", "ea:2:2", "ea:2:3",
    "ea:3:2", "prod:cyclic:2,cyclic:4", "prod:cyclic:2,cyclic:6", "psl2:3",
];

/// Largest matching by depth-first search over sets of index triples, each
/// extension re-checked against the definition on all m³ triples.
pub fn naive_max(g: &Group) -> usize {
    let n = g.order();
    let prod = |a: usize, b: usize, c: usize| g.mul_idx(g.mul_idx(a, b), c);
    let triples: Vec<(usize, usize, usize)> = (0..n * n * n)
        .map(|x| (x / (n * n), (x / n) % n, x % n))
        .collect();
    fn valid(set: &[(usize, usize, usize)], prod: &dyn Fn(usize, usize, usize) -> usize) -> bool {
        for (i, a) in set.iter().enumerate() {
            for (j, b) in set.iter().enumerate() {
                for (k, c) in set.iter().enumerate() {
                    if (prod(a.0, b.1, c.2) == 0) != (i == j && j == k) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn dfs(
        set: &mut Vec<(usize, usize, usize)>,
        from: usize,
        triples: &[(usize, usize, usize)],
        prod: &dyn Fn(usize, usize, usize) -> usize,
        best: &mut usize,
    ) {
        *best = (*best).max(set.len());
        for t in from..triples.len() {
            set.push(triples[t]);
            if valid(set, prod) {
                dfs(set, t + 1, triples, prod, best);
            }
            set.pop();
        }
    }
    // translating any matching moves one of its triples to (e, e, e)
    let mut set = vec![(0, 0, 0)];
    let mut best = 1;
    dfs(&mut set, 1, &triples, &prod, &mut best);
    best
}
