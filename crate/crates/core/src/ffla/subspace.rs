use super::matrix::{check_field, FFMatrix};
use super::vector::FFVector;
use crate::error::{param_err, resource_err, Result};

/// A subspace of `F_p^n`, held as its reduced row-echelon basis. Equal
/// subspaces have identical bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: FFMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_vectors(p: u32, ambient: usize, vectors: Vec<FFVector>) -> Self {
        let r = FFMatrix::from_vectors(p, ambient, vectors).rref();
        let rows = r.matrix.into_rows().into_iter().take(r.rank).collect();
        Subspace {
            ambient,
            basis: FFMatrix::from_vectors(p, ambient, rows),
            pivots: r.pivots,
        }
    }

    pub fn zero(p: u32, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: FFMatrix::zero(p, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: FFMatrix::identity(p, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.basis.p()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &FFMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` modulo this subspace; the result vanishes on every pivot.
    pub fn reduce(&self, v: &FFVector) -> FFVector {
        let p = self.p();
        let mut out = v.clone();
        for (row, &pc) in self.basis.rows().iter().zip(&self.pivots) {
            let c = out.get(pc);
            if c != 0 {
                out.axpy(p - c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &FFVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates with respect to the echelon basis, if `v` lies inside.
    pub fn coordinates(&self, v: &FFVector) -> Option<Vec<u32>> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&pc| v.get(pc)).collect())
    }

    /// `{x : b·x = 0 for every basis vector b}`.
    pub fn annihilator(&self) -> Subspace {
        self.basis.kernel()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.rows().iter().all(|b| other.contains(b))
    }

    /// Closed under every (column-convention) action matrix.
    pub fn is_invariant(&self, actions: &[FFMatrix]) -> bool {
        actions
            .iter()
            .all(|a| self.basis.rows().iter().all(|b| self.contains(&a.apply(b))))
    }

    /// Non-pivot coordinates, the standard complement basis.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }
}

/// Incremental semi-echelon basis. Rows are normalized (pivot entry 1) and
/// each new row is zero on all earlier pivots.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    p: u32,
    len: usize,
    rows: Vec<FFVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32, len: usize) -> Self {
        Echelon {
            p,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut FFVector) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v.get(pc);
            if c != 0 {
                v.axpy(self.p - c, row);
            }
        }
    }

    /// Reduce and insert; returns the index of the new row if independent.
    pub fn insert(&mut self, mut v: FFVector) -> Option<usize> {
        self.reduce(&mut v);
        let pc = v.normalize()?;
        self.rows.push(v);
        self.pivots.push(pc);
        Some(self.rows.len() - 1)
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace::from_vectors(self.p, self.len, self.rows)
    }
}

/// Closure of the seeds under the given linear maps. `apply(s, v)` applies
/// map `s`. Stops early once the span reaches `stop_at` dimensions.
pub(crate) fn spin_with(
    p: u32,
    len: usize,
    seeds: impl IntoIterator<Item = FFVector>,
    n_maps: usize,
    mut apply: impl FnMut(usize, &FFVector) -> FFVector,
    stop_at: usize,
) -> Echelon {
    let mut ech = Echelon::new(p, len);
    for s in seeds {
        ech.insert(s);
        if ech.dim() >= stop_at {
            return ech;
        }
    }
    let mut next = 0;
    while next < ech.dim() {
        for s in 0..n_maps {
            let w = apply(s, &ech.rows[next]);
            ech.insert(w);
            if ech.dim() >= stop_at {
                return ech;
            }
        }
        next += 1;
    }
    ech
}

/// Smallest subspace containing the seed rows and invariant under every
/// action matrix.
pub fn spin(seeds: &FFMatrix, actions: &[FFMatrix]) -> Result<Subspace> {
    let n = seeds.ncols();
    let p = seeds.p();
    for a in actions {
        if !a.is_square() || a.nrows() != n || a.p() != p {
            return Err(param_err!(
                "action of shape {}x{} on {n}-dimensional seeds",
                a.nrows(),
                a.ncols()
            ));
        }
    }
    let ech = spin_with(
        p,
        n,
        seeds.rows().iter().cloned(),
        actions.len(),
        |s, v| actions[s].apply(v),
        usize::MAX,
    );
    Ok(ech.into_subspace())
}

/// Every subspace of `F_p^n`, each exactly once in RREF, provided
/// `p^n <= guard`.
pub fn enumerate_subspaces(n: usize, p: u32, guard: u64) -> Result<impl Iterator<Item = Subspace>> {
    check_field(p)?;
    let size = (p as u64).checked_pow(n as u32);
    if size.is_none_or(|s| s > guard) {
        return Err(resource_err!("subspace enumeration of F_{p}^{n} exceeds guard {guard}"));
    }
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            let mut free = Vec::new();
            for (r, &pc) in pivots.iter().enumerate() {
                for c in pc + 1..n {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            let total = (p as u64).pow(free.len() as u32);
            for mut code in 0..total {
                let mut rows: Vec<FFVector> =
                    pivots.iter().map(|&pc| FFVector::unit(p, n, pc)).collect();
                for &(r, c) in &free {
                    rows[r].set(c, (code % p as u64) as u32);
                    code /= p as u64;
                }
                out.push(Subspace {
                    ambient: n,
                    basis: FFMatrix::from_vectors(p, n, rows),
                    pivots: pivots.clone(),
                });
            }
        }
    }
    Ok(out.into_iter())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Gaussian binomial `[n choose k]_q` from the product formula.
    fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn subspace_counts() {
        let count = |n: usize, p: u32| enumerate_subspaces(n, p, 10_000).unwrap().count();
        assert_eq!(count(3, 2), 16);
        assert_eq!(count(4, 2), 67);
        assert_eq!(count(2, 3), 6);
        for (n, p) in [(1, 2), (2, 2), (5, 2), (3, 3), (2, 5), (2, 7), (3, 5)] {
            let expect: u64 = (0..=n as u32).map(|k| gaussian_binomial(n as u32, k, p as u64)).sum();
            assert_eq!(count(n, p) as u64, expect, "n={n} p={p}");
        }
        assert!(enumerate_subspaces(14, 2, 10_000).is_err());
    }

    #[test]
    fn enumerated_subspaces_are_distinct_and_canonical() {
        let all: Vec<Subspace> = enumerate_subspaces(3, 3, 10_000).unwrap().collect();
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for s in &all {
            let again = Subspace::from_vectors(3, 3, s.basis().rows().to_vec());
            assert_eq!(&again, s);
        }
    }

    #[test]
    fn spin_examples() {
        let id = FFMatrix::identity(2, 3);
        let zero_seed = FFMatrix::zero(2, 1, 3);
        assert_eq!(spin(&zero_seed, std::slice::from_ref(&id)).unwrap().dim(), 0);

        let e1 = FFMatrix::from_rows(2, &[vec![1, 0, 0]]).unwrap();
        assert_eq!(spin(&e1, &[id]).unwrap().dim(), 1);

        let shift = FFMatrix::permutation(2, &[1, 2, 0]);
        let full = spin(&e1, std::slice::from_ref(&shift)).unwrap();
        assert_eq!(full.dim(), 3);
        assert!(full.is_invariant(&[shift]));

        let bad = FFMatrix::identity(2, 2);
        assert!(spin(&e1, &[bad]).is_err());
    }

    #[test]
    fn annihilator_and_coordinates() {
        let s = Subspace::from_vectors(
            5,
            3,
            vec![FFVector::from_residues(5, &[1, 2, 0]), FFVector::from_residues(5, &[0, 1, 1])],
        );
        assert_eq!(s.dim(), 2);
        let ann = s.annihilator();
        assert_eq!(ann.dim(), 1);
        for b in s.basis().rows() {
            assert_eq!(b.dot(&ann.basis().rows()[0]), 0);
        }
        let v = FFVector::from_residues(5, &[2, 1, 2]);
        let coords = s.coordinates(&v).unwrap();
        let rebuilt = FFVector::linear_combination(
            5,
            3,
            coords.iter().copied().zip(s.basis().rows()),
        );
        assert_eq!(rebuilt, v);
    }
}
