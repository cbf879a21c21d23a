use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Error, Result};
use crate::ffla::{check_field, FFMatrix};

/// Sparse trilinear form `Σ c_ijk x_i y_j z_k` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor3 {
    dims: [usize; 3],
    p: u32,
    entries: BTreeMap<[usize; 3], u32>,
}

#[derive(Serialize, Deserialize)]
struct TensorFile {
    dims: [usize; 3],
    #[serde(rename = "char")]
    p: u32,
    entries: Vec<[u64; 4]>,
}

impl Tensor3 {
    pub fn zero(dims: [usize; 3], p: u32) -> Result<Self> {
        check_field(p)?;
        Ok(Tensor3 {
            dims,
            p,
            entries: BTreeMap::new(),
        })
    }

    /// Unit diagonal of size `n`.
    pub fn diagonal(n: usize, p: u32) -> Result<Self> {
        let mut t = Self::zero([n; 3], p)?;
        for i in 0..n {
            t.add(i, i, i, 1);
        }
        Ok(t)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.entries.get(&[i, j, k]).copied().unwrap_or(0)
    }

    /// Nonzero coefficients in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = ([usize; 3], u32)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Add `v` to the coefficient at `(i, j, k)`. Panics when out of range.
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: u32) {
        assert!(i < self.dims[0] && j < self.dims[1] && k < self.dims[2], "index out of range");
        let v = v % self.p;
        if v == 0 {
            return;
        }
        let e = self.entries.entry([i, j, k]).or_insert(0);
        *e = (*e + v) % self.p;
        if *e == 0 {
            self.entries.remove(&[i, j, k]);
        }
    }

    /// Row-major dense coefficients.
    pub fn to_dense(&self) -> Vec<u32> {
        let [_, n2, n3] = self.dims;
        let mut out = vec![0; self.dims.iter().product()];
        for ([i, j, k], v) in self.entries() {
            out[(i * n2 + j) * n3 + k] = v;
        }
        out
    }

    pub fn from_dense(dims: [usize; 3], p: u32, dense: &[u32]) -> Result<Self> {
        let mut t = Self::zero(dims, p)?;
        let [_, n2, n3] = dims;
        for (x, &v) in dense.iter().enumerate() {
            if v % p != 0 {
                t.add(x / (n2 * n3), (x / n3) % n2, x % n3, v);
            }
        }
        Ok(t)
    }

    /// `c'_{i'j'k'} = Σ A_{i'i} B_{j'j} C_{k'k} c_ijk`.
    pub fn apply_mode_maps(&self, a: &FFMatrix, b: &FFMatrix, c: &FFMatrix) -> Result<Tensor3> {
        for (m, (map, n)) in [a, b, c].iter().zip(self.dims).enumerate() {
            if map.ncols() != n || map.p() != self.p {
                return Err(param_err!(
                    "mode {} map has {} columns over F_{}, tensor mode has size {n} over F_{}",
                    m + 1,
                    map.ncols(),
                    map.p(),
                    self.p
                ));
            }
        }
        let columns = |m: &FFMatrix| -> Vec<Vec<(usize, u64)>> {
            let t = m.transpose();
            t.rows()
                .iter()
                .map(|r| {
                    (0..r.len())
                        .filter_map(|i| {
                            let x = r.get(i);
                            (x != 0).then_some((i, x as u64))
                        })
                        .collect()
                })
                .collect()
        };
        let (ca, cb, cc) = (columns(a), columns(b), columns(c));
        let p = self.p as u64;
        let mut acc: BTreeMap<[usize; 3], u64> = BTreeMap::new();
        for ([i, j, k], v) in self.entries() {
            for &(i2, x) in &ca[i] {
                let vx = v as u64 * x % p;
                for &(j2, y) in &cb[j] {
                    let vxy = vx * y % p;
                    for &(k2, z) in &cc[k] {
                        let e = acc.entry([i2, j2, k2]).or_insert(0);
                        *e = (*e + vxy * z) % p;
                    }
                }
            }
        }
        Ok(Tensor3 {
            dims: [a.nrows(), b.nrows(), c.nrows()],
            p: self.p,
            entries: acc
                .into_iter()
                .filter(|&(_, v)| v != 0)
                .map(|(k, v)| (k, v as u32))
                .collect(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let file = TensorFile {
            dims: self.dims,
            p: self.p,
            entries: self
                .entries()
                .map(|([i, j, k], v)| [i as u64, j as u64, k as u64, v as u64])
                .collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    /// Parse the `{dims, char, entries: [[i, j, k, v], ...]}` format.
    /// Out-of-range indices, duplicates and zero values are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: TensorFile =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("tensor file: {e}")))?;
        let mut t = Self::zero(file.dims, file.p)?;
        for [i, j, k, v] in file.entries {
            let idx = [i as usize, j as usize, k as usize];
            if idx.iter().zip(file.dims).any(|(&x, n)| x >= n) {
                return Err(Error::Input(format!("entry {idx:?} outside dims {:?}", file.dims)));
            }
            if v % file.p as u64 == 0 {
                return Err(Error::Input(format!("entry {idx:?} has zero value")));
            }
            if t.entries.contains_key(&idx) {
                return Err(Error::Input(format!("duplicate entry {idx:?}")));
            }
            t.add(idx[0], idx[1], idx[2], (v % file.p as u64) as u32);
        }
        Ok(t)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}
