use std::fmt;

use super::kernels::{self, ByteAccumulator};
use crate::arith::inv_mod;

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) enum Data {
    Bits(Vec<u64>),
    Bytes(Vec<u8>),
}

/// A vector over the prime field `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFVector {
    p: u32,
    len: usize,
    data: Data,
}

impl fmt::Debug for FFVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{:?}", self.p, self.to_vec())
    }
}

pub(crate) fn field_inv(a: u32, p: u32) -> u32 {
    inv_mod(a as u64, p as u64) as u32
}

impl FFVector {
    pub fn zero(p: u32, len: usize) -> Self {
        let data = if p == 2 {
            Data::Bits(vec![0; len.div_ceil(64)])
        } else {
            Data::Bytes(vec![0; len])
        };
        FFVector { p, len, data }
    }

    pub fn unit(p: u32, len: usize, i: usize) -> Self {
        let mut v = Self::zero(p, len);
        v.set(i, 1);
        v
    }

    /// Entries are reduced mod `p`.
    pub fn from_residues(p: u32, entries: &[u32]) -> Self {
        let mut v = Self::zero(p, entries.len());
        for (i, &x) in entries.iter().enumerate() {
            v.set(i, x % p);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        debug_assert!(i < self.len);
        match &self.data {
            Data::Bits(w) => ((w[i / 64] >> (i % 64)) & 1) as u32,
            Data::Bytes(b) => b[i] as u32,
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, x: u32) {
        debug_assert!(i < self.len && x < self.p);
        match &mut self.data {
            Data::Bits(w) => {
                let mask = 1u64 << (i % 64);
                if x == 1 {
                    w[i / 64] |= mask;
                } else {
                    w[i / 64] &= !mask;
                }
            }
            Data::Bytes(b) => b[i] = x as u8,
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Bits(w) => w.iter().all(|&x| x == 0),
            Data::Bytes(b) => b.iter().all(|&x| x == 0),
        }
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        match &self.data {
            Data::Bits(w) => w
                .iter()
                .position(|&x| x != 0)
                .map(|k| k * 64 + w[k].trailing_zeros() as usize),
            Data::Bytes(b) => b.iter().position(|&x| x != 0),
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: u32, other: &FFVector) {
        debug_assert_eq!(self.len, other.len);
        match (&mut self.data, &other.data) {
            (Data::Bits(d), Data::Bits(s)) => {
                if c & 1 == 1 {
                    kernels::axpy_bits(d, s)
                }
            }
            (Data::Bytes(d), Data::Bytes(s)) => kernels::axpy_bytes(d, s, c % self.p, self.p),
            _ => unreachable!("field mismatch"),
        }
    }

    pub fn scale(&mut self, c: u32) {
        let c = c % self.p;
        match &mut self.data {
            Data::Bits(w) => {
                if c == 0 {
                    w.iter_mut().for_each(|x| *x = 0)
                }
            }
            Data::Bytes(b) => kernels::scale_bytes(b, c, self.p),
        }
    }

    pub fn dot(&self, other: &FFVector) -> u32 {
        debug_assert_eq!(self.len, other.len);
        match (&self.data, &other.data) {
            (Data::Bits(a), Data::Bits(b)) => kernels::dot_bits(a, b),
            (Data::Bytes(a), Data::Bytes(b)) => kernels::dot_bytes(a, b, self.p),
            _ => unreachable!("field mismatch"),
        }
    }

    /// Scale so the first nonzero entry is 1; returns its position.
    pub fn normalize(&mut self) -> Option<usize> {
        let i = self.first_nonzero()?;
        let lead = self.get(i);
        if lead != 1 {
            self.scale(field_inv(lead, self.p));
        }
        Some(i)
    }

    /// `Σ c_i v_i`, all of length `len`.
    pub fn linear_combination<'a>(
        p: u32,
        len: usize,
        terms: impl IntoIterator<Item = (u32, &'a FFVector)>,
    ) -> FFVector {
        if p == 2 {
            let mut out = FFVector::zero(2, len);
            for (c, v) in terms {
                out.axpy(c, v);
            }
            return out;
        }
        let mut acc = ByteAccumulator::new(len, p);
        for (c, v) in terms {
            if let Data::Bytes(b) = &v.data {
                acc.add(c % p, b);
            }
        }
        FFVector {
            p,
            len,
            data: Data::Bytes(acc.finish()),
        }
    }

    pub fn neg(&self) -> FFVector {
        let mut v = self.clone();
        v.scale(self.p - 1);
        v
    }
}
