//! Row kernels. `F_2` rows are packed 64 entries per word; every other
//! prime uses one byte per entry, with the modulus monomorphized for small
//! primes so the reductions vectorize.

macro_rules! dispatch_prime {
    ($p:expr, $f:ident :: <P> ($($arg:expr),*), $fallback:expr) => {
        match $p {
            3 => $f::<3>($($arg),*),
            5 => $f::<5>($($arg),*),
            7 => $f::<7>($($arg),*),
            11 => $f::<11>($($arg),*),
            13 => $f::<13>($($arg),*),
            17 => $f::<17>($($arg),*),
            19 => $f::<19>($($arg),*),
            23 => $f::<23>($($arg),*),
            _ => $fallback,
        }
    };
}

#[inline(always)]
fn axpy_const<const P: u16>(dst: &mut [u8], src: &[u8], c: u16) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u16 + c * s as u16) % P) as u8;
    }
}

/// `dst += c * src` over `F_p`, `p` odd and below 256.
pub fn axpy_bytes(dst: &mut [u8], src: &[u8], c: u32, p: u32) {
    if c == 0 {
        return;
    }
    let c16 = c as u16;
    dispatch_prime!(p, axpy_const::<P>(dst, src, c16), {
        let p16 = p as u16;
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = ((*d as u16 + c16 * s as u16) % p16) as u8;
        }
    })
}

#[inline(always)]
fn scale_const<const P: u16>(row: &mut [u8], c: u16) {
    for x in row.iter_mut() {
        *x = ((*x as u16 * c) % P) as u8;
    }
}

pub fn scale_bytes(row: &mut [u8], c: u32, p: u32) {
    let c16 = c as u16;
    dispatch_prime!(p, scale_const::<P>(row, c16), {
        for x in row.iter_mut() {
            *x = ((*x as u16 * c16) % p as u16) as u8;
        }
    })
}

pub fn dot_bytes(a: &[u8], b: &[u8], p: u32) -> u32 {
    // 16384 products of residues below 256 fit in u32
    let mut total: u64 = 0;
    for (ca, cb) in a.chunks(16384).zip(b.chunks(16384)) {
        let s: u32 = ca
            .iter()
            .zip(cb)
            .map(|(&x, &y)| x as u32 * y as u32)
            .sum();
        total += s as u64;
    }
    (total % p as u64) as u32
}

pub fn axpy_bits(dst: &mut [u64], src: &[u64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

pub fn dot_bits(a: &[u64], b: &[u64]) -> u32 {
    let ones: u32 = a.iter().zip(b).map(|(&x, &y)| (x & y).count_ones()).sum();
    ones & 1
}

/// Lazy accumulator for linear combinations of byte rows: adds products
/// into `u32` lanes and reduces only when overflow would become possible.
pub struct ByteAccumulator {
    acc: Vec<u32>,
    p: u32,
    pending: u32,
    limit: u32,
}

impl ByteAccumulator {
    pub fn new(len: usize, p: u32) -> Self {
        let max_term = (p - 1) * (p - 1);
        ByteAccumulator {
            acc: vec![0; len],
            p,
            pending: 0,
            limit: ((u32::MAX - p) / max_term.max(1)).saturating_sub(1).max(1),
        }
    }

    pub fn add(&mut self, c: u32, row: &[u8]) {
        if c == 0 {
            return;
        }
        if self.pending >= self.limit {
            self.reduce();
        }
        for (a, &x) in self.acc.iter_mut().zip(row) {
            *a += c * x as u32;
        }
        self.pending += 1;
    }

    fn reduce(&mut self) {
        let p = self.p;
        for a in self.acc.iter_mut() {
            *a %= p;
        }
        self.pending = 1;
    }

    pub fn finish(mut self) -> Vec<u8> {
        self.reduce();
        self.acc.into_iter().map(|x| x as u8).collect()
    }
}
