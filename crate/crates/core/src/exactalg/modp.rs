//! Dense linear algebra over `F_p` for rank certificates.
//!
//! For an integer (or `p`-integral rational) matrix `M`, `rank_p(M) ≤
//! rank_Q(M)`. Exactness of a complex is certified by `Q`-side identities
//! `d∘d = 0` together with `F_p` ranks large enough to fill every space,
//! so a bad prime can only cause a false negative, never a false positive.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::rat::Rat;

/// 31-bit primes used in turn.
pub const PRIMES: [u32; 4] = [2147483647, 2147483629, 2147483587, 2147483579];

/// `r mod p`, or `None` when `p` divides the denominator.
pub fn rat_mod(r: &Rat, p: u32) -> Option<u32> {
    let pb = BigInt::from(p);
    let n = r.numer().mod_floor(&pb).to_u64()?;
    let d = r.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(((n * inv_mod(d, p as u64)) % p as u64) as u32)
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Dense row-major matrix over `F_p`.
#[derive(Debug, Clone)]
pub struct ModMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ModMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        ModMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn add(&mut self, i: usize, j: usize, v: u32) {
        let x = &mut self.data[i * self.cols + j];
        *x = ((*x as u64 + v as u64) % self.p as u64) as u32;
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    /// Rank by Gaussian elimination; consumes the matrix.
    pub fn rank(self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut data = self.data;
        match self.p {
            2147483647 => rank_impl::<2147483647>(&mut data, rows, cols),
            2147483629 => rank_impl::<2147483629>(&mut data, rows, cols),
            2147483587 => rank_impl::<2147483587>(&mut data, rows, cols),
            2147483579 => rank_impl::<2147483579>(&mut data, rows, cols),
            p => rank_dyn(&mut data, rows, cols, p as u64),
        }
    }
}

fn rank_impl<const P: u64>(data: &mut [u32], rows: usize, cols: usize) -> usize {
    rank_dyn_inner(data, rows, cols, |x| x % P, P)
}

fn rank_dyn(data: &mut [u32], rows: usize, cols: usize, p: u64) -> usize {
    rank_dyn_inner(data, rows, cols, |x| x % p, p)
}

#[inline(always)]
fn rank_dyn_inner(
    data: &mut [u32],
    rows: usize,
    cols: usize,
    reduce: impl Fn(u64) -> u64,
    p: u64,
) -> usize {
    let mut r = 0;
    let mut support: Vec<(usize, u64)> = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for k in c..cols {
                data.swap(piv * cols + k, r * cols + k);
            }
        }
        let inv = inv_mod(data[r * cols + c] as u64, p);
        support.clear();
        for k in c..cols {
            let x = data[r * cols + k];
            if x != 0 {
                support.push((k, reduce(x as u64 * inv)));
            }
        }
        for i in r + 1..rows {
            let a = data[i * cols + c] as u64;
            if a == 0 {
                continue;
            }
            let neg = p - a;
            let row = &mut data[i * cols..(i + 1) * cols];
            for &(k, v) in &support {
                row[k] = reduce(row[k] as u64 + neg * v) as u32;
            }
        }
        r += 1;
    }
    r
}
