//! Power-of-two number-theoretic transform modulo the prime
//! `p = 4194240 * 2^40 + 1` (62 bits, `2^46 | p - 1`, primitive root 11).
//!
//! Residues are kept in Montgomery form with `R = 2^64`. Signed inputs are
//! mapped into `[0, p)` and outputs are lifted back into `(-p/2, p/2)`; the
//! caller guarantees that every true output lies in that window.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) const MODULUS: u64 = 4_611_615_649_683_210_241;
const PRIMITIVE_ROOT: u64 = 11;
const MAX_LOG_LEN: u32 = 46;

/// Largest absolute output value the transform recovers unambiguously.
pub(crate) const MAX_EXACT: u64 = (MODULUS - 1) / 2;

// -p^{-1} mod 2^64 by Newton iteration.
const NEG_INV: u64 = {
    let mut inv: u64 = 1;
    let mut i = 0;
    while i < 6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(MODULUS.wrapping_mul(inv)));
        i += 1;
    }
    inv.wrapping_neg()
};

// R^2 mod p, used to enter Montgomery form.
const R2: u64 = ((u128::MAX % MODULUS as u128 + 1) % MODULUS as u128) as u64;

#[inline(always)]
fn redc(t: u128) -> u64 {
    let m = (t as u64).wrapping_mul(NEG_INV);
    let u = ((t + m as u128 * MODULUS as u128) >> 64) as u64;
    if u >= MODULUS {
        u - MODULUS
    } else {
        u
    }
}

#[inline(always)]
fn mont_mul(a: u64, b: u64) -> u64 {
    redc(a as u128 * b as u128)
}

#[inline(always)]
fn to_mont(a: u64) -> u64 {
    mont_mul(a % MODULUS, R2)
}

#[inline(always)]
fn from_mont(a: u64) -> u64 {
    redc(a as u128)
}

#[inline(always)]
fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline(always)]
fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

fn mont_pow(mut base: u64, mut e: u64) -> u64 {
    let mut r = to_mont(1);
    while e > 0 {
        if e & 1 == 1 {
            r = mont_mul(r, base);
        }
        base = mont_mul(base, base);
        e >>= 1;
    }
    r
}

fn bit_reverse(a: &mut [u64]) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
}

fn transform(a: &mut [u64], inverse: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    bit_reverse(a);
    let g = to_mont(PRIMITIVE_ROOT);
    let mut len = 2;
    while len <= n {
        let mut w = mont_pow(g, (MODULUS - 1) / len as u64);
        if inverse {
            w = mont_pow(w, MODULUS - 2);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut cur = to_mont(1);
        for _ in 0..half {
            twiddles.push(cur);
            cur = mont_mul(cur, w);
        }
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x;
                let v = mont_mul(*y, tw);
                *x = add_mod(u, v);
                *y = sub_mod(u, v);
            }
        }
        len <<= 1;
    }
    if inverse {
        let inv_n = mont_pow(to_mont(n as u64), MODULUS - 2);
        for x in a.iter_mut() {
            *x = mont_mul(*x, inv_n);
        }
    }
}

fn encode(v: i64) -> u64 {
    if v >= 0 {
        to_mont(v as u64)
    } else {
        let m = v.unsigned_abs() % MODULUS;
        to_mont(if m == 0 { 0 } else { MODULUS - m })
    }
}

fn decode(v: u64) -> i64 {
    let r = from_mont(v);
    if r > MAX_EXACT {
        -((MODULUS - r) as i64)
    } else {
        r as i64
    }
}

/// Length of the transform needed for a linear convolution of the given sizes.
pub(crate) fn transform_len(a_len: usize, b_len: usize) -> Option<usize> {
    let need = (a_len + b_len).saturating_sub(1).max(1);
    let n = need.checked_next_power_of_two()?;
    (n.trailing_zeros() <= MAX_LOG_LEN).then_some(n)
}

/// Exact linear convolution `c[k] = sum_i a[i] b[k - i]`, valid when every
/// `|c[k]| <= MAX_EXACT`.
pub(crate) fn linear_convolution(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let n = transform_len(a.len(), b.len()).expect("transform length within 2^46");
    let mut fa = vec![0u64; n];
    let mut fb = vec![0u64; n];
    for (dst, &v) in fa.iter_mut().zip(a) {
        *dst = encode(v);
    }
    for (dst, &v) in fb.iter_mut().zip(b) {
        *dst = encode(v);
    }
    transform(&mut fa, false);
    transform(&mut fb, false);
    for (x, &y) in fa.iter_mut().zip(&fb) {
        *x = mont_mul(*x, y);
    }
    transform(&mut fa, true);
    fa.truncate(out_len);
    fa.into_iter().map(decode).collect()
}
