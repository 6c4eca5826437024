//! Complex discrete Fourier transforms over products of cyclic groups.
//!
//! Each axis is transformed independently: radix-2 for power-of-two lengths,
//! a direct sum for short axes and Bluestein's chirp reduction otherwise.
//! Forward transforms use the kernel `e(-jk/n)` and are unnormalised.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::GroupSpec;

const DIRECT_MAX: usize = 32;

/// `e(sign * k / n)` with the angle reduced exactly before evaluation.
fn unit(k: u128, n: u128, sign: f64) -> Complex64 {
    let r = (k % n) as f64;
    let theta = sign * 2.0 * PI * r / n as f64;
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

fn fft_pow2(a: &mut [Complex64], inverse: bool) {
    let n = a.len();
    if n <= 1 {
        return;
    }
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
    let sign = if inverse { 1.0 } else { -1.0 };
    let roots: Vec<Complex64> = (0..n / 2)
        .map(|k| unit(k as u128, n as u128, sign))
        .collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = n / len;
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for (k, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let v = *y * roots[k * step];
                let u = *x;
                *x = u + v;
                *y = u - v;
            }
        }
        len <<= 1;
    }
}

fn dft_direct(a: &mut [Complex64], inverse: bool) {
    let n = a.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let table: Vec<Complex64> = (0..n).map(|k| unit(k as u128, n as u128, sign)).collect();
    let out: Vec<Complex64> = (0..n)
        .map(|j| {
            a.iter()
                .enumerate()
                .map(|(k, &x)| x * table[(j * k) % n])
                .sum()
        })
        .collect();
    a.copy_from_slice(&out);
}

fn dft_bluestein(a: &mut [Complex64], inverse: bool) {
    let n = a.len();
    let m = (2 * n - 1).next_power_of_two();
    let sign = if inverse { 1.0 } else { -1.0 };
    // chirp[k] = e(sign * k^2 / 2n)
    let two_n = 2 * n as u128;
    let chirp: Vec<Complex64> = (0..n)
        .map(|k| unit((k as u128 * k as u128) % two_n, two_n, sign))
        .collect();
    let mut x = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..n {
        x[k] = a[k] * chirp[k];
    }
    let mut y = vec![Complex64::new(0.0, 0.0); m];
    y[0] = chirp[0].conj();
    for k in 1..n {
        y[k] = chirp[k].conj();
        y[m - k] = chirp[k].conj();
    }
    fft_pow2(&mut x, false);
    fft_pow2(&mut y, false);
    for (u, v) in x.iter_mut().zip(&y) {
        *u *= v;
    }
    fft_pow2(&mut x, true);
    let scale = 1.0 / m as f64;
    for k in 0..n {
        a[k] = x[k] * scale * chirp[k];
    }
}

/// Unnormalised 1-D DFT of arbitrary length, in place.
pub(crate) fn dft_1d(a: &mut [Complex64], inverse: bool) {
    let n = a.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        fft_pow2(a, inverse);
    } else if n <= DIRECT_MAX {
        dft_direct(a, inverse);
    } else {
        dft_bluestein(a, inverse);
    }
}

/// Unnormalised multi-dimensional DFT over `group`, in place.
pub(crate) fn dft_group(values: &mut [Complex64], group: &GroupSpec, inverse: bool) {
    debug_assert_eq!(values.len(), group.order());
    let order = group.order();
    let mut stride = 1;
    let mut line = Vec::new();
    for &m in group.factors() {
        let block = stride * m;
        line.resize(m, Complex64::new(0.0, 0.0));
        for hi in (0..order).step_by(block) {
            for lo in 0..stride {
                let base = hi + lo;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = values[base + j * stride];
                }
                dft_1d(&mut line, inverse);
                for (j, &v) in line.iter().enumerate() {
                    values[base + j * stride] = v;
                }
            }
        }
        stride = block;
    }
}
