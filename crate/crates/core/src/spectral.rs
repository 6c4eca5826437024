//! Functions on a finite abelian group, exact convolution, the Fourier
//! transform, `L^p` norms and large spectra.
//!
//! Conventions follow counting measure throughout:
//! `f*g(x) = sum_y f(y) g(x - y)`, `||f||_p^p = sum_x |f(x)|^p`,
//! `f^(gamma) = sum_x f(x) conj(gamma(x))`, and inversion carries the
//! `1/|G|` factor.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{fft, ntt, Error, GroupSet, GroupSpec, Result, TOLERANCE};

/// A function `G -> T` stored densely in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseFunction<T> {
    group: GroupSpec,
    values: Vec<T>,
}

/// Integer-valued functions: indicators, pushforwards, exact convolutions.
pub type IntFunction = DenseFunction<i64>;
/// Complex-valued functions: inverse transforms and character sums.
pub type ComplexFunction = DenseFunction<Complex64>;

/// Values that can be fed to the Fourier transform.
pub trait Scalar: Copy {
    fn to_complex(self) -> Complex64;
    fn modulus(self) -> f64;
}

impl Scalar for i64 {
    fn to_complex(self) -> Complex64 {
        Complex64::new(self as f64, 0.0)
    }
    fn modulus(self) -> f64 {
        self.unsigned_abs() as f64
    }
}

impl Scalar for f64 {
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn modulus(self) -> f64 {
        libm::fabs(self)
    }
}

impl Scalar for Complex64 {
    fn to_complex(self) -> Complex64 {
        self
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

impl<T> DenseFunction<T> {
    pub fn new(group: &GroupSpec, values: Vec<T>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidParameter(format!(
                "function has {} values, group order is {}",
                values.len(),
                group.order()
            )));
        }
        Ok(DenseFunction {
            group: group.clone(),
            values,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

impl<T: Copy> DenseFunction<T> {
    #[inline]
    pub fn at(&self, x: usize) -> T {
        self.values[x]
    }

    pub fn map<U>(&self, f: impl Fn(T) -> U) -> DenseFunction<U> {
        DenseFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `x -> f(x + t)`.
    pub fn shift(&self, t: usize) -> Self {
        let g = &self.group;
        let values = (0..g.order()).map(|x| self.values[g.add(x, t)]).collect();
        DenseFunction {
            group: g.clone(),
            values,
        }
    }

    /// `x -> f(-x)`.
    pub fn reflect(&self) -> Self {
        let g = &self.group;
        let values = (0..g.order()).map(|x| self.values[g.neg(x)]).collect();
        DenseFunction {
            group: g.clone(),
            values,
        }
    }
}

impl IntFunction {
    pub fn zeros(group: &GroupSpec) -> Self {
        DenseFunction {
            group: group.clone(),
            values: vec![0; group.order()],
        }
    }

    /// `1_A`.
    pub fn indicator(set: &GroupSet) -> Self {
        let mut f = Self::zeros(set.group());
        for x in set.iter() {
            f.values[x] = 1;
        }
        f
    }

    /// `delta_x`.
    pub fn delta(group: &GroupSpec, x: usize) -> Result<Self> {
        let mut f = Self::zeros(group);
        f.values[group.check(x)?] = 1;
        Ok(f)
    }

    /// `y -> #{a in A : c a = y}`, the pushforward of `1_A` under `x -> c x`.
    pub fn dilated_indicator(set: &GroupSet, c: i64) -> Self {
        let g = set.group();
        let mut f = Self::zeros(g);
        for x in set.iter() {
            f.values[g.mul(c, x)] += 1;
        }
        f
    }

    pub fn sum(&self) -> i128 {
        self.values.iter().map(|&v| v as i128).sum()
    }

    pub fn l1(&self) -> u128 {
        self.values.iter().map(|&v| v.unsigned_abs() as u128).sum()
    }

    pub fn max_abs(&self) -> u64 {
        self.values
            .iter()
            .map(|v| v.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn support_len(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    pub fn to_complex(&self) -> ComplexFunction {
        self.map(|v| Complex64::new(v as f64, 0.0))
    }

    /// `sum_x f(x) g(x)`.
    pub fn inner(&self, other: &IntFunction) -> Result<i128> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum())
    }
}

/// How [`convolve_with`] evaluates the convolution. Every method is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionMethod {
    /// Pick the cheaper of the other two.
    Auto,
    /// Number-theoretic transform on the zero-padded (carry-free) flattening.
    Transform,
    /// Double loop over the two supports.
    Direct,
}

/// Exact `f*g` for integer-valued functions.
pub fn convolve(f: &IntFunction, g: &IntFunction) -> Result<IntFunction> {
    convolve_with(f, g, ConvolutionMethod::Auto)
}

pub fn convolve_with(
    f: &IntFunction,
    g: &IntFunction,
    method: ConvolutionMethod,
) -> Result<IntFunction> {
    if f.group != g.group {
        return Err(Error::GroupMismatch);
    }
    // |f*g(x)| <= min(||f||_1 ||g||_inf, ||g||_1 ||f||_inf); partial sums obey the same bound.
    let bound = (f.l1().saturating_mul(g.max_abs() as u128))
        .min(g.l1().saturating_mul(f.max_abs() as u128));
    if bound > i64::MAX as u128 {
        return Err(Error::Overflow);
    }
    let layout = PaddedLayout::new(&f.group);
    let transform_ok = bound <= ntt::MAX_EXACT as u128 && layout.is_some();
    let method = match method {
        ConvolutionMethod::Auto => {
            let direct_cost = f.support_len() as u128 * g.support_len() as u128;
            match (&layout, transform_ok) {
                (Some(l), true) => {
                    let n = l.transform_len as u128;
                    let log = n.trailing_zeros() as u128 + 1;
                    if direct_cost <= 6 * n * log {
                        ConvolutionMethod::Direct
                    } else {
                        ConvolutionMethod::Transform
                    }
                }
                _ => ConvolutionMethod::Direct,
            }
        }
        ConvolutionMethod::Transform if !transform_ok => {
            return Err(if layout.is_none() {
                Error::TooLarge("padded transform length".into())
            } else {
                Error::Overflow
            })
        }
        m => m,
    };
    match method {
        ConvolutionMethod::Transform => Ok(convolve_padded(f, g, &layout.expect("checked above"))),
        _ => Ok(convolve_direct(f, g)),
    }
}

fn convolve_direct(f: &IntFunction, g: &IntFunction) -> IntFunction {
    let grp = &f.group;
    let mut out = IntFunction::zeros(grp);
    let gs: Vec<(usize, i64)> = g
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| (i, v))
        .collect();
    for (x, &fx) in f.values.iter().enumerate() {
        if fx == 0 {
            continue;
        }
        for &(y, gy) in &gs {
            out.values[grp.add(x, y)] += fx * gy;
        }
    }
    out
}

/// Flattening with per-axis padding `2 m_i - 1`, so that adding two
/// flattened indices never carries between axes.
struct PaddedLayout {
    padded: Vec<usize>,
    strides: Vec<usize>,
    transform_len: usize,
}

const MAX_TRANSFORM_LEN: usize = 1 << 26;

impl PaddedLayout {
    fn new(group: &GroupSpec) -> Option<Self> {
        let mut strides = Vec::with_capacity(group.rank());
        let mut padded = Vec::with_capacity(group.rank());
        let mut total: usize = 1;
        let mut max_index: usize = 0;
        for &m in group.factors() {
            strides.push(total);
            max_index = max_index.checked_add((m - 1).checked_mul(total)?)?;
            padded.push(2 * m - 1);
            total = total.checked_mul(2 * m - 1)?;
        }
        let transform_len = ntt::transform_len(max_index + 1, max_index + 1)?;
        (transform_len <= MAX_TRANSFORM_LEN).then_some(PaddedLayout {
            padded,
            strides,
            transform_len,
        })
    }

    fn spread(&self, group: &GroupSpec, values: &[i64]) -> Vec<i64> {
        let len: usize = group
            .factors()
            .iter()
            .zip(&self.strides)
            .map(|(&m, &s)| (m - 1) * s)
            .sum::<usize>()
            + 1;
        let mut out = vec![0i64; len];
        let mut coords = vec![0usize; group.rank()];
        let mut flat = 0usize;
        for &v in values {
            out[flat] = v;
            // odometer increment of the mixed-radix coordinates
            for (i, &m) in group.factors().iter().enumerate() {
                coords[i] += 1;
                flat += self.strides[i];
                if coords[i] < m {
                    break;
                }
                flat -= m * self.strides[i];
                coords[i] = 0;
            }
        }
        out
    }
}

fn convolve_padded(f: &IntFunction, g: &IntFunction, layout: &PaddedLayout) -> IntFunction {
    let grp = &f.group;
    let a = layout.spread(grp, &f.values);
    let b = layout.spread(grp, &g.values);
    let c = ntt::linear_convolution(&a, &b);
    let mut out = IntFunction::zeros(grp);
    let gstrides: Vec<usize> = {
        let mut s = Vec::with_capacity(grp.rank());
        let mut acc = 1;
        for &m in grp.factors() {
            s.push(acc);
            acc *= m;
        }
        s
    };
    for (u, &v) in c.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let mut rest = u;
        let mut idx = 0;
        for ((&p, &m), &gs) in layout.padded.iter().zip(grp.factors()).zip(&gstrides) {
            let d = rest % p;
            rest /= p;
            idx += (if d >= m { d - m } else { d }) * gs;
        }
        out.values[idx] += v;
    }
    out
}

/// `f_1 * f_2 * ... * f_k` for `k >= 1`.
pub fn convolve_many(fs: &[&IntFunction]) -> Result<IntFunction> {
    let (first, rest) = fs
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("no functions to convolve".into()))?;
    let mut acc = (*first).clone();
    for f in rest {
        acc = convolve(&acc, f)?;
    }
    Ok(acc)
}

/// Fourier coefficients `f^(gamma)` for every character, in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    group: GroupSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn at(&self, gamma: usize) -> Complex64 {
        self.coeffs[gamma]
    }

    /// `E_gamma |f^(gamma)|^2`.
    pub fn mean_square(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.coeffs.len() as f64
    }

    /// Pointwise product, the transform of a convolution.
    pub fn pointwise(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(Spectrum {
            group: self.group.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }
}

pub fn dft<T: Scalar>(f: &DenseFunction<T>) -> Spectrum {
    let mut coeffs: Vec<Complex64> = f.values.iter().map(|&v| v.to_complex()).collect();
    fft::dft_group(&mut coeffs, &f.group, false);
    Spectrum {
        group: f.group.clone(),
        coeffs,
    }
}

pub fn idft(s: &Spectrum) -> ComplexFunction {
    let mut values = s.coeffs.clone();
    fft::dft_group(&mut values, &s.group, true);
    let scale = 1.0 / s.group.order() as f64;
    for v in values.iter_mut() {
        *v *= scale;
    }
    DenseFunction {
        group: s.group.clone(),
        values,
    }
}

/// `||f||_p` with counting measure; `p = f64::INFINITY` gives the maximum.
pub fn lp_norm<T: Scalar>(f: &DenseFunction<T>, p: f64) -> Result<f64> {
    lp_norm_of(f.values.iter().map(|&v| v.modulus()), p)
}

pub(crate) fn lp_norm_of(moduli: impl Iterator<Item = f64>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("L^p exponent {p} < 1")));
    }
    if p.is_infinite() {
        return Ok(moduli.fold(0.0, f64::max));
    }
    if p == 1.0 {
        return Ok(moduli.sum());
    }
    if p == 2.0 {
        return Ok(libm::sqrt(moduli.map(|m| m * m).sum()));
    }
    let total: f64 = moduli.map(|m| libm::pow(m, p)).sum();
    Ok(libm::pow(total, 1.0 / p))
}

/// `mu_X^` for `mu_X = 1_X / |X|`.
pub fn normalized_transform(x: &GroupSet) -> Result<Spectrum> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut s = dft(&IntFunction::indicator(x));
    let inv = 1.0 / x.len() as f64;
    for c in s.coeffs.iter_mut() {
        *c *= inv;
    }
    Ok(s)
}

/// `Spec_delta(mu_X) = { gamma : |mu_X^(gamma)| >= delta }`, ascending.
pub fn spec_delta(x: &GroupSet, delta: f64) -> Result<Vec<usize>> {
    let s = normalized_transform(x)?;
    large_spectrum(&s, delta).map(|v| v.into_iter().map(|(g, _)| g).collect())
}

/// Characters of `s` with `|s(gamma)|^2 >= delta^2 - TOLERANCE`, ascending,
/// paired with their coefficient modulus.
pub fn large_spectrum(s: &Spectrum, delta: f64) -> Result<Vec<(usize, f64)>> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "spectrum threshold {delta} not in (0, 1]"
        )));
    }
    let threshold = delta * delta - TOLERANCE;
    Ok(s.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() >= threshold)
        .map(|(g, c)| (g, c.norm()))
        .collect())
}
