// SPDX-License-Identifier: MIT OR Apache-2.0

//! Helpers shared by the integration tests: random instances and an
//! arbitrary-precision reference for the bound formulas.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitsearch::data::TimeSeriesDataset;
use splitsearch::model::{LinearModel, Predictor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random dataset with `d` old and `k` new features in `[-1, 1]` and a
/// response that changes its linear law at `split` (zero-based), plus
/// uniform noise of half-width `noise`. Targets are clamped to `[-B, B]`.
pub fn random_linear(seed: u64, m: usize, d: usize, k: usize, split: usize, noise: f64, bound: f64) -> TimeSeriesDataset {
    let mut r = rng(seed);
    let w1: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
    let w2: Vec<f64> = (0..d + k).map(|_| r.random_range(-1.0..1.0)).collect();
    let mut rows = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m);
    for t in 0..m {
        let x: Vec<f64> = (0..d + k).map(|_| r.random_range(-1.0..1.0)).collect();
        let clean: f64 = if t < split {
            w1.iter().zip(&x).map(|(a, b)| a * b).sum()
        } else {
            w2.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + 0.5
        };
        let e = if noise > 0.0 { r.random_range(-noise..noise) } else { 0.0 };
        y.push((clean + e).clamp(-bound, bound));
        rows.push(x);
    }
    TimeSeriesDataset::from_rows(&rows, y, None, d, k, bound).unwrap()
}

/// Dataset whose features, targets, and every quantity derived from them by
/// the finite classes below are dyadic rationals, so sums of squared errors
/// are exact in `f64`.
pub fn dyadic_dataset(seed: u64, m: usize, d: usize, k: usize) -> TimeSeriesDataset {
    let mut r = rng(seed);
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..d + k).map(|_| r.random_range(-4i32..=4) as f64 / 4.0).collect())
        .collect();
    let y: Vec<f64> = (0..m).map(|_| r.random_range(-16i32..=16) as f64 / 8.0).collect();
    TimeSeriesDataset::from_rows(&rows, y, None, d, k, 4.0).unwrap()
}

/// `size` random predictors with dyadic parameters on `width` inputs.
pub fn dyadic_class(r: &mut ChaCha8Rng, width: usize, size: usize) -> Vec<Predictor> {
    (0..size)
        .map(|i| {
            let c = r.random_range(-8i32..=8) as f64 / 4.0;
            if i % 2 == 0 {
                Predictor::Constant(c)
            } else {
                Predictor::Linear(LinearModel {
                    weights: (0..width).map(|_| r.random_range(-4i32..=4) as f64 / 4.0).collect(),
                    intercept: c,
                })
            }
        })
        .collect()
}

/// Fixed-point reals with `FRAC` fractional bits.
#[derive(Clone, Debug)]
pub struct Fixed(BigInt);

const FRAC: u32 = 384;

impl Fixed {
    pub fn from_int(v: u64) -> Self {
        Fixed(BigInt::from(v) << FRAC)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite());
        if v == 0.0 {
            return Fixed(BigInt::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        let shift = exp + FRAC as i64;
        let n = BigInt::from(mant) * sign;
        Fixed(if shift >= 0 { n << shift as u32 } else { n >> (-shift) as u32 })
    }

    pub fn from_big(v: &BigInt) -> Self {
        Fixed(v.clone() << FRAC)
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> FRAC)
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC) / &o.0)
    }

    pub fn sqrt(&self) -> Fixed {
        assert!(!self.0.is_negative());
        Fixed((&self.0 << FRAC).sqrt())
    }

    /// `atanh(z) = sum z^(2i+1) / (2i+1)` for `|z| <= 1/3`.
    fn atanh(z: &Fixed) -> Fixed {
        let z2 = z.mul(z);
        let mut power = z.clone();
        let mut sum = Fixed(BigInt::zero());
        let mut i = 0u64;
        while !power.0.is_zero() {
            sum = sum.add(&Fixed(&power.0 / BigInt::from(2 * i + 1)));
            power = power.mul(&z2);
            i += 1;
        }
        sum
    }

    fn ln2() -> Fixed {
        let third = Fixed::from_int(1).div(&Fixed::from_int(3));
        let a = Fixed::atanh(&third);
        a.add(&a)
    }

    /// Natural logarithm of a positive value: `x = 2^e r` with `r` in
    /// `[1, 2)` and `ln r = 2 atanh((r - 1) / (r + 1))`.
    pub fn ln(&self) -> Fixed {
        assert!(self.0.is_positive());
        let e = self.0.bits() as i64 - 1 - FRAC as i64;
        let r = if e >= 0 { Fixed(&self.0 >> e as u32) } else { Fixed(&self.0 << (-e) as u32) };
        let one = Fixed::from_int(1);
        let z = r.sub(&one).div(&r.add(&one));
        let a = Fixed::atanh(&z);
        let ln_r = a.add(&a);
        let ln2 = Fixed::ln2();
        let scaled = Fixed(&ln2.0 * BigInt::from(e));
        ln_r.add(&scaled)
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.0.abs();
        let bits = n.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (&n >> shift as u32).to_f64().unwrap();
        let v = top * 2f64.powi((shift - FRAC as i64) as i32);
        if self.0.is_negative() {
            -v
        } else {
            v
        }
    }
}

fn capacity(m: u64, bound: f64, p: u64) -> Fixed {
    // 3 p ln(e m B / p) = 3 p (1 + ln m + ln B - ln p)
    let inner = Fixed::from_int(1)
        .add(&Fixed::from_int(m).ln())
        .add(&Fixed::from_f64(bound).ln())
        .sub(&Fixed::from_int(p).ln());
    Fixed::from_int(3 * p).mul(&inner)
}

/// Reference value of the single-change bound with leading constant `c`.
pub fn reference_single_bound(c: u64, m: u64, bound: f64, delta: f64, p1: u64, p2: u64) -> f64 {
    let arg = Fixed::from_int(2 * (m + 1)).div(&Fixed::from_f64(delta));
    let total = Fixed::from_int(2).mul(&arg.ln()).add(&capacity(m, bound, p1)).add(&capacity(m, bound, p2));
    let root = total.div(&Fixed::from_int(m)).sqrt();
    Fixed::from_int(c).mul(&Fixed::from_f64(bound)).mul(&root).to_f64()
}

/// Reference value of the SRM penalty; the logarithm's argument
/// `2 (m + 1)^K (K + 2)^2` is formed exactly.
pub fn reference_srm_penalty(k: u64, m: u64, bound: f64, delta: f64, p: &[u64]) -> f64 {
    let mut big = BigInt::from(2u32) * BigInt::from(k + 2).pow(2);
    let base = BigInt::from(m + 1);
    for _ in 0..k {
        big *= &base;
    }
    let arg = Fixed::from_big(&big).div(&Fixed::from_f64(delta));
    let mut total = Fixed::from_int(2).mul(&arg.ln());
    for &pj in p {
        total = total.add(&capacity(m, bound, pj));
    }
    let root = total.div(&Fixed::from_int(m)).sqrt();
    Fixed::from_int(11).mul(&Fixed::from_f64(bound)).mul(&root).to_f64()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Sanity anchors for the reference arithmetic itself.
pub fn self_check() {
    let ln10 = Fixed::from_int(10).ln().to_f64();
    assert!((ln10 - std::f64::consts::LN_10).abs() < 1e-15);
    let s2 = Fixed::from_int(2).sqrt().to_f64();
    assert!((s2 - std::f64::consts::SQRT_2).abs() < 1e-15);
    let small = Fixed::from_f64(0.001).ln().to_f64();
    assert!((small - 0.001f64.ln()).abs() < 1e-14);
    assert!(Fixed::from_int(1).ln().0.is_zero() || Fixed::from_int(1).ln().to_f64().abs() < 1e-100);
    let _ = BigInt::one();
}
