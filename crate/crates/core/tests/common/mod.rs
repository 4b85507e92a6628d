//! Oracles that share no code path with the library: exact rational linear
//! algebra and fixed-point big-integer transcendental functions.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Solves `(KᵀK + μI) g = KᵀΨ` exactly over the rationals, with every f64
/// input converted without rounding.
pub fn exact_tikhonov(k: &[Vec<f64>], psi: &[f64], mu: f64) -> Vec<f64> {
    let rows = k.len();
    let cols = k[0].len();
    let q = |x: f64| BigRational::from_float(x).expect("finite input");
    let kq: Vec<Vec<BigRational>> = k.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let pq: Vec<BigRational> = psi.iter().map(|&x| q(x)).collect();
    let muq = q(mu);

    // augmented normal-equation matrix [KᵀK + μI | KᵀΨ]
    let mut a = vec![vec![BigRational::zero(); cols + 1]; cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut s = BigRational::zero();
            for r in 0..rows {
                s += &kq[r][i] * &kq[r][j];
            }
            if i == j {
                s += &muq;
            }
            a[i][j] = s;
        }
        let mut s = BigRational::zero();
        for r in 0..rows {
            s += &kq[r][i] * &pq[r];
        }
        a[i][cols] = s;
    }
    for col in 0..cols {
        let pivot = (col..cols).find(|&r| !a[r][col].is_zero()).expect("nonsingular");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for j in col..=cols {
            a[col][j] = &a[col][j] / &p;
        }
        for r in 0..cols {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=cols {
                    let sub = &f * &a[col][j];
                    a[r][j] -= sub;
                }
            }
        }
    }
    a.iter().map(|row| row[cols].to_f64().unwrap()).collect()
}

/// Fixed-point decimal with `DIGITS` fractional digits.
pub const DIGITS: u32 = 80;

pub fn scale() -> BigInt {
    BigInt::from(10).pow(DIGITS)
}

/// Parses a plain decimal literal such as `"57.6225"` exactly.
pub fn fixed(text: &str) -> BigInt {
    let neg = text.starts_with('-');
    let text = text.trim_start_matches('-');
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let mut digits = String::from(int);
    digits.push_str(frac);
    let mut v: BigInt = digits.parse().unwrap();
    v *= BigInt::from(10).pow(DIGITS - frac.len() as u32);
    if neg {
        -v
    } else {
        v
    }
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    a * b / scale()
}

pub fn to_f64(x: &BigInt) -> f64 {
    // keep 30 significant digits before the float conversion
    let shift = BigInt::from(10).pow(DIGITS - 30);
    (x / shift).to_f64().unwrap() / 1e30
}

/// e^x by Taylor series after halving the argument until |x| < 1, then squaring back.
pub fn exp(x: &BigInt) -> BigInt {
    let one = scale();
    let mut halvings = 0;
    let mut r = x.clone();
    while r.abs() >= one {
        r /= 2;
        halvings += 1;
    }
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut n = 1u32;
    loop {
        term = mul(&term, &r) / n;
        if term.is_zero() {
            break;
        }
        sum += &term;
        n += 1;
    }
    for _ in 0..halvings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// π by Machin's formula.
pub fn pi() -> BigInt {
    fn arctan_inv(k: u32) -> BigInt {
        let one = scale();
        let k2 = BigInt::from(k * k);
        let mut power = &one / BigInt::from(k);
        let mut sum = power.clone();
        let mut n = 1u32;
        loop {
            power = &power / &k2;
            let term = &power / BigInt::from(2 * n + 1);
            if term.is_zero() {
                break;
            }
            if n % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            n += 1;
        }
        sum
    }
    BigInt::from(16) * arctan_inv(5) - BigInt::from(4) * arctan_inv(239)
}

pub fn sqrt(x: &BigInt) -> BigInt {
    (x * scale()).sqrt()
}

/// erf(x) = 2/√π Σ (−1)^n x^{2n+1} / (n! (2n+1)).
pub fn erf(x: &BigInt) -> BigInt {
    let x2 = mul(x, x);
    let mut power = x.clone(); // x^{2n+1} / n!
    let mut sum = x.clone();
    let mut n = 1u32;
    loop {
        power = -mul(&power, &x2) / n;
        let term = &power / BigInt::from(2 * n + 1);
        if term.is_zero() {
            break;
        }
        sum += term;
        n += 1;
    }
    let two_over_sqrt_pi = BigInt::from(2) * scale() * scale() / sqrt(&pi());
    mul(&sum, &two_over_sqrt_pi)
}

/// e^{x²} erfc(x), the closed form of E_{1/2}(−x).
pub fn exp_sq_erfc(x: &BigInt) -> BigInt {
    let erfc = scale() - erf(x);
    mul(&exp(&mul(x, x)), &erfc)
}

/// 2 Σ_{k=1}^{terms} (−1)^{k−1} e^{−2k²λ²}.
pub fn kolmogorov_partial_sum(lambda: &BigInt, terms: u32) -> BigInt {
    let l2 = mul(lambda, lambda);
    let mut sum = BigInt::zero();
    for k in 1..=terms {
        let arg = -(BigInt::from(2 * k * k) * &l2);
        let t = exp(&arg);
        if k % 2 == 1 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    sum * 2
}

pub fn one() -> BigInt {
    BigInt::one() * scale()
}
