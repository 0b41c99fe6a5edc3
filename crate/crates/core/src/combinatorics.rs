//! Exact binomials and the central-binomial inequalities, checked in
//! extended precision.
//!
//! All real-valued expressions are evaluated with [`PRECISION`] bits of
//! mantissa. An inequality `lhs <= rhs` is only reported as holding when
//! `rhs - lhs` exceeds `2^-40 * max(|lhs|, |rhs|)`.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

/// Mantissa bits used for every real-valued evaluation.
pub const PRECISION: usize = 192;

/// Relative guard band for inequality checks.
pub const GUARD_BITS: i32 = 40;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Error, PartialEq)]
pub enum NumericError {
    #[error("kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("beta must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("compare bound needs n >= 2 and 0 <= m < n (n = {n}, m = {m})")]
    CompareDomain { n: u64, m: u64 },
    #[error("n must be positive")]
    ZeroN,
    #[error("index floor(n/2) + k = {index} is outside [0, {n}]")]
    DeviationDomain { n: u64, index: i64 },
}

/// `C(n, k)` exactly; zero when `k` is outside `[0, n]`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` as a `u128`, for callers that stay at desk scale.
///
/// Panics on overflow.
pub fn binomial_u128(n: u64, k: i64) -> u128 {
    if k < 0 || k as u64 > n {
        return 0;
    }
    let k = (k as u64).min(n - k as u64) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(n as u128 - i)
            .expect("binomial overflows u128")
            / (i + 1);
    }
    acc
}

/// Outcome of comparing two extended-precision reals.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`, rounded to `f64` for reporting.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralBoundsReport {
    pub n: u64,
    pub central: String,
    pub lower: Comparison,
    pub upper: Comparison,
}

impl CentralBoundsReport {
    pub fn lower_ok(&self) -> bool {
        self.lower.holds
    }

    pub fn upper_ok(&self) -> bool {
        self.upper.holds
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareBoundReport {
    pub n: u64,
    pub m: u64,
    pub comparison: Comparison,
}

impl CompareBoundReport {
    pub fn ok(&self) -> bool {
        self.comparison.holds
    }
}

/// Thin wrapper so the formulas below read left to right.
struct Ctx {
    cc: Consts,
}

impl Ctx {
    fn new() -> Self {
        Self {
            cc: Consts::new().expect("astro-float constant cache"),
        }
    }

    fn int(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, PRECISION)
    }

    fn big(&mut self, v: &BigUint) -> BigFloat {
        BigFloat::parse(&v.to_string(), Radix::Dec, PRECISION, RM, &mut self.cc)
    }

    fn pi(&mut self) -> BigFloat {
        self.cc.pi(PRECISION, RM)
    }

    fn e(&mut self) -> BigFloat {
        self.cc.e(PRECISION, RM)
    }

    fn pow2(&self, exp: i64) -> BigFloat {
        let two = self.int(2);
        let p = two.powi(exp.unsigned_abs() as usize, PRECISION, RM);
        if exp < 0 {
            p.reciprocal(PRECISION, RM)
        } else {
            p
        }
    }

    /// `sqrt(2 / pi) * 2^n / sqrt(n)`.
    fn central_scale(&mut self, n: u64) -> BigFloat {
        let two = self.int(2);
        let pi = self.pi();
        let s = two.div(&pi, PRECISION, RM).sqrt(PRECISION, RM);
        let root_n = self.int(n).sqrt(PRECISION, RM);
        s.mul(&self.pow2(n as i64), PRECISION, RM)
            .div(&root_n, PRECISION, RM)
    }

    fn approx(&mut self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        x.format(Radix::Dec, RM, &mut self.cc)
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .unwrap_or(f64::NAN)
    }

    fn compare(&mut self, lhs: &BigFloat, rhs: &BigFloat) -> Comparison {
        let margin = rhs.sub(lhs, PRECISION, RM);
        let larger = lhs.abs().max(&rhs.abs());
        let guard = larger.mul(&self.pow2(-(GUARD_BITS as i64)), PRECISION, RM);
        let holds = margin.cmp(&guard).is_some_and(|c| c > 0);
        Comparison {
            lhs: self.approx(lhs),
            rhs: self.approx(rhs),
            margin: self.approx(&margin),
            holds,
        }
    }
}

/// Checks `sqrt(2/pi) 2^n / sqrt(n) (1 - 1/n) <= C(n, floor(n/2)) <= sqrt(2/pi) 2^n / sqrt(n)`.
pub fn check_central_bounds(n: u64) -> Result<CentralBoundsReport, NumericError> {
    if n == 0 {
        return Err(NumericError::ZeroN);
    }
    let mut ctx = Ctx::new();
    let central = binomial(n, (n / 2) as i64);
    let c = ctx.big(&central);
    let upper_side = ctx.central_scale(n);
    let factor = ctx
        .int(1)
        .sub(&ctx.int(1).div(&ctx.int(n), PRECISION, RM), PRECISION, RM);
    let lower_side = upper_side.mul(&factor, PRECISION, RM);
    Ok(CentralBoundsReport {
        n,
        central: central.to_string(),
        lower: ctx.compare(&lower_side, &c),
        upper: ctx.compare(&c, &upper_side),
    })
}

/// Checks `C(n-m, floor((n-m)/2)) <= n/(n-1) * sqrt(n/(n-m)) * 2^-m * C(n, floor(n/2))`.
pub fn check_compare_bound(n: u64, m: u64) -> Result<CompareBoundReport, NumericError> {
    if n < 2 || m >= n {
        return Err(NumericError::CompareDomain { n, m });
    }
    let mut ctx = Ctx::new();
    let lhs = ctx.big(&binomial(n - m, ((n - m) / 2) as i64));
    let central = ctx.big(&binomial(n, (n / 2) as i64));
    let ratio = ctx.int(n).div(&ctx.int(n - 1), PRECISION, RM);
    let root = ctx
        .int(n)
        .div(&ctx.int(n - m), PRECISION, RM)
        .sqrt(PRECISION, RM);
    let rhs = ratio
        .mul(&root, PRECISION, RM)
        .mul(&ctx.pow2(-(m as i64)), PRECISION, RM)
        .mul(&central, PRECISION, RM);
    Ok(CompareBoundReport {
        n,
        m,
        comparison: ctx.compare(&lhs, &rhs),
    })
}

/// `C(n, floor(n/2) + k) / (sqrt(2/pi) e^(-2k^2/n) 2^n / sqrt(n))`.
pub fn deviation_ratio(n: u64, k: i64) -> Result<f64, NumericError> {
    if n == 0 {
        return Err(NumericError::ZeroN);
    }
    let index = (n / 2) as i64 + k;
    if index < 0 || index as u64 > n {
        return Err(NumericError::DeviationDomain { n, index });
    }
    let mut ctx = Ctx::new();
    let num = ctx.big(&binomial(n, index));
    let exponent =
        ctx.int(2 * (k.unsigned_abs()) * k.unsigned_abs())
            .div(&ctx.int(n), PRECISION, RM);
    let decay = exponent.neg().exp(PRECISION, RM, &mut ctx.cc);
    let den = ctx.central_scale(n).mul(&decay, PRECISION, RM);
    let ratio = num.div(&den, PRECISION, RM);
    Ok(ctx.approx(&ratio))
}

/// `f(kappa) = kappa * log2(2e / kappa)`.
pub fn f_kappa(kappa: f64) -> Result<f64, NumericError> {
    if kappa.is_nan() || kappa <= 0.0 {
        return Err(NumericError::NonPositiveKappa(kappa));
    }
    let mut ctx = Ctx::new();
    let k = BigFloat::from_f64(kappa, PRECISION);
    let two_e = ctx.e().mul(&ctx.int(2), PRECISION, RM);
    let v = k.mul(
        &two_e
            .div(&k, PRECISION, RM)
            .log2(PRECISION, RM, &mut ctx.cc),
        PRECISION,
        RM,
    );
    Ok(ctx.approx(&v))
}

/// `f(1/q)` evaluated without first rounding `1/q` to `f64`.
pub fn f_kappa_reciprocal(q: u64) -> Result<f64, NumericError> {
    if q == 0 {
        return Err(NumericError::NonPositiveKappa(f64::INFINITY));
    }
    let mut ctx = Ctx::new();
    let k = ctx.int(1).div(&ctx.int(q), PRECISION, RM);
    let two_e = ctx.e().mul(&ctx.int(2), PRECISION, RM);
    let v = k.mul(
        &two_e
            .div(&k, PRECISION, RM)
            .log2(PRECISION, RM, &mut ctx.cc),
        PRECISION,
        RM,
    );
    Ok(ctx.approx(&v))
}

/// Inclusive integer range `{0..n} ∩ [n/2 - beta sqrt(n), n/2 + beta sqrt(n)]`.
pub fn rank_window(n: u64, beta: f64) -> Result<(u64, u64), NumericError> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(NumericError::NonPositiveBeta(beta));
    }
    let half = n as f64 / 2.0;
    let spread = beta * (n as f64).sqrt();
    let lo = (half - spread).ceil().max(0.0) as u64;
    let hi = ((half + spread).floor().max(0.0) as u64).min(n);
    Ok((lo.min(n), hi))
}
