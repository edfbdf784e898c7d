use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::GenerateError;

/// A real number known to lie in `[lo, hi]`; exact when `lo == hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Real {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Real {
    pub fn exact(q: BigRational) -> Self {
        Real { lo: q.clone(), hi: q }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::exact(BigRational::new(n.into(), d.into()))
    }

    /// Enclosure of `sqrt(n)` of width `2^-bits`.
    pub fn sqrt(n: u64, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let s = (BigInt::from(n) * &scale * &scale).sqrt();
        let lo = BigRational::new(s.clone(), scale.clone());
        if &s * &s == BigInt::from(n) * &scale * &scale {
            return Real::exact(lo);
        }
        Real {
            lo,
            hi: BigRational::new(s + 1, scale),
        }
    }

    /// `sqrt(2) - 1`.
    pub fn silver(bits: u32) -> Self {
        Self::sqrt(2, bits).add(&BigRational::from_integer((-1).into()))
    }

    /// `(sqrt(5) - 1) / 2`.
    pub fn golden(bits: u32) -> Self {
        Self::sqrt(5, bits)
            .add(&BigRational::from_integer((-1).into()))
            .scale(&BigRational::new(1.into(), 2.into()))
    }

    pub fn add(&self, q: &BigRational) -> Self {
        Real {
            lo: &self.lo + q,
            hi: &self.hi + q,
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let (a, b) = (&self.lo * q, &self.hi * q);
        if a <= b {
            Real { lo: a, hi: b }
        } else {
            Real { lo: b, hi: a }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        let m = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        ratio_to_f64(&m)
    }
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    // Enough precision for reporting.
    let scale = BigInt::one() << 60u32;
    let n = (q * BigRational::from_integer(scale.clone())).floor().to_integer();
    let n: f64 = n.to_string().parse().unwrap_or(f64::NAN);
    n / 2f64.powi(60)
}

/// A phase of the form `constant + alpha_coeff * alpha`, so that integer
/// crossings such as `x = 1 - alpha` stay exact even for irrational `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase {
    pub constant: BigRational,
    pub alpha_coeff: BigRational,
}

impl Phase {
    pub fn zero() -> Self {
        Phase {
            constant: BigRational::zero(),
            alpha_coeff: BigRational::zero(),
        }
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Phase {
            constant: BigRational::new(n.into(), d.into()),
            alpha_coeff: BigRational::zero(),
        }
    }

    /// `c0 + c1 * alpha` with integer coefficients.
    pub fn affine(c0: i64, c1: i64) -> Self {
        Phase {
            constant: BigRational::from_integer(c0.into()),
            alpha_coeff: BigRational::from_integer(c1.into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SturmianConvention {
    /// Floors: `w_n = floor((n+1)a + x) - floor(n a + x)`.
    Lower,
    /// Ceilings.
    Upper,
}

fn rounded(alpha: &Real, phase: &Phase, n: i64, conv: SturmianConvention) -> Result<BigInt, GenerateError> {
    let c = BigRational::from_integer(n.into()) + &phase.alpha_coeff;
    let v = if c.is_zero() {
        Real::exact(BigRational::zero())
    } else {
        alpha.scale(&c)
    }
    .add(&phase.constant);
    let f = |q: &BigRational| match conv {
        SturmianConvention::Lower => q.floor().to_integer(),
        SturmianConvention::Upper => q.ceil().to_integer(),
    };
    let (a, b) = (f(&v.lo), f(&v.hi));
    if a != b {
        return Err(GenerateError::PrecisionInsufficient(n));
    }
    Ok(a)
}

/// Mechanical word of slope `alpha` and phase `x` on `start..=end`.
pub fn sturmian(
    alpha: &Real,
    phase: &Phase,
    start: i64,
    end: i64,
    conv: SturmianConvention,
) -> Result<Vec<u8>, GenerateError> {
    if end < start {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity((end - start + 1) as usize);
    let mut prev = rounded(alpha, phase, start, conv)?;
    for n in start..=end {
        let next = rounded(alpha, phase, n + 1, conv)?;
        let d = &next - &prev;
        if d.is_negative() || d > BigInt::one() {
            return Err(GenerateError::IllFormedDescriptor("slope must lie in [0, 1]".into()));
        }
        out.push(u8::from(d.is_one()));
        prev = next;
    }
    Ok(out)
}

fn tri(k: i64) -> i64 {
    k * (k + 1) / 2
}

/// Spreads a one-sided word symmetrically: position `±p` receives `x_k`
/// where `k(k+1)/2 <= |p| < (k+1)(k+2)/2`, so `x_k` fills a block of `k+1`.
pub fn separation_map(prefix: &[u8], start: i64, end: i64) -> Result<Vec<u8>, GenerateError> {
    let mut out = Vec::new();
    for p in start..=end {
        let a = p.abs();
        let mut k = (((8 * a + 1) as f64).sqrt() as i64 - 1) / 2;
        while tri(k) > a {
            k -= 1;
        }
        while tri(k + 1) <= a {
            k += 1;
        }
        let sym = prefix.get(k as usize).ok_or(GenerateError::RangeExceedsPrefix {
            pos: p,
            have: prefix.len(),
        })?;
        out.push(*sym);
    }
    Ok(out)
}
