//! Numerical validation of derived relations: exact and high-precision
//! evaluation of multiple harmonic sums, zeta-value estimates from partial
//! sums with Richardson refinement, and the Euler constant via the
//! Euler-Maclaurin correction.
//!
//! High-precision values use fixed-point arithmetic with a 224-bit binary
//! scale (about 67 significant decimal digits), so summation round-off is
//! negligible against the truncation error of the partial sums.

use std::fmt;
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::ncpoly::Q;
use crate::symbols::{CPoly, ZetaSymbol};
use crate::words::{Alphabet, Word};

/// Binary scale of the fixed-point representation.
pub const FIXED_SHIFT: u32 = 224;

/// Fixed-point number `m / 2^224`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Fixed {
    m: BigInt,
}

impl Fixed {
    pub fn zero() -> Self {
        Fixed { m: BigInt::from(0) }
    }

    pub fn one() -> Self {
        Fixed {
            m: BigInt::from(1) << FIXED_SHIFT,
        }
    }

    pub fn from_u64(v: u64) -> Self {
        Fixed {
            m: BigInt::from(v) << FIXED_SHIFT,
        }
    }

    pub fn from_q(v: &Q) -> Self {
        Fixed {
            m: (v.numer() << FIXED_SHIFT) / v.denom(),
        }
    }

    pub fn add(&self, rhs: &Fixed) -> Fixed {
        Fixed {
            m: &self.m + &rhs.m,
        }
    }

    pub fn sub(&self, rhs: &Fixed) -> Fixed {
        Fixed {
            m: &self.m - &rhs.m,
        }
    }

    pub fn neg(&self) -> Fixed {
        Fixed { m: -&self.m }
    }

    pub fn mul(&self, rhs: &Fixed) -> Fixed {
        Fixed {
            m: (&self.m * &rhs.m) >> FIXED_SHIFT,
        }
    }

    pub fn div(&self, rhs: &Fixed) -> Fixed {
        Fixed {
            m: (&self.m << FIXED_SHIFT) / &rhs.m,
        }
    }

    /// Division by an exact integer.
    pub fn div_int(&self, k: &BigInt) -> Fixed {
        Fixed { m: &self.m / k }
    }

    pub fn recip_int(k: &BigInt) -> Fixed {
        Fixed {
            m: (BigInt::from(1) << FIXED_SHIFT) / k,
        }
    }

    pub fn abs(&self) -> Fixed {
        Fixed { m: self.m.abs() }
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        let int_part = &self.m >> FIXED_SHIFT;
        let frac = &self.m - (&int_part << FIXED_SHIFT);
        int_part.to_f64().unwrap_or(f64::NAN)
            + frac.to_f64().unwrap_or(f64::NAN) / 2f64.powi(FIXED_SHIFT as i32)
    }

    /// Natural logarithm of a positive value via
    /// `ln(m 2^e) = 2 atanh((m-1)/(m+1)) + e ln 2` with `m` in [1, 2).
    pub fn ln(&self) -> Fixed {
        assert!(self.m.is_positive(), "ln of a non-positive value");
        let bits = self.m.magnitude().bits() as i64;
        let e = bits - 1 - FIXED_SHIFT as i64;
        let mantissa = if e >= 0 {
            &self.m >> (e as u32)
        } else {
            &self.m << ((-e) as u32)
        };
        let m = Fixed { m: mantissa };
        let one = Fixed::one();
        let t = m.sub(&one).div(&m.add(&one));
        let atanh = atanh_series(&t);
        let ln2_term = Fixed {
            m: &ln2().m * BigInt::from(e),
        };
        atanh.add(&ln2_term)
    }
}

fn atanh_series(t: &Fixed) -> Fixed {
    let mut acc = Fixed::zero();
    let t2 = t.mul(t);
    let mut pow = t.clone();
    let mut k = 0u32;
    loop {
        let term = pow.div_int(&BigInt::from(2 * k + 1));
        if term.m.magnitude().bits() == 0 {
            break;
        }
        acc = acc.add(&term);
        pow = pow.mul(&t2);
        k += 1;
    }
    Fixed { m: acc.m << 1 }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.15}", self.to_f64())
    }
}

/// ln 2 = 2 atanh(1/3), cached.
fn ln2() -> &'static Fixed {
    static LN2: OnceLock<Fixed> = OnceLock::new();
    LN2.get_or_init(|| atanh_series(&Fixed::recip_int(&BigInt::from(3))))
}

/// A composition (s1,...,sr) of positive integers; convergent iff s1 >= 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Parse(format!("invalid composition {parts:?}")));
        }
        Ok(Composition { parts })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad part {p:?}")))
            })
            .collect::<Result<_>>()?;
        Composition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn is_convergent(&self) -> bool {
        self.parts[0] >= 2
    }

    pub fn to_word(&self) -> Word {
        Word::y_from_indices(&self.parts.iter().map(|&s| s as u8).collect::<Vec<_>>())
    }

    pub fn from_word(w: &Word) -> Self {
        assert_eq!(w.alphabet(), Alphabet::Y);
        Composition {
            parts: w.letters().iter().map(|&k| k as u32).collect(),
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Exact multiple harmonic sum H_s(n) over rationals (small n).
/// One pass maintaining one running value per suffix of the composition;
/// updating level j before level j+1 keeps the H(k-1) values needed on the
/// right-hand side of the recursion.
pub fn harmonic_sum_exact(s: &Composition, n: u64) -> Q {
    let r = s.depth();
    let mut h: Vec<Q> = vec![Q::from_integer(0.into()); r];
    for k in 1..=n {
        for j in 0..r {
            let tail = if j + 1 < r {
                h[j + 1].clone()
            } else {
                Q::from_integer(1.into())
            };
            let denom = BigInt::from(k).pow(s.parts[j]);
            h[j] = &h[j] + tail / Q::from_integer(denom);
        }
    }
    h.into_iter()
        .next()
        .unwrap_or_else(|| Q::from_integer(1.into()))
}

/// High-precision multiple harmonic sum H_s(n).
pub fn harmonic_sum_fixed(s: &Composition, n: u64) -> Fixed {
    harmonic_prefix_fixed(s, &[n])
        .pop()
        .expect("one checkpoint")
}

/// Values of H_s at several checkpoints in one pass (ascending checkpoints).
fn harmonic_prefix_fixed(s: &Composition, checkpoints: &[u64]) -> Vec<Fixed> {
    let r = s.depth();
    let mut h: Vec<Fixed> = vec![Fixed::zero(); r];
    let mut out = Vec::with_capacity(checkpoints.len());
    let max_n = *checkpoints.iter().max().unwrap_or(&0);
    let mut next = 0usize;
    while next < checkpoints.len() && checkpoints[next] == 0 {
        out.push(Fixed::zero());
        next += 1;
    }
    for k in 1..=max_n {
        let kb = BigInt::from(k);
        for j in 0..r {
            let tail = if j + 1 < r {
                h[j + 1].clone()
            } else {
                Fixed::one()
            };
            let denom = kb.pow(s.parts[j]);
            h[j] = h[j].add(&tail.div_int(&denom));
        }
        while next < checkpoints.len() && checkpoints[next] == k {
            out.push(h[0].clone());
            next += 1;
        }
    }
    out
}

/// A zeta-value estimate with its error bound.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: Fixed,
    pub err_est: f64,
    pub n: u64,
    pub refined: bool,
}

impl Estimate {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Partial-sum estimate of a convergent multiple zeta value.  With
/// `refine`, Richardson extrapolation `2 H(2n) - H(n)` removes the leading
/// `1/n` error term.  The reported error bound is of order
/// `(1 + log n)^depth / n`.
pub fn mzv_estimate(s: &Composition, n: u64, refine: bool) -> Result<Estimate> {
    if !s.is_convergent() {
        return Err(Error::Divergent(s.to_string()));
    }
    if n < 2 {
        return Err(Error::Parse("estimates need n >= 2".into()));
    }
    let depth = s.depth() as i32;
    let log_n = (n as f64).ln();
    if refine {
        let values = harmonic_prefix_fixed(s, &[n, 2 * n]);
        let value = values[1].add(&values[1]).sub(&values[0]);
        let err_est = 2f64.ln() * (1.0 + log_n).powi(depth - 1) / n as f64
            + (1.0 + log_n).powi(depth) / (n as f64 * n as f64);
        Ok(Estimate {
            value,
            err_est,
            n,
            refined: true,
        })
    } else {
        let value = harmonic_sum_fixed(s, n);
        let err_est = (1.0 + log_n).powi(depth) / n as f64;
        Ok(Estimate {
            value,
            err_est,
            n,
            refined: false,
        })
    }
}

/// Euler's constant from `H_1(n) - log n - 1/(2n) + 1/(12 n^2)`;
/// error O(n^{-4}).
pub fn euler_gamma_estimate(n: u64) -> Fixed {
    let h1 = harmonic_sum_fixed(&Composition::new(vec![1]).expect("valid"), n);
    let ln_n = Fixed::from_u64(n).ln();
    let half_inv = Fixed::recip_int(&BigInt::from(2 * n));
    let twelfth = Fixed::recip_int(&(BigInt::from(12) * BigInt::from(n) * BigInt::from(n)));
    h1.sub(&ln_n).sub(&half_inv).add(&twelfth)
}

#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub residual: f64,
    pub pass: bool,
}

/// Evaluate a symbol polynomial numerically through the resolver and test
/// whether it vanishes within the tolerance.
pub fn verify_equation(
    eq: &CPoly,
    resolve: &mut dyn FnMut(&ZetaSymbol) -> Result<Fixed>,
    tol: f64,
) -> Result<VerifyOutcome> {
    let mut acc = Fixed::zero();
    for (mono, c) in eq.terms() {
        let mut term = Fixed::from_q(c);
        for (sym, e) in mono.factors() {
            let v = resolve(sym)?;
            for _ in 0..*e {
                term = term.mul(&v);
            }
        }
        acc = acc.add(&term);
    }
    let residual = acc.to_f64().abs();
    Ok(VerifyOutcome {
        residual,
        pass: residual < tol,
    })
}
