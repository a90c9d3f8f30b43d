//! Exact arithmetic for numbers far beyond machine range.
//!
//! The slow-rate schedule recursion produces sample sizes like
//! `2^(2^256 − 1)` by its sixth step: too large for any fixed-width or
//! arbitrary-precision integer (the plain binary expansion would need
//! `2^256` bits), yet the invariant checks on the schedule must hold
//! *exactly*.  Every quantity the recursion touches is a short **signed sum
//! of powers of two** whose exponents are again such sums — hereditary
//! base-2 notation with signed digits.  [`Mag`] stores exactly that:
//!
//! ```text
//! value = Σ ±2^(eᵢ)      with the eᵢ themselves Mags (integer-valued),
//!                        pairwise distinct, kept in decreasing order
//! ```
//!
//! Addition merges term lists and resolves collisions by binary carries, so
//! a value's representation may differ across histories (`2^1 − 2^0` and
//! `2^0` both encode 1); comparisons therefore always go through
//! subtraction, whose collision handling cancels the ambiguity.  The sign
//! of a nonempty term list is the sign of its leading term, because the
//! remaining terms have strictly smaller exponents and a finite sum of
//! distinct powers of two below `2^e` is strictly less than `2^e`.
//!
//! [`MagRatio`] layers exact nonnegative-denominator fractions on top, with
//! cross-multiplied comparisons — the form the schedule's probabilities and
//! rate values take.  Neither type rounds, ever; operations whose exact
//! result is not representable (general division, irrational boundaries)
//! are simply not offered, and callers surface an explicit error instead.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// One signed power of two: `−2^exp` when `neg`, else `+2^exp`.
#[derive(Clone, Debug)]
struct Term {
    neg: bool,
    exp: Mag,
}

/// An exact signed number: a short signed sum of powers of two with
/// hereditary exponents.  The empty sum is zero.
#[derive(Clone, Debug, Default)]
pub struct Mag {
    /// Terms in strictly decreasing exponent order, exponents distinct and
    /// integer-valued.
    terms: Vec<Term>,
}

impl Mag {
    /// Zero (the empty sum).
    #[must_use]
    pub fn zero() -> Mag {
        Mag { terms: Vec::new() }
    }

    /// One, i.e. `2^0`.
    #[must_use]
    pub fn one() -> Mag {
        Mag::pow2(Mag::zero())
    }

    /// `2^exp` for an integer-valued exponent (which may be negative or
    /// itself astronomically large).
    #[must_use]
    pub fn pow2(exp: Mag) -> Mag {
        debug_assert!(exp.is_integer(), "pow2 exponent must be an integer");
        Mag { terms: vec![Term { neg: false, exp }] }
    }

    /// Exact conversion from a machine integer.
    #[must_use]
    pub fn from_u128(v: u128) -> Mag {
        let mut terms = Vec::new();
        for bit in (0..128).rev() {
            if (v >> bit) & 1 == 1 {
                terms.push(Term { neg: false, exp: Mag::from_u128_small(bit) });
            }
        }
        Mag { terms }
    }

    /// Exact conversion from a signed machine integer.
    #[must_use]
    pub fn from_i64(v: i64) -> Mag {
        if v >= 0 {
            Mag::from_u128(v as u128)
        } else {
            Mag::from_u128(v.unsigned_abs() as u128).neg()
        }
    }

    /// Exact conversion from a finite `f64` (every finite float is a dyadic
    /// rational `±m·2^e`).
    pub fn from_f64_exact(v: f64) -> Result<Mag> {
        if !v.is_finite() {
            return Err(Error::Config(format!("cannot represent {v} exactly")));
        }
        if v == 0.0 {
            return Ok(Mag::zero());
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        // Normal numbers carry an implicit leading bit; subnormals do not.
        let (mantissa, exp2) = if raw_exp == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let mag = Mag::from_u128(u128::from(mantissa)).mul(&Mag::pow2(Mag::from_i64(exp2)));
        Ok(if neg { mag.neg() } else { mag })
    }

    /// Small-integer constructor used for bit positions.
    fn from_u128_small(v: u32) -> Mag {
        Mag::from_u128(u128::from(v))
    }

    /// Whether the value is exactly zero.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sign of the value: −1, 0, or +1.
    #[must_use]
    pub fn sign(&self) -> i8 {
        match self.terms.first() {
            None => 0,
            Some(t) if t.neg => -1,
            Some(_) => 1,
        }
    }

    /// Negation.
    #[must_use]
    pub fn neg(&self) -> Mag {
        Mag {
            terms: self
                .terms
                .iter()
                .map(|t| Term { neg: !t.neg, exp: t.exp.clone() })
                .collect(),
        }
    }

    /// Exact halving: one is subtracted from every term exponent
    /// (`±2^e → ±2^{e−1}`), which preserves the strictly-decreasing
    /// exponent invariant.  Always exact in this representation.
    #[must_use]
    pub fn halve(&self) -> Mag {
        let one = Mag::one();
        Mag {
            terms: self
                .terms
                .iter()
                .map(|t| Term { neg: t.neg, exp: t.exp.sub(&one) })
                .collect(),
        }
    }

    /// Exact sum.
    #[must_use]
    pub fn add(&self, other: &Mag) -> Mag {
        let mut work: Vec<(i64, Mag)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        for t in self.terms.iter().chain(&other.terms) {
            work.push((if t.neg { -1 } else { 1 }, t.exp.clone()));
        }
        normalize(work)
    }

    /// Exact difference.
    #[must_use]
    pub fn sub(&self, other: &Mag) -> Mag {
        self.add(&other.neg())
    }

    /// Exact product (distributes term-by-term; exponents add).
    #[must_use]
    pub fn mul(&self, other: &Mag) -> Mag {
        let mut work: Vec<(i64, Mag)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let sign = if a.neg == b.neg { 1 } else { -1 };
                work.push((sign, a.exp.add(&b.exp)));
            }
        }
        normalize(work)
    }

    /// Value comparison (via subtraction, so differing representations of
    /// equal values compare equal).
    #[must_use]
    pub fn cmp_value(&self, other: &Mag) -> Ordering {
        match self.sub(other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Whether the value is an integer.  Canonical term lists make this a
    /// syntactic check: a nonempty fractional part is a nonzero number in
    /// `(−1, 1)`.
    #[must_use]
    pub fn is_integer(&self) -> bool {
        self.terms.iter().all(|t| t.exp.sign() >= 0)
    }

    /// Split into integer-exponent and fractional-exponent parts.
    fn split_fractional(&self) -> (Mag, Mag) {
        let (int_terms, frac_terms): (Vec<Term>, Vec<Term>) =
            self.terms.iter().cloned().partition(|t| t.exp.sign() >= 0);
        (Mag { terms: int_terms }, Mag { terms: frac_terms })
    }

    /// Largest integer ≤ the value.
    #[must_use]
    pub fn floor(&self) -> Mag {
        let (int_part, frac) = self.split_fractional();
        if frac.sign() < 0 {
            int_part.sub(&Mag::one())
        } else {
            int_part
        }
    }

    /// Smallest integer ≥ the value.
    #[must_use]
    pub fn ceil(&self) -> Mag {
        let (int_part, frac) = self.split_fractional();
        if frac.sign() > 0 {
            int_part.add(&Mag::one())
        } else {
            int_part
        }
    }

    /// If the value is exactly `+2^e`, the exponent `e`.
    #[must_use]
    pub fn single_pow2(&self) -> Option<&Mag> {
        match self.terms.as_slice() {
            [t] if !t.neg => Some(&t.exp),
            _ => None,
        }
    }

    /// Exact conversion to `u128` when the value is a nonnegative integer
    /// in range.
    #[must_use]
    pub fn to_u128(&self) -> Option<u128> {
        if self.sign() < 0 {
            return None;
        }
        let mut acc: u128 = 0;
        for t in &self.terms {
            let e = t.exp.to_u128()?;
            if e > 127 {
                return None;
            }
            let v = 1u128 << e;
            acc = if t.neg { acc.checked_sub(v)? } else { acc.checked_add(v)? };
        }
        Some(acc)
    }

    /// Nearest `f64` (saturating to `±inf`/`0` far outside machine range;
    /// display only — never used in exact decisions).
    #[must_use]
    pub fn to_f64(&self) -> f64 {
        let mut acc = 0.0f64;
        for t in &self.terms {
            let e = t.exp.to_f64();
            let v = if e > 1100.0 {
                f64::INFINITY
            } else if e < -1100.0 {
                0.0
            } else {
                e.exp2()
            };
            acc += if t.neg { -v } else { v };
        }
        acc
    }
}

/// Canonicalize a list of `(coefficient, exponent)` pairs into a `Mag`:
/// sort by exponent, merge equal exponents, and carry coefficients of
/// magnitude > 1 into higher bits until every coefficient is ±1.
fn normalize(mut work: Vec<(i64, Mag)>) -> Mag {
    loop {
        work.retain(|(c, _)| *c != 0);
        work.sort_by(|a, b| b.1.cmp_value(&a.1));
        let mut merged: Vec<(i64, Mag)> = Vec::with_capacity(work.len());
        for (c, e) in work {
            match merged.last_mut() {
                Some((mc, me)) if me.cmp_value(&e) == Ordering::Equal => *mc += c,
                _ => merged.push((c, e)),
            }
        }
        merged.retain(|(c, _)| *c != 0);
        if merged.iter().all(|(c, _)| c.abs() == 1) {
            return Mag {
                terms: merged
                    .into_iter()
                    .map(|(c, exp)| Term { neg: c < 0, exp })
                    .collect(),
            };
        }
        // Rewrite c·2^e as Σ ±2^(e+bit) over the set bits of |c|; the total
        // coefficient mass strictly shrinks, so this terminates.
        let mut next: Vec<(i64, Mag)> = Vec::with_capacity(merged.len() + 4);
        for (c, e) in merged {
            if c.abs() == 1 {
                next.push((c, e));
            } else {
                let sign = c.signum();
                let mut m = c.unsigned_abs();
                let mut bit = 0u32;
                while m != 0 {
                    if m & 1 == 1 {
                        next.push((sign, e.add(&Mag::from_u128_small(bit))));
                    }
                    m >>= 1;
                    bit += 1;
                }
            }
        }
        work = next;
    }
}

impl PartialEq for Mag {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for Mag {}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.to_u128() {
            return write!(f, "{v}");
        }
        if self.sign() < 0 {
            if let Some(v) = self.neg().to_u128() {
                return write!(f, "-{v}");
            }
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i == 0 {
                if t.neg {
                    write!(f, "-")?;
                }
            } else {
                f.write_str(if t.neg { " - " } else { " + " })?;
            }
            match t.exp.to_u128() {
                Some(0) => write!(f, "1")?,
                Some(e) => write!(f, "2^{e}")?,
                None => write!(f, "2^({})", t.exp)?,
            }
        }
        Ok(())
    }
}

/// An exact fraction of [`Mag`]s with positive denominator.  Never reduced
/// and never rounded; comparisons cross-multiply.
#[derive(Clone, Debug)]
pub struct MagRatio {
    num: Mag,
    den: Mag,
}

impl MagRatio {
    /// `num/den`; the denominator must be nonzero (its sign is folded into
    /// the numerator).
    pub fn new(num: Mag, den: Mag) -> Result<MagRatio> {
        match den.sign() {
            0 => Err(Error::Config("ratio denominator is zero".into())),
            -1 => Ok(MagRatio { num: num.neg(), den: den.neg() }),
            _ => Ok(MagRatio { num, den }),
        }
    }

    /// An integer as a ratio.
    #[must_use]
    pub fn from_mag(v: Mag) -> MagRatio {
        MagRatio { num: v, den: Mag::one() }
    }

    /// Machine-integer convenience.
    #[must_use]
    pub fn from_u128(v: u128) -> MagRatio {
        MagRatio::from_mag(Mag::from_u128(v))
    }

    /// Zero.
    #[must_use]
    pub fn zero() -> MagRatio {
        MagRatio::from_u128(0)
    }

    /// One.
    #[must_use]
    pub fn one() -> MagRatio {
        MagRatio::from_u128(1)
    }

    /// Numerator (sign-carrying).
    #[must_use]
    pub fn num(&self) -> &Mag {
        &self.num
    }

    /// Denominator (always positive).
    #[must_use]
    pub fn den(&self) -> &Mag {
        &self.den
    }

    /// Sign of the value.
    #[must_use]
    pub fn sign(&self) -> i8 {
        self.num.sign()
    }

    /// Exact sum.
    #[must_use]
    pub fn add(&self, other: &MagRatio) -> MagRatio {
        MagRatio {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    /// Exact difference.
    #[must_use]
    pub fn sub(&self, other: &MagRatio) -> MagRatio {
        MagRatio {
            num: self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    /// Exact product.
    #[must_use]
    pub fn mul(&self, other: &MagRatio) -> MagRatio {
        MagRatio { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    /// Exact product with an integer-valued [`Mag`].
    #[must_use]
    pub fn mul_mag(&self, v: &Mag) -> MagRatio {
        MagRatio { num: self.num.mul(v), den: self.den.clone() }
    }

    /// Exact reciprocal; the value must be nonzero.
    pub fn recip(&self) -> Result<MagRatio> {
        MagRatio::new(self.den.clone(), self.num.clone())
    }

    /// Value comparison by cross-multiplication.
    #[must_use]
    pub fn cmp_value(&self, other: &MagRatio) -> Ordering {
        self.num.mul(&other.den).cmp_value(&other.num.mul(&self.den))
    }

    /// The value as an exact integer [`Mag`], when it is one and the
    /// division is representable (power-of-two denominator, or both sides
    /// in machine range).  `Ok(None)` means "provably not an integer";
    /// an error means the question itself exceeds exact arithmetic.
    pub fn as_integer(&self) -> Result<Option<Mag>> {
        if let Some(exp) = self.den.single_pow2() {
            let shifted = self.num.mul(&Mag::pow2(exp.neg()));
            return Ok(if shifted.is_integer() { Some(shifted) } else { None });
        }
        let (Some(n), Some(d)) = (self.num.to_u128(), self.den.to_u128()) else {
            return Err(Error::Construction(
                "exact integrality test needs a power-of-two denominator or machine range".into(),
            ));
        };
        Ok(if n % d == 0 { Some(Mag::from_u128(n / d)) } else { None })
    }

    /// Exact ceiling, under the same representability conditions as
    /// [`MagRatio::as_integer`].
    pub fn ceil(&self) -> Result<Mag> {
        if let Some(exp) = self.den.single_pow2() {
            return Ok(self.num.mul(&Mag::pow2(exp.neg())).ceil());
        }
        let (Some(n), Some(d)) = (self.num.to_u128(), self.den.to_u128()) else {
            return Err(Error::Construction(
                "exact ceiling needs a power-of-two denominator or machine range".into(),
            ));
        };
        Ok(Mag::from_u128(n.div_ceil(d)))
    }

    /// Nearest `f64`, for display.
    #[must_use]
    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64();
        let d = self.den.to_f64();
        if d.is_infinite() && n.is_infinite() {
            // Both overflowed: recover the ratio from a shifted view when
            // the denominator is a pure power of two.
            if let Some(exp) = self.den.single_pow2() {
                return self.num.mul(&Mag::pow2(exp.neg())).to_f64();
            }
            return f64::NAN;
        }
        n / d
    }
}

impl PartialEq for MagRatio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for MagRatio {}

impl PartialOrd for MagRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MagRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Display for MagRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Mag::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
