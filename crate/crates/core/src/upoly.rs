//! Dense univariate polynomials over the rationals, Sturm chains, exact real
//! root counting, and root isolation by bisection.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::mpoly::MPoly;
use crate::scalar::{format_rational, sign, Rational};
use crate::{Error, Result};

/// Default width of isolating intervals: 2^-32.
pub fn default_isolation_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(1u64 << 32))
}

/// Coefficients in ascending degree order; no trailing zeros; the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

/// Where to count distinct real roots.
#[derive(Clone, Debug)]
pub enum RootInterval {
    FullLine,
    /// Closed interval [a, b] with a <= b; endpoint roots count.
    Closed(Rational, Rational),
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// Monic product of (x - r_i); the construction-side oracle for root
    /// counting tests.
    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut p = Self::constant(Rational::one());
        for r in roots {
            p = &p * &Self::new(vec![-r.clone(), Rational::one()]);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
            .collect();
        Self::new(coeffs)
    }

    /// Euclidean division: (quotient, remainder). `rhs` must be nonzero.
    pub fn divmod(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let d = rhs.degree().unwrap();
        let lead = rhs.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(d)];
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let f = rem.leading_coeff().unwrap() / &lead;
            let shift = rd - d;
            for i in 0..=d {
                let v = &rem.coeffs[shift + i] - &(&f * &rhs.coeffs[i]);
                rem.coeffs[shift + i] = v;
            }
            while rem.coeffs.last().is_some_and(Rational::is_zero) {
                rem.coeffs.pop();
            }
            quot[shift] = f;
        }
        (Self::new(quot), rem)
    }

    /// Monic greatest common divisor (1 for coprime inputs).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn monic(self) -> Self {
        match self.leading_coeff() {
            None => self,
            Some(l) => {
                let l = l.clone();
                Self::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
        }
    }

    /// Divides by the positive magnitude of the leading coefficient. Positive
    /// scaling preserves the sign data Sturm chains depend on.
    fn normalized_positive(self) -> Self {
        match self.leading_coeff() {
            None => self,
            Some(l) => {
                let s = l.abs();
                Self::new(self.coeffs.iter().map(|c| c / &s).collect())
            }
        }
    }

    /// self / gcd(self, self'): same distinct roots, all simple.
    pub fn square_free_part(&self) -> Self {
        if self.is_zero() || self.degree() == Some(0) {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        let (q, r) = self.divmod(&g);
        debug_assert!(r.is_zero());
        q
    }

    /// The Sturm chain of the square-free part.
    fn sturm_chain(&self) -> Vec<Self> {
        let p = self.square_free_part();
        let mut chain = vec![p.clone()];
        let dp = p.derivative();
        if dp.is_zero() {
            return chain;
        }
        chain.push(dp.normalized_positive());
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].divmod(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push((-&r).normalized_positive());
        }
        chain
    }

    /// Number of DISTINCT real roots in the interval, by Sturm's theorem on
    /// the square-free part. Errors with ZeroPolynomial on the zero input.
    pub fn sturm_real_root_count(&self, interval: RootInterval) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(0);
        }
        let chain = self.sturm_chain();
        match interval {
            RootInterval::FullLine => {
                Ok(variations_at_neg_inf(&chain) - variations_at_pos_inf(&chain))
            }
            RootInterval::Closed(a, b) => {
                if a > b {
                    return Err(Error::BadParams(format!(
                        "interval endpoints out of order: [{}, {}]",
                        format_rational(&a),
                        format_rational(&b)
                    )));
                }
                let sq = &chain[0];
                if a == b {
                    return Ok(usize::from(sq.eval(&a).is_zero()));
                }
                // With zeros dropped from the sign sequence, V(a) - V(b)
                // counts roots in the half-open (a, b]; a root at the left
                // endpoint is added back explicitly.
                let count = variations_at(&chain, &a) - variations_at(&chain, &b);
                Ok(count + usize::from(sq.eval(&a).is_zero()))
            }
        }
    }

    /// An interval [a, b] with b - a <= width containing exactly one distinct
    /// real root of self. Errors with NoRealRoot when there is none.
    pub fn isolate_root(&self, width: &Rational) -> Result<(Rational, Rational)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let total = self.sturm_real_root_count(RootInterval::FullLine)?;
        if total == 0 {
            return Err(Error::NoRealRoot);
        }
        let sq = self.square_free_part();
        let bound = self.root_bound();
        let mut lo = -bound.clone();
        let mut hi = bound;
        let mut count = total;
        let two = Rational::from_integer(BigInt::from(2));
        loop {
            if count == 1 && (&hi - &lo) <= *width {
                return Ok((lo, hi));
            }
            let mid = (&lo + &hi) / &two;
            if sq.eval(&mid).is_zero() {
                return Ok((mid.clone(), mid));
            }
            // mid is not a root, so [lo, mid] and [mid, hi] partition the
            // roots of [lo, hi] cleanly
            let left = self.sturm_real_root_count(RootInterval::Closed(lo.clone(), mid.clone()))?;
            if left >= 1 {
                hi = mid;
                count = left;
            } else {
                lo = mid;
                count -= left;
            }
        }
    }

    /// Cauchy bound: every real root lies in [-B, B].
    pub fn root_bound(&self) -> Rational {
        let lead = match self.leading_coeff() {
            Some(l) => l,
            None => return Rational::one(),
        };
        let mut max = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let q = (c / lead).abs();
            if q > max {
                max = q;
            }
        }
        max + Rational::one()
    }

    /// Reads a univariate polynomial out of an MPoly in the given parameter.
    pub fn from_mpoly(p: &MPoly, param: &str) -> Result<Self> {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (m, c) in p.terms_desc() {
            let exps = m.exponents();
            if exps.keys().any(|k| k != param) {
                return Err(Error::BadParams(format!(
                    "polynomial is not univariate in `{param}`: {p}"
                )));
            }
            let e = exps.get(param).copied().unwrap_or(0) as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Rational::zero());
            }
            coeffs[e] = c.clone();
        }
        Ok(Self::new(coeffs))
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(chain: &[UPoly], x: &Rational) -> usize {
    variations(chain.iter().map(|p| sign(&p.eval(x))))
}

fn variations_at_pos_inf(chain: &[UPoly]) -> usize {
    variations(chain.iter().map(|p| match p.leading_coeff() {
        None => 0,
        Some(l) => sign(l),
    }))
}

fn variations_at_neg_inf(chain: &[UPoly]) -> usize {
    variations(chain.iter().map(|p| match (p.degree(), p.leading_coeff()) {
        (Some(d), Some(l)) => {
            if d % 2 == 0 {
                sign(l)
            } else {
                -sign(l)
            }
        }
        _ => 0,
    }))
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UPoly::new(out)
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        self + &(-rhs)
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{}", format_rational(&abs))?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{}*", format_rational(&abs))?;
                    }
                    if e == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
