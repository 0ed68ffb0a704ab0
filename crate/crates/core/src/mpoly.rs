//! Sparse multivariate polynomials over the rationals, with named parameters
//! and graded-lex term ordering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{format_rational, ExactDiv, Rational};
use crate::{Error, Result};

/// A power product of named parameters. No zero exponents are stored; the
/// empty map is the monomial 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: BTreeMap<String, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(name: &str) -> Self {
        let mut exps = BTreeMap::new();
        exps.insert(name.to_string(), 1);
        Self { exps }
    }

    pub fn from_exponents(exps: BTreeMap<String, u32>) -> Self {
        let exps = exps.into_iter().filter(|(_, e)| *e > 0).collect();
        Self { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn exponents(&self) -> &BTreeMap<String, u32> {
        &self.exps
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (name, e) in &other.exps {
            *exps.entry(name.clone()).or_insert(0) += e;
        }
        Self { exps }
    }

    /// Componentwise quotient, or None when some exponent would go negative.
    pub fn try_div(&self, other: &Self) -> Option<Self> {
        let mut exps = self.exps.clone();
        for (name, e) in &other.exps {
            let have = exps.get_mut(name)?;
            if *have < *e {
                return None;
            }
            *have -= e;
            if *have == 0 {
                exps.remove(name);
            }
        }
        Some(Self { exps })
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: higher total degree is greater; ties broken by
    /// the alphabetically first parameter with differing exponent, higher
    /// exponent winning.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.exps.iter();
        let mut b = other.exps.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                // the side that still has variables is smaller on the first
                // shared prefix... compare by name: missing = exponent 0
                (Some((na, ea)), Some((nb, eb))) => match na.cmp(nb) {
                    // earlier name present only on one side: that side has a
                    // positive exponent where the other has zero
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    },
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (name, e) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse multivariate polynomial: a map from monomials to nonzero rational
/// coefficients. The zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Self { terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), Rational::one());
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Some(c) when the polynomial is the constant c (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            out.extend(m.exponents().keys().cloned());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Exact full evaluation; every parameter must be assigned.
    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (name, e) in m.exponents() {
                let x = point
                    .get(name)
                    .ok_or_else(|| Error::MissingParameter(name.clone()))?;
                for _ in 0..*e {
                    v *= x;
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Substitutes a subset of parameters, leaving the rest symbolic.
    pub fn substitute(&self, assignments: &BTreeMap<String, Rational>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = BTreeMap::new();
            for (name, e) in m.exponents() {
                match assignments.get(name) {
                    Some(x) => {
                        for _ in 0..*e {
                            coeff *= x;
                        }
                    }
                    None => {
                        rest.insert(name.clone(), *e);
                    }
                }
            }
            out.add_term(Monomial::from_exponents(rest), coeff);
        }
        out
    }

    /// Rewrites every parameter name. Distinct names must stay distinct.
    pub fn rename_params(&self, f: impl Fn(&str) -> String) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let exps = m
                .exponents()
                .iter()
                .map(|(name, e)| (f(name), *e))
                .collect::<BTreeMap<_, _>>();
            out.add_term(Monomial::from_exponents(exps), c.clone());
        }
        out
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                $trait::$method(&self, &rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl Zero for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
}

impl One for MPoly {
    fn one() -> Self {
        MPoly::one()
    }
    fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}

impl ExactDiv for MPoly {
    /// Exact division in Q[params], driven by graded-lex leading terms. The
    /// divisor must divide exactly; fraction-free elimination guarantees that
    /// where this is used.
    fn exact_div(&self, rhs: &Self) -> Self {
        let (dm, dc) = rhs.leading_term().expect("exact division by zero polynomial");
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm
                .try_div(&dm)
                .expect("inexact polynomial division in fraction-free elimination");
            let qc = rc / &dc;
            let term = MPoly::from_terms([(qm.clone(), qc.clone())]);
            rem = &rem - &(&term * rhs);
            quot.add_term(qm, qc);
        }
        quot
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms_desc() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
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
            if m.is_one() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

/// One term of the serialized polynomial record.
#[derive(Serialize, Deserialize)]
struct TermRecord {
    coeff: String,
    exponents: BTreeMap<String, u32>,
}

impl Serialize for MPoly {
    /// A list of {coeff, exponents} records in descending graded-lex order.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms_desc()
            .map(|(m, c)| TermRecord {
                coeff: format_rational(c),
                exponents: m.exponents().clone(),
            })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        let mut p = MPoly::zero();
        for r in records {
            let c = crate::scalar::parse_rational(&r.coeff).map_err(serde::de::Error::custom)?;
            p.add_term(Monomial::from_exponents(r.exponents), c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn p_t() -> MPoly {
        MPoly::var("t")
    }

    #[test]
    fn monomial_product() {
        // (t) mul (t) = t^2
        let t2 = &p_t() * &p_t();
        assert_eq!(t2.total_degree(), 2);
        assert_eq!(format!("{t2}"), "t^2");
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = &(&MPoly::constant(rat(1)) + &p_t()) * &p_t();
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn difference_of_squares() {
        let one = MPoly::one();
        let lhs = &(&one + &p_t()) * &(&one - &p_t());
        let rhs = &one - &(&p_t() * &p_t());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_examples() {
        let mut point = BTreeMap::new();
        point.insert("t".to_string(), rat(2));
        let p = &MPoly::one() + &(&p_t() * &p_t());
        assert_eq!(p.eval(&point).unwrap(), rat(5));
        assert_eq!(MPoly::zero().eval(&point).unwrap(), rat(0));

        // eval(-1 - t^2, t=3) = -10
        let q = -&p;
        let mut at3 = BTreeMap::new();
        at3.insert("t".to_string(), rat(3));
        assert_eq!(q.eval(&at3).unwrap(), rat(-10));

        let missing = p.eval(&BTreeMap::new());
        assert_eq!(missing, Err(Error::MissingParameter("t".to_string())));
    }

    #[test]
    fn graded_lex_display_order() {
        // t1^2 > t1*t2 > t2^2 > t1 > constant
        let t1 = MPoly::var("t1");
        let t2 = MPoly::var("t2");
        let p = &(&(&t1 * &t1) + &(&t1 * &t2)) + &(&(&t2 * &t2) + &(&t1 + &MPoly::constant(ratio(-1, 2))));
        assert_eq!(format!("{p}"), "t1^2 + t1*t2 + t2^2 + t1 - 1/2");
    }

    #[test]
    fn exact_division_inverts_multiplication() {
        let a = &(&MPoly::var("x") + &MPoly::constant(rat(3))) * &MPoly::var("y");
        let b = &(&MPoly::var("y") - &MPoly::var("x")) * &(&MPoly::var("x") + &MPoly::one());
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), b);
        assert_eq!(prod.exact_div(&b), a);
    }

    #[test]
    fn substitute_partial() {
        let p = &(&MPoly::var("x") * &MPoly::var("y")) + &MPoly::var("x");
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), rat(2));
        let q = p.substitute(&a);
        assert_eq!(q, &(&MPoly::constant(rat(2)) * &MPoly::var("y")) + &MPoly::constant(rat(2)));
    }

    #[test]
    fn json_round_trip_and_order() {
        let p = &(&MPoly::var("t") * &MPoly::var("t")) - &MPoly::one();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"[{"coeff":"1","exponents":{"t":2}},{"coeff":"-1","exponents":{}}]"#
        );
        let back: MPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
