//! Exact sparse polynomials in the colored variables `x_{i,j}`.
//!
//! A variable carries a color `i ∈ Z_n` and a weight `j = weight_num / n`.
//! The modulus `n` lives on the [`Polynomial`], so a weight is stored as its
//! integer numerator. Coefficients are arbitrary-precision integers and the
//! zero polynomial is the empty term map.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A colored variable `x_{color, weight_num / n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub color: u32,
    pub weight_num: i64,
}

impl Variable {
    pub fn new(color: u32, weight_num: i64) -> Self {
        Variable { color, weight_num }
    }
}

/// One factor `var^exp` of a monomial. Ordering is lexicographic on
/// `(color, weight_num, exp)`, which fixes the canonical term order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub color: u32,
    pub weight_num: i64,
    pub exp: u32,
}

impl Factor {
    pub fn var(&self) -> Variable {
        Variable::new(self.color, self.weight_num)
    }
}

/// A monomial with factors sorted by variable and no zero exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    factors: Vec<Factor>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Variable) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Variable, exp: u32) -> Self {
        Self::from_factors([(v, exp)])
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs, merging
    /// repeated variables and dropping zero exponents.
    pub fn from_factors<I>(factors: I) -> Self
    where
        I: IntoIterator<Item = (Variable, u32)>,
    {
        let mut merged: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *merged.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            factors: merged
                .into_iter()
                .map(|(v, exp)| Factor {
                    color: v.color,
                    weight_num: v.weight_num,
                    exp,
                })
                .collect(),
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total number of variable occurrences.
    pub fn total_exponent(&self) -> u64 {
        self.factors.iter().map(|f| f.exp as u64).sum()
    }

    pub fn exponent_of(&self, v: Variable) -> u32 {
        self.factors
            .binary_search_by(|f| f.var().cmp(&v))
            .map(|idx| self.factors[idx].exp)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut a, mut b) = (
            self.factors.iter().peekable(),
            other.factors.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some(fa), Some(fb)) => match fa.var().cmp(&fb.var()) {
                    std::cmp::Ordering::Less => out.push(*a.next().unwrap()),
                    std::cmp::Ordering::Greater => out.push(*b.next().unwrap()),
                    std::cmp::Ordering::Equal => {
                        let mut f = *a.next().unwrap();
                        f.exp += b.next().unwrap().exp;
                        out.push(f);
                    }
                },
                (Some(_), None) => out.push(*a.next().unwrap()),
                (None, Some(_)) => out.push(*b.next().unwrap()),
                (None, None) => break,
            }
        }
        Monomial { factors: out }
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut d = divisor.factors.iter().peekable();
        for f in &self.factors {
            match d.peek() {
                Some(df) if df.var() < f.var() => return None,
                Some(df) if df.var() == f.var() => {
                    if df.exp > f.exp {
                        return None;
                    }
                    let rest = f.exp - df.exp;
                    d.next();
                    if rest > 0 {
                        out.push(Factor { exp: rest, ..*f });
                    }
                }
                _ => out.push(*f),
            }
        }
        if d.next().is_some() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    /// `Σ exp · weight_num`, the degree scaled by the modulus.
    pub fn degree_num(&self) -> i64 {
        self.factors
            .iter()
            .map(|f| f.exp as i64 * f.weight_num)
            .sum()
    }

    pub fn degree(&self, modulus: u32) -> Ratio<i64> {
        Ratio::new(self.degree_num(), modulus as i64)
    }

    pub(crate) fn fmt_with_modulus(&self, modulus: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (idx, fac) in self.factors.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            let w = Ratio::new(fac.weight_num, modulus as i64);
            write!(f, "x[{},{}]", fac.color, w)?;
            if fac.exp > 1 {
                write!(f, "^{}", fac.exp)?;
            }
        }
        Ok(())
    }

    pub fn display(&self, modulus: u32) -> MonomialDisplay<'_> {
        MonomialDisplay {
            mono: self,
            modulus,
        }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    modulus: u32,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.mono.fmt_with_modulus(self.modulus, f)
    }
}

/// Minimum degree of a polynomial; the zero polynomial has degree `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Finite(Ratio<i64>),
    Infinite,
}

impl Degree {
    pub fn finite(num: i64, den: i64) -> Self {
        Degree::Finite(Ratio::new(num, den))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Degree::Infinite)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(r) => write!(f, "{}", r),
            Degree::Infinite => write!(f, "inf"),
        }
    }
}

/// A polynomial with integer coefficients over the ring with modulus `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    modulus: u32,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero(modulus: u32) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Polynomial {
            modulus,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(modulus: u32) -> Self {
        Self::from_monomial(modulus, Monomial::one())
    }

    pub fn from_monomial(modulus: u32, m: Monomial) -> Self {
        let mut p = Self::zero(modulus);
        p.add_term(m, BigInt::one());
        p
    }

    pub fn from_terms<I>(modulus: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut p = Self::zero(modulus);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Adds `c · m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::RingMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    /// In-place `self += sign · other`.
    pub fn add_scaled(&mut self, other: &Polynomial, scale: &BigInt) -> Result<()> {
        self.check_ring(other)?;
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * scale);
        }
        Ok(())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(self.modulus);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Exact division by a monomial; fails naming the first term it does not divide.
    pub fn div_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        let mut terms = BTreeMap::new();
        for (t, c) in &self.terms {
            let q = t.div(m).ok_or_else(|| Error::NotDivisible {
                term: t.display(self.modulus).to_string(),
                divisor: m.display(self.modulus).to_string(),
            })?;
            terms.insert(q, c.clone());
        }
        Ok(Polynomial {
            modulus: self.modulus,
            terms,
        })
    }

    pub fn min_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.degree_num())
            .min()
            .map(|d| Degree::finite(d, self.modulus as i64))
            .unwrap_or(Degree::Infinite)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Substitutes `x_{i,j} -> y_j`. The result lives in the single-color ring
    /// (modulus 1) where `y_j` is the variable of color 0 and weight `j`.
    pub fn specialize_forget_color(&self) -> Result<Polynomial> {
        let n = self.modulus as i64;
        let mut out = Polynomial::zero(1);
        for (m, c) in &self.terms {
            let mut factors = Vec::with_capacity(m.factors.len());
            for f in &m.factors {
                if f.weight_num % n != 0 {
                    return Err(Error::FractionalWeight {
                        var: Monomial::var(f.var()).display(self.modulus).to_string(),
                    });
                }
                factors.push((Variable::new(0, f.weight_num / n), f.exp));
            }
            out.add_term(Monomial::from_factors(factors), c.clone());
        }
        Ok(out)
    }

    /// Evaluates with every variable set to 1.
    pub fn eval_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn to_doc(&self) -> PolyDoc {
        PolyDoc {
            n: self.modulus,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermDoc {
                    coeff: c.to_string(),
                    vars: m
                        .factors
                        .iter()
                        .map(|f| VarDoc {
                            color: f.color,
                            weight_num: f.weight_num,
                            exp: f.exp,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &PolyDoc) -> Result<Polynomial> {
        if doc.n == 0 {
            return Err(Error::InvalidDocument("modulus n must be positive".into()));
        }
        let mut p = Polynomial::zero(doc.n);
        for (idx, term) in doc.terms.iter().enumerate() {
            let coeff: BigInt = term.coeff.parse().map_err(|_| {
                Error::InvalidDocument(format!("term {idx}: bad coefficient {:?}", term.coeff))
            })?;
            if coeff.is_zero() {
                return Err(Error::InvalidDocument(format!(
                    "term {idx}: zero coefficient"
                )));
            }
            let mut factors = Vec::with_capacity(term.vars.len());
            for v in &term.vars {
                if v.color >= doc.n {
                    return Err(Error::InvalidDocument(format!(
                        "term {idx}: color {} out of range for n = {}",
                        v.color, doc.n
                    )));
                }
                if v.exp == 0 {
                    return Err(Error::InvalidDocument(format!("term {idx}: zero exponent")));
                }
                factors.push((Variable::new(v.color, v.weight_num), v.exp));
            }
            p.add_term(Monomial::from_factors(factors), coeff);
        }
        Ok(p)
    }

    /// Canonical compact JSON form of [`PolyDoc`].
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("polynomial document serializes")
    }

    pub fn from_json(text: &str) -> Result<Polynomial> {
        let doc: PolyDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        Self::from_doc(&doc)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", abs)?;
                }
                m.fmt_with_modulus(self.modulus, f)?;
            }
        }
        Ok(())
    }
}

/// Interchange document for a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub n: u32,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: String,
    pub vars: Vec<VarDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDoc {
    pub color: u32,
    pub weight_num: i64,
    pub exp: u32,
}
