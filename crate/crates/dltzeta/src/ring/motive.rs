//! Exact arithmetic in the coefficient ring: Laurent polynomials in the
//! Lefschetz class `L` (exponents in (1/r)·Z) whose coefficients are integer
//! polynomials in named class symbols.
//!
//! The ring is modeled as *free*: class symbols are independent
//! transcendentals, no scissor-type relations are imposed. Equality is
//! therefore decidable and cancellation conservative. With that convention
//! the ring is an integral domain, which the zeta normalizer relies on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Multiset of symbol names with positive exponents, kept sorted by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Hash)]
pub struct SymbolMonomial(Vec<(String, u32)>);

impl SymbolMonomial {
    pub fn unit() -> Self {
        SymbolMonomial(Vec::new())
    }

    pub fn single(name: &str) -> Self {
        SymbolMonomial(vec![(name.to_string(), 1)])
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| u64::from(*e)).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut map: BTreeMap<&str, u32> = BTreeMap::new();
        for (n, e) in self.0.iter().chain(other.0.iter()) {
            *map.entry(n).or_insert(0) += *e;
        }
        SymbolMonomial(map.into_iter().map(|(n, e)| (n.to_string(), e)).collect())
    }

    /// Componentwise quotient; `None` when some exponent would go negative.
    fn div(&self, other: &Self) -> Option<Self> {
        let mut map: BTreeMap<&str, i64> = BTreeMap::new();
        for (n, e) in &self.0 {
            map.insert(n, i64::from(*e));
        }
        for (n, e) in &other.0 {
            let slot = map.entry(n).or_insert(0);
            *slot -= i64::from(*e);
            if *slot < 0 {
                return None;
            }
        }
        Some(SymbolMonomial(
            map.into_iter()
                .filter(|(_, e)| *e > 0)
                .map(|(n, e)| (n.to_string(), e as u32))
                .collect(),
        ))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(n, e)| (n.as_str(), *e))
    }
}

/// Key of one term: the L-exponent stored as an integer multiple of 1/r,
/// plus the symbol monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
struct TermKey {
    l_scaled: i64,
    symbols: SymbolMonomial,
}

/// Element of the extended coefficient ring.
///
/// Invariants: no stored coefficient is zero, every L-exponent times `r` is
/// an integer (guaranteed by the scaled representation), and the term map is
/// canonical, so structural equality at a common `r` is ring equality.
#[derive(Clone, Debug)]
pub struct MotiveExpr {
    r: u32,
    terms: BTreeMap<TermKey, BigInt>,
}

impl MotiveExpr {
    pub fn zero(r: u32) -> Self {
        assert!(r > 0, "extension index must be positive");
        MotiveExpr { r, terms: BTreeMap::new() }
    }

    pub fn one(r: u32) -> Self {
        Self::int(1, r)
    }

    pub fn int(n: i64, r: u32) -> Self {
        Self::bigint(BigInt::from(n), r)
    }

    pub fn bigint(n: BigInt, r: u32) -> Self {
        let mut e = Self::zero(r);
        if !n.is_zero() {
            e.terms.insert(TermKey { l_scaled: 0, symbols: SymbolMonomial::unit() }, n);
        }
        e
    }

    /// The Lefschetz class L.
    pub fn lefschetz(r: u32) -> Self {
        let mut e = Self::zero(r);
        e.terms.insert(
            TermKey { l_scaled: i64::from(r), symbols: SymbolMonomial::unit() },
            BigInt::one(),
        );
        e
    }

    /// `L^exp`; the exponent's denominator must divide `r`.
    pub fn l_pow(exp: Rational64, r: u32) -> Result<Self> {
        let scaled = scale_exponent(exp, r)?;
        let mut e = Self::zero(r);
        e.terms.insert(
            TermKey { l_scaled: scaled, symbols: SymbolMonomial::unit() },
            BigInt::one(),
        );
        Ok(e)
    }

    /// A named class symbol `[name]`.
    pub fn symbol(name: &str, r: u32) -> Self {
        let mut e = Self::zero(r);
        e.terms.insert(
            TermKey { l_scaled: 0, symbols: SymbolMonomial::single(name) },
            BigInt::one(),
        );
        e
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&TermKey { l_scaled: 0, symbols: SymbolMonomial::unit() })
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lift to a finer extension index. `r2` must be a multiple of `self.r`.
    pub fn lift_r(&self, r2: u32) -> Self {
        assert!(r2.is_multiple_of(self.r), "lift_r target must be a multiple of r");
        if r2 == self.r {
            return self.clone();
        }
        let k = i64::from(r2 / self.r);
        let terms = self
            .terms
            .iter()
            .map(|(key, c)| {
                (TermKey { l_scaled: key.l_scaled * k, symbols: key.symbols.clone() }, c.clone())
            })
            .collect();
        MotiveExpr { r: r2, terms }
    }

    /// Lift both operands to the lcm of their extension indices.
    pub fn unify(a: &Self, b: &Self) -> (Self, Self) {
        let r = a.r.lcm(&b.r);
        (a.lift_r(r), b.lift_r(r))
    }

    fn insert_term(&mut self, key: TermKey, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(self.r);
        }
        let big = BigInt::from(k);
        let terms = self.terms.iter().map(|(key, c)| (key.clone(), c * &big)).collect();
        MotiveExpr { r: self.r, terms }
    }

    /// Multiply by `L^exp`.
    pub fn mul_l_pow(&self, exp: Rational64) -> Result<Self> {
        let scaled = scale_exponent(exp, self.r)?;
        Ok(self.shift_l(scaled))
    }

    fn shift_l(&self, delta_scaled: i64) -> Self {
        if delta_scaled == 0 {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(key, c)| {
                (
                    TermKey {
                        l_scaled: key.l_scaled + delta_scaled,
                        symbols: key.symbols.clone(),
                    },
                    c.clone(),
                )
            })
            .collect();
        MotiveExpr { r: self.r, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.r);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// True when some L-exponent is not an integer.
    pub fn has_fractional_exponents(&self) -> bool {
        let r = i64::from(self.r);
        self.terms.keys().any(|k| k.l_scaled % r != 0)
    }

    pub fn symbols_used(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for key in self.terms.keys() {
            for (name, _) in key.symbols.iter() {
                out.insert(name.to_string());
            }
        }
        out
    }

    /// Exact substitution homomorphism: `L -> l_value`, `[name] -> symbols[name]`.
    ///
    /// When fractional L-exponents occur, `l_value` must have an exact
    /// rational r-th root.
    pub fn substitute(
        &self,
        l_value: &BigRational,
        symbols: &BTreeMap<String, BigRational>,
    ) -> Result<BigRational> {
        let r = i64::from(self.r);
        let fractional = self.has_fractional_exponents();
        let root = if fractional {
            Some(exact_nth_root(l_value, self.r)?)
        } else {
            None
        };
        let mut acc = BigRational::zero();
        for (key, coeff) in &self.terms {
            let l_part = match &root {
                Some(rt) => rational_pow(rt, key.l_scaled)?,
                None => rational_pow(l_value, key.l_scaled / r)?,
            };
            let mut term = BigRational::from(coeff.clone()) * l_part;
            for (name, e) in key.symbols.iter() {
                let val = symbols
                    .get(name)
                    .ok_or_else(|| Error::MissingSymbol(name.to_string()))?;
                term *= rational_pow(val, i64::from(e))?;
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Exact division test in the free ring; `Some(q)` iff `self == q * g`.
    pub fn exact_div(&self, g: &Self) -> Option<Self> {
        if g.is_zero() {
            return None;
        }
        let (f, g) = Self::unify(self, g);
        if f.is_zero() {
            return Some(Self::zero(f.r));
        }
        // Clear Laurent shifts: divisibility is unchanged up to the unit L^k.
        let fmin = f.terms.keys().map(|k| k.l_scaled).min().unwrap();
        let gmin = g.terms.keys().map(|k| k.l_scaled).min().unwrap();
        let mut rem = f.shift_l(-fmin);
        let gs = g.shift_l(-gmin);
        let (gt_key, gt_coeff) = leading_term(&gs)?;
        let mut quotient = Self::zero(f.r);
        while !rem.is_zero() {
            let (ft_key, ft_coeff) = leading_term(&rem)?;
            if ft_key.l_scaled < gt_key.l_scaled {
                return None;
            }
            let symbols = ft_key.symbols.div(&gt_key.symbols)?;
            let (q, rest) = ft_coeff.div_rem(&gt_coeff);
            if !rest.is_zero() {
                return None;
            }
            let t_key = TermKey { l_scaled: ft_key.l_scaled - gt_key.l_scaled, symbols };
            let mut t = Self::zero(f.r);
            t.terms.insert(t_key, q);
            quotient = &quotient + &t;
            rem = &rem - &(&t * &gs);
        }
        Some(quotient.shift_l(fmin - gmin))
    }
}

/// Graded-lexicographic monomial order on (L, symbols-by-name): grade first,
/// then the padded exponent vector with L in the leading position. Unlike the
/// derived `Ord` on the sparse symbol vector, this is multiplicative
/// (invariant under multiplying both sides by a common monomial), which the
/// exact-division loop relies on: in a domain, lt(q·g) = lt(q)·lt(g).
fn cmp_graded(a: &TermKey, b: &TermKey) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let grade_a = a.l_scaled + a.symbols.total_degree() as i64;
    let grade_b = b.l_scaled + b.symbols.total_degree() as i64;
    match grade_a.cmp(&grade_b) {
        Ordering::Equal => {}
        other => return other,
    }
    match a.l_scaled.cmp(&b.l_scaled) {
        Ordering::Equal => {}
        other => return other,
    }
    // merge-compare the sorted sparse exponent vectors, missing entries = 0
    let mut ia = a.symbols.iter().peekable();
    let mut ib = b.symbols.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((na, ea)), Some((nb, eb))) => match na.cmp(nb) {
                // earlier variable present only on one side: that side has a
                // positive exponent where the other has zero
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match ea.cmp(eb) {
                    Ordering::Equal => {
                        ia.next();
                        ib.next();
                    }
                    other => return other,
                },
            },
        }
    }
}

fn leading_term(e: &MotiveExpr) -> Option<(TermKey, BigInt)> {
    e.terms
        .iter()
        .max_by(|(ka, _), (kb, _)| cmp_graded(ka, kb))
        .map(|(k, c)| (k.clone(), c.clone()))
}

fn scale_exponent(exp: Rational64, r: u32) -> Result<i64> {
    let den = *exp.denom();
    let r_i = i64::from(r);
    if r_i % den != 0 {
        return Err(Error::ExponentDenominator { den, r });
    }
    Ok(exp.numer() * (r_i / den))
}

/// `base^e` for integer `e`, exact; errors on `0^negative`.
pub fn rational_pow(base: &BigRational, e: i64) -> Result<BigRational> {
    if e == 0 {
        return Ok(BigRational::one());
    }
    if base.is_zero() {
        if e < 0 {
            return Err(Error::ZeroToNegativePower);
        }
        return Ok(BigRational::zero());
    }
    let p = base.numer().pow(e.unsigned_abs() as u32);
    let q = base.denom().pow(e.unsigned_abs() as u32);
    Ok(if e > 0 {
        BigRational::new(p, q)
    } else {
        BigRational::new(q, p)
    })
}

/// Exact rational n-th root, or an error when none exists.
fn exact_nth_root(value: &BigRational, n: u32) -> Result<BigRational> {
    let fail = || Error::IrrationalRoot { value: value.to_string(), r: n };
    if value.is_negative() && n.is_multiple_of(2) {
        return Err(fail());
    }
    let p = value.numer().nth_root(n);
    let q = value.denom().nth_root(n);
    if &p.pow(n) == value.numer() && &q.pow(n) == value.denom() {
        Ok(BigRational::new(p, q))
    } else {
        Err(fail())
    }
}

impl PartialEq for MotiveExpr {
    fn eq(&self, other: &Self) -> bool {
        if self.r == other.r {
            return self.terms == other.terms;
        }
        let (a, b) = Self::unify(self, other);
        a.terms == b.terms
    }
}

impl Eq for MotiveExpr {}

impl Add for &MotiveExpr {
    type Output = MotiveExpr;
    fn add(self, rhs: &MotiveExpr) -> MotiveExpr {
        let (a, b) = MotiveExpr::unify(self, rhs);
        let mut out = a;
        for (key, coeff) in b.terms {
            out.insert_term(key, coeff);
        }
        out
    }
}

impl Sub for &MotiveExpr {
    type Output = MotiveExpr;
    fn sub(self, rhs: &MotiveExpr) -> MotiveExpr {
        let (a, b) = MotiveExpr::unify(self, rhs);
        let mut out = a;
        for (key, coeff) in b.terms {
            out.insert_term(key, -coeff);
        }
        out
    }
}

impl Neg for &MotiveExpr {
    type Output = MotiveExpr;
    fn neg(self) -> MotiveExpr {
        let terms = self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect();
        MotiveExpr { r: self.r, terms }
    }
}

impl Mul for &MotiveExpr {
    type Output = MotiveExpr;
    fn mul(self, rhs: &MotiveExpr) -> MotiveExpr {
        let (a, b) = MotiveExpr::unify(self, rhs);
        let mut out = MotiveExpr::zero(a.r);
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let key = TermKey {
                    l_scaled: ka.l_scaled + kb.l_scaled,
                    symbols: ka.symbols.mul(&kb.symbols),
                };
                out.insert_term(key, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for MotiveExpr {
            type Output = MotiveExpr;
            fn $method(self, rhs: MotiveExpr) -> MotiveExpr {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for MotiveExpr {
    type Output = MotiveExpr;
    fn neg(self) -> MotiveExpr {
        -&self
    }
}

impl fmt::Display for MotiveExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let r = i64::from(self.r);
        let mut first = true;
        for (key, coeff) in self.terms.iter().rev() {
            let negative = coeff.is_negative();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = coeff.abs();
            let mut parts: Vec<String> = Vec::new();
            let is_const = key.l_scaled == 0 && key.symbols.is_unit();
            if !abs.is_one() || is_const {
                parts.push(abs.to_string());
            }
            if key.l_scaled != 0 {
                let g = key.l_scaled.gcd(&r);
                let (num, den) = (key.l_scaled / g, r / g);
                if den == 1 {
                    if num == 1 {
                        parts.push("L".to_string());
                    } else {
                        parts.push(format!("L^{num}"));
                    }
                } else {
                    parts.push(format!("L^({num}/{den})"));
                }
            }
            for (name, e) in key.symbols.iter() {
                if e == 1 {
                    parts.push(format!("[{name}]"));
                } else {
                    parts.push(format!("[{name}]^{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
