//! Zeta expressions in `T = L^{-s}`: sums of coefficient-times-factor-product
//! terms, their normal form over binomial denominators, and exact power-series
//! expansion.
//!
//! A normal form keeps the numerator as a polynomial in `T^{1/M}` (the
//! exponent lattice `M` clears all factor T-exponents) and the denominator as
//! a multiset of binomials `1 - L^{-v} T^{N}`. Cancellation is repeated exact
//! trial division by those binomials; the coefficient ring is free, hence an
//! integral domain, which makes the trial divisions conservative and equality
//! of normal forms decidable.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::motive::MotiveExpr;
use crate::ring::parse::parse_motive_expr;
use crate::util::{parse_rational64, rational64_to_string};

/// Shape of a local factor.
///
/// `Naive` denotes `(L-1) L^{-Ns-v} / (1 - L^{-Ns-v})`, `Global` denotes
/// `L^{-Ns-v} / (1 - L^{-Ns-v})`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum FactorStyle {
    Naive,
    Global,
}

/// One local factor with exponent data `(N, v)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ZetaFactor {
    n: Rational64,
    v: Rational64,
    style: FactorStyle,
}

impl ZetaFactor {
    /// `(N, v) = (0, 0)` is forbidden, as are negative entries.
    pub fn new(n: Rational64, v: Rational64, style: FactorStyle) -> Result<Self> {
        if n.is_zero() && v.is_zero() {
            return Err(Error::ForbiddenZeroPair);
        }
        if n.is_negative() || v.is_negative() {
            return Err(Error::Domain(format!(
                "factor data must be nonnegative, got ({n}, {v})"
            )));
        }
        Ok(ZetaFactor { n, v, style })
    }

    pub fn n(&self) -> Rational64 {
        self.n
    }

    pub fn v(&self) -> Rational64 {
        self.v
    }

    pub fn style(&self) -> FactorStyle {
        self.style
    }

    pub fn binomial(&self) -> Binomial {
        Binomial { n: self.n, v: self.v }
    }
}

/// Denominator binomial `1 - L^{-v} T^{N}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Binomial {
    pub n: Rational64,
    pub v: Rational64,
}

impl Binomial {
    /// Pole location `-v/N`, when the binomial is s-dependent at all.
    pub fn pole(&self) -> Option<Rational64> {
        if self.n.is_zero() {
            None
        } else {
            Some(-self.v / self.n)
        }
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 - {})", lt_monomial_string(self.v, self.n))
    }
}

/// Render `L^{-v} T^{N}` for human-readable output.
fn lt_monomial_string(v: Rational64, n: Rational64) -> String {
    let mut parts = Vec::new();
    if !v.is_zero() {
        let e = -v;
        if e.is_integer() {
            parts.push(format!("L^{}", e.numer()));
        } else {
            parts.push(format!("L^({}/{})", e.numer(), e.denom()));
        }
    }
    if !n.is_zero() {
        if n.is_integer() && *n.numer() == 1 {
            parts.push("T".to_string());
        } else if n.is_integer() {
            parts.push(format!("T^{}", n.numer()));
        } else {
            parts.push(format!("T^({}/{})", n.numer(), n.denom()));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Additive zeta expression: a list of `(coefficient, factor multiset)` terms.
///
/// All factors across the whole expression share one style; term order is
/// irrelevant after normalization, and equality is defined through it.
#[derive(Clone, Debug)]
pub struct ZetaExpr {
    r: u32,
    style: Option<FactorStyle>,
    terms: Vec<(MotiveExpr, Vec<ZetaFactor>)>,
}

impl ZetaExpr {
    pub fn new(r: u32) -> Self {
        ZetaExpr { r, style: None, terms: Vec::new() }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn terms(&self) -> &[(MotiveExpr, Vec<ZetaFactor>)] {
        &self.terms
    }

    pub fn add_term(&mut self, coeff: MotiveExpr, mut factors: Vec<ZetaFactor>) -> Result<()> {
        for f in &factors {
            match self.style {
                None => self.style = Some(f.style),
                Some(s) if s == f.style => {}
                Some(s) => {
                    return Err(Error::Domain(format!(
                        "mixed factor styles in one expression: {s:?} and {:?}",
                        f.style
                    )))
                }
            }
        }
        if coeff.is_zero() {
            return Ok(());
        }
        factors.sort();
        self.terms.push((coeff, factors));
        Ok(())
    }

    /// Exponent lattice: minimal `M` with `N·M` integral for every factor.
    pub fn lattice(&self) -> u32 {
        let mut m: i64 = 1;
        for (_, factors) in &self.terms {
            for f in factors {
                m = m.lcm(f.n.denom());
            }
        }
        m as u32
    }

    /// Extension index needed by normalization: clears every `v` denominator.
    fn coeff_r(&self) -> u32 {
        let mut r: i64 = i64::from(self.r);
        for (_, factors) in &self.terms {
            for f in factors {
                r = r.lcm(f.v.denom());
            }
        }
        r as u32
    }

    /// Bring to numerator/denominator form over the common binomial
    /// denominator and cancel by exact trial division.
    pub fn normalize(&self) -> NormalZeta {
        let m = self.lattice();
        let rp = self.coeff_r();
        // Common denominator: per-binomial max multiplicity across terms.
        let mut common: BTreeMap<Binomial, u32> = BTreeMap::new();
        for (_, factors) in &self.terms {
            let mut here: BTreeMap<Binomial, u32> = BTreeMap::new();
            for f in factors {
                *here.entry(f.binomial()).or_insert(0) += 1;
            }
            for (b, k) in here {
                let slot = common.entry(b).or_insert(0);
                *slot = (*slot).max(k);
            }
        }
        let mut numerator = UPoly::zero();
        for (coeff, factors) in &self.terms {
            let mut t = UPoly::constant(coeff.lift_r(rp));
            let mut used: BTreeMap<Binomial, u32> = BTreeMap::new();
            for f in factors {
                t = t.mul(&factor_numerator_upoly(f, m, rp));
                *used.entry(f.binomial()).or_insert(0) += 1;
            }
            for (b, total) in &common {
                let missing = total - used.get(b).copied().unwrap_or(0);
                for _ in 0..missing {
                    t = t.mul(&binomial_upoly(*b, m, rp));
                }
            }
            numerator = numerator.add(&t);
        }
        NormalZeta::cancel(rp, m, numerator, common.into_iter().collect())
    }

    /// Exact series expansion to `T`-depth `depth`: returns the lattice `M`
    /// and coefficients of `T^{k/M}` for `k = 0 .. depth·M`.
    ///
    /// Every factor must have `N > 0`; an s-free factor has no power-series
    /// expansion in `T` (its limit lives in the completed ring only).
    pub fn series(&self, depth: u32) -> Result<(u32, Vec<MotiveExpr>)> {
        let m = self.lattice();
        let rp = self.coeff_r();
        let cap = u64::from(depth) * u64::from(m);
        let mut acc = UPoly::zero();
        for (coeff, factors) in &self.terms {
            let mut t = UPoly::constant(coeff.clone());
            for f in factors {
                t = t.mul_truncated(&factor_series_upoly(f, m, cap, rp)?, cap);
            }
            acc = acc.add(&t);
        }
        Ok((m, acc.into_dense(cap)))
    }
}

impl PartialEq for ZetaExpr {
    /// Order-insensitive equality through normalization.
    fn eq(&self, other: &Self) -> bool {
        self.normalize() == other.normalize()
    }
}

/// Numerator contribution of one factor: `(L-1)^{[naive]} · L^{-v} · U^{N·M}`.
fn factor_numerator_upoly(f: &ZetaFactor, m: u32, rp: u32) -> UPoly {
    let mut c = MotiveExpr::l_pow(-f.v, rp).expect("v denominator divides the lifted index");
    if f.style == FactorStyle::Naive {
        let lm1 = &MotiveExpr::lefschetz(rp) - &MotiveExpr::one(rp);
        c = &c * &lm1;
    }
    UPoly::monomial(scaled_exp(f.n, m), c)
}

/// The binomial `1 - L^{-v} U^{N·M}` as a polynomial in `U`.
fn binomial_upoly(b: Binomial, m: u32, rp: u32) -> UPoly {
    let c = MotiveExpr::l_pow(-b.v, rp).expect("v denominator divides the lifted index");
    UPoly::constant(MotiveExpr::one(rp)).sub(&UPoly::monomial(scaled_exp(b.n, m), c))
}

/// Geometric series of one factor truncated at U-degree `cap`:
/// `sum_{j >= 1} (L-1)^{[naive]} L^{-jv} U^{jNM}`.
fn factor_series_upoly(f: &ZetaFactor, m: u32, cap: u64, rp: u32) -> Result<UPoly> {
    if f.n.is_zero() {
        return Err(Error::ConstantFactorInSeries { v: rational64_to_string(f.v) });
    }
    let step = scaled_exp(f.n, m);
    let lm1 = &MotiveExpr::lefschetz(rp) - &MotiveExpr::one(rp);
    let mut out = UPoly::zero();
    let mut j: i64 = 1;
    while (j as u64) * step <= cap {
        let mut c = MotiveExpr::l_pow(-f.v * j, rp)?;
        if f.style == FactorStyle::Naive {
            c = &c * &lm1;
        }
        out.terms.insert(j as u64 * step, c);
        j += 1;
    }
    Ok(out)
}

fn scaled_exp(n: Rational64, m: u32) -> u64 {
    let scaled = n * Rational64::from_integer(i64::from(m));
    debug_assert!(scaled.is_integer(), "lattice must clear T-exponents");
    *scaled.numer() as u64
}

/// Sparse polynomial in `U = T^{1/M}` with ring coefficients.
#[derive(Clone, Debug, Default)]
pub(crate) struct UPoly {
    terms: BTreeMap<u64, MotiveExpr>,
}

impl UPoly {
    fn zero() -> Self {
        UPoly::default()
    }

    fn constant(c: MotiveExpr) -> Self {
        Self::monomial(0, c)
    }

    fn monomial(exp: u64, c: MotiveExpr) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        UPoly { terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    fn insert_add(&mut self, exp: u64, c: MotiveExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, -c);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = UPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert_add(ea + eb, ca * cb);
            }
        }
        out
    }

    fn mul_truncated(&self, other: &Self, cap: u64) -> Self {
        let mut out = UPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                if ea + eb <= cap {
                    out.insert_add(ea + eb, ca * cb);
                }
            }
        }
        out
    }

    fn scale(&self, k: &MotiveExpr) -> Self {
        let mut out = UPoly::zero();
        for (e, c) in &self.terms {
            out.insert_add(*e, c * k);
        }
        out
    }

    /// Exact division by `1 - c U^m` via the ascending recurrence
    /// `q_k = f_k + c q_{k-m}`. For `m = 0` the binomial is the ring constant
    /// `1 - c` and division is coefficient-wise exact division.
    fn div_binomial(&self, c: &MotiveExpr, m: u64) -> Option<Self> {
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        if m == 0 {
            let divisor = &MotiveExpr::one(c.r()) - c;
            let mut out = UPoly::zero();
            for (e, coeff) in &self.terms {
                out.insert_add(*e, coeff.exact_div(&divisor)?);
            }
            return Some(out);
        }
        let deg = self.degree().unwrap();
        if deg < m {
            return None;
        }
        let bound = deg - m;
        let mut work = self.terms.clone();
        let mut q = UPoly::zero();
        while let Some(k) = work.keys().next().copied() {
            if k > bound {
                return None;
            }
            let a = work.remove(&k).unwrap();
            let carry = &a * c;
            if !carry.is_zero() {
                match work.entry(k + m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(carry);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get() + &carry;
                        if sum.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = sum;
                        }
                    }
                }
            }
            q.terms.insert(k, a);
        }
        Some(q)
    }

    fn into_dense(self, cap: u64) -> Vec<MotiveExpr> {
        let mut out = vec![MotiveExpr::zero(1); (cap + 1) as usize];
        for (e, c) in self.terms {
            if e <= cap {
                out[e as usize] = c;
            }
        }
        out
    }

    fn map_exponents(&self, scale: u64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e * scale, c.clone())).collect();
        UPoly { terms }
    }

    fn eq_terms(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(other.terms.iter())
                .all(|((ea, ca), (eb, cb))| ea == eb && ca == cb)
    }
}

/// Fully cancelled numerator/denominator form of a zeta expression.
///
/// No remaining denominator binomial divides the numerator. Equality is
/// rational-function equality (cross-multiplication in the free ring), so two
/// normal forms compare equal exactly when they denote the same function.
#[derive(Clone, Debug)]
pub struct NormalZeta {
    r: u32,
    lattice: u32,
    numerator: UPoly,
    denominator: Vec<Binomial>,
}

impl NormalZeta {
    fn cancel(r: u32, lattice: u32, mut numerator: UPoly, denominator: Vec<(Binomial, u32)>) -> Self {
        if numerator.is_zero() {
            return NormalZeta { r, lattice: 1, numerator: UPoly::zero(), denominator: Vec::new() };
        }
        let mut kept: Vec<Binomial> = Vec::new();
        for (b, mut mult) in denominator {
            let c = MotiveExpr::l_pow(-b.v, r).expect("denominator v divides lifted index");
            let m = scaled_exp(b.n, lattice);
            while mult > 0 {
                match numerator.div_binomial(&c, m) {
                    Some(q) => {
                        numerator = q;
                        mult -= 1;
                    }
                    None => break,
                }
            }
            for _ in 0..mult {
                kept.push(b);
            }
        }
        kept.sort();
        let nz = NormalZeta { r, lattice, numerator, denominator: kept };
        nz.reduce_lattice()
    }

    /// Shrink the exponent lattice when every numerator exponent and every
    /// scaled denominator exponent shares a common factor with it.
    fn reduce_lattice(mut self) -> Self {
        if self.lattice == 1 {
            return self;
        }
        let mut g = u64::from(self.lattice);
        for e in self.numerator.terms.keys() {
            g = g.gcd(e);
        }
        for b in &self.denominator {
            g = g.gcd(&scaled_exp(b.n, self.lattice));
        }
        if g <= 1 {
            return self;
        }
        let terms = self.numerator.terms.iter().map(|(e, c)| (e / g, c.clone())).collect();
        self.numerator = UPoly { terms };
        self.lattice /= g as u32;
        self
    }

    /// Run the cancellation pass again; a normal form is a fixed point.
    pub fn renormalize(&self) -> Self {
        let mut denom: BTreeMap<Binomial, u32> = BTreeMap::new();
        for b in &self.denominator {
            *denom.entry(*b).or_insert(0) += 1;
        }
        Self::cancel(self.r, self.lattice, self.numerator.clone(), denom.into_iter().collect())
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn lattice(&self) -> u32 {
        self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Numerator terms as `(T-exponent, coefficient)` with exponent `k/M`.
    pub fn numerator_terms(&self) -> impl Iterator<Item = (Rational64, &MotiveExpr)> {
        let m = i64::from(self.lattice);
        self.numerator
            .terms
            .iter()
            .map(move |(e, c)| (Rational64::new(*e as i64, m), c))
    }

    pub fn denominator(&self) -> &[Binomial] {
        &self.denominator
    }

    /// Constant ring value, when the normal form is a bare constant.
    pub fn as_constant(&self) -> Option<MotiveExpr> {
        if !self.denominator.is_empty() {
            return None;
        }
        if self.numerator.is_zero() {
            return Some(MotiveExpr::zero(self.r));
        }
        if self.numerator.terms.len() == 1 {
            if let Some(c) = self.numerator.terms.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Exact expansion to `T`-depth `depth`; fails while an s-free binomial
    /// remains in the denominator.
    pub fn series(&self, depth: u32) -> Result<(u32, Vec<MotiveExpr>)> {
        let cap = u64::from(depth) * u64::from(self.lattice);
        let mut acc = self.numerator.clone();
        acc.terms.retain(|e, _| *e <= cap);
        for b in &self.denominator {
            if b.n.is_zero() {
                return Err(Error::ConstantFactorInSeries { v: rational64_to_string(b.v) });
            }
            let step = scaled_exp(b.n, self.lattice);
            let c = MotiveExpr::l_pow(-b.v, self.r)?;
            let mut geom = UPoly::constant(MotiveExpr::one(self.r));
            let mut power = MotiveExpr::one(self.r);
            let mut e = step;
            while e <= cap {
                power = &power * &c;
                geom.terms.insert(e, power.clone());
                e += step;
            }
            acc = acc.mul_truncated(&geom, cap);
        }
        Ok((self.lattice, acc.into_dense(cap)))
    }

    /// Multiply the numerator by a ring element (the engine uses this for
    /// global prefactors applied after normalization).
    pub fn multiply_numerator_by(&self, k: &MotiveExpr) -> Self {
        NormalZeta {
            r: self.r,
            lattice: self.lattice,
            numerator: self.numerator.scale(k),
            denominator: self.denominator.clone(),
        }
    }

    fn lift_lattice(&self, m: u32) -> UPoly {
        debug_assert!(m.is_multiple_of(self.lattice));
        self.numerator.map_exponents(u64::from(m / self.lattice))
    }

    /// Machine-readable form: stable JSON schema used by the CLI.
    pub fn to_json(&self) -> serde_json::Value {
        let numerator: Vec<serde_json::Value> = self
            .numerator_terms()
            .map(|(t, c)| {
                serde_json::json!({
                    "t": rational64_to_string(t),
                    "coeff": c.to_string(),
                })
            })
            .collect();
        let denominator: Vec<serde_json::Value> = self
            .denominator
            .iter()
            .map(|b| {
                serde_json::json!({
                    "N": rational64_to_string(b.n),
                    "v": rational64_to_string(b.v),
                })
            })
            .collect();
        serde_json::json!({
            "r": self.r,
            "lattice": self.lattice,
            "numerator": numerator,
            "denominator": denominator,
        })
    }

    /// Inverse of [`NormalZeta::to_json`].
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Schema("expected object".into()))?;
        let r = obj
            .get("r")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Schema("missing integer field 'r'".into()))? as u32;
        let lattice = obj
            .get("lattice")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Schema("missing integer field 'lattice'".into()))?
            as u32;
        let mut numerator = UPoly::zero();
        for item in obj
            .get("numerator")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Schema("missing array field 'numerator'".into()))?
        {
            let t = parse_rational64(
                item.get("t")
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| Error::Schema("numerator term missing 't'".into()))?,
            )?;
            let coeff = parse_motive_expr(
                item.get("coeff")
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| Error::Schema("numerator term missing 'coeff'".into()))?,
                r,
            )?;
            let scaled = t * Rational64::from_integer(i64::from(lattice));
            if !scaled.is_integer() || scaled.is_negative() {
                return Err(Error::Schema(format!(
                    "exponent {t} is not on the lattice 1/{lattice}"
                )));
            }
            numerator.insert_add(*scaled.numer() as u64, coeff);
        }
        let mut denominator = Vec::new();
        for item in obj
            .get("denominator")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Schema("missing array field 'denominator'".into()))?
        {
            let n = parse_rational64(
                item.get("N")
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| Error::Schema("denominator missing 'N'".into()))?,
            )?;
            let v = parse_rational64(
                item.get("v")
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| Error::Schema("denominator missing 'v'".into()))?,
            )?;
            denominator.push(Binomial { n, v });
        }
        denominator.sort();
        Ok(NormalZeta { r, lattice, numerator, denominator })
    }
}

impl PartialEq for NormalZeta {
    /// Rational-function equality: cancel shared binomials, then cross-multiply
    /// numerators against the remaining denominators and compare exactly.
    fn eq(&self, other: &Self) -> bool {
        let m = self.lattice.lcm(&other.lattice);
        let mut da: Vec<Binomial> = self.denominator.to_vec();
        let mut db: Vec<Binomial> = other.denominator.to_vec();
        let mut i = 0;
        while i < da.len() {
            if let Some(j) = db.iter().position(|b| *b == da[i]) {
                db.remove(j);
                da.remove(i);
            } else {
                i += 1;
            }
        }
        let mut vden: i64 = 1;
        for b in da.iter().chain(db.iter()) {
            vden = vden.lcm(b.v.denom());
        }
        let rp = self.r.lcm(&other.r).lcm(&(vden as u32));
        let mut lhs = self.lift_lattice(m);
        for b in &db {
            lhs = lhs.mul(&binomial_upoly(*b, m, rp));
        }
        let mut rhs = other.lift_lattice(m);
        for b in &da {
            rhs = rhs.mul(&binomial_upoly(*b, m, rp));
        }
        lhs.eq_terms(&rhs)
    }
}

impl fmt::Display for NormalZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let num: Vec<String> = self
            .numerator_terms()
            .map(|(t, c)| {
                if t.is_zero() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", lt_monomial_string(Rational64::zero(), t))
                }
            })
            .collect();
        write!(f, "[ {} ]", num.join(" + "))?;
        if !self.denominator.is_empty() {
            let den: Vec<String> = self.denominator.iter().map(|b| b.to_string()).collect();
            write!(f, " / [ {} ]", den.join(" "))?;
        }
        Ok(())
    }
}
