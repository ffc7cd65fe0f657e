//! Brute-force jet counting over F_p: the independent oracle.
//!
//! A level-n jet is a d-tuple of polynomials mod `t^{n+1}`; `count_jets`
//! enumerates all `p^{d(n+1)}` coefficient tuples and counts those where the
//! input polynomial has contact order exactly `n`. The per-tuple work is cut
//! down by valuation bookkeeping: each monomial's order is the weighted sum
//! of the variable orders, which is exact over a domain, so a pure monomial
//! needs no series arithmetic at all and a multi-term polynomial only needs
//! it when cancellation between monomials is possible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::StratifiedModel;
use crate::ring::ZetaExpr;

/// Default enumeration budget: refuse levels needing more than this many
/// tuples. Overridable via the `DLTZETA_BUDGET` environment variable in the
/// CLI.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Integer-coefficient polynomial in `d` variables, the oracle's input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, i64)>,
}

impl JetPoly {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, i64)] {
        &self.terms
    }

    /// Parse `+ - * ^` expressions over integer constants and variables
    /// `x, y, z, w` or `x1, x2, ...`.
    pub fn parse(text: &str) -> Result<JetPoly> {
        parse_poly(text)
    }

    fn from_map(map: BTreeMap<Vec<u32>, i64>) -> JetPoly {
        let mut terms: Vec<(Vec<u32>, i64)> =
            map.into_iter().filter(|(_, c)| *c != 0).collect();
        let nvars = terms
            .iter()
            .map(|(e, _)| e.iter().rposition(|x| *x > 0).map_or(0, |i| i + 1))
            .max()
            .unwrap_or(0);
        for (e, _) in &mut terms {
            e.truncate(nvars.max(1));
            e.resize(nvars.max(1), 0);
        }
        JetPoly { nvars: nvars.max(1), terms }
    }

    fn zero() -> JetPoly {
        JetPoly { nvars: 1, terms: Vec::new() }
    }

    fn constant(c: i64) -> JetPoly {
        if c == 0 {
            Self::zero()
        } else {
            JetPoly { nvars: 1, terms: vec![(vec![0], c)] }
        }
    }

    fn variable(idx: usize) -> JetPoly {
        let mut e = vec![0; idx + 1];
        e[idx] = 1;
        JetPoly { nvars: idx + 1, terms: vec![(e, 1)] }
    }

    fn to_map(&self, width: usize) -> BTreeMap<Vec<u32>, i64> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.resize(width, 0);
                (e, *c)
            })
            .collect()
    }

    fn add(&self, other: &JetPoly) -> JetPoly {
        let w = self.nvars.max(other.nvars);
        let mut map = self.to_map(w);
        for (e, c) in other.to_map(w) {
            let slot = map.entry(e).or_insert(0);
            *slot += c;
        }
        Self::from_map(map)
    }

    fn neg(&self) -> JetPoly {
        JetPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    fn mul(&self, other: &JetPoly) -> JetPoly {
        let w = self.nvars.max(other.nvars);
        let mut map: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (ea, ca) in self.to_map(w) {
            for (eb, cb) in other.to_map(w) {
                let e: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                let slot = map.entry(e).or_insert(0);
                *slot += ca * cb;
            }
        }
        Self::from_map(map)
    }

    fn pow(&self, e: u32) -> JetPoly {
        let mut acc = JetPoly::constant(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Per-level exact jet counts with prescribed contact order.
#[derive(Clone, Debug)]
pub struct JetCountTable {
    pub f: JetPoly,
    pub p: u64,
    /// `counts[n] = #X_n`.
    pub counts: Vec<u64>,
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        k += 1;
    }
    Ok(())
}

/// Number of coefficient tuples at level `n`, or a budget error.
fn tuple_count(p: u64, d: usize, n: u32, budget: u64) -> Result<u64> {
    let exp = (d as u32) * (n + 1);
    let needed = (p as u128).checked_pow(exp);
    match needed {
        Some(total) if total <= u128::from(budget) => Ok(total as u64),
        _ => Err(Error::Budget {
            level: n,
            needed: format!("{p}^{exp}"),
            budget,
        }),
    }
}

/// Largest depth whose deepest level fits in the budget.
pub fn max_depth_for_budget(p: u64, d: usize, budget: u64) -> u32 {
    let mut n = 0;
    while tuple_count(p, d, n + 1, budget).is_ok() {
        n += 1;
    }
    n
}

struct Enumeration {
    /// Terms reduced mod p, exponents padded to `nvars`.
    terms: Vec<(Vec<u32>, u64)>,
    nvars: usize,
    p: u64,
    n: u32,
}

impl Enumeration {
    fn new(f: &JetPoly, p: u64, n: u32) -> Self {
        let terms: Vec<(Vec<u32>, u64)> = f
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.rem_euclid(p as i64) as u64))
            .filter(|(_, c)| *c != 0)
            .collect();
        Enumeration { terms, nvars: f.nvars, p, n }
    }

    /// Variable orders of the jet encoded in `digits` (var-major layout);
    /// `None` marks the zero jet.
    fn var_order(&self, digits: &[u8], v: usize) -> Option<u32> {
        let len = (self.n + 1) as usize;
        digits[v * len..(v + 1) * len]
            .iter()
            .position(|x| *x != 0)
            .map(|k| k as u32)
    }

    /// Weighted-order lower bound: min over monomials of `sum e_v ord_v`.
    fn min_monomial_order(&self, digits: &[u8]) -> Option<u64> {
        let mut ords: Vec<Option<u32>> = Vec::with_capacity(self.nvars);
        for v in 0..self.nvars {
            ords.push(self.var_order(digits, v));
        }
        let mut best: Option<u64> = None;
        for (exps, _) in &self.terms {
            let mut total: u64 = 0;
            let mut infinite = false;
            for (v, e) in exps.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                match ords[v] {
                    Some(o) => total += u64::from(*e) * u64::from(o),
                    None => {
                        infinite = true;
                        break;
                    }
                }
            }
            if !infinite {
                best = Some(best.map_or(total, |b| b.min(total)));
            }
        }
        best
    }

    /// Honest series evaluation of `f` on the jet, returning the contact
    /// order within `0..=n` (or `None` when everything vanishes mod
    /// `t^{n+1}`).
    fn series_order(&self, digits: &[u8]) -> Option<u32> {
        let len = (self.n + 1) as usize;
        let p = self.p;
        let mut acc = vec![0u64; len];
        for (exps, coeff) in &self.terms {
            let mut series = vec![0u64; len];
            series[0] = *coeff;
            for (v, e) in exps.iter().enumerate() {
                for _ in 0..*e {
                    let jet = &digits[v * len..(v + 1) * len];
                    let mut next = vec![0u64; len];
                    for (i, a) in series.iter().enumerate() {
                        if *a == 0 {
                            continue;
                        }
                        for (j, b) in jet.iter().enumerate() {
                            if i + j >= len {
                                break;
                            }
                            if *b != 0 {
                                next[i + j] = (next[i + j] + a * u64::from(*b)) % p;
                            }
                        }
                    }
                    series = next;
                }
            }
            for i in 0..len {
                acc[i] = (acc[i] + series[i]) % p;
            }
        }
        acc.iter().position(|x| *x != 0).map(|k| k as u32)
    }

    /// Membership test for X_n.
    fn has_exact_order(&self, digits: &[u8]) -> bool {
        let target = u64::from(self.n);
        match self.min_monomial_order(digits) {
            None => false,
            Some(sigma) if sigma > target => false,
            Some(sigma) => {
                if self.terms.len() == 1 {
                    // single monomial: order is exactly the weighted sum
                    sigma == target
                } else {
                    self.series_order(digits) == Some(self.n)
                }
            }
        }
    }

    fn count_range(&self, start: u64, len: u64) -> u64 {
        let width = self.nvars * (self.n + 1) as usize;
        let mut digits = vec![0u8; width];
        // decode the start index as little-endian base-p digits
        let mut rest = start;
        for slot in digits.iter_mut() {
            *slot = (rest % self.p) as u8;
            rest /= self.p;
        }
        let p8 = self.p as u8;
        let mut count = 0u64;
        for step in 0..len {
            if self.has_exact_order(&digits) {
                count += 1;
            }
            if step + 1 < len {
                for d in digits.iter_mut() {
                    *d += 1;
                    if *d < p8 {
                        break;
                    }
                    *d = 0;
                }
            }
        }
        count
    }
}

/// Count level-n jets with contact order exactly `n`, by exhaustive
/// enumeration partitioned into index ranges and summed.
pub fn count_jets(f: &JetPoly, p: u64, n: u32, budget: u64) -> Result<u64> {
    check_prime(p)?;
    let total = tuple_count(p, f.nvars, n, budget)?;
    let en = Enumeration::new(f, p, n);
    if en.terms.is_empty() {
        // f vanishes mod p: infinite order everywhere
        return Ok(0);
    }
    const CHUNK: u64 = 1 << 16;
    let chunks = total.div_ceil(CHUNK);
    let count = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            en.count_range(start, CHUNK.min(total - start))
        })
        .sum();
    Ok(count)
}

/// Same count over an explicit number of partitions; used to demonstrate
/// partition independence.
pub fn count_jets_partitioned(
    f: &JetPoly,
    p: u64,
    n: u32,
    budget: u64,
    partitions: u64,
) -> Result<u64> {
    check_prime(p)?;
    let total = tuple_count(p, f.nvars, n, budget)?;
    let en = Enumeration::new(f, p, n);
    if en.terms.is_empty() {
        return Ok(0);
    }
    let parts = partitions.clamp(1, total.max(1));
    let base = total / parts;
    let mut count = 0;
    let mut start = 0;
    for i in 0..parts {
        let len = base + u64::from(i < total % parts);
        count += en.count_range(start, len);
        start += len;
    }
    Ok(count)
}

pub fn jet_count_table(f: &JetPoly, p: u64, depth: u32, budget: u64) -> Result<JetCountTable> {
    let mut counts = Vec::with_capacity(depth as usize + 1);
    for n in 0..=depth {
        counts.push(count_jets(f, p, n, budget)?);
    }
    Ok(JetCountTable { f: f.clone(), p, counts })
}

/// Normalized jet measure coefficients `c_n = #X_n · p^{-(n+1)d}`.
pub fn igusa_series(f: &JetPoly, p: u64, depth: u32, budget: u64) -> Result<Vec<BigRational>> {
    let table = jet_count_table(f, p, depth, budget)?;
    let d = f.nvars as u32;
    Ok(table
        .counts
        .iter()
        .enumerate()
        .map(|(n, c)| {
            BigRational::new(
                BigInt::from(*c),
                BigInt::from(p).pow((n as u32 + 1) * d),
            )
        })
        .collect())
}

/// Specialize a zeta expression at `L -> p` and symbol point counts, then
/// expand to `T`-depth `depth`. Requires integral data throughout.
pub fn specialize_series(
    z: &ZetaExpr,
    p: u64,
    symbol_counts: &BTreeMap<String, BigRational>,
    depth: u32,
) -> Result<Vec<BigRational>> {
    let (lattice, coeffs) = z.series(depth)?;
    if lattice != 1 {
        return Err(Error::FractionalExponent);
    }
    let l_value = BigRational::from_integer(BigInt::from(p));
    coeffs
        .iter()
        .map(|c| {
            if c.has_fractional_exponents() {
                return Err(Error::FractionalExponent);
            }
            c.substitute(&l_value, symbol_counts)
        })
        .collect()
}

/// Compare the closed-form zeta of a model against brute-force jet counts of
/// `f`, term by term, exactly.
pub fn oracle_check(
    model: &StratifiedModel,
    f: &JetPoly,
    p: u64,
    depth: u32,
    symbol_counts: &BTreeMap<String, BigRational>,
    budget: u64,
) -> Result<bool> {
    let z = crate::engine::compute_naive_zeta(model)?;
    let closed_form = specialize_series(&z, p, symbol_counts, depth)?;
    let counted = igusa_series(f, p, depth, budget)?;
    Ok(closed_form == counted)
}

// ---------------------------------------------------------------------------
// polynomial parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex_poly(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: i64 = text[start..i]
                    .parse()
                    .map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })?;
                out.push((Tok::Num(n), start));
            }
            'a'..='z' => {
                let start = i;
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let idx = if digits_start == i {
                    match c {
                        'x' => 0,
                        'y' => 1,
                        'z' => 2,
                        'w' => 3,
                        other => {
                            return Err(Error::Parse {
                                pos: start,
                                msg: format!("unknown variable {other:?}; use x,y,z,w or x1..xd"),
                            })
                        }
                    }
                } else {
                    if c != 'x' {
                        return Err(Error::Parse {
                            pos: start,
                            msg: "indexed variables must be written x1, x2, ...".into(),
                        });
                    }
                    let k: usize = text[digits_start..i].parse().map_err(|_| Error::Parse {
                        pos: start,
                        msg: "variable index too large".into(),
                    })?;
                    if k == 0 {
                        return Err(Error::Parse { pos: start, msg: "variables start at x1".into() });
                    }
                    k - 1
                };
                out.push((Tok::Var(idx), start));
            }
            _ => return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") }),
        }
    }
    Ok(out)
}

struct PolyParser<'a> {
    tokens: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
}

impl<'a> PolyParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<JetPoly> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t.neg());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<JetPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<JetPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let pos = self.here();
        match self.peek() {
            Some(Tok::Num(e)) if *e >= 0 => {
                let e = (*e)
                    .to_u32()
                    .ok_or_else(|| Error::Parse { pos, msg: "exponent too large".into() })?;
                self.pos += 1;
                Ok(base.pow(e))
            }
            _ => Err(Error::Parse { pos, msg: "expected a nonnegative integer exponent".into() }),
        }
    }

    fn atom(&mut self) -> Result<JetPoly> {
        let pos = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(JetPoly::constant(n))
            }
            Some(Tok::Var(idx)) => {
                self.pos += 1;
                Ok(JetPoly::variable(idx))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() == Some(&Tok::RParen) {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(Error::Parse { pos: self.here(), msg: "expected ')'".into() })
                }
            }
            _ => Err(Error::Parse { pos, msg: "expected integer, variable or '('".into() }),
        }
    }
}

fn parse_poly(text: &str) -> Result<JetPoly> {
    let tokens = lex_poly(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty polynomial".into() });
    }
    let mut p = PolyParser { tokens: &tokens, pos: 0, end: text.len() };
    let poly = p.expr()?;
    if p.pos != tokens.len() {
        return Err(Error::Parse { pos: p.here(), msg: "trailing input".into() });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::{model_from_monomial, orthant_fan, Monomial};
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_monomials_and_sums() {
        let f = JetPoly::parse("x^2*y^3").unwrap();
        assert_eq!(f.nvars(), 2);
        assert_eq!(f.terms(), &[(vec![2, 3], 1)]);
        let g = JetPoly::parse("x^2 + y^3").unwrap();
        assert_eq!(g.terms().len(), 2);
        let h = JetPoly::parse("x1*x2 - 2*x3").unwrap();
        assert_eq!(h.nvars(), 3);
        assert!(JetPoly::parse("q + 1").is_err());
        // (x - y)*(x + y) expands exactly
        let e = JetPoly::parse("(x - y)*(x + y)").unwrap();
        assert_eq!(e, JetPoly::parse("x^2 - y^2").unwrap());
    }

    #[test]
    fn count_f_x_level_three() {
        // ord = 3 forces a0..a2 = 0 and a3 != 0: p - 1 jets
        let f = JetPoly::parse("x").unwrap();
        assert_eq!(count_jets(&f, 5, 3, DEFAULT_BUDGET).unwrap(), 4);
    }

    #[test]
    fn count_f_xy_small_levels() {
        let f = JetPoly::parse("x*y").unwrap();
        assert_eq!(count_jets(&f, 2, 0, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(count_jets(&f, 2, 1, DEFAULT_BUDGET).unwrap(), 4);
    }

    #[test]
    fn count_cusp_small_levels() {
        // x^2 + y^3 over F_2, checked by hand at levels 0 and 1
        let f = JetPoly::parse("x^2 + y^3").unwrap();
        assert_eq!(count_jets(&f, 2, 0, DEFAULT_BUDGET).unwrap(), 2);
        assert_eq!(count_jets(&f, 2, 1, DEFAULT_BUDGET).unwrap(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let f = JetPoly::parse("x").unwrap();
        assert!(matches!(
            count_jets(&f, 2, 40, DEFAULT_BUDGET),
            Err(Error::Budget { .. })
        ));
        assert_eq!(max_depth_for_budget(2, 1, DEFAULT_BUDGET), 25);
        assert_eq!(max_depth_for_budget(2, 2, DEFAULT_BUDGET), 12);
        assert_eq!(max_depth_for_budget(3, 2, DEFAULT_BUDGET), 7);
    }

    #[test]
    fn igusa_series_f_x() {
        let f = JetPoly::parse("x").unwrap();
        let series = igusa_series(&f, 5, 3, DEFAULT_BUDGET).unwrap();
        for (n, c) in series.iter().enumerate() {
            assert_eq!(c, &q(4, 5i64.pow(n as u32 + 1)));
        }
    }

    #[test]
    fn igusa_series_f_xy_at_two() {
        let f = JetPoly::parse("x*y").unwrap();
        let series = igusa_series(&f, 2, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(series[0], q(1, 4));
        assert_eq!(series[1], q(1, 4));
    }

    #[test]
    fn partitioned_counts_agree() {
        let f = JetPoly::parse("x^2*y").unwrap();
        let serial = count_jets_partitioned(&f, 3, 2, DEFAULT_BUDGET, 1).unwrap();
        for parts in [2, 7, 64] {
            assert_eq!(
                count_jets_partitioned(&f, 3, 2, DEFAULT_BUDGET, parts).unwrap(),
                serial
            );
        }
        assert_eq!(count_jets(&f, 3, 2, DEFAULT_BUDGET).unwrap(), serial);
    }

    #[test]
    fn monomial_counts_divisible_by_p_minus_one() {
        // scaling one variable acts freely on X_n for monomial f
        let f = JetPoly::parse("x^2*y^3").unwrap();
        for n in 0..=4 {
            let c = count_jets(&f, 3, n, DEFAULT_BUDGET).unwrap();
            assert_eq!(c % 2, 0, "level {n} count {c}");
        }
    }

    #[test]
    fn specialize_f_x_zeta() {
        let a = Monomial::new(vec![1]).unwrap();
        let model = model_from_monomial(&a, &orthant_fan(1).unwrap()).unwrap();
        let z = crate::engine::compute_naive_zeta(&model).unwrap();
        let series = specialize_series(&z, 5, &BTreeMap::new(), 3).unwrap();
        assert_eq!(series, vec![q(4, 5), q(4, 25), q(4, 125), q(4, 625)]);
    }

    #[test]
    fn oracle_agrees_for_f_x() {
        let a = Monomial::new(vec![1]).unwrap();
        let model = model_from_monomial(&a, &orthant_fan(1).unwrap()).unwrap();
        let f = JetPoly::parse("x").unwrap();
        assert!(oracle_check(&model, &f, 5, 4, &BTreeMap::new(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn oracle_agrees_after_a_subdivision() {
        // the blown-up model specializes to the same jet series
        let a = Monomial::new(vec![2, 3]).unwrap();
        let fan = orthant_fan(2)
            .unwrap()
            .star_subdivide(&[0usize, 1].into_iter().collect())
            .unwrap();
        let model = model_from_monomial(&a, &fan).unwrap();
        let f = JetPoly::parse("x^2*y^3").unwrap();
        assert!(oracle_check(&model, &f, 2, 5, &BTreeMap::new(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn table_counts_stay_within_the_tuple_bound() {
        let f = JetPoly::parse("x^2 + y^3").unwrap();
        let table = jet_count_table(&f, 3, 3, DEFAULT_BUDGET).unwrap();
        for (n, c) in table.counts.iter().enumerate() {
            let bound = 3u64.pow(2 * (n as u32 + 1));
            assert!(*c <= bound);
        }
    }

    #[test]
    fn oracle_rejects_corrupted_model() {
        let a = Monomial::new(vec![2, 3]).unwrap();
        let mut model = model_from_monomial(&a, &orthant_fan(2).unwrap()).unwrap();
        let f = JetPoly::parse("x^2*y^3").unwrap();
        assert!(oracle_check(&model, &f, 2, 4, &BTreeMap::new(), DEFAULT_BUDGET).unwrap());
        model.divisors[0].v += num_rational::Rational64::from_integer(1);
        assert!(!oracle_check(&model, &f, 2, 4, &BTreeMap::new(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn measure_sums_stay_below_one() {
        let f = JetPoly::parse("x*y").unwrap();
        let series = igusa_series(&f, 2, 6, DEFAULT_BUDGET).unwrap();
        let total: BigRational = series.iter().sum();
        assert!(total <= BigRational::one());
    }

    #[test]
    fn nonprime_p_is_rejected() {
        let f = JetPoly::parse("x").unwrap();
        assert!(count_jets(&f, 6, 1, DEFAULT_BUDGET).is_err());
    }
}
