//! Univariate rational functions over Q with denominators kept as multisets
//! of monic linear factors `(s - root)`.
//!
//! This is all the topological zeta function needs: its denominators are
//! products of linear forms `N s + v`, and keeping them factored makes pole
//! reading exact and reduction complete (Q[s] is a UFD and linear factors are
//! prime, so trial root evaluation detects every removable factor).

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense polynomial over Q, coefficients ascending by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Self::from_coeffs(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Synthetic division by `(s - root)`; the caller guarantees `root` is a
    /// root, which is asserted by a zero remainder.
    pub fn divide_linear(&self, root: &BigRational) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() - 1];
        let mut carry = BigRational::zero();
        for i in (0..self.coeffs.len()).rev() {
            let value = &self.coeffs[i] + &carry;
            if i == 0 {
                debug_assert!(value.is_zero(), "divide_linear called with a non-root");
                break;
            }
            out[i - 1] = value.clone();
            carry = value * root;
        }
        Self::from_coeffs(out)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if i == 1 {
                    write!(f, "s")?;
                } else {
                    write!(f, "s^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// Fully reduced rational function `num / prod (s - root)^mult`.
///
/// Invariant: the numerator does not vanish at any retained root.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    num: QPoly,
    roots: BTreeMap<BigRational, u32>,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction { num: QPoly::zero(), roots: BTreeMap::new() }
    }

    /// Build `num / prod (s - root)^mult` and reduce.
    pub fn new(num: QPoly, roots: BTreeMap<BigRational, u32>) -> Self {
        let mut rf = RationalFunction { num, roots };
        rf.reduce();
        rf
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.roots.clear();
            return;
        }
        let keys: Vec<BigRational> = self.roots.keys().cloned().collect();
        for root in keys {
            while self.roots.get(&root).copied().unwrap_or(0) > 0
                && self.num.eval(&root).is_zero()
            {
                self.num = self.num.divide_linear(&root);
                let m = self.roots.get_mut(&root).unwrap();
                *m -= 1;
                if *m == 0 {
                    self.roots.remove(&root);
                }
            }
        }
    }

    /// Sum of rational functions over the common (multiset max) denominator,
    /// fully reduced afterwards.
    pub fn sum(parts: &[RationalFunction]) -> Self {
        let mut common: BTreeMap<BigRational, u32> = BTreeMap::new();
        for p in parts {
            for (root, mult) in &p.roots {
                let slot = common.entry(root.clone()).or_insert(0);
                *slot = (*slot).max(*mult);
            }
        }
        let mut num = QPoly::zero();
        for p in parts {
            let mut t = p.num.clone();
            for (root, mult) in &common {
                let missing = mult - p.roots.get(root).copied().unwrap_or(0);
                for _ in 0..missing {
                    t = t.mul(&QPoly::from_coeffs(vec![-root.clone(), BigRational::one()]));
                }
            }
            num = num.add(&t);
        }
        Self::new(num, common)
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    /// Poles with multiplicities, straight off the reduced denominator.
    pub fn poles(&self) -> &BTreeMap<BigRational, u32> {
        &self.roots
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let mut den = BigRational::one();
        for (root, mult) in &self.roots {
            let factor = x - root;
            if factor.is_zero() {
                return None;
            }
            for _ in 0..*mult {
                den *= &factor;
            }
        }
        Some(self.num.eval(x) / den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.roots.is_empty() {
            return write!(f, "{}", self.num);
        }
        // Clear root denominators for display: (s + 5/6) prints as (6s + 5)/6.
        let mut scale = BigRational::one();
        let mut factors = Vec::new();
        for (root, mult) in &self.roots {
            let den = BigRational::from_integer(root.denom().clone());
            for _ in 0..*mult {
                scale *= &den;
                let lin = QPoly::from_coeffs(vec![-root.clone(), BigRational::one()]).scale(&den);
                factors.push(format!("({lin})"));
            }
        }
        let num = self.num.scale(&scale);
        write!(f, "({}) / [{}]", num, factors.join(""))
    }
}
