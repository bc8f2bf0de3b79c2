//! Canonical-form symbolic expressions.
//!
//! An [`Expr`] is a finite sum of terms `c · e^{k·x₃} · m`, where `c` is an
//! exact rational, `k` an integer exponential weight and `m` a monomial in
//! abstract function symbols of one variable (`a`, `a'`, `b''`, ...). The ring
//! is closed under addition, multiplication and `d/dx₃`, and two expressions
//! are equal iff their canonical term maps are identical, so the zero test is
//! exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational coefficient (arbitrary precision, always reduced, positive
/// denominator).
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rational constants.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A function symbol differentiated `order` times: `FuncAtom::new("b", 2)` is
/// `b''`. Atoms are totally ordered by `(base, order)` for canonicalization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncAtom {
    pub base: String,
    pub order: u32,
}

impl FuncAtom {
    pub fn new(base: impl Into<String>, order: u32) -> Self {
        FuncAtom {
            base: base.into(),
            order,
        }
    }
}

impl fmt::Display for FuncAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for _ in 0..self.order {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// Sorted multiset of function atoms with positive integer powers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(FuncAtom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atom(a: FuncAtom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn factors(&self) -> &[(FuncAtom, u32)] {
        &self.0
    }

    /// Merge-multiply two sorted factor lists.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(FuncAtom, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    fn from_factors(mut factors: Vec<(FuncAtom, u32)>) -> Monomial {
        factors.retain(|(_, p)| *p > 0);
        factors.sort_by(|x, y| x.0.cmp(&y.0));
        let mut merged: Vec<(FuncAtom, u32)> = Vec::with_capacity(factors.len());
        for (atom, pow) in factors {
            match merged.last_mut() {
                Some((last, p)) if *last == atom => *p += pow,
                _ => merged.push((atom, pow)),
            }
        }
        Monomial(merged)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (atom, pow) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{atom}")?;
            if *pow > 1 {
                write!(f, "^{pow}")?;
            }
        }
        Ok(())
    }
}

/// Term key: exponential weight first, then monomial, so printed output is
/// sorted by weight and the map order is canonical.
pub type TermKey = (i64, Monomial);

/// Canonical sum of terms. No zero coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expr {
    terms: BTreeMap<TermKey, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::from_rational(Rational::one())
    }

    pub fn from_rational(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, Monomial::one()), c);
        }
        Expr { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Expr::from_rational(rat(n, 1))
    }

    /// `e^{k·x₃}`.
    pub fn exp_weight(k: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((k, Monomial::one()), Rational::one());
        Expr { terms }
    }

    /// A bare function symbol such as `a` or `b'`.
    pub fn func(base: impl Into<String>, order: u32) -> Self {
        Expr::term(Rational::one(), 0, Monomial::atom(FuncAtom::new(base, order)))
    }

    pub fn term(coeff: Rational, exp_weight: i64, monomial: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((exp_weight, monomial), coeff);
        }
        Expr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Rational)> {
        self.terms.iter()
    }

    /// The expression as an exact rational constant, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let ((w, m), c) = self.terms.iter().next().unwrap();
            if *w == 0 && m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    /// First term in canonical order, if any. Used as a deterministic
    /// reference for proportionality tests.
    pub fn leading(&self) -> Option<(&TermKey, &Rational)> {
        self.terms.iter().next()
    }

    fn insert_term(&mut self, key: TermKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let mut out = self.clone();
        for (key, coeff) in &other.terms {
            out.insert_term(key.clone(), coeff.clone());
        }
        out
    }

    pub fn neg(&self) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        let mut out = Expr::zero();
        for ((w1, m1), c1) in &self.terms {
            for ((w2, m2), c2) in &other.terms {
                out.insert_term((w1 + w2, m1.mul(m2)), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(k, c0)| (k.clone(), c0 * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut out = Expr::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// `d/dx₃`: `d(e^{k·x₃}) = k·e^{k·x₃}`, `d f^{(m)} = f^{(m+1)}`, Leibniz
    /// over monomials, linear over terms.
    pub fn differentiate(&self) -> Expr {
        let mut out = Expr::zero();
        for ((w, m), c) in &self.terms {
            // exponential factor
            if *w != 0 {
                out.insert_term((*w, m.clone()), c * rat(*w, 1));
            }
            // Leibniz over the monomial factors
            for (idx, (atom, pow)) in m.factors().iter().enumerate() {
                let mut factors: Vec<(FuncAtom, u32)> = m.factors().to_vec();
                factors[idx].1 -= 1;
                factors.push((FuncAtom::new(atom.base.clone(), atom.order + 1), 1));
                let dm = Monomial::from_factors(factors);
                out.insert_term((*w, dm), c * rat(*pow as i64, 1));
            }
        }
        out
    }

    /// Numeric evaluation at `x3`. `funcs` supplies a value for every
    /// `(base, order)` appearing in the expression.
    pub fn evaluate(
        &self,
        x3: f64,
        funcs: &dyn Fn(&str, u32) -> Option<f64>,
    ) -> Result<f64, EvalError> {
        let mut total = 0.0;
        for ((w, m), c) in &self.terms {
            let mut v = c.to_f64().ok_or(EvalError::CoefficientOverflow)?;
            v *= (*w as f64 * x3).exp();
            for (atom, pow) in m.factors() {
                let fv = funcs(&atom.base, atom.order).ok_or_else(|| EvalError::MissingFunction {
                    base: atom.base.clone(),
                    order: atom.order,
                })?;
                v *= fv.powi(*pow as i32);
            }
            total += v;
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no value supplied for function `{base}` of derivative order {order}")]
    MissingFunction { base: String, order: u32 },
    #[error("rational coefficient does not fit in f64")]
    CoefficientOverflow,
}

impl fmt::Display for Expr {
    /// Canonical DSL form: terms sorted by exponential weight then monomial;
    /// parses back to the identical expression.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((w, m), c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;

            let c_abs = c.abs();
            let mut pieces: Vec<String> = Vec::new();
            if !c_abs.is_one() || (*w == 0 && m.is_one()) {
                pieces.push(c_abs.to_string());
            }
            if *w != 0 {
                pieces.push(format!("exp({w}*x3)"));
            }
            if !m.is_one() {
                pieces.push(m.to_string());
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

impl std::ops::Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl std::ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl std::ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}
