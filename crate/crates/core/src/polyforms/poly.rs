use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exactfield::CycloNumber;

use super::PolyError;

/// Exponent vector of a monomial. Ordered lexicographically on the exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Graded-lex comparison: higher total degree first, then lex with x0 > x1 > ….
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }

    /// All monomials of total degree `d` in `nvars` variables, in descending lex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(left);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(nvars, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{i}")),
                _ => parts.push(format!("x{i}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Polynomial in `x0..x{nvars-1}` with cyclotomic coefficients; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, CycloNumber>,
}

impl GradedPolynomial {
    pub fn zero(nvars: usize) -> Self {
        GradedPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: CycloNumber) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, CycloNumber::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), CycloNumber::one())
    }

    pub fn term(m: Monomial, c: CycloNumber) -> Self {
        let nvars = m.nvars();
        let mut p = Self::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, CycloNumber)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycloNumber)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> CycloNumber {
        self.terms.get(m).cloned().unwrap_or_else(CycloNumber::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: CycloNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree when homogeneous; `Ok(None)` for zero.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>, PolyError> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let Some(first) = degs.next() else {
            return Ok(None);
        };
        if degs.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(PolyError::NonHomogeneous)
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_ok()
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, GradedPolynomial> {
        let mut out: BTreeMap<u32, GradedPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(self.nvars))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Variables that occur with a nonzero exponent.
    pub fn support_vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    /// Highest ζ-order among the coefficients (lcm of all orders).
    pub fn coefficient_order(&self) -> u32 {
        self.terms
            .values()
            .map(CycloNumber::order)
            .fold(1, num_integer::lcm)
    }

    pub fn partial(&self, i: usize) -> Result<GradedPolynomial, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::VariableOutOfRange { index: i, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * &CycloNumber::from_int(e as i64));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CycloNumber) -> GradedPolynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        GradedPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> GradedPolynomial {
        GradedPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    pub fn mul_var(&self, i: usize) -> GradedPolynomial {
        self.mul_monomial(&Monomial::var(self.nvars, i))
    }

    pub fn pow(&self, k: u32) -> GradedPolynomial {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Renames variable `i` to `var_map[i]` in a ring with `nvars` variables.
    pub fn relabel(&self, var_map: &[usize], nvars: usize) -> Result<GradedPolynomial, PolyError> {
        if var_map.len() != self.nvars {
            return Err(PolyError::NvarsMismatch { left: var_map.len(), right: self.nvars });
        }
        if let Some(&bad) = var_map.iter().find(|&&v| v >= nvars) {
            return Err(PolyError::VariableOutOfRange { index: bad, nvars });
        }
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[var_map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &GradedPolynomial) -> Option<GradedPolynomial> {
        self.check_nvars(divisor);
        let (lead_m, lead_c) = divisor.grlex_terms().into_iter().next()?;
        let (lead_m, lead_inv) = (lead_m.clone(), lead_c.inverse().ok()?);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.grlex_terms().into_iter().next() {
            let mut e = Vec::with_capacity(self.nvars);
            for (a, b) in m.0.iter().zip(&lead_m.0) {
                e.push(a.checked_sub(*b)?);
            }
            let t = GradedPolynomial::term(Monomial(e), c * &lead_inv);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Terms in graded-lex order, highest first.
    pub fn grlex_terms(&self) -> Vec<(&Monomial, &CycloNumber)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }

    fn check_nvars(&self, other: &Self) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials over different variable counts"
        );
    }
}

impl Add for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(self, rhs: Self) -> GradedPolynomial {
        self.check_nvars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: Self) -> GradedPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        GradedPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: Self) -> GradedPolynomial {
        self.check_nvars(rhs);
        let mut out = GradedPolynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for GradedPolynomial {
            type Output = GradedPolynomial;
            fn $f(self, rhs: Self) -> GradedPolynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        -&self
    }
}

/// Sign and unsigned body of a coefficient-times-monomial term.
fn term_parts(c: &CycloNumber, m: &Monomial) -> (bool, String) {
    let coords = c.to_rational_coords();
    let nonzero = coords.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count();
    let mono = if m.is_one() { None } else { Some(m.to_string()) };
    if nonzero == 1 {
        let neg = coords.iter().any(num_traits::Signed::is_negative);
        let mag = if neg { (-c).to_string() } else { c.to_string() };
        let body = match mono {
            None => mag,
            Some(ms) if mag == "1" => ms,
            Some(ms) => format!("{mag}*{ms}"),
        };
        (neg, body)
    } else {
        let body = match mono {
            None => format!("({c})"),
            Some(ms) => format!("({c})*{ms}"),
        };
        (false, body)
    }
}

impl fmt::Display for GradedPolynomial {
    /// Canonical form: graded-lex term order, explicit `zeta{m}` literals.
    /// The output parses back to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (m, c) in self.grlex_terms() {
            let (neg, body) = term_parts(c, m);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            out.push_str(&body);
        }
        f.write_str(&out)
    }
}
