//! Exact arithmetic over ℚ and the cyclotomic fields ℚ(ζ_m).
//!
//! An element of ℚ(ζ_m) is stored by its coordinates in the power basis
//! `1, ζ, …, ζ^{φ(m)-1}` modulo the cyclotomic polynomial Φ_m. Values of
//! different orders are combined by lifting both to the least common
//! multiple of their orders, using `ζ_m = ζ_N^{N/m}`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Default bound on the order of any cyclotomic field an operation may touch.
pub const DEFAULT_MAX_ORDER: u32 = 120;

static MAX_ORDER: AtomicU32 = AtomicU32::new(DEFAULT_MAX_ORDER);

/// Current bound on cyclotomic orders.
pub fn max_cyclotomic_order() -> u32 {
    MAX_ORDER.load(Ordering::Relaxed)
}

/// Changes the process-wide bound on cyclotomic orders.
pub fn set_max_cyclotomic_order(bound: u32) {
    MAX_ORDER.store(bound.max(1), Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order {order} exceeds the configured bound {bound}")]
    OrderTooLarge { order: u64, bound: u32 },
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
}

/// Reduction data for one cyclotomic order.
#[derive(Debug)]
struct CycloTable {
    phi: usize,
    /// `powers[k]` holds the power-basis coordinates of ζ^k for `0 <= k < m`.
    powers: Vec<Vec<BigInt>>,
}

fn table_cache() -> &'static Mutex<HashMap<u32, Arc<CycloTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn table(order: u32) -> Arc<CycloTable> {
    if let Some(t) = table_cache().lock().unwrap().get(&order) {
        return t.clone();
    }
    let built = Arc::new(build_table(order));
    table_cache()
        .lock()
        .unwrap()
        .entry(order)
        .or_insert(built)
        .clone()
}

/// Integer coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_polynomial(order: u32) -> Vec<BigInt> {
    assert!(order > 0);
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); order as usize + 1];
    num[0] = BigInt::from(-1);
    num[order as usize] = BigInt::one();
    for d in 1..order {
        if order.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn build_table(order: u32) -> CycloTable {
    let phi_poly = cyclotomic_polynomial(order);
    let phi = phi_poly.len() - 1;
    let mut powers = Vec::with_capacity(order as usize);
    let mut cur = vec![BigInt::zero(); phi];
    cur[0] = BigInt::one();
    for _ in 0..order {
        powers.push(cur.clone());
        // multiply by x and reduce x^phi = -(Φ - x^phi)
        let top = cur[phi - 1].clone();
        let mut next = vec![BigInt::zero(); phi];
        next[1..phi].clone_from_slice(&cur[..(phi - 1)]);
        if !top.is_zero() {
            for (i, c) in phi_poly.iter().take(phi).enumerate() {
                next[i] -= &top * c;
            }
        }
        cur = next;
    }
    CycloTable { phi, powers }
}

/// Euler's totient.
pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn check_order(order: u64) -> Result<u32, FieldError> {
    let bound = max_cyclotomic_order();
    if order == 0 {
        return Err(FieldError::ZeroOrder);
    }
    if order > bound as u64 {
        return Err(FieldError::OrderTooLarge { order, bound });
    }
    Ok(order as u32)
}

/// Element of ℚ(ζ_m) in the power basis.
#[derive(Clone, Debug)]
pub struct CycloNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycloNumber { order: 1, coeffs: vec![r] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// ζ_m^k.
    pub fn zeta_pow(order: u32, k: i64) -> Result<Self, FieldError> {
        let order = check_order(order as u64)?;
        let t = table(order);
        let k = k.rem_euclid(order as i64) as usize;
        let coeffs = t.powers[k]
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        Ok(CycloNumber { order, coeffs })
    }

    /// The primitive root ζ_m = e^{2πi/m}.
    pub fn zeta(order: u32) -> Result<Self, FieldError> {
        Self::zeta_pow(order, 1)
    }

    /// ζ_4, used for `i`.
    pub fn i() -> Self {
        Self::zeta(4).expect("order 4 is always allowed")
    }

    /// Builds an element from power-basis coordinates of length φ(m).
    pub fn from_coords(order: u32, coeffs: Vec<Rational>) -> Result<Self, FieldError> {
        let order = check_order(order as u64)?;
        assert_eq!(coeffs.len(), euler_phi(order), "coordinate length must be φ(m)");
        Ok(CycloNumber { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Coordinates in the power basis of ℚ(ζ_m); length φ(m).
    pub fn to_rational_coords(&self) -> Vec<Rational> {
        self.coeffs.clone()
    }

    /// Re-expresses the value in ℚ(ζ_target); `target` must be a multiple of the order.
    pub fn lift_to(&self, target: u32) -> Result<Self, FieldError> {
        if target == self.order {
            return Ok(self.clone());
        }
        assert!(target.is_multiple_of(self.order), "lift target must be a multiple of the order");
        let target = check_order(target as u64)?;
        Ok(self.lift_unchecked(target))
    }

    fn lift_unchecked(&self, target: u32) -> Self {
        if target == self.order {
            return self.clone();
        }
        let t = table(target);
        let step = (target / self.order) as usize;
        let mut out = vec![Rational::zero(); t.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&t.powers[k * step]) {
                if !p.is_zero() {
                    *o += c * Rational::from_integer(p.clone());
                }
            }
        }
        CycloNumber { order: target, coeffs: out }
    }

    fn common_order(&self, other: &Self) -> Result<u32, FieldError> {
        if self.order == other.order {
            return Ok(self.order);
        }
        check_order(self.order.lcm(&other.order) as u64)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        let m = self.common_order(other)?;
        let a = self.lift_unchecked(m);
        let b = other.lift_unchecked(m);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(CycloNumber { order: m, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        if self.order == 1 && other.order == 1 {
            return Ok(Self::from_rational(&self.coeffs[0] * &other.coeffs[0]));
        }
        if other.order == 1 {
            return Ok(self.scale(&other.coeffs[0]));
        }
        if self.order == 1 {
            return Ok(other.scale(&self.coeffs[0]));
        }
        let m = self.common_order(other)?;
        let a = self.lift_unchecked(m);
        let b = other.lift_unchecked(m);
        let t = table(m);
        let mu = m as usize;
        let mut acc = vec![Rational::zero(); mu];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    acc[(i + j) % mu] += x * y;
                }
            }
        }
        let mut out = vec![Rational::zero(); t.phi];
        for (k, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&t.powers[k]) {
                if !p.is_zero() {
                    *o += c * Rational::from_integer(p.clone());
                }
            }
        }
        Ok(CycloNumber { order: m, coeffs: out })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    /// Multiplicative inverse, by solving the linear system of multiplication-by-self.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycloNumber {
                order: self.order,
                coeffs: {
                    let mut c = vec![Rational::zero(); self.coeffs.len()];
                    c[0] = r.recip();
                    c
                },
            });
        }
        let phi = self.coeffs.len();
        // column j of the matrix is self * ζ^j
        let mut mat: Vec<Vec<Rational>> = vec![vec![Rational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.checked_mul(&Self::zeta_pow(self.order, j as i64)?)?;
            for (i, c) in col.coeffs.into_iter().enumerate() {
                mat[i][j] = c;
            }
        }
        mat[0][phi] = Rational::one();
        let sol = solve_square(mat).ok_or(FieldError::DivisionByZero)?;
        Ok(CycloNumber { order: self.order, coeffs: sol })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

/// Gauss-Jordan on an augmented `n x (n+1)` system.
fn solve_square(mut mat: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = mat.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, piv);
        let inv = mat[col][col].recip();
        for v in mat[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &mat[col][c];
                    mat[r][c] -= delta;
                }
            }
        }
    }
    Some(mat.into_iter().map(|row| row[n].clone()).collect())
}

/// Binary field operation selector for [`cyclo_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn cyclo_arith(a: &CycloNumber, b: &CycloNumber, op: ArithOp) -> Result<CycloNumber, FieldError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let m = self.order.lcm(&other.order);
        self.lift_unchecked(m).coeffs == other.lift_unchecked(m).coeffs
    }
}

impl Eq for CycloNumber {}

impl From<i64> for CycloNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for CycloNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

// The operator impls panic if the combined order exceeds the configured
// bound; use the `checked_*` methods where that must be reported.
impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: Self) -> CycloNumber {
        self.checked_add(rhs).expect("cyclotomic addition")
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: Self) -> CycloNumber {
        self.checked_sub(rhs).expect("cyclotomic subtraction")
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: Self) -> CycloNumber {
        self.checked_mul(rhs).expect("cyclotomic multiplication")
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: Self) -> CycloNumber {
        &self + &rhs
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: Self) -> CycloNumber {
        &self - &rhs
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: Self) -> CycloNumber {
        &self * &rhs
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycloNumber {
    /// Canonical literal form: `3`, `-1/2`, `zeta3`, `1+2*zeta12^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = match k {
                0 => String::new(),
                1 => format!("zeta{}", self.order),
                _ => format!("zeta{}^{}", self.order, k),
            };
            let neg = c.is_negative();
            let mag = fmt_rational(&c.abs());
            let body = if k == 0 {
                mag
            } else if c.abs().is_one() {
                basis
            } else {
                format!("{mag}*{basis}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}
