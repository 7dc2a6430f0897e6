use num_bigint::BigInt;

use crate::exactfield::{CycloNumber, Rational};
use crate::milnor::MilnorAlgebra;
use crate::polyforms::{DiffForm, GradedPolynomial};

use super::{HodgeError, MixedElement};

fn factorial(k: i64) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * i)
}

/// `(-1)^j / j!` as a field element.
fn sign_over_factorial(j: i64) -> CycloNumber {
    let sign = if j % 2 == 0 { 1 } else { -1 };
    CycloNumber::from_rational(Rational::new(BigInt::from(sign), factorial(j)))
}

fn check_nvars(m: &MilnorAlgebra, nvars: usize) -> Result<(), HodgeError> {
    if nvars != m.nvars() {
        return Err(HodgeError::NvarsMismatch { expected: m.nvars(), found: nvars });
    }
    Ok(())
}

/// Checks `deg q = je - (n+2)` for nonzero `q`.
fn check_top_degree(m: &MilnorAlgebra, q: &GradedPolynomial, j: i64) -> Result<(), HodgeError> {
    let expected = j * m.e() as i64 - m.nvars() as i64;
    match q.homogeneous_degree()? {
        None => Ok(()),
        Some(found) if found as i64 == expected => Ok(()),
        Some(found) => Err(HodgeError::DegreeMismatch { expected, found }),
    }
}

fn u_exponent(m: &MilnorAlgebra, deg: i64, j: i64) -> Result<u32, HodgeError> {
    let k = m.nvars() as i64 / 2 - deg - j;
    if k < 0 {
        return Err(HodgeError::NegativeUExponent(k));
    }
    Ok(k as u32)
}

/// `ψ_{m,j}(q·vol) = ((-1)^j / j!) · d(ε(q·vol) t^j) · u^{(n+2)/2 - m - j}`.
///
/// `q` must be zero or homogeneous of degree `je - (n+2)`. The zero
/// polynomial maps to zero for every `j`.
pub fn psi(m: &MilnorAlgebra, q: &GradedPolynomial, j: i64, deg: i64) -> Result<MixedElement, HodgeError> {
    check_nvars(m, q.nvars())?;
    if q.is_zero() {
        return Ok(MixedElement::zero(m.nvars()));
    }
    check_top_degree(m, q, j)?;
    let k = u_exponent(m, deg, j)?;
    let alpha = DiffForm::top(q.clone()).euler_contract();
    Ok(MixedElement::term(alpha, j, 0, false)
        .d()
        .scale(&sign_over_factorial(j))
        .mul_u(k))
}

/// The same class written without the differential:
/// `((-1)^j e / (j-1)!) · (ω t^j - (ε(ω)/e) t^{j-1} dt) · u^{(n+2)/2 - m - j}`.
pub fn psi_expanded(m: &MilnorAlgebra, q: &GradedPolynomial, j: i64, deg: i64) -> Result<MixedElement, HodgeError> {
    check_nvars(m, q.nvars())?;
    if q.is_zero() {
        return Ok(MixedElement::zero(m.nvars()));
    }
    check_top_degree(m, q, j)?;
    let k = u_exponent(m, deg, j)?;
    let e = m.e() as i64;
    let sign = if j % 2 == 0 { 1 } else { -1 };
    let c = CycloNumber::from_rational(Rational::new(BigInt::from(sign * e), factorial(j - 1)));
    let omega = DiffForm::top(q.clone());
    let eps = omega.euler_contract().scale(&CycloNumber::from_fraction(-1, e));
    let x = &MixedElement::term(omega, j, 0, false) + &MixedElement::term(eps, j - 1, 0, true);
    Ok(x.scale(&c).mul_u(k))
}

/// Image of `q·vol` under φ: the numerator `ε(q·vol)` of `ε(q·vol)/f^j · u^{n/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarClass {
    pub numerator: DiffForm,
    pub pole_order: i64,
}

impl PolarClass {
    /// `f·d(numerator) = j·df ∧ numerator`, the input condition of [`boundary_devissage`].
    pub fn precondition_holds(&self, m: &MilnorAlgebra) -> bool {
        precondition(m.f(), &self.numerator, self.pole_order)
    }
}

fn precondition(f: &GradedPolynomial, alpha: &DiffForm, s: i64) -> bool {
    let lhs = alpha.d().mul_poly(f);
    let df = DiffForm::function(f.clone()).d();
    let rhs = df.wedge(alpha).scale(&CycloNumber::from_int(s));
    lhs == rhs
}

pub fn phi(m: &MilnorAlgebra, q: &GradedPolynomial, j: i64) -> Result<PolarClass, HodgeError> {
    check_nvars(m, q.nvars())?;
    if j <= 0 {
        return Err(HodgeError::NonPositivePoleOrder(j));
    }
    if j * (m.e() as i64) < m.nvars() as i64 {
        return Err(HodgeError::EmptyGradedPiece(j));
    }
    check_top_degree(m, q, j)?;
    Ok(PolarClass {
        numerator: DiffForm::top(q.clone()).euler_contract(),
        pole_order: j,
    })
}

/// Boundary of `α/f^s · u^{(p-1)/2}`: `((-1)^s / s!) · d(α t^s) · u^{(p+1)/2 - s}`.
pub fn boundary_devissage(m: &MilnorAlgebra, alpha: &DiffForm, s: i64, p: u32) -> Result<MixedElement, HodgeError> {
    check_nvars(m, alpha.nvars())?;
    if s <= 0 {
        return Err(HodgeError::NonPositivePoleOrder(s));
    }
    if p.is_multiple_of(2) {
        return Err(HodgeError::EvenFormDegree(p));
    }
    let k = (p as i64 + 1) / 2 - s;
    if k < 0 {
        return Err(HodgeError::NegativeUExponent(k));
    }
    if alpha.is_zero() {
        return Ok(MixedElement::zero(m.nvars()));
    }
    match alpha.form_degree() {
        Ok(Some(fd)) if fd == p => {}
        _ => return Err(HodgeError::FormDegreeMismatch(p)),
    }
    alpha.internal_degree()?;
    if !precondition(m.f(), alpha, s) {
        return Err(HodgeError::PreconditionFailed);
    }
    Ok(MixedElement::term(alpha.clone(), s, 0, false)
        .d()
        .scale(&sign_over_factorial(s))
        .mul_u(k as u32))
}

/// Whether `x` is annihilated by `u·d + λ_{t·df} + λ_{f·dt}`.
pub fn cycle_check(x: &MixedElement, m: &MilnorAlgebra) -> bool {
    x.nvars() == m.nvars() && x.curved_differential(m.f()).is_zero()
}
