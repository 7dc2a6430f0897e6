//! Elements of `Ω^•_Q[t, t⁻¹][u]` with an optional `dt` factor, and the
//! curved differential `u·d + λ_{t·df} + λ_{f·dt}`.
//!
//! Each term is stored as `ω ∧ dt^ε · t^a · u^b` with `dt` rightmost.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::exactfield::CycloNumber;
use crate::polyforms::{DiffForm, GradedPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedKey {
    pub t: i64,
    pub u: u32,
    pub dt: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedElement {
    nvars: usize,
    terms: BTreeMap<MixedKey, DiffForm>,
}

/// `ω ↦ Σ_S (-1)^{|S|} ω_S`, the sign picked up when `dt` moves past `ω`.
fn parity_sign(w: &DiffForm) -> DiffForm {
    let mut out = DiffForm::zero(w.nvars());
    for (s, p) in w.components() {
        out.add_component(*s, if s.count_ones() % 2 == 0 { p.clone() } else { -p });
    }
    out
}

impl MixedElement {
    pub fn zero(nvars: usize) -> Self {
        MixedElement { nvars, terms: BTreeMap::new() }
    }

    /// `ω ∧ dt^{dt} · t^t · u^u`.
    pub fn term(form: DiffForm, t: i64, u: u32, dt: bool) -> Self {
        let mut x = Self::zero(form.nvars());
        x.add_term(MixedKey { t, u, dt }, form);
        x
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MixedKey, &DiffForm)> {
        self.terms.iter()
    }

    pub fn get(&self, key: MixedKey) -> Option<&DiffForm> {
        self.terms.get(&key)
    }

    /// Number of (monomial, dx-set, key) triples with nonzero coefficient.
    pub fn monomial_count(&self) -> usize {
        self.terms
            .values()
            .flat_map(|w| w.components().map(|(_, p)| p.len()))
            .sum()
    }

    pub fn add_term(&mut self, key: MixedKey, form: DiffForm) {
        if form.is_zero() {
            return;
        }
        assert_eq!(form.nvars(), self.nvars);
        let merged = match self.terms.remove(&key) {
            Some(old) => &old + &form,
            None => form,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    pub fn scale(&self, c: &CycloNumber) -> MixedElement {
        let mut out = Self::zero(self.nvars);
        for (k, w) in &self.terms {
            out.add_term(*k, w.scale(c));
        }
        out
    }

    /// Multiplies by `u^k`.
    pub fn mul_u(&self, k: u32) -> MixedElement {
        MixedElement {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(key, w)| (MixedKey { u: key.u + k, ..*key }, w.clone()))
                .collect(),
        }
    }

    /// De Rham differential in both the `x` variables and `t`.
    pub fn d(&self) -> MixedElement {
        let mut out = Self::zero(self.nvars);
        for (key, w) in &self.terms {
            out.add_term(*key, w.d());
            if !key.dt && key.t != 0 {
                // d(t^a) ∧ ω = a t^{a-1} dt ∧ ω
                let moved = parity_sign(w).scale(&CycloNumber::from_int(key.t));
                out.add_term(MixedKey { t: key.t - 1, dt: true, ..*key }, moved);
            }
        }
        out
    }

    /// Left multiplication by `dw = t·df + f·dt` for `w = f·t`.
    pub fn lambda_dw(&self, f: &GradedPolynomial) -> MixedElement {
        let df = DiffForm::function(f.clone()).d();
        let mut out = Self::zero(self.nvars);
        for (key, w) in &self.terms {
            out.add_term(MixedKey { t: key.t + 1, ..*key }, df.wedge(w));
            if !key.dt {
                out.add_term(MixedKey { dt: true, ..*key }, parity_sign(w).mul_poly(f));
            }
        }
        out
    }

    /// The curved differential `u·d + λ_{d(ft)}`.
    pub fn curved_differential(&self, f: &GradedPolynomial) -> MixedElement {
        &self.d().mul_u(1) + &self.lambda_dw(f)
    }

    /// Γ-degrees `deg(ω) - (a + [dt])·e` of the terms, with `deg(dt) = deg(t) = -e`.
    pub fn gamma_degrees(&self, e: u32) -> Option<BTreeSet<i64>> {
        let mut out = BTreeSet::new();
        for (key, w) in &self.terms {
            let deg = w.internal_degree().ok()?? as i64;
            out.insert(deg - (key.t + key.dt as i64) * e as i64);
        }
        Some(out)
    }

    /// Homological degrees, with `|dx_i| = 1`, `|t| = |u| = -2`, `|dt| = -1`.
    pub fn homological_degrees(&self) -> BTreeSet<i64> {
        let mut out = BTreeSet::new();
        for (key, w) in &self.terms {
            for fd in w.form_degrees() {
                out.insert(fd as i64 - 2 * key.t - 2 * key.u as i64 - key.dt as i64);
            }
        }
        out
    }
}

impl Add for &MixedElement {
    type Output = MixedElement;
    fn add(self, rhs: Self) -> MixedElement {
        let mut out = self.clone();
        for (k, w) in &rhs.terms {
            out.add_term(*k, w.clone());
        }
        out
    }
}

impl Sub for &MixedElement {
    type Output = MixedElement;
    fn sub(self, rhs: Self) -> MixedElement {
        self + &(-rhs)
    }
}

impl Neg for &MixedElement {
    type Output = MixedElement;
    fn neg(self) -> MixedElement {
        MixedElement {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, w)| (*k, -w)).collect(),
        }
    }
}

impl fmt::Display for MixedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (key, w) in &self.terms {
            if !first {
                f.write_str("\n")?;
            }
            first = false;
            write!(f, "t^{}*u^{}*[{}]", key.t, key.u, w)?;
            if key.dt {
                f.write_str("*dt")?;
            }
        }
        Ok(())
    }
}
