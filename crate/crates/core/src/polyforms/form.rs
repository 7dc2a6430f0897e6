use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::exactfield::CycloNumber;

use super::poly::GradedPolynomial;
use super::PolyError;

/// Largest supported variable count for differential forms.
pub const MAX_FORM_VARS: usize = 32;

/// Subset of `{0..nvars-1}` as a bit mask; `dx_S` is the ascending wedge of its members.
pub type IndexSet = u32;

pub fn index_set(indices: &[usize]) -> IndexSet {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn indices_of(set: IndexSet) -> Vec<usize> {
    (0..MAX_FORM_VARS).filter(|&i| set & (1 << i) != 0).collect()
}

/// Sign of `dx_S ∧ dx_T` relative to `dx_{S∪T}`; zero when they overlap.
pub fn wedge_sign(s: IndexSet, t: IndexSet) -> i32 {
    if s & t != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    for j in indices_of(t) {
        swaps += s.checked_shr(j as u32 + 1).unwrap_or(0).count_ones();
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Element of the exterior algebra Ω^•_Q with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    nvars: usize,
    components: BTreeMap<IndexSet, GradedPolynomial>,
}

impl DiffForm {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_FORM_VARS, "at most {MAX_FORM_VARS} variables");
        DiffForm { nvars, components: BTreeMap::new() }
    }

    /// `coeff · dx_S`.
    pub fn component(set: IndexSet, coeff: GradedPolynomial) -> Self {
        let mut f = Self::zero(coeff.nvars());
        assert!(f.nvars == MAX_FORM_VARS || set >> f.nvars == 0, "index set out of range");
        f.add_component(set, coeff);
        f
    }

    /// A 0-form.
    pub fn function(p: GradedPolynomial) -> Self {
        Self::component(0, p)
    }

    pub fn dx(nvars: usize, i: usize) -> Self {
        Self::component(1 << i, GradedPolynomial::one(nvars))
    }

    /// `dx_0 ∧ … ∧ dx_{nvars-1}`.
    pub fn volume_set(nvars: usize) -> IndexSet {
        if nvars == MAX_FORM_VARS {
            u32::MAX
        } else {
            (1u32 << nvars) - 1
        }
    }

    /// `q · dx_0 ∧ … ∧ dx_{nvars-1}`.
    pub fn top(q: GradedPolynomial) -> Self {
        let set = Self::volume_set(q.nvars());
        Self::component(set, q)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&IndexSet, &GradedPolynomial)> {
        self.components.iter()
    }

    pub fn coefficient(&self, set: IndexSet) -> GradedPolynomial {
        self.components
            .get(&set)
            .cloned()
            .unwrap_or_else(|| GradedPolynomial::zero(self.nvars))
    }

    /// Coefficient of the volume form.
    pub fn top_coefficient(&self) -> GradedPolynomial {
        self.coefficient(Self::volume_set(self.nvars))
    }

    pub fn add_component(&mut self, set: IndexSet, coeff: GradedPolynomial) {
        if coeff.is_zero() {
            return;
        }
        assert_eq!(coeff.nvars(), self.nvars);
        match self.components.entry(set) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Form degrees present, ascending.
    pub fn form_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.components.keys().map(|s| s.count_ones()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The single form degree of a nonzero form of pure degree.
    pub fn form_degree(&self) -> Result<Option<u32>, PolyError> {
        match self.form_degrees().as_slice() {
            [] => Ok(None),
            [d] => Ok(Some(*d)),
            _ => Err(PolyError::MixedFormDegree),
        }
    }

    /// Internal degree `deg(coefficient) + |S|`, required to be constant.
    pub fn internal_degree(&self) -> Result<Option<u32>, PolyError> {
        let mut found = None;
        for (s, p) in &self.components {
            let d = p.homogeneous_degree()?.expect("components are nonzero") + s.count_ones();
            match found {
                None => found = Some(d),
                Some(x) if x != d => return Err(PolyError::NonHomogeneous),
                _ => {}
            }
        }
        Ok(found)
    }

    pub fn scale(&self, c: &CycloNumber) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars);
        for (s, p) in &self.components {
            out.add_component(*s, p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, g: &GradedPolynomial) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars);
        for (s, p) in &self.components {
            out.add_component(*s, p * g);
        }
        out
    }

    pub fn try_wedge(&self, other: &DiffForm) -> Result<DiffForm, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        let mut out = DiffForm::zero(self.nvars);
        for (s, p) in &self.components {
            for (t, q) in &other.components {
                let sign = wedge_sign(*s, *t);
                if sign == 0 {
                    continue;
                }
                let prod = p * q;
                out.add_component(s | t, if sign < 0 { -prod } else { prod });
            }
        }
        Ok(out)
    }

    /// Exterior product; panics on mismatched variable counts.
    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        self.try_wedge(other).expect("wedge of forms over different variable counts")
    }

    /// De Rham differential.
    pub fn d(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars);
        for (s, p) in &self.components {
            for i in 0..self.nvars {
                if s & (1 << i) != 0 {
                    continue;
                }
                let dp = p.partial(i).expect("index in range");
                if dp.is_zero() {
                    continue;
                }
                // dx_i ∧ dx_S: move dx_i past the members of S below i
                let below = (s & ((1u32 << i) - 1)).count_ones();
                out.add_component(s | (1 << i), if below.is_multiple_of(2) { dp } else { -dp });
            }
        }
        out
    }

    /// Contraction with the Euler vector field `Σ x_i ∂/∂x_i`.
    pub fn euler_contract(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars);
        for (s, p) in &self.components {
            for (pos, j) in indices_of(*s).into_iter().enumerate() {
                let term = p.mul_var(j);
                out.add_component(s & !(1 << j), if pos % 2 == 0 { term } else { -term });
            }
        }
        out
    }

    /// Renames variables as in [`GradedPolynomial::relabel`], re-sorting the `dx` factors.
    pub fn relabel(&self, var_map: &[usize], nvars: usize) -> Result<DiffForm, PolyError> {
        let mut out = DiffForm::zero(nvars);
        for (s, p) in &self.components {
            let q = p.relabel(var_map, nvars)?;
            let targets: Vec<usize> = indices_of(*s).into_iter().map(|i| var_map[i]).collect();
            let mut acc: IndexSet = 0;
            let mut sign = 1;
            for t in targets {
                sign *= wedge_sign(acc, 1 << t);
                acc |= 1 << t;
            }
            if sign == 0 {
                continue;
            }
            out.add_component(acc, if sign < 0 { -q } else { q });
        }
        Ok(out)
    }
}

impl Add for &DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: Self) -> DiffForm {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (s, p) in &rhs.components {
            out.add_component(*s, p.clone());
        }
        out
    }
}

impl Sub for &DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: Self) -> DiffForm {
        self + &(-rhs)
    }
}

impl Neg for &DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        DiffForm {
            nvars: self.nvars,
            components: self.components.iter().map(|(s, p)| (*s, -p)).collect(),
        }
    }
}

pub(crate) fn dx_string(set: IndexSet) -> String {
    indices_of(set).into_iter().map(|i| format!("dx{i}")).collect()
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut sets: Vec<&IndexSet> = self.components.keys().collect();
        sets.sort_by_key(|s| (s.count_ones(), indices_of(**s)));
        let parts: Vec<String> = sets
            .into_iter()
            .map(|s| {
                let p = &self.components[s];
                if *s == 0 {
                    format!("({p})")
                } else {
                    format!("({p})*{}", dx_string(*s))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyforms::poly_parse;
    use proptest::prelude::*;

    fn p(s: &str, n: usize) -> GradedPolynomial {
        poly_parse(s, n).unwrap()
    }

    #[test]
    fn wedge_antisymmetry() {
        let dx0 = DiffForm::dx(2, 0);
        let dx1 = DiffForm::dx(2, 1);
        let vol = DiffForm::top(GradedPolynomial::one(2));
        assert_eq!(dx0.wedge(&dx1), vol);
        assert_eq!(dx1.wedge(&dx0), -&vol);
        assert!(dx0.wedge(&dx0).is_zero());
    }

    #[test]
    fn knorrer_wedge() {
        let i = CycloNumber::i();
        let dx0 = DiffForm::dx(2, 0);
        let idx1 = DiffForm::dx(2, 1).scale(&i);
        let lhs = (&dx0 + &idx1).wedge(&(&dx0 - &idx1));
        assert_eq!(lhs, DiffForm::top(p("-2*i", 2)));
    }

    #[test]
    fn wedge_rejects_mismatched_nvars() {
        assert_eq!(
            DiffForm::dx(2, 0).try_wedge(&DiffForm::dx(3, 0)),
            Err(PolyError::NvarsMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn de_rham_examples() {
        let a = DiffForm::component(0b10, p("x0^2", 2));
        assert_eq!(a.d(), DiffForm::top(p("2*x0", 2)));
        let b = &DiffForm::component(0b10, p("x0", 2)) - &DiffForm::component(0b01, p("x1", 2));
        assert_eq!(b.d(), DiffForm::top(p("2", 2)));
        assert!(DiffForm::function(p("5", 2)).d().is_zero());
    }

    #[test]
    fn euler_examples() {
        let vol = DiffForm::top(GradedPolynomial::one(2));
        let expected = &DiffForm::component(0b10, p("x0", 2)) - &DiffForm::component(0b01, p("x1", 2));
        assert_eq!(vol.euler_contract(), expected);
        let a = DiffForm::component(0b10, p("x0", 2));
        assert_eq!(a.euler_contract(), DiffForm::function(p("x0*x1", 2)));
        // internal degree counts each dx_i once: 4 + 4 = 8
        let w = DiffForm::top(p("x0*x1*x2*x3", 4));
        assert_eq!(w.euler_contract().d(), DiffForm::top(p("8*x0*x1*x2*x3", 4)));
        let w = DiffForm::top(p("x0*x1", 4));
        assert_eq!(w.euler_contract().d(), DiffForm::top(p("6*x0*x1", 4)));
    }

    #[test]
    fn degrees() {
        let w = DiffForm::top(p("x0*x1", 4));
        assert_eq!(w.internal_degree(), Ok(Some(6)));
        assert_eq!(w.euler_contract().internal_degree(), Ok(Some(6)));
        assert_eq!(w.form_degree(), Ok(Some(4)));
        let mixed = &DiffForm::dx(2, 0) + &DiffForm::function(p("x0", 2));
        assert_eq!(mixed.form_degree(), Err(PolyError::MixedFormDegree));
        assert_eq!(mixed.internal_degree(), Ok(Some(1)));
        let bad = &DiffForm::dx(2, 0) + &DiffForm::function(p("x0^2", 2));
        assert_eq!(bad.internal_degree(), Err(PolyError::NonHomogeneous));
    }

    #[test]
    fn relabel_sign() {
        // dx0 dx1 with x1 -> x2 and x0 -> x1 inside four variables, then wedge with dx0 dx3
        let a = DiffForm::top(p("1", 2)).relabel(&[0, 2], 4).unwrap();
        let b = DiffForm::top(p("1", 2)).relabel(&[1, 3], 4).unwrap();
        assert_eq!(a.wedge(&b), DiffForm::top(p("-1", 4)));
        let swapped = DiffForm::top(p("1", 2)).relabel(&[1, 0], 2).unwrap();
        assert_eq!(swapped, DiffForm::top(p("-1", 2)));
    }

    // Random forms over three variables with small rational coefficients.
    fn arb_form(nvars: usize) -> impl Strategy<Value = DiffForm> {
        let term = (0u32..(1 << nvars), prop::collection::vec(0u32..3, nvars), -3i64..4);
        prop::collection::vec(term, 0..5).prop_map(move |ts| {
            let mut f = DiffForm::zero(nvars);
            for (s, e, c) in ts {
                let m = crate::polyforms::Monomial(e);
                f.add_component(s, GradedPolynomial::term(m, CycloNumber::from_int(c)));
            }
            f
        })
    }

    fn arb_pure(nvars: usize) -> impl Strategy<Value = (DiffForm, u32)> {
        (0u32..=nvars as u32).prop_flat_map(move |k| {
            arb_form(nvars).prop_map(move |f| {
                let mut out = DiffForm::zero(nvars);
                for (s, p) in f.components() {
                    if s.count_ones() == k {
                        out.add_component(*s, p.clone());
                    }
                }
                (out, k)
            })
        })
    }

    fn arb_top_homogeneous(nvars: usize) -> impl Strategy<Value = DiffForm> {
        (0u32..4).prop_flat_map(move |d| {
            let monos = crate::polyforms::Monomial::all_of_degree(nvars, d);
            prop::collection::vec(-3i64..4, monos.len()).prop_map(move |cs| {
                let q = GradedPolynomial::from_terms(
                    nvars,
                    monos.iter().cloned().zip(cs.into_iter().map(CycloNumber::from_int)),
                );
                DiffForm::top(q)
            })
        })
    }

    proptest! {
        #[test]
        fn d_squared_vanishes(a in arb_form(3)) {
            prop_assert!(a.d().d().is_zero());
        }

        #[test]
        fn euler_squared_vanishes(a in arb_form(3)) {
            prop_assert!(a.euler_contract().euler_contract().is_zero());
        }

        #[test]
        fn leibniz((a, k) in arb_pure(3), b in arb_form(3)) {
            let lhs = a.wedge(&b).d();
            let second = a.wedge(&b.d());
            let second = if k % 2 == 0 { second } else { -&second };
            prop_assert_eq!(lhs, &a.d().wedge(&b) + &second);
        }

        #[test]
        fn cartan_on_top_forms(w in arb_top_homogeneous(3)) {
            let deg = w.internal_degree().unwrap().unwrap_or(0) as i64;
            prop_assert_eq!(w.euler_contract().d(), w.scale(&CycloNumber::from_int(deg)));
        }

        #[test]
        fn df_wedge_euler(w in arb_top_homogeneous(3), choice in 0usize..3) {
            let fs = ["x0^3+x1^3+x2^3", "x0^2*x1 + x1^2*x2 + x2^2*x0 - 2*x0*x1*x2", "x0^4 + 3*x1^3*x2 - x2^4"];
            let f = p(fs[choice], 3);
            let e = f.homogeneous_degree().unwrap().unwrap() as i64;
            let df = DiffForm::function(f.clone()).d();
            let lhs = df.wedge(&w.euler_contract());
            let rhs = w.mul_poly(&f).scale(&CycloNumber::from_int(e));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
