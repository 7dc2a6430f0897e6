use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::exactfield::{CycloNumber, Rational};
use crate::linalg::rational_rank;
use crate::milnor::MilnorAlgebra;
use crate::polyforms::{DiffForm, GradedPolynomial, Monomial};

use super::{MatrixFactorization, MfError};

type FormMatrix = Vec<Vec<DiffForm>>;

/// Chern character of a factorization: the top-form coefficient `raw` and its
/// coordinates in the Milnor basis of degree `nvars·(e-2)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernClass {
    f: GradedPolynomial,
    raw: GradedPolynomial,
    basis: Vec<Monomial>,
    reduced: Vec<CycloNumber>,
}

impl ChernClass {
    pub fn f(&self) -> &GradedPolynomial {
        &self.f
    }

    pub fn raw(&self) -> &GradedPolynomial {
        &self.raw
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn reduced(&self) -> &[CycloNumber] {
        &self.reduced
    }

    pub fn is_zero(&self) -> bool {
        self.reduced.iter().all(CycloNumber::is_zero)
    }

    /// Basis monomial to coordinate, both printed canonically.
    pub fn reduced_map(&self) -> BTreeMap<String, String> {
        self.basis
            .iter()
            .zip(&self.reduced)
            .map(|(m, c)| (m.to_string(), c.to_string()))
            .collect()
    }

    /// Reduces `raw` in the Milnor algebra of `f`.
    pub fn from_raw(raw: GradedPolynomial, m: &MilnorAlgebra) -> Result<Self, MfError> {
        let nvars = m.nvars();
        if raw.nvars() != nvars {
            return Err(MfError::NvarsMismatch { expected: nvars, found: raw.nvars() });
        }
        let d = nvars as i64 * (m.e() as i64 - 2) / 2;
        let homogeneous_ok = match raw.homogeneous_degree() {
            Ok(None) => true,
            Ok(Some(k)) => k as i64 == d,
            Err(_) => false,
        };
        if !homogeneous_ok {
            return Err(MfError::InhomogeneousClass(d));
        }
        let (basis, reduced) = if d < 0 {
            (Vec::new(), Vec::new())
        } else {
            (m.milnor_basis(d as u32), m.reduce_in_degree(&raw, d as u32)?)
        };
        Ok(ChernClass { f: m.f().clone(), raw, basis, reduced })
    }
}

fn differentials(m: &[Vec<GradedPolynomial>]) -> FormMatrix {
    m.iter()
        .map(|row| row.iter().map(|p| DiffForm::function(p.clone()).d()).collect())
        .collect()
}

fn form_mul(x: &FormMatrix, y: &FormMatrix, nvars: usize) -> FormMatrix {
    let r = x.len();
    let mut out = vec![vec![DiffForm::zero(nvars); r]; r];
    for i in 0..r {
        for k in 0..r {
            if x[i][k].is_zero() {
                continue;
            }
            for j in 0..r {
                if !y[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &x[i][k].wedge(&y[k][j]);
                }
            }
        }
    }
    out
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * i)
}

/// `(2/N!)` times the `dx_0⋯dx_{N-1}` coefficient of `tr((dA∧dB)^{N/2})`,
/// where `N` is the number of variables.
pub fn chern_raw(mf: &MatrixFactorization) -> Result<GradedPolynomial, MfError> {
    let nvars = mf.nvars();
    if !nvars.is_multiple_of(2) {
        return Err(MfError::OddVariableCount(nvars));
    }
    let r = mf.rank();
    if r == 0 {
        return Ok(GradedPolynomial::zero(nvars));
    }
    // Entries of dA∧dB are 2-forms and commute, so ordinary powers suffice.
    let p = form_mul(&differentials(mf.a()), &differentials(mf.b()), nvars);
    let mut acc = p.clone();
    for _ in 1..nvars / 2 {
        acc = form_mul(&acc, &p, nvars);
    }
    let mut trace = GradedPolynomial::zero(nvars);
    for (i, row) in acc.iter().enumerate() {
        trace = &trace + &row[i].top_coefficient();
    }
    let c = CycloNumber::from_rational(Rational::new(BigInt::from(2), factorial(nvars)));
    Ok(trace.scale(&c))
}

pub fn chern(mf: &MatrixFactorization, m: &MilnorAlgebra) -> Result<ChernClass, MfError> {
    if mf.f() != m.f() {
        return Err(MfError::FMismatch);
    }
    ChernClass::from_raw(chern_raw(mf)?, m)
}

/// Top-form coefficient of `(raw₁·vol₁) ∧ (raw₂·vol₂)` after placing the
/// variables of each factor at the positions given by its map.
pub fn wedge_classes(
    raw1: &GradedPolynomial,
    map1: &[usize],
    raw2: &GradedPolynomial,
    map2: &[usize],
    nvars: usize,
) -> Result<GradedPolynomial, MfError> {
    let mut seen = vec![false; nvars];
    for &v in map1.iter().chain(map2) {
        if v >= nvars {
            return Err(MfError::IncompleteVariableMap { covered: map1.len() + map2.len(), nvars });
        }
        if seen[v] {
            return Err(MfError::VariableCollision(v));
        }
        seen[v] = true;
    }
    if map1.len() + map2.len() != nvars {
        return Err(MfError::IncompleteVariableMap { covered: map1.len() + map2.len(), nvars });
    }
    let w1 = DiffForm::top(raw1.clone()).relabel(map1, nvars)?;
    let w2 = DiffForm::top(raw2.clone()).relabel(map2, nvars)?;
    Ok(w1.wedge(&w2).top_coefficient())
}

/// `c₁·c₂` in the Milnor algebra of `f₁ + f₂`, with each factor's variables
/// placed by its map. The orientation sign of interleaved variables is included.
pub fn chern_product(
    c1: &ChernClass,
    map1: &[usize],
    c2: &ChernClass,
    map2: &[usize],
    m: &MilnorAlgebra,
) -> Result<ChernClass, MfError> {
    let nvars = m.nvars();
    let f = &c1.f.relabel(map1, nvars)? + &c2.f.relabel(map2, nvars)?;
    if f != *m.f() {
        return Err(MfError::FMismatch);
    }
    let raw = wedge_classes(&c1.raw, map1, &c2.raw, map2, nvars)?;
    ChernClass::from_raw(raw, m)
}

/// `chern_product` with the second factor's variables placed after the first's.
pub fn chern_product_concat(c1: &ChernClass, c2: &ChernClass, m: &MilnorAlgebra) -> Result<ChernClass, MfError> {
    let (p, q) = (c1.nvars(), c2.nvars());
    let map1: Vec<usize> = (0..p).collect();
    let map2: Vec<usize> = (p..p + q).collect();
    chern_product(c1, &map1, c2, &map2, m)
}

/// Rank over ℚ of the reduced coordinate tuples, each cyclotomic coordinate
/// expanded into its rational coordinates over a common ζ-order.
pub fn q_rank(classes: &[ChernClass]) -> Result<usize, MfError> {
    let Some(first) = classes.first() else {
        return Ok(0);
    };
    if classes.iter().any(|c| c.f != first.f) {
        return Err(MfError::MixedHypersurfaces);
    }
    let order = classes
        .iter()
        .flat_map(|c| c.reduced.iter().map(CycloNumber::order))
        .fold(1, num_integer::lcm);
    let mut rows = Vec::with_capacity(classes.len());
    for c in classes {
        let mut row = Vec::new();
        for x in &c.reduced {
            row.extend(x.lift_to(order)?.to_rational_coords());
        }
        rows.push(row);
    }
    Ok(rational_rank(&rows))
}
