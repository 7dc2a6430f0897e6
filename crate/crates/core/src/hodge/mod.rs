//! Dimensions of HP₀, the nc Hodge filtration and HN, together with the
//! explicit cycle maps into the de Rham model of `HN(Q[t, t⁻¹], ft)`.
//!
//! All dimensions are read off graded pieces of `Ω_f`:
//! `gr^p F_nc HP₀ ≅ [Ω_f]_{(n/2 + 1 - p)e}`, and `HN_{2m}` is the sum of the
//! graded pieces with `p ≥ m`.

mod cycles;
mod mixed;

pub use cycles::{boundary_devissage, cycle_check, phi, psi, psi_expanded, PolarClass};
pub use mixed::{MixedElement, MixedKey};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::milnor::MilnorAlgebra;
use crate::polyforms::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HodgeError {
    #[error("polynomial of degree {found} given where degree {expected} is required")]
    DegreeMismatch { expected: i64, found: u32 },
    #[error("the exponent of u would be {0}")]
    NegativeUExponent(i64),
    #[error("the graded piece for pole order {0} is empty")]
    EmptyGradedPiece(i64),
    #[error("pole order must be positive, got {0}")]
    NonPositivePoleOrder(i64),
    #[error("form degree {0} must be odd")]
    EvenFormDegree(u32),
    #[error("the form must be of pure form degree {0}")]
    FormDegreeMismatch(u32),
    #[error("precondition f·dα = s·df∧α fails")]
    PreconditionFailed,
    #[error("input has {found} variables, the hypersurface has {expected}")]
    NvarsMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Range of pole orders `j ≥ 1` with a possibly nonzero piece `[Q/J]_{je-(n+2)}`.
fn pole_orders(m: &MilnorAlgebra) -> std::ops::RangeInclusive<i64> {
    let nvars = m.nvars() as i64;
    let top = m.socle_degree() + nvars;
    let jmax = if top < 0 { 0 } else { top / m.e() as i64 };
    1..=jmax
}

fn half_n_plus_one(m: &MilnorAlgebra) -> i64 {
    m.n() as i64 / 2 + 1
}

/// `dim HP₀ = dim [Ω_f]_{ℤ·e}`.
pub fn hp0_dim(m: &MilnorAlgebra) -> usize {
    pole_orders(m)
        .map(|j| m.omega_f_dim(j * m.e() as i64))
        .sum()
}

/// `dim gr^p F_nc HP₀` for a single `p`.
pub fn graded_dim(m: &MilnorAlgebra, p: i64) -> usize {
    m.omega_f_dim((half_n_plus_one(m) - p) * m.e() as i64)
}

/// Nonzero graded pieces of the nc Hodge filtration, keyed by `p`.
pub fn nc_filtration(m: &MilnorAlgebra) -> BTreeMap<i64, usize> {
    pole_orders(m)
        .map(|j| half_n_plus_one(m) - j)
        .map(|p| (p, graded_dim(m, p)))
        .filter(|&(_, d)| d > 0)
        .collect()
}

/// `dim F^s_nc HP₀ = Σ_{p ≥ s} dim gr^p`.
pub fn nc_filtration_dim(m: &MilnorAlgebra, s: i64) -> usize {
    nc_filtration(m).range(s..).map(|(_, d)| d).sum()
}

/// `dim HN_{2m}`, via the short exact sequences `0 → HN_{2m+2} → HN_{2m} → gr^m → 0`.
pub fn hn_dim(m: &MilnorAlgebra, deg: i64) -> usize {
    nc_filtration_dim(m, deg)
}

/// HN dimensions on a window one step beyond the support on each side.
pub fn hn_dims(m: &MilnorAlgebra) -> BTreeMap<i64, usize> {
    let graded = nc_filtration(m);
    let (lo, hi) = match (graded.keys().next(), graded.keys().next_back()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0, 0),
    };
    // descending recursion from above the support: hn(hi+1) = 0
    let mut out = BTreeMap::new();
    let mut acc = 0;
    out.insert(hi + 1, 0);
    for k in (lo - 1..=hi).rev() {
        acc += graded.get(&k).copied().unwrap_or(0);
        out.insert(k, acc);
    }
    out
}

/// Primitive Hodge numbers `h^{a, n-a}_prim = dim gr^{a - n/2}`, for `0 ≤ a ≤ n`.
pub fn classical_hodge_numbers(m: &MilnorAlgebra) -> BTreeMap<(u32, u32), usize> {
    let n = m.n();
    (0..=n)
        .map(|a| ((a, n - a), graded_dim(m, a as i64 - n as i64 / 2)))
        .collect()
}

/// Everything above in one record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationProfile {
    pub hp0_dim: usize,
    pub graded: BTreeMap<i64, usize>,
    pub hn: BTreeMap<i64, usize>,
    pub classical: BTreeMap<(u32, u32), usize>,
}

impl FiltrationProfile {
    pub fn compute(m: &MilnorAlgebra) -> Self {
        FiltrationProfile {
            hp0_dim: hp0_dim(m),
            graded: nc_filtration(m),
            hn: hn_dims(m),
            classical: classical_hodge_numbers(m),
        }
    }

    /// `{hp0_dim, nc_filtration: {p: dim}, classical: {"h{p},{q}": dim}, hn: {m: dim}}`
    /// with sorted keys.
    pub fn to_json(&self) -> serde_json::Value {
        let by_int = |m: &BTreeMap<i64, usize>| -> serde_json::Map<String, serde_json::Value> {
            m.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect()
        };
        let classical: serde_json::Map<String, serde_json::Value> = self
            .classical
            .iter()
            .map(|((p, q), v)| (format!("h{p},{q}"), (*v).into()))
            .collect();
        serde_json::json!({
            "hp0_dim": self.hp0_dim,
            "nc_filtration": by_int(&self.graded),
            "classical": classical,
            "hn": by_int(&self.hn),
        })
    }
}

/// `dim P^{s + n/2 + 1}`: number of Milnor basis classes whose φ-image has
/// pole order at most `n/2 + 1 - s`.
pub fn polar_filtration_dim(m: &MilnorAlgebra, s: i64) -> usize {
    let bound = half_n_plus_one(m) - s;
    pole_orders(m)
        .filter(|&j| j <= bound)
        .map(|j| {
            let d = j * m.e() as i64 - m.nvars() as i64;
            if d < 0 {
                return 0;
            }
            m.milnor_basis(d as u32)
                .into_iter()
                .filter_map(|b| {
                    let q = crate::polyforms::GradedPolynomial::term(b, crate::CycloNumber::one());
                    phi(m, &q, j).ok()
                })
                .filter(|c| c.pole_order <= bound)
                .count()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyforms::poly_parse;

    fn algebra(f: &str, n: u32) -> MilnorAlgebra {
        MilnorAlgebra::new(poly_parse(f, n as usize + 2).unwrap(), n).unwrap()
    }

    fn fermat(e: u32, n: u32) -> MilnorAlgebra {
        let f: Vec<String> = (0..n + 2).map(|i| format!("x{i}^{e}")).collect();
        algebra(&f.join("+"), n)
    }

    #[test]
    fn hp0_examples() {
        assert_eq!(hp0_dim(&fermat(3, 2)), 6);
        for n in [0, 2, 4, 6] {
            assert_eq!(hp0_dim(&fermat(2, n)), 1);
        }
        assert_eq!(hp0_dim(&fermat(4, 2)), 21);
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(nc_filtration(&fermat(3, 2)), BTreeMap::from([(0, 6)]));
        assert_eq!(nc_filtration(&fermat(4, 2)), BTreeMap::from([(1, 1), (0, 19), (-1, 1)]));
        assert_eq!(nc_filtration(&fermat(2, 0)), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn classical_examples() {
        assert_eq!(
            classical_hodge_numbers(&fermat(4, 2)),
            BTreeMap::from([((2, 0), 1), ((1, 1), 19), ((0, 2), 1)])
        );
        assert_eq!(
            classical_hodge_numbers(&fermat(3, 2)),
            BTreeMap::from([((2, 0), 0), ((1, 1), 6), ((0, 2), 0)])
        );
        assert_eq!(classical_hodge_numbers(&fermat(2, 2))[&(1, 1)], 1);
    }

    #[test]
    fn hn_examples() {
        let cubic = fermat(3, 2);
        assert_eq!(hn_dims(&cubic), BTreeMap::from([(-1, 6), (0, 6), (1, 0)]));
        assert_eq!(hn_dim(&cubic, 5), 0);
        assert_eq!(hn_dim(&cubic, -7), 6);
        assert_eq!(
            hn_dims(&fermat(4, 2)),
            BTreeMap::from([(-2, 21), (-1, 21), (0, 20), (1, 1), (2, 0)])
        );
        assert_eq!(hn_dims(&fermat(2, 0)), BTreeMap::from([(-1, 1), (0, 1), (1, 0)]));
    }

    #[test]
    fn profile_invariants_on_grid() {
        for e in 2..=5 {
            for n in [0, 2] {
                let m = fermat(e, n);
                let prof = FiltrationProfile::compute(&m);
                assert_eq!(prof.graded.values().sum::<usize>(), prof.hp0_dim);
                for (&k, &h) in &prof.hn {
                    assert_eq!(h - hn_dim(&m, k + 1), graded_dim(&m, k));
                }
                for (&(p, q), &h) in &prof.classical {
                    assert_eq!(h, prof.classical[&(q, p)], "Hodge symmetry for e={e} n={n}");
                }
                let json = prof.to_json();
                assert_eq!(json["hp0_dim"], prof.hp0_dim);
                for s in -4..=4 {
                    assert_eq!(polar_filtration_dim(&m, s), nc_filtration_dim(&m, s));
                }
            }
        }
    }

    #[test]
    fn sextic_curve_pair() {
        // n = 0, e = 6: six points; HP₀ is spanned by classes in degree 6 - 2 = 4
        let m = fermat(6, 0);
        assert_eq!(hp0_dim(&m), 5);
        assert_eq!(classical_hodge_numbers(&m), BTreeMap::from([((0, 0), 5)]));
    }
}
