//! The hypersurface datum and its graded Milnor algebra `Q/(∂f/∂x_0, …, ∂f/∂x_{n+1})`.
//!
//! Each graded piece is computed by row reduction of the finite spanning
//! set `{x^β · ∂f/∂x_i}` of the Jacobian ideal in that degree. Columns are
//! monomials in descending lex order (`x0^d` first), so pivots land on the
//! lex-largest monomials and the standard monomials are the non-pivot ones.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::exactfield::CycloNumber;
use crate::linalg::{SparseEchelon, SparseRow};
use crate::par::{self, Execution};
use crate::polyforms::{GradedPolynomial, Monomial, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error("the polynomial is zero")]
    ZeroPolynomial,
    #[error("the polynomial is not homogeneous")]
    NonHomogeneous,
    #[error("n = {0} must be even")]
    OddDimension(u32),
    #[error("polynomial has {found} variables, expected n + 2 = {expected}")]
    NvarsMismatch { expected: usize, found: usize },
    #[error("singularity is not isolated: the Milnor algebra has dimension {dim} in degree {degree}, expected {expected}")]
    NotIsolated { degree: u32, dim: usize, expected: usize },
    #[error("degree {degree} exceeds the configured maximum {bound}")]
    DegreeTooLarge { degree: u32, bound: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Caps on the amount of per-degree linear algebra performed.
#[derive(Clone, Copy, Debug, Default)]
pub struct MilnorLimits {
    /// Largest internal degree that may be row-reduced; `None` means the socle bound + 1.
    pub max_degree: Option<u32>,
}

/// Validated input `(f, n)`: `f` homogeneous of degree `e` in `n + 2` variables, `n` even.
#[derive(Clone, Debug)]
pub struct HypersurfaceData {
    f: GradedPolynomial,
    n: u32,
    e: u32,
    partials: Vec<GradedPolynomial>,
}

impl HypersurfaceData {
    /// Shape validation only; the isolated-singularity check lives in [`hypersurface_init`].
    fn new(f: GradedPolynomial, n: u32) -> Result<Self, MilnorError> {
        if !n.is_multiple_of(2) {
            return Err(MilnorError::OddDimension(n));
        }
        let nvars = n as usize + 2;
        if f.nvars() != nvars {
            return Err(MilnorError::NvarsMismatch { expected: nvars, found: f.nvars() });
        }
        let e = match f.homogeneous_degree() {
            Ok(Some(e)) => e,
            Ok(None) => return Err(MilnorError::ZeroPolynomial),
            Err(_) => return Err(MilnorError::NonHomogeneous),
        };
        if e == 0 {
            // nonzero constants have no singular locus to speak of
            return Err(MilnorError::ZeroPolynomial);
        }
        let partials = (0..nvars).map(|i| f.partial(i)).collect::<Result<_, _>>()?;
        Ok(HypersurfaceData { f, n, e, partials })
    }

    pub fn f(&self) -> &GradedPolynomial {
        &self.f
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n as usize + 2
    }

    /// Internal degree of `f`.
    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn partials(&self) -> &[GradedPolynomial] {
        &self.partials
    }

    /// `(e - 2)(n + 2)`, the top degree of the Milnor algebra; negative when `e = 1`.
    pub fn socle_degree(&self) -> i64 {
        (self.e as i64 - 2) * (self.n as i64 + 2)
    }

    /// ζ-order of the coefficients of `f`; other coefficients are lifted on demand.
    pub fn field_order(&self) -> u32 {
        self.f.coefficient_order()
    }
}

/// Validates `(f, n)` and checks that the singularity at the origin is isolated.
pub fn hypersurface_init(f: GradedPolynomial, n: u32) -> Result<HypersurfaceData, MilnorError> {
    Ok(MilnorAlgebra::new(f, n)?.data)
}

/// Coefficients of `((1 - s^{e-1}) / (1 - s))^{nvars}` for degrees `0..=upto`:
/// the Hilbert function of `Q/J` when the partials form a regular sequence.
pub fn regular_sequence_hilbert(e: u32, nvars: usize, upto: usize) -> Vec<usize> {
    let mut acc = vec![0usize; upto + 1];
    acc[0] = 1;
    let width = e.saturating_sub(1) as usize;
    for _ in 0..nvars {
        let mut next = vec![0usize; upto + 1];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for k in 0..width {
                if i + k <= upto {
                    next[i + k] += a;
                }
            }
        }
        acc = next;
    }
    acc
}

/// One graded piece `[Q/J]_d`.
#[derive(Debug)]
struct DegreeData {
    index: HashMap<Monomial, usize>,
    echelon: SparseEchelon,
    /// (column, monomial) of each standard monomial, in column order.
    basis: Vec<(usize, Monomial)>,
    basis_pos: HashMap<usize, usize>,
}

impl DegreeData {
    fn empty() -> Self {
        DegreeData {
            index: HashMap::new(),
            echelon: SparseEchelon::new(),
            basis: Vec::new(),
            basis_pos: HashMap::new(),
        }
    }

    fn compute(data: &HypersurfaceData, d: u32) -> Self {
        let nvars = data.nvars();
        let monomials = Monomial::all_of_degree(nvars, d);
        let index: HashMap<Monomial, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut echelon = SparseEchelon::new();
        let gen_degree = data.e - 1;
        if d >= gen_degree {
            let multipliers = Monomial::all_of_degree(nvars, d - gen_degree);
            for g in &data.partials {
                if g.is_zero() {
                    continue;
                }
                for m in &multipliers {
                    let row: SparseRow = g
                        .terms()
                        .map(|(t, c)| (index[&t.mul(m)], c.clone()))
                        .collect();
                    echelon.insert(row);
                    if echelon.rank() == monomials.len() {
                        break;
                    }
                }
            }
        }
        let basis: Vec<(usize, Monomial)> = monomials
            .into_iter()
            .enumerate()
            .filter(|(c, _)| !echelon.is_pivot(*c))
            .collect();
        let basis_pos = basis.iter().enumerate().map(|(k, (c, _))| (*c, k)).collect();
        DegreeData { index, echelon, basis, basis_pos }
    }

    fn reduce(&self, p: &GradedPolynomial) -> Vec<CycloNumber> {
        let row: SparseRow = p.terms().map(|(m, c)| (self.index[m], c.clone())).collect();
        let reduced = self.echelon.reduce(row);
        let mut out = vec![CycloNumber::zero(); self.basis.len()];
        for (c, v) in reduced {
            out[self.basis_pos[&c]] = v;
        }
        out
    }
}

/// Graded Milnor algebra of an isolated homogeneous hypersurface singularity.
///
/// Graded pieces are filled lazily, each exactly once; degrees above the
/// socle are zero and never computed.
#[derive(Debug)]
pub struct MilnorAlgebra {
    data: HypersurfaceData,
    degrees: Vec<OnceLock<Arc<DegreeData>>>,
    empty: Arc<DegreeData>,
}

impl MilnorAlgebra {
    pub fn new(f: GradedPolynomial, n: u32) -> Result<Self, MilnorError> {
        Self::with_limits(f, n, MilnorLimits::default(), Execution::default())
    }

    /// Builds the algebra and runs the isolated-singularity check, computing
    /// degrees `0..=socle+1` with the given execution strategy.
    pub fn with_limits(
        f: GradedPolynomial,
        n: u32,
        limits: MilnorLimits,
        exec: Execution,
    ) -> Result<Self, MilnorError> {
        let data = HypersurfaceData::new(f, n)?;
        let check_top = (data.socle_degree() + 1).max(0) as u32;
        if let Some(bound) = limits.max_degree {
            if check_top > bound {
                return Err(MilnorError::DegreeTooLarge { degree: check_top, bound });
            }
        }
        let algebra = MilnorAlgebra {
            degrees: (0..=check_top).map(|_| OnceLock::new()).collect(),
            data,
            empty: Arc::new(DegreeData::empty()),
        };
        let dims = par::map_range(exec, 0..check_top as usize + 1, |d| {
            algebra.degree_data(d as u32).basis.len()
        });
        let expected = regular_sequence_hilbert(algebra.data.e, algebra.data.nvars(), check_top as usize);
        for (d, (&dim, &exp)) in dims.iter().zip(&expected).enumerate() {
            if dim != exp {
                return Err(MilnorError::NotIsolated { degree: d as u32, dim, expected: exp });
            }
        }
        Ok(algebra)
    }

    pub fn data(&self) -> &HypersurfaceData {
        &self.data
    }

    pub fn f(&self) -> &GradedPolynomial {
        &self.data.f
    }

    pub fn n(&self) -> u32 {
        self.data.n
    }

    pub fn e(&self) -> u32 {
        self.data.e
    }

    pub fn nvars(&self) -> usize {
        self.data.nvars()
    }

    pub fn socle_degree(&self) -> i64 {
        self.data.socle_degree()
    }

    fn degree_data(&self, d: u32) -> Arc<DegreeData> {
        match self.degrees.get(d as usize) {
            Some(cell) => cell
                .get_or_init(|| Arc::new(DegreeData::compute(&self.data, d)))
                .clone(),
            None => self.empty.clone(),
        }
    }

    /// Standard monomials spanning `[Q/J]_d`.
    pub fn milnor_basis(&self, d: u32) -> Vec<Monomial> {
        self.degree_data(d).basis.iter().map(|(_, m)| m.clone()).collect()
    }

    /// `dim [Q/J]_d`; zero for negative `d`.
    pub fn dim(&self, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            self.degree_data(d as u32).basis.len()
        }
    }

    /// `dim [Ω_f]_k = dim [Q/J]_{k-(n+2)}`.
    pub fn omega_f_dim(&self, k: i64) -> usize {
        self.dim(k - self.nvars() as i64)
    }

    /// Hilbert function for degrees `0..=socle`.
    pub fn hilbert_function(&self) -> Vec<usize> {
        let top = self.socle_degree();
        (0..=top).map(|d| self.dim(d)).collect()
    }

    pub fn total_dimension(&self) -> usize {
        self.hilbert_function().iter().sum()
    }

    /// Coordinates of `p` modulo the Jacobian ideal in the basis of degree `d`.
    /// `p` must be zero or homogeneous of degree `d`.
    pub fn reduce_in_degree(&self, p: &GradedPolynomial, d: u32) -> Result<Vec<CycloNumber>, MilnorError> {
        if p.nvars() != self.nvars() {
            return Err(MilnorError::NvarsMismatch { expected: self.nvars(), found: p.nvars() });
        }
        match p.homogeneous_degree() {
            Err(_) => return Err(MilnorError::NonHomogeneous),
            Ok(Some(k)) if k != d => return Err(MilnorError::NonHomogeneous),
            _ => {}
        }
        let data = self.degree_data(d);
        if data.basis.is_empty() {
            return Ok(Vec::new());
        }
        Ok(data.reduce(p))
    }

    /// Coordinates of a homogeneous `p` in `milnor_basis(deg p)`; zero maps to the empty tuple.
    pub fn milnor_reduce(&self, p: &GradedPolynomial) -> Result<Vec<CycloNumber>, MilnorError> {
        match p.homogeneous_degree() {
            Err(_) => Err(MilnorError::NonHomogeneous),
            Ok(None) => Ok(Vec::new()),
            Ok(Some(d)) => self.reduce_in_degree(p, d),
        }
    }

    /// Whether a homogeneous `p` lies in the Jacobian ideal.
    pub fn in_jacobian_ideal(&self, p: &GradedPolynomial) -> Result<bool, MilnorError> {
        Ok(self.milnor_reduce(p)?.iter().all(CycloNumber::is_zero))
    }
}
