//! Matrix factorizations `(A, B)` with `AB = BA = f·id`, their tensor
//! products and Chern characters.

mod chern;
mod json;

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::exactfield::{CycloNumber, FieldError};
use crate::milnor::MilnorError;
use crate::polyforms::{GradedPolynomial, PolyError};

pub use chern::{chern, chern_product, chern_product_concat, chern_raw, q_rank, wedge_classes, ChernClass};
pub use json::MfJson;

pub type PolyMatrix = Vec<Vec<GradedPolynomial>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MfError {
    #[error("A and B must be square matrices of the same size")]
    Shape,
    #[error("entry uses {found} variables, expected {expected}")]
    NvarsMismatch { expected: usize, found: usize },
    #[error("{product}[{row}][{col}] = {found}, expected {expected}")]
    NotAFactorization { product: &'static str, row: usize, col: usize, expected: String, found: String },
    #[error("variable x{0} occurs in both factors")]
    VariableCollision(usize),
    #[error("the variable maps cover {covered} of {nvars} variables")]
    IncompleteVariableMap { covered: usize, nvars: usize },
    #[error("the factorization is of a different polynomial than the Milnor algebra")]
    FMismatch,
    #[error("the number of variables ({0}) must be even")]
    OddVariableCount(usize),
    #[error("Chern character is not homogeneous of degree {0}")]
    InhomogeneousClass(i64),
    #[error("{0} does not divide f")]
    NotADivisor(String),
    #[error("classes belong to different hypersurfaces")]
    MixedHypersurfaces,
    #[error("invalid factorization file: {0}")]
    Json(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Integer weights with `deg A_ij = rows[i] + cols[j]` and
/// `deg B_jk = e - cols[j] - rows[k]` for every nonzero entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub rows: Vec<i64>,
    pub cols: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFactorization {
    f: GradedPolynomial,
    a: PolyMatrix,
    b: PolyMatrix,
    grading: Option<Grading>,
}

/// Sign convention for the off-diagonal blocks of a tensor product.
/// `Flipped` negates the lower-left block of `A⊗` and never yields a
/// factorization; it exists as a negative control for the verifier.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TensorSign {
    #[default]
    Standard,
    Flipped,
}

fn zero_matrix(r: usize, nvars: usize) -> PolyMatrix {
    vec![vec![GradedPolynomial::zero(nvars); r]; r]
}

fn mat_mul(x: &PolyMatrix, y: &PolyMatrix, nvars: usize) -> PolyMatrix {
    let r = x.len();
    let mut out = zero_matrix(r, nvars);
    for i in 0..r {
        for k in 0..r {
            if x[i][k].is_zero() {
                continue;
            }
            for j in 0..r {
                if !y[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&x[i][k] * &y[k][j]);
                }
            }
        }
    }
    out
}

/// Kronecker product `x ⊠ y`, row index `(i, k) ↦ i·dim(y) + k`.
fn kron(x: &PolyMatrix, y: &PolyMatrix, nvars: usize) -> PolyMatrix {
    let (r, s) = (x.len(), y.len());
    let mut out = zero_matrix(r * s, nvars);
    for i in 0..r {
        for j in 0..r {
            if x[i][j].is_zero() {
                continue;
            }
            for k in 0..s {
                for l in 0..s {
                    if !y[k][l].is_zero() {
                        out[i * s + k][j * s + l] = &x[i][j] * &y[k][l];
                    }
                }
            }
        }
    }
    out
}

fn identity(r: usize, nvars: usize) -> PolyMatrix {
    let mut out = zero_matrix(r, nvars);
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = GradedPolynomial::one(nvars);
    }
    out
}

fn negate(x: &PolyMatrix) -> PolyMatrix {
    x.iter().map(|row| row.iter().map(|p| -p).collect()).collect()
}

/// `[[p, q], [r, s]]` assembled from equal-size blocks.
fn blocks(p: PolyMatrix, q: PolyMatrix, r: PolyMatrix, s: PolyMatrix) -> PolyMatrix {
    let mut out = Vec::with_capacity(p.len() * 2);
    for (mut a, b) in p.into_iter().zip(q) {
        a.extend(b);
        out.push(a);
    }
    for (mut a, b) in r.into_iter().zip(s) {
        a.extend(b);
        out.push(a);
    }
    out
}

fn check_product(x: &PolyMatrix, y: &PolyMatrix, f: &GradedPolynomial, name: &'static str) -> Result<(), MfError> {
    let nvars = f.nvars();
    let prod = mat_mul(x, y, nvars);
    for (i, row) in prod.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let expected = if i == j { f.clone() } else { GradedPolynomial::zero(nvars) };
            if *p != expected {
                return Err(MfError::NotAFactorization {
                    product: name,
                    row: i,
                    col: j,
                    expected: expected.to_string(),
                    found: p.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Solves the degree constraints on the bipartite graph of rows and columns.
fn find_grading(f: &GradedPolynomial, a: &PolyMatrix, b: &PolyMatrix) -> Option<Grading> {
    let e = f.homogeneous_degree().ok()?? as i64;
    let r = a.len();
    let deg = |p: &GradedPolynomial| -> Option<Option<i64>> {
        p.homogeneous_degree().ok().map(|d| d.map(i64::from))
    };
    // Edge (row i, col j) with rows[i] + cols[j] = w.
    let mut edges: Vec<Vec<(usize, i64)>> = vec![Vec::new(); 2 * r];
    for i in 0..r {
        for j in 0..r {
            if let Some(w) = deg(&a[i][j])? {
                edges[i].push((r + j, w));
                edges[r + j].push((i, w));
            }
            // B_ji pairs column j of A with row i of A.
            if let Some(w) = deg(&b[j][i])? {
                edges[i].push((r + j, e - w));
                edges[r + j].push((i, e - w));
            }
        }
    }
    let mut weight: Vec<Option<i64>> = vec![None; 2 * r];
    for start in 0..2 * r {
        if weight[start].is_some() {
            continue;
        }
        weight[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let wv = weight[v].unwrap();
            for &(u, w) in &edges[v] {
                match weight[u] {
                    None => {
                        weight[u] = Some(w - wv);
                        queue.push_back(u);
                    }
                    Some(wu) if wu + wv != w => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let weight: Vec<i64> = weight.into_iter().map(Option::unwrap).collect();
    Some(Grading { rows: weight[..r].to_vec(), cols: weight[r..].to_vec() })
}

/// Checks `AB = BA = f·id` and attaches a grading when one exists.
pub fn mf_validate(a: PolyMatrix, b: PolyMatrix, f: GradedPolynomial) -> Result<MatrixFactorization, MfError> {
    let r = a.len();
    if b.len() != r || a.iter().chain(&b).any(|row| row.len() != r) {
        return Err(MfError::Shape);
    }
    let nvars = f.nvars();
    if let Some(p) = a.iter().chain(&b).flatten().find(|p| p.nvars() != nvars) {
        return Err(MfError::NvarsMismatch { expected: nvars, found: p.nvars() });
    }
    check_product(&a, &b, &f, "AB")?;
    check_product(&b, &a, &f, "BA")?;
    let grading = find_grading(&f, &a, &b);
    Ok(MatrixFactorization { f, a, b, grading })
}

impl MatrixFactorization {
    pub fn f(&self) -> &GradedPolynomial {
        &self.f
    }

    pub fn a(&self) -> &PolyMatrix {
        &self.a
    }

    pub fn b(&self) -> &PolyMatrix {
        &self.b
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    /// The rank-0 factorization of `f`.
    pub fn empty(f: GradedPolynomial) -> Self {
        MatrixFactorization { f, a: Vec::new(), b: Vec::new(), grading: Some(Grading { rows: vec![], cols: vec![] }) }
    }

    /// Variables occurring in `f` or in any entry.
    pub fn support_vars(&self) -> BTreeSet<usize> {
        let mut s = self.f.support_vars();
        for p in self.a.iter().chain(&self.b).flatten() {
            s.extend(p.support_vars());
        }
        s
    }

    /// Renames `x_i` to `x_{var_map[i]}` in a ring with `nvars` variables.
    pub fn relabel(&self, var_map: &[usize], nvars: usize) -> Result<Self, MfError> {
        let map = |m: &PolyMatrix| -> Result<PolyMatrix, MfError> {
            m.iter()
                .map(|row| row.iter().map(|p| Ok(p.relabel(var_map, nvars)?)).collect())
                .collect()
        };
        mf_validate(map(&self.a)?, map(&self.b)?, self.f.relabel(var_map, nvars)?)
    }

    /// The shift `(B, A)`.
    pub fn swap(&self) -> Self {
        let grading = self.grading.as_ref().map(|g| {
            // deg B_jk = e - cols[j] - rows[k] = (-cols[j]) + (e - rows[k])
            let e = self.f.homogeneous_degree().ok().flatten().unwrap_or(0) as i64;
            Grading { rows: g.cols.iter().map(|c| -c).collect(), cols: g.rows.iter().map(|r| e - r).collect() }
        });
        MatrixFactorization { f: self.f.clone(), a: self.b.clone(), b: self.a.clone(), grading }
    }

    /// Block-diagonal sum of two factorizations of the same `f`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, MfError> {
        if self.f != other.f {
            return Err(MfError::FMismatch);
        }
        let nvars = self.nvars();
        let (r, s) = (self.rank(), other.rank());
        let diag = |x: &PolyMatrix, y: &PolyMatrix| -> PolyMatrix {
            let mut out = zero_matrix(r + s, nvars);
            for i in 0..r {
                out[i][..r].clone_from_slice(&x[i]);
            }
            for i in 0..s {
                out[r + i][r..].clone_from_slice(&y[i]);
            }
            out
        };
        mf_validate(diag(&self.a, &other.a), diag(&self.b, &other.b), self.f.clone())
    }
}

/// Tensor product of factorizations of `f` and `g` over disjoint variables of
/// the same ring; a factorization of `f + g`.
pub fn mf_tensor(x: &MatrixFactorization, y: &MatrixFactorization) -> Result<MatrixFactorization, MfError> {
    mf_tensor_with(x, y, TensorSign::Standard)
}

pub fn mf_tensor_with(
    x: &MatrixFactorization,
    y: &MatrixFactorization,
    sign: TensorSign,
) -> Result<MatrixFactorization, MfError> {
    let nvars = x.nvars();
    if y.nvars() != nvars {
        return Err(MfError::NvarsMismatch { expected: nvars, found: y.nvars() });
    }
    if let Some(&v) = x.support_vars().intersection(&y.support_vars()).next() {
        return Err(MfError::VariableCollision(v));
    }
    let (r, s) = (x.rank(), y.rank());
    let (ir, is) = (identity(r, nvars), identity(s, nvars));
    let lower = kron(&ir, &y.b, nvars);
    let a = blocks(
        kron(&x.a, &is, nvars),
        kron(&ir, &y.a, nvars),
        match sign {
            TensorSign::Standard => negate(&lower),
            TensorSign::Flipped => lower.clone(),
        },
        kron(&x.b, &is, nvars),
    );
    let b = blocks(
        kron(&x.b, &is, nvars),
        negate(&kron(&ir, &y.a, nvars)),
        lower,
        kron(&x.a, &is, nvars),
    );
    mf_validate(a, b, &x.f + &y.f)
}

/// Tensor product after moving `y` to fresh variables placed after those of `x`.
pub fn mf_tensor_concat(x: &MatrixFactorization, y: &MatrixFactorization) -> Result<MatrixFactorization, MfError> {
    let (p, q) = (x.nvars(), y.nvars());
    let xs = x.relabel(&(0..p).collect::<Vec<_>>(), p + q)?;
    let ys = y.relabel(&(p..p + q).collect::<Vec<_>>(), p + q)?;
    mf_tensor(&xs, &ys)
}

fn lin(nvars: usize, terms: &[(usize, CycloNumber)]) -> GradedPolynomial {
    let mut p = GradedPolynomial::zero(nvars);
    for (i, c) in terms {
        p = &p + &GradedPolynomial::var(nvars, *i).scale(c);
    }
    p
}

fn alpha() -> CycloNumber {
    CycloNumber::zeta(3).expect("order 3 is within every bound")
}

/// `(x + i·y, x - i·y)` over `x² + y²`.
pub fn knorrer(nvars: usize, x: usize, y: usize) -> Result<MatrixFactorization, MfError> {
    let i = CycloNumber::i();
    let a = lin(nvars, &[(x, CycloNumber::one()), (y, i.clone())]);
    let b = lin(nvars, &[(x, CycloNumber::one()), (y, -&i)]);
    let f = &a * &b;
    mf_validate(vec![vec![a]], vec![vec![b]], f)
}

/// The `k`-fold tensor power of Knörrer pairs over `Σ_{i<2k} x_i²`.
pub fn knorrer_power(k: usize) -> Result<MatrixFactorization, MfError> {
    let nvars = 2 * k;
    let mut acc = MatrixFactorization::empty(GradedPolynomial::zero(nvars));
    for j in 0..k {
        let next = knorrer(nvars, 2 * j, 2 * j + 1)?;
        acc = if j == 0 { next } else { mf_tensor(&acc, &next)? };
    }
    Ok(acc)
}

/// `(x + y, (x + αy)(x + α²y))` over `x³ + y³`, `α = zeta3`.
pub fn cubic_e1(nvars: usize, x: usize, y: usize) -> Result<MatrixFactorization, MfError> {
    cubic_line(nvars, x, y, 0)
}

/// `(x + αy, (x + y)(x + α²y))` over `x³ + y³`.
pub fn cubic_e2(nvars: usize, x: usize, y: usize) -> Result<MatrixFactorization, MfError> {
    cubic_line(nvars, x, y, 1)
}

fn cubic_line(nvars: usize, x: usize, y: usize, k: u32) -> Result<MatrixFactorization, MfError> {
    let factor = |j: u32| lin(nvars, &[(x, CycloNumber::one()), (y, alpha().pow(j))]);
    let a = factor(k);
    let others: Vec<u32> = (0..3).filter(|&j| j != k).collect();
    let b = &factor(others[0]) * &factor(others[1]);
    let f = &a * &b;
    mf_validate(vec![vec![a]], vec![vec![b]], f)
}

/// The rank-1 factorization `(ℓ, f/ℓ)`.
pub fn linear_factor(ell: &GradedPolynomial, f: &GradedPolynomial) -> Result<MatrixFactorization, MfError> {
    let q = f.div_exact(ell).ok_or_else(|| MfError::NotADivisor(ell.to_string()))?;
    mf_validate(vec![vec![ell.clone()]], vec![vec![q]], f.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyforms::poly_parse;

    fn p(s: &str, n: usize) -> GradedPolynomial {
        poly_parse(s, n).unwrap()
    }

    #[test]
    fn validation() {
        let e1 = mf_validate(vec![vec![p("x0+x1", 2)]], vec![vec![p("x0^2-x0*x1+x1^2", 2)]], p("x0^3+x1^3", 2)).unwrap();
        assert_eq!(e1, cubic_e1(2, 0, 1).unwrap());
        assert!(mf_validate(vec![vec![p("x0+i*x1", 2)]], vec![vec![p("x0-i*x1", 2)]], p("x0^2+x1^2", 2)).is_ok());
        match mf_validate(vec![vec![p("x0", 1)]], vec![vec![p("x0", 1)]], p("x0^3", 1)) {
            Err(MfError::NotAFactorization { product: "AB", row: 0, col: 0, expected, found }) => {
                assert_eq!(expected, "x0^3");
                assert_eq!(found, "x0^2");
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            mf_validate(vec![vec![p("x0", 1)]], vec![], p("x0", 1)),
            Err(MfError::Shape)
        );
    }

    #[test]
    fn gradings() {
        let e1 = cubic_e1(2, 0, 1).unwrap();
        let g = e1.grading().unwrap();
        assert_eq!(g.rows[0] + g.cols[0], 1);
        let k = knorrer_power(3).unwrap();
        let g = k.grading().unwrap();
        for i in 0..k.rank() {
            for j in 0..k.rank() {
                if let Ok(Some(d)) = k.a()[i][j].homogeneous_degree() {
                    assert_eq!(g.rows[i] + g.cols[j], d as i64);
                }
                if let Ok(Some(d)) = k.b()[j][i].homogeneous_degree() {
                    assert_eq!(2 - g.cols[j] - g.rows[i], d as i64);
                }
            }
        }
        let inhomogeneous = mf_validate(
            vec![vec![p("x0+x0^2", 1)]],
            vec![vec![p("x0", 1)]],
            p("x0^2+x0^3", 1),
        )
        .unwrap();
        assert!(inhomogeneous.grading().is_none());
        assert!(k.swap().grading().is_some());
    }

    #[test]
    fn tensor_products() {
        let kk = mf_tensor(&knorrer(4, 0, 1).unwrap(), &knorrer(4, 2, 3).unwrap()).unwrap();
        assert_eq!(kk.rank(), 2);
        assert_eq!(*kk.f(), p("x0^2+x1^2+x2^2+x3^2", 4));
        let ee = mf_tensor(&cubic_e1(4, 0, 1).unwrap(), &cubic_e1(4, 2, 3).unwrap()).unwrap();
        assert_eq!(*ee.f(), p("x0^3+x1^3+x2^3+x3^3", 4));
        let empty = MatrixFactorization::empty(p("x2^2+x3^2", 4));
        let z = mf_tensor(&knorrer(4, 0, 1).unwrap(), &empty).unwrap();
        assert_eq!(z.rank(), 0);
        assert_eq!(*z.f(), p("x0^2+x1^2+x2^2+x3^2", 4));
        assert_eq!(knorrer_power(3).unwrap().rank(), 4);
    }

    #[test]
    fn tensor_rejects_bad_inputs() {
        let k = knorrer(4, 0, 1).unwrap();
        assert_eq!(mf_tensor(&k, &knorrer(4, 1, 2).unwrap()), Err(MfError::VariableCollision(1)));
        let flipped = mf_tensor_with(&k, &knorrer(4, 2, 3).unwrap(), TensorSign::Flipped);
        assert!(matches!(flipped, Err(MfError::NotAFactorization { .. })));
        let concat = mf_tensor_concat(&knorrer(2, 0, 1).unwrap(), &knorrer(2, 0, 1).unwrap()).unwrap();
        assert_eq!(*concat.f(), p("x0^2+x1^2+x2^2+x3^2", 4));
    }

    #[test]
    fn builders() {
        let f = p("x0^3-x0*x1^2", 2);
        let m = linear_factor(&p("x0-x1", 2), &f).unwrap();
        assert_eq!(m.b()[0][0], p("x0^2+x0*x1", 2));
        assert_eq!(linear_factor(&p("x0", 2), &f).unwrap().b()[0][0], p("x0^2-x1^2", 2));
        assert!(matches!(linear_factor(&p("x0+2*x1", 2), &f), Err(MfError::NotADivisor(_))));
        let e2 = cubic_e2(2, 0, 1).unwrap();
        assert_eq!(e2.a()[0][0], p("x0+zeta3*x1", 2));
        let sum = e2.direct_sum(&cubic_e1(2, 0, 1).unwrap()).unwrap();
        assert_eq!(sum.rank(), 2);
        assert!(e2.direct_sum(&knorrer(2, 0, 1).unwrap()).is_err());
        let moved = e2.relabel(&[3, 1], 4).unwrap();
        assert_eq!(*moved.f(), p("x3^3+x1^3", 4));
    }
}
