//! Reproduction suite for the worked examples: Milnor algebras, Hodge
//! dimensions, Chern characters, Shioda's B-sets and the cycle maps.

use std::fmt::{self, Display};
use std::str::FromStr;

use serde::Serialize;

use crate::exactfield::CycloNumber;
use crate::fermat::{b_set, ShiodaCharacter};
use crate::hodge::{
    boundary_devissage, classical_hodge_numbers, cycle_check, hn_dims, hp0_dim, nc_filtration, psi, psi_expanded,
};
use crate::mfcat::{
    chern, chern_raw, cubic_e1, cubic_e2, knorrer, knorrer_power, linear_factor, mf_tensor_with,
    q_rank, wedge_classes, ChernClass, MatrixFactorization, MfError, TensorSign,
};
use crate::milnor::MilnorAlgebra;
use crate::par::{self, Execution};
use crate::polyforms::{poly_parse, DiffForm, GradedPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    All,
    Milnor,
    Hodge,
    Chern,
    Fermat,
    Psi,
}

impl FromStr for Scope {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "all" => Scope::All,
            "milnor" => Scope::Milnor,
            "hodge" => Scope::Hodge,
            "chern" => Scope::Chern,
            "fermat" => Scope::Fermat,
            "psi" => Scope::Psi,
            _ => return Err(format!("unknown scope `{s}`")),
        })
    }
}

impl Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::All => "all",
            Scope::Milnor => "milnor",
            Scope::Hodge => "hodge",
            Scope::Chern => "chern",
            Scope::Fermat => "fermat",
            Scope::Psi => "psi",
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub exec: Execution,
    pub tensor_sign: TensorSign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl RunReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn check(id: impl Into<String>, expected: impl Display, actual: impl Display) -> Check {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Check { id: id.into(), pass: expected == actual, expected, actual }
}

fn outcome<T: Display, E: Display>(r: Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn list<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn poly(s: &str, nvars: usize) -> GradedPolynomial {
    poly_parse(s, nvars).expect("built-in polynomial")
}

fn fermat_poly(e: u32, nvars: usize) -> GradedPolynomial {
    let text: Vec<String> = (0..nvars).map(|i| format!("x{i}^{e}")).collect();
    poly(&text.join("+"), nvars)
}

fn fermat_algebra(e: u32, n: u32) -> MilnorAlgebra {
    MilnorAlgebra::new(fermat_poly(e, n as usize + 2), n).expect("Fermat hypersurfaces are isolated")
}

type Task = fn(&VerifyOptions) -> Vec<Check>;

fn milnor_checks(_: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    let cubic = fermat_algebra(3, 2);
    out.push(check("milnor.cubic.hilbert", "[1, 4, 6, 4, 1]", list(cubic.hilbert_function())));
    let quartic = fermat_algebra(4, 2);
    out.push(check(
        "milnor.quartic.hilbert",
        "[1, 4, 10, 16, 19, 16, 10, 4, 1]",
        list(quartic.hilbert_function()),
    ));
    out.push(check("milnor.quadric.hilbert", "[1]", list(fermat_algebra(2, 2).hilbert_function())));
    for e in 2..=5u32 {
        for n in [0u32, 2] {
            let m = fermat_algebra(e, n);
            let h = m.hilbert_function();
            let palindromic = h.iter().eq(h.iter().rev());
            out.push(check(
                format!("milnor.grid.e{e}.n{n}"),
                format!("total {} palindromic true", (e as usize - 1).pow(n + 2)),
                format!("total {} palindromic {palindromic}", m.total_dimension()),
            ));
        }
    }
    out
}

fn hodge_checks(_: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    let show_classical = |m: &MilnorAlgebra| {
        list(classical_hodge_numbers(m).into_iter().map(|((p, q), d)| format!("h{p},{q}={d}")))
    };
    let show_map = |map: std::collections::BTreeMap<i64, usize>| list(map.into_iter().map(|(k, v)| format!("{k}:{v}")));

    let cubic = fermat_algebra(3, 2);
    out.push(check("hodge.cubic.hp0", 6, hp0_dim(&cubic)));
    out.push(check("hodge.cubic.filtration", "[0:6]", show_map(nc_filtration(&cubic))));
    out.push(check("hodge.cubic.classical", "[h0,2=0, h1,1=6, h2,0=0]", show_classical(&cubic)));

    let quartic = fermat_algebra(4, 2);
    out.push(check("hodge.quartic.hp0", 21, hp0_dim(&quartic)));
    out.push(check("hodge.quartic.classical", "[h0,2=1, h1,1=19, h2,0=1]", show_classical(&quartic)));
    out.push(check("hodge.quartic.hn", "[-2:21, -1:21, 0:20, 1:1, 2:0]", show_map(hn_dims(&quartic))));

    for n in [0u32, 2, 4] {
        out.push(check(format!("hodge.quadric.n{n}.hp0"), 1, hp0_dim(&fermat_algebra(2, n))));
    }
    out
}

fn chern_class_check(id: &str, expected: &str, nvars: usize, mf: Result<MatrixFactorization, MfError>) -> Check {
    let expected = poly(expected, nvars);
    check(id, &expected, outcome(mf.and_then(|mf| chern_raw(&mf))))
}

fn chern_rank_one(_: &VerifyOptions) -> Vec<Check> {
    vec![
        chern_class_check("chern.e1", "3*(x1-x0)", 2, cubic_e1(2, 0, 1)),
        chern_class_check("chern.e2", "3*zeta3*(zeta3*x1-x0)", 2, cubic_e2(2, 0, 1)),
        chern_class_check("chern.knorrer", "-2*i", 2, knorrer(2, 0, 1)),
    ]
}

/// The six rank-2 factorizations of the Fermat cubic surface built from `E1`, `E2`.
fn cubic_surface_factorizations(sign: TensorSign) -> Vec<(&'static str, &'static str, Result<MatrixFactorization, MfError>)> {
    type Builder = fn(usize, usize, usize) -> Result<MatrixFactorization, MfError>;
    let specs: [(&str, &str, Builder, [usize; 2], Builder, [usize; 2]); 6] = [
        ("chern.cubic.1", "9*(x1-x0)*(x3-x2)", cubic_e1, [0, 1], cubic_e1, [2, 3]),
        ("chern.cubic.2", "9*zeta3*(zeta3*x1-x0)*(x3-x2)", cubic_e2, [0, 1], cubic_e1, [2, 3]),
        ("chern.cubic.3", "9*zeta3*(x1-x0)*(zeta3*x3-x2)", cubic_e1, [0, 1], cubic_e2, [2, 3]),
        ("chern.cubic.4", "9*zeta3^2*(zeta3*x1-x0)*(zeta3*x3-x2)", cubic_e2, [0, 1], cubic_e2, [2, 3]),
        ("chern.cubic.5", "9*(x2-x0)*(x3-x1)", cubic_e1, [0, 2], cubic_e1, [1, 3]),
        ("chern.cubic.6", "9*zeta3*(x2-x0)*(zeta3*x3-x1)", cubic_e1, [0, 2], cubic_e2, [1, 3]),
    ];
    specs
        .into_iter()
        .map(|(id, expected, bx, vx, by, vy)| {
            let mf = bx(4, vx[0], vx[1]).and_then(|x| by(4, vy[0], vy[1]).and_then(|y| mf_tensor_with(&x, &y, sign)));
            (id, expected, mf)
        })
        .collect()
}

fn chern_cubic_surface(opts: &VerifyOptions) -> Vec<Check> {
    let m = fermat_algebra(3, 2);
    let mut out = Vec::new();
    let mut classes: Vec<ChernClass> = Vec::new();
    for (id, expected, mf) in cubic_surface_factorizations(opts.tensor_sign) {
        if let Ok(c) = mf.as_ref().map_err(Clone::clone).and_then(|mf| chern(mf, &m)) {
            classes.push(c);
        }
        out.push(chern_class_check(id, expected, 4, mf));
    }
    let rank = if classes.len() == 6 { outcome(q_rank(&classes)) } else { "error: missing classes".into() };
    out.push(check("chern.cubic.q_rank", 6, rank));
    out
}

fn chern_knorrer_powers(_: &VerifyOptions) -> Vec<Check> {
    let minus_2i = &CycloNumber::i() * &CycloNumber::from_int(-2);
    (1..=3usize)
        .map(|k| {
            let expected = GradedPolynomial::constant(2 * k, minus_2i.pow(k as u32));
            check(format!("chern.quadric.n{}", 2 * k - 2), &expected, outcome(knorrer_power(k).and_then(|mf| chern_raw(&mf))))
        })
        .collect()
}

/// Raw classes of `x ⊗ y` and of the product of the factors' classes, with
/// `y` moved to the variables after those of `x`.
fn multiplicativity_one(
    x: &MatrixFactorization,
    y: &MatrixFactorization,
    sign: TensorSign,
) -> Result<(GradedPolynomial, GradedPolynomial), MfError> {
    let (p, q) = (x.nvars(), y.nvars());
    let mx: Vec<usize> = (0..p).collect();
    let my: Vec<usize> = (p..p + q).collect();
    let t = mf_tensor_with(&x.relabel(&mx, p + q)?, &y.relabel(&my, p + q)?, sign)?;
    let lhs = chern_raw(&t)?;
    let rhs = wedge_classes(&chern_raw(x)?, &mx, &chern_raw(y)?, &my, p + q)?;
    Ok((lhs, rhs))
}

fn chern_multiplicativity(opts: &VerifyOptions) -> Vec<Check> {
    let named = [
        ("e1", cubic_e1(2, 0, 1)),
        ("e2", cubic_e2(2, 0, 1)),
        ("knorrer", knorrer(2, 0, 1)),
    ];
    let mut out = Vec::new();
    for (a, x) in &named {
        for (b, y) in &named {
            let id = format!("chern.multiplicativity.{a}.{b}");
            let result = match (x, y) {
                (Ok(x), Ok(y)) => multiplicativity_one(x, y, opts.tensor_sign),
                _ => Err(MfError::Shape),
            };
            out.push(match result {
                Ok((lhs, rhs)) => check(id, rhs, lhs),
                Err(e) => check(id, "product of the factors' classes", format!("error: {e}")),
            });
        }
    }
    out
}

fn chern_linear_relation(_: &VerifyOptions) -> Vec<Check> {
    let f = poly("x0^3-x0*x1^2", 2);
    let result = (|| -> Result<bool, MfError> {
        let m = MilnorAlgebra::new(f.clone(), 0)?;
        let mut total = GradedPolynomial::zero(2);
        for ell in ["x0", "x0-x1", "x0+x1"] {
            total = &total + chern(&linear_factor(&poly(ell, 2), &f)?, &m)?.raw();
        }
        Ok(ChernClass::from_raw(total, &m)?.is_zero())
    })();
    vec![check("chern.linear_factors.sum_vanishes", true, outcome(result))]
}

fn fermat_checks(_: &VerifyOptions) -> Vec<Check> {
    let show = |r: Result<Vec<ShiodaCharacter>, _>| outcome(r.map(list));
    let mut out = vec![
        check("fermat.b_set.m2.n2", "[(1,1,1,1)]", show(b_set(2, 2))),
        check(
            "fermat.b_set.m3.n2",
            "[(1,1,2,2), (1,2,1,2), (1,2,2,1), (2,1,1,2), (2,1,2,1), (2,2,1,1)]",
            show(b_set(3, 2)),
        ),
    ];
    let target = ShiodaCharacter::new(6, &[2, 2, 3, 5]).expect("valid character");
    out.push(check("fermat.b_set.m6.n2.contains_2235", true, outcome(b_set(6, 2).map(|b| b.contains(&target)))));
    out.push(check(
        "fermat.hdg.m3.n2.equals_hp0",
        hp0_dim(&fermat_algebra(3, 2)),
        outcome(b_set(3, 2).map(|b| b.len())),
    ));
    out
}

/// Admissible `(j, m)` pairs: nonempty graded pieces and nonnegative u-exponent.
fn admissible(m: &MilnorAlgebra) -> Vec<(i64, i64)> {
    let (e, nvars) = (m.e() as i64, m.nvars() as i64);
    let mut out = Vec::new();
    for j in 1..=nvars {
        let d = j * e - nvars;
        if d < 0 || m.dim(d) == 0 {
            continue;
        }
        let top = nvars / 2 - j;
        for deg in [top, top - 1] {
            out.push((j, deg));
        }
    }
    out
}

fn psi_suite(name: &str, m: &MilnorAlgebra) -> Vec<Check> {
    let mut out = Vec::new();
    let nvars = m.nvars();
    let e = m.e() as i64;
    for (j, deg) in admissible(m) {
        let d = (j * e - nvars as i64) as u32;
        let mut cycles = true;
        let mut expansions = true;
        let mut boundary = true;
        let mut euler = true;
        for mono in m.milnor_basis(d) {
            let q = GradedPolynomial::term(mono, CycloNumber::one());
            let (Ok(x), Ok(y)) = (psi(m, &q, j, deg), psi_expanded(m, &q, j, deg)) else {
                cycles = false;
                continue;
            };
            cycles &= cycle_check(&x, m);
            expansions &= x == y;
            let omega = DiffForm::top(q.clone());
            let alpha = omega.euler_contract();
            if nvars as i64 / 2 >= j {
                let b = boundary_devissage(m, &alpha, j, nvars as u32 - 1);
                boundary &= b.is_ok() && b == psi(m, &q, j, 0);
            }
            euler &= alpha.d() == omega.scale(&CycloNumber::from_int(j * e));
        }
        let id = format!("psi.{name}.j{j}.m{deg}");
        out.push(check(
            id,
            "cycle true expansions true boundary true euler true",
            format!("cycle {cycles} expansions {expansions} boundary {boundary} euler {euler}"),
        ));
    }
    out
}

fn psi_checks(_: &VerifyOptions) -> Vec<Check> {
    let mut out = psi_suite("cubic", &fermat_algebra(3, 2));
    out.extend(psi_suite("quartic", &fermat_algebra(4, 2)));
    out.push(psi_non_cycle(&fermat_algebra(2, 0)));
    out
}

/// `vol·t` over `x0² + x1²` is not a cycle: the `λ_{t df}` term survives.
fn psi_non_cycle(m: &MilnorAlgebra) -> Check {
    let x = crate::hodge::MixedElement::term(DiffForm::top(GradedPolynomial::one(m.nvars())), 1, 0, false);
    check("psi.negative_control.vol_t", false, cycle_check(&x, m))
}

fn tasks(scope: Scope) -> Vec<Task> {
    let milnor: Vec<Task> = vec![milnor_checks];
    let hodge: Vec<Task> = vec![hodge_checks];
    let chern: Vec<Task> = vec![
        chern_rank_one,
        chern_cubic_surface,
        chern_knorrer_powers,
        chern_multiplicativity,
        chern_linear_relation,
    ];
    let fermat: Vec<Task> = vec![fermat_checks];
    let psi: Vec<Task> = vec![psi_checks];
    match scope {
        Scope::All => [milnor, hodge, chern, fermat, psi].concat(),
        Scope::Milnor => milnor,
        Scope::Hodge => hodge,
        Scope::Chern => chern,
        Scope::Fermat => fermat,
        Scope::Psi => psi,
    }
}

/// Runs every check in `scope`. Independent groups may run concurrently; the
/// report order is fixed.
pub fn run_verify(scope: Scope, opts: VerifyOptions) -> RunReport {
    let groups = par::map_slice(opts.exec, &tasks(scope), |task| task(&opts));
    let checks: Vec<Check> = groups.into_iter().flatten().collect();
    let pass = checks.iter().all(|c| c.pass);
    RunReport { suite: scope.to_string(), checks, pass }
}
