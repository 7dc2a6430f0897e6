//! End-to-end acceptance criteria. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nchodge_core::fermat::{b_set, ShiodaCharacter};
use nchodge_core::hodge::{
    boundary_devissage, classical_hodge_numbers, cycle_check, hn_dims, hp0_dim, nc_filtration, psi, psi_expanded,
};
use nchodge_core::mfcat::{
    chern, chern_product, chern_raw, cubic_e1, cubic_e2, knorrer, knorrer_power, linear_factor, mf_tensor,
    q_rank, wedge_classes, ChernClass, MatrixFactorization,
};
use nchodge_core::milnor::MilnorAlgebra;
use nchodge_core::{poly_parse, CycloNumber, DiffForm, GradedPolynomial, Monomial};

/// Independent checks that share no code path with the library's Milnor algebra.
mod oracle {
    use super::*;

    const P: u64 = 1_000_003;

    fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
        if nvars == 0 {
            return if d == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 0..=d {
            for mut rest in monomials(nvars - 1, d - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    fn mod_p(c: &CycloNumber) -> u64 {
        let r = c.as_rational().expect("rational coefficients");
        let num = (r.numer() % P as i64).to_string().parse::<i64>().unwrap().rem_euclid(P as i64) as u64;
        let den = (r.denom() % P as i64).to_string().parse::<i64>().unwrap().rem_euclid(P as i64) as u64;
        num * pow(den, P - 2) % P
    }

    fn pow(mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        b %= P;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        acc
    }

    fn rank(mut rows: Vec<Vec<u64>>) -> usize {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, p);
            let inv = pow(rows[r][c], P - 2);
            for x in rows[r].iter_mut() {
                *x = *x * inv % P;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let k = rows[i][c];
                    for j in 0..ncols {
                        rows[i][j] = (rows[i][j] + P - k * rows[r][j] % P) % P;
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// `dim [Q/J]_d` by dense elimination mod a large prime of all
    /// products `x^b · ∂f/∂x_i` of degree `d`.
    pub fn milnor_dim(f: &GradedPolynomial, d: i64) -> usize {
        if d < 0 {
            return 0;
        }
        let d = d as u32;
        let nvars = f.nvars();
        let e = f.total_degree().unwrap();
        let cols = monomials(nvars, d);
        let index: BTreeMap<Vec<u32>, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        if d + 1 < e {
            return cols.len();
        }
        let terms: Vec<(Vec<u32>, u64)> = f.terms().map(|(m, c)| (m.exponents().to_vec(), mod_p(c))).collect();
        let mut rows = Vec::new();
        for i in 0..nvars {
            for b in monomials(nvars, d + 1 - e) {
                let mut row = vec![0u64; cols.len()];
                for (m, c) in &terms {
                    if m[i] == 0 {
                        continue;
                    }
                    let mut x = m.clone();
                    x[i] -= 1;
                    for (k, bk) in b.iter().enumerate() {
                        x[k] += bk;
                    }
                    let col = index[&x];
                    row[col] = (row[col] + c * m[i] as u64) % P;
                }
                rows.push(row);
            }
        }
        cols.len() - rank(rows)
    }

    /// Coefficients of `((1 - s^{e-1}) / (1 - s))^{nvars}`.
    pub fn generating_function(e: u32, nvars: usize) -> Vec<usize> {
        let base = vec![1usize; (e - 1) as usize];
        let mut acc = vec![1usize];
        for _ in 0..nvars {
            let mut next = vec![0usize; acc.len() + base.len() - 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in base.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            acc = next;
        }
        acc
    }
}

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, label: &str, actual: T, expected: T) {
        if actual != expected {
            self.failures.push(format!("{label}: expected {expected:?}, got {actual:?}"));
        }
    }
}

fn poly(s: &str, nvars: usize) -> GradedPolynomial {
    poly_parse(s, nvars).unwrap()
}

fn fermat(e: u32, n: u32) -> MilnorAlgebra {
    let terms: Vec<String> = (0..n + 2).map(|i| format!("x{i}^{e}")).collect();
    MilnorAlgebra::new(poly(&terms.join("+"), n as usize + 2), n).unwrap()
}

fn oracle_hilbert(m: &MilnorAlgebra) -> Vec<usize> {
    (0..=m.socle_degree() + 1).map(|d| oracle::milnor_dim(m.f(), d)).collect()
}

fn criterion_1(out: &mut Outcome) {
    let m = fermat(3, 2);
    out.eq("hilbert", m.hilbert_function(), vec![1, 4, 6, 4, 1]);
    out.eq("hilbert (oracle, through socle + 1)", oracle_hilbert(&m), vec![1, 4, 6, 4, 1, 0]);
    out.eq("hp0_dim", hp0_dim(&m), 6);
    out.eq("nc_filtration", nc_filtration(&m), BTreeMap::from([(0, 6)]));
    out.eq(
        "classical",
        classical_hodge_numbers(&m),
        BTreeMap::from([((0, 2), 0), ((1, 1), 6), ((2, 0), 0)]),
    );
}

fn criterion_2(out: &mut Outcome) {
    type Builder = fn(usize, usize, usize) -> Result<MatrixFactorization, nchodge_core::mfcat::MfError>;
    let cases: [(Builder, [usize; 2], Builder, [usize; 2], &str); 6] = [
        (cubic_e1, [0, 1], cubic_e1, [2, 3], "9*(x1-x0)*(x3-x2)"),
        (cubic_e2, [0, 1], cubic_e1, [2, 3], "9*zeta3*(zeta3*x1-x0)*(x3-x2)"),
        (cubic_e1, [0, 1], cubic_e2, [2, 3], "9*zeta3*(x1-x0)*(zeta3*x3-x2)"),
        (cubic_e2, [0, 1], cubic_e2, [2, 3], "9*zeta3^2*(zeta3*x1-x0)*(zeta3*x3-x2)"),
        (cubic_e1, [0, 2], cubic_e1, [1, 3], "9*(x2-x0)*(x3-x1)"),
        (cubic_e1, [0, 2], cubic_e2, [1, 3], "9*zeta3*(x2-x0)*(zeta3*x3-x1)"),
    ];
    let m = fermat(3, 2);
    let mut classes = Vec::new();
    for (k, (bx, vx, by, vy, expected)) in cases.into_iter().enumerate() {
        let mf = match mf_tensor(&bx(4, vx[0], vx[1]).unwrap(), &by(4, vy[0], vy[1]).unwrap()) {
            Ok(mf) => mf,
            Err(e) => {
                out.failures.push(format!("class {}: validation failed: {e}", k + 1));
                continue;
            }
        };
        let c = chern(&mf, &m).unwrap();
        let expected = poly(expected, 4);
        out.expect(*c.raw() == expected, || {
            format!("class {}: expected {expected}, got {}", k + 1, c.raw())
        });
        classes.push(c);
    }
    out.eq("q_rank", q_rank(&classes).unwrap(), 6);
}

fn criterion_3(out: &mut Outcome) {
    let minus_2i = &CycloNumber::i() * &CycloNumber::from_int(-2);
    for n in [0u32, 2, 4] {
        let k = (n + 2) / 2;
        let m = fermat(2, n);
        let mf = knorrer_power(k as usize).unwrap();
        let c = chern(&mf, &m).unwrap();
        let expected = GradedPolynomial::constant(n as usize + 2, minus_2i.pow(k));
        out.eq(&format!("n={n} chern"), c.raw().clone(), expected);
        out.eq(&format!("n={n} hp0_dim"), hp0_dim(&m), 1);
    }
}

fn criterion_4(out: &mut Outcome) {
    let m = fermat(4, 2);
    let hilbert = m.hilbert_function();
    let mut oracle = oracle_hilbert(&m);
    out.eq("trailing oracle dimension", oracle.pop(), Some(0));
    out.eq("hilbert vs oracle", hilbert, oracle);
    out.eq(
        "classical",
        classical_hodge_numbers(&m),
        BTreeMap::from([((0, 2), 1), ((1, 1), 19), ((2, 0), 1)]),
    );
    out.eq("hp0_dim", hp0_dim(&m), 21);
    out.eq("hn", hn_dims(&m), BTreeMap::from([(-2, 21), (-1, 21), (0, 20), (1, 1), (2, 0)]));
    // HN from oracle dimensions: hn(m) = Σ_{m' ≥ m} dim [Ω_f]_{(2 - m')·4}.
    let oracle_hn: BTreeMap<i64, usize> = (-2..=2)
        .map(|k| (k, (k..=6).map(|j| oracle::milnor_dim(m.f(), (2 - j) * 4 - 4)).sum()))
        .collect();
    out.eq("hn vs oracle", hn_dims(&m), oracle_hn);
}

fn criterion_5(out: &mut Outcome) {
    let ch = |m: u32, e: &[i64]| ShiodaCharacter::new(m, e).unwrap();
    out.eq("b_set(2,2)", b_set(2, 2).unwrap(), vec![ch(2, &[1, 1, 1, 1])]);
    let cubic = [[1, 1, 2, 2], [1, 2, 1, 2], [1, 2, 2, 1], [2, 1, 1, 2], [2, 1, 2, 1], [2, 2, 1, 1]];
    out.eq("b_set(3,2)", b_set(3, 2).unwrap(), cubic.iter().map(|e| ch(3, e)).collect());
    let six = b_set(6, 2).unwrap();
    out.expect(six.contains(&ch(6, &[2, 2, 3, 5])), || "(2,2,3,5) missing from b_set(6,2)".into());
}

const GRID_E: [u32; 4] = [2, 3, 4, 5];
const GRID_N: [u32; 2] = [0, 2];

fn criterion_6(out: &mut Outcome) {
    for e in GRID_E {
        for n in GRID_N {
            let m = fermat(e, n);
            let tag = format!("e={e} n={n}");
            let h = m.hilbert_function();
            out.eq(&format!("{tag} total"), m.total_dimension(), (e as usize - 1).pow(n + 2));
            out.expect(h.iter().eq(h.iter().rev()), || format!("{tag} hilbert {h:?} not palindromic"));
            out.eq(
                &format!("{tag} filtration sum"),
                nc_filtration(&m).values().sum::<usize>(),
                hp0_dim(&m),
            );
            let mut oracle = oracle_hilbert(&m);
            out.eq(&format!("{tag} oracle past socle"), oracle.pop(), Some(0));
            out.eq(&format!("{tag} hilbert vs row reduction"), h.clone(), oracle);
            let mut gf = oracle::generating_function(e, n as usize + 2);
            gf.truncate(h.len());
            out.eq(&format!("{tag} hilbert vs generating function"), h, gf);
        }
    }
}

fn random_q(rng: &mut ChaCha8Rng, nvars: usize, d: u32, zeta: &CycloNumber) -> GradedPolynomial {
    let mut q = GradedPolynomial::zero(nvars);
    for mono in Monomial::all_of_degree(nvars, d) {
        if rng.gen_bool(0.5) {
            let a = CycloNumber::from_int(rng.gen_range(-5..=5));
            let b = CycloNumber::from_int(rng.gen_range(-2..=2));
            q.add_term(mono, &a + &(&b * zeta));
        }
    }
    q
}

fn criterion_7(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (name, m, zeta) in [
        ("cubic", fermat(3, 2), CycloNumber::zeta(3).unwrap()),
        ("quartic", fermat(4, 2), CycloNumber::i()),
    ] {
        let nvars = m.nvars() as i64;
        let e = m.e() as i64;
        for j in 1..=nvars {
            let d = j * e - nvars;
            if d < 0 || m.dim(d) == 0 {
                continue;
            }
            for deg in [nvars / 2 - j, nvars / 2 - j - 1] {
                for trial in 0..20 {
                    let tag = format!("{name} j={j} m={deg} #{trial}");
                    let q = random_q(&mut rng, nvars as usize, d as u32, &zeta);
                    let x = psi(&m, &q, j, deg).unwrap();
                    out.expect(cycle_check(&x, &m), || format!("{tag}: not a cycle"));
                    out.expect(psi_expanded(&m, &q, j, deg).unwrap() == x, || format!("{tag}: expansions differ"));
                    let omega = DiffForm::top(q.clone());
                    let alpha = omega.euler_contract();
                    let b = boundary_devissage(&m, &alpha, j, nvars as u32 - 1);
                    out.expect(b == psi(&m, &q, j, 0), || format!("{tag}: boundary differs from psi at m=0"));
                    out.expect(alpha.d() == omega.scale(&CycloNumber::from_int(j * e)), || {
                        format!("{tag}: d(eps(omega)) != je*omega")
                    });
                }
            }
        }
    }
}

fn criterion_8(out: &mut Outcome) {
    let builders = [
        ("E1", cubic_e1(2, 0, 1).unwrap()),
        ("E2", cubic_e2(2, 0, 1).unwrap()),
        ("Knorrer", knorrer(2, 0, 1).unwrap()),
    ];
    for (a, x) in &builders {
        for (b, y) in &builders {
            let t = mf_tensor(&x.relabel(&[0, 1], 4).unwrap(), &y.relabel(&[2, 3], 4).unwrap()).unwrap();
            let lhs = chern_raw(&t).unwrap();
            let rhs = wedge_classes(&chern_raw(x).unwrap(), &[0, 1], &chern_raw(y).unwrap(), &[2, 3], 4).unwrap();
            out.expect(lhs == rhs, || format!("{a} x {b}: chern(F⊗G) = {lhs}, product = {rhs}"));
            if x.f() == y.f() {
                // Same hypersurface on both sides: compare reduced classes too.
                let f = &x.f().relabel(&[0, 1], 4).unwrap() + &y.f().relabel(&[2, 3], 4).unwrap();
                let m = MilnorAlgebra::new(f, 2).unwrap();
                let m1 = MilnorAlgebra::new(x.f().clone(), 0).unwrap();
                let prod = chern_product(&chern(x, &m1).unwrap(), &[0, 1], &chern(y, &m1).unwrap(), &[2, 3], &m).unwrap();
                out.expect(chern(&t, &m).unwrap() == prod, || format!("{a} x {b}: reduced classes differ"));
            }
        }
    }
    let f = poly("x0^3-x0*x1^2", 2);
    let m = MilnorAlgebra::new(f.clone(), 0).unwrap();
    let mut total = GradedPolynomial::zero(2);
    for ell in ["x0", "x0-x1", "x0+x1"] {
        total = &total + chern(&linear_factor(&poly(ell, 2), &f).unwrap(), &m).unwrap().raw();
    }
    let class = ChernClass::from_raw(total, &m).unwrap();
    out.expect(class.is_zero(), || format!("linear factor classes sum to {:?}", class.reduced()));
}

fn criterion_9(out: &mut Outcome) {
    for e in GRID_E {
        for n in GRID_N {
            let m = fermat(e, n);
            let hn = hn_dims(&m);
            for (&k, &h) in &hn {
                let next = hn.get(&(k + 1)).copied().unwrap_or(0);
                let piece = oracle::milnor_dim(m.f(), (n as i64 / 2 + 1 - k) * e as i64 - (n as i64 + 2));
                out.expect(h >= next && h - next == piece, || {
                    format!("e={e} n={n} m={k}: hn {h} - {next} != {piece}")
                });
            }
        }
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn(&mut Outcome), Duration); 9] = [
        (1, "cubic surface Milnor and Hodge data", criterion_1, Duration::from_secs(1)),
        (2, "six cubic-surface Chern characters and their Q-rank", criterion_2, Duration::from_secs(5)),
        (3, "quadric Knorrer classes", criterion_3, Duration::from_secs(5)),
        (4, "quartic K3 Hodge numbers and HN", criterion_4, Duration::from_secs(5)),
        (5, "Shioda B-sets", criterion_5, Duration::from_secs(5)),
        (6, "Milnor invariants grid", criterion_6, Duration::from_secs(30)),
        (7, "psi cycles, expansions and boundary", criterion_7, Duration::from_secs(30)),
        (8, "multiplicativity and linear-factor relation", criterion_8, Duration::from_secs(10)),
        (9, "HN exact-sequence dimensions", criterion_9, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let mut out = Outcome::new();
        let start = Instant::now();
        run(&mut out);
        let elapsed = start.elapsed();
        out.expect(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"));
        let status = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {id}: {status}  {name} ({elapsed:.2?})");
        for f in &out.failures {
            println!("    {f}");
        }
        if !out.failures.is_empty() {
            failed += 1;
        }
    }
    println!("acceptance: {}/9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
