//! Shioda's enumeration of Hodge classes on Fermat hypersurfaces
//! `x0^m + … + x_{n+1}^m = 0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::Rational;
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FermatError {
    #[error("degree m = {0} must be at least 2")]
    DegreeTooSmall(u32),
    #[error("dimension n = {0} must be even and at least 2")]
    BadDimension(u32),
    #[error("entries of {0:?} do not sum to 0 mod {1}")]
    NotInCharacterGroup(Vec<u32>, u32),
}

/// A character `(a0, …, a_{n+1})` of `(Z/m)^{n+2}` with entries summing to 0 mod m.
/// Entries are stored as least nonnegative residues.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ShiodaCharacter {
    m: u32,
    entries: Vec<u32>,
}

impl ShiodaCharacter {
    pub fn new(m: u32, entries: &[i64]) -> Result<Self, FermatError> {
        if m < 2 {
            return Err(FermatError::DegreeTooSmall(m));
        }
        let entries: Vec<u32> = entries.iter().map(|&a| a.mod_floor(&(m as i64)) as u32).collect();
        let sum: u64 = entries.iter().map(|&a| a as u64).sum();
        if !sum.is_multiple_of(m as u64) {
            return Err(FermatError::NotInCharacterGroup(entries, m));
        }
        Ok(ShiodaCharacter { m, entries })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `|α| = Σ ⟨a_i⟩ / m`.
    pub fn weight(&self) -> Rational {
        let sum: u64 = self.entries.iter().map(|&a| a as u64).sum();
        Rational::new(BigInt::from(sum), BigInt::from(self.m))
    }

    /// `tα`, entrywise mod m.
    pub fn scale(&self, t: u32) -> ShiodaCharacter {
        let entries = self
            .entries
            .iter()
            .map(|&a| ((a as u64 * t as u64) % self.m as u64) as u32)
            .collect();
        ShiodaCharacter { m: self.m, entries }
    }

    pub fn all_nonzero(&self) -> bool {
        self.entries.iter().all(|&a| a != 0)
    }
}

impl fmt::Display for ShiodaCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BSetOptions {
    pub exec: Execution,
    /// For prime `m`, test only `t = 1..=(m-1)/2`. Ignored for composite `m`.
    pub prime_shortcut: bool,
}

fn is_prime(m: u32) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

fn multipliers(m: u32, shortcut: bool) -> Vec<u32> {
    if shortcut && is_prime(m) {
        (1..=(m - 1) / 2).collect()
    } else {
        (1..m).filter(|t| t.gcd(&m) == 1).collect()
    }
}

fn check_args(m: u32, n: u32) -> Result<(), FermatError> {
    if m < 2 {
        return Err(FermatError::DegreeTooSmall(m));
    }
    if n < 2 || !n.is_multiple_of(2) {
        return Err(FermatError::BadDimension(n));
    }
    Ok(())
}

/// Whether `|tα| = target/m` for every multiplier `t`. Entries are nonzero.
fn in_b(entries: &[u32], m: u32, target: u64, ts: &[u32]) -> bool {
    ts.iter().all(|&t| {
        let s: u64 = entries.iter().map(|&a| (a as u64 * t as u64) % m as u64).sum();
        s == target
    })
}

/// All members of B for the Fermat hypersurface of degree `m` and dimension `n`,
/// in lexicographic order.
pub fn b_set(m: u32, n: u32) -> Result<Vec<ShiodaCharacter>, FermatError> {
    b_set_with(m, n, BSetOptions::default())
}

pub fn b_set_with(m: u32, n: u32, opts: BSetOptions) -> Result<Vec<ShiodaCharacter>, FermatError> {
    check_args(m, n)?;
    let len = n as usize + 2;
    let target = m as u64 * (n as u64 / 2 + 1);
    let ts = multipliers(m, opts.prime_shortcut);

    let chunks = par::map_range(opts.exec, 1..m as usize, |a0| {
        let mut out = Vec::new();
        let mut prefix = vec![a0 as u32];
        extend(&mut prefix, len, m, target, &ts, &mut out);
        out
    });
    Ok(chunks.into_iter().flatten().collect())
}

fn extend(prefix: &mut Vec<u32>, len: usize, m: u32, target: u64, ts: &[u32], out: &mut Vec<ShiodaCharacter>) {
    let partial: u64 = prefix.iter().map(|&a| a as u64).sum();
    if prefix.len() + 1 == len {
        let last = ((m as u64 - partial % m as u64) % m as u64) as u32;
        if last == 0 || partial + last as u64 != target {
            return;
        }
        prefix.push(last);
        if in_b(prefix, m, target, ts) {
            out.push(ShiodaCharacter { m, entries: prefix.clone() });
        }
        prefix.pop();
        return;
    }
    // Remaining entries each contribute at least 1, so prune on the t = 1 weight.
    let remaining = (len - prefix.len()) as u64;
    for a in 1..m {
        let s = partial + a as u64;
        if s + (remaining - 1) > target {
            break;
        }
        prefix.push(a);
        extend(prefix, len, m, target, ts, out);
        prefix.pop();
    }
}

/// `dim_Q Hdg = |B|`.
pub fn hdg_dim_fermat(m: u32, n: u32) -> Result<usize, FermatError> {
    Ok(b_set(m, n)?.len())
}
