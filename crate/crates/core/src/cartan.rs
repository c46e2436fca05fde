//! Cartan data with a diagram involution, the root lattice, and the
//! restricted Weyl group generators.
//!
//! Node indices are 0-based in code and 1-based in every text format.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A Cartan datum as read from a file, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCartan {
    #[serde(default)]
    pub name: String,
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizer: Vec<i64>,
    /// 1-indexed permutation.
    pub tau: Vec<usize>,
}

impl RawCartan {
    /// Every violated condition, in a fixed order; empty iff valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.cartan.len();
        if n == 0 {
            out.push("empty index set".to_string());
            return out;
        }
        if self.cartan.iter().any(|row| row.len() != n) {
            out.push(format!("cartan matrix is not {n}x{n}"));
            return out;
        }
        if self.symmetrizer.len() != n {
            out.push(format!("symmetrizer has length {} (expected {n})", self.symmetrizer.len()));
        }
        if self.tau.len() != n {
            out.push(format!("tau has length {} (expected {n})", self.tau.len()));
        }
        let c = &self.cartan;
        for i in 0..n {
            if c[i][i] != 2 {
                out.push(format!("c_ii = 2 fails at i = {}", i + 1));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && c[i][j] > 0 {
                    out.push(format!("c_ij ≤ 0 fails at (i,j) = ({},{})", i + 1, j + 1));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if (c[i][j] == 0) != (c[j][i] == 0) {
                    out.push(format!("c_ij = 0 ⇔ c_ji = 0 fails at (i,j) = ({},{})", i + 1, j + 1));
                }
            }
        }
        let eps_ok = self.symmetrizer.len() == n;
        if eps_ok {
            for (i, e) in self.symmetrizer.iter().enumerate() {
                if *e <= 0 {
                    out.push(format!("symmetrizer entry ε_{} = {e} is not positive", i + 1));
                }
            }
            let d = &self.symmetrizer;
            for i in 0..n {
                for j in i + 1..n {
                    if d[i] * c[i][j] != d[j] * c[j][i] {
                        out.push(format!("DC is not symmetric at (i,j) = ({},{})", i + 1, j + 1));
                    }
                }
            }
        }
        if self.tau.len() != n {
            return out;
        }
        let mut seen = vec![false; n];
        let mut perm_ok = true;
        for &t in &self.tau {
            if t == 0 || t > n || seen[t - 1] {
                perm_ok = false;
                break;
            }
            seen[t - 1] = true;
        }
        if !perm_ok {
            out.push("tau is not a permutation of 1..n".to_string());
            return out;
        }
        let tau: Vec<usize> = self.tau.iter().map(|t| t - 1).collect();
        for i in 0..n {
            if tau[tau[i]] != i {
                out.push(format!("τ² ≠ id at i = {}", i + 1));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if c[tau[i]][tau[j]] != c[i][j] {
                    out.push(format!("c_{{τi,τj}} ≠ c_{{ij}} at (i,j) = ({},{})", i + 1, j + 1));
                }
            }
        }
        if eps_ok {
            for i in 0..n {
                if self.symmetrizer[tau[i]] != self.symmetrizer[i] {
                    out.push(format!("ε_{{τi}} ≠ ε_i at i = {}", i + 1));
                }
            }
        }
        out
    }

    pub fn into_datum(self) -> Result<CartanDatum> {
        let v = self.validate();
        if !v.is_empty() {
            return Err(Error::InvalidDatum(v));
        }
        let tau = self.tau.iter().map(|t| t - 1).collect();
        Ok(CartanDatum { name: self.name, c: self.cartan, eps: self.symmetrizer, tau })
    }
}

/// A validated Cartan datum `(I, C, D, τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    name: String,
    c: Vec<Vec<i64>>,
    eps: Vec<i64>,
    tau: Vec<usize>,
}

impl CartanDatum {
    pub fn new(name: &str, cartan: Vec<Vec<i64>>, symmetrizer: Vec<i64>, tau_one_based: Vec<usize>) -> Result<Self> {
        RawCartan { name: name.to_string(), cartan, symmetrizer, tau: tau_one_based }.into_datum()
    }

    pub fn from_json(text: &str) -> std::result::Result<RawCartan, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_raw(&self) -> RawCartan {
        RawCartan {
            name: self.name.clone(),
            cartan: self.c.clone(),
            symmetrizer: self.eps.clone(),
            tau: self.tau.iter().map(|t| t + 1).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.c.len()
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.c[i][j]
    }

    pub fn eps(&self, i: usize) -> i64 {
        self.eps[i]
    }

    pub fn tau(&self, i: usize) -> usize {
        self.tau[i]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.c
    }

    /// `(α_i, α_j) = ε_i c_ij`.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.eps[i] * self.c[i][j]
    }

    /// `(μ, ν)` extended bilinearly.
    pub fn form(&self, mu: &Weight, nu: &Weight) -> i64 {
        let n = self.rank();
        let mut acc = 0;
        for i in 0..n {
            if mu.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc += mu.0[i] * nu.0[j] * self.pairing(i, j);
            }
        }
        acc
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(i + 1))
        }
    }

    /// `s_i(w)` with `s_i(α_j) = α_j - c_ij α_i`.
    pub fn simple_reflection(&self, i: usize, w: &Weight) -> Result<Weight> {
        self.check_index(i)?;
        if w.0.len() != self.rank() {
            return Err(Error::InvalidParameter(format!("weight of length {} for rank {}", w.0.len(), self.rank())));
        }
        let mut out = w.clone();
        let shift: i64 = (0..self.rank()).map(|j| w.0[j] * self.c[i][j]).sum();
        out.0[i] -= shift;
        Ok(out)
    }

    /// `τ` acting on the root lattice: `α_j -> α_{τj}`.
    pub fn tau_weight(&self, w: &Weight) -> Weight {
        let mut out = Weight::zero(self.rank());
        for j in 0..self.rank() {
            out.0[self.tau[j]] = w.0[j];
        }
        out
    }

    /// Orbit representatives (smallest label) with `c_{i,τi} ∈ {-1, 0, 2}`.
    pub fn ibar_tau(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| i <= self.tau[i] && matches!(self.c[i][self.tau[i]], -1 | 0 | 2))
            .collect()
    }

    /// One representative (smallest label) per τ-orbit.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| i <= self.tau[i]).collect()
    }

    /// The composite reflection `𝐬_i` for `i ∈ Ī_τ`.
    pub fn restricted_generator(&self, i: usize) -> Result<RestrictedReflection> {
        self.check_index(i)?;
        let t = self.tau[i];
        let word = match self.c[i][t] {
            2 => vec![i],
            0 => vec![i, t],
            -1 => vec![i, t, i],
            _ => return Err(Error::NotRestricted(i + 1)),
        };
        if i > t {
            return Err(Error::NotRestricted(i + 1));
        }
        Ok(RestrictedReflection { word })
    }

    /// SHA-256 over the matrix, symmetrizer and involution; the name is excluded.
    pub fn hash_hex(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("C={:?};D={:?};tau={:?}", self.c, self.eps, self.tau).as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let raw = self.to_raw();
        write!(f, "{} C={:?} D={:?} tau={:?}", raw.name, raw.cartan, raw.symmetrizer, raw.tau)
    }
}

/// A composite reflection `s_{i1} s_{i2} ...` acting on weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedReflection {
    word: Vec<usize>,
}

impl RestrictedReflection {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn apply(&self, datum: &CartanDatum, w: &Weight) -> Weight {
        self.word
            .iter()
            .rev()
            .fold(w.clone(), |acc, &i| datum.simple_reflection(i, &acc).expect("validated index"))
    }
}

/// An element of the root lattice in the basis of simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut w = Self::zero(n);
        w.0[i] = 1;
        w
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| *x >= 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// The named presets.
pub fn preset_names() -> &'static [&'static str] {
    &["a1xa1-swap", "a2-swap", "a1aff-swap", "a3-tau13"]
}

pub fn preset(name: &str) -> Result<CartanDatum> {
    let (c, eps, tau) = match name {
        "a1xa1-swap" => (vec![vec![2, 0], vec![0, 2]], vec![1, 1], vec![2, 1]),
        "a2-swap" => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1], vec![2, 1]),
        "a1aff-swap" => (vec![vec![2, -2], vec![-2, 2]], vec![1, 1], vec![2, 1]),
        "a3-tau13" => (vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], vec![1, 1, 1], vec![3, 2, 1]),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    CartanDatum::new(name, c, eps, tau)
}

pub fn presets() -> Vec<CartanDatum> {
    preset_names().iter().map(|n| preset(n).expect("presets validate")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(c: Vec<Vec<i64>>, eps: Vec<i64>, tau: Vec<usize>) -> RawCartan {
        RawCartan { name: "t".into(), cartan: c, symmetrizer: eps, tau }
    }

    #[test]
    fn a2_swap_validates() {
        assert!(raw(vec![vec![2, -1], vec![-1, 2]], vec![1, 1], vec![2, 1]).validate().is_empty());
    }

    #[test]
    fn tau_compatibility_violation() {
        let v = raw(vec![vec![2, -1], vec![-2, 2]], vec![2, 1], vec![2, 1]).validate();
        assert!(v.iter().any(|s| s.contains("c_{τi,τj} ≠ c_{ij}")), "{v:?}");
    }

    #[test]
    fn zero_pattern_violation() {
        let v = raw(vec![vec![2, 0], vec![-1, 2]], vec![1, 1], vec![1, 2]).validate();
        assert!(v.iter().any(|s| s.contains("c_ij = 0 ⇔ c_ji = 0")), "{v:?}");
    }

    #[test]
    fn reflections() {
        let a2 = preset("a2-swap").unwrap();
        let a1 = Weight::simple(2, 0);
        let a2w = Weight::simple(2, 1);
        assert_eq!(a2.simple_reflection(0, &a1).unwrap(), Weight(vec![-1, 0]));
        assert_eq!(a2.simple_reflection(0, &a2w).unwrap(), Weight(vec![1, 1]));
        assert!(a2.simple_reflection(5, &a1).is_err());
    }

    #[test]
    fn ibar_tau_examples() {
        assert_eq!(preset("a1xa1-swap").unwrap().ibar_tau(), vec![0]);
        assert_eq!(preset("a2-swap").unwrap().ibar_tau(), vec![0]);
        assert!(preset("a1aff-swap").unwrap().ibar_tau().is_empty());
        assert_eq!(preset("a3-tau13").unwrap().ibar_tau(), vec![0, 1]);
    }

    #[test]
    fn restricted_generator_a1xa1() {
        let d = preset("a1xa1-swap").unwrap();
        let s = d.restricted_generator(0).unwrap();
        // s_1 s_2 with c_12 = 0: α_1 -> -α_1, α_2 -> -α_2
        assert_eq!(s.apply(&d, &Weight::simple(2, 0)), Weight(vec![-1, 0]));
        assert_eq!(s.apply(&d, &Weight::simple(2, 1)), Weight(vec![0, -1]));
        assert!(preset("a1aff-swap").unwrap().restricted_generator(0).is_err());
    }

    #[test]
    fn hash_ignores_name() {
        let a = preset("a2-swap").unwrap();
        let mut r = a.to_raw();
        r.name = "other".into();
        assert_eq!(r.into_datum().unwrap().hash_hex(), a.hash_hex());
        assert_ne!(a.hash_hex(), preset("a1xa1-swap").unwrap().hash_hex());
    }
}
