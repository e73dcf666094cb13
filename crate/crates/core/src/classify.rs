//! Smooth complete toric varieties with class group `Z²`, and canonical
//! extensions of free bunches.
//!
//! Such a variety is given by weights `w₁ = (1,0)` and `w_i = (b_i, 1)` for
//! `0 = b_n < .. < b₂`, multiplicities `μ_i`, and the bunch
//! `Θ = {cone(w₁, w₂)}`.

use crate::bunch::{bunch_from_weights, free_bunch_isomorphic, Bunch, WeightSystem};
use crate::cone::Cone;
use crate::divisor;
use crate::linalg::{int, Int};
use crate::{Error, Limits, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KleinschmidtData {
    /// `b₂, .., b_n`, strictly decreasing to 0.
    pub b: Vec<u64>,
    /// `μ₁, .., μ_n`.
    pub mu: Vec<usize>,
}

/// The Fano verdict with the two readings of the closed-form inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FanoDiagnosis {
    /// Anticanonical class in the ample cone. Authoritative.
    pub ample: bool,
    /// `b₂(μ₃+..+μ_n) < μ₁ + b₃μ₃ + .. + b_{n−1}μ_{n−1}`.
    pub aligned: bool,
    /// `b₂(μ₃+..+μ_n) < μ₁ + b₂μ₃ + b₃μ₄ + .. + b_{n−1}μ_n`.
    pub literal: bool,
}

impl KleinschmidtData {
    pub fn new(b: Vec<u64>, mu: Vec<usize>) -> Result<Self> {
        let d = KleinschmidtData { b, mu };
        d.validate()?;
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameters(m.into()));
        let n = self.mu.len();
        if n < 2 {
            return bad("need at least two distinct weights");
        }
        if self.b.len() != n - 1 {
            return bad("need one b per weight after the first");
        }
        if *self.b.last().expect("n ≥ 2") != 0 {
            return bad("last b must be 0");
        }
        if self.b.windows(2).any(|p| p[0] <= p[1]) {
            return bad("b must be strictly decreasing");
        }
        if self.mu.contains(&0) {
            return bad("multiplicities must be positive");
        }
        if self.mu[0] < 2 {
            return bad("first multiplicity must exceed 1");
        }
        if self.mu[1..].iter().sum::<usize>() < 2 {
            return bad("the remaining multiplicities must sum to more than 1");
        }
        Ok(())
    }

    /// `w₁ = (1,0)`, `w_i = (b_i, 1)`.
    pub fn distinct_weights(&self) -> Vec<Vec<Int>> {
        std::iter::once(vec![int(1), int(0)])
            .chain(self.b.iter().map(|&b| vec![Int::from(b), int(1)]))
            .collect()
    }

    pub fn weight_system(&self) -> Result<WeightSystem> {
        self.validate()?;
        let weights = self
            .distinct_weights()
            .into_iter()
            .zip(&self.mu)
            .flat_map(|(w, &m)| std::iter::repeat_n(w, m))
            .collect();
        WeightSystem::new(2, weights)
    }

    pub fn dimension(&self) -> usize {
        self.mu.iter().sum::<usize>() - 2
    }

    pub fn fano_inequalities(&self) -> (bool, bool) {
        let n = self.n();
        let b = |i: usize| self.b[i - 2] as u128;
        let mu = |i: usize| self.mu[i - 1] as u128;
        let lhs = b(2) * (3..=n).map(mu).sum::<u128>();
        let aligned = mu(1) + (3..n).map(|j| b(j) * mu(j)).sum::<u128>();
        let literal = mu(1) + (2..n).map(|j| b(j) * mu(j + 1)).sum::<u128>();
        (lhs < aligned, lhs < literal)
    }
}

pub fn kleinschmidt_to_bunch(d: &KleinschmidtData, limits: &Limits) -> Result<Bunch> {
    let ws = d.weight_system()?;
    let w = d.distinct_weights();
    let theta = Cone::from_generators(2, &[w[0].clone(), w[1].clone()]);
    bunch_from_weights(&ws, &[theta], limits)
}

pub fn kleinschmidt_is_fano(d: &KleinschmidtData, limits: &Limits) -> Result<bool> {
    Ok(kleinschmidt_fano_diagnosis(d, limits)?.ample)
}

pub fn kleinschmidt_fano_diagnosis(d: &KleinschmidtData, limits: &Limits) -> Result<FanoDiagnosis> {
    let b = kleinschmidt_to_bunch(d, limits)?;
    let (aligned, literal) = d.fano_inequalities();
    Ok(FanoDiagnosis {
        ample: divisor::is_fano(&b)?,
        aligned,
        literal,
    })
}

/// Compositions of `total` into `parts` positive integers, lexicographic.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Strictly decreasing sequences of `len` values from `1..=max`.
fn decreasing(len: usize, max: u64) -> Vec<Vec<u64>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for top in (len as u64)..=max {
        for mut rest in decreasing(len - 1, top - 1) {
            rest.insert(0, top);
            out.push(rest);
        }
    }
    out
}

/// All data of dimension `dim` with `b₂ ≤ max_b`, one per isomorphism class,
/// sorted by `(n, b, μ)`.
pub fn enumerate_kleinschmidt(dim: usize, max_b: u64, limits: &Limits) -> Result<Vec<KleinschmidtData>> {
    if dim < 2 {
        return Err(Error::InvalidParameters("dimension must be at least 2".into()));
    }
    let total = dim + 2;
    let mut all = Vec::new();
    for n in 2..=total {
        for bs in decreasing(n - 2, max_b) {
            let mut b = bs;
            b.push(0);
            for mu in compositions(total, n) {
                let d = KleinschmidtData { b: b.clone(), mu };
                if d.validate().is_ok() {
                    all.push(d);
                }
            }
        }
    }
    all.sort();
    let mut kept: Vec<(KleinschmidtData, Bunch)> = Vec::new();
    for d in all {
        let b = kleinschmidt_to_bunch(&d, limits)?;
        let mut sig = d.mu.clone();
        sig.sort();
        let mut dup = false;
        for (k, kb) in &kept {
            let mut ks = k.mu.clone();
            ks.sort();
            if k.n() == d.n() && ks == sig && free_bunch_isomorphic(kb, &b, limits)?.is_some() {
                dup = true;
                break;
            }
        }
        if !dup {
            kept.push((d, b));
        }
    }
    Ok(kept.into_iter().map(|(d, _)| d).collect())
}

/// `dim X = rank E − rank K`.
pub fn variety_dimension(b: &Bunch) -> usize {
    b.e_rank() - b.k_rank()
}

/// Same distinct weights and Θ, larger multiplicities. `new_mu` is indexed
/// like [`WeightSystem::distinct`].
pub fn canonical_extension(b: &Bunch, new_mu: &[usize], limits: &Limits) -> Result<Bunch> {
    let ws = b.weight_system()?;
    let distinct = ws.distinct();
    if new_mu.len() != distinct.len() {
        return Err(Error::InvalidParameters(format!(
            "expected {} multiplicities",
            distinct.len()
        )));
    }
    if distinct.iter().zip(new_mu).any(|((_, m), &n)| n < *m) {
        return Err(Error::MultiplicityDecrease);
    }
    let weights = distinct
        .into_iter()
        .zip(new_mu)
        .flat_map(|((w, _), &m)| std::iter::repeat_n(w, m))
        .collect();
    let ext = WeightSystem::new(ws.k_rank, weights)?;
    bunch_from_weights(&ext, &b.cones(), limits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_checks() {
        assert!(KleinschmidtData::new(vec![0], vec![1, 2]).is_err());
        assert!(KleinschmidtData::new(vec![0], vec![2, 2]).is_ok());
        assert!(KleinschmidtData::new(vec![1, 2, 0], vec![2, 1, 1, 1]).is_err());
    }

    #[test]
    fn small_lists() {
        let l = Limits::default();
        assert_eq!(enumerate_kleinschmidt(2, 2, &l).unwrap().len(), 3);
        assert_eq!(enumerate_kleinschmidt(2, 0, &l).unwrap().len(), 1);
    }
}
