//! Exact feasibility of linear systems in free rational variables.
//!
//! Phase one of the simplex method on an integer tableau with fraction-free
//! pivoting (every row carries the basis determinant as common denominator)
//! and Bland's rule.

use crate::linalg::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
    Le,
}

#[derive(Clone, Debug)]
pub struct System {
    nvars: usize,
    rows: Vec<(Vec<Int>, Rel, Int)>,
}

impl System {
    pub fn new(nvars: usize) -> Self {
        System {
            nvars,
            rows: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add(&mut self, coeffs: Vec<Int>, rel: Rel, rhs: Int) {
        assert_eq!(coeffs.len(), self.nvars, "coefficient count mismatch");
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn add_rat(&mut self, coeffs: &[Rat], rel: Rel, rhs: &Rat) {
        let l = coeffs
            .iter()
            .chain(std::iter::once(rhs))
            .fold(Int::one(), |l, x| l.lcm(x.denom()));
        let scale = |x: &Rat| x.numer() * (&l / x.denom());
        self.add(coeffs.iter().map(scale).collect(), rel, scale(rhs));
    }

    pub fn eq(&mut self, coeffs: Vec<Int>, rhs: i64) {
        self.add(coeffs, Rel::Eq, Int::from(rhs));
    }

    pub fn ge(&mut self, coeffs: Vec<Int>, rhs: i64) {
        self.add(coeffs, Rel::Ge, Int::from(rhs));
    }

    pub fn le(&mut self, coeffs: Vec<Int>, rhs: i64) {
        self.add(coeffs, Rel::Le, Int::from(rhs));
    }

    /// A point satisfying every constraint, or `None` if there is none.
    pub fn solve(&self) -> Option<Vec<Rat>> {
        let n = self.nvars;
        let m = self.rows.len();
        if m == 0 {
            return Some(vec![Rat::zero(); n]);
        }
        let nslack = self.rows.iter().filter(|r| r.1 != Rel::Eq).count();
        // columns: x+ (n), x- (n), slacks, artificials, rhs
        let art0 = 2 * n + nslack;
        let width = art0 + m + 1;
        let rhs_col = width - 1;
        let mut t = vec![vec![Int::zero(); width]; m + 1];
        let mut basis = vec![0usize; m];
        let mut slack = 2 * n;
        for (i, (a, rel, b)) in self.rows.iter().enumerate() {
            let row = &mut t[i];
            for j in 0..n {
                row[j] = a[j].clone();
                row[n + j] = -&a[j];
            }
            match rel {
                Rel::Eq => {}
                Rel::Ge => {
                    row[slack] = -Int::one();
                    slack += 1;
                }
                Rel::Le => {
                    row[slack] = Int::one();
                    slack += 1;
                }
            }
            row[rhs_col] = b.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            row[art0 + i] = Int::one();
            basis[i] = art0 + i;
        }
        for j in 0..art0 {
            let s: Int = (0..m).map(|i| &t[i][j]).sum();
            t[m][j] = -s;
        }
        let s: Int = (0..m).map(|i| &t[i][rhs_col]).sum();
        t[m][rhs_col] = -s;

        let mut det = Int::one();
        while let Some(s) = (0..rhs_col).find(|&j| t[m][j].is_negative()) {
            let mut best: Option<usize> = None;
            for i in 0..m {
                if !t[i][s].is_positive() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(r) => {
                        let lhs = &t[i][rhs_col] * &t[r][s];
                        let rhs = &t[r][rhs_col] * &t[i][s];
                        if lhs < rhs || (lhs == rhs && basis[i] < basis[r]) {
                            Some(i)
                        } else {
                            Some(r)
                        }
                    }
                };
            }
            // The phase-one objective is bounded below, so a pivot row exists.
            let r = best.expect("phase one is bounded");
            let p = t[r][s].clone();
            for i in 0..=m {
                if i == r {
                    continue;
                }
                let f = t[i][s].clone();
                for j in 0..width {
                    let v = &t[i][j] * &p - &f * &t[r][j];
                    t[i][j] = if det.is_one() { v } else { v / &det };
                }
            }
            det = p;
            basis[r] = s;
        }
        if !t[m][rhs_col].is_zero() {
            return None;
        }
        let mut z = vec![Rat::zero(); art0];
        for (i, &b) in basis.iter().enumerate() {
            if b < art0 {
                z[b] = Rat::new(t[i][rhs_col].clone(), det.clone());
            }
        }
        Some((0..n).map(|j| &z[j] - &z[n + j]).collect())
    }

    /// Check a candidate point exactly.
    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        self.rows.iter().all(|(a, rel, b)| {
            let v = a
                .iter()
                .zip(x)
                .fold(Rat::zero(), |acc, (ai, xi)| acc + Rat::from(ai.clone()) * xi);
            let b = Rat::from(b.clone());
            match rel {
                Rel::Eq => v == b,
                Rel::Ge => v >= b,
                Rel::Le => v <= b,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    #[test]
    fn simple_feasible() {
        let mut s = System::new(2);
        s.ge(ints(&[1, 0]), 1);
        s.ge(ints(&[0, 1]), 1);
        s.eq(ints(&[1, -2]), 0);
        let x = s.solve().unwrap();
        assert!(s.satisfied_by(&x));
    }

    #[test]
    fn simple_infeasible() {
        let mut s = System::new(1);
        s.ge(ints(&[1]), 1);
        s.le(ints(&[1]), 0);
        assert!(s.solve().is_none());
    }
}
