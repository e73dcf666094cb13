//! Exact integer and rational linear algebra over lattices.
//!
//! Everything here works on arbitrary-precision integers. Row-style Hermite
//! normal form is the canonical form for every basis we hand out.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Int = BigInt;
pub type Rat = BigRational;
pub type RatVector = Vec<Rat>;

pub fn int(x: i64) -> Int {
    Int::from(x)
}

pub fn ints(xs: &[i64]) -> Vec<Int> {
    xs.iter().map(|&x| Int::from(x)).collect()
}

/// Dense matrix over the integers, stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    cols: usize,
    data: Vec<Vec<Int>>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            cols,
            data: vec![vec![Int::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Int::one();
        }
        m
    }

    /// Panics if the rows have different lengths from `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Int>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { cols, data: rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| ints(r)).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Int>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in 0..rows {
                m.data[i][j] = c[i].clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.data.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Int) {
        self.data[i][j] = x;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<Int>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                t.data[j][i] = x.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.nrows(), "dimension mismatch");
        let mut out = Self::zeros(self.nrows(), other.cols);
        for i in 0..self.nrows() {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += a * &other.data[k][j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        self.data.iter().map(|r| dot(r, v)).collect()
    }

    pub fn mul_rat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + Rat::from(a.clone()) * b)
            })
            .collect()
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(
            idx.len(),
            self.data
                .iter()
                .map(|r| idx.iter().map(|&j| r[j].clone()).collect())
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn det(&self) -> Int {
        assert_eq!(self.nrows(), self.cols, "determinant of a non-square matrix");
        bareiss(self.data.clone(), true).1
    }

    pub fn rank(&self) -> usize {
        rank(&self.data)
    }

    pub fn is_unimodular(&self) -> bool {
        self.nrows() == self.cols && self.det().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        let (s, d) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = self.data.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        for (x, y) in d.iter_mut().zip(s) {
            *x += q * y;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for r in &mut self.data {
            let t = q * &r[src];
            r[dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -&*x;
        }
    }

    /// (row a, row b) <- (x a + y b, s a + t b)
    fn combine_rows(&mut self, a: usize, b: usize, x: &Int, y: &Int, s: &Int, t: &Int) {
        for j in 0..self.cols {
            let ra = self.data[a][j].clone();
            let rb = self.data[b][j].clone();
            self.data[a][j] = x * &ra + y * &rb;
            self.data[b][j] = s * &ra + t * &rb;
        }
    }
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rat_dot(a: &[Int], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, y)| acc + Rat::from(x.clone()) * y)
}

pub fn to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from(x.clone())).collect()
}

/// Divide out the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// The primitive integer vector on the ray through a rational vector.
pub fn primitive_rat(v: &[Rat]) -> Vec<Int> {
    let l = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<Int> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    primitive(&scaled)
}

fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    // returns (g, x, y) with x a + y b = g >= 0
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut x0, mut x1) = (Int::one(), Int::zero());
    let (mut y0, mut y1) = (Int::zero(), Int::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let x2 = &x0 - &q * &x1;
        x0 = std::mem::replace(&mut x1, x2);
        let y2 = &y0 - &q * &y1;
        y0 = std::mem::replace(&mut y1, y2);
    }
    if r0.is_negative() {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Fraction-free elimination. Returns (rank, determinant if square and `want_det`).
fn bareiss(mut a: Vec<Vec<Int>>, want_det: bool) -> (usize, Int) {
    let n = a.len();
    let m = a.first().map_or(0, |r| r.len());
    let mut sign = Int::one();
    let mut prev = Int::one();
    let mut r = 0;
    for c in 0..m {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            if want_det {
                return (r, Int::zero());
            }
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..n {
            for j in c + 1..m {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = Int::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = if want_det && n == m && r == n {
        if n == 0 {
            Int::one()
        } else {
            sign * &a[n - 1][n - 1]
        }
    } else {
        Int::zero()
    };
    (r, det)
}

pub fn rank(rows: &[Vec<Int>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    bareiss(rows.to_vec(), false).0
}

/// Row-style Hermite normal form: `h = u·m` with `u` unimodular, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`, zero rows last.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.nrows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pr = 0;
    for c in 0..m.ncols() {
        if pr == rows {
            break;
        }
        for i in pr + 1..rows {
            if h.get(i, c).is_zero() {
                continue;
            }
            let a = h.get(pr, c).clone();
            let b = h.get(i, c).clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let s = -(&b / &g);
            let t = &a / &g;
            h.combine_rows(pr, i, &x, &y, &s, &t);
            u.combine_rows(pr, i, &x, &y, &s, &t);
        }
        if h.get(pr, c).is_zero() {
            continue;
        }
        if h.get(pr, c).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let p = h.get(pr, c).clone();
        for i in 0..pr {
            let q = -h.get(i, c).div_floor(&p);
            h.add_row(i, pr, &q);
            u.add_row(i, pr, &q);
        }
        pr += 1;
    }
    (h, u)
}

/// Smith normal form: `s = u·m·v` diagonal with each entry dividing the next.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (r, c) = (m.nrows(), m.ncols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = s.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best else {
                return (s, u, v);
            };
            s.swap_rows(t, i);
            u.swap_rows(t, i);
            s.swap_cols(t, j);
            v.swap_cols(t, j);
            let p = s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                let q = -s.get(i, t).div_floor(&p);
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= s.get(i, t).is_zero();
            }
            for j in t + 1..c {
                let q = -s.get(t, j).div_floor(&p);
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= s.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !s.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    s.add_row(t, i, &Int::one());
                    u.add_row(t, i, &Int::one());
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

/// Nonzero diagonal entries of the Smith form.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<Int> {
    let (s, _, _) = snf(m);
    (0..m.nrows().min(m.ncols()))
        .map(|i| s.get(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect()
}

pub fn is_surjective(m: &IntMatrix) -> bool {
    let d = elementary_divisors(m);
    d.len() == m.nrows() && d.iter().all(One::is_one)
}

/// A sublattice of `Z^ambient`, given by a basis in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    basis: IntMatrix,
}

impl Sublattice {
    /// The lattice generated by arbitrary (possibly dependent) vectors.
    pub fn generated_by(ambient: usize, gens: &[Vec<Int>]) -> Self {
        let (h, _) = hnf(&IntMatrix::from_rows(ambient, gens.to_vec()));
        let rows = h
            .into_rows()
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        Sublattice {
            basis: IntMatrix::from_rows(ambient, rows),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice {
            basis: IntMatrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Sublattice {
            basis: IntMatrix::identity(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.basis.ncols()
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn vectors(&self) -> &[Vec<Int>] {
        self.basis.rows()
    }

    /// Integral membership.
    pub fn contains(&self, v: &[Int]) -> bool {
        let mut rows = self.basis.rows().to_vec();
        rows.push(v.to_vec());
        Sublattice::generated_by(self.ambient(), &rows) == *self
    }

    /// Membership in the rational span.
    pub fn span_contains(&self, v: &[Rat]) -> bool {
        let mut rows = self.basis.rows().to_vec();
        rows.push(primitive_rat(v));
        rank(&rows) == self.rank()
    }

    /// Index of this lattice in its saturation.
    pub fn saturation_index(&self) -> Int {
        let d = elementary_divisors(&self.basis);
        d.iter().product()
    }
}

/// Integer kernel `{x : m x = 0}`, saturated, in Hermite normal form.
pub fn kernel_basis(m: &IntMatrix) -> Sublattice {
    let (h, u) = hnf(&m.transpose());
    let r = h
        .rows()
        .iter()
        .take_while(|row| row.iter().any(|x| !x.is_zero()))
        .count();
    Sublattice::generated_by(m.ncols(), &u.rows()[r..])
}

/// `lin(s) ∩ Z^n`.
pub fn saturate(s: &Sublattice) -> Sublattice {
    let perp = kernel_basis(s.basis());
    kernel_basis(perp.basis())
}

pub fn is_primitive(s: &Sublattice) -> bool {
    saturate(s) == *s
}

/// The lattice of integral vectors orthogonal to `s`.
pub fn orthogonal_lattice(s: &Sublattice) -> Sublattice {
    kernel_basis(s.basis())
}

/// Intersection of rational subspaces, each given by a spanning lattice.
/// The result is the saturated lattice of the intersection.
pub fn subspace_intersection(ambient: usize, spaces: &[Sublattice]) -> Sublattice {
    let mut normals = Vec::new();
    for s in spaces {
        assert_eq!(s.ambient(), ambient, "ambient mismatch");
        normals.extend(kernel_basis(s.basis()).vectors().iter().cloned());
    }
    kernel_basis(&IntMatrix::from_rows(ambient, normals))
}

/// Literal intersection of lattices (no saturation).
pub fn lattice_intersection(ambient: usize, lattices: &[Sublattice]) -> Sublattice {
    let mut acc = Sublattice::full(ambient);
    for l in lattices {
        assert_eq!(l.ambient(), ambient, "ambient mismatch");
        acc = intersect_two(&acc, l);
    }
    acc
}

fn intersect_two(a: &Sublattice, b: &Sublattice) -> Sublattice {
    let (ra, rb) = (a.rank(), b.rank());
    if ra == 0 || rb == 0 {
        return Sublattice::zero(a.ambient());
    }
    // (x, y) with x A = y B
    let mut rows = a.vectors().to_vec();
    rows.extend(b.vectors().iter().map(|r| r.iter().map(|x| -x).collect()));
    let stacked = IntMatrix::from_rows(a.ambient(), rows);
    let ker = kernel_basis(&stacked.transpose());
    let gens: Vec<Vec<Int>> = ker
        .vectors()
        .iter()
        .map(|xy| {
            let mut v = vec![Int::zero(); a.ambient()];
            for (c, row) in xy[..ra].iter().zip(a.vectors()) {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi += c * ri;
                }
            }
            v
        })
        .collect();
    Sublattice::generated_by(a.ambient(), &gens)
}

/// Inverse of a square integer matrix over the rationals.
pub fn rat_inverse(m: &IntMatrix) -> Option<Vec<Vec<Rat>>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "inverse of a non-square matrix");
    let mut a: Vec<Vec<Rat>> = m
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = to_rat(r);
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        let inv = a[c][c].recip();
        for x in &mut a[c] {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `x · rows = target` for `x` over the rationals, if possible.
pub fn solve_in_span(rows: &[Vec<Int>], target: &[Rat]) -> Option<Vec<Rat>> {
    let k = rows.len();
    let d = target.len();
    // columns = rows, augmented system of d equations in k unknowns
    let mut a: Vec<Vec<Rat>> = (0..d)
        .map(|j| {
            let mut r: Vec<Rat> = rows.iter().map(|row| Rat::from(row[j].clone())).collect();
            r.push(target[j].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..d).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in &mut a[r] {
            *x *= &inv;
        }
        for i in 0..d {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][k].clone();
    }
    Some(x)
}
