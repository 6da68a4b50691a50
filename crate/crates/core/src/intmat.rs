//! Exact integer matrices and lattices.
//!
//! Entries are arbitrary-precision integers. Row-vector convention: a
//! vector `x` is mapped to `x * A`, so row `i` of a change-of-basis matrix
//! holds the image of basis vector `i`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntVec = Vec<BigInt>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// The standard symplectic form `[[0, I], [-I, 0]]` of size `2g`.
    pub fn standard_symplectic(g: usize) -> Self {
        let mut m = IntMatrix::zeros(2 * g, 2 * g);
        for i in 0..g {
            m[(i, g + i)] = BigInt::one();
            m[(g + i, i)] = -BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<IntVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMatrix::identity(self.rows)
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `x * self` for a row vector.
    pub fn apply_row(&self, x: &[BigInt]) -> IntVec {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += xk * &self[(k, j)];
            }
        }
        out
    }

    /// Bilinear form `x * self * y^T`.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let xs = self.apply_row(x);
        xs.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
    }

    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.to_rational();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return BigInt::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let pivot = m[c][c].clone();
            det *= &pivot;
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &pivot;
                for j in c..n {
                    let t = &f * &m[c][j];
                    m[r][j] -= t;
                }
            }
        }
        assert!(det.is_integer());
        det.to_integer()
    }

    /// Exact rational inverse, `None` if singular.
    pub fn inverse_rational(&self) -> Option<Vec<Vec<BigRational>>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.to_rational();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero())?;
            m.swap(p, c);
            inv.swap(p, c);
            let pivot = m[c][c].clone();
            for j in 0..n {
                m[c][j] = &m[c][j] / &pivot;
                inv[c][j] = &inv[c][j] / &pivot;
            }
            for r in 0..n {
                if r == c || m[r][c].is_zero() {
                    continue;
                }
                let f = m[r][c].clone();
                for j in 0..n {
                    let t = &f * &m[c][j];
                    m[r][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[r][j] -= t;
                }
            }
        }
        Some(inv)
    }

    /// Integer inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let inv = self.inverse_rational()?;
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for (i, row) in inv.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                if !x.is_integer() {
                    return None;
                }
                out[(i, j)] = x.to_integer();
            }
        }
        Some(out)
    }

    /// `self * omega * self^T == omega`.
    pub fn preserves_form(&self, omega: &IntMatrix) -> bool {
        self.mul(omega).mul(&self.transpose()) == *omega
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Entries as `i64` if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect()).collect()
    }

    /// Rows as JSON arrays of integers (strings if an entry overflows i64).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array(
                        self.row(i)
                            .iter()
                            .map(|x| match x.to_i64() {
                                Some(v) => serde_json::Value::from(v),
                                None => serde_json::Value::from(x.to_string()),
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn int_vec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Hermite normal form (row style) of the lattice spanned by `vectors`:
/// echelon rows with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped, so the result is a basis.
pub fn hermite_basis(vectors: &[IntVec]) -> Vec<IntVec> {
    let Some(dim) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<IntVec> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..dim {
        if pivot_row >= rows.len() {
            break;
        }
        // Euclid down the column until one nonzero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if !rows[r][col].is_zero() && best.is_none_or(|b| rows[r][col].abs() < rows[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[pivot_row][col]);
                for j in col..dim {
                    let t = &q * &rows[pivot_row][j];
                    rows[r][j] -= t;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].is_zero() {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for x in rows[pivot_row].iter_mut() {
                *x = -x.clone();
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    for &(pr, col) in &pivots {
        let p = rows[pr][col].clone();
        for r in 0..pr {
            let q = rows[r][col].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            for j in 0..dim {
                let t = &q * &rows[pr][j];
                rows[r][j] -= t;
            }
        }
    }
    rows
}

/// Coefficients `c` with `sum c_i * xs_i = gcd(xs)`, the gcd being non-negative.
pub fn bezout(xs: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = vec![BigInt::zero(); xs.len()];
    for (i, x) in xs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        // g' = s*g + t*x
        let e = g.extended_gcd(x);
        let (s, t) = (e.x, e.y);
        for c in coeffs.iter_mut().take(i) {
            *c = &*c * &s;
        }
        coeffs[i] = t;
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    (g, coeffs)
}

fn project_out(omega: &IntMatrix, w: &[BigInt], a: &[BigInt], b: &[BigInt]) -> IntVec {
    // Removes the span of a symplectic pair <a, b> = 1.
    let wb = omega.pair(w, b);
    let wa = omega.pair(w, a);
    w.iter().zip(a).zip(b).map(|((wi, ai), bi)| wi - &wb * ai + &wa * bi).collect()
}

/// Completes a pair `<a1, b1> = 1` to a symplectic basis of `Z^{2g}` for the
/// unimodular alternating form `omega`. Returns `(a_cycles, b_cycles)` with
/// `a1`, `b1` first. Deterministic: the complement is put in Hermite normal
/// form and each new `a` is its first row.
pub fn complete_symplectic(omega: &IntMatrix, a1: IntVec, b1: IntVec) -> Result<(Vec<IntVec>, Vec<IntVec>), String> {
    let dim = omega.rows();
    if omega.pair(&a1, &b1) != BigInt::one() {
        return Err("starting pair does not intersect once".into());
    }
    let units: Vec<IntVec> =
        (0..dim).map(|k| (0..dim).map(|j| if j == k { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut basis = hermite_basis(&units.iter().map(|w| project_out(omega, w, &a1, &b1)).collect::<Vec<_>>());
    let mut a_cycles = vec![a1];
    let mut b_cycles = vec![b1];
    while !basis.is_empty() {
        let u = basis[0].clone();
        let rest = &basis[1..];
        let pairings: Vec<BigInt> = rest.iter().map(|w| omega.pair(&u, w)).collect();
        let (g, coeffs) = bezout(&pairings);
        if !g.is_one() {
            return Err(format!("form is not unimodular on the complement (gcd {g})"));
        }
        let mut f = vec![BigInt::zero(); dim];
        for (c, w) in coeffs.iter().zip(rest) {
            for (fi, wi) in f.iter_mut().zip(w) {
                *fi += c * wi;
            }
        }
        let projected: Vec<IntVec> = rest.iter().map(|w| project_out(omega, w, &u, &f)).collect();
        a_cycles.push(u);
        b_cycles.push(f);
        basis = hermite_basis(&projected);
    }
    if 2 * a_cycles.len() != dim {
        return Err("symplectic completion has the wrong rank".into());
    }
    Ok((a_cycles, b_cycles))
}
