//! Finite fields GF(p^m) and exact linear algebra over them.
//!
//! Elements are stored in the natural encoding: the value `v` in `[0, q)`
//! stands for the polynomial whose base-p digits are `v`'s digits, low degree
//! first. All arithmetic is carried out on the polynomial representation
//! modulo a fixed irreducible monic modulus, so results are exact and the
//! encoding is portable across runs and implementations.

use std::fmt;

/// Upper bound on supported alphabet sizes. Code synthesis is desk-scale;
/// larger fields are outside the tool's intended range.
pub const MAX_Q: u64 = 1 << 32;

/// A concrete presentation of GF(p^m): the characteristic, the extension
/// degree and the monic irreducible modulus (coefficients constant-first,
/// length `m + 1`, leading coefficient 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    modulus: Vec<u64>,
    q: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrimePower(u64),
    TooLarge(u64),
    BadModulus(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrimePower(q) => write!(f, "q={} is not a prime power", q),
            FieldError::TooLarge(q) => write!(f, "q={} exceeds the supported maximum {}", q, MAX_Q),
            FieldError::BadModulus(msg) => write!(f, "bad modulus: {}", msg),
        }
    }
}

impl std::error::Error for FieldError {}

/// Writes `q` as `p^m` with `p` prime, if possible. Trial factorization;
/// `q` is capped at [`MAX_Q`] so this is instant.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    if !(2..=MAX_Q).contains(&q) {
        return None;
    }
    let mut p = 0u64;
    let mut rest = q;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some((q, 1)); // q itself is prime
    }
    let mut m = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest == 1 {
        Some((p, m))
    } else {
        None
    }
}

/// Builds GF(q) with the lexicographically smallest irreducible monic
/// modulus, coefficients compared low-degree-first with the constant term
/// most significant. Fixing the modulus this way makes serialized codes
/// portable bit-for-bit.
pub fn make_field(q: u64) -> Result<FieldSpec, FieldError> {
    if q > MAX_Q {
        return Err(FieldError::TooLarge(q));
    }
    let (p, m) = prime_power_decompose(q).ok_or(FieldError::NotPrimePower(q))?;
    let modulus = smallest_irreducible(p, m);
    Ok(FieldSpec { p, m, modulus, q })
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first, length `m + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Rebuilds a field from serialized parts, re-verifying irreducibility.
    pub fn from_parts(p: u64, m: u32, modulus: Vec<u64>) -> Result<FieldSpec, FieldError> {
        if m == 0 {
            return Err(FieldError::BadModulus("extension degree must be >= 1".into()));
        }
        let q = (p as u128).checked_pow(m).filter(|&v| v <= MAX_Q as u128).map(|v| v as u64);
        let q = q.ok_or(FieldError::TooLarge(u64::MAX))?;
        if prime_power_decompose(q) != Some((p, m)) {
            return Err(FieldError::NotPrimePower(q));
        }
        if modulus.len() != m as usize + 1 {
            return Err(FieldError::BadModulus(format!(
                "expected {} coefficients, got {}",
                m + 1,
                modulus.len()
            )));
        }
        if modulus[m as usize] != 1 {
            return Err(FieldError::BadModulus("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus("coefficient out of range".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus("modulus is reducible".into()));
        }
        Ok(FieldSpec { p, m, modulus, q })
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if self.m == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if self.p == 2 {
            // Characteristic 2: digit-wise addition is xor.
            return a ^ b;
        }
        let mut out = 0u64;
        let mut scale = 1u64;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.m {
            let da = a % self.p;
            let db = b % self.p;
            out += ((da + db) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if self.m == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut out = 0u64;
        let mut scale = 1u64;
        let mut a = a;
        for _ in 0..self.m {
            let d = a % self.p;
            out += if d == 0 { 0 } else { self.p - d } * scale;
            a /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if self.m == 1 {
            // p <= 2^32, so the product fits in u64.
            return (a * b) % self.p;
        }
        let m = self.m as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce using x^m = -(low-order modulus coefficients).
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..m {
                let t = (c * self.modulus[j]) % self.p;
                prod[i - m + j] = (prod[i - m + j] + self.p - t) % self.p;
            }
        }
        self.undigits(&prod[..m])
    }

    /// Multiplicative inverse. Panics on zero; callers pivot only on
    /// nonzero entries.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "zero has no inverse");
        self.pow(a, self.q - 2)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Base-p digits of the encoding, low degree first.
    pub fn digits(&self, a: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut a = a;
        for _ in 0..self.m {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn undigits(&self, digits: &[u64]) -> u64 {
        let mut out = 0u64;
        for &d in digits.iter().rev() {
            out = out * self.p + d;
        }
        out
    }
}

fn poly_degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

/// Remainder of `f` divided by monic `g`, coefficients mod p.
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let dg = poly_degree(g).expect("divisor must be nonzero");
    let mut r = f.to_vec();
    while let Some(dr) = poly_degree(&r) {
        if dr < dg {
            break;
        }
        let lead = r[dr];
        let shift = dr - dg;
        for j in 0..=dg {
            let t = (lead * g[j]) % p;
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
    }
    r
}

/// Trial division against every monic polynomial of degree 1..=deg/2.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = match poly_degree(f) {
        Some(d) => d,
        None => return false,
    };
    if deg == 0 {
        return false;
    }
    for t in 1..=deg / 2 {
        // All monic divisor candidates of degree t, by base-p counter over
        // the t low-order coefficients.
        let count = p.pow(t as u32);
        let mut g = vec![0u64; t + 1];
        g[t] = 1;
        for k in 0..count {
            let mut v = k;
            for c in g.iter_mut().take(t) {
                *c = v % p;
                v /= p;
            }
            let r = poly_rem(f, &g, p);
            if poly_degree(&r).is_none() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest irreducible monic polynomial of degree m,
/// low-degree coefficients compared first.
fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    let mut f = vec![0u64; m + 1];
    f[m] = 1;
    // For m >= 2 a zero constant term means divisibility by x, so that whole
    // leading block of the lexicographic order can be skipped.
    let c0_start = if m == 1 { 0 } else { 1 };
    let inner = (p as u128).pow(m as u32 - 1);
    for c0 in c0_start..p {
        f[0] = c0;
        for k in 0..inner {
            let mut v = k;
            for i in (1..m).rev() {
                f[i] = (v % p as u128) as u64;
                v /= p as u128;
            }
            if is_irreducible(&f, p) {
                return f;
            }
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Dense row-major matrix of field elements in the natural encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend_from_slice(&r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn select_rows(&self, sel: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(sel.len() * self.cols);
        for &r in sel {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: sel.len(), cols: self.cols, data }
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Matrix { rows: self.rows, cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn to_nested(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

impl FieldSpec {
    /// Row rank by Gaussian elimination with first-nonzero pivoting.
    pub fn rank(&self, m: &Matrix) -> usize {
        let mut basis = SpanBasis::new(m.cols());
        for r in 0..m.rows() {
            basis.insert(self, m.row(r));
        }
        basis.rank()
    }

    pub fn matmul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!(a.cols(), b.rows(), "inner dimension mismatch");
        let mut out = Matrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                let v = a.get(i, k);
                if v == 0 {
                    continue;
                }
                for j in 0..b.cols() {
                    let t = self.mul(v, b.get(k, j));
                    out.set(i, j, self.add(out.get(i, j), t));
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, a: &Matrix, x: &[u64]) -> Vec<u64> {
        assert_eq!(a.cols(), x.len(), "dimension mismatch");
        let mut out = vec![0u64; a.rows()];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (k, &v) in x.iter().enumerate() {
                if v != 0 {
                    acc = self.add(acc, self.mul(a.get(i, k), v));
                }
            }
            *slot = acc;
        }
        out
    }

    /// True iff `v` is a linear combination of the rows of `basis_rows`.
    pub fn in_span(&self, v: &[u64], basis_rows: &Matrix) -> bool {
        assert_eq!(v.len(), basis_rows.cols(), "dimension mismatch");
        let mut basis = SpanBasis::new(basis_rows.cols());
        for r in 0..basis_rows.rows() {
            basis.insert(self, basis_rows.row(r));
        }
        basis.contains(self, v)
    }

    /// Any solution of `A x = y`, or `None` if the system is inconsistent.
    /// Free variables are set to zero, so the answer is deterministic; it is
    /// unique when `A` has full column rank.
    pub fn solve(&self, a: &Matrix, y: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(a.rows(), y.len(), "dimension mismatch");
        let rows = a.rows();
        let cols = a.cols();
        let mut aug = a.hstack(&Matrix::from_rows(y.iter().map(|&v| vec![v]).collect(), 1));
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
        let mut pivot_row = 0usize;
        for (col, pivot_slot) in pivot_of_col.iter_mut().enumerate() {
            let found = (pivot_row..rows).find(|&r| aug.get(r, col) != 0);
            let r = match found {
                Some(r) => r,
                None => continue,
            };
            if r != pivot_row {
                for c in 0..=cols {
                    let tmp = aug.get(pivot_row, c);
                    aug.set(pivot_row, c, aug.get(r, c));
                    aug.set(r, c, tmp);
                }
            }
            let inv = self.inv(aug.get(pivot_row, col));
            for c in 0..=cols {
                aug.set(pivot_row, c, self.mul(aug.get(pivot_row, c), inv));
            }
            for r2 in 0..rows {
                if r2 == pivot_row {
                    continue;
                }
                let f = aug.get(r2, col);
                if f == 0 {
                    continue;
                }
                for c in 0..=cols {
                    let t = self.mul(f, aug.get(pivot_row, c));
                    aug.set(r2, c, self.sub(aug.get(r2, c), t));
                }
            }
            *pivot_slot = Some(pivot_row);
            pivot_row += 1;
            if pivot_row == rows {
                break;
            }
        }
        // Inconsistent iff a zero row has nonzero right-hand side.
        for r in pivot_row..rows {
            if aug.get(r, cols) != 0 {
                return None;
            }
        }
        let mut x = vec![0u64; cols];
        for (col, pr) in pivot_of_col.iter().enumerate() {
            if let Some(pr) = pr {
                x[col] = aug.get(*pr, cols);
            }
        }
        Some(x)
    }
}

/// Incremental row-space basis in reduced echelon form. Used for rank,
/// span-membership and the excluded-union search during code synthesis.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl SpanBasis {
    pub fn new(cols: usize) -> Self {
        SpanBasis { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, field: &FieldSpec, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f == 0 {
                continue;
            }
            for (vi, &ri) in v.iter_mut().zip(row) {
                let t = field.mul(f, ri);
                *vi = field.sub(*vi, t);
            }
        }
        v
    }

    pub fn contains(&self, field: &FieldSpec, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        self.reduce(field, v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span. Returns true iff the rank grew.
    pub fn insert(&mut self, field: &FieldSpec, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut v = self.reduce(field, v);
        let pc = match v.iter().position(|&x| x != 0) {
            Some(c) => c,
            None => return false,
        };
        let inv = field.inv(v[pc]);
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
        // Keep the basis reduced above the new pivot as well.
        for (row, &rpc) in self.rows.iter_mut().zip(&self.pivots) {
            let f = row[pc];
            if f == 0 {
                continue;
            }
            debug_assert_ne!(rpc, pc);
            for (ri, &vi) in row.iter_mut().zip(&v) {
                let t = field.mul(f, vi);
                *ri = field.sub(*ri, t);
            }
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }
}
