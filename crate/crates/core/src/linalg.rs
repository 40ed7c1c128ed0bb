//! Exact linear algebra: dense Smith normal form over ℤ, a sparse
//! semi-echelon form over 𝔽ₚ, and sparse quotient lattices over ℤ.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::poly::bigint_json;

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m.data[i * c + j] = x.clone().into();
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(s) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, s * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(bigint_json).collect()))
                .collect(),
        )
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<serde_json::Value> = self.row(i).iter().map(bigint_json).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

// ------------------------------------------------------------ Smith form

/// `left · original · right = diag(diagonal)` with unimodular transforms.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Nonzero invariant factors followed by zeros, length min(rows, cols).
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// Inverse of `right`, maintained alongside it.
    pub right_inverse: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Snf {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Vec<Vec<BigInt>>,
    vinv: Vec<Vec<BigInt>>,
}

impl Snf {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.a {
            r.swap(i, j);
        }
        for r in &mut self.v {
            r.swap(i, j);
        }
        self.vinv.swap(i, j);
    }

    /// row_i += k · row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        let (ri, rj) = two_mut(&mut self.a, i, j);
        for (x, y) in ri.iter_mut().zip(rj.iter()) {
            if !y.is_zero() {
                *x += k * y;
            }
        }
        if let Some(u) = &mut self.u {
            let (ri, rj) = two_mut(u, i, j);
            for (x, y) in ri.iter_mut().zip(rj.iter()) {
                if !y.is_zero() {
                    *x += k * y;
                }
            }
        }
    }

    /// col_i += k · col_j; the inverse transform is row_j -= k · row_i on V⁻¹.
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            if !r[j].is_zero() {
                let t = k * &r[j];
                r[i] += t;
            }
        }
        let (rj, ri) = two_mut(&mut self.vinv, j, i);
        for (x, y) in rj.iter_mut().zip(ri.iter()) {
            if !y.is_zero() {
                *x -= k * y;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -std::mem::take(x);
            }
        }
    }
}

fn two_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &mut a[j])
    }
}

fn ident(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_matrix(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let r = rows.len();
    IntMatrix { rows: r, cols, data: rows.into_iter().flatten().collect() }
}

/// Smith normal form with both transforms; the identity
/// `left · m · right = diag` is checked before returning.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let res = snf_impl(m, true);
    let d = res.left.mul(m).mul(&res.right);
    for i in 0..d.rows {
        for j in 0..d.cols {
            let want = if i == j { res.diagonal[i].clone() } else { BigInt::zero() };
            assert_eq!(d.get(i, j), &want, "Smith normal form certificate failed");
        }
    }
    res
}

/// Smith normal form, optionally skipping the left transform (which is
/// then returned as an empty matrix).
pub fn snf_impl(m: &IntMatrix, want_left: bool) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = Snf {
        a: (0..rows).map(|i| m.row(i).to_vec()).collect(),
        u: want_left.then(|| ident(rows)),
        v: ident(cols),
        vinv: ident(cols),
    };
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &s.a[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| s.a[bi][bj].abs().is_one()) {
                break;
            }
        }
        let Some((bi, bj)) = best else { break };
        if bi != t {
            s.swap_rows(bi, t);
        }
        if bj != t {
            s.swap_cols(bj, t);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if s.a[i][t].is_zero() {
                    continue;
                }
                let q = s.a[i][t].div_floor(&s.a[t][t]);
                s.add_row(i, t, &-q);
                if !s.a[i][t].is_zero() {
                    s.swap_rows(i, t);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if s.a[t][j].is_zero() {
                    continue;
                }
                let q = s.a[t][j].div_floor(&s.a[t][t]);
                s.add_col(j, t, &-q);
                if !s.a[t][j].is_zero() {
                    s.swap_cols(j, t);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block
            let piv = s.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.a[i][j].is_multiple_of(&piv)));
            match bad {
                Some(i) => s.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if s.a[t][t].is_negative() {
            s.negate_row(t);
        }
        t += 1;
    }
    let diagonal = (0..n).map(|i| s.a[i][i].clone()).collect();
    SnfResult {
        diagonal,
        left: match s.u {
            Some(u) => to_matrix(u, rows),
            None => IntMatrix::zeros(0, 0),
        },
        right: to_matrix(s.v, cols),
        right_inverse: to_matrix(s.vinv, cols),
    }
}

// ------------------------------------------------------------ 𝔽ₚ echelon

/// Sparse vector with strictly increasing column indices.
pub type SparseRow = Vec<(u32, u32)>;

/// Semi-echelon basis of a subspace of 𝔽ₚ^ncols. Each stored row has a
/// distinct leading column normalized to 1; columns with smaller index are
/// eliminated first, so remainders are canonical.
#[derive(Clone, Debug)]
pub struct FpEchelon {
    p: u32,
    ncols: usize,
    pivot: Vec<u32>,
    rows: Vec<SparseRow>,
    prov: Option<Vec<HashMap<u32, u32>>>,
    inputs: u32,
}

const NONE: u32 = u32::MAX;

/// Result of reducing a vector against an echelon basis.
#[derive(Clone, Debug, Default)]
pub struct Reduction {
    pub remainder: SparseRow,
    /// Coefficients c_k with `v − remainder = Σ c_k · input_k` (only when
    /// provenance is tracked).
    pub combination: Vec<(u32, u32)>,
}

impl FpEchelon {
    pub fn new(p: u32, ncols: usize, track_provenance: bool) -> Self {
        FpEchelon {
            p,
            ncols,
            pivot: vec![NONE; ncols],
            rows: Vec::new(),
            prov: track_provenance.then(Vec::new),
            inputs: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn prime(&self) -> u32 {
        self.p
    }
    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot[c] != NONE
    }

    fn run(&self, v: &[(u32, u32)], full: bool, want_prov: bool, acc: &mut [u32]) -> (SparseRow, HashMap<u32, u32>) {
        let p = self.p as u64;
        let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::with_capacity(v.len() * 2);
        for &(c, x) in v {
            let x = x % self.p;
            if x != 0 {
                acc[c as usize] = x;
                heap.push(Reverse(c));
            }
        }
        let mut comb: HashMap<u32, u32> = HashMap::new();
        let mut rem: SparseRow = Vec::new();
        let mut last = NONE;
        while let Some(Reverse(c)) = heap.pop() {
            if c == last {
                continue;
            }
            last = c;
            let f = acc[c as usize];
            if f == 0 {
                continue;
            }
            let r = self.pivot[c as usize];
            if r == NONE {
                rem.push((c, f));
                acc[c as usize] = 0;
                if !full {
                    // drain the rest without further reduction
                    while let Some(Reverse(d)) = heap.pop() {
                        if d != last && acc[d as usize] != 0 {
                            rem.push((d, acc[d as usize]));
                            acc[d as usize] = 0;
                        }
                        last = d;
                    }
                    break;
                }
                continue;
            }
            let neg = self.p as u64 - f as u64;
            for &(j, y) in &self.rows[r as usize] {
                let slot = &mut acc[j as usize];
                let was = *slot;
                *slot = ((was as u64 + neg * y as u64) % p) as u32;
                if was == 0 && *slot != 0 {
                    heap.push(Reverse(j));
                }
            }
            if want_prov {
                if let Some(prov) = &self.prov {
                    // v ← v − f·row, row = Σ prov·inputs: record +f·prov in the combination
                    for (&k, &y) in &prov[r as usize] {
                        let e = comb.entry(k).or_insert(0);
                        *e = ((*e as u64 + f as u64 * y as u64) % p) as u32;
                    }
                }
            }
        }
        comb.retain(|_, x| *x != 0);
        (rem, comb)
    }

    /// Fully reduces `v`; the remainder is supported on non-pivot columns.
    pub fn reduce(&self, v: &[(u32, u32)]) -> Reduction {
        let mut acc = vec![0u32; self.ncols];
        let (remainder, comb) = self.run(v, true, self.prov.is_some(), &mut acc);
        let mut combination: Vec<(u32, u32)> = comb.into_iter().collect();
        combination.sort_unstable();
        Reduction { remainder, combination }
    }

    pub fn contains(&self, v: &[(u32, u32)]) -> bool {
        let mut acc = vec![0u32; self.ncols];
        self.run(v, true, false, &mut acc).0.is_empty()
    }

    /// Adds a row; returns whether it enlarged the span. The row is counted
    /// as an input (for provenance) either way.
    pub fn insert(&mut self, v: &[(u32, u32)]) -> bool {
        let mut acc = vec![0u32; self.ncols];
        self.insert_with(v, &mut acc)
    }

    /// Same as [`insert`](Self::insert) with a caller-provided zeroed scratch
    /// buffer of length `ncols`, which is left zeroed.
    pub fn insert_with(&mut self, v: &[(u32, u32)], acc: &mut [u32]) -> bool {
        let id = self.inputs;
        self.inputs += 1;
        let track = self.prov.is_some();
        let (rem, comb) = self.run(v, !track, track, acc);
        let Some(&(lead, lc)) = rem.first() else { return false };
        let inv = crate::arith::inv_mod(lc, self.p) as u64;
        let p = self.p as u64;
        let row: SparseRow = rem.iter().map(|&(c, x)| (c, ((x as u64 * inv) % p) as u32)).collect();
        if let Some(prov) = &mut self.prov {
            // row = inv·(v − Σ comb·inputs)
            let mut h: HashMap<u32, u32> = comb
                .into_iter()
                .map(|(k, x)| (k, (((self.p - x) as u64 * inv) % p) as u32))
                .filter(|(_, x)| *x != 0)
                .collect();
            h.insert(id, inv as u32);
            prov.push(h);
        }
        self.pivot[lead as usize] = self.rows.len() as u32;
        self.rows.push(row);
        true
    }

    /// Stored basis rows (leading coefficient 1).
    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }
}

/// Converts a dense 𝔽ₚ vector into sparse form.
pub fn sparse_from_dense(v: &[u32]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, &x)| (i as u32, x)).collect()
}

// ------------------------------------------------------------ ℤ quotient

pub type IntRow = Vec<(u32, BigInt)>;

/// The quotient ℤ^ncols / span(rows) with a normal form.
///
/// Unit pivots are eliminated sparsely in creation order; what remains is
/// handled by a dense Smith form on the non-pivot columns.
#[derive(Clone, Debug)]
pub struct IntQuotient {
    ncols: usize,
    pivot_of_col: Vec<u32>,
    /// (pivot column, ±1 coefficient, row) in creation order; each row is
    /// zero on the pivot columns of earlier pivots.
    pivots: Vec<(u32, BigInt, IntRow)>,
    free_cols: Vec<u32>,
    free_index: HashMap<u32, usize>,
    /// Invariant factors on the free columns (after the V transform); zero
    /// entries mean a free ℤ summand.
    factors: Vec<BigInt>,
    v: IntMatrix,
    vinv: IntMatrix,
}

impl IntQuotient {
    pub fn new(ncols: usize, rows: Vec<IntRow>) -> Self {
        let mut q = IntQuotient {
            ncols,
            pivot_of_col: vec![NONE; ncols],
            pivots: Vec::new(),
            free_cols: Vec::new(),
            free_index: HashMap::new(),
            factors: Vec::new(),
            v: IntMatrix::zeros(0, 0),
            vinv: IntMatrix::zeros(0, 0),
        };
        let mut hard: Vec<IntRow> = Vec::new();
        for r in rows {
            let r = q.reduce_pivots(&r);
            if !r.is_empty() && !q.try_pivot(&r) {
                hard.push(r);
            }
        }
        loop {
            let mut progress = false;
            let mut next = Vec::new();
            for r in hard {
                let r = q.reduce_pivots(&r);
                if r.is_empty() {
                    continue;
                }
                if q.try_pivot(&r) {
                    progress = true;
                } else {
                    next.push(r);
                }
            }
            hard = next;
            if !progress {
                break;
            }
        }
        q.free_cols = (0..ncols as u32).filter(|&c| q.pivot_of_col[c as usize] == NONE).collect();
        q.free_index = q.free_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let k = q.free_cols.len();
        let mut m = IntMatrix::zeros(hard.len(), k);
        for (i, r) in hard.iter().enumerate() {
            for (c, x) in r {
                m.set(i, q.free_index[c], x.clone());
            }
        }
        let snf = snf_impl(&m, false);
        let mut factors = vec![BigInt::zero(); k];
        for (i, d) in snf.diagonal.iter().enumerate() {
            factors[i] = d.clone();
        }
        q.factors = factors;
        q.v = snf.right;
        q.vinv = snf.right_inverse;
        q
    }

    fn try_pivot(&mut self, r: &IntRow) -> bool {
        let Some((c, x)) = r.iter().find(|(_, x)| x.abs().is_one()) else { return false };
        self.pivot_of_col[*c as usize] = self.pivots.len() as u32;
        self.pivots.push((*c, x.clone(), r.clone()));
        true
    }

    /// Eliminates all pivot columns, returning the residual sparse row.
    fn reduce_pivots(&self, v: &IntRow) -> IntRow {
        let mut acc: HashMap<u32, BigInt> = HashMap::with_capacity(v.len() * 2);
        let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
        for (c, x) in v {
            if x.is_zero() {
                continue;
            }
            *acc.entry(*c).or_insert_with(BigInt::zero) += x;
            let k = self.pivot_of_col[*c as usize];
            if k != NONE {
                heap.push(Reverse(k));
            }
        }
        let mut last = NONE;
        while let Some(Reverse(k)) = heap.pop() {
            if k == last {
                continue;
            }
            last = k;
            let (pc, pcoef, prow) = &self.pivots[k as usize];
            let Some(f) = acc.get(pc).cloned() else { continue };
            if f.is_zero() {
                continue;
            }
            // f·pcoef⁻¹ with pcoef = ±1
            let m = if pcoef.is_positive() { f } else { -f };
            for (j, y) in prow {
                let e = acc.entry(*j).or_insert_with(BigInt::zero);
                let was_zero = e.is_zero();
                *e -= &m * y;
                if was_zero && !e.is_zero() {
                    let kj = self.pivot_of_col[*j as usize];
                    if kj != NONE && kj > k {
                        heap.push(Reverse(kj));
                    }
                }
            }
        }
        let mut out: IntRow = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        out.sort_unstable_by_key(|(c, _)| *c);
        out
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Invariant factors of the quotient group: (free rank, torsion orders > 1).
    pub fn group(&self) -> (usize, Vec<BigInt>) {
        let free = self.factors.iter().filter(|d| d.is_zero()).count();
        let tors = self.factors.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        (free, tors)
    }

    /// Coordinates of the class of `v`: one entry per factor, reduced into
    /// [0, d) for torsion factors, zero for trivial ones.
    pub fn coordinates(&self, v: &IntRow) -> Vec<BigInt> {
        let r = self.reduce_pivots(v);
        let k = self.free_cols.len();
        let mut y = vec![BigInt::zero(); k];
        for (c, x) in &r {
            let i = self.free_index[c];
            for (j, yj) in y.iter_mut().enumerate() {
                let vij = self.v.get(i, j);
                if !vij.is_zero() {
                    *yj += x * vij;
                }
            }
        }
        for (yj, d) in y.iter_mut().zip(&self.factors) {
            if !d.is_zero() {
                *yj = yj.mod_floor(d);
            }
        }
        y
    }

    pub fn is_zero(&self, v: &IntRow) -> bool {
        self.coordinates(v).iter().all(|x| x.is_zero())
    }

    /// Canonical representative of the class of `v`.
    pub fn normal_form(&self, v: &IntRow) -> IntRow {
        let y = self.coordinates(v);
        self.from_coordinates(&y)
    }

    /// Vector Σ yᵢ · repᵢ where repᵢ is row i of V⁻¹ on the free columns.
    pub fn from_coordinates(&self, y: &[BigInt]) -> IntRow {
        let k = self.free_cols.len();
        let mut out = vec![BigInt::zero(); k];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let x = self.vinv.get(i, j);
                if !x.is_zero() {
                    *o += yi * x;
                }
            }
        }
        out.into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (self.free_cols[j], x))
            .collect()
    }

    /// Orders of the coordinate factors (0 = infinite, 1 = trivial).
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }
}

/// Converts a small BigInt to i64 or reports overflow.
pub fn small(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Range(format!("{x} does not fit in 64 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_rows(m)).diagonal.iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(diag(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(diag(&[vec![4], vec![6]]), vec![2]);
        let id = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(id.diagonal, vec![BigInt::one(); 3]);
        assert_eq!(id.left, IntMatrix::identity(3));
        assert_eq!(id.right, IntMatrix::identity(3));
    }

    #[test]
    fn snf_inverse_transform() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.right.mul(&s.right_inverse), IntMatrix::identity(3));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn determinants() {
        let a = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(a.determinant(), BigInt::from(3));
        let s = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(s.determinant(), BigInt::from(-1));
    }

    #[test]
    fn fp_echelon_provenance() {
        let mut e = FpEchelon::new(5, 3, true);
        assert!(e.insert(&[(0, 1), (1, 2)]));
        assert!(e.insert(&[(1, 1), (2, 1)]));
        assert!(!e.insert(&[(0, 1), (1, 3), (2, 1)]));
        let v = vec![(0, 2), (1, 4), (2, 0)];
        let r = e.reduce(&v);
        assert!(r.remainder.is_empty());
        // 2·row0 = (2,4,0)
        assert_eq!(r.combination, vec![(0, 2)]);
        let w = vec![(0, 1), (1, 3), (2, 1)];
        let r = e.reduce(&w);
        assert!(r.remainder.is_empty());
        assert_eq!(r.combination, vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn int_quotient_cyclic() {
        // ℤ² / ⟨(2, 0), (1, 3)⟩ ≅ ℤ/6
        let q = IntQuotient::new(2, vec![vec![(0, BigInt::from(2))], vec![(0, BigInt::from(1)), (1, BigInt::from(3))]]);
        let (free, tors) = q.group();
        assert_eq!(free, 0);
        assert_eq!(tors, vec![BigInt::from(6)]);
        assert!(q.is_zero(&vec![(1, BigInt::from(6))]));
        assert!(!q.is_zero(&vec![(1, BigInt::from(2))]));
        let a = q.normal_form(&vec![(0, BigInt::from(5))]);
        let b = q.normal_form(&vec![(1, BigInt::from(1))]);
        assert_eq!(a, q.normal_form(&vec![(0, BigInt::from(1)), (1, BigInt::from(6))]));
        assert_ne!(a, b);
    }
}
