//! Exact integer and rational linear algebra.
//!
//! Everything here is deterministic: canonical reduced echelon forms, Smith
//! and Hermite normal forms with unimodular transforms, saturated integer
//! kernels. The incremental [`Echelon`] accumulator is the workhorse for the
//! graded-slice computations elsewhere in the crate; it keeps rows sparse, so
//! slices whose generators have few terms stay cheap even in high degree.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::{Int, Rat};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Int>,
}

/// Dense matrix of arbitrary-precision rationals, row-major.
///
/// `num_rational` keeps every entry in lowest terms with positive
/// denominator, so that invariant holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Rat>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Result<Self, Error> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row list");
            entries.extend(r.iter().cloned());
        }
        IntMatrix { rows: rows.len(), cols, entries }
    }

    pub fn at(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        *out.at_mut(r, c) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut s = Int::zero();
                for c in 0..self.cols {
                    s += self.at(r, c) * &v[c];
                }
                s
            })
            .collect()
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| Rat::from_integer(e.clone())).collect(),
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.rows_vec();
        let mut prev = Int::one();
        let mut sign = 1i32;
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = &t / &prev;
                }
                m[i][k] = Int::zero();
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 { -d } else { d }
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self, Error> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row list");
            entries.extend(r.iter().cloned());
        }
        RatMatrix { rows: rows.len(), cols, entries }
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut s = Rat::zero();
                for c in 0..self.cols {
                    if !self.at(r, c).is_zero() && !v[c].is_zero() {
                        s += self.at(r, c) * &v[c];
                    }
                }
                s
            })
            .collect()
    }
}

/// Sparse rational row: sorted `(column, nonzero coefficient)` pairs.
pub type SparseRow = Vec<(usize, Rat)>;

/// Turn a dense vector into a sparse row.
pub fn sparse_from_dense(v: &[Rat]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Turn a sparse row back into a dense vector of the given width.
pub fn dense_from_sparse(row: &[(usize, Rat)], cols: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); cols];
    for (c, x) in row {
        v[*c] = x.clone();
    }
    v
}

/// Incremental echelon accumulator over the rationals.
///
/// Rows are inserted one at a time and forward-reduced against the pivots
/// found so far. The pivot column set is intrinsic to the accumulated row
/// space (it equals the reduced-echelon pivot set, i.e. the lexicographically
/// first independent column set), so it does not depend on insertion order.
/// [`Echelon::reduce`] gives the canonical representative of a vector modulo
/// the row space, supported on non-pivot columns.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    /// Pivot column -> stored row with leading coefficient 1 at that column.
    pivots: BTreeMap<usize, SparseRow>,
    reduced: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { pivots: BTreeMap::new(), reduced: false }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Forward-reduce `row` against the stored pivots. Returns the canonical
    /// residue (supported on non-pivot columns) and, when requested by
    /// `coeffs`, the multipliers applied to the stored pivot rows.
    fn reduce_inner(&self, row: SparseRow, want_coeffs: bool) -> (SparseRow, BTreeMap<usize, Rat>) {
        let mut work: BTreeMap<usize, Rat> = row.into_iter().collect();
        let mut out: SparseRow = Vec::new();
        let mut coeffs = BTreeMap::new();
        while let Some((&col, _)) = work.iter().next() {
            let val = work.remove(&col).expect("key just observed");
            if val.is_zero() {
                continue;
            }
            if let Some(pivot_row) = self.pivots.get(&col) {
                // Stored rows are normalized with leading coefficient 1.
                for (c, x) in pivot_row.iter().skip(1) {
                    let delta = &val * x;
                    let e = work.entry(*c).or_insert_with(Rat::zero);
                    *e -= delta;
                    if e.is_zero() {
                        work.remove(c);
                    }
                }
                if want_coeffs {
                    coeffs.insert(col, val);
                }
            } else {
                out.push((col, val));
            }
        }
        (out, coeffs)
    }

    /// Canonical residue of `row` modulo the accumulated row space.
    pub fn reduce(&self, row: SparseRow) -> SparseRow {
        self.reduce_inner(row, false).0
    }

    /// Membership test: does `row` lie in the accumulated row space?
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Insert a row. Returns `true` when the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let (mut residual, _) = self.reduce_inner(row, false);
        if residual.is_empty() {
            return false;
        }
        let lead = residual[0].1.clone();
        if !lead.is_one() {
            for (_, x) in residual.iter_mut() {
                *x = &*x / &lead;
            }
        }
        self.pivots.insert(residual[0].0, residual);
        self.reduced = false;
        true
    }

    /// Fully back-substitute so every stored row is the canonical
    /// reduced-echelon basis row of the row space.
    pub fn make_reduced(&mut self) {
        if self.reduced {
            return;
        }
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        // Reduce rows against later pivots, working right to left so each
        // pass uses already-canonical rows.
        for &col in cols.iter().rev() {
            let row = self.pivots.remove(&col).expect("pivot present");
            let mut rest: SparseRow = Vec::with_capacity(row.len());
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            rest.push(row[0].clone());
            for (c, x) in row.into_iter().skip(1) {
                acc.insert(c, x);
            }
            while let Some((&c, _)) = acc.iter().next() {
                let val = acc.remove(&c).expect("key just observed");
                if val.is_zero() {
                    continue;
                }
                if let Some(prow) = self.pivots.get(&c) {
                    for (cc, x) in prow.iter().skip(1) {
                        let delta = &val * x;
                        let e = acc.entry(*cc).or_insert_with(Rat::zero);
                        *e -= delta;
                        if e.is_zero() {
                            acc.remove(cc);
                        }
                    }
                } else {
                    rest.push((c, val));
                }
            }
            self.pivots.insert(col, rest);
        }
        self.reduced = true;
    }

    /// The canonical reduced-echelon rows spanning the accumulated space,
    /// ordered by pivot column.
    pub fn rref_rows(&mut self) -> Vec<SparseRow> {
        self.make_reduced();
        self.pivots.values().cloned().collect()
    }

    /// Canonical basis of the orthogonal "free coordinate" complement: for
    /// each non-pivot column of a `cols`-wide space, the reduced-echelon
    /// kernel-style vector with 1 there and the pivot-column compensations.
    /// When the accumulated rows are the rows of a matrix A, this is the
    /// canonical nullspace basis of A... of the row space viewed as
    /// constraints. See [`rank_and_nullspace`].
    pub fn complement_basis(&mut self, cols: usize) -> Vec<Vec<Rat>> {
        self.make_reduced();
        let mut basis = Vec::new();
        for free in 0..cols {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); cols];
            v[free] = Rat::one();
            for (p, row) in &self.pivots {
                for (c, x) in row.iter().skip(1) {
                    if *c == free {
                        v[*p] = -x.clone();
                    }
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank and canonical nullspace basis of a rational matrix.
///
/// The basis is itself in reduced echelon form: each vector leads with 1 at
/// its lowest nonzero coordinate, and those lead coordinates are distinct.
pub fn rank_and_nullspace(a: &RatMatrix) -> (usize, Vec<Vec<Rat>>) {
    let mut ech = Echelon::new();
    for r in 0..a.rows {
        ech.insert(sparse_from_dense(a.row(r)));
    }
    let rank = ech.rank();
    let raw = ech.complement_basis(a.cols);
    // Canonicalize the kernel basis by echelonizing it as a row set.
    let mut kech = Echelon::new();
    for v in &raw {
        kech.insert(sparse_from_dense(v));
    }
    let basis = kech.rref_rows().iter().map(|r| dense_from_sparse(r, a.cols)).collect();
    (rank, basis)
}

/// Solve `A x = b` exactly. Returns the canonical solution with all free
/// variables set to zero, or `None` when the system is inconsistent.
pub fn solve_linear(a: &RatMatrix, b: &[Rat]) -> Result<Option<Vec<Rat>>, Error> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, got: b.len() });
    }
    // Echelonize the augmented system [A | b] with b in a final column.
    let mut ech = Echelon::new();
    for r in 0..a.rows {
        let mut row = sparse_from_dense(a.row(r));
        if !b[r].is_zero() {
            row.push((a.cols, b[r].clone()));
        }
        ech.insert(row);
    }
    if ech.is_pivot(a.cols) {
        return Ok(None);
    }
    ech.make_reduced();
    let mut x = vec![Rat::zero(); a.cols];
    for row in ech.rref_rows() {
        let pivot_col = row[0].0;
        // With free variables at zero, the pivot variable equals minus the
        // augmented entry's negation: row reads x_p + ... + c*b-col = 0
        // homogeneously; concretely x_p = value carried in the b column.
        let mut rhs = Rat::zero();
        for (c, v) in row.iter().skip(1) {
            if *c == a.cols {
                rhs = v.clone();
            }
        }
        x[pivot_col] = rhs;
    }
    Ok(Some(x))
}

/// Smith normal form: returns `(U, S, V)` with `U * A * V = S`, `U` and `V`
/// unimodular, `S` diagonal with nonnegative entries `d1 | d2 | ...`.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = a.rows;
    let cols = a.cols;
    let mut s = a.rows_vec();
    let mut u = IntMatrix::identity(rows).rows_vec();
    let mut v = IntMatrix::identity(cols).rows_vec();

    fn swap_rows(m: &mut [Vec<Int>], i: usize, j: usize) {
        m.swap(i, j);
    }
    fn swap_cols(m: &mut [Vec<Int>], i: usize, j: usize) {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }
    fn add_row(m: &mut [Vec<Int>], dst: usize, src: usize, k: &Int) {
        if m.is_empty() {
            return;
        }
        for c in 0..m[0].len() {
            let t = &m[src][c] * k;
            m[dst][c] += t;
        }
    }
    fn add_col(m: &mut [Vec<Int>], dst: usize, src: usize, k: &Int) {
        for row in m.iter_mut() {
            let t = &row[src] * k;
            row[dst] += t;
        }
    }
    fn neg_row(m: &mut [Vec<Int>], i: usize) {
        for x in m[i].iter_mut() {
            *x = -x.clone();
        }
    }

    let n = core::cmp::min(rows, cols);
    let mut t = 0;
    while t < n {
        // Pick the nonzero entry of smallest magnitude in the trailing block
        // (lowest indices break ties) as the working pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !s[r][c].is_zero() {
                    let better = match &pivot {
                        None => true,
                        Some((pr, pc)) => s[r][c].abs() < s[*pr][*pc].abs(),
                    };
                    if better {
                        pivot = Some((r, c));
                    }
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        swap_rows(&mut s, t, pr);
        swap_rows(&mut u, t, pr);
        swap_cols(&mut s, t, pc);
        swap_cols(&mut v, t, pc);

        loop {
            let mut clean = true;
            // Clear the pivot column by row operations.
            for r in t + 1..rows {
                if s[r][t].is_zero() {
                    continue;
                }
                let q = Int::div_floor(&s[r][t], &s[t][t]);
                let k = -q;
                add_row(&mut s, r, t, &k);
                add_row(&mut u, r, t, &k);
                if !s[r][t].is_zero() {
                    // Remainder became the smaller pivot candidate.
                    swap_rows(&mut s, t, r);
                    swap_rows(&mut u, t, r);
                    clean = false;
                }
            }
            // Clear the pivot row by column operations.
            for c in t + 1..cols {
                if s[t][c].is_zero() {
                    continue;
                }
                let q = Int::div_floor(&s[t][c], &s[t][t]);
                let k = -q;
                add_col(&mut s, c, t, &k);
                add_col(&mut v, c, t, &k);
                if !s[t][c].is_zero() {
                    swap_cols(&mut s, t, c);
                    swap_cols(&mut v, t, c);
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }

        if s[t][t].is_negative() {
            neg_row(&mut s, t);
            neg_row(&mut u, t);
        }

        // Enforce the divisibility chain: fold any non-divisible entry of the
        // trailing block into the pivot position and redo this step.
        let mut redo = false;
        'outer: for r in t + 1..rows {
            for c in t + 1..cols {
                if !(&s[r][c] % &s[t][t]).is_zero() {
                    let one = Int::one();
                    add_row(&mut s, t, r, &one);
                    add_row(&mut u, t, r, &one);
                    redo = true;
                    break 'outer;
                }
            }
        }
        if !redo {
            t += 1;
        }
    }

    (IntMatrix::from_rows(&u), IntMatrix::from_rows(&s), IntMatrix::from_rows(&v))
}

/// Canonical row Hermite normal form: nonzero rows with positive pivots in
/// increasing pivot-column order, entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped.
pub fn hnf_rows(rows_in: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut rows: Vec<Vec<Int>> = rows_in.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut pivot_rows: Vec<(usize, Vec<Int>)> = Vec::new();
    for mut row in rows.drain(..) {
        loop {
            let Some(lead) = row.iter().position(|x| !x.is_zero()) else { break };
            match pivot_rows.iter().position(|(p, _)| *p == lead) {
                Some(idx) => {
                    // Gcd-combine with the stored pivot row at this column.
                    let (g, a, b) = ext_gcd(&pivot_rows[idx].1[lead], &row[lead]);
                    let old = pivot_rows[idx].1.clone();
                    let mut combo = vec![Int::zero(); cols];
                    let mut reduce_old = vec![Int::zero(); cols];
                    let q1 = &old[lead] / &g;
                    let q2 = &row[lead] / &g;
                    for c in 0..cols {
                        combo[c] = &a * &old[c] + &b * &row[c];
                        reduce_old[c] = &q1 * &row[c] - &q2 * &old[c];
                    }
                    pivot_rows[idx].1 = combo;
                    row = reduce_old;
                }
                None => {
                    if row[lead].is_negative() {
                        for x in row.iter_mut() {
                            *x = -x.clone();
                        }
                    }
                    pivot_rows.push((lead, row));
                    break;
                }
            }
        }
    }
    pivot_rows.sort_by_key(|(p, _)| *p);
    // Reduce entries above each pivot.
    for i in (0..pivot_rows.len()).rev() {
        let (p, prow) = pivot_rows[i].clone();
        for j in 0..i {
            let q = Int::div_floor(&pivot_rows[j].1[p], &prow[p]);
            if !q.is_zero() {
                for c in 0..cols {
                    let t = &prow[c] * &q;
                    pivot_rows[j].1[c] -= t;
                }
            }
        }
    }
    pivot_rows.into_iter().map(|(_, r)| r).collect()
}

/// Extended gcd: returns `(g, a, b)` with `a*x + b*y = g`, `g >= 0`.
pub fn ext_gcd(x: &Int, y: &Int) -> (Int, Int, Int) {
    let e = Int::extended_gcd(x, y);
    (e.gcd, e.x, e.y)
}

/// Basis of the saturated integer kernel `{v in Z^cols : A v = 0}`, returned
/// as the rows of a matrix in canonical Hermite-reduced form.
pub fn kernel_saturation(a: &IntMatrix) -> IntMatrix {
    let (_, s, v) = smith_normal_form(a);
    let n = core::cmp::min(s.rows, s.cols);
    let mut rank = 0;
    for i in 0..n {
        if !s.at(i, i).is_zero() {
            rank += 1;
        }
    }
    // Columns of V beyond the rank span the saturated kernel, because V is
    // unimodular and A * V has those columns zero.
    let mut basis: Vec<Vec<Int>> = Vec::new();
    for c in rank..a.cols {
        basis.push((0..a.cols).map(|r| v.at(r, c).clone()).collect());
    }
    let canonical = hnf_rows(&basis);
    if canonical.is_empty() {
        IntMatrix::zero(0, a.cols)
    } else {
        IntMatrix::from_rows(&canonical)
    }
}

/// Primitive vector in the direction of `v` (divide by the gcd of the
/// coordinates, keeping orientation). Zero stays zero.
pub fn primitive_vector(v: &[Int]) -> Vec<Int> {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clear denominators of a rational vector and make it primitive integral,
/// keeping orientation. Returns `None` for the zero vector.
pub fn primitive_from_rational(v: &[Rat]) -> Option<Vec<Int>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    Some(primitive_vector(&ints))
}
