//! Exact rank, nullspace and span computations over Q and F_p.
//!
//! Matrices are stored as sorted sparse rows. Before elimination every matrix
//! is split into the connected components of its row/column incidence graph;
//! components are eliminated independently (in parallel with the `parallel`
//! feature), which is where most of the speed comes from for the heavily
//! block-structured systems produced elsewhere in the crate.
//!
//! Over Q elimination is fraction-free: rows are kept as primitive integer
//! vectors and the pivot for each column is the entry of smallest magnitude.
//! Components below [`DENSE_CUTOFF`] in both dimensions use a dense kernel.

pub(crate) mod modp;
pub(crate) mod rational;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::{Field, PrimeField};
use crate::par;

/// Components smaller than this in both dimensions are eliminated densely.
pub const DENSE_CUTOFF: usize = 200;

/// A sparse vector: `(column, value)` pairs, strictly increasing columns,
/// no stored zeros.
pub type SparseRow<E> = Vec<(usize, E)>;

/// Row echelon form: rows sorted by strictly increasing leading column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<E> {
    pub ncols: usize,
    pub rows: Vec<SparseRow<E>>,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }
}

/// How [`rank_with`] computes ranks of rational matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum RankMode {
    /// Fully exact elimination over the matrix's own field.
    #[default]
    Exact,
    /// Maximum of the ranks modulo `primes` random primes in `[2^61, 2^62)`.
    /// Each modular rank is a lower bound; the maximum equals the rational
    /// rank except for finitely many unlucky primes.
    MultiModular { primes: usize, seed: u64 },
}

/// Sparse matrix over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseRow<F::Elem>>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(field: F, nrows: usize, ncols: usize) -> Self {
        ExactMatrix { field, nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Build from rows given as arbitrary `(col, value)` lists: duplicate
    /// columns are summed and zeros dropped.
    ///
    /// Panics if a column index is out of range.
    pub fn from_rows(field: F, ncols: usize, rows: Vec<Vec<(usize, F::Elem)>>) -> Self {
        let nrows = rows.len();
        let rows = rows.into_iter().map(|r| normalize_row(&field, ncols, r)).collect();
        ExactMatrix { field, nrows, ncols, rows }
    }

    pub fn from_triplets(field: F, nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize, F::Elem)>) -> Self {
        let mut rows: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); nrows];
        for (r, c, v) in entries {
            assert!(r < nrows, "row index {r} out of range");
            rows[r].push((c, v));
        }
        let mut m = Self::from_rows(field, ncols, rows);
        m.nrows = nrows;
        m
    }

    pub fn from_dense(field: F, data: &[Vec<F::Elem>]) -> Self {
        let ncols = data.first().map_or(0, Vec::len);
        let rows = data
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged dense matrix");
                r.iter().cloned().enumerate().collect()
            })
            .collect();
        Self::from_rows(field, ncols, rows)
    }

    /// Integer matrix, entries mapped into the field.
    pub fn from_i64(field: F, data: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<F::Elem>> = data.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_dense(field, &dense)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn rows(&self) -> &[SparseRow<F::Elem>] {
        &self.rows
    }
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.rows[r][i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        assert!(r < self.nrows && c < self.ncols, "index out of range");
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                if self.field.is_zero(&v) {
                    row.remove(i);
                } else {
                    row[i].1 = v;
                }
            }
            Err(i) => {
                if !self.field.is_zero(&v) {
                    row.insert(i, (c, v));
                }
            }
        }
    }

    pub fn push_row(&mut self, row: Vec<(usize, F::Elem)>) {
        let r = normalize_row(&self.field, self.ncols, row);
        self.rows.push(r);
        self.nrows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseRow<F::Elem>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                cols[*c].push((r, v.clone()));
            }
        }
        ExactMatrix { field: self.field.clone(), nrows: self.ncols, ncols: self.nrows, rows: cols }
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.ncols, "dimension mismatch");
        self.rows.iter().map(|row| dot_dense(&self.field, row, v)).collect()
    }

    pub fn mul_sparse(&self, v: &SparseRow<F::Elem>) -> Vec<F::Elem> {
        self.rows.iter().map(|row| dot_sparse(&self.field, row, v)).collect()
    }
}

fn normalize_row<F: Field>(field: &F, ncols: usize, mut row: Vec<(usize, F::Elem)>) -> SparseRow<F::Elem> {
    row.sort_by_key(|e| e.0);
    let mut out: SparseRow<F::Elem> = Vec::with_capacity(row.len());
    for (c, v) in row {
        assert!(c < ncols, "column index {c} out of range ({ncols} columns)");
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = field.add(&last.1, &v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    out
}

fn dot_dense<F: Field>(field: &F, row: &SparseRow<F::Elem>, v: &[F::Elem]) -> F::Elem {
    row.iter().fold(field.zero(), |acc, (c, a)| field.add(&acc, &field.mul(a, &v[*c])))
}

fn dot_sparse<F: Field>(field: &F, a: &SparseRow<F::Elem>, b: &SparseRow<F::Elem>) -> F::Elem {
    let (mut i, mut j) = (0, 0);
    let mut acc = field.zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = field.add(&acc, &field.mul(&a[i].1, &b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// A connected block of a matrix: `cols` are the global column indices
/// (sorted); `rows` use local column positions into `cols`.
pub(crate) struct Component<E> {
    pub cols: Vec<usize>,
    pub rows: Vec<SparseRow<E>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Split rows into connected components. Columns that occur in no row are
/// returned separately.
pub(crate) fn split_components<E: Clone>(rows: &[SparseRow<E>], ncols: usize) -> (Vec<Component<E>>, Vec<usize>) {
    let mut parent: Vec<usize> = (0..ncols).collect();
    let mut used = vec![false; ncols];
    for row in rows {
        if let Some(&(c0, _)) = row.first() {
            used[c0] = true;
            let r0 = find(&mut parent, c0);
            for (c, _) in &row[1..] {
                used[*c] = true;
                let rc = find(&mut parent, *c);
                if rc != r0 {
                    // union towards the smaller root keeps component order stable
                    let (lo, hi) = if rc < r0 { (rc, r0) } else { (r0, rc) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let mut comp_of_root: Vec<usize> = vec![usize::MAX; ncols];
    let mut comps: Vec<Component<E>> = Vec::new();
    let mut local = vec![0usize; ncols];
    let mut isolated = Vec::new();
    for c in 0..ncols {
        if !used[c] {
            isolated.push(c);
            continue;
        }
        let root = find(&mut parent, c);
        if comp_of_root[root] == usize::MAX {
            comp_of_root[root] = comps.len();
            comps.push(Component { cols: Vec::new(), rows: Vec::new() });
        }
        let k = comp_of_root[root];
        local[c] = comps[k].cols.len();
        comps[k].cols.push(c);
    }
    for row in rows {
        if let Some(&(c0, _)) = row.first() {
            let k = comp_of_root[find(&mut parent, c0)];
            comps[k].rows.push(row.iter().map(|(c, v)| (local[*c], v.clone())).collect());
        }
    }
    (comps, isolated)
}

fn rank_rows<F: Field>(field: &F, rows: &[SparseRow<F::Elem>], ncols: usize) -> usize {
    let (comps, _) = split_components(rows, ncols);
    par::map_vec(comps, |c| {
        let n = c.cols.len();
        field.echelon(c.rows, n, false).rank()
    })
    .into_iter()
    .sum()
}

/// Rank of `m` over its field, by exact elimination.
pub fn rank<F: Field>(m: &ExactMatrix<F>) -> usize {
    rank_rows(&m.field, &m.rows, m.ncols)
}

/// Rank with an explicit strategy. Multi-modular mode applies to rational
/// matrices only; prime-field matrices are always eliminated exactly.
pub fn rank_with<F: Field>(m: &ExactMatrix<F>, mode: RankMode) -> usize {
    match mode {
        RankMode::Exact => rank(m),
        RankMode::MultiModular { primes, seed } => multimodular_rank(m, primes, seed).unwrap_or_else(|| rank(m)),
    }
}

/// Random primes in `[2^61, 2^62)` from a seeded generator.
pub fn random_large_primes(count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let cand = rng.random_range((1u64 << 61)..(1u64 << 62)) | 1;
        if primal_check::miller_rabin(cand) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

fn multimodular_rank<F: Field>(m: &ExactMatrix<F>, primes: usize, seed: u64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for p in random_large_primes(primes.max(1), seed) {
        let fp = PrimeField::new_unchecked(p);
        let mut rows = Vec::with_capacity(m.rows.len());
        let mut ok = true;
        'rows: for row in &m.rows {
            let mut r = Vec::with_capacity(row.len());
            for (c, v) in row {
                match m.field.reduce_mod(v, p) {
                    Some(x) => {
                        if x != 0 {
                            r.push((*c, x));
                        }
                    }
                    None => {
                        ok = false;
                        break 'rows;
                    }
                }
            }
            rows.push(r);
        }
        if !ok {
            continue;
        }
        let rk = rank_rows(&fp, &rows, m.ncols);
        best = Some(best.map_or(rk, |b| b.max(rk)));
    }
    best
}

/// Basis of the right kernel `{v : Mv = 0}` as sparse vectors, in reduced
/// echelon form: one vector per free column, with a 1 in that column.
/// Vectors are ordered by their free column.
pub fn nullspace_sparse<F: Field>(m: &ExactMatrix<F>) -> Vec<SparseRow<F::Elem>> {
    let field = &m.field;
    let (comps, isolated) = split_components(&m.rows, m.ncols);
    let per_comp: Vec<Vec<SparseRow<F::Elem>>> = par::map_vec(comps, |c| {
        let n = c.cols.len();
        let check_rows = c.rows.clone();
        let ech = field.echelon(c.rows, n, true);
        let local = kernel_from_rref(field, &ech);
        for v in &local {
            for row in &check_rows {
                assert!(
                    field.is_zero(&dot_sparse(field, row, v)),
                    "nullspace vector failed verification"
                );
            }
        }
        local
            .into_iter()
            .map(|v| v.into_iter().map(|(lc, x)| (c.cols[lc], x)).collect::<SparseRow<F::Elem>>())
            .collect()
    });
    let mut out: Vec<SparseRow<F::Elem>> = isolated.into_iter().map(|c| vec![(c, field.one())]).collect();
    for vs in per_comp {
        out.extend(vs);
    }
    // sort by the free column: the unique column whose entry is 1 and which
    // is not a pivot; for RREF kernels it is the largest column in the vector.
    out.sort_by_key(|v| v.last().map(|e| e.0));
    out
}

/// Kernel basis in reduced form from an RREF with unit pivots.
fn kernel_from_rref<F: Field>(field: &F, ech: &Echelon<F::Elem>) -> Vec<SparseRow<F::Elem>> {
    let mut is_pivot = vec![false; ech.ncols];
    for r in &ech.rows {
        is_pivot[r[0].0] = true;
    }
    let mut contrib: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); ech.ncols];
    for r in &ech.rows {
        let lead = r[0].0;
        for (c, v) in &r[1..] {
            contrib[*c].push((lead, field.neg(v)));
        }
    }
    let mut out = Vec::new();
    for f in 0..ech.ncols {
        if is_pivot[f] {
            continue;
        }
        let mut v = std::mem::take(&mut contrib[f]);
        v.push((f, field.one()));
        v.sort_by_key(|e| e.0);
        out.push(v);
    }
    out
}

/// Dense kernel basis: `cols - rank(M)` vectors, each checked to satisfy
/// `Mv = 0` exactly.
pub fn nullspace<F: Field>(m: &ExactMatrix<F>) -> Vec<Vec<F::Elem>> {
    nullspace_sparse(m)
        .into_iter()
        .map(|v| {
            let mut d = vec![m.field.zero(); m.ncols];
            for (c, x) in v {
                d[c] = x;
            }
            d
        })
        .collect()
}

/// Dimension of the span of `vectors`, each of length `ambient_cols`.
pub fn span_dim_within<F: Field>(field: &F, vectors: &[Vec<F::Elem>], ambient_cols: usize) -> usize {
    let rows = vectors
        .iter()
        .map(|v| {
            assert_eq!(v.len(), ambient_cols, "vector length differs from ambient dimension");
            v.iter().cloned().enumerate().collect()
        })
        .collect();
    rank(&ExactMatrix::from_rows(field.clone(), ambient_cols, rows))
}

/// Sparse variant of [`span_dim_within`].
pub fn span_dim_sparse<F: Field>(field: &F, vectors: Vec<SparseRow<F::Elem>>, ambient_cols: usize) -> usize {
    rank(&ExactMatrix::from_rows(field.clone(), ambient_cols, vectors))
}

/// Reduced row echelon form of the row space of `m`.
pub fn rref<F: Field>(m: &ExactMatrix<F>) -> Echelon<F::Elem> {
    m.field.echelon(m.rows.clone(), m.ncols, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use num_traits::Zero;

    #[test]
    fn rank_examples() {
        let q = Rationals;
        let id = ExactMatrix::from_i64(q, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(rank(&id), 3);
        let z = ExactMatrix::zeros(q, 4, 7);
        assert_eq!(rank(&z), 0);
        let m = ExactMatrix::from_i64(q, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(rank(&m), 2);
        let f2 = PrimeField::new(2).unwrap();
        let m2 = ExactMatrix::from_i64(f2, &[vec![1, 2], vec![3, 4]]);
        assert_eq!(rank(&m2), 1);
    }

    #[test]
    fn nullspace_examples() {
        let q = Rationals;
        let id = ExactMatrix::from_i64(q, &[vec![1, 0], vec![0, 1]]);
        assert!(nullspace(&id).is_empty());
        let sum = ExactMatrix::from_i64(q, &[vec![1, 1, 1]]);
        let ns = nullspace(&sum);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s = v.iter().fold(q.zero(), |a, b| a + b);
            assert!(s.is_zero());
        }
        let z = ExactMatrix::zeros(q, 3, 5);
        assert_eq!(nullspace(&z).len(), 5);
    }

    #[test]
    fn span_examples() {
        let q = Rationals;
        let v = |a: i64, b: i64| vec![q.from_i64(a), q.from_i64(b)];
        assert_eq!(span_dim_within(&q, &[v(1, 0), v(0, 1), v(1, 1)], 2), 2);
        assert_eq!(span_dim_within(&q, &[], 2), 0);
        assert_eq!(span_dim_within(&q, &[v(2, 4), v(1, 2)], 2), 1);
    }

    #[test]
    fn matrix_accessors() {
        let q = Rationals;
        let mut m = ExactMatrix::zeros(q, 2, 3);
        m.set(0, 2, q.from_i64(5));
        m.set(1, 0, q.from_i64(-1));
        assert_eq!(m.get(0, 2), q.from_i64(5));
        assert_eq!(m.nnz(), 2);
        m.set(0, 2, q.zero());
        assert_eq!(m.nnz(), 1);
        let t = m.transpose();
        assert_eq!(t.nrows(), 3);
        assert_eq!(t.get(0, 1), q.from_i64(-1));
    }

    #[test]
    fn duplicate_entries_are_summed() {
        let f = PrimeField::new(3).unwrap();
        let m = ExactMatrix::from_rows(f, 2, vec![vec![(0, 1), (0, 2), (1, 1)]]);
        // 1 + 2 = 0 mod 3
        assert_eq!(m.rows()[0], vec![(1, 1)]);
    }

    #[test]
    fn multimodular_agrees_on_small_matrix() {
        let q = Rationals;
        let m = ExactMatrix::from_i64(q, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(rank_with(&m, RankMode::MultiModular { primes: 3, seed: 7 }), 2);
        let primes = random_large_primes(3, 7);
        assert_eq!(primes, random_large_primes(3, 7));
        assert!(primes.iter().all(|p| *p >= 1 << 61));
    }

    #[test]
    fn components_are_found() {
        let q = Rationals;
        let m = ExactMatrix::from_i64(q, &[vec![1, 0, 1, 0, 0], vec![0, 1, 0, 0, 0], vec![0, 0, 0, 0, 0]]);
        let (comps, iso) = split_components(m.rows(), 5);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].cols, vec![0, 2]);
        assert_eq!(iso, vec![3, 4]);
    }
}
