use std::collections::{HashMap, HashSet};

use super::rational::Rat;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(u32, Rat)>;

/// `x + c*y` for sparse vectors.
pub fn axpy(x: &[(u32, Rat)], c: &Rat, y: &[(u32, Rat)]) -> SparseVec {
    if c.is_zero() {
        return x.to_vec();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let xi = x.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let yj = y.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        if xi < yj {
            out.push(x[i].clone());
            i += 1;
        } else if yj < xi {
            out.push((yj, c * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + &(c * &y[j].1);
            if !v.is_zero() {
                out.push((xi, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec(x: &[(u32, Rat)], c: &Rat) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, v * c)).collect()
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn sparse_from_entries(mut entries: Vec<(u32, Rat)>) -> SparseVec {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (i, v) in entries {
        match out.last_mut() {
            Some((j, w)) if *j == i => *w = &*w + &v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

fn vec_height(v: &[(u32, Rat)]) -> u64 {
    v.iter().map(|e| e.1.height()).max().unwrap_or(0)
}

/// Sparse rational matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> QMatrix {
        QMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i as u32, Rat::one())]).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> QMatrix {
        debug_assert!(columns
            .iter()
            .all(|c| c.iter().all(|e| (e.0 as usize) < rows)));
        QMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn from_dense(entries: &[Vec<Rat>]) -> QMatrix {
        let rows = entries.len();
        let cols = entries.first().map(|r| r.len()).unwrap_or(0);
        let mut columns = vec![Vec::new(); cols];
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    columns[j].push((i as u32, v.clone()));
                }
            }
        }
        QMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_ints(entries: &[Vec<i64>]) -> QMatrix {
        let dense: Vec<Vec<Rat>> = entries
            .iter()
            .map(|r| r.iter().map(|&v| Rat::from_int(v)).collect())
            .collect();
        QMatrix::from_dense(&dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        let col = &self.columns[j];
        match col.binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(p) => col[p].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn mul_vec(&self, v: &[(u32, Rat)]) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in v {
            acc = axpy(&acc, c, &self.columns[*j as usize]);
        }
        acc
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        QMatrix {
            rows: self.rows,
            cols: other.cols,
            columns: other.columns.iter().map(|c| self.mul_vec(c)).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| axpy(a, &Rat::from_int(-1), b))
                .collect(),
        }
    }

    pub fn transpose(&self) -> QMatrix {
        let mut columns = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                columns[*i as usize].push((j as u32, v.clone()));
            }
        }
        QMatrix {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> QMatrix {
        assert_eq!(perm.len(), self.rows);
        let mut inv = vec![0u32; self.rows];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new as u32;
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                sparse_from_entries(
                    c.iter()
                        .map(|(i, v)| (inv[*i as usize], v.clone()))
                        .collect(),
                )
            })
            .collect();
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out[*i as usize][j] = v.clone();
            }
        }
        out
    }
}

/// Row-echelon basis of a subspace, built incrementally.
///
/// Each stored row has leading coefficient 1 at its pivot, which is its
/// smallest index. Rows may carry a combination vector recording how they
/// were obtained from the inserted vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    /// `pivot_row[i]` is the row whose pivot is `i`.
    pivot_row: Vec<Option<usize>>,
    track: bool,
}

/// Result of reducing a vector against an [`Echelon`].
pub struct Reduction {
    pub remainder: SparseVec,
    /// `(row, c)`: the reduced vector equals `remainder + Σ c·row`.
    pub coefficients: Vec<(usize, Rat)>,
    pub combo: SparseVec,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn tracking() -> Echelon {
        Echelon {
            track: true,
            ..Echelon::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.rows[r]
    }

    pub fn reduce(&self, mut v: SparseVec, mut combo: SparseVec) -> Reduction {
        let mut coefficients = Vec::new();
        let mut pos = 0;
        while pos < v.len() {
            let idx = v[pos].0 as usize;
            if let Some(r) = self.pivot_row.get(idx).copied().flatten() {
                let c = v[pos].1.clone();
                let neg = -&c;
                v = axpy(&v, &neg, &self.rows[r]);
                if self.track {
                    combo = axpy(&combo, &neg, &self.combos[r]);
                }
                coefficients.push((r, c));
            } else {
                pos += 1;
            }
        }
        Reduction {
            remainder: v,
            coefficients,
            combo,
        }
    }

    pub fn contains(&self, v: &[(u32, Rat)]) -> bool {
        self.reduce(v.to_vec(), Vec::new()).remainder.is_empty()
    }

    /// Inserts a reduced remainder as a new row; returns its index.
    fn push_row(&mut self, remainder: SparseVec, combo: SparseVec) -> usize {
        let lead = remainder[0].1.recip();
        let row = scale_vec(&remainder, &lead);
        let combo = if self.track {
            scale_vec(&combo, &lead)
        } else {
            combo
        };
        let r = self.rows.len();
        let top = row.last().map_or(0, |e| e.0 as usize + 1);
        if self.pivot_row.len() < top {
            self.pivot_row.resize(top, None);
        }
        self.pivot_row[row[0].0 as usize] = Some(r);
        self.rows.push(row);
        self.combos.push(combo);
        r
    }

    /// Adds `v` to the span. Returns the new row index if `v` was independent,
    /// otherwise the combination (meaningful when tracking) that reduced it to 0.
    pub fn insert(&mut self, v: SparseVec, combo: SparseVec) -> Result<usize, SparseVec> {
        let red = self.reduce(v, combo);
        if red.remainder.is_empty() {
            Err(red.combo)
        } else {
            Ok(self.push_row(red.remainder, red.combo))
        }
    }
}

/// Rank, kernel basis and image basis of a matrix.
#[derive(Clone, Debug)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Vec<SparseVec>,
    pub image: Vec<SparseVec>,
}

/// Column processing order: sparse, small-coefficient columns first, which
/// keeps fill-in and coefficient growth down.
fn column_order(m: &QMatrix) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m.cols).collect();
    order.sort_by_key(|&j| (m.columns[j].len(), vec_height(&m.columns[j]), j));
    order
}

/// Rank by sparse elimination with Markowitz pivoting: each step pivots in
/// the sparsest remaining column, on its sparsest row.
pub fn rank(m: &QMatrix) -> usize {
    let mut cols: Vec<HashMap<u32, Rat>> = m
        .columns
        .iter()
        .map(|c| c.iter().cloned().collect())
        .collect();
    let mut rows: Vec<HashSet<u32>> = vec![HashSet::new(); m.rows];
    for (j, c) in m.columns.iter().enumerate() {
        for (i, _) in c {
            rows[*i as usize].insert(j as u32);
        }
    }
    let mut alive: Vec<u32> = (0..m.cols as u32)
        .filter(|&j| !cols[j as usize].is_empty())
        .collect();
    let mut rank = 0;
    loop {
        alive.retain(|&j| !cols[j as usize].is_empty());
        let Some(&c) = alive.iter().min_by_key(|&&j| cols[j as usize].len()) else {
            break;
        };
        let pivot_col = std::mem::take(&mut cols[c as usize]);
        let (&r, p) = pivot_col
            .iter()
            .min_by_key(|(i, x)| (rows[**i as usize].len(), x.height(), **i))
            .expect("nonempty column");
        let p = p.clone();
        for i in pivot_col.keys() {
            rows[*i as usize].remove(&c);
        }
        let others: Vec<u32> = rows[r as usize].iter().copied().collect();
        for c2 in others {
            let col = &mut cols[c2 as usize];
            let f = &col[&r] / &p;
            for (i, x) in &pivot_col {
                let v = col.entry(*i).or_insert_with(Rat::zero);
                let was_zero = v.is_zero();
                *v -= &(&f * x);
                if v.is_zero() {
                    col.remove(i);
                    rows[*i as usize].remove(&c2);
                } else if was_zero {
                    rows[*i as usize].insert(c2);
                }
            }
        }
        debug_assert!(rows[r as usize].is_empty());
        rank += 1;
    }
    rank
}

pub fn rank_kernel_image(m: &QMatrix) -> RankKernelImage {
    let mut e = Echelon::tracking();
    let mut kernel = Vec::new();
    for j in column_order(m) {
        let unit = vec![(j as u32, Rat::one())];
        if let Err(k) = e.insert(m.columns[j].clone(), unit) {
            kernel.push(k);
        }
    }
    kernel.sort_by_key(|k| k.last().map(|e| e.0));
    RankKernelImage {
        rank: e.rank(),
        kernel,
        image: e.rows.clone(),
    }
}

/// Kernel basis only (no image bookkeeping), for callers that do not need it.
pub fn kernel(m: &QMatrix) -> Vec<SparseVec> {
    rank_kernel_image(m).kernel
}

/// Solves `m x = b`, returning one solution if it exists.
pub fn solve(m: &QMatrix, b: &[(u32, Rat)]) -> Option<SparseVec> {
    let mut e = Echelon::tracking();
    for j in column_order(m) {
        let unit = vec![(j as u32, Rat::one())];
        let _ = e.insert(m.columns[j].clone(), unit);
    }
    let red = e.reduce(b.to_vec(), Vec::new());
    if !red.remainder.is_empty() {
        return None;
    }
    let mut x: SparseVec = Vec::new();
    for (r, c) in red.coefficients {
        x = axpy(&x, &c, &e.combos[r]);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_and_zero() {
        let r = rank_kernel_image(&QMatrix::identity(3));
        assert_eq!(r.rank, 3);
        assert!(r.kernel.is_empty());
        assert_eq!(r.image.len(), 3);
        let z = rank_kernel_image(&QMatrix::zeros(2, 5));
        assert_eq!(z.rank, 0);
        assert_eq!(z.kernel.len(), 5);
    }

    #[test]
    fn markowitz_rank_matches_echelon() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let (r, c) = (rng.gen_range(1..9), rng.gen_range(1..9));
            let dense: Vec<Vec<i64>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| {
                            if rng.gen_bool(0.4) {
                                rng.gen_range(-3..=3)
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            let m = QMatrix::from_ints(&dense);
            assert_eq!(rank(&m), rank_kernel_image(&m).rank, "{dense:?}");
            assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }

    #[test]
    fn rank_one() {
        let m = QMatrix::from_ints(&[vec![1, 2], vec![2, 4]]);
        let r = rank_kernel_image(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel.len(), 1);
        let k = &r.kernel[0];
        assert!(m.mul_vec(k).is_empty());
        let (x, y) = (
            k.iter().find(|e| e.0 == 0).unwrap().1.clone(),
            k.iter().find(|e| e.0 == 1).unwrap().1.clone(),
        );
        assert_eq!(x, &y * &Rat::from_int(-2));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = QMatrix::from_ints(&[vec![1, 1], vec![0, 1], vec![1, 2]]);
        let b = vec![
            (0, Rat::from_int(3)),
            (1, Rat::from_int(1)),
            (2, Rat::from_int(4)),
        ];
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert!(solve(&m, &[(0, Rat::one())]).is_none());
    }
}
