use serde::Serialize;

use super::MfError;
use crate::exactalg::{Bidegree, Poly, Rat};

/// Grading of one free generator: ℤ₂-degree and the `{a, x}` shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GenGrading {
    pub z2: u8,
    pub a_shift: i32,
    pub x_shift: i32,
}

impl GenGrading {
    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.a_shift, self.x_shift)
    }

    pub fn shifted(&self, z2: u8, j: i32, k: i32) -> GenGrading {
        GenGrading {
            z2: (self.z2 + z2) % 2,
            a_shift: self.a_shift + j,
            x_shift: self.x_shift + k,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GradedFreeModule {
    pub generators: Vec<GenGrading>,
}

impl GradedFreeModule {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn shifted(&self, z2: u8, j: i32, k: i32) -> GradedFreeModule {
        GradedFreeModule {
            generators: self
                .generators
                .iter()
                .map(|g| g.shifted(z2, j, k))
                .collect(),
        }
    }
}

/// Matrix of polynomials, stored by columns: column `j` lists `(row, entry)`
/// pairs with strictly increasing rows and nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    nvars: usize,
    columns: Vec<Vec<(usize, Poly)>>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> PolyMatrix {
        PolyMatrix {
            rows,
            nvars,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> PolyMatrix {
        PolyMatrix::scalar(n, &Poly::one(nvars))
    }

    pub fn scalar(n: usize, p: &Poly) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(n, n, p.nvars());
        for j in 0..n {
            m.add_entry(j, j, p.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn column(&self, j: usize) -> &[(usize, Poly)] {
        &self.columns[j]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, p)| (i.to_owned(), j, p)))
    }

    pub fn get(&self, i: usize, j: usize) -> Poly {
        self.columns[j]
            .iter()
            .find(|e| e.0 == i)
            .map(|e| e.1.clone())
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn add_entry(&mut self, i: usize, j: usize, p: Poly) {
        assert!(i < self.rows, "row out of range");
        if p.is_zero() {
            return;
        }
        let col = &mut self.columns[j];
        match col.binary_search_by_key(&i, |e| e.0) {
            Ok(pos) => {
                let s = &col[pos].1 + &p;
                if s.is_zero() {
                    col.remove(pos);
                } else {
                    col[pos].1 = s;
                }
            }
            Err(pos) => col.insert(pos, (i, p)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        let mut out = PolyMatrix::zeros(self.rows, other.cols(), self.nvars);
        for (j, col) in other.columns.iter().enumerate() {
            for (k, q) in col {
                for (i, p) in &self.columns[*k] {
                    out.add_entry(*i, j, p * q);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        let mut out = self.clone();
        for (i, j, p) in other.entries() {
            out.add_entry(i, j, p.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    /// Applies `f` to every entry; `f` may change the ring.
    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        let mut nvars = self.nvars;
        let columns: Vec<Vec<(usize, Poly)>> = self
            .columns
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(i, p)| {
                        let q = f(p);
                        nvars = q.nvars();
                        (*i, q)
                    })
                    .filter(|e| !e.1.is_zero())
                    .collect()
            })
            .collect();
        PolyMatrix {
            rows: self.rows,
            nvars,
            columns,
        }
    }

    pub fn with_nvars(mut self, nvars: usize) -> PolyMatrix {
        assert!(self.is_zero() || self.nvars == nvars);
        self.nvars = nvars;
        self
    }

    /// Restriction to the given source columns and target rows (both as
    /// index lists into `self`).
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut inv = vec![usize::MAX; self.rows];
        for (new, &old) in rows.iter().enumerate() {
            inv[old] = new;
        }
        let columns = cols
            .iter()
            .map(|&j| {
                self.columns[j]
                    .iter()
                    .filter(|(i, _)| inv[*i] != usize::MAX)
                    .map(|(i, p)| (inv[*i], p.clone()))
                    .collect()
            })
            .collect();
        PolyMatrix {
            rows: rows.len(),
            nvars: self.nvars,
            columns,
        }
    }
}

/// One row `(a₀, a₁)` of a Koszul factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulRow {
    pub a0: Poly,
    pub a1: Poly,
}

impl KoszulRow {
    pub fn new(a0: Poly, a1: Poly) -> KoszulRow {
        KoszulRow { a0, a1 }
    }
}

/// ℤ₂⊕ℤ²-graded matrix factorization over `Q[a, x_1..x_m]`.
///
/// Both ℤ₂-components are stored in one generator list; `d` is the odd
/// differential `M → M` (so `d₀` and `d₁` are its blocks), with `d² = w·id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorization {
    n: u32,
    module: GradedFreeModule,
    d: PolyMatrix,
    potential: Poly,
}

impl MatrixFactorization {
    pub fn from_parts(
        n: u32,
        module: GradedFreeModule,
        d: PolyMatrix,
        potential: Poly,
    ) -> Result<MatrixFactorization, MfError> {
        let mf = MatrixFactorization {
            n,
            module,
            d,
            potential,
        };
        mf.check_parity()?;
        Ok(mf)
    }

    /// Koszul factorization of `rows`; generator `S ⊆ rows` has index
    /// `Σ_{j∈S} 2^j` and ℤ₂-degree `|S| mod 2`.
    pub fn koszul(
        rows: &[KoszulRow],
        nvars: usize,
        n: u32,
    ) -> Result<MatrixFactorization, MfError> {
        let target = Bidegree::new(2, 2 * n as i32 + 2);
        let mut shifts = Vec::with_capacity(rows.len());
        let mut potential = Poly::zero(nvars);
        for (j, r) in rows.iter().enumerate() {
            if r.a0.nvars() != nvars || r.a1.nvars() != nvars {
                return Err(MfError::RingMismatch);
            }
            let d0 = r.a0.bidegree().ok_or(MfError::BadRow { row: j })?;
            if !r.a1.is_zero() && r.a1.bidegree() != Some(target - d0) {
                return Err(MfError::BadRow { row: j });
            }
            shifts.push(Bidegree::new(1, n as i32 + 1) - d0);
            potential = &potential + &(&r.a0 * &r.a1);
        }
        let k = rows.len();
        let size = 1usize << k;
        let mut generators = Vec::with_capacity(size);
        for s in 0..size {
            let mut g = GenGrading {
                z2: (s.count_ones() % 2) as u8,
                a_shift: 0,
                x_shift: 0,
            };
            for (j, sh) in shifts.iter().enumerate() {
                if s >> j & 1 == 1 {
                    g.a_shift += sh.a_deg;
                    g.x_shift += sh.x_deg;
                }
            }
            generators.push(g);
        }
        let mut d = PolyMatrix::zeros(size, size, nvars);
        for s in 0..size {
            for (j, r) in rows.iter().enumerate() {
                let before = (s & ((1 << j) - 1)).count_ones();
                let sign = if before % 2 == 0 {
                    Rat::one()
                } else {
                    Rat::from_int(-1)
                };
                if s >> j & 1 == 0 {
                    d.add_entry(s | 1 << j, s, r.a0.scale(&sign));
                } else {
                    d.add_entry(s & !(1 << j), s, r.a1.scale(&sign));
                }
            }
        }
        Ok(MatrixFactorization {
            n,
            module: GradedFreeModule { generators },
            d,
            potential,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.potential.nvars()
    }

    pub fn module(&self) -> &GradedFreeModule {
        &self.module
    }

    pub fn generators(&self) -> &[GenGrading] {
        &self.module.generators
    }

    pub fn rank(&self) -> usize {
        self.module.len()
    }

    pub fn d(&self) -> &PolyMatrix {
        &self.d
    }

    pub fn potential(&self) -> &Poly {
        &self.potential
    }

    /// Generator indices of ℤ₂-degree `e`.
    pub fn gens_of_degree(&self, e: u8) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| self.module.generators[i].z2 == e)
            .collect()
    }

    /// `d₀: M₀ → M₁` as a block of `d`.
    pub fn d0(&self) -> PolyMatrix {
        self.d
            .restrict(&self.gens_of_degree(1), &self.gens_of_degree(0))
    }

    /// `d₁: M₁ → M₀` as a block of `d`.
    pub fn d1(&self) -> PolyMatrix {
        self.d
            .restrict(&self.gens_of_degree(0), &self.gens_of_degree(1))
    }

    pub fn shift(&self, z2: u8, j: i32, k: i32) -> MatrixFactorization {
        MatrixFactorization {
            n: self.n,
            module: self.module.shifted(z2, j, k),
            d: self.d.clone(),
            potential: self.potential.clone(),
        }
    }

    /// Tensor product with the signed Leibniz rule. Generator `(g, h)` has
    /// index `g + h·rank(self)`, so tensoring Koszul factorizations
    /// concatenates their rows.
    pub fn tensor(&self, other: &MatrixFactorization) -> Result<MatrixFactorization, MfError> {
        if self.nvars() != other.nvars() || self.n != other.n {
            return Err(MfError::RingMismatch);
        }
        let (p, q) = (self.rank(), other.rank());
        let mut generators = Vec::with_capacity(p * q);
        for h in &other.module.generators {
            for g in &self.module.generators {
                generators.push(g.shifted(h.z2, h.a_shift, h.x_shift));
            }
        }
        let nvars = self.nvars();
        let mut d = PolyMatrix::zeros(p * q, p * q, nvars);
        for hi in 0..q {
            for gi in 0..p {
                let src = gi + hi * p;
                for (t, poly) in self.d.column(gi) {
                    d.add_entry(t + hi * p, src, poly.clone());
                }
                let sign = if self.module.generators[gi].z2 == 0 {
                    Rat::one()
                } else {
                    Rat::from_int(-1)
                };
                for (t, poly) in other.d.column(hi) {
                    d.add_entry(gi + t * p, src, poly.scale(&sign));
                }
            }
        }
        Ok(MatrixFactorization {
            n: self.n,
            module: GradedFreeModule { generators },
            d,
            potential: &self.potential + &other.potential,
        })
    }

    /// Unit for the tensor product: the ring in ℤ₂-degree 0.
    pub fn unit(nvars: usize, n: u32) -> MatrixFactorization {
        MatrixFactorization::koszul(&[], nvars, n).expect("empty Koszul factorization")
    }

    /// Applies a ring map to every entry; gradings are kept.
    pub fn map_ring(&self, f: impl Fn(&Poly) -> Poly) -> MatrixFactorization {
        MatrixFactorization {
            n: self.n,
            module: self.module.clone(),
            d: self.d.map(&f),
            potential: f(&self.potential),
        }
    }

    fn check_parity(&self) -> Result<(), MfError> {
        for (i, j, _) in self.d.entries() {
            if self.module.generators[i].z2 == self.module.generators[j].z2 {
                return Err(MfError::Parity);
            }
        }
        Ok(())
    }

    /// `d² = w·id`, checked exactly.
    pub fn check_square(&self) -> bool {
        let sq = self.d.compose(&self.d);
        sq == PolyMatrix::scalar(self.rank(), &self.potential).with_nvars(self.nvars())
    }

    /// Bidegree each entry of `d` must have: source shift − target shift + (1, N+1).
    pub fn forced_degree(&self, target: usize, source: usize) -> Bidegree {
        let g = &self.module.generators;
        g[source].bidegree() - g[target].bidegree() + Bidegree::new(1, self.n as i32 + 1)
    }

    /// Every entry of `d` is homogeneous of its forced bidegree.
    pub fn check_homogeneity(&self) -> Result<(), MfError> {
        for (i, j, p) in self.d.entries() {
            if p.bidegree() != Some(self.forced_degree(i, j)) {
                return Err(MfError::Inhomogeneous { row: i, col: j });
            }
        }
        Ok(())
    }
}
