use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;

use super::HomologyError;
use crate::exactalg::{
    rank, rank_kernel_image, sparse_from_entries, Echelon, Exponents, QMatrix, Rat, SparseVec,
};
use crate::mfcore::{CubeComplex, GenGrading, PolyMatrix, RingMode};

/// A polynomial as `(a-power, x-exponents, coefficient)` terms.
type CompiledPoly = Vec<(u16, Exponents, Rat)>;
/// A polynomial matrix by source column: `(target generator, entry)`.
type CompiledMap = Vec<Vec<(u32, CompiledPoly)>>;

struct CompiledVertex {
    hdeg: i32,
    a_quotient: bool,
    gens: Vec<GenGrading>,
    d: CompiledMap,
}

struct CompiledEdge {
    target: usize,
    map: CompiledMap,
}

/// Read-only form of a cube complex for degreewise linear algebra.
pub(crate) struct Compiled {
    pub n: u32,
    pub mode: RingMode,
    xvars: usize,
    vertices: Vec<CompiledVertex>,
    out_edges: Vec<Vec<CompiledEdge>>,
    exps: Vec<OnceLock<Vec<Exponents>>>,
}

fn compile_map(m: &PolyMatrix) -> CompiledMap {
    (0..m.cols())
        .map(|g| {
            m.column(g)
                .iter()
                .map(|(h, p)| {
                    let terms = p
                        .terms()
                        .map(|(mono, c)| {
                            (
                                mono.a_power(),
                                mono.0[1..].iter().copied().collect(),
                                c.clone(),
                            )
                        })
                        .collect();
                    (*h as u32, terms)
                })
                .collect()
        })
        .collect()
}

/// One chain group `C^{ε,·,j,k}` of a single vertex: basis `a^p x^α e_g`.
pub(crate) struct CellBasis {
    elems: Vec<(u32, u16, Exponents)>,
    index: HashMap<(u32, Exponents), u32>,
}

impl CellBasis {
    pub fn len(&self) -> usize {
        self.elems.len()
    }
}

/// Position of a degree in the cube: vertex and `(ε, j, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Cell {
    pub vertex: usize,
    pub eps: u8,
    pub j: i32,
    pub k: i32,
}

impl Compiled {
    pub fn new(c: &CubeComplex) -> Compiled {
        let vertices = c
            .vertices
            .iter()
            .map(|v| CompiledVertex {
                hdeg: v.hdeg,
                a_quotient: v.a_quotient,
                gens: v.mf.generators().to_vec(),
                d: compile_map(v.mf.d()),
            })
            .collect();
        let mut out_edges: Vec<Vec<CompiledEdge>> =
            (0..c.vertices.len()).map(|_| Vec::new()).collect();
        for e in &c.edges {
            out_edges[e.source].push(CompiledEdge {
                target: e.target,
                map: compile_map(&e.map),
            });
        }
        Compiled {
            n: c.n,
            mode: c.mode,
            xvars: c.nvars - 1,
            vertices,
            out_edges,
            exps: (0..256).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn hdeg(&self, v: usize) -> i32 {
        self.vertices[v].hdeg
    }

    pub fn targets(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_edges[v].iter().map(|e| e.target)
    }

    fn exponents(&self, d: usize) -> &[Exponents] {
        self.exps[d].get_or_init(|| crate::exactalg::exponent_vectors(self.xvars, d as u32))
    }

    /// Smallest `(a, x)` shift over all generators, or `None` for an empty complex.
    pub fn min_shifts(&self) -> Option<(i32, i32)> {
        let gens = self.vertices.iter().flat_map(|v| v.gens.iter());
        let a = gens.clone().map(|g| g.a_shift).min()?;
        let x = gens.map(|g| g.x_shift).min()?;
        Some((a, x))
    }

    pub fn basis(&self, cell: Cell) -> CellBasis {
        let v = &self.vertices[cell.vertex];
        let mut elems = Vec::new();
        for (g, gen) in v.gens.iter().enumerate() {
            if gen.z2 != cell.eps {
                continue;
            }
            let p = match self.mode {
                RingMode::AOne => 0,
                RingMode::Graded => {
                    let dj = cell.j - gen.a_shift;
                    if dj < 0 || dj % 2 != 0 || (v.a_quotient && dj != 0) {
                        continue;
                    }
                    (dj / 2) as u16
                }
            };
            let dk = cell.k - gen.x_shift;
            if dk < 0 || dk % 2 != 0 {
                continue;
            }
            for e in self.exponents((dk / 2) as usize) {
                elems.push((g as u32, p, e.clone()));
            }
        }
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, (g, _, e))| ((*g, e.clone()), i as u32))
            .collect();
        CellBasis { elems, index }
    }

    /// Degree of the target of `d_mf` from `cell`.
    pub fn d_target(&self, cell: Cell) -> Cell {
        let dj = if self.mode == RingMode::Graded { 1 } else { 0 };
        Cell {
            eps: 1 - cell.eps,
            j: cell.j + dj,
            k: cell.k + self.n as i32 + 1,
            ..cell
        }
    }

    /// Degree of the source of `d_mf` into `cell`.
    pub fn d_source(&self, cell: Cell) -> Cell {
        let dj = if self.mode == RingMode::Graded { 1 } else { 0 };
        Cell {
            eps: 1 - cell.eps,
            j: cell.j - dj,
            k: cell.k - self.n as i32 - 1,
            ..cell
        }
    }

    fn apply_map(
        map: &CompiledMap,
        src: &CellBasis,
        tgt: &CellBasis,
        tgt_quotient: bool,
        v: &[(u32, Rat)],
    ) -> Result<SparseVec, HomologyError> {
        let mut out = Vec::new();
        for (i, c) in v {
            let (g, p, alpha) = &src.elems[*i as usize];
            for (h, poly) in &map[*g as usize] {
                for (pt, at, ct) in poly {
                    if tgt_quotient && p + pt > 0 {
                        continue;
                    }
                    let mut e = alpha.clone();
                    for (x, y) in e.iter_mut().zip(at.iter()) {
                        *x += y;
                    }
                    let idx = *tgt.index.get(&(*h, e)).ok_or(HomologyError::Degree)?;
                    out.push((idx, c * ct));
                }
            }
        }
        Ok(sparse_from_entries(out))
    }

    /// Columns of `d_mf` from `cell` to `d_target(cell)`.
    pub fn d_columns(
        &self,
        cell: Cell,
        src: &CellBasis,
        tgt: &CellBasis,
    ) -> Result<Vec<SparseVec>, HomologyError> {
        let v = &self.vertices[cell.vertex];
        (0..src.len())
            .map(|i| Self::apply_map(&v.d, src, tgt, v.a_quotient, &[(i as u32, Rat::one())]))
            .collect()
    }

    pub fn component_matrix_d(&self, cell: Cell) -> Result<QMatrix, HomologyError> {
        let src = self.basis(cell);
        let tgt = self.basis(self.d_target(cell));
        Ok(QMatrix::from_columns(
            tgt.len(),
            self.d_columns(cell, &src, &tgt)?,
        ))
    }

    /// Image of a chain vector under the sum of the edge maps into `target`.
    pub fn apply_edges(
        &self,
        from: usize,
        target: usize,
        src: &CellBasis,
        tgt: &CellBasis,
        v: &[(u32, Rat)],
    ) -> Result<SparseVec, HomologyError> {
        let quotient = self.vertices[target].a_quotient;
        let mut acc: SparseVec = Vec::new();
        for e in self.out_edges[from].iter().filter(|e| e.target == target) {
            let img = Self::apply_map(&e.map, src, tgt, quotient, v)?;
            acc = crate::exactalg::axpy(&acc, &Rat::one(), &img);
        }
        Ok(acc)
    }

    /// Multiplication by `a` from a cell at `a`-degree `j` to `j + 2`.
    pub fn apply_a(
        &self,
        vertex: usize,
        src: &CellBasis,
        tgt: &CellBasis,
        v: &[(u32, Rat)],
    ) -> SparseVec {
        if self.vertices[vertex].a_quotient {
            return Vec::new();
        }
        let out = v
            .iter()
            .map(|(i, c)| {
                let (g, _, e) = &src.elems[*i as usize];
                (
                    *tgt.index
                        .get(&(*g, e.clone()))
                        .expect("a-multiple in basis"),
                    c.clone(),
                )
            })
            .collect();
        sparse_from_entries(out)
    }
}

/// Homology `ker/im` of one degree, with representatives and the data needed
/// to express any cycle in their coordinates.
pub(crate) struct LocalHomology {
    echelon: Echelon,
    /// Echelon row of each representative.
    rep_rows: HashMap<usize, usize>,
    pub reps: Vec<SparseVec>,
}

impl LocalHomology {
    pub fn zero() -> LocalHomology {
        LocalHomology {
            echelon: Echelon::new(),
            rep_rows: HashMap::new(),
            reps: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// `kernel` spans the cycles, `image` the boundaries.
    pub fn from_parts(kernel: Vec<SparseVec>, image: Vec<SparseVec>) -> LocalHomology {
        let mut echelon = Echelon::new();
        for b in image {
            if !b.is_empty() {
                let _ = echelon.insert(b, Vec::new());
            }
        }
        let mut rep_rows = HashMap::new();
        let mut reps = Vec::new();
        for z in kernel {
            if let Ok(r) = echelon.insert(z, Vec::new()) {
                rep_rows.insert(r, reps.len());
                reps.push(echelon.row(r).clone());
            }
        }
        LocalHomology {
            echelon,
            rep_rows,
            reps,
        }
    }

    /// Coordinates of a cycle in the representative basis.
    pub fn coords(&self, v: SparseVec) -> Result<Vec<Rat>, HomologyError> {
        let mut out = vec![Rat::zero(); self.dim()];
        if self.dim() == 0 || v.is_empty() {
            return Ok(out);
        }
        let red = self.echelon.reduce(v, Vec::new());
        if !red.remainder.is_empty() {
            return Err(HomologyError::NotACycle);
        }
        for (r, c) in red.coefficients {
            if let Some(&t) = self.rep_rows.get(&r) {
                out[t] = c;
            }
        }
        Ok(out)
    }
}

/// `H(d)` at one degree given the outgoing and incoming matrices.
pub(crate) fn homology_of(d_out: &QMatrix, d_in_columns: Vec<SparseVec>) -> LocalHomology {
    let kernel = rank_kernel_image(d_out).kernel;
    LocalHomology::from_parts(kernel, d_in_columns)
}

fn dense_to_sparse(v: &[Rat]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as u32, c.clone()))
        .collect()
}

/// First-stage data at one vertex cell.
pub(crate) struct VertexCell {
    pub basis: CellBasis,
    pub homology: LocalHomology,
}

/// Second-stage data at one `(ε, i, j, k)`.
pub(crate) struct TotalCell {
    /// Vertices of degree `i` with their offset into the concatenated `H(d_mf)`.
    pub blocks: Vec<(usize, usize)>,
    pub total_dim: usize,
    pub homology: LocalHomology,
}

/// Both stages of `H(H(C, d_mf), d_χ)` over a window of `(ε, j, k)`.
pub(crate) struct TwoStage {
    pub first: HashMap<Cell, VertexCell>,
    pub second: BTreeMap<(u8, i32, i32, i32), TotalCell>,
}

impl TwoStage {
    pub fn dim(&self, eps: u8, i: i32, j: i32, k: i32) -> usize {
        self.second
            .get(&(eps, i, j, k))
            .map_or(0, |t| t.homology.dim())
    }
}

/// `(dim, rank d_mf)` of every cell in `cells` and of every cell mapping into one.
fn d_ranks(cx: &Compiled, cells: &[Cell]) -> Result<HashMap<Cell, (usize, usize)>, HomologyError> {
    let mut keys: Vec<Cell> = cells.to_vec();
    keys.extend(cells.iter().map(|&c| cx.d_source(c)));
    keys.sort();
    keys.dedup();
    keys.par_iter()
        .map(|&c| {
            let src = cx.basis(c);
            if src.len() == 0 {
                return Ok((c, (0, 0)));
            }
            let tgt = cx.basis(cx.d_target(c));
            let m = QMatrix::from_columns(tgt.len(), cx.d_columns(c, &src, &tgt)?);
            Ok((c, (src.len(), rank(&m))))
        })
        .collect()
}

fn all_cells(cx: &Compiled, j_values: &[i32], k_values: &[i32]) -> Vec<Cell> {
    let mut cells = Vec::new();
    for v in 0..cx.num_vertices() {
        for eps in 0..2u8 {
            for &j in j_values {
                for &k in k_values {
                    cells.push(Cell {
                        vertex: v,
                        eps,
                        j,
                        k,
                    });
                }
            }
        }
    }
    cells
}

/// Dimensions of `H(C, d_mf)` at every vertex cell, from ranks alone.
pub(crate) fn first_stage_dims(
    cx: &Compiled,
    j_values: &[i32],
    k_values: &[i32],
) -> Result<BTreeMap<Cell, usize>, HomologyError> {
    let cells = all_cells(cx, j_values, k_values);
    let ranks = d_ranks(cx, &cells)?;
    Ok(cells
        .into_iter()
        .map(|c| (c, ranks[&c].0 - ranks[&c].1 - ranks[&cx.d_source(c)].1))
        .filter(|&(_, d)| d > 0)
        .collect())
}

/// Runs both stages for all `j ∈ j_values`, `k ∈ k_values` and both `ε`.
pub(crate) fn two_stage(
    cx: &Compiled,
    j_values: &[i32],
    k_values: &[i32],
) -> Result<TwoStage, HomologyError> {
    let cells = all_cells(cx, j_values, k_values);
    let ranks = d_ranks(cx, &cells)?;

    let first: HashMap<Cell, VertexCell> = cells
        .par_iter()
        .map(|&c| {
            let (size, r_out) = ranks[&c];
            let r_in = ranks[&cx.d_source(c)].1;
            let basis = cx.basis(c);
            let homology = if size - r_out - r_in == 0 {
                LocalHomology::zero()
            } else {
                let tgt = cx.basis(cx.d_target(c));
                let d_out = QMatrix::from_columns(tgt.len(), cx.d_columns(c, &basis, &tgt)?);
                let sc = cx.d_source(c);
                let sb = cx.basis(sc);
                let d_in = cx.d_columns(sc, &sb, &basis)?;
                let h = homology_of(&d_out, d_in);
                debug_assert_eq!(h.dim(), size - r_out - r_in);
                h
            };
            Ok((c, VertexCell { basis, homology }))
        })
        .collect::<Result<_, HomologyError>>()?;

    let mut hdegs: Vec<i32> = (0..cx.num_vertices()).map(|v| cx.hdeg(v)).collect();
    hdegs.sort();
    hdegs.dedup();

    let mut slices = Vec::new();
    for eps in 0..2u8 {
        for &j in j_values {
            for &k in k_values {
                slices.push((eps, j, k));
            }
        }
    }
    let second: BTreeMap<(u8, i32, i32, i32), TotalCell> = slices
        .par_iter()
        .map(
            |&(eps, j, k)| -> Result<Vec<((u8, i32, i32, i32), TotalCell)>, HomologyError> {
                let cell = |v| Cell {
                    vertex: v,
                    eps,
                    j,
                    k,
                };
                let blocks_at = |i: i32| {
                    let mut off = 0;
                    let mut blocks = Vec::new();
                    for v in (0..cx.num_vertices()).filter(|&v| cx.hdeg(v) == i) {
                        let d = first[&cell(v)].homology.dim();
                        if d > 0 {
                            blocks.push((v, off));
                            off += d;
                        }
                    }
                    (blocks, off)
                };
                // Induced d_χ from degree i to i + 1, as columns over H(i).
                let induced = |i: i32| -> Result<QMatrix, HomologyError> {
                    let (src_blocks, _) = blocks_at(i);
                    let (tgt_blocks, tgt_dim) = blocks_at(i + 1);
                    let mut cols = Vec::new();
                    for &(v, _) in &src_blocks {
                        let vc = &first[&cell(v)];
                        for rep in &vc.homology.reps {
                            let mut col: Vec<(u32, Rat)> = Vec::new();
                            for &(w, off) in &tgt_blocks {
                                if !cx.targets(v).any(|t| t == w) {
                                    continue;
                                }
                                let wc = &first[&cell(w)];
                                let img = cx.apply_edges(v, w, &vc.basis, &wc.basis, rep)?;
                                for (t, c) in wc.homology.coords(img)?.into_iter().enumerate() {
                                    if !c.is_zero() {
                                        col.push(((off + t) as u32, c));
                                    }
                                }
                            }
                            cols.push(col);
                        }
                    }
                    Ok(QMatrix::from_columns(tgt_dim, cols))
                };
                let mut out = Vec::new();
                for &i in &hdegs {
                    let (blocks, total_dim) = blocks_at(i);
                    if total_dim == 0 {
                        continue;
                    }
                    let d_out = induced(i)?;
                    let d_in = induced(i - 1)?;
                    let homology = homology_of(&d_out, d_in.columns().to_vec());
                    out.push((
                        (eps, i, j, k),
                        TotalCell {
                            blocks,
                            total_dim,
                            homology,
                        },
                    ));
                }
                Ok(out)
            },
        )
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    Ok(TwoStage { first, second })
}

impl TwoStage {
    /// Matrix of multiplication by `a` on `𝓗^{ε,i,·,k}` from `j` to `j + 2`.
    pub fn a_map(
        &self,
        cx: &Compiled,
        eps: u8,
        i: i32,
        j: i32,
        k: i32,
    ) -> Result<QMatrix, HomologyError> {
        let (Some(src), Some(tgt)) = (
            self.second.get(&(eps, i, j, k)),
            self.second.get(&(eps, i, j + 2, k)),
        ) else {
            let rows = self.dim(eps, i, j + 2, k);
            let cols = self.dim(eps, i, j, k);
            return Ok(QMatrix::zeros(rows, cols));
        };
        let mut cols = Vec::new();
        for rho in &src.homology.reps {
            // H(d_mf) coordinates at j + 2, concatenated over vertices.
            let mut lifted = vec![Rat::zero(); tgt.total_dim];
            for &(v, off) in &src.blocks {
                let vc = &self.first[&Cell {
                    vertex: v,
                    eps,
                    j,
                    k,
                }];
                let mut chain: SparseVec = Vec::new();
                for (t, rep) in vc.homology.reps.iter().enumerate() {
                    let c = rho
                        .iter()
                        .find(|(x, _)| *x as usize == off + t)
                        .map(|(_, c)| c.clone());
                    if let Some(c) = c {
                        chain = crate::exactalg::axpy(&chain, &c, rep);
                    }
                }
                let Some(&(_, toff)) = tgt.blocks.iter().find(|(w, _)| *w == v) else {
                    continue;
                };
                let wc = &self.first[&Cell {
                    vertex: v,
                    eps,
                    j: j + 2,
                    k,
                }];
                let img = cx.apply_a(v, &vc.basis, &wc.basis, &chain);
                for (t, c) in wc.homology.coords(img)?.into_iter().enumerate() {
                    lifted[toff + t] = c;
                }
            }
            let coords = tgt.homology.coords(dense_to_sparse(&lifted))?;
            cols.push(dense_to_sparse(&coords));
        }
        Ok(QMatrix::from_columns(tgt.homology.dim(), cols))
    }
}
