use std::collections::HashMap;

use super::mf::{MatrixFactorization, PolyMatrix};
use super::MfError;
use crate::exactalg::{
    monomials_of_degree, rank_kernel_image, sparse_from_entries, Bidegree, Echelon, Monomial, Poly,
    QMatrix, Rat, SparseVec,
};

/// A morphism `M → M'⟨z2⟩{j,k}`, stored as a polynomial matrix from the
/// generators of `M` to those of `M'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MfMorphism {
    pub map: PolyMatrix,
    pub z2: u8,
    pub shift: Bidegree,
}

impl MfMorphism {
    /// `d' f − (−1)^{z2} f d = 0`.
    pub fn commutes(&self, src: &MatrixFactorization, tgt: &MatrixFactorization) -> bool {
        let lhs = tgt.d().compose(&self.map);
        let rhs = self.map.compose(src.d());
        let sign = if self.z2 == 0 {
            Rat::one()
        } else {
            Rat::from_int(-1)
        };
        lhs.sub(&rhs.scale(&sign)).is_zero()
    }

    /// Every entry homogeneous of the bidegree forced by the shifts.
    pub fn is_homogeneous(&self, src: &MatrixFactorization, tgt: &MatrixFactorization) -> bool {
        self.map.entries().all(|(h, g, p)| {
            let forced =
                src.generators()[g].bidegree() - tgt.generators()[h].bidegree() - self.shift;
            p.bidegree() == Some(forced)
                && (src.generators()[g].z2 + self.z2) % 2 == tgt.generators()[h].z2
        })
    }
}

/// Coordinates for polynomial matrices of a fixed parity and degree between
/// two factorizations: one coordinate per (target gen, source gen, monomial).
struct Coordinates {
    list: Vec<(usize, usize, Monomial)>,
    index: HashMap<(usize, usize, Monomial), u32>,
}

impl Coordinates {
    fn new(
        src: &MatrixFactorization,
        tgt: &MatrixFactorization,
        z2: u8,
        offset: Bidegree,
        degree_cap: u32,
    ) -> Result<Coordinates, MfError> {
        let nvars = src.nvars();
        let mut list = Vec::new();
        for (g, gg) in src.generators().iter().enumerate() {
            for (h, hg) in tgt.generators().iter().enumerate() {
                if (gg.z2 + z2) % 2 != hg.z2 {
                    continue;
                }
                let deg = gg.bidegree() - hg.bidegree() - offset;
                if deg.a_deg < 0 || deg.x_deg < 0 || deg.a_deg % 2 != 0 || deg.x_deg % 2 != 0 {
                    continue;
                }
                let xd = (deg.x_deg / 2) as u32;
                if xd > degree_cap {
                    return Err(MfError::DegreeCap {
                        needed: xd,
                        cap: degree_cap,
                    });
                }
                for m in monomials_of_degree(nvars, (deg.a_deg / 2) as u32, xd) {
                    list.push((h, g, m));
                }
            }
        }
        let index = list
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i as u32))
            .collect();
        Ok(Coordinates { list, index })
    }

    fn len(&self) -> usize {
        self.list.len()
    }

    fn to_matrix(&self, v: &SparseVec, rows: usize, cols: usize, nvars: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(rows, cols, nvars);
        for (i, c) in v {
            let (h, g, mono) = &self.list[*i as usize];
            m.add_entry(*h, *g, Poly::monomial(nvars, mono.clone(), c.clone()));
        }
        m
    }

    fn to_vec(&self, m: &PolyMatrix) -> Option<SparseVec> {
        let mut entries = Vec::new();
        for (h, g, p) in m.entries() {
            for (mono, c) in p.terms() {
                let i = *self.index.get(&(h, g, mono.clone()))?;
                entries.push((i, c.clone()));
            }
        }
        Some(sparse_from_entries(entries))
    }
}

/// `(target, polynomial)` lists of `d` by source column, and `(source, polynomial)`
/// lists by target row.
fn rows_of(m: &PolyMatrix) -> Vec<Vec<(usize, Poly)>> {
    let mut out = vec![Vec::new(); m.rows()];
    for (i, j, p) in m.entries() {
        out[i].push((j, p.clone()));
    }
    out
}

/// Image of the map `H ↦ d'H + sign·H d` on basis coordinates of `H`.
fn bracket_columns(
    src: &MatrixFactorization,
    tgt: &MatrixFactorization,
    from: &Coordinates,
    sign: &Rat,
    mut lookup: impl FnMut(usize, usize, Monomial) -> u32,
) -> Vec<SparseVec> {
    let src_rows = rows_of(src.d());
    from.list
        .iter()
        .map(|(h, g, m)| {
            let mut entries = Vec::new();
            for (h2, q) in tgt.d().column(*h) {
                for (t, c) in q.terms() {
                    entries.push((lookup(*h2, *g, m.mul(t)), c.clone()));
                }
            }
            for (g0, p) in &src_rows[*g] {
                for (t, c) in p.terms() {
                    entries.push((lookup(*h, *g0, m.mul(t)), c * sign));
                }
            }
            sparse_from_entries(entries)
        })
        .collect()
}

/// Solution of the morphism equations between two factorizations.
#[derive(Clone, Debug)]
pub struct MorphismSpace {
    pub z2: u8,
    pub shift: Bidegree,
    /// Basis of all morphisms of the given parity and degree.
    pub all: Vec<PolyMatrix>,
    /// Representatives of a basis of morphisms modulo null-homotopic ones.
    pub modulo_homotopy: Vec<PolyMatrix>,
}

/// Solves `d' f = (−1)^{z2} f d` for homogeneous `f: M → M'⟨z2⟩{j,k}`, then
/// quotients by maps of the form `d'h + (−1)^{z2} h d`. `forbid(h, g)` forces
/// the entries from source generator `g` to target generator `h` to vanish.
pub fn solve_morphisms_constrained(
    src: &MatrixFactorization,
    tgt: &MatrixFactorization,
    z2: u8,
    shift: (i32, i32),
    degree_cap: u32,
    forbid: &dyn Fn(usize, usize) -> bool,
) -> Result<MorphismSpace, MfError> {
    if src.nvars() != tgt.nvars() || src.n() != tgt.n() {
        return Err(MfError::RingMismatch);
    }
    let n = src.n() as i32;
    let shift_bd = Bidegree::new(shift.0, shift.1);
    let fc = Coordinates::new(src, tgt, z2, shift_bd, degree_cap)?;
    let hc = Coordinates::new(
        src,
        tgt,
        (z2 + 1) % 2,
        shift_bd + Bidegree::new(1, n + 1),
        degree_cap + n as u32,
    )?;
    let sign = if z2 == 0 {
        Rat::one()
    } else {
        Rat::from_int(-1)
    };

    let mut eq_index: HashMap<(usize, usize, Monomial), u32> = HashMap::new();
    let mut columns = bracket_columns(src, tgt, &fc, &-&sign, |h, g, m| {
        let next = eq_index.len() as u32;
        *eq_index.entry((h, g, m)).or_insert(next)
    });
    let base = eq_index.len() as u32;
    let mut forced = 0u32;
    for (col, (h, g, _)) in columns.iter_mut().zip(&fc.list) {
        if forbid(*h, *g) {
            col.push((base + forced, Rat::one()));
            forced += 1;
        }
    }
    let system = QMatrix::from_columns((base + forced) as usize, columns);
    let kernel = rank_kernel_image(&system).kernel;

    let homotopy_images = bracket_columns(src, tgt, &hc, &sign, |h, g, m| {
        *fc.index
            .get(&(h, g, m))
            .expect("homotopy image stays in morphism degree")
    });
    let mut ech = Echelon::new();
    for v in homotopy_images {
        if !v.is_empty() {
            let _ = ech.insert(v, Vec::new());
        }
    }
    let mut reps = Vec::new();
    for k in &kernel {
        if ech.insert(k.clone(), Vec::new()).is_ok() {
            reps.push(k.clone());
        }
    }
    let (rows, cols, nv) = (tgt.rank(), src.rank(), src.nvars());
    Ok(MorphismSpace {
        z2,
        shift: shift_bd,
        all: kernel
            .iter()
            .map(|v| fc.to_matrix(v, rows, cols, nv))
            .collect(),
        modulo_homotopy: reps
            .iter()
            .map(|v| fc.to_matrix(v, rows, cols, nv))
            .collect(),
    })
}

pub fn solve_morphisms(
    src: &MatrixFactorization,
    tgt: &MatrixFactorization,
    z2: u8,
    shift: (i32, i32),
    degree_cap: u32,
) -> Result<MorphismSpace, MfError> {
    solve_morphisms_constrained(src, tgt, z2, shift, degree_cap, &|_, _| false)
}

/// Finds scalars `λ_i` and a homotopy `h` with
/// `target = Σ λ_i extra_i + d'h + (−1)^{z2} h d`, if they exist.
pub fn find_homotopy(
    src: &MatrixFactorization,
    tgt: &MatrixFactorization,
    z2: u8,
    shift: (i32, i32),
    target: &PolyMatrix,
    extra: &[PolyMatrix],
) -> Result<Option<(Vec<Rat>, PolyMatrix)>, MfError> {
    let n = src.n() as i32;
    let shift_bd = Bidegree::new(shift.0, shift.1);
    let cap = u32::MAX / 2;
    let fc = Coordinates::new(src, tgt, z2, shift_bd, cap)?;
    let hc = Coordinates::new(
        src,
        tgt,
        (z2 + 1) % 2,
        shift_bd + Bidegree::new(1, n + 1),
        cap,
    )?;
    let sign = if z2 == 0 {
        Rat::one()
    } else {
        Rat::from_int(-1)
    };
    let mut columns = Vec::new();
    for e in extra {
        columns.push(
            fc.to_vec(e)
                .ok_or(MfError::Inhomogeneous { row: 0, col: 0 })?,
        );
    }
    columns.extend(bracket_columns(src, tgt, &hc, &sign, |h, g, m| {
        *fc.index
            .get(&(h, g, m))
            .expect("homotopy image stays in morphism degree")
    }));
    let rhs = fc
        .to_vec(target)
        .ok_or(MfError::Inhomogeneous { row: 0, col: 0 })?;
    let system = QMatrix::from_columns(fc.len(), columns);
    let Some(x) = crate::exactalg::solve(&system, &rhs) else {
        return Ok(None);
    };
    let mut lambdas = vec![Rat::zero(); extra.len()];
    let mut hv = Vec::new();
    for (i, c) in x {
        let i = i as usize;
        if i < extra.len() {
            lambdas[i] = c;
        } else {
            hv.push(((i - extra.len()) as u32, c));
        }
    }
    let h = hc.to_matrix(&hv, tgt.rank(), src.rank(), src.nvars());
    Ok(Some((lambdas, h)))
}

/// `d'h + (−1)^{z2} h d` for a homotopy `h` attached to a morphism of parity `z2`.
pub fn bracket(
    src: &MatrixFactorization,
    tgt: &MatrixFactorization,
    z2: u8,
    h: &PolyMatrix,
) -> PolyMatrix {
    let sign = if z2 == 0 {
        Rat::one()
    } else {
        Rat::from_int(-1)
    };
    tgt.d().compose(h).add(&h.compose(src.d()).scale(&sign))
}
