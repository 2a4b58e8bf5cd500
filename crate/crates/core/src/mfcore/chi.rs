use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::mf::{KoszulRow, MatrixFactorization, PolyMatrix};
use super::morphism::{bracket, find_homotopy, solve_morphisms_constrained, MfMorphism};
use super::moy::{arc_row, wide_edge_rows};
use super::MfError;
use crate::exactalg::{Bidegree, Poly};

/// Variables of the local crossing ring `Q[a, x₁, y₁, y₂, x₂]`, with upward
/// orientation: `x₁` top-left, `y₁` top-right (outputs), `y₂` bottom-left,
/// `x₂` bottom-right (inputs).
pub const OUT_L: usize = 1;
pub const OUT_R: usize = 2;
pub const IN_L: usize = 3;
pub const IN_R: usize = 4;
pub const LOCAL_VARS: usize = 5;

/// How the oriented resolution `Γ₀` is presented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gamma0Form {
    /// The two arc rows, as cut at the marks.
    Arcs,
    /// The same factorization after the row operation that makes the first
    /// row's second entry `x₁ + y₁ − y₂ − x₂`, matching the wide edge.
    Linear,
}

pub fn gamma0_rows(n: u32, form: Gamma0Form) -> Vec<KoszulRow> {
    let left = arc_row(LOCAL_VARS, n, IN_L, OUT_L);
    let right = arc_row(LOCAL_VARS, n, IN_R, OUT_R);
    match form {
        Gamma0Form::Arcs => vec![left, right],
        Gamma0Form::Linear => vec![
            KoszulRow::new(left.a0.clone(), &left.a1 + &right.a1),
            KoszulRow::new(&right.a0 - &left.a0, right.a1),
        ],
    }
}

pub fn gamma1_rows(n: u32) -> Vec<KoszulRow> {
    wide_edge_rows(LOCAL_VARS, n, [IN_L, IN_R], [OUT_L, OUT_R]).to_vec()
}

pub fn gamma0(n: u32, form: Gamma0Form) -> MatrixFactorization {
    MatrixFactorization::koszul(&gamma0_rows(n, form), LOCAL_VARS, n).expect("valid rows")
}

/// `𝓒_N(Γ₁)`, including its `{0,-1}` shift.
pub fn gamma1(n: u32) -> MatrixFactorization {
    MatrixFactorization::koszul(&gamma1_rows(n), LOCAL_VARS, n)
        .expect("valid rows")
        .shift(0, 0, -1)
}

/// The χ-maps of one crossing together with the homotopies certifying
/// `χ¹χ⁰ ≃ (x₂−x₁)id` and `χ⁰χ¹ ≃ (x₂−x₁)id`.
#[derive(Clone, Debug)]
pub struct ChiPair {
    pub n: u32,
    pub form: Gamma0Form,
    pub gamma0: MatrixFactorization,
    pub gamma1: MatrixFactorization,
    /// `χ⁰: 𝓒(Γ₀) → 𝓒(Γ₁){0,-1}`.
    pub chi0: MfMorphism,
    /// `χ¹: 𝓒(Γ₁) → 𝓒(Γ₀){0,-1}`.
    pub chi1: MfMorphism,
    /// `h` with `χ¹χ⁰ − (x₂−x₁)id = d h + h d` on `𝓒(Γ₀)`.
    pub homotopy_on_gamma0: PolyMatrix,
    /// `h` with `χ⁰χ¹ − (x₂−x₁)id = d h + h d` on `𝓒(Γ₁)`.
    pub homotopy_on_gamma1: PolyMatrix,
    /// Dimensions of the two modulo-homotopy morphism spaces (without the
    /// elimination constraint).
    pub hmf_dims: (usize, usize),
}

fn x2_minus_x1() -> Poly {
    &Poly::var(LOCAL_VARS, IN_R) - &Poly::var(LOCAL_VARS, OUT_L)
}

const DEGREE_CAP: u32 = 16;

/// Picks a nontrivial morphism class. With `constrained`, the representative
/// also sends generators containing row 0 only to generators containing row
/// 0, which keeps it compatible with eliminating that row.
fn pick_chi(
    src: &MatrixFactorization,
    tgt: &MatrixFactorization,
    constrained: bool,
) -> Result<(PolyMatrix, usize), MfError> {
    let free = solve_morphisms_constrained(src, tgt, 0, (0, -1), DEGREE_CAP, &|_, _| false)?;
    let dim = free.modulo_homotopy.len();
    let chosen = if constrained {
        let c = solve_morphisms_constrained(src, tgt, 0, (0, -1), DEGREE_CAP, &|h, g| {
            g & 1 == 1 && h & 1 == 0
        })?;
        c.modulo_homotopy.into_iter().next()
    } else {
        free.modulo_homotopy.into_iter().next()
    };
    chosen.map(|m| (m, dim)).ok_or(MfError::NoChiSolution)
}

fn build(n: u32, form: Gamma0Form) -> Result<ChiPair, MfError> {
    let g0 = gamma0(n, form);
    let g1 = gamma1(n);
    let constrained = form == Gamma0Form::Linear;
    let (mut c0, d01) = pick_chi(&g0, &g1, constrained)?;
    let (c1, d10) = pick_chi(&g1, &g0, constrained)?;

    let scalar = |m: &MatrixFactorization| PolyMatrix::scalar(m.rank(), &x2_minus_x1());
    let comp = c1.compose(&c0);
    let (lambda, _) = find_homotopy(&g0, &g0, 0, (0, -2), &comp, &[scalar(&g0)])?
        .ok_or(MfError::NoChiSolution)?;
    if lambda[0].is_zero() {
        return Err(MfError::NoChiSolution);
    }
    c0 = c0.scale(&lambda[0].recip());

    let target0 = c1.compose(&c0).sub(&scalar(&g0));
    let (_, h0) = find_homotopy(&g0, &g0, 0, (0, -2), &target0, &[])?
        .ok_or(MfError::ChiNormalization("χ¹χ⁰".into()))?;
    let target1 = c0.compose(&c1).sub(&scalar(&g1));
    let (_, h1) = find_homotopy(&g1, &g1, 0, (0, -2), &target1, &[])?
        .ok_or(MfError::ChiNormalization("χ⁰χ¹".into()))?;
    debug_assert_eq!(bracket(&g0, &g0, 0, &h0), target0);

    let shift = Bidegree::new(0, -1);
    Ok(ChiPair {
        n,
        form,
        gamma0: g0,
        gamma1: g1,
        chi0: MfMorphism {
            map: c0,
            z2: 0,
            shift,
        },
        chi1: MfMorphism {
            map: c1,
            z2: 0,
            shift,
        },
        homotopy_on_gamma0: h0,
        homotopy_on_gamma1: h1,
        hmf_dims: (d01, d10),
    })
}

/// χ-maps between the arc presentation of `Γ₀` and `Γ₁`, found by linear solve.
pub fn chi_pair(n: u32) -> Result<ChiPair, MfError> {
    build(n, Gamma0Form::Arcs)
}

/// Cached χ-maps for the given presentation.
pub fn cached_chi_pair(n: u32, form: Gamma0Form) -> Result<Arc<ChiPair>, MfError> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, Gamma0Form), Arc<ChiPair>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&(n, form)) {
        return Ok(p.clone());
    }
    let p = Arc::new(build(n, form)?);
    cache.lock().unwrap().insert((n, form), p.clone());
    Ok(p)
}

impl ChiPair {
    /// Re-verifies both homotopy identities exactly.
    pub fn verify(&self) -> bool {
        let s0 = PolyMatrix::scalar(self.gamma0.rank(), &x2_minus_x1());
        let s1 = PolyMatrix::scalar(self.gamma1.rank(), &x2_minus_x1());
        let lhs0 = self.chi1.map.compose(&self.chi0.map).sub(&s0);
        let lhs1 = self.chi0.map.compose(&self.chi1.map).sub(&s1);
        self.chi0.commutes(&self.gamma0, &self.gamma1)
            && self.chi1.commutes(&self.gamma1, &self.gamma0)
            && self.chi0.is_homogeneous(&self.gamma0, &self.gamma1)
            && self.chi1.is_homogeneous(&self.gamma1, &self.gamma0)
            && lhs0 == bracket(&self.gamma0, &self.gamma0, 0, &self.homotopy_on_gamma0)
            && lhs1 == bracket(&self.gamma1, &self.gamma1, 0, &self.homotopy_on_gamma1)
            && !self.chi0.map.is_zero()
            && !self.chi1.map.is_zero()
    }
}
