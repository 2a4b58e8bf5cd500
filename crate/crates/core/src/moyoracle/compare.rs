use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::reduce::{check_bounds, Oracle};
use super::series::Variant;
use super::OracleError;
use crate::braid::{enumerate_resolved, ResolvedWord};
use crate::homology::{complex_homology, mf_homology_dims, HomologyError};
use crate::mfcore::{resolved_complex, ComplexOptions, CubeComplex};

/// `(ε, j, k) → dim` (with `j = 0` for the `sl(N)` variant).
pub type SeriesDims = BTreeMap<(u8, i32, i32), usize>;

/// Generators `(part, ε, j, k) → mult` of a standard decomposition.
pub type SeriesGenerators = BTreeMap<(&'static str, u8, i32, i32), i64>;

fn direct_complex(
    g: &ResolvedWord,
    n: u32,
    variant: Variant,
    eliminate: bool,
) -> Result<CubeComplex, HomologyError> {
    let c = resolved_complex(g, n, ComplexOptions { eliminate })?;
    Ok(if variant == Variant::Sln {
        c.specialize(1)
    } else {
        c
    })
}

/// Direct `H(𝓒_N(Γ), d_mf)` dims, from ranks only.
pub fn direct_series_dims(
    g: &ResolvedWord,
    n: u32,
    variant: Variant,
    j_max: i32,
    k_max: i32,
    eliminate: bool,
) -> Result<SeriesDims, HomologyError> {
    let c = direct_complex(g, n, variant, eliminate)?;
    let (_, dims) = mf_homology_dims(&c, j_max, k_max)?;
    Ok(dims
        .into_iter()
        .map(|((_, e, j, k), d)| ((e, j, k), d))
        .collect())
}

/// Direct dims together with the standard decomposition over `ℚ[a]`.
pub fn direct_series_generators(
    g: &ResolvedWord,
    n: u32,
    j_max: i32,
    k_max: i32,
    eliminate: bool,
) -> Result<(SeriesDims, SeriesGenerators), HomologyError> {
    let c = direct_complex(g, n, Variant::Triple, eliminate)?;
    let h = complex_homology(&c, j_max, k_max)?;
    let dims = h
        .dims
        .iter()
        .map(|(&(e, _, j, k), &d)| ((e, j, k), d))
        .collect();
    let mut gens = BTreeMap::new();
    for (&(e, _), comp) in &h.module.components {
        for (&(j, k), &m) in &comp.free {
            gens.insert(("free", e, j, k), m as i64);
        }
        for (&(l, j, k), &m) in &comp.torsion {
            let part = if l == 1 { "torsion" } else { "long-torsion" };
            *gens.entry((part, e, j, k)).or_default() += m as i64;
        }
    }
    Ok((dims, gens))
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
    pub word: String,
    pub n: u32,
    pub variant: Variant,
    pub k_max: i32,
    pub oracle: Vec<((u8, i32, i32), usize)>,
    pub direct: Vec<((u8, i32, i32), usize)>,
    pub dims_match: bool,
    pub generators_compared: bool,
    /// Free and torsion generators agree (when compared).
    pub generators_match: bool,
    pub bound_violations: Vec<String>,
}

impl OracleComparison {
    pub fn pass(&self) -> bool {
        self.dims_match && self.generators_match && self.bound_violations.is_empty()
    }
}

/// `a`-window top used for comparisons: one step above the highest torsion shift.
const J_MAX: i32 = 1;

pub fn compare_resolved(
    oracle: &Oracle,
    g: &ResolvedWord,
    k_max: i32,
    eliminate: bool,
    generators: bool,
) -> Result<OracleComparison, OracleError> {
    let s = oracle.series(g)?;
    let oracle_dims = s.graded_dims(J_MAX, k_max);
    let with_gens = generators && oracle.variant == Variant::Triple;
    let (direct, generators_match) = if with_gens {
        let (direct, mut dg) = direct_series_generators(g, oracle.n, J_MAX, k_max, eliminate)?;
        // The direct window resolves generators with a-shift below J_MAX.
        let mut og = s.generators(k_max);
        og.retain(|&(_, _, j, _), _| j < J_MAX);
        dg.retain(|&(_, _, j, _), _| j < J_MAX);
        (direct, og == dg)
    } else {
        (
            direct_series_dims(g, oracle.n, oracle.variant, J_MAX, k_max, eliminate)?,
            true,
        )
    };
    let dims_match = oracle_dims == direct;
    Ok(OracleComparison {
        word: g.to_string(),
        n: oracle.n,
        variant: oracle.variant,
        k_max,
        oracle: oracle_dims.into_iter().collect(),
        direct: direct.into_iter().collect(),
        dims_match,
        generators_compared: with_gens,
        generators_match,
        bound_violations: check_bounds(g, oracle.n, &s, k_max),
    })
}

/// Top `x`-degree of a comparison window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KWindow {
    Absolute(i32),
    /// This many degrees above the lowest `x`-shift among the triply graded
    /// oracle generators (the same anchor for both variants).
    AboveBottom(i32),
}

impl KWindow {
    /// `AboveBottom(2N + 4)`: the circle's `N` free generators, the first
    /// torsion generators and two further `q²` steps.
    pub fn standard(n: u32) -> KWindow {
        KWindow::AboveBottom(2 * n as i32 + 4)
    }

    pub fn k_max(self, anchor: &Oracle, g: &ResolvedWord) -> Result<i32, OracleError> {
        match self {
            KWindow::Absolute(k) => Ok(k),
            KWindow::AboveBottom(span) => {
                let s = anchor.series(g)?;
                Ok(s.lowest_k().unwrap_or(0) + span)
            }
        }
    }
}

/// Compares oracle and direct dims for every closed resolved braid on
/// `1..=max_strands` strands of weight at most `max_weight`.
pub fn sweep(
    max_strands: usize,
    max_weight: usize,
    n: u32,
    variant: Variant,
    window: KWindow,
    eliminate: bool,
) -> Result<Vec<OracleComparison>, OracleError> {
    let oracle = Oracle::new(n, variant);
    let anchor = if variant == Variant::Triple {
        None
    } else {
        Some(Oracle::new(n, Variant::Triple))
    };
    let words: Vec<ResolvedWord> = (1..=max_strands)
        .flat_map(|b| enumerate_resolved(b, max_weight))
        .collect();
    words
        .par_iter()
        .map(|g| {
            let k_max = window.k_max(anchor.as_ref().unwrap_or(&oracle), g)?;
            compare_resolved(&oracle, g, k_max, eliminate, false)
        })
        .collect()
}
