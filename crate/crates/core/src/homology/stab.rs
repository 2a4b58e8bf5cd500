use std::collections::BTreeSet;

use super::report::{
    complex_homology, default_jmax, default_kmax, total_homology, HomologyOptions, HomologyReport,
};
use super::HomologyError;
use crate::braid::{transverse_move, BraidWord, Move};
use crate::mfcore::{braid_complex, ComplexOptions};

/// Result of checking the stabilization sequences on `B` and `B₋`.
#[derive(Clone, Debug)]
pub struct StabVerdict {
    pub short_sequence: bool,
    pub long_sequence: bool,
    pub failures: Vec<String>,
    pub report: HomologyReport,
    pub stabilized: HomologyReport,
}

impl StabVerdict {
    pub fn pass(&self) -> bool {
        self.short_sequence && self.long_sequence
    }
}

/// `dim (V ⊗ ℚ[a]{s})_j` for a vector space of dimension `dim`.
fn free_dim(dim: usize, s: i32, j: i32) -> usize {
    if j >= s && (j - s) % 2 == 0 {
        dim
    } else {
        0
    }
}

/// Checks, degreewise in `(j, k)`, the short exact sequence
/// `0 → H_N^{s,i,k}(B)⊗ℚ[a]{s} → 𝓗^{s,i,·,k}(B₋) → 𝓗^{s−1,i−1,·,k+N+1}(B){−1} → 0`
/// and the alternating sums of the long exact sequence in `ε = s − 1`.
/// `kmax` bounds the `x`-degrees of `B₋`; `B` is computed `N + 1` higher.
pub fn stab_check(
    b: &BraidWord,
    n: u32,
    kmax: Option<i32>,
    eliminate: bool,
) -> Result<StabVerdict, HomologyError> {
    let bm = transverse_move(b, &Move::StabNeg)?;
    let kmax_minus = kmax.unwrap_or_else(|| default_kmax(&bm, n));
    let shift = n as i32 + 1;
    let opts = |k: i32| HomologyOptions {
        kmax: Some(k),
        eliminate,
        ..HomologyOptions::default()
    };
    let r = total_homology(b, n, opts(kmax_minus + shift))?;
    let rm = total_homology(&bm, n, opts(kmax_minus))?;

    let s = r.sl;
    let se = s.rem_euclid(2) as u8;
    let sm1 = (s - 1).rem_euclid(2) as u8;
    let js = (rm.window.jmin.min(r.window.jmin - 1))..=rm.window.jmax;
    let ks = rm.window.kmin.min(r.window.kmin - shift)..=kmax_minus;
    let mut is: BTreeSet<i32> = BTreeSet::new();
    for &(_, i, _, _) in r.dims.keys().chain(rm.dims.keys()) {
        is.insert(i);
        is.insert(i + 1);
        is.insert(i - 1);
    }
    for &(_, i, _) in r.sln_dims.keys() {
        is.insert(i);
        is.insert(i + 1);
    }

    let mut failures = Vec::new();
    let mut short_ok = true;
    let mut long_ok = true;
    for j in js.clone() {
        for k in ks.clone() {
            for &i in &is {
                let lhs = rm.dim(se, i, j, k);
                let rhs = free_dim(r.sln_dim(se, i, k), s, j) + r.dim(sm1, i - 1, j + 1, k + shift);
                if lhs != rhs {
                    short_ok = false;
                    failures.push(format!(
                        "short sequence at i={i} j={j} k={k}: {lhs} ≠ {rhs}"
                    ));
                }
            }
            // ··· → 𝓗^{s−1,i}(B₋) → 𝓗^{s,i−1,·,k+N+1}(B){−1} → H_N^{s,i−1,k+N+1}(B)⊗ℚ[a]{s−1} → 𝓗^{s−1,i+1}(B₋) → ···
            let mut alt: i64 = 0;
            for &i in &is {
                let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                let a = rm.dim(sm1, i, j, k) as i64;
                let bb = r.dim(se, i - 1, j + 1, k + shift) as i64;
                let c = free_dim(r.sln_dim(se, i - 1, k + shift), s - 1, j) as i64;
                alt += sign * (a - bb + c);
            }
            if alt != 0 {
                long_ok = false;
                failures.push(format!("long sequence Euler sum at j={j} k={k}: {alt}"));
            }
        }
    }
    Ok(StabVerdict {
        short_sequence: short_ok,
        long_sequence: long_ok,
        failures,
        report: r,
        stabilized: rm,
    })
}

/// Result of comparing `cone(π₀){−2,0}` with the stabilized braid.
#[derive(Clone, Debug)]
pub struct ConeVerdict {
    pub pass: bool,
    pub mismatches: Vec<String>,
    pub compared_degrees: usize,
}

/// Builds `cone(π₀: 𝓒_N(B) → 𝓒_N(B)/a𝓒_N(B)){−2,0}` and compares the
/// graded dimensions of its two-stage homology with `𝓗_N(B₋)`.
pub fn cone_pi0_check(
    b: &BraidWord,
    n: u32,
    kmax: Option<i32>,
    eliminate: bool,
) -> Result<ConeVerdict, HomologyError> {
    let bm = transverse_move(b, &Move::StabNeg)?;
    let kmax = kmax.unwrap_or_else(|| default_kmax(&bm, n));
    let jmax = default_jmax(&bm);
    let c = braid_complex(b, n, ComplexOptions { eliminate })?;
    let cone = c.cone_of_a_reduction();
    let hc = complex_homology(&cone, jmax, kmax)?;
    let cm = braid_complex(&bm, n, ComplexOptions { eliminate })?;
    let hm = complex_homology(&cm, jmax, kmax)?;
    let mut keys: BTreeSet<(u8, i32, i32, i32)> = hc.dims.keys().copied().collect();
    keys.extend(hm.dims.keys().copied());
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (e, i, j, k) in keys {
        compared += 1;
        let x = hc.dims.get(&(e, i, j, k)).copied().unwrap_or(0);
        let y = hm.dims.get(&(e, i, j, k)).copied().unwrap_or(0);
        if x != y {
            mismatches.push(format!("ε={e} i={i} j={j} k={k}: cone {x}, stabilized {y}"));
        }
    }
    Ok(ConeVerdict {
        pass: mismatches.is_empty(),
        mismatches,
        compared_degrees: compared,
    })
}
