use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::engine::{first_stage_dims, two_stage, Cell, Compiled, TwoStage};
use super::module::{decompose_profile, GradedQaModule};
use super::{verify_structure_theorem, HomologyError, StructureAudit};
use crate::braid::BraidWord;
use crate::exactalg::{rank, QMatrix};
use crate::mfcore::{braid_complex, ComplexOptions, CubeComplex, RingMode};

pub const SCHEMA_VERSION: u32 = 1;

/// Degrees covered by a computation. Every chain group is computed exactly,
/// so dims inside the window are final; the `a`-window limits how far the
/// `ℚ[a]`-structure can be resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeWindow {
    pub jmin: i32,
    pub jmax: i32,
    pub kmin: i32,
    pub kmax: i32,
}

impl DegreeWindow {
    pub fn j_values(&self) -> Vec<i32> {
        (self.jmin..=self.jmax).collect()
    }

    pub fn k_values(&self) -> Vec<i32> {
        (self.kmin..=self.kmax).collect()
    }
}

/// Default `x`-window top: `2N + 2·crossings + 5`.
pub fn default_kmax(b: &BraidWord, n: u32) -> i32 {
    2 * n as i32 + 2 * b.crossings() as i32 + 5
}

/// Default `a`-window top: `c₊ − c₋ + 3`.
pub fn default_jmax(b: &BraidWord) -> i32 {
    b.writhe() + 3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomologyOptions {
    pub kmax: Option<i32>,
    pub jmax: Option<i32>,
    pub eliminate: bool,
    /// Re-run the chain-level checks on the built complex.
    pub check_complex: bool,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions {
            kmax: None,
            jmax: None,
            eliminate: true,
            check_complex: false,
        }
    }
}

/// `(ε, i, j, k) → dim`.
pub type GradedDims = BTreeMap<(u8, i32, i32, i32), usize>;
/// `(ε, i, k) → dim`.
pub type SlnDims = BTreeMap<(u8, i32, i32), usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Audits {
    pub structure_theorem: StructureAudit,
    /// `H(𝓒(Γ), d_mf)` has no free part in `ε ≡ sl − 1` at every vertex.
    pub parity_vanishing: bool,
    /// Multiplication by `a` is an isomorphism at the top of the `a`-window
    /// for every `(ε, i, k)`.
    pub window_stable: bool,
    /// Chain-level checks, when requested.
    pub complex_checks: Option<bool>,
}

impl Audits {
    pub fn all_pass(&self) -> bool {
        self.structure_theorem.pass
            && self.parity_vanishing
            && self.window_stable
            && self.complex_checks != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub braid: BraidWord,
    pub n: u32,
    pub sl: i32,
    pub window: DegreeWindow,
    pub module: GradedQaModule,
    pub dims: GradedDims,
    pub sln_dims: SlnDims,
    pub audits: Audits,
}

impl HomologyReport {
    pub fn c_plus(&self) -> usize {
        self.braid.positive_crossings()
    }

    pub fn c_minus(&self) -> usize {
        self.braid.negative_crossings()
    }

    pub fn dim(&self, eps: u8, i: i32, j: i32, k: i32) -> usize {
        self.dims.get(&(eps % 2, i, j, k)).copied().unwrap_or(0)
    }

    pub fn sln_dim(&self, eps: u8, i: i32, k: i32) -> usize {
        self.sln_dims.get(&(eps % 2, i, k)).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "braid": self.braid.to_string(),
            "N": self.n,
            "sl": self.sl,
            "window": self.window,
            "components": self.module.to_json(),
            "sln": self.sln_dims.iter().map(|(&(eps, i, k), &dim)| json!({"eps": eps, "i": i, "k": k, "dim": dim})).collect::<Vec<_>>(),
            "audits": {
                "structure_theorem": self.audits.structure_theorem.pass,
                "structure_theorem_failures": self.audits.structure_theorem.failures,
                "free_at_sl": self.audits.structure_theorem.free_at_sl.iter()
                    .map(|(&(eps, i, k), &l)| json!({"eps": eps, "i": i, "k": k, "l": l})).collect::<Vec<_>>(),
                "parity_vanishing": self.audits.parity_vanishing,
                "window_stable": self.audits.window_stable,
                "complex_checks": self.audits.complex_checks,
            },
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "braid: {}\nN={} sl={} window: j∈[{},{}] k∈[{},{}]\n",
            self.braid,
            self.n,
            self.sl,
            self.window.jmin,
            self.window.jmax,
            self.window.kmin,
            self.window.kmax
        );
        let body = self.module.render_text(self.window.kmax);
        out.push_str(if body.is_empty() { "(zero)" } else { &body });
        out.push('\n');
        out
    }
}

/// Window covering every chain group of `c` up to `(jmax, kmax)`.
fn window_for(cx: &Compiled, jmax: i32, kmax: i32) -> DegreeWindow {
    let (amin, xmin) = cx.min_shifts().unwrap_or((0, 0));
    DegreeWindow {
        jmin: amin.min(jmax),
        jmax,
        kmin: xmin.min(kmax),
        kmax,
    }
}

/// Rank profile and standard decomposition of one `(ε, i, k)` column.
fn decompose_column(
    cx: &Compiled,
    ts: &TwoStage,
    eps: u8,
    i: i32,
    k: i32,
    window: &DegreeWindow,
    module: &mut GradedQaModule,
) -> Result<bool, HomologyError> {
    let mut stable = true;
    for parity in 0..2 {
        let j_lo = window.jmin + parity;
        if j_lo > window.jmax {
            continue;
        }
        let j_top = j_lo + 2 * ((window.jmax - j_lo) / 2);
        let js: Vec<i32> = (j_lo..=j_top).step_by(2).collect();
        if js.iter().all(|&j| ts.dim(eps, i, j, k) == 0) {
            continue;
        }
        let maps: Vec<QMatrix> = js[..js.len() - 1]
            .iter()
            .map(|&j| ts.a_map(cx, eps, i, j, k))
            .collect::<Result<_, _>>()?;
        let mut profile: BTreeMap<(i32, i32), usize> = BTreeMap::new();
        for (si, &s) in js.iter().enumerate() {
            let mut m = QMatrix::identity(ts.dim(eps, i, s, k));
            profile.insert((s, s), m.cols());
            for (ti, &t) in js.iter().enumerate().skip(si + 1) {
                m = maps[ti - 1].mul(&m);
                profile.insert((s, t), rank(&m));
            }
        }
        let (free, torsion, ok) = decompose_profile(j_lo, j_top, &|s, t| profile[&(s, t)]);
        stable &= ok;
        for (j, m) in free {
            module.add_free(eps, i, j, k, m);
        }
        for ((l, j), m) in torsion {
            module.add_torsion(eps, i, l, j, k, m);
        }
    }
    Ok(stable)
}

/// Both stages and the `ℚ[a]`-structure of an arbitrary complex.
pub struct ComplexHomology {
    pub window: DegreeWindow,
    pub dims: GradedDims,
    pub module: GradedQaModule,
    pub window_stable: bool,
    /// `(vertex, ε, j, k) → dim H(𝓒(Γ_v), d_mf)` at nonzero entries.
    pub mf_dims: BTreeMap<(usize, u8, i32, i32), usize>,
}

pub fn complex_homology(
    c: &CubeComplex,
    jmax: i32,
    kmax: i32,
) -> Result<ComplexHomology, HomologyError> {
    let cx = Compiled::new(c);
    let window = window_for(&cx, jmax, kmax);
    let j_values = if c.mode == RingMode::AOne {
        vec![0]
    } else {
        window.j_values()
    };
    let ts = two_stage(&cx, &j_values, &window.k_values())?;
    let mut dims = GradedDims::new();
    for (&key, t) in &ts.second {
        if t.homology.dim() > 0 {
            dims.insert(key, t.homology.dim());
        }
    }
    let mut mf_dims = BTreeMap::new();
    for (cell, vc) in &ts.first {
        if vc.homology.dim() > 0 {
            mf_dims.insert((cell.vertex, cell.eps, cell.j, cell.k), vc.homology.dim());
        }
    }
    let mut module = GradedQaModule::new();
    let mut window_stable = true;
    if c.mode == RingMode::Graded {
        let mut columns: Vec<(u8, i32, i32)> = dims.keys().map(|&(e, i, _, k)| (e, i, k)).collect();
        columns.sort();
        columns.dedup();
        let results: Vec<(GradedQaModule, bool)> = {
            use rayon::prelude::*;
            columns
                .par_iter()
                .map(|&(e, i, k)| {
                    let mut m = GradedQaModule::new();
                    let ok = decompose_column(&cx, &ts, e, i, k, &window, &mut m)?;
                    Ok((m, ok))
                })
                .collect::<Result<_, HomologyError>>()?
        };
        for (m, ok) in results {
            module = module.direct_sum(&m);
            window_stable &= ok;
        }
    }
    Ok(ComplexHomology {
        window,
        dims,
        module,
        window_stable,
        mf_dims,
    })
}

/// `H(𝓒(Γ_v), d_mf)` at every vertex: `(vertex, ε, j, k) → dim` at nonzero
/// entries, computed from ranks only.
pub fn mf_homology_dims(
    c: &CubeComplex,
    jmax: i32,
    kmax: i32,
) -> Result<(DegreeWindow, BTreeMap<(usize, u8, i32, i32), usize>), HomologyError> {
    let cx = Compiled::new(c);
    let window = window_for(&cx, jmax, kmax);
    let j_values = if c.mode == RingMode::AOne {
        vec![0]
    } else {
        window.j_values()
    };
    let dims = first_stage_dims(&cx, &j_values, &window.k_values())?;
    Ok((
        window,
        dims.into_iter()
            .map(|(c, d)| ((c.vertex, c.eps, c.j, c.k), d))
            .collect(),
    ))
}

/// `H(H(𝓒_N(B)|_{a=1}, d_mf), d_χ)` by `(ε, i, k)` for `k ≤ kmax`.
pub fn sln_homology(
    b: &BraidWord,
    n: u32,
    kmax: i32,
    eliminate: bool,
) -> Result<SlnDims, HomologyError> {
    let c = braid_complex(b, n, ComplexOptions { eliminate })?.specialize(1);
    sln_of_complex(&c, kmax)
}

pub fn sln_of_complex(c: &CubeComplex, kmax: i32) -> Result<SlnDims, HomologyError> {
    let h = complex_homology(c, 0, kmax)?;
    Ok(h.dims
        .into_iter()
        .map(|((e, i, _, k), d)| ((e, i, k), d))
        .collect())
}

/// Parity vanishing on the first stage: at the top of the `a`-window every
/// vertex homology in `ε ≡ sl − 1` is zero, so that part is torsion.
fn parity_vanishing(h: &ComplexHomology, sl: i32) -> bool {
    let eps = (sl - 1).rem_euclid(2) as u8;
    let top = [h.window.jmax, h.window.jmax - 1];
    !h.mf_dims
        .keys()
        .any(|&(_, e, j, _)| e == eps && top.contains(&j))
}

/// `𝓗_N(B)` with its module structure, `sl(N)` dims and audits.
pub fn total_homology(
    b: &BraidWord,
    n: u32,
    opts: HomologyOptions,
) -> Result<HomologyReport, HomologyError> {
    let kmax = opts.kmax.unwrap_or_else(|| default_kmax(b, n));
    let jmax = opts.jmax.unwrap_or_else(|| default_jmax(b));
    let c = braid_complex(
        b,
        n,
        ComplexOptions {
            eliminate: opts.eliminate,
        },
    )?;
    let complex_checks = opts.check_complex.then(|| c.check_all().is_ok());
    let h = complex_homology(&c, jmax, kmax)?;
    let sln_dims = sln_of_complex(&c.specialize(1), kmax)?;
    let sl = b.self_linking();
    let parity = parity_vanishing(&h, sl);
    let mut report = HomologyReport {
        braid: b.clone(),
        n,
        sl,
        window: h.window,
        module: h.module,
        dims: h.dims,
        sln_dims,
        audits: Audits {
            structure_theorem: StructureAudit::default(),
            parity_vanishing: parity,
            window_stable: h.window_stable,
            complex_checks,
        },
    };
    report.audits.structure_theorem = verify_structure_theorem(&report);
    Ok(report)
}

/// Matrix of `d_mf` out of one vertex cell.
pub fn component_matrix_d(
    c: &CubeComplex,
    vertex: usize,
    eps: u8,
    j: i32,
    k: i32,
) -> Result<QMatrix, HomologyError> {
    Compiled::new(c).component_matrix_d(Cell { vertex, eps, j, k })
}
