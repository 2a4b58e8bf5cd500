use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::chi::{cached_chi_pair, gamma0_rows, gamma1_rows, ChiPair, Gamma0Form};
use super::mf::{KoszulRow, MatrixFactorization, PolyMatrix};
use super::moy::circle_row;
use super::MfError;
use crate::braid::{cube, BraidWord, ResolvedWord};
use crate::exactalg::{Bidegree, Poly, Rat};

/// Whether the ground ring still carries the grading variable `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RingMode {
    /// `Q[a, x]`, bigraded.
    Graded,
    /// `a = 1`: only the `x`-grading survives.
    AOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexOptions {
    /// Remove Koszul rows with a linear second entry by solving for one
    /// variable. The result is homotopy equivalent and much smaller.
    pub eliminate: bool,
}

impl Default for ComplexOptions {
    fn default() -> Self {
        ComplexOptions { eliminate: true }
    }
}

/// Variables at one crossing, in the closure's global ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingMarks {
    pub out_l: usize,
    pub out_r: usize,
    pub in_l: usize,
    pub in_r: usize,
}

impl CrossingMarks {
    /// Ring map from the local crossing ring.
    fn local_map(&self) -> [usize; 5] {
        [0, self.out_l, self.out_r, self.in_l, self.in_r]
    }
}

/// One mark per arc of the closed braid diagram. Positions `1..=b` carry
/// variables `1..=b` at the top of the closure; every crossing creates fresh
/// output variables except where it is the last crossing at that position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidMarking {
    pub nvars: usize,
    pub crossings: Vec<CrossingMarks>,
    /// Positions with no crossing; each carries one circle.
    pub circles: Vec<usize>,
}

pub fn braid_marking(b: &BraidWord) -> BraidMarking {
    let strands = b.strands();
    let mut last_at = vec![usize::MAX; strands + 1];
    for (c, l) in b.letters().iter().enumerate() {
        let i = l.unsigned_abs() as usize;
        last_at[i] = c;
        last_at[i + 1] = c;
    }
    let mut cur: Vec<usize> = (0..=strands).collect();
    let mut next = strands + 1;
    let mut crossings = Vec::new();
    for (c, l) in b.letters().iter().enumerate() {
        let i = l.unsigned_abs() as usize;
        let (in_l, in_r) = (cur[i], cur[i + 1]);
        let mut out = [0; 2];
        for (k, p) in [i, i + 1].into_iter().enumerate() {
            out[k] = if last_at[p] == c {
                p
            } else {
                next += 1;
                next - 1
            };
            cur[p] = out[k];
        }
        crossings.push(CrossingMarks {
            out_l: out[0],
            out_r: out[1],
            in_l,
            in_r,
        });
    }
    let circles = (1..=strands)
        .filter(|&p| last_at[p] == usize::MAX)
        .collect();
    BraidMarking {
        nvars: next,
        crossings,
        circles,
    }
}

#[derive(Clone, Debug)]
pub struct ComplexVertex {
    pub label: String,
    pub hdeg: i32,
    pub mf: MatrixFactorization,
    /// The factorization is read modulo `a` (entries with `a` act as zero).
    pub a_quotient: bool,
}

/// Component of the cube differential, sign included.
#[derive(Clone, Debug)]
pub struct ComplexEdge {
    pub source: usize,
    pub target: usize,
    pub sign: i8,
    pub map: PolyMatrix,
}

/// A complex of matrix factorizations: vertices in homological degrees and
/// even maps between vertices in adjacent degrees.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub n: u32,
    pub mode: RingMode,
    pub nvars: usize,
    pub vertices: Vec<ComplexVertex>,
    pub edges: Vec<ComplexEdge>,
    /// Variable names, `a` first.
    pub var_names: Vec<String>,
}

/// Linear substitution collected while eliminating rows.
struct Eliminator {
    nvars: usize,
    subs: Vec<Option<Poly>>,
}

impl Eliminator {
    fn new(nvars: usize) -> Eliminator {
        Eliminator {
            nvars,
            subs: vec![None; nvars],
        }
    }

    fn apply(&self, p: &Poly) -> Poly {
        if self.subs.iter().all(Option::is_none) {
            return p.clone();
        }
        p.substitute(&self.subs, self.nvars).expect("same ring")
    }

    /// Tries to make `l` vanish by solving for its highest variable.
    fn eliminate(&mut self, l: &Poly) -> bool {
        let l = self.apply(l);
        let Some(form) = l.as_linear_form() else {
            return false;
        };
        let Some((v, coeff)) = form.into_iter().max_by_key(|(i, _)| *i) else {
            return false;
        };
        let solved = &Poly::var(self.nvars, v) - &l.scale(&coeff.recip());
        let mut one = vec![None; self.nvars];
        one[v] = Some(solved.clone());
        for s in self.subs.iter_mut().flatten() {
            *s = s.substitute(&one, self.nvars).expect("same ring");
        }
        self.subs[v] = Some(solved);
        true
    }

    /// Compact renumbering of the surviving variables.
    fn survivors(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.subs[v].is_none())
            .collect()
    }
}

/// Bit positions of one crossing's two rows in the global Koszul layout.
#[derive(Clone, Copy, Debug)]
struct RowSlots {
    first: Option<usize>,
    second: usize,
}

impl RowSlots {
    fn local(&self, s: usize) -> usize {
        self.first.map_or(0, |p| s >> p & 1) | (s >> self.second & 1) << 1
    }

    fn mask(&self) -> usize {
        self.first.map_or(0, |p| 1 << p) | 1 << self.second
    }

    fn place(&self, t: usize) -> Option<usize> {
        let mut out = (t >> 1 & 1) << self.second;
        match self.first {
            Some(p) => out |= (t & 1) << p,
            None if t & 1 == 1 => return None,
            None => {}
        }
        Some(out)
    }
}

fn local_rows(n: u32, form: Gamma0Form, bit: u8) -> Vec<KoszulRow> {
    if bit == 0 {
        gamma0_rows(n, form)
    } else {
        gamma1_rows(n)
    }
}

fn sign_matrix(m: &PolyMatrix, sign: i8) -> PolyMatrix {
    if sign > 0 {
        m.clone()
    } else {
        m.scale(&Rat::from_int(-1))
    }
}

/// Marking, row layout and variable elimination shared by every vertex of
/// one braid's cube.
struct Layout {
    marking: BraidMarking,
    elim: Eliminator,
    slots: Vec<RowSlots>,
    compact: Vec<usize>,
    survivors: Vec<usize>,
    form: Gamma0Form,
    n: u32,
}

impl Layout {
    fn new(b: &BraidWord, n: u32, eliminate: bool) -> Layout {
        let form = if eliminate {
            Gamma0Form::Linear
        } else {
            Gamma0Form::Arcs
        };
        let marking = braid_marking(b);
        let nv = marking.nvars;
        let mut elim = Eliminator::new(nv);
        let mut slots = Vec::with_capacity(marking.crossings.len());
        let mut next_bit = 0;
        for cm in &marking.crossings {
            let x = |v| Poly::var(nv, v);
            let l = &(&(&x(cm.out_l) + &x(cm.out_r)) - &x(cm.in_l)) - &x(cm.in_r);
            let first = if eliminate && elim.eliminate(&l) {
                None
            } else {
                next_bit += 1;
                Some(next_bit - 1)
            };
            slots.push(RowSlots {
                first,
                second: next_bit,
            });
            next_bit += 1;
        }
        let survivors = elim.survivors();
        let mut compact = vec![usize::MAX; nv];
        for (i, &v) in survivors.iter().enumerate() {
            compact[v] = i;
        }
        Layout {
            marking,
            elim,
            slots,
            compact,
            survivors,
            form,
            n,
        }
    }

    fn nvars(&self) -> usize {
        self.survivors.len()
    }

    fn to_global(&self, p: &Poly, cm: &CrossingMarks) -> Poly {
        let g = p.remap(self.marking.nvars, &cm.local_map());
        self.elim.apply(&g).remap(self.nvars(), &self.compact)
    }

    /// Unshifted factorization of the resolution `res`, wide edges without
    /// their `{0,-1}`.
    fn vertex_mf(&self, res: &[u8]) -> Result<MatrixFactorization, MfError> {
        let mut rows = Vec::new();
        for (c, cm) in self.marking.crossings.iter().enumerate() {
            let local = local_rows(self.n, self.form, res[c]);
            for (k, r) in local.iter().enumerate() {
                if k == 0 && self.slots[c].first.is_none() {
                    continue;
                }
                rows.push(KoszulRow::new(
                    self.to_global(&r.a0, cm),
                    self.to_global(&r.a1, cm),
                ));
            }
        }
        for &p in &self.marking.circles {
            let r = circle_row(self.marking.nvars, self.n, p);
            rows.push(KoszulRow::new(
                r.a0.remap(self.nvars(), &self.compact),
                r.a1.remap(self.nvars(), &self.compact),
            ));
        }
        MatrixFactorization::koszul(&rows, self.nvars(), self.n)
    }

    fn var_names(&self) -> Vec<String> {
        let mut names = vec!["a".to_string()];
        names.extend(self.survivors[1..].iter().map(|v| format!("x{v}")));
        names
    }
}

/// `𝓒_N(Γ)` of a closed resolved braid as a one-vertex complex in
/// homological degree 0.
pub fn resolved_complex(
    g: &ResolvedWord,
    n: u32,
    opts: ComplexOptions,
) -> Result<CubeComplex, MfError> {
    let letters: Vec<i32> = g.letters.iter().map(|&l| l as i32).collect();
    let b = BraidWord::new(g.strands, letters).map_err(|e| MfError::InvalidGraph(e.to_string()))?;
    let layout = Layout::new(&b, n, opts.eliminate);
    let mf = layout
        .vertex_mf(&vec![1; g.letters.len()])?
        .shift(0, 0, -(g.letters.len() as i32));
    let label = g.to_string();
    Ok(CubeComplex {
        n,
        mode: RingMode::Graded,
        nvars: layout.nvars(),
        vertices: vec![ComplexVertex {
            label,
            hdeg: 0,
            mf,
            a_quotient: false,
        }],
        edges: Vec::new(),
        var_names: layout.var_names(),
    })
}

/// The complex `𝓒_N(B)` of a closed braid. With elimination the vertex
/// factorizations are reduced models of `𝓒_N(Γ_r)`; without it they are the
/// literal tensor products of arc and wide-edge pieces.
pub fn braid_complex(b: &BraidWord, n: u32, opts: ComplexOptions) -> Result<CubeComplex, MfError> {
    let layout = Layout::new(b, n, opts.eliminate);
    let chi: std::sync::Arc<ChiPair> = cached_chi_pair(n, layout.form)?;
    let ncross = layout.marking.crossings.len();
    let new_nv = layout.nvars();
    let build_vertex = |res: &[u8]| layout.vertex_mf(res);

    let cube_vertices = cube(b);
    let vertices: Vec<ComplexVertex> = cube_vertices
        .par_iter()
        .map(|cv| {
            let mf = build_vertex(&cv.resolution)?;
            let (z2, j, k) = cv.shift(n);
            let wide = (cv.m_plus + cv.m_minus) as i32;
            Ok(ComplexVertex {
                label: cv.resolution.iter().map(|r| char::from(b'0' + r)).collect(),
                hdeg: cv.homological_degree(),
                mf: mf.shift(z2, j, k - wide),
                a_quotient: false,
            })
        })
        .collect::<Result<_, MfError>>()?;

    let mut edges = Vec::new();
    for (vi, cv) in cube_vertices.iter().enumerate() {
        for c in 0..ncross {
            let positive = b.letters()[c] > 0;
            let from_bit = if positive { 1 } else { 0 };
            if cv.resolution[c] != from_bit {
                continue;
            }
            let target = vi ^ (1 << c);
            let ones_before = cv.resolution[..c].iter().filter(|&&r| r == 1).count();
            let sign: i8 = if ones_before % 2 == 0 { 1 } else { -1 };
            let local = if positive {
                &chi.chi1.map
            } else {
                &chi.chi0.map
            };
            let cm = &layout.marking.crossings[c];
            let slot = layout.slots[c];
            let rank = vertices[vi].mf.rank();
            let mut map = PolyMatrix::zeros(vertices[target].mf.rank(), rank, new_nv);
            for s in 0..rank {
                let rest = s & !slot.mask();
                for (t, p) in local.column(slot.local(s)) {
                    let Some(placed) = slot.place(*t) else {
                        continue;
                    };
                    let q = layout.to_global(p, cm);
                    if !q.is_zero() {
                        map.add_entry(rest | placed, s, q);
                    }
                }
            }
            edges.push(ComplexEdge {
                source: vi,
                target,
                sign,
                map: sign_matrix(&map, sign),
            });
        }
    }

    Ok(CubeComplex {
        n,
        mode: RingMode::Graded,
        nvars: new_nv,
        vertices,
        edges,
        var_names: layout.var_names(),
    })
}

/// The two-term complex of a single crossing over the local ring, built from
/// the arc presentation of `Γ₀`.
pub fn crossing_complex(positive: bool, n: u32) -> Result<CubeComplex, MfError> {
    let chi = cached_chi_pair(n, Gamma0Form::Arcs)?;
    let w: i32 = if positive { 1 } else { -1 };
    let z2 = w.rem_euclid(2) as u8;
    // Γ₀ at m₊ = m₋ = 0, Γ₁ with one wide edge of the crossing's sign.
    let (mp, mm) = if positive { (1, 0) } else { (0, 1) };
    let g0 = chi.gamma0.shift(z2, w, (n as i32 - 1) * w);
    let g1 = chi.gamma1.shift(z2, w, (n as i32 - 1) * w + mp - mm);
    let v0 = ComplexVertex {
        label: "0".into(),
        hdeg: 0,
        mf: g0,
        a_quotient: false,
    };
    let v1 = ComplexVertex {
        label: "1".into(),
        hdeg: mm - mp,
        mf: g1,
        a_quotient: false,
    };
    let edge = if positive {
        ComplexEdge {
            source: 1,
            target: 0,
            sign: 1,
            map: chi.chi1.map.clone(),
        }
    } else {
        ComplexEdge {
            source: 0,
            target: 1,
            sign: 1,
            map: chi.chi0.map.clone(),
        }
    };
    let var_names = ["a", "x1", "y1", "y2", "x2"].map(String::from).to_vec();
    Ok(CubeComplex {
        n,
        mode: RingMode::Graded,
        nvars: 5,
        vertices: vec![v0, v1],
        edges: vec![edge],
        var_names,
    })
}

/// Bidegree an edge entry must have so the map has degree zero.
fn edge_degree(
    src: &MatrixFactorization,
    tgt: &MatrixFactorization,
    h: usize,
    g: usize,
) -> Bidegree {
    src.generators()[g].bidegree() - tgt.generators()[h].bidegree()
}

impl CubeComplex {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn hdeg_range(&self) -> Option<(i32, i32)> {
        let min = self.vertices.iter().map(|v| v.hdeg).min()?;
        let max = self.vertices.iter().map(|v| v.hdeg).max()?;
        Some((min, max))
    }

    /// Sets `a` to `1` (dropping the `a`-grading) or to `0` (marking every
    /// vertex as read modulo `a`).
    pub fn specialize(&self, a_value: u8) -> CubeComplex {
        let mut out = self.clone();
        match a_value {
            0 => {
                for v in &mut out.vertices {
                    v.a_quotient = true;
                }
            }
            _ => {
                let one = Rat::one();
                for v in &mut out.vertices {
                    v.mf = v.mf.map_ring(|p| p.set_a(&one));
                }
                for e in &mut out.edges {
                    e.map = e.map.map(|p| p.set_a(&one));
                }
                out.mode = RingMode::AOne;
            }
        }
        out
    }

    fn a_part_vanishes(&self, p: &Poly, quotient: bool) -> bool {
        if quotient {
            p.terms().all(|(m, _)| m.a_power() > 0)
        } else {
            p.is_zero()
        }
    }

    /// `d² = w·id` at every vertex, with one potential `w` for all vertices
    /// (zero for closed braids).
    pub fn check_d_squared(&self) -> Result<(), MfError> {
        let w = self.vertices.first().map(|v| v.mf.potential().clone());
        for v in &self.vertices {
            if !v.mf.check_square() || Some(v.mf.potential()) != w.as_ref() {
                return Err(MfError::Check(format!("d² ≠ 0 at vertex {}", v.label)));
            }
        }
        Ok(())
    }

    /// Every entry of every `d` and edge map is homogeneous of its forced
    /// degree (only the `x`-degree after `a = 1`).
    pub fn check_homogeneity(&self) -> Result<(), MfError> {
        let ok = |p: &Poly, want: Bidegree| match self.mode {
            RingMode::Graded => p.bidegree() == Some(want),
            RingMode::AOne => p.terms().all(|(m, _)| m.bidegree().x_deg == want.x_deg),
        };
        for v in &self.vertices {
            for (h, g, p) in v.mf.d().entries() {
                if !ok(p, v.mf.forced_degree(h, g)) {
                    return Err(MfError::Check(format!(
                        "d not homogeneous at vertex {}",
                        v.label
                    )));
                }
            }
        }
        for e in &self.edges {
            let (s, t) = (&self.vertices[e.source].mf, &self.vertices[e.target].mf);
            for (h, g, p) in e.map.entries() {
                if !ok(p, edge_degree(s, t, h, g)) {
                    return Err(MfError::Check(format!(
                        "edge {}→{} not homogeneous",
                        e.source, e.target
                    )));
                }
                if s.generators()[g].z2 != t.generators()[h].z2 {
                    return Err(MfError::Check(format!(
                        "edge {}→{} not even",
                        e.source, e.target
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every edge map commutes with the factorization differentials.
    pub fn check_chain_maps(&self) -> Result<(), MfError> {
        self.edges.par_iter().try_for_each(|e| {
            let (s, t) = (&self.vertices[e.source], &self.vertices[e.target]);
            let diff = t.mf.d().compose(&e.map).sub(&e.map.compose(s.mf.d()));
            let quotient = t.a_quotient;
            if diff
                .entries()
                .all(|(_, _, p)| self.a_part_vanishes(p, quotient))
            {
                Ok(())
            } else {
                Err(MfError::Check(format!(
                    "edge {}→{} is not a morphism",
                    e.source, e.target
                )))
            }
        })
    }

    /// `d_χ² = 0`: the composites along all 2-paths cancel.
    pub fn check_dchi_squared(&self) -> Result<(), MfError> {
        let mut by_source = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            by_source[e.source].push(i);
        }
        for (s, out) in by_source.iter().enumerate() {
            let mut sums: std::collections::BTreeMap<usize, PolyMatrix> = Default::default();
            for &e1 in out {
                let mid = self.edges[e1].target;
                for &e2 in &by_source[mid] {
                    let t = self.edges[e2].target;
                    let comp = self.edges[e2].map.compose(&self.edges[e1].map);
                    let entry = sums
                        .entry(t)
                        .or_insert_with(|| PolyMatrix::zeros(comp.rows(), comp.cols(), self.nvars));
                    *entry = entry.add(&comp);
                }
            }
            for (t, m) in sums {
                let quotient = self.vertices[t].a_quotient;
                if !m
                    .entries()
                    .all(|(_, _, p)| self.a_part_vanishes(p, quotient))
                {
                    return Err(MfError::Check(format!("d_χ² ≠ 0 from vertex {s} to {t}")));
                }
            }
        }
        Ok(())
    }

    pub fn check_all(&self) -> Result<(), MfError> {
        self.check_d_squared()?;
        self.check_homogeneity()?;
        self.check_chain_maps()?;
        self.check_dchi_squared()
    }

    /// The mapping cone of `π₀: C → C|_{a=0}`, built as
    /// `[[d_χ, 0], [π₀, −d_χ]]` with the `a = 0` copy one homological degree
    /// up, followed by an overall `{-2, 0}` shift.
    pub fn cone_of_a_reduction(&self) -> CubeComplex {
        let k = self.vertices.len();
        let mut vertices = self.vertices.clone();
        for v in &self.vertices {
            vertices.push(ComplexVertex {
                label: format!("{}/a", v.label),
                hdeg: v.hdeg + 1,
                mf: v.mf.clone(),
                a_quotient: true,
            });
        }
        for v in &mut vertices {
            v.mf = v.mf.shift(0, -2, 0);
        }
        let mut edges = self.edges.clone();
        for e in &self.edges {
            edges.push(ComplexEdge {
                source: e.source + k,
                target: e.target + k,
                sign: -e.sign,
                map: e.map.scale(&Rat::from_int(-1)),
            });
        }
        for (i, v) in self.vertices.iter().enumerate() {
            edges.push(ComplexEdge {
                source: i,
                target: i + k,
                sign: 1,
                map: PolyMatrix::identity(v.mf.rank(), self.nvars),
            });
        }
        CubeComplex {
            vertices,
            edges,
            ..self.clone()
        }
    }

    /// Complete description for debugging, with polynomials printed.
    pub fn debug_json(&self) -> serde_json::Value {
        let show = |m: &PolyMatrix| {
            m.entries()
                .map(|(h, g, p)| json!([h, g, p.to_string()]))
                .collect::<Vec<_>>()
        };
        json!({
            "n": self.n,
            "mode": self.mode,
            "variables": self.var_names,
            "vertices": self.vertices.iter().map(|v| json!({
                "label": v.label,
                "hdeg": v.hdeg,
                "a_quotient": v.a_quotient,
                "generators": v.mf.generators(),
                "d": show(v.mf.d()),
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "source": e.source,
                "target": e.target,
                "sign": e.sign,
                "map": show(&e.map),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marking_of_trefoil_closure() {
        let b: BraidWord = "b=2; 1 1 1".parse().unwrap();
        let m = braid_marking(&b);
        assert_eq!(m.nvars, 7);
        assert_eq!(
            m.crossings[0],
            CrossingMarks {
                out_l: 3,
                out_r: 4,
                in_l: 1,
                in_r: 2
            }
        );
        assert_eq!(
            m.crossings[2],
            CrossingMarks {
                out_l: 1,
                out_r: 2,
                in_l: 5,
                in_r: 6
            }
        );
        assert!(m.circles.is_empty());
    }

    #[test]
    fn complexes_pass_all_checks() {
        for (word, n) in [
            ("b=2; 1", 2),
            ("b=2; -1", 2),
            ("b=3; -1 -2", 2),
            ("b=2; 1 1 1", 2),
            ("b=3; 1 -2 1", 1),
        ] {
            let b: BraidWord = word.parse().unwrap();
            for eliminate in [true, false] {
                let c = braid_complex(&b, n, ComplexOptions { eliminate }).unwrap();
                c.check_all()
                    .unwrap_or_else(|e| panic!("{word} eliminate={eliminate}: {e}"));
                c.specialize(1).check_all().unwrap();
                c.specialize(0).check_all().unwrap();
                c.cone_of_a_reduction().check_all().unwrap();
            }
        }
    }

    #[test]
    fn crossing_complexes_are_complexes() {
        for positive in [true, false] {
            crossing_complex(positive, 2).unwrap().check_all().unwrap();
        }
    }
}
