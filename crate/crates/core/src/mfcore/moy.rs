use serde::Serialize;

use super::mf::{KoszulRow, MatrixFactorization};
use super::MfError;
use crate::braid::ResolvedWord;
use crate::exactalg::{newton_g, quotient_pi, Poly};

/// Row of the arc piece `Γ_{i;k}` (tail variable `i`, head variable `k`):
/// `(a·(x_k^{N+1} − x_i^{N+1})/(x_k − x_i), x_k − x_i)`.
pub fn arc_row(nvars: usize, n: u32, tail: usize, head: usize) -> KoszulRow {
    let a0 = &Poly::a(nvars) * &quotient_pi(nvars, head, tail, n);
    let a1 = &Poly::var(nvars, head) - &Poly::var(nvars, tail);
    KoszulRow::new(a0, a1)
}

/// The two rows of the wide-edge piece with inputs `ins` and outputs `outs`
/// (the piece also carries an overall `{0,-1}` shift, applied by callers).
pub fn wide_edge_rows(nvars: usize, n: u32, ins: [usize; 2], outs: [usize; 2]) -> [KoszulRow; 2] {
    // Divided differences are taken over formal variables [a, u, v, P, Q] and
    // only then specialized, since the actual arguments may coincide.
    let aux = 5;
    let g = newton_g(n);
    let g_at = |s: usize, p: usize| g.remap(aux, &[0, s, p]);
    let (u, v, pp, qq) = (1, 2, 3, 4);
    let diff1 = (&g_at(u, pp) - &g_at(v, pp))
        .divide_exact(&(&Poly::var(aux, u) - &Poly::var(aux, v)))
        .expect("divided difference in s");
    let diff2 = (&g_at(v, pp) - &g_at(v, qq))
        .divide_exact(&(&Poly::var(aux, pp) - &Poly::var(aux, qq)))
        .expect("divided difference in p");
    let x = |i: usize| Poly::var(nvars, i);
    let s_out = &x(outs[0]) + &x(outs[1]);
    let s_in = &x(ins[0]) + &x(ins[1]);
    let p_out = &x(outs[0]) * &x(outs[1]);
    let p_in = &x(ins[0]) * &x(ins[1]);
    let subs = vec![
        Some(Poly::a(nvars)),
        Some(s_out.clone()),
        Some(s_in.clone()),
        Some(p_out.clone()),
        Some(p_in.clone()),
    ];
    let a = Poly::a(nvars);
    let row1 = KoszulRow::new(
        &a * &diff1.substitute(&subs, nvars).unwrap(),
        &s_out - &s_in,
    );
    let row2 = KoszulRow::new(
        &a * &diff2.substitute(&subs, nvars).unwrap(),
        &p_out - &p_in,
    );
    [row1, row2]
}

/// Row of an unmarked-free circle carrying the single mark `x`: `((N+1)a x^N, 0)`.
pub fn circle_row(nvars: usize, n: u32, x: usize) -> KoszulRow {
    arc_row(nvars, n, x, x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MoyVertex {
    /// Univalent end of an open graph, marked by a variable.
    Endpoint { mark: usize },
    /// Interior point of a 1-colored strand.
    Bivalent,
    /// Two 1-colored edges in, one 2-colored edge out.
    Merge,
    /// One 2-colored edge in, two 1-colored edges out.
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoyEdge {
    pub tail: usize,
    pub head: usize,
    pub color: u8,
    /// Marked points along the edge from tail to head (variable indices).
    pub marks: Vec<usize>,
}

/// An oriented MOY graph with edges colored 1 or 2 and a marking.
/// Variable 0 is `a`; marks use variables `1..=num_marks`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoyGraph {
    pub num_marks: usize,
    pub vertices: Vec<MoyVertex>,
    pub edges: Vec<MoyEdge>,
}

/// Pieces obtained by cutting a marked graph at its marked points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoyPiece {
    Arc { tail: usize, head: usize },
    WideEdge { ins: [usize; 2], outs: [usize; 2] },
}

impl MoyGraph {
    pub fn nvars(&self) -> usize {
        self.num_marks + 1
    }

    fn in_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].head == v)
            .collect()
    }

    fn out_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].tail == v)
            .collect()
    }

    fn validate(&self) -> Result<(), MfError> {
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.tail >= self.vertices.len() || edge.head >= self.vertices.len() {
                return Err(MfError::InvalidGraph(format!(
                    "edge {e} has a dangling end"
                )));
            }
            if edge.marks.iter().any(|&m| m == 0 || m > self.num_marks) {
                return Err(MfError::InvalidGraph(format!(
                    "edge {e} has an unknown mark"
                )));
            }
            match edge.color {
                1 => {}
                2 => {
                    if !edge.marks.is_empty() {
                        return Err(MfError::MarkedWideEdge(e));
                    }
                    if self.vertices[edge.tail] != MoyVertex::Merge
                        || self.vertices[edge.head] != MoyVertex::Split
                    {
                        return Err(MfError::InvalidGraph(format!(
                            "2-colored edge {e} must run from a merge to a split vertex"
                        )));
                    }
                }
                c => return Err(MfError::InvalidGraph(format!("edge {e} has color {c}"))),
            }
        }
        for (v, kind) in self.vertices.iter().enumerate() {
            let ins = self.in_edges(v);
            let outs = self.out_edges(v);
            let colors = |es: &[usize]| es.iter().map(|&e| self.edges[e].color).collect::<Vec<_>>();
            let ok = match kind {
                MoyVertex::Endpoint { mark } => {
                    *mark >= 1 && *mark <= self.num_marks && ins.len() + outs.len() == 1
                }
                MoyVertex::Bivalent => colors(&ins) == [1] && colors(&outs) == [1],
                MoyVertex::Merge => colors(&ins) == [1, 1] && colors(&outs) == [2],
                MoyVertex::Split => colors(&ins) == [2] && colors(&outs) == [1, 1],
            };
            if !ok {
                return Err(MfError::InvalidGraph(format!(
                    "vertex {v} has the wrong valence"
                )));
            }
        }
        Ok(())
    }

    /// Cuts the graph at its marked points.
    pub fn pieces(&self) -> Result<Vec<MoyPiece>, MfError> {
        self.validate()?;
        let mut pieces = Vec::new();
        let mut used = vec![false; self.edges.len()];
        // first/last mark of the chain leaving/entering each trivalent vertex
        let mut chain_first = vec![Vec::new(); self.vertices.len()];
        let mut chain_last = vec![Vec::new(); self.vertices.len()];
        let push_arcs = |marks: &[usize], pieces: &mut Vec<MoyPiece>| {
            for w in marks.windows(2) {
                pieces.push(MoyPiece::Arc {
                    tail: w[0],
                    head: w[1],
                });
            }
        };
        for start in 0..self.edges.len() {
            let e0 = &self.edges[start];
            if e0.color != 1 || self.vertices[e0.tail] == MoyVertex::Bivalent {
                continue;
            }
            let mut marks = Vec::new();
            if let MoyVertex::Endpoint { mark } = self.vertices[e0.tail] {
                marks.push(mark);
            }
            let mut e = start;
            loop {
                used[e] = true;
                marks.extend_from_slice(&self.edges[e].marks);
                let h = self.edges[e].head;
                if self.vertices[h] != MoyVertex::Bivalent {
                    if let MoyVertex::Endpoint { mark } = self.vertices[h] {
                        marks.push(mark);
                    }
                    break;
                }
                e = self.out_edges(h)[0];
            }
            if marks.is_empty() {
                return Err(MfError::UnmarkedEdge(start));
            }
            push_arcs(&marks, &mut pieces);
            chain_first[e0.tail].push(marks[0]);
            chain_last[self.edges[e].head].push(*marks.last().unwrap());
        }
        for start in 0..self.edges.len() {
            if used[start] || self.edges[start].color != 1 {
                continue;
            }
            let mut marks = Vec::new();
            let mut e = start;
            while !used[e] {
                used[e] = true;
                marks.extend_from_slice(&self.edges[e].marks);
                e = self.out_edges(self.edges[e].head)[0];
            }
            if marks.is_empty() {
                return Err(MfError::UnmarkedEdge(start));
            }
            marks.push(marks[0]);
            push_arcs(&marks, &mut pieces);
        }
        for edge in self.edges.iter().filter(|e| e.color == 2) {
            let ins = &chain_last[edge.tail];
            let outs = &chain_first[edge.head];
            pieces.push(MoyPiece::WideEdge {
                ins: [ins[0], ins[1]],
                outs: [outs[0], outs[1]],
            });
        }
        Ok(pieces)
    }

    /// `±a·x^{N+1}` over the endpoints: `+` where the graph ends, `−` where it starts.
    pub fn boundary_potential(&self, n: u32) -> Poly {
        let nv = self.nvars();
        let mut w = Poly::zero(nv);
        for (v, kind) in self.vertices.iter().enumerate() {
            if let MoyVertex::Endpoint { mark } = *kind {
                let t = &Poly::a(nv) * &Poly::var(nv, mark).pow(n + 1);
                w = if self.in_edges(v).is_empty() {
                    &w - &t
                } else {
                    &w + &t
                };
            }
        }
        w
    }

    /// Closure of a resolved braid with one mark per arc: strand positions
    /// `1..=b` carry variables `1..=b` at the top of the closure, and each
    /// wide edge creates fresh output variables except where it is the last
    /// one at a position.
    pub fn closed_resolved_braid(word: &ResolvedWord) -> MoyGraph {
        let b = word.strands;
        let mut last_at = vec![usize::MAX; b + 1];
        for (t, &i) in word.letters.iter().enumerate() {
            last_at[i] = t;
            last_at[i + 1] = t;
        }
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut next_var = b + 1;
        // variable -> (producer vertex, consumer vertex)
        let mut producer: Vec<Option<usize>> = vec![None; b + 1 + 2 * word.letters.len()];
        let mut consumer: Vec<Option<usize>> = producer.clone();
        let mut cur: Vec<usize> = (0..=b).collect();
        for (t, &i) in word.letters.iter().enumerate() {
            let merge = vertices.len();
            vertices.push(MoyVertex::Merge);
            let split = vertices.len();
            vertices.push(MoyVertex::Split);
            edges.push(MoyEdge {
                tail: merge,
                head: split,
                color: 2,
                marks: vec![],
            });
            consumer[cur[i]] = Some(merge);
            consumer[cur[i + 1]] = Some(merge);
            for p in [i, i + 1] {
                let v = if last_at[p] == t {
                    p
                } else {
                    next_var += 1;
                    next_var - 1
                };
                producer[v] = Some(split);
                cur[p] = v;
            }
        }
        for p in 1..=b {
            if last_at[p] == usize::MAX {
                let v = vertices.len();
                vertices.push(MoyVertex::Bivalent);
                edges.push(MoyEdge {
                    tail: v,
                    head: v,
                    color: 1,
                    marks: vec![p],
                });
            }
        }
        for v in 1..next_var {
            if let (Some(tail), Some(head)) = (producer[v], consumer[v]) {
                edges.push(MoyEdge {
                    tail,
                    head,
                    color: 1,
                    marks: vec![v],
                });
            }
        }
        MoyGraph {
            num_marks: next_var - 1,
            vertices,
            edges,
        }
    }
}

/// `𝓒_N(Γ)`: tensor product of the arc and wide-edge pieces over the full
/// ring, each wide edge contributing a `{0,-1}` shift.
pub fn moy_mf(g: &MoyGraph, n: u32) -> Result<MatrixFactorization, MfError> {
    let nv = g.nvars();
    let mut rows = Vec::new();
    let mut wide = 0;
    for piece in g.pieces()? {
        match piece {
            MoyPiece::Arc { tail, head } => rows.push(arc_row(nv, n, tail, head)),
            MoyPiece::WideEdge { ins, outs } => {
                rows.extend(wide_edge_rows(nv, n, ins, outs));
                wide += 1;
            }
        }
    }
    let mf = MatrixFactorization::koszul(&rows, nv, n)?.shift(0, 0, -wide);
    if mf.potential() != &g.boundary_potential(n) {
        return Err(MfError::Potential);
    }
    Ok(mf)
}
