use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

/// Generators of one `(ε, i)` component: free `ℚ[a]{j,k}` keyed by `(j, k)`,
/// torsion `ℚ[a]/(a^l){j,k}` keyed by `(l, j, k)`, with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Component {
    pub free: BTreeMap<(i32, i32), usize>,
    pub torsion: BTreeMap<(u32, i32, i32), usize>,
}

impl Component {
    pub fn is_empty(&self) -> bool {
        self.free.is_empty() && self.torsion.is_empty()
    }
}

/// A `ℤ₂ ⊕ ℤ³`-graded `ℚ[a]`-module in standard form, by `(ε, i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedQaModule {
    pub components: BTreeMap<(u8, i32), Component>,
}

impl GradedQaModule {
    pub fn new() -> GradedQaModule {
        GradedQaModule::default()
    }

    pub fn is_empty(&self) -> bool {
        self.components.values().all(Component::is_empty)
    }

    pub fn add_free(&mut self, eps: u8, i: i32, j: i32, k: i32, mult: usize) {
        if mult > 0 {
            *self
                .components
                .entry((eps % 2, i))
                .or_default()
                .free
                .entry((j, k))
                .or_default() += mult;
        }
    }

    pub fn add_torsion(&mut self, eps: u8, i: i32, l: u32, j: i32, k: i32, mult: usize) {
        if mult > 0 {
            *self
                .components
                .entry((eps % 2, i))
                .or_default()
                .torsion
                .entry((l, j, k))
                .or_default() += mult;
        }
    }

    pub fn direct_sum(&self, other: &GradedQaModule) -> GradedQaModule {
        let mut out = self.clone();
        for (&(e, i), c) in &other.components {
            for (&(j, k), &m) in &c.free {
                out.add_free(e, i, j, k, m);
            }
            for (&(l, j, k), &m) in &c.torsion {
                out.add_torsion(e, i, l, j, k, m);
            }
        }
        out
    }

    /// `⟨z2⟩{j,k}‖i‖`.
    pub fn shift(&self, z2: u8, di: i32, dj: i32, dk: i32) -> GradedQaModule {
        let mut out = GradedQaModule::new();
        for (&(e, i), c) in &self.components {
            for (&(j, k), &m) in &c.free {
                out.add_free(e + z2, i + di, j + dj, k + dk, m);
            }
            for (&(l, j, k), &m) in &c.torsion {
                out.add_torsion(e + z2, i + di, l, j + dj, k + dk, m);
            }
        }
        out
    }

    /// Generators with `x`-degree at most `k_max`.
    pub fn truncate_k(&self, k_max: i32) -> GradedQaModule {
        let mut out = GradedQaModule::new();
        for (&(e, i), c) in &self.components {
            for (&(j, k), &m) in c.free.iter().filter(|((_, k), _)| *k <= k_max) {
                out.add_free(e, i, j, k, m);
            }
            for (&(l, j, k), &m) in c.torsion.iter().filter(|((_, _, k), _)| *k <= k_max) {
                out.add_torsion(e, i, l, j, k, m);
            }
        }
        out
    }

    /// `dim_ℚ` of the degree `(ε, i, j, k)` part.
    pub fn dim(&self, eps: u8, i: i32, j: i32, k: i32) -> usize {
        let Some(c) = self.components.get(&(eps % 2, i)) else {
            return 0;
        };
        let free: usize = c
            .free
            .iter()
            .filter(|((j0, k0), _)| *k0 == k && *j0 <= j && (j - j0) % 2 == 0)
            .map(|(_, m)| m)
            .sum();
        let tors: usize = c
            .torsion
            .iter()
            .filter(|((l, j0, k0), _)| {
                *k0 == k && *j0 <= j && (j - j0) % 2 == 0 && (j - j0) / 2 < *l as i32
            })
            .map(|(_, m)| m)
            .sum();
        free + tors
    }

    /// Free rank of the `(ε, i, ·, k)` part.
    pub fn free_rank(&self, eps: u8, i: i32, k: i32) -> usize {
        self.components.get(&(eps % 2, i)).map_or(0, |c| {
            c.free
                .iter()
                .filter(|((_, k0), _)| *k0 == k)
                .map(|(_, m)| m)
                .sum()
        })
    }

    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .components
            .iter()
            .filter(|(_, c)| !c.is_empty())
            .map(|(&(eps, i), c)| {
                json!({
                    "eps": eps,
                    "i": i,
                    "free": c.free.iter().map(|(&(j, k), &m)| json!({"j": j, "k": k, "mult": m})).collect::<Vec<_>>(),
                    "torsion": c.torsion.iter().map(|(&(l, j, k), &m)| json!({"l": l, "j": j, "k": k, "mult": m})).collect::<Vec<_>>(),
                })
            })
            .collect();
        Value::Array(comps)
    }
}

fn sup(n: i32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for d in n.unsigned_abs().to_string().bytes() {
        s.push(DIGITS[(d - b'0') as usize]);
    }
    s
}

fn power(var: char, n: i32) -> String {
    match n {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}{}", sup(n)),
    }
}

fn term(coef: usize, var: char, n: i32) -> String {
    let p = power(var, n);
    match (coef, p.is_empty()) {
        (1, true) => "1".into(),
        (1, false) => p,
        (c, true) => c.to_string(),
        (c, false) => format!("{c}{p}"),
    }
}

/// `Σ c_k q^k` grouped by the `τ` exponent, e.g. `τ⁻¹(q⁻¹+q)`.
fn poincare(terms: &BTreeMap<(i32, i32), usize>) -> String {
    let mut by_j: BTreeMap<i32, Vec<(i32, usize)>> = BTreeMap::new();
    for (&(j, k), &m) in terms {
        by_j.entry(j).or_default().push((k, m));
    }
    let parts: Vec<String> = by_j
        .iter()
        .map(|(&j, ks)| {
            let inner: Vec<String> = ks.iter().map(|&(k, m)| term(m, 'q', k)).collect();
            let t = power('τ', j);
            if inner.len() == 1 {
                if t.is_empty() {
                    inner[0].clone()
                } else if inner[0] == "1" {
                    t
                } else {
                    format!("{t} {}", inner[0])
                }
            } else {
                format!("{t}({})", inner.join("+"))
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl GradedQaModule {
    /// One line per `(ε, i)`: `ε=1 i=0 free: τ⁻¹(q⁻¹+q); torsion: τ⁻¹ q³/(1−q²)`.
    ///
    /// Torsion tails that continue in steps of `q²` up to `k_max` are folded
    /// into a geometric series.
    pub fn render_text(&self, k_max: i32) -> String {
        let mut lines = Vec::new();
        for (&(eps, i), c) in &self.components {
            if c.is_empty() {
                continue;
            }
            let mut torsion = BTreeMap::new();
            let mut longer = Vec::new();
            for (&(l, j, k), &m) in &c.torsion {
                if l == 1 {
                    *torsion.entry((j, k)).or_insert(0) += m;
                } else {
                    longer.push(format!("{m}×ℚ[a]/(a{}){{{j},{k}}}", sup(l as i32)));
                }
            }
            // Fold each τ-row's stable tail (constant multiplicity up to k_max).
            let mut folded = Vec::new();
            let mut rows: BTreeMap<i32, BTreeMap<i32, usize>> = BTreeMap::new();
            for (&(j, k), &m) in &torsion {
                rows.entry(j).or_default().insert(k, m);
            }
            let mut rest = BTreeMap::new();
            for (j, ks) in rows {
                let top = *ks.keys().next_back().expect("nonempty");
                let m = ks[&top];
                let mut start = top;
                while start - 2 >= *ks.keys().next().expect("nonempty")
                    && ks.get(&(start - 2)) == Some(&m)
                {
                    start -= 2;
                }
                let tail = top >= k_max - 1 && start < top;
                for (&k, &mm) in &ks {
                    if !(tail && k >= start) {
                        rest.insert((j, k), mm);
                    }
                }
                if tail {
                    let t = power('τ', j);
                    let c = if m == 1 { String::new() } else { m.to_string() };
                    let q = power('q', start);
                    let head = match (t.is_empty(), q.is_empty()) {
                        (true, true) => "1".to_string(),
                        (false, true) => t,
                        (true, false) => q,
                        (false, false) => format!("{t} {q}"),
                    };
                    folded.push(format!("{c}{head}/(1−q²)"));
                }
            }
            let mut tors_text = vec![];
            if !rest.is_empty() {
                tors_text.push(poincare(&rest));
            }
            tors_text.extend(folded);
            tors_text.extend(longer);
            let tors = if tors_text.is_empty() {
                "0".into()
            } else {
                tors_text.join(" + ")
            };
            lines.push(format!(
                "ε={eps} i={i} free: {}; torsion: {tors}",
                poincare(&c.free)
            ));
        }
        lines.join("\n")
    }
}

impl fmt::Display for GradedQaModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text(i32::MAX))
    }
}

/// Recovers the standard decomposition of a graded `ℚ[a]`-module from the
/// ranks `r(s, t)` of `a^{(t-s)/2}: M_s → M_t` on one parity class of
/// `a`-degrees `j_lo, j_lo + 2, …, j_top` (with `r(s, s) = dim M_s`).
///
/// Returns free generators by degree, torsion by `(length, degree)`, and
/// whether multiplication by `a` is an isomorphism at the top of the window.
pub fn decompose_profile(
    j_lo: i32,
    j_top: i32,
    r: &dyn Fn(i32, i32) -> usize,
) -> (BTreeMap<i32, usize>, BTreeMap<(u32, i32), usize>, bool) {
    let rr = |s: i32, t: i32| {
        if s < j_lo || t > j_top {
            0
        } else {
            r(s, t) as i64
        }
    };
    let mut free = BTreeMap::new();
    let mut torsion = BTreeMap::new();
    let mut j = j_lo;
    while j <= j_top {
        let mut l = 1;
        while j + 2 * l <= j_top {
            let t = j + 2 * l;
            let m = rr(j, t - 2) - rr(j, t) - rr(j - 2, t - 2) + rr(j - 2, t);
            if m > 0 {
                torsion.insert((l as u32, j), m as usize);
            }
            l += 1;
        }
        let f = rr(j, j_top) - rr(j - 2, j_top);
        if f > 0 {
            free.insert(j, f as usize);
        }
        j += 2;
    }
    let stable = j_top - 2 < j_lo
        || (rr(j_top - 2, j_top) == rr(j_top, j_top)
            && rr(j_top - 2, j_top - 2) == rr(j_top, j_top));
    (free, torsion, stable)
}
