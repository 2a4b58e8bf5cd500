use std::collections::BTreeMap;

use super::HomologyReport;

/// Outcome of checking a report against the structure theorem.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureAudit {
    pub pass: bool,
    pub failures: Vec<String>,
    /// Number of free generators at `a`-shift `sl(B)` per `(ε, i, k)`.
    pub free_at_sl: BTreeMap<(u8, i32, i32), usize>,
}

/// Per `(ε, i, k)`: free shifts in `{sl, sl+2}`, free rank equal to the `sl(N)`
/// dimension, torsion of length 1 with `sl ≤ s ≤ c₊−c₋−1` and
/// `(N−1)s ≤ k − 2N + 2c₋`, and no free part in `ε ≡ sl − 1`.
pub fn verify_structure_theorem(r: &HomologyReport) -> StructureAudit {
    let sl = r.sl;
    let n = r.n as i32;
    let (cp, cm) = (r.c_plus() as i32, r.c_minus() as i32);
    let mut failures = Vec::new();
    let mut free_at_sl = BTreeMap::new();
    let bad_eps = (sl - 1).rem_euclid(2) as u8;
    for (&(eps, i), c) in &r.module.components {
        for (&(j, k), &m) in &c.free {
            if j != sl && j != sl + 2 {
                failures.push(format!(
                    "free generator at ε={eps} i={i} ({j},{k}) has shift outside {{sl, sl+2}}"
                ));
            }
            if eps == bad_eps {
                failures.push(format!("free part in ε={eps} i={i} k={k}"));
            }
            if j == sl {
                *free_at_sl.entry((eps, i, k)).or_insert(0) += m;
            }
        }
        for &(l, j, k) in c.torsion.keys() {
            if l != 1 {
                failures.push(format!("torsion of length {l} at ε={eps} i={i} ({j},{k})"));
            }
            if j < sl || j > cp - cm - 1 {
                failures.push(format!(
                    "torsion shift {j} at ε={eps} i={i} k={k} outside [sl, c₊−c₋−1]"
                ));
            }
            if (n - 1) * j > k - 2 * n + 2 * cm {
                failures.push(format!(
                    "torsion shift {j} at ε={eps} i={i} k={k} violates (N−1)s ≤ k−2N+2c₋"
                ));
            }
        }
    }
    // Free ranks must match the sl(N) dimensions, in both directions.
    let mut keys: Vec<(u8, i32, i32)> = r.sln_dims.keys().copied().collect();
    for (&(eps, i), c) in &r.module.components {
        keys.extend(c.free.keys().map(|&(_, k)| (eps, i, k)));
    }
    keys.sort();
    keys.dedup();
    for (eps, i, k) in keys {
        let free = r.module.free_rank(eps, i, k);
        let sln = r.sln_dim(eps, i, k);
        if free != sln {
            failures.push(format!(
                "free rank {free} ≠ sl(N) dimension {sln} at ε={eps} i={i} k={k}"
            ));
        }
    }
    StructureAudit {
        pass: failures.is_empty(),
        failures,
        free_at_sl,
    }
}
