use super::GradedQaModule;

/// `𝓕 = ⊕_{l=0}^{N-1} ℚ[a]⟨1⟩{-1, -N+1+2l}`.
fn free_f(n: i32) -> GradedQaModule {
    let mut m = GradedQaModule::new();
    for l in 0..n {
        m.add_free(1, 0, -1, -n + 1 + 2 * l, 1);
    }
    m
}

/// `𝓕/a𝓕`.
fn free_f_mod_a(n: i32) -> GradedQaModule {
    let mut m = GradedQaModule::new();
    for l in 0..n {
        m.add_torsion(1, 0, 1, -1, -n + 1 + 2 * l, 1);
    }
    m
}

/// `𝓣 = ⊕_{l≥0} ℚ[a]/(a)⟨1⟩{-1, N+1+2l}`, cut off at `x`-degree `k_max`
/// after applying the `x`-shift `dk`.
fn torsion_t(n: i32, dk: i32, k_max: i32) -> GradedQaModule {
    let mut m = GradedQaModule::new();
    let mut k = n + 1;
    while k + dk <= k_max {
        m.add_torsion(1, 0, 1, -1, k, 1);
        k += 2;
    }
    m
}

/// The homology of the transverse unknot `U_m` for `x`-degrees up to `k_max`.
pub fn unknot_homology(m: u32, n: u32, k_max: i32) -> GradedQaModule {
    let (m, n) = (m as i32, n as i32);
    let f = free_f(n);
    let out = match m {
        0 => f.direct_sum(&torsion_t(n, 0, k_max)),
        1 => f.direct_sum(&torsion_t(n, -n - 1, k_max).shift(1, 1, -1, -n - 1)),
        _ => {
            let mut out = f.shift(0, 0, -2 * (m - 1), 0);
            let dk = -m * (n + 1);
            out = out.direct_sum(&torsion_t(n, dk, k_max).shift((m % 2) as u8, m, -m, dk));
            for l in 1..m {
                out = out.direct_sum(&free_f_mod_a(n).shift(
                    (l % 2) as u8,
                    l + 1,
                    -2 * m + l,
                    -l * (n + 1),
                ));
            }
            out
        }
    };
    out.truncate_k(k_max)
}
