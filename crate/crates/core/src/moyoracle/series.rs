use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// `P(τ, q) / (1 − q²)^den` with `P` a Laurent polynomial over ℤ.
#[derive(Clone, Debug, Default)]
pub struct Series {
    num: BTreeMap<(i32, i32), i64>,
    den: u32,
}

fn binom(n: i64, k: u32) -> i64 {
    if n < 0 {
        return 0;
    }
    (0..k as i64).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl Series {
    pub fn zero() -> Series {
        Series::default()
    }

    /// `c τ^j q^k`.
    pub fn monomial(j: i32, k: i32, c: i64) -> Series {
        let mut s = Series::zero();
        s.add_term(j, k, c);
        s
    }

    /// `τ^j q^k / (1 − q²)`.
    pub fn geometric(j: i32, k: i32) -> Series {
        Series {
            num: BTreeMap::from([((j, k), 1)]),
            den: 1,
        }
    }

    fn add_term(&mut self, j: i32, k: i32, c: i64) {
        let e = self.num.entry((j, k)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.num.remove(&(j, k));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn denominator_power(&self) -> u32 {
        self.den
    }

    pub fn numerator(&self) -> &BTreeMap<(i32, i32), i64> {
        &self.num
    }

    /// Numerator over `(1 − q²)^den` for `den ≥ self.den`.
    fn lifted(&self, den: u32) -> BTreeMap<(i32, i32), i64> {
        let mut num = self.num.clone();
        for _ in self.den..den {
            let mut next = num.clone();
            for (&(j, k), &c) in &num {
                let e = next.entry((j, k + 2)).or_insert(0);
                *e -= c;
            }
            next.retain(|_, c| *c != 0);
            num = next;
        }
        num
    }

    /// Cancels common factors `(1 − q²)` between numerator and denominator.
    fn normalized(mut self) -> Series {
        while self.den > 0 {
            let Some(q) = divide_one_minus_q2(&self.num) else {
                break;
            };
            self.num = q;
            self.den -= 1;
        }
        self
    }

    pub fn add(&self, other: &Series) -> Series {
        let den = self.den.max(other.den);
        let mut out = Series {
            num: self.lifted(den),
            den,
        };
        for ((j, k), c) in other.lifted(den) {
            out.add_term(j, k, c);
        }
        out.normalized()
    }

    pub fn scale(&self, c: i64) -> Series {
        if c == 0 {
            return Series::zero();
        }
        Series {
            num: self.num.iter().map(|(&key, &v)| (key, v * c)).collect(),
            den: self.den,
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.scale(-1))
    }

    pub fn mul(&self, other: &Series) -> Series {
        let mut out = Series {
            num: BTreeMap::new(),
            den: self.den + other.den,
        };
        for (&(j1, k1), &c1) in &self.num {
            for (&(j2, k2), &c2) in &other.num {
                out.add_term(j1 + j2, k1 + k2, c1 * c2);
            }
        }
        out.normalized()
    }

    /// Multiplication by `τ^j q^k`.
    pub fn shift(&self, j: i32, k: i32) -> Series {
        Series {
            num: self
                .num
                .iter()
                .map(|(&(a, b), &c)| ((a + j, b + k), c))
                .collect(),
            den: self.den,
        }
    }

    /// Coefficients of the expansion with `q`-exponent at most `k_max`.
    pub fn expand(&self, k_max: i32) -> BTreeMap<(i32, i32), i64> {
        let mut out: BTreeMap<(i32, i32), i64> = BTreeMap::new();
        for (&(j, k0), &c) in &self.num {
            if self.den == 0 {
                if k0 <= k_max {
                    *out.entry((j, k0)).or_default() += c;
                }
                continue;
            }
            let mut n = 0;
            while k0 + 2 * n <= k_max {
                *out.entry((j, k0 + 2 * n)).or_default() +=
                    c * binom(n as i64 + self.den as i64 - 1, self.den - 1);
                n += 1;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Smallest `q`-exponent with a nonzero coefficient. The lowest numerator
    /// term of each `τ`-row survives the expansion unchanged.
    pub fn lowest_k(&self) -> Option<i32> {
        self.num.keys().map(|&(_, k)| k).min()
    }

    /// Largest `q`-exponent in the numerator.
    fn top(&self) -> Option<i32> {
        self.num.keys().map(|&(_, k)| k).max()
    }

    /// Whether every coefficient of the full expansion is nonnegative.
    ///
    /// Beyond the numerator's top degree each coefficient sequence (fixed `τ`
    /// exponent and `q`-parity) is a polynomial of degree `< den` in the step
    /// count, so nonnegative forward differences there certify the tail.
    pub fn is_nonnegative(&self) -> bool {
        let Some(top) = self.top() else { return true };
        let d = self.den as i32;
        let reach = top + 2 * d + 1;
        let coeffs = self.expand(reach);
        if coeffs.values().any(|&c| c < 0) {
            return false;
        }
        if d <= 1 {
            return true;
        }
        let taus: std::collections::BTreeSet<i32> = self.num.keys().map(|&(j, _)| j).collect();
        for &j in &taus {
            for start in [top - 1, top] {
                let mut vals: Vec<i64> = (0..d)
                    .map(|t| coeffs.get(&(j, start + 2 * t)).copied().unwrap_or(0))
                    .collect();
                for _ in 0..d {
                    if vals[0] < 0 {
                        return false;
                    }
                    vals = vals.windows(2).map(|w| w[1] - w[0]).collect();
                    if vals.is_empty() {
                        break;
                    }
                }
            }
        }
        true
    }
}

/// `P / (1 − q²)` when the division is exact, per `τ` exponent.
fn divide_one_minus_q2(num: &BTreeMap<(i32, i32), i64>) -> Option<BTreeMap<(i32, i32), i64>> {
    if num.is_empty() {
        return None;
    }
    let mut by_tau: BTreeMap<i32, BTreeMap<i32, i64>> = BTreeMap::new();
    for (&(j, k), &c) in num {
        by_tau.entry(j).or_default().insert(k, c);
    }
    let mut out = BTreeMap::new();
    for (j, p) in by_tau {
        let lo = *p.keys().next()?;
        let hi = *p.keys().next_back()?;
        // Q_k = P_k + Q_{k-2}; the division is exact iff Q vanishes at the top two degrees.
        let mut q: BTreeMap<i32, i64> = BTreeMap::new();
        for k in lo..=hi {
            let v = p.get(&k).copied().unwrap_or(0) + q.get(&(k - 2)).copied().unwrap_or(0);
            q.insert(k, v);
        }
        if q.get(&hi).copied().unwrap_or(0) != 0 || q.get(&(hi - 1)).copied().unwrap_or(0) != 0 {
            return None;
        }
        for (k, c) in q {
            if c != 0 && k <= hi - 2 {
                out.insert((j, k), c);
            }
        }
    }
    Some(out)
}

impl PartialEq for Series {
    fn eq(&self, other: &Series) -> bool {
        let den = self.den.max(other.den);
        self.lifted(den) == other.lifted(den)
    }
}

impl Eq for Series {}

fn sup(n: i32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = if n < 0 {
        "⁻".to_string()
    } else {
        String::new()
    };
    s.extend(
        n.unsigned_abs()
            .to_string()
            .bytes()
            .map(|d| DIGITS[(d - b'0') as usize]),
    );
    s
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .num
            .iter()
            .map(|(&(j, k), &c)| {
                let mut t = String::new();
                if c == -1 {
                    t.push('-');
                } else if c != 1 || (j == 0 && k == 0) {
                    t.push_str(&c.to_string());
                }
                if j != 0 {
                    t.push('τ');
                    if j != 1 {
                        t.push_str(&sup(j));
                    }
                }
                if k != 0 {
                    t.push('q');
                    if k != 1 {
                        t.push_str(&sup(k));
                    }
                }
                if t.is_empty() || t == "-" {
                    t.push('1');
                }
                t
            })
            .collect();
        let body = terms.join(" + ").replace("+ -", "− ");
        match self.den {
            0 => f.write_str(&body),
            1 => write!(f, "({body})/(1−q²)"),
            d => write!(f, "({body})/(1−q²){}", sup(d as i32)),
        }
    }
}

/// Which homology the series describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Variant {
    /// `H(𝓒_N(Γ), d_mf)` as a graded `ℚ[a]`-module.
    Triple,
    /// `H(C_N(Γ), d_mf)` at `a = 1`; only `q` is tracked and there is no torsion.
    Sln,
}

/// Free and torsion generating series for both `ℤ₂`-degrees. Free series
/// count generators `ℚ[a]{j,k}`, torsion series count `ℚ[a]/(a){j,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSeries {
    pub variant: Variant,
    pub free: [Series; 2],
    pub torsion: [Series; 2],
}

impl ModuleSeries {
    pub fn zero(variant: Variant) -> ModuleSeries {
        ModuleSeries {
            variant,
            free: Default::default(),
            torsion: Default::default(),
        }
    }

    /// The ground ring `ℚ[a]` (or `ℚ`) in degree zero.
    pub fn unit(variant: Variant) -> ModuleSeries {
        let mut s = ModuleSeries::zero(variant);
        s.free[0] = Series::monomial(0, 0, 1);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Series::is_zero)
    }

    fn zip(&self, other: &ModuleSeries, f: impl Fn(&Series, &Series) -> Series) -> ModuleSeries {
        assert_eq!(self.variant, other.variant, "series variants differ");
        ModuleSeries {
            variant: self.variant,
            free: [
                f(&self.free[0], &other.free[0]),
                f(&self.free[1], &other.free[1]),
            ],
            torsion: [
                f(&self.torsion[0], &other.torsion[0]),
                f(&self.torsion[1], &other.torsion[1]),
            ],
        }
    }

    pub fn add(&self, other: &ModuleSeries) -> ModuleSeries {
        self.zip(other, Series::add)
    }

    /// Difference; `None` if some coefficient would become negative.
    pub fn sub(&self, other: &ModuleSeries) -> Option<ModuleSeries> {
        let d = self.zip(other, Series::sub);
        d.is_nonnegative().then_some(d)
    }

    pub fn scale(&self, c: i64) -> ModuleSeries {
        ModuleSeries {
            variant: self.variant,
            free: self.free.clone().map(|s| s.scale(c)),
            torsion: self.torsion.clone().map(|s| s.scale(c)),
        }
    }

    /// `⟨z2⟩{j,k}`; the `a`-shift is ignored for the `sl(N)` variant.
    pub fn shift(&self, z2: u8, j: i32, k: i32) -> ModuleSeries {
        let j = if self.variant == Variant::Sln { 0 } else { j };
        let sw = |p: &[Series; 2]| {
            let s = [p[0].shift(j, k), p[1].shift(j, k)];
            if z2 % 2 == 1 {
                [s[1].clone(), s[0].clone()]
            } else {
                s
            }
        };
        ModuleSeries {
            variant: self.variant,
            free: sw(&self.free),
            torsion: sw(&self.torsion),
        }
    }

    /// Tensor product over `ℚ[a]`. Torsion ⊗ torsion has a `Tor` term that
    /// this representation does not model, so it yields `None`.
    pub fn tensor(&self, other: &ModuleSeries) -> Option<ModuleSeries> {
        assert_eq!(self.variant, other.variant, "series variants differ");
        let has_t = |m: &ModuleSeries| m.torsion.iter().any(|s| !s.is_zero());
        if has_t(self) && has_t(other) {
            return None;
        }
        let mut out = ModuleSeries::zero(self.variant);
        for e1 in 0..2 {
            for e2 in 0..2 {
                let e = (e1 + e2) % 2;
                out.free[e] = out.free[e].add(&self.free[e1].mul(&other.free[e2]));
                out.torsion[e] = out.torsion[e]
                    .add(&self.free[e1].mul(&other.torsion[e2]))
                    .add(&self.torsion[e1].mul(&other.free[e2]));
            }
        }
        Some(out)
    }

    /// Smallest `x`-degree of any generator.
    pub fn lowest_k(&self) -> Option<i32> {
        self.free
            .iter()
            .chain(&self.torsion)
            .filter_map(Series::lowest_k)
            .min()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.free
            .iter()
            .chain(&self.torsion)
            .all(Series::is_nonnegative)
    }

    /// Generators with `x`-degree at most `k_max`: `(part, ε, j, k) → mult`,
    /// `part` being `"free"` or `"torsion"`.
    pub fn generators(&self, k_max: i32) -> BTreeMap<(&'static str, u8, i32, i32), i64> {
        let mut out = BTreeMap::new();
        for (part, ss) in [("free", &self.free), ("torsion", &self.torsion)] {
            for (e, s) in ss.iter().enumerate() {
                for ((j, k), c) in s.expand(k_max) {
                    out.insert((part, e as u8, j, k), c);
                }
            }
        }
        out
    }

    /// Graded dimensions `(ε, j, k) → dim` with `j ≤ j_max`, `k ≤ k_max`.
    /// For the `sl(N)` variant `j` is always 0.
    pub fn graded_dims(&self, j_max: i32, k_max: i32) -> BTreeMap<(u8, i32, i32), usize> {
        let mut out: BTreeMap<(u8, i32, i32), usize> = BTreeMap::new();
        for ((part, e, j, k), c) in self.generators(k_max) {
            let c = usize::try_from(c).expect("nonnegative series");
            if part == "torsion" || self.variant == Variant::Sln {
                if j <= j_max {
                    *out.entry((e, j, k)).or_default() += c;
                }
            } else {
                let mut jj = j;
                while jj <= j_max {
                    *out.entry((e, jj, k)).or_default() += c;
                    jj += 2;
                }
            }
        }
        out.retain(|_, d| *d > 0);
        out
    }
}

impl fmt::Display for ModuleSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in 0..2 {
            writeln!(
                f,
                "ε={e} free: {}; torsion: {}",
                self.free[e], self.torsion[e]
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let s = Series::geometric(-1, 2).add(&Series::monomial(0, 0, 3));
        assert!(s.sub(&s).is_zero());
        let g = Series::geometric(0, 1).shift(0, 1);
        assert_eq!(
            g.expand(8),
            BTreeMap::from([((0, 2), 1), ((0, 4), 1), ((0, 6), 1), ((0, 8), 1)])
        );
        // (1 − q²)/(1 − q²) = 1.
        let one = Series::geometric(0, 0).sub(&Series::geometric(0, 2));
        assert_eq!(one, Series::monomial(0, 0, 1));
        assert_eq!(one.denominator_power(), 0);
        let sq = Series::geometric(0, 0).mul(&Series::geometric(0, 0));
        assert_eq!(
            sq.expand(4),
            BTreeMap::from([((0, 0), 1), ((0, 2), 2), ((0, 4), 3)])
        );
    }

    #[test]
    fn nonnegativity() {
        assert!(Series::geometric(0, 0).is_nonnegative());
        assert!(!Series::monomial(0, 0, -1).is_nonnegative());
        // 1/(1−q²)² − 3/(1−q²) has coefficients n+1−3, negative at n = 0, 1.
        let s = Series::geometric(0, 0)
            .mul(&Series::geometric(0, 0))
            .sub(&Series::geometric(0, 0).scale(3));
        assert!(!s.is_nonnegative());
        // q⁴/(1−q²)² − 1/(1−q²) is eventually positive but starts at −1.
        let t = Series::geometric(0, 4)
            .mul(&Series::geometric(0, 0))
            .sub(&Series::geometric(0, 0));
        assert!(!t.is_nonnegative());
    }

    #[test]
    fn shifts_swap_parity() {
        let mut m = ModuleSeries::unit(Variant::Triple);
        m.torsion[1] = Series::geometric(-1, 2);
        let back = m.shift(1, 0, 0).shift(1, 0, 0);
        assert_eq!(back, m);
        assert_eq!(m.shift(1, -1, 1).free[1], Series::monomial(-1, 1, 1));
    }
}
