//! Braid words, transverse Markov moves, resolutions and resolved-braid combinatorics.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("malformed braid text: {0}")]
    Malformed(String),
    #[error("generator index {index} out of range for {strands} strands")]
    OutOfRange { index: i64, strands: usize },
    #[error("zero is not a braid generator")]
    ZeroLetter,
    #[error("move not applicable: {0}")]
    Inapplicable(String),
    #[error("resolution has length {got}, expected {expected}")]
    ResolutionLength { got: usize, expected: usize },
}

/// A braid word on `strands` strands; letter `±i` stands for `σ_i^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<BraidWord, BraidError> {
        if strands == 0 {
            return Err(BraidError::Malformed(
                "a braid needs at least one strand".into(),
            ));
        }
        for &l in &letters {
            if l == 0 {
                return Err(BraidError::ZeroLetter);
            }
            if l.unsigned_abs() as usize >= strands {
                return Err(BraidError::OutOfRange {
                    index: l as i64,
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// The transverse unknot `U_m`: `U_0` stabilized negatively `m` times.
    pub fn unknot(m: usize) -> BraidWord {
        BraidWord {
            strands: m + 1,
            letters: (1..=m as i32).map(|i| -i).collect(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn crossings(&self) -> usize {
        self.letters.len()
    }

    pub fn positive_crossings(&self) -> usize {
        self.letters.iter().filter(|&&l| l > 0).count()
    }

    pub fn negative_crossings(&self) -> usize {
        self.letters.iter().filter(|&&l| l < 0).count()
    }

    pub fn writhe(&self) -> i32 {
        self.positive_crossings() as i32 - self.negative_crossings() as i32
    }

    pub fn self_linking(&self) -> i32 {
        self.writhe() - self.strands as i32
    }

    pub fn apply(&self, mv: &Move) -> Result<BraidWord, BraidError> {
        transverse_move(self, mv)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={};", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

fn split_header(text: &str) -> Result<(usize, &str), BraidError> {
    let text = text.trim();
    let (head, body) = text
        .split_once(';')
        .ok_or_else(|| BraidError::Malformed(format!("missing ';' in {text:?}")))?;
    let b = head
        .trim()
        .strip_prefix("b=")
        .ok_or_else(|| BraidError::Malformed(format!("missing 'b=' in {text:?}")))?
        .trim()
        .parse::<usize>()
        .map_err(|e| BraidError::Malformed(format!("strand count: {e}")))?;
    Ok((b, body))
}

impl FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(text: &str) -> Result<BraidWord, BraidError> {
        let (b, body) = split_header(text)?;
        let letters = body
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|e| BraidError::Malformed(format!("letter {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for &l in &letters {
            if l == 0 {
                return Err(BraidError::ZeroLetter);
            }
            if l.unsigned_abs() as usize >= b.max(1) {
                return Err(BraidError::OutOfRange {
                    index: l,
                    strands: b,
                });
            }
        }
        BraidWord::new(b, letters.into_iter().map(|l| l as i32).collect())
    }
}

pub fn parse_braid(text: &str) -> Result<BraidWord, BraidError> {
    text.parse()
}

/// Moves on braid words. Only `BraidRelation`, `InsertPair`, `Conjugate`,
/// `StabPos` and `DestabPos` preserve the transverse type; `StabNeg` is
/// included for stabilization experiments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    /// At `site`: cancels `σ_i σ_i^{-1}`, applies `σ_iσ_jσ_i = σ_jσ_iσ_j` for
    /// adjacent same-sign generators, or commutes distant generators.
    BraidRelation {
        site: usize,
    },
    /// Inserts `σ_i σ_i^{-1}` before position `site`.
    InsertPair {
        site: usize,
        letter: i32,
    },
    /// `η^{-1} · word · η` for a single generator `η`.
    Conjugate {
        eta: i32,
    },
    StabPos,
    DestabPos,
    StabNeg,
}

pub fn transverse_move(b: &BraidWord, mv: &Move) -> Result<BraidWord, BraidError> {
    let w = &b.letters;
    match *mv {
        Move::BraidRelation { site } => {
            if site + 1 >= w.len() {
                return Err(BraidError::Inapplicable(format!(
                    "no two letters at site {site}"
                )));
            }
            let (x, y) = (w[site], w[site + 1]);
            let mut out = w.clone();
            if x == -y {
                out.drain(site..site + 2);
            } else if site + 2 < w.len()
                && w[site + 2] == x
                && (x.abs() - y.abs()).abs() == 1
                && x.signum() == y.signum()
            {
                out[site] = y;
                out[site + 1] = x;
                out[site + 2] = y;
            } else if (x.abs() - y.abs()).abs() >= 2 {
                out.swap(site, site + 1);
            } else {
                return Err(BraidError::Inapplicable(format!(
                    "no relation at site {site}"
                )));
            }
            BraidWord::new(b.strands, out)
        }
        Move::InsertPair { site, letter } => {
            if site > w.len() {
                return Err(BraidError::Inapplicable(format!(
                    "site {site} beyond word end"
                )));
            }
            let mut out = w.clone();
            out.splice(site..site, [letter, -letter]);
            BraidWord::new(b.strands, out)
        }
        Move::Conjugate { eta } => {
            let mut out = Vec::with_capacity(w.len() + 2);
            out.push(-eta);
            out.extend_from_slice(w);
            out.push(eta);
            BraidWord::new(b.strands, out)
        }
        Move::StabPos | Move::StabNeg => {
            let s = b.strands as i32;
            let mut out = w.clone();
            out.push(if *mv == Move::StabPos { s } else { -s });
            BraidWord::new(b.strands + 1, out)
        }
        Move::DestabPos => {
            let top = b.strands as i32 - 1;
            let ok = b.strands >= 2
                && w.last() == Some(&top)
                && w[..w.len() - 1].iter().all(|l| l.abs() < top);
            if !ok {
                return Err(BraidError::Inapplicable(
                    "word is not of the form w·σ_{b-1} with w on b-1 strands".into(),
                ));
            }
            BraidWord::new(b.strands - 1, w[..w.len() - 1].to_vec())
        }
    }
}

/// A resolved braid: a word in the wide-edge letters `τ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResolvedWord {
    pub strands: usize,
    pub letters: Vec<usize>,
    pub closed: bool,
}

impl ResolvedWord {
    pub fn closed(strands: usize, letters: Vec<usize>) -> ResolvedWord {
        assert!(
            letters.iter().all(|&l| l >= 1 && l < strands),
            "letter out of range"
        );
        ResolvedWord {
            strands,
            letters,
            closed: true,
        }
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().sum()
    }

    /// Least rotation of the letter sequence (closures are rotation invariant).
    pub fn cyclic_normal_form(&self) -> ResolvedWord {
        let n = self.letters.len();
        let best = (0..n.max(1))
            .map(|r| {
                let mut v = self.letters.clone();
                v.rotate_left(r % n.max(1));
                v
            })
            .min()
            .unwrap_or_default();
        ResolvedWord {
            strands: self.strands,
            letters: best,
            closed: self.closed,
        }
    }
}

impl fmt::Display for ResolvedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={};", self.strands)?;
        for l in &self.letters {
            write!(f, " t{l}")?;
        }
        Ok(())
    }
}

impl FromStr for ResolvedWord {
    type Err = BraidError;

    fn from_str(text: &str) -> Result<ResolvedWord, BraidError> {
        let (b, body) = split_header(text)?;
        let mut letters = Vec::new();
        for t in body.split_whitespace() {
            let i = t
                .strip_prefix('t')
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| BraidError::Malformed(format!("resolved letter {t:?}")))?;
            if i == 0 {
                return Err(BraidError::ZeroLetter);
            }
            if i >= b {
                return Err(BraidError::OutOfRange {
                    index: i as i64,
                    strands: b,
                });
            }
            letters.push(i);
        }
        Ok(ResolvedWord {
            strands: b,
            letters,
            closed: true,
        })
    }
}

/// Resolves every crossing: `r[c] = 1` gives the wide edge `τ_{|i|}`, `0` the
/// oriented resolution. Returns the resolved word and `(m₊, m₋)`.
pub fn resolve(b: &BraidWord, r: &[u8]) -> Result<(ResolvedWord, usize, usize), BraidError> {
    if r.len() != b.crossings() {
        return Err(BraidError::ResolutionLength {
            got: r.len(),
            expected: b.crossings(),
        });
    }
    let mut letters = Vec::new();
    let (mut mp, mut mm) = (0, 0);
    for (&l, &bit) in b.letters.iter().zip(r) {
        if bit == 1 {
            letters.push(l.unsigned_abs() as usize);
            if l > 0 {
                mp += 1;
            } else {
                mm += 1;
            }
        }
    }
    Ok((
        ResolvedWord {
            strands: b.strands,
            letters,
            closed: true,
        },
        mp,
        mm,
    ))
}

/// One vertex of the cube of resolutions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeVertex {
    /// Resolution per crossing, in word order.
    pub resolution: Vec<u8>,
    pub m_plus: usize,
    pub m_minus: usize,
    pub writhe: i32,
}

impl CubeVertex {
    /// Vertex index: the resolution read as a little-endian binary number.
    pub fn index(&self) -> usize {
        self.resolution
            .iter()
            .enumerate()
            .map(|(c, &r)| (r as usize) << c)
            .sum()
    }

    pub fn homological_degree(&self) -> i32 {
        self.m_minus as i32 - self.m_plus as i32
    }

    /// `(ℤ₂ shift, a-shift, x-shift)` of the vertex factorization:
    /// `⟨w⟩{w, (N-1)w + m₊ - m₋}`.
    pub fn shift(&self, n: u32) -> (u8, i32, i32) {
        let w = self.writhe;
        (
            w.rem_euclid(2) as u8,
            w,
            (n as i32 - 1) * w + self.m_plus as i32 - self.m_minus as i32,
        )
    }
}

pub fn cube(b: &BraidWord) -> Vec<CubeVertex> {
    let c = b.crossings();
    (0..1usize << c)
        .map(|v| {
            let resolution: Vec<u8> = (0..c).map(|k| ((v >> k) & 1) as u8).collect();
            let (_, m_plus, m_minus) = resolve(b, &resolution).expect("length matches");
            CubeVertex {
                resolution,
                m_plus,
                m_minus,
                writhe: b.writhe(),
            }
        })
        .collect()
}

/// Elementary isotopies of closed resolved braids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WordMove {
    /// Swap letters `pos`, `pos+1` (they must differ by at least 2).
    Swap(usize),
    /// Cyclic rotation moving the first `k` letters to the end.
    Rotate(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum InductionCase {
    Empty,
    /// Normalized word is `word · τ_i` with `i` larger than every letter of `word`.
    CaseA {
        word: Vec<usize>,
        i: usize,
    },
    /// Normalized word is `word · τ_j τ_j`.
    CaseB {
        word: Vec<usize>,
        j: usize,
    },
    /// Normalized word is `word · τ_j τ_{j-1} τ_j`.
    CaseC {
        word: Vec<usize>,
        j: usize,
    },
}

impl InductionCase {
    /// The full normalized letter sequence.
    pub fn normalized(&self) -> Vec<usize> {
        match self {
            InductionCase::Empty => Vec::new(),
            InductionCase::CaseA { word, i } => [word.as_slice(), &[*i]].concat(),
            InductionCase::CaseB { word, j } => [word.as_slice(), &[*j, *j]].concat(),
            InductionCase::CaseC { word, j } => [word.as_slice(), &[*j, *j - 1, *j]].concat(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Induction {
    pub case: InductionCase,
    pub trace: Vec<WordMove>,
}

pub fn replay(letters: &[usize], trace: &[WordMove]) -> Result<Vec<usize>, BraidError> {
    let mut w = letters.to_vec();
    for mv in trace {
        match *mv {
            WordMove::Swap(p) => {
                if p + 1 >= w.len() || w[p].abs_diff(w[p + 1]) < 2 {
                    return Err(BraidError::Inapplicable(format!("swap at {p} in {w:?}")));
                }
                w.swap(p, p + 1);
            }
            WordMove::Rotate(k) => {
                if !w.is_empty() {
                    let len = w.len();
                    w.rotate_left(k % len);
                }
            }
        }
    }
    Ok(w)
}

struct Normalizer<'a> {
    w: Vec<usize>,
    trace: Vec<WordMove>,
    pick: &'a mut dyn FnMut(usize) -> usize,
}

impl Normalizer<'_> {
    fn swap(&mut self, p: usize) {
        debug_assert!(self.w[p].abs_diff(self.w[p + 1]) >= 2);
        self.w.swap(p, p + 1);
        self.trace.push(WordMove::Swap(p));
    }

    fn rotate(&mut self, k: usize) {
        let n = self.w.len();
        if n > 0 && !k.is_multiple_of(n) {
            self.w.rotate_left(k % n);
            self.trace.push(WordMove::Rotate(k % n));
        }
    }

    /// `w[lo] = w[hi] = j` with only smaller letters between. Returns the start
    /// and length of a `τ_jτ_j` or `τ_jτ_{j-1}τ_j` segment.
    fn focus(&mut self, mut lo: usize, mut hi: usize, j: usize) -> (usize, usize) {
        let inner: Vec<usize> = (lo + 1..hi).filter(|&p| self.w[p] + 1 == j).collect();
        match inner.len() {
            0 => {
                while lo + 1 < hi {
                    self.swap(lo);
                    lo += 1;
                }
                (lo, 2)
            }
            1 => {
                let q = inner[0];
                while lo + 1 < q {
                    self.swap(lo);
                    lo += 1;
                }
                while hi > q + 1 {
                    self.swap(hi - 1);
                    hi -= 1;
                }
                (lo, 3)
            }
            n => {
                let t = (self.pick)(n - 1) % (n - 1);
                self.focus(inner[t], inner[t + 1], j - 1)
            }
        }
    }
}

/// Normalizes a closed resolved braid into one of the three induction cases
/// (or the empty word) by `I₁` commutations and `I₂` rotations.
pub fn induction_case(g: &ResolvedWord) -> Induction {
    induction_case_with(g, &mut |_| 0)
}

/// As [`induction_case`], with `pick(n)` choosing among `n` equally valid
/// options (used to randomize the normalization path).
pub fn induction_case_with(g: &ResolvedWord, pick: &mut dyn FnMut(usize) -> usize) -> Induction {
    let mut nz = Normalizer {
        w: g.letters.clone(),
        trace: Vec::new(),
        pick,
    };
    let n = nz.w.len();
    let Some(&i) = nz.w.iter().max() else {
        return Induction {
            case: InductionCase::Empty,
            trace: Vec::new(),
        };
    };
    let occ: Vec<usize> = (0..n).filter(|&p| nz.w[p] == i).collect();
    if occ.len() == 1 {
        nz.rotate(occ[0] + 1);
        let word = nz.w[..n - 1].to_vec();
        return Induction {
            case: InductionCase::CaseA { word, i },
            trace: nz.trace,
        };
    }
    let t = (nz.pick)(occ.len()) % occ.len();
    let (start, next) = (occ[t], occ[(t + 1) % occ.len()]);
    let gap = (next + n - start) % n;
    nz.rotate(start);
    let (s, len) = nz.focus(0, gap, i);
    nz.rotate(s + len);
    let word = nz.w[..n - len].to_vec();
    let tail = &nz.w[n - len..];
    let case = if len == 2 {
        InductionCase::CaseB { word, j: tail[0] }
    } else {
        InductionCase::CaseC { word, j: tail[0] }
    };
    Induction {
        case,
        trace: nz.trace,
    }
}

/// All closed resolved braids on `strands` strands with weight at most
/// `max_weight`, one representative per rotation class.
pub fn enumerate_resolved(strands: usize, max_weight: usize) -> Vec<ResolvedWord> {
    let mut out = std::collections::BTreeSet::new();
    let mut stack = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        let weight: usize = w.iter().sum();
        out.insert(ResolvedWord::closed(strands, w.clone()).cyclic_normal_form());
        for l in 1..strands {
            if weight + l <= max_weight {
                let mut next = w.clone();
                next.push(l);
                stack.push(next);
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let b: BraidWord = "b=3; 1 -2".parse().unwrap();
        assert_eq!(b.letters(), &[1, -2]);
        assert_eq!(b.to_string(), "b=3; 1 -2");
        assert_eq!("b=1;".parse::<BraidWord>().unwrap().to_string(), "b=1;");
        assert!(matches!(
            "b=2; 3".parse::<BraidWord>(),
            Err(BraidError::OutOfRange { .. })
        ));
        assert_eq!("b=2; 0".parse::<BraidWord>(), Err(BraidError::ZeroLetter));
        assert!("2; 1".parse::<BraidWord>().is_err());
        let r: ResolvedWord = "b=3; t1 t2".parse().unwrap();
        assert_eq!(r.to_string(), "b=3; t1 t2");
    }

    #[test]
    fn self_linking_values() {
        assert_eq!(BraidWord::unknot(0).self_linking(), -1);
        assert_eq!("b=2; 1".parse::<BraidWord>().unwrap().self_linking(), -1);
        assert_eq!("b=2; -1".parse::<BraidWord>().unwrap().self_linking(), -3);
    }

    #[test]
    fn moves() {
        let u0 = BraidWord::unknot(0);
        assert_eq!(u0.apply(&Move::StabPos).unwrap().to_string(), "b=2; 1");
        assert_eq!(u0.apply(&Move::StabNeg).unwrap(), BraidWord::unknot(1));
        let b: BraidWord = "b=3; 1 2 1".parse().unwrap();
        assert_eq!(
            b.apply(&Move::BraidRelation { site: 0 })
                .unwrap()
                .to_string(),
            "b=3; 2 1 2"
        );
        let b: BraidWord = "b=2; 1 -1 1".parse().unwrap();
        assert_eq!(
            b.apply(&Move::BraidRelation { site: 0 })
                .unwrap()
                .to_string(),
            "b=2; 1"
        );
        let b: BraidWord = "b=2; 1".parse().unwrap();
        assert_eq!(b.apply(&Move::DestabPos).unwrap(), u0);
        assert!(BraidWord::unknot(1).apply(&Move::DestabPos).is_err());
    }

    #[test]
    fn resolution_and_cube() {
        let b: BraidWord = "b=2; -1 -1".parse().unwrap();
        let (r, mp, mm) = resolve(&b, &[1, 1]).unwrap();
        assert_eq!((r.letters.as_slice(), mp, mm), (&[1usize, 1][..], 0, 2));
        let b: BraidWord = "b=2; 1".parse().unwrap();
        let degs: Vec<i32> = cube(&b).iter().map(|v| v.homological_degree()).collect();
        assert_eq!(degs, vec![0, -1]);
    }

    #[test]
    fn induction_examples() {
        let g = ResolvedWord::closed(2, vec![1]);
        assert_eq!(
            induction_case(&g).case,
            InductionCase::CaseA { word: vec![], i: 1 }
        );
        let g = ResolvedWord::closed(2, vec![1, 1]);
        assert_eq!(
            induction_case(&g).case,
            InductionCase::CaseB { word: vec![], j: 1 }
        );
        let g = ResolvedWord::closed(3, vec![2, 1, 2]);
        assert_eq!(
            induction_case(&g).case,
            InductionCase::CaseC { word: vec![], j: 2 }
        );
    }

    #[test]
    fn deep_focus() {
        let g = ResolvedWord::closed(4, vec![3, 2, 1, 2, 3, 1]);
        let ind = induction_case(&g);
        assert_eq!(
            replay(&g.letters, &ind.trace).unwrap(),
            ind.case.normalized()
        );
    }
}
