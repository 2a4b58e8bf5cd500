use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use smallvec::SmallVec;

use super::rational::Rat;
use super::AlgError;

/// Exponent vector; index 0 is the variable `a`, indices `1..=m` are `x_1..x_m`.
pub type Exponents = SmallVec<[u16; 8]>;

/// `(a-degree, x-degree)` with `deg a = (2,0)` and `deg x_i = (0,2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bidegree {
    pub a_deg: i32,
    pub x_deg: i32,
}

impl Bidegree {
    pub const fn new(a_deg: i32, x_deg: i32) -> Bidegree {
        Bidegree { a_deg, x_deg }
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.a_deg + o.a_deg, self.x_deg + o.x_deg)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.a_deg - o.a_deg, self.x_deg - o.x_deg)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.a_deg, -self.x_deg)
    }
}

/// A monomial `a^p x^α`, ordered graded-lexicographically with `a < x_1 < ... < x_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Exponents);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn a_power(&self) -> u16 {
        self.0[0]
    }

    pub fn bidegree(&self) -> Bidegree {
        let xs: u32 = self.0[1..].iter().map(|&e| e as u32).sum();
        Bidegree::new(2 * self.0[0] as i32, 2 * xs as i32)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(self.0.iter())
                .map(|(b, a)| b - a)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `Q[a, x_1..x_m]` with exact rational coefficients.
///
/// Terms are kept in a map keyed by monomial, so iteration is in increasing
/// graded-lex order and no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Poly {
        Poly::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Rat::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Rat) -> Poly {
        assert_eq!(m.0.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    /// The variable with index `i` (0 is `a`).
    pub fn var(nvars: usize, i: usize) -> Poly {
        Poly::monomial(nvars, Monomial::var(nvars, i), Rat::one())
    }

    pub fn a(nvars: usize) -> Poly {
        Poly::var(nvars, 0)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    fn check(&self, other: &Poly) -> Result<(), AlgError> {
        if self.nvars != other.nvars {
            return Err(AlgError::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, AlgError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, AlgError> {
        self.check(other)?;
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Bidegree shared by all terms, or `None` for zero or inhomogeneous input.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(Monomial::bidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.bidegree().is_some()
    }

    /// Replaces variables by polynomials; `subs[i] = None` keeps variable `i`.
    /// The result lives in a ring with `target_nvars` variables; kept variables
    /// must have an index below `target_nvars`.
    pub fn substitute(&self, subs: &[Option<Poly>], target_nvars: usize) -> Result<Poly, AlgError> {
        if subs.len() != self.nvars {
            return Err(AlgError::VariableMismatch {
                left: self.nvars,
                right: subs.len(),
            });
        }
        for p in subs.iter().flatten() {
            if p.nvars != target_nvars {
                return Err(AlgError::VariableMismatch {
                    left: p.nvars,
                    right: target_nvars,
                });
            }
        }
        let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); self.nvars];
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target_nvars, c.clone());
            let mut kept = Monomial::one(target_nvars);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &subs[i] {
                    Some(p) => {
                        let cache = &mut powers[i];
                        while cache.len() <= e as usize {
                            let next = match cache.last() {
                                None => Poly::one(target_nvars),
                                Some(last) => last * p,
                            };
                            cache.push(next);
                        }
                        term = &term * &cache[e as usize];
                    }
                    None => {
                        if i >= target_nvars {
                            return Err(AlgError::VariableMismatch {
                                left: i + 1,
                                right: target_nvars,
                            });
                        }
                        kept.0[i] += e;
                    }
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm.mul(&kept), tc);
            }
        }
        Ok(out)
    }

    /// Sets `a` to the given constant.
    pub fn set_a(&self, value: &Rat) -> Poly {
        let mut subs = vec![None; self.nvars];
        subs[0] = Some(Poly::constant(self.nvars, value.clone()));
        self.substitute(&subs, self.nvars).expect("same ring")
    }

    /// Moves the polynomial into a ring with `nvars` variables, sending
    /// variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(nvars);
            for (i, &k) in m.0.iter().enumerate() {
                if k != 0 {
                    e.0[map[i]] += k;
                }
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Exact division; fails if `q` does not divide `self`.
    pub fn divide_exact(&self, q: &Poly) -> Result<Poly, AlgError> {
        self.check(q)?;
        let (lm, lc) = match q.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(AlgError::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Err(AlgError::NotDivisible);
            }
            let t = Poly::monomial(self.nvars, lm.quotient_of(m), c / &lc);
            rem = &rem - &(&t * q);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// Evaluates at a rational point (one value per variable).
    pub fn eval_rat(&self, point: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    v = &v * &point[i];
                }
            }
            total = &total + &v;
        }
        total
    }

    /// If the polynomial is a nonzero linear form in the `x` variables,
    /// returns its coefficients by variable index.
    pub fn as_linear_form(&self) -> Option<Vec<(usize, Rat)>> {
        if self.is_zero() {
            return None;
        }
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if m.a_power() != 0 || m.total_degree() != 1 {
                return None;
            }
            let i = m.0.iter().position(|&e| e == 1)?;
            out.push((i, c.clone()));
        }
        Some(out)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomials over the same ring")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_add(&-rhs).expect("polynomials over the same ring")
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomials over the same ring")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Rat::from_int(-1))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if i == 0 {
                    "a".to_string()
                } else {
                    format!("x{i}")
                };
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All exponent vectors of total degree `d` in `m` variables, in a fixed
/// (reverse-lexicographic) order.
pub fn exponent_vectors(m: usize, d: u32) -> Vec<Exponents> {
    fn rec(m: usize, d: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if prefix.len() + 1 == m {
            prefix.push(d as u16);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e as u16);
            rec(m, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if d == 0 {
            out.push(Exponents::new());
        }
        return out;
    }
    rec(m, d, &mut Exponents::new(), &mut out);
    out
}

/// Monomials `a^p x^α` with `|α| = d` in a ring with `nvars` variables.
pub fn monomials_of_degree(nvars: usize, p: u32, d: u32) -> Vec<Monomial> {
    exponent_vectors(nvars - 1, d)
        .into_iter()
        .map(|x| {
            let mut e = Exponents::with_capacity(nvars);
            e.push(p as u16);
            e.extend_from_slice(&x);
            Monomial(e)
        })
        .collect()
}

/// `g(e1, e2)` with `g(x+y, xy) = x^{N+1} + y^{N+1}`, in a three-variable ring
/// where variable 1 is `e1` and variable 2 is `e2` (variable 0 is unused).
pub fn newton_g(n: u32) -> Poly {
    assert!(n >= 1);
    let e1 = Poly::var(3, 1);
    let e2 = Poly::var(3, 2);
    let mut prev = Poly::constant(3, Rat::from_int(2));
    let mut cur = e1.clone();
    for _ in 1..=n {
        let next = &(&e1 * &cur) - &(&e2 * &prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `(u^{N+1} - v^{N+1}) / (u - v) = Σ_t u^t v^{N-t}` for variable indices `u`, `v`.
/// For `u == v` this is `(N+1) u^N`.
pub fn quotient_pi(nvars: usize, u: usize, v: usize, n: u32) -> Poly {
    let mut out = Poly::zero(nvars);
    for t in 0..=n {
        let mut m = Monomial::one(nvars);
        m.0[u] += t as u16;
        m.0[v] += (n - t) as u16;
        out.add_term(m, Rat::one());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(nv: usize, i: usize) -> Poly {
        Poly::var(nv, i)
    }

    #[test]
    fn degree_additivity() {
        let p = &Poly::a(3) * &x(3, 1);
        assert_eq!(p.bidegree(), Some(Bidegree::new(2, 2)));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn set_a_specializes() {
        let p = &Poly::a(2) * &(&x(2, 1) * &x(2, 1));
        assert_eq!(p.set_a(&Rat::one()), &x(2, 1) * &x(2, 1));
    }

    #[test]
    fn exact_division() {
        let nv = 3;
        let num = &x(nv, 1).pow(3) - &x(nv, 2).pow(3);
        let den = &x(nv, 1) - &x(nv, 2);
        assert_eq!(num.divide_exact(&den).unwrap(), quotient_pi(nv, 1, 2, 2));
        let nv = 4;
        let num = &x(nv, 1).pow(3) - &x(nv, 2).pow(3);
        assert_eq!(
            num.divide_exact(&(&x(nv, 1) - &x(nv, 3))),
            Err(AlgError::NotDivisible)
        );
    }

    #[test]
    fn newton_small_cases() {
        let e1 = Poly::var(3, 1);
        let e2 = Poly::var(3, 2);
        assert_eq!(newton_g(1), &(&e1 * &e1) - &e2.scale(&Rat::from_int(2)));
        assert_eq!(
            newton_g(2),
            &e1.pow(3) - &(&e1 * &e2).scale(&Rat::from_int(3))
        );
    }

    #[test]
    fn diagonal_quotient() {
        assert_eq!(
            quotient_pi(2, 1, 1, 3),
            Poly::monomial(2, Monomial(SmallVec::from_slice(&[0, 3])), Rat::from_int(4))
        );
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(exponent_vectors(3, 2).len(), 6);
        assert_eq!(exponent_vectors(0, 0).len(), 1);
        assert!(exponent_vectors(0, 1).is_empty());
        assert_eq!(monomials_of_degree(3, 1, 2).len(), 3);
    }

    #[test]
    fn display() {
        let p = &(&Poly::a(3) * &x(3, 2)) - &x(3, 1).scale(&Rat::from_int(2));
        assert_eq!(p.to_string(), "a*x2 - 2*x1");
    }
}
