//! The trace map `T: F_*ω → ω` on `ω = F_p[y_1, …, y_n]·dy`.
//!
//! On monomials `T(y^i dy) = y^{(i - (p-1)·1)/p} dy` when every `i_j ≡ p-1`
//! (mod `p`) and `0` otherwise. Coefficients live in `F_p`, where Frobenius is
//! the identity, so they pass through unchanged.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::arith::{check_prime, small_pow};
use crate::error::{Error, Result};

/// A form `Σ c_i y^i dy` with coefficients in `F_p`. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialForm {
    p: u64,
    n: usize,
    terms: BTreeMap<Vec<u64>, u64>,
}

impl MonomialForm {
    pub fn zero(p: u64, n: usize) -> Self {
        MonomialForm {
            p,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(p: u64, exponent: Vec<u64>, coeff: u64) -> Self {
        let mut f = Self::zero(p, exponent.len());
        f.add_term(exponent, coeff);
        f
    }

    pub fn from_terms(p: u64, n: usize, terms: impl IntoIterator<Item = (Vec<u64>, u64)>) -> Result<Self> {
        check_prime(p)?;
        let mut f = Self::zero(p, n);
        for (a, c) in terms {
            if a.len() != n {
                return Err(Error::Shape(format!("exponent of length {} in {n} variables", a.len())));
            }
            f.add_term(a, c);
        }
        Ok(f)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u64>, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exponent: Vec<u64>, coeff: u64) {
        let c = coeff % self.p;
        if c == 0 {
            return;
        }
        let p = self.p;
        let entry = self.terms.entry(exponent);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (*o.get() + c) % p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MonomialForm) -> MonomialForm {
        let mut out = self.clone();
        for (a, &c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        out
    }

    /// `f·η`, reading `self` as the function `f` (its `dy` is ignored).
    pub fn mul(&self, eta: &MonomialForm) -> MonomialForm {
        let mut out = Self::zero(self.p, self.n);
        for (a, &c) in &self.terms {
            for (b, &d) in &eta.terms {
                let ab = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(ab, (c as u128 * d as u128 % self.p as u128) as u64);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MonomialForm {
        let mut acc = Self::monomial(self.p, vec![0; self.n], 1);
        for _ in 0..k {
            acc = self.mul(&acc);
        }
        acc
    }

    /// `f^{p^e}`. In characteristic `p` this multiplies every exponent by
    /// `p^e` and keeps the coefficients.
    pub fn frobenius_power(&self, e: u32) -> MonomialForm {
        let q = self.p.pow(e);
        let mut out = Self::zero(self.p, self.n);
        for (a, &c) in &self.terms {
            out.add_term(a.iter().map(|x| x * q).collect(), c);
        }
        out
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(|a| a.iter().sum()).max()
    }

    /// Parses text such as `dy`, `y^3 dy`, `2*y1^2*y2 dy + y3 dy` or `0`.
    /// With `n = None` the number of variables is the largest index used
    /// (a bare `y` counts as `y1`).
    pub fn parse(text: &str, p: u64, n: Option<usize>) -> Result<Self> {
        check_prime(p)?;
        let bad = |msg: String| Error::InvalidArgument(format!("cannot parse form {text:?}: {msg}"));
        let text = text.trim();
        let mut parsed: Vec<(BTreeMap<usize, u64>, u64)> = Vec::new();
        let mut max_var = 0usize;
        if text != "0" {
            for raw in text.split('+') {
                let term = raw.trim();
                let body = term
                    .strip_suffix("dy")
                    .ok_or_else(|| bad(format!("term {term:?} does not end in dy")))?
                    .trim()
                    .trim_end_matches('*')
                    .trim();
                let mut coeff = 1u64;
                let mut exps = BTreeMap::new();
                for factor in body.split(|c: char| c == '*' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                    if let Ok(c) = factor.parse::<u64>() {
                        coeff = coeff * (c % p) % p;
                        continue;
                    }
                    let rest = factor
                        .strip_prefix('y')
                        .ok_or_else(|| bad(format!("unexpected factor {factor:?}")))?;
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e.parse::<u64>().map_err(|_| bad(format!("bad exponent in {factor:?}")))?),
                        None => (rest, 1),
                    };
                    let index = if var.is_empty() {
                        1
                    } else {
                        var.parse::<usize>()
                            .ok()
                            .filter(|&i| i >= 1)
                            .ok_or_else(|| bad(format!("bad variable in {factor:?}")))?
                    };
                    max_var = max_var.max(index);
                    *exps.entry(index).or_insert(0) += exp;
                }
                parsed.push((exps, coeff));
            }
        }
        let n = match n {
            Some(n) if n < max_var => return Err(bad(format!("variable y{max_var} with only {n} variables"))),
            Some(n) => n,
            None => max_var.max(1),
        };
        let mut f = Self::zero(p, n);
        for (exps, c) in parsed {
            let mut a = vec![0u64; n];
            for (i, x) in exps {
                a[i - 1] = x;
            }
            f.add_term(a, c);
        }
        Ok(f)
    }
}

impl fmt::Display for MonomialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, &c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if c != 1 {
                factors.push(c.to_string());
            }
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let var = if self.n == 1 { "y".to_string() } else { format!("y{}", i + 1) };
                factors.push(if x == 1 { var } else { format!("{var}^{x}") });
            }
            if factors.is_empty() {
                write!(f, "dy")?;
            } else {
                write!(f, "{} dy", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn trace_with(f: &MonomialForm, q: u64) -> MonomialForm {
    let mut out = MonomialForm::zero(f.p, f.n);
    for (a, &c) in &f.terms {
        if a.iter().all(|&x| x % q == q - 1) {
            out.add_term(a.iter().map(|&x| (x + 1 - q) / q).collect(), c);
        }
    }
    out
}

pub fn trace(f: &MonomialForm) -> MonomialForm {
    trace_with(f, f.p)
}

/// `T^e` by the direct rule with `p^e` in place of `p`.
pub fn trace_iterate_direct(f: &MonomialForm, e: u32) -> MonomialForm {
    trace_with(f, f.p.pow(e))
}

/// `T^e` as the `e`-fold composition of [`trace`]; `e = 0` is the identity.
pub fn trace_iterate(f: &MonomialForm, e: u32) -> MonomialForm {
    let mut g = f.clone();
    for _ in 0..e {
        if g.is_zero() {
            break;
        }
        g = trace(&g);
    }
    debug_assert_eq!(g, trace_iterate_direct(f, e));
    g
}

fn in_ideal(a: &[u64], generators: &[Vec<u64>]) -> bool {
    generators.iter().any(|g| g.iter().zip(a).all(|(gi, ai)| gi <= ai))
}

/// Exponents in `n` variables of total degree `<= d`.
fn monomials_up_to(n: usize, d: u64) -> Vec<Vec<u64>> {
    fn go(n: usize, d: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=d {
            prefix.push(x);
            go(n, d - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Checks `T^e(F^e_*(J^{[p^e]}ω)) = J·ω` for the monomial ideal `J` on the
/// part of total degree `<= cap`.
///
/// Every monomial of `J^{[p^e]}ω` of degree `<= cap` must map into `J·ω` or to
/// zero, and every monomial of `J·ω` of degree `<= (cap - n(p^e-1))/p^e` must
/// be the image of one of them. The second bound is the largest for which the
/// preimage `y^{p^e a + (p^e-1)·1}` still has degree `<= cap`.
///
/// Fails with [`Error::CapTooSmall`] when not even the lowest-degree
/// generator of `J` can be reached.
pub fn trace_ideal_check(generators: &[Vec<u64>], n: usize, e: u32, p: u64, cap: u64) -> Result<bool> {
    check_prime(p)?;
    if generators.is_empty() {
        return Err(Error::InvalidArgument("the ideal needs at least one generator".into()));
    }
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(Error::Shape(format!("generator of length {} in {n} variables", g.len())));
    }
    let q = small_pow(p, e).ok_or_else(|| Error::InvalidArgument("p^e too large".into()))? as u64;
    let min_gen = generators.iter().map(|g| g.iter().sum::<u64>()).min().unwrap_or(0);
    let needed = n as u64 * (q - 1) + q * min_gen;
    if needed > cap {
        return Err(Error::CapTooSmall { cap, needed });
    }
    let frob: Vec<Vec<u64>> = generators.iter().map(|g| g.iter().map(|x| x * q).collect()).collect();

    let mut images = BTreeSet::new();
    for a in monomials_up_to(n, cap) {
        if !in_ideal(&a, &frob) {
            continue;
        }
        let image = trace_iterate(&MonomialForm::monomial(p, a, 1), e);
        for b in image.terms.keys() {
            if !in_ideal(b, generators) {
                return Ok(false);
            }
            images.insert(b.clone());
        }
    }

    let target_degree = (cap - n as u64 * (q - 1)) / q;
    for a in monomials_up_to(n, target_degree) {
        if in_ideal(&a, generators) && !images.contains(&a) {
            return Ok(false);
        }
    }
    Ok(true)
}
