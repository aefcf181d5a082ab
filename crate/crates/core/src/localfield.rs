//! The local field `K = F_q((t))` and its residue field `GF(q)`.
//!
//! `GF(q)` is realized as `GF(p)[x]/(modulus)` with basis `ε_j = x^j`. An
//! element is identified with its *code* `a_0 + a_1 p + … + a_{c-1} p^{c-1}`,
//! where `a_j` are its coordinates. The code of `g ∈ GF(q)` is exactly the
//! `n < q` with `u(n)·𝔭 = g`, so codes double as coset digits.
//!
//! Elements of `K` are Laurent polynomials in the prime element `𝔭 = t`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{is_prime, CycField, CycNum, Rational};
use crate::error::{domain, Error, Result};

/// Residue fields larger than this are rejected; step-function tables grow
/// like `q^{J+k}` and the multiplication tables like `q²`.
pub const MAX_Q: u64 = 256;

/// Serializable description of `GF(q)`: `q = p^c`, reduction polynomial
/// coefficients listed low to high.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub c: u32,
    pub modulus: Vec<u32>,
}

impl FieldParams {
    /// Validates primality, monicity and irreducibility of the modulus.
    pub fn new(p: u32, c: u32, modulus: Vec<u32>) -> Result<Self> {
        let params = FieldParams { p, c, modulus };
        params.validate()?;
        Ok(params)
    }

    /// Built-in fields: `q2 q3 q4 q5 q7 q8 q9`.
    pub fn preset(name: &str) -> Result<Self> {
        let (p, c, modulus) = match name {
            "q2" => (2, 1, vec![0, 1]),
            "q3" => (3, 1, vec![0, 1]),
            "q4" => (2, 2, vec![1, 1, 1]),
            "q5" => (5, 1, vec![0, 1]),
            "q7" => (7, 1, vec![0, 1]),
            "q8" => (2, 3, vec![1, 1, 0, 1]),
            "q9" => (3, 2, vec![1, 0, 1]),
            _ => return domain(format!("unknown field preset '{name}'")),
        };
        FieldParams::new(p, c, modulus)
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.c)
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.p as u64) {
            return domain(format!("p = {} is not prime", self.p));
        }
        if self.c == 0 {
            return domain("c must be at least 1");
        }
        if self.q() > MAX_Q {
            return domain(format!(
                "q = {} exceeds the supported maximum {MAX_Q}",
                self.q()
            ));
        }
        if self.modulus.len() != self.c as usize + 1 {
            return domain(format!(
                "modulus must have degree c = {} ({} coefficients)",
                self.c,
                self.c + 1
            ));
        }
        if self.modulus.iter().any(|&a| a >= self.p) {
            return domain("modulus coefficients must lie in [0, p)");
        }
        if *self.modulus.last().unwrap() != 1 {
            return domain("modulus must be monic");
        }
        if !is_irreducible(&self.modulus, self.p) {
            return domain(format!(
                "modulus {:?} is reducible over GF({})",
                self.modulus, self.p
            ));
        }
        Ok(())
    }
}

/// Remainder of `a` modulo the monic polynomial `b` over `GF(p)`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bi) in b.iter().enumerate() {
                let x = &mut r[shift + i];
                *x = (*x + p - (lead * bi) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g: Vec<u32> = (0..d)
                .scan(code, |rest, _| {
                    let a = (*rest % p as u64) as u32;
                    *rest /= p as u64;
                    Some(a)
                })
                .collect();
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&a| a == 0) {
                return false;
            }
        }
    }
    true
}

/// An element of the residue field `GF(q)`, stored by its code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfElem(u32);

impl GfElem {
    pub const ZERO: GfElem = GfElem(0);
    pub const ONE: GfElem = GfElem(1);

    pub fn from_code(code: u32) -> Self {
        GfElem(code)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// An element of `K`: `Σ_i digits[i]·t^{val+i}`.
///
/// Normalized: the first and last digits are nonzero; zero has no digits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KElem {
    val: i64,
    digits: Vec<GfElem>,
}

impl KElem {
    pub fn zero() -> Self {
        KElem::default()
    }

    pub fn one() -> Self {
        KElem::monomial(GfElem::ONE, 0)
    }

    /// `g·t^exp`.
    pub fn monomial(g: GfElem, exp: i64) -> Self {
        KElem::from_digits(exp, vec![g])
    }

    /// Builds `Σ digits[i]·t^{val+i}` and normalizes.
    pub fn from_digits(val: i64, mut digits: Vec<GfElem>) -> Self {
        while digits.last().is_some_and(|d| d.is_zero()) {
            digits.pop();
        }
        let lead = digits.iter().take_while(|d| d.is_zero()).count();
        if lead == digits.len() {
            return KElem::zero();
        }
        digits.drain(..lead);
        KElem {
            val: val + lead as i64,
            digits,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// `v(x)`, or `None` for zero (valuation `+∞`).
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Exponent of the highest nonzero term.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.val + self.digits.len() as i64 - 1)
    }

    /// Coefficient of `t^exp`.
    pub fn digit(&self, exp: i64) -> GfElem {
        let i = exp - self.val;
        if i < 0 || i >= self.digits.len() as i64 {
            GfElem::ZERO
        } else {
            self.digits[i as usize]
        }
    }

    /// Nonzero terms as `(exponent, digit)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, GfElem)> + '_ {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(move |(i, &d)| (self.val + i as i64, d))
    }

    /// `x ∈ 𝔓^k`.
    pub fn in_ideal(&self, k: i64) -> bool {
        self.valuation().is_none_or(|v| v >= k)
    }

    /// Canonical representative of `x + 𝔓^k`: drops digits at `t^k` and
    /// above.
    pub fn truncate(&self, k: i64) -> KElem {
        if self.is_zero() || k <= self.val {
            return KElem::zero();
        }
        let keep = ((k - self.val) as usize).min(self.digits.len());
        KElem::from_digits(self.val, self.digits[..keep].to_vec())
    }

    /// `x·t^e`.
    pub fn shift(&self, e: i64) -> KElem {
        if self.is_zero() {
            return KElem::zero();
        }
        KElem {
            val: self.val + e,
            digits: self.digits.clone(),
        }
    }
}

struct Tables {
    params: FieldParams,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    cyc: CycField,
}

/// A handle on `K = F_q((t))`; cheap to clone and safe to share.
#[derive(Clone)]
pub struct LocalField {
    inner: Arc<Tables>,
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalField")
            .field("p", &self.inner.params.p)
            .field("c", &self.inner.params.c)
            .field("modulus", &self.inner.params.modulus)
            .finish()
    }
}

impl PartialEq for LocalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.params == other.inner.params
    }
}

impl Eq for LocalField {}

impl LocalField {
    pub fn new(params: FieldParams) -> Result<Self> {
        params.validate()?;
        let p = params.p;
        let c = params.c as usize;
        let q = params.q() as u32;
        let coeffs = |code: u32| -> Vec<u32> {
            (0..c)
                .scan(code, |rest, _| {
                    let a = *rest % p;
                    *rest /= p;
                    Some(a)
                })
                .collect()
        };
        let code_of = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &a| acc * p + a) };
        let qq = q as usize;
        let mut add = vec![0; qq * qq];
        let mut mul = vec![0; qq * qq];
        for a in 0..q {
            let ca = coeffs(a);
            for b in 0..q {
                let cb = coeffs(b);
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                let mut prod = vec![0u32; 2 * c - 1];
                for (i, x) in ca.iter().enumerate() {
                    for (j, y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let prod = if prod.len() > c {
                    poly_rem(&prod, &params.modulus, p)
                } else {
                    prod
                };
                add[(a * q + b) as usize] = code_of(&sum);
                mul[(a * q + b) as usize] = code_of(&prod);
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap())
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap()
                }
            })
            .collect();
        let cyc = CycField::new(p, params.c)?;
        Ok(LocalField {
            inner: Arc::new(Tables {
                params,
                q,
                add,
                mul,
                neg,
                inv,
                cyc,
            }),
        })
    }

    pub fn preset(name: &str) -> Result<Self> {
        LocalField::new(FieldParams::preset(name)?)
    }

    pub fn params(&self) -> &FieldParams {
        &self.inner.params
    }

    pub fn p(&self) -> u32 {
        self.inner.params.p
    }

    pub fn c(&self) -> u32 {
        self.inner.params.c
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// `q^e` as a machine integer.
    pub fn q_pow(&self, e: u32) -> u64 {
        (self.inner.q as u64).pow(e)
    }

    /// The number field where characters and functions take values.
    pub fn cyc(&self) -> CycField {
        self.inner.cyc
    }

    // ---- GF(q) ----

    /// Coordinates of `g` in the basis `ε_0..ε_{c-1}`.
    pub fn gf_coeffs(&self, g: GfElem) -> Vec<u32> {
        let p = self.p();
        (0..self.c())
            .scan(g.0, |rest, _| {
                let a = *rest % p;
                *rest /= p;
                Some(a)
            })
            .collect()
    }

    pub fn gf_from_coeffs(&self, coeffs: &[u32]) -> Result<GfElem> {
        let p = self.p();
        if coeffs.len() != self.c() as usize || coeffs.iter().any(|&a| a >= p) {
            return domain(format!("invalid GF({}) coordinates {coeffs:?}", self.q()));
        }
        Ok(GfElem(coeffs.iter().rev().fold(0, |acc, &a| acc * p + a)))
    }

    /// `ε_j = x^j`.
    pub fn epsilon(&self, j: u32) -> GfElem {
        GfElem(self.p().pow(j))
    }

    pub fn gf_add(&self, a: GfElem, b: GfElem) -> GfElem {
        GfElem(self.inner.add[(a.0 * self.inner.q + b.0) as usize])
    }

    pub fn gf_neg(&self, a: GfElem) -> GfElem {
        GfElem(self.inner.neg[a.0 as usize])
    }

    pub fn gf_sub(&self, a: GfElem, b: GfElem) -> GfElem {
        self.gf_add(a, self.gf_neg(b))
    }

    pub fn gf_mul(&self, a: GfElem, b: GfElem) -> GfElem {
        GfElem(self.inner.mul[(a.0 * self.inner.q + b.0) as usize])
    }

    pub fn gf_inv(&self, a: GfElem) -> Result<GfElem> {
        if a.is_zero() {
            return domain("inverse of zero in GF(q)");
        }
        Ok(GfElem(self.inner.inv[a.0 as usize]))
    }

    /// The `ε_0` coordinate; `χ` reads the `t^{-1}` digit through this.
    pub fn gf_trace0(&self, a: GfElem) -> u32 {
        a.0 % self.p()
    }

    // ---- K ----

    /// The prime element `𝔭 = t`.
    pub fn prime(&self) -> KElem {
        KElem::monomial(GfElem::ONE, 1)
    }

    /// `𝔭^e`.
    pub fn prime_power(&self, e: i64) -> KElem {
        KElem::monomial(GfElem::ONE, e)
    }

    pub fn add(&self, x: &KElem, y: &KElem) -> KElem {
        if x.is_zero() {
            return y.clone();
        }
        if y.is_zero() {
            return x.clone();
        }
        let lo = x.val.min(y.val);
        let hi = x.degree().unwrap().max(y.degree().unwrap());
        let digits = (lo..=hi)
            .map(|e| self.gf_add(x.digit(e), y.digit(e)))
            .collect();
        KElem::from_digits(lo, digits)
    }

    pub fn neg(&self, x: &KElem) -> KElem {
        KElem {
            val: x.val,
            digits: x.digits.iter().map(|&d| self.gf_neg(d)).collect(),
        }
    }

    pub fn sub(&self, x: &KElem, y: &KElem) -> KElem {
        self.add(x, &self.neg(y))
    }

    /// Laurent-polynomial product.
    pub fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        if x.is_zero() || y.is_zero() {
            return KElem::zero();
        }
        let mut digits = vec![GfElem::ZERO; x.digits.len() + y.digits.len() - 1];
        for (i, &a) in x.digits.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in y.digits.iter().enumerate() {
                digits[i + j] = self.gf_add(digits[i + j], self.gf_mul(a, b));
            }
        }
        KElem::from_digits(x.val + y.val, digits)
    }

    /// Multiplies by a residue-field constant.
    pub fn mul_gf(&self, g: GfElem, x: &KElem) -> KElem {
        KElem::from_digits(x.val, x.digits.iter().map(|&d| self.gf_mul(g, d)).collect())
    }

    /// `|x| = q^{-v(x)}`, and `|0| = 0`.
    pub fn abs(&self, x: &KElem) -> Rational {
        match x.valuation() {
            None => Rational::zero(),
            Some(v) => {
                let q = Rational::from_integer(BigInt::from(self.q()));
                if v >= 0 {
                    Pow::pow(&q, v as u64).recip()
                } else {
                    Pow::pow(&q, (-v) as u64)
                }
            }
        }
    }

    /// `(v(x), |x|)`; the valuation is `None` for `x = 0`.
    pub fn valuation_abs(&self, x: &KElem) -> (Option<i64>, Rational) {
        (x.valuation(), self.abs(x))
    }

    /// The translation `u(n)`.
    ///
    /// Writing `n = Σ b_i q^i` with base-`q` digits, `u(n) = Σ u(b_i)𝔭^{-i}`,
    /// and `u(b) = b·𝔭^{-1}` for `b < q` under the code identification.
    pub fn u(&self, n: u64) -> KElem {
        let q = self.q() as u64;
        let mut rest = n;
        let mut digits = Vec::new();
        while rest > 0 {
            digits.push(GfElem((rest % q) as u32));
            rest /= q;
        }
        // digit b_i sits at t^{-1-i}; store low exponent first
        let len = digits.len() as i64;
        digits.reverse();
        KElem::from_digits(-len, digits)
    }

    /// Number of base-`q` digits of `n` (0 for `n = 0`); `u(n) ∈ 𝔓^{-len}`.
    pub fn digit_len(&self, n: u64) -> u32 {
        let q = self.q() as u64;
        let mut len = 0;
        let mut rest = n;
        while rest > 0 {
            rest /= q;
            len += 1;
        }
        len
    }

    /// Inverse of [`LocalField::u`] on elements with only negative powers.
    pub fn u_index(&self, x: &KElem) -> Option<u64> {
        if x.is_zero() {
            return Some(0);
        }
        if x.degree().unwrap() >= 0 {
            return None;
        }
        let q = self.q() as u64;
        let mut n = 0u64;
        // most significant digit sits at the lowest exponent
        for e in x.val..0 {
            n = n.checked_mul(q)?.checked_add(x.digit(e).0 as u64)?;
        }
        Some(n)
    }

    /// The canonical character: `χ(x) = ζ_p^{γ_0}` where `γ_0` is the `ε_0`
    /// coordinate of the `t^{-1}` digit of `x`.
    pub fn chi(&self, x: &KElem) -> CycNum {
        self.cyc().root_of_unity(self.chi_exponent(x) as i64)
    }

    /// Exponent `e ∈ [0, p)` with `χ(x) = ζ_p^e`.
    pub fn chi_exponent(&self, x: &KElem) -> u32 {
        self.gf_trace0(x.digit(-1))
    }

    /// `χ_y(x) = χ(yx)`.
    pub fn chi_at(&self, y: &KElem, x: &KElem) -> CycNum {
        self.chi(&self.mul(y, x))
    }

    /// `χ_n(x) = χ(u(n)x)`.
    pub fn chi_n(&self, n: u64, x: &KElem) -> CycNum {
        self.chi_at(&self.u(n), x)
    }

    /// Text form `v:d_v,d_{v+1},…`; each digit lists its `ε` coordinates
    /// low to high separated by `.` (a single number when `c = 1`).
    pub fn format_kelem(&self, x: &KElem) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let digits: Vec<String> = x
            .digits
            .iter()
            .map(|&d| {
                self.gf_coeffs(d)
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .collect();
        format!("{}:{}", x.val, digits.join(","))
    }

    pub fn parse_kelem(&self, text: &str) -> Result<KElem> {
        let text = text.trim();
        if text == "0" {
            return Ok(KElem::zero());
        }
        let (v, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected 'v:digits', got '{text}'")))?;
        let v: i64 = v
            .trim()
            .replace('\u{2212}', "-")
            .parse()
            .map_err(|_| Error::Parse(format!("bad valuation in '{text}'")))?;
        let mut digits = Vec::new();
        for d in rest.split(',') {
            let mut coeffs = d
                .split('.')
                .map(|a| a.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad digit '{d}' in '{text}'")))?;
            coeffs.resize(self.c() as usize, 0);
            digits.push(
                self.gf_from_coeffs(&coeffs)
                    .map_err(|e| Error::Parse(e.to_string()))?,
            );
        }
        Ok(KElem::from_digits(v, digits))
    }

    /// Enumerates the canonical representatives of `𝔓^{lo}/𝔓^{hi}`
    /// (`lo ≤ hi`) in lexicographic digit order, most significant digit
    /// `t^{lo}` first.
    pub fn coset_reps(&self, lo: i64, hi: i64) -> impl Iterator<Item = KElem> + '_ {
        let len = (hi - lo).max(0) as u32;
        let count = self.q_pow(len);
        (0..count).map(move |idx| self.coset_rep(lo, len, idx))
    }

    pub(crate) fn coset_rep(&self, lo: i64, len: u32, idx: u64) -> KElem {
        let q = self.q() as u64;
        let mut digits = vec![GfElem::ZERO; len as usize];
        let mut rest = idx;
        for slot in digits.iter_mut().rev() {
            *slot = GfElem((rest % q) as u32);
            rest /= q;
        }
        KElem::from_digits(lo, digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(name: &str) -> LocalField {
        LocalField::preset(name).unwrap()
    }

    #[test]
    fn gf2_one_plus_one() {
        let f = k("q2");
        assert_eq!(f.gf_add(GfElem::ONE, GfElem::ONE), GfElem::ZERO);
    }

    #[test]
    fn gf4_eps1_squared() {
        let f = k("q4");
        let e1 = f.epsilon(1);
        // x·x = x² ≡ x + 1 mod x² + x + 1
        let want = f.gf_from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.gf_mul(e1, e1), want);
    }

    #[test]
    fn gf3_inverse_of_two() {
        let f = k("q3");
        assert_eq!(
            f.gf_inv(GfElem::from_code(2)).unwrap(),
            GfElem::from_code(2)
        );
        assert!(f.gf_inv(GfElem::ZERO).is_err());
    }

    #[test]
    fn gf_inverses_are_inverses() {
        for name in ["q2", "q3", "q4", "q5", "q7", "q8", "q9"] {
            let f = k(name);
            for a in 1..f.q() {
                let a = GfElem::from_code(a);
                assert_eq!(f.gf_mul(a, f.gf_inv(a).unwrap()), GfElem::ONE);
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x² + 1 = (x + 1)² over GF(2)
        assert!(FieldParams::new(2, 2, vec![1, 0, 1]).is_err());
        // x² + 1 is irreducible over GF(3)
        assert!(FieldParams::new(3, 2, vec![1, 0, 1]).is_ok());
        assert!(FieldParams::new(4, 1, vec![0, 1]).is_err());
        assert!(FieldParams::new(2, 2, vec![1, 1, 0]).is_err());
    }

    #[test]
    fn char_two_cancellation() {
        let f = k("q2");
        let ti = f.prime_power(-1);
        assert!(f.add(&ti, &ti).is_zero());
        assert_eq!(f.mul(&ti, &f.prime_power(2)), f.prime());
        let one_t = f.add(&KElem::one(), &f.prime());
        assert_eq!(
            f.mul(&one_t, &one_t),
            f.add(&KElem::one(), &f.prime_power(2))
        );
    }

    #[test]
    fn valuation_and_abs() {
        let f = k("q2");
        let (v, a) = f.valuation_abs(&f.prime());
        assert_eq!(v, Some(1));
        assert_eq!(a, Rational::new(1.into(), 2.into()));
        let (v, a) = f.valuation_abs(&KElem::zero());
        assert_eq!(v, None);
        assert!(a.is_zero());
        let x = f.add(&f.prime_power(-3), &KElem::one());
        let (v, a) = f.valuation_abs(&x);
        assert_eq!(v, Some(-3));
        assert_eq!(a, Rational::from_integer(8.into()));
    }

    #[test]
    fn u_examples() {
        let f = k("q2");
        assert!(f.u(0).is_zero());
        assert_eq!(f.u(3), f.add(&f.prime_power(-1), &f.prime_power(-2)));
        let f4 = k("q4");
        assert_eq!(f4.u(2), KElem::monomial(f4.epsilon(1), -1));
        for n in 0..200 {
            assert_eq!(f4.u_index(&f4.u(n)), Some(n));
        }
    }

    #[test]
    fn chi_examples() {
        let f = k("q2");
        assert!(f.chi(&KElem::one()).is_one());
        assert_eq!(f.chi(&f.prime_power(-1)), f.cyc().from_int(-1));
        let f4 = k("q4");
        assert!(f4.chi(&KElem::monomial(f4.epsilon(1), -1)).is_one());
        assert!(f.chi_at(&KElem::zero(), &f.prime_power(-5)).is_one());
        // u(2) = t^{-2}; t^{-2}(1 + t) = t^{-2} + t^{-1}
        let x = f.add(&KElem::one(), &f.prime());
        assert_eq!(f.chi_n(2, &x), f.cyc().from_int(-1));
    }

    #[test]
    fn chi_trivial_on_integral_translates() {
        for name in ["q2", "q3", "q4"] {
            let f = k(name);
            for a in 0..16 {
                for b in 0..16 {
                    assert!(f.chi_n(a, &f.u(b)).is_one());
                }
            }
        }
    }

    #[test]
    fn kelem_text_round_trip() {
        let f = k("q4");
        let x = f.add(&KElem::monomial(f.epsilon(1), -1), &f.prime_power(2));
        let s = f.format_kelem(&x);
        assert_eq!(s, "-1:0.1,0.0,0.0,1.0");
        assert_eq!(f.parse_kelem("-1:0.1,0,0,1").unwrap(), x);
        assert_eq!(f.parse_kelem(&s).unwrap(), x);
        let f2 = k("q2");
        assert_eq!(f2.parse_kelem("−1:1").unwrap(), f2.prime_power(-1));
        assert!(f2.parse_kelem("1:2").is_err());
        assert!(f2.parse_kelem("zzz").is_err());
    }

    #[test]
    fn truncation_is_coset_representative() {
        let f = k("q3");
        let x = f.add(&f.u(7), &f.prime_power(2));
        assert_eq!(x.truncate(0), f.u(7));
        assert_eq!(x.truncate(3), x);
        assert!(x.truncate(-2).is_zero());
    }
}
