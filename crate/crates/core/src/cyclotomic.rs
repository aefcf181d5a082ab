//! Exact arithmetic in the cyclotomic field `Q(ζ_p)`.
//!
//! Every character value, filter coefficient and inner product in this crate
//! lives in this field. A number is stored by its coordinates over the basis
//! `ζ^0, …, ζ^{p-2}`; the relation `1 + ζ + … + ζ^{p-1} = 0` is applied
//! eagerly, so the representation is unique and equality is coordinate
//! equality.
//!
//! Orthonormal filters carry the factor `q^{-1/2}`. When `q` is an odd power
//! of `p` and `√p ∉ Q(ζ_p)` (that is `p = 2` or `p ≡ 3 mod 4`) the field is
//! extended to `Q(ζ_p)(√p)` and a number is `a + b·√p` with `a, b ∈ Q(ζ_p)`.
//! For `p ≡ 1 mod 4` the square root is the quadratic Gauss sum and no
//! extension is needed.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

pub type Rational = BigRational;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The number field that hosts values for a local field with residue field
/// `GF(p^c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycField {
    p: u32,
    c: u32,
}

impl CycField {
    pub fn new(p: u32, c: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return domain(format!("{p} is not prime"));
        }
        if c == 0 {
            return domain("extension degree c must be at least 1");
        }
        Ok(CycField { p, c })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.c)
    }

    /// Whether numbers carry an explicit `√p` component.
    pub fn has_surd(&self) -> bool {
        self.c % 2 == 1 && (self.p == 2 || self.p % 4 == 3)
    }

    fn half(&self) -> usize {
        (self.p - 1) as usize
    }

    fn dim(&self) -> usize {
        if self.has_surd() {
            2 * self.half()
        } else {
            self.half()
        }
    }

    pub fn zero(&self) -> CycNum {
        CycNum {
            field: *self,
            coords: vec![Rational::zero(); self.dim()],
        }
    }

    pub fn one(&self) -> CycNum {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> CycNum {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(&self, r: Rational) -> CycNum {
        let mut z = self.zero();
        z.coords[0] = r;
        z
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> CycNum {
        self.from_rational(Rational::new(num.into(), den.into()))
    }

    /// `ζ_p^k`, with `k` reduced mod `p`.
    pub fn root_of_unity(&self, k: i64) -> CycNum {
        self.one().mul_root(k)
    }

    /// The positive square root of `p`, when it is representable.
    pub fn sqrt_p(&self) -> Option<CycNum> {
        if self.has_surd() {
            let mut z = self.zero();
            z.coords[self.half()] = Rational::one();
            Some(z)
        } else if self.p % 4 == 1 {
            Some(self.gauss_sum())
        } else {
            None
        }
    }

    /// `Σ_{a=1}^{p-1} (a/p) ζ^a`; equals `√p` when `p ≡ 1 mod 4`.
    fn gauss_sum(&self) -> CycNum {
        let p = self.p as u64;
        let mut g = self.zero();
        for a in 1..p {
            let euler = mod_pow(a, (p - 1) / 2, p);
            let term = self.root_of_unity(a as i64);
            if euler == 1 {
                g += &term;
            } else {
                g -= &term;
            }
        }
        g
    }

    /// `q^{e/2}` exactly.
    pub fn q_pow_half(&self, e: i64) -> CycNum {
        let ce = self.c as i64 * e;
        // q^{e/2} = p^{ce/2}
        let p = Rational::from_integer(BigInt::from(self.p));
        let int_pow = |k: i64| -> Rational {
            if k >= 0 {
                Pow::pow(&p, k as u64)
            } else {
                Pow::pow(&p, (-k) as u64).recip()
            }
        };
        if ce % 2 == 0 {
            self.from_rational(int_pow(ce / 2))
        } else {
            let root = self
                .sqrt_p()
                .expect("odd power of p only arises when c is odd, where √p is representable");
            root.scale(&int_pow((ce - 1).div_euclid(2)))
        }
    }

    /// Parses the text form produced by [`CycNum`]'s `Display`.
    ///
    /// Terms are joined by `+`; each term is `coef[*s][*z[^k]]` where `coef`
    /// is a rational `num/den`, `z` is `ζ_p` and `s` is `√p`.
    pub fn parse(&self, text: &str) -> Result<CycNum> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty cyclotomic number".into()));
        }
        let mut acc = self.zero();
        for term in text.split('+') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in '{text}'")));
            }
            let mut coef = Rational::one();
            let mut exp = 0i64;
            let mut surd = false;
            for (i, factor) in term.split('*').enumerate() {
                let (neg, f) = match factor.strip_prefix('-') {
                    Some(rest) if i == 0 && !rest.starts_with(|c: char| c.is_ascii_digit()) => {
                        (true, rest)
                    }
                    _ => (false, factor),
                };
                if neg {
                    coef = -coef;
                }
                if f == "s" {
                    surd = true;
                } else if f == "z" {
                    exp += 1;
                } else if let Some(k) = f.strip_prefix("z^") {
                    exp += k
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?;
                } else {
                    let r = Rational::from_str(f)
                        .map_err(|_| Error::Parse(format!("bad factor '{factor}' in '{text}'")))?;
                    coef *= r;
                }
            }
            let mut t = self.root_of_unity(exp).scale(&coef);
            if surd {
                let root = self
                    .sqrt_p()
                    .ok_or_else(|| Error::Parse(format!("√{} is not in this field", self.p)))?;
                t = &t * &root;
            }
            acc += &t;
        }
        Ok(acc)
    }
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Reduces a length-`p` coefficient vector over `ζ^0..ζ^{p-1}` to the basis
/// `ζ^0..ζ^{p-2}`.
fn reduce(mut w: Vec<Rational>) -> Vec<Rational> {
    let last = w.pop().expect("non-empty");
    if !last.is_zero() {
        for x in w.iter_mut() {
            *x -= &last;
        }
    }
    w
}

fn poly_mul(a: &[Rational], b: &[Rational], p: usize) -> Vec<Rational> {
    let mut w = vec![Rational::zero(); p];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            w[(i + j) % p] += x * y;
        }
    }
    reduce(w)
}

fn poly_rotate(a: &[Rational], k: usize, p: usize) -> Vec<Rational> {
    let mut w = vec![Rational::zero(); p];
    for (i, x) in a.iter().enumerate() {
        w[(i + k) % p] = x.clone();
    }
    reduce(w)
}

fn poly_conj(a: &[Rational], p: usize) -> Vec<Rational> {
    let mut w = vec![Rational::zero(); p];
    for (i, x) in a.iter().enumerate() {
        w[(p - i) % p] = x.clone();
    }
    reduce(w)
}

/// An exact element of `Q(ζ_p)` (possibly adjoined `√p`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycNum {
    field: CycField,
    coords: Vec<Rational>,
}

impl CycNum {
    pub fn field(&self) -> CycField {
        self.field
    }

    /// Coordinates of the `Q(ζ_p)` part over `ζ^0..ζ^{p-2}`.
    pub fn rational_part(&self) -> &[Rational] {
        &self.coords[..self.field.half()]
    }

    /// Coordinates of the `√p` part, if the field carries one.
    pub fn surd_part(&self) -> Option<&[Rational]> {
        self.field
            .has_surd()
            .then(|| &self.coords[self.field.half()..])
    }

    /// All coordinates as exact rational strings; the JSON coordinate form.
    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(|r| r.to_string()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coords[0].clone())
    }

    fn check(&self, other: &CycNum) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "{:?} vs {:?}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycNum {
            field: self.field,
            coords,
        })
    }

    pub fn try_sub(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycNum {
            field: self.field,
            coords,
        })
    }

    pub fn try_mul(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        let p = self.field.p as usize;
        let h = self.field.half();
        if !self.field.has_surd() {
            return Ok(CycNum {
                field: self.field,
                coords: poly_mul(&self.coords, &other.coords, p),
            });
        }
        let (a, b) = self.coords.split_at(h);
        let (c, d) = other.coords.split_at(h);
        // (a + b√p)(c + d√p) = (ac + p·bd) + (ad + bc)√p
        let pr = Rational::from_integer(BigInt::from(self.field.p));
        let mut coords: Vec<Rational> = poly_mul(a, c, p);
        for (x, y) in coords.iter_mut().zip(poly_mul(b, d, p)) {
            *x += y * &pr;
        }
        let ad = poly_mul(a, d, p);
        let bc = poly_mul(b, c, p);
        coords.extend(ad.into_iter().zip(bc).map(|(x, y)| x + y));
        Ok(CycNum {
            field: self.field,
            coords,
        })
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, r: &Rational) -> CycNum {
        CycNum {
            field: self.field,
            coords: self.coords.iter().map(|x| x * r).collect(),
        }
    }

    /// Multiplies by `ζ^k`; a coordinate rotation, no rational products.
    pub fn mul_root(&self, k: i64) -> CycNum {
        let p = self.field.p as usize;
        let k = k.rem_euclid(p as i64) as usize;
        if k == 0 {
            return self.clone();
        }
        let h = self.field.half();
        let mut coords = poly_rotate(&self.coords[..h], k, p);
        if self.field.has_surd() {
            coords.extend(poly_rotate(&self.coords[h..], k, p));
        }
        CycNum {
            field: self.field,
            coords,
        }
    }

    /// Complex conjugation, the automorphism `ζ ↦ ζ^{-1}` (fixing `√p`).
    pub fn conj(&self) -> CycNum {
        let p = self.field.p as usize;
        let h = self.field.half();
        let mut coords = poly_conj(&self.coords[..h], p);
        if self.field.has_surd() {
            coords.extend(poly_conj(&self.coords[h..], p));
        }
        CycNum {
            field: self.field,
            coords,
        }
    }

    /// `|a|² = a·conj(a)`, an exact totally real number.
    pub fn abs_sq(&self) -> CycNum {
        self * &self.conj()
    }

    /// Evaluates at `ζ_p = exp(2πi/p)` in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let p = self.field.p;
        let h = self.field.half();
        let eval = |cs: &[Rational]| -> Complex64 {
            cs.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| Complex64::from_polar(rat_to_f64(c), 2.0 * PI * k as f64 / p as f64))
                .sum()
        };
        let mut z = eval(&self.coords[..h]);
        if self.field.has_surd() {
            z += eval(&self.coords[h..]) * (p as f64).sqrt();
        }
        z
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.field.half();
        let mut terms = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (surd, k) = if i < h { (false, i) } else { (true, i - h) };
            let mut t = c.to_string();
            if surd {
                t.push_str("*s");
            }
            match k {
                0 => {}
                1 => t.push_str("*z"),
                _ => t.push_str(&format!("*z^{k}")),
            }
            terms.push(t);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$imp(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        self.check(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        self.check(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field,
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}
