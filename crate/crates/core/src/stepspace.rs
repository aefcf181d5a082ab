//! Compactly supported, locally constant functions on `K`.
//!
//! A [`StepFn`] with window `(J, k)` is supported in `𝔓^{-J}` and constant
//! on cosets of `𝔓^k`. It is stored as a table with one value per coset of
//! `𝔓^{-J}/𝔓^k`; there are `q^{J+k}` of them, each of Haar measure `q^{-k}`
//! (with `|𝔇| = 1`).
//!
//! Coset order is frozen because file formats depend on it: a coset is the
//! digit string `(c_{-J}, …, c_{k-1})`, each digit is its residue-field
//! code, and the table index reads the string as a base-`q` number with
//! `c_{-J}` most significant.
//!
//! The Fourier transform maps window `(J, k)` to window `(k, J)`. On the
//! finite group `𝔓^{-J}/𝔓^k` it factors into one `q`-point transform per
//! digit (the pairing `χ(ξx)` only couples digit `t^i` of `ξ` with digit
//! `t^{-1-i}` of `x`), which is how [`StepFn::fourier`] computes it. The
//! direct character sum is kept as [`StepFn::fourier_naive`].

use std::io::Write;

use num_bigint::BigInt;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNum, Rational};
use crate::error::{domain, Error, Result};
use crate::localfield::{FieldParams, KElem, LocalField};

/// Upper limit on table size; windows beyond this are a usage error.
pub const MAX_CELLS: u64 = 1 << 22;

/// Support `𝔓^{-outer}`, resolution `𝔓^{fine}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    #[serde(rename = "J")]
    pub outer: u32,
    #[serde(rename = "k")]
    pub fine: u32,
}

impl Window {
    pub fn new(outer: u32, fine: u32) -> Self {
        Window { outer, fine }
    }

    /// Number of digits in a coset label, `J + k`.
    pub fn digits(&self) -> u32 {
        self.outer + self.fine
    }

    pub fn cells(&self, field: &LocalField) -> usize {
        let n = field.q_pow(self.digits());
        assert!(
            n <= MAX_CELLS,
            "window {self:?} has {n} cells (limit {MAX_CELLS})"
        );
        n as usize
    }

    /// Smallest window containing both.
    pub fn join(self, other: Window) -> Window {
        Window::new(self.outer.max(other.outer), self.fine.max(other.fine))
    }

    pub fn contains(&self, other: Window) -> bool {
        self.outer >= other.outer && self.fine >= other.fine
    }

    /// Window of the Fourier transform.
    pub fn dual(self) -> Window {
        Window::new(self.fine, self.outer)
    }

    fn lo(&self) -> i64 {
        -(self.outer as i64)
    }

    fn hi(&self) -> i64 {
        self.fine as i64
    }

    /// Canonical representative of the cell with the given index.
    pub fn cell_rep(&self, field: &LocalField, idx: usize) -> KElem {
        field.coset_rep(self.lo(), self.digits(), idx as u64)
    }

    /// Index of the cell containing `x`, or `None` outside the support.
    pub fn cell_index(&self, field: &LocalField, x: &KElem) -> Option<usize> {
        if !x.in_ideal(self.lo()) {
            return None;
        }
        let q = field.q() as usize;
        Some((self.lo()..self.hi()).fold(0usize, |acc, e| acc * q + x.digit(e).code() as usize))
    }

    /// Digit codes `(c_{-J}, …, c_{k-1})` of a cell.
    pub fn cell_digits(&self, field: &LocalField, idx: usize) -> Vec<u32> {
        let q = field.q() as usize;
        let mut out = vec![0; self.digits() as usize];
        let mut rest = idx;
        for d in out.iter_mut().rev() {
            *d = (rest % q) as u32;
            rest /= q;
        }
        out
    }
}

fn q_pow_rational(field: &LocalField, e: i64) -> Rational {
    let q = Rational::from_integer(BigInt::from(field.q()));
    if e >= 0 {
        Pow::pow(&q, e as u64)
    } else {
        Pow::pow(&q, (-e) as u64).recip()
    }
}

/// A compactly supported locally constant function `K → Q(ζ_p)`.
///
/// Always held in canonical form: the window is the smallest one (with
/// `J, k ≥ 0`) on which the function is representable, so equality of
/// functions is structural equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFn {
    field: LocalField,
    window: Window,
    values: Vec<CycNum>,
}

impl StepFn {
    /// Builds a function from a table in frozen coset order.
    pub fn new(field: &LocalField, window: Window, values: Vec<CycNum>) -> Result<Self> {
        let n = field.q_pow(window.digits());
        if n > MAX_CELLS {
            return domain(format!("window {window:?} too large ({n} cells)"));
        }
        if values.len() as u64 != n {
            return domain(format!(
                "table for window {window:?} needs {n} values, got {}",
                values.len()
            ));
        }
        if let Some(v) = values.iter().find(|v| v.field() != field.cyc()) {
            return Err(Error::FieldMismatch(format!(
                "value field {:?} does not match {:?}",
                v.field(),
                field.cyc()
            )));
        }
        Ok(Self::canonical(field, window, values))
    }

    pub fn zero(field: &LocalField) -> Self {
        StepFn {
            field: field.clone(),
            window: Window::default(),
            values: vec![field.cyc().zero()],
        }
    }

    /// Tabulates `f` on the cells of `window`; `f` sees canonical cell
    /// representatives and must be constant on cells.
    pub fn from_fn(
        field: &LocalField,
        window: Window,
        mut f: impl FnMut(&KElem) -> CycNum,
    ) -> Self {
        let n = window.cells(field);
        let values = (0..n).map(|i| f(&window.cell_rep(field, i))).collect();
        Self::canonical(field, window, values)
    }

    /// Indicator of `center + 𝔓^level`.
    pub fn indicator(field: &LocalField, center: &KElem, level: i64) -> Self {
        let reach = center.valuation().map_or(0, |v| -v).max(-level).max(0) as u32;
        let window = Window::new(reach, level.max(0) as u32);
        let one = field.cyc().one();
        let zero = field.cyc().zero();
        Self::from_fn(field, window, |x| {
            if field.sub(x, center).in_ideal(level) {
                one.clone()
            } else {
                zero.clone()
            }
        })
    }

    /// Indicator `Φ` of the fractional ideal `𝔓^level`.
    pub fn indicator_ideal(field: &LocalField, level: i64) -> Self {
        Self::indicator(field, &KElem::zero(), level)
    }

    /// `χ_n` restricted to `𝔇` (zero outside).
    pub fn character(field: &LocalField, n: u64) -> Self {
        let u = field.u(n);
        let window = Window::new(0, field.digit_len(n));
        Self::from_fn(field, window, |x| field.chi_at(&u, x))
    }

    fn canonical(field: &LocalField, mut window: Window, mut values: Vec<CycNum>) -> Self {
        if values.iter().all(CycNum::is_zero) {
            return Self::zero(field);
        }
        let q = field.q() as usize;
        while window.outer > 0 {
            let block = values.len() / q;
            if values[block..].iter().all(CycNum::is_zero) {
                values.truncate(block);
                window.outer -= 1;
            } else {
                break;
            }
        }
        while window.fine > 0 {
            let coarse = values.chunks(q).all(|c| c[1..].iter().all(|v| v == &c[0]));
            if !coarse {
                break;
            }
            values = values.into_iter().step_by(q).collect();
            window.fine -= 1;
        }
        StepFn {
            field: field.clone(),
            window,
            values,
        }
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Table in frozen coset order.
    pub fn values(&self) -> &[CycNum] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.len() == 1 && self.values[0].is_zero()
    }

    pub fn eval(&self, x: &KElem) -> CycNum {
        match self.window.cell_index(&self.field, x) {
            Some(i) => self.values[i].clone(),
            None => self.field.cyc().zero(),
        }
    }

    /// The table re-expressed on a larger window.
    pub fn values_on(&self, w: Window) -> Vec<CycNum> {
        assert!(
            w.contains(self.window),
            "{w:?} does not contain {:?}",
            self.window
        );
        if w == self.window {
            return self.values.clone();
        }
        let q = self.field.q() as usize;
        let core = self.values.len();
        let low = q.pow(w.fine - self.window.fine);
        let zero = self.field.cyc().zero();
        (0..w.cells(&self.field))
            .map(|i| {
                if i / (core * low) != 0 {
                    zero.clone()
                } else {
                    self.values[(i / low) % core].clone()
                }
            })
            .collect()
    }

    fn check_field(&self, other: &StepFn) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "{:?} vs {:?}",
                self.field.params(),
                other.field.params()
            )));
        }
        Ok(())
    }

    /// `Σ c_i f_i`, computed on the joined window.
    pub fn linear_combination<'a>(
        field: &LocalField,
        terms: impl IntoIterator<Item = (CycNum, &'a StepFn)>,
    ) -> Result<StepFn> {
        let terms: Vec<_> = terms.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        let window = terms
            .iter()
            .fold(Window::default(), |w, (_, f)| w.join(f.window));
        let mut acc = vec![field.cyc().zero(); window.cells(field)];
        for (c, f) in &terms {
            if f.field != *field {
                return Err(Error::FieldMismatch(
                    "linear combination over mixed fields".into(),
                ));
            }
            for (a, v) in acc.iter_mut().zip(f.values_on(window)) {
                if !v.is_zero() {
                    *a += &(c * &v);
                }
            }
        }
        Ok(Self::canonical(field, window, acc))
    }

    pub fn try_add(&self, other: &StepFn) -> Result<StepFn> {
        self.check_field(other)?;
        let one = self.field.cyc().one();
        Self::linear_combination(&self.field, [(one.clone(), self), (one, other)])
    }

    pub fn try_sub(&self, other: &StepFn) -> Result<StepFn> {
        self.check_field(other)?;
        let one = self.field.cyc().one();
        Self::linear_combination(&self.field, [(one.clone(), self), (-one, other)])
    }

    pub fn scale(&self, c: &CycNum) -> StepFn {
        let values = self.values.iter().map(|v| v * c).collect();
        Self::canonical(&self.field, self.window, values)
    }

    /// `∫_K f dx`.
    pub fn integral(&self) -> CycNum {
        let mut acc = self.field.cyc().zero();
        for v in &self.values {
            acc += v;
        }
        acc.scale(&q_pow_rational(&self.field, -(self.window.fine as i64)))
    }

    /// `⟨f, g⟩ = ∫ f·conj(g)`.
    pub fn inner_product(&self, other: &StepFn) -> Result<CycNum> {
        self.check_field(other)?;
        let w = self.window.join(other.window);
        let (a, b) = (self.values_on(w), other.values_on(w));
        let mut acc = self.field.cyc().zero();
        for (x, y) in a.iter().zip(&b) {
            if !x.is_zero() && !y.is_zero() {
                acc += &(x * &y.conj());
            }
        }
        Ok(acc.scale(&q_pow_rational(&self.field, -(w.fine as i64))))
    }

    /// `⟨f, g(· - u(k))⟩` for every `k < bound`, sharing one refinement.
    pub fn translate_inner_products(&self, g: &StepFn, bound: u64) -> Result<Vec<CycNum>> {
        self.check_field(g)?;
        let field = &self.field;
        let reach = field.digit_len(bound.saturating_sub(1));
        let w = Window::new(
            self.window.outer.max(g.window.outer).max(reach),
            self.window.fine.max(g.window.fine),
        );
        let fv = self.values_on(w);
        let gv: Vec<CycNum> = g.values_on(w).iter().map(CycNum::conj).collect();
        let support: Vec<(KElem, &CycNum)> = fv
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (w.cell_rep(field, i), v))
            .collect();
        let measure = q_pow_rational(field, -(w.fine as i64));
        Ok((0..bound)
            .map(|k| {
                let shift = field.u(k);
                let mut acc = field.cyc().zero();
                for (x, v) in &support {
                    if let Some(i) = w.cell_index(field, &field.sub(x, &shift)) {
                        if !gv[i].is_zero() {
                            acc += &(*v * &gv[i]);
                        }
                    }
                }
                acc.scale(&measure)
            })
            .collect())
    }

    /// Smallest `T` such that `⟨f, g(· - u(k))⟩ = 0` for all `k ≥ T`.
    pub fn translate_bound(&self, g: &StepFn) -> u64 {
        self.field.q_pow(self.window.outer.max(g.window.outer))
    }

    /// `‖f‖² = ⟨f, f⟩`, a nonnegative real number (rational whenever the
    /// values are rational up to a common `√p` factor).
    pub fn norm_sq(&self) -> CycNum {
        let mut acc = self.field.cyc().zero();
        for v in &self.values {
            if !v.is_zero() {
                acc += &v.abs_sq();
            }
        }
        acc.scale(&q_pow_rational(&self.field, -(self.window.fine as i64)))
    }

    /// `f_{j,k}(x) = q^{j/2} f(𝔭^{-j}x - u(k))`.
    pub fn dilate_translate(&self, j: i64, k: u64) -> StepFn {
        let len = self.field.digit_len(k) as i64;
        let outer = ((self.window.outer as i64).max(len) - j).max(0) as u32;
        let fine = (self.window.fine as i64 + j).max(0) as u32;
        let scale = self.field.cyc().q_pow_half(j);
        let shift = self.field.u(k);
        let field = self.field.clone();
        Self::from_fn(&field, Window::new(outer, fine), |x| {
            let y = field.sub(&x.shift(-j), &shift);
            let v = self.eval(&y);
            if v.is_zero() {
                v
            } else {
                &v * &scale
            }
        })
    }

    /// `f(· - u(k))`.
    pub fn translate(&self, k: u64) -> StepFn {
        self.dilate_translate(0, k)
    }

    /// `f̂(ξ) = ∫ f(x) conj(χ(ξx)) dx`, via per-digit `q`-point transforms.
    pub fn fourier(&self) -> StepFn {
        self.transform(false)
    }

    /// `f(x) = ∫ f̂(ξ) χ(ξx) dξ`.
    pub fn inverse_fourier(&self) -> StepFn {
        self.transform(true)
    }

    fn transform(&self, inverse: bool) -> StepFn {
        let field = &self.field;
        let q = field.q() as usize;
        let m = self.window.digits();
        let sign: i64 = if inverse { 1 } else { -1 };
        let phase: Vec<i64> = (0..q * q)
            .map(|i| {
                let e = crate::localfield::GfElem::from_code((i / q) as u32);
                let d = crate::localfield::GfElem::from_code((i % q) as u32);
                sign * field.gf_trace0(field.gf_mul(e, d)) as i64
            })
            .collect();
        let mut buf = self.values.clone();
        let n = buf.len();
        let zero = field.cyc().zero();
        let mut fiber = vec![zero.clone(); q];
        for axis in 0..m {
            let stride = q.pow(m - 1 - axis);
            for hi in 0..n / (stride * q) {
                for lo in 0..stride {
                    let base = hi * stride * q + lo;
                    for (e, out) in fiber.iter_mut().enumerate() {
                        let mut acc = zero.clone();
                        for d in 0..q {
                            let x = &buf[base + d * stride];
                            if !x.is_zero() {
                                acc += &x.mul_root(phase[e * q + d]);
                            }
                        }
                        *out = acc;
                    }
                    for (d, v) in fiber.iter_mut().enumerate() {
                        buf[base + d * stride] = std::mem::replace(v, zero.clone());
                    }
                }
            }
        }
        // axis a now carries output digit m-1-a: reverse the digit order
        let reverse = |mut i: usize| {
            let mut r = 0;
            for _ in 0..m {
                r = r * q + i % q;
                i /= q;
            }
            r
        };
        let scale = q_pow_rational(field, -(self.window.fine as i64));
        let values = (0..n).map(|i| buf[reverse(i)].scale(&scale)).collect();
        Self::canonical(field, self.window.dual(), values)
    }

    /// The transform as a direct character sum over cells; `O(M²)` in the
    /// number of cells. Independent of the fast path.
    pub fn fourier_naive(&self) -> StepFn {
        self.transform_naive(false)
    }

    pub fn inverse_fourier_naive(&self) -> StepFn {
        self.transform_naive(true)
    }

    fn transform_naive(&self, inverse: bool) -> StepFn {
        let field = &self.field;
        let reps: Vec<KElem> = (0..self.values.len())
            .map(|i| self.window.cell_rep(field, i))
            .collect();
        let measure = q_pow_rational(field, -(self.window.fine as i64));
        Self::from_fn(field, self.window.dual(), |xi| {
            let mut acc = field.cyc().zero();
            for (a, v) in reps.iter().zip(&self.values) {
                if v.is_zero() {
                    continue;
                }
                let chi = field.chi_at(xi, a);
                let chi = if inverse { chi } else { chi.conj() };
                acc += &(v * &chi);
            }
            acc.scale(&measure)
        })
    }

    /// Fourier coefficient `f̂(u(n)) = ∫_𝔇 f conj(χ_n)` of a function
    /// supported in `𝔇`.
    pub fn fourier_coeff_d(&self, n: u64) -> Result<CycNum> {
        if self.window.outer != 0 {
            return domain(format!(
                "function is supported in 𝔓^-{}, not in the ring of integers",
                self.window.outer
            ));
        }
        let field = &self.field;
        if field.digit_len(n) > self.window.fine {
            return Ok(field.cyc().zero());
        }
        let u = field.u(n);
        let mut acc = field.cyc().zero();
        for (i, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let a = self.window.cell_rep(field, i);
            acc += &(v * &field.chi_at(&u, &a).conj());
        }
        Ok(acc.scale(&q_pow_rational(field, -(self.window.fine as i64))))
    }

    /// CSV export: one row per cell with its digits and complex value.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "digits", "re", "im", "exact"])?;
        for (i, v) in self.values.iter().enumerate() {
            let digits = self
                .window
                .cell_digits(&self.field, i)
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            let z = v.to_complex();
            w.write_record([
                i.to_string(),
                digits,
                format!("{}", z.re),
                format!("{}", z.im),
                v.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_file(&self) -> StepFnFile {
        StepFnFile {
            params: self.field.params().clone(),
            window: self.window,
            values: self.values.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<StepFn> {
        let file: StepFnFile = serde_json::from_str(text)?;
        let field = LocalField::new(file.params.clone())?;
        file.into_step(&field)
    }
}

/// JSON layout of a step function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFnFile {
    pub params: FieldParams,
    pub window: Window,
    pub values: Vec<String>,
}

impl StepFnFile {
    pub fn into_step(self, field: &LocalField) -> Result<StepFn> {
        if field.params() != &self.params {
            return Err(Error::FieldMismatch(
                "step function file uses another field".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .map(|s| field.cyc().parse(s))
            .collect::<Result<Vec<_>>>()?;
        StepFn::new(field, self.window, values)
    }
}

/// `[f, g](ξ) = Σ_l f̂(ξ + u(l)) conj(ĝ(ξ + u(l)))`.
///
/// Returns the exact value and the index bound actually needed; errors when
/// `n_max` is below that bound.
pub fn bracket(f: &StepFn, g: &StepFn, xi: &KElem, n_max: u64) -> Result<(CycNum, u64)> {
    bracket_of_transforms(&f.fourier(), &g.fourier(), xi, n_max)
}

/// [`bracket`] for functions already in the frequency domain.
pub fn bracket_of_transforms(
    fh: &StepFn,
    gh: &StepFn,
    xi: &KElem,
    n_max: u64,
) -> Result<(CycNum, u64)> {
    fh.check_field(gh)?;
    let field = &fh.field;
    let reach = fh.window.outer.min(gh.window.outer) as i64;
    let need = reach.max(xi.valuation().map_or(0, |v| -v)).max(0) as u32;
    let bound = field.q_pow(need);
    if n_max < bound {
        return domain(format!(
            "bracket needs translates up to {bound}, n_max is {n_max}"
        ));
    }
    let mut acc = field.cyc().zero();
    for l in 0..bound {
        let x = field.add(xi, &field.u(l));
        let a = fh.eval(&x);
        if a.is_zero() {
            continue;
        }
        let b = gh.eval(&x);
        if !b.is_zero() {
            acc += &(&a * &b.conj());
        }
    }
    Ok((acc, bound))
}

/// Outcome of the translate-orthonormality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orthonormality {
    pub orthonormal: bool,
    /// First `ξ ∈ 𝔇` (coset representative) where `Σ|φ̂(ξ+u(k))|² ≠ 1`.
    pub witness: Option<KElem>,
    pub witness_value: Option<CycNum>,
}

/// Tests whether `{φ(· - u(k))}` is orthonormal through
/// `Σ_k |φ̂(ξ + u(k))|² = 1`, checked at every representative of
/// `𝔇/𝔓^J` (the periodization is constant on those cosets). The sum bound is
/// derived from the support of `φ̂`.
pub fn orthonormality_criterion(phi: &StepFn) -> Orthonormality {
    let field = phi.field();
    let ph = phi.fourier();
    let bound = field.q_pow(ph.window.outer);
    for xi in field.coset_reps(0, ph.window.fine as i64) {
        let (v, _) = bracket_of_transforms(&ph, &ph, &xi, bound).expect("bound is sufficient");
        if !v.is_one() {
            return Orthonormality {
                orthonormal: false,
                witness: Some(xi),
                witness_value: Some(v),
            };
        }
    }
    Orthonormality {
        orthonormal: true,
        witness: None,
        witness_value: None,
    }
}

impl std::ops::Add for &StepFn {
    type Output = StepFn;
    fn add(self, rhs: &StepFn) -> StepFn {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl std::ops::Sub for &StepFn {
    type Output = StepFn;
    fn sub(self, rhs: &StepFn) -> StepFn {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}
