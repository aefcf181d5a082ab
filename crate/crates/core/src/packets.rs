//! Filter banks, the splitting lemma and wavelet packets.
//!
//! A bank holds `q` finitely supported filters `h^l = (h^l_k)_{k<q^s}`.
//! Splitting a function `f` with the bank produces
//!
//! ```text
//! ψ_l(x) = Σ_k h^l_k q^{1/2} f(𝔭^{-1}x - u(k)),
//! ψ̂_l(ξ) = m_l(𝔭ξ) f̂(𝔭ξ),   m_l(ξ) = q^{-1/2} Σ_k h^l_k conj(χ_k(ξ)),
//! ```
//!
//! and the packets are what repeated splitting of the scaling function
//! yields: `ω_0 = φ` and `ω_{r+qm} = (split ω_m)_r`.
//!
//! Unitarity of the modulation matrix `M(ξ) = (m_l(𝔭ξ + 𝔭u(k)))_{l,k}` is
//! decided on the representatives of `𝔇/𝔓^{max(s,1)}`: every symbol is
//! constant on cosets of `𝔓^s`, so `M` only depends on `ξ` modulo
//! `𝔓^{s-1}`, and a finite check is a complete one.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNum;
use crate::error::{domain, Error, Result};
use crate::localfield::{FieldParams, KElem, LocalField};
use crate::matrix::CycMatrix;
use crate::stepspace::StepFn;

/// `q` filters of length `q^s`; `h[0]` is the scaling filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterBank {
    field: LocalField,
    s: u32,
    h: Vec<Vec<CycNum>>,
}

/// Result of an exact matrix check over coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    /// The first representative where the identity fails, and the residual
    /// matrix there.
    Fail {
        xi: KElem,
        defect: CycMatrix,
    },
}

impl Check {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }
}

impl FilterBank {
    pub fn new(field: &LocalField, s: u32, h: Vec<Vec<CycNum>>) -> Result<Self> {
        let q = field.q() as usize;
        let len = field.q_pow(s) as usize;
        if h.len() != q {
            return domain(format!("a bank needs {q} filters, got {}", h.len()));
        }
        if let Some(row) = h.iter().find(|row| row.len() != len) {
            return domain(format!(
                "filters must have length q^s = {len}, got {}",
                row.len()
            ));
        }
        if h.iter().flatten().any(|v| v.field() != field.cyc()) {
            return Err(Error::FieldMismatch("filter coefficient field".into()));
        }
        Ok(FilterBank {
            field: field.clone(),
            s,
            h,
        })
    }

    /// `h^l_k = q^{-1/2} χ(u(l)𝔭u(k))`, `s = 1`.
    pub fn haar(field: &LocalField) -> Self {
        let q = field.q() as u64;
        let c = field.cyc().q_pow_half(-1);
        let h = (0..q)
            .map(|l| {
                (0..q)
                    .map(|k| &c * &Self::extension_phase(field, l, k))
                    .collect()
            })
            .collect();
        FilterBank {
            field: field.clone(),
            s: 1,
            h,
        }
    }

    fn extension_phase(field: &LocalField, l: u64, k: u64) -> CycNum {
        let pu = field.mul(&field.prime(), &field.u(k));
        field.chi_at(&field.u(l), &pu)
    }

    /// Completes a scaling filter to a bank with `h^l_k = h^0_k χ(u(l)𝔭u(k))`.
    ///
    /// The result is unitary exactly when every `|h^0_k|² = q^{-1}` on
    /// `k < q` (checked by [`FilterBank::check_unitary`], not here).
    pub fn character_extension(field: &LocalField, h0: Vec<CycNum>) -> Result<Self> {
        let q = field.q() as u64;
        if h0.len() as u64 != q {
            return domain(format!("scaling filter must have length q = {q}"));
        }
        let h = (0..q)
            .map(|l| {
                h0.iter()
                    .enumerate()
                    .map(|(k, v)| v * &Self::extension_phase(field, l, k as u64))
                    .collect()
            })
            .collect();
        Self::new(field, 1, h)
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn filters(&self) -> &[Vec<CycNum>] {
        &self.h
    }

    /// The same bank with every coefficient multiplied by `c`.
    pub fn scaled(&self, c: &CycNum) -> FilterBank {
        FilterBank {
            field: self.field.clone(),
            s: self.s,
            h: self
                .h
                .iter()
                .map(|row| row.iter().map(|v| v * c).collect())
                .collect(),
        }
    }

    /// `m_l(ξ) = q^{-1/2} Σ_k h^l_k conj(χ_k(ξ))`.
    pub fn symbol(&self, l: usize, xi: &KElem) -> CycNum {
        symbol_sum(&self.field, &self.h[l], xi)
    }

    /// `M(ξ) = (m_l(𝔭ξ + 𝔭u(k)))_{l,k<q}`.
    pub fn modulation_matrix(&self, xi: &KElem) -> CycMatrix {
        let f = &self.field;
        let q = f.q() as usize;
        let args: Vec<KElem> = (0..q as u64)
            .map(|k| f.mul(&f.prime(), &f.add(xi, &f.u(k))))
            .collect();
        CycMatrix::from_fn(f.cyc(), q, q, |l, k| self.symbol(l, &args[k]))
    }

    /// Exact unitarity of `M(ξ)` over `𝔇/𝔓^{max(s,1)}`.
    pub fn check_unitary(&self) -> Check {
        for xi in self.field.coset_reps(0, self.s.max(1) as i64) {
            let defect = self.modulation_matrix(&xi).unitarity_defect();
            if !defect.is_zero() {
                return Check::Fail { xi, defect };
            }
        }
        Check::Pass
    }

    /// The `q^s` functions `q^{1/2} f(𝔭^{-1}· - u(k))`.
    fn refined_translates(&self, f: &StepFn) -> Vec<StepFn> {
        (0..self.field.q_pow(self.s))
            .map(|k| f.dilate_translate(1, k))
            .collect()
    }

    fn combine(&self, l: usize, translates: &[StepFn]) -> StepFn {
        StepFn::linear_combination(
            &self.field,
            self.h[l].iter().cloned().zip(translates.iter()),
        )
        .expect("bank and function share the field")
    }

    /// `ψ_0, …, ψ_{q-1}` obtained by splitting `f`.
    pub fn split(&self, f: &StepFn) -> Result<Vec<StepFn>> {
        self.check_function(f)?;
        let t = self.refined_translates(f);
        Ok((0..self.h.len()).map(|l| self.combine(l, &t)).collect())
    }

    /// The single output `ψ_l` of [`FilterBank::split`].
    pub fn split_one(&self, f: &StepFn, l: usize) -> Result<StepFn> {
        self.check_function(f)?;
        if l >= self.h.len() {
            return domain(format!("filter index {l} out of range"));
        }
        Ok(self.combine(l, &self.refined_translates(f)))
    }

    fn check_function(&self, f: &StepFn) -> Result<()> {
        if f.field() != &self.field {
            return Err(Error::FieldMismatch(
                "function and bank use different fields".into(),
            ));
        }
        Ok(())
    }

    pub fn to_file(&self) -> FilterBankFile {
        FilterBankFile {
            params: self.field.params().clone(),
            s: self.s,
            h: self
                .h
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FilterBankFile = serde_json::from_str(text)?;
        let field = LocalField::new(file.params)?;
        let h = file
            .h
            .iter()
            .map(|row| row.iter().map(|v| field.cyc().parse(v)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Self::new(&field, file.s, h)
    }
}

/// JSON layout of a filter bank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterBankFile {
    pub params: FieldParams,
    pub s: u32,
    pub h: Vec<Vec<String>>,
}

/// `q^{-1/2} Σ_k h_k conj(χ_k(ξ))`.
pub(crate) fn symbol_sum(field: &LocalField, h: &[CycNum], xi: &KElem) -> CycNum {
    let mut acc = field.cyc().zero();
    for (k, v) in h.iter().enumerate() {
        if !v.is_zero() {
            acc += &(v * &field.chi_n(k as u64, xi).conj());
        }
    }
    &acc * &field.cyc().q_pow_half(-1)
}

/// A bank together with a scaling function, generating `ω_0, ω_1, …`.
///
/// Packets are memoized; the recursion is deterministic so concurrent
/// callers that race on the cache store identical values.
#[derive(Debug)]
pub struct PacketSystem {
    bank: FilterBank,
    phi: StepFn,
    phi_hat: StepFn,
    cache: Mutex<HashMap<u64, StepFn>>,
}

/// Exact coefficients `⟨f, ω_n(· - u(k))⟩`, indexed `[n][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub level: u32,
    pub translates: u64,
    pub coeffs: Vec<Vec<CycNum>>,
}

impl Analysis {
    /// `Σ |c_{n,k}|²`.
    pub fn energy(&self) -> CycNum {
        let mut it = self.coeffs.iter().flatten();
        let first = it.next().expect("at least one coefficient").abs_sq();
        it.fold(first, |acc, c| &acc + &c.abs_sq())
    }
}

impl PacketSystem {
    pub fn new(bank: FilterBank, phi: StepFn) -> Result<Self> {
        bank.check_function(&phi)?;
        let phi_hat = phi.fourier();
        Ok(PacketSystem {
            bank,
            phi,
            phi_hat,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// The Haar bank with `φ = 1_𝔇`.
    pub fn haar(field: &LocalField) -> Self {
        Self::new(FilterBank::haar(field), StepFn::indicator_ideal(field, 0)).expect("same field")
    }

    pub fn bank(&self) -> &FilterBank {
        &self.bank
    }

    pub fn phi(&self) -> &StepFn {
        &self.phi
    }

    pub fn field(&self) -> &LocalField {
        self.bank.field()
    }

    /// `ω_n`.
    pub fn packet(&self, n: u64) -> StepFn {
        if n == 0 {
            return self.phi.clone();
        }
        if let Some(w) = self.cache.lock().expect("cache lock").get(&n) {
            return w.clone();
        }
        let q = self.field().q() as u64;
        let parent = self.packet(n / q);
        let w = self
            .bank
            .split_one(&parent, (n % q) as usize)
            .expect("bank and φ share the field");
        self.cache.lock().expect("cache lock").insert(n, w.clone());
        w
    }

    /// `ω̂_n(ξ) = m_{μ_1}(𝔭ξ) ⋯ m_{μ_j}(𝔭^j ξ) φ̂(𝔭^j ξ)` for
    /// `n = μ_1 + μ_2 q + ⋯ + μ_j q^{j-1}`.
    pub fn packet_fourier_product(&self, n: u64, xi: &KElem) -> CycNum {
        let f = self.field();
        let q = f.q() as u64;
        let mut acc = f.cyc().one();
        let mut x = xi.clone();
        let mut rest = n;
        while rest > 0 {
            x = x.shift(1);
            let m = self.bank.symbol((rest % q) as usize, &x);
            if m.is_zero() {
                return m;
            }
            acc = &acc * &m;
            rest /= q;
        }
        &acc * &self.phi_hat.eval(&x)
    }

    /// Whether `φ = Σ_k h^0_k q^{1/2} φ(𝔭^{-1}· - u(k))`, the time-domain
    /// form of `φ̂(ξ) = m_0(𝔭ξ) φ̂(𝔭ξ)`.
    pub fn refinement_holds(&self) -> bool {
        self.bank.split_one(&self.phi, 0).expect("same field") == self.phi
    }

    /// `{ω_n(· - u(k)) : n < q^level, k < translates}`, `n` major.
    pub fn basis_enumerate(&self, level: u32, translates: u64) -> Vec<StepFn> {
        let count = self.field().q_pow(level);
        let mut out = Vec::with_capacity((count * translates) as usize);
        for n in 0..count {
            let w = self.packet(n);
            for k in 0..translates {
                out.push(w.translate(k));
            }
        }
        out
    }

    /// Smallest translate bound covering every `ω_n(· - u(k))`, `n < q^level`,
    /// whose support can meet the support of `f`.
    pub fn required_translates(&self, f: &StepFn, level: u32) -> u64 {
        let reach = (0..self.field().q_pow(level))
            .map(|n| self.packet(n).window().outer)
            .fold(f.window().outer, u32::max);
        self.field().q_pow(reach)
    }

    /// Coefficients of `f` against the level-`level` packet family.
    pub fn analyze(&self, f: &StepFn, level: u32, translates: u64) -> Result<Analysis> {
        self.bank.check_function(f)?;
        let need = self.required_translates(f, level);
        if translates < need {
            return domain(format!(
                "translate bound {translates} is too small; at least {need} translates are required"
            ));
        }
        let coeffs = (0..self.field().q_pow(level))
            .map(|n| f.translate_inner_products(&self.packet(n), translates))
            .collect::<Result<Vec<_>>>()?;
        Ok(Analysis {
            level,
            translates,
            coeffs,
        })
    }

    /// `Σ c_{n,k} ω_n(· - u(k))`.
    pub fn synthesize(&self, analysis: &Analysis) -> StepFn {
        let mut terms = Vec::new();
        for (n, row) in analysis.coeffs.iter().enumerate() {
            let w = self.packet(n as u64);
            for (k, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((c.clone(), w.translate(k as u64)));
                }
            }
        }
        StepFn::linear_combination(self.field(), terms.iter().map(|(c, f)| (c.clone(), f)))
            .expect("same field")
    }
}

/// Exact Gram matrix `(⟨f_i, f_j⟩)`.
pub fn gram(fs: &[StepFn]) -> Result<CycMatrix> {
    let Some(first) = fs.first() else {
        return domain("Gram matrix of an empty family");
    };
    let field = first.field().cyc();
    let mut m = CycMatrix::zeros(field, fs.len(), fs.len());
    for i in 0..fs.len() {
        for j in i..fs.len() {
            let v = fs[i].inner_product(&fs[j])?;
            m.set(j, i, v.conj());
            m.set(i, j, v);
        }
    }
    Ok(m)
}
