//! Wavelet frame packets.
//!
//! A [`FrameFilterSet`] carries coefficients `h^r_{ljk}` (`r < q`,
//! `l, j < N`, `k < q^s`). Applied to generators `φ_1, …, φ_N` it produces
//!
//! ```text
//! ψ^r_l = Σ_j Σ_k h^r_{ljk} q^{1/2} φ_j(𝔭^{-1}· - u(k)),
//! ```
//!
//! whose transforms are `ψ̂^r_l(ξ) = Σ_j h^r_{lj}(𝔭ξ) φ̂_j(𝔭ξ)` with symbols
//! `h^r_{lj}(ξ) = q^{-1/2} Σ_k h^r_{ljk} conj(χ_k(ξ))`. The symbols assemble
//! into the `qN × qN` matrix `H(ξ) = (H_r(ξ + 𝔭u(s)))_{r,s}`; its polyphase
//! form `P` satisfies `H(ξ) = P(𝔭^{-1}ξ) E(ξ)` with a unitary `E`, so
//! `H*H` and `P*P` have the same spectrum. With `λ`, `Λ` the extreme
//! eigenvalues of `H*H` over all `ξ`,
//!
//! ```text
//! λ^j Σ|⟨g, (φ_l)_{j,k}⟩|² ≤ Σ_{n<q^j} Σ_l Σ_k |⟨g, ψ^n_l(· - u(k))⟩|² ≤ Λ^j Σ|⟨g, (φ_l)_{j,k}⟩|²
//! ```
//!
//! for every `g`, which [`FramePacketSystem::frame_inequality_test`] checks
//! on random step functions with exact inner products.
//!
//! Packet indexing: the level-`j` family is `{ψ^{(j)}_n : n < q^j}` with
//! `n` written as exactly `j` base-`q` digits `d_0 (lowest), …, d_{j-1}`;
//! `ψ^{(j)}_n` splits `Φ` by `d_{j-1}` first and by `d_0` last, and
//! `ψ^{(0)}_0 = Φ`. Leading zero digits matter here, unlike for orthonormal
//! packets where `φ` reproduces itself under the scaling filter.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNum, Rational};
use crate::error::{domain, Error, Result};
use crate::localfield::{FieldParams, KElem, LocalField};
use crate::matrix::{hermitian_eigenvalues, CycMatrix};
use crate::packets::{symbol_sum, Check, FilterBank};
use crate::random::{random_step, small_perturbation};
use crate::stepspace::{bracket_of_transforms, StepFn, Window};

/// Eigenvalues below this are treated as zero.
pub const EIGEN_TOL: f64 = 1e-10;

/// Coefficients `h^r_{ljk}`, stored as `h[r][l][j][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameFilterSet {
    field: LocalField,
    n: usize,
    s: u32,
    h: Vec<Vec<Vec<Vec<CycNum>>>>,
}

/// Spectrum of `H*(ξ)H(ξ)` at one coset representative.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetSpectrum {
    pub xi: String,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lambda: f64,
    #[serde(rename = "Lambda")]
    pub big_lambda: f64,
    pub per_coset: Vec<CosetSpectrum>,
}

impl FrameFilterSet {
    pub fn new(
        field: &LocalField,
        n: usize,
        s: u32,
        h: Vec<Vec<Vec<Vec<CycNum>>>>,
    ) -> Result<Self> {
        let q = field.q() as usize;
        let len = field.q_pow(s) as usize;
        if n == 0 {
            return domain("a frame filter set needs at least one generator");
        }
        let shape_ok = h.len() == q
            && h.iter().all(|hr| {
                hr.len() == n
                    && hr
                        .iter()
                        .all(|hl| hl.len() == n && hl.iter().all(|k| k.len() == len))
            });
        if !shape_ok {
            return domain(format!(
                "filter array must have shape [{q}][{n}][{n}][{len}]"
            ));
        }
        if h.iter()
            .flatten()
            .flatten()
            .flatten()
            .any(|v| v.field() != field.cyc())
        {
            return Err(Error::FieldMismatch(
                "frame filter coefficient field".into(),
            ));
        }
        Ok(FrameFilterSet {
            field: field.clone(),
            n,
            s,
            h,
        })
    }

    /// `N = 1`, `h^r_{11k} = h^r_k`.
    pub fn from_bank(bank: &FilterBank) -> Self {
        let h = bank
            .filters()
            .iter()
            .map(|row| vec![vec![row.clone()]])
            .collect();
        FrameFilterSet {
            field: bank.field().clone(),
            n: 1,
            s: bank.s(),
            h,
        }
    }

    /// `h^r_{ljk} = δ_{lj} h^r_k` from the Haar bank.
    pub fn haar_derived(field: &LocalField, n: usize) -> Self {
        let bank = FilterBank::haar(field);
        let zero = field.cyc().zero();
        let h = bank
            .filters()
            .iter()
            .map(|row| {
                (0..n)
                    .map(|l| {
                        (0..n)
                            .map(|j| {
                                if l == j {
                                    row.clone()
                                } else {
                                    vec![zero.clone(); row.len()]
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FrameFilterSet {
            field: field.clone(),
            n,
            s: 1,
            h,
        }
    }

    /// The Haar-derived set (padded to length `q^s`) plus independent
    /// perturbations: each coefficient moves by a multiple of `1/16` in
    /// `[-1/4, 1/4]` with probability one half.
    pub fn random_perturbed(field: &LocalField, n: usize, s: u32, rng: &mut impl Rng) -> Self {
        let s = s.max(1);
        let len = field.q_pow(s) as usize;
        let base = Self::haar_derived(field, n);
        let cyc = field.cyc();
        let h = base
            .h
            .iter()
            .map(|hr| {
                hr.iter()
                    .map(|hl| {
                        hl.iter()
                            .map(|hlj| {
                                (0..len)
                                    .map(|k| {
                                        let b = hlj.get(k).cloned().unwrap_or_else(|| cyc.zero());
                                        &b + &small_perturbation(cyc, rng)
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FrameFilterSet {
            field: field.clone(),
            n,
            s,
            h,
        }
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn coefficients(&self) -> &[Vec<Vec<Vec<CycNum>>>] {
        &self.h
    }

    /// Replaces one coefficient; used for fault injection.
    pub fn with_coefficient(&self, r: usize, l: usize, j: usize, k: usize, v: CycNum) -> Self {
        let mut out = self.clone();
        out.h[r][l][j][k] = v;
        out
    }

    /// Every coefficient multiplied by `c`.
    pub fn scaled(&self, c: &CycNum) -> Self {
        let mut out = self.clone();
        for v in out.h.iter_mut().flatten().flatten().flatten() {
            *v = &*v * c;
        }
        out
    }

    /// Zeroes every filter producing generator `l` (rows `l` of all `H_r`).
    pub fn without_output(&self, l: usize) -> Self {
        let mut out = self.clone();
        let zero = self.field.cyc().zero();
        for hr in &mut out.h {
            for v in hr[l].iter_mut().flatten() {
                *v = zero.clone();
            }
        }
        out
    }

    /// `h^r_{lj}(ξ)`.
    pub fn symbol(&self, r: usize, l: usize, j: usize, xi: &KElem) -> CycNum {
        symbol_sum(&self.field, &self.h[r][l][j], xi)
    }

    /// `H(ξ)`: block `(r, s)` is `H_r(ξ + 𝔭u(s))`, entry `(rN + l, sN + j)`.
    pub fn h_matrix(&self, xi: &KElem) -> CycMatrix {
        let f = &self.field;
        let n = self.n;
        let args: Vec<KElem> = (0..f.q() as u64)
            .map(|s| f.add(xi, &f.mul(&f.prime(), &f.u(s))))
            .collect();
        let size = f.q() as usize * n;
        CycMatrix::from_fn(f.cyc(), size, size, |row, col| {
            self.symbol(row / n, row % n, col % n, &args[col / n])
        })
    }

    /// `P(ξ)`: block `(r, s)` has entries `p^{rs}_{lj}(ξ) = Σ_k h^r_{lj,qk+s} conj(χ_k(ξ))`.
    pub fn p_matrix(&self, xi: &KElem) -> CycMatrix {
        let f = &self.field;
        let q = f.q() as usize;
        let n = self.n;
        let chis: Vec<CycNum> = (0..self.h[0][0][0].len().div_ceil(q))
            .map(|k| f.chi_n(k as u64, xi).conj())
            .collect();
        CycMatrix::from_fn(f.cyc(), q * n, q * n, |row, col| {
            let (r, l, s, j) = (row / n, row % n, col / n, col % n);
            let mut acc = f.cyc().zero();
            for (k, c) in chis.iter().enumerate() {
                if let Some(v) = self.h[r][l][j].get(q * k + s) {
                    if !v.is_zero() {
                        acc += &(v * c);
                    }
                }
            }
            acc
        })
    }

    /// Checks `H(ξ) = P(𝔭^{-1}ξ) E(ξ)` on `𝔇/𝔓^{s+1}`.
    pub fn check_factorization(&self) -> Check {
        self.check_factorization_against(|x| self.p_matrix(x))
    }

    /// [`FrameFilterSet::check_factorization`] with the polyphase matrix
    /// supplied by the caller, for fault injection.
    pub fn check_factorization_against(&self, p: impl Fn(&KElem) -> CycMatrix) -> Check {
        for xi in self.field.coset_reps(0, self.s as i64 + 1) {
            let h = self.h_matrix(&xi);
            let pe = p(&xi.shift(-1))
                .mul(&e_matrix(&self.field, self.n, &xi))
                .expect("square blocks");
            let defect = h.sub(&pe);
            if !defect.is_zero() {
                return Check::Fail { xi, defect };
            }
        }
        Check::Pass
    }

    /// Coset representatives on which `H` is sampled.
    pub fn sample_points(&self) -> Vec<KElem> {
        self.field.coset_reps(0, self.s as i64 + 1).collect()
    }

    /// `λ = min_ξ λ_min(H*H)`, `Λ = max_ξ λ_max(H*H)`.
    pub fn frame_bounds(&self) -> Result<FrameBounds> {
        let mut per_coset = Vec::new();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for xi in self.sample_points() {
            let h = self.h_matrix(&xi);
            let hh = h.adjoint().mul(&h)?;
            let ev = hermitian_eigenvalues(&hh.to_complex())?;
            let (min, max) = (ev[0], ev[ev.len() - 1]);
            if !(min.is_finite() && max.is_finite()) {
                return Err(Error::Numeric("non-finite eigenvalue".into()));
            }
            if min < -EIGEN_TOL {
                return Err(Error::Numeric(format!(
                    "H*H has negative eigenvalue {min} at {}",
                    self.field.format_kelem(&xi)
                )));
            }
            lo = lo.min(min);
            hi = hi.max(max);
            per_coset.push(CosetSpectrum {
                xi: self.field.format_kelem(&xi),
                min,
                max,
            });
        }
        Ok(FrameBounds {
            lambda: lo.max(0.0),
            big_lambda: hi,
            per_coset,
        })
    }

    /// `ψ^r_1, …, ψ^r_N` from generators `fs`.
    pub fn split_one(&self, fs: &[StepFn], r: usize) -> Result<Vec<StepFn>> {
        if fs.len() != self.n {
            return domain(format!("expected {} generators, got {}", self.n, fs.len()));
        }
        if let Some(f) = fs.iter().find(|f| f.field() != &self.field) {
            return Err(Error::FieldMismatch(format!(
                "generator over {:?}",
                f.field().params()
            )));
        }
        let count = self.field.q_pow(self.s);
        let translates: Vec<Vec<StepFn>> = fs
            .iter()
            .map(|f| (0..count).map(|k| f.dilate_translate(1, k)).collect())
            .collect();
        (0..self.n)
            .map(|l| {
                let terms = (0..self.n)
                    .flat_map(|j| self.h[r][l][j].iter().cloned().zip(translates[j].iter()));
                StepFn::linear_combination(&self.field, terms)
            })
            .collect()
    }

    pub fn to_file(&self) -> FrameFilterFile {
        FrameFilterFile {
            params: self.field.params().clone(),
            n: self.n,
            s: self.s,
            h: self
                .h
                .iter()
                .map(|hr| {
                    hr.iter()
                        .map(|hl| {
                            hl.iter()
                                .map(|hlj| hlj.iter().map(ToString::to_string).collect())
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FrameFilterFile = serde_json::from_str(text)?;
        let field = LocalField::new(file.params)?;
        let cyc = field.cyc();
        let h = file
            .h
            .iter()
            .map(|hr| {
                hr.iter()
                    .map(|hl| {
                        hl.iter()
                            .map(|hlj| hlj.iter().map(|v| cyc.parse(v)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<Vec<Vec<_>>>>>>()?;
        Self::new(&field, file.n, file.s, h)
    }
}

/// JSON layout of a frame filter set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFilterFile {
    pub params: FieldParams,
    #[serde(rename = "N")]
    pub n: usize,
    pub s: u32,
    pub h: Vec<Vec<Vec<Vec<String>>>>,
}

/// `E(ξ)`: entry `(rN + l, sN + j)` is `δ_{lj} q^{-1/2} conj(χ(u(r)(ξ + 𝔭u(s))))`.
pub fn e_matrix(field: &LocalField, n: usize, xi: &KElem) -> CycMatrix {
    let q = field.q() as usize;
    let scale = field.cyc().q_pow_half(-1);
    let args: Vec<KElem> = (0..q as u64)
        .map(|s| field.add(xi, &field.mul(&field.prime(), &field.u(s))))
        .collect();
    CycMatrix::from_fn(field.cyc(), q * n, q * n, |row, col| {
        if row % n != col % n {
            return field.cyc().zero();
        }
        let chi = field.chi_at(&field.u((row / n) as u64), &args[col / n]);
        &chi.conj() * &scale
    })
}

/// `(1/q) Σ_t χ((u(r) - u(s)) 𝔭 u(t))`, which is `δ_{rs}`.
pub fn char_sum_delta(field: &LocalField, r: u64, s: u64) -> Result<Rational> {
    let d = field.mul(&field.sub(&field.u(r), &field.u(s)), &field.prime());
    let mut acc = field.cyc().zero();
    for t in 0..field.q() as u64 {
        acc += &field.chi_at(&d, &field.u(t));
    }
    acc.as_rational()
        .map(|v| v / Rational::from_integer(field.q().into()))
        .ok_or_else(|| Error::Numeric(format!("character sum {acc} is not rational")))
}

/// Generators `φ_1, …, φ_N` with the frame bounds of their translates.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    phis: Vec<StepFn>,
    c1: f64,
    c2: f64,
}

impl GeneratorSet {
    /// Computes `C_1`, `C_2` as the extreme nonzero eigenvalues of the
    /// bracket Gram matrix `([φ_l, φ_j](ξ))_{l,j}` over `𝔇/𝔓^J`, where `J`
    /// bounds the support of the generators (the Gram matrix is constant on
    /// those cosets).
    pub fn new(phis: Vec<StepFn>) -> Result<Self> {
        let Some(first) = phis.first() else {
            return domain("a generator set needs at least one function");
        };
        let field = first.field().clone();
        if phis.iter().any(|f| f.field() != &field) {
            return Err(Error::FieldMismatch(
                "generators over different fields".into(),
            ));
        }
        let hats: Vec<StepFn> = phis.iter().map(StepFn::fourier).collect();
        let reach = hats.iter().map(|h| h.window().fine).max().unwrap_or(0);
        let bound = field.q_pow(hats.iter().map(|h| h.window().outer).max().unwrap_or(0));
        let n = phis.len();
        let (mut c1, mut c2) = (f64::INFINITY, 0.0f64);
        for xi in field.coset_reps(0, reach as i64) {
            let mut g = CycMatrix::zeros(field.cyc(), n, n);
            for l in 0..n {
                for j in 0..n {
                    let (v, _) = bracket_of_transforms(&hats[l], &hats[j], &xi, bound)?;
                    g.set(l, j, v);
                }
            }
            let ev = hermitian_eigenvalues(&g.to_complex())?;
            for v in ev.into_iter().filter(|v| *v > EIGEN_TOL) {
                c1 = c1.min(v);
                c2 = c2.max(v);
            }
        }
        if !c1.is_finite() {
            return domain("all generators vanish");
        }
        Ok(GeneratorSet { phis, c1, c2 })
    }

    /// `φ_l = q^{1/2} 1_{𝔭u(l-1) + 𝔓}`, `l = 1..N` (`N ≤ q`): disjoint
    /// cells with orthonormal translates.
    pub fn cells(field: &LocalField, n: usize) -> Result<Self> {
        if n == 0 || n > field.q() as usize {
            return domain(format!("cell generators need 1 ≤ N ≤ q, got {n}"));
        }
        let scale = field.cyc().q_pow_half(1);
        let phis = (0..n as u64)
            .map(|l| {
                let center = field.mul(&field.prime(), &field.u(l));
                StepFn::indicator(field, &center, 1).scale(&scale)
            })
            .collect();
        Self::new(phis)
    }

    pub fn functions(&self) -> &[StepFn] {
        &self.phis
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }
}

/// A frame filter set applied to generators, with memoized packets.
#[derive(Debug)]
pub struct FramePacketSystem {
    ffs: FrameFilterSet,
    gens: GeneratorSet,
    cache: Mutex<HashMap<(u32, u64), Vec<StepFn>>>,
}

/// One trial where the sandwich failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub lower: f64,
    pub middle: f64,
}

/// Outcome of [`FramePacketSystem::frame_inequality_test`].
///
/// `ratio_min`/`ratio_max` range over `middle/lower` (trials with
/// `lower = 0` excluded). `worst_ratio` is the largest of
/// `λ^j·lower/middle` and `middle/(Λ^j·lower)` over all trials, so it is
/// at most `1` (up to the slack) exactly when no trial violates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameTestReport {
    pub level: u32,
    pub trials: usize,
    pub lambda: f64,
    #[serde(rename = "Lambda")]
    pub big_lambda: f64,
    pub violations: Vec<Violation>,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub worst_ratio: f64,
    /// Every trial had `lower = middle` as exact numbers.
    pub exact_equal: bool,
}

/// Exact sandwich terms for one `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameSums {
    /// `Σ_l Σ_k |⟨g, (φ_l)_{j,k}⟩|²`.
    pub lower: CycNum,
    /// `Σ_{n<q^j} Σ_l Σ_k |⟨g, ψ^{(j)}_{n,l}(· - u(k))⟩|²`.
    pub middle: CycNum,
}

pub const RELATIVE_SLACK: f64 = 1e-9;

impl FramePacketSystem {
    pub fn new(ffs: FrameFilterSet, gens: GeneratorSet) -> Result<Self> {
        if gens.functions().len() != ffs.generators() {
            return domain(format!(
                "filter set expects {} generators, got {}",
                ffs.generators(),
                gens.functions().len()
            ));
        }
        if gens.functions()[0].field() != ffs.field() {
            return Err(Error::FieldMismatch("generators and filters".into()));
        }
        Ok(FramePacketSystem {
            ffs,
            gens,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn filters(&self) -> &FrameFilterSet {
        &self.ffs
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    /// `ψ^{(level)}_n = (ψ^{(level)}_{n,1}, …, ψ^{(level)}_{n,N})`, `n < q^level`.
    pub fn packet(&self, n: u64, level: u32) -> Result<Vec<StepFn>> {
        let f = self.ffs.field();
        if n >= f.q_pow(level) {
            return domain(format!("packet index {n} needs more than {level} digits"));
        }
        if level == 0 {
            return Ok(self.gens.functions().to_vec());
        }
        if let Some(v) = self.cache.lock().expect("cache lock").get(&(level, n)) {
            return Ok(v.clone());
        }
        let q = f.q() as u64;
        let parent = self.packet(n / q, level - 1)?;
        let out = self.ffs.split_one(&parent, (n % q) as usize)?;
        self.cache
            .lock()
            .expect("cache lock")
            .insert((level, n), out.clone());
        Ok(out)
    }

    /// Both sides of the level-`j` sandwich for `g`, exact.
    pub fn frame_sums(&self, g: &StepFn, level: u32) -> Result<FrameSums> {
        let f = self.ffs.field();
        let cyc = f.cyc();
        let energy = |vals: Vec<CycNum>| {
            let mut acc = cyc.zero();
            for v in vals.iter().filter(|v| !v.is_zero()) {
                acc += &v.abs_sq();
            }
            acc
        };
        let mut lower = cyc.zero();
        for phi in self.gens.functions() {
            // support of (φ)_{j,k} meets 𝔓^{-J_g} only for k < q^{max(J_φ, J_g + j)}
            let bound = f.q_pow(phi.window().outer.max(g.window().outer + level));
            let vals = (0..bound)
                .map(|k| g.inner_product(&phi.dilate_translate(level as i64, k)))
                .collect::<Result<Vec<_>>>()?;
            lower += &energy(vals);
        }
        let mut middle = cyc.zero();
        for n in 0..f.q_pow(level) {
            for psi in self.packet(n, level)? {
                let bound = g.translate_bound(&psi);
                middle += &energy(g.translate_inner_products(&psi, bound)?);
            }
        }
        Ok(FrameSums { lower, middle })
    }

    /// Runs `trials` random `g` on `window` and compares both sides with
    /// `λ^j`, `Λ^j` at relative slack [`RELATIVE_SLACK`].
    pub fn frame_inequality_test(
        &self,
        bounds: &FrameBounds,
        level: u32,
        trials: usize,
        window: Window,
        rng: &mut impl Rng,
    ) -> Result<FrameTestReport> {
        let f = self.ffs.field();
        let lo = bounds.lambda.powi(level as i32);
        let hi = bounds.big_lambda.powi(level as i32);
        let mut report = FrameTestReport {
            level,
            trials,
            lambda: bounds.lambda,
            big_lambda: bounds.big_lambda,
            violations: Vec::new(),
            ratio_min: f64::INFINITY,
            ratio_max: f64::NEG_INFINITY,
            worst_ratio: 0.0,
            exact_equal: true,
        };
        for trial in 0..trials {
            let g = random_step(f, rng, window);
            let sums = self.frame_sums(&g, level)?;
            report.exact_equal &= sums.lower == sums.middle;
            let lower = sums.lower.to_complex().re;
            let middle = sums.middle.to_complex().re;
            let tol = RELATIVE_SLACK * lower.abs().max(middle.abs());
            if lo * lower > middle + tol || middle > hi * lower + tol {
                report.violations.push(Violation {
                    trial,
                    lower,
                    middle,
                });
            }
            if lower > 0.0 {
                let r = middle / lower;
                report.ratio_min = report.ratio_min.min(r);
                report.ratio_max = report.ratio_max.max(r);
                let below = if middle > 0.0 {
                    lo * lower / middle
                } else if lo > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                };
                report.worst_ratio = report.worst_ratio.max(below).max(middle / (hi * lower));
            }
        }
        if !report.ratio_min.is_finite() {
            report.ratio_min = 0.0;
            report.ratio_max = 0.0;
        }
        Ok(report)
    }
}
