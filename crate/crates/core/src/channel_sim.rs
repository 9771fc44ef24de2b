//! Monte-Carlo engine: Rayleigh channel draws, matched beamformers,
//! per-realization end-to-end SNRs and the semi-analytic sum-BER estimator.
//!
//! Trial `i` of a run seeded with `s` draws from ChaCha8 stream `i` under key
//! `s`, so results do not depend on how trials are split across threads.

use crate::scenario::{AntennaConfig, DFactors, Modulation, PowerProfile, Protocol, Setup, WeightPair};
use crate::scenario::CoefficientSet;
use crate::specfun::q_function;
use crate::{Error, Result};
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 500;
const BLOCK: u64 = 8192;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        CMatrix { rows: rows.len(), cols, data: rows.iter().flat_map(|r| r.iter().copied()).collect() }
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    /// `H·Hᴴ`
    pub fn gram_rows(&self) -> Self {
        self.matmul(&self.adjoint())
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `vᴴ G v` for Hermitian `G` (imaginary round-off dropped).
pub fn quadratic_form(g: &CMatrix, v: &[Complex64]) -> f64 {
    let gv = g.mul_vec(v);
    v.iter().zip(&gv).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Per-trial random source.
pub struct TrialRng(ChaCha8Rng);

impl TrialRng {
    pub fn new(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        TrialRng(rng)
    }

    /// Uniform on (0, 1].
    fn uniform(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// CN(0, 1) by Box–Muller: variance ½ per component.
    pub fn complex_normal(&mut self) -> Complex64 {
        let r = (-self.uniform().ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * self.uniform()).sin_cos();
        Complex64::new(r * c, r * s)
    }
}

/// One channel realization. Reverse links are the adjoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    /// M_R × M_A
    pub h_ar: CMatrix,
    /// M_R × M_B
    pub h_br: CMatrix,
}

pub fn draw_channels(ant: AntennaConfig, rng: &mut TrialRng) -> ChannelDraw {
    let mut fill = |rows: u32, cols: u32| {
        let mut m = CMatrix::zeros(rows as usize, cols as usize);
        m.data.iter_mut().for_each(|z| *z = rng.complex_normal());
        m
    };
    let h_ar = fill(ant.m_r, ant.m_a);
    let h_br = fill(ant.m_r, ant.m_b);
    ChannelDraw { h_ar, h_br }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi.
///
/// Eigenvalues come back in descending order with eigenvectors as the
/// matching columns; ties keep index order.
pub fn hermitian_eigen(g: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if g.rows != g.cols {
        return Err(Error::Contract(format!("eigen-decomposition needs a square matrix, got {}x{}", g.rows, g.cols)));
    }
    let n = g.rows;
    let mut a = g.clone();
    let mut v = CMatrix::identity(n);
    let total = g.frobenius_sq().sqrt();
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| a[(p, q)].norm_sqr()).sum();
        if off.sqrt() <= JACOBI_TOL * total {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let e = (apq / mag).conj();
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                let (jpp, jpq, jqp, jqq) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0), -e * s, e * c);
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * jpp + y * jqp;
                    a[(k, q)] = x * jpq + y * jqq;
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * jpp + y * jqp;
                    v[(k, q)] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = jpp.conj() * x + jqp.conj() * y;
                    a[(q, k)] = jpq.conj() * x + jqq.conj() * y;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    if !converged {
        return Err(Error::Numerical(format!("Jacobi eigen-solver did not converge in {JACOBI_MAX_SWEEPS} sweeps")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, col)] = v[(k, i)];
        }
    }
    Ok((values, vectors))
}

/// Dominant eigenpair of a Hermitian PSD matrix.
fn top_eigenpair(g: &CMatrix) -> Result<(f64, Vec<Complex64>)> {
    let (vals, vecs) = hermitian_eigen(g)?;
    Ok((vals[0], vecs.column(0)))
}

/// Strongest right singular vector of `h` (unit norm).
pub fn matched_beamformer(h: &CMatrix) -> Result<Vec<Complex64>> {
    if h.data.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Err(Error::Domain("matched beamformer of a zero matrix is undefined".into()));
    }
    if h.rows == 1 {
        let n = norm_sq(&h.data).sqrt();
        return Ok(h.data.iter().map(|z| z.conj() / n).collect());
    }
    let (_, f) = top_eigenpair(&h.adjoint().matmul(h))?;
    Ok(f)
}

/// Power-free channel gains of one draw.
///
/// `lam_a` is the largest eigenvalue of H_AR·H_ARᴴ and `lam_a_x` the gain
/// of the R→A link when the relay uses the beamformer matched to B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    pub lam_a: f64,
    pub lam_b: f64,
    pub lam_a_x: f64,
    pub lam_b_x: f64,
}

pub fn link_gains(dr: &ChannelDraw) -> Result<LinkGains> {
    if dr.h_ar.rows == 1 {
        let lam_a = norm_sq(&dr.h_ar.data);
        let lam_b = norm_sq(&dr.h_br.data);
        return Ok(LinkGains { lam_a, lam_b, lam_a_x: lam_a, lam_b_x: lam_b });
    }
    let ga = dr.h_ar.gram_rows();
    let gb = dr.h_br.gram_rows();
    let (lam_a, va) = top_eigenpair(&ga)?;
    let (lam_b, vb) = top_eigenpair(&gb)?;
    let lam_a_x = quadratic_form(&ga, &vb).clamp(0.0, lam_a);
    let lam_b_x = quadratic_form(&gb, &va).clamp(0.0, lam_b);
    Ok(LinkGains { lam_a, lam_b, lam_a_x, lam_b_x })
}

/// Instantaneous per-link SNRs (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstantaneousSnrs {
    pub g_ar: f64,
    pub g_br: f64,
    pub g_ra: f64,
    pub g_rb: f64,
    pub g_ra_x: f64,
    pub g_rb_x: f64,
}

impl InstantaneousSnrs {
    pub fn from_gains(l: &LinkGains, pw: &PowerProfile) -> Self {
        InstantaneousSnrs {
            g_ar: pw.rho_ar * l.lam_a,
            g_br: pw.rho_br * l.lam_b,
            g_ra: pw.rho_ra * l.lam_a,
            g_rb: pw.rho_rb * l.lam_b,
            g_ra_x: pw.rho_ra * l.lam_a_x,
            g_rb_x: pw.rho_rb * l.lam_b_x,
        }
    }

    /// All six SNRs equal to `g`.
    pub fn uniform(g: f64) -> Self {
        InstantaneousSnrs { g_ar: g, g_br: g, g_ra: g, g_rb: g, g_ra_x: g, g_rb_x: g }
    }
}

pub fn link_snrs(dr: &ChannelDraw, pw: &PowerProfile) -> Result<InstantaneousSnrs> {
    Ok(InstantaneousSnrs::from_gains(&link_gains(dr)?, pw))
}

/// How the end-to-end SNR is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SnrMode {
    /// Single ratio with the protocol's (A, B, C) constants.
    Unified,
    /// Sum of the two relay receptions (dual-reception protocols only).
    DualReception,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SnrForm {
    /// With the "+1" noise term.
    Exact,
    /// "+1" dropped; an upper bound on the SNR, hence a BER lower bound.
    Bound,
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// x·(z/2) / (x + y + z/2 + one)
fn half_branch(x: f64, y: f64, z: f64, one: f64) -> f64 {
    ratio(x * z * 0.5, x + y + z * 0.5 + one)
}

/// Evaluates (Γ_ARB, Γ_BRA) for draws under one setup.
#[derive(Debug, Clone)]
pub struct SnrEvaluator {
    protocol: Protocol,
    coeffs: Option<CoefficientSet>,
    weights: WeightPair,
    mode: SnrMode,
    one: f64,
}

impl SnrEvaluator {
    pub fn new(setup: &Setup, mode: SnrMode, form: SnrForm) -> Result<Self> {
        let coeffs = match mode {
            SnrMode::Unified => Some(setup.coefficients()?),
            SnrMode::DualReception => {
                if !setup.protocol.has_dual_reception() {
                    return Err(Error::Contract(format!(
                        "dual-reception SNRs are defined only for the second three- and four-slot protocols, not {}",
                        setup.protocol
                    )));
                }
                None
            }
        };
        let one = match form {
            SnrForm::Exact => 1.0,
            SnrForm::Bound => 0.0,
        };
        Ok(SnrEvaluator { protocol: setup.protocol, coeffs, weights: setup.weights, mode, one })
    }

    /// (Γ_ARB, Γ_BRA)
    pub fn eval(&self, s: &InstantaneousSnrs) -> (f64, f64) {
        let one = self.one;
        match (self.mode, self.coeffs) {
            (SnrMode::Unified, Some(c)) => (
                ratio(c.a_arb * s.g_ar * s.g_rb, c.b_arb * s.g_ar + c.c_arb * s.g_rb + one),
                ratio(c.a_bra * s.g_br * s.g_ra, c.b_bra * s.g_br + c.c_bra * s.g_ra + one),
            ),
            _ => {
                let (wa, wb) = if self.protocol == Protocol::SecondFourSlot {
                    (self.weights.alpha_sq(), self.weights.beta_sq())
                } else {
                    (1.0, 1.0)
                };
                let (ar, br) = (wa * s.g_ar, wb * s.g_br);
                (
                    half_branch(ar, br, s.g_rb, one) + half_branch(ar, br, s.g_rb_x, one),
                    half_branch(br, ar, s.g_ra, one) + half_branch(br, ar, s.g_ra_x, one),
                )
            }
        }
    }
}

/// (Γ_ARB, Γ_BRA) of a single realization.
pub fn end_to_end_snrs(setup: &Setup, s: &InstantaneousSnrs, mode: SnrMode, form: SnrForm) -> Result<(f64, f64)> {
    Ok(SnrEvaluator::new(setup, mode, form)?.eval(s))
}

/// Exact (Γ_ARB, Γ_BRA) written through link SNRs only, with explicit weights.
///
/// Used for instantaneous weight search, where the constants would otherwise
/// have to be rebuilt for every candidate β.
fn weighted_link_snrs(p: Protocol, s: &InstantaneousSnrs, w: WeightPair) -> (f64, f64) {
    let (a2, b2) = (w.alpha_sq(), w.beta_sq());
    match p {
        Protocol::FirstThreeSlot => (
            ratio(a2 * s.g_ar * s.g_rb, a2 * s.g_ar + s.g_rb + b2 * s.g_br + 1.0),
            ratio(b2 * s.g_br * s.g_ra, b2 * s.g_br + s.g_ra + a2 * s.g_ar + 1.0),
        ),
        _ => {
            let (ar, br) = (a2 * s.g_ar, b2 * s.g_br);
            (
                half_branch(ar, br, s.g_rb, 1.0) + half_branch(ar, br, s.g_rb_x, 1.0),
                half_branch(br, ar, s.g_ra, 1.0) + half_branch(br, ar, s.g_ra_x, 1.0),
            )
        }
    }
}

fn instantaneous_sum_ber(m: &Modulation, g_arb: f64, g_bra: f64) -> f64 {
    m.a * (q_function((2.0 * m.b * g_arb).sqrt()) + q_function((2.0 * m.b * g_bra).sqrt())) / m.bits()
}

/// Grid search over β² ∈ [0, 1] minimizing the instantaneous sum-BER.
pub fn brute_force_beta(s: &InstantaneousSnrs, p: Protocol, m: &Modulation, grid_size: usize) -> Result<WeightPair> {
    if !p.uses_weights() {
        return Err(Error::Contract(format!("{p} has no relay weights to optimize")));
    }
    if grid_size < 3 {
        return Err(Error::Contract(format!("grid_size must be ≥ 3, got {grid_size}")));
    }
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..grid_size {
        let b2 = k as f64 / (grid_size - 1) as f64;
        let w = WeightPair::from_beta_sq(b2)?;
        let (x, y) = weighted_link_snrs(p, s, w);
        let ber = instantaneous_sum_ber(m, x, y);
        if ber < best.0 {
            best = (ber, b2);
        }
    }
    WeightPair::from_beta_sq(best.1)
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn merge(&mut self, other: Compensated) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Runs `step` over trials `0..trials` in parallel fixed-size blocks and
/// merges block results in trial order.
fn block_reduce<A, I, S, M>(ant: AntennaConfig, trials: u64, seed: u64, init: I, step: S, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, &LinkGains) + Sync,
    M: Fn(&mut A, A),
{
    let blocks = trials.div_ceil(BLOCK);
    let parts: Vec<Result<A>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            for t in b * BLOCK..((b + 1) * BLOCK).min(trials) {
                let mut rng = TrialRng::new(seed, t);
                let g = link_gains(&draw_channels(ant, &mut rng))?;
                step(&mut acc, &g);
            }
            Ok(acc)
        })
        .collect();
    let mut total = init();
    for p in parts {
        merge(&mut total, p?);
    }
    Ok(total)
}

/// Channel gains of trials `0..trials`, in order.
pub fn sample_gains(ant: AntennaConfig, trials: u64, seed: u64) -> Result<Vec<LinkGains>> {
    block_reduce(ant, trials, seed, Vec::new, |v, g| v.push(*g), |a, b| a.extend(b))
}

/// Sum-BER sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    s1: Compensated,
    s2: Compensated,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.s1.add(x);
        self.s2.add(x * x);
    }

    fn merge(&mut self, o: Moments) {
        self.s1.merge(o.s1);
        self.s2.merge(o.s2);
    }

    fn estimate(&self, n: u64) -> BerEstimate {
        let nf = n as f64;
        let mean = self.s1.value() / nf;
        let var = if n > 1 { ((self.s2.value() - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
        BerEstimate { mean, std_error: (var / nf).sqrt(), trials: n }
    }
}

/// One curve point for the batch estimator.
#[derive(Debug, Clone, Copy)]
pub struct SimCase {
    pub setup: Setup,
    pub mode: SnrMode,
    pub form: SnrForm,
}

/// Sample average of a·[Q(√(2bΓ_ARB)) + Q(√(2bΓ_BRA))]/log₂M.
pub fn semi_analytic_sum_ber(setup: &Setup, mode: SnrMode, form: SnrForm, trials: u64, seed: u64) -> Result<BerEstimate> {
    Ok(semi_analytic_sum_ber_batch(&[SimCase { setup: *setup, mode, form }], trials, seed)?[0])
}

/// Estimates several cases from the same channel draws.
///
/// All cases must share the antenna configuration; sharing draws makes
/// differences between cases far less noisy than independent runs.
pub fn semi_analytic_sum_ber_batch(cases: &[SimCase], trials: u64, seed: u64) -> Result<Vec<BerEstimate>> {
    if trials == 0 {
        return Err(Error::Contract("trials must be ≥ 1".into()));
    }
    let Some(first) = cases.first() else { return Ok(Vec::new()) };
    let ant = first.setup.antennas;
    if cases.iter().any(|c| c.setup.antennas != ant) {
        return Err(Error::Contract("all cases in a batch must share the antenna configuration".into()));
    }
    let evals: Vec<(SnrEvaluator, Modulation, PowerProfile)> = cases
        .iter()
        .map(|c| Ok((SnrEvaluator::new(&c.setup, c.mode, c.form)?, c.setup.modulation, c.setup.powers)))
        .collect::<Result<_>>()?;
    let moments = block_reduce(
        ant,
        trials,
        seed,
        || vec![Moments::default(); evals.len()],
        |acc, g| {
            for (m, (ev, md, pw)) in acc.iter_mut().zip(&evals) {
                let (x, y) = ev.eval(&InstantaneousSnrs::from_gains(g, pw));
                m.push(instantaneous_sum_ber(md, x, y));
            }
        },
        |a, b| a.iter_mut().zip(b).for_each(|(x, y)| x.merge(y)),
    )?;
    Ok(moments.iter().map(|m| m.estimate(trials)).collect())
}

/// D factors with their delta-method standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DFactorEstimate {
    pub factors: DFactors,
    pub std_error: DFactors,
}

#[derive(Debug, Clone, Copy, Default)]
struct RatioMoments {
    x: Compensated,
    y: Compensated,
    xx: Compensated,
    yy: Compensated,
    xy: Compensated,
}

impl RatioMoments {
    fn push(&mut self, x: f64, y: f64) {
        self.x.add(x);
        self.y.add(y);
        self.xx.add(x * x);
        self.yy.add(y * y);
        self.xy.add(x * y);
    }

    fn merge(&mut self, o: RatioMoments) {
        self.x.merge(o.x);
        self.y.merge(o.y);
        self.xx.merge(o.xx);
        self.yy.merge(o.yy);
        self.xy.merge(o.xy);
    }

    /// (1 + ȳ/x̄, standard error of the ratio)
    fn factor(&self, n: u64) -> (f64, f64) {
        let nf = n as f64;
        let (mx, my) = (self.x.value() / nf, self.y.value() / nf);
        let r = my / mx;
        let sxx = self.xx.value() / nf - mx * mx;
        let syy = self.yy.value() / nf - my * my;
        let sxy = self.xy.value() / nf - mx * my;
        let var = ((syy - 2.0 * r * sxy + r * r * sxx) / (mx * mx * (nf - 1.0))).max(0.0);
        (1.0 + r, var.sqrt())
    }
}

/// Mean-ratio D factors of the dual-reception protocols.
///
/// Branches use the bounded ("+1" dropped) SNRs, whose ratio does not depend
/// on the overall SNR scale. `w` enters the four-slot factors only.
pub fn estimate_d_factors(
    ant: AntennaConfig,
    pw: &PowerProfile,
    w: WeightPair,
    trials: u64,
    seed: u64,
) -> Result<DFactorEstimate> {
    if trials < 10_000 {
        return Err(Error::Contract(format!("D-factor estimation needs ≥ 10⁴ trials, got {trials}")));
    }
    let (a2, b2) = (w.alpha_sq(), w.beta_sq());
    let acc = block_reduce(
        ant,
        trials,
        seed,
        || [RatioMoments::default(); 4],
        |acc, g| {
            let s = InstantaneousSnrs::from_gains(g, pw);
            let (ar3, br3) = (s.g_ar, s.g_br);
            acc[0].push(half_branch(ar3, br3, s.g_rb, 0.0), half_branch(ar3, br3, s.g_rb_x, 0.0));
            acc[1].push(half_branch(br3, ar3, s.g_ra, 0.0), half_branch(br3, ar3, s.g_ra_x, 0.0));
            let (ar4, br4) = (a2 * s.g_ar, b2 * s.g_br);
            acc[2].push(half_branch(ar4, br4, s.g_rb, 0.0), half_branch(ar4, br4, s.g_rb_x, 0.0));
            acc[3].push(half_branch(br4, ar4, s.g_ra, 0.0), half_branch(br4, ar4, s.g_ra_x, 0.0));
        },
        |a, b| a.iter_mut().zip(b).for_each(|(x, y)| x.merge(y)),
    )?;
    let f: Vec<(f64, f64)> = acc.iter().map(|m| m.factor(trials)).collect();
    Ok(DFactorEstimate {
        factors: DFactors { d_arb_3: f[0].0, d_bra_3: f[1].0, d_arb_4: f[2].0, d_bra_4: f[3].0 },
        std_error: DFactors { d_arb_3: f[0].1, d_bra_3: f[1].1, d_arb_4: f[2].1, d_bra_4: f[3].1 },
    })
}
