//! High-SNR behaviour: diversity order, origin derivatives η, array gains,
//! the sum-BER asymptote, weight optimization and inter-protocol gaps.
//!
//! With λ = Γ/ρ_AR, the PDF of λ starts as η·x^{d−1} near the origin and the
//! sum-BER behaves as
//!
//! P ≈ (1/log₂M)·[(2bρ_AR·G_ARB)^{−d} + (2bρ_AR·G_BRA)^{−d}],
//! G = (a·2^{d−1}·η·Γ(d+½)/(√π·d))^{−1/d}.

use crate::scenario::{
    AntennaConfig, CoefficientSet, DFactors, Modulation, PowerProfile, Protocol, Setup, WeightPair,
};
use crate::specfun::{gamma, wishart_max_eig_coeffs};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// f^{(t)}(0) of the four scaled link variables λ_AR, λ_RB, λ_BR, λ_RA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginDerivatives {
    pub ar: f64,
    pub rb: f64,
    pub br: f64,
    pub ra: f64,
    /// t_AR = t_RA = M_A·M_R − 1.
    pub t_a: u32,
    /// t_BR = t_RB = M_B·M_R − 1.
    pub t_b: u32,
}

/// Σ d_nm·C(t, m)·(−1)^{t+m}·n^{t+1} for the (ms, mr) table, exactly.
fn unit_origin_derivative(ms: u32, mr: u32) -> Result<(u32, f64)> {
    let tab = wishart_max_eig_coeffs(ms, mr)?;
    let t = ms * mr - 1;
    let mut acc = BigRational::zero();
    for (n, m, d) in tab.exact_entries() {
        if m > t {
            continue;
        }
        let mut binom = BigInt::one();
        for q in 0..m {
            binom = binom * BigInt::from(t - q) / BigInt::from(q + 1);
        }
        let term = d * BigRational::from_integer(binom * BigInt::from(n).pow(t + 1));
        if (t + m) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let v = acc.to_f64().ok_or_else(|| Error::Numerical("origin derivative overflow".into()))?;
    Ok((t, v))
}

/// Origin derivatives for the links of both paths.
///
/// λ_AR scales the unit eigenvalue by A_ARB/C_ARB, λ_RB by
/// A_ARB·ρ_RB/(B_ARB·ρ_AR), λ_BR by A_BRA·ρ_BR/(C_BRA·ρ_AR) and λ_RA by
/// A_BRA·ρ_RA/(B_BRA·ρ_AR).
pub fn origin_derivatives(coeffs: &CoefficientSet, ant: AntennaConfig, pw: &PowerProfile) -> Result<OriginDerivatives> {
    ant.require_analytic()?;
    let (t_a, ua) = unit_origin_derivative(ant.m_a, ant.m_r)?;
    let (t_b, ub) = unit_origin_derivative(ant.m_b, ant.m_r)?;
    let c = coeffs;
    let pow = |s: f64, t: u32| s.powi(t as i32 + 1);
    Ok(OriginDerivatives {
        ar: ua * pow(c.c_arb / c.a_arb, t_a),
        rb: ub * pow(c.b_arb * pw.rho_ar / (c.a_arb * pw.rho_rb), t_b),
        br: ub * pow(c.c_bra * pw.rho_ar / (c.a_bra * pw.rho_br), t_b),
        ra: ua * pow(c.b_bra * pw.rho_ar / (c.a_bra * pw.rho_ra), t_a),
        t_a,
        t_b,
    })
}

/// (η_ARB, η_BRA): the dominant link derivatives over Γ(d).
pub fn eta_pair(coeffs: &CoefficientSet, ant: AntennaConfig, pw: &PowerProfile) -> Result<(f64, f64)> {
    let f = origin_derivatives(coeffs, ant, pw)?;
    let norm = gamma(ant.diversity() as f64);
    let (arb, bra) = match ant.m_a.cmp(&ant.m_b) {
        std::cmp::Ordering::Greater => (f.rb, f.br),
        std::cmp::Ordering::Less => (f.ar, f.ra),
        std::cmp::Ordering::Equal => (f.ar + f.rb, f.br + f.ra),
    };
    Ok((arb / norm, bra / norm))
}

/// G from (a, d, η).
pub fn array_gain(a: f64, d: u32, eta: f64) -> f64 {
    let df = d as f64;
    let inner = a * 2f64.powi(d as i32 - 1) * eta * gamma(df + 0.5) / (std::f64::consts::PI.sqrt() * df);
    inner.powf(-1.0 / df)
}

/// Diversity order, η terms and array gains of one setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrProfile {
    pub d: u32,
    pub eta_arb: f64,
    pub eta_bra: f64,
    pub g_arb: f64,
    pub g_bra: f64,
}

impl HighSnrProfile {
    pub fn from_setup(setup: &Setup) -> Result<Self> {
        let coeffs = setup.coefficients()?;
        let (eta_arb, eta_bra) = eta_pair(&coeffs, setup.antennas, &setup.powers)?;
        let d = setup.antennas.diversity();
        let a = setup.modulation.a;
        Ok(HighSnrProfile { d, eta_arb, eta_bra, g_arb: array_gain(a, d, eta_arb), g_bra: array_gain(a, d, eta_bra) })
    }
}

/// The high-SNR sum-BER asymptote at ρ_AR = `rho_ar` (linear).
pub fn high_snr_sum_ber(profile: &HighSnrProfile, m: &Modulation, rho_ar: f64) -> f64 {
    let d = profile.d as i32;
    let x = 2.0 * m.b * rho_ar;
    ((x * profile.g_arb).powi(-d) + (x * profile.g_bra).powi(-d)) / m.bits()
}

fn eq18_at(setup: &Setup) -> Result<f64> {
    let p = HighSnrProfile::from_setup(setup)?;
    Ok(high_snr_sum_ber(&p, &setup.modulation, setup.powers.rho_ar))
}

/// β² minimizing the asymptote for a single antenna at every node.
pub fn beta_closed_form(p: Protocol, ant: AntennaConfig, pw: &PowerProfile) -> Result<WeightPair> {
    if (ant.m_a, ant.m_r, ant.m_b) != (1, 1, 1) {
        return Err(Error::Contract(format!(
            "closed-form weights need a 1x1x1 network, got {ant}; use beta_numeric"
        )));
    }
    let split = match p {
        Protocol::FirstThreeSlot => 1.0,
        Protocol::SecondFourSlot => 0.5,
        _ => return Err(Error::Contract(format!("{p} has no relay weights"))),
    };
    let (ra, rb) = (pw.rho_ra * split, pw.rho_rb * split);
    let x = (pw.rho_ar * (pw.rho_ar + ra) / ra).sqrt();
    let y = (pw.rho_br * (pw.rho_br + rb) / rb).sqrt();
    WeightPair::from_beta_sq(x / (x + y))
}

/// β² minimizing the asymptote: 101-point scan, then golden section to
/// `tolerance` in β². D factors in `setup` are held fixed.
pub fn beta_numeric(setup: &Setup, tolerance: f64) -> Result<WeightPair> {
    if !setup.protocol.uses_weights() {
        return Err(Error::Contract(format!("{} has no relay weights", setup.protocol)));
    }
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let objective = |b2: f64| -> Result<f64> {
        let s = setup.with_weights(WeightPair::from_beta_sq(b2)?);
        Ok(match eq18_at(&s) {
            Ok(v) if v.is_finite() => v,
            Ok(_) | Err(Error::Domain(_)) => f64::INFINITY,
            Err(e) => return Err(e),
        })
    };
    const GRID: usize = 100;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..=GRID {
        let v = objective(i as f64 / GRID as f64)?;
        if v < best.1 {
            best = (i, v);
        }
    }
    if !best.1.is_finite() {
        return Err(Error::Numerical("asymptote is infinite for every weight".into()));
    }
    let mut lo = best.0.saturating_sub(1) as f64 / GRID as f64;
    let mut hi = (best.0 + 1).min(GRID) as f64 / GRID as f64;
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (objective(x1)?, objective(x2)?);
    while hi - lo > tolerance {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = objective(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = objective(x2)?;
        }
    }
    WeightPair::from_beta_sq(0.5 * (lo + hi))
}

/// SNR gap in dB between a worse and a better setup at equal diversity.
///
/// The gap is the horizontal offset between the two asymptotes when each is
/// plotted against ρ_AR/log₂M. For equal constellation sizes this is the
/// plain ρ_AR offset.
pub fn high_snr_gap(worse: &Setup, better: &Setup) -> Result<f64> {
    let d = worse.antennas.diversity();
    if better.antennas.diversity() != d {
        return Err(Error::Contract(format!(
            "gap needs equal diversity orders, got {d} and {}",
            better.antennas.diversity()
        )));
    }
    let (ei_arb, ei_bra) = eta_pair(&worse.coefficients()?, worse.antennas, &worse.powers)?;
    let (ej_arb, ej_bra) = eta_pair(&better.coefficients()?, better.antennas, &better.powers)?;
    let (mi, mj) = (&worse.modulation, &better.modulation);
    let first = 10.0 * (mj.b * mj.bits() / (mi.b * mi.bits())).log10();
    let second = 10.0 / d as f64
        * (mi.a * mj.bits() * (ei_arb + ei_bra) / (mj.a * mi.bits() * (ej_arb + ej_bra))).log10();
    Ok(first + second)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub protocol: Protocol,
    pub weights: WeightPair,
    /// Asymptote times ρ_AR^d.
    pub coefficient: f64,
    /// Asymptote times (ρ_AR/log₂M)^d, the quantity the gaps compare.
    pub per_bit_coefficient: f64,
    /// dB behind the best protocol.
    pub gap_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapTable {
    pub best: Protocol,
    pub rows: Vec<GapRow>,
}

/// Ranks the setups and reports gaps from the best.
///
/// [`high_snr_gap`] compares SNR per bit, ρ_AR/log₂M, so the ranking uses
/// the asymptote at fixed ρ_AR/log₂M. With equal constellations this is the
/// same as ranking at fixed ρ_AR.
pub fn gap_table(setups: &[Setup]) -> Result<GapTable> {
    if setups.is_empty() {
        return Err(Error::Contract("gap table needs at least one protocol".into()));
    }
    let mut coefs = Vec::with_capacity(setups.len());
    for s in setups {
        let p = HighSnrProfile::from_setup(s)?;
        let c = high_snr_sum_ber(&p, &s.modulation, 1.0);
        coefs.push((c, c * s.modulation.bits().powi(-(p.d as i32))));
    }
    let best = (0..setups.len()).min_by(|&i, &j| coefs[i].1.total_cmp(&coefs[j].1)).expect("non-empty");
    let mut rows = Vec::with_capacity(setups.len());
    for (k, (s, c)) in setups.iter().zip(&coefs).enumerate() {
        let gap_db = if k == best { 0.0 } else { high_snr_gap(s, &setups[best])? };
        rows.push(GapRow {
            protocol: s.protocol,
            weights: s.weights,
            coefficient: c.0,
            per_bit_coefficient: c.1,
            gap_db,
        });
    }
    Ok(GapTable { best: setups[best].protocol, rows })
}

/// All five protocols for one network; weighted protocols get β from
/// [`beta_numeric`] under the given powers.
pub fn protocol_family(
    ant: AntennaConfig,
    pw: &PowerProfile,
    dfactors: Option<DFactors>,
    beta_tolerance: f64,
) -> Result<Vec<Setup>> {
    Protocol::ALL
        .iter()
        .map(|&p| {
            let mut s = Setup::new(p, ant, *pw);
            if let Some(d) = dfactors {
                s = s.with_dfactors(d);
            }
            if p.uses_weights() {
                s = s.with_weights(beta_numeric(&s, beta_tolerance)?);
            }
            Ok(s)
        })
        .collect()
}
