//! Experiment description: protocols, antennas, powers, weights, modulation
//! and the coefficient tables of the unified end-to-end SNRs
//!
//! Γ_BRA = A_BRA γ_BR γ_RA / (B_BRA γ_BR + C_BRA γ_RA + 1)
//! Γ_ARB = A_ARB γ_AR γ_RB / (B_ARB γ_AR + C_ARB γ_RB + 1)

use crate::{Error, Result};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    TwoSlot,
    FirstThreeSlot,
    SecondThreeSlot,
    FirstFourSlot,
    SecondFourSlot,
}

impl Protocol {
    pub const ALL: [Protocol; 5] = [
        Protocol::TwoSlot,
        Protocol::FirstThreeSlot,
        Protocol::SecondThreeSlot,
        Protocol::FirstFourSlot,
        Protocol::SecondFourSlot,
    ];

    pub fn slot_count(self) -> u32 {
        match self {
            Protocol::TwoSlot => 2,
            Protocol::FirstThreeSlot | Protocol::SecondThreeSlot => 3,
            Protocol::FirstFourSlot | Protocol::SecondFourSlot => 4,
        }
    }

    /// Relay applies α-β weights to the two sources' signals.
    pub fn uses_weights(self) -> bool {
        matches!(self, Protocol::FirstThreeSlot | Protocol::SecondFourSlot)
    }

    /// Relay transmits in two slots, halving its per-slot power.
    pub fn relay_transmits_twice(self) -> bool {
        matches!(self, Protocol::SecondThreeSlot | Protocol::FirstFourSlot | Protocol::SecondFourSlot)
    }

    /// Destinations receive two relay copies (combined by MMSE).
    pub fn has_dual_reception(self) -> bool {
        matches!(self, Protocol::SecondThreeSlot | Protocol::SecondFourSlot)
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::TwoSlot => "two-slot",
            Protocol::FirstThreeSlot => "first-three-slot",
            Protocol::SecondThreeSlot => "second-three-slot",
            Protocol::FirstFourSlot => "first-four-slot",
            Protocol::SecondFourSlot => "second-four-slot",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let p = match s.trim().to_ascii_lowercase().as_str() {
            "two-slot" | "2s" | "2-slot" => Protocol::TwoSlot,
            "first-three-slot" | "1st3" => Protocol::FirstThreeSlot,
            "second-three-slot" | "2nd3" => Protocol::SecondThreeSlot,
            "first-four-slot" | "1st4" => Protocol::FirstFourSlot,
            "second-four-slot" | "2nd4" => Protocol::SecondFourSlot,
            other => return Err(Error::Config(format!("unknown protocol '{other}'"))),
        };
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AntennaConfig {
    pub m_a: u32,
    pub m_r: u32,
    pub m_b: u32,
}

impl AntennaConfig {
    pub fn new(m_a: u32, m_r: u32, m_b: u32) -> Result<Self> {
        if m_a == 0 || m_r == 0 || m_b == 0 {
            return Err(Error::Config(format!("antenna counts must be ≥ 1, got {m_a}×{m_r}×{m_b}")));
        }
        Ok(AntennaConfig { m_a, m_r, m_b })
    }

    /// Precondition of the analytic formulas: M_A ≥ M_R and M_B ≥ M_R.
    pub fn require_analytic(&self) -> Result<()> {
        if self.m_a < self.m_r || self.m_b < self.m_r {
            return Err(Error::Contract(format!(
                "analytic formulas need M_A ≥ M_R and M_B ≥ M_R, got {self}; swap the roles of the \
                 source and relay antenna counts in the Wishart tables to handle this case"
            )));
        }
        Ok(())
    }

    /// Diversity order M_R·min(M_A, M_B).
    pub fn diversity(&self) -> u32 {
        self.m_r * self.m_a.min(self.m_b)
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.m_a, self.m_r, self.m_b)
    }
}

/// Average transmit SNRs (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerProfile {
    pub rho_ar: f64,
    pub rho_br: f64,
    pub rho_ra: f64,
    pub rho_rb: f64,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

impl PowerProfile {
    /// Relay transmits with the same SNR toward both sources.
    pub fn new(rho_ar: f64, rho_br: f64, rho_relay: f64) -> Result<Self> {
        for (name, v) in [("rho_ar", rho_ar), ("rho_br", rho_br), ("rho_relay", rho_relay)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be a positive finite SNR, got {v}")));
            }
        }
        Ok(PowerProfile { rho_ar, rho_br, rho_ra: rho_relay, rho_rb: rho_relay })
    }

    /// All four SNRs equal.
    pub fn balanced(rho: f64) -> Result<Self> {
        Self::new(rho, rho, rho)
    }

    /// Same profile with every SNR multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        PowerProfile {
            rho_ar: self.rho_ar * k,
            rho_br: self.rho_br * k,
            rho_ra: self.rho_ra * k,
            rho_rb: self.rho_rb * k,
        }
    }
}

/// Powers from the relay-placement geometry: the relay sits at normalized
/// distance `d0` from A, and ρ_BR follows a simplified path-loss law.
pub fn power_profile(rho_ar_db: f64, d0: f64, pl_exponent: f64, relay_rho_db: Option<f64>) -> Result<PowerProfile> {
    if !(d0 > 0.0 && d0 < 1.0) {
        return Err(Error::Domain(format!("d0 must lie in (0, 1), got {d0}")));
    }
    if !(pl_exponent > 0.0) {
        return Err(Error::Domain(format!("path-loss exponent must be > 0, got {pl_exponent}")));
    }
    let br_db = rho_ar_db - 10.0 * pl_exponent * ((1.0 - d0) / d0).log10();
    let relay_db = relay_rho_db.unwrap_or(rho_ar_db);
    PowerProfile::new(db_to_linear(rho_ar_db), db_to_linear(br_db), db_to_linear(relay_db))
}

/// Relay weights with α² + β² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    pub alpha: f64,
    pub beta: f64,
}

impl WeightPair {
    pub fn from_beta_sq(beta_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta_sq) {
            return Err(Error::Domain(format!("β² must lie in [0, 1], got {beta_sq}")));
        }
        Ok(WeightPair { alpha: (1.0 - beta_sq).sqrt(), beta: beta_sq.sqrt() })
    }

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha < 0.0 || beta < 0.0 || (alpha * alpha + beta * beta - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("weights need α, β ≥ 0 and α² + β² = 1, got ({alpha}, {beta})")));
        }
        Ok(WeightPair { alpha, beta })
    }

    pub fn balanced() -> Self {
        WeightPair { alpha: std::f64::consts::FRAC_1_SQRT_2, beta: std::f64::consts::FRAC_1_SQRT_2 }
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha * self.alpha
    }

    pub fn beta_sq(&self) -> f64 {
        self.beta * self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Bpsk,
    Mpsk(u32),
    Mqam(u32),
}

/// BER metric constants: P ≈ a·E[Q(√(2bγ))] / log₂M.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulation {
    pub a: f64,
    pub b: f64,
    pub m: u32,
}

impl Modulation {
    pub fn bits(&self) -> f64 {
        (self.m as f64).log2()
    }
}

pub fn modulation_constants(scheme: Scheme) -> Result<Modulation> {
    let check = |m: u32| {
        if m < 2 || !m.is_power_of_two() {
            Err(Error::Domain(format!("constellation size must be a power of two ≥ 2, got {m}")))
        } else {
            Ok(m as f64)
        }
    };
    Ok(match scheme {
        Scheme::Bpsk => Modulation { a: 1.0, b: 1.0, m: 2 },
        Scheme::Mpsk(m) => {
            let mf = check(m)?;
            let s = (std::f64::consts::PI / mf).sin();
            Modulation { a: 2.0, b: s * s, m }
        }
        Scheme::Mqam(m) => {
            let mf = check(m)?;
            Modulation { a: 4.0 * (1.0 - 1.0 / mf.sqrt()), b: 3.0 / (2.0 * (mf - 1.0)), m }
        }
    })
}

/// Rate-normalized modulation: QPSK, 8-QAM or 16-QAM by slot count.
pub fn protocol_modulation(p: Protocol) -> Modulation {
    let scheme = match p.slot_count() {
        2 => Scheme::Mpsk(4),
        3 => Scheme::Mqam(8),
        _ => Scheme::Mqam(16),
    };
    modulation_constants(scheme).expect("fixed valid schemes")
}

/// One direction's (A, B, C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub a_arb: f64,
    pub b_arb: f64,
    pub c_arb: f64,
    pub a_bra: f64,
    pub b_bra: f64,
    pub c_bra: f64,
}

impl CoefficientSet {
    pub fn arb(&self) -> Triple {
        Triple { a: self.a_arb, b: self.b_arb, c: self.c_arb }
    }

    pub fn bra(&self) -> Triple {
        Triple { a: self.a_bra, b: self.b_bra, c: self.c_bra }
    }

    fn from_triples(arb: Triple, bra: Triple) -> Self {
        CoefficientSet { a_arb: arb.a, b_arb: arb.b, c_arb: arb.c, a_bra: bra.a, b_bra: bra.b, c_bra: bra.c }
    }
}

/// Mean-ratio factors folding the non-matched second reception into A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DFactors {
    pub d_arb_3: f64,
    pub d_bra_3: f64,
    pub d_arb_4: f64,
    pub d_bra_4: f64,
}

impl DFactors {
    /// Value at M_R = 1, where the second reception equals the first.
    pub fn single_antenna() -> Self {
        DFactors { d_arb_3: 2.0, d_bra_3: 2.0, d_arb_4: 2.0, d_bra_4: 2.0 }
    }
}

/// The six unified-SNR constants for a protocol.
///
/// For M_R = 1 the D factors are exactly 2 and `d` is ignored.
pub fn coefficient_set(
    p: Protocol,
    ant: AntennaConfig,
    pw: &PowerProfile,
    w: WeightPair,
    d: Option<&DFactors>,
) -> Result<CoefficientSet> {
    let r_a = pw.rho_ar / pw.rho_ra;
    let r_b = pw.rho_br / pw.rho_rb;
    let (a2, b2) = (w.alpha_sq(), w.beta_sq());
    let t = |a, b, c| Triple { a, b, c };
    let dual = if ant.m_r == 1 {
        DFactors::single_antenna()
    } else if p.has_dual_reception() {
        *d.ok_or_else(|| {
            Error::Contract(format!("{p} with M_R = {} needs D factors (estimate_d_factors)", ant.m_r))
        })?
    } else {
        DFactors::single_antenna()
    };
    let (arb, bra) = match p {
        Protocol::TwoSlot => (t(1.0, 1.0, 1.0 + r_b), t(1.0, 1.0, 1.0 + r_a)),
        Protocol::FirstThreeSlot => (t(a2, a2, 1.0 + b2 * r_b), t(b2, b2, 1.0 + a2 * r_a)),
        Protocol::SecondThreeSlot => (t(dual.d_arb_3 / 2.0, 1.0, 0.5 + r_b), t(dual.d_bra_3 / 2.0, 1.0, 0.5 + r_a)),
        Protocol::FirstFourSlot => (t(0.5, 1.0, 0.5), t(0.5, 1.0, 0.5)),
        Protocol::SecondFourSlot => (
            t(a2 * dual.d_arb_4 / 2.0, a2, 0.5 + b2 * r_b),
            t(b2 * dual.d_bra_4 / 2.0, b2, 0.5 + a2 * r_a),
        ),
    };
    Ok(CoefficientSet::from_triples(arb, bra))
}

/// Everything needed to evaluate one protocol at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setup {
    pub protocol: Protocol,
    pub antennas: AntennaConfig,
    pub powers: PowerProfile,
    pub weights: WeightPair,
    pub modulation: Modulation,
    pub dfactors: Option<DFactors>,
}

impl Setup {
    /// Rate-normalized modulation, balanced weights and no D factors.
    pub fn new(protocol: Protocol, antennas: AntennaConfig, powers: PowerProfile) -> Self {
        Setup {
            protocol,
            antennas,
            powers,
            weights: WeightPair::balanced(),
            modulation: protocol_modulation(protocol),
            dfactors: None,
        }
    }

    pub fn with_weights(mut self, w: WeightPair) -> Self {
        self.weights = w;
        self
    }

    pub fn with_dfactors(mut self, d: DFactors) -> Self {
        self.dfactors = Some(d);
        self
    }

    pub fn with_modulation(mut self, m: Modulation) -> Self {
        self.modulation = m;
        self
    }

    pub fn with_powers(mut self, pw: PowerProfile) -> Self {
        self.powers = pw;
        self
    }

    pub fn coefficients(&self) -> Result<CoefficientSet> {
        coefficient_set(self.protocol, self.antennas, &self.powers, self.weights, self.dfactors.as_ref())
    }
}

/// Contents of a scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub protocol: Option<Protocol>,
    pub antennas: AntennaConfig,
    pub rho_ar_db: f64,
    pub d0: f64,
    pub pl_exponent: f64,
    pub relay_rho_db: Option<f64>,
    pub beta: Option<f64>,
    pub trials: u64,
    pub seed: u64,
}

pub const DEFAULT_PL_EXPONENT: f64 = 3.0;
pub const DEFAULT_SEED: u64 = 20_110_301;

impl Default for ScenarioFile {
    fn default() -> Self {
        ScenarioFile {
            protocol: None,
            antennas: AntennaConfig { m_a: 2, m_r: 1, m_b: 2 },
            rho_ar_db: 30.0,
            d0: 0.5,
            pl_exponent: DEFAULT_PL_EXPONENT,
            relay_rho_db: None,
            beta: None,
            trials: 100_000,
            seed: DEFAULT_SEED,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("key '{key}': cannot parse '{v}'")))
}

impl ScenarioFile {
    /// Parse flat `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_over(text, ScenarioFile::default())
    }

    /// Like [`parse`](Self::parse), with missing keys taken from `base`.
    pub fn parse_over(text: &str, base: ScenarioFile) -> Result<Self> {
        let mut s = base;
        let (mut m_a, mut m_r, mut m_b) = (s.antennas.m_a, s.antennas.m_r, s.antennas.m_b);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "protocol" => {
                    let p = value.parse().map_err(|_| Error::Config(format!("key 'protocol': unknown protocol '{value}'")))?;
                    s.protocol = Some(p);
                }
                "m_a" => m_a = parse_num(key, value)?,
                "m_r" => m_r = parse_num(key, value)?,
                "m_b" => m_b = parse_num(key, value)?,
                "rho_ar_db" => s.rho_ar_db = parse_num(key, value)?,
                "d0" => s.d0 = parse_num(key, value)?,
                "pl_exponent" => s.pl_exponent = parse_num(key, value)?,
                "relay_rho_db" => s.relay_rho_db = Some(parse_num(key, value)?),
                "beta" => s.beta = Some(parse_num(key, value)?),
                "trials" => s.trials = parse_num(key, value)?,
                "seed" => s.seed = parse_num(key, value)?,
                other => return Err(Error::Config(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        s.antennas = AntennaConfig::new(m_a, m_r, m_b)?;
        if !(s.d0 > 0.0 && s.d0 < 1.0) {
            return Err(Error::Config(format!("key 'd0': must lie in (0, 1), got {}", s.d0)));
        }
        if !(s.pl_exponent > 0.0) {
            return Err(Error::Config(format!("key 'pl_exponent': must be > 0, got {}", s.pl_exponent)));
        }
        if let Some(b) = s.beta {
            if !(0.0..=1.0).contains(&b) {
                return Err(Error::Config(format!("key 'beta': β must lie in [0, 1], got {b}")));
            }
        }
        if s.trials == 0 {
            return Err(Error::Config("key 'trials': must be ≥ 1".into()));
        }
        Ok(s)
    }

    /// Power profile at the file's ρ_AR.
    pub fn powers(&self) -> Result<PowerProfile> {
        self.powers_at(self.rho_ar_db)
    }

    /// Power profile at another ρ_AR, keeping the relay offset from ρ_AR.
    pub fn powers_at(&self, rho_ar_db: f64) -> Result<PowerProfile> {
        let relay = self.relay_rho_db.map(|r| r - self.rho_ar_db + rho_ar_db);
        power_profile(rho_ar_db, self.d0, self.pl_exponent, relay)
    }

    /// Weights from the `beta` key (β, not β²) when present.
    pub fn weights(&self) -> Option<WeightPair> {
        self.beta.map(|b| WeightPair { alpha: (1.0 - b * b).sqrt(), beta: b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn protocol_properties() {
        let slots: Vec<_> = Protocol::ALL.iter().map(|p| p.slot_count()).collect();
        assert_eq!(slots, vec![2, 3, 3, 4, 4]);
        let w: Vec<_> = Protocol::ALL.iter().map(|p| p.uses_weights()).collect();
        assert_eq!(w, vec![false, true, false, false, true]);
        let twice: Vec<_> = Protocol::ALL.iter().map(|p| p.relay_transmits_twice()).collect();
        assert_eq!(twice, vec![false, false, true, true, true]);
        for p in Protocol::ALL {
            assert_eq!(p.name().parse::<Protocol>().unwrap(), p);
        }
        assert!("three-slot".parse::<Protocol>().is_err());
    }

    #[test]
    fn modulation_examples() {
        assert_eq!(modulation_constants(Scheme::Bpsk).unwrap(), Modulation { a: 1.0, b: 1.0, m: 2 });
        let q = modulation_constants(Scheme::Mpsk(4)).unwrap();
        assert!(close(q.a, 2.0, 0.0) && close(q.b, 0.5, 1e-15) && q.m == 4);
        let q = modulation_constants(Scheme::Mqam(16)).unwrap();
        assert!(close(q.a, 3.0, 1e-15) && close(q.b, 0.1, 1e-15) && q.m == 16);
        assert!(modulation_constants(Scheme::Mqam(12)).is_err());
        assert!(modulation_constants(Scheme::Mpsk(1)).is_err());
        assert_eq!(protocol_modulation(Protocol::TwoSlot), modulation_constants(Scheme::Mpsk(4)).unwrap());
        assert_eq!(protocol_modulation(Protocol::SecondThreeSlot), modulation_constants(Scheme::Mqam(8)).unwrap());
        assert_eq!(protocol_modulation(Protocol::SecondFourSlot), modulation_constants(Scheme::Mqam(16)).unwrap());
    }

    #[test]
    fn power_profile_examples() {
        let p = power_profile(40.0, 0.5, 2.7, None).unwrap();
        assert!(close(linear_to_db(p.rho_br), 40.0, 1e-12));
        let p = power_profile(40.0, 0.3, 3.0, None).unwrap();
        assert!(close(linear_to_db(p.rho_br), 40.0 - 30.0 * (7.0f64 / 3.0).log10(), 1e-12));
        assert!(close(linear_to_db(p.rho_br), 28.96, 0.005));
        assert_eq!(p.rho_ra, p.rho_ar);
        assert_eq!(p.rho_ra, p.rho_rb);
        let p = power_profile(40.0, 0.3, 3.0, Some(35.0)).unwrap();
        assert!(close(linear_to_db(p.rho_ra), 35.0, 1e-12));
        assert!(power_profile(40.0, 1.0, 3.0, None).is_err());
        assert!(power_profile(40.0, 0.0, 3.0, None).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let ant = AntennaConfig::new(2, 1, 2).unwrap();
        let pw = PowerProfile::balanced(100.0).unwrap();
        let w = WeightPair::balanced();
        let c = coefficient_set(Protocol::TwoSlot, ant, &pw, w, None).unwrap();
        assert_eq!((c.a_bra, c.b_bra, c.c_bra, c.a_arb, c.b_arb, c.c_arb), (1.0, 1.0, 2.0, 1.0, 1.0, 2.0));
        let c = coefficient_set(Protocol::FirstFourSlot, ant, &power_profile(10.0, 0.2, 3.0, None).unwrap(), w, None)
            .unwrap();
        assert_eq!((c.a_bra, c.b_bra, c.c_bra, c.a_arb, c.b_arb, c.c_arb), (0.5, 1.0, 0.5, 0.5, 1.0, 0.5));
        let ant2 = AntennaConfig::new(2, 2, 2).unwrap();
        let d = DFactors { d_arb_3: 1.25, d_bra_3: 1.25, d_arb_4: 1.5, d_bra_4: 1.5 };
        let c = coefficient_set(Protocol::SecondThreeSlot, ant2, &pw, w, Some(&d)).unwrap();
        assert_eq!((c.a_bra, c.b_bra, c.c_bra), (0.625, 1.0, 1.5));
        assert!(matches!(
            coefficient_set(Protocol::SecondThreeSlot, ant2, &pw, w, None),
            Err(Error::Contract(_))
        ));
        assert!(coefficient_set(Protocol::TwoSlot, ant2, &pw, w, None).is_ok());
    }

    #[test]
    fn single_relay_antenna_ignores_d_factors() {
        let ant = AntennaConfig::new(2, 1, 3).unwrap();
        let pw = power_profile(20.0, 0.35, 3.0, Some(25.0)).unwrap();
        let w = WeightPair::from_beta_sq(0.7).unwrap();
        let bogus = DFactors { d_arb_3: 1.1, d_bra_3: 1.2, d_arb_4: 1.3, d_bra_4: 1.4 };
        for p in Protocol::ALL {
            let a = coefficient_set(p, ant, &pw, w, None).unwrap();
            let b = coefficient_set(p, ant, &pw, w, Some(&bogus)).unwrap();
            assert_eq!(a, b);
        }
        // Table I values for the dual-reception protocols
        let c = coefficient_set(Protocol::SecondFourSlot, ant, &pw, w, None).unwrap();
        let r = pw.rho_ar / pw.rho_ra;
        assert!(close(c.a_bra, 0.7, 1e-15) && close(c.b_bra, 0.7, 1e-15));
        assert!(close(c.c_bra, 0.5 + 0.3 * r, 1e-14));
    }

    #[test]
    fn scenario_file_parsing() {
        let text = "# desk config\nprotocol = second-three-slot\nm_a=2\nm_r = 2\nm_b = 2\nrho_ar_db = 25.5\n\
                    d0 = 0.3\nbeta = 0.9 # trailing\ntrials = 1000\nseed = 7\n";
        let s = ScenarioFile::parse(text).unwrap();
        assert_eq!(s.protocol, Some(Protocol::SecondThreeSlot));
        assert_eq!(s.antennas, AntennaConfig { m_a: 2, m_r: 2, m_b: 2 });
        assert_eq!((s.rho_ar_db, s.d0, s.beta, s.trials, s.seed), (25.5, 0.3, Some(0.9), 1000, 7));
        let e = ScenarioFile::parse("m_a = 2\nfoo = 1\n").unwrap_err();
        assert!(matches!(&e, Error::Config(m) if m.contains("foo")));
        let e = ScenarioFile::parse("d0 = 1.5\n").unwrap_err();
        assert!(matches!(&e, Error::Config(m) if m.contains("d0")));
        let e = ScenarioFile::parse("m_r = x\n").unwrap_err();
        assert!(matches!(&e, Error::Config(m) if m.contains("m_r")));
        assert!(ScenarioFile::parse("m_a = 0").is_err());
        assert!(ScenarioFile::parse("just words").is_err());
    }
}
