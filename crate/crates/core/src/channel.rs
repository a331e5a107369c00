//! Channel and link parameters, and the moment generating function of the
//! received SNR over i.i.d. kappa-mu shadowed antennas.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// 10^(x/10).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// 10 log10(x).
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// One antenna's kappa-mu shadowed fading description.
///
/// `gamma_bar` is the mean SNR per antenna in linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    kappa: f64,
    mu: f64,
    m: f64,
    gamma_bar: f64,
}

/// The two constants of the kappa-mu shadowed MGF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgfCoefficients {
    /// mu (1 + kappa) / gamma_bar
    pub cal_a: f64,
    /// m / (mu kappa + m), always in (0, 1]
    pub cal_b: f64,
}

impl ChannelParams {
    pub fn new(kappa: f64, mu: f64, m: f64, gamma_bar: f64) -> Result<Self> {
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::domain("kappa", kappa, "must be finite and >= 0"));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::domain("mu", mu, "must be finite and > 0"));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::domain("m", m, "must be finite and > 0"));
        }
        if !(gamma_bar > 0.0 && gamma_bar.is_finite()) {
            return Err(Error::domain(
                "gamma_bar",
                gamma_bar,
                "must be finite and > 0",
            ));
        }
        Ok(ChannelParams {
            kappa,
            mu,
            m,
            gamma_bar,
        })
    }

    /// Like [`ChannelParams::new`] with the mean SNR given in dB.
    pub fn from_db(kappa: f64, mu: f64, m: f64, gamma_bar_db: f64) -> Result<Self> {
        if !gamma_bar_db.is_finite() {
            return Err(Error::domain(
                "gamma_bar_db",
                gamma_bar_db,
                "must be finite",
            ));
        }
        Self::new(kappa, mu, m, db_to_linear(gamma_bar_db))
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }

    pub fn gamma_bar_db(&self) -> f64 {
        linear_to_db(self.gamma_bar)
    }

    pub fn coefficients(&self) -> MgfCoefficients {
        MgfCoefficients {
            cal_a: self.mu * (1.0 + self.kappa) / self.gamma_bar,
            cal_b: self.m / (self.mu * self.kappa + self.m),
        }
    }

    /// ln of the MGF E[exp(-s gamma_tot)] of the SNR summed over `antennas` i.i.d. branches.
    ///
    /// Written as L [(m - mu) ln(1 + s/A) - m ln(1 + s/(AB))], which is the
    /// product form with the A^mu B^m prefactor cancelled analytically, so it
    /// is exactly zero at s = 0 and stays accurate for small s.
    pub fn ln_mgf(&self, antennas: u32, s: f64) -> f64 {
        let MgfCoefficients { cal_a, cal_b } = self.coefficients();
        let per_branch =
            (self.m - self.mu) * (s / cal_a).ln_1p() - self.m * (s / (cal_a * cal_b)).ln_1p();
        antennas as f64 * per_branch
    }

    pub fn mgf(&self, antennas: u32, s: f64) -> f64 {
        self.ln_mgf(antennas, s).exp()
    }
}

/// Link-level parameters: antenna count, transmit SNR, and the delay exponent product A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    antennas: u32,
    rho: f64,
    a_exp: f64,
}

impl SystemParams {
    pub fn new(antennas: u32, rho: f64, a_exp: f64) -> Result<Self> {
        if antennas == 0 {
            return Err(Error::domain("antennas", 0.0, "need at least one antenna"));
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::domain("rho", rho, "must be finite and >= 0"));
        }
        if !(a_exp > 0.0 && a_exp.is_finite()) {
            return Err(Error::domain("a_exp", a_exp, "must be finite and > 0"));
        }
        Ok(SystemParams {
            antennas,
            rho,
            a_exp,
        })
    }

    /// Transmit SNR given in dB; it must be finite (use [`SystemParams::new`] for rho = 0).
    pub fn from_db(antennas: u32, rho_db: f64, a_exp: f64) -> Result<Self> {
        if !rho_db.is_finite() {
            return Err(Error::domain("rho_db", rho_db, "must be finite"));
        }
        Self::new(antennas, db_to_linear(rho_db), a_exp)
    }

    pub fn antennas(&self) -> u32 {
        self.antennas
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn rho_db(&self) -> f64 {
        linear_to_db(self.rho)
    }

    pub fn a_exp(&self) -> f64 {
        self.a_exp
    }
}

/// A = theta T B / ln 2 from the QoS exponent, block duration and bandwidth.
pub fn delay_exponent_product(theta: f64, block_t: f64, bandwidth: f64) -> Result<f64> {
    for (field, v) in [
        ("theta", theta),
        ("block_t", block_t),
        ("bandwidth", bandwidth),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(field, v, "must be finite and > 0"));
        }
    }
    Ok(theta * block_t * bandwidth / LN_2)
}

/// Builds channel parameters with the mean SNR given in dB.
pub fn make_channel(kappa: f64, mu: f64, m: f64, gamma_bar_db: f64) -> Result<ChannelParams> {
    ChannelParams::from_db(kappa, mu, m, gamma_bar_db)
}

/// (A, B) = (mu(1+kappa)/gamma_bar, m/(mu kappa + m)).
pub fn derived_coeffs(ch: &ChannelParams) -> (f64, f64) {
    let c = ch.coefficients();
    (c.cal_a, c.cal_b)
}

/// MGF of the SNR summed over `antennas` i.i.d. kappa-mu shadowed branches, for s >= 0.
pub fn mgf(ch: &ChannelParams, antennas: u32, s: f64) -> Result<f64> {
    if antennas == 0 {
        return Err(Error::domain("antennas", 0.0, "need at least one antenna"));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::domain(
            "s",
            s,
            "MGF argument must be finite and >= 0",
        ));
    }
    Ok(ch.mgf(antennas, s))
}
