//! Mass and potential profiles of the two double-heterojunction models.
//!
//! Both models have a smooth interior law on [a1, a2] and constant clamps
//! outside, so m(z) and V(z) are continuous everywhere and the exterior
//! regions carry plane waves with k = sqrt(2 m (E - V0)) (units hbar = 1).

use crate::error::Error;

/// A mass/potential landscape with two junctions.
pub trait Profile {
    fn mass(&self, z: f64) -> f64;
    fn potential(&self, z: f64) -> f64;
    /// Left and right junction positions (a1, a2), a1 < a2.
    fn junctions(&self) -> (f64, f64);

    /// Constant (m, V) of the left exterior.  Profiles continuous at the
    /// junction can rely on this default.
    fn asymptotic_left(&self) -> (f64, f64) {
        let (a1, _) = self.junctions();
        (self.mass(a1), self.potential(a1))
    }

    /// Constant (m, V) of the right exterior.
    fn asymptotic_right(&self) -> (f64, f64) {
        let (_, a2) = self.junctions();
        (self.mass(a2), self.potential(a2))
    }
}

/// Diffused quantum well: V = -mu^2/(1+z^2), m = beta^2/(2(1+z^2)) for
/// |z| <= a0, both clamped to their junction values outside.
#[derive(Clone, Copy, Debug)]
pub struct WellModel {
    beta: f64,
    mu: f64,
    a0: f64,
}

impl WellModel {
    pub fn new(beta: f64, mu: f64, a0: f64) -> Result<Self, Error> {
        for (name, v) in [("beta", beta), ("mu", mu), ("a0", a0)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "well {name} must be finite and > 0, got {v}"
                )));
            }
        }
        if 4.0 * beta * beta * mu * mu <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "well requires 4 beta^2 mu^2 > 1, got {}",
                4.0 * beta * beta * mu * mu
            )));
        }
        Ok(WellModel { beta, mu, a0 })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Interior mass law and its first two z-derivatives (no clamp).
    pub fn mass_derivs(&self, z: f64) -> (f64, f64, f64) {
        let b2 = self.beta * self.beta;
        let s = 1.0 + z * z;
        let m = b2 / (2.0 * s);
        let dm = -b2 * z / (s * s);
        let d2m = -b2 * (1.0 - 3.0 * z * z) / (s * s * s);
        (m, dm, d2m)
    }
}

impl Profile for WellModel {
    fn mass(&self, z: f64) -> f64 {
        let zc = z.clamp(-self.a0, self.a0);
        self.beta * self.beta / (2.0 * (1.0 + zc * zc))
    }

    fn potential(&self, z: f64) -> f64 {
        let zc = z.clamp(-self.a0, self.a0);
        -self.mu * self.mu / (1.0 + zc * zc)
    }

    fn junctions(&self) -> (f64, f64) {
        (-self.a0, self.a0)
    }
}

/// Inverted Morse barrier: V = V0 e^{alpha z}(2 - e^{alpha z}),
/// m = m0 alpha^2 e^{-2 alpha z} for a1 <= z <= a2, clamped outside.
#[derive(Clone, Copy, Debug)]
pub struct BarrierModel {
    m0: f64,
    v0: f64,
    alpha: f64,
    a1: f64,
    a2: f64,
}

impl BarrierModel {
    pub fn new(m0: f64, v0: f64, alpha: f64, a1: f64, a2: f64) -> Result<Self, Error> {
        for (name, v) in [("m0", m0), ("v0", v0), ("alpha", alpha)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "barrier {name} must be finite and > 0, got {v}"
                )));
            }
        }
        if !(a1.is_finite() && a2.is_finite() && a1 < a2) {
            return Err(Error::InvalidParameter(format!(
                "barrier junctions must satisfy a1 < a2, got a1={a1} a2={a2}"
            )));
        }
        // 2 m0 V0 <= 1 is allowed here: the profile is a perfectly good
        // landscape for the numeric oracle, only the closed-form interior
        // solution refuses it (ImaginaryLambda1).
        Ok(BarrierModel { m0, v0, alpha, a1, a2 })
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    /// Interior mass law and its first two z-derivatives (no clamp).
    pub fn mass_derivs(&self, z: f64) -> (f64, f64, f64) {
        let m = self.m0 * self.alpha * self.alpha * (-2.0 * self.alpha * z).exp();
        let dm = -2.0 * self.alpha * m;
        let d2m = 4.0 * self.alpha * self.alpha * m;
        (m, dm, d2m)
    }
}

impl Profile for BarrierModel {
    fn mass(&self, z: f64) -> f64 {
        let zc = z.clamp(self.a1, self.a2);
        self.m0 * self.alpha * self.alpha * (-2.0 * self.alpha * zc).exp()
    }

    fn potential(&self, z: f64) -> f64 {
        let zc = z.clamp(self.a1, self.a2);
        let g = (self.alpha * zc).exp();
        self.v0 * g * (2.0 - g)
    }

    fn junctions(&self) -> (f64, f64) {
        (self.a1, self.a2)
    }
}

/// Either of the two concrete models, for interfaces that handle both.
#[derive(Clone, Copy, Debug)]
pub enum ScatterModel {
    Well(WellModel),
    Barrier(BarrierModel),
}

impl Profile for ScatterModel {
    fn mass(&self, z: f64) -> f64 {
        match self {
            ScatterModel::Well(m) => m.mass(z),
            ScatterModel::Barrier(m) => m.mass(z),
        }
    }

    fn potential(&self, z: f64) -> f64 {
        match self {
            ScatterModel::Well(m) => m.potential(z),
            ScatterModel::Barrier(m) => m.potential(z),
        }
    }

    fn junctions(&self) -> (f64, f64) {
        match self {
            ScatterModel::Well(m) => m.junctions(),
            ScatterModel::Barrier(m) => m.junctions(),
        }
    }
}

/// Exterior constants and channel wavenumbers at energy E.
#[derive(Clone, Copy, Debug)]
pub struct Asymptotics {
    pub m1: f64,
    pub m2: f64,
    pub v01: f64,
    pub v02: f64,
    pub k1: f64,
    pub k2: f64,
}

/// Computes both channel wavenumbers; errors unless both propagate.
pub fn asymptotics(profile: &impl Profile, e: f64) -> Result<Asymptotics, Error> {
    let (m1, v01) = profile.asymptotic_left();
    let (m2, v02) = profile.asymptotic_right();
    let threshold = v01.max(v02);
    if !e.is_finite() || e <= threshold {
        return Err(Error::EvanescentChannel { e, threshold });
    }
    Ok(Asymptotics {
        m1,
        m2,
        v01,
        v02,
        k1: (2.0 * m1 * (e - v01)).sqrt(),
        k2: (2.0 * m2 * (e - v02)).sqrt(),
    })
}
