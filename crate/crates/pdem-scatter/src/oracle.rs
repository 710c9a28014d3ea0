//! Independent numerical reference for the scattering amplitudes.
//!
//! The mass-weighted equation is integrated directly as the first-order
//! system
//!
//! ```text
//! u' = m(z) w,        w' = 2 (V(z) - E) u,
//! ```
//!
//! where u = psi and w = (1/m) psi' are exactly the two quantities the
//! junction conditions keep continuous, so the integration crosses the
//! junctions without any special handling.  A classic fixed-step RK4 runs
//! right-to-left from the right junction, seeded with a unit transmitted
//! plane wave; decomposing the arrival state into incoming/outgoing waves
//! on the left gives R and T for unit left incidence.
//!
//! Every public solve is done twice, at the requested step count and at
//! double resolution; if the two disagree beyond `max_step_disagreement`
//! the result is rejected as `StepTooCoarse` instead of being returned
//! silently degraded.

use num_complex::Complex64;

use crate::error::Error;
use crate::models::{asymptotics, Asymptotics, Profile};

/// Step policy of the reference integrator.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// RK4 steps across the junction-to-junction span.
    pub steps: usize,
    /// Largest tolerated |amplitude(h) - amplitude(h/2)| before the solve
    /// is rejected as under-resolved.
    pub max_step_disagreement: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            steps: 10_000,
            max_step_disagreement: 1e-7,
        }
    }
}

/// Reflection/transmission amplitudes with the step-halving residual that
/// vouches for them.
#[derive(Clone, Copy, Debug)]
pub struct OracleSolution {
    pub r: Complex64,
    pub t: Complex64,
    /// |amplitude(h) - amplitude(h/2)|, the observed resolution error.
    pub step_disagreement: f64,
}

/// Probability current of a state (u, w = (1/m) psi'): j = Im(conj(u) w).
pub fn current(u: Complex64, w: Complex64) -> f64 {
    (u.conj() * w).im
}

#[inline]
fn rhs(
    profile: &impl Profile,
    e: f64,
    z: f64,
    u: Complex64,
    w: Complex64,
) -> (Complex64, Complex64) {
    (profile.mass(z) * w, 2.0 * (profile.potential(z) - e) * u)
}

/// One RK4 step of signed size h.
#[inline]
fn step(
    profile: &impl Profile,
    e: f64,
    z: f64,
    u: Complex64,
    w: Complex64,
    h: f64,
) -> (Complex64, Complex64) {
    let (du1, dw1) = rhs(profile, e, z, u, w);
    let (du2, dw2) = rhs(profile, e, z + 0.5 * h, u + 0.5 * h * du1, w + 0.5 * h * dw1);
    let (du3, dw3) = rhs(profile, e, z + 0.5 * h, u + 0.5 * h * du2, w + 0.5 * h * dw2);
    let (du4, dw4) = rhs(profile, e, z + h, u + h * du3, w + h * dw3);
    (
        u + h / 6.0 * (du1 + 2.0 * du2 + 2.0 * du3 + du4),
        w + h / 6.0 * (dw1 + 2.0 * dw2 + 2.0 * dw3 + dw4),
    )
}

fn seed_right(asym: &Asymptotics, z: f64) -> (Complex64, Complex64) {
    let u = (Complex64::i() * asym.k2 * z).exp();
    let w = Complex64::i() * asym.k2 / asym.m2 * u;
    (u, w)
}

/// Splits the arrival state at the left junction into incident and
/// reflected plane-wave amplitudes.
fn decompose_left(asym: &Asymptotics, z: f64, u: Complex64, w: Complex64) -> (Complex64, Complex64) {
    let ik1 = Complex64::i() * asym.k1;
    let phase = (ik1 * z).exp();
    let a = 0.5 * (u + asym.m1 * w / ik1) / phase;
    let b = 0.5 * (u - asym.m1 * w / ik1) * phase;
    (a, b)
}

/// Integrates right-to-left in n equal steps and returns (R, T) for unit
/// left incidence.  Single pass, no step-halving verification; meant for
/// convergence studies.
pub fn amplitudes_with_steps(
    profile: &impl Profile,
    e: f64,
    n: usize,
) -> Result<(Complex64, Complex64), Error> {
    if n == 0 {
        return Err(Error::InvalidParameter("oracle steps must be > 0".into()));
    }
    let asym = asymptotics(profile, e)?;
    let (a1, a2) = profile.junctions();
    let h = (a1 - a2) / n as f64;
    let (mut u, mut w) = seed_right(&asym, a2);
    let mut z = a2;
    for i in 0..n {
        (u, w) = step(profile, e, z, u, w, h);
        // recompute the abscissa instead of accumulating h, so the final
        // decomposition happens exactly at the junction
        z = if i + 1 == n {
            a1
        } else {
            a2 + (i + 1) as f64 * h
        };
    }
    if !(u.is_finite() && w.is_finite()) {
        return Err(Error::NonFinite("oracle state"));
    }
    let (a, b) = decompose_left(&asym, a1, u, w);
    Ok((b / a, 1.0 / a))
}

/// R and T for unit left incidence, verified by step halving.
pub fn amplitudes(
    profile: &impl Profile,
    e: f64,
    cfg: &OracleConfig,
) -> Result<OracleSolution, Error> {
    let (r1, t1) = amplitudes_with_steps(profile, e, cfg.steps)?;
    let (r2, t2) = amplitudes_with_steps(profile, e, cfg.steps * 2)?;
    let d = (r1 - r2).norm().max((t1 - t2).norm());
    if d > cfg.max_step_disagreement {
        return Err(Error::StepTooCoarse { rel_diff: d });
    }
    Ok(OracleSolution {
        r: r2,
        t: t2,
        step_disagreement: d,
    })
}

/// The full wavefunction for unit left incidence, sampled at `zs`
/// (plane waves outside the junctions, integrated values inside).
pub fn wavefunction(
    profile: &impl Profile,
    e: f64,
    zs: &[f64],
    cfg: &OracleConfig,
) -> Result<Vec<Complex64>, Error> {
    let sol = amplitudes(profile, e, cfg)?;
    let asym = asymptotics(profile, e)?;
    let (a1, a2) = profile.junctions();
    let ik1 = Complex64::i() * asym.k1;
    let ik2 = Complex64::i() * asym.k2;

    let mut out = vec![Complex64::new(0.0, 0.0); zs.len()];
    let mut interior: Vec<(usize, f64)> = Vec::new();
    for (i, &z) in zs.iter().enumerate() {
        if z <= a1 {
            out[i] = (ik1 * z).exp() + sol.r * (-ik1 * z).exp();
        } else if z >= a2 {
            out[i] = sol.t * (ik2 * z).exp();
        } else {
            interior.push((i, z));
        }
    }
    if interior.is_empty() {
        return Ok(out);
    }

    // sweep the integrator right-to-left, landing exactly on every
    // requested interior point; the integrated state carries a 1/T
    // normalization that is undone on sampling
    interior.sort_by(|p, q| q.1.partial_cmp(&p.1).unwrap());
    let h_target = (a2 - a1) / cfg.steps as f64;
    let (mut u, mut w) = seed_right(&asym, a2);
    let mut z = a2;
    for &(idx, zq) in &interior {
        let n = (((z - zq) / h_target).ceil() as usize).max(1);
        let h = (zq - z) / n as f64;
        for k in 0..n {
            (u, w) = step(profile, e, z, u, w, h);
            z = if k + 1 == n {
                zq
            } else {
                z + h
            };
        }
        out[idx] = sol.t * u;
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("oracle wavefunction"));
    }
    Ok(out)
}
