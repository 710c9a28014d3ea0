//! Junction matching: glues the exterior plane waves to the interior basis
//! and extracts reflection/transmission amplitudes and flux coefficients.
//!
//! Both psi and (1/m) psi' are continuous at each junction, giving four
//! complex conditions for the four unknowns (R, c1, c2, T).  The system is
//! solved by Gaussian elimination with partial pivoting; a blown-up pivot
//! ratio is reported as `SingularSystem` rather than silently producing a
//! meaningless solution.

use num_complex::Complex64;

use crate::analytic::InteriorBasis;
use crate::error::Error;
use crate::models::{asymptotics, Asymptotics, Profile, ScatterModel};

/// Pivot-ratio ceiling of the 4x4 junction solve.
const CONDITION_LIMIT: f64 = 1e12;

/// Which side the unit-amplitude wave comes in from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Incidence {
    Left,
    Right,
}

/// A fully matched scattering state at one energy.
#[derive(Clone, Copy, Debug)]
pub struct ScatteringSolution {
    pub e: f64,
    pub incidence: Incidence,
    /// Reflected amplitude on the incidence side.
    pub r: Complex64,
    /// Transmitted amplitude on the far side.
    pub t: Complex64,
    /// Interior basis coefficients (first and second basis member).
    pub c1: Complex64,
    pub c2: Complex64,
    pub asym: Asymptotics,
}

/// |R|^2, |T|^2 and the flux-normalized coefficients Rc, Tc.
#[derive(Clone, Copy, Debug)]
pub struct FluxCoefficients {
    pub r_sq: f64,
    pub t_sq: f64,
    pub rc: f64,
    pub tc: f64,
}

impl ScatteringSolution {
    /// Flux coefficients; the transmitted flux carries the k m ratio of
    /// the two channels, oriented by the incidence side.
    pub fn coefficients(&self) -> FluxCoefficients {
        let r_sq = self.r.norm_sqr();
        let t_sq = self.t.norm_sqr();
        let ratio = match self.incidence {
            Incidence::Left => (self.asym.k2 * self.asym.m1) / (self.asym.k1 * self.asym.m2),
            Incidence::Right => (self.asym.k1 * self.asym.m2) / (self.asym.k2 * self.asym.m1),
        };
        FluxCoefficients {
            r_sq,
            t_sq,
            rc: r_sq,
            tc: ratio * t_sq,
        }
    }

    /// Rc + Tc - 1; zero up to rounding for any correct solution.
    pub fn flux_residual(&self) -> f64 {
        let c = self.coefficients();
        c.rc + c.tc - 1.0
    }
}

/// Solves the 4x4 complex system rows * x = rhs in place.
#[allow(clippy::needless_range_loop)]
fn solve4(
    mut rows: [[Complex64; 4]; 4],
    mut rhs: [Complex64; 4],
) -> Result<[Complex64; 4], Error> {
    let mut max_piv = 0.0f64;
    let mut min_piv = f64::INFINITY;
    for k in 0..4 {
        let mut pivot_row = k;
        let mut pivot_mag = rows[k][k].norm();
        for r in k + 1..4 {
            let mag = rows[r][k].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        max_piv = max_piv.max(pivot_mag);
        min_piv = min_piv.min(pivot_mag);
        if pivot_mag == 0.0 || max_piv / min_piv > CONDITION_LIMIT {
            return Err(Error::SingularSystem {
                cond: if pivot_mag == 0.0 {
                    f64::INFINITY
                } else {
                    max_piv / min_piv
                },
            });
        }
        rows.swap(k, pivot_row);
        rhs.swap(k, pivot_row);
        for r in k + 1..4 {
            let f = rows[r][k] / rows[k][k];
            for c in k..4 {
                let sub = f * rows[k][c];
                rows[r][c] -= sub;
            }
            let sub = f * rhs[k];
            rhs[r] -= sub;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 4];
    for k in (0..4).rev() {
        let mut acc = rhs[k];
        for c in k + 1..4 {
            acc -= rows[k][c] * x[c];
        }
        x[k] = acc / rows[k][k];
    }
    Ok(x)
}

/// Matches the interior basis to unit incidence from the given side.
pub fn solve_with_incidence(
    model: &ScatterModel,
    e: f64,
    incidence: Incidence,
) -> Result<ScatteringSolution, Error> {
    let asym = asymptotics(model, e)?;
    let basis = InteriorBasis::for_model(model, e)?;
    let (a1, a2) = model.junctions();
    let (s1, s2) = (basis.eval(a1)?, basis.eval(a2)?);
    // interior flux variable (1/m) psi' at each junction
    let (m_in1, m_in2) = (model.mass(a1), model.mass(a2));
    let (p11, w11) = (s1.0.psi, s1.0.dpsi / m_in1);
    let (p21, w21) = (s1.1.psi, s1.1.dpsi / m_in1);
    let (p12, w12) = (s2.0.psi, s2.0.dpsi / m_in2);
    let (p22, w22) = (s2.1.psi, s2.1.dpsi / m_in2);

    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let (e1p, e1m) = ((i * asym.k1 * a1).exp(), (-i * asym.k1 * a1).exp());
    let (e2p, e2m) = ((i * asym.k2 * a2).exp(), (-i * asym.k2 * a2).exp());
    let v1 = i * asym.k1 / asym.m1;
    let v2 = i * asym.k2 / asym.m2;

    // unknowns x = (R, c1, c2, T)
    let (rows, rhs) = match incidence {
        Incidence::Left => (
            [
                [e1m, -p11, -p21, zero],
                [-v1 * e1m, -w11, -w21, zero],
                [zero, p12, p22, -e2p],
                [zero, w12, w22, -v2 * e2p],
            ],
            [-e1p, -v1 * e1p, zero, zero],
        ),
        Incidence::Right => (
            [
                [e2p, -p12, -p22, zero],
                [v2 * e2p, -w12, -w22, zero],
                [zero, p11, p21, -e1m],
                [zero, w11, w21, v1 * e1m],
            ],
            [-e2m, v2 * e2m, zero, zero],
        ),
    };
    let x = solve4(rows, rhs)?;
    Ok(ScatteringSolution {
        e,
        incidence,
        r: x[0],
        c1: x[1],
        c2: x[2],
        t: x[3],
        asym,
    })
}

/// Matches for the conventional left-incident wave.
pub fn solve(model: &ScatterModel, e: f64) -> Result<ScatteringSolution, Error> {
    solve_with_incidence(model, e, Incidence::Left)
}

/// The matched wavefunction sampled at `zs` (left incidence), together
/// with the solution it came from.
pub fn wavefunction(
    model: &ScatterModel,
    e: f64,
    zs: &[f64],
) -> Result<(ScatteringSolution, Vec<Complex64>), Error> {
    let sol = solve(model, e)?;
    let basis = InteriorBasis::for_model(model, e)?;
    let (a1, a2) = model.junctions();
    let i = Complex64::i();
    let mut out = Vec::with_capacity(zs.len());
    for &z in zs {
        let psi = if z <= a1 {
            (i * sol.asym.k1 * z).exp() + sol.r * (-i * sol.asym.k1 * z).exp()
        } else if z >= a2 {
            sol.t * (i * sol.asym.k2 * z).exp()
        } else {
            let (b1, b2) = basis.eval(z)?;
            sol.c1 * b1.psi + sol.c2 * b2.psi
        };
        out.push(psi);
    }
    Ok((sol, out))
}

/// One energy of a sweep; failed energies keep their error.
#[derive(Debug)]
pub struct SweepPoint {
    pub e: f64,
    pub result: Result<ScatteringSolution, Error>,
}

/// Sequential sweep over an energy grid.
pub fn sweep_serial(model: &ScatterModel, energies: &[f64]) -> Vec<SweepPoint> {
    energies
        .iter()
        .map(|&e| SweepPoint {
            e,
            result: solve(model, e),
        })
        .collect()
}

/// Sweep over an energy grid; data-parallel when the `parallel` feature is
/// on (each energy is independent), sequential otherwise.  Output order
/// matches the input grid either way.
#[cfg(feature = "parallel")]
pub fn sweep(model: &ScatterModel, energies: &[f64]) -> Vec<SweepPoint> {
    use rayon::prelude::*;
    energies
        .par_iter()
        .map(|&e| SweepPoint {
            e,
            result: solve(model, e),
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn sweep(model: &ScatterModel, energies: &[f64]) -> Vec<SweepPoint> {
    sweep_serial(model, energies)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::models::{BarrierModel, WellModel};
    use crate::oracle;
    use proptest::prelude::*;

    fn well() -> ScatterModel {
        ScatterModel::Well(WellModel::new(4.0, 3.0, 2.0).unwrap())
    }

    fn fig3() -> ScatterModel {
        ScatterModel::Barrier(BarrierModel::new(0.4, 5.0, 1.0, -0.8, 0.8).unwrap())
    }

    fn fig4() -> ScatterModel {
        ScatterModel::Barrier(BarrierModel::new(0.4, 5.0, 1.0, -1.5, 1.5).unwrap())
    }

    fn assert_amp(got: Complex64, re: f64, im: f64, tol: f64) {
        let want = Complex64::new(re, im);
        assert!(
            (got - want).norm() <= tol,
            "got {got}, want {want}, diff {}",
            (got - want).norm()
        );
    }

    // Frozen amplitudes below come from a 40-digit multiprecision build of
    // the same matching system, cross-checked there against high-order
    // numerical integration.

    #[test]
    fn frozen_well_amplitudes() {
        let sol = solve(&well(), 40.0).unwrap();
        assert_amp(sol.r, 0.003507861570503447038037331, -0.01323706060910734400364755, 1e-11);
        assert_amp(sol.t, 0.9665434915196997747597271, 0.2561369831448419582063865, 1e-11);
        assert!(sol.flux_residual().abs() < 1e-12);

        let sol = solve(&well(), 10.0).unwrap();
        assert_amp(sol.r, -0.002264618507339397400882892, -0.001064061677090674391080719, 1e-12);
        assert_amp(sol.t, -0.4252586489046511726406273, 0.9050684067005953052648592, 1e-12);
    }

    #[test]
    fn frozen_barrier_amplitudes() {
        let sol = solve(&fig3(), 33.0).unwrap();
        assert_amp(sol.r, 0.02906630226147151537409376, 0.1386521101253394219618288, 1e-12);
        assert_amp(sol.t, -0.2040502938234701730554986, -0.3724784925416359321685974, 1e-12);

        let sol = solve(&fig3(), 8.0).unwrap();
        assert_amp(sol.r, 0.07304792806868035732669003, 0.4784960611939046027435856, 1e-12);
        assert_amp(sol.t, 0.0330732377556637001617544, -0.3166166307174246628589842, 1e-12);

        let sol = solve(&fig4(), 33.0).unwrap();
        assert_amp(sol.r, -0.06592961652231095162458118, 0.277947572161215278502565, 1e-11);
        assert_amp(sol.t, -0.1547976253023743091433776, -0.05559025279817218234940427, 1e-11);
    }

    #[test]
    fn analytic_amplitudes_match_the_integrator() {
        let cfg = oracle::OracleConfig::default();
        for (model, energies) in [
            (well(), [40.0, 10.0, 2.5]),
            (fig3(), [33.0, 8.0, 17.0]),
            (fig4(), [33.0, 21.0, 45.0]),
        ] {
            for e in energies {
                let sol = solve(&model, e).unwrap();
                let orc = oracle::amplitudes(&model, e, &cfg).unwrap();
                assert!(
                    (sol.r - orc.r).norm() < 1e-7 && (sol.t - orc.t).norm() < 1e-7,
                    "model {model:?} E={e}: analytic ({}, {}) vs oracle ({}, {})",
                    sol.r,
                    sol.t,
                    orc.r,
                    orc.t
                );
            }
        }
    }

    #[test]
    fn matched_wavefunction_is_continuous_at_junctions() {
        for (model, e) in [(well(), 40.0), (fig3(), 33.0), (fig4(), 21.0)] {
            let (a1, a2) = model.junctions();
            let eps = 1e-9;
            let zs = [a1 - eps, a1 + eps, a2 - eps, a2 + eps];
            let (_, psi) = wavefunction(&model, e, &zs).unwrap();
            assert!(
                (psi[0] - psi[1]).norm() < 1e-6,
                "left junction jump {}",
                (psi[0] - psi[1]).norm()
            );
            assert!(
                (psi[2] - psi[3]).norm() < 1e-6,
                "right junction jump {}",
                (psi[2] - psi[3]).norm()
            );
        }
    }

    #[test]
    fn transmission_is_reciprocal_even_for_asymmetric_profiles() {
        // the barrier has different exterior levels and masses on the two
        // sides, so this is a genuine constraint, not a symmetry triviality
        for e in [8.0, 17.5, 33.0, 52.0] {
            let left = solve_with_incidence(&fig3(), e, Incidence::Left).unwrap();
            let right = solve_with_incidence(&fig3(), e, Incidence::Right).unwrap();
            let (tl, tr) = (left.coefficients().tc, right.coefficients().tc);
            assert!(
                (tl - tr).abs() < 1e-10,
                "E={e}: Tc left {tl} vs right {tr}"
            );
            assert!(right.flux_residual().abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_keeps_order_and_reports_bad_energies() {
        // 3.0 sits below the barrier's left exterior level: evanescent
        let grid = [8.0, 3.0, 33.0];
        let points = sweep(&fig3(), &grid);
        assert_eq!(points.len(), 3);
        assert_eq!(points[0].e, 8.0);
        assert!(points[0].result.is_ok());
        assert!(matches!(
            points[1].result,
            Err(Error::EvanescentChannel { .. })
        ));
        assert!(points[2].result.is_ok());

        // parallel and serial sweeps agree bit for bit
        let serial = sweep_serial(&fig3(), &grid);
        for (p, s) in points.iter().zip(serial.iter()) {
            match (&p.result, &s.result) {
                (Ok(a), Ok(b)) => {
                    assert_eq!(a.r, b.r);
                    assert_eq!(a.t, b.t);
                }
                (Err(_), Err(_)) => {}
                _ => panic!("parallel/serial disagree at E={}", p.e),
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn flux_is_conserved_across_the_regime(e in 0.1f64..75.0) {
            let sol = solve(&well(), e).unwrap();
            prop_assert!(sol.flux_residual().abs() < 1e-10);
            if e > 3.5 {
                let sol = solve(&fig3(), e).unwrap();
                prop_assert!(sol.flux_residual().abs() < 1e-10);
            }
        }
    }
}
