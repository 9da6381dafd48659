//! Carlson symmetric integrals R_F and R_D by duplication.

use crate::error::{domain, Error, Result};

const MAX_DUPLICATIONS: usize = 100;

/// R_F(x, y, z) = ½ ∫₀^∞ dt / √((t+x)(t+y)(t+z)).
///
/// Arguments must be non-negative with at most one of them zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    const ERRTOL: f64 = 0.0025;
    for (name, v) in [("x", x), ("y", y), ("z", z)] {
        if !(v >= 0.0) || v.is_infinite() {
            return Err(domain("carlson_rf", name, v));
        }
    }
    let zeros = [x, y, z].iter().filter(|v| **v == 0.0).count();
    if zeros > 1 {
        return Err(domain("carlson_rf", "x + y", x + y));
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    for _ in 0..MAX_DUPLICATIONS {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lambda);
        yt = 0.25 * (yt + lambda);
        zt = 0.25 * (zt + lambda);
        let ave = (xt + yt + zt) / 3.0;
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) <= ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok(
                (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / ave.sqrt(),
            );
        }
    }
    Err(Error::NoConvergence {
        routine: "carlson_rf",
    })
}

/// R_D(x, y, z) = 3/2 ∫₀^∞ dt / ((t+z) √((t+x)(t+y)(t+z))).
///
/// x, y non-negative and not both zero; z positive.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    const ERRTOL: f64 = 0.0015;
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    for (name, v) in [("x", x), ("y", y)] {
        if !(v >= 0.0) || v.is_infinite() {
            return Err(domain("carlson_rd", name, v));
        }
    }
    if x + y == 0.0 {
        return Err(domain("carlson_rd", "x + y", 0.0));
    }
    if !(z > 0.0) || z.is_infinite() {
        return Err(domain("carlson_rd", "z", z));
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    for _ in 0..MAX_DUPLICATIONS {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (zt + lambda));
        fac *= 0.25;
        xt = 0.25 * (xt + lambda);
        yt = 0.25 * (yt + lambda);
        zt = 0.25 * (zt + lambda);
        let ave = 0.2 * (xt + yt + 3.0 * zt);
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) <= ERRTOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let poly = 1.0
                + ed * (-C1 + C5 * ed - C6 * dz * ee)
                + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea));
            return Ok(3.0 * sum + fac * poly / (ave * ave.sqrt()));
        }
    }
    Err(Error::NoConvergence {
        routine: "carlson_rd",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn equal_arguments() {
        for &t in &[1e-6, 0.3, 1.0, 7.5, 1e8] {
            assert!(rel(carlson_rf(t, t, t).unwrap(), t.powf(-0.5)) < 1e-14);
            assert!(rel(carlson_rd(t, t, t).unwrap(), t.powf(-1.5)) < 1e-14);
        }
    }

    #[test]
    fn closed_forms() {
        assert!(rel(carlson_rf(0.0, 1.0, 1.0).unwrap(), PI / 2.0) < 1e-15);
        assert!(rel(carlson_rf(0.0, 4.0, 4.0).unwrap(), PI / 4.0) < 1e-15);
        // R_D(0, y, y) = 3π / (4 y^{3/2})
        assert!(rel(carlson_rd(0.0, 2.0, 2.0).unwrap(), 3.0 * PI / (4.0 * 2f64.powf(1.5))) < 1e-14);
    }

    #[test]
    fn reference_values() {
        // Carlson (1995), Numer. Algorithms 10, test values.
        assert!(rel(carlson_rf(1.0, 2.0, 0.0).unwrap(), 1.3110287771461) < 1e-13);
        assert!(rel(carlson_rf(2.0, 3.0, 4.0).unwrap(), 0.58408284167715) < 1e-13);
        assert!(rel(carlson_rd(0.0, 2.0, 1.0).unwrap(), 1.7972103521034) < 1e-13);
        assert!(rel(carlson_rd(2.0, 3.0, 4.0).unwrap(), 0.16510527294261) < 1e-13);
    }

    #[test]
    fn domain_errors() {
        assert!(carlson_rf(0.0, 0.0, 1.0).is_err());
        assert!(carlson_rf(-1.0, 1.0, 1.0).is_err());
        assert!(carlson_rd(0.0, 0.0, 1.0).is_err());
        assert!(carlson_rd(1.0, 1.0, 0.0).is_err());
    }
}
