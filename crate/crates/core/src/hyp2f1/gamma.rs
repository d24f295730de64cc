//! Complex log-gamma via the Lanczos approximation (g = 7, 9 coefficients),
//! with reflection for `Re z < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::Hyp2F1Error;

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

pub(crate) fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Log-gamma of a complex argument.
///
/// For `Re z >= 1/2` the imaginary part follows the analytic continuation
/// from the positive real axis (so `lngamma(1 + i)` has imaginary part
/// `-0.3016...`). In the reflected half-plane only `exp` of the result is
/// guaranteed; the imaginary part may differ from that branch by a multiple
/// of `2 pi`.
pub fn lngamma_complex(z: Complex64) -> Result<Complex64, Hyp2F1Error> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Hyp2F1Error::NonFinite);
    }
    if is_nonpositive_integer(z) {
        return Err(Hyp2F1Error::PoleAtNonPositiveInteger(z.re));
    }
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let reflected = lanczos(1.0 - z);
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - reflected);
    }
    Ok(lanczos(z))
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// `ln sin(pi z)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin w = (i/2) e^{-iw} (1 - e^{2iw}), and |e^{2iw}| <= 1 for Im w >= 0.
    let w = PI * z;
    let i = Complex64::i();
    let half_i = Complex64::new(0.0, 0.5);
    half_i.ln() - i * w + (1.0 - (2.0 * i * w).exp()).ln()
}
