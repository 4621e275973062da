//! Chebyshev expansion of exp(−iτH) applied to a vector.
//!
//! Used by the exact-propagation oracle when the Hilbert space is too large
//! for a per-step dense eigensolve.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// J_0(x) .. J_nmax(x) by Miller's backward recurrence.
pub fn bessel_j_sequence(x: f64, nmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let top = nmax.max(ax as usize);
    let mut m = top + 20 + libm::sqrt(40.0 * top as f64) as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let (mut jp1, mut j) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    for n in (0..=m).rev() {
        // j holds J_n (unnormalized), jp1 holds J_{n+1}
        if n <= nmax {
            out[n] = j;
        }
        if n % 2 == 0 {
            norm += if n == 0 { j } else { 2.0 * j };
        }
        if n == 0 {
            break;
        }
        let jm1 = 2.0 * n as f64 / ax * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            out.iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    for (n, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && n % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// Number of expansion terms needed for argument `x` at tolerance `tol`.
fn order_for(x: f64, tol: f64) -> Vec<f64> {
    let guess = (x.abs() + 10.0 * libm::cbrt(x.abs().max(1.0)) + 20.0) as usize;
    let mut j = bessel_j_sequence(x, guess);
    while j.len() > 1 && j.last().unwrap().abs() < tol && j[j.len() - 2].abs() < tol {
        j.pop();
    }
    j
}

/// ψ ← exp(−iτH)ψ for a Hermitian H with spectrum inside `[emin, emax]`.
///
/// `matvec(x, y)` must write y = Hx.
pub fn propagate<F>(psi: &mut [Complex64], tau: f64, emin: f64, emax: f64, mut matvec: F)
where
    F: FnMut(&[Complex64], &mut [Complex64]),
{
    let c = (emax + emin) / 2.0;
    let r = ((emax - emin) / 2.0).max(1e-12) * 1.01;
    let coeffs = order_for(tau * r, 1e-16);
    let dim = psi.len();
    let scaled = |x: &[Complex64], y: &mut [Complex64], mv: &mut F| {
        mv(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = (*yi - xi * c) / r;
        }
    };
    let mut t0: Vec<Complex64> = psi.to_vec();
    let mut t1 = vec![Complex64::new(0.0, 0.0); dim];
    let mut acc: Vec<Complex64> = t0.iter().map(|v| v * coeffs[0]).collect();
    if coeffs.len() > 1 {
        scaled(&t0, &mut t1, &mut matvec);
        let w = Complex64::new(0.0, -2.0 * coeffs[1]);
        for (a, v) in acc.iter_mut().zip(&t1) {
            *a += v * w;
        }
    }
    let mut t2 = vec![Complex64::new(0.0, 0.0); dim];
    let mut phase = Complex64::new(0.0, -1.0);
    for &jn in coeffs.iter().skip(2) {
        scaled(&t1, &mut t2, &mut matvec);
        for (t2i, t0i) in t2.iter_mut().zip(&t0) {
            *t2i = *t2i * 2.0 - t0i;
        }
        phase *= Complex64::new(0.0, -1.0);
        let w = phase * (2.0 * jn);
        for (a, v) in acc.iter_mut().zip(&t2) {
            *a += v * w;
        }
        core::mem::swap(&mut t0, &mut t1);
        core::mem::swap(&mut t1, &mut t2);
    }
    let global = Complex64::from_polar(1.0, -tau * c);
    for (p, a) in psi.iter_mut().zip(acc) {
        *p = a * global;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bessel_reference_values() {
        let j = bessel_j_sequence(1.0, 3);
        assert_relative_eq!(j[0], 0.765_197_686_557_966_6, epsilon = 1e-14);
        assert_relative_eq!(j[1], 0.440_050_585_744_933_5, epsilon = 1e-14);
        assert_relative_eq!(j[3], 0.019_563_353_982_668_4, epsilon = 1e-14);
        let j = bessel_j_sequence(50.0, 60);
        assert_relative_eq!(j[0], 0.055_812_327_669_251_86, epsilon = 1e-12);
        assert_relative_eq!(j[1], -0.097_511_828_125_175_42, epsilon = 1e-12);
        let j = bessel_j_sequence(-2.0, 2);
        assert_relative_eq!(j[1], -0.576_724_807_756_873_4, epsilon = 1e-14);
    }

    #[test]
    fn diagonal_exponential() {
        let e = [-3.0, 0.5, 7.0];
        let mut psi = vec![Complex64::new(1.0, 0.0); 3];
        let tau = 0.9;
        propagate(&mut psi, tau, -3.0, 7.0, |x, y| {
            for i in 0..3 {
                y[i] = x[i] * e[i];
            }
        });
        for i in 0..3 {
            let want = Complex64::from_polar(1.0, -tau * e[i]);
            assert_relative_eq!(psi[i].re, want.re, epsilon = 1e-13);
            assert_relative_eq!(psi[i].im, want.im, epsilon = 1e-13);
        }
    }
}
