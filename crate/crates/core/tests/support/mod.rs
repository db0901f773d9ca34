//! Reference densities, quadrature and closed forms used as test oracles.
//! Nothing here calls into the library's channel code.

#![allow(dead_code)]

use rand::Rng;
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

/// Gaussian tail `Q(x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Uncoded BPSK over AWGN at SNR `gamma` (linear).
pub fn bpsk_awgn_ber(gamma: f64) -> f64 {
    q_function((2.0 * gamma).sqrt())
}

/// Uncoded BPSK over Rayleigh fading at mean SNR `gamma` (linear).
pub fn bpsk_rayleigh_ber(gamma: f64) -> f64 {
    0.5 * (1.0 - (gamma / (1.0 + gamma)).sqrt())
}

/// Normalized alpha-mu amplitude density.
pub fn alpha_mu_pdf(t: f64, alpha: f64, mu: f64, z: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let log = alpha.ln() + mu * mu.ln() + (alpha * mu - 1.0) * t.ln()
        - alpha * mu * z.ln()
        - ln_gamma(mu)
        - mu * (t / z).powf(alpha);
    log.exp()
}

/// Mixture of gamma densities with `(weight, shape, rate)` components.
pub fn mixture_gamma_pdf(t: f64, comps: &[(f64, f64, f64)]) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    comps
        .iter()
        .map(|&(w, beta, zeta)| {
            (w.ln() + beta * zeta.ln() - ln_gamma(beta) + (beta - 1.0) * t.ln() - zeta * t).exp()
        })
        .sum()
}

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    adapt(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 40)
}

/// `integrate` over `panels` equal pieces, so that a narrow peak inside a
/// wide range is not missed by the first coarse estimate.
pub fn integrate_panels(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            integrate(
                f,
                a + i as f64 * h,
                a + (i + 1) as f64 * h,
                tol / panels as f64,
            )
        })
        .sum()
}

/// `∫_0^x pdf`, with `t = u^2` so that integrable singularities at the
/// origin become bounded.
pub fn integrate_from_zero(pdf: &dyn Fn(f64) -> f64, x: f64, tol: f64) -> f64 {
    // u^2 stays a normal float, so 0 * inf never appears at the origin
    let g = |u: f64| {
        let u = u.max(1e-150);
        2.0 * u * pdf(u * u)
    };
    integrate_panels(&g, 0.0, x.sqrt(), tol, 256)
}

/// CDF values at every sample (returned in sorted order with the samples),
/// accumulated piecewise between neighbouring sorted samples.
pub fn quadrature_cdf_at(samples: &[f64], pdf: &dyn Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let mut cdf = Vec::with_capacity(xs.len());
    let mut acc = integrate_from_zero(pdf, xs[0], 1e-12);
    cdf.push(acc);
    for w in xs.windows(2) {
        acc += integrate(pdf, w[0], w[1], 1e-13);
        cdf.push(acc);
    }
    (xs, cdf)
}

/// KS statistic from sorted samples and their CDF values.
pub fn ks_from_sorted(cdf: &[f64]) -> f64 {
    let n = cdf.len() as f64;
    cdf.iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / n).max((i + 1) as f64 / n - f))
        .fold(0.0, f64::max)
}

/// Random alpha-mu parameters with `alpha * mu >= 0.5`.
pub fn random_alpha_mu(rng: &mut impl Rng) -> (f64, f64, f64) {
    loop {
        let alpha = rng.random_range(0.5..4.0);
        let mu = rng.random_range(0.5..4.0);
        let z = rng.random_range(0.5..2.0);
        if alpha * mu >= 0.5 {
            return (alpha, mu, z);
        }
    }
}

/// Random 1 to 3 component mixture with shapes of at least 0.5.
pub fn random_mixture(rng: &mut impl Rng) -> Vec<(f64, f64, f64)> {
    let m = rng.random_range(1..=3);
    let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter()
        .map(|w| {
            (
                w / total,
                rng.random_range(0.5..5.0),
                rng.random_range(0.5..4.0),
            )
        })
        .collect()
}
