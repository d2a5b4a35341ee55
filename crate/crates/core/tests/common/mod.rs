//! Adaptive Gauss–Kronrod (7/15) integration, used only as an independent
//! reference in tests.
#![allow(dead_code, clippy::excessive_precision)]

use std::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = kronrod(f, a, b);
    if err <= tol || depth == 0 {
        return value;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// `∫_a^b f` to an absolute tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    adapt(&f, a, b, tol, 40)
}

/// `∫₀^∞ f` through `x = t/(1−t)`.
pub fn integrate_halfline<F: Fn(f64) -> f64>(f: F, tol: f64) -> f64 {
    let g = |t: f64| {
        let s = 1.0 - t;
        f(t / s) / (s * s)
    };
    // split so the peak of typical integrands near the origin is resolved
    integrate(g, 0.0, 0.5, 0.5 * tol) + integrate(g, 0.5, 1.0, 0.5 * tol)
}

/// `T_m(k) = (2/√π)∫₀^∞ e^{-μ²} μ^m/(1+k²μ²) dμ`.
pub fn t_moment(m: i32, k: f64) -> f64 {
    2.0 / PI.sqrt()
        * integrate_halfline(
            |mu| (-mu * mu).exp() * mu.powi(m) / (1.0 + k * k * mu * mu),
            1e-14,
        )
}

/// Entries `[a11, a12, a21, a22]` of
/// `(2/√π)∫₀^∞ e^{-μ²} K(μ) w(μ) dμ`.
pub fn kernel_matrix<W: Fn(f64) -> f64>(w: W) -> [f64; 4] {
    let c = 2.0 / PI.sqrt();
    let base = |mu: f64| (-mu * mu).exp() * w(mu);
    let s0 = c * integrate_halfline(base, 1e-14);
    let s1 = c * integrate_halfline(|mu| base(mu) * (mu * mu - 0.5), 1e-14);
    let s2 = c * integrate_halfline(
        |mu| {
            let d = mu * mu - 0.5;
            base(mu) * (d * d + 1.0)
        },
        1e-14,
    );
    [s0, s1, 2.0 / 3.0 * s1, 2.0 / 3.0 * s2]
}

pub fn max_diff(a: [f64; 4], m: tempjump::Matrix2) -> f64 {
    [a[0] - m.a11, a[1] - m.a12, a[2] - m.a21, a[3] - m.a22]
        .iter()
        .fold(0.0, |acc: f64, x| acc.max(x.abs()))
}
