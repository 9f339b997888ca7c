//! Adaptive Gauss–Kronrod 15(7) quadrature, with a square-root endpoint
//! substitution for integrands carrying inverse-square-root singularities.

/// Kronrod abscissae (positive half, QUADPACK values).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

/// Kronrod weights.
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

/// Embedded 7-point Gauss weights (odd Kronrod nodes).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    /// Accumulated local error estimates.
    pub error: f64,
    pub evals: usize,
}

/// One Gauss–Kronrod 15(7) panel on `[a, b]`; returns (integral, error).
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let fsum = f(c - x) + f(c + x);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    // Conservative error estimate from the embedded Gauss rule.
    (kron, (kron - gauss).abs())
}

/// Adaptive bisection to absolute tolerance `abs_tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, error: 0.0, evals: 0 };
    }
    const MAX_DEPTH: u32 = 52;
    let mut stack: Vec<(f64, f64, f64, u32)> = Vec::new();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evals = 0usize;
    stack.push((a, b, abs_tol, 0));
    while let Some((lo, hi, tol, depth)) = stack.pop() {
        let (v, e) = gk15(&mut f, lo, hi);
        evals += 15;
        if e <= tol || depth >= MAX_DEPTH || (hi - lo).abs() <= f64::EPSILON * (lo.abs() + hi.abs()) {
            value += v;
            error += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * tol, depth + 1));
            stack.push((mid, hi, 0.5 * tol, depth + 1));
        }
    }
    QuadResult { value, error, evals }
}

/// Integrates `f` over `[a, b]` where `f` may diverge like
/// `1/sqrt(x - a)` and/or `1/sqrt(b - x)`. The interval is split at the
/// midpoint and each singular half is mapped by `x = a + t^2`
/// (resp. `x = b - t^2`), which renders the integrand bounded.
pub fn integrate_sqrt_endpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    singular_a: bool,
    singular_b: bool,
    abs_tol: f64,
) -> QuadResult {
    if b <= a {
        return QuadResult { value: 0.0, error: 0.0, evals: 0 };
    }
    let mid = 0.5 * (a + b);
    let half_tol = 0.5 * abs_tol;
    let left = if singular_a {
        integrate(|t| 2.0 * t * f(a + t * t), 0.0, (mid - a).sqrt(), half_tol)
    } else {
        integrate(&mut f, a, mid, half_tol)
    };
    let right = if singular_b {
        integrate(|t| 2.0 * t * f(b - t * t), 0.0, (b - mid).sqrt(), half_tol)
    } else {
        integrate(&mut f, mid, b, half_tol)
    };
    QuadResult {
        value: left.value + right.value,
        error: left.error + right.error,
        evals: left.evals + right.evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x * x, 0.0, 1.0, 1e-12);
        assert_abs_diff_eq!(r.value, 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn sine_integral() {
        let r = integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-12);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn oscillatory() {
        // int_0^10 cos(20 x) dx = sin(200)/20.
        let r = integrate(|x| (20.0 * x).cos(), 0.0, 10.0, 1e-11);
        assert_abs_diff_eq!(r.value, (200.0f64).sin() / 20.0, epsilon = 1e-10);
    }

    #[test]
    fn inverse_sqrt_left() {
        let r = integrate_sqrt_endpoints(|x| 1.0 / x.sqrt(), 0.0, 1.0, true, false, 1e-10);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn inverse_sqrt_both_ends() {
        // int_0^1 dx / sqrt(x (1 - x)) = pi.
        let r = integrate_sqrt_endpoints(
            |x| 1.0 / (x * (1.0 - x)).sqrt(),
            0.0,
            1.0,
            true,
            true,
            1e-10,
        );
        assert_abs_diff_eq!(r.value, std::f64::consts::PI, epsilon = 1e-9);
    }

    #[test]
    fn shifted_sqrt_singularity() {
        // int_1^4 dx / sqrt(x - 1) = 2 sqrt(3).
        let r = integrate_sqrt_endpoints(|x| 1.0 / (x - 1.0).sqrt(), 1.0, 4.0, true, false, 1e-10);
        assert_abs_diff_eq!(r.value, 2.0 * 3.0f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn empty_and_reversed() {
        assert_eq!(integrate(|x| x, 2.0, 2.0, 1e-12).value, 0.0);
        let r = integrate_sqrt_endpoints(|x| x, 1.0, 0.5, false, false, 1e-12);
        assert_eq!(r.value, 0.0);
    }
}
