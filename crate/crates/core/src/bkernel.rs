//! Box-like kernel functions underlying all landmark embeddings.
//!
//! Three kernels are provided:
//!
//! | Kernel | Formula | Role |
//! |--------|---------|------|
//! | [`b_exact`] | piecewise `sign(y)` / `sign(y)/2` / `0` | exact reference; Kronecker delta at half-integer width |
//! | [`b_kappa`] | `(tanh((x+y)/κ) − tanh((x−y)/κ)) / 2` | smooth surrogate with smoothing scale `κ` |
//! | [`pi_kappa`] | `b_kappa(sin(πx/T), sin(πy/T), κ)` | `T`-periodic variant for closed shapes |
//!
//! `b_kappa` converges pointwise to `b_exact` as `κ → 0` (away from
//! `|x| = |y|`) and behaves like `y/κ` as `κ → ∞`. It is even in `x`, odd in
//! `y`, strictly positive for `y > 0`, and scale invariant:
//! `b_kappa(a·x, a·y, a·κ) = b_kappa(x, y, κ)` for every `a > 0` (the kernel
//! depends only on the ratios `x/κ` and `y/κ`, so `κ` is a scale, not just a
//! smoothing amount). The row-sum identity is closed by
//! [`b_kappa_row_sum`].

/// Exact box kernel.
///
/// Returns `sign(y)` for `|x| < |y|`, `sign(y)/2` on the boundary
/// `|x| = |y|` (with `y ≠ 0`), and `0` otherwise. Total on all inputs;
/// `b_exact(n - j, 0.5)` reproduces the Kronecker delta for integers `n, j`.
///
/// Boundary comparisons are exact floating comparisons: this function is a
/// reference oracle meant for exactly representable inputs (integers,
/// halves), where fuzzy equality would corrupt the delta property.
pub fn b_exact(x: f64, y: f64) -> f64 {
    let (ax, ay) = (x.abs(), y.abs());
    if ax < ay {
        y.signum()
    } else if ax == ay && y != 0.0 {
        0.5 * y.signum()
    } else {
        0.0
    }
}

/// Smooth box kernel `(tanh((x+y)/κ) − tanh((x−y)/κ)) / 2`.
///
/// Evaluated through the equivalent product form
///
/// ```text
///            sinh(2y/κ)
///   ─────────────────────────────── = sign(y) · e^E · (1 − e^{−2|c|}) / ((1 + e^{−2|a|})(1 + e^{−2|b|}))
///   2 cosh((x+y)/κ) cosh((x−y)/κ)
/// ```
///
/// with `a = (x+y)/κ`, `b = (x−y)/κ`, `c = 2y/κ` and exponent
/// `E = |c| − |a| − |b| ≤ 0`, which avoids the catastrophic cancellation of
/// the naive tanh difference when both arguments saturate to the same sign.
/// `E` is resolved by sign analysis (`0` when `a` and `b` straddle zero,
/// `−2·min(|a|, |b|)` otherwise) so no large-magnitude subtraction occurs.
///
/// The result underflows to exactly `0` once `E` drops below roughly `−745`
/// (the evaluation point is many `κ` away from the box). That is acceptable
/// in embedding numerators; denominators of open shapes must use the closed
/// form [`b_kappa_row_sum`] instead of summed terms.
///
/// # Panics
///
/// Panics if `kappa` is not strictly positive.
pub fn b_kappa(x: f64, y: f64, kappa: f64) -> f64 {
    assert!(kappa > 0.0, "kappa must be positive, got {kappa}");
    let a = (x + y) / kappa;
    let b = (x - y) / kappa;
    let c = 2.0 * y / kappa;
    let same_sign = (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0);
    let expo = if same_sign { -2.0 * a.abs().min(b.abs()) } else { 0.0 };
    let num = -(-2.0 * c.abs()).exp_m1();
    let den = (1.0 + (-2.0 * a.abs()).exp()) * (1.0 + (-2.0 * b.abs()).exp());
    let sign = if y > 0.0 {
        1.0
    } else if y < 0.0 {
        -1.0
    } else {
        return 0.0;
    };
    sign * expo.exp() * num / den
}

/// Periodic smooth kernel `b_kappa(sin(πx/T), sin(πy/T), κ)`.
///
/// Periodic in `x` with period `T` (the sign flip of the sine over half a
/// period cancels against the evenness of [`b_kappa`]), and strictly
/// positive whenever `sin(πy/T) > 0`.
///
/// # Panics
///
/// Panics if `kappa` or `period` is not strictly positive.
pub fn pi_kappa(x: f64, y: f64, kappa: f64, period: f64) -> f64 {
    assert!(period > 0.0, "period must be positive, got {period}");
    let f = std::f64::consts::PI / period;
    b_kappa((f * x).sin(), (f * y).sin(), kappa)
}

/// Closed form of the row sum `Σ_{j=0}^{N−1} b_kappa(t − j, 1/2, κ)`.
///
/// The sum telescopes to `b_kappa(t − (N−1)/2, N/2, κ)`, which is strictly
/// positive for every real `t` and therefore the preferred denominator for
/// open-shape embeddings (the summed form underflows term by term at small
/// `κ`).
///
/// # Panics
///
/// Panics if `n_landmarks == 0` or `kappa` is not strictly positive.
pub fn b_kappa_row_sum(t: f64, n_landmarks: usize, kappa: f64) -> f64 {
    assert!(n_landmarks >= 1, "row sum needs at least one landmark");
    let n = n_landmarks as f64;
    b_kappa(t - 0.5 * (n - 1.0), 0.5 * n, kappa)
}
