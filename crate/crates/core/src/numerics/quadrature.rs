//! Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals,
//! and an iterated two-dimensional rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// Node and weight tables keep their published digits.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Values that can be integrated: reals, complex numbers and small tuples.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    /// Magnitude used for error control.
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
    fn as_complex(&self) -> Complex64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn as_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn as_complex(&self) -> Complex64 {
        *self
    }
}

/// A real integrand carried along with passive companion components.
///
/// Error control acts on `primary` only; the companions are integrated with
/// the same nodes, which is how split contributions of one smooth total are
/// reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tracked<const N: usize> {
    pub primary: f64,
    pub companions: [f64; N],
}

impl<const N: usize> Default for Tracked<N> {
    fn default() -> Self {
        Tracked {
            primary: 0.0,
            companions: [0.0; N],
        }
    }
}

impl<const N: usize> Add for Tracked<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Tracked {
            primary: self.primary + o.primary,
            companions: std::array::from_fn(|i| self.companions[i] + o.companions[i]),
        }
    }
}

impl<const N: usize> Sub for Tracked<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Tracked {
            primary: self.primary - o.primary,
            companions: std::array::from_fn(|i| self.companions[i] - o.companions[i]),
        }
    }
}

impl<const N: usize> Mul<f64> for Tracked<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Tracked {
            primary: self.primary * s,
            companions: self.companions.map(|c| c * s),
        }
    }
}

impl<const N: usize> QuadValue for Tracked<N> {
    fn zero() -> Self {
        Tracked::default()
    }
    fn magnitude(&self) -> f64 {
        self.primary.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.primary.is_finite() && self.companions.iter().all(|c| c.is_finite())
    }
    fn as_complex(&self) -> Complex64 {
        Complex64::new(
            self.primary,
            self.companions.first().copied().unwrap_or(0.0),
        )
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureOptions {
            rel_tol,
            ..Default::default()
        }
    }
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    resabs: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.a == other.a
    }
}

impl<T> Eq for Panel<T> {}

impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 15-point Kronrod panel with the embedded 7-point Gauss estimate.
///
/// Returns `(kronrod, error, resabs)`.
fn qk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Result<(T, f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |f: &mut F, x: f64| -> Result<T> {
        let v = f(x);
        if v.is_finite_value() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                at: Complex64::new(x, 0.0),
            })
        }
    };
    let fc = eval(f, center)?;
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = WGK[7] * fc.magnitude();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).magnitude();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let hl = half.abs();
    let result = resk * half;
    resabs *= hl;
    resasc *= hl;
    let mut err = ((resk - resg) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((result, err, resabs))
}

fn adaptive_finite<T: QuadValue, F: FnMut(f64) -> T>(
    f: &mut F,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult<T>> {
    let mut heap = BinaryHeap::new();
    let (v, e, ra) = qk15(f, a, b)?;
    let mut evaluations = 15;
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
        resabs: ra,
    });
    let mut subdivisions = 1;
    loop {
        let (total, err, resabs) = heap.iter().fold((T::zero(), 0.0, 0.0), |(t, e, r), p| {
            (t + p.value, e + p.error, r + p.resabs)
        });
        let target = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        let roundoff_floor = 50.0 * f64::EPSILON * resabs;
        if err <= target || err <= roundoff_floor {
            return Ok(finish(heap, evaluations));
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(Error::SubdivisionLimit {
                value: total.as_complex(),
                error_estimate: err,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // The panel cannot be split further in floating point; keep it.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            continue;
        }
        let (v1, e1, r1) = qk15(f, worst.a, mid)?;
        let (v2, e2, r2) = qk15(f, mid, worst.b)?;
        evaluations += 30;
        subdivisions += 1;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            resabs: r1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            resabs: r2,
        });
    }
}

fn finish<T: QuadValue>(heap: BinaryHeap<Panel<T>>, evaluations: usize) -> QuadratureResult<T> {
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let (value, error_estimate) = panels
        .iter()
        .fold((T::zero(), 0.0), |(t, e), p| (t + p.value, e + p.error));
    QuadratureResult {
        value,
        error_estimate,
        evaluations,
    }
}

/// Integrates `f` over `[a, b]`, where `b` may be `+inf`.
///
/// The semi-infinite case is mapped onto `[0, 1)` with `x = a + t / (1 - t)`.
pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult<T>> {
    if a.is_nan() || b.is_nan() || !a.is_finite() || b < a {
        return Err(Error::InvalidInterval { a, b });
    }
    if a == b {
        return Ok(QuadratureResult {
            value: T::zero(),
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if b.is_infinite() {
        let mut g = |t: f64| {
            let s = 1.0 - t;
            f(a + t / s) * (1.0 / (s * s))
        };
        adaptive_finite(&mut g, 0.0, 1.0, opts)
    } else {
        adaptive_finite(&mut f, a, b, opts)
    }
}

/// Adaptive integral of a real function with relative tolerance `rel_tol`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadratureResult<f64>> {
    integrate(f, a, b, &QuadratureOptions::with_rel_tol(rel_tol))
}

/// Integrates over consecutive segments delimited by `points`, which must be
/// non-decreasing. The last point may be `+inf`.
pub fn integrate_segments<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    points: &[f64],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult<T>> {
    let mut total = QuadratureResult {
        value: T::zero(),
        error_estimate: 0.0,
        evaluations: 0,
    };
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r = integrate(&mut f, w[0], w[1], opts)?;
        total.value = total.value + r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
    }
    Ok(total)
}

/// Iterated integral `int_0^{r_max} R dR int_0^{inner_max} f(R, y) dy`.
///
/// Both limits may be `+inf`. The returned error combines the outer estimate
/// and the worst relative inner estimate in quadrature.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    r_max: f64,
    inner_max: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult<f64>> {
    let inner_opts = QuadratureOptions {
        rel_tol: 0.1 * opts.rel_tol,
        ..*opts
    };
    let mut worst_inner = 0.0f64;
    let mut inner_evals = 0usize;
    let mut failure = None;
    let outer = integrate(
        |r: f64| {
            if failure.is_some() {
                return 0.0;
            }
            match integrate(|y| f(r, y), 0.0, inner_max, &inner_opts) {
                Ok(res) => {
                    inner_evals += res.evaluations;
                    if res.value != 0.0 {
                        worst_inner = worst_inner.max(res.error_estimate / res.value.abs());
                    }
                    r * res.value
                }
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        0.0,
        r_max,
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let outer = outer?;
    Ok(QuadratureResult {
        value: outer.value,
        error_estimate: outer.error_estimate.hypot(worst_inner * outer.value.abs()),
        evaluations: outer.evaluations + inner_evals,
    })
}

/// Fixed 15-point Kronrod rule on `[a, b]`: nodes and weights.
pub fn kronrod_nodes(a: f64, b: f64) -> [(f64, f64); 15] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 15];
    for j in 0..7 {
        out[2 * j] = (center - half * XGK[j], half * WGK[j]);
        out[2 * j + 1] = (center + half * XGK[j], half * WGK[j]);
    }
    out[14] = (center, half * WGK[7]);
    out
}

/// Five-point central difference of `f` at `x` with step `h`.
pub fn central_difference<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Five-point derivative with the default step `1e-6 * max(1, |x|)`.
pub fn derivative<F: FnMut(f64) -> f64>(f: F, x: f64) -> f64 {
    central_difference(f, x, 1e-6 * x.abs().max(1.0))
}
