//! Adaptive Gauss–Kronrod quadrature with breakpoints and power-law tails.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Relative size, compared with the accumulated integral, below which a tail is cut.
pub const TAIL_CUTOFF: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-300,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Tolerance {
            rel,
            ..Tolerance::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

impl Quad {
    fn zero() -> Self {
        Quad {
            value: 0.0,
            error: 0.0,
            evals: 0,
            converged: true,
        }
    }

    fn absorb(&mut self, other: Quad) {
        self.value += other.value;
        self.error += other.error;
        self.evals += other.evals;
        self.converged &= other.converged;
    }
}

/// One 15-point Kronrod panel. Returns the Kronrod value and `|K - G|`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive bisection on `[a, b]`, always splitting the worst panel.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: Tolerance) -> Quad {
    if a == b {
        return Quad::zero();
    }
    let (value, error) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut err = error;
    let mut evals = 15;
    loop {
        if err <= tol.abs.max(tol.rel * total.abs()) {
            break;
        }
        if heap.len() >= tol.max_intervals || !err.is_finite() {
            return Quad {
                value: total,
                error: err,
                evals,
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Panel is at machine resolution; keep it and stop refining.
            heap.push(worst);
            return Quad {
                value: total,
                error: err,
                evals,
                converged: false,
            };
        }
        let (v1, e1) = gk15(f, worst.a, m);
        let (v2, e2) = gk15(f, m, worst.b);
        evals += 30;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: m,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed the drift of the running updates.
    let (mut value, mut error) = (0.0, 0.0);
    for p in heap.iter() {
        value += p.value;
        error += p.error;
    }
    Quad {
        value,
        error,
        evals,
        converged: true,
    }
}

fn sorted_points(points: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = points.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();
    pts
}

/// Integral over `[min, max]` of `points`, split at every point.
pub fn integrate_points<F: Fn(f64) -> f64>(f: &F, points: &[f64], tol: Tolerance) -> Quad {
    let pts = sorted_points(points);
    let mut out = Quad::zero();
    for w in pts.windows(2) {
        out.absorb(adaptive(f, w[0], w[1], tol));
    }
    out
}

/// Integral over `[a, ∞)` for an integrand that decays like a power of `x`.
///
/// Panels double in width from `h0`. Once `|f(x)|·x` falls below
/// [`TAIL_CUTOFF`] of the running total the remainder is closed with
/// `f(X)·X/(P−1)`, the exponent `P` read off `f(X)` and `f(2X)`. A tail with
/// `P ≤ 1` is divergent and reported as `+∞`.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: &F, a: f64, h0: f64, tol: Tolerance) -> Quad {
    let mut out = Quad::zero();
    let mut x = a;
    let mut w = h0.max(1e-300);
    let mut panels = 0usize;
    loop {
        out.absorb(adaptive(f, x, x + w, tol));
        x += w;
        w *= 2.0;
        panels += 1;
        let fx = f(x).abs();
        let small = fx * (x - a).max(x.abs()) <= TAIL_CUTOFF * out.value.abs();
        if (panels >= 8 && small) || x > 1e250 || panels > 2000 {
            let f2 = f(2.0 * x).abs();
            if fx == 0.0 {
                break;
            }
            let p = if f2 > 0.0 {
                (fx / f2).ln() / std::f64::consts::LN_2
            } else {
                f64::INFINITY
            };
            if p <= 1.0 {
                out.value = f64::INFINITY;
                out.converged = false;
                break;
            }
            let tail = if p.is_finite() { fx * x / (p - 1.0) } else { 0.0 };
            out.value += tail;
            out.error += 0.1 * tail;
            break;
        }
    }
    out
}

/// Integral over the whole line. `breaks` are interior features (roots,
/// kinks, narrow peaks); `scale` sets the first tail panel width.
pub fn integrate_line<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], scale: f64, tol: Tolerance) -> Quad {
    let pts = sorted_points(breaks);
    let (lo, hi) = match (pts.first(), pts.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0.0, 0.0),
    };
    let mut out = integrate_points(f, &pts, tol);
    out.absorb(integrate_tail(f, hi, scale, tol));
    let g = |t: f64| f(-t);
    out.absorb(integrate_tail(&g, -lo, scale, tol));
    out
}

/// Integral over `[lo, hi]`, either end possibly infinite, split at `breaks`.
pub fn integrate_range<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], lo: f64, hi: f64, scale: f64, tol: Tolerance) -> Quad {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > lo && x < hi).collect();
    pts.extend([lo, hi].into_iter().filter(|x| x.is_finite()));
    let pts = sorted_points(&pts);
    if pts.is_empty() {
        return integrate_line(f, &[0.0], scale, tol);
    }
    let mut out = integrate_points(f, &pts, tol);
    if hi == f64::INFINITY {
        out.absorb(integrate_tail(f, pts[pts.len() - 1], scale, tol));
    }
    if lo == f64::NEG_INFINITY {
        let g = |t: f64| f(-t);
        out.absorb(integrate_tail(&g, -pts[0], scale, tol));
    }
    out
}

/// An expansion point of a segmented integral: features near `at` are
/// resolved on the scale `width`, in the local offset `u = x − at`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Anchor {
    pub at: f64,
    pub width: f64,
}

/// Integral over `[lo, hi]` split into one segment per anchor, each
/// integrated in its local offset.
///
/// `local(i, u)` must evaluate the integrand at `anchors[i].at + u` without
/// forming that sum, which keeps sharp peaks resolved below the spacing of
/// floating-point numbers near `at`. `features` are extra global breakpoints.
pub fn integrate_anchored<G: Fn(usize, f64) -> f64>(
    local: &G,
    anchors: &[Anchor],
    features: &[f64],
    lo: f64,
    hi: f64,
    scale: f64,
    tol: Tolerance,
) -> Quad {
    let mut order: Vec<usize> = (0..anchors.len()).collect();
    order.sort_by(|&i, &j| anchors[i].at.total_cmp(&anchors[j].at));
    order.dedup_by(|i, j| anchors[*i].at == anchors[*j].at);
    let mut out = Quad::zero();
    for (pos, &i) in order.iter().enumerate() {
        let at = anchors[i].at;
        let seg_lo = if pos == 0 {
            lo
        } else {
            0.5 * (anchors[order[pos - 1]].at + at)
        };
        let seg_hi = if pos + 1 == order.len() {
            hi
        } else {
            0.5 * (at + anchors[order[pos + 1]].at)
        };
        let mut breaks = peak_breaks(0.0, anchors[i].width, 16);
        breaks.extend(features.iter().map(|x| x - at));
        let g = |u: f64| local(i, u);
        out.absorb(integrate_range(&g, &breaks, seg_lo - at, seg_hi - at, scale, tol));
    }
    out
}

/// Breakpoints `root ± w·10^j` for `j = 0..decades`, resolving a peak of width `w`.
pub fn peak_breaks(root: f64, width: f64, decades: usize) -> Vec<f64> {
    let mut out = vec![root];
    let mut w = width;
    for _ in 0..decades {
        out.push(root - w);
        out.push(root + w);
        w *= 10.0;
    }
    out
}
