//! Small numerical kernels shared by the engines: cascade summation,
//! Gauss-Legendre quadrature, golden-section search and the two Fourier
//! sums (chirp-z on arbitrary uniform grids, centred inverse DFT).

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::ops::Add;

const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (cascade) summation. The result depends only on the slice, never
/// on how the caller partitioned the work.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().fold(T::default(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Gauss-Legendre nodes and weights on [-1, 1] via Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

thread_local! {
    static GL10: (Vec<f64>, Vec<f64>) = gauss_legendre(10);
}

/// Composite 10-point Gauss-Legendre rule on [lo, hi], split at `breaks` and
/// into panels no longer than `max_len`.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    max_len: f64,
) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| *b > lo && *b < hi)
        .collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut parts = Vec::new();
    GL10.with(|(nodes, weights)| {
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let pieces = ((b - a) / max_len).ceil().max(1.0) as usize;
            let step = (b - a) / pieces as f64;
            for p in 0..pieces {
                let pa = a + p as f64 * step;
                let half = 0.5 * step;
                let mid = pa + half;
                let s: f64 = nodes
                    .iter()
                    .zip(weights)
                    .map(|(t, wt)| wt * f(mid + half * t))
                    .sum();
                parts.push(s * half);
            }
        }
    });
    pairwise_sum(&parts)
}

/// Golden-section minimisation of a unimodal `f` on [a, b] down to width `tol`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    if fm < fx {
        (mid, fm)
    } else {
        (x, fx)
    }
}

/// Evaluates `sum_k a_k exp(i (x0 + k dx)(z0 + j dz))` for `j in 0..m` with
/// Bluestein's chirp-z factorisation.
pub fn chirp_z(a: &[Complex64], x0: f64, dx: f64, z0: f64, dz: f64, m: usize) -> Vec<Complex64> {
    let n = a.len();
    if n == 0 || m == 0 {
        return vec![Complex64::new(0.0, 0.0); m];
    }
    let theta = dx * dz;
    let chirp = |k: i64| Complex64::from_polar(1.0, 0.5 * theta * ((k * k) as f64));
    let len = (n + m - 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    let mut u = vec![Complex64::new(0.0, 0.0); len];
    for (k, (slot, ak)) in u.iter_mut().zip(a).enumerate() {
        let phase = k as f64 * dx * z0;
        *slot = ak * Complex64::from_polar(1.0, phase) * chirp(k as i64);
    }
    let mut v = vec![Complex64::new(0.0, 0.0); len];
    for l in 0..m {
        v[l] = chirp(l as i64).conj();
    }
    for l in 1..n {
        v[len - l] = chirp(l as i64).conj();
    }
    fwd.process(&mut u);
    fwd.process(&mut v);
    for (ui, vi) in u.iter_mut().zip(&v) {
        *ui *= vi;
    }
    inv.process(&mut u);
    let scale = 1.0 / len as f64;
    (0..m)
        .map(|j| {
            let zj = z0 + j as f64 * dz;
            u[j] * scale * chirp(j as i64) * Complex64::from_polar(1.0, x0 * zj)
        })
        .collect()
}

/// Centred inverse transform between the offset frequency grid
/// `z_j = (j - n/2 + 1/2) dz` and the dual grid `x_k = (k - n/2) dx`,
/// `dx = 2 pi / (n dz)`: returns `(dz / 2 pi) sum_j v_j exp(-i x_k z_j)`.
pub fn centred_inverse(values: &[Complex64], dz: f64) -> Vec<Complex64> {
    let n = values.len();
    assert!(is_power_of_two(n) && n >= 2, "centred_inverse needs a power-of-two length");
    let mut buf: Vec<Complex64> = values
        .iter()
        .enumerate()
        .map(|(j, v)| if j % 2 == 0 { *v } else { -*v })
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let scale = dz / (2.0 * PI);
    let two_n = 2 * n as u64;
    buf.iter()
        .enumerate()
        .map(|(k, s)| {
            // exp(-i x_k z_0) with x_k z_0 = -pi (k - n/2)(n - 1)/n, reduced mod 2 pi exactly.
            let kk = k as i64 - (n / 2) as i64;
            let num = (kk * (n as i64 - 1)).rem_euclid(two_n as i64) as f64;
            s * Complex64::from_polar(scale, PI * num / n as f64)
        })
        .collect()
}
