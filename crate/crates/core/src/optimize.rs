//! Derivative-free and quasi-Newton minimizers.

use crate::error::{validation, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    pub tol_f: f64,
    pub tol_x: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            initial_step: 0.1,
            tol_f: 1e-9,
            tol_x: 1e-6,
            max_evals: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    pub gtol: f64,
    pub max_iters: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        BfgsOptions {
            gtol: 1e-9,
            max_iters: 1000,
        }
    }
}

/// Counts calls and remembers the best point seen.
struct Tracked<F> {
    f: F,
    evaluations: usize,
    best_x: Vec<f64>,
    best_f: f64,
}

impl<F: FnMut(&[f64]) -> f64> Tracked<F> {
    fn new(f: F, dim: usize) -> Self {
        Tracked {
            f,
            evaluations: 0,
            best_x: vec![0.0; dim],
            best_f: f64::INFINITY,
        }
    }

    fn eval(&mut self, x: &[f64]) -> f64 {
        let v = (self.f)(x);
        self.evaluations += 1;
        if v < self.best_f {
            self.best_f = v;
            self.best_x.copy_from_slice(x);
        }
        v
    }
}

/// Nelder-Mead simplex search.
///
/// The initial simplex is `start` plus `start + initial_step·e_i` for each axis.
/// Converges when both the spread of function values and the largest vertex
/// distance from the best vertex fall below the tolerances. The returned point
/// is always the best one evaluated.
pub fn nelder_mead<F>(f: F, start: &[f64], opts: &NelderMeadOptions) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    if n == 0 {
        return Err(validation("nelder_mead needs at least one dimension"));
    }
    if opts.max_evals < n + 1 {
        return Err(validation(format!(
            "max_evals {} cannot build a simplex in {n} dimensions",
            opts.max_evals
        )));
    }
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut obj = Tracked::new(f, n);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = obj.eval(start);
    simplex.push((start.to_vec(), f0));
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += opts.initial_step;
        let fv = obj.eval(&v);
        simplex.push((v, fv));
    }

    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let point = |c: &[f64], w: &[f64], t: f64, out: &mut [f64]| {
        for ((o, ci), wi) in out.iter_mut().zip(c).zip(w) {
            *o = ci + t * (wi - ci);
        }
    };

    loop {
        // stable sort keeps the earlier vertex first on ties
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_spread = simplex[n].1 - simplex[0].1;
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread < opts.tol_f && x_spread < opts.tol_x {
            converged = true;
            break;
        }
        if obj.evaluations >= opts.max_evals {
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let f_worst = simplex[n].1;

        point(&centroid, &worst, -alpha, &mut trial);
        let f_r = obj.eval(&trial);
        if f_r < simplex[0].1 {
            let reflected = trial.clone();
            if obj.evaluations >= opts.max_evals {
                simplex[n] = (reflected, f_r);
                continue;
            }
            point(&centroid, &worst, -gamma, &mut trial);
            let f_e = obj.eval(&trial);
            simplex[n] = if f_e < f_r {
                (trial.clone(), f_e)
            } else {
                (reflected, f_r)
            };
            continue;
        }
        if f_r < simplex[n - 1].1 {
            simplex[n] = (trial.clone(), f_r);
            continue;
        }
        if obj.evaluations >= opts.max_evals {
            continue;
        }
        let outside = f_r < f_worst;
        let t = if outside { -rho } else { rho };
        point(&centroid, &worst, t, &mut trial);
        let f_c = obj.eval(&trial);
        if f_c < f_r.min(f_worst) {
            simplex[n] = (trial.clone(), f_c);
            continue;
        }
        // shrink towards the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if obj.evaluations >= opts.max_evals {
                break;
            }
            for (x, b) in vertex.0.iter_mut().zip(&best) {
                *x = b + sigma * (*x - b);
            }
            vertex.1 = obj.eval(&vertex.0);
        }
    }

    Ok(OptimResult {
        x: obj.best_x,
        value: obj.best_f,
        evaluations: obj.evaluations,
        iterations,
        converged,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// BFGS with an inverse-Hessian update and Armijo backtracking.
///
/// `fg` returns the value and gradient at a point. Stops when the largest
/// gradient component is below `gtol`. A failed line search ends the run with
/// `converged = false` and the best point found.
pub fn bfgs<F>(mut fg: F, start: &[f64], opts: &BfgsOptions) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let n = start.len();
    if n == 0 {
        return Err(validation("bfgs needs at least one dimension"));
    }
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        fg(x)
    };

    let mut x = start.to_vec();
    let (mut f, mut g) = eval(&x);
    if g.len() != n {
        return Err(validation(format!("gradient has {} components, expected {n}", g.len())));
    }
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    let mut iterations = 0;
    let mut converged = max_abs(&g) < opts.gtol;
    let mut first_step = true;
    let mut p = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut hy = vec![0.0; n];

    while !converged && iterations < opts.max_iters {
        iterations += 1;
        for i in 0..n {
            p[i] = -dot(&h[i * n..(i + 1) * n], &g);
        }
        let mut slope = dot(&p, &g);
        if slope >= 0.0 {
            // not a descent direction: restart from steepest descent
            h.iter_mut().enumerate().for_each(|(k, v)| *v = if k % (n + 1) == 0 { 1.0 } else { 0.0 });
            p.iter_mut().zip(&g).for_each(|(pi, gi)| *pi = -gi);
            slope = dot(&p, &g);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            for i in 0..n {
                x_new[i] = x[i] + step * p[i];
            }
            let (f_new, g_new) = eval(&x_new);
            if f_new.is_finite() && f_new <= f + 1e-4 * step * slope + 1e-14 * f.abs() {
                accepted = Some((f_new, g_new));
                break;
            }
            step *= 0.5;
        }
        let Some((f_new, g_new)) = accepted else {
            break;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let ys = dot(&y, &s);
        if ys > 1e-300 {
            if first_step {
                let scale = ys / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
                first_step = false;
            }
            for i in 0..n {
                hy[i] = dot(&h[i * n..(i + 1) * n], &y);
            }
            let yhy = dot(&y, &hy);
            let rho = 1.0 / ys;
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] - s[i] * hy[j]);
                }
            }
        }
        x.copy_from_slice(&x_new);
        f = f_new;
        g = g_new;
        converged = max_abs(&g) < opts.gtol;
    }

    Ok(OptimResult {
        x,
        value: f,
        evaluations,
        iterations,
        converged,
    })
}

/// Fourier form `a + b sinθ + c cosθ + d sin2θ + e cos2θ` of a single-parameter
/// screening energy, fitted exactly from five equispaced samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigCurve {
    pub coefficients: [f64; 5],
}

impl TrigCurve {
    /// Fits the curve from `E(2πj/5)` for `j = 0..5`.
    pub fn fit(mut f: impl FnMut(f64) -> f64) -> Self {
        let samples: Vec<(f64, f64)> = (0..5)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / 5.0;
                (t, f(t))
            })
            .collect();
        let mut c = [0.0; 5];
        for &(t, v) in &samples {
            c[0] += v / 5.0;
            c[1] += 2.0 * v * t.sin() / 5.0;
            c[2] += 2.0 * v * t.cos() / 5.0;
            c[3] += 2.0 * v * (2.0 * t).sin() / 5.0;
            c[4] += 2.0 * v * (2.0 * t).cos() / 5.0;
        }
        TrigCurve { coefficients: c }
    }

    pub fn value(&self, t: f64) -> f64 {
        let [a, b, c, d, e] = self.coefficients;
        a + b * t.sin() + c * t.cos() + d * (2.0 * t).sin() + e * (2.0 * t).cos()
    }

    fn derivatives(&self, t: f64) -> (f64, f64) {
        let [_, b, c, d, e] = self.coefficients;
        let d1 = b * t.cos() - c * t.sin() + 2.0 * d * (2.0 * t).cos() - 2.0 * e * (2.0 * t).sin();
        let d2 = -b * t.sin() - c * t.cos() - 4.0 * d * (2.0 * t).sin() - 4.0 * e * (2.0 * t).cos();
        (d1, d2)
    }

    /// Global minimizer in `(-π, π]`: grid bracket followed by Newton polish.
    pub fn minimize(&self) -> (f64, f64) {
        use std::f64::consts::PI;
        const GRID: usize = 720;
        let [a, b, c, d, e] = self.coefficients;
        // the grid walks by rotation so only the bracket needs trigonometry
        let (step_s, step_c) = (2.0 * PI / GRID as f64).sin_cos();
        let (mut s1, mut c1) = (0.0f64, -1.0f64);
        let mut best = (0.0, self.value(0.0));
        for j in 0..GRID {
            (s1, c1) = (s1 * step_c + c1 * step_s, c1 * step_c - s1 * step_s);
            let v = a + b * s1 + c * c1 + d * 2.0 * s1 * c1 + e * (c1 * c1 - s1 * s1);
            if v < best.1 {
                best = (-PI + 2.0 * PI * (j + 1) as f64 / GRID as f64, v);
            }
        }
        best.1 = self.value(best.0);
        let mut t = best.0;
        for _ in 0..50 {
            let (d1, d2) = self.derivatives(t);
            if d2 <= 0.0 {
                break;
            }
            let next = t - d1 / d2;
            if (next - t).abs() < 1e-15 {
                t = next;
                break;
            }
            t = next;
        }
        let v = self.value(t);
        if v < best.1 {
            (t, v)
        } else {
            best
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn nelder_mead_parabola() {
        let opts = NelderMeadOptions {
            tol_f: 1e-14,
            tol_x: 1e-8,
            max_evals: 500,
            ..Default::default()
        };
        let r = nelder_mead(|x| (x[0] - 1.0).powi(2), &[0.0], &opts).unwrap();
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn nelder_mead_cosine() {
        let opts = NelderMeadOptions {
            max_evals: 500,
            ..Default::default()
        };
        let r = nelder_mead(|x| x[0].cos(), &[0.1], &opts).unwrap();
        assert!((r.x[0] - PI).abs() < 1e-3);
        assert!((r.value + 1.0).abs() < 1e-6);
    }

    #[test]
    fn nelder_mead_budget_exhaustion() {
        let opts = NelderMeadOptions {
            max_evals: 5,
            ..Default::default()
        };
        let r = nelder_mead(|x| (x[0] - 50.0).powi(2), &[0.0], &opts).unwrap();
        assert!(!r.converged);
        assert!(r.evaluations <= 5);
        assert_eq!(r.value, (r.x[0] - 50.0).powi(2));
        assert!(nelder_mead(|_| 0.0, &[], &opts).is_err());
    }

    #[test]
    fn bfgs_quadratic() {
        let fg = |x: &[f64]| (0.5 * dot(x, x), x.to_vec());
        let r = bfgs(fg, &[1.0, -2.0, 3.0], &BfgsOptions::default()).unwrap();
        assert!(r.converged);
        assert!(r.iterations <= 5);
        assert!(max_abs(&r.x) < 1e-9);
    }

    #[test]
    fn bfgs_rosenbrock() {
        let fg = |x: &[f64]| {
            let (a, b) = (x[0], x[1]);
            let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
            (f, g)
        };
        let r = bfgs(fg, &[-1.2, 1.0], &BfgsOptions::default()).unwrap();
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5, "{:?}", r);
    }

    #[test]
    fn trig_curve_fit_and_minimum() {
        let f = |t: f64| 0.3 + 0.2 * t.sin() - 0.5 * t.cos() + 0.1 * (2.0 * t).sin() + 0.05 * (2.0 * t).cos();
        let curve = TrigCurve::fit(f);
        for t in [-2.0, 0.3, 1.7] {
            assert!((curve.value(t) - f(t)).abs() < 1e-14);
        }
        let (t_min, v_min) = curve.minimize();
        let grid_min = (0..200_000)
            .map(|j| f(-PI + 2.0 * PI * j as f64 / 200_000.0))
            .fold(f64::INFINITY, f64::min);
        assert!(v_min <= grid_min + 1e-12);
        assert!((f(t_min) - v_min).abs() < 1e-14);
    }
}
