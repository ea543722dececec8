//! Derivative-free minimization with the Nelder–Mead simplex method.

use std::cell::Cell;

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    /// Stop once every vertex is within this distance of the best vertex.
    pub diameter_tol: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            diameter_tol: 1e-6,
            max_evaluations: 1000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Best vertex after each iteration.
    pub trace: Vec<(Vec<f64>, f64)>,
}

fn diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(v, _)| v.iter().zip(best).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// Minimize `f` from `start` with the standard reflection, expansion,
/// contraction and shrink coefficients (1, 2, ½, ½).
pub fn minimize(f: impl Fn(&[f64]) -> f64, start: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult {
    let n = start.len();
    let evaluations = Cell::new(0usize);
    let eval = |x: &[f64]| {
        evaluations.set(evaluations.get() + 1);
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), eval(start)));
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += opts.initial_step;
        let fv = eval(&v);
        simplex.push((v, fv));
    }
    let mut trace = Vec::new();
    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        trace.push(simplex[0].clone());
        if diameter(&simplex) < opts.diameter_tol || evaluations.get() >= opts.max_evaluations {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        // centroid + t·(centroid − worst) is combine(centroid, worst, −t).
        let reflected = combine(&centroid, &worst.0, -1.0);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = combine(&centroid, &worst.0, -2.0);
            let fe = eval(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst.1 {
            let x = combine(&centroid, &reflected, 0.5);
            let fx = eval(&x);
            (x, fx)
        } else {
            let x = combine(&centroid, &worst.0, 0.5);
            let fx = eval(&x);
            (x, fx)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let v = combine(&best, &vertex.0, 0.5);
            let fv = eval(&v);
            *vertex = (v, fv);
        }
    }
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        value,
        evaluations: evaluations.get(),
        trace,
    }
}
