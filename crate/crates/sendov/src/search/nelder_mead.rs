//! Budgeted Nelder-Mead simplex descent with the standard coefficients
//! (reflect 1, expand 2, contract 0.5, shrink 0.5).

#[derive(Debug, Clone, Copy)]
pub(crate) struct NmOpts {
    /// Stop when the simplex diameter falls below this.
    pub diam_tol: f64,
    /// Stop when the objective spread across the simplex falls below this.
    pub spread_tol: f64,
    /// Maximum objective evaluations.
    pub budget: usize,
}

impl Default for NmOpts {
    fn default() -> Self {
        NmOpts {
            diam_tol: 1e-12,
            spread_tol: 1e-13,
            budget: 4000,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

pub(crate) fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    init_h: &[f64],
    opts: &NmOpts,
) -> NmResult {
    let dim = x0.len();
    assert!(dim >= 1 && init_h.len() == dim);
    let mut evals = 0usize;
    let eval = |f: &mut dyn FnMut(&[f64]) -> f64, x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    // initial simplex: x0 plus one axis step per dimension
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim + 1);
    simplex.push((eval(f, x0, &mut evals), x0.to_vec()));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += init_h[i];
        simplex.push((eval(f, &x, &mut evals), x));
    }

    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        // termination checks
        let diam = simplex
            .iter()
            .skip(1)
            .map(|(_, x)| {
                x.iter()
                    .zip(&simplex[0].1)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        let spread = simplex[dim].0 - simplex[0].0;
        if diam < opts.diam_tol || (spread.is_finite() && spread < opts.spread_tol) {
            converged = true;
            break;
        }
        if evals >= opts.budget {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|i| simplex[..dim].iter().map(|(_, x)| x[i]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst.1)
            .map(|(c, w)| c + (c - w))
            .collect();
        let fr = eval(f, &reflect, &mut evals);

        if fr < simplex[0].0 {
            // try expansion
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&reflect)
                .map(|(c, r)| c + 2.0 * (r - c))
                .collect();
            let fe = eval(f, &expand, &mut evals);
            simplex[dim] = if fe < fr { (fe, expand) } else { (fr, reflect) };
        } else if fr < simplex[dim - 1].0 {
            simplex[dim] = (fr, reflect);
        } else {
            // contraction (outside if the reflection improved on the worst)
            let toward = if fr < worst.0 { &reflect } else { &worst.1 };
            let contract: Vec<f64> = centroid
                .iter()
                .zip(toward)
                .map(|(c, t)| c + 0.5 * (t - c))
                .collect();
            let fc = eval(f, &contract, &mut evals);
            if fc < fr.min(worst.0) {
                simplex[dim] = (fc, contract);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].1.clone();
                for v in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&v.1)
                        .map(|(b, x)| b + 0.5 * (x - b))
                        .collect();
                    *v = (eval(f, &x, &mut evals), x);
                    if evals >= opts.budget {
                        break;
                    }
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    NmResult {
        x: simplex[0].1.clone(),
        value: simplex[0].0,
        evaluations: evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let mut f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let r = nelder_mead(&mut f, &[0.0, 0.0], &[0.5, 0.5], &NmOpts::default());
        assert!(r.converged);
        // objective spread 1e-13 at termination puts the point within
        // ~sqrt(spread) of the quadratic minimum
        assert!(r.value < 1e-12);
        assert!((r.x[0] - 1.5).abs() < 1e-6 && (r.x[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock_2d() {
        let mut f =
            |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(
            &mut f,
            &[-1.2, 1.0],
            &[0.5, 0.5],
            &NmOpts {
                budget: 10_000,
                ..NmOpts::default()
            },
        );
        assert!(r.value < 1e-12, "value {}", r.value);
    }

    #[test]
    fn budget_exhaustion_flags_unconverged() {
        let mut f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let r = nelder_mead(
            &mut f,
            &[5.0; 6],
            &[1.0; 6],
            &NmOpts {
                budget: 20,
                ..NmOpts::default()
            },
        );
        assert!(!r.converged);
        assert!(r.evaluations <= 26);
    }

    #[test]
    fn infinity_plateaus_are_avoided() {
        let mut f = |x: &[f64]| {
            if x[0] > 2.0 {
                f64::INFINITY
            } else {
                (x[0] - 1.9).powi(2)
            }
        };
        let r = nelder_mead(&mut f, &[0.0], &[0.7], &NmOpts::default());
        assert!((r.x[0] - 1.9).abs() < 1e-6);
    }
}
