//! Scalar searches, a derivative-free pattern search and Halton points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimize a unimodal `f` on [a, b] to bracket width `tol`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}

/// Root of `f` on [a, b] by bisection; f(a) and f(b) must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidArgument(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m <= a.min(b) || m >= a.max(b) {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Debug, Clone, Copy)]
pub struct PatternOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evals: usize,
    /// Fresh random frames tried at one step size before it is halved.
    pub rotations: usize,
    pub seed: u64,
}

impl Default for PatternOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            min_step: 1e-9,
            max_evals: 20_000,
            rotations: 3,
            seed: 42,
        }
    }
}

/// Minimize `f` by polling ±(columns of a random orthonormal frame). A failed
/// poll retries with new frames before shrinking, so the search can follow
/// narrow ridges that are oblique to any single frame.
pub fn pattern_search(f: impl Fn(&[f64]) -> f64, x0: &[f64], opts: PatternOptions) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut evals = 1;
    let mut step = opts.initial_step;
    let mut frame = random_frame(n, &mut rng);
    let mut trial = vec![0.0; n];
    while step >= opts.min_step && evals < opts.max_evals {
        let mut improved = false;
        'frames: for attempt in 0..=opts.rotations {
            if attempt > 0 {
                frame = random_frame(n, &mut rng);
            }
            for dir in &frame {
                for sign in [1.0, -1.0] {
                    for k in 0..n {
                        trial[k] = x[k] + sign * step * dir[k];
                    }
                    let ft = f(&trial);
                    evals += 1;
                    if ft < fx {
                        fx = ft;
                        x.copy_from_slice(&trial);
                        improved = true;
                        break 'frames;
                    }
                }
            }
        }
        if improved {
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    (x, fx)
}

/// Rows form a random orthonormal basis of Rⁿ.
fn random_frame(n: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    while rows.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for r in &rows {
            let d: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
            for (a, b) in v.iter_mut().zip(r) {
                *a -= d * b;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 {
            rows.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    rows
}

/// Radical inverse of `i` in `base`.
pub fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Point `i` of the 3-D Halton sequence (bases 2, 3, 5) in the unit cube.
pub fn halton3(i: u64) -> [f64; 3] {
    [halton(i, 2), halton(i, 3), halton(i, 5)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, 0.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn pattern_search_on_rosenbrock_valley() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let (x, fx) = pattern_search(
            f,
            &[-1.2, 1.0],
            PatternOptions {
                initial_step: 0.5,
                min_step: 1e-12,
                max_evals: 200_000,
                ..Default::default()
            },
        );
        assert!(fx < 1e-10, "{x:?} {fx}");
    }

    #[test]
    fn pattern_search_on_kinked_max() {
        // Nonsmooth: max of three planes, minimum at the origin.
        let f = |x: &[f64]| x[0].abs().max(x[1].abs()).max((x[0] + x[1]).abs());
        let (_, fx) = pattern_search(f, &[0.7, -0.2], PatternOptions::default());
        assert!(fx < 1e-8, "{fx}");
    }

    #[test]
    fn halton_values() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(3, 2), 0.75);
        assert!((halton(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }
}
