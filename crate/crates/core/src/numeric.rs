//! Floating-point helpers kept apart from the exact core: univariate complex
//! root finding, small dense complex solves and points of the complex
//! projective line.

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of P^1 over C, stored as a projective pair.
#[derive(Clone, Copy, Debug)]
pub struct P1Point {
    pub u: Complex64,
    pub v: Complex64,
}

impl P1Point {
    pub fn new(u: Complex64, v: Complex64) -> Self {
        P1Point { u, v }
    }

    pub fn infinity() -> Self {
        P1Point {
            u: Complex64::new(1.0, 0.0),
            v: Complex64::new(0.0, 0.0),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.u.norm_sqr() + self.v.norm_sqr()).sqrt()
    }

    /// Projective distance through the 2x2 determinant, scale-free.
    pub fn dist(&self, other: &P1Point) -> f64 {
        let det = self.u * other.v - self.v * other.u;
        det.norm() / (self.norm() * other.norm())
    }
}

/// Determinant pairing of two projective points.
pub fn p1_det(a: &P1Point, b: &P1Point) -> Complex64 {
    a.u * b.v - a.v * b.u
}

/// Roots of a dense univariate polynomial with complex coefficients
/// (ascending powers, nonzero leading coefficient) by Durand-Kerner
/// iteration. Deterministic start, fixed iteration budget.
pub fn roots_durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        return Err(Error::Numeric("vanishing leading coefficient".into()));
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| radius * seed.powu(k as u32 + 1)).collect();
    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    for _ in 0..600 {
        let mut moved: f64 = 0.0;
        for k in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // perturb deterministically and continue
                z[k] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let delta = eval(z[k]) / denom;
            z[k] -= delta;
            moved = moved.max(delta.norm() / (1.0 + z[k].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    // polish with a couple of Newton steps
    let deriv: Vec<Complex64> = (1..=n)
        .map(|k| monic[k] * Complex64::new(k as f64, 0.0))
        .collect();
    let eval_d = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in deriv.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let d = eval_d(*zk);
            if d.norm() > 1e-12 {
                *zk -= eval(*zk) / d;
            }
        }
    }
    Ok(z)
}

/// Solve a small dense complex linear system in place. Returns `None` for a
/// numerically singular matrix.
pub fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let (piv, mag) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if mag < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for j in col..n {
                    let upd = f * a[col][j];
                    a[r][j] -= upd;
                }
                let upd = f * b[col];
                b[r] -= upd;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // z^3 - 1
        let c = vec![
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let mut roots = roots_durand_kerner(&c).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[2] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        for r in roots {
            assert!((r.powu(3) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn linear_solve() {
        let a = vec![
            vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(3.0, 1.0)],
        ];
        let b = vec![Complex64::new(5.0, 0.0), Complex64::new(10.0, 1.0)];
        let x = solve_complex(a.clone(), b.clone()).unwrap();
        for i in 0..2 {
            let lhs = a[i][0] * x[0] + a[i][1] * x[1];
            assert!((lhs - b[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn p1_distance() {
        let a = P1Point::new(Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0));
        let b = P1Point::new(Complex64::new(2.0, 0.0), Complex64::new(4.0, 0.0));
        assert!(a.dist(&b) < 1e-15);
        assert!(a.dist(&P1Point::infinity()) > 0.1);
    }
}
