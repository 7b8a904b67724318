//! Deterministic random-instance generators shared by tests and the
//! verification suite.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::frac::{fint, Frac};
use crate::geometry::{make_eckardt, CubicPair, EckardtCubic, Line};
use crate::jacobian;
use crate::poly::{graded_basis, Expo, Poly};

/// Dense random form of the given degree with small integer coefficients.
pub fn random_form(rng: &mut ChaCha8Rng, nvars: usize, degree: u32, bound: i64) -> Poly {
    loop {
        let terms: Vec<(Expo, Frac)> = graded_basis(nvars, degree)
            .into_iter()
            .map(|e| (e, fint(rng.gen_range(-bound..=bound))))
            .collect();
        let p = Poly::from_terms(nvars, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random smooth Eckardt threefold, by rejection.
pub fn random_smooth_eckardt(rng: &mut ChaCha8Rng) -> EckardtCubic {
    loop {
        let f = random_form(rng, 4, 3, 3);
        let l = random_form(rng, 4, 1, 2);
        let Ok(pair) = CubicPair::new(f, l) else {
            continue;
        };
        if let Ok(x) = make_eckardt(&pair) {
            return x;
        }
    }
}

/// Random smooth plane quartic, by rejection.
pub fn random_smooth_quartic(rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let g = random_form(rng, 3, 4, 3);
        if jacobian::is_smooth_hypersurface(&g).unwrap_or(false) {
            return g;
        }
    }
}

/// Random smooth quartic built with a designated bitangent: `g = k c - q^2`
/// restricted to `(k = 0)` is automatically minus a square. Returns
/// `(g, k, q)`.
pub fn random_quartic_with_bitangent(rng: &mut ChaCha8Rng) -> (Poly, Poly, Poly) {
    loop {
        let k = random_form(rng, 3, 1, 2);
        let q = random_form(rng, 3, 2, 3);
        let c = random_form(rng, 3, 3, 3);
        let Ok(kc) = k.mul(&c) else { continue };
        let Ok(qq) = q.mul(&q) else { continue };
        let Ok(g) = kc.sub(&qq) else { continue };
        if g.is_zero() {
            continue;
        }
        if g.homogeneous_degree() != Some(4) {
            continue;
        }
        if jacobian::is_smooth_hypersurface(&g).unwrap_or(false) {
            // the restriction must not vanish identically (k would divide g)
            let restr = jacobian::restrict_to_linear_zero(&g, &k).unwrap();
            if !restr.is_zero() {
                return (g, k, q);
            }
        }
    }
}

/// Random valid triple: a smooth Eckardt threefold with an invariant line
/// through the vertex whose projection quartic is smooth and transverse to
/// the residual line. Built directly in normalized coordinates.
pub fn random_valid_triple(rng: &mut ChaCha8Rng) -> Option<(EckardtCubic, Line)> {
    let (g, k, _q) = random_quartic_with_bitangent(rng);
    let l = random_form(rng, 3, 1, 2);
    let restr = jacobian::restrict_to_linear_zero(&g, &l).ok()?;
    if restr.is_zero() || !restr.is_squarefree() {
        return None;
    }
    let (triple, _dec) = crate::reconstruct::eckardt_from_triple(&g, &k, &l, true).ok()?;
    Some((triple.x, triple.line))
}

/// A quartic with a bitangent plus a line tangent to the quartic at a
/// rational point, for exercising the tangency rejection.
pub fn quartic_with_tangent_line(rng: &mut ChaCha8Rng) -> Option<(Poly, Poly, Poly)> {
    // arrange a rational point on the quartic: g = k c - q^2 with c
    // corrected so that g(pt) = 0
    let pt = vec![
        fint(1),
        fint(rng.gen_range(-2..=2)),
        fint(rng.gen_range(-2..=2)),
    ];
    let k = random_form(rng, 3, 1, 2);
    let q = random_form(rng, 3, 2, 2);
    let c0 = random_form(rng, 3, 3, 2);
    let kv = k.eval(&pt).ok()?;
    if kv.is_zero() {
        return None;
    }
    let g0 = k.mul(&c0).ok()?.sub(&q.mul(&q).ok()?).ok()?;
    let gv = g0.eval(&pt).ok()?;
    // c = c0 - (g0(pt)/k(pt)) x0^3 / pt0^3, using pt0 = 1
    let corr = Poly::variable(3, 0).ok()?.pow(3).scale(&(gv / kv));
    let c = c0.sub(&corr).ok()?;
    let g = k.mul(&c).ok()?.sub(&q.mul(&q).ok()?).ok()?;
    if g.homogeneous_degree() != Some(4) {
        return None;
    }
    if !jacobian::is_smooth_hypersurface(&g).ok()? {
        return None;
    }
    // tangent line at pt: sum dg/dxi(pt) xi
    let mut lt = Poly::zero(3);
    for i in 0..3 {
        let d = g.partial_derivative(i).ok()?;
        let coef = d.eval(&pt).ok()?;
        lt = lt.add(&Poly::variable(3, i).ok()?.scale(&coef)).ok()?;
    }
    if lt.is_zero() {
        return None;
    }
    Some((g, k, lt))
}

/// Random invertible change of the first four coordinates, extended by the
/// identity on the involution coordinate. Such transforms preserve the
/// threefold shape `f + l x4^2`.
pub fn random_gl4(rng: &mut ChaCha8Rng) -> crate::matrix::LinearChange {
    use crate::matrix::{FracMat, LinearChange};
    loop {
        let mut m = FracMat::zeros(5, 5);
        for i in 0..4 {
            for j in 0..4 {
                m.set(i, j, fint(rng.gen_range(-2..=2)));
            }
        }
        m.set(4, 4, fint(1));
        if let Ok(t) = LinearChange::new(m) {
            return t;
        }
    }
}

/// Transport a pair, a line and a section point through a coordinate
/// change of the ambient projective 3-space.
pub fn transform_instance(
    pair: &CubicPair,
    line: &Line,
    e_point: Option<&[Frac]>,
    g5: &crate::matrix::LinearChange,
) -> (CubicPair, Line, Option<Vec<Frac>>) {
    let f2 = pair
        .f
        .lift_vars(5, &[0, 1, 2, 3])
        .and_then(|p| p.apply_linear_change(g5))
        .and_then(|p| p.drop_vars(&[0, 1, 2, 3]))
        .expect("shape-preserving transform");
    let l2 = pair
        .l
        .lift_vars(5, &[0, 1, 2, 3])
        .and_then(|p| p.apply_linear_change(g5))
        .and_then(|p| p.drop_vars(&[0, 1, 2, 3]))
        .expect("shape-preserving transform");
    let pair2 = CubicPair::new(f2, l2).expect("degrees preserved");
    // points move by the inverse substitution matrix
    let move_pt = |p: &[Frac]| -> Vec<Frac> {
        let mut p5 = p.to_vec();
        p5.resize(5, Frac::from_integer(0.into()));
        g5.apply_point_inv(&p5).expect("dimension")
    };
    let a = move_pt(&line.a);
    let b = move_pt(&line.b);
    let line2 = Line::new(a, b).expect("independence preserved");
    let e2 = e_point.map(|e| {
        let moved = move_pt(e);
        moved[..4].to_vec()
    });
    (pair2, line2, e2)
}

/// Instance where both degeneracy divisors of a pointwise line vanish at
/// the pencil point `(0 : 1)`, failing the disjoint-support condition.
pub fn constructed_collision() -> (EckardtCubic, Line) {
    let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(17);
    let p = |s: &str| Poly::parse(4, s).expect("static");
    loop {
        // l1 = x2, l2 = x2, l3 = x3 gives the degree-2 divisor x2 x3 - x2^2
        // vanishing at (0:1); choosing q2 and c to vanish there too forces a
        // common root
        let a = fint(rng.gen_range(-3..=3));
        let b = fint(rng.gen_range(-3..=3));
        let g = fint(rng.gen_range(-3..=3));
        let d = fint(rng.gen_range(-3..=3));
        let e = fint(rng.gen_range(-3..=3));
        let q1 = p("x2^2")
            .scale(&a)
            .add(&p("x2*x3").scale(&b))
            .unwrap()
            .add(&p("x3^2").scale(&g))
            .unwrap();
        let q2 = p("x2^2").scale(&d).add(&p("x2*x3").scale(&e)).unwrap();
        let f = p("x2*x0^2 + 2*x2*x0*x1 + x3*x1^2")
            .add(&p("x0").mul(&q1).unwrap().scale(&fint(2)))
            .unwrap()
            .add(&p("x1").mul(&q2).unwrap().scale(&fint(2)))
            .unwrap()
            .add(&p("x2^3 + x2^2*x3 + x2*x3^2"))
            .unwrap();
        let Ok(pair) = CubicPair::new(f, p("x0")) else {
            continue;
        };
        let Ok(x) = make_eckardt(&pair) else { continue };
        let line = Line::new(
            vec![fint(1), fint(0), fint(0), fint(0), fint(0)],
            vec![fint(0), fint(1), fint(0), fint(0), fint(0)],
        )
        .unwrap();
        return (x, line);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generators_terminate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_smooth_eckardt(&mut rng);
        assert!(jacobian::is_smooth_hypersurface(x.polynomial()).unwrap());
        let g = random_smooth_quartic(&mut rng);
        assert!(jacobian::is_smooth_hypersurface(&g).unwrap());
        let (g2, k, _q) = random_quartic_with_bitangent(&mut rng);
        let restr = jacobian::restrict_to_linear_zero(&g2, &k).unwrap();
        let neg = restr.scale(&fint(-1));
        assert!(neg.square_root().unwrap().is_some());
    }
}
