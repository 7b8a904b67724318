//! Canonical fixtures used across tests, the CLI and the verification
//! suite. All constructors are deterministic; the searched fixture is
//! pinned by a frozen regression test.

use std::sync::OnceLock;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binform::BinForm;
use crate::error::Result;
use crate::frac::{fint, Frac};
use crate::geometry::{make_eckardt, CubicPair, EckardtCubic, Line};
use crate::jacobian;
use crate::poly::Poly;

fn p(n: usize, s: &str) -> Poly {
    Poly::parse(n, s).expect("fixture parse")
}

fn pts(v: &[i64]) -> Vec<Frac> {
    v.iter().map(|&x| fint(x)).collect()
}

/// The Fermat cubic surface.
pub fn fermat_surface() -> Poly {
    p(4, "x0^3 + x1^3 + x2^3 + x3^3")
}

/// Fermat surface with the coordinate plane `x0 = 0`.
pub fn fix1() -> CubicPair {
    CubicPair::new(fermat_surface(), p(4, "x0")).expect("valid pair")
}

pub fn fix1_cubic() -> EckardtCubic {
    make_eckardt(&fix1()).expect("fix1 is smooth")
}

/// A rational line on the Fermat surface, pointwise fixed by the involution.
pub fn fix1_line() -> Line {
    Line::new(pts(&[1, -1, 0, 0, 0]), pts(&[0, 0, 1, -1, 0])).expect("independent points")
}

/// Rational point on the hyperplane section of the Fermat fixture (it lies
/// on a line of the surface, which several tests rely on).
pub fn fix1_section_point() -> Vec<Frac> {
    pts(&[0, 1, -1, 0])
}

/// Degenerate pair: the plane is tangent along the section, the threefold
/// is singular and the build must fail.
pub fn fix2() -> CubicPair {
    CubicPair::new(fermat_surface(), p(4, "x0 + x1")).expect("well-formed pair")
}

/// Smooth pair whose section carries a rational point avoiding all lines of
/// the surface.
pub fn fix3() -> CubicPair {
    CubicPair::new(p(4, "x0^3 + x1^3 + x2^3 - 2*x3^3"), p(4, "x0")).expect("valid pair")
}

pub fn fix3_cubic() -> EckardtCubic {
    make_eckardt(&fix3()).expect("fix3 is smooth")
}

/// Marked section point of the fix3 pair.
pub fn fix3_point() -> Vec<Frac> {
    pts(&[0, 1, 1, 1])
}

/// The invariant line through the vertex over the marked point.
pub fn fix3_line() -> Line {
    Line::new(pts(&[0, 0, 0, 0, 1]), pts(&[0, 1, 1, 1, 0])).expect("independent points")
}

/// The quartic with marked bitangent and transverse line obtained by
/// projecting the fix3 threefold from its marked line: `(g, k, l)` in the
/// normalized plane coordinates.
pub fn fix3_quartic() -> (Poly, Poly, Poly) {
    let x = fix3_cubic();
    let norm = crate::geometry::normalize_through_p(&x, &fix3_line()).expect("normalizes");
    let g = norm
        .k
        .mul(&norm.c)
        .and_then(|kc| kc.sub(&norm.q.mul(&norm.q)?))
        .expect("quartic assembles");
    (g, norm.k, norm.l)
}

/// A pair with a rational pointwise-fixed line passing the disjoint-support
/// genericity condition, found by a deterministic search and frozen by a
/// regression test. The Fermat fixture cannot serve here: both degeneracy
/// divisors of its rational lines contain the pencil point of the tangent
/// plane `x2 + x3 = 0`, so their resultant vanishes.
pub struct GenericFixture {
    pub pair: CubicPair,
    pub x: EckardtCubic,
    pub line: Line,
    /// Rational point on the hyperplane section, in P^3 coordinates.
    pub e_point: Vec<Frac>,
}

pub fn fix4() -> &'static GenericFixture {
    static CELL: OnceLock<GenericFixture> = OnceLock::new();
    CELL.get_or_init(|| search_generic_fixture().expect("search space contains a fixture"))
}

fn search_generic_fixture() -> Result<GenericFixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let bf = |rng: &mut ChaCha8Rng, d: u32| -> BinForm {
        BinForm::new(
            (0..=d)
                .map(|_| fint(rng.gen_range(-2..=2i64)))
                .collect::<Vec<_>>(),
        )
    };
    for _attempt in 0..4000 {
        let l1 = bf(&mut rng, 1);
        let l2 = bf(&mut rng, 1);
        let l3 = bf(&mut rng, 1);
        let q1 = bf(&mut rng, 2);
        let q2 = bf(&mut rng, 2);
        // cubic with no pure x2^3 term so that [x1, x2, x3] = [0, 1, 0]
        // lies on the section curve
        let mut c_coeffs: Vec<Frac> = (0..=3).map(|_| fint(rng.gen_range(-2..=2i64))).collect();
        c_coeffs[0] = Frac::from_integer(0.into());
        let c = BinForm::new(c_coeffs);
        if l1.is_zero() || l3.is_zero() || c.is_zero() {
            continue;
        }
        let Some(fixture) = try_fixture(&l1, &l2, &l3, &q1, &q2, &c) else {
            continue;
        };
        return Ok(fixture);
    }
    Err(crate::error::Error::Internal(
        "generic fixture search exhausted".into(),
    ))
}

fn try_fixture(
    l1: &BinForm,
    l2: &BinForm,
    l3: &BinForm,
    q1: &BinForm,
    q2: &BinForm,
    c: &BinForm,
) -> Option<GenericFixture> {
    let two = fint(2);
    // f = l1 x0^2 + 2 l2 x0 x1 + l3 x1^2 + 2 q1 x0 + 2 q2 x1 + c
    let x0 = Poly::variable(4, 0).ok()?;
    let x1 = Poly::variable(4, 1).ok()?;
    let emb = |b: &BinForm| b.to_poly(4, 2, 3);
    let f = emb(l1)
        .mul(&x0.pow(2))
        .ok()?
        .add(&emb(l2).mul(&x0).ok()?.mul(&x1).ok()?.scale(&two))
        .ok()?
        .add(&emb(l3).mul(&x1.pow(2)).ok()?)
        .ok()?
        .add(&emb(q1).mul(&x0).ok()?.scale(&two))
        .ok()?
        .add(&emb(q2).mul(&x1).ok()?.scale(&two))
        .ok()?
        .add(&emb(c))
        .ok()?;
    let pair = CubicPair::new(f, Poly::parse(4, "x0").ok()?).ok()?;
    let x = make_eckardt(&pair).ok()?;
    // disjoint supports of the two degeneracy divisors
    let qdiv = l1.mul(l3).add(&l2.mul(l2).scale(&fint(-1))).ok()?;
    let bdiv = l3.mul(c).add(&q2.mul(q2).scale(&fint(-1))).ok()?;
    if qdiv.is_zero() || bdiv.is_zero() {
        return None;
    }
    if qdiv.resultant(&bdiv).ok()?.is_zero() {
        return None;
    }
    // quintic slice and branch sextic must be squarefree
    let m_piece = l2.mul(q2).add(&l3.mul(q1).scale(&fint(-1))).ok()?;
    let n_piece = det3_binform(l1, l2, l3, q1, q2, c)?;
    if !n_piece.is_squarefree() {
        return None;
    }
    let delta = m_piece.mul(&m_piece).add(&l3.mul(&n_piece)).ok()?;
    if !delta.is_squarefree() {
        return None;
    }
    // smooth section curve with the pinned rational point
    let (section, _) = x.elliptic_section().ok()?;
    if !jacobian::is_smooth_hypersurface(&section).ok()? {
        return None;
    }
    let line = Line::new(pts(&[1, 0, 0, 0, 0]), pts(&[0, 1, 0, 0, 0])).ok()?;
    let e_point = pts(&[0, 0, 1, 0]);
    let f_at = pair.f.eval(&e_point).ok()?;
    if !num_traits::Zero::is_zero(&f_at) {
        return None;
    }
    Some(GenericFixture {
        pair,
        x,
        line,
        e_point,
    })
}

fn det3_binform(
    l1: &BinForm,
    l2: &BinForm,
    l3: &BinForm,
    q1: &BinForm,
    q2: &BinForm,
    c: &BinForm,
) -> Option<BinForm> {
    // det [[l1, l2, q1], [l2, l3, q2], [q1, q2, c]]
    let minor1 = l3.mul(c).add(&q2.mul(q2).scale(&fint(-1))).ok()?;
    let minor2 = l2.mul(c).add(&q1.mul(q2).scale(&fint(-1))).ok()?;
    let minor3 = l2.mul(q2).add(&l3.mul(q1).scale(&fint(-1))).ok()?;
    l1.mul(&minor1)
        .add(&l2.mul(&minor2).scale(&fint(-1)))
        .ok()?
        .add(&q1.mul(&minor3))
        .ok()
}

/// Names accepted by the fixture catalog.
pub const FIXTURE_NAMES: &[&str] = &[
    "FIX1",
    "FIX2",
    "FIX3",
    "FIX4",
    "fermat-surface",
    "fix1-line",
    "fix3-line",
    "fix3-quartic",
    "fix4-line",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;

    #[test]
    fn fix3_point_on_section_but_not_on_fermat_style_lines() {
        let e = fix3_point();
        let pair = fix3();
        assert!(num_traits::Zero::is_zero(&pair.f.eval(&e).unwrap()));
        assert!(num_traits::Zero::is_zero(&pair.l.eval(&e).unwrap()));
    }

    #[test]
    fn fix1_rational_line_on_surface() {
        let ln = fix1_line();
        assert!(geometry::contains_line(fix1_cubic().polynomial(), &ln).unwrap());
    }

    #[test]
    fn fix4_regression_pin() {
        // freeze the deterministic search result; any change to the search
        // path or generators shows up here
        let fx = fix4();
        assert!(jacobian::is_smooth_hypersurface(fx.x.polynomial()).unwrap());
        assert!(num_traits::Zero::is_zero(
            &fx.pair.f.eval(&fx.e_point).unwrap()
        ));
        assert!(geometry::contains_line(fx.x.polynomial(), &fx.line).unwrap());
        assert_eq!(
            fx.pair.f,
            p(
                4,
                "x0^2*x2 + 2*x0*x1*x2 - 4*x0*x1*x3 + 4*x0*x2^2 + 4*x0*x2*x3 \
                 + 2*x1^2*x2 + 2*x1^2*x3 + 2*x1*x2^2 + 2*x1*x3^2 + 2*x2^2*x3 + 2*x3^3"
            )
        );
        assert_eq!(fx.pair.l, p(4, "x0"));
    }
}
