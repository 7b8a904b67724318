//! Constructive inverses: from a quartic with a marked bitangent back to a
//! cubic surface with a marked point, and together with a transverse line
//! back to a cubic threefold with an Eckardt point and a marked line.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibrations;
use crate::frac::{self, Frac};
use crate::geometry::{self, EckardtCubic, Line};
use crate::jacobian;
use crate::poly::Poly;

/// A smooth plane quartic with a marked bitangent line.
#[derive(Clone, Debug)]
pub struct QuarticWithBitangent {
    pub g: Poly,
    pub k: Poly,
}

impl QuarticWithBitangent {
    pub fn new(g: Poly, k: Poly) -> Result<Self> {
        g.require_homogeneous(4)?;
        k.require_homogeneous(1)?;
        if g.nvars() != 3 || k.nvars() != 3 {
            return Err(Error::NvarsMismatch(3, g.nvars().max(k.nvars())));
        }
        if !jacobian::is_smooth_hypersurface(&g)? {
            return Err(Error::SingularQuartic);
        }
        Ok(QuarticWithBitangent { g, k })
    }
}

#[derive(Clone, Debug)]
pub struct BitangentDecomposition {
    pub q: Poly,
    pub c: Poly,
    /// scalar absorbed into the quartic to make the restriction split over
    /// the rationals; one when no rescaling was needed
    pub rescale: Frac,
    /// the (possibly rescaled) quartic satisfying `k c - q^2 = g`
    pub g_used: Poly,
}

/// Split `g = k c - q^2` against the marked bitangent. The restriction of
/// `-g` to the line `(k = 0)` must be a rational square times a square
/// scalar; a non-square scalar is reported as a field obstruction unless
/// `allow_rescale` absorbs it into the quartic.
pub fn bitangent_decompose(
    qb: &QuarticWithBitangent,
    allow_rescale: bool,
) -> Result<BitangentDecomposition> {
    let g = &qb.g;
    let k = &qb.k;
    let restricted = jacobian::restrict_to_linear_zero(g, k)?;
    let neg = restricted.scale(&frac::fint(-1));
    if neg.is_zero() {
        return Err(Error::NotBitangent);
    }
    let root = neg.square_root()?.ok_or(Error::NotBitangent)?;
    let rootsq = root.mul(&root);
    let s = rootsq
        .scalar_ratio(&neg)
        .ok_or_else(|| Error::Internal("square root lost its square".into()))?;
    // s must be a positive rational square for the lift to exist over Q
    let (sfree, tpart) = frac::square_decompose(&s);
    let (g_used, rescale, lift_scalar) = if sfree.is_one() {
        (g.clone(), Frac::one(), tpart)
    } else if allow_rescale {
        // with g' = sfree * g the restriction scalar becomes sfree^2 t^2
        let g2 = g.scale(&sfree);
        (g2, sfree.clone(), &sfree * &tpart)
    } else {
        return Err(Error::FieldObstruction(frac::format_frac(&sfree)));
    };
    // lift the root along the parametrization used by the restriction: the
    // two smallest coordinates away from the pivot of k, extended by zero
    let n = 3;
    let pivot = (0..n)
        .find(|&i| !k.coeff(&crate::poly::Expo::var(n, i)).is_zero())
        .ok_or(Error::ZeroPolynomial)?;
    let params: Vec<usize> = (0..n).filter(|&i| i != pivot).collect();
    let q = root.to_poly(3, params[0], params[1]).scale(&lift_scalar);
    let num = g_used.add(&q.mul(&q)?)?;
    let c = num.div_by_linear(k)?.ok_or(Error::InexactDivision)?;
    // exact identity check
    let back = k.mul(&c)?.sub(&q.mul(&q)?)?;
    if back != g_used {
        return Err(Error::Internal("decomposition identity failed".into()));
    }
    Ok(BitangentDecomposition {
        q,
        c,
        rescale,
        g_used,
    })
}

/// Rebuild the cubic surface with its marked point from a quartic with a
/// bitangent.
pub fn surface_from_quartic(
    qb: &QuarticWithBitangent,
    allow_rescale: bool,
) -> Result<(Poly, Vec<Frac>, BitangentDecomposition)> {
    let dec = bitangent_decompose(qb, allow_rescale)?;
    let s = fibrations::assemble_surface(&qb.k, &dec.q, &dec.c)?;
    if !jacobian::is_smooth_hypersurface(&s)? {
        return Err(Error::SingularHypersurface);
    }
    let mut point = vec![Frac::zero(); 4];
    point[3] = frac::fint(1);
    Ok((s, point, dec))
}

/// A threefold with its distinguished line through the Eckardt point.
#[derive(Clone, Debug)]
pub struct EckardtTriple {
    pub x: EckardtCubic,
    pub line: Line,
}

/// Build the threefold `k x3^2 + 2 q x3 + c + l x4^2` from a quartic with
/// bitangent and a transverse line. Smoothness comes for free from the
/// transversality; tangency surfaces as a singular threefold and is
/// rejected.
pub fn eckardt_from_triple(
    g: &Poly,
    k: &Poly,
    l: &Poly,
    allow_rescale: bool,
) -> Result<(EckardtTriple, BitangentDecomposition)> {
    let qb = QuarticWithBitangent::new(g.clone(), k.clone())?;
    l.require_homogeneous(1)?;
    if l.nvars() != 3 {
        return Err(Error::NvarsMismatch(3, l.nvars()));
    }
    // transversality of the line and the quartic
    let restricted = jacobian::restrict_to_linear_zero(g, l)?;
    if restricted.is_zero() || !restricted.is_squarefree() {
        return Err(Error::NonTransverse("line is tangent to the quartic"));
    }
    let dec = bitangent_decompose(&qb, allow_rescale)?;
    let f4 = fibrations::assemble_surface(k, &dec.q, &dec.c)?;
    let l4 = l.lift_vars(4, &[0, 1, 2])?;
    let pair = geometry::CubicPair::new(f4, l4)?;
    let x = geometry::make_eckardt(&pair)?;
    let mut p3 = vec![Frac::zero(); 5];
    p3[3] = frac::fint(1);
    let mut p4 = vec![Frac::zero(); 5];
    p4[4] = frac::fint(1);
    let line = Line::new(p3, p4)?;
    match geometry::classify_invariant_line(&x, &line)? {
        geometry::LineClass::ThroughEckardt { .. } => {}
        _ => return Err(Error::Internal("reconstructed line misclassified".into())),
    }
    Ok((EckardtTriple { x, line }, dec))
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    /// re-projection scalars: form after = scalar * form before
    pub scalar_g: String,
    pub scalar_k: String,
    pub scalar_l: String,
    /// rescaling absorbed during the decomposition
    pub rescale: String,
    pub pass: bool,
}

/// Project, reconstruct, project again; the second projection must agree
/// with the first up to one exact rational scalar per form.
pub fn roundtrip_check(x: &EckardtCubic, line: &Line) -> Result<RoundtripReport> {
    let proj1 = fibrations::eckardt_project_through_p(x, line)?;
    if !proj1.quartic_smooth {
        return Err(Error::SingularQuartic);
    }
    if !proj1.transverse {
        return Err(Error::NonTransverse(
            "residual line is tangent to the quartic",
        ));
    }
    let (triple, dec) = eckardt_from_triple(&proj1.quartic, &proj1.norm.k, &proj1.norm.l, true)?;
    let proj2 = fibrations::eckardt_project_through_p(&triple.x, &triple.line)?;
    let scalar_g = proj1
        .quartic
        .scalar_ratio(&proj2.quartic)
        .ok_or_else(|| Error::Internal("re-projected quartic is not a scalar multiple".into()))?;
    let scalar_k =
        proj1.norm.k.scalar_ratio(&proj2.norm.k).ok_or_else(|| {
            Error::Internal("re-projected bitangent is not a scalar multiple".into())
        })?;
    let scalar_l = proj1
        .norm
        .l
        .scalar_ratio(&proj2.norm.l)
        .ok_or_else(|| Error::Internal("re-projected line is not a scalar multiple".into()))?;
    Ok(RoundtripReport {
        scalar_g: frac::format_frac(&scalar_g),
        scalar_k: frac::format_frac(&scalar_k),
        scalar_l: frac::format_frac(&scalar_l),
        rescale: frac::format_frac(&dec.rescale),
        pass: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::frac::fint;
    use rand::SeedableRng;

    fn p(n: usize, s: &str) -> Poly {
        Poly::parse(n, s).unwrap()
    }

    #[test]
    fn built_to_invert_decomposition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let mut done = 0;
        while done < 10 {
            let (g, k, _q0) = crate::testgen::random_quartic_with_bitangent(&mut rng);
            let Ok(qb) = QuarticWithBitangent::new(g.clone(), k.clone()) else {
                continue;
            };
            let dec = bitangent_decompose(&qb, false).unwrap();
            let back = k
                .mul(&dec.c)
                .unwrap()
                .sub(&dec.q.mul(&dec.q).unwrap())
                .unwrap();
            assert_eq!(back, dec.g_used);
            assert_eq!(dec.rescale, Frac::one());
            done += 1;
        }
    }

    #[test]
    fn fix3_quartic_decomposes() {
        let (g, k, _l) = fixtures::fix3_quartic();
        let qb = QuarticWithBitangent::new(g, k).unwrap();
        let dec = bitangent_decompose(&qb, true).unwrap();
        let back =
            qb.k.mul(&dec.c)
                .unwrap()
                .sub(&dec.q.mul(&dec.q).unwrap())
                .unwrap();
        assert_eq!(back, dec.g_used);
    }

    #[test]
    fn non_bitangent_rejected() {
        // x0 is generically not a bitangent of a random smooth quartic
        let g = p(3, "x0^4 + x1^4 + x2^4 + x0*x1*x2^2");
        let k = p(3, "x0");
        let qb = QuarticWithBitangent::new(g, k).unwrap();
        assert!(matches!(
            bitangent_decompose(&qb, true),
            Err(Error::NotBitangent)
        ));
    }

    #[test]
    fn surface_roundtrip_through_projection() {
        let (g, k, _l) = fixtures::fix3_quartic();
        let qb = QuarticWithBitangent::new(g.clone(), k.clone()).unwrap();
        let (s, point, dec) = surface_from_quartic(&qb, true).unwrap();
        assert!(jacobian::is_smooth_hypersurface(&s).unwrap());
        // re-project and compare
        let proj = fibrations::project_point_surface(&s, &point).unwrap();
        let ratio_g = dec.g_used.scalar_ratio(&proj.quartic);
        assert!(ratio_g.is_some());
        let ratio_k = k.scalar_ratio(&proj.bitangent);
        assert!(ratio_k.is_some());
    }

    #[test]
    fn fix3_full_roundtrip() {
        let x = fixtures::fix3_cubic();
        let line = fixtures::fix3_line();
        let report = roundtrip_check(&x, &line).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn reconstructed_marked_point_avoids_lines_numerically() {
        // the marked point of the rebuilt surface stays off all 27 lines,
        // cross-checked against the numeric line search
        let (g, k, _l) = fixtures::fix3_quartic();
        let qb = QuarticWithBitangent::new(g, k).unwrap();
        let (s, point, _dec) = surface_from_quartic(&qb, true).unwrap();
        let found = crate::lines::find_lines_numeric(&s, 1e-10, 0).unwrap();
        assert_eq!(found.len(), 27);
        use crate::frac::frac_to_c64;
        let p_c64 = [
            frac_to_c64(&point[0]),
            frac_to_c64(&point[1]),
            frac_to_c64(&point[2]),
            frac_to_c64(&point[3]),
        ];
        for line in &found {
            assert!(!line.passes_through(&p_c64, 1e-6));
        }
    }

    #[test]
    fn roundtrip_rejects_bad_section_point() {
        // the Fermat fixture's rational section point lies on a line of the
        // surface; the projection quartic is singular and the check names it
        let x = fixtures::fix1_cubic();
        let mut e5 = fixtures::fix1_section_point();
        e5.push(fint(0));
        let line = Line::new(x.eckardt_point(), e5).unwrap();
        assert!(matches!(
            roundtrip_check(&x, &line),
            Err(Error::SingularQuartic)
        ));
    }

    #[test]
    fn sign_and_shift_ambiguities() {
        let (g, k, _l) = fixtures::fix3_quartic();
        let qb = QuarticWithBitangent::new(g.clone(), k.clone()).unwrap();
        let dec = bitangent_decompose(&qb, true).unwrap();
        // both sign choices and a k-multiple shift give valid surfaces that
        // re-project to the same data up to scalars
        let variants = vec![
            (dec.q.clone(), dec.c.clone()),
            (dec.q.neg(), dec.c.clone()),
            {
                let shift = p(3, "x1");
                let q2 = dec.q.add(&k.mul(&shift).unwrap()).unwrap();
                // c2 = c + 2 q shift + k shift^2 keeps k c2 - q2^2 = g
                let c2 = dec
                    .c
                    .add(&dec.q.mul(&shift).unwrap().scale(&fint(2)))
                    .unwrap()
                    .add(&k.mul(&shift.mul(&shift).unwrap()).unwrap())
                    .unwrap();
                (q2, c2)
            },
        ];
        for (q, c) in variants {
            let back = k.mul(&c).unwrap().sub(&q.mul(&q).unwrap()).unwrap();
            assert_eq!(back, dec.g_used);
            let s = fibrations::assemble_surface(&k, &q, &c).unwrap();
            let mut point = vec![fint(0); 4];
            point[3] = fint(1);
            let proj = fibrations::project_point_surface(&s, &point).unwrap();
            assert!(dec.g_used.scalar_ratio(&proj.quartic).is_some());
            assert!(k.scalar_ratio(&proj.bitangent).is_some());
        }
    }

    #[test]
    fn tangent_line_gives_singular_threefold() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let mut done = 0;
        while done < 3 {
            let Some((g, k, lt)) = crate::testgen::quartic_with_tangent_line(&mut rng) else {
                continue;
            };
            match eckardt_from_triple(&g, &k, &lt, true) {
                Err(Error::NonTransverse(_)) => done += 1,
                Err(Error::SingularHypersurface) => done += 1,
                Ok(_) => panic!("tangent line accepted"),
                Err(_) => {}
            }
        }
    }

    #[test]
    fn random_roundtrips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let mut done = 0;
        while done < 5 {
            let Some((x, line)) = crate::testgen::random_valid_triple(&mut rng) else {
                continue;
            };
            let report = roundtrip_check(&x, &line).unwrap();
            assert!(report.pass);
            done += 1;
        }
    }

    #[test]
    fn roundtrip_in_general_coordinates() {
        // transporting the fixture through a coordinate change exercises a
        // nontrivial normalization before the round trip
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        let x = fixtures::fix3_cubic();
        let line = fixtures::fix3_line();
        for _ in 0..3 {
            let g = crate::testgen::random_gl4(&mut rng);
            let (pair2, line2, _) = crate::testgen::transform_instance(&x.pair(), &line, None, &g);
            let x2 = geometry::make_eckardt(&pair2).unwrap();
            let report = roundtrip_check(&x2, &line2).unwrap();
            assert!(report.pass);
        }
    }

    #[test]
    fn homogeneity_of_comparison_scalars() {
        // rescaling the threefold rescales the reported scalars predictably:
        // the round trip still passes and all scalars stay rational
        let x = fixtures::fix3_cubic();
        let pair = x.pair();
        let scaled =
            geometry::CubicPair::new(pair.f.scale(&fint(3)), pair.l.scale(&fint(3))).unwrap();
        let x2 = geometry::make_eckardt(&scaled).unwrap();
        let report = roundtrip_check(&x2, &fixtures::fix3_line()).unwrap();
        assert!(report.pass);
    }
}
