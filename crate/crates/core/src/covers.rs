//! Genus bookkeeping for the towers of double covers attached to a line
//! projection, the branch sextic of the genus-2 quotient, and the
//! j-invariant matching between splits of that sextic and the hyperplane
//! section curve.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::binform::BinForm;
use crate::error::{Error, Result};
use crate::fibrations::{self, PointwiseProjection};
use crate::frac::Frac;
use crate::geometry::{EckardtCubic, Line};
use crate::matrix::LinearChange;
use crate::numeric::{p1_det, P1Point};
use crate::poly::Poly;

/// Combinatorial datum of a double cover of curves, optionally carrying the
/// branch divisor as a binary form.
#[derive(Clone, Debug, Serialize)]
pub struct CoverSpec {
    pub base_genus: u32,
    pub degree: u32,
    pub branch_count: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch_form: Option<BinForm>,
}

impl CoverSpec {
    pub fn new(base_genus: u32, degree: u32, branch_count: u32) -> Result<Self> {
        if degree == 2 && branch_count % 2 != 0 {
            return Err(Error::BadRamification {
                deg: degree,
                base: base_genus,
                ram: branch_count,
            });
        }
        Ok(CoverSpec {
            base_genus,
            degree,
            branch_count,
            branch_form: None,
        })
    }

    pub fn with_branch_form(mut self, form: BinForm) -> Result<Self> {
        if form.degree() != self.branch_count {
            return Err(Error::DegreeMismatch {
                expected: self.branch_count,
                got: form.degree(),
            });
        }
        self.branch_form = Some(form);
        Ok(self)
    }

    pub fn cover_genus(&self) -> Result<u32> {
        riemann_hurwitz(self.base_genus, self.degree, self.branch_count)
    }
}

/// Genus of a degree-`deg` cover of a genus-`g_base` curve with total
/// ramification `ram`.
pub fn riemann_hurwitz(g_base: u32, deg: u32, ram: u32) -> Result<u32> {
    // 2 g~ - 2 = deg (2 g - 2) + ram
    let rhs = deg as i64 * (2 * g_base as i64 - 2) + ram as i64 + 2;
    if rhs % 2 != 0 || rhs < 0 {
        return Err(Error::BadRamification {
            deg,
            base: g_base,
            ram,
        });
    }
    Ok((rhs / 2) as u32)
}

/// Branch counts along the six edges of the Klein tower over the quotient
/// curve. Defaults are the counts forced by an invariant line projection.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KleinBranchCounts {
    pub a_sigma: u32,
    pub a_sigma_iota: u32,
    pub a_iota: u32,
    pub b_sigma: u32,
    pub b_sigma_iota: u32,
    pub b_iota: u32,
}

impl Default for KleinBranchCounts {
    fn default() -> Self {
        KleinBranchCounts {
            a_sigma: 12,
            a_sigma_iota: 0,
            a_iota: 0,
            b_sigma: 0,
            b_sigma_iota: 6,
            b_iota: 6,
        }
    }
}

/// Genera of the five curves in the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenusTable {
    pub g_dtilde: u32,
    pub g_dsigma: u32,
    pub g_dsigmaiota: u32,
    pub g_d: u32,
    pub g_dbar: u32,
}

/// Solve the tower from the branch counts, with the discriminant fixed as a
/// smooth plane quintic of genus 6, and check that all three routes to the
/// top curve agree.
pub fn klein_tower(counts: &KleinBranchCounts) -> Result<GenusTable> {
    let g_d = 6u32;
    // invert 2 g_d - 2 = 2 (2 g_bar - 2) + b_iota
    let num = 2 * g_d as i64 - 2 - counts.b_iota as i64 + 4;
    if num % 4 != 0 || num < 0 {
        return Err(Error::TowerInconsistent(format!(
            "no integer base genus under the quintic: got {num}/4",
        )));
    }
    let g_dbar = (num / 4) as u32;
    let g_dsigma = riemann_hurwitz(g_dbar, 2, counts.b_sigma)?;
    let g_dsigmaiota = riemann_hurwitz(g_dbar, 2, counts.b_sigma_iota)?;
    let g_top_a = riemann_hurwitz(g_d, 2, counts.a_iota)?;
    let g_top_b = riemann_hurwitz(g_dsigma, 2, counts.a_sigma)?;
    let g_top_c = riemann_hurwitz(g_dsigmaiota, 2, counts.a_sigma_iota)?;
    if g_top_a != g_top_b || g_top_b != g_top_c {
        return Err(Error::TowerInconsistent(format!(
            "cover genus differs along routes: {g_top_a}, {g_top_b}, {g_top_c}",
        )));
    }
    Ok(GenusTable {
        g_dtilde: g_top_a,
        g_dsigma,
        g_dsigmaiota,
        g_d,
        g_dbar,
    })
}

/// Branch sextic of the genus-2 quotient: the discriminant in `x4^2` of the
/// even quintic `-1/4 l3 t^2 + m t + n`.
pub fn quotient_sextic(l3: &BinForm, m: &BinForm, n: &BinForm) -> Result<BinForm> {
    if l3.degree() != 1 || m.degree() != 3 || n.degree() != 5 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            got: l3.degree(),
        });
    }
    let delta = m.mul(m).add(&l3.mul(n))?;
    if delta.is_zero() {
        return Err(Error::ZeroForm);
    }
    Ok(delta)
}

/// Fixed points of the involution on the discriminant quintic: the distinct
/// roots of the even slice plus the pencil origin, which always lies on the
/// curve.
pub fn fixed_point_count(d: &Poly, slice: &BinForm) -> Result<u32> {
    if d.nvars() != 3 {
        return Err(Error::NvarsMismatch(3, d.nvars()));
    }
    // evenness in the involution coordinate
    if !d.coeff_of_power(2, 1).is_zero() || !d.coeff_of_power(2, 3).is_zero() {
        return Err(Error::Internal("discriminant is not even".into()));
    }
    let origin = d.eval(&[Frac::zero(), Frac::zero(), crate::frac::fint(1)])?;
    if !origin.is_zero() {
        return Err(Error::Internal(
            "pencil origin escaped the discriminant".into(),
        ));
    }
    if !slice.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    Ok(slice.distinct_roots() + 1)
}

/// j-invariant of the double cover of the line branched at four distinct
/// points, through the cross-ratio.
pub fn elliptic_j(points: &[P1Point; 4]) -> Result<Complex64> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            if points[i].dist(&points[j]) < 1e-10 {
                return Err(Error::RepeatedPoints);
            }
        }
    }
    let d = |i: usize, j: usize| p1_det(&points[i], &points[j]);
    let lambda = (d(0, 2) * d(1, 3)) / (d(1, 2) * d(0, 3));
    let num = lambda * lambda - lambda + Complex64::new(1.0, 0.0);
    let den = lambda * lambda * (lambda - Complex64::new(1.0, 0.0)).powu(2);
    Ok(Complex64::new(256.0, 0.0) * num.powu(3) / den)
}

/// j-invariant of a smooth plane cubic with a marked rational point,
/// computed by projecting from the point and taking the branch quartic.
pub fn j_of_plane_cubic(cubic: &Poly, point: &[Frac]) -> Result<Complex64> {
    cubic.require_homogeneous(3)?;
    if cubic.nvars() != 3 || point.len() != 3 {
        return Err(Error::NvarsMismatch(3, cubic.nvars().min(point.len())));
    }
    if !cubic.eval(point)?.is_zero() {
        return Err(Error::PointNotOnVariety);
    }
    // move the point to [0,0,1]
    let t = completion_for_cubic_point(point)?;
    let moved = cubic.apply_linear_change(&t)?;
    if !moved.coeff_of_power(2, 3).is_zero() {
        return Err(Error::Internal("cubic term after normalization".into()));
    }
    let k1 = moved.coeff_of_power(2, 2).drop_vars(&[0, 1])?;
    let q1 = moved
        .coeff_of_power(2, 1)
        .scale(&crate::frac::frac(1, 2))
        .drop_vars(&[0, 1])?;
    let c1 = moved.coeff_of_power(2, 0).drop_vars(&[0, 1])?;
    if k1.is_zero() {
        return Err(Error::SingularCubic);
    }
    // branch quartic q1^2 - k1 c1 in the residual coordinates
    let branch = q1.mul(&q1)?.sub(&k1.mul(&c1)?)?;
    let bform = BinForm::from_poly(&branch, 0, 1, 4)?;
    if !bform.is_squarefree() {
        return Err(Error::SingularCubic);
    }
    let roots = bform.complex_roots()?;
    let quad: [P1Point; 4] = roots
        .try_into()
        .map_err(|_| Error::Internal("branch quartic root count".into()))?;
    elliptic_j(&quad)
}

fn completion_for_cubic_point(point: &[Frac]) -> Result<LinearChange> {
    let mut cols: Vec<Option<Vec<Frac>>> = vec![None; 3];
    cols[2] = Some(point.to_vec());
    let mut chosen = vec![point.to_vec()];
    for slot in 0..2 {
        for cand in 0..3 {
            let mut v = vec![Frac::zero(); 3];
            v[cand] = crate::frac::fint(1);
            let mut trial = chosen.clone();
            trial.push(v.clone());
            if crate::matrix::FracMat::from_rows(trial.clone())?.rank_exact() == trial.len() {
                chosen.push(v.clone());
                cols[slot] = Some(v);
                break;
            }
        }
        if cols[slot].is_none() {
            return Err(Error::DegenerateSpan);
        }
    }
    LinearChange::from_columns(cols.into_iter().map(|c| c.unwrap()).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct MumfordSplit {
    /// indices into the root list forming the removed pair
    pub pair: [usize; 2],
    pub j_quartet_re: f64,
    pub j_quartet_im: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MumfordReport {
    pub j_section_re: f64,
    pub j_section_im: f64,
    pub matches: Vec<MumfordSplit>,
    pub split_count: usize,
}

/// Enumerate the fifteen 2+4 splits of the branch sextic's roots and return
/// every split whose quartet matches the j-invariant of the section curve
/// within the relative tolerance. At least one split must match when the
/// tower is nondegenerate.
pub fn mumford_match(
    delta: &BinForm,
    section_cubic: &Poly,
    section_point: &[Frac],
    rel_tol: f64,
) -> Result<MumfordReport> {
    if delta.degree() != 6 {
        return Err(Error::DegreeMismatch {
            expected: 6,
            got: delta.degree(),
        });
    }
    if !delta.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let j_e = j_of_plane_cubic(section_cubic, section_point)?;
    let roots = delta.complex_roots()?;
    if roots.len() != 6 {
        return Err(Error::Internal("sextic root count".into()));
    }
    let tol = rel_tol * j_e.norm().max(1.0);
    let mut matches = Vec::new();
    let mut split_count = 0usize;
    for i in 0..6 {
        for j in (i + 1)..6 {
            split_count += 1;
            let quartet: Vec<P1Point> = (0..6)
                .filter(|&k| k != i && k != j)
                .map(|k| roots[k])
                .collect();
            let quad: [P1Point; 4] = quartet.try_into().unwrap();
            let j_q = elliptic_j(&quad)?;
            let dev = (j_q - j_e).norm();
            if dev <= tol {
                matches.push(MumfordSplit {
                    pair: [i, j],
                    j_quartet_re: j_q.re,
                    j_quartet_im: j_q.im,
                    deviation: dev,
                });
            }
        }
    }
    if matches.is_empty() {
        return Err(Error::NoMumfordMatch);
    }
    Ok(MumfordReport {
        j_section_re: j_e.re,
        j_section_im: j_e.im,
        matches,
        split_count,
    })
}

/// Full tower report for a pointwise fixed line.
#[derive(Debug)]
pub struct TowerReport {
    pub projection: PointwiseProjection,
    pub genera: GenusTable,
    pub sextic: BinForm,
    pub generic: bool,
    pub fixed_points: Result<u32>,
    pub mumford: Option<Result<MumfordReport>>,
}

/// Run the whole pointwise-line pipeline. The optional section point (in
/// the coordinates of the ambient projective 3-space) enables the
/// j-invariant matching step.
pub fn tower(
    x: &EckardtCubic,
    line: &Line,
    section_point: Option<&[Frac]>,
    rel_tol: f64,
) -> Result<TowerReport> {
    let projection = fibrations::eckardt_project_pointwise(x, line)?;
    let generic = fibrations::check_generic(x, line)?;
    let genera = klein_tower(&KleinBranchCounts::default())?;
    let sextic = quotient_sextic(&projection.l3, &projection.m_piece, &projection.n_piece)?;
    let fixed_points = fixed_point_count(&projection.data.discriminant, &projection.slice);
    let mumford = match section_point {
        None => None,
        Some(pt) => Some(run_mumford(x, &projection, &sextic, pt, rel_tol)),
    };
    Ok(TowerReport {
        projection,
        genera,
        sextic,
        generic,
        fixed_points,
        mumford,
    })
}

fn run_mumford(
    x: &EckardtCubic,
    projection: &PointwiseProjection,
    sextic: &BinForm,
    section_point: &[Frac],
    rel_tol: f64,
) -> Result<MumfordReport> {
    // the section curve in the normalized coordinates: x0 = 0 slice of the
    // transformed threefold, as a ternary cubic in (x1, x2, x3)
    let f_norm = projection.norm.f_prime.coeff_of_power(4, 0);
    let section = f_norm.set_var_zero(0).drop_vars(&[1, 2, 3])?;
    // transform the marked point into the normalized coordinates
    if section_point.len() != 4 {
        return Err(Error::NvarsMismatch(4, section_point.len()));
    }
    if !x.surface().eval(section_point)?.is_zero() || !x.plane().eval(section_point)?.is_zero() {
        return Err(Error::PointNotOnVariety);
    }
    let mut p5: Vec<Frac> = section_point.to_vec();
    p5.push(Frac::zero());
    let moved = projection.norm.t.apply_point_inv(&p5)?;
    if !moved[0].is_zero() || !moved[4].is_zero() {
        return Err(Error::Internal(
            "section point escaped the plane in normalized coordinates".into(),
        ));
    }
    let pt3 = vec![moved[1].clone(), moved[2].clone(), moved[3].clone()];
    mumford_match(sextic, &section, &pt3, rel_tol)
}

/// Prym dimension of a branched double cover: genus of the cover minus
/// genus of the base.
pub fn prym_dim(spec: &CoverSpec) -> Result<u32> {
    Ok(spec.cover_genus()? - spec.base_genus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::frac::fint;

    #[test]
    fn riemann_hurwitz_reference_values() {
        assert_eq!(riemann_hurwitz(6, 2, 0).unwrap(), 11);
        assert_eq!(riemann_hurwitz(2, 2, 6).unwrap(), 6);
        let g = riemann_hurwitz(3, 2, 4).unwrap();
        assert_eq!(g, 7);
        assert_eq!(g - 3, 4);
    }

    #[test]
    fn riemann_hurwitz_rejects_odd() {
        assert!(riemann_hurwitz(1, 2, 3).is_err());
    }

    #[test]
    fn cover_spec_validation() {
        assert!(CoverSpec::new(3, 2, 5).is_err());
        let spec = CoverSpec::new(3, 2, 4).unwrap();
        assert_eq!(spec.cover_genus().unwrap(), 7);
        assert_eq!(prym_dim(&spec).unwrap(), 4);
        let bf = BinForm::new(vec![fint(1), fint(0), fint(0), fint(0), fint(1)]);
        let spec = spec.with_branch_form(bf).unwrap();
        assert!(spec.branch_form.is_some());
        let wrong = BinForm::new(vec![fint(1), fint(1)]);
        assert!(CoverSpec::new(2, 2, 6)
            .unwrap()
            .with_branch_form(wrong)
            .is_err());
    }

    #[test]
    fn klein_tower_reference_counts() {
        let t = klein_tower(&KleinBranchCounts::default()).unwrap();
        assert_eq!(
            t,
            GenusTable {
                g_dtilde: 11,
                g_dsigma: 3,
                g_dsigmaiota: 6,
                g_d: 6,
                g_dbar: 2
            }
        );
        // anti-invariant dimension bookkeeping: 1 + 4 = 5
        assert_eq!(1 + (t.g_dsigmaiota - t.g_dbar), 5);
    }

    #[test]
    fn klein_tower_all_etale_rejected() {
        let counts = KleinBranchCounts {
            a_sigma: 0,
            a_sigma_iota: 0,
            a_iota: 0,
            b_sigma: 0,
            b_sigma_iota: 0,
            b_iota: 0,
        };
        assert!(klein_tower(&counts).is_err());
    }

    #[test]
    fn sextic_degree_bookkeeping() {
        let bf = |v: &[i64]| BinForm::new(v.iter().map(|&x| fint(x)).collect());
        let l3 = bf(&[1, 1]);
        let m = bf(&[1, 0, 0, -1]);
        let n = bf(&[1, 0, 1, 0, 0, 2]);
        let s = quotient_sextic(&l3, &m, &n).unwrap();
        assert_eq!(s.degree(), 6);
    }

    #[test]
    fn fix1_tower_sextic_is_degenerate() {
        // the Fermat fixture fails the disjoint-support condition and its
        // branch sextic picks up a double root at the pencil point
        let x = fixtures::fix1_cubic();
        let proj = fibrations::eckardt_project_pointwise(&x, &fixtures::fix1_line()).unwrap();
        let delta = quotient_sextic(&proj.l3, &proj.m_piece, &proj.n_piece).unwrap();
        assert_eq!(delta.degree(), 6);
        assert!(!delta.is_squarefree());
        // its slice is nevertheless squarefree, so the fixed-point count is 6
        assert_eq!(
            fixed_point_count(&proj.data.discriminant, &proj.slice).unwrap(),
            6
        );
    }

    #[test]
    fn fix4_tower_is_generic() {
        let fx = fixtures::fix4();
        let report = tower(&fx.x, &fx.line, Some(&fx.e_point), 1e-6).unwrap();
        assert!(report.generic);
        assert!(report.sextic.is_squarefree());
        assert_eq!(report.fixed_points.as_ref().unwrap(), &6);
        assert_eq!(report.genera.g_dbar, 2);
        let mm = report.mumford.unwrap().unwrap();
        assert!(!mm.matches.is_empty());
        assert_eq!(mm.split_count, 15);
    }

    #[test]
    fn fix1_degenerate_limit_still_matches_j() {
        // the Fermat tower's sextic has a double root, so the matching
        // operation rejects it; removing that double pair by hand leaves the
        // quartet {0, cube roots of -1/4}, whose threefold symmetry forces
        // j = 0, agreeing with the section curve. The degeneration is a
        // limit of the generic picture, not an instance of it.
        let x = fixtures::fix1_cubic();
        let proj = fibrations::eckardt_project_pointwise(&x, &fixtures::fix1_line()).unwrap();
        let delta = quotient_sextic(&proj.l3, &proj.m_piece, &proj.n_piece).unwrap();
        assert!(matches!(
            mumford_match(
                &delta,
                &Poly::parse(3, "x0^3 + x1^3 + x2^3").unwrap(),
                &[fint(1), fint(-1), fint(0)],
                1e-6
            ),
            Err(Error::NotSquarefree)
        ));
        let roots = delta.complex_roots().unwrap();
        // find the double root and drop the pair
        let mut pair = None;
        'outer: for i in 0..6 {
            for j in (i + 1)..6 {
                if roots[i].dist(&roots[j]) < 1e-7 {
                    pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        let (i, j) = pair.expect("double root exists");
        let quartet: Vec<P1Point> = (0..6)
            .filter(|&k| k != i && k != j)
            .map(|k| roots[k])
            .collect();
        let jq = elliptic_j(&quartet.try_into().unwrap()).unwrap();
        // the Fermat section curve is equianharmonic
        let je = j_of_plane_cubic(
            &Poly::parse(3, "x0^3 + x1^3 + x2^3").unwrap(),
            &[fint(1), fint(-1), fint(0)],
        )
        .unwrap();
        assert!(je.norm() < 1e-7);
        assert!(jq.norm() < 1e-6, "quartet j = {jq}");
    }

    #[test]
    fn degenerate_slice_detected() {
        let bf = |v: &[i64]| BinForm::new(v.iter().map(|&x| fint(x)).collect());
        // x2^2 x3^3 style slice with repeated roots
        let slice = bf(&[0, 0, 1, 0, 0, 0]);
        let d = Poly::parse(3, "x0^5").unwrap();
        assert!(matches!(
            fixed_point_count(&d, &slice),
            Err(Error::NotSquarefree) | Err(Error::Internal(_))
        ));
    }

    #[test]
    fn harmonic_and_equianharmonic_j() {
        let aff = |x: f64, y: f64| P1Point::new(Complex64::new(x, y), Complex64::new(1.0, 0.0));
        // lambda = -1: points 0, 1, infinity, -1
        let pts = [
            aff(0.0, 0.0),
            aff(1.0, 0.0),
            P1Point::infinity(),
            aff(-1.0, 0.0),
        ];
        let j = elliptic_j(&pts).unwrap();
        assert!((j - Complex64::new(1728.0, 0.0)).norm() < 1e-9);
        // equianharmonic: lambda = exp(i pi / 3)
        let w = Complex64::new(0.5, (3.0f64).sqrt() / 2.0);
        let pts = [
            aff(0.0, 0.0),
            aff(1.0, 0.0),
            P1Point::infinity(),
            P1Point::new(w, Complex64::new(1.0, 0.0)),
        ];
        let j = elliptic_j(&pts).unwrap();
        assert!(j.norm() < 1e-9);
    }

    #[test]
    fn j_invariant_ordering_invariance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<P1Point> = (0..4)
            .map(|_| {
                P1Point::new(
                    Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                    Complex64::new(1.0, 0.0),
                )
            })
            .collect();
        let base = elliptic_j(&[pts[0], pts[1], pts[2], pts[3]]).unwrap();
        let mut idx = [0usize, 1, 2, 3];
        let mut perms = Vec::new();
        permute(&mut idx, 0, &mut perms);
        for perm in perms {
            let arr = [pts[perm[0]], pts[perm[1]], pts[perm[2]], pts[perm[3]]];
            let j = elliptic_j(&arr).unwrap();
            assert!(
                (j - base).norm() < 1e-6 * base.norm().max(1.0),
                "ordering changed j: {j} vs {base}"
            );
        }
    }

    fn permute(idx: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
        if k == 4 {
            out.push(*idx);
            return;
        }
        for i in k..4 {
            idx.swap(k, i);
            permute(idx, k + 1, out);
            idx.swap(k, i);
        }
    }

    #[test]
    fn j_projective_invariance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let pts: Vec<P1Point> = (0..4)
                .map(|_| {
                    P1Point::new(
                        Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                        Complex64::new(1.0, 0.0),
                    )
                })
                .collect();
            let mut ok = true;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if pts[i].dist(&pts[j]) < 1e-3 {
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            let base = elliptic_j(&[pts[0], pts[1], pts[2], pts[3]]).unwrap();
            // random fractional-linear transform
            let (a, b, c, d) = (
                Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            );
            if (a * d - b * c).norm() < 1e-2 {
                continue;
            }
            let moved: Vec<P1Point> = pts
                .iter()
                .map(|p| P1Point::new(a * p.u + b * p.v, c * p.u + d * p.v))
                .collect();
            let j = elliptic_j(&[moved[0], moved[1], moved[2], moved[3]]).unwrap();
            assert!((j - base).norm() < 1e-9 * base.norm().max(1.0) + 1e-7);
        }
    }

    #[test]
    fn fermat_cubic_has_j_zero() {
        let cubic = Poly::parse(3, "x0^3 + x1^3 + x2^3").unwrap();
        let pt = vec![fint(1), fint(-1), fint(0)];
        let j = j_of_plane_cubic(&cubic, &pt).unwrap();
        assert!(j.norm() < 1e-7);
    }

    #[test]
    fn mumford_relabeling_stable() {
        let fx = fixtures::fix4();
        let report = tower(&fx.x, &fx.line, Some(&fx.e_point), 1e-6).unwrap();
        let mm = report.mumford.unwrap().unwrap();
        // the matched splits are reported as sorted index pairs
        for m in &mm.matches {
            assert!(m.pair[0] < m.pair[1]);
        }
        assert!(mm.split_count <= 15);
    }
}
