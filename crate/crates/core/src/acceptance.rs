//! The verification suite: eleven numbered criteria with pinned tolerances
//! and seeds, each returning a pass/fail verdict with a detail string.
//! Criterion 9's first clause and criterion 10 assert expectations that the
//! Fermat fixture cannot meet (its rational lines fail the disjoint-support
//! condition, which degenerates the branch sextic); those asserts run
//! faithfully and report the honest outcome, with the passing analogue
//! exercised on the searched generic fixture.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::covers;
use crate::fibrations;
use crate::fixtures;
use crate::frac::fint;
use crate::geometry;
use crate::jacobian::{self, InvolutionAction};
use crate::lines;
use crate::reconstruct;
use crate::testgen;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}: {} - {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=11).map(run_criterion).collect()
}

pub fn run_criterion(id: usize) -> CriterionResult {
    let (name, body): (&'static str, fn() -> Result<String, String>) = match id {
        1 => ("reference graded dimensions and eigenspace splits", c01),
        2 => ("cokernel constants on random smooth instances", c02),
        3 => ("period-map differential dimensions", c03),
        4 => ("exact discriminant identities", c04),
        5 => ("27 lines on the Fermat and random smooth surfaces", c05),
        6 => ("Klein tower genera and fixed-point count", c06),
        7 => ("Prym dimension arithmetic", c07),
        8 => ("reconstruction round trips", c08),
        9 => ("disjoint-support genericity", c09),
        10 => ("branch-sextic j-invariant matching", c10),
        11 => ("three ruling lines per hyperplane", c11),
        _ => panic!("criterion id out of range"),
    };
    match body() {
        Ok(detail) => CriterionResult {
            id,
            name,
            pass: true,
            detail,
        },
        Err(detail) => CriterionResult {
            id,
            name,
            pass: false,
            detail,
        },
    }
}

fn c01() -> Result<String, String> {
    let x = fixtures::fix1_cubic();
    let f = x.polynomial();
    let expect = [1usize, 5, 10, 10, 5, 1, 0];
    for (d, want) in expect.iter().enumerate() {
        let got = jacobian::graded_dim(f, d as u32).map_err(|e| e.to_string())?;
        if got != *want {
            return Err(format!("graded dim at degree {d}: got {got}, want {want}"));
        }
    }
    let tau = InvolutionAction::last_coordinate_flip(5);
    for d in [1u32, 4] {
        let (a, b) = jacobian::eigen_split(f, d, &tau).map_err(|e| e.to_string())?;
        let mut pair = [a, b];
        pair.sort();
        if pair != [1, 4] {
            return Err(format!("eigen split at degree {d}: got ({a}, {b})"));
        }
    }
    Ok("dims (1,5,10,10,5,1,0); splits at degrees 1 and 4 both {4,1}".into())
}

fn c02() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for i in 0..100 {
        let x = testgen::random_smooth_eckardt(&mut rng);
        let (dim, _) = x.polar_quadric_space().map_err(|e| e.to_string())?;
        if dim != 3 {
            return Err(format!("polar quadric dim {dim} != 3 at instance {i}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut done = 0;
    while done < 100 {
        let (g, _k, _q) = testgen::random_quartic_with_bitangent(&mut rng);
        let l = testgen::random_form(&mut rng, 3, 1, 2);
        let Ok(restr) = jacobian::restrict_to_linear_zero(&g, &l) else {
            continue;
        };
        if restr.is_zero() || !restr.is_squarefree() {
            continue;
        }
        let (dim, _) = match jacobian::quartic_cokernel(&g, &l) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if dim != 2 {
            return Err(format!(
                "quartic cokernel dim {dim} != 2 at instance {done}"
            ));
        }
        done += 1;
    }
    Ok("polar space dim 3 and split-quintic cokernel dim 2, 100 instances each".into())
}

fn c03() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let tau = InvolutionAction::last_coordinate_flip(5);
    for i in 0..20 {
        let x = testgen::random_smooth_eckardt(&mut rng);
        let f = x.polynomial();
        let (r3_plus, _) = jacobian::eigen_split(f, 3, &tau).map_err(|e| e.to_string())?;
        if r3_plus != 7 {
            return Err(format!("invariant cubic piece dim {r3_plus} != 7 at {i}"));
        }
        let (d1_plus, d1_minus) = jacobian::eigen_split(f, 1, &tau).map_err(|e| e.to_string())?;
        let four = d1_plus.max(d1_minus);
        if four != 4 {
            return Err(format!(
                "linear eigenspace dims ({d1_plus},{d1_minus}) at {i}"
            ));
        }
        let sym2 = four * (four + 1) / 2;
        if sym2 != 10 {
            return Err(format!("sym^2 dim {sym2} != 10 at {i}"));
        }
        let (coker, _) = x.polar_quadric_space().map_err(|e| e.to_string())?;
        if coker != 3 {
            return Err(format!("cokernel dim {coker} != 3 at {i}"));
        }
    }
    Ok("(7, 10, 3) on 20 random smooth instances; kernel dim 0".into())
}

fn c04() -> Result<String, String> {
    use crate::binform::BinForm;
    use crate::frac::frac;
    use crate::poly::Poly;
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    // block factorization of the through-vertex matrix
    for i in 0..100 {
        let k = testgen::random_form(&mut rng, 3, 1, 4);
        let q = testgen::random_form(&mut rng, 3, 2, 4);
        let c = testgen::random_form(&mut rng, 3, 3, 4);
        let l = testgen::random_form(&mut rng, 3, 1, 4);
        let zero = Poly::zero(3);
        let det = fibrations::det3(&[
            [k.clone(), zero.clone(), q.clone()],
            [zero.clone(), l.clone(), zero.clone()],
            [q.clone(), zero, c.clone()],
        ])
        .map_err(|e| e.to_string())?;
        let expect = (|| l.mul(&k.mul(&c)?.sub(&q.mul(&q)?)?))().map_err(|e| e.to_string())?;
        if !det.sub(&expect).map_err(|e| e.to_string())?.is_zero() {
            return Err(format!("factorization identity failed at instance {i}"));
        }
    }
    // expansion of the pointwise matrix in the involution coordinate
    let bf = |rng: &mut ChaCha8Rng, d: u32| {
        BinForm::new((0..=d).map(|_| fint(rng.gen_range(-4..=4))).collect())
    };
    use rand::Rng;
    for i in 0..100 {
        let l1 = bf(&mut rng, 1);
        let l2 = bf(&mut rng, 1);
        let l3 = bf(&mut rng, 1);
        let q1 = bf(&mut rng, 2);
        let q2 = bf(&mut rng, 2);
        let c = bf(&mut rng, 3);
        let emb = |b: &BinForm| b.to_poly(3, 0, 1);
        let x4 = Poly::variable(3, 2).unwrap();
        let q1f = emb(&q1)
            .add(&x4.pow(2).scale(&frac(1, 2)))
            .map_err(|e| e.to_string())?;
        let det = fibrations::det3(&[
            [emb(&l1), emb(&l2), q1f.clone()],
            [emb(&l2), emb(&l3), emb(&q2)],
            [q1f, emb(&q2), emb(&c)],
        ])
        .map_err(|e| e.to_string())?;
        let m_piece = l2
            .mul(&q2)
            .add(&l3.mul(&q1).scale(&fint(-1)))
            .map_err(|e| e.to_string())?;
        let n_piece = fibrations::det3_binform(&[
            [l1.clone(), l2.clone(), q1.clone()],
            [l2.clone(), l3.clone(), q2.clone()],
            [q1.clone(), q2.clone(), c.clone()],
        ])
        .map_err(|e| e.to_string())?;
        let expansion = emb(&l3)
            .scale(&frac(-1, 4))
            .mul(&x4.pow(4))
            .and_then(|a| a.add(&emb(&m_piece).mul(&x4.pow(2))?))
            .and_then(|a| a.add(&emb(&n_piece)))
            .map_err(|e| e.to_string())?;
        if det != expansion {
            return Err(format!("expansion identity failed at instance {i}"));
        }
    }
    Ok("both determinant identities exact on 100 random instances each".into())
}

fn c05() -> Result<String, String> {
    let f = fixtures::fermat_surface();
    let found = lines::find_lines_numeric(&f, 1e-10, 0).map_err(|e| e.to_string())?;
    if found.len() != 27 {
        return Err(format!("Fermat line count {}", found.len()));
    }
    for l in &found {
        let r = lines::residual_of(&f, l);
        if r > 1e-10 {
            return Err(format!("Fermat residual {r:.3e}"));
        }
    }
    // the three rational lines, verified exactly
    let rational = [
        ((1i64, -1, 0, 0), (0i64, 0, 1, -1)),
        ((1, 0, -1, 0), (0, 1, 0, -1)),
        ((1, 0, 0, -1), (0, 1, -1, 0)),
    ];
    for (a, b) in rational {
        let line = geometry::Line::new(
            vec![fint(a.0), fint(a.1), fint(a.2), fint(a.3)],
            vec![fint(b.0), fint(b.1), fint(b.2), fint(b.3)],
        )
        .map_err(|e| e.to_string())?;
        if !geometry::contains_line(&f, &line).map_err(|e| e.to_string())? {
            return Err("rational line containment failed".into());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    for i in 0..10 {
        let surf = loop {
            let g = testgen::random_form(&mut rng, 4, 3, 3);
            if jacobian::is_smooth_hypersurface(&g).map_err(|e| e.to_string())? {
                break g;
            }
        };
        let found = lines::find_lines_numeric(&surf, 1e-10, 7 + i).map_err(|e| e.to_string())?;
        if found.len() != 27 {
            return Err(format!("random surface {i}: {} lines", found.len()));
        }
        for l in &found {
            let r = lines::residual_of(&surf, l);
            if r > 1e-10 {
                return Err(format!("random surface {i} residual {r:.3e}"));
            }
        }
    }
    Ok("27 lines on the Fermat surface and 10 random smooth surfaces, residuals < 1e-10".into())
}

fn c06() -> Result<String, String> {
    let table =
        covers::klein_tower(&covers::KleinBranchCounts::default()).map_err(|e| e.to_string())?;
    let want = covers::GenusTable {
        g_dtilde: 11,
        g_dsigma: 3,
        g_dsigmaiota: 6,
        g_d: 6,
        g_dbar: 2,
    };
    if table != want {
        return Err(format!("genus table {table:?}"));
    }
    let fx = fixtures::fix4();
    if !fibrations::check_generic(&fx.x, &fx.line).map_err(|e| e.to_string())? {
        return Err("generic fixture fails its own genericity".into());
    }
    let proj = fibrations::eckardt_project_pointwise(&fx.x, &fx.line).map_err(|e| e.to_string())?;
    let count = covers::fixed_point_count(&proj.data.discriminant, &proj.slice)
        .map_err(|e| e.to_string())?;
    if count != 6 {
        return Err(format!("fixed point count {count}"));
    }
    Ok("genera (11,3,6,6,2); fixed-point count 6 on the generic fixture".into())
}

fn c07() -> Result<String, String> {
    let g_cover = covers::riemann_hurwitz(3, 2, 4).map_err(|e| e.to_string())?;
    if g_cover != 7 {
        return Err(format!("branched cover genus {g_cover} != 7"));
    }
    let prym_through = g_cover - 3;
    let table =
        covers::klein_tower(&covers::KleinBranchCounts::default()).map_err(|e| e.to_string())?;
    let prym_pointwise = table.g_dsigmaiota - table.g_dbar;
    let tau = InvolutionAction::last_coordinate_flip(5);
    let f = fixtures::fix1_cubic();
    let (a, b) = jacobian::eigen_split(f.polynomial(), 1, &tau).map_err(|e| e.to_string())?;
    let anti = a.max(b) as u32;
    if prym_through != 4 || prym_pointwise != 4 || anti != 4 {
        return Err(format!(
            "dimensions disagree: {prym_through}, {prym_pointwise}, {anti}"
        ));
    }
    Ok("both Prym dimensions equal the 4-dimensional anti-invariant part".into())
}

fn c08() -> Result<String, String> {
    let x = fixtures::fix3_cubic();
    let report =
        reconstruct::roundtrip_check(&x, &fixtures::fix3_line()).map_err(|e| e.to_string())?;
    if !report.pass {
        return Err("fixture round trip failed".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    let mut done = 0;
    while done < 20 {
        let Some((x, line)) = testgen::random_valid_triple(&mut rng) else {
            continue;
        };
        let report = reconstruct::roundtrip_check(&x, &line).map_err(|e| e.to_string())?;
        if !report.pass {
            return Err(format!("random round trip {done} failed"));
        }
        done += 1;
    }
    // deliberately tangent lines must be rejected through the smoothness
    // test
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let mut rejected = 0;
    let mut attempts = 0;
    while rejected < 3 && attempts < 400 {
        attempts += 1;
        let Some((g, k, lt)) = testgen::quartic_with_tangent_line(&mut rng) else {
            continue;
        };
        match reconstruct::eckardt_from_triple(&g, &k, &lt, true) {
            Err(_) => rejected += 1,
            Ok(_) => return Err("tangent line produced a smooth threefold".into()),
        }
    }
    if rejected < 3 {
        return Err("could not construct tangent instances".into());
    }
    Ok("fixture + 20 random round trips exact; tangent lines rejected".into())
}

fn c09() -> Result<String, String> {
    let mut failures = Vec::new();
    // stated expectation: the Fermat fixture's rational line passes; the
    // honest computation shows both degeneracy divisors vanish at the
    // pencil point of the plane x2 + x3 = 0
    let x1 = fixtures::fix1_cubic();
    let g1 = fibrations::check_generic(&x1, &fixtures::fix1_line()).map_err(|e| e.to_string())?;
    if !g1 {
        failures.push(
            "check_generic(FIX1 rational line) = false, expected true; the resultant of \
             the degree-2 and degree-4 divisors vanishes identically for every rational \
             line of the Fermat fixture"
                .to_string(),
        );
    }
    let (xc, lc) = testgen::constructed_collision();
    if fibrations::check_generic(&xc, &lc).map_err(|e| e.to_string())? {
        failures.push("constructed collision passed".into());
    }
    // scale invariance on the searched generic fixture
    let fx = fixtures::fix4();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    use rand::Rng;
    for _ in 0..10 {
        let lam = fint(rng.gen_range(1..=9));
        let mu = fint(rng.gen_range(1..=9));
        let pair = geometry::CubicPair::new(fx.pair.f.scale(&lam), fx.pair.l.scale(&mu))
            .map_err(|e| e.to_string())?;
        let xs = geometry::make_eckardt(&pair).map_err(|e| e.to_string())?;
        if !fibrations::check_generic(&xs, &fx.line).map_err(|e| e.to_string())? {
            failures.push("rescaling changed the genericity verdict".into());
        }
    }
    if failures.is_empty() {
        Ok("genericity verdicts and scale invariance as stated".into())
    } else {
        Err(failures.join("; "))
    }
}

fn c10() -> Result<String, String> {
    // stated fixture: the Fermat pair with its rational pointwise line; its
    // branch sextic has a double root (the same degeneration that breaks
    // criterion 9), so the matching precondition cannot be met
    let x = fixtures::fix1_cubic();
    let tower = covers::tower(
        &x,
        &fixtures::fix1_line(),
        Some(&fixtures::fix1_section_point()),
        1e-6,
    )
    .map_err(|e| e.to_string())?;
    match tower.mumford {
        Some(Ok(report)) if !report.matches.is_empty() => Ok(format!(
            "{} matching splits of 15 within 1e-6",
            report.matches.len()
        )),
        Some(Ok(_)) => Err("no matching split".into()),
        Some(Err(e)) => Err(format!(
            "FIX1 tower cannot run the matching: {e}; its branch sextic is non-squarefree \
             because the fixture fails the disjoint-support condition (see criterion 9), so \
             the genus-2 quotient degenerates and the matching precondition fails. In the \
             degenerate limit the split removing the double root does reproduce j = 0 = j(E) \
             (module test fix1_degenerate_limit_still_matches_j); the generic fixture passes \
             the full check (fix4_tower_is_generic)."
        )),
        None => Err("matching step did not run".into()),
    }
}

fn c11() -> Result<String, String> {
    let x = fixtures::fix3_cubic();
    let mut rng = ChaCha8Rng::seed_from_u64(1011);
    let mut done = 0;
    let mut attempts = 0;
    while done < 10 && attempts < 200 {
        attempts += 1;
        let h = testgen::random_form(&mut rng, 4, 1, 3);
        match geometry::hyperplane_lines_through_p(&x, &h, 1e-10) {
            Ok(out) => {
                if out.points.len() != 3 {
                    return Err(format!(
                        "{} ruling lines under one hyperplane",
                        out.points.len()
                    ));
                }
                for r in out.residuals {
                    if r > 1e-10 {
                        return Err(format!("ruling residual {r:.3e}"));
                    }
                }
                done += 1;
            }
            // tangent or degenerate hyperplanes are legitimately rejected
            Err(_) => continue,
        }
    }
    if done < 10 {
        return Err("not enough transverse hyperplanes found".into());
    }
    Ok("10 random hyperplanes, 3 ruling lines each, residuals < 1e-10".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_run() {
        // the full suite lives in the acceptance test target; here only the
        // arithmetic-only criteria
        for id in [6, 7] {
            let r = run_criterion(id);
            assert_eq!(r.id, id);
            assert!(r.pass, "{}", r.line());
        }
    }
}
