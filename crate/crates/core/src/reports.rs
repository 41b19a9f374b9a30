//! The verification battery: each acceptance criterion as a deterministic,
//! seeded check producing a canonical report, plus the per-command report
//! builders used by the CLI.  Identical seeds reproduce identical bytes.

use serde::Serialize;

use crate::conics::{self, BabyData, VerraData};
use crate::epw::{self, ConeFrame};
use crate::exterior::TwoFourFrame;
use crate::field::{Field, Fp, Fp2, Rational};
use crate::kummer::{self, Flavor};
use crate::lagrangian::{chart_quadric, chart_quadric_bar, corner_map, ChartFrame, SymmetricMap};
use crate::lattices::{self, IntLattice, SurfaceKind};
use crate::linalg::Matrix;
use crate::poly::DenseForm;
use crate::projective;
use crate::rng::Rng;
use crate::schubert::{self, ChowRing};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub details: String,
}

fn result(id: usize, name: &str, passed: bool, details: String) -> CriterionResult {
    CriterionResult {
        id,
        name: name.to_string(),
        passed,
        details,
    }
}

/// Deterministic retry: sub-seeds derived from a base seed.
fn subseed(base: u64, attempt: u64) -> u64 {
    base.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(attempt * 7919 + 1)
}

fn random_qa(rng: &mut Rng, p: u64) -> SymmetricMap<Fp> {
    let mut m: Matrix<Fp> = Matrix::zero(6, 6);
    for i in 0..6 {
        for j in i..6 {
            let v = Fp::new(rng.below(p) as i64, p);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymmetricMap::new(m).unwrap()
}

/// A non-degenerate Kummer datum for the given seed: q_A of full rank whose
/// quartic construction succeeds.
pub fn kummer_datum(
    seed: u64,
    p: u64,
) -> (
    SymmetricMap<Fp>,
    crate::lagrangian::Lagrangian<Fp>,
    DenseForm<Fp>,
) {
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    for attempt in 0..50 {
        let mut rng = Rng::seeded(subseed(seed, attempt));
        let qa = random_qa(&mut rng, p);
        if qa.matrix().rank() != 6 {
            continue;
        }
        let a = kummer::lagrangian_of_qa(&tf, &qa);
        let pts = kummer::interpolation_points(&ctx);
        if let Ok(k) = kummer::kummer_from_lagrangian(&tf, &a, Flavor::Fv, &pts) {
            return (qa, a, k);
        }
    }
    panic!("no admissible Kummer datum for seed {seed}");
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

pub fn criterion_1_schubert() -> CriterionResult {
    let g = ChowRing::grassmannian(3, 6);
    let mut ok = true;
    let mut notes = Vec::new();
    let v72 = schubert::eval_expression(
        "integrate(sigma1^2*(sigma2^2-sigma1*sigma3)*(16*sigma1^3-12*sigma1*sigma2+12*sigma3))",
        &g,
    );
    ok &= v72 == Ok(schubert::EvalResult::Integer(72));
    notes.push(format!("deg D2 = {:?}", v72));
    let tg = schubert::chern_tangent(&g).unwrap();
    let s1 = g.special(1).unwrap();
    let omega1 = schubert::chern_twisted(&tg.dual(), 9, &s1).unwrap();
    let o1 = {
        let mut t = schubert::TotalChern::one(&g, g.dimension());
        t.parts[1] = s1.clone();
        t
    };
    let tdual = omega1.mul(&o1).unwrap();
    ok &= tdual.part(1) == s1.scale(4);
    notes.push(format!("c1(T^dual) = {}", schubert::render_class(&tdual.part(1))));
    let p3 = ChowRing::projective(3);
    let h = p3.special(1).unwrap();
    let f0 = {
        let mut t = schubert::TotalChern::one(&p3, 3);
        t.parts[1] = h.scale(2);
        t.parts[2] = schubert::pow(&h, 2).unwrap().scale(2);
        t
    };
    let f = f0.mul(&f0).unwrap();
    ok &= schubert::pr_class(&f, 1).unwrap() == h.scale(4);
    ok &= schubert::pr_class(&f, 2).unwrap() == schubert::pow(&h, 3).unwrap().scale(16);
    let v42 = schubert::eval_expression("integrate(sigma1^9)", &g);
    ok &= v42 == Ok(schubert::EvalResult::Integer(42));
    notes.push(format!("deg G(3,6) = {v42:?}"));
    result(1, "schubert numbers", ok, notes.join("; "))
}

pub fn criterion_2_chart_master() -> CriterionResult {
    let p = 101;
    let one_fp = Fp::new(1, p);
    let chart_fp = ChartFrame::new(one_fp);
    let mut rng = Rng::seeded(0xc2);
    let mut failures = 0;
    for _ in 0..200 {
        let b = Matrix::from_rows(
            (0..3)
                .map(|_| (0..3).map(|_| Fp::new(rng.below(p) as i64, p)).collect())
                .collect(),
        );
        if !chart_matches(&chart_fp, &b, &one_fp) {
            failures += 1;
        }
    }
    let one_q = Rational::from_int(1);
    let chart_q = ChartFrame::new(one_q.clone());
    for _ in 0..20 {
        let b = Matrix::from_rows(
            (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| Rational::from_int(rng.below(9) as i64 - 4))
                        .collect()
                })
                .collect(),
        );
        if !chart_matches(&chart_q, &b, &one_q) {
            failures += 1;
        }
    }
    // bar-chart consistency on 50 cone points: B = f + rank-1
    let mut bar_failures = 0;
    for _ in 0..50 {
        let mut b = corner_map(&one_fp);
        let u: Vec<Fp> = (0..3).map(|_| Fp::new(rng.below(p) as i64, p)).collect();
        let v: Vec<Fp> = (0..3).map(|_| Fp::new(rng.below(p) as i64, p)).collect();
        for i in 0..3 {
            for j in 0..3 {
                b[(i, j)] = b[(i, j)] + u[i] * v[j];
            }
        }
        let full = chart_quadric(&b);
        let bar = match chart_quadric_bar(&b) {
            Ok(x) => x,
            Err(_) => {
                bar_failures += 1;
                continue;
            }
        };
        for i in 0..9 {
            for j in 0..9 {
                if bar[(i, j)] != full[(1 + i, 1 + j)] {
                    bar_failures += 1;
                }
            }
        }
        // the chart quadric of a cone point is singular along ∧³U₁
        let top_u1 = {
            use crate::exterior::MultiVector;
            let e0 = MultiVector::monomial(6, &[0], one_fp);
            let e3 = MultiVector::monomial(6, &[3], one_fp);
            let e1 = MultiVector::monomial(6, &[1], one_fp);
            let e2 = MultiVector::monomial(6, &[2], one_fp);
            e0.add(&e3).wedge(&e1).unwrap().wedge(&e2).unwrap()
        };
        let w = chart_fp
            .t_basis
            .transpose()
            .solve(&Matrix::from_rows(
                top_u1.coords.iter().map(|c| vec![*c]).collect(),
            ))
            .unwrap()
            .expect("∧³U₁ lies in T_{U₀}");
        let wv: Vec<Fp> = (0..10).map(|i| w[(i, 0)]).collect();
        let sw = full.apply(&wv);
        if sw.iter().any(|c| !num_traits::Zero::is_zero(c)) {
            bar_failures += 1;
        }
    }
    let passed = failures == 0 && bar_failures == 0;
    result(
        2,
        "chart master test",
        passed,
        format!("220 graphs, failures {failures}; bar-chart failures {bar_failures}"),
    )
}

fn chart_matches<K: crate::field::Field>(chart: &ChartFrame<K>, b: &Matrix<K>, one: &K) -> bool {
    let mut rows = Vec::new();
    for j in 0..3 {
        let mut v = vec![K::zero(); 6];
        v[j] = one.clone();
        for i in 0..3 {
            v[3 + i] = b[(i, j)].clone();
        }
        rows.push(v);
    }
    let u = crate::linalg::Subspace::from_rows(6, rows);
    let t = crate::exterior::tangent_space(&u).unwrap();
    let s = chart_quadric(b);
    match chart.graph_of_chart(&s) {
        Ok(g) => g.space() == &t,
        Err(_) => false,
    }
}

pub fn criterion_3_kummer_equivalence() -> CriterionResult {
    let p = 11;
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let mut mismatches = 0;
    let mut checked = 0;
    let mut residual_ok = 0;
    for seed in 1..=10u64 {
        let (qa, a, k) = kummer_datum(seed, p);
        for w in projective::points(&ctx, 4) {
            let vanish = num_traits::Zero::is_zero(&k.eval(&w));
            let meets = kummer::meet_dim(&tf, a.space().basis(), Flavor::Fv, &w) >= 1;
            if vanish != meets {
                mismatches += 1;
            }
            checked += 1;
        }
        let fam = kummer::symmetric_family(&qa);
        match kummer::discriminant_sextic(&fam, &ctx) {
            Ok((_, residual)) => {
                if k.proportionality(&residual).is_some() {
                    residual_ok += 1;
                }
            }
            Err(_) => {}
        }
    }
    let passed = mismatches == 0 && residual_ok == 10;
    result(
        3,
        "kummer equivalence",
        passed,
        format!("{checked} points checked, {mismatches} mismatches; residual proportional {residual_ok}/10"),
    )
}

pub fn criterion_4_nodes() -> CriterionResult {
    let p = 11;
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let tf2 = TwoFourFrame::new(Fp2::ctx(p).embed_i64(1));
    let ctx2 = Fp2::ctx(p);
    let mut max_count = 0;
    let mut ok = true;
    for seed in 1..=20u64 {
        let (_, a, k) = kummer_datum(seed, p);
        let rep = kummer::node_scan(&tf, a.space().basis(), Flavor::Fv, &k, &ctx).unwrap();
        let a2 = embed_basis(a.space().basis(), p);
        let k2 = embed_form(&k, p);
        let rep2 = kummer::node_scan(&tf2, &a2, Flavor::Fv, &k2, &ctx2).unwrap();
        ok &= rep.points.len() <= 16 && rep2.points.len() <= 16;
        ok &= rep2.points.len() >= rep.points.len();
        max_count = max_count.max(rep2.points.len());
    }
    // split fixture: exactly 16 rational nodes
    let qa = kummer::split_fixture_qa();
    let a = kummer::lagrangian_of_qa(&tf, &qa);
    let pts = kummer::interpolation_points(&ctx);
    let k = kummer::kummer_from_lagrangian(&tf, &a, Flavor::Fv, &pts).unwrap();
    let rep = kummer::node_scan(&tf, a.space().basis(), Flavor::Fv, &k, &ctx).unwrap();
    ok &= rep.points.len() == 16;
    result(
        4,
        "node scans",
        ok,
        format!("20 seeds over F11/F121, max extension count {max_count}; fixture nodes {}", rep.points.len()),
    )
}

pub fn embed_basis(m: &Matrix<Fp>, p: u64) -> Matrix<Fp2> {
    Matrix::from_rows(
        m.rows_vec()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| Fp2::new(x.residue() as i64, 0, p))
                    .collect()
            })
            .collect(),
    )
}

pub fn embed_form(f: &DenseForm<Fp>, p: u64) -> DenseForm<Fp2> {
    DenseForm::from_coeffs(
        f.nvars,
        f.degree,
        f.coeffs
            .iter()
            .map(|x| Fp2::new(x.residue() as i64, 0, p))
            .collect(),
    )
}

pub fn criterion_5_duality() -> CriterionResult {
    let p = 11;
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let mut ok = true;
    let mut details = Vec::new();
    for seed in 21..=25u64 {
        let (_, a, k) = kummer_datum(seed, p);
        let pts = kummer::interpolation_points(&ctx);
        let khat = match kummer::kummer_from_lagrangian(&tf, &a, Flavor::Wedge2U, &pts) {
            Ok(x) => x,
            Err(_) => {
                ok = false;
                continue;
            }
        };
        match kummer::duality_check(&k, &khat, &ctx, 50) {
            Ok(rep) => {
                ok &= rep.failures == 0 && rep.swapped_failures == 0 && rep.negative_control_failed;
                details.push(format!(
                    "seed {seed}: {}+{} samples, control {}",
                    rep.sampled, rep.swapped_sampled, rep.negative_control_failed
                ));
            }
            Err(e) => {
                ok = false;
                details.push(format!("seed {seed}: {e}"));
            }
        }
    }
    result(5, "projective duality", ok, details.join("; "))
}

pub fn criterion_6_delpezzo() -> CriterionResult {
    let p = 11;
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let mut ok = true;
    let mut squarefree = 0;
    let mut done = 0;
    let mut seed = 31u64;
    while done < 10 && seed < 90 {
        seed += 1;
        let (qa, a, k) = kummer_datum(seed, p);
        let fam = kummer::symmetric_family(&qa);
        let nodes = kummer::node_scan(&tf, a.space().basis(), Flavor::Fv, &k, &ctx).unwrap();
        let rep = match kummer::delpezzo_counts(&fam, &nodes, &ctx) {
            Ok(r) => r,
            Err(kummer::KummerError::SingularDelPezzo) => continue,
            Err(_) => {
                ok = false;
                break;
            }
        };
        done += 1;
        ok &= rep.fiber_discriminant_degree == 6;
        ok &= rep.bitangents_found <= 28;
        if rep.fiber_discriminant_squarefree {
            squarefree += 1;
        }
    }
    ok &= done == 10 && squarefree == 10;
    // fixture counts
    let qa = kummer::split_fixture_qa();
    let a = kummer::lagrangian_of_qa(&tf, &qa);
    let pts = kummer::interpolation_points(&ctx);
    let k = kummer::kummer_from_lagrangian(&tf, &a, Flavor::Fv, &pts).unwrap();
    let nodes = kummer::node_scan(&tf, a.space().basis(), Flavor::Fv, &k, &ctx).unwrap();
    let rep = kummer::delpezzo_counts(&fam_of(&qa), &nodes, &ctx).unwrap();
    ok &= rep.bitangents_found == 28
        && rep.line_image_bitangents == 12
        && rep.residual_bitangents == 16
        && rep.rank4_count == 16;
    result(
        6,
        "del Pezzo counts",
        ok,
        format!(
            "10 seeds squarefree {squarefree}/10; fixture bitangents {} (12 lines + {} residual)",
            rep.bitangents_found, rep.residual_bitangents
        ),
    )
}

fn fam_of(qa: &SymmetricMap<Fp>) -> kummer::SymmetricFamily<Fp> {
    kummer::symmetric_family(qa)
}

pub fn criterion_7_epw_profile() -> CriterionResult {
    let p7 = Fp::new(1, 7);
    let cf7 = ConeFrame::new(p7);
    let ctx7 = Fp::new(1, 7);
    let mut ok = true;
    let mut resamples = 0;
    for seed in 1..=20u64 {
        // random draws over a small field hit the non-generic strata with
        // probability ~1/p; admissibility is certified operationally
        // (vertex off the section, r3 = 0), resampling deterministically
        let (profile, _, tries) = admissible_scan(&cf7, &ctx7, 7, subseed(0xe9, seed));
        resamples += tries - 1;
        ok &= profile.r3 == 0 && !profile.vertex_in_d1 && profile.r2 > 0;
    }
    let p101 = Fp::new(1, 101);
    let cf101 = ConeFrame::new(p101);
    let ctx101 = Fp::new(1, 101);
    let mut nullity_ok = 0;
    for seed in 1..=10u64 {
        let mut rng = Rng::seeded(subseed(0x65, seed));
        let abar = cf101.random_abar(&mut rng, 101);
        match epw::interpolate_quartic(&cf101, &abar, &ctx101, &mut rng) {
            Ok((_, rep)) => {
                if rep.nullity == 1 && rep.mismatches == 0 && rep.validated == 1000 {
                    nullity_ok += 1;
                }
            }
            Err(_) => {}
        }
    }
    ok &= nullity_ok == 10;
    result(
        7,
        "EPW rank profile and interpolation",
        ok,
        format!("20 admissible scans at p=7 ({resamples} non-generic draws resampled); interpolation certificates {nullity_ok}/10 at p=101"),
    )
}

/// Exhaustive scan of an operationally admissible draw: resample until the
/// vertex misses the section and r3 = 0.
fn admissible_scan(
    cf: &ConeFrame<Fp>,
    ctx: &Fp,
    p: u64,
    base: u64,
) -> (epw::RankProfile, Vec<(Fp, Vec<Fp>, Vec<Fp>)>, u64) {
    for attempt in 0..30 {
        let mut rng = Rng::seeded(subseed(base, attempt));
        let abar = cf.random_abar(&mut rng, p);
        let (profile, samples) = epw::scan_cone(cf, &abar, ctx).unwrap();
        if profile.r3 == 0 && !profile.vertex_in_d1 {
            return (profile, samples, attempt + 1);
        }
    }
    panic!("no admissible draw found");
}

/// As above but also returning the Lagrangian for further work.
fn admissible_abar(
    cf: &ConeFrame<Fp>,
    ctx: &Fp,
    p: u64,
    base: u64,
) -> (
    crate::lagrangian::Lagrangian<Fp>,
    epw::RankProfile,
    Vec<(Fp, Vec<Fp>, Vec<Fp>)>,
) {
    for attempt in 0..30 {
        let mut rng = Rng::seeded(subseed(base, attempt));
        let abar = cf.random_abar(&mut rng, p);
        let (profile, samples) = epw::scan_cone(cf, &abar, ctx).unwrap();
        if profile.r3 == 0 && !profile.vertex_in_d1 {
            return (abar, profile, samples);
        }
    }
    panic!("no admissible draw found");
}

pub fn criterion_8_tangent_cones() -> CriterionResult {
    let p = 11;
    let cf = ConeFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let mut ok = true;
    let mut details = Vec::new();
    let mut done = 0;
    let mut seed = 0u64;
    while done < 5 && seed < 40 {
        seed += 1;
        let (abar, _, samples) = admissible_abar(&cf, &ctx, p, subseed(0x7c, seed));
        if samples.len() < 10 {
            continue;
        }
        let mut rng = Rng::seeded(subseed(0x7c1, seed));
        let Ok((quartic, rep)) = epw::interpolate_quartic(&cf, &abar, &ctx, &mut rng) else {
            continue;
        };
        if rep.nullity != 1 {
            continue;
        }
        let tc = epw::tangent_cone_check(&quartic, &samples, &ctx).unwrap();
        ok &= tc.gradient_failures == 0 && tc.hessian_other == 0 && tc.checked >= 10;
        details.push(format!(
            "seed {seed}: {} rank-2 points, gradients zero {}, Hessian rank 3 at {}",
            tc.checked,
            tc.gradient_failures == 0,
            tc.hessian_rank3
        ));
        done += 1;
    }
    ok &= done == 5;
    result(8, "tangent cones at the singular surface", ok, details.join("; "))
}

pub fn criterion_9_fibrations() -> CriterionResult {
    let p = 7;
    let cf = ConeFrame::new(Fp::new(1, p));
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let one = ctx.embed_i64(1);
    let mut ok = true;
    let mut fibers_k4 = 0;
    let mut fibers_m2 = 0;
    let mut node_matches = 0;
    for seed in 1..=2u64 {
        let mut rng = Rng::seeded(subseed(0xf1b, seed));
        let abar = cf.random_abar(&mut rng, p);
        let Ok((global, _)) = epw::interpolate_quartic(&cf, &abar, &ctx, &mut rng) else {
            ok = false;
            continue;
        };
        let (_, rank2) = epw::scan_cone(&cf, &abar, &ctx).unwrap();
        let mut made = 0;
        let mut guard = 0;
        while made < 10 && guard < 100 {
            guard += 1;
            let u2 = epw::random_projective(&ctx, &mut rng, 3);
            let Ok(flag) = epw::fiber_lagrangian_k4(&cf, &tf, &abar, &u2) else {
                continue;
            };
            let pts = kummer::interpolation_points(&ctx);
            let Ok(fiber_kummer) =
                kummer::kummer_from_lagrangian(&tf, &flag, Flavor::Wedge2U, &pts)
            else {
                continue;
            };
            made += 1;
            fibers_k4 += 1;
            // restriction ∝ pullback of the fiber Kummer
            let restricted = global.restrict_fiber_y(&u2, &one);
            let mut sub: Matrix<Fp> = Matrix::zero(4, 4);
            sub[(0, 3)] = one;
            sub[(1, 2)] = -one;
            sub[(2, 1)] = one;
            sub[(3, 0)] = -one;
            let pulled = fiber_kummer.pullback_linear(&sub);
            ok &= pulled.proportionality(&restricted).is_some();
            // fiber nodes ↔ rank-2 cone points over this u2
            let nodes = kummer::node_scan(&tf, flag.space().basis(), Flavor::Wedge2U, &fiber_kummer, &ctx)
                .unwrap();
            let u2n = conics::normalize_projective(&u2);
            let mut cone_params: Vec<Vec<Fp>> = rank2
                .iter()
                .filter(|(_, _, y)| conics::normalize_projective(y) == u2n)
                .map(|(t, x, _)| conics::normalize_projective(&epw::k4_fiber_parameter(t, x)))
                .collect();
            cone_params.sort_by_key(|v| format!("{v:?}"));
            cone_params.dedup();
            let node_params: Vec<Vec<Fp>> = nodes
                .points
                .iter()
                .map(|w| conics::normalize_projective(w))
                .collect();
            let mut sorted_nodes = node_params.clone();
            sorted_nodes.sort_by_key(|v| format!("{v:?}"));
            if cone_params == sorted_nodes {
                node_matches += 1;
            } else {
                ok = false;
            }
        }
        ok &= made == 10;
        // M2 side
        let mut made = 0;
        let mut guard = 0;
        while made < 10 && guard < 100 {
            guard += 1;
            let xline = epw::random_projective(&ctx, &mut rng, 3);
            let Ok((flag, mu)) = epw::fiber_lagrangian_m2(&cf, &tf, &abar, &xline) else {
                continue;
            };
            let pts = kummer::interpolation_points(&ctx);
            let Ok(fiber_kummer) = kummer::kummer_from_lagrangian(&tf, &flag, Flavor::Fv, &pts)
            else {
                continue;
            };
            made += 1;
            fibers_m2 += 1;
            let restricted = global.restrict_fiber_x(&xline, &one);
            let mut sub: Matrix<Fp> = Matrix::zero(4, 4);
            sub[(0, 0)] = mu.inv().unwrap();
            sub[(1, 1)] = one;
            sub[(2, 2)] = one;
            sub[(3, 3)] = one;
            let pulled = fiber_kummer.pullback_linear(&sub);
            ok &= pulled.proportionality(&restricted).is_some();
            let nodes =
                kummer::node_scan(&tf, flag.space().basis(), Flavor::Fv, &fiber_kummer, &ctx)
                    .unwrap();
            let xn = conics::normalize_projective(&xline);
            let mut cone_params: Vec<Vec<Fp>> = rank2
                .iter()
                .filter(|(_, x, _)| conics::normalize_projective(x) == xn)
                .map(|(t, _, y)| conics::normalize_projective(&epw::m2_fiber_parameter(t, y, &mu)))
                .collect();
            cone_params.sort_by_key(|v| format!("{v:?}"));
            cone_params.dedup();
            let mut sorted_nodes: Vec<Vec<Fp>> = nodes
                .points
                .iter()
                .map(|w| conics::normalize_projective(w))
                .collect();
            sorted_nodes.sort_by_key(|v| format!("{v:?}"));
            if cone_params == sorted_nodes {
                node_matches += 1;
            } else {
                ok = false;
            }
        }
        ok &= made == 10;
    }
    result(
        9,
        "Kummer fibrations of the section",
        ok,
        format!("{fibers_k4} K4-fibers + {fibers_m2} M2-fibers, node bijections {node_matches}/40"),
    )
}

pub fn criterion_10_conics() -> CriterionResult {
    let p = 11;
    let cf = ConeFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let mut ok = true;
    let mut main_images = 0;
    let mut branch_pairs = 0;
    let mut problems: Vec<String> = Vec::new();
    for seed in 1..=5u64 {
        let mut rng = Rng::seeded(subseed(0xc0, seed));
        let mut q: Matrix<Fp> = Matrix::zero(9, 9);
        for i in 0..9 {
            for j in i..9 {
                let v = Fp::new(rng.below(p) as i64, p);
                q[(i, j)] = v;
                q[(j, i)] = v;
            }
        }
        let data = VerraData::new(&cf, SymmetricMap::new(q).unwrap());
        let mut images = 0;
        let mut guard = 0;
        let mut involution_done = false;
        while images < 100 && guard < 3000 {
            guard += 1;
            let Ok(sample) = conics::sample_conic(&cf, &data, &ctx, &mut rng) else {
                continue;
            };
            if !(sample.quintic_degree == 5 && sample.segre_is_root) {
                ok = false;
                problems.push(format!("seed {seed}: pencil shape"));
            }
            let rank = conics::psi_rank(&cf, &data, &sample).unwrap_or(0);
            if rank < 1 {
                ok = false;
                problems.push(format!("seed {seed}: image off the section"));
            }
            if conics::e_system_rank(&cf, &sample) != 2 {
                ok = false;
                problems.push(format!("seed {seed}: E-rank"));
            }
            if !involution_done {
                if let Ok(rep) = conics::involution_check(&cf, &data, &ctx, &sample) {
                    if !(rep.same_image && rep.planes_meet_in_line) {
                        ok = false;
                        problems.push(format!("seed {seed}: involution"));
                    }
                    involution_done = true;
                }
            }
            images += 1;
        }
        if images != 100 || !involution_done {
            ok = false;
            problems.push(format!("seed {seed}: only {images} images, involution {involution_done}"));
        }
        main_images += images;
        match conics::branch_conics(&cf, &data, &ctx, &mut rng, 4000) {
            Ok(pair) => {
                branch_pairs += 1;
                let e1 = conics::e_system_rank(&cf, &pair.sample1);
                let e2 = conics::e_system_rank(&cf, &pair.sample2);
                let pr = conics::psi_rank(&cf, &data, &pair.sample1).unwrap_or(0);
                let same = conics::same_cone_point(
                    (&pair.sample1.image_t, &pair.sample1.image_x, &pair.sample1.image_y),
                    (&pair.sample2.image_t, &pair.sample2.image_x, &pair.sample2.image_y),
                );
                if !(e1 == 1 && e2 == 1 && pr >= 2 && same) {
                    ok = false;
                    problems.push(format!("seed {seed}: branch e=({e1},{e2}) rank {pr} same {same}"));
                }
            }
            Err(e) => {
                ok = false;
                problems.push(format!("seed {seed}: no branch pair: {e}"));
            }
        }
    }
    // baby case: the per-sample checks are exact; p_C off T_A is a
    // general-position statement, and rational branch configurations are
    // certified by exhaustive search (at least one must occur overall).
    let mut baby_images = 0;
    let mut baby_branch_pairs = 0;
    for seed in 1..=5u64 {
        let (data, _) = baby_datum(&tf, p, subseed(0xbab, seed));
        let mut rng = Rng::seeded(subseed(0xbab2, seed));
        match conics::baby_pipeline(&data, &ctx, &mut rng, 100) {
            Ok(rep) => {
                baby_images += rep.samples;
                baby_branch_pairs += rep.branch_pairs;
                let fine = rep.samples == 100
                    && rep.image_rank1 + rep.image_rank2_plus == rep.samples
                    && rep.qc_found == rep.samples
                    && rep.pc_off_ta * 10 >= rep.samples * 8
                    && rep.sextic_singular_at_qc == rep.samples
                    && rep.branch_rank2_images == rep.branch_pairs;
                if !fine {
                    ok = false;
                    problems.push(format!("baby seed {seed}: {rep:?}"));
                }
            }
            Err(e) => {
                ok = false;
                problems.push(format!("baby seed {seed}: {e}"));
            }
        }
    }
    if baby_branch_pairs == 0 {
        ok = false;
        problems.push("no baby branch pair over any seed".to_string());
    }
    let mut details = format!(
        "{main_images} main images, {branch_pairs}/5 branch pairs, {baby_images} baby images"
    );
    if !problems.is_empty() {
        problems.truncate(6);
        details.push_str(&format!("; problems: {}", problems.join(" | ")));
    }
    result(10, "conic pipelines", ok, details)
}

/// A baby datum with invertible q_A, resampled deterministically.
fn baby_datum(tf: &TwoFourFrame<Fp>, p: u64, base: u64) -> (BabyData<Fp>, u64) {
    for attempt in 0..30 {
        let mut rng = Rng::seeded(subseed(base, attempt));
        let qa = random_qa(&mut rng, p);
        if qa.matrix().rank() == 6 {
            return (BabyData::new(tf, qa), attempt + 1);
        }
    }
    panic!("no invertible q_A");
}

pub fn criterion_11_lattices() -> CriterionResult {
    let mut ok = true;
    ok &= lattices::fujiki_degree(4) == 48;
    ok &= lattices::rr_sections(4) == 10;
    let u2 = IntLattice::u_scaled(2);
    ok &= u2.bb_square(&[1, 1]).unwrap() == 4;
    ok &= u2.bb_square(&[1, 0]).unwrap() == 0;
    ok &= u2.divisibility(&[1, 0]).unwrap() == 2;
    let g1 = IntLattice::diagonal("diag(10,-2,-2)", &[10, -2, -2]);
    let g2 = IntLattice::new("U(2)+<-10>", vec![vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, -10]])
        .unwrap();
    let c1 = lattices::is_equivalent(&g1, &g2, 6).unwrap();
    ok &= c1.is_some();
    let g3 = IntLattice::new("S[2]", vec![vec![2, 4, 0], vec![4, 2, 0], vec![0, 0, -2]]).unwrap();
    let g4 = IntLattice::new("U(2)+<-6>", vec![vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, -6]])
        .unwrap();
    let c2 = lattices::is_equivalent(&g3, &g4, 6).unwrap();
    ok &= c2.is_some();
    let f = lattices::surface_invariants(SurfaceKind::FanoSurface);
    let f0 = lattices::surface_invariants(SurfaceKind::Quotient);
    ok &= f0.chi == 37 && f.chi == 74;
    ok &= f.k2 == 2 * f0.k2 && f.c2 == 2 * f0.c2;
    result(
        11,
        "lattice and invariant identities",
        ok,
        format!(
            "48/10/q=4 verified; certificates {:?} and {:?}; Noether 37, 74",
            c1.map(|c| c.p),
            c2.map(|c| c.p)
        ),
    )
}

/// Run criteria 1–11 and render the canonical report string.
pub fn run_battery() -> (Vec<CriterionResult>, String) {
    let results = vec![
        criterion_1_schubert(),
        criterion_2_chart_master(),
        criterion_3_kummer_equivalence(),
        criterion_4_nodes(),
        criterion_5_duality(),
        criterion_6_delpezzo(),
        criterion_7_epw_profile(),
        criterion_8_tangent_cones(),
        criterion_9_fibrations(),
        criterion_10_conics(),
        criterion_11_lattices(),
    ];
    let rendered = serde_json::to_string_pretty(&results).expect("serializable");
    (results, rendered)
}

/// Criterion 12: two runs with identical seeds are byte-identical; the
/// thread cap from EPWLAB_THREADS must not affect the bytes.
pub fn criterion_12_determinism(first: &str) -> CriterionResult {
    let (_, second) = run_battery();
    let passed = first == second;
    result(
        12,
        "determinism",
        passed,
        format!(
            "rerun bytes {} (threads cap {:?})",
            if passed { "identical" } else { "DIFFER" },
            std::env::var("EPWLAB_THREADS").ok()
        ),
    )
}

// ---------------------------------------------------------------------------
// CLI-facing reports
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct KummerReport {
    pub schema: u32,
    pub prime: u64,
    pub seed: Option<u64>,
    pub fixture: Option<String>,
    pub quartic: String,
    pub node_count: usize,
    pub nodes: Vec<Vec<String>>,
    pub extension_node_count: Option<usize>,
    pub discriminant_residual_proportional: bool,
    pub duality: Option<DualitySummary>,
    pub delpezzo: Option<kummer::DelPezzoReport>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualitySummary {
    pub sampled: usize,
    pub failures: usize,
    pub swapped_failures: usize,
    pub negative_control_failed: bool,
}

pub fn kummer_report(
    p: u64,
    seed: Option<u64>,
    fixture: Option<&str>,
    ext: u32,
) -> Result<KummerReport, String> {
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let (qa, a, k) = match fixture {
        Some("split") => {
            if p != 11 {
                return Err("the split fixture lives over F11".to_string());
            }
            let qa = kummer::split_fixture_qa();
            let a = kummer::lagrangian_of_qa(&tf, &qa);
            let pts = kummer::interpolation_points(&ctx);
            let k = kummer::kummer_from_lagrangian(&tf, &a, Flavor::Fv, &pts)
                .map_err(|e| e.to_string())?;
            (qa, a, k)
        }
        Some(other) => return Err(format!("unknown fixture '{other}'")),
        None => kummer_datum(seed.unwrap_or(1), p),
    };
    let nodes = kummer::node_scan(&tf, a.space().basis(), Flavor::Fv, &k, &ctx)
        .map_err(|e| e.to_string())?;
    let fam = kummer::symmetric_family(&qa);
    let residual_ok = match kummer::discriminant_sextic(&fam, &ctx) {
        Ok((_, residual)) => k.proportionality(&residual).is_some(),
        Err(_) => false,
    };
    let pts = kummer::interpolation_points(&ctx);
    let duality = kummer::kummer_from_lagrangian(&tf, &a, Flavor::Wedge2U, &pts)
        .ok()
        .and_then(|khat| kummer::duality_check(&k, &khat, &ctx, 50).ok())
        .map(|d| DualitySummary {
            sampled: d.sampled,
            failures: d.failures,
            swapped_failures: d.swapped_failures,
            negative_control_failed: d.negative_control_failed,
        });
    let delpezzo = kummer::delpezzo_counts(&fam, &nodes, &ctx).ok();
    let extension_node_count = if ext == 2 {
        let ctx2 = Fp2::ctx(p);
        let tf2 = TwoFourFrame::new(ctx2.embed_i64(1));
        let a2 = embed_basis(a.space().basis(), p);
        let k2 = embed_form(&k, p);
        Some(
            kummer::node_scan(&tf2, &a2, Flavor::Fv, &k2, &ctx2)
                .map_err(|e| e.to_string())?
                .points
                .len(),
        )
    } else {
        None
    };
    Ok(KummerReport {
        schema: 1,
        prime: p,
        seed,
        fixture: fixture.map(|s| s.to_string()),
        quartic: crate::textio::render_quartic(&k),
        node_count: nodes.points.len(),
        nodes: nodes
            .points
            .iter()
            .map(|pt| pt.iter().map(|c| c.to_string()).collect())
            .collect(),
        extension_node_count,
        discriminant_residual_proportional: residual_ok,
        duality,
        delpezzo,
        notes: vec![
            "the singular locus on the dual side is cut at intersection dimension >= 2".to_string(),
        ],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EpwReport {
    pub schema: u32,
    pub prime: u64,
    pub seed: u64,
    pub rank_counts: (u64, u64, u64),
    pub vertex_in_d1: bool,
    pub interp_nullity: usize,
    pub interp_validated: usize,
    pub interp_mismatches: usize,
    pub fiber_checks: Vec<String>,
}

pub fn epw_report(p: u64, seed: u64) -> Result<EpwReport, String> {
    let cf = ConeFrame::new(Fp::new(1, p));
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let one = ctx.embed_i64(1);
    let mut rng = Rng::seeded(seed);
    let abar = cf.random_abar(&mut rng, p);
    let (profile, _) = epw::scan_cone(&cf, &abar, &ctx).map_err(|e| e.to_string())?;
    let (global, interp) =
        epw::interpolate_quartic(&cf, &abar, &ctx, &mut rng).map_err(|e| e.to_string())?;
    let mut fiber_checks = Vec::new();
    for trial in 0..3 {
        let u2 = epw::random_projective(&ctx, &mut rng, 3);
        match epw::fiber_lagrangian_k4(&cf, &tf, &abar, &u2) {
            Ok(flag) => {
                let pts = kummer::interpolation_points(&ctx);
                match kummer::kummer_from_lagrangian(&tf, &flag, Flavor::Wedge2U, &pts) {
                    Ok(fiber_kummer) => {
                        let restricted = global.restrict_fiber_y(&u2, &one);
                        let mut sub: Matrix<Fp> = Matrix::zero(4, 4);
                        sub[(0, 3)] = one;
                        sub[(1, 2)] = -one;
                        sub[(2, 1)] = one;
                        sub[(3, 0)] = -one;
                        let pulled = fiber_kummer.pullback_linear(&sub);
                        let okk = pulled.proportionality(&restricted).is_some();
                        fiber_checks.push(format!("k4 fiber {trial}: proportional {okk}"));
                    }
                    Err(e) => fiber_checks.push(format!("k4 fiber {trial}: {e}")),
                }
            }
            Err(e) => fiber_checks.push(format!("k4 fiber {trial}: {e}")),
        }
    }
    Ok(EpwReport {
        schema: 1,
        prime: p,
        seed,
        rank_counts: (profile.r1, profile.r2, profile.r3),
        vertex_in_d1: profile.vertex_in_d1,
        interp_nullity: interp.nullity,
        interp_validated: interp.validated,
        interp_mismatches: interp.mismatches,
        fiber_checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerraSampleRecord {
    pub line_l: Vec<String>,
    pub line_m: Vec<String>,
    pub root: String,
    pub member_rank: usize,
    pub c_p: String,
    pub image: Vec<String>,
    pub predicate_rank: usize,
    pub e_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerraReport {
    pub schema: u32,
    pub prime: u64,
    pub seed: u64,
    pub samples: Vec<VerraSampleRecord>,
    pub branch_pair_found: bool,
    pub baby: conics::BabyReport,
}

pub fn verra_report(p: u64, seed: u64, samples: usize) -> Result<VerraReport, String> {
    let cf = ConeFrame::new(Fp::new(1, p));
    let tf = TwoFourFrame::new(Fp::new(1, p));
    let ctx = Fp::new(1, p);
    let mut rng = Rng::seeded(seed);
    let mut q: Matrix<Fp> = Matrix::zero(9, 9);
    for i in 0..9 {
        for j in i..9 {
            let v = Fp::new(rng.below(p) as i64, p);
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
    }
    let data = VerraData::new(&cf, SymmetricMap::new(q).unwrap());
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < samples && guard < 100 * samples {
        guard += 1;
        let Ok(sample) = conics::sample_conic(&cf, &data, &ctx, &mut rng) else {
            continue;
        };
        let rank = conics::psi_rank(&cf, &data, &sample).map_err(|e| e.to_string())?;
        let er = conics::e_system_rank(&cf, &sample);
        let mut image = vec![sample.image_t.to_string()];
        image.extend(sample.image_x.iter().map(|c| c.to_string()));
        image.extend(sample.image_y.iter().map(|c| c.to_string()));
        out.push(VerraSampleRecord {
            line_l: sample.line_l.iter().map(|c| c.to_string()).collect(),
            line_m: sample.line_m.iter().map(|c| c.to_string()).collect(),
            root: sample.root.to_string(),
            member_rank: sample.member_rank,
            c_p: sample.c_p.to_string(),
            image,
            predicate_rank: rank,
            e_rank: er,
        });
    }
    let branch = conics::branch_conics(&cf, &data, &ctx, &mut rng, 3000).is_ok();
    let qa = random_qa(&mut Rng::seeded(seed ^ 0xbab), p);
    let baby_data = BabyData::new(&tf, qa);
    let baby = conics::baby_pipeline(&baby_data, &ctx, &mut Rng::seeded(seed ^ 0xbab2), 20)
        .map_err(|e| e.to_string())?;
    Ok(VerraReport {
        schema: 1,
        prime: p,
        seed,
        samples: out,
        branch_pair_found: branch,
        baby,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub schema: u32,
    pub fujiki_q4: i64,
    pub rr_q4: i64,
    pub u2_square_h1_plus_h2: i64,
    pub certificates: Vec<Option<lattices::BasisChange>>,
    pub surfaces: Vec<lattices::SurfaceInvariants>,
}

pub fn invariant_report() -> InvariantReport {
    let u2 = IntLattice::u_scaled(2);
    let g1 = IntLattice::diagonal("diag(10,-2,-2)", &[10, -2, -2]);
    let g2 = IntLattice::new("U(2)+<-10>", vec![vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, -10]])
        .unwrap();
    let g3 = IntLattice::new("S[2]", vec![vec![2, 4, 0], vec![4, 2, 0], vec![0, 0, -2]]).unwrap();
    let g4 = IntLattice::new("U(2)+<-6>", vec![vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, -6]])
        .unwrap();
    InvariantReport {
        schema: 1,
        fujiki_q4: lattices::fujiki_degree(4),
        rr_q4: lattices::rr_sections(4),
        u2_square_h1_plus_h2: u2.bb_square(&[1, 1]).unwrap(),
        certificates: vec![
            lattices::is_equivalent(&g1, &g2, 6).unwrap(),
            lattices::is_equivalent(&g3, &g4, 6).unwrap(),
        ],
        surfaces: vec![
            lattices::surface_invariants(SurfaceKind::FanoSurface),
            lattices::surface_invariants(SurfaceKind::Quotient),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria() {
        let c1 = criterion_1_schubert();
        assert!(c1.passed, "{}", c1.details);
        let c11 = criterion_11_lattices();
        assert!(c11.passed, "{}", c11.details);
    }

    #[test]
    fn kummer_report_fixture() {
        let rep = kummer_report(11, None, Some("split"), 2).unwrap();
        assert_eq!(rep.node_count, 16);
        assert!(rep.discriminant_residual_proportional);
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"schema\":1"));
    }
}
