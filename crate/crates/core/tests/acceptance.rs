//! Acceptance suite: one test per criterion, each printing a pass line and
//! enforcing its stated time budget.  Everything is exact arithmetic; there
//! are no tolerances anywhere.

use gengeo::catalog::{catalog_get, catalog_list, evaluate, Classification, RawStructure};
use gengeo::constructions::{
    cokahler_triple, embed_tangent_complex, gac_from_acm, morimoto_j, phi_omega, product_j1,
    product_j2, product_metric, ClassicalAcm,
};
use gengeo::exactalg::{eigenspace, is_positive_definite, kernel, Matrix, Scalar, Subspace};
use gengeo::frame::{
    check_frame, courant_bracket, product_context, FrameContext, GenSection, InvariantForm,
};
use gengeo::structures::{
    check_compat, check_gac, check_gcx, check_metric, classify_contact, compose_gphi,
    is_generalized_kahler, is_normal, lemma32_suite, lemma42_check, GcxClass, GenAlmostContact,
    GenContactMetric, GenMetric,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::Arc;
use std::time::{Duration, Instant};

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn finish(criterion: usize, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its budget: {elapsed:?} > {budget:?}"
    );
    println!("criterion {criterion} ({what}): PASS in {elapsed:?}");
}

/// Validated almost contact triples of every catalog entry that carries one.
fn catalog_gacs() -> Vec<(String, GenAlmostContact, bool)> {
    let mut out = Vec::new();
    for (id, _) in catalog_list() {
        let entry = catalog_get(id).unwrap();
        let gac = match &entry.structure {
            RawStructure::Gac { phi, e_plus, e_minus }
            | RawStructure::Gacm { phi, e_plus, e_minus, .. } => {
                GenAlmostContact::new(phi.clone(), e_plus.clone(), e_minus.clone()).unwrap()
            }
            RawStructure::ClassicalAcm(acm) => gac_from_acm(acm).unwrap(),
            _ => continue,
        };
        out.push((id.to_string(), gac, entry.use_twist));
    }
    out
}

/// Validated contact metric triples of every catalog entry that carries one.
fn catalog_triples() -> Vec<(String, GenContactMetric, bool)> {
    let mut out = Vec::new();
    for (id, _) in catalog_list() {
        let entry = catalog_get(id).unwrap();
        let triple = match &entry.structure {
            RawStructure::Gacm { phi, e_plus, e_minus, metric } => GenContactMetric::new(
                GenAlmostContact::new(phi.clone(), e_plus.clone(), e_minus.clone()).unwrap(),
                GenMetric::new(metric.clone()).unwrap(),
            )
            .unwrap(),
            RawStructure::ClassicalAcm(acm) => cokahler_triple(acm).unwrap(),
            _ => continue,
        };
        out.push((id.to_string(), triple, entry.use_twist));
    }
    out
}

fn sphere_triple() -> GenContactMetric {
    catalog_triples()
        .into_iter()
        .find(|(id, _, _)| id == "su2_normal_contact_metric")
        .map(|(_, t, _)| t)
        .unwrap()
}

fn section(frame: &Arc<FrameContext>, coords: &[i64]) -> GenSection {
    let scalars: Vec<Scalar> = coords.iter().map(|&c| s(c)).collect();
    GenSection::from_coords(frame, &scalars).unwrap()
}

#[test]
fn criterion_01_threesphere_regression() {
    let started = Instant::now();
    let triple = sphere_triple();
    let frame = triple.frame();
    let base = triple.base();
    let i = Scalar::i();

    // E^(1,0) = span{X1 - iX2, σ1 - iσ2}
    let e10 = eigenspace(base.phi().matrix(), &i);
    let x1_minus_ix2: Vec<Scalar> = vec![s(1), -i.clone(), s(0), s(0), s(0), s(0)];
    let s1_minus_is2: Vec<Scalar> = vec![s(0), s(0), s(0), s(1), -i.clone(), s(0)];
    let expected_e10 =
        Subspace::from_spans(6, &[x1_minus_ix2.clone(), s1_minus_is2.clone()]).unwrap();
    assert_eq!(e10, expected_e10);

    // L+ = span{X3, ...}, L- = span{σ3, ...}
    let l_plus = gengeo::structures::build_l(base, gengeo::structures::LSign::Plus).unwrap();
    let l_minus = gengeo::structures::build_l(base, gengeo::structures::LSign::Minus).unwrap();
    let x3 = section(frame, &[0, 0, 1, 0, 0, 0]);
    let sigma3 = section(frame, &[0, 0, 0, 0, 0, 1]);
    let mut plus_spans = vec![x3.coords()];
    plus_spans.extend([x1_minus_ix2.clone(), s1_minus_is2.clone()]);
    assert_eq!(l_plus, Subspace::from_spans(6, &plus_spans).unwrap());
    let mut minus_spans = vec![sigma3.coords()];
    minus_spans.extend([x1_minus_ix2.clone(), s1_minus_is2.clone()]);
    assert_eq!(l_minus, Subspace::from_spans(6, &minus_spans).unwrap());

    // the two defining brackets
    let u = GenSection::from_coords(frame, &x1_minus_ix2).unwrap();
    let v = GenSection::from_coords(frame, &s1_minus_is2).unwrap();
    assert!(courant_bracket(&u, &v, false).unwrap().is_zero());
    assert!(courant_bracket(base.e_plus(), base.e_minus(), false).unwrap().is_zero());

    // strong and normal
    assert!(classify_contact(base, false).unwrap().is_strong());
    assert!(is_normal(base, false).unwrap());

    // companion: eigenspace listing and the exact witness
    let companion = compose_gphi(&triple).unwrap();
    let l_plus_companion =
        gengeo::structures::build_l(&companion, gengeo::structures::LSign::Plus).unwrap();
    let x1_minus_isigma2: Vec<Scalar> = vec![s(1), s(0), s(0), s(0), -i.clone(), s(0)];
    let x2_plus_isigma1: Vec<Scalar> = vec![s(0), s(1), s(0), i.clone(), s(0), s(0)];
    let mut companion_spans = vec![sigma3.coords()];
    companion_spans.extend([x1_minus_isigma2.clone(), x2_plus_isigma1.clone()]);
    assert_eq!(l_plus_companion, Subspace::from_spans(6, &companion_spans).unwrap());

    let class = classify_contact(&companion, false).unwrap();
    assert!(!class.is_strong());
    let witness = class.plus.witness.as_ref().expect("the plus side fails");
    let minus_x3 = x3.neg();
    assert_eq!(witness.bracket, minus_x3);
    assert_eq!(witness.bracket.to_string(), "-X3");
    assert!(!l_plus_companion.contains(&minus_x3.coords()).unwrap());

    finish(1, "three-sphere regression", started, Duration::from_secs(1));
}

#[test]
fn criterion_02_twisted_regression() {
    let started = Instant::now();
    let (_, triple, use_twist) = catalog_triples()
        .into_iter()
        .find(|(id, _, _)| id == "su2_twisted")
        .unwrap();
    assert!(use_twist);
    assert!(classify_contact(triple.base(), true).unwrap().is_strong());
    assert!(is_normal(triple.base(), true).unwrap());
    let companion = compose_gphi(&triple).unwrap();
    assert!(!classify_contact(&companion, true).unwrap().is_strong());
    assert!(!gengeo::structures::is_cokahler(&triple, true).unwrap());
    finish(2, "volume-twisted regression", started, Duration::from_secs(1));
}

fn gk_product(
    t1: &GenContactMetric,
    t2: &GenContactMetric,
) -> (bool, GcxClass, GcxClass, Matrix) {
    let pc = product_context(t1.frame(), t2.frame()).unwrap();
    let use_twist = pc.frame().has_twist();
    let j1 = product_j1(&pc, t1.base(), t2.base()).unwrap();
    let (j2, gens) = product_j2(&pc, t1, t2).unwrap();
    assert!(gengeo::constructions::eigenspace_matches_generators(&j2, &gens).unwrap());
    let report = is_generalized_kahler(&j1, &j2, use_twist).unwrap();
    let g = j1.compose(&j2).unwrap().neg();
    // the induced metric is the block product metric
    let block = product_metric(&pc, t1.metric(), t2.metric()).unwrap();
    assert_eq!(&g, block.operator());
    (report.verdict(), report.j1, report.j2, g.pairing_form())
}

#[test]
fn criterion_03_product_forward() {
    let started = Instant::now();
    let triples = catalog_triples();
    let circle = triples.iter().find(|(id, _, _)| id == "s1_trivial").map(|(_, t, _)| t).unwrap();
    let torus = triples
        .iter()
        .find(|(id, _, _)| id == "t3_cokahler_classical")
        .map(|(_, t, _)| t)
        .unwrap();

    for (a, b) in [(torus, circle), (circle, circle)] {
        let one = Instant::now();
        let (verdict, _, _, gram) = gk_product(a, b);
        assert!(verdict);
        assert!(is_positive_definite(&gram).unwrap());
        assert!(one.elapsed() <= Duration::from_secs(1), "per-product budget");
    }
    finish(3, "products of coKähler factors are Kähler", started, Duration::from_secs(2));
}

#[test]
fn criterion_04_product_reverse_witness() {
    let started = Instant::now();
    let triples = catalog_triples();
    let sphere = triples
        .iter()
        .find(|(id, _, _)| id == "su2_normal_contact_metric")
        .map(|(_, t, _)| t)
        .unwrap();
    let circle = triples.iter().find(|(id, _, _)| id == "s1_trivial").map(|(_, t, _)| t).unwrap();

    let (verdict, j1_class, j2_class, _) = gk_product(sphere, circle);
    assert!(!verdict);
    assert!(j1_class.is_integrable());
    let witness = match j2_class {
        GcxClass::Almost(w) => w,
        other => panic!("expected a non-integrable second structure, got {other:?}"),
    };
    // the embedded witness bracket is (-X3, 0)
    let pc = product_context(sphere.frame(), circle.frame()).unwrap();
    let (left, right) = pc.split_section(&witness.bracket).unwrap();
    assert_eq!(left, GenSection::basis_vector(sphere.frame(), 2).neg());
    assert!(right.is_zero());
    finish(4, "sphere times circle fails with witness", started, Duration::from_secs(1));
}

#[test]
fn criterion_05_product_biconditional() {
    let started = Instant::now();
    let factors = catalog_gacs();
    assert!(factors.len() >= 6);
    let mut checked = 0;
    for (id1, s1, twist1) in &factors {
        for (id2, s2, twist2) in &factors {
            let pc = product_context(s1.frame(), s2.frame()).unwrap();
            let j1 = product_j1(&pc, s1, s2).unwrap();
            let use_twist = pc.frame().has_twist();
            let integrable = check_gcx(&j1, use_twist).unwrap().is_integrable();

            let strong1 = classify_contact(s1, *twist1).unwrap().is_strong();
            let strong2 = classify_contact(s2, *twist2).unwrap().is_strong();
            let bracket1 = courant_bracket(s1.e_plus(), s1.e_minus(), *twist1).unwrap().is_zero();
            let bracket2 = courant_bracket(s2.e_plus(), s2.e_minus(), *twist2).unwrap().is_zero();
            assert_eq!(
                integrable,
                strong1 && strong2 && bracket1 && bracket2,
                "biconditional fails for {id1} x {id2}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 36);
    finish(5, "integrability biconditional over the catalog", started, Duration::from_secs(5));
}

/// Exact kernel of the exterior derivative on invariant two-forms.
fn closed_two_forms(frame: &Arc<FrameContext>) -> Vec<InvariantForm> {
    let n = frame.dim();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(vec![i, j]);
        }
    }
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                triples.push(vec![i, j, k]);
            }
        }
    }
    if pairs.is_empty() {
        return Vec::new();
    }
    let d_matrix = Matrix::from_fn(triples.len().max(1), pairs.len(), |r, c| {
        if triples.is_empty() {
            return Scalar::zero();
        }
        let basis = InvariantForm::new(frame, 2, &[(pairs[c].clone(), Scalar::one())]).unwrap();
        basis.exterior_derivative().coefficient(&triples[r])
    });
    kernel(&d_matrix)
        .basis()
        .iter()
        .map(|coeffs| {
            let terms: Vec<(Vec<usize>, Scalar)> =
                pairs.iter().cloned().zip(coeffs.iter().cloned()).collect();
            InvariantForm::new(frame, 2, &terms).unwrap()
        })
        .collect()
}

fn random_closed_two_form(
    frame: &Arc<FrameContext>,
    basis: &[InvariantForm],
    rng: &mut StdRng,
) -> InvariantForm {
    let mut b = InvariantForm::zero(frame, 2);
    for element in basis {
        let coeff = Scalar::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        b = b.add(&element.scale(&coeff)).unwrap();
    }
    b
}

#[test]
fn criterion_06_compatibility_consequences_and_bfield() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut transformed_count = 0;

    for (id, triple, use_twist) in catalog_triples() {
        assert!(lemma32_suite(&triple).passed(), "{id}: untransformed suite");
        let before_base = classify_contact(triple.base(), use_twist).unwrap();
        let before_normal = is_normal(triple.base(), use_twist).unwrap();
        let basis = closed_two_forms(triple.frame());
        if basis.is_empty() {
            continue;
        }
        for _ in 0..5 {
            let b = random_closed_two_form(triple.frame(), &basis, &mut rng);
            assert!(b.exterior_derivative().is_zero());
            let moved = triple.b_transform(&b).unwrap();

            // the transformed data satisfies every axiom again
            assert!(check_gac(moved.base().phi(), moved.base().e_plus(), moved.base().e_minus())
                .passed());
            assert!(check_metric(moved.metric().operator()).passed());
            assert!(check_compat(moved.base(), moved.metric()).ok);

            assert!(lemma32_suite(&moved).passed(), "{id}: transformed suite");

            // classification is unchanged by the transform
            let after = classify_contact(moved.base(), use_twist).unwrap();
            assert_eq!(after.plus.involutive, before_base.plus.involutive);
            assert_eq!(after.minus.involutive, before_base.minus.involutive);
            assert_eq!(is_normal(moved.base(), use_twist).unwrap(), before_normal);
            transformed_count += 1;
        }
    }
    assert!(transformed_count >= 20, "only {transformed_count} transformed variants");
    finish(
        6,
        "metric consequences on catalog and transformed triples",
        started,
        Duration::from_secs(20),
    );
}

#[test]
fn criterion_07_eigenbundle_criterion_matches_strong() {
    let started = Instant::now();
    for (id, gac, use_twist) in catalog_gacs() {
        let strong = classify_contact(&gac, use_twist).unwrap().is_strong();
        assert_eq!(lemma42_check(&gac, use_twist).unwrap(), strong, "{id} at twist {use_twist}");
        if !use_twist {
            // the untwisted reading must agree as well when a twist exists
            let strong_plain = classify_contact(&gac, false).unwrap().is_strong();
            assert_eq!(lemma42_check(&gac, false).unwrap(), strong_plain, "{id} untwisted");
        }
    }
    finish(7, "eigenbundle criterion equals strong", started, Duration::from_secs(5));
}

#[test]
fn criterion_08_flat_torus_triple_identities() {
    let started = Instant::now();
    let entry = catalog_get("t3_cokahler_classical").unwrap();
    let RawStructure::ClassicalAcm(acm) = &entry.structure else {
        panic!("expected classical data")
    };
    let triple = cokahler_triple(acm).unwrap();

    // component identity, checked block by block against the small tensors
    let g = acm.metric();
    let g_inv = g.inverse().unwrap();
    let phi = acm.phi();
    let xi = Matrix::from_fn(3, 1, |r, _| acm.xi()[r].clone());
    let eta = Matrix::from_fn(3, 1, |r, _| acm.eta()[r].clone());
    let vec_route = phi.mul(&g_inv).mul(&phi.transpose());
    let vec_expected = g_inv.sub(&xi.mul(&xi.transpose()));
    assert_eq!(vec_route, vec_expected);
    let form_route = phi.transpose().mul(g).mul(phi);
    let form_expected = g.sub(&eta.mul(&eta.transpose()));
    assert_eq!(form_route, form_expected);

    // the big-operator compatibility check agrees with the component route
    assert!(check_compat(triple.base(), triple.metric()).ok);

    // the companion operator is exactly the fundamental-form block matrix
    let companion = compose_gphi(&triple).unwrap();
    assert_eq!(companion.phi(), &phi_omega(acm).unwrap());

    assert!(gengeo::structures::is_cokahler(&triple, false).unwrap());
    finish(8, "flat torus component identities", started, Duration::from_secs(1));
}

#[test]
fn criterion_09_tangent_product_consistency() {
    let started = Instant::now();
    let circle = ClassicalAcm::new(
        &FrameContext::abelian(1, "s1").unwrap().shared(),
        Matrix::zeros(1, 1),
        vec![s(1)],
        vec![s(1)],
        Matrix::identity(1),
    )
    .unwrap();
    let sphere_frame = FrameContext::new(
        3,
        "su2",
        &[(0, 1, 2, s(-1)), (1, 2, 0, s(-1)), (0, 2, 1, s(1))],
    )
    .unwrap()
    .shared();
    let mut rot = Matrix::zeros(3, 3);
    rot.set(1, 0, s(1));
    rot.set(0, 1, s(-1));
    let sphere = ClassicalAcm::new(
        &sphere_frame,
        rot,
        vec![s(0), s(0), s(1)],
        vec![s(0), s(0), s(1)],
        Matrix::identity(3),
    )
    .unwrap();

    for (a1, a2) in [(&circle, &circle), (&sphere, &circle)] {
        let (pc, jm) = morimoto_j(a1, a2).unwrap();
        // the tangent complex structure squares to -Id
        assert_eq!(jm.mul(&jm), Matrix::identity(pc.frame().dim()).neg());

        let s1 = gac_from_acm(a1).unwrap();
        let s2 = gac_from_acm(a2).unwrap();
        // relabelling one factor aligns the generalized product with the
        // tangent block embedding, entry for entry
        let swapped =
            GenAlmostContact::new(s2.phi().clone(), s2.e_minus().clone(), s2.e_plus().clone())
                .unwrap();
        let j1 = product_j1(&pc, &s1, &swapped).unwrap();
        let embedded = embed_tangent_complex(pc.frame(), &jm).unwrap();
        assert_eq!(j1.matrix(), embedded.matrix());
    }
    finish(9, "tangent product consistency", started, Duration::from_secs(1));
}

fn random_section(frame: &Arc<FrameContext>, rng: &mut StdRng) -> GenSection {
    let coords: Vec<Scalar> = (0..2 * frame.dim())
        .map(|_| {
            Scalar::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2))
                + Scalar::i() * Scalar::from_ratio(rng.gen_range(-2..=2), 1)
        })
        .collect();
    GenSection::from_coords(frame, &coords).unwrap()
}

#[test]
fn criterion_10_calculus_oracles() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xca1c);

    let valid = [
        FrameContext::new(3, "su2", &[(0, 1, 2, s(-1)), (1, 2, 0, s(-1)), (0, 2, 1, s(1))])
            .unwrap()
            .shared(),
        FrameContext::new(3, "heisenberg", &[(0, 1, 2, s(1))]).unwrap().shared(),
        FrameContext::abelian(3, "t3").unwrap().shared(),
        FrameContext::abelian(1, "s1").unwrap().shared(),
    ];
    let invalid =
        FrameContext::new(3, "broken", &[(0, 1, 2, s(1)), (1, 2, 1, s(1))]).unwrap().shared();

    // d² = 0 on every generator iff the frame validates
    for frame in &valid {
        assert!(check_frame(frame).passed());
        for i in 0..frame.dim() {
            assert!(InvariantForm::basis_one_form(frame, i)
                .exterior_derivative()
                .exterior_derivative()
                .is_zero());
        }
    }
    assert!(!check_frame(&invalid).passed());
    let defect = (0..invalid.dim()).any(|i| {
        !InvariantForm::basis_one_form(&invalid, i)
            .exterior_derivative()
            .exterior_derivative()
            .is_zero()
    });
    assert!(defect);

    // bracket antisymmetry on 100 random sections per frame
    let twisted = FrameContext::new(
        3,
        "su2",
        &[(0, 1, 2, s(-1)), (1, 2, 0, s(-1)), (0, 2, 1, s(1))],
    )
    .unwrap()
    .with_twist(&[(0, 1, 2, s(1))])
    .unwrap()
    .shared();
    for frame in valid.iter().chain([&twisted]) {
        let use_twist = frame.has_twist();
        for _ in 0..100 {
            let u = random_section(frame, &mut rng);
            let v = random_section(frame, &mut rng);
            let uv = courant_bracket(&u, &v, use_twist).unwrap();
            let vu = courant_bracket(&v, &u, use_twist).unwrap();
            assert_eq!(uv, vu.neg());
            assert_eq!(
                uv.vec_part(),
                frame.lie_bracket(u.vec_part(), v.vec_part()).as_slice()
            );
        }
    }

    // the product bracket splits into factor brackets, twisted included
    let pairs = [
        (Arc::clone(&valid[0]), Arc::clone(&valid[3])),
        (Arc::clone(&twisted), Arc::clone(&twisted)),
    ];
    for (f1, f2) in &pairs {
        let pc = product_context(f1, f2).unwrap();
        let use_twist = pc.frame().has_twist();
        for _ in 0..100 {
            let u1 = random_section(f1, &mut rng);
            let u2 = random_section(f2, &mut rng);
            let v1 = random_section(f1, &mut rng);
            let v2 = random_section(f2, &mut rng);
            let u = pc.embed_section(0, &u1).unwrap().add(&pc.embed_section(1, &u2).unwrap()).unwrap();
            let v = pc.embed_section(0, &v1).unwrap().add(&pc.embed_section(1, &v2).unwrap()).unwrap();
            let big = courant_bracket(&u, &v, use_twist).unwrap();
            let (left, right) = pc.split_section(&big).unwrap();
            assert_eq!(left, courant_bracket(&u1, &v1, f1.has_twist()).unwrap());
            assert_eq!(right, courant_bracket(&u2, &v2, f2.has_twist()).unwrap());
        }
    }

    finish(10, "calculus oracles", started, Duration::from_secs(5));
}

#[test]
fn master_regression_every_catalog_entry() {
    // the catalog self-consistency gate: classifiers reproduce every
    // stored record exactly
    for (id, _) in catalog_list() {
        let entry = catalog_get(id).unwrap();
        assert!(check_frame(&entry.frame).passed(), "{id}: frame");
        let outcome = evaluate(&entry.structure, entry.use_twist).unwrap();
        assert!(outcome.axioms.iter().all(|i| i.pass), "{id}: axioms");
        assert_eq!(outcome.classification, Some(entry.expected), "{id}");
    }
    println!("catalog master regression: PASS");
}

#[test]
fn classification_reports_match_expected_kinds() {
    // witnesses surface for the negative verdicts
    let entry = catalog_get("su2_normal_contact_metric").unwrap();
    let outcome = evaluate(&entry.structure, false).unwrap();
    assert!(outcome.notes.iter().any(|n| n.contains("-X3")), "notes: {:?}", outcome.notes);
    match outcome.classification {
        Some(Classification::Contact(flags)) => {
            assert_eq!(flags.gphi_strong, Some(false));
            assert_eq!(flags.cokahler, Some(false));
        }
        other => panic!("unexpected classification {other:?}"),
    }
}
