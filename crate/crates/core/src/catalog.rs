//! Built-in named instances and the classification routine shared by the
//! regression suite and the command-line verifier.
//!
//! Every entry stores its frame, its raw structure data and the full
//! expected classification record; running the classifiers must reproduce
//! that record exactly.

use crate::constructions::{
    check_acm, cokahler_triple, fundamental_form, gac_from_contact,
    gcx_from_complex, gcx_from_symplectic, nijenhuis_normal, product_gk_gcok, product_j1,
    product_j2, ClassicalAcm, ClassicalComplex, ClassicalSymplectic,
};
use crate::exactalg::{Matrix, Scalar};
use crate::frame::{product_context, FrameContext, GenSection, InvariantForm};
use crate::structures::{
    check_compat, check_gac, check_gcx, check_metric, classify_contact, compose_gphi,
    is_generalized_kahler, BigOperator, GcxClass, GenAlmostContact, GenContactMetric, GenMetric,
};
use crate::{CheckItem, Error};
use std::sync::Arc;

/// Structure data as it arrives from a file or a catalog entry, before any
/// axiom has been verified.
#[derive(Clone, Debug)]
pub enum RawStructure {
    Gac { phi: BigOperator, e_plus: GenSection, e_minus: GenSection },
    Gacm { phi: BigOperator, e_plus: GenSection, e_minus: GenSection, metric: BigOperator },
    Gcx { j: BigOperator },
    GcxPair { j1: BigOperator, j2: BigOperator },
    ClassicalAcm(ClassicalAcm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactFlags {
    pub contact_plus: bool,
    pub contact_minus: bool,
    pub strong: bool,
    pub normal: bool,
    pub metric_ok: Option<bool>,
    pub compatible: Option<bool>,
    pub gphi_strong: Option<bool>,
    pub cokahler: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexFlags {
    pub almost: bool,
    pub integrable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexPairFlags {
    pub j1_integrable: bool,
    pub j2_integrable: bool,
    pub commuting: bool,
    pub metric_positive: bool,
    pub generalized_kahler: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalFlags {
    pub eta_closed: bool,
    pub omega_closed: bool,
    pub normal_classical: bool,
    pub contact: ContactFlags,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Contact(ContactFlags),
    Complex(ComplexFlags),
    ComplexPair(ComplexPairFlags),
    Classical(Box<ClassicalFlags>),
}

/// Axiom items, the classification when the axioms hold, and witness lines
/// for display.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub axioms: Vec<CheckItem>,
    pub classification: Option<Classification>,
    pub notes: Vec<String>,
}

fn contact_outcome(
    base: &GenAlmostContact,
    metric: Option<&GenMetric>,
    use_twist: bool,
    notes: &mut Vec<String>,
) -> Result<ContactFlags, Error> {
    let class = classify_contact(base, use_twist)?;
    for (side, result) in [("L+", &class.plus), ("L-", &class.minus)] {
        if let Some(w) = &result.witness {
            notes.push(format!(
                "{side} is not closed: [[{}, {}]] = {} escapes the span",
                w.left, w.right, w.bracket
            ));
        }
    }
    let bracket = crate::frame::courant_bracket(base.e_plus(), base.e_minus(), use_twist)?;
    if !bracket.is_zero() {
        notes.push(format!("[[E+, E-]] = {bracket}"));
    }
    let normal = class.is_strong() && bracket.is_zero();

    let mut flags = ContactFlags {
        contact_plus: class.plus.involutive,
        contact_minus: class.minus.involutive,
        strong: class.is_strong(),
        normal,
        metric_ok: None,
        compatible: None,
        gphi_strong: None,
        cokahler: None,
    };

    if let Some(metric) = metric {
        flags.metric_ok = Some(true);
        flags.compatible = Some(true);
        let triple = GenContactMetric::new(base.clone(), metric.clone())?;
        let companion = compose_gphi(&triple)?;
        let companion_class = classify_contact(&companion, use_twist)?;
        for (side, result) in [("GΦ L+", &companion_class.plus), ("GΦ L-", &companion_class.minus)]
        {
            if let Some(w) = &result.witness {
                notes.push(format!(
                    "{side} is not closed: [[{}, {}]] = {} escapes the span",
                    w.left, w.right, w.bracket
                ));
            }
        }
        let gphi_strong = companion_class.is_strong();
        flags.gphi_strong = Some(gphi_strong);
        let companion_bracket =
            crate::frame::courant_bracket(companion.e_plus(), companion.e_minus(), use_twist)?;
        flags.cokahler = Some(normal && gphi_strong && companion_bracket.is_zero());
    }

    Ok(flags)
}

/// Run every applicable axiom check and classifier on raw structure data.
pub fn evaluate(raw: &RawStructure, use_twist: bool) -> Result<Outcome, Error> {
    let mut notes = Vec::new();
    match raw {
        RawStructure::Gac { phi, e_plus, e_minus } => {
            let report = check_gac(phi, e_plus, e_minus);
            if !report.passed() {
                return Ok(Outcome { axioms: report.items, classification: None, notes });
            }
            let base = GenAlmostContact::new(phi.clone(), e_plus.clone(), e_minus.clone())?;
            let flags = contact_outcome(&base, None, use_twist, &mut notes)?;
            Ok(Outcome {
                axioms: report.items,
                classification: Some(Classification::Contact(flags)),
                notes,
            })
        }
        RawStructure::Gacm { phi, e_plus, e_minus, metric } => {
            let mut axioms = check_gac(phi, e_plus, e_minus).items;
            let metric_report = check_metric(metric);
            let metric_ok = metric_report.passed();
            axioms.extend(metric_report.items);
            let gac_ok = axioms.iter().all(|i| i.pass);
            if !gac_ok {
                return Ok(Outcome { axioms, classification: None, notes });
            }
            let base = GenAlmostContact::new(phi.clone(), e_plus.clone(), e_minus.clone())?;
            let metric = GenMetric::new(metric.clone())?;
            let compat = check_compat(&base, &metric);
            if compat.ok {
                axioms.push(CheckItem::pass("metric_compatibility"));
            } else {
                let (basis, left, right) = compat.witness.expect("failing compat has a witness");
                axioms.push(CheckItem::fail(
                    "metric_compatibility",
                    format!("on {basis}: -ΦGΦ gives {left}, expected {right}"),
                ));
                return Ok(Outcome { axioms, classification: None, notes });
            }
            let _ = metric_ok;
            let flags = contact_outcome(&base, Some(&metric), use_twist, &mut notes)?;
            Ok(Outcome {
                axioms,
                classification: Some(Classification::Contact(flags)),
                notes,
            })
        }
        RawStructure::Gcx { j } => match check_gcx(j, use_twist)? {
            GcxClass::Invalid(report) => {
                Ok(Outcome { axioms: report.items, classification: None, notes })
            }
            GcxClass::Almost(witness) => {
                notes.push(format!(
                    "eigenbundle is not closed: [[{}, {}]] = {}",
                    witness.left, witness.right, witness.bracket
                ));
                Ok(Outcome {
                    axioms: vec![CheckItem::pass("skew_adjoint"), CheckItem::pass("squares_to_minus_id")],
                    classification: Some(Classification::Complex(ComplexFlags {
                        almost: true,
                        integrable: false,
                    })),
                    notes,
                })
            }
            GcxClass::Integrable => Ok(Outcome {
                axioms: vec![CheckItem::pass("skew_adjoint"), CheckItem::pass("squares_to_minus_id")],
                classification: Some(Classification::Complex(ComplexFlags {
                    almost: true,
                    integrable: true,
                })),
                notes,
            }),
        },
        RawStructure::GcxPair { j1, j2 } => {
            let report = is_generalized_kahler(j1, j2, use_twist)?;
            let mut axioms = Vec::new();
            for (name, class) in [("j1_algebra", &report.j1), ("j2_algebra", &report.j2)] {
                match class {
                    GcxClass::Invalid(r) => {
                        for item in &r.items {
                            axioms.push(CheckItem {
                                name: format!("{name}:{}", item.name),
                                pass: item.pass,
                                witness: item.witness.clone(),
                            });
                        }
                    }
                    _ => axioms.push(CheckItem::pass(name)),
                }
            }
            if !axioms.iter().all(|i| i.pass) {
                return Ok(Outcome { axioms, classification: None, notes });
            }
            for (name, class) in [("j1", &report.j1), ("j2", &report.j2)] {
                if let GcxClass::Almost(w) = class {
                    notes.push(format!(
                        "{name} eigenbundle is not closed: [[{}, {}]] = {}",
                        w.left, w.right, w.bracket
                    ));
                }
            }
            let flags = ComplexPairFlags {
                j1_integrable: report.j1.is_integrable(),
                j2_integrable: report.j2.is_integrable(),
                commuting: report.commuting,
                metric_positive: report.metric.passed(),
                generalized_kahler: report.verdict(),
            };
            Ok(Outcome {
                axioms,
                classification: Some(Classification::ComplexPair(flags)),
                notes,
            })
        }
        RawStructure::ClassicalAcm(acm) => {
            let report = check_acm(acm);
            if !report.passed() {
                return Ok(Outcome { axioms: report.items, classification: None, notes });
            }
            let axioms = report.items;
            let eta_closed = acm.eta_form().exterior_derivative().is_zero();
            let omega_closed = fundamental_form(acm)?.exterior_derivative().is_zero();
            let (normal_classical, witness) = nijenhuis_normal(acm)?;
            if let Some(w) = witness {
                let torsion = GenSection::new(acm.frame(), w.torsion.clone(), vec![Scalar::zero(); acm.frame().dim()])?;
                let expected = GenSection::new(acm.frame(), w.expected.clone(), vec![Scalar::zero(); acm.frame().dim()])?;
                notes.push(format!(
                    "torsion on (X{}, X{}): {} but the normality correction is {}",
                    w.i + 1,
                    w.j + 1,
                    torsion,
                    expected
                ));
            }
            let triple = cokahler_triple(acm)?;
            let contact =
                contact_outcome(triple.base(), Some(triple.metric()), use_twist, &mut notes)?;
            Ok(Outcome {
                axioms,
                classification: Some(Classification::Classical(Box::new(ClassicalFlags {
                    eta_closed,
                    omega_closed,
                    normal_classical,
                    contact,
                }))),
                notes,
            })
        }
    }
}

/// One named instance: frame, structure data and the expected record.
#[derive(Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub frame: Arc<FrameContext>,
    pub use_twist: bool,
    pub structure: RawStructure,
    pub expected: Classification,
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

pub(crate) fn su2_frame() -> Arc<FrameContext> {
    FrameContext::new(3, "su2", &[(0, 1, 2, s(-1)), (1, 2, 0, s(-1)), (0, 2, 1, s(1))])
        .expect("valid frame")
        .shared()
}

fn su2_twisted_frame() -> Arc<FrameContext> {
    FrameContext::new(3, "su2", &[(0, 1, 2, s(-1)), (1, 2, 0, s(-1)), (0, 2, 1, s(1))])
        .expect("valid frame")
        .with_twist(&[(0, 1, 2, s(1))])
        .expect("valid twist")
        .shared()
}

fn rotation_phi(n: usize, a: usize, b: usize) -> Matrix {
    // X_a ↦ X_b, X_b ↦ -X_a, everything else to zero
    let mut phi = Matrix::zeros(n, n);
    phi.set(b, a, s(1));
    phi.set(a, b, s(-1));
    phi
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|t| if t == i { s(1) } else { s(0) }).collect()
}

fn su2_acm(frame: &Arc<FrameContext>) -> ClassicalAcm {
    ClassicalAcm::new(frame, rotation_phi(3, 0, 1), unit(3, 2), unit(3, 2), Matrix::identity(3))
        .expect("valid data")
}

fn t3_acm() -> ClassicalAcm {
    let frame = FrameContext::abelian(3, "t3").expect("valid frame").shared();
    ClassicalAcm::new(&frame, rotation_phi(3, 0, 1), unit(3, 2), unit(3, 2), Matrix::identity(3))
        .expect("valid data")
}

fn heisenberg_acm() -> ClassicalAcm {
    let frame = FrameContext::new(3, "heisenberg", &[(0, 1, 2, s(1))])
        .expect("valid frame")
        .shared();
    ClassicalAcm::new(&frame, rotation_phi(3, 1, 2), unit(3, 0), unit(3, 0), Matrix::identity(3))
        .expect("valid data")
}

fn s1_acm() -> ClassicalAcm {
    let frame = FrameContext::abelian(1, "s1").expect("valid frame").shared();
    ClassicalAcm::new(&frame, Matrix::zeros(1, 1), vec![s(1)], vec![s(1)], Matrix::identity(1))
        .expect("valid data")
}

fn t2_kahler_pair() -> (Arc<FrameContext>, BigOperator, BigOperator) {
    let frame = FrameContext::abelian(2, "t2").expect("valid frame").shared();
    let mut j = Matrix::zeros(2, 2);
    j.set(1, 0, s(-1));
    j.set(0, 1, s(1));
    let jj = gcx_from_complex(&ClassicalComplex { frame: Arc::clone(&frame), j })
        .expect("complex structure");
    let omega = InvariantForm::new(&frame, 2, &[(vec![0, 1], s(1))]).expect("two-form");
    let jw = gcx_from_symplectic(&ClassicalSymplectic { frame: Arc::clone(&frame), omega })
        .expect("symplectic structure");
    (frame, jj, jw)
}

fn gacm_raw(t: &GenContactMetric) -> RawStructure {
    RawStructure::Gacm {
        phi: t.base().phi().clone(),
        e_plus: t.base().e_plus().clone(),
        e_minus: t.base().e_minus().clone(),
        metric: t.metric().operator().clone(),
    }
}

fn all_true_contact() -> ContactFlags {
    ContactFlags {
        contact_plus: true,
        contact_minus: true,
        strong: true,
        normal: true,
        metric_ok: Some(true),
        compatible: Some(true),
        gphi_strong: Some(true),
        cokahler: Some(true),
    }
}

fn su2_contact_flags() -> ContactFlags {
    ContactFlags {
        contact_plus: true,
        contact_minus: true,
        strong: true,
        normal: true,
        metric_ok: Some(true),
        compatible: Some(true),
        gphi_strong: Some(false),
        cokahler: Some(false),
    }
}

fn entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();

    {
        let triple = cokahler_triple(&s1_acm()).expect("circle triple");
        out.push(CatalogEntry {
            id: "s1_trivial",
            description: "trivial structure on the circle: zero endomorphism, unit section pair",
            frame: Arc::clone(triple.frame()),
            use_twist: false,
            structure: gacm_raw(&triple),
            expected: Classification::Contact(all_true_contact()),
        });
    }

    {
        let (frame, jj, jw) = t2_kahler_pair();
        out.push(CatalogEntry {
            id: "t2_kahler",
            description: "flat two-torus with its complex/symplectic pair",
            frame,
            use_twist: false,
            structure: RawStructure::GcxPair { j1: jj, j2: jw },
            expected: Classification::ComplexPair(ComplexPairFlags {
                j1_integrable: true,
                j2_integrable: true,
                commuting: true,
                metric_positive: true,
                generalized_kahler: true,
            }),
        });
    }

    {
        let acm = t3_acm();
        out.push(CatalogEntry {
            id: "t3_cokahler_classical",
            description: "flat three-torus rotation: closed η and Ω, normal",
            frame: Arc::clone(acm.frame()),
            use_twist: false,
            structure: RawStructure::ClassicalAcm(acm),
            expected: Classification::Classical(Box::new(ClassicalFlags {
                eta_closed: true,
                omega_closed: true,
                normal_classical: true,
                contact: all_true_contact(),
            })),
        });
    }

    {
        let frame = su2_frame();
        let triple = cokahler_triple(&su2_acm(&frame)).expect("sphere triple");
        out.push(CatalogEntry {
            id: "su2_normal_contact_metric",
            description: "bi-invariant structure on the three-sphere group: normal, companion not strong",
            frame,
            use_twist: false,
            structure: gacm_raw(&triple),
            expected: Classification::Contact(su2_contact_flags()),
        });
    }

    {
        let frame = su2_twisted_frame();
        let triple = cokahler_triple(&su2_acm(&frame)).expect("sphere triple");
        out.push(CatalogEntry {
            id: "su2_twisted",
            description: "the three-sphere structure against the volume-twisted bracket",
            frame,
            use_twist: true,
            structure: gacm_raw(&triple),
            expected: Classification::Contact(su2_contact_flags()),
        });
    }

    {
        let frame = su2_frame();
        let gac = gac_from_contact(&frame, &unit(3, 2), &unit(3, 2)).expect("contact lift");
        out.push(CatalogEntry {
            id: "su2_contact_nonstrong",
            description: "contact lift on the three-sphere group: one-sided closure only",
            frame,
            use_twist: false,
            structure: RawStructure::Gac {
                phi: gac.phi().clone(),
                e_plus: gac.e_plus().clone(),
                e_minus: gac.e_minus().clone(),
            },
            expected: Classification::Contact(ContactFlags {
                contact_plus: false,
                contact_minus: true,
                strong: false,
                normal: false,
                metric_ok: None,
                compatible: None,
                gphi_strong: None,
                cokahler: None,
            }),
        });
    }

    {
        let acm = heisenberg_acm();
        out.push(CatalogEntry {
            id: "heisenberg_nonnormal",
            description: "transverse rotation on the nilpotent frame: closed η and Ω but not normal",
            frame: Arc::clone(acm.frame()),
            use_twist: false,
            structure: RawStructure::ClassicalAcm(acm),
            expected: Classification::Classical(Box::new(ClassicalFlags {
                eta_closed: true,
                omega_closed: true,
                normal_classical: false,
                contact: ContactFlags {
                    contact_plus: false,
                    contact_minus: true,
                    strong: false,
                    normal: false,
                    metric_ok: Some(true),
                    compatible: Some(true),
                    gphi_strong: Some(true),
                    cokahler: Some(false),
                },
            })),
        });
    }

    {
        let circle = cokahler_triple(&s1_acm()).expect("circle triple");
        let pc = product_context(circle.frame(), circle.frame()).expect("product frame");
        let j1 = product_j1(&pc, circle.base(), circle.base()).expect("product structure");
        let (j2, _) = product_j2(&pc, &circle, &circle).expect("product structure");
        out.push(CatalogEntry {
            id: "product_t1xt1",
            description: "product of two trivial circles: the flat torus pair",
            frame: Arc::clone(pc.frame()),
            use_twist: false,
            structure: RawStructure::GcxPair { j1, j2 },
            expected: Classification::ComplexPair(ComplexPairFlags {
                j1_integrable: true,
                j2_integrable: true,
                commuting: true,
                metric_positive: true,
                generalized_kahler: true,
            }),
        });
    }

    {
        let frame = su2_frame();
        let sphere = cokahler_triple(&su2_acm(&frame)).expect("sphere triple");
        let circle = cokahler_triple(&s1_acm()).expect("circle triple");
        let pc = product_context(sphere.frame(), circle.frame()).expect("product frame");
        let j1 = product_j1(&pc, sphere.base(), circle.base()).expect("product structure");
        let (j2, _) = product_j2(&pc, &sphere, &circle).expect("product structure");
        out.push(CatalogEntry {
            id: "product_su2xs1",
            description: "three-sphere times circle: first structure closes, second does not",
            frame: Arc::clone(pc.frame()),
            use_twist: false,
            structure: RawStructure::GcxPair { j1, j2 },
            expected: Classification::ComplexPair(ComplexPairFlags {
                j1_integrable: true,
                j2_integrable: false,
                commuting: true,
                metric_positive: true,
                generalized_kahler: false,
            }),
        });
    }

    {
        let (_, jj, jw) = t2_kahler_pair();
        let circle = cokahler_triple(&s1_acm()).expect("circle triple");
        let (pc, triple) =
            product_gk_gcok(&jj, &jw, false, &circle, false).expect("product triple");
        out.push(CatalogEntry {
            id: "product_gk_gcok_t2xs1",
            description: "flat torus pair times the trivial circle: a three-torus triple",
            frame: Arc::clone(pc.frame()),
            use_twist: false,
            structure: gacm_raw(&triple),
            expected: Classification::Contact(all_true_contact()),
        });
    }

    out
}

/// Stable listing of `(id, description)` pairs.
pub fn catalog_list() -> Vec<(&'static str, &'static str)> {
    entries().iter().map(|e| (e.id, e.description)).collect()
}

/// Fetch one entry by id.
pub fn catalog_get(id: &str) -> Result<CatalogEntry, Error> {
    entries()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_is_stable_and_complete() {
        let ids: Vec<&str> = catalog_list().iter().map(|(id, _)| *id).collect();
        assert!(ids.len() >= 10);
        for required in [
            "s1_trivial",
            "t2_kahler",
            "t3_cokahler_classical",
            "su2_normal_contact_metric",
            "su2_twisted",
            "su2_contact_nonstrong",
            "heisenberg_nonnormal",
            "product_t1xt1",
            "product_su2xs1",
            "product_gk_gcok_t2xs1",
        ] {
            assert!(ids.contains(&required), "missing {required}");
        }
        assert_eq!(ids, catalog_list().iter().map(|(id, _)| *id).collect::<Vec<_>>());
    }

    #[test]
    fn unknown_ids_are_reported() {
        assert_eq!(
            catalog_get("nope").unwrap_err(),
            Error::UnknownId("nope".to_string())
        );
    }

    #[test]
    fn every_entry_reproduces_its_expected_record() {
        for entry in entries() {
            let outcome = evaluate(&entry.structure, entry.use_twist)
                .unwrap_or_else(|e| panic!("{} failed to evaluate: {e}", entry.id));
            assert!(
                outcome.axioms.iter().all(|i| i.pass),
                "{}: axiom failures {:?}",
                entry.id,
                outcome.axioms
            );
            assert_eq!(
                outcome.classification.as_ref(),
                Some(&entry.expected),
                "{} classification mismatch",
                entry.id
            );
        }
    }

    #[test]
    fn expected_records_match_the_headline_claims() {
        let sphere = catalog_get("su2_normal_contact_metric").unwrap();
        match sphere.expected {
            Classification::Contact(flags) => {
                assert!(flags.normal);
                assert_eq!(flags.cokahler, Some(false));
            }
            _ => panic!("wrong kind"),
        }
        let torus = catalog_get("t3_cokahler_classical").unwrap();
        match torus.expected {
            Classification::Classical(flags) => {
                assert_eq!(flags.contact.cokahler, Some(true));
            }
            _ => panic!("wrong kind"),
        }
        let twisted = catalog_get("su2_twisted").unwrap();
        assert!(twisted.use_twist);
        assert!(twisted.frame.has_twist());
        match twisted.expected {
            Classification::Contact(flags) => {
                assert!(flags.strong);
                assert_eq!(flags.gphi_strong, Some(false));
            }
            _ => panic!("wrong kind"),
        }
    }
}
