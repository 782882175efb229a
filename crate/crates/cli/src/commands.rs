//! The four subcommands: verify, product, btransform and catalog.
//!
//! Exit codes: 0 when the structure is valid and a classification was
//! computed, 1 on an axiom failure, 2 on malformed input.

use crate::report::{AxiomItem, FlagSet, Format, Report};
use crate::schema::{
    bform_from_doc, doc_from_structure, frame_from_doc, structure_from_doc, BFormDocument,
    StructureDocument,
};
use crate::CliError;
use gengeo::catalog::{catalog_get, catalog_list, evaluate, RawStructure};
use gengeo::constructions::{cokahler_triple, product_j1, product_j2};
use gengeo::frame::{check_frame, product_context, FrameContext};
use gengeo::structures::{
    bfield_conjugate, GenAlmostContact, GenContactMetric, GenMetric,
};
use std::path::Path;
use std::sync::Arc;

fn read_document(path: &Path) -> Result<StructureDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))
}

fn resolve_twist(frame: &Arc<FrameContext>, twisted: Option<bool>) -> Result<bool, CliError> {
    match twisted {
        None => Ok(frame.has_twist()),
        Some(false) => Ok(false),
        Some(true) => {
            if frame.has_twist() {
                Ok(true)
            } else {
                Err(CliError::malformed(
                    "cannot force the twisted bracket: the frame carries no twist".to_string(),
                ))
            }
        }
    }
}

fn frame_axioms(frame: &Arc<FrameContext>) -> (bool, Vec<AxiomItem>) {
    let report = check_frame(frame);
    let ok = report.passed();
    (ok, report.items.into_iter().map(AxiomItem::from).collect())
}

fn build_report(
    id: &str,
    frame: &Arc<FrameContext>,
    raw: &RawStructure,
    use_twist: bool,
) -> Result<Report, CliError> {
    let (frame_ok, mut axioms) = frame_axioms(frame);
    if !frame_ok {
        return Ok(Report { id: id.to_string(), frame_ok, axioms, flags: None, witnesses: vec![] });
    }
    let outcome = evaluate(raw, use_twist).map_err(|e| CliError::malformed(e.to_string()))?;
    axioms.extend(outcome.axioms.into_iter().map(AxiomItem::from));
    Ok(Report {
        id: id.to_string(),
        frame_ok,
        axioms,
        flags: outcome.classification.as_ref().map(FlagSet::from_classification),
        witnesses: outcome.notes,
    })
}

pub fn cmd_verify(
    path: &Path,
    format: Format,
    twisted: Option<bool>,
) -> Result<u8, CliError> {
    let doc = read_document(path)?;
    let frame = frame_from_doc(&doc)?;
    let raw = structure_from_doc(&doc, &frame)?;
    let use_twist = resolve_twist(&frame, twisted)?;
    let report = build_report(&path.display().to_string(), &frame, &raw, use_twist)?;
    print!("{}", report.render(format));
    Ok(if report.failed() { 1 } else { 0 })
}

fn triple_from_raw(
    context: &str,
    raw: &RawStructure,
) -> Result<GenContactMetric, CliError> {
    match raw {
        RawStructure::Gacm { phi, e_plus, e_minus, metric } => {
            let base = GenAlmostContact::new(phi.clone(), e_plus.clone(), e_minus.clone())
                .map_err(|e| CliError::axioms(format!("{context}: {e}")))?;
            let metric = GenMetric::new(metric.clone())
                .map_err(|e| CliError::axioms(format!("{context}: {e}")))?;
            GenContactMetric::new(base, metric)
                .map_err(|e| CliError::axioms(format!("{context}: {e}")))
        }
        RawStructure::ClassicalAcm(acm) => cokahler_triple(acm)
            .map_err(|e| CliError::axioms(format!("{context}: {e}"))),
        _ => Err(CliError::malformed(format!(
            "{context}: the product command needs contact metric data (kind gacm or classical_acm)"
        ))),
    }
}

pub fn cmd_product(
    path_a: &Path,
    path_b: &Path,
    out: Option<&Path>,
    format: Format,
    twisted: Option<bool>,
) -> Result<u8, CliError> {
    let mut triples = Vec::new();
    for path in [path_a, path_b] {
        let doc = read_document(path)?;
        let frame = frame_from_doc(&doc)?;
        let frame_report = check_frame(&frame);
        if !frame_report.passed() {
            return Err(CliError::axioms(format!(
                "{}: frame is invalid: {}",
                path.display(),
                frame_report
                    .failures()
                    .map(|i| i.name.clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        let raw = structure_from_doc(&doc, &frame)?;
        triples.push(triple_from_raw(&path.display().to_string(), &raw)?);
    }
    let (t1, t2) = (&triples[0], &triples[1]);
    let pc = product_context(t1.frame(), t2.frame())
        .map_err(|e| CliError::malformed(e.to_string()))?;
    let use_twist = resolve_twist(pc.frame(), twisted)?;
    let j1 = product_j1(&pc, t1.base(), t2.base())
        .map_err(|e| CliError::malformed(e.to_string()))?;
    let (j2, _) = product_j2(&pc, t1, t2).map_err(|e| CliError::malformed(e.to_string()))?;

    let raw_pair = RawStructure::GcxPair { j1, j2 };
    let id = format!("{} x {}", path_a.display(), path_b.display());
    let report = build_report(&id, pc.frame(), &raw_pair, use_twist)?;
    print!("{}", report.render(format));

    if let Some(out) = out {
        let doc = doc_from_structure(pc.frame(), &raw_pair);
        let text = serde_json::to_string_pretty(&doc).expect("document serializes");
        std::fs::write(out, text)
            .map_err(|e| CliError::malformed(format!("{}: {e}", out.display())))?;
    }
    Ok(if report.failed() { 1 } else { 0 })
}

pub fn cmd_btransform(path: &Path, bform: &Path, out: &Path) -> Result<u8, CliError> {
    let doc = read_document(path)?;
    let frame = frame_from_doc(&doc)?;
    let raw = structure_from_doc(&doc, &frame)?;
    let btext = std::fs::read_to_string(bform)
        .map_err(|e| CliError::malformed(format!("{}: {e}", bform.display())))?;
    let bdoc: BFormDocument = serde_json::from_str(&btext)
        .map_err(|e| CliError::malformed(format!("{}: {e}", bform.display())))?;
    let b = bform_from_doc(&bdoc, &frame)?;
    let db = b.exterior_derivative();
    if !db.is_zero() {
        return Err(CliError::axioms(format!("two-form is not closed: dB = {db}")));
    }

    let axioms = |e: gengeo::Error| CliError::axioms(e.to_string());
    let transformed = match &raw {
        RawStructure::Gac { phi, e_plus, e_minus } => {
            let base = GenAlmostContact::new(phi.clone(), e_plus.clone(), e_minus.clone())
                .map_err(axioms)?;
            let moved = base.b_transform(&b).map_err(axioms)?;
            RawStructure::Gac {
                phi: moved.phi().clone(),
                e_plus: moved.e_plus().clone(),
                e_minus: moved.e_minus().clone(),
            }
        }
        RawStructure::Gacm { .. } | RawStructure::ClassicalAcm(_) => {
            // classical data is lifted first: its transform is no longer
            // block diagonal, so the output is a full contact metric
            // document
            let triple = triple_from_raw(&path.display().to_string(), &raw)?;
            let moved = triple.b_transform(&b).map_err(axioms)?;
            RawStructure::Gacm {
                phi: moved.base().phi().clone(),
                e_plus: moved.base().e_plus().clone(),
                e_minus: moved.base().e_minus().clone(),
                metric: moved.metric().operator().clone(),
            }
        }
        RawStructure::Gcx { j } => {
            RawStructure::Gcx { j: bfield_conjugate(j, &b).map_err(axioms)? }
        }
        RawStructure::GcxPair { j1, j2 } => RawStructure::GcxPair {
            j1: bfield_conjugate(j1, &b).map_err(axioms)?,
            j2: bfield_conjugate(j2, &b).map_err(axioms)?,
        },
    };
    let out_doc = doc_from_structure(&frame, &transformed);
    let text = serde_json::to_string_pretty(&out_doc).expect("document serializes");
    std::fs::write(out, text)
        .map_err(|e| CliError::malformed(format!("{}: {e}", out.display())))?;
    println!("wrote {}", out.display());
    Ok(0)
}

pub fn cmd_catalog_list() -> Result<u8, CliError> {
    for (id, description) in catalog_list() {
        println!("{id}: {description}");
    }
    Ok(0)
}

pub fn cmd_catalog_emit(id: &str, path: &Path) -> Result<u8, CliError> {
    let entry = catalog_get(id).map_err(|e| CliError::malformed(e.to_string()))?;
    let doc = doc_from_structure(&entry.frame, &entry.structure);
    let text = serde_json::to_string_pretty(&doc).expect("document serializes");
    std::fs::write(path, text)
        .map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(0)
}
