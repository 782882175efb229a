//! The on-disk document format.  Scalars travel as strings in the exact
//! text form, indices are 1-based to match the usual `σ^1, X_1` notation,
//! and the structure payload is tagged by `kind`.

use gengeo::catalog::RawStructure;
use gengeo::constructions::ClassicalAcm;
use gengeo::exactalg::{Matrix, Scalar};
use gengeo::frame::{FrameContext, GenSection};
use gengeo::structures::BigOperator;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::CliError;

pub type Grid = Vec<Vec<String>>;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct BracketTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FrameDoc {
    pub dim: usize,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub brackets: Vec<BracketTerm>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SectionDoc {
    pub vec: Vec<String>,
    pub form: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureKindDoc {
    Gac { phi: Grid, e_plus: SectionDoc, e_minus: SectionDoc },
    Gacm { phi: Grid, e_plus: SectionDoc, e_minus: SectionDoc, metric: Grid },
    Gcx { j: Grid },
    GcxPair { j1: Grid, j2: Grid },
    ClassicalAcm { phi: Grid, xi: Vec<String>, eta: Vec<String>, g: Grid },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct StructureDocument {
    pub frame: FrameDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<BracketTerm>>,
    pub structure: StructureKindDoc,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TwoFormTerm {
    pub i: usize,
    pub j: usize,
    pub c: String,
}

/// A standalone two-form, used by the transform command.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct BFormDocument {
    #[serde(default)]
    pub terms: Vec<TwoFormTerm>,
}

fn parse_scalar(context: &str, text: &str) -> Result<Scalar, CliError> {
    text.parse::<Scalar>().map_err(|e| CliError::malformed(format!("{context}: {e}")))
}

fn parse_grid(context: &str, grid: &Grid, rows: usize, cols: usize) -> Result<Matrix, CliError> {
    if grid.len() != rows {
        return Err(CliError::malformed(format!(
            "{context}: expected {rows} rows, found {}",
            grid.len()
        )));
    }
    let mut out = Matrix::zeros(rows, cols);
    for (r, row) in grid.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::malformed(format!(
                "{context}[{r}]: expected {cols} entries, found {}",
                row.len()
            )));
        }
        for (c, text) in row.iter().enumerate() {
            out.set(r, c, parse_scalar(&format!("{context}[{r}][{c}]"), text)?);
        }
    }
    Ok(out)
}

fn parse_vector(context: &str, items: &[String], len: usize) -> Result<Vec<Scalar>, CliError> {
    if items.len() != len {
        return Err(CliError::malformed(format!(
            "{context}: expected {len} entries, found {}",
            items.len()
        )));
    }
    items
        .iter()
        .enumerate()
        .map(|(k, text)| parse_scalar(&format!("{context}[{k}]"), text))
        .collect()
}

fn parse_section(
    context: &str,
    frame: &Arc<FrameContext>,
    doc: &SectionDoc,
) -> Result<GenSection, CliError> {
    let n = frame.dim();
    let vec = parse_vector(&format!("{context}.vec"), &doc.vec, n)?;
    let form = parse_vector(&format!("{context}.form"), &doc.form, n)?;
    GenSection::new(frame, vec, form)
        .map_err(|e| CliError::malformed(format!("{context}: {e}")))
}

fn one_based(context: &str, value: usize, dim: usize) -> Result<usize, CliError> {
    if value == 0 || value > dim {
        return Err(CliError::malformed(format!(
            "{context}: index {value} out of range 1..={dim}"
        )));
    }
    Ok(value - 1)
}

/// Build the frame, including the optional twist, from a parsed document.
pub fn frame_from_doc(doc: &StructureDocument) -> Result<Arc<FrameContext>, CliError> {
    let dim = doc.frame.dim;
    let mut brackets = Vec::new();
    for (t, term) in doc.frame.brackets.iter().enumerate() {
        let ctx = format!("frame.brackets[{t}]");
        let i = one_based(&ctx, term.i, dim)?;
        let j = one_based(&ctx, term.j, dim)?;
        let k = one_based(&ctx, term.k, dim)?;
        brackets.push((i, j, k, parse_scalar(&format!("{ctx}.c"), &term.c)?));
    }
    let name = if doc.frame.name.is_empty() { "frame" } else { &doc.frame.name };
    let mut frame = FrameContext::new(dim, name, &brackets)
        .map_err(|e| CliError::malformed(format!("frame: {e}")))?;
    if let Some(h) = &doc.h {
        let mut terms = Vec::new();
        for (t, term) in h.iter().enumerate() {
            let ctx = format!("h[{t}]");
            let i = one_based(&ctx, term.i, dim)?;
            let j = one_based(&ctx, term.j, dim)?;
            let k = one_based(&ctx, term.k, dim)?;
            terms.push((i, j, k, parse_scalar(&format!("{ctx}.c"), &term.c)?));
        }
        frame = frame
            .with_twist(&terms)
            .map_err(|e| CliError::malformed(format!("h: {e}")))?;
    }
    Ok(frame.shared())
}

/// Parse the structure payload against its frame.
pub fn structure_from_doc(
    doc: &StructureDocument,
    frame: &Arc<FrameContext>,
) -> Result<RawStructure, CliError> {
    let n = frame.dim();
    let big = 2 * n;
    let operator = |context: &str, grid: &Grid| -> Result<BigOperator, CliError> {
        let mat = parse_grid(context, grid, big, big)?;
        BigOperator::from_matrix(frame, mat)
            .map_err(|e| CliError::malformed(format!("{context}: {e}")))
    };
    match &doc.structure {
        StructureKindDoc::Gac { phi, e_plus, e_minus } => Ok(RawStructure::Gac {
            phi: operator("structure.phi", phi)?,
            e_plus: parse_section("structure.e_plus", frame, e_plus)?,
            e_minus: parse_section("structure.e_minus", frame, e_minus)?,
        }),
        StructureKindDoc::Gacm { phi, e_plus, e_minus, metric } => Ok(RawStructure::Gacm {
            phi: operator("structure.phi", phi)?,
            e_plus: parse_section("structure.e_plus", frame, e_plus)?,
            e_minus: parse_section("structure.e_minus", frame, e_minus)?,
            metric: operator("structure.metric", metric)?,
        }),
        StructureKindDoc::Gcx { j } => Ok(RawStructure::Gcx { j: operator("structure.j", j)? }),
        StructureKindDoc::GcxPair { j1, j2 } => Ok(RawStructure::GcxPair {
            j1: operator("structure.j1", j1)?,
            j2: operator("structure.j2", j2)?,
        }),
        StructureKindDoc::ClassicalAcm { phi, xi, eta, g } => {
            let phi = parse_grid("structure.phi", phi, n, n)?;
            let xi = parse_vector("structure.xi", xi, n)?;
            let eta = parse_vector("structure.eta", eta, n)?;
            let g = parse_grid("structure.g", g, n, n)?;
            let acm = ClassicalAcm::new(frame, phi, xi, eta, g)
                .map_err(|e| CliError::malformed(format!("structure: {e}")))?;
            Ok(RawStructure::ClassicalAcm(acm))
        }
    }
}

fn grid_of(mat: &Matrix) -> Grid {
    (0..mat.rows())
        .map(|r| mat.row(r).iter().map(Scalar::to_string).collect())
        .collect()
}

fn section_doc(section: &GenSection) -> SectionDoc {
    SectionDoc {
        vec: section.vec_part().iter().map(Scalar::to_string).collect(),
        form: section.form_part().iter().map(Scalar::to_string).collect(),
    }
}

/// Serialize a frame plus structure back into a document.
pub fn doc_from_structure(frame: &Arc<FrameContext>, raw: &RawStructure) -> StructureDocument {
    let brackets = frame
        .bracket_terms()
        .into_iter()
        .map(|(i, j, k, c)| BracketTerm { i: i + 1, j: j + 1, k: k + 1, c: c.to_string() })
        .collect();
    let h = frame.twist_terms().map(|terms| {
        terms
            .into_iter()
            .map(|(i, j, k, c)| BracketTerm { i: i + 1, j: j + 1, k: k + 1, c: c.to_string() })
            .collect()
    });
    let structure = match raw {
        RawStructure::Gac { phi, e_plus, e_minus } => StructureKindDoc::Gac {
            phi: grid_of(phi.matrix()),
            e_plus: section_doc(e_plus),
            e_minus: section_doc(e_minus),
        },
        RawStructure::Gacm { phi, e_plus, e_minus, metric } => StructureKindDoc::Gacm {
            phi: grid_of(phi.matrix()),
            e_plus: section_doc(e_plus),
            e_minus: section_doc(e_minus),
            metric: grid_of(metric.matrix()),
        },
        RawStructure::Gcx { j } => StructureKindDoc::Gcx { j: grid_of(j.matrix()) },
        RawStructure::GcxPair { j1, j2 } => StructureKindDoc::GcxPair {
            j1: grid_of(j1.matrix()),
            j2: grid_of(j2.matrix()),
        },
        RawStructure::ClassicalAcm(acm) => StructureKindDoc::ClassicalAcm {
            phi: grid_of(acm.phi()),
            xi: acm.xi().iter().map(Scalar::to_string).collect(),
            eta: acm.eta().iter().map(Scalar::to_string).collect(),
            g: grid_of(acm.metric()),
        },
    };
    StructureDocument {
        frame: FrameDoc {
            dim: frame.dim(),
            name: frame.name().to_string(),
            brackets,
        },
        h,
        structure,
    }
}

/// Parse the two-form document against a frame.
pub fn bform_from_doc(
    doc: &BFormDocument,
    frame: &Arc<FrameContext>,
) -> Result<gengeo::frame::InvariantForm, CliError> {
    let dim = frame.dim();
    let mut terms = Vec::new();
    for (t, term) in doc.terms.iter().enumerate() {
        let ctx = format!("terms[{t}]");
        let i = one_based(&ctx, term.i, dim)?;
        let j = one_based(&ctx, term.j, dim)?;
        if i >= j {
            return Err(CliError::malformed(format!("{ctx}: indices must satisfy i < j")));
        }
        terms.push((vec![i, j], parse_scalar(&format!("{ctx}.c"), &term.c)?));
    }
    gengeo::frame::InvariantForm::new(frame, 2, &terms)
        .map_err(|e| CliError::malformed(format!("two-form: {e}")))
}
