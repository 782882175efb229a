//! Invariant frames with constant structure coefficients and the calculus
//! on them: exterior derivative, wedge, interior product, neutral pairing
//! and the (twisted) Courant bracket.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * the wedge carries no `1/k!` factor: `(α∧β)(X, Y) = α(X)β(Y) − α(Y)β(X)`;
//! * the interior product contracts the first slot: `(ι_X ω)(…) = ω(X, …)`;
//! * on one-forms `(dα)(X_i, X_j) = −α([X_i, X_j])`, i.e.
//!   `dσ^k = −½ Σ c_{ij}^k σ^i∧σ^j`, extended as an antiderivation;
//! * the neutral pairing is `⟨X+α, Y+β⟩ = ½(β(X) + α(Y))`.
//!
//! Sections are restricted to constant coefficients in the frame.  For an
//! isotropic span this loses nothing when checking involutivity: with
//! `⟨A, B⟩ = 0` the bracket `[[A, fB]]` differs from `f[[A, B]]` by a
//! multiple of `B` and a `⟨A, B⟩ df` term that vanishes, so closure on
//! constant generators already implies closure over all smooth
//! combinations.  Every involutivity check in this crate goes through
//! isotropic spans and relies on that reduction.

use crate::exactalg::Scalar;
use crate::{CheckItem, CheckReport, Error};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Coefficients of an invariant form, keyed by strictly increasing
/// multi-indices; zero coefficients are never stored.
pub type FormCoeffs = BTreeMap<Vec<usize>, Scalar>;

/// A frame `X_1..X_n` with constant structure coefficients
/// `[X_i, X_j] = Σ_k c_{ij}^k X_k` and an optional closed twisting
/// three-form.  Indices are 0-based throughout the crate.
#[derive(Clone)]
pub struct FrameContext {
    dim: usize,
    name: String,
    /// `c_{ij}^k` stored for `i < j` only; antisymmetry is a storage fact.
    c: BTreeMap<(usize, usize, usize), Scalar>,
    /// Degree-3 twist coefficients on increasing triples, if present.
    h: Option<FormCoeffs>,
}

impl PartialEq for FrameContext {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.c == other.c && self.h == other.h
    }
}

impl fmt::Debug for FrameContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FrameContext({}, dim {})", self.name, self.dim)
    }
}

impl FrameContext {
    /// Build a frame from `(i, j, k, c_{ij}^k)` terms with `i < j`.
    pub fn new(
        dim: usize,
        name: impl Into<String>,
        brackets: &[(usize, usize, usize, Scalar)],
    ) -> Result<FrameContext, Error> {
        if dim == 0 {
            return Err(Error::EmptyFrame);
        }
        let mut c = BTreeMap::new();
        for (i, j, k, v) in brackets {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::DimensionMismatch { expected: dim, got: i.max(j).max(k) + 1 });
            }
            if i >= j {
                return Err(Error::Axioms(format!(
                    "structure coefficient indices must satisfy i < j, got ({i}, {j})"
                )));
            }
            if !v.is_zero() {
                let slot = c.entry((i, j, k)).or_insert_with(Scalar::zero);
                *slot = &*slot + v;
                if slot.is_zero() {
                    c.remove(&(i, j, k));
                }
            }
        }
        Ok(FrameContext { dim, name: name.into(), c, h: None })
    }

    /// Abelian frame: all structure coefficients vanish.
    pub fn abelian(dim: usize, name: impl Into<String>) -> Result<FrameContext, Error> {
        FrameContext::new(dim, name, &[])
    }

    /// Attach a degree-3 twist given by `(i, j, k, coeff)` terms, `i < j < k`.
    pub fn with_twist(mut self, terms: &[(usize, usize, usize, Scalar)]) -> Result<Self, Error> {
        let mut coeffs: FormCoeffs = BTreeMap::new();
        for (i, j, k, v) in terms {
            let (i, j, k) = (*i, *j, *k);
            if !(i < j && j < k) {
                return Err(Error::Axioms(format!(
                    "twist indices must satisfy i < j < k, got ({i}, {j}, {k})"
                )));
            }
            if k >= self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: k + 1 });
            }
            if !v.is_zero() {
                let slot = coeffs.entry(vec![i, j, k]).or_insert_with(Scalar::zero);
                *slot = &*slot + v;
                if slot.is_zero() {
                    coeffs.remove(&vec![i, j, k]);
                }
            }
        }
        self.h = Some(coeffs);
        Ok(self)
    }

    pub fn shared(self) -> Arc<FrameContext> {
        Arc::new(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn has_twist(&self) -> bool {
        self.h.is_some()
    }

    /// `c_{ij}^k` for arbitrary `i`, `j` via antisymmetry.
    pub fn structure_coefficient(&self, i: usize, j: usize, k: usize) -> Scalar {
        if i == j {
            return Scalar::zero();
        }
        if i < j {
            self.c.get(&(i, j, k)).cloned().unwrap_or_else(Scalar::zero)
        } else {
            -self.c.get(&(j, i, k)).cloned().unwrap_or_else(Scalar::zero)
        }
    }

    /// Stored bracket terms `(i, j, k, c)` with `i < j`.
    pub fn bracket_terms(&self) -> Vec<(usize, usize, usize, Scalar)> {
        self.c.iter().map(|(&(i, j, k), v)| (i, j, k, v.clone())).collect()
    }

    /// Twist terms `(i, j, k, c)` with `i < j < k`, if a twist is present.
    pub fn twist_terms(&self) -> Option<Vec<(usize, usize, usize, Scalar)>> {
        self.h.as_ref().map(|h| {
            h.iter().map(|(idx, v)| (idx[0], idx[1], idx[2], v.clone())).collect()
        })
    }

    /// The twist as an invariant three-form on this frame.
    pub fn twist_form(self: &Arc<Self>) -> Option<InvariantForm> {
        self.h.as_ref().map(|coeffs| InvariantForm {
            frame: Arc::clone(self),
            degree: 3,
            coeffs: coeffs.clone(),
        })
    }

    /// Bilinear extension of `[X_i, X_j] = Σ c_{ij}^k X_k` to constant
    /// vector parts.
    pub fn lie_bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.dim, "vector length");
        assert_eq!(y.len(), self.dim, "vector length");
        let mut out = vec![Scalar::zero(); self.dim];
        for (&(i, j, k), c) in &self.c {
            // c_{ij}^k (x_i y_j − x_j y_i)
            let coeff = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            if !coeff.is_zero() {
                out[k] = &out[k] + &(c * &coeff);
            }
        }
        out
    }
}

/// Validate a frame: the Jacobi identity for every triple and, when a twist
/// is present, that it is real and closed.  The report carries one item per
/// violated triple.
pub fn check_frame(frame: &Arc<FrameContext>) -> CheckReport {
    let n = frame.dim();
    let mut report = CheckReport::new();
    let mut jacobi_ok = true;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in 0..n {
                    let mut sum = Scalar::zero();
                    for m in 0..n {
                        let t1 = frame.structure_coefficient(i, j, m)
                            * frame.structure_coefficient(m, k, l);
                        let t2 = frame.structure_coefficient(j, k, m)
                            * frame.structure_coefficient(m, i, l);
                        let t3 = frame.structure_coefficient(k, i, m)
                            * frame.structure_coefficient(m, j, l);
                        sum = sum + t1 + t2 + t3;
                    }
                    if !sum.is_zero() {
                        jacobi_ok = false;
                        report.push(CheckItem::fail(
                            format!("jacobi({},{},{})", i + 1, j + 1, k + 1),
                            format!("defect {} on X{}", sum, l + 1),
                        ));
                    }
                }
            }
        }
    }
    if jacobi_ok {
        report.push(CheckItem::pass("jacobi"));
    }
    if let Some(h) = frame.twist_form() {
        if h.coeffs().values().all(Scalar::is_real) {
            report.push(CheckItem::pass("twist_real"));
        } else {
            report.push(CheckItem::fail("twist_real", "twist has non-real coefficients"));
        }
        let dh = h.exterior_derivative();
        if dh.is_zero() {
            report.push(CheckItem::pass("twist_closed"));
        } else {
            report.push(CheckItem::fail("twist_closed", format!("dH = {dh}")));
        }
    }
    report
}

/// A section `X + α` of the big tangent bundle with constant coordinates on
/// the frame and coframe bases.
#[derive(Clone, PartialEq)]
pub struct GenSection {
    frame: Arc<FrameContext>,
    vec: Vec<Scalar>,
    form: Vec<Scalar>,
}

impl GenSection {
    pub fn zero(frame: &Arc<FrameContext>) -> Self {
        let n = frame.dim();
        GenSection { frame: Arc::clone(frame), vec: vec![Scalar::zero(); n], form: vec![Scalar::zero(); n] }
    }

    pub fn new(frame: &Arc<FrameContext>, vec: Vec<Scalar>, form: Vec<Scalar>) -> Result<Self, Error> {
        let n = frame.dim();
        if vec.len() != n || form.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: vec.len().max(form.len()) });
        }
        Ok(GenSection { frame: Arc::clone(frame), vec, form })
    }

    /// The frame vector `X_{i}`.
    pub fn basis_vector(frame: &Arc<FrameContext>, i: usize) -> Self {
        let mut s = GenSection::zero(frame);
        s.vec[i] = Scalar::one();
        s
    }

    /// The coframe form `σ^{i}`.
    pub fn basis_form(frame: &Arc<FrameContext>, i: usize) -> Self {
        let mut s = GenSection::zero(frame);
        s.form[i] = Scalar::one();
        s
    }

    /// Rebuild from the `2n` stacked coordinates `(vec | form)`.
    pub fn from_coords(frame: &Arc<FrameContext>, coords: &[Scalar]) -> Result<Self, Error> {
        let n = frame.dim();
        if coords.len() != 2 * n {
            return Err(Error::DimensionMismatch { expected: 2 * n, got: coords.len() });
        }
        Ok(GenSection {
            frame: Arc::clone(frame),
            vec: coords[..n].to_vec(),
            form: coords[n..].to_vec(),
        })
    }

    pub fn coords(&self) -> Vec<Scalar> {
        self.vec.iter().chain(self.form.iter()).cloned().collect()
    }

    pub fn frame(&self) -> &Arc<FrameContext> {
        &self.frame
    }

    pub fn vec_part(&self) -> &[Scalar] {
        &self.vec
    }

    pub fn form_part(&self) -> &[Scalar] {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.vec.iter().all(Scalar::is_zero) && self.form.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, rhs: &GenSection) -> Result<GenSection, Error> {
        same_frame(&self.frame, &rhs.frame)?;
        Ok(GenSection {
            frame: Arc::clone(&self.frame),
            vec: zip_with(&self.vec, &rhs.vec, |a, b| a + b),
            form: zip_with(&self.form, &rhs.form, |a, b| a + b),
        })
    }

    pub fn sub(&self, rhs: &GenSection) -> Result<GenSection, Error> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> GenSection {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> GenSection {
        GenSection {
            frame: Arc::clone(&self.frame),
            vec: self.vec.iter().map(|v| v * s).collect(),
            form: self.form.iter().map(|v| v * s).collect(),
        }
    }

    /// The form component as a degree-1 invariant form.
    pub fn form_as_invariant(&self) -> InvariantForm {
        InvariantForm::from_one_form(&self.frame, &self.form)
    }
}

impl fmt::Debug for GenSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GenSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in self.vec.iter().enumerate() {
            if !c.is_zero() {
                terms.push(display_term(c, &format!("X{}", i + 1)));
            }
        }
        for (i, c) in self.form.iter().enumerate() {
            if !c.is_zero() {
                terms.push(display_term(c, &format!("σ{}", i + 1)));
            }
        }
        write!(f, "{}", join_terms(&terms))
    }
}

fn display_term(c: &Scalar, sym: &str) -> String {
    if c.is_one() {
        sym.to_string()
    } else if (-c).is_one() {
        format!("-{sym}")
    } else if c == &Scalar::i() {
        format!("i {sym}")
    } else if c == &(-Scalar::i()) {
        format!("-i {sym}")
    } else {
        format!("({c}) {sym}")
    }
}

fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    out
}

fn zip_with(a: &[Scalar], b: &[Scalar], f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

fn same_frame(a: &Arc<FrameContext>, b: &Arc<FrameContext>) -> Result<(), Error> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::FrameMismatch)
    }
}

/// An invariant differential form of fixed degree, stored on the strictly
/// increasing multi-index basis `σ^{i_1}∧…∧σ^{i_k}`.
#[derive(Clone, PartialEq)]
pub struct InvariantForm {
    frame: Arc<FrameContext>,
    degree: usize,
    coeffs: FormCoeffs,
}

impl InvariantForm {
    pub fn zero(frame: &Arc<FrameContext>, degree: usize) -> Self {
        InvariantForm { frame: Arc::clone(frame), degree, coeffs: BTreeMap::new() }
    }

    /// Build from `(increasing multi-index, coefficient)` terms.
    pub fn new(
        frame: &Arc<FrameContext>,
        degree: usize,
        terms: &[(Vec<usize>, Scalar)],
    ) -> Result<Self, Error> {
        let mut form = InvariantForm::zero(frame, degree);
        for (idx, v) in terms {
            if idx.len() != degree {
                return Err(Error::DimensionMismatch { expected: degree, got: idx.len() });
            }
            if !idx.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Axioms(format!("multi-index {idx:?} is not strictly increasing")));
            }
            if idx.iter().any(|&i| i >= frame.dim()) {
                return Err(Error::DimensionMismatch { expected: frame.dim(), got: idx.len() });
            }
            form.accumulate(idx.clone(), v.clone());
        }
        Ok(form)
    }

    pub fn basis_one_form(frame: &Arc<FrameContext>, i: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![i], Scalar::one());
        InvariantForm { frame: Arc::clone(frame), degree: 1, coeffs }
    }

    pub fn from_one_form(frame: &Arc<FrameContext>, coords: &[Scalar]) -> Self {
        let mut form = InvariantForm::zero(frame, 1);
        for (i, c) in coords.iter().enumerate() {
            form.accumulate(vec![i], c.clone());
        }
        form
    }

    /// Coordinates of a degree-1 form on the coframe basis.
    pub fn one_form_coords(&self) -> Vec<Scalar> {
        assert_eq!(self.degree, 1, "one_form_coords on degree {}", self.degree);
        let mut out = vec![Scalar::zero(); self.frame.dim()];
        for (idx, v) in &self.coeffs {
            out[idx[0]] = v.clone();
        }
        out
    }

    pub fn frame(&self) -> &Arc<FrameContext> {
        &self.frame
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &FormCoeffs {
        &self.coeffs
    }

    pub fn coefficient(&self, idx: &[usize]) -> Scalar {
        self.coeffs.get(idx).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn accumulate(&mut self, idx: Vec<usize>, v: Scalar) {
        if v.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(idx.clone()).or_insert_with(Scalar::zero);
        *slot = &*slot + &v;
        if slot.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn add(&self, rhs: &InvariantForm) -> Result<InvariantForm, Error> {
        same_frame(&self.frame, &rhs.frame)?;
        if self.degree != rhs.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: rhs.degree });
        }
        let mut out = self.clone();
        for (idx, v) in &rhs.coeffs {
            out.accumulate(idx.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> InvariantForm {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> InvariantForm {
        if s.is_zero() {
            return InvariantForm::zero(&self.frame, self.degree);
        }
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = &*v * s;
        }
        out
    }

    /// Graded-commutative wedge without a `1/k!` factor.
    pub fn wedge(&self, rhs: &InvariantForm) -> Result<InvariantForm, Error> {
        same_frame(&self.frame, &rhs.frame)?;
        let mut out = InvariantForm::zero(&self.frame, self.degree + rhs.degree);
        for (left, a) in &self.coeffs {
            for (right, b) in &rhs.coeffs {
                if let Some((idx, sign)) = merge_indices(left, right) {
                    let mut coeff = a * b;
                    if sign < 0 {
                        coeff = -coeff;
                    }
                    out.accumulate(idx, coeff);
                }
            }
        }
        Ok(out)
    }

    /// Antiderivation extension of `dσ^k = −½ Σ c_{ij}^k σ^i∧σ^j`; constant
    /// function coefficients have zero differential, so degree-0 forms map
    /// to zero.
    pub fn exterior_derivative(&self) -> InvariantForm {
        let mut out = InvariantForm::zero(&self.frame, self.degree + 1);
        if self.degree == 0 {
            return out;
        }
        for (idx, coeff) in &self.coeffs {
            let d_monomial = d_basis_monomial(&self.frame, idx);
            for (midx, mv) in d_monomial.coeffs {
                out.accumulate(midx, &mv * coeff);
            }
        }
        out
    }

    /// First-slot contraction `(ι_X ω)(Y_1, …) = ω(X, Y_1, …)` with a
    /// constant vector part `X`.
    pub fn interior_product(&self, x: &[Scalar]) -> Result<InvariantForm, Error> {
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        if x.len() != self.frame.dim() {
            return Err(Error::DimensionMismatch { expected: self.frame.dim(), got: x.len() });
        }
        let mut out = InvariantForm::zero(&self.frame, self.degree - 1);
        for (idx, coeff) in &self.coeffs {
            for (slot, &i) in idx.iter().enumerate() {
                if x[i].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(slot);
                let mut v = coeff * &x[i];
                if slot % 2 == 1 {
                    v = -v;
                }
                out.accumulate(rest, v);
            }
        }
        Ok(out)
    }

    /// Multilinear evaluation on constant vector parts.
    pub fn eval(&self, args: &[&[Scalar]]) -> Result<Scalar, Error> {
        if args.len() != self.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: args.len() });
        }
        if self.degree == 0 {
            // a degree-0 invariant form is a constant; stored under the
            // empty index when nonzero
            return Ok(self.coefficient(&[]));
        }
        let mut current = self.clone();
        for x in &args[..self.degree - 1] {
            current = current.interior_product(x)?;
        }
        let last = args[self.degree - 1];
        let coords = current.one_form_coords();
        let mut acc = Scalar::zero();
        for (c, x) in coords.iter().zip(last) {
            acc = acc + c * x;
        }
        Ok(acc)
    }
}

impl fmt::Debug for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(idx, v)| {
                let sym: Vec<String> = idx.iter().map(|i| format!("σ{}", i + 1)).collect();
                display_term(v, &sym.join("∧"))
            })
            .collect();
        write!(f, "{}", join_terms(&terms))
    }
}

/// Merge two disjoint increasing index lists, returning the merged list and
/// the sign of the shuffle; `None` when an index repeats.
fn merge_indices(left: &[usize], right: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut merged = Vec::with_capacity(left.len() + right.len());
    let mut sign = 1;
    let (mut a, mut b) = (0, 0);
    while a < left.len() && b < right.len() {
        if left[a] == right[b] {
            return None;
        }
        if left[a] < right[b] {
            merged.push(left[a]);
            a += 1;
        } else {
            // right[b] jumps over the remaining left entries
            if (left.len() - a) % 2 == 1 {
                sign = -sign;
            }
            merged.push(right[b]);
            b += 1;
        }
    }
    merged.extend_from_slice(&left[a..]);
    merged.extend_from_slice(&right[b..]);
    Some((merged, sign))
}

fn d_basis_monomial(frame: &Arc<FrameContext>, idx: &[usize]) -> InvariantForm {
    if idx.len() == 1 {
        let k = idx[0];
        let mut out = InvariantForm::zero(frame, 2);
        for i in 0..frame.dim() {
            for j in i + 1..frame.dim() {
                out.accumulate(vec![i, j], -frame.structure_coefficient(i, j, k));
            }
        }
        return out;
    }
    // d(σ^{i_0} ∧ rest) = dσ^{i_0} ∧ rest − σ^{i_0} ∧ d(rest)
    let head = InvariantForm::basis_one_form(frame, idx[0]);
    let tail = InvariantForm::new(frame, idx.len() - 1, &[(idx[1..].to_vec(), Scalar::one())])
        .expect("increasing tail");
    let left = d_basis_monomial(frame, &idx[..1]).wedge(&tail).expect("same frame");
    let right = head.wedge(&d_basis_monomial(frame, &idx[1..])).expect("same frame");
    left.add(&right.neg()).expect("same degree")
}

/// Neutral pairing `⟨X+α, Y+β⟩ = ½(β(X) + α(Y))`.
pub fn pairing(u: &GenSection, v: &GenSection) -> Result<Scalar, Error> {
    same_frame(u.frame(), v.frame())?;
    let mut acc = Scalar::zero();
    for i in 0..u.frame().dim() {
        acc = acc + &u.vec[i] * &v.form[i] + &v.vec[i] * &u.form[i];
    }
    Ok(acc * Scalar::from_ratio(1, 2))
}

/// The (twisted) Courant bracket on invariant sections.  For constant
/// coefficients the Lie-derivative and `d(ι_X β − ι_Y α)` terms collapse,
/// leaving `[X,Y] + ι_X dβ − ι_Y dα + ι_Y ι_X H`.
pub fn courant_bracket(u: &GenSection, v: &GenSection, use_twist: bool) -> Result<GenSection, Error> {
    same_frame(u.frame(), v.frame())?;
    let frame = u.frame();
    let vec = frame.lie_bracket(u.vec_part(), v.vec_part());

    let d_beta = v.form_as_invariant().exterior_derivative();
    let d_alpha = u.form_as_invariant().exterior_derivative();
    let mut form = d_beta
        .interior_product(u.vec_part())?
        .add(&d_alpha.interior_product(v.vec_part())?.neg())?;

    if use_twist {
        let h = frame.twist_form().ok_or(Error::MissingTwist)?;
        let twist = h.interior_product(u.vec_part())?.interior_product(v.vec_part())?;
        form = form.add(&twist)?;
    }

    GenSection::new(frame, vec, form.one_form_coords())
}

/// A product frame together with the index bookkeeping needed to embed and
/// split sections, operators and forms of the two factors.  Cross structure
/// coefficients vanish and the twists add.
pub struct ProductContext {
    frame: Arc<FrameContext>,
    left: Arc<FrameContext>,
    right: Arc<FrameContext>,
}

impl ProductContext {
    pub fn frame(&self) -> &Arc<FrameContext> {
        &self.frame
    }

    pub fn factor(&self, side: usize) -> &Arc<FrameContext> {
        match side {
            0 => &self.left,
            1 => &self.right,
            _ => panic!("factor index must be 0 or 1"),
        }
    }

    fn offset(&self, side: usize) -> usize {
        match side {
            0 => 0,
            1 => self.left.dim(),
            _ => panic!("factor index must be 0 or 1"),
        }
    }

    /// Embed a factor section as `(u, 0)` or `(0, u)`.
    pub fn embed_section(&self, side: usize, u: &GenSection) -> Result<GenSection, Error> {
        same_frame(u.frame(), self.factor(side))?;
        let n = self.frame.dim();
        let off = self.offset(side);
        let mut vec = vec![Scalar::zero(); n];
        let mut form = vec![Scalar::zero(); n];
        for (i, c) in u.vec_part().iter().enumerate() {
            vec[off + i] = c.clone();
        }
        for (i, c) in u.form_part().iter().enumerate() {
            form[off + i] = c.clone();
        }
        GenSection::new(&self.frame, vec, form)
    }

    /// Split a product section into its factor components.
    pub fn split_section(&self, u: &GenSection) -> Result<(GenSection, GenSection), Error> {
        same_frame(u.frame(), &self.frame)?;
        let n1 = self.left.dim();
        let n2 = self.right.dim();
        let a = GenSection::new(
            &self.left,
            u.vec_part()[..n1].to_vec(),
            u.form_part()[..n1].to_vec(),
        )?;
        let b = GenSection::new(
            &self.right,
            u.vec_part()[n1..n1 + n2].to_vec(),
            u.form_part()[n1..n1 + n2].to_vec(),
        )?;
        Ok((a, b))
    }

    /// Embed a big-tangent operator matrix (`2m × 2m` over the factor) into
    /// the product coordinates, acting by zero on the other factor.
    pub fn embed_operator_matrix(
        &self,
        side: usize,
        mat: &crate::exactalg::Matrix,
    ) -> crate::exactalg::Matrix {
        let m = self.factor(side).dim();
        assert_eq!(mat.rows(), 2 * m, "operator shape");
        assert_eq!(mat.cols(), 2 * m, "operator shape");
        let n = self.frame.dim();
        let off = self.offset(side);
        let mut out = crate::exactalg::Matrix::zeros(2 * n, 2 * n);
        let place = |local: usize| if local < m { off + local } else { n + off + (local - m) };
        for r in 0..2 * m {
            for c in 0..2 * m {
                let v = mat.at(r, c);
                if !v.is_zero() {
                    out.set(place(r), place(c), v.clone());
                }
            }
        }
        out
    }

    /// Pull a factor form back to the product frame.
    pub fn embed_form(&self, side: usize, form: &InvariantForm) -> Result<InvariantForm, Error> {
        same_frame(form.frame(), self.factor(side))?;
        let off = self.offset(side);
        let terms: Vec<(Vec<usize>, Scalar)> = form
            .coeffs()
            .iter()
            .map(|(idx, v)| (idx.iter().map(|i| i + off).collect(), v.clone()))
            .collect();
        InvariantForm::new(&self.frame, form.degree(), &terms)
    }
}

/// Product of two frames: dimensions add, cross structure coefficients are
/// zero and the twists add (each pulled back from its factor).
pub fn product_context(
    f1: &Arc<FrameContext>,
    f2: &Arc<FrameContext>,
) -> Result<ProductContext, Error> {
    let n1 = f1.dim();
    let n = n1 + f2.dim();
    let mut brackets = f1.bracket_terms();
    for (i, j, k, c) in f2.bracket_terms() {
        brackets.push((i + n1, j + n1, k + n1, c));
    }
    let name = format!("{}x{}", f1.name(), f2.name());
    let mut frame = FrameContext::new(n, name, &brackets)?;
    let mut twist: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    if let Some(terms) = f1.twist_terms() {
        twist.extend(terms);
    }
    if let Some(terms) = f2.twist_terms() {
        twist.extend(terms.into_iter().map(|(i, j, k, c)| (i + n1, j + n1, k + n1, c)));
    }
    if f1.has_twist() || f2.has_twist() {
        frame = frame.with_twist(&twist)?;
    }
    Ok(ProductContext { frame: frame.shared(), left: Arc::clone(f1), right: Arc::clone(f2) })
}
