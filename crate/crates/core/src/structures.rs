//! Generalized structures on the big tangent bundle and every
//! classification predicate: almost contact triples, metrics,
//! contact/strong/normal decisions, coKähler and Kähler verdicts, and
//! B-field transforms.
//!
//! Operators are `2n × 2n` matrices in the `(X_1..X_n, σ^1..σ^n)`
//! coordinates.  The tensor product of sections is evaluated as
//! `(A⊗B)(u) = 2⟨B, u⟩ A`; with that convention the defining identity
//! `Φ² = −Id + E₊⊗E₋ + E₋⊗E₊` annihilates both distinguished sections.

use crate::exactalg::{eigenspace, is_positive_definite, Matrix, Scalar, Subspace};
use crate::frame::{
    courant_bracket, pairing, FrameContext, GenSection, InvariantForm,
};
use crate::{CheckItem, CheckReport, Error};
use std::fmt;
use std::sync::Arc;

/// An endomorphism of the big tangent bundle with named blocks: upper-left
/// `T→T`, upper-right `T*→T`, lower-left `T→T*`, lower-right `T*→T*`.
#[derive(Clone, PartialEq)]
pub struct BigOperator {
    frame: Arc<FrameContext>,
    mat: Matrix,
}

impl fmt::Debug for BigOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigOperator on {:?}: {:?}", self.frame, self.mat)
    }
}

impl BigOperator {
    pub fn from_matrix(frame: &Arc<FrameContext>, mat: Matrix) -> Result<Self, Error> {
        let n2 = 2 * frame.dim();
        if mat.rows() != n2 || mat.cols() != n2 {
            return Err(Error::DimensionMismatch { expected: n2, got: mat.rows() });
        }
        Ok(BigOperator { frame: Arc::clone(frame), mat })
    }

    /// Assemble from the four `n × n` blocks.
    pub fn from_blocks(
        frame: &Arc<FrameContext>,
        tt: &Matrix,
        st: &Matrix,
        ts: &Matrix,
        ss: &Matrix,
    ) -> Result<Self, Error> {
        let n = frame.dim();
        for b in [tt, st, ts, ss] {
            if b.rows() != n || b.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, got: b.rows() });
            }
        }
        BigOperator::from_matrix(frame, Matrix::from_blocks(tt, st, ts, ss))
    }

    pub fn identity(frame: &Arc<FrameContext>) -> Self {
        BigOperator { frame: Arc::clone(frame), mat: Matrix::identity(2 * frame.dim()) }
    }

    pub fn zero(frame: &Arc<FrameContext>) -> Self {
        BigOperator { frame: Arc::clone(frame), mat: Matrix::zeros(2 * frame.dim(), 2 * frame.dim()) }
    }

    pub fn frame(&self) -> &Arc<FrameContext> {
        &self.frame
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    /// Named block: `0 ≤ row_block, col_block ≤ 1` index tangent/cotangent.
    pub fn blocks(&self) -> [Matrix; 4] {
        let n = self.frame.dim();
        [
            self.mat.block(0, 0, n, n),
            self.mat.block(0, n, n, n),
            self.mat.block(n, 0, n, n),
            self.mat.block(n, n, n, n),
        ]
    }

    pub fn apply(&self, u: &GenSection) -> Result<GenSection, Error> {
        if u.frame() != &self.frame && **u.frame() != *self.frame {
            return Err(Error::FrameMismatch);
        }
        let image = self.mat.mul_vec(&u.coords());
        GenSection::from_coords(&self.frame, &image)
    }

    pub fn compose(&self, rhs: &BigOperator) -> Result<BigOperator, Error> {
        if *self.frame != *rhs.frame {
            return Err(Error::FrameMismatch);
        }
        Ok(BigOperator { frame: Arc::clone(&self.frame), mat: self.mat.mul(&rhs.mat) })
    }

    pub fn add(&self, rhs: &BigOperator) -> Result<BigOperator, Error> {
        if *self.frame != *rhs.frame {
            return Err(Error::FrameMismatch);
        }
        Ok(BigOperator { frame: Arc::clone(&self.frame), mat: self.mat.add(&rhs.mat) })
    }

    pub fn neg(&self) -> BigOperator {
        BigOperator { frame: Arc::clone(&self.frame), mat: self.mat.neg() }
    }

    pub fn scale(&self, s: &Scalar) -> BigOperator {
        BigOperator { frame: Arc::clone(&self.frame), mat: self.mat.scale(s) }
    }

    /// Adjoint for the neutral pairing: `⟨A u, v⟩ = ⟨u, A* v⟩`, computed as
    /// `P⁻¹ Aᵀ P` with `P` the pairing Gram matrix.
    pub fn adjoint(&self) -> BigOperator {
        let p = pairing_gram(&self.frame);
        let p_inv = p.inverse().expect("neutral pairing is nondegenerate");
        BigOperator {
            frame: Arc::clone(&self.frame),
            mat: p_inv.mul(&self.mat.transpose()).mul(&p),
        }
    }

    /// Gram matrix of the symmetric form `(u, v) ↦ ⟨A u, v⟩`.
    pub fn pairing_form(&self) -> Matrix {
        self.mat.transpose().mul(&pairing_gram(&self.frame))
    }
}

/// Gram matrix of `⟨·,·⟩` in the `(X, σ)` coordinates: `½ [[0, I], [I, 0]]`.
pub fn pairing_gram(frame: &Arc<FrameContext>) -> Matrix {
    let n = frame.dim();
    let half = Scalar::from_ratio(1, 2);
    Matrix::from_fn(2 * n, 2 * n, |r, c| {
        if r < n && c == n + r {
            half.clone()
        } else if r >= n && c == r - n {
            half.clone()
        } else {
            Scalar::zero()
        }
    })
}

/// `(A⊗B)(u) = 2⟨B, u⟩ A` as a matrix.
pub fn tensor_op(a: &GenSection, b: &GenSection) -> Result<BigOperator, Error> {
    if *a.frame() != *b.frame() {
        return Err(Error::FrameMismatch);
    }
    let frame = a.frame();
    let n = frame.dim();
    let a_coords = a.coords();
    let b_coords = b.coords();
    // 2⟨B, e_j⟩ is the j-th coordinate of B with tangent/cotangent halves
    // swapped.
    let swapped: Vec<Scalar> = (0..2 * n)
        .map(|j| if j < n { b_coords[n + j].clone() } else { b_coords[j - n].clone() })
        .collect();
    let mat = Matrix::from_fn(2 * n, 2 * n, |r, c| &a_coords[r] * &swapped[c]);
    BigOperator::from_matrix(frame, mat)
}

/// A generalized almost contact triple `(Φ, E₊, E₋)`; construction verifies
/// the defining identities.
#[derive(Clone, Debug)]
pub struct GenAlmostContact {
    phi: BigOperator,
    e_plus: GenSection,
    e_minus: GenSection,
}

/// Axioms of a generalized almost contact triple, one item per identity.
pub fn check_gac(phi: &BigOperator, e_plus: &GenSection, e_minus: &GenSection) -> CheckReport {
    let mut report = CheckReport::new();
    let frame = phi.frame();

    let skew = phi.add(&phi.adjoint()).expect("same frame");
    if skew.matrix().is_zero() {
        report.push(CheckItem::pass("skew_adjoint"));
    } else {
        report.push(CheckItem::fail("skew_adjoint", "Φ + Φ* ≠ 0"));
    }

    match (tensor_op(e_plus, e_minus), tensor_op(e_minus, e_plus)) {
        (Ok(pm), Ok(mp)) => {
            let expected = BigOperator::identity(frame)
                .neg()
                .add(&pm)
                .and_then(|m| m.add(&mp))
                .expect("same frame");
            match phi.compose(phi) {
                Ok(sq) if sq == expected => report.push(CheckItem::pass("phi_squared")),
                Ok(sq) => {
                    let witness = first_column_difference(frame, sq.matrix(), expected.matrix());
                    report.push(CheckItem::fail("phi_squared", witness));
                }
                Err(_) => report.push(CheckItem::fail("phi_squared", "frame mismatch")),
            }
        }
        _ => report.push(CheckItem::fail("phi_squared", "sections on a different frame")),
    }

    for (name, section) in [("isotropic_e_plus", e_plus), ("isotropic_e_minus", e_minus)] {
        match pairing(section, section) {
            Ok(v) if v.is_zero() => report.push(CheckItem::pass(name)),
            Ok(v) => report.push(CheckItem::fail(name, format!("⟨E,E⟩ = {v}"))),
            Err(_) => report.push(CheckItem::fail(name, "frame mismatch")),
        }
    }

    match pairing(e_plus, e_minus) {
        Ok(v) if (&v + &v).is_one() => report.push(CheckItem::pass("pairing_normalization")),
        Ok(v) => report.push(CheckItem::fail(
            "pairing_normalization",
            format!("2⟨E+,E-⟩ = {}", &v + &v),
        )),
        Err(_) => report.push(CheckItem::fail("pairing_normalization", "frame mismatch")),
    }

    report
}

fn first_column_difference(frame: &Arc<FrameContext>, got: &Matrix, expected: &Matrix) -> String {
    for c in 0..got.cols() {
        for r in 0..got.rows() {
            if got.at(r, c) != expected.at(r, c) {
                let e: Vec<Scalar> =
                    (0..got.rows()).map(|k| if k == c { Scalar::one() } else { Scalar::zero() }).collect();
                let basis = GenSection::from_coords(frame, &e).expect("basis coords");
                let got_col = GenSection::from_coords(
                    frame,
                    &(0..got.rows()).map(|k| got.at(k, c).clone()).collect::<Vec<_>>(),
                )
                .expect("column coords");
                let want_col = GenSection::from_coords(
                    frame,
                    &(0..got.rows()).map(|k| expected.at(k, c).clone()).collect::<Vec<_>>(),
                )
                .expect("column coords");
                return format!("on {basis}: got {got_col}, expected {want_col}");
            }
        }
    }
    "matrices agree".to_string()
}

impl GenAlmostContact {
    pub fn new(
        phi: BigOperator,
        e_plus: GenSection,
        e_minus: GenSection,
    ) -> Result<Self, Error> {
        let report = check_gac(&phi, &e_plus, &e_minus);
        if !report.passed() {
            let names: Vec<&str> =
                report.failures().map(|i| i.name.as_str()).collect();
            return Err(Error::Axioms(names.join(", ")));
        }
        Ok(GenAlmostContact { phi, e_plus, e_minus })
    }

    pub fn phi(&self) -> &BigOperator {
        &self.phi
    }

    pub fn e_plus(&self) -> &GenSection {
        &self.e_plus
    }

    pub fn e_minus(&self) -> &GenSection {
        &self.e_minus
    }

    pub fn frame(&self) -> &Arc<FrameContext> {
        self.phi.frame()
    }

    /// `e^B`-conjugated triple for a closed two-form `B`.
    pub fn b_transform(&self, b: &InvariantForm) -> Result<GenAlmostContact, Error> {
        let (shear, unshear) = bfield_pair(self.frame(), b)?;
        let phi = shear.compose(&self.phi)?.compose(&unshear)?;
        GenAlmostContact::new(phi, shear.apply(&self.e_plus)?, shear.apply(&self.e_minus)?)
    }
}

/// Which of the two maximal isotropics to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LSign {
    Plus,
    Minus,
}

/// The `+i` eigenbundle of `Φ`.  On a frame of dimension `m` it has complex
/// dimension `m − 1`.
pub fn eigenbundle_e10(s: &GenAlmostContact) -> Subspace {
    eigenspace(s.phi().matrix(), &Scalar::i())
}

/// `L^± = span{E_±} ⊕ E^{(1,0)}`, validated to be maximal isotropic.
pub fn build_l(s: &GenAlmostContact, sign: LSign) -> Result<Subspace, Error> {
    let e10 = eigenbundle_e10(s);
    let line = match sign {
        LSign::Plus => s.e_plus().coords(),
        LSign::Minus => s.e_minus().coords(),
    };
    let mut spans: Vec<Vec<Scalar>> = vec![line];
    spans.extend(e10.basis().iter().cloned());
    let l = Subspace::from_spans(2 * s.frame().dim(), &spans)?;
    if l.dim() != s.frame().dim() {
        return Err(Error::Axioms(format!(
            "L^± has dimension {}, expected the frame dimension {}",
            l.dim(),
            s.frame().dim()
        )));
    }
    check_isotropic(&l, s.frame())?;
    Ok(l)
}

fn check_isotropic(l: &Subspace, frame: &Arc<FrameContext>) -> Result<(), Error> {
    let sections: Vec<GenSection> = l
        .basis()
        .iter()
        .map(|v| GenSection::from_coords(frame, v).expect("basis coords"))
        .collect();
    for (i, a) in sections.iter().enumerate() {
        for b in &sections[i..] {
            if !pairing(a, b)?.is_zero() {
                return Err(Error::NotIsotropic);
            }
        }
    }
    Ok(())
}

/// Outcome of an involutivity check with the offending bracket on failure.
#[derive(Clone, Debug)]
pub struct InvolutivityResult {
    pub involutive: bool,
    pub witness: Option<BracketWitness>,
}

/// The pair of generators and the bracket value that escapes the span.
#[derive(Clone, Debug)]
pub struct BracketWitness {
    pub left: GenSection,
    pub right: GenSection,
    pub bracket: GenSection,
}

/// Courant closure of an isotropic span, decided on its constant
/// generators.  Isotropy is required: it is what makes generator closure
/// equivalent to closure under all smooth combinations.
pub fn is_involutive(
    l: &Subspace,
    frame: &Arc<FrameContext>,
    use_twist: bool,
) -> Result<InvolutivityResult, Error> {
    if l.ambient_dim() != 2 * frame.dim() {
        return Err(Error::DimensionMismatch { expected: 2 * frame.dim(), got: l.ambient_dim() });
    }
    check_isotropic(l, frame)?;
    let sections: Vec<GenSection> = l
        .basis()
        .iter()
        .map(|v| GenSection::from_coords(frame, v).expect("basis coords"))
        .collect();
    for i in 0..sections.len() {
        for j in i + 1..sections.len() {
            let bracket = courant_bracket(&sections[i], &sections[j], use_twist)?;
            if !l.contains(&bracket.coords())? {
                return Ok(InvolutivityResult {
                    involutive: false,
                    witness: Some(BracketWitness {
                        left: sections[i].clone(),
                        right: sections[j].clone(),
                        bracket,
                    }),
                });
            }
        }
    }
    Ok(InvolutivityResult { involutive: true, witness: None })
}

/// Closure record for both maximal isotropics.
#[derive(Clone, Debug)]
pub struct ContactClassification {
    pub plus: InvolutivityResult,
    pub minus: InvolutivityResult,
}

impl ContactClassification {
    pub fn is_contact(&self) -> bool {
        self.plus.involutive || self.minus.involutive
    }

    pub fn is_strong(&self) -> bool {
        self.plus.involutive && self.minus.involutive
    }
}

/// Involutivity of `L^+` and `L^-`: contact when either closes, strong when
/// both do.
pub fn classify_contact(
    s: &GenAlmostContact,
    use_twist: bool,
) -> Result<ContactClassification, Error> {
    let plus = is_involutive(&build_l(s, LSign::Plus)?, s.frame(), use_twist)?;
    let minus = is_involutive(&build_l(s, LSign::Minus)?, s.frame(), use_twist)?;
    Ok(ContactClassification { plus, minus })
}

/// Strong and `[[E₊, E₋]] = 0`.
pub fn is_normal(s: &GenAlmostContact, use_twist: bool) -> Result<bool, Error> {
    if !classify_contact(s, use_twist)?.is_strong() {
        return Ok(false);
    }
    Ok(courant_bracket(s.e_plus(), s.e_minus(), use_twist)?.is_zero())
}

/// Self-adjointness, involutivity and positive definiteness of a candidate
/// generalized metric.
pub fn check_metric(g: &BigOperator) -> CheckReport {
    let mut report = CheckReport::new();
    if g.adjoint() == *g {
        report.push(CheckItem::pass("self_adjoint"));
    } else {
        report.push(CheckItem::fail("self_adjoint", "G* ≠ G"));
    }
    let square = g.compose(g).expect("same frame");
    if square == BigOperator::identity(g.frame()) {
        report.push(CheckItem::pass("involution"));
    } else {
        report.push(CheckItem::fail("involution", "G² ≠ Id"));
    }
    match is_positive_definite(&g.pairing_form()) {
        Ok(true) => report.push(CheckItem::pass("positive_definite")),
        Ok(false) => report.push(CheckItem::fail(
            "positive_definite",
            "⟨G·,·⟩ has a non-positive leading principal minor",
        )),
        Err(Error::NotReal) => {
            report.push(CheckItem::fail("positive_definite", "⟨G·,·⟩ has non-real entries"))
        }
        Err(Error::NotSymmetric) => {
            report.push(CheckItem::fail("positive_definite", "⟨G·,·⟩ is not symmetric"))
        }
        Err(e) => report.push(CheckItem::fail("positive_definite", e.to_string())),
    }
    report
}

/// A generalized metric: validated self-adjoint involution with positive
/// definite associated form.
#[derive(Clone, Debug)]
pub struct GenMetric {
    g: BigOperator,
}

impl GenMetric {
    pub fn new(g: BigOperator) -> Result<Self, Error> {
        let report = check_metric(&g);
        if !report.passed() {
            let names: Vec<&str> = report.failures().map(|i| i.name.as_str()).collect();
            return Err(Error::Axioms(names.join(", ")));
        }
        Ok(GenMetric { g })
    }

    pub fn operator(&self) -> &BigOperator {
        &self.g
    }
}

/// A generalized almost contact triple together with a compatible metric.
#[derive(Clone, Debug)]
pub struct GenContactMetric {
    base: GenAlmostContact,
    metric: GenMetric,
}

/// Result of the compatibility identity `−ΦGΦ = G − E₊⊗E₊ − E₋⊗E₋`.
#[derive(Clone, Debug)]
pub struct CompatResult {
    pub ok: bool,
    /// Basis section where the two sides first differ, with both values.
    pub witness: Option<(GenSection, GenSection, GenSection)>,
}

/// Exact check of the compatibility identity.
pub fn check_compat(base: &GenAlmostContact, metric: &GenMetric) -> CompatResult {
    let phi = base.phi();
    let g = metric.operator();
    let lhs = phi.compose(g).and_then(|m| m.compose(phi)).expect("same frame").neg();
    let pp = tensor_op(base.e_plus(), base.e_plus()).expect("same frame");
    let mm = tensor_op(base.e_minus(), base.e_minus()).expect("same frame");
    let rhs = g.add(&pp.neg()).and_then(|m| m.add(&mm.neg())).expect("same frame");
    if lhs == rhs {
        return CompatResult { ok: true, witness: None };
    }
    let frame = base.frame();
    for c in 0..2 * frame.dim() {
        let coords: Vec<Scalar> = (0..2 * frame.dim())
            .map(|k| if k == c { Scalar::one() } else { Scalar::zero() })
            .collect();
        let basis = GenSection::from_coords(frame, &coords).expect("basis coords");
        let left = lhs.apply(&basis).expect("same frame");
        let right = rhs.apply(&basis).expect("same frame");
        if left != right {
            return CompatResult { ok: false, witness: Some((basis, left, right)) };
        }
    }
    unreachable!("matrices differ but agree on every basis section")
}

impl GenContactMetric {
    pub fn new(base: GenAlmostContact, metric: GenMetric) -> Result<Self, Error> {
        if *base.frame() != *metric.operator().frame() {
            return Err(Error::FrameMismatch);
        }
        let compat = check_compat(&base, &metric);
        if !compat.ok {
            return Err(Error::Axioms("metric compatibility".into()));
        }
        Ok(GenContactMetric { base, metric })
    }

    pub fn base(&self) -> &GenAlmostContact {
        &self.base
    }

    pub fn metric(&self) -> &GenMetric {
        &self.metric
    }

    pub fn frame(&self) -> &Arc<FrameContext> {
        self.base.frame()
    }

    pub fn b_transform(&self, b: &InvariantForm) -> Result<GenContactMetric, Error> {
        let (shear, unshear) = bfield_pair(self.frame(), b)?;
        let base = self.base.b_transform(b)?;
        let g = shear.compose(self.metric.operator())?.compose(&unshear)?;
        GenContactMetric::new(base, GenMetric::new(g)?)
    }
}

/// The three structural consequences of compatibility, checked exactly:
/// `G(E_±) = E_∓`, `GΦ = ΦG`, and `G`-invariance of the `+i` eigenbundle.
pub fn lemma32_suite(t: &GenContactMetric) -> CheckReport {
    let mut report = CheckReport::new();
    let g = t.metric().operator();
    let base = t.base();

    let ge_plus = g.apply(base.e_plus()).expect("same frame");
    let ge_minus = g.apply(base.e_minus()).expect("same frame");
    if ge_plus == *base.e_minus() && ge_minus == *base.e_plus() {
        report.push(CheckItem::pass("swaps_sections"));
    } else {
        report.push(CheckItem::fail(
            "swaps_sections",
            format!("G(E+) = {ge_plus}, G(E-) = {ge_minus}"),
        ));
    }

    let gphi = g.compose(base.phi()).expect("same frame");
    let phig = base.phi().compose(g).expect("same frame");
    if gphi == phig {
        report.push(CheckItem::pass("commutes_with_phi"));
    } else {
        report.push(CheckItem::fail("commutes_with_phi", "GΦ ≠ ΦG"));
    }

    let e10 = eigenbundle_e10(base);
    let image: Vec<Vec<Scalar>> =
        e10.basis().iter().map(|v| g.matrix().mul_vec(v)).collect();
    match Subspace::from_spans(e10.ambient_dim(), &image) {
        Ok(ge10) if ge10 == e10 => report.push(CheckItem::pass("preserves_eigenbundle")),
        Ok(_) => report.push(CheckItem::fail("preserves_eigenbundle", "G(E^{(1,0)}) ≠ E^{(1,0)}")),
        Err(e) => report.push(CheckItem::fail("preserves_eigenbundle", e.to_string())),
    }

    report
}

/// The companion triple `(GΦ, G E₊, G E₋)`; compatibility makes it another
/// generalized almost contact structure with the sections swapped.
pub fn compose_gphi(t: &GenContactMetric) -> Result<GenAlmostContact, Error> {
    let g = t.metric().operator();
    let base = t.base();
    let phi = g.compose(base.phi())?;
    let e_plus = g.apply(base.e_plus())?;
    let e_minus = g.apply(base.e_minus())?;
    GenAlmostContact::new(phi, e_plus, e_minus)
}

/// Normal and the companion `GΦ` triple is strong; the vanishing bracket of
/// the swapped sections is implied but asserted anyway.
pub fn is_cokahler(t: &GenContactMetric, use_twist: bool) -> Result<bool, Error> {
    if !is_normal(t.base(), use_twist)? {
        return Ok(false);
    }
    let companion = compose_gphi(t)?;
    if !classify_contact(&companion, use_twist)?.is_strong() {
        return Ok(false);
    }
    Ok(courant_bracket(companion.e_plus(), companion.e_minus(), use_twist)?.is_zero())
}

/// Verdict for a candidate generalized complex structure.
#[derive(Clone, Debug)]
pub enum GcxClass {
    /// The algebra already fails; involutivity is not meaningful.
    Invalid(CheckReport),
    /// Valid algebra, eigenbundle not closed; carries the witness.
    Almost(BracketWitness),
    Integrable,
}

impl GcxClass {
    pub fn is_integrable(&self) -> bool {
        matches!(self, GcxClass::Integrable)
    }

    pub fn is_valid(&self) -> bool {
        !matches!(self, GcxClass::Invalid(_))
    }
}

/// Validate `J + J* = 0` and `J² = −Id`, then decide involutivity of the
/// `+i` eigenbundle.
pub fn check_gcx(j: &BigOperator, use_twist: bool) -> Result<GcxClass, Error> {
    let mut report = CheckReport::new();
    if j.add(&j.adjoint())?.matrix().is_zero() {
        report.push(CheckItem::pass("skew_adjoint"));
    } else {
        report.push(CheckItem::fail("skew_adjoint", "J + J* ≠ 0"));
    }
    if j.compose(j)? == BigOperator::identity(j.frame()).neg() {
        report.push(CheckItem::pass("squares_to_minus_id"));
    } else {
        report.push(CheckItem::fail("squares_to_minus_id", "J² ≠ -Id"));
    }
    if !report.passed() {
        return Ok(GcxClass::Invalid(report));
    }
    let l = eigenspace(j.matrix(), &Scalar::i());
    let result = is_involutive(&l, j.frame(), use_twist)?;
    Ok(match result.witness {
        None => GcxClass::Integrable,
        Some(witness) => GcxClass::Almost(witness),
    })
}

/// Condition-by-condition verdict for a candidate generalized Kähler pair.
#[derive(Clone, Debug)]
pub struct GkReport {
    pub j1: GcxClass,
    pub j2: GcxClass,
    pub commuting: bool,
    pub metric: CheckReport,
}

impl GkReport {
    pub fn verdict(&self) -> bool {
        self.j1.is_integrable() && self.j2.is_integrable() && self.commuting && self.metric.passed()
    }
}

/// Two commuting integrable structures whose product `−J₁J₂` is a
/// generalized metric.
pub fn is_generalized_kahler(
    j1: &BigOperator,
    j2: &BigOperator,
    use_twist: bool,
) -> Result<GkReport, Error> {
    let c1 = check_gcx(j1, use_twist)?;
    let c2 = check_gcx(j2, use_twist)?;
    let commuting = j1.compose(j2)? == j2.compose(j1)?;
    let g = j1.compose(j2)?.neg();
    let metric = check_metric(&g);
    Ok(GkReport { j1: c1, j2: c2, commuting, metric })
}

/// The shear `e^B = [[1, 0], [B, 1]]` and its inverse for a closed
/// two-form `B`.
pub fn bfield_pair(
    frame: &Arc<FrameContext>,
    b: &InvariantForm,
) -> Result<(BigOperator, BigOperator), Error> {
    if b.degree() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: b.degree() });
    }
    if **b.frame() != **frame {
        return Err(Error::FrameMismatch);
    }
    if !b.exterior_derivative().is_zero() {
        return Err(Error::NotClosed);
    }
    let n = frame.dim();
    let mut flat = Matrix::zeros(n, n);
    for j in 0..n {
        let ej: Vec<Scalar> =
            (0..n).map(|t| if t == j { Scalar::one() } else { Scalar::zero() }).collect();
        let col = b.interior_product(&ej)?.one_form_coords();
        for (r, v) in col.into_iter().enumerate() {
            flat.set(r, j, v);
        }
    }
    let id = Matrix::identity(n);
    let zero = Matrix::zeros(n, n);
    let shear = BigOperator::from_blocks(frame, &id, &zero, &flat, &id)?;
    let unshear = BigOperator::from_blocks(frame, &id, &zero, &flat.neg(), &id)?;
    Ok((shear, unshear))
}

/// Conjugate an operator by `e^B`.
pub fn bfield_conjugate(op: &BigOperator, b: &InvariantForm) -> Result<BigOperator, Error> {
    let (shear, unshear) = bfield_pair(op.frame(), b)?;
    shear.compose(op)?.compose(&unshear)
}

/// The strongness criterion through the eigenbundle alone:
/// `[[L^±, E^{(1,0)}]] ⊆ E^{(1,0)}` for both signs.  Agrees with
/// `classify_contact(..).is_strong()` on every instance.
pub fn lemma42_check(s: &GenAlmostContact, use_twist: bool) -> Result<bool, Error> {
    let e10 = eigenbundle_e10(s);
    let e10_sections: Vec<GenSection> = e10
        .basis()
        .iter()
        .map(|v| GenSection::from_coords(s.frame(), v).expect("basis coords"))
        .collect();
    for sign in [LSign::Plus, LSign::Minus] {
        let l = build_l(s, sign)?;
        for lv in l.basis() {
            let left = GenSection::from_coords(s.frame(), lv).expect("basis coords");
            for right in &e10_sections {
                let bracket = courant_bracket(&left, right, use_twist)?;
                if !e10.contains(&bracket.coords())? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
