//! Bridges from classical tensor data to generalized structures, and the
//! product constructions.
//!
//! Classical tensors live on the same invariant frames as the generalized
//! ones, so closedness of the distinguished one- and two-forms is decided
//! by the frame calculus.

use crate::exactalg::{Matrix, Scalar, Subspace};
use crate::frame::{
    pairing, product_context, FrameContext, GenSection, InvariantForm,
    ProductContext,
};
use crate::structures::{
    check_metric, compose_gphi, eigenbundle_e10, is_cokahler, is_generalized_kahler,
    BigOperator, GenAlmostContact, GenContactMetric, GenMetric,
};
use crate::{CheckItem, CheckReport, Error};
use std::sync::Arc;

/// Classical almost contact metric data `(φ, ξ, η, g)` on an invariant
/// frame: `φ² = −Id + ξ⊗η`, `η(ξ) = 1`, `g` a compatible Riemannian metric.
#[derive(Clone, Debug)]
pub struct ClassicalAcm {
    frame: Arc<FrameContext>,
    phi: Matrix,
    xi: Vec<Scalar>,
    eta: Vec<Scalar>,
    g: Matrix,
}

impl ClassicalAcm {
    pub fn new(
        frame: &Arc<FrameContext>,
        phi: Matrix,
        xi: Vec<Scalar>,
        eta: Vec<Scalar>,
        g: Matrix,
    ) -> Result<Self, Error> {
        let n = frame.dim();
        if phi.rows() != n || phi.cols() != n || g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: phi.rows() });
        }
        if xi.len() != n || eta.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: xi.len() });
        }
        Ok(ClassicalAcm { frame: Arc::clone(frame), phi, xi, eta, g })
    }

    pub fn frame(&self) -> &Arc<FrameContext> {
        &self.frame
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn xi(&self) -> &[Scalar] {
        &self.xi
    }

    pub fn eta(&self) -> &[Scalar] {
        &self.eta
    }

    pub fn metric(&self) -> &Matrix {
        &self.g
    }

    pub fn eta_form(&self) -> InvariantForm {
        InvariantForm::from_one_form(&self.frame, &self.eta)
    }

    fn xi_section(&self) -> GenSection {
        GenSection::new(&self.frame, self.xi.clone(), vec![Scalar::zero(); self.frame.dim()])
            .expect("validated lengths")
    }

    fn eta_section(&self) -> GenSection {
        GenSection::new(&self.frame, vec![Scalar::zero(); self.frame.dim()], self.eta.clone())
            .expect("validated lengths")
    }
}

fn outer(col: &[Scalar], row: &[Scalar]) -> Matrix {
    Matrix::from_fn(col.len(), row.len(), |r, c| &col[r] * &row[c])
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

/// The classical axioms, one item each.
pub fn check_acm(a: &ClassicalAcm) -> CheckReport {
    let mut report = CheckReport::new();
    let n = a.frame.dim();

    let lhs = a.phi.mul(&a.phi);
    let rhs = Matrix::identity(n).neg().add(&outer(&a.xi, &a.eta));
    if lhs == rhs {
        report.push(CheckItem::pass("phi_squared"));
    } else {
        report.push(CheckItem::fail("phi_squared", "φ² ≠ -Id + ξ⊗η"));
    }

    let pair = dot(&a.eta, &a.xi);
    if pair.is_one() {
        report.push(CheckItem::pass("reeb_normalization"));
    } else {
        report.push(CheckItem::fail("reeb_normalization", format!("η(ξ) = {pair}")));
    }

    match crate::exactalg::is_positive_definite(&a.g) {
        Ok(true) => report.push(CheckItem::pass("metric_positive")),
        Ok(false) => report.push(CheckItem::fail("metric_positive", "g is not positive definite")),
        Err(e) => report.push(CheckItem::fail("metric_positive", e.to_string())),
    }

    let compat_lhs = a.phi.transpose().mul(&a.g).mul(&a.phi);
    let compat_rhs = a.g.sub(&outer(&a.eta, &a.eta));
    if compat_lhs == compat_rhs {
        report.push(CheckItem::pass("metric_compatibility"));
    } else {
        report.push(CheckItem::fail(
            "metric_compatibility",
            "g(φX, φY) ≠ g(X,Y) - η(X)η(Y)",
        ));
    }

    report
}

fn require_acm(a: &ClassicalAcm) -> Result<(), Error> {
    let report = check_acm(a);
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|i| i.name.as_str()).collect();
        Err(Error::Axioms(names.join(", ")))
    }
}

/// Fundamental two-form `Ω(X, Y) = g(X, φY)`; antisymmetry is a consequence
/// of compatibility and is asserted.
pub fn fundamental_form(a: &ClassicalAcm) -> Result<InvariantForm, Error> {
    require_acm(a)?;
    let gphi = a.g.mul(&a.phi);
    if gphi.transpose() != gphi.neg() {
        return Err(Error::Axioms("fundamental form is not antisymmetric".into()));
    }
    let n = a.frame.dim();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            terms.push((vec![i, j], gphi.at(i, j).clone()));
        }
    }
    InvariantForm::new(&a.frame, 2, &terms)
}

/// Witness for a failed normality check: the frame pair and both sides.
#[derive(Clone, Debug)]
pub struct NijenhuisWitness {
    pub i: usize,
    pub j: usize,
    pub torsion: Vec<Scalar>,
    pub expected: Vec<Scalar>,
}

/// Normality of the classical structure: the torsion
/// `N_φ(X,Y) = [φX, φY] + φ²[X,Y] − φ[X, φY] − φ[φX, Y]` must cancel the
/// `dη` correction on every frame pair.  The exterior derivative here
/// carries no 1/2 normalization, which absorbs the factor two that rides
/// along with `dη` in conventions that do normalize; the condition checked
/// is `N_φ(X_i, X_j) + dη(X_i, X_j)·ξ = 0`.
pub fn nijenhuis_normal(a: &ClassicalAcm) -> Result<(bool, Option<NijenhuisWitness>), Error> {
    require_acm(a)?;
    let n = a.frame.dim();
    let d_eta = a.eta_form().exterior_derivative();
    let basis = |i: usize| -> Vec<Scalar> {
        (0..n).map(|t| if t == i { Scalar::one() } else { Scalar::zero() }).collect()
    };
    for i in 0..n {
        for j in i + 1..n {
            let xi_vec = basis(i);
            let xj_vec = basis(j);
            let phi_xi = a.phi.mul_vec(&xi_vec);
            let phi_xj = a.phi.mul_vec(&xj_vec);
            let mut torsion = a.frame.lie_bracket(&phi_xi, &phi_xj);
            let sq = a.phi.mul(&a.phi).mul_vec(&a.frame.lie_bracket(&xi_vec, &xj_vec));
            let t3 = a.phi.mul_vec(&a.frame.lie_bracket(&xi_vec, &phi_xj));
            let t4 = a.phi.mul_vec(&a.frame.lie_bracket(&phi_xi, &xj_vec));
            for k in 0..n {
                torsion[k] = &torsion[k] + &sq[k] - &t3[k] - &t4[k];
            }
            let coeff = d_eta.eval(&[&xi_vec, &xj_vec])?;
            let expected: Vec<Scalar> = a.xi.iter().map(|x| -(&coeff * x)).collect();
            if torsion != expected {
                return Ok((false, Some(NijenhuisWitness { i, j, torsion, expected })));
            }
        }
    }
    Ok((true, None))
}

/// Lift classical data to the block-diagonal generalized triple
/// `Φ = [[φ, 0], [0, −φ*]]`, `E₊ = ξ`, `E₋ = η`.
pub fn gac_from_acm(a: &ClassicalAcm) -> Result<GenAlmostContact, Error> {
    require_acm(a)?;
    let n = a.frame.dim();
    let zero = Matrix::zeros(n, n);
    let phi = BigOperator::from_blocks(
        &a.frame,
        &a.phi,
        &zero,
        &zero,
        &a.phi.transpose().neg(),
    )?;
    GenAlmostContact::new(phi, a.xi_section(), a.eta_section())
}

/// Lift a contact form: `ρ(X) = ι_X dη − η(X)η` must be invertible, the
/// induced bivector fills the upper-right block, `dη` the lower-left, and
/// the distinguished sections are `E₊ = η`, `E₋ = ξ`.
pub fn gac_from_contact(
    frame: &Arc<FrameContext>,
    eta: &[Scalar],
    xi: &[Scalar],
) -> Result<GenAlmostContact, Error> {
    let n = frame.dim();
    if eta.len() != n || xi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: eta.len() });
    }
    let eta_form = InvariantForm::from_one_form(frame, eta);
    let d_eta = eta_form.exterior_derivative();
    if !d_eta.interior_product(xi)?.is_zero() {
        return Err(Error::Axioms("ι_ξ dη ≠ 0".into()));
    }
    if !dot(eta, xi).is_one() {
        return Err(Error::Axioms("η(ξ) ≠ 1".into()));
    }

    let basis = |i: usize| -> Vec<Scalar> {
        (0..n).map(|t| if t == i { Scalar::one() } else { Scalar::zero() }).collect()
    };
    let mut rho = Matrix::zeros(n, n);
    for j in 0..n {
        let col = d_eta.interior_product(&basis(j))?.one_form_coords();
        for r in 0..n {
            rho.set(r, j, &col[r] - &(&eta[j] * &eta[r]));
        }
    }
    let rho_inv = rho.inverse().ok_or(Error::NotInvertible("the contact isomorphism"))?;

    // β(π♯ α) = dη(ρ⁻¹α, ρ⁻¹β)
    let columns: Vec<Vec<Scalar>> =
        (0..n).map(|j| (0..n).map(|r| rho_inv.at(r, j).clone()).collect()).collect();
    let mut pi = Matrix::zeros(n, n);
    for j in 0..n {
        for l in 0..n {
            pi.set(l, j, d_eta.eval(&[&columns[j], &columns[l]])?);
        }
    }

    let mut d_eta_flat = Matrix::zeros(n, n);
    for j in 0..n {
        let col = d_eta.interior_product(&basis(j))?.one_form_coords();
        for r in 0..n {
            d_eta_flat.set(r, j, col[r].clone());
        }
    }

    let zero = Matrix::zeros(n, n);
    let phi = BigOperator::from_blocks(frame, &zero, &pi, &d_eta_flat, &zero)?;
    let e_plus = GenSection::new(frame, vec![Scalar::zero(); n], eta.to_vec())?;
    let e_minus = GenSection::new(frame, xi.to_vec(), vec![Scalar::zero(); n])?;
    GenAlmostContact::new(phi, e_plus, e_minus)
}

/// A classical complex structure on the frame's tangent space.
#[derive(Clone, Debug)]
pub struct ClassicalComplex {
    pub frame: Arc<FrameContext>,
    pub j: Matrix,
}

/// A classical symplectic structure: a closed nondegenerate two-form.
#[derive(Clone, Debug)]
pub struct ClassicalSymplectic {
    pub frame: Arc<FrameContext>,
    pub omega: InvariantForm,
}

/// `[[−J, 0], [0, J*]]`.
pub fn gcx_from_complex(c: &ClassicalComplex) -> Result<BigOperator, Error> {
    let n = c.frame.dim();
    if c.j.mul(&c.j) != Matrix::identity(n).neg() {
        return Err(Error::Axioms("J² ≠ -Id".into()));
    }
    let zero = Matrix::zeros(n, n);
    BigOperator::from_blocks(&c.frame, &c.j.neg(), &zero, &zero, &c.j.transpose())
}

/// `[[J, 0], [0, −J*]]`, the opposite-orientation tangent embedding; used
/// to compare the tangent-product complex structure with the generalized
/// product.
pub fn embed_tangent_complex(
    frame: &Arc<FrameContext>,
    j: &Matrix,
) -> Result<BigOperator, Error> {
    let n = frame.dim();
    if j.mul(j) != Matrix::identity(n).neg() {
        return Err(Error::Axioms("J² ≠ -Id".into()));
    }
    let zero = Matrix::zeros(n, n);
    BigOperator::from_blocks(frame, j, &zero, &zero, &j.transpose().neg())
}

/// `[[0, −ω⁻¹], [ω, 0]]`.
pub fn gcx_from_symplectic(s: &ClassicalSymplectic) -> Result<BigOperator, Error> {
    let n = s.frame.dim();
    if s.omega.degree() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: s.omega.degree() });
    }
    if !s.omega.exterior_derivative().is_zero() {
        return Err(Error::NotClosed);
    }
    let basis = |i: usize| -> Vec<Scalar> {
        (0..n).map(|t| if t == i { Scalar::one() } else { Scalar::zero() }).collect()
    };
    let mut flat = Matrix::zeros(n, n);
    for j in 0..n {
        let col = s.omega.interior_product(&basis(j))?.one_form_coords();
        for r in 0..n {
            flat.set(r, j, col[r].clone());
        }
    }
    let inv = flat.inverse().ok_or(Error::NotInvertible("the symplectic form"))?;
    let zero = Matrix::zeros(n, n);
    BigOperator::from_blocks(&s.frame, &zero, &inv.neg(), &flat, &zero)
}

/// The generalized triple and metric induced by classical almost contact
/// metric data: block-diagonal `Φ`, sections `ξ` and `η`, and the metric
/// `[[0, g⁻¹], [g, 0]]`.
pub fn cokahler_triple(a: &ClassicalAcm) -> Result<GenContactMetric, Error> {
    let base = gac_from_acm(a)?;
    let g_inv = a.g.inverse().ok_or(Error::NotInvertible("the Riemannian metric"))?;
    let n = a.frame.dim();
    let zero = Matrix::zeros(n, n);
    let g = BigOperator::from_blocks(&a.frame, &zero, &g_inv, &a.g, &zero)?;
    GenContactMetric::new(base, GenMetric::new(g)?)
}

/// The off-diagonal companion operator of a classical triple: lower-left is
/// the second-slot flat of the fundamental form, upper-right its
/// `g⁻¹`-transport.  Coincides with `G·Φ` of [`cokahler_triple`].
pub fn phi_omega(a: &ClassicalAcm) -> Result<BigOperator, Error> {
    let omega = fundamental_form(a)?;
    let n = a.frame.dim();
    let mut flat = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i < j {
                flat.set(i, j, omega.coefficient(&[i, j]));
            } else if i > j {
                flat.set(i, j, -omega.coefficient(&[j, i]));
            }
        }
    }
    let g_inv = a.g.inverse().ok_or(Error::NotInvertible("the Riemannian metric"))?;
    let sharp = g_inv.mul(&flat).mul(&g_inv);
    let zero = Matrix::zeros(n, n);
    BigOperator::from_blocks(&a.frame, &zero, &sharp, &flat, &zero)
}

/// The tangent complex structure on a product of two classical structures:
/// `J(X, Y) = (φ₁X − η₂(Y)ξ₁, φ₂Y + η₁(X)ξ₂)`.
pub fn morimoto_j(
    a1: &ClassicalAcm,
    a2: &ClassicalAcm,
) -> Result<(ProductContext, Matrix), Error> {
    require_acm(a1)?;
    require_acm(a2)?;
    let pc = product_context(a1.frame(), a2.frame())?;
    let (n1, n2) = (a1.frame.dim(), a2.frame.dim());
    let n = n1 + n2;
    let mut j = Matrix::zeros(n, n);
    for col in 0..n1 {
        let phi_col: Vec<Scalar> = (0..n1).map(|r| a1.phi.at(r, col).clone()).collect();
        for r in 0..n1 {
            j.set(r, col, phi_col[r].clone());
        }
        for r in 0..n2 {
            j.set(n1 + r, col, &a1.eta[col] * &a2.xi[r]);
        }
    }
    for col in 0..n2 {
        for r in 0..n1 {
            j.set(r, n1 + col, -(&a2.eta[col] * &a1.xi[r]));
        }
        for r in 0..n2 {
            j.set(n1 + r, n1 + col, a2.phi.at(r, col).clone());
        }
    }
    Ok((pc, j))
}

fn basis_sections(frame: &Arc<FrameContext>) -> Vec<GenSection> {
    let n = frame.dim();
    (0..2 * n)
        .map(|k| {
            let coords: Vec<Scalar> =
                (0..2 * n).map(|t| if t == k { Scalar::one() } else { Scalar::zero() }).collect();
            GenSection::from_coords(frame, &coords).expect("basis coords")
        })
        .collect()
}

fn scaled_pair(coeff: Scalar, section: &GenSection) -> GenSection {
    section.scale(&coeff)
}

/// The generalized almost complex structure induced on a product by two
/// generalized almost contact factors.
pub fn product_j1(
    pc: &ProductContext,
    s1: &GenAlmostContact,
    s2: &GenAlmostContact,
) -> Result<BigOperator, Error> {
    if **s1.frame() != **pc.factor(0) || **s2.frame() != **pc.factor(1) {
        return Err(Error::FrameMismatch);
    }
    let frame = pc.frame();
    let n = frame.dim();
    let two = Scalar::from_int(2);
    let mut mat = Matrix::zeros(2 * n, 2 * n);
    for (col, basis) in basis_sections(frame).iter().enumerate() {
        let (u1, u2) = pc.split_section(basis)?;
        let mut first = s1.phi().apply(&u1)?;
        for (e2, e1) in [(s2.e_plus(), s1.e_plus()), (s2.e_minus(), s1.e_minus())] {
            let coeff = &two * &pairing(e2, &u2)?;
            first = first.sub(&scaled_pair(coeff, e1))?;
        }
        let mut second = s2.phi().apply(&u2)?;
        for (e1, e2) in [(s1.e_plus(), s2.e_plus()), (s1.e_minus(), s2.e_minus())] {
            let coeff = &two * &pairing(e1, &u1)?;
            second = second.add(&scaled_pair(coeff, e2))?;
        }
        let image = pc.embed_section(0, &first)?.add(&pc.embed_section(1, &second)?)?;
        for (r, v) in image.coords().into_iter().enumerate() {
            mat.set(r, col, v);
        }
    }
    BigOperator::from_matrix(frame, mat)
}

/// The block product metric on the product frame.
pub fn product_metric(
    pc: &ProductContext,
    g1: &GenMetric,
    g2: &GenMetric,
) -> Result<GenMetric, Error> {
    if **g1.operator().frame() != **pc.factor(0) || **g2.operator().frame() != **pc.factor(1) {
        return Err(Error::FrameMismatch);
    }
    let m1 = pc.embed_operator_matrix(0, g1.operator().matrix());
    let m2 = pc.embed_operator_matrix(1, g2.operator().matrix());
    GenMetric::new(BigOperator::from_matrix(pc.frame(), m1.add(&m2))?)
}

/// The second product structure `J₂ = G·J₁` together with the generator
/// families of its `+i` eigenspace: the embedded eigenbundles of the two
/// companion triples and the crossed sections `(E_{±,1}, −i E_{±,2})`.
pub fn product_j2(
    pc: &ProductContext,
    t1: &GenContactMetric,
    t2: &GenContactMetric,
) -> Result<(BigOperator, Vec<GenSection>), Error> {
    let j1 = product_j1(pc, t1.base(), t2.base())?;
    let g = product_metric(pc, t1.metric(), t2.metric())?;
    let j2 = g.operator().compose(&j1)?;

    let mut generators = Vec::new();
    for (side, t) in [(0usize, t1), (1usize, t2)] {
        let companion = compose_gphi(t)?;
        for v in eigenbundle_e10(&companion).basis() {
            let section = GenSection::from_coords(t.frame(), v)?;
            generators.push(pc.embed_section(side, &section)?);
        }
    }
    let minus_i = -Scalar::i();
    for (a, b) in [
        (t1.base().e_plus(), t2.base().e_plus()),
        (t1.base().e_minus(), t2.base().e_minus()),
    ] {
        let left = pc.embed_section(0, a)?;
        let right = pc.embed_section(1, &b.scale(&minus_i))?;
        generators.push(left.add(&right)?);
    }
    Ok((j2, generators))
}

/// Product of a generalized Kähler pair with a generalized coKähler triple:
/// `Φ = (J₁, Φ_N)`, sections from the second factor, block metric.  Both
/// preconditions are verified before the output triple is assembled and
/// re-validated.
pub fn product_gk_gcok(
    j1m: &BigOperator,
    j2m: &BigOperator,
    twist_m: bool,
    t: &GenContactMetric,
    twist_n: bool,
) -> Result<(ProductContext, GenContactMetric), Error> {
    let gk = is_generalized_kahler(j1m, j2m, twist_m)?;
    if !gk.verdict() {
        return Err(Error::Axioms("the first factor is not generalized Kähler".into()));
    }
    if !is_cokahler(t, twist_n)? {
        return Err(Error::Axioms("the second factor is not generalized coKähler".into()));
    }
    let pc = product_context(j1m.frame(), t.frame())?;
    let g_m = j1m.compose(j2m)?.neg();

    let phi_mat = pc
        .embed_operator_matrix(0, j1m.matrix())
        .add(&pc.embed_operator_matrix(1, t.base().phi().matrix()));
    let phi = BigOperator::from_matrix(pc.frame(), phi_mat)?;
    let e_plus = pc.embed_section(1, t.base().e_plus())?;
    let e_minus = pc.embed_section(1, t.base().e_minus())?;
    let g_mat = pc
        .embed_operator_matrix(0, g_m.matrix())
        .add(&pc.embed_operator_matrix(1, t.metric().operator().matrix()));
    let metric = GenMetric::new(BigOperator::from_matrix(pc.frame(), g_mat)?)?;
    let triple = GenContactMetric::new(GenAlmostContact::new(phi, e_plus, e_minus)?, metric)?;
    Ok((pc, triple))
}

/// Sanity check used by callers wiring `J₂` by hand: the eigenspace of the
/// returned operator must equal the span of the returned generators.
pub fn eigenspace_matches_generators(
    j2: &BigOperator,
    generators: &[GenSection],
) -> Result<bool, Error> {
    let spans: Vec<Vec<Scalar>> = generators.iter().map(GenSection::coords).collect();
    let span = Subspace::from_spans(2 * j2.frame().dim(), &spans)?;
    Ok(span == crate::exactalg::eigenspace(j2.matrix(), &Scalar::i()))
}

/// Everything `check_metric` validates, exposed for product metrics built
/// outside `GenMetric::new`.
pub fn metric_report(g: &BigOperator) -> CheckReport {
    check_metric(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{
        check_gac, classify_contact, is_normal, lemma42_check, GcxClass,
    };

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn su2() -> Arc<FrameContext> {
        FrameContext::new(3, "su2", &[(0, 1, 2, s(-1)), (1, 2, 0, s(-1)), (0, 2, 1, s(1))])
            .unwrap()
            .shared()
    }

    fn rotation_phi() -> Matrix {
        let mut phi = Matrix::zeros(3, 3);
        phi.set(1, 0, s(1));
        phi.set(0, 1, s(-1));
        phi
    }

    fn su2_acm() -> ClassicalAcm {
        let f = su2();
        ClassicalAcm::new(
            &f,
            rotation_phi(),
            vec![s(0), s(0), s(1)],
            vec![s(0), s(0), s(1)],
            Matrix::identity(3),
        )
        .unwrap()
    }

    fn t3_acm() -> ClassicalAcm {
        let f = FrameContext::abelian(3, "t3").unwrap().shared();
        ClassicalAcm::new(
            &f,
            rotation_phi(),
            vec![s(0), s(0), s(1)],
            vec![s(0), s(0), s(1)],
            Matrix::identity(3),
        )
        .unwrap()
    }

    /// Transverse rotation on the nilpotent frame `[X1, X2] = X3`: an
    /// almost contact metric structure with closed η and Ω that is not
    /// normal.
    fn heisenberg_acm() -> ClassicalAcm {
        let f = FrameContext::new(3, "heis", &[(0, 1, 2, s(1))]).unwrap().shared();
        let mut phi = Matrix::zeros(3, 3);
        phi.set(2, 1, s(1));
        phi.set(1, 2, s(-1));
        ClassicalAcm::new(
            &f,
            phi,
            vec![s(1), s(0), s(0)],
            vec![s(1), s(0), s(0)],
            Matrix::identity(3),
        )
        .unwrap()
    }

    fn s1_acm() -> ClassicalAcm {
        let f = FrameContext::abelian(1, "s1").unwrap().shared();
        ClassicalAcm::new(&f, Matrix::zeros(1, 1), vec![s(1)], vec![s(1)], Matrix::identity(1))
            .unwrap()
    }

    #[test]
    fn classical_axioms_hold_on_the_catalog_data() {
        for acm in [su2_acm(), t3_acm(), heisenberg_acm(), s1_acm()] {
            assert!(check_acm(&acm).passed());
        }
    }

    #[test]
    fn fundamental_form_of_the_rotations() {
        let omega = fundamental_form(&su2_acm()).unwrap();
        // Ω(X1, X2) = g(X1, φX2) = -1
        assert_eq!(omega.coefficient(&[0, 1]), s(-1));
        assert_eq!(omega.coefficient(&[0, 2]), s(0));
        assert_eq!(omega.coefficient(&[1, 2]), s(0));

        let omega_flat = fundamental_form(&t3_acm()).unwrap();
        assert_eq!(omega_flat.coefficient(&[0, 1]), s(-1));
        assert!(omega_flat.exterior_derivative().is_zero());

        // Ω(ξ, ·) = 0 since φξ = 0
        let xi = [s(0), s(0), s(1)];
        assert!(omega.interior_product(&xi).unwrap().is_zero());
    }

    #[test]
    fn normality_of_the_three_classical_instances() {
        let (ok, witness) = nijenhuis_normal(&su2_acm()).unwrap();
        assert!(ok, "sphere data must be normal: {witness:?}");
        let (ok, _) = nijenhuis_normal(&t3_acm()).unwrap();
        assert!(ok);
        let (ok, witness) = nijenhuis_normal(&heisenberg_acm()).unwrap();
        assert!(!ok);
        let witness = witness.unwrap();
        assert_eq!((witness.i, witness.j), (0, 1));
        assert_eq!(witness.torsion, vec![s(0), s(0), s(-1)]);
        assert_eq!(witness.expected, vec![s(0), s(0), s(0)]);
    }

    #[test]
    fn lifted_triples_satisfy_the_generalized_axioms() {
        for acm in [su2_acm(), t3_acm(), heisenberg_acm(), s1_acm()] {
            let gac = gac_from_acm(&acm).unwrap();
            assert!(check_gac(gac.phi(), gac.e_plus(), gac.e_minus()).passed());
        }
    }

    #[test]
    fn flat_torus_lift_is_strong_and_normal() {
        let gac = gac_from_acm(&t3_acm()).unwrap();
        assert!(classify_contact(&gac, false).unwrap().is_strong());
        assert!(is_normal(&gac, false).unwrap());
    }

    #[test]
    fn contact_lift_reproduces_the_sphere_bivector() {
        let f = su2();
        let eta = [s(0), s(0), s(1)];
        let xi = [s(0), s(0), s(1)];
        let gac = gac_from_contact(&f, &eta, &xi).unwrap();

        // the bivector block agrees with the rotation
        let blocks = gac.phi().blocks();
        assert_eq!(blocks[1], rotation_phi());
        // the lower-left block is the flat of dη = σ1∧σ2
        assert_eq!(blocks[2], rotation_phi());
        assert!(blocks[0].is_zero());
        assert!(blocks[3].is_zero());

        let class = classify_contact(&gac, false).unwrap();
        assert!(class.is_contact());
        assert!(!class.is_strong());
        assert!(!class.plus.involutive);
        assert!(class.minus.involutive);
        assert!(!is_normal(&gac, false).unwrap());
        assert_eq!(lemma42_check(&gac, false), Ok(false));
    }

    #[test]
    fn contact_lift_rejects_degenerate_forms() {
        let f = FrameContext::abelian(3, "t3").unwrap().shared();
        let eta = [s(0), s(0), s(1)];
        let xi = [s(0), s(0), s(1)];
        assert_eq!(
            gac_from_contact(&f, &eta, &xi).unwrap_err(),
            Error::NotInvertible("the contact isomorphism")
        );
    }

    #[test]
    fn flat_torus_pair_is_generalized_kahler() {
        let f = FrameContext::abelian(2, "t2").unwrap().shared();
        let mut j = Matrix::zeros(2, 2);
        j.set(1, 0, s(-1));
        j.set(0, 1, s(1));
        let jj = gcx_from_complex(&ClassicalComplex { frame: Arc::clone(&f), j }).unwrap();
        let omega = InvariantForm::new(&f, 2, &[(vec![0, 1], s(1))]).unwrap();
        let jw = gcx_from_symplectic(&ClassicalSymplectic { frame: Arc::clone(&f), omega })
            .unwrap();

        assert!(matches!(check_gcx(&jj, false).unwrap(), GcxClass::Integrable));
        assert!(matches!(check_gcx(&jw, false).unwrap(), GcxClass::Integrable));

        let report = is_generalized_kahler(&jj, &jw, false).unwrap();
        assert!(report.verdict());
        // the induced metric is the plain block swap
        let g = jj.compose(&jw).unwrap().neg();
        let n = f.dim();
        let id = Matrix::identity(n);
        let zero = Matrix::zeros(n, n);
        let swap = BigOperator::from_blocks(&f, &zero, &id, &id, &zero).unwrap();
        assert_eq!(g, swap);
    }

    use crate::structures::check_gcx;

    #[test]
    fn degenerate_symplectic_input_is_rejected() {
        let f = FrameContext::abelian(3, "t3").unwrap().shared();
        let omega = InvariantForm::new(&f, 2, &[(vec![0, 1], s(1))]).unwrap();
        assert_eq!(
            gcx_from_symplectic(&ClassicalSymplectic { frame: f, omega }).unwrap_err(),
            Error::NotInvertible("the symplectic form")
        );
    }

    #[test]
    fn cokahler_triple_splits_into_the_two_companions() {
        for acm in [t3_acm(), su2_acm()] {
            let triple = cokahler_triple(&acm).unwrap();
            let companion = compose_gphi(&triple).unwrap();
            let omega_op = phi_omega(&acm).unwrap();
            assert_eq!(companion.phi(), &omega_op);
        }
        assert!(is_cokahler(&cokahler_triple(&t3_acm()).unwrap(), false).unwrap());
        assert!(!is_cokahler(&cokahler_triple(&su2_acm()).unwrap(), false).unwrap());
    }

    #[test]
    fn sphere_bivector_agrees_with_the_contact_one() {
        // on this frame the fundamental-form transport and the contact
        // construction produce the same bivector block
        let omega_op = phi_omega(&su2_acm()).unwrap();
        let f = su2();
        let contact = gac_from_contact(&f, &[s(0), s(0), s(1)], &[s(0), s(0), s(1)]).unwrap();
        assert_eq!(omega_op.blocks()[1], contact.phi().blocks()[1]);
    }

    #[test]
    fn morimoto_tables() {
        let (pc, j) = morimoto_j(&s1_acm(), &s1_acm()).unwrap();
        assert_eq!(pc.frame().dim(), 2);
        // J(∂t1) = ∂t2, J(∂t2) = -∂t1
        assert_eq!(j.mul_vec(&[s(1), s(0)]), vec![s(0), s(1)]);
        assert_eq!(j.mul_vec(&[s(0), s(1)]), vec![s(-1), s(0)]);

        let (_, j) = morimoto_j(&su2_acm(), &s1_acm()).unwrap();
        assert_eq!(j.mul_vec(&[s(0), s(0), s(1), s(0)]), vec![s(0), s(0), s(0), s(1)]);
        assert_eq!(j.mul_vec(&[s(0), s(0), s(0), s(1)]), vec![s(0), s(0), s(-1), s(0)]);
        assert_eq!(j.mul_vec(&[s(1), s(0), s(0), s(0)]), vec![s(0), s(1), s(0), s(0)]);
        assert_eq!(j.mul(&j), Matrix::identity(4).neg());
    }

    #[test]
    fn product_j1_table_on_the_two_torus() {
        let triple = cokahler_triple(&s1_acm()).unwrap();
        let pc = product_context(triple.frame(), triple.frame()).unwrap();
        let j1 = product_j1(&pc, triple.base(), triple.base()).unwrap();

        let f = pc.frame();
        let dt1 = GenSection::basis_vector(f, 0);
        let dt2 = GenSection::basis_vector(f, 1);
        let s1f = GenSection::basis_form(f, 0);
        let s2f = GenSection::basis_form(f, 1);
        assert_eq!(j1.apply(&dt1).unwrap(), s2f);
        assert_eq!(j1.apply(&s1f).unwrap(), dt2);
        assert_eq!(j1.apply(&dt2).unwrap(), s1f.neg());
        assert_eq!(j1.apply(&s2f).unwrap(), dt1.neg());

        // skew and square checks hold for the product structure
        assert_eq!(j1.adjoint(), j1.neg());
        assert_eq!(j1.compose(&j1).unwrap(), BigOperator::identity(f).neg());

        let (j2, gens) = product_j2(&pc, &triple, &triple).unwrap();
        assert_eq!(j2.apply(&dt1).unwrap(), dt2);
        assert!(eigenspace_matches_generators(&j2, &gens).unwrap());

        let gk = is_generalized_kahler(&j1, &j2, false).unwrap();
        assert!(gk.verdict());
    }

    #[test]
    fn sphere_circle_product_has_the_embedded_witness() {
        let t_sphere = cokahler_triple(&su2_acm()).unwrap();
        let t_circle = cokahler_triple(&s1_acm()).unwrap();
        let pc = product_context(t_sphere.frame(), t_circle.frame()).unwrap();
        let j1 = product_j1(&pc, t_sphere.base(), t_circle.base()).unwrap();
        assert!(matches!(check_gcx(&j1, false).unwrap(), GcxClass::Integrable));

        let (j2, gens) = product_j2(&pc, &t_sphere, &t_circle).unwrap();
        assert!(eigenspace_matches_generators(&j2, &gens).unwrap());
        match check_gcx(&j2, false).unwrap() {
            GcxClass::Almost(witness) => {
                let (left, _) = pc.split_section(&witness.bracket).unwrap();
                assert_eq!(left, GenSection::basis_vector(t_sphere.frame(), 2).neg());
                let (_, right) = pc.split_section(&witness.bracket).unwrap();
                assert!(right.is_zero());
            }
            other => panic!("expected a non-integrable witness, got {other:?}"),
        }
        let gk = is_generalized_kahler(&j1, &j2, false).unwrap();
        assert!(!gk.verdict());
        assert!(gk.j1.is_integrable());
        assert!(!gk.j2.is_integrable());
    }

    #[test]
    fn morimoto_block_embedding_matches_the_swapped_product() {
        // with the labels of one factor swapped, the product operator is
        // exactly the tangent embedding of the product complex structure
        for (a1, a2) in [(s1_acm(), s1_acm()), (su2_acm(), s1_acm())] {
            let (pc, jm) = morimoto_j(&a1, &a2).unwrap();
            let s1 = gac_from_acm(&a1).unwrap();
            let s2 = gac_from_acm(&a2).unwrap();
            let swapped =
                GenAlmostContact::new(s2.phi().clone(), s2.e_minus().clone(), s2.e_plus().clone())
                    .unwrap();
            let j1 = product_j1(&pc, &s1, &swapped).unwrap();
            let embedded = embed_tangent_complex(pc.frame(), &jm).unwrap();
            assert_eq!(j1, embedded);
        }
    }

    #[test]
    fn gk_times_cokahler_is_cokahler() {
        let f = FrameContext::abelian(2, "t2").unwrap().shared();
        let mut j = Matrix::zeros(2, 2);
        j.set(1, 0, s(-1));
        j.set(0, 1, s(1));
        let jj = gcx_from_complex(&ClassicalComplex { frame: Arc::clone(&f), j }).unwrap();
        let omega = InvariantForm::new(&f, 2, &[(vec![0, 1], s(1))]).unwrap();
        let jw =
            gcx_from_symplectic(&ClassicalSymplectic { frame: Arc::clone(&f), omega }).unwrap();

        let circle = cokahler_triple(&s1_acm()).unwrap();
        let (pc, triple) = product_gk_gcok(&jj, &jw, false, &circle, false).unwrap();
        assert_eq!(pc.frame().dim(), 3);
        assert!(is_cokahler(&triple, false).unwrap());

        // five-dimensional variant: same pair times the flat torus triple
        let t3 = cokahler_triple(&t3_acm()).unwrap();
        let (pc5, triple5) = product_gk_gcok(&jj, &jw, false, &t3, false).unwrap();
        assert_eq!(pc5.frame().dim(), 5);
        assert!(is_cokahler(&triple5, false).unwrap());

        // a factor that is not coKähler is rejected
        let sphere = cokahler_triple(&su2_acm()).unwrap();
        assert!(matches!(
            product_gk_gcok(&jj, &jw, false, &sphere, false),
            Err(Error::Axioms(_))
        ));
    }
}
