//! Checks on `Λ = End(X ⊕ Y)` that follow from covariance, and the corner
//! criterion for projectivity of `SeS`.

use super::covariance::{check_covariance, CovarianceReport};
use super::{end_algebra, end_quotient, EndoError, ModuleHom};
use crate::algebra::{find_isomorphism, ideal_generated, quotient, Algebra, IsoVerdict};
use crate::exactla::{vecops, Mat, Q, Subspace};
use crate::homalg::ideals::corner_sides;
use crate::homalg::tensor_over;
use crate::modules::{is_projective, right_regular, AlgRef, Module};
use crate::verdict::Verdict;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

fn projective_or_zero(m: &Module) -> Result<bool, EndoError> {
    Ok(m.dim == 0 || is_projective(m)?)
}

/// `SeS` as a left (or right) `S`-module is projective.
fn ideal_projective(s: &AlgRef, j: &Subspace, side: Side) -> Result<bool, EndoError> {
    let m = match side {
        Side::Left => Module::regular(s).submodule(j)?.module,
        Side::Right => right_regular(s).1.submodule(j)?.module,
    };
    projective_or_zero(&m)
}

/// Dimensions for `μ: (1−e)Se ⊗_{eSe} eS(1−e) → (1−e)S(1−e)`:
/// the tensor product, the image, and `eS(1−e)` as a left `eSe`-module.
struct PeirceData {
    tensor_dim: usize,
    image_dim: usize,
    complement: Module,
}

fn peirce_data(s: &AlgRef, e: &[Q]) -> Result<PeirceData, EndoError> {
    let f = s.sub(s.unit(), e);
    let sides = corner_sides(s, e)?;
    let field = s.field();
    let pick = |space: &Subspace, vecs: Vec<Vec<Q>>| -> Subspace {
        let c: Vec<Vec<Q>> = vecs.iter().map(|v| space.coords(v).expect("stays in the corner side")).collect();
        Subspace::span(space.dim(), field, &c)
    };
    let fse_vecs: Vec<Vec<Q>> = sides.re.space.basis.iter().map(|v| s.mul(&f, v)).collect();
    let esf_vecs: Vec<Vec<Q>> = sides.er.space.basis.iter().map(|v| s.mul(v, &f)).collect();
    let fse = sides.re.module.submodule(&pick(&sides.re.space, fse_vecs.clone()))?;
    let esf = sides.er.module.submodule(&pick(&sides.er.space, esf_vecs.clone()))?;
    let t = tensor_over(&fse.module, &esf.module)?;
    let fse_s = Subspace::span(s.dim(), field, &fse_vecs);
    let esf_s = Subspace::span(s.dim(), field, &esf_vecs);
    let image = s.product_space(&fse_s, &esf_s);
    Ok(PeirceData { tensor_dim: t.dim, image_dim: image.dim(), complement: esf.module })
}

/// Both sides of the corner criterion, computed independently.
#[derive(Clone, Debug, Serialize)]
pub struct CornerCriterion {
    /// `SeS` is projective as a left `S`-module.
    pub ideal_projective: bool,
    /// `eS(1−e)` is projective as a left `eSe`-module.
    pub complement_projective: bool,
    pub tensor_dim: usize,
    pub image_dim: usize,
    /// The multiplication `(1−e)Se ⊗ eS(1−e) → (1−e)S(1−e)` is injective.
    pub multiplication_injective: bool,
    pub agree: bool,
}

impl CornerCriterion {
    pub fn right_side(&self) -> bool {
        self.complement_projective && self.multiplication_injective
    }
}

pub fn corner_criterion(s: &AlgRef, e: &[Q]) -> Result<CornerCriterion, EndoError> {
    if !s.is_idempotent(e) {
        return Err(crate::algebra::AlgError::NotIdempotent.into());
    }
    let trivial = vecops::is_zero(e) || e == s.unit().as_slice();
    let j = ideal_generated(s, &[e.to_vec()]).space;
    let left = ideal_projective(s, &j, Side::Left)?;
    let (complement_projective, tensor_dim, image_dim) = if trivial {
        (true, 0, 0)
    } else {
        let p = peirce_data(s, e)?;
        (projective_or_zero(&p.complement)?, p.tensor_dim, p.image_dim)
    };
    let multiplication_injective = tensor_dim == image_dim;
    let right = complement_projective && multiplication_injective;
    Ok(CornerCriterion { ideal_projective: left, complement_projective, tensor_dim, image_dim, multiplication_injective, agree: left == right })
}

/// One lemma instance: a hypothesis, its idempotent of `Λ`, and what follows.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub hypothesis: String,
    pub idempotent: String,
    pub side: Side,
    pub ideal_dim: usize,
    pub ideal_projective: bool,
    pub multiplication_injective: bool,
    /// `dim Λ/ΛeΛ`.
    pub quotient_dim: usize,
    /// `dim` of the endomorphism algebra modulo the factoring maps.
    pub expected_dim: usize,
    /// `Λ/ΛeΛ` against that quotient.
    pub quotient_iso: Verdict,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        self.ideal_projective && self.multiplication_injective && self.quotient_iso.is_yes()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub covariance: CovarianceReport,
    pub lambda_dim: usize,
    pub checks: Vec<LemmaCheck>,
}

fn iso_verdict(a: &Algebra, b: &Algebra, seed: u64, retries: usize) -> Verdict {
    if a.dim() != b.dim() {
        return Verdict::no(format!("dimensions {} and {}", a.dim(), b.dim()));
    }
    if a.dim() == 0 {
        return Verdict::yes("both zero");
    }
    match find_isomorphism(a, b, seed, retries) {
        IsoVerdict::Yes(_) => Verdict::yes("certified isomorphism"),
        IsoVerdict::No(why) => Verdict::no(why),
        IsoVerdict::Unknown => Verdict::unknown("no isomorphism found within the retry budget"),
    }
}

/// Builds `Λ = End(X ⊕ Y)` and checks, for each covariance property that
/// holds, the projectivity of the corresponding idempotent ideal, the
/// injectivity of the multiplication map, and the shape of `Λ/ΛeΛ`.
pub fn verify_factorization_lemmas(lambda: &ModuleHom, seed: u64, retries: usize) -> Result<FactorizationReport, EndoError> {
    let covariance = check_covariance(lambda)?;
    if !covariance.any() {
        return Err(EndoError::HypothesisNotEstablished("λ satisfies none of the four covariance conditions".into()));
    }
    let (x, y) = (&lambda.target, &lambda.source);
    let f = x.field();
    let sum = Module::direct_sum(&[x, y])?;
    let end = end_algebra(&sum)?;
    let lam = &end.algebra;
    let proj = |first: bool| {
        let mut m = Mat::zeros(sum.dim, sum.dim, f);
        let range = if first { 0..x.dim } else { x.dim..sum.dim };
        for i in range {
            m.set(i, i, Q::one());
        }
        end.coords(&m).expect("projections are endomorphisms")
    };
    let (e_x, e_y) = (proj(true), proj(false));
    let mut want = Vec::new();
    if covariance.covariant {
        want.push(("covariant", "e_Y", Side::Left));
    }
    if covariance.x_covariant {
        want.push(("X-covariant", "e_X", Side::Left));
    }
    if covariance.contravariant {
        want.push(("contravariant", "e_X", Side::Right));
    }
    if covariance.y_contravariant {
        want.push(("Y-contravariant", "e_Y", Side::Right));
    }
    let mut checks = Vec::new();
    for (hypothesis, which, side) in want {
        let e = if which == "e_Y" { &e_y } else { &e_x };
        // Λ/Λe_YΛ ≅ End(X) mod add(Y); Λ/Λe_XΛ ≅ End(Y) mod add(X)
        let target = if which == "e_Y" { nonzero_quotient(x, y)? } else { nonzero_quotient(y, x)? };
        let j = ideal_generated(lam, &[e.clone()]).space;
        let ideal_projective = ideal_projective(lam, &j, side)?;
        let p = if vecops::is_zero(e) || e == lam.unit() { None } else { Some(peirce_data(lam, e)?) };
        let multiplication_injective = p.as_ref().map(|p| p.tensor_dim == p.image_dim).unwrap_or(true);
        let q = quotient(lam, &j);
        let quotient_iso = iso_verdict(&q, &target, seed, retries);
        checks.push(LemmaCheck {
            hypothesis: hypothesis.into(),
            idempotent: which.into(),
            side,
            ideal_dim: j.dim(),
            ideal_projective,
            multiplication_injective,
            quotient_dim: q.dim(),
            expected_dim: target.dim(),
            quotient_iso,
        });
    }
    Ok(FactorizationReport { covariance, lambda_dim: lam.dim(), checks })
}

fn nonzero_quotient(x: &Module, y: &Module) -> Result<Algebra, EndoError> {
    if x.dim == 0 {
        return Ok(Algebra::new_unchecked(x.field(), 0, Vec::new(), Vec::new(), None, crate::algebra::Provenance::Derived("zero".into()))?);
    }
    end_quotient(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::families::{ground, matrix_algebra};
    use crate::exactla::FieldSpec;
    use crate::modules::testmod::*;

    #[test]
    fn corner_criterion_examples() {
        let t = t();
        let c = corner_criterion(&t, &basis(&t, "e11")).unwrap();
        assert!(c.ideal_projective && c.right_side() && c.agree);
        let a = a5();
        // the opposite side carries the non-projective ideal
        let op = arc(crate::algebra::opposite(&a));
        let c = corner_criterion(&op, &basis(&op, "e1")).unwrap();
        assert!(!c.ideal_projective && !c.right_side() && c.agree, "{:?}", c);
        let c = corner_criterion(&a, &a.unit().clone()).unwrap();
        assert!(c.ideal_projective && c.right_side());
        let c = corner_criterion(&a, &a.zero()).unwrap();
        assert!(c.ideal_projective && c.right_side());
        let m2 = arc(matrix_algebra(&ground(FieldSpec::Rationals), 2));
        assert!(corner_criterion(&m2, &basis(&m2, "e11")).unwrap().agree);
    }

    #[test]
    fn corner_criterion_agrees_on_small_algebras() {
        for a in [t(), a5(), b7(), dual()] {
            for s in [a.clone(), arc(crate::algebra::opposite(&a))] {
                for i in 0..s.dim() {
                    let e = s.basis(i);
                    if s.is_idempotent(&e) {
                        assert!(corner_criterion(&s, &e).unwrap().agree);
                    }
                }
            }
        }
    }

    #[test]
    fn idempotent_ideal_pipeline() {
        let t = t();
        let reg = Module::regular(&t);
        let j = ideal_generated(&t, &[basis(&t, "e11")]).space;
        let r = verify_factorization_lemmas(&ModuleHom::inclusion(&reg, &j).unwrap(), 0, 32).unwrap();
        let cov = r.checks.iter().find(|c| c.hypothesis == "covariant").unwrap();
        assert!(cov.holds(), "{:?}", cov);
        assert_eq!(cov.quotient_dim, 1);
        assert!(r.checks.iter().all(|c| c.holds()), "{:?}", r.checks);
    }

    #[test]
    fn identity_pipeline() {
        let t = t();
        let reg = Module::regular(&t);
        let r = verify_factorization_lemmas(&ModuleHom::identity(&reg), 0, 32).unwrap();
        for c in &r.checks {
            assert!(c.holds());
            assert_eq!(c.quotient_dim, 0);
            assert_eq!(c.ideal_dim, r.lambda_dim);
        }
    }

    #[test]
    fn socle_pipeline_gives_a5() {
        let r = dual();
        let reg = Module::regular(&r);
        let inc = ModuleHom::inclusion(&reg, &reg.socle().unwrap()).unwrap();
        let rep = verify_factorization_lemmas(&inc, 0, 32).unwrap();
        assert_eq!(rep.lambda_dim, 5);
        let cov = rep.checks.iter().find(|c| c.hypothesis == "covariant").unwrap();
        assert!(cov.holds(), "{:?}", cov);
        let sum = Module::direct_sum(&[&reg, &inc.source]).unwrap();
        let lam = end_algebra(&sum).unwrap();
        assert!(find_isomorphism(&lam.algebra, &a5(), 0, 32).is_yes());
    }

    #[test]
    fn no_hypothesis_is_an_error() {
        let t = t();
        let reg = Module::regular(&t);
        let z = ModuleHom::new(reg.clone(), reg.clone(), Mat::zeros(3, 3, t.field())).unwrap();
        assert!(matches!(verify_factorization_lemmas(&z, 0, 8), Err(EndoError::HypothesisNotEstablished(_))));
    }
}
