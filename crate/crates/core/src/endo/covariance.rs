//! Covariance conditions on `λ: Y → X`, decided by exact linear systems.
//!
//! All four conditions reduce to one routine on a morphism: injectivity of
//! `Hom(X, λ)`, a module-map section of `Hom(Y, λ)`, and a module-map
//! retraction of `Hom(X, λ)`. The contravariant conditions are the
//! covariant ones for the transposed map `DX → DY` over the opposite algebra.

use super::{hom_basis, EndoError, MatBasis, ModuleHom};
use crate::algebra::opposite;
use crate::exactla::{solve_linear, vecops, Mat, Q, Solution};
use serde::Serialize;
use std::sync::Arc;

/// A condition that failed, with a concrete vector showing it.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub condition: String,
    pub detail: String,
    /// A kernel element, a vector outside an image, or a row combination
    /// certifying that a linear system is inconsistent.
    pub vector: Vec<Q>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Witnesses {
    /// `γ: Hom(Y,X) → End(Y)` with `Hom(Y,λ)∘γ = id`, in hom coordinates.
    pub section: Option<Mat>,
    /// `ρ: End(X) → Hom(X,Y)` with `ρ∘Hom(X,λ) = id`.
    pub retraction: Option<Mat>,
    /// The section for the transposed map.
    pub dual_section: Option<Mat>,
    /// The retraction for the transposed map.
    pub dual_retraction: Option<Mat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceReport {
    pub covariant: bool,
    pub x_covariant: bool,
    pub contravariant: bool,
    pub y_contravariant: bool,
    pub witnesses: Witnesses,
    pub failures: Vec<Failure>,
}

impl CovarianceReport {
    pub fn any(&self) -> bool {
        self.covariant || self.x_covariant || self.contravariant || self.y_contravariant
    }
}

/// One equation `Σ L·X·R = C` in an unknown matrix `X`.
pub(crate) struct MatEq {
    pub terms: Vec<(Mat, Mat)>,
    pub rhs: Mat,
}

/// Solves a family of linear matrix equations for `X` (`rows × cols`).
/// On failure returns an inconsistency certificate when one is found.
pub(crate) fn solve_matrix_system(rows: usize, cols: usize, eqs: &[MatEq], f: crate::exactla::FieldSpec) -> Result<Mat, Option<Vec<Q>>> {
    let n = rows * cols;
    let mut coeff: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Vec<Q>> = Vec::new();
    for eq in eqs {
        for i in 0..eq.rhs.rows {
            for j in 0..eq.rhs.cols {
                let mut row = vecops::zero(n);
                for (l, r) in &eq.terms {
                    for a in 0..rows {
                        let la = l.get(i, a);
                        if la.is_zero() {
                            continue;
                        }
                        for b in 0..cols {
                            let rb = r.get(b, j);
                            if !rb.is_zero() {
                                f.fma(&mut row[a * cols + b], la, rb);
                            }
                        }
                    }
                }
                let c = eq.rhs.get(i, j).clone();
                if vecops::is_zero(&row) && c.is_zero() {
                    continue;
                }
                coeff.push(row);
                rhs.push(vec![c]);
            }
        }
    }
    if n == 0 {
        return if rhs.iter().all(|r| r[0].is_zero()) { Ok(Mat::zeros(rows, cols, f)) } else { Err(None) };
    }
    let a = Mat::from_rows(coeff, n, f);
    let b = Mat::from_rows(rhs, 1, f);
    match solve_linear(&a, &b).expect("consistent shapes") {
        Solution::Solved { particular, .. } => Ok(Mat::from_rows(particular.col(0).chunks(cols).map(|c| c.to_vec()).collect(), cols, f)),
        Solution::NoSolution { certificate } => Err(certificate),
    }
}

struct Core {
    injective: Result<(), Failure>,
    section: Result<Mat, Failure>,
    retraction: Result<Mat, Failure>,
}

/// Action matrices of `End(S)` on `space` by precomposition, one per basis element.
fn precomposition(space: &MatBasis, end: &MatBasis) -> Vec<Mat> {
    end.mats.iter().map(|s| space.matrix_of(space, |h| h.mul(s))).collect()
}

fn core(lambda: &ModuleHom, tag: &str) -> Result<Core, EndoError> {
    let (y, x, l) = (&lambda.source, &lambda.target, &lambda.matrix);
    let f = x.field();
    let xy = hom_basis(x, y)?;
    let xx = hom_basis(x, x)?;
    let yx = hom_basis(y, x)?;
    let yy = hom_basis(y, y)?;

    // Hom(X, λ): h ↦ "h then λ".
    let lx = xx.matrix_of(&xy, |h| l.mul(h));
    let kernel = lx.nullspace();
    let injective = match kernel.first() {
        None => Ok(()),
        Some(v) => Err(Failure {
            condition: format!("{}Hom(X,λ) injective", tag),
            detail: format!("a nonzero hom X → Y of coordinates {:?} dies after λ", v.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
            vector: v.clone(),
        }),
    };

    // Hom(Y, λ) as a map of left End(Y)-modules, and a section of it.
    let ly = yx.matrix_of(&yy, |s| l.mul(s));
    let section = if ly.rank() < yx.len() {
        let outside = (0..yx.len()).map(|i| vecops::unit(yx.len(), i)).find(|v| !crate::exactla::subspace::column_space(&ly).contains(v)).unwrap();
        Err(Failure { condition: format!("{}Hom(Y,λ) surjective", tag), detail: "a hom Y → X does not factor through λ".into(), vector: outside })
    } else {
        let (act_yx, act_yy) = (precomposition(&yx, &yy), precomposition(&yy, &yy));
        let (p, q) = (yx.len(), yy.len());
        let mut eqs: Vec<MatEq> = act_yx
            .iter()
            .zip(&act_yy)
            .map(|(a, b)| MatEq { terms: vec![(Mat::identity(q, f), a.clone()), (b.scale(&Q::from_i64(-1)), Mat::identity(p, f))], rhs: Mat::zeros(q, p, f) })
            .collect();
        eqs.push(MatEq { terms: vec![(ly.clone(), Mat::identity(p, f))], rhs: Mat::identity(p, f) });
        match solve_matrix_system(q, p, &eqs, f) {
            Ok(g) => {
                debug_assert!(ly.mul(&g).is_identity());
                Ok(g)
            }
            Err(cert) => Err(Failure {
                condition: format!("{}Hom(Y,λ) split as End(Y)-modules", tag),
                detail: "no End(Y)-linear section exists".into(),
                vector: cert.unwrap_or_default(),
            }),
        }
    };

    // Hom(X, λ) as a map of left End(X)-modules, and a retraction of it.
    let retraction = match &injective {
        Err(fail) => Err(Failure { condition: format!("{}Hom(X,λ) split mono", tag), detail: "not injective".into(), vector: fail.vector.clone() }),
        Ok(()) => {
            let (act_xy, act_xx) = (precomposition(&xy, &xx), precomposition(&xx, &xx));
            let (p, q) = (xy.len(), xx.len());
            let mut eqs: Vec<MatEq> = act_xx
                .iter()
                .zip(&act_xy)
                .map(|(c, d)| MatEq { terms: vec![(Mat::identity(p, f), c.clone()), (d.scale(&Q::from_i64(-1)), Mat::identity(q, f))], rhs: Mat::zeros(p, q, f) })
                .collect();
            eqs.push(MatEq { terms: vec![(Mat::identity(p, f), lx.clone())], rhs: Mat::identity(p, f) });
            solve_matrix_system(p, q, &eqs, f).map_err(|cert| Failure {
                condition: format!("{}Hom(X,λ) split as End(X)-modules", tag),
                detail: "no End(X)-linear retraction exists".into(),
                vector: cert.unwrap_or_default(),
            })
        }
    };
    Ok(Core { injective, section, retraction })
}

/// Re-checks a section or retraction from scratch.
fn verify_splitting(lambda: &ModuleHom, w: &Witnesses, dual: bool) -> Result<bool, EndoError> {
    let (y, x, l) = (&lambda.source, &lambda.target, &lambda.matrix);
    let (xy, xx, yx, yy) = (hom_basis(x, y)?, hom_basis(x, x)?, hom_basis(y, x)?, hom_basis(y, y)?);
    let (sec, ret) = if dual { (&w.dual_section, &w.dual_retraction) } else { (&w.section, &w.retraction) };
    if let Some(g) = sec {
        let ly = yx.matrix_of(&yy, |s| l.mul(s));
        if !ly.mul(g).is_identity() {
            return Ok(false);
        }
        let ok = precomposition(&yx, &yy).iter().zip(precomposition(&yy, &yy)).all(|(a, b)| g.mul(a) == b.mul(g));
        if !ok {
            return Ok(false);
        }
    }
    if let Some(r) = ret {
        let lx = xx.matrix_of(&xy, |h| l.mul(h));
        if !r.mul(&lx).is_identity() {
            return Ok(false);
        }
        let ok = precomposition(&xx, &xx).iter().zip(precomposition(&xy, &xx)).all(|(c, d)| r.mul(c) == d.mul(r));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All four covariance verdicts for `λ: Y → X`, each backed by a witness
/// or a failing vector.
pub fn check_covariance(lambda: &ModuleHom) -> Result<CovarianceReport, EndoError> {
    let direct = core(lambda, "")?;
    let op = Arc::new(opposite(&lambda.source.parent));
    let transposed = lambda.dual(&op);
    let dual = core(&transposed, "dual: ")?;

    let mut failures = Vec::new();
    let mut witnesses = Witnesses::default();
    let take = |c: Core, sec: &mut Option<Mat>, ret: &mut Option<Mat>, failures: &mut Vec<Failure>| -> (bool, bool) {
        let inj = c.injective.is_ok();
        if let Err(f) = c.injective {
            failures.push(f);
        }
        let split = match c.section {
            Ok(g) => {
                *sec = Some(g);
                true
            }
            Err(f) => {
                failures.push(f);
                false
            }
        };
        let mono = match c.retraction {
            Ok(r) => {
                *ret = Some(r);
                true
            }
            Err(f) => {
                failures.push(f);
                false
            }
        };
        (inj && split, mono)
    };
    let (mut s, mut r) = (None, None);
    let (covariant, x_covariant) = take(direct, &mut s, &mut r, &mut failures);
    witnesses.section = s;
    witnesses.retraction = r;
    let (mut s, mut r) = (None, None);
    let (contravariant, y_contravariant) = take(dual, &mut s, &mut r, &mut failures);
    witnesses.dual_section = s;
    witnesses.dual_retraction = r;

    let ok = verify_splitting(lambda, &witnesses, false)? && verify_splitting(&transposed, &witnesses, true)?;
    assert!(ok, "splitting witness failed re-verification");
    Ok(CovarianceReport { covariant, x_covariant, contravariant, y_contravariant, witnesses, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ideal_generated;
    use crate::modules::testmod::*;
    use crate::modules::Module;

    #[test]
    fn identity_is_everything() {
        for a in [t(), a5(), dual()] {
            let r = check_covariance(&ModuleHom::identity(&Module::regular(&a))).unwrap();
            assert!(r.covariant && r.x_covariant && r.contravariant && r.y_contravariant, "{:?}", r.failures);
            assert!(r.failures.is_empty());
        }
    }

    #[test]
    fn socle_inclusion() {
        let r = dual();
        let reg = Module::regular(&r);
        let inc = ModuleHom::inclusion(&reg, &reg.socle().unwrap()).unwrap();
        let c = check_covariance(&inc).unwrap();
        assert!(c.covariant);
        assert!(c.witnesses.section.is_some());
    }

    #[test]
    fn idempotent_ideal_inclusion() {
        let t = t();
        let reg = Module::regular(&t);
        let j = ideal_generated(&t, &[basis(&t, "e11")]).space;
        let c = check_covariance(&ModuleHom::inclusion(&reg, &j).unwrap()).unwrap();
        assert!(c.covariant);
    }

    #[test]
    fn non_injective_failure_has_a_vector() {
        // The projection T → T/rad composed as a map into a simple is not injective on Hom(X, Y).
        let t = t();
        let reg = Module::regular(&t);
        let zero_map = ModuleHom::new(reg.clone(), reg.clone(), Mat::zeros(3, 3, t.field())).unwrap();
        let c = check_covariance(&zero_map).unwrap();
        assert!(!c.covariant && !c.x_covariant);
        assert!(c.failures.iter().all(|f| !f.condition.is_empty()));
        assert!(c.failures.iter().any(|f| !vecops::is_zero(&f.vector)));
    }

    #[test]
    fn duality_transport() {
        // The contravariant verdicts of λ are the covariant ones of its transpose.
        let a = a5();
        let reg = Module::regular(&a);
        let j = ideal_generated(&a, &[basis(&a, "e1")]).space;
        let inc = ModuleHom::inclusion(&reg, &j).unwrap();
        let c = check_covariance(&inc).unwrap();
        let op = Arc::new(opposite(&a));
        let d = check_covariance(&inc.dual(&op)).unwrap();
        assert_eq!((c.contravariant, c.y_contravariant), (d.covariant, d.x_covariant));
        assert_eq!((c.covariant, c.x_covariant), (d.contravariant, d.y_contravariant));
    }

    #[test]
    fn matrix_system() {
        let f = crate::exactla::FieldSpec::Rationals;
        // X·A = I with A invertible
        let a = Mat::from_i64(2, 2, &[1, 1, 0, 1], f);
        let x = solve_matrix_system(2, 2, &[MatEq { terms: vec![(Mat::identity(2, f), a.clone())], rhs: Mat::identity(2, f) }], f).unwrap();
        assert!(x.mul(&a).is_identity());
        let z = Mat::zeros(2, 2, f);
        assert!(solve_matrix_system(2, 2, &[MatEq { terms: vec![(Mat::identity(2, f), z)], rhs: Mat::identity(2, f) }], f).is_err());
    }
}
