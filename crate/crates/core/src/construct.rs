//! Building new Hom 3-Lie-Rinehart algebras: twisting a classical 3-Lie-Rinehart
//! algebra by endomorphisms, and scalar extension `A ⊗ L` of a representation.

use crate::core3lie::{self, Bracket, Hom3Lie};
use crate::exactq::{Accumulator, MatrixQ, PartialMap, Vector};
use crate::repmod::{self, HomRep, PairAction};
use crate::report::CheckReport;
use crate::rinehart::{self, CommAlgebra, ModuleAction, RinehartBundle};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructError {
    #[error("{0}")]
    Shape(String),
    #[error("input is not a classical 3-Lie-Rinehart algebra: {}", names(.0))]
    NotClassical(Vec<CheckReport>),
    #[error("twisting maps violate the compatibility conditions: {}", names(.0))]
    Incompatible(Vec<CheckReport>),
    #[error("input is not a multiplicative Hom 3-Lie algebra with a derivation representation: {}", names(.0))]
    BadRepresentation(Vec<CheckReport>),
}

fn names(reports: &[CheckReport]) -> String {
    reports.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join(", ")
}

fn failures(reports: Vec<CheckReport>) -> Vec<CheckReport> {
    reports.into_iter().filter(|r| !r.passed() && r.status != crate::report::Status::NotApplicable).collect()
}

/// Conditions on `(α, φ)` for twisting `base`: `α` a bracket endomorphism,
/// `φ` an algebra endomorphism, `α(ax) = φ(a)α(x)` and `ρ(αx, αy)φ = φρ(x, y)`.
pub fn twist_conditions(base: &RinehartBundle, alpha: &MatrixQ, phi: &MatrixQ) -> Vec<CheckReport> {
    let mut probe = base.clone();
    probe.lie.alpha = alpha.clone();
    probe.alg.phi = phi.clone();
    let mut out = vec![core3lie::check_multiplicative(&probe.lie)];
    out.extend(rinehart::check_comm_algebra(&probe).into_iter().filter(|r| r.name.starts_with("phi")));
    out.push(rinehart::check_hom_compat(&probe).swap_remove(0));
    out.push(repmod::check_hr1(&probe.lie, &probe.rep()));
    out
}

/// `(L, A, α∘[·,·,·], φ, α, φ∘ρ)` from a 3-Lie-Rinehart algebra `base`.
pub fn twist(base: &RinehartBundle, alpha: &MatrixQ, phi: &MatrixQ) -> Result<RinehartBundle, ConstructError> {
    let (n, m) = (base.l_dim(), base.a_dim());
    if (alpha.rows(), alpha.cols()) != (n, n) || (phi.rows(), phi.cols()) != (m, m) {
        return Err(ConstructError::Shape(format!("alpha must be {n}x{n} and phi {m}x{m}")));
    }
    if !base.lie.alpha.is_identity() || !base.alg.phi.is_identity() {
        let why = "base carries nontrivial twisting maps";
        return Err(ConstructError::NotClassical(vec![CheckReport::verdict("classical", false, Some(why.into()))]));
    }
    let mut base_checks = rinehart::check_full_rinehart(base).checks;
    base_checks.extend(repmod::check_classical_rep(&base.lie, &base.rep()));
    let bad = failures(base_checks);
    if !bad.is_empty() {
        return Err(ConstructError::NotClassical(bad));
    }
    let bad = failures(twist_conditions(base, alpha, phi));
    if !bad.is_empty() {
        return Err(ConstructError::Incompatible(bad));
    }
    let lie = Hom3Lie::new(base.lie.bracket.map_values(alpha), alpha.clone()).with_labels(base.lie.labels.clone());
    let mut alg = base.alg.clone();
    alg.phi = phi.clone();
    let rho = base.rho.map_values(phi);
    let mut out = RinehartBundle::new(lie, alg, base.action.clone(), rho).expect("shapes preserved");
    out.h = base.h.clone();
    Ok(out)
}

/// `a ⊗ x` in the basis `u_s ⊗ e_i -> s * n + i`.
fn tensor(a: &Vector, x: &Vector) -> Vector {
    let n = x.dim();
    let mut acc = Accumulator::new(a.dim() * n);
    for (s, p) in a.iter() {
        for (i, q) in x.iter() {
            acc.add(s * n + i, &(p * q));
        }
    }
    acc.finish()
}

/// Preconditions for the scalar extension.
pub fn tensor_conditions(lie: &Hom3Lie, alg: &CommAlgebra, rho: &PairAction) -> Vec<CheckReport> {
    let (n, m) = (lie.dim(), alg.dim());
    let zero = ModuleAction::new(vec![PartialMap::zero(n, n); m], n).expect("square maps");
    let probe = RinehartBundle::new(lie.clone(), alg.clone(), zero, rho.clone());
    let Ok(probe) = probe else {
        return vec![CheckReport::verdict("shape", false, Some("rho does not match L and A".into()))];
    };
    let mut out = vec![core3lie::check_hom_jacobi(lie), core3lie::check_multiplicative(lie)];
    out.extend(rinehart::check_comm_algebra(&probe));
    out.extend(repmod::check_hom_rep(lie, &HomRep::new(rho.clone(), alg.phi.clone())));
    out.push(rinehart::check_rho_derivations(&probe));
    out
}

/// `G = A ⊗ L` with
/// `[a1x1, a2x2, a3x3] = φ(a1a2a3)[x1,x2,x3] + φ(a1a2)ρ(x1,x2)(a3)α(x3) + cyclic`,
/// `α̃ = φ ⊗ α` and `ρ̃(a1x1, a2x2) = φ(a1a2)ρ(x1, x2)`.
pub fn tensor_extension(lie: &Hom3Lie, alg: &CommAlgebra, rho: &PairAction) -> Result<RinehartBundle, ConstructError> {
    let bad = failures(tensor_conditions(lie, alg, rho));
    if !bad.is_empty() {
        return Err(ConstructError::BadRepresentation(bad));
    }
    let (n, m) = (lie.dim(), alg.dim());
    let g = n * m;
    let e = |i: usize| Vector::unit(n, i);
    let u = |s: usize| Vector::unit(m, s);
    let phi = |a: &Vector| alg.phi.apply(a);
    let alpha_e: Vec<Vector> = (0..n).map(|i| lie.alpha.apply(&e(i))).collect();
    let split = |p: usize| (p / n, p % n);

    // One summand φ(a_p a_q) ρ(x_p, x_q)(a_r) ⊗ α(x_r).
    let anchor_term = |(sp, ip): (usize, usize), (sq, iq): (usize, usize), (sr, ir): (usize, usize)| {
        let coef = rho.apply(&e(ip), &e(iq), &u(sr))?;
        if coef.is_zero() {
            return Some(Vector::zero(g));
        }
        let w = alg.mul(&phi(&alg.basis_product(sp, sq)?), &coef)?;
        Some(tensor(&w, &alpha_e[ir]))
    };

    let mut bracket = Bracket::new(g);
    for p in 0..g {
        for q in p + 1..g {
            for r in q + 1..g {
                let (a, b, c) = (split(p), split(q), split(r));
                let value = (|| {
                    let mut acc = Vector::zero(g);
                    let br = lie.bracket.basis(a.1, b.1, c.1)?;
                    if !br.is_zero() {
                        let abc = alg.mul(&alg.basis_product(a.0, b.0)?, &u(c.0))?;
                        acc = acc.add(&tensor(&phi(&abc), &br));
                    }
                    acc = acc.add(&anchor_term(a, b, c)?);
                    acc = acc.add(&anchor_term(b, c, a)?);
                    acc = acc.add(&anchor_term(c, a, b)?);
                    Some(acc)
                })();
                bracket.set(p, q, r, value).expect("sorted distinct indices");
            }
        }
    }

    let labels: Vec<String> =
        (0..g).map(|p| format!("{}.{}", alg.labels[p / n], lie.label(p % n))).collect();
    let g_lie = Hom3Lie::new(bracket, MatrixQ::kron(&alg.phi, &lie.alpha)).with_labels(labels);

    let maps = (0..m)
        .map(|k| {
            let cols = (0..g)
                .map(|p| {
                    let (s, i) = split(p);
                    alg.basis_product(k, s).map(|prod| tensor(&prod, &e(i)))
                })
                .collect();
            PartialMap::from_columns(g, cols)
        })
        .collect();
    let action = ModuleAction::new(maps, g).expect("square maps");

    let mut g_rho = PairAction::new(g, m);
    for p in 0..g {
        for q in p + 1..g {
            let ((sp, ip), (sq, iq)) = (split(p), split(q));
            if ip == iq {
                continue;
            }
            let op = rho.basis_op(ip, iq);
            let Some(w) = alg.basis_product(sp, sq).map(|v| phi(&v)) else {
                g_rho.set(p, q, PartialMap::from_columns(m, vec![None; m])).expect("valid pair");
                continue;
            };
            let cols = (0..m).map(|k| op.apply(&u(k)).and_then(|v| alg.mul(&w, &v))).collect();
            let map = PartialMap::from_columns(m, cols);
            if !(map.is_total() && map.is_zero_where_defined()) {
                g_rho.set(p, q, map).expect("valid pair");
            }
        }
    }
    Ok(RinehartBundle::new(g_lie, alg.clone(), action, g_rho).expect("shapes agree"))
}

/// Scalar extension of the underlying representation of a bundle.
pub fn tensor_of_bundle(b: &RinehartBundle) -> Result<RinehartBundle, ConstructError> {
    tensor_extension(&b.lie, &b.alg, &b.rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, D4Params};
    use crate::exactq::{q, Rational};

    fn same_structure(x: &RinehartBundle, y: &RinehartBundle) -> bool {
        x.lie.bracket == y.lie.bracket && x.lie.alpha == y.lie.alpha && x.alg == y.alg && x.action == y.action && x.rho == y.rho
    }

    #[test]
    fn twist_of_negated_tb_matches_rho_prime_tb() {
        let base = corpus::tb_rinehart_negated(1);
        let n = base.l_dim();
        let minus = MatrixQ::scalar(n, &q(-1, 1));
        let out = twist(&base, &minus, &MatrixQ::identity(base.a_dim())).unwrap();
        assert!(same_structure(&out, &corpus::rho_prime_tb(1)));
        assert!(rinehart::check_full_rinehart(&out).passed());
    }

    #[test]
    fn twist_of_tb_by_minus_id_flips_both_signs() {
        let base = corpus::tb_rinehart(1);
        let minus = MatrixQ::scalar(base.l_dim(), &q(-1, 1));
        let out = twist(&base, &minus, &MatrixQ::identity(base.a_dim())).unwrap();
        assert!(!same_structure(&out, &corpus::rho_prime_tb(1)));
        assert_eq!(out.rho, base.rho);
        assert_eq!(out.lie.bracket, base.lie.bracket.map_values(&minus));
    }

    #[test]
    fn twist_rejects_twisted_input() {
        let base = corpus::rho_prime_tb(1);
        let err = twist(&base, &MatrixQ::identity(base.l_dim()), &MatrixQ::identity(base.a_dim())).unwrap_err();
        assert!(matches!(err, ConstructError::NotClassical(_)));
    }

    #[test]
    fn twist_rejects_non_multiplicative_alpha() {
        let base = corpus::d4_bundle(&D4Params::classical(1, 0, Rational::zero()));
        let err = twist(&base, &MatrixQ::scalar(4, &q(2, 1)), &MatrixQ::identity(1)).unwrap_err();
        match err {
            ConstructError::Incompatible(r) => assert_eq!(r[0].name, "multiplicative"),
            other => panic!("{other}"),
        }
        assert!(matches!(twist(&base, &MatrixQ::identity(3), &MatrixQ::identity(1)), Err(ConstructError::Shape(_))));
    }

    #[test]
    fn tensor_over_scalars_is_the_algebra() {
        let p = D4Params::classical(1, 0, Rational::zero());
        let out = tensor_extension(&p.lie(), &p.algebra(), &p.rho()).unwrap();
        assert_eq!(out.lie.bracket, corpus::d4_bracket());
        assert_eq!(out.l_dim(), 4);
        assert!(out.rho.is_zero());
    }

    #[test]
    fn tensor_labels_and_twist() {
        let p = D4Params::sample(3);
        let out = tensor_extension(&p.lie(), &p.algebra(), &p.rho()).unwrap();
        assert_eq!(out.l_dim(), 4 * p.m);
        assert_eq!(out.lie.alpha, MatrixQ::kron(&p.phi(), &p.alpha()));
        assert_eq!(out.lie.label(0), format!("{}.{}", out.alg.labels[0], p.lie().label(0)));
        assert!(rinehart::check_full_rinehart(&out).passed());
    }

    #[test]
    fn tensor_rejects_non_representation() {
        let p = D4Params::classical(2, 0, Rational::zero());
        let mut rho = PairAction::new(4, 2);
        // Not a derivation: sends 1 to z.
        rho.set(0, 1, MatrixQ::from_entries(2, 2, [(1, 0, q(1, 1))]).into()).unwrap();
        let err = tensor_extension(&p.lie(), &p.algebra(), &rho).unwrap_err();
        assert!(matches!(err, ConstructError::BadRepresentation(_)));
    }
}
