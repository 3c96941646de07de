//! How the structure maps move roots and weights: pullback orbits and the
//! grading of the bracket, product, action and anchor.

use crate::exactq::{SubspaceQ, Vector};
use crate::report::{CheckReport, Tally, Witness};
use crate::rinehart::RinehartBundle;

use super::roots::{pullback_root, RootDecomposition, RootForm, WeightDecomposition};

/// Range of exponents used for the pullback checks.
pub const K_RANGE: std::ops::RangeInclusive<i32> = -2..=2;

fn with_zero<'a>(zero: &'a SubspaceQ, h: usize, graded: &'a [super::Graded]) -> Vec<(RootForm, &'a SubspaceQ)> {
    std::iter::once((RootForm::zero(h), zero)).chain(graded.iter().map(|g| (g.form.clone(), &g.space))).collect()
}

/// `v ∈ target`, where a missing target means the zero space.
fn lands(v: &Vector, target: Option<&SubspaceQ>) -> bool {
    match target {
        Some(s) => s.contains(v),
        None => v.is_zero(),
    }
}

/// The six grading statements, each checked exactly on basis vectors of the
/// graded pieces. Pullback statements use every `k` in `K_RANGE`.
pub fn check_grading(b: &RinehartBundle, dec: &RootDecomposition, wdec: &WeightDecomposition) -> Vec<CheckReport> {
    let h = dec.h.dim();
    let ah = &dec.alpha_h;
    let l = |v: &Vector| b.lie.render(v);
    let a = |v: &Vector| b.alg.render(v);
    let inv = |f: &RootForm| pullback_root(f, ah, -1).expect("alpha invertible on H");
    let roots = with_zero(&dec.h, h, &dec.roots);
    let weights = with_zero(&wdec.a0, h, &wdec.weights);
    let w = |args: Vec<(&str, String)>, what: String| Witness {
        args: args.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        residual: what,
    };

    let mut t1 = Tally::new("weight_pullback");
    let mut t2 = Tally::new("root_pullback");
    for k in K_RANGE {
        let phi_k = b.alg.phi.pow(k);
        let alpha_k = b.lie.alpha.pow(k);
        for g in &wdec.weights {
            let target = pullback_root(&g.form, ah, -k).and_then(|f| wdec.weights.iter().find(|x| x.form == f));
            let ok = match (&phi_k, target) {
                (Some(p), Some(t)) => Some(g.space.image(p) == t.space),
                (Some(_), None) => Some(false),
                (None, _) => None,
            };
            t1.record_bool(ok, || w(vec![("k", k.to_string()), ("A_lambda", g.space.render(&b.alg.labels))], "phi^k(A_lambda) is not the pulled-back weight space".into()));
        }
        for g in &dec.roots {
            let target = pullback_root(&g.form, ah, -k).and_then(|f| dec.roots.iter().find(|x| x.form == f));
            let ok = match (&alpha_k, target) {
                (Some(p), Some(t)) => Some(g.space.image(p) == t.space),
                (Some(_), None) => Some(false),
                (None, _) => None,
            };
            t2.record_bool(ok, || w(vec![("k", k.to_string()), ("L_gamma", g.space.render(&b.lie.labels))], "alpha^k(L_gamma) is not the pulled-back root space".into()));
        }
    }

    let mut t3 = Tally::new("bracket_grading");
    for i in 0..roots.len() {
        for j in i..roots.len() {
            for k in j..roots.len() {
                let target_form = inv(&roots[i].0.add(&roots[j].0).add(&roots[k].0));
                let target = dec.space(&target_form);
                let (bi, bj, bk) = (roots[i].1.basis(), roots[j].1.basis(), roots[k].1.basis());
                for p in 0..bi.len() {
                    for q in if i == j { p + 1 } else { 0 }..bj.len() {
                        for r in if j == k { q + 1 } else { 0 }..bk.len() {
                            let v = b.lie.br(&bi[p], &bj[q], &bk[r]);
                            t3.record_bool(v.as_ref().map(|v| lands(v, target)), || {
                                w(vec![("x", l(&bi[p])), ("y", l(&bj[q])), ("z", l(&bk[r]))], format!("[x, y, z] = {} leaves its graded piece", l(v.as_ref().unwrap())))
                            });
                        }
                    }
                }
            }
        }
    }

    let mut t4 = Tally::new("product_grading");
    for i in 0..weights.len() {
        for j in i..weights.len() {
            let target = wdec.space(&weights[i].0.add(&weights[j].0));
            let (bi, bj) = (weights[i].1.basis(), weights[j].1.basis());
            for p in 0..bi.len() {
                for q in if i == j { p } else { 0 }..bj.len() {
                    let v = b.alg.mul(&bi[p], &bj[q]);
                    t4.record_bool(v.as_ref().map(|v| lands(v, target)), || {
                        w(vec![("a", a(&bi[p])), ("b", a(&bj[q]))], format!("ab = {} leaves its graded piece", a(v.as_ref().unwrap())))
                    });
                }
            }
        }
    }

    let mut t5 = Tally::new("action_grading");
    for (lf, ls) in &weights {
        for (rf, rs) in &roots {
            let target = dec.space(&lf.add(rf));
            for u in ls.basis() {
                for x in rs.basis() {
                    let v = b.act(u, x);
                    t5.record_bool(v.as_ref().map(|v| lands(v, target)), || {
                        w(vec![("a", a(u)), ("x", l(x))], format!("ax = {} leaves its graded piece", l(v.as_ref().unwrap())))
                    });
                }
            }
        }
    }

    let mut t6 = Tally::new("anchor_grading");
    for i in 0..roots.len() {
        for j in i..roots.len() {
            for (lf, ls) in &weights {
                let target = wdec.space(&inv(&roots[i].0.add(&roots[j].0).add(lf)));
                let (bi, bj) = (roots[i].1.basis(), roots[j].1.basis());
                for p in 0..bi.len() {
                    for q in if i == j { p + 1 } else { 0 }..bj.len() {
                        for u in ls.basis() {
                            let v = b.rho_apply(&bi[p], &bj[q], u);
                            t6.record_bool(v.as_ref().map(|v| lands(v, target)), || {
                                w(vec![("x", l(&bi[p])), ("y", l(&bj[q])), ("a", a(u))], format!("rho(x, y)a = {} leaves its graded piece", a(v.as_ref().unwrap())))
                            });
                        }
                    }
                }
            }
        }
    }
    vec![t1.finish(), t2.finish(), t3.finish(), t4.finish(), t5.finish(), t6.finish()]
}

/// `[h_i, h_j, x] = γ(h_i, h_j)α(x)` on `L_γ` and
/// `ρ(h_i, h_j)a = λ(h_i, h_j)φ(a)` on `A_λ`, for basis pairs of `H`.
pub fn check_eigen_equations(b: &RinehartBundle, dec: &RootDecomposition, wdec: &WeightDecomposition) -> Vec<CheckReport> {
    let hb = dec.h.basis();
    let mut roots = Tally::new("root_equation");
    let mut weights = Tally::new("weight_equation");
    for i in 0..hb.len() {
        for j in i + 1..hb.len() {
            for g in &dec.roots {
                let c = g.form.get(i, j);
                for x in g.space.basis() {
                    let r = b.lie.br(&hb[i], &hb[j], x).map(|v| v.sub(&b.lie.alpha.apply(x).scale(&c)));
                    roots.record(r, |r| Witness {
                        args: vec![("h1".into(), b.lie.render(&hb[i])), ("h2".into(), b.lie.render(&hb[j])), ("x".into(), b.lie.render(x))],
                        residual: b.lie.render(r),
                    });
                }
            }
            for g in &wdec.weights {
                let c = g.form.get(i, j);
                for a in g.space.basis() {
                    let r = b.rho_apply(&hb[i], &hb[j], a).map(|v| v.sub(&b.alg.phi.apply(a).scale(&c)));
                    weights.record(r, |r| Witness {
                        args: vec![("h1".into(), b.lie.render(&hb[i])), ("h2".into(), b.lie.render(&hb[j])), ("a".into(), b.alg.render(a))],
                        residual: b.alg.render(r),
                    });
                }
            }
        }
    }
    vec![roots.finish(), weights.finish()]
}
