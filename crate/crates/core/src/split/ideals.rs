//! Ideals attached to root classes, the direct-sum theorems and the
//! splitting of ideals along a root decomposition.

use serde::Serialize;

use crate::core3lie;
use crate::corpus;
use crate::exactq::{RowReducer, SubspaceQ, Vector};
use crate::report::{CheckReport, Status, Tally, Witness};
use crate::rinehart::{self, RinehartBundle};

use super::connect::RootClassPartition;
use super::roots::{root_decompose, weight_decompose, Graded, RootDecomposition, RootForm, WeightDecomposition};
use super::SplitError;

/// `I_[γ] = L_{0,[γ]} ⊕ L_[γ]` for one class of roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassIdeal {
    /// Indices into the root list.
    pub class: Vec<usize>,
    pub l0: SubspaceQ,
    pub l_class: SubspaceQ,
    pub ideal: SubspaceQ,
    /// Generators that could not be evaluated.
    pub skipped: u64,
    pub l0_in_h: bool,
    pub l0_disjoint: bool,
}

fn basis_products<F>(out: &mut Vec<Vector>, skipped: &mut u64, xs: &[Vector], ys: &[Vector], mut f: F)
where
    F: FnMut(&Vector, &Vector) -> Option<Vector>,
{
    for x in xs {
        for y in ys {
            match f(x, y) {
                Some(v) => out.push(v),
                None => *skipped += 1,
            }
        }
    }
}

/// `Σ A_{-ξ} L_ξ + Σ_{ξ+η+δ=0} [L_ξ, L_η, L_δ]` over the given roots.
fn zero_part(b: &RinehartBundle, dec: &RootDecomposition, wdec: &WeightDecomposition, class: &[usize]) -> (SubspaceQ, u64) {
    let mut gens = Vec::new();
    let mut skipped = 0;
    for &i in class {
        let r = &dec.roots[i];
        if let Some(a) = wdec.weights.iter().find(|w| w.form == r.form.neg()) {
            basis_products(&mut gens, &mut skipped, a.space.basis(), r.space.basis(), |a, x| b.act(a, x));
        }
    }
    for (p, &i) in class.iter().enumerate() {
        for (q, &j) in class.iter().enumerate().skip(p) {
            for &k in class.iter().skip(q) {
                let (x, y, z) = (&dec.roots[i], &dec.roots[j], &dec.roots[k]);
                if !x.form.add(&y.form).add(&z.form).is_zero() {
                    continue;
                }
                for u in x.space.basis() {
                    for v in y.space.basis() {
                        for w in z.space.basis() {
                            match b.lie.br(u, v, w) {
                                Some(t) => gens.push(t),
                                None => skipped += 1,
                            }
                        }
                    }
                }
            }
        }
    }
    (SubspaceQ::span(b.l_dim(), gens.iter()), skipped)
}

pub fn class_ideal(b: &RinehartBundle, dec: &RootDecomposition, wdec: &WeightDecomposition, class: &[usize]) -> ClassIdeal {
    let (l0, skipped) = zero_part(b, dec, wdec, class);
    let l_class = SubspaceQ::sum_all(b.l_dim(), class.iter().map(|&i| &dec.roots[i].space));
    ClassIdeal {
        class: class.to_vec(),
        l0_in_h: l0.is_subspace_of(&dec.h),
        l0_disjoint: l0.intersect(&l_class).is_zero(),
        ideal: l0.sum(&l_class),
        l0,
        l_class,
        skipped,
    }
}

pub fn class_ideals(b: &RinehartBundle, dec: &RootDecomposition, wdec: &WeightDecomposition, part: &RootClassPartition) -> Vec<ClassIdeal> {
    part.classes.iter().map(|c| class_ideal(b, dec, wdec, c)).collect()
}

fn bracket_vanishes(b: &RinehartBundle, tally: &mut Tally, xs: &[Vector], ys: &[Vector], zs: &[Vector], same_xy: bool) {
    for (p, x) in xs.iter().enumerate() {
        for y in ys.iter().skip(if same_xy { p + 1 } else { 0 }) {
            for z in zs {
                let v = b.lie.br(x, y, z);
                tally.record(v, |r| Witness {
                    args: vec![("x".into(), b.lie.render(x)), ("y".into(), b.lie.render(y)), ("z".into(), b.lie.render(z))],
                    residual: b.lie.render(r),
                });
            }
        }
    }
}

/// Closure of each `I_[γ]` under the bracket, `α` and the action, the ideal
/// laws, and the vanishing of brackets across distinct classes.
pub fn check_class_ideal_laws(b: &RinehartBundle, ideals: &[ClassIdeal]) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let l = |v: &Vector| b.lie.render(v);
    for (c, ci) in ideals.iter().enumerate() {
        let name = |s: &str| format!("class{c}.{s}");
        let i = &ci.ideal;
        let basis = i.basis();
        out.push(CheckReport::verdict(&name("l0_in_h"), ci.l0_in_h, None));
        out.push(CheckReport::verdict(&name("l0_disjoint"), ci.l0_disjoint, None));

        let mut closed = Tally::new(&name("bracket_closed"));
        for p in 0..basis.len() {
            for q in p + 1..basis.len() {
                for r in q + 1..basis.len() {
                    let v = b.lie.br(&basis[p], &basis[q], &basis[r]);
                    closed.record_bool(v.as_ref().map(|v| i.contains(v)), || Witness {
                        args: vec![("x".into(), l(&basis[p])), ("y".into(), l(&basis[q])), ("z".into(), l(&basis[r]))],
                        residual: format!("[x, y, z] = {} is outside the ideal", l(v.as_ref().unwrap())),
                    });
                }
            }
        }
        out.push(closed.finish());

        let mut alpha = Tally::new(&name("alpha_stable"));
        for x in basis {
            let v = b.lie.alpha.apply(x);
            alpha.record_bool(Some(i.contains(&v)), || Witness { args: vec![("x".into(), l(x))], residual: format!("alpha(x) = {}", l(&v)) });
        }
        out.push(alpha.finish());

        let mut action = Tally::new(&name("a_stable"));
        for k in 0..b.a_dim() {
            let a = Vector::unit(b.a_dim(), k);
            for x in basis {
                let v = b.act(&a, x);
                action.record_bool(v.as_ref().map(|v| i.contains(v)), || Witness {
                    args: vec![("a".into(), b.alg.labels[k].clone()), ("x".into(), l(x))],
                    residual: format!("ax = {} is outside the ideal", l(v.as_ref().unwrap())),
                });
            }
        }
        out.push(action.finish());

        for mut r in rinehart::rinehart_ideal_check(b, i).checks {
            r.name = name(&format!("ideal.{}", r.name));
            out.push(r);
        }
    }

    let mut distinct = Tally::new("orthogonal_distinct");
    let mut repeated = Tally::new("orthogonal_repeated");
    let k = ideals.len();
    for p in 0..k {
        for q in 0..k {
            if p == q {
                continue;
            }
            let (ip, iq) = (ideals[p].ideal.basis(), ideals[q].ideal.basis());
            bracket_vanishes(b, &mut repeated, ip, ip, iq, true);
            for r in q + 1..k {
                if p < q && r != p {
                    bracket_vanishes(b, &mut distinct, ip, iq, ideals[r].ideal.basis(), false);
                }
            }
        }
    }
    let mut distinct = distinct.finish();
    let mut repeated = repeated.finish();
    if k < 3 {
        distinct = distinct.with_note("vacuous: fewer than three classes");
    }
    if k < 2 {
        repeated = repeated.with_note("vacuous: fewer than two classes");
    }
    out.push(distinct);
    out.push(repeated);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectSumReport {
    /// Basis of `Z_ρ(L)` solved from the evaluable equations.
    pub z_rho: Vec<String>,
    pub z_rho_dropped: usize,
    pub z_rho_zero: bool,
    /// `Σ A_{-ξ}L_ξ + Σ_{ξ+η+δ=0} [L_ξ, L_η, L_δ]` over all roots.
    pub generated: Vec<String>,
    pub h_generated: bool,
    /// Basis vectors of `H` completing the generated span.
    pub gap: Vec<String>,
    pub skipped: u64,
    pub hypotheses_hold: bool,
    /// `L = ⊕ I_[γ]`, evaluated only when the hypotheses hold.
    pub direct_sum: Option<bool>,
    pub classes: usize,
    pub status: Status,
}

/// Evaluates `Z_ρ(L) = 0` and `H = Σ A_{-ξ}L_ξ + Σ [L_ξ, L_η, L_δ]`; when
/// both hold, `L` must be the direct sum of the class ideals.
pub fn direct_sum_decompose(b: &RinehartBundle, dec: &RootDecomposition, wdec: &WeightDecomposition, ideals: &[ClassIdeal]) -> DirectSumReport {
    let n = b.l_dim();
    let render = |s: &SubspaceQ| s.basis().iter().map(|v| b.lie.render(v)).collect::<Vec<_>>();
    let z = rinehart::centers(b).z_rho;
    let all: Vec<usize> = (0..dec.roots.len()).collect();
    let (generated, skipped) = zero_part(b, dec, wdec, &all);
    let mut red = RowReducer::new(n);
    for v in generated.basis() {
        red.insert(v);
    }
    let gap: Vec<String> = dec.h.basis().iter().filter(|v| red.insert(v)).map(|v| b.lie.render(v)).collect();
    let h_generated = generated == dec.h;
    let z_rho_zero = z.space.is_zero();
    let hypotheses_hold = h_generated && z_rho_zero;
    let direct_sum = hypotheses_hold.then(|| {
        let spaces: Vec<SubspaceQ> = ideals.iter().map(|c| c.ideal.clone()).collect();
        SubspaceQ::sum_all(n, &spaces).is_full() && SubspaceQ::is_direct_sum(&spaces)
    });
    DirectSumReport {
        z_rho: render(&z.space),
        z_rho_dropped: z.dropped,
        z_rho_zero,
        generated: render(&generated),
        h_generated,
        gap,
        skipped,
        hypotheses_hold,
        status: if direct_sum == Some(false) { Status::Fail } else { Status::Pass },
        direct_sum,
        classes: ideals.len(),
    }
}

/// Components of an `α`-stable ideal along `L = H ⊕ ⊕ L_γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSplit {
    pub in_h: SubspaceQ,
    /// `(root index, I ∩ L_γ)` for the nonzero intersections.
    pub parts: Vec<(usize, SubspaceQ)>,
    pub sums_to_ideal: bool,
    /// When `I ⊆ H`: whether `[I, L, L] = 0`.
    pub central: Option<CheckReport>,
}

pub fn split_ideal(b: &RinehartBundle, dec: &RootDecomposition, ideal: &SubspaceQ) -> Result<IdealSplit, SplitError> {
    let n = b.l_dim();
    let check = core3lie::is_ideal(&b.lie, ideal);
    if !check.passed() {
        let why = check.witness.map(|w| w.to_string()).unwrap_or_else(|| check.status.to_string());
        return Err(SplitError::Precondition(format!("not an ideal: {why}")));
    }
    if ideal.image(&b.lie.alpha) != *ideal {
        return Err(SplitError::Precondition("alpha(I) != I".into()));
    }
    let in_h = ideal.intersect(&dec.h);
    let parts: Vec<(usize, SubspaceQ)> = dec
        .roots
        .iter()
        .enumerate()
        .map(|(k, r)| (k, ideal.intersect(&r.space)))
        .filter(|(_, s)| !s.is_zero())
        .collect();
    let sum = SubspaceQ::sum_all(n, std::iter::once(&in_h).chain(parts.iter().map(|p| &p.1)));
    let central = ideal.is_subspace_of(&dec.h).then(|| {
        let mut t = Tally::new("ideal_in_h_central");
        for x in ideal.basis() {
            for j in 0..n {
                for k in j + 1..n {
                    t.record(b.lie.br(x, &b.lie.e(j), &b.lie.e(k)), |r| Witness {
                        args: vec![("x".into(), b.lie.render(x)), ("y".into(), b.lie.label(j)), ("z".into(), b.lie.label(k))],
                        residual: b.lie.render(r),
                    });
                }
            }
        }
        t.finish()
    });
    Ok(IdealSplit { in_h, parts, sums_to_ideal: sum == *ideal, central })
}

fn embed_space(s: &SubspaceQ, n: usize, off: usize) -> SubspaceQ {
    SubspaceQ::from_vectors(n, s.basis().iter().map(|v| v.embed(n, off)).collect())
}

/// Zero extension of a form on `H_j` (sitting at coordinates `off..`) to `H`.
fn extend_form(f: &RootForm, hj: &SubspaceQ, off: usize, h: &SubspaceQ) -> Option<RootForm> {
    let coords: Option<Vec<Vector>> = h.basis().iter().map(|v| hj.coordinates(&v.slice(off, hj.ambient()))).collect();
    let coords = coords?;
    let k = h.dim();
    let vals = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).map(|(i, j)| f.value(&coords[i], &coords[j])).collect();
    Some(RootForm::from_pair_values(k, vals))
}

/// Restriction of a form on `H` to the subspace `hj ⊆ H`.
fn restrict_form(f: &RootForm, hj: &SubspaceQ, h: &SubspaceQ) -> Option<RootForm> {
    let coords: Option<Vec<Vector>> = hj.basis().iter().map(|v| h.coordinates(v)).collect();
    let coords = coords?;
    let k = hj.dim();
    let vals = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).map(|(i, j)| f.value(&coords[i], &coords[j])).collect();
    Some(RootForm::from_pair_values(k, vals))
}

/// Compares a decomposition of `G_1 ⊕ G_2` with those of its summands, in
/// both directions: zero-extended roots and weights of the summands against
/// the decomposition of the sum, and restrictions of the sum's roots and
/// weights to each summand.
pub fn direct_sum_vs_split(b1: &RinehartBundle, b2: &RinehartBundle) -> Result<Vec<CheckReport>, SplitError> {
    let h1 = b1.h.clone().ok_or(SplitError::NoCartan)?;
    let h2 = b2.h.clone().ok_or(SplitError::NoCartan)?;
    let parts = [
        (b1, root_decompose(b1, &h1)?, weight_decompose(b1, &h1)?),
        (b2, root_decompose(b2, &h2)?, weight_decompose(b2, &h2)?),
    ];
    let sum = corpus::direct_sum(b1, b2);
    let (n, m) = (sum.l_dim(), sum.a_dim());
    let h = sum.h.clone().expect("both summands carry H");
    let dec = root_decompose(&sum, &h)?;
    let wdec = weight_decompose(&sum, &h)?;
    let offsets = [(0, 0), (b1.l_dim(), b1.a_dim())];

    let mut roots = Tally::new("block_roots");
    let mut root_spaces = Tally::new("block_root_spaces");
    let mut weights = Tally::new("block_weights");
    let mut weight_spaces = Tally::new("block_weight_spaces");
    let mut expected_roots = Vec::new();
    let mut expected_weights = Vec::new();
    let mut a0 = SubspaceQ::zero(m);
    let msg = |s: &str| Witness { args: vec![], residual: s.to_string() };
    for ((bj, dj, wj), (loff, aoff)) in parts.iter().zip(offsets) {
        let hj = &dj.h;
        for g in &dj.roots {
            let ext = extend_form(&g.form, hj, loff, &h).expect("H is the block sum");
            let same = dec.space(&ext).filter(|_| !ext.is_zero()).map(|s| *s == embed_space(&g.space, n, loff));
            roots.record_bool(Some(same.is_some()), || msg("extended root missing from the sum"));
            root_spaces.record_bool(Some(same == Some(true)), || msg("root space differs from the block"));
            expected_roots.push(ext);
        }
        for g in &wj.weights {
            let ext = extend_form(&g.form, hj, loff, &h).expect("H is the block sum");
            let same = wdec.space(&ext).filter(|_| !ext.is_zero()).map(|s| *s == embed_space(&g.space, m, aoff));
            weights.record_bool(Some(same.is_some()), || msg("extended weight missing from the sum"));
            weight_spaces.record_bool(Some(same == Some(true)), || msg("weight space differs from the block"));
            expected_weights.push(ext);
        }
        a0 = a0.sum(&embed_space(&wj.a0, m, aoff));
        let _ = bj;
    }
    roots.record_bool(Some(dec.roots.len() == expected_roots.len()), || msg("the sum has roots not coming from a block"));
    weights.record_bool(Some(wdec.weights.len() == expected_weights.len()), || msg("the sum has weights not coming from a block"));
    weight_spaces.record_bool(Some(wdec.a0 == a0), || msg("A_0 is not the product of the blocks' A_0"));

    let mut stable = Tally::new("summand_alpha_stable");
    let mut comps = Tally::new("summand_components");
    let mut restricted = Tally::new("summand_restricted_roots");
    let mut restricted_w = Tally::new("summand_restricted_weights");
    for ((bj, dj, wj), (loff, _)) in parts.iter().zip(offsets) {
        let g = embed_space(&SubspaceQ::full(bj.l_dim()), n, loff);
        stable.record_bool(Some(g.image(&sum.lie.alpha) == g), || msg("alpha does not preserve the summand"));
        let hj = embed_space(&dj.h, n, loff);
        match split_ideal(&sum, &dec, &g) {
            Err(e) => comps.record_bool(Some(false), || msg(&e.to_string())),
            Ok(sp) => {
                comps.record_bool(Some(sp.sums_to_ideal && sp.in_h == hj), || msg("components do not rebuild the summand"));
                for (k, part) in &sp.parts {
                    let r = restrict_form(&dec.roots[*k].form, &hj, &h).expect("H_j inside H");
                    let ok = !r.is_zero() && dj.space(&r).is_some_and(|s| embed_space(s, n, loff) == *part);
                    restricted.record_bool(Some(ok), || msg("restricted root is not a root of the summand"));
                }
                restricted.record_bool(Some(sp.parts.len() == dj.roots.len()), || msg("summand roots missing"));
            }
        }
        let mut lam: Vec<RootForm> = wdec.weights.iter().filter_map(|w| restrict_form(&w.form, &hj, &h)).filter(|r| !r.is_zero()).collect();
        lam.sort();
        lam.dedup();
        let mut want = wj.forms();
        want.sort();
        restricted_w.record_bool(Some(lam == want), || msg("restricted weights differ from the summand's weights"));
    }
    let z = rinehart::centers(&sum).z_l_a;
    let za = CheckReport::verdict("z_l_a_zero", z.space.is_zero(), (!z.space.is_zero()).then(|| format!("Z_L(A) has dimension {}", z.space.dim())));
    Ok(vec![za, roots.finish(), root_spaces.finish(), weights.finish(), weight_spaces.finish(), stable.finish(), comps.finish(), restricted.finish(), restricted_w.finish()])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightClassReport {
    pub classes: Vec<Vec<usize>>,
    /// Basis of `𝒜_[λ] = A_{0,[λ]} ⊕ A_[λ]` per class.
    pub class_algebras: Vec<Vec<String>>,
    pub z_l_a_zero: bool,
    pub a0_generated: bool,
    /// `A = ⊕ 𝒜_[λ]`, evaluated when `Z_L(A) = 0` and `A_0` is generated,
    /// or trivially when there are no weights.
    pub direct_sum: Option<bool>,
    pub checks: Vec<CheckReport>,
}

/// `Σ A_{-β}A_β + Σ_{ξ+η+β=0} ρ(L_ξ, L_η)(A_β)` over the given weights.
fn weight_zero_part(b: &RinehartBundle, dec: &RootDecomposition, wdec: &WeightDecomposition, class: &[usize]) -> (SubspaceQ, u64) {
    let mut gens = Vec::new();
    let mut skipped = 0;
    for &i in class {
        let w = &wdec.weights[i];
        if let Some(neg) = wdec.weights.iter().find(|x| x.form == w.form.neg()) {
            basis_products(&mut gens, &mut skipped, neg.space.basis(), w.space.basis(), |a, c| b.alg.mul(a, c));
        }
        let roots: &[Graded] = &dec.roots;
        for p in 0..roots.len() {
            for q in p..roots.len() {
                if !roots[p].form.add(&roots[q].form).add(&w.form).is_zero() {
                    continue;
                }
                let (bp, bq) = (roots[p].space.basis(), roots[q].space.basis());
                for (s, x) in bp.iter().enumerate() {
                    for y in bq.iter().skip(if p == q { s + 1 } else { 0 }) {
                        for a in w.space.basis() {
                            match b.rho_apply(x, y, a) {
                                Some(v) => gens.push(v),
                                None => skipped += 1,
                            }
                        }
                    }
                }
            }
        }
    }
    (SubspaceQ::span(b.a_dim(), gens.iter()), skipped)
}

pub fn weight_class_decompose(
    b: &RinehartBundle,
    dec: &RootDecomposition,
    wdec: &WeightDecomposition,
    part: &RootClassPartition,
) -> WeightClassReport {
    let m = b.a_dim();
    let mut checks = Vec::new();
    let mut algebras = Vec::new();
    for (c, class) in part.classes.iter().enumerate() {
        let (z0, _) = weight_zero_part(b, dec, wdec, class);
        checks.push(CheckReport::verdict(&format!("wclass{c}.zero_part_in_a0"), z0.is_subspace_of(&wdec.a0), None));
        let graded = SubspaceQ::sum_all(m, class.iter().map(|&i| &wdec.weights[i].space));
        checks.push(CheckReport::verdict(&format!("wclass{c}.zero_part_disjoint"), z0.intersect(&graded).is_zero(), None));
        algebras.push(z0.sum(&graded));
    }
    let mut ann = Tally::new("weight_classes_annihilate");
    for p in 0..algebras.len() {
        for q in p + 1..algebras.len() {
            for x in algebras[p].basis() {
                for y in algebras[q].basis() {
                    ann.record(b.alg.mul(x, y), |r| Witness {
                        args: vec![("a".into(), b.alg.render(x)), ("b".into(), b.alg.render(y))],
                        residual: b.alg.render(r),
                    });
                }
            }
        }
    }
    let mut ann = ann.finish();
    if algebras.len() < 2 {
        ann = ann.with_note("vacuous: fewer than two classes");
    }
    checks.push(ann);

    let all: Vec<usize> = (0..wdec.weights.len()).collect();
    let (generated, _) = weight_zero_part(b, dec, wdec, &all);
    let a0_generated = generated == wdec.a0;
    let z_l_a_zero = rinehart::centers(b).z_l_a.space.is_zero();
    let direct_sum = if wdec.weights.is_empty() {
        Some(wdec.a0.is_full())
    } else if a0_generated && z_l_a_zero {
        Some(SubspaceQ::sum_all(m, &algebras).is_full() && SubspaceQ::is_direct_sum(&algebras))
    } else {
        None
    };
    if let Some(ok) = direct_sum {
        checks.push(CheckReport::verdict("weight_direct_sum", ok, None));
    }
    WeightClassReport {
        classes: part.classes.clone(),
        class_algebras: algebras.iter().map(|s| s.basis().iter().map(|v| b.alg.render(v)).collect()).collect(),
        z_l_a_zero,
        a0_generated,
        direct_sum,
        checks,
    }
}
