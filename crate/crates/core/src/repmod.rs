//! Representations of (Hom) 3-Lie algebras: skew maps `ρ: L × L -> End(V)`.

use std::collections::BTreeMap;

use crate::core3lie::{default_labels, Hom3Lie};
use crate::exactq::{Accumulator, MatrixQ, PartialMap, Vector};
use crate::report::{for_each_tuple, Block, CheckReport, Status, Tally, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("pair ({0}, {1}) out of range for dimension {2}")]
    OutOfRange(usize, usize, usize),
    #[error("rho(e{}, e{}) must vanish on a repeated argument", .0 + 1, .0 + 1)]
    Repeated(usize),
    #[error("rho(e{}, e{}) contradicts antisymmetry with an earlier entry", .0 + 1, .1 + 1)]
    NotAntisymmetric(usize, usize),
    #[error("operator has shape {0}x{1}, expected {2}x{2}")]
    Shape(usize, usize, usize),
}

/// Skew-symmetric bilinear map `L × L -> End(V)` given on basis pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAction {
    source_dim: usize,
    target_dim: usize,
    maps: BTreeMap<(usize, usize), PartialMap>,
}

impl PairAction {
    pub fn new(source_dim: usize, target_dim: usize) -> Self {
        PairAction { source_dim, target_dim, maps: BTreeMap::new() }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// Set `ρ(e_i, e_j)`; `ρ(e_j, e_i)` follows by antisymmetry.
    pub fn set(&mut self, i: usize, j: usize, op: PartialMap) -> Result<(), ActionError> {
        let n = self.source_dim;
        if i >= n || j >= n {
            return Err(ActionError::OutOfRange(i, j, n));
        }
        if op.rows() != self.target_dim || op.cols() != self.target_dim {
            return Err(ActionError::Shape(op.rows(), op.cols(), self.target_dim));
        }
        let zero = op.is_total() && op.is_zero_where_defined();
        if i == j {
            return if zero { Ok(()) } else { Err(ActionError::Repeated(i)) };
        }
        let (key, op) = if i < j { ((i, j), op) } else { ((j, i), op.scale(&-crate::exactq::Rational::one())) };
        match self.maps.get(&key) {
            Some(old) if *old != op => Err(ActionError::NotAntisymmetric(i, j)),
            None if zero => Ok(()),
            _ => {
                if zero {
                    self.maps.remove(&key);
                } else {
                    self.maps.insert(key, op);
                }
                Ok(())
            }
        }
    }

    /// Entries with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &PartialMap)> + '_ {
        self.maps.iter()
    }

    fn basis_map(&self, i: usize, j: usize) -> Option<(bool, &PartialMap)> {
        if i == j {
            return None;
        }
        let (key, neg) = if i < j { ((i, j), false) } else { ((j, i), true) };
        self.maps.get(&key).map(|m| (neg, m))
    }

    /// `ρ(e_i, e_j)` as a partial map.
    pub fn basis_op(&self, i: usize, j: usize) -> PartialMap {
        match self.basis_map(i, j) {
            None => PartialMap::zero(self.target_dim, self.target_dim),
            Some((false, m)) => m.clone(),
            Some((true, m)) => m.scale(&-crate::exactq::Rational::one()),
        }
    }

    /// `ρ(u, v)(a)`.
    pub fn apply(&self, u: &Vector, v: &Vector, a: &Vector) -> Option<Vector> {
        let mut acc = Accumulator::new(self.target_dim);
        for (i, x) in u.iter() {
            for (j, y) in v.iter() {
                let Some((neg, m)) = self.basis_map(i, j) else {
                    continue;
                };
                let img = m.apply(a)?;
                let c = x * y;
                acc.add_vector(&if neg { -c } else { c }, &img);
            }
        }
        Some(acc.finish())
    }

    /// `ρ(u, v)` as a partial map.
    pub fn op(&self, u: &Vector, v: &Vector) -> PartialMap {
        let m = self.target_dim;
        let cols = (0..m).map(|k| self.apply(u, v, &Vector::unit(m, k))).collect();
        PartialMap::from_columns(m, cols)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    /// Post-compose every operator with `m`.
    pub fn map_values(&self, m: &MatrixQ) -> PairAction {
        let pm = PartialMap::from(m);
        let maps = self
            .maps
            .iter()
            .map(|(k, op)| (*k, pm.compose(op)))
            .filter(|(_, op)| !(op.is_total() && op.is_zero_where_defined()))
            .collect();
        PairAction { source_dim: self.source_dim, target_dim: self.target_dim, maps }
    }
}

/// `(V, ρ, φ)`; with `α = Id, φ = Id` this is an ordinary representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomRep {
    pub action: PairAction,
    pub phi: MatrixQ,
    pub labels: Vec<String>,
}

impl HomRep {
    pub fn new(action: PairAction, phi: MatrixQ) -> Self {
        let m = action.target_dim();
        assert_eq!((phi.rows(), phi.cols()), (m, m), "phi must be {m}x{m}");
        HomRep { action, phi, labels: default_labels("v", m) }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.action.target_dim());
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.action.target_dim()
    }

    fn rho(&self, u: &Vector, v: &Vector, a: &Vector) -> Option<Vector> {
        self.action.apply(u, v, a)
    }
}

/// Shared evaluation context: basis vectors and their twists.
struct Ctx<'a> {
    alg: &'a Hom3Lie,
    rep: &'a HomRep,
    e: Vec<Vector>,
    ae: Vec<Vector>,
    v: Vec<Vector>,
    phi_v: Vec<Vector>,
}

impl<'a> Ctx<'a> {
    fn new(alg: &'a Hom3Lie, rep: &'a HomRep) -> Self {
        let n = alg.dim();
        let m = rep.dim();
        let e: Vec<Vector> = (0..n).map(|i| Vector::unit(n, i)).collect();
        let ae = e.iter().map(|x| alg.alpha.apply(x)).collect();
        let v: Vec<Vector> = (0..m).map(|i| Vector::unit(m, i)).collect();
        let phi_v = v.iter().map(|x| rep.phi.apply(x)).collect();
        Ctx { alg, rep, e, ae, v, phi_v }
    }

    fn br(&self, i: usize, j: usize, k: usize) -> Option<Vector> {
        self.alg.bracket.basis(i, j, k)
    }

    fn witness(&self, names: &[&str], t: &[usize], r: &Vector) -> Witness {
        let (l, last) = t.split_at(t.len() - 1);
        let mut args: Vec<(String, String)> =
            names.iter().zip(l).map(|(n, &i)| (n.to_string(), self.alg.label(i))).collect();
        args.push(("v".into(), self.rep.labels[last[0]].clone()));
        Witness { args, residual: r.render(&self.rep.labels) }
    }
}

/// `[ρ(x1,x2), ρ(x3,x4)] - ρ([x1,x2,x3],x4) + ρ([x1,x2,x4],x3)` applied to `v`.
fn mod1_residual(c: &Ctx, t: &[usize]) -> Option<Vector> {
    let (x, v) = (&t[..4], &c.v[t[4]]);
    let r = |i: usize, j: usize, a: &Vector| c.rep.rho(&c.e[x[i]], &c.e[x[j]], a);
    let lhs = r(0, 1, &r(2, 3, v)?)?.sub(&r(2, 3, &r(0, 1, v)?)?);
    let b3 = c.br(x[0], x[1], x[2])?;
    let b4 = c.br(x[0], x[1], x[3])?;
    let t1 = c.rep.rho(&b3, &c.e[x[3]], v)?;
    let t2 = c.rep.rho(&b4, &c.e[x[2]], v)?;
    Some(lhs.sub(&t1).add(&t2))
}

/// `ρ([x1,x2,x3],x4) - Σ_cyc ρ(x1,x2)ρ(x3,x4)` applied to `v`.
fn mod2_residual(c: &Ctx, t: &[usize]) -> Option<Vector> {
    let (x, v) = (&t[..4], &c.v[t[4]]);
    let r = |i: usize, j: usize, a: &Vector| c.rep.rho(&c.e[x[i]], &c.e[x[j]], a);
    let lhs = c.rep.rho(&c.br(x[0], x[1], x[2])?, &c.e[x[3]], v)?;
    let s1 = r(0, 1, &r(2, 3, v)?)?;
    let s2 = r(1, 2, &r(0, 3, v)?)?;
    let s3 = r(2, 0, &r(1, 3, v)?)?;
    Some(lhs.sub(&s1).sub(&s2).sub(&s3))
}

/// `ρ(αx1,αx2)φ(v) - φρ(x1,x2)(v)`.
fn hr1_residual(c: &Ctx, t: &[usize]) -> Option<Vector> {
    let lhs = c.rep.rho(&c.ae[t[0]], &c.ae[t[1]], &c.phi_v[t[2]])?;
    let rhs = c.rep.phi.apply(&c.rep.rho(&c.e[t[0]], &c.e[t[1]], &c.v[t[2]])?);
    Some(lhs.sub(&rhs))
}

/// `ρ([x1,x2,x3],αx4)φ - ρ(αx1,αx2)ρ(x3,x4) - ρ(αx2,αx3)ρ(x1,x4) - ρ(αx3,αx1)ρ(x2,x4)`.
fn hr2_residual(c: &Ctx, t: &[usize]) -> Option<Vector> {
    let (x, v) = (&t[..4], &c.v[t[4]]);
    let ra = |i: usize, j: usize, a: &Vector| c.rep.rho(&c.ae[x[i]], &c.ae[x[j]], a);
    let r = |i: usize, j: usize| c.rep.rho(&c.e[x[i]], &c.e[x[j]], v);
    let lhs = c.rep.rho(&c.br(x[0], x[1], x[2])?, &c.ae[x[3]], &c.phi_v[t[4]])?;
    let s1 = ra(0, 1, &r(2, 3)?)?;
    let s2 = ra(1, 2, &r(0, 3)?)?;
    let s3 = ra(2, 0, &r(1, 3)?)?;
    Some(lhs.sub(&s1).sub(&s2).sub(&s3))
}

/// `ρ(αx1,αx2)ρ(x3,x4) - ρ(αx3,αx4)ρ(x1,x2) - ρ([x1,x2,x3],αx4)φ - ρ(αx3,[x1,x2,x4])φ`.
fn hr3_residual(c: &Ctx, t: &[usize]) -> Option<Vector> {
    let (x, v) = (&t[..4], &c.v[t[4]]);
    let pv = &c.phi_v[t[4]];
    let ra = |i: usize, j: usize, a: &Vector| c.rep.rho(&c.ae[x[i]], &c.ae[x[j]], a);
    let r = |i: usize, j: usize| c.rep.rho(&c.e[x[i]], &c.e[x[j]], v);
    let s1 = ra(0, 1, &r(2, 3)?)?;
    let s2 = ra(2, 3, &r(0, 1)?)?;
    let s3 = c.rep.rho(&c.br(x[0], x[1], x[2])?, &c.ae[x[3]], pv)?;
    let s4 = c.rep.rho(&c.ae[x[2]], &c.br(x[0], x[1], x[3])?, pv)?;
    Some(s1.sub(&s2).sub(&s3).sub(&s4))
}

/// Sum of the six quadratic terms `ρ(αx_i,αx_j)ρ(x_k,x_l)`.
fn hr4_residual(c: &Ctx, t: &[usize]) -> Option<Vector> {
    let (x, v) = (&t[..4], &c.v[t[4]]);
    let ra = |i: usize, j: usize, a: &Vector| c.rep.rho(&c.ae[x[i]], &c.ae[x[j]], a);
    let r = |i: usize, j: usize| c.rep.rho(&c.e[x[i]], &c.e[x[j]], v);
    let terms = [
        ra(0, 1, &r(2, 3)?)?,
        ra(1, 2, &r(0, 3)?)?,
        ra(2, 0, &r(1, 3)?)?,
        ra(2, 3, &r(0, 1)?)?,
        ra(0, 3, &r(1, 2)?)?,
        ra(1, 3, &r(2, 0)?)?,
    ];
    let mut acc = Vector::zero(c.rep.dim());
    for s in &terms {
        acc = acc.add(s);
    }
    Some(acc)
}

type Residual = fn(&Ctx, &[usize]) -> Option<Vector>;

fn run(c: &Ctx, name: &str, blocks: &[Block], names: &[&str], f: Residual) -> CheckReport {
    let mut tally = Tally::new(name);
    for_each_tuple(blocks, |t| tally.record(f(c, t), |r| c.witness(names, t, r)));
    tally.finish()
}

const X4: [&str; 4] = ["x1", "x2", "x3", "x4"];

fn blocks(n: usize, m: usize, alt: &[usize], free: usize) -> Vec<Block> {
    let mut b: Vec<Block> = alt.iter().map(|&len| Block::Increasing { len, range: n }).collect();
    if free > 0 {
        b.push(Block::Free { len: free, range: n });
    }
    b.push(Block::Free { len: 1, range: m });
    b
}

/// Ordinary representation axioms; requires `α = Id` and `φ = Id`.
pub fn check_classical_rep(alg: &Hom3Lie, rep: &HomRep) -> Vec<CheckReport> {
    if !alg.alpha.is_identity() || !rep.phi.is_identity() {
        let why = "twist maps are not the identity";
        return vec![CheckReport::not_applicable("rep_commutator", why), CheckReport::not_applicable("rep_bracket", why)];
    }
    let c = Ctx::new(alg, rep);
    let (n, m) = (alg.dim(), rep.dim());
    vec![
        run(&c, "rep_commutator", &blocks(n, m, &[2, 2], 0), &X4, mod1_residual),
        run(&c, "rep_bracket", &blocks(n, m, &[3], 1), &X4, mod2_residual),
    ]
}

pub fn check_hr1(alg: &Hom3Lie, rep: &HomRep) -> CheckReport {
    let c = Ctx::new(alg, rep);
    run(&c, "hr1", &blocks(alg.dim(), rep.dim(), &[2], 0), &X4[..2], hr1_residual)
}

pub fn check_hr2(alg: &Hom3Lie, rep: &HomRep) -> CheckReport {
    let c = Ctx::new(alg, rep);
    run(&c, "hr2", &blocks(alg.dim(), rep.dim(), &[3], 1), &X4, hr2_residual)
}

pub fn check_hr3(alg: &Hom3Lie, rep: &HomRep) -> CheckReport {
    let c = Ctx::new(alg, rep);
    run(&c, "hr3", &blocks(alg.dim(), rep.dim(), &[2, 2], 0), &X4, hr3_residual)
}

pub fn check_hr4(alg: &Hom3Lie, rep: &HomRep) -> CheckReport {
    let c = Ctx::new(alg, rep);
    run(&c, "hr4", &blocks(alg.dim(), rep.dim(), &[4], 0), &X4, hr4_residual)
}

/// hr1, hr2 and hr3.
pub fn check_hom_rep(alg: &Hom3Lie, rep: &HomRep) -> Vec<CheckReport> {
    vec![check_hr1(alg, rep), check_hr2(alg, rep), check_hr3(alg, rep)]
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct EquivalenceReport {
    pub hr2: CheckReport,
    pub hr3: CheckReport,
    pub hr4: CheckReport,
    /// Tuples (over the hr3 index set) where exactly one of hr3, hr4 holds.
    pub disagreements: u64,
    pub status: Status,
}

impl EquivalenceReport {
    /// hr2 holds and hr3 and hr4 agree everywhere.
    pub fn equivalence_observed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// With hr2 in force, hr3 and hr4 are equivalent tuple by tuple.
pub fn check_hr4_equivalence(alg: &Hom3Lie, rep: &HomRep) -> EquivalenceReport {
    let hr2 = check_hr2(alg, rep);
    let hr3 = check_hr3(alg, rep);
    let hr4 = check_hr4(alg, rep);
    let c = Ctx::new(alg, rep);
    let mut disagreements = 0;
    for_each_tuple(&blocks(alg.dim(), rep.dim(), &[2, 2], 0), |t| {
        if let (Some(a), Some(b)) = (hr3_residual(&c, t), hr4_residual(&c, t)) {
            if a.is_zero() != b.is_zero() {
                disagreements += 1;
            }
        }
    });
    let status = if !hr2.passed() {
        Status::Blocked
    } else if disagreements == 0 && hr3.passed() == hr4.passed() {
        Status::Pass
    } else {
        Status::Fail
    };
    EquivalenceReport { hr2, hr3, hr4, disagreements, status }
}

/// The adjoint representation `ρ(x, y)(z) = [x, y, z]` on `L` itself.
pub fn adjoint(alg: &Hom3Lie) -> HomRep {
    let n = alg.dim();
    let mut act = PairAction::new(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let op = alg.bracket.ad(&Vector::unit(n, i), &Vector::unit(n, j));
            act.set(i, j, op).expect("adjoint action is antisymmetric");
        }
    }
    HomRep::new(act, alg.alpha.clone()).with_labels(alg.labels.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core3lie::Bracket;
    use crate::exactq::Rational;
    use crate::report::symmetry::{assert_reduction, Group::Alt};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_map(rng: &mut ChaCha8Rng, m: usize) -> MatrixQ {
        let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        MatrixQ::from_int_rows(&rows)
    }

    fn random_pair(n: usize, m: usize, seed: u64) -> (Hom3Lie, HomRep) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = Bracket::new(n);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
                    b.set(i, j, k, Some(Vector::from_ints(&v))).unwrap();
                }
            }
        }
        let alpha = random_map(&mut rng, n);
        let mut act = PairAction::new(n, m);
        for i in 0..n {
            for j in i + 1..n {
                act.set(i, j, random_map(&mut rng, m).into()).unwrap();
            }
        }
        let phi = random_map(&mut rng, m);
        (Hom3Lie::new(b, alpha), HomRep::new(act, phi))
    }

    fn d4() -> Hom3Lie {
        let mut b = Bracket::new(4);
        b.set(0, 1, 2, Some(Vector::unit(4, 3))).unwrap();
        Hom3Lie::new(b, MatrixQ::identity(4))
    }

    #[test]
    fn adjoint_of_d4_is_a_representation() {
        let alg = d4();
        let rep = adjoint(&alg);
        assert!(check_classical_rep(&alg, &rep).iter().all(CheckReport::passed));
        assert!(check_hom_rep(&alg, &rep).iter().all(CheckReport::passed));
        assert!(check_hr4(&alg, &rep).passed());
    }

    #[test]
    fn random_action_fails_with_witness() {
        let (alg, rep) = random_pair(4, 2, 3);
        let r = check_hr2(&alg, &rep);
        assert_eq!(r.status, Status::Fail);
        assert!(r.witness.is_some());
    }

    #[test]
    fn antisymmetric_storage() {
        let mut act = PairAction::new(3, 2);
        let op: PartialMap = MatrixQ::from_int_rows(&[vec![0, 1], vec![0, 0]]).into();
        act.set(1, 0, op.clone()).unwrap();
        assert_eq!(act.basis_op(0, 1), op.scale(&-Rational::one()));
        assert!(act.set(0, 1, op.clone()).is_err());
        assert!(act.set(2, 2, op).is_err());
    }

    #[test]
    fn residual_symmetries_hold_on_unstructured_data() {
        let (alg, rep) = random_pair(4, 2, 17);
        let c = Ctx::new(&alg, &rep);
        let r5 = [4, 4, 4, 4, 2];
        assert_reduction(&[4, 4, 2], &[Alt(&[0, 1])], |t| hr1_residual(&c, t).unwrap());
        assert_reduction(&r5, &[Alt(&[0, 1, 2])], |t| hr2_residual(&c, t).unwrap());
        assert_reduction(&r5, &[Alt(&[0, 1]), Alt(&[2, 3])], |t| hr3_residual(&c, t).unwrap());
        assert_reduction(&r5, &[Alt(&[0, 1, 2, 3])], |t| hr4_residual(&c, t).unwrap());
        let mut alg_id = alg.clone();
        alg_id.alpha = MatrixQ::identity(4);
        let rep_id = HomRep::new(rep.action.clone(), MatrixQ::identity(2));
        let c = Ctx::new(&alg_id, &rep_id);
        assert_reduction(&r5, &[Alt(&[0, 1]), Alt(&[2, 3])], |t| mod1_residual(&c, t).unwrap());
        assert_reduction(&r5, &[Alt(&[0, 1, 2])], |t| mod2_residual(&c, t).unwrap());
    }

    #[test]
    fn hr3_and_hr4_differ_by_hr2_terms() {
        // hr3 + hr4 is a signed sum of two hr2 residuals for any data.
        let (alg, rep) = random_pair(4, 2, 23);
        let c = Ctx::new(&alg, &rep);
        for_each_tuple(&blocks(4, 2, &[2, 2], 0), |t| {
            let s = hr3_residual(&c, t).unwrap().add(&hr4_residual(&c, t).unwrap());
            let a = hr2_residual(&c, t).unwrap();
            let swapped = [t[0], t[1], t[3], t[2], t[4]];
            let b = hr2_residual(&c, &swapped).unwrap();
            assert_eq!(s, b.sub(&a), "tuple {t:?}");
        });
    }
}
