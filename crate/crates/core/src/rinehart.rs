//! Commutative algebras, module actions and (weak) Hom 3-Lie-Rinehart
//! bundles with their axiom checks.

use std::collections::HashMap;

use serde::Serialize;

use crate::core3lie::{self, default_labels, Hom3Lie, Solved};
use crate::exactq::{kernel_from_rref, Accumulator, MatrixQ, PartialMap, RowReducer, SubspaceQ, Vector};
use crate::repmod::{self, HomRep, PairAction};
use crate::report::{for_each_tuple, Block, CheckReport, Status, Tally, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error("product index ({0}, {1}) out of range for dimension {2}")]
    ProductIndex(usize, usize, usize),
    #[error("product a{} * a{} given twice with different values", .0 + 1, .1 + 1)]
    ProductConflict(usize, usize),
    #[error("{what} has shape {got:?}, expected {want:?}")]
    Shape { what: String, got: (usize, usize), want: (usize, usize) },
    #[error("expected {want} module action maps, got {got}")]
    ActionCount { got: usize, want: usize },
}

/// Finite-dimensional commutative algebra with an endomorphism `φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommAlgebra {
    dim: usize,
    mult: HashMap<(usize, usize), Option<Vector>>,
    pub phi: MatrixQ,
    pub unit: Option<Vector>,
    pub labels: Vec<String>,
}

impl CommAlgebra {
    pub fn new(dim: usize) -> Self {
        CommAlgebra {
            dim,
            mult: HashMap::new(),
            phi: MatrixQ::identity(dim),
            unit: None,
            labels: default_labels("a", dim),
        }
    }

    /// The ground field `Q` with unit `1`.
    pub fn scalars() -> Self {
        let mut a = CommAlgebra::new(1);
        a.set_product(0, 0, Some(Vector::unit(1, 0))).unwrap();
        a.unit = Some(Vector::unit(1, 0));
        a.labels = vec!["1".into()];
        a
    }

    /// `Q[z]/(z^m)` with basis `1, z, ..., z^{m-1}`.
    pub fn truncated_poly(m: usize) -> Self {
        assert!(m >= 1);
        let mut a = CommAlgebra::new(m);
        for i in 0..m {
            for j in i..m {
                if i + j < m {
                    a.set_product(i, j, Some(Vector::unit(m, i + j))).unwrap();
                }
            }
        }
        a.unit = Some(Vector::unit(m, 0));
        a.labels = (0..m)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            })
            .collect();
        a
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set_product(&mut self, i: usize, j: usize, value: Option<Vector>) -> Result<(), BundleError> {
        if i >= self.dim || j >= self.dim {
            return Err(BundleError::ProductIndex(i, j, self.dim));
        }
        let key = (i.min(j), i.max(j));
        let value = match value {
            Some(v) if v.is_zero() => {
                if self.mult.contains_key(&key) {
                    return Err(BundleError::ProductConflict(i, j));
                }
                return Ok(());
            }
            v => v,
        };
        if let Some(old) = self.mult.get(&key) {
            if *old != value {
                return Err(BundleError::ProductConflict(i, j));
            }
        }
        self.mult.insert(key, value);
        Ok(())
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Option<Vector> {
        match self.mult.get(&(i.min(j), i.max(j))) {
            None => Some(Vector::zero(self.dim)),
            Some(v) => v.clone(),
        }
    }

    /// Nonzero or unevaluable products with `i <= j`, sorted.
    pub fn products(&self) -> Vec<((usize, usize), Option<Vector>)> {
        let mut out: Vec<_> = self.mult.iter().map(|(k, v)| (*k, v.clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn mul(&self, a: &Vector, b: &Vector) -> Option<Vector> {
        let mut acc = Accumulator::new(self.dim);
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let p = self.basis_product(i, j)?;
                acc.add_vector(&(x * y), &p);
            }
        }
        Some(acc.finish())
    }

    pub fn render(&self, v: &Vector) -> String {
        v.render(&self.labels)
    }
}

/// `A × L -> L`, one partial map per basis element of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleAction {
    l_dim: usize,
    maps: Vec<PartialMap>,
}

impl ModuleAction {
    pub fn new(maps: Vec<PartialMap>, l_dim: usize) -> Result<Self, BundleError> {
        for m in &maps {
            if m.rows() != l_dim || m.cols() != l_dim {
                return Err(BundleError::Shape {
                    what: "module action map".into(),
                    got: (m.rows(), m.cols()),
                    want: (l_dim, l_dim),
                });
            }
        }
        Ok(ModuleAction { l_dim, maps })
    }

    /// `A = Q` acting by scalars.
    pub fn scalar(l_dim: usize) -> Self {
        ModuleAction { l_dim, maps: vec![MatrixQ::identity(l_dim).into()] }
    }

    pub fn a_dim(&self) -> usize {
        self.maps.len()
    }

    pub fn l_dim(&self) -> usize {
        self.l_dim
    }

    pub fn map(&self, k: usize) -> &PartialMap {
        &self.maps[k]
    }

    pub fn act(&self, a: &Vector, x: &Vector) -> Option<Vector> {
        let mut acc = Accumulator::new(self.l_dim);
        for (k, c) in a.iter() {
            acc.add_vector(c, &self.maps[k].apply(x)?);
        }
        Some(acc.finish())
    }

    /// `x ↦ a·x`.
    pub fn op(&self, a: &Vector) -> PartialMap {
        let n = self.l_dim;
        PartialMap::from_columns(n, (0..n).map(|j| self.act(a, &Vector::unit(n, j))).collect())
    }
}

/// Flags a bundle file claims; they are re-verified on load.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Flags {
    #[serde(default)]
    pub weak: bool,
    #[serde(default)]
    pub full: bool,
    #[serde(default)]
    pub regular: bool,
}

/// `(L, A, [·,·,·], φ, α, ρ)` together with the `A`-module structure on `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RinehartBundle {
    pub lie: Hom3Lie,
    pub alg: CommAlgebra,
    pub action: ModuleAction,
    pub rho: PairAction,
    pub flags: Flags,
    /// Splitting Cartan subalgebra, when one is known.
    pub h: Option<SubspaceQ>,
}

impl RinehartBundle {
    pub fn new(lie: Hom3Lie, alg: CommAlgebra, action: ModuleAction, rho: PairAction) -> Result<Self, BundleError> {
        let (n, m) = (lie.dim(), alg.dim());
        let shape = |what: &str, got: (usize, usize), want: (usize, usize)| {
            if got == want {
                Ok(())
            } else {
                Err(BundleError::Shape { what: what.into(), got, want })
            }
        };
        shape("phi", (alg.phi.rows(), alg.phi.cols()), (m, m))?;
        shape("module action", (action.a_dim(), action.l_dim()), (m, n))?;
        shape("rho", (rho.source_dim(), rho.target_dim()), (n, m))?;
        Ok(RinehartBundle { lie, alg, action, rho, flags: Flags::default(), h: None })
    }

    /// A multiplicative Hom 3-Lie algebra over `A = Q` with `ρ = 0`.
    pub fn over_scalars(lie: Hom3Lie) -> Self {
        let n = lie.dim();
        RinehartBundle::new(lie, CommAlgebra::scalars(), ModuleAction::scalar(n), PairAction::new(n, 1))
            .expect("shapes agree")
    }

    pub fn l_dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn a_dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn rep(&self) -> HomRep {
        HomRep::new(self.rho.clone(), self.alg.phi.clone()).with_labels(self.alg.labels.clone())
    }

    pub fn act(&self, a: &Vector, x: &Vector) -> Option<Vector> {
        self.action.act(a, x)
    }

    pub fn rho_apply(&self, x: &Vector, y: &Vector, a: &Vector) -> Option<Vector> {
        self.rho.apply(x, y, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Space {
    L,
    A,
}

/// Precomputed basis data for the residual functions.
struct Ctx<'a> {
    b: &'a RinehartBundle,
    e: Vec<Vector>,
    ae: Vec<Vector>,
    a2e: Vec<Vector>,
    u: Vec<Vector>,
    phi_u: Vec<Vector>,
    phi2_u: Vec<Vector>,
}

impl<'a> Ctx<'a> {
    fn new(b: &'a RinehartBundle) -> Self {
        let (n, m) = (b.l_dim(), b.a_dim());
        let e: Vec<Vector> = (0..n).map(|i| Vector::unit(n, i)).collect();
        let ae: Vec<Vector> = e.iter().map(|x| b.lie.alpha.apply(x)).collect();
        let a2e = ae.iter().map(|x| b.lie.alpha.apply(x)).collect();
        let u: Vec<Vector> = (0..m).map(|i| Vector::unit(m, i)).collect();
        let phi_u: Vec<Vector> = u.iter().map(|x| b.alg.phi.apply(x)).collect();
        let phi2_u = phi_u.iter().map(|x| b.alg.phi.apply(x)).collect();
        Ctx { b, e, ae, a2e, u, phi_u, phi2_u }
    }

    fn br(&self, i: usize, j: usize, k: usize) -> Option<Vector> {
        self.b.lie.bracket.basis(i, j, k)
    }

    fn rho(&self, x: &Vector, y: &Vector, a: &Vector) -> Option<Vector> {
        self.b.rho.apply(x, y, a)
    }

    fn rho_b(&self, i: usize, j: usize, a: usize) -> Option<Vector> {
        self.b.rho.apply(&self.e[i], &self.e[j], &self.u[a])
    }

    fn mul(&self, a: &Vector, b: &Vector) -> Option<Vector> {
        self.b.alg.mul(a, b)
    }

    fn act(&self, a: &Vector, x: &Vector) -> Option<Vector> {
        self.b.action.act(a, x)
    }

    fn phi(&self, a: &Vector) -> Vector {
        self.b.alg.phi.apply(a)
    }

    fn alpha(&self, x: &Vector) -> Vector {
        self.b.lie.alpha.apply(x)
    }

    fn witness(&self, names: &[(&str, Space)], t: &[usize], r: &Vector, out: Space) -> Witness {
        let label = |s: Space, i: usize| match s {
            Space::L => self.b.lie.label(i),
            Space::A => self.b.alg.labels[i].clone(),
        };
        Witness {
            args: names.iter().zip(t).map(|((n, s), &i)| (n.to_string(), label(*s, i))).collect(),
            residual: match out {
                Space::L => self.b.lie.render(r),
                Space::A => self.b.alg.render(r),
            },
        }
    }
}

fn run<F>(c: &Ctx, name: &str, blocks: &[Block], names: &[(&str, Space)], out: Space, f: F) -> CheckReport
where
    F: Fn(&Ctx, &[usize]) -> Option<Vector>,
{
    let mut tally = Tally::new(name);
    for_each_tuple(blocks, |t| tally.record(f(c, t), |r| c.witness(names, t, r, out)));
    tally.finish()
}

const fn inc(len: usize, range: usize) -> Block {
    Block::Increasing { len, range }
}

const fn free(len: usize, range: usize) -> Block {
    Block::Free { len, range }
}

const fn sym(len: usize, range: usize) -> Block {
    Block::NonDecreasing { len, range }
}

/// Algebra axioms of `(A, φ)`: associativity, `φ` multiplicative, unit.
pub fn check_comm_algebra(b: &RinehartBundle) -> Vec<CheckReport> {
    let c = Ctx::new(b);
    let m = b.a_dim();
    let a3 = [("a", Space::A), ("b", Space::A), ("c", Space::A)];
    let mut out = vec![
        run(&c, "assoc", &[free(3, m)], &a3, Space::A, |c, t| {
            let (x, y, z) = (&c.u[t[0]], &c.u[t[1]], &c.u[t[2]]);
            Some(c.mul(&c.mul(x, y)?, z)?.sub(&c.mul(x, &c.mul(y, z)?)?))
        }),
        run(&c, "phi_hom", &[sym(2, m)], &a3[..2], Space::A, |c, t| {
            let (x, y) = (&c.u[t[0]], &c.u[t[1]]);
            Some(c.phi(&c.mul(x, y)?).sub(&c.mul(&c.phi_u[t[0]], &c.phi_u[t[1]])?))
        }),
    ];
    if let Some(one) = &b.alg.unit {
        out.push(run(&c, "unit", &[free(1, m)], &a3[..1], Space::A, |c, t| {
            Some(c.mul(one, &c.u[t[0]])?.sub(&c.u[t[0]]))
        }));
        out.push(run(&c, "phi_unit", &[], &[], Space::A, |c, _| Some(c.phi(one).sub(one))));
    }
    out
}

/// `L` is an `A`-module: `(ab)x = a(bx)` and `1x = x`.
pub fn check_module(b: &RinehartBundle) -> Vec<CheckReport> {
    let c = Ctx::new(b);
    let (n, m) = (b.l_dim(), b.a_dim());
    let names = [("a", Space::A), ("b", Space::A), ("x", Space::L)];
    let mut out = vec![run(&c, "module_assoc", &[free(2, m), free(1, n)], &names, Space::L, |c, t| {
        let (x, y, v) = (&c.u[t[0]], &c.u[t[1]], &c.e[t[2]]);
        Some(c.act(&c.mul(x, y)?, v)?.sub(&c.act(x, &c.act(y, v)?)?))
    })];
    if let Some(one) = &b.alg.unit {
        out.push(run(&c, "module_unit", &[free(1, n)], &[("x", Space::L)], Space::L, |c, t| {
            Some(c.act(one, &c.e[t[0]])?.sub(&c.e[t[0]]))
        }));
    }
    out
}

/// `D` is a `φ`-derivation of `A`: `D(ab) = φ(a)D(b) + D(a)φ(b)` on basis
/// pairs, plus the ternary form `D(abc) = φ(ab)D(c) + φ(ac)D(b) + φ(bc)D(a)`.
pub fn check_phi_derivation(alg: &CommAlgebra, d: &PartialMap) -> Vec<CheckReport> {
    let m = alg.dim();
    let u = |i: usize| Vector::unit(m, i);
    let phi = |a: &Vector| alg.phi.apply(a);
    let label = |i: usize| alg.labels[i].clone();
    let wit = |names: &[&str], t: &[usize], r: &Vector| Witness {
        args: names.iter().zip(t).map(|(n, &i)| (n.to_string(), label(i))).collect(),
        residual: alg.render(r),
    };
    let mut binary = Tally::new("phi_derivation");
    for_each_tuple(&[sym(2, m)], |t| {
        let (a, b) = (u(t[0]), u(t[1]));
        let r = (|| {
            let lhs = d.apply(&alg.mul(&a, &b)?)?;
            Some(lhs.sub(&alg.mul(&phi(&a), &d.apply(&b)?)?).sub(&alg.mul(&d.apply(&a)?, &phi(&b))?))
        })();
        binary.record(r, |r| wit(&["a", "b"], t, r));
    });
    let mut ternary = Tally::new("phi_derivation_ternary");
    for_each_tuple(&[sym(3, m)], |t| {
        let (a, b, c) = (u(t[0]), u(t[1]), u(t[2]));
        let r = (|| {
            let lhs = d.apply(&alg.mul(&alg.mul(&a, &b)?, &c)?)?;
            let t1 = alg.mul(&phi(&alg.mul(&a, &b)?), &d.apply(&c)?)?;
            let t2 = alg.mul(&phi(&alg.mul(&a, &c)?), &d.apply(&b)?)?;
            let t3 = alg.mul(&phi(&alg.mul(&b, &c)?), &d.apply(&a)?)?;
            Some(lhs.sub(&t1).sub(&t2).sub(&t3))
        })();
        ternary.record(r, |r| wit(&["a", "b", "c"], t, r));
    });
    vec![binary.finish(), ternary.finish()]
}

/// Every `ρ(e_i, e_j)` is a `φ`-derivation: `D(ab) = φ(a)D(b) + D(a)φ(b)`.
pub fn check_rho_derivations(b: &RinehartBundle) -> CheckReport {
    let c = Ctx::new(b);
    let (n, m) = (b.l_dim(), b.a_dim());
    let names = [("x", Space::L), ("y", Space::L), ("a", Space::A), ("b", Space::A)];
    run(&c, "rho_derivation", &[inc(2, n), sym(2, m)], &names, Space::A, |c, t| {
        let (x, y, p, q) = (&c.e[t[0]], &c.e[t[1]], &c.u[t[2]], &c.u[t[3]]);
        let lhs = c.rho(x, y, &c.mul(p, q)?)?;
        let r1 = c.mul(&c.phi_u[t[2]], &c.rho(x, y, q)?)?;
        let r2 = c.mul(&c.rho(x, y, p)?, &c.phi_u[t[3]])?;
        Some(lhs.sub(&r1).sub(&r2))
    })
}

/// `α(ax) = φ(a)α(x)` and `[x,y,az] = φ(a)[x,y,z] + ρ(x,y)(a)α(z)`.
pub fn check_hom_compat(b: &RinehartBundle) -> Vec<CheckReport> {
    let c = Ctx::new(b);
    let (n, m) = (b.l_dim(), b.a_dim());
    vec![
        run(&c, "alpha_module", &[free(1, m), free(1, n)], &[("a", Space::A), ("x", Space::L)], Space::L, |c, t| {
            let lhs = c.alpha(&c.act(&c.u[t[0]], &c.e[t[1]])?);
            Some(lhs.sub(&c.act(&c.phi_u[t[0]], &c.ae[t[1]])?))
        }),
        run(
            &c,
            "hom_leibniz",
            &[inc(2, n), free(1, n), free(1, m)],
            &[("x", Space::L), ("y", Space::L), ("z", Space::L), ("a", Space::A)],
            Space::L,
            |c, t| {
                let (x, y, z, a) = (&c.e[t[0]], &c.e[t[1]], &c.e[t[2]], &c.u[t[3]]);
                let lhs = c.b.lie.br(x, y, &c.act(a, z)?)?;
                let r1 = c.act(&c.phi_u[t[3]], &c.br(t[0], t[1], t[2])?)?;
                let r2 = c.act(&c.rho(x, y, a)?, &c.ae[t[2]])?;
                Some(lhs.sub(&r1).sub(&r2))
            },
        ),
    ]
}

/// Residual operator `ρ(ax, y) - φ(a)ρ(x, y)` on `A`, for arbitrary elements.
pub fn anchor_residual_at(b: &RinehartBundle, a: &Vector, x: &Vector, y: &Vector) -> Option<PartialMap> {
    let ax = b.act(a, x)?;
    let lhs = b.rho.op(&ax, y);
    let pa = b.alg.phi.apply(a);
    let m = b.a_dim();
    let cols = (0..m)
        .map(|k| {
            let v = b.rho_apply(x, y, &Vector::unit(m, k))?;
            b.alg.mul(&pa, &v)
        })
        .collect();
    let rhs = PartialMap::from_columns(m, cols);
    Some(lhs.add_scaled(&-crate::exactq::Rational::one(), &rhs))
}

/// `ρ(ax, y) = ρ(x, ay) = φ(a)ρ(x, y)` on basis elements.
pub fn check_anchor_linear(b: &RinehartBundle) -> Vec<CheckReport> {
    let c = Ctx::new(b);
    let (n, m) = (b.l_dim(), b.a_dim());
    let names = [("a", Space::A), ("x", Space::L), ("y", Space::L), ("b", Space::A)];
    let blocks = [free(1, m), free(2, n), free(1, m)];
    let common = |c: &Ctx, t: &[usize]| c.mul(&c.phi_u[t[0]], &c.rho_b(t[1], t[2], t[3])?);
    vec![
        run(&c, "anchor_linear_left", &blocks, &names, Space::A, |c, t| {
            let ax = c.act(&c.u[t[0]], &c.e[t[1]])?;
            Some(c.rho(&ax, &c.e[t[2]], &c.u[t[3]])?.sub(&common(c, t)?))
        }),
        run(&c, "anchor_linear_right", &blocks, &names, Space::A, |c, t| {
            let ay = c.act(&c.u[t[0]], &c.e[t[2]])?;
            Some(c.rho(&c.e[t[1]], &ay, &c.u[t[3]])?.sub(&common(c, t)?))
        }),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RinehartReport {
    pub status: Status,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RinehartReport {
    fn from_checks(checks: Vec<CheckReport>) -> Self {
        let status = if checks.iter().all(|c| matches!(c.status, Status::Pass | Status::NotApplicable)) {
            Status::Pass
        } else {
            Status::Fail
        };
        RinehartReport { status, checks, note: None }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn get(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// First failing check.
    pub fn first_failure(&self) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }
}

/// Axioms of a weak Hom 3-Lie-Rinehart algebra.
pub fn check_weak_rinehart(b: &RinehartBundle) -> RinehartReport {
    let rep = b.rep();
    let mut checks = vec![core3lie::check_hom_jacobi(&b.lie), core3lie::check_multiplicative(&b.lie)];
    checks.extend(check_comm_algebra(b));
    checks.extend(check_module(b));
    checks.push(check_rho_derivations(b));
    checks.extend(repmod::check_hom_rep(&b.lie, &rep));
    checks.extend(check_hom_compat(b));
    RinehartReport::from_checks(checks)
}

/// Weak axioms plus `A`-linearity of the anchor. Blocked if the weak
/// axioms fail.
pub fn check_full_rinehart(b: &RinehartBundle) -> RinehartReport {
    let weak = check_weak_rinehart(b);
    let anchor = check_anchor_linear(b);
    if !weak.passed() {
        let why = format!(
            "weak axioms fail ({})",
            weak.first_failure().map_or("unknown".to_string(), |c| c.name.clone())
        );
        let mut checks = weak.checks;
        checks.extend(anchor);
        return RinehartReport { status: Status::Blocked, checks, note: Some(why) };
    }
    let mut checks = weak.checks;
    checks.extend(anchor);
    RinehartReport::from_checks(checks)
}

/// `α` and `φ` invertible and the bundle is multiplicative.
pub fn check_regular(b: &RinehartBundle) -> CheckReport {
    let mut problems = Vec::new();
    if !b.lie.alpha.is_invertible() {
        problems.push("alpha is not invertible");
    }
    if !b.alg.phi.is_invertible() {
        problems.push("phi is not invertible");
    }
    if !core3lie::check_multiplicative(&b.lie).passed() {
        problems.push("alpha is not multiplicative");
    }
    CheckReport::verdict("regular", problems.is_empty(), (!problems.is_empty()).then(|| problems.join("; ")))
}

/// The derived identities of a Hom 3-Lie-Rinehart algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    Ho1,
    Ho2,
    Ho3,
    Ho4,
    Ho5,
    Ho6,
    /// `Ho1` with `α([x2,x4,x1])` as last term; fails on genuine bundles.
    Ho1Alt,
    /// `Ho3` with `α([x2,x4,x1])` as third term; fails on genuine bundles.
    Ho3Alt,
}

impl Identity {
    pub const SUITE: [Identity; 6] =
        [Identity::Ho1, Identity::Ho2, Identity::Ho3, Identity::Ho4, Identity::Ho5, Identity::Ho6];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::Ho1 => "ho1",
            Identity::Ho2 => "ho2",
            Identity::Ho3 => "ho3",
            Identity::Ho4 => "ho4",
            Identity::Ho5 => "ho5",
            Identity::Ho6 => "ho6",
            Identity::Ho1Alt => "ho1_alt",
            Identity::Ho3Alt => "ho3_alt",
        }
    }
}

/// `Σ φρ(x_p,x_q)(a) · α([x_i,x_j,x_k])` over the listed terms.
fn rho_bracket_sum(c: &Ctx, x: &[usize], a: usize, terms: &[([usize; 2], [usize; 3])]) -> Option<Vector> {
    let mut acc = Vector::zero(c.b.l_dim());
    for ([p, q], [i, j, k]) in terms {
        let coeff = c.rho_b(x[*p], x[*q], a)?;
        if coeff.is_zero() {
            continue;
        }
        let br = c.br(x[*i], x[*j], x[*k])?;
        if br.is_zero() {
            continue;
        }
        acc = acc.add(&c.act(&c.phi(&coeff), &c.alpha(&br))?);
    }
    Some(acc)
}

// Index 0..4 stands for x1..x5.
const HO1: [([usize; 2], [usize; 3]); 6] = [
    ([3, 4], [0, 1, 2]),
    ([4, 2], [0, 1, 3]),
    ([2, 3], [0, 1, 4]),
    ([1, 2], [0, 3, 4]),
    ([1, 3], [2, 0, 4]),
    ([1, 4], [2, 3, 0]),
];
const HO1_ALT: [([usize; 2], [usize; 3]); 6] = [
    ([3, 4], [0, 1, 2]),
    ([4, 2], [0, 1, 3]),
    ([2, 3], [0, 1, 4]),
    ([1, 2], [0, 3, 4]),
    ([1, 3], [2, 0, 4]),
    ([1, 4], [1, 3, 0]),
];
const HO2: [([usize; 2], [usize; 3]); 6] = [
    ([3, 4], [0, 1, 2]),
    ([4, 2], [0, 1, 3]),
    ([2, 3], [0, 1, 4]),
    ([2, 0], [1, 3, 4]),
    ([3, 0], [2, 1, 4]),
    ([4, 0], [2, 3, 1]),
];
const HO3: [([usize; 2], [usize; 3]); 6] = [
    ([1, 2], [0, 3, 4]),
    ([1, 3], [2, 0, 4]),
    ([1, 4], [2, 3, 0]),
    ([0, 2], [1, 3, 4]),
    ([0, 3], [2, 1, 4]),
    ([0, 4], [2, 3, 1]),
];
const HO3_ALT: [([usize; 2], [usize; 3]); 6] = [
    ([1, 2], [0, 3, 4]),
    ([1, 3], [2, 0, 4]),
    ([1, 4], [1, 3, 0]),
    ([0, 2], [1, 3, 4]),
    ([0, 3], [2, 1, 4]),
    ([0, 4], [2, 3, 1]),
];

/// `Σ ρ(x_p,x_q)(a) ρ(x_r,x_s)(b)` over the listed index quadruples.
fn rho_product_sum(c: &Ctx, x: &[usize], a: usize, b: usize, terms: &[[usize; 4]]) -> Option<Vector> {
    let mut acc = Vector::zero(c.b.a_dim());
    for [p, q, r, s] in terms {
        let u = c.rho_b(x[*p], x[*q], a)?;
        if u.is_zero() {
            continue;
        }
        let v = c.rho_b(x[*r], x[*s], b)?;
        acc = acc.add(&c.mul(&u, &v)?);
    }
    Some(acc)
}

const HO4: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 3, 1, 2], [1, 3, 2, 0]];
const HO5: [[usize; 4]; 3] = [[0, 1, 2, 3], [1, 2, 0, 3], [2, 0, 1, 3]];
const HO6: [[usize; 4]; 4] = [[0, 3, 1, 2], [1, 3, 2, 0], [1, 2, 3, 0], [2, 0, 3, 1]];

/// Tally helper for identities whose outer factor loops over a basis: the
/// inner value is computed once; `k * per` outcomes stand behind it.
fn record_many<F>(tally: &mut Tally, inner: Option<Vector>, k: usize, per: usize, mut each: F)
where
    F: FnMut(usize, &Vector, &mut Tally),
{
    match inner {
        None => tally.add_skipped((k * per) as u64),
        Some(v) if v.is_zero() => tally.add_passes((k * per) as u64),
        Some(v) => {
            for i in 0..k {
                each(i, &v, tally);
            }
        }
    }
}

fn check_one_identity(c: &Ctx, id: Identity) -> CheckReport {
    let (n, m) = (c.b.l_dim(), c.b.a_dim());
    let mut tally = Tally::new(id.name());
    let xs = ["x1", "x2", "x3", "x4", "x5"];
    let wit = |c: &Ctx, x: &[usize], extra: &[(&str, String)], r: &Vector, out: Space| {
        let mut args: Vec<(String, String)> =
            xs.iter().zip(x).map(|(n, &i)| (n.to_string(), c.b.lie.label(i))).collect();
        args.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
        let residual = match out {
            Space::L => c.b.lie.render(r),
            Space::A => c.b.alg.render(r),
        };
        Witness { args, residual }
    };
    let alabel = |i: usize| c.b.alg.labels[i].clone();
    match id {
        Identity::Ho1 | Identity::Ho1Alt => {
            let terms = if id == Identity::Ho1 { &HO1 } else { &HO1_ALT };
            // Alternating in x2..x5; x1 free.
            let blocks = if id == Identity::Ho1 {
                vec![free(1, n), inc(4, n), free(1, m)]
            } else {
                vec![free(5, n), free(1, m)]
            };
            for_each_tuple(&blocks, |t| {
                let r = rho_bracket_sum(c, &t[..5], t[5], terms);
                tally.record(r, |r| wit(c, &t[..5], &[("a", alabel(t[5]))], r, Space::L));
            });
        }
        Identity::Ho2 | Identity::Ho3 | Identity::Ho3Alt => {
            let (terms, blocks): (&[_], Vec<Block>) = match id {
                // Alternating in x1, x3, x4, x5: order the slots as (x2 | x1 x3 x4 x5).
                Identity::Ho2 => (&HO2, vec![free(1, n), inc(4, n), free(1, m)]),
                // Symmetric in x1, x2; alternating in x3, x4, x5.
                Identity::Ho3 => (&HO3, vec![sym(2, n), inc(3, n), free(1, m)]),
                _ => (&HO3_ALT, vec![free(5, n), free(1, m)]),
            };
            for_each_tuple(&blocks, |t| {
                let x: [usize; 5] = if id == Identity::Ho2 { [t[1], t[0], t[2], t[3], t[4]] } else { [t[0], t[1], t[2], t[3], t[4]] };
                let inner = rho_bracket_sum(c, &x, t[5], terms);
                record_many(&mut tally, inner, m, 1, |bi, y, tally| {
                    let r = c.act(&c.phi2_u[bi], y);
                    tally.record(r, |r| wit(c, &x, &[("a", alabel(t[5])), ("b", alabel(bi))], r, Space::L));
                });
            });
        }
        Identity::Ho4 | Identity::Ho5 | Identity::Ho6 => {
            let (terms, blocks): (&[[usize; 4]], Vec<Block>) = match id {
                // Alternating in x1, x2, x4: slots (x1 x2 x4 | x3).
                Identity::Ho4 => (&HO4, vec![inc(3, n), free(1, n), free(2, m)]),
                Identity::Ho5 => (&HO5, vec![inc(3, n), free(1, n), free(2, m)]),
                _ => (&HO6, vec![inc(2, n), sym(2, n), free(2, m)]),
            };
            for_each_tuple(&blocks, |t| {
                let x: [usize; 4] = if id == Identity::Ho4 { [t[0], t[1], t[3], t[2]] } else { [t[0], t[1], t[2], t[3]] };
                let (a, bb) = (t[4], t[5]);
                let e = rho_product_sum(c, &x, a, bb, terms).map(|v| c.phi(&v));
                let extra = |more: Option<usize>| {
                    let mut v = vec![("a", alabel(a)), ("b", alabel(bb))];
                    if let Some(ci) = more {
                        v.push(("c", alabel(ci)));
                    }
                    v
                };
                let x5_loop = |coef: &Vector, tally: &mut Tally, ci: Option<usize>| {
                    // x5 enters only through α²(x5).
                    for x5 in 0..n {
                        let r = c.act(coef, &c.a2e[x5]);
                        let full = [x[0], x[1], x[2], x[3], x5];
                        tally.record(r, |r| wit(c, &full, &extra(ci), r, Space::L));
                    }
                };
                if id == Identity::Ho4 {
                    record_many(&mut tally, e, 1, n, |_, v, tally| x5_loop(v, tally, None));
                } else {
                    record_many(&mut tally, e, m, n, |ci, v, tally| match c.mul(&c.phi2_u[ci], v) {
                        None => tally.add_skipped(n as u64),
                        Some(w) => x5_loop(&w, tally, Some(ci)),
                    });
                }
            });
        }
    }
    tally.finish()
}

/// One derived identity, without checking preconditions.
pub fn check_identity(b: &RinehartBundle, id: Identity) -> CheckReport {
    check_one_identity(&Ctx::new(b), id)
}

/// ho1..ho6; blocked unless the bundle passes the full axioms.
pub fn check_identity_suite(b: &RinehartBundle) -> RinehartReport {
    let full = check_full_rinehart(b);
    if !full.passed() {
        let why = "bundle is not a Hom 3-Lie-Rinehart algebra";
        let checks = Identity::SUITE.iter().map(|id| CheckReport::blocked(id.name(), why)).collect();
        return RinehartReport { status: Status::Blocked, checks, note: Some(why.into()) };
    }
    let c = Ctx::new(b);
    RinehartReport::from_checks(Identity::SUITE.iter().map(|&id| check_one_identity(&c, id)).collect())
}

/// `I` is an ideal: Hom 3-Lie ideal, `AI ⊆ I`, `ρ(I, L)(A)L ⊆ I`.
pub fn rinehart_ideal_check(b: &RinehartBundle, ideal: &SubspaceQ) -> RinehartReport {
    let (n, m) = (b.l_dim(), b.a_dim());
    let basis = ideal.basis();
    let mut checks = vec![core3lie::is_ideal(&b.lie, ideal)];
    let mut t = Tally::new("a_stable");
    for s in basis {
        for k in 0..m {
            let v = b.act(&Vector::unit(m, k), s);
            t.record_bool(v.map(|v| ideal.contains(&v)), || Witness {
                args: vec![("a".into(), b.alg.labels[k].clone()), ("s".into(), b.lie.render(s))],
                residual: "a*s leaves the ideal".into(),
            });
        }
    }
    checks.push(t.finish());
    let mut t = Tally::new("anchor_stable");
    for s in basis {
        for j in 0..n {
            for k in 0..m {
                let Some(coef) = b.rho_apply(s, &Vector::unit(n, j), &Vector::unit(m, k)) else {
                    t.add_skipped(n as u64);
                    continue;
                };
                for z in 0..n {
                    let v = if coef.is_zero() { Some(Vector::zero(n)) } else { b.act(&coef, &Vector::unit(n, z)) };
                    t.record_bool(v.map(|v| ideal.contains(&v)), || Witness {
                        args: vec![
                            ("s".into(), b.lie.render(s)),
                            ("y".into(), b.lie.label(j)),
                            ("a".into(), b.alg.labels[k].clone()),
                            ("z".into(), b.lie.label(z)),
                        ],
                        residual: "rho(s,y)(a)z leaves the ideal".into(),
                    });
                }
            }
        }
    }
    checks.push(t.finish());
    RinehartReport::from_checks(checks)
}

/// Adds the equations `ρ(x, e_j)(a_k) = 0` (unknown `x`) to a reducer.
fn push_ker_rho_equations(b: &RinehartBundle, red: &mut RowReducer) -> usize {
    let (n, m) = (b.l_dim(), b.a_dim());
    let mut dropped = 0;
    for j in 0..n {
        for k in 0..m {
            let cols: Option<Vec<Vector>> =
                (0..n).map(|i| b.rho_apply(&Vector::unit(n, i), &Vector::unit(n, j), &Vector::unit(m, k))).collect();
            let Some(cols) = cols else {
                dropped += 1;
                continue;
            };
            for row in MatrixQ::from_columns(m, cols).row_vectors() {
                red.insert(&row);
            }
            if red.is_full() {
                return dropped;
            }
        }
    }
    dropped
}

/// `Kerρ = {x : ρ(x, L) = 0}` from the fully evaluable equations.
pub fn ker_rho(b: &RinehartBundle) -> Solved {
    let n = b.l_dim();
    let mut red = RowReducer::new(n);
    let dropped = push_ker_rho_equations(b, &mut red);
    Solved { space: SubspaceQ::from_vectors(n, kernel_from_rref(&red.into_rref(), n)), dropped }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KerRhoReport {
    pub kernel: Vec<String>,
    pub dim: usize,
    pub dropped_equations: usize,
    pub ideal: RinehartReport,
}

/// `Kerρ` and whether it satisfies the ideal laws.
pub fn ker_rho_ideal(b: &RinehartBundle) -> (Solved, KerRhoReport) {
    let k = ker_rho(b);
    let ideal = rinehart_ideal_check(b, &k.space);
    let rep = KerRhoReport {
        kernel: k.space.basis().iter().map(|v| b.lie.render(v)).collect(),
        dim: k.space.dim(),
        dropped_equations: k.dropped,
        ideal,
    };
    (k, rep)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Centers {
    /// `Z_L(A) = {a : aL = 0}`.
    pub z_l_a: Solved,
    /// `Z_ρ(L) = {x : [x, L, L] = 0, ρ(x, L) = 0}`, solved as one system.
    pub z_rho: Solved,
    /// `Z(L) ∩ Kerρ`, computed separately.
    pub z_cap_ker: SubspaceQ,
}

impl Centers {
    pub fn consistent(&self) -> bool {
        self.z_rho.space == self.z_cap_ker
    }
}

pub fn centers(b: &RinehartBundle) -> Centers {
    let (n, m) = (b.l_dim(), b.a_dim());
    // Z_L(A): unknown a, equations a·e_x = 0.
    let mut red = RowReducer::new(m);
    let mut dropped = 0;
    for x in 0..n {
        let cols: Option<Vec<Vector>> = (0..m).map(|k| b.action.map(k).column(x).cloned()).collect();
        let Some(cols) = cols else {
            dropped += 1;
            continue;
        };
        for row in MatrixQ::from_columns(n, cols).row_vectors() {
            red.insert(&row);
        }
    }
    let z_l_a = Solved { space: SubspaceQ::from_vectors(m, kernel_from_rref(&red.into_rref(), m)), dropped };

    let mut red = RowReducer::new(n);
    let mut dropped = 0;
    for j in 0..n {
        for k in j + 1..n {
            let cols: Option<Vec<Vector>> = (0..n).map(|i| b.lie.bracket.basis(i, j, k)).collect();
            let Some(cols) = cols else {
                dropped += 1;
                continue;
            };
            for row in MatrixQ::from_columns(n, cols).row_vectors() {
                red.insert(&row);
            }
        }
    }
    dropped += push_ker_rho_equations(b, &mut red);
    let z_rho = Solved { space: SubspaceQ::from_vectors(n, kernel_from_rref(&red.into_rref(), n)), dropped };
    let z_cap_ker = core3lie::center(&b.lie).intersect(&ker_rho(b).space);
    Centers { z_l_a, z_rho, z_cap_ker }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core3lie::Bracket;
    use crate::exactq::Rational;
    use crate::report::symmetry::{assert_reduction, Group::*};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> MatrixQ {
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        MatrixQ::from_int_rows(&rows)
    }

    /// Structure with random constants and no axioms.
    fn random_bundle(n: usize, m: usize, seed: u64) -> RinehartBundle {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut br = Bracket::new(n);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
                    br.set(i, j, k, Some(Vector::from_ints(&v))).unwrap();
                }
            }
        }
        let lie = Hom3Lie::new(br, random_matrix(&mut rng, n, n));
        let mut alg = CommAlgebra::new(m);
        for i in 0..m {
            for j in i..m {
                let v: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..=1)).collect();
                alg.set_product(i, j, Some(Vector::from_ints(&v))).unwrap();
            }
        }
        alg.phi = random_matrix(&mut rng, m, m);
        let maps = (0..m).map(|_| random_matrix(&mut rng, n, n).into()).collect();
        let action = ModuleAction::new(maps, n).unwrap();
        let mut rho = PairAction::new(n, m);
        for i in 0..n {
            for j in i + 1..n {
                rho.set(i, j, random_matrix(&mut rng, m, m).into()).unwrap();
            }
        }
        RinehartBundle::new(lie, alg, action, rho).unwrap()
    }

    #[test]
    fn truncated_poly_is_a_unital_algebra() {
        let mut a = CommAlgebra::truncated_poly(3);
        a.phi = MatrixQ::diagonal(&[Rational::one(), Rational::from_int(2), Rational::from_int(4)]);
        let b = RinehartBundle::new(
            Hom3Lie::new(Bracket::new(1), MatrixQ::identity(1)),
            a,
            ModuleAction::new(vec![MatrixQ::identity(1).into(), MatrixQ::zero(1, 1).into(), MatrixQ::zero(1, 1).into()], 1)
                .unwrap(),
            PairAction::new(1, 3),
        )
        .unwrap();
        assert!(check_comm_algebra(&b).iter().all(CheckReport::passed));
        assert!(check_module(&b).iter().all(CheckReport::passed));
    }

    #[test]
    fn scalar_bundle_over_d4_passes_full_suite() {
        let mut br = Bracket::new(4);
        br.set(0, 1, 2, Some(Vector::unit(4, 3))).unwrap();
        let lie = Hom3Lie::new(br, MatrixQ::scalar(4, &Rational::from_int(-1)));
        let b = RinehartBundle::over_scalars(lie);
        assert!(check_full_rinehart(&b).passed());
        assert!(check_identity_suite(&b).passed());
        let c = centers(&b);
        assert!(c.consistent());
        assert_eq!(c.z_l_a.space.dim(), 0);
    }

    /// `Q[z]` cut at degree `d`, products past the cap unevaluable.
    fn capped_poly(d: usize) -> CommAlgebra {
        let m = d + 1;
        let mut a = CommAlgebra::new(m);
        for i in 0..m {
            for j in i..m {
                let v = (i + j < m).then(|| Vector::unit(m, i + j));
                a.set_product(i, j, v).unwrap();
            }
        }
        a.unit = Some(Vector::unit(m, 0));
        a
    }

    #[test]
    fn phi_derivation_examples() {
        let a = capped_poly(3);
        let zero = PartialMap::zero(4, 4);
        assert!(check_phi_derivation(&a, &zero).iter().all(CheckReport::passed));
        let ddz = MatrixQ::from_columns(4, (0..4).map(|i| Vector::unit(4, i.max(1) - 1).scale(&Rational::from_int(i as i64))).collect());
        let r = check_phi_derivation(&a, &ddz.into());
        assert!(r.iter().all(|c| c.passed() && c.evaluated > 0 && c.skipped > 0), "{r:?}");
        let id = PartialMap::from(MatrixQ::identity(4));
        let r = check_phi_derivation(&a, &id);
        assert_eq!(r[0].status, Status::Fail);
        assert_eq!(r[0].witness.as_ref().unwrap().args[0].1, "a1");
    }

    #[test]
    fn ideal_check_rejects_non_ideal() {
        let mut br = Bracket::new(4);
        br.set(0, 1, 2, Some(Vector::unit(4, 3))).unwrap();
        let b = RinehartBundle::over_scalars(Hom3Lie::new(br, MatrixQ::identity(4)));
        assert!(!rinehart_ideal_check(&b, &SubspaceQ::coordinate(4, &[0])).passed());
        assert!(rinehart_ideal_check(&b, &SubspaceQ::coordinate(4, &[3])).passed());
        assert!(rinehart_ideal_check(&b, &SubspaceQ::zero(4)).passed());
        assert!(rinehart_ideal_check(&b, &SubspaceQ::full(4)).passed());
        let (k, _) = ker_rho_ideal(&b);
        assert!(k.space.is_full());
    }

    #[test]
    fn identity_symmetries_hold_on_unstructured_data() {
        let b = random_bundle(4, 2, 5);
        let c = Ctx::new(&b);
        let ranges = [4, 4, 4, 4, 4, 2];
        assert_reduction(&ranges, &[Alt(&[1, 2, 3, 4])], |t| rho_bracket_sum(&c, &t[..5], t[5], &HO1).unwrap());
        assert_reduction(&ranges, &[Alt(&[0, 2, 3, 4])], |t| rho_bracket_sum(&c, &t[..5], t[5], &HO2).unwrap());
        assert_reduction(&ranges, &[Sym(&[0, 1]), Alt(&[2, 3, 4])], |t| {
            rho_bracket_sum(&c, &t[..5], t[5], &HO3).unwrap()
        });
        let r6 = [4, 4, 4, 4, 2, 2];
        assert_reduction(&r6, &[Alt(&[0, 1, 3])], |t| rho_product_sum(&c, &t[..4], t[4], t[5], &HO4).unwrap());
        assert_reduction(&r6, &[Alt(&[0, 1, 2])], |t| rho_product_sum(&c, &t[..4], t[4], t[5], &HO5).unwrap());
        assert_reduction(&r6, &[Alt(&[0, 1]), Sym(&[2, 3])], |t| {
            rho_product_sum(&c, &t[..4], t[4], t[5], &HO6).unwrap()
        });
    }

    #[test]
    fn alternate_ho1_lacks_the_alternation() {
        let b = random_bundle(4, 2, 9);
        let c = Ctx::new(&b);
        let mut broken = false;
        for_each_tuple(&[free(5, 4), free(1, 2)], |t| {
            let v = rho_bracket_sum(&c, &t[..5], t[5], &HO1_ALT).unwrap();
            let swapped = [t[0], t[2], t[1], t[3], t[4]];
            let w = rho_bracket_sum(&c, &swapped, t[5], &HO1_ALT).unwrap();
            broken |= v != w.neg();
        });
        assert!(broken);
    }

    #[test]
    fn anchor_and_leibniz_reductions() {
        let b = random_bundle(4, 2, 13);
        let c = Ctx::new(&b);
        // hom_leibniz walks x < y only.
        let f = |t: &[usize]| {
            let (x, y, z, a) = (&c.e[t[0]], &c.e[t[1]], &c.e[t[2]], &c.u[t[3]]);
            let lhs = b.lie.br(x, y, &c.act(a, z).unwrap()).unwrap();
            let r1 = c.act(&c.phi_u[t[3]], &c.br(t[0], t[1], t[2]).unwrap()).unwrap();
            let r2 = c.act(&c.rho(x, y, a).unwrap(), &c.ae[t[2]]).unwrap();
            lhs.sub(&r1).sub(&r2)
        };
        assert_reduction(&[4, 4, 4, 2], &[Alt(&[0, 1])], f);
        // rho derivation residual is symmetric in (a, b).
        assert_reduction(&[4, 4, 2, 2], &[Alt(&[0, 1]), Sym(&[2, 3])], |t| {
            let (x, y, p, q) = (&c.e[t[0]], &c.e[t[1]], &c.u[t[2]], &c.u[t[3]]);
            let lhs = c.rho(x, y, &c.mul(p, q).unwrap()).unwrap();
            let r1 = c.mul(&c.phi_u[t[2]], &c.rho(x, y, q).unwrap()).unwrap();
            let r2 = c.mul(&c.rho(x, y, p).unwrap(), &c.phi_u[t[3]]).unwrap();
            lhs.sub(&r1).sub(&r2)
        });
    }
}
