//! Built-in example bundles: truncations of function-space algebras under the
//! Jacobian bracket, small hand-built split algebras, and a seeded family of
//! representations of the 4-dimensional 3-Lie algebra `D4`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core3lie::{Bracket, Hom3Lie};
use crate::exactq::{MatrixQ, PartialMap, Rational, SubspaceQ, Vector};
use crate::repmod::PairAction;
use crate::rinehart::{CommAlgebra, Flags, ModuleAction, RinehartBundle};
use crate::symfun::{jacobian, ExpPoly, Mono};

pub const MAX_DEGREE: u32 = 6;
pub const MAX_WINDOW: i64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusName {
    JacobianWeak,
    TbRinehart,
    L1Hom,
    RhoPrime,
    TprimeSplit,
    ToySplit,
    D4,
    TwoBlock,
}

impl CorpusName {
    pub const ALL: [CorpusName; 8] = [
        CorpusName::JacobianWeak,
        CorpusName::TbRinehart,
        CorpusName::L1Hom,
        CorpusName::RhoPrime,
        CorpusName::TprimeSplit,
        CorpusName::ToySplit,
        CorpusName::D4,
        CorpusName::TwoBlock,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CorpusName::JacobianWeak => "jacobian-weak",
            CorpusName::TbRinehart => "tb-rinehart",
            CorpusName::L1Hom => "l1-hom",
            CorpusName::RhoPrime => "rho-prime",
            CorpusName::TprimeSplit => "tprime-split",
            CorpusName::ToySplit => "toy-split",
            CorpusName::D4 => "d4",
            CorpusName::TwoBlock => "two-block",
        }
    }
}

impl fmt::Display for CorpusName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorpusName {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CorpusName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CorpusError::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("unknown corpus {0:?}")]
    UnknownName(String),
    #[error("degree cap {0} outside 1..={MAX_DEGREE}")]
    Degree(u32),
    #[error("window {0} outside 1..={MAX_WINDOW}")]
    Window(i64),
    #[error("corpus {name} has no variant {variant:?}")]
    Variant { name: CorpusName, variant: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub name: CorpusName,
    pub degree_cap: u32,
    pub window: i64,
    pub seed: u64,
    pub variant: Option<String>,
}

impl CorpusSpec {
    pub fn new(name: CorpusName) -> Self {
        CorpusSpec { name, degree_cap: 3, window: 3, seed: 0, variant: None }
    }

    pub fn degree(mut self, d: u32) -> Self {
        self.degree_cap = d;
        self
    }

    pub fn window(mut self, k: i64) -> Self {
        self.window = k;
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = s;
        self
    }

    pub fn variant(mut self, v: &str) -> Self {
        self.variant = Some(v.to_string());
        self
    }
}

/// Builds the bundle named by `spec`.
pub fn generate(spec: &CorpusSpec) -> Result<RinehartBundle, CorpusError> {
    let d = spec.degree_cap;
    let k = spec.window;
    let check_d = || if (1..=MAX_DEGREE).contains(&d) { Ok(()) } else { Err(CorpusError::Degree(d)) };
    let check_k = || if (1..=MAX_WINDOW).contains(&k) { Ok(()) } else { Err(CorpusError::Window(k)) };
    let variant = spec.variant.as_deref();
    let bad_variant = |v: &str| CorpusError::Variant { name: spec.name, variant: v.to_string() };
    match spec.name {
        CorpusName::JacobianWeak => {
            check_d()?;
            no_variant(variant, bad_variant)?;
            Ok(jacobian_weak(d))
        }
        CorpusName::TbRinehart => {
            check_d()?;
            no_variant(variant, bad_variant)?;
            Ok(tb_rinehart(d))
        }
        CorpusName::L1Hom => {
            check_d()?;
            check_k()?;
            no_variant(variant, bad_variant)?;
            Ok(l1_hom(d, k))
        }
        CorpusName::RhoPrime => {
            check_d()?;
            match variant {
                None | Some("poly") => Ok(rho_prime(d)),
                Some("tb") => Ok(rho_prime_tb(d)),
                Some(v) => Err(bad_variant(v)),
            }
        }
        CorpusName::TprimeSplit => {
            check_k()?;
            match variant {
                None | Some("full") => Ok(tprime_split(k, true)),
                Some("core") => Ok(tprime_split(k, false)),
                Some(v) => Err(bad_variant(v)),
            }
        }
        CorpusName::ToySplit => {
            no_variant(variant, bad_variant)?;
            Ok(toy_split())
        }
        CorpusName::D4 => {
            no_variant(variant, bad_variant)?;
            Ok(d4_bundle(&D4Params::sample(spec.seed)))
        }
        CorpusName::TwoBlock => match variant {
            None | Some("tprime") => {
                check_k()?;
                let core = tprime_split(k.min(1), false);
                Ok(direct_sum(&core, &core))
            }
            Some("toy") => Ok(direct_sum(&toy_split(), &toy_split())),
            Some(v) => Err(bad_variant(v)),
        },
    }
}

fn no_variant(v: Option<&str>, err: impl Fn(&str) -> CorpusError) -> Result<(), CorpusError> {
    match v {
        None => Ok(()),
        Some(v) => Err(err(v)),
    }
}

/// `x^2y`, `xe^{-2z}`, `1`.
pub fn mono_label(m: &Mono) -> String {
    let mut s = String::new();
    for (name, e) in [("x", m.x), ("y", m.y), ("z", m.z)] {
        match e {
            0 => {}
            1 => s.push_str(name),
            _ => s.push_str(&format!("{name}^{e}")),
        }
    }
    if m.k != 0 {
        s.push_str(&format!("e^{{{}z}}", m.k));
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// Monomials `x^a y^b z^c` with `a + b + c <= d`, by degree, then `x` before `y` before `z`.
pub fn poly_basis(d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for deg in 0..=d {
        for a in (0..=deg).rev() {
            for b in (0..=deg - a).rev() {
                out.push(Mono::new(a, b, deg - a - b, 0));
            }
        }
    }
    out
}

struct Basis {
    monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

impl Basis {
    fn new(monos: Vec<Mono>) -> Self {
        let index = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Basis { monos, index }
    }

    fn dim(&self) -> usize {
        self.monos.len()
    }

    fn elem(&self, i: usize) -> ExpPoly {
        ExpPoly::mono(self.monos[i])
    }

    fn coords(&self, p: &ExpPoly) -> Option<Vector> {
        p.coords(&self.index, self.dim())
    }

    fn labels(&self) -> Vec<String> {
        self.monos.iter().map(mono_label).collect()
    }
}

/// Signs applied to the Jacobian bracket, `α = alpha·Id` and `ρ = rho·ρ_ad`.
struct FnSigns {
    bracket: i64,
    alpha: i64,
    rho: i64,
}

/// `L ⊆ A`-module of functions spanned by monomials, with the Jacobian
/// bracket, multiplication action and `ρ(f, g)(a) = ±[f, g, a]`. Entries whose
/// exact value leaves the spanned space are stored as unevaluable.
fn function_bundle(l: &Basis, a: &Basis, s: FnSigns) -> RinehartBundle {
    let (n, m) = (l.dim(), a.dim());
    let sb = Rational::from_int(s.bracket);
    let sr = Rational::from_int(s.rho);

    let mut bracket = Bracket::new(n);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let v = jacobian(&l.elem(i), &l.elem(j), &l.elem(k)).scale(&sb);
                bracket.set(i, j, k, l.coords(&v)).expect("sorted triple");
            }
        }
    }
    let lie = Hom3Lie::new(bracket, MatrixQ::scalar(n, &Rational::from_int(s.alpha))).with_labels(l.labels());

    let mut alg = CommAlgebra::new(m);
    for i in 0..m {
        for j in i..m {
            alg.set_product(i, j, a.coords(&a.elem(i).mul(&a.elem(j)))).expect("in range");
        }
    }
    alg.unit = a.index.get(&Mono::ONE).map(|&i| Vector::unit(m, i));
    alg.labels = a.labels();

    let maps = (0..m)
        .map(|k| PartialMap::from_columns(n, (0..n).map(|j| l.coords(&a.elem(k).mul(&l.elem(j)))).collect()))
        .collect();
    let action = ModuleAction::new(maps, n).expect("square maps");

    let mut rho = PairAction::new(n, m);
    if s.rho != 0 {
        for i in 0..n {
            for j in i + 1..n {
                let cols = (0..m).map(|k| a.coords(&jacobian(&l.elem(i), &l.elem(j), &a.elem(k)).scale(&sr))).collect();
                rho.set(i, j, PartialMap::from_columns(m, cols)).expect("valid pair");
            }
        }
    }
    RinehartBundle::new(lie, alg, action, rho).expect("shapes agree")
}

/// Polynomials of degree `<= d` as both `L` and `A`, `ρ = ρ_ad`, no twist.
pub fn jacobian_weak(d: u32) -> RinehartBundle {
    let p = Basis::new(poly_basis(d));
    let mut b = function_bundle(&p, &p, FnSigns { bracket: 1, alpha: 1, rho: 1 });
    b.flags = Flags { weak: true, full: false, regular: true };
    b
}

/// `L = A = P_d`, `α = -Id`, `φ = Id`, `ρ = -ρ_ad`.
pub fn rho_prime(d: u32) -> RinehartBundle {
    let p = Basis::new(poly_basis(d));
    let mut b = function_bundle(&p, &p, FnSigns { bracket: 1, alpha: -1, rho: -1 });
    b.flags = Flags { weak: true, full: false, regular: true };
    b
}

/// `T = <x z^i, y z^i>` ordered `x, y, xz, yz, ...` and `B = <z^i>`, `i <= d`.
fn tb_bases(d: u32) -> (Basis, Basis) {
    let t = (0..=d).flat_map(|i| [Mono::new(1, 0, i, 0), Mono::new(0, 1, i, 0)]).collect();
    let b = (0..=d).map(|i| Mono::new(0, 0, i, 0)).collect();
    (Basis::new(t), Basis::new(b))
}

pub fn tb_rinehart(d: u32) -> RinehartBundle {
    let (t, b) = tb_bases(d);
    let mut out = function_bundle(&t, &b, FnSigns { bracket: 1, alpha: 1, rho: 1 });
    out.flags = Flags { weak: true, full: true, regular: true };
    out
}

/// `(T, B)` with the Jacobian bracket, `α = -Id`, `φ = Id`, `ρ = -ρ_ad`.
pub fn rho_prime_tb(d: u32) -> RinehartBundle {
    let (t, b) = tb_bases(d);
    let mut out = function_bundle(&t, &b, FnSigns { bracket: 1, alpha: -1, rho: -1 });
    out.flags = Flags { weak: true, full: true, regular: true };
    out
}

/// `(T, B)` with both the bracket and the anchor negated, no twist.
pub fn tb_rinehart_negated(d: u32) -> RinehartBundle {
    let (t, b) = tb_bases(d);
    let mut out = function_bundle(&t, &b, FnSigns { bracket: -1, alpha: 1, rho: -1 });
    out.flags = Flags { weak: true, full: true, regular: true };
    out
}

/// `<x^a y^b e^{kz}>` with `a + b <= d`, `|k| <= K`, `α = -Id`, over `A = Q`.
pub fn l1_hom(d: u32, window: i64) -> RinehartBundle {
    let mut monos = Vec::new();
    for k in -window..=window {
        for deg in 0..=d {
            for a in (0..=deg).rev() {
                monos.push(Mono::new(a, deg - a, 0, k));
            }
        }
    }
    let l = Basis::new(monos);
    let a = Basis::new(vec![Mono::ONE]);
    let mut b = function_bundle(&l, &a, FnSigns { bracket: 1, alpha: -1, rho: 0 });
    b.flags = Flags { weak: true, full: true, regular: true };
    b
}

/// `T' = <x, y, 1, x e^{kz}, y e^{kz}>`, `B' = <e^{kz}>` for `0 < |k| <= K`,
/// `α = -Id`, `φ = Id`, `ρ = -ρ_ad`, `H = <x, y, 1>`. Without `one`, the
/// constant is dropped and `H = <x, y>`.
pub fn tprime_split(window: i64, one: bool) -> RinehartBundle {
    let mut monos = vec![Mono::new(1, 0, 0, 0), Mono::new(0, 1, 0, 0)];
    if one {
        monos.push(Mono::ONE);
    }
    for k in (-window..=window).filter(|&k| k != 0) {
        monos.push(Mono::new(1, 0, 0, k));
        monos.push(Mono::new(0, 1, 0, k));
    }
    let l = Basis::new(monos);
    let a = Basis::new((-window..=window).map(|k| Mono::new(0, 0, 0, k)).collect());
    let mut b = function_bundle(&l, &a, FnSigns { bracket: 1, alpha: -1, rho: -1 });
    let h = if one { 3 } else { 2 };
    b.h = Some(SubspaceQ::coordinate(l.dim(), &(0..h).collect::<Vec<_>>()));
    b.flags = Flags { weak: true, full: true, regular: true };
    b
}

/// `L = <h1, h2, u>`, `[h1, h2, u] = u`, over `A = Q` with `ρ = 0`.
pub fn toy_split() -> RinehartBundle {
    let mut br = Bracket::new(3);
    br.set(0, 1, 2, Some(Vector::unit(3, 2))).expect("sorted triple");
    let lie = Hom3Lie::new(br, MatrixQ::identity(3)).with_labels(vec!["h1".into(), "h2".into(), "u".into()]);
    let mut b = RinehartBundle::over_scalars(lie);
    b.h = Some(SubspaceQ::coordinate(3, &[0, 1]));
    b.flags = Flags { weak: true, full: true, regular: true };
    b
}

/// Block sum `L1 ⊕ L2` over `A1 × A2`, each factor acting on its own block.
pub fn direct_sum(b1: &RinehartBundle, b2: &RinehartBundle) -> RinehartBundle {
    let (n1, n2) = (b1.l_dim(), b2.l_dim());
    let (m1, m2) = (b1.a_dim(), b2.a_dim());
    let (n, m) = (n1 + n2, m1 + m2);
    let suffix = |labels: &[String], s: &str| labels.iter().map(|l| format!("{l}{s}")).collect::<Vec<_>>();

    let mut bracket = Bracket::new(n);
    for (b, off) in [(b1, 0), (b2, n1)] {
        for ([i, j, k], v) in b.lie.bracket.entries() {
            bracket.set(i + off, j + off, k + off, v.map(|v| v.embed(n, off))).expect("sorted triple");
        }
    }
    let mut labels = suffix(&b1.lie.labels, "_1");
    labels.extend(suffix(&b2.lie.labels, "_2"));
    let lie = Hom3Lie::new(bracket, MatrixQ::block_diag(&b1.lie.alpha, &b2.lie.alpha)).with_labels(labels);

    let mut alg = CommAlgebra::new(m);
    for (b, off) in [(b1, 0), (b2, m1)] {
        for ((i, j), v) in b.alg.products() {
            alg.set_product(i + off, j + off, v.map(|v| v.embed(m, off))).expect("in range");
        }
    }
    alg.phi = MatrixQ::block_diag(&b1.alg.phi, &b2.alg.phi);
    alg.unit = match (&b1.alg.unit, &b2.alg.unit) {
        (Some(u1), Some(u2)) => Some(u1.concat(u2)),
        _ => None,
    };
    let mut alabels = suffix(&b1.alg.labels, "_1");
    alabels.extend(suffix(&b2.alg.labels, "_2"));
    alg.labels = alabels;

    let embed_map = |p: &PartialMap, size: usize, off: usize| {
        let mut cols = vec![Some(Vector::zero(size)); size];
        for (j, c) in p.columns().iter().enumerate() {
            cols[j + off] = c.as_ref().map(|v| v.embed(size, off));
        }
        PartialMap::from_columns(size, cols)
    };
    let mut maps = Vec::with_capacity(m);
    for k in 0..m1 {
        maps.push(embed_map(b1.action.map(k), n, 0));
    }
    for k in 0..m2 {
        maps.push(embed_map(b2.action.map(k), n, n1));
    }
    let action = ModuleAction::new(maps, n).expect("square maps");

    let mut rho = PairAction::new(n, m);
    for (b, loff, aoff) in [(b1, 0, 0), (b2, n1, m1)] {
        for ((i, j), op) in b.rho.entries() {
            rho.set(i + loff, j + loff, embed_map(op, m, aoff)).expect("valid pair");
        }
    }

    let mut out = RinehartBundle::new(lie, alg, action, rho).expect("shapes agree");
    if let (Some(h1), Some(h2)) = (&b1.h, &b2.h) {
        let basis = h1.basis().iter().map(|v| v.embed(n, 0)).chain(h2.basis().iter().map(|v| v.embed(n, n1)));
        out.h = Some(SubspaceQ::from_vectors(n, basis.collect()));
    }
    out.flags = Flags {
        weak: b1.flags.weak && b2.flags.weak,
        full: b1.flags.full && b2.flags.full,
        regular: b1.flags.regular && b2.flags.regular,
    };
    out
}

/// `D4`: `[e1, e2, e3] = e4`.
pub fn d4_bracket() -> Bracket {
    let mut br = Bracket::new(4);
    br.set(0, 1, 2, Some(Vector::unit(4, 3))).expect("sorted triple");
    br
}

/// Parameters of the seeded `D4` representation family on `A = Q[z]/(z^m)`:
/// `φ(z) = c z`, `ρ(e1, e2) = κ D` with `D(z^i) = i c^{i-1} z^{i+j}`, and
/// `α = diag(s1, s2, s3, s1 s2 s3)` where `s1 s2 = c^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D4Params {
    pub m: usize,
    pub c: Rational,
    pub j: usize,
    pub kappa: Rational,
    pub s: [Rational; 3],
}

impl D4Params {
    /// All maps identities and `ρ(e1, e2) = κ z^{j+1} d/dz`.
    pub fn classical(m: usize, j: usize, kappa: Rational) -> Self {
        D4Params { m, c: Rational::one(), j, kappa, s: [Rational::one(), Rational::one(), Rational::one()] }
    }

    pub fn sample(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=3);
        let nonzero = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| loop {
            let v = rng.gen_range(lo..=hi);
            if v != 0 {
                return Rational::from_int(v);
            }
        };
        let c = nonzero(&mut rng, -2, 2);
        let j = rng.gen_range(0..m);
        let kappa = if rng.gen_bool(0.15) { Rational::zero() } else { nonzero(&mut rng, -3, 3) };
        let s1 = nonzero(&mut rng, -2, 2);
        let s2 = c.pow(j as i32) / &s1;
        let s3 = nonzero(&mut rng, -2, 2);
        D4Params { m, c, j, kappa, s: [s1, s2, s3] }
    }

    pub fn alpha(&self) -> MatrixQ {
        let [a, b, c] = self.s.clone();
        let d = &(&a * &b) * &c;
        MatrixQ::diagonal(&[a, b, c, d])
    }

    pub fn phi(&self) -> MatrixQ {
        MatrixQ::diagonal(&(0..self.m).map(|i| self.c.pow(i as i32)).collect::<Vec<_>>())
    }

    /// The `φ`-derivation `D` on `Q[z]/(z^m)`.
    pub fn derivation(&self) -> MatrixQ {
        let m = self.m;
        let cols = (0..m)
            .map(|i| {
                let t = i + self.j;
                if i == 0 || t >= m {
                    Vector::zero(m)
                } else {
                    Vector::unit(m, t).scale(&(&Rational::from_int(i as i64) * &self.c.pow(i as i32 - 1)))
                }
            })
            .collect();
        MatrixQ::from_columns(m, cols)
    }

    pub fn lie(&self) -> Hom3Lie {
        Hom3Lie::new(d4_bracket(), self.alpha())
    }

    pub fn algebra(&self) -> CommAlgebra {
        let mut a = CommAlgebra::truncated_poly(self.m);
        a.phi = self.phi();
        a
    }

    pub fn rho(&self) -> PairAction {
        let mut rho = PairAction::new(4, self.m);
        rho.set(0, 1, self.derivation().scale(&self.kappa).into()).expect("valid pair");
        rho
    }
}

/// `D4` with the seeded representation; `A` acts on `L` through `z ↦ 0`.
pub fn d4_bundle(p: &D4Params) -> RinehartBundle {
    let m = p.m;
    let mut maps: Vec<PartialMap> = vec![MatrixQ::identity(4).into()];
    maps.extend((1..m).map(|_| PartialMap::zero(4, 4)));
    let action = ModuleAction::new(maps, 4).expect("square maps");
    let mut b = RinehartBundle::new(p.lie(), p.algebra(), action, p.rho()).expect("shapes agree");
    // Whether the anchor is A-linear under this action depends on the parameters.
    let full = crate::rinehart::check_full_rinehart(&b).passed();
    b.flags = Flags { weak: true, full, regular: true };
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rinehart::{check_full_rinehart, check_weak_rinehart};


    #[test]
    fn poly_basis_order_and_size() {
        let b = poly_basis(2);
        let labels: Vec<String> = b.iter().map(mono_label).collect();
        assert_eq!(labels, ["1", "x", "y", "z", "x^2", "xy", "xz", "y^2", "yz", "z^2"]);
        assert_eq!(poly_basis(3).len(), 20);
    }

    #[test]
    fn tprime_dimensions() {
        let b = tprime_split(3, true);
        assert_eq!((b.l_dim(), b.a_dim()), (15, 7));
        assert_eq!(b.lie.labels[..4], ["x", "y", "1", "xe^{-3z}"]);
        assert_eq!(b.alg.labels[3], "1");
    }

    #[test]
    fn names_round_trip() {
        for c in CorpusName::ALL {
            assert_eq!(c.as_str().parse::<CorpusName>().unwrap(), c);
        }
        assert!("nope".parse::<CorpusName>().is_err());
    }

    #[test]
    fn bounds_are_enforced() {
        let spec = CorpusSpec::new(CorpusName::JacobianWeak).degree(7);
        assert_eq!(generate(&spec), Err(CorpusError::Degree(7)));
        let spec = CorpusSpec::new(CorpusName::TprimeSplit).window(0);
        assert_eq!(generate(&spec), Err(CorpusError::Window(0)));
        let spec = CorpusSpec::new(CorpusName::ToySplit).variant("x");
        assert!(matches!(generate(&spec), Err(CorpusError::Variant { .. })));
    }

    #[test]
    fn d4_family_members_are_weak_bundles() {
        let mut not_full = 0;
        for seed in 0..20 {
            let b = d4_bundle(&D4Params::sample(seed));
            let weak = check_weak_rinehart(&b);
            assert!(weak.passed(), "seed {seed}: {:?}", weak.first_failure());
            not_full += usize::from(!b.flags.full);
        }
        assert!(not_full > 0);
    }

    #[test]
    fn derivation_matches_leibniz_rule() {
        let p = D4Params { m: 3, c: Rational::from_int(2), j: 0, kappa: Rational::one(), s: [1.into(), 1.into(), 1.into()] };
        let d = p.derivation();
        // D(z^2) = 2c z^2 = 4 z^2.
        assert_eq!(d.apply(&Vector::unit(3, 2)), Vector::from_ints(&[0, 0, 4]));
    }

    #[test]
    fn toy_and_two_block_pass_full() {
        assert!(check_full_rinehart(&toy_split()).passed());
        let two = direct_sum(&toy_split(), &toy_split());
        assert_eq!(two.l_dim(), 6);
        assert!(check_full_rinehart(&two).passed());
        assert_eq!(two.h.as_ref().unwrap().dim(), 4);
    }
}
