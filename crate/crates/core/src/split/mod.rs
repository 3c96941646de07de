//! Split regular Hom 3-Lie-Rinehart algebras: root and weight
//! decompositions with respect to an abelian `α`-stable subalgebra `H`,
//! connections of roots, and the ideals attached to root classes.

mod connect;
mod grading;
mod ideals;
mod roots;

use serde::Serialize;

use crate::exactq::SubspaceQ;
use crate::report::CheckReport;
use crate::rinehart::RinehartBundle;

pub use connect::{check_connection_laws, root_classes, Connection, RootClassPartition, RootSystem};
pub use grading::{check_eigen_equations, check_grading};
pub use ideals::{
    check_class_ideal_laws, class_ideal, class_ideals, direct_sum_decompose, direct_sum_vs_split, split_ideal,
    weight_class_decompose, ClassIdeal, DirectSumReport, IdealSplit, WeightClassReport,
};
pub use roots::{auto_cartan, pullback_root, root_decompose, weight_decompose, Graded, RootDecomposition, RootForm, WeightDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("spectrum: {0}")]
    Spectrum(String),
    #[error("{space} is not split over Q: joint eigenspaces span {found} of {dim} dimensions")]
    NotSplit { space: &'static str, found: usize, dim: usize },
    #[error("H lives in Q^{got}, expected Q^{want}")]
    Ambient { got: usize, want: usize },
    #[error("alpha is not invertible")]
    AlphaNotInvertible,
    #[error("phi is not invertible")]
    PhiNotInvertible,
    #[error("cannot evaluate {0}: undefined entries")]
    Unevaluable(String),
    #[error("H is not abelian: {0}")]
    NotAbelian(String),
    #[error("alpha(H) != H")]
    NotAlphaStable,
    #[error("the zero eigenspace has dimension {l0}, larger than dim H = {h}")]
    L0TooLarge { l0: usize, h: usize },
    #[error("no Cartan subalgebra found: {0}")]
    NoAutoCartan(String),
    #[error("no Cartan subalgebra attached to the bundle")]
    NoCartan,
    #[error("not a root")]
    NotARoot,
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Everything computed for one choice of `H`.
#[derive(Debug, Clone)]
pub struct SplitAnalysis {
    pub roots: RootDecomposition,
    pub weights: WeightDecomposition,
    pub system: RootSystem,
    /// Partition used for the class ideals: the connection classes unless
    /// one was supplied.
    pub partition: RootClassPartition,
    pub connection_classes: RootClassPartition,
    pub ideals: Vec<ClassIdeal>,
    pub grading: Vec<CheckReport>,
    pub eigen: Vec<CheckReport>,
    pub class_laws: Vec<CheckReport>,
    pub ideal_laws: Vec<CheckReport>,
    pub direct_sum: DirectSumReport,
    pub weight_classes: WeightClassReport,
}

pub fn analyze(b: &RinehartBundle, h: &SubspaceQ) -> Result<SplitAnalysis, SplitError> {
    analyze_with(b, h, None)
}

/// As [`analyze`], building the class ideals over `partition` when given.
pub fn analyze_with(b: &RinehartBundle, h: &SubspaceQ, partition: Option<RootClassPartition>) -> Result<SplitAnalysis, SplitError> {
    let roots = root_decompose(b, h)?;
    let weights = weight_decompose(b, h)?;
    let system = RootSystem::from_decompositions(&roots, &weights)?;
    let connection_classes = root_classes(&system)?;
    let partition = match partition {
        Some(p) if !p.is_partition(roots.roots.len()) => {
            return Err(SplitError::Precondition("supplied classes do not partition the roots".into()))
        }
        Some(p) => p,
        None => connection_classes.clone(),
    };
    let ideals = class_ideals(b, &roots, &weights, &partition);
    let wsys = system.for_weights();
    let wclasses = root_classes(&wsys)?;
    Ok(SplitAnalysis {
        grading: check_grading(b, &roots, &weights),
        eigen: check_eigen_equations(b, &roots, &weights),
        class_laws: check_connection_laws(&system, &connection_classes),
        ideal_laws: check_class_ideal_laws(b, &ideals),
        direct_sum: direct_sum_decompose(b, &roots, &weights, &ideals),
        weight_classes: weight_class_decompose(b, &roots, &weights, &wclasses),
        roots,
        weights,
        system,
        partition,
        connection_classes,
        ideals,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedReport {
    pub form: String,
    pub matrix: Vec<Vec<String>>,
    pub space: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassIdealReport {
    pub class: Vec<usize>,
    pub l0: Vec<String>,
    pub ideal: Vec<String>,
    pub skipped: u64,
}

/// Serializable summary of a [`SplitAnalysis`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecomposeReport {
    pub h: Vec<String>,
    pub roots: Vec<GradedReport>,
    pub weights: Vec<GradedReport>,
    pub a0: Vec<String>,
    pub connection_classes: Vec<Vec<usize>>,
    pub classes: Vec<Vec<usize>>,
    pub ideals: Vec<ClassIdealReport>,
    pub checks: Vec<CheckReport>,
    pub direct_sum: DirectSumReport,
    pub weight_classes: WeightClassReport,
}

impl DecomposeReport {
    pub fn new(b: &RinehartBundle, a: &SplitAnalysis) -> Self {
        let hl = a.roots.h_labels(b);
        let lspace = |s: &SubspaceQ| s.basis().iter().map(|v| b.lie.render(v)).collect::<Vec<_>>();
        let aspace = |s: &SubspaceQ| s.basis().iter().map(|v| b.alg.render(v)).collect::<Vec<_>>();
        let graded = |g: &Graded, space: Vec<String>| GradedReport { form: g.form.render(&hl), matrix: g.form.matrix_strings(), space };
        let checks = a.grading.iter().chain(&a.eigen).chain(&a.class_laws).chain(&a.ideal_laws).cloned().collect();
        DecomposeReport {
            roots: a.roots.roots.iter().map(|g| graded(g, lspace(&g.space))).collect(),
            weights: a.weights.weights.iter().map(|g| graded(g, aspace(&g.space))).collect(),
            a0: aspace(&a.weights.a0),
            connection_classes: a.connection_classes.classes.clone(),
            classes: a.partition.classes.clone(),
            ideals: a
                .ideals
                .iter()
                .map(|c| ClassIdealReport { class: c.class.clone(), l0: lspace(&c.l0), ideal: lspace(&c.ideal), skipped: c.skipped })
                .collect(),
            checks,
            direct_sum: a.direct_sum.clone(),
            weight_classes: a.weight_classes.clone(),
            h: hl,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().chain(&self.weight_classes.checks).all(|c| c.status != crate::report::Status::Fail)
            && self.direct_sum.status != crate::report::Status::Fail
    }
}
