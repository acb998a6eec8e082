use std::fmt::Write as _;

use crate::codes::{cyclic_code_for_packing, verify_code, IndexCode};
use crate::decompose::{self, Decomposition};
use crate::error::{Error, Result};
use crate::minors::{self, MinorLimits, TightnessCertificate};
use crate::model::{is_generalized_cycle, DemandEdge, DemandSupergraph, SupergraphCycle};
use crate::solvers::{self, SolverLimits};
use crate::transforms;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemClass {
    GeneralizedCycle,
    DemandDecomposable,
}

impl ProblemClass {
    pub fn name(self) -> &'static str {
        match self {
            ProblemClass::GeneralizedCycle => "generalized-cycle",
            ProblemClass::DemandDecomposable => "demand-decomposable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub q: u32,
    pub solver: SolverLimits,
    pub search_budget: u64,
    /// Run the Petersen-family test; `None` leaves tightness unchecked.
    pub minors: Option<MinorLimits>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            q: 2,
            solver: SolverLimits::default(),
            search_budget: decompose::DEFAULT_SEARCH_BUDGET,
            minors: Some(MinorLimits::default()),
        }
    }
}

/// Length bounds with the certificates behind every number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub class: ProblemClass,
    pub n: usize,
    pub nu_e: usize,
    pub tau_e: usize,
    /// `n - τ_e`.
    pub lower: usize,
    /// `n - ν_e`, or `n - |packing|` when only a smaller decomposable packing exists.
    pub upper: usize,
    pub achieved_length: usize,
    /// The generalized cycle the bounds are computed on.
    pub gc: DemandSupergraph,
    /// Cycles the code is built from.
    pub packing: Vec<SupergraphCycle>,
    /// A minimum feedback edge set of `gc`.
    pub feedback: Vec<DemandEdge>,
    pub code: IndexCode,
    pub tightness: Option<TightnessCertificate>,
}

impl BoundsReport {
    /// One-line summary, e.g. `n=9 nu_e=4 tau_e=4 lower=5 upper=5 tight=PetersenFree`.
    pub fn summary(&self) -> String {
        let tight = self
            .tightness
            .map_or_else(|| "unchecked".to_owned(), |t| t.to_string());
        format!(
            "n={} nu_e={} tau_e={} lower={} upper={} tight={}",
            self.n, self.nu_e, self.tau_e, self.lower, self.upper, tight
        )
    }

    /// Line-oriented `key=value` text; repeated keys list certificates.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let tight = self
            .tightness
            .map_or_else(|| "unchecked".to_owned(), |t| t.to_string());
        let scalars = [
            ("class", self.class.name().to_owned()),
            ("n", self.n.to_string()),
            ("nu_e", self.nu_e.to_string()),
            ("tau_e", self.tau_e.to_string()),
            ("lower", self.lower.to_string()),
            ("upper", self.upper.to_string()),
            ("achieved_length", self.achieved_length.to_string()),
            ("tightness", tight),
            ("field", self.code.field_size().to_string()),
        ];
        for (k, v) in scalars {
            writeln!(out, "{k}={v}").expect("writing to a string");
        }
        for c in &self.packing {
            writeln!(out, "cycle={c}").expect("writing to a string");
        }
        for d in &self.feedback {
            writeln!(out, "feedback={d}").expect("writing to a string");
        }
        for k in 0..self.code.len() {
            let label = self.code.row_provenance[k].as_deref().unwrap_or("uncoded");
            writeln!(out, "row={} [{label}]", self.code.describe_row(k)).expect("writing to a string");
        }
        out
    }
}

/// Bounds for a generalized cycle, or for a demand-decomposable supergraph
/// after searching for its spanning generalized cycle.
pub fn bounds_report(g: &DemandSupergraph, opts: ReportOptions) -> Result<BoundsReport> {
    if is_generalized_cycle(g).holds() {
        let nt = solvers::supergraph_nu_tau(g, opts.solver)?;
        let decomposition = Decomposition {
            gc: g.clone(),
            packing: nt.packing.clone(),
        };
        return assemble(g, ProblemClass::GeneralizedCycle, &decomposition, nt, opts);
    }
    let found = decompose::find_spanning_generalized_cycle(g, opts.search_budget, opts.solver)?
        .ok_or(Error::NotApplicable)?;
    bounds_report_for(g, &found, opts)
}

/// Bounds for `g` using a given spanning generalized cycle and packing.
pub fn bounds_report_for(g: &DemandSupergraph, d: &Decomposition, opts: ReportOptions) -> Result<BoundsReport> {
    if !decompose::is_demand_decomposable(g, &d.gc, &d.packing)? {
        return Err(Error::NotApplicable);
    }
    let nt = solvers::supergraph_nu_tau(&d.gc, opts.solver)?;
    let class = if g == &d.gc {
        ProblemClass::GeneralizedCycle
    } else {
        ProblemClass::DemandDecomposable
    };
    assemble(g, class, d, nt, opts)
}

fn assemble(
    g: &DemandSupergraph,
    class: ProblemClass,
    d: &Decomposition,
    nt: solvers::SupergraphNuTau,
    opts: ReportOptions,
) -> Result<BoundsReport> {
    let n = g.message_count();
    let code = cyclic_code_for_packing(&d.gc, &d.packing, opts.q)?;
    let decoded = verify_code(g, &code)?;
    assert!(decoded.all_decodable(), "cyclic code must satisfy every demand");
    let tightness = match opts.minors {
        None => None,
        Some(limits) => {
            let view = transforms::to_eulerian(&d.gc)?;
            Some(minors::certify(&view.graph, limits, || Ok((nt.nu_e, nt.tau_e)))?)
        }
    };
    if tightness == Some(TightnessCertificate::TightPetersenFree) {
        assert_eq!(nt.nu_e, nt.tau_e, "Petersen-free Eulerian graphs have equal packing and feedback numbers");
    }
    Ok(BoundsReport {
        class,
        n,
        nu_e: nt.nu_e,
        tau_e: nt.tau_e,
        lower: n - nt.tau_e,
        // equals n - nu_e whenever the packing is maximum
        upper: n - d.packing.len(),
        achieved_length: code.len(),
        gc: d.gc.clone(),
        packing: d.packing.clone(),
        feedback: nt.feedback,
        code,
        tightness,
    })
}
