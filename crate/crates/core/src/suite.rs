//! Suite orchestration: build modules from a [`SweepConfig`] and run the checks
//! of each target.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{Family, SweepConfig};
use crate::duality::{
    basis_seeds, check_closed_forms, check_e0_generator, check_intertwining, check_psi_conjugation, check_psi_roundtrip,
    check_reconstruction, check_well_defined, duality_probes, DualityError, DualitySpace,
};
use crate::hecke::{
    check_conjugation_lemmas, check_def_relations, check_q_presentation, hecke_probes, ModuleError, OneDimModule,
    PolynomialModule, RightHeckeModule,
};
use crate::qtoroidal::{
    check_current_relations, check_integrability, check_level, check_trivial_central_charge, CheckError, CurrentRelation,
    ModeKind, ModeOperators, PerturbedModes,
};
use crate::report::{sort_reports, RelationReport, SummaryLine, SummaryReport};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("the negative control for the {0} target needs the polynomial family")]
    NegativeControl(Target),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Hecke,
    Toroidal,
    Duality,
    All,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Hecke => "hecke",
            Target::Toroidal => "toroidal",
            Target::Duality => "duality",
            Target::All => "all",
        })
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hecke" => Ok(Target::Hecke),
            "toroidal" => Ok(Target::Toroidal),
            "duality" => Ok(Target::Duality),
            "all" => Ok(Target::All),
            other => Err(format!("unknown target {:?}", other)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub reports: Vec<RelationReport>,
    pub summary: SummaryReport,
}

pub fn build_module(cfg: &SweepConfig, corrupted: bool) -> Result<Arc<dyn RightHeckeModule>, SuiteError> {
    let p = cfg.params()?;
    Ok(match cfg.family {
        Family::L1 => Arc::new(OneDimModule::new(cfg.a.clone(), cfg.b.clone(), &p)?),
        Family::Polynomial if corrupted => Arc::new(PolynomialModule::corrupted(&p, cfg.window)?),
        Family::Polynomial => Arc::new(PolynomialModule::new(&p, cfg.window)?),
    })
}

pub fn build_space(cfg: &SweepConfig, corrupted: bool) -> Result<DualitySpace, SuiteError> {
    let p = cfg.params()?;
    Ok(DualitySpace::new(build_module(cfg, corrupted)?, &p)?)
}

fn negative_needs_polynomial(cfg: &SweepConfig, target: Target) -> Result<(), SuiteError> {
    if cfg.negative_control && cfg.family != Family::Polynomial {
        return Err(SuiteError::NegativeControl(target));
    }
    Ok(())
}

fn select(cfg: &SweepConfig, mut reports: Vec<RelationReport>) -> Vec<RelationReport> {
    reports.retain(|r| cfg.selects(&r.relation));
    sort_reports(&mut reports);
    reports
}

/// Defining relations, the `Q` presentation and the conjugation lemmas.
pub fn hecke_reports(cfg: &SweepConfig) -> Result<Vec<RelationReport>, SuiteError> {
    negative_needs_polynomial(cfg, Target::Hecke)?;
    let m = build_module(cfg, cfg.negative_control)?;
    let probes = hecke_probes(m.as_ref(), cfg.probes, cfg.seed, cfg.radius);
    let mut out = check_def_relations(m.as_ref(), &probes);
    out.extend(check_q_presentation(m.as_ref(), &probes));
    out.extend(check_conjugation_lemmas(m.as_ref(), &probes));
    Ok(select(cfg, out))
}

fn toroidal_on<O: ModeOperators>(cfg: &SweepConfig, ops: &O, probes: &[crate::qtoroidal::ModeProbe<O::Key>]) -> Result<Vec<RelationReport>, SuiteError> {
    let rels: Vec<CurrentRelation> = CurrentRelation::ALL.into_iter().filter(|r| cfg.selects(r.id())).collect();
    let mut out = check_current_relations(ops, cfg.modes, probes, &rels)?;
    out.extend(check_integrability(ops, cfg.modes, probes));
    out.extend(check_trivial_central_charge(ops, probes)?);
    out.extend(check_level(ops, probes));
    Ok(out)
}

/// The current relations, integrability, central charge and level on `M ⊗_H V^{⊗l}`.
/// The negative control multiplies `e_{1,1}` by 2.
pub fn toroidal_reports(cfg: &SweepConfig) -> Result<Vec<RelationReport>, SuiteError> {
    let space = build_space(cfg, false)?;
    let probes = duality_probes(&space, cfg.probes, cfg.seed, cfg.radius);
    let out = if cfg.negative_control {
        let wrapped = PerturbedModes { inner: &space, kind: ModeKind::E, i: 1, k: 1, factor: Scalar::int(2) };
        toroidal_on(cfg, &wrapped, &probes)?
    } else {
        toroidal_on(cfg, &space, &probes)?
    };
    Ok(select(cfg, out))
}

/// ψ, braid intertwining, closed forms, well-definedness and reconstruction.
pub fn duality_reports(cfg: &SweepConfig) -> Result<Vec<RelationReport>, SuiteError> {
    negative_needs_polynomial(cfg, Target::Duality)?;
    let space = build_space(cfg, cfg.negative_control)?;
    let probes = duality_probes(&space, cfg.probes, cfg.seed, cfg.radius);
    let tuples = space.sorted_tuples().len();
    let seeds = basis_seeds(&space, cfg.probes.div_ceil(tuples), cfg.seed, cfg.radius);
    let hprobes = hecke_probes(space.module(), cfg.probes, cfg.seed, cfg.radius);
    let k = cfg.modes.min(2);
    let mut out = check_psi_roundtrip(&space, &probes);
    out.extend(check_psi_conjugation(&space, k, &probes));
    out.extend(check_intertwining(&space, &probes));
    out.extend(check_closed_forms(&space, cfg.modes, &seeds));
    out.extend(check_well_defined(&space, &seeds));
    out.extend(check_e0_generator(&space, &hprobes));
    if space.l() >= 2 {
        out.extend(check_reconstruction(&space, cfg.modes, &hprobes));
    }
    Ok(select(cfg, out))
}

pub fn run(cfg: &SweepConfig, target: Target) -> Result<SuiteRun, SuiteError> {
    let mut reports = Vec::new();
    if matches!(target, Target::Hecke | Target::All) {
        reports.extend(hecke_reports(cfg)?);
    }
    if matches!(target, Target::Toroidal | Target::All) {
        reports.extend(toroidal_reports(cfg)?);
    }
    if matches!(target, Target::Duality | Target::All) {
        reports.extend(duality_reports(cfg)?);
    }
    sort_reports(&mut reports);
    let echo = serde_json::json!({ "target": target, "sweep": cfg });
    let summary = SummaryReport::from_reports(&reports, echo);
    Ok(SuiteRun { reports, summary })
}

/// [`run`] inside a dedicated pool of `threads` workers.
pub fn run_with_threads(cfg: &SweepConfig, target: Target, threads: usize) -> Result<SuiteRun, SuiteError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(|| run(cfg, target))
}

/// Reports as JSON lines followed by the summary document.
pub fn render_json_lines(run: &SuiteRun) -> String {
    let mut out = String::new();
    for r in &run.reports {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(&SummaryLine { summary: run.summary.clone() }).expect("summary serializes"));
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ConfigOverrides, SweepConfig};

    fn small(preset: &str) -> SweepConfig {
        let over = ConfigOverrides { preset: Some(preset.into()), probes: Some(4), ..Default::default() };
        SweepConfig::resolve(None, &over).unwrap()
    }

    #[test]
    fn l1_all_passes() {
        let run = run(&small("l1"), Target::All).unwrap();
        assert!(run.summary.all_passed(), "{:#?}", run.summary.relations.iter().find(|(_, s)| s.tally.failed > 0));
        assert_eq!(run.summary.totals.skipped, 0);
    }

    #[test]
    fn negative_control_fails() {
        let mut c = small("l1");
        c.negative_control = true;
        let run = run(&c, Target::Toroidal).unwrap();
        assert!(run.summary.totals.failed > 0);
        assert!(matches!(super::run(&c, Target::Hecke), Err(SuiteError::NegativeControl(Target::Hecke))));
    }

    #[test]
    fn relation_filter() {
        let mut c = small("l1");
        c.relations = vec!["psi.".into()];
        let run = run(&c, Target::Duality).unwrap();
        assert!(!run.reports.is_empty());
        assert!(run.reports.iter().all(|r| r.relation.starts_with("psi.")));
    }
}
