use serde::Serialize;

use super::ScoredCandidate;
use crate::corpus::UnitId;
use crate::{check_unit_interval, ParamError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DueParams {
    /// Maximum number of units selected.
    pub top_k: usize,
    /// Weight of the redundancy penalty.
    pub gamma: f64,
    /// Similarity at or above which a candidate counts as a restatement of
    /// selected evidence and is dropped.
    pub delta_dup: f64,
}

impl Default for DueParams {
    fn default() -> Self {
        Self {
            top_k: 6,
            gamma: 0.5,
            delta_dup: 0.9,
        }
    }
}

impl DueParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.top_k == 0 {
            return Err(ParamError::new("top_k", "must be at least 1"));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(ParamError::new("gamma", format!("{} is negative", self.gamma)));
        }
        check_unit_interval("delta_dup", self.delta_dup)?;
        if self.delta_dup == 0.0 {
            return Err(ParamError::new("delta_dup", "must be greater than 0"));
        }
        Ok(())
    }
}

/// The admitted units in selection order.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct EvidenceSet {
    pub selected: Vec<ScoredCandidate>,
    /// Selection ran out of eligible candidates before reaching `top_k`.
    pub exhausted: bool,
}

impl EvidenceSet {
    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn unit_ids(&self) -> impl Iterator<Item = UnitId> + '_ {
        self.selected.iter().map(|c| c.unit_id)
    }
}

/// One iteration of the greedy loop, for audit output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DueStep {
    pub chosen: UnitId,
    pub mue: f64,
    /// Largest similarity to evidence selected before this step.
    pub redundancy: f64,
    pub adjusted: f64,
    /// Candidates dropped as near-duplicates just before this choice.
    pub suppressed: Vec<UnitId>,
}

/// Greedy redundancy-controlled selection.
///
/// The first pick is the highest `mue`. Before every later pick, any
/// remaining candidate whose similarity to some selected unit reaches
/// `delta_dup` is discarded; among the rest the pick maximizes
/// `mue − gamma · max_sim_to_selected`. Ties go to the lower unit id.
/// Selection stops at `top_k` units or when no candidate remains.
pub fn due_select<F>(scored: &[ScoredCandidate], sim_between: F, params: &DueParams) -> EvidenceSet
where
    F: Fn(UnitId, UnitId) -> f64,
{
    due_select_traced(scored, sim_between, params).0
}

pub fn due_select_traced<F>(
    scored: &[ScoredCandidate],
    sim_between: F,
    params: &DueParams,
) -> (EvidenceSet, Vec<DueStep>)
where
    F: Fn(UnitId, UnitId) -> f64,
{
    struct Pending {
        candidate: ScoredCandidate,
        redundancy: f64,
    }

    let mut pool: Vec<Pending> = scored
        .iter()
        .map(|&candidate| Pending {
            candidate,
            redundancy: 0.0,
        })
        .collect();
    let mut evidence = EvidenceSet::default();
    let mut steps = Vec::new();
    let mut suppressed = Vec::new();

    while evidence.len() < params.top_k {
        if pool.is_empty() {
            evidence.exhausted = true;
            break;
        }
        let adjusted = |p: &Pending| p.candidate.mue - params.gamma * p.redundancy;
        let best = pool
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| {
                adjusted(a)
                    .total_cmp(&adjusted(b))
                    .then(b.candidate.unit_id.cmp(&a.candidate.unit_id))
            })
            .map(|(i, _)| i)
            .expect("pool is non-empty");
        let chosen = pool.swap_remove(best);
        steps.push(DueStep {
            chosen: chosen.candidate.unit_id,
            mue: chosen.candidate.mue,
            redundancy: chosen.redundancy,
            adjusted: adjusted(&chosen),
            suppressed: std::mem::take(&mut suppressed),
        });
        evidence.selected.push(chosen.candidate);
        if evidence.len() == params.top_k {
            break;
        }

        let picked = chosen.candidate.unit_id;
        pool.retain_mut(|p| {
            p.redundancy = p.redundancy.max(sim_between(p.candidate.unit_id, picked));
            if p.redundancy >= params.delta_dup {
                suppressed.push(p.candidate.unit_id);
                false
            } else {
                true
            }
        });
        suppressed.sort_unstable();
    }
    (evidence, steps)
}
