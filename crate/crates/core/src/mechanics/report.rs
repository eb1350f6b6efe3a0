//! Sampled trajectories and conservation audits.

use serde::{Deserialize, Serialize};

use crate::algebra::Dim;
use crate::error::{Error, Result, Singularity};

use super::generators::ObservableSet;
use super::PhaseState;

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub state: PhaseState,
    pub obs: ObservableSet,
}

/// Where a trajectory stopped early.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub t: f64,
    pub reason: Singularity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dim: Dim,
    pub samples: Vec<Sample>,
    pub truncated: Option<Truncation>,
}

impl Trajectory {
    pub fn new(dim: Dim) -> Self {
        Trajectory {
            dim,
            samples: Vec::new(),
            truncated: None,
        }
    }

    pub fn truncate(&mut self, t: f64, reason: Singularity) {
        self.truncated = Some(Truncation { t, reason });
    }

    /// Column names of [`Trajectory::rows`].
    pub fn column_names(&self) -> Vec<String> {
        let mut names = vec!["t".to_string()];
        names.extend(PhaseState::column_names(self.dim));
        names.extend(ObservableSet::column_names(self.dim, true));
        names
    }

    /// One row per sample: t, state, observables.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| {
                let mut row = vec![s.state.t];
                row.extend(s.state.to_vec());
                row.extend(s.obs.to_columns());
                row
            })
            .collect()
    }

    /// The observable columns as named series.
    pub fn series(&self) -> SeriesSet {
        let names = self.column_names();
        let rows = self.rows();
        SeriesSet::from_columns(&names, &rows)
    }
}

/// Which conservation group a column belongs to, or `None` for time and
/// state columns.
pub fn observable_group(name: &str) -> Option<&'static str> {
    match name {
        "casimir" => Some("casimir"),
        "energy" => Some("energy"),
        _ if name.starts_with("J_") => Some("J"),
        _ if name.starts_with("I_") => Some("I"),
        _ if name.starts_with("P_") => Some("P"),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub group: String,
    pub values: Vec<f64>,
}

/// Time stamps and observable series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSet {
    pub times: Vec<f64>,
    pub series: Vec<Series>,
}

impl SeriesSet {
    /// Picks `t` and the observable columns out of a row table.
    pub fn from_columns(names: &[String], rows: &[Vec<f64>]) -> SeriesSet {
        let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<f64>>();
        let times = names.iter().position(|n| n == "t").map(col).unwrap_or_default();
        let series = names
            .iter()
            .enumerate()
            .filter_map(|(k, name)| {
                observable_group(name).map(|g| Series {
                    name: name.clone(),
                    group: g.to_string(),
                    values: col(k),
                })
            })
            .collect();
        SeriesSet { times, series }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Conserved,
    NotConserved,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableDrift {
    pub name: String,
    pub group: String,
    pub initial: f64,
    pub max_abs_drift: f64,
    /// Drift divided by `scale`.
    pub max_rel_drift: f64,
    /// Euclidean norm of the group at the first sample (`|O(0)|` for
    /// scalars); 0 means the relative drift is the absolute one.
    pub scale: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupDrift {
    pub group: String,
    pub max_rel_drift: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationReport {
    pub threshold: f64,
    pub samples: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub truncated: Option<Truncation>,
    pub observables: Vec<ObservableDrift>,
    pub groups: Vec<GroupDrift>,
}

impl ConservationReport {
    pub fn observable(&self, name: &str) -> Option<&ObservableDrift> {
        self.observables.iter().find(|o| o.name == name)
    }

    pub fn group(&self, group: &str) -> Option<&GroupDrift> {
        self.groups.iter().find(|g| g.group == group)
    }
}

fn classify(rel: f64, threshold: f64) -> Classification {
    if rel <= threshold {
        Classification::Conserved
    } else {
        Classification::NotConserved
    }
}

/// Drift of every series against its first value.
pub fn drift_series(set: &SeriesSet, threshold: f64, truncated: Option<Truncation>) -> Result<ConservationReport> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidParameter(format!("threshold must be positive, got {threshold}")));
    }
    if set.times.is_empty() || set.series.iter().any(|s| s.values.is_empty()) {
        return Err(Error::EmptyTrajectory);
    }
    if set.times.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
        return Err(Error::InvalidParameter("timestamps must increase strictly".into()));
    }
    let mut group_names: Vec<String> = Vec::new();
    for s in &set.series {
        if !group_names.contains(&s.group) {
            group_names.push(s.group.clone());
        }
    }
    let scale_of = |group: &str| -> f64 {
        set.series
            .iter()
            .filter(|s| s.group == group)
            .map(|s| s.values[0] * s.values[0])
            .sum::<f64>()
            .sqrt()
    };
    let observables: Vec<ObservableDrift> = set
        .series
        .iter()
        .map(|s| {
            let initial = s.values[0];
            let max_abs = s.values.iter().map(|v| (v - initial).abs()).fold(0.0, f64::max);
            let scale = scale_of(&s.group);
            let rel = if scale > 0.0 { max_abs / scale } else { max_abs };
            ObservableDrift {
                name: s.name.clone(),
                group: s.group.clone(),
                initial,
                max_abs_drift: max_abs,
                max_rel_drift: rel,
                scale,
                classification: classify(rel, threshold),
            }
        })
        .collect();
    let groups = group_names
        .into_iter()
        .map(|g| {
            let rel = observables
                .iter()
                .filter(|o| o.group == g)
                .map(|o| o.max_rel_drift)
                .fold(0.0, f64::max);
            GroupDrift {
                group: g,
                max_rel_drift: rel,
                classification: classify(rel, threshold),
            }
        })
        .collect();
    Ok(ConservationReport {
        threshold,
        samples: set.times.len(),
        t_start: set.times[0],
        t_end: *set.times.last().expect("nonempty"),
        truncated,
        observables,
        groups,
    })
}

pub fn drift_report(traj: &Trajectory, threshold: f64) -> Result<ConservationReport> {
    if traj.samples.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    drift_series(&traj.series(), threshold, traj.truncated)
}
