use std::path::Path;

use heisenmod_core::json::{build_subgroup, parse_group, PointJson, WindowJson};
use heisenmod_core::{MeasuredSubgroup, Window};
use serde::Deserialize;

use crate::failure::Failure;

/// Job file: group orders, subgroup generators, optional weight, windows and options.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub group: Vec<u32>,
    #[serde(default)]
    pub generators: Vec<PointJson>,
    #[serde(default)]
    pub weight: Option<String>,
    #[serde(default)]
    pub windows: Vec<WindowJson>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tol: Option<f64>,
    /// Random cases per identity for `verify`.
    #[serde(default)]
    pub cases: Option<usize>,
}

pub struct Job {
    pub delta: MeasuredSubgroup,
    pub windows: Vec<Window>,
    pub seed: u64,
    pub tol: f64,
    pub cases: usize,
}

impl JobSpec {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
    }

    /// Resolves the spec; command-line `seed` and `tol` take precedence over the file.
    pub fn resolve(&self, seed: Option<u64>, tol: Option<f64>) -> Result<Job, Failure> {
        let group = parse_group(&self.group)?;
        let delta = build_subgroup(&group, &self.generators, self.weight.as_deref())?;
        let seed = seed.or(self.seed).unwrap_or(0);
        let tol = tol.or(self.tol).unwrap_or(heisenmod_core::DEFAULT_FRAME_TOL);
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Failure::Parse(format!("tol: must be a non-negative number, got {tol}")));
        }
        let windows = if self.windows.is_empty() {
            vec![Window::randn(&group, seed)]
        } else {
            self.windows
                .iter()
                .enumerate()
                .map(|(i, w)| w.build(&group).map_err(|e| Failure::Parse(format!("windows[{i}]: {e}"))))
                .collect::<Result<_, _>>()?
        };
        Ok(Job {
            delta,
            windows,
            seed,
            tol,
            cases: self.cases.unwrap_or(20),
        })
    }
}
