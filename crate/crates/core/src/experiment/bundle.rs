use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{format_float, GridFunction};
use crate::solver::AlphaPathRecord;

use super::config::ExperimentConfig;
use super::plot::emit_plots;
use super::run::Setup;

/// One parameter choice on one path, with its errors against the truth.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeSummary {
    pub rule: String,
    pub alpha_star: f64,
    pub index: usize,
    pub delta_star: f64,
    pub theta_star: f64,
    pub l2_error: f64,
    pub l1_error: f64,
    /// `D_{xi†} R(x_{alpha_*}, x†)`.
    pub bregman: f64,
    /// Discrete total variation of the reconstruction.
    pub tv: f64,
    pub no_qualifying_alpha: bool,
    pub delta_star_small: bool,
}

/// The path of one penalty and the rules applied to it.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyRun {
    pub label: String,
    pub path: Vec<AlphaPathRecord>,
    pub bregman_to_truth: Vec<f64>,
    pub l2_error_to_truth: Vec<f64>,
    pub l1_error_to_truth: Vec<f64>,
    pub outcomes: Vec<OutcomeSummary>,
}

impl PenaltyRun {
    pub fn outcome(&self, rule: &str) -> Option<&OutcomeSummary> {
        self.outcomes.iter().find(|o| o.rule == rule)
    }

    /// Index and value of the smallest L² error along the path.
    pub fn best_on_grid(&self) -> Option<(usize, f64)> {
        self.l2_error_to_truth
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Complete, reproducible output of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultBundle {
    pub config: ExperimentConfig,
    pub x_dagger: GridFunction,
    pub y_exact: GridFunction,
    pub y_noisy: GridFunction,
    pub delta: f64,
    pub runs: Vec<PenaltyRun>,
}

impl ResultBundle {
    pub fn new(config: ExperimentConfig, setup: &Setup, runs: Vec<PenaltyRun>) -> Self {
        Self {
            config,
            x_dagger: setup.x_dagger.clone(),
            y_exact: setup.y_exact.clone(),
            y_noisy: setup.y_noisy.clone(),
            delta: setup.delta,
            runs,
        }
    }

    pub fn run(&self, label: &str) -> Option<&PenaltyRun> {
        self.runs.iter().find(|r| r.label == label)
    }

    /// `t,y_exact,y_noisy`
    pub fn data_csv(&self) -> Result<String> {
        let t = self.y_exact.grid().nodes();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["t", "y_exact", "y_noisy"])?;
        for i in 0..t.len() {
            w.write_record([t[i], self.y_exact.values()[i], self.y_noisy.values()[i]].map(format_float))?;
        }
        finish(w)
    }

    pub fn path_csv(&self, run: &PenaltyRun) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "j",
            "alpha",
            "residual",
            "penalty",
            "theta",
            "objective",
            "iters",
            "converged",
            "bregman_to_truth",
            "l2_error_to_truth",
        ])?;
        for (k, rec) in run.path.iter().enumerate() {
            w.write_record([
                rec.j.to_string(),
                format_float(rec.alpha),
                format_float(rec.residual),
                format_float(rec.penalty),
                format_float(rec.theta),
                format_float(rec.objective),
                rec.iters.to_string(),
                rec.converged.to_string(),
                format_float(run.bregman_to_truth[k]),
                format_float(run.l2_error_to_truth[k]),
            ])?;
        }
        finish(w)
    }

    /// `t,x_dagger,x_<rule>...`; `None` when no rule was applied.
    pub fn reconstruction_csv(&self, run: &PenaltyRun) -> Result<Option<String>> {
        if run.outcomes.is_empty() {
            return Ok(None);
        }
        let t = self.x_dagger.grid().nodes();
        let mut header = vec!["t".to_string(), "x_dagger".to_string()];
        header.extend(run.outcomes.iter().map(|o| format!("x_{}", o.rule)));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header)?;
        for i in 0..t.len() {
            let mut row = vec![format_float(t[i]), format_float(self.x_dagger.values()[i])];
            row.extend(run.outcomes.iter().map(|o| format_float(run.path[o.index].x.values()[i])));
            w.write_record(&row)?;
        }
        finish(w).map(Some)
    }

    /// One row per (penalty, rule), plus the best grid value by L² error.
    pub fn summary_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "penalty",
            "rule",
            "alpha_star",
            "index",
            "delta",
            "delta_star",
            "theta_star",
            "l2_error",
            "l1_error",
            "bregman",
            "tv",
            "no_qualifying_alpha",
            "delta_star_small",
        ])?;
        for run in &self.runs {
            for o in &run.outcomes {
                w.write_record([
                    run.label.clone(),
                    o.rule.clone(),
                    format_float(o.alpha_star),
                    o.index.to_string(),
                    format_float(self.delta),
                    format_float(o.delta_star),
                    format_float(o.theta_star),
                    format_float(o.l2_error),
                    format_float(o.l1_error),
                    format_float(o.bregman),
                    format_float(o.tv),
                    o.no_qualifying_alpha.to_string(),
                    o.delta_star_small.to_string(),
                ])?;
            }
            if let Some((i, err)) = run.best_on_grid() {
                let rec = &run.path[i];
                w.write_record([
                    run.label.clone(),
                    "best_on_grid".into(),
                    format_float(rec.alpha),
                    i.to_string(),
                    format_float(self.delta),
                    format_float(rec.residual),
                    format_float(rec.theta),
                    format_float(err),
                    format_float(run.l1_error_to_truth[i]),
                    format_float(run.bregman_to_truth[i]),
                    format_float(crate::grid::total_variation(&rec.x)),
                    String::new(),
                    String::new(),
                ])?;
            }
        }
        finish(w)
    }

    /// Every output file as `(name, contents)`, in a fixed order.
    pub fn files(&self) -> Result<Vec<(String, String)>> {
        let mut files = vec![
            ("config.json".to_string(), self.config.to_json()),
            ("data.csv".to_string(), self.data_csv()?),
        ];
        for run in &self.runs {
            files.push((format!("path_{}.csv", run.label), self.path_csv(run)?));
            if let Some(rec) = self.reconstruction_csv(run)? {
                files.push((format!("reconstruction_{}.csv", run.label), rec));
            }
        }
        files.push(("summary.csv".to_string(), self.summary_csv()?));
        let (plots, warnings) = emit_plots(self);
        for w in warnings {
            log::warn!("{w}");
        }
        files.extend(plots);
        Ok(files)
    }

    /// Writes [`files`](Self::files) into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<Vec<String>> {
        std::fs::create_dir_all(dir)?;
        let files = self.files()?;
        for (name, contents) in &files {
            std::fs::write(dir.join(name), contents)?;
        }
        Ok(files.into_iter().map(|(n, _)| n).collect())
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
