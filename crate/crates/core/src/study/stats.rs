use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CaseResult;
use crate::eigen::Method;
use crate::error::{Error, Result};

/// Attribute a box-plot panel can be split by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKey {
    Bc,
    Mode,
    Section,
    Material,
    Temperature,
}

impl GroupKey {
    pub fn label(self) -> &'static str {
        match self {
            GroupKey::Bc => "bc",
            GroupKey::Mode => "mode",
            GroupKey::Section => "section",
            GroupKey::Material => "material",
            GroupKey::Temperature => "temperature",
        }
    }

    fn value(self, case: &CaseResult, mode: usize) -> String {
        match self {
            GroupKey::Bc => case.spec.bc.label().to_string(),
            GroupKey::Mode => mode.to_string(),
            GroupKey::Section => case.spec.section.label_mm(),
            GroupKey::Material => case.spec.material.clone(),
            GroupKey::Temperature => case.spec.temperature.to_string(),
        }
    }
}

/// `(key, value)` pairs naming one panel.
type Label = Vec<(String, String)>;

/// Box-plot statistics of the relative error of one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub method: Method,
    /// `f` or `eta`.
    pub quantity: String,
    pub group: BTreeMap<String, String>,
    pub count: usize,
    /// Cells excluded because the method or the reference failed.
    pub failed: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    /// Most extreme values within 1.5 IQR of the box.
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub min: f64,
    pub max: f64,
    pub outliers: Vec<f64>,
}

/// Pearson coefficient of method values against the CNM values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PearsonEntry {
    pub method: Method,
    pub quantity: String,
    pub mode: usize,
    pub count: usize,
    pub pcc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub boxes: Vec<BoxStats>,
    pub pearson: Vec<PearsonEntry>,
}

/// Percentile `p ∈ [0, 1]` of sorted data, linear interpolation between
/// order statistics (`h = (n - 1) p`).
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Pearson correlation coefficient; `None` for fewer than two points or a
/// constant series.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x[..n].iter().zip(&y[..n]) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn box_stats(
    method: Method,
    quantity: &str,
    group: BTreeMap<String, String>,
    mut values: Vec<f64>,
    failed: usize,
) -> BoxStats {
    values.sort_by(f64::total_cmp);
    let q25 = percentile(&values, 0.25);
    let q75 = percentile(&values, 0.75);
    let iqr = q75 - q25;
    let (lo_fence, hi_fence) = (q25 - 1.5 * iqr, q75 + 1.5 * iqr);
    let inside = values.iter().copied().filter(|v| *v >= lo_fence && *v <= hi_fence);
    let whisker_low = inside.clone().fold(f64::NAN, f64::min);
    let whisker_high = inside.fold(f64::NAN, f64::max);
    BoxStats {
        method,
        quantity: quantity.to_string(),
        group,
        count: values.len(),
        failed,
        median: percentile(&values, 0.5),
        q25,
        q75,
        whisker_low,
        whisker_high,
        min: values.first().copied().unwrap_or(f64::NAN),
        max: values.last().copied().unwrap_or(f64::NAN),
        outliers: values
            .iter()
            .copied()
            .filter(|v| *v < lo_fence || *v > hi_fence)
            .collect(),
    }
}

/// Error statistics of every non-reference method, one panel per distinct
/// value of `grouping` (e.g. `[[bc, mode], [mode]]`), plus Pearson
/// coefficients per mode.
pub fn summarize(results: &[CaseResult], grouping: &[Vec<GroupKey>]) -> Result<SummaryStats> {
    if results.is_empty() {
        return Err(Error::InvalidParameter("no results to summarize".into()));
    }
    let mut methods: Vec<Method> = results
        .iter()
        .flat_map(|c| c.rows.iter().map(|r| r.method))
        .filter(|m| *m != Method::Cnm)
        .collect();
    methods.sort();
    methods.dedup();
    let mut modes: Vec<usize> = results.iter().flat_map(|c| c.rows.iter().map(|r| r.mode)).collect();
    modes.sort();
    modes.dedup();

    let mut boxes = Vec::new();
    for keys in grouping {
        for &method in &methods {
            for quantity in ["f", "eta"] {
                // group label -> (values, failures); BTreeMap keeps a stable order
                let mut panels: BTreeMap<Label, (Vec<f64>, usize)> = BTreeMap::new();
                for case in results {
                    for row in case.rows.iter().filter(|r| r.method == method) {
                        let label: Label = keys
                            .iter()
                            .map(|k| (k.label().to_string(), k.value(case, row.mode)))
                            .collect();
                        let entry = panels.entry(label).or_default();
                        let v = if quantity == "f" {
                            row.err_f_vs_cnm
                        } else {
                            row.err_eta_vs_cnm
                        };
                        if v.is_finite() {
                            entry.0.push(v);
                        } else {
                            entry.1 += 1;
                        }
                    }
                }
                for (label, (values, failed)) in panels {
                    boxes.push(box_stats(method, quantity, label.into_iter().collect(), values, failed));
                }
            }
        }
    }

    let mut pcc = Vec::new();
    for &method in &methods {
        for quantity in ["f", "eta"] {
            for &mode in &modes {
                let (mut xs, mut ys) = (Vec::new(), Vec::new());
                for case in results {
                    let (Some(a), Some(b)) = (case.row(mode, Method::Cnm), case.row(mode, method)) else {
                        continue;
                    };
                    if !(a.converged && b.converged) {
                        continue;
                    }
                    if quantity == "f" {
                        xs.push(a.frequency);
                        ys.push(b.frequency);
                    } else {
                        xs.push(a.loss_factor);
                        ys.push(b.loss_factor);
                    }
                }
                pcc.push(PearsonEntry {
                    method,
                    quantity: quantity.to_string(),
                    mode,
                    count: xs.len(),
                    pcc: pearson(&xs, &ys),
                });
            }
        }
    }
    Ok(SummaryStats { boxes, pearson: pcc })
}
