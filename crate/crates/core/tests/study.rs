use std::collections::BTreeMap;

use laminated_modal::eigen::SolverSettings;
use laminated_modal::materials::MaterialDatabase;
use laminated_modal::study::{
    emit, generate_matrix, read_cases_csv, run_study, summarize, CaseSpec, GroupKey, RunOptions, StudyConfig,
    CASES_CSV, CSV_HEADER, QQ_CSV, SUMMARY_JSON,
};
use laminated_modal::{BoundaryCondition, Method};

fn sample() -> Vec<CaseSpec> {
    let all = generate_matrix();
    // one case per bc and section, varying interlayer
    all.into_iter().step_by(8).collect()
}

fn small_options() -> RunOptions {
    RunOptions {
        elements: 40,
        ..Default::default()
    }
}

fn run_into(dir: &std::path::Path, cases: &[CaseSpec], options: &RunOptions) {
    let results = run_study(cases, MaterialDatabase::builtin(), options).unwrap();
    let stats = summarize(&results, &[vec![GroupKey::Bc, GroupKey::Mode], vec![GroupKey::Mode]]).unwrap();
    emit(&results, &stats, options, dir).unwrap();
}

#[test]
fn outputs_are_deterministic_and_complete() {
    let cases = sample();
    let options = small_options();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_into(a.path(), &cases, &options);
    run_into(b.path(), &cases, &options);
    for name in [CASES_CSV, SUMMARY_JSON, QQ_CSV] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between runs");
    }

    let text = std::fs::read_to_string(a.path().join(CASES_CSV)).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let rows = read_cases_csv(&a.path().join(CASES_CSV)).unwrap();
    assert_eq!(rows.len(), cases.len() * 3 * 4);
    assert!(rows.iter().all(|r| r.converged));
    assert_eq!(rows[0].case_id, cases[0].id);
    assert_eq!((rows[0].h1, rows[0].h2, rows[0].h3), (10.0, 0.76, 10.0));

    let qq = std::fs::read_to_string(a.path().join(QQ_CSV)).unwrap();
    assert_eq!(qq.lines().count(), 1 + cases.len() * 3);

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.path().join(SUMMARY_JSON)).unwrap()).unwrap();
    assert_eq!(summary["case_count"], cases.len());
    assert_eq!(summary["failures"].as_array().unwrap().len(), 0);
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&summary).unwrap()).unwrap();
    assert_eq!(again, summary);
    assert_eq!(summary["options"]["elements"], 40);
    // 3 methods × 2 quantities × (bc×mode panels + mode panels)
    assert_eq!(summary["boxes"].as_array().unwrap().len(), 3 * 2 * (3 * 3 + 3));
}

#[test]
fn parallel_results_follow_input_order() {
    let cases = sample();
    let options = RunOptions {
        methods: vec![Method::Cnm, Method::Det],
        elements: 30,
        ..Default::default()
    };
    let a = run_study(&cases, MaterialDatabase::builtin(), &options).unwrap();
    let mut reversed = cases.clone();
    reversed.reverse();
    let mut b = run_study(&reversed, MaterialDatabase::builtin(), &options).unwrap();
    b.reverse();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.iter().zip(&cases).all(|(r, c)| r.spec == *c));
}

#[test]
fn failed_cells_are_recorded_not_fatal() {
    let cases = sample();
    let options = RunOptions {
        methods: vec![Method::Cnm, Method::Mse],
        settings: SolverSettings {
            tolerance: 1e-14,
            max_iter: 1,
            ..Default::default()
        },
        elements: 20,
    };
    let results = run_study(&cases, MaterialDatabase::builtin(), &options).unwrap();
    let failed: Vec<_> = results.iter().flat_map(|c| &c.rows).filter(|r| !r.converged).collect();
    assert!(!failed.is_empty());
    for r in &failed {
        assert!(r.frequency.is_nan() && r.loss_factor.is_nan());
        assert!(r.failure.as_deref().unwrap().contains("converge"));
    }
    let stats = summarize(&results, &[vec![GroupKey::Mode]]).unwrap();
    let mse: usize = stats
        .boxes
        .iter()
        .filter(|b| b.quantity == "f")
        .map(|b| b.failed + b.count)
        .sum();
    assert_eq!(mse, cases.len() * 3);

    let dir = tempfile::tempdir().unwrap();
    emit(&results, &stats, &options, dir.path()).unwrap();
    let rows = read_cases_csv(&dir.path().join(CASES_CSV)).unwrap();
    assert!(rows.iter().any(|r| !r.converged && r.f_hz.is_nan()));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(SUMMARY_JSON)).unwrap()).unwrap();
    assert_eq!(summary["failures"].as_array().unwrap().len(), failed.len());
}

#[test]
fn simply_supported_rows_agree_between_effective_methods() {
    let cases: Vec<CaseSpec> = generate_matrix()
        .into_iter()
        .filter(|c| c.bc == BoundaryCondition::SimplySupported)
        .collect();
    let options = RunOptions {
        methods: vec![Method::Det, Method::Eet],
        ..Default::default()
    };
    for c in run_study(&cases, MaterialDatabase::builtin(), &options).unwrap() {
        for mode in 1..=3 {
            let d = c.row(mode, Method::Det).unwrap();
            let e = c.row(mode, Method::Eet).unwrap();
            assert!((d.frequency - e.frequency).abs() <= 1e-10 * d.frequency);
            assert!((d.loss_factor - e.loss_factor).abs() <= 1e-10 * d.loss_factor);
        }
    }
}

#[test]
fn mse_loss_factor_error_decreases_with_mode() {
    let options = RunOptions {
        methods: vec![Method::Cnm, Method::Mse],
        ..Default::default()
    };
    let results = run_study(&generate_matrix(), MaterialDatabase::builtin(), &options).unwrap();
    let stats = summarize(&results, &[vec![GroupKey::Mode]]).unwrap();
    let medians: BTreeMap<String, f64> = stats
        .boxes
        .iter()
        .filter(|b| b.method == Method::Mse && b.quantity == "eta")
        .map(|b| (b.group["mode"].clone(), b.median))
        .collect();
    assert!(
        medians["1"] > medians["2"] && medians["2"] > medians["3"],
        "{medians:?}"
    );
    for c in &results {
        for r in &c.rows {
            assert!(r.converged && r.loss_factor >= 0.0, "{} {}", c.spec.id, r.method);
            if r.method == Method::Cnm {
                assert!(r.iterations <= 50);
            }
        }
    }
}

#[test]
fn config_file_runs_custom_cases() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("db.json"),
        MaterialDatabase::builtin().to_json().unwrap(),
    )
    .unwrap();
    let cfg_path = dir.path().join("study.json");
    std::fs::write(
        &cfg_path,
        r#"{"materials": "db.json", "methods": ["cnm", "eet"], "modes": 2, "elements": 30,
            "cases": [{"bc": "ff", "h1_mm": 8, "h2_mm": 0.38, "h3_mm": 8, "material": "PVB_A", "temp_c": 40}]}"#,
    )
    .unwrap();
    let cfg = StudyConfig::load(&cfg_path).unwrap();
    let options = cfg.options().unwrap();
    let results = run_study(&cfg.cases().unwrap(), &cfg.database().unwrap(), &options).unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0].rows.len(), 4);
    assert_eq!(results[0].spec.id, "FF-8/0.38/8-PVB_A-40C");
    assert!(results[0].rows.iter().all(|r| r.converged));
}
