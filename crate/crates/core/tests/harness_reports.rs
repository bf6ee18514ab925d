use std::collections::HashMap;
use std::path::PathBuf;
use std::process::Command;

use entropy_chain::dynamics::symbolic_horseshoe_oracle;
use entropy_chain::growth_rate_fit;
use entropy_chain::harness::*;
use proptest::prelude::*;

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn config(name: &str) -> ExperimentConfig {
    ExperimentConfig::parse(&std::fs::read_to_string(config_path(name)).unwrap()).unwrap()
}

fn shift_entropy() -> f64 {
    let a = symbolic_horseshoe_oracle(10).unwrap() as f64;
    let b = symbolic_horseshoe_oracle(20).unwrap() as f64;
    (b.ln() - a.ln()) / 10.0
}

#[test]
fn horseshoe_has_only_the_bar_top_verdict() {
    let r = compare_entropies(&config("horseshoe.kv")).unwrap();
    assert!(r.h_cat_model.is_none());
    assert_eq!(r.verdicts.len(), 1);
    assert_eq!(r.verdicts[0].lhs, "h_bar");
    assert_eq!(r.verdicts[0].rhs, "h_top_capacity");
    assert!(r.all_pass());
    let h = shift_entropy();
    for e in [r.h_bar, r.h_top_capacity, r.h_top_volume] {
        assert!((e.unwrap().value - h).abs() < 0.05 * h, "{e:?}");
    }
}

#[test]
fn support_avoiding_pair_has_zero_barcode_entropy() {
    let r = compare_entropies(&config("avoiding.kv")).unwrap();
    assert_eq!(r.h_bar.unwrap().value, 0.0);
    assert!(r.h_top_volume.unwrap().value > 0.6);
    assert!(r.all_pass());
    assert!(r
        .series
        .bar
        .as_ref()
        .unwrap()
        .rows
        .iter()
        .all(|row| row.b_epsilon == 0));
}

#[test]
fn reports_are_byte_identical() {
    let cfg = config("horseshoe.kv");
    let a = compare_entropies(&cfg).unwrap().artifacts();
    let b = compare_entropies(&cfg).unwrap().artifacts();
    assert_eq!(a, b);
    let mut twist = config("twist-crofton.kv");
    if let Some(c) = twist.crofton.as_mut() {
        c.iterates = 2;
        c.samples = 500;
    }
    assert_eq!(
        crofton_series(&twist).unwrap().to_json(),
        crofton_series(&twist).unwrap().to_json()
    );
}

#[test]
fn verdicts_recompute_from_csv() {
    let r = compare_entropies(&config("horseshoe.kv")).unwrap();
    let files: HashMap<String, String> = r.artifacts().into_iter().collect();
    let mut values = HashMap::new();
    for line in files["estimates.csv"].lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        values.insert(f[0].to_string(), f[1].parse::<f64>().unwrap());
    }
    for line in files["verdicts.csv"].lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (lhs, rhs, tol) = (values[f[1]], values[f[3]], f[5].parse::<f64>().unwrap());
        let verdict = if lhs <= rhs + tol { "PASS" } else { "FAIL" };
        assert_eq!(f[7], verdict);
    }
    // the per-n bar counts reproduce the fitted h_bar
    let counts: Vec<(usize, f64)> = files["bar.csv"]
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(1) == Some("1/8"))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(growth_rate_fit(&counts).unwrap().value, values["h_bar"]);
}

#[test]
fn sweep_over_geodesic_pairs() {
    let t = sup_inf_sweep(&config("cat-sweep.kv")).unwrap();
    assert_eq!(t.rows.len(), 6);
    let top = t.h_top_capacity.unwrap().value;
    assert!(
        (t.max_h_bar - top).abs() < 0.05 * top,
        "{} vs {top}",
        t.max_h_bar
    );
    assert_eq!(t.min_h_bar, 0.0);
    assert_eq!(t.observations.len(), 2);
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entropy-chain"))
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = cli()
        .args(["compare", config_path("avoiding.kv").to_str().unwrap()])
        .args(["--out-dir", dir.path().to_str().unwrap(), "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let json = std::fs::read_to_string(dir.path().join("comparison.json")).unwrap();
    assert!(json.contains("\"seed\": 3"));

    // a categorical model growing faster than the map must fail, never pass
    let cfg = dir.path().join("fail.kv");
    std::fs::write(
        &cfg,
        "system: horseshoe 1/3 3\ntree: A2\nword: A+ B- A+ B-\n\
         volume_curve: segment 0.4 0 0.4 1\nvolume_n_max: 10\n",
    )
    .unwrap();
    let fail = cli()
        .args(["compare", cfg.to_str().unwrap(), "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&fail.stdout);
    assert!(
        stdout.contains("FAIL h_cat <= h_top_volume + tol"),
        "{stdout}"
    );

    let bad = cli()
        .args(["compare", cfg.to_str().unwrap(), "--tol", "-1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let missing = cli().args(["sweep", "no/such/file.kv"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

proptest! {
    #[test]
    fn growth_fit_ignores_positive_scaling(
        counts in prop::collection::vec(1.0f64..1e6, 4..20),
        c in 0.01f64..100.0,
    ) {
        let a: Vec<(usize, f64)> = counts.iter().copied().enumerate().collect();
        let b: Vec<(usize, f64)> = counts.iter().map(|x| x * c).enumerate().collect();
        let (ea, eb) = (growth_rate_fit(&a).unwrap(), growth_rate_fit(&b).unwrap());
        prop_assert!((ea.fit_slope - eb.fit_slope).abs() < 1e-9);
    }
}
