//! Harness behavior: byte-identical reruns, config-file dispatch, artifact
//! round-trips through the real binary, and the exit-code contract.

use isoqubits_cli::config::ExperimentConfig;
use isoqubits_cli::experiments::run_experiment;
use isoqubits_cli::output::OutputFormat;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isoqubits"))
}

fn tmpdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("isoqubits-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn same_config_twice_gives_byte_identical_csv() {
    let cfg = ExperimentConfig {
        n: Some(8),
        nb: Some(3),
        seeds: Some(10),
        seed: Some(7),
        ..Default::default()
    };
    let a = run_experiment("hiding-pgm", &cfg).unwrap();
    let b = run_experiment("hiding-pgm", &cfg).unwrap();
    let csv_a = a.table.as_ref().unwrap().to_csv();
    let csv_b = b.table.as_ref().unwrap().to_csv();
    assert_eq!(csv_a, csv_b);
    // and json renders deterministically too
    assert_eq!(
        a.table.as_ref().unwrap().render(OutputFormat::Json),
        b.table.as_ref().unwrap().render(OutputFormat::Json)
    );
    // every row respects the per-row guarantee success >= bound
    for row in &a.table.unwrap().rows {
        let succ = match row[1] {
            isoqubits_cli::output::Value::Float(f) => f,
            _ => panic!("success column should be a float"),
        };
        let bound = match row[2] {
            isoqubits_cli::output::Value::Float(f) => f,
            _ => panic!("bound column should be a float"),
        };
        assert!(succ >= bound - 1e-12);
    }
}

#[test]
fn unknown_experiment_is_a_config_error() {
    let cfg = ExperimentConfig::default();
    let err = run_experiment("no-such-thing", &cfg).unwrap_err();
    assert!(matches!(err, isoqubits_cli::CliError::Config(_)));
}

#[test]
fn missing_field_is_a_config_error_with_field_name() {
    let cfg = ExperimentConfig::default();
    let err = run_experiment("hiding-pgm", &cfg).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("--nb"), "message was {msg:?}");
}

#[test]
fn binary_exit_codes() {
    // config error -> 2
    let out = bin().args(["codes", "params", "--n", "64"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // success -> 0
    let out = bin()
        .args(["codes", "params", "--n", "64", "--theta", "0.08", "--tau", "0.02"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("# experiment=codes-params"));
    assert!(stdout.contains("n,theta,tau,p_e,k,r"));
    // k = 20 at these parameters
    assert!(stdout.contains(",20,"), "{stdout}");
}

#[test]
fn binary_rerun_is_byte_identical() {
    let dir = tmpdir("rerun");
    let p1 = dir.join("a.csv");
    let p2 = dir.join("b.csv");
    for p in [&p1, &p2] {
        let out = bin()
            .args([
                "hiding", "pgm", "--n", "8", "--nb", "3", "--seeds", "5", "--seed", "9", "--out",
            ])
            .arg(p)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn net_artifact_round_trips_through_binary() {
    let dir = tmpdir("net");
    let path = dir.join("net.txt");
    let out = bin()
        .args(["net", "build", "--q", "2", "--eps", "0.4", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read(&path).unwrap();
    let net = isoqubits::locc::read_net(&mut &text[..]).unwrap();
    assert_eq!(net.q, 2);
    assert_eq!(net.epsilon, 0.4);
    // bit-exact re-serialization
    let mut buf = Vec::new();
    isoqubits::locc::write_net(&net, &mut buf).unwrap();
    assert_eq!(buf, text);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn device_artifact_round_trips_through_binary() {
    let dir = tmpdir("dev");
    let path = dir.join("device.txt");
    let out = bin()
        .args([
            "otm", "sample", "--n", "64", "--theta", "0.08", "--tau", "0.02", "--seed", "3",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read(&path).unwrap();
    let device = isoqubits::otm::read_device(&mut &text[..]).unwrap();
    assert_eq!(device.n, 64);
    assert_eq!(device.k, 20);
    assert!(device.params.is_some());
    // encode through the loaded device file
    let out = bin()
        .args(["otm", "encode", "--s", "1", "--t", "2", "--device"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("qubit,c_bit,d_bit"));
    assert_eq!(stdout.lines().count(), 2 + 64);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_file_dispatch_matches_flags() {
    let dir = tmpdir("cfg");
    let cfg_path = dir.join("run.toml");
    let out_path = dir.join("out.csv");
    std::fs::write(
        &cfg_path,
        format!(
            "experiment = \"codes-montecarlo\"\nn = 32\ntheta = 0.25\ntau = 0.05\n\
             trials = 50\nseeds = 2\nseed = 11\nout = \"{}\"\n",
            out_path.display()
        ),
    )
    .unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let via_config = std::fs::read(&out_path).unwrap();

    let flags_path = dir.join("out2.csv");
    let out = bin()
        .args([
            "codes",
            "montecarlo",
            "--n",
            "32",
            "--theta",
            "0.25",
            "--tau",
            "0.05",
            "--trials",
            "50",
            "--seeds",
            "2",
            "--seed",
            "11",
            "--out",
        ])
        .arg(&flags_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let via_flags = std::fs::read(&flags_path).unwrap();
    assert_eq!(via_config, via_flags);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tmpdir("badcfg");
    let cfg_path = dir.join("bad.toml");
    std::fs::write(&cfg_path, "experiment = \"codes-params\"\nnn = 3\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

fn float_cell(v: &isoqubits_cli::output::Value) -> f64 {
    match v {
        isoqubits_cli::output::Value::Float(f) => *f,
        isoqubits_cli::output::Value::Int(i) => *i as f64,
        other => panic!("expected a number, got {other:?}"),
    }
}

#[test]
fn otm_info_experiment_records_maxima_under_two_k() {
    // the (n=4, k=2) sub-threshold device: empirical maxima over the
    // enumerated strategies never exceed 2k
    let cfg = ExperimentConfig {
        n: Some(4),
        k: Some(2),
        eps: Some(0.5),
        seeds: Some(2),
        seed: Some(3),
        cap: Some(200_000),
        ..Default::default()
    };
    let out = run_experiment("otm-info", &cfg).unwrap();
    let table = out.table.unwrap();
    assert_eq!(
        table.columns,
        vec!["seed_c", "seed_d", "depth", "strategies", "max_info", "two_k"]
    );
    assert_eq!(table.rows.len(), 2);
    for row in &table.rows {
        let max_info = float_cell(&row[4]);
        let two_k = float_cell(&row[5]);
        assert_eq!(two_k, 4.0);
        assert!(max_info <= two_k + 1e-9);
        assert!(max_info > 0.0);
        assert!(float_cell(&row[3]) >= 1.0);
    }
}

#[test]
fn hiding_search_experiment_orders_greedy_and_exhaustive() {
    let cfg = ExperimentConfig {
        n: Some(2),
        nb: Some(2),
        eps: Some(0.4),
        seeds: Some(2),
        seed: Some(21),
        ..Default::default()
    };
    let out = run_experiment("hiding-search", &cfg).unwrap();
    let table = out.table.unwrap();
    for row in &table.rows {
        let chi = float_cell(&row[1]);
        let greedy = float_cell(&row[2]);
        let exhaustive = float_cell(&row[3]);
        assert!(greedy <= exhaustive + 1e-9);
        assert!(exhaustive <= chi + 1e-9);
    }
    // refusal instead of truncation when the cap is too small
    let mut tight = cfg.clone();
    tight.cap = Some(10);
    let err = run_experiment("hiding-search", &tight).unwrap_err();
    assert!(matches!(err, isoqubits_cli::CliError::Config(_)));
}

#[test]
fn collision_experiments_report_identities() {
    let cfg = ExperimentConfig {
        n: Some(4),
        nb: Some(3),
        m: Some(2),
        eps: Some(0.9),
        seed: Some(77),
        ..Default::default()
    };
    let out = run_experiment("hiding-collision", &cfg).unwrap();
    let table = out.table.unwrap();
    assert_eq!(table.rows.len(), 6); // C(4,2) subsets
    for row in &table.rows {
        assert!(float_cell(&row[4]) <= 1e-9, "identity residual too large");
    }
    assert!(out.summary[0].contains("hiding collision scan"));

    let cfg = ExperimentConfig {
        n: Some(4),
        k: Some(2),
        m: Some(1),
        eps: Some(0.9),
        seed: Some(78),
        ..Default::default()
    };
    let out = run_experiment("otm-collision", &cfg).unwrap();
    for row in &out.table.unwrap().rows {
        assert!(float_cell(&row[4]) <= 1e-9);
    }
    assert!(out.summary[0].contains("otm collision scan"));
}

#[test]
fn otm_experiments_small_smoke() {
    // honest recovery rows carry sane rates
    let cfg = ExperimentConfig {
        n: Some(32),
        k: Some(4),
        trials: Some(100),
        seeds: Some(2),
        seed: Some(12),
        ..Default::default()
    };
    let out = run_experiment("otm-honest", &cfg).unwrap();
    for row in &out.table.unwrap().rows {
        let rate = float_cell(&row[4]);
        assert!((0.0..=1.0).contains(&rate));
        let err = float_cell(&row[5]);
        assert!((err - 0.1464).abs() < 0.05);
    }
    // leak rows bounded by 2k
    let cfg = ExperimentConfig {
        n: Some(6),
        k: Some(2),
        seeds: Some(3),
        seed: Some(13),
        ..Default::default()
    };
    let out = run_experiment("otm-leak", &cfg).unwrap();
    for row in &out.table.unwrap().rows {
        let info = float_cell(&row[2]);
        assert!((0.0..=4.0 + 1e-9).contains(&info));
    }
    // phase rows chain exactly
    let cfg = ExperimentConfig {
        n: Some(6),
        k: Some(2),
        seeds: Some(3),
        seed: Some(14),
        ..Default::default()
    };
    let out = run_experiment("otm-phases", &cfg).unwrap();
    for row in &out.table.unwrap().rows {
        assert!(float_cell(&row[10]) <= 1e-9, "chain residual too large");
        assert!(float_cell(&row[7]) <= float_cell(&row[8]) + 1e-9);
    }
    // the computational game reproduces its oracle column
    let cfg = ExperimentConfig {
        n: Some(6),
        nb: Some(3),
        seeds: Some(3),
        seed: Some(15),
        ..Default::default()
    };
    let out = run_experiment("hiding-game", &cfg).unwrap();
    for row in &out.table.unwrap().rows {
        let h = float_cell(&row[1]);
        let oracle = float_cell(&row[2]);
        assert!((h - oracle).abs() < 1e-9);
    }
}

#[test]
fn exit_code_contract() {
    use isoqubits_cli::CliError;
    assert_eq!(CliError::Config("x".into()).exit_code(), 2);
    assert_eq!(CliError::CheckFailed("x".into()).exit_code(), 3);
    assert_eq!(CliError::Other("x".into()).exit_code(), 1);
}

#[test]
fn montecarlo_success_is_nondecreasing_in_n() {
    // fixed (theta, tau): success rates across n in {32, 64, 128} must not
    // decrease beyond 3-sigma noise
    let cfg = ExperimentConfig {
        theta: Some(0.25),
        tau: Some(0.05),
        trials: Some(150),
        seeds: Some(3),
        seed: Some(5),
        ..Default::default()
    };
    let out = run_experiment("codes-montecarlo", &cfg).unwrap();
    let table = out.table.unwrap();
    let mut by_n: std::collections::BTreeMap<i128, Vec<f64>> = std::collections::BTreeMap::new();
    for row in &table.rows {
        let n = match row[0] {
            isoqubits_cli::output::Value::Int(v) => v,
            _ => unreachable!(),
        };
        let rate = match row[4] {
            isoqubits_cli::output::Value::Float(v) => v,
            _ => unreachable!(),
        };
        by_n.entry(n).or_default().push(rate);
    }
    let means: Vec<f64> = by_n
        .values()
        .map(|v| v.iter().sum::<f64>() / v.len() as f64)
        .collect();
    assert_eq!(means.len(), 3);
    let trials_per_n = 150.0 * 3.0;
    for w in means.windows(2) {
        // two-sample binomial sigma; floor keeps it meaningful when one
        // rate saturates at 1.0
        let var = (w[0] * (1.0 - w[0]) + w[1] * (1.0 - w[1])) / trials_per_n;
        let sigma = var.sqrt().max(1.0 / trials_per_n);
        assert!(
            w[1] >= w[0] - 3.0 * sigma,
            "success rates decreased: {means:?}"
        );
    }
}
