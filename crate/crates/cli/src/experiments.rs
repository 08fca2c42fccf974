//! The experiment implementations. Each experiment validates its inputs,
//! derives all randomness from (master seed, trial index), and produces a
//! table plus optional artifact files. Re-running a configuration yields
//! byte-identical output regardless of worker count.

use crate::config::ExperimentConfig;
use crate::output::Table;
use crate::seeding::trial_seed;
use crate::CliError;
use isoqubits::codes::{
    bsc_channel, channel_error_probability, decode_success_bound, derive_params,
    nearest_codeword_decode, sample_code,
};
use isoqubits::entropy::mutual_information;
use isoqubits::hiding::{
    conditional_collision, discrimination_game, pgm_success, sample_ensemble, write_ensemble,
    HidingEnsemble,
};
use isoqubits::locc::{
    build_net_2outcome, build_net_qoutcome, count_strategies, distinct_net_elements,
    enumerate_outcome_records, enumerate_strategies, greedy_strategy, joint_distribution,
    write_net, MeasurementNet,
};
use isoqubits::oracle::random_projective_strategy;
use isoqubits::otm::{
    build_device, conditional_collision_otm, desk_device, honest_recover, leak_eval, leak_strategy,
    otm_encode, otm_information, phase_decomposition, read_device, split_points_for, write_device,
    OtmDevice, OtmSide,
};
use isoqubits::qubit::{holevo_chi, DistributionTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::path::PathBuf;

/// What an experiment produced: a table (written by the caller), free-form
/// summary lines, and any artifact files already written.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub table: Option<Table>,
    pub summary: Vec<String>,
    pub written: Vec<PathBuf>,
}

pub const EXPERIMENTS: &[&str] = &[
    "net-build",
    "hiding-sample",
    "hiding-pgm",
    "hiding-game",
    "hiding-search",
    "hiding-collision",
    "otm-sample",
    "otm-encode",
    "otm-honest",
    "otm-leak",
    "otm-info",
    "otm-collision",
    "otm-phases",
    "codes-params",
    "codes-bound",
    "codes-montecarlo",
    "check-all",
];

pub fn run_experiment(name: &str, cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    match name {
        "net-build" => net_build(cfg),
        "hiding-sample" => hiding_sample(cfg),
        "hiding-pgm" => hiding_pgm(cfg),
        "hiding-game" => hiding_game(cfg),
        "hiding-search" => hiding_search(cfg),
        "hiding-collision" => hiding_collision(cfg),
        "otm-sample" => otm_sample(cfg),
        "otm-encode" => otm_encode_cmd(cfg),
        "otm-honest" => otm_honest(cfg),
        "otm-leak" => otm_leak(cfg),
        "otm-info" => otm_info(cfg),
        "otm-collision" => otm_collision(cfg),
        "otm-phases" => otm_phases(cfg),
        "codes-params" => codes_params(cfg),
        "codes-bound" => codes_bound(cfg),
        "codes-montecarlo" => codes_montecarlo(cfg),
        "check-all" => check_all(cfg),
        other => Err(CliError::Config(format!(
            "unknown experiment {other:?}; known: {}",
            EXPERIMENTS.join(", ")
        ))),
    }
}

fn build_net(cfg: &ExperimentConfig) -> Result<MeasurementNet, CliError> {
    let q = cfg.q.unwrap_or(2);
    let eps = cfg.require_f64("eps", cfg.eps)?;
    Ok(if q == 2 {
        build_net_2outcome(eps)?
    } else {
        build_net_qoutcome(q, eps)?
    })
}

fn net_build(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let net = build_net(cfg)?;
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Config("net-build requires --out".into()))?;
    let mut file = std::io::BufWriter::new(std::fs::File::create(&out)?);
    write_net(&net, &mut file)?;
    use std::io::Write;
    file.flush()?;
    Ok(RunOutput {
        table: None,
        summary: vec![format!(
            "net q={} eps={} members={} achieved_q_constant={:.4}",
            net.q,
            net.epsilon,
            net.len(),
            net.achieved_qoutcome_constant()
        )],
        written: vec![out],
    })
}

fn hiding_sample(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let nb = cfg.require_usize("nb", cfg.nb)?;
    let n = cfg.require_usize("n", cfg.n)?;
    let e = sample_ensemble(nb, n, cfg.seed())?;
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Config("hiding-sample requires --out".into()))?;
    let mut file = std::io::BufWriter::new(std::fs::File::create(&out)?);
    write_ensemble(&e, &mut file)?;
    use std::io::Write;
    file.flush()?;
    Ok(RunOutput {
        table: None,
        summary: vec![format!("ensemble nb={nb} n={n} seed={}", cfg.seed())],
        written: vec![out],
    })
}

fn ensemble_for(cfg: &ExperimentConfig, index: u64) -> Result<HidingEnsemble, CliError> {
    let nb = cfg.require_usize("nb", cfg.nb)?;
    let n = cfg.require_usize("n", cfg.n)?;
    cfg.check_dim("nb", nb)?;
    cfg.check_dim("n", n)?;
    Ok(sample_ensemble(nb, n, trial_seed(cfg.seed(), index))?)
}

fn hiding_pgm(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let seeds = cfg.seeds.unwrap_or(100);
    let mut table = Table::new(
        "hiding-pgm",
        cfg.seed(),
        vec!["seed", "success_prob", "gram_bound", "gramfro"],
    );
    let rows: Vec<Result<Vec<crate::output::Value>, CliError>> = (0..seeds as u64)
        .into_par_iter()
        .map(|i| {
            let e = ensemble_for(cfg, i)?;
            let s = pgm_success(&e)?;
            Ok(vec![
                e.seed().into(),
                s.probability.into(),
                s.gram_lower_bound.into(),
                s.gram_frobenius.into(),
            ])
        })
        .collect();
    for row in rows {
        table.push(row?);
    }
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn hiding_game(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let seeds = cfg.seeds.unwrap_or(50);
    let n = cfg.require_usize("n", cfg.n)?;
    let mut table = Table::new(
        "hiding-game",
        cfg.seed(),
        vec!["seed", "h_z_given_u", "h_oracle", "info"],
    );
    let rows: Vec<Result<Vec<crate::output::Value>, CliError>> = (0..seeds as u64)
        .into_par_iter()
        .map(|i| {
            let e = ensemble_for(cfg, i)?;
            let strat = leak_strategy(n);
            let info = discrimination_game(&e, &strat)?;
            let oracle = isoqubits::oracle::computational_conditional_entropy(&e);
            // H(Z|U) from the exact game law, via H(Z) - I
            let states = e.all_states();
            let prior = DistributionTable::uniform((0..states.len()).collect())?;
            let joint = joint_distribution(&strat, &states, &prior)?;
            let mut marg: std::collections::HashMap<&[u8], f64> = std::collections::HashMap::new();
            for ((_, z), p) in joint.entries() {
                *marg.entry(z.as_slice()).or_insert(0.0) += *p;
            }
            let h_z: f64 = marg.values().copied().map(isoqubits::entropy::eta).sum();
            Ok(vec![
                e.seed().into(),
                (h_z - info).into(),
                oracle.into(),
                info.into(),
            ])
        })
        .collect();
    for row in rows {
        table.push(row?);
    }
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn hiding_search(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let seeds = cfg.seeds.unwrap_or(5);
    let n = cfg.require_usize("n", cfg.n)?;
    let net = build_net(cfg)?;
    let count = count_strategies(n, net.len(), net.q, n);
    match count {
        Some(c) if c <= cfg.cap() as u128 => {}
        _ => {
            return Err(CliError::Config(format!(
                "exhaustive search needs {} strategies, over --cap {}",
                count.map(|c| c.to_string()).unwrap_or_else(|| "> u128".into()),
                cfg.cap()
            )))
        }
    }
    let mut table = Table::new(
        "hiding-search",
        cfg.seed(),
        vec!["seed", "chi", "greedy_info", "exhaustive_max", "strategies"],
    );
    for i in 0..seeds as u64 {
        let e = ensemble_for(cfg, i)?;
        let states = e.all_states();
        let prior = DistributionTable::uniform((0..states.len()).collect())?;
        let subset: Vec<usize> = (0..n).collect();
        let chi = holevo_chi(&states, &prior, &subset)?;
        let greedy = greedy_strategy(&states, &prior, &net)?;
        let greedy_info = mutual_information(&joint_distribution(&greedy, &states, &prior)?);
        let total = count.expect("checked above");
        let workers = rayon::current_num_threads().max(1) as u128;
        let chunk = total.div_ceil(workers);
        let best = (0..workers)
            .into_par_iter()
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(total);
                let mut local: f64 = 0.0;
                if lo < hi {
                    let stream = enumerate_strategies(n, &net, n, cfg.cap() as u128)
                        .expect("count checked")
                        .slice(lo, hi);
                    for tree in stream {
                        let info =
                            mutual_information(&joint_distribution(&tree, &states, &prior)?);
                        local = local.max(info);
                    }
                }
                Ok::<f64, CliError>(local)
            })
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
        table.push(vec![
            e.seed().into(),
            chi.into(),
            greedy_info.into(),
            best.into(),
            (total as u64).into(),
        ]);
    }
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

/// Lexicographic m-subsets of 0..n.
pub fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    if m == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        let mut i = m - 1;
        while cur[i] == i + n - m {
            if i == 0 {
                return out;
            }
            i -= 1;
        }
        cur[i] += 1;
        for j in i + 1..m {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn subset_label(subset: &[usize]) -> String {
    subset
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

fn hiding_collision(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let nb = cfg.require_usize("nb", cfg.nb)?;
    let n = cfg.require_usize("n", cfg.n)?;
    let m = cfg
        .m
        .unwrap_or(((nb as f64) / (8.0f64 / 3.0).log2()).floor() as usize);
    if m > n {
        return Err(CliError::Config(format!("m = {m} exceeds n = {n}")));
    }
    let e = sample_ensemble(nb, n, cfg.seed())?;
    let net = build_net(&with_default_eps(cfg, 0.8))?;
    let elements = distinct_net_elements(&net);
    let bound_ref = nb as f64 - m as f64 * (1.5f64).log2();
    let mut table = Table::new(
        "hiding-collision",
        cfg.seed(),
        vec!["subset", "outcomes", "min_h2", "slack", "max_residual"],
    );
    let subsets = combinations(n, m);
    let rows: Vec<Result<(String, usize, f64, f64), CliError>> = subsets
        .par_iter()
        .map(|subset| {
            let mut min_h2 = f64::INFINITY;
            let mut max_residual: f64 = 0.0;
            let mut outcomes = 0usize;
            for record in enumerate_outcome_records(&elements, subset) {
                let ce = conditional_collision(&e, &record)?;
                min_h2 = min_h2.min(ce.bits);
                max_residual = max_residual.max(ce.identity_residual);
                outcomes += 1;
            }
            Ok((subset_label(subset), outcomes, min_h2, max_residual))
        })
        .collect();
    let mut global_min = f64::INFINITY;
    let mut global_residual: f64 = 0.0;
    let mut total_outcomes = 0usize;
    for row in rows {
        let (label, outcomes, min_h2, max_residual) = row?;
        global_min = global_min.min(min_h2);
        global_residual = global_residual.max(max_residual);
        total_outcomes += outcomes;
        table.push(vec![
            label.into(),
            outcomes.into(),
            min_h2.into(),
            (bound_ref - min_h2).into(),
            max_residual.into(),
        ]);
    }
    Ok(RunOutput {
        table: Some(table),
        summary: vec![format!(
            "hiding collision scan: nb={nb} n={n} m={m} outcomes={total_outcomes} min_h2={global_min:.6} \
             reference={bound_ref:.6} slack={:.6} max_residual={global_residual:.3e}",
            bound_ref - global_min
        )],
        written: Vec::new(),
    })
}

fn with_default_eps(cfg: &ExperimentConfig, eps: f64) -> ExperimentConfig {
    let mut c = cfg.clone();
    if c.eps.is_none() {
        c.eps = Some(eps);
    }
    c
}

fn device_for(cfg: &ExperimentConfig, index: u64) -> Result<OtmDevice, CliError> {
    let n = cfg.require_usize("n", cfg.n)?;
    let seed_c = trial_seed(cfg.seed(), 2 * index);
    let seed_d = trial_seed(cfg.seed(), 2 * index + 1);
    match (cfg.theta, cfg.tau) {
        (Some(theta), Some(tau)) => {
            let params = derive_params(n, theta, tau)?;
            if let Some(k) = cfg.k {
                if k != params.k {
                    return Err(CliError::Config(format!(
                        "--k {k} conflicts with derived k = {}",
                        params.k
                    )));
                }
            }
            Ok(build_device(&params, seed_c, seed_d)?)
        }
        (None, None) => {
            let k = cfg.require_usize("k", cfg.k)?;
            Ok(desk_device(n, k, seed_c, seed_d)?)
        }
        _ => Err(CliError::Config(
            "--theta and --tau must be given together".into(),
        )),
    }
}

fn otm_sample(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let device = device_for(cfg, 0)?;
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Config("otm-sample requires --out".into()))?;
    let mut file = std::io::BufWriter::new(std::fs::File::create(&out)?);
    write_device(&device, &mut file)?;
    use std::io::Write;
    file.flush()?;
    Ok(RunOutput {
        table: None,
        summary: vec![format!(
            "device n={} k={} params={}",
            device.n,
            device.k,
            device.params.is_some()
        )],
        written: vec![out],
    })
}

fn otm_encode_cmd(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let device = match &cfg.device {
        Some(path) => {
            let file = std::fs::File::open(path)
                .map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
            read_device(&mut std::io::BufReader::new(file))?
        }
        None => device_for(cfg, 0)?,
    };
    let s = cfg
        .s
        .ok_or_else(|| CliError::Config("missing required field --s".into()))?;
    let t = cfg
        .t
        .ok_or_else(|| CliError::Config("missing required field --t".into()))?;
    let state = otm_encode(&device, s, t)?;
    let cw_c = device.code_c.codeword(s)?;
    let cw_d = device.code_d.codeword(t)?;
    let mut table = Table::new(
        "otm-encode",
        cfg.seed(),
        vec!["qubit", "c_bit", "d_bit", "amp0_re", "amp0_im", "amp1_re", "amp1_im"],
    );
    for (i, q) in state.qubits().iter().enumerate() {
        table.push(vec![
            i.into(),
            (cw_c[i] as u64).into(),
            (cw_d[i] as u64).into(),
            q.amp0().re.into(),
            q.amp0().im.into(),
            q.amp1().re.into(),
            q.amp1().im.into(),
        ]);
    }
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn side_of(cfg: &ExperimentConfig) -> Result<OtmSide, CliError> {
    match cfg.side.as_deref() {
        None | Some("s") => Ok(OtmSide::RecoverS),
        Some("t") => Ok(OtmSide::RecoverT),
        Some(other) => Err(CliError::Config(format!(
            "unknown side {other:?} (want s or t)"
        ))),
    }
}

fn otm_honest(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let seeds = cfg.seeds.unwrap_or(20);
    let trials = cfg.trials.unwrap_or(1000);
    let side = side_of(cfg)?;
    let mut table = Table::new(
        "otm-honest",
        cfg.seed(),
        vec![
            "seed_c",
            "seed_d",
            "trials",
            "successes",
            "success_rate",
            "qubit_error_rate",
        ],
    );
    let rows: Vec<Result<Vec<crate::output::Value>, CliError>> = (0..seeds as u64)
        .into_par_iter()
        .map(|i| {
            let device = device_for(cfg, i)?;
            let mut rng = ChaCha12Rng::seed_from_u64(trial_seed(cfg.seed(), 1 << 32 | i));
            let mut successes = 0usize;
            let mut bit_errors = 0usize;
            let mut bits_total = 0usize;
            for _ in 0..trials {
                let s = rng.random_range(0..device.messages());
                let t = rng.random_range(0..device.messages());
                let out = honest_recover(&device, s, t, side, &mut rng)?;
                successes += out.success as usize;
                let truth = match side {
                    OtmSide::RecoverS => device.code_c.codeword(s)?,
                    OtmSide::RecoverT => device.code_d.codeword(t)?,
                };
                for (b, &tb) in out.bits.iter().zip(truth) {
                    bit_errors += (*b != tb) as usize;
                    bits_total += 1;
                }
            }
            Ok(vec![
                device.code_c.seed().into(),
                device.code_d.seed().into(),
                trials.into(),
                successes.into(),
                (successes as f64 / trials as f64).into(),
                (bit_errors as f64 / bits_total as f64).into(),
            ])
        })
        .collect();
    for row in rows {
        table.push(row?);
    }
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn otm_leak(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let seeds = cfg.seeds.unwrap_or(50);
    let smoothing = cfg.smoothing.unwrap_or(1.0);
    let mut table = Table::new(
        "otm-leak",
        cfg.seed(),
        vec![
            "seed_c",
            "seed_d",
            "mutual_info",
            "h_cond",
            "h2_cond",
            "hmin_cond",
            "delta",
            "smoothing_eps",
        ],
    );
    let rows: Vec<Result<Vec<crate::output::Value>, CliError>> = (0..seeds as u64)
        .into_par_iter()
        .map(|i| {
            let device = device_for(cfg, i)?;
            let report = leak_eval(&device, smoothing)?;
            Ok(vec![
                device.code_c.seed().into(),
                device.code_d.seed().into(),
                report.mutual_info.into(),
                report.conditional.shannon.into(),
                report.conditional.collision.into(),
                report.conditional.min_entropy.into(),
                report.delta.into(),
                report.smoothing_eps.into(),
            ])
        })
        .collect();
    for row in rows {
        table.push(row?);
    }
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn otm_info(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let seeds = cfg.seeds.unwrap_or(5);
    let n = cfg.require_usize("n", cfg.n)?;
    let net = build_net(&with_default_eps(cfg, 0.5))?;
    // deepest enumeration that fits under the cap
    let depth = match cfg.depth {
        Some(d) => d,
        None => {
            let mut d = 0;
            while d < n {
                match count_strategies(n, net.len(), net.q, d + 1) {
                    Some(c) if c <= cfg.cap() as u128 => d += 1,
                    _ => break,
                }
            }
            d
        }
    };
    let total = match count_strategies(n, net.len(), net.q, depth) {
        Some(c) if c <= cfg.cap() as u128 => c,
        other => {
            return Err(CliError::Config(format!(
                "depth {depth} needs {} strategies, over --cap {}",
                other.map(|c| c.to_string()).unwrap_or_else(|| "> u128".into()),
                cfg.cap()
            )))
        }
    };
    let mut table = Table::new(
        "otm-info",
        cfg.seed(),
        vec![
            "seed_c",
            "seed_d",
            "depth",
            "strategies",
            "max_info",
            "two_k",
        ],
    );
    for i in 0..seeds as u64 {
        let device = device_for(cfg, i)?;
        let workers = rayon::current_num_threads().max(1) as u128;
        let chunk = total.div_ceil(workers).max(1);
        let best = (0..workers)
            .into_par_iter()
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(total);
                let mut local: f64 = 0.0;
                if lo < hi {
                    let stream = enumerate_strategies(n, &net, depth, cfg.cap() as u128)
                        .expect("count checked")
                        .slice(lo, hi);
                    for tree in stream {
                        local = local.max(otm_information(&device, &tree)?);
                    }
                }
                Ok::<f64, CliError>(local)
            })
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
        table.push(vec![
            device.code_c.seed().into(),
            device.code_d.seed().into(),
            depth.into(),
            (total as u64).into(),
            best.into(),
            (2.0 * device.k as f64).into(),
        ]);
    }
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn otm_collision(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let n = cfg.require_usize("n", cfg.n)?;
    let device = device_for(cfg, 0)?;
    let k = device.k;
    let m = cfg
        .m
        .unwrap_or(((k as f64) / (8.0f64 / 3.0).log2()).floor() as usize);
    if m > n {
        return Err(CliError::Config(format!("m = {m} exceeds n = {n}")));
    }
    let net = build_net(&with_default_eps(cfg, 0.8))?;
    let elements = distinct_net_elements(&net);
    let bound_ref = 2.0 * k as f64 - m as f64 * (1.5f64).log2();
    let mut table = Table::new(
        "otm-collision",
        cfg.seed(),
        vec!["subset", "outcomes", "min_h2", "slack", "max_residual"],
    );
    let subsets = combinations(n, m);
    let rows: Vec<Result<(String, usize, f64, f64), CliError>> = subsets
        .par_iter()
        .map(|subset| {
            let mut min_h2 = f64::INFINITY;
            let mut max_residual: f64 = 0.0;
            let mut outcomes = 0usize;
            for record in enumerate_outcome_records(&elements, subset) {
                let ce = conditional_collision_otm(&device, &record)?;
                min_h2 = min_h2.min(ce.bits);
                max_residual = max_residual.max(ce.identity_residual);
                outcomes += 1;
            }
            Ok((subset_label(subset), outcomes, min_h2, max_residual))
        })
        .collect();
    let mut global_min = f64::INFINITY;
    let mut global_residual: f64 = 0.0;
    let mut total_outcomes = 0usize;
    for row in rows {
        let (label, outcomes, min_h2, max_residual) = row?;
        global_min = global_min.min(min_h2);
        global_residual = global_residual.max(max_residual);
        total_outcomes += outcomes;
        table.push(vec![
            label.into(),
            outcomes.into(),
            min_h2.into(),
            (bound_ref - min_h2).into(),
            max_residual.into(),
        ]);
    }
    Ok(RunOutput {
        table: Some(table),
        summary: vec![format!(
            "otm collision scan: n={n} k={k} m={m} outcomes={total_outcomes} min_h2={global_min:.6} \
             reference={bound_ref:.6} slack={:.6} max_residual={global_residual:.3e}",
            bound_ref - global_min
        )],
        written: Vec::new(),
    })
}

fn otm_phases(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let seeds = cfg.seeds.unwrap_or(50);
    let n = cfg.require_usize("n", cfg.n)?;
    let mut table = Table::new(
        "otm-phases",
        cfg.seed(),
        vec![
            "seed_c",
            "seed_d",
            "strategy_seed",
            "m",
            "m_tilde",
            "early",
            "middle",
            "late",
            "holevo_cap",
            "total",
            "chain_residual",
        ],
    );
    let rows: Vec<Result<Vec<crate::output::Value>, CliError>> = (0..seeds as u64)
        .into_par_iter()
        .map(|i| {
            let device = device_for(cfg, i)?;
            let strategy_seed = trial_seed(cfg.seed(), 1 << 33 | i);
            let mut rng = ChaCha12Rng::seed_from_u64(strategy_seed);
            let strat = random_projective_strategy(n, n, &mut rng);
            let k = device.k as f64;
            let m_guess = ((k) / (8.0f64 / 3.0).log2()).floor();
            let h = 2.0 * k - m_guess * (1.5f64).log2();
            let split = split_points_for(device.k, device.n, h)?;
            let pd = phase_decomposition(&device, &strat, &split)?;
            let total = otm_information(&device, &strat)?;
            let residual = (pd.early_info + pd.middle_info + pd.late_info - total).abs();
            Ok(vec![
                device.code_c.seed().into(),
                device.code_d.seed().into(),
                strategy_seed.into(),
                split.m.into(),
                split.m_tilde.into(),
                pd.early_info.into(),
                pd.middle_info.into(),
                pd.late_info.into(),
                pd.holevo_cap.into(),
                total.into(),
                residual.into(),
            ])
        })
        .collect();
    for row in rows {
        table.push(row?);
    }
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn codes_params(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let n = cfg.require_usize("n", cfg.n)?;
    let theta = cfg.require_f64("theta", cfg.theta)?;
    let tau = cfg.require_f64("tau", cfg.tau)?;
    let p = derive_params(n, theta, tau)?;
    let mut table = Table::new(
        "codes-params",
        cfg.seed(),
        vec!["n", "theta", "tau", "p_e", "k", "r"],
    );
    table.push(vec![
        p.n.into(),
        p.theta.into(),
        p.tau.into(),
        p.p_e.into(),
        p.k.into(),
        p.r.into(),
    ]);
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn codes_bound(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let n = cfg.require_usize("n", cfg.n)?;
    let theta = cfg.require_f64("theta", cfg.theta)?;
    let tau = cfg.require_f64("tau", cfg.tau)?;
    let lambda = cfg.lambda.unwrap_or(1.0);
    let (confidence, success) = decode_success_bound(n, theta, tau, lambda)?;
    let mut table = Table::new(
        "codes-bound",
        cfg.seed(),
        vec!["n", "theta", "tau", "lambda", "code_confidence", "success_bound"],
    );
    table.push(vec![
        n.into(),
        theta.into(),
        tau.into(),
        lambda.into(),
        confidence.into(),
        success.into(),
    ]);
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn codes_montecarlo(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let theta = cfg.theta.unwrap_or(0.25);
    let tau = cfg.tau.unwrap_or(0.05);
    let trials = cfg.trials.unwrap_or(1000);
    let seeds = cfg.seeds.unwrap_or(5);
    let sizes: Vec<usize> = match cfg.n {
        Some(n) => vec![n],
        None => vec![32, 64, 128],
    };
    let p_e = channel_error_probability();
    let mut jobs = Vec::new();
    for &n in &sizes {
        let params = derive_params(n, theta, tau)?;
        for i in 0..seeds as u64 {
            jobs.push((n, params.k, i));
        }
    }
    let rows: Vec<Result<Vec<crate::output::Value>, CliError>> = jobs
        .par_iter()
        .map(|&(n, k, i)| {
            let seed = trial_seed(cfg.seed(), (n as u64) << 20 | i);
            let code = sample_code(k, n, seed)?;
            let mut rng = ChaCha12Rng::seed_from_u64(trial_seed(cfg.seed(), (n as u64) << 21 | i));
            let mut successes = 0usize;
            for _ in 0..trials {
                let msg = rng.random_range(0..code.rows() as u64);
                let noisy = bsc_channel(code.codeword(msg)?, p_e, &mut rng);
                let decoded = nearest_codeword_decode(&code, &noisy)?;
                successes += (decoded == msg) as usize;
            }
            Ok(vec![
                n.into(),
                k.into(),
                seed.into(),
                trials.into(),
                (successes as f64 / trials as f64).into(),
            ])
        })
        .collect();
    let mut table = Table::new(
        "codes-montecarlo",
        cfg.seed(),
        vec!["n", "k", "seed", "trials", "success_rate"],
    );
    for row in rows {
        table.push(row?);
    }
    Ok(RunOutput {
        table: Some(table),
        ..Default::default()
    })
}

fn check_all(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let outcomes = crate::checks::run_all();
    let mut table = Table::new(
        "check-all",
        cfg.seed(),
        vec!["id", "name", "passed", "detail"],
    );
    let mut summary = Vec::new();
    let mut failures = 0usize;
    for o in &outcomes {
        summary.push(o.line());
        table.push(vec![
            o.id.into(),
            o.name.into(),
            if o.passed { "pass" } else { "FAIL" }.into(),
            o.detail.clone().into(),
        ]);
        failures += (!o.passed) as usize;
    }
    if failures > 0 {
        // the caller still gets the table printed before the error exit
        for line in &summary {
            eprintln!("{line}");
        }
        return Err(CliError::CheckFailed(format!(
            "{failures} of {} criteria failed",
            outcomes.len()
        )));
    }
    Ok(RunOutput {
        table: Some(table),
        summary,
        written: Vec::new(),
    })
}
