#![allow(dead_code)]

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use poolcast::cluster::sq_dist;
use poolcast::panel::PanelSeries;
use poolcast::qboost::{split_gain, BinStats, FeatureKind, SplitParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn z(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn normals(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn start_2021() -> chrono::NaiveDateTime {
    NaiveDate::from_ymd_opt(2021, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap()
}

pub fn station_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("S{i:03}")).collect()
}

pub fn panel(rows: Vec<Vec<f64>>) -> PanelSeries {
    PanelSeries::new(station_ids(rows.len()), start_2021(), rows).unwrap()
}

/// Best split gain by scanning every threshold of every numeric column and
/// every two-way partition of the categories present.
pub fn brute_force_gain(
    columns: &[Vec<f64>],
    kinds: &[FeatureKind],
    g: &[f64],
    params: &SplitParams,
) -> Option<f64> {
    let n = g.len();
    let stats = |rows: &mut dyn Iterator<Item = usize>| {
        rows.fold(BinStats::default(), |s, r| s + BinStats { g: g[r], h: 1.0, count: 1 })
    };
    let parent = stats(&mut (0..n));
    let m = params.min_samples_leaf.max(1) as u32;
    let mut best: Option<f64> = None;
    let mut consider = |left: BinStats| {
        let right = parent - left;
        if left.count < m || right.count < m {
            return;
        }
        let gain = split_gain(left, right, parent, params);
        if gain > 0.0 && best.is_none_or(|b| gain > b) {
            best = Some(gain);
        }
    };
    for (col, kind) in columns.iter().zip(kinds) {
        match kind {
            FeatureKind::Numeric => {
                let mut vals = col.clone();
                vals.sort_by(f64::total_cmp);
                vals.dedup();
                for &t in &vals[..vals.len() - 1] {
                    consider(stats(&mut (0..n).filter(|&r| col[r] <= t)));
                }
            }
            FeatureKind::Categorical { .. } => {
                let mut cats: Vec<u32> = col.iter().map(|&v| v as u32).collect();
                cats.sort_unstable();
                cats.dedup();
                for mask in 1u32..(1 << cats.len()) - 1 {
                    let left: Vec<u32> = (0..cats.len()).filter(|i| mask >> i & 1 == 1).map(|i| cats[i]).collect();
                    consider(stats(&mut (0..n).filter(|&r| left.contains(&(col[r] as u32)))));
                }
            }
        }
    }
    best
}

/// Minimum WSS over every labeling of `points` into exactly `k` non-empty
/// groups.
pub fn brute_force_wss(points: &[Vec<f64>], k: usize) -> f64 {
    let n = points.len();
    let d = points[0].len();
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let mut sums = vec![vec![0.0; d]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            sums[l].iter_mut().zip(p).for_each(|(s, x)| *s += x);
        }
        if counts.iter().all(|&c| c > 0) {
            let cents: Vec<Vec<f64>> = sums
                .iter()
                .zip(&counts)
                .map(|(s, &c)| s.iter().map(|v| v / c as f64).collect())
                .collect();
            let j: f64 = points.iter().zip(&labels).map(|(p, &l)| sq_dist(p, &cents[l])).sum();
            best = best.min(j);
        }
        let mut i = 0;
        while i < n {
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
    }
}

/// Gaussian blobs around `k` random centers.
pub fn blobs(rng: &mut impl Rng, n: usize, k: usize, d: usize, spread: f64) -> Vec<Vec<f64>> {
    let centers: Vec<Vec<f64>> = (0..k).map(|_| (0..d).map(|_| rng.random_range(-5.0..5.0)).collect()).collect();
    (0..n)
        .map(|i| {
            centers[i % k]
                .iter()
                .map(|c| c + spread * z(rng))
                .collect::<Vec<f64>>()
        })
        .collect()
}

/// `y_it = a_i + b_i t + s_i e_it` with `t = 1..T`, Gaussian `e` and
/// station noise scales `s_i` in `[0.5, 2)`.
pub fn trend_panel(rng: &mut impl Rng, slopes: &[f64], t: usize) -> PanelSeries {
    let rows = slopes
        .iter()
        .map(|&b| {
            let a: f64 = rng.random_range(-1.0..1.0);
            let sd: f64 = rng.random_range(0.5..2.0);
            (1..=t)
                .map(|s| a + b * s as f64 + sd * z(rng))
                .collect()
        })
        .collect();
    panel(rows)
}

pub fn sample_excess_kurtosis(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2) - 3.0
}

/// Sample variance of a long AR(1) path with φ = 0.5 and unit noise.
pub fn ar1_sample_variance(seed: u64) -> f64 {
    use poolcast::dgp::{simulate_sarima, SarimaSpec, SimConfig};
    let spec = SarimaSpec {
        mu: 0.0,
        phi: vec![0.5],
        theta: vec![],
        seasonal_phi: vec![],
        seasonal_theta: vec![],
        period: 24,
        sigma2: 1.0,
    };
    let y = simulate_sarima(&spec, &SimConfig::new(200_000, seed, 0.0)).unwrap();
    poolcast::stats::variance(&y)
}

/// Sample variance of GARCH(1,1) shocks with ω = 0.1, α = 0.2, β = 0.7.
pub fn garch_shock_variance(seed: u64) -> f64 {
    use poolcast::dgp::{simulate_ar_garch_with_variance, ArGarchSpec, SimConfig};
    let spec = ArGarchSpec {
        mu: 0.0,
        phi: vec![],
        omega: 0.1,
        alpha: vec![0.2],
        beta: vec![0.7],
    };
    let (_, eps, var) = simulate_ar_garch_with_variance(&spec, &SimConfig::new(400_000, seed, 0.0)).unwrap();
    assert!(var.iter().all(|&v| v > 0.0));
    eps.iter().map(|e| e * e).sum::<f64>() / eps.len() as f64
}

/// Median over 11 replicates of the sample excess kurtosis of unit-variance
/// t(5) white noise. A single estimate has infinite variance at ν = 5.
pub fn t5_excess_kurtosis(seed: u64) -> f64 {
    use poolcast::dgp::{simulate_ar_t, station_seed, ArTSpec, SimConfig};
    let spec = ArTSpec::ar(0.0, vec![], 1.0, 5.0);
    let ks: Vec<f64> = (0..11)
        .map(|i| {
            let y = simulate_ar_t(&spec, &SimConfig::new(2_000_000, station_seed(seed, i), 0.0)).unwrap();
            sample_excess_kurtosis(&y)
        })
        .collect();
    poolcast::stats::median(&ks)
}

pub fn smoke_panel(n_stations: usize, n_hours: usize, seed: u64) -> PanelSeries {
    use poolcast::dgp::{reference, simulate_panel, PanelSimOptions};
    let stations: Vec<(String, f64)> = station_ids(n_stations)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, 0.1 * i as f64))
        .collect();
    simulate_panel(&reference::ar_t(), &stations, &PanelSimOptions::new(n_hours, seed)).unwrap()
}

pub fn quick_params() -> poolcast::qboost::TrainParams {
    poolcast::qboost::TrainParams {
        n_rounds: 60,
        num_leaves: 15,
        learning_rate: 0.1,
        ..Default::default()
    }
}

fn max_metric_gap(a: &poolcast::harness::SchemeResult, b: &poolcast::harness::SchemeResult) -> f64 {
    assert_eq!(a.reports.len(), b.reports.len());
    a.reports
        .iter()
        .zip(&b.reports)
        .flat_map(|(x, y)| {
            [
                (x.picp - y.picp).abs(),
                (x.pinaw.unwrap() - y.pinaw.unwrap()).abs(),
                (x.mse_median - y.mse_median).abs(),
                (x.crossing_rate - y.crossing_rate).abs(),
                (x.n as f64 - y.n as f64).abs(),
            ]
        })
        .fold(0.0, f64::max)
}

/// Largest metric difference between cluster(k = 1) and global, and between
/// singleton clusters and station, on a 10-station panel.
pub fn degeneracy_gaps() -> (f64, f64) {
    use poolcast::cluster::ClusterAssignment;
    use poolcast::harness::{run_cluster, run_global, run_station, SchemeContext};
    let p = smoke_panel(10, 2_000, 17);
    let params = quick_params();
    let ctx = SchemeContext {
        panel: &p,
        boundary: 1_000,
        params: &params,
        dgp: "smoke",
    };
    let ids = p.stations().to_vec();
    let one = ClusterAssignment::from_labels(ids.clone(), vec![0; 10]).unwrap();
    let singles = ClusterAssignment::from_labels(ids, (0..10).collect()).unwrap();
    let g = run_global(&ctx).unwrap();
    let c1 = run_cluster(&ctx, &one).unwrap();
    let s = run_station(&ctx).unwrap();
    let cn = run_cluster(&ctx, &singles).unwrap();
    (max_metric_gap(&g, &c1), max_metric_gap(&s, &cn))
}

/// Writes a small simulate-source experiment config into `dir`.
pub fn write_smoke_config(dir: &std::path::Path, out: &str) -> std::path::PathBuf {
    let path = dir.join("experiment.toml");
    std::fs::write(
        &path,
        format!(
            r#"name = "smoke"
seed = 3
output_dir = "{out}"

[data]
source = "simulate"
n_stations = 10
horizon_hours = 2000
dgp = {{ kind = "reference", name = "ar_t" }}

[train]
n_rounds = 40
num_leaves = 15
learning_rate = 0.1

[cluster]
k_max = 6
"#
        ),
    )
    .unwrap();
    path
}

fn poolcast(dir: &std::path::Path, args: &[&str]) -> std::process::Output {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_poolcast"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "poolcast {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

type Snapshot = Vec<(String, Vec<u8>)>;

fn snapshot(root: &std::path::Path) -> Snapshot {
    fn walk(root: &std::path::Path, dir: &std::path::Path, out: &mut Vec<(String, Vec<u8>)>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().display().to_string();
                out.push((rel, std::fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out
}

/// Runs every CLI stage in a fresh directory and returns all files written,
/// keyed by stage.
fn cli_pipeline(dir: &std::path::Path) -> Vec<(&'static str, Snapshot)> {
    use std::fs;
    use std::io::Write;
    fs::write(dir.join("dgp.toml"), "kind = \"reference\"\nname = \"sarima\"\n").unwrap();
    let mut st = String::from("station_id,init_value\n");
    for i in 0..8 {
        st.push_str(&format!("S{i:03},{}\n", 0.1 + 0.02 * i as f64));
    }
    fs::write(dir.join("stations.csv"), st).unwrap();
    let mut ev = fs::File::create(dir.join("events.csv")).unwrap();
    writeln!(ev, "station_id,timestamp").unwrap();
    let mut r = rng(8);
    for _ in 0..2_000 {
        let m = r.random_range(0..60 * 24 * 10);
        writeln!(ev, "st{},2022-03-{:02}T{:02}:{:02}:00", r.random_range(0..4), 1 + m / 1440, m / 60 % 24, m % 60).unwrap();
    }
    fs::write(dir.join("params.toml"), "n_rounds = 30\nnum_leaves = 7\nlearning_rate = 0.1\n").unwrap();
    write_smoke_config(dir, "report");

    let stages: [(&str, &str, Vec<&str>); 7] = [
        ("ingest", "ingest", vec!["ingest", "--events", "events.csv", "--out", "ingest/panel.csv"]),
        (
            "simulate",
            "sim",
            vec!["simulate", "--dgp", "dgp.toml", "--stations", "stations.csv", "--steps", "1500", "--seed", "5", "--out", "sim/panel.csv"],
        ),
        ("features", "feat", vec!["features", "--panel", "sim/panel.csv", "--until", "2023-01-21T00:00:00", "--out", "feat/features.csv"]),
        ("cluster", "clu", vec!["cluster", "--features", "feat/features.csv", "--kmax", "5", "--seed", "5", "--out", "clu"]),
        (
            "train",
            "models",
            vec![
                "train", "--panel", "sim/panel.csv", "--scheme", "cluster", "--assignment", "clu/assignment.csv", "--params",
                "params.toml", "--until", "2023-01-21T00:00:00", "--out", "models",
            ],
        ),
        ("homogeneity", "hom", vec!["homogeneity", "--panel", "sim/panel.csv", "--out", "hom/homogeneity.json"]),
        ("report", "report", vec!["report", "--experiment", "experiment.toml"]),
    ];
    let mut out = Vec::new();
    for (name, sub, args) in stages {
        fs::create_dir_all(dir.join(sub)).unwrap();
        let o = poolcast(dir, &args);
        let mut files = snapshot(&dir.join(sub));
        files.push(("stdout".into(), o.stdout));
        out.push((name, files));
    }
    out
}

/// `(stage, byte-identical across two runs)` for every CLI stage.
pub fn cli_stages_identical() -> Vec<(&'static str, bool)> {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = cli_pipeline(a.path());
    let rb = cli_pipeline(b.path());
    ra.into_iter()
        .zip(rb)
        .map(|((name, fa), (_, fb))| (name, !fa.is_empty() && fa == fb))
        .collect()
}

pub struct SplitFixture {
    pub columns: Vec<Vec<f64>>,
    pub kinds: Vec<FeatureKind>,
    pub y: Vec<f64>,
    pub tau: f64,
    pub params: SplitParams,
}

/// At most 32 rows and 3 features mixing continuous, tied and categorical
/// columns.
pub fn split_fixture(seed: u64) -> SplitFixture {
    let mut r = rng(seed);
    let n = r.random_range(4..=32);
    let d = r.random_range(1..=3);
    let mut columns = Vec::new();
    let mut kinds = Vec::new();
    for _ in 0..d {
        match r.random_range(0..3) {
            0 => {
                columns.push((0..n).map(|_| r.random_range(-1.0..1.0)).collect());
                kinds.push(FeatureKind::Numeric);
            }
            1 => {
                columns.push((0..n).map(|_| r.random_range(0..5) as f64).collect());
                kinds.push(FeatureKind::Numeric);
            }
            _ => {
                let card = r.random_range(2..=6u32);
                columns.push((0..n).map(|_| r.random_range(0..card) as f64).collect());
                kinds.push(FeatureKind::Categorical { cardinality: card });
            }
        }
    }
    SplitFixture {
        y: (0..n).map(|_| r.random_range(-3.0..3.0)).collect(),
        tau: r.random_range(0.05..0.95),
        params: SplitParams {
            lambda_l2: r.random_range(0.0..2.0),
            gamma_leaf: r.random_range(0.0..0.3),
            min_samples_leaf: r.random_range(1..4),
        },
        columns,
        kinds,
    }
}

/// `(histogram best gain, exhaustive best gain)` for a fixture.
pub fn split_gains(f: &SplitFixture) -> (Option<f64>, Option<f64>) {
    use poolcast::qboost::{best_split, build_histograms, BinnedMatrix, FeatureMatrix, FeatureSchema, GradHess};
    let n = f.y.len();
    let fm = FeatureMatrix::new(
        f.columns.clone(),
        (0..f.columns.len()).map(|j| format!("f{j}")).collect(),
        FeatureSchema::new(f.kinds.clone()),
    )
    .unwrap();
    let binned = BinnedMatrix::new(&fm, 255);
    let gh = GradHess::pinball(&f.y, &vec![0.0; n], f.tau);
    let rows: Vec<u32> = (0..n as u32).collect();
    let hist = build_histograms(&binned, &rows, &gh);
    (
        best_split(&hist, &f.kinds, &f.params).map(|c| c.gain),
        brute_force_gain(&f.columns, &f.kinds, &gh.g, &f.params),
    )
}

pub fn gains_agree(pair: (Option<f64>, Option<f64>)) -> bool {
    match pair {
        (None, None) => true,
        (Some(a), Some(b)) => (a - b).abs() <= 1e-9 * b.abs().max(1.0),
        _ => false,
    }
}

/// Nonlinear regression design with one numeric and one categorical column
/// and heteroskedastic noise.
pub fn regression_fixture(seed: u64, n: usize) -> (poolcast::qboost::FeatureMatrix, Vec<f64>) {
    use poolcast::qboost::{FeatureMatrix, FeatureSchema};
    let mut r = rng(seed);
    let x0: Vec<f64> = (0..n).map(|_| r.random_range(0.0..10.0)).collect();
    let x1: Vec<f64> = (0..n).map(|_| r.random_range(0..4) as f64).collect();
    let noise = normals(&mut r, n);
    let y = (0..n)
        .map(|i| x0[i].sin() * 3.0 + x1[i] + noise[i] * (0.2 + x0[i] / 10.0))
        .collect();
    let fm = FeatureMatrix::new(
        vec![x0, x1],
        vec!["x0".into(), "x1".into()],
        FeatureSchema::new(vec![FeatureKind::Numeric, FeatureKind::Categorical { cardinality: 4 }]),
    )
    .unwrap();
    (fm, y)
}

/// Largest per-round increase of the training loss over `n_rounds`.
pub fn worst_loss_increase(seed: u64, tau: f64, leaves: usize, n_rounds: usize) -> f64 {
    use poolcast::qboost::{fit, TrainParams};
    let (fm, y) = regression_fixture(seed, 400);
    let params = TrainParams {
        n_rounds,
        num_leaves: leaves,
        min_samples_leaf: 5,
        quantile: tau,
        learning_rate: 0.1,
        ..TrainParams::default()
    };
    let out = fit(&fm, &y, &params).unwrap();
    out.loss_history.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
}

/// Fraction of 10⁴ Gaussian targets below the prediction of a forest with a
/// constant feature.
pub fn root_fraction_below(tau: f64) -> f64 {
    use poolcast::qboost::{fit, FeatureMatrix, LeafOutput, TrainParams};
    let n = 10_000;
    let y: Vec<f64> = normals(&mut rng(11), n).iter().map(|z| z * 2.0 + 1.0).collect();
    let fm = FeatureMatrix::from_columns(vec![vec![1.0; n]]).unwrap();
    let params = TrainParams {
        n_rounds: 100,
        quantile: tau,
        leaf_output: LeafOutput::Newton,
        ..TrainParams::default()
    };
    let f = fit(&fm, &y, &params).unwrap();
    y.iter().zip(&f.train_predictions).filter(|(a, b)| a < b).count() as f64 / n as f64
}

/// Correlated columns on very different scales.
pub fn pca_table(seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    let n = r.random_range(5..40);
    let d = r.random_range(2..8);
    let mix: Vec<Vec<f64>> = (0..d).map(|_| normals(&mut r, d)).collect();
    (0..n)
        .map(|_| {
            let z = normals(&mut r, d);
            (0..d).map(|j| (0..d).map(|i| z[i] * mix[i][j]).sum::<f64>() * (j + 1) as f64).collect()
        })
        .collect()
}

/// Orthonormality error, reconstruction error and whether the retained
/// count straddles `threshold`.
pub fn pca_checks(rows: &[Vec<f64>], threshold: f64) -> (f64, f64, bool) {
    use poolcast::cluster::{fit_pca, standardize};
    let (z, _) = standardize(rows).unwrap();
    let b = fit_pca(&z, threshold).unwrap();
    let mut ortho: f64 = 0.0;
    for (i, u) in b.components.iter().enumerate() {
        for (j, v) in b.components.iter().enumerate() {
            let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
            ortho = ortho.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    let m = b.components.len();
    let recon = z
        .iter()
        .flat_map(|row| {
            let back = b.reconstruct(&b.project_onto(row, m));
            row.iter().zip(back).map(|(a, c)| (a - c).abs()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    let cum = b.cumulative_ratio();
    let k = b.n_components;
    let straddle = k >= 1 && cum[k - 1] >= threshold - 1e-12 && (k == 1 || cum[k - 2] < threshold);
    (ortho, recon, straddle)
}

/// Random forecasts around random targets, with some crossed rows.
pub fn random_triplet(seed: u64) -> poolcast::metrics::ForecastTriplet {
    let mut r = rng(seed);
    let n = r.random_range(2..60);
    let y: Vec<f64> = (0..n).map(|_| r.random_range(-50.0..50.0)).collect();
    let median: Vec<f64> = y.iter().map(|v| v + r.random_range(-5.0..5.0)).collect();
    let lower = median.iter().map(|m| m - r.random_range(-1.0..10.0)).collect();
    let upper = median.iter().map(|m| m + r.random_range(-1.0..10.0)).collect();
    poolcast::metrics::ForecastTriplet::new(lower, median, upper, y).unwrap()
}

pub fn affine(t: &poolcast::metrics::ForecastTriplet, a: f64, b: f64) -> poolcast::metrics::ForecastTriplet {
    let f = |v: &[f64]| v.iter().map(|x| a * x + b).collect::<Vec<_>>();
    poolcast::metrics::ForecastTriplet::new(f(t.lower()), f(t.median()), f(t.upper()), f(t.y())).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Whether picp, pinaw and mse_median transform as expected under
/// `x → a x + b` with `a = 2^e`.
pub fn affine_laws_hold(t: &poolcast::metrics::ForecastTriplet, e: i32, b: f64) -> bool {
    use poolcast::metrics::{mse_median, picp, pinaw};
    let a = 2f64.powi(e);
    let u = affine(t, a, b);
    let pinaw_ok = match (pinaw(t), pinaw(&u)) {
        (Ok(p), Ok(q)) => close(p, q, 1e-9),
        (Err(_), Err(_)) => true,
        _ => false,
    };
    picp(&u) == picp(t) && pinaw_ok && close(mse_median(&u), a * a * mse_median(t), 1e-9)
}

/// Heterogeneous-slope or common-slope trend panels for the size and power
/// of the homogeneity test; returns the rejection share.
pub fn rejection_rate(runs: u64, seed: u64, spread: f64) -> f64 {
    use poolcast::homogeneity::slope_homogeneity;
    use rayon::prelude::*;
    let hits = (0..runs)
        .into_par_iter()
        .filter(|&s| {
            let mut r = rng(poolcast::dgp::station_seed(seed, s));
            let slopes: Vec<f64> = (0..200)
                .map(|_| 0.01 + if spread > 0.0 { r.random_range(-spread..spread) } else { 0.0 })
                .collect();
            let p = trend_panel(&mut r, &slopes, 500);
            slope_homogeneity(&p).unwrap().reject_at_5pct
        })
        .count();
    hits as f64 / runs as f64
}
