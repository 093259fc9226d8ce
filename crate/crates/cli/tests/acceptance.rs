//! Acceptance suite. Prints one `PASS` / `FAIL` / `SKIP` line per criterion
//! and exits non-zero if any criterion fails.
//!
//! MNIST-backed criteria read the IDX files from `$KANAE_MNIST_DIR`, falling
//! back to `<workspace>/data/mnist`; they are skipped when the files are
//! absent.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use kanae_core::autoencoder::evaluate_mse;
use kanae_core::data::{
    load_idx, normalize, denormalize, parse_cifar10, parse_idx_images, parse_idx_labels, parse_raw, raw_bytes,
    CIFAR_RECORD_LEN,
};
use kanae_core::eval::KnnModel;
use kanae_core::nn::{grad_check, mse_loss};
use kanae_core::seed::sub_seed;
use kanae_core::{DataError, ImageBytes, ImageMeta, KanAutoencoder, KanLayer, SplineGrid};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kanae(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_kanae"))
        .args(args)
        .output()
        .map_err(|e| format!("spawn kanae: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "kanae {} exited {:?}: {}",
            args.first().unwrap_or(&""),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn mnist_dir() -> Option<PathBuf> {
    let dir = std::env::var_os("KANAE_MNIST_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist"));
    let needed = [
        "train-images-idx3-ubyte",
        "train-labels-idx1-ubyte",
        "t10k-images-idx3-ubyte",
        "t10k-labels-idx1-ubyte",
    ];
    needed.iter().all(|f| dir.join(f).is_file()).then_some(dir)
}

fn read_csv(path: &Path) -> Result<Vec<Vec<String>>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect())
}

fn num(field: &str) -> Result<f64, String> {
    field.parse().map_err(|_| format!("not a number: {field}"))
}

// 1 -------------------------------------------------------------------------

fn parameter_counts() -> Check {
    let mut got = Vec::new();
    for (b, want) in [("4", 62_796usize), ("9", 62_881), ("18", 63_034)] {
        let out = kanae(&["count-params", "784", "8", b, "--grid", "5"])?;
        let line = out
            .lines()
            .find(|l| l.starts_with("paper_formula"))
            .ok_or("no paper_formula line")?;
        let n: usize = line.split_whitespace().last().unwrap_or("").parse().map_err(|_| line.to_string())?;
        ensure(n == want, || format!("bottleneck {b}: paper_formula {n}, expected {want}"))?;
        got.push(n.to_string());
    }
    Ok(format!("paper_formula {}", got.join(" / ")))
}

// 2 -------------------------------------------------------------------------

fn gradient_correctness() -> Check {
    let grid = SplineGrid::new(3, 2, -1.0, 1.0).map_err(|e| e.to_string())?;
    let (mut worst, mut count) = (0.0f64, 0);
    for seed in 0..5u64 {
        let model = KanAutoencoder::<f64>::build(6, 3, 2, grid.clone(), true, seed).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
        let x = Array2::from_shape_simple_fn((2, 6), || rng.random_range(-0.95..0.95));
        let (_, _, grads) = model.loss_and_grads(x.view(), 0.0).map_err(|e| e.to_string())?;
        let mut probe = model.clone();
        let report = grad_check(
            |p| {
                probe.set_flat_params(p).expect("same length");
                mse_loss(probe.reconstruct(x.view()).expect("finite").view(), x.view()).expect("shapes").0
            },
            &model.flat_params(),
            &grads.flat(true),
            1e-5,
            None,
        );
        ensure(report.checked == model.count_params_actual(), || "not every parameter was probed".into())?;
        worst = worst.max(report.max_rel_error);
        count = report.checked;
    }
    ensure(worst <= 1e-4, || format!("max relative error {worst:.2e} > 1e-4"))?;
    Ok(format!("5 seeds, all {count} parameters, max rel error {worst:.2e}"))
}

// 3 -------------------------------------------------------------------------

fn cox_de_boor(knots: &[f64], i: usize, d: usize, x: f64) -> f64 {
    if d == 0 {
        return if knots[i] <= x && x < knots[i + 1] { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    let l = knots[i + d] - knots[i];
    if l > 0.0 {
        v += (x - knots[i]) / l * cox_de_boor(knots, i, d - 1, x);
    }
    let r = knots[i + d + 1] - knots[i + 1];
    if r > 0.0 {
        v += (knots[i + d + 1] - x) / r * cox_de_boor(knots, i + 1, d - 1, x);
    }
    v
}

fn spline_properties() -> Check {
    let grid = SplineGrid::default();
    let (lo, hi) = grid.domain();
    let k = grid.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut pou, mut fd, mut oracle) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let x = rng.random_range(lo..hi);
        let b = grid.basis::<f64>(x).map_err(|e| e.to_string())?;
        ensure(b.iter().all(|&v| v >= 0.0), || format!("negative basis value at {x}"))?;
        let nonzero = b.iter().filter(|&&v| v != 0.0).count();
        ensure(nonzero <= k + 1, || format!("{nonzero} nonzero values at {x}"))?;
        pou = pou.max((b.iter().sum::<f64>() - 1.0).abs());
        for (i, v) in b.iter().enumerate() {
            oracle = oracle.max((v - cox_de_boor(grid.knots(), i, k, x)).abs());
        }
        let h = 1e-6;
        if x - h > lo && x + h < hi {
            let d = grid.basis_derivative::<f64>(x).map_err(|e| e.to_string())?;
            let p = grid.basis::<f64>(x + h).map_err(|e| e.to_string())?;
            let m = grid.basis::<f64>(x - h).map_err(|e| e.to_string())?;
            for i in 0..d.len() {
                fd = fd.max((d[i] - (p[i] - m[i]) / (2.0 * h)).abs());
            }
        }
    }
    ensure(pou <= 1e-10, || format!("partition of unity off by {pou:.2e}"))?;
    ensure(fd <= 1e-6, || format!("derivative vs finite difference {fd:.2e}"))?;
    ensure(oracle <= 1e-12, || format!("basis vs recursive oracle {oracle:.2e}"))?;

    let mut equiv = 0.0f64;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, o, n) = (rng.random_range(1..=8), rng.random_range(1..=8), rng.random_range(1..=4));
        let layer = KanLayer::<f64>::new(i, o, grid.clone(), seed % 2 == 0, seed).map_err(|e| e.to_string())?;
        let x = Array2::from_shape_simple_fn((n, i), || rng.random_range(-1.0..1.0));
        let y = layer.apply(x.view()).map_err(|e| e.to_string())?;
        for b in 0..n {
            for j in 0..o {
                let mut acc = 0.0;
                for e in 0..i {
                    let t = x[[b, e]];
                    if layer.use_base() {
                        acc += layer.base_weight()[[j, e]] * t / (1.0 + (-t).exp());
                    }
                    for m in 0..grid.basis_count() {
                        acc += layer.spline_coeff()[[j, e, m]] * cox_de_boor(grid.knots(), m, k, t);
                    }
                }
                equiv = equiv.max((acc - y[[b, j]]).abs());
            }
        }
    }
    ensure(equiv <= 1e-10, || format!("efficient vs naive forward {equiv:.2e}"))?;
    Ok(format!(
        "unity {pou:.1e}, derivative {fd:.1e}, oracle {oracle:.1e}, efficient/naive {equiv:.1e} (1000 points, 20 layers)"
    ))
}

// 7 -------------------------------------------------------------------------

fn knn_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut queries_checked = 0;
    for _ in 0..100 {
        let k = [1usize, 3, 5][rng.random_range(0..3)];
        let m = rng.random_range(k..=200);
        let q = rng.random_range(1..=20);
        let d = rng.random_range(1..=4);
        // Small integer coordinates make exact distance ties common.
        let refs = Array2::from_shape_simple_fn((m, d), || rng.random_range(0..4) as f64);
        let labels: Vec<u8> = (0..m).map(|_| rng.random_range(0..10)).collect();
        let queries = Array2::from_shape_simple_fn((q, d), || rng.random_range(0..4) as f64);
        let model = KnnModel::fit(refs.clone(), labels.clone(), k).map_err(|e| e.to_string())?;
        let got = model.predict(queries.view()).map_err(|e| e.to_string())?;
        for (qi, row) in queries.rows().into_iter().enumerate() {
            let mut all: Vec<(f64, usize)> = refs
                .rows()
                .into_iter()
                .enumerate()
                .map(|(i, r)| (r.iter().zip(row.iter()).map(|(a, b)| (a - b) * (a - b)).sum(), i))
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut votes = [0usize; 10];
            for &(_, i) in &all[..k] {
                votes[labels[i] as usize] += 1;
            }
            let top = *votes.iter().max().unwrap();
            let want = votes.iter().position(|&v| v == top).unwrap() as u8;
            ensure(got[qi] == want, || format!("m={m} k={k}: predicted {} but oracle says {want}", got[qi]))?;
            queries_checked += 1;
        }
    }
    Ok(format!("100 instances, {queries_checked} queries, exact agreement"))
}

// 8 -------------------------------------------------------------------------

fn format_round_trips() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name);

    for use_base in [true, false] {
        let m = KanAutoencoder::<f64>::build(12, 5, 3, SplineGrid::default(), use_base, 4).map_err(|e| e.to_string())?;
        m.save(p("a.kanae")).map_err(|e| e.to_string())?;
        let back = KanAutoencoder::<f64>::load(p("a.kanae")).map_err(|e| e.to_string())?;
        ensure(back.to_checkpoint_bytes() == m.to_checkpoint_bytes() && back == m, || "checkpoint f64".into())?;
    }
    let m32 = KanAutoencoder::<f32>::build(9, 4, 2, SplineGrid::new(3, 1, -1.0, 1.0).unwrap(), true, 5)
        .map_err(|e| e.to_string())?;
    m32.save(p("b.kanae")).map_err(|e| e.to_string())?;
    let back32 = KanAutoencoder::<f32>::load(p("b.kanae")).map_err(|e| e.to_string())?;
    ensure(back32.to_checkpoint_bytes() == m32.to_checkpoint_bytes(), || "checkpoint f32".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let images = ImageBytes {
        pixels: Array2::from_shape_simple_fn((7, 2 * 3 * 3), || rng.random::<u8>()),
        labels: (0..7).map(|_| rng.random_range(0..10)).collect(),
        meta: ImageMeta::new(3, 3, 2, "raw"),
    };
    let bytes = raw_bytes(&images);
    let parsed = parse_raw(&bytes, &p("x.rawds")).map_err(|e| e.to_string())?;
    ensure(parsed.pixels == images.pixels && parsed.labels == images.labels, || "RAWDS1 contents".into())?;
    ensure(raw_bytes(&parsed) == bytes, || "RAWDS1 bytes".into())?;

    for b in 0..=255u8 {
        ensure(denormalize(normalize::<f64>(b)) == b, || format!("f64 byte {b}"))?;
        ensure(denormalize(normalize::<f32>(b)) == b, || format!("f32 byte {b}"))?;
    }

    let idx_header = |magic: u32, dims: &[u32]| {
        let mut v = magic.to_be_bytes().to_vec();
        for d in dims {
            v.extend(d.to_be_bytes());
        }
        v
    };
    let path = p("bad");
    let mut caught = Vec::new();

    let mut bad_magic = idx_header(0x0802, &[1, 2, 2]);
    bad_magic.extend([0u8; 4]);
    match parse_idx_images(&bad_magic, &path) {
        Err(DataError::BadMagic { .. }) => caught.push("bad magic"),
        other => return Err(format!("bad magic: {other:?}")),
    }
    let mut short = idx_header(0x0803, &[2, 2, 2]);
    short.extend([0u8; 5]);
    match parse_idx_images(&short, &path) {
        Err(DataError::Truncated { .. }) => caught.push("truncated IDX"),
        other => return Err(format!("truncated IDX: {other:?}")),
    }
    let mut big_label = idx_header(0x0801, &[2]);
    big_label.extend([3u8, 12]);
    match parse_idx_labels(&big_label, &path) {
        Err(DataError::LabelOutOfRange { label: 12, .. }) => caught.push("label > 9"),
        other => return Err(format!("label range: {other:?}")),
    }
    let mut imgs = idx_header(0x0803, &[2, 1, 1]);
    imgs.extend([0u8, 255]);
    let mut labs = idx_header(0x0801, &[3]);
    labs.extend([1u8, 2, 3]);
    fs::write(p("i"), imgs).map_err(|e| e.to_string())?;
    fs::write(p("l"), labs).map_err(|e| e.to_string())?;
    match load_idx::<f64>(p("i"), p("l")) {
        Err(DataError::CountMismatch { images: 2, labels: 3 }) => caught.push("count mismatch"),
        other => return Err(format!("count mismatch: {:?}", other.map(|d| d.len()))),
    }
    match parse_cifar10(&vec![1u8; CIFAR_RECORD_LEN - 1], &path) {
        Err(DataError::Truncated { .. }) => caught.push("truncated CIFAR"),
        other => return Err(format!("truncated CIFAR: {:?}", other.map(|r| r.1.len()))),
    }
    Ok(format!(
        "checkpoint f64/f32 + RAWDS1 bitwise, 256/256 bytes exact, rejected: {}",
        caught.join(", ")
    ))
}

// CIFAR smoke ---------------------------------------------------------------

fn cifar_smoke() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut batch = |name: &str, n: usize| -> Result<(), String> {
        let mut bytes = Vec::with_capacity(n * CIFAR_RECORD_LEN);
        for _ in 0..n {
            bytes.push(rng.random_range(0..10u8));
            bytes.extend((0..CIFAR_RECORD_LEN - 1).map(|_| rng.random::<u8>()));
        }
        fs::write(dir.path().join(name), bytes).map_err(|e| e.to_string())
    };
    for i in 1..=5 {
        batch(&format!("data_batch_{i}.bin"), 200)?;
    }
    batch("test_batch.bin", 200)?;
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (d, o) = (dir.path().to_str().unwrap(), out.path().to_str().unwrap());
    kanae(&[
        "train", "--dataset", "cifar10", "--data-dir", d, "--out", o, "--epochs", "1", "--hidden", "16",
        "--bottleneck", "16", "--train-limit", "500", "--test-limit", "200",
    ])?;
    let rows = read_csv(&out.path().join("summary.csv"))?;
    let mse = num(&rows[0][0])?;
    ensure(mse.is_finite(), || format!("test_mse {mse}"))?;
    Ok(format!(
        "synthetic CIFAR-format batches, 1 epoch on 500 samples, test_mse {mse:.4}"
    ))
}

// 4, 6, 9 -------------------------------------------------------------------

struct MnistRuns {
    dir: tempfile::TempDir,
    seconds: f64,
}

fn mnist_train(mnist: &Path) -> Result<MnistRuns, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        kanae(&[
            "train",
            "--dataset",
            "mnist",
            "--data-dir",
            mnist.to_str().unwrap(),
            "--hidden",
            "8",
            "--bottleneck",
            "18",
            "--grid",
            "5",
            "--out",
            out.to_str().unwrap(),
            "--no-timing",
        ])?;
    }
    Ok(MnistRuns {
        dir,
        seconds: start.elapsed().as_secs_f64() / 2.0,
    })
}

fn mnist_training(mnist: &Path, runs: &MnistRuns) -> Check {
    let a = runs.dir.path().join("a");
    let epochs = read_csv(&a.join("metrics.csv"))?;
    ensure(epochs.len() == 10, || format!("{} epochs recorded", epochs.len()))?;
    let first = num(&epochs[0][1])?;
    let last = num(&epochs[9][1])?;
    let summary = read_csv(&a.join("summary.csv"))?;
    let test_mse = num(&summary[0][0])?;

    let test = load_idx::<f64>(mnist.join("t10k-images-idx3-ubyte"), mnist.join("t10k-labels-idx1-ubyte"))
        .map_err(|e| e.to_string())?;
    let untrained = KanAutoencoder::<f64>::build(784, 8, 18, SplineGrid::default(), true, sub_seed(42, "init"))
        .map_err(|e| e.to_string())?;
    let initial = evaluate_mse(&untrained, &test, 256).map_err(|e| e.to_string())?;

    let detail = format!(
        "test_mse {test_mse:.4} vs untrained {initial:.4} ({:.2}x), train epoch1 {first:.4} -> epoch10 {last:.4}, \
         published 0.2238, {:.0}s per run",
        initial / test_mse,
        runs.seconds
    );
    ensure(test_mse.is_finite(), || format!("non-finite test MSE; {detail}"))?;
    ensure(test_mse * 5.0 <= initial, || format!("less than 5x reduction; {detail}"))?;
    ensure(last < first, || format!("epoch 10 not below epoch 1; {detail}"))?;
    Ok(detail)
}

fn latent_quality(runs: &MnistRuns) -> Check {
    let summary = read_csv(&runs.dir.path().join("a/summary.csv"))?;
    let acc = num(&summary[0][1])?;
    let f1 = num(&summary[0][2])?;
    let detail = format!("k=5 accuracy {acc:.4} (>= 0.70), macro F1 {f1:.4} (>= 0.69); published 0.78 / 0.77");
    ensure(acc >= 0.70 && f1 >= 0.69, || detail.clone())?;
    Ok(detail)
}

fn determinism(runs: &MnistRuns) -> Check {
    let (a, b) = (runs.dir.path().join("a"), runs.dir.path().join("b"));
    for f in ["metrics.csv", "model.kanae"] {
        let x = fs::read(a.join(f)).map_err(|e| e.to_string())?;
        let y = fs::read(b.join(f)).map_err(|e| e.to_string())?;
        ensure(x == y, || format!("{f} differs between identical runs"))?;
    }
    let size = fs::metadata(a.join("model.kanae")).map_err(|e| e.to_string())?.len();
    Ok(format!("metrics.csv and model.kanae ({size} bytes) identical across two full runs (--no-timing)"))
}

// 5 -------------------------------------------------------------------------

fn bottleneck_monotonicity(mnist: &Path) -> Check {
    let sizes = [10usize, 50, 150];
    let mut sums = [0.0f64; 3];
    let mut per_seed = Vec::new();
    for seed in ["42", "43"] {
        let out = tempfile::tempdir().map_err(|e| e.to_string())?;
        kanae(&[
            "sweep",
            "--dataset",
            "mnist",
            "--data-dir",
            mnist.to_str().unwrap(),
            "--bottlenecks",
            "10,50,150",
            "--train-limit",
            "10000",
            "--seed",
            seed,
            "--out",
            out.path().to_str().unwrap(),
        ])?;
        let rows = read_csv(&out.path().join("sweep.csv"))?;
        ensure(rows.len() == 3, || format!("{} sweep rows", rows.len()))?;
        let mut line = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            ensure(row[0] == sizes[i].to_string(), || format!("row order {:?}", row))?;
            let mse = num(&row[1])?;
            sums[i] += mse;
            line.push(format!("{mse:.4}"));
        }
        per_seed.push(format!("seed {seed}: {}", line.join(" / ")));
    }
    let means: Vec<f64> = sums.iter().map(|s| s / 2.0).collect();
    let detail = format!(
        "mean test_mse b=10 {:.4}, b=50 {:.4}, b=150 {:.4} ({}; 10k train subsample)",
        means[0],
        means[1],
        means[2],
        per_seed.join(", ")
    );
    ensure(means[0] > means[1] && means[1] > means[2], || format!("not strictly decreasing: {detail}"))?;
    Ok(detail)
}

// ---------------------------------------------------------------------------

fn guarded(f: impl FnOnce() -> Check) -> Verdict {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => Verdict::Pass(s),
        Ok(Err(s)) => Verdict::Fail(s),
        Err(p) => Verdict::Fail(format!(
            "panicked: {}",
            p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
        )),
    }
}

fn report(id: &str, name: &str, v: &Verdict) {
    let (tag, detail) = match v {
        Verdict::Pass(s) => ("PASS", s),
        Verdict::Fail(s) => ("FAIL", s),
        Verdict::Skip(s) => ("SKIP", s),
    };
    println!("{tag}  {id:<6} {name:<28} {detail}");
}

fn main() {
    // Silence the default hook; panics are reported as FAIL lines.
    panic::set_hook(Box::new(|_| {}));
    let mut verdicts: Vec<(&str, &str, Verdict)> = Vec::new();
    let mut run = |id: &'static str, name: &'static str, f: &mut dyn FnMut() -> Verdict| {
        let v = f();
        report(id, name, &v);
        verdicts.push((id, name, v));
    };

    println!("acceptance criteria");
    run("C1", "parameter counts", &mut || guarded(parameter_counts));
    run("C2", "gradient correctness", &mut || guarded(gradient_correctness));
    run("C3", "b-spline kernel", &mut || guarded(spline_properties));
    run("C7", "knn oracle", &mut || guarded(knn_oracle));
    run("C8", "format round-trips", &mut || guarded(format_round_trips));
    run("CIFAR", "cifar smoke run", &mut || guarded(cifar_smoke));

    match mnist_dir() {
        None => {
            let why = "MNIST IDX files not found (set KANAE_MNIST_DIR)".to_string();
            for (id, name) in [
                ("C4", "mnist training"),
                ("C5", "bottleneck monotonicity"),
                ("C6", "latent quality"),
                ("C9", "determinism"),
            ] {
                run(id, name, &mut || Verdict::Skip(why.clone()));
            }
        }
        Some(mnist) => {
            let runs = mnist_train(&mnist);
            let with_runs = |f: &dyn Fn(&MnistRuns) -> Check| match &runs {
                Ok(r) => guarded(|| f(r)),
                Err(e) => Verdict::Fail(e.clone()),
            };
            run("C4", "mnist training", &mut || with_runs(&|r| mnist_training(&mnist, r)));
            run("C6", "latent quality", &mut || with_runs(&latent_quality));
            run("C9", "determinism", &mut || with_runs(&determinism));
            run("C5", "bottleneck monotonicity", &mut || guarded(|| bottleneck_monotonicity(&mnist)));
        }
    }

    let failed: Vec<&str> = verdicts
        .iter()
        .filter(|(_, _, v)| matches!(v, Verdict::Fail(_)))
        .map(|(id, _, _)| *id)
        .collect();
    let passed = verdicts.iter().filter(|(_, _, v)| matches!(v, Verdict::Pass(_))).count();
    println!(
        "{passed} passed, {} failed, {} skipped",
        failed.len(),
        verdicts.len() - passed - failed.len()
    );
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
