use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use kanae_core::autoencoder::{read_header, train_observed, CheckpointHeader};
use kanae_core::data::write_image_grid;
use kanae_core::eval::{evaluate_latents, sweep, EvalMetrics, SweepConfig, SWEEP_CSV_HEADER};
use kanae_core::{
    count_params_actual, count_params_paper, Dataset, DatasetRegistry, Error, KanAutoencoder, Real, Split,
    SplineGrid,
};

use crate::args::{ClassifyArgs, CountParamsArgs, Precision, ReconstructArgs, SweepArgs, TrainArgs};
use crate::config::{RunConfig, DOMAIN};
use crate::error::{CliError, CliResult};

macro_rules! with_precision {
    ($p:expr, $f:ident($($arg:expr),*)) => {
        match $p {
            Precision::F32 => $f::<f32>($($arg),*),
            Precision::F64 => $f::<f64>($($arg),*),
        }
    };
}

pub fn train(args: TrainArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve("train", &args.common, &[])?;
    with_precision!(cfg.precision, run_train(&cfg))
}

pub fn sweep_cmd(args: SweepArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve("sweep", &args.common, &args.bottlenecks)?;
    if cfg.bottlenecks.is_empty() {
        return Err(CliError::Usage("--bottlenecks needs at least one size".into()));
    }
    let distinct: BTreeSet<usize> = cfg.bottlenecks.iter().copied().collect();
    if distinct.len() != cfg.bottlenecks.len() {
        return Err(CliError::Usage("--bottlenecks must not repeat a size".into()));
    }
    if distinct.contains(&0) {
        return Err(CliError::Usage("--bottlenecks must be positive".into()));
    }
    with_precision!(cfg.precision, run_sweep(&cfg))
}

pub fn reconstruct(args: ReconstructArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve("reconstruct", &args.common, &[])?;
    let header = read_header(&args.model)?;
    match header.float_width {
        4 => run_reconstruct::<f32>(&cfg, &args.model, &header, args.count),
        _ => run_reconstruct::<f64>(&cfg, &args.model, &header, args.count),
    }
}

pub fn classify(args: ClassifyArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve("classify", &args.common, &[])?;
    let header = read_header(&args.model)?;
    match header.float_width {
        4 => run_classify::<f32>(&cfg, &args.model, &header),
        _ => run_classify::<f64>(&cfg, &args.model, &header),
    }
}

pub fn count_params(args: CountParamsArgs) -> CliResult<()> {
    if args.input == 0 || args.hidden == 0 || args.bottleneck == 0 || args.grid == 0 {
        return Err(CliError::Usage("sizes and --grid must be at least 1".into()));
    }
    let grid = SplineGrid::new(args.grid, args.degree, DOMAIN.0, DOMAIN.1)?;
    let paper = count_params_paper(args.input, args.hidden, args.bottleneck, args.grid);
    let actual = count_params_actual(args.input, args.hidden, args.bottleneck, &grid, !args.no_base);
    println!("paper_formula  {paper}");
    println!("actual         {actual}");
    Ok(())
}

fn load_split<T: Real>(cfg: &RunConfig, split: Split, limit: Option<usize>) -> CliResult<Dataset<T>> {
    let registry = DatasetRegistry::with_builtin();
    let format = registry.get(&cfg.dataset).map_err(|e| CliError::Usage(e.to_string()))?;
    let bytes = format.load(&cfg.data_dir, split)?;
    let bytes = match limit {
        Some(n) => bytes.head(n),
        None => bytes,
    };
    Ok(bytes.normalize())
}

fn prepare_out(cfg: &RunConfig, input: usize) -> CliResult<()> {
    fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    write_file(&cfg.out.join("config.echo"), cfg.echo(input).as_bytes())
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn seconds(cfg: &RunConfig, s: f64) -> String {
    if cfg.timing {
        format!("{s:.3}")
    } else {
        "0".into()
    }
}

fn check_width(header: &CheckpointHeader, data: &Dataset<impl Real>) -> CliResult<()> {
    if header.input_size as usize != data.dim() {
        return Err(Error::ShapeMismatch {
            what: "checkpoint input width vs dataset",
            expected: header.input_size.to_string(),
            found: format!("{} ({})", data.dim(), data.meta().name),
        }
        .into());
    }
    Ok(())
}

fn run_train<T: Real>(cfg: &RunConfig) -> CliResult<()> {
    let start = Instant::now();
    let train_set = load_split::<T>(cfg, Split::Train, cfg.train_limit)?;
    let test_set = load_split::<T>(cfg, Split::Test, cfg.test_limit)?;
    prepare_out(cfg, train_set.dim())?;
    eprintln!(
        "{}: {} train / {} test samples of width {}",
        cfg.dataset,
        train_set.len(),
        test_set.len(),
        train_set.dim()
    );

    let mut model = KanAutoencoder::<T>::build(
        train_set.dim(),
        cfg.hidden,
        cfg.bottleneck,
        cfg.spline_grid(),
        cfg.use_base,
        cfg.init_seed(),
    )?;

    let metrics_path = cfg.out.join("metrics.csv");
    let mut metrics = create(&metrics_path)?;
    let mut write_err = writeln!(metrics, "epoch,train_mse,wall_s").err();
    let report = train_observed(&mut model, &train_set, &test_set, &cfg.train_config(), |rec| {
        eprintln!(
            "epoch {:>3}/{}  train_mse {:.6}  {:.1}s",
            rec.epoch, cfg.epochs, rec.train_mse, rec.wall_s
        );
        if write_err.is_none() {
            write_err = writeln!(metrics, "{},{},{}", rec.epoch, rec.train_mse, seconds(cfg, rec.wall_s))
                .and_then(|_| metrics.flush())
                .err();
        }
    })?;
    if let Some(e) = write_err {
        return Err(CliError::io(metrics_path, e));
    }
    drop(metrics);

    model.save(cfg.out.join("model.kanae"))?;
    let m = evaluate_latents(&model, &train_set, &test_set, cfg.k)?;
    let summary = format!(
        "test_mse,acc,f1,params_paper,params_actual,total_s\n{},{},{},{},{},{}\n",
        report.final_test_mse,
        m.accuracy,
        m.macro_f1,
        report.params_paper,
        report.params_actual,
        seconds(cfg, start.elapsed().as_secs_f64())
    );
    write_file(&cfg.out.join("summary.csv"), summary.as_bytes())?;
    println!(
        "test_mse {:.6} (untrained {:.6})  knn acc {:.4}  macro_f1 {:.4}  params paper {} actual {}",
        report.final_test_mse,
        report.initial_test_mse,
        m.accuracy,
        m.macro_f1,
        report.params_paper,
        report.params_actual
    );
    println!("wrote {}", cfg.out.display());
    Ok(())
}

fn run_sweep<T: Real>(cfg: &RunConfig) -> CliResult<()> {
    let train_set = load_split::<T>(cfg, Split::Train, cfg.train_limit)?;
    let test_set = load_split::<T>(cfg, Split::Test, cfg.test_limit)?;
    prepare_out(cfg, train_set.dim())?;
    let sweep_cfg = SweepConfig {
        grid: cfg.spline_grid(),
        use_base: cfg.use_base,
        train: cfg.train_config(),
        init_seed: cfg.init_seed(),
        k: cfg.k,
    };
    let mut sizes = cfg.bottlenecks.clone();
    sizes.sort_unstable();

    let csv_path = cfg.out.join("sweep.csv");
    let dat_path = cfg.out.join("loss_vs_bottleneck.dat");
    let mut csv = create(&csv_path)?;
    let mut dat = create(&dat_path)?;
    writeln!(csv, "{SWEEP_CSV_HEADER}").map_err(|e| CliError::io(&csv_path, e))?;
    writeln!(dat, "# bottleneck test_mse").map_err(|e| CliError::io(&dat_path, e))?;
    for b in sizes {
        eprintln!("bottleneck {b}: training hidden = bottleneck = {b}");
        let mut row = sweep(&train_set, &test_set, &[b], &sweep_cfg)?.remove(0);
        if !cfg.timing {
            row.wall_s = 0.0;
        }
        println!(
            "bottleneck {:>4}  test_mse {:.6}  acc {:.4}  f1 {:.4}  params {} / {}  {:.1}s",
            row.bottleneck, row.test_mse, row.accuracy, row.macro_f1, row.params_paper, row.params_actual, row.wall_s
        );
        writeln!(csv, "{}", row.csv_line())
            .and_then(|_| csv.flush())
            .map_err(|e| CliError::io(&csv_path, e))?;
        writeln!(dat, "{} {}", row.bottleneck, row.test_mse)
            .and_then(|_| dat.flush())
            .map_err(|e| CliError::io(&dat_path, e))?;
    }
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn run_reconstruct<T: Real>(cfg: &RunConfig, model_path: &Path, header: &CheckpointHeader, count: usize) -> CliResult<()> {
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let test_set = load_split::<T>(cfg, Split::Test, Some(count))?;
    check_width(header, &test_set)?;
    let model = KanAutoencoder::<T>::load(model_path)?;
    prepare_out(cfg, test_set.dim())?;

    let x = test_set.features();
    let x_hat = model.reconstruct(x)?;
    let mse = (&x_hat - &x).iter().map(|v| v.as_f64().powi(2)).sum::<f64>() / x.len().max(1) as f64;
    let ext = if test_set.meta().channels == 1 { "pgm" } else { "ppm" };
    let originals = cfg.out.join(format!("originals.{ext}"));
    let recon = cfg.out.join(format!("reconstructions.{ext}"));
    write_image_grid(x, test_set.meta(), &originals)?;
    write_image_grid(x_hat.view(), test_set.meta(), &recon)?;
    println!("{} samples, mse {mse:.6}", test_set.len());
    println!("wrote {} and {}", originals.display(), recon.display());
    Ok(())
}

fn run_classify<T: Real>(cfg: &RunConfig, model_path: &Path, header: &CheckpointHeader) -> CliResult<()> {
    let train_set = load_split::<T>(cfg, Split::Train, cfg.train_limit)?;
    let test_set = load_split::<T>(cfg, Split::Test, cfg.test_limit)?;
    check_width(header, &train_set)?;
    let model = KanAutoencoder::<T>::load(model_path)?;
    prepare_out(cfg, train_set.dim())?;

    let m = evaluate_latents(&model, &train_set, &test_set, cfg.k)?;
    print_metrics(&m);
    let mut csv = format!("k,acc,f1\n{},{},{}\nclass,precision,recall,f1\n", cfg.k, m.accuracy, m.macro_f1);
    for c in 0..m.f1.len() {
        csv.push_str(&format!("{c},{},{},{}\n", m.precision[c], m.recall[c], m.f1[c]));
    }
    write_file(&cfg.out.join("classify.csv"), csv.as_bytes())
}

fn print_metrics(m: &EvalMetrics) {
    println!("accuracy {:.4}  macro_f1 {:.4}", m.accuracy, m.macro_f1);
    println!("class  precision  recall  f1");
    for c in 0..m.f1.len() {
        println!("{c:>5}  {:>9.4}  {:>6.4}  {:.4}", m.precision[c], m.recall[c], m.f1[c]);
    }
}
