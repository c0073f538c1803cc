use std::collections::HashMap;
use std::path::Path;

use anyhow::{bail, Context};
use binarep_core::corrupt::{CorruptionKind, CorruptionSpec, Severity};
use binarep_core::event::write_csv;
use binarep_core::export::{render_png, write_tensor, Dtype};
use binarep_core::metrics::{
    compare_representations, relative_accuracy_drop, representable_max, write_rad_csv, RadRow,
};
use binarep_core::repr::{ReprConfig, ReprKind};
use serde::{Deserialize, Serialize};

use crate::args::{
    ConvertArgs, CorruptArgs, DtypeArg, InputArgs, RadArgs, RenderArgs, StatsArgs,
};
use crate::dataset::{
    csv_bytes, discover, ensure_output_dir, output_path, relative_display, run_samples,
    sample_seed, write_atomic,
};
use crate::error::{usage, CliResult};

pub const MANIFEST: &str = "manifest.csv";
pub const RUN_CONFIG: &str = "run.json";

/// Everything needed to repeat a run, stored as `run.json` next to its manifest.
#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    version: &'static str,
    input: &'a Path,
    format: Option<&'static str>,
    width: u16,
    height: u16,
    output: &'a Path,
    #[serde(skip_serializing_if = "Option::is_none")]
    repr: Option<ReprConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dtype: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    corruption: Option<CorruptionSpec>,
    keep_going: bool,
}

impl<'a> RunConfig<'a> {
    fn new(command: &'static str, input: &'a InputArgs, output: &'a Path, keep_going: bool) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            input: &input.input,
            format: input.format.map(|f| f.extension()),
            width: input.width,
            height: input.height,
            output,
            repr: None,
            dtype: None,
            corruption: None,
            keep_going,
        }
    }

    fn write(&self, dir: &Path) -> anyhow::Result<()> {
        let mut json = serde_json::to_vec_pretty(self)?;
        json.push(b'\n');
        write_atomic(&dir.join(RUN_CONFIG), &json)
    }
}

fn validate(config: &ReprConfig) -> CliResult<()> {
    config.validate().map_err(|e| usage(e.to_string()))
}

/// Narrowest dtype that stores every value of `config` exactly.
pub fn default_dtype(config: &ReprConfig) -> Dtype {
    match config.kind {
        ReprKind::BinaryImages => Dtype::U8,
        ReprKind::BinaRep if config.normalize => Dtype::F32,
        ReprKind::BinaRep if config.bit_depth <= 8 => Dtype::U8,
        ReprKind::BinaRep if config.bit_depth <= 16 => Dtype::U16,
        ReprKind::BinaRep | ReprKind::Histogram => Dtype::U32,
        ReprKind::VoxelGrid => Dtype::F32,
    }
}

fn dtype_of(arg: DtypeArg) -> Dtype {
    match arg {
        DtypeArg::U8 => Dtype::U8,
        DtypeArg::U16 => Dtype::U16,
        DtypeArg::U32 => Dtype::U32,
        DtypeArg::F32 => Dtype::F32,
    }
}

#[derive(Debug, Serialize)]
struct ConvertRow {
    sample: String,
    path: String,
    channels: usize,
    #[serde(rename = "H")]
    height: usize,
    #[serde(rename = "W")]
    width: usize,
    repr: &'static str,
    #[serde(rename = "T")]
    frames: usize,
    #[serde(rename = "N")]
    bit_depth: Option<u32>,
    label: String,
}

pub fn convert(args: &ConvertArgs) -> CliResult<()> {
    let config = args.repr.config();
    validate(&config)?;
    let dtype = args.dtype.map(dtype_of).unwrap_or_else(|| default_dtype(&config));
    let samples = discover(&args.input)?;
    ensure_output_dir(&args.output)?;
    let geometry = args.input.geometry();

    let rows = run_samples(&samples, args.keep_going, |sample| {
        let mut stream = sample.load(geometry)?;
        if let Some(spec) = args.corrupt {
            let spec = CorruptionSpec {
                seed: sample_seed(spec.seed, &sample.id),
                ..spec
            };
            stream = spec.apply(&stream)?;
        }
        let tensor = config.convert(&stream)?;
        let path = output_path(&args.output, sample, "ert");
        write_atomic(&path, &write_tensor(&tensor, dtype)?)?;
        Ok(ConvertRow {
            sample: sample.id.clone(),
            path: relative_display(&args.output, &path),
            channels: tensor.channels(),
            height: tensor.height(),
            width: tensor.width(),
            repr: config.kind.as_str(),
            frames: config.effective_frames(),
            bit_depth: (config.kind == ReprKind::BinaRep).then_some(config.bit_depth),
            label: sample.label.clone(),
        })
    })?;

    write_atomic(&args.output.join(MANIFEST), &csv_bytes(&rows)?)?;
    let mut run = RunConfig::new("convert", &args.input, &args.output, args.keep_going);
    run.repr = Some(config);
    run.dtype = Some(dtype.name());
    run.corruption = args.corrupt;
    run.write(&args.output)?;
    eprintln!("converted {} sample(s) to {}", rows.len(), args.output.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct CorruptRow {
    sample: String,
    path: String,
    label: String,
    kind: &'static str,
    severity: u8,
    seed: u64,
    sample_seed: u64,
    events_in: usize,
    events_out: usize,
}

pub fn corrupt(args: &CorruptArgs) -> CliResult<()> {
    let base = CorruptionSpec::new(args.kind.into(), args.severity as i64, args.seed)
        .map_err(|e| usage(e.to_string()))?;
    let samples = discover(&args.input)?;
    ensure_output_dir(&args.output)?;
    let geometry = args.input.geometry();

    let rows = run_samples(&samples, args.keep_going, |sample| {
        let stream = sample.load(geometry)?;
        let spec = CorruptionSpec {
            seed: sample_seed(base.seed, &sample.id),
            ..base
        };
        // Background activity needs a time span; an empty stream stays empty.
        let out = if stream.is_empty() {
            stream.clone()
        } else {
            spec.apply(&stream)?
        };
        let path = output_path(&args.output, sample, "csv");
        write_atomic(&path, write_csv(&out).as_bytes())?;
        Ok(CorruptRow {
            sample: sample.id.clone(),
            path: relative_display(&args.output, &path),
            label: sample.label.clone(),
            kind: spec.kind.as_str(),
            severity: spec.severity.level(),
            seed: base.seed,
            sample_seed: spec.seed,
            events_in: stream.len(),
            events_out: out.len(),
        })
    })?;

    write_atomic(&args.output.join(MANIFEST), &csv_bytes(&rows)?)?;
    let mut run = RunConfig::new("corrupt", &args.input, &args.output, args.keep_going);
    run.corruption = Some(base);
    run.write(&args.output)?;
    eprintln!("corrupted {} sample(s) into {}", rows.len(), args.output.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct StatsCsvRow {
    sample: String,
    label: String,
    repr: &'static str,
    #[serde(rename = "T")]
    frames: usize,
    #[serde(rename = "N")]
    bit_depth: Option<u32>,
    channels: usize,
    density: f64,
    saturation: f64,
    mean_bits: f64,
}

pub fn stats(args: &StatsArgs) -> CliResult<()> {
    let configs: Vec<ReprConfig> = if args.single {
        let config = args.repr.config();
        validate(&config)?;
        vec![config]
    } else {
        ReprConfig::evaluation_set().to_vec()
    };
    let samples = discover(&args.input)?;
    let geometry = args.input.geometry();

    let per_sample = run_samples(&samples, false, |sample| {
        let stream = sample.load(geometry)?;
        let rows = compare_representations(&stream, &configs)?;
        Ok(rows
            .into_iter()
            .map(|row| StatsCsvRow {
                sample: sample.id.clone(),
                label: sample.label.clone(),
                repr: row.config.kind.as_str(),
                frames: row.config.effective_frames(),
                bit_depth: (row.config.kind == ReprKind::BinaRep).then_some(row.config.bit_depth),
                channels: row.channels,
                density: row.stats.density,
                saturation: row.stats.saturation,
                mean_bits: row.stats.mean_bits,
            })
            .collect::<Vec<_>>())
    })?;
    let rows: Vec<StatsCsvRow> = per_sample.into_iter().flatten().collect();
    emit(args.out.as_deref(), &csv_bytes(&rows)?)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => write_atomic(path, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .context("writing to stdout")?;
        }
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct AccuracyRow {
    corruption: String,
    severity: u8,
    accuracy: f64,
}

fn rad_rows_from_file(path: &Path) -> anyhow::Result<Vec<RadRow>> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let rows: Vec<AccuracyRow> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .with_context(|| format!("parsing {}", path.display()))?;
    let clean: Vec<&AccuracyRow> = rows.iter().filter(|r| r.severity == 0).collect();
    let by_name: HashMap<&str, f64> = clean
        .iter()
        .map(|r| (r.corruption.as_str(), r.accuracy))
        .collect();
    rows.iter()
        .filter(|r| r.severity > 0)
        .map(|r| {
            let acc_clean = match (by_name.get(r.corruption.as_str()), clean.as_slice()) {
                (Some(&acc), _) => acc,
                (None, [only]) => only.accuracy,
                (None, []) => bail!("no clean (severity 0) accuracy in {}", path.display()),
                (None, _) => bail!("several clean rows and none named {:?}", r.corruption),
            };
            Ok(RadRow {
                corruption: r.corruption.parse::<CorruptionKind>()?,
                severity: Severity::new(r.severity as i64)?,
                rad: relative_accuracy_drop(acc_clean, r.accuracy)?,
            })
        })
        .collect()
}

pub fn rad(args: &RadArgs) -> CliResult<()> {
    let rows = match (&args.input, args.clean) {
        (Some(path), _) => rad_rows_from_file(path)?,
        (None, Some(clean)) => {
            let kind: CorruptionKind = args.kind.into();
            args.acc
                .iter()
                .zip(Severity::ALL)
                .map(|(&acc, severity)| {
                    Ok(RadRow {
                        corruption: kind,
                        severity,
                        rad: relative_accuracy_drop(clean, acc)
                            .map_err(|e| usage(e.to_string()))?,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?
        }
        (None, None) => return Err(usage("pass --input or --clean with --acc")),
    };
    emit(args.out.as_deref(), write_rad_csv(&rows).as_bytes())
}

pub fn render(args: &RenderArgs) -> CliResult<()> {
    let config = args.repr.config();
    validate(&config)?;
    if let Some(c) = args.channel {
        if c >= config.channel_count() {
            return Err(usage(format!(
                "channel {c} out of range for {} channels",
                config.channel_count()
            )));
        }
    }
    let samples = discover(&args.input)?;
    ensure_output_dir(&args.output)?;
    let geometry = args.input.geometry();

    let counts = run_samples(&samples, false, |sample| {
        let stream = sample.load(geometry)?;
        let tensor = config.convert(&stream)?;
        let max = representable_max(&config, &tensor);
        // (suffix, first channel, channel count)
        let views: Vec<(String, usize, usize)> = match (args.channel, config.kind) {
            (Some(c), _) => vec![(format!("c{c}"), c, 1)],
            (None, ReprKind::VoxelGrid) => (0..tensor.channels()).map(|b| (format!("b{b}"), b, 1)).collect(),
            (None, _) => (0..tensor.channels() / 2).map(|f| (format!("f{f}"), 2 * f, 2)).collect(),
        };
        for (suffix, start, count) in &views {
            let view = tensor.select_channels(*start, *count)?;
            let png = render_png(&view, max)?;
            let path = args.output.join(format!("{}_{suffix}.png", sample.id));
            write_atomic(&path, &png)?;
        }
        Ok(views.len())
    })?;
    eprintln!(
        "rendered {} image(s) to {}",
        counts.iter().sum::<usize>(),
        args.output.display()
    );
    Ok(())
}
