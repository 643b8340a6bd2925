use std::path::Path;

use planvec::extraction::extract_walls_detailed;
use planvec::planio::{
    crop_to_extent, emit_svg, encode_pgm, load_mask, load_symbols, mean_iou, rasterize_walls, synth_plan,
    MaskFormat, MetricsReport, PlanVectorization, SynthSpec,
};
use planvec::raster::BinaryMask;
use planvec::reconstruct::{export_obj, export_semantic_json, reconstruct, wall_mesh};

use crate::{
    ensure_dir, input, read, resolve_config, write, CliError, CliResult, EvaluateArgs, ReconstructArgs,
    RunManifest, SynthArgs, VectorizeArgs,
};

fn mask_format(path: &Path, bytes: &[u8]) -> CliResult<MaskFormat> {
    if let Some(f) = MaskFormat::sniff(bytes) {
        return Ok(f);
    }
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("pgm") => Ok(MaskFormat::Pgm),
        Some("png") => Ok(MaskFormat::Png),
        _ => Err(input(format!("{}: not a PGM (P5) or PNG image", path.display()))),
    }
}

fn read_mask(path: &Path) -> CliResult<BinaryMask> {
    let bytes = read(path)?;
    let format = mask_format(path, &bytes)?;
    load_mask(&bytes, format).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_plan(path: &Path) -> CliResult<PlanVectorization> {
    PlanVectorization::from_json(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// Writes `plan.json`, `plan.svg` and `manifest.json` into `--out`.
pub fn cmd_vectorize(args: &VectorizeArgs) -> CliResult<RunManifest> {
    let (cfg, cfg_path) = resolve_config(args.config.as_deref())?;
    let mut m = RunManifest::new("vectorize", cfg.hash(), cfg_path.as_deref());

    m.input(&args.mask);
    let mask = m.time("load", || read_mask(&args.mask))?;
    let symbols = match &args.symbols {
        Some(p) => {
            m.input(p);
            load_symbols(&read(p)?).map_err(|e| input(format!("{}: {e}", p.display())))?
        }
        None => Vec::new(),
    };

    let ex = m.time("extract", || extract_walls_detailed(&mask, &cfg));
    let mut ids = std::collections::HashSet::new();
    if let Some(bad) = ex.walls.iter().find(|w| !w.is_valid() || !ids.insert(w.id)) {
        return Err(CliError::Internal(format!("extraction produced an invalid wall: {bad:?}")));
    }

    let mut diagnostics = Vec::new();
    if ex.walls.is_empty() {
        diagnostics.push("no walls extracted".to_string());
    }
    let residual = ex.residual.count();
    if residual > 0 {
        diagnostics.push(format!("{residual} wall pixels left uncovered"));
    }
    let (w, h) = mask.dims();
    let plan = PlanVectorization {
        source_width: w,
        source_height: h,
        walls: ex.walls,
        symbols,
        diagnostics: diagnostics.clone(),
    };

    ensure_dir(&args.out)?;
    let (json_path, svg_path) = (args.out.join("plan.json"), args.out.join("plan.svg"));
    m.time("write", || -> CliResult<()> {
        write(&json_path, &plan.to_json())?;
        write(&svg_path, &emit_svg(&plan))
    })?;
    m.output(&json_path);
    m.output(&svg_path);
    m.counts.insert("walls".into(), plan.walls.len());
    m.counts.insert("symbols".into(), plan.symbols.len());
    m.counts.insert("angle_passes".into(), ex.iterations.len());
    m.diagnostics = diagnostics;
    let manifest_path = args.out.join("manifest.json");
    m.output(&manifest_path);
    write(&manifest_path, &m.to_json())?;
    Ok(m)
}

/// Writes `model.obj`, `model.json` and `manifest.json` into `--out`.
pub fn cmd_reconstruct(args: &ReconstructArgs) -> CliResult<RunManifest> {
    let (cfg, cfg_path) = resolve_config(args.config.as_deref())?;
    let mut m = RunManifest::new("reconstruct", cfg.hash(), cfg_path.as_deref());

    m.input(&args.plan);
    let plan = m.time("load", || read_plan(&args.plan))?;
    let rec = m.time("reconstruct", || reconstruct(&plan, &cfg));
    for w in &rec.scene.walls {
        if !wall_mesh(w).is_closed_manifold() {
            return Err(CliError::Internal(format!("mesh of wall {} is not closed", w.id)));
        }
    }

    ensure_dir(&args.out)?;
    let (obj_path, json_path) = (args.out.join("model.obj"), args.out.join("model.json"));
    m.time("write", || -> CliResult<()> {
        write(&obj_path, &export_obj(&rec.scene, &cfg.hash()))?;
        write(&json_path, &export_semantic_json(&rec.scene))
    })?;
    m.output(&obj_path);
    m.output(&json_path);
    m.counts.insert("walls".into(), rec.scene.walls.len());
    m.counts.insert("symbols".into(), plan.symbols.len());
    m.counts.insert("matched".into(), rec.matching.matched.len());
    m.counts.insert(
        "openings".into(),
        rec.scene.walls.iter().map(|w| w.openings.len()).sum(),
    );
    m.unmatched_symbols = rec.matching.unmatched.clone();
    m.diagnostics = rec.diagnostics;
    let manifest_path = args.out.join("manifest.json");
    m.output(&manifest_path);
    write(&manifest_path, &m.to_json())?;
    Ok(m)
}

fn score(pred: &BinaryMask, gt: &BinaryMask, crop: bool, diagnostics: &mut Vec<String>) -> CliResult<f64> {
    let (pred, gt) = if crop {
        let c = crop_to_extent(pred, gt).map_err(|e| input(e.to_string()))?;
        diagnostics.extend(c.diagnostic);
        (c.image, c.gt)
    } else {
        (pred.clone(), gt.clone())
    };
    mean_iou(&pred, &gt).map_err(|e| input(e.to_string()))
}

/// Mask IoU for `--pred-mask`, vectorized IoU for `--plan`.
pub fn cmd_evaluate(args: &EvaluateArgs) -> CliResult<MetricsReport> {
    let gt = read_mask(&args.gt_mask)?;
    let mut report = MetricsReport::default();
    if let Some(p) = &args.pred_mask {
        let pred = read_mask(p)?;
        report.mask_iou = Some(score(&pred, &gt, args.crop, &mut report.diagnostics)?);
    }
    if let Some(p) = &args.plan {
        let plan = read_plan(p)?;
        let pred = rasterize_walls(&plan.walls, plan.source_width, plan.source_height);
        report.vectorized_iou = Some(score(&pred, &gt, args.crop, &mut report.diagnostics)?);
    }
    report.diagnostics.dedup();
    Ok(report)
}

/// Writes `mask_####.pgm`, `truth_####.json` and `symbols_####.json` for
/// seeds `--seed`, `--seed + 1`, ... Returns the paths written.
pub fn cmd_synth(args: &SynthArgs) -> CliResult<Vec<std::path::PathBuf>> {
    let base = match &args.spec {
        Some(p) => serde_json::from_slice::<SynthSpec>(&read(p)?)
            .map_err(|e| input(format!("{}: {e}", p.display())))?,
        None => SynthSpec::default(),
    };
    base.validate().map_err(|e| input(e.to_string()))?;
    ensure_dir(&args.out)?;

    let jobs = args.jobs.max(1).min(args.count.max(1));
    let make = |i: usize| {
        let spec = SynthSpec {
            seed: args.seed.wrapping_add(i as u64),
            ..base.clone()
        };
        synth_plan(&spec).map_err(|e| input(format!("plan {i} (seed {}): {e}", spec.seed)))
    };
    let mut plans: Vec<Option<CliResult<_>>> = (0..args.count).map(|_| None).collect();
    std::thread::scope(|s| {
        let chunk = args.count.div_ceil(jobs).max(1);
        let handles: Vec<_> = plans
            .chunks_mut(chunk)
            .enumerate()
            .map(|(c, slots)| {
                let make = &make;
                s.spawn(move || {
                    for (k, slot) in slots.iter_mut().enumerate() {
                        *slot = Some(make(c * chunk + k));
                    }
                })
            })
            .collect();
        for h in handles {
            h.join().expect("synth worker panicked");
        }
    });

    let mut written = Vec::new();
    for (i, p) in plans.into_iter().enumerate() {
        let p = p.expect("every slot filled")?;
        let truth = PlanVectorization {
            source_width: p.mask.width(),
            source_height: p.mask.height(),
            walls: p.truth_walls,
            symbols: p.truth_symbols.clone(),
            diagnostics: Vec::new(),
        };
        let mut symbols = serde_json::to_vec_pretty(&p.truth_symbols).expect("symbols serialize");
        symbols.push(b'\n');
        for (name, bytes) in [
            (format!("mask_{i:04}.pgm"), encode_pgm(&p.mask)),
            (format!("truth_{i:04}.json"), truth.to_json()),
            (format!("symbols_{i:04}.json"), symbols),
        ] {
            let path = args.out.join(name);
            write(&path, &bytes)?;
            written.push(path);
        }
    }
    Ok(written)
}
