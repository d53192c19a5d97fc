use std::fs;
use std::path::{Path, PathBuf};

use dense_tsp::experiments::{
    aggregate, calibration, estimate_covariance_decay, estimate_nn_distance_scaling, report, run_city_trials,
    scaling_study, unconstrained_study, ExperimentConfig, Study, SummaryStats, TrialSetup,
};
use dense_tsp::geometry::{sample_unit_square, Square};
use dense_tsp::probability::{compare_binomial_poisson, comparison_rows};
use dense_tsp::tours::{exact_tsp, merge_cycles, strips_tour, CityCycle, StripWidth};
use dense_tsp::{build_city_grid, sample_binomial, sample_poisson, select_well_connected, DensityField, Error, Instance, Result};
use serde::Serialize;
use serde_json::json;

use crate::manifest::{sibling_manifest, write_atomic, RunManifest};
use crate::plot::{svg, Series};
use crate::{CalibrateArgs, ExperimentArgs, GenerateArgs, Method, PmfArgs, ProcessArg, TourArgs};

fn pretty<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text.into_bytes())
}

pub fn generate(a: &GenerateArgs, argv: &[String]) -> Result<()> {
    let manifest = RunManifest::new(
        "generate",
        argv,
        json!({
            "r": a.r, "s": a.s, "N": a.n_cities, "n": a.n,
            "process": format!("{:?}", a.process).to_lowercase(), "density": a.density, "seed": a.seed,
        }),
        Some(a.seed),
    );
    let f = DensityField::parse(&a.density)?;
    let inst = match (a.r, a.s) {
        (Some(r), Some(s)) => {
            let grid = build_city_grid(r, s)?;
            let sel = select_well_connected(&grid, a.n_cities, a.seed)?;
            match a.process {
                ProcessArg::Binomial => sample_binomial(&sel, &f, a.n, a.seed)?,
                ProcessArg::Poisson => sample_poisson(&sel, &f, a.n as f64, a.seed)?,
            }
        }
        (None, None) => {
            if a.n_cities != 1 || a.process != ProcessArg::Binomial {
                return Err(Error::Parameter(
                    "an instance without --r/--s covers the unit square: use --N 1 and the binomial process".into(),
                ));
            }
            sample_unit_square(&f, a.n, a.seed)?
        }
        _ => return Err(Error::Parameter("--r and --s must be given together".into())),
    };
    let mut text = inst.to_json()?;
    text.push('\n');
    write_atomic(&a.out, text.as_bytes())?;
    let mut manifest = manifest;
    manifest.outputs.push(a.out.clone());
    manifest.finish(&sibling_manifest(&a.out))
}

#[derive(Serialize)]
struct TourDoc {
    schema_version: u32,
    method: &'static str,
    order: Vec<usize>,
    length: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<dense_tsp::StripsCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<dense_tsp::MergeTrace>,
}

pub fn tour(a: &TourArgs, argv: &[String]) -> Result<()> {
    let manifest = RunManifest::new(
        "tour",
        argv,
        json!({ "in": a.input, "method": format!("{:?}", a.method).to_lowercase(), "strip_width": a.strip_width }),
        None,
    );
    let inst = Instance::from_json(&fs::read_to_string(&a.input)?)?;
    if a.strip_width.is_some() && a.method != Method::Strips {
        return Err(Error::Parameter("--strip-width only applies to --method strips".into()));
    }
    let doc = match a.method {
        Method::Strips => {
            let width = a.strip_width.map_or(StripWidth::Auto, StripWidth::Fixed);
            let (t, cert) = strips_tour(&inst.nodes, Square::UNIT, width)?;
            TourDoc { schema_version: 1, method: "strips", length: t.length(), order: t.into_order(), certificate: Some(cert), trace: None }
        }
        Method::Exact => {
            let t = exact_tsp(&inst.nodes)?;
            TourDoc { schema_version: 1, method: "exact", length: t.length(), order: t.into_order(), certificate: None, trace: None }
        }
        Method::Merge => {
            let sel = inst.selection.clone().ok_or_else(|| {
                Error::Inapplicable("merge needs an instance with city structure (generated with --r and --s)".into())
            })?;
            let setup = TrialSetup {
                selection: sel.clone(),
                density: DensityField::uniform(),
                process: dense_tsp::experiments::ProcessKind::Binomial,
                exact_threshold: 12,
                exact_only: false,
                global_exact_limit: 0,
            };
            let mut cycles = Vec::with_capacity(sel.len());
            for l in 0..sel.len() {
                let ids = inst.nodes_in_city(l);
                let (order, _, _) = setup.solve_city(&inst.city_points(l), sel.square(l))?;
                cycles.push(CityCycle { city: l, order: order.into_iter().map(|k| ids[k]).collect() });
            }
            let (t, trace) = merge_cycles(&inst.nodes, &sel, &cycles)?;
            TourDoc {
                schema_version: 1,
                method: "merge",
                length: t.length(),
                order: t.into_order(),
                certificate: None,
                trace: Some(trace),
            }
        }
    };
    write_atomic(&a.out, &pretty(&doc)?)?;
    let mut manifest = manifest;
    manifest.outputs.push(a.out.clone());
    manifest.finish(&sibling_manifest(&a.out))
}

#[derive(Serialize)]
struct PointSummary {
    n: usize,
    #[serde(rename = "N")]
    n_cities: usize,
    stats: SummaryStats,
}

fn point_summaries(records: &[dense_tsp::experiments::TrialRecord]) -> Result<Vec<PointSummary>> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let key = (records[start].n, records[start].n_cities);
        let end = start + records[start..].iter().take_while(|r| (r.n, r.n_cities) == key).count();
        out.push(PointSummary { n: key.0, n_cities: key.1, stats: aggregate(&records[start..end])? });
        start = end;
    }
    Ok(out)
}

fn ratio_series(points: &[PointSummary]) -> Vec<Series> {
    ["V_n/b_n", "merged/b_n"]
        .iter()
        .map(|&col| Series {
            name: col.into(),
            points: points
                .iter()
                .filter_map(|p| p.stats.column(col).map(|c| (p.n as f64, c.mean, c.std_error)))
                .collect(),
        })
        .collect()
}

struct Outputs<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Outputs<'_> {
    fn put(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes)?;
        self.written.push(path);
        Ok(())
    }
}

pub fn experiment(a: &ExperimentArgs, argv: &[String]) -> Result<()> {
    let cfg: ExperimentConfig = fs::read_to_string(&a.config)?.parse()?;
    cfg.validate()?;
    let mut manifest = RunManifest::new("experiment", argv, json!({ "config": cfg.to_kv() }), Some(cfg.seed));
    fs::create_dir_all(&a.out_dir)?;
    let mut out = Outputs { dir: &a.out_dir, written: Vec::new() };
    out.put("config.txt", cfg.to_kv().as_bytes())?;
    let plot = match cfg.study {
        Study::CityTrials => {
            let records = run_city_trials(&cfg)?;
            out.put("trials.csv", report::trials_csv(&records).as_bytes())?;
            let points = point_summaries(&records)?;
            out.put("summary.json", &pretty(&points)?)?;
            svg("City trials", "n", "ratio to b_n", &ratio_series(&points))
        }
        Study::Scaling => {
            let (rows, records) = scaling_study(&cfg)?;
            out.put("trials.csv", report::trials_csv(&records).as_bytes())?;
            out.put("scaling.csv", report::scaling_csv(&rows).as_bytes())?;
            let points = point_summaries(&records)?;
            out.put("summary.json", &pretty(&json!({ "rows": rows, "points": points }))?)?;
            svg("Scaling study", "n", "ratio to b_n", &ratio_series(&points))
        }
        Study::NnScaling => {
            let f = cfg.density_field()?;
            let table = estimate_nn_distance_scaling(&cfg.k_schedule, cfg.r, &f, cfg.samples, cfg.seed)?;
            out.put("nn_scaling.csv", report::nn_scaling_csv(&table).as_bytes())?;
            out.put("summary.json", &pretty(&table)?)?;
            let factor = |k: usize| (k as f64).sqrt() / cfg.r;
            let series = Series {
                name: "mean_d sqrt(k)/r".into(),
                points: table.rows.iter().map(|r| (r.k as f64, r.normalized, r.std_error * factor(r.k))).collect(),
            };
            svg("Nearest-neighbour distance", "k", "normalized mean distance", &[series])
        }
        Study::Covariance => {
            let rows = estimate_covariance_decay(&cfg, &cfg.schedule()?)?;
            out.put("covariance.csv", report::covariance_csv(&rows).as_bytes())?;
            out.put("summary.json", &pretty(&rows)?)?;
            let series = Series { name: "cov".into(), points: rows.iter().map(|r| (r.n as f64, r.cov, r.cov_se)).collect() };
            svg("Per-city length covariance", "n", "cov(T_l1, T_l2)", &[series])
        }
        Study::Unconstrained => {
            let rows = unconstrained_study(&cfg)?;
            out.put("unconstrained.csv", report::unconstrained_csv(&rows).as_bytes())?;
            out.put("summary.json", &pretty(&rows)?)?;
            let series = Series {
                name: "strips/sqrt(n)".into(),
                points: rows
                    .iter()
                    .map(|r| {
                        let sq = (r.n as f64).sqrt();
                        (r.n as f64, r.mean_strips / sq, (r.var_strips / r.trials as f64).sqrt() / sq)
                    })
                    .collect(),
            };
            svg("Unconstrained tours", "n", "length / sqrt(n)", &[series])
        }
    };
    if a.plot {
        out.put("plot.svg", plot.as_bytes())?;
    }
    manifest.outputs = out.written;
    manifest.finish(&a.out_dir.join("manifest.json"))
}

pub fn pmf(a: &PmfArgs, argv: &[String]) -> Result<()> {
    let p = a.p.unwrap_or(1.0 / a.n_cities as f64);
    let manifest = RunManifest::new(
        "pmf",
        argv,
        json!({ "n": a.n, "N": a.n_cities, "p": p, "eta1": a.eta1, "eta2": a.eta2 }),
        None,
    );
    let cmp = compare_binomial_poisson(a.n, a.n_cities, p, a.eta1, a.eta2)?;
    let rows = comparison_rows(a.n, p, cmp.k_min, cmp.k_max)?;
    write_atomic(&a.out, report::pmf_csv(&rows).as_bytes())?;
    let summary = a.out.with_extension("summary.json");
    write_atomic(&summary, &pretty(&cmp)?)?;
    let mut manifest = manifest;
    manifest.outputs = vec![a.out.clone(), summary];
    manifest.finish(&sibling_manifest(&a.out))
}

pub fn calibrate(a: &CalibrateArgs, argv: &[String]) -> Result<()> {
    let manifest = RunManifest::new("calibrate", argv, json!({ "seed": a.seed }), Some(a.seed));
    let file = calibration::run_calibration(a.seed)?;
    write_atomic(&a.out, &pretty(&file)?)?;
    let mut manifest = manifest;
    manifest.outputs.push(a.out.clone());
    manifest.finish(&sibling_manifest(&a.out))
}
