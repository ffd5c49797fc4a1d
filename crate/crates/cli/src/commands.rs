use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, ensure, Context};
use log::info;
use serde::Serialize;

use netstruct::hypothesis::fit_fd_alternate;
use netstruct::inference::{fit_exact_with_limit, DEFAULT_EXHAUSTIVE_LIMIT};
use netstruct::io::Record;
use netstruct::io::{read_dataset, write_covariates, write_edge_list, BUILTIN_NAMES};
use netstruct::models::{loglik_er, sample_er, sample_fixed_degree, sample_sbm};
use netstruct::*;

use crate::config::{layer, FileConfig};
use crate::output::{effective_seed, emit, output_dir, report_sink, write_files};
use crate::{DataArgs, FitArgs, RocArgs, SimulateArgs, TestArgs};

const DEFAULT_TEST_REPLICATES: usize = 999;
const DEFAULT_ROC_REPLICATES: usize = 1000;
const DEFAULT_CALIBRATION: usize = 1000;

fn load_dataset(args: DataArgs, file: &FileConfig) -> anyhow::Result<Dataset> {
    // A flag naming either source overrides both keys from the file.
    let (dataset, edges) = if args.dataset.is_some() || args.edges.is_some() {
        (args.dataset, args.edges)
    } else {
        (file.dataset.clone(), file.edges.clone())
    };
    let covariates = layer(args.covariates, &file.covariates);
    let mut ds = match (dataset, edges) {
        (Some(name), None) if BUILTIN_NAMES.contains(&name.as_str()) => builtin(&name)?,
        (Some(path), None) => read_dataset(Path::new(&path), None).with_context(|| {
            format!("'{path}' is neither a built-in dataset nor a readable edge list")
        })?,
        (None, Some(path)) => read_dataset(&path, None)?,
        (Some(_), Some(_)) => bail!("give either a dataset or an edge list, not both"),
        (None, None) => bail!("no dataset: use --dataset or --edges"),
    };
    if let Some(path) = covariates {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let c = load_covariates(&text, ds.graph.n(), None)
            .with_context(|| format!("in {}", path.display()))?;
        ds.covariates = Some(c);
    }
    Ok(ds)
}

fn parse_format(
    flag: Option<String>,
    file: &Option<String>,
    default: Format,
) -> anyhow::Result<Format> {
    match layer(flag, file) {
        Some(s) => Ok(s.parse()?),
        None => Ok(default),
    }
}

fn check_replicates(r: usize) -> anyhow::Result<usize> {
    ensure!(r >= 1, "replicates must be at least 1");
    Ok(r)
}

#[derive(Debug, Serialize)]
struct ErFit {
    p: f64,
    loglik: f64,
}

#[derive(Debug, Serialize)]
struct BlockFit {
    p00: f64,
    p01: f64,
    p11: f64,
    loglik: f64,
    labels: Vec<usize>,
}

impl From<FitResult> for BlockFit {
    fn from(f: FitResult) -> Self {
        let [p00, p01, p11] = f.params.as_array();
        Self {
            p00,
            p01,
            p11,
            loglik: f.loglik,
            labels: f.covariates.labels().to_vec(),
        }
    }
}

/// Everything `fit` reports for one dataset.
#[derive(Debug, Serialize)]
struct FitReport {
    dataset: String,
    nodes: usize,
    edges: usize,
    er: ErFit,
    /// Block MLEs under the dataset's own labels.
    given: Option<BlockFit>,
    /// Exhaustive search; absent above the size limit.
    exact: Option<BlockFit>,
    spectral: BlockFit,
    algebraic_connectivity: f64,
}

fn csv_row(out: &mut String, model: &str, p: [f64; 3], loglik: f64, labels: &[usize]) {
    let labels: Vec<String> = labels.iter().map(usize::to_string).collect();
    let _ = writeln!(
        out,
        "{model},{},{},{},{loglik},{}",
        p[0],
        p[1],
        p[2],
        labels.join(" ")
    );
}

impl Record for FitReport {
    /// One row per fit; the Erdős–Rényi `p` fills all three block columns.
    fn to_csv(&self) -> String {
        let mut out = String::from("fit,p00,p01,p11,loglik,labels\n");
        csv_row(&mut out, "er", [self.er.p; 3], self.er.loglik, &[]);
        let fits = [("given", &self.given), ("exact", &self.exact)];
        for (name, fit) in fits {
            if let Some(f) = fit {
                csv_row(&mut out, name, [f.p00, f.p01, f.p11], f.loglik, &f.labels);
            }
        }
        let s = &self.spectral;
        csv_row(
            &mut out,
            "spectral",
            [s.p00, s.p01, s.p11],
            s.loglik,
            &s.labels,
        );
        out
    }
}

pub fn fit(args: FitArgs, file: &FileConfig) -> anyhow::Result<()> {
    let format = parse_format(args.format, &file.format, Format::Json)?;
    let limit = layer(args.exact_limit, &file.exact_limit).unwrap_or(DEFAULT_EXHAUSTIVE_LIMIT);
    let output = layer(args.output, &file.output);
    let ds = load_dataset(args.data, file)?;
    let g = &ds.graph;

    let er = mle_er(g)?;
    let given = ds
        .covariates
        .as_ref()
        .map(|c| fit_given(g, c))
        .transpose()?;
    let exact = if g.n() <= limit {
        Some(fit_exact_with_limit(g, limit)?)
    } else {
        info!("exact fit skipped: {} nodes exceeds limit {limit}", g.n());
        None
    };
    let report = FitReport {
        dataset: ds.name.clone(),
        nodes: g.n(),
        edges: g.edge_count(),
        er: ErFit {
            p: er.p(),
            loglik: loglik_er(g, &er),
        },
        given: given.map(BlockFit::from),
        exact: exact.map(BlockFit::from),
        spectral: fit_spectral(g)?.into(),
        algebraic_connectivity: fiedler(g)?.algebraic_connectivity(),
    };
    let sink = report_sink(output, &format!("{}-fit.{}", ds.name, format.extension()));
    emit(&sink, &write_results(&report, format))
}

fn er_null(g: &Graph, p: Option<f64>) -> anyhow::Result<GraphModel> {
    let params = match p {
        Some(p) => ErParams::new(p)?,
        None => mle_er(g)?,
    };
    Ok(GraphModel::ErdosRenyi { n: g.n(), params })
}

fn null_model(name: &str, g: &Graph, p: Option<f64>) -> anyhow::Result<GraphModel> {
    match name {
        "er" => er_null(g, p),
        "fixed-degree" => {
            ensure!(p.is_none(), "--null-p applies only to an er null");
            Ok(GraphModel::FixedDegree {
                degrees: g.degree_sequence(),
            })
        }
        other => bail!("unknown null model '{other}' (expected er or fixed-degree)"),
    }
}

pub fn test(args: TestArgs, file: &FileConfig) -> anyhow::Result<()> {
    let format = parse_format(args.format, &file.format, Format::Json)?;
    let statistic = layer(args.statistic, &file.statistic)
        .ok_or_else(|| anyhow!("no statistic: use --statistic"))?;
    let output = layer(args.output, &file.output);
    let null_name = layer(args.null, &file.null);
    let null_p = layer(args.null_p, &file.null_p);
    let replicates = check_replicates(
        layer(args.replicates, &file.replicates).unwrap_or(DEFAULT_TEST_REPLICATES),
    )?;
    let seed_flag = layer(args.seed, &file.seed);
    let ds = load_dataset(args.data, file)?;
    let g = &ds.graph;

    let report = if statistic == "chi2" {
        let c = ds
            .covariates
            .as_ref()
            .ok_or_else(|| anyhow!("statistic chi2 requires covariates"))?;
        chi2_test(g, c)?
    } else {
        let stat: Statistic = statistic.parse()?;
        let default_null = match stat {
            Statistic::LrFdSpectral => "fixed-degree",
            _ => "er",
        };
        let null_name = null_name.as_deref().unwrap_or(default_null);
        ensure!(
            !(stat == Statistic::LrFdSpectral && null_name != "fixed-degree"),
            "lr-fd-spectral requires the fixed-degree null"
        );
        let null = null_model(null_name, g, null_p)?;
        let seed = effective_seed(seed_flag);
        run_test(g, &stat, &null, replicates, seed)?
    };
    info!(
        "{}: observed {} p = {}",
        report.statistic_name, report.observed, report.p_value
    );
    let name = format!("{}-test-{}.{}", ds.name, statistic, format.extension());
    emit(&report_sink(output, &name), &write_results(&report, format))
}

struct AltOverrides {
    p: Option<f64>,
    p00: Option<f64>,
    p01: Option<f64>,
    p11: Option<f64>,
}

impl AltOverrides {
    fn apply(&self, base: SbmParams) -> anyhow::Result<SbmParams> {
        Ok(SbmParams::new(
            self.p00.unwrap_or(base.p00),
            self.p01.unwrap_or(base.p01),
            self.p11.unwrap_or(base.p11),
        )?)
    }

    fn all_blocks(&self) -> Option<SbmParams> {
        Some(SbmParams {
            p00: self.p00?,
            p01: self.p01?,
            p11: self.p11?,
        })
    }

    fn any_blocks(&self) -> bool {
        self.p00.is_some() || self.p01.is_some() || self.p11.is_some()
    }
}

fn alt_model(
    name: &str,
    g: &Graph,
    c: Option<&Covariates>,
    o: &AltOverrides,
    calibration: usize,
    seed: u64,
) -> anyhow::Result<GraphModel> {
    let labels = || c.ok_or_else(|| anyhow!("alternate '{name}' requires covariates"));
    match name {
        "er" | "fixed-degree" => {
            ensure!(
                !o.any_blocks(),
                "block parameters do not apply to alternate '{name}'"
            );
            if name == "er" {
                return er_null(g, o.p);
            }
            ensure!(o.p.is_none(), "--alt-p applies only to an er alternate");
            Ok(GraphModel::FixedDegree {
                degrees: g.degree_sequence(),
            })
        }
        "sbm" => {
            ensure!(o.p.is_none(), "--alt-p applies only to an er alternate");
            let c = labels()?;
            Ok(GraphModel::BlockModel {
                covariates: c.clone(),
                params: o.apply(mle_sbm_given_c(g, c)?)?,
            })
        }
        "fixed-degree-sbm" => {
            ensure!(o.p.is_none(), "--alt-p applies only to an er alternate");
            let c = labels()?;
            let params = match o.all_blocks() {
                Some(p) => SbmParams::new(p.p00, p.p01, p.p11)?,
                None => o.apply(fit_fd_alternate(g, c, calibration, seed)?)?,
            };
            Ok(GraphModel::FixedDegreeBlock {
                degrees: g.degree_sequence(),
                covariates: c.clone(),
                params,
            })
        }
        other => bail!(
            "unknown alternate '{other}' (expected er, sbm, fixed-degree or fixed-degree-sbm)"
        ),
    }
}

fn parse_statistics(list: &str) -> anyhow::Result<Vec<Statistic>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            if s == "chi2" {
                bail!("chi2 has no simulated null; it cannot be used for ROC curves");
            }
            Ok(s.parse::<Statistic>()?)
        })
        .collect()
}

pub fn roc(args: RocArgs, file: &FileConfig) -> anyhow::Result<()> {
    let format = parse_format(args.format, &file.format, Format::Csv)?;
    let statistics = parse_statistics(
        &layer(args.statistics, &file.statistics)
            .unwrap_or_else(|| "lr-spectral,degvar".to_string()),
    )?;
    let bound = !(args.no_bound || file.no_bound.unwrap_or(false));
    let null_name = layer(args.null, &file.null).unwrap_or_else(|| "er".to_string());
    let null_p = layer(args.null_p, &file.null_p);
    let alt_name = layer(args.alt, &file.alt).unwrap_or_else(|| {
        match null_name.as_str() {
            "fixed-degree" => "fixed-degree-sbm",
            _ => "sbm",
        }
        .to_string()
    });
    let overrides = AltOverrides {
        p: layer(args.alt_p, &file.alt_p),
        p00: layer(args.alt_p00, &file.alt_p00),
        p01: layer(args.alt_p01, &file.alt_p01),
        p11: layer(args.alt_p11, &file.alt_p11),
    };
    let calibration = layer(args.calibration, &file.calibration).unwrap_or(DEFAULT_CALIBRATION);
    let replicates = check_replicates(
        layer(args.replicates, &file.replicates).unwrap_or(DEFAULT_ROC_REPLICATES),
    )?;
    let dir = output_dir(layer(args.output, &file.output));
    let seed_flag = layer(args.seed, &file.seed);
    let ds = load_dataset(args.data, file)?;
    let g = &ds.graph;
    ensure!(
        !statistics.is_empty() || bound,
        "nothing to compute: no statistics and no bound"
    );
    let c = ds.covariates.as_ref();
    if bound && c.is_none() {
        bail!("the upper bound needs covariates; supply them or pass --no-bound");
    }

    let seed = effective_seed(seed_flag);
    let experiment = RocExperiment {
        null: null_model(&null_name, g, null_p)?,
        alternate: alt_model(&alt_name, g, c, &overrides, calibration, seed)?,
        statistics,
        bound_covariates: if bound { c.cloned() } else { None },
        replicates,
        seed,
    };
    info!("null {:?}", experiment.null.name());
    info!("alternate {:?}", experiment.alternate);
    let out = experiment.run()?;

    let ext = format.extension();
    let mut files = Vec::new();
    let mut summary = String::new();
    let curves = out
        .curves
        .iter()
        .map(|(k, c)| (k.as_str(), c))
        .chain(out.upper_bound.as_ref().map(|c| ("bound", c)));
    for (key, curve) in curves {
        files.push((
            dir.join(format!("roc-{key}.{ext}")),
            write_results(curve, format),
        ));
        let _ = writeln!(summary, "{key}\tauc={}", curve.auc);
    }
    write_files(&files)?;
    print!("{summary}");
    Ok(())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> anyhow::Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|_| anyhow!("invalid {what} '{}'", x.trim()))
        })
        .collect()
}

fn degrees_from(source: &str) -> anyhow::Result<DegreeSequence> {
    let ds = if BUILTIN_NAMES.contains(&source) {
        builtin(source)?
    } else {
        read_dataset(Path::new(source), None)?
    };
    Ok(ds.graph.degree_sequence())
}

pub fn simulate(args: SimulateArgs, file: &FileConfig) -> anyhow::Result<()> {
    let model = layer(args.model, &file.model).ok_or_else(|| anyhow!("no model: use --model"))?;
    let n = layer(args.n, &file.n);
    let dir = output_dir(layer(args.output, &file.output));
    let name = layer(args.name, &file.name).unwrap_or_else(|| model.clone());
    let seed_flag = layer(args.seed, &file.seed);
    let path = |ext: &str| -> PathBuf { dir.join(format!("{name}.{ext}")) };

    let mut files = Vec::new();
    match model.as_str() {
        "er" => {
            let n = n.ok_or_else(|| anyhow!("er needs --n"))?;
            let p = layer(args.p, &file.p).ok_or_else(|| anyhow!("er needs --p"))?;
            let params = ErParams::new(p)?;
            let g = sample_er(n, &params, effective_seed(seed_flag))?;
            files.push((path("edges"), write_edge_list(&g)));
        }
        "sbm" => {
            let groups =
                layer(args.groups, &file.groups).ok_or_else(|| anyhow!("sbm needs --groups"))?;
            let sizes: Vec<usize> = parse_list(&groups, "group size")?;
            ensure!(sizes.len() == 2, "sbm needs exactly two group sizes");
            let total = sizes[0] + sizes[1];
            if let Some(n) = n {
                ensure!(
                    n == total,
                    "--n {n} disagrees with group sizes summing to {total}"
                );
            }
            let block = |flag, file: &Option<f64>, key| {
                layer(flag, file).ok_or_else(|| anyhow!("sbm needs --{key}"))
            };
            let params = SbmParams::new(
                block(args.p00, &file.p00, "p00")?,
                block(args.p01, &file.p01, "p01")?,
                block(args.p11, &file.p11, "p11")?,
            )?;
            let labels = std::iter::repeat_n(0, sizes[0])
                .chain(std::iter::repeat_n(1, sizes[1]))
                .collect();
            let c = Covariates::binary(labels)?;
            let g = sample_sbm(&c, &params, effective_seed(seed_flag))?;
            files.push((path("edges"), write_edge_list(&g)));
            files.push((path("labels"), write_covariates(&c)));
        }
        "fixed-degree" => {
            let degrees = match (
                layer(args.degrees, &file.degrees),
                layer(args.degrees_from, &file.degrees_from),
            ) {
                (Some(list), None) => DegreeSequence::new(parse_list(&list, "degree")?),
                (None, Some(source)) => degrees_from(&source)?,
                (Some(_), Some(_)) => bail!("give either --degrees or --degrees-from, not both"),
                (None, None) => bail!("fixed-degree needs --degrees or --degrees-from"),
            };
            if let Some(n) = n {
                ensure!(
                    n == degrees.len(),
                    "--n {n} disagrees with {} degrees",
                    degrees.len()
                );
            }
            let draw = sample_fixed_degree(&degrees, effective_seed(seed_flag))?;
            files.push((path("edges"), write_edge_list(&draw.graph)));
            files.push((path("weight"), format!("{}\n", draw.log_weight)));
        }
        other => bail!("unknown model '{other}' (expected er, sbm or fixed-degree)"),
    }
    write_files(&files)
}
