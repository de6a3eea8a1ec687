use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use weylkit::check::{check_coefficients, check_free_dirac, check_kernel, check_params, check_realization, CheckRow};
use weylkit::fourier::{amplitude_from_weyl, AmplitudeOptions};
use weylkit::interpolation::{decay_estimate, parse_decimal, partial_sums_exact, ExactMatrix, SeriesMode};
use weylkit::io::{create_table, fmt_f64, matrix_header, push_matrix, read_grid_csv, read_json, read_matrix_table, write_grid_csv, write_json};
use weylkit::linalg::fro;
use weylkit::rational::params_from_realization;
use weylkit::structured::canonical::fundamental_from_factor;
use weylkit::structured::{canonical_from_kernel, recover_potential, PotentialMode};
use weylkit::{AmplitudeMode, CMat, Complex64, DifferenceKernel, GbdtParams, GbdtSystem, GridFunction, Realization, WeylSampler};

use crate::defaults;
use crate::zgrid::{parse_complex, parse_zgrid};
use crate::{Cli, Command, Potential, SeriesKind, SystemKind, ZArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(weylkit::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_structural() => 2,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<weylkit::Error> for CliError {
    fn from(e: weylkit::Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// What a subcommand reports back for the manifest.
struct Report {
    inputs: Value,
    parameters: Value,
    outputs: Vec<String>,
    warnings: Vec<String>,
    extra: Option<Value>,
    exit: u8,
}

impl Report {
    fn new(inputs: Value, parameters: Value) -> Self {
        Self { inputs, parameters, outputs: Vec::new(), warnings: Vec::new(), extra: None, exit: 0 }
    }
}

pub fn run(cli: Cli) -> Result<u8> {
    std::fs::create_dir_all(&cli.out).map_err(weylkit::Error::from)?;
    let out = cli.out.as_path();
    let (name, report) = match cli.command {
        Command::Direct(a) => ("direct", direct(out, a)?),
        Command::Inverse(a) => ("inverse", inverse(out, a)?),
        Command::Recover(a) => ("recover", recover(out, a)?),
        Command::Fundamental(a) => ("fundamental", fundamental(out, a)?),
        Command::Interpolate(a) => ("interpolate", interpolate(out, a)?),
        Command::Check(a) => ("check", check(out, a)?),
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut manifest = json!({
        "tool": "weylkit",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": name,
        "inputs": report.inputs,
        "parameters": report.parameters,
        "outputs": report.outputs,
        "warnings": report.warnings,
    });
    if let Some(extra) = report.extra {
        manifest["results"] = extra;
    }
    write_json(&out.join("run-manifest.json"), &manifest)?;
    Ok(report.exit)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

fn z_points(z: &ZArgs, fallback: &str) -> Result<Vec<Complex64>> {
    let pts = if let Some(g) = &z.zgrid {
        parse_zgrid(g).map_err(CliError::Usage)?
    } else if z.z.is_empty() {
        vec![parse_complex(fallback).map_err(CliError::Usage)?]
    } else {
        z.z.iter().map(|s| parse_complex(s)).collect::<std::result::Result<_, _>>().map_err(CliError::Usage)?
    };
    Ok(pts)
}

fn z_json(zs: &[Complex64]) -> Value {
    json!(zs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

fn x_grid(xmax: f64, nx: usize) -> Result<Vec<f64>> {
    if !(xmax >= 0.0) || nx < 1 {
        return Err(CliError::Usage(format!("need xmax >= 0 and nx >= 1, got {xmax}, {nx}")));
    }
    if nx == 1 {
        return Ok(vec![0.0]);
    }
    Ok((0..nx).map(|k| xmax * k as f64 / (nx - 1) as f64).collect())
}

fn write_x_table(path: &Path, xs: &[f64], mats: &[CMat]) -> Result<()> {
    let (r, c) = mats[0].shape();
    let mut t = create_table(path, &matrix_header(&["x"], r, c))?;
    for (x, m) in xs.iter().zip(mats) {
        let mut row = vec![fmt_f64(*x)];
        push_matrix(&mut row, m);
        t.row(&row)?;
    }
    Ok(t.finish()?)
}

fn write_z_table(path: &Path, zs: &[Complex64], mats: &[CMat]) -> Result<()> {
    let (r, c) = mats[0].shape();
    let mut t = create_table(path, &matrix_header(&["z_re", "z_im"], r, c))?;
    for (z, m) in zs.iter().zip(mats) {
        let mut row = vec![fmt_f64(z.re), fmt_f64(z.im)];
        push_matrix(&mut row, m);
        t.row(&row)?;
    }
    Ok(t.finish()?)
}

fn write_grid(path: &Path, g: &GridFunction) -> Result<()> {
    Ok(write_grid_csv(File::create(path).map_err(weylkit::Error::from)?, g)?)
}

fn validated_system(params: GbdtParams) -> Result<GbdtSystem> {
    let report = params.validate()?;
    if !report.passed {
        return Err(weylkit::Error::Validation(format!(
            "parameters violate the departure identity (relative residual {:.3e})",
            report.relative_residual
        ))
        .into());
    }
    Ok(GbdtSystem::new(params)?)
}

fn direct(out: &Path, a: crate::DirectArgs) -> Result<Report> {
    let xs = x_grid(a.xmax, a.nx)?;
    let zs = z_points(&a.z, defaults::Z)?;
    let params: GbdtParams = read_json(&a.params)?;
    let sys = validated_system(params)?;
    let mut rep = Report::new(
        json!({ "params": a.params }),
        json!({ "xmax": a.xmax, "nx": a.nx, "z": z_json(&zs) }),
    );

    let ham = xs.par_iter().map(|&x| sys.hamiltonian(x)).collect::<weylkit::Result<Vec<_>>>()?;
    write_x_table(&out.join("H.csv"), &xs, &ham)?;
    rep.outputs.push("H.csv".into());

    let pairs: Vec<(f64, Complex64)> = xs.iter().flat_map(|&x| zs.iter().map(move |&z| (x, z))).collect();
    let ws = pairs.par_iter().map(|&(x, z)| sys.fundamental(x, z)).collect::<weylkit::Result<Vec<_>>>()?;
    let p = sys.p();
    let mut t = create_table(&out.join("w.csv"), &matrix_header(&["x", "z_re", "z_im"], 2 * p, 2 * p))?;
    for ((x, z), w) in pairs.iter().zip(&ws) {
        let mut row = vec![fmt_f64(*x), fmt_f64(z.re), fmt_f64(z.im)];
        push_matrix(&mut row, w);
        t.row(&row)?;
    }
    t.finish()?;
    rep.outputs.push("w.csv".into());

    if sys.params().d_negative() {
        let pair = sys.weyl_pair();
        let phi = zs.iter().map(|&z| pair.phi(z)).collect::<weylkit::Result<Vec<_>>>()?;
        write_z_table(&out.join("phi.csv"), &zs, &phi)?;
        rep.outputs.push("phi.csv".into());
    } else {
        rep.warnings.push("phi.csv not written: the Weyl function is defined for D < 0 only".into());
    }
    Ok(rep)
}

fn inverse(out: &Path, a: crate::InverseArgs) -> Result<Report> {
    let xs = x_grid(a.xmax, a.nx)?;
    let r: Realization = read_json(&a.realization)?;
    let params = params_from_realization(&r)?;
    write_json(&out.join("params.json"), &params)?;
    let sys = GbdtSystem::new(params)?;
    let ham = xs.par_iter().map(|&x| sys.hamiltonian(x)).collect::<weylkit::Result<Vec<_>>>()?;
    write_x_table(&out.join("H.csv"), &xs, &ham)?;
    let mut rep = Report::new(json!({ "realization": a.realization }), json!({ "xmax": a.xmax, "nx": a.nx }));
    rep.outputs = vec!["params.json".into(), "H.csv".into()];
    Ok(rep)
}

fn recover(out: &Path, a: crate::RecoverArgs) -> Result<Report> {
    let h = positive("h", a.h)?;
    let l = positive("l", a.l)?;
    let eta = positive("eta", a.eta)?;
    let (labels, values, _) = read_matrix_table(File::open(&a.samples).map_err(weylkit::Error::from)?, 1)?;
    let zetas: Vec<f64> = labels.iter().map(|r| r[0]).collect();
    let phi = WeylSampler::tabulated(eta, zetas.clone(), values)?;
    let p = phi.p();
    let reach = (-zetas[0]).min(*zetas.last().unwrap());
    if !(reach > 0.0) {
        return Err(CliError::Usage("the samples must cover an interval around zeta = 0".into()));
    }
    let cut = match a.a {
        Some(v) => positive("a", v)?,
        None => defaults::A.min(reach),
    };

    let (mode, len, x0) = match a.mode {
        SystemKind::Dirac => (AmplitudeMode::Dirac, (l / h).round() as usize, 0.5 * h),
        SystemKind::Canonical => {
            if a.d.len() != p {
                return Err(CliError::Usage(format!("--d needs {p} entries for {p}x{p} samples")));
            }
            let dmax = a.d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            (AmplitudeMode::Canonical { d: a.d.clone() }, (dmax * l / h).ceil() as usize + 1, 0.5 * h)
        }
    };
    let mut opts = AmplitudeOptions::new(mode, h, x0, len);
    opts.eta = eta;
    opts.a = cut;
    opts.mu = positive("mu", a.mu)?;
    opts.tolerance = positive("tolerance", a.tolerance)?;
    let res = amplitude_from_weyl(&phi, &opts)?;

    let mut rep = Report::new(
        json!({ "samples": a.samples }),
        json!({
            "mode": format!("{:?}", a.mode).to_lowercase(),
            "d": a.d, "h": h, "l": l, "eta": eta, "a": cut, "mu": opts.mu,
            "tolerance": opts.tolerance, "dzeta": opts.effective_dzeta(),
        }),
    );
    rep.warnings.extend(res.warnings.iter().cloned());
    write_grid(&out.join("s.csv"), &res.s)?;
    write_grid(&out.join("k.csv"), &res.k)?;
    rep.outputs = vec!["s.csv".into(), "k.csv".into()];
    let k = DifferenceKernel::from_grid(&res.k)?;
    match a.mode {
        SystemKind::Dirac => {
            let pm = match a.potential {
                Potential::Endpoint => PotentialMode::Endpoint,
                Potential::KernelEdge => PotentialMode::KernelEdge,
            };
            let v = recover_potential(&k, l, pm)?;
            write_grid(&out.join("v.csv"), &v)?;
            rep.outputs.push("v.csv".into());
            rep.parameters["potential"] = json!(format!("{:?}", a.potential).to_lowercase());
        }
        SystemKind::Canonical => {
            let data = canonical_from_kernel(&k, &a.d, l)?;
            write_grid(&out.join("H.csv"), &data.hamiltonian)?;
            write_grid(&out.join("beta.csv"), &data.beta)?;
            rep.outputs.extend(["H.csv".into(), "beta.csv".into()]);
            rep.extra = Some(json!({ "factor_residual": data.factor_residual }));
        }
    }
    if let Some(e) = res.truncation_estimate {
        let extra = rep.extra.get_or_insert_with(|| json!({}));
        extra["truncation_estimate"] = json!(e);
    }
    Ok(rep)
}

fn fundamental(out: &Path, a: crate::FundamentalArgs) -> Result<Report> {
    let l = positive("l", a.l)?;
    let zs = z_points(&a.z, defaults::Z)?;
    let g = read_grid_csv(File::open(&a.kernel).map_err(weylkit::Error::from)?)?;
    let k = DifferenceKernel::from_grid(&g)?;
    let data = canonical_from_kernel(&k, &a.d, l)?;
    let ws: Vec<CMat> = zs.par_iter().map(|&z| fundamental_from_factor(&k, &a.d, &data.factor, z)).collect();
    write_z_table(&out.join("w.csv"), &zs, &ws)?;
    let mut rep = Report::new(json!({ "kernel": a.kernel }), json!({ "d": a.d, "l": l, "z": z_json(&zs) }));
    rep.outputs.push("w.csv".into());
    rep.extra = Some(json!({ "factor_residual": data.factor_residual }));
    Ok(rep)
}

fn interpolate(out: &Path, a: crate::InterpolateArgs) -> Result<Report> {
    let zs = z_points(&a.z, defaults::Z_INTERPOLATE)?;
    let eps = parse_decimal(&a.eps)?;
    let mode = match a.mode {
        SeriesKind::General => SeriesMode::General,
        SeriesKind::WeylDirac => SeriesMode::WeylDirac,
        SeriesKind::Shifted => {
            let z0 = a.z0.as_deref().ok_or_else(|| CliError::Usage("shifted mode needs --z0".into()))?;
            SeriesMode::Shifted { z0: parse_complex(z0).map_err(CliError::Usage)? }
        }
    };
    let (labels, values, (rows, cols)) = read_matrix_table(File::open(&a.samples).map_err(weylkit::Error::from)?, 1)?;
    for (q, lab) in labels.iter().enumerate() {
        if lab[0] != q as f64 {
            return Err(weylkit::Error::Parse(format!("sample rows must be q = 0, 1, ...; row {q} has q = {}", lab[0])).into());
        }
    }
    let samples = values.iter().map(ExactMatrix::from_cmat).collect::<weylkit::Result<Vec<_>>>()?;
    let sums = zs
        .iter()
        .map(|&z| partial_sums_exact(&samples, z, a.n, &eps, mode))
        .collect::<weylkit::Result<Vec<_>>>()?;

    let mut rep = Report::new(
        json!({ "samples": a.samples }),
        json!({
            "n": a.n, "eps": a.eps, "mode": format!("{:?}", a.mode).to_lowercase(),
            "z0": a.z0, "z": z_json(&zs),
        }),
    );
    let finals: Vec<CMat> = sums.iter().map(|s| s[a.n].clone()).collect();
    write_z_table(&out.join("value.csv"), &zs, &finals)?;

    // Increments ‖S_N − S_{N−1}‖ stand in for the error, whose reference
    // value is unknown here.
    let mut t = create_table(&out.join("series.csv"), &matrix_header(&["z_re", "z_im", "N", "increment"], rows, cols))?;
    let mut fits = Vec::new();
    for (z, s) in zs.iter().zip(&sums) {
        let mut pts = Vec::new();
        for (n, sn) in s.iter().enumerate() {
            let inc = if n == 0 { fro(sn) } else { fro(&(sn - &s[n - 1])) };
            if n >= 1 && inc > 0.0 {
                pts.push((n, inc));
            }
            let mut row = vec![fmt_f64(z.re), fmt_f64(z.im), n.to_string(), fmt_f64(inc)];
            push_matrix(&mut row, sn);
            t.row(&row)?;
        }
        match decay_estimate(&pts) {
            Ok(fit) => {
                if !fit.converging {
                    rep.warnings.push(format!("series at z = {z} is not converging (increment exponent {:.3})", fit.exponent));
                }
                fits.push(json!({ "z": [z.re, z.im], "increment_exponent": fit.exponent, "converging": fit.converging }));
            }
            // Fewer than four nonzero increments: the series terminated.
            Err(_) => fits.push(json!({ "z": [z.re, z.im], "increment_exponent": null, "converging": true })),
        }
    }
    t.finish()?;
    rep.outputs = vec!["value.csv".into(), "series.csv".into()];
    rep.extra = Some(json!(fits));
    Ok(rep)
}

#[derive(Deserialize)]
struct KernelFixture {
    file: PathBuf,
    d: Vec<f64>,
    l: f64,
}

#[derive(Deserialize)]
struct CheckIndex {
    #[serde(default)]
    params: Vec<PathBuf>,
    #[serde(default)]
    realizations: Vec<PathBuf>,
    #[serde(default)]
    kernels: Vec<KernelFixture>,
}

fn label(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn check(out: &Path, a: crate::CheckArgs) -> Result<Report> {
    let dir = a.fixtures.unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    let index: CheckIndex = read_json(&dir.join(defaults::CHECK_INDEX))?;
    let mut rows: Vec<CheckRow> = Vec::new();
    for p in &index.params {
        let params: GbdtParams = read_json(&dir.join(p))?;
        rows.extend(check_params(&label(p), &params));
    }
    for r in &index.realizations {
        let real: Realization = read_json(&dir.join(r))?;
        rows.extend(check_realization(&label(r), &real));
    }
    for kf in &index.kernels {
        let g = read_grid_csv(File::open(dir.join(&kf.file)).map_err(weylkit::Error::from)?)?;
        rows.extend(check_kernel(&label(&kf.file), &DifferenceKernel::from_grid(&g)?, &kf.d, kf.l));
    }
    rows.extend(check_coefficients());
    rows.extend(check_free_dirac());

    let mut t = create_table(&out.join("check.csv"), &["name".into(), "value".into(), "tolerance".into(), "status".into()])?;
    println!("{:<6}  {:>12}  {:>9}  name", "status", "value", "tolerance");
    for r in &rows {
        let status = if r.passed { "pass" } else { "FAIL" };
        println!("{status:<6}  {:>12.3e}  {:>9.1e}  {}", r.value, r.tolerance, r.name);
        t.row(&[r.name.clone(), fmt_f64(r.value), fmt_f64(r.tolerance), status.into()])?;
    }
    t.finish()?;
    let failed = rows.iter().filter(|r| !r.passed).count();
    println!("{} checks, {} failed", rows.len(), failed);

    let mut rep = Report::new(json!({ "fixtures": dir.join(defaults::CHECK_INDEX) }), json!({}));
    rep.outputs.push("check.csv".into());
    rep.extra = Some(json!({ "checks": rows.len(), "failed": failed }));
    rep.exit = u8::from(failed > 0);
    Ok(rep)
}
