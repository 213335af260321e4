//! One function per subcommand. Each returns its artifact in the formats it
//! supports and a one-line summary.

use rhop_core::dets::{self, RelDetJob};
use rhop_core::io;
use rhop_core::measures::{self, Contour, WeightSpec};
use rhop_core::opcircle;
use rhop_core::opline::{self, JacobiMatrix};
use rhop_core::rhp::{self, RhSolution};
use rhop_core::verify::{self, VerifyOptions};
use rhop_core::{Error, Precision, Result};
use serde::Serialize;

use crate::config::{Command, Format, RunConfig};

pub struct Output {
    pub csv: Option<Vec<u8>>,
    pub json: Option<String>,
    pub summary: String,
    /// Set when the command ran but its checks failed.
    pub failed: bool,
}

impl Output {
    fn new(summary: String) -> Self {
        Output {
            csv: None,
            json: None,
            summary,
            failed: false,
        }
    }

    fn json<T: Serialize>(mut self, value: &T) -> Result<Self> {
        self.json = Some(io::to_json(value)? + "\n");
        Ok(self)
    }

    fn csv<F: FnOnce(&mut Vec<u8>) -> Result<()>>(mut self, f: F) -> Result<Self> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.csv = Some(buf);
        Ok(self)
    }

    /// The artifact in the requested format, or the command's natural one.
    pub fn render(&self, command: Command, format: Option<Format>) -> Result<Vec<u8>> {
        let unsupported = |f: &str| Error::InvalidInput(format!("{} does not emit {f}", command.name()));
        match format {
            Some(Format::Csv) => self.csv.clone().ok_or_else(|| unsupported("CSV")),
            Some(Format::Json) => self.json.clone().map(String::into_bytes).ok_or_else(|| unsupported("JSON")),
            None => Ok(self
                .csv
                .clone()
                .or_else(|| self.json.clone().map(String::into_bytes))
                .unwrap_or_default()),
        }
    }
}

/// The contour a command works on, when it has one.
fn command_contour(c: Command) -> Option<Contour> {
    match c {
        Command::Oprl | Command::Hankel | Command::Jacobi | Command::Toda | Command::HankelLimit => Some(Contour::Line),
        Command::Opuc
        | Command::Toeplitz
        | Command::Cmv
        | Command::Schur
        | Command::Wall
        | Command::Szego
        | Command::TinvDecay => Some(Contour::Circle),
        _ => None,
    }
}

fn parse_weight(cfg: &RunConfig, text: &str) -> Result<WeightSpec> {
    let want = command_contour(cfg.command);
    let w = WeightSpec::parse_on(text, want.unwrap_or(cfg.contour))?;
    if let Some(c) = want {
        if w.contour != c {
            return Err(Error::InvalidInput(format!(
                "{} needs a {c} weight, but {w} lives on the {}",
                cfg.command.name(),
                w.contour
            )));
        }
    }
    Ok(w)
}

fn weight(cfg: &RunConfig) -> Result<WeightSpec> {
    let text = cfg
        .weight
        .as_deref()
        .ok_or_else(|| Error::InvalidInput(format!("{} needs --weight", cfg.command.name())))?;
    parse_weight(cfg, text)
}

fn weight_or(cfg: &RunConfig, default: &str) -> Result<WeightSpec> {
    parse_weight(cfg, cfg.weight.as_deref().unwrap_or(default))
}

fn circle_moments(cfg: &RunConfig, w: &WeightSpec, order: usize) -> Result<measures::MomentData> {
    if cfg.precision == Precision::Exact {
        return measures::circle_moments_exact(w, order, cfg.digits)
            .ok_or_else(|| Error::InvalidInput(format!("{w} has no rational moments; use double or extended")));
    }
    measures::circle_moments(w, order)
}

pub fn run(cfg: &RunConfig) -> Result<Output> {
    match cfg.command {
        Command::Moments => moments(cfg),
        Command::Oprl => oprl(cfg),
        Command::Opuc => opuc(cfg),
        Command::Hankel | Command::Toeplitz => determinants(cfg),
        Command::Jacobi => jacobi(cfg),
        Command::Cmv => cmv(cfg),
        Command::Toda => toda(cfg),
        Command::Schur => schur(cfg),
        Command::Wall => wall(cfg),
        Command::RhpSolve => rhp_solve(cfg),
        Command::RhpVerify => rhp_verify(cfg),
        Command::Onepoint => onepoint(cfg),
        Command::Reldet => reldet(cfg),
        Command::Szego => szego(cfg),
        Command::HankelLimit => hankel_limit(cfg),
        Command::TinvDecay => tinv_decay(cfg),
        Command::VerifyAll => verify_all(cfg),
    }
}

#[derive(Serialize)]
struct MomentsJson {
    contour: Contour,
    precision: Precision,
    /// `[re, im]` per index
    moments: Vec<[f64; 2]>,
}

fn moments(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(10);
    let m = match w.contour {
        Contour::Circle => circle_moments(cfg, &w, n)?,
        Contour::Line => measures::line_moments(&w, n)?,
    };
    let json = MomentsJson {
        contour: m.contour,
        precision: m.precision,
        moments: m.values.iter().map(|v| [v.re.to_f64(), v.im.to_f64()]).collect(),
    };
    Output::new(format!("{w}: moment 0 = {}, {} moments", m.re(0), n + 1))
        .csv(|b| io::write_moments_csv(&m, b))?
        .json(&json)
}

fn oprl(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(10);
    let rec = match cfg.precision {
        Precision::Double => opline::recurrence_from_measure(&w, n + 1)?,
        p => opline::recurrence_from_moments(&measures::line_moments(&w, 2 * n + 2)?, n + 1, p)?,
    };
    let summary = format!("{w}: a_{n} = {}, k_{n} = {:e} (invariant residual {:e})", rec.a[n], rec.k[n], rec.invariant_residual());
    Output::new(summary).csv(|b| io::write_recurrence_csv(&rec, b))?.json(&rec)
}

fn verblunsky_output(w: &WeightSpec, v: &opcircle::VerblunskySeq) -> Result<Output> {
    let a0 = v.alpha.first().copied().unwrap_or_default();
    let summary = format!("{w}: alpha_0 = {} (invariant residual {:e})", a0, v.invariant_residual());
    Output::new(summary).csv(|b| io::write_verblunsky_csv(v, b))?.json(v)
}

fn opuc(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(10);
    let v = opcircle::verblunsky_levinson(&circle_moments(cfg, &w, n)?, n)?;
    verblunsky_output(&w, &v)
}

fn schur(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(10);
    let v = opcircle::schur_geronimus(&circle_moments(cfg, &w, n + 9)?, n)?;
    verblunsky_output(&w, &v)
}

#[derive(Serialize)]
struct DetRow {
    n: usize,
    ln_det: f64,
}

fn determinants(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(10);
    let dets = match w.contour {
        Contour::Line => opline::hankel_dets(&measures::line_moments(&w, 2 * n)?, n, cfg.precision)?,
        Contour::Circle => opcircle::toeplitz_dets(&circle_moments(cfg, &w, n)?, n, cfg.precision)?,
    };
    let rows: Vec<DetRow> = dets.iter().enumerate().map(|(n, d)| DetRow { n, ln_det: d.ln.to_f64() }).collect();
    let idx: Vec<f64> = (0..rows.len()).map(|k| k as f64).collect();
    let vals: Vec<f64> = rows.iter().map(|r| r.ln_det).collect();
    let tier = dets.last().map(|d| d.precision).unwrap_or(cfg.precision);
    Output::new(format!("{w}: ln det of order {n} = {} ({tier})", vals[n]))
        .csv(|b| io::write_series_csv(&["n", "ln_det"], &[&idx, &vals], b))?
        .json(&rows)
}

fn jacobi(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(10).max(1);
    let l = opline::jacobi_from_recurrence(&opline::recurrence_from_measure(&w, n)?, n)?;
    let mu = opline::spectral_measure(&l)?;
    let summary = format!("{w}: {n}×{n} Jacobi matrix, eigenvalues in [{}, {}]", mu.atoms[0], mu.atoms[n - 1]);
    Output::new(summary).csv(|b| io::write_discrete_measure_csv(&mu, b))?.json(&l)
}

fn cmv(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(8).max(1);
    let v = opcircle::verblunsky_levinson(&circle_moments(cfg, &w, n)?, n)?;
    let c = opcircle::cmv_build(&v, n)?;
    Output::new(format!("{w}: {n}×{n} CMV section, off-band max {:e}", c.off_band_max())).json(&c.bands())
}

#[derive(Serialize)]
struct TodaJson {
    size: usize,
    t: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    ode_max_diff: f64,
    eigenvalue_drift: f64,
}

fn toda(cfg: &RunConfig) -> Result<Output> {
    let l0 = match &cfg.weight {
        Some(_) => {
            let w = weight(cfg)?;
            let size = cfg.size.unwrap_or(5);
            opline::jacobi_from_recurrence(&opline::recurrence_from_measure(&w, size)?, size)?
        }
        None => {
            let size = cfg.size.unwrap_or(2);
            JacobiMatrix::new(vec![0.0; size], vec![1.0; size - 1])?
        }
    };
    let s = opline::toda_flow_spectral(&l0, cfg.t)?;
    let o = opline::toda_flow_ode(&l0, cfg.t, 1e-3)?;
    let drift = s
        .eigenvalues()
        .iter()
        .zip(l0.eigenvalues())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let out = TodaJson {
        size: l0.n,
        t: cfg.t,
        a: s.diag.clone(),
        b: s.offdiag.clone(),
        ode_max_diff: s.max_diff(&o),
        eigenvalue_drift: drift,
    };
    Output::new(format!("a_0({}) = {} (RK4 difference {:e})", cfg.t, out.a[0], out.ode_max_diff)).json(&out)
}

fn wall(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(8).max(1);
    let v = opcircle::verblunsky_levinson(&circle_moments(cfg, &w, n)?, n)?;
    let r = opcircle::wall_pinter_nevai(&v, n)?;
    Output::new(format!("{w}: Pinter-Nevai residuals {:e}, {:e}", r.residual_star, r.residual_phi)).json(&r)
}

fn rhp_summary(r: &rhp::RhReport) -> String {
    format!(
        "{} n = {}: jump residual {:e}, det residual {:e}",
        r.contour, r.n, r.jump_residual, r.det_residual
    )
}

fn rhp_solve(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(4);
    let modes = match w.contour {
        Contour::Circle => Some(cfg.modes.unwrap_or(verify::SOLVER_MODES)),
        Contour::Line => cfg.modes,
    };
    let r = rhp::report(&w, n, modes)?;
    let points = rhp::off_contour_points(&w, 16)?;
    let values: Vec<rhp::Mat2> = match w.contour {
        Contour::Circle => {
            let s = rhp::solve_rhp_circle(&w, n, modes.unwrap())?;
            points.iter().map(|z| s.eval(*z)).collect::<Result<_>>()?
        }
        Contour::Line => {
            let x = rhp::assemble_x(&w, n)?;
            points.iter().map(|z| x.eval(*z)).collect::<Result<_>>()?
        }
    };
    Output::new(rhp_summary(&r))
        .csv(|b| io::write_matrix_evals_csv(&points, &values, b))?
        .json(&r)
}

#[derive(Serialize)]
struct RhpVerifyJson {
    #[serde(flatten)]
    report: rhp::RhReport,
    transfer_identity: f64,
}

fn rhp_verify(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(4);
    let report = rhp::report(&w, n, None)?;
    let off = rhp::off_contour_points(&w, 16)?;
    let transfer_identity = match w.contour {
        Contour::Line => rhp::transfer_identity_line(&w, n, &off)?,
        Contour::Circle => rhp::transfer_identity_circle(&w, n, &off)?,
    };
    let summary = format!("{}, transfer identity {:e}", rhp_summary(&report), transfer_identity);
    Output::new(summary).json(&RhpVerifyJson { report, transfer_identity })
}

fn onepoint(cfg: &RunConfig) -> Result<Output> {
    let w = weight(cfg)?;
    let n = cfg.n.unwrap_or(5);
    let f = dets::one_point_fn(&w, n, None)?;
    let x = if w.contour == Contour::Circle { "theta" } else { "x" };
    let mut out = Output::new(format!(
        "{w}: integral of R = {} (n + 1 = {}), CD residual {:e}",
        f.integral,
        n + 1,
        f.cd_residual
    ))
    .csv(|b| io::write_series_csv(&[x, "r", "cd"], &[&f.grid, &f.values, &f.christoffel_darboux], b))?
    .json(&f)?;
    out.failed = f.flagged;
    Ok(out)
}

fn reldet(cfg: &RunConfig) -> Result<Output> {
    let w1 = weight(cfg)?;
    let default2 = match w1.contour {
        Contour::Circle => "lebesgue",
        Contour::Line => "gauss",
    };
    let w2 = parse_weight(cfg, cfg.weight2.as_deref().unwrap_or(default2))?;
    let n = cfg.n.unwrap_or(10);
    let r = dets::relative_logdet_report(&RelDetJob::new(w1.clone(), w2.clone(), n)?.with_nodes(cfg.tnodes))?;
    Output::new(format!("ln det ratio for {w1} over {w2}, n = {n}: {} (brute force {}, error {:e})", r.rhs, r.lhs, r.abs_err))
        .json(&r)
}

#[derive(Serialize)]
struct SzegoJson {
    weight: String,
    n: usize,
    prediction: f64,
    measured: f64,
    abs_err: f64,
    table: Vec<dets::SzegoRow>,
}

fn szego(cfg: &RunConfig) -> Result<Output> {
    let default = format!("expcos:s={}", cfg.s);
    let w = weight_or(cfg, &default)?;
    let n = cfg.n.unwrap_or(30);
    let ns: Vec<usize> = (0..=n).collect();
    let table = dets::szego_table(&w, &ns, cfg.digits)?;
    let last = table.last().unwrap().clone();
    let cols: Vec<Vec<f64>> = vec![
        table.iter().map(|r| r.n as f64).collect(),
        table.iter().map(|r| r.ln_delta).collect(),
        table.iter().map(|r| r.prediction).collect(),
        table.iter().map(|r| r.error).collect(),
    ];
    let out = SzegoJson {
        weight: w.to_string(),
        n,
        prediction: last.prediction,
        measured: last.ln_delta,
        abs_err: last.error.abs(),
        table,
    };
    Output::new(format!("{w}: ln det of order {n} = {}, prediction {}, error {:e}", out.measured, out.prediction, out.abs_err))
        .csv(|b| {
            let c: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
            io::write_series_csv(&["n", "ln_delta", "prediction", "error"], &c, b)
        })?
        .json(&out)
}

fn hankel_limit(cfg: &RunConfig) -> Result<Output> {
    let w = weight_or(cfg, "gaussbump:c=0.5")?;
    let n = cfg.n.unwrap_or(16);
    let ns: Vec<usize> = (n.min(4)..=n).collect();
    let rows = dets::hankel_strong_limit_check(&w, &ns)?;
    let cols: Vec<Vec<f64>> = vec![
        rows.iter().map(|r| r.n as f64).collect(),
        rows.iter().map(|r| r.lhs).collect(),
        rows.iter().map(|r| r.rhs).collect(),
        rows.iter().map(|r| r.diff).collect(),
        rows.iter().map(|r| r.leading).collect(),
    ];
    let last = rows.last().unwrap();
    Output::new(format!("{w}: LHS - RHS at n = {} is {:e}", last.n, last.diff))
        .csv(|b| {
            let c: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
            io::write_series_csv(&["n", "lhs", "rhs", "diff", "leading"], &c, b)
        })?
        .json(&rows)
}

fn tinv_decay(cfg: &RunConfig) -> Result<Output> {
    let w = weight_or(cfg, "cos:c=-0.8")?;
    let n = cfg.n.unwrap_or(16);
    let d = dets::toeplitz_inverse_decay(&w, n)?;
    Output::new(format!(
        "{w}: max error {:e} at {:?}, fitted rate {}",
        d.max_err, d.max_at, d.rate
    ))
    .csv(|b| io::write_decay_csv(&d.err, b))?
    .json(&d)
}

fn verify_all(cfg: &RunConfig) -> Result<Output> {
    let opts = VerifyOptions {
        seed: cfg.seed,
        ..Default::default()
    };
    let r = verify::verify_all_with(cfg.suite, &opts);
    for c in &r.criteria {
        log::info!("{}", c.line());
    }
    let passed = r.criteria.iter().filter(|c| c.passed).count();
    let mut out = Output::new(format!(
        "verify-all {}: {passed}/{} criteria passed in {:.2} s",
        match cfg.suite {
            verify::Suite::Fast => "fast",
            verify::Suite::Full => "full",
        },
        r.criteria.len(),
        r.seconds
    ))
    .json(&r)?;
    out.failed = !r.passed;
    Ok(out)
}
