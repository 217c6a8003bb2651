//! Command-line front end: run configuration, result tables and the
//! subcommands of the `boseloops` binary.
//!
//! Every subcommand maps a [`RunConfig`] to a [`ResultTable`]; κ values are
//! processed in parallel and rows are assembled in input order, so the output
//! does not depend on the thread count.

mod config;
mod table;

pub use config::{
    Format, ModelTag, OutputSpec, PointPair, RunConfig, StateKind, StateSpec, TaskSpec, TrapSpec, Units, DEFAULT_LADDER,
};
pub use table::{format_float, Cell, ResultTable};

use rayon::prelude::*;

use crate::aniso::{additional_q2d_at, classify, meso_q1d_at, meso_q1d_prediction, noncondensate_q2d_limit};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::kernels::{TrapGeometry, TrapModel};
use crate::rdm::{
    condensate_limit, local_density_at, loop_decompose_at, noncondensate_at, open_trap_rdm, open_trap_series, rdm_at,
    rdm_rescaled_at, theorem2_limit, DEFAULT_CHI,
};
use crate::specfun::PhysicalConstants;
use crate::thermo::{
    gbec_band_sum_at, ln_gap_asymptotic, nu_critical_trap, nu_m, nu_rescaled, occupation_at, regime, solve_mu,
    CanonicalTarget, GrandCanonicalPoint, Regime,
};

/// Subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Thermodynamics per κ: μ̄, gap, ground occupation, g-BEC band, critical numbers.
    Thermo,
    /// Chemical-potential inversion with asymptotic cross-check.
    MuSolve,
    /// Reduced density matrix at point pairs.
    Rdm,
    /// δ-scaled density profile against the open-trap closed forms.
    Profile,
    /// Short/mesoscopic/macroscopic loop decomposition.
    Loops,
    /// Anisotropic regime and mesoscopic-loop checks.
    AnisoCheck,
}

impl Command {
    /// Name as typed on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Command::Thermo => "thermo",
            Command::MuSolve => "mu-solve",
            Command::Rdm => "rdm",
            Command::Profile => "profile",
            Command::Loops => "loops",
            Command::AnisoCheck => "aniso-check",
        }
    }
}

/// Runs a subcommand.
pub fn run(cmd: Command, cfg: &RunConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let mut table = match cmd {
        Command::Thermo => cmd_thermo(cfg),
        Command::MuSolve => cmd_mu_solve(cfg),
        Command::Rdm => cmd_rdm(cfg),
        Command::Profile => cmd_profile(cfg),
        Command::Loops => cmd_loops(cfg),
        Command::AnisoCheck => cmd_aniso_check(cfg),
    }?;
    table.meta("command", cmd.name());
    table.meta("input", cfg.echo());
    table.meta("software", format!("boseloops {}", env!("CARGO_PKG_VERSION")));
    table.meta("units", cfg.units.name());
    if let Some(regimes) = regime_summary(cfg)? {
        table.meta("regime", regimes);
    }
    let mut laws: Vec<String> = table
        .rows
        .iter()
        .flatten()
        .filter(|c| matches!(c, Cell::Divergent(_)))
        .map(Cell::to_csv)
        .collect();
    laws.sort();
    laws.dedup();
    if !laws.is_empty() {
        table.meta("divergences", laws.join("; "));
    }
    Ok(table)
}

/// `kappa=<κ>:<regime>` for every κ of the ladder, when ν is given.
fn regime_summary(cfg: &RunConfig) -> Result<Option<String>> {
    if cfg.state.mu.is_some() {
        return Ok(None);
    }
    let cx = ctx(cfg)?;
    let mut parts = Vec::new();
    for &k in &cx.ladder {
        let trap = cfg.trap.model_at(k, cx.consts)?;
        let nu = match cfg.state.resolve(&trap)? {
            StateKind::Number(nu) => nu,
            StateKind::Chemical(_) => return Ok(None),
        };
        let reg = regime(&CanonicalTarget::new(cfg.state.beta, nu)?, &trap)?;
        parts.push(format!("kappa={}:{}", k, regime_name(reg)));
    }
    Ok(Some(parts.join(" ")))
}

/// Writes a table in the requested format.
pub fn render(table: &ResultTable, format: Format) -> Result<String> {
    match format {
        Format::Csv => table.to_csv_string(),
        Format::Json => table.to_json_string().map(|mut s| {
            s.push('\n');
            s
        }),
    }
}

struct Ctx {
    consts: PhysicalConstants,
    ladder: Vec<f64>,
}

fn ctx(cfg: &RunConfig) -> Result<Ctx> {
    Ok(Ctx {
        consts: cfg.units.constants()?,
        ladder: cfg.trap.ladder()?,
    })
}

/// State of the run at one κ: the grand-canonical point and the target ν.
fn state_at(cfg: &RunConfig, trap: &TrapModel) -> Result<(GrandCanonicalPoint, f64, Option<usize>)> {
    let beta = cfg.state.beta;
    match cfg.state.resolve(trap)? {
        config::StateKind::Chemical(mu) => {
            let pt = GrandCanonicalPoint::new(beta, mu, *trap)?;
            let nu = nu_rescaled(&pt, &cfg.series)?;
            Ok((pt, nu, None))
        }
        config::StateKind::Number(nu) => {
            let sol = solve_mu(&CanonicalTarget::new(beta, nu)?, trap, &cfg.series)?;
            Ok((sol.point, nu, Some(sol.iterations)))
        }
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Subcritical => "subcritical",
        Regime::Critical => "critical",
        Regime::Supercritical => "supercritical",
        Regime::Coexistence => "coexistence",
    }
}

/// Maps every κ of the ladder to a block of rows, in parallel, preserving order.
fn per_kappa<F>(cx: &Ctx, f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(f64) -> Result<Vec<Vec<Cell>>> + Sync,
{
    let blocks = cx.ladder.par_iter().map(|&k| f(k)).collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

fn fill(table: &mut ResultTable, rows: Vec<Vec<Cell>>) -> Result<()> {
    for r in rows {
        table.push(r)?;
    }
    Ok(())
}

fn is_q1d(trap: &TrapModel) -> bool {
    matches!(trap.geometry, TrapGeometry::Quasi1D { .. })
}

fn pairs(cfg: &RunConfig, d: usize) -> Result<Vec<PointPair>> {
    if cfg.task.pairs.is_empty() {
        return Ok(vec![PointPair {
            x: vec![0.0; d],
            y: vec![0.0; d],
        }]);
    }
    for p in &cfg.task.pairs {
        if p.x.len() != d || p.y.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.x.len().max(p.y.len()),
            });
        }
    }
    Ok(cfg.task.pairs.clone())
}

fn dim_of(cfg: &RunConfig, cx: &Ctx) -> Result<usize> {
    Ok(cfg.trap.model_at(cx.ladder[0], cx.consts)?.dim())
}

fn point_columns(d: usize, prefix: &str) -> Vec<String> {
    (1..=d).map(|j| format!("{prefix}{j}")).collect()
}

fn header(fixed_front: &[&str], points: &[String], fixed_back: &[&str]) -> ResultTable {
    let cols: Vec<String> = fixed_front
        .iter()
        .map(|s| s.to_string())
        .chain(points.iter().cloned())
        .chain(fixed_back.iter().map(|s| s.to_string()))
        .collect();
    let refs: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
    ResultTable::new(&refs)
}

/// `thermo`: `(κ, ν, μ̄, E₀−μ̄, ln(E₀−μ̄), occupation(0), g-BEC band, ν_c, ν_m, regime)`.
pub fn cmd_thermo(cfg: &RunConfig) -> Result<ResultTable> {
    let cx = ctx(cfg)?;
    let mut t = ResultTable::new(&[
        "kappa",
        "nu",
        "mu",
        "gap",
        "ln_gap",
        "occupation_ground",
        "gbec_band",
        "nu_c",
        "nu_m",
        "regime",
    ]);
    let rows = per_kappa(&cx, |k| {
        let trap = cfg.trap.model_at(k, cx.consts)?;
        let (pt, nu, _) = state_at(cfg, &trap)?;
        let d = trap.dim();
        let occ = occupation_at(&pt, &vec![0; d])?;
        let band = gbec_band_sum_at(&pt, cfg.task.epsilon, &cfg.series)?;
        let nuc: Cell = nu_critical_trap(pt.beta, &trap)?.into();
        let num: Cell = if is_q1d(&trap) {
            nu_m(pt.beta, &trap)?.into()
        } else {
            Cell::text("n/a")
        };
        let reg = regime(&CanonicalTarget::new(pt.beta, nu)?, &trap)?;
        Ok(vec![vec![
            k.into(),
            nu.into(),
            pt.mu.into(),
            pt.gap().into(),
            pt.ln_gap().into(),
            occ.into(),
            band.into(),
            nuc,
            num,
            Cell::text(regime_name(reg)),
        ]])
    })?;
    fill(&mut t, rows)?;
    t.meta("epsilon", format_float(cfg.task.epsilon));
    Ok(t)
}

/// `mu-solve`: solver output and the leading-order asymptotic gap.
pub fn cmd_mu_solve(cfg: &RunConfig) -> Result<ResultTable> {
    let cx = ctx(cfg)?;
    if cfg.state.mu.is_some() {
        return Err(Error::Config("mu-solve needs nu or eta, not mu".into()));
    }
    let mut t = ResultTable::new(&[
        "kappa",
        "nu",
        "mu",
        "ln_gap",
        "iterations",
        "relative_residual",
        "ln_gap_asymptotic",
        "asymptotic_relative_deviation",
        "regime",
    ]);
    let rows = per_kappa(&cx, |k| {
        let trap = cfg.trap.model_at(k, cx.consts)?;
        let (pt, nu, it) = state_at(cfg, &trap)?;
        let achieved = nu_rescaled(&pt, &cfg.series)?;
        let target = CanonicalTarget::new(pt.beta, nu)?;
        let (asym, dev): (Cell, Cell) = match ln_gap_asymptotic(&target, &trap) {
            Ok(g) => (g.into(), ((pt.ln_gap() - g).exp() - 1.0).into()),
            Err(Error::Regime(_)) => (Cell::text("n/a"), Cell::text("n/a")),
            Err(e) => return Err(e),
        };
        Ok(vec![vec![
            k.into(),
            nu.into(),
            pt.mu.into(),
            pt.ln_gap().into(),
            (it.unwrap_or(0) as f64).into(),
            ((achieved - nu) / nu).into(),
            asym,
            dev,
            Cell::text(regime_name(regime(&target, &trap)?)),
        ]])
    })?;
    fill(&mut t, rows)?;
    Ok(t)
}

/// `rdm`: loop-form RDM, rescaled RDM, non-condensate part and open-trap limit.
pub fn cmd_rdm(cfg: &RunConfig) -> Result<ResultTable> {
    let cx = ctx(cfg)?;
    let d = dim_of(cfg, &cx)?;
    let ps = pairs(cfg, d)?;
    let mut pts = point_columns(d, "x");
    pts.extend(point_columns(d, "y"));
    let mut t = header(&["kappa"], &pts, &["rdm", "rdm_rescaled", "noncondensate", "open_trap"]);
    let rows = per_kappa(&cx, |k| {
        let trap = cfg.trap.model_at(k, cx.consts)?;
        let (pt, nu, _) = state_at(cfg, &trap)?;
        let mut out = Vec::new();
        for p in &ps {
            let mut row: Vec<Cell> = vec![k.into()];
            row.extend(p.x.iter().chain(&p.y).map(|&v| Cell::from(v)));
            row.push(rdm_at(&p.x, &p.y, &pt, &cfg.series)?.into());
            row.push(rdm_rescaled_at(&p.x, &p.y, &pt, &cfg.series)?.into());
            row.push(noncondensate_at(&p.x, &p.y, &pt, &cfg.series)?.into());
            row.push(if trap.is_isotropic() {
                open_trap_rdm(&p.x, &p.y, pt.beta, nu, d, &cx.consts, &cfg.series)?.into()
            } else {
                Cell::text("n/a")
            });
            out.push(row);
        }
        Ok(out)
    })?;
    fill(&mut t, rows)?;
    Ok(t)
}

/// `profile`: δ-scaled density, closed-form prediction and relative deviation.
pub fn cmd_profile(cfg: &RunConfig) -> Result<ResultTable> {
    let cx = ctx(cfg)?;
    let d = dim_of(cfg, &cx)?;
    let delta = cfg
        .task
        .delta
        .ok_or_else(|| Error::Config("profile needs task.delta".into()))?;
    if cfg.task.grid.is_empty() {
        return Err(Error::Config("profile needs a nonempty task.grid".into()));
    }
    for p in &cfg.task.grid {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
        if delta > 0.0 && p.iter().all(|&v| v == 0.0) {
            return Err(Error::Origin);
        }
    }
    let rescaled = cfg.task.rescaled;
    let mut t = header(
        &["kappa"],
        &point_columns(d, "x"),
        &["value", "predicted", "relative_deviation"],
    );
    let rows = per_kappa(&cx, |k| {
        let trap = cfg.trap.model_at(k, cx.consts)?;
        if !trap.is_isotropic() {
            return Err(Error::Model("profiles are defined for isotropic traps".into()));
        }
        let (pt, nu, _) = state_at(cfg, &trap)?;
        cfg.task
            .grid
            .par_iter()
            .map(|x| {
                let v = local_density_at(x, delta, &pt, rescaled, &cfg.series)?;
                let pred = theorem2_limit(x, delta, pt.beta, nu, d, &cx.consts, rescaled)?;
                let dev: Cell = match pred {
                    ExtendedReal::Finite(p) if p != 0.0 => (v / p - 1.0).into(),
                    _ => Cell::text("n/a"),
                };
                let mut row: Vec<Cell> = vec![k.into()];
                row.extend(x.iter().map(|&c| Cell::from(c)));
                row.push(v.into());
                row.push(pred.into());
                row.push(dev);
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    fill(&mut t, rows)?;
    t.meta("delta", format_float(delta));
    t.meta("rescaled", rescaled.to_string());
    Ok(t)
}

/// `loops`: loop decomposition per κ and pair, with the predicted limits.
pub fn cmd_loops(cfg: &RunConfig) -> Result<ResultTable> {
    let cx = ctx(cfg)?;
    let d = dim_of(cfg, &cx)?;
    let ps = pairs(cfg, d)?;
    let mut t = ResultTable::new(&[
        "kappa",
        "pair",
        "short_cutoff",
        "ln_macro_cutoff",
        "short_sum",
        "meso_sum",
        "macro_sum",
        "total",
        "ground_term",
        "short_noncondensate",
        "meso_noncondensate",
        "macro_noncondensate",
        "macro_rescaled",
        "predicted_macro_rescaled",
        "predicted_short",
        "predicted_meso",
    ]);
    let rows = per_kappa(&cx, |k| {
        let trap = cfg.trap.model_at(k, cx.consts)?;
        let (pt, nu, _) = state_at(cfg, &trap)?;
        let target = CanonicalTarget::new(pt.beta, nu)?;
        let reg = regime(&target, &trap)?;
        let mut out = Vec::new();
        for (i, p) in ps.iter().enumerate() {
            let dec = loop_decompose_at(&p.x, &p.y, &pt, &cfg.series, DEFAULT_CHI)?;
            let half_vol = (0.5 * trap.ln_kappa_volume()).exp();
            let r2: f64 = p.x.iter().zip(&p.y).map(|(a, b)| (a - b) * (a - b)).sum();
            let (pred_macro, pred_short, pred_meso): (Cell, Cell, Cell) = match trap.geometry {
                TrapGeometry::Isotropic { d, .. } => {
                    let macro_pred: Cell = match reg {
                        Regime::Supercritical if d >= 2 => condensate_limit(pt.beta, nu, d, &cx.consts)?.into(),
                        _ => 0.0.into(),
                    };
                    let short_pred: Cell = match reg {
                        Regime::Subcritical => {
                            open_trap_rdm(&p.x, &p.y, pt.beta, nu, d, &cx.consts, &cfg.series)?.into()
                        }
                        _ if d == 3 => open_trap_series(r2, pt.beta, 0.0, 3, &cx.consts, &cfg.series)?.into(),
                        _ => open_trap_rdm(&p.x, &p.y, pt.beta, nu, d, &cx.consts, &cfg.series)?.into(),
                    };
                    (macro_pred, short_pred, 0.0.into())
                }
                TrapGeometry::Quasi2D { .. } => {
                    let meso: Cell = match reg {
                        Regime::Subcritical => 0.0.into(),
                        _ => crate::aniso::additional_q2d_prediction(pt.beta, &trap)?.into(),
                    };
                    (Cell::text("n/a"), Cell::text("n/a"), meso)
                }
                TrapGeometry::Quasi1D { .. } => (Cell::text("n/a"), Cell::text("n/a"), Cell::text("n/a")),
            };
            out.push(vec![
                k.into(),
                (i as f64).into(),
                (dec.short_cutoff as f64).into(),
                dec.ln_macro_cutoff.into(),
                dec.short_sum.into(),
                dec.meso_sum.into(),
                dec.macro_sum.into(),
                dec.total.into(),
                dec.ground_term.into(),
                dec.short_noncondensate.into(),
                dec.meso_noncondensate.into(),
                dec.macro_noncondensate.into(),
                (dec.macro_sum * half_vol).into(),
                pred_macro,
                pred_short,
                pred_meso,
            ]);
        }
        Ok(out)
    })?;
    fill(&mut t, rows)?;
    Ok(t)
}

/// `aniso-check`: regime, critical numbers and mesoscopic-loop checks.
pub fn cmd_aniso_check(cfg: &RunConfig) -> Result<ResultTable> {
    let cx = ctx(cfg)?;
    if cfg.trap.model == ModelTag::Isotropic {
        return Err(Error::Config("aniso-check needs a quasi1d or quasi2d trap".into()));
    }
    let ps = pairs(cfg, 3)?;
    let mut t = ResultTable::new(&[
        "kappa",
        "pair",
        "eta",
        "regime",
        "nu_c",
        "nu_m",
        "ln_meso",
        "ln_meso_predicted",
        "meso_exponent",
        "ln_prefactor_wavelength",
        "ln_prefactor_natural",
        "additional_term",
        "additional_first_part",
        "additional_second_part",
        "additional_predicted",
        "noncondensate",
        "noncondensate_predicted",
    ]);
    let rows = per_kappa(&cx, |k| {
        let trap = cfg.trap.model_at(k, cx.consts)?;
        let (pt, nu, _) = state_at(cfg, &trap)?;
        let target = CanonicalTarget::new(pt.beta, nu)?;
        let reg = classify(&target, &trap)?;
        let tag = serde_json::to_value(reg.tag)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        let nuc: Cell = nu_critical_trap(pt.beta, &trap)?.into();
        let na = || Cell::text("n/a");
        let mut out = Vec::new();
        for (i, p) in ps.iter().enumerate() {
            let mut row: Vec<Cell> = vec![
                k.into(),
                (i as f64).into(),
                reg.eta.into(),
                Cell::text(tag.clone()),
                nuc.clone(),
            ];
            let nc = noncondensate_at(&p.x, &p.y, &pt, &cfg.series)?;
            if is_q1d(&trap) {
                row.push(nu_m(pt.beta, &trap)?.into());
                let meso = meso_q1d_at(&p.x, &p.y, &pt, &cfg.series)?;
                row.push(meso.ln().into());
                match meso_q1d_prediction(&target, &trap) {
                    Ok(pr) => {
                        row.push(pr.ln_value().into());
                        row.push(pr.exponent.into());
                        row.push(pr.ln_prefactor_wavelength.into());
                        row.push(pr.ln_prefactor_natural.into());
                    }
                    Err(Error::Regime(_)) => row.extend([na(), na(), na(), na()]),
                    Err(e) => return Err(e),
                }
                row.extend([na(), na(), na(), na()]);
                row.push(nc.into());
                row.push(na());
            } else {
                row.push(na());
                row.extend([na(), na(), na(), na(), na()]);
                let a = additional_q2d_at(&p.x, &p.y, &pt, &cfg.series)?;
                row.push(a.meso.into());
                row.push(a.first_part.into());
                row.push(a.second_part.into());
                row.push(a.predicted_limit.into());
                row.push(nc.into());
                row.push(noncondensate_q2d_limit(&p.x, &p.y, pt.beta, &trap, &cfg.series)?.into());
            }
            out.push(row);
        }
        Ok(out)
    })?;
    fill(&mut t, rows)?;
    Ok(t)
}
