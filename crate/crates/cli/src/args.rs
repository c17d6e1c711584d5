use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use heiscone::verify::RunConfig;
use heiscone::{FrameId, MetricId};

/// Comma-separated reals, e.g. `0,0,0,1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reals(pub Vec<f64>);

fn reals(s: &str) -> Result<Reals, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Reals)
}

#[derive(Parser, Debug)]
#[command(name = "heiscone", version, about = "Geometry of the Heisenberg group, its cone and the Siegel domain")]
pub struct Cli {
    /// key=value file mirroring long flags (default: ./heiscone.cfg if present)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the verification battery and print a JSON report
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
    /// Trace a geodesic and print it as CSV
    #[command(args_override_self = true)]
    Geodesic(GeodesicArgs),
    /// Sectional, Ricci and scalar curvature at a point
    #[command(args_override_self = true)]
    Curvature(CurvatureArgs),
    /// g_L distances for increasing L between two points of H
    #[command(name = "cc-dist", args_override_self = true)]
    CcDist(CcArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, env = "HEISCONE_SEED")]
    pub seed: Option<u64>,
    /// Sample count per check
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub fd_step: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub domain_guard: Option<f64>,
}

impl RunArgs {
    pub fn config(&self) -> Result<RunConfig> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            fd_step: self.fd_step.unwrap_or(d.fd_step),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            samples: self.samples.unwrap_or(d.samples),
            seed: self.seed.unwrap_or(d.seed),
            domain_guard: self.domain_guard.unwrap_or(d.domain_guard),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Glob over check names, e.g. `sasaki*`
    #[arg(long)]
    pub filter: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the check names and exit
    #[arg(long)]
    pub list: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Ivp,
    Bvp,
    ClosedForm,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
pub enum Solver {
    ClosedForm,
    Shoot,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
pub enum Family {
    HeisHorizontal,
    HeisVertical,
    HeisGeneral,
    ConeRadial,
    ConeVerticalPlane,
    ConeGeneral,
}

#[derive(Args, Debug)]
pub struct GeodesicArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// sasaki, cone, gprime, bergman, gl:<L>, sub_c, sub_u3
    #[arg(long)]
    pub metric: Option<String>,
    /// Only `U`, the half-plane x = y = 0 of the cone (BVP default)
    #[arg(long)]
    pub manifold: Option<String>,
    /// Start point; for `U` the pair `t,r`
    #[arg(long, visible_alias = "from", value_parser = reals, allow_hyphen_values = true)]
    pub start: Option<Reals>,
    /// End point (BVP)
    #[arg(long, value_parser = reals, allow_hyphen_values = true)]
    pub to: Option<Reals>,
    /// Initial direction (IVP), rescaled to unit speed
    #[arg(long, value_parser = reals, allow_hyphen_values = true)]
    pub vel: Option<Reals>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Family constants: horizontal `a,b`; vertical `c`; Heisenberg general
    /// `c,re k,im k`; cone vertical-plane `c1`; cone general `c1,c3,re C,im C`
    #[arg(long, value_parser = reals, allow_hyphen_values = true)]
    pub params: Option<Reals>,
    /// Arclength to trace (IVP, closed form)
    #[arg(long, default_value_t = 1.0)]
    pub len: f64,
    /// Uniformly spaced rows instead of integrator nodes
    #[arg(long)]
    pub points: Option<usize>,
    /// Largest integrator step
    #[arg(long)]
    pub max_step: Option<f64>,
    #[arg(long, value_enum, default_value_t = Solver::ClosedForm)]
    pub solver: Solver,
    /// Also integrate numerically and report the largest deviation
    #[arg(long)]
    pub compare: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct CurvatureArgs {
    #[arg(long)]
    pub metric: String,
    #[arg(long, value_parser = reals, allow_hyphen_values = true)]
    pub point: Reals,
    /// Two frame names, e.g. `X,Y` or `X',Y'`
    #[arg(long)]
    pub plane: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct CcArgs {
    #[arg(long, default_value = "0,0,0", value_parser = reals, allow_hyphen_values = true)]
    pub from: Reals,
    #[arg(long, value_parser = reals, allow_hyphen_values = true)]
    pub to: Reals,
    /// Increasing list of L
    #[arg(long = "l", value_parser = reals)]
    pub l_list: Option<Reals>,
    /// Shooting starts per L
    #[arg(long, default_value_t = 1)]
    pub starts: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

pub fn parse_metric(s: &str) -> Result<MetricId> {
    let lower = s.to_ascii_lowercase();
    if let Some(l) = lower.strip_prefix("gl:").or_else(|| lower.strip_prefix("gl=")) {
        let l: f64 = l.parse().map_err(|e| anyhow!("L in {s:?}: {e}"))?;
        if !(l > 0.0) {
            bail!("L must be positive, got {l}");
        }
        return Ok(MetricId::Approximant { l });
    }
    Ok(match lower.as_str() {
        "sasaki" | "heisenberg" => MetricId::Sasaki,
        "cone" => MetricId::Cone,
        "gprime" | "prime" => MetricId::Prime,
        "bergman" => MetricId::Bergman,
        "sub_c" | "c" => MetricId::SubComplexPlane,
        "sub_u3" | "u3" => MetricId::SubHalfSpace,
        _ => bail!("unknown metric {s:?} (sasaki, cone, gprime, bergman, gl:<L>, sub_c, sub_u3)"),
    })
}

pub fn parse_frame(s: &str) -> Result<FrameId> {
    Ok(match s.trim() {
        "X" => FrameId::X,
        "Y" => FrameId::Y,
        "T" => FrameId::T,
        "T~" | "Tt" | "TTilde" => FrameId::TTilde,
        "Xr" => FrameId::Xr,
        "Yr" => FrameId::Yr,
        "Tr" => FrameId::Tr,
        "Dr" | "d/dr" => FrameId::Dr,
        "X'" | "Xp" => FrameId::XPrime,
        "Y'" | "Yp" => FrameId::YPrime,
        "T'" | "Tp" => FrameId::TPrime,
        "R'" | "Rp" => FrameId::RPrime,
        other => bail!("unknown frame {other:?}"),
    })
}

pub fn frame_name(f: FrameId) -> &'static str {
    match f {
        FrameId::X => "X",
        FrameId::Y => "Y",
        FrameId::T => "T",
        FrameId::TTilde => "T~",
        FrameId::Xr => "Xr",
        FrameId::Yr => "Yr",
        FrameId::Tr => "Tr",
        FrameId::Dr => "Dr",
        FrameId::XPrime => "X'",
        FrameId::YPrime => "Y'",
        FrameId::TPrime => "T'",
        FrameId::RPrime => "R'",
        _ => "?",
    }
}
