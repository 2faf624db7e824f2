//! Named front-end hyperparameter bundles and their text format.
//!
//! ```text
//! # comment
//! name = balanced
//! ssp.d_min = 0.3
//! ssp.theta_min = -60
//! mcp.sigma_max = inf
//! ```
//!
//! Distances are metres, angles degrees, velocities m/s. Keys missing from
//! a file keep their defaults, except `name` and the SSP/MCP bounds which
//! are required.

use std::fmt::Write as _;
use std::path::Path;

use crate::baseline::CfarParams;
use crate::error::{Error, Result};
use crate::hmsf::{PoolGrid, PoolSpec};
use crate::mcp::DopplerThresholds;
use crate::ssp::SpatialBounds;

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub name: String,
    pub d_min: f64,
    pub d_max: f64,
    pub theta_min_deg: f64,
    pub theta_max_deg: f64,
    pub doppler: DopplerThresholds,
    pub window_radius: usize,
    pub pool: PoolSpec,
    pub grid: PoolGrid,
    pub hidden1: usize,
    pub hidden2: usize,
    pub cfar: CfarParams,
}

pub const BUILTIN_NAMES: [&str; 5] = [
    "ultra-light",
    "light",
    "balanced",
    "high-precision",
    "ultra-precision",
];

#[allow(clippy::too_many_arguments)]
fn preset(name: &str, d: (f64, f64), theta: f64, v: (f64, f64), sigma: f64, kernels: (usize, usize)) -> Profile {
    Profile {
        name: name.to_string(),
        d_min: d.0,
        d_max: d.1,
        theta_min_deg: -theta,
        theta_max_deg: theta,
        doppler: DopplerThresholds {
            v_min: v.0,
            v_max: v.1,
            sigma_min: sigma,
            sigma_max: f64::INFINITY,
        },
        window_radius: 2,
        pool: PoolSpec {
            s_c: kernels.0,
            s_m: kernels.1,
        },
        grid: PoolGrid::DEFAULT,
        hidden1: 512,
        hidden2: 512,
        cfar: CfarParams::default(),
    }
}

impl Profile {
    pub fn ultra_light() -> Self {
        preset("ultra-light", (0.5, 2.0), 40.0, (0.3, 2.0), 0.5, (3, 5))
    }

    pub fn light() -> Self {
        preset("light", (0.4, 2.5), 50.0, (0.2, 2.5), 0.4, (3, 5))
    }

    pub fn balanced() -> Self {
        preset("balanced", (0.3, 3.0), 60.0, (0.1, 3.0), 0.3, (5, 9))
    }

    pub fn high_precision() -> Self {
        preset("high-precision", (0.2, 3.5), 70.0, (0.05, 3.5), 0.2, (7, 13))
    }

    pub fn ultra_precision() -> Self {
        preset("ultra-precision", (0.1, 4.0), 80.0, (0.05, 4.0), 0.1, (7, 13))
    }

    /// The five shipped profiles, lightest first.
    pub fn builtins() -> Vec<Profile> {
        vec![
            Self::ultra_light(),
            Self::light(),
            Self::balanced(),
            Self::high_precision(),
            Self::ultra_precision(),
        ]
    }

    pub fn builtin(name: &str) -> Option<Profile> {
        Self::builtins().into_iter().find(|p| p.name == name)
    }

    /// A builtin by name, otherwise a profile file at `spec`.
    pub fn resolve(spec: &str) -> Result<Profile> {
        if let Some(p) = Self::builtin(spec) {
            return Ok(p);
        }
        let path = Path::new(spec);
        if path.exists() {
            return Self::parse(&std::fs::read_to_string(path)?);
        }
        Err(Error::InvalidConfig(format!(
            "unknown profile {spec:?}; expected one of {} or a file path",
            BUILTIN_NAMES.join(", ")
        )))
    }

    /// Collapses global pooling to a single cell per channel.
    pub fn with_literal_pooling(mut self) -> Self {
        self.grid = PoolGrid::LITERAL;
        self
    }

    pub fn spatial_bounds(&self) -> Result<SpatialBounds> {
        SpatialBounds::from_degrees(self.d_min, self.d_max, self.theta_min_deg, self.theta_max_deg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidConfig(format!("profile {:?}: {m}", self.name)));
        if self.name.is_empty() || self.name.contains(char::is_whitespace) {
            return fail("name must be non-empty without whitespace".into());
        }
        if let Err(e) = self.spatial_bounds() {
            return fail(e.to_string());
        }
        if let Err(e) = self.doppler.validate() {
            return fail(e.to_string());
        }
        if self.window_radius < 1 {
            return fail("mcp.window_radius must be >= 1".into());
        }
        if let Err(e) = PoolSpec::new(self.pool.s_c, self.pool.s_m) {
            return fail(e.to_string());
        }
        if let Err(e) = PoolGrid::new(self.grid.r, self.grid.a, self.grid.d) {
            return fail(e.to_string());
        }
        if self.hidden1 < 1 || self.hidden2 < 1 {
            return fail("mlp widths must be >= 1".into());
        }
        if let Err(e) = self.cfar.validate() {
            return fail(e.to_string());
        }
        Ok(())
    }

    pub fn emit(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("name", self.name.clone());
        line("ssp.d_min", self.d_min.to_string());
        line("ssp.d_max", self.d_max.to_string());
        line("ssp.theta_min", self.theta_min_deg.to_string());
        line("ssp.theta_max", self.theta_max_deg.to_string());
        line("mcp.v_min", self.doppler.v_min.to_string());
        line("mcp.v_max", self.doppler.v_max.to_string());
        line("mcp.sigma_min", self.doppler.sigma_min.to_string());
        line("mcp.sigma_max", self.doppler.sigma_max.to_string());
        line("mcp.window_radius", self.window_radius.to_string());
        line("hmsf.s_c", self.pool.s_c.to_string());
        line("hmsf.s_m", self.pool.s_m.to_string());
        line("hmsf.grid_r", self.grid.r.to_string());
        line("hmsf.grid_a", self.grid.a.to_string());
        line("hmsf.grid_d", self.grid.d.to_string());
        line("mlp.h1", self.hidden1.to_string());
        line("mlp.h2", self.hidden2.to_string());
        line("cfar.guard", self.cfar.guard.to_string());
        line("cfar.train", self.cfar.train.to_string());
        line("cfar.p_fa", self.cfar.p_fa.to_string());
        s
    }

    pub fn parse(text: &str) -> Result<Profile> {
        let mut p = Profile::balanced();
        let required = [
            "name",
            "ssp.d_min",
            "ssp.d_max",
            "ssp.theta_min",
            "ssp.theta_max",
            "mcp.v_min",
            "mcp.v_max",
            "mcp.sigma_min",
        ];
        let mut seen: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(err(format!("duplicate key {key}")));
            }
            let real = || value.parse::<f64>().map_err(|_| err(format!("{key}: bad number {value:?}")));
            let int = || value.parse::<usize>().map_err(|_| err(format!("{key}: bad integer {value:?}")));
            match key {
                "name" => p.name = value.to_string(),
                "ssp.d_min" => p.d_min = real()?,
                "ssp.d_max" => p.d_max = real()?,
                "ssp.theta_min" => p.theta_min_deg = real()?,
                "ssp.theta_max" => p.theta_max_deg = real()?,
                "mcp.v_min" => p.doppler.v_min = real()?,
                "mcp.v_max" => p.doppler.v_max = real()?,
                "mcp.sigma_min" => p.doppler.sigma_min = real()?,
                "mcp.sigma_max" => p.doppler.sigma_max = real()?,
                "mcp.window_radius" => p.window_radius = int()?,
                "hmsf.s_c" => p.pool.s_c = int()?,
                "hmsf.s_m" => p.pool.s_m = int()?,
                "hmsf.grid_r" => p.grid.r = int()?,
                "hmsf.grid_a" => p.grid.a = int()?,
                "hmsf.grid_d" => p.grid.d = int()?,
                "mlp.h1" => p.hidden1 = int()?,
                "mlp.h2" => p.hidden2 = int()?,
                "cfar.guard" => p.cfar.guard = int()?,
                "cfar.train" => p.cfar.train = int()?,
                "cfar.p_fa" => p.cfar.p_fa = real()?,
                other => return Err(err(format!("unknown key {other:?}"))),
            }
            seen.push(key.to_string());
        }
        if let Some(missing) = required.iter().find(|k| !seen.iter().any(|s| s == *k)) {
            return Err(Error::InvalidConfig(format!("missing required key {missing}")));
        }
        p.validate()?;
        Ok(p)
    }
}

impl Default for Profile {
    fn default() -> Self {
        Self::balanced()
    }
}
