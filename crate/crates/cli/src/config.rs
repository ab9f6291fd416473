//! Job configuration read from `--config`.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use semialg_core::construct::PipelineConfig;
use semialg_core::oracle::OracleConfig;
use semialg_core::verify::ApproxConfig;

/// Oracle block; every field is optional and falls back to the library default.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBlock {
    pub tol: Option<f64>,
    pub max_depth: Option<u32>,
    pub r_max: Option<f64>,
    pub samples: Option<usize>,
    pub cluster_tol: Option<f64>,
    pub max_boxes: Option<usize>,
    pub radius_tol: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineBlock {
    pub degree_cap: Option<u32>,
    pub m_max: Option<u32>,
    pub eps0_halvings: Option<u32>,
    pub eps_halvings: Option<u32>,
    pub rho_halvings: Option<u32>,
    pub loj_m_max: Option<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridBlock {
    /// Grid nodes per axis for equivalence checks.
    pub resolution: usize,
    /// Boundary band half-width.
    pub tol: f64,
    /// Padding added around the box that contains `P`.
    pub padding: f64,
    /// Grid nodes per axis for Hausdorff estimates and plot data.
    pub approx_resolution: usize,
    pub max_halvings: u32,
}

impl Default for GridBlock {
    fn default() -> Self {
        GridBlock { resolution: 201, tol: 1e-7, padding: 0.5, approx_resolution: 601, max_halvings: 12 }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobConfig {
    pub oracle: OracleBlock,
    pub pipeline: PipelineBlock,
    pub grid: GridBlock,
}

impl JobConfig {
    pub fn load(path: Option<&std::path::Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(JobConfig::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: JobConfig = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let o = &self.oracle;
        let positive = [("oracle.tol", o.tol), ("oracle.r_max", o.r_max), ("oracle.cluster_tol", o.cluster_tol), ("oracle.radius_tol", o.radius_tol)];
        for (name, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    bail!("{name} must be positive and finite, got {v}");
                }
            }
        }
        if o.samples == Some(0) || o.max_boxes == Some(0) || o.max_depth == Some(0) {
            bail!("oracle.samples, oracle.max_boxes and oracle.max_depth must be at least 1");
        }
        if self.pipeline.degree_cap == Some(0) {
            bail!("pipeline.degree_cap must be at least 1");
        }
        let g = &self.grid;
        if g.resolution < 2 || g.approx_resolution < 2 {
            bail!("grid resolutions must be at least 2");
        }
        if !(g.tol >= 0.0 && g.tol.is_finite()) || !(g.padding >= 0.0 && g.padding.is_finite()) {
            bail!("grid.tol and grid.padding must be nonnegative and finite");
        }
        Ok(())
    }

    pub fn oracle(&self, seed: Option<u64>) -> OracleConfig {
        let o = &self.oracle;
        let d = OracleConfig::default();
        OracleConfig {
            tol: o.tol.unwrap_or(d.tol),
            max_depth: o.max_depth.unwrap_or(d.max_depth),
            r_max: o.r_max.unwrap_or(d.r_max),
            samples: o.samples.unwrap_or(d.samples),
            cluster_tol: o.cluster_tol.unwrap_or(d.cluster_tol),
            max_boxes: o.max_boxes.unwrap_or(d.max_boxes),
            radius_tol: o.radius_tol.unwrap_or(d.radius_tol),
            seed: seed.or(o.seed).unwrap_or(d.seed),
        }
    }

    pub fn pipeline(&self, seed: Option<u64>) -> PipelineConfig {
        let p = &self.pipeline;
        let d = PipelineConfig::default();
        PipelineConfig {
            oracle: self.oracle(seed),
            degree_cap: p.degree_cap.unwrap_or(d.degree_cap),
            m_max: p.m_max.unwrap_or(d.m_max),
            eps0_halvings: p.eps0_halvings.unwrap_or(d.eps0_halvings),
            eps_halvings: p.eps_halvings.unwrap_or(d.eps_halvings),
            rho_halvings: p.rho_halvings.unwrap_or(d.rho_halvings),
            loj_m_max: p.loj_m_max.unwrap_or(d.loj_m_max),
            ..d
        }
    }

    pub fn approx(&self, seed: Option<u64>) -> ApproxConfig {
        ApproxConfig { pipeline: self.pipeline(seed), resolution: self.grid.approx_resolution, max_halvings: self.grid.max_halvings }
    }
}
