//! Flat key=value experiment configuration with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::generators::MeasureMode;
use crate::quad::QuadratureSpec;

/// Which graph an experiment runs on.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Lattice { dim: usize, radius: usize },
    Gasket { level: usize },
    Vicsek { level: usize },
    File(PathBuf),
}

/// Free boundary (`c ≡ 0` as generated) or Dirichlet truncation of the
/// corresponding infinite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Free,
    Dirichlet,
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Boundary::Free),
            "dirichlet" => Ok(Boundary::Dirichlet),
            other => Err(Error::Config(format!("unknown boundary `{other}`"))),
        }
    }
}

/// Everything a pipeline run needs; every field has a workable default so
/// configs stay short.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub graph: Option<GraphSpec>,
    pub boundary: Boundary,
    pub measure: MeasureMode,
    /// Vertex id of the root; defaults to the generator origin.
    pub root: Option<String>,
    pub sigma: f64,
    pub alphas: Vec<f64>,
    /// Scan/indicator radii; empty means "derive from the inner window".
    pub radii: Vec<usize>,
    /// Heat-kernel time grid; empty means "derive from the graph".
    pub times: Vec<f64>,
    pub quad: QuadratureSpec,
    /// Log-log fit window; `None` derives the inner window.
    pub fit_window: Option<(f64, f64)>,
    /// Fraction of the exhaustion radius the fits and sums may use.
    pub inner_window: f64,
    pub probe_lambda: f64,
    pub probe_radius: Option<usize>,
    /// Volume dimension `d` and walk dimension `β`, when known, for α₀.
    pub dim_hint: Option<f64>,
    pub beta_hint: Option<f64>,
    pub slope_margin: f64,
    pub tau_ratio: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph: None,
            boundary: Boundary::Dirichlet,
            measure: MeasureMode::Degree,
            root: None,
            sigma: 0.5,
            alphas: vec![0.55, 0.65, 0.75],
            radii: Vec::new(),
            times: Vec::new(),
            quad: QuadratureSpec::default(),
            fit_window: None,
            inner_window: 0.5,
            probe_lambda: 0.5,
            probe_radius: None,
            dim_hint: None,
            beta_hint: None,
            slope_margin: 0.15,
            tau_ratio: 0.5,
            seed: 42,
            out: PathBuf::from("out"),
            threads: 0,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse::<T>()
        .map_err(|_| Error::Config(format!("cannot parse `{v}` for key `{key}`")))
}

fn parse_list_f64(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|t| parse_num::<f64>(key, t.trim()))
        .collect()
}

fn parse_list_usize(key: &str, v: &str) -> Result<Vec<usize>> {
    // either a comma list or an inclusive range lo..hi
    if let Some((lo, hi)) = v.split_once("..") {
        let lo: usize = parse_num(key, lo.trim())?;
        let hi: usize = parse_num(key, hi.trim())?;
        if hi < lo {
            return Err(Error::Config(format!("empty range `{v}` for key `{key}`")));
        }
        return Ok((lo..=hi).collect());
    }
    v.split(',')
        .map(|t| parse_num::<usize>(key, t.trim()))
        .collect()
}

impl ExperimentConfig {
    /// Read a flat key=value file (`#` comments, blank lines allowed).
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = ExperimentConfig::default();
        let mut graph_kind: Option<String> = None;
        let mut structure: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config(format!(
                "line {}: expected key=value, got `{line}`",
                lineno + 1
            )))?;
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            match key.as_str() {
                "graph" => graph_kind = Some(value),
                // structure keys apply once the graph kind is known
                "dim" | "radius" | "level" | "file" => {
                    structure.insert(key, value);
                }
                _ => cfg.set(&key, &value)?,
            }
        }
        match graph_kind {
            Some(kind) => cfg.set_graph(&kind, &structure)?,
            None if !structure.is_empty() => {
                let key = structure.keys().next().expect("nonempty");
                return Err(Error::Config(format!("`{key}` requires a `graph=` kind")));
            }
            None => {}
        }
        Ok(cfg)
    }

    fn set_graph(&mut self, kind: &str, keys: &BTreeMap<String, String>) -> Result<()> {
        let get_usize = |k: &str, default: usize| -> Result<usize> {
            match keys.get(k) {
                Some(v) => parse_num(k, v),
                None => Ok(default),
            }
        };
        self.graph = Some(match kind {
            "lattice" => GraphSpec::Lattice {
                dim: get_usize("dim", 2)?,
                radius: get_usize("radius", 10)?,
            },
            "gasket" => GraphSpec::Gasket { level: get_usize("level", 4)? },
            "vicsek" => GraphSpec::Vicsek { level: get_usize("level", 2)? },
            "file" => {
                let path = keys
                    .get("file")
                    .ok_or_else(|| Error::Config("graph=file needs file=<path>".into()))?;
                GraphSpec::File(PathBuf::from(path))
            }
            other => return Err(Error::Config(format!("unknown graph kind `{other}`"))),
        });
        Ok(())
    }

    /// Apply one key=value override (used by both file parsing and CLI
    /// flags). Graph structure keys (`dim`, `radius`, `level`, `file`) are
    /// applied to an existing graph spec or remembered by the caller.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "boundary" => self.boundary = value.parse()?,
            "measure" => self.measure = value.parse()?,
            "root" => self.root = Some(value.to_string()),
            "sigma" => self.sigma = parse_num(key, value)?,
            "alphas" | "alpha" => self.alphas = parse_list_f64(key, value)?,
            "radii" => self.radii = parse_list_usize(key, value)?,
            "times" => self.times = parse_list_f64(key, value)?,
            "quad_tol" => self.quad.tol = parse_num(key, value)?,
            "quad_split" => self.quad.t_split = parse_num(key, value)?,
            "quad_nodes" => {
                let n: usize = parse_num(key, value)?;
                self.quad.nodes_small = n;
                self.quad.nodes_large = n;
            }
            "fit_lo" => {
                let lo: f64 = parse_num(key, value)?;
                let hi = self.fit_window.map(|w| w.1).unwrap_or(f64::MAX);
                self.fit_window = Some((lo, hi));
            }
            "fit_hi" => {
                let hi: f64 = parse_num(key, value)?;
                let lo = self.fit_window.map(|w| w.0).unwrap_or(2.0);
                self.fit_window = Some((lo, hi));
            }
            "inner_window" => self.inner_window = parse_num(key, value)?,
            "probe_lambda" => self.probe_lambda = parse_num(key, value)?,
            "probe_radius" => self.probe_radius = Some(parse_num(key, value)?),
            "d" => self.dim_hint = Some(parse_num(key, value)?),
            "beta" => self.beta_hint = Some(parse_num(key, value)?),
            "slope_margin" => self.slope_margin = parse_num(key, value)?,
            "tau_ratio" => self.tau_ratio = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "threads" => self.threads = parse_num(key, value)?,
            "dim" | "radius" | "level" | "file" => {
                // structure keys make sense only next to `graph`
                self.update_graph_param(key, value)?;
            }
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    fn update_graph_param(&mut self, key: &str, value: &str) -> Result<()> {
        match (&mut self.graph, key) {
            (Some(GraphSpec::Lattice { dim, .. }), "dim") => *dim = parse_num(key, value)?,
            (Some(GraphSpec::Lattice { radius, .. }), "radius") => {
                *radius = parse_num(key, value)?
            }
            (Some(GraphSpec::Gasket { level }), "level")
            | (Some(GraphSpec::Vicsek { level }), "level") => *level = parse_num(key, value)?,
            (Some(GraphSpec::File(path)), "file") => *path = PathBuf::from(value),
            (None, _) => {
                return Err(Error::Config(format!(
                    "`{key}` requires a `graph=` kind to be set first"
                )))
            }
            (Some(_), _) => {
                return Err(Error::Config(format!(
                    "key `{key}` does not apply to the configured graph kind"
                )))
            }
        }
        Ok(())
    }

    /// Set the graph kind from a CLI flag, keeping defaults for params.
    pub fn set_graph_kind(&mut self, kind: &str) -> Result<()> {
        self.set_graph(kind, &BTreeMap::new())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma <= 1.0) {
            return Err(Error::Config(format!("sigma {} outside (0, 1]", self.sigma)));
        }
        if self.alphas.is_empty() {
            return Err(Error::Config("need at least one alpha".into()));
        }
        for &a in &self.alphas {
            if a < self.sigma {
                return Err(Error::Config(format!(
                    "alpha {a} below sigma {}; Hardy weights need alpha >= sigma",
                    self.sigma
                )));
            }
        }
        if !(self.inner_window > 0.0 && self.inner_window <= 0.75) {
            return Err(Error::Config(format!(
                "inner_window {} outside (0, 0.75]",
                self.inner_window
            )));
        }
        self.quad.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_flat_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            f,
            "# comment\ngraph = lattice\ndim = 2\nradius = 12\nsigma = 0.5\nalphas = 0.55,0.65\nseed = 7\nout = results"
        )
        .unwrap();
        let cfg = ExperimentConfig::from_file(f.path()).unwrap();
        assert_eq!(cfg.graph, Some(GraphSpec::Lattice { dim: 2, radius: 12 }));
        assert_eq!(cfg.alphas, vec![0.55, 0.65]);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.out, PathBuf::from("results"));
        cfg.validate().unwrap();
    }

    #[test]
    fn range_radii() {
        let mut cfg = ExperimentConfig::default();
        cfg.set("radii", "2..6").unwrap();
        assert_eq!(cfg.radii, vec![2, 3, 4, 5, 6]);
    }

    #[test]
    fn alpha_below_sigma_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.set_graph_kind("lattice").unwrap();
        cfg.set("sigma", "0.5").unwrap();
        cfg.set("alphas", "0.4").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_key_rejected() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.set("bogus", "1").is_err());
    }
}
