//! Run configuration: one JSON document per experiment.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use nhp_core::diagnostics::{Circle, GridPoint, SweepSpec};
use nhp_core::measures::{discretize_density_with_bits, DensityKind, Interval, Provenance, DEFAULT_NODE_BITS};
use nhp_core::{build_system, InterpolationScheme, Measure, MultiIndex, NikishinSystem, Orientation, Precision, Rational};

pub const PRECISION_ENV: &str = "NHP_PRECISION";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    /// Endpoints as rational literals; "inf" for an unbounded right end.
    pub interval: [String; 2],
    pub density: DensityKind,
    /// Number of atoms N (ignored for atom lists).
    #[serde(default)]
    pub nodes: usize,
    #[serde(default)]
    pub node_bits: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum IndexSpec {
    /// (k, ..., k) for k = from..=to.
    Diagonal { from: usize, to: usize },
    /// n_j = k + offsets[j] for k = from..=to.
    Shifted { offsets: Vec<usize>, from: usize, to: usize },
    List(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WRoots {
    /// One list of roots for every index.
    Shared(Vec<String>),
    PerIndex(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub generators: Vec<GeneratorSpec>,
    pub indices: IndexSpec,
    /// Zeros of w_n (conjugates implied); classical type I when omitted.
    #[serde(default)]
    pub w_roots: Option<WRoots>,
    #[serde(default = "default_precision")]
    pub precision: String,
    #[serde(default)]
    pub grid: Vec<GridPoint>,
    #[serde(default)]
    pub targets: Vec<usize>,
    #[serde(default)]
    pub contour: Option<Circle>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Interior points used when counting sign changes on an interval.
    #[serde(default = "default_sign_grid")]
    pub sign_grid: usize,
    /// Number of d_n checked by `verify`.
    #[serde(default = "default_dn_order")]
    pub dn_order: usize,
    /// Moment table (CSV) standing in for σ_1's moments in the d_n check.
    #[serde(default)]
    pub moment_override: Option<PathBuf>,
}

fn default_precision() -> String {
    "exact".into()
}

fn default_sign_grid() -> usize {
    400
}

fn default_dn_order() -> usize {
    8
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        if let Some(dir) = path.parent() {
            if let Some(p) = cfg.moment_override.as_mut().filter(|p| p.is_relative()) {
                *p = dir.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    /// Config value, overridden by NHP_PRECISION when set.
    pub fn precision(&self) -> Result<Precision> {
        let raw = std::env::var(PRECISION_ENV).unwrap_or_else(|_| self.precision.clone());
        raw.parse::<Precision>().with_context(|| format!("precision `{raw}`"))
    }

    pub fn indices(&self) -> Result<Vec<MultiIndex>> {
        let m = self.m();
        let raw: Vec<Vec<usize>> = match &self.indices {
            IndexSpec::Diagonal { from, to } => (*from..=*to).map(|k| vec![k; m]).collect(),
            IndexSpec::Shifted { offsets, from, to } => {
                if offsets.len() != m {
                    bail!("indices.shifted.offsets has {} entries for m = {m}", offsets.len());
                }
                (*from..=*to).map(|k| offsets.iter().map(|o| k + o).collect()).collect()
            }
            IndexSpec::List(list) => list.clone(),
        };
        if raw.is_empty() {
            bail!("the multi-index sequence is empty");
        }
        raw.into_iter()
            .map(|n| {
                if n.len() != m {
                    bail!("multi-index {n:?} has {} components for m = {m}", n.len());
                }
                MultiIndex::new(n.clone()).with_context(|| format!("multi-index {n:?}"))
            })
            .collect()
    }

    pub fn schemes(&self, count: usize) -> Result<Vec<InterpolationScheme>> {
        let parse = |roots: &[String]| -> Result<InterpolationScheme> {
            let refs: Vec<&str> = roots.iter().map(String::as_str).collect();
            InterpolationScheme::parse(&refs).with_context(|| format!("w roots {roots:?}"))
        };
        match &self.w_roots {
            None => Ok(vec![InterpolationScheme::trivial(); count]),
            Some(WRoots::Shared(r)) => Ok(vec![parse(r)?; count]),
            Some(WRoots::PerIndex(list)) => {
                if list.len() != count {
                    bail!("w_roots lists {} schemes for {count} indices", list.len());
                }
                list.iter().map(|r| parse(r)).collect()
            }
        }
    }

    pub fn generators(&self) -> Result<Vec<Measure<Rational>>> {
        if self.generators.is_empty() {
            bail!("no generators given");
        }
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let iv = Interval::parse(&g.interval[0], &g.interval[1])
                    .with_context(|| format!("generators[{i}].interval"))?;
                let bits = g.node_bits.unwrap_or(DEFAULT_NODE_BITS);
                let s = discretize_density_with_bits(&g.density, &iv, g.nodes, bits)
                    .with_context(|| format!("generators[{i}]"))?;
                Ok(s.with_provenance(Provenance::Generator))
            })
            .collect()
    }

    /// Exact system with forward and reversed products.
    pub fn system(&self) -> Result<NikishinSystem<Rational>> {
        build_system(self.generators()?, Orientation::Both).context("interval chain")
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let indices = self.indices()?;
        let schemes = if self.w_roots.is_some() { self.schemes(indices.len())? } else { Vec::new() };
        Ok(SweepSpec {
            indices,
            schemes,
            grid: self.grid.clone(),
            targets: self.targets.clone(),
            contour: self.contour,
        })
    }

    pub fn output_dir(&self, cli: Option<&Path>) -> PathBuf {
        cli.map(Path::to_path_buf).or_else(|| self.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> RunConfig {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn minimal_config() {
        let c = parse(r#"{"generators": [{"interval": ["0", "1"], "density": {"family": "uniform"}, "nodes": 8}],
                          "indices": {"list": [[2]]}}"#);
        assert_eq!(c.precision, "exact");
        assert_eq!(c.indices().unwrap(), vec![MultiIndex::new(vec![2]).unwrap()]);
        assert!(c.schemes(1).unwrap()[0].is_trivial());
        assert_eq!(c.system().unwrap().m(), 1);
    }

    #[test]
    fn shifted_indices() {
        let c = parse(r#"{"generators": [
                            {"interval": ["0", "1"], "density": {"family": "uniform-midpoint"}, "nodes": 8},
                            {"interval": ["2", "3"], "density": {"family": "uniform-midpoint"}, "nodes": 8}],
                          "indices": {"shifted": {"offsets": [0, 2], "from": 2, "to": 3}}}"#);
        let n = c.indices().unwrap();
        assert_eq!(n[0].parts(), &[2, 4]);
        assert_eq!(n[1].parts(), &[3, 5]);
    }

    #[test]
    fn rejects_bad_input() {
        let c = parse(r#"{"generators": [{"interval": ["0", "1"], "density": {"family": "uniform"}, "nodes": 8}],
                          "indices": {"list": [[0]]}}"#);
        assert!(c.indices().is_err());
        let c = parse(r#"{"generators": [
                            {"interval": ["0", "2"], "density": {"family": "uniform"}, "nodes": 8},
                            {"interval": ["1", "3"], "density": {"family": "uniform"}, "nodes": 8}],
                          "indices": {"diagonal": {"from": 1, "to": 2}}}"#);
        assert!(c.system().is_err());
        let err = serde_json::from_str::<RunConfig>("{\n\"generators\": [],\n\"bogus\": 1}").unwrap_err();
        assert_eq!(err.line(), 3);
    }
}
