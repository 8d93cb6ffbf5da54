//! Inline parsers for detector-model and numeric-grid arguments, so
//! analytic runs need no input files.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use superlin::detector::{
    DetectorModel, LinearDetector, ParametricSuperlinearDetector, StubDetector, WorstCaseDetector,
};
use superlin::io::{load_curve, load_grid};

/// Help text shared by every flag that accepts a model spec.
pub const MODEL_SPEC_HELP: &str = "\
Detector model spec, as comma-separated key=value fields:
  kind=linear,eta=0.1
  kind=superlinear,eta1=1e-4,eta2=2e-3
  kind=worst-case,eta=0.1
  kind=stub,p-full=1,p-half=0[,p-quarter=0]
  kind=curve,path=response.csv          (measured curve, CSV: mu,p)
  kind=grid,path=gate_scan.csv          (time-resolved, CSV: t_ns,mu,p)";

/// Help text shared by every flag that accepts a numeric grid.
pub const GRID_SPEC_HELP: &str = "\
Numeric grid: a comma-separated list (0.5,1,2), lin:START:STOP:COUNT for
evenly spaced values, or log:START:STOP:COUNT for geometric spacing.";

/// A detector model resolved from an inline spec, plus the backing file
/// when the spec referenced one (so the run manifest can digest it).
pub struct ParsedModel {
    pub model: DetectorModel,
    pub source: Option<PathBuf>,
}

struct Fields {
    spec: String,
    map: BTreeMap<String, String>,
}

impl Fields {
    fn parse(spec: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for part in spec.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| anyhow!("model spec field `{part}` is not key=value"))?;
            if map.insert(key.trim().to_string(), value.trim().to_string()).is_some() {
                bail!("model spec `{spec}` repeats the field `{}`", key.trim());
            }
        }
        Ok(Self { spec: spec.to_string(), map })
    }

    fn take(&mut self, key: &str) -> Result<String> {
        self.map
            .remove(key)
            .ok_or_else(|| anyhow!("model spec `{}` is missing the field `{key}`", self.spec))
    }

    fn take_f64(&mut self, key: &str) -> Result<f64> {
        let raw = self.take(key)?;
        raw.parse::<f64>()
            .with_context(|| format!("model spec field `{key}={raw}` is not a number"))
    }

    fn take_f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.map.remove(key) {
            Some(raw) => raw
                .parse::<f64>()
                .with_context(|| format!("model spec field `{key}={raw}` is not a number")),
            None => Ok(default),
        }
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.map.keys().next() {
            bail!("model spec `{}` has an unknown field `{key}`", self.spec);
        }
        Ok(())
    }
}

/// Parse an inline model spec (see [`MODEL_SPEC_HELP`]), loading measured
/// data from disk when the spec names a file.
pub fn parse_model(spec: &str) -> Result<ParsedModel> {
    let mut fields = Fields::parse(spec)?;
    let kind = fields.take("kind")?;
    let parsed = match kind.as_str() {
        "linear" => ParsedModel {
            model: LinearDetector::new(fields.take_f64("eta")?)?.into(),
            source: None,
        },
        "superlinear" => ParsedModel {
            model: ParametricSuperlinearDetector::new(
                fields.take_f64("eta1")?,
                fields.take_f64("eta2")?,
            )?
            .into(),
            source: None,
        },
        "worst-case" => ParsedModel {
            model: WorstCaseDetector::new(fields.take_f64("eta")?)?.into(),
            source: None,
        },
        "stub" => ParsedModel {
            model: StubDetector::new(
                fields.take_f64("p-full")?,
                fields.take_f64("p-half")?,
                fields.take_f64_or("p-quarter", 0.0)?,
            )?
            .into(),
            source: None,
        },
        "curve" => {
            let path = PathBuf::from(fields.take("path")?);
            ParsedModel { model: load_curve(&path)?.into(), source: Some(path) }
        }
        "grid" => {
            let path = PathBuf::from(fields.take("path")?);
            ParsedModel { model: load_grid(&path)?.into(), source: Some(path) }
        }
        other => bail!(
            "unknown detector kind `{other}` \
             (expected linear, superlinear, worst-case, stub, curve, or grid)"
        ),
    };
    fields.finish()?;
    Ok(parsed)
}

/// Parse a numeric grid spec (see [`GRID_SPEC_HELP`]).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let values = if let Some(body) = spec.strip_prefix("lin:") {
        expand(spec, body, false)?
    } else if let Some(body) = spec.strip_prefix("log:") {
        expand(spec, body, true)?
    } else {
        spec.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .with_context(|| format!("grid value `{}` is not a number", s.trim()))
            })
            .collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        bail!("grid `{spec}` is empty");
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        bail!("grid `{spec}` contains the non-finite value {bad}");
    }
    Ok(values)
}

fn expand(spec: &str, body: &str, log: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = body.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        bail!("grid `{spec}` must have the form {}START:STOP:COUNT", if log { "log:" } else { "lin:" });
    };
    let start: f64 = start.parse().with_context(|| format!("grid start `{start}` in `{spec}`"))?;
    let stop: f64 = stop.parse().with_context(|| format!("grid stop `{stop}` in `{spec}`"))?;
    let count: usize = count.parse().with_context(|| format!("grid count `{count}` in `{spec}`"))?;
    if count == 0 {
        bail!("grid `{spec}` has zero points");
    }
    if log && !(start > 0.0 && stop > 0.0) {
        bail!("log grid `{spec}` needs positive endpoints");
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let (a, b) = if log { (start.ln(), stop.ln()) } else { (start, stop) };
    let step = (b - a) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            // Return the endpoints exactly: an ln/exp round trip can land
            // one ulp past a measured curve's domain and be refused as
            // extrapolation.
            if i == 0 {
                start
            } else if i == count - 1 {
                stop
            } else if log {
                (a + step * i as f64).exp()
            } else {
                a + step * i as f64
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_models_parse() {
        assert_eq!(parse_model("kind=linear,eta=0.1").unwrap().model.kind(), "linear detector");
        assert_eq!(
            parse_model("kind=superlinear,eta1=1e-4,eta2=2e-3").unwrap().model.kind(),
            "parametric superlinear detector"
        );
        assert_eq!(
            parse_model("kind=worst-case,eta=0.5").unwrap().model.kind(),
            "worst-case detector"
        );
        assert_eq!(
            parse_model("kind=stub,p-full=1,p-half=0").unwrap().model.kind(),
            "stub detector"
        );
    }

    #[test]
    fn malformed_models_are_rejected() {
        for bad in [
            "linear",
            "kind=linear",
            "kind=linear,eta=0.1,extra=2",
            "kind=linear,eta=0.1,eta=0.2",
            "kind=linear,eta=fast",
            "kind=hyperbolic,eta=0.1",
            "kind=curve",
        ] {
            assert!(parse_model(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn grids_parse_and_hit_endpoints() {
        assert_eq!(parse_grid("0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert_eq!(parse_grid("lin:0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = parse_grid("log:1:2048:12").unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[11], 2048.0);
        assert_eq!(parse_grid("lin:3:9:1").unwrap(), vec![3.0]);
    }

    #[test]
    fn malformed_grids_are_rejected() {
        for bad in ["", "1,,2", "lin:0:1", "log:0:1:5", "lin:0:1:0", "nan", "inf,1"] {
            assert!(parse_grid(bad).is_err(), "accepted `{bad}`");
        }
    }
}
