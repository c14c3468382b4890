//! Run configuration: every tunable default in one flat key=value file.

use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config line {0}: expected key=value, got {1:?}")]
    BadLine(usize, String),
    #[error("config line {0}: unknown key {1:?}")]
    UnknownKey(usize, String),
    #[error("config line {0}: invalid value for {1}: {2:?}")]
    BadValue(usize, String, String),
}

/// How candidate renders are scored against the source (higher = better).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScorerSpec {
    NegMse,
    Ssim,
    /// Command template invoked with two PNG paths; must print one number.
    External(String),
}

impl ScorerSpec {
    fn as_text(&self) -> String {
        match self {
            ScorerSpec::NegMse => "neg-mse".into(),
            ScorerSpec::Ssim => "ssim".into(),
            ScorerSpec::External(cmd) => format!("external:{cmd}"),
        }
    }

    fn parse(s: &str) -> Option<ScorerSpec> {
        match s {
            "neg-mse" => Some(ScorerSpec::NegMse),
            "ssim" => Some(ScorerSpec::Ssim),
            _ => s.strip_prefix("external:").map(|cmd| {
                ScorerSpec::External(cmd.to_string())
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Arc-length sampling spacing in normalized units.
    pub spacing: f64,
    /// Max sample distance from the fitted line-arc chain.
    pub fit_tolerance: f64,
    /// Tangent turn above which a junction stays a corner (radians).
    pub corner_threshold: f64,
    /// Arc sweeps below this become chords (radians).
    pub straightness_tol: f64,
    /// Outline stroke width in pixels.
    pub stroke_width: f64,
    /// Model-facing outline raster size.
    pub outline_size: usize,
    /// Mask resolution for stylization ops run without a source raster.
    pub mask_resolution: usize,
    /// Degradation render resolution range.
    pub resolution_min: usize,
    pub resolution_max: usize,
    /// Degradation blur sigma range (pixels).
    pub blur_sigma_min: f64,
    pub blur_sigma_max: f64,
    /// Probability the degradation is skipped entirely.
    pub bypass_probability: f64,
    /// Candidate renders per overlap component before the area fallback.
    pub eval_cap: usize,
    pub scorer: ScorerSpec,
    pub rng_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spacing: 0.5,
            fit_tolerance: 0.3,
            corner_threshold: 0.35,
            straightness_tol: 0.02,
            stroke_width: 2.0,
            outline_size: 448,
            mask_resolution: 256,
            resolution_min: 224,
            resolution_max: 336,
            blur_sigma_min: 0.5,
            blur_sigma_max: 2.0,
            bypass_probability: 0.25,
            eval_cap: 120,
            scorer: ScorerSpec::NegMse,
            rng_seed: 0,
        }
    }
}

impl RunConfig {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "spacing={}", self.spacing);
        let _ = writeln!(s, "fit_tolerance={}", self.fit_tolerance);
        let _ = writeln!(s, "corner_threshold={}", self.corner_threshold);
        let _ = writeln!(s, "straightness_tol={}", self.straightness_tol);
        let _ = writeln!(s, "stroke_width={}", self.stroke_width);
        let _ = writeln!(s, "outline_size={}", self.outline_size);
        let _ = writeln!(s, "mask_resolution={}", self.mask_resolution);
        let _ = writeln!(s, "resolution_min={}", self.resolution_min);
        let _ = writeln!(s, "resolution_max={}", self.resolution_max);
        let _ = writeln!(s, "blur_sigma_min={}", self.blur_sigma_min);
        let _ = writeln!(s, "blur_sigma_max={}", self.blur_sigma_max);
        let _ = writeln!(s, "bypass_probability={}", self.bypass_probability);
        let _ = writeln!(s, "eval_cap={}", self.eval_cap);
        let _ = writeln!(s, "scorer={}", self.scorer.as_text());
        let _ = writeln!(s, "rng_seed={}", self.rng_seed);
        s
    }

    pub fn from_text(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::BadLine(line_no, raw.to_string()));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = || ConfigError::BadValue(line_no, key.to_string(), value.to_string());
            match key {
                "spacing" => cfg.spacing = value.parse().map_err(|_| bad())?,
                "fit_tolerance" => cfg.fit_tolerance = value.parse().map_err(|_| bad())?,
                "corner_threshold" => cfg.corner_threshold = value.parse().map_err(|_| bad())?,
                "straightness_tol" => cfg.straightness_tol = value.parse().map_err(|_| bad())?,
                "stroke_width" => cfg.stroke_width = value.parse().map_err(|_| bad())?,
                "outline_size" => cfg.outline_size = value.parse().map_err(|_| bad())?,
                "mask_resolution" => cfg.mask_resolution = value.parse().map_err(|_| bad())?,
                "resolution_min" => cfg.resolution_min = value.parse().map_err(|_| bad())?,
                "resolution_max" => cfg.resolution_max = value.parse().map_err(|_| bad())?,
                "blur_sigma_min" => cfg.blur_sigma_min = value.parse().map_err(|_| bad())?,
                "blur_sigma_max" => cfg.blur_sigma_max = value.parse().map_err(|_| bad())?,
                "bypass_probability" => {
                    cfg.bypass_probability = value.parse().map_err(|_| bad())?
                }
                "eval_cap" => cfg.eval_cap = value.parse().map_err(|_| bad())?,
                "scorer" => cfg.scorer = ScorerSpec::parse(value).ok_or_else(bad)?,
                "rng_seed" => cfg.rng_seed = value.parse().map_err(|_| bad())?,
                other => return Err(ConfigError::UnknownKey(line_no, other.to_string())),
            }
        }
        Ok(cfg)
    }

    pub fn degrade_config(&self) -> crate::degrade::DegradeConfig {
        crate::degrade::DegradeConfig {
            resolution_range: (self.resolution_min, self.resolution_max),
            blur_sigma_range: (self.blur_sigma_min, self.blur_sigma_max),
            rng_seed: self.rng_seed,
            bypass_probability: self.bypass_probability,
            outline_size: self.outline_size,
            stroke_width: self.stroke_width,
            binarize_threshold: 0.5,
        }
    }

    pub fn fit_config(&self) -> crate::linearc::FitConfig {
        crate::linearc::FitConfig {
            tolerance: self.fit_tolerance,
            corner_threshold: self.corner_threshold,
            straightness_tol: self.straightness_tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_load_dump_identical() {
        let text = RunConfig::default().to_text();
        let loaded = RunConfig::from_text(&text).unwrap();
        assert_eq!(loaded.to_text(), text);
        assert_eq!(loaded, RunConfig::default());
    }

    #[test]
    fn partial_override() {
        let cfg = RunConfig::from_text("spacing=0.25\nrng_seed=9\n").unwrap();
        assert_eq!(cfg.spacing, 0.25);
        assert_eq!(cfg.rng_seed, 9);
        assert_eq!(cfg.fit_tolerance, RunConfig::default().fit_tolerance);
    }

    #[test]
    fn external_scorer_roundtrip() {
        let cfg = RunConfig::from_text("scorer=external:myscore {a} {b}\n").unwrap();
        assert_eq!(
            cfg.scorer,
            ScorerSpec::External("myscore {a} {b}".into())
        );
        assert!(cfg.to_text().contains("scorer=external:myscore {a} {b}"));
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(matches!(
            RunConfig::from_text("bogus=1"),
            Err(ConfigError::UnknownKey(1, _))
        ));
    }
}
