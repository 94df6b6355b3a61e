use serde::Deserialize;
use siegel_core::verify::VerifyConfig;
use siegel_core::{Error, Result};

use crate::{Format, GlobalArgs};

/// Settings from the optional JSON file, then the flags.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub max_ops: u128,
    /// primes for the bound sweep and the family checks
    pub primes: Vec<u64>,
    /// largest a_4 in sweeps
    pub max_a: u32,
    pub format: Format,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub lemma_samples: usize,
    pub triples: Vec<[i64; 3]>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VerifyConfig::default();
        RunConfig {
            max_ops: v.max_ops,
            primes: v.cor52_primes,
            max_a: v.max_a,
            format: Format::Json,
            seed: v.seed,
            jobs: None,
            lemma_samples: v.lemma_samples,
            triples: v.triples,
        }
    }
}

impl RunConfig {
    pub fn resolve(g: &GlobalArgs) -> Result<Self> {
        let mut c = match &g.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(f) = g.format {
            c.format = f;
        }
        if let Some(m) = g.max_ops {
            c.max_ops = m;
        }
        if let Some(j) = g.jobs {
            c.jobs = Some(j);
        }
        if let Some(s) = g.seed {
            c.seed = s;
        }
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if self.max_ops == 0 {
            return Err(Error::InvalidArgument("max_ops must be positive".into()));
        }
        if self.primes.is_empty() || self.triples.is_empty() {
            return Err(Error::InvalidArgument("sweep ranges must be nonempty".into()));
        }
        if let Some(&p) = self.primes.iter().find(|&&p| p == 2 || !siegel_core::exactnum::is_prime(p)) {
            return Err(Error::InvalidArgument(format!("sweep prime {p} is not an odd prime")));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("jobs must be positive".into()));
        }
        Ok(())
    }

    pub fn verify(&self) -> VerifyConfig {
        VerifyConfig {
            max_ops: self.max_ops,
            seed: self.seed,
            lemma_samples: self.lemma_samples,
            cor52_primes: self.primes.clone(),
            max_a: self.max_a,
            triples: self.triples.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("siegel-config-{}", std::process::id()));
        std::fs::write(&dir, r#"{"max_ops": 1000, "seed": 5, "format": "csv"}"#).unwrap();
        let g = GlobalArgs { config: Some(dir.clone()), seed: Some(9), ..Default::default() };
        let c = RunConfig::resolve(&g).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(c.max_ops, 1000);
        assert_eq!(c.seed, 9);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn invalid_settings() {
        let g = GlobalArgs { max_ops: Some(0), ..Default::default() };
        assert!(RunConfig::resolve(&g).is_err());
        let c = RunConfig { primes: vec![2], ..Default::default() };
        assert!(c.validate().is_err());
    }
}
