use crate::error::Error;
use crate::exactmath::Field;

/// Default PRNG seed used by the CLI and the acceptance suite.
pub const DEFAULT_SEED: u64 = 1;

/// Default sample count for randomized verification suites.
pub const DEFAULT_SAMPLES: usize = 200;

/// Default multiplicity bound for the membership obstruction search.
pub const DEFAULT_MULTIPLICITY_BOUND: usize = 4;

/// Global configuration of a verification session.
#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub field: Field,
    pub seed: u64,
    pub samples: usize,
    /// Override for the extraction stage cap.
    pub max_len: Option<usize>,
    /// Multiplicity bound for membership obstructions.
    pub bound: usize,
    /// Override for the Hom-vanishing shift bound.
    pub k_max: Option<i64>,
    /// Accepted for CLI compatibility; verification currently runs
    /// sequentially (results would be merged by input index).
    pub jobs: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            field: Field::Q,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            max_len: None,
            bound: DEFAULT_MULTIPLICITY_BOUND,
            k_max: None,
            jobs: 1,
        }
    }
}

impl SessionConfig {
    /// Parses the `--field` argument: `Q` or `Fp:<prime>`.
    pub fn parse_field(s: &str) -> Result<Field, Error> {
        if s == "Q" {
            return Ok(Field::Q);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
            return Field::fp(p);
        }
        Err(Error::Parse(format!(
            "unknown field {s:?} (expected Q or Fp:<prime>)"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_parsing() {
        assert_eq!(SessionConfig::parse_field("Q").unwrap(), Field::Q);
        assert_eq!(SessionConfig::parse_field("Fp:7").unwrap(), Field::Fp(7));
        assert!(SessionConfig::parse_field("Fp:9").is_err());
        assert!(SessionConfig::parse_field("R").is_err());
    }
}
