use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Machine-readable outcome of one CLI invocation.  Serialized to stdout as
/// JSON; identical invocations with identical seeds produce byte-identical
/// output (timing is reported on stderr only, never here).
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// FNV-1a digests of the input files, keyed by role.
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    /// "pass" | "fail" | "error"
    pub verdict: String,
    pub details: Value,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Report {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            seed,
            verdict: "pass".into(),
            details: Value::Null,
        }
    }

    pub fn input(&mut self, role: &str, bytes: &[u8]) {
        self.inputs
            .insert(role.to_string(), format!("{:016x}", fnv1a(bytes)));
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    /// JSON to stdout, one-line summary to stderr.
    pub fn emit(&self, elapsed: std::time::Duration) {
        println!(
            "{}",
            serde_json::to_string_pretty(self).expect("report serializes")
        );
        eprintln!(
            "{}: {} ({:.3}s)",
            self.command,
            self.verdict,
            elapsed.as_secs_f64()
        );
    }
}

/// FNV-1a, 64-bit; used only to fingerprint input files in reports.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), fnv1a(b"a"));
        assert_ne!(fnv1a(b"a"), fnv1a(b"b"));
    }

    #[test]
    fn report_serialization_is_deterministic() {
        let mut r = Report::new("verify", 1);
        r.input("algebra", b"x");
        let a = serde_json::to_string(&r).unwrap();
        let b = serde_json::to_string(&r).unwrap();
        assert_eq!(a, b);
    }
}
