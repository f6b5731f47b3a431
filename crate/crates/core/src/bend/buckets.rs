use std::path::Path;

use serde::Deserialize;

use super::BendError;

/// Irreducible crossing counts `min..=max` map to unstructured level `level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bucket {
    pub min: usize,
    /// Absent on the last, unbounded bucket.
    pub max: Option<usize>,
    pub level: u32,
}

/// Level boundaries for unstructured 1D bending. Buckets are contiguous
/// from one crossing upward; zero crossings never reaches the map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketMap {
    buckets: Vec<Bucket>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BucketFile {
    bucket: Vec<Bucket>,
}

impl Default for BucketMap {
    fn default() -> Self {
        BucketMap {
            buckets: vec![
                Bucket {
                    min: 1,
                    max: Some(3),
                    level: 1,
                },
                Bucket {
                    min: 4,
                    max: None,
                    level: 2,
                },
            ],
        }
    }
}

impl BucketMap {
    pub fn new(buckets: Vec<Bucket>) -> Result<BucketMap, BendError> {
        let bad = |m: String| Err(BendError::BucketMap(m));
        let Some(last) = buckets.last() else {
            return bad("at least one bucket is required".into());
        };
        if last.max.is_some() {
            return bad("the last bucket must omit `max`".into());
        }
        let mut next = 1;
        let mut level = 1;
        for (i, b) in buckets.iter().enumerate() {
            if b.min != next {
                return bad(format!("bucket {i} starts at {}, expected {next}", b.min));
            }
            if b.level < level {
                return bad(format!(
                    "bucket {i} has level {}, levels start at 1 and never decrease",
                    b.level
                ));
            }
            level = b.level;
            match b.max {
                Some(max) if max < b.min => {
                    return bad(format!("bucket {i} ends before it starts"))
                }
                Some(max) => next = max + 1,
                None if i + 1 < buckets.len() => {
                    return bad(format!("bucket {i} is unbounded but not last"))
                }
                None => {}
            }
        }
        Ok(BucketMap { buckets })
    }

    /// ```toml
    /// [[bucket]]
    /// min = 1
    /// max = 3
    /// level = 1
    ///
    /// [[bucket]]
    /// min = 4
    /// level = 2
    /// ```
    pub fn from_toml(text: &str) -> Result<BucketMap, BendError> {
        let file: BucketFile =
            toml::from_str(text).map_err(|e| BendError::BucketMap(e.to_string()))?;
        BucketMap::new(file.bucket)
    }

    pub fn load(path: &Path) -> Result<BucketMap, BendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BendError::BucketMap(format!("{}: {e}", path.display())))?;
        BucketMap::from_toml(&text)
    }

    pub fn buckets(&self) -> &[Bucket] {
        &self.buckets
    }

    /// `None` for zero crossings.
    pub fn level(&self, irreducible: usize) -> Option<u32> {
        self.buckets
            .iter()
            .find(|b| irreducible >= b.min && b.max.is_none_or(|max| irreducible <= max))
            .map(|b| b.level)
    }
}
