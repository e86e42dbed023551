//! Degree sources, resampled degree sequences and the graphicality test.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::rng::Stream;

#[derive(Debug, Error)]
pub enum DegreeError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: cannot parse {token:?} as a degree")]
    Parse { line: usize, token: String },
    #[error("line {line}: degree {value} is below 1")]
    BelowOne { line: usize, value: i64 },
    #[error("empty degree source")]
    EmptySource,
    #[error("sequence needs at least one node")]
    NoNodes,
    #[error("degree {degree} cannot occur among {nodes} nodes")]
    TooLarge { degree: u32, nodes: usize },
    #[error("degree sequence is not sorted non-increasing at position {position}")]
    Unsorted { position: usize },
    #[error("no graphical sequence in {attempts} resampling attempts")]
    NeverGraphical { attempts: usize },
}

/// Defaults for the synthetic pool: size, exponential mean, cap.
pub const SYNTHETIC_POOL_SIZE: usize = 373;
pub const SYNTHETIC_MEAN: f64 = 4.0;
pub const SYNTHETIC_CAP: u32 = 50;

/// Empirical pool of positive degrees that sequences are resampled from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSource {
    values: Vec<u32>,
}

impl DegreeSource {
    pub fn new(values: Vec<u32>) -> Result<Self, DegreeError> {
        if values.is_empty() {
            return Err(DegreeError::EmptySource);
        }
        if values.contains(&0) {
            let line = values.iter().position(|&v| v == 0).unwrap() + 1;
            return Err(DegreeError::BelowOne { line, value: 0 });
        }
        Ok(DegreeSource { values })
    }

    /// Synthetic right-skewed pool: each value is `1 + floor(X)` with
    /// `X ~ Exponential(mean)`, redrawn while it exceeds `cap`.
    ///
    /// Stands in for an empirical pool when no real degrees are available.
    pub fn synthetic(size: usize, mean: f64, cap: u32, rng: &mut Stream) -> Result<Self, DegreeError> {
        let values = (0..size)
            .map(|_| loop {
                let d = 1 + rng.exponential(mean).floor() as u64;
                if d <= cap as u64 {
                    break d as u32;
                }
            })
            .collect();
        DegreeSource::new(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, DegreeError> {
        let mut values = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let token = raw.trim();
            if token.is_empty() || token.starts_with('#') {
                continue;
            }
            let value: i64 = token.parse().map_err(|_| DegreeError::Parse {
                line,
                token: token.to_string(),
            })?;
            if value < 1 {
                return Err(DegreeError::BelowOne { line, value });
            }
            let value = u32::try_from(value).map_err(|_| DegreeError::Parse {
                line,
                token: token.to_string(),
            })?;
            values.push(value);
        }
        DegreeSource::new(values)
    }
}

/// Reads a degree pool: one integer per line, blank and `#` lines skipped.
pub fn load_degree_source(path: impl AsRef<Path>) -> Result<DegreeSource, DegreeError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| DegreeError::Io {
        path: path.display().to_string(),
        source,
    })?;
    DegreeSource::parse(&text)
}

/// Non-increasing degree sequence; node `i` is meant to receive degree `D[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
}

impl DegreeSequence {
    /// Validates sortedness and the simple-graph bound `D_i < N`.
    pub fn new(degrees: Vec<u32>) -> Result<Self, DegreeError> {
        if degrees.is_empty() {
            return Err(DegreeError::NoNodes);
        }
        if let Some(position) = degrees.windows(2).position(|w| w[0] < w[1]) {
            return Err(DegreeError::Unsorted { position: position + 1 });
        }
        let nodes = degrees.len();
        if degrees[0] as usize >= nodes {
            return Err(DegreeError::TooLarge {
                degree: degrees[0],
                nodes,
            });
        }
        Ok(DegreeSequence { degrees })
    }

    /// Sorts `degrees` non-increasing, then validates.
    pub fn from_unsorted(mut degrees: Vec<u32>) -> Result<Self, DegreeError> {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence::new(degrees)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    pub fn max(&self) -> u32 {
        self.degrees[0]
    }

    pub fn parse(text: &str) -> Result<Self, DegreeError> {
        let mut degrees = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let token = raw.trim();
            if token.is_empty() || token.starts_with('#') {
                continue;
            }
            let value: u32 = token.parse().map_err(|_| DegreeError::Parse {
                line: idx + 1,
                token: token.to_string(),
            })?;
            degrees.push(value);
        }
        DegreeSequence::new(degrees)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DegreeError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| DegreeError::Io {
            path: path.display().to_string(),
            source,
        })?;
        DegreeSequence::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), DegreeError> {
        let path = path.as_ref();
        fs::write(path, self.to_string()).map_err(|source| DegreeError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.degrees {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Draws `nodes` values uniformly with replacement from `source` and sorts
/// them. A draw that no simple graph on `nodes` vertices can carry is an
/// error, never clamped.
pub fn resample_degrees(
    source: &DegreeSource,
    nodes: usize,
    rng: &mut Stream,
) -> Result<DegreeSequence, DegreeError> {
    if nodes == 0 {
        return Err(DegreeError::NoNodes);
    }
    let pool = source.values();
    let mut degrees = Vec::with_capacity(nodes);
    for _ in 0..nodes {
        let d = pool[rng.index(pool.len())];
        if d as usize >= nodes {
            return Err(DegreeError::TooLarge { degree: d, nodes });
        }
        degrees.push(d);
    }
    DegreeSequence::from_unsorted(degrees)
}

/// Repeats [`resample_degrees`] until the draw is graphical. Roughly half
/// of all draws fail on parity alone.
pub fn resample_graphical(
    source: &DegreeSource,
    nodes: usize,
    rng: &mut Stream,
    attempts: usize,
) -> Result<DegreeSequence, DegreeError> {
    for _ in 0..attempts {
        let seq = resample_degrees(source, nodes, rng)?;
        if is_graphical(&seq) {
            return Ok(seq);
        }
    }
    Err(DegreeError::NeverGraphical { attempts })
}

/// Why a sequence is not graphical.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphicalityFailure {
    OddSum,
    /// The prefix inequality fails at this (1-based) `k`.
    Prefix { k: usize },
}

impl fmt::Display for GraphicalityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphicalityFailure::OddSum => write!(f, "degree sum is odd"),
            GraphicalityFailure::Prefix { k } => {
                write!(f, "prefix condition fails at k={k}")
            }
        }
    }
}

/// Checks even degree sum and, for every `k = 1..N-1`,
/// `sum_{i<=k} max(D_i - k + 1, 0) <= sum_{i>k} D_i`.
///
/// O(N) after the sort: the left side only involves entries with
/// `D_i >= k`, and since the sequence is sorted that set is a prefix whose
/// boundary moves monotonically as `k` grows.
pub fn check_graphical(seq: &DegreeSequence) -> Result<(), GraphicalityFailure> {
    let d = seq.degrees();
    let n = d.len();
    if seq.total() % 2 == 1 {
        return Err(GraphicalityFailure::OddSum);
    }
    let mut prefix = vec![0u64; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + d[i] as u64;
    }
    // `big` = number of leading entries with D_i >= k (non-increasing in k)
    let mut big = n;
    for k in 1..n {
        while big > 0 && (d[big - 1] as usize) < k {
            big -= 1;
        }
        let m = big.min(k);
        let lhs = prefix[m] - (m as u64) * (k as u64 - 1);
        let rhs = prefix[n] - prefix[k];
        if lhs > rhs {
            return Err(GraphicalityFailure::Prefix { k });
        }
    }
    Ok(())
}

pub fn is_graphical(seq: &DegreeSequence) -> bool {
    check_graphical(seq).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn parse_source() {
        let src = DegreeSource::parse("3\n1\n7\n").unwrap();
        assert_eq!(src.values(), &[3, 1, 7]);
        let src = DegreeSource::parse("# pool\n3\n\n  2 \n").unwrap();
        assert_eq!(src.values(), &[3, 2]);
    }

    #[test]
    fn parse_source_errors() {
        match DegreeSource::parse("3\nx\n") {
            Err(DegreeError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match DegreeSource::parse("") {
            Err(e @ DegreeError::EmptySource) => assert_eq!(e.to_string(), "empty degree source"),
            other => panic!("{other:?}"),
        }
        match DegreeSource::parse("2\n0\n") {
            Err(DegreeError::BelowOne { line: 2, value: 0 }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            DegreeSource::parse("-3\n"),
            Err(DegreeError::BelowOne { line: 1, value: -3 })
        ));
    }

    #[test]
    fn load_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("deg.txt");
        std::fs::write(&path, "3\n1\n7\n").unwrap();
        assert_eq!(load_degree_source(&path).unwrap().values(), &[3, 1, 7]);
        assert!(matches!(
            load_degree_source(dir.path().join("missing")),
            Err(DegreeError::Io { .. })
        ));
    }

    #[test]
    fn sequence_invariants() {
        assert!(matches!(
            DegreeSequence::new(vec![1, 2]),
            Err(DegreeError::Unsorted { position: 1 })
        ));
        assert!(matches!(
            DegreeSequence::new(vec![3, 1, 1]),
            Err(DegreeError::TooLarge { degree: 3, nodes: 3 })
        ));
        assert!(DegreeSequence::new(vec![]).is_err());
        assert_eq!(DegreeSequence::from_unsorted(vec![1, 3, 2, 0]).unwrap().degrees(), &[3, 2, 1, 0]);
    }

    #[test]
    fn sequence_text_round_trip() {
        let s = seq(&[3, 2, 2, 1, 0]);
        assert_eq!(s.to_string(), "3\n2\n2\n1\n0\n");
        assert_eq!(DegreeSequence::parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn resample_single_value_pool() {
        let src = DegreeSource::new(vec![2, 2, 2]).unwrap();
        let mut rng = Stream::from_seed(5);
        assert_eq!(resample_degrees(&src, 4, &mut rng).unwrap().degrees(), &[2, 2, 2, 2]);
    }

    #[test]
    fn resample_rejects_impossible_degree() {
        let src = DegreeSource::new(vec![1, 5]).unwrap();
        let mut hit = false;
        for seed in 0..50 {
            let mut rng = Stream::from_seed(seed);
            match resample_degrees(&src, 3, &mut rng) {
                Err(DegreeError::TooLarge { degree: 5, nodes: 3 }) => hit = true,
                Ok(s) => assert_eq!(s.degrees(), &[1, 1, 1]),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(hit);
    }

    #[test]
    fn resample_histogram_is_uniform_over_pool() {
        // Multinomial(1000, 1/3 each): sd = sqrt(1000 * 1/3 * 2/3) ~ 14.9.
        let src = DegreeSource::new(vec![1, 2, 3]).unwrap();
        let mut rng = Stream::from_seed(11);
        let s = resample_degrees(&src, 1000, &mut rng).unwrap();
        let sd = (1000.0f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for v in 1..=3 {
            let c = s.degrees().iter().filter(|&&d| d == v).count() as f64;
            assert!((c - 1000.0 / 3.0).abs() <= 3.0 * sd, "value {v}: {c}");
        }
    }

    #[test]
    fn resample_until_graphical() {
        let src = DegreeSource::new(vec![1, 2, 3]).unwrap();
        let mut rng = Stream::from_seed(4);
        for _ in 0..20 {
            let s = resample_graphical(&src, 11, &mut rng, 100).unwrap();
            assert!(is_graphical(&s));
        }
        // three nodes of degree 1 can never be graphical
        let ones = DegreeSource::new(vec![1]).unwrap();
        assert!(matches!(
            resample_graphical(&ones, 3, &mut rng, 5),
            Err(DegreeError::NeverGraphical { attempts: 5 })
        ));
    }

    #[test]
    fn synthetic_pool_shape() {
        let mut rng = Stream::from_seed(2);
        let src = DegreeSource::synthetic(5000, 4.0, 50, &mut rng).unwrap();
        assert!(src.values().iter().all(|&d| (1..=50).contains(&d)));
        // E[1 + floor(Exp(4))] = 1 + 1/(e^{1/4} - 1) ~ 4.52
        let mean = src.values().iter().map(|&d| d as f64).sum::<f64>() / 5000.0;
        assert!((mean - 4.52).abs() < 0.25, "{mean}");
        let ones = src.values().iter().filter(|&&d| d == 1).count();
        let fives = src.values().iter().filter(|&&d| d == 5).count();
        assert!(ones > fives);
    }

    #[test]
    fn graphicality_examples() {
        assert!(is_graphical(&seq(&[2, 2, 2])));
        assert_eq!(check_graphical(&seq(&[1, 1, 1])), Err(GraphicalityFailure::OddSum));
        assert_eq!(
            check_graphical(&seq(&[3, 3, 1, 1])),
            Err(GraphicalityFailure::Prefix { k: 2 })
        );
        assert!(is_graphical(&seq(&[3, 3, 3, 3])));
        assert!(is_graphical(&seq(&[0])));
        assert!(is_graphical(&seq(&[0, 0, 0])));
        assert!(is_graphical(&seq(&[1, 1])));
    }
}
