//! Redundant positional numeral systems and their canonical codec.
//!
//! A system is an ordered list of strictly increasing positive weights. A bit
//! string `b` (index 0 = least significant plane) denotes `Σ b[i]·w[i]`. Most
//! values have several such strings; the canonical one is the
//! lexicographically highest when read from the most significant plane down.
//! Each digit position is a "virtual bit-plane" of a pixel.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported pixel bit depth.
pub const MAX_BIT_DEPTH: u32 = 16;

/// Upper bound on planes accepted by [`NumeralSystem::with_planes`].
pub const MAX_PLANES: usize = 1024;

/// Which weight function generates the planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemKind {
    /// `w(i) = 2^i`
    Binary,
    /// `w(i) = i + 1`
    Natural,
    /// `w(0) = 1`, `w(i)` = i-th prime
    Prime,
    /// Generalized Fibonacci-p sequence with the leading duplicate 1 collapsed.
    Fibonacci(u32),
}

impl SystemKind {
    /// The four decompositions compared throughout the crate, Fibonacci with p = 1.
    pub const ALL: [SystemKind; 4] = [
        SystemKind::Binary,
        SystemKind::Natural,
        SystemKind::Prime,
        SystemKind::Fibonacci(1),
    ];

    /// First `count` weights of this system.
    pub fn weights(self, count: usize) -> Vec<u64> {
        let mut gen = WeightIter::new(self);
        (0..count).map(|_| gen.next_weight()).collect()
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemKind::Binary => f.write_str("binary"),
            SystemKind::Natural => f.write_str("natural"),
            SystemKind::Prime => f.write_str("prime"),
            SystemKind::Fibonacci(p) => write!(f, "fib:{p}"),
        }
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    /// Accepts `binary`, `natural`, `prime`, `fib` (p = 1) and `fib:p`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "binary" => return Ok(SystemKind::Binary),
            "natural" => return Ok(SystemKind::Natural),
            "prime" => return Ok(SystemKind::Prime),
            "fib" | "fibonacci" => return Ok(SystemKind::Fibonacci(1)),
            _ => {}
        }
        let p = lower
            .strip_prefix("fib:")
            .or_else(|| lower.strip_prefix("fibonacci:"))
            .ok_or_else(|| Error::Parameter(format!("unknown numeral system `{s}`")))?;
        let p: u32 = p
            .parse()
            .map_err(|_| Error::Parameter(format!("bad Fibonacci order in `{s}`")))?;
        if p == 0 || p > 64 {
            return Err(Error::Parameter(format!(
                "Fibonacci order must be in 1..=64, got {p}"
            )));
        }
        Ok(SystemKind::Fibonacci(p))
    }
}

/// Incremental weight generator shared by all kinds.
struct WeightIter {
    kind: SystemKind,
    produced: Vec<u64>,
    // raw Fibonacci-p terms, including the duplicate leading ones
    fib: Vec<u64>,
    prime_candidate: u64,
}

impl WeightIter {
    fn new(kind: SystemKind) -> Self {
        WeightIter {
            kind,
            produced: Vec::new(),
            fib: Vec::new(),
            prime_candidate: 1,
        }
    }

    fn next_weight(&mut self) -> u64 {
        let i = self.produced.len();
        let w = match self.kind {
            SystemKind::Binary => 1u64.checked_shl(i as u32).unwrap_or(u64::MAX),
            SystemKind::Natural => i as u64 + 1,
            SystemKind::Prime => {
                if i == 0 {
                    1
                } else {
                    loop {
                        self.prime_candidate += 1;
                        if is_prime(self.prime_candidate) {
                            break self.prime_candidate;
                        }
                    }
                }
            }
            SystemKind::Fibonacci(p) => {
                let last = self.produced.last().copied().unwrap_or(0);
                loop {
                    let term = self.next_fib_term(p as usize);
                    if term > last {
                        break term;
                    }
                }
            }
        };
        self.produced.push(w);
        w
    }

    /// F(0) = F(1) = 1, F(n) = F(n-1) + F(n-p-1), terms at negative index are 0.
    fn next_fib_term(&mut self, p: usize) -> u64 {
        let n = self.fib.len();
        let term = if n < 2 {
            1
        } else {
            let back = if n > p { self.fib[n - p - 1] } else { 0 };
            self.fib[n - 1].saturating_add(back)
        };
        self.fib.push(term);
        term
    }
}

fn is_prime(c: u64) -> bool {
    if c < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= c {
        if c % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Plane count predicted by solving `n(n+1)/2 >= 2^k - 1` for the natural system.
pub fn natural_plane_count_closed_form(k: u32) -> usize {
    // n^2 + n - 2^(k+1) + 2 >= 0
    let disc = 2f64.powi(k as i32 + 3) - 7.0;
    ((-1.0 + disc.sqrt()) / 2.0).ceil() as usize
}

/// Subset-sum reachability over weight prefixes.
///
/// Row `m` holds the set of values expressible as a sum of distinct weights
/// among the `m` least significant ones, as a bitset over `0..=max`.
#[derive(Clone)]
pub struct FeasibilityTable {
    rows: Vec<Vec<u64>>,
    prefix_sums: Vec<u64>,
    max: u64,
}

impl FeasibilityTable {
    pub fn new(weights: &[u64]) -> Self {
        let max: u64 = weights.iter().sum();
        let words = (max as usize + 1).div_ceil(64);
        let mut rows = Vec::with_capacity(weights.len() + 1);
        let mut prefix_sums = vec![0];
        let mut row = vec![0u64; words];
        row[0] = 1;
        rows.push(row.clone());
        for &w in weights {
            prefix_sums.push(prefix_sums.last().unwrap() + w);
            let mut next = row.clone();
            shift_or(&mut next, &row, w as usize);
            mask_tail(&mut next, max);
            rows.push(next.clone());
            row = next;
        }
        FeasibilityTable {
            rows,
            prefix_sums,
            max,
        }
    }

    /// Number of weights the table covers.
    pub fn prefixes(&self) -> usize {
        self.rows.len() - 1
    }

    /// Sum of all weights; the largest value any prefix can reach.
    pub fn max_value(&self) -> u64 {
        self.max
    }

    /// Whether `value` is a sum of distinct weights among the `prefix` lowest.
    pub fn is_feasible(&self, prefix: usize, value: u64) -> bool {
        if value > self.max || prefix >= self.rows.len() {
            return false;
        }
        let v = value as usize;
        self.rows[prefix][v / 64] >> (v % 64) & 1 == 1
    }

    /// Values below the prefix's weight sum that the prefix cannot express.
    pub fn gaps(&self, prefix: usize) -> Vec<u64> {
        let Some(&reach) = self.prefix_sums.get(prefix) else {
            return Vec::new();
        };
        (0..=reach).filter(|&v| !self.is_feasible(prefix, v)).collect()
    }
}

impl fmt::Debug for FeasibilityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FeasibilityTable")
            .field("prefixes", &self.prefixes())
            .field("max", &self.max)
            .finish()
    }
}

// dst |= src << shift
fn shift_or(dst: &mut [u64], src: &[u64], shift: usize) {
    let (word_shift, bit_shift) = (shift / 64, shift % 64);
    for i in (word_shift..dst.len()).rev() {
        let j = i - word_shift;
        let mut v = src[j] << bit_shift;
        if bit_shift != 0 && j > 0 {
            v |= src[j - 1] >> (64 - bit_shift);
        }
        dst[i] |= v;
    }
}

fn mask_tail(row: &mut [u64], max: u64) {
    let used = (max % 64 + 1) as u32;
    if used < 64 {
        if let Some(last) = row.last_mut() {
            *last &= (1u64 << used) - 1;
        }
    }
}

/// A weight list together with the pixel range it must cover.
#[derive(Clone)]
pub struct NumeralSystem {
    kind: SystemKind,
    weights: Vec<u64>,
    bit_depth: Option<u32>,
    max_value: u64,
    representable_max: u64,
    table: Arc<FeasibilityTable>,
}

impl NumeralSystem {
    /// Builds the system for `k`-bit pixels using the fewest planes whose
    /// weights sum to at least `2^k - 1`.
    pub fn new(kind: SystemKind, k: u32) -> Result<Self> {
        if !(1..=MAX_BIT_DEPTH).contains(&k) {
            return Err(Error::Parameter(format!(
                "bit depth must be in 1..={MAX_BIT_DEPTH}, got {k}"
            )));
        }
        if let SystemKind::Fibonacci(0) = kind {
            return Err(Error::Parameter("Fibonacci order must be >= 1".into()));
        }
        let max_value = (1u64 << k) - 1;
        let mut gen = WeightIter::new(kind);
        let mut weights = Vec::new();
        let mut sum = 0u64;
        while sum < max_value {
            let w = gen.next_weight();
            sum += w;
            weights.push(w);
        }
        Ok(Self::from_parts(kind, weights, Some(k), max_value))
    }

    /// Builds an `n`-plane system whose value range is its full representable range.
    pub fn with_planes(kind: SystemKind, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_PLANES {
            return Err(Error::Parameter(format!(
                "plane count must be in 1..={MAX_PLANES}, got {n}"
            )));
        }
        if let SystemKind::Fibonacci(0) = kind {
            return Err(Error::Parameter("Fibonacci order must be >= 1".into()));
        }
        let weights = kind.weights(n);
        let sum = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::Parameter(format!("{kind} with {n} planes is too large")))?;
        Ok(Self::from_parts(kind, weights, None, sum))
    }

    fn from_parts(kind: SystemKind, weights: Vec<u64>, bit_depth: Option<u32>, max_value: u64) -> Self {
        let table = FeasibilityTable::new(&weights);
        NumeralSystem {
            kind,
            representable_max: table.max_value(),
            weights,
            bit_depth,
            max_value,
            table: Arc::new(table),
        }
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Number of virtual bit-planes.
    pub fn planes(&self) -> usize {
        self.weights.len()
    }

    /// Pixel bit depth the system was planned for, if any.
    pub fn bit_depth(&self) -> Option<u32> {
        self.bit_depth
    }

    /// Largest pixel value the system must carry.
    pub fn max_value(&self) -> u64 {
        self.max_value
    }

    /// Sum of all weights.
    pub fn representable_max(&self) -> u64 {
        self.representable_max
    }

    pub fn weight(&self, plane: usize) -> Result<u64> {
        self.weights.get(plane).copied().ok_or_else(|| self.plane_error(plane))
    }

    pub(crate) fn plane_error(&self, plane: usize) -> Error {
        Error::Parameter(format!(
            "plane {plane} out of range for {} ({} planes)",
            self.kind,
            self.planes()
        ))
    }

    pub fn feasibility_table(&self) -> &FeasibilityTable {
        &self.table
    }

    /// `(0, Σ weights)`. Interior gaps, if any, show up in the feasibility table.
    pub fn representable_range(&self) -> (u64, u64) {
        (0, self.representable_max)
    }

    /// Lexicographically highest bit string decoding to `value`.
    ///
    /// Greedy from the top plane: a bit is set iff its weight fits and the
    /// remainder stays reachable with the planes below it.
    pub fn encode(&self, value: u64) -> Result<VirtualRepresentation> {
        let n = self.planes();
        if !self.table.is_feasible(n, value) {
            return Err(Error::Encoding {
                value,
                max: self.representable_max,
            });
        }
        let mut bits = vec![false; n];
        let mut rem = value;
        for i in (0..n).rev() {
            let w = self.weights[i];
            if w <= rem && self.table.is_feasible(i, rem - w) {
                bits[i] = true;
                rem -= w;
            }
        }
        debug_assert_eq!(rem, 0);
        Ok(VirtualRepresentation { bits, value })
    }

    /// Weighted sum of `bits`; defined for every string of the right length.
    pub fn decode(&self, bits: &[bool]) -> Result<u64> {
        self.check_len(bits)?;
        Ok(self.sum_of(bits))
    }

    fn sum_of(&self, bits: &[bool]) -> u64 {
        bits.iter()
            .zip(&self.weights)
            .filter(|(&b, _)| b)
            .map(|(_, &w)| w)
            .sum()
    }

    /// True iff `bits` decodes into the pixel range and is the canonical
    /// string for its value.
    pub fn is_canonical(&self, bits: &[bool]) -> Result<bool> {
        self.check_len(bits)?;
        let value = self.sum_of(bits);
        if value > self.max_value {
            return Ok(false);
        }
        Ok(self.encode(value)?.bits == bits)
    }

    fn check_len(&self, bits: &[bool]) -> Result<()> {
        if bits.len() != self.planes() {
            return Err(Error::Length {
                expected: self.planes(),
                actual: bits.len(),
            });
        }
        Ok(())
    }

    /// Canonical strings for `lo..=hi`, rendered most significant plane first.
    pub fn decomposition_table(&self, lo: u64, hi: u64) -> Result<Vec<(u64, String)>> {
        if lo > hi || hi > self.max_value {
            return Err(Error::Parameter(format!(
                "table range {lo}..={hi} must lie within 0..={}",
                self.max_value
            )));
        }
        (lo..=hi)
            .map(|v| Ok((v, self.encode(v)?.to_string())))
            .collect()
    }
}

impl PartialEq for NumeralSystem {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.weights == other.weights
            && self.max_value == other.max_value
    }
}

impl Eq for NumeralSystem {}

impl fmt::Debug for NumeralSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumeralSystem")
            .field("kind", &self.kind)
            .field("planes", &self.planes())
            .field("bit_depth", &self.bit_depth)
            .field("max_value", &self.max_value)
            .field("representable_max", &self.representable_max)
            .finish()
    }
}

/// A value together with its canonical bit string (index 0 = least significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VirtualRepresentation {
    pub bits: Vec<bool>,
    pub value: u64,
}

impl VirtualRepresentation {
    pub fn bit(&self, plane: usize) -> Option<bool> {
        self.bits.get(plane).copied()
    }
}

impl fmt::Display for VirtualRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_msb_string(&self.bits))
    }
}

/// Renders a bit string most significant plane first.
pub fn bits_to_msb_string(bits: &[bool]) -> String {
    bits.iter().rev().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Parses a most-significant-first `0`/`1` string into plane order.
pub fn parse_msb_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .rev()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parameter(format!("invalid bit character {other:?}"))),
        })
        .collect()
}
