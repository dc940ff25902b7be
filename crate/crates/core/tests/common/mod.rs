//! Test-only oracles. Nothing here touches the feasibility table or the greedy
//! encoder; the searches work from raw weight lists.
#![allow(dead_code)]

/// Lexicographically highest bit string (plane order, index 0 = least
/// significant) whose weighted sum is `target`, found by exhaustive search
/// over strings from the top plane down, trying 1 before 0. The first hit is
/// the maximum. Branches are cut only when the partial sum overshoots or the
/// remaining weights cannot make up the difference.
pub fn lex_max_bruteforce(weights: &[u64], target: u64) -> Option<Vec<bool>> {
    let n = weights.len();
    let mut below = vec![0u64; n + 1];
    for i in 0..n {
        below[i + 1] = below[i] + weights[i];
    }
    let mut bits = vec![false; n];
    fn go(i: usize, need: u64, w: &[u64], below: &[u64], bits: &mut [bool]) -> bool {
        if i == 0 {
            return need == 0;
        }
        let idx = i - 1;
        if need > below[i] {
            return false;
        }
        if w[idx] <= need {
            bits[idx] = true;
            if go(idx, need - w[idx], w, below, bits) {
                return true;
            }
        }
        bits[idx] = false;
        go(idx, need, w, below, bits)
    }
    go(n, target, weights, &below, &mut bits).then_some(bits)
}

/// Every value reachable as a sum of distinct weights, by enumerating all 2^n strings.
pub fn all_sums(weights: &[u64]) -> std::collections::BTreeSet<u64> {
    let n = weights.len();
    assert!(n <= 24);
    (0u64..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| weights[i]).sum())
        .collect()
}

/// Primes by a sieve, prefixed with the weight 1.
pub fn prime_weights_sieve(count: usize) -> Vec<u64> {
    let limit = 10_000;
    let mut composite = vec![false; limit];
    let mut out = vec![1];
    for i in 2..limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < limit {
                composite[j] = true;
                j += i;
            }
        }
        if out.len() == count {
            break;
        }
    }
    out
}

/// Splitmix-style deterministic bit source for message generation.
pub struct Bits(pub u64);

impl Bits {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn take(&mut self, len: usize) -> Vec<bool> {
        let mut out = Vec::with_capacity(len);
        while out.len() < len {
            let word = self.next_u64();
            out.extend((0..64).map(|i| word >> i & 1 == 1).take(len - out.len()));
        }
        out
    }
}

/// Pinned regression constants on the 64×64 gradient cover, computed by an
/// independent brute-force script (full enumeration of canonical strings).
pub mod pinned {
    /// Eligible pixels at plane 0 for binary, natural, prime, fib:1.
    pub const GRADIENT64_PLANE0_CAPACITY: [u64; 4] = [4096, 544, 2880, 3136];
    /// Natural system, capacities at every plane.
    pub const GRADIENT64_NATURAL_CAPACITY: [u64; 23] = [
        544, 544, 544, 544, 544, 544, 544, 736, 736, 736, 736, 736, 736, 736, 736, 736, 736, 736,
        736, 736, 736, 736, 736,
    ];
    pub const GRADIENT64_PRIME_CAPACITY: [u64; 15] = [
        2880, 1376, 1888, 832, 1152, 576, 1120, 960, 1376, 1696, 1184, 1568, 1440, 1376, 1376,
    ];
    pub const GRADIENT64_FIB_CAPACITY: [u64; 11] =
        [3136, 1920, 2368, 2208, 2240, 2304, 2144, 2016, 2176, 2496, 3584];
    /// KL(cover‖stego) in nats, natural plane 0, "sandipan" repeated to
    /// capacity without a length header, add-one smoothing.
    pub const GRADIENT64_NATURAL_PLANE0_KL: f64 = 0.000_627_984_565_839_842_7;
    pub const GRADIENT64_NATURAL_PLANE0_CHANGED: u64 = 246;
    /// Eligible values in 0..=255 per plane for the natural and prime systems.
    pub const NATURAL_ELIGIBLE_VALUES: [usize; 23] = [
        34, 34, 34, 34, 34, 34, 34, 46, 46, 46, 46, 46, 46, 46, 46, 46, 46, 46, 46, 46, 46, 46, 46,
    ];
    pub const PRIME_ELIGIBLE_VALUES: [usize; 15] =
        [180, 86, 118, 52, 72, 36, 70, 60, 86, 106, 74, 98, 90, 86, 86];
    pub const FIB_ELIGIBLE_VALUES: [usize; 11] =
        [196, 120, 148, 138, 140, 144, 134, 126, 136, 156, 224];
}
