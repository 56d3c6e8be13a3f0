//! Sparse ternary configurations and stored pattern sets.
//!
//! A [`PatternSet`] keeps every pattern as a sorted list of its non-zero
//! entries (compressed rows) together with the transposed view: for every
//! neuron, the patterns in which it is active and with which sign. Field
//! evaluation walks both directions, so neither J nor K is ever formed.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::seed;

/// Default cap on `M·N`, the size of the (never materialized) dense pattern
/// array. At `p = ln N / N` it corresponds to roughly `10^11 · p` stored
/// entries.
pub const DEFAULT_CELL_BUDGET: u128 = 100_000_000_000;

/// One non-zero coordinate of a ternary configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub index: u32,
    /// `+1` or `-1`.
    pub spin: i8,
}

impl Entry {
    pub fn new(index: u32, spin: i8) -> Self {
        Entry { index, spin }
    }
}

/// Element of `{-1, 0, +1}^n` stored by its support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TernaryConfig {
    n: usize,
    entries: Vec<Entry>,
}

impl TernaryConfig {
    /// The all-zero configuration.
    pub fn zeros(n: usize) -> Self {
        TernaryConfig {
            n,
            entries: Vec::new(),
        }
    }

    /// Builds a configuration from `(index, spin)` pairs in any order.
    pub fn from_entries(n: usize, mut entries: Vec<Entry>) -> Result<Self> {
        entries.sort_unstable();
        for w in entries.windows(2) {
            if w[0].index == w[1].index {
                return Err(Error::InvalidConfig("duplicate index"));
            }
        }
        for e in &entries {
            if e.spin != 1 && e.spin != -1 {
                return Err(Error::InvalidConfig("stored spin must be +1 or -1"));
            }
            if e.index as usize >= n {
                return Err(Error::NeuronOutOfRange {
                    index: e.index as usize,
                    n,
                });
            }
        }
        Ok(TernaryConfig { n, entries })
    }

    /// Builds a configuration from a dense spin vector; entries must be in `{-1, 0, 1}`.
    pub fn from_dense(spins: &[i8]) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, &s) in spins.iter().enumerate() {
            match s {
                0 => {}
                1 | -1 => entries.push(Entry::new(i as u32, s)),
                _ => return Err(Error::InvalidConfig("spin outside {-1, 0, 1}")),
            }
        }
        Ok(TernaryConfig {
            n: spins.len(),
            entries,
        })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, entries: Vec<Entry>) -> Self {
        TernaryConfig { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Non-zero entries, sorted by index.
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> i8 {
        match self.entries.binary_search_by_key(&(i as u32), |e| e.index) {
            Ok(pos) => self.entries[pos].spin,
            Err(_) => 0,
        }
    }

    pub fn to_dense(&self) -> Vec<i8> {
        let mut out = vec![0i8; self.n];
        for e in &self.entries {
            out[e.index as usize] = e.spin;
        }
        out
    }
}

/// `M` stored patterns over `N` neurons plus the neuron → pattern index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    n: usize,
    m: usize,
    p_bits: u64,
    master_seed: u64,
    /// Row offsets into `entries`, length `M + 1`.
    offsets: Vec<usize>,
    entries: Vec<Entry>,
    /// Column offsets into `inverted`, length `N + 1`.
    inv_offsets: Vec<usize>,
    /// `(μ, ξ_i^μ)` stored as an [`Entry`] whose `index` is the pattern id.
    inverted: Vec<Entry>,
}

impl PatternSet {
    /// Draws `M` patterns with i.i.d. entries: `0` with probability `1 − p`
    /// and `±1` with probability `p/2` each. Pattern `μ` is generated from
    /// its own stream keyed by `(master_seed, μ)`.
    pub fn generate(params: &ModelParams, master_seed: u64) -> Result<Self> {
        Self::generate_with_budget(params, master_seed, DEFAULT_CELL_BUDGET)
    }

    pub fn generate_with_budget(
        params: &ModelParams,
        master_seed: u64,
        cell_budget: u128,
    ) -> Result<Self> {
        let (n, m, p) = (params.n(), params.m(), params.p());
        let cells = n as u128 * m as u128;
        if cells > cell_budget {
            return Err(Error::MemoryBudget {
                cells,
                budget: cell_budget,
            });
        }
        if n > u32::MAX as usize || m > u32::MAX as usize {
            return Err(Error::MemoryBudget {
                cells,
                budget: u32::MAX as u128,
            });
        }
        // Gaps between consecutive active neurons are geometric:
        // P(gap = g) = (1 - p)^g p, sampled as ⌊ln U / ln(1 - p)⌋.
        let log_q = libm::log1p(-p);
        let expected = (m as f64 * n as f64 * p) as usize;
        let mut offsets = Vec::with_capacity(m + 1);
        let mut entries = Vec::with_capacity(expected + expected / 8 + 16);
        offsets.push(0);
        for mu in 0..m {
            let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(master_seed, mu as u64));
            let mut pos: usize = 0;
            loop {
                let skip = libm::floor(libm::log(open_unit(&mut rng)) / log_q);
                if skip >= (n - pos) as f64 {
                    break;
                }
                pos += skip as usize;
                let spin = if rng.next_u32() & 1 == 0 { 1 } else { -1 };
                entries.push(Entry::new(pos as u32, spin));
                pos += 1;
                if pos >= n {
                    break;
                }
            }
            offsets.push(entries.len());
        }
        Ok(Self::assemble(n, m, p, master_seed, offsets, entries))
    }

    /// Wraps explicitly given patterns. `params.n()` must match every pattern
    /// and `params.m()` must equal the number of patterns.
    pub fn from_patterns(params: &ModelParams, patterns: &[TernaryConfig]) -> Result<Self> {
        if patterns.len() != params.m() {
            return Err(Error::DimensionMismatch {
                expected: params.m(),
                found: patterns.len(),
            });
        }
        let mut offsets = Vec::with_capacity(patterns.len() + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for pat in patterns {
            if pat.n() != params.n() {
                return Err(Error::DimensionMismatch {
                    expected: params.n(),
                    found: pat.n(),
                });
            }
            entries.extend_from_slice(pat.entries());
            offsets.push(entries.len());
        }
        Ok(Self::assemble(
            params.n(),
            params.m(),
            params.p(),
            0,
            offsets,
            entries,
        ))
    }

    /// Rebuilds a set from compressed rows: pattern `μ` owns
    /// `entries[offsets[μ]..offsets[μ + 1]]`. Every row must be strictly
    /// increasing in neuron index with spins `±1`.
    pub fn from_csr(
        n: usize,
        p: f64,
        master_seed: u64,
        offsets: Vec<usize>,
        entries: Vec<Entry>,
    ) -> Result<Self> {
        if n == 0 || n > u32::MAX as usize {
            return Err(Error::InvalidConfig("neuron count out of range"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "must lie in (0, 1)",
            });
        }
        if offsets.len() < 2 || offsets[0] != 0 || offsets[offsets.len() - 1] != entries.len() {
            return Err(Error::InvalidConfig("offsets do not span the entry list"));
        }
        let m = offsets.len() - 1;
        for mu in 0..m {
            if offsets[mu] > offsets[mu + 1] {
                return Err(Error::InvalidConfig("offsets must be non-decreasing"));
            }
            let row = &entries[offsets[mu]..offsets[mu + 1]];
            for (j, e) in row.iter().enumerate() {
                if e.index as usize >= n {
                    return Err(Error::NeuronOutOfRange {
                        index: e.index as usize,
                        n,
                    });
                }
                if e.spin != 1 && e.spin != -1 {
                    return Err(Error::InvalidConfig("spins must be +1 or -1"));
                }
                if j > 0 && row[j - 1].index >= e.index {
                    return Err(Error::InvalidConfig("row indices must strictly increase"));
                }
            }
        }
        Ok(Self::assemble(n, m, p, master_seed, offsets, entries))
    }

    fn assemble(
        n: usize,
        m: usize,
        p: f64,
        master_seed: u64,
        offsets: Vec<usize>,
        entries: Vec<Entry>,
    ) -> Self {
        let mut inv_offsets = vec![0usize; n + 1];
        for e in &entries {
            inv_offsets[e.index as usize + 1] += 1;
        }
        for i in 0..n {
            inv_offsets[i + 1] += inv_offsets[i];
        }
        let mut cursor = inv_offsets.clone();
        let mut inverted = vec![Entry::new(0, 0); entries.len()];
        // Filling in μ order keeps every column sorted by pattern id.
        for mu in 0..m {
            for e in &entries[offsets[mu]..offsets[mu + 1]] {
                let slot = &mut cursor[e.index as usize];
                inverted[*slot] = Entry::new(mu as u32, e.spin);
                *slot += 1;
            }
        }
        PatternSet {
            n,
            m,
            p_bits: p.to_bits(),
            master_seed,
            offsets,
            entries,
            inv_offsets,
            inverted,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> f64 {
        f64::from_bits(self.p_bits)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Non-zero entries of pattern `mu`. Panics if `mu >= M`.
    pub fn pattern_entries(&self, mu: usize) -> &[Entry] {
        &self.entries[self.offsets[mu]..self.offsets[mu + 1]]
    }

    pub fn pattern(&self, mu: usize) -> Result<TernaryConfig> {
        self.check_mu(mu)?;
        Ok(TernaryConfig::from_sorted_unchecked(
            self.n,
            self.pattern_entries(mu).to_vec(),
        ))
    }

    /// Number of active neurons of pattern `mu`.
    pub fn activity_of(&self, mu: usize) -> Result<usize> {
        self.check_mu(mu)?;
        Ok(self.offsets[mu + 1] - self.offsets[mu])
    }

    /// Patterns in which neuron `i` is active, as `(μ, ξ_i^μ)` entries sorted by `μ`.
    pub fn occurrences(&self, i: usize) -> &[Entry] {
        &self.inverted[self.inv_offsets[i]..self.inv_offsets[i + 1]]
    }

    /// `d_i = |{μ : ξ_i^μ ≠ 0}|`.
    pub fn degree(&self, i: usize) -> usize {
        self.inv_offsets[i + 1] - self.inv_offsets[i]
    }

    pub fn degrees(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.inv_offsets.windows(2).map(|w| w[1] - w[0])
    }

    /// `Σ_i d_i`, the number of stored non-zero entries.
    pub fn total_active(&self) -> usize {
        self.entries.len()
    }

    /// Rebuilds the pattern rows from the inverted index alone.
    pub fn patterns_from_inverted(&self) -> Vec<TernaryConfig> {
        let mut rows: Vec<Vec<Entry>> = vec![Vec::new(); self.m];
        for i in 0..self.n {
            for occ in self.occurrences(i) {
                rows[occ.index as usize].push(Entry::new(i as u32, occ.spin));
            }
        }
        rows.into_iter()
            .map(|r| TernaryConfig::from_sorted_unchecked(self.n, r))
            .collect()
    }

    fn check_mu(&self, mu: usize) -> Result<()> {
        if mu >= self.m {
            Err(Error::PatternOutOfRange { mu, count: self.m })
        } else {
            Ok(())
        }
    }
}

/// Uniform draw from `(0, 1]` with 53 random bits.
fn open_unit<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}
