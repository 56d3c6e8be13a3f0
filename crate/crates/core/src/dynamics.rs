//! Local fields and one-step retrieval dynamics.
//!
//! For a probe `σ` the two fields at neuron `i` are
//!
//! ```text
//! S_i(σ) = Σ_{j≠i} J_ij σ_j,     J_ij = Σ_μ ξ_i^μ ξ_j^μ
//! θ_i(σ) = Σ_{j≠i} K_ij σ_j²,    K_ij = (1−p)^{-2} Σ_μ η_i^μ η_j^μ,  η = ξ² − p
//! ```
//!
//! and the transfer rule is `T_i = sgn(S_i) Θ(|S_i| + θ_i − τ)` with
//! `Θ(0) = 1`, `sgn(0) = 0`, and `τ = 0` (original) or `τ = γ ln N`
//! (thresholded).
//!
//! The sparse evaluation works pattern by pattern. With `A = supp(σ)`,
//! `o_μ = Σ_j ξ_j^μ σ_j` and `c_μ = |A ∩ supp(ξ^μ)|`:
//!
//! ```text
//! S_i = Σ_{μ∋i} ξ_i^μ o_μ − d_i σ_i
//! θ_i (1−p)² = Σ_{μ∋i} c_μ − [i∈A] d_i − p (|A∖i| d_i + D_A − [i∈A] d_i) + p² |A∖i| M
//! ```
//!
//! where `d_i` is the degree of neuron `i` and `D_A = Σ_{j∈A} d_j`. Only
//! patterns that touch `A` contribute to the sums, which the inverted index
//! enumerates directly.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pattern::{Entry, PatternSet, TernaryConfig};

/// Largest `N` accepted by [`dense_oracle_fields`].
pub const DENSE_ORACLE_LIMIT: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `τ = 0`.
    Original,
    /// `τ = γ ln N`.
    Thresholded,
}

impl Variant {
    pub fn tau(self, n: usize, gamma: f64) -> f64 {
        match self {
            Variant::Original => 0.0,
            Variant::Thresholded => gamma * libm::log(n as f64),
        }
    }
}

/// Field values `(S_i, θ_i)` at one neuron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPair {
    pub s: i64,
    pub theta: f64,
}

/// Outcome of applying the map once to a stored pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StabilityReport {
    pub mu: usize,
    /// Number of active neurons of the pattern.
    pub k: usize,
    /// Inactive neurons that switched on.
    pub zero_to_nonzero: usize,
    /// Active neurons mapped to zero.
    pub erased: usize,
    /// Active neurons mapped to the opposite sign.
    pub sign_flipped: usize,
    pub stable: bool,
}

/// `sgn(s) · Θ(|s| + θ − τ)` with `sgn(0) = 0` and `Θ(0) = 1`.
#[inline]
pub fn transfer(s: i64, theta: f64, tau: f64) -> i8 {
    if s == 0 {
        return 0;
    }
    if s.unsigned_abs() as f64 + theta - tau >= 0.0 {
        s.signum() as i8
    } else {
        0
    }
}

/// Probe statistics shared by every neuron: `|A|` and `D_A`.
struct ProbeTotals {
    support: u64,
    degree_sum: u64,
}

impl ProbeTotals {
    fn of(ps: &PatternSet, probe: &[Entry]) -> Self {
        ProbeTotals {
            support: probe.len() as u64,
            degree_sum: probe
                .iter()
                .map(|e| ps.degree(e.index as usize) as u64)
                .sum(),
        }
    }
}

/// θ_i from the integer pattern counts; see the module docs.
#[inline]
fn theta_from_counts(
    p: f64,
    m: usize,
    totals: &ProbeTotals,
    overlap_sum: u64,
    degree: u64,
    in_probe: bool,
) -> f64 {
    let self_deg = if in_probe { degree } else { 0 };
    let others = totals.support - u64::from(in_probe);
    let own = (overlap_sum - self_deg) as f64;
    let cross = (others * degree + totals.degree_sum - self_deg) as f64;
    let q = 1.0 - p;
    (own - p * cross + p * p * (others as f64) * (m as f64)) / (q * q)
}

fn check_dim(ps: &PatternSet, probe: &TernaryConfig) -> Result<()> {
    if probe.n() != ps.n() {
        return Err(Error::DimensionMismatch {
            expected: ps.n(),
            found: probe.n(),
        });
    }
    Ok(())
}

/// Fields at a single neuron, evaluated by walking the patterns in which
/// `i` is active.
pub fn local_fields(ps: &PatternSet, probe: &TernaryConfig, i: usize) -> Result<FieldPair> {
    check_dim(ps, probe)?;
    if i >= ps.n() {
        return Err(Error::NeuronOutOfRange {
            index: i,
            n: ps.n(),
        });
    }
    let sigma = probe.entries();
    let totals = ProbeTotals::of(ps, sigma);
    let mut s = 0i64;
    let mut overlap_sum = 0u64;
    for occ in ps.occurrences(i) {
        let (o, c) = overlap(ps.pattern_entries(occ.index as usize), sigma);
        s += i64::from(occ.spin) * o;
        overlap_sum += c;
    }
    let sigma_i = probe.get(i);
    let degree = ps.degree(i) as u64;
    s -= degree as i64 * i64::from(sigma_i);
    let theta = theta_from_counts(ps.p(), ps.m(), &totals, overlap_sum, degree, sigma_i != 0);
    Ok(FieldPair { s, theta })
}

/// `(Σ_j a_j b_j, |supp a ∩ supp b|)` for two sorted sparse vectors.
fn overlap(a: &[Entry], b: &[Entry]) -> (i64, u64) {
    let (mut x, mut y) = (0, 0);
    let (mut dot, mut count) = (0i64, 0u64);
    while x < a.len() && y < b.len() {
        match a[x].index.cmp(&b[y].index) {
            core::cmp::Ordering::Less => x += 1,
            core::cmp::Ordering::Greater => y += 1,
            core::cmp::Ordering::Equal => {
                dot += i64::from(a[x].spin * b[y].spin);
                count += 1;
                x += 1;
                y += 1;
            }
        }
    }
    (dot, count)
}

/// Fields at every neuron. Cost is linear in `N` plus the number of
/// `(pattern, neuron)` incidences of the patterns that touch the probe.
pub fn all_fields(ps: &PatternSet, probe: &TernaryConfig) -> Result<Vec<FieldPair>> {
    check_dim(ps, probe)?;
    let n = ps.n();
    let sigma = probe.entries();
    let totals = ProbeTotals::of(ps, sigma);

    // (μ, ξ_j^μ σ_j) for every j in the probe's support and μ active at j.
    let mut touched: Vec<(u32, i8)> = Vec::with_capacity(totals.degree_sum as usize);
    for e in sigma {
        for occ in ps.occurrences(e.index as usize) {
            touched.push((occ.index, occ.spin * e.spin));
        }
    }
    touched.sort_unstable_by_key(|t| t.0);

    let mut s = vec![0i64; n];
    let mut overlap_sum = vec![0u64; n];
    let mut start = 0;
    while start < touched.len() {
        let mu = touched[start].0;
        let mut end = start;
        let mut o = 0i64;
        while end < touched.len() && touched[end].0 == mu {
            o += i64::from(touched[end].1);
            end += 1;
        }
        let c = (end - start) as u64;
        for pe in ps.pattern_entries(mu as usize) {
            let i = pe.index as usize;
            s[i] += i64::from(pe.spin) * o;
            overlap_sum[i] += c;
        }
        start = end;
    }

    let mut in_probe = vec![0i8; n];
    for e in sigma {
        in_probe[e.index as usize] = e.spin;
    }
    let (p, m) = (ps.p(), ps.m());
    Ok((0..n)
        .map(|i| {
            let degree = ps.degree(i) as u64;
            let sigma_i = in_probe[i];
            FieldPair {
                s: s[i] - degree as i64 * i64::from(sigma_i),
                theta: theta_from_counts(p, m, &totals, overlap_sum[i], degree, sigma_i != 0),
            }
        })
        .collect())
}

/// Explicit `N × N` coupling matrices built straight from their definitions.
/// Reference implementation for tests; quadratic in `N`.
#[derive(Debug, Clone)]
pub struct DenseCouplings {
    n: usize,
    j: Vec<i64>,
    k: Vec<f64>,
}

impl DenseCouplings {
    pub fn build(ps: &PatternSet) -> Result<Self> {
        let n = ps.n();
        if n > DENSE_ORACLE_LIMIT {
            return Err(Error::OracleTooLarge {
                n,
                limit: DENSE_ORACLE_LIMIT,
            });
        }
        let p = ps.p();
        let xi: Vec<Vec<i8>> = (0..ps.m())
            .map(|mu| {
                let mut row = vec![0i8; n];
                for e in ps.pattern_entries(mu) {
                    row[e.index as usize] = e.spin;
                }
                row
            })
            .collect();
        let norm = 1.0 / ((1.0 - p) * (1.0 - p));
        let mut j = vec![0i64; n * n];
        let mut k = vec![0f64; n * n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let mut jab = 0i64;
                let mut kab = 0f64;
                for row in &xi {
                    jab += i64::from(row[a] * row[b]);
                    let eta_a = f64::from(row[a] * row[a]) - p;
                    let eta_b = f64::from(row[b] * row[b]) - p;
                    kab += eta_a * eta_b;
                }
                j[a * n + b] = jab;
                k[a * n + b] = norm * kab;
            }
        }
        Ok(DenseCouplings { n, j, k })
    }

    pub fn j(&self, a: usize, b: usize) -> i64 {
        self.j[a * self.n + b]
    }

    pub fn k(&self, a: usize, b: usize) -> f64 {
        self.k[a * self.n + b]
    }

    pub fn fields(&self, probe: &TernaryConfig) -> Result<Vec<FieldPair>> {
        if probe.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: probe.n(),
            });
        }
        let sigma = probe.to_dense();
        Ok((0..self.n)
            .map(|a| {
                let mut s = 0i64;
                let mut theta = 0f64;
                for (b, &sb) in sigma.iter().enumerate() {
                    if a != b {
                        s += self.j(a, b) * i64::from(sb);
                        theta += self.k(a, b) * f64::from(sb * sb);
                    }
                }
                FieldPair { s, theta }
            })
            .collect())
    }
}

/// Dense reference fields; refuses `N > 512`.
pub fn dense_oracle_fields(ps: &PatternSet, probe: &TernaryConfig) -> Result<Vec<FieldPair>> {
    check_dim(ps, probe)?;
    DenseCouplings::build(ps)?.fields(probe)
}

/// One synchronous application of the map: every component is computed from
/// the unmodified probe. `gamma` is ignored for [`Variant::Original`].
pub fn apply_map(
    ps: &PatternSet,
    probe: &TernaryConfig,
    variant: Variant,
    gamma: f64,
) -> Result<TernaryConfig> {
    let fields = all_fields(ps, probe)?;
    let tau = variant.tau(ps.n(), gamma);
    let entries = fields
        .iter()
        .enumerate()
        .filter_map(|(i, f)| match transfer(f.s, f.theta, tau) {
            0 => None,
            s => Some(Entry::new(i as u32, s)),
        })
        .collect();
    Ok(TernaryConfig::from_sorted_unchecked(ps.n(), entries))
}

/// Applies the map to pattern `mu` and classifies every disagreement.
pub fn check_stability(
    ps: &PatternSet,
    mu: usize,
    variant: Variant,
    gamma: f64,
) -> Result<StabilityReport> {
    let pattern = ps.pattern(mu)?;
    let fields = all_fields(ps, &pattern)?;
    let tau = variant.tau(ps.n(), gamma);
    let mut report = StabilityReport {
        mu,
        k: pattern.support_size(),
        zero_to_nonzero: 0,
        erased: 0,
        sign_flipped: 0,
        stable: true,
    };
    let mut active = pattern.entries().iter().peekable();
    for (i, f) in fields.iter().enumerate() {
        let out = transfer(f.s, f.theta, tau);
        let target = match active.next_if(|e| e.index as usize == i) {
            Some(e) => e.spin,
            None => 0,
        };
        match (target, out) {
            (t, o) if t == o => {}
            (0, _) => report.zero_to_nonzero += 1,
            (_, 0) => report.erased += 1,
            _ => report.sign_flipped += 1,
        }
    }
    report.stable = report.zero_to_nonzero + report.erased + report.sign_flipped == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;

    /// N = 3, p = 0.1, single pattern (+1, −1, 0).
    fn hand_instance() -> PatternSet {
        let params = ModelParams::with_override(3, 1, 0.1).unwrap();
        let xi = TernaryConfig::from_dense(&[1, -1, 0]).unwrap();
        PatternSet::from_patterns(&params, &[xi]).unwrap()
    }

    #[test]
    fn transfer_cases() {
        assert_eq!(transfer(1, 1.0, libm::log(3.0)), 1);
        assert_eq!(transfer(0, 5.0, 0.0), 0);
        assert_eq!(transfer(2, 0.0, 2.0), 1);
        assert_eq!(transfer(-3, 0.5, 4.0), 0);
        assert_eq!(transfer(-3, 1.0, 4.0), -1);
    }

    #[test]
    fn hand_instance_fields() {
        let ps = hand_instance();
        let probe = ps.pattern(0).unwrap();
        let f0 = local_fields(&ps, &probe, 0).unwrap();
        let f1 = local_fields(&ps, &probe, 1).unwrap();
        let f2 = local_fields(&ps, &probe, 2).unwrap();
        assert_eq!(f0.s, 1);
        assert!((f0.theta - 1.0).abs() < 1e-12);
        assert_eq!(f1.s, -1);
        assert_eq!(f2.s, 0);
        assert!((f2.theta - (-0.18 / 0.81)).abs() < 1e-12);

        let dense = dense_oracle_fields(&ps, &probe).unwrap();
        let sparse = all_fields(&ps, &probe).unwrap();
        for (d, s) in dense.iter().zip(&sparse) {
            assert_eq!(d.s, s.s);
            assert!((d.theta - s.theta).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_probe_has_zero_fields() {
        let ps = hand_instance();
        let zero = TernaryConfig::zeros(3);
        for f in all_fields(&ps, &zero).unwrap() {
            assert_eq!(f, FieldPair { s: 0, theta: 0.0 });
        }
        assert_eq!(
            local_fields(&ps, &zero, 1).unwrap(),
            FieldPair { s: 0, theta: 0.0 }
        );
        for v in [Variant::Original, Variant::Thresholded] {
            assert_eq!(apply_map(&ps, &zero, v, 1.0).unwrap(), zero);
        }
    }

    #[test]
    fn hand_instance_maps() {
        let ps = hand_instance();
        let xi = ps.pattern(0).unwrap();
        assert_eq!(apply_map(&ps, &xi, Variant::Thresholded, 1.0).unwrap(), xi);
        assert_eq!(
            apply_map(&ps, &xi, Variant::Thresholded, 2.0).unwrap(),
            TernaryConfig::zeros(3)
        );

        let ok = check_stability(&ps, 0, Variant::Thresholded, 1.0).unwrap();
        assert!(ok.stable);
        assert_eq!((ok.zero_to_nonzero, ok.erased, ok.sign_flipped), (0, 0, 0));

        let bad = check_stability(&ps, 0, Variant::Thresholded, 2.5).unwrap();
        assert!(!bad.stable);
        assert_eq!(bad.erased, 2);
        assert_eq!(bad.k, 2);
    }

    #[test]
    fn zero_pattern_is_stable() {
        let params = ModelParams::with_override(5, 2, 0.2).unwrap();
        let ps = PatternSet::from_patterns(
            &params,
            &[
                TernaryConfig::zeros(5),
                TernaryConfig::from_dense(&[1, 1, 0, -1, 0]).unwrap(),
            ],
        )
        .unwrap();
        for v in [Variant::Original, Variant::Thresholded] {
            let r = check_stability(&ps, 0, v, 1.0).unwrap();
            assert!(r.stable);
            assert_eq!(r.k, 0);
        }
    }

    #[test]
    fn errors_are_reported() {
        let ps = hand_instance();
        let wrong = TernaryConfig::zeros(4);
        assert!(matches!(
            all_fields(&ps, &wrong),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            local_fields(&ps, &ps.pattern(0).unwrap(), 3),
            Err(Error::NeuronOutOfRange { .. })
        ));
        assert!(matches!(
            check_stability(&ps, 1, Variant::Original, 0.0),
            Err(Error::PatternOutOfRange { .. })
        ));
        let big = ModelParams::new(600, 1.0, 0.001).unwrap();
        let ps_big = PatternSet::generate(&big, 0).unwrap();
        assert!(matches!(
            dense_oracle_fields(&ps_big, &TernaryConfig::zeros(600)),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn sign_flip_is_classified() {
        // Two anti-aligned copies dominate the probe's own contribution.
        let params = ModelParams::with_override(4, 3, 0.25).unwrap();
        let a = TernaryConfig::from_dense(&[1, 1, 0, 0]).unwrap();
        let b = TernaryConfig::from_dense(&[1, -1, 0, 0]).unwrap();
        let ps = PatternSet::from_patterns(&params, &[a, b.clone(), b]).unwrap();
        let r = check_stability(&ps, 0, Variant::Original, 0.0).unwrap();
        // J_01 = 1 − 1 − 1 = −1, so S_0 = S_1 = −1 while θ = 3 keeps both on.
        assert_eq!(r.sign_flipped, 2);
        assert_eq!(r.erased, 0);
        assert!(!r.stable);
    }
}
