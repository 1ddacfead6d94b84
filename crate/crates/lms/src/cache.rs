//! Theoretical LRU cache-hierarchy model over reuse-distance profiles.
//!
//! For an inclusive hierarchy a single LRU stack models every level: an
//! access whose reuse distance is at least a level's capacity (in elements)
//! misses that level. Cold accesses are compulsory misses at every level and
//! are reported separately from these reuse-based misses. The modeled extra
//! cost of a trace is
//!
//! ```text
//! (m1*c2 + m1*m2*c3 + m1*m2*m3*cm) * n_accesses
//! ```
//!
//! with `m1 = n1/n_accesses`, `m2 = n2/n1`, `m3 = n3/n2` — algebraically
//! identical to `n1*c2 + n2*c3 + n3*cm`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reuse::ReuseProfile;

/// Byte capacities, element size and per-level access latencies (cycles) of
/// the modeled hierarchy. Defaults: 32K L1, 256K L2, 24M L3, 66-byte
/// elements, latencies 10/38/175 for L2/L3/memory.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheSpec {
    pub l1_bytes: u64,
    pub l2_bytes: u64,
    pub l3_bytes: u64,
    pub element_bytes: u64,
    pub c2: f64,
    pub c3: f64,
    pub cm: f64,
}

impl Default for CacheSpec {
    fn default() -> Self {
        CacheSpec {
            l1_bytes: 32 * 1024,
            l2_bytes: 256 * 1024,
            l3_bytes: 24 * 1024 * 1024,
            element_bytes: 66,
            c2: 10.0,
            c3: 38.0,
            cm: 175.0,
        }
    }
}

impl CacheSpec {
    pub fn validate(&self) -> Result<()> {
        if self.element_bytes == 0 {
            return Err(Error::InvalidConfig("element size must be at least 1 byte".into()));
        }
        if !(self.l1_bytes <= self.l2_bytes && self.l2_bytes <= self.l3_bytes) {
            return Err(Error::InvalidConfig(format!(
                "inclusive hierarchy requires L1 <= L2 <= L3 bytes, got {} / {} / {}",
                self.l1_bytes, self.l2_bytes, self.l3_bytes
            )));
        }
        for (name, value) in [("c2", self.c2), ("c3", self.c3), ("cm", self.cm)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "latency {name} must be finite and non-negative, got {value}"
                )));
            }
        }
        Ok(())
    }

    pub fn capacities(&self) -> Result<(u64, u64, u64)> {
        Ok((
            element_capacity(self.l1_bytes, self.element_bytes)?,
            element_capacity(self.l2_bytes, self.element_bytes)?,
            element_capacity(self.l3_bytes, self.element_bytes)?,
        ))
    }
}

/// How many whole elements fit in a cache: `floor(cache_bytes / element_bytes)`.
pub fn element_capacity(cache_bytes: u64, element_bytes: u64) -> Result<u64> {
    if element_bytes == 0 {
        return Err(Error::InvalidConfig("element size must be at least 1 byte".into()));
    }
    Ok(cache_bytes / element_bytes)
}

/// Modeled miss counts and rates for one profile against one hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissModel {
    /// Element capacities of L1/L2/L3.
    pub e1: u64,
    pub e2: u64,
    pub e3: u64,
    /// Reuse-based misses per level: accesses with distance >= capacity.
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    /// Compulsory (first-access) misses, kept apart from n1/n2/n3.
    pub n_cold: usize,
    /// Conditional miss rates: n1/n_accesses, n2/n1, n3/n2.
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub n_accesses: usize,
}

fn count_at_least(finite_sorted: &[u64], threshold: u64) -> usize {
    finite_sorted.len() - finite_sorted.partition_point(|&d| d < threshold)
}

/// Applies the threshold model to a profile: `nX` counts the finite distances
/// at or above level X's element capacity.
pub fn model_misses(profile: &ReuseProfile, spec: &CacheSpec) -> Result<MissModel> {
    spec.validate()?;
    let (e1, e2, e3) = spec.capacities()?;
    let n1 = count_at_least(&profile.finite_sorted, e1);
    let n2 = count_at_least(&profile.finite_sorted, e2);
    let n3 = count_at_least(&profile.finite_sorted, e3);
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    Ok(MissModel {
        e1,
        e2,
        e3,
        n1,
        n2,
        n3,
        n_cold: profile.n_cold,
        m1: ratio(n1, profile.n_accesses),
        m2: ratio(n2, n1),
        m3: ratio(n3, n2),
        n_accesses: profile.n_accesses,
    })
}

/// Modeled extra cycles spent below L1. Computes the rate form
/// `(m1*c2 + m1*m2*c3 + m1*m2*m3*cm) * n_accesses` and checks it against the
/// count form `n1*c2 + n2*c3 + n3*cm`; the two are algebraically equal and
/// must agree to 1e-6 relative.
pub fn access_cost(model: &MissModel, spec: &CacheSpec) -> f64 {
    let rate_form = (model.m1 * spec.c2
        + model.m1 * model.m2 * spec.c3
        + model.m1 * model.m2 * model.m3 * spec.cm)
        * model.n_accesses as f64;
    let count_form =
        model.n1 as f64 * spec.c2 + model.n2 as f64 * spec.c3 + model.n3 as f64 * spec.cm;
    let scale = rate_form.abs().max(count_form.abs());
    assert!(
        (rate_form - count_form).abs() <= 1e-6 * scale.max(1.0),
        "cost forms diverged: rate {rate_form} vs count {count_form}"
    );
    rate_form
}

/// Inverse model: assuming the `observed_misses` accesses with the largest
/// reuse distances are the ones that missed, the cache's capacity boundary is
/// the smallest distance among them.
pub fn estimate_capacity(profile: &ReuseProfile, observed_misses: usize) -> Result<u64> {
    let finite = profile.finite_count();
    if observed_misses == 0 || observed_misses > finite {
        return Err(Error::Domain(format!(
            "observed miss count must lie in 1..={finite}, got {observed_misses}"
        )));
    }
    Ok(profile.finite_sorted[finite - observed_misses])
}

/// JSON-facing summary of a model evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct MissReport {
    pub e1: u64,
    pub e2: u64,
    pub e3: u64,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub n_cold: usize,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub cost_cycles: f64,
}

impl MissModel {
    pub fn report(&self, spec: &CacheSpec) -> MissReport {
        MissReport {
            e1: self.e1,
            e2: self.e2,
            e3: self.e3,
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            n_cold: self.n_cold,
            m1: self.m1,
            m2: self.m2,
            m3: self.m3,
            cost_cycles: access_cost(self, spec),
        }
    }
}
