//! Country-diversity re-ranking of retrieved hits.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ScoredHit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiversityConfig {
    pub country_cap: usize,
    pub target: usize,
    /// Optional cap on hits per language. Off unless set.
    pub language_cap: Option<usize>,
}

impl Default for DiversityConfig {
    fn default() -> Self {
        Self { country_cap: 2, target: 6, language_cap: None }
    }
}

/// Greedy pass in score order admitting a hit only while its country has
/// fewer than `country_cap` admitted hits, stopping at `target`. If that
/// comes up short, a second pass fills the remaining slots from the skipped
/// hits in score order, ignoring the cap. The output keeps input order.
pub fn rerank_diverse(hits: &[ScoredHit], country_cap: usize, target: usize) -> Vec<ScoredHit> {
    rerank_with(hits, &DiversityConfig { country_cap, target, language_cap: None })
}

/// As [`rerank_diverse`], additionally honouring `language_cap` in the
/// greedy pass when set.
pub fn rerank_with(hits: &[ScoredHit], cfg: &DiversityConfig) -> Vec<ScoredHit> {
    let target = cfg.target;
    let mut taken = vec![false; hits.len()];
    let mut picked = 0usize;
    let mut per_country: HashMap<&str, usize> = HashMap::new();
    let mut per_language: HashMap<&str, usize> = HashMap::new();

    for (i, h) in hits.iter().enumerate() {
        if picked == target {
            break;
        }
        let c = per_country.get(h.meta.country.as_str()).copied().unwrap_or(0);
        let l = per_language.get(h.meta.language.as_str()).copied().unwrap_or(0);
        let language_ok = cfg.language_cap.is_none_or(|cap| l < cap);
        if c < cfg.country_cap && language_ok {
            taken[i] = true;
            picked += 1;
            *per_country.entry(&h.meta.country).or_default() += 1;
            *per_language.entry(&h.meta.language).or_default() += 1;
        }
    }
    for t in taken.iter_mut() {
        if picked == target {
            break;
        }
        if !*t {
            *t = true;
            picked += 1;
        }
    }
    hits.iter().zip(taken).filter(|(_, t)| *t).map(|(h, _)| h.clone()).collect()
}
