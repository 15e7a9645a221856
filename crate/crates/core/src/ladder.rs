//! The prime-ladder experiment: how `max_b |Σ_I|/q` and `max_b |Σ_II|/q^{3/2}`
//! evolve with `q` for generic `b`, and how large the sums get on
//! subgeneric, non-diagonal `b`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chars::CharTuple;
use crate::complete::{complete_sums, ParamTuple};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::kloosterman::kl_table_fast;
use crate::strata::{is_diagonal, stratum_scan, z_fiber_count, Sampler};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    pub primes: Vec<u64>,
    pub k: usize,
    pub l: usize,
    /// Generic samples per prime.
    pub samples: usize,
    /// Subgeneric samples per prime.
    pub subgeneric_samples: usize,
    pub seed: u64,
    /// Allowed growth exponent for `R(q_max)/R(q_min)`.
    pub growth_exponent: f64,
    /// Constant in `|Σ_II| ≤ C q^2`, `|Σ_I| ≤ C q^{3/2}` on subgeneric `b`.
    pub subgeneric_constant: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self {
            primes: vec![101, 151, 211, 307, 401, 499],
            k: 2,
            l: 2,
            samples: 100,
            subgeneric_samples: 20,
            seed: 0,
            growth_exponent: 0.15,
            subgeneric_constant: 10.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Rung {
    pub q: u64,
    pub generic_z: usize,
    /// `max_b |Σ_I| / q` over generic `b`.
    pub r_i: f64,
    /// `max_b |Σ_II| / q^{3/2}` over generic `b`.
    pub r_ii: f64,
    pub subgeneric_count: usize,
    /// `max |Σ_II| / q^2` over subgeneric `b`.
    pub sub_ii_over_q2: f64,
    /// `max |Σ_I| / q^{3/2}` over subgeneric `b`.
    pub sub_i_over_q15: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LadderReport {
    pub config: LadderConfig,
    pub rungs: Vec<Rung>,
    pub growth_i: f64,
    pub growth_ii: f64,
    pub threshold: f64,
    pub pass_i: bool,
    pub pass_ii: bool,
    pub pass_subgeneric: bool,
}

fn distinct(b: &[u64]) -> bool {
    let mut v = b.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

fn rung(cfg: &LadderConfig, q: u64) -> Result<Rung> {
    let field = Arc::new(PrimeField::new(q)?);
    let tuple = CharTuple::trivial(&field, cfg.k);
    let table = kl_table_fast(&field, &tuple, 1)?;
    let scan = stratum_scan(&field, cfg.k, cfg.l, Sampler::Random { samples: 256, seed: cfg.seed })?;
    let generic_z = scan
        .generic
        .ok_or_else(|| Error::InternalConsistency("no nondegenerate fiber in scan".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ q.rotate_left(32));
    let len = 2 * cfg.l;
    let max_tries = 10_000 * (cfg.samples + cfg.subgeneric_samples).max(1);

    let mut r_i: f64 = 0.0;
    let mut r_ii: f64 = 0.0;
    let mut found = 0;
    let mut tries = 0;
    while found < cfg.samples {
        tries += 1;
        if tries > max_tries {
            return Err(Error::ResourceLimit(format!("could not sample generic b at q = {q}")));
        }
        let b: Vec<u64> = (0..len).map(|_| rng.gen_range(0..q)).collect();
        if !distinct(&b) {
            continue;
        }
        let pt = ParamTuple::new(b)?;
        match z_fiber_count(&field, cfg.k, &pt) {
            Ok(rep) if rep.z_count == generic_z => {}
            _ => continue,
        }
        let s = complete_sums(&table, &pt)?;
        r_i = r_i.max(s.ratio_i);
        r_ii = r_ii.max(s.ratio_ii);
        found += 1;
    }

    let qf = q as f64;
    let mut sub_ii: f64 = 0.0;
    let mut sub_i: f64 = 0.0;
    let mut sub_found = 0;
    tries = 0;
    while sub_found < cfg.subgeneric_samples {
        tries += 1;
        if tries > max_tries {
            return Err(Error::ResourceLimit(format!("could not sample subgeneric b at q = {q}")));
        }
        let mut b: Vec<u64> = (0..len).map(|_| rng.gen_range(0..q)).collect();
        let i = rng.gen_range(0..len);
        let j = (i + rng.gen_range(1..len)) % len;
        b[j] = b[i];
        let pt = ParamTuple::new(b)?;
        if is_diagonal(&pt) {
            continue;
        }
        match z_fiber_count(&field, cfg.k, &pt) {
            Ok(rep) if rep.z_count < generic_z => {}
            _ => continue,
        }
        let s = complete_sums(&table, &pt)?;
        sub_ii = sub_ii.max(s.sigma_ii.abs() / (qf * qf));
        sub_i = sub_i.max(s.sigma_i.norm() / qf.powf(1.5));
        sub_found += 1;
    }

    Ok(Rung {
        q,
        generic_z,
        r_i,
        r_ii,
        subgeneric_count: sub_found,
        sub_ii_over_q2: sub_ii,
        sub_i_over_q15: sub_i,
    })
}

pub fn run_ladder(cfg: &LadderConfig) -> Result<LadderReport> {
    if cfg.primes.len() < 2 {
        return Err(Error::Precondition("the ladder needs at least two primes".into()));
    }
    let rungs = cfg.primes.iter().map(|&q| rung(cfg, q)).collect::<Result<Vec<_>>>()?;
    let first = &rungs[0];
    let last = &rungs[rungs.len() - 1];
    let threshold = (last.q as f64 / first.q as f64).powf(cfg.growth_exponent);
    let growth_i = last.r_i / first.r_i;
    let growth_ii = last.r_ii / first.r_ii;
    let c = cfg.subgeneric_constant;
    let pass_subgeneric = rungs.iter().all(|r| r.sub_ii_over_q2 <= c && r.sub_i_over_q15 <= c);
    Ok(LadderReport {
        config: cfg.clone(),
        growth_i,
        growth_ii,
        threshold,
        pass_i: growth_i <= threshold,
        pass_ii: growth_ii <= threshold,
        pass_subgeneric,
        rungs,
    })
}
