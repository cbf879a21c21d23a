use std::sync::Arc;

use serde::Serialize;

use super::hom::{are_isomorphic, endo_degree};
use super::meataxe::chop;
use super::module::{regular_module, GModule};
use crate::config::Config;
use crate::error::{internal_err, Result};
use crate::group::Group;

/// A distinct simple `F_ℓ[G]`-module.
#[derive(Debug, Clone, Serialize)]
pub struct SimpleInfo {
    /// Dimension over `F_ℓ`.
    pub d: usize,
    /// Degree of the endomorphism field over `F_ℓ`.
    pub e: usize,
    /// Multiplicity as a composition factor of the regular module.
    pub mult: usize,
    #[serde(skip)]
    pub witness: GModule,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimpleSummary {
    pub group: String,
    pub ell: u32,
    pub simples: Vec<SimpleInfo>,
    /// `Σ d²/e`, the dimension of `F_ℓ[G]/J`.
    pub dim_semisimple: usize,
    pub dim_radical: usize,
}

impl SimpleSummary {
    /// Number of absolutely irreducible modules, `Σ e`.
    pub fn brauer_count(&self) -> usize {
        self.simples.iter().map(|s| s.e).sum()
    }
}

/// Traces of a few fixed words; equal for isomorphic modules.
fn fingerprint(m: &GModule) -> Vec<u32> {
    let k = m.num_gens();
    const WORDS: [&[usize]; 6] = [&[0], &[1], &[0, 1], &[0, 0, 1], &[0, 1, 1], &[0, 1, 0, 1, 1]];
    WORDS
        .iter()
        .map(|w| {
            let w: Vec<usize> = w.iter().map(|&s| s % k).collect();
            m.word_matrix(&w).trace()
        })
        .collect()
}

/// Chop the regular module and collect its distinct simple factors.
pub fn semisimple_summary(group: &Arc<Group>, ell: u32, seed: u64, cfg: &Config) -> Result<SimpleSummary> {
    let reg = regular_module(group, ell, cfg)?;
    let factors = chop(&reg, seed, cfg.chop_retry_budget)?;
    let mut simples: Vec<(Vec<u32>, SimpleInfo)> = Vec::new();
    'factors: for f in factors {
        let fp = fingerprint(&f);
        for (seen_fp, s) in simples.iter_mut() {
            if s.d == f.dim() && *seen_fp == fp && are_isomorphic(&s.witness, &f)? {
                s.mult += 1;
                continue 'factors;
            }
        }
        let e = endo_degree(&f)?;
        simples.push((
            fp,
            SimpleInfo {
                d: f.dim(),
                e,
                mult: 1,
                witness: f,
            },
        ));
    }
    let mut simples: Vec<SimpleInfo> = simples.into_iter().map(|(_, s)| s).collect();
    simples.sort_by_key(|s| (s.d, s.e));
    let n = group.order();
    if simples.iter().map(|s| s.d * s.mult).sum::<usize>() != n {
        return Err(internal_err!("composition factor dimensions do not sum to {n}"));
    }
    let dim_semisimple: usize = simples.iter().map(|s| s.d * s.d / s.e).sum();
    if dim_semisimple > n {
        return Err(internal_err!("semisimple dimension {dim_semisimple} exceeds {n}"));
    }
    Ok(SimpleSummary {
        group: group.descriptor(),
        ell,
        simples,
        dim_semisimple,
        dim_radical: n - dim_semisimple,
    })
}
