//! The rank-metric code C_f = {x ↦ a·f(x) + b·x : a, b ∈ F_(q^m)}.
//!
//! A codeword with a ≠ 0 equals a·(f - λx) for λ = -b/a, so its rank is
//! m - w(⟨(1, λ)⟩), with w = 0 for points outside L_f. The whole rank
//! distribution therefore follows from the point weights of L_f.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::linpoly::{LinError, QPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("f is a scalar multiple of x, so C_f is not 2-dimensional over F_(q^m)")]
    Degenerate,
    #[error("minimum distance {d} violates the Singleton bound for m = {m}")]
    Singleton { d: u32, m: u32 },
}

pub type Result<T, E = CodeError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCode {
    pub q: u64,
    pub m: u32,
    /// (m, m, q, d)
    pub params: [u64; 4],
    pub mrd: bool,
    /// rank → number of codewords
    pub rank_distribution: BTreeMap<u32, u64>,
    pub max_weight: u32,
}

impl RankCode {
    pub fn new(f: &QPolynomial) -> Result<RankCode> {
        if f.is_scalar() {
            return Err(CodeError::Degenerate);
        }
        let q = f.field().q().map_err(LinError::from)?;
        let m = f.m() as u32;
        let qm = q.pow(m);
        let weights = f.point_weights()?;
        let max_weight = weights.iter().map(|w| w.1).max().unwrap_or(0);
        let mut dist = BTreeMap::new();
        dist.insert(0, 1);
        // a = 0, b ≠ 0, plus every λ outside L_f
        let unhit = qm - weights.len() as u64;
        *dist.entry(m).or_insert(0) += (qm - 1) * (1 + unhit);
        for (_, w) in weights {
            *dist.entry(m - w).or_insert(0) += qm - 1;
        }
        let d = m - max_weight;
        if d + 1 > m {
            return Err(CodeError::Singleton { d, m });
        }
        Ok(RankCode {
            q,
            m,
            params: [m as u64, m as u64, q, d as u64],
            mrd: d == m - 1,
            rank_distribution: dist,
            max_weight,
        })
    }

    pub fn min_distance(&self) -> u32 {
        self.params[3] as u32
    }

    /// Number of codewords, q^(2m).
    pub fn size(&self) -> u64 {
        self.rank_distribution.values().sum()
    }
}

pub fn min_distance(f: &QPolynomial) -> Result<u32> {
    Ok(RankCode::new(f)?.min_distance())
}

pub fn is_mrd(f: &QPolynomial) -> Result<bool> {
    Ok(RankCode::new(f)?.mrd)
}

/// The computed minimum distance of C_(f_{δ,s}) set against the two values
/// on offer for the non-MRD case: n - 2 and 2n - 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistanceCandidates {
    pub computed: u32,
    pub n_minus_2: u32,
    pub two_n_minus_2: u32,
    pub equals_m_minus_max_weight: bool,
}

pub fn distance_candidates(code: &RankCode) -> DistanceCandidates {
    let n = code.m / 2;
    DistanceCandidates {
        computed: code.min_distance(),
        n_minus_2: n.saturating_sub(2),
        two_n_minus_2: 2 * n - 2,
        equals_m_minus_max_weight: code.min_distance() == code.m - code.max_weight,
    }
}
