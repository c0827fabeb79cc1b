use std::collections::VecDeque;

use super::{FastKernel, LinearSpace};
use crate::error::{Error, Result};

/// Which index range the history sums cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistoryVariant {
    /// The full convolution Σ_{i=0}^{n} d_i G(t_{n-i}).
    Standalone,
    /// The time-stepping form: G(t_0) never enters the sums, so the first
    /// recorded value is replaced by zero.
    Scheme,
}

/// Running state of a fast convolution: per-node geometric accumulators plus
/// a ring holding the last L values, where L is the head length of the
/// kernel (2 for BE, N_s for SBD).
///
/// Each step is `advance` (fold G(t_{n-L}) into the accumulators) followed by
/// `record` (store G(t_n)). Between the two, `history_sum` gives the part of
/// the convolution that does not involve G(t_n); after `record`,
/// `derivative` gives the whole sum.
#[derive(Debug, Clone)]
pub struct HistoryState<V> {
    variant: HistoryVariant,
    head: Vec<f64>,
    ratios: Vec<f64>,
    feeds: Vec<f64>,
    family1_len: usize,
    accumulators: Vec<V>,
    ring: VecDeque<V>,
    recorded: usize,
    advanced: bool,
}

impl<V: LinearSpace> HistoryState<V> {
    pub fn new(kernel: &FastKernel, variant: HistoryVariant) -> Self {
        let (ratios, feeds, family1_len) = kernel.tail_nodes();
        let head = kernel.head().to_vec();
        HistoryState {
            variant,
            ring: VecDeque::with_capacity(head.len()),
            head,
            ratios,
            feeds,
            family1_len,
            accumulators: Vec::new(),
            recorded: 0,
            advanced: false,
        }
    }

    pub fn variant(&self) -> HistoryVariant {
        self.variant
    }

    /// Index of the most recently recorded value, if any.
    pub fn last_index(&self) -> Option<usize> {
        self.recorded.checked_sub(1)
    }

    /// All accumulators; SBD kernels list family 1 first.
    pub fn accumulators(&self) -> &[V] {
        &self.accumulators
    }

    /// Number of leading accumulators that belong to family 1 (SBD) or all
    /// of them (BE).
    pub fn family1_len(&self) -> usize {
        self.family1_len
    }

    fn lag(&self) -> usize {
        self.head.len()
    }

    /// Moves to step n = number of recorded values, folding G(t_{n-L}) into
    /// the accumulators.
    pub fn advance(&mut self) -> Result<()> {
        if self.advanced {
            return Err(Error::Sequencing("advance called twice without record".into()));
        }
        if self.recorded >= self.lag() {
            let old = self.ring.front().expect("ring holds L values");
            for ((acc, &r), &f) in self.accumulators.iter_mut().zip(&self.ratios).zip(&self.feeds) {
                acc.scale_add(r, f, old);
            }
        }
        self.advanced = true;
        Ok(())
    }

    /// Σ_{i=1}^{n} d_i G(t_{n-i}) at the current step, with compressed weights
    /// beyond the head. Requires `advance` and at least one recorded value.
    pub fn history_sum(&self) -> Result<V> {
        if !self.advanced {
            return Err(Error::Sequencing("history_sum needs advance first".into()));
        }
        let newest = self
            .ring
            .back()
            .ok_or_else(|| Error::Sequencing("history_sum before any value was recorded".into()))?;
        let mut out = newest.zeroed();
        let len = self.ring.len();
        // when the ring is full its oldest entry already lives in the accumulators
        let terms = len.min(self.lag() - 1);
        for i in 1..=terms {
            out.axpy(self.head[i], &self.ring[len - i]);
        }
        for acc in &self.accumulators {
            out.axpy(1.0, acc);
        }
        Ok(out)
    }

    /// Stores G(t_n) for the step opened by `advance`.
    pub fn record(&mut self, value: &V) -> Result<()> {
        if !self.advanced {
            return Err(Error::Sequencing("record needs advance first".into()));
        }
        let stored = if self.recorded == 0 && self.variant == HistoryVariant::Scheme {
            value.zeroed()
        } else {
            value.clone()
        };
        if self.accumulators.is_empty() && !self.ratios.is_empty() {
            self.accumulators = vec![value.zeroed(); self.ratios.len()];
        }
        if self.ring.len() == self.lag() {
            self.ring.pop_front();
        }
        self.ring.push_back(stored);
        self.recorded += 1;
        self.advanced = false;
        Ok(())
    }

    pub fn push(&mut self, value: &V) -> Result<()> {
        self.advance()?;
        self.record(value)
    }

    /// Σ_{i=0}^{n} d_i G(t_{n-i}) for the last recorded index n.
    pub fn derivative(&self) -> Result<V> {
        if self.advanced {
            return Err(Error::Sequencing("derivative requested mid-step".into()));
        }
        let len = self.ring.len();
        let newest = self
            .ring
            .back()
            .ok_or_else(|| Error::Sequencing("derivative before any value was pushed".into()))?;
        let mut out = newest.zeroed();
        for i in 0..len {
            out.axpy(self.head[i], &self.ring[len - 1 - i]);
        }
        for acc in &self.accumulators {
            out.axpy(1.0, acc);
        }
        Ok(out)
    }
}
