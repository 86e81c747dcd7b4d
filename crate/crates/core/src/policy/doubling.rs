use crate::bandit::{Arm, ObservationSlice};
use crate::env::Stream;
use crate::error::Result;

use super::{ElimState, Policy};

/// Where global round `t` falls in the doubling schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoublingPosition {
    /// `floor(log2 t)`.
    pub segment: u32,
    /// `2^segment`, also the segment length.
    pub horizon: u64,
    /// `t - 2^segment + 1`.
    pub inner_round: u64,
}

pub fn doubling_position(t: u64) -> DoublingPosition {
    assert!(t >= 1);
    let segment = t.ilog2();
    let horizon = 1u64 << segment;
    DoublingPosition {
        segment,
        horizon,
        inner_round: t - horizon + 1,
    }
}

/// Horizon-free elimination: rounds `2^i..2^(i+1)-1` run a fresh
/// [`ElimState`] with horizon `2^i`. Nothing carries over between segments.
#[derive(Debug, Clone)]
pub struct ElimDoubling {
    k: usize,
    segment: Option<u32>,
    inner: ElimState,
}

impl ElimDoubling {
    pub fn new(k: usize) -> Self {
        ElimDoubling {
            k,
            segment: None,
            inner: ElimState::new(k, 1),
        }
    }

    pub fn inner(&self) -> &ElimState {
        &self.inner
    }

    pub fn segment(&self) -> Option<u32> {
        self.segment
    }
}

impl Policy for ElimDoubling {
    fn name(&self) -> &'static str {
        "elim-doubling"
    }

    fn select(&mut self, t: u64, _rng: &mut Stream) -> Result<Arm> {
        let pos = doubling_position(t);
        if self.segment != Some(pos.segment) {
            self.segment = Some(pos.segment);
            self.inner = ElimState::new(self.k, pos.horizon);
        }
        debug_assert_eq!(self.inner.round() + 1, pos.inner_round);
        self.inner.select()
    }

    fn observe(&mut self, t: u64, slice: &ObservationSlice<'_>) -> Result<()> {
        self.inner.update(doubling_position(t).inner_round, slice)
    }
}
