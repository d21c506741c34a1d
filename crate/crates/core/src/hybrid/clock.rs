use super::ExecutionKind;
use std::time::Instant;

/// Measures one SSGS execution. `None` means the measurement failed; the
/// controller then treats the pair as a tie.
pub trait ExecutionClock {
    fn time<R>(&mut self, kind: ExecutionKind, f: impl FnOnce() -> R) -> (R, Option<u64>);
}

/// Wall-clock timing with [`Instant`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MonotonicClock;

impl ExecutionClock for MonotonicClock {
    #[inline]
    fn time<R>(&mut self, _: ExecutionKind, f: impl FnOnce() -> R) -> (R, Option<u64>) {
        let start = Instant::now();
        let result = f();
        let nanos = u64::try_from(start.elapsed().as_nanos()).ok();
        (result, nanos)
    }
}

/// Runs the execution but reports whatever the closure returns for its
/// kind. Used to script timings.
pub struct FnClock<F> {
    durations: F,
}

impl<F: FnMut(ExecutionKind) -> Option<u64>> FnClock<F> {
    pub fn new(durations: F) -> Self {
        FnClock { durations }
    }
}

impl<F: FnMut(ExecutionKind) -> Option<u64>> ExecutionClock for FnClock<F> {
    fn time<R>(&mut self, kind: ExecutionKind, f: impl FnOnce() -> R) -> (R, Option<u64>) {
        let result = f();
        (result, (self.durations)(kind))
    }
}

impl<F> std::fmt::Debug for FnClock<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("FnClock")
    }
}
