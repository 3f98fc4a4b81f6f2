//! Per-thread work accounting used by the solver and profiler.
//!
//! Counters are thread-local; [`measure`] snapshots them around a closure so
//! concurrent runs on different threads never interfere.

use std::cell::Cell;
use std::ops::{Add, AddAssign};
use std::time::{Duration, Instant};

thread_local! {
    static ARITH: Cell<u64> = const { Cell::new(0) };
    static NODES: Cell<u64> = const { Cell::new(0) };
    static EXPS: Cell<u64> = const { Cell::new(0) };
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WorkCounters {
    pub arith_ops: u64,
    pub quadrature_nodes: u64,
    pub exp_evals: u64,
    pub elapsed: Duration,
}

impl WorkCounters {
    /// Counter columns only, for determinism checks.
    pub fn counts(&self) -> (u64, u64, u64) {
        (self.arith_ops, self.quadrature_nodes, self.exp_evals)
    }
}

impl Add for WorkCounters {
    type Output = WorkCounters;
    fn add(self, o: WorkCounters) -> WorkCounters {
        WorkCounters {
            arith_ops: self.arith_ops + o.arith_ops,
            quadrature_nodes: self.quadrature_nodes + o.quadrature_nodes,
            exp_evals: self.exp_evals + o.exp_evals,
            elapsed: self.elapsed + o.elapsed,
        }
    }
}

impl AddAssign for WorkCounters {
    fn add_assign(&mut self, o: WorkCounters) {
        *self = *self + o;
    }
}

pub(crate) fn arith(n: u64) {
    ARITH.with(|c| c.set(c.get() + n));
}

pub(crate) fn nodes(n: u64) {
    NODES.with(|c| c.set(c.get() + n));
}

pub(crate) fn exp_eval() {
    EXPS.with(|c| c.set(c.get() + 1));
}

fn snapshot() -> (u64, u64, u64) {
    (
        ARITH.with(Cell::get),
        NODES.with(Cell::get),
        EXPS.with(Cell::get),
    )
}

/// Run `f` and return its result together with the work it performed on
/// this thread.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, WorkCounters) {
    let before = snapshot();
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let after = snapshot();
    (
        out,
        WorkCounters {
            arith_ops: after.0 - before.0,
            quadrature_nodes: after.1 - before.1,
            exp_evals: after.2 - before.2,
            elapsed,
        },
    )
}
