//! The utility-function contract shared by every algorithm in the crate.

use crate::ground::{Assignment, ItemSet};

/// A nonnegative set utility with a declared upper bound.
///
/// Algorithms treat the oracle as pure: the same set always yields the same
/// value, and evaluation is safe from multiple threads. Monotonicity and
/// submodularity are *claims*, checkable with [`crate::check_monotone_submodular`],
/// never assumptions enforced here.
pub trait ValueOracle {
    /// Utility of an arbitrary item set.
    fn eval_set(&self, items: &ItemSet) -> f64;

    /// An upper bound B on any value this oracle can return.
    fn upper_bound(&self) -> f64;

    /// Utility of a feasible assignment.
    fn eval(&self, a: &Assignment) -> f64 {
        self.eval_set(a.set())
    }
}

impl<T: ValueOracle + ?Sized> ValueOracle for &T {
    fn eval_set(&self, items: &ItemSet) -> f64 {
        (**self).eval_set(items)
    }
    fn upper_bound(&self) -> f64 {
        (**self).upper_bound()
    }
}

/// Closure-backed oracle, mostly for tests and ad-hoc experiments.
pub struct FnOracle<F: Fn(&ItemSet) -> f64> {
    func: F,
    bound: f64,
}

impl<F: Fn(&ItemSet) -> f64> FnOracle<F> {
    pub fn new(bound: f64, func: F) -> Self {
        FnOracle { func, bound }
    }
}

impl<F: Fn(&ItemSet) -> f64> ValueOracle for FnOracle<F> {
    fn eval_set(&self, items: &ItemSet) -> f64 {
        (self.func)(items)
    }

    fn upper_bound(&self) -> f64 {
        self.bound
    }
}

/// Absolute tolerance used by every equality-style value comparison.
pub const VALUE_TOLERANCE: f64 = 1e-9;
