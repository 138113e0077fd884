//! Deliberately broken variants of the closure operators, switched per thread.
//! Only compiled with the `mutants` feature.

use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutant {
    /// `gamma` adds joins without down-closing.
    GammaSkipsDownclose,
    /// `upsilon` collects joins of members of `U` rather than `U⁺`.
    UpsilonOverU,
}

thread_local! {
    static ACTIVE: Cell<Option<Mutant>> = const { Cell::new(None) };
}

pub fn active() -> Option<Mutant> {
    ACTIVE.with(Cell::get)
}

/// Runs `f` with `mutant` active on the current thread.
pub fn with_mutant<R>(mutant: Mutant, f: impl FnOnce() -> R) -> R {
    struct Reset(Option<Mutant>);
    impl Drop for Reset {
        fn drop(&mut self) {
            ACTIVE.with(|a| a.set(self.0));
        }
    }
    let _reset = Reset(ACTIVE.with(|a| a.replace(Some(mutant))));
    f()
}
