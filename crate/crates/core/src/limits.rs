//! Process-wide size caps for the exhaustive routines.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_CELL_CAP: u64 = 20_000_000;

static CELL_CAP: AtomicU64 = AtomicU64::new(DEFAULT_CELL_CAP);

/// Largest stable cube the enumerators will walk.
pub fn cell_cap() -> u64 {
    CELL_CAP.load(Ordering::Relaxed)
}

pub fn set_cell_cap(cap: u64) {
    CELL_CAP.store(cap, Ordering::Relaxed);
}

pub(crate) fn check(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::SizeCap { what, size, cap })
    } else {
        Ok(())
    }
}
