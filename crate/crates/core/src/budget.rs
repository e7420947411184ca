use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Default ceiling on projected elementary operations.
pub const DEFAULT_MAX_OPS: u128 = 1_000_000_000;

/// Default wall-clock limit for automorphism searches.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(600);

/// Work limits shared by every brute-force check.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_ops: u128,
    pub timeout: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_ops: DEFAULT_MAX_OPS, timeout: DEFAULT_TIMEOUT }
    }
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget { max_ops: u128::MAX, timeout: Duration::from_secs(u64::MAX / 4) }
    }

    pub fn with_max_ops(max_ops: u128) -> Budget {
        Budget { max_ops, ..Budget::default() }
    }

    pub fn check(&self, projected: u128) -> Result<()> {
        if projected > self.max_ops {
            return Err(Error::Scale { projected, budget: self.max_ops });
        }
        Ok(())
    }

    pub fn deadline(&self) -> Deadline {
        Deadline { start: Instant::now(), limit: self.timeout }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Deadline {
    start: Instant,
    limit: Duration,
}

impl Deadline {
    #[inline]
    pub fn expired(&self) -> bool {
        self.start.elapsed() > self.limit
    }

    pub fn limit_secs(&self) -> u64 {
        self.limit.as_secs()
    }
}
