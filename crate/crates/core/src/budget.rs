//! Wall-clock caps for the exhaustive searches.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Environment variable holding the search cap in seconds.
pub const BUDGET_ENV: &str = "VFTK_BUDGET_SECONDS";

#[derive(Debug, Clone, Copy)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn seconds(secs: f64) -> Self {
        Budget {
            deadline: Some(Instant::now() + Duration::from_secs_f64(secs.max(0.0))),
        }
    }

    /// Reads `VFTK_BUDGET_SECONDS`; unset or unparsable means unlimited.
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse::<f64>().ok()) {
            Some(s) if s.is_finite() => Budget::seconds(s),
            _ => Budget::unlimited(),
        }
    }

    pub fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExceeded),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

/// Amortizes clock reads inside hot loops.
#[derive(Debug)]
pub(crate) struct Ticker<'a> {
    budget: &'a Budget,
    count: u32,
}

impl<'a> Ticker<'a> {
    pub(crate) fn new(budget: &'a Budget) -> Self {
        Ticker { budget, count: 0 }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.count = self.count.wrapping_add(1);
        if self.count % 4096 == 0 {
            self.budget.check()
        } else {
            Ok(())
        }
    }
}
