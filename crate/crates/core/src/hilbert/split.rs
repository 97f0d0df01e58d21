use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Division of a composite space into subsystem I (the more significant
/// index in Kronecker order) and subsystem II.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteSplit {
    d_i: usize,
    d_ii: usize,
}

/// Which side of a [`BipartiteSplit`] to keep when tracing out the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    I,
    II,
}

impl BipartiteSplit {
    pub fn new(d_i: usize, d_ii: usize) -> Result<Self> {
        if d_i == 0 || d_ii == 0 {
            return Err(Error::Shape(format!(
                "split dimensions must be positive, got {d_i}x{d_ii}"
            )));
        }
        Ok(Self { d_i, d_ii })
    }

    pub fn d_i(&self) -> usize {
        self.d_i
    }

    pub fn d_ii(&self) -> usize {
        self.d_ii
    }

    pub fn total(&self) -> usize {
        self.d_i * self.d_ii
    }

    pub fn min_dim(&self) -> usize {
        self.d_i.min(self.d_ii)
    }

    pub fn dim_of(&self, side: Subsystem) -> usize {
        match side {
            Subsystem::I => self.d_i,
            Subsystem::II => self.d_ii,
        }
    }

    pub(crate) fn check(&self, total: usize) -> Result<()> {
        if self.total() != total {
            return Err(Error::InconsistentSplit {
                d_i: self.d_i,
                d_ii: self.d_ii,
                total,
            });
        }
        Ok(())
    }
}
