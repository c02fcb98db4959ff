use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Discretization of the unit torus: Fourier modes `-N..=N` and the uniform
/// physical grid used for pointwise products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridSpecRepr", into = "GridSpecRepr")]
pub struct GridSpec {
    max_mode: usize,
    oversample: usize,
    physical_points: usize,
}

#[derive(Serialize, Deserialize)]
struct GridSpecRepr {
    max_mode: usize,
    oversample: usize,
}

impl TryFrom<GridSpecRepr> for GridSpec {
    type Error = crate::Error;
    fn try_from(r: GridSpecRepr) -> Result<Self> {
        GridSpec::new(r.max_mode, r.oversample)
    }
}

impl From<GridSpec> for GridSpecRepr {
    fn from(g: GridSpec) -> Self {
        GridSpecRepr { max_mode: g.max_mode, oversample: g.oversample }
    }
}

impl GridSpec {
    pub const DEFAULT_MAX_MODE: usize = 128;
    pub const DEFAULT_OVERSAMPLE: usize = 4;

    pub fn new(max_mode: usize, oversample: usize) -> Result<Self> {
        if max_mode == 0 {
            return Err(domain("max_mode must be at least 1"));
        }
        if oversample == 0 {
            return Err(domain("oversample must be at least 1"));
        }
        let physical_points = next_fast_len(oversample * (2 * max_mode + 1));
        Ok(Self { max_mode, oversample, physical_points })
    }

    /// Grid with the default oversampling factor.
    pub fn with_modes(max_mode: usize) -> Result<Self> {
        Self::new(max_mode, Self::DEFAULT_OVERSAMPLE)
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    pub fn oversample(&self) -> usize {
        self.oversample
    }

    pub fn physical_points(&self) -> usize {
        self.physical_points
    }

    /// Number of stored Fourier coefficients, `2N + 1`.
    pub fn mode_count(&self) -> usize {
        2 * self.max_mode + 1
    }

    /// Physical grid spacing `1 / M`.
    pub fn spacing(&self) -> f64 {
        1.0 / self.physical_points as f64
    }

    /// Wavenumbers `-N..=N` in storage order.
    pub fn modes(&self) -> impl Iterator<Item = i64> + Clone {
        let n = self.max_mode as i64;
        -n..=n
    }

    /// Same mode range, refined physical grid.
    pub fn with_oversample(&self, oversample: usize) -> Result<Self> {
        Self::new(self.max_mode, oversample)
    }
}

/// Smallest `2^a 3^b 5^c` that is `>= n`.
pub fn next_fast_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}
