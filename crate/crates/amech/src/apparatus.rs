//! The block-counting measuring apparatus and exact macrostate entropy.
//!
//! The apparatus partitions the p x p board into square blocks (edge 3 by
//! default), padding the last block row and column where the edge does not
//! divide p. A measurement reports only the particle count per block; the
//! entropy of that macrostate is the base-2 log of the number of microstates
//! compatible with it, computed exactly from log-factorial sums:
//!
//! ```text
//! S = 2*N*ld p + sum_j N_j * ld|b_j| + ld(N!) - sum_k ld(N_k!)
//! ```
//!
//! where `|b_j|` is the number of real (non-padding) cells in block `j`.

use rand::Rng;
use thiserror::Error;

use crate::dynamics::{Configuration, Particle};
use crate::field::{Field, Vec2};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ApparatusError {
    #[error("block edge {edge} invalid for p = {p}; need 1 <= edge <= p")]
    BadBlockEdge { edge: u32, p: u32 },
    #[error("counts grid has {got} entries, apparatus expects {expected}")]
    CountsShape { expected: usize, got: usize },
}

/// A nonnegative entropy in bits (base-2).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyBits(f64);

impl EntropyBits {
    pub const ZERO: EntropyBits = EntropyBits(0.0);

    /// Wraps a bit value, clamping the sub-nanobit negatives that exact
    /// cancellations can leave behind in floating point.
    pub fn new(bits: f64) -> Self {
        assert!(
            bits.is_finite() && bits > -1e-6,
            "entropy must be finite and >= 0: {bits}"
        );
        EntropyBits(bits.max(0.0))
    }

    pub fn bits(self) -> f64 {
        self.0
    }
}

/// `ld(n!)` by exact summation of base-2 logarithms (no Stirling approximation).
pub fn log2_factorial(n: u64) -> f64 {
    (1..=n).map(|k| (k as f64).log2()).sum()
}

/// Particle counts per block: the macrostate the apparatus reports.
///
/// Layout is row-major by block row (`by`), i.e. index `by * grid_dim + bx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCounts {
    grid_dim: u32,
    counts: Vec<u64>,
    total: u64,
}

impl BlockCounts {
    pub fn new(grid_dim: u32, counts: Vec<u64>) -> Result<Self, ApparatusError> {
        let expected = (grid_dim as usize) * (grid_dim as usize);
        if counts.len() != expected {
            return Err(ApparatusError::CountsShape {
                expected,
                got: counts.len(),
            });
        }
        let total = counts.iter().sum();
        Ok(BlockCounts {
            grid_dim,
            counts,
            total,
        })
    }

    pub fn grid_dim(&self) -> u32 {
        self.grid_dim
    }

    pub fn count(&self, bx: u32, by: u32) -> u64 {
        self.counts[(by * self.grid_dim + bx) as usize]
    }

    /// Row-major slice of all block counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total number of particles.
    pub fn total(&self) -> u64 {
        self.total
    }
}

/// The measuring device: block geometry over the board of a given field.
#[derive(Debug, Clone, PartialEq)]
pub struct Apparatus {
    field: Field,
    block_edge: u32,
    grid_dim: u32,
    /// Real (non-padding) cells per block, row-major by block row.
    real_cells: Vec<u64>,
}

impl Apparatus {
    /// Builds the apparatus for blocks of the given edge length.
    ///
    /// With edge 3 and p = 19 this is the 7 x 7 grid whose interior blocks
    /// hold 9 real cells, the last block row and column hold 3, and the far
    /// corner holds 1.
    pub fn new(field: &Field, block_edge: u32) -> Result<Self, ApparatusError> {
        let p = field.prime();
        if block_edge < 1 || block_edge > p {
            return Err(ApparatusError::BadBlockEdge {
                edge: block_edge,
                p,
            });
        }
        let grid_dim = p.div_ceil(block_edge);
        let extent = |b: u32| -> u64 { (p - b * block_edge).min(block_edge) as u64 };
        let mut real_cells = Vec::with_capacity((grid_dim * grid_dim) as usize);
        for by in 0..grid_dim {
            for bx in 0..grid_dim {
                real_cells.push(extent(bx) * extent(by));
            }
        }
        debug_assert_eq!(real_cells.iter().sum::<u64>(), p as u64 * p as u64);
        Ok(Apparatus {
            field: field.clone(),
            block_edge,
            grid_dim,
            real_cells,
        })
    }

    /// The default 3 x 3 block apparatus.
    pub fn standard(field: &Field) -> Self {
        Apparatus::new(field, 3).expect("edge 3 is valid for every prime p >= 3")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prime(&self) -> u32 {
        self.field.prime()
    }

    pub fn block_edge(&self) -> u32 {
        self.block_edge
    }

    pub fn grid_dim(&self) -> u32 {
        self.grid_dim
    }

    /// Number of real cells in block `(bx, by)`.
    pub fn real_cells(&self, bx: u32, by: u32) -> u64 {
        self.real_cells[(by * self.grid_dim + bx) as usize]
    }

    /// Measures a microstate: particle count per block. Labels and
    /// velocities are discarded.
    pub fn coarse_grain(&self, c: &Configuration) -> BlockCounts {
        assert_eq!(
            c.prime(),
            self.prime(),
            "configuration and apparatus use different p"
        );
        let mut counts = vec![0u64; (self.grid_dim * self.grid_dim) as usize];
        for q in c.particles() {
            let bx = q.pos.x.value() / self.block_edge;
            let by = q.pos.y.value() / self.block_edge;
            counts[(by * self.grid_dim + bx) as usize] += 1;
        }
        BlockCounts {
            grid_dim: self.grid_dim,
            counts,
            total: c.len() as u64,
        }
    }

    /// Base-2 log of the number of microstates compatible with `m`.
    ///
    /// Identical to [`macrostate_entropy`](Self::macrostate_entropy); exposed
    /// separately so callers can speak about cardinalities rather than bits.
    pub fn microstate_count_ld(&self, m: &BlockCounts) -> f64 {
        assert_eq!(
            m.grid_dim, self.grid_dim,
            "counts grid does not match apparatus"
        );
        let n = m.total;
        let p = self.prime() as f64;
        let mut s = 2.0 * n as f64 * p.log2() + log2_factorial(n);
        for (j, &nj) in m.counts.iter().enumerate() {
            s += nj as f64 * (self.real_cells[j] as f64).log2();
            s -= log2_factorial(nj);
        }
        s
    }

    /// Exact entropy of the uniform macrostate `m`, in bits.
    pub fn macrostate_entropy(&self, m: &BlockCounts) -> EntropyBits {
        EntropyBits::new(self.microstate_count_ld(m))
    }

    /// Entropy of the apparatus reading of a microstate: coarse-grain, then
    /// measure the resulting macrostate.
    pub fn observed_entropy(&self, c: &Configuration) -> EntropyBits {
        self.macrostate_entropy(&self.coarse_grain(c))
    }

    /// Draws a uniformly random microstate compatible with the macrostate:
    /// each of the `N_j` particles of block `j` lands on a uniformly random
    /// real cell of that block, every velocity is uniform over F_p x F_p.
    /// Labels run `0..N` in generation order (block row-major, then count).
    pub fn sample_microstate(&self, m: &BlockCounts, rng: &mut impl Rng) -> Configuration {
        assert_eq!(
            m.grid_dim, self.grid_dim,
            "counts grid does not match apparatus"
        );
        let field = &self.field;
        let p = field.prime();
        let mut particles = Vec::with_capacity(m.total as usize);
        let mut label = 0u32;
        for by in 0..self.grid_dim {
            for bx in 0..self.grid_dim {
                let x0 = bx * self.block_edge;
                let y0 = by * self.block_edge;
                let x_extent = (p - x0).min(self.block_edge);
                let y_extent = (p - y0).min(self.block_edge);
                for _ in 0..m.count(bx, by) {
                    particles.push(Particle {
                        label,
                        pos: Vec2::new(
                            field.residue((x0 + rng.random_range(0..x_extent)) as u64),
                            field.residue((y0 + rng.random_range(0..y_extent)) as u64),
                        ),
                        vel: Vec2::new(
                            field.residue(rng.random_range(0..p) as u64),
                            field.residue(rng.random_range(0..p) as u64),
                        ),
                    });
                    label += 1;
                }
            }
        }
        Configuration::new(field.clone(), particles)
            .expect("sampled particles have fresh labels and in-range coordinates")
    }
}

/// Closed-form entropies of reference descriptions of an `n`-particle state,
/// ordered from least to most informed observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceEntropies {
    /// Only the particle count is known: `4n ld p`.
    pub count_only: EntropyBits,
    /// The occupied cells are known exactly, but not which particle is
    /// where: `2n ld p + ld(n!)`.
    pub pattern_unlabeled: EntropyBits,
    /// Each particle is known to lie in a square region of the given edge:
    /// `2n ld p + 2n ld(edge)`.
    pub region_only: EntropyBits,
    /// Every particle's position is known: `2n ld p`.
    pub positions_known: EntropyBits,
    /// Positions and velocities are all known: 0.
    pub fully_known: EntropyBits,
}

/// Evaluates the five closed-form reference entropies for `n` particles on
/// the board of `field`, with `region_edge` the edge of the bounding region
/// used by the region-level description.
pub fn reference_entropies(field: &Field, n: u64, region_edge: u64) -> ReferenceEntropies {
    let ld_p = (field.prime() as f64).log2();
    let nf = n as f64;
    let positional = 2.0 * nf * ld_p;
    ReferenceEntropies {
        count_only: EntropyBits::new(4.0 * nf * ld_p),
        pattern_unlabeled: EntropyBits::new(positional + log2_factorial(n)),
        region_only: EntropyBits::new(positional + 2.0 * nf * (region_edge as f64).log2()),
        positions_known: EntropyBits::new(positional),
        fully_known: EntropyBits::ZERO,
    }
}
