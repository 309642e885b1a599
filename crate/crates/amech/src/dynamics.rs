//! Time evolution: motion and scattering phases, stages, steps, and velocity
//! reversal.
//!
//! A stage is Motion-Scattering-Motion and is exactly invertible; a step is
//! `p` stages. All updates are pure F_p arithmetic, so evolution over any
//! number of steps is free of rounding error and exactly reversible.

use rand::Rng;
use thiserror::Error;

use crate::field::{Field, Vec2};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("duplicate particle label {0}")]
    DuplicateLabel(u32),
    #[error("coordinate {value} out of range for p = {p}")]
    CoordinateOutOfRange { value: u32, p: u32 },
}

/// A labeled particle: identity, position and velocity on the p x p board.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Particle {
    pub label: u32,
    pub pos: Vec2,
    pub vel: Vec2,
}

/// A complete microstate: the prime and the ordered list of labeled particles.
///
/// Particle order is stable under every evolution operation, so two
/// configurations compare equal exactly when they describe the same
/// microstate particle by particle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    field: Field,
    particles: Vec<Particle>,
}

impl Configuration {
    /// Builds a configuration, checking label uniqueness and coordinate ranges.
    pub fn new(field: Field, particles: Vec<Particle>) -> Result<Self, ConfigError> {
        let mut labels: Vec<u32> = particles.iter().map(|q| q.label).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(ConfigError::DuplicateLabel(w[0]));
        }
        for q in &particles {
            for r in [q.pos.x, q.pos.y, q.vel.x, q.vel.y] {
                if !field.contains(r) {
                    return Err(ConfigError::CoordinateOutOfRange {
                        value: r.value(),
                        p: field.prime(),
                    });
                }
            }
        }
        Ok(Configuration { field, particles })
    }

    pub fn empty(field: Field) -> Self {
        Configuration {
            field,
            particles: Vec::new(),
        }
    }

    /// Uniformly random microstate of `n` particles labeled `0..n`.
    pub fn random(field: Field, n: u32, rng: &mut impl Rng) -> Self {
        let p = field.prime();
        let particles = (0..n)
            .map(|label| Particle {
                label,
                pos: Vec2::new(
                    field.residue(rng.random_range(0..p) as u64),
                    field.residue(rng.random_range(0..p) as u64),
                ),
                vel: Vec2::new(
                    field.residue(rng.random_range(0..p) as u64),
                    field.residue(rng.random_range(0..p) as u64),
                ),
            })
            .collect();
        Configuration { field, particles }
    }

    /// A k x k block of particles in the top-left corner with random
    /// velocities, one particle per cell, labeled in column-major order.
    pub fn random_block(field: Field, k: u32, rng: &mut impl Rng) -> Self {
        let p = field.prime();
        assert!(k <= p, "block edge {k} exceeds board edge {p}");
        let mut particles = Vec::with_capacity((k * k) as usize);
        for label in 0..k * k {
            particles.push(Particle {
                label,
                pos: Vec2::new(
                    field.residue((label / k) as u64),
                    field.residue((label % k) as u64),
                ),
                vel: Vec2::new(
                    field.residue(rng.random_range(0..p) as u64),
                    field.residue(rng.random_range(0..p) as u64),
                ),
            });
        }
        Configuration { field, particles }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prime(&self) -> u32 {
        self.field.prime()
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// F_p sum of all velocities; invariant under every stage.
    pub fn total_momentum(&self) -> Vec2 {
        let mut total = Vec2::default();
        for q in &self.particles {
            total = self.field.vec_add(total, q.vel);
        }
        total
    }

    fn motion_in_place(&mut self) {
        for q in &mut self.particles {
            q.pos = self.field.vec_add(q.pos, q.vel);
        }
    }

    fn inverse_motion_in_place(&mut self) {
        for q in &mut self.particles {
            q.pos = self.field.vec_sub(q.pos, q.vel);
        }
    }

    fn scattering_in_place(&mut self) {
        let p = self.field.prime() as u64;
        // Group particle indices by cell. Sorting keeps the grouping
        // deterministic; the per-cell updates are independent of each other,
        // so the outcome does not depend on cell visit order anyway.
        let mut cells: Vec<(u64, u32)> = self
            .particles
            .iter()
            .enumerate()
            .map(|(i, q)| {
                (
                    q.pos.y.value() as u64 * p + q.pos.x.value() as u64,
                    i as u32,
                )
            })
            .collect();
        cells.sort_unstable();

        let mut run = 0;
        while run < cells.len() {
            let key = cells[run].0;
            let mut end = run + 1;
            while end < cells.len() && cells[end].0 == key {
                end += 1;
            }
            let k = end - run;
            // Cells holding p or more particles do not scatter.
            if k >= 2 && (k as u64) < p {
                let velocities: Vec<Vec2> = cells[run..end]
                    .iter()
                    .map(|&(_, i)| self.particles[i as usize].vel)
                    .collect();
                let avg = self.field.vec_avg(&velocities);
                let twice_avg = self.field.vec_add(avg, avg);
                for &(_, i) in &cells[run..end] {
                    let q = &mut self.particles[i as usize];
                    // v' = avg - (v - avg) = 2*avg - v
                    q.vel = self.field.vec_sub(twice_avg, q.vel);
                }
            }
            run = end;
        }
    }

    fn stage_in_place(&mut self) {
        self.motion_in_place();
        self.scattering_in_place();
        self.motion_in_place();
    }

    /// Motion phase: every position advances by its velocity.
    pub fn motion_phase(&self) -> Self {
        let mut c = self.clone();
        c.motion_in_place();
        c
    }

    /// Scattering phase: in every cell shared by `2 <= k < p` particles, each
    /// velocity is reflected about the cell's F_p-average velocity. Positions
    /// are untouched and per-cell momentum is conserved.
    pub fn scattering_phase(&self) -> Self {
        let mut c = self.clone();
        c.scattering_in_place();
        c
    }

    /// One stage: Motion, Scattering, Motion.
    pub fn stage(&self) -> Self {
        let mut c = self.clone();
        c.stage_in_place();
        c
    }

    /// `n` stages.
    pub fn advance_stages(&self, n: u64) -> Self {
        let mut c = self.clone();
        for _ in 0..n {
            c.stage_in_place();
        }
        c
    }

    /// `n` steps of `p` stages each.
    pub fn advance_steps(&self, n: u64) -> Self {
        self.advance_stages(n * self.field.prime() as u64)
    }

    /// Negates every velocity; positions and labels are unchanged.
    /// Applying it twice is the identity.
    pub fn reverse_velocities(&self) -> Self {
        let mut c = self.clone();
        for q in &mut c.particles {
            q.vel = c.field.vec_neg(q.vel);
        }
        c
    }

    /// The exact inverse of [`stage`](Self::stage), built directly: inverse
    /// motion, scattering (its own inverse), inverse motion. Agrees with
    /// `reverse_velocities . stage . reverse_velocities` on every input.
    pub fn inverse_stage(&self) -> Self {
        let mut c = self.clone();
        c.inverse_motion_in_place();
        c.scattering_in_place();
        c.inverse_motion_in_place();
        c
    }
}
