//! Uniform grids on the axial line and the radial half-line.
//!
//! Both kinds carry Dirichlet ghost nodes one spacing beyond the last
//! unknown. The axial grid is symmetric about z = 0 and always contains it.
//! The radial grid sits at half-integer nodes r_i = (i + ½)h, so the
//! coordinate singularity at r = 0 is never sampled.

use alloc::vec::Vec;

use crate::configurations::Domain;
use crate::error::GridError;
use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub struct UniformGrid {
    domain: Domain,
    first: f64,
    spacing: f64,
    len: usize,
}

impl UniformGrid {
    /// Axial grid on (−Z, Z) with `intervals_per_side` cells on each side
    /// of the origin; ±Z are the Dirichlet ghosts.
    pub fn axial(half_extent: f64, intervals_per_side: usize) -> Result<Self, GridError> {
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(GridError::InvalidExtent { parameter: "half_extent", value: half_extent });
        }
        if intervals_per_side < 2 {
            return Err(GridError::TooFewNodes { required: 3, got: 2 * intervals_per_side.saturating_sub(1) + 1 });
        }
        let h = half_extent / intervals_per_side as f64;
        Ok(Self { domain: Domain::Axial, first: -half_extent + h, spacing: h, len: 2 * intervals_per_side - 1 })
    }

    /// Axial grid whose spacing does not exceed `max_spacing` and on which
    /// every breakpoint is a node. The half extent is rounded up to a whole
    /// number of cells.
    pub fn axial_resolving(half_extent: f64, max_spacing: f64, breakpoints: &[f64]) -> Result<Self, GridError> {
        if !(max_spacing.is_finite() && max_spacing > 0.0) {
            return Err(GridError::InvalidExtent { parameter: "max_spacing", value: max_spacing });
        }
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(GridError::InvalidExtent { parameter: "half_extent", value: half_extent });
        }
        // The smallest nonzero |breakpoint| sets the cell so that all of them
        // land on nodes; the geometries here only ever have ±b.
        let anchor = breakpoints.iter().map(|b| math::abs(*b)).filter(|b| *b > 0.0).fold(f64::INFINITY, f64::min);
        let h = if anchor.is_finite() {
            anchor / math::ceil(anchor / max_spacing)
        } else {
            max_spacing
        };
        let cells = math::ceil(half_extent / h - 1e-9) as usize;
        let grid = Self::axial(cells as f64 * h, cells.max(2))?;
        grid.check_breakpoints(breakpoints)?;
        Ok(grid)
    }

    /// Radial grid with spacing h = r₀/(k + ½), so that r₀ is node `k`, and
    /// a Dirichlet ghost at the first half-node at or beyond `outer`.
    pub fn radial(r0: f64, nodes_inside: usize, outer: f64) -> Result<Self, GridError> {
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(GridError::InvalidExtent { parameter: "r0", value: r0 });
        }
        if !(outer.is_finite() && outer > r0) {
            return Err(GridError::InvalidExtent { parameter: "outer", value: outer });
        }
        if nodes_inside < 1 {
            return Err(GridError::TooFewNodes { required: 1, got: 0 });
        }
        let h = r0 / (nodes_inside as f64 + 0.5);
        let len = math::ceil(outer / h - 0.5 - 1e-9) as usize;
        Ok(Self { domain: Domain::Radial, first: 0.5 * h, spacing: h, len: len.max(nodes_inside + 2) })
    }

    /// Radial half-node grid with `len` unknowns and the given spacing.
    pub fn radial_uniform(spacing: f64, len: usize) -> Result<Self, GridError> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(GridError::InvalidExtent { parameter: "spacing", value: spacing });
        }
        if len < 3 {
            return Err(GridError::TooFewNodes { required: 3, got: len });
        }
        Ok(Self { domain: Domain::Radial, first: 0.5 * spacing, spacing, len })
    }

    /// Rebuilds a grid from sampled coordinates, checking uniform spacing.
    pub fn from_coords(domain: Domain, coords: &[f64]) -> Result<Self, GridError> {
        if coords.len() < 3 {
            return Err(GridError::TooFewNodes { required: 3, got: coords.len() });
        }
        let h = (coords[coords.len() - 1] - coords[0]) / (coords.len() - 1) as f64;
        let ok = coords
            .windows(2)
            .all(|w| math::abs(w[1] - w[0] - h) <= 1e-9 * h);
        if !ok || h <= 0.0 {
            return Err(GridError::NotUniform);
        }
        Ok(Self { domain, first: coords[0], spacing: h, len: coords.len() })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn node(&self, i: usize) -> f64 {
        self.first + i as f64 * self.spacing
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.node(i)).collect()
    }

    /// Position of the lower Dirichlet ghost (axial) or the origin (radial).
    pub fn lower_boundary(&self) -> f64 {
        match self.domain {
            Domain::Axial => self.first - self.spacing,
            Domain::Radial => 0.0,
        }
    }

    /// Position of the upper Dirichlet ghost node.
    pub fn upper_boundary(&self) -> f64 {
        self.node(self.len)
    }

    pub fn index_of(&self, x: f64) -> Option<usize> {
        let s = (x - self.first) / self.spacing;
        let i = math::round(s);
        if i < 0.0 || i >= self.len as f64 || math::abs(s - i) > 1e-8 {
            return None;
        }
        Some(i as usize)
    }

    pub fn check_breakpoints(&self, breakpoints: &[f64]) -> Result<(), GridError> {
        for &b in breakpoints {
            if b <= self.lower_boundary() || b >= self.upper_boundary() {
                return Err(GridError::BreakpointOutside { point: b });
            }
            if self.index_of(b).is_none() {
                return Err(GridError::BreakpointNotNode { point: b });
            }
        }
        Ok(())
    }

    /// Refinement factor that keeps every node (and therefore every
    /// breakpoint) a node: 2 on the axial line, 3 on the half-node radial grid.
    pub fn refinement_factor(&self) -> usize {
        match self.domain {
            Domain::Axial => 2,
            Domain::Radial => 3,
        }
    }

    /// The grid refined by [`refinement_factor`](Self::refinement_factor),
    /// with the same Dirichlet boundaries.
    pub fn refined(&self) -> Self {
        let f = self.refinement_factor();
        let h = self.spacing / f as f64;
        match self.domain {
            Domain::Axial => Self { domain: self.domain, first: self.lower_boundary() + h, spacing: h, len: f * (self.len + 1) - 1 },
            Domain::Radial => Self { domain: self.domain, first: 0.5 * h, spacing: h, len: f * self.len + 1 },
        }
    }

    /// Same spacing, twice the outer extent.
    pub fn doubled_extent(&self) -> Self {
        match self.domain {
            Domain::Axial => Self {
                domain: self.domain,
                first: self.first - ((self.len + 1) / 2) as f64 * self.spacing,
                spacing: self.spacing,
                len: 2 * self.len + 1,
            },
            // Ghost moves from (N + ½)h to (2N + 3/2)h, half a cell past double.
            Domain::Radial => Self { domain: self.domain, first: self.first, spacing: self.spacing, len: 2 * self.len + 1 },
        }
    }
}
