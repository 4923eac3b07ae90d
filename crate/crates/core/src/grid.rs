use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Per-node tolerance on `| |m| - 1 |` for a field to count as a Landau-Lifshitz state.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Uniform grid on `[0, length]` with `nodes` points, both ends included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    length: f64,
    nodes: usize,
}

impl SpatialGrid {
    pub fn new(length: f64, nodes: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidArgument(format!("grid length must be positive, got {length}")));
        }
        if nodes < 3 {
            return Err(Error::InvalidArgument(format!("grid needs at least 3 nodes, got {nodes}")));
        }
        Ok(SpatialGrid { length, nodes })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.nodes - 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes).map(|j| self.x(j))
    }

    /// Index of the node closest to `x`, with the snap distance.
    pub fn nearest_node(&self, x: f64) -> Result<(usize, f64)> {
        if !(0.0..=self.length).contains(&x) {
            return Err(Error::InvalidArgument(format!("probe x = {x} lies outside [0, {}]", self.length)));
        }
        let j = ((x / self.spacing()).round() as usize).min(self.nodes - 1);
        Ok((j, (self.x(j) - x).abs()))
    }
}

/// Vector samples, one per grid node.
#[derive(Clone, Debug, PartialEq)]
pub struct MagnetizationField {
    grid: SpatialGrid,
    values: Vec<Vec3>,
}

impl MagnetizationField {
    pub fn new(grid: SpatialGrid, values: Vec<Vec3>) -> Result<Self> {
        if values.len() != grid.nodes() {
            return Err(Error::InvalidArgument(format!(
                "field has {} values for a {}-node grid",
                values.len(),
                grid.nodes()
            )));
        }
        if !values.iter().all(Vec3::is_finite) {
            return Err(Error::NonFinite("field values"));
        }
        Ok(MagnetizationField { grid, values })
    }

    pub fn uniform(grid: SpatialGrid, value: Vec3) -> Self {
        MagnetizationField { grid, values: vec![value; grid.nodes()] }
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> Vec3) -> Result<Self> {
        Self::new(grid, grid.positions().map(f).collect())
    }

    pub(crate) fn from_parts_unchecked(grid: SpatialGrid, values: Vec<Vec3>) -> Self {
        debug_assert_eq!(values.len(), grid.nodes());
        MagnetizationField { grid, values }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Vec3] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Vec3> {
        self.values
    }

    /// Each node divided by its own norm.
    pub fn normalized(&self) -> Self {
        MagnetizationField {
            grid: self.grid,
            values: self.values.iter().map(Vec3::normalized).collect(),
        }
    }

    /// Largest `| |m_j| - 1 |` over the nodes.
    pub fn max_norm_deviation(&self) -> f64 {
        self.values.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Fails with the first node whose norm is further than `tolerance` from 1.
    pub fn check_unit_norm(&self, tolerance: f64) -> Result<()> {
        for (node, v) in self.values.iter().enumerate() {
            let norm = v.norm();
            if (norm - 1.0).abs() > tolerance {
                return Err(Error::ConstraintViolation { node, norm, tolerance });
            }
        }
        Ok(())
    }

    pub fn is_unit_norm(&self) -> bool {
        self.check_unit_norm(NORM_TOLERANCE).is_ok()
    }

    /// Componentwise `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        assert_eq!(self.values.len(), other.values.len(), "fields on different grids");
        MagnetizationField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| *a * alpha + *b * beta)
                .collect(),
        }
    }

    /// Max-norm over nodes of the Euclidean node norm.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(Vec3::norm).fold(0.0, f64::max)
    }

    /// Discrete L2 norm with trapezoid weights.
    pub fn l2_norm(&self) -> f64 {
        let h = self.grid.spacing();
        let last = self.values.len() - 1;
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| if j == 0 || j == last { 0.5 * v.norm_squared() } else { v.norm_squared() })
            .sum();
        (sum * h).sqrt()
    }

    /// Node values flattened node-major: `[m_0.x1, m_0.x2, m_0.x3, m_1.x1, ...]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.values.iter().flat_map(|v| v.0).collect()
    }

    pub fn from_flat(grid: SpatialGrid, flat: &[f64]) -> Result<Self> {
        if flat.len() != 3 * grid.nodes() {
            return Err(Error::InvalidArgument(format!(
                "flat vector of length {} does not match {} nodes",
                flat.len(),
                grid.nodes()
            )));
        }
        Self::new(grid, flat.chunks_exact(3).map(|c| Vec3::new(c[0], c[1], c[2])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_nodes() {
        let g = SpatialGrid::new(1.0, 41).unwrap();
        assert_eq!(g.spacing(), 0.025);
        assert_eq!(g.x(40), 1.0);
        assert!(SpatialGrid::new(1.0, 2).is_err());
        assert!(SpatialGrid::new(0.0, 10).is_err());
    }

    #[test]
    fn probe_at_point_six_snaps_to_node_24() {
        let g = SpatialGrid::new(1.0, 41).unwrap();
        let (j, d) = g.nearest_node(0.6).unwrap();
        assert_eq!(j, 24);
        assert!(d < 1e-15);
        assert!(g.nearest_node(1.2).is_err());
    }

    #[test]
    fn snap_distance_at_most_half_spacing() {
        let g = SpatialGrid::new(2.0, 17).unwrap();
        for i in 0..=200 {
            let x = 2.0 * i as f64 / 200.0;
            let (_, d) = g.nearest_node(x).unwrap();
            assert!(d <= 0.5 * g.spacing() + 1e-15);
        }
    }

    #[test]
    fn field_length_must_match() {
        let g = SpatialGrid::new(1.0, 5).unwrap();
        assert!(MagnetizationField::new(g, vec![Vec3::ZERO; 4]).is_err());
        assert!(MagnetizationField::new(g, vec![Vec3::new(f64::NAN, 0.0, 0.0); 5]).is_err());
    }

    #[test]
    fn unit_norm_check_reports_node() {
        let g = SpatialGrid::new(1.0, 4).unwrap();
        let mut values = vec![Vec3::basis(1); 4];
        values[2] = Vec3::new(1.1, 0.0, 0.0);
        let f = MagnetizationField::new(g, values).unwrap();
        match f.check_unit_norm(1e-6) {
            Err(Error::ConstraintViolation { node, .. }) => assert_eq!(node, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(f.normalized().is_unit_norm());
    }

    #[test]
    fn flat_layout_is_node_major() {
        let g = SpatialGrid::new(1.0, 3).unwrap();
        let f = MagnetizationField::from_fn(g, |x| Vec3::new(x, 2.0 * x, 3.0)).unwrap();
        assert_eq!(f.to_flat(), vec![0.0, 0.0, 3.0, 0.5, 1.0, 3.0, 1.0, 2.0, 3.0]);
        assert_eq!(MagnetizationField::from_flat(g, &f.to_flat()).unwrap(), f);
    }
}
