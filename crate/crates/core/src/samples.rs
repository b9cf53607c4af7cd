/// Points in ℝ^dim stored row-major.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> crate::Result<Self> {
        if dim == 0 {
            return Err(crate::error::invalid("point dimension must be at least 1"));
        }
        if coords.len() % dim != 0 {
            return Err(crate::error::invalid(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_scalars(values: Vec<f64>) -> Self {
        Self { dim: 1, coords: values }
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        Self {
            dim,
            coords: Vec::with_capacity(dim * n),
        }
    }

    pub fn push(&mut self, point: &[f64]) {
        debug_assert_eq!(point.len(), self.dim);
        self.coords.extend_from_slice(point);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim.max(1))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.iter().map(|p| p[j]).collect()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Pointwise sum with another cloud of the same shape.
    pub fn add(&self, other: &PointCloud) -> crate::Result<PointCloud> {
        if self.dim != other.dim || self.len() != other.len() {
            return Err(crate::Error::DimensionMismatch {
                expected: self.coords.len(),
                got: other.coords.len(),
            });
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(PointCloud { dim: self.dim, coords })
    }

    pub fn scaled(&self, c: f64) -> PointCloud {
        PointCloud {
            dim: self.dim,
            coords: self.coords.iter().map(|v| c * v).collect(),
        }
    }

    /// Median of the Euclidean norms; a tail-robust scale.
    pub fn median_norm(&self) -> f64 {
        let mut norms: Vec<f64> = self.iter().map(|p| p.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
        if norms.is_empty() {
            return 0.0;
        }
        let mid = norms.len() / 2;
        let (_, m, _) = norms.select_nth_unstable_by(mid, f64::total_cmp);
        *m
    }
}
