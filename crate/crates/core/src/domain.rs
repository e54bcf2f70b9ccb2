//! Base sets that functions live on: index ranges, index grids, intervals,
//! and axis-aligned rectangles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Interval> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "interval endpoints must be finite, got [{a}, {b}]"
            )));
        }
        if a >= b {
            return Err(Error::InvalidDomain(format!(
                "interval requires a < b, got [{a}, {b}]"
            )));
        }
        Ok(Interval { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

/// Axis-aligned rectangle `[a, b] x [c, d]` with `a < b`, `c < d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Rectangle {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Rectangle> {
        let x = Interval::new(a, b)?;
        let y = Interval::new(c, d)?;
        let _ = (x, y);
        Ok(Rectangle { a, b, c, d })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// The `[a, b]` side.
    pub fn x_interval(&self) -> Interval {
        Interval {
            a: self.a,
            b: self.b,
        }
    }

    /// The `[c, d]` side.
    pub fn y_interval(&self) -> Interval {
        Interval {
            a: self.c,
            b: self.d,
        }
    }

    pub fn area(&self) -> f64 {
        (self.b - self.a) * (self.d - self.c)
    }
}

/// Where a function lives: a finite index set or a continuum.
///
/// Discrete indices are 1-based; a grid point is `(k, l)` with
/// `1 <= k <= n`, `1 <= l <= m`, stored row-major (`k` outer, `l` inner).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    IndexRange1D { n: usize },
    IndexGrid2D { n: usize, m: usize },
    Interval(Interval),
    Rectangle(Rectangle),
}

impl Domain {
    pub fn index_range(n: usize) -> Result<Domain> {
        if n == 0 {
            return Err(Error::InvalidDomain("index range requires n >= 1".into()));
        }
        Ok(Domain::IndexRange1D { n })
    }

    pub fn index_grid(n: usize, m: usize) -> Result<Domain> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDomain(format!(
                "index grid requires n, m >= 1, got {n} x {m}"
            )));
        }
        Ok(Domain::IndexGrid2D { n, m })
    }

    pub fn interval(a: f64, b: f64) -> Result<Domain> {
        Ok(Domain::Interval(Interval::new(a, b)?))
    }

    pub fn rectangle(a: f64, b: f64, c: f64, d: f64) -> Result<Domain> {
        Ok(Domain::Rectangle(Rectangle::new(a, b, c, d)?))
    }

    /// 1 for index ranges and intervals, 2 for grids and rectangles.
    pub fn dim(&self) -> usize {
        match self {
            Domain::IndexRange1D { .. } | Domain::Interval(_) => 1,
            Domain::IndexGrid2D { .. } | Domain::Rectangle(_) => 2,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            Domain::IndexRange1D { .. } | Domain::IndexGrid2D { .. }
        )
    }

    /// Number of points of a discrete domain, `None` for continua.
    pub fn point_count(&self) -> Option<usize> {
        match self {
            Domain::IndexRange1D { n } => Some(*n),
            Domain::IndexGrid2D { n, m } => Some(n * m),
            _ => None,
        }
    }

    /// Deterministic probe points covering the domain, used for partition
    /// validation and pointwise checks. Discrete domains enumerate every
    /// point; continua get `per_axis + 1` evenly spaced coordinates per axis
    /// including the endpoints.
    pub fn sample_points(&self, per_axis: usize) -> Vec<EvalPoint> {
        match self {
            Domain::IndexRange1D { n } => (1..=*n)
                .map(|k| EvalPoint::Discrete1 { k, n: *n })
                .collect(),
            Domain::IndexGrid2D { n, m } => {
                let mut pts = Vec::with_capacity(n * m);
                for k in 1..=*n {
                    for l in 1..=*m {
                        pts.push(EvalPoint::Discrete2 { k, l, n: *n, m: *m });
                    }
                }
                pts
            }
            Domain::Interval(iv) => {
                let steps = per_axis.max(1);
                (0..=steps)
                    .map(|i| {
                        let t = iv.a + (iv.b - iv.a) * (i as f64) / (steps as f64);
                        EvalPoint::Continuous1 { t }
                    })
                    .collect()
            }
            Domain::Rectangle(r) => {
                let steps = per_axis.max(1);
                let mut pts = Vec::with_capacity((steps + 1) * (steps + 1));
                for i in 0..=steps {
                    let x = r.a + (r.b - r.a) * (i as f64) / (steps as f64);
                    for j in 0..=steps {
                        let y = r.c + (r.d - r.c) * (j as f64) / (steps as f64);
                        pts.push(EvalPoint::Continuous2 { x, y });
                    }
                }
                pts
            }
        }
    }
}

/// A single evaluation site within a domain.
///
/// Discrete points carry the domain shape so that sampled functions can
/// resolve their flat index without extra context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalPoint {
    Discrete1 {
        k: usize,
        n: usize,
    },
    Discrete2 {
        k: usize,
        l: usize,
        n: usize,
        m: usize,
    },
    Continuous1 {
        t: f64,
    },
    Continuous2 {
        x: f64,
        y: f64,
    },
}

impl EvalPoint {
    pub fn dim(&self) -> usize {
        match self {
            EvalPoint::Discrete1 { .. } | EvalPoint::Continuous1 { .. } => 1,
            EvalPoint::Discrete2 { .. } | EvalPoint::Continuous2 { .. } => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_requires_increasing_endpoints() {
        assert!(Interval::new(0.0, 1.0).is_ok());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn rectangle_requires_both_axes_increasing() {
        assert!(Rectangle::new(0.0, 1.0, 0.0, 2.0).is_ok());
        assert!(Rectangle::new(0.0, 1.0, 2.0, 2.0).is_err());
        assert!(Rectangle::new(1.0, 0.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn index_domains_require_positive_sizes() {
        assert!(Domain::index_range(0).is_err());
        assert!(Domain::index_grid(2, 0).is_err());
        assert_eq!(Domain::index_grid(3, 4).unwrap().point_count(), Some(12));
    }

    #[test]
    fn sample_points_cover_discrete_domains_exactly() {
        let d = Domain::index_range(4).unwrap();
        assert_eq!(d.sample_points(1000).len(), 4);
        let g = Domain::index_grid(2, 3).unwrap();
        assert_eq!(g.sample_points(1000).len(), 6);
    }

    #[test]
    fn sample_points_include_continuum_endpoints() {
        let d = Domain::interval(2.0, 5.0).unwrap();
        let pts = d.sample_points(10);
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0], EvalPoint::Continuous1 { t: 2.0 });
        assert_eq!(pts[10], EvalPoint::Continuous1 { t: 5.0 });
    }
}
