//! Metric-like matrices and validators for the axiom systems they obey.
//!
//! All comparisons use the tolerance `τ = 1e-9 · max entry`, so that averages
//! of many replicates are not rejected over rounding noise.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Relative tolerance applied to every axiom check.
pub const REL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Ultrametric,
    QuasiUltrametric,
    CutMetric,
    QuasiCutMetric,
    General,
}

impl MetricKind {
    /// Kinds whose coverings are built from the max-symmetrized matrix.
    pub fn is_directed(self) -> bool {
        matches!(self, MetricKind::QuasiUltrametric | MetricKind::QuasiCutMetric)
    }
}

/// A square matrix tagged with the axiom system it is meant to satisfy.
///
/// The tag is a claim, not a proof: use the `check_*` functions to verify it.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    values: SquareMatrix,
    kind: MetricKind,
}

impl MetricMatrix {
    pub fn new(values: SquareMatrix, kind: MetricKind) -> Result<Self> {
        if values.has_nan() {
            return Err(Error::Malformed("matrix contains NaN".into()));
        }
        Ok(MetricMatrix { values, kind })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], kind: MetricKind) -> Result<Self> {
        MetricMatrix::new(SquareMatrix::from_rows(rows)?, kind)
    }

    pub fn values(&self) -> &SquareMatrix {
        &self.values
    }

    pub fn into_values(self) -> SquareMatrix {
        self.values
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: MetricKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn dim(&self) -> usize {
        self.values.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values.get(i, j)
    }

    pub fn tolerance(&self) -> f64 {
        tolerance_for(&self.values)
    }

    /// The symmetric function the tolerance relation is read from: the matrix
    /// itself for symmetric kinds, `max{m(x,x'), m(x',x)}` otherwise.
    pub fn symmetric_part(&self) -> SquareMatrix {
        if self.kind.is_directed() || !self.values.is_symmetric() {
            self.values.max_symmetrized()
        } else {
            self.values.clone()
        }
    }
}

pub(crate) fn tolerance_for(m: &SquareMatrix) -> f64 {
    REL_TOLERANCE * m.max_entry()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub identity: bool,
    pub symmetry: bool,
    pub triangle: bool,
    /// Largest signed slack over all checks; positive values are violations.
    pub worst_violation: f64,
}

/// Identity, symmetry and triangle inequality.
///
/// For an asymmetric matrix the triangle inequality is evaluated on the
/// max-symmetrization, which is the function coverings are built from.
pub fn check_metric_axioms(m: &MetricMatrix) -> AxiomReport {
    let v = m.values();
    let n = v.dim();
    let tol = m.tolerance();
    let mut worst = 0.0f64;

    let mut identity = true;
    for i in 0..n {
        let d = v.get(i, i).abs();
        worst = worst.max(d);
        if d > tol {
            identity = false;
        }
        for j in 0..n {
            if i != j && v.get(i, j) <= tol {
                identity = false;
                worst = worst.max(tol - v.get(i, j));
            }
        }
    }

    let mut symmetry = true;
    for i in 0..n {
        for j in i + 1..n {
            let gap = (v.get(i, j) - v.get(j, i)).abs();
            worst = worst.max(gap);
            if gap > tol {
                symmetry = false;
            }
        }
    }

    let sym = v.max_symmetrized();
    let mut triangle = true;
    for i in 0..n {
        for j in 0..n {
            let dij = sym.get(i, j);
            for k in 0..n {
                let slack = sym.get(i, k) - (dij + sym.get(j, k));
                worst = worst.max(slack);
                if slack > tol {
                    triangle = false;
                }
            }
        }
    }

    AxiomReport {
        identity,
        symmetry,
        triangle,
        worst_violation: worst,
    }
}

/// Result of a max-triangle (strong triangle) inequality scan.
#[derive(Debug, Clone, PartialEq)]
pub struct UltrametricReport {
    pub holds: bool,
    pub symmetric: bool,
    /// `(x, x', x'')` maximizing `m(x,x'') − max{m(x,x'), m(x',x'')}`.
    pub worst_triple: Option<[usize; 3]>,
    pub worst_slack: f64,
}

/// Strong triangle inequality on a symmetric matrix.
///
/// An asymmetric input is reported as a violation (`holds = false`,
/// `symmetric = false`) rather than rejected.
pub fn check_ultrametric(m: &MetricMatrix) -> UltrametricReport {
    let v = m.values();
    let tol = m.tolerance();
    let symmetric = (0..v.dim())
        .all(|i| (i + 1..v.dim()).all(|j| (v.get(i, j) - v.get(j, i)).abs() <= tol));
    let mut report = max_triangle_scan(v, tol);
    report.symmetric = symmetric;
    report.holds &= symmetric;
    report
}

/// Directed max-triangle inequality `m(x,x') ≤ max{m(x,x''), m(x'',x')}`.
pub fn check_quasi_ultrametric(m: &MetricMatrix) -> UltrametricReport {
    let v = m.values();
    let mut report = max_triangle_scan(v, m.tolerance());
    report.symmetric = v.is_symmetric();
    report
}

// Scans `v(x,z) ≤ max{v(x,y), v(y,z)}` over all ordered triples; ties in the
// worst slack keep the lexicographically first triple.
fn max_triangle_scan(v: &SquareMatrix, tol: f64) -> UltrametricReport {
    let n = v.dim();
    let mut worst_slack = f64::NEG_INFINITY;
    let mut worst_triple = None;
    for x in 0..n {
        for y in 0..n {
            let xy = v.get(x, y);
            for z in 0..n {
                let slack = v.get(x, z) - xy.max(v.get(y, z));
                if slack > worst_slack {
                    worst_slack = slack;
                    worst_triple = Some([x, y, z]);
                }
            }
        }
    }
    if n == 0 {
        worst_slack = 0.0;
    }
    UltrametricReport {
        holds: worst_slack <= tol,
        symmetric: true,
        worst_triple,
        worst_slack,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourPointReport {
    pub holds: bool,
    pub worst_quadruple: Option<[usize; 4]>,
    pub worst_slack: f64,
}

/// Four-point condition
/// `d(x,x') + d(x'',x''') ≤ max{d(x,x'') + d(x',x'''), d(x,x''') + d(x',x'')}`
/// over all ordered quadruples. `O(n⁴)`.
pub fn check_four_point(m: &MetricMatrix) -> FourPointReport {
    let v = m.values();
    let n = v.dim();
    let tol = m.tolerance();
    let mut worst_slack = if n < 4 { 0.0 } else { f64::NEG_INFINITY };
    let mut worst_quadruple = None;
    if n >= 4 {
        for a in 0..n {
            for b in 0..n {
                let ab = v.get(a, b);
                for c in 0..n {
                    let (ac, bc) = (v.get(a, c), v.get(b, c));
                    for d in 0..n {
                        let lhs = ab + v.get(c, d);
                        let rhs = (ac + v.get(b, d)).max(v.get(a, d) + bc);
                        let slack = lhs - rhs;
                        if slack > worst_slack {
                            worst_slack = slack;
                            worst_quadruple = Some([a, b, c, d]);
                        }
                    }
                }
            }
        }
    }
    FourPointReport {
        holds: worst_slack <= tol,
        worst_quadruple,
        worst_slack,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triad_avg() -> MetricMatrix {
        MetricMatrix::from_rows(
            &[[0.0, 1.0, 2.5], [2.5, 0.0, 3.0], [2.0, 1.0, 0.0]],
            MetricKind::QuasiCutMetric,
        )
        .unwrap()
    }

    #[test]
    fn triad_avg_axioms() {
        let r = check_metric_axioms(&triad_avg());
        assert!(r.identity);
        assert!(!r.symmetry);
        assert!(r.triangle);
    }

    #[test]
    fn triad_avg_symmetrized_is_not_ultrametric() {
        let sym = MetricMatrix::new(triad_avg().values().max_symmetrized(), MetricKind::General).unwrap();
        let r = check_ultrametric(&sym);
        assert!(!r.holds);
        assert_eq!(r.worst_triple, Some([1, 0, 2]));
        assert_eq!(r.worst_slack, 0.5);
    }

    #[test]
    fn triad_avg_is_not_quasi_ultrametric() {
        let r = check_quasi_ultrametric(&triad_avg());
        assert!(!r.holds);
        assert_eq!(r.worst_triple, Some([1, 0, 2]));
        assert_eq!(r.worst_slack, 0.5);
    }

    #[test]
    fn triad_a_is_quasi_ultrametric() {
        let u1 = MetricMatrix::from_rows(
            &[[0.0, 1.0, 3.0], [2.0, 0.0, 3.0], [2.0, 1.0, 0.0]],
            MetricKind::QuasiUltrametric,
        )
        .unwrap();
        assert!(check_quasi_ultrametric(&u1).holds);
    }

    #[test]
    fn asymmetric_input_fails_ultrametric_check() {
        let r = check_ultrametric(&triad_avg());
        assert!(!r.holds);
        assert!(!r.symmetric);
    }

    #[test]
    fn single_node_is_trivially_fine() {
        let m = MetricMatrix::from_rows(&[[0.0]], MetricKind::General).unwrap();
        let r = check_metric_axioms(&m);
        assert!(r.identity && r.symmetry && r.triangle);
        assert!(check_ultrametric(&m).holds);
        assert!(check_four_point(&m).holds);
    }

    #[test]
    fn two_by_two_four_point_is_vacuous() {
        let m = MetricMatrix::from_rows(&[[0.0, 3.0], [3.0, 0.0]], MetricKind::General).unwrap();
        assert!(check_four_point(&m).holds);
    }

    #[test]
    fn unit_square_violates_four_point() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let v = SquareMatrix::from_fn(4, |i, j| {
            let (a, b): ((f64, f64), (f64, f64)) = (pts[i], pts[j]);
            ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
        });
        let m = MetricMatrix::new(v, MetricKind::General).unwrap();
        let r = check_four_point(&m);
        assert!(!r.holds);
        // Diagonals sum to 2√2 against opposite sides summing to 2.
        assert!((r.worst_slack - (2.0 * 2f64.sqrt() - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn nan_is_malformed() {
        let err = MetricMatrix::from_rows(&[[0.0, f64::NAN], [1.0, 0.0]], MetricKind::General);
        assert!(matches!(err, Err(Error::Malformed(_))));
    }
}
