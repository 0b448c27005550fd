//! Cut semimetrics and their nonnegative combinations.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::metric::{MetricKind, MetricMatrix};

/// A weighted list of cuts `(S, λ_S)`; evaluates to `Σ λ_S δ_S`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CutDecomposition {
    cuts: Vec<(Vec<usize>, f64)>,
}

impl CutDecomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, side: Vec<usize>, weight: f64) -> &mut Self {
        self.cuts.push((side, weight));
        self
    }

    pub fn cuts(&self) -> &[(Vec<usize>, f64)] {
        &self.cuts
    }
}

impl FromIterator<(Vec<usize>, f64)> for CutDecomposition {
    fn from_iter<I: IntoIterator<Item = (Vec<usize>, f64)>>(iter: I) -> Self {
        CutDecomposition {
            cuts: iter.into_iter().collect(),
        }
    }
}

/// `δ_S(x,x') = 1` when exactly one of `x, x'` lies in `S`.
pub fn cut_semimetric(side: &[bool], i: usize, j: usize) -> f64 {
    if side[i] != side[j] {
        1.0
    } else {
        0.0
    }
}

/// Evaluates `Σ λ_S δ_S` on `n` nodes.
///
/// The result is tagged [`MetricKind::CutMetric`] when every off-diagonal
/// entry is positive and [`MetricKind::General`] otherwise (a semimetric).
pub fn eval_cut_decomposition(d: &CutDecomposition, n: usize) -> Result<MetricMatrix> {
    let mut out = SquareMatrix::zeros(n);
    let mut side = vec![false; n];
    for (s, &(ref members, weight)) in d.cuts.iter().enumerate() {
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(Error::InvalidWeight(format!("cut {s} has weight {weight}")));
        }
        side.iter_mut().for_each(|b| *b = false);
        for &x in members {
            if x >= n {
                return Err(Error::Malformed(format!(
                    "cut {s} references node {x} but n = {n}"
                )));
            }
            side[x] = true;
        }
        let size = side.iter().filter(|b| **b).count();
        if size == 0 || size == n {
            return Err(Error::Malformed(format!(
                "cut {s} is not a proper nonempty subset"
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = out.get(i, j) + weight * cut_semimetric(&side, i, j);
                out.set(i, j, v);
            }
        }
    }
    let positive = (0..n).all(|i| (0..n).all(|j| i == j || out.get(i, j) > 0.0));
    let kind = if positive {
        MetricKind::CutMetric
    } else {
        MetricKind::General
    };
    MetricMatrix::new(out, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cut_on_six_nodes() {
        let mut d = CutDecomposition::new();
        d.push(vec![0, 1, 2], 1.0);
        let m = eval_cut_decomposition(&d, 6).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expect = if (i < 3) == (j < 3) { 0.0 } else { 1.0 };
                assert_eq!(m.get(i, j), expect);
            }
        }
        // Nodes on the same side sit at distance zero: only a semimetric.
        assert_eq!(m.kind(), MetricKind::General);
    }

    #[test]
    fn empty_sum_is_zero() {
        let m = eval_cut_decomposition(&CutDecomposition::new(), 4).unwrap();
        assert!(m.values().as_slice().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn three_cuts_hand_summed() {
        // Nodes: x1, x2, x3, y1, y2, y3 = 0..6.
        // S1 = {x1,x2,x3}; S2 = {x2,y2}; S3 = {x3,y3}; weights 1, 2, 3.
        let d: CutDecomposition = vec![
            (vec![0, 1, 2], 1.0),
            (vec![1, 4], 2.0),
            (vec![2, 5], 3.0),
        ]
        .into_iter()
        .collect();
        let m = eval_cut_decomposition(&d, 6).unwrap();
        let (x1, x2, x3, y1, y2, y3) = (0, 1, 2, 3, 4, 5);
        assert_eq!(m.get(x1, y1), 1.0);
        assert_eq!(m.get(x1, x2), 2.0);
        assert_eq!(m.get(x1, x3), 3.0);
        assert_eq!(m.get(x2, x3), 5.0);
        assert_eq!(m.get(x2, y2), 1.0);
        assert_eq!(m.get(x3, y3), 1.0);
        assert_eq!(m.get(y1, y2), 2.0);
        assert_eq!(m.get(y2, y3), 5.0);
        assert_eq!(m.get(x2, y3), 1.0 + 2.0 + 3.0);
        assert_eq!(m.kind(), MetricKind::CutMetric);
    }

    #[test]
    fn negative_weight_rejected() {
        let mut d = CutDecomposition::new();
        d.push(vec![0], -1.0);
        assert!(matches!(
            eval_cut_decomposition(&d, 3),
            Err(Error::InvalidWeight(_))
        ));
    }

    #[test]
    fn out_of_range_rejected() {
        let mut d = CutDecomposition::new();
        d.push(vec![7], 1.0);
        assert!(eval_cut_decomposition(&d, 3).is_err());
    }
}
