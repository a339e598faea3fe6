//! Backward orbits of the discontinuities e = 0 and f = c: doubling times,
//! preimage trees, exceptional directions and the A1/A2/A3 classes at a = 1/4.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::billiard::{from_billiard_params, BilliardError, DirectionSlope, Table};
use crate::itm::DoubleRotation;
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainOutcome {
    /// First two-preimage point sits at depth n0 − 1, i.e. the chain is
    /// unique for n0 levels and doubles at level n0.
    Doubles { n0: usize },
    /// The point at depth `step` has no preimage.
    Dies { step: usize },
    /// The unique chain re-enters itself with this period.
    CyclesWithoutDoubling { period: usize },
    CapReached { cap: usize },
}

impl ChainOutcome {
    pub fn n0(&self) -> Option<usize> {
        match self {
            ChainOutcome::Doubles { n0 } => Some(*n0),
            _ => None,
        }
    }
}

/// Walks unique preimages of `pt` until the count is 0 or 2, the chain
/// cycles, or (for irrational maps only) `cap` levels have been visited.
pub fn backward_chain(t: &DoubleRotation, pt: &Scalar, cap: usize) -> ChainOutcome {
    let bounded = !t.is_rational();
    let mut seen: HashMap<Scalar, usize> = HashMap::new();
    let mut y = pt.clone();
    let mut depth = 0usize;
    loop {
        if bounded && depth >= cap {
            return ChainOutcome::CapReached { cap };
        }
        let mut pre = t.preimages(&y);
        match pre.len() {
            0 => return ChainOutcome::Dies { step: depth },
            2 => return ChainOutcome::Doubles { n0: depth + 1 },
            _ => {}
        }
        seen.insert(y, depth);
        y = pre.pop().unwrap().0;
        depth += 1;
        if let Some(&d) = seen.get(&y) {
            return ChainOutcome::CyclesWithoutDoubling { period: depth - d };
        }
    }
}

/// Forward orbit from a discontinuity landing on a discontinuity.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Connection {
    /// 0 for e = 0, 1 for f = c.
    pub from: u8,
    pub to: u8,
    pub steps: usize,
}

/// Shortest connection e/f → {e, f} of length at most `cap`. Periodic
/// forward orbits are cut short exactly, so in rational mode the answer
/// "none" is definitive whenever the orbit closes before `cap`.
pub fn find_connection(t: &DoubleRotation, cap: usize) -> Option<Connection> {
    let targets = [Scalar::zero(), t.c.clone()];
    let mut best: Option<Connection> = None;
    for (from, start) in targets.iter().enumerate() {
        let mut seen = std::collections::HashSet::new();
        let mut y = start.clone();
        for steps in 1..=cap {
            y = t.apply(&y);
            if let Some(to) = targets.iter().position(|z| *z == y) {
                if best.as_ref().map_or(true, |b| steps < b.steps) {
                    best = Some(Connection { from: from as u8, to: to as u8, steps });
                }
                break;
            }
            if !seen.insert(y.clone()) {
                break;
            }
        }
    }
    best
}

/// Saddle-connection test within the connection-length horizon `cap`.
pub fn is_exceptional(
    table: &Table,
    d: &DirectionSlope,
    cap: usize,
) -> Result<bool, BilliardError> {
    let t = from_billiard_params(table, d)?;
    Ok(find_connection(&t, cap).is_some())
}

/// Node of a preimage tree; `weight` is (#preimages − 1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeNode {
    pub point: Scalar,
    pub weight: i8,
    pub parent: Option<usize>,
}

/// All backward orbits of a point, level by level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedTree {
    pub root: Scalar,
    /// `levels[n]` holds T^{-n}(root); parents index into `levels[n-1]`.
    pub levels: Vec<Vec<TreeNode>>,
}

impl WeightedTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_weight(&self, n: usize) -> i64 {
        self.levels[n].iter().map(|v| v.weight as i64).sum()
    }

    pub fn level_weights(&self) -> Vec<i64> {
        (0..self.levels.len()).map(|n| self.level_weight(n)).collect()
    }
}

/// Tree of T^{-n}(pt) for n ≤ depth with weights +1 / 0 / −1.
pub fn preimage_tree(t: &DoubleRotation, pt: &Scalar, depth: usize) -> WeightedTree {
    let node = |point: Scalar, parent: Option<usize>| {
        let weight = t.preimages(&point).len() as i8 - 1;
        TreeNode { point, weight, parent }
    };
    let mut levels = vec![vec![node(pt.clone(), None)]];
    for _ in 0..depth {
        let prev = levels.last().unwrap();
        let next: Vec<TreeNode> = prev
            .iter()
            .enumerate()
            .flat_map(|(i, v)| {
                t.preimages(&v.point)
                    .into_iter()
                    .map(move |(z, _)| (z, i))
            })
            .map(|(z, i)| node(z, Some(i)))
            .collect();
        levels.push(next);
    }
    WeightedTree { root: pt.clone(), levels }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum ClassKind {
    A1,
    A2,
    A3,
    Exceptional,
    /// Cubic-field chain hit its cap before doubling was decided.
    Undecided,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassKind::A1 => "A1",
            ClassKind::A2 => "A2",
            ClassKind::A3 => "A3",
            ClassKind::Exceptional => "exceptional",
            ClassKind::Undecided => "undecided",
        };
        f.write_str(s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DirectionClass {
    pub kind: ClassKind,
    pub chain_e: ChainOutcome,
    pub chain_f: ChainOutcome,
    pub connection: Option<Connection>,
}

impl DirectionClass {
    pub fn n0_e(&self) -> Option<usize> {
        self.chain_e.n0()
    }

    pub fn n0_f(&self) -> Option<usize> {
        self.chain_f.n0()
    }
}

/// The return map of the a = 1/4 table with mirror height b, direction t.
pub fn quarter_map(b: &Scalar, d: &DirectionSlope) -> Result<DoubleRotation, BilliardError> {
    let table = Table::new(Scalar::ratio(1, 4), b.clone())?;
    from_billiard_params(&table, d)
}

/// Classification for a = 1/4; `cap` bounds both the connection search and
/// irrational backward chains.
pub fn classify_direction(
    b: &Scalar,
    d: &DirectionSlope,
    cap: usize,
) -> Result<DirectionClass, BilliardError> {
    Ok(classify_map(&quarter_map(b, d)?, cap))
}

pub fn classify_map(t: &DoubleRotation, cap: usize) -> DirectionClass {
    let chain_e = backward_chain(t, &Scalar::zero(), cap);
    let chain_f = backward_chain(t, &t.c, cap);
    let connection = find_connection(t, cap);
    let capped = |c: &ChainOutcome| matches!(c, ChainOutcome::CapReached { .. });
    let kind = if connection.is_some() {
        ClassKind::Exceptional
    } else if capped(&chain_e) || capped(&chain_f) {
        ClassKind::Undecided
    } else {
        match (chain_e.n0().is_some(), chain_f.n0().is_some()) {
            (true, true) => ClassKind::A3,
            (false, false) => ClassKind::A1,
            _ => ClassKind::A2,
        }
    };
    DirectionClass { kind, chain_e, chain_f, connection }
}

/// p(n) = slope·n + intercept for n ≥ from (until the next piece).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LinearPiece {
    pub from: usize,
    pub slope: i64,
    pub intercept: i64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComplexityPrediction {
    pub pieces: Vec<LinearPiece>,
}

impl ComplexityPrediction {
    pub fn eval(&self, n: usize) -> i64 {
        let piece = self.pieces.iter().rev().find(|p| p.from <= n).unwrap();
        piece.slope * n as i64 + piece.intercept
    }

    /// C_θ in the tail formula p(n) = slope·n − C_θ.
    pub fn c_theta(&self) -> i64 {
        -self.pieces.last().unwrap().intercept
    }

    pub fn breakpoints(&self) -> Vec<usize> {
        self.pieces.iter().skip(1).map(|p| p.from).collect()
    }
}

/// Piecewise-linear complexity from the doubling times: n+1 up to the first
/// doubling, then slope 2 and slope 3 after the second.
pub fn predict_complexity(class: &DirectionClass) -> Option<ComplexityPrediction> {
    let start = LinearPiece { from: 0, slope: 1, intercept: 1 };
    let pieces = match class.kind {
        ClassKind::Exceptional | ClassKind::Undecided => return None,
        ClassKind::A1 => vec![start],
        ClassKind::A2 | ClassKind::A3 => {
            let (e, f) = (class.n0_e(), class.n0_f());
            if e.is_some() && e == f {
                let n0 = e.unwrap() as i64;
                vec![
                    start,
                    LinearPiece { from: n0 as usize + 1, slope: 3, intercept: 1 - 2 * n0 },
                ]
            } else {
                let lo = e.into_iter().chain(f).min().unwrap() as i64;
                let hi = e.zip(f).map(|(x, y)| x.max(y) as i64);
                let mut v = vec![
                    start,
                    LinearPiece { from: lo as usize + 1, slope: 2, intercept: 1 - lo },
                ];
                if let Some(hi) = hi {
                    v.push(LinearPiece { from: hi as usize + 1, slope: 3, intercept: 1 - lo - hi });
                }
                v
            }
        }
    };
    Some(ComplexityPrediction { pieces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn class_with(e: Option<usize>, f: Option<usize>) -> DirectionClass {
        let chain = |n: Option<usize>| match n {
            Some(n0) => ChainOutcome::Doubles { n0 },
            None => ChainOutcome::Dies { step: 0 },
        };
        let kind = match (e.is_some(), f.is_some()) {
            (true, true) => ClassKind::A3,
            (false, false) => ClassKind::A1,
            _ => ClassKind::A2,
        };
        DirectionClass { kind, chain_e: chain(e), chain_f: chain(f), connection: None }
    }

    #[test]
    fn chain_cycles_on_fixed_point() {
        let t = DoubleRotation::new(q(1, 2), q(0, 1), q(1, 3)).unwrap();
        assert_eq!(
            backward_chain(&t, &q(1, 3), 10),
            ChainOutcome::CyclesWithoutDoubling { period: 1 }
        );
        // 0 has no preimage: 0−1/2 = 1/2 ∉ [0,1/3), 0 ∉ [1/3,1)
        assert_eq!(backward_chain(&t, &q(0, 1), 10), ChainOutcome::Dies { step: 0 });
    }

    #[test]
    fn horizontal_is_exceptional() {
        let table = Table::new(q(1, 4), q(1, 5)).unwrap();
        assert!(is_exceptional(&table, &DirectionSlope::new(q(0, 1)), 4).unwrap());
    }

    #[test]
    fn equal_doubling_times() {
        let p = predict_complexity(&class_with(Some(3), Some(3))).unwrap();
        let got: Vec<i64> = (0..7).map(|n| p.eval(n)).collect();
        assert_eq!(got, vec![1, 2, 3, 4, 7, 10, 13]);
        assert_eq!(p.c_theta(), 5);
    }

    #[test]
    fn single_doubling() {
        let p = predict_complexity(&class_with(Some(2), None)).unwrap();
        let got: Vec<i64> = (0..6).map(|n| p.eval(n)).collect();
        assert_eq!(got, vec![1, 2, 3, 5, 7, 9]);
        assert_eq!(p.c_theta(), 1);
    }

    #[test]
    fn two_doubling_times_are_continuous() {
        let p = predict_complexity(&class_with(Some(5), Some(2))).unwrap();
        for w in p.pieces.windows(2) {
            let n = w[1].from as i64 - 1;
            assert_eq!(w[0].slope * n + w[0].intercept, w[1].slope * n + w[1].intercept);
        }
        assert_eq!(p.c_theta(), 6);
        assert_eq!(p.breakpoints(), vec![3, 6]);
    }

    #[test]
    fn no_doubling_is_sturmian() {
        let p = predict_complexity(&class_with(None, None)).unwrap();
        assert!((0..50).all(|n| p.eval(n) == n as i64 + 1));
    }

    #[test]
    fn tree_levels_are_preimage_sets() {
        let t = DoubleRotation::new(q(3, 7), q(5, 11), q(2, 5)).unwrap();
        let tree = preimage_tree(&t, &q(0, 1), 6);
        assert_eq!(tree.levels[0].len(), 1);
        for n in 0..6 {
            assert_eq!(tree.levels[n + 1].len() as i64, tree.levels[n].len() as i64 + tree.level_weight(n));
            for v in &tree.levels[n + 1] {
                assert_eq!(t.apply(&v.point), tree.levels[n][v.parent.unwrap()].point);
            }
        }
    }
}
