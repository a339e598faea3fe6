use std::cmp::Ordering;

use crate::itm::DoubleRotation;
use crate::scalar::Scalar;

/// A point on one of the circles [0,1) of a coded system.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CirclePoint {
    pub circle: usize,
    pub y: Scalar,
}

impl CirclePoint {
    pub fn new(circle: usize, y: Scalar) -> Self {
        CirclePoint { circle, y }
    }
}

impl Ord for CirclePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.circle.cmp(&other.circle).then_with(|| self.y.cmp(&other.y))
    }
}

impl PartialOrd for CirclePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A piecewise translation of a finite union of circles together with a
/// coding by letters.
///
/// On each half-open arc between consecutive cut points the map is a
/// translation and the letter is constant; every circle has a cut at 0.
pub trait CodedSystem: Sync {
    fn alphabet(&self) -> &'static [char];
    fn circles(&self) -> usize;
    /// Cut points, including 0 on every circle.
    fn cuts(&self) -> Vec<CirclePoint>;
    fn map(&self, p: &CirclePoint) -> CirclePoint;
    fn letter(&self, p: &CirclePoint) -> u8;
    fn preimages(&self, p: &CirclePoint) -> Vec<CirclePoint>;
}

impl CodedSystem for DoubleRotation {
    fn alphabet(&self) -> &'static [char] {
        &['0', '1']
    }

    fn circles(&self) -> usize {
        1
    }

    fn cuts(&self) -> Vec<CirclePoint> {
        vec![CirclePoint::new(0, Scalar::zero()), CirclePoint::new(0, self.c.clone())]
    }

    fn map(&self, p: &CirclePoint) -> CirclePoint {
        CirclePoint::new(0, self.apply(&p.y))
    }

    fn letter(&self, p: &CirclePoint) -> u8 {
        self.branch(&p.y)
    }

    fn preimages(&self, p: &CirclePoint) -> Vec<CirclePoint> {
        DoubleRotation::preimages(self, &p.y)
            .into_iter()
            .map(|(y, _)| CirclePoint::new(0, y))
            .collect()
    }
}
