//! Rational mirror abscissa a = p/q: the return map S to the q vertical
//! sections x = k/(2q) of the unfolded table, with its three-letter coding.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::itm::DoubleRotation;
use crate::language::{build_language, CirclePoint, CodedSystem, LanguageLevels};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SectionError {
    #[error("need coprime 0 < p < q with p/q < 1/2 (got {p}/{q})")]
    InvalidAbscissa { p: u32, q: u32 },
    #[error("mirror height must satisfy 0 < b < 1/2 (got {0})")]
    InvalidHeight(Scalar),
    #[error("exceptional direction: discontinuity orbit connects after {steps} steps")]
    ExceptionalDirection { steps: usize },
}

pub const LETTER_A: u8 = 0;
pub const LETTER_B: u8 = 1;
pub const LETTER_C: u8 = 2;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SectionMap {
    pub p: u32,
    pub q: u32,
    pub b: Scalar,
    pub t: Scalar,
    step: Scalar,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SectionState {
    pub i: u32,
    pub y: Scalar,
}

impl SectionState {
    pub fn new(i: u32, y: Scalar) -> Self {
        SectionState { i, y }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl SectionMap {
    pub fn new(p: u32, q: u32, b: Scalar, t: Scalar) -> Result<Self, SectionError> {
        if p == 0 || 2 * p >= q || gcd(p, q) != 1 {
            return Err(SectionError::InvalidAbscissa { p, q });
        }
        if b.signum() <= 0 || b >= Scalar::ratio(1, 2) {
            return Err(SectionError::InvalidHeight(b));
        }
        let step = (&t / &Scalar::int(q as i64)).mod1();
        Ok(SectionMap { p, q, b, t, step })
    }

    /// Index of the section carrying the mirror.
    pub fn mirror_section(&self) -> u32 {
        self.q - self.p
    }

    /// Rotation amount of the second coordinate, t/q mod 1.
    pub fn step(&self) -> &Scalar {
        &self.step
    }

    /// The unfolded mirror [−b, b) read on the circle.
    pub fn in_window(&self, y: &Scalar) -> bool {
        *y < self.b || *y >= Scalar::one() - &self.b
    }

    fn hits(&self, s: &SectionState) -> bool {
        s.i == self.mirror_section() && self.in_window(&s.y)
    }

    /// On a mirror hit the particle is sent back to x = a and reaches the
    /// section after it, index p+1; otherwise it moves one section on.
    pub fn apply_s(&self, s: &SectionState) -> SectionState {
        let next = if self.hits(s) { self.p + 1 } else { s.i + 1 };
        let i = next % self.q;
        SectionState { i, y: (&s.y + &self.step).mod1() }
    }

    pub fn letter_of(&self, s: &SectionState) -> u8 {
        if s.i != self.mirror_section() {
            LETTER_C
        } else if self.in_window(&s.y) {
            LETTER_A
        } else {
            LETTER_B
        }
    }

    pub fn encode3(&self, s: &SectionState, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        let mut s = s.clone();
        for _ in 0..n {
            out.push(self.letter_of(&s));
            s = self.apply_s(&s);
        }
        out
    }

    pub fn preimages_s(&self, s: &SectionState) -> Vec<SectionState> {
        let y = (&s.y - &self.step).mod1();
        let mut out = Vec::with_capacity(2);
        let prev = (s.i + self.q - 1) % self.q;
        let from_prev = SectionState::new(prev, y.clone());
        if !self.hits(&from_prev) {
            out.push(from_prev);
        }
        if (self.p + 1) % self.q == s.i {
            let from_mirror = SectionState::new(self.mirror_section(), y);
            if self.hits(&from_mirror) {
                out.push(from_mirror);
            }
        }
        out
    }

    /// Exact size of S^{-n}(s).
    pub fn preimage_count(&self, s: &SectionState, n: usize) -> usize {
        let mut level: HashSet<SectionState> = HashSet::from([s.clone()]);
        for _ in 0..n {
            level = level.iter().flat_map(|v| self.preimages_s(v)).collect();
        }
        level.len()
    }

    /// The q-step return to the mirror section, in the coordinate u = y + b.
    pub fn mirror_return(&self) -> DoubleRotation {
        let q = Scalar::int(self.q as i64);
        let alpha = Scalar::int((self.q - 2 * self.p) as i64) * &self.t / &q;
        DoubleRotation::new(alpha, self.t.clone(), Scalar::int(2) * &self.b)
            .expect("0 < 2b < 1")
    }

    /// Discontinuity points: the window edges on the mirror section.
    pub fn discontinuities(&self) -> Vec<SectionState> {
        let m = self.mirror_section();
        vec![
            SectionState::new(m, self.b.clone()),
            SectionState::new(m, Scalar::one() - &self.b),
        ]
    }

    /// Shortest forward orbit from a discontinuity onto a discontinuity,
    /// within `cap` steps.
    pub fn find_connection(&self, cap: usize) -> Option<usize> {
        let targets = self.discontinuities();
        let mut best: Option<usize> = None;
        for start in &targets {
            let mut s = start.clone();
            let mut seen = HashSet::new();
            for steps in 1..=cap {
                s = self.apply_s(&s);
                if targets.contains(&s) {
                    best = Some(best.map_or(steps, |b| b.min(steps)));
                    break;
                }
                if !seen.insert(s.clone()) {
                    break;
                }
            }
        }
        best
    }

    pub fn to_point(s: &SectionState) -> CirclePoint {
        CirclePoint::new(s.i as usize, s.y.clone())
    }

    pub fn from_point(p: &CirclePoint) -> SectionState {
        SectionState::new(p.circle as u32, p.y.clone())
    }
}

impl CodedSystem for SectionMap {
    fn alphabet(&self) -> &'static [char] {
        &['A', 'B', 'C']
    }

    fn circles(&self) -> usize {
        self.q as usize
    }

    fn cuts(&self) -> Vec<CirclePoint> {
        let mut v: Vec<CirclePoint> =
            (0..self.q as usize).map(|i| CirclePoint::new(i, Scalar::zero())).collect();
        v.extend(self.discontinuities().iter().map(Self::to_point));
        v
    }

    fn map(&self, p: &CirclePoint) -> CirclePoint {
        Self::to_point(&self.apply_s(&Self::from_point(p)))
    }

    fn letter(&self, p: &CirclePoint) -> u8 {
        self.letter_of(&Self::from_point(p))
    }

    fn preimages(&self, p: &CirclePoint) -> Vec<CirclePoint> {
        self.preimages_s(&Self::from_point(p)).iter().map(Self::to_point).collect()
    }
}

/// Outcome of the linear bound p(n) ≤ (2+2q)n and s(n) − s(0) ≤ 2q.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u32,
    pub n_max: usize,
    pub p: Vec<usize>,
    /// First n in 1..=n_max with p(n) > (2+2q)n.
    pub p_violation: Option<usize>,
    /// First n < n_max with s(n) − s(0) > 2q.
    pub s_violation: Option<usize>,
    pub max_s_excess: i64,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.p_violation.is_none() && self.s_violation.is_none()
    }
}

/// Builds the ternary language to `n_max` and checks both bounds. Directions
/// with a discontinuity connection within n_max + 2 steps are rejected.
pub fn complexity_bound_check(m: &SectionMap, n_max: usize) -> Result<BoundReport, SectionError> {
    if let Some(steps) = m.find_connection(n_max + 2) {
        return Err(SectionError::ExceptionalDirection { steps });
    }
    let levels = build_language(m, n_max);
    Ok(bound_report(m.q, &levels))
}

pub fn bound_report(q: u32, levels: &LanguageLevels) -> BoundReport {
    let n_max = levels.n_max();
    let slope = 2 + 2 * q as usize;
    let p_violation = (1..=n_max).find(|&n| levels.p(n) > slope * n);
    let s0 = levels.s(0);
    let excess: Vec<i64> = (0..n_max).map(|n| levels.s(n) - s0).collect();
    let s_violation = excess.iter().position(|&e| e > 2 * q as i64);
    BoundReport {
        q,
        n_max,
        p: levels.complexity().to_vec(),
        p_violation,
        s_violation,
        max_s_excess: excess.into_iter().max().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn map() -> SectionMap {
        SectionMap::new(2, 7, q(3, 19), q(31, 23)).unwrap()
    }

    #[test]
    fn second_coordinate_is_a_rotation() {
        let m = map();
        let mut s = SectionState::new(0, q(1, 9));
        for k in 1..40 {
            s = m.apply_s(&s);
            assert_eq!(s.y, (q(1, 9) + Scalar::int(k) * m.step()).mod1());
        }
    }

    #[test]
    fn off_mirror_steps_increment() {
        let m = map();
        for i in 0..7 {
            if i == m.mirror_section() {
                continue;
            }
            assert_eq!(m.apply_s(&SectionState::new(i, q(1, 5))).i, (i + 1) % 7);
        }
    }

    #[test]
    fn preimages_invert() {
        let m = map();
        for i in 0..7 {
            for k in 0..30 {
                let s = SectionState::new(i, q(2 * k + 1, 60));
                for r in m.preimages_s(&s) {
                    assert_eq!(m.apply_s(&r), s);
                }
                assert!(m.preimage_count(&s, 12) <= 7);
            }
        }
        assert_eq!(m.preimage_count(&SectionState::new(3, q(1, 2)), 0), 1);
    }

    #[test]
    fn c_runs_between_mirror_letters() {
        // after B come q−1 C's, after A come q−2p−1 C's
        let m = map();
        let w = m.encode3(&SectionState::new(0, q(1, 11)), 400);
        let mut last: Option<(u8, usize)> = None;
        for (k, &l) in w.iter().enumerate() {
            if l == LETTER_C {
                continue;
            }
            if let Some((prev, at)) = last {
                let gap = k - at - 1;
                let want = if prev == LETTER_B { 6 } else { 7 - 4 - 1 };
                assert_eq!(gap, want);
            }
            last = Some((l, k));
        }
    }

    #[test]
    fn mirror_return_matches_double_rotation() {
        let m = map();
        let t = m.mirror_return();
        let ms = m.mirror_section();
        for k in 0..50 {
            let y = q(2 * k + 1, 100);
            let mut s = SectionState::new(ms, y.clone());
            let u = (&y + &m.b).mod1();
            loop {
                s = m.apply_s(&s);
                if s.i == ms {
                    break;
                }
            }
            assert_eq!((&s.y + &m.b).mod1(), t.apply(&u));
        }
    }

    #[test]
    fn ternary_starts_at_three_letters() {
        let l = build_language(&map(), 3);
        assert_eq!((l.p(0), l.p(1)), (1, 3));
    }
}
