//! Double rotations of [0,1) and their attractor prefixes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ItmError {
    #[error("discontinuity c = {0} must lie strictly inside (0,1)")]
    DegenerateCut(Scalar),
}

/// T(y) = y + α (mod 1) on [0,c), y + β (mod 1) on [c,1).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DoubleRotation {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub c: Scalar,
}

/// Which half-open piece a point lies in: 0 for [0,c), 1 for [c,1).
pub type Branch = u8;

impl DoubleRotation {
    /// Translations are reduced mod 1; `c` must satisfy 0 < c < 1.
    pub fn new(alpha: Scalar, beta: Scalar, c: Scalar) -> Result<Self, ItmError> {
        if c.signum() <= 0 || c >= Scalar::one() {
            return Err(ItmError::DegenerateCut(c));
        }
        Ok(DoubleRotation {
            alpha: alpha.mod1(),
            beta: beta.mod1(),
            c,
        })
    }

    pub fn is_rational(&self) -> bool {
        self.alpha.is_rational() && self.beta.is_rational() && self.c.is_rational()
    }

    pub fn branch(&self, y: &Scalar) -> Branch {
        if *y < self.c {
            0
        } else {
            1
        }
    }

    pub fn shift(&self, branch: Branch) -> &Scalar {
        if branch == 0 {
            &self.alpha
        } else {
            &self.beta
        }
    }

    pub fn apply(&self, y: &Scalar) -> Scalar {
        (y + self.shift(self.branch(y))).mod1()
    }

    /// All points mapping to `y`, tagged with the branch they were taken from.
    /// The α-branch preimage, if any, comes first.
    pub fn preimages(&self, y: &Scalar) -> Vec<(Scalar, Branch)> {
        let mut out = Vec::with_capacity(2);
        let z = (y - &self.alpha).mod1();
        if z < self.c {
            out.push((z, 0));
        }
        let z = (y - &self.beta).mod1();
        if z >= self.c {
            out.push((z, 1));
        }
        out
    }

    /// Branch letters of y, Ty, …, T^{n-1}y.
    pub fn encode(&self, y: &Scalar, n: usize) -> Vec<u8> {
        let mut w = Vec::with_capacity(n);
        let mut y = y.clone();
        for _ in 0..n {
            let b = self.branch(&y);
            w.push(b);
            y = (&y + self.shift(b)).mod1();
        }
        w
    }

    pub fn orbit(&self, y: &Scalar, n: usize) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(n + 1);
        let mut y = y.clone();
        out.push(y.clone());
        for _ in 0..n {
            y = self.apply(&y);
            out.push(y.clone());
        }
        out
    }

    /// J ∩ TJ ∩ … ∩ TⁿJ. The images are nested, so this is simply TⁿJ.
    pub fn attractor_prefix(&self, n: usize) -> IntervalUnion {
        let mut u = IntervalUnion::full();
        for _ in 0..n {
            u = u.image(self);
        }
        u
    }

    /// Iterates the prefix until two consecutive ones coincide or `cap` is hit.
    pub fn finite_type_check(&self, cap: usize) -> TypeStatus {
        assert!(cap >= 1, "cap must be positive");
        let mut cur = IntervalUnion::full();
        let mut measures = vec![cur.measure()];
        for n in 0..cap {
            let next = cur.image(self);
            if next == cur {
                return TypeStatus::FiniteType { n, attractor: cur };
            }
            measures.push(next.measure());
            cur = next;
        }
        let window = cap.min(8);
        let last = &measures[cap];
        if *last < measures[cap - window] {
            TypeStatus::InfiniteTypeEvidence { cap, measures }
        } else {
            TypeStatus::Undetermined { cap }
        }
    }
}

impl fmt::Display for DoubleRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha={}, beta={}, c={})", self.alpha, self.beta, self.c)
    }
}

/// Outcome of the attractor stabilisation search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeStatus {
    /// prefix(n) = prefix(n+1); `attractor` is that common value.
    FiniteType { n: usize, attractor: IntervalUnion },
    /// No stabilisation before `cap` and the measure was still dropping.
    /// `measures[k]` is the measure of prefix(k), k = 0..=cap.
    InfiniteTypeEvidence { cap: usize, measures: Vec<Scalar> },
    Undetermined { cap: usize },
}

impl TypeStatus {
    pub fn is_finite(&self) -> bool {
        matches!(self, TypeStatus::FiniteType { .. })
    }
}

/// Finite union of disjoint half-open intervals [lo,hi) ⊂ [0,1), kept sorted
/// with touching pieces merged, so equal sets compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalUnion {
    pieces: Vec<[Scalar; 2]>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { pieces: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalUnion {
            pieces: vec![[Scalar::zero(), Scalar::one()]],
        }
    }

    /// Normalises an arbitrary list of [lo,hi) pairs; empty pieces are dropped.
    pub fn from_intervals(mut v: Vec<[Scalar; 2]>) -> Self {
        v.retain(|[lo, hi]| lo < hi);
        v.sort();
        let mut pieces: Vec<[Scalar; 2]> = Vec::with_capacity(v.len());
        for [lo, hi] in v {
            match pieces.last_mut() {
                Some(last) if lo <= last[1] => {
                    if hi > last[1] {
                        last[1] = hi;
                    }
                }
                _ => pieces.push([lo, hi]),
            }
        }
        IntervalUnion { pieces }
    }

    pub fn pieces(&self) -> &[[Scalar; 2]] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn measure(&self) -> Scalar {
        self.pieces
            .iter()
            .fold(Scalar::zero(), |acc, [lo, hi]| acc + (hi - lo))
    }

    pub fn contains(&self, y: &Scalar) -> bool {
        // first piece whose hi exceeds y
        let i = self.pieces.partition_point(|[_, hi]| hi <= y);
        i < self.pieces.len() && self.pieces[i][0] <= *y
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.pieces.len() && j < other.pieces.len() {
            let [a0, a1] = &self.pieces[i];
            let [b0, b1] = &other.pieces[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                out.push([lo.clone(), hi.clone()]);
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion::from_intervals(out)
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.intersect(other) == *self
    }

    /// Forward image under T: split at c, translate, cut at the wrap point.
    pub fn image(&self, t: &DoubleRotation) -> IntervalUnion {
        let mut out = Vec::with_capacity(self.pieces.len() + 2);
        for [lo, hi] in &self.pieces {
            if *lo < t.c {
                let h = hi.min(&t.c);
                push_translated(&mut out, lo, h, &t.alpha);
            }
            if *hi > t.c {
                let l = lo.max(&t.c);
                push_translated(&mut out, l, hi, &t.beta);
            }
        }
        IntervalUnion::from_intervals(out)
    }
}

fn push_translated(out: &mut Vec<[Scalar; 2]>, lo: &Scalar, hi: &Scalar, s: &Scalar) {
    let len = hi - lo;
    let start = (lo + s).mod1();
    let end = &start + &len;
    if end <= Scalar::one() {
        out.push([start, end]);
    } else {
        out.push([start, Scalar::one()]);
        out.push([Scalar::zero(), end - Scalar::one()]);
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|[lo, hi]| format!("[{lo}, {hi})"))
            .collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn dr(a: Scalar, b: Scalar, c: Scalar) -> DoubleRotation {
        DoubleRotation::new(a, b, c).unwrap()
    }

    #[test]
    fn apply_examples() {
        let rot = dr(q(1, 3), q(1, 3), q(1, 2));
        assert_eq!(rot.apply(&q(1, 2)), q(5, 6));
        let t = dr(q(1, 2), q(0, 1), q(1, 3));
        assert_eq!(t.apply(&q(0, 1)), q(1, 2));
        assert_eq!(t.apply(&q(1, 3)), q(1, 3));
        assert_eq!(t.branch(&(q(1, 3) - q(1, 1000))), 0);
    }

    #[test]
    fn preimage_examples() {
        let t = dr(q(1, 2), q(0, 1), q(1, 3));
        assert_eq!(t.preimages(&q(1, 3)), vec![(q(1, 3), 1)]);
        assert!(t.preimages(&q(1, 6)).is_empty());
        let rot = dr(q(2, 7), q(2, 7), q(3, 5));
        for k in 0..20 {
            assert_eq!(rot.preimages(&q(k, 20)).len(), 1);
        }
    }

    #[test]
    fn encode_examples() {
        let t = dr(q(1, 2), q(0, 1), q(1, 3));
        assert!(t.encode(&q(1, 3), 0).is_empty());
        assert_eq!(t.encode(&q(1, 3), 5), vec![1; 5]);
        let rot = dr(q(1, 3), q(1, 3), q(1, 3));
        assert_eq!(rot.encode(&q(0, 1), 6), vec![0, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn rejects_degenerate_cut() {
        assert!(DoubleRotation::new(q(1, 3), q(1, 4), q(0, 1)).is_err());
        assert!(DoubleRotation::new(q(1, 3), q(1, 4), q(1, 1)).is_err());
    }

    #[test]
    fn rotation_has_full_attractor() {
        let rot = dr(q(3, 11), q(3, 11), q(2, 5));
        assert_eq!(rot.attractor_prefix(0), IntervalUnion::full());
        assert_eq!(rot.attractor_prefix(7), IntervalUnion::full());
        assert!(matches!(rot.finite_type_check(4), TypeStatus::FiniteType { n: 0, .. }));
    }

    #[test]
    fn image_wraps_and_merges() {
        // [0,1/3) -> [1/2,5/6), [1/3,1) -> itself; union [1/3,1)
        let t = dr(q(1, 2), q(0, 1), q(1, 3));
        let img = IntervalUnion::full().image(&t);
        assert_eq!(img.pieces(), &[[q(1, 3), q(1, 1)]]);
        assert_eq!(img.measure(), q(2, 3));
        assert!(img.contains(&q(1, 3)) && !img.contains(&q(1, 4)));
    }

    #[test]
    fn interval_union_json() {
        let u = IntervalUnion::from_intervals(vec![[q(1, 2), q(3, 4)], [q(0, 1), q(1, 4)]]);
        assert_eq!(
            serde_json::to_string(&u).unwrap(),
            r#"[["0/1","1/4"],["1/2","3/4"]]"#
        );
    }
}
