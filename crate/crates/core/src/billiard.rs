//! The square [0,1/2]² with a one-sided mirror on x = a, 0 ≤ y ≤ b.
//!
//! The mirror reflects trajectories arriving from the right and is
//! transparent from the left. Positions and slopes are exact scalars, so
//! corner and endpoint hits are detected rather than rounded away.

use serde::{Deserialize, Serialize};

use crate::itm::DoubleRotation;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BilliardError {
    #[error("invalid table: need 0 < a < 1/2 and 0 < b <= 1/2 (got a={a}, b={b})")]
    InvalidTable { a: Scalar, b: Scalar },
    #[error("singular hit at ({x}, {y}): {what}")]
    SingularHit { x: Scalar, y: Scalar, what: &'static str },
    #[error("singular hit at step {step}: {source}")]
    SingularAtStep {
        step: usize,
        #[source]
        source: Box<BilliardError>,
    },
    #[error("section coordinate {0} outside [0,1)")]
    OutOfSection(Scalar),
    #[error("mirror height b = 1/2 makes the return map a pure rotation (c = 1)")]
    FullMirror,
    #[error("no return to the section within {0} incidences")]
    NoReturn(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Table {
    pub a: Scalar,
    pub b: Scalar,
}

impl Table {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self, BilliardError> {
        let half = Scalar::ratio(1, 2);
        if a.signum() <= 0 || a >= half || b.signum() <= 0 || b > half {
            return Err(BilliardError::InvalidTable { a, b });
        }
        Ok(Table { a, b })
    }

    pub fn side() -> Scalar {
        Scalar::ratio(1, 2)
    }
}

/// Direction given by its slope t = tan θ; never vertical by construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DirectionSlope {
    pub t: Scalar,
}

impl DirectionSlope {
    pub fn new(t: Scalar) -> Self {
        DirectionSlope { t }
    }
}

/// Signs of the velocity (sx, sy·t) in the folded table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Quadrant {
    pub sx: i8,
    pub sy: i8,
}

impl Quadrant {
    pub const NE: Quadrant = Quadrant { sx: 1, sy: 1 };
    pub const SE: Quadrant = Quadrant { sx: 1, sy: -1 };
}

/// How the current position was reached.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Incidence {
    Start,
    /// Square wall(s); both flags set only if a corner were allowed.
    Wall { vertical: bool, horizontal: bool },
    /// Hit the reflective (right) side of the mirror.
    MirrorReflect,
    /// Passed through x = a, either through the transparent side or above
    /// the mirror. `from_left` records the side of approach.
    MirrorCross { from_left: bool },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: Scalar,
    pub y: Scalar,
    pub t: Scalar,
    pub dir: Quadrant,
    pub last: Incidence,
}

impl PhasePoint {
    pub fn new(x: Scalar, y: Scalar, d: &DirectionSlope, dir: Quadrant) -> Self {
        PhasePoint { x, y, t: d.t.clone(), dir, last: Incidence::Start }
    }

    fn vy(&self) -> Scalar {
        if self.dir.sy > 0 {
            self.t.clone()
        } else {
            -&self.t
        }
    }
}

fn singular(x: &Scalar, y: &Scalar, what: &'static str) -> BilliardError {
    BilliardError::SingularHit { x: x.clone(), y: y.clone(), what }
}

/// Advances to the next wall or mirror-line incidence.
pub fn billiard_step(table: &Table, s: &PhasePoint) -> Result<PhasePoint, BilliardError> {
    let h = Table::side();
    let (x, y) = (&s.x, &s.y);
    let on_line = *x == table.a;
    if on_line && (y.is_zero() || *y == table.b) {
        return Err(singular(x, y, "mirror endpoint"));
    }
    if (x.is_zero() || *x == h) && (y.is_zero() || *y == h) {
        return Err(singular(x, y, "corner"));
    }
    let vx_pos = s.dir.sx > 0;
    let vy = s.vy();

    // unit horizontal speed, so x-times are plain distances
    let tx = if vx_pos { &h - x } else { x.clone() };
    let ty = match vy.signum() {
        1 => Some((&h - y) / &vy),
        -1 => Some(y / &(-&vy)),
        _ => None,
    };
    let tm = if (vx_pos && *x < table.a) || (!vx_pos && *x > table.a) {
        Some((&table.a - x).abs())
    } else {
        None
    };
    let mut dt = tx.clone();
    for c in ty.iter().chain(tm.iter()) {
        if *c < dt {
            dt = c.clone();
        }
    }
    let hit_x = tx == dt;
    let hit_y = ty.as_ref() == Some(&dt);
    let hit_m = tm.as_ref() == Some(&dt);

    let nx = if hit_m {
        table.a.clone()
    } else if vx_pos {
        x + &dt
    } else {
        x - &dt
    };
    let ny = y + &(&vy * &dt);
    if (nx.is_zero() || nx == h) && (ny.is_zero() || ny == h) {
        return Err(singular(&nx, &ny, "corner"));
    }
    if hit_m && (ny.is_zero() || ny == table.b) {
        return Err(singular(&nx, &ny, "mirror endpoint"));
    }

    let mut dir = s.dir;
    let last = if hit_m {
        if !vx_pos && ny < table.b {
            dir.sx = -dir.sx;
            Incidence::MirrorReflect
        } else {
            Incidence::MirrorCross { from_left: vx_pos }
        }
    } else {
        Incidence::Wall { vertical: hit_x, horizontal: hit_y }
    };
    if hit_x && !hit_m {
        dir.sx = -dir.sx;
    }
    if hit_y {
        dir.sy = -dir.sy;
    }
    Ok(PhasePoint { x: nx, y: ny, t: s.t.clone(), dir, last })
}

/// `k` consecutive incidences; the polyline starts at `s`.
pub fn trace(
    table: &Table,
    s: &PhasePoint,
    k: usize,
) -> Result<Vec<(Scalar, Scalar)>, BilliardError> {
    let mut pts = vec![(s.x.clone(), s.y.clone())];
    let mut cur = s.clone();
    for step in 0..k {
        cur = billiard_step(table, &cur).map_err(|e| BilliardError::SingularAtStep {
            step,
            source: Box::new(e),
        })?;
        pts.push((cur.x.clone(), cur.y.clone()));
    }
    Ok(pts)
}

/// α = (1−2a)t mod 1: the translation picked up on a mirror bounce.
pub fn mirror_shift(table: &Table, d: &DirectionSlope) -> Scalar {
    ((Scalar::one() - Scalar::int(2) * &table.a) * &d.t).mod1()
}

/// The section return map as a double rotation (α, β, c).
///
/// The unfolded mirror occupies heights [−b, b] of the section, so the
/// reflecting window has length c = 2b (see the crate README).
pub fn from_billiard_params(
    table: &Table,
    d: &DirectionSlope,
) -> Result<DoubleRotation, BilliardError> {
    let c = Scalar::int(2) * &table.b;
    if c >= Scalar::one() {
        return Err(BilliardError::FullMirror);
    }
    DoubleRotation::new(mirror_shift(table, d), d.t.mod1(), c).map_err(|_| BilliardError::FullMirror)
}

/// One application of the section return map in unfolded coordinates.
/// Returns the next coordinate and whether the mirror was hit.
pub fn first_return_section(
    table: &Table,
    d: &DirectionSlope,
    y: &Scalar,
) -> Result<(Scalar, bool), BilliardError> {
    if !y.in_unit() {
        return Err(BilliardError::OutOfSection(y.clone()));
    }
    let c = Scalar::int(2) * &table.b;
    let hit = *y < c;
    let shift = if hit { mirror_shift(table, d) } else { d.t.mod1() };
    Ok(((y + &shift).mod1(), hit))
}

/// Unfolded section coordinate of a folded point on x = a moving right.
///
/// The torus height is y when moving up and 1 − y when moving down; the
/// section coordinate shifts it so the mirror window starts at 0.
pub fn section_coordinate(table: &Table, d: &DirectionSlope, p: &PhasePoint) -> Scalar {
    let height = if p.dir.sy > 0 { p.y.clone() } else { Scalar::one() - &p.y };
    (height + &table.b + mirror_shift(table, d)).mod1()
}

/// Inverse of [`section_coordinate`]: the folded point on x = a, moving right.
pub fn section_point(
    table: &Table,
    d: &DirectionSlope,
    u: &Scalar,
) -> Result<PhasePoint, BilliardError> {
    if !u.in_unit() {
        return Err(BilliardError::OutOfSection(u.clone()));
    }
    let height = (u - &table.b - mirror_shift(table, d)).mod1();
    let (y, sy) = if height <= Table::side() {
        (height, 1)
    } else {
        (Scalar::one() - height, -1)
    };
    if y.is_zero() || y == table.b {
        return Err(singular(&table.a, &y, "mirror endpoint"));
    }
    Ok(PhasePoint::new(table.a.clone(), y, d, Quadrant { sx: 1, sy }))
}

/// Folded-table first return to the section event "on x = a moving right".
/// Returns the next section point and whether it was produced by a bounce.
pub fn folded_return(
    table: &Table,
    p: &PhasePoint,
) -> Result<(PhasePoint, bool), BilliardError> {
    const LIMIT: usize = 1 << 20;
    let mut cur = p.clone();
    for _ in 0..LIMIT {
        cur = billiard_step(table, &cur)?;
        match cur.last {
            Incidence::MirrorReflect => return Ok((cur, true)),
            Incidence::MirrorCross { from_left: true } => return Ok((cur, false)),
            _ => {}
        }
    }
    Err(BilliardError::NoReturn(LIMIT))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn table(a: Scalar, b: Scalar) -> Table {
        Table::new(a, b).unwrap()
    }

    #[test]
    fn horizontal_above_mirror_crosses() {
        let tb = table(q(1, 4), q(1, 5));
        let d = DirectionSlope::new(q(0, 1));
        let p = PhasePoint::new(q(1, 10), q(3, 10), &d, Quadrant::NE);
        let s = billiard_step(&tb, &p).unwrap();
        assert_eq!((s.x.clone(), s.y.clone()), (q(1, 4), q(3, 10)));
        assert_eq!(s.last, Incidence::MirrorCross { from_left: true });
        assert_eq!(s.dir, Quadrant::NE);
    }

    #[test]
    fn horizontal_below_mirror_bounces_twice() {
        let tb = table(q(1, 4), q(1, 5));
        let d = DirectionSlope::new(q(0, 1));
        let p = PhasePoint::new(q(3, 10), q(1, 10), &d, Quadrant::NE);
        let s1 = billiard_step(&tb, &p).unwrap();
        assert_eq!(s1.x, q(1, 2));
        assert_eq!(s1.dir.sx, -1);
        let s2 = billiard_step(&tb, &s1).unwrap();
        assert_eq!(s2.x, q(1, 4));
        assert_eq!(s2.last, Incidence::MirrorReflect);
        assert_eq!(s2.dir.sx, 1);
    }

    #[test]
    fn corner_and_endpoint_are_singular() {
        let tb = table(q(1, 4), q(1, 5));
        let d = DirectionSlope::new(q(1, 1));
        let p = PhasePoint::new(q(1, 4), q(1, 4), &d, Quadrant::NE);
        assert!(matches!(billiard_step(&tb, &p), Err(BilliardError::SingularHit { .. })));
        let d = DirectionSlope::new(q(0, 1));
        let p = PhasePoint::new(q(1, 2), q(1, 5), &d, Quadrant { sx: -1, sy: 1 });
        assert!(matches!(billiard_step(&tb, &p), Err(BilliardError::SingularHit { .. })));
    }

    #[test]
    fn params_formula() {
        let d = DirectionSlope::new(q(1, 1));
        let t = from_billiard_params(&table(q(1, 4), q(1, 3)), &d).unwrap();
        assert_eq!((t.alpha.clone(), t.beta.clone()), (q(1, 2), q(0, 1)));
        assert_eq!(t.c, q(2, 3));
        let d = DirectionSlope::new(q(2, 3));
        let t = from_billiard_params(&table(q(1, 3), q(1, 5)), &d).unwrap();
        assert_eq!((t.alpha, t.beta), (q(2, 9), q(2, 3)));
        assert!(from_billiard_params(&table(q(1, 3), q(1, 2)), &d).is_err());
    }

    #[test]
    fn first_return_examples() {
        let tb = table(q(1, 4), q(1, 3));
        let d = DirectionSlope::new(q(1, 1));
        assert_eq!(first_return_section(&tb, &d, &q(0, 1)).unwrap(), (q(1, 2), true));
        // boundary point y = c belongs to [c,1)
        assert_eq!(first_return_section(&tb, &d, &q(2, 3)).unwrap(), (q(2, 3), false));
        assert!(first_return_section(&tb, &d, &q(1, 1)).is_err());
    }

    #[test]
    fn section_point_round_trip() {
        let tb = table(q(1, 5), q(1, 7));
        let d = DirectionSlope::new(q(-5, 3));
        for k in 0..40 {
            let u = q(2 * k + 1, 80);
            if let Ok(p) = section_point(&tb, &d, &u) {
                assert_eq!(section_coordinate(&tb, &d, &p), u);
            }
        }
    }
}
