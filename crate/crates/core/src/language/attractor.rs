use std::collections::HashSet;

use super::{Builder, LanguageError};
use crate::itm::{DoubleRotation, IntervalUnion, TypeStatus};
use crate::scalar::Scalar;

/// Complexity p^∞(0..=n) of the words coding points of the attractor.
///
/// The attractor must stabilise within `burn_in` forward images. A cell's
/// word belongs to the attractor language iff the cell meets Ω in an interval
/// of positive length; cells and attractor pieces are both half-open, so this
/// is an exact overlap test.
pub fn p_infinity_estimate(
    t: &DoubleRotation,
    n: usize,
    burn_in: usize,
) -> Result<Vec<usize>, LanguageError> {
    let omega = match t.finite_type_check(burn_in.max(1)) {
        TypeStatus::FiniteType { attractor, .. } => attractor,
        _ => return Err(LanguageError::NotStabilized { cap: burn_in }),
    };
    Ok(attractor_profile(t, &omega, n))
}

/// Number of words of length 0..=n coding points of `omega`.
pub fn attractor_profile(t: &DoubleRotation, omega: &IntervalUnion, n: usize) -> Vec<usize> {
    let mut b = Builder::new(t);
    let mut out = vec![usize::from(!omega.is_empty())];
    for _ in 0..n {
        b.advance();
        out.push(words_meeting(&b.bps[0], &b.cell_words[0], omega).len());
    }
    out
}

fn words_meeting(bps: &[Scalar], words: &[u32], omega: &IntervalUnion) -> HashSet<u32> {
    let one = Scalar::one();
    let pieces = omega.pieces();
    let mut seen = HashSet::new();
    let mut j = 0;
    for (i, lo) in bps.iter().enumerate() {
        let hi = bps.get(i + 1).unwrap_or(&one);
        while j < pieces.len() && pieces[j][1] <= *lo {
            j += 1;
        }
        // pieces[j] is the first with right end beyond lo
        if j < pieces.len() && pieces[j][0] < *hi {
            seen.insert(words[i]);
        }
    }
    seen
}
