//! Factor languages of coded piecewise translations, built exactly from the
//! partition into cells cut by preimages of the discontinuities.

mod attractor;
mod special;
mod system;

use std::collections::HashMap;

pub use attractor::{attractor_profile, p_infinity_estimate};
pub use special::{cassaigne_residual, special_words, ExtensionTable, SpecialWords};
pub use system::{CirclePoint, CodedSystem};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LanguageError {
    #[error("attractor did not stabilise within {cap} iterations")]
    NotStabilized { cap: usize },
    #[error("level {n} needs n <= {limit} for a language built to {n_max}")]
    LevelOutOfRange { n: usize, limit: usize, n_max: usize },
}

/// Partition of the circles into half-open cells on which the length-n coding
/// is constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellRefinement {
    /// Per circle, sorted and distinct; always starts at 0.
    pub breakpoints: Vec<Vec<Scalar>>,
    /// Per circle, the midpoint of each cell.
    pub representatives: Vec<Vec<Scalar>>,
}

impl CellRefinement {
    pub fn cell_count(&self) -> usize {
        self.breakpoints.iter().map(Vec::len).sum()
    }
}

/// Incremental construction of the cell partition B_n and the word of every
/// cell. Advancing from n to n+1 adds the cut points' n-th preimages.
///
/// Words are interned per level: a length-(n+1) word is the pair (first
/// letter, id of its length-n suffix), which is exactly how a cell's word is
/// read off from its image cell.
pub(crate) struct Builder<'a, S: CodedSystem> {
    sys: &'a S,
    pub(crate) n: usize,
    pub(crate) bps: Vec<Vec<Scalar>>,
    pub(crate) cell_words: Vec<Vec<u32>>,
    frontier: Vec<CirclePoint>,
    intern: HashMap<(u8, u32), u32>,
    prefix: Vec<u32>,
}

/// Index of the cell containing `y` given sorted breakpoints starting at 0.
pub(crate) fn cell_index(bps: &[Scalar], y: &Scalar) -> usize {
    bps.partition_point(|b| b <= y) - 1
}

impl<'a, S: CodedSystem> Builder<'a, S> {
    pub(crate) fn new(sys: &'a S) -> Self {
        let k = sys.circles();
        let mut frontier = sys.cuts();
        frontier.sort();
        frontier.dedup();
        Builder {
            sys,
            n: 0,
            bps: vec![vec![Scalar::zero()]; k],
            cell_words: vec![vec![0]; k],
            frontier,
            intern: HashMap::new(),
            prefix: vec![0],
        }
    }

    /// Moves to level n+1. Returns (first letters, suffix ids, prefix ids) of
    /// the new level's words, indexed by new word id.
    pub(crate) fn advance(&mut self) -> (Vec<u8>, Vec<u32>, Vec<u32>) {
        let k = self.sys.circles();
        let mut bps: Vec<Vec<Scalar>> = self.bps.clone();
        for p in &self.frontier {
            bps[p.circle].push(p.y.clone());
        }
        for b in bps.iter_mut() {
            b.sort();
            b.dedup();
        }

        let mut intern: HashMap<(u8, u32), u32> = HashMap::new();
        let mut first = Vec::new();
        let mut suffix = Vec::new();
        let mut prefix = Vec::new();
        let mut cell_words = Vec::with_capacity(k);
        for (circle, cuts) in bps.iter().enumerate() {
            let mut ids = Vec::with_capacity(cuts.len());
            for z in cuts {
                // the left endpoint belongs to its half-open cell
                let p = CirclePoint::new(circle, z.clone());
                let letter = self.sys.letter(&p);
                let img = self.sys.map(&p);
                let v = self.cell_words[img.circle][cell_index(&self.bps[img.circle], &img.y)];
                let next = intern.len() as u32;
                let id = *intern.entry((letter, v)).or_insert_with(|| {
                    first.push(letter);
                    suffix.push(v);
                    let pre = if self.n == 0 {
                        0
                    } else {
                        self.intern[&(letter, self.prefix[v as usize])]
                    };
                    prefix.push(pre);
                    next
                });
                ids.push(id);
            }
            cell_words.push(ids);
        }

        let mut frontier: Vec<CirclePoint> = self
            .frontier
            .iter()
            .flat_map(|p| self.sys.preimages(p))
            .collect();
        frontier.sort();
        frontier.dedup();

        self.n += 1;
        self.bps = bps;
        self.cell_words = cell_words;
        self.frontier = frontier;
        self.intern = intern;
        self.prefix = prefix.clone();
        (first, suffix, prefix)
    }

    pub(crate) fn refinement(&self) -> CellRefinement {
        let two = Scalar::int(2);
        let representatives = self
            .bps
            .iter()
            .map(|b| {
                (0..b.len())
                    .map(|i| {
                        let hi = b.get(i + 1).cloned().unwrap_or_else(Scalar::one);
                        (&b[i] + &hi) / &two
                    })
                    .collect()
            })
            .collect();
        CellRefinement { breakpoints: self.bps.clone(), representatives }
    }
}

/// The sets L(0), …, L(n_max) with enough structure to recover every word,
/// its length-(n−1) prefix and suffix.
#[derive(Clone, Debug)]
pub struct LanguageLevels {
    n_max: usize,
    alphabet: &'static [char],
    p: Vec<usize>,
    /// `first[n][w]`, `suffix[n][w]`, `prefix[n][w]` for n ≥ 1; level 0 is
    /// the lone empty word.
    first: Vec<Vec<u8>>,
    suffix: Vec<Vec<u32>>,
    prefix: Vec<Vec<u32>>,
    cells: Vec<usize>,
}

/// Builds L(0..=n_max) by exact cell refinement.
pub fn build_language<S: CodedSystem>(sys: &S, n_max: usize) -> LanguageLevels {
    let mut b = Builder::new(sys);
    let mut levels = LanguageLevels {
        n_max,
        alphabet: sys.alphabet(),
        p: vec![1],
        first: vec![Vec::new()],
        suffix: vec![Vec::new()],
        prefix: vec![Vec::new()],
        cells: vec![b.bps.iter().map(Vec::len).sum()],
    };
    for _ in 0..n_max {
        let (f, s, p) = b.advance();
        levels.p.push(f.len());
        levels.first.push(f);
        levels.suffix.push(s);
        levels.prefix.push(p);
        levels.cells.push(b.bps.iter().map(Vec::len).sum());
    }
    levels
}

/// Breakpoints of ⋃_{k<n} T^{-k}(cuts) with cell midpoints.
pub fn refine_cells<S: CodedSystem>(sys: &S, n: usize) -> CellRefinement {
    let mut b = Builder::new(sys);
    for _ in 0..n {
        b.advance();
    }
    b.refinement()
}

impl LanguageLevels {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn alphabet(&self) -> &'static [char] {
        self.alphabet
    }

    /// p(n) = #L(n).
    pub fn p(&self, n: usize) -> usize {
        self.p[n]
    }

    pub fn complexity(&self) -> &[usize] {
        &self.p
    }

    /// s(n) = p(n+1) − p(n), defined for n < n_max.
    pub fn s(&self, n: usize) -> i64 {
        self.p[n + 1] as i64 - self.p[n] as i64
    }

    /// Number of cells of the level-n refinement.
    pub fn cell_count(&self, n: usize) -> usize {
        self.cells[n]
    }

    /// Letters of word `w` of L(n).
    pub fn word(&self, n: usize, w: u32) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        let mut w = w;
        for level in (1..=n).rev() {
            out.push(self.first[level][w as usize]);
            w = self.suffix[level][w as usize];
        }
        out
    }

    pub fn word_string(&self, n: usize, w: u32) -> String {
        self.word(n, w).iter().map(|&l| self.alphabet[l as usize]).collect()
    }

    /// All words of L(n), sorted.
    pub fn words(&self, n: usize) -> Vec<Vec<u8>> {
        let mut v: Vec<Vec<u8>> = (0..self.p[n] as u32).map(|w| self.word(n, w)).collect();
        v.sort();
        v
    }

    /// Id of the length-(n−1) prefix of word `w` of L(n).
    pub fn prefix_id(&self, n: usize, w: u32) -> u32 {
        self.prefix[n][w as usize]
    }

    /// Id of the length-(n−1) suffix of word `w` of L(n).
    pub fn suffix_id(&self, n: usize, w: u32) -> u32 {
        self.suffix[n][w as usize]
    }

    /// Plain-text dump, one `n:word` line per word, levels 0..=n.
    pub fn dump_words(&self, n: usize) -> String {
        let mut out = String::new();
        for level in 0..=n.min(self.n_max) {
            let mut ws: Vec<String> =
                (0..self.p[level] as u32).map(|w| self.word_string(level, w)).collect();
            ws.sort();
            for w in ws {
                out.push_str(&format!("{level}:{w}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itm::DoubleRotation;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn first_level_cells() {
        let t = DoubleRotation::new(q(2, 7), q(3, 5), q(4, 9)).unwrap();
        let r = refine_cells(&t, 1);
        assert_eq!(r.breakpoints, vec![vec![q(0, 1), q(4, 9)]]);
        assert_eq!(r.representatives, vec![vec![q(2, 9), q(13, 18)]]);
    }

    #[test]
    fn rotation_is_sturmian_up_to_horizon() {
        // rotation by 13/97 coded by [0, 13/97): p(n) = n+1 while n < 97
        let t = DoubleRotation::new(q(13, 97), q(13, 97), q(84, 97)).unwrap();
        let l = build_language(&t, 60);
        for n in 0..=60 {
            assert_eq!(l.p(n), n + 1, "n={n}");
        }
    }

    #[test]
    fn words_match_direct_encoding() {
        let t = DoubleRotation::new(q(3, 11), q(5, 8), q(2, 5)).unwrap();
        let l = build_language(&t, 12);
        for n in 0..=12 {
            let mut direct: Vec<Vec<u8>> = Vec::new();
            for k in 0..(11 * 8 * 5 * 4) {
                direct.push(t.encode(&q(k, 11 * 8 * 5 * 4), n));
            }
            direct.sort();
            direct.dedup();
            assert_eq!(l.words(n), direct, "n={n}");
        }
    }

    #[test]
    fn prefix_and_suffix_ids_are_consistent() {
        let t = DoubleRotation::new(q(1, 7), q(4, 9), q(5, 13)).unwrap();
        let l = build_language(&t, 15);
        for n in 1..=15 {
            for w in 0..l.p(n) as u32 {
                let word = l.word(n, w);
                assert_eq!(l.word(n - 1, l.prefix_id(n, w)), word[..n - 1]);
                assert_eq!(l.word(n - 1, l.suffix_id(n, w)), word[1..]);
            }
        }
    }

    #[test]
    fn dump_is_level_prefixed() {
        let t = DoubleRotation::new(q(1, 3), q(1, 3), q(1, 3)).unwrap();
        let l = build_language(&t, 2);
        assert_eq!(l.dump_words(1), "0:\n1:0\n1:1\n");
    }
}
