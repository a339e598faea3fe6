use super::{LanguageError, LanguageLevels};

/// Extension counts for every word of L(n), indexed by word id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionTable {
    pub n: usize,
    pub m_l: Vec<u32>,
    pub m_r: Vec<u32>,
    pub m_b: Vec<u32>,
}

/// Bispecial words and right-special non-prolongable words of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialWords {
    pub bispecial: Vec<u32>,
    /// Words with m_l = 0 and m_r > 1.
    pub np_right_special: Vec<u32>,
    /// All words with m_l = 0.
    pub non_prolongable: Vec<u32>,
    pub table: ExtensionTable,
}

impl LanguageLevels {
    /// Counts read off from the materialised levels n+1 and n+2.
    pub fn extension_table(&self, n: usize) -> Result<ExtensionTable, LanguageError> {
        if n + 2 > self.n_max() {
            return Err(LanguageError::LevelOutOfRange {
                n,
                limit: self.n_max().saturating_sub(2),
                n_max: self.n_max(),
            });
        }
        let size = self.p(n);
        let mut m_l = vec![0u32; size];
        let mut m_r = vec![0u32; size];
        let mut m_b = vec![0u32; size];
        // distinct words of L(n+1) with prefix u differ in their last letter
        for w in 0..self.p(n + 1) as u32 {
            m_r[self.prefix_id(n + 1, w) as usize] += 1;
            m_l[self.suffix_id(n + 1, w) as usize] += 1;
        }
        for w in 0..self.p(n + 2) as u32 {
            let middle = self.suffix_id(n + 1, self.prefix_id(n + 2, w));
            m_b[middle as usize] += 1;
        }
        Ok(ExtensionTable { n, m_l, m_r, m_b })
    }
}

pub fn special_words(levels: &LanguageLevels, n: usize) -> Result<SpecialWords, LanguageError> {
    let table = levels.extension_table(n)?;
    let mut bispecial = Vec::new();
    let mut np_right_special = Vec::new();
    let mut non_prolongable = Vec::new();
    for w in 0..levels.p(n) {
        let (l, r) = (table.m_l[w], table.m_r[w]);
        if l > 1 && r > 1 {
            bispecial.push(w as u32);
        }
        if l == 0 {
            non_prolongable.push(w as u32);
            if r > 1 {
                np_right_special.push(w as u32);
            }
        }
    }
    Ok(SpecialWords { bispecial, np_right_special, non_prolongable, table })
}

/// Left side minus right side of the generalised Cassaigne identity at n:
/// zero exactly when
/// s(n+1) − s(n) = Σ_{BL(n)} (m_b − m_l − m_r + 1) − Σ_{L_np(n), m_r>1} (m_r − 1).
pub fn cassaigne_residual(levels: &LanguageLevels, n: usize) -> Result<i64, LanguageError> {
    let sw = special_words(levels, n)?;
    let t = &sw.table;
    let bl: i64 = sw
        .bispecial
        .iter()
        .map(|&v| {
            let v = v as usize;
            t.m_b[v] as i64 - t.m_l[v] as i64 - t.m_r[v] as i64 + 1
        })
        .sum();
    let np: i64 = sw
        .np_right_special
        .iter()
        .map(|&v| t.m_r[v as usize] as i64 - 1)
        .sum();
    Ok((levels.s(n + 1) - levels.s(n)) - (bl - np))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itm::DoubleRotation;
    use crate::language::build_language;
    use crate::scalar::Scalar;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn rotation_has_one_right_special_word_per_length() {
        let t = DoubleRotation::new(q(21, 101), q(21, 101), q(80, 101)).unwrap();
        let l = build_language(&t, 40);
        for n in 0..=38 {
            let sw = special_words(&l, n).unwrap();
            let rs = sw.table.m_r.iter().filter(|&&r| r > 1).count();
            assert_eq!(rs, 1, "n={n}");
            assert!(sw.non_prolongable.is_empty());
            assert_eq!(cassaigne_residual(&l, n).unwrap(), 0);
        }
    }

    #[test]
    fn m_b_sums_right_extensions_of_left_extensions() {
        let t = DoubleRotation::new(q(2, 9), q(7, 11), q(3, 7)).unwrap();
        let l = build_language(&t, 30);
        for n in 0..=27 {
            let here = l.extension_table(n).unwrap();
            let next = l.extension_table(n + 1).unwrap();
            let mut sum = vec![0u32; l.p(n)];
            for w in 0..l.p(n + 1) as u32 {
                sum[l.suffix_id(n + 1, w) as usize] += next.m_r[w as usize];
            }
            assert_eq!(here.m_b, sum, "n={n}");
        }
    }

    #[test]
    fn rejects_levels_without_headroom() {
        let t = DoubleRotation::new(q(2, 9), q(7, 11), q(3, 7)).unwrap();
        let l = build_language(&t, 5);
        assert!(l.extension_table(3).is_ok());
        assert!(matches!(
            cassaigne_residual(&l, 4),
            Err(LanguageError::LevelOutOfRange { .. })
        ));
    }
}
