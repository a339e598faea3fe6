//! CSV and JSON report formats. Numbers are written as exact scalar strings.

use serde::Serialize;

use crate::classify::{ChainOutcome, ComplexityPrediction, Connection, DirectionClass, LinearPiece};
use crate::language::{special_words, LanguageLevels};
use crate::scalar::Scalar;

pub const CLASSIFY_SCHEMA: &str = "mirrorlab.classify/1";
pub const COMPLEXITY_HEADER: &str = "n,p_n,s_n,bl_count,np_count";

/// `n,p_n,s_n,bl_count,np_count` for every n with two levels of headroom,
/// plus a trailing `q` column for section languages.
pub fn complexity_csv(levels: &LanguageLevels, q: Option<u32>) -> String {
    let mut out = String::from(COMPLEXITY_HEADER);
    if q.is_some() {
        out.push_str(",q");
    }
    out.push('\n');
    for n in 0..=levels.n_max().saturating_sub(2) {
        if levels.n_max() < 2 {
            break;
        }
        let sw = special_words(levels, n).expect("n within headroom");
        out.push_str(&format!(
            "{n},{},{},{},{}",
            levels.p(n),
            levels.s(n),
            sw.bispecial.len(),
            sw.np_right_special.len()
        ));
        if let Some(q) = q {
            out.push_str(&format!(",{q}"));
        }
        out.push('\n');
    }
    out
}

/// `n,measure` rows with exact measures.
pub fn measure_csv(measures: &[Scalar]) -> String {
    let mut out = String::from("n,measure\n");
    for (n, m) in measures.iter().enumerate() {
        out.push_str(&format!("{n},\"{m}\"\n"));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictionJson {
    pub pieces: Vec<LinearPiece>,
    pub breakpoints: Vec<usize>,
    pub c_theta: i64,
}

impl From<&ComplexityPrediction> for PredictionJson {
    fn from(p: &ComplexityPrediction) -> Self {
        PredictionJson { pieces: p.pieces.clone(), breakpoints: p.breakpoints(), c_theta: p.c_theta() }
    }
}

/// Per-direction classification report.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub schema: &'static str,
    pub a: Scalar,
    pub b: Scalar,
    pub t: Scalar,
    pub class: String,
    pub n0_e: Option<usize>,
    pub n0_f: Option<usize>,
    pub exceptional: bool,
    pub connection: Option<Connection>,
    pub chain_e: ChainOutcome,
    pub chain_f: ChainOutcome,
    pub prediction: Option<PredictionJson>,
    /// Largest n such that measured p(k) matched the prediction for all
    /// k <= n; absent if no comparison was made or p(0) already differs.
    pub verified_up_to: Option<usize>,
}

impl ClassifyReport {
    pub fn new(
        a: &Scalar,
        b: &Scalar,
        t: &Scalar,
        class: &DirectionClass,
        prediction: Option<&ComplexityPrediction>,
        verified_up_to: Option<usize>,
    ) -> Self {
        ClassifyReport {
            schema: CLASSIFY_SCHEMA,
            a: a.clone(),
            b: b.clone(),
            t: t.clone(),
            class: class.kind.to_string(),
            n0_e: class.n0_e(),
            n0_f: class.n0_f(),
            exceptional: class.connection.is_some(),
            connection: class.connection.clone(),
            chain_e: class.chain_e,
            chain_f: class.chain_f,
            prediction: prediction.map(PredictionJson::from),
            verified_up_to,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itm::DoubleRotation;
    use crate::language::build_language;

    #[test]
    fn sturmian_profile_rows() {
        let t = DoubleRotation::new(Scalar::ratio(5, 23), Scalar::ratio(5, 23), Scalar::ratio(18, 23))
            .unwrap();
        let csv = complexity_csv(&build_language(&t, 5), None);
        assert_eq!(
            csv,
            "n,p_n,s_n,bl_count,np_count\n0,1,1,1,0\n1,2,1,1,0\n2,3,1,1,0\n3,4,1,1,0\n"
        );
    }

    #[test]
    fn measure_rows_are_exact() {
        let csv = measure_csv(&[Scalar::one(), Scalar::ratio(2, 3)]);
        assert_eq!(csv, "n,measure\n0,\"1/1\"\n1,\"2/3\"\n");
    }
}
