use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{random_between, Failure, Suite, SuiteOptions, SuiteReport};
use crate::report::complexity_csv;
use crate::scalar::Scalar;
use crate::sections::{bound_report, BoundReport, SectionMap};
use crate::language::build_language;

const QS: [u32; 4] = [3, 4, 5, 7];
const SLOPES: usize = 20;

fn coprime_numerators(q: u32) -> Vec<u32> {
    (1..q).filter(|&p| 2 * p < q && (1..=p).filter(|d| p % d == 0 && q % d == 0).count() == 1).collect()
}

/// p(n) ≤ (2+2q)n and s(n) − s(0) ≤ 2q for rational a = p/q.
pub fn thm9(opts: &SuiteOptions) -> SuiteReport {
    let n_max = opts.n_max.unwrap_or(300);
    let horizon = opts.cap.unwrap_or(n_max + 2);
    let mut report = SuiteReport::new(Suite::Thm9);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    // sample sequentially so the chosen maps depend only on the seed
    let mut maps: Vec<SectionMap> = Vec::new();
    let mut rejected = 0usize;
    for q in QS {
        let ps = coprime_numerators(q);
        let mut got = 0;
        while got < SLOPES {
            let p = ps[rng.gen_range(0..ps.len())];
            let b = random_between(&mut rng, &Scalar::zero(), &Scalar::ratio(1, 2), 200);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let t = Scalar::ratio(sign * rng.gen_range(1..=4000), rng.gen_range(1..=200));
            let m = SectionMap::new(p, q, b, t).expect("valid parameters");
            if m.find_connection(horizon).is_some() {
                rejected += 1;
                continue;
            }
            maps.push(m);
            got += 1;
        }
    }

    let results: Vec<(BoundReport, String)> = maps
        .par_iter()
        .map(|m| {
            let levels = build_language(m, n_max);
            (bound_report(m.q, &levels), complexity_csv(&levels, Some(m.q)))
        })
        .collect();

    let mut worst = vec![(0i64, 0usize, 0i64); QS.len()];
    for (k, (m, (r, csv))) in maps.iter().zip(&results).enumerate() {
        let qi = QS.iter().position(|&q| q == m.q).unwrap();
        worst[qi].0 = worst[qi].0.max(r.max_s_excess);
        let peak = (1..=n_max).map(|n| r.p[n] * 1000 / n).max().unwrap_or(0);
        worst[qi].1 = worst[qi].1.max(peak);
        let s_at = |n: usize| r.p[n + 1] as i64 - r.p[n] as i64;
        worst[qi].2 = worst[qi].2.max(s_at(n_max - 1) - s_at(0));
        let params = format!("a={}/{}, b={}, t={}", m.p, m.q, m.b, m.t);
        if let Some(n) = r.p_violation {
            report.fail(Failure {
                module: "sections",
                operation: "complexity_bound_check",
                parameters: format!("{params}, n={n}"),
                claim: "p(n) <= (2+2q) n",
                detail: format!("p({n}) = {} > {}", r.p[n], (2 + 2 * m.q as usize) * n),
            });
        }
        if let Some(n) = r.s_violation {
            report.fail(Failure {
                module: "sections",
                operation: "complexity_bound_check",
                parameters: format!("{params}, n={n}"),
                claim: "s(n) - s(0) <= 2q",
                detail: format!("excess {}", r.max_s_excess),
            });
        }
        if k == 0 {
            report.files.push(("thm9_first_profile.csv".into(), csv.clone()));
        }
    }
    for (qi, q) in QS.iter().enumerate() {
        report.notes.push(format!(
            "q={q}: max s(n)-s(0) = {} (bound {}), at n = {} it is {}, max p(n)/n = {:.3} (bound {})",
            worst[qi].0,
            2 * q,
            n_max - 1,
            worst[qi].2,
            worst[qi].1 as f64 / 1000.0,
            2 + 2 * q
        ));
    }
    report.notes.push(format!("{rejected} sampled slopes rejected as exceptional within {horizon} steps"));
    report.summary = format!(
        "{}/{} section maps (q in {{3,4,5,7}}, {SLOPES} slopes each) satisfy both bounds for n <= {n_max}",
        results.iter().filter(|(r, _)| r.holds()).count(),
        maps.len()
    );
    report
}
