use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{random_between, random_unit, Failure, Suite, SuiteOptions, SuiteReport};
use crate::billiard::{from_billiard_params, DirectionSlope, Table};
use crate::itm::{DoubleRotation, IntervalUnion, TypeStatus};
use crate::language::{build_language, cassaigne_residual, special_words};
use crate::report::measure_csv;
use crate::scalar::Scalar;

fn random_rotation(rng: &mut ChaCha8Rng, max_den: i64) -> DoubleRotation {
    let alpha = random_unit(rng, max_den);
    let beta = random_unit(rng, max_den);
    let c = random_between(rng, &Scalar::zero(), &Scalar::one(), max_den);
    DoubleRotation::new(alpha, beta, c).expect("0 < c < 1")
}

struct CassaigneRun {
    bad: Vec<(usize, i64)>,
    np_levels: usize,
    np_right_special_levels: usize,
    /// Levels where Σ over all of L(n) of (m_b − m_l − m_r + 1) misses s(n+1) − s(n).
    unrestricted_bad: usize,
}

fn check_identity(t: &DoubleRotation, n_max: usize) -> CassaigneRun {
    let levels = build_language(t, n_max + 2);
    let mut run =
        CassaigneRun { bad: Vec::new(), np_levels: 0, np_right_special_levels: 0, unrestricted_bad: 0 };
    for n in 0..=n_max {
        let r = cassaigne_residual(&levels, n).expect("two levels of headroom");
        if r != 0 {
            run.bad.push((n, r));
        }
        let sw = special_words(&levels, n).expect("two levels of headroom");
        run.np_levels += usize::from(!sw.non_prolongable.is_empty());
        run.np_right_special_levels += usize::from(!sw.np_right_special.is_empty());
        let t = &sw.table;
        let all: i64 = (0..levels.p(n))
            .map(|v| t.m_b[v] as i64 - t.m_l[v] as i64 - t.m_r[v] as i64 + 1)
            .sum();
        run.unrestricted_bad += usize::from(all != levels.s(n + 1) - levels.s(n));
    }
    run
}

/// The generalised Cassaigne identity on random rational double rotations.
pub fn cassaigne(opts: &SuiteOptions) -> SuiteReport {
    const INSTANCES: usize = 25;
    const NEED_NP: usize = 5;
    let n_max = opts.n_max.unwrap_or(100);
    let mut report = SuiteReport::new(Suite::Cassaigne);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let maps: Vec<DoubleRotation> = (0..INSTANCES).map(|_| random_rotation(&mut rng, 1000)).collect();
    let mut runs: Vec<(DoubleRotation, CassaigneRun)> = maps
        .into_par_iter()
        .map(|t| {
            let r = check_identity(&t, n_max);
            (t, r)
        })
        .collect();
    // top up with searched instances until enough non-recurrent languages occur
    let mut searched = 0;
    while runs.iter().filter(|(_, r)| r.np_levels > 0).count() < NEED_NP && searched < 500 {
        let t = random_rotation(&mut rng, 1000);
        searched += 1;
        let r = check_identity(&t, n_max);
        if r.np_levels > 0 {
            runs.push((t, r));
        }
    }

    for (t, run) in &runs {
        for &(n, r) in &run.bad {
            report.fail(Failure {
                module: "language",
                operation: "cassaigne_residual",
                parameters: format!("{t}, n={n}"),
                claim: "s(n+1) − s(n) = Σ_BL (m_b − m_l − m_r + 1) − Σ_{L_np, m_r>1} (m_r − 1)",
                detail: format!("residual {r}"),
            });
        }
    }
    let np = runs.iter().filter(|(_, r)| r.np_levels > 0).count();
    let np_rs = runs.iter().filter(|(_, r)| r.np_right_special_levels > 0).count();
    if np < NEED_NP {
        report.fail(Failure {
            module: "language",
            operation: "special_words",
            parameters: format!("{} instances", runs.len()),
            claim: "the non-prolongable term is exercised",
            detail: format!("only {np} instances with L_np nonempty"),
        });
    }
    report.summary = format!(
        "residual = 0 for all n <= {n_max} on {}/{} random rational double rotations \
         ({} failing levels); L_np(n) nonempty in {np} instances, with m_r > 1 in {np_rs}",
        runs.iter().filter(|(_, r)| r.bad.is_empty()).count(),
        runs.len(),
        report.failures.len()
    );
    report.notes.push(format!(
        "summing m_b - m_l - m_r + 1 over every word of L(n) balances s(n+1) - s(n) \
         at every level on {}/{} instances",
        runs.iter().filter(|(_, r)| r.unrestricted_bad == 0).count(),
        runs.len()
    ));
    if searched > 0 {
        report.notes.push(format!("{searched} extra maps searched for non-recurrent languages"));
    }
    report
}

/// The Boshernitzan–Kornfeld double rotation (γ², γ, γ).
pub fn bk_map() -> DoubleRotation {
    let g = Scalar::gamma();
    DoubleRotation::new(&g * &g, g.clone(), g).expect("0 < γ < 1")
}

fn measure_trace(t: &DoubleRotation, n: usize) -> (Vec<Scalar>, Option<usize>) {
    let mut u = IntervalUnion::full();
    let mut measures = vec![u.measure()];
    let mut stable = None;
    for k in 0..n {
        let next = u.image(t);
        if next == u && stable.is_none() {
            stable = Some(k);
        }
        measures.push(next.measure());
        u = next;
    }
    (measures, stable)
}

/// Attractor-prefix measures of the BK map must drop strictly at every step.
pub fn bk_attractor(opts: &SuiteOptions) -> SuiteReport {
    let n = opts.n_max.unwrap_or(50);
    let mut report = SuiteReport::new(Suite::BkAttractor);
    let t = bk_map();
    let (measures, stable) = measure_trace(&t, n);
    for k in 0..n {
        if measures[k + 1] >= measures[k] {
            report.fail(Failure {
                module: "itm",
                operation: "attractor_prefix",
                parameters: format!("{t}, n={}", k + 1),
                claim: "the Boshernitzan–Kornfeld example is of infinite type",
                detail: format!("measure {} does not drop below {}", measures[k + 1], measures[k]),
            });
        }
    }
    if let Some(k) = stable {
        report.notes.push(format!("prefix stabilised at n={k}"));
    }
    report.summary = format!(
        "BK map (gamma^2, gamma, gamma): {} of {n} steps strictly decrease the measure, \
         final measure ~ {:.6}",
        n - report.failures.len(),
        measures[n].to_f64()
    );
    report.files.push(("bk_measures.csv".into(), measure_csv(&measures)));

    // the literal table b = γ doubles the cut: a different, finite-type map
    let g = Scalar::gamma();
    let table = Table::new((Scalar::one() - &g) / Scalar::int(2), g.clone()).expect("valid table");
    if let Ok(literal) = from_billiard_params(&table, &DirectionSlope::new(g)) {
        let (m, s) = measure_trace(&literal, n);
        report.notes.push(format!(
            "table a=(1-gamma)/2, b=gamma, t=gamma gives {literal}: {}",
            match s {
                Some(k) => format!("prefix stabilises at n={k}, measure {}", m[k]),
                None => format!("no stabilisation through n={n}"),
            }
        ));
    }
    report
}

/// Search for a finite-type map whose attractor avoids both discontinuities,
/// then check p^∞(n) = n + 1 on it.
pub fn prop12(opts: &SuiteOptions) -> SuiteReport {
    const RANDOM_MAPS: usize = 2000;
    const STAB_CAP: usize = 400;
    let n = opts.n_max.unwrap_or(100);
    let cap = opts.cap.unwrap_or(STAB_CAP);
    let mut report = SuiteReport::new(Suite::Prop12);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut candidates: Vec<DoubleRotation> =
        (0..RANDOM_MAPS).map(|_| random_rotation(&mut rng, 200)).collect();
    for (b, t) in super::direction_grid() {
        if let Ok(m) = crate::classify::quarter_map(&b, &DirectionSlope::new(t)) {
            candidates.push(m);
        }
    }
    // a few cubic-field maps with generic translations
    let g = Scalar::gamma();
    for k in 1..=6 {
        let alpha = (&g * &Scalar::int(k)).mod1();
        let beta = (&g * &g * &Scalar::int(k + 1)).mod1();
        for c in [Scalar::ratio(1, 3), Scalar::ratio(1, 2), Scalar::ratio(2, 3)] {
            candidates.push(DoubleRotation::new(alpha.clone(), beta.clone(), c).unwrap());
        }
    }

    struct Found {
        t: DoubleRotation,
        omega: IntervalUnion,
        inside: usize,
    }
    let found: Vec<Found> = candidates
        .par_iter()
        .filter_map(|t| match t.finite_type_check(cap) {
            TypeStatus::FiniteType { attractor, .. } => {
                let inside = usize::from(attractor.contains(&Scalar::zero()))
                    + usize::from(attractor.contains(&t.c));
                Some(Found { t: t.clone(), omega: attractor, inside })
            }
            _ => None,
        })
        .collect();

    let finite = found.len();
    let hist = [0, 1, 2].map(|k| found.iter().filter(|f| f.inside == k).count());
    let avoiding: Vec<&Found> = found.iter().filter(|f| f.inside == 0).collect();

    for f in avoiding.iter().take(5) {
        let p = crate::language::attractor_profile(&f.t, &f.omega, n);
        if let Some(k) = (0..=n).find(|&k| p[k] != k + 1) {
            report.fail(Failure {
                module: "language",
                operation: "p_infinity_estimate",
                parameters: format!("{}, n={k}", f.t),
                claim: "if the attractor avoids the discontinuities then p^∞(n) = n + 1",
                detail: format!("p^∞({k}) = {}", p[k]),
            });
        }
    }
    if avoiding.is_empty() {
        report.fail(Failure {
            module: "language",
            operation: "p_infinity_estimate",
            parameters: format!("{} candidate maps, stabilisation cap {cap}", candidates.len()),
            claim: "a finite-type map whose attractor avoids {0, c} exists",
            detail: "search found none".into(),
        });
    }

    // diagnostic: the one-discontinuity case
    let one: Vec<&Found> = found.iter().filter(|f| f.inside == 1).take(20).collect();
    let sturmian = one
        .par_iter()
        .filter(|f| {
            let p = crate::language::attractor_profile(&f.t, &f.omega, n);
            (0..=n).all(|k| p[k] == k + 1)
        })
        .count();
    report.notes.push(format!(
        "finite type: {finite} of {} candidates; discontinuities inside the attractor: \
         none {}, one {}, both {}",
        candidates.len(),
        hist[0],
        hist[1],
        hist[2]
    ));
    report.notes.push(format!(
        "with exactly one discontinuity inside, p^∞(n) = n+1 for n <= {n} holds on {sturmian} of {} checked",
        one.len()
    ));
    report.summary = if avoiding.is_empty() {
        format!(
            "no finite-type map with {{0,c}} outside the attractor among {} candidates",
            candidates.len()
        )
    } else {
        format!(
            "{} maps avoid {{0,c}}; p^∞(n) = n+1 checked for n <= {n} on {}",
            avoiding.len(),
            avoiding.len().min(5)
        )
    };
    report
}
