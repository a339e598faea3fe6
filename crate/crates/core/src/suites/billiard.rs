use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{random_between, random_unit, Failure, Suite, SuiteOptions, SuiteReport};
use crate::billiard::{
    first_return_section, folded_return, from_billiard_params, section_coordinate, section_point,
    BilliardError, DirectionSlope, Table,
};
use crate::scalar::Scalar;

const INSTANCES: usize = 200;
const RETURNS: usize = 50;

struct Instance {
    table: Table,
    d: DirectionSlope,
    u: Scalar,
}

enum Outcome {
    Agree,
    Singular,
    Mismatch(String),
}

fn run_instance(inst: &Instance, returns: usize) -> Outcome {
    let Instance { table, d, u } = inst;
    let t = match from_billiard_params(table, d) {
        Ok(t) => t,
        Err(e) => return Outcome::Mismatch(e.to_string()),
    };
    let mut p = match section_point(table, d, u) {
        Ok(p) => p,
        Err(_) => return Outcome::Singular,
    };
    let mut u = u.clone();
    for k in 0..returns {
        let (next, hit) = match folded_return(table, &p) {
            Ok(r) => r,
            Err(BilliardError::SingularHit { .. }) => return Outcome::Singular,
            Err(e) => return Outcome::Mismatch(format!("return {k}: {e}")),
        };
        let folded_u = section_coordinate(table, d, &next);
        let (section_u, section_hit) = first_return_section(table, d, &u).expect("u in [0,1)");
        let branch_hit = t.branch(&u) == 0;
        let rotated = t.apply(&u);
        if folded_u != section_u || hit != section_hit || rotated != section_u || branch_hit != hit
        {
            return Outcome::Mismatch(format!(
                "return {k} from u={u}: folded ({folded_u}, mirror={hit}), \
                 section ({section_u}, mirror={section_hit}), double rotation {rotated}"
            ));
        }
        u = section_u;
        p = next;
    }
    Outcome::Agree
}

fn sample(rng: &mut ChaCha8Rng) -> Instance {
    let zero = Scalar::zero();
    let half = Scalar::ratio(1, 2);
    let a = random_between(rng, &zero, &half, 100);
    // b = 1/2 would make the whole section reflective (c = 1), a pure rotation
    let b = random_between(rng, &zero, &half, 100);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let t = Scalar::ratio(sign * rng.gen_range(0..=200), rng.gen_range(1..=40));
    let u = random_unit(rng, 2000);
    Instance {
        table: Table::new(a, b).expect("sampled inside the valid range"),
        d: DirectionSlope::new(t),
        u,
    }
}

/// Folded-table first returns against the double rotation, branch by branch.
pub fn prop1_equivalence(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Prop1Equivalence);
    let returns = opts.n_max.unwrap_or(RETURNS);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut agreed = 0usize;
    let mut singular = 0usize;
    let mut tried = 0usize;
    while agreed + report.failures.len() < INSTANCES {
        let batch: Vec<Instance> = (0..INSTANCES).map(|_| sample(&mut rng)).collect();
        let outcomes: Vec<Outcome> = batch.par_iter().map(|i| run_instance(i, returns)).collect();
        for (inst, out) in batch.iter().zip(outcomes) {
            if agreed + report.failures.len() >= INSTANCES {
                break;
            }
            tried += 1;
            match out {
                Outcome::Agree => agreed += 1,
                Outcome::Singular => singular += 1,
                Outcome::Mismatch(detail) => report.fail(Failure {
                    module: "billiard",
                    operation: "first_return_section",
                    parameters: format!("a={}, b={}, t={}", inst.table.a, inst.table.b, inst.d.t),
                    claim: "first return to x = a is the double rotation (α, β, c)",
                    detail,
                }),
            }
        }
    }
    report.summary = format!(
        "{agreed}/{INSTANCES} random rational tables agree with the double rotation over {returns} \
         returns (labels included); {singular} of {tried} draws skipped as singular"
    );
    report
}
