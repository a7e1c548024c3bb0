//! The nine end-to-end checks behind `surface-cyclic verify` and the
//! `acceptance` test target. Each check reports a verdict and a detail line.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{validate, DataSet};
use crate::decompose::decompose;
use crate::enumerate::{enumerate, spherical_type1};
use crate::fatgraph::{cyclic_generator, vertex_orbit_certificate};
use crate::fixtures;
use crate::hyperbolic::{pairing_word, polygon_spec, quotient_check, solve_metrics, TOLERANCE};
use crate::necklace::{random_necklace, Necklace};

/// Seed of the random necklace audit.
pub const AUDIT_SEED: u64 = 20_240_611;
pub const AUDIT_SIZE: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {}: {} ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.millis
        )
    }
}

fn timed(id: u8, name: &str, limit: Duration, check: impl FnOnce() -> (bool, String)) -> CriterionReport {
    let start = Instant::now();
    let (ok, detail) = check();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let detail = if in_time {
        detail
    } else {
        format!("{detail}; took {elapsed:?}, limit {limit:?}")
    };
    CriterionReport {
        id,
        name: name.to_string(),
        passed: ok && in_time,
        detail,
        millis: elapsed.as_millis(),
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub fn chain_example() -> CriterionReport {
    timed(1, "six-bead chain", secs(1), || {
        let r = match fixtures::example_chain().realize() {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let want = fixtures::example_chain_result();
        let same_order = r.chain_result.pairs() == want.pairs();
        let ok = same_order && r.chain_result == want && r.chain_result.genus() == 155;
        (
            ok,
            format!("D_T = {} on genus {}", r.chain_result, r.chain_result.genus()),
        )
    })
}

pub fn necklace_example() -> CriterionReport {
    timed(2, "necklace realization", secs(1), || {
        let r = match fixtures::example_necklace().realize() {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let trace = r.genus_trace();
        let tail = trace[5..].to_vec();
        let ok = r.result == fixtures::example_necklace_target() && tail == [155, 157, 158, 161, 162, 120, 78, 36];
        (ok, format!("{} with genus trace {tail:?}", r.result))
    })
}

pub fn descriptor_example() -> CriterionReport {
    timed(3, "fixed locus descriptor", secs(1), || {
        let n = fixtures::example_necklace();
        let (d, r) = match (n.fix_descriptor(), n.realize()) {
            (Ok(d), Ok(r)) => (d, r),
            (Err(e), _) | (_, Err(e)) => return (false, e.to_string()),
        };
        let harvey = r.result.fix_dimension_harvey().unwrap_or(-1);
        let counts = (d.points, d.num_bounded, d.num_free, d.den_bounded, d.den_free, d.dim);
        let ok = counts == (6, 10, 0, 3, 5, 4) && harvey == 4;
        (
            ok,
            format!(
                "{} points, {} bounded, {} free over {} bounded, {} free; dim {}, Harvey {harvey}",
                d.points, d.num_bounded, d.num_free, d.den_bounded, d.den_free, d.dim
            ),
        )
    })
}

pub fn two_necklaces() -> CriterionReport {
    timed(4, "two necklaces, one action", secs(1), || {
        let target = fixtures::two_necklaces_target();
        let realize = |n: Necklace| n.realize().map(|r| r.result);
        let first = realize(fixtures::two_necklaces_first());
        let second = realize(fixtures::two_necklaces_second());
        let round = decompose(&target)
            .map_err(|e| e.to_string())
            .and_then(|n| n.realize().map(|r| r.result).map_err(|e| e.to_string()));
        let ok = first.as_ref() == Ok(&target) && second.as_ref() == Ok(&target) && round.as_ref() == Ok(&target);
        (
            ok,
            format!(
                "first {:?}, second {:?}, decompose round trip {:?}",
                first.map(|d| d.to_string()),
                second.map(|d| d.to_string()),
                round.map(|d| d.to_string())
            ),
        )
    })
}

#[derive(Default)]
struct Census {
    total: usize,
    invalid: Vec<String>,
    dimension: Vec<String>,
    round_trip: Vec<String>,
    bounds: Vec<String>,
    irreducible: usize,
}

fn census_one(n: i64, g: i64) -> Census {
    let mut c = Census::default();
    for d in enumerate(n, g) {
        c.total += 1;
        if !validate(&d.to_raw()).valid || d.genus() != g {
            c.invalid.push(d.to_string());
        }
        let irreducible = d.is_irreducible();
        if irreducible != (d.fix_dimension_harvey() == Ok(0)) {
            c.dimension.push(d.to_string());
        }
        if irreducible {
            c.irreducible += 1;
            if !(2 * g + 1..=4 * g + 2).contains(&n) {
                c.bounds.push(d.to_string());
            }
        }
        let back = decompose(&d).ok().and_then(|k| k.realize().ok()).map(|r| r.result);
        if back.as_ref() != Some(&d.canonicalize()) {
            c.round_trip.push(d.to_string());
        }
    }
    c
}

pub fn census() -> CriterionReport {
    timed(5, "census n <= 10, 2 <= g <= 6", secs(60), || {
        let cells: Vec<(i64, i64)> = (1..=10).flat_map(|n| (2..=6).map(move |g| (n, g))).collect();
        let parts: Vec<Census> = cells.par_iter().map(|&(n, g)| census_one(n, g)).collect();
        let mut all = Census::default();
        for p in parts {
            all.total += p.total;
            all.irreducible += p.irreducible;
            all.invalid.extend(p.invalid);
            all.dimension.extend(p.dimension);
            all.round_trip.extend(p.round_trip);
            all.bounds.extend(p.bounds);
        }
        let ok = all.total > 0
            && all.invalid.is_empty()
            && all.dimension.is_empty()
            && all.round_trip.is_empty()
            && all.bounds.is_empty();
        let mut detail = format!(
            "{} data sets, {} irreducible; invalid {}, dimension mismatches {}, round trip failures {}, bound violations {}",
            all.total,
            all.irreducible,
            all.invalid.len(),
            all.dimension.len(),
            all.round_trip.len(),
            all.bounds.len()
        );
        for list in [&all.invalid, &all.dimension, &all.round_trip, &all.bounds] {
            if let Some(first) = list.first() {
                detail.push_str(&format!("; e.g. {first}"));
            }
        }
        (ok, detail)
    })
}

pub fn polygons() -> CriterionReport {
    timed(6, "hyperbolic polygons n <= 20", secs(10), || {
        let sets: Vec<DataSet> = (2..=20).flat_map(spherical_type1).collect();
        let failures: Vec<String> = sets
            .par_iter()
            .filter_map(|d| {
                let spec = polygon_spec(d).ok()?;
                let check = || -> Result<bool, String> {
                    let m = solve_metrics(&spec).map_err(|e| e.to_string())?;
                    let w = pairing_word(d).map_err(|e| e.to_string())?;
                    let q = quotient_check(&w).map_err(|e| e.to_string())?;
                    Ok(m.gauss_bonnet_residual < TOLERANCE
                        && m.apex_residual < TOLERANCE
                        && m.side_residual < TOLERANCE
                        && q.genus == d.genus()
                        && w.is_equivariant(spec.rotation_steps))
                };
                match check() {
                    Ok(true) => None,
                    Ok(false) => Some(d.to_string()),
                    Err(e) => Some(format!("{d}: {e}")),
                }
            })
            .collect();
        let example = DataSet::with_pairs(14, 0, &[(1, 2), (1, 7), (5, 14)]).expect("valid");
        let fourteen = polygon_spec(&example).and_then(|s| solve_metrics(&s).map(|m| (s, m)));
        let (angle_ok, area) = match &fourteen {
            Ok((s, m)) => (
                s.sides == 14 && s.corner_angles.iter().all(|a| (a - 2.0 * PI / 7.0).abs() < TOLERANCE),
                m.area,
            ),
            Err(_) => (false, f64::NAN),
        };
        let ok = failures.is_empty() && !sets.is_empty() && angle_ok && (area - 8.0 * PI).abs() < TOLERANCE;
        let mut detail = format!(
            "{} actions certified, {} failures; 14-gon area {:.12} = 8pi{:+.1e}",
            sets.len(),
            failures.len(),
            area,
            area - 8.0 * PI
        );
        if let Some(f) = failures.first() {
            detail.push_str(&format!("; e.g. {f}"));
        }
        (ok, detail)
    })
}

pub fn fat_graphs() -> CriterionReport {
    timed(7, "filling graph fixtures", secs(5), || {
        let mut lines = Vec::new();
        let mut ok = true;

        let g1 = fixtures::gamma1();
        let a1 = g1.automorphisms();
        let inv = a1.iter().find(|a| a.order == 2);
        let r1 = inv.and_then(|h| g1.filling_irreducibility_check(h).ok());
        match &r1 {
            Some(r) => {
                ok &= g1.genus() == 2 && g1.boundary_count() == 1 && a1.len() == 2;
                ok &= r.signature.quotient_genus == 0 && r.signature.cone_orders == vec![2; 6] && !r.irreducible;
                lines.push(format!(
                    "G1: |Aut| {}, (0;{:?}), reducible",
                    a1.len(),
                    r.signature.cone_orders
                ));
            }
            None => ok = false,
        }

        let g2 = fixtures::gamma2();
        let a2 = g2.automorphisms();
        let r2 = cyclic_generator(&a2).and_then(|h| g2.filling_irreducibility_check(h).ok());
        match &r2 {
            Some(r) => {
                ok &= g2.genus() == 2 && g2.boundary_count() == 1 && a2.len() == 4;
                ok &= r.signature.quotient_genus == 0 && r.signature.cone_orders == vec![2, 2, 4, 4] && !r.irreducible;
                lines.push(format!(
                    "G2: Z{}, (0;{:?}), reducible",
                    a2.len(),
                    r.signature.cone_orders
                ));
            }
            None => ok = false,
        }

        let t = fixtures::torus_graph();
        let at = t.automorphisms();
        let rt = at
            .iter()
            .find(|a| a.order == 4)
            .and_then(|h| t.filling_irreducibility_check(h).ok());
        match &rt {
            Some(r) => {
                ok &= r.signature.quotient_genus == 0 && r.signature.cone_orders == vec![2, 4, 4];
                ok &= r.irreducible && r.predicted_irreducible;
                lines.push(format!("torus: (0;{:?}), irreducible", r.signature.cone_orders));
            }
            None => ok = false,
        }
        let verdicts: Vec<bool> = [&r1, &r2, &rt]
            .iter()
            .filter_map(|r| r.as_ref().map(|r| r.irreducible))
            .collect();
        ok &= verdicts == [false, false, true];
        (ok, lines.join("; "))
    })
}

pub fn vertex_orbits() -> CriterionReport {
    timed(8, "vertex orbit certificate (g, n) = (5, 12)", secs(1), || {
        let shape = DataSet::with_pairs(12, 0, &[(1, 6), (5, 12), (5, 12)]);
        let genus = shape.as_ref().map(DataSet::genus).unwrap_or(-1);
        let cert = vertex_orbit_certificate(5, 12, 1, &[6, 12, 12]);
        let verbatim = "12/6+12/12=3".to_string();
        let ok = genus == 5
            && cert.required_vertices == 9
            && !cert.feasible
            && cert.vertex_candidate_sums.contains(&verbatim);
        (
            ok,
            format!(
                "|V| = 2g-2+b = {} not reachable from {:?} plus multiples of 12; vertex orbits without the disk center: {:?}",
                cert.required_vertices, cert.orbit_sums, cert.vertex_candidate_sums
            ),
        )
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCounts {
    pub necklaces: usize,
    pub closed_agrees: usize,
    pub no_handles_added: usize,
    pub factor_agrees: usize,
    /// Among the factor-count disagreements, those with `g' = g'' = 0`.
    pub factor_off_unhandled: usize,
}

pub fn audit_counts() -> AuditCounts {
    let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED);
    let orders = [3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15];
    let mut counts = AuditCounts::default();
    let mut attempts = 0;
    while counts.necklaces < AUDIT_SIZE && attempts < 20 * AUDIT_SIZE {
        attempts += 1;
        let n = orders[attempts % orders.len()];
        let Some(neck) = random_necklace(n, 5, &mut rng) else {
            continue;
        };
        let (Ok(dim), Ok(desc)) = (neck.fix_dimension(), neck.fix_descriptor()) else {
            continue;
        };
        counts.necklaces += 1;
        let (k, f, m) = (
            neck.bead_count() as i64,
            neck.chain.full_links() as i64,
            neck.self_pairs.len() as i64,
        );
        let closed = 6 * (neck.handles_added() - neck.handles_removed()) + 2 * k + 4 * f + 2 * m - 2;
        counts.closed_agrees += (dim.consistent && closed == dim.harvey) as usize;
        if neck.handles_added() == 0 {
            counts.no_handles_added += 1;
            if desc.factor_dimension() == desc.dim {
                counts.factor_agrees += 1;
            } else if neck.handles_removed() == 0 {
                counts.factor_off_unhandled += 1;
            }
        }
    }
    counts
}

pub fn consistency_audit() -> CriterionReport {
    timed(9, "dimension audit on random necklaces", secs(30), || {
        let c = audit_counts();
        let ok = c.necklaces == AUDIT_SIZE && c.closed_agrees == c.necklaces && c.factor_agrees == c.no_handles_added;
        (
            ok,
            format!(
                "closed form = Harvey on {}/{}; g' = 0: factor counts agree on {}/{} ({} of the {} disagreements have g' = g'' = 0)",
                c.closed_agrees,
                c.necklaces,
                c.factor_agrees,
                c.no_handles_added,
                c.factor_off_unhandled,
                c.no_handles_added - c.factor_agrees
            ),
        )
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    vec![
        chain_example(),
        necklace_example(),
        descriptor_example(),
        two_necklaces(),
        census(),
        polygons(),
        fat_graphs(),
        vertex_orbits(),
        consistency_audit(),
    ]
}
