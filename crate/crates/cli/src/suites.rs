//! Seeded and exhaustive verification suites. Each returns counts and a
//! bounded, deterministically ordered list of counterexamples.

use std::collections::BTreeMap;

use flagtrop::exactalg::{format_rat, rat_int, rational_rank};
use flagtrop::flagmat::is_flag_matroid;
use flagtrop::mrcells::{certify_tnn_flag, phi, reconstruct_from_extremal, recover_parameters};
use flagtrop::plucker::generate_all;
use flagtrop::tropic::{
    certify_tnn_tropical, first_fldr_violation, first_three_term_violation, in_fldr,
    in_fldr_nonneg, in_three_term_dressian, in_three_term_dressian_nonneg,
    in_tnn_tropical_flag_variety, puiseux_valuation_check, trop_phi, trop_psi,
};
use flagtrop::{
    Cell, CellAtlas, Coords, PlueckerVector, Rat, Subset, Support, TropVal, TropicalPoint,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::sampling;

/// At most this many counterexamples are kept per suite.
pub const MAX_COUNTEREXAMPLES: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub counterexamples: Vec<Value>,
    pub stats: BTreeMap<String, u64>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.to_string(),
            checked: 0,
            failed: 0,
            counterexamples: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn absorb(&mut self, outcome: Outcome) {
        self.checked += 1;
        for (key, count) in outcome.stats {
            *self.stats.entry(key.to_string()).or_default() += count;
        }
        if let Some(cx) = outcome.failure {
            self.failed += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(cx);
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "checked": self.checked,
            "passed": self.checked - self.failed,
            "failed": self.failed,
            "stats": self.stats,
            "counterexamples": self.counterexamples,
        })
    }
}

#[derive(Default)]
struct Outcome {
    failure: Option<Value>,
    stats: Vec<(&'static str, u64)>,
}

impl Outcome {
    fn pass() -> Self {
        Outcome::default()
    }

    fn fail(cx: Value) -> Self {
        Outcome {
            failure: Some(cx),
            stats: Vec::new(),
        }
    }

    fn stat(mut self, key: &'static str) -> Self {
        self.stats.push((key, 1));
        self
    }
}

fn collect(name: &str, outcomes: Vec<Outcome>) -> SuiteResult {
    let mut result = SuiteResult::new(name);
    for outcome in outcomes {
        result.absorb(outcome);
    }
    result
}

/// Runs `check(cell_index, sample_index)` over every cell and sample in
/// parallel, keeping the cell-major order in the result.
fn per_cell(
    atlas: &CellAtlas,
    samples: usize,
    check: impl Fn(usize, u64) -> Outcome + Sync,
) -> Vec<Outcome> {
    (0..atlas.len())
        .into_par_iter()
        .flat_map_iter(|i| (0..samples as u64).map(move |s| (i, s)))
        .map(|(i, s)| check(i, s))
        .collect()
}

fn rats_json(values: &[Rat]) -> Value {
    Value::from(values.iter().map(format_rat).collect::<Vec<_>>())
}

fn coords_json(p: &PlueckerVector) -> Value {
    let map: serde_json::Map<String, Value> =
        p.iter().map(|(s, x)| (s.to_string(), Value::from(format_rat(x)))).collect();
    json!({ "n": p.n(), "coords": map })
}

fn cell_json(cell: &Cell) -> Value {
    json!({ "v": cell.v().images(), "w": cell.w().images() })
}

/// Every canonical relation vanishes on the flags of random invertible
/// rational matrices.
pub fn relation_soundness(n: usize, seed: u64, samples: usize) -> flagtrop::Result<SuiteResult> {
    let relations = generate_all(n)?;
    let outcomes = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let m = sampling::invertible_matrix(&mut sampling::stream(seed, "relations", 0, s), n);
            let p = m.all_pluecker().expect("invertible");
            match relations.first_violated(&p).expect("same n") {
                None => Outcome::pass(),
                Some(rel) => Outcome::fail(json!({
                    "matrix": (0..n).map(|r| rats_json(m.row(r))).collect::<Vec<_>>(),
                    "relation": rel.to_json(),
                })),
            }
        })
        .collect();
    Ok(collect("relation-soundness", outcomes))
}

fn certify_outcome(atlas: &CellAtlas, p: &PlueckerVector, expect: Option<&Cell>) -> Option<String> {
    match certify_tnn_flag(atlas, p) {
        Ok(Some(cert)) => match expect {
            Some(cell) if (&cert.v, &cert.w) != (cell.v(), cell.w()) => Some(format!(
                "certified in ({}, {}) instead of ({}, {})",
                cert.v,
                cert.w,
                cell.v(),
                cell.w()
            )),
            _ => None,
        },
        Ok(None) => Some("reported as having mixed signs".into()),
        Err(e) => Some(e.to_string()),
    }
}

/// Cell points are nonnegative with the cell's support and are certified
/// back into their cell; independently built nonnegative flags are
/// certified; flags with a mixed-sign level are rejected.
pub fn nonneg_pluecker(
    atlas: &CellAtlas,
    seed: u64,
    samples: usize,
    independent: usize,
) -> SuiteResult {
    let n = atlas.n();
    let mut outcomes = per_cell(atlas, samples, |i, s| {
        let cell = &atlas.cells()[i];
        let mut rng = sampling::stream(seed, "nonneg-pluecker", i as u64, s);
        let a = sampling::positive_parameters(&mut rng, cell.dimension());
        let fail = |msg: String| {
            Outcome::fail(json!({ "cell": cell_json(cell), "parameters": rats_json(&a), "error": msg }))
        };
        let p = match phi(cell, &a) {
            Ok(p) => p,
            Err(e) => return fail(e.to_string()),
        };
        match certify_outcome(atlas, &p, Some(cell)) {
            None => Outcome::pass().stat("cellPoints"),
            Some(msg) => fail(msg),
        }
    });
    let independent_outcomes: Vec<Outcome> = (0..independent as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = sampling::stream(seed, "nonneg-flags", 0, s);
            let p = sampling::nonneg_flag(&mut rng, n);
            match certify_outcome(atlas, &p, None) {
                None => Outcome::pass().stat("independentFlags"),
                Some(msg) => Outcome::fail(json!({ "point": coords_json(&p), "error": msg })),
            }
        })
        .collect();
    let rejection: Vec<Outcome> = (0..independent.div_ceil(10) as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = sampling::stream(seed, "mixed-flags", 0, s);
            let p = sampling::mixed_sign_flag(&mut rng, n);
            match certify_tnn_flag(atlas, &p) {
                Ok(None) => Outcome::pass().stat("mixedSignRejected"),
                Ok(Some(_)) => Outcome::fail(json!({
                    "point": coords_json(&p),
                    "error": "mixed-sign flag was certified",
                })),
                Err(e) => Outcome::fail(json!({ "point": coords_json(&p), "error": e.to_string() })),
            }
        })
        .collect();
    outcomes.extend(independent_outcomes);
    outcomes.extend(rejection);
    collect("nonneg-pluecker", outcomes)
}

/// Extremal coordinates are monomials with a full-rank exponent system, and
/// parameters are recovered exactly from cell points.
pub fn psi_monomial(atlas: &CellAtlas, seed: u64, samples: usize) -> SuiteResult {
    let mut outcomes: Vec<Outcome> = atlas
        .cells()
        .par_iter()
        .map(|cell| {
            let non_monomial: Vec<String> = cell
                .extremal()
                .iter()
                .filter(|s| cell.symbolic().get(s).as_monomial().is_none())
                .map(|s| s.to_string())
                .collect();
            let rows: Vec<Vec<i64>> =
                cell.exponents().rows.iter().map(|r| r.exponents.clone()).collect();
            let rank = rational_rank(&rows, cell.dimension());
            if non_monomial.is_empty() && rank == cell.dimension() {
                Outcome::pass().stat("cells")
            } else {
                Outcome::fail(json!({
                    "cell": cell_json(cell),
                    "nonMonomial": non_monomial,
                    "rank": rank,
                    "dimension": cell.dimension(),
                }))
            }
        })
        .collect();
    outcomes.extend(per_cell(atlas, samples, |i, s| {
        let cell = &atlas.cells()[i];
        let mut rng = sampling::stream(seed, "psi-monomial", i as u64, s);
        let a = sampling::positive_parameters(&mut rng, cell.dimension());
        let recovered = phi(cell, &a).and_then(|p| recover_parameters(cell, &p));
        match recovered {
            Ok(b) if b == a => Outcome::pass().stat("roundTrips"),
            Ok(b) => Outcome::fail(json!({
                "cell": cell_json(cell),
                "parameters": rats_json(&a),
                "recovered": rats_json(&b),
            })),
            Err(e) => Outcome::fail(json!({
                "cell": cell_json(cell),
                "parameters": rats_json(&a),
                "error": e.to_string(),
            })),
        }
    }));
    collect("psi-monomial", outcomes)
}

/// Three-term propagation from the extremal coordinates reproduces `Φ(a)`.
pub fn three_term_reconstruct(atlas: &CellAtlas, seed: u64, samples: usize) -> SuiteResult {
    let outcomes = per_cell(atlas, samples, |i, s| {
        let cell = &atlas.cells()[i];
        let mut rng = sampling::stream(seed, "three-term-reconstruct", i as u64, s);
        let a = sampling::positive_parameters(&mut rng, cell.dimension());
        let fail = |msg: String| {
            Outcome::fail(json!({ "cell": cell_json(cell), "parameters": rats_json(&a), "error": msg }))
        };
        let p = match phi(cell, &a) {
            Ok(p) => p,
            Err(e) => return fail(e.to_string()),
        };
        let extremal: BTreeMap<Subset, Rat> =
            cell.extremal().iter().map(|s| (s, p.get(&s).clone())).collect();
        match reconstruct_from_extremal(cell, &extremal) {
            Ok(q) if q == p => Outcome::pass(),
            Ok(_) => fail("reconstruction differs from Φ(a)".into()),
            Err(e) => fail(e.to_string()),
        }
    });
    collect("three-term-reconstruct", outcomes)
}

/// `Trop Φ(c)` lies in all three nonnegative tropical sets, `Trop Ψ` inverts
/// it, and the valuations of `Φ(t^c)` agree with it.
pub fn tropical_image(atlas: &CellAtlas, seed: u64, samples: usize) -> SuiteResult {
    let outcomes = per_cell(atlas, samples, |i, s| {
        let cell = &atlas.cells()[i];
        let mut rng = sampling::stream(seed, "puiseux", i as u64, s);
        let c = sampling::integer_parameters(&mut rng, cell.dimension(), 10);
        let c_rat: Vec<Rat> = c.iter().map(|&x| rat_int(x)).collect();
        let p = match trop_phi(cell, &c_rat) {
            Ok(p) => p,
            Err(e) => {
                return Outcome::fail(json!({ "cell": cell_json(cell), "c": c, "error": e.to_string() }))
            }
        };
        let checks = [
            ("in_fldr_nonneg", in_fldr_nonneg(&p).unwrap_or(false)),
            ("in_three_term_dressian_nonneg", in_three_term_dressian_nonneg(&p).unwrap_or(false)),
            ("in_tnn_tropical_flag_variety", in_tnn_tropical_flag_variety(atlas, &p).unwrap_or(false)),
            ("trop_psi", trop_psi(cell, &p).map(|d| d == c_rat).unwrap_or(false)),
            ("puiseux_valuation_check", puiseux_valuation_check(cell, &c).unwrap_or(false)),
        ];
        let failing: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(k, _)| *k).collect();
        if failing.is_empty() {
            Outcome::pass()
        } else {
            Outcome::fail(json!({
                "cell": cell_json(cell),
                "c": c,
                "point": p.to_json(),
                "failing": failing,
            }))
        }
    });
    collect("puiseux", outcomes)
}

/// Test points for the set-equality suites: every gauge-fixed integer point
/// of the box for `n = 3` (all supports with no empty level), seeded mixed
/// samples otherwise.
pub fn test_points(
    atlas: &CellAtlas,
    seed: u64,
    samples: usize,
    box_radius: u32,
    suite: &str,
) -> Vec<TropicalPoint> {
    if atlas.n() == 3 {
        exhaustive_box(3, box_radius)
    } else {
        (0..samples as u64)
            .into_par_iter()
            .map(|s| {
                let mut rng = sampling::stream(seed, suite, 0, s);
                match s % 3 {
                    0 => sampling::image_point(&mut rng, atlas, 10).2,
                    1 => {
                        let (_, _, p) = sampling::image_point(&mut rng, atlas, 10);
                        sampling::perturb(&mut rng, &p)
                    }
                    _ => sampling::random_point(&mut rng, atlas, 2),
                }
            })
            .collect()
    }
}

/// All points with integer coordinates in `[-radius, radius]` whose first
/// finite coordinate in each level is pinned to 0, over every support
/// pattern that leaves no level empty.
pub fn exhaustive_box(n: usize, radius: u32) -> Vec<TropicalPoint> {
    let order = flagtrop::flagcomb::coordinate_order(n);
    let radius = i64::from(radius);
    let mut points = Vec::new();
    for pattern in 0u64..1 << order.len() {
        let support = Support::from_indices(
            n,
            order.iter().copied().filter(|s| pattern >> s.coordinate_position() & 1 == 1),
        );
        if (1..n).any(|k| support.level(k).is_empty()) {
            continue;
        }
        let pinned: Vec<Subset> = (1..n).map(|k| support.level(k)[0]).collect();
        let free: Vec<Subset> = support.iter().filter(|s| !pinned.contains(s)).collect();
        let width = (2 * radius + 1) as u64;
        let total = width.pow(free.len() as u32);
        for code in 0..total {
            let mut coords: Coords<TropVal> = Coords::from_fn(n, |s| {
                if support.contains(&s) {
                    TropVal::int(0)
                } else {
                    TropVal::Inf
                }
            });
            let mut rest = code;
            for s in &free {
                coords.set(s, TropVal::int((rest % width) as i64 - radius));
                rest /= width;
            }
            points.push(TropicalPoint::new(coords).expect("no empty level"));
        }
    }
    points
}

fn verdict_json(p: &TropicalPoint) -> Value {
    match first_fldr_violation(p, true) {
        Ok(Some(v)) => json!({
            "relation": v.relation,
            "provenance": v.provenance.to_string(),
            "minimum": v.minimum.to_string(),
        }),
        _ => Value::Null,
    }
}

/// The three nonnegative tropical sets agree on every test point.
pub fn main_theorem(
    atlas: &CellAtlas,
    seed: u64,
    samples: usize,
    box_radius: u32,
) -> SuiteResult {
    let points = test_points(atlas, seed, samples, box_radius, "main");
    let outcomes = points
        .par_iter()
        .map(|p| {
            let verdicts = [
                ("tnn-dressian", in_fldr_nonneg(p).unwrap_or(false)),
                ("tnn-three-term", in_three_term_dressian_nonneg(p).unwrap_or(false)),
                ("tnn", in_tnn_tropical_flag_variety(atlas, p).unwrap_or(false)),
            ];
            if verdicts.iter().all(|v| v.1 == verdicts[0].1) {
                let outcome = Outcome::pass();
                let outcome = if verdicts[0].1 { outcome.stat("members") } else { outcome.stat("nonMembers") };
                if p.support() == Support::full(p.n()) { outcome.stat("fullSupport") } else { outcome }
            } else {
                let failing = verdicts.iter().find(|v| !v.1).map(|v| v.0);
                Outcome::fail(json!({
                    "point": p.to_json(),
                    "verdicts": verdicts.iter().map(|(k, v)| (k.to_string(), Value::from(*v))).collect::<serde_json::Map<_, _>>(),
                    "failingMode": failing,
                    "violated": verdict_json(p),
                    "supportIsFlagMatroid": is_flag_matroid(&p.support()),
                }))
            }
        })
        .collect();
    collect("main", outcomes)
}

/// The complete flag Dressian and the three-term Dressian with flag matroid
/// support agree on every test point.
pub fn dressian_3m(atlas: &CellAtlas, seed: u64, samples: usize, box_radius: u32) -> SuiteResult {
    let points = test_points(atlas, seed, samples, box_radius, "dressian-3m");
    let outcomes = points
        .par_iter()
        .map(|p| {
            let full = in_fldr(p).unwrap_or(false);
            let three = in_three_term_dressian(p).unwrap_or(false);
            if full == three {
                if full { Outcome::pass().stat("members") } else { Outcome::pass().stat("nonMembers") }
            } else {
                let violated = if full {
                    first_three_term_violation(p, false).ok().flatten()
                } else {
                    first_fldr_violation(p, false).ok().flatten()
                };
                Outcome::fail(json!({
                    "point": p.to_json(),
                    "verdicts": { "dressian": full, "three-term": three },
                    "failingMode": if full { "three-term" } else { "dressian" },
                    "violated": violated.map(|v| v.relation),
                    "supportIsFlagMatroid": is_flag_matroid(&p.support()),
                }))
            }
        })
        .collect();
    collect("dressian-3m", outcomes)
}

/// Certificate for a point in the image of `Trop Φ`, as reported by `check`.
pub fn tropical_certificate_json(atlas: &CellAtlas, p: &TropicalPoint) -> flagtrop::Result<Option<Value>> {
    Ok(certify_tnn_tropical(atlas, p)?.map(|cert| {
        let cell = &atlas.cells()[cert.cell_index];
        json!({
            "v": cell.v().images(),
            "w": cell.w().images(),
            "c": rats_json(&cert.parameters),
        })
    }))
}
