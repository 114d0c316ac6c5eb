//! Named verification suites behind `permix verify`. Each suite produces a
//! deterministic list of per-case expected/actual results.

use itertools::Itertools;
use serde::Serialize;

use permix_core::{
    breakpoints, format_rat, is_zone, mixed_volume, normalizer_v, product_formula, rat, shift_sum,
    superaffine_check, target_multiset, walk_probability, Capacity, Configuration, FamilySpec,
    FormulaResult, Rat, Reading, ZoneSpec,
};

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "example1",
    "example2",
    "shiftsum",
    "zones",
    "lemma42",
    "superaffine",
];

/// Runs one named suite, or all of them for `"all"`. `None` for an unknown
/// name.
pub fn run(name: &str) -> Option<Vec<SuiteReport>> {
    match name {
        "all" => Some(SUITE_NAMES.iter().map(|s| run_one(s)).collect()),
        _ if SUITE_NAMES.contains(&name) => Some(vec![run_one(name)]),
        _ => None,
    }
}

fn run_one(name: &str) -> SuiteReport {
    let cases = match name {
        "example1" => example1(),
        "example2" => example2(),
        "shiftsum" => shiftsum(),
        "zones" => zones(),
        "lemma42" => lemma42(),
        "superaffine" => superaffine(),
        _ => unreachable!("validated by run"),
    };
    SuiteReport {
        suite: name.to_string(),
        cases,
    }
}

fn fam(n: u32, r: u32, s: u32) -> FamilySpec {
    FamilySpec::new(n, r, s).expect("suite families are valid")
}

fn config(f: &FamilySpec, entries: &[(i64, i64)]) -> Configuration {
    Configuration::new(f, entries.iter().map(|&(p, q)| rat(p, q)).collect())
        .expect("suite configs are valid")
}

fn config_name(entries: &[(i64, i64)]) -> String {
    format!(
        "({})",
        entries.iter().map(|(p, q)| format!("{p}/{q}")).join(",")
    )
}

fn case_rat(name: String, expected: &Rat, actual: &Rat) -> CaseResult {
    CaseResult {
        name,
        expected: format_rat(expected),
        actual: format_rat(actual),
        pass: expected == actual,
    }
}

fn case_str(name: String, expected: &str, actual: &str) -> CaseResult {
    CaseResult {
        name,
        expected: expected.to_string(),
        actual: actual.to_string(),
        pass: expected == actual,
    }
}

/// Both routes against an expected ratio; mismatching routes fail even if
/// one of them hits the expected value.
fn case_both_routes(f: &FamilySpec, entries: &[(i64, i64)], expected: Rat) -> CaseResult {
    let cfg = config(f, entries);
    let walk = walk_probability(f, &cfg, None).expect("default order").ratio;
    let oracle = mixed_volume(f, &cfg).ratio;
    let actual = if walk == oracle {
        format_rat(&walk)
    } else {
        format!("walk {} vs oracle {}", format_rat(&walk), format_rat(&oracle))
    };
    CaseResult {
        name: format!("{} {} walk=oracle ratio", f, config_name(entries)),
        expected: format_rat(&expected),
        actual,
        pass: walk == expected && oracle == expected,
    }
}

/// The published quarter-grid ratio table for the n=4 hypersimplex family.
pub fn quarter_grid_table() -> Vec<(Vec<(i64, i64)>, Rat)> {
    vec![
        (vec![(1, 4), (1, 4), (1, 4)], rat(1, 6)),
        (vec![(1, 4), (1, 4), (2, 4)], rat(2, 6)),
        (vec![(1, 4), (1, 4), (3, 4)], rat(3, 6)),
        (vec![(1, 4), (2, 4), (2, 4)], rat(4, 6)),
        (vec![(1, 4), (2, 4), (3, 4)], rat(1, 1)),
        (vec![(1, 4), (3, 4), (3, 4)], rat(3, 6)),
        (vec![(2, 4), (2, 4), (2, 4)], rat(4, 6)),
        (vec![(2, 4), (2, 4), (3, 4)], rat(4, 6)),
        (vec![(2, 4), (3, 4), (3, 4)], rat(2, 6)),
        (vec![(3, 4), (3, 4), (3, 4)], rat(1, 6)),
    ]
}

fn example1() -> Vec<CaseResult> {
    let f = fam(4, 1, 3);
    let mut cases: Vec<CaseResult> = quarter_grid_table()
        .into_iter()
        .map(|(entries, expected)| case_both_routes(&f, &entries, expected))
        .collect();
    // normalization: the target configuration realizes the normalizer itself
    let target = config(&f, &[(1, 4), (2, 4), (3, 4)]);
    let res = mixed_volume(&f, &target);
    cases.push(case_rat(
        format!("{f} normalization: value at target = V0"),
        &res.normalizer,
        &res.value,
    ));
    cases
}

fn example2() -> Vec<CaseResult> {
    let f = fam(4, 1, 2);
    let mut cases = Vec::new();
    let table = breakpoints(&f);
    cases.push(case_str(
        format!("{f} breakpoint positions"),
        "1/2, 3/4",
        &table
            .entries()
            .iter()
            .filter(|b| matches!(b.capacity, Capacity::Finite(_)))
            .map(|b| format_rat(&b.position))
            .join(", "),
    ));
    cases.push(case_str(
        format!("{f} interior capacities"),
        "1, 2",
        &table
            .entries()
            .iter()
            .filter_map(|b| match b.capacity {
                Capacity::Finite(c) => Some(c.to_string()),
                Capacity::Kill => None,
            })
            .join(", "),
    ));
    cases.push(case_both_routes(&f, &[(1, 2), (3, 4), (3, 4)], rat(1, 1)));
    cases.push(case_both_routes(&f, &[(1, 4), (3, 4), (3, 4)], rat(1, 2)));
    // the rest of the quarter grid: walk against oracle, no external table
    for entries in [(1i64, 4i64), (2, 4), (3, 4)]
        .into_iter()
        .combinations_with_replacement(3)
    {
        let cfg = config(&f, &entries);
        let oracle = mixed_volume(&f, &cfg).ratio;
        cases.push(case_rat(
            format!("{} {} walk vs oracle", f, config_name(&entries)),
            &oracle,
            &walk_probability(&f, &cfg, None).expect("default order").ratio,
        ));
    }
    cases
}

fn shiftsum() -> Vec<CaseResult> {
    let f = fam(4, 1, 3);
    let grid_lines: [&[(i64, i64)]; 5] = [
        &[(1, 4), (1, 4), (1, 4)],
        &[(1, 4), (1, 4), (2, 4)],
        &[(1, 4), (1, 4), (3, 4)],
        &[(1, 4), (2, 4), (2, 4)],
        &[(1, 4), (2, 4), (3, 4)],
    ];
    let off_grid: [&[(i64, i64)]; 3] = [
        &[(1, 8), (3, 8), (5, 8)],
        &[(1, 3), (1, 2), (2, 3)],
        &[(1, 5), (2, 5), (7, 10)],
    ];
    grid_lines
        .iter()
        .chain(off_grid.iter())
        .map(|entries| {
            let sum = shift_sum(&f, &config(&f, entries)).expect("hypersimplex family");
            case_rat(
                format!("{} shift-sum {}", f, config_name(entries)),
                &rat(1, 1),
                &sum,
            )
        })
        .collect()
}

fn zones() -> Vec<CaseResult> {
    let f = fam(4, 1, 3);
    let fixtures: Vec<(&str, Vec<((i64, i64), (i64, i64))>, bool)> = vec![
        (
            "adjacent gaps",
            vec![((0, 1), (1, 4)), ((1, 4), (2, 4)), ((2, 4), (3, 4))],
            true,
        ),
        (
            "wide interval with pinned witness",
            vec![((1, 4), (3, 4)), ((2, 4), (2, 4)), ((2, 4), (3, 4))],
            true,
        ),
        (
            "wide interval without witness",
            vec![((1, 4), (3, 4)), ((1, 4), (2, 4)), ((2, 4), (3, 4))],
            false,
        ),
        (
            "non-breakpoint endpoint",
            vec![((0, 1), (1, 3)), ((1, 4), (2, 4)), ((2, 4), (3, 4))],
            false,
        ),
    ];
    let mut cases: Vec<CaseResult> = fixtures
        .into_iter()
        .map(|(name, iv, expected)| {
            let zone = ZoneSpec::new(
                iv.iter()
                    .map(|&((a, b), (c, d))| (rat(a, b), rat(c, d)))
                    .collect(),
            )
            .expect("fixture intervals valid");
            case_str(
                format!("{f} zone: {name}"),
                &expected.to_string(),
                &is_zone(&f, &zone).to_string(),
            )
        })
        .collect();
    // capacity-2 site of the second family needs two pinned witnesses
    let f2 = fam(4, 1, 2);
    for (pins, expected) in [(2usize, true), (1, false)] {
        let mut iv = vec![(rat(1, 2), rat(1, 1))];
        for _ in 0..pins {
            iv.push((rat(3, 4), rat(3, 4)));
        }
        while iv.len() < 3 {
            iv.push((rat(1, 2), rat(3, 4)));
        }
        let zone = ZoneSpec::new(iv).expect("valid intervals");
        cases.push(case_str(
            format!("{f2} zone: {pins} pinned at 3/4"),
            &expected.to_string(),
            &is_zone(&f2, &zone).to_string(),
        ));
    }
    cases
}

fn formula_str(res: &FormulaResult) -> String {
    match res {
        FormulaResult::Value(v) => format_rat(v),
        FormulaResult::NotApplicable => "NOT_APPLICABLE".to_string(),
    }
}

fn lemma42() -> Vec<CaseResult> {
    let mut cases = Vec::new();
    // ascending case on both families: formula = walk
    let below: [(FamilySpec, &[(i64, i64)]); 4] = [
        (fam(4, 1, 3), &[(1, 4), (1, 4), (2, 4)]),
        (fam(4, 1, 3), &[(1, 8), (3, 8), (5, 8)]),
        (fam(4, 1, 2), &[(1, 4), (1, 2), (3, 4)]),
        (fam(4, 1, 2), &[(1, 3), (2, 3), (2, 3)]),
    ];
    for (f, entries) in below {
        let cfg = config(&f, entries);
        let walk = walk_probability(&f, &cfg, None).expect("default order").ratio;
        cases.push(case_str(
            format!("{} ascending {}", f, config_name(entries)),
            &format_rat(&walk),
            &formula_str(&product_formula(&f, &cfg, Reading::Mirrored)),
        ));
    }
    // descending case: adjudicate the two readings against walk and oracle
    // on every all-above-target quarter-grid configuration of (n=4, R={1,2})
    let f = fam(4, 1, 2);
    let q = target_multiset(&f);
    let mut literal_ok = true;
    let mut mirrored_ok = true;
    for entries in [(1i64, 4i64), (2, 4), (3, 4)]
        .into_iter()
        .combinations_with_replacement(3)
    {
        let cfg = config(&f, &entries);
        if !cfg.entries().iter().zip(&q).all(|(u, qt)| u >= qt) {
            continue;
        }
        let walk = walk_probability(&f, &cfg, None).expect("default order").ratio;
        let oracle = mixed_volume(&f, &cfg).ratio;
        cases.push(case_rat(
            format!("{} descending {} walk=oracle", f, config_name(&entries)),
            &walk,
            &oracle,
        ));
        for (reading, ok) in [
            (Reading::PaperLiteral, &mut literal_ok),
            (Reading::Mirrored, &mut mirrored_ok),
        ] {
            if product_formula(&f, &cfg, reading) != FormulaResult::Value(walk.clone()) {
                *ok = false;
            }
        }
    }
    let verdict = match (literal_ok, mirrored_ok) {
        (false, true) => "mirrored",
        (true, false) => "literal",
        (true, true) => "both",
        (false, false) => "neither",
    };
    cases.push(case_str(
        format!("{f} descending-case reading verdict"),
        "mirrored",
        verdict,
    ));
    cases
}

fn superaffine() -> Vec<CaseResult> {
    let mut cases = Vec::new();
    let triples: [(FamilySpec, (i64, i64), (i64, i64), (i64, i64)); 6] = [
        (fam(4, 1, 3), (1, 4), (3, 4), (1, 1)),
        (fam(4, 1, 3), (1, 4), (3, 4), (1, 2)),
        (fam(4, 1, 3), (1, 8), (5, 8), (1, 3)),
        (fam(4, 1, 2), (1, 2), (3, 4), (1, 3)),
        (fam(4, 1, 2), (1, 5), (4, 5), (2, 5)),
        (fam(3, 1, 2), (1, 3), (2, 3), (1, 2)),
    ];
    for (f, u, v, a) in triples {
        let ok = superaffine_check(&f, &rat(u.0, u.1), &rat(v.0, v.1), &rat(a.0, a.1))
            .expect("parameters in range");
        cases.push(case_str(
            format!(
                "{} contains combo of u={}/{}, u'={}/{}, a={}/{}",
                f, u.0, u.1, v.0, v.1, a.0, a.1
            ),
            "true",
            &ok.to_string(),
        ));
    }
    // strict case: the midpoint octahedron strictly exceeds the average of
    // the two simplices, so containment is typically proper
    let f = fam(4, 1, 3);
    let half = rat(1, 2);
    let combo_vol = {
        use permix_core::{enumerate_vertices, minkowski_sum, volume};
        let at = |u: Rat| {
            enumerate_vertices(&permix_core::build_hrep(
                &f,
                &permix_core::embed_config(&f, &u).expect("in range"),
            ))
            .expect("bounded")
        };
        let sum = minkowski_sum(&[at(rat(1, 4)).scale(&half), at(rat(3, 4)).scale(&half)])
            .expect("nonempty");
        volume(&sum).expect("bounded")
    };
    let mid_vol = {
        use permix_core::{build_hrep, embed_config, volume};
        volume(&build_hrep(&f, &embed_config(&f, &half).expect("in range"))).expect("bounded")
    };
    cases.push(case_str(
        format!("{f} strict containment at u=1/4, u'=3/4, a=1/2"),
        "combo smaller",
        if combo_vol < mid_vol {
            "combo smaller"
        } else {
            "not strict"
        },
    ));
    cases
}

/// Cross-method consistency used by `verify all`: walk and oracle ratios
/// agree on the quarter grids of both n=4 families (the record-level
/// invariant behind the cache).
pub fn cross_method_consistent() -> bool {
    for f in [fam(4, 1, 3), fam(4, 1, 2)] {
        for entries in [(1i64, 4i64), (2, 4), (3, 4)]
            .into_iter()
            .combinations_with_replacement(3)
        {
            let cfg = config(&f, &entries);
            let walk = walk_probability(&f, &cfg, None).expect("default order").ratio;
            if walk != mixed_volume(&f, &cfg).ratio {
                return false;
            }
        }
    }
    true
}

/// Normalizer diagnostics for `permix normalizer`: the coordinate value, the
/// Gram determinant of the facet-system embedding, and (approximate, for
/// display only) metric rescalings.
pub fn normalizer_report(f: &FamilySpec) -> String {
    let v0 = normalizer_v(f);
    let det = permix_core::embedding_gram_det(f);
    let v0_f = approx(&v0);
    let det_f = approx(&det);
    let hyperplane = v0_f * (f.n() as f64).sqrt();
    let mut out = String::new();
    out.push_str(&format!("family {f}\n"));
    out.push_str(&format!("normalizer V0 (coordinate convention): {}\n", format_rat(&v0)));
    out.push_str(&format!(
        "facet-system embedding Gram determinant: {}\n",
        format_rat(&det)
    ));
    out.push_str(&format!(
        "approx V0 * sqrt(gram) = {:.6} (facet-system metric)\n",
        v0_f * det_f.sqrt()
    ));
    out.push_str(&format!(
        "approx V0 * sqrt(n) = {hyperplane:.6} (euclidean sum-zero hyperplane)\n"
    ));
    out.push_str(&format!(
        "exact check: V0^2 * gram = {}\n",
        format_rat(&(&v0 * &v0 * &det))
    ));
    out
}

fn approx(r: &Rat) -> f64 {
    let p: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let q: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    p / q
}
