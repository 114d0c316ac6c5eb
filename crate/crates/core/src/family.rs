//! The family definition: facet system, breakpoints with capacities, walk
//! configurations, the parameter embedding and the zone predicate.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::Error;
use crate::rat::{in_unit_interval, Rat};

fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

/// The pair `(n, R={r,s})` defining the facet system `H` (all subsets of
/// `[n]` with cardinality `r` or `s`) and the ambient coordinate dimension
/// `m = n-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FamilySpec {
    n: u32,
    r: u32,
    s: u32,
}

impl FamilySpec {
    pub fn new(n: u32, r: u32, s: u32) -> Result<Self, Error> {
        if n < 3 {
            return Err(Error::InvalidFamily(format!("n must be >= 3, got {n}")));
        }
        if !(1 <= r && r < s && s <= n - 1) {
            return Err(Error::InvalidFamily(format!(
                "need 1 <= r < s <= n-1, got r={r}, s={s}, n={n}"
            )));
        }
        Ok(FamilySpec { n, r, s })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Number of walk particles and of polytopes in a fully mixed computation.
    pub fn m(&self) -> usize {
        (self.n - 1) as usize
    }

    pub fn is_hypersimplex(&self) -> bool {
        self.r == 1 && self.s == self.n - 1
    }

    pub fn h_size(&self) -> u64 {
        binomial(self.n, self.r) + binomial(self.n, self.s)
    }

    /// The facet index set `H`: subsets of `[n]` with `|T| in {r, s}`,
    /// ordered by (cardinality, bitmask).
    pub fn facet_subsets(&self) -> Vec<Subset> {
        let mut out = Vec::with_capacity(self.h_size() as usize);
        for size in [self.r, self.s] {
            let mut sized: Vec<Subset> = (1u32..(1 << self.n))
                .filter(|mask| mask.count_ones() == size)
                .map(Subset)
                .collect();
            sized.sort();
            out.extend(sized);
        }
        out
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, R={{{},{}}})", self.n, self.r, self.s)
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u32,
            r: u32,
            s: u32,
        }
        let raw = Raw::deserialize(d)?;
        FamilySpec::new(raw.n, raw.r, raw.s).map_err(serde::de::Error::custom)
    }
}

/// A subset of `[n] = {1, ..., n}` as a bitmask (bit `i-1` for element `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u32);

impl Subset {
    pub fn size(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(&self, element: u32) -> bool {
        debug_assert!(element >= 1);
        self.0 & (1 << (element - 1)) != 0
    }

    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        let mask = self.0;
        (1..=32).filter(move |i| mask & (1 << (i - 1)) != 0)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, el) in self.members().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{el}")?;
        }
        write!(f, "}}")
    }
}

/// Capacity of an absorbing site: `Kill` prunes the branch, `Finite(c)`
/// absorbs up to `c` particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capacity {
    Kill,
    Finite(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Breakpoint {
    pub t: u32,
    pub position: Rat,
    pub capacity: Capacity,
}

/// Absorption sites `p_t` with capacities, including the killing endpoints
/// `p_0 = 0` and `p_n = 1`. Positions strictly increase with `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakpointTable {
    entries: Vec<Breakpoint>,
}

impl BreakpointTable {
    pub fn entries(&self) -> &[Breakpoint] {
        &self.entries
    }

    pub fn position(&self, t: u32) -> Option<&Rat> {
        self.entries.iter().find(|b| b.t == t).map(|b| &b.position)
    }

    /// Positions of the finite-capacity (interior) sites, ascending.
    pub fn interior_positions(&self) -> Vec<Rat> {
        self.entries
            .iter()
            .filter(|b| matches!(b.capacity, Capacity::Finite(_)))
            .map(|b| b.position.clone())
            .collect()
    }
}

/// Builds the breakpoint table: `p_t = tB / (tB + (n-t)A)` with
/// `B = C(n-1,s)`, `A = C(n-1,r-1)`, for `t` in `{0} ∪ [r,s] ∪ {n}`.
/// Capacity is `r` at `t=r`, `n-s` at `t=s`, `1` strictly between, and the
/// endpoints kill.
pub fn breakpoints(family: &FamilySpec) -> BreakpointTable {
    let (n, r, s) = (family.n, family.r, family.s);
    let b = binomial(n - 1, s);
    let a = binomial(n - 1, r - 1);
    let position = |t: u32| -> Rat {
        let num = t as u64 * b;
        let den = num + (n - t) as u64 * a;
        Rat::new(num.into(), den.into())
    };
    let mut entries = vec![Breakpoint {
        t: 0,
        position: Rat::zero(),
        capacity: Capacity::Kill,
    }];
    for t in r..=s {
        let capacity = if t == r {
            Capacity::Finite(r)
        } else if t == s {
            Capacity::Finite(n - s)
        } else {
            Capacity::Finite(1)
        };
        entries.push(Breakpoint {
            t,
            position: position(t),
            capacity,
        });
    }
    entries.push(Breakpoint {
        t: n,
        position: Rat::one(),
        capacity: Capacity::Kill,
    });
    BreakpointTable { entries }
}

/// The multiset of breakpoint positions at which a successful walk must end:
/// `p_r` with multiplicity `r`, each interior `p_t` once, `p_s` with
/// multiplicity `n-s`. Sorted ascending; has exactly `m` entries.
pub fn target_multiset(family: &FamilySpec) -> Vec<Rat> {
    let table = breakpoints(family);
    let mut out = Vec::with_capacity(family.m());
    for bp in table.entries() {
        if let Capacity::Finite(c) = bp.capacity {
            for _ in 0..c {
                out.push(bp.position.clone());
            }
        }
    }
    out
}

/// A point of `[0,1]^m` of walk parameters, canonically sorted ascending
/// (the mixed volume is symmetric in its arguments).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    entries: Vec<Rat>,
}

impl Configuration {
    pub fn new(family: &FamilySpec, mut entries: Vec<Rat>) -> Result<Self, Error> {
        if entries.len() != family.m() {
            return Err(Error::ConfigLength {
                expected: family.m(),
                got: entries.len(),
            });
        }
        for u in &entries {
            if !in_unit_interval(u) {
                return Err(Error::OutOfRange(format!(
                    "configuration entry {u} outside [0,1]"
                )));
            }
        }
        entries.sort();
        Ok(Configuration { entries })
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }
}

/// Exact nonnegative offsets `y_T`, one per facet index `T in H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetVector {
    offsets: BTreeMap<Subset, Rat>,
}

impl OffsetVector {
    pub fn get(&self, t: &Subset) -> Option<&Rat> {
        self.offsets.get(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Subset, &Rat)> {
        self.offsets.iter()
    }
}

/// The linear homeomorphism `j : [0,1] -> Y` sending a walk parameter to an
/// offset vector, with `j(0)` at the `delta_r` endpoint of the index simplex:
/// `y_T = (1-u)|H|/C(n,r)` for `|T| = r` and `y_T = u|H|/C(n,s)` for
/// `|T| = s`.
pub fn embed_config(family: &FamilySpec, u: &Rat) -> Result<OffsetVector, Error> {
    if !in_unit_interval(u) {
        return Err(Error::OutOfRange(format!("walk parameter {u} outside [0,1]")));
    }
    let h = Rat::from_integer(family.h_size().into());
    let r_scale = (Rat::one() - u) * &h / Rat::from_integer(binomial(family.n, family.r).into());
    let s_scale = u * &h / Rat::from_integer(binomial(family.n, family.s).into());
    let mut offsets = BTreeMap::new();
    for t in family.facet_subsets() {
        let y = if t.size() == family.r {
            r_scale.clone()
        } else {
            s_scale.clone()
        };
        offsets.insert(t, y);
    }
    Ok(OffsetVector { offsets })
}

/// A product of `m` parameter intervals with endpoints in `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZoneSpec {
    intervals: Vec<(Rat, Rat)>,
}

impl ZoneSpec {
    pub fn new(intervals: Vec<(Rat, Rat)>) -> Result<Self, Error> {
        for (lo, hi) in &intervals {
            if !in_unit_interval(lo) || !in_unit_interval(hi) {
                return Err(Error::InvalidZone(format!(
                    "interval [{lo},{hi}] not inside [0,1]"
                )));
            }
            if lo > hi {
                return Err(Error::InvalidZone(format!("interval [{lo},{hi}] has lo > hi")));
            }
        }
        Ok(ZoneSpec { intervals })
    }

    pub fn intervals(&self) -> &[(Rat, Rat)] {
        &self.intervals
    }
}

/// The zone predicate: a product of intervals is a zone iff
/// 1. every endpoint is a breakpoint position,
/// 2. an interval strictly containing an interior `p_t` requires some
///    interval pinned at `p_t`,
/// 3. strictly containing `p_r` requires at least `r` pinned at `p_r`,
/// 4. strictly containing `p_s` requires at least `n-s` pinned at `p_s`.
pub fn is_zone(family: &FamilySpec, zone: &ZoneSpec) -> bool {
    if zone.intervals.len() != family.m() {
        return false;
    }
    let table = breakpoints(family);
    let positions: Vec<&Rat> = table.entries().iter().map(|b| &b.position).collect();
    for (lo, hi) in &zone.intervals {
        if !positions.contains(&lo) || !positions.contains(&hi) {
            return false;
        }
    }
    let pinned_at = |p: &Rat| -> usize {
        zone.intervals
            .iter()
            .filter(|(lo, hi)| lo == p && hi == p)
            .count()
    };
    for bp in table.entries() {
        let required = match bp.capacity {
            Capacity::Kill => continue,
            Capacity::Finite(c) => c as usize,
        };
        let strictly_contained = zone
            .intervals
            .iter()
            .any(|(lo, hi)| *lo < bp.position && bp.position < *hi);
        if strictly_contained && pinned_at(&bp.position) < required {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use proptest::prelude::*;

    fn fam(n: u32, r: u32, s: u32) -> FamilySpec {
        FamilySpec::new(n, r, s).unwrap()
    }

    #[test]
    fn family_validation() {
        assert!(FamilySpec::new(2, 1, 1).is_err());
        assert!(FamilySpec::new(4, 1, 4).is_err());
        assert!(FamilySpec::new(4, 2, 2).is_err());
        assert!(FamilySpec::new(4, 0, 2).is_err());
        assert!(FamilySpec::new(4, 1, 3).is_ok());
    }

    #[test]
    fn family_serde_shape() {
        let f = fam(4, 1, 3);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"n":4,"r":1,"s":3}"#);
        let back: FamilySpec = serde_json::from_str(r#"{"n":4,"r":1,"s":3}"#).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FamilySpec>(r#"{"n":4,"r":3,"s":1}"#).is_err());
    }

    #[test]
    fn facet_system_size() {
        let f = fam(4, 1, 3);
        assert_eq!(f.h_size(), 8);
        assert_eq!(f.facet_subsets().len(), 8);
        assert_eq!(fam(4, 1, 2).h_size(), 10);
    }

    #[test]
    fn breakpoints_hypersimplex_n4() {
        let table = breakpoints(&fam(4, 1, 3));
        let got: Vec<_> = table.entries().iter().map(|b| b.position.clone()).collect();
        assert_eq!(got, vec![rat(0, 1), rat(1, 4), rat(2, 4), rat(3, 4), rat(1, 1)]);
        let caps: Vec<_> = table.entries().iter().map(|b| b.capacity).collect();
        assert_eq!(
            caps,
            vec![
                Capacity::Kill,
                Capacity::Finite(1),
                Capacity::Finite(1),
                Capacity::Finite(1),
                Capacity::Kill
            ]
        );
    }

    #[test]
    fn breakpoints_example2_family() {
        let table = breakpoints(&fam(4, 1, 2));
        assert_eq!(table.position(1), Some(&rat(1, 2)));
        assert_eq!(table.position(2), Some(&rat(3, 4)));
        let caps: Vec<_> = table.entries().iter().map(|b| b.capacity).collect();
        assert_eq!(
            caps,
            vec![Capacity::Kill, Capacity::Finite(1), Capacity::Finite(2), Capacity::Kill]
        );
    }

    #[test]
    fn breakpoints_n3() {
        let table = breakpoints(&fam(3, 1, 2));
        let got: Vec<_> = table.entries().iter().map(|b| b.position.clone()).collect();
        assert_eq!(got, vec![rat(0, 1), rat(1, 3), rat(2, 3), rat(1, 1)]);
    }

    #[test]
    fn breakpoints_evenly_spaced_for_hypersimplices() {
        for n in 3..=8u32 {
            let table = breakpoints(&fam(n, 1, n - 1));
            for bp in table.entries() {
                assert_eq!(bp.position, rat(bp.t as i64, n as i64));
            }
        }
    }

    #[test]
    fn capacity_sum_is_m_for_all_families() {
        for n in 3..=8u32 {
            for r in 1..n - 1 {
                for s in r + 1..=n - 1 {
                    let f = fam(n, r, s);
                    let total: u32 = breakpoints(&f)
                        .entries()
                        .iter()
                        .filter_map(|b| match b.capacity {
                            Capacity::Finite(c) => Some(c),
                            Capacity::Kill => None,
                        })
                        .sum();
                    assert_eq!(total as usize, f.m(), "family {f}");
                }
            }
        }
    }

    #[test]
    fn positions_strictly_increase() {
        for n in 3..=8u32 {
            for r in 1..n - 1 {
                for s in r + 1..=n - 1 {
                    let table = breakpoints(&fam(n, r, s));
                    for w in table.entries().windows(2) {
                        assert!(w[0].position < w[1].position);
                    }
                }
            }
        }
    }

    #[test]
    fn target_multiset_examples() {
        assert_eq!(
            target_multiset(&fam(4, 1, 3)),
            vec![rat(1, 4), rat(2, 4), rat(3, 4)]
        );
        assert_eq!(
            target_multiset(&fam(4, 1, 2)),
            vec![rat(1, 2), rat(3, 4), rat(3, 4)]
        );
        assert_eq!(target_multiset(&fam(3, 1, 2)), vec![rat(1, 3), rat(2, 3)]);
    }

    #[test]
    fn embed_midpoint_is_all_ones() {
        let y = embed_config(&fam(4, 1, 3), &rat(1, 2)).unwrap();
        for (_, v) in y.iter() {
            assert_eq!(*v, rat(1, 1));
        }
    }

    #[test]
    fn embed_endpoints() {
        // j(0) is the delta_r endpoint: full offsets on the r-class.
        let f = fam(4, 1, 3);
        let y0 = embed_config(&f, &rat(0, 1)).unwrap();
        for (t, v) in y0.iter() {
            if t.size() == 1 {
                assert_eq!(*v, rat(2, 1));
            } else {
                assert_eq!(*v, rat(0, 1));
            }
        }
        let f = fam(4, 1, 2);
        let y1 = embed_config(&f, &rat(1, 1)).unwrap();
        for (t, v) in y1.iter() {
            if t.size() == 1 {
                assert_eq!(*v, rat(0, 1));
            } else {
                assert_eq!(*v, rat(10, 6));
            }
        }
    }

    #[test]
    fn embed_rejects_out_of_range() {
        assert!(embed_config(&fam(4, 1, 3), &rat(3, 2)).is_err());
        assert!(embed_config(&fam(4, 1, 3), &rat(-1, 4)).is_err());
    }

    #[test]
    fn configuration_sorts_and_validates() {
        let f = fam(4, 1, 3);
        let c = Configuration::new(&f, vec![rat(3, 4), rat(1, 4), rat(1, 2)]).unwrap();
        assert_eq!(c.entries(), &[rat(1, 4), rat(1, 2), rat(3, 4)]);
        assert!(Configuration::new(&f, vec![rat(1, 4), rat(1, 2)]).is_err());
        assert!(Configuration::new(&f, vec![rat(1, 4), rat(1, 2), rat(5, 4)]).is_err());
    }

    #[test]
    fn zone_fixtures() {
        let f = fam(4, 1, 3);
        let zone = |iv: Vec<(Rat, Rat)>| ZoneSpec::new(iv).unwrap();
        // no interval strictly contains any breakpoint
        assert!(is_zone(
            &f,
            &zone(vec![
                (rat(0, 1), rat(1, 4)),
                (rat(1, 4), rat(2, 4)),
                (rat(2, 4), rat(3, 4))
            ])
        ));
        // condition 2 satisfied by the pinned second interval
        assert!(is_zone(
            &f,
            &zone(vec![
                (rat(1, 4), rat(3, 4)),
                (rat(2, 4), rat(2, 4)),
                (rat(2, 4), rat(3, 4))
            ])
        ));
        // first interval strictly contains 2/4 with nobody pinned there
        assert!(!is_zone(
            &f,
            &zone(vec![
                (rat(1, 4), rat(3, 4)),
                (rat(1, 4), rat(2, 4)),
                (rat(2, 4), rat(3, 4))
            ])
        ));
        // non-breakpoint endpoint
        assert!(!is_zone(
            &f,
            &zone(vec![
                (rat(0, 1), rat(1, 3)),
                (rat(1, 4), rat(2, 4)),
                (rat(2, 4), rat(3, 4))
            ])
        ));
        // wrong arity
        assert!(!is_zone(&f, &zone(vec![(rat(0, 1), rat(1, 4))])));
    }

    #[test]
    fn zone_capacity_conditions_example2_family() {
        let f = fam(4, 1, 2);
        // p_2 = 3/4 needs two pinned intervals when strictly contained
        let z = ZoneSpec::new(vec![
            (rat(1, 2), rat(1, 1)),
            (rat(3, 4), rat(3, 4)),
            (rat(3, 4), rat(3, 4)),
        ])
        .unwrap();
        assert!(is_zone(&f, &z));
        let z = ZoneSpec::new(vec![
            (rat(1, 2), rat(1, 1)),
            (rat(3, 4), rat(3, 4)),
            (rat(1, 2), rat(3, 4)),
        ])
        .unwrap();
        assert!(!is_zone(&f, &z));
    }

    proptest! {
        // embed_config is affine in u (exact, coordinatewise)
        #[test]
        fn embed_is_affine(un in 0i64..=8, vn in 0i64..=8, an in 0i64..=6) {
            let f = fam(4, 1, 2);
            let u = rat(un, 8);
            let v = rat(vn, 8);
            let alpha = rat(an, 6);
            let mixp = &alpha * &u + (rat(1,1) - &alpha) * &v;
            let ym = embed_config(&f, &mixp).unwrap();
            let yu = embed_config(&f, &u).unwrap();
            let yv = embed_config(&f, &v).unwrap();
            for (t, val) in ym.iter() {
                let lhs = &alpha * yu.get(t).unwrap() + (rat(1,1) - &alpha) * yv.get(t).unwrap();
                prop_assert_eq!(&lhs, val);
            }
        }

        // shrinking any non-pinned interval of a zone preserves zonehood
        #[test]
        fn zone_shrink_monotone(which in 0usize..3, side in 0usize..2) {
            let f = fam(4, 1, 3);
            let table = breakpoints(&f);
            let pos: Vec<Rat> = table.entries().iter().map(|b| b.position.clone()).collect();
            let base = vec![
                (pos[1].clone(), pos[3].clone()),
                (pos[2].clone(), pos[2].clone()),
                (pos[2].clone(), pos[3].clone()),
            ];
            let z = ZoneSpec::new(base.clone()).unwrap();
            prop_assume!(is_zone(&f, &z));
            let mut shrunk = base;
            let (lo, hi) = shrunk[which].clone();
            if lo == hi {
                return Ok(()); // pinned intervals stay pinned
            }
            // move one endpoint inward to the adjacent breakpoint
            let idx_lo = pos.iter().position(|p| *p == lo).unwrap();
            let idx_hi = pos.iter().position(|p| *p == hi).unwrap();
            shrunk[which] = if side == 0 && idx_lo + 1 <= idx_hi {
                (pos[idx_lo + 1].clone(), hi)
            } else if idx_hi >= 1 && idx_hi - 1 >= idx_lo {
                (lo, pos[idx_hi - 1].clone())
            } else {
                return Ok(());
            };
            let z2 = ZoneSpec::new(shrunk).unwrap();
            prop_assert!(is_zone(&f, &z2));
        }
    }
}
