//! The brute-force mixed-volume oracle: inclusion–exclusion over Minkowski
//! sums of exactly constructed family polytopes, the per-family normalizer,
//! and the superaffinity containment check.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num::{One, Zero};
use rayon::prelude::*;

use crate::error::Error;
use crate::family::{embed_config, target_multiset, Configuration, FamilySpec};
use crate::geometry::{build_hrep, enumerate_vertices, minkowski_sum, volume, VPolytope};
use crate::rat::{in_unit_interval, Rat};

/// An oracle (or walk) evaluation: the coordinate-convention mixed volume,
/// the family normalizer `V0 = mixed_volume(target_multiset)`, and their
/// ratio (the quantity the walk computes directly).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedVolumeResult {
    pub value: Rat,
    pub normalizer: Rat,
    pub ratio: Rat,
}

fn factorial(m: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 2..=m {
        acc *= Rat::from_integer(i.into());
    }
    acc
}

fn family_vertices(family: &FamilySpec, u: &Rat) -> VPolytope {
    let y = embed_config(family, u).expect("parameter in [0,1]");
    enumerate_vertices(&build_hrep(family, &y)).expect("family polytopes are bounded")
}

/// The fully mixed coefficient of `Vol(Σ λ_i F(j(u_i)))` divided by `m!`,
/// extracted by inclusion–exclusion over the nonempty subsets of summands.
pub(crate) fn mixed_value(family: &FamilySpec, entries: &[Rat]) -> Rat {
    let m = entries.len();
    debug_assert_eq!(m, family.m());
    let mut cache: HashMap<Rat, VPolytope> = HashMap::new();
    for u in entries {
        cache
            .entry(u.clone())
            .or_insert_with(|| family_vertices(family, u));
    }
    let polytopes: Vec<&VPolytope> = entries.iter().map(|u| &cache[u]).collect();
    let total: Rat = (1u32..(1 << m))
        .into_par_iter()
        .map(|mask| {
            let chosen: Vec<VPolytope> = (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| polytopes[i].clone())
                .collect();
            let sum = minkowski_sum(&chosen).expect("nonempty summands");
            let vol = volume(&sum).expect("bounded sum");
            if (m - mask.count_ones() as usize) % 2 == 0 {
                vol
            } else {
                -vol
            }
        })
        .reduce(Rat::zero, |a, b| a + b);
    total / factorial(m)
}

/// The normalizer `V0`: the mixed volume at the target multiset (the unique
/// configuration of full walk success). Cached per family.
pub fn normalizer_v(family: &FamilySpec) -> Rat {
    static CACHE: OnceLock<RwLock<HashMap<(u32, u32, u32), Rat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = (family.n(), family.r(), family.s());
    if let Some(v) = cache.read().unwrap().get(&key) {
        return v.clone();
    }
    let v = mixed_value(family, &target_multiset(family));
    cache.write().unwrap().entry(key).or_insert(v).clone()
}

/// Oracle evaluation of `mixed_volume(F(j(u_1)), ..., F(j(u_m)))`.
pub fn mixed_volume(family: &FamilySpec, cfg: &Configuration) -> MixedVolumeResult {
    let value = mixed_value(family, cfg.entries());
    let normalizer = normalizer_v(family);
    let ratio = &value / &normalizer;
    MixedVolumeResult {
        value,
        normalizer,
        ratio,
    }
}

/// Checks superaffinity of the parametrization at a single parameter pair:
/// every vertex of `alpha F(j(u)) + (1-alpha) F(j(u'))` lies inside
/// `F(j(alpha u + (1-alpha) u'))`.
pub fn superaffine_check(
    family: &FamilySpec,
    u: &Rat,
    u_prime: &Rat,
    alpha: &Rat,
) -> Result<bool, Error> {
    for x in [u, u_prime, alpha] {
        if !in_unit_interval(x) {
            return Err(Error::OutOfRange(format!("{x} outside [0,1]")));
        }
    }
    let beta = Rat::one() - alpha;
    let combo = minkowski_sum(&[
        family_vertices(family, u).scale(alpha),
        family_vertices(family, u_prime).scale(&beta),
    ])?;
    let combo_vertices = enumerate_vertices(&combo)?;
    let mixed_param = alpha * u + &beta * u_prime;
    let target = build_hrep(family, &embed_config(family, &mixed_param)?);
    Ok(combo_vertices.vertices().iter().all(|v| target.contains(v)))
}

/// Gram determinant of the coordinate basis under the embedding of the
/// ambient hyperplane into `R^H` (one coordinate `Σ_{i∈T} v_i` per facet
/// index `T`). The volume scale factor between the coordinate convention
/// and the `R^H`-induced metric is its square root.
pub fn embedding_gram_det(family: &FamilySpec) -> Rat {
    let n = family.n();
    let m = family.m();
    let rows: Vec<Vec<Rat>> = family
        .facet_subsets()
        .iter()
        .map(|t| {
            (1..n)
                .map(|i| {
                    let c = (t.contains(i) as i64) - (t.contains(n) as i64);
                    Rat::from_integer(c.into())
                })
                .collect()
        })
        .collect();
    let gram: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| rows.iter().map(|row| &row[i] * &row[j]).sum())
                .collect()
        })
        .collect();
    crate::linalg::determinant(&gram)
}
