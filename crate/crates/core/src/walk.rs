//! The absorbing-particle walk: particles on `[0,1]` hit capacity-limited
//! breakpoint sites under the martingale (gambler's-ruin) rule; the success
//! probability equals the mixed-volume ratio. Also the closed-form product
//! formula, the hypersimplex shift-sum identity, and the mod-`n` congruence
//! scan.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::Error;
use crate::family::{breakpoints, target_multiset, Breakpoint, Capacity, Configuration, FamilySpec};
use crate::mixed::{normalizer_v, MixedVolumeResult};
use crate::rat::Rat;

/// Result of a walk evaluation. `ratio` always equals
/// `success_probability`; `branch_count` counts evaluated states and is
/// diagnostic only (memoization shrinks it without changing the
/// probability).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkOutcome {
    pub success_probability: Rat,
    pub ratio: Rat,
    pub branch_count: u64,
}

struct Walk<'a> {
    sites: &'a [Breakpoint],
    remaining: Vec<Rat>,
    memo: Option<HashMap<(usize, Vec<u32>), Rat>>,
    branch_count: u64,
}

impl Walk<'_> {
    fn spare(&self, counts: &[u32], idx: usize) -> bool {
        match self.sites[idx].capacity {
            Capacity::Kill => false,
            Capacity::Finite(c) => counts[idx] < c,
        }
    }

    /// A site stops a passing particle if it still has spare capacity or
    /// kills; saturated sites are transparent.
    fn blocking(&self, counts: &[u32], idx: usize) -> bool {
        matches!(self.sites[idx].capacity, Capacity::Kill) || self.spare(counts, idx)
    }

    fn absorb(&mut self, i: usize, mut counts: Vec<u32>, idx: usize) -> Rat {
        if matches!(self.sites[idx].capacity, Capacity::Kill) {
            return Rat::zero();
        }
        counts[idx] += 1;
        self.go(i + 1, counts)
    }

    fn go(&mut self, i: usize, counts: Vec<u32>) -> Rat {
        if i == self.remaining.len() {
            return Rat::one();
        }
        if let Some(memo) = &self.memo {
            if let Some(p) = memo.get(&(i, counts.clone())) {
                return p.clone();
            }
        }
        self.branch_count += 1;
        let u = self.remaining[i].clone();
        let result = if u.is_zero() || u.is_one() {
            Rat::zero()
        } else if let Some(idx) = (0..self.sites.len())
            .find(|&idx| self.spare(&counts, idx) && self.sites[idx].position == u)
        {
            // sitting exactly on an unsaturated site: absorbed outright
            self.absorb(i, counts.clone(), idx)
        } else {
            let lo = (0..self.sites.len())
                .filter(|&idx| self.sites[idx].position < u && self.blocking(&counts, idx))
                .max()
                .expect("p_0 = 0 always blocks");
            let hi = (0..self.sites.len())
                .filter(|&idx| self.sites[idx].position > u && self.blocking(&counts, idx))
                .min()
                .expect("p_n = 1 always blocks");
            let lo_pos = self.sites[lo].position.clone();
            let hi_pos = self.sites[hi].position.clone();
            let p_hi = (&u - &lo_pos) / (&hi_pos - &lo_pos);
            let p_lo = Rat::one() - &p_hi;
            let mut acc = Rat::zero();
            if !p_hi.is_zero() {
                acc += p_hi * self.absorb(i, counts.clone(), hi);
            }
            if !p_lo.is_zero() {
                acc += p_lo * self.absorb(i, counts.clone(), lo);
            }
            acc
        };
        if let Some(memo) = &mut self.memo {
            memo.insert((i, counts), result.clone());
        }
        result
    }
}

fn run_walk(
    family: &FamilySpec,
    cfg: &Configuration,
    order: Option<&[usize]>,
    memoize: bool,
) -> Result<WalkOutcome, Error> {
    let m = family.m();
    let default_order: Vec<usize> = (0..m).collect();
    let order = order.unwrap_or(&default_order);
    {
        let mut seen = vec![false; m];
        if order.len() != m || order.iter().any(|&i| i >= m || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::InvalidOrder(format!(
                "expected a permutation of 0..{m}, got {order:?}"
            )));
        }
    }
    let table = breakpoints(family);
    let sites = table.entries();
    let ordered: Vec<Rat> = order.iter().map(|&i| cfg.entries()[i].clone()).collect();

    // phase A: absorb particles sitting exactly on a spare site, in
    // processing order, before anyone walks
    let mut counts = vec![0u32; sites.len()];
    let mut remaining = Vec::new();
    for u in ordered {
        let sitting = (0..sites.len()).find(|&idx| {
            matches!(sites[idx].capacity, Capacity::Finite(c) if counts[idx] < c)
                && sites[idx].position == u
        });
        match sitting {
            Some(idx) => counts[idx] += 1,
            None => remaining.push(u),
        }
    }

    let mut walk = Walk {
        sites,
        remaining,
        memo: memoize.then(HashMap::new),
        branch_count: 0,
    };
    let p = walk.go(0, counts);
    Ok(WalkOutcome {
        ratio: p.clone(),
        success_probability: p,
        branch_count: walk.branch_count,
    })
}

/// Exact success probability of the absorbing walk; equals the mixed-volume
/// ratio. `order` permutes the (sorted) configuration's processing order and
/// defaults to ascending.
pub fn walk_probability(
    family: &FamilySpec,
    cfg: &Configuration,
    order: Option<&[usize]>,
) -> Result<WalkOutcome, Error> {
    run_walk(family, cfg, order, true)
}

/// Same walk without the state memo, for cross-checking memo soundness.
pub fn walk_probability_unmemoized(
    family: &FamilySpec,
    cfg: &Configuration,
    order: Option<&[usize]>,
) -> Result<WalkOutcome, Error> {
    run_walk(family, cfg, order, false)
}

/// Walk-route mixed volume: the walk supplies the ratio, the geometric
/// normalizer converts it to the coordinate convention.
pub fn walk_mixed_volume(family: &FamilySpec, cfg: &Configuration) -> MixedVolumeResult {
    let ratio = walk_probability(family, cfg, None)
        .expect("default order is valid")
        .ratio;
    let normalizer = normalizer_v(family);
    MixedVolumeResult {
        value: &ratio * &normalizer,
        normalizer,
        ratio,
    }
}

/// Which reading of the descending-case product formula to use. The two
/// coincide for hypersimplex families; for general `{r,s}` only the
/// mirrored denominator agrees with the walk and the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    PaperLiteral,
    Mirrored,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaResult {
    Value(Rat),
    NotApplicable,
}

/// Closed-form ratio on monotone configurations, with `q` the sorted target
/// multiset: `∏ u_t / q_t` when `u <= q` pointwise; when `u >= q` pointwise,
/// `∏ (1-u_t) / q_t` (literal) or `∏ (1-u_t) / (1-q_{m+1-t})` (mirrored).
pub fn product_formula(family: &FamilySpec, cfg: &Configuration, reading: Reading) -> FormulaResult {
    let q = target_multiset(family);
    let u = cfg.entries();
    if u.iter().zip(&q).all(|(ut, qt)| ut <= qt) {
        let p = u.iter().zip(&q).map(|(ut, qt)| ut / qt).product();
        return FormulaResult::Value(p);
    }
    if u.iter().zip(&q).all(|(ut, qt)| ut >= qt) {
        let m = q.len();
        let p = u
            .iter()
            .enumerate()
            .map(|(t, ut)| {
                let denom = match reading {
                    Reading::PaperLiteral => q[t].clone(),
                    Reading::Mirrored => Rat::one() - &q[m - 1 - t],
                };
                (Rat::one() - ut) / denom
            })
            .product();
        return FormulaResult::Value(p);
    }
    FormulaResult::NotApplicable
}

/// Shift identity for hypersimplex families: the walk ratios of
/// the `n` coordinatewise mod-1 shifts of `cfg` by `k/n` sum to 1.
/// Returns the sum (so callers can assert it).
pub fn shift_sum(family: &FamilySpec, cfg: &Configuration) -> Result<Rat, Error> {
    if family.s() != family.n() - 1 {
        return Err(Error::NotHypersimplex("shift_sum"));
    }
    let n = family.n();
    let mut total = Rat::zero();
    for k in 0..n {
        let step = Rat::new(k.into(), n.into());
        let shifted: Vec<Rat> = cfg
            .entries()
            .iter()
            .map(|u| {
                let mut v = u + &step;
                if v >= Rat::one() {
                    v -= Rat::one();
                }
                v
            })
            .collect();
        let shifted = Configuration::new(family, shifted)?;
        total += walk_probability(family, &shifted, None)?.ratio;
    }
    Ok(total)
}

/// One line of the mod-`n` congruence scan. `lhs` is
/// `(n-1)! * walk_probability` when that is an integer (`None` marks a
/// non-integer, which falsifies the congruence outright); `rhs` is
/// `∏ n u_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessReport {
    pub config: Vec<Rat>,
    pub lhs: Option<BigInt>,
    pub rhs: BigInt,
    pub modulus: u32,
    pub holds: bool,
}

/// Tests the congruence `(n-1)! * ratio ≡ ± ∏ n u_i (mod n)` on an integral
/// grid configuration of a hypersimplex family.
pub fn guess_check(family: &FamilySpec, cfg: &Configuration) -> Result<GuessReport, Error> {
    if family.s() != family.n() - 1 {
        return Err(Error::NotHypersimplex("guess_check"));
    }
    let n = family.n();
    let n_big = BigInt::from(n);
    let mut rhs = BigInt::one();
    for u in cfg.entries() {
        let scaled = u * Rat::from_integer(n_big.clone());
        if !scaled.denom().is_one() {
            return Err(Error::NonIntegralGrid(format!(
                "entry {u} is not a multiple of 1/{n}"
            )));
        }
        rhs *= scaled.numer();
    }
    let prob = walk_probability(family, cfg, None)?.ratio;
    let lhs_rat = prob
        * (1..n as u64)
            .map(|i| Rat::from_integer(i.into()))
            .product::<Rat>();
    let lhs = lhs_rat.denom().is_one().then(|| lhs_rat.numer().clone());
    let holds = match &lhs {
        None => false,
        Some(l) => {
            ((l - &rhs) % &n_big).is_zero() || ((l + &rhs) % &n_big).is_zero()
        }
    };
    Ok(GuessReport {
        config: cfg.entries().to_vec(),
        lhs,
        rhs,
        modulus: n,
        holds,
    })
}
