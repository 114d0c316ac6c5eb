//! Exact polytope machinery for the brute-force oracle: H-representations,
//! vertex enumeration, Minkowski sums via support values, and two
//! independent exact volume routes.

use std::collections::{BTreeSet, HashMap};

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::error::Error;
use crate::family::{FamilySpec, OffsetVector};
use crate::linalg::{abs, dot, is_zero_vec, nullspace_vector, rank, solve_square};
use crate::rat::Rat;

/// One half-space `normal . v >= offset` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

/// An exact H-representation in coordinate space (dimension `n-1` for the
/// family polytopes). Constraints are canonically scaled and deduplicated;
/// redundant half-spaces are permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    constraints: Vec<Constraint>,
    trivially_empty: bool,
}

/// Scales `(normal, offset)` so the normal is a primitive integer vector.
/// Returns `None` for a zero normal (the caller decides what `0 >= offset`
/// means).
fn canonical_scale(normal: &[Rat], offset: &Rat) -> Option<(Vec<BigInt>, Rat)> {
    let mut lcm = BigInt::one();
    for x in normal {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = normal.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return None;
    }
    let ints: Vec<BigInt> = ints.iter().map(|x| x / &gcd).collect();
    let scale = Rat::new(lcm, gcd);
    Some((ints, offset * scale))
}

impl HPolytope {
    /// Canonicalizes and deduplicates raw `normal . v >= offset` constraints,
    /// keeping the tightest (largest) offset per normal.
    pub fn new(dim: usize, raw: Vec<(Vec<Rat>, Rat)>) -> HPolytope {
        let mut best: HashMap<Vec<BigInt>, Rat> = HashMap::new();
        let mut trivially_empty = false;
        for (normal, offset) in raw {
            debug_assert_eq!(normal.len(), dim);
            match canonical_scale(&normal, &offset) {
                None => {
                    if offset.is_positive() {
                        trivially_empty = true;
                    }
                }
                Some((key, off)) => {
                    best.entry(key)
                        .and_modify(|cur| {
                            if off > *cur {
                                *cur = off.clone();
                            }
                        })
                        .or_insert(off);
                }
            }
        }
        let mut constraints: Vec<(Vec<BigInt>, Rat)> = best.into_iter().collect();
        constraints.sort();
        let constraints = constraints
            .into_iter()
            .map(|(ints, offset)| Constraint {
                normal: ints.into_iter().map(Rat::from_integer).collect(),
                offset,
            })
            .collect();
        HPolytope {
            dim,
            constraints,
            trivially_empty,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        !self.trivially_empty
            && self
                .constraints
                .iter()
                .all(|c| dot(&c.normal, point) >= c.offset)
    }
}

/// An exact vertex representation; vertices are deduplicated and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<Rat>>) -> VPolytope {
        let set: BTreeSet<Vec<Rat>> = vertices.into_iter().collect();
        VPolytope {
            dim,
            vertices: set.into_iter().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The dilate `factor * P` (nonnegative factor).
    pub fn scale(&self, factor: &Rat) -> VPolytope {
        VPolytope::new(
            self.dim,
            self.vertices
                .iter()
                .map(|v| v.iter().map(|x| x * factor).collect())
                .collect(),
        )
    }
}

/// Builds the H-representation of `F(y) = X ∩ (R_+^H - y)` in coordinates
/// `(v_1, ..., v_{n-1})` with `v_n = -Σ v_i` eliminated: one constraint
/// `Σ_{i∈T} v_i >= -y_T` per facet index `T`.
pub fn build_hrep(family: &FamilySpec, y: &OffsetVector) -> HPolytope {
    let n = family.n();
    let dim = family.m();
    let raw = y
        .iter()
        .map(|(t, y_t)| {
            let normal: Vec<Rat> = (1..n)
                .map(|i| {
                    let c = (t.contains(i) as i64) - (t.contains(n) as i64);
                    Rat::from_integer(c.into())
                })
                .collect();
            (normal, -y_t.clone())
        })
        .collect();
    HPolytope::new(dim, raw)
}

/// Exact vertex enumeration by exhaustive `dim`-subset solving: every
/// nonsingular square subsystem whose solution satisfies all constraints is
/// a vertex. Distinguishes the empty polytope from an unbounded one when no
/// vertex is found.
pub fn enumerate_vertices(p: &HPolytope) -> Result<VPolytope, Error> {
    if p.trivially_empty {
        return Ok(VPolytope::new(p.dim, Vec::new()));
    }
    let verts = candidate_vertices(p.dim, &p.constraints);
    if verts.is_empty() {
        // a nonempty polyhedron without vertices contains a line; clip with a
        // generous box to decide emptiness
        let bound: Rat = p
            .constraints
            .iter()
            .map(|c| abs(&c.offset))
            .sum::<Rat>()
            + Rat::one();
        let mut boxed = p.constraints.clone();
        for i in 0..p.dim {
            for sign in [1i64, -1] {
                let mut normal = vec![Rat::zero(); p.dim];
                normal[i] = Rat::from_integer(sign.into());
                boxed.push(Constraint {
                    normal,
                    offset: -bound.clone(),
                });
            }
        }
        if candidate_vertices(p.dim, &boxed).is_empty() {
            return Ok(VPolytope::new(p.dim, Vec::new()));
        }
        return Err(Error::Unbounded);
    }
    Ok(VPolytope::new(p.dim, verts))
}

fn candidate_vertices(dim: usize, constraints: &[Constraint]) -> Vec<Vec<Rat>> {
    let mut found: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let k = constraints.len();
    if k < dim {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..dim).collect();
    loop {
        let rows: Vec<Vec<Rat>> = idx.iter().map(|&i| constraints[i].normal.clone()).collect();
        let rhs: Vec<Rat> = idx.iter().map(|&i| constraints[i].offset.clone()).collect();
        if let Some(v) = solve_square(&rows, &rhs) {
            if constraints.iter().all(|c| dot(&c.normal, &v) >= c.offset) {
                found.insert(v);
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                return found.into_iter().collect();
            }
            i -= 1;
            if idx[i] != i + k - dim {
                idx[i] += 1;
                for j in i + 1..dim {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All braid-ray directions for ambient `[n]` (`n = dim + 1`): the indicator
/// of each proper nonempty subset, written in coordinates with `v_n`
/// eliminated. Facet normals of Minkowski sums of the family polytopes all
/// lie here (the summands' normal fans coarsen the braid fan).
fn braid_directions(dim: usize) -> Vec<Vec<Rat>> {
    let n = dim + 1;
    let full: u32 = (1 << n) - 1;
    (1..full)
        .map(|mask| {
            (1..=dim)
                .map(|i| {
                    let in_t = mask & (1 << (i - 1)) != 0;
                    let n_in_t = mask & (1 << (n - 1)) != 0;
                    Rat::from_integer(((in_t as i64) - (n_in_t as i64)).into())
                })
                .collect()
        })
        .collect()
}

/// Minkowski sum as an H-representation: one constraint per braid direction,
/// with offset the sum of the summands' support values in that direction.
/// Redundant constraints are permitted; vertex enumeration dedupes.
pub fn minkowski_sum(summands: &[VPolytope]) -> Result<HPolytope, Error> {
    let Some(first) = summands.first() else {
        return Err(Error::EmptyPolytope("minkowski_sum of no summands".into()));
    };
    let dim = first.dim;
    for p in summands {
        if p.dim != dim {
            return Err(Error::DimensionMismatch(format!(
                "summand dims {} vs {}",
                p.dim, dim
            )));
        }
        if p.is_empty() {
            return Err(Error::EmptyPolytope("minkowski_sum with empty summand".into()));
        }
    }
    let raw = braid_directions(dim)
        .into_iter()
        .map(|normal| {
            let offset: Rat = summands
                .iter()
                .map(|p| {
                    p.vertices
                        .iter()
                        .map(|v| dot(&normal, v))
                        .min()
                        .expect("nonempty summand")
                })
                .sum();
            (normal, offset)
        })
        .collect();
    Ok(HPolytope::new(dim, raw))
}

/// Lebesgue volume in coordinate space by recursive boundary decomposition:
/// `d * Vol = Σ_facets (signed offset / |pivot coefficient|) * Vol_{d-1}` of
/// the facet projected along the pivot coordinate, down to intervals.
/// Lower-dimensional and empty inputs give 0.
pub fn volume(p: &HPolytope) -> Result<Rat, Error> {
    if p.trivially_empty {
        return Ok(Rat::zero());
    }
    // <= form: a . x <= b
    let cons: Vec<(Vec<Rat>, Rat)> = p
        .constraints
        .iter()
        .map(|c| {
            (
                c.normal.iter().map(|x| -x.clone()).collect(),
                -c.offset.clone(),
            )
        })
        .collect();
    boundary_volume(cons, p.dim)
}

/// Deduplicates `a . x <= b` constraints to primitive normals with the
/// tightest bound. `None` means trivially infeasible.
fn canon_le(cons: Vec<(Vec<Rat>, Rat)>) -> Option<Vec<(Vec<Rat>, Rat)>> {
    let mut best: HashMap<Vec<BigInt>, Rat> = HashMap::new();
    for (a, b) in cons {
        match canonical_scale(&a, &b) {
            None => {
                if b.is_negative() {
                    return None;
                }
            }
            Some((key, bound)) => {
                best.entry(key)
                    .and_modify(|cur| {
                        if bound < *cur {
                            *cur = bound.clone();
                        }
                    })
                    .or_insert(bound);
            }
        }
    }
    let mut out: Vec<(Vec<Rat>, Rat)> = best
        .into_iter()
        .map(|(k, b)| (k.into_iter().map(Rat::from_integer).collect(), b))
        .collect();
    out.sort();
    Some(out)
}

fn boundary_volume(cons: Vec<(Vec<Rat>, Rat)>, dim: usize) -> Result<Rat, Error> {
    let Some(cons) = canon_le(cons) else {
        return Ok(Rat::zero());
    };
    if dim == 1 {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (a, b) in &cons {
            let v = b / &a[0];
            if a[0].is_positive() {
                hi = Some(match hi {
                    Some(h) if h < v => h,
                    _ => v,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l > v => l,
                    _ => v,
                });
            }
        }
        return match (lo, hi) {
            (Some(lo), Some(hi)) => Ok((hi - lo).max(Rat::zero())),
            _ => Err(Error::Unbounded),
        };
    }
    let mut total = Rat::zero();
    for (i, (a, b)) in cons.iter().enumerate() {
        let k = a.iter().position(|x| !x.is_zero()).expect("canonical normal");
        let mut sub = Vec::with_capacity(cons.len() - 1);
        for (j, (a2, b2)) in cons.iter().enumerate() {
            if j == i {
                continue;
            }
            let coef = &a2[k] / &a[k];
            let na: Vec<Rat> = (0..dim)
                .filter(|&c| c != k)
                .map(|c| &a2[c] - &coef * &a[c])
                .collect();
            let nb = b2 - &coef * b;
            sub.push((na, nb));
        }
        let facet = boundary_volume(sub, dim - 1)?;
        if !facet.is_zero() {
            total += b / abs(&a[k]) * facet;
        }
    }
    Ok(total / Rat::from_integer(dim.into()))
}

/// Independent volume route from the vertex set alone: supporting facet
/// hyperplanes are recovered from `dim`-subsets of vertices, and the
/// polytope is decomposed into cones from a base vertex over its facets.
pub fn vrep_volume(p: &VPolytope) -> Rat {
    vrep_volume_rec(&p.vertices, p.dim)
}

fn vrep_volume_rec(points: &[Vec<Rat>], dim: usize) -> Rat {
    if points.len() <= dim {
        return Rat::zero();
    }
    if dim == 1 {
        let lo = points.iter().map(|p| &p[0]).min().unwrap();
        let hi = points.iter().map(|p| &p[0]).max().unwrap();
        return hi - lo;
    }
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    if rank(&diffs) < dim {
        return Rat::zero();
    }
    // supporting hyperplanes through dim affinely independent vertices
    let mut facets: HashMap<Vec<BigInt>, Rat> = HashMap::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    let k = points.len();
    loop {
        let base = &points[idx[0]];
        let rows: Vec<Vec<Rat>> = idx[1..]
            .iter()
            .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        if let Some(normal) = nullspace_vector(&rows, dim) {
            if !is_zero_vec(&normal) {
                let offset = dot(&normal, base);
                let mut above = false;
                let mut below = false;
                for pt in points {
                    let v = dot(&normal, pt);
                    if v > offset {
                        above = true;
                    } else if v < offset {
                        below = true;
                    }
                    if above && below {
                        break;
                    }
                }
                // supporting: all points on one side; orient as a.x <= b
                if !(above && below) {
                    let (normal, offset) = if above {
                        (normal.iter().map(|x| -x.clone()).collect(), -offset)
                    } else {
                        (normal, offset)
                    };
                    if let Some((key, b)) = canonical_scale(&normal, &offset) {
                        facets.entry(key).or_insert(b);
                    }
                }
            }
        }
        let mut i = dim;
        loop {
            if i == 0 {
                // cone decomposition from the first vertex
                let v0 = &points[0];
                let mut total = Rat::zero();
                for (key, b) in &facets {
                    let a: Vec<Rat> = key.iter().cloned().map(Rat::from_integer).collect();
                    let height = b - dot(&a, v0);
                    if height.is_zero() {
                        continue;
                    }
                    let piv = a.iter().position(|x| !x.is_zero()).expect("primitive");
                    let incident: Vec<Vec<Rat>> = points
                        .iter()
                        .filter(|pt| dot(&a, pt) == *b)
                        .map(|pt| {
                            pt.iter()
                                .enumerate()
                                .filter(|(c, _)| *c != piv)
                                .map(|(_, x)| x.clone())
                                .collect()
                        })
                        .collect();
                    total += height / abs(&a[piv]) * vrep_volume_rec(&incident, dim - 1);
                }
                return total / Rat::from_integer(dim.into());
            }
            i -= 1;
            if idx[i] != i + k - dim {
                idx[i] += 1;
                for j in i + 1..dim {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{embed_config, FamilySpec};
    use crate::rat::rat;
    use proptest::prelude::*;

    fn fam(n: u32, r: u32, s: u32) -> FamilySpec {
        FamilySpec::new(n, r, s).unwrap()
    }

    fn family_polytope(f: &FamilySpec, u: Rat) -> HPolytope {
        build_hrep(f, &embed_config(f, &u).unwrap())
    }

    fn verts(f: &FamilySpec, u: Rat) -> VPolytope {
        enumerate_vertices(&family_polytope(f, u)).unwrap()
    }

    fn unit_box(dim: usize) -> HPolytope {
        let mut raw = Vec::new();
        for i in 0..dim {
            let mut e = vec![rat(0, 1); dim];
            e[i] = rat(1, 1);
            raw.push((e.clone(), rat(0, 1))); // v_i >= 0
            let mut ne = vec![rat(0, 1); dim];
            ne[i] = rat(-1, 1);
            raw.push((ne, rat(-1, 1))); // v_i <= 1
        }
        HPolytope::new(dim, raw)
    }

    #[test]
    fn hrep_simplex_inequalities() {
        // u = 3/4 for the hypersimplex family gives the tetrahedron
        // -1/2 <= v_i, v_i <= 3/2 (with the sum constraints)
        let p = family_polytope(&fam(4, 1, 3), rat(3, 4));
        let mut e1 = vec![rat(0, 1); 3];
        e1[0] = rat(1, 1);
        assert!(p
            .constraints()
            .iter()
            .any(|c| c.normal == e1 && c.offset == rat(-1, 2)));
        let v = verts(&fam(4, 1, 3), rat(3, 4));
        assert_eq!(v.vertices().len(), 4);
        assert!(v.vertices().contains(&vec![rat(3, 2), rat(-1, 2), rat(-1, 2)]));
        assert!(v.vertices().contains(&vec![rat(-1, 2), rat(-1, 2), rat(-1, 2)]));
    }

    #[test]
    fn endpoint_polytopes_are_points() {
        for (n, r, s) in [(4u32, 1u32, 3u32), (4, 1, 2), (3, 1, 2)] {
            let f = fam(n, r, s);
            for u in [rat(0, 1), rat(1, 1)] {
                let v = verts(&f, u);
                assert_eq!(v.vertices().len(), 1, "family {f}");
                assert_eq!(volume(&family_polytope(&f, rat(0, 1))).unwrap(), rat(0, 1));
            }
        }
    }

    #[test]
    fn octahedron_at_midpoint() {
        let f = fam(4, 1, 3);
        let v = verts(&f, rat(2, 4));
        assert_eq!(v.vertices().len(), 6);
        let p = family_polytope(&f, rat(2, 4));
        assert_eq!(volume(&p).unwrap(), rat(16, 3));
        assert_eq!(vrep_volume(&v), rat(16, 3));
    }

    #[test]
    fn example2_breakpoint_polytopes() {
        // with j(0) at the delta_r endpoint, F(j(p_1)) is the combinatorial
        // cube and F(j(p_2)) the simplex
        let f = fam(4, 1, 2);
        assert_eq!(verts(&f, rat(1, 2)).vertices().len(), 8);
        assert_eq!(verts(&f, rat(3, 4)).vertices().len(), 4);
    }

    #[test]
    fn tetra_volume() {
        let p = family_polytope(&fam(4, 1, 3), rat(1, 4));
        assert_eq!(volume(&p).unwrap(), rat(4, 3));
    }

    #[test]
    fn unit_box_volume_is_one() {
        for dim in 1..=4 {
            let b = unit_box(dim);
            assert_eq!(volume(&b).unwrap(), rat(1, 1));
            let v = enumerate_vertices(&b).unwrap();
            assert_eq!(v.vertices().len(), 1 << dim);
            assert_eq!(vrep_volume(&v), rat(1, 1));
        }
    }

    #[test]
    fn empty_polytope_volume_zero() {
        // v_1 >= 1 and v_1 <= 0
        let p = HPolytope::new(
            2,
            vec![
                (vec![rat(1, 1), rat(0, 1)], rat(1, 1)),
                (vec![rat(-1, 1), rat(0, 1)], rat(0, 1)),
                (vec![rat(0, 1), rat(1, 1)], rat(0, 1)),
                (vec![rat(0, 1), rat(-1, 1)], rat(-1, 1)),
            ],
        );
        assert_eq!(volume(&p).unwrap(), rat(0, 1));
        assert!(enumerate_vertices(&p).unwrap().is_empty());
    }

    #[test]
    fn unbounded_slab_detected() {
        // 0 <= v_1 <= 1 in the plane: no vertex, nonempty
        let p = HPolytope::new(
            2,
            vec![
                (vec![rat(1, 1), rat(0, 1)], rat(0, 1)),
                (vec![rat(-1, 1), rat(0, 1)], rat(-1, 1)),
            ],
        );
        assert_eq!(enumerate_vertices(&p), Err(Error::Unbounded));
        assert_eq!(volume(&p), Err(Error::Unbounded));
    }

    #[test]
    fn minkowski_identity_and_translation() {
        let f = fam(4, 1, 3);
        let v = verts(&f, rat(1, 4));
        let sum = minkowski_sum(std::slice::from_ref(&v)).unwrap();
        assert_eq!(enumerate_vertices(&sum).unwrap().vertices(), v.vertices());

        let point = VPolytope::new(3, vec![vec![rat(1, 1), rat(2, 1), rat(-3, 1)]]);
        let translated = minkowski_sum(&[v.clone(), point]).unwrap();
        let tv = enumerate_vertices(&translated).unwrap();
        let expected: BTreeSet<Vec<Rat>> = v
            .vertices()
            .iter()
            .map(|w| {
                vec![
                    &w[0] + rat(1, 1),
                    &w[1] + rat(2, 1),
                    &w[2] + rat(-3, 1),
                ]
            })
            .collect();
        let got: BTreeSet<Vec<Rat>> = tv.vertices().iter().cloned().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn difference_body_of_tetrahedron() {
        // simplex + dual simplex: 12 vertices, volume 80/3 (Rogers-Shephard
        // equality C(6,3) * 4/3)
        let f = fam(4, 1, 3);
        let a = verts(&f, rat(1, 4));
        let b = verts(&f, rat(3, 4));
        let sum = minkowski_sum(&[a.clone(), b.clone()]).unwrap();
        let sv = enumerate_vertices(&sum).unwrap();
        assert_eq!(sv.vertices().len(), 12);
        assert_eq!(volume(&sum).unwrap(), rat(80, 3));
        assert_eq!(vrep_volume(&sv), rat(80, 3));
        // cross-check against the hull of pairwise vertex sums
        let cloud: Vec<Vec<Rat>> = a
            .vertices()
            .iter()
            .flat_map(|x| {
                b.vertices()
                    .iter()
                    .map(move |y| x.iter().zip(y).map(|(p, q)| p + q).collect())
            })
            .collect();
        assert_eq!(vrep_volume_rec(&cloud, 3), rat(80, 3));
    }

    #[test]
    fn hexagon_cross_term_family_n3() {
        let f = fam(3, 1, 2);
        let v = verts(&f, rat(1, 2));
        assert_eq!(v.vertices().len(), 6);
        let p = family_polytope(&f, rat(1, 2));
        assert_eq!(volume(&p).unwrap(), rat(3, 1));
        assert_eq!(vrep_volume(&v), rat(3, 1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        // two independent volume routes agree on every family polytope
        #[test]
        fn two_path_volume_agreement(num in 0i64..=12, fi in 0usize..3) {
            let families = [fam(4, 1, 3), fam(4, 1, 2), fam(3, 1, 2)];
            let f = &families[fi];
            let u = rat(num, 12);
            let p = family_polytope(f, u);
            let v = enumerate_vertices(&p).unwrap();
            prop_assert_eq!(volume(&p).unwrap(), vrep_volume(&v));
        }

        // and on two-summand Minkowski sums
        #[test]
        fn two_path_volume_agreement_sums(a in 1i64..=5, b in 1i64..=5) {
            let f = fam(4, 1, 3);
            let pa = verts(&f, rat(a, 6));
            let pb = verts(&f, rat(b, 6));
            let sum = minkowski_sum(&[pa, pb]).unwrap();
            let sv = enumerate_vertices(&sum).unwrap();
            prop_assert_eq!(volume(&sum).unwrap(), vrep_volume(&sv));
        }
    }
}
