//! Double description method.
//!
//! [`cone_h_to_v`] is the core routine: it computes the extreme rays of a
//! pointed cone `{y : a_i · y ≥ 0}` by inserting one inequality at a time
//! and combining adjacent rays across the new hyperplane. The other
//! conversions reduce to it by duality or homogenization.

use num_traits::{Signed, Zero};

use crate::error::KernelError;
use crate::linalg;
use crate::rat::{canonical_ray, dot, Rat};

/// Cone generators (rays).
pub type VRep = Vec<Vec<Rat>>;

/// Homogeneous inequalities `h · x ≥ 0`.
pub type HRep = Vec<Vec<Rat>>;

/// Affine inequality `normal · x ≥ offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) >= self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_superset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<Rat>,
    zeros: Bits,
}

/// Extreme rays of `{y : rows[i] · y ≥ 0}`. The cone must be pointed, i.e.
/// the rows must have full column rank `dim`. Rays are canonically scaled
/// and returned in a deterministic order.
pub fn cone_h_to_v(rows: &[Vec<Rat>], dim: usize) -> Result<VRep, KernelError> {
    for r in rows {
        if r.len() != dim {
            return Err(KernelError::DimensionMismatch {
                expected: dim,
                got: r.len(),
            });
        }
    }
    let init = linalg::independent_rows(rows, dim);
    if init.len() < dim {
        return Err(KernelError::NotPointed);
    }
    let m = rows.len();
    let basis: Vec<Vec<Rat>> = init.iter().map(|&i| rows[i].clone()).collect();
    let inv = linalg::inverse(&basis).expect("independent rows");
    // columns of the inverse are the rays of the initial simplicial cone
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let v: Vec<Rat> = (0..dim).map(|i| inv[i][j].clone()).collect();
            let mut zeros = Bits::new(m);
            for (k, &i) in init.iter().enumerate() {
                if k != j {
                    zeros.set(i);
                }
            }
            Ray {
                v: canonical_ray(&v),
                zeros,
            }
        })
        .collect();

    let mut processed: Vec<usize> = init.clone();
    for (idx, a) in rows.iter().enumerate().take(m) {
        if init.contains(&idx) {
            continue;
        }
        let vals: Vec<Rat> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut new_rays = Vec::new();
        if !neg.is_empty() {
            for &p in &pos {
                for &q in &neg {
                    let common = rays[p].zeros.and(&rays[q].zeros);
                    if common.count() + 2 < dim {
                        continue;
                    }
                    let adjacent = (0..rays.len()).all(|r| {
                        r == p || r == q || !rays[r].zeros.is_superset_of(&common)
                    });
                    if !adjacent {
                        continue;
                    }
                    let v: Vec<Rat> = rays[q]
                        .v
                        .iter()
                        .zip(&rays[p].v)
                        .map(|(x, y)| &vals[p] * x - &vals[q] * y)
                        .collect();
                    let mut zeros = common;
                    zeros.set(idx);
                    new_rays.push(Ray {
                        v: canonical_ray(&v),
                        zeros,
                    });
                }
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + new_rays.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.set(idx);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
        processed.push(idx);
    }
    let mut out: Vec<Vec<Rat>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Facets of `cone(rays)`: a minimal list of `h` with `x ∈ cone(rays)` iff
/// `h · x ≥ 0` for every `h`. The cone must be pointed and full-dimensional.
pub fn cone_v_to_h(rays: &[Vec<Rat>], dim: usize) -> Result<HRep, KernelError> {
    for r in rays {
        if r.len() != dim {
            return Err(KernelError::DimensionMismatch {
                expected: dim,
                got: r.len(),
            });
        }
    }
    let rank = linalg::rank(rays, dim);
    if rank < dim {
        return Err(KernelError::NotFullDimensional { rank, dim });
    }
    let facets = cone_h_to_v(rays, dim)?;
    // the dual of a cone containing a line is not full-dimensional
    if linalg::rank(&facets, dim) < dim {
        return Err(KernelError::NotPointed);
    }
    Ok(facets)
}

/// Vertices of the bounded polyhedron `{x : h.normal · x ≥ h.offset}`,
/// deduplicated and sorted. An empty polyhedron yields no vertices; an
/// unbounded one is an error carrying a recession direction.
pub fn poly_h_to_v(ineqs: &[Halfspace], dim: usize) -> Result<Vec<Vec<Rat>>, KernelError> {
    // homogenize: (x, s) with normal·x − offset·s ≥ 0 and s ≥ 0
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(ineqs.len() + 1);
    for h in ineqs {
        if h.normal.len() != dim {
            return Err(KernelError::DimensionMismatch {
                expected: dim,
                got: h.normal.len(),
            });
        }
        let mut r = h.normal.clone();
        r.push(-h.offset.clone());
        rows.push(r);
    }
    let mut s_row = vec![Rat::zero(); dim + 1];
    s_row[dim] = num_traits::One::one();
    rows.push(s_row);

    if linalg::rank(&rows, dim + 1) < dim + 1 {
        let normals: Vec<Vec<Rat>> = ineqs.iter().map(|h| h.normal.clone()).collect();
        let line = linalg::nullspace(&normals, dim)
            .into_iter()
            .next()
            .unwrap_or_else(|| vec![Rat::zero(); dim]);
        // only unbounded if the polyhedron is nonempty
        if feasible_point(ineqs, dim)?.is_none() {
            return Ok(Vec::new());
        }
        return Err(KernelError::Unbounded { ray: line });
    }
    let rays = cone_h_to_v(&rows, dim + 1)?;
    let mut vertices = Vec::new();
    let mut recession = None;
    for r in rays {
        let s = &r[dim];
        if s.is_positive() {
            vertices.push(r[..dim].iter().map(|x| x / s).collect::<Vec<Rat>>());
        } else if recession.is_none() {
            recession = Some(r[..dim].to_vec());
        }
    }
    if vertices.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(ray) = recession {
        return Err(KernelError::Unbounded { ray });
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

fn feasible_point(ineqs: &[Halfspace], dim: usize) -> Result<Option<Vec<Rat>>, KernelError> {
    use crate::lp::{solve_lp, LinearProgram, LpOutcome};
    let mut lp = LinearProgram::feasibility(dim);
    for h in ineqs {
        lp.add_ge(h.normal.clone(), h.offset.clone());
    }
    Ok(match solve_lp(&lp)? {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    })
}

/// Whether `x` lies in the cone described by `facets`.
pub fn in_cone(facets: &[Vec<Rat>], x: &[Rat]) -> bool {
    facets.iter().all(|h| !dot(h, x).is_negative())
}
