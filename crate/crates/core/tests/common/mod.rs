//! Independent reference computations. Nothing here calls into the crate's
//! linear algebra or volume code.
#![allow(dead_code)]

use num::{BigRational, One, Signed, Zero};

pub type R = BigRational;

pub fn r(n: i64) -> R {
    R::from_integer(n.into())
}

pub fn rf(n: i64, d: i64) -> R {
    R::new(n.into(), d.into())
}

/// Solves a square system by Gauss-Jordan elimination; `None` if singular.
pub fn solve_square(mut a: Vec<Vec<R>>, mut b: Vec<R>) -> Option<Vec<R>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = R::one() / &a[col][col];
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[col];
                b[i] -= t;
            }
        }
    }
    Some(b)
}

/// Halfspaces `<u, x> + c >= 0`.
#[derive(Clone, Debug)]
pub struct Halfspaces {
    pub dim: usize,
    pub rows: Vec<(Vec<R>, R)>,
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

impl Halfspaces {
    pub fn from_int(normals: &[Vec<i64>], offsets: &[R]) -> Self {
        Halfspaces {
            dim: normals[0].len(),
            rows: normals
                .iter()
                .zip(offsets)
                .map(|(u, c)| (u.iter().map(|&x| r(x)).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn contains(&self, x: &[R]) -> bool {
        self.rows.iter().all(|(u, c)| {
            let s: R = u.iter().zip(x).map(|(a, b)| a * b).sum::<R>() + c;
            !s.is_negative()
        })
    }

    /// Brute force: every nonsingular `dim`-subset of tight rows, kept if feasible.
    pub fn vertices(&self) -> Vec<Vec<R>> {
        let mut out: Vec<Vec<R>> = Vec::new();
        for s in subsets(self.rows.len(), self.dim) {
            let a: Vec<Vec<R>> = s.iter().map(|&i| self.rows[i].0.clone()).collect();
            let b: Vec<R> = s.iter().map(|&i| -self.rows[i].1.clone()).collect();
            if let Some(x) = solve_square(a, b) {
                if self.contains(&x) && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Pairs of vertices sharing at least `dim - 1` tight rows whose common
    /// tight set pins down a line (edges of a simple polytope).
    pub fn edge_count(&self) -> usize {
        let verts = self.vertices();
        let tight = |x: &Vec<R>| -> Vec<usize> {
            (0..self.rows.len())
                .filter(|&i| {
                    let (u, c) = &self.rows[i];
                    (u.iter().zip(x).map(|(a, b)| a * b).sum::<R>() + c).is_zero()
                })
                .collect()
        };
        let ts: Vec<Vec<usize>> = verts.iter().map(tight).collect();
        let mut count = 0;
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let common: Vec<usize> = ts[i].iter().copied().filter(|f| ts[j].contains(f)).collect();
                if common.len() == self.dim - 1 {
                    // No third vertex may share the same tight set, or the
                    // segment would not be an edge.
                    let others = (0..verts.len())
                        .filter(|&k| k != i && k != j && common.iter().all(|f| ts[k].contains(f)))
                        .count();
                    if others == 0 {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// The slice `x_last = t` as halfspaces in one dimension less.
    fn slice(&self, t: &R) -> Halfspaces {
        let d = self.dim - 1;
        Halfspaces {
            dim: d,
            rows: self
                .rows
                .iter()
                .map(|(u, c)| (u[..d].to_vec(), c + &u[d] * t))
                .collect(),
        }
    }
}

/// Volume by slicing along the last coordinate. The slice area is a polynomial
/// of degree `dim - 1` between consecutive vertex heights, so integrating its
/// interpolant through `dim` interior nodes is exact.
pub fn slicing_volume(h: &Halfspaces) -> R {
    if h.dim == 1 {
        // Interval.
        let mut lo: Option<R> = None;
        let mut hi: Option<R> = None;
        for (u, c) in &h.rows {
            if u[0].is_zero() {
                if c.is_negative() {
                    return R::zero();
                }
                continue;
            }
            let bound = -c / &u[0];
            if u[0].is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l: R| if bound > l { bound.clone() } else { l }));
            } else {
                hi = Some(hi.map_or(bound.clone(), |x: R| if bound < x { bound.clone() } else { x }));
            }
        }
        let (lo, hi) = (lo.expect("bounded"), hi.expect("bounded"));
        return if hi > lo { hi - lo } else { R::zero() };
    }
    let verts = h.vertices();
    if verts.is_empty() {
        return R::zero();
    }
    let mut heights: Vec<R> = verts.iter().map(|v| v[h.dim - 1].clone()).collect();
    heights.sort();
    heights.dedup();
    let deg = h.dim - 1;
    let mut total = R::zero();
    for w in heights.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let nodes: Vec<R> = (0..=deg).map(|i| a + (b - a) * rf(i as i64 + 1, deg as i64 + 2)).collect();
        // Weights with sum_i w_i t_i^k = int_a^b t^k dt for k = 0..deg.
        let vander: Vec<Vec<R>> = (0..=deg)
            .map(|k| nodes.iter().map(|t| pow(t, k)).collect())
            .collect();
        let moments: Vec<R> = (0..=deg)
            .map(|k| (pow(b, k + 1) - pow(a, k + 1)) / r(k as i64 + 1))
            .collect();
        let weights = solve_square(vander, moments).expect("distinct nodes");
        for (t, wt) in nodes.iter().zip(&weights) {
            total += wt * slicing_volume(&h.slice(t));
        }
    }
    total
}

fn pow(x: &R, k: usize) -> R {
    (0..k).fold(R::one(), |acc, _| acc * x)
}

pub fn factorial(n: usize) -> R {
    (1..=n as i64).fold(R::one(), |acc, k| acc * r(k))
}

/// Unit hypercube `[0,1]^n` in the crate's facet order.
pub fn cube_rows(n: usize) -> (Vec<Vec<i64>>, Vec<R>) {
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    for j in 0..n {
        let mut lo = vec![0; n];
        lo[j] = 1;
        let mut hi = vec![0; n];
        hi[j] = -1;
        normals.push(lo);
        offsets.push(r(0));
        normals.push(hi);
        offsets.push(r(1));
    }
    (normals, offsets)
}

/// Standard simplex in the crate's facet order.
pub fn simplex_rows(n: usize) -> (Vec<Vec<i64>>, Vec<R>) {
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        normals.push(e);
        offsets.push(r(0));
    }
    normals.push(vec![-1; n]);
    offsets.push(r(1));
    (normals, offsets)
}

fn det(mut a: Vec<Vec<R>>) -> R {
    let n = a.len();
    let mut d = R::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !a[i][col].is_zero()) else { return R::zero() };
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d *= &a[col][col];
        for i in col + 1..n {
            let f = &a[i][col] / &a[col][col];
            for j in col..n {
                let t = &f * &a[col][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Volume from a pulling triangulation: every face is coned from its first
/// vertex over the triangulations of its facets that avoid that vertex.
pub fn triangulation_volume(h: &Halfspaces) -> R {
    let verts = h.vertices();
    let tight: Vec<Vec<usize>> = verts
        .iter()
        .map(|x| {
            (0..h.rows.len())
                .filter(|&i| {
                    let (u, c) = &h.rows[i];
                    (u.iter().zip(x).map(|(a, b)| a * b).sum::<R>() + c).is_zero()
                })
                .collect()
        })
        .collect();
    // A face is the set of vertices tight on every row of `rows`.
    let face = |rows: &[usize]| -> Vec<usize> {
        (0..verts.len()).filter(|&v| rows.iter().all(|f| tight[v].contains(f))).collect()
    };
    fn go(
        rows: Vec<usize>,
        dim: usize,
        face: &dyn Fn(&[usize]) -> Vec<usize>,
        nrows: usize,
    ) -> Vec<Vec<usize>> {
        let vs = face(&rows);
        if dim == 0 {
            return vec![vs];
        }
        let apex = vs[0];
        let mut seen: Vec<Vec<usize>> = Vec::new();
        let mut out = Vec::new();
        for f in (0..nrows).filter(|f| !rows.contains(f)) {
            let mut sub = rows.clone();
            sub.push(f);
            let svs = face(&sub);
            if svs.is_empty() || svs.contains(&apex) || svs == vs || seen.contains(&svs) {
                continue;
            }
            seen.push(svs);
            for mut s in go(sub, dim - 1, face, nrows) {
                s.push(apex);
                out.push(s);
            }
        }
        out
    }
    let n = h.dim;
    let mut total = R::zero();
    for s in go(Vec::new(), n, &face, h.rows.len()) {
        let base = &verts[s[0]];
        let m: Vec<Vec<R>> = s[1..].iter().map(|&v| verts[v].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        total += det(m).abs();
    }
    total / factorial(n)
}
