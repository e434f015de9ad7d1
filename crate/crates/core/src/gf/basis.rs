//! A fixed F_q-basis of F_(q^m) and F_q-coordinates with respect to it.
//!
//! The basis is the power basis 1, u, …, u^(m-1) of the least-encoding
//! element u of degree exactly m over F_q. Coordinates are read off with the
//! trace-dual basis, precomputed on the F_p-power basis so that extracting
//! the coordinates of an element costs one pass over its digits.

use super::{Elem, Field, GfError, Result};

#[derive(Debug, Clone)]
pub struct FqBasis {
    h: u32,
    dim: usize,
    generator: Elem,
    elems: Vec<Elem>,
    /// frob[i][j] = elems[j]^(q^i)
    frob: Vec<Vec<Elem>>,
    dual: Vec<Elem>,
    /// F_q-coordinates of t^k, k below the degree over F_p
    digit_rows: Vec<Vec<Elem>>,
    /// when h = 1 and u = t the coordinates are the digits themselves
    digits_direct: bool,
}

impl FqBasis {
    pub(super) fn new(field: &Field) -> Result<FqBasis> {
        let tower = field.tower.ok_or(GfError::NoTower)?;
        let h = tower.h;
        let dim = (2 * tower.n) as usize;
        let maximal_divisors: Vec<u32> = super::prime_factors(dim as u64)
            .into_iter()
            .map(|r| dim as u32 / r as u32)
            .collect();
        let generator = field
            .elements()
            .find(|&u| maximal_divisors.iter().all(|&d| field.frob(u, h * d) != u))
            .expect("elements of full degree exist");
        let mut elems = Vec::with_capacity(dim);
        let mut cur = Elem::ONE;
        for _ in 0..dim {
            elems.push(cur);
            cur = field.mul(cur, generator);
        }
        let frob = (0..dim as u32)
            .map(|i| elems.iter().map(|&b| field.frob(b, h * i)).collect())
            .collect();

        let trace = |x: Elem| field.trace_down(x, field.degree, h);
        let mut gram: Vec<Vec<Elem>> = (0..dim)
            .map(|i| (0..dim).map(|j| trace(field.mul(elems[i], elems[j]))).collect())
            .collect();
        let inv = invert(field, &mut gram).expect("trace form is nondegenerate");
        let dual: Vec<Elem> = (0..dim)
            .map(|j| {
                (0..dim).fold(Elem::ZERO, |acc, k| {
                    field.add(acc, field.mul(inv[j][k], elems[k]))
                })
            })
            .collect();
        let digit_rows = (0..field.degree)
            .map(|k| {
                let tk = Elem(field.p_pow(k) as u32);
                dual.iter().map(|&d| trace(field.mul(tk, d))).collect()
            })
            .collect();
        let digits_direct = h == 1 && (field.degree == 1 || generator == Elem(field.p));
        Ok(FqBasis {
            h,
            dim,
            generator,
            elems,
            frob,
            dual,
            digit_rows,
            digits_direct,
        })
    }

    /// Dimension m of the field over F_q.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    /// (b_j)^(q^i) for the basis element b_j.
    #[inline]
    pub fn frob(&self, i: usize, j: usize) -> Elem {
        self.frob[i][j]
    }

    pub fn dual(&self) -> &[Elem] {
        &self.dual
    }

    /// Coordinates of y over F_q, each an element of the subfield F_q.
    pub fn coords(&self, field: &Field, y: Elem) -> Vec<Elem> {
        if self.digits_direct {
            return field.coeffs(y).into_iter().map(Elem).collect();
        }
        let mut out = vec![Elem::ZERO; self.dim];
        for (k, digit) in field.coeffs(y).into_iter().enumerate() {
            if digit == 0 {
                continue;
            }
            let scalar = Elem(digit);
            for (o, &r) in out.iter_mut().zip(&self.digit_rows[k]) {
                *o = field.add(*o, field.mul(scalar, r));
            }
        }
        out
    }

    pub fn from_coords(&self, field: &Field, coords: &[Elem]) -> Elem {
        coords
            .iter()
            .zip(&self.elems)
            .fold(Elem::ZERO, |acc, (&c, &b)| field.add(acc, field.mul(c, b)))
    }

    /// Rank over F_q of the matrix whose rows are the coordinate vectors of `images`.
    pub fn rank_of_images(&self, field: &Field, images: &[Elem]) -> usize {
        if field.p == 2 && self.digits_direct {
            let mut packed = [0u64; 64];
            let k = images.len().min(64);
            for (dst, y) in packed.iter_mut().zip(images) {
                *dst = y.0 as u64;
            }
            return rank_f2(&mut packed[..k]);
        }
        if self.h == 1 {
            let mut rows: Vec<Vec<u32>> = if self.digits_direct {
                images.iter().map(|&y| field.coeffs(y)).collect()
            } else {
                images
                    .iter()
                    .map(|&y| self.coords(field, y).into_iter().map(|c| c.0).collect())
                    .collect()
            };
            rank_mod_p(&mut rows, field.p)
        } else {
            let mut rows: Vec<Vec<Elem>> =
                images.iter().map(|&y| self.coords(field, y)).collect();
            rank_in_field(field, &mut rows)
        }
    }
}

/// Row rank over F_p of a matrix of residues.
pub fn rank_mod_p(rows: &mut [Vec<u32>], p: u32) -> usize {
    if p == 2 {
        let mut packed: Vec<u64> = rows
            .iter()
            .map(|r| r.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | ((c as u64 & 1) << i)))
            .collect();
        return rank_f2(&mut packed);
    }
    let p64 = p as u64;
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = super::poly::inv_mod_p(rows[rank][col], p) as u64;
        for r in rank + 1..rows.len() {
            let c = rows[r][col];
            if c == 0 {
                continue;
            }
            let factor = c as u64 * inv % p64;
            for k in col..ncols {
                let sub = factor * rows[rank][k] as u64 % p64;
                rows[r][k] = ((rows[r][k] as u64 + p64 - sub) % p64) as u32;
            }
        }
        rank += 1;
    }
    rank
}

fn rank_f2(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pr = rows[rank];
        for r in rows.iter_mut().skip(rank + 1) {
            if *r >> bit & 1 == 1 {
                *r ^= pr;
            }
        }
        rank += 1;
    }
    rank
}

/// Row rank of a matrix with entries in the field.
pub fn rank_in_field(field: &Field, rows: &mut [Vec<Elem>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        for r in rank + 1..rows.len() {
            let c = rows[r][col];
            if c.is_zero() {
                continue;
            }
            let factor = field.mul(c, inv);
            for k in col..ncols {
                let sub = field.mul(factor, rows[rank][k]);
                rows[r][k] = field.sub(rows[r][k], sub);
            }
        }
        rank += 1;
    }
    rank
}

/// Gauss-Jordan inverse of a square matrix over the field.
fn invert(field: &Field, a: &mut [Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Elem>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = field.inv(a[col][col])?;
        for k in 0..n {
            a[col][k] = field.mul(a[col][k], pinv);
            inv[col][k] = field.mul(inv[col][k], pinv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col];
            for k in 0..n {
                let s = field.mul(factor, a[col][k]);
                a[r][k] = field.sub(a[r][k], s);
                let s = field.mul(factor, inv[col][k]);
                inv[r][k] = field.sub(inv[r][k], s);
            }
        }
    }
    Some(inv)
}
