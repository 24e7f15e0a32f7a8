//! Reduction of `k`-linear independence in `K^m` to exact linear algebra over `k`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::gcd::poly_lcm;
use super::mpoly::{grlex_cmp, same_ring, MPoly, Mono};
use super::ratfunc::RatFunc;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// A dense matrix over `k` together with the column labels produced by
/// [`flatten_to_k`]: `(coordinate, monomial of the common-denominator numerator)`.
#[derive(Debug, Clone)]
pub struct FlatMatrix {
    pub field: Field,
    pub rows: Vec<Vec<Scalar>>,
    pub columns: Vec<(usize, Mono)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    /// Basis of `{ lambda : sum_i lambda_i * row_i = 0 }`.
    pub nullspace: Vec<Vec<Scalar>>,
}

#[derive(PartialEq, Eq)]
struct GrlexKey(Mono);

impl PartialOrd for GrlexKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GrlexKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        grlex_cmp(&other.0, &self.0)
    }
}

/// Writes each vector as a row of scalars such that a `k`-combination of the
/// input vectors vanishes iff the same combination of the rows does.
pub fn flatten_to_k(vectors: &[Vec<RatFunc>]) -> Result<FlatMatrix> {
    let Some(first) = vectors.first() else {
        return Err(Error::InvariantViolation("flatten of an empty vector list".into()));
    };
    let width = first.len();
    if vectors.iter().any(|v| v.len() != width) {
        return Err(Error::InvariantViolation("vectors of unequal length".into()));
    }
    let ring = match vectors.iter().flatten().next() {
        Some(e) => e.ring().clone(),
        None => {
            return Ok(FlatMatrix { field: Field::Rational, rows: vec![Vec::new(); vectors.len()], columns: Vec::new() })
        }
    };
    if vectors.iter().flatten().any(|e| !same_ring(e.ring(), &ring)) {
        return Err(Error::CharacteristicMismatch);
    }
    let field = ring.field();

    let per_coordinate: Vec<(Vec<(Mono, Scalar)>, Vec<MPoly>)> = (0..width)
        .into_par_iter()
        .map(|j| {
            let mut common = MPoly::one(&ring);
            for v in vectors {
                if !v[j].is_zero() && !v[j].den().is_one() {
                    common = poly_lcm(&common, v[j].den());
                }
            }
            let nums: Vec<MPoly> = vectors
                .iter()
                .map(|v| {
                    let e = &v[j];
                    if e.is_zero() {
                        MPoly::zero(&ring)
                    } else if e.den() == &common {
                        e.num().clone()
                    } else {
                        e.num().mul(&common.div_exact(e.den()).expect("lcm is a multiple"))
                    }
                })
                .collect();
            let monos: BTreeSet<GrlexKey> =
                nums.iter().flat_map(|p| p.terms().iter().map(|t| GrlexKey(t.0.clone()))).collect();
            let labels = monos.into_iter().map(|k| (k.0, field.zero())).collect();
            (labels, nums)
        })
        .collect();

    let mut columns = Vec::new();
    let mut rows: Vec<Vec<Scalar>> = vec![Vec::new(); vectors.len()];
    for (j, (labels, nums)) in per_coordinate.into_iter().enumerate() {
        for (i, p) in nums.iter().enumerate() {
            let mut it = p.terms().iter().peekable();
            for (m, _) in &labels {
                match it.peek() {
                    Some((pm, c)) if pm == m => {
                        rows[i].push(c.clone());
                        it.next();
                    }
                    _ => rows[i].push(field.zero()),
                }
            }
        }
        columns.extend(labels.into_iter().map(|(m, _)| (j, m)));
    }
    Ok(FlatMatrix { field, rows, columns })
}

/// Exact rank and left nullspace. Characteristic 0 runs fraction-free
/// (Bareiss) elimination over the integers; characteristic `p` runs plain
/// Gauss-Jordan on residues.
pub fn rank_over_k(field: Field, m: &[Vec<Scalar>]) -> RankResult {
    if m.is_empty() {
        return RankResult { rank: 0, nullspace: Vec::new() };
    }
    match field {
        Field::Rational => rank_bareiss(m),
        Field::Prime(p) => rank_mod_p(p, m),
    }
}

fn rank_bareiss(m: &[Vec<Scalar>]) -> RankResult {
    let n = m.len();
    let cols = m[0].len();
    // scale each row to integers; remember the scale to undo it on null vectors
    let mut scales = Vec::with_capacity(n);
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, row) in m.iter().enumerate() {
        let mut l = BigInt::one();
        for c in row {
            l = l.lcm(c.as_rational().expect("rational entry").denom());
        }
        let mut r: Vec<BigInt> = row
            .iter()
            .map(|c| {
                let q = c.as_rational().expect("rational entry");
                q.numer() * (&l / q.denom())
            })
            .collect();
        r.extend((0..n).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }));
        a.push(r);
        scales.push(l);
    }
    let width = cols + n;
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let piv = pivot_row[c].clone();
        tail.par_iter_mut().for_each(|row| {
            let f = row[c].clone();
            for j in c..width {
                let v = &piv * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        });
        prev = piv;
        rank += 1;
    }
    let nullspace = a[rank..]
        .iter()
        .map(|row| {
            let mut lam: Vec<BigInt> = (0..n).map(|k| &row[cols + k] * &scales[k]).collect();
            let mut g = BigInt::zero();
            for x in &lam {
                g = g.gcd(x);
            }
            if let Some(last) = lam.iter().rev().find(|x| !x.is_zero()) {
                if last.is_negative() {
                    g = -g;
                }
            }
            if !g.is_zero() && !g.is_one() {
                for x in lam.iter_mut() {
                    *x = &*x / &g;
                }
            }
            lam.into_iter().map(|x| Scalar::Q(BigRational::from_integer(x))).collect()
        })
        .collect();
    RankResult { rank, nullspace }
}

fn rank_mod_p(p: u64, m: &[Vec<Scalar>]) -> RankResult {
    let n = m.len();
    let cols = m[0].len();
    let width = cols + n;
    let val = |s: &Scalar| match s {
        Scalar::Fp(v, _) => *v,
        Scalar::Q(_) => panic!("rational entry in prime-field matrix"),
    };
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(val).collect();
            r.extend((0..n).map(|k| u64::from(k == i)));
            r
        })
        .collect();
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut rank = 0;
    for c in 0..cols {
        if rank == n {
            break;
        }
        let Some(piv) = (rank..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = match Scalar::Fp(a[rank][c], p).inv() {
            Ok(Scalar::Fp(v, _)) => v,
            _ => unreachable!("pivot is a nonzero residue"),
        };
        for j in c..width {
            a[rank][j] = mulm(a[rank][j], inv);
        }
        let pivot_row = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for j in c..width {
                row[j] = (row[j] + p - mulm(f, pivot_row[j])) % p;
            }
        }
        rank += 1;
    }
    let nullspace = a[rank..]
        .iter()
        .map(|row| {
            let mut lam: Vec<u64> = row[cols..].to_vec();
            // last nonzero entry normalized to 1
            if let Some(&last) = lam.iter().rev().find(|&&x| x != 0) {
                if let Ok(Scalar::Fp(inv, _)) = Scalar::Fp(last, p).inv() {
                    for x in lam.iter_mut() {
                        *x = mulm(*x, inv);
                    }
                }
            }
            lam.into_iter().map(|x| Scalar::Fp(x, p)).collect()
        })
        .collect();
    RankResult { rank, nullspace }
}

/// `sum_i lambda_i * row_i`, used to re-check null vectors.
pub fn combine_rows(field: Field, lambda: &[Scalar], rows: &[Vec<Scalar>]) -> Vec<Scalar> {
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut acc = vec![field.zero(); width];
    for (l, row) in lambda.iter().zip(rows) {
        if l.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(row) {
            *a = a.add(&l.mul(x));
        }
    }
    acc
}
