//! The affine cartesian code C_X(d) and its closed-form parameters.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::linalg;
use crate::poly::{CartesianSet, Exponents, ReducedPoly};

/// A codeword `Ψ(f)`: values of `f` over X in point order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    pub values: Vec<FieldElement>,
    pub weight: usize,
}

impl Codeword {
    pub fn new(values: Vec<FieldElement>) -> Self {
        let weight = values.iter().filter(|v| !v.is_zero()).count();
        Codeword { values, weight }
    }

    pub fn is_zero(&self) -> bool {
        self.weight == 0
    }

    /// Indices of points where the word is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !self.values[i].is_zero()).collect()
    }

    /// Indices of points where the word vanishes, `Z_X(f)`.
    pub fn zeros(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i].is_zero()).collect()
    }
}

/// Parameters of C_X(d) for d in the relevant range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub d: usize,
    pub k: usize,
    #[serde(rename = "ℓ")]
    pub l: usize,
    pub delta: usize,
    pub dim: usize,
}

impl CodeParams {
    pub fn new(set: &CartesianSet, d: usize) -> Result<Self> {
        let (k, l) = decompose(set, d)?;
        Ok(CodeParams {
            d,
            k,
            l,
            delta: min_distance_formula(set, d),
            dim: dimension(set, d),
        })
    }
}

/// `Σ (d_i - 1)`, the degree past which C_X(d) is the whole space.
pub fn degree_bound(sizes: &[usize]) -> usize {
    sizes.iter().map(|&d| d - 1).sum()
}

/// Writes `d = Σ_{i<=k} (d_i - 1) + ℓ` with `0 < ℓ <= d_{k+1} - 1`.
/// Accepts `1 <= d <= Σ (d_i - 1)`; at the upper end `k = n - 1` and
/// `ℓ = d_n - 1`.
pub fn decompose_sizes(sizes: &[usize], d: usize) -> Option<(usize, usize)> {
    if d == 0 {
        return None;
    }
    let mut rest = d;
    for (k, &dk) in sizes.iter().enumerate() {
        if rest < dk {
            return Some((k, rest));
        }
        rest -= dk - 1;
    }
    None
}

/// `(k, ℓ)` for `1 <= d < Σ (d_i - 1)`.
pub fn decompose(set: &CartesianSet, d: usize) -> Result<(usize, usize)> {
    let sizes = set.sizes();
    let upper = degree_bound(&sizes);
    if d == 0 || d >= upper {
        return Err(Error::OutOfRelevantRange { d, upper });
    }
    Ok(decompose_sizes(&sizes, d).expect("d is in range"))
}

/// Minimum distance of the code of order `e` on a product with the given
/// coordinate sizes: `∏ d_i` for `e = 0`, 1 for `e >= Σ (d_i - 1)`, `None`
/// for `e < 0` (the zero code).
pub fn delta_sizes(sizes: &[usize], e: i64) -> Option<usize> {
    if e < 0 {
        return None;
    }
    if e == 0 {
        return Some(sizes.iter().product());
    }
    match decompose_sizes(sizes, e as usize) {
        Some((k, l)) => Some((sizes[k] - l) * sizes[k + 1..].iter().product::<usize>()),
        None => Some(1),
    }
}

/// `δ_X(d) = (d_{k+1} - ℓ) ∏_{i >= k+2} d_i`, or 1 once `d >= Σ (d_i - 1)`.
pub fn min_distance_formula(set: &CartesianSet, d: usize) -> usize {
    delta_sizes(&set.sizes(), d as i64).expect("nonnegative order")
}

/// Number of exponent tuples with `a_i <= d_i - 1` and `Σ a_i <= d`.
pub fn dimension(set: &CartesianSet, d: usize) -> usize {
    // counts[s] = number of tuples over the processed coordinates summing to s
    let mut counts = vec![1usize];
    for di in set.sizes() {
        let mut next = vec![0usize; (counts.len() + di - 1).min(d + 1)];
        for (s, &c) in counts.iter().enumerate() {
            for a in 0..di {
                if s + a <= d {
                    next[s + a] += c;
                }
            }
        }
        counts = next;
    }
    counts.iter().sum()
}

/// Monomial basis of C_X(d): degree ascending, and within one degree
/// lexicographically descending, so `1, x_1, x_2, ...` come first.
pub fn monomial_basis(set: &CartesianSet, d: usize) -> Vec<Exponents> {
    let sizes = set.sizes();
    let mut out = Vec::new();
    fn rec(sizes: &[usize], i: usize, left: usize, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i == sizes.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in (0..sizes[i].min(left + 1)).rev() {
            cur.push(a as u16);
            rec(sizes, i + 1, left - a, cur, out);
            cur.pop();
        }
    }
    for deg in 0..=d.min(degree_bound(&sizes)) {
        rec(&sizes, 0, deg, &mut Vec::with_capacity(sizes.len()), &mut out);
    }
    out
}

/// Evaluations of the basis monomials, in basis order.
pub fn generator_rows(set: &Arc<CartesianSet>, d: usize) -> Vec<Codeword> {
    monomial_basis(set, d)
        .into_iter()
        .map(|e| Codeword::new(ReducedPoly::monomial(set, FieldElement::ONE, &e).values()))
        .collect()
}

/// `Ψ(f)` for `deg f <= d`.
pub fn encode(set: &Arc<CartesianSet>, d: usize, f: &ReducedPoly) -> Result<Codeword> {
    if **f.base() != **set {
        return Err(Error::BaseMismatch);
    }
    if let Some(deg) = f.degree() {
        if deg > d {
            return Err(Error::DegreeTooHigh { degree: deg, d });
        }
    }
    Ok(Codeword::new(f.values()))
}

/// Generator rows in reduced row echelon form with their pivot columns.
pub fn systematic_generator(set: &Arc<CartesianSet>, d: usize) -> (linalg::Matrix, Vec<usize>) {
    let mut rows: linalg::Matrix = generator_rows(set, d).into_iter().map(|c| c.values).collect();
    let pivots = linalg::rref(set.ctx(), &mut rows);
    (rows, pivots)
}

/// Parity-check matrix `H` with `H c = 0` exactly for codewords `c`.
pub fn parity_check(set: &Arc<CartesianSet>, d: usize) -> linalg::Matrix {
    let ctx = set.ctx();
    let (g, pivots) = systematic_generator(set, d);
    let m = set.len();
    let mut is_pivot = vec![false; m];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m)
        .filter(|&c| !is_pivot[c])
        .map(|c| {
            let mut h = vec![FieldElement::ZERO; m];
            h[c] = FieldElement::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                h[p] = ctx.neg(g[i][c]);
            }
            h
        })
        .collect()
}

/// `min ∏ (d_i - a_i)` over `0 <= a_i < d_i`, `Σ a_i <= d`, in closed form.
/// `dvec` must be nondecreasing with entries at least 2.
pub fn lemma21_min(dvec: &[usize], d: usize) -> Result<usize> {
    if dvec.is_empty() || dvec.iter().any(|&x| x < 2) || dvec.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::OutOfRange(format!("{dvec:?} is not a nondecreasing vector of sizes >= 2")));
    }
    let upper = degree_bound(dvec);
    if d == 0 || d > upper {
        return Err(Error::OutOfRange(format!("d = {d} outside 1..={upper}")));
    }
    Ok(delta_sizes(dvec, d as i64).expect("in range"))
}

/// Next-to-minimal weight of GRM_q(d, n) from the case table, with
/// `d = k (q - 1) + ℓ`, `0 < ℓ <= q - 1`. The table extends to the
/// boundary `d = n (q - 1)`, where the code is the whole space and the value
/// is 2.
pub fn grm_second_weight(q: usize, n: usize, d: usize) -> Result<usize> {
    if q < 2 || n == 0 || prime_power_parts(q).is_none() {
        return Err(Error::OutOfRange(format!("q = {q}, n = {n} do not define a GRM code")));
    }
    if d == 0 || d > n * (q - 1) {
        return Err(Error::OutOfRange(format!("d = {d} outside 1..={}", n * (q - 1))));
    }
    let k = (d - 1) / (q - 1);
    let l = d - k * (q - 1);
    let delta = (q - l) * q.pow((n - k - 1) as u32);
    let c = if k == n - 1 {
        q
    } else if 1 < l && 2 * l <= q + 1 {
        l - 1
    } else if l == q - 1 && l != 1 {
        l - 1
    } else if k == 0 && l == 1 {
        q
    } else if q < 4 && 0 < k && k + 2 < n && l == 1 {
        q - 1
    } else if q == 3 && 0 < k && k + 2 == n && l == 1 {
        q - 1
    } else if q == 2 && k + 2 == n && l == 1 {
        q
    } else if q >= 4 && 0 < k && k + 2 <= n && l == 1 {
        q
    } else if q >= 4 && k + 2 <= n && 2 * l > q + 1 {
        l - 1
    } else {
        unreachable!("case table covers every (q, n, d) in range")
    };
    // c q^{n-k-2}; with k = n - 1 this is c / q = 1
    let extra = if k + 2 > n { c / q } else { c * q.pow((n - k - 2) as u32) };
    Ok(delta + extra)
}

/// `(p, m)` with `q = p^m`, `p` prime.
pub fn prime_power_parts(q: usize) -> Option<(u32, u32)> {
    let p = (2..=q).find(|p| q % p == 0)?;
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p as u32, m))
}
