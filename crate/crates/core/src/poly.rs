//! The quotient ring K[X_1..X_n] / (X_i^{d_i} - X_i) over a cartesian
//! product of nested subfields, with evaluation and interpolation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Exponent tuple of a monomial.
pub type Exponents = Vec<u16>;

/// The point set X = K_1 x ... x K_n for a chain of subfields
/// GF(p^{e_1}) ⊆ ... ⊆ GF(p^{e_n}) ⊆ GF(p^m).
///
/// Points are enumerated lexicographically, coordinate 1 most significant,
/// each coordinate in canonical subfield order. That order is the codeword
/// index order everywhere in the crate.
#[derive(Clone)]
pub struct CartesianSet {
    ctx: Arc<FieldCtx>,
    chain: Vec<u32>,
    coords: Vec<Vec<FieldElement>>,
    /// `position[i][x.index()]` is the position of `x` in `K_i`, or `u32::MAX`.
    position: Vec<Vec<u32>>,
    strides: Vec<usize>,
    len: usize,
}

impl PartialEq for CartesianSet {
    fn eq(&self, other: &Self) -> bool {
        self.chain == other.chain && *self.ctx == *other.ctx
    }
}

impl Eq for CartesianSet {}

impl fmt::Debug for CartesianSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CartesianSet(chain={:?}, sizes={:?}, {:?})", self.chain, self.sizes(), self.ctx)
    }
}

impl CartesianSet {
    /// Builds the product for the chain `e_1 | e_2 | ... | e_n | m`.
    pub fn new(ctx: Arc<FieldCtx>, chain: Vec<u32>) -> Result<Arc<Self>> {
        if chain.is_empty() {
            return Err(Error::InvalidChain("chain must have at least one coordinate".into()));
        }
        if chain.contains(&0) {
            return Err(Error::InvalidChain(
                "subfield degrees must be positive (singleton coordinates are not allowed)".into(),
            ));
        }
        for w in chain.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidChain(format!(
                    "{} does not divide {}: not a subfield chain",
                    w[0], w[1]
                )));
            }
        }
        let last = *chain.last().unwrap();
        if ctx.degree() % last != 0 {
            return Err(Error::InvalidChain(format!(
                "{} does not divide the ambient degree {}",
                last,
                ctx.degree()
            )));
        }
        Ok(Arc::new(Self::build(ctx, chain)))
    }

    fn build(ctx: Arc<FieldCtx>, chain: Vec<u32>) -> Self {
        let coords: Vec<Vec<FieldElement>> = chain
            .iter()
            .map(|&e| ctx.subfield_elements(e).expect("validated chain"))
            .collect();
        let position = coords
            .iter()
            .map(|k| {
                let mut pos = vec![u32::MAX; ctx.order() as usize];
                for (t, x) in k.iter().enumerate() {
                    pos[x.index()] = t as u32;
                }
                pos
            })
            .collect();
        let n = chain.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * coords[i + 1].len();
        }
        let len = coords.iter().map(Vec::len).product();
        CartesianSet { ctx, chain, coords, position, strides, len }
    }

    /// The sub-product over the listed coordinates (0-based, increasing).
    /// An empty list gives the one-point product.
    pub fn subproduct(&self, coords: &[usize]) -> Arc<Self> {
        let chain = coords.iter().map(|&i| self.chain[i]).collect();
        Arc::new(Self::build(self.ctx.clone(), chain))
    }

    /// X with coordinate `j` (0-based) removed.
    pub fn without(&self, j: usize) -> Arc<Self> {
        let keep: Vec<usize> = (0..self.n()).filter(|&i| i != j).collect();
        self.subproduct(&keep)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.chain.len()
    }

    pub fn chain(&self) -> &[u32] {
        &self.chain
    }

    /// `d_i = |K_i|`.
    pub fn sizes(&self) -> Vec<usize> {
        self.coords.iter().map(Vec::len).collect()
    }

    pub fn size(&self, i: usize) -> usize {
        self.coords[i].len()
    }

    /// `|X| = prod d_i`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Elements of `K_i` in canonical order.
    pub fn coord(&self, i: usize) -> &[FieldElement] {
        &self.coords[i]
    }

    pub fn in_coord(&self, i: usize, x: FieldElement) -> bool {
        self.position_in(i, x).is_some()
    }

    pub fn position_in(&self, i: usize, x: FieldElement) -> Option<usize> {
        match self.position[i].get(x.index()) {
            Some(&p) if p != u32::MAX => Some(p as usize),
            _ => None,
        }
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Coordinate of point `index` along axis `i`.
    #[inline]
    pub fn digit(&self, index: usize, i: usize) -> usize {
        (index / self.strides[i]) % self.coords[i].len()
    }

    pub fn point(&self, index: usize) -> Vec<FieldElement> {
        (0..self.n()).map(|i| self.coords[i][self.digit(index, i)]).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<FieldElement>> + '_ {
        (0..self.len).map(|i| self.point(i))
    }

    pub fn index_of(&self, point: &[FieldElement]) -> Option<usize> {
        if point.len() != self.n() {
            return None;
        }
        point.iter().enumerate().try_fold(0usize, |acc, (i, &x)| {
            self.position_in(i, x).map(|p| acc + p * self.strides[i])
        })
    }

    pub fn contains(&self, point: &[FieldElement]) -> bool {
        self.index_of(point).is_some()
    }

    /// Coefficients of the indicator polynomials of K_i:
    /// `m[t][a]` is the coefficient of x^a in the polynomial that is 1 at the
    /// t-th element of K_i and 0 elsewhere on K_i.
    fn indicator_matrix(&self, i: usize) -> Vec<Vec<FieldElement>> {
        let ctx = &*self.ctx;
        let k = &self.coords[i];
        k.iter()
            .map(|&beta| {
                let mut poly = vec![FieldElement::ONE];
                let mut denom = FieldElement::ONE;
                for &gamma in k.iter().filter(|&&g| g != beta) {
                    // poly *= (x - gamma)
                    let mut next = vec![FieldElement::ZERO; poly.len() + 1];
                    for (a, &c) in poly.iter().enumerate() {
                        next[a + 1] = ctx.add(next[a + 1], c);
                        next[a] = ctx.sub(next[a], ctx.mul(c, gamma));
                    }
                    poly = next;
                    denom = ctx.mul(denom, ctx.sub(beta, gamma));
                }
                let inv = ctx.inv(denom).expect("distinct field elements");
                poly.into_iter().map(|c| ctx.mul(c, inv)).collect()
            })
            .collect()
    }

    /// `e[a][t] = (t-th element of K_i)^a`.
    fn power_matrix(&self, i: usize) -> Vec<Vec<FieldElement>> {
        let ctx = &*self.ctx;
        let k = &self.coords[i];
        (0..k.len())
            .map(|a| k.iter().map(|&x| ctx.pow(x, a as u64)).collect())
            .collect()
    }

    /// Applies `out[r] = sum_t mat[r][t] * data[t]` along axis `i`.
    fn transform_axis(&self, data: &mut [FieldElement], i: usize, mat: &[Vec<FieldElement>]) {
        let ctx = &*self.ctx;
        let d = self.coords[i].len();
        let s = self.strides[i];
        let mut buf = vec![FieldElement::ZERO; d];
        for block in 0..self.len / (d * s) {
            for inner in 0..s {
                let base = block * d * s + inner;
                for (t, b) in buf.iter_mut().enumerate() {
                    *b = data[base + t * s];
                }
                for (r, row) in mat.iter().enumerate() {
                    data[base + r * s] = row
                        .iter()
                        .zip(&buf)
                        .fold(FieldElement::ZERO, |acc, (&m, &v)| ctx.add(acc, ctx.mul(m, v)));
                }
            }
        }
    }
}

/// A reduced polynomial: every exponent satisfies `a_i < d_i` and no stored
/// coefficient is zero, so equality of term tables is equality of functions
/// on X.
#[derive(Clone)]
pub struct ReducedPoly {
    base: Arc<CartesianSet>,
    terms: BTreeMap<Exponents, FieldElement>,
}

impl PartialEq for ReducedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && *self.base == *other.base
    }
}

impl Eq for ReducedPoly {}

impl fmt::Debug for ReducedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedPoly({self})")
    }
}

#[inline]
fn reduce_exponent(a: u64, d: usize) -> u16 {
    let d = d as u64;
    if a < d {
        a as u16
    } else {
        (((a - 1) % (d - 1)) + 1) as u16
    }
}

impl ReducedPoly {
    pub fn zero(base: &Arc<CartesianSet>) -> Self {
        ReducedPoly { base: base.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(base: &Arc<CartesianSet>, c: FieldElement) -> Self {
        let mut p = Self::zero(base);
        if !c.is_zero() {
            p.terms.insert(vec![0; base.n()], c);
        }
        p
    }

    pub fn one(base: &Arc<CartesianSet>) -> Self {
        Self::constant(base, FieldElement::ONE)
    }

    /// The coordinate function `x_i` (0-based `i`).
    pub fn var(base: &Arc<CartesianSet>, i: usize) -> Self {
        let mut e = vec![0u16; base.n()];
        e[i] = 1;
        Self::monomial(base, FieldElement::ONE, &e)
    }

    /// `c * x^e`, reducing exponents as needed.
    pub fn monomial(base: &Arc<CartesianSet>, c: FieldElement, e: &[u16]) -> Self {
        Self::reduce(base, [(e.iter().map(|&a| a as u64).collect::<Vec<_>>(), c)])
    }

    /// Reduces a raw polynomial with unbounded exponents modulo the
    /// vanishing ideal of X.
    pub fn reduce<I>(base: &Arc<CartesianSet>, raw: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u64>, FieldElement)>,
    {
        let ctx = base.ctx().clone();
        let sizes = base.sizes();
        let mut terms: BTreeMap<Exponents, FieldElement> = BTreeMap::new();
        for (exps, c) in raw {
            if c.is_zero() {
                continue;
            }
            assert_eq!(exps.len(), sizes.len(), "exponent tuple length must equal n");
            let key: Exponents =
                exps.iter().zip(&sizes).map(|(&a, &d)| reduce_exponent(a, d)).collect();
            let slot = terms.entry(key).or_insert(FieldElement::ZERO);
            *slot = ctx.add(*slot, c);
        }
        terms.retain(|_, c| !c.is_zero());
        ReducedPoly { base: base.clone(), terms }
    }

    pub fn base(&self) -> &Arc<CartesianSet> {
        &self.base
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, FieldElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().map(|&a| a as usize).sum()).max()
    }

    pub fn coefficient(&self, e: &[u16]) -> FieldElement {
        self.terms.get(e).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if !self.base.contains(point) {
            return Err(Error::PointNotInX);
        }
        let ctx = self.base.ctx();
        Ok(self.terms.iter().fold(FieldElement::ZERO, |acc, (e, &c)| {
            let v = e
                .iter()
                .zip(point)
                .fold(c, |v, (&a, &x)| ctx.mul(v, ctx.pow(x, a as u64)));
            ctx.add(acc, v)
        }))
    }

    /// Value sequence over X in point order (the map Ψ).
    pub fn values(&self) -> Vec<FieldElement> {
        let base = &*self.base;
        let mut data = vec![FieldElement::ZERO; base.len()];
        for (e, &c) in &self.terms {
            let idx: usize = e.iter().zip(base.strides()).map(|(&a, &s)| a as usize * s).sum();
            data[idx] = c;
        }
        for i in 0..base.n() {
            // values[t] = sum_a coeff[a] * beta_t^a
            let e = base.power_matrix(i);
            let d = base.size(i);
            let mat: Vec<Vec<FieldElement>> =
                (0..d).map(|t| (0..d).map(|a| e[a][t]).collect()).collect();
            base.transform_axis(&mut data, i, &mat);
        }
        data
    }

    /// The unique reduced polynomial taking `values` on X in point order.
    pub fn interpolate(base: &Arc<CartesianSet>, values: &[FieldElement]) -> Result<Self> {
        if values.len() != base.len() {
            return Err(Error::LengthMismatch { expected: base.len(), got: values.len() });
        }
        let mut data = values.to_vec();
        for i in 0..base.n() {
            // coeff[a] = sum_t values[t] * L_t[a]
            let m = base.indicator_matrix(i);
            let d = base.size(i);
            let mat: Vec<Vec<FieldElement>> =
                (0..d).map(|a| (0..d).map(|t| m[t][a]).collect()).collect();
            base.transform_axis(&mut data, i, &mat);
        }
        let mut terms = BTreeMap::new();
        for (idx, &c) in data.iter().enumerate() {
            if !c.is_zero() {
                let e: Exponents = (0..base.n()).map(|i| base.digit(idx, i) as u16).collect();
                terms.insert(e, c);
            }
        }
        Ok(ReducedPoly { base: base.clone(), terms })
    }

    fn check_base(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) || *self.base == *other.base {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let ctx = self.base.ctx();
        let mut terms = self.terms.clone();
        for (e, &c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert(FieldElement::ZERO);
            *slot = ctx.add(*slot, c);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(ReducedPoly { base: self.base.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let ctx = self.base.ctx();
        ReducedPoly {
            base: self.base.clone(),
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), ctx.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.base);
        }
        let ctx = self.base.ctx();
        ReducedPoly {
            base: self.base.clone(),
            terms: self.terms.iter().map(|(e, &t)| (e.clone(), ctx.mul(c, t))).collect(),
        }
    }

    /// Product in the quotient ring: multiply terms, then reduce exponents.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let ctx = self.base.ctx();
        let raw = self.terms.iter().flat_map(|(e1, &c1)| {
            other.terms.iter().map(move |(e2, &c2)| {
                let e: Vec<u64> = e1.iter().zip(e2).map(|(&a, &b)| a as u64 + b as u64).collect();
                (e, ctx.mul(c1, c2))
            })
        });
        Ok(Self::reduce(&self.base, raw.collect::<Vec<_>>()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.base);
        for _ in 0..e {
            acc = acc.mul(self).expect("same base");
        }
        acc
    }

    /// Substitutes `x_j = alpha` (0-based `j`), giving a polynomial on X
    /// with coordinate `j` removed.
    pub fn specialize(&self, j: usize, alpha: FieldElement) -> Result<Self> {
        if j >= self.base.n() {
            return Err(Error::CoordinateOutOfRange { index: j, n: self.base.n() });
        }
        if !self.base.in_coord(j, alpha) {
            return Err(Error::ValueNotInKj(j + 1));
        }
        let ctx = self.base.ctx();
        let sub = self.base.without(j);
        let raw: Vec<(Vec<u64>, FieldElement)> = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let rest: Vec<u64> =
                    e.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &a)| a as u64).collect();
                (rest, ctx.mul(c, ctx.pow(alpha, e[j] as u64)))
            })
            .collect();
        Ok(Self::reduce(&sub, raw))
    }

    /// Parses `coeff * x1^a1 ... xn^an` terms joined by `+` or `-`.
    /// Coefficients are `0`, `1`, `g`, `g^k` or small integers (taken mod p).
    pub fn parse(base: &Arc<CartesianSet>, s: &str) -> Result<Self> {
        let ctx = base.ctx().clone();
        let n = base.n();
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut raw = Vec::new();
        let mut negate = false;
        let mut current = String::new();
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for ch in t.chars() {
            match ch {
                '+' | '-' => {
                    if !current.trim().is_empty() {
                        pieces.push((negate, std::mem::take(&mut current)));
                        negate = false;
                    }
                    current.clear();
                    if ch == '-' {
                        negate = !negate;
                    }
                }
                _ => current.push(ch),
            }
        }
        if current.trim().is_empty() {
            return Err(Error::Parse(format!("dangling operator in `{s}`")));
        }
        pieces.push((negate, current));
        for (neg, term) in pieces {
            let mut coeff = FieldElement::ONE;
            let mut exps = vec![0u64; n];
            for tok in term.split(|c: char| c == '*' || c.is_whitespace()).filter(|x| !x.is_empty()) {
                if let Some(rest) = tok.strip_prefix('x') {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((i, p)) => (i, p),
                        None => (rest, "1"),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable `{tok}`")))?;
                    if idx == 0 || idx > n {
                        return Err(Error::Parse(format!("variable `{tok}` out of range 1..={n}")));
                    }
                    let pow: u64 =
                        pow.parse().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    exps[idx - 1] += pow;
                } else if tok.starts_with('g') || tok == "0" || tok == "1" {
                    let c: FieldElement =
                        tok.parse().map_err(|_| Error::Parse(format!("bad coefficient `{tok}`")))?;
                    if !ctx.contains(c) {
                        return Err(Error::Parse(format!("coefficient `{tok}` not in the field")));
                    }
                    coeff = ctx.mul(coeff, c);
                } else if let Ok(k) = tok.parse::<i64>() {
                    coeff = ctx.mul(coeff, ctx.from_int(k));
                } else {
                    return Err(Error::Parse(format!("unexpected token `{tok}`")));
                }
            }
            if neg {
                coeff = ctx.neg(coeff);
            }
            raw.push((exps, coeff));
        }
        Ok(Self::reduce(base, raw))
    }
}

impl fmt::Display for ReducedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: usize = a.iter().map(|&x| x as usize).sum();
            let db: usize = b.iter().map(|&x| x as usize).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (t, e) in keys.into_iter().enumerate() {
            if t > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.terms[e])?;
            let mut first = true;
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    write!(f, "{}x{}^{}", if first { " * " } else { " " }, i + 1, a)?;
                    first = false;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: u32, m: u32, chain: &[u32]) -> Arc<CartesianSet> {
        let ctx = Arc::new(FieldCtx::new(p, m, None).unwrap());
        CartesianSet::new(ctx, chain.to_vec()).unwrap()
    }

    #[test]
    fn chain_validation() {
        let ctx = Arc::new(FieldCtx::new(2, 4, None).unwrap());
        assert!(CartesianSet::new(ctx.clone(), vec![2, 1]).is_err());
        assert!(CartesianSet::new(ctx.clone(), vec![1, 3]).is_err());
        assert!(CartesianSet::new(ctx.clone(), vec![0, 2]).is_err());
        let x = CartesianSet::new(ctx, vec![1, 2, 4]).unwrap();
        assert_eq!(x.sizes(), vec![2, 4, 16]);
        assert_eq!(x.len(), 128);
    }

    #[test]
    fn reduce_examples() {
        let x = set(2, 2, &[1, 2]);
        assert_eq!(ReducedPoly::reduce(&x, [(vec![2, 0], FieldElement::ONE)]), ReducedPoly::var(&x, 0));
        assert_eq!(ReducedPoly::reduce(&x, [(vec![0, 7], FieldElement::ONE)]), ReducedPoly::var(&x, 1));
        let p = ReducedPoly::parse(&x, "1 + x1 + x1^2").unwrap();
        assert_eq!(p, ReducedPoly::one(&x));
    }

    #[test]
    fn degree_examples() {
        let x = set(2, 2, &[1, 2]);
        assert_eq!(ReducedPoly::zero(&x).degree(), None);
        let f = ReducedPoly::parse(&x, "(1) * x2 + x1 x2").unwrap_err();
        assert!(matches!(f, Error::Parse(_)));
        let f = ReducedPoly::parse(&x, "x2 - x1 x2").unwrap();
        assert_eq!(f.degree(), Some(2));
        let h = ReducedPoly::parse(&x, "1 - x1").unwrap().mul(&ReducedPoly::parse(&x, "1 - x2^3").unwrap()).unwrap();
        assert_eq!(h.degree(), Some(4));
    }

    #[test]
    fn evaluate_examples() {
        let x = set(2, 2, &[1, 2]);
        let g = x.ctx().generator();
        let f = ReducedPoly::parse(&x, "x2 - x1 x2").unwrap();
        assert_eq!(f.evaluate(&[FieldElement::ZERO, g]).unwrap(), g);
        assert_eq!(f.evaluate(&[FieldElement::ONE, g]).unwrap(), FieldElement::ZERO);
        assert_eq!(ReducedPoly::var(&x, 1).evaluate(&[FieldElement::ONE, g]).unwrap(), g);
        assert_eq!(ReducedPoly::one(&x).evaluate(&[FieldElement::ONE, g]).unwrap(), FieldElement::ONE);
        assert_eq!(f.evaluate(&[g, g]).unwrap_err(), Error::PointNotInX);
    }

    #[test]
    fn interpolate_point_indicator() {
        let x = set(2, 2, &[1, 2]);
        let mut v = vec![FieldElement::ZERO; 8];
        v[0] = FieldElement::ONE;
        let f = ReducedPoly::interpolate(&x, &v).unwrap();
        let expect = ReducedPoly::parse(&x, "1 - x1").unwrap().mul(&ReducedPoly::parse(&x, "1 - x2^3").unwrap()).unwrap();
        assert_eq!(f, expect);
        assert_eq!(f.values(), v);
        assert!(ReducedPoly::interpolate(&x, &v[..3]).is_err());
        assert!(ReducedPoly::interpolate(&x, &vec![FieldElement::ZERO; 8]).unwrap().is_zero());
    }

    #[test]
    fn ring_examples() {
        let x = set(2, 2, &[1, 2]);
        let g = x.ctx().generator();
        let x1 = ReducedPoly::var(&x, 0);
        assert_eq!(x1.mul(&x1).unwrap(), x1);
        let x2 = ReducedPoly::var(&x, 1);
        let mut prod = ReducedPoly::one(&x);
        for root in x.coord(1).to_vec() {
            prod = prod.mul(&x2.sub(&ReducedPoly::constant(&x, root)).unwrap()).unwrap();
        }
        assert!(prod.is_zero());
        let f = ReducedPoly::parse(&x, "g * x2 + x1").unwrap();
        assert_eq!(f.add(&ReducedPoly::zero(&x)).unwrap(), f);
        assert_eq!(f.scale(g).coefficient(&[0, 1]), x.ctx().mul(g, g));
        let other = set(2, 2, &[2, 2]);
        assert_eq!(f.add(&ReducedPoly::one(&other)).unwrap_err(), Error::BaseMismatch);
    }

    #[test]
    fn specialize_examples() {
        let x = set(2, 2, &[1, 2]);
        let f = ReducedPoly::parse(&x, "x1 x2").unwrap();
        let s = f.specialize(0, FieldElement::ONE).unwrap();
        assert_eq!(s, ReducedPoly::var(s.base(), 0));
        let f = ReducedPoly::parse(&x, "x2 - x1 x2").unwrap();
        assert!(f.specialize(0, FieldElement::ONE).unwrap().is_zero());
        assert_eq!(f.specialize(0, x.ctx().generator()).unwrap_err(), Error::ValueNotInKj(1));

        let y = set(2, 2, &[2, 2]);
        let f = ReducedPoly::parse(&y, "1 - x1^3").unwrap().mul(&ReducedPoly::parse(&y, "1 - x2^3").unwrap()).unwrap();
        let s = f.specialize(1, FieldElement::ZERO).unwrap();
        assert_eq!(s, ReducedPoly::parse(s.base(), "1 - x1^3").unwrap());
    }

    #[test]
    fn display_parse_round_trip() {
        let x = set(3, 2, &[1, 2]);
        let f = ReducedPoly::parse(&x, "g^3 * x1^2 x2^5 + 2 * x2 + g^7").unwrap();
        let s = f.to_string();
        assert_eq!(ReducedPoly::parse(&x, &s).unwrap(), f);
        assert_eq!(ReducedPoly::zero(&x).to_string(), "0");
    }
}
