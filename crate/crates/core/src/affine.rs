//! The group Aff(X) of affine bijections of K^n that stabilise X, and the
//! notions built on it: X-equivalence, X-linear functions, X-affine
//! subspaces and factor extraction.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::{self, Codeword};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::linalg::{self, Matrix};
use crate::poly::{CartesianSet, ReducedPoly};

/// `x ↦ A x + β` over the ambient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(rename = "A")]
    pub a: Matrix,
    pub beta: Vec<FieldElement>,
}

impl AffineMap {
    /// Checks that `A` is square, matches `β` and is invertible.
    pub fn new(ctx: &FieldCtx, a: Matrix, beta: Vec<FieldElement>) -> Result<Self> {
        let n = beta.len();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: a.len() });
        }
        if !linalg::is_invertible(ctx, &a) {
            return Err(Error::SingularMatrix);
        }
        Ok(AffineMap { a, beta })
    }

    pub fn identity(n: usize) -> Self {
        let a = (0..n)
            .map(|i| (0..n).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }).collect())
            .collect();
        AffineMap { a, beta: vec![FieldElement::ZERO; n] }
    }

    pub fn translation(beta: Vec<FieldElement>) -> Self {
        AffineMap { a: Self::identity(beta.len()).a, beta }
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n())
    }

    pub fn apply(&self, ctx: &FieldCtx, x: &[FieldElement]) -> Vec<FieldElement> {
        linalg::mat_vec(ctx, &self.a, x)
            .into_iter()
            .zip(&self.beta)
            .map(|(y, &b)| ctx.add(y, b))
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, ctx: &FieldCtx, other: &AffineMap) -> AffineMap {
        AffineMap { a: linalg::mat_mul(ctx, &self.a, &other.a), beta: self.apply(ctx, &other.beta) }
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Result<AffineMap> {
        let a = linalg::inverse(ctx, &self.a)?;
        let beta = linalg::mat_vec(ctx, &a, &self.beta).into_iter().map(|b| ctx.neg(b)).collect();
        Ok(AffineMap { a, beta })
    }

    /// `perm[t]` is the index of the image of the t-th point, or `None` if
    /// some point leaves X.
    pub fn permutation(&self, set: &CartesianSet) -> Option<Vec<u32>> {
        if self.n() != set.n() {
            return None;
        }
        let ctx = set.ctx();
        (0..set.len())
            .map(|t| set.index_of(&self.apply(ctx, &set.point(t))).map(|i| i as u32))
            .collect()
    }

    /// Whether `ψ(X) ⊆ X` (hence `ψ(X) = X`, the map being injective).
    pub fn preserves(&self, set: &CartesianSet) -> bool {
        self.permutation(set).is_some()
    }
}

/// The enumerated group Aff(X) with the point permutation of every element.
/// The identity is element 0.
pub struct AffineGroup {
    set: Arc<CartesianSet>,
    maps: Vec<AffineMap>,
    perms: Vec<Vec<u32>>,
}

impl AffineGroup {
    /// Backtracking over the columns of `A`. Column `j` must satisfy
    /// `ψ(β + c e_j) - ψ(β) = c A e_j ∈ X - X = X` for all `c ∈ K_j`, which
    /// prunes every column that can not occur; surviving candidates are
    /// combined with an incremental independence test, then every `β ∈ X`
    /// is tried and the full point check is run.
    pub fn enumerate(set: &Arc<CartesianSet>, budget: u64) -> Result<Self> {
        let ctx = set.ctx().clone();
        let n = set.n();
        let q = ctx.order() as usize;
        let elems: Vec<FieldElement> = ctx.elements().collect();
        let all_vectors = |t: usize| -> Vec<FieldElement> {
            let mut v = vec![FieldElement::ZERO; n];
            let mut u = t;
            for i in (0..n).rev() {
                v[i] = elems[u % q];
                u /= q;
            }
            v
        };
        let total = q.pow(n as u32);
        let candidates: Vec<Vec<Vec<FieldElement>>> = (0..n)
            .map(|j| {
                (0..total)
                    .map(all_vectors)
                    .filter(|col| col.iter().any(|x| !x.is_zero()))
                    .filter(|col| {
                        set.coord(j).iter().all(|&c| {
                            let v: Vec<FieldElement> = col.iter().map(|&x| ctx.mul(c, x)).collect();
                            set.contains(&v)
                        })
                    })
                    .collect()
            })
            .collect();
        let required = candidates
            .iter()
            .fold(set.len() as u128, |acc, c| acc.saturating_mul(c.len() as u128));
        if required > budget as u128 {
            return Err(Error::BudgetExceeded { required, budget });
        }

        let mut matrices = Vec::new();
        let mut cols: Vec<Vec<FieldElement>> = Vec::with_capacity(n);
        fn rec(
            ctx: &FieldCtx,
            candidates: &[Vec<Vec<FieldElement>>],
            cols: &mut Vec<Vec<FieldElement>>,
            out: &mut Vec<Matrix>,
        ) {
            let j = cols.len();
            if j == candidates.len() {
                let n = cols.len();
                out.push((0..n).map(|i| (0..n).map(|c| cols[c][i]).collect()).collect());
                return;
            }
            for cand in &candidates[j] {
                cols.push(cand.clone());
                if linalg::rank(ctx, cols) == cols.len() {
                    rec(ctx, candidates, cols, out);
                }
                cols.pop();
            }
        }
        rec(&ctx, &candidates, &mut cols, &mut matrices);

        let mut maps = Vec::new();
        let mut perms = Vec::new();
        for a in matrices {
            for t in 0..set.len() {
                let map = AffineMap { a: a.clone(), beta: set.point(t) };
                if let Some(p) = map.permutation(set) {
                    maps.push(map);
                    perms.push(p);
                }
            }
        }
        let mut order: Vec<usize> = (0..maps.len()).collect();
        order.sort_by_key(|&i| (!maps[i].is_identity(), maps[i].clone()));
        let maps = order.iter().map(|&i| maps[i].clone()).collect();
        let perms = order.iter().map(|&i| std::mem::take(&mut perms[i])).collect();
        Ok(AffineGroup { set: set.clone(), maps, perms })
    }

    pub fn set(&self) -> &Arc<CartesianSet> {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &AffineMap {
        &self.maps[i]
    }

    pub fn perm(&self, i: usize) -> &[u32] {
        &self.perms[i]
    }

    /// Values of `f ∘ φ_i` given the values of `f`.
    pub fn pull_values(&self, i: usize, values: &[FieldElement]) -> Vec<FieldElement> {
        self.perms[i].iter().map(|&p| values[p as usize]).collect()
    }

    /// Distinct functions `x_i ∘ φ` (0-based `i`) with the first map
    /// realising each, in group order.
    pub fn coordinate_images(&self, i: usize) -> Vec<(Vec<FieldElement>, usize)> {
        let coord: Vec<FieldElement> = (0..self.set.len())
            .map(|t| self.set.coord(i)[self.set.digit(t, i)])
            .collect();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in 0..self.len() {
            let v = self.pull_values(g, &coord);
            if seen.insert(v.clone()) {
                out.push((v, g));
            }
        }
        out
    }
}

/// The reduced polynomial of `f ∘ ψ`, by substituting `A x + β` and
/// reducing.
pub fn pullback(f: &ReducedPoly, psi: &AffineMap) -> Result<ReducedPoly> {
    let base = f.base();
    if !psi.preserves(base) {
        return Err(Error::NotXPreserving);
    }
    let n = base.n();
    let linear: Vec<ReducedPoly> = (0..n)
        .map(|i| {
            let mut raw: Vec<(Vec<u64>, FieldElement)> = (0..n)
                .map(|j| {
                    let mut e = vec![0u64; n];
                    e[j] = 1;
                    (e, psi.a[i][j])
                })
                .collect();
            raw.push((vec![0; n], psi.beta[i]));
            ReducedPoly::reduce(base, raw)
        })
        .collect();
    let mut powers: Vec<Vec<ReducedPoly>> = linear.iter().map(|l| vec![ReducedPoly::one(base), l.clone()]).collect();
    let mut out = ReducedPoly::zero(base);
    for (e, &c) in f.terms() {
        let mut term = ReducedPoly::constant(base, c);
        for (i, &a) in e.iter().enumerate() {
            while powers[i].len() <= a as usize {
                let next = powers[i].last().unwrap().mul(&linear[i])?;
                powers[i].push(next);
            }
            term = term.mul(&powers[i][a as usize])?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// A witness `φ` with `f = g ∘ φ`, or `None`.
pub fn x_equivalent(f: &ReducedPoly, g: &ReducedPoly, group: &AffineGroup) -> Option<AffineMap> {
    if f.degree() != g.degree() {
        return None;
    }
    let (fv, gv) = (f.values(), g.values());
    x_equivalent_values(&fv, &gv, group).map(|i| group.map(i).clone())
}

/// Index of the first group element `φ` with `f = g ∘ φ` on value vectors.
pub fn x_equivalent_values(f: &[FieldElement], g: &[FieldElement], group: &AffineGroup) -> Option<usize> {
    let weight = |v: &[FieldElement]| v.iter().filter(|x| !x.is_zero()).count();
    if weight(f) != weight(g) {
        return None;
    }
    (0..group.len()).find(|&i| group.perm(i).iter().zip(f).all(|(&p, &x)| g[p as usize] == x))
}

/// `(i, φ)` with `x_i ∘ φ = f` (0-based `i`), or `None` if `f` is not
/// X-linear.
pub fn is_x_linear(f: &ReducedPoly, group: &AffineGroup) -> Result<Option<(usize, AffineMap)>> {
    if f.degree() != Some(1) {
        return Err(Error::DegreeNotOne(f.degree()));
    }
    let values = f.values();
    let set = group.set();
    for i in 0..set.n() {
        let coord: Vec<FieldElement> = (0..set.len()).map(|t| set.coord(i)[set.digit(t, i)]).collect();
        if let Some(g) = (0..group.len()).find(|&g| {
            group.perm(g).iter().zip(&values).all(|(&p, &v)| coord[p as usize] == v)
        }) {
            return Ok(Some((i, group.map(g).clone())));
        }
    }
    Ok(None)
}

/// `g` with `f = g h` on X. Off `Z_X(h)` the quotient is forced to be
/// `f / h`; on `Z_X(h)` the values are chosen to give `g` the least
/// possible degree, which is `deg f - 1` when `h` is X-linear.
pub fn factor_out(f: &ReducedPoly, h: &ReducedPoly) -> Result<ReducedPoly> {
    let base = f.base();
    if **base != **h.base() {
        return Err(Error::BaseMismatch);
    }
    let ctx = base.ctx();
    let (fv, hv) = (f.values(), h.values());
    let mut forced = Vec::new();
    for t in 0..fv.len() {
        if hv[t].is_zero() {
            if !fv[t].is_zero() {
                return Err(Error::ZeroSetNotContained);
            }
        } else {
            forced.push((t, ctx.div(fv[t], hv[t])?));
        }
    }
    let lower = match (f.degree(), h.degree()) {
        (Some(a), Some(b)) => a.saturating_sub(b),
        _ => 0,
    };
    let top = code::degree_bound(&base.sizes());
    for deg in lower..=top {
        let basis = code::monomial_basis(base, deg);
        let columns: Vec<Vec<FieldElement>> = basis
            .iter()
            .map(|e| ReducedPoly::monomial(base, FieldElement::ONE, e).values())
            .collect();
        // rows: one equation per forced point, unknowns: basis coefficients
        let nvars = basis.len();
        let mut system: Matrix = forced
            .iter()
            .map(|&(t, v)| {
                let mut row: Vec<FieldElement> = columns.iter().map(|c| c[t]).collect();
                row.push(v);
                row
            })
            .collect();
        let pivots = linalg::rref(ctx, &mut system);
        if pivots.last() == Some(&nvars) {
            continue;
        }
        let mut coeffs = vec![FieldElement::ZERO; nvars];
        for (row, &p) in system.iter().zip(&pivots) {
            coeffs[p] = row[nvars];
        }
        let raw = basis
            .iter()
            .zip(coeffs)
            .map(|(e, c)| (e.iter().map(|&a| a as u64).collect::<Vec<_>>(), c));
        return Ok(ReducedPoly::reduce(base, raw.collect::<Vec<_>>()));
    }
    unreachable!("every function on X has degree at most the degree bound")
}

/// `g` with `f = g ∏ (h - α_t)` for an X-linear `h` and distinct roots taken
/// from the value set of `h`.
pub fn divide_multi(
    f: &ReducedPoly,
    h: &ReducedPoly,
    alphas: &[FieldElement],
    group: &AffineGroup,
) -> Result<ReducedPoly> {
    if alphas.is_empty() {
        return Ok(f.clone());
    }
    let Some((i, _)) = is_x_linear(h, group)? else {
        return Err(Error::InvalidShift(0, "divisor is not X-linear".into()));
    };
    let base = f.base();
    let mut seen = HashSet::new();
    let mut g = f.clone();
    for (t, &alpha) in alphas.iter().enumerate() {
        if !base.in_coord(i, alpha) {
            return Err(Error::InvalidShift(t, format!("{alpha} is not in K_{}", i + 1)));
        }
        if !seen.insert(alpha) {
            return Err(Error::InvalidShift(t, format!("{alpha} is repeated")));
        }
        let shifted = h.sub(&ReducedPoly::constant(base, alpha))?;
        g = factor_out(&g, &shifted).map_err(|_| {
            Error::InvalidShift(t, format!("the zero set of h - {alpha} is not contained in Z_X(f)"))
        })?;
    }
    Ok(g)
}

/// `base_point + span(directions)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineSubspace {
    pub base_point: Vec<FieldElement>,
    pub directions: Vec<Vec<FieldElement>>,
}

impl AffineSubspace {
    pub fn new(ctx: &FieldCtx, base_point: Vec<FieldElement>, directions: Vec<Vec<FieldElement>>) -> Result<Self> {
        if directions.iter().any(|d| d.len() != base_point.len()) {
            return Err(Error::LengthMismatch {
                expected: base_point.len(),
                got: directions.iter().map(Vec::len).find(|&l| l != base_point.len()).unwrap(),
            });
        }
        if linalg::rank(ctx, &directions) != directions.len() {
            return Err(Error::DependentDirections);
        }
        Ok(AffineSubspace { base_point, directions })
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn contains(&self, ctx: &FieldCtx, point: &[FieldElement]) -> bool {
        let diff: Vec<FieldElement> = point.iter().zip(&self.base_point).map(|(&a, &b)| ctx.sub(a, b)).collect();
        let mut rows = self.directions.clone();
        rows.push(diff);
        linalg::rank(ctx, &rows) == self.dim()
    }

    /// Indices of the points of X lying on the subspace.
    pub fn points_in(&self, set: &CartesianSet) -> Vec<usize> {
        (0..set.len()).filter(|&t| self.contains(set.ctx(), &set.point(t))).collect()
    }

    /// `ψ(⟨e_i : i ∈ coords⟩)`.
    pub fn image_of_coordinates(psi: &AffineMap, coords: &[usize]) -> Self {
        AffineSubspace {
            base_point: psi.beta.clone(),
            directions: coords.iter().map(|&c| psi.a.iter().map(|row| row[c]).collect()).collect(),
        }
    }
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// A witness `(ψ, I)` with `ψ(⟨e_i : i ∈ I⟩) = G`, or `None` if `G` is not
/// X-affine. Returns the first witness in group order, coordinate sets in
/// lexicographic order.
pub fn is_x_affine_subspace(g: &AffineSubspace, group: &AffineGroup) -> Option<(AffineMap, Vec<usize>)> {
    let set = group.set();
    let ctx = set.ctx();
    let r = g.dim();
    let coord_sets = subsets(set.n(), r);
    for psi in group.maps() {
        if !g.contains(ctx, &psi.beta) {
            continue;
        }
        for coords in &coord_sets {
            let image = AffineSubspace::image_of_coordinates(psi, coords);
            let mut rows = g.directions.clone();
            rows.extend(image.directions);
            if linalg::rank(ctx, &rows) == r {
                return Some((psi.clone(), coords.clone()));
            }
        }
    }
    None
}

/// An X-affine subspace of Aff(X)-type `ψ(V_I)`, stored by its trace on X.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XAffineSubspace {
    pub dim: usize,
    /// Sorted point indices of `G ∩ X`.
    pub points: Vec<usize>,
    /// First witness: group index and coordinate set.
    pub witness: (usize, Vec<usize>),
    /// Every coordinate set `I` with `G = ψ(V_I)` for some `ψ`.
    pub coord_sets: Vec<Vec<usize>>,
}

impl XAffineSubspace {
    /// `δ_{X_G}(d)`, the minimum over all realising coordinate sets.
    pub fn delta(&self, set: &CartesianSet, d: usize) -> usize {
        let sizes = set.sizes();
        self.coord_sets
            .iter()
            .map(|c| {
                let sub: Vec<usize> = c.iter().map(|&i| sizes[i]).collect();
                code::delta_sizes(&sub, d as i64).expect("d >= 0")
            })
            .min()
            .expect("at least one witness")
    }
}

/// All X-affine subspaces of the listed dimensions, in discovery order
/// (group order, then coordinate sets lexicographically).
pub fn x_affine_subspaces(group: &AffineGroup, dims: &[usize], budget: u64) -> Result<Vec<XAffineSubspace>> {
    let set = group.set();
    let n = set.n();
    let work: u128 = dims
        .iter()
        .map(|&r| subsets(n, r).len() as u128)
        .sum::<u128>()
        .saturating_mul(group.len() as u128)
        .saturating_mul(set.len() as u128);
    if work > budget as u128 {
        return Err(Error::BudgetExceeded { required: work, budget });
    }
    let mut out: Vec<XAffineSubspace> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for &r in dims {
        let coord_sets = subsets(n, r);
        let traces: Vec<Vec<usize>> = coord_sets
            .iter()
            .map(|c| {
                (0..set.len())
                    .filter(|&t| (0..n).all(|j| c.contains(&j) || set.digit(t, j) == 0))
                    .collect()
            })
            .collect();
        for g in 0..group.len() {
            let perm = group.perm(g);
            for (c, trace) in coord_sets.iter().zip(&traces) {
                let mut pts: Vec<usize> = trace.iter().map(|&t| perm[t] as usize).collect();
                pts.sort_unstable();
                match index.get(&pts) {
                    Some(&i) => {
                        if !out[i].coord_sets.contains(c) {
                            out[i].coord_sets.push(c.clone());
                        }
                    }
                    None => {
                        index.insert(pts.clone(), out.len());
                        out.push(XAffineSubspace {
                            dim: r,
                            points: pts,
                            witness: (g, c.clone()),
                            coord_sets: vec![c.clone()],
                        });
                    }
                }
            }
        }
    }
    for s in &mut out {
        s.coord_sets.sort();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportViolation {
    pub subspace: usize,
    pub intersection: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportLemmaReport {
    pub subspaces_checked: usize,
    pub violations: Vec<SupportViolation>,
}

impl SupportLemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `S ∩ G = ∅` or `|S ∩ G| >= δ_{X_G}(d)` for every listed G.
pub fn support_lemma_check(
    word: &Codeword,
    set: &CartesianSet,
    d: usize,
    subspaces: &[XAffineSubspace],
) -> SupportLemmaReport {
    let violations = subspaces
        .iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let hit = g.points.iter().filter(|&&t| !word.values[t].is_zero()).count();
            let bound = g.delta(set, d);
            (hit > 0 && hit < bound).then_some(SupportViolation { subspace: i, intersection: hit, bound })
        })
        .collect();
    SupportLemmaReport { subspaces_checked: subspaces.len(), violations }
}

/// An X-affine hyperplane `H = ψ(V_{k+1})` with `S ∩ H = ∅`, where
/// `V_{k+1}` is spanned by every basis vector except `e_{k+1}`.
pub fn find_avoiding_hyperplane(
    support: &[usize],
    set: &Arc<CartesianSet>,
    d: usize,
    group: &AffineGroup,
    budget: u64,
) -> Result<Option<AffineSubspace>> {
    if support.is_empty() {
        return Err(Error::OutOfRange("the point set must be nonempty".into()));
    }
    let (k, _) = code::decompose(set, d)?;
    let sizes = set.sizes();
    let delta = code::min_distance_formula(set, d);
    if support.len() * sizes[k] >= (sizes[k] + 1) * delta {
        return Err(Error::HypothesisViolated(1));
    }
    let dims: Vec<usize> = (1..set.n()).collect();
    let catalog = x_affine_subspaces(group, &dims, budget)?;
    let mut values = vec![FieldElement::ZERO; set.len()];
    for &t in support {
        values[t] = FieldElement::ONE;
    }
    if !support_lemma_check(&Codeword::new(values), set, d, &catalog).passed() {
        return Err(Error::HypothesisViolated(2));
    }
    let coords: Vec<usize> = (0..set.n()).filter(|&i| i != k).collect();
    let trace: Vec<usize> = (0..set.len()).filter(|&t| set.digit(t, k) == 0).collect();
    let in_s: HashSet<usize> = support.iter().copied().collect();
    let mut seen = HashSet::new();
    for g in 0..group.len() {
        let perm = group.perm(g);
        let mut pts: Vec<usize> = trace.iter().map(|&t| perm[t] as usize).collect();
        pts.sort_unstable();
        if !seen.insert(pts.clone()) {
            continue;
        }
        if pts.iter().all(|t| !in_s.contains(t)) {
            return Ok(Some(AffineSubspace::image_of_coordinates(group.map(g), &coords)));
        }
    }
    Ok(None)
}
