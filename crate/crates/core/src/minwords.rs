//! Minimal-weight codewords: canonical forms, exhaustive certification of
//! their shape up to Aff(X), and the numeric and structural lemmas behind it.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::{self, AffineGroup, AffineMap};
use crate::code::{self, Codeword};
use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::poly::{CartesianSet, ReducedPoly};
use crate::search;

/// `σ ∏_{i≠j, i≤k+1} (1 - x_i^{d_i-1}) ∏_t (x_j - α_t)` with `j` 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub j: usize,
    pub sigma: FieldElement,
    pub alphas: Vec<FieldElement>,
}

/// `(k, ℓ)` for `1 <= d <= Σ (d_i - 1)`; the top value gives `k = n - 1`,
/// `ℓ = d_n - 1`.
pub fn decompose_inclusive(set: &CartesianSet, d: usize) -> Result<(usize, usize)> {
    let sizes = set.sizes();
    code::decompose_sizes(&sizes, d)
        .ok_or(Error::OutOfRelevantRange { d, upper: code::degree_bound(&sizes) + 1 })
}

fn one_minus_top_power(set: &Arc<CartesianSet>, i: usize) -> ReducedPoly {
    let mut e = vec![0u16; set.n()];
    e[i] = (set.size(i) - 1) as u16;
    let top = ReducedPoly::monomial(set, FieldElement::ONE, &e);
    ReducedPoly::one(set).sub(&top).expect("same base")
}

fn shifted_var(set: &Arc<CartesianSet>, i: usize, alpha: FieldElement) -> ReducedPoly {
    ReducedPoly::var(set, i).sub(&ReducedPoly::constant(set, alpha)).expect("same base")
}

/// The reduced polynomial of a canonical form.
pub fn canonical_minimal(set: &Arc<CartesianSet>, d: usize, form: &CanonicalForm) -> Result<ReducedPoly> {
    let (k, l) = decompose_inclusive(set, d)?;
    let sizes = set.sizes();
    let need = sizes[k] - l;
    if form.j == 0 || form.j > k + 1 {
        return Err(Error::IndexOutOfRange(format!("j = {} outside 1..={}", form.j, k + 1)));
    }
    let j = form.j - 1;
    if sizes[j] < need {
        return Err(Error::InadmissibleJ { j: form.j, dj: sizes[j], need });
    }
    let expected = sizes[j] - need;
    if form.alphas.len() != expected {
        return Err(Error::AlphaCountMismatch { expected, got: form.alphas.len() });
    }
    if form.alphas.iter().any(|&a| !set.in_coord(j, a)) {
        return Err(Error::AlphaNotInKj(form.j));
    }
    let mut distinct = form.alphas.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != expected {
        return Err(Error::AlphaCountMismatch { expected, got: distinct.len() });
    }
    if form.sigma.is_zero() || !set.ctx().contains(form.sigma) {
        return Err(Error::OutOfRange("sigma must be a nonzero field element".into()));
    }
    let mut f = ReducedPoly::constant(set, form.sigma);
    for i in (0..=k).filter(|&i| i != j) {
        f = f.mul(&one_minus_top_power(set, i))?;
    }
    for &a in &form.alphas {
        f = f.mul(&shifted_var(set, j, a))?;
    }
    Ok(f)
}

fn combinations<T: Copy>(items: &[T], r: usize) -> Vec<Vec<T>> {
    fn rec<T: Copy>(items: &[T], start: usize, r: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, 0, r, &mut Vec::new(), &mut out);
    out
}

/// Every admissible canonical form, sorted by `(j, σ, alphas)`.
pub fn admissible_forms(set: &Arc<CartesianSet>, d: usize) -> Result<Vec<CanonicalForm>> {
    let (k, l) = decompose_inclusive(set, d)?;
    let sizes = set.sizes();
    let need = sizes[k] - l;
    let sigmas: Vec<FieldElement> = set.ctx().elements().skip(1).collect();
    let mut out = Vec::new();
    for j in (0..=k).filter(|&j| sizes[j] >= need) {
        let subsets = combinations(set.coord(j), sizes[j] - need);
        for &sigma in &sigmas {
            for alphas in &subsets {
                out.push(CanonicalForm { j: j + 1, sigma, alphas: alphas.clone() });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The forms of the two special cases: `σ ∏_{i≤ℓ} (x_1 - α_i)` when `k = 0`,
/// and `σ ∏_{i≤k+1} (1 - x_i^{d_i-1})` when `ℓ = d_{k+1} - 1`.
pub fn canonical_special_cases(set: &Arc<CartesianSet>, d: usize) -> Result<Vec<ReducedPoly>> {
    let (k, l) = decompose_inclusive(set, d)?;
    let sigmas: Vec<FieldElement> = set.ctx().elements().skip(1).collect();
    let mut out = Vec::new();
    if k == 0 {
        for alphas in combinations(set.coord(0), l) {
            let mut base = ReducedPoly::one(set);
            for &a in &alphas {
                base = base.mul(&shifted_var(set, 0, a))?;
            }
            for &s in &sigmas {
                out.push(base.scale(s));
            }
        }
    } else if l == set.size(k) - 1 {
        let mut base = ReducedPoly::one(set);
        for i in 0..=k {
            base = base.mul(&one_minus_top_power(set, i))?;
        }
        for &s in &sigmas {
            out.push(base.scale(s));
        }
    } else {
        return Err(Error::CaseNotApplicable(format!("k = {k} > 0 and ℓ = {l} < d_{} - 1", k + 1)));
    }
    Ok(out)
}

/// Every codeword of weight exactly `δ_X(d)`, sorted by value vector.
pub fn enumerate_minimal_words(set: &Arc<CartesianSet>, d: usize, budget: u64) -> Result<Vec<Codeword>> {
    decompose_inclusive(set, d)?;
    let delta = code::min_distance_formula(set, d);
    search::words_in_weight_range(set, d, delta, delta, budget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinwordParams {
    pub d: usize,
    pub k: usize,
    #[serde(rename = "ℓ")]
    pub l: usize,
    pub delta: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordMatch {
    pub word_index: usize,
    pub phi: AffineMap,
    pub form: CanonicalForm,
}

/// Forms whose Aff(X)-orbits coincide, with the number of words in the orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitClass {
    pub forms: Vec<usize>,
    pub js: Vec<usize>,
    pub words: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DgmShapeCheck {
    pub checked: usize,
    pub mismatches: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub params: MinwordParams,
    pub group_order: usize,
    pub count_minimal: usize,
    pub forms: Vec<CanonicalForm>,
    pub matches: Vec<WordMatch>,
    /// Indices of minimal words no canonical form reaches.
    pub failures: Vec<usize>,
    /// Forms with an image outside the minimal words.
    pub form_defects: Vec<usize>,
    pub orbits: Vec<OrbitClass>,
    /// Present on GRM instances (every `K_i` equal to the ambient field).
    pub dgm_shape: Option<DgmShapeCheck>,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.form_defects.is_empty()
            && self.dgm_shape.as_ref().is_none_or(|c| c.mismatches.is_empty())
    }
}

/// The shared data of one verification run: the group and the words.
pub struct Instance {
    pub set: Arc<CartesianSet>,
    pub d: usize,
    pub k: usize,
    pub l: usize,
    pub delta: usize,
    pub group: AffineGroup,
    pub words: Vec<Codeword>,
    pub budget: u64,
    pub timings: Vec<(String, Duration)>,
}

impl Instance {
    pub fn new(set: &Arc<CartesianSet>, d: usize, budget: u64) -> Result<Self> {
        let (k, l) = decompose_inclusive(set, d)?;
        let start = Instant::now();
        let group = AffineGroup::enumerate(set, budget)?;
        let t_group = start.elapsed();
        let start = Instant::now();
        let words = enumerate_minimal_words(set, d, budget)?;
        let t_words = start.elapsed();
        Ok(Instance {
            set: set.clone(),
            d,
            k,
            l,
            delta: code::min_distance_formula(set, d),
            group,
            words,
            budget,
            timings: vec![("group".into(), t_group), ("minimal_words".into(), t_words)],
        })
    }

    fn params(&self) -> MinwordParams {
        MinwordParams { d: self.d, k: self.k, l: self.l, delta: self.delta, dim: code::dimension(&self.set, self.d) }
    }

    fn is_grm(&self) -> bool {
        self.set.chain().iter().all(|&e| e == self.set.ctx().degree())
    }
}

/// Matches every minimal word to its first `(form, φ)` witness with
/// `word = canonical ∘ φ`, forms in sorted order and maps in group order.
pub fn verify_dgm_extension(set: &Arc<CartesianSet>, d: usize, budget: u64) -> Result<VerificationReport> {
    let inst = Instance::new(set, d, budget)?;
    verify_instance(&inst)
}

pub fn verify_instance(inst: &Instance) -> Result<VerificationReport> {
    let start = Instant::now();
    let set = &inst.set;
    let forms = admissible_forms(set, inst.d)?;
    let index: HashMap<&[FieldElement], usize> =
        inst.words.iter().enumerate().map(|(i, w)| (w.values.as_slice(), i)).collect();
    let scans: Vec<Result<FormScan>> = forms.par_iter().map(|form| scan_form(inst, form, &index)).collect();
    let mut witness: Vec<Option<(usize, usize)>> = vec![None; inst.words.len()];
    let mut orbit_min = Vec::with_capacity(forms.len());
    let mut orbit_size = Vec::with_capacity(forms.len());
    let mut form_defects = Vec::new();
    let mut canonical = Vec::with_capacity(forms.len());
    for (fi, scan) in scans.into_iter().enumerate() {
        let scan = scan?;
        for (w, g) in scan.first_hits {
            witness[w].get_or_insert((fi, g));
        }
        if scan.defect {
            form_defects.push(fi);
        }
        orbit_min.push(scan.orbit_min);
        orbit_size.push(scan.orbit_size);
        canonical.push(scan.poly);
    }

    let mut matches = Vec::new();
    let mut failures = Vec::new();
    for (w, wit) in witness.iter().enumerate() {
        match wit {
            Some((fi, g)) => matches.push(WordMatch {
                word_index: w,
                phi: inst.group.map(*g).clone(),
                form: forms[*fi].clone(),
            }),
            None => failures.push(w),
        }
    }

    let mut classes: Vec<(usize, OrbitClass)> = Vec::new();
    for fi in 0..forms.len() {
        let key = orbit_min[fi].unwrap_or(usize::MAX);
        match classes.iter_mut().find(|(k, _)| *k == key) {
            Some((_, c)) => {
                c.forms.push(fi);
                if !c.js.contains(&forms[fi].j) {
                    c.js.push(forms[fi].j);
                }
            }
            None => classes.push((key, OrbitClass { forms: vec![fi], js: vec![forms[fi].j], words: orbit_size[fi] })),
        }
    }
    let orbits = classes.into_iter().map(|(_, c)| c).collect();

    let dgm_shape = if inst.is_grm() {
        let mut used: Vec<usize> = matches
            .iter()
            .map(|m| forms.binary_search(&m.form).expect("listed form"))
            .collect();
        used.sort_unstable();
        used.dedup();
        let mismatches = used
            .iter()
            .copied()
            .filter(|&fi| !dgm_shape(inst, &forms[fi], &canonical[fi]))
            .collect();
        Some(DgmShapeCheck { checked: used.len(), mismatches })
    } else {
        None
    };

    let mut timings = inst.timings.clone();
    timings.push(("matching".into(), start.elapsed()));
    Ok(VerificationReport {
        params: inst.params(),
        group_order: inst.group.len(),
        count_minimal: inst.words.len(),
        forms,
        matches,
        failures,
        form_defects,
        orbits,
        dgm_shape,
        timings,
    })
}

struct FormScan {
    poly: ReducedPoly,
    /// `(word, first map)` for every word in the orbit, by increasing map.
    first_hits: Vec<(usize, usize)>,
    defect: bool,
    orbit_min: Option<usize>,
    orbit_size: usize,
}

fn scan_form(inst: &Instance, form: &CanonicalForm, index: &HashMap<&[FieldElement], usize>) -> Result<FormScan> {
    let poly = canonical_minimal(&inst.set, inst.d, form)?;
    let values = poly.values();
    let mut hit = vec![false; inst.words.len()];
    let mut first_hits = Vec::new();
    let mut defect = false;
    for g in 0..inst.group.len() {
        match index.get(inst.group.pull_values(g, &values).as_slice()) {
            Some(&w) if !hit[w] => {
                hit[w] = true;
                first_hits.push((w, g));
            }
            Some(_) => {}
            None => defect = true,
        }
    }
    Ok(FormScan {
        poly,
        orbit_min: first_hits.iter().map(|&(w, _)| w).min(),
        orbit_size: first_hits.len(),
        first_hits,
        defect,
    })
}

/// Swaps variables `a` and `b` of a reduced polynomial.
fn swap_vars(f: &ReducedPoly, a: usize, b: usize) -> ReducedPoly {
    let raw: Vec<(Vec<u64>, FieldElement)> = f
        .terms()
        .iter()
        .map(|(e, &c)| {
            let mut e: Vec<u64> = e.iter().map(|&x| x as u64).collect();
            e.swap(a, b);
            (e, c)
        })
        .collect();
    ReducedPoly::reduce(f.base(), raw)
}

/// Checks that a canonical form on a GRM instance equals
/// `α ∏_{i≤k} (X_i^{q-1} - 1) ∏_t (X_{k+1} - β_t)` with `α = σ (-1)^k`,
/// `β_t = α_t`, after exchanging coordinates `j` and `k+1`, and that the
/// exchange lies in Aff(X).
fn dgm_shape(inst: &Instance, form: &CanonicalForm, canonical: &ReducedPoly) -> bool {
    let set = &inst.set;
    let ctx = set.ctx();
    let k = inst.k;
    let q = ctx.order() as usize;
    if form.alphas.len() != inst.l {
        return false;
    }
    let sign = if k % 2 == 0 { FieldElement::ONE } else { ctx.neg(FieldElement::ONE) };
    let mut dgm = ReducedPoly::constant(set, ctx.mul(form.sigma, sign));
    for i in 0..k {
        let mut e = vec![0u16; set.n()];
        e[i] = (q - 1) as u16;
        let factor = ReducedPoly::monomial(set, FieldElement::ONE, &e).sub(&ReducedPoly::one(set)).expect("same base");
        dgm = dgm.mul(&factor).expect("same base");
    }
    for &b in &form.alphas {
        dgm = dgm.mul(&shifted_var(set, k, b)).expect("same base");
    }
    let j = form.j - 1;
    let swapped = swap_vars(&dgm, j, k);
    let mut swap = AffineMap::identity(set.n());
    swap.a.swap(j, k);
    swapped == *canonical && swap.preserves(set)
}

/// A degree-1 factor `h = x_{k+1} ∘ φ` of `f`, with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorWitness {
    pub h: ReducedPoly,
    pub phi: AffineMap,
}

fn fatores_bound_ok(set: &CartesianSet, k: usize, delta: usize, weight: usize) -> bool {
    let dk1 = set.size(k);
    weight * dk1 < (dk1 + 1) * delta
}

/// A degree-1 `h`, X-equivalent to `x_{k+1}`, with `Z_X(h) ⊆ Z_X(f)`, for a
/// nonzero `f` with `|f| < (1 + 1/d_{k+1}) δ_X(d)`.
pub fn check_fatores(f: &Codeword, set: &Arc<CartesianSet>, d: usize, group: &AffineGroup) -> Result<Option<FactorWitness>> {
    let (k, _) = decompose_inclusive(set, d)?;
    let delta = code::min_distance_formula(set, d);
    if f.is_zero() || !fatores_bound_ok(set, k, delta, f.weight) {
        let dk1 = set.size(k);
        return Err(Error::WeightBoundViolated {
            weight: f.weight,
            bound: format!("(1 + 1/{dk1}) * {delta}"),
        });
    }
    let images = group.coordinate_images(k);
    Ok(find_factor(f, &images).map(|(hv, g)| FactorWitness {
        h: ReducedPoly::interpolate(set, &hv).expect("length matches"),
        phi: group.map(g).clone(),
    }))
}

fn find_factor(f: &Codeword, images: &[(Vec<FieldElement>, usize)]) -> Option<(Vec<FieldElement>, usize)> {
    images
        .iter()
        .find(|(hv, _)| hv.iter().zip(&f.values).all(|(h, v)| !h.is_zero() || v.is_zero()))
        .cloned()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderRecord {
    pub j: usize,
    pub mm: usize,
    /// `(d_j - mm) δ_{X_ĵ}(d - mm)`; absent when `d - mm < 0` (zero code).
    pub lhs: Option<usize>,
    pub rhs: usize,
    pub equality_predicted: bool,
    pub equality_actual: bool,
}

impl LadderRecord {
    pub fn consistent(&self) -> bool {
        self.equality_predicted == self.equality_actual && self.lhs.is_none_or(|l| l >= self.rhs)
    }
}

/// Evaluates the inequality `(d_j - mm) δ_{X_ĵ}(d - mm) >= δ_X(d)` and the
/// equality cases predicted for `mm = 0`, `j <= k` and `j = k + 1`.
/// `j` is 1-based.
pub fn numeric_ladder(set: &CartesianSet, d: usize, j: usize, mm: usize) -> Result<LadderRecord> {
    let (k, l) = code::decompose(set, d)?;
    let sizes = set.sizes();
    if j == 0 || j > k + 1 {
        return Err(Error::IndexOutOfRange(format!("j = {j} outside 1..={}", k + 1)));
    }
    let dj = sizes[j - 1];
    if mm >= dj {
        return Err(Error::IndexOutOfRange(format!("mm = {mm} outside 0..{dj}")));
    }
    let rest: Vec<usize> = sizes.iter().enumerate().filter(|&(i, _)| i != j - 1).map(|(_, &s)| s).collect();
    let lhs = code::delta_sizes(&rest, d as i64 - mm as i64).map(|delta| (dj - mm) * delta);
    let rhs = code::min_distance_formula(set, d);
    let dk1 = sizes[k];
    let equality_predicted = if mm == 0 {
        dj == dk1 - l || sizes.get(k + 1) == Some(&dj)
    } else if j <= k {
        mm == dj - 1 || (dj > dk1 - l && mm == l + dj - dk1)
    } else {
        mm == l || (mm == dk1 - 1 && k > 0 && sizes[k - 1] >= dk1 - l)
    };
    Ok(LadderRecord { j, mm, lhs, rhs, equality_predicted, equality_actual: lhs == Some(rhs) })
}

/// Every ladder record for `1 <= j <= k + 1` and `0 <= mm < d_j`.
pub fn ladder_records(set: &CartesianSet, d: usize) -> Result<Vec<LadderRecord>> {
    let (k, _) = code::decompose(set, d)?;
    let mut out = Vec::new();
    for j in 1..=k + 1 {
        for mm in 0..set.size(j - 1) {
            out.push(numeric_ladder(set, d, j, mm)?);
        }
    }
    Ok(out)
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub applicable: bool,
    pub checked: usize,
    pub passed: bool,
    /// First few counterexamples, described in words.
    pub failures: Vec<String>,
    pub recipe: String,
}

const MAX_LISTED_FAILURES: usize = 10;

impl CheckOutcome {
    fn new(recipe: &str) -> Self {
        CheckOutcome { applicable: true, checked: 0, passed: true, failures: Vec::new(), recipe: recipe.into() }
    }

    fn not_applicable(recipe: &str, why: &str) -> Self {
        CheckOutcome { applicable: false, recipe: format!("{recipe} (not applicable: {why})"), ..Self::new("") }
    }

    fn fail(&mut self, what: String) {
        self.passed = false;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(what);
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalCheck {
    #[serde(flatten)]
    pub outcome: CheckOutcome,
    /// Every `(j, m)` realised by some minimal word and some `h = x_j ∘ φ`.
    pub realized_pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub seed: u64,
    pub trials: usize,
    pub minimal: MinimalCheck,
    pub d1dk: CheckOutcome,
    pub soma1: CheckOutcome,
    pub poligual: CheckOutcome,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.minimal.outcome.passed && self.d1dk.passed && self.soma1.passed && self.poligual.passed
    }
}

/// Weight of `f` on each slice `x_j = α` through the function `h` (values),
/// indexed by the position of `α` in `K_j`.
fn slice_weights(set: &CartesianSet, j: usize, h: &[FieldElement], f: &[FieldElement]) -> Vec<usize> {
    let mut w = vec![0usize; set.size(j)];
    for (hv, fv) in h.iter().zip(f) {
        if !fv.is_zero() {
            w[set.position_in(j, *hv).expect("h takes values in K_j")] += 1;
        }
    }
    w
}

/// Number of `α ∈ K_j` with `Z(h - α) ⊆ Z(f)`, i.e. empty slices.
fn vanishing_slices(weights: &[usize]) -> usize {
    weights.iter().filter(|&&w| w == 0).count()
}

fn coordinate_values(set: &CartesianSet, j: usize) -> Vec<FieldElement> {
    (0..set.len()).map(|t| set.coord(j)[set.digit(t, j)]).collect()
}

fn delta_without(set: &CartesianSet, j: usize, e: i64) -> Option<usize> {
    let rest: Vec<usize> = set.sizes().iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &s)| s).collect();
    code::delta_sizes(&rest, e)
}

/// Clause conditions on `m` for `h = x_j ∘ φ` in a minimal word (`j` 0-based).
fn minimal_clause(set: &CartesianSet, k: usize, l: usize, j: usize, m: usize) -> bool {
    let sizes = set.sizes();
    let (dj, dk1) = (sizes[j], sizes[k]);
    if j < k {
        m == dj - 1 || (dj > dk1 - l && m == l + dj - dk1)
    } else {
        m == l || (m == dk1 - 1 && k > 0 && sizes[k - 1] >= dk1 - l)
    }
}

fn check_minimal(inst: &Instance) -> MinimalCheck {
    let set = &inst.set;
    let mut out = CheckOutcome::new(
        "for every minimal word f, j <= k+1 and distinct h = x_j ∘ φ with m > 0 vanishing slices: \
         m satisfies the clause for j and every nonempty slice has weight δ_{X_ĵ}(d - m)",
    );
    let mut pairs = Vec::new();
    for j in 0..=inst.k {
        let images = inst.group.coordinate_images(j);
        for (wi, word) in inst.words.iter().enumerate() {
            for (hv, g) in &images {
                let weights = slice_weights(set, j, hv, &word.values);
                let m = vanishing_slices(&weights);
                if m == 0 {
                    continue;
                }
                if !pairs.contains(&(j + 1, m)) {
                    pairs.push((j + 1, m));
                }
                let target = delta_without(set, j, inst.d as i64 - m as i64);
                let slices_ok = weights.iter().all(|&w| w == 0 || Some(w) == target);
                out.check(slices_ok && minimal_clause(set, inst.k, inst.l, j, m), || {
                    format!("word {wi}, j = {}, map {g}: m = {m}, slice weights {weights:?}", j + 1)
                });
            }
        }
    }
    pairs.sort_unstable();
    MinimalCheck { outcome: out, realized_pairs: pairs }
}

fn check_d1dk(inst: &Instance) -> CheckOutcome {
    let set = &inst.set;
    let sizes = set.sizes();
    let need = sizes[inst.k] - inst.l;
    let recipe = "for j <= k with d_j < d_{k+1} - ℓ: every minimal word vanishes on exactly d_j - 1 \
                  slices x_j = α and the remaining slice has weight δ_X(d) = δ_{X_ĵ}(d - (d_j - 1))";
    let js: Vec<usize> = (0..inst.k).filter(|&j| sizes[j] < need).collect();
    if js.is_empty() {
        return CheckOutcome::not_applicable(recipe, "no j <= k with d_j < d_{k+1} - ℓ");
    }
    let mut out = CheckOutcome::new(recipe);
    for &j in &js {
        let coord = coordinate_values(set, j);
        let reduced = delta_without(set, j, inst.d as i64 - (sizes[j] as i64 - 1));
        for (wi, word) in inst.words.iter().enumerate() {
            let weights = slice_weights(set, j, &coord, &word.values);
            let m = vanishing_slices(&weights);
            let survivor = weights.iter().copied().find(|&w| w > 0);
            let ok = m == sizes[j] - 1 && survivor == Some(inst.delta) && reduced == Some(inst.delta);
            out.check(ok, || format!("word {wi}, j = {}: slice weights {weights:?}", j + 1));
        }
    }
    out
}

fn random_nonzero(rng: &mut ChaCha8Rng, q: usize) -> FieldElement {
    FieldElement::from_index(rng.gen_range(1..q))
}

fn random_codeword(rng: &mut ChaCha8Rng, rows: &[Codeword], set: &CartesianSet) -> Vec<FieldElement> {
    let ctx = set.ctx();
    let q = ctx.order() as usize;
    let mut v = vec![FieldElement::ZERO; set.len()];
    for r in rows {
        let c = FieldElement::from_index(rng.gen_range(0..q));
        if !c.is_zero() {
            for (a, &b) in v.iter_mut().zip(&r.values) {
                *a = ctx.add(*a, ctx.mul(c, b));
            }
        }
    }
    v
}

fn add_values(set: &CartesianSet, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| set.ctx().add(x, y)).collect()
}

fn sub_values(set: &CartesianSet, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| set.ctx().sub(x, y)).collect()
}

fn weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// Index of a translation by a point of X within the group.
fn translation_index(inst: &Instance, beta: Vec<FieldElement>) -> usize {
    let t = AffineMap::translation(beta);
    inst.group.maps().iter().position(|m| *m == t).expect("translations by points of X preserve X")
}

fn random_point(rng: &mut ChaCha8Rng, set: &CartesianSet) -> Vec<FieldElement> {
    set.point(rng.gen_range(0..set.len()))
}

fn check_soma1(inst: &Instance, trials: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let set = &inst.set;
    let sizes = set.sizes();
    let q = set.ctx().order() as usize;
    let recipe = "for each k' < n with d' = Σ_{i<=k'+1} (d_i - 1), g = (σ ∏_{i<=k'+1} (1 - x_i^{d_i-1})) ∘ φ \
                  with random σ, φ; for 0 < s <= d_1 - 1, h is a random nonzero word of C_X(d' - s), and for s = 1 \
                  every other trial h = (g_0 ∘ τ - g_0) ∘ φ with τ a random translation; f = g + h must have \
                  |f| >= (s+1) δ or |f| = s δ, and in the equality case f ∘ φ^-1 vanishes on d_j - 1 or \
                  d_j - s slices x_j = α for each j <= k'+1";
    if sizes[0] < 2 {
        return CheckOutcome::not_applicable(recipe, "d_1 < 2");
    }
    let mut out = CheckOutcome::new(recipe);
    for kp in 0..set.n() {
        let dp: usize = sizes[..=kp].iter().map(|&x| x - 1).sum();
        let delta = code::delta_sizes(&sizes, dp as i64).expect("nonnegative");
        let mut g0 = ReducedPoly::one(set);
        for i in 0..=kp {
            g0 = g0.mul(&one_minus_top_power(set, i)).expect("same base");
        }
        let g0v = g0.values();
        for s in 1..sizes[0] {
            let rows = code::generator_rows(set, dp - s);
            for trial in 0..trials {
                let sigma = random_nonzero(rng, q);
                let gi = rng.gen_range(0..inst.group.len());
                let scaled: Vec<FieldElement> = g0v.iter().map(|&x| set.ctx().mul(sigma, x)).collect();
                let g = inst.group.pull_values(gi, &scaled);
                let h = if s == 1 && trial % 2 == 1 {
                    let ti = translation_index(inst, random_point(rng, set));
                    let moved = inst.group.pull_values(ti, &scaled);
                    inst.group.pull_values(gi, &sub_values(set, &moved, &scaled))
                } else {
                    loop {
                        let h = random_codeword(rng, &rows, set);
                        if weight(&h) > 0 {
                            break h;
                        }
                    }
                };
                let f = add_values(set, &g, &h);
                let wf = weight(&f);
                if wf >= (s + 1) * delta {
                    out.check(true, String::new);
                    continue;
                }
                if wf != s * delta {
                    out.check(false, || format!("k' = {kp}, s = {s}: |f| = {wf}, δ = {delta}"));
                    continue;
                }
                // f̂ = f ∘ φ^-1: f̂(φ(α_u)) = f(α_u)
                let perm = inst.group.perm(gi);
                let mut fhat = vec![FieldElement::ZERO; set.len()];
                for (u, &p) in perm.iter().enumerate() {
                    fhat[p as usize] = f[u];
                }
                let mut ok = true;
                for j in 0..=kp {
                    let m = vanishing_slices(&slice_weights(set, j, &coordinate_values(set, j), &fhat));
                    ok &= m == sizes[j] - 1 || m == sizes[j] - s;
                }
                out.check(ok, || format!("k' = {kp}, s = {s}: |f| = s δ but slice counts differ"));
            }
        }
    }
    out
}

fn check_poligual(inst: &Instance, trials: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let set = &inst.set;
    let ctx = set.ctx();
    let sizes = set.sizes();
    let q = ctx.order() as usize;
    let recipe = "for each 1 <= k' < n with d'' = Σ_{i=2}^{k'+1} (d_i - 1): F = σ ∏_{i=2}^{k'+1} (1 - x_i^{d_i-1}), \
                  τ a translation by β with β_1 = 0 (β = 0 in one trial out of four), α_1 ≠ α_2 in K_1, \
                  f = F + (x_1 - α_1)/(α_2 - α_1) (F ∘ τ - F); f has degree <= d'' and minimal slices at α_1, α_2; \
                  some φ with x_1 ∘ φ = x_1 must make the two slices of f ∘ φ equal";
    if set.n() < 2 {
        return CheckOutcome::not_applicable(recipe, "n < 2");
    }
    let mut out = CheckOutcome::new(recipe);
    let stride = set.strides()[0];
    let fixing: Vec<usize> = (0..inst.group.len())
        .filter(|&g| {
            let m = inst.group.map(g);
            m.beta[0].is_zero() && (0..set.n()).all(|c| m.a[0][c] == if c == 0 { FieldElement::ONE } else { FieldElement::ZERO })
        })
        .collect();
    for kp in 1..set.n() {
        let dpp: usize = sizes[1..=kp].iter().map(|&x| x - 1).sum();
        let delta_hat = delta_without(set, 0, dpp as i64).expect("nonnegative");
        let mut f1 = ReducedPoly::one(set);
        for i in 1..=kp {
            f1 = f1.mul(&one_minus_top_power(set, i)).expect("same base");
        }
        for trial in 0..trials {
            let sigma = random_nonzero(rng, q);
            let f1s = f1.scale(sigma);
            let p1 = rng.gen_range(0..sizes[0]);
            let p2 = (p1 + rng.gen_range(1..sizes[0])) % sizes[0];
            let (a1, a2) = (set.coord(0)[p1], set.coord(0)[p2]);
            let mut beta = vec![FieldElement::ZERO; set.n()];
            if trial % 4 != 0 {
                for (i, b) in beta.iter_mut().enumerate().take(kp + 1).skip(1) {
                    *b = set.coord(i)[rng.gen_range(0..sizes[i])];
                }
            }
            let moved = affine::pullback(&f1s, &AffineMap::translation(beta)).expect("translation preserves X");
            let ratio = ctx.inv(ctx.sub(a2, a1)).expect("distinct");
            let lin = shifted_var(set, 0, a1).scale(ratio);
            let f = f1s.add(&lin.mul(&moved.sub(&f1s).expect("same base")).expect("same base")).expect("same base");
            let fv = f.values();
            let slice = |v: &[FieldElement], p: usize| v[p * stride..(p + 1) * stride].to_vec();
            let hyp = f.degree().is_none_or(|deg| deg <= dpp)
                && weight(&slice(&fv, p1)) == delta_hat
                && weight(&slice(&fv, p2)) == delta_hat;
            if !hyp {
                out.check(false, || format!("k' = {kp}, trial {trial}: constructed f misses the hypotheses"));
                continue;
            }
            let found = fixing.iter().any(|&g| {
                let gv = inst.group.pull_values(g, &fv);
                slice(&gv, p1) == slice(&gv, p2)
            });
            out.check(found, || format!("k' = {kp}, trial {trial}: no equalising map"));
        }
    }
    out
}

/// Checks (a) the characterisation of minimal words through X-linear factors,
/// (b) the slice structure when some `d_j < d_{k+1} - ℓ`, (c) the weight
/// dichotomy of `g + h` and (d) the equalisation of two minimal slices.
pub fn verify_structure_lemmas(set: &Arc<CartesianSet>, d: usize, budget: u64, trials: usize, seed: u64) -> Result<StructureReport> {
    let inst = Instance::new(set, d, budget)?;
    Ok(structure_lemmas(&inst, trials, seed))
}

pub fn structure_lemmas(inst: &Instance, trials: usize, seed: u64) -> StructureReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StructureReport {
        seed,
        trials,
        minimal: check_minimal(inst),
        d1dk: check_d1dk(inst),
        soma1: check_soma1(inst, trials, &mut rng),
        poligual: check_poligual(inst, trials, &mut rng),
    }
}

/// The degree-1 factor check over every codeword below the weight bound.
pub fn fatores_batch(inst: &Instance) -> Result<CheckOutcome> {
    let set = &inst.set;
    let dk1 = set.size(inst.k);
    let top = ((dk1 + 1) * inst.delta - 1) / dk1;
    let words = search::words_in_weight_range(set, inst.d, inst.delta, top, inst.budget)?;
    let images = inst.group.coordinate_images(inst.k);
    let mut out = CheckOutcome::new(
        "every codeword with |f| < (1 + 1/d_{k+1}) δ has a factor h = x_{k+1} ∘ φ, i.e. Z_X(h) ⊆ Z_X(f)",
    );
    for (wi, w) in words.iter().enumerate() {
        out.check(find_factor(w, &images).is_some(), || format!("word {wi} of weight {}", w.weight));
    }
    Ok(out)
}

/// Support dichotomy over every X-affine subspace of dimension 1..n-1, for
/// every minimal word.
pub fn support_batch(inst: &Instance) -> Result<CheckOutcome> {
    let set = &inst.set;
    let dims: Vec<usize> = (1..set.n()).collect();
    let recipe = "for every minimal word and every X-affine G of dimension 1..n-1: S ∩ G = ∅ or |S ∩ G| >= δ_{X_G}(d), \
                  δ_{X_G} taken as the minimum over all witnesses";
    if dims.is_empty() {
        return Ok(CheckOutcome::not_applicable(recipe, "n = 1"));
    }
    let catalog = affine::x_affine_subspaces(&inst.group, &dims, inst.budget)?;
    let mut out = CheckOutcome::new(recipe);
    for (wi, w) in inst.words.iter().enumerate() {
        let r = affine::support_lemma_check(w, set, inst.d, &catalog);
        out.check(r.passed(), || format!("word {wi}: {:?}", r.violations.first()));
    }
    Ok(out)
}

/// Ladder agreement over all `(j, mm)`; not applicable at `d = Σ (d_i - 1)`.
pub fn ladder_batch(set: &CartesianSet, d: usize) -> CheckOutcome {
    let recipe = "predicted equality cases agree with evaluated equality for every 1 <= j <= k+1 and 0 <= mm < d_j";
    let Ok(records) = ladder_records(set, d) else {
        return CheckOutcome::not_applicable(recipe, "d outside the relevant range");
    };
    let mut out = CheckOutcome::new(recipe);
    for r in records {
        out.check(r.consistent(), || format!("{r:?}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    fn set(p: u32, m: u32, chain: &[u32]) -> Arc<CartesianSet> {
        let ctx = Arc::new(FieldCtx::new(p, m, None).unwrap());
        CartesianSet::new(ctx, chain.to_vec()).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let x = set(2, 2, &[1, 2]);
        let form = CanonicalForm { j: 2, sigma: FieldElement::ONE, alphas: vec![FieldElement::ZERO] };
        let f = canonical_minimal(&x, 2, &form).unwrap();
        assert_eq!(f, ReducedPoly::parse(&x, "x2 - x1 x2").unwrap());
        assert_eq!(code::encode(&x, 2, &f).unwrap().weight, 3);
        let bad = CanonicalForm { j: 1, sigma: FieldElement::ONE, alphas: vec![] };
        assert_eq!(canonical_minimal(&x, 2, &bad).unwrap_err(), Error::InadmissibleJ { j: 1, dj: 2, need: 3 });

        let y = set(2, 2, &[2, 2]);
        let form = CanonicalForm { j: 1, sigma: FieldElement::ONE, alphas: vec![FieldElement::ZERO, FieldElement::ONE] };
        let f = canonical_minimal(&y, 2, &form).unwrap();
        assert_eq!(f.degree(), Some(2));
        assert_eq!(code::encode(&y, 2, &f).unwrap().weight, 8);
        let short = CanonicalForm { alphas: vec![FieldElement::ZERO], ..form.clone() };
        assert_eq!(canonical_minimal(&y, 2, &short).unwrap_err(), Error::AlphaCountMismatch { expected: 2, got: 1 });
        let z = set(2, 4, &[1, 2]);
        let not_in = CanonicalForm { j: 2, sigma: FieldElement::ONE, alphas: vec![z.ctx().generator()] };
        assert_eq!(canonical_minimal(&z, 2, &not_in).unwrap_err(), Error::AlphaNotInKj(2));
    }

    #[test]
    fn every_admissible_form_is_minimal() {
        for (p, m, chain) in [(2, 2, vec![1, 2]), (3, 1, vec![1, 1]), (2, 2, vec![2, 2]), (2, 2, vec![1, 1, 2])] {
            let x = set(p, m, &chain);
            let top = code::degree_bound(&x.sizes());
            for d in 1..=top {
                let delta = code::min_distance_formula(&x, d);
                for form in admissible_forms(&x, d).unwrap() {
                    let f = canonical_minimal(&x, d, &form).unwrap();
                    assert_eq!(f.degree(), Some(d), "{chain:?} d={d} {form:?}");
                    assert_eq!(code::encode(&x, d, &f).unwrap().weight, delta);
                }
            }
        }
    }

    #[test]
    fn special_case_examples() {
        let y = set(2, 2, &[2, 2]);
        assert_eq!(canonical_special_cases(&y, 2).unwrap().len(), 18);
        assert_eq!(admissible_forms(&y, 2).unwrap().len(), 18);
        let x = set(2, 2, &[1, 2]);
        let top = canonical_special_cases(&x, 4).unwrap();
        assert_eq!(top.len(), 3);
        assert_eq!(top[0], ReducedPoly::parse(&x, "1 - x1").unwrap().mul(&ReducedPoly::parse(&x, "1 - x2^3").unwrap()).unwrap());
        assert_eq!(code::encode(&x, 4, &top[0]).unwrap().weight, 1);
        let w = set(2, 2, &[1, 1, 2]);
        assert!(matches!(canonical_special_cases(&w, 3), Err(Error::CaseNotApplicable(_))));
    }

    #[test]
    fn special_cases_are_canonical_forms() {
        let y = set(2, 2, &[2, 2]);
        let mut forms: Vec<ReducedPoly> = admissible_forms(&y, 2)
            .unwrap()
            .iter()
            .map(|f| canonical_minimal(&y, 2, f).unwrap())
            .collect();
        let mut special = canonical_special_cases(&y, 2).unwrap();
        let key = |p: &ReducedPoly| p.values();
        forms.sort_by_key(key);
        special.sort_by_key(key);
        assert_eq!(forms, special);
    }

    #[test]
    fn minimal_word_counts() {
        let x = set(2, 1, &[1, 1]);
        let words = enumerate_minimal_words(&x, 1, 1 << 20).unwrap();
        assert_eq!(words.len(), 6);
        assert!(words.iter().all(|w| w.weight == 2));
    }

    #[test]
    fn verify_gf2_squared() {
        let x = set(2, 1, &[1, 1]);
        let r = verify_dgm_extension(&x, 1, 1 << 20).unwrap();
        assert_eq!(r.count_minimal, 6);
        assert!(r.failures.is_empty());
        assert!(r.passed());
        let target = code::encode(&x, 1, &ReducedPoly::parse(&x, "x1 + x2").unwrap()).unwrap();
        let words = enumerate_minimal_words(&x, 1, 1 << 20).unwrap();
        let wi = words.iter().position(|w| *w == target).unwrap();
        let m = r.matches.iter().find(|m| m.word_index == wi).unwrap();
        assert_eq!(m.form.j, 1);
        let canon = canonical_minimal(&x, 1, &m.form).unwrap();
        assert_eq!(affine::pullback(&canon, &m.phi).unwrap().values(), target.values);
    }

    #[test]
    fn fatores_examples() {
        let x = set(2, 2, &[1, 2]);
        let group = AffineGroup::enumerate(&x, 1 << 20).unwrap();
        let f = code::encode(&x, 2, &ReducedPoly::parse(&x, "x2 - x1 x2").unwrap()).unwrap();
        let w = check_fatores(&f, &x, 2, &group).unwrap().unwrap();
        assert_eq!(w.h, ReducedPoly::var(&x, 1));
        let heavy = code::encode(&x, 2, &ReducedPoly::one(&x)).unwrap();
        assert!(matches!(check_fatores(&heavy, &x, 2, &group), Err(Error::WeightBoundViolated { .. })));
    }

    #[test]
    fn ladder_examples() {
        let x = set(2, 2, &[1, 1, 2]);
        let r = numeric_ladder(&x, 3, 3, 1).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equality_predicted, r.equality_actual), (Some(3), 3, true, true));
        let r = numeric_ladder(&x, 3, 1, 1).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equality_predicted, r.equality_actual), (Some(3), 3, true, true));
        let y = set(2, 2, &[1, 2]);
        let r = numeric_ladder(&y, 2, 1, 0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equality_predicted, r.equality_actual), (Some(4), 3, false, false));
        assert!(numeric_ladder(&y, 2, 3, 0).is_err());
        assert!(numeric_ladder(&y, 2, 1, 2).is_err());
    }

    #[test]
    fn structure_lemmas_gf2_gf4() {
        let x = set(2, 2, &[1, 2]);
        let r = verify_structure_lemmas(&x, 2, 1 << 20, 50, 0).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.minimal.outcome.checked > 0);
        assert!(r.soma1.checked > 0 && r.poligual.checked > 0);
    }

    #[test]
    fn poligual_degenerate_uses_identity() {
        let x = set(2, 2, &[2, 2]);
        let inst = Instance::new(&x, 6, 1 << 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = check_poligual(&inst, 4, &mut rng);
        assert!(r.passed && r.checked == 4, "{r:?}");
    }
}
