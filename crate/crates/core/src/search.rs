//! Exhaustive codeword enumeration.
//!
//! Two exact engines are provided. The message walk visits every K-linear
//! combination of the generator rows in a q-ary Gray order, changing one
//! digit per step so each step touches a single scaled row. The support walk
//! lists the words of one fixed small weight by choosing the support and
//! solving the parity checks, normalising the first nonzero value to 1.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::code::{self, Codeword};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::poly::CartesianSet;

pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Environment variable that overrides the default budget.
pub const BUDGET_ENV: &str = "CARTESIAN_CODES_BUDGET";

/// `q^dim`, the number of messages of C_X(d).
pub fn message_count(set: &CartesianSet, d: usize) -> u128 {
    (set.ctx().order() as u128).saturating_pow(code::dimension(set, d) as u32)
}

fn check_budget(required: u128, budget: u64) -> Result<()> {
    if required > budget as u128 {
        Err(Error::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

/// Message walk over all of C_X(d).
struct GrayWalk<'a> {
    ctx: &'a FieldCtx,
    m: usize,
    q: usize,
    rows: Vec<Vec<FieldElement>>,
    support: Vec<Vec<usize>>,
    /// `step[r][s][t]`: change at `support[r][t]` when digit `r` moves from
    /// state `s` to `s + 1 (mod q)`.
    step: Vec<Vec<Vec<FieldElement>>>,
}

impl<'a> GrayWalk<'a> {
    fn new(set: &'a Arc<CartesianSet>, d: usize) -> Self {
        let ctx = &**set.ctx();
        let rows: Vec<Vec<FieldElement>> =
            code::generator_rows(set, d).into_iter().map(|c| c.values).collect();
        let q = ctx.order() as usize;
        let elems: Vec<FieldElement> = ctx.elements().collect();
        let support: Vec<Vec<usize>> = rows
            .iter()
            .map(|r| (0..r.len()).filter(|&i| !r[i].is_zero()).collect())
            .collect();
        let step = rows
            .iter()
            .zip(&support)
            .map(|(row, sup)| {
                (0..q)
                    .map(|s| {
                        let diff = ctx.sub(elems[(s + 1) % q], elems[s]);
                        sup.iter().map(|&i| ctx.mul(diff, row[i])).collect()
                    })
                    .collect()
            })
            .collect();
        GrayWalk { ctx, m: set.len(), q, rows, support, step }
    }

    /// Runs the walk split into chunks over the top digits, calling `visit`
    /// on every word (including zero) and returning the per-chunk
    /// accumulators in chunk order.
    fn run<A, I, F>(&self, init: I, visit: F) -> Vec<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, &[FieldElement], usize) + Sync,
    {
        let dim = self.rows.len();
        let total = (self.q as u128).pow(dim as u32);
        let mut prefix = 0;
        if total >= 1 << 14 {
            while prefix < dim && (self.q as u128).pow(prefix as u32 + 1) <= 1024 {
                prefix += 1;
            }
        }
        let inner = dim - prefix;
        let chunks = self.q.pow(prefix as u32);
        let elems: Vec<FieldElement> = self.ctx.elements().collect();
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut acc = init();
                let mut word = vec![FieldElement::ZERO; self.m];
                let mut c = chunk;
                for r in inner..dim {
                    let coeff = elems[c % self.q];
                    c /= self.q;
                    if !coeff.is_zero() {
                        for &i in &self.support[r] {
                            word[i] = self.ctx.add(word[i], self.ctx.mul(coeff, self.rows[r][i]));
                        }
                    }
                }
                let mut weight = word.iter().filter(|v| !v.is_zero()).count();
                visit(&mut acc, &word, weight);
                let mut state = vec![0usize; inner];
                let steps = self.q.pow(inner as u32);
                for t in 1..steps {
                    let mut r = 0;
                    let mut u = t;
                    while u % self.q == 0 {
                        u /= self.q;
                        r += 1;
                    }
                    let s = state[r];
                    state[r] = (s + 1) % self.q;
                    for (&i, &delta) in self.support[r].iter().zip(&self.step[r][s]) {
                        let old = word[i];
                        let new = self.ctx.add(old, delta);
                        word[i] = new;
                        weight = weight + usize::from(!new.is_zero()) - usize::from(!old.is_zero());
                    }
                    visit(&mut acc, &word, weight);
                }
                acc
            })
            .collect()
    }
}

/// Weight distribution of C_X(d), zero word included at weight 0.
pub fn weight_spectrum(set: &Arc<CartesianSet>, d: usize, budget: u64) -> Result<BTreeMap<usize, u64>> {
    check_budget(message_count(set, d), budget)?;
    let walk = GrayWalk::new(set, d);
    let m = set.len();
    let parts = walk.run(|| vec![0u64; m + 1], |acc, _, w| acc[w] += 1);
    let mut total = vec![0u64; m + 1];
    for part in parts {
        for (t, c) in total.iter_mut().zip(part) {
            *t += c;
        }
    }
    Ok(total.into_iter().enumerate().filter(|&(_, c)| c > 0).collect())
}

/// Minimum nonzero weight of C_X(d) by walking every message.
pub fn min_distance_bruteforce(set: &Arc<CartesianSet>, d: usize, budget: u64) -> Result<usize> {
    check_budget(message_count(set, d), budget)?;
    let walk = GrayWalk::new(set, d);
    let parts = walk.run(|| usize::MAX, |acc, _, w| {
        if w > 0 && w < *acc {
            *acc = w;
        }
    });
    Ok(parts.into_iter().min().unwrap_or(usize::MAX))
}

/// Parity-check data for the support walk.
struct SupportWalk<'a> {
    ctx: &'a FieldCtx,
    m: usize,
    cols: Vec<Vec<FieldElement>>,
    zero_cols: Vec<usize>,
    /// Nonzero columns grouped by direction (first nonzero entry scaled to 1),
    /// each list increasing, with the column's leading entry.
    by_direction: HashMap<Vec<FieldElement>, Vec<(usize, FieldElement)>>,
}

fn normalize(ctx: &FieldCtx, v: &[FieldElement]) -> Option<(Vec<FieldElement>, FieldElement)> {
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let inv = ctx.inv(lead).expect("nonzero");
    Some((v.iter().map(|&x| ctx.mul(x, inv)).collect(), lead))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

impl<'a> SupportWalk<'a> {
    fn new(set: &'a Arc<CartesianSet>, d: usize) -> Self {
        let ctx = &**set.ctx();
        let h = code::parity_check(set, d);
        let m = set.len();
        let cols: Vec<Vec<FieldElement>> = (0..m).map(|t| h.iter().map(|row| row[t]).collect()).collect();
        let mut zero_cols = Vec::new();
        let mut by_direction: HashMap<Vec<FieldElement>, Vec<(usize, FieldElement)>> = HashMap::new();
        for (t, col) in cols.iter().enumerate() {
            match normalize(ctx, col) {
                None => zero_cols.push(t),
                Some((dir, lead)) => by_direction.entry(dir).or_default().push((t, lead)),
            }
        }
        SupportWalk { ctx, m, cols, zero_cols, by_direction }
    }

    /// Number of search nodes for weight `w`.
    fn cost(m: usize, q: usize, w: usize) -> u128 {
        match w {
            0 => 1,
            1 => m as u128,
            _ => binomial(m, w - 1).saturating_mul((q as u128 - 1).saturating_pow(w as u32 - 2)),
        }
    }

    /// All words of weight exactly `w` whose first nonzero value is 1,
    /// as (position, value) lists.
    fn normalized_words(&self, w: usize) -> Vec<Vec<(usize, FieldElement)>> {
        if w == 0 {
            return vec![Vec::new()];
        }
        if w == 1 {
            return self.zero_cols.iter().map(|&t| vec![(t, FieldElement::ONE)]).collect();
        }
        (0..self.m)
            .into_par_iter()
            .map(|first| {
                let mut out = Vec::new();
                let mut chosen = vec![(first, FieldElement::ONE)];
                let syn = self.cols[first].clone();
                self.extend(w, &mut chosen, syn, &mut out);
                out
            })
            .flatten_iter()
            .collect()
    }

    fn extend(
        &self,
        w: usize,
        chosen: &mut Vec<(usize, FieldElement)>,
        syn: Vec<FieldElement>,
        out: &mut Vec<Vec<(usize, FieldElement)>>,
    ) {
        let last = chosen.last().unwrap().0;
        if chosen.len() + 1 == w {
            match normalize(self.ctx, &syn) {
                None => {
                    let start = self.zero_cols.partition_point(|&t| t <= last);
                    for &t in &self.zero_cols[start..] {
                        for c in self.ctx.elements().skip(1) {
                            let mut word = chosen.clone();
                            word.push((t, c));
                            out.push(word);
                        }
                    }
                }
                Some((dir, mu)) => {
                    if let Some(list) = self.by_direction.get(&dir) {
                        let start = list.partition_point(|&(t, _)| t <= last);
                        for &(t, nu) in &list[start..] {
                            let c = self.ctx.neg(self.ctx.div(mu, nu).expect("nonzero"));
                            let mut word = chosen.clone();
                            word.push((t, c));
                            out.push(word);
                        }
                    }
                }
            }
            return;
        }
        let remaining = w - chosen.len();
        for t in last + 1..=self.m - remaining {
            for c in self.ctx.elements().skip(1) {
                let next: Vec<FieldElement> = syn
                    .iter()
                    .zip(&self.cols[t])
                    .map(|(&a, &b)| self.ctx.add(a, self.ctx.mul(c, b)))
                    .collect();
                chosen.push((t, c));
                self.extend(w, chosen, next, out);
                chosen.pop();
            }
        }
    }

    fn words(&self, w: usize) -> Vec<Codeword> {
        let mut out = Vec::new();
        for sparse in self.normalized_words(w) {
            for scale in self.ctx.elements().skip(1) {
                let mut values = vec![FieldElement::ZERO; self.m];
                for &(t, c) in &sparse {
                    values[t] = self.ctx.mul(scale, c);
                }
                out.push(Codeword { values, weight: w });
            }
        }
        out
    }
}

/// Enumeration cost of the cheaper exact engine for weights `lo..=hi`, and
/// whether that engine is the support walk.
pub fn weight_range_cost(set: &CartesianSet, d: usize, lo: usize, hi: usize) -> (u128, bool) {
    let gray = message_count(set, d);
    let (m, q) = (set.len(), set.ctx().order() as usize);
    let support = (lo.max(1)..=hi.min(m))
        .fold(0u128, |acc, w| acc.saturating_add(SupportWalk::cost(m, q, w)));
    if support < gray {
        (support, true)
    } else {
        (gray, false)
    }
}

/// Every nonzero codeword with weight in `lo..=hi`, sorted by value vector.
pub fn words_in_weight_range(
    set: &Arc<CartesianSet>,
    d: usize,
    lo: usize,
    hi: usize,
    budget: u64,
) -> Result<Vec<Codeword>> {
    let (cost, use_support) = weight_range_cost(set, d, lo, hi);
    check_budget(cost, budget)?;
    let lo = lo.max(1);
    let mut words = if use_support {
        let walk = SupportWalk::new(set, d);
        (lo..=hi.min(set.len())).flat_map(|w| walk.words(w)).collect()
    } else {
        let walk = GrayWalk::new(set, d);
        walk.run(Vec::new, |acc: &mut Vec<Codeword>, word, w| {
            if w >= lo && w <= hi {
                acc.push(Codeword { values: word.to_vec(), weight: w });
            }
        })
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
    };
    words.sort_unstable_by(|a, b| a.values.cmp(&b.values));
    Ok(words)
}

/// The two smallest nonzero weights of C_X(d), found without the closed
/// forms: from the full spectrum when it fits the budget, otherwise by
/// support walks of increasing weight.
pub fn lowest_two_weights(set: &Arc<CartesianSet>, d: usize, budget: u64) -> Result<(usize, Option<usize>)> {
    if message_count(set, d) <= budget as u128 {
        let spectrum = weight_spectrum(set, d, budget)?;
        let mut nonzero = spectrum.keys().copied().filter(|&w| w > 0);
        let first = nonzero.next().expect("code is nonzero");
        return Ok((first, nonzero.next()));
    }
    let (m, q) = (set.len(), set.ctx().order() as usize);
    let walk = SupportWalk::new(set, d);
    let mut spent = 0u128;
    let mut found = Vec::new();
    for w in 1..=m {
        spent = spent.saturating_add(SupportWalk::cost(m, q, w));
        check_budget(spent, budget)?;
        if !walk.normalized_words(w).is_empty() {
            found.push(w);
            if found.len() == 2 {
                return Ok((found[0], Some(found[1])));
            }
        }
    }
    Ok((found[0], None))
}

/// Next-to-minimal weight of C_X(d) by exhaustive search.
pub fn second_weight_bruteforce(set: &Arc<CartesianSet>, d: usize, budget: u64) -> Result<Option<usize>> {
    Ok(lowest_two_weights(set, d, budget)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    fn set(p: u32, m: u32, chain: &[u32]) -> Arc<CartesianSet> {
        let ctx = Arc::new(FieldCtx::new(p, m, None).unwrap());
        CartesianSet::new(ctx, chain.to_vec()).unwrap()
    }

    /// All messages by plain counting and direct row combination.
    fn naive_words(x: &Arc<CartesianSet>, d: usize) -> Vec<Codeword> {
        let ctx = x.ctx();
        let rows = code::generator_rows(x, d);
        let q = ctx.order() as usize;
        let elems: Vec<FieldElement> = ctx.elements().collect();
        let total = q.pow(rows.len() as u32);
        (0..total)
            .map(|mut t| {
                let mut v = vec![FieldElement::ZERO; x.len()];
                for r in &rows {
                    let c = elems[t % q];
                    t /= q;
                    for (a, &b) in v.iter_mut().zip(&r.values) {
                        *a = ctx.add(*a, ctx.mul(c, b));
                    }
                }
                Codeword::new(v)
            })
            .collect()
    }

    #[test]
    fn spectrum_gf2_squared() {
        let x = set(2, 1, &[1, 1]);
        let s = weight_spectrum(&x, 1, 1 << 20).unwrap();
        assert_eq!(s, BTreeMap::from([(0, 1), (2, 6), (4, 1)]));
        assert_eq!(min_distance_bruteforce(&x, 1, 1 << 20).unwrap(), 2);
    }

    #[test]
    fn gray_walk_visits_every_word_once() {
        for (p, m, chain, d) in [(2, 2, vec![1, 2], 2), (3, 1, vec![1, 1], 2), (2, 1, vec![1, 1, 1], 2)] {
            let x = set(p, m, &chain);
            let mut naive: Vec<_> = naive_words(&x, d).into_iter().map(|c| c.values).collect();
            naive.sort();
            let walk = GrayWalk::new(&x, d);
            let mut seen: Vec<_> = walk
                .run(Vec::new, |acc: &mut Vec<Vec<FieldElement>>, w, wt| {
                    assert_eq!(wt, w.iter().filter(|v| !v.is_zero()).count());
                    acc.push(w.to_vec())
                })
                .into_iter()
                .flatten()
                .collect();
            seen.sort();
            assert_eq!(seen, naive);
        }
    }

    #[test]
    fn support_walk_matches_naive_filter() {
        for (p, m, chain, d) in [(2, 2, vec![1, 2], 2), (3, 1, vec![1, 1], 2), (2, 2, vec![2, 2], 3)] {
            let x = set(p, m, &chain);
            let naive = naive_words(&x, d);
            let walk = SupportWalk::new(&x, d);
            for w in 1..=5 {
                let mut expect: Vec<_> = naive.iter().filter(|c| c.weight == w).cloned().collect();
                expect.sort();
                let mut got = walk.words(w);
                got.sort();
                assert_eq!(got, expect, "weight {w} on {chain:?} d={d}");
            }
        }
    }

    #[test]
    fn mindist_examples() {
        assert_eq!(min_distance_bruteforce(&set(2, 2, &[1, 2]), 2, 1_000_000).unwrap(), 3);
        assert_eq!(min_distance_bruteforce(&set(3, 1, &[1, 1]), 2, 1_000_000).unwrap(), 3);
        let err = min_distance_bruteforce(&set(2, 2, &[2, 2]), 6, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn second_weight_gf3_squared() {
        let x = set(3, 1, &[1, 1]);
        assert_eq!(lowest_two_weights(&x, 2, 1 << 20).unwrap(), (3, Some(4)));
        // the support-walk path on the same code
        assert_eq!(lowest_two_weights(&x, 2, 500).unwrap(), (3, Some(4)));
    }

    #[test]
    fn spectrum_total_is_message_count() {
        let x = set(2, 2, &[1, 2]);
        let s = weight_spectrum(&x, 2, 1 << 20).unwrap();
        assert_eq!(s.values().sum::<u64>() as u128, message_count(&x, 2));
    }
}
