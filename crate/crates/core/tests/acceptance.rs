//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs with `cargo test --test acceptance`.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cartesian_codes::affine::{self, AffineGroup, AffineMap};
use cartesian_codes::code;
use cartesian_codes::minwords::{self, Instance, VerificationReport};
use cartesian_codes::search;
use cartesian_codes::{CartesianSet, Error, FieldCtx, FieldElement, ReducedPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 1 << 24;

fn set(p: u32, m: u32, chain: &[u32]) -> Arc<CartesianSet> {
    let ctx = Arc::new(FieldCtx::new(p, m, None).unwrap());
    CartesianSet::new(ctx, chain.to_vec()).unwrap()
}

fn label(x: &CartesianSet) -> String {
    let q = x.ctx().characteristic();
    let parts: Vec<String> = x.sizes().iter().map(|s| format!("GF({s})")).collect();
    format!("{} over GF({q}^{})", parts.join("x"), x.ctx().degree())
}

fn relevant(x: &CartesianSet) -> std::ops::Range<usize> {
    1..code::degree_bound(&x.sizes())
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn family() -> Vec<Arc<CartesianSet>> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(set(2, 1, &vec![1; n]));
    }
    for n in 1..=2 {
        out.push(set(3, 1, &vec![1; n]));
        out.push(set(2, 2, &vec![2; n]));
    }
    out.push(set(2, 2, &[1, 2]));
    out.push(set(2, 2, &[1, 1, 2]));
    out.push(set(2, 4, &[1, 4]));
    out.push(set(2, 4, &[2, 4]));
    out
}

fn criterion_1() -> Outcome {
    let limit: u128 = 1 << 20;
    let (mut checked, mut skipped) = (0, 0);
    let mut bad = Vec::new();
    for x in family() {
        for d in relevant(&x) {
            if search::message_count(&x, d) > limit {
                skipped += 1;
                continue;
            }
            let brute = search::min_distance_bruteforce(&x, d, limit as u64).unwrap();
            let formula = code::min_distance_formula(&x, d);
            checked += 1;
            if brute != formula {
                bad.push(format!("{} d={d}: formula {formula}, search {brute}", label(&x)));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} codes agree, {skipped} above q^dim = 2^20 {bad:?}"))
}

struct Verified {
    set: Arc<CartesianSet>,
    inst: Instance,
    report: VerificationReport,
}

fn instances() -> (Vec<Verified>, Vec<String>) {
    let list: Vec<(Arc<CartesianSet>, Vec<usize>)> = vec![
        (set(2, 1, &[1, 1]), vec![1]),
        (set(2, 1, &[1, 1, 1]), vec![1, 2]),
        (set(3, 1, &[1, 1]), vec![1, 2, 3]),
        (set(2, 2, &[1, 2]), vec![1, 2, 3, 4]),
        (set(2, 2, &[1, 1, 2]), vec![1, 2, 3, 4, 5]),
        (set(2, 2, &[2, 2]), vec![1, 2, 3, 4, 5]),
    ];
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    for (x, ds) in list {
        for d in ds {
            match Instance::new(&x, d, BUDGET) {
                Ok(inst) => {
                    let report = minwords::verify_instance(&inst).unwrap();
                    out.push(Verified { set: x.clone(), inst, report });
                }
                Err(Error::BudgetExceeded { .. }) => skipped.push(format!("{} d={d}", label(&x))),
                Err(e) => panic!("{e}"),
            }
        }
    }
    (out, skipped)
}

fn criterion_2(runs: &[Verified], skipped: &[String]) -> Outcome {
    let words: usize = runs.iter().map(|r| r.report.count_minimal).sum();
    let bad: Vec<String> = runs
        .iter()
        .filter(|r| !r.report.failures.is_empty() || !r.report.form_defects.is_empty())
        .map(|r| format!("{} d={}: {} unmatched", label(&r.set), r.inst.d, r.report.failures.len()))
        .collect();
    outcome(
        bad.is_empty() && runs.iter().all(|r| r.report.matches.len() == r.report.count_minimal),
        format!("{} instances, {words} minimal words matched, skipped {skipped:?} {bad:?}", runs.len()),
    )
}

fn criterion_3(runs: &[Verified]) -> Outcome {
    let grm: Vec<&Verified> = runs.iter().filter(|r| r.report.dgm_shape.is_some()).collect();
    let mut forms = 0;
    let mut bad = Vec::new();
    for r in &grm {
        let check = r.report.dgm_shape.as_ref().unwrap();
        forms += check.checked;
        if check.checked == 0 || !check.mismatches.is_empty() {
            bad.push(format!("{} d={}", label(&r.set), r.inst.d));
        }
    }
    outcome(!grm.is_empty() && bad.is_empty(), format!("{} GRM instances, {forms} matched forms in GRM shape {bad:?}", grm.len()))
}

fn nondecreasing_vectors(max_product: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, product: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for next in start..=max / product {
            cur.push(next);
            rec(next, product * next, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(2, 1, max_product, &mut Vec::new(), &mut out);
    out
}

/// `min ∏ (d_i - a_i)` over every `a` with `0 <= a_i < d_i`, `Σ a_i <= d`.
fn exhaustive_product_min(dvec: &[usize], d: usize) -> usize {
    let mut best = usize::MAX;
    let mut a = vec![0usize; dvec.len()];
    loop {
        if a.iter().sum::<usize>() <= d {
            best = best.min(dvec.iter().zip(&a).map(|(x, y)| x - y).product());
        }
        let mut i = 0;
        while i < a.len() {
            a[i] += 1;
            if a[i] < dvec[i] {
                break;
            }
            a[i] = 0;
            i += 1;
        }
        if i == a.len() {
            return best;
        }
    }
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for dvec in nondecreasing_vectors(256) {
        for d in 1..=code::degree_bound(&dvec) {
            checked += 1;
            let closed = code::lemma21_min(&dvec, d).unwrap();
            let oracle = exhaustive_product_min(&dvec, d);
            if closed != oracle {
                bad.push(format!("{dvec:?} d={d}: {closed} vs {oracle}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} (vector, d) pairs agree {bad:?}"))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for x in family() {
        for d in relevant(&x) {
            for r in minwords::ladder_records(&x, d).unwrap() {
                checked += 1;
                if !r.consistent() {
                    bad.push(format!("{} d={d}: {r:?}", label(&x)));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} (code, j, mm) records consistent {bad:?}"))
}

fn criterion_6() -> Outcome {
    let mut cases: Vec<(usize, usize, usize)> = (1..=3).map(|d| (2, 3, d)).collect();
    cases.extend((1..=3).map(|d| (3, 2, d)));
    cases.extend((1..=4).map(|d| (4, 2, d)));
    let mut agree = 0;
    let mut skipped = Vec::new();
    let mut bad = Vec::new();
    for (q, n, d) in cases {
        let formula = code::grm_second_weight(q, n, d).unwrap();
        let (p, m) = code::prime_power_parts(q).unwrap();
        let x = set(p, m, &vec![m; n]);
        match search::second_weight_bruteforce(&x, d, BUDGET) {
            Ok(Some(b)) if b == formula => agree += 1,
            Ok(b) => bad.push(format!("q={q} n={n} d={d}: formula {formula}, search {b:?}")),
            Err(Error::BudgetExceeded { .. }) => skipped.push((q, n, d)),
            Err(e) => bad.push(format!("q={q} n={n} d={d}: {e}")),
        }
    }
    outcome(bad.is_empty(), format!("{agree} AGREE, skipped {skipped:?} {bad:?}"))
}

fn test_codes() -> Vec<Arc<CartesianSet>> {
    vec![set(2, 1, &[1, 1]), set(2, 2, &[1, 2]), set(3, 1, &[1, 1]), set(2, 2, &[2, 2]), set(2, 2, &[1, 1, 2])]
}

fn random_poly(rng: &mut ChaCha8Rng, x: &Arc<CartesianSet>) -> ReducedPoly {
    let q = x.ctx().order() as usize;
    let values: Vec<FieldElement> = (0..x.len()).map(|_| FieldElement::from_index(rng.gen_range(0..q))).collect();
    ReducedPoly::interpolate(x, &values).unwrap()
}

fn random_linear(rng: &mut ChaCha8Rng, x: &Arc<CartesianSet>) -> ReducedPoly {
    let ctx = x.ctx();
    let q = ctx.order() as usize;
    let mut h = ReducedPoly::constant(x, FieldElement::from_index(rng.gen_range(0..q)));
    for i in 0..x.n() {
        let c = FieldElement::from_index(rng.gen_range(0..q));
        h = h.add(&ReducedPoly::var(x, i).scale(c)).unwrap();
    }
    h
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut pairs, mut round_trips, mut grau) = (0, 0, 0);
    let mut bad = Vec::new();
    for x in test_codes() {
        let group = AffineGroup::enumerate(&x, BUDGET).unwrap();
        for trial in 0..1000 {
            let g = random_poly(&mut rng, &x);
            let h = if trial % 2 == 0 { random_linear(&mut rng, &x) } else { random_poly(&mut rng, &x) };
            let f = g.mul(&h).unwrap();
            let (fv, hv) = (f.values(), h.values());
            pairs += 1;
            if hv.iter().zip(&fv).any(|(a, b)| a.is_zero() && !b.is_zero()) {
                bad.push(format!("{}: Z(h) not inside Z(gh)", label(&x)));
            }
            let quotient = affine::factor_out(&f, &h).unwrap();
            round_trips += 1;
            if quotient.mul(&h).unwrap() != f {
                bad.push(format!("{}: factor_out round trip", label(&x)));
            }
        }
        for _ in 0..100 {
            let f = loop {
                let f = random_poly(&mut rng, &x);
                if !f.is_zero() {
                    break f;
                }
            };
            let psi = group.map(rng.gen_range(0..group.len()));
            grau += 1;
            if affine::pullback(&f, psi).unwrap().degree() != f.degree() {
                bad.push(format!("{}: degree changed under {psi:?}", label(&x)));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{pairs} zero-set pairs, {round_trips} round trips, {grau} degree checks {:?}", &bad[..bad.len().min(5)]),
    )
}

/// Every `(A, β)` over the ambient field with `det A ≠ 0` and `A X + β = X`,
/// by direct scan for `n = 2`.
fn unpruned_count(x: &CartesianSet) -> usize {
    let ctx = x.ctx();
    let elems: Vec<FieldElement> = ctx.elements().collect();
    let points: Vec<Vec<FieldElement>> = x.points().collect();
    let mut count = 0;
    for &a00 in &elems {
        for &a01 in &elems {
            for &a10 in &elems {
                for &a11 in &elems {
                    if ctx.sub(ctx.mul(a00, a11), ctx.mul(a01, a10)).is_zero() {
                        continue;
                    }
                    for &b0 in &elems {
                        for &b1 in &elems {
                            let stable = points.iter().all(|p| {
                                let y0 = ctx.add(ctx.add(ctx.mul(a00, p[0]), ctx.mul(a01, p[1])), b0);
                                let y1 = ctx.add(ctx.add(ctx.mul(a10, p[0]), ctx.mul(a11, p[1])), b1);
                                x.in_coord(0, y0) && x.in_coord(1, y1)
                            });
                            count += stable as usize;
                        }
                    }
                }
            }
        }
    }
    count
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (x, expected) in [(set(2, 1, &[1, 1]), 24), (set(2, 2, &[1, 2]), 96)] {
        let group = AffineGroup::enumerate(&x, BUDGET).unwrap();
        let scan = unpruned_count(&x);
        let ctx = x.ctx();
        let members: HashSet<&AffineMap> = group.maps().iter().collect();
        let closed = group
            .maps()
            .iter()
            .all(|a| group.maps().iter().all(|b| members.contains(&a.compose(ctx, b))));
        let inverses = group.maps().iter().all(|a| {
            let inv = a.inverse(ctx).unwrap();
            members.contains(&inv) && a.compose(ctx, &inv).is_identity()
        });
        let identity_first = group.map(0).is_identity();
        ok &= group.len() == expected && scan == expected && closed && inverses && identity_first;
        parts.push(format!("{}: {} enumerated, {scan} by full scan", label(&x), group.len()));
    }
    outcome(ok, parts.join("; ") + "; closure and inverses hold")
}

fn criterion_9(runs: &[Verified]) -> Outcome {
    let mut words = 0;
    let mut bad = Vec::new();
    for r in runs {
        let check = minwords::fatores_batch(&r.inst).unwrap();
        words += check.checked;
        if !check.passed {
            bad.push(format!("{} d={}: {:?}", label(&r.set), r.inst.d, check.failures));
        }
    }
    outcome(bad.is_empty(), format!("{words} codewords below the bound factor through x_(k+1) ∘ φ {bad:?}"))
}

fn report(n: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let elapsed = start.elapsed();
    let passed = o.passed && elapsed < limit;
    let status = if passed { "PASS" } else { "FAIL" };
    println!("{status} criterion {n}: {} [{:.1}s]", o.detail, elapsed.as_secs_f64());
    passed
}

fn main() {
    let minute = Duration::from_secs(60);
    let mut all = true;
    all &= report(1, 5 * minute, criterion_1);
    let mut runs = Vec::new();
    all &= report(2, 15 * minute, || {
        let (verified, skipped) = instances();
        let o = criterion_2(&verified, &skipped);
        runs = verified;
        o
    });
    all &= report(3, 15 * minute, || criterion_3(&runs));
    all &= report(4, minute, criterion_4);
    all &= report(5, 5 * minute, criterion_5);
    all &= report(6, 10 * minute, criterion_6);
    all &= report(7, 10 * minute, criterion_7);
    all &= report(8, 5 * minute, criterion_8);
    all &= report(9, 15 * minute, || criterion_9(&runs));
    if !all {
        std::process::exit(1);
    }
}
