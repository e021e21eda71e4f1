//! Plain and automorphic word maps, fiber distributions and fiber maxima.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::groups::{AutSet, Automorphism, FiniteGroup, SubgroupHandle};
use crate::words::{ReducedWord, Sign};
use crate::{Error, Limits, Result};

/// `(α_1, ..., α_l)`, one automorphism per word position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutTuple {
    entries: Vec<Automorphism>,
}

impl AutTuple {
    pub fn new(entries: Vec<Automorphism>) -> AutTuple {
        AutTuple { entries }
    }

    pub fn identity(l: usize, order: usize) -> AutTuple {
        AutTuple {
            entries: vec![Automorphism::identity(order); l],
        }
    }

    /// Members of `set` at the given indices.
    pub fn from_indices(set: &AutSet, indices: &[usize]) -> AutTuple {
        AutTuple {
            entries: indices.iter().map(|&i| set.get(i).clone()).collect(),
        }
    }

    pub fn entries(&self) -> &[Automorphism] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_args(g: &FiniteGroup, w: &ReducedWord, args: &[usize]) -> Result<()> {
    if args.len() != w.arity() {
        return Err(Error::Arity {
            expected: w.arity(),
            got: args.len(),
        });
    }
    if let Some(&bad) = args.iter().find(|&&x| x >= g.order()) {
        return Err(Error::OutOfRange {
            index: bad,
            max: g.order() - 1,
        });
    }
    Ok(())
}

fn check_tuple(g: &FiniteGroup, w: &ReducedWord, auts: &AutTuple) -> Result<()> {
    if auts.len() != w.len() {
        return Err(Error::Arity {
            expected: w.len(),
            got: auts.len(),
        });
    }
    if auts.entries.iter().any(|a| a.order_of_group() != g.order()) {
        return Err(Error::Param("automorphism acts on a different group".into()));
    }
    Ok(())
}

/// `g_{ι(1)}^{ε_1} ··· g_{ι(l)}^{ε_l}`.
pub fn eval_word(g: &FiniteGroup, w: &ReducedWord, args: &[usize]) -> Result<usize> {
    check_args(g, w, args)?;
    Ok(w.letters().iter().fold(0, |acc, letter| {
        let x = args[letter.var as usize - 1];
        let x = if letter.sign.is_inverse() { g.inv(x) } else { x };
        g.mul(acc, x)
    }))
}

/// `α_1(g_{ι(1)})^{ε_1} ··· α_l(g_{ι(l)})^{ε_l}`.
pub fn eval_automorphic(
    g: &FiniteGroup,
    w: &ReducedWord,
    auts: &AutTuple,
    args: &[usize],
) -> Result<usize> {
    check_args(g, w, args)?;
    check_tuple(g, w, auts)?;
    Ok(w
        .letters()
        .iter()
        .zip(&auts.entries)
        .fold(0, |acc, (letter, a)| {
            let x = a.apply(args[letter.var as usize - 1]);
            let x = if letter.sign.is_inverse() { g.inv(x) } else { x };
            g.mul(acc, x)
        }))
}

/// The word with its automorphisms folded into per-position lookup tables.
struct Compiled {
    vars: Vec<usize>,
    tables: Vec<Vec<u16>>,
}

impl Compiled {
    fn new(g: &FiniteGroup, w: &ReducedWord, auts: &[&Automorphism]) -> Compiled {
        let vars = w.letters().iter().map(|l| l.var as usize - 1).collect();
        let tables = w
            .letters()
            .iter()
            .zip(auts)
            .map(|(letter, a)| {
                g.elements()
                    .map(|x| {
                        let y = a.apply(x);
                        (if letter.sign == Sign::Minus { g.inv(y) } else { y }) as u16
                    })
                    .collect()
            })
            .collect();
        Compiled { vars, tables }
    }

    #[inline]
    fn eval(&self, g: &FiniteGroup, args: &[usize]) -> usize {
        let mut acc = 0usize;
        for (t, &v) in self.tables.iter().zip(&self.vars) {
            acc = g.mul(acc, t[args[v]] as usize);
        }
        acc
    }

    /// Adds the fiber counts over all arguments with first coordinate
    /// `first` (or the single empty argument when `d = 0`).
    fn count_slice(&self, g: &FiniteGroup, d: usize, first: usize, counts: &mut [u64]) {
        if d == 0 {
            counts[self.eval(g, &[])] += 1;
            return;
        }
        let n = g.order();
        let mut args = vec![0usize; d];
        args[0] = first;
        loop {
            counts[self.eval(g, &args)] += 1;
            let mut i = d - 1;
            loop {
                if i == 0 {
                    return;
                }
                args[i] += 1;
                if args[i] < n {
                    break;
                }
                args[i] = 0;
                i -= 1;
            }
        }
    }

    fn distribution(&self, g: &FiniteGroup, d: usize) -> Vec<u64> {
        let mut counts = vec![0u64; g.order()];
        let firsts = if d == 0 { 1 } else { g.order() };
        for first in 0..firsts {
            self.count_slice(g, d, first, &mut counts);
        }
        counts
    }

    fn distribution_parallel(&self, g: &FiniteGroup, d: usize) -> Vec<u64> {
        if d == 0 {
            return self.distribution(g, d);
        }
        (0..g.order())
            .into_par_iter()
            .fold(
                || vec![0u64; g.order()],
                |mut acc, first| {
                    self.count_slice(g, d, first, &mut acc);
                    acc
                },
            )
            .reduce(
                || vec![0u64; g.order()],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    }
}

/// Fiber sizes of one automorphic word map, indexed by target element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDistribution {
    pub counts: Vec<u64>,
    pub group_order: usize,
    pub arity: usize,
}

impl FiberDistribution {
    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// Largest fiber and the smallest target attaining it.
    pub fn max(&self) -> (u64, usize) {
        let mut best = (0, 0);
        for (t, &c) in self.counts.iter().enumerate() {
            if c > best.0 {
                best = (c, t);
            }
        }
        best
    }
}

/// `|G|^d`, saturating.
pub fn domain_size(order: usize, d: usize) -> u128 {
    (0..d).fold(1u128, |acc, _| acc.saturating_mul(order as u128))
}

fn require_budget(needed: u128, limits: &Limits) -> Result<()> {
    if needed > limits.budget as u128 {
        Err(Error::Budget {
            needed,
            budget: limits.budget,
        })
    } else {
        Ok(())
    }
}

/// Exact fiber sizes of `w_G^{(auts)}` by enumerating `G^d`.
pub fn fiber_distribution(
    g: &FiniteGroup,
    w: &ReducedWord,
    auts: &AutTuple,
    limits: &Limits,
) -> Result<FiberDistribution> {
    check_tuple(g, w, auts)?;
    let d = w.arity();
    require_budget(domain_size(g.order(), d), limits)?;
    let refs: Vec<&Automorphism> = auts.entries.iter().collect();
    let counts = Compiled::new(g, w, &refs).distribution_parallel(g, d);
    Ok(FiberDistribution {
        counts,
        group_order: g.order(),
        arity: d,
    })
}

fn ratio(num: u64, order: usize, d: usize) -> BigRational {
    let den = BigInt::from(order).pow(d as u32);
    BigRational::new(BigInt::from(num), den)
}

/// `Π_w(G)` and `π_w(G) = Π_w(G) / |G|^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiResult {
    pub value: u64,
    #[serde(serialize_with = "crate::serialize_ratio")]
    pub proportion: BigRational,
    pub target: usize,
}

pub fn pi_w(g: &FiniteGroup, w: &ReducedWord, limits: &Limits) -> Result<PiResult> {
    let dist = fiber_distribution(g, w, &AutTuple::identity(w.len(), g.order()), limits)?;
    let (value, target) = dist.max();
    Ok(PiResult {
        value,
        proportion: ratio(value, g.order(), w.arity()),
        target,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Any,
    Element(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exact,
    Sample { draws: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Exact,
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub tuples: u64,
    pub evaluations: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxFiberResult {
    pub value: u64,
    #[serde(serialize_with = "crate::serialize_ratio")]
    pub proportion: BigRational,
    /// Indices into the automorphism set, one per word position.
    pub witness_indices: Vec<usize>,
    #[serde(skip)]
    pub witness_tuple: AutTuple,
    pub witness_target: usize,
    pub status: SearchStatus,
    pub stats: SearchStats,
}

fn decode_tuple(mut idx: u128, base: usize, l: usize) -> Vec<usize> {
    let mut out = vec![0; l];
    for slot in out.iter_mut().rev() {
        *slot = (idx % base as u128) as usize;
        idx /= base as u128;
    }
    out
}

/// `(value, tuple indices, target)`; larger value wins, then smaller tuple,
/// then smaller target.
type Candidate = (u64, Vec<usize>, usize);

fn better(a: Candidate, b: Candidate) -> Candidate {
    use std::cmp::Ordering::*;
    match a.0.cmp(&b.0) {
        Greater => a,
        Less => b,
        Equal => match a.1.cmp(&b.1).then(a.2.cmp(&b.2)) {
            Greater => b,
            _ => a,
        },
    }
}

fn best_for_tuple(
    g: &FiniteGroup,
    w: &ReducedWord,
    a: &AutSet,
    indices: Vec<usize>,
    target: Target,
    inner_parallel: bool,
) -> Candidate {
    let refs: Vec<&Automorphism> = indices.iter().map(|&i| a.get(i)).collect();
    let c = Compiled::new(g, w, &refs);
    let counts = if inner_parallel {
        c.distribution_parallel(g, w.arity())
    } else {
        c.distribution(g, w.arity())
    };
    match target {
        Target::Element(t) => (counts[t], indices, t),
        Target::Any => {
            let dist = FiberDistribution {
                counts,
                group_order: g.order(),
                arity: w.arity(),
            };
            let (v, t) = dist.max();
            (v, indices, t)
        }
    }
}

fn validate_search(g: &FiniteGroup, a: &AutSet, target: Target) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptyAutSet);
    }
    if a.group_order() != g.order() {
        return Err(Error::Param("automorphism set acts on a different group".into()));
    }
    if let Target::Element(t) = target {
        if t >= g.order() {
            return Err(Error::OutOfRange {
                index: t,
                max: g.order() - 1,
            });
        }
    }
    Ok(())
}

/// `P_w^{(A)}(G, g)` (fixed target) or `P_w^{(A)}(G)` (any target), exactly
/// over `A^l` or as a sampled lower bound.
pub fn max_fiber(
    g: &FiniteGroup,
    w: &ReducedWord,
    a: &AutSet,
    target: Target,
    mode: SearchMode,
    limits: &Limits,
) -> Result<MaxFiberResult> {
    validate_search(g, a, target)?;
    let l = w.len();
    let d = w.arity();
    let per_tuple = domain_size(g.order(), d);
    let (best, tuples, status, seed) = match mode {
        SearchMode::Exact => {
            let count = domain_size(a.len(), l);
            require_budget(count.saturating_mul(per_tuple), limits)?;
            let inner = count < 16;
            let best = (0..count as u64)
                .into_par_iter()
                .map(|i| {
                    best_for_tuple(g, w, a, decode_tuple(i as u128, a.len(), l), target, inner)
                })
                .reduce_with(better)
                .expect("at least one tuple");
            (best, count as u64, SearchStatus::Exact, None)
        }
        SearchMode::Sample { draws, seed } => {
            let draws = draws.max(1);
            require_budget((draws as u128).saturating_mul(per_tuple), limits)?;
            let tuples = sample_tuples(a, l, draws, seed);
            let best = tuples
                .into_par_iter()
                .map(|t| best_for_tuple(g, w, a, t, target, false))
                .reduce_with(better)
                .expect("at least one draw");
            (best, draws, SearchStatus::LowerBound, Some(seed))
        }
    };
    let (value, indices, witness_target) = best;
    Ok(MaxFiberResult {
        value,
        proportion: ratio(value, g.order(), d),
        witness_tuple: AutTuple::from_indices(a, &indices),
        witness_indices: indices,
        witness_target,
        status,
        stats: SearchStats {
            tuples,
            evaluations: (tuples as u128) * per_tuple,
            seed,
        },
    })
}

/// The identity tuple first (when `A` contains the identity), then seeded
/// uniform draws.
fn sample_tuples(a: &AutSet, l: usize, draws: u64, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(draws as usize);
    if let Some(id) = a.identity_index() {
        out.push(vec![id; l]);
    }
    while (out.len() as u64) < draws {
        out.push((0..l).map(|_| rng.gen_range(0..a.len())).collect());
    }
    out
}

/// For every target `g`, `max` over `A^l` of the fiber size of `g`.
pub fn max_fiber_per_target(
    g: &FiniteGroup,
    w: &ReducedWord,
    a: &AutSet,
    limits: &Limits,
) -> Result<Vec<u64>> {
    validate_search(g, a, Target::Any)?;
    let l = w.len();
    let d = w.arity();
    let count = domain_size(a.len(), l);
    require_budget(count.saturating_mul(domain_size(g.order(), d)), limits)?;
    let n = g.order();
    let maxima = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let idx = decode_tuple(i as u128, a.len(), l);
            let refs: Vec<&Automorphism> = idx.iter().map(|&j| a.get(j)).collect();
            Compiled::new(g, w, &refs).distribution(g, d)
        })
        .reduce(
            || vec![0u64; n],
            |mut x, y| {
                for (p, q) in x.iter_mut().zip(y) {
                    *p = (*p).max(q);
                }
                x
            },
        );
    Ok(maxima)
}

/// The equation on `N` obtained from `w^{(α)}(n_1 g_1, ..., n_d g_d) = target`.
#[derive(Debug, Clone)]
pub struct CosetRewrite {
    /// `N` as a group; element `k` is `embedding[k]` in `G`.
    pub subgroup: FiniteGroup,
    pub embedding: Vec<usize>,
    pub beta: AutTuple,
    /// `c_i` per position, as elements of `G`.
    pub conjugators: Vec<usize>,
}

/// Rewrites the coset equation as an automorphic equation `w^{(β)} = 1` on `N`.
///
/// With `f_j = α_j(g_{ι(j)})^{ε_j}`, `c_i = f_1 ··· f_{i-1}` for `ε_i = +1`
/// and `c_i = f_1 ··· f_i` for `ε_i = -1`; `β_i = (conj(c_i) ∘ α_i)|_N`.
pub fn rewrite_coset_equation(
    g: &FiniteGroup,
    n: &SubgroupHandle,
    w: &ReducedWord,
    auts: &AutTuple,
    base: &[usize],
    target: usize,
) -> Result<CosetRewrite> {
    if target >= g.order() {
        return Err(Error::OutOfRange {
            index: target,
            max: g.order() - 1,
        });
    }
    if eval_automorphic(g, w, auts, base)? != target {
        return Err(Error::BaseNotSolution);
    }
    let member = n.membership(g);
    if !n.elements().iter().all(|&x| g.elements().all(|t| member[g.conj(t, x)])) {
        return Err(Error::NotNormal);
    }
    let pos = n.positions(g);
    let mut prefix = 0usize;
    let mut conjugators = Vec::with_capacity(w.len());
    let mut beta = Vec::with_capacity(w.len());
    for (letter, a) in w.letters().iter().zip(auts.entries()) {
        if !a.stabilizes(n.elements(), &member) {
            return Err(Error::NotCharacteristic);
        }
        let y = a.apply(base[letter.var as usize - 1]);
        let f = if letter.sign.is_inverse() { g.inv(y) } else { y };
        let c = match letter.sign {
            Sign::Plus => prefix,
            Sign::Minus => g.mul(prefix, f),
        };
        prefix = g.mul(prefix, f);
        conjugators.push(c);
        let map = n
            .elements()
            .iter()
            .map(|&x| pos[g.conj(c, a.apply(x))])
            .collect();
        beta.push(Automorphism::from_map_unchecked(map));
    }
    Ok(CosetRewrite {
        subgroup: n.as_group(g),
        embedding: n.elements().to_vec(),
        beta: AutTuple::new(beta),
        conjugators,
    })
}

/// Exhaustive two-sided check of a rewrite over `N^d`; returns the first
/// `(n_1, ..., n_d)` (as `G` indices) where the equivalence fails.
pub fn verify_rewrite(
    g: &FiniteGroup,
    w: &ReducedWord,
    auts: &AutTuple,
    base: &[usize],
    target: usize,
    rw: &CosetRewrite,
    limits: &Limits,
) -> Result<Option<Vec<usize>>> {
    let d = w.arity();
    let m = rw.embedding.len();
    require_budget(domain_size(m, d), limits)?;
    let total = domain_size(m, d) as u64;
    let first_bad = (0..total).into_par_iter().find_first(|&i| {
        let local = decode_tuple(i as u128, m, d);
        let shifted: Vec<usize> = local
            .iter()
            .zip(base)
            .map(|(&k, &gk)| g.mul(rw.embedding[k], gk))
            .collect();
        let lhs = eval_automorphic(g, w, auts, &shifted).expect("checked arity") == target;
        let rhs = eval_automorphic(&rw.subgroup, w, &rw.beta, &local).expect("checked arity") == 0;
        lhs != rhs
    });
    Ok(first_bad.map(|i| {
        decode_tuple(i as u128, m, d)
            .into_iter()
            .map(|k| rw.embedding[k])
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{
        automorphism_group, center, identity_autset, inner_automorphisms, make_group,
    };
    use crate::words::parse_word;

    fn w(s: &str) -> ReducedWord {
        parse_word(s).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    /// Direct evaluation oracle: powers and products only.
    fn oracle_eval(g: &FiniteGroup, w: &ReducedWord, auts: &[Automorphism], args: &[usize]) -> usize {
        let mut acc = 0;
        for (i, letter) in w.letters().iter().enumerate() {
            let x = auts[i].apply(args[letter.var as usize - 1]);
            acc = g.mul(acc, g.pow(x, letter.sign.value() as i64));
        }
        acc
    }

    #[test]
    fn eval_basics() {
        let c4 = make_group("cyc:4").unwrap();
        assert_eq!(eval_word(&c4, &w("x1^2"), &[1]).unwrap(), 2);
        assert_eq!(eval_word(&c4, &w("x1"), &[3]).unwrap(), 3);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(eval_word(&c4, &w("[x1,x2]"), &[a, b]).unwrap(), 0);
            }
        }
        assert!(matches!(
            eval_word(&c4, &w("x1 x2"), &[1]),
            Err(Error::Arity { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn identity_tuple_matches_plain_word() {
        let s3 = make_group("sym:3").unwrap();
        let word = w("[x1,x2]");
        let id = AutTuple::identity(4, 6);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(
                    eval_automorphic(&s3, &word, &id, &[a, b]).unwrap(),
                    eval_word(&s3, &word, &[a, b]).unwrap()
                );
            }
        }
    }

    #[test]
    fn automorphic_on_c3() {
        let c3 = make_group("cyc:3").unwrap();
        let inv = Automorphism::from_map(&c3, vec![0, 2, 1]).unwrap();
        let id = Automorphism::identity(3);
        let one = AutTuple::new(vec![inv.clone()]);
        for x in 0..3 {
            assert_eq!(eval_automorphic(&c3, &w("x1"), &one, &[x]).unwrap(), c3.inv(x));
        }
        // [x1,x2] = x1 x2 x1^-1 x2^-1 with α_1 = inversion
        let tuple = vec![inv, id.clone(), id.clone(), id];
        let word = w("[x1,x2]");
        let t = AutTuple::new(tuple.clone());
        let got = eval_automorphic(&c3, &word, &t, &[1, 0]).unwrap();
        assert_eq!(got, oracle_eval(&c3, &word, &tuple, &[1, 0]));
        // additively: -1 + 0 - 1 - 0 = 1 (mod 3)
        assert_eq!(got, 1);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(
                    eval_automorphic(&c3, &word, &t, &[a, b]).unwrap(),
                    oracle_eval(&c3, &word, &tuple, &[a, b])
                );
            }
        }
    }

    #[test]
    fn distributions() {
        let c2 = make_group("cyc:2").unwrap();
        let d = fiber_distribution(&c2, &w("x1^2"), &AutTuple::identity(2, 2), &lim()).unwrap();
        assert_eq!(d.counts, vec![2, 0]);

        let d6 = make_group("dih:3").unwrap();
        let d = fiber_distribution(&d6, &w("x1^2"), &AutTuple::identity(2, 6), &lim()).unwrap();
        // index i + 3j = r^i s^j: identity, r, r^2, then reflections
        assert_eq!(d.counts, vec![4, 1, 1, 0, 0, 0]);
        assert_eq!(d.total(), 6);

        let s3 = make_group("sym:3").unwrap();
        let aut = automorphism_group(&s3, &lim()).unwrap();
        let t = AutTuple::from_indices(&aut, &[3, 5]);
        let d = fiber_distribution(&s3, &w("x1 x2"), &t, &lim()).unwrap();
        assert!(d.counts.iter().all(|&c| c == 6));
    }

    #[test]
    fn pi_values() {
        let d6 = make_group("dih:3").unwrap();
        let p = pi_w(&d6, &w("x1^2"), &lim()).unwrap();
        assert_eq!(p.value, 4);
        assert_eq!(crate::ratio_string(&p.proportion), "2/3");
        let v4 = make_group("prod:(cyc:2)x(cyc:2)").unwrap();
        let p = pi_w(&v4, &w("[x1,x2]"), &lim()).unwrap();
        assert_eq!((p.value, crate::ratio_string(&p.proportion)), (16, "1".to_string()));
        let c3 = make_group("cyc:3").unwrap();
        assert_eq!(pi_w(&c3, &w("x1^2"), &lim()).unwrap().value, 1);
        let triv = make_group("cyc:1").unwrap();
        let p = pi_w(&triv, &w("[x1,x2] x3^5"), &lim()).unwrap();
        assert_eq!((p.value, crate::ratio_string(&p.proportion)), (1, "1".to_string()));
    }

    #[test]
    fn max_fiber_examples() {
        let s3 = make_group("sym:3").unwrap();
        let aut = automorphism_group(&s3, &lim()).unwrap();
        let r = max_fiber(&s3, &w("x1 x2"), &aut, Target::Any, SearchMode::Exact, &lim()).unwrap();
        assert_eq!(r.value, 6);
        assert_eq!(crate::ratio_string(&r.proportion), "1/6");
        assert_eq!(r.witness_indices, vec![0, 0]);
        assert_eq!(r.witness_target, 0);
        assert_eq!(r.stats.tuples, 36);

        let c2 = make_group("cyc:2").unwrap();
        let r = max_fiber(&c2, &w("x1^2"), &identity_autset(&c2), Target::Any, SearchMode::Exact, &lim())
            .unwrap();
        assert_eq!((r.value, crate::ratio_string(&r.proportion)), (2, "1".to_string()));

        let d6 = make_group("dih:3").unwrap();
        let inn = inner_automorphisms(&d6);
        let r = max_fiber(&d6, &w("x1^2"), &inn, Target::Any, SearchMode::Exact, &lim()).unwrap();
        assert!(r.value >= 4);
        assert_eq!(r.witness_target, 0);
        let re = fiber_distribution(&d6, &w("x1^2"), &r.witness_tuple, &lim()).unwrap();
        assert_eq!(re.counts[r.witness_target], r.value);
    }

    #[test]
    fn sampling_is_lower_bound_and_seeded() {
        let g = make_group("alt:4").unwrap();
        let aut = automorphism_group(&g, &lim()).unwrap();
        let word = w("[x1,x2]");
        let exact = max_fiber(&g, &word, &aut, Target::Any, SearchMode::Exact, &lim()).unwrap();
        let mode = SearchMode::Sample { draws: 50, seed: 3 };
        let s1 = max_fiber(&g, &word, &aut, Target::Any, mode, &lim()).unwrap();
        let s2 = max_fiber(&g, &word, &aut, Target::Any, mode, &lim()).unwrap();
        assert_eq!(s1.status, SearchStatus::LowerBound);
        assert!(s1.value <= exact.value);
        assert_eq!((s1.value, &s1.witness_indices), (s2.value, &s2.witness_indices));
        assert_eq!(s1.stats.seed, Some(3));
        let plain = pi_w(&g, &word, &lim()).unwrap();
        assert!(s1.value >= plain.value);
    }

    #[test]
    fn errors() {
        let g = make_group("sym:3").unwrap();
        let aut = automorphism_group(&g, &lim()).unwrap();
        let small = Limits {
            budget: 100,
            ..Limits::default()
        };
        assert!(matches!(
            max_fiber(&g, &w("x1 x2 x3"), &aut, Target::Any, SearchMode::Exact, &small),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(
            max_fiber(&g, &w("x1"), &aut, Target::Element(9), SearchMode::Exact, &lim()),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn monotone_in_autset() {
        for spec in ["sym:3", "dih:4", "q8"] {
            let g = make_group(spec).unwrap();
            let sets = [
                identity_autset(&g),
                inner_automorphisms(&g),
                automorphism_group(&g, &lim()).unwrap(),
            ];
            for word in ["x1^2", "[x1,x2]", "x1^2 x2^2"] {
                let vals: Vec<u64> = sets
                    .iter()
                    .map(|a| {
                        max_fiber(&g, &w(word), a, Target::Any, SearchMode::Exact, &lim())
                            .unwrap()
                            .value
                    })
                    .collect();
                assert!(vals[0] <= vals[1] && vals[1] <= vals[2], "{spec} {word} {vals:?}");
                assert_eq!(vals[0], pi_w(&g, &w(word), &lim()).unwrap().value);
            }
        }
    }

    #[test]
    fn per_target_maxima_peak_at_identity() {
        let g = make_group("dih:4").unwrap();
        let inn = inner_automorphisms(&g);
        for word in ["x1^2", "[x1,x2]", "x1 x2 x1"] {
            let m = max_fiber_per_target(&g, &w(word), &inn, &lim()).unwrap();
            assert_eq!(m[0], *m.iter().max().unwrap());
        }
    }

    #[test]
    fn rewrite_single_letter() {
        let g = make_group("dih:4").unwrap();
        let z = center(&g);
        let aut = automorphism_group(&g, &lim()).unwrap();
        let t = AutTuple::from_indices(&aut, &[5]);
        let rw = rewrite_coset_equation(&g, &z, &w("x1"), &t, &[3], t.entries()[0].apply(3)).unwrap();
        assert_eq!(rw.conjugators, vec![0]);
        let pos = z.positions(&g);
        for (k, &x) in z.elements().iter().enumerate() {
            assert_eq!(rw.beta.entries()[0].apply(k), pos[t.entries()[0].apply(x)]);
        }
    }

    #[test]
    fn rewrite_commutator_conjugators() {
        let g = make_group("sym:4").unwrap();
        let n = crate::groups::select_subgroup(&g, "order:4", &lim()).unwrap();
        let aut = automorphism_group(&g, &lim()).unwrap();
        let word = w("[x1,x2]");
        let t = AutTuple::from_indices(&aut, &[1, 7, 11, 20]);
        let base = [5, 9];
        let target = eval_automorphic(&g, &word, &t, &base).unwrap();
        let rw = rewrite_coset_equation(&g, &n, &word, &t, &base, target).unwrap();
        let a = |i: usize, x: usize| t.entries()[i].apply(x);
        let (g1, g2) = (base[0], base[1]);
        let f1 = a(0, g1);
        let f2 = a(1, g2);
        let f3 = g.inv(a(2, g1));
        let f4 = g.inv(a(3, g2));
        let f123 = g.mul(g.mul(f1, f2), f3);
        assert_eq!(rw.conjugators, vec![0, f1, f123, g.mul(f123, f4)]);
        assert_eq!(verify_rewrite(&g, &word, &t, &base, target, &rw, &lim()).unwrap(), None);
    }

    #[test]
    fn rewrite_soundness_exhaustive() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (spec, sel) in [("dih:4", "center"), ("sym:4", "order:4"), ("sym:4", "order:12"), ("q8", "center")] {
            let g = make_group(spec).unwrap();
            let n = crate::groups::select_subgroup(&g, sel, &lim()).unwrap();
            let aut = automorphism_group(&g, &lim()).unwrap();
            for word in ["x1^2", "[x1,x2]", "x1 x2^-1 x1^2 x3", "x1^-3"] {
                let word = w(word);
                for _ in 0..4 {
                    let idx: Vec<usize> = (0..word.len()).map(|_| rng.gen_range(0..aut.len())).collect();
                    let t = AutTuple::from_indices(&aut, &idx);
                    let base: Vec<usize> = (0..word.arity()).map(|_| rng.gen_range(0..g.order())).collect();
                    let target = eval_automorphic(&g, &word, &t, &base).unwrap();
                    let rw = rewrite_coset_equation(&g, &n, &word, &t, &base, target).unwrap();
                    assert!(rw.beta.entries().iter().all(|b| b.is_homomorphism(&rw.subgroup)));
                    assert_eq!(
                        verify_rewrite(&g, &word, &t, &base, target, &rw, &lim()).unwrap(),
                        None,
                        "{spec} {sel} {word}"
                    );
                }
            }
        }
    }

    #[test]
    fn rewrite_rejects_non_solution() {
        let g = make_group("dih:4").unwrap();
        let z = center(&g);
        let t = AutTuple::identity(2, 8);
        let word = w("x1^2");
        let real = eval_automorphic(&g, &word, &t, &[1]).unwrap();
        let wrong = (real + 1) % 8;
        assert_eq!(
            rewrite_coset_equation(&g, &z, &word, &t, &[1], wrong).unwrap_err(),
            Error::BaseNotSolution
        );
    }
}
