//! Exhaustive and sampled checkers for the fiber inequalities, each returning
//! a [`CheckReport`] whose failures carry a re-evaluable counterexample.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::fibers::{
    domain_size, eval_automorphic, fiber_distribution, max_fiber, max_fiber_per_target,
    rewrite_coset_equation, verify_rewrite, AutTuple, SearchMode, Target,
};
use crate::groups::{
    automorphism_group, generated_subgroup, identity_autset, induced_autset, inner_automorphisms,
    is_simple, make_group_with, quotient, restricted_autset, select_subgroup, AutSet, FiniteGroup,
    SubgroupHandle, WreathAutomorphisms,
};
use crate::words::{parse_nonempty_word, variations, ReducedWord};
use crate::{ratio_string, Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    InconclusiveSampled,
}

impl Outcome {
    /// Pass, or sampled without a violation.
    pub fn is_ok(self) -> bool {
        self != Outcome::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Decimal string; can exceed 64 bits in principle.
    pub evaluations: String,
    pub searches: u64,
}

impl Counters {
    fn new(evaluations: u128, searches: u64) -> Counters {
        Counters {
            evaluations: evaluations.to_string(),
            searches,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub claim: String,
    pub parameters: Value,
    pub outcome: Outcome,
    pub witness: Value,
    pub counters: Counters,
}

fn rat(num: u64, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn require_inner(a: &AutSet) -> Result<()> {
    if a.contains_inner() {
        Ok(())
    } else {
        Err(Error::Param("automorphism set must contain Inn(G)".into()))
    }
}

/// Resolves `id`, `inn`, `aut`, or `auto` (`aut` unless `|Aut(G)|^l` exceeds
/// `10^6` tuples, then `inn`).
pub fn resolve_autset(g: &FiniteGroup, selector: &str, l: usize, limits: &Limits) -> Result<AutSet> {
    match selector {
        "id" => Ok(identity_autset(g)),
        "inn" => Ok(inner_automorphisms(g)),
        "aut" => automorphism_group(g, limits),
        "auto" => {
            let aut = automorphism_group(g, limits)?;
            if domain_size(aut.len(), l) > 1_000_000 {
                Ok(inner_automorphisms(g))
            } else {
                Ok(aut)
            }
        }
        other => Err(Error::Param(format!("unknown automorphism set `{other}`"))),
    }
}

/// `P_w^{(A)}(G, g) ≤ P_w^{(A)}(G, 1)` for every `g`.
pub fn check_identity_maximal(
    g: &FiniteGroup,
    w: &ReducedWord,
    a: &AutSet,
    limits: &Limits,
) -> Result<CheckReport> {
    require_inner(a)?;
    let maxima = max_fiber_per_target(g, w, a, limits)?;
    let per_search = domain_size(a.len(), w.len()) * domain_size(g.order(), w.arity());
    let parameters = json!({
        "group": g.spec(),
        "word": w.to_string(),
        "autset_size": a.len(),
    });
    let identity_value = maxima[0];
    let violator = maxima.iter().position(|&m| m > identity_value);
    let (outcome, witness, searches) = match violator {
        None => (
            Outcome::Pass,
            json!({
                "identity_value": identity_value.to_string(),
                "max_value": identity_value.to_string(),
                "identity_proportion": ratio_string(&rat(identity_value, domain_size(g.order(), w.arity()))),
            }),
            1,
        ),
        Some(t) => {
            let r = max_fiber(g, w, a, Target::Element(t), SearchMode::Exact, limits)?;
            (
                Outcome::Fail,
                json!({
                    "target": t,
                    "target_value": r.value.to_string(),
                    "identity_value": identity_value.to_string(),
                    "tuple_indices": r.witness_indices,
                }),
                2,
            )
        }
    };
    Ok(CheckReport {
        claim: "identity-maximal".into(),
        parameters,
        outcome,
        witness,
        counters: Counters::new(per_search * searches as u128, searches),
    })
}

/// `P^{(A)}(G,g) ≤ P^{(ind A)}(G/N, π(g)) · P^{(res A)}(N, 1)` for every `g`,
/// and `P^{(A)}(G) ≤ P^{(ind A)}(G/N) · P^{(res A)}(N)`.
pub fn check_submultiplicative(
    g: &FiniteGroup,
    n: &SubgroupHandle,
    w: &ReducedWord,
    a: &AutSet,
    limits: &Limits,
) -> Result<CheckReport> {
    require_inner(a)?;
    let q = quotient(g, n)?;
    let ind = induced_autset(g, n, &q, a)?;
    let res = restricted_autset(g, n, a)?;
    let ng = n.as_group(g);
    let m_g = max_fiber_per_target(g, w, a, limits)?;
    let m_q = max_fiber_per_target(&q.quotient, w, &ind, limits)?;
    let m_n = max_fiber_per_target(&ng, w, &res, limits)?;
    let cost = |order: usize, set: &AutSet| {
        domain_size(set.len(), w.len()) * domain_size(order, w.arity())
    };
    let evaluations = cost(g.order(), a) + cost(q.quotient.order(), &ind) + cost(ng.order(), &res);
    let n_one = m_n[0] as u128;
    let part1 = g
        .elements()
        .find(|&x| m_g[x] as u128 > m_q[q.projection[x]] as u128 * n_one);
    let p_g = *m_g.iter().max().unwrap();
    let p_q = *m_q.iter().max().unwrap();
    let p_n = *m_n.iter().max().unwrap();
    let part3 = p_g as u128 <= p_q as u128 * p_n as u128;
    let parameters = json!({
        "group": g.spec(),
        "subgroup_order": n.order(),
        "word": w.to_string(),
        "autset_size": a.len(),
        "induced_size": ind.len(),
        "restricted_size": res.len(),
    });
    let mut witness = json!({
        "P_G": p_g.to_string(),
        "P_quotient": p_q.to_string(),
        "P_subgroup": p_n.to_string(),
        "P_subgroup_identity": m_n[0].to_string(),
    });
    let outcome = match (part1, part3) {
        (None, true) => Outcome::Pass,
        (Some(x), _) => {
            let r = max_fiber(g, w, a, Target::Element(x), SearchMode::Exact, limits)?;
            witness["part"] = json!(1);
            witness["target"] = json!(x);
            witness["target_value"] = json!(m_g[x].to_string());
            witness["quotient_value"] = json!(m_q[q.projection[x]].to_string());
            witness["tuple_indices"] = json!(r.witness_indices);
            Outcome::Fail
        }
        (None, false) => {
            witness["part"] = json!(3);
            Outcome::Fail
        }
    };
    Ok(CheckReport {
        claim: "submultiplicative".into(),
        parameters,
        outcome,
        witness,
        counters: Counters::new(evaluations, 3),
    })
}

/// `Π_{x^2}(D_{2o}) > Π_{x^2}(C_o) · Π_{x^2}(C_2)` for odd `o ≥ 3`.
pub fn check_dihedral_counterexample(o: usize, limits: &Limits) -> Result<CheckReport> {
    if o < 3 || o.is_multiple_of(2) {
        return Err(Error::Param(format!("o must be odd and at least 3, got {o}")));
    }
    let g = make_group_with(&format!("dih:{o}"), limits)?;
    let w = parse_nonempty_word("x1^2")?;
    let rotations = generated_subgroup(&g, &[1])?;
    let q = quotient(&g, &rotations)?;
    let ng = rotations.as_group(&g);
    let pi = |h: &FiniteGroup| crate::fibers::pi_w(h, &w, limits).map(|r| r.value);
    let (p_g, p_n, p_q) = (pi(&g)?, pi(&ng)?, pi(&q.quotient)?);
    let violated = p_g > p_n * p_q;
    Ok(CheckReport {
        claim: "dihedral-counterexample".into(),
        parameters: json!({ "o": o, "word": w.to_string() }),
        outcome: if violated { Outcome::Pass } else { Outcome::Fail },
        witness: json!({
            "Pi_G": p_g.to_string(),
            "Pi_N": p_n.to_string(),
            "Pi_Q": p_q.to_string(),
            "product": (p_n * p_q).to_string(),
            "expected_Pi_G": (o + 1).to_string(),
        }),
        counters: Counters::new((2 * o + o + 2) as u128, 3),
    })
}

/// Seeded random rewrites, each verified over all of `N^d`.
pub fn check_rewrite(
    g: &FiniteGroup,
    n: &SubgroupHandle,
    w: &ReducedWord,
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<CheckReport> {
    let aut = automorphism_group(g, limits)?;
    let member = n.membership(g);
    if !aut.iter().all(|a| a.stabilizes(n.elements(), &member)) {
        return Err(Error::NotCharacteristic);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_trial = domain_size(n.order(), w.arity());
    let parameters = json!({
        "group": g.spec(),
        "subgroup_order": n.order(),
        "word": w.to_string(),
        "trials": trials,
        "seed": seed,
    });
    for trial in 0..trials {
        let idx: Vec<usize> = (0..w.len()).map(|_| rng.gen_range(0..aut.len())).collect();
        let tuple = AutTuple::from_indices(&aut, &idx);
        let base: Vec<usize> = (0..w.arity()).map(|_| rng.gen_range(0..g.order())).collect();
        let target = eval_automorphic(g, w, &tuple, &base)?;
        let rw = rewrite_coset_equation(g, n, w, &tuple, &base, target)?;
        if let Some(bad) = verify_rewrite(g, w, &tuple, &base, target, &rw, limits)? {
            return Ok(CheckReport {
                claim: "rewrite".into(),
                parameters,
                outcome: Outcome::Fail,
                witness: json!({
                    "trial": trial,
                    "tuple_indices": idx,
                    "base": base,
                    "target": target,
                    "subgroup_args": bad,
                }),
                counters: Counters::new(per_trial * (trial as u128 + 1), trial + 1),
            });
        }
    }
    Ok(CheckReport {
        claim: "rewrite".into(),
        parameters,
        outcome: Outcome::Pass,
        witness: json!({ "trials_passed": trials }),
        counters: Counters::new(per_trial * trials as u128, trials),
    })
}

/// Options for [`check_variation_bound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationBoundOptions {
    pub samples: u64,
    pub seed: u64,
    /// Use `⌊n/l²⌋` instead of `⌈n/l²⌉` in the exponent.
    #[serde(default)]
    pub floor: bool,
    /// Multiplies `ε` before comparing; `"1/2"` gives a falsified bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_scale: Option<String>,
}

impl Default for VariationBoundOptions {
    fn default() -> Self {
        VariationBoundOptions {
            samples: 1000,
            seed: 0,
            floor: false,
            epsilon_scale: None,
        }
    }
}

/// `ε(S, w)`: maximum of `p_{w'}(S)` over the variations `w'`, with the
/// flattened variation attaining it.
pub fn variation_epsilon(
    s: &FiniteGroup,
    w: &ReducedWord,
    aut: &AutSet,
    limits: &Limits,
) -> Result<(BigRational, String, u128, Vec<Value>)> {
    let mut distinct: Vec<ReducedWord> = variations(w).map(|v| v.flattened().clone()).collect();
    distinct.sort();
    distinct.dedup();
    let mut best: Option<(BigRational, String)> = None;
    let mut evaluations = 0u128;
    let mut table = Vec::new();
    for v in &distinct {
        let r = max_fiber(s, v, aut, Target::Any, SearchMode::Exact, limits)?;
        evaluations += r.stats.evaluations;
        table.push(json!({ "variation": v.to_string(), "p": ratio_string(&r.proportion) }));
        if best.as_ref().is_none_or(|(b, _)| r.proportion > *b) {
            best = Some((r.proportion.clone(), v.to_string()));
        }
    }
    let (eps, arg) = best.ok_or(Error::EmptyWord)?;
    Ok((eps, arg, evaluations, table))
}

/// `p_w(S^n) ≤ ε^{⌈n/l²⌉}`: exact for `n = 1`, sampled over wreath
/// automorphisms for `n ≥ 2`.
pub fn check_variation_bound(
    s: &FiniteGroup,
    n: usize,
    w: &ReducedWord,
    opts: &VariationBoundOptions,
    limits: &Limits,
) -> Result<CheckReport> {
    w.require_nonempty()?;
    if n == 0 {
        return Err(Error::Param("n must be positive".into()));
    }
    if s.is_abelian() || !is_simple(s) {
        return Err(Error::NotNonabelianSimple);
    }
    let aut = automorphism_group(s, limits)?;
    let (eps, eps_word, mut evaluations, table) = variation_epsilon(s, w, &aut, limits)?;
    let scale = match &opts.epsilon_scale {
        Some(t) => crate::bounds::parse_rational(t)?,
        None => BigRational::one(),
    };
    let eps_used = &eps * &scale;
    let l2 = (w.len() * w.len()) as u64;
    let n64 = n as u64;
    let exponent = if opts.floor { n64 / l2 } else { n64.div_ceil(l2) };
    let bound: BigRational = Pow::pow(&eps_used, exponent as u32);
    let mut parameters = json!({
        "group": s.spec(),
        "n": n,
        "word": w.to_string(),
        "exponent_rule": if opts.floor { "floor" } else { "ceil" },
    });
    if let Some(t) = &opts.epsilon_scale {
        parameters["epsilon_scale"] = json!(t);
    }
    let mut witness = json!({
        "epsilon": ratio_string(&eps),
        "epsilon_variation": eps_word,
        "variations": table,
        "exponent": exponent,
        "bound": ratio_string(&bound),
    });
    if n == 1 {
        let r = max_fiber(s, w, &aut, Target::Any, SearchMode::Exact, limits)?;
        evaluations += r.stats.evaluations;
        witness["p_w"] = json!(ratio_string(&r.proportion));
        let outcome = if r.proportion <= bound {
            Outcome::Pass
        } else {
            witness["tuple_indices"] = json!(r.witness_indices);
            witness["target"] = json!(r.witness_target);
            witness["fiber"] = json!(r.value.to_string());
            Outcome::Fail
        };
        return Ok(CheckReport {
            claim: "variation-bound".into(),
            parameters,
            outcome,
            witness,
            counters: Counters::new(evaluations, 0),
        });
    }
    let power_order = s.order().checked_pow(n as u32).unwrap_or(usize::MAX);
    if power_order > limits.order_cap {
        return Err(Error::cap("group order", power_order as u128, limits.order_cap as u128));
    }
    let power = s.power(n);
    let wreath = WreathAutomorphisms::new(s, n, &aut)?;
    let d = w.arity();
    let per_sample = domain_size(power.order(), d);
    let samples = opts.samples.max(1);
    let needed = per_sample * samples as u128;
    if needed > limits.budget as u128 {
        return Err(Error::Budget {
            needed,
            budget: limits.budget,
        });
    }
    parameters["samples"] = json!(samples);
    parameters["seed"] = json!(opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let id = aut.identity_index().expect("Aut(S) contains the identity");
    let mut max_seen = BigRational::from_integer(BigInt::from(0));
    for k in 0..samples {
        let mut alphas_all = Vec::with_capacity(w.len());
        let mut sigmas_all = Vec::with_capacity(w.len());
        let mut entries = Vec::with_capacity(w.len());
        for _ in 0..w.len() {
            let (alphas, sigma, a) = if k == 0 {
                let alphas = vec![id; n];
                let sigma: Vec<usize> = (0..n).collect();
                let a = wreath.element(&alphas, &sigma);
                (alphas, sigma, a)
            } else {
                wreath.sample(&mut rng)
            };
            alphas_all.push(alphas);
            sigmas_all.push(sigma);
            entries.push(a);
        }
        let tuple = AutTuple::new(entries);
        let dist = fiber_distribution(&power, w, &tuple, limits)?;
        evaluations += per_sample;
        let (value, target) = dist.max();
        let p = rat(value, per_sample);
        if p > max_seen {
            max_seen = p.clone();
        }
        if p > bound {
            witness["sample"] = json!(k);
            witness["alphas"] = json!(alphas_all);
            witness["sigmas"] = json!(sigmas_all);
            witness["target"] = json!(target);
            witness["fiber"] = json!(value.to_string());
            witness["proportion"] = json!(ratio_string(&p));
            return Ok(CheckReport {
                claim: "variation-bound".into(),
                parameters,
                outcome: Outcome::Fail,
                witness,
                counters: Counters::new(evaluations, k + 1),
            });
        }
    }
    witness["max_sampled_proportion"] = json!(ratio_string(&max_seen));
    witness["violations"] = json!(0);
    Ok(CheckReport {
        claim: "variation-bound".into(),
        parameters,
        outcome: Outcome::InconclusiveSampled,
        witness,
        counters: Counters::new(evaluations, samples),
    })
}

/// Every variation `w'` with `p_{w'}(G) = 1` forces `p_w(G) = 1`, checked
/// by reusing the constant map's automorphism tuple on `w`.
pub fn check_variation_projection(
    g: &FiniteGroup,
    w: &ReducedWord,
    limits: &Limits,
) -> Result<CheckReport> {
    w.require_nonempty()?;
    let aut = automorphism_group(g, limits)?;
    let mut distinct: Vec<ReducedWord> = variations(w).map(|v| v.flattened().clone()).collect();
    distinct.sort();
    distinct.dedup();
    let mut evaluations = 0u128;
    let mut constant = Vec::new();
    let full_w = domain_size(g.order(), w.arity());
    for v in &distinct {
        let r = max_fiber(g, v, &aut, Target::Any, SearchMode::Exact, limits)?;
        evaluations += r.stats.evaluations;
        if r.proportion != BigRational::one() {
            continue;
        }
        // the tuple that makes w' constant also makes w constant
        let dist = fiber_distribution(g, w, &r.witness_tuple, limits)?;
        evaluations += full_w;
        let hit = dist.counts[r.witness_target] as u128;
        if hit != full_w {
            return Ok(CheckReport {
                claim: "variation-projection".into(),
                parameters: json!({ "group": g.spec(), "word": w.to_string() }),
                outcome: Outcome::Fail,
                witness: json!({
                    "variation": v.to_string(),
                    "tuple_indices": r.witness_indices,
                    "target": r.witness_target,
                    "fiber": hit.to_string(),
                }),
                counters: Counters::new(evaluations, distinct.len() as u64),
            });
        }
        constant.push(json!({ "variation": v.to_string(), "tuple_indices": r.witness_indices }));
    }
    Ok(CheckReport {
        claim: "variation-projection".into(),
        parameters: json!({ "group": g.spec(), "word": w.to_string() }),
        outcome: Outcome::Pass,
        witness: json!({
            "distinct_variations": distinct.len(),
            "constant_variations": constant,
        }),
        counters: Counters::new(evaluations, distinct.len() as u64),
    })
}

fn default_trials() -> u64 {
    100
}

fn default_auts() -> String {
    "auto".into()
}

/// One battery entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum CheckSpec {
    IdentityMax {
        group: String,
        word: String,
        #[serde(default = "default_auts")]
        auts: String,
    },
    Submult {
        group: String,
        subgroup: String,
        word: String,
        #[serde(default = "default_auts")]
        auts: String,
    },
    Dihedral {
        o: usize,
    },
    Rewrite {
        group: String,
        subgroup: String,
        word: String,
        #[serde(default = "default_trials")]
        trials: u64,
        #[serde(default)]
        seed: u64,
    },
    VariationBound {
        group: String,
        n: usize,
        word: String,
        #[serde(flatten)]
        options: VariationBoundOptions,
    },
    VariationProjection {
        group: String,
        word: String,
    },
}

impl CheckSpec {
    /// Short label for file names and summaries.
    pub fn label(&self) -> String {
        match self {
            CheckSpec::IdentityMax { group, word, auts } => format!("identity-max {group} {word} {auts}"),
            CheckSpec::Submult { group, subgroup, word, auts } => {
                format!("submult {group} {subgroup} {word} {auts}")
            }
            CheckSpec::Dihedral { o } => format!("dihedral {o}"),
            CheckSpec::Rewrite { group, subgroup, word, .. } => format!("rewrite {group} {subgroup} {word}"),
            CheckSpec::VariationBound { group, n, word, .. } => format!("variation-bound {group} {n} {word}"),
            CheckSpec::VariationProjection { group, word } => format!("variation-projection {group} {word}"),
        }
    }

    pub fn run(&self, limits: &Limits) -> Result<CheckReport> {
        match self {
            CheckSpec::IdentityMax { group, word, auts } => {
                let g = make_group_with(group, limits)?;
                let w = parse_nonempty_word(word)?;
                let a = resolve_autset(&g, auts, w.len(), limits)?;
                check_identity_maximal(&g, &w, &a, limits)
            }
            CheckSpec::Submult { group, subgroup, word, auts } => {
                let g = make_group_with(group, limits)?;
                let n = select_subgroup(&g, subgroup, limits)?;
                let w = parse_nonempty_word(word)?;
                let a = resolve_autset(&g, auts, w.len(), limits)?;
                check_submultiplicative(&g, &n, &w, &a, limits)
            }
            CheckSpec::Dihedral { o } => check_dihedral_counterexample(*o, limits),
            CheckSpec::Rewrite { group, subgroup, word, trials, seed } => {
                let g = make_group_with(group, limits)?;
                let n = select_subgroup(&g, subgroup, limits)?;
                let w = parse_nonempty_word(word)?;
                check_rewrite(&g, &n, &w, *trials, *seed, limits)
            }
            CheckSpec::VariationBound { group, n, word, options } => {
                let s = make_group_with(group, limits)?;
                let w = parse_nonempty_word(word)?;
                check_variation_bound(&s, *n, &w, options, limits)
            }
            CheckSpec::VariationProjection { group, word } => {
                let g = make_group_with(group, limits)?;
                let w = parse_nonempty_word(word)?;
                check_variation_projection(&g, &w, limits)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{center, make_group};
    use crate::words::parse_word;

    fn w(s: &str) -> ReducedWord {
        parse_word(s).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn identity_maximal_examples() {
        let c3 = make_group("cyc:3").unwrap();
        let r = check_identity_maximal(&c3, &w("x1^2"), &identity_autset(&c3), &lim()).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert_eq!(r.witness["identity_value"], "1");

        let s3 = make_group("sym:3").unwrap();
        let aut = automorphism_group(&s3, &lim()).unwrap();
        let r = check_identity_maximal(&s3, &w("x1^2"), &aut, &lim()).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        let v: u64 = r.witness["identity_value"].as_str().unwrap().parse().unwrap();
        assert!(v >= 4);

        let d8 = make_group("dih:4").unwrap();
        let inn = inner_automorphisms(&d8);
        assert_eq!(
            check_identity_maximal(&d8, &w("[x1,x2]"), &inn, &lim()).unwrap().outcome,
            Outcome::Pass
        );
        let id = identity_autset(&d8);
        assert!(check_identity_maximal(&d8, &w("x1^2"), &id, &lim()).is_err());
    }

    #[test]
    fn submultiplicative_examples() {
        let s3 = make_group("sym:3").unwrap();
        let a3 = select_subgroup(&s3, "order:3", &lim()).unwrap();
        let aut = automorphism_group(&s3, &lim()).unwrap();
        let r = check_submultiplicative(&s3, &a3, &w("x1^2"), &aut, &lim()).unwrap();
        assert_eq!(r.outcome, Outcome::Pass, "{r:?}");

        let d8 = make_group("dih:4").unwrap();
        let z = center(&d8);
        let inn = inner_automorphisms(&d8);
        let r = check_submultiplicative(&d8, &z, &w("[x1,x2]"), &inn, &lim()).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);

        let whole = SubgroupHandle::whole(&d8);
        let r = check_submultiplicative(&d8, &whole, &w("x1 x2 x1"), &inn, &lim()).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
    }

    #[test]
    fn dihedral_examples() {
        let r = check_dihedral_counterexample(3, &lim()).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert_eq!(r.witness["Pi_G"], "4");
        assert_eq!(r.witness["Pi_N"], "1");
        assert_eq!(r.witness["Pi_Q"], "2");
        let r = check_dihedral_counterexample(5, &lim()).unwrap();
        assert_eq!(r.witness["Pi_G"], "6");
        assert!(check_dihedral_counterexample(4, &lim()).is_err());
        assert!(check_dihedral_counterexample(1, &lim()).is_err());
    }

    #[test]
    fn rewrite_examples() {
        let d8 = make_group("dih:4").unwrap();
        let r = check_rewrite(&d8, &center(&d8), &w("[x1,x2]"), 100, 1, &lim()).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        let s3 = make_group("sym:3").unwrap();
        let a3 = select_subgroup(&s3, "order:3", &lim()).unwrap();
        assert_eq!(
            check_rewrite(&s3, &a3, &w("x1^3"), 100, 2, &lim()).unwrap().outcome,
            Outcome::Pass
        );
        let t = SubgroupHandle::trivial();
        assert_eq!(
            check_rewrite(&s3, &t, &w("x1 x2"), 10, 3, &lim()).unwrap().outcome,
            Outcome::Pass
        );
        let v4 = make_group("prod:(cyc:2)x(cyc:2)").unwrap();
        let c2 = generated_subgroup(&v4, &[1]).unwrap();
        assert_eq!(
            check_rewrite(&v4, &c2, &w("x1^2"), 5, 0, &lim()).unwrap_err(),
            Error::NotCharacteristic
        );
    }

    #[test]
    fn variation_projection_examples() {
        for (spec, word, constant) in [("cyc:2", "x1^2", 1), ("cyc:3", "[x1,x2]", 1), ("sym:3", "x1 x2", 0)] {
            let g = make_group(spec).unwrap();
            let r = check_variation_projection(&g, &w(word), &lim()).unwrap();
            assert_eq!(r.outcome, Outcome::Pass);
            let c = r.witness["constant_variations"].as_array().unwrap().len();
            assert!(c >= constant, "{spec} {word}");
            if constant == 0 {
                assert_eq!(c, 0);
            }
        }
    }

    #[test]
    fn variation_bound_needs_nonabelian_simple() {
        let c5 = make_group("cyc:5").unwrap();
        let opts = VariationBoundOptions::default();
        assert_eq!(
            check_variation_bound(&c5, 1, &w("x1^2"), &opts, &lim()).unwrap_err(),
            Error::NotNonabelianSimple
        );
        let s4 = make_group("sym:4").unwrap();
        assert!(check_variation_bound(&s4, 1, &w("x1^2"), &opts, &lim()).is_err());
    }

    #[test]
    fn check_spec_round_trip() {
        let text = r#"[
            {"check": "identity-max", "group": "sym:3", "word": "x1^2"},
            {"check": "dihedral", "o": 7},
            {"check": "variation-bound", "group": "alt:5", "n": 2, "word": "x1^2", "samples": 5, "seed": 1, "epsilon_scale": "1/2"}
        ]"#;
        let specs: Vec<CheckSpec> = serde_json::from_str(text).unwrap();
        assert_eq!(specs.len(), 3);
        assert!(matches!(&specs[0], CheckSpec::IdentityMax { auts, .. } if auts == "auto"));
        let back: Vec<CheckSpec> =
            serde_json::from_str(&serde_json::to_string(&specs).unwrap()).unwrap();
        assert_eq!(back, specs);
        let r = specs[1].run(&lim()).unwrap();
        assert_eq!(r.witness["Pi_G"], "8");
    }
}
