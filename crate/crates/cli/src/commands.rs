//! One function per command group; each returns a [`Reply`].

use num_bigint::BigUint;
use serde_json::{json, Value};
use wfl_core::bounds::{
    alt_exclusion_threshold, epsilon_upper_bound, excluded_factors_report, lie_rank_threshold,
    n0_bound, parse_rational, radical_index_bound,
};
use wfl_core::fibers::{fiber_distribution, max_fiber, pi_w, AutTuple, SearchMode, Target};
use wfl_core::groups::{
    center, characteristic_series, characteristic_subgroups, derived_subgroup, make_group_with,
    normal_subgroups, quotient, solvable_radical, subgroups, AutSet, FiniteGroup,
};
use wfl_core::verify::{resolve_autset, CheckReport, CheckSpec, VariationBoundOptions};
use wfl_core::words::{m_constant, parse_nonempty_word, parse_word, variation_count, variations};
use wfl_core::{ratio_string, Error, Limits, Result};

use crate::output::{Reply, Status};
use crate::{BoundsCmd, FiberCmd, GroupCmd, VerifyCmd, WordCmd};

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn parse_biguint(text: &str, what: &str) -> Result<BigUint> {
    text.trim()
        .parse()
        .map_err(|_| Error::Param(format!("{what} must be a nonnegative integer, got `{text}`")))
}

pub fn word(cmd: &WordCmd) -> Result<Reply> {
    match cmd {
        WordCmd::Parse { word } => {
            let w = parse_word(word)?;
            Ok(Reply::ok(json!({
                "word": w.to_string(),
                "length": w.len(),
                "num_vars": w.num_vars(),
                "counts": w.counts(),
                "iota": (0..w.len()).map(|i| w.iota(i)).collect::<Vec<_>>(),
                "signs": w.signs().map(|s| s.value()).collect::<Vec<_>>(),
            })))
        }
        WordCmd::Variations { word, limit } => {
            let w = parse_nonempty_word(word)?;
            let count = variation_count(&w);
            let listed: Vec<Value> = variations(&w)
                .take(*limit)
                .map(|v| {
                    json!({
                        "variation": v.to_string(),
                        "second_indices": v.second_indices(),
                        "flattened": v.flattened().to_string(),
                    })
                })
                .collect();
            let truncated = BigUint::from(listed.len()) < count;
            Ok(Reply::ok(json!({
                "word": w.to_string(),
                "count": count.to_string(),
                "variations": listed,
                "truncated": truncated,
            })))
        }
        WordCmd::Mconst { d, l } => {
            if *d == 0 || *l == 0 {
                return Err(Error::Param("d and l must be positive".into()));
            }
            Ok(Reply::ok(json!({ "M": m_constant(*d, *l).to_string() })))
        }
    }
}

fn autset_summary(a: &AutSet, list: bool) -> Value {
    let gens: Vec<Vec<usize>> = a.generators().iter().map(|x| x.to_vec()).collect();
    let mut v = json!({
        "kind": a.kind(),
        "size": a.len(),
        "contains_inner": a.contains_inner(),
        "generators": gens,
    });
    if list {
        v["elements"] = json!(a.iter().map(|x| x.to_vec()).collect::<Vec<_>>());
    }
    v
}

fn group_summary(g: &FiniteGroup, table: bool) -> Value {
    let mut classes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
    classes.sort_unstable();
    let mut v = json!({
        "spec": g.spec(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "element_orders": g.element_orders(),
        "class_sizes": classes,
        "center_order": center(g).order(),
        "derived_order": derived_subgroup(g).order(),
        "generators": g.greedy_generators(),
    });
    if table {
        let rows: Vec<Vec<usize>> = g
            .elements()
            .map(|a| g.elements().map(|b| g.mul(a, b)).collect())
            .collect();
        v["table"] = json!(rows);
    }
    v
}

pub fn group(cmd: &GroupCmd, limits: &Limits) -> Result<Reply> {
    match cmd {
        GroupCmd::Make { group, table } => {
            let g = make_group_with(group, limits)?;
            Ok(Reply::ok(group_summary(&g, *table)))
        }
        GroupCmd::Auts { group, set, list } => {
            let g = make_group_with(group, limits)?;
            let a = resolve_autset(&g, set, 1, limits)?;
            Ok(Reply::ok(autset_summary(&a, *list)))
        }
        GroupCmd::Subgroups { group, kind } => {
            let g = make_group_with(group, limits)?;
            let list = match kind.as_str() {
                "all" => subgroups(&g, limits)?,
                "normal" => normal_subgroups(&g, limits)?,
                "characteristic" => characteristic_subgroups(&g, limits)?,
                other => return Err(Error::Param(format!("unknown subgroup kind `{other}`"))),
            };
            Ok(Reply::ok(json!({
                "group": g.spec(),
                "kind": kind,
                "count": list.len(),
                "subgroups": list,
            })))
        }
        GroupCmd::Series { group } => {
            let g = make_group_with(group, limits)?;
            let s = characteristic_series(&g, limits)?;
            let factors: Vec<_> = s.factors.iter().map(|f| f.summary()).collect();
            Ok(Reply::ok(json!({
                "group": g.spec(),
                "chain": s.chain,
                "chain_orders": s.chain.iter().map(|h| h.order()).collect::<Vec<_>>(),
                "factors": factors,
            })))
        }
        GroupCmd::Radical { group } => {
            let g = make_group_with(group, limits)?;
            let r = solvable_radical(&g, limits)?;
            let q = quotient(&g, &r)?;
            Ok(Reply::ok(json!({
                "group": g.spec(),
                "radical": r,
                "radical_order": r.order(),
                "quotient_order": q.quotient.order(),
            })))
        }
    }
}

fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Param(format!("bad index `{t}`")))
        })
        .collect()
}

pub fn fiber(cmd: &FiberCmd, limits: &Limits) -> Result<Reply> {
    match cmd {
        FiberCmd::Dist { group, word, auts, tuple } => {
            let g = make_group_with(group, limits)?;
            let w = parse_nonempty_word(word)?;
            let set = resolve_autset(&g, auts, w.len(), limits)?;
            let idx = match tuple {
                Some(t) => parse_indices(t)?,
                None => vec![set.identity_index().ok_or(Error::EmptyAutSet)?; w.len()],
            };
            if idx.len() != w.len() {
                return Err(Error::Arity { expected: w.len(), got: idx.len() });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= set.len()) {
                return Err(Error::OutOfRange { index: bad, max: set.len() - 1 });
            }
            let dist = fiber_distribution(&g, &w, &AutTuple::from_indices(&set, &idx), limits)?;
            let (max, target) = dist.max();
            Ok(Reply::ok(json!({
                "group": g.spec(),
                "word": w.to_string(),
                "tuple_indices": idx,
                "counts": dist.counts,
                "total": dist.total().to_string(),
                "max": max,
                "max_target": target,
            })))
        }
        FiberCmd::Pi { group, word } => {
            let g = make_group_with(group, limits)?;
            let w = parse_nonempty_word(word)?;
            let r = pi_w(&g, &w, limits)?;
            Ok(Reply::ok(to_value(&r)))
        }
        FiberCmd::Max { group, word, auts, target, mode, samples, seed } => {
            let g = make_group_with(group, limits)?;
            let w = parse_nonempty_word(word)?;
            let set = resolve_autset(&g, auts, w.len(), limits)?;
            let target = match target.as_str() {
                "any" => Target::Any,
                t => Target::Element(
                    t.parse()
                        .map_err(|_| Error::Param(format!("target must be `any` or an index, got `{t}`")))?,
                ),
            };
            let mode = match mode.as_str() {
                "exact" => SearchMode::Exact,
                "sample" => SearchMode::Sample { draws: *samples, seed: *seed },
                other => return Err(Error::Param(format!("unknown mode `{other}`"))),
            };
            let r = max_fiber(&g, &w, &set, target, mode, limits)?;
            let mut result = to_value(&r);
            let stats = result["stats"].take();
            if let Some(m) = result.as_object_mut() {
                m.remove("stats");
            }
            result["autset"] = json!({ "kind": set.kind(), "size": set.len() });
            Ok(Reply {
                result,
                status: Status::Ok,
                stats,
            })
        }
    }
}

pub fn report_reply(r: CheckReport) -> Reply {
    let status = Status::from_outcome(r.outcome);
    let stats = to_value(&r.counters);
    Reply {
        result: json!({
            "claim": r.claim,
            "parameters": r.parameters,
            "outcome": r.outcome,
            "witness": r.witness,
        }),
        status,
        stats,
    }
}

pub fn verify(cmd: &VerifyCmd, limits: &Limits) -> Result<Reply> {
    let spec = match cmd {
        VerifyCmd::IdentityMax { group, word, auts } => CheckSpec::IdentityMax {
            group: group.clone(),
            word: word.clone(),
            auts: auts.clone(),
        },
        VerifyCmd::Submult { group, subgroup, word, auts } => CheckSpec::Submult {
            group: group.clone(),
            subgroup: subgroup.clone(),
            word: word.clone(),
            auts: auts.clone(),
        },
        VerifyCmd::Dihedral { o } => CheckSpec::Dihedral { o: *o },
        VerifyCmd::Rewrite { group, subgroup, word, trials, seed } => CheckSpec::Rewrite {
            group: group.clone(),
            subgroup: subgroup.clone(),
            word: word.clone(),
            trials: *trials,
            seed: *seed,
        },
        VerifyCmd::VariationBound { group, n, word, samples, seed, floor, epsilon_scale } => {
            CheckSpec::VariationBound {
                group: group.clone(),
                n: *n,
                word: word.clone(),
                options: VariationBoundOptions {
                    samples: *samples,
                    seed: *seed,
                    floor: *floor,
                    epsilon_scale: epsilon_scale.clone(),
                },
            }
        }
        VerifyCmd::Battery { .. } => unreachable!("battery is dispatched separately"),
    };
    Ok(report_reply(spec.run(limits)?))
}

pub fn bounds(cmd: &BoundsCmd) -> Result<Reply> {
    match cmd {
        BoundsCmd::Exclude { word, rho } => {
            let w = parse_nonempty_word(word)?;
            let r = excluded_factors_report(&w, &parse_rational(rho)?)?;
            Ok(Reply::ok(to_value(&r)))
        }
        BoundsCmd::Alt { word, rho } => {
            let w = parse_nonempty_word(word)?;
            let r = alt_exclusion_threshold(&w, &parse_rational(rho)?)?;
            Ok(Reply::ok(to_value(&r)))
        }
        BoundsCmd::Lie { word, rho } => {
            let w = parse_nonempty_word(word)?;
            let r = lie_rank_threshold(&w, &parse_rational(rho)?)?;
            Ok(Reply::ok(to_value(&r)))
        }
        BoundsCmd::N0 { word, rho, s } => {
            let w = parse_nonempty_word(word)?;
            let s = parse_biguint(s, "|S|")?;
            let n0 = n0_bound(&w, &parse_rational(rho)?, &s)?;
            let eps = epsilon_upper_bound(&s, w.len() as u64)?;
            Ok(Reply::ok(json!({
                "n0": n0.to_string(),
                "epsilon_upper_bound": ratio_string(&eps),
            })))
        }
        BoundsCmd::RadicalBound { word, rho, factors, n0_cap, eta0 } => {
            let w = parse_nonempty_word(word)?;
            let mut pairs = Vec::new();
            for item in factors.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (s, a) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Param(format!("factor `{item}` is not |S|:|Aut S|")))?;
                pairs.push((parse_biguint(s, "|S|")?, parse_biguint(a, "|Aut S|")?));
            }
            let rho = parse_rational(rho)?;
            let b = radical_index_bound(
                &pairs,
                &w,
                &rho,
                &parse_biguint(n0_cap, "n0-cap")?,
                &parse_rational(eta0)?,
            )?;
            let per_factor: Vec<Value> = pairs
                .iter()
                .map(|(s, a)| {
                    n0_bound(&w, &rho, s).map(|n0| {
                        json!({ "s": s.to_string(), "aut": a.to_string(), "n0": n0.to_string() })
                    })
                })
                .collect::<Result<_>>()?;
            Ok(Reply::ok(json!({ "bound": b, "factors": per_factor })))
        }
    }
}
