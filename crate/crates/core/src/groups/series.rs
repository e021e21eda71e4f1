//! Characteristic series, characteristically simple factors and the
//! solvable radical.

use serde::Serialize;

use super::subgroups::{derived_of, normal_subgroup_sets};
use super::{characteristic_subgroups, is_isomorphic, quotient, FiniteGroup, SubgroupHandle};
use crate::{Error, Limits, Result};

/// One factor `F = K/H` of a characteristic series with `F ≅ S^n`.
#[derive(Debug, Clone)]
pub struct CharFactor {
    pub group: FiniteGroup,
    pub simple: FiniteGroup,
    pub power: usize,
}

impl CharFactor {
    pub fn summary(&self) -> FactorSummary {
        FactorSummary {
            order: self.group.order(),
            simple_order: self.simple.order(),
            simple_abelian: self.simple.is_abelian(),
            power: self.power,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorSummary {
    pub order: usize,
    pub simple_order: usize,
    pub simple_abelian: bool,
    pub power: usize,
}

#[derive(Debug, Clone)]
pub struct CharSeries {
    /// Ascending from the trivial subgroup to `G`.
    pub chain: Vec<SubgroupHandle>,
    pub factors: Vec<CharFactor>,
}

/// The lexicographically smallest maximal chain of characteristic subgroups
/// (comparing sorted element lists term by term), with each factor
/// decomposed as a power of a simple group.
pub fn characteristic_series(g: &FiniteGroup, limits: &Limits) -> Result<CharSeries> {
    if g.order() > limits.subgroup_cap {
        return Err(Error::cap(
            "characteristic series order",
            g.order() as u128,
            limits.subgroup_cap as u128,
        ));
    }
    let chars = characteristic_subgroups(g, limits)?;
    let mut chain = vec![chars[0].clone()];
    debug_assert_eq!(chain[0].order(), 1);
    loop {
        let cur = chain.last().unwrap();
        if cur.order() == g.order() {
            break;
        }
        let above: Vec<&SubgroupHandle> = chars
            .iter()
            .filter(|k| k.order() > cur.order() && cur.is_subset_of(k))
            .collect();
        let covers = above.iter().filter(|k| {
            !above
                .iter()
                .any(|m| m.order() < k.order() && m.is_subset_of(k))
        });
        let next = covers
            .min_by(|a, b| a.elements().cmp(b.elements()))
            .expect("G itself lies above every proper subgroup");
        chain.push((*next).clone());
    }
    let mut factors = Vec::new();
    for w in chain.windows(2) {
        let (h, k) = (&w[0], &w[1]);
        let kg = k.as_group(g);
        let pos = k.positions(g);
        let h_in_k = SubgroupHandle::new(&kg, h.elements().iter().map(|&x| pos[x]).collect());
        let f = quotient(&kg, &h_in_k)?.quotient;
        let (simple, power) = decompose_char_simple(&f, limits)?;
        factors.push(CharFactor {
            group: f,
            simple,
            power,
        });
    }
    Ok(CharSeries { chain, factors })
}

/// `F ≅ S^n` with `S` simple, via a minimal normal subgroup and an explicit
/// isomorphism test against `S^n`.
pub fn decompose_char_simple(f: &FiniteGroup, limits: &Limits) -> Result<(FiniteGroup, usize)> {
    if f.order() == 1 {
        return Err(Error::NotCharSimple);
    }
    if f.order() > limits.normal_cap {
        return Err(Error::cap(
            "normal subgroup enumeration order",
            f.order() as u128,
            limits.normal_cap as u128,
        ));
    }
    let normals = normal_subgroup_sets(f);
    let minimal = normals
        .iter()
        .find(|s| s.len() > 1)
        .expect("F itself is nontrivial");
    let s = SubgroupHandle::new(f, minimal.clone()).as_group(f);
    if !is_simple(&s) {
        return Err(Error::NotCharSimple);
    }
    let mut n = 0;
    let mut size = 1usize;
    while size < f.order() {
        size *= s.order();
        n += 1;
    }
    if size != f.order() {
        return Err(Error::NotCharSimple);
    }
    if s.is_abelian() {
        // elementary abelian p-group
        let p = s.order();
        let ok = f.is_abelian() && f.elements().skip(1).all(|x| f.element_order(x) == p);
        return if ok { Ok((s, n)) } else { Err(Error::NotCharSimple) };
    }
    let target = s.power(n);
    match is_isomorphic(f, &target, limits)? {
        Some(_) => Ok((s, n)),
        None => Err(Error::NotCharSimple),
    }
}

/// Nontrivial with no proper nontrivial normal subgroup: the normal closure
/// of every non-identity element is the whole group.
pub fn is_simple(g: &FiniteGroup) -> bool {
    if g.order() == 1 {
        return false;
    }
    if g.is_abelian() {
        let n = g.order();
        return (2..n).all(|d| d * d > n || !n.is_multiple_of(d)) && n > 1;
    }
    g.conjugacy_classes().iter().skip(1).all(|class| {
        // the subgroup generated by a class is its normal closure
        g.closure(class).len() == g.order()
    })
}

/// Derived series of the sorted subgroup `h` reaches the identity.
pub(crate) fn is_solvable_set(g: &FiniteGroup, h: &[usize]) -> bool {
    let mut cur = h.to_vec();
    loop {
        if cur.len() == 1 {
            return true;
        }
        let next = derived_of(g, &cur);
        if next.len() == cur.len() {
            return false;
        }
        cur = next;
    }
}

pub fn is_solvable(g: &FiniteGroup) -> bool {
    is_solvable_set(g, &g.elements().collect::<Vec<_>>())
}

/// The largest solvable normal subgroup.
pub fn solvable_radical(g: &FiniteGroup, limits: &Limits) -> Result<SubgroupHandle> {
    if g.order() > limits.normal_cap {
        return Err(Error::cap(
            "normal subgroup enumeration order",
            g.order() as u128,
            limits.normal_cap as u128,
        ));
    }
    let solvable: Vec<Vec<usize>> = normal_subgroup_sets(g)
        .into_iter()
        .filter(|h| is_solvable_set(g, h))
        .collect();
    let largest = solvable
        .iter()
        .max_by_key(|h| h.len())
        .expect("the trivial subgroup is solvable")
        .clone();
    assert!(
        solvable
            .iter()
            .all(|h| h.iter().all(|x| largest.binary_search(x).is_ok())),
        "solvable normal subgroups must lie in the largest one"
    );
    let mut r = SubgroupHandle::new(g, largest);
    // the radical is characteristic; no automorphism needs checking
    r.mark_characteristic(g, std::iter::empty());
    Ok(r)
}
