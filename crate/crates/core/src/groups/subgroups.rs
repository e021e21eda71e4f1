//! Subgroups, normal and characteristic subgroups, quotients, and the
//! induced/restricted automorphism sets.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{automorphism_group, AutKind, AutSet, Automorphism, FiniteGroup};
use crate::{Error, Limits, Result};

/// A subgroup given by its sorted element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SubgroupHandle {
    elements: Vec<usize>,
    normal: bool,
    characteristic: bool,
}

impl SubgroupHandle {
    /// `elements` must be a subgroup; the normal flag is computed, the
    /// characteristic flag starts out false.
    pub fn new(g: &FiniteGroup, mut elements: Vec<usize>) -> SubgroupHandle {
        elements.sort_unstable();
        elements.dedup();
        let normal = is_normal_set(g, &elements);
        SubgroupHandle {
            elements,
            normal,
            characteristic: false,
        }
    }

    pub fn trivial() -> SubgroupHandle {
        SubgroupHandle {
            elements: vec![0],
            normal: true,
            characteristic: true,
        }
    }

    pub fn whole(g: &FiniteGroup) -> SubgroupHandle {
        SubgroupHandle {
            elements: g.elements().collect(),
            normal: true,
            characteristic: true,
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn is_characteristic(&self) -> bool {
        self.characteristic
    }

    pub fn is_subset_of(&self, other: &SubgroupHandle) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Sets the characteristic flag from invariance under `gens`.
    pub fn mark_characteristic<'a>(
        &mut self,
        g: &FiniteGroup,
        gens: impl IntoIterator<Item = &'a Automorphism>,
    ) {
        let member = self.membership(g);
        self.characteristic = gens
            .into_iter()
            .all(|a| a.stabilizes(&self.elements, &member));
    }

    pub fn membership(&self, g: &FiniteGroup) -> Vec<bool> {
        let mut m = vec![false; g.order()];
        for &x in &self.elements {
            m[x] = true;
        }
        m
    }

    /// Position of each element of `G` in the sorted list, `usize::MAX` off `N`.
    pub fn positions(&self, g: &FiniteGroup) -> Vec<usize> {
        let mut p = vec![usize::MAX; g.order()];
        for (i, &x) in self.elements.iter().enumerate() {
            p[x] = i;
        }
        p
    }

    /// The subgroup as a group in its own right; element `k` is the `k`-th
    /// smallest index of `G` in the subgroup.
    pub fn as_group(&self, g: &FiniteGroup) -> FiniteGroup {
        let pos = self.positions(g);
        let n = self.order();
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.elements {
            for &b in &self.elements {
                table.push(pos[g.mul(a, b)]);
            }
        }
        FiniteGroup::from_table_unchecked(n, table, format!("sub({})[{}]", g.spec(), n))
    }
}

fn is_normal_set(g: &FiniteGroup, elements: &[usize]) -> bool {
    let mut member = vec![false; g.order()];
    for &x in elements {
        member[x] = true;
    }
    let gens = g.greedy_generators();
    gens.iter()
        .all(|&t| elements.iter().all(|&x| member[g.conj(t, x)]))
}

/// Sorted element sets of every subgroup, ordered by (order, elements).
fn subgroup_sets(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut cyclic: BTreeSet<Vec<usize>> = BTreeSet::new();
    for x in g.elements() {
        cyclic.insert(g.closure(&[x]));
    }
    // one generator per cyclic subgroup
    let gens: Vec<usize> = cyclic
        .iter()
        .filter_map(|c| {
            c.iter()
                .copied()
                .find(|&x| g.element_order(x) == c.len())
        })
        .collect();
    let mut seen: HashSet<Vec<usize>> = cyclic.iter().cloned().collect();
    let mut queue: Vec<Vec<usize>> = cyclic.into_iter().collect();
    let mut head = 0;
    while head < queue.len() {
        let h = queue[head].clone();
        head += 1;
        let member = {
            let mut m = vec![false; g.order()];
            for &x in &h {
                m[x] = true;
            }
            m
        };
        for &x in &gens {
            if member[x] {
                continue;
            }
            let k = g.closure_from(&h, &[x]);
            if seen.insert(k.clone()) {
                queue.push(k);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Sorted element sets of every normal subgroup, ordered by (order, elements).
pub(crate) fn normal_subgroup_sets(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let gens = g.greedy_generators();
    let normal_closure = |seed: &[usize]| -> Vec<usize> {
        let mut set = g.closure(seed);
        loop {
            let member = {
                let mut m = vec![false; g.order()];
                for &x in &set {
                    m[x] = true;
                }
                m
            };
            let extra: Vec<usize> = gens
                .iter()
                .flat_map(|&t| set.iter().map(move |&x| g.conj(t, x)))
                .filter(|&y| !member[y])
                .collect();
            if extra.is_empty() {
                return set;
            }
            set = g.closure_from(&set, &extra);
        }
    };
    let mut class_closures: BTreeSet<Vec<usize>> = BTreeSet::new();
    class_closures.insert(vec![0]);
    for class in g.conjugacy_classes() {
        class_closures.insert(normal_closure(&class[..1]));
    }
    let basics: Vec<Vec<usize>> = class_closures.iter().cloned().collect();
    let mut seen: HashSet<Vec<usize>> = basics.iter().cloned().collect();
    let mut queue = basics.clone();
    let mut head = 0;
    while head < queue.len() {
        let h = queue[head].clone();
        head += 1;
        for b in &basics {
            if b.iter().all(|x| h.binary_search(x).is_ok()) {
                continue;
            }
            // product of normal subgroups is a normal subgroup
            let k = g.closure_from(&h, b);
            if seen.insert(k.clone()) {
                queue.push(k);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn flag_all(g: &FiniteGroup, sets: Vec<Vec<usize>>, aut: &AutSet) -> Vec<SubgroupHandle> {
    let gens = aut.generators();
    sets.into_iter()
        .map(|s| {
            let mut h = SubgroupHandle::new(g, s);
            h.mark_characteristic(g, gens.iter().copied());
            h
        })
        .collect()
}

/// Every subgroup with normal and characteristic flags, ordered by
/// (order, elements).
pub fn subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<SubgroupHandle>> {
    if g.order() > limits.subgroup_cap {
        return Err(Error::cap(
            "subgroup enumeration order",
            g.order() as u128,
            limits.subgroup_cap as u128,
        ));
    }
    let aut = automorphism_group(g, limits)?;
    Ok(flag_all(g, subgroup_sets(g), &aut))
}

/// Every normal subgroup (unions of conjugacy classes), flagged.
pub fn normal_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<SubgroupHandle>> {
    if g.order() > limits.normal_cap {
        return Err(Error::cap(
            "normal subgroup enumeration order",
            g.order() as u128,
            limits.normal_cap as u128,
        ));
    }
    let aut = automorphism_group(g, limits)?;
    Ok(flag_all(g, normal_subgroup_sets(g), &aut))
}

/// Characteristic subgroups, ordered by (order, elements).
pub fn characteristic_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<SubgroupHandle>> {
    Ok(normal_subgroups(g, limits)?
        .into_iter()
        .filter(|h| h.characteristic)
        .collect())
}

pub fn center(g: &FiniteGroup) -> SubgroupHandle {
    SubgroupHandle {
        elements: g.center_elements(),
        normal: true,
        characteristic: true,
    }
}

/// `[G, G]`.
pub fn derived_subgroup(g: &FiniteGroup) -> SubgroupHandle {
    SubgroupHandle {
        elements: derived_of(g, &g.elements().collect::<Vec<_>>()),
        normal: true,
        characteristic: true,
    }
}

/// Derived subgroup of the subgroup with sorted elements `h`.
pub(crate) fn derived_of(g: &FiniteGroup, h: &[usize]) -> Vec<usize> {
    let mut comms: BTreeSet<usize> = BTreeSet::new();
    for &a in h {
        for &b in h {
            comms.insert(g.commutator(a, b));
        }
    }
    let comms: Vec<usize> = comms.into_iter().collect();
    g.closure(&comms)
}

pub fn generated_subgroup(g: &FiniteGroup, gens: &[usize]) -> Result<SubgroupHandle> {
    if let Some(&bad) = gens.iter().find(|&&x| x >= g.order()) {
        return Err(Error::OutOfRange {
            index: bad,
            max: g.order() - 1,
        });
    }
    Ok(SubgroupHandle::new(g, g.closure(gens)))
}

/// Resolves a subgroup selector:
/// `trivial`, `whole`, `center`, `derived`, `order:k` (the unique normal
/// subgroup of order `k`) or `gens:i,j,...`.
/// The characteristic flag is filled in from `Aut(G)` when it fits the caps.
pub fn select_subgroup(g: &FiniteGroup, selector: &str, limits: &Limits) -> Result<SubgroupHandle> {
    let selector = selector.trim();
    let mut h = match selector {
        "trivial" => SubgroupHandle::trivial(),
        "whole" => SubgroupHandle::whole(g),
        "center" => center(g),
        "derived" => derived_subgroup(g),
        _ => {
            if let Some(k) = selector.strip_prefix("order:") {
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Param(format!("bad order in `{selector}`")))?;
                if g.order() > limits.normal_cap {
                    return Err(Error::cap(
                        "normal subgroup enumeration order",
                        g.order() as u128,
                        limits.normal_cap as u128,
                    ));
                }
                let found: Vec<Vec<usize>> = normal_subgroup_sets(g)
                    .into_iter()
                    .filter(|s| s.len() == k)
                    .collect();
                match found.len() {
                    1 => SubgroupHandle::new(g, found.into_iter().next().unwrap()),
                    0 => return Err(Error::Param(format!("no normal subgroup of order {k}"))),
                    n => {
                        return Err(Error::Param(format!(
                            "{n} normal subgroups of order {k}; use gens:"
                        )))
                    }
                }
            } else if let Some(list) = selector.strip_prefix("gens:") {
                let gens = list
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Param(format!("bad index `{s}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                generated_subgroup(g, &gens)?
            } else {
                return Err(Error::Param(format!("unknown subgroup selector `{selector}`")));
            }
        }
    };
    if !h.characteristic && h.normal {
        match automorphism_group(g, limits) {
            Ok(aut) => h.mark_characteristic(g, aut.generators()),
            Err(e) if e.class() == crate::ErrorClass::Limit => {}
            Err(e) => return Err(e),
        }
    }
    Ok(h)
}

/// `G/N` with cosets numbered by their smallest member.
#[derive(Debug, Clone)]
pub struct QuotientHandle {
    pub quotient: FiniteGroup,
    /// `projection[g]` is the coset index of `g`.
    pub projection: Vec<usize>,
    /// Smallest member of each coset.
    pub reps: Vec<usize>,
}

pub fn quotient(g: &FiniteGroup, n: &SubgroupHandle) -> Result<QuotientHandle> {
    if !is_normal_set(g, n.elements()) {
        return Err(Error::NotNormal);
    }
    let mut projection = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(x);
        for &m in n.elements() {
            projection[g.mul(x, m)] = idx;
        }
    }
    let k = reps.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            table.push(projection[g.mul(a, b)]);
        }
    }
    let quotient =
        FiniteGroup::from_table_unchecked(k, table, format!("quot({})[{}]", g.spec(), n.order()));
    Ok(QuotientHandle {
        quotient,
        projection,
        reps,
    })
}

fn require_invariant(g: &FiniteGroup, n: &SubgroupHandle, a: &AutSet) -> Result<()> {
    if a.group_order() != g.order() {
        return Err(Error::Param("automorphism set acts on a different group".into()));
    }
    let member = n.membership(g);
    if a.iter().all(|x| x.stabilizes(n.elements(), &member)) {
        Ok(())
    } else {
        Err(Error::NotCharacteristic)
    }
}

/// `ind(A)`: the maps induced on `G/N`, as an automorphism set of `q.quotient`.
pub fn induced_autset(
    g: &FiniteGroup,
    n: &SubgroupHandle,
    q: &QuotientHandle,
    a: &AutSet,
) -> Result<AutSet> {
    require_invariant(g, n, a)?;
    let elems = a
        .iter()
        .map(|alpha| {
            Automorphism::from_map_unchecked(
                q.reps.iter().map(|&r| q.projection[alpha.apply(r)]).collect(),
            )
        })
        .collect();
    let kind = match a.kind() {
        AutKind::IdentityOnly => AutKind::IdentityOnly,
        AutKind::Inner => AutKind::Inner,
        _ => AutKind::Custom,
    };
    Ok(AutSet::from_elements(&q.quotient, elems, kind))
}

/// `res(A)`: restrictions to `N`, re-indexed to `n.as_group(g)`.
pub fn restricted_autset(g: &FiniteGroup, n: &SubgroupHandle, a: &AutSet) -> Result<AutSet> {
    require_invariant(g, n, a)?;
    let pos = n.positions(g);
    let ng = n.as_group(g);
    let elems = a
        .iter()
        .map(|alpha| {
            Automorphism::from_map_unchecked(
                n.elements().iter().map(|&x| pos[alpha.apply(x)]).collect(),
            )
        })
        .collect();
    let kind = match a.kind() {
        AutKind::IdentityOnly => AutKind::IdentityOnly,
        _ => AutKind::Custom,
    };
    Ok(AutSet::from_elements(&ng, elems, kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{identity_autset, inner_automorphisms, make_group};

    /// Brute-force subgroup count: subsets closed under multiplication
    /// (finite, so closure under inverses follows), for |G| ≤ 8.
    fn brute_subgroup_count(g: &FiniteGroup) -> usize {
        let n = g.order();
        (0u32..(1 << n))
            .filter(|mask| mask & 1 == 1)
            .filter(|mask| {
                (0..n).all(|a| {
                    mask >> a & 1 == 0
                        || (0..n).all(|b| mask >> b & 1 == 0 || mask >> g.mul(a, b) & 1 == 1)
                })
            })
            .count()
    }

    #[test]
    fn subgroup_counts() {
        let lim = Limits::default();
        for (spec, expect) in [
            ("cyc:1", 1),
            ("cyc:4", 3),
            ("prod:(cyc:2)x(cyc:2)", 5),
            ("sym:3", 6),
            ("dih:4", 10),
            ("q8", 6),
        ] {
            let g = make_group(spec).unwrap();
            assert_eq!(brute_subgroup_count(&g), expect, "{spec} brute force");
            assert_eq!(subgroups(&g, &lim).unwrap().len(), expect, "{spec}");
        }
        assert_eq!(subgroups(&make_group("alt:4").unwrap(), &lim).unwrap().len(), 10);
        assert_eq!(subgroups(&make_group("sym:4").unwrap(), &lim).unwrap().len(), 30);
        assert_eq!(subgroups(&make_group("alt:5").unwrap(), &lim).unwrap().len(), 59);
    }

    #[test]
    fn klein_order_two_subgroups_not_characteristic() {
        let g = make_group("prod:(cyc:2)x(cyc:2)").unwrap();
        let subs = subgroups(&g, &Limits::default()).unwrap();
        let twos: Vec<_> = subs.iter().filter(|h| h.order() == 2).collect();
        assert_eq!(twos.len(), 3);
        assert!(twos.iter().all(|h| h.is_normal() && !h.is_characteristic()));
        assert!(subs[0].is_characteristic() && subs[4].is_characteristic());
    }

    #[test]
    fn normal_subgroup_counts() {
        let lim = Limits::default();
        for (spec, expect) in [
            ("sym:3", 3),
            ("dih:4", 6),
            ("q8", 6),
            ("alt:4", 3),
            ("sym:4", 4),
            ("alt:5", 2),
            ("prod:(alt:5)x(cyc:2)", 4),
            ("cyc:12", 6),
        ] {
            let g = make_group(spec).unwrap();
            let ns = normal_subgroups(&g, &lim).unwrap();
            assert_eq!(ns.len(), expect, "{spec}");
            if g.order() <= 24 {
                let all: Vec<_> = subgroups(&g, &lim)
                    .unwrap()
                    .into_iter()
                    .filter(|h| h.is_normal())
                    .collect();
                assert_eq!(all, ns, "{spec}");
            }
        }
    }

    #[test]
    fn characteristic_subgroups_are_aut_invariant() {
        let lim = Limits::default();
        for spec in ["dih:4", "q8", "sym:4", "cyc:12", "prod:(cyc:2)x(cyc:4)"] {
            let g = make_group(spec).unwrap();
            let aut = automorphism_group(&g, &lim).unwrap();
            for h in characteristic_subgroups(&g, &lim).unwrap() {
                let m = h.membership(&g);
                assert!(aut.iter().all(|a| a.stabilizes(h.elements(), &m)), "{spec}");
            }
        }
    }

    #[test]
    fn quotients() {
        let lim = Limits::default();
        let d6 = make_group("dih:3").unwrap();
        let c3 = select_subgroup(&d6, "order:3", &lim).unwrap();
        assert!(c3.is_characteristic());
        let q = quotient(&d6, &c3).unwrap();
        assert_eq!(q.quotient.order(), 2);
        assert!(q.quotient.check_axioms());
        for x in d6.elements() {
            for y in d6.elements() {
                assert_eq!(
                    q.projection[d6.mul(x, y)],
                    q.quotient.mul(q.projection[x], q.projection[y])
                );
            }
        }
        let t = quotient(&d6, &SubgroupHandle::trivial()).unwrap();
        assert_eq!(t.quotient.order(), 6);
        assert!(is_isomorphic_quick(&t.quotient, &d6));
        let w = quotient(&d6, &SubgroupHandle::whole(&d6)).unwrap();
        assert_eq!(w.quotient.order(), 1);
        let refl = generated_subgroup(&d6, &[3]).unwrap();
        assert!(!refl.is_normal());
        assert_eq!(quotient(&d6, &refl).unwrap_err(), Error::NotNormal);
    }

    fn is_isomorphic_quick(a: &FiniteGroup, b: &FiniteGroup) -> bool {
        crate::groups::is_isomorphic(a, b, &Limits::default())
            .unwrap()
            .is_some()
    }

    #[test]
    fn induced_and_restricted() {
        let lim = Limits::default();
        let d8 = make_group("dih:4").unwrap();
        let z = center(&d8);
        assert_eq!(z.order(), 2);
        let q = quotient(&d8, &z).unwrap();
        let inn = inner_automorphisms(&d8);
        let ind = induced_autset(&d8, &z, &q, &inn).unwrap();
        assert_eq!(ind.len(), 1);
        let id = identity_autset(&d8);
        assert_eq!(induced_autset(&d8, &z, &q, &id).unwrap().len(), 1);

        let s3 = make_group("sym:3").unwrap();
        let a3 = select_subgroup(&s3, "order:3", &lim).unwrap();
        let aut = automorphism_group(&s3, &lim).unwrap();
        let qs = quotient(&s3, &a3).unwrap();
        assert_eq!(induced_autset(&s3, &a3, &qs, &aut).unwrap().len(), 1);
        let res = restricted_autset(&s3, &a3, &aut).unwrap();
        assert_eq!(res.len(), 2);
        assert!(res.is_closed());
        let ng = a3.as_group(&s3);
        assert!(res.iter().all(|a| a.is_homomorphism(&ng)));

        let whole = SubgroupHandle::whole(&s3);
        assert_eq!(restricted_autset(&s3, &whole, &aut).unwrap().elements(), aut.elements());

        let refl = generated_subgroup(&s3, &[1]).unwrap();
        assert_eq!(
            restricted_autset(&s3, &refl, &aut).unwrap_err(),
            Error::NotCharacteristic
        );
    }

    #[test]
    fn inner_induces_inner() {
        let lim = Limits::default();
        let g = make_group("sym:4").unwrap();
        let inn = inner_automorphisms(&g);
        for n in characteristic_subgroups(&g, &lim).unwrap() {
            let q = quotient(&g, &n).unwrap();
            let ind = induced_autset(&g, &n, &q, &inn).unwrap();
            let inn_q = inner_automorphisms(&q.quotient);
            assert!(inn_q.iter().all(|a| ind.contains(a)));
            let res = restricted_autset(&g, &n, &inn).unwrap();
            let ng = n.as_group(&g);
            assert!(inner_automorphisms(&ng).iter().all(|a| res.contains(a)));
            assert!(res.is_closed() && ind.is_closed());
        }
    }

    #[test]
    fn selectors() {
        let lim = Limits::default();
        let g = make_group("dih:4").unwrap();
        assert_eq!(select_subgroup(&g, "center", &lim).unwrap().order(), 2);
        assert_eq!(select_subgroup(&g, "derived", &lim).unwrap().order(), 2);
        assert_eq!(select_subgroup(&g, "trivial", &lim).unwrap().order(), 1);
        assert_eq!(select_subgroup(&g, "whole", &lim).unwrap().order(), 8);
        assert_eq!(select_subgroup(&g, "gens:1", &lim).unwrap().order(), 4);
        assert!(select_subgroup(&g, "order:4", &lim).is_err());
        assert!(select_subgroup(&g, "bogus", &lim).is_err());
        assert!(select_subgroup(&g, "gens:99", &lim).is_err());
    }
}
