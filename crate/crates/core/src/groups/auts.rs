//! Automorphisms, enumerated automorphism sets, isomorphism search and the
//! wreath-product automorphisms of direct powers.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::{Error, Limits, Result};

/// A bijection on element indices that respects multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    map: Vec<u16>,
}

impl Automorphism {
    pub fn identity(order: usize) -> Automorphism {
        Automorphism {
            map: (0..order as u16).collect(),
        }
    }

    /// Validates bijectivity, `map(0) = 0` and the homomorphism law
    /// (all pairs up to order 64, 10^5 seeded random pairs above).
    pub fn from_map(g: &FiniteGroup, map: Vec<usize>) -> Result<Automorphism> {
        let a = Automorphism::from_map_unchecked(map);
        if a.map.len() != g.order() || a.map[0] != 0 {
            return Err(Error::Param("automorphism must fix the identity".into()));
        }
        let mut seen = vec![false; g.order()];
        for &x in &a.map {
            if (x as usize) >= g.order() || std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::Param("map is not a bijection".into()));
            }
        }
        if !a.is_homomorphism(g) {
            return Err(Error::Param("map is not a homomorphism".into()));
        }
        Ok(a)
    }

    pub(crate) fn from_map_unchecked(map: Vec<usize>) -> Automorphism {
        Automorphism {
            map: map.into_iter().map(|x| x as u16).collect(),
        }
    }

    /// `conj(x): y -> x y x^{-1}`.
    pub fn conjugation(g: &FiniteGroup, x: usize) -> Automorphism {
        Automorphism {
            map: g.elements().map(|y| g.conj(x, y) as u16).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn map(&self) -> &[u16] {
        &self.map
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.map.iter().map(|&x| x as usize).collect()
    }

    pub fn order_of_group(&self) -> usize {
        self.map.len()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: other.map.iter().map(|&x| self.map[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut map = vec![0u16; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            map[x as usize] = i as u16;
        }
        Automorphism { map }
    }

    pub fn is_homomorphism(&self, g: &FiniteGroup) -> bool {
        let n = g.order();
        let ok = |x: usize, y: usize| self.apply(g.mul(x, y)) == g.mul(self.apply(x), self.apply(y));
        if n <= 64 {
            (0..n).all(|x| (0..n).all(|y| ok(x, y)))
        } else {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xa17);
            (0..100_000).all(|_| ok(rng.gen_range(0..n), rng.gen_range(0..n)))
        }
    }

    /// Whether the sorted element set `elements` is mapped onto itself.
    pub fn stabilizes(&self, elements: &[usize], member: &[bool]) -> bool {
        elements.iter().all(|&x| member[self.apply(x)])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AutKind {
    IdentityOnly,
    Inner,
    Full,
    Custom,
}

/// An enumerated subgroup of `Aut(G)`, sorted by map so that the identity
/// comes first.
#[derive(Debug, Clone)]
pub struct AutSet {
    group_order: usize,
    elements: Vec<Automorphism>,
    index: HashMap<Automorphism, usize>,
    kind: AutKind,
    contains_inner: bool,
}

impl AutSet {
    /// Sorts and deduplicates `elements`; `contains_inner` is computed.
    pub fn from_elements(g: &FiniteGroup, elements: Vec<Automorphism>, kind: AutKind) -> AutSet {
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        let index: HashMap<Automorphism, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let contains_inner = kind == AutKind::Inner
            || kind == AutKind::Full
            || g.elements().all(|x| index.contains_key(&Automorphism::conjugation(g, x)));
        AutSet {
            group_order: g.order(),
            elements,
            index,
            kind,
            contains_inner,
        }
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn kind(&self) -> AutKind {
        self.kind
    }

    pub fn contains_inner(&self) -> bool {
        self.contains_inner
    }

    pub fn get(&self, i: usize) -> &Automorphism {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Automorphism> {
        self.elements.iter()
    }

    pub fn index_of(&self, a: &Automorphism) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn contains(&self, a: &Automorphism) -> bool {
        self.index.contains_key(a)
    }

    /// Index of the identity automorphism, if present.
    pub fn identity_index(&self) -> Option<usize> {
        self.index_of(&Automorphism::identity(self.group_order))
    }

    /// Closure under composition and inverses; all pairs are checked.
    pub fn is_closed(&self) -> bool {
        self.identity_index().is_some()
            && self.elements.iter().all(|a| self.contains(&a.inverse()))
            && self
                .elements
                .iter()
                .all(|a| self.elements.iter().all(|b| self.contains(&a.compose(b))))
    }

    /// A small generating set, chosen greedily in list order.
    pub fn generators(&self) -> Vec<&Automorphism> {
        let mut gens: Vec<&Automorphism> = Vec::new();
        let mut reached: HashSet<Automorphism> = HashSet::new();
        reached.insert(Automorphism::identity(self.group_order));
        for a in &self.elements {
            if reached.contains(a) {
                continue;
            }
            gens.push(a);
            let mut frontier: Vec<Automorphism> = reached.iter().cloned().collect();
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    let y = x.compose(g);
                    if reached.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
            if reached.len() == self.elements.len() {
                break;
            }
        }
        gens
    }
}

/// `{id}` on `g`.
pub fn identity_autset(g: &FiniteGroup) -> AutSet {
    AutSet::from_elements(g, vec![Automorphism::identity(g.order())], AutKind::IdentityOnly)
}

/// `Inn(G) = {conj(g)}`, deduplicated; has size `|G| / |Z(G)|`.
pub fn inner_automorphisms(g: &FiniteGroup) -> AutSet {
    let elems = g.elements().map(|x| Automorphism::conjugation(g, x)).collect();
    AutSet::from_elements(g, elems, AutKind::Inner)
}

/// Partial map on the subgroup generated by `gens[..k]` sending `gens[i]` to
/// `images[i]`, or `None` if that is not an injective homomorphism.
fn extend_partial(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<u16>> {
    const UNSET: u16 = u16::MAX;
    let mut map = vec![UNSET; src.order()];
    let mut used = vec![false; dst.order()];
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let fx = map[x] as usize;
        for (&g, &h) in gens.iter().zip(images) {
            let y = src.mul(x, g);
            let fy = dst.mul(fx, h);
            if map[y] == UNSET {
                if used[fy] {
                    return None;
                }
                used[fy] = true;
                map[y] = fy as u16;
                queue.push(y);
            } else if map[y] as usize != fy {
                return None;
            }
        }
    }
    Some(map)
}

/// All isomorphisms `src -> dst` extending the images fixed so far.
/// Returns early once `limit` maps are found or `stop` is raised.
fn search_isomorphisms(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    out: &mut Vec<Automorphism>,
    limit: usize,
    found: &AtomicUsize,
    stop: &AtomicBool,
) {
    if stop.load(Ordering::Relaxed) {
        return;
    }
    let k = images.len();
    let Some(partial) = extend_partial(src, dst, &gens[..k], images) else {
        return;
    };
    if k == gens.len() {
        debug_assert!(partial.iter().all(|&x| x != u16::MAX));
        out.push(Automorphism { map: partial });
        if found.fetch_add(1, Ordering::Relaxed) + 1 >= limit {
            stop.store(true, Ordering::Relaxed);
        }
        return;
    }
    for &h in &candidates[k] {
        images.push(h);
        search_isomorphisms(src, dst, gens, candidates, images, out, limit, found, stop);
        images.pop();
        if stop.load(Ordering::Relaxed) {
            return;
        }
    }
}

/// Candidate images for each generator: same element order and same
/// conjugacy-class size.
fn image_candidates(src: &FiniteGroup, dst: &FiniteGroup, gens: &[usize]) -> Vec<Vec<usize>> {
    gens.iter()
        .map(|&g| {
            dst.elements()
                .filter(|&h| {
                    dst.element_order(h) == src.element_order(g)
                        && dst.class_size(h) == src.class_size(g)
                })
                .collect()
        })
        .collect()
}

/// Isomorphisms `src -> dst`, up to `limit` of them, in deterministic order.
fn isomorphisms(src: &FiniteGroup, dst: &FiniteGroup, limit: usize) -> Vec<Automorphism> {
    if src.order() != dst.order() {
        return Vec::new();
    }
    if src.order() == 1 {
        return vec![Automorphism::identity(1)];
    }
    let gens = src.greedy_generators();
    let candidates = image_candidates(src, dst, &gens);
    let found = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let branches: Vec<Vec<Automorphism>> = candidates[0]
        .par_iter()
        .map(|&h| {
            let mut out = Vec::new();
            let mut images = vec![h];
            search_isomorphisms(
                src, dst, &gens, &candidates, &mut images, &mut out, limit, &found, &stop,
            );
            out
        })
        .collect();
    branches.into_iter().flatten().collect()
}

/// The full automorphism group, by generator-image backtracking.
pub fn automorphism_group(g: &FiniteGroup, limits: &Limits) -> Result<AutSet> {
    if g.order() > limits.aut_order_cap {
        return Err(Error::cap(
            "automorphism group order",
            g.order() as u128,
            limits.aut_order_cap as u128,
        ));
    }
    let all = isomorphisms(g, g, limits.autset_cap + 1);
    if all.len() > limits.autset_cap {
        return Err(Error::cap(
            "automorphism set size",
            all.len() as u128,
            limits.autset_cap as u128,
        ));
    }
    Ok(AutSet::from_elements(g, all, AutKind::Full))
}

/// An isomorphism `g -> h` (as index map) if one exists.
pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup, limits: &Limits) -> Result<Option<Vec<usize>>> {
    if g.order() != h.order() {
        return Ok(None);
    }
    if g.order() > limits.iso_cap {
        return Err(Error::cap(
            "isomorphism test order",
            g.order() as u128,
            limits.iso_cap as u128,
        ));
    }
    let profile = |x: &FiniteGroup| {
        let mut p: Vec<(usize, usize)> = x
            .elements()
            .map(|e| (x.element_order(e), x.class_size(e)))
            .collect();
        p.sort_unstable();
        p
    };
    if profile(g) != profile(h) {
        return Ok(None);
    }
    // smallest witness in branch order, independent of thread timing
    let found = isomorphisms(g, h, 1);
    let gens = g.greedy_generators();
    let witness = found.into_iter().min_by_key(|m| {
        gens.iter().map(|&x| m.apply(x)).collect::<Vec<_>>()
    });
    Ok(witness.map(|a| a.to_vec()))
}

/// Automorphisms `(a_1 x ... x a_n) ∘ σ` of `S^n` with `a_i` from a base set
/// on `S` and `σ` a coordinate permutation; `σ` sends coordinate `j` to
/// position `σ[j]`.
#[derive(Debug, Clone)]
pub struct WreathAutomorphisms {
    factor_order: usize,
    n: usize,
    base: AutSet,
}

impl WreathAutomorphisms {
    pub fn new(factor: &FiniteGroup, n: usize, base: &AutSet) -> Result<Self> {
        if base.group_order() != factor.order() {
            return Err(Error::Param("base set acts on a different group".into()));
        }
        if n == 0 {
            return Err(Error::Param("n must be positive".into()));
        }
        Ok(WreathAutomorphisms {
            factor_order: factor.order(),
            n,
            base: base.clone(),
        })
    }

    pub fn power_order(&self) -> usize {
        self.factor_order.pow(self.n as u32)
    }

    /// `|base|^n · n!`.
    pub fn size(&self) -> BigUint {
        let mut s = BigUint::from(self.base.len()).pow(self.n as u32);
        for k in 2..=self.n {
            s *= k;
        }
        s
    }

    pub fn base(&self) -> &AutSet {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `alphas[i]` indexes the base set; `sigma` is a permutation of `0..n`.
    pub fn element(&self, alphas: &[usize], sigma: &[usize]) -> Automorphism {
        let (s, n) = (self.factor_order, self.n);
        let total = self.power_order();
        let mut map = Vec::with_capacity(total);
        let mut coords = vec![0usize; n];
        let mut image = vec![0usize; n];
        for x in 0..total {
            let mut r = x;
            for c in coords.iter_mut().rev() {
                *c = r % s;
                r /= s;
            }
            for j in 0..n {
                let i = sigma[j];
                image[i] = self.base.get(alphas[i]).apply(coords[j]);
            }
            let y = image.iter().fold(0usize, |acc, &c| acc * s + c);
            map.push(y as u16);
        }
        Automorphism { map }
    }

    /// Uniform draw of `(alphas, sigma)` and the resulting automorphism.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> (Vec<usize>, Vec<usize>, Automorphism) {
        let alphas: Vec<usize> = (0..self.n).map(|_| rng.gen_range(0..self.base.len())).collect();
        let mut sigma: Vec<usize> = (0..self.n).collect();
        for i in (1..self.n).rev() {
            let j = rng.gen_range(0..=i);
            sigma.swap(i, j);
        }
        let a = self.element(&alphas, &sigma);
        (alphas, sigma, a)
    }

    /// Every member, as an [`AutSet`] on `power`.
    pub fn enumerate(&self, power: &FiniteGroup, limits: &Limits) -> Result<AutSet> {
        if power.order() != self.power_order() {
            return Err(Error::Param("power group has the wrong order".into()));
        }
        let size = self.size();
        if size > BigUint::from(limits.autset_cap) {
            return Err(Error::cap(
                "wreath automorphism set size",
                u128::try_from(&size).unwrap_or(u128::MAX),
                limits.autset_cap as u128,
            ));
        }
        let n = self.n;
        let b = self.base.len();
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        let mut out = Vec::new();
        let combos = b.pow(n as u32);
        for c in 0..combos {
            let mut r = c;
            let mut alphas = vec![0; n];
            for a in alphas.iter_mut().rev() {
                *a = r % b;
                r /= b;
            }
            for sigma in &perms {
                out.push(self.element(&alphas, sigma));
            }
        }
        Ok(AutSet::from_elements(power, out, AutKind::Custom))
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

/// Enumerated `base ≀ Sym_n` acting on `power = S^n`.
pub fn wreath_autset(
    factor: &FiniteGroup,
    n: usize,
    base: &AutSet,
    power: &FiniteGroup,
    limits: &Limits,
) -> Result<AutSet> {
    WreathAutomorphisms::new(factor, n, base)?.enumerate(power, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::make_group;

    /// Brute force over all bijections fixing 0.
    fn brute_force_aut_count(g: &FiniteGroup) -> usize {
        let n = g.order();
        let mut rest: Vec<usize> = (1..n).collect();
        let mut perms = Vec::new();
        permutations(&mut rest, 0, &mut perms);
        perms
            .into_iter()
            .filter(|p| {
                let mut map = vec![0];
                map.extend(p);
                (0..n).all(|x| (0..n).all(|y| map[g.mul(x, y)] == g.mul(map[x], map[y])))
            })
            .count()
    }

    fn aut(spec: &str) -> AutSet {
        automorphism_group(&make_group(spec).unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn aut_orders_match_brute_force() {
        for (spec, expect) in [
            ("cyc:3", 2),
            ("sym:3", 6),
            ("prod:(cyc:2)x(cyc:2)", 6),
            ("cyc:4", 2),
            ("dih:4", 8),
            ("cyc:6", 2),
            ("q8", 24),
        ] {
            let g = make_group(spec).unwrap();
            if g.order() <= 8 {
                assert_eq!(brute_force_aut_count(&g), expect, "{spec} brute force");
            }
            let a = aut(spec);
            assert_eq!(a.len(), expect, "{spec}");
            assert!(a.is_closed());
            assert!(a.iter().all(|x| x.is_homomorphism(&g)));
            assert_eq!(a.identity_index(), Some(0));
        }
        assert_eq!(aut("dih:5").len(), 20);
        assert_eq!(aut("alt:4").len(), 24);
        assert_eq!(aut("alt:5").len(), 120);
        assert_eq!(aut("cyc:1").len(), 1);
    }

    #[test]
    fn s3_automorphisms_are_inner() {
        let g = make_group("sym:3").unwrap();
        let inn = inner_automorphisms(&g);
        let full = aut("sym:3");
        assert_eq!(inn.len(), 6);
        assert!(full.iter().all(|a| inn.contains(a)));
        assert!(full.contains_inner());
    }

    #[test]
    fn inner_sizes() {
        for spec in ["cyc:5", "prod:(cyc:2)x(cyc:2)", "sym:3", "dih:4", "q8", "alt:4", "dih:5"] {
            let g = make_group(spec).unwrap();
            let inn = inner_automorphisms(&g);
            assert_eq!(inn.len() * g.center_elements().len(), g.order(), "{spec}");
            assert!(inn.is_closed());
        }
        assert_eq!(inner_automorphisms(&make_group("dih:4").unwrap()).len(), 4);
        assert_eq!(inner_automorphisms(&make_group("cyc:9").unwrap()).len(), 1);
    }

    #[test]
    fn isomorphism_tests() {
        let lim = Limits::default();
        let c4 = make_group("cyc:4").unwrap();
        let v4 = make_group("prod:(cyc:2)x(cyc:2)").unwrap();
        assert_eq!(is_isomorphic(&c4, &v4, &lim).unwrap(), None);
        let d6 = make_group("dih:3").unwrap();
        let s3 = make_group("sym:3").unwrap();
        let w = is_isomorphic(&d6, &s3, &lim).unwrap().expect("D6 = S3");
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(w[d6.mul(x, y)], s3.mul(w[x], w[y]));
            }
        }
        let q = make_group("q8").unwrap();
        let id = is_isomorphic(&q, &q, &lim).unwrap().unwrap();
        assert_eq!(id, (0..8).collect::<Vec<_>>());
        let d8 = make_group("dih:4").unwrap();
        assert_eq!(is_isomorphic(&q, &d8, &lim).unwrap(), None);
        let c6 = make_group("cyc:6").unwrap();
        let c2c3 = make_group("prod:(cyc:2)x(cyc:3)").unwrap();
        assert!(is_isomorphic(&c6, &c2c3, &lim).unwrap().is_some());
    }

    #[test]
    fn aut_cap_errors() {
        let lim = Limits {
            aut_order_cap: 10,
            ..Limits::default()
        };
        let g = make_group("dih:8").unwrap();
        assert!(matches!(automorphism_group(&g, &lim), Err(Error::Cap { .. })));
        let lim = Limits {
            autset_cap: 100,
            ..Limits::default()
        };
        let g = make_group("pow:(cyc:2)^4").unwrap(); // |GL(4,2)| = 20160
        assert!(matches!(automorphism_group(&g, &lim), Err(Error::Cap { .. })));
    }

    #[test]
    fn wreath_basics() {
        let s3 = make_group("sym:3").unwrap();
        let inn = inner_automorphisms(&s3);
        let power = s3.power(2);
        let lim = Limits::default();
        let w = wreath_autset(&s3, 2, &inn, &power, &lim).unwrap();
        assert_eq!(w.len(), 72);
        assert!(w.iter().all(|a| a.is_homomorphism(&power)));
        assert!(w.is_closed());
        // n = 1 reproduces the base set
        let w1 = wreath_autset(&s3, 1, &inn, &s3, &lim).unwrap();
        assert_eq!(w1.elements(), inn.elements());
        // swap
        let wr = WreathAutomorphisms::new(&s3, 2, &inn).unwrap();
        let id = inn.identity_index().unwrap();
        let swap = wr.element(&[id, id], &[1, 0]);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(swap.apply(a * 6 + b), b * 6 + a);
            }
        }
        assert_eq!(wr.size(), BigUint::from(72u32));
    }

    #[test]
    fn wreath_of_full_aut_is_full_for_a5_squared_sample() {
        use rand::SeedableRng;
        let a5 = make_group("alt:5").unwrap();
        let base = aut("alt:5");
        let wr = WreathAutomorphisms::new(&a5, 2, &base).unwrap();
        let power = a5.power(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let (_, _, a) = wr.sample(&mut rng);
            assert!(a.is_homomorphism(&power));
        }
        assert_eq!(wr.size(), BigUint::from(28_800u32));
        let lim = Limits {
            autset_cap: 1000,
            ..Limits::default()
        };
        assert!(matches!(wr.enumerate(&power, &lim), Err(Error::Cap { .. })));
    }
}
