//! Concrete finite groups on dense element indices.
//!
//! Every group is stored as a full Cayley table with the identity at index 0.
//! Orders are capped (default 4096), so the table never exceeds 32 MiB.

mod auts;
mod construct;
mod series;
mod subgroups;

use std::collections::VecDeque;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub use auts::{
    automorphism_group, identity_autset, inner_automorphisms, is_isomorphic, wreath_autset,
    AutKind, AutSet, Automorphism, WreathAutomorphisms,
};
pub use construct::{make_group, make_group_with};
pub use series::{
    characteristic_series, decompose_char_simple, is_simple, is_solvable, solvable_radical,
    CharFactor, CharSeries,
};
pub use subgroups::{
    center, characteristic_subgroups, derived_subgroup, generated_subgroup, induced_autset,
    normal_subgroups, quotient, restricted_autset, select_subgroup, subgroups, QuotientHandle,
    SubgroupHandle,
};

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inv: Vec<u16>,
    spec: String,
    element_orders: OnceLock<Vec<usize>>,
    class_of: OnceLock<(Vec<usize>, Vec<usize>)>,
    generators: OnceLock<Vec<usize>>,
}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table.
    ///
    /// Checks the identity row/column, that every row and column is a
    /// permutation, and associativity (all triples up to order 64, 10^5
    /// seeded random triples above).
    pub fn from_table(order: usize, table: Vec<usize>, spec: impl Into<String>) -> Result<Self> {
        if order == 0 {
            return Err(Error::MalformedTable("order must be positive".into()));
        }
        if order > u16::MAX as usize {
            return Err(Error::cap("group order", order as u128, u16::MAX as u128));
        }
        if table.len() != order * order {
            return Err(Error::MalformedTable(format!(
                "expected {} entries, got {}",
                order * order,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::MalformedTable(format!("entry {bad} out of range")));
        }
        for g in 0..order {
            if table[g] != g || table[g * order] != g {
                return Err(Error::MalformedTable(
                    "row and column 0 must be the identity".into(),
                ));
            }
        }
        let mut seen = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                let x = table[a * order + b];
                if seen[x] == a {
                    return Err(Error::MalformedTable(format!("row {a} repeats {x}")));
                }
                seen[x] = a;
            }
        }
        let mut seen = vec![usize::MAX; order];
        for b in 0..order {
            for a in 0..order {
                let x = table[a * order + b];
                if seen[x] == b {
                    return Err(Error::MalformedTable(format!("column {b} repeats {x}")));
                }
                seen[x] = b;
            }
        }
        let g = Self::from_table_unchecked(order, table, spec);
        if let Some((a, b, c)) = g.associativity_violation() {
            return Err(Error::MalformedTable(format!(
                "not associative at ({a}, {b}, {c})"
            )));
        }
        Ok(g)
    }

    /// Caller guarantees the table is a group table with identity 0.
    pub(crate) fn from_table_unchecked(
        order: usize,
        table: Vec<usize>,
        spec: impl Into<String>,
    ) -> Self {
        let table: Vec<u16> = table.into_iter().map(|x| x as u16).collect();
        let mut inv = vec![0u16; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let b = row.iter().position(|&x| x == 0).expect("group table");
            inv[a] = b as u16;
        }
        FiniteGroup {
            order,
            table,
            inv,
            spec: spec.into(),
            element_orders: OnceLock::new(),
            class_of: OnceLock::new(),
            generators: OnceLock::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn set_spec(&mut self, spec: impl Into<String>) {
        self.spec = spec.into();
    }

    pub const IDENTITY: usize = 0;

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// Row `a` of the table: `b -> a * b`.
    #[inline]
    pub fn row(&self, a: usize) -> &[u16] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// `x g x^{-1}`.
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    /// `[a, b] = a b a^{-1} b^{-1}`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(g) } else { g };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_orders(&self) -> &[usize] {
        self.element_orders.get_or_init(|| {
            (0..self.order)
                .map(|g| {
                    let mut k = 1;
                    let mut x = g;
                    while x != 0 {
                        x = self.mul(x, g);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.element_orders()[g]
    }

    fn classes(&self) -> &(Vec<usize>, Vec<usize>) {
        self.class_of.get_or_init(|| {
            let mut class_of = vec![usize::MAX; self.order];
            let mut sizes = Vec::new();
            for g in 0..self.order {
                if class_of[g] != usize::MAX {
                    continue;
                }
                let id = sizes.len();
                let mut size = 0;
                for x in 0..self.order {
                    let c = self.conj(x, g);
                    if class_of[c] == usize::MAX {
                        class_of[c] = id;
                        size += 1;
                    }
                }
                sizes.push(size);
            }
            (class_of, sizes)
        })
    }

    /// Conjugacy class id of `g`; ids are numbered by smallest member.
    pub fn class_id(&self, g: usize) -> usize {
        self.classes().0[g]
    }

    pub fn class_size(&self, g: usize) -> usize {
        let (class_of, sizes) = self.classes();
        sizes[class_of[g]]
    }

    pub fn num_classes(&self) -> usize {
        self.classes().1.len()
    }

    /// Conjugacy classes as sorted element lists, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let (class_of, sizes) = self.classes();
        let mut out = vec![Vec::new(); sizes.len()];
        for g in 0..self.order {
            out[class_of[g]].push(g);
        }
        out
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        self.closure_from(&[0], gens)
    }

    /// Smallest subgroup containing `seed` (which must contain the identity)
    /// and `gens`, with the seed's own products reachable through `gens`.
    pub(crate) fn closure_from(&self, seed: &[usize], gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        let mut queue = VecDeque::new();
        let mut out = Vec::new();
        for &s in seed.iter().chain(std::iter::once(&0)) {
            if !member[s] {
                member[s] = true;
                queue.push_back(s);
                out.push(s);
            }
        }
        let gens: Vec<usize> = gens.iter().copied().chain(seed.iter().copied()).collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Greedy generating set: repeatedly add the element whose addition
    /// enlarges the generated subgroup most, ties to the smallest index.
    pub fn greedy_generators(&self) -> Vec<usize> {
        self.generators
            .get_or_init(|| self.compute_greedy_generators())
            .clone()
    }

    fn compute_greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current_len = 1;
        let mut member = vec![false; self.order];
        member[0] = true;
        while current_len < self.order {
            let mut best: Option<(usize, Vec<usize>)> = None;
            for g in 0..self.order {
                if member[g] {
                    continue;
                }
                let mut cand = gens.clone();
                cand.push(g);
                let h = self.closure(&cand);
                if best.as_ref().is_none_or(|(_, b)| h.len() > b.len()) {
                    let full = h.len() == self.order;
                    best = Some((g, h));
                    if full {
                        break;
                    }
                }
            }
            let (g, h) = best.expect("proper subgroup has an element outside");
            gens.push(g);
            for &x in &h {
                member[x] = true;
            }
            current_len = h.len();
        }
        gens
    }

    /// Direct product; element `(a, b)` has index `a * |H| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n1, n2) = (self.order, other.order);
        let n = n1 * n2;
        let mut table = Vec::with_capacity(n * n);
        for a1 in 0..n1 {
            for a2 in 0..n2 {
                for b1 in 0..n1 {
                    let r1 = self.mul(a1, b1) * n2;
                    for b2 in 0..n2 {
                        table.push(r1 + other.mul(a2, b2));
                    }
                }
            }
        }
        FiniteGroup::from_table_unchecked(
            n,
            table,
            format!("prod:({})x({})", self.spec, other.spec),
        )
    }

    /// `S^n` with coordinate 0 most significant in the mixed-radix index.
    pub fn power(&self, n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let mut g = self.clone();
        for _ in 1..n {
            g = g.direct_product(self);
        }
        g.spec = format!("pow:({})^{}", self.spec, n);
        g
    }

    pub fn coordinates(&self, factor_order: usize, n: usize, mut x: usize) -> Vec<usize> {
        let mut c = vec![0; n];
        for i in (0..n).rev() {
            c[i] = x % factor_order;
            x /= factor_order;
        }
        c
    }

    /// First associativity violation `(a, b, c)`, if any.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..100_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !check(a, b, c) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    /// Group axioms on the stored table (associativity as in
    /// [`associativity_violation`](Self::associativity_violation)).
    pub fn check_axioms(&self) -> bool {
        (0..self.order).all(|g| {
            self.mul(0, g) == g && self.mul(g, 0) == g && self.mul(g, self.inv(g)) == 0
        }) && self.associativity_violation().is_none()
    }

    /// Center `Z(G)` as sorted indices.
    pub fn center_elements(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|x| self.mul(z, x) == self.mul(x, z)))
            .collect()
    }

    /// Relabels elements by `perm` (`perm[old] = new`, `perm[0] = 0`).
    pub fn relabel(&self, perm: &[usize]) -> FiniteGroup {
        let n = self.order;
        assert_eq!(perm.len(), n);
        assert_eq!(perm[0], 0);
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        FiniteGroup::from_table_unchecked(n, table, format!("relabel({})", self.spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_validation() {
        // C_2
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 0], "c2").is_ok());
        assert!(matches!(
            FiniteGroup::from_table(2, vec![0, 1, 1, 1], "bad"),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            FiniteGroup::from_table(2, vec![1, 0, 0, 1], "bad"),
            Err(Error::MalformedTable(_))
        ));
        // a Latin square with identity that is not associative (order 5 loop)
        let loop5 = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(matches!(
            FiniteGroup::from_table(5, loop5, "loop"),
            Err(Error::MalformedTable(m)) if m.contains("associative")
        ));
    }

    #[test]
    fn greedy_generators_generate() {
        for spec in ["cyc:12", "sym:4", "dih:5", "q8", "prod:(cyc:2)x(cyc:2)", "alt:5"] {
            let g = make_group(spec).unwrap();
            let gens = g.greedy_generators();
            assert_eq!(g.closure(&gens).len(), g.order(), "{spec}");
        }
        let c = make_group("cyc:12").unwrap();
        assert_eq!(c.greedy_generators(), vec![1]);
        assert!(make_group("cyc:1").unwrap().greedy_generators().is_empty());
    }

    #[test]
    fn classes_and_orders() {
        let s3 = make_group("sym:3").unwrap();
        let mut sizes: Vec<_> = s3.conjugacy_classes().iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let c4 = make_group("cyc:4").unwrap();
        assert_eq!(c4.element_orders(), &[1, 4, 2, 4]);
        assert_eq!(make_group("q8").unwrap().center_elements().len(), 2);
    }
}
