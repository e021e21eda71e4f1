//! Group construction from spec strings and Cayley table files.
//!
//! ```text
//! spec := cyc:n | sym:n | alt:n | dih:o | q8
//!       | prod:(spec)x(spec)[x(spec)...] | pow:(spec)^n | table:<path>
//! ```

use std::collections::HashMap;

use super::FiniteGroup;
use crate::{Error, Limits, Result};

pub fn make_group(spec: &str) -> Result<FiniteGroup> {
    make_group_with(spec, &Limits::default())
}

pub fn make_group_with(spec: &str, limits: &Limits) -> Result<FiniteGroup> {
    let spec = spec.trim();
    let order = spec_order(spec)?;
    if order > limits.order_cap as u128 {
        return Err(Error::cap("group order", order, limits.order_cap as u128));
    }
    build(spec)
}

fn unknown(spec: &str) -> Error {
    Error::UnknownGroup(spec.to_string())
}

fn parse_count(spec: &str, s: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| unknown(spec))
}

/// Splits `(a)x(b)x(c)` into `["a", "b", "c"]` respecting nesting.
fn split_factors(spec: &str, body: &str) -> Result<Vec<String>> {
    let bytes = body.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        if bytes.get(i) != Some(&b'(') {
            return Err(unknown(spec));
        }
        let (inner, next) = balanced(spec, body, i)?;
        out.push(inner);
        i = next;
        match bytes.get(i) {
            None => return Ok(out),
            Some(b'x') => i += 1,
            _ => return Err(unknown(spec)),
        }
    }
}

/// Contents of the parenthesis opening at `start` and the index after it.
fn balanced(spec: &str, body: &str, start: usize) -> Result<(String, usize)> {
    let mut depth = 0usize;
    for (j, c) in body.char_indices().skip_while(|&(j, _)| j < start) {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok((body[start + 1..j].to_string(), j + 1));
                }
            }
            _ => {}
        }
    }
    Err(unknown(spec))
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

/// Order implied by a spec, computed before anything is materialised.
fn spec_order(spec: &str) -> Result<u128> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match kind {
        "cyc" => {
            let n = parse_count(spec, arg)?;
            if n == 0 {
                return Err(unknown(spec));
            }
            n as u128
        }
        "sym" | "alt" => {
            let n = parse_count(spec, arg)?;
            if n == 0 || n > 34 {
                if n == 0 {
                    return Err(unknown(spec));
                }
                return Ok(u128::MAX);
            }
            let f = factorial(n);
            if kind == "alt" && n >= 2 {
                f / 2
            } else {
                f
            }
        }
        "dih" => {
            let o = parse_count(spec, arg)?;
            if o == 0 {
                return Err(unknown(spec));
            }
            2 * o as u128
        }
        "q8" if arg.is_empty() => 8,
        "prod" => split_factors(spec, arg)?
            .iter()
            .try_fold(1u128, |acc, f| Ok::<_, Error>(acc.saturating_mul(spec_order(f)?)))?,
        "pow" => {
            let (base, n) = pow_parts(spec, arg)?;
            let b = spec_order(&base)?;
            (0..n).fold(1u128, |acc, _| acc.saturating_mul(b))
        }
        "table" => {
            let text = std::fs::read_to_string(arg)?;
            let first = text.lines().next().unwrap_or("");
            first
                .trim()
                .parse::<u128>()
                .map_err(|_| Error::MalformedTable("line 1 must be the order".into()))?
        }
        _ => return Err(unknown(spec)),
    })
}

fn pow_parts(spec: &str, arg: &str) -> Result<(String, usize)> {
    if !arg.starts_with('(') {
        return Err(unknown(spec));
    }
    let (inner, next) = balanced(spec, arg, 0)?;
    let rest = arg[next..].strip_prefix('^').ok_or_else(|| unknown(spec))?;
    let n = parse_count(spec, rest)?;
    if n == 0 {
        return Err(unknown(spec));
    }
    Ok((inner, n))
}

fn build(spec: &str) -> Result<FiniteGroup> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let mut g = match kind {
        "cyc" => cyclic(parse_count(spec, arg)?),
        "sym" => permutation_group(parse_count(spec, arg)?, false),
        "alt" => permutation_group(parse_count(spec, arg)?, true),
        "dih" => dihedral(parse_count(spec, arg)?),
        "q8" => quaternion(),
        "prod" => {
            let factors = split_factors(spec, arg)?;
            let mut acc = build(&factors[0])?;
            for f in &factors[1..] {
                acc = acc.direct_product(&build(f)?);
            }
            acc
        }
        "pow" => {
            let (base, n) = pow_parts(spec, arg)?;
            build(&base)?.power(n)
        }
        "table" => read_table(arg)?,
        _ => return Err(unknown(spec)),
    };
    g.set_spec(spec);
    Ok(g)
}

fn cyclic(n: usize) -> FiniteGroup {
    let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    FiniteGroup::from_table_unchecked(n, table, format!("cyc:{n}"))
}

/// `D_{2o}`: index `i + o j` stands for `r^i s^j`, with `s r = r^{-1} s`.
fn dihedral(o: usize) -> FiniteGroup {
    let n = 2 * o;
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let (i, j) = (a % o, a / o);
        for b in 0..n {
            let (k, m) = (b % o, b / o);
            let rot = if j == 0 { (i + k) % o } else { (i + o - k) % o };
            table.push(rot + o * ((j + m) % 2));
        }
    }
    FiniteGroup::from_table_unchecked(n, table, format!("dih:{o}"))
}

/// Indices: `0=1, 1=-1, 2=i, 3=-i, 4=j, 5=-j, 6=k, 7=-k`.
fn quaternion() -> FiniteGroup {
    // unit products u*v = (sign, unit) for units 1, i, j, k
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let mut table = Vec::with_capacity(64);
    for a in 0..8 {
        for b in 0..8 {
            let (neg, u) = UNIT[a / 2][b / 2];
            let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
            table.push(2 * u + sign as usize);
        }
    }
    FiniteGroup::from_table_unchecked(8, table, "q8")
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn is_even(p: &[u8]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Permutations in lexicographic order (identity first), composed as
/// `(a * b)(x) = a(b(x))`.
fn permutation_group(n: usize, even_only: bool) -> FiniteGroup {
    let mut perms: Vec<Vec<u8>> = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        if !even_only || is_even(&p) {
            perms.push(p.clone());
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    let index: HashMap<&[u8], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let order = perms.len();
    let mut table = Vec::with_capacity(order * order);
    let mut buf = vec![0u8; n];
    for a in &perms {
        for b in &perms {
            for x in 0..n {
                buf[x] = a[b[x] as usize];
            }
            table.push(index[buf.as_slice()]);
        }
    }
    let name = if even_only { "alt" } else { "sym" };
    FiniteGroup::from_table_unchecked(order, table, format!("{name}:{n}"))
}

/// Cayley table file: line 1 is the order `n`, then `n` rows of `n`
/// whitespace-separated indices.
fn read_table(path: &str) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)?;
    parse_table(&text, path)
}

pub(crate) fn parse_table(text: &str, name: &str) -> Result<FiniteGroup> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let order: usize = lines
        .next()
        .ok_or_else(|| Error::MalformedTable("empty file".into()))?
        .trim()
        .parse()
        .map_err(|_| Error::MalformedTable("line 1 must be the order".into()))?;
    let mut table = Vec::with_capacity(order * order);
    for r in 0..order {
        let line = lines
            .next()
            .ok_or_else(|| Error::MalformedTable(format!("missing row {r}")))?;
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| Error::MalformedTable(format!("row {r} has a non-integer entry")))?;
        if row.len() != order {
            return Err(Error::MalformedTable(format!(
                "row {r} has {} entries, expected {order}",
                row.len()
            )));
        }
        table.extend(row);
    }
    if lines.next().is_some() {
        return Err(Error::MalformedTable("trailing rows".into()));
    }
    FiniteGroup::from_table(order, table, format!("table:{name}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(make_group("cyc:1").unwrap().order(), 1);
        let d6 = make_group("dih:3").unwrap();
        assert_eq!(d6.order(), 6);
        assert!(!d6.is_abelian());
        assert_eq!(make_group("pow:(alt:5)^2").unwrap().order(), 3600);
        assert_eq!(make_group("sym:4").unwrap().order(), 24);
        assert_eq!(make_group("alt:4").unwrap().order(), 12);
        assert_eq!(make_group("q8").unwrap().order(), 8);
        assert_eq!(
            make_group("prod:(cyc:2)x(cyc:3)x(cyc:5)").unwrap().order(),
            30
        );
        assert_eq!(make_group("pow:(prod:(cyc:2)x(cyc:2))^2").unwrap().order(), 16);
    }

    #[test]
    fn constructions_are_groups() {
        for spec in [
            "cyc:7", "sym:4", "alt:5", "dih:4", "dih:1", "q8", "prod:(sym:3)x(cyc:2)", "alt:1",
            "sym:1",
        ] {
            let g = make_group(spec).unwrap();
            assert!(g.check_axioms(), "{spec}");
            assert_eq!(g.spec(), spec);
        }
        assert!(make_group("pow:(alt:5)^2").unwrap().check_axioms());
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(make_group("foo:3"), Err(Error::UnknownGroup(_))));
        assert!(matches!(make_group("cyc:0"), Err(Error::UnknownGroup(_))));
        assert!(matches!(make_group("prod:(cyc:2)(cyc:3)"), Err(Error::UnknownGroup(_))));
        assert!(matches!(make_group("sym:8"), Err(Error::Cap { .. })));
        assert!(matches!(make_group("pow:(alt:5)^3"), Err(Error::Cap { .. })));
        assert!(matches!(make_group("sym:40"), Err(Error::Cap { .. })));
        assert!(matches!(make_group("table:/nonexistent/file"), Err(Error::Io(_))));
    }

    #[test]
    fn quaternion_relations() {
        let q = make_group("q8").unwrap();
        let (minus_one, i, j, k) = (1, 2, 4, 6);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), k + 1);
        assert_eq!(q.mul(q.mul(i, j), k), minus_one);
        assert_eq!(q.center_elements(), vec![0, 1]);
    }

    #[test]
    fn cayley_table_text() {
        let g = parse_table("3\n0 1 2\n1 2 0\n2 0 1\n", "c3").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.inv(1), 2);
        assert!(matches!(
            parse_table("3\n0 1 2\n1 2 0\n", "short"),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            parse_table("2\n0 1\n1 x\n", "bad"),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            parse_table("2\n1 0\n0 1\n", "noid"),
            Err(Error::MalformedTable(_))
        ));
    }
}
