//! Finite abelian semigroups given by multiplication tables, selectors and
//! isomorphism search.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest order accepted by [`find_isomorphism`].
pub const ISOMORPHISM_ORDER_CAP: usize = 8;

/// Elements are the dense indices `0..order`; `table[a][b]` is the index of
/// `λ_a λ_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semigroup {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub zero: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectorQuery {
    pub lower: Vec<usize>,
    pub upper: usize,
}

impl Semigroup {
    /// Builds and validates a semigroup.
    pub fn new(
        name: impl Into<String>,
        table: Vec<Vec<usize>>,
        zero: Option<usize>,
    ) -> Result<Semigroup> {
        let s = Semigroup { name: name.into(), order: table.len(), table, zero };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        if n == 0 || self.table.len() != n {
            return Err(invalid(format!("{}: table must be {n}x{n} with n > 0", self.name)));
        }
        for row in &self.table {
            if row.len() != n {
                return Err(invalid(format!("{}: ragged table", self.name)));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(invalid(format!("{}: entry {x} out of range", self.name)));
            }
        }
        for (a, b) in (0..n).cartesian_product(0..n) {
            if self.table[a][b] != self.table[b][a] {
                return Err(invalid(format!("{}: not commutative at ({a},{b})", self.name)));
            }
        }
        for ((a, b), c) in (0..n).cartesian_product(0..n).cartesian_product(0..n) {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(invalid(format!("{}: not associative at ({a},{b},{c})", self.name)));
            }
        }
        if let Some(z) = self.zero {
            if z >= n || (0..n).any(|a| self.table[a][z] != z) {
                return Err(invalid(format!("{}: lambda_{z} is not a zero", self.name)));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Product of a chain of elements.
    pub fn product(&self, xs: &[usize]) -> usize {
        let (first, rest) = xs.split_first().expect("empty product");
        rest.iter().fold(*first, |acc, &x| self.mul(acc, x))
    }

    /// Nonzero elements in increasing order.
    pub fn nonzero_elements(&self) -> Vec<usize> {
        (0..self.order).filter(|&a| Some(a) != self.zero).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("semigroup serializes")
    }

    pub fn from_json(s: &str) -> Result<Semigroup> {
        let sg: Semigroup = serde_json::from_str(s)?;
        if sg.table.len() != sg.order {
            return Err(invalid("order does not match table size"));
        }
        sg.validate()?;
        Ok(sg)
    }
}

/// `Z_n` with `λ_a λ_b = λ_{(a+b) mod n}`.
pub fn make_cyclic(n: usize) -> Result<Semigroup> {
    if n == 0 {
        return Err(invalid("cyclic group of order 0"));
    }
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    Ok(Semigroup { name: format!("Z{n}"), order: n, table, zero: None })
}

/// `Z_2 × Z_2` with `λ0=(0,0), λ1=(1,0), λ2=(0,1), λ3=(1,1)`.
pub fn make_klein() -> Semigroup {
    let enc = |x: usize, y: usize| x + 2 * y;
    let table = (0..4)
        .map(|a| (0..4).map(|b| enc((a & 1) ^ (b & 1), (a >> 1) ^ (b >> 1))).collect())
        .collect();
    Semigroup { name: "D4".into(), order: 4, table, zero: None }
}

/// `S_E^(N)`: `λ_a λ_b = λ_{min(a+b, N+1)}` with zero `λ_{N+1}`.
pub fn make_se(n: usize) -> Semigroup {
    let z = n + 1;
    let table = (0..=z).map(|a| (0..=z).map(|b| (a + b).min(z)).collect()).collect();
    Semigroup { name: format!("SE{n}"), order: z + 1, table, zero: Some(z) }
}

/// Componentwise product; element `(a, a')` has index `a·|s2| + a'`.
pub fn direct_product(s1: &Semigroup, s2: &Semigroup) -> Semigroup {
    let m = s2.order;
    let n = s1.order * m;
    let table = (0..n)
        .map(|x| (0..n).map(|y| s1.mul(x / m, y / m) * m + s2.mul(x % m, y % m)).collect())
        .collect();
    let zero = match (s1.zero, s2.zero) {
        (Some(z1), Some(z2)) => Some(z1 * m + z2),
        _ => None,
    };
    Semigroup { name: format!("{}x{}", s1.name, s2.name), order: n, table, zero }
}

/// Parses `Z<n>`, `D4`/`Klein`, `SE<N>` and products written `A x B`.
pub fn by_name(name: &str) -> Result<Semigroup> {
    let name = name.trim();
    if let Some((a, b)) = name.split_once(" x ") {
        return Ok(direct_product(&by_name(a)?, &by_name(b)?));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::UnknownFixture(name.to_string()));
    if name == "D4" || name.eq_ignore_ascii_case("klein") {
        Ok(make_klein())
    } else if let Some(n) = name.strip_prefix("SE") {
        Ok(make_se(num(n)?))
    } else if let Some(n) = name.strip_prefix('Z') {
        make_cyclic(num(n)?)
    } else {
        Err(Error::UnknownFixture(name.to_string()))
    }
}

/// `K_{a1…ar}^γ`: 1 iff the chain product of the lower indices is `λ_γ`.
pub fn selector(s: &Semigroup, q: &SelectorQuery) -> Result<u8> {
    if q.lower.len() < 2 {
        return Err(invalid("selector needs at least two lower indices"));
    }
    if q.lower.iter().chain([&q.upper]).any(|&x| x >= s.order) {
        return Err(invalid("selector index out of range"));
    }
    Ok(u8::from(s.product(&q.lower) == q.upper))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub n: usize,
    pub holds: bool,
    /// `(identity number 1..=4, indices)` of the first failure.
    pub counterexample: Option<(usize, [usize; 3])>,
}

/// Checks on `Z_{2n}`:
/// `K_{k+n,l}^m = K_{kl}^{m+n}`, `K_{k+n,l}^{m+n} = K_{kl}^m`,
/// `K_{i+n,j+n}^γ = K_{ij}^γ` and `K_{i,j+n}^k = K_{i+n,j}^k`.
pub fn check_even_cyclic_identities(n: usize) -> Result<IdentityReport> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let z = make_cyclic(2 * n)?;
    let m2 = 2 * n;
    let k = |a: usize, b: usize, c: usize| u8::from(z.mul(a % m2, b % m2) == c % m2);
    for ((a, b), c) in (0..m2).cartesian_product(0..m2).cartesian_product(0..m2) {
        let checks = [
            k(a + n, b, c) == k(a, b, c + n),
            k(a + n, b, c + n) == k(a, b, c),
            k(a + n, b + n, c) == k(a, b, c),
            k(a, b + n, c) == k(a + n, b, c),
        ];
        if let Some(i) = checks.iter().position(|ok| !ok) {
            return Ok(IdentityReport { n, holds: false, counterexample: Some((i + 1, [a, b, c])) });
        }
    }
    Ok(IdentityReport { n, holds: true, counterexample: None })
}

/// Permutation `φ` with `φ(a·b) = φ(a)·φ(b)` and zero mapped to zero.
/// `Ok(None)` when no isomorphism exists or the orders differ.
pub fn find_isomorphism(s1: &Semigroup, s2: &Semigroup) -> Result<Option<Vec<usize>>> {
    if s1.order != s2.order {
        return Ok(None);
    }
    let n = s1.order;
    if n > ISOMORPHISM_ORDER_CAP {
        return Err(Error::SearchCapExceeded(n, ISOMORPHISM_ORDER_CAP));
    }
    if s1.zero.is_some() != s2.zero.is_some() {
        return Ok(None);
    }
    let found = (0..n).permutations(n).find(|phi| {
        if let (Some(z1), Some(z2)) = (s1.zero, s2.zero) {
            if phi[z1] != z2 {
                return false;
            }
        }
        (0..n)
            .cartesian_product(0..n)
            .all(|(a, b)| phi[s1.mul(a, b)] == s2.mul(phi[a], phi[b]))
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables() {
        assert_eq!(make_cyclic(4).unwrap().table[1][1], 2);
        assert_eq!(make_cyclic(6).unwrap().table[5][5], 4);
        assert!(make_cyclic(0).is_err());
    }

    #[test]
    fn klein_table() {
        let k = make_klein();
        assert_eq!(
            k.table,
            vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]]
        );
        k.validate().unwrap();
    }

    #[test]
    fn se_has_zero() {
        let s = make_se(3);
        assert_eq!(s.order, 5);
        assert_eq!(s.zero, Some(4));
        assert_eq!(s.mul(2, 2), 4);
        assert_eq!(s.mul(1, 2), 3);
        s.validate().unwrap();
    }

    #[test]
    fn direct_product_of_z2_is_klein() {
        let z2 = make_cyclic(2).unwrap();
        let p = direct_product(&z2, &z2);
        assert_eq!(p.order, 4);
        assert!(find_isomorphism(&p, &make_klein()).unwrap().is_some());
        assert_eq!(p.zero, None);
        let q = direct_product(&make_se(1), &make_se(0));
        assert_eq!(q.zero, Some(2 * 2 + 1));
        q.validate().unwrap();
    }

    #[test]
    fn selector_chain() {
        let z4 = make_cyclic(4).unwrap();
        let q = SelectorQuery { lower: vec![1, 2, 3], upper: 2 };
        assert_eq!(selector(&z4, &q).unwrap(), 1);
        let q = SelectorQuery { lower: vec![1], upper: 1 };
        assert!(selector(&z4, &q).is_err());
    }

    #[test]
    fn z4_triple_selectors_in_lower_half() {
        // nonzero K_{ijk}^γ with i,j,k in {0,1}
        let z4 = make_cyclic(4).unwrap();
        let mut hits = Vec::new();
        for ((i, j), k) in (0..2).cartesian_product(0..2).cartesian_product(0..2) {
            for g in 0..4 {
                if selector(&z4, &SelectorQuery { lower: vec![i, j, k], upper: g }).unwrap() == 1 {
                    hits.push((i, j, k, g));
                }
            }
        }
        assert_eq!(
            hits,
            vec![
                (0, 0, 0, 0),
                (0, 0, 1, 1),
                (0, 1, 0, 1),
                (0, 1, 1, 2),
                (1, 0, 0, 1),
                (1, 0, 1, 2),
                (1, 1, 0, 2),
                (1, 1, 1, 3)
            ]
        );
    }

    #[test]
    fn even_cyclic_identities_small() {
        for n in 1..=4 {
            assert!(check_even_cyclic_identities(n).unwrap().holds);
        }
    }

    #[test]
    fn isomorphism_search() {
        let z4 = make_cyclic(4).unwrap();
        assert_eq!(find_isomorphism(&z4, &make_klein()).unwrap(), None);
        assert_eq!(find_isomorphism(&z4, &make_cyclic(3).unwrap()).unwrap(), None);
        assert!(find_isomorphism(&z4, &z4).unwrap().is_some());
        let big = make_cyclic(9).unwrap();
        assert!(matches!(find_isomorphism(&big, &big), Err(Error::SearchCapExceeded(9, 8))));
    }

    #[test]
    fn json_is_canonical() {
        let s = make_se(1);
        assert_eq!(s.to_json(), r#"{"name":"SE1","order":3,"table":[[0,1,2],[1,2,2],[2,2,2]],"zero":2}"#);
        assert_eq!(Semigroup::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("Z4").unwrap(), make_cyclic(4).unwrap());
        assert_eq!(by_name("klein").unwrap(), make_klein());
        assert_eq!(by_name("SE3").unwrap(), make_se(3));
        assert_eq!(by_name("Z2 x Z2").unwrap().order, 4);
        assert!(by_name("Q8").is_err());
    }
}
