//! Finite groups given by multiplication tables.

use crate::error::{Error, GroupLaw, Result};

/// A validated finite group. Elements are `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    unit: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Checks closure, associativity, the unit and inverses.
    pub fn new(table: Vec<Vec<usize>>, unit: usize, inverse: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) || inverse.len() != n || unit >= n {
            return Err(Error::NotAGroup(GroupLaw::Closure));
        }
        if table.iter().flatten().chain(inverse.iter()).any(|&x| x >= n) {
            return Err(Error::NotAGroup(GroupLaw::Closure));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(GroupLaw::Associativity));
                    }
                }
            }
        }
        for a in 0..n {
            if table[unit][a] != a || table[a][unit] != a {
                return Err(Error::NotAGroup(GroupLaw::Unit));
            }
            if table[a][inverse[a]] != unit || table[inverse[a]][a] != unit {
                return Err(Error::NotAGroup(GroupLaw::Inverse));
            }
        }
        Ok(Self {
            table,
            unit,
            inverse,
        })
    }

    /// The cyclic group `Z_n` with `a·b = a + b mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup(GroupLaw::Closure));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        Self::new(table, 0, inverse)
    }

    /// The symmetric group on `k` points, elements in lexicographic order of
    /// their permutation arrays; `(σ·τ)(x) = σ(τ(x))`.
    pub fn symmetric(k: usize) -> Result<Self> {
        let perms = permutations(k);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let n = perms.len();
        let mut table = vec![vec![0; n]; n];
        let mut inverse = vec![0; n];
        for (a, s) in perms.iter().enumerate() {
            for (b, t) in perms.iter().enumerate() {
                let st: Vec<usize> = (0..k).map(|x| s[t[x]]).collect();
                table[a][b] = index(&st);
            }
            let mut inv = vec![0; k];
            for (x, &y) in s.iter().enumerate() {
                inv[y] = x;
            }
            inverse[a] = index(&inv);
        }
        let unit = index(&(0..k).collect());
        Self::new(table, unit, inverse)
    }

    /// Looks up a group by short name: `Z<n>` or `S<k>`.
    pub fn named(name: &str) -> Result<Self> {
        let (head, tail) = name.split_at(name.len().min(1));
        let n: usize = tail
            .parse()
            .map_err(|_| Error::Shape(format!("unknown group `{name}`")))?;
        match head {
            "Z" | "C" => Self::cyclic(n),
            "S" if n <= 5 => Self::symmetric(n),
            _ => Err(Error::Shape(format!("unknown group `{name}`"))),
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q: Vec<usize> = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// The permutation `k`-point representation of the element at index `g` of
/// [`FiniteGroup::symmetric`]`(k)`.
pub fn symmetric_permutation(k: usize, g: usize) -> Vec<usize> {
    permutations(k)[g].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups_validate() {
        assert_eq!(FiniteGroup::cyclic(1).unwrap().order(), 1);
        assert_eq!(FiniteGroup::cyclic(3).unwrap().mul(2, 2), 1);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
        assert_eq!(FiniteGroup::named("S3").unwrap(), s3);
        assert!(FiniteGroup::named("Q8").is_err());
    }

    #[test]
    fn rejects_non_groups() {
        // a·b = a - b mod 3 is not associative
        let table = (0..3).map(|a| (0..3).map(|b| (a + 3 - b) % 3).collect()).collect();
        assert!(matches!(
            FiniteGroup::new(table, 0, vec![0, 2, 1]),
            Err(Error::NotAGroup(GroupLaw::Associativity))
        ));
        let table = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(
            FiniteGroup::new(table, 0, vec![0, 1]),
            Err(Error::NotAGroup(_))
        ));
        assert!(matches!(
            FiniteGroup::new(vec![vec![0, 2], vec![1, 0]], 0, vec![0, 1]),
            Err(Error::NotAGroup(GroupLaw::Closure))
        ));
    }
}
