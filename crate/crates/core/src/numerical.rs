//! Numerical semigroups stored by their gap sets.

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

/// A cofinite submonoid of the naturals, kept as its sorted gap list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalSemigroup {
    gaps: Vec<u64>,
    /// Minimal generating set.
    generators: Vec<u64>,
}

impl NumericalSemigroup {
    /// The semigroup generated by `gens`; zeros and duplicates are ignored.
    pub fn from_generators(gens: &[u64]) -> Result<NumericalSemigroup> {
        let gens: BTreeSet<u64> = gens.iter().copied().filter(|&g| g > 0).collect();
        let g = gens.iter().fold(0, |acc, &x| num_integer::gcd(acc, x));
        if g != 1 {
            return Err(Error::Parse(format!(
                "generators {gens:?} have gcd {g}, the gap set is infinite"
            )));
        }
        if gens.contains(&1) {
            return Ok(NumericalSemigroup {
                gaps: Vec::new(),
                generators: vec![1],
            });
        }
        // Sieve: with the smallest generator a, the semigroup is determined
        // by the smallest member in each residue class mod a.
        let a = *gens.iter().next().unwrap();
        let bound = {
            let max = *gens.iter().last().unwrap();
            (max * max).max(2 * a)
        };
        let mut member = vec![false; bound as usize + 1];
        member[0] = true;
        for n in 1..=bound as usize {
            member[n] = gens
                .iter()
                .any(|&g| g as usize <= n && member[n - g as usize]);
        }
        // Once a consecutive members are seen, everything after is a member.
        let mut run = 0;
        let mut end = bound as usize;
        for (n, &m) in member.iter().enumerate() {
            run = if m { run + 1 } else { 0 };
            if run == a as usize {
                end = n;
                break;
            }
        }
        let gaps: Vec<u64> = (1..=end)
            .filter(|&n| !member[n])
            .map(|n| n as u64)
            .collect();
        Ok(Self::from_gap_vec(gaps))
    }

    /// The semigroup with the given gap set. Fails unless the complement
    /// contains 0 and is closed under addition.
    pub fn from_gaps(gaps: &[u64]) -> Result<NumericalSemigroup> {
        let set: BTreeSet<u64> = gaps.iter().copied().collect();
        if set.contains(&0) {
            return Err(Error::Parse("0 cannot be a gap".into()));
        }
        let gaps: Vec<u64> = set.into_iter().collect();
        if let Some((x, y)) = closure_failure(&gaps) {
            return Err(Error::Parse(format!(
                "complement not closed: {x} + {y} is a gap"
            )));
        }
        Ok(Self::from_gap_vec(gaps))
    }

    fn from_gap_vec(gaps: Vec<u64>) -> NumericalSemigroup {
        let mut s = NumericalSemigroup {
            gaps,
            generators: Vec::new(),
        };
        s.generators = s.minimal_generators();
        s
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn genus(&self) -> u64 {
        self.gaps.len() as u64
    }

    /// Largest gap, `None` for the whole of the naturals.
    pub fn frobenius(&self) -> Option<u64> {
        self.gaps.last().copied()
    }

    /// Smallest nonzero element.
    pub fn multiplicity(&self) -> u64 {
        (1..).find(|&n| self.contains(n)).unwrap()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.gaps.binary_search(&n).is_err()
    }

    /// `x` in S exactly when `F - x` is not, for `0 <= x <= F`.
    pub fn is_symmetric(&self) -> bool {
        match self.frobenius() {
            None => true,
            Some(f) => (0..=f).all(|x| self.contains(x) != self.contains(f - x)),
        }
    }

    fn minimal_generators(&self) -> Vec<u64> {
        let top = self.frobenius().unwrap_or(0) + self.multiplicity() + 1;
        let members: Vec<u64> = (1..=top).filter(|&n| self.contains(n)).collect();
        members
            .iter()
            .copied()
            .filter(|&n| !members.iter().any(|&a| a < n && self.contains(n - a)))
            .collect()
    }
}

/// A pair of non-gaps whose sum is a gap, if any. Sums beyond the largest
/// gap are automatically non-gaps, so checking up to it suffices.
pub fn closure_failure(gaps: &[u64]) -> Option<(u64, u64)> {
    let set: BTreeSet<u64> = gaps.iter().copied().collect();
    let top = match set.iter().last() {
        Some(&t) => t,
        None => return None,
    };
    let members: Vec<u64> = (1..=top).filter(|n| !set.contains(n)).collect();
    for (ix, &x) in members.iter().enumerate() {
        for &y in &members[ix..] {
            if x + y > top {
                break;
            }
            if set.contains(&(x + y)) {
                return Some((x, y));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    // Oracle: membership by brute-force representability.
    fn representable(n: u64, gens: &[u64]) -> bool {
        let mut ok = vec![false; n as usize + 1];
        ok[0] = true;
        for k in 1..=n as usize {
            ok[k] = gens.iter().any(|&g| g as usize <= k && ok[k - g as usize]);
        }
        ok[n as usize]
    }

    #[test]
    fn small_examples() {
        let s = NumericalSemigroup::from_generators(&[5, 7, 8]).unwrap();
        assert_eq!(s.gaps(), &[1, 2, 3, 4, 6, 9, 11]);
        assert_eq!(s.genus(), 7);
        let s = NumericalSemigroup::from_generators(&[2, 4, 5]).unwrap();
        assert_eq!(s.gaps(), &[1, 3]);
        assert!(s.is_symmetric());
        assert_eq!(s.generators(), &[2, 5]);
        let s = NumericalSemigroup::from_generators(&[3, 4, 5]).unwrap();
        assert_eq!(s.gaps(), &[1, 2]);
        assert!(!s.is_symmetric());
        assert!(NumericalSemigroup::from_generators(&[4, 6]).is_err());
        assert!(NumericalSemigroup::from_gaps(&[1, 2, 6]).is_err());
        assert_eq!(
            NumericalSemigroup::from_gaps(&[1, 2, 3, 4, 6, 8, 9])
                .unwrap()
                .genus(),
            7
        );
    }

    #[test]
    fn sieve_matches_oracle() {
        for gens in [
            vec![9u64, 13, 14],
            vec![12, 13, 14, 22],
            vec![6, 7, 8, 11],
            vec![11, 13, 14],
        ] {
            let s = NumericalSemigroup::from_generators(&gens).unwrap();
            for n in 0..200 {
                assert_eq!(s.contains(n), representable(n, &gens), "{gens:?} {n}");
            }
            let again = NumericalSemigroup::from_generators(s.generators()).unwrap();
            assert_eq!(again, s);
        }
    }
}
