use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::qcore::ComplexMatrix;

/// Gate order of an N-switch: `slots[s]` is the gate applied in slot `s`.
/// Slot 0 acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    slots: Vec<usize>,
}

impl Permutation {
    pub fn new(slots: Vec<usize>) -> Result<Self> {
        let n = slots.len();
        if n == 0 {
            return invalid("empty permutation");
        }
        let mut seen = vec![false; n];
        for &g in &slots {
            if g >= n || std::mem::replace(&mut seen[g], true) {
                return invalid(format!("{slots:?} is not a permutation of 0..{n}"));
            }
        }
        Ok(Self { slots })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            slots: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    /// Gate in slot `s`.
    pub fn gate_at(&self, slot: usize) -> usize {
        self.slots[slot]
    }

    /// Slot holding `gate`.
    pub fn slot_of(&self, gate: usize) -> usize {
        self.slots
            .iter()
            .position(|&g| g == gate)
            .expect("gate index within permutation")
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (slot, &gate) in self.slots.iter().enumerate() {
            inv[gate] = slot;
        }
        Self { slots: inv }
    }

    /// Lexicographic rank among all permutations of the same length.
    pub fn rank(&self) -> usize {
        let n = self.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller_later = self.slots[i + 1..]
                .iter()
                .filter(|&&g| g < self.slots[i])
                .count();
            rank += smaller_later * factorial(n - 1 - i);
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn from_rank(rank: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("empty permutation");
        }
        let total = factorial(n);
        if rank >= total {
            return Err(Error::Range {
                value: rank,
                bound: total,
            });
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let mut rest = rank;
        let mut slots = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let f = factorial(i);
            slots.push(pool.remove(rest / f));
            rest %= f;
        }
        Ok(Self { slots })
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..factorial(n)).map(move |r| Self::from_rank(r, n).expect("rank in range"))
    }

    /// `A_{π(N-1)} ⋯ A_{π(0)}`: the product obtained by applying the gates in
    /// slot order.
    pub fn ordered_product(&self, gates: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        if gates.len() != self.len() {
            return invalid(format!(
                "{} gates for a permutation of length {}",
                gates.len(),
                self.len()
            ));
        }
        let mut acc = gates[self.slots[0]].clone();
        for &g in &self.slots[1..] {
            acc = gates[g].matmul(&acc)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic rank of a permutation.
pub fn perm_index(p: &Permutation) -> usize {
    p.rank()
}

/// Permutation of `0..n` with the given lexicographic rank.
pub fn index_perm(i: usize, n: usize) -> Result<Permutation> {
    Permutation::from_rank(i, n)
}
