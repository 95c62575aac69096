//! Integer partitions and the scalar quantities attached to them.

use std::fmt;

use num::{BigInt, One, Zero};

use crate::qz::{qint, Poly};

/// A partition of a nonnegative integer: weakly decreasing positive parts.
///
/// Stored without trailing zeros, so the empty partition is `Vec::new()`.
/// The derived ordering is lexicographic on the part vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, trimming trailing zeros.
    ///
    /// # Panics
    /// Panics if the parts are not weakly decreasing.
    pub fn new(mut parts: Vec<usize>) -> Partition {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be weakly decreasing: {parts:?}"
        );
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(n)`, empty when `n == 0`.
    pub fn row(n: usize) -> Partition {
        if n == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Partition {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The `i`-th part, 0-based, zero beyond the last part.
    pub fn get(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The partition with every part doubled.
    pub fn doubled(&self) -> Partition {
        Partition {
            parts: self.parts.iter().map(|p| 2 * p).collect(),
        }
    }

    /// The transposed shape.
    pub fn conjugate(&self) -> Partition {
        let cols = self.get(0);
        let parts = (1..=cols)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// Cells `(i, j)` of the shape, 1-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| (i + 1, j)))
    }

    /// Multiplicity of each part value, as `(value, multiplicity)` pairs in
    /// decreasing value order.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Product of all hook lengths `lambda_i + lambda'_j - i - j + 1`.
    pub fn hook_product(&self) -> BigInt {
        let conj = self.conjugate();
        let mut h = BigInt::one();
        for (i, j) in self.cells() {
            let hook = self.get(i - 1) + conj.get(j - 1) - i - j + 1;
            h *= BigInt::from(hook);
        }
        h
    }

    /// Dimension of the irreducible character indexed by this shape:
    /// `weight! / hook_product`.
    pub fn dimension(&self) -> BigInt {
        let (q, r) = num::integer::div_rem(factorial(self.weight()), self.hook_product());
        debug_assert!(r.is_zero());
        q
    }

    /// Centralizer order of the conjugacy class with this cycle type:
    /// the product of `r^(m_r) * m_r!` over part values `r`.
    pub fn centralizer_order(&self) -> BigInt {
        let mut z = BigInt::one();
        for (value, mult) in self.multiplicities() {
            z *= num::pow::pow(BigInt::from(value), mult);
            z *= factorial(mult);
        }
        z
    }

    /// Size of the conjugacy class with this cycle type in `S_weight`.
    pub fn class_size(&self) -> BigInt {
        factorial(self.weight()) / self.centralizer_order()
    }

    /// Order of the double coset of the hyperoctahedral group indexed by this
    /// coset type: `(2^n n!)^2 / (2^len * centralizer_order)`.
    pub fn double_coset_size(&self) -> BigInt {
        let h = hyperoctahedral_order(self.weight());
        let denom = num::pow::pow(BigInt::from(2u32), self.len()) * self.centralizer_order();
        let (q, r) = num::integer::div_rem(&h * &h, denom);
        debug_assert!(r.is_zero());
        q
    }

    /// Content product `prod (z + j - i)` over cells `(i, j)`.
    pub fn content_poly(&self) -> Poly {
        let offsets: Vec<_> = self
            .cells()
            .map(|(i, j)| qint(j as i64 - i as i64))
            .collect();
        Poly::from_linear_offsets(&offsets)
    }

    /// Zonal content product `prod (z + 2j - i - 1)` over cells `(i, j)`.
    pub fn zonal_content_poly(&self) -> Poly {
        let offsets: Vec<_> = self
            .cells()
            .map(|(i, j)| qint(2 * j as i64 - i as i64 - 1))
            .collect();
        Poly::from_linear_offsets(&offsets)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` in decreasing lexicographic order.
///
/// `partitions_of(0)` is the empty partition alone; `partitions_of(2)` is
/// `[(2), (1,1)]`.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    descend(n, n, &mut prefix, &mut out);
    out
}

fn descend(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: prefix.clone(),
        });
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        prefix.push(p);
        descend(remaining - p, p, prefix, out);
        prefix.pop();
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    f
}

/// `2^n n!`, the order of the hyperoctahedral group inside `S_{2n}`.
pub fn hyperoctahedral_order(n: usize) -> BigInt {
    num::pow::pow(BigInt::from(2u32), n) * factorial(n)
}
