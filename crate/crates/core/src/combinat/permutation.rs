//! Permutations, pairing graphs, and hyperoctahedral enumeration.

use std::fmt;

use crate::error::{Error, Result};
use crate::Limits;

use super::partition::{factorial, hyperoctahedral_order, Partition};

/// A permutation of `{1, ..., m}` stored as 0-based images.
///
/// The public surface is 1-based: `apply`, `one_line`, and `from_one_line`
/// all speak in values `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Permutation {
        Permutation {
            images: (0..m).collect(),
        }
    }

    /// Builds from a 1-based one-line image vector.
    ///
    /// # Errors
    /// Domain error unless the vector is a bijection of `1..=m`.
    pub fn from_one_line(images: &[usize]) -> Result<Permutation> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &v in images {
            if v == 0 || v > m {
                return Err(Error::Domain(format!(
                    "one-line entry {v} outside 1..={m}"
                )));
            }
            if seen[v - 1] {
                return Err(Error::Domain(format!("one-line entry {v} repeated")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&v| v - 1).collect(),
        })
    }

    pub(crate) fn from_images0(images: Vec<usize>) -> Permutation {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v)
        });
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1] + 1
    }

    /// Image of the 0-based point `k`.
    pub fn image0(&self, k: usize) -> usize {
        self.images[k]
    }

    /// The 1-based one-line form.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v + 1).collect()
    }

    /// Functional composition: `(a.compose(b))(k) = a(b(k))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&v| self.images[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v] = k;
        }
        Permutation { images }
    }

    /// Cycle lengths as a partition of the degree.
    pub fn cycle_type(&self) -> Partition {
        let m = self.degree();
        let mut seen = vec![false; m];
        let mut lengths = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.images[k];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(lengths)
    }

    /// The pairing graph on `{1, ..., 2n}` induced by this permutation.
    ///
    /// # Errors
    /// Domain error for odd degree.
    pub fn coset_graph(&self) -> Result<CosetGraph> {
        let m = self.degree();
        if !m.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "pairing graph needs even degree, got {m}"
            )));
        }
        let mut uf = UnionFind::new(m);
        for k in 0..m / 2 {
            uf.union(2 * k, 2 * k + 1);
            uf.union(self.images[2 * k], self.images[2 * k + 1]);
        }
        let mut grouped: Vec<Vec<usize>> = vec![Vec::new(); m];
        for v in 0..m {
            grouped[uf.find(v)].push(v + 1);
        }
        let mut components: Vec<Vec<usize>> =
            grouped.into_iter().filter(|c| !c.is_empty()).collect();
        components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        Ok(CosetGraph {
            vertex_count: m,
            components,
        })
    }

    /// Coset type: the component sizes of the pairing graph, halved.
    pub fn coset_type(&self) -> Result<Partition> {
        Ok(self.coset_graph()?.coset_type())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.one_line().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Components of the graph on `{1, ..., 2n}` whose edges join `2k-1` to `2k`
/// and `sigma(2k-1)` to `sigma(2k)`.
///
/// Every component has even size; vertices are 1-based and sorted, components
/// ordered by decreasing size, ties broken by smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetGraph {
    pub vertex_count: usize,
    pub components: Vec<Vec<usize>>,
}

impl CosetGraph {
    /// Half the component sizes, as a partition of n.
    pub fn coset_type(&self) -> Partition {
        Partition::new(self.components.iter().map(|c| c.len() / 2).collect())
    }

    /// Number of components.
    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Advances `items` to its lexicographic successor, returning `false` (and
/// leaving the slice sorted ascending) after the last arrangement.
pub fn next_permutation(items: &mut [usize]) -> bool {
    let n = items.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        items.reverse();
        return false;
    }
    let mut j = n - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

/// Streams all of `S_m` in lexicographic one-line order.
///
/// # Errors
/// Resource error when `m!` exceeds the enumeration budget.
pub fn symmetric_group_iter(
    m: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = Permutation>> {
    let size = factorial(m);
    limits.charge(
        &format!("symmetric group of degree {m}"),
        big_to_budget(&size),
    )?;
    let mut images: Vec<usize> = (0..m).collect();
    let mut done = false;
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = Permutation::from_images0(images.clone());
        done = !next_permutation(&mut images);
        Some(current)
    }))
}

/// Streams the hyperoctahedral group `H_n` inside `S_{2n}`: all permutations
/// preserving the perfect matching `{{1,2}, {3,4}, ...}`.
///
/// Elements are produced as (pair permutation, per-pair swap mask) in
/// lexicographic-then-binary order; there are `2^n n!` of them.
///
/// # Errors
/// Resource error when `2^n n!` exceeds the enumeration budget.
pub fn hyperoctahedral_iter(
    n: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = Permutation>> {
    let size = hyperoctahedral_order(n);
    limits.charge(
        &format!("hyperoctahedral group for n = {n}"),
        big_to_budget(&size),
    )?;
    let mut blocks: Vec<usize> = (0..n).collect();
    let mut mask: u64 = 0;
    let mask_end: u64 = 1u64 << n;
    let mut done = n == 0;
    let mut emitted_empty = false;
    Ok(std::iter::from_fn(move || {
        if n == 0 {
            if emitted_empty {
                return None;
            }
            emitted_empty = true;
            return Some(Permutation::identity(0));
        }
        if done {
            return None;
        }
        let mut images = vec![0; 2 * n];
        for (k, &target) in blocks.iter().enumerate() {
            let flip = mask >> k & 1 == 1;
            images[2 * k] = 2 * target + usize::from(flip);
            images[2 * k + 1] = 2 * target + usize::from(!flip);
        }
        mask += 1;
        if mask == mask_end {
            mask = 0;
            done = !next_permutation(&mut blocks);
        }
        Some(Permutation::from_images0(images))
    }))
}

/// A canonical permutation with the given coset type.
///
/// Each part `m` contributes one cycle through `2m` consecutive points, whose
/// pairing graph closes into a single component of size `2m`.
pub fn coset_representative(mu: &Partition) -> Permutation {
    let mut images = Vec::with_capacity(2 * mu.weight());
    let mut offset = 0;
    for &part in mu.parts() {
        let len = 2 * part;
        for v in 0..len {
            images.push(offset + (v + 1) % len);
        }
        offset += len;
    }
    Permutation::from_images0(images)
}

fn big_to_budget(size: &num::BigInt) -> u64 {
    use num::ToPrimitive;
    size.to_u64().unwrap_or(u64::MAX)
}
