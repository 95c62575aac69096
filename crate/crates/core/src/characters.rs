//! Irreducible characters of symmetric groups and zonal spherical functions.
//!
//! Characters are computed by the recursive border-strip rule on beta-sets
//! and collected into per-degree tables that are built lazily, cached
//! process-wide, and optionally persisted to a JSON file.  Zonal spherical
//! functions are hyperoctahedral averages of characters of doubled shapes;
//! they are constant on double cosets and tabulated per coset type.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{
    coset_representative, factorial, hyperoctahedral_iter, hyperoctahedral_order, partitions_of,
    symmetric_group_iter, Partition, Permutation,
};
use crate::error::{Error, Result};
use crate::qz::Poly;
use crate::Limits;

/// Character value `chi^lam(rho)` for two partitions of the same weight.
///
/// # Panics
/// Panics if the weights differ.
pub fn mn_character(lam: &Partition, rho: &Partition) -> i64 {
    assert_eq!(
        lam.weight(),
        rho.weight(),
        "character arguments must partition the same integer"
    );
    let mut memo = HashMap::new();
    mn_recursive(lam.parts(), rho.parts(), &mut memo)
}

type CharMemo = HashMap<(Vec<usize>, Vec<usize>), i64>;

/// Border-strip recursion on the beta-set of `lam`, consuming `rho` from the
/// front.  Removing a strip of length `r` subtracts `r` from one beta number;
/// the sign is the parity of the number of beta numbers jumped over.
fn mn_recursive(lam: &[usize], rho: &[usize], memo: &mut CharMemo) -> i64 {
    if rho.is_empty() {
        debug_assert!(lam.is_empty());
        return 1;
    }
    let key = (lam.to_vec(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = rho[0];
    let len = lam.len();
    // Strictly decreasing beta numbers lam[i] + (len - 1 - i).
    let beta: Vec<usize> = lam.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0i64;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let jumped = beta.iter().filter(|&&x| target < x && x < b).count();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        let mut next: Vec<usize> = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let mut sub: Vec<usize> = next
            .iter()
            .enumerate()
            .map(|(j, &x)| x + j + 1 - len)
            .collect();
        while sub.last() == Some(&0) {
            sub.pop();
        }
        total += sign * mn_recursive(&sub, &rho[1..], memo);
    }
    memo.insert(key, total);
    total
}

/// The complete character table of `S_degree`.
///
/// Rows are indexed by shape, columns by cycle type, both in the decreasing
/// lexicographic order of [`partitions_of`].
#[derive(Debug, Clone)]
pub struct CharacterTable {
    degree: usize,
    shapes: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    fn build(degree: usize) -> CharacterTable {
        let shapes = partitions_of(degree);
        let index: HashMap<Partition, usize> = shapes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut memo = CharMemo::new();
        let values = shapes
            .iter()
            .map(|lam| {
                shapes
                    .iter()
                    .map(|rho| mn_recursive(lam.parts(), rho.parts(), &mut memo))
                    .collect()
            })
            .collect();
        CharacterTable {
            degree,
            shapes,
            index,
            values,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Shapes (equivalently cycle types) in table order.
    pub fn shapes(&self) -> &[Partition] {
        &self.shapes
    }

    /// Position of a partition in table order.
    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn value_by_index(&self, shape: usize, class: usize) -> i64 {
        self.values[shape][class]
    }

    /// Character value by shape and cycle type.
    ///
    /// # Panics
    /// Panics if either partition has the wrong weight.
    pub fn value(&self, lam: &Partition, rho: &Partition) -> i64 {
        let li = self.index[lam];
        let ci = self.index[rho];
        self.values[li][ci]
    }

    /// Checks both exact orthogonality relations and the dimension column.
    pub fn is_consistent(&self) -> bool {
        let order = factorial(self.degree);
        let class_sizes: Vec<BigInt> = self.shapes.iter().map(|p| p.class_size()).collect();
        // First kind: rows weighted by class sizes.
        for a in 0..self.shapes.len() {
            for b in a..self.shapes.len() {
                let sum: BigInt = (0..self.shapes.len())
                    .map(|c| {
                        &class_sizes[c]
                            * BigInt::from(self.values[a][c] * self.values[b][c])
                    })
                    .sum();
                let expected = if a == b { order.clone() } else { BigInt::zero() };
                if sum != expected {
                    return false;
                }
            }
        }
        // Second kind: columns against centralizer orders.
        for c in 0..self.shapes.len() {
            for d in c..self.shapes.len() {
                let sum: BigInt = (0..self.shapes.len())
                    .map(|a| BigInt::from(self.values[a][c] * self.values[a][d]))
                    .sum();
                let expected = if c == d {
                    self.shapes[c].centralizer_order()
                } else {
                    BigInt::zero()
                };
                if sum != expected {
                    return false;
                }
            }
        }
        // Dimension column at the identity class (1^degree).
        let id_class = self.shapes.len() - 1;
        self.shapes.iter().enumerate().all(|(a, lam)| {
            BigInt::from(self.values[a][id_class]) == lam.dimension()
        })
    }
}

fn table_cache() -> &'static Mutex<HashMap<usize, Arc<CharacterTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The character table of `S_degree`, built on first use and cached.
///
/// # Errors
/// Resource error when `degree` exceeds `2 * limits.n_max`.
pub fn character_table(degree: usize, limits: &Limits) -> Result<Arc<CharacterTable>> {
    if degree > 2 * limits.n_max {
        return Err(Error::Resource(format!(
            "character table degree {degree} exceeds 2 * n_max = {}",
            2 * limits.n_max
        )));
    }
    if let Some(t) = table_cache().lock().unwrap().get(&degree) {
        return Ok(Arc::clone(t));
    }
    let built = Arc::new(CharacterTable::build(degree));
    table_cache()
        .lock()
        .unwrap()
        .entry(degree)
        .or_insert(built.clone());
    Ok(built)
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema: String,
    tables: std::collections::BTreeMap<String, CacheTable>,
}

#[derive(Serialize, Deserialize)]
struct CacheTable {
    degree: usize,
    shapes: Vec<Vec<usize>>,
    values: Vec<Vec<String>>,
}

const CACHE_SCHEMA: &str = "coe-character-tables/1";

/// Writes every table currently cached in this process to a JSON file.
///
/// Integers are serialized as decimal strings so the format is
/// precision-independent.
pub fn save_cache_file(path: &Path) -> Result<()> {
    let cache = table_cache().lock().unwrap();
    let mut tables = std::collections::BTreeMap::new();
    for (&degree, table) in cache.iter() {
        tables.insert(
            format!("{degree}"),
            CacheTable {
                degree,
                shapes: table.shapes.iter().map(|p| p.parts().to_vec()).collect(),
                values: table
                    .values
                    .iter()
                    .map(|row| row.iter().map(|v| v.to_string()).collect())
                    .collect(),
            },
        );
    }
    let file = CacheFile {
        schema: CACHE_SCHEMA.to_string(),
        tables,
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Internal(format!("cache serialization: {e}")))?;
    std::fs::write(path, text)
        .map_err(|e| Error::Domain(format!("cannot write cache {}: {e}", path.display())))?;
    Ok(())
}

/// Loads tables from a JSON cache file into the process cache.
///
/// Every table is re-validated against the orthogonality relations before
/// installation; inconsistent or misdeclared tables are rejected.  Returns
/// the number of tables installed.
pub fn load_cache_file(path: &Path) -> Result<usize> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read cache {}: {e}", path.display())))?;
    let file: CacheFile = serde_json::from_str(&text)
        .map_err(|e| Error::Domain(format!("malformed cache {}: {e}", path.display())))?;
    if file.schema != CACHE_SCHEMA {
        return Err(Error::Domain(format!(
            "cache schema {:?} is not {CACHE_SCHEMA:?}",
            file.schema
        )));
    }
    let mut installed = 0;
    for entry in file.tables.values() {
        let shapes: Vec<Partition> = entry
            .shapes
            .iter()
            .map(|parts| Partition::new(parts.clone()))
            .collect();
        if shapes != partitions_of(entry.degree) {
            return Err(Error::Domain(format!(
                "cache table for degree {} lists wrong shapes",
                entry.degree
            )));
        }
        let values: Vec<Vec<i64>> = entry
            .values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        s.parse::<i64>().map_err(|_| {
                            Error::Domain(format!("non-integer cache value {s:?}"))
                        })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let index = shapes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let table = CharacterTable {
            degree: entry.degree,
            shapes,
            index,
            values,
        };
        if !table.is_consistent() {
            return Err(Error::Domain(format!(
                "cache table for degree {} fails orthogonality",
                entry.degree
            )));
        }
        table_cache()
            .lock()
            .unwrap()
            .insert(entry.degree, Arc::new(table));
        installed += 1;
    }
    Ok(installed)
}

/// Zonal spherical function value at an arbitrary group element: the average
/// of `chi^(2 lam)` over the right translates of `sigma` by the
/// hyperoctahedral group.
pub fn zonal_at(lam: &Partition, sigma: &Permutation, limits: &Limits) -> Result<BigRational> {
    let n = lam.weight();
    if sigma.degree() != 2 * n {
        return Err(Error::Domain(format!(
            "zonal argument degree {} does not match 2n = {}",
            sigma.degree(),
            2 * n
        )));
    }
    let table = character_table(2 * n, limits)?;
    let li = table
        .position(&lam.doubled())
        .expect("doubled shape is in the table");
    let mut sum = 0i64;
    for zeta in hyperoctahedral_iter(n, limits)? {
        let ci = table
            .position(&sigma.compose(&zeta).cycle_type())
            .expect("cycle type is in the table");
        sum += table.value_by_index(li, ci);
    }
    Ok(BigRational::new(BigInt::from(sum), hyperoctahedral_order(n)))
}

/// Zonal spherical function values for weight `n`, tabulated per coset type.
///
/// Rows are shapes `lam` of `n`, columns coset types `mu` of `n`, both in
/// [`partitions_of`] order.
#[derive(Debug, Clone)]
pub struct ZonalTable {
    n: usize,
    shapes: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<BigRational>>,
}

impl ZonalTable {
    fn build(n: usize, limits: &Limits) -> Result<ZonalTable> {
        let shapes = partitions_of(n);
        let index: HashMap<Partition, usize> = shapes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let table = character_table(2 * n, limits)?;
        let h_order = hyperoctahedral_order(n);
        let mut values = vec![vec![BigRational::zero(); shapes.len()]; shapes.len()];
        for (mi, mu) in shapes.iter().enumerate() {
            let rep = coset_representative(mu);
            // Histogram of cycle types over the coset rep * H_n.
            let mut class_counts = vec![0i64; table.shapes().len()];
            for zeta in hyperoctahedral_iter(n, limits)? {
                let ci = table
                    .position(&rep.compose(&zeta).cycle_type())
                    .expect("cycle type is in the table");
                class_counts[ci] += 1;
            }
            for (si, lam) in shapes.iter().enumerate() {
                let li = table
                    .position(&lam.doubled())
                    .expect("doubled shape is in the table");
                let sum: i64 = class_counts
                    .iter()
                    .enumerate()
                    .map(|(ci, &count)| count * table.value_by_index(li, ci))
                    .sum();
                values[si][mi] = BigRational::new(BigInt::from(sum), h_order.clone());
            }
        }
        Ok(ZonalTable {
            n,
            shapes,
            index,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shapes(&self) -> &[Partition] {
        &self.shapes
    }

    /// The value `omega^lam` at coset type `mu`.
    pub fn value(&self, lam: &Partition, mu: &Partition) -> &BigRational {
        &self.values[self.index[lam]][self.index[mu]]
    }
}

fn zonal_cache() -> &'static Mutex<HashMap<usize, Arc<ZonalTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ZonalTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The zonal table for weight `n`, built on first use and cached.
pub fn zonal_table(n: usize, limits: &Limits) -> Result<Arc<ZonalTable>> {
    if let Some(t) = zonal_cache().lock().unwrap().get(&n) {
        return Ok(Arc::clone(t));
    }
    let built = Arc::new(ZonalTable::build(n, limits)?);
    zonal_cache()
        .lock()
        .unwrap()
        .entry(n)
        .or_insert(built.clone());
    Ok(built)
}

/// A function on a symmetric group that is constant on conjugacy classes or
/// on hyperoctahedral double cosets.
#[derive(Debug, Clone)]
pub enum ClassFunction {
    /// Values keyed by cycle type; defined on any `S_degree`.
    ByCycleType {
        degree: usize,
        values: HashMap<Partition, BigRational>,
    },
    /// Values keyed by coset type; defined on `S_{2n}` only.
    ByCosetType {
        degree: usize,
        values: HashMap<Partition, BigRational>,
    },
}

impl ClassFunction {
    /// The irreducible character of the given shape as a class function.
    pub fn irreducible(lam: &Partition, limits: &Limits) -> Result<ClassFunction> {
        let degree = lam.weight();
        let table = character_table(degree, limits)?;
        let values = table
            .shapes()
            .iter()
            .map(|rho| {
                (
                    rho.clone(),
                    BigRational::from_integer(BigInt::from(table.value(lam, rho))),
                )
            })
            .collect();
        Ok(ClassFunction::ByCycleType { degree, values })
    }

    /// The zonal spherical function of the given shape as a coset-type
    /// function on `S_{2n}`.
    pub fn zonal(lam: &Partition, limits: &Limits) -> Result<ClassFunction> {
        let n = lam.weight();
        let table = zonal_table(n, limits)?;
        let values = table
            .shapes()
            .iter()
            .map(|mu| (mu.clone(), table.value(lam, mu).clone()))
            .collect();
        Ok(ClassFunction::ByCosetType {
            degree: 2 * n,
            values,
        })
    }

    pub fn degree(&self) -> usize {
        match self {
            ClassFunction::ByCycleType { degree, .. } => *degree,
            ClassFunction::ByCosetType { degree, .. } => *degree,
        }
    }

    /// Evaluates at a permutation of the matching degree.
    pub fn eval(&self, sigma: &Permutation) -> Result<BigRational> {
        match self {
            ClassFunction::ByCycleType { values, .. } => values
                .get(&sigma.cycle_type())
                .cloned()
                .ok_or_else(|| Error::Domain("cycle type missing from function".into())),
            ClassFunction::ByCosetType { values, .. } => values
                .get(&sigma.coset_type()?)
                .cloned()
                .ok_or_else(|| Error::Domain("coset type missing from function".into())),
        }
    }

    pub fn scale(&self, s: &BigRational) -> ClassFunction {
        let scaled = |values: &HashMap<Partition, BigRational>| {
            values.iter().map(|(k, v)| (k.clone(), v * s)).collect()
        };
        match self {
            ClassFunction::ByCycleType { degree, values } => ClassFunction::ByCycleType {
                degree: *degree,
                values: scaled(values),
            },
            ClassFunction::ByCosetType { degree, values } => ClassFunction::ByCosetType {
                degree: *degree,
                values: scaled(values),
            },
        }
    }
}

/// A function on a symmetric group tabulated at every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointFunction {
    pub degree: usize,
    values: HashMap<Vec<usize>, BigRational>,
}

impl PointFunction {
    pub fn eval(&self, sigma: &Permutation) -> &BigRational {
        &self.values[&sigma.one_line()]
    }

    /// Exact pointwise equality with a scalar multiple of a class function.
    pub fn equals_scaled(&self, f: &ClassFunction, scale: &BigRational, limits: &Limits) -> Result<bool> {
        for sigma in symmetric_group_iter(self.degree, limits)? {
            if *self.eval(&sigma) != f.eval(&sigma)? * scale {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }
}

/// Convolution `(f * g)(sigma) = sum over tau of f(sigma tau^-1) g(tau)`,
/// tabulated by full double enumeration of the group.
///
/// # Errors
/// Resource error when `(degree!)^2` products exceed the enumeration budget.
pub fn convolve(f: &ClassFunction, g: &ClassFunction, limits: &Limits) -> Result<PointFunction> {
    let degree = f.degree();
    if degree != g.degree() {
        return Err(Error::Domain("convolution of functions on different groups".into()));
    }
    let order = factorial(degree);
    let pairs = (&order * &order).min(BigInt::from(u64::MAX));
    limits.charge(
        &format!("pairwise convolution on S_{degree}"),
        num::ToPrimitive::to_u64(&pairs).unwrap_or(u64::MAX),
    )?;
    let elements: Vec<Permutation> = symmetric_group_iter(degree, limits)?.collect();
    let g_values: Vec<BigRational> = elements
        .iter()
        .map(|tau| g.eval(tau))
        .collect::<Result<_>>()?;
    let mut values = HashMap::with_capacity(elements.len());
    for sigma in &elements {
        let mut acc = BigRational::zero();
        for (tau, gv) in elements.iter().zip(&g_values) {
            if gv.is_zero() {
                continue;
            }
            acc += f.eval(&sigma.compose(&tau.inverse()))? * gv;
        }
        values.insert(sigma.one_line(), acc);
    }
    Ok(PointFunction { degree, values })
}

/// The polynomial `(2^n n! / (2n)!) * sum over shapes lam of
/// f^(2 lam) * C'_lam(z) * omega^lam(mu)`.
///
/// As a function of the coset type `mu` this equals `z^len(mu)`, the power of
/// `z` counting pairing-graph components; the equality is what makes the
/// orthogonal Weingarten family the inverse of the component-counting kernel.
pub fn zonal_power_identity(n: usize, mu: &Partition, limits: &Limits) -> Result<Poly> {
    let zonal = zonal_table(n, limits)?;
    let mut sum = Poly::zero();
    for lam in partitions_of(n) {
        let dim = BigRational::from_integer(lam.doubled().dimension());
        let omega = zonal.value(&lam, mu);
        let coeff = dim * omega;
        sum = &sum + &lam.zonal_content_poly().scale(&coeff);
    }
    let prefactor = BigRational::new(hyperoctahedral_order(n), factorial(2 * n));
    Ok(sum.scale(&prefactor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qz::{qint, qrat};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn characters_of_s3() {
        // classes in table order: (3), (2,1), (1,1,1)
        assert_eq!(mn_character(&p(&[3]), &p(&[3])), 1);
        assert_eq!(mn_character(&p(&[3]), &p(&[2, 1])), 1);
        assert_eq!(mn_character(&p(&[3]), &p(&[1, 1, 1])), 1);
        assert_eq!(mn_character(&p(&[2, 1]), &p(&[3])), -1);
        assert_eq!(mn_character(&p(&[2, 1]), &p(&[2, 1])), 0);
        assert_eq!(mn_character(&p(&[2, 1]), &p(&[1, 1, 1])), 2);
        assert_eq!(mn_character(&p(&[1, 1, 1]), &p(&[3])), 1);
        assert_eq!(mn_character(&p(&[1, 1, 1]), &p(&[2, 1])), -1);
        assert_eq!(mn_character(&p(&[1, 1, 1]), &p(&[1, 1, 1])), 1);
    }

    #[test]
    fn character_table_of_s4() {
        let limits = Limits::default();
        let t = character_table(4, &limits).unwrap();
        // rows (4), (3,1), (2,2), (2,1,1), (1^4); columns in the same order
        let expected: [[i64; 5]; 5] = [
            [1, 1, 1, 1, 1],
            [-1, 0, -1, 1, 3],
            [0, -1, 2, 0, 2],
            [1, 0, -1, -1, 3],
            [-1, 1, 1, -1, 1],
        ];
        for (a, row) in expected.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(t.value_by_index(a, c), v, "entry ({a}, {c})");
            }
        }
    }

    #[test]
    fn trivial_sign_and_dimension_columns() {
        let limits = Limits::default();
        for m in 1..=8 {
            let t = character_table(m, &limits).unwrap();
            let id = p(&vec![1; m]);
            for rho in t.shapes() {
                assert_eq!(t.value(&Partition::row(m), rho), 1);
                let sign = if (m - rho.len()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(t.value(&Partition::column(m), rho), sign);
            }
            for lam in t.shapes() {
                assert_eq!(BigInt::from(t.value(lam, &id)), lam.dimension());
            }
        }
    }

    #[test]
    fn conjugating_the_shape_twists_by_the_sign() {
        let limits = Limits::default();
        let t = character_table(6, &limits).unwrap();
        for lam in t.shapes() {
            for rho in t.shapes() {
                let sign = if (6 - rho.len()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(t.value(&lam.conjugate(), rho), sign * t.value(lam, rho));
            }
        }
    }

    #[test]
    fn tables_satisfy_orthogonality() {
        let limits = Limits::default();
        for m in 1..=9 {
            assert!(character_table(m, &limits).unwrap().is_consistent());
        }
    }

    #[test]
    fn cache_file_round_trip() {
        let limits = Limits::default();
        character_table(5, &limits).unwrap();
        let dir = std::env::temp_dir().join("coe-chartab-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tables.json");
        save_cache_file(&path).unwrap();
        let installed = load_cache_file(&path).unwrap();
        assert!(installed >= 1);
        // tampering is caught by the orthogonality check
        let text = std::fs::read_to_string(&path).unwrap();
        let tampered = text.replacen("\"1\"", "\"2\"", 1);
        let bad = dir.join("tampered.json");
        std::fs::write(&bad, tampered).unwrap();
        assert!(load_cache_file(&bad).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn zonal_normalization_and_trivial_shape() {
        let limits = Limits::default();
        for n in 1..=4 {
            let t = zonal_table(n, &limits).unwrap();
            let id_type = Partition::column(n);
            for lam in t.shapes() {
                // omega^lam(identity) = 1
                assert_eq!(*t.value(lam, &id_type), qint(1));
                // the one-row shape gives the constant function 1
                assert_eq!(*t.value(&Partition::row(n), lam), qint(1));
            }
        }
    }

    #[test]
    fn zonal_value_for_the_merged_pair() {
        let limits = Limits::default();
        let t = zonal_table(2, &limits).unwrap();
        assert_eq!(*t.value(&p(&[1, 1]), &p(&[2])), qrat(-1, 2));
    }

    #[test]
    fn zonal_table_matches_pointwise_average() {
        let limits = Limits::default();
        for n in 1..=2 {
            let t = zonal_table(n, &limits).unwrap();
            for sigma in symmetric_group_iter(2 * n, &limits).unwrap() {
                let mu = sigma.coset_type().unwrap();
                for lam in t.shapes() {
                    assert_eq!(zonal_at(lam, &sigma, &limits).unwrap(), *t.value(lam, &mu));
                }
            }
        }
    }

    #[test]
    fn zonal_is_biinvariant() {
        let limits = Limits::default();
        let n = 3;
        let t = zonal_table(n, &limits).unwrap();
        let sigma = Permutation::from_one_line(&[3, 5, 1, 6, 2, 4]).unwrap();
        let mu = sigma.coset_type().unwrap();
        let h: Vec<Permutation> = hyperoctahedral_iter(n, &limits).unwrap().collect();
        for (a, b) in [(0, 7), (13, 22), (31, 5), (40, 47)] {
            let moved = h[a].compose(&sigma).compose(&h[b]);
            assert_eq!(moved.coset_type().unwrap(), mu);
            for lam in t.shapes() {
                assert_eq!(
                    zonal_at(lam, &moved, &limits).unwrap(),
                    *t.value(lam, &mu)
                );
            }
        }
    }

    #[test]
    fn zonal_against_characters_under_convolution() {
        let limits = Limits::default();
        let n = 2;
        let m = 2 * n;
        for lam in partitions_of(n) {
            let omega = ClassFunction::zonal(&lam, &limits).unwrap();
            for mu in partitions_of(m) {
                let chi = ClassFunction::irreducible(&mu, &limits).unwrap();
                let conv = convolve(&omega, &chi, &limits).unwrap();
                if mu == lam.doubled() {
                    let scale = BigRational::new(factorial(m), lam.doubled().dimension());
                    assert!(conv.equals_scaled(&omega, &scale, &limits).unwrap());
                } else {
                    assert!(conv.is_zero(), "omega^{lam} * chi^{mu} should vanish");
                }
            }
        }
    }

    #[test]
    fn characters_under_convolution() {
        let limits = Limits::default();
        let m = 4;
        for mu in partitions_of(m) {
            let chi_mu = ClassFunction::irreducible(&mu, &limits).unwrap();
            for rho in partitions_of(m) {
                let chi_rho = ClassFunction::irreducible(&rho, &limits).unwrap();
                let conv = convolve(&chi_mu, &chi_rho, &limits).unwrap();
                if mu == rho {
                    let scale = BigRational::new(factorial(m), mu.dimension());
                    assert!(conv.equals_scaled(&chi_mu, &scale, &limits).unwrap());
                } else {
                    assert!(conv.is_zero());
                }
            }
        }
    }

    #[test]
    fn zonal_under_convolution() {
        let limits = Limits::default();
        for n in 1..=2 {
            for lam in partitions_of(n) {
                let omega_lam = ClassFunction::zonal(&lam, &limits).unwrap();
                for rho in partitions_of(n) {
                    let omega_rho = ClassFunction::zonal(&rho, &limits).unwrap();
                    let conv = convolve(&omega_lam, &omega_rho, &limits).unwrap();
                    if lam == rho {
                        let scale =
                            BigRational::new(factorial(2 * n), lam.doubled().dimension());
                        assert!(conv.equals_scaled(&omega_lam, &scale, &limits).unwrap());
                    } else {
                        assert!(conv.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn power_of_z_expands_in_zonal_functions() {
        let limits = Limits::default();
        for n in 1..=3 {
            for mu in partitions_of(n) {
                let poly = zonal_power_identity(n, &mu, &limits).unwrap();
                assert_eq!(poly, Poly::monomial(qint(1), mu.len()), "failed for {mu}");
            }
        }
    }

    #[test]
    fn budget_guards_reject_oversized_requests() {
        let limits = Limits::default();
        assert!(character_table(13, &limits).is_err());
        let f = ClassFunction::irreducible(&p(&[4, 4]), &limits).unwrap();
        // (8!)^2 pairs exceed the default budget
        assert!(convolve(&f, &f, &limits).is_err());
    }
}
