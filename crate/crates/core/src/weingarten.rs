//! Orthogonal and unitary Weingarten functions as exact rational functions.
//!
//! The orthogonal family is indexed by hyperoctahedral coset types of weight
//! n and the unitary family by cycle types of degree m.  Both are character
//! sums weighted by reciprocals of content products in an indeterminate z;
//! tables are built lazily per weight and cached process-wide.
//!
//! Evaluations that matter downstream: the orthogonal function at `z = N + 1`
//! drives moments of symmetric unitary matrices, the same function at
//! `z = N` gives Haar-orthogonal matrix averages, and the unitary function at
//! `z = N` gives Haar-unitary averages.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigRational, Zero};

use crate::characters::{character_table, zonal_table};
use crate::combinat::{factorial, hyperoctahedral_order, partitions_of, Partition};
use crate::error::{Error, Result};
use crate::qz::{InfinitySeries, Poly, RatFunc};
use crate::Limits;

/// Orthogonal Weingarten functions of weight `n`, one per coset type.
#[derive(Debug, Clone)]
pub struct OrthogonalTable {
    n: usize,
    types: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<RatFunc>,
}

impl OrthogonalTable {
    fn build(n: usize, limits: &Limits) -> Result<OrthogonalTable> {
        let types = partitions_of(n);
        let index: HashMap<Partition, usize> = types
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let zonal = zonal_table(n, limits)?;
        let prefactor = BigRational::new(hyperoctahedral_order(n), factorial(2 * n));
        let shapes = partitions_of(n);
        let shape_data: Vec<(BigRational, Poly)> = shapes
            .iter()
            .map(|lam| {
                (
                    BigRational::from_integer(lam.doubled().dimension()),
                    lam.zonal_content_poly(),
                )
            })
            .collect();
        let values = types
            .iter()
            .map(|mu| {
                let mut sum = RatFunc::zero();
                for (lam, (dim, content)) in shapes.iter().zip(&shape_data) {
                    let omega = zonal.value(lam, mu);
                    if omega.is_zero() {
                        continue;
                    }
                    let term = RatFunc::new(Poly::constant(dim * omega), content.clone())?;
                    sum = &sum + &term;
                }
                Ok(sum.scale(&prefactor))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OrthogonalTable {
            n,
            types,
            index,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coset types in decreasing lexicographic order.
    pub fn types(&self) -> &[Partition] {
        &self.types
    }

    pub fn value(&self, mu: &Partition) -> &RatFunc {
        &self.values[self.index[mu]]
    }
}

/// Unitary Weingarten functions of degree `m`, one per cycle type.
#[derive(Debug, Clone)]
pub struct UnitaryTable {
    m: usize,
    types: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<RatFunc>,
}

impl UnitaryTable {
    fn build(m: usize, limits: &Limits) -> Result<UnitaryTable> {
        let types = partitions_of(m);
        let index: HashMap<Partition, usize> = types
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let table = character_table(m, limits)?;
        let prefactor = BigRational::new(1.into(), factorial(m));
        let shape_data: Vec<(BigRational, Poly)> = table
            .shapes()
            .iter()
            .map(|lam| {
                (
                    BigRational::from_integer(lam.dimension()),
                    lam.content_poly(),
                )
            })
            .collect();
        let values = types
            .iter()
            .map(|rho| {
                let mut sum = RatFunc::zero();
                for (li, (dim, content)) in shape_data.iter().enumerate() {
                    let chi = table.value_by_index(li, self_index(&table, rho));
                    if chi == 0 {
                        continue;
                    }
                    let coeff = dim * BigRational::from_integer(chi.into());
                    let term = RatFunc::new(Poly::constant(coeff), content.clone())?;
                    sum = &sum + &term;
                }
                Ok(sum.scale(&prefactor))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UnitaryTable {
            m,
            types,
            index,
            values,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn types(&self) -> &[Partition] {
        &self.types
    }

    pub fn value(&self, rho: &Partition) -> &RatFunc {
        &self.values[self.index[rho]]
    }
}

fn self_index(table: &crate::characters::CharacterTable, p: &Partition) -> usize {
    table.position(p).expect("partition of the table degree")
}

fn orthogonal_cache() -> &'static Mutex<HashMap<usize, Arc<OrthogonalTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<OrthogonalTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn unitary_cache() -> &'static Mutex<HashMap<usize, Arc<UnitaryTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<UnitaryTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The orthogonal Weingarten table of weight `n`, cached after first build.
///
/// # Errors
/// Resource error when `n > limits.n_max`.
pub fn orthogonal_table(n: usize, limits: &Limits) -> Result<Arc<OrthogonalTable>> {
    if n > limits.n_max {
        return Err(Error::Resource(format!(
            "orthogonal Weingarten weight {n} exceeds n_max = {}",
            limits.n_max
        )));
    }
    if let Some(t) = orthogonal_cache().lock().unwrap().get(&n) {
        return Ok(Arc::clone(t));
    }
    let built = Arc::new(OrthogonalTable::build(n, limits)?);
    orthogonal_cache()
        .lock()
        .unwrap()
        .entry(n)
        .or_insert(built.clone());
    Ok(built)
}

/// The unitary Weingarten table of degree `m`, cached after first build.
///
/// # Errors
/// Resource error when `m > 2 * limits.n_max`.
pub fn unitary_table(m: usize, limits: &Limits) -> Result<Arc<UnitaryTable>> {
    if m > 2 * limits.n_max {
        return Err(Error::Resource(format!(
            "unitary Weingarten degree {m} exceeds 2 * n_max = {}",
            2 * limits.n_max
        )));
    }
    if let Some(t) = unitary_cache().lock().unwrap().get(&m) {
        return Ok(Arc::clone(t));
    }
    let built = Arc::new(UnitaryTable::build(m, limits)?);
    unitary_cache()
        .lock()
        .unwrap()
        .entry(m)
        .or_insert(built.clone());
    Ok(built)
}

/// Orthogonal Weingarten function of weight `n` at coset type `mu`.
pub fn wg_orthogonal(n: usize, mu: &Partition, limits: &Limits) -> Result<RatFunc> {
    if mu.weight() != n {
        return Err(Error::Domain(format!(
            "coset type {mu} does not partition {n}"
        )));
    }
    Ok(orthogonal_table(n, limits)?.value(mu).clone())
}

/// Orthogonal Weingarten value for Haar-orthogonal averages over `O(N)`:
/// the weight-`n` function evaluated at `z = N`.
pub fn wg_orthogonal_at(n: usize, mu: &Partition, big_n: i64, limits: &Limits) -> Result<BigRational> {
    wg_orthogonal(n, mu, limits)?.eval_at_int(big_n)
}

/// Unitary Weingarten function of degree `m` at cycle type `rho`.
pub fn wg_unitary(m: usize, rho: &Partition, limits: &Limits) -> Result<RatFunc> {
    if rho.weight() != m {
        return Err(Error::Domain(format!(
            "cycle type {rho} does not partition {m}"
        )));
    }
    Ok(unitary_table(m, limits)?.value(rho).clone())
}

/// Large-argument behavior of an orthogonal Weingarten function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalAsymptotics {
    /// Exponent of the leading term.
    pub leading_exponent: i64,
    /// Coefficients of the two leading powers, starting at the leading one.
    pub coefficients: [BigRational; 2],
    pub regime: AsymptoticRegime,
}

/// The three decay regimes of orthogonal Weingarten functions of weight n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticRegime {
    /// Coset type `(1^n)`: order `z^-n`, no `z^-(n+1)` correction.
    TrivialType,
    /// Coset type `(2, 1^(n-2))`: leading term `-z^-(n+1)`.
    SingleMerge,
    /// Every other coset type: order `z^-(n+2)` or smaller.
    Deeper,
}

/// Classifies the decay of the weight-`n` orthogonal function at `mu` and
/// returns its two leading Laurent coefficients.
pub fn wg_orthogonal_asymptotics(
    n: usize,
    mu: &Partition,
    limits: &Limits,
) -> Result<OrthogonalAsymptotics> {
    let f = wg_orthogonal(n, mu, limits)?;
    let series = f.series_at_infinity(2);
    let leading = series
        .leading_exponent
        .ok_or_else(|| Error::Internal("Weingarten function is identically zero".into()))?;
    let regime = if *mu == Partition::column(n) {
        AsymptoticRegime::TrivialType
    } else if mu.parts().first() == Some(&2) && mu.get(1) <= 1 {
        AsymptoticRegime::SingleMerge
    } else {
        AsymptoticRegime::Deeper
    };
    Ok(OrthogonalAsymptotics {
        leading_exponent: leading,
        coefficients: [series.coeffs[0].clone(), series.coeffs[1].clone()],
        regime,
    })
}

/// Laurent expansion of the weight-`n` orthogonal function at `mu`.
pub fn wg_orthogonal_series(
    n: usize,
    mu: &Partition,
    order: usize,
    limits: &Limits,
) -> Result<InfinitySeries> {
    Ok(wg_orthogonal(n, mu, limits)?.series_at_infinity(order))
}
