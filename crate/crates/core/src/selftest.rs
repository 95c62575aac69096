//! Built-in consistency checks, runnable from the command line.
//!
//! Each check exercises a slice of the library against values that are known
//! in closed form or pinned from independent derivations, at sizes small
//! enough to finish in seconds.  The optional Monte Carlo block re-derives a
//! moment and a Weingarten value by sampling.

use num::{BigInt, BigRational, One, Zero};

use crate::characters::{character_table, zonal_power_identity};
use crate::combinat::{
    factorial, hyperoctahedral_order, partitions_of, symmetric_group_iter, Partition, Permutation,
};
use crate::moments::{
    a_partial_sum_closed, a_r_term, asymptotic_counts, coe_moment, coe_moment_symbolic,
    count_tilde_solutions, diagonal_moment_symbolic, moment_expansion, offdiagonal_moment_symbolic,
    two_row_content_sum, unitary_oracle, IndexSeq,
};
use crate::montecarlo::{estimate_moment, verify_moment, verify_wg_orthogonal, RngSpec};
use crate::qz::{qint, qrat, Poly, RatFunc};
use crate::weingarten::{orthogonal_table, wg_orthogonal, wg_unitary};
use crate::Limits;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of a full selftest run.
#[derive(Debug, Clone)]
pub struct SelfTestReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

type Check = std::result::Result<String, String>;

fn expect<T: PartialEq + std::fmt::Display>(label: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{label}: got {got}, want {want}"))
    }
}

fn seq(entries: &[usize]) -> IndexSeq {
    IndexSeq::new(entries.to_vec()).expect("valid test sequence")
}

fn check_weingarten_forms(limits: &Limits) -> Check {
    let cases: [(usize, &[usize], &str); 6] = [
        (1, &[1], "1/z"),
        (2, &[2], "-1/(z*(z+2)*(z-1))"),
        (2, &[1, 1], "(z+1)/(z*(z+2)*(z-1))"),
        (3, &[3], "2/(z*(z+2)*(z+4)*(z-1)*(z-2))"),
        (3, &[2, 1], "-1/(z*(z+4)*(z-1)*(z-2))"),
        (3, &[1, 1, 1], "(z^2+3*z-2)/(z*(z+2)*(z+4)*(z-1)*(z-2))"),
    ];
    for (n, parts, want) in cases {
        let wg = wg_orthogonal(n, &Partition::new(parts.to_vec()), limits)
            .map_err(|e| e.to_string())?;
        expect(&format!("weight {n} type {parts:?}"), wg.display_factored(), want.to_string())?;
    }
    Ok("six closed forms at weights 1 to 3".into())
}

fn check_weingarten_sum(limits: &Limits) -> Check {
    for n in 1..=3 {
        let table = orthogonal_table(n, limits).map_err(|e| e.to_string())?;
        let mut sum = RatFunc::zero();
        for mu in partitions_of(n) {
            let size = BigRational::from_integer(mu.double_coset_size());
            sum = &sum + &table.value(&mu).scale(&size);
        }
        let offsets: Vec<BigRational> = (0..n).map(|j| qint(2 * j as i64)).collect();
        let scale = BigRational::from_integer(hyperoctahedral_order(n));
        let want = RatFunc::inverse_linear_offsets(&offsets).scale(&scale);
        if sum != want {
            return Err(format!("weighted sum at weight {n}: got {sum}, want {want}"));
        }
    }
    Ok("coset-weighted sums collapse for weights 1 to 3".into())
}

fn check_zonal_power(limits: &Limits) -> Check {
    for n in 1..=3 {
        for mu in partitions_of(n) {
            let poly = zonal_power_identity(n, &mu, limits).map_err(|e| e.to_string())?;
            let want = Poly::monomial(qint(1), mu.len());
            if poly != want {
                return Err(format!("type {mu}: got {poly}, want {want}"));
            }
        }
    }
    Ok("zonal expansion of z^components for weights 1 to 3".into())
}

fn check_character_tables(limits: &Limits) -> Check {
    for m in 1..=6 {
        let table = character_table(m, limits).map_err(|e| e.to_string())?;
        if !table.is_consistent() {
            return Err(format!("orthogonality fails at degree {m}"));
        }
    }
    Ok("row and column orthogonality up to degree 6".into())
}

fn check_unitary_inversion(limits: &Limits) -> Check {
    for sigma in symmetric_group_iter(3, limits).map_err(|e| e.to_string())? {
        let mut sum = RatFunc::zero();
        for tau in symmetric_group_iter(3, limits).map_err(|e| e.to_string())? {
            let rho = tau.inverse().compose(&sigma).cycle_type();
            let wg = wg_unitary(3, &tau.cycle_type(), limits).map_err(|e| e.to_string())?;
            let power = RatFunc::from_poly(Poly::monomial(qint(1), rho.len()));
            sum = &sum + &(&power * &wg);
        }
        let want = if sigma == Permutation::identity(3) {
            RatFunc::from_poly(Poly::one())
        } else {
            RatFunc::zero()
        };
        if sum != want {
            return Err(format!("inversion fails at sigma = {sigma}"));
        }
    }
    Ok("Weingarten inverts the cycle-count power sum on S_3".into())
}

fn check_degree_one(limits: &Limits) -> Check {
    let m = coe_moment_symbolic(&seq(&[1, 1]), &seq(&[1, 1]), limits).map_err(|e| e.to_string())?;
    expect("equal pair", m.symbolic.display_factored(), "2/z".into())?;
    let m = coe_moment_symbolic(&seq(&[1, 2]), &seq(&[2, 1]), limits).map_err(|e| e.to_string())?;
    expect("swapped pair", m.symbolic.display_factored(), "1/z".into())?;
    let m = coe_moment_symbolic(&seq(&[1, 1]), &seq(&[2, 2]), limits).map_err(|e| e.to_string())?;
    if !m.symbolic.is_zero() {
        return Err(format!("mismatched pair: got {}, want 0", m.symbolic));
    }
    Ok("single-factor moments are 2/(N+1), 1/(N+1), 0".into())
}

fn check_paired_diagonal(limits: &Limits) -> Check {
    let m = coe_moment(&seq(&[1, 1, 2, 2]), &seq(&[1, 1, 2, 2]), 3, limits)
        .map_err(|e| e.to_string())?;
    expect("matchings", m.match_count, BigInt::from(4))?;
    expect("value at N = 3", m.value.unwrap(), qrat(20, 72))
        .map_err(|d| format!("4(N+2)/((N+1)N(N+3)): {d}"))?;
    Ok("|v_11 v_22|^2 moment at N = 3".into())
}

fn check_mixed_sign(limits: &Limits) -> Check {
    let m = coe_moment(&seq(&[1, 2, 1, 2]), &seq(&[1, 1, 2, 2]), 3, limits)
        .map_err(|e| e.to_string())?;
    expect("value at N = 3", m.value.unwrap(), qrat(-1, 18))?;
    let types: Vec<String> = m
        .type_counts
        .iter()
        .map(|(mu, c)| format!("{mu}:{c}"))
        .collect();
    expect("type counts", types.join(" "), "(2):4".into())?;
    Ok("v_12^2 against v_11 v_22 is -1/18 at N = 3".into())
}

fn check_triple_diagonal(limits: &Limits) -> Check {
    let m = coe_moment_symbolic(&seq(&[1, 1, 2, 2, 3, 3]), &seq(&[1, 1, 2, 2, 3, 3]), limits)
        .map_err(|e| e.to_string())?;
    let got = m.symbolic.eval_at_int(5).map_err(|e| e.to_string())?;
    expect("value at N = 4", got, qrat(8 * 38, 3 * 4 * 5 * 7 * 9))?;
    Ok("|v_11 v_22 v_33|^2 moment at N = 4".into())
}

fn check_single_matching(limits: &Limits) -> Check {
    let m = coe_moment_symbolic(&seq(&[1, 2, 3, 4, 5, 6]), &seq(&[1, 3, 2, 6, 4, 5]), limits)
        .map_err(|e| e.to_string())?;
    expect("matchings", m.match_count, BigInt::one())?;
    expect(
        "symbolic form",
        m.symbolic.display_factored(),
        "2/(z*(z+2)*(z+4)*(z-1)*(z-2))".into(),
    )?;
    Ok("six distinct indices leave one matching of full type".into())
}

fn check_repeated_square(limits: &Limits) -> Check {
    let m = coe_moment(&seq(&[1, 1, 1, 1, 2, 2]), &seq(&[1, 1, 1, 1, 2, 2]), 2, limits)
        .map_err(|e| e.to_string())?;
    expect("matchings", m.match_count, BigInt::from(48))?;
    expect("value at N = 2", m.value.unwrap(), qrat(16 * 6, 2 * 3 * 5 * 7))?;
    Ok("|v_11^2 v_22|^2 moment at N = 2".into())
}

fn check_closed_forms(limits: &Limits) -> Check {
    for n in 1..=3 {
        let ones = vec![1usize; 2 * n];
        let engine = coe_moment_symbolic(&seq(&ones), &seq(&ones), limits)
            .map_err(|e| e.to_string())?
            .symbolic;
        if engine != diagonal_moment_symbolic(n).shift_down() {
            return Err(format!("diagonal closed form differs at n = {n}"));
        }
        let mut alt = Vec::new();
        for _ in 0..n {
            alt.extend([1usize, 2]);
        }
        let engine = coe_moment_symbolic(&seq(&alt), &seq(&alt), limits)
            .map_err(|e| e.to_string())?
            .symbolic;
        if engine != offdiagonal_moment_symbolic(n).shift_down() {
            return Err(format!("off-diagonal closed form differs at n = {n}"));
        }
    }
    Ok("engine matches both closed forms for n = 1 to 3".into())
}

fn check_two_row_routes(_limits: &Limits) -> Check {
    for n in 1..=3 {
        let closed = offdiagonal_moment_symbolic(n);
        let prefactor = BigRational::new(&factorial(n) * &factorial(n), factorial(2 * n));
        if closed != two_row_content_sum(n, 1).scale(&prefactor) {
            return Err(format!("character route differs at n = {n}"));
        }
        let mut terms = RatFunc::zero();
        for r in 0..=n / 2 {
            terms = &terms + &a_r_term(n, r).map_err(|e| e.to_string())?;
        }
        let sq = BigRational::from_integer(&factorial(n) * &factorial(n));
        if closed != terms.scale(&sq) {
            return Err(format!("telescoping route differs at n = {n}"));
        }
    }
    for n in 2..=4 {
        let mut acc = RatFunc::zero();
        for k in 0..=n / 2 {
            acc = &acc + &a_r_term(n, k).map_err(|e| e.to_string())?;
            if acc != a_partial_sum_closed(n, k).map_err(|e| e.to_string())? {
                return Err(format!("partial sum differs at n = {n}, k = {k}"));
            }
        }
    }
    for n in 1..=3 {
        let lhs = two_row_content_sum(n, 0);
        let mut offsets: Vec<BigRational> = vec![qint(2 * n as i64 - 2)];
        for k in 0..n.saturating_sub(1) {
            offsets.push(qint(k as i64 - 1));
        }
        let scale = BigRational::new(factorial(2 * n), factorial(n));
        if lhs != RatFunc::inverse_linear_offsets(&offsets).scale(&scale) {
            return Err(format!("unshifted sum differs at n = {n}"));
        }
    }
    Ok("character, telescoping, and unshifted routes all agree".into())
}

fn check_pole_cancellation(limits: &Limits) -> Check {
    let m = coe_moment(&seq(&[1; 6]), &seq(&[1; 6]), 1, limits).map_err(|e| e.to_string())?;
    expect("|v_11|^6 at N = 1", m.value.unwrap(), qint(1))?;
    Ok("weight-3 poles cancel in the full moment at N = 1".into())
}

fn check_unitary_oracle(limits: &Limits) -> Check {
    let pairs = [
        (seq(&[1, 2, 1, 2]), seq(&[1, 1, 2, 2])),
        (seq(&[1, 1, 2, 3]), seq(&[2, 1, 3, 1])),
    ];
    for (i, j) in pairs {
        let engine = coe_moment_symbolic(&i, &j, limits)
            .map_err(|e| e.to_string())?
            .symbolic;
        let oracle = unitary_oracle(&i, &j, limits).map_err(|e| e.to_string())?;
        if oracle != engine.shift_up() {
            return Err(format!("oracle differs for i = {i}, j = {j}"));
        }
    }
    Ok("unitary integration reproduces two weight-2 moments".into())
}

fn check_doubled_counts(limits: &Limits) -> Check {
    for tau in symmetric_group_iter(4, limits).map_err(|e| e.to_string())? {
        let count = count_tilde_solutions(&tau, 2, limits).map_err(|e| e.to_string())?;
        let components = tau.coset_type().map_err(|e| e.to_string())?.len();
        if count != num::pow::pow(BigInt::from(2u32), components) {
            return Err(format!("count differs at tau = {tau}"));
        }
    }
    let tau = Permutation::from_one_line(&[4, 1, 6, 5, 2, 8, 7, 3]).map_err(|e| e.to_string())?;
    let count = count_tilde_solutions(&tau, 2, limits).map_err(|e| e.to_string())?;
    expect("two-component degree-8 count at N = 2", count, BigInt::from(4))?;
    Ok("doubled-sequence counts equal N^components".into())
}

fn check_asymptotics(limits: &Limits) -> Check {
    let c = asymptotic_counts(&seq(&[1; 6]), &seq(&[1; 6]), limits).map_err(|e| e.to_string())?;
    expect("repeated s", c.s.clone(), BigInt::from(48))?;
    expect("repeated s'", c.s_prime.clone(), BigInt::from(288))?;
    let c = asymptotic_counts(&seq(&[1, 2, 1, 2, 1, 2]), &seq(&[1, 2, 1, 2, 1, 2]), limits)
        .map_err(|e| e.to_string())?;
    expect("alternating s", c.s.clone(), BigInt::from(6))?;
    expect("alternating s'", c.s_prime.clone(), BigInt::from(18))?;
    let c = asymptotic_counts(&seq(&[1, 2, 3, 4]), &seq(&[1, 2, 3, 4]), limits)
        .map_err(|e| e.to_string())?;
    expect("distinct s", c.s.clone(), BigInt::one())?;
    expect("distinct s'", c.s_prime.clone(), BigInt::zero())?;
    let series = moment_expansion(&seq(&[1, 2, 1, 2]), &seq(&[1, 1, 2, 2]), 2, limits)
        .map_err(|e| e.to_string())?;
    if series.leading_exponent != Some(-3) || series.coeffs[0] != qint(-4) {
        return Err("cancelling pair should open with -4/N^3".into());
    }
    Ok("matching counts drive the first two expansion orders".into())
}

fn check_scaled_limits(_limits: &Limits) -> Check {
    for n in 1..=6 {
        let diag = diagonal_moment_symbolic(n).series_at_infinity(1);
        let two_n = num::pow::pow(BigInt::from(2u32), n);
        if diag.leading_exponent != Some(-(n as i64))
            || diag.coeffs[0] != BigRational::from_integer(&two_n * &factorial(n))
        {
            return Err(format!("diagonal limit differs at n = {n}"));
        }
        let off = offdiagonal_moment_symbolic(n).series_at_infinity(1);
        if off.leading_exponent != Some(-(n as i64))
            || off.coeffs[0] != BigRational::from_integer(factorial(n))
        {
            return Err(format!("off-diagonal limit differs at n = {n}"));
        }
    }
    Ok("scaled moments approach n! for n = 1 to 6".into())
}

fn check_mc_moment(limits: &Limits) -> Check {
    let verdict = verify_moment(
        &seq(&[1, 2, 1, 2]),
        &seq(&[1, 1, 2, 2]),
        3,
        20_000,
        &RngSpec::new(7, 0),
        4.0,
        limits,
    )
    .map_err(|e| e.to_string())?;
    if !verdict.pass {
        return Err(format!(
            "z_re = {:.2}, z_im = {:.2} exceeds 4",
            verdict.z_re, verdict.z_im
        ));
    }
    Ok(format!(
        "sampled {:.6} against exact {:.6} (z = {:+.2})",
        verdict.estimate.mean_re, verdict.exact_f64, verdict.z_re
    ))
}

fn check_mc_weingarten(limits: &Limits) -> Check {
    let verdict = verify_wg_orthogonal(
        &Partition::new(vec![1, 1]),
        4,
        20_000,
        &RngSpec::new(9, 1),
        4.0,
        limits,
    )
    .map_err(|e| e.to_string())?;
    if !verdict.pass {
        return Err(format!("z_re = {:.2} exceeds 4", verdict.z_re));
    }
    Ok(format!(
        "sampled {:.6} against exact {:.6} (z = {:+.2})",
        verdict.estimate.mean_re, verdict.exact_f64, verdict.z_re
    ))
}

fn check_mc_reproducible(limits: &Limits) -> Check {
    let i = seq(&[1, 1]);
    let spec = RngSpec::new(42, 7);
    let a = estimate_moment(&i, &i, 3, 1000, &spec, limits).map_err(|e| e.to_string())?;
    let b = estimate_moment(&i, &i, 3, 1000, &spec, limits).map_err(|e| e.to_string())?;
    if a != b {
        return Err("same seed and stream produced different estimates".into());
    }
    Ok("identical seed and stream reproduce estimates bit for bit".into())
}

/// Runs every check; `include_mc` adds the sampling block.
pub fn run(include_mc: bool, limits: &Limits) -> SelfTestReport {
    let mut checks: Vec<(&str, Check)> = vec![
        ("weingarten-forms", check_weingarten_forms(limits)),
        ("weingarten-sum", check_weingarten_sum(limits)),
        ("zonal-power", check_zonal_power(limits)),
        ("character-tables", check_character_tables(limits)),
        ("unitary-inversion", check_unitary_inversion(limits)),
        ("degree-one-moments", check_degree_one(limits)),
        ("paired-diagonal", check_paired_diagonal(limits)),
        ("mixed-sign", check_mixed_sign(limits)),
        ("triple-diagonal", check_triple_diagonal(limits)),
        ("single-matching", check_single_matching(limits)),
        ("repeated-square", check_repeated_square(limits)),
        ("closed-forms", check_closed_forms(limits)),
        ("two-row-routes", check_two_row_routes(limits)),
        ("pole-cancellation", check_pole_cancellation(limits)),
        ("unitary-oracle", check_unitary_oracle(limits)),
        ("doubled-counts", check_doubled_counts(limits)),
        ("asymptotics", check_asymptotics(limits)),
        ("scaled-limits", check_scaled_limits(limits)),
    ];
    if include_mc {
        checks.push(("mc-moment", check_mc_moment(limits)));
        checks.push(("mc-weingarten", check_mc_weingarten(limits)));
        checks.push(("mc-reproducible", check_mc_reproducible(limits)));
    }
    let checks: Vec<CheckResult> = checks
        .into_iter()
        .map(|(name, outcome)| match outcome {
            Ok(detail) => CheckResult {
                name: name.into(),
                passed: true,
                detail,
            },
            Err(detail) => CheckResult {
                name: name.into(),
                passed: false,
                detail,
            },
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    SelfTestReport { checks, passed }
}
