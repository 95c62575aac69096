//! Monte Carlo sampling of Haar and COE matrices, with batch-mean error bars.
//!
//! Everything here is driven by an explicit [`RngSpec`] so estimates are
//! reproducible bit for bit: the same seed and stream always produce the same
//! floating-point output on a given platform.  Estimates split their samples
//! into fixed-size batches, each on its own counter-derived stream, and report
//! the spread of batch means as the standard error.
//!
//! Haar unitaries come from QR-factorized complex Ginibre matrices with the
//! phase correction `Q diag(r_kk / |r_kk|)`, which repairs the sign ambiguity
//! that makes plain QR non-uniform.  Haar orthogonals use the real analogue,
//! and a COE matrix is `U^T U` for a Haar unitary `U`.

use nalgebra::{Complex, DMatrix};
use num::{BigRational, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinat::Partition;
use crate::error::{Error, Result};
use crate::moments::{coe_moment, IndexSeq};
use crate::weingarten::wg_orthogonal_at;
use crate::Limits;

/// Number of batches every estimate is split into.
pub const BATCHES: u64 = 32;

/// Deterministic generator configuration: a seed and a stream index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
    /// Base stream; batch `b` runs on stream `(stream_id << 32) | b`, so
    /// stream ids should stay below `2^32`.
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_id: u64) -> RngSpec {
        RngSpec { seed, stream_id }
    }

    fn rng_for_batch(&self, batch: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((self.stream_id << 32) | batch);
        rng
    }
}

/// One standard normal pair via the Box-Muller transform.
fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    (radius * angle.cos(), radius * angle.sin())
}

/// One standard complex normal (real and imaginary variance 1/2).
fn complex_normal(rng: &mut ChaCha8Rng) -> Complex<f64> {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let radius = (-u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    Complex::new(radius * angle.cos(), radius * angle.sin())
}

/// A Haar-distributed unitary of size `n`.
pub fn sample_haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex<f64>> {
    let ginibre = DMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for row in 0..n {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// A Haar-distributed orthogonal matrix of size `n`.
pub fn sample_haar_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut ginibre = DMatrix::zeros(n, n);
    let mut pending: Option<f64> = None;
    for row in 0..n {
        for col in 0..n {
            ginibre[(row, col)] = match pending.take() {
                Some(v) => v,
                None => {
                    let (a, b) = normal_pair(rng);
                    pending = Some(b);
                    a
                }
            };
        }
    }
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        let sign = if r[(k, k)] < 0.0 { -1.0 } else { 1.0 };
        for row in 0..n {
            q[(row, k)] *= sign;
        }
    }
    q
}

/// A COE matrix `U^T U` for Haar-distributed `U`: symmetric and unitary.
pub fn sample_coe(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex<f64>> {
    let u = sample_haar_unitary(n, rng);
    u.transpose() * &u
}

/// A Monte Carlo mean with batch-mean standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean_re: f64,
    pub mean_im: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    /// Samples requested by the caller.
    pub requested_samples: u64,
    /// Samples actually drawn: the largest multiple of [`BATCHES`] below the
    /// request.
    pub effective_samples: u64,
    pub batches: u64,
}

fn batch_stats(means: &[(f64, f64)]) -> McEstimate {
    let b = means.len() as f64;
    let mean_re = means.iter().map(|m| m.0).sum::<f64>() / b;
    let mean_im = means.iter().map(|m| m.1).sum::<f64>() / b;
    let var_re = means.iter().map(|m| (m.0 - mean_re).powi(2)).sum::<f64>() / (b - 1.0);
    let var_im = means.iter().map(|m| (m.1 - mean_im).powi(2)).sum::<f64>() / (b - 1.0);
    McEstimate {
        mean_re,
        mean_im,
        stderr_re: (var_re / b).sqrt(),
        stderr_im: (var_im / b).sqrt(),
        requested_samples: 0,
        effective_samples: 0,
        batches: means.len() as u64,
    }
}

fn run_batches<F>(samples: u64, spec: &RngSpec, limits: &Limits, mut kernel: F) -> Result<McEstimate>
where
    F: FnMut(&mut ChaCha8Rng) -> (f64, f64),
{
    if samples < 2 * BATCHES {
        return Err(Error::Domain(format!(
            "need at least {} samples, got {samples}",
            2 * BATCHES
        )));
    }
    limits.charge("monte carlo samples", samples)?;
    let per_batch = samples / BATCHES;
    let mut means = Vec::with_capacity(BATCHES as usize);
    for b in 0..BATCHES {
        let mut rng = spec.rng_for_batch(b);
        let mut sum_re = 0.0;
        let mut sum_im = 0.0;
        for _ in 0..per_batch {
            let (re, im) = kernel(&mut rng);
            sum_re += re;
            sum_im += im;
        }
        means.push((sum_re / per_batch as f64, sum_im / per_batch as f64));
    }
    let mut estimate = batch_stats(&means);
    estimate.requested_samples = samples;
    estimate.effective_samples = per_batch * BATCHES;
    Ok(estimate)
}

/// Monte Carlo estimate of the COE moment for `(i, j)` at matrix size `N`.
pub fn estimate_moment(
    i: &IndexSeq,
    j: &IndexSeq,
    big_n: usize,
    samples: u64,
    spec: &RngSpec,
    limits: &Limits,
) -> Result<McEstimate> {
    if i.len() != j.len() {
        return Err(Error::Domain(format!(
            "sequence lengths {} and {} differ",
            i.len(),
            j.len()
        )));
    }
    if big_n == 0 || i.max_entry() > big_n || j.max_entry() > big_n {
        return Err(Error::Domain(format!(
            "indices must fit inside an N = {big_n} matrix"
        )));
    }
    let ipairs: Vec<(usize, usize)> = i
        .entries()
        .chunks(2)
        .map(|c| (c[0] - 1, c[1] - 1))
        .collect();
    let jpairs: Vec<(usize, usize)> = j
        .entries()
        .chunks(2)
        .map(|c| (c[0] - 1, c[1] - 1))
        .collect();
    run_batches(samples, spec, limits, move |rng| {
        let v = sample_coe(big_n, rng);
        let mut term = Complex::new(1.0, 0.0);
        for &(a, b) in &ipairs {
            term *= v[(a, b)];
        }
        for &(a, b) in &jpairs {
            term *= v[(a, b)].conj();
        }
        (term.re, term.im)
    })
}

/// Monte Carlo estimate of an orthogonal Weingarten value at matrix size `N`.
///
/// For a permutation of coset type `mu`, the Haar average
/// `E[o_{1 c_1} o_{1 c_2} o_{2 c_3} o_{2 c_4} ...]` with columns given by the
/// permuted doubled sequence collapses to the single Weingarten term, because
/// only one pairing survives on each side.
pub fn estimate_wg_orthogonal(
    mu: &Partition,
    big_n: usize,
    samples: u64,
    spec: &RngSpec,
    limits: &Limits,
) -> Result<McEstimate> {
    let n = mu.weight();
    if big_n < n {
        return Err(Error::Domain(format!(
            "need matrix size at least {n} for weight-{n} estimates, got {big_n}"
        )));
    }
    let sigma = crate::combinat::coset_representative(mu);
    let rows: Vec<usize> = (0..2 * n).map(|t| t / 2).collect();
    let cols: Vec<usize> = (0..2 * n).map(|t| sigma.image0(t) / 2).collect();
    run_batches(samples, spec, limits, move |rng| {
        let o = sample_haar_orthogonal(big_n, rng);
        let mut term = 1.0;
        for t in 0..2 * n {
            term *= o[(rows[t], cols[t])];
        }
        (term, 0.0)
    })
}

/// Outcome of comparing a Monte Carlo estimate against the exact moment.
#[derive(Debug, Clone)]
pub struct McVerdict {
    pub exact: BigRational,
    pub exact_f64: f64,
    pub estimate: McEstimate,
    /// Standardized deviations of the real part from the exact value and of
    /// the imaginary part from zero.
    pub z_re: f64,
    pub z_im: f64,
    /// Largest |z| accepted.
    pub threshold: f64,
    pub pass: bool,
}

fn z_score(diff: f64, stderr: f64) -> f64 {
    if stderr == 0.0 {
        if diff.abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / stderr
    }
}

/// Estimates the moment for `(i, j)` at size `N` and checks it against the
/// exact value within `threshold` standard errors on both components.
pub fn verify_moment(
    i: &IndexSeq,
    j: &IndexSeq,
    big_n: usize,
    samples: u64,
    spec: &RngSpec,
    threshold: f64,
    limits: &Limits,
) -> Result<McVerdict> {
    let exact = coe_moment(i, j, big_n, limits)?
        .value
        .expect("value requested");
    let exact_f64 = exact.to_f64().ok_or_else(|| {
        Error::Internal("exact moment does not fit in an f64".into())
    })?;
    let estimate = estimate_moment(i, j, big_n, samples, spec, limits)?;
    let z_re = z_score(estimate.mean_re - exact_f64, estimate.stderr_re);
    let z_im = z_score(estimate.mean_im, estimate.stderr_im);
    let pass = z_re.abs() < threshold && z_im.abs() < threshold;
    Ok(McVerdict {
        exact,
        exact_f64,
        estimate,
        z_re,
        z_im,
        threshold,
        pass,
    })
}

/// Estimates the orthogonal Weingarten value for `mu` at size `N` and checks
/// it against the exact evaluation.
pub fn verify_wg_orthogonal(
    mu: &Partition,
    big_n: usize,
    samples: u64,
    spec: &RngSpec,
    threshold: f64,
    limits: &Limits,
) -> Result<McVerdict> {
    let exact = wg_orthogonal_at(mu.weight(), mu, big_n as i64, limits)?;
    let exact_f64 = exact.to_f64().ok_or_else(|| {
        Error::Internal("exact Weingarten value does not fit in an f64".into())
    })?;
    let estimate = estimate_wg_orthogonal(mu, big_n, samples, spec, limits)?;
    let z_re = z_score(estimate.mean_re - exact_f64, estimate.stderr_re);
    let z_im = z_score(estimate.mean_im, estimate.stderr_im);
    let pass = z_re.abs() < threshold && z_im.abs() < threshold;
    Ok(McVerdict {
        exact,
        exact_f64,
        estimate,
        z_re,
        z_im,
        threshold,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qz::qrat;

    fn seq(entries: &[usize]) -> IndexSeq {
        IndexSeq::new(entries.to_vec()).unwrap()
    }

    fn frobenius_distance(a: &DMatrix<Complex<f64>>, b: &DMatrix<Complex<f64>>) -> f64 {
        (a - b).norm()
    }

    #[test]
    fn normal_pairs_have_unit_variance() {
        let mut rng = RngSpec::new(11, 0).rng_for_batch(0);
        let count = 20_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..count {
            let (a, b) = normal_pair(&mut rng);
            sum += a + b;
            sum_sq += a * a + b * b;
        }
        let n = (2 * count) as f64;
        assert!((sum / n).abs() < 0.02);
        assert!((sum_sq / n - 1.0).abs() < 0.03);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = RngSpec::new(3, 0).rng_for_batch(0);
        for n in [2usize, 3, 5] {
            let u = sample_haar_unitary(n, &mut rng);
            let identity = DMatrix::from_fn(n, n, |r, c| {
                Complex::new(if r == c { 1.0 } else { 0.0 }, 0.0)
            });
            assert!(frobenius_distance(&(&u * u.adjoint()), &identity) < 1e-10);
        }
    }

    #[test]
    fn haar_orthogonal_is_orthogonal() {
        let mut rng = RngSpec::new(4, 0).rng_for_batch(0);
        for n in [2usize, 3, 5] {
            let o = sample_haar_orthogonal(n, &mut rng);
            let product = &o * o.transpose();
            let identity = DMatrix::<f64>::identity(n, n);
            assert!((product - identity).norm() < 1e-10);
        }
    }

    #[test]
    fn coe_samples_are_symmetric_unitary() {
        let mut rng = RngSpec::new(5, 0).rng_for_batch(0);
        for n in [2usize, 4] {
            let v = sample_coe(n, &mut rng);
            assert!(frobenius_distance(&v, &v.transpose()) < 1e-12);
            let identity = DMatrix::from_fn(n, n, |r, c| {
                Complex::new(if r == c { 1.0 } else { 0.0 }, 0.0)
            });
            assert!(frobenius_distance(&(&v * v.adjoint()), &identity) < 1e-10);
        }
    }

    #[test]
    fn estimates_reproduce_bit_for_bit() {
        let limits = Limits::default();
        let i = seq(&[1, 1]);
        let spec = RngSpec::new(42, 7);
        let a = estimate_moment(&i, &i, 3, 1000, &spec, &limits).unwrap();
        let b = estimate_moment(&i, &i, 3, 1000, &spec, &limits).unwrap();
        assert_eq!(a, b);
        let other = estimate_moment(&i, &i, 3, 1000, &RngSpec::new(42, 8), &limits).unwrap();
        assert_ne!(a.mean_re, other.mean_re);
        assert_eq!(a.effective_samples, 992);
        assert_eq!(a.batches, BATCHES);
    }

    #[test]
    fn moment_estimate_matches_exact_value() {
        let limits = Limits::default();
        // E[v_12^2 conj(v_11 v_22)] at N = 3 is -1/18
        let verdict = verify_moment(
            &seq(&[1, 2, 1, 2]),
            &seq(&[1, 1, 2, 2]),
            3,
            20_000,
            &RngSpec::new(7, 0),
            4.0,
            &limits,
        )
        .unwrap();
        assert_eq!(verdict.exact, qrat(-1, 18));
        assert!(verdict.pass, "z_re = {}, z_im = {}", verdict.z_re, verdict.z_im);
    }

    #[test]
    fn weingarten_estimate_matches_exact_value() {
        let limits = Limits::default();
        // orthogonal Weingarten at the identity coset type, weight 2, N = 4
        let verdict = verify_wg_orthogonal(
            &Partition::new(vec![1, 1]),
            4,
            20_000,
            &RngSpec::new(9, 1),
            4.0,
            &limits,
        )
        .unwrap();
        assert_eq!(verdict.exact, qrat(5, 72));
        assert!(verdict.pass, "z_re = {}", verdict.z_re);
    }

    #[test]
    fn stderr_shrinks_with_sample_count() {
        let limits = Limits::default();
        let i = seq(&[1, 1]);
        // quadrupling the sample count should halve the error bar
        let mut ratio_sum = 0.0;
        let trials = 10;
        for t in 0..trials {
            let small = estimate_moment(&i, &i, 3, 640, &RngSpec::new(100, t), &limits).unwrap();
            let large =
                estimate_moment(&i, &i, 3, 2560, &RngSpec::new(200, t), &limits).unwrap();
            ratio_sum += small.stderr_re / large.stderr_re;
        }
        let mean_ratio = ratio_sum / trials as f64;
        assert!(
            (1.5..=2.5).contains(&mean_ratio),
            "mean stderr ratio {mean_ratio}"
        );
    }

    #[test]
    fn unitary_phase_is_uniform() {
        // arg of the corner entry of a Haar unitary is uniform on the circle;
        // 16-bin chi-square with 15 degrees of freedom, 0.001 critical value
        let mut rng = RngSpec::new(12, 0).rng_for_batch(0);
        let bins = 16usize;
        let samples = 100_000usize;
        let mut histogram = vec![0u64; bins];
        for _ in 0..samples {
            let u = sample_haar_unitary(3, &mut rng);
            let angle = u[(0, 0)].arg();
            let fraction = (angle + std::f64::consts::PI) / std::f64::consts::TAU;
            let bin = ((fraction * bins as f64) as usize).min(bins - 1);
            histogram[bin] += 1;
        }
        let expected = samples as f64 / bins as f64;
        let statistic: f64 = histogram
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(statistic < 37.697, "chi-square statistic {statistic}");
    }

    #[test]
    fn estimate_validation() {
        let limits = Limits::default();
        let i = seq(&[1, 1]);
        let spec = RngSpec::new(1, 0);
        assert!(estimate_moment(&i, &i, 3, 10, &spec, &limits).is_err());
        assert!(estimate_moment(&seq(&[1, 4]), &seq(&[1, 4]), 3, 1000, &spec, &limits).is_err());
        assert!(
            estimate_wg_orthogonal(&Partition::new(vec![2, 1]), 2, 1000, &spec, &limits).is_err()
        );
        let tight = Limits {
            n_max: 6,
            enum_budget: 100,
        };
        assert!(estimate_moment(&i, &i, 3, 1000, &spec, &tight).is_err());
    }
}
