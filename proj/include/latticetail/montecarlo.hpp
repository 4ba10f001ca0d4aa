#pragma once

#include "latticetail/complex_matrix.hpp"
#include "latticetail/preproc.hpp"
#include "latticetail/rng.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace latticetail {

struct TrialConfig {
    std::size_t n = 0;
    std::size_t m = 0;
    double snr_db = 15.0;
    double p_find = 0.99;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    PreprocMethod method = PreprocMethod::Direct;
    std::optional<std::uint64_t> node_budget;

    double sigma2() const { return std::pow(10.0, -snr_db / 10.0); }
    void validate() const;  // throws ConfigError
};

struct TrialRecord {
    std::uint64_t trial = 0;
    bool found = false;
    bool censored = false;
    std::uint64_t total = 0;
    std::vector<std::uint64_t> layer_counts;  // S_1 .. S_M
};

struct SampleSet {
    TrialConfig config;
    double rho = 0.0;
    std::vector<TrialRecord> records;  // indexed by trial
    std::uint64_t found_count = 0;
    std::uint64_t censored_count = 0;
};

struct CCDF {
    std::vector<std::uint64_t> thresholds;  // ascending L
    std::vector<double> probabilities;      // P[S >= L], non-increasing
};

struct RealCCDF {
    std::vector<double> thresholds;
    std::vector<double> probabilities;
};

struct TailFit {
    double exponent = 0.0;  // xi-hat, the negated log-log slope
    double q_lo = 0.0;
    double q_hi = 0.0;
    std::size_t points_used = 0;
    double r_squared = 0.0;
    bool reliable = false;
};

struct ConditionReport {
    bool pdf_scaling_ok = false;     // f(H) >= f(aH) for a >= 1
    bool covering_moment_ok = false; // mean of z^2 vs chi-square moment
    bool homogeneity_ok = false;     // g_k and mu_ub scaling
    bool det_tail_ok = false;        // S_k slope vs 1/det slope per layer
    double covering_mean = 0.0;
    double covering_target = 0.0;
    double covering_stderr = 0.0;
    std::vector<double> layer_exponents;    // fitted xi_k
    std::vector<double> inv_det_exponents;  // fitted slope of P[1/det_k >= L]

    bool deterministic_ok() const {
        return pdf_scaling_ok && covering_moment_ok && homogeneity_ok;
    }
    bool all_ok() const { return deterministic_ok() && det_tail_ok; }
};

/// Regularized lower incomplete gamma P(a, x) for integer shape a >= 1.
double regularized_gamma_p(std::size_t a, double x);

/// rho such that ||w'||^2 <= rho^2 with probability p for w' having m i.i.d.
/// CN(0, sigma2) coordinates: rho^2 = sigma2 * G^-1(m, p), found by bisection
/// to 1e-10 relative.
double radius_for_coverage(std::size_t m, double sigma2, double p);

/// One experiment draw: h with i.i.d. CN(0, 1/M) entries and r_vec = w with
/// i.i.d. CN(0, sigma^2) entries (the transmitted point is the origin, which
/// leaves the complexity distribution unchanged).
std::pair<ComplexMatrix, CplxVector> sample_instance(TrialRng& rng, const TrialConfig& cfg);

/// Runs cfg.trials independent trials with a fixed radius from
/// radius_for_coverage. threads = 0 picks the hardware concurrency; the
/// result is identical for every worker count.
SampleSet run_trials(const TrialConfig& cfg, std::size_t threads = 0);

std::vector<std::uint64_t> total_samples(const SampleSet& set);
std::vector<std::uint64_t> layer_samples(const SampleSet& set, std::size_t k);  // 1-based

std::vector<std::uint64_t> log_spaced_thresholds(std::uint64_t lo, std::uint64_t hi,
                                                 std::size_t count = 80);
std::vector<double> log_spaced_real_thresholds(double lo, double hi, std::size_t count = 120);

CCDF empirical_ccdf(const std::vector<std::uint64_t>& samples,
                    const std::vector<std::uint64_t>& thresholds);
CCDF empirical_ccdf(const std::vector<std::uint64_t>& samples);  // default grid over [1, max]
RealCCDF empirical_ccdf(const std::vector<double>& samples, const std::vector<double>& thresholds);

/// CCDF of the total (or per-layer) complexity. When a node budget censored
/// some trials the threshold grid stops at the largest uncensored sample, so
/// every reported point still counts censored trials correctly as
/// exceedances.
CCDF complexity_ccdf(const SampleSet& set);
CCDF layer_complexity_ccdf(const SampleSet& set, std::size_t k);  // 1-based

/// Least-squares slope of log P against log L over the sample-quantile window
/// [q_lo, q_hi], i.e. CCDF values between 1-q_hi and 1-q_lo. Marked
/// unreliable with fewer than 5 usable points.
TailFit fit_tail(const CCDF& ccdf, double q_lo = 0.90, double q_hi = 0.999);
TailFit fit_tail(const RealCCDF& ccdf, double q_lo = 0.90, double q_hi = 0.999);

/// Tail fit of the total complexity; refuses (unreliable) when more than
/// 0.1% of trials are censored at or below the q_hi quantile.
TailFit fit_total_complexity(const SampleSet& set, double q_lo = 0.90, double q_hi = 0.999);
TailFit fit_layer_complexity(const SampleSet& set, std::size_t k, double q_lo = 0.90,
                             double q_hi = 0.999);

/// Empirical checks of the tail theorem's hypotheses on cfg-distributed
/// draws: density scaling, covering-bound moment, determinant/covering
/// homogeneity, and the per-layer match between complexity and inverse
/// fundamental-volume tails.
ConditionReport verify_theorem_conditions(const TrialConfig& cfg, std::size_t draws,
                                          std::size_t threads = 0);

}  // namespace latticetail
