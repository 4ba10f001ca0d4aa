#include "latticetail/montecarlo.hpp"

#include "latticetail/decoder.hpp"
#include "latticetail/errors.hpp"
#include "latticetail/lattice.hpp"
#include "latticetail/qrd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace latticetail {

void TrialConfig::validate() const {
    if (m < 1) throw ConfigError("config: m must be at least 1");
    if (n < m) throw ConfigError("config: n must be at least m");
    if (!(p_find > 0.0 && p_find < 1.0)) throw ConfigError("config: p_find must be in (0, 1)");
    if (trials < 1) throw ConfigError("config: trials must be at least 1");
    if (!std::isfinite(snr_db)) throw ConfigError("config: snr_db must be finite");
    if (node_budget && *node_budget < 1) throw ConfigError("config: node_budget must be positive");
}

double regularized_gamma_p(std::size_t a, double x) {
    if (a < 1) throw std::invalid_argument("regularized_gamma_p: shape must be >= 1");
    if (x <= 0.0) return 0.0;
    // Integer shape: P(a, x) = 1 - e^-x * sum_{j<a} x^j / j!
    double term = 1.0;
    double sum = 1.0;
    for (std::size_t j = 1; j < a; ++j) {
        term *= x / static_cast<double>(j);
        sum += term;
    }
    const double q = std::exp(-x) * sum;
    return q >= 1.0 ? 0.0 : 1.0 - q;
}

double radius_for_coverage(std::size_t m, double sigma2, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("radius_for_coverage: p in (0,1)");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("radius_for_coverage: sigma2 positive");
    double hi = 1.0;
    int guard = 0;
    while (regularized_gamma_p(m, hi) < p) {
        hi *= 2.0;
        if (++guard > 1100) throw std::runtime_error("radius_for_coverage: bracket failed");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (regularized_gamma_p(m, mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return std::sqrt(sigma2 * 0.5 * (lo + hi));
}

std::pair<ComplexMatrix, CplxVector> sample_instance(TrialRng& rng, const TrialConfig& cfg) {
    ComplexMatrix h(cfg.n, cfg.m);
    const double hv = 1.0 / static_cast<double>(cfg.m);
    for (std::size_t i = 0; i < cfg.n; ++i)
        for (std::size_t j = 0; j < cfg.m; ++j) h(i, j) = rng.cnormal(hv);
    CplxVector w(cfg.n);
    const double s2 = cfg.sigma2();
    for (std::size_t i = 0; i < cfg.n; ++i) w[i] = rng.cnormal(s2);
    return {std::move(h), std::move(w)};
}

SampleSet run_trials(const TrialConfig& cfg, std::size_t threads) {
    cfg.validate();
    SampleSet set;
    set.config = cfg;
    set.rho = radius_for_coverage(cfg.m, cfg.sigma2(), cfg.p_find);
    set.records.resize(cfg.trials);

    if (threads == 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        threads = hc > 0 ? hc : 1;
    }
    if (threads > cfg.trials) threads = static_cast<std::size_t>(cfg.trials);

    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::uint64_t idx = next.fetch_add(1);
            if (idx >= cfg.trials) return;
            TrialRng rng(cfg.seed, idx);
            auto [h, r_vec] = sample_instance(rng, cfg);
            TrialRecord rec;
            rec.trial = idx;
            try {
                const DecodeResult res =
                    solve(h, r_vec, set.rho, cfg.method, 0.75, cfg.node_budget);
                rec.found = res.found();
                rec.censored = res.censored || res.overflow;
                rec.total = res.total;
                rec.layer_counts = res.layer_counts;
            } catch (const std::exception&) {
                // A degenerate draw must not sink the batch; record an empty
                // trial and move on.
                rec.layer_counts.assign(cfg.m, 0);
            }
            set.records[idx] = std::move(rec);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    for (const TrialRecord& rec : set.records) {
        if (rec.found) ++set.found_count;
        if (rec.censored) ++set.censored_count;
    }
    return set;
}

std::vector<std::uint64_t> total_samples(const SampleSet& set) {
    std::vector<std::uint64_t> out;
    out.reserve(set.records.size());
    for (const TrialRecord& rec : set.records) out.push_back(rec.total);
    return out;
}

std::vector<std::uint64_t> layer_samples(const SampleSet& set, std::size_t k) {
    if (k < 1 || k > set.config.m)
        throw InvalidLayerError("layer_samples: k out of range");
    std::vector<std::uint64_t> out;
    out.reserve(set.records.size());
    for (const TrialRecord& rec : set.records) out.push_back(rec.layer_counts[k - 1]);
    return out;
}

std::vector<std::uint64_t> log_spaced_thresholds(std::uint64_t lo, std::uint64_t hi,
                                                 std::size_t count) {
    if (lo < 1) lo = 1;
    if (hi < lo) hi = lo;
    std::vector<std::uint64_t> out;
    if (count < 2 || lo == hi) {
        out.push_back(lo);
        return out;
    }
    const double la = std::log(static_cast<double>(lo));
    const double lb = std::log(static_cast<double>(hi));
    for (std::size_t i = 0; i < count; ++i) {
        const double t = la + (lb - la) * static_cast<double>(i) / static_cast<double>(count - 1);
        std::uint64_t v = static_cast<std::uint64_t>(std::llround(std::exp(t)));
        v = std::clamp(v, lo, hi);
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    return out;
}

std::vector<double> log_spaced_real_thresholds(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo))
        throw std::invalid_argument("log_spaced_real_thresholds: need 0 < lo <= hi");
    std::vector<double> out;
    if (count < 2 || lo == hi) {
        out.push_back(lo);
        return out;
    }
    const double la = std::log(lo);
    const double lb = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = la + (lb - la) * static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(std::exp(t));
    }
    return out;
}

namespace {

template <typename T>
std::vector<double> exceedance_probs(std::vector<T> sorted_samples, const std::vector<T>& ls) {
    std::sort(sorted_samples.begin(), sorted_samples.end());
    const double n = static_cast<double>(sorted_samples.size());
    std::vector<double> probs;
    probs.reserve(ls.size());
    for (const T& l : ls) {
        const auto it = std::lower_bound(sorted_samples.begin(), sorted_samples.end(), l);
        probs.push_back(static_cast<double>(sorted_samples.end() - it) / n);
    }
    return probs;
}

}  // namespace

CCDF empirical_ccdf(const std::vector<std::uint64_t>& samples,
                    const std::vector<std::uint64_t>& thresholds) {
    if (samples.empty()) throw EmptySamplesError("empirical_ccdf: no samples");
    if (thresholds.empty()) throw std::invalid_argument("empirical_ccdf: no thresholds");
    return CCDF{thresholds, exceedance_probs(samples, thresholds)};
}

CCDF empirical_ccdf(const std::vector<std::uint64_t>& samples) {
    if (samples.empty()) throw EmptySamplesError("empirical_ccdf: no samples");
    const std::uint64_t hi = *std::max_element(samples.begin(), samples.end());
    return empirical_ccdf(samples, log_spaced_thresholds(1, std::max<std::uint64_t>(hi, 1)));
}

RealCCDF empirical_ccdf(const std::vector<double>& samples,
                        const std::vector<double>& thresholds) {
    if (samples.empty()) throw EmptySamplesError("empirical_ccdf: no samples");
    if (thresholds.empty()) throw std::invalid_argument("empirical_ccdf: no thresholds");
    return RealCCDF{thresholds, exceedance_probs(samples, thresholds)};
}

namespace {

std::uint64_t censor_aware_max(const SampleSet& set, const std::vector<std::uint64_t>& samples) {
    std::uint64_t hi = 0;
    bool any = false;
    for (std::size_t i = 0; i < set.records.size(); ++i) {
        if (set.records[i].censored) continue;
        any = true;
        hi = std::max(hi, samples[i]);
    }
    if (!any) hi = *std::max_element(samples.begin(), samples.end());
    if (set.config.node_budget) hi = std::min(hi, *set.config.node_budget);
    return std::max<std::uint64_t>(hi, 1);
}

}  // namespace

CCDF complexity_ccdf(const SampleSet& set) {
    const std::vector<std::uint64_t> samples = total_samples(set);
    return empirical_ccdf(samples, log_spaced_thresholds(1, censor_aware_max(set, samples)));
}

CCDF layer_complexity_ccdf(const SampleSet& set, std::size_t k) {
    const std::vector<std::uint64_t> samples = layer_samples(set, k);
    return empirical_ccdf(samples, log_spaced_thresholds(1, censor_aware_max(set, samples)));
}

namespace {

TailFit ols_loglog(const std::vector<double>& log_l, const std::vector<double>& log_p,
                   double q_lo, double q_hi) {
    TailFit fit;
    fit.q_lo = q_lo;
    fit.q_hi = q_hi;
    fit.points_used = log_l.size();
    if (log_l.size() < 5) return fit;

    const double n = static_cast<double>(log_l.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < log_l.size(); ++i) {
        mx += log_l[i];
        my += log_p[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < log_l.size(); ++i) {
        const double dx = log_l[i] - mx;
        const double dy = log_p[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) return fit;
    const double slope = sxy / sxx;
    fit.exponent = -slope;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
    fit.reliable = true;
    return fit;
}

template <typename Ccdf>
TailFit fit_tail_impl(const Ccdf& ccdf, double q_lo, double q_hi) {
    if (!(q_lo > 0.0 && q_lo < q_hi && q_hi < 1.0))
        throw std::invalid_argument("fit_tail: need 0 < q_lo < q_hi < 1");
    if (ccdf.thresholds.size() != ccdf.probabilities.size())
        throw std::invalid_argument("fit_tail: malformed ccdf");
    const double p_min = 1.0 - q_hi;
    const double p_max = 1.0 - q_lo;
    std::vector<double> log_l, log_p;
    for (std::size_t i = 0; i < ccdf.thresholds.size(); ++i) {
        const double p = ccdf.probabilities[i];
        const double l = static_cast<double>(ccdf.thresholds[i]);
        if (p < p_min || p > p_max || !(p > 0.0) || !(l > 0.0)) continue;
        log_l.push_back(std::log(l));
        log_p.push_back(std::log(p));
    }
    return ols_loglog(log_l, log_p, q_lo, q_hi);
}

std::uint64_t sample_quantile(std::vector<std::uint64_t> v, double q) {
    std::sort(v.begin(), v.end());
    const std::size_t idx =
        static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
    return v[idx];
}

TailFit censor_checked_fit(const SampleSet& set, const std::vector<std::uint64_t>& samples,
                           const CCDF& ccdf, double q_lo, double q_hi) {
    TailFit fit = fit_tail_impl(ccdf, q_lo, q_hi);
    if (set.censored_count > 0) {
        const std::uint64_t qv = sample_quantile(samples, q_hi);
        std::uint64_t bad = 0;
        for (std::size_t i = 0; i < set.records.size(); ++i)
            if (set.records[i].censored && samples[i] <= qv) ++bad;
        if (static_cast<double>(bad) > 0.001 * static_cast<double>(set.records.size()))
            fit.reliable = false;
    }
    return fit;
}

}  // namespace

TailFit fit_tail(const CCDF& ccdf, double q_lo, double q_hi) {
    return fit_tail_impl(ccdf, q_lo, q_hi);
}

TailFit fit_tail(const RealCCDF& ccdf, double q_lo, double q_hi) {
    return fit_tail_impl(ccdf, q_lo, q_hi);
}

TailFit fit_total_complexity(const SampleSet& set, double q_lo, double q_hi) {
    const std::vector<std::uint64_t> samples = total_samples(set);
    const CCDF ccdf = empirical_ccdf(samples, log_spaced_thresholds(1, censor_aware_max(set, samples)));
    return censor_checked_fit(set, samples, ccdf, q_lo, q_hi);
}

TailFit fit_layer_complexity(const SampleSet& set, std::size_t k, double q_lo, double q_hi) {
    const std::vector<std::uint64_t> samples = layer_samples(set, k);
    const CCDF ccdf = empirical_ccdf(samples, log_spaced_thresholds(1, censor_aware_max(set, samples)));
    return censor_checked_fit(set, samples, ccdf, q_lo, q_hi);
}

ConditionReport verify_theorem_conditions(const TrialConfig& cfg, std::size_t draws,
                                          std::size_t threads) {
    cfg.validate();
    if (draws < 1000) throw std::invalid_argument("verify_theorem_conditions: draws >= 1000");
    ConditionReport rep;
    const double var_h = 1.0 / static_cast<double>(cfg.m);

    // (a) density never increases under magnification a >= 1, and
    // (b) mean of z^2 = (1/2) sum R_ii^2 matches the chi-square moment.
    const double scales[] = {1.5, 2.0, 4.0};
    bool pdf_ok = true;
    double z2_sum = 0.0, z2_sq_sum = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        TrialRng rng(cfg.seed, cfg.trials + i);
        const auto [h, w] = sample_instance(rng, cfg);
        const double fh2 = h.frobenius_norm() * h.frobenius_norm();
        for (const double a : scales) {
            // log f(H) = const - ||H||_F^2 / var_h
            const double log_f = -fh2 / var_h;
            const double log_fa = -(a * a * fh2) / var_h;
            if (log_f < log_fa) pdf_ok = false;
        }
        const ComplexMatrix r = qrd(h).r;
        double z2 = 0.0;
        for (std::size_t d = 0; d < cfg.m; ++d) z2 += std::norm(r(d, d));
        z2 *= 0.5;
        z2_sum += z2;
        z2_sq_sum += z2 * z2;
    }
    rep.pdf_scaling_ok = pdf_ok;
    const double nd = static_cast<double>(draws);
    rep.covering_mean = z2_sum / nd;
    double target = 0.0;
    for (std::size_t i = 1; i <= cfg.m; ++i)
        target += static_cast<double>(cfg.n - i + 1);
    target *= var_h / 2.0;
    rep.covering_target = target;
    const double var = std::max(z2_sq_sum / nd - rep.covering_mean * rep.covering_mean, 0.0);
    rep.covering_stderr = std::sqrt(var / nd);
    rep.covering_moment_ok =
        std::abs(rep.covering_mean - target) <= 5.0 * std::max(rep.covering_stderr, 1e-300);

    // (c) exact-scaling spot checks on a handful of fresh draws.
    bool homo_ok = true;
    for (std::size_t i = 0; i < 5; ++i) {
        TrialRng rng(cfg.seed, cfg.trials + draws + i);
        const auto [h, w] = sample_instance(rng, cfg);
        if (!scaling_invariance_check(h, cfg.method, 2.0)) homo_ok = false;
        const ComplexMatrix r = qrd(h).r;
        const double mu = covering_radius_ub(r);
        const double mu2 = covering_radius_ub(2.0 * r);
        if (std::abs(mu2 - 2.0 * mu) > 1e-10 * std::max(mu2, 1e-300)) homo_ok = false;
    }
    rep.homogeneity_ok = homo_ok;

    // (d) per-layer tail slopes: complexity vs inverse fundamental volume.
    const SampleSet set = run_trials(cfg, threads);
    std::vector<std::vector<double>> inv_dets(cfg.m);
    for (std::uint64_t idx = 0; idx < cfg.trials; ++idx) {
        TrialRng rng(cfg.seed, idx);
        const auto [h, w] = sample_instance(rng, cfg);
        try {
            const PreprocOutput pp = preprocess(h, cfg.method);
            for (std::size_t k = 1; k <= cfg.m; ++k)
                inv_dets[k - 1].push_back(1.0 / sub_gram_det(pp.r_tilde, k));
        } catch (const std::exception&) {
        }
    }
    bool tails_ok = true;
    for (std::size_t k = 1; k <= cfg.m; ++k) {
        const TailFit fk = fit_layer_complexity(set, k);
        std::vector<double>& ds = inv_dets[k - 1];
        TailFit fd;
        if (!ds.empty()) {
            const auto [lo_it, hi_it] = std::minmax_element(ds.begin(), ds.end());
            if (*lo_it > 0.0 && *hi_it > *lo_it) {
                const RealCCDF ccdf =
                    empirical_ccdf(ds, log_spaced_real_thresholds(*lo_it, *hi_it));
                fd = fit_tail(ccdf);
            }
        }
        rep.layer_exponents.push_back(fk.exponent);
        rep.inv_det_exponents.push_back(fd.exponent);
        if (!fk.reliable || !fd.reliable || std::abs(fk.exponent - fd.exponent) > 0.3)
            tails_ok = false;
    }
    rep.det_tail_ok = tails_ok;
    return rep;
}

}  // namespace latticetail
