#include "latticetail/io.hpp"

#include "latticetail/errors.hpp"

#include "json.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

namespace latticetail {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t parse_u64_field(const std::string& s, const std::string& where) {
    if (s.empty() || s[0] == '-' || s[0] == '+')
        throw ConfigError("ccdf: " + where + ": expected a nonnegative integer");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size())
        throw ConfigError("ccdf: " + where + ": expected a nonnegative integer");
    return v;
}

double parse_double_field(const std::string& s, const std::string& where) {
    if (s.empty()) throw ConfigError("ccdf: " + where + ": expected a number");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size())
        throw ConfigError("ccdf: " + where + ": expected a number");
    return v;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

Cplx get_cplx(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(where + ": complex values are two-element arrays [re, im]");
    return Cplx{v[0].get<double>(), v[1].get<double>()};
}

std::uint64_t get_u64(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const std::int64_t s = v.get<std::int64_t>();
        if (s >= 0) return static_cast<std::uint64_t>(s);
    }
    throw ConfigError("config: '" + key + "' must be a nonnegative integer");
}

double get_real(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError("config: '" + key + "' must be a number");
    return v.get<double>();
}

ordered_json config_object(const TrialConfig& cfg) {
    ordered_json o;
    o["n"] = cfg.n;
    o["m"] = cfg.m;
    o["snr_db"] = cfg.snr_db;
    o["p_find"] = cfg.p_find;
    o["trials"] = cfg.trials;
    o["seed"] = cfg.seed;
    o["method"] = method_name(cfg.method);
    if (cfg.node_budget) o["node_budget"] = *cfg.node_budget;
    return o;
}

}  // namespace

std::string method_name(PreprocMethod method) {
    switch (method) {
        case PreprocMethod::Direct:
            return "qrd";
        case PreprocMethod::Clll:
            return "lll";
        case PreprocMethod::Vblast:
            return "vblast";
    }
    return "qrd";
}

PreprocMethod parse_method(const std::string& name) {
    if (name == "qrd") return PreprocMethod::Direct;
    if (name == "lll") return PreprocMethod::Clll;
    if (name == "vblast") return PreprocMethod::Vblast;
    throw ConfigError("config: unknown method '" + name + "' (expected qrd, lll, or vblast)");
}

void write_samples_csv(std::ostream& os, const SampleSet& set) {
    os << "trial,found,censored,S_total";
    for (std::size_t k = 1; k <= set.config.m; ++k) os << ",S_" << k;
    os << "\n";
    for (const TrialRecord& rec : set.records) {
        os << rec.trial << ',' << (rec.found ? 1 : 0) << ',' << (rec.censored ? 1 : 0) << ','
           << rec.total;
        for (const std::uint64_t v : rec.layer_counts) os << ',' << v;
        os << "\n";
    }
}

void write_ccdf_csv(std::ostream& os, const CCDF& ccdf) {
    os << "L,p\n";
    for (std::size_t i = 0; i < ccdf.thresholds.size(); ++i)
        os << ccdf.thresholds[i] << ',' << fmt_double(ccdf.probabilities[i]) << "\n";
}

CCDF read_ccdf_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("ccdf: empty file");
    strip_cr(line);
    if (line != "L,p") throw ConfigError("ccdf: expected header 'L,p'");
    CCDF out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("ccdf: " + where + ": expected 'L,p'");
        const std::uint64_t l = parse_u64_field(line.substr(0, comma), where);
        const double p = parse_double_field(line.substr(comma + 1), where);
        if (!out.thresholds.empty() && l <= out.thresholds.back())
            throw ConfigError("ccdf: " + where + ": thresholds must be ascending");
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError("ccdf: " + where + ": p must lie in [0, 1]");
        if (!out.probabilities.empty() && p > out.probabilities.back())
            throw ConfigError("ccdf: " + where + ": p must be non-increasing");
        out.thresholds.push_back(l);
        out.probabilities.push_back(p);
    }
    if (out.thresholds.empty()) throw ConfigError("ccdf: no data rows");
    return out;
}

TrialConfig parse_trial_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    static const char* known[] = {"n",      "m",    "snr_db", "p_find",
                                  "trials", "seed", "method", "node_budget"};
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) throw ConfigError("config: unknown key '" + item.key() + "'");
    }
    for (const char* k : {"n", "m", "trials", "seed", "method"})
        if (!j.contains(k)) throw ConfigError(std::string("config: missing key '") + k + "'");

    TrialConfig cfg;
    cfg.n = static_cast<std::size_t>(get_u64(j, "n"));
    cfg.m = static_cast<std::size_t>(get_u64(j, "m"));
    if (j.contains("snr_db")) cfg.snr_db = get_real(j, "snr_db");
    if (j.contains("p_find")) cfg.p_find = get_real(j, "p_find");
    cfg.trials = get_u64(j, "trials");
    {
        const json& v = j.at("seed");
        if (v.is_number_unsigned())
            cfg.seed = v.get<std::uint64_t>();
        else if (v.is_number_integer())
            cfg.seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
        else
            throw ConfigError("config: 'seed' must be a 64-bit integer");
    }
    if (!j.at("method").is_string()) throw ConfigError("config: 'method' must be a string");
    cfg.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("node_budget") && !j.at("node_budget").is_null())
        cfg.node_budget = get_u64(j, "node_budget");
    cfg.validate();
    return cfg;
}

std::string trial_config_json(const TrialConfig& cfg) { return config_object(cfg).dump(2); }

std::string manifest_json(const RunManifest& manifest) {
    ordered_json o;
    o["config"] = config_object(manifest.config);
    o["version"] = manifest.version;
    o["wall_seconds"] = manifest.wall_seconds;
    o["found_fraction"] = manifest.found_fraction;
    o["censored_count"] = manifest.censored_count;
    o["outputs"] = manifest.output_files;
    return o.dump(2);
}

ComplexMatrix parse_matrix_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("matrix: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw ConfigError("matrix: expected an array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw ConfigError("matrix: rows must be arrays of [re, im] pairs");
    const std::size_t cols = j[0].size();
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ConfigError("matrix: ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            out(i, c) = get_cplx(j[i][c], "matrix");
    }
    return out;
}

CplxVector parse_vector_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("vector: ") + e.what());
    }
    if (!j.is_array() || j.empty())
        throw ConfigError("vector: expected an array of [re, im] pairs");
    CplxVector out(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out[i] = get_cplx(j[i], "vector");
    return out;
}

std::string decode_result_json(const DecodeResult& result) {
    ordered_json o;
    o["found"] = result.found();
    if (result.solution) {
        ordered_json sol = ordered_json::array();
        for (const GaussInt& g : *result.solution) sol.push_back({g.re, g.im});
        o["solution"] = sol;
        o["objective"] = *result.objective;
    } else {
        o["solution"] = nullptr;
        o["objective"] = nullptr;
    }
    o["layer_counts"] = result.layer_counts;
    o["total"] = result.total;
    o["censored"] = result.censored;
    o["overflow"] = result.overflow;
    return o.dump(2);
}

std::string tail_fit_json(const TailFit& fit) {
    ordered_json o;
    o["exponent"] = fit.exponent;
    o["q_lo"] = fit.q_lo;
    o["q_hi"] = fit.q_hi;
    o["points_used"] = fit.points_used;
    o["r_squared"] = fit.r_squared;
    o["reliable"] = fit.reliable;
    return o.dump(2);
}

std::string condition_report_json(const ConditionReport& report) {
    ordered_json o;
    o["pdf_scaling_ok"] = report.pdf_scaling_ok;
    o["covering_moment_ok"] = report.covering_moment_ok;
    o["homogeneity_ok"] = report.homogeneity_ok;
    o["det_tail_ok"] = report.det_tail_ok;
    o["covering_mean"] = report.covering_mean;
    o["covering_target"] = report.covering_target;
    o["covering_stderr"] = report.covering_stderr;
    o["layer_exponents"] = report.layer_exponents;
    o["inv_det_exponents"] = report.inv_det_exponents;
    o["deterministic_ok"] = report.deterministic_ok();
    o["all_ok"] = report.all_ok();
    return o.dump(2);
}

}  // namespace latticetail
