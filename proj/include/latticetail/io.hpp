#pragma once

#include "latticetail/decoder.hpp"
#include "latticetail/montecarlo.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace latticetail {

std::string method_name(PreprocMethod method);         // "qrd", "lll", "vblast"
PreprocMethod parse_method(const std::string& name);   // throws ConfigError

// CSV emission uses %.17g so that reading the file back reproduces every
// double bit for bit; integers are printed plain.
void write_samples_csv(std::ostream& os, const SampleSet& set);
void write_ccdf_csv(std::ostream& os, const CCDF& ccdf);
CCDF read_ccdf_csv(std::istream& is);  // throws ConfigError on schema errors

/// Flat JSON object with exactly the TrialConfig keys; unknown keys are
/// rejected so a typo cannot silently fall back to a default.
TrialConfig parse_trial_config(const std::string& json_text);
std::string trial_config_json(const TrialConfig& cfg);

struct RunManifest {
    TrialConfig config;
    std::string version;
    double wall_seconds = 0.0;
    double found_fraction = 0.0;
    std::uint64_t censored_count = 0;
    std::vector<std::string> output_files;
};

std::string manifest_json(const RunManifest& manifest);

// Complex scalars appear in JSON as two-element arrays [re, im]; a matrix is
// an array of rows.
ComplexMatrix parse_matrix_json(const std::string& text);
CplxVector parse_vector_json(const std::string& text);

std::string decode_result_json(const DecodeResult& result);
std::string tail_fit_json(const TailFit& fit);
std::string condition_report_json(const ConditionReport& report);

}  // namespace latticetail
