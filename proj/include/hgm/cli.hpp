#pragma once

#include "hgm/amortized.hpp"
#include "hgm/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hgm::cli {

enum class Format { csv, jsonl };

enum ExitCode : int { ok = 0, usage_error = 1, verify_mismatch = 2, internal_error = 3 };

struct RunConfig {
    std::vector<Rational> alpha, beta;
    std::vector<std::int64_t> cyclo_a, cyclo_b;
    Rational z;
    std::uint64_t limit = 0;
    Format format = Format::csv;
    bool lift = false;
    bool show_skipped = false;
    std::uint64_t forest_bits = std::uint64_t{1} << 26;
    unsigned threads = 1;
    std::string output;  // empty: stdout
    /// Test hook: negate sigma on this interval.
    std::optional<std::size_t> corrupt_sigma;

    // bench
    std::vector<std::uint64_t> bench_limits;
    std::uint64_t oracle_cutoff = std::uint64_t{1} << 14;
    unsigned repeats = 1;
};

struct TraceRecord {
    std::uint64_t p = 0;
    std::uint64_t h = 0;
    std::optional<std::int64_t> a;
    TraceSource source = TraceSource::amortized;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct LiftResult {
    std::optional<std::int64_t> value;     // set when the lift is unique
    std::vector<std::int64_t> candidates;  // every a == h (mod p) with |a| <= r sqrt(p)
};

/// Integer trace of a weight-1 motive from its residue: unique once p > 4 r^2.
/// Throws DatumError when weight != 1.
LiftResult lift_weight_one(std::uint64_t h, std::uint64_t p, int r, int weight = 1);

/// Builds the normalized datum named by the config. Throws DatumError.
HypergeometricDatum datum_from_config(const RunConfig& config);

std::vector<TraceRecord> compute_records(const RunConfig& config);
std::vector<TraceRecord> oracle_records(const RunConfig& config);

std::string_view to_string(TraceSource source);

/// Writes records (and, when given, skipped primes) in increasing p.
void write_records(std::ostream& os, Format format, bool with_lift, const std::vector<TraceRecord>& records,
                   const std::vector<PrimeClass>& skipped = {});

/// Reads back the output of write_records; skipped-prime lines are ignored.
std::vector<TraceRecord> read_records(std::istream& is, Format format);

struct BenchRow {
    std::uint64_t X = 0;
    double amortized_seconds = 0;
    std::optional<double> oracle_seconds;
};

/// Wall time per limit, each the mean of `repeats` runs. The oracle column is
/// measured only for X <= oracle_cutoff.
std::vector<BenchRow> run_bench(const HypergeometricDatum& datum, const std::vector<std::uint64_t>& limits,
                                std::uint64_t oracle_cutoff, unsigned repeats, const TraceOptions& options);

int cmd_compute(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hgm::cli
