#include "hgm/cli.hpp"

#include "hgm/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hgm::cli {

namespace {

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

std::vector<Rational> parse_fractions(const std::string& text) {
    std::vector<Rational> out;
    for (const auto& token : split_commas(text)) out.push_back(Rational::parse(token));
    return out;
}

std::vector<std::int64_t> parse_integers(const std::string& text) {
    std::vector<std::int64_t> out;
    for (const auto& token : split_commas(text)) {
        Rational r = Rational::parse(token);
        if (!r.is_integer()) throw DatumError("expected an integer, got " + token);
        out.push_back(r.num());
    }
    return out;
}

TraceOptions trace_options(const RunConfig& config) {
    TraceOptions options;
    options.threads = config.threads;
    options.forest_bits = config.forest_bits;
    if (config.corrupt_sigma) {
        std::size_t target = *config.corrupt_sigma;
        // Flip the sign on the chosen interval; a zero sign becomes +1.
        options.sigma_hook = [target](std::size_t i, int sigma) { return i == target ? (sigma == 0 ? 1 : -sigma) : sigma; };
    }
    return options;
}

void apply_lift(std::vector<TraceRecord>& records, const MotiveSpec& spec, std::ostream& err) {
    if (spec.w != 1) {
        err << "warning: --lift needs a weight-1 motive (weight is " << spec.w << "); not lifting\n";
        return;
    }
    for (auto& rec : records) rec.a = lift_weight_one(rec.h, rec.p, spec.r).value;
}

std::vector<PrimeClass> skipped_primes(const HypergeometricDatum& datum, std::uint64_t X) {
    std::vector<PrimeClass> out;
    for (const auto& pc : classify_primes(datum, X))
        if (pc.kind != PrimeKind::good) out.push_back(pc);
    return out;
}

volatile std::uint64_t sink = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Runs `body` against the configured output stream.
int with_output(const RunConfig& config, std::ostream& out, std::ostream& err,
                const std::function<void(std::ostream&)>& body) {
    if (config.output.empty()) {
        body(out);
        return ok;
    }
    std::ofstream file(config.output);
    if (!file) {
        err << "error: cannot open " << config.output << " for writing\n";
        return usage_error;
    }
    body(file);
    file.flush();
    if (!file) {
        err << "error: failed writing " << config.output << "\n";
        return usage_error;
    }
    return ok;
}

int emit(const RunConfig& config, std::vector<TraceRecord> records, std::ostream& out, std::ostream& err) {
    const auto datum = datum_from_config(config);
    const bool lifting = config.lift && motive_spec(datum).w == 1;
    if (config.lift) apply_lift(records, motive_spec(datum), err);
    std::vector<PrimeClass> skipped;
    if (config.show_skipped) skipped = skipped_primes(datum, config.limit);
    return with_output(config, out, err,
                       [&](std::ostream& os) { write_records(os, config.format, lifting, records, skipped); });
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << "\n";
        return internal_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return internal_error;
    }
}

}  // namespace

LiftResult lift_weight_one(std::uint64_t h, std::uint64_t p, int r, int weight) {
    if (weight != 1) throw DatumError("integer lifting needs weight 1, got " + std::to_string(weight));
    LiftResult out;
    // |a| <= r sqrt(p)  <=>  a^2 <= r^2 p
    const __int128 bound2 = static_cast<__int128>(r) * r * static_cast<__int128>(p);
    const auto reach = static_cast<std::int64_t>(std::ceil(r * std::sqrt(static_cast<double>(p)))) + 1;
    const auto pp = static_cast<std::int64_t>(p);
    const auto hh = static_cast<std::int64_t>(h % p);
    std::int64_t a = hh - ((hh + reach) / pp) * pp;
    for (; a <= reach; a += pp)
        if (static_cast<__int128>(a) * a <= bound2) out.candidates.push_back(a);
    if (static_cast<__int128>(p) > 4 * static_cast<__int128>(r) * r && out.candidates.size() == 1)
        out.value = out.candidates.front();
    return out;
}

HypergeometricDatum datum_from_config(const RunConfig& config) {
    const bool fractions = !config.alpha.empty() || !config.beta.empty();
    const bool cyclotomic = !config.cyclo_a.empty() || !config.cyclo_b.empty();
    if (fractions == cyclotomic)
        throw DatumError("give exactly one of --alpha/--beta or --cyclo-a/--cyclo-b");
    if (fractions) return normalize(config.alpha, config.beta, config.z);
    auto [alpha, beta] = from_cyclotomic(config.cyclo_a, config.cyclo_b);
    return normalize(std::move(alpha), std::move(beta), config.z);
}

std::vector<TraceRecord> compute_records(const RunConfig& config) {
    const auto datum = datum_from_config(config);
    std::vector<TraceRecord> out;
    for (const auto& t : traces(datum, config.limit, trace_options(config))) out.push_back({t.p, t.h, {}, t.source});
    return out;
}

std::vector<TraceRecord> oracle_records(const RunConfig& config) {
    const auto datum = datum_from_config(config);
    std::vector<TraceRecord> out;
    for (auto p : primes_up_to(config.limit))
        if (is_good(datum, p)) out.push_back({p, trace_mod_p_oracle(datum, p), {}, TraceSource::oracle});
    return out;
}

std::string_view to_string(TraceSource source) {
    switch (source) {
        case TraceSource::amortized: return "amortized";
        case TraceSource::oracle_fallback: return "oracle-fallback";
        case TraceSource::oracle: return "oracle";
    }
    return "unknown";
}

void write_records(std::ostream& os, Format format, bool with_lift, const std::vector<TraceRecord>& records,
                   const std::vector<PrimeClass>& skipped) {
    if (format == Format::csv) os << (with_lift ? "p,h,a\n" : "p,h\n");
    auto rec = records.begin();
    auto skip = skipped.begin();
    while (rec != records.end() || skip != skipped.end()) {
        if (skip != skipped.end() && (rec == records.end() || skip->p < rec->p)) {
            if (format == Format::csv)
                os << "# skipped " << skip->p << " " << to_string(skip->kind) << "\n";
            else
                os << nlohmann::json{{"p", skip->p}, {"skipped", to_string(skip->kind)}}.dump() << "\n";
            ++skip;
            continue;
        }
        if (format == Format::csv) {
            os << rec->p << "," << rec->h;
            if (with_lift) {
                os << ",";
                if (rec->a) os << *rec->a;
            }
            os << "\n";
        } else {
            nlohmann::json j{{"p", rec->p}, {"h", rec->h}, {"a", nullptr}, {"source", to_string(rec->source)}};
            if (rec->a) j["a"] = *rec->a;
            os << j.dump() << "\n";
        }
        ++rec;
    }
}

std::vector<TraceRecord> read_records(std::istream& is, Format format) {
    std::vector<TraceRecord> out;
    std::string line;
    bool header = format == Format::csv;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (format == Format::csv) {
            if (header) {
                header = false;
                continue;
            }
            if (line.front() == '#') continue;
            auto fields = line;
            std::vector<std::string> parts;
            std::stringstream ss(fields);
            std::string item;
            while (std::getline(ss, item, ',')) parts.push_back(item);
            if (parts.size() < 2) throw std::invalid_argument("malformed csv line: " + line);
            TraceRecord rec;
            rec.p = std::stoull(parts[0]);
            rec.h = std::stoull(parts[1]);
            if (parts.size() > 2 && !parts[2].empty()) rec.a = std::stoll(parts[2]);
            out.push_back(rec);
        } else {
            auto j = nlohmann::json::parse(line);
            if (j.contains("skipped")) continue;
            TraceRecord rec;
            rec.p = j.at("p").get<std::uint64_t>();
            rec.h = j.at("h").get<std::uint64_t>();
            if (!j.at("a").is_null()) rec.a = j.at("a").get<std::int64_t>();
            const auto source = j.at("source").get<std::string>();
            rec.source = source == "oracle" ? TraceSource::oracle
                         : source == "oracle-fallback" ? TraceSource::oracle_fallback
                                                        : TraceSource::amortized;
            out.push_back(rec);
        }
    }
    return out;
}

std::vector<BenchRow> run_bench(const HypergeometricDatum& datum, const std::vector<std::uint64_t>& limits,
                                std::uint64_t oracle_cutoff, unsigned repeats, const TraceOptions& options) {
    repeats = std::max(repeats, 1u);
    std::vector<BenchRow> rows;
    for (auto X : limits) {
        BenchRow row;
        row.X = X;
        if (X <= oracle_cutoff) row.oracle_seconds = 0.0;
        rows.push_back(row);
    }
    // Repeats sweep all limits in turn so that slow drift in machine speed
    // affects every limit alike.
    for (unsigned k = 0; k < repeats; ++k) {
        for (auto& row : rows) {
            auto start = std::chrono::steady_clock::now();
            auto result = traces(datum, row.X, options);
            row.amortized_seconds += seconds_since(start);
            if (!row.oracle_seconds) continue;
            start = std::chrono::steady_clock::now();
            std::uint64_t checksum = 0;
            for (auto p : primes_up_to(row.X))
                if (is_good(datum, p)) checksum += trace_mod_p_oracle(datum, p);
            *row.oracle_seconds += seconds_since(start);
            sink = checksum;
        }
    }
    for (auto& row : rows) {
        row.amortized_seconds /= repeats;
        if (row.oracle_seconds) *row.oracle_seconds /= repeats;
    }
    return rows;
}

int cmd_compute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return emit(config, compute_records(config), out, err); });
}

int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return emit(config, oracle_records(config), out, err); });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto datum = datum_from_config(config);
        const auto records = compute_records(config);
        std::size_t checked = 0;
        for (const auto& rec : records) {
            const auto expected = trace_mod_p_oracle(datum, rec.p);
            if (expected != rec.h) {
                err << "mismatch at p = " << rec.p << ": amortized h = " << rec.h << ", oracle h = " << expected
                    << "\n";
                return static_cast<int>(verify_mismatch);
            }
            ++checked;
        }
        out << "verified " << checked << " good primes up to " << config.limit << "\n";
        return static_cast<int>(ok);
    });
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto datum = datum_from_config(config);
        auto limits = config.bench_limits;
        if (limits.empty())
            for (int e = 10; e <= 18; ++e) limits.push_back(std::uint64_t{1} << e);
        const auto rows = run_bench(datum, limits, config.oracle_cutoff, config.repeats, trace_options(config));
        const bool oracle_column = config.oracle_cutoff > 0;
        return with_output(config, out, err, [&](std::ostream& os) {
            os << (oracle_column ? "X,amortized_s,oracle_s\n" : "X,amortized_s\n");
            for (const auto& row : rows) {
                os << row.X << "," << row.amortized_seconds;
                if (oracle_column) {
                    os << ",";
                    if (row.oracle_seconds) os << *row.oracle_seconds;
                }
                os << "\n";
            }
        });
    });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mod-p Frobenius traces of hypergeometric motives for all primes up to a bound"};
    app.require_subcommand(1);

    RunConfig config;
    std::string alpha, beta, cyclo_a, cyclo_b, z, format = "csv", limits;
    int min_log2 = 10, max_log2 = 18;
    std::optional<std::size_t> corrupt_sigma;

    auto add_common = [&](CLI::App* sub, bool needs_limit) {
        sub->add_option("--alpha", alpha, "alpha as comma-separated fractions, e.g. 1/4,1/2,1/2,3/4");
        sub->add_option("--beta", beta, "beta as comma-separated fractions");
        sub->add_option("--cyclo-a", cyclo_a, "cyclotomic indices for alpha, e.g. 4,2,2");
        sub->add_option("--cyclo-b", cyclo_b, "cyclotomic indices for beta, e.g. 3,3");
        sub->add_option("--z", z, "specialization point, e.g. 1/5")->required();
        auto* lim = sub->add_option("--limit", config.limit, "compute for primes p <= limit");
        if (needs_limit) lim->required();
        sub->add_option("--threads", config.threads, "worker threads (0 = all cores)");
        sub->add_option("--forest-bits", config.forest_bits, "bit budget per remainder-forest chunk");
        sub->add_option("--output", config.output, "output path (default stdout)");
        sub->add_option("--corrupt-sigma", corrupt_sigma, "testing: flip sigma on this interval")->group("");
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
        sub->add_flag("--lift", config.lift, "lift weight-1 traces to integers");
        sub->add_flag("--show-skipped", config.show_skipped, "list bad and excluded primes");
    };

    auto* compute = app.add_subcommand("compute", "amortized traces for all good p <= limit");
    add_common(compute, true);
    add_output(compute);
    auto* oracle = app.add_subcommand("oracle", "per-prime direct evaluation (slow reference)");
    add_common(oracle, true);
    add_output(oracle);
    auto* verify = app.add_subcommand("verify", "compare the amortized path with the oracle");
    add_common(verify, true);
    auto* bench = app.add_subcommand("bench", "timing table, csv");
    add_common(bench, false);
    bench->add_option("--min-log2", min_log2, "smallest limit is 2^min");
    bench->add_option("--max-log2", max_log2, "largest limit is 2^max");
    bench->add_option("--limits", limits, "explicit comma-separated limits (overrides --min/max-log2)");
    bench->add_option("--oracle-cutoff", config.oracle_cutoff, "time the oracle only for X <= cutoff (0: never)");
    bench->add_option("--repeats", config.repeats, "runs averaged per limit");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }

    try {
        config.alpha = parse_fractions(alpha);
        config.beta = parse_fractions(beta);
        config.cyclo_a = parse_integers(cyclo_a);
        config.cyclo_b = parse_integers(cyclo_b);
        config.z = Rational::parse(z);
        config.format = format == "jsonl" ? Format::jsonl : Format::csv;
        config.corrupt_sigma = corrupt_sigma;
        if (!limits.empty()) {
            for (auto v : parse_integers(limits)) config.bench_limits.push_back(static_cast<std::uint64_t>(v));
        } else if (bench->parsed()) {
            for (int e = min_log2; e <= max_log2; ++e) config.bench_limits.push_back(std::uint64_t{1} << e);
        }
        if (!bench->parsed() && config.limit < 3) throw DatumError("--limit must be at least 3");
        if (config.forest_bits == 0) throw DatumError("--forest-bits must be positive");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }

    if (compute->parsed()) return cmd_compute(config, out, err);
    if (oracle->parsed()) return cmd_oracle(config, out, err);
    if (verify->parsed()) return cmd_verify(config, out, err);
    return cmd_bench(config, out, err);
}

}  // namespace hgm::cli
