#include "catcomm/cli.hpp"

#include <bit>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "catcomm/bounds.hpp"
#include "catcomm/core.hpp"
#include "catcomm/protocols.hpp"
#include "catcomm/qsim.hpp"
#include "catcomm/rng.hpp"

namespace catcomm {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const Json& report, const RunConfig& cfg, std::ostream& out) {
    std::string text;
    if (cfg.format == "json") {
        text = report.dump(2);
        text += '\n';
    } else if (cfg.format == "text") {
        std::ostringstream os;
        os << report["command"].get<std::string>() << " report\n";
        for (const auto& [key, value] : report.items()) {
            if (key == "schema" || key == "command") continue;
            os << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
               << "\n";
        }
        text = os.str();
    } else {
        throw UsageError("format '" + cfg.format + "' is not supported by this command");
    }
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) throw UsageError("cannot open output file '" + cfg.out + "'");
        file << text;
    }
}

Json report_header(const RunConfig& cfg) {
    Json j;
    j["schema"] = 1;
    j["command"] = cfg.command;
    return j;
}

// --- simulate -------------------------------------------------------------------

bool is_gm_protocol(const std::string& name) {
    return name == "oneround-gm" || name == "entangled-gm";
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    std::unique_ptr<Protocol> protocol;
    try {
        protocol = make_protocol(cfg.arg, cfg.k, cfg.n, cfg.m);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    Json report = report_header(cfg);
    report["protocol"] = cfg.arg;
    if (is_gm_protocol(cfg.arg)) {
        report["m"] = cfg.m;
    } else {
        report["k"] = cfg.k;
        report["n"] = cfg.n;
    }
    report["seed"] = cfg.seed;

    std::uint64_t runs = 0, correct = 0, unanimous = 0, cost_mismatches = 0;
    const int expected_cost = protocol->expected_cost();
    Json sample_runs = Json::array();
    Json counterexample;

    auto record = [&](const ProtocolInput& input, std::uint64_t run_seed) {
        const ProtocolRun r = run(*protocol, input, run_seed, RunChecks::Skip);
        ++runs;
        const bool all_agree =
            std::all_of(r.outputs.begin(), r.outputs.end(),
                        [&](int o) { return o == r.outputs.front(); });
        const bool right = all_agree && r.outputs.front() == protocol->target(input);
        if (all_agree) ++unanimous;
        if (right) ++correct;
        if (r.transcript.total_bits() != expected_cost) ++cost_mismatches;
        if (sample_runs.size() < 3) sample_runs.push_back(r.to_json());
        if ((!right || r.transcript.total_bits() != expected_cost) && counterexample.is_null())
            counterexample = r.to_json();
    };

    if (cfg.exhaustive) {
        const std::uint64_t budget = cfg.budget ? cfg.budget : kDefaultEnumerationBudget;
        if (is_gm_protocol(cfg.arg)) {
            std::uint64_t i = 0;
            for_each_valid_triple_vector(
                cfg.m, [&](const TripleVector& v) { record(v, derive_seed(cfg.seed, i++)); },
                budget);
        } else {
            std::uint64_t i = 0;
            for_each_valid_input(
                cfg.k, cfg.n, [&](const FInput& f) { record(f, derive_seed(cfg.seed, i++)); },
                budget);
        }
        report["exhaustive"] = true;
    } else {
        for (std::uint64_t i = 0; i < cfg.samples; ++i) {
            const std::uint64_t run_seed = derive_seed(cfg.seed, i);
            if (is_gm_protocol(cfg.arg))
                record(sample_valid_triple_vector(cfg.m, run_seed), run_seed);
            else
                record(sample_valid_input(cfg.k, cfg.n, run_seed), run_seed);
        }
    }

    const bool pass = correct == runs && cost_mismatches == 0;
    report["runs"] = runs;
    report["expected_cost"] = expected_cost;
    report["cost_exact"] = cost_mismatches == 0;
    report["correctness_rate"] = runs ? static_cast<double>(correct) / static_cast<double>(runs) : 0.0;
    report["unanimity_rate"] = runs ? static_cast<double>(unanimous) / static_cast<double>(runs) : 0.0;
    report["passed"] = pass;
    report["sample_runs"] = std::move(sample_runs);
    if (!pass) report["counterexample"] = std::move(counterexample);
    emit(report, cfg, out);
    return pass ? kExitPass : kExitCheckFailed;
}

// --- verify ---------------------------------------------------------------------

Json verify_kneser_suite(int max_order, std::uint64_t budget, bool& pass) {
    if (max_order < 2 || max_order > 20)
        throw UsageError("verify kneser: --max-order must be in [2,20]");
    Json j;
    j["suite"] = "kneser";
    std::uint64_t pairs = 0;
    for (int order = 2; order <= max_order; ++order) {
        const std::uint64_t subsets = (std::uint64_t{1} << order) - 1;
        pairs += subsets * subsets;
    }
    if (pairs > budget)
        throw BudgetExceeded("verify kneser: " + std::to_string(pairs) +
                             " subset pairs exceed budget " + std::to_string(budget));
    std::uint64_t checked = 0;
    for (int order = 2; order <= max_order; ++order) {
        const std::uint64_t subsets = (std::uint64_t{1} << order) - 1;
        for (std::uint64_t a = 1; a <= subsets; ++a)
            for (std::uint64_t b = 1; b <= subsets; ++b) {
                ++checked;
                if (!verify_kneser(CyclicSubset(order, a), CyclicSubset(order, b))) {
                    pass = false;
                    j["counterexample"] = {{"order", order}, {"a", a}, {"b", b}};
                    j["pairs_checked"] = checked;
                    return j;
                }
            }
    }
    j["max_order"] = max_order;
    j["pairs_checked"] = checked;
    return j;
}

Json verify_rectangles_suite(int n, int k, std::uint64_t budget, bool& pass) {
    if (n < 1 || n > 6 || k < 2 || k > 8)
        throw UsageError("verify rectangles: need n in [1,6] and k in [2,8]");
    Json j;
    j["suite"] = "rectangles";
    j["n"] = n;
    j["k"] = k;
    const BigRational r = cardinality_bound(n, k);
    long double candidates = 1.0L;
    for (int i = 0; i < k; ++i)
        candidates *= static_cast<long double>((std::uint64_t{1} << (1 << n)) - 1);
    if (candidates > static_cast<long double>(budget))
        throw BudgetExceeded("verify rectangles: candidate space exceeds budget");

    std::uint64_t checked = 0, mono_with_valid_count = 0, max_size = 0;
    const std::uint64_t subsets = (std::uint64_t{1} << (1 << n)) - 1;
    std::vector<std::uint64_t> parts(static_cast<std::size_t>(k), 1);
    while (true) {
        Rectangle rect(n, k, parts);
        ++checked;
        const MonoClass cls = classify_rectangle_sumset(rect);
        if (monochromatic_with_valid(cls)) {
            ++mono_with_valid_count;
            const std::uint64_t size = rect.cardinality();
            max_size = std::max(max_size, size);
            if (BigRational(BigInt(size)) > r) {
                pass = false;
                j["counterexample"] = {{"parts", parts}, {"size", size}};
                return j;
            }
        }
        int i = k - 1;
        while (i >= 0 && parts[static_cast<std::size_t>(i)] == subsets) {
            parts[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) break;
        ++parts[static_cast<std::size_t>(i)];
    }
    j["r"] = rational_to_string(r);
    j["rectangles_checked"] = checked;
    j["monochromatic_with_valid"] = mono_with_valid_count;
    j["max_size"] = max_size;
    return j;
}

Json verify_search_suite(int budget_bits, bool& pass) {
    Json j;
    j["suite"] = "search";
    const OneRoundSearchResult result = search_oneround_gm(1, budget_bits);
    j["result"] = result.to_json();
    const bool expect_feasible = budget_bits >= 4;
    j["expected_feasible"] = expect_feasible;
    if (result.feasible != expect_feasible) {
        pass = false;
        return j;
    }
    if (result.feasible) {
        std::uint64_t distinguishable = 0;
        for (const auto& w : result.witnesses)
            if (distinguishability_check(w)) ++distinguishable;
        j["witnesses_checked"] = result.witnesses.size();
        j["witnesses_distinguishable"] = distinguishable;
        if (distinguishable != result.witnesses.size()) pass = false;

        OneRoundProtocolTable reference = reference_oneround_table(1);
        const bool ref_ok = table_computes_gm(reference) && distinguishability_check(reference);
        j["reference_protocol_verified"] = ref_ok;
        if (!ref_ok) pass = false;
    }
    return j;
}

Json verify_parity_suite(std::uint64_t samples, std::uint64_t seed, bool& pass) {
    Json j;
    j["suite"] = "parity";
    std::uint64_t checked = 0;
    // pipeline parity equals the target on every valid input
    for (int k = 2; k <= 6 && pass; ++k)
        for (int n = 1; n <= 4 && pass; ++n) {
            auto check_one = [&](const FInput& input, std::uint64_t run_seed) {
                CatRegister reg = make_cat_state(k, n);
                for (int p = 1; p <= k; ++p)
                    reg.apply_phase(p, input.values[static_cast<std::size_t>(p - 1)]);
                reg.apply_hadamard_all();
                const MeasurementRecord rec = reg.measure(run_seed);
                ++checked;
                if (rec.parity() != f_big(input)) {
                    pass = false;
                    j["counterexample"] = {{"k", k}, {"n", n}, {"input", input.values},
                                           {"seed", run_seed}};
                }
            };
            if (n * k <= 20) {
                std::uint64_t i = 0;
                for_each_valid_input(k, n, [&](const FInput& input) {
                    if (pass) check_one(input, derive_seed(seed, i++));
                });
            } else {
                for (std::uint64_t i = 0; i < samples && pass; ++i) {
                    const std::uint64_t s = derive_seed(seed, i);
                    check_one(sample_valid_input(k, n, s), s);
                }
            }
        }
    j["parity_checks"] = checked;

    // exact and floating outcome distributions agree
    double worst_tv = 0.0;
    for (int k = 2; k <= 10 && pass; ++k)
        for (int target = 0; target <= 1; ++target) {
            CatRegister reg = make_cat_state(k, 2, Backend::Both);
            reg.apply_phase(1, static_cast<std::uint64_t>(2 * target));
            for (int p = 2; p <= k; ++p) reg.apply_phase(p, 0);
            reg.apply_hadamard_all();
            const auto exact = reg.exact_outcome_distribution();
            const auto floating = reg.floating_outcome_distribution();
            double tv = 0.0;
            for (std::size_t i = 0; i < exact.size(); ++i)
                tv += std::abs(exact[i] - floating[i]);
            tv /= 2.0;
            worst_tv = std::max(worst_tv, tv);
        }
    j["backend_tv_distance_max"] = worst_tv;
    if (worst_tv > 1e-9) pass = false;
    return j;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    Json report = report_header(cfg);
    report["seed"] = cfg.seed;
    bool pass = true;
    Json suites = Json::array();

    const auto want = [&](const std::string& name) {
        return cfg.arg == name || cfg.arg == "all";
    };
    if (!(cfg.arg == "all" || cfg.arg == "kneser" || cfg.arg == "rectangles" ||
          cfg.arg == "search" || cfg.arg == "parity"))
        throw UsageError("unknown suite '" + cfg.arg +
                         "' (expected kneser|rectangles|search|parity|all)");

    if (want("kneser")) {
        const std::uint64_t budget = cfg.budget ? cfg.budget : kDefaultSubsetPairBudget;
        suites.push_back(verify_kneser_suite(cfg.max_order, budget, pass));
    }
    if (want("rectangles")) {
        const std::uint64_t budget = cfg.budget ? cfg.budget : kDefaultRectangleBudget;
        if (cfg.arg == "all") {
            for (const auto& [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}})
                suites.push_back(verify_rectangles_suite(n, k, budget, pass));
        } else {
            suites.push_back(verify_rectangles_suite(cfg.n, cfg.k, budget, pass));
        }
    }
    if (want("search")) {
        if (cfg.arg == "all") {
            for (int b = 1; b <= 4; ++b) suites.push_back(verify_search_suite(b, pass));
        } else {
            const int budget_bits = cfg.budget ? static_cast<int>(cfg.budget) : 3;
            suites.push_back(verify_search_suite(budget_bits, pass));
        }
    }
    if (want("parity")) suites.push_back(verify_parity_suite(cfg.samples, cfg.seed, pass));

    report["suites"] = std::move(suites);
    report["passed"] = pass;
    emit(report, cfg, out);
    return pass ? kExitPass : kExitCheckFailed;
}

// --- bounds ---------------------------------------------------------------------

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
    BoundReport rep = lower_bound_bits(cfg.n, cfg.k);
    Json report = report_header(cfg);
    Json body = rep.to_json();
    if (cfg.max_rect) {
        const std::uint64_t budget = cfg.budget ? cfg.budget : kDefaultRectangleBudget;
        const MaxRectangleResult mr = max_monochromatic_rectangle(cfg.n, cfg.k, budget, cfg.seed);
        body["observed_max"] = mr.size;
        body["observed_max_exhaustive"] = mr.exhaustive;
        if (!mr.exhaustive) body["observed_max_label"] = "lower_bound_on_max";
    }
    for (auto& [key, value] : body.items()) report[key] = value;
    emit(report, cfg, out);
    return kExitPass;
}

// --- table ----------------------------------------------------------------------

Json table_rows(const RunConfig& cfg) {
    Json rows = Json::array();
    for (int k = cfg.kmin; k <= cfg.kmax; ++k) {
        const int d = highbits_width(k);
        for (int n = cfg.nmin; n <= cfg.nmax; ++n) {
            const BoundReport rep = lower_bound_bits(n, k);
            const int q = k;
            const int upper = n >= d ? upper_bound_bits(k) : naive_upper_bound_bits(n, k);
            const long lower = ceil_log2_rational(rep.t);
            Json row;
            row["k"] = k;
            row["n"] = n;
            row["q"] = q;
            row["upper"] = upper;
            row["lower"] = lower;
            row["ratio"] = static_cast<double>(upper) / static_cast<double>(q);
            row["eq8_applies"] = n >= static_cast<int>(std::bit_width(static_cast<unsigned>(k - 1)));
            row["holds"] = rep.holds;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string cell_text(const Json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

int cmd_table(const RunConfig& cfg, std::ostream& out) {
    if (cfg.kmin < 2 || cfg.kmin > cfg.kmax || cfg.nmin < 1 || cfg.nmin > cfg.nmax)
        throw UsageError("table: need 2 <= kmin <= kmax and 1 <= nmin <= nmax");
    if (cfg.kmax > 1024 || cfg.nmax > 64)
        throw UsageError("table: grid capped at kmax <= 1024, nmax <= 64");
    Json rows = table_rows(cfg);

    std::string text;
    if (cfg.format == "json") {
        Json report = report_header(cfg);
        report["rows"] = std::move(rows);
        emit(report, cfg, out);
        return kExitPass;
    }
    const std::vector<std::string> columns = {"k",     "n",     "q",           "upper",
                                              "lower", "ratio", "eq8_applies", "holds"};
    std::ostringstream os;
    if (cfg.format == "csv") {
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << (c ? "," : "") << columns[c];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < columns.size(); ++c)
                os << (c ? "," : "") << cell_text(row[columns[c]]);
            os << "\n";
        }
    } else if (cfg.format == "text") {
        os << std::left;
        for (const auto& col : columns) os << std::setw(13) << col;
        os << "\n";
        for (const auto& row : rows) {
            for (const auto& col : columns) {
                if (col == "ratio") {
                    std::ostringstream cell;
                    cell << std::fixed << std::setprecision(3) << row[col].get<double>();
                    os << std::setw(13) << cell.str();
                } else {
                    os << std::setw(13) << cell_text(row[col]);
                }
            }
            os << "\n";
        }
    } else {
        throw UsageError("table: format must be json, csv or text");
    }
    text = os.str();
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) throw UsageError("cannot open output file '" + cfg.out + "'");
        file << text;
    }
    return kExitPass;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"broadcast-protocol laboratory for promise-sum functions"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", cfg.seed, "top-level seed; per-run seeds derive from it");
        cmd->add_option("--format", cfg.format, "json|text (table also: csv)");
        cmd->add_option("--out", cfg.out, "write the report to this file instead of stdout");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run a bundled protocol on valid inputs");
    simulate->add_option("protocol", cfg.arg,
                         "entangled-f|naive-f|highbits-f|oneround-gm|entangled-gm")
        ->required();
    simulate->add_option("--k", cfg.k, "party count");
    simulate->add_option("--n", cfg.n, "bits per input");
    simulate->add_option("--m", cfg.m, "parallel instances (gm protocols)");
    simulate->add_option("--samples", cfg.samples, "number of sampled valid inputs");
    simulate->add_flag("--exhaustive", cfg.exhaustive, "enumerate all valid inputs instead");
    simulate->add_option("--budget", cfg.budget, "enumeration budget override");
    add_common(simulate);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", cfg.arg, "kneser|rectangles|search|parity|all")->required();
    verify->add_option("--max-order", cfg.max_order, "kneser: largest group order");
    verify->add_option("--n", cfg.n, "rectangles: bits per input");
    verify->add_option("--k", cfg.k, "rectangles: party count");
    verify->add_option("--budget", cfg.budget,
                       "suite budget (kneser/rectangles) or bit budget (search)");
    verify->add_option("--samples", cfg.samples, "parity: samples per non-exhaustive cell");
    add_common(verify);

    CLI::App* bounds = app.add_subcommand("bounds", "rectangle-count lower bound report");
    bounds->add_option("--k", cfg.k, "party count")->required();
    bounds->add_option("--n", cfg.n, "bits per input")->required();
    bounds->add_flag("--max-rect", cfg.max_rect, "attach the observed max rectangle size");
    bounds->add_option("--budget", cfg.budget, "rectangle enumeration budget");
    add_common(bounds);

    CLI::App* table = app.add_subcommand("table", "cost separation table across (k, n)");
    table->add_option("--kmin", cfg.kmin, "smallest party count");
    table->add_option("--kmax", cfg.kmax, "largest party count");
    table->add_option("--nmin", cfg.nmin, "smallest input width");
    table->add_option("--nmax", cfg.nmax, "largest input width");
    add_common(table);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            cfg.command = "simulate";
            return cmd_simulate(cfg, out);
        }
        if (verify->parsed()) {
            cfg.command = "verify";
            return cmd_verify(cfg, out);
        }
        if (bounds->parsed()) {
            cfg.command = "bounds";
            return cmd_bounds(cfg, out);
        }
        cfg.command = "table";
        return cmd_table(cfg, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BudgetExceeded& e) {
        err << "budget error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ProtocolBroken& e) {
        err << "check failed: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

} // namespace catcomm
