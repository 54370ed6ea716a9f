#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace catcomm {

// Command-line frontend. Commands: simulate, verify, bounds, table.
// Exit codes: 0 = all checks pass, 1 = a mathematical check failed
// (counterexample included in the report), 2 = usage or budget error.
//
// All randomness fans out from the single --seed via derive_seed, so repeated
// invocations with the same configuration produce byte-identical JSON reports.

struct RunConfig {
    std::string command;
    std::string arg; // protocol name (simulate) or suite name (verify)

    int k = 3;
    int n = 2;
    int m = 1;
    std::uint64_t seed = 1;
    std::uint64_t samples = 200;
    bool exhaustive = false;

    int max_order = 10;        // verify kneser
    std::uint64_t budget = 0;  // 0 = command default
    bool max_rect = false;     // bounds: attach observed max rectangle

    int kmin = 2, kmax = 16; // table ranges
    int nmin = 1, nmax = 16;

    std::string format = "json"; // json | text, plus csv for table
    std::string out;             // report path; empty = stdout
};

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace catcomm
