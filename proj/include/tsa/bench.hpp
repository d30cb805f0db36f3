#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tsa {

// Shape of a generated contract class. Non-constructor methods split into
// toggle pairs (acquireN enables releaseN and disables itself, releaseN
// mirrors it; k pairs make the automaton 2^k + 1 states), self-enabling chain
// steps, and unannotated free methods for the remainder.
struct ContractSpec {
    std::string name = "Proto";
    std::uint32_t methods = 3;
    std::uint32_t toggle_pairs = 0;
    std::uint32_t chain_length = 0;
    std::uint64_t seed = 0;
};

std::string gen_contract(const ContractSpec &spec);

// Shape of a generated client program: contract classes, composition_depth
// layers of wrapper classes, and one driver function whose call sequence is
// valid by construction. Densities are decorations (a state-preserving call
// inside an if or loop) per generated call.
struct ClientSpec {
    std::uint32_t loc_target = 100;
    std::uint32_t num_base_classes = 1;
    std::uint32_t composition_depth = 0;
    double branch_density = 0.0;
    double loop_density = 0.0;
    std::uint64_t seed = 0;
    bool inject_bug = false;
};

struct GeneratedClient {
    std::string text;
    std::uint32_t loc = 0;
    int injected_line = -1; // line of the planted violation, -1 when none
};

GeneratedClient gen_client(const ClientSpec &client, const ContractSpec &contract);

struct BenchCell {
    std::string id;
    ContractSpec contract;
    ClientSpec client;
    int runs = 5;
};

// Cells from a matrix file: "[cell-id]" section headers followed by key=value
// lines (#-comments and blank lines ignored).
std::vector<BenchCell> parse_matrix(const std::string &text);

struct BenchOutput {
    std::string results_csv;
    std::string usability_csv;
};

// Times both analyzers on every cell (median-friendly per-run rows, one
// warmup, inner repetitions calibrated so a measurement spans at least a few
// milliseconds). Parsing and name resolution are excluded from both timings;
// automaton expansion is included for the dfa analyzer only, since paying for
// expansion is intrinsic to that approach. A state-space blowup in the dfa
// analyzer is recorded as wall_ms = -1 with the bfa rows kept.
BenchOutput run_bench(const std::vector<BenchCell> &cells);

} // namespace tsa
