#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tsa/analysis.hpp"
#include "tsa/automata.hpp"
#include "tsa/bench.hpp"
#include "tsa/contracts.hpp"
#include "tsa/error.hpp"
#include "tsa/parser.hpp"
#include "tsa/resolve.hpp"

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) tsa::fail(tsa::ErrorKind::usage, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) tsa::fail(tsa::ErrorKind::usage, "cannot write " + path);
    out << text;
}

tsa::ProgramInfo load_program(const std::vector<std::string> &files) {
    tsa::Program merged;
    bool first = true;
    for (const auto &f : files) {
        tsa::Program p = tsa::parse_program(read_file(f), f);
        if (first) {
            merged = std::move(p);
            first = false;
        } else {
            tsa::merge_programs(merged, std::move(p));
        }
    }
    return tsa::resolve_program(std::move(merged));
}

// The file must hold exactly one annotated class (helper classes such as plain
// value types may accompany it).
const tsa::ContractMap &single_contract(const tsa::ProgramInfo &info, const std::string &file) {
    if (info.contracts.size() != 1)
        tsa::fail(tsa::ErrorKind::usage, file + " must define exactly one annotated class, found " +
                                             std::to_string(info.contracts.size()));
    return info.contracts.begin()->second;
}

int cmd_check(const std::vector<std::string> &files, const std::string &format) {
    tsa::ProgramInfo info = load_program(files);
    tsa::AnalysisResult result = tsa::analyze_program(info);
    for (const auto &w : result.warnings) {
        if (format == "json") {
            nlohmann::json obj{
                {"file", w.loc.file},
                {"line", w.loc.line},
                {"col", w.loc.col},
                {"callee_class", w.callee_class},
                {"callee_method", w.callee_method},
                {"path", w.path.str()},
                {"required", w.required},
            };
            std::cout << obj.dump() << "\n";
        } else {
            std::cout << w.str() << "\n";
        }
    }
    return result.warnings.empty() ? 0 : 1;
}

int cmd_expand_dfa(const std::string &file, bool minimize, std::size_t state_limit) {
    tsa::ProgramInfo info = load_program({file});
    const tsa::ContractMap &contract = single_contract(info, file);
    tsa::ExplicitDfa dfa = tsa::expand_dfa(contract, state_limit);
    if (minimize) {
        tsa::MinimizedDfa min = tsa::minimize_dfa(dfa);
        std::cout << tsa::dump_minimized(min);
        std::cout << "states: " << min.num_states << "\n";
    } else {
        std::cout << tsa::dump_dfa(dfa);
        std::cout << "states: " << dfa.num_states() << "\n";
    }
    return 0;
}

int cmd_subsume(const std::string &sub_file, const std::string &super_file) {
    tsa::ProgramInfo sub_info = load_program({sub_file});
    tsa::ProgramInfo super_info = load_program({super_file});
    const tsa::ContractMap &sub = single_contract(sub_info, sub_file);
    const tsa::ContractMap &super = single_contract(super_info, super_file);
    tsa::SubsumeResult result = tsa::subsumes(sub, super);
    if (result.subsumes) {
        std::cout << "subsumes\n";
        return 0;
    }
    std::cout << "does-not-subsume (first failing method: " << result.failing_method << ")\n";
    return 1;
}

// gen shares the matrix key=value vocabulary so specs mean the same thing on
// the command line and in a bench matrix.
tsa::BenchCell cell_from_args(const std::vector<std::string> &pairs) {
    std::string text = "[cli]\n";
    for (const auto &p : pairs) text += p + "\n";
    std::vector<tsa::BenchCell> cells = tsa::parse_matrix(text);
    return cells.at(0);
}

int cmd_gen_contract(const std::vector<std::string> &pairs, const std::string &out) {
    tsa::BenchCell cell = cell_from_args(pairs);
    std::string text = tsa::gen_contract(cell.contract);
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    return 0;
}

int cmd_gen_client(const std::vector<std::string> &pairs, bool inject_bug,
                   const std::string &out) {
    tsa::BenchCell cell = cell_from_args(pairs);
    if (inject_bug) cell.client.inject_bug = true;
    tsa::GeneratedClient client = tsa::gen_client(cell.client, cell.contract);
    if (client.injected_line >= 0)
        std::cerr << "injected violation at line " << client.injected_line << "\n";
    if (out.empty())
        std::cout << client.text;
    else
        write_file(out, client.text);
    return 0;
}

std::string usability_path(const std::string &out) {
    auto dot = out.rfind('.');
    auto slash = out.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out + "_usability.csv";
    return out.substr(0, dot) + "_usability" + out.substr(dot);
}

int cmd_bench(const std::string &matrix_file, const std::string &out,
              std::string usability_out) {
    std::vector<tsa::BenchCell> cells = tsa::parse_matrix(read_file(matrix_file));
    tsa::BenchOutput output = tsa::run_bench(cells);
    write_file(out, output.results_csv);
    if (usability_out.empty()) usability_out = usability_path(out);
    write_file(usability_out, output.usability_csv);
    std::cerr << cells.size() << " cells -> " << out << ", " << usability_out << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"tsa: typestate contract checker"};
    app.require_subcommand(1);

    auto *check = app.add_subcommand("check", "Analyze client code against contracts");
    std::vector<std::string> check_files;
    std::string check_format = "text";
    check->add_option("files", check_files, "Source files (contracts and clients)")->required();
    check->add_option("--format", check_format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto *expand = app.add_subcommand("expand-dfa", "Expand a contract to its explicit automaton");
    std::string expand_file;
    bool expand_minimize = false;
    std::size_t expand_limit = tsa::default_state_limit;
    expand->add_option("file", expand_file, "Contract file")->required();
    expand->add_flag("--minimize", expand_minimize, "Minimize before printing");
    expand->add_option("--state-limit", expand_limit, "Abort expansion past this many states");

    auto *subsume = app.add_subcommand("subsume", "Check contract refinement");
    std::string sub_file;
    std::string super_file;
    subsume->add_option("sub", sub_file, "Refining contract file")->required();
    subsume->add_option("super", super_file, "Refined contract file")->required();

    auto *gen = app.add_subcommand("gen", "Generate benchmark inputs");
    gen->require_subcommand(1);
    auto *gen_contract = gen->add_subcommand("contract", "Generate a contract class");
    std::vector<std::string> contract_pairs;
    std::string contract_out;
    gen_contract->add_option("spec", contract_pairs, "key=value settings");
    gen_contract->add_option("--out", contract_out, "Write to file instead of stdout");
    auto *gen_client = gen->add_subcommand("client", "Generate a client program");
    std::vector<std::string> client_pairs;
    std::string client_out;
    bool client_inject = false;
    gen_client->add_option("spec", client_pairs, "key=value settings");
    gen_client->add_option("--out", client_out, "Write to file instead of stdout");
    gen_client->add_flag("--inject-bug", client_inject, "Plant one ordering violation");

    auto *bench = app.add_subcommand("bench", "Time both analyzers over a cell matrix");
    std::string bench_matrix;
    std::string bench_out;
    std::string bench_usability;
    bench->add_option("--matrix", bench_matrix, "Matrix file")->required();
    bench->add_option("--out", bench_out, "Results CSV path")->required();
    bench->add_option("--usability-out", bench_usability,
                      "Usability CSV path (default: derived from --out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return cmd_check(check_files, check_format);
        if (expand->parsed()) return cmd_expand_dfa(expand_file, expand_minimize, expand_limit);
        if (subsume->parsed()) return cmd_subsume(sub_file, super_file);
        if (gen_contract->parsed()) return cmd_gen_contract(contract_pairs, contract_out);
        if (gen_client->parsed()) return cmd_gen_client(client_pairs, client_inject, client_out);
        if (bench->parsed()) return cmd_bench(bench_matrix, bench_out, bench_usability);
    } catch (const tsa::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
